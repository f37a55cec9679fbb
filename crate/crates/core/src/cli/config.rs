//! INI-style run configuration.
//!
//! ```text
//! [source]
//! kind = direct            ; or bath
//!
//! [sweep]
//! g = 0.1:0.9:9            ; start:stop:count, or a single value
//! gamma_mem = 0:1:5
//! p = 0:1:11
//!
//! [output]
//! path = out.csv
//! precision = 12
//! ```
//!
//! A bath source replaces the `g` and `gamma_mem` ranges with a spectrum and
//! channel timing in `[source]`: `model = ohmic|white|tabulated`, the model's
//! parameters, and `lambda`, `tau_p`, `tau`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::bath::{ChannelTiming, SpectralModel};

pub const DEFAULT_PRECISION: usize = 12;
pub const MAX_PRECISION: usize = 17;

#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            message: message.into(),
        }
    }

    fn general(message: impl Into<String>) -> Self {
        Self {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "config line {line}: {}", self.message),
            None => write!(f, "config: {}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Inclusive, evenly spaced grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    pub fn single(x: f64) -> Self {
        Self {
            start: x,
            stop: x,
            count: 1,
        }
    }

    /// Grid points; the last one is exactly `stop`.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i == self.count - 1 {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / n
                }
            })
            .collect()
    }

    fn parse(text: &str, line: usize) -> Result<Self, ConfigError> {
        let parts: Vec<&str> = text.split(':').map(str::trim).collect();
        let number = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| ConfigError::at(line, format!("'{s}' is not a finite number")))
        };
        match parts.as_slice() {
            [x] => Ok(Self::single(number(x)?)),
            [a, b, n] => {
                let count: usize = n
                    .parse()
                    .map_err(|_| ConfigError::at(line, format!("'{n}' is not a count")))?;
                if count == 0 {
                    return Err(ConfigError::at(line, "range count must be at least 1"));
                }
                Ok(Self {
                    start: number(a)?,
                    stop: number(b)?,
                    count,
                })
            }
            _ => Err(ConfigError::at(
                line,
                format!("expected 'start:stop:count' or a single value, got '{text}'"),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    Direct,
    Bath {
        model: SpectralModel,
        timing: ChannelTiming,
    },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Sweep {
    pub g: Option<Range>,
    pub gamma_mem: Option<Range>,
    pub p: Option<Range>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub source: Source,
    pub sweep: Sweep,
    pub output_path: Option<PathBuf>,
    pub precision: usize,
}

struct Entry {
    line: usize,
    value: String,
}

type Section = BTreeMap<String, Entry>;

const SOURCE_KEYS: &[&str] = &[
    "kind",
    "model",
    "eta",
    "omega_c",
    "temperature",
    "level",
    "s0",
    "omega_max",
    "table",
    "lambda",
    "tau_p",
    "tau",
];
const SWEEP_KEYS: &[&str] = &["g", "gamma_mem", "p"];
const OUTPUT_KEYS: &[&str] = &["path", "precision"];

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::general(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, path.parent())
    }

    /// Parses config text; relative file paths resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: Option<&Path>) -> Result<Self, ConfigError> {
        let mut sections: BTreeMap<String, (usize, Section)> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw
                .split_once([';', '#'])
                .map_or(raw, |(before, _)| before)
                .trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| ConfigError::at(line, "unterminated section header"))?
                    .trim();
                if !["source", "sweep", "output"].contains(&name) {
                    return Err(ConfigError::at(line, format!("unknown section [{name}]")));
                }
                if sections.contains_key(name) {
                    return Err(ConfigError::at(line, format!("section [{name}] repeated")));
                }
                sections.insert(name.to_string(), (line, Section::new()));
                current = Some(name.to_string());
                continue;
            }
            let Some(section) = &current else {
                return Err(ConfigError::at(line, "key outside of a section"));
            };
            let (key, value) = content.split_once('=').ok_or_else(|| {
                ConfigError::at(line, format!("expected 'key = value', got '{content}'"))
            })?;
            let (key, value) = (key.trim(), value.trim());
            let allowed = match section.as_str() {
                "source" => SOURCE_KEYS,
                "sweep" => SWEEP_KEYS,
                _ => OUTPUT_KEYS,
            };
            if !allowed.contains(&key) {
                return Err(ConfigError::at(
                    line,
                    format!("unknown key '{key}' in [{section}]"),
                ));
            }
            let entries = &mut sections.get_mut(section).expect("section exists").1;
            if entries.contains_key(key) {
                return Err(ConfigError::at(line, format!("key '{key}' repeated")));
            }
            entries.insert(
                key.to_string(),
                Entry {
                    line,
                    value: value.to_string(),
                },
            );
        }

        let empty = Section::new();
        let section = |name: &str| sections.get(name).map_or(&empty, |s| &s.1);

        let sweep_sec = section("sweep");
        let range = |key: &str, lo: f64, hi: f64| -> Result<Option<Range>, ConfigError> {
            let Some(e) = sweep_sec.get(key) else {
                return Ok(None);
            };
            let r = Range::parse(&e.value, e.line)?;
            for x in [r.start, r.stop] {
                if !(lo..=hi).contains(&x) {
                    return Err(ConfigError::at(
                        e.line,
                        format!("{key} = {x} must lie in [{lo}, {hi}]"),
                    ));
                }
            }
            Ok(Some(r))
        };
        let sweep = Sweep {
            g: range("g", 0.0, 1.0)?,
            gamma_mem: range("gamma_mem", 0.0, 1.0)?,
            p: range("p", 0.0, 1.0)?,
        };

        let source = parse_source(
            section("source"),
            sections.get("source").map(|s| s.0),
            base_dir,
        )?;
        if let Source::Bath { .. } = source {
            for key in ["g", "gamma_mem"] {
                if let Some(e) = sweep_sec.get(key) {
                    return Err(ConfigError::at(
                        e.line,
                        format!("'{key}' comes from the bath source and cannot also be swept"),
                    ));
                }
            }
        }

        let out_sec = section("output");
        let output_path = out_sec.get("path").map(|e| resolve(base_dir, &e.value));
        let precision = match out_sec.get("precision") {
            None => DEFAULT_PRECISION,
            Some(e) => parse_precision(&e.value).map_err(|m| ConfigError::at(e.line, m))?,
        };

        Ok(Self {
            source,
            sweep,
            output_path,
            precision,
        })
    }
}

pub fn parse_precision(text: &str) -> Result<usize, String> {
    match text.trim().parse::<usize>() {
        Ok(n) if (1..=MAX_PRECISION).contains(&n) => Ok(n),
        _ => Err(format!(
            "precision '{text}' must be an integer in 1..={MAX_PRECISION}"
        )),
    }
}

fn resolve(base_dir: Option<&Path>, value: &str) -> PathBuf {
    let p = PathBuf::from(value);
    match base_dir {
        Some(dir) if p.is_relative() => dir.join(p),
        _ => p,
    }
}

fn parse_source(
    sec: &Section,
    header_line: Option<usize>,
    base_dir: Option<&Path>,
) -> Result<Source, ConfigError> {
    let kind = sec.get("kind").ok_or_else(|| match header_line {
        Some(line) => ConfigError::at(line, "[source] needs 'kind = direct' or 'kind = bath'"),
        None => ConfigError::general("missing [source] section"),
    })?;
    match kind.value.as_str() {
        "direct" => {
            if let Some((key, e)) = sec.iter().find(|(k, _)| k.as_str() != "kind") {
                return Err(ConfigError::at(
                    e.line,
                    format!("'{key}' is only valid for a bath source"),
                ));
            }
            Ok(Source::Direct)
        }
        "bath" => parse_bath(sec, kind.line, base_dir),
        other => Err(ConfigError::at(
            kind.line,
            format!("unknown source kind '{other}'"),
        )),
    }
}

fn parse_bath(
    sec: &Section,
    kind_line: usize,
    base_dir: Option<&Path>,
) -> Result<Source, ConfigError> {
    let number = |key: &str| -> Result<Option<(f64, usize)>, ConfigError> {
        sec.get(key)
            .map(|e| {
                e.value
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .map(|x| (x, e.line))
                    .ok_or_else(|| {
                        ConfigError::at(
                            e.line,
                            format!("{key}: '{}' is not a finite number", e.value),
                        )
                    })
            })
            .transpose()
    };
    let required = |key: &str| -> Result<(f64, usize), ConfigError> {
        number(key)?.ok_or_else(|| ConfigError::at(kind_line, format!("bath source needs '{key}'")))
    };
    let model_entry = sec
        .get("model")
        .ok_or_else(|| ConfigError::at(kind_line, "bath source needs 'model'"))?;
    let ml = model_entry.line;
    let allowed: &[&str] = match model_entry.value.as_str() {
        "ohmic" => &["eta", "omega_c", "temperature"],
        "white" => &["level", "s0", "omega_max"],
        "tabulated" => &["table"],
        other => {
            return Err(ConfigError::at(
                ml,
                format!("unknown spectral model '{other}'"),
            ))
        }
    };
    for (key, e) in sec {
        let common = ["kind", "model", "lambda", "tau_p", "tau"].contains(&key.as_str());
        if !common && !allowed.contains(&key.as_str()) {
            return Err(ConfigError::at(
                e.line,
                format!("'{key}' does not apply to the {} model", model_entry.value),
            ));
        }
    }
    let model_err =
        |line: usize| move |e: crate::error::Error| ConfigError::at(line, e.to_string());
    let model = match model_entry.value.as_str() {
        "ohmic" => {
            let (eta, _) = required("eta")?;
            let (omega_c, _) = required("omega_c")?;
            let temperature = number("temperature")?.map_or(0.0, |t| t.0);
            SpectralModel::ohmic(eta, omega_c, temperature).map_err(model_err(ml))?
        }
        "white" => {
            let level = match (number("level")?, number("s0")?) {
                (Some(_), Some((_, line))) => {
                    return Err(ConfigError::at(
                        line,
                        "give either 'level' or 's0', not both",
                    ))
                }
                (Some(l), None) | (None, Some(l)) => l.0,
                (None, None) => {
                    return Err(ConfigError::at(ml, "white model needs 'level'"));
                }
            };
            match number("omega_max")? {
                Some((w, line)) => {
                    SpectralModel::white_with_cutoff(level, w).map_err(model_err(line))?
                }
                None => SpectralModel::white(level).map_err(model_err(ml))?,
            }
        }
        _ => {
            let entry = sec
                .get("table")
                .ok_or_else(|| ConfigError::at(ml, "tabulated model needs 'table'"))?;
            let samples = read_table(&resolve(base_dir, &entry.value))
                .map_err(|m| ConfigError::at(entry.line, m))?;
            SpectralModel::tabulated(samples).map_err(model_err(entry.line))?
        }
    };
    let (lambda, _) = required("lambda")?;
    let (tau_p, _) = required("tau_p")?;
    let (tau, _) = required("tau")?;
    let timing = ChannelTiming::new(lambda, tau_p, tau).map_err(model_err(kind_line))?;
    Ok(Source::Bath { model, timing })
}

/// Two columns `omega value` per line, whitespace or comma separated; `#` comments.
fn read_table(path: &Path) -> Result<Vec<(f64, f64)>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read spectrum table {}: {e}", path.display()))?;
    let mut samples = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        let parsed: Option<Vec<f64>> = fields.iter().map(|s| s.parse().ok()).collect();
        match parsed.as_deref() {
            Some([w, s]) => samples.push((*w, *s)),
            _ => {
                return Err(format!(
                    "{}:{}: expected two numbers, got '{content}'",
                    path.display(),
                    idx + 1
                ))
            }
        }
    }
    Ok(samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_direct_sweep() {
        let cfg = RunConfig::parse(
            "[source]\nkind = direct\n\n[sweep]\ng = 0.5\ngamma_mem = 0:1:2 ; two points\np = 0.9\n[output]\nprecision = 8\n",
            None,
        )
        .unwrap();
        assert_eq!(cfg.source, Source::Direct);
        assert_eq!(cfg.sweep.g, Some(Range::single(0.5)));
        assert_eq!(cfg.sweep.gamma_mem.unwrap().values(), vec![0.0, 1.0]);
        assert_eq!(cfg.precision, 8);
        assert_eq!(cfg.output_path, None);
    }

    #[test]
    fn range_values_hit_endpoints() {
        let r = Range {
            start: 0.1,
            stop: 0.9,
            count: 9,
        };
        let v = r.values();
        assert_eq!(v.len(), 9);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[8], 0.9);
        assert!((v[4] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn parses_bath_source() {
        let cfg = RunConfig::parse(
            "[source]\nkind = bath\nmodel = ohmic\neta = 1\nomega_c = 3\nlambda = 1\ntau_p = 1\ntau = 0\n",
            None,
        )
        .unwrap();
        match cfg.source {
            Source::Bath { model, timing } => {
                assert_eq!(model, SpectralModel::ohmic(1.0, 3.0, 0.0).unwrap());
                assert_eq!(timing.separation, 0.0);
            }
            _ => panic!("expected bath source"),
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = RunConfig::parse("[source]\nkind = direct\n[sweep]\ng = 2\n", None).unwrap_err();
        assert_eq!(err.line, Some(4));
        let err = RunConfig::parse("[source]\nkind = direct\nfoo = 1\n", None).unwrap_err();
        assert_eq!(err.line, Some(3));
        let err =
            RunConfig::parse("[source]\nkind = direct\n[sweep]\np = 0:1:0\n", None).unwrap_err();
        assert_eq!(err.line, Some(4));
        let err = RunConfig::parse("g = 1\n", None).unwrap_err();
        assert_eq!(err.line, Some(1));
        let err = RunConfig::parse("[sweep]\ng = 1\n", None).unwrap_err();
        assert_eq!(err.line, None);
        let err = RunConfig::parse("[source]\nkind = bath\nmodel = white\nlevel = 1\nlambda = 1\ntau_p = 1\ntau = 0\n[sweep]\ng = 0.5\n", None).unwrap_err();
        assert_eq!(err.line, Some(9));
        let err = RunConfig::parse(
            "[source]\nkind = bath\nmodel = ohmic\neta = 1\nlambda = 1\ntau_p = 1\ntau = 0\n",
            None,
        )
        .unwrap_err();
        assert!(err.to_string().contains("omega_c"), "{err}");
    }

    #[test]
    fn reads_tabulated_spectrum() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("s.txt"), "# w s\n0 1\n1, 0.5\n2 0\n").unwrap();
        let cfg = RunConfig::parse(
            "[source]\nkind = bath\nmodel = tabulated\ntable = s.txt\nlambda = 1\ntau_p = 1\ntau = 0.5\n",
            Some(dir.path()),
        )
        .unwrap();
        match cfg.source {
            Source::Bath { model, .. } => assert_eq!(
                model,
                SpectralModel::tabulated(vec![(0.0, 1.0), (1.0, 0.5), (2.0, 0.0)]).unwrap()
            ),
            _ => panic!("expected bath source"),
        }
        std::fs::write(dir.path().join("bad.txt"), "0 1 2\n").unwrap();
        let err = RunConfig::parse(
            "[source]\nkind = bath\nmodel = tabulated\ntable = bad.txt\nlambda = 1\ntau_p = 1\ntau = 0.5\n",
            Some(dir.path()),
        )
        .unwrap_err();
        assert_eq!(err.line, Some(4));
    }
}
