use std::fmt;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use sixvertex::partition::ZMethod;
use sixvertex::{Scalar, Vec2};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(try_from = "String")]
pub enum MethodChoice {
    #[default]
    All,
    One(ZMethod),
}

impl TryFrom<String> for MethodChoice {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl std::str::FromStr for MethodChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "all" {
            return Ok(MethodChoice::All);
        }
        s.parse::<ZMethod>().map(MethodChoice::One).map_err(|_| {
            let names: Vec<_> = ZMethod::ALL.iter().map(|m| m.name()).collect();
            format!("unknown method '{s}', expected all or one of {}", names.join(", "))
        })
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryInput {
    pub w: Vec2<Scalar>,
    pub e: Vec2<Scalar>,
    pub n: Vec2<Scalar>,
    pub s: Vec2<Scalar>,
    #[serde(default)]
    pub a: Option<Vec2<Scalar>>,
    #[serde(default)]
    pub d_tilde: Option<Vec2<Scalar>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub c: Scalar,
    pub u: Vec<Scalar>,
    pub v: Vec<Scalar>,
    pub boundary: BoundaryInput,
    #[serde(default)]
    pub method: MethodChoice,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

/// A config that failed to load, rendered with a pointer into the source.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn load(path: &Path) -> Result<JobConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("{}: cannot read config: {e}", path.display())))?;
    parse(&text, &path.display().to_string())
}

pub fn parse(text: &str, origin: &str) -> Result<JobConfig, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError(pointer(text, origin, &e)))
}

fn pointer(text: &str, origin: &str, err: &serde_json::Error) -> String {
    let (line, column) = (err.line(), err.column());
    let mut msg = format!("{origin}:{line}:{column}: {err}");
    if let Some(src) = line.checked_sub(1).and_then(|i| text.lines().nth(i)) {
        let gutter = line.to_string();
        let caret = " ".repeat(column.saturating_sub(1));
        msg.push_str(&format!("\n {gutter} | {src}\n {} | {caret}^", " ".repeat(gutter.len())));
    }
    msg
}

#[cfg(test)]
mod tests {
    use super::*;
    use sixvertex::Field;

    const WORKED: &str = r#"{
  "c": "1",
  "u": ["2"],
  "v": [0],
  "boundary": {"w": ["1", "1"], "e": ["1", "0"], "n": ["1", "3"], "s": ["1", "2"]}
}"#;

    #[test]
    fn defaults_apply() {
        let cfg = parse(WORKED, "job.json").unwrap();
        assert_eq!(cfg.method, MethodChoice::All);
        assert_eq!(cfg.mode, Mode::Exact);
        assert!(cfg.boundary.a.is_none() && cfg.output.is_none());
        assert_eq!(cfg.u, vec![Scalar::from_i64(2)]);
    }

    #[test]
    fn complex_literals() {
        let text = WORKED.replace(r#"["2"]"#, r#"[{"re": "1/2", "im": "-3"}]"#);
        let cfg = parse(&text, "job.json").unwrap();
        assert_eq!(cfg.u[0].to_string(), "1/2-3i");
    }

    #[test]
    fn unknown_key_points_at_line() {
        let text = WORKED.replace("\"c\": \"1\",", "\"c\": \"1\",\n  \"colour\": 3,");
        let err = parse(&text, "job.json").unwrap_err().0;
        assert!(err.starts_with("job.json:3:"), "{err}");
        assert!(err.contains("colour") && err.contains('^'), "{err}");
    }

    #[test]
    fn bad_method_rejected() {
        let text = WORKED.replace("\"c\": \"1\",", "\"c\": \"1\", \"method\": \"fast\",");
        let err = parse(&text, "job.json").unwrap_err().0;
        assert!(err.contains("unknown method 'fast'"), "{err}");
    }
}
