//! Declarative scenario files: build a surface, contract chains, attach
//! Seifert data and compare the computed invariants with expected values.

mod parse;
mod report;
mod run;
mod template;
mod value;

use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use parse::{
    parse_sections, CheckKind, ClassSpec, Construct, Discrepancy, Entry, Expectation, Fact, LineSpec, ParseError,
    Provenance, RawSection, Scenario, Step, StepKind,
};
pub use report::{render, render_record, render_text, Format};
pub use run::{execute, parse_class, DiscrepancyResult, ExpectationResult, ScenarioReport};
pub use template::{eval_expr, expand, substitute, Env, TemplateError};
pub use value::{parse_rational, Value};

/// Colon-separated list of extra directories holding `*.scenario` files.
pub const SCENARIO_PATH_VAR: &str = "ORBICALC_SCENARIO_PATH";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepError {
    pub section: String,
    pub line: usize,
    pub message: String,
}

impl fmt::Display for StepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] at line {}: {}", self.section, self.line, self.message)
    }
}

impl std::error::Error for StepError {}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{source_name}: {error}")]
    Parse { source_name: String, error: ParseError },
    #[error("{source_name}: {error}")]
    Step { source_name: String, error: StepError },
    #[error("cannot read {path}: {error}")]
    Io { path: PathBuf, error: std::io::Error },
    #[error("no scenario named `{0}` (try `orbicalc list`)")]
    NotFound(String),
    #[error("bad parameter `{0}`, expected name=integer")]
    BadParam(String),
}

/// Scenarios shipped with the crate.
pub const BUNDLED: &[(&str, &str)] = &[
    ("thm-3.2", include_str!("../../scenarios/thm-3.2.scenario")),
    ("thm-3.9", include_str!("../../scenarios/thm-3.9.scenario")),
    ("thm-4.3", include_str!("../../scenarios/thm-4.3.scenario")),
    ("prop-5.4", include_str!("../../scenarios/prop-5.4.scenario")),
    ("null-b2", include_str!("../../scenarios/null-b2.scenario")),
    ("gk-table", include_str!("../../scenarios/gk-table.scenario")),
    ("kodaira-table", include_str!("../../scenarios/kodaira-table.scenario")),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Bundled,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioSource {
    pub name: String,
    pub origin: Origin,
    pub text: String,
}

impl ScenarioSource {
    pub fn label(&self) -> String {
        match &self.origin {
            Origin::Bundled => self.name.clone(),
            Origin::File(p) => p.display().to_string(),
        }
    }

    pub fn parse(&self, overrides: &[(String, i128)]) -> Result<Scenario, ScenarioError> {
        Scenario::parse(&self.text, overrides)
            .map_err(|error| ScenarioError::Parse { source_name: self.label(), error })
    }

    pub fn run(&self, overrides: &[(String, i128)]) -> Result<ScenarioReport, ScenarioError> {
        let sc = self.parse(overrides)?;
        execute(&sc).map_err(|error| ScenarioError::Step { source_name: self.label(), error })
    }
}

fn search_dirs() -> Vec<PathBuf> {
    std::env::var_os(SCENARIO_PATH_VAR)
        .map(|v| std::env::split_paths(&v).filter(|p| !p.as_os_str().is_empty()).collect())
        .unwrap_or_default()
}

fn dir_scenarios(dir: &Path) -> Vec<(String, PathBuf)> {
    let Ok(rd) = std::fs::read_dir(dir) else {
        return Vec::new();
    };
    let mut out: Vec<(String, PathBuf)> = rd
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "scenario"))
        .filter_map(|p| Some((p.file_stem()?.to_str()?.to_string(), p)))
        .collect();
    out.sort();
    out
}

/// Bundled scenarios followed by those found on the search path. A file on
/// the path shadows a bundled scenario of the same name.
pub fn list() -> Vec<ScenarioSource> {
    let mut out: Vec<ScenarioSource> = BUNDLED
        .iter()
        .map(|(n, t)| ScenarioSource { name: n.to_string(), origin: Origin::Bundled, text: t.to_string() })
        .collect();
    for dir in search_dirs() {
        for (name, path) in dir_scenarios(&dir) {
            let Ok(text) = std::fs::read_to_string(&path) else { continue };
            let src = ScenarioSource { name: name.clone(), origin: Origin::File(path), text };
            match out.iter_mut().find(|s| s.name == name) {
                Some(slot) if slot.origin == Origin::Bundled => *slot = src,
                Some(_) => {}
                None => out.push(src),
            }
        }
    }
    out
}

/// Resolves a path to an existing file, or a scenario name.
pub fn load(name_or_path: &str) -> Result<ScenarioSource, ScenarioError> {
    let p = Path::new(name_or_path);
    if p.is_file() {
        let text = std::fs::read_to_string(p).map_err(|error| ScenarioError::Io { path: p.to_path_buf(), error })?;
        let name = p.file_stem().and_then(|s| s.to_str()).unwrap_or(name_or_path).to_string();
        return Ok(ScenarioSource { name, origin: Origin::File(p.to_path_buf()), text });
    }
    let name = name_or_path.strip_suffix(".scenario").unwrap_or(name_or_path);
    list().into_iter().find(|s| s.name == name).ok_or_else(|| ScenarioError::NotFound(name_or_path.to_string()))
}

/// Parses `k=v` parameter overrides.
pub fn parse_overrides<S: AsRef<str>>(items: &[S]) -> Result<Vec<(String, i128)>, ScenarioError> {
    items
        .iter()
        .map(|s| {
            let s = s.as_ref();
            let (k, v) = s.split_once('=').ok_or_else(|| ScenarioError::BadParam(s.to_string()))?;
            let v: i128 = v.trim().parse().map_err(|_| ScenarioError::BadParam(s.to_string()))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_scenarios_parse_and_pass() {
        for (name, text) in BUNDLED {
            let sc = Scenario::parse(text, &[]).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(&sc.name, name);
            assert!(!sc.expectations.is_empty(), "{name}");
            let r = execute(&sc).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(r.passed(), "{name}:\n{}", render_text(&r));
        }
    }

    #[test]
    fn overrides() {
        assert_eq!(parse_overrides(&["b=3", "p = 2"]).unwrap(), vec![("b".into(), 3), ("p".into(), 2)]);
        assert!(parse_overrides(&["b"]).is_err());
        assert!(parse_overrides(&["b=x"]).is_err());
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(load("no-such-scenario"), Err(ScenarioError::NotFound(_))));
    }
}
