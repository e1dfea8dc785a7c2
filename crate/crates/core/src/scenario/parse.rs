//! Scenario files: `[section]` headers followed by `key = value` lines.
//! Lines starting with `#` are comments.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use super::template::{expand, parse_range, Env, TemplateError};
use crate::dynkin::{DynkinConfiguration, Fiber};
use crate::group::FgAbelianGroup;
use crate::smale_barden::BardenInvariant;
use crate::surface::{HirzebruchConvention, Sign};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        Self { line, col, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
    /// Column of the first character of the value.
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawSection {
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

fn is_key_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-' | '$' | '{' | '}')
}

pub fn parse_sections(text: &str) -> Result<Vec<RawSection>, ParseError> {
    let mut out: Vec<RawSection> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let indent = raw.len() - raw.trim_start().len();
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if let Some(rest) = t.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ParseError::new(line, indent + t.len(), "expected `]`"))?
                .trim();
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(ParseError::new(line, indent + 2, format!("bad section name `{name}`")));
            }
            out.push(RawSection { name: name.to_string(), line, entries: Vec::new() });
            continue;
        }
        let Some(eq) = t.find('=') else {
            return Err(ParseError::new(line, indent + 1, "expected `key = value` or `[section]`"));
        };
        let key = t[..eq].trim();
        if key.is_empty() || !key.chars().all(is_key_char) {
            return Err(ParseError::new(line, indent + 1, format!("bad key `{key}`")));
        }
        let after = &t[eq + 1..];
        let value = after.trim();
        let col = indent + eq + 2 + (after.len() - after.trim_start().len());
        let section = out
            .last_mut()
            .ok_or_else(|| ParseError::new(line, indent + 1, "entry outside of any section"))?;
        if section.entries.iter().any(|e| e.key == key) {
            return Err(ParseError::new(line, indent + 1, format!("duplicate key `{key}`")));
        }
        section.entries.push(Entry { key: key.to_string(), value: value.to_string(), line, col });
    }
    Ok(out)
}

// ---- typed scenario ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Published,
    Derived,
    Trivial,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Published => "published",
            Provenance::Derived => "derived",
            Provenance::Trivial => "trivial",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fact {
    pub id: String,
    pub statement: String,
    pub citation: String,
    pub holds: bool,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expectation {
    pub key: String,
    pub expected: String,
    pub provenance: Provenance,
    pub citation: Option<String>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub subject: String,
    pub computed: String,
    pub published: String,
    pub note: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construct {
    Plane,
    Hirzebruch { n: u64, convention: HirzebruchConvention },
    K3A19,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassSpec {
    /// Classes orthogonal to every contracted chain.
    Away,
    List(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineSpec {
    /// A small combination of the away-from-points classes with primitive pairing.
    Primitive,
    Expr(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertStep {
    pub isotropy: Vec<(String, BigInt, BigInt)>,
    pub test_classes: ClassSpec,
    pub surjectivity_classes: Option<Vec<String>>,
    pub line_class: Option<LineSpec>,
    pub ample: Vec<String>,
    pub h1_base: String,
    pub pi1_orb: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantsStep {
    pub label: Option<String>,
    pub group: Option<FgAbelianGroup>,
    pub spin: bool,
    pub spin_fact: Option<String>,
    pub barden: BardenInvariant,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynkinStep {
    pub label: Option<String>,
    pub configuration: DynkinConfiguration,
    pub ambient_k3: bool,
    pub fibers: Vec<Fiber>,
    pub mw_fact: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchStep {
    pub label: Option<String>,
    pub bound: i64,
    pub nbound: i64,
    pub kahler: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckKind {
    Disjoint(Vec<String>),
    CalabiYau,
    Reresolve,
    SumRelation { n: Option<i64> },
    SumRelationSpot { n: i64, a: i64, b: i64 },
    PencilBlowDown { degree: u64 },
    MultiplicationDegree { k: u64 },
    Kodaira { k_dot_omega: Sign, k_squared: Sign },
}

impl CheckKind {
    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::Disjoint(_) => "disjoint",
            CheckKind::CalabiYau => "calabi_yau",
            CheckKind::Reresolve => "reresolve",
            CheckKind::SumRelation { .. } => "sum_relation",
            CheckKind::SumRelationSpot { .. } => "sum_relation_spot",
            CheckKind::PencilBlowDown { .. } => "pencil_blow_down",
            CheckKind::MultiplicationDegree { .. } => "multiplication_degree",
            CheckKind::Kodaira { .. } => "kodaira",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepKind {
    Construct(Construct),
    Curve { name: String, class: String, genus: u64 },
    BlowUp { exceptional: String, through: Vec<String>, infinitely_near: bool },
    BlowDown { curve: String },
    Contract { chain: Vec<String> },
    Isotropy { divisors: Vec<(String, BigInt)>, intersections: Vec<(String, String)> },
    Seifert(SeifertStep),
    Invariants(InvariantsStep),
    Dynkin(DynkinStep),
    Search(SearchStep),
    Check { label: Option<String>, kind: CheckKind },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub kind: StepKind,
    pub section: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub params: BTreeMap<String, i128>,
    pub facts: Vec<Fact>,
    pub steps: Vec<Step>,
    pub expectations: Vec<Expectation>,
    pub discrepancies: Vec<Discrepancy>,
}

/// Section entries after templating, with unknown-key detection.
struct Fields {
    section: String,
    line: usize,
    entries: Vec<Entry>,
    used: Vec<bool>,
}

impl Fields {
    fn new(section: &str, line: usize, entries: Vec<Entry>) -> Self {
        let used = vec![false; entries.len()];
        Self { section: section.to_string(), line, entries, used }
    }

    fn get(&mut self, key: &str) -> Option<Entry> {
        let i = self.entries.iter().position(|e| e.key == key)?;
        self.used[i] = true;
        Some(self.entries[i].clone())
    }

    fn required(&mut self, key: &str) -> Result<Entry, ParseError> {
        let (section, line) = (self.section.clone(), self.line);
        self.get(key)
            .ok_or_else(|| ParseError::new(line, 1, format!("[{section}] is missing `{key}`")))
    }

    fn string(&mut self, key: &str) -> Option<String> {
        self.get(key).map(|e| e.value)
    }

    fn parsed<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>, ParseError>
    where
        T::Err: fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse::<T>()
                .map(Some)
                .map_err(|err| ParseError::new(e.line, e.col, format!("bad value for `{key}`: {err}"))),
        }
    }

    fn boolean(&mut self, key: &str) -> Result<Option<bool>, ParseError> {
        match self.get(key) {
            None => Ok(None),
            Some(e) => match e.value.as_str() {
                "true" => Ok(Some(true)),
                "false" => Ok(Some(false)),
                _ => Err(ParseError::new(e.line, e.col, format!("`{key}` must be true or false"))),
            },
        }
    }

    fn list(&mut self, key: &str) -> Option<Vec<String>> {
        self.get(key).map(|e| split_list(&e.value))
    }

    fn finish(self) -> Result<(), ParseError> {
        match self.entries.iter().zip(&self.used).find(|(_, u)| !**u) {
            Some((e, _)) => Err(ParseError::new(e.line, 1, format!("unknown key `{}` in [{}]", e.key, self.section))),
            None => Ok(()),
        }
    }

    fn remaining(&mut self) -> Vec<Entry> {
        let mut out = Vec::new();
        for (e, u) in self.entries.iter().zip(self.used.iter_mut()) {
            if !*u {
                *u = true;
                out.push(e.clone());
            }
        }
        out
    }
}

pub fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(str::to_string).collect()
}

fn parse_params(e: &Entry) -> Result<BTreeMap<String, i128>, ParseError> {
    let mut out = BTreeMap::new();
    for item in split_list(&e.value) {
        let bad = || ParseError::new(e.line, e.col, format!("bad parameter `{item}`, expected name=integer"));
        let (k, v) = item.split_once('=').ok_or_else(bad)?;
        let v: i128 = v.trim().parse().map_err(|_| bad())?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

fn template_err(e: &Entry, t: TemplateError) -> ParseError {
    ParseError::new(e.line, e.col + t.offset, t.message)
}

fn entry_err(e: &Entry, msg: impl Into<String>) -> ParseError {
    ParseError::new(e.line, e.col, msg)
}

fn label(f: &mut Fields) -> Option<String> {
    f.string("label")
}

fn parse_sign(e: &Entry) -> Result<Sign, ParseError> {
    match e.value.as_str() {
        "negative" | "-" => Ok(Sign::Negative),
        "zero" | "0" => Ok(Sign::Zero),
        "positive" | "+" => Ok(Sign::Positive),
        _ => Err(entry_err(e, "expected negative, zero or positive")),
    }
}

fn parse_fibers(e: &Entry) -> Result<Vec<Fiber>, ParseError> {
    let mut out = Vec::new();
    for item in split_list(&e.value) {
        let parts: Vec<&str> = item.split('/').map(str::trim).collect();
        let bad = || entry_err(e, format!("bad fibre `{item}`, expected name/components/included"));
        let [name, n, inc] = parts.as_slice() else {
            return Err(bad());
        };
        let n: usize = n.parse().map_err(|_| bad())?;
        let inc: usize = inc.parse().map_err(|_| bad())?;
        if inc > n {
            return Err(bad());
        }
        out.push(Fiber::reduced_cycle(*name, n, inc));
    }
    Ok(out)
}

fn build_step(name: &str, f: &mut Fields) -> Result<StepKind, ParseError> {
    Ok(match name {
        "construct" => {
            let e = f.required("surface")?;
            StepKind::Construct(match e.value.as_str() {
                "plane" => Construct::Plane,
                "k3_a19" => Construct::K3A19,
                "hirzebruch" => {
                    let n: u64 = f.parsed("n")?.ok_or_else(|| entry_err(&e, "hirzebruch needs `n`"))?;
                    let convention = match f.string("convention").as_deref() {
                        None | Some("positive") => HirzebruchConvention::PositiveSection,
                        Some("negative") => HirzebruchConvention::NegativeSection,
                        Some(other) => return Err(entry_err(&e, format!("unknown convention `{other}`"))),
                    };
                    Construct::Hirzebruch { n, convention }
                }
                other => return Err(entry_err(&e, format!("unknown surface `{other}`"))),
            })
        }
        "curve" => StepKind::Curve {
            name: f.required("name")?.value,
            class: f.required("class")?.value,
            genus: {
                let e = f.required("genus")?;
                e.value.parse().map_err(|_| entry_err(&e, "genus must be a non-negative integer"))?
            },
        },
        "blow_up" => StepKind::BlowUp {
            exceptional: f.required("exceptional")?.value,
            through: f.list("through").unwrap_or_default(),
            infinitely_near: f.boolean("infinitely_near")?.unwrap_or(false),
        },
        "blow_down" => StepKind::BlowDown { curve: f.required("curve")?.value },
        "contract" => StepKind::Contract { chain: split_list(&f.required("chain")?.value) },
        "isotropy" => {
            let e = f.required("divisors")?;
            let mut divisors = Vec::new();
            for item in split_list(&e.value) {
                let (d, m) = item.split_once(':').ok_or_else(|| entry_err(&e, format!("bad divisor `{item}`, expected name:m")))?;
                let m: BigInt = m.trim().parse().map_err(|_| entry_err(&e, format!("bad multiplicity in `{item}`")))?;
                divisors.push((d.trim().to_string(), m));
            }
            let mut intersections = Vec::new();
            if let Some(e) = f.get("intersections") {
                for item in split_list(&e.value) {
                    let (a, b) = item.split_once('~').ok_or_else(|| entry_err(&e, format!("bad pair `{item}`, expected a~b")))?;
                    intersections.push((a.trim().to_string(), b.trim().to_string()));
                }
            }
            StepKind::Isotropy { divisors, intersections }
        }
        "seifert" => {
            let mut isotropy = Vec::new();
            if let Some(e) = f.get("isotropy") {
                for item in split_list(&e.value) {
                    let parts: Vec<&str> = item.split(':').map(str::trim).collect();
                    let bad = || entry_err(&e, format!("bad isotropy `{item}`, expected name:m:b"));
                    let [d, m, b] = parts.as_slice() else {
                        return Err(bad());
                    };
                    isotropy.push((d.to_string(), m.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?));
                }
            }
            let tc = f.required("test_classes")?;
            let test_classes = if tc.value == "away" { ClassSpec::Away } else { ClassSpec::List(split_list(&tc.value)) };
            let line_class = f.string("line_class").map(|s| if s == "primitive" { LineSpec::Primitive } else { LineSpec::Expr(s) });
            SeifertStep {
                isotropy,
                test_classes,
                surjectivity_classes: f.list("surjectivity_classes"),
                line_class,
                ample: f.list("ample").unwrap_or_default(),
                h1_base: f.required("h1_base")?.value,
                pi1_orb: f.string("pi1_orb"),
            }
            .into()
        }
        "invariants" => {
            let label = label(f);
            let group = f.parsed::<FgAbelianGroup>("group")?;
            let spin = f.boolean("spin")?.unwrap_or(true);
            let barden = match f.get("barden") {
                None => if spin { BardenInvariant::Zero } else { BardenInvariant::Infinity },
                Some(e) => match e.value.as_str() {
                    "0" => BardenInvariant::Zero,
                    "inf" => BardenInvariant::Infinity,
                    v => BardenInvariant::Declared(v.parse().map_err(|_| entry_err(&e, "barden must be 0, inf or an integer"))?),
                },
            };
            StepKind::Invariants(InvariantsStep { label, group, spin, spin_fact: f.string("spin_fact"), barden })
        }
        "dynkin" => {
            let label = label(f);
            let e = f.required("configuration")?;
            let configuration = e.value.parse().map_err(|err| entry_err(&e, format!("{err}")))?;
            let ambient_k3 = match f.get("ambient") {
                None => false,
                Some(a) if a.value == "k3" => true,
                Some(a) => return Err(entry_err(&a, "only `k3` is supported as ambient")),
            };
            let fibers = match f.get("fibers") {
                None => Vec::new(),
                Some(e) => parse_fibers(&e)?,
            };
            StepKind::Dynkin(DynkinStep { label, configuration, ambient_k3, fibers, mw_fact: f.string("mw_fact") })
        }
        "search" => StepKind::Search(SearchStep {
            label: label(f),
            bound: f.parsed("bound")?.unwrap_or(100),
            nbound: f.parsed("nbound")?.unwrap_or(100),
            kahler: f.boolean("kahler")?.unwrap_or(true),
        }),
        "check" => {
            let label = label(f);
            let e = f.required("kind")?;
            let int = |f: &mut Fields, k: &str| -> Result<i64, ParseError> {
                f.parsed(k)?.ok_or_else(|| entry_err(&e, format!("check `{}` needs `{k}`", e.value)))
            };
            let kind = match e.value.as_str() {
                "disjoint" => CheckKind::Disjoint(split_list(&f.required("curves")?.value)),
                "calabi_yau" => CheckKind::CalabiYau,
                "reresolve" => CheckKind::Reresolve,
                "sum_relation" => CheckKind::SumRelation { n: f.parsed("n")? },
                "sum_relation_spot" => {
                    CheckKind::SumRelationSpot { n: int(f, "n")?, a: int(f, "a")?, b: int(f, "b")? }
                }
                "pencil_blow_down" => CheckKind::PencilBlowDown { degree: f.parsed("degree")?.unwrap_or(3) },
                "multiplication_degree" => CheckKind::MultiplicationDegree {
                    k: f.parsed("k")?.ok_or_else(|| entry_err(&e, "needs `k`"))?,
                },
                "kodaira" => CheckKind::Kodaira {
                    k_dot_omega: parse_sign(&f.required("k_dot_omega")?)?,
                    k_squared: parse_sign(&f.required("k_squared")?)?,
                },
                other => return Err(entry_err(&e, format!("unknown check `{other}`"))),
            };
            StepKind::Check { label, kind }
        }
        other => return Err(ParseError::new(f.line, 2, format!("unknown section [{other}]"))),
    })
}

impl From<SeifertStep> for StepKind {
    fn from(s: SeifertStep) -> Self {
        StepKind::Seifert(s)
    }
}

fn parse_provenance(e: &Entry) -> Result<Provenance, ParseError> {
    match e.value.as_str() {
        "published" => Ok(Provenance::Published),
        "derived" => Ok(Provenance::Derived),
        "trivial" => Ok(Provenance::Trivial),
        _ => Err(entry_err(e, "provenance must be published, derived or trivial")),
    }
}

impl Scenario {
    /// Parses a scenario, overriding declared parameters with `overrides`.
    pub fn parse(text: &str, overrides: &[(String, i128)]) -> Result<Self, ParseError> {
        let sections = parse_sections(text)?;
        let Some(head) = sections.first().filter(|s| s.name == "scenario") else {
            let line = sections.first().map_or(1, |s| s.line);
            return Err(ParseError::new(line, 1, "file must start with a [scenario] section"));
        };
        let mut hf = Fields::new("scenario", head.line, head.entries.clone());
        let name = hf.required("name")?.value;
        let description = hf.string("description").unwrap_or_default();
        let mut params = match hf.get("params") {
            Some(e) => parse_params(&e)?,
            None => BTreeMap::new(),
        };
        hf.finish()?;
        for (k, v) in overrides {
            if !params.contains_key(k) {
                return Err(ParseError::new(head.line, 1, format!("scenario `{name}` has no parameter `{k}`")));
            }
            params.insert(k.clone(), *v);
        }

        let mut scenario = Scenario {
            name,
            description,
            params: params.clone(),
            facts: Vec::new(),
            steps: Vec::new(),
            expectations: Vec::new(),
            discrepancies: Vec::new(),
        };
        let mut fact_refs: Vec<(String, usize)> = Vec::new();

        for sec in &sections[1..] {
            if sec.name == "scenario" {
                return Err(ParseError::new(sec.line, 1, "only one [scenario] section is allowed"));
            }
            let mut envs: Vec<Env> = vec![params.clone()];
            let mut entries = sec.entries.clone();
            if let Some(pos) = entries.iter().position(|e| e.key == "repeat") {
                let e = entries.remove(pos);
                let (var, lo, hi) = parse_range(&e.value, &params).map_err(|t| template_err(&e, t))?;
                if params.contains_key(&var) {
                    return Err(entry_err(&e, format!("loop variable `{var}` shadows a parameter")));
                }
                envs = (lo..=hi)
                    .map(|x| {
                        let mut env = params.clone();
                        env.insert(var.clone(), x);
                        env
                    })
                    .collect();
            }
            for env in envs {
                let mut expanded = Vec::with_capacity(entries.len());
                for e in &entries {
                    let key = expand(&e.key, &env).map_err(|t| ParseError::new(e.line, 1 + t.offset, t.message))?;
                    let value = expand(&e.value, &env).map_err(|t| template_err(e, t))?;
                    expanded.push(Entry { key, value, line: e.line, col: e.col });
                }
                let mut f = Fields::new(&sec.name, sec.line, expanded);
                match sec.name.as_str() {
                    "fact" => {
                        let id = f.required("id")?.value;
                        let statement = f.required("statement")?.value;
                        let c = f.required("citation")?;
                        if c.value.is_empty() {
                            return Err(entry_err(&c, "a declared fact needs a citation"));
                        }
                        let holds = f.boolean("holds")?.unwrap_or(true);
                        if scenario.facts.iter().any(|x| x.id == id) {
                            return Err(ParseError::new(sec.line, 1, format!("fact `{id}` declared twice")));
                        }
                        scenario.facts.push(Fact { id, statement, citation: c.value, holds, line: sec.line });
                    }
                    "expect" => {
                        let provenance = parse_provenance(&f.required("provenance")?)?;
                        let citation = f.string("citation");
                        let rest = f.remaining();
                        if rest.is_empty() {
                            return Err(ParseError::new(sec.line, 1, "[expect] has no expectations"));
                        }
                        for e in rest {
                            scenario.expectations.push(Expectation {
                                key: e.key,
                                expected: e.value,
                                provenance,
                                citation: citation.clone(),
                                line: e.line,
                            });
                        }
                    }
                    "discrepancy" => {
                        scenario.discrepancies.push(Discrepancy {
                            subject: f.required("subject")?.value,
                            computed: f.required("computed")?.value,
                            published: f.required("published")?.value,
                            note: f.string("note").unwrap_or_default(),
                            line: sec.line,
                        });
                    }
                    name => {
                        let kind = build_step(name, &mut f)?;
                        let refs: Vec<Option<&String>> = match &kind {
                            StepKind::Seifert(s) => vec![Some(&s.h1_base), s.pi1_orb.as_ref()],
                            StepKind::Invariants(s) => vec![s.spin_fact.as_ref()],
                            StepKind::Dynkin(s) => vec![s.mw_fact.as_ref()],
                            _ => vec![],
                        };
                        fact_refs.extend(refs.into_iter().flatten().map(|r| (r.clone(), sec.line)));
                        scenario.steps.push(Step { kind, section: sec.name.clone(), line: sec.line });
                    }
                }
                f.finish()?;
            }
        }
        for (id, line) in fact_refs {
            if !scenario.facts.iter().any(|f| f.id == id) {
                return Err(ParseError::new(line, 1, format!("reference to undeclared fact `{id}`")));
            }
        }
        Ok(scenario)
    }

    pub fn fact(&self, id: &str) -> Option<&Fact> {
        self.facts.iter().find(|f| f.id == id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
# demo
[scenario]
name = demo
params = b=2

[fact]
id = h1
statement = base is simply connected
citation = blow-ups of the plane

[curve]
repeat = i in 1..${b}
name = D${i}
class = 3*H
genus = 1

[expect]
provenance = derived
surface.rank = ${b + 1}
";

    #[test]
    fn sections_and_columns() {
        let s = parse_sections("[a]\n  key = value\n").unwrap();
        assert_eq!(s[0].entries[0].col, 9);
        let err = parse_sections("key = 1").unwrap_err();
        assert_eq!((err.line, err.col), (1, 1));
        let err = parse_sections("[a]\nnot an entry").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(parse_sections("[a]\nk = 1\nk = 2").is_err());
    }

    #[test]
    fn typed_scenario() {
        let s = Scenario::parse(SMALL, &[]).unwrap();
        assert_eq!(s.steps.len(), 2);
        assert_eq!(s.expectations[0].expected, "3");
        let s = Scenario::parse(SMALL, &[("b".into(), 4)]).unwrap();
        assert_eq!(s.steps.len(), 4);
        assert!(matches!(&s.steps[3].kind, StepKind::Curve { name, .. } if name == "D4"));
        assert!(Scenario::parse(SMALL, &[("q".into(), 1)]).is_err());
    }

    #[test]
    fn errors_point_at_input() {
        let bad = SMALL.replace("class = 3*H", "class = ${3*}");
        let err = Scenario::parse(&bad, &[]).unwrap_err();
        assert_eq!(err.line, 14);
        assert!(err.col > 9);
        let bad = SMALL.replace("genus = 1", "genus = 1\ncolour = red");
        assert!(Scenario::parse(&bad, &[]).unwrap_err().message.contains("unknown key"));
        let bad = SMALL.replace("citation = blow-ups of the plane", "citation =");
        assert!(Scenario::parse(&bad, &[]).is_err());
        let bad = format!("{SMALL}\n[seifert]\ntest_classes = away\nh1_base = nope\n");
        assert!(Scenario::parse(&bad, &[]).unwrap_err().message.contains("undeclared fact"));
    }
}
