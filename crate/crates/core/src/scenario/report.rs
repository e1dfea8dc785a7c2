//! Text and `key=value` record renderings of a [`ScenarioReport`].

use std::fmt::Write;

use super::run::ScenarioReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Record,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "record" => Ok(Format::Record),
            _ => Err(format!("unknown format `{s}`, expected text or record")),
        }
    }
}

fn params(r: &ScenarioReport) -> String {
    r.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(", ")
}

pub fn render(r: &ScenarioReport, format: Format) -> String {
    match format {
        Format::Text => render_text(r),
        Format::Record => render_record(r),
    }
}

pub fn render_text(r: &ScenarioReport) -> String {
    let mut out = String::new();
    if r.params.is_empty() {
        writeln!(out, "scenario {}", r.name).unwrap();
    } else {
        writeln!(out, "scenario {} ({})", r.name, params(r)).unwrap();
    }
    if !r.description.is_empty() {
        writeln!(out, "  {}", r.description).unwrap();
    }
    for f in &r.facts {
        let state = if f.holds { "holds" } else { "fails" };
        writeln!(out, "fact {}: {} [{state}; {}]", f.id, f.statement, f.citation).unwrap();
    }
    writeln!(out, "values:").unwrap();
    for (k, v) in &r.values {
        writeln!(out, "  {k} = {v}").unwrap();
    }
    writeln!(out, "expectations:").unwrap();
    for e in &r.expectations {
        let status = if e.passed { "ok" } else { "MISMATCH" };
        write!(out, "  {status:8} {} = {} ({})", e.key, e.expected, e.provenance).unwrap();
        if let Some(c) = &e.citation {
            write!(out, " [{c}]").unwrap();
        }
        if !e.passed {
            write!(out, "; computed {}", e.actual.as_deref().unwrap_or("nothing")).unwrap();
        }
        if let Some(n) = &e.note {
            write!(out, "; {n}").unwrap();
        }
        out.push('\n');
    }
    if !r.discrepancies.is_empty() {
        writeln!(out, "discrepancies:").unwrap();
        for d in &r.discrepancies {
            let verdict = if d.agrees { "agrees" } else { "differs" };
            writeln!(
                out,
                "  {}: computed {} = {}, published {} ({verdict})",
                d.subject,
                d.computed_key,
                d.computed.as_deref().unwrap_or("nothing"),
                d.published
            )
            .unwrap();
            if !d.note.is_empty() {
                writeln!(out, "    {}", d.note).unwrap();
            }
        }
    }
    let total = r.expectations.len();
    let verdict = if r.passed() { "PASS" } else { "FAIL" };
    writeln!(out, "result: {verdict} ({}/{total} expectations met)", total - r.failures()).unwrap();
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('\n', "\\n")
}

pub fn render_record(r: &ScenarioReport) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: &str| {
        out.push_str(k);
        out.push('=');
        out.push_str(&escape(v));
        out.push('\n');
    };
    line("scenario", &r.name);
    for (k, v) in &r.params {
        line(&format!("param.{k}"), &v.to_string());
    }
    for f in &r.facts {
        line(&format!("fact.{}", f.id), if f.holds { "true" } else { "false" });
        line(&format!("fact.{}.citation", f.id), &f.citation);
    }
    for (k, v) in &r.values {
        line(&format!("value.{k}"), &v.to_string());
    }
    for e in &r.expectations {
        line(&format!("expect.{}", e.key), if e.passed { "pass" } else { "fail" });
        line(&format!("expect.{}.expected", e.key), &e.expected);
        line(&format!("expect.{}.provenance", e.key), &e.provenance.to_string());
    }
    for d in &r.discrepancies {
        line(&format!("discrepancy.{}", d.computed_key), if d.agrees { "agrees" } else { "differs" });
        line(&format!("discrepancy.{}.published", d.computed_key), &d.published);
    }
    line("result", if r.passed() { "pass" } else { "fail" });
    out
}
