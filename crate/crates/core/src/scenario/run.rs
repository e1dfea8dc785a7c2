//! Executes parsed scenarios and compares computed values with expectations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::parse::{
    CheckKind, ClassSpec, Construct, DynkinStep, Expectation, Fact, InvariantsStep, LineSpec, Provenance, Scenario,
    SearchStep, SeifertStep, Step, StepKind,
};
use super::value::Value;
use super::StepError;
use crate::constructions::{k3_a19_resolution, pencil_chain, pencil_resolution};
use crate::dynkin::{check_z1, check_z2, eu};
use crate::group::FgAbelianGroup;
use crate::lattice::{self, IntMatrix};
use crate::obstruction::{
    derive_sum_relation, divisibility_invariant_holds, exhaustive_search, sign_argument_holds, sum_relation_pairings,
    SearchOptions, TorusPairCandidate,
};
use crate::orbifold::{contract_chain, IsotropyData, OrbifoldSurface};
use crate::seifert::{
    chern_class_numerator, check_h1_zero, classes_away_from_points, h2_total_space, kahler_check,
    primitive_combination, DeclaredFact, LocalInvariant, NamedClass, SeifertData,
};
use crate::smale_barden::{gk_condition, invariants_from_group, null_sasakian_constraints};
use crate::surface::{kodaira_dimension, make_hirzebruch, multiplication_degree, BlowUpCenter, SurfaceModel};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectationResult {
    pub key: String,
    pub expected: String,
    pub actual: Option<String>,
    pub provenance: Provenance,
    pub citation: Option<String>,
    pub passed: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscrepancyResult {
    pub subject: String,
    pub computed_key: String,
    pub computed: Option<String>,
    pub published: String,
    pub agrees: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioReport {
    pub name: String,
    pub description: String,
    pub params: BTreeMap<String, i128>,
    pub facts: Vec<Fact>,
    pub values: BTreeMap<String, Value>,
    pub expectations: Vec<ExpectationResult>,
    pub discrepancies: Vec<DiscrepancyResult>,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.expectations.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> usize {
        self.expectations.iter().filter(|e| !e.passed).count()
    }

    pub fn value(&self, key: &str) -> Option<&Value> {
        self.values.get(key)
    }
}

#[derive(Default)]
struct State {
    surface: Option<SurfaceModel>,
    orbifold: Option<OrbifoldSurface>,
    group: Option<FgAbelianGroup>,
    values: BTreeMap<String, Value>,
}

type StepResult<T> = Result<T, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

impl State {
    fn set(&mut self, key: impl Into<String>, v: Value) {
        self.values.insert(key.into(), v);
    }

    fn surface(&self) -> StepResult<&SurfaceModel> {
        if let Some(x) = &self.orbifold {
            return Ok(x.resolution());
        }
        self.surface.as_ref().ok_or_else(|| "no surface has been constructed".to_string())
    }

    fn smooth_surface(&self) -> StepResult<&SurfaceModel> {
        if self.orbifold.is_some() {
            return Err("the surface has already been contracted".into());
        }
        self.surface()
    }

    fn orbifold(&self) -> StepResult<OrbifoldSurface> {
        match &self.orbifold {
            Some(x) => Ok(x.clone()),
            None => Ok(OrbifoldSurface::from_smooth(self.surface()?)),
        }
    }

    fn set_surface(&mut self, s: SurfaceModel) {
        self.values.retain(|k, _| !k.starts_with("surface."));
        self.set("surface.rank", Value::int(s.rank() as u64));
        self.set("surface.k_squared", Value::Int(s.canonical_square()));
        self.set("surface.unimodular", Value::Bool(s.is_unimodular()));
        for c in s.curves() {
            self.set(format!("surface.curve.{}.square", c.name), Value::Int(s.intersect(&c.vector, &c.vector)));
            self.set(format!("surface.curve.{}.genus", c.name), Value::int(c.genus));
        }
        self.surface = Some(s);
    }

    fn set_orbifold(&mut self, x: OrbifoldSurface) {
        self.values.retain(|k, _| !k.starts_with("orbifold."));
        self.set("orbifold.b2", Value::int(x.b2() as u64));
        self.set("orbifold.points", Value::int(x.singular_points().len() as u64));
        for (i, p) in x.singular_points().iter().enumerate() {
            let k = format!("orbifold.point.{}", i + 1);
            self.set(format!("{k}.singularity"), Value::text(p.singularity.to_string()));
            self.set(format!("{k}.order"), Value::Int(p.order().clone()));
            self.set(format!("{k}.chain"), Value::text(p.chain().to_string()));
            self.set(format!("{k}.multiplicity"), Value::Int(x.point_multiplicity(i)));
        }
        for c in x.curves() {
            let sq = x.self_intersection(&c.name).expect("surviving curve");
            self.set(format!("orbifold.curve.{}.square", c.name), Value::rational(sq));
            self.set(format!("orbifold.curve.{}.genus", c.name), Value::int(c.genus));
        }
        self.set("orbifold.calabi_yau", Value::Bool(x.is_calabi_yau()));
        self.set("orbifold.reresolve", Value::Bool(x.reresolve() == x.split_basis_gram()));
        if let Some(sig) = signature(&x) {
            self.set("orbifold.signature", Value::text(sig));
        }
        self.orbifold = Some(x);
    }
}

fn signature(x: &OrbifoldSurface) -> Option<String> {
    if x.b2() == 0 {
        return None;
    }
    let (p, n, z) = x.gram_q().inertia();
    Some(format!("({p}, {n}, {z})"))
}

/// Parses a linear combination such as `3*H - E1 - 2 E2` over curve names and
/// basis labels.
pub fn parse_class(s: &SurfaceModel, expr: &str) -> StepResult<Vec<BigInt>> {
    let mut out = vec![BigInt::zero(); s.rank()];
    let text = expr.replace('-', " - ").replace('+', " + ");
    let mut sign = BigInt::one();
    let mut coef: Option<BigInt> = None;
    let mut any = false;
    for tok in text.split_whitespace() {
        match tok {
            "+" => {}
            "-" => sign = -sign,
            _ => {
                let (c, name) = match tok.split_once('*') {
                    Some((c, n)) => (Some(c), n),
                    None => (None, tok),
                };
                if let Some(c) = c {
                    let c: BigInt = c.parse().map_err(|_| format!("bad coefficient `{c}` in `{expr}`"))?;
                    coef = Some(coef.unwrap_or_else(BigInt::one) * c);
                }
                if name.is_empty() {
                    continue;
                }
                if let Ok(n) = name.parse::<BigInt>() {
                    coef = Some(coef.unwrap_or_else(BigInt::one) * n);
                    continue;
                }
                let v = match s.curve(name) {
                    Some(c) => c.vector.clone(),
                    None => s.basis_vector(name).ok_or_else(|| format!("unknown class `{name}` in `{expr}`"))?,
                };
                let k = &sign * coef.take().unwrap_or_else(BigInt::one);
                for (o, x) in out.iter_mut().zip(v) {
                    *o += &k * x;
                }
                sign = BigInt::one();
                any = true;
            }
        }
    }
    if !any || coef.is_some() {
        return Err(format!("`{expr}` is not a linear combination of classes"));
    }
    Ok(out)
}

fn named_classes(s: &SurfaceModel, exprs: &[String]) -> StepResult<Vec<NamedClass>> {
    exprs.iter().map(|e| Ok(NamedClass::new(e.clone(), parse_class(s, e)?))).collect()
}

fn fact<'a>(sc: &'a Scenario, id: &str) -> &'a Fact {
    sc.fact(id).expect("fact references are checked at parse time")
}

fn run_seifert(st: &mut State, sc: &Scenario, step: &SeifertStep) -> StepResult<()> {
    let base = st.orbifold()?;
    let invariants: Vec<LocalInvariant> =
        step.isotropy.iter().map(|(d, m, b)| LocalInvariant::new(d.clone(), m.clone(), b.clone())).collect();
    let mut data = SeifertData::new(&base, invariants).map_err(err)?;
    let res = base.resolution().clone();
    let away = classes_away_from_points(&base);
    let tests = match &step.test_classes {
        ClassSpec::Away => away.clone(),
        ClassSpec::List(l) => named_classes(&res, l)?,
    };
    data = data.with_test_classes(tests).map_err(err)?;
    if let Some(l) = &step.surjectivity_classes {
        data = data.with_surjectivity_classes(named_classes(&res, l)?).map_err(err)?;
    }
    match &step.line_class {
        None => {}
        Some(LineSpec::Expr(e)) => data = data.with_line_class(parse_class(&res, e)?).map_err(err)?,
        Some(LineSpec::Primitive) => {
            let l = primitive_combination(&base, &away, 2)
                .ok_or("no primitive combination of the classes away from the points")?;
            data = data.with_line_class(l).map_err(err)?;
        }
    }
    let h1 = fact(sc, &step.h1_base);
    let declared = DeclaredFact::new(h1.holds, h1.citation.clone());
    st.set("seifert.m", Value::Int(data.m().clone()));
    let verdict = check_h1_zero(&data, &declared).map_err(err)?;
    st.set("seifert.h1.base", Value::Bool(verdict.base_condition()));
    st.set("seifert.h1.surjective", Value::Bool(verdict.surjective()));
    st.set("seifert.h1.primitive", Value::Bool(verdict.primitive()));
    st.set("seifert.h1.pairing_gcd", Value::Int(verdict.chern_pairing_gcd.clone()));
    st.set("seifert.h1.holds", Value::Bool(verdict.holds()));
    if let Some(id) = &step.pi1_orb {
        let orb = fact(sc, id).holds;
        st.set("seifert.pi1_orb_trivial", Value::Bool(orb));
        st.set("seifert.simply_connected", Value::Bool(orb && verdict.holds()));
    }
    for p in &verdict.surjectivity {
        st.set(format!("seifert.h1.rank_mod.{}", p.p), Value::int(p.rank as u64));
    }
    if let Some(reason) = verdict.failure() {
        st.set("seifert.h1.failure", Value::text(reason));
    }
    let c = chern_class_numerator(&data);
    let away_rows: Vec<Vec<BigInt>> = away.iter().map(|t| res.gram().apply(&t.vector)).collect();
    if !away_rows.is_empty() {
        let g = lattice::pairing_gcd(&c, &IntMatrix::from_big_rows(&away_rows, res.rank()));
        st.set("seifert.away_pairing_gcd", Value::Int(g));
    }
    st.group = None;
    if verdict.holds() {
        let g = h2_total_space(&data, &declared).map_err(err)?;
        st.set("seifert.h2", Value::Group(g.clone()));
        st.set("seifert.h2.torsion_order", Value::Int(g.torsion_order()));
        st.group = Some(g);
    }
    if !step.ample.is_empty() {
        let k = kahler_check(&data, &named_classes(&res, &step.ample)?).map_err(err)?;
        st.set("seifert.c1_squared", Value::rational(k.c1_squared.clone()));
        st.set("seifert.kahler", Value::Bool(k.holds()));
    }
    st.set_orbifold(data.base().clone());
    Ok(())
}

fn run_invariants(st: &mut State, sc: &Scenario, step: &InvariantsStep) -> StepResult<()> {
    let g = match (&step.group, &st.group) {
        (Some(g), _) => g.clone(),
        (None, Some(g)) => g.clone(),
        (None, None) => return Err("no H_2 available: give `group` or run a Seifert step with H_1 = 0".into()),
    };
    let spin = match &step.spin_fact {
        Some(id) => fact(sc, id).holds,
        None => step.spin,
    };
    let inv = invariants_from_group(&g, spin, step.barden);
    let p = step.label.clone().unwrap_or_else(|| "invariants".into());
    st.set(format!("{p}.group"), Value::Group(g.clone()));
    st.set(format!("{p}.k"), Value::int(inv.k as u64));
    st.set(format!("{p}.spin"), Value::Bool(inv.spin));
    st.set(format!("{p}.barden"), Value::text(inv.barden_i.to_string()));
    st.set(format!("{p}.torsion_free"), Value::Bool(inv.is_torsion_free()));
    st.set(format!("{p}.t_max"), Value::int(inv.t_max as u64));
    st.set(format!("{p}.c_max"), Value::rational(inv.c_max()));
    for (&q, &t) in &inv.t_table {
        st.set(format!("{p}.t.{q}"), Value::int(t as u64));
    }
    for (&(q, i), &c) in &inv.c_table {
        st.set(format!("{p}.c.{}", crate::group::prime_power(q, i)), Value::int(c as u64));
    }
    st.set(format!("{p}.seifert_realizable"), Value::Bool(inv.warnings.is_empty()));
    let gk = gk_condition(&inv);
    st.set(format!("{p}.gk"), Value::Bool(gk.holds));
    if !gk.reasons.is_empty() {
        st.set(format!("{p}.gk_reasons"), Value::text(gk.reasons.join("; ")));
    }
    let null = null_sasakian_constraints(&inv);
    st.set(format!("{p}.null_admissible"), Value::Bool(null.admissible));
    st.set(format!("{p}.regular_required"), Value::Bool(null.regular_required));
    if !null.reasons.is_empty() {
        st.set(format!("{p}.null_reasons"), Value::text(null.reasons.join("; ")));
    }
    Ok(())
}

fn run_dynkin(st: &mut State, sc: &Scenario, step: &DynkinStep) -> StepResult<()> {
    let p = step.label.clone().unwrap_or_else(|| "dynkin".into());
    let c = &step.configuration;
    st.set(format!("{p}.configuration"), Value::text(c.to_string()));
    st.set(format!("{p}.rank"), Value::int(u64::from(c.total_rank())));
    st.set(format!("{p}.eu"), Value::int(eu(c)));
    let z2 = check_z2(c);
    st.set(format!("{p}.z2"), Value::Bool(z2));
    let rank_ok = !step.ambient_k3 || c.validate_k3().is_ok();
    if step.ambient_k3 {
        st.set(format!("{p}.rank_ok"), Value::Bool(rank_ok));
    }
    let z1 = check_z1(&step.fibers);
    st.set(format!("{p}.z1_count"), Value::int(z1.count as u64));
    st.set(format!("{p}.z1"), Value::Bool(z1.holds));
    let mw = step.mw_fact.as_ref().is_none_or(|id| fact(sc, id).holds);
    if step.mw_fact.is_some() {
        st.set(format!("{p}.mordell_weil_trivial"), Value::Bool(mw));
    }
    st.set(format!("{p}.admissible"), Value::Bool(z1.holds && z2 && rank_ok && mw));
    Ok(())
}

fn run_search(st: &mut State, step: &SearchStep) -> StepResult<()> {
    let p = step.label.clone().unwrap_or_else(|| "search".into());
    let mut opts = SearchOptions::new(step.bound, step.nbound);
    if !step.kahler {
        opts = opts.without_kahler_filter();
    }
    let r = exhaustive_search(opts).map_err(err)?;
    st.set(format!("{p}.examined"), Value::int(r.examined));
    st.set(format!("{p}.arithmetic_survivors"), Value::int(r.arithmetic_survivors.len() as u64));
    st.set(format!("{p}.survivors"), Value::int(r.survivors.len() as u64));
    st.set(format!("{p}.divisibility_invariant"), Value::Bool(divisibility_invariant_holds(&r)));
    st.set(format!("{p}.sign_argument"), Value::Bool(sign_argument_holds(&r)));
    if let Some(c) = r.survivors.first() {
        st.set(format!("{p}.first_survivor"), Value::text(format!("n={} a={} b={}", c.n, c.a, c.b)));
    }
    Ok(())
}

fn run_check(st: &mut State, label: &Option<String>, kind: &CheckKind) -> StepResult<()> {
    let p = label.clone().unwrap_or_else(|| format!("check.{}", kind.name()));
    match kind {
        CheckKind::Disjoint(curves) => {
            let x = st.orbifold()?;
            let mut ok = true;
            for (i, a) in curves.iter().enumerate() {
                for b in &curves[i + 1..] {
                    ok &= x.intersection(a, b).map_err(err)?.is_zero();
                }
            }
            st.set(p, Value::Bool(ok));
        }
        CheckKind::CalabiYau => {
            let x = st.orbifold()?;
            st.set(p, Value::Bool(x.is_calabi_yau()));
        }
        CheckKind::Reresolve => {
            let x = st.orbifold()?;
            st.set(p, Value::Bool(x.reresolve() == x.split_basis_gram()));
        }
        CheckKind::SumRelation { n } => {
            st.set(p, Value::Bool(derive_sum_relation(*n).identities_hold()));
        }
        CheckKind::SumRelationSpot { n, a, b } => {
            let c = TorusPairCandidate::new(*n, *a, *b);
            let (x, y) = sum_relation_pairings(*n, c.d1(), c.d2());
            st.set(format!("{p}.pairings"), Value::text(format!("({x}, {y})")));
            st.set(p, Value::Bool(x == 0 && y == 0));
        }
        CheckKind::PencilBlowDown { degree } => {
            let mut s = pencil_resolution(*degree, 1).map_err(err)?;
            for name in pencil_chain(*degree) {
                s = s.blow_down(&name).map_err(err)?;
            }
            let d = s.curve_vector("D1").map_err(err)?.to_vec();
            st.set(format!("{p}.square"), Value::Int(s.intersect(&d, &d)));
            st.set(format!("{p}.genus"), Value::int(s.curve("D1").expect("D1 survives").genus));
            st.set(format!("{p}.rank"), Value::int(s.rank() as u64));
        }
        CheckKind::MultiplicationDegree { k } => {
            st.set(p, Value::Int(multiplication_degree(*k)));
        }
        CheckKind::Kodaira { k_dot_omega, k_squared } => {
            let v = match kodaira_dimension(*k_dot_omega, *k_squared) {
                Ok(k) => k.to_string(),
                Err(_) => "undefined".into(),
            };
            st.set(p, Value::text(v));
        }
    }
    Ok(())
}

fn run_step(st: &mut State, sc: &Scenario, step: &Step) -> StepResult<()> {
    match &step.kind {
        StepKind::Construct(c) => {
            if st.surface.is_some() {
                return Err("a surface has already been constructed".into());
            }
            let s = match c {
                Construct::Plane => SurfaceModel::projective_plane(),
                Construct::Hirzebruch { n, convention } => make_hirzebruch(*n, *convention),
                Construct::K3A19 => k3_a19_resolution(),
            };
            st.set_surface(s);
        }
        StepKind::Curve { name, class, genus } => {
            let s = st.smooth_surface()?;
            let v = parse_class(s, class)?;
            let s = s.with_curve(name.clone(), v, *genus).map_err(err)?;
            st.set_surface(s);
        }
        StepKind::BlowUp { exceptional, through, infinitely_near } => {
            let mut c = BlowUpCenter::new(exceptional.clone()).through(through.iter().cloned());
            if *infinitely_near {
                c = c.infinitely_near();
            }
            let s = st.smooth_surface()?.blow_up(&c).map_err(err)?;
            st.set_surface(s);
        }
        StepKind::BlowDown { curve } => {
            let s = st.smooth_surface()?.blow_down(curve).map_err(err)?;
            st.set_surface(s);
        }
        StepKind::Contract { chain } => {
            let names: Vec<&str> = chain.iter().map(String::as_str).collect();
            let x = match &st.orbifold {
                Some(x) => x.contract(&names),
                None => contract_chain(st.surface()?, &names),
            }
            .map_err(err)?;
            st.set_orbifold(x);
        }
        StepKind::Isotropy { divisors, intersections } => {
            let mut x = st.orbifold()?;
            for (a, b) in intersections {
                x = x.declare_intersection(a, b).map_err(err)?;
            }
            let data: Vec<IsotropyData> = divisors.iter().map(|(d, m)| IsotropyData::new(d.clone(), m.clone())).collect();
            let x = x.assign_isotropy(&data).map_err(err)?;
            st.set_orbifold(x);
        }
        StepKind::Seifert(s) => run_seifert(st, sc, s)?,
        StepKind::Invariants(s) => run_invariants(st, sc, s)?,
        StepKind::Dynkin(s) => run_dynkin(st, sc, s)?,
        StepKind::Search(s) => run_search(st, s)?,
        StepKind::Check { label, kind } => run_check(st, label, kind)?,
    }
    Ok(())
}

fn compare(e: &Expectation, values: &BTreeMap<String, Value>) -> ExpectationResult {
    let actual = values.get(&e.key);
    let (passed, note) = match actual {
        None => (false, Some("not computed".to_string())),
        Some(v) => match v.matches(&e.expected) {
            Ok(ok) => (ok, None),
            Err(msg) => (false, Some(format!("cannot compare with {} value: {msg}", v.kind()))),
        },
    };
    ExpectationResult {
        key: e.key.clone(),
        expected: e.expected.clone(),
        actual: actual.map(ToString::to_string),
        provenance: e.provenance,
        citation: e.citation.clone(),
        passed,
        note,
    }
}

/// Runs every step in order. A failing step aborts the run.
pub fn execute(sc: &Scenario) -> Result<ScenarioReport, StepError> {
    let mut st = State::default();
    for step in &sc.steps {
        run_step(&mut st, sc, step).map_err(|message| StepError {
            section: step.section.clone(),
            line: step.line,
            message,
        })?;
    }
    for f in &sc.facts {
        st.values.insert(format!("fact.{}", f.id), Value::Bool(f.holds));
    }
    let expectations = sc.expectations.iter().map(|e| compare(e, &st.values)).collect();
    let discrepancies = sc
        .discrepancies
        .iter()
        .map(|d| {
            let v = st.values.get(&d.computed);
            DiscrepancyResult {
                subject: d.subject.clone(),
                computed_key: d.computed.clone(),
                computed: v.map(ToString::to_string),
                published: d.published.clone(),
                agrees: v.and_then(|v| v.matches(&d.published).ok()).unwrap_or(false),
                note: d.note.clone(),
            }
        })
        .collect();
    Ok(ScenarioReport {
        name: sc.name.clone(),
        description: sc.description.clone(),
        params: sc.params.clone(),
        facts: sc.facts.clone(),
        values: st.values,
        expectations,
        discrepancies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_expressions() {
        let s = crate::surface::make_hirzebruch(2, crate::surface::HirzebruchConvention::PositiveSection);
        assert_eq!(parse_class(&s, "2*sigma + f").unwrap(), lattice::int_vec(&[2, 1]));
        assert_eq!(parse_class(&s, "sigma - 2*f").unwrap(), lattice::int_vec(&[1, -2]));
        assert_eq!(parse_class(&s, "-f").unwrap(), lattice::int_vec(&[0, -1]));
        assert_eq!(parse_class(&s, "3 f").unwrap(), lattice::int_vec(&[0, 3]));
        assert!(parse_class(&s, "2*").is_err());
        assert!(parse_class(&s, "g").is_err());
        assert!(parse_class(&s, "").is_err());
    }
}
