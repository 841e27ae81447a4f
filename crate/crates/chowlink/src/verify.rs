//! A named corpus of identities. Each entry is a recipe run against the
//! engine, with its expected value and provenance kept in a data file.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{Map, Value};

use crate::chow_core::DivisorClass;
use crate::compactify::{
    commuting_square_check, euler_number, euler_solver, euler_solver_default, hodge_diamond, normalize, recognize_standard_quadric, replay,
    singularity_label, type_of, Descriptor, P2Descriptor, QuadricCompactification, QuadricDescriptor,
};
use crate::error::{Error, Result};
use crate::exprs::{eval, eval_class, parse};
use crate::links::{commute_blowups_check, fiber_type, inverse_qp_link, pp_link, qp_link, qq_link, twist_bundle, LinkKind, LinkStep};
use crate::models::{
    anticanonical_cube, blow_up_curve, blow_up_point, blown_hirzebruch, boundary_surface, hirzebruch, p2_bundle, p2_bundle_of_degree,
    quadric_cone, quadric_fibration, CurveData, PointData, SurfaceModel, ThreefoldModel, DH, F, XI,
};

const CORPUS: &str = include_str!("../data/corpus.json");
const ANCHORS: &str = include_str!("../data/anchors.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    Paper,
    Trivial,
    Derived,
}

impl Provenance {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "PAPER" => Ok(Provenance::Paper),
            "TRIVIAL" => Ok(Provenance::Trivial),
            "DERIVED" => Ok(Provenance::Derived),
            _ => Err(Error::Descriptor(format!("unknown provenance tag `{s}`"))),
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Paper => "PAPER",
            Provenance::Trivial => "TRIVIAL",
            Provenance::Derived => "DERIVED",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub vars: BTreeMap<String, i64>,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expected {
    Single(String),
    /// One expected value per substitution.
    Cases(Vec<Case>),
    /// The same value over every point of a box of integer ranges.
    Grid { ranges: BTreeMap<String, (i64, i64)>, value: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub name: String,
    pub anchor: String,
    pub provenance: Provenance,
    pub recipe: Value,
    pub expected: Expected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Anchor {
    pub label: String,
    pub in_scope: bool,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryReport {
    pub name: String,
    pub anchor: String,
    pub provenance: Provenance,
    pub expected: String,
    pub computed: String,
    pub cases: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub entries: Vec<EntryReport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| !e.pass).count()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let tag = if e.pass { "PASS" } else { "FAIL" };
            s.push_str(&format!("{tag} {} [{}] ({})\n", e.name, e.anchor, e.provenance));
            s.push_str(&format!("     expected: {}\n     computed: {}\n", e.expected, e.computed));
        }
        s.push_str(&format!("{} entries, {} failed\n", self.entries.len(), self.failures()));
        s
    }

    pub fn to_json(&self) -> Value {
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let mut m = Map::new();
                m.insert("name".into(), e.name.clone().into());
                m.insert("anchor".into(), e.anchor.clone().into());
                m.insert("provenance".into(), e.provenance.to_string().into());
                m.insert("expected".into(), e.expected.clone().into());
                m.insert("computed".into(), e.computed.clone().into());
                m.insert("cases".into(), e.cases.to_string().into());
                m.insert("status".into(), if e.pass { "pass" } else { "fail" }.into());
                Value::Object(m)
            })
            .collect();
        let mut root = Map::new();
        root.insert("format".into(), Value::from(1));
        root.insert("entries".into(), Value::Array(entries));
        root.insert("passed".into(), self.passed().into());
        Value::Object(root)
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Descriptor(msg.into())
}

fn int(v: &Value) -> Result<i64> {
    match v {
        Value::Number(n) => n.as_i64().ok_or_else(|| bad(format!("{n} is not an integer"))),
        Value::String(s) => s.trim().parse().map_err(|_| bad(format!("`{s}` is not an integer"))),
        _ => Err(bad(format!("{v} is not an integer"))),
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing `{key}`")))
}

fn int_field(v: &Value, key: &str) -> Result<i64> {
    int(field(v, key)?)
}

fn u32_field(v: &Value, key: &str) -> Result<u32> {
    u32::try_from(int_field(v, key)?).map_err(|_| bad(format!("`{key}` must be non-negative")))
}

fn bool_field(v: &Value, key: &str) -> Result<bool> {
    match field(v, key)? {
        Value::Bool(b) => Ok(*b),
        Value::String(s) if s == "true" || s == "false" => Ok(s == "true"),
        Value::Number(n) if n.as_i64() == Some(0) || n.as_i64() == Some(1) => Ok(n.as_i64() == Some(1)),
        other => Err(bad(format!("`{key}` = {other} is not a boolean"))),
    }
}

fn str_field<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    field(v, key)?.as_str().ok_or_else(|| bad(format!("`{key}` is not a string")))
}

fn parse_expected(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(bad(format!("expected value {v} is not a string"))),
    }
}

fn parse_entry(v: &Value) -> Result<CorpusEntry> {
    let name = str_field(v, "name")?.to_string();
    let anchor = str_field(v, "anchor")?.to_string();
    let provenance = Provenance::parse(str_field(v, "provenance")?)?;
    let recipe = field(v, "recipe")?.clone();
    let expected = if let Some(cases) = v.get("cases") {
        let cases = cases.as_array().ok_or_else(|| bad(format!("{name}: `cases` is not a list")))?;
        let mut out = Vec::new();
        for c in cases {
            let vars = field(c, "vars")?.as_object().ok_or_else(|| bad(format!("{name}: `vars` is not an object")))?;
            let vars = vars.iter().map(|(k, x)| Ok((k.clone(), int(x)?))).collect::<Result<_>>()?;
            out.push(Case { vars, expected: parse_expected(field(c, "expected")?)? });
        }
        Expected::Cases(out)
    } else if let Some(grid) = v.get("grid") {
        let grid = grid.as_object().ok_or_else(|| bad(format!("{name}: `grid` is not an object")))?;
        let mut ranges = BTreeMap::new();
        for (k, r) in grid {
            match r.as_array().map(Vec::as_slice) {
                Some([lo, hi]) => ranges.insert(k.clone(), (int(lo)?, int(hi)?)),
                _ => return Err(bad(format!("{name}: grid range for `{k}` is not [lo, hi]"))),
            };
        }
        Expected::Grid { ranges, value: parse_expected(field(v, "expected")?)? }
    } else {
        Expected::Single(parse_expected(field(v, "expected")?)?)
    };
    Ok(CorpusEntry { name, anchor, provenance, recipe, expected })
}

pub fn load_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    let v: Value = serde_json::from_str(text).map_err(|e| bad(format!("corpus: {e}")))?;
    if int_field(&v, "format")? != 1 {
        return Err(bad("corpus format must be 1"));
    }
    field(&v, "entries")?.as_array().ok_or_else(|| bad("`entries` is not a list"))?.iter().map(parse_entry).collect()
}

/// The corpus shipped with the crate.
pub fn corpus() -> Vec<CorpusEntry> {
    load_corpus(CORPUS).expect("embedded corpus parses")
}

pub fn anchors() -> Vec<Anchor> {
    let v: Value = serde_json::from_str(ANCHORS).expect("embedded manifest parses");
    v["anchors"]
        .as_array()
        .expect("anchor list")
        .iter()
        .map(|a| Anchor {
            label: a["label"].as_str().expect("label").to_string(),
            in_scope: a["scope"] == "corpus",
            reason: a.get("reason").and_then(Value::as_str).map(str::to_string),
        })
        .collect()
}

/// In-scope anchors without an entry, entry anchors missing from the
/// manifest, and equation anchors used by more than one entry.
pub fn unmapped_anchors(entries: &[CorpusEntry], manifest: &[Anchor]) -> Vec<String> {
    let mut uses: BTreeMap<&str, usize> = BTreeMap::new();
    for e in entries {
        *uses.entry(e.anchor.as_str()).or_default() += 1;
    }
    let mut out = Vec::new();
    let scoped: BTreeSet<&str> = manifest.iter().filter(|a| a.in_scope).map(|a| a.label.as_str()).collect();
    for a in &scoped {
        match uses.get(a) {
            None => out.push(format!("{a}: no entry")),
            Some(&n) if n > 1 && a.starts_with("eq:") => out.push(format!("{a}: {n} entries")),
            _ => {}
        }
    }
    for a in uses.keys() {
        if !scoped.contains(a) {
            out.push(format!("{a}: not an in-scope anchor"));
        }
    }
    out
}

enum Outcome {
    Num(BigRational),
    Text(String),
    Class(DivisorClass, Target),
}

/// A model built from a recipe: a threefold or a surface.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    Threefold(ThreefoldModel),
    Surface(SurfaceModel),
}

impl Target {
    pub fn eval(&self, text: &str) -> Result<BigRational> {
        let e = parse(text)?;
        match self {
            Target::Threefold(m) => eval(&e, m),
            Target::Surface(s) => eval(&e, s),
        }
    }

    pub fn class(&self, text: &str) -> Result<DivisorClass> {
        let e = parse(text)?;
        match self {
            Target::Threefold(m) => eval_class(&e, m),
            Target::Surface(s) => eval_class(&e, s),
        }
    }

    fn threefold(&mut self) -> Result<&mut ThreefoldModel> {
        match self {
            Target::Threefold(m) => Ok(m),
            Target::Surface(_) => Err(Error::WrongModel("operation needs a threefold".into())),
        }
    }
}

struct State {
    target: Target,
    curve: Option<CurveData>,
    step: Option<LinkStep>,
}

fn build_model(v: &Value) -> Result<Target> {
    let obj = v.as_object().ok_or_else(|| bad("model is not an object"))?;
    let (kind, args) = obj.iter().next().ok_or_else(|| bad("empty model"))?;
    let list = |n: usize| -> Result<Vec<i64>> {
        let a = args.as_array().ok_or_else(|| bad(format!("`{kind}` takes a list")))?;
        if a.len() != n {
            return Err(bad(format!("`{kind}` takes {n} numbers")));
        }
        a.iter().map(int).collect()
    };
    let u = |v: i64| u32::try_from(v).map_err(|_| bad(format!("{v} is negative")));
    Ok(match kind.as_str() {
        "p2_bundle" => {
            let t = list(3)?;
            Target::Threefold(p2_bundle(t[0], t[1], t[2]))
        }
        "p2_degree" => Target::Threefold(p2_bundle_of_degree(BigInt::from(int(args)?))),
        "quadric" => {
            let t = list(2)?;
            Target::Threefold(quadric_fibration(t[0], t[1]))
        }
        "hirzebruch" => Target::Surface(hirzebruch(u(int(args)?)?)),
        "blown_hirzebruch" => Target::Surface(blown_hirzebruch(u(int(args)?)?)),
        "boundary_surface" => {
            let t = list(2)?;
            Target::Surface(boundary_surface(u(t[0])?, u(t[1])?))
        }
        "quadric_cone" => Target::Surface(quadric_cone()),
        _ => return Err(bad(format!("unknown model `{kind}`"))),
    })
}

fn curve(v: &Value, st: &State) -> Result<CurveData> {
    if v.as_str() == Some("@last") {
        return st.curve.clone().ok_or_else(|| bad("no curve from an earlier step"));
    }
    let genus = u64::try_from(v.get("genus").map(int).transpose()?.unwrap_or(0)).map_err(|_| bad("negative genus"))?;
    let mut c = CurveData::new(genus);
    if let Some(h) = v.get("hits").and_then(Value::as_object) {
        for (g, x) in h {
            c = c.hit(g, int(x)?);
        }
    }
    if let Some(m) = v.get("mults").and_then(Value::as_object) {
        for (g, x) in m {
            c = c.mult(g, u32::try_from(int(x)?).map_err(|_| bad("negative multiplicity"))?);
        }
    }
    Ok(c)
}

fn point(v: &Value) -> Result<PointData> {
    let mut p = PointData::new();
    if let Some(m) = v.get("mults").and_then(Value::as_object) {
        for (g, x) in m {
            p = p.mult(g, u32::try_from(int(x)?).map_err(|_| bad("negative multiplicity"))?);
        }
    }
    Ok(p)
}

fn track(st: &mut State, v: &Value) -> Result<()> {
    let obj = v.as_object().ok_or_else(|| bad("`track` is not an object"))?;
    for (name, text) in obj {
        let text = text.as_str().ok_or_else(|| bad("tracked class is not a string"))?;
        let d = st.target.class(text)?;
        let m = st.target.threefold()?;
        m.tracked.insert(name.clone(), d);
    }
    Ok(())
}

fn apply_op(st: &mut State, op: &Value) -> Result<()> {
    let obj = op.as_object().ok_or_else(|| bad("op is not an object"))?;
    let (name, args) = obj.iter().next().ok_or_else(|| bad("empty op"))?;
    match name.as_str() {
        "track" => track(st, args)?,
        "blow_up_curve" => {
            let c = curve(args, st)?;
            let m = st.target.threefold()?;
            *m = blow_up_curve(m, &c)?;
        }
        "blow_up_point" => {
            let p = point(args)?;
            let m = st.target.threefold()?;
            *m = blow_up_point(m, &p);
        }
        "blow_up_fiber_center" => {
            // the center of a pp-link: a point, or a line of a fiber
            let p = point(args)?;
            let m = st.target.threefold()?;
            *m = match int_field(args, "dim")? {
                0 => blow_up_point(m, &p),
                1 => {
                    let mut line = CurveData::new(0).hit(XI, 1).hit(F, 0);
                    line.mults = p.mults;
                    blow_up_curve(m, &line)?
                }
                n => return Err(bad(format!("center dimension {n}"))),
            };
        }
        "twist" => {
            let k = int(args)?;
            let m = st.target.threefold()?;
            *m = twist_bundle(m, k)?.0;
        }
        "pp_link" => {
            let n = u8::try_from(int_field(args, "dim")?).map_err(|_| bad("bad dim"))?;
            let inb = bool_field(args, "in_boundary")?;
            let boundary = st.target.class(str_field(args, "boundary")?)?;
            let m = st.target.threefold()?;
            let (p, step) = pp_link(m, n, &boundary, inb)?;
            *m = p;
            st.step = Some(step);
        }
        "qp_link" => {
            let c = curve(field(args, "curve")?, st)?;
            let m = st.target.threefold()?;
            let (p, b, step) = qp_link(m, &c)?;
            *m = p;
            st.curve = Some(b);
            st.step = Some(step);
        }
        "inverse_qp_link" => {
            let c = curve(field(args, "curve")?, st)?;
            let sub = st.target.class(str_field(args, "sub_bundle")?)?;
            let m = st.target.threefold()?;
            let (q, s, step) = inverse_qp_link(m, &c, &sub)?;
            *m = q;
            st.curve = Some(s);
            st.step = Some(step);
        }
        "qq_link" => {
            let c = curve(field(args, "curve")?, st)?;
            let m = st.target.threefold()?;
            let (q, l, step) = qq_link(m, &c)?;
            *m = q;
            st.curve = Some(l);
            st.step = Some(step);
        }
        _ => return Err(bad(format!("unknown op `{name}`"))),
    }
    Ok(())
}

fn failing(checks: &[crate::models::Check]) -> Option<String> {
    let bad: Vec<_> = checks.iter().filter(|c| !c.pass).map(|c| format!("{}: expected {}, got {}", c.name, c.expected, c.computed)).collect();
    (!bad.is_empty()).then(|| bad.join("; "))
}

fn model_result(st: &mut State, v: &Value) -> Result<Outcome> {
    let obj = v.as_object().ok_or_else(|| bad("result is not an object"))?;
    let (name, args) = obj.iter().next().ok_or_else(|| bad("empty result"))?;
    Ok(match name.as_str() {
        "genus" => Outcome::Num(BigInt::from(st.curve.as_ref().ok_or_else(|| bad("no curve"))?.genus).into()),
        "bisection_euler" => {
            let s = st.curve.clone().ok_or_else(|| bad("no section from an earlier step"))?;
            let m = st.target.threefold()?;
            let (_, b, step) = qp_link(m, &s)?;
            if let Some(f) = failing(&step.checks) {
                return Ok(Outcome::Text(f));
            }
            Outcome::Num(BigInt::from(6 - 2 * b.genus as i64).into())
        }
        "pp_summary" => {
            let step = st.step.clone().ok_or_else(|| bad("no link step"))?;
            let m = st.target.threefold()?;
            let delta = m.form.cube(&DivisorClass::gen(XI))?;
            let dh = m.tracked(DH).cloned().unwrap_or_default();
            Outcome::Text(format!(
                "deg {delta}; boundary xi + ({})F; new center in boundary {}; new center dim {}",
                dh.coeff(F),
                step.center["new_center_in_boundary"],
                step.center["new_center_dim"]
            ))
        }
        "transform" => {
            let step = st.step.clone().ok_or_else(|| bad("no link step"))?;
            let g = args.as_str().ok_or_else(|| bad("`transform` takes a generator"))?;
            let d = step.transform.get(g).cloned().ok_or_else(|| Error::UnknownGenerator(g.into()))?;
            Outcome::Class(d, st.target.clone())
        }
        "blnorm" => {
            let c = curve(field(args, "curve")?, st)?;
            let on = bool_field(args, "point_on_curve")?;
            let m = st.target.threefold()?;
            let r = commute_blowups_check(m, &c, on)?;
            match failing(&r.checks) {
                Some(f) => Outcome::Text(f),
                None => Outcome::Num(r.twist_shift.into()),
            }
        }
        "pqqpp" => {
            let s = curve(field(args, "section")?, st)?;
            let l = curve(field(args, "ruling")?, st)?;
            let m = st.target.threefold()?.clone();
            let r = commuting_square_check(&m, &s, &l, bool_field(args, "meets")?)?;
            Outcome::Text(match failing(&r.checks) {
                None if r.consistent => "commutes".into(),
                None => "inconsistent".into(),
                Some(f) => f,
            })
        }
        "cube" => Outcome::Num(anticanonical_cube(st.target.threefold()?)?.into()),
        _ => return Err(bad(format!("unknown result `{name}`"))),
    })
}

fn descriptor(v: &Value) -> Result<Descriptor> {
    Descriptor::from_json(v)
}

fn standalone(name: &str, v: &Value) -> Result<Outcome> {
    let num = |x: i64| Outcome::Num(BigInt::from(x).into());
    Ok(match name {
        "euler_solver" => {
            let set = if v.get("bound").is_some() {
                let opts: Vec<u32> = field(v, "options")?.as_array().ok_or_else(|| bad("options"))?.iter().map(|x| int(x).map(|i| i as u32)).collect::<Result<_>>()?;
                euler_solver(&opts, int_field(v, "bound")?, u32_field(v, "h_max")?, u32_field(v, "sigma_max")?)
            } else {
                euler_solver_default()
            };
            let items: Vec<String> = set.iter().map(|(h, s, e)| format!("({h},{s},{e})")).collect();
            Outcome::Text(format!("{{{}}}", items.join(",")))
        }
        "hodge_euler" => num(euler_number(&hodge_diamond(u32_field(v, "h12")?))),
        "hodge_entry" => {
            let (p, q) = (u32_field(v, "p")? as usize, u32_field(v, "q")? as usize);
            let d = hodge_diamond(u32_field(v, "h12")?);
            num(d.get(p + q).and_then(|row| row.get(p)).copied().ok_or_else(|| bad("outside the diamond"))? as i64)
        }
        "eu_boundary" => {
            // fibers over A^1 minus sigma are lines, those over sigma pairs of lines
            let sigma = int_field(v, "sigma")?;
            num(2 * (1 - sigma) + 3 * sigma)
        }
        "euler_balance" => {
            let eu_q = euler_number(&hodge_diamond(u32_field(v, "h12")?));
            let sigma = int_field(v, "sigma")?;
            let eu_dh = 2 * (1 - sigma) + 3 * sigma;
            num(eu_q - (1 + eu_dh + int_field(v, "eu_df")?))
        }
        "fiber_type" => {
            Outcome::Text(fiber_type(bool_field(v, "t_in_sigma")?, bool_field(v, "b_meets")?, bool_field(v, "e_equals_h")?)?.to_string())
        }
        "label" => Outcome::Text(singularity_label(u32_field(v, "m")?).to_string()),
        "type_of" => {
            let (m, d) = (u32_field(v, "m")?, u32_field(v, "d")?);
            let desc = QuadricDescriptor::normal(m, d, 40);
            let lat = desc.lattice()?.ok_or_else(|| bad("lattice"))?;
            let st = QuadricCompactification::normal(m, d, lat.a, Some(0), desc.flags())?;
            num(type_of(&st)? as i64)
        }
        "lattice" => {
            let desc = match descriptor(field(v, "descriptor")?)? {
                Descriptor::Quadric(q) => q,
                Descriptor::P2(_) => return Err(Error::WrongModel("lattice needs a quadric descriptor".into())),
            };
            let lat = desc.lattice()?.ok_or_else(|| Error::Undetermined(desc.missing_lattice()))?;
            Outcome::Text(format!("a = {}, H^3 = {}", lat.a, lat.h3))
        }
        "recognize_standard" => {
            let cube = int_field(v, "cube")?;
            // a from (-K)^3 = 8 h3 + 24 a with h3 = 8 - 4a
            let twice = 64 - cube;
            if twice % 8 != 0 {
                return Err(Error::NotStandard(format!("(-K)^3 = {cube} is not 64 - 8a")));
            }
            let desc = QuadricDescriptor::normal(0, 0, cube);
            let st = QuadricCompactification::normal(0, 0, BigInt::from(twice / 8), Some(0), desc.flags())?;
            recognize_standard_quadric(&st)?;
            Outcome::Text(format!("a = {}, (-K)^3 = {}", st.a(), anticanonical_cube(&st.ambient)?))
        }
        "classify" => {
            let v = match descriptor(field(v, "descriptor")?)? {
                Descriptor::Quadric(q) => crate::compactify::classify_quadric(&q),
                Descriptor::P2(_) => crate::compactify::Verdict::IsA3,
            };
            Outcome::Text(
                match v {
                    crate::compactify::Verdict::IsA3 => "IsA3",
                    crate::compactify::Verdict::NotA3(_) => "NotA3",
                    crate::compactify::Verdict::Undetermined(_) => "Undetermined",
                }
                .into(),
            )
        }
        "normalize" => {
            let c = normalize(&descriptor(field(v, "descriptor")?)?)?;
            let mut s = format!("{} in {} steps", c.final_model.name(), c.step_count());
            if !c.all_checks_pass() {
                s.push_str(", failing checks");
            }
            if failing(&replay(&c)?).is_some() {
                s.push_str(", replay differs");
            }
            Outcome::Text(s)
        }
        "p2_phase2" => {
            // signed count of links between F_0 boundaries: + line links, - point links
            let desc = P2Descriptor::new(int_field(v, "delta")?, int_field(v, "e")?, 0);
            let c = normalize(&Descriptor::P2(desc))?;
            let mut n = 0i64;
            for s in &c.steps {
                match s.step.kind {
                    LinkKind::PPLink { center_dim: 1, .. } => n += 1,
                    LinkKind::PPLink { center_dim: 0, .. } => n -= 1,
                    _ => {}
                }
            }
            if failing(&c.steps.iter().flat_map(|s| s.step.checks.clone()).collect::<Vec<_>>()).is_some() {
                return Ok(Outcome::Text("failing checks".into()));
            }
            num(n)
        }
        _ => return Err(bad(format!("unknown op `{name}`"))),
    })
}

fn build_state(recipe: &Value) -> Result<State> {
    let mut st = State { target: build_model(field(recipe, "model")?)?, curve: None, step: None };
    if let Some(t) = recipe.get("track") {
        track(&mut st, t)?;
    }
    for op in recipe.get("ops").and_then(Value::as_array).map(Vec::as_slice).unwrap_or(&[]) {
        apply_op(&mut st, op)?;
    }
    Ok(st)
}

/// Builds the model of a recipe (`model`, optional `track` and `ops`), as
/// used by model files.
pub fn build_target(recipe: &Value) -> Result<Target> {
    Ok(build_state(recipe)?.target)
}

fn compute(recipe: &Value) -> Result<Outcome> {
    if let Some(op) = recipe.get("op").and_then(Value::as_str) {
        return standalone(op, recipe);
    }
    let mut st = build_state(recipe)?;
    if let Some(e) = recipe.get("eval").and_then(Value::as_str) {
        return Ok(Outcome::Num(st.target.eval(e)?));
    }
    if let Some(e) = recipe.get("class").and_then(Value::as_str) {
        let d = st.target.class(e)?;
        return Ok(Outcome::Class(d, st.target));
    }
    model_result(&mut st, field(recipe, "result")?)
}

/// Computed text and whether it matches `expected`.
fn judge(recipe: &Value, expected: &str) -> (String, bool) {
    match compute(recipe) {
        Ok(Outcome::Num(v)) => {
            let s = v.to_string();
            let ok = s == expected.trim();
            (s, ok)
        }
        Ok(Outcome::Text(s)) => {
            let ok = s == expected.trim();
            (s, ok)
        }
        Ok(Outcome::Class(d, target)) => {
            let ok = if expected.trim() == "0" { d.is_zero() } else { target.class(expected).map(|e| e == d).unwrap_or(false) };
            (d.to_string(), ok)
        }
        Err(e) => {
            let k = e.kind().to_string();
            let ok = k == expected.trim();
            (if ok { k } else { format!("{k}: {e}") }, ok)
        }
    }
}

fn substitute(recipe: &Value, vars: &BTreeMap<String, i64>) -> Value {
    match recipe {
        Value::String(s) => {
            let mut out = s.clone();
            for (k, v) in vars {
                out = out.replace(&format!("{{{k}}}"), &v.to_string());
            }
            match out.parse::<i64>() {
                Ok(n) if s.starts_with('{') && s.ends_with('}') => Value::from(n),
                _ => Value::String(out),
            }
        }
        Value::Array(a) => Value::Array(a.iter().map(|x| substitute(x, vars)).collect()),
        Value::Object(o) => Value::Object(o.iter().map(|(k, x)| (k.clone(), substitute(x, vars))).collect()),
        other => other.clone(),
    }
}

fn show_vars(vars: &BTreeMap<String, i64>) -> String {
    vars.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
}

fn grid_points(ranges: &BTreeMap<String, (i64, i64)>) -> Vec<BTreeMap<String, i64>> {
    let mut pts = vec![BTreeMap::new()];
    for (k, &(lo, hi)) in ranges {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |v| {
                    let mut q = p.clone();
                    q.insert(k.clone(), v);
                    q
                })
            })
            .collect();
    }
    pts
}

pub fn run_entry(e: &CorpusEntry) -> EntryReport {
    let (expected, computed, cases, pass) = match &e.expected {
        Expected::Single(x) => {
            let (c, ok) = judge(&e.recipe, x);
            (x.clone(), c, 1, ok)
        }
        Expected::Cases(cases) => {
            let mut exp = Vec::new();
            let mut got = Vec::new();
            let mut all = true;
            for c in cases {
                let (g, ok) = judge(&substitute(&e.recipe, &c.vars), &c.expected);
                all &= ok;
                let v = show_vars(&c.vars);
                exp.push(format!("{v}: {}", c.expected));
                got.push(if ok { format!("{v}: {g}") } else { format!("{v}: {g} (mismatch)") });
            }
            (exp.join("; "), got.join("; "), cases.len(), all)
        }
        Expected::Grid { ranges, value } => {
            let pts = grid_points(ranges);
            let span: Vec<String> = ranges.iter().map(|(k, (lo, hi))| format!("{k} in {lo}..{hi}")).collect();
            let mut first_bad = None;
            for p in &pts {
                let (g, ok) = judge(&substitute(&e.recipe, p), value);
                if !ok {
                    first_bad = Some(format!("{g} at {}", show_vars(p)));
                    break;
                }
            }
            let exp = format!("{value} for {} ({} points)", span.join(", "), pts.len());
            match first_bad {
                None => (exp.clone(), exp, pts.len(), true),
                Some(b) => (exp, b, pts.len(), false),
            }
        }
    };
    EntryReport { name: e.name.clone(), anchor: e.anchor.clone(), provenance: e.provenance, expected, computed, cases, pass }
}

/// Runs every entry whose name contains `filter`.
pub fn run_corpus(filter: Option<&str>) -> Report {
    let entries = corpus();
    let chosen: Vec<&CorpusEntry> = entries.iter().filter(|e| filter.is_none_or(|f| e.name.contains(f))).collect();
    let entries = std::thread::scope(|s| {
        let handles: Vec<_> = chosen.iter().map(|e| s.spawn(move || run_entry(e))).collect();
        handles.into_iter().map(|h| h.join().expect("entry thread")).collect()
    });
    Report { entries }
}

/// Number of lattice points an entry covers, for reporting.
pub fn case_count(e: &CorpusEntry) -> usize {
    match &e.expected {
        Expected::Single(_) => 1,
        Expected::Cases(c) => c.len(),
        Expected::Grid { ranges, .. } => ranges.values().map(|(lo, hi)| (hi - lo + 1).max(0).to_usize().unwrap_or(0)).product(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_is_covered() {
        let missing = unmapped_anchors(&corpus(), &anchors());
        assert!(missing.is_empty(), "{missing:?}");
    }

    #[test]
    fn names_are_unique() {
        let c = corpus();
        let names: BTreeSet<_> = c.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names.len(), c.len());
    }

    #[test]
    fn filter_selects_by_name() {
        let r = run_corpus(Some("eq-2-4"));
        assert_eq!(r.entries.len(), 2);
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn full_corpus_passes() {
        let r = run_corpus(None);
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn failures_are_reported() {
        let text = r#"{"format": 1, "entries": [
            {"name": "wrong", "anchor": "x", "provenance": "TRIVIAL",
             "recipe": {"model": {"p2_bundle": [0, 0, 1]}, "eval": "xi^3"}, "expected": "2"}]}"#;
        let e = load_corpus(text).unwrap();
        let r = run_entry(&e[0]);
        assert!(!r.pass);
        assert_eq!(r.computed, "1");
    }
}
