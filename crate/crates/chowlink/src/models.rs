//! Threefold and surface models, blow-ups along curves and points, and
//! contractions certified by pattern tags.

use std::collections::BTreeMap;
use std::fmt::Display;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::chow_core::{express, is_unimodular, DivisorClass, GeneratorLabel, Origin, SurfacePairing, TrilinearForm};
use crate::error::{Error, Result};

pub const XI: &str = "xi";
pub const H: &str = "H";
pub const F: &str = "F";
pub const DH: &str = "Dh";
pub const DF: &str = "Df";

/// One named invariant evaluated during a construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

impl Check {
    pub fn eq<T: PartialEq + Display>(name: &str, expected: T, computed: T) -> Self {
        Self { name: name.to_string(), pass: expected == computed, expected: expected.to_string(), computed: computed.to_string() }
    }

    pub fn holds(name: &str, what: &str, pass: bool) -> Self {
        Self { name: name.to_string(), expected: what.to_string(), computed: if pass { what.to_string() } else { format!("not {what}") }, pass }
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveData {
    pub genus: u64,
    pub hits: BTreeMap<String, BigInt>,
    pub mults: BTreeMap<String, u32>,
}

impl CurveData {
    pub fn new(genus: u64) -> Self {
        Self { genus, hits: BTreeMap::new(), mults: BTreeMap::new() }
    }

    pub fn hit(mut self, gen: &str, v: impl Into<BigInt>) -> Self {
        self.hits.insert(gen.to_string(), v.into());
        self
    }

    pub fn mult(mut self, divisor: &str, k: u32) -> Self {
        self.mults.insert(divisor.to_string(), k);
        self
    }

    fn check_against(&self, m: &ThreefoldModel) -> Result<()> {
        for g in m.form.gen_names() {
            if !self.hits.contains_key(&g) {
                return Err(Error::IncompleteCurveData(g));
            }
        }
        for g in self.hits.keys() {
            if !m.form.has(g) {
                return Err(Error::UnknownGenerator(g.clone()));
            }
        }
        Ok(())
    }

    /// D . C for a class on the model.
    pub fn degree_of(&self, d: &DivisorClass) -> Result<BigInt> {
        let mut s = BigInt::zero();
        for (n, c) in d.terms() {
            let h = self.hits.get(n).ok_or_else(|| Error::IncompleteCurveData(n.to_string()))?;
            s += c * h;
        }
        Ok(s)
    }

    /// deg N_C X = (-K . C) - (2 - 2g).
    pub fn normal_degree(&self, m: &ThreefoldModel) -> Result<BigInt> {
        self.check_against(m)?;
        let minus_k = self.degree_of(&m.anticanonical())?;
        Ok(minus_k - BigInt::from(2) + BigInt::from(2 * self.genus))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PointData {
    pub mults: BTreeMap<String, u32>,
}

impl PointData {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn mult(mut self, divisor: &str, k: u32) -> Self {
        self.mults.insert(divisor.to_string(), k);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Center {
    Curve(CurveData),
    Point(PointData),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinkPatternTag {
    PointPattern,
    CurvePattern { e3: BigInt },
    FiberPattern,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    P2Bundle { degree: BigInt, twists: Option<[i64; 3]> },
    QuadricFibration { h3: BigInt, a: BigInt },
    BlowUp { parent: Box<ThreefoldModel>, center: Center, exceptional: String },
    Contraction { pattern: LinkPatternTag, exceptional: DivisorClass },
}

/// A 3-fold over the projective line with its intersection form.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreefoldModel {
    pub kind: ModelKind,
    pub form: TrilinearForm,
    pub canonical: DivisorClass,
    pub fiber: DivisorClass,
    /// Named divisors carried through blow-ups by strict transform.
    pub tracked: BTreeMap<String, DivisorClass>,
    pub history: Vec<String>,
}

impl ThreefoldModel {
    pub fn anticanonical(&self) -> DivisorClass {
        -self.canonical.clone()
    }

    pub fn triple(&self, a: &DivisorClass, b: &DivisorClass, c: &DivisorClass) -> Result<BigInt> {
        self.form.triple(a, b, c)
    }

    pub fn with_tracked(mut self, name: &str, d: DivisorClass) -> Self {
        self.tracked.insert(name.to_string(), d);
        self
    }

    pub fn tracked(&self, name: &str) -> Option<&DivisorClass> {
        self.tracked.get(name)
    }

    pub fn with_kind(mut self, kind: ModelKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn is_p2_bundle(&self) -> bool {
        matches!(self.kind, ModelKind::P2Bundle { .. })
    }

    pub fn is_quadric_fibration(&self) -> bool {
        matches!(self.kind, ModelKind::QuadricFibration { .. })
    }

    /// Same generators, entries, canonical class and fiber.
    pub fn same_lattice(&self, other: &Self) -> bool {
        self.form == other.form && self.canonical == other.canonical && self.fiber == other.fiber
    }

    fn fresh_exceptional(&self) -> String {
        if !self.form.has("E") {
            return "E".into();
        }
        (2..).map(|i| format!("E{i}")).find(|n| !self.form.has(n)).unwrap()
    }
}

pub fn anticanonical_cube(m: &ThreefoldModel) -> Result<BigInt> {
    m.form.cube(&m.anticanonical())
}

fn canonical_twists(a: i64, b: i64, c: i64) -> [i64; 3] {
    let mut t = [a, b, c];
    t.sort_unstable();
    let lo = t[0];
    [t[0] - lo, t[1] - lo, t[2] - lo]
}

/// P(O(a) + O(b) + O(c)); twists are sorted and shifted so the smallest is 0.
pub fn p2_bundle(a: i64, b: i64, c: i64) -> ThreefoldModel {
    let t = canonical_twists(a, b, c);
    let mut m = p2_bundle_of_degree(BigInt::from(t.iter().sum::<i64>()));
    m.kind = ModelKind::P2Bundle { degree: BigInt::from(t.iter().sum::<i64>()), twists: Some(t) };
    m.history = vec![format!("P2-bundle F({},{},{})", t[0], t[1], t[2])];
    m
}

/// A P2-bundle known only through deg E; the splitting is not lattice data.
pub fn p2_bundle_of_degree(degree: BigInt) -> ThreefoldModel {
    let mut form = TrilinearForm::new(vec![GeneratorLabel::basis(XI), GeneratorLabel::basis(F)]);
    form.set(XI, XI, XI, degree.clone());
    form.set(XI, XI, F, 1);
    let canonical = DivisorClass::zero().with(XI, -3).with(F, &degree - BigInt::from(2));
    ThreefoldModel {
        history: vec![format!("P2-bundle of degree {degree}")],
        kind: ModelKind::P2Bundle { degree, twists: None },
        form,
        canonical,
        fiber: DivisorClass::gen(F),
        tracked: BTreeMap::new(),
    }
}

/// Quadric fibration with H^3 = h3, H^2 F = 2 and -K = 2H + aF.
pub fn quadric_fibration(h3: impl Into<BigInt>, a: impl Into<BigInt>) -> ThreefoldModel {
    let (h3, a) = (h3.into(), a.into());
    let mut form = TrilinearForm::new(vec![GeneratorLabel::basis(H), GeneratorLabel::basis(F)]);
    form.set(H, H, H, h3.clone());
    form.set(H, H, F, 2);
    let canonical = DivisorClass::zero().with(H, -2).with(F, -a.clone());
    ThreefoldModel {
        history: vec![format!("quadric fibration H^3={h3} a={a}")],
        kind: ModelKind::QuadricFibration { h3, a },
        form,
        canonical,
        fiber: DivisorClass::gen(F),
        tracked: BTreeMap::new(),
    }
}

fn extend_gens(m: &ThreefoldModel, e: &str) -> TrilinearForm {
    let mut gens = m.form.gens().to_vec();
    gens.push(GeneratorLabel::exceptional(e));
    let mut form = TrilinearForm::new(gens);
    for (k, v) in m.form.entries() {
        form.set(&k[0], &k[1], &k[2], v.clone());
    }
    form
}

fn strict_transforms(m: &ThreefoldModel, mults: &BTreeMap<String, u32>, e: &str) -> BTreeMap<String, DivisorClass> {
    m.tracked
        .iter()
        .map(|(n, d)| {
            let k = mults.get(n).copied().unwrap_or(0);
            (n.clone(), d.clone().with(e, -(k as i64)))
        })
        .collect()
}

pub fn blow_up_curve(m: &ThreefoldModel, c: &CurveData) -> Result<ThreefoldModel> {
    let deg_n = c.normal_degree(m)?;
    let e = m.fresh_exceptional();
    let mut form = extend_gens(m, &e);
    for g in m.form.gen_names() {
        form.set(&g, &e, &e, -c.hits[&g].clone());
    }
    form.set(&e, &e, &e, -deg_n);
    let mut history = m.history.clone();
    history.push(format!("blow up curve of genus {} as {e}", c.genus));
    Ok(ThreefoldModel {
        tracked: strict_transforms(m, &c.mults, &e),
        canonical: m.canonical.clone().with(&e, 1),
        fiber: m.fiber.clone(),
        form,
        history,
        kind: ModelKind::BlowUp { parent: Box::new(m.clone()), center: Center::Curve(c.clone()), exceptional: e },
    })
}

pub fn blow_up_point(m: &ThreefoldModel, p: &PointData) -> ThreefoldModel {
    let e = m.fresh_exceptional();
    let mut form = extend_gens(m, &e);
    form.set(&e, &e, &e, 1);
    let mut history = m.history.clone();
    history.push(format!("blow up point as {e}"));
    ThreefoldModel {
        tracked: strict_transforms(m, &p.mults, &e),
        canonical: m.canonical.clone().with(&e, 2),
        fiber: m.fiber.clone(),
        form,
        history,
        kind: ModelKind::BlowUp { parent: Box::new(m.clone()), center: Center::Point(p.clone()), exceptional: e },
    }
}

/// Contracts a generator of the model, keeping the other generators.
pub fn contract(m: &ThreefoldModel, exc: &DivisorClass, pattern: LinkPatternTag) -> Result<ThreefoldModel> {
    let mut terms = exc.terms();
    let single = match (terms.next(), terms.next()) {
        (Some((n, c)), None) if c.is_one() => Some(n.to_string()),
        _ => None,
    };
    let Some(g) = single else {
        return Err(Error::PatternMismatch(format!("{exc} is not a generator; supply a complementary basis")));
    };
    let basis: Vec<(String, DivisorClass)> =
        m.form.gen_names().into_iter().filter(|n| *n != g).map(|n| (n.clone(), DivisorClass::gen(&n))).collect();
    let (mut out, checks) = contract_onto(m, exc, pattern, &basis)?;
    if let Some(c) = checks.iter().find(|c| !c.pass) {
        return Err(Error::PatternMismatch(format!("{}: expected {}, got {}", c.name, c.expected, c.computed)));
    }
    if let ModelKind::BlowUp { parent, exceptional, .. } = &m.kind {
        if *exceptional == g {
            out.kind = parent.kind.clone();
            out.form = restore_origins(&out.form, &parent.form);
        }
    }
    Ok(out)
}

fn restore_origins(form: &TrilinearForm, like: &TrilinearForm) -> TrilinearForm {
    let gens = form
        .gens()
        .iter()
        .map(|g| GeneratorLabel { name: g.name.clone(), origin: like.origin(&g.name).unwrap_or(g.origin) })
        .collect();
    let mut out = TrilinearForm::new(gens);
    for (k, v) in form.entries() {
        out.set(&k[0], &k[1], &k[2], v.clone());
    }
    out
}

/// Contracts `exc` onto a curve or point, with the new generators given as
/// classes on `m` (pullbacks from the target). Returns the pattern checks;
/// an error is raised only when the basis itself is unusable.
pub fn contract_onto(
    m: &ThreefoldModel,
    exc: &DivisorClass,
    pattern: LinkPatternTag,
    basis: &[(String, DivisorClass)],
) -> Result<(ThreefoldModel, Vec<Check>)> {
    m.form.check_known(exc)?;
    for (_, b) in basis {
        m.form.check_known(b)?;
    }
    let gens = m.form.gen_names();
    let mut full: Vec<DivisorClass> = basis.iter().map(|(_, b)| b.clone()).collect();
    full.push(exc.clone());
    if !is_unimodular(&full, &gens) {
        return Err(Error::PatternMismatch("new basis together with the contracted class is not a lattice basis".into()));
    }
    let k = &m.canonical;
    let e3 = m.triple(exc, exc, exc)?;
    let ke2 = m.triple(k, exc, exc)?;
    let coords = |d: &DivisorClass| express(d, &full, &gens).expect("unimodular basis spans the lattice");
    let discrepancy = coords(k).pop().unwrap();

    let mut checks = Vec::new();
    let mut pullbacks_ok = true;
    for (i, (_, bi)) in basis.iter().enumerate() {
        for (_, bj) in &basis[i..] {
            pullbacks_ok &= m.triple(bi, bj, exc)?.is_zero();
        }
        if pattern == LinkPatternTag::PointPattern {
            pullbacks_ok &= m.triple(bi, exc, exc)?.is_zero();
        }
    }
    checks.push(Check::holds("basis classes are pullbacks", "orthogonal to the contracted class", pullbacks_ok));
    match &pattern {
        LinkPatternTag::PointPattern => {
            checks.push(Check::eq("E^3", BigInt::one(), e3));
            checks.push(Check::eq("K.E^2", BigInt::from(2), ke2));
            checks.push(Check::eq("discrepancy", BigInt::from(2), discrepancy));
        }
        LinkPatternTag::CurvePattern { e3: want } => {
            checks.push(Check::eq("E^3", want.clone(), e3));
            let two = BigInt::from(2);
            let ok = ke2 <= two && (&ke2 % &two).is_zero();
            checks.push(Check { name: "K.E^2 = 2 - 2g".into(), expected: "even and at most 2".into(), computed: ke2.to_string(), pass: ok });
            checks.push(Check::eq("discrepancy", BigInt::one(), discrepancy));
        }
        LinkPatternTag::FiberPattern => {
            checks.push(Check::eq("E^3", BigInt::zero(), e3));
            checks.push(Check::eq("K.E^2", BigInt::from(2), ke2));
            checks.push(Check::eq("discrepancy", BigInt::one(), discrepancy));
            let mut vertical = true;
            for g in &gens {
                vertical &= m.triple(exc, &m.fiber, &DivisorClass::gen(g))?.is_zero();
            }
            checks.push(Check::holds("contracted class is vertical", "E.F = 0", vertical));
        }
    }

    let new_gens = basis
        .iter()
        .map(|(n, _)| GeneratorLabel { name: n.clone(), origin: m.form.origin(n).unwrap_or(Origin::PulledBack) })
        .collect();
    let mut form = TrilinearForm::new(new_gens);
    for i in 0..basis.len() {
        for j in i..basis.len() {
            for l in j..basis.len() {
                let v = m.triple(&basis[i].1, &basis[j].1, &basis[l].1)?;
                form.set(&basis[i].0, &basis[j].0, &basis[l].0, v);
            }
        }
    }
    let push = |d: &DivisorClass| {
        let x = coords(d);
        basis.iter().zip(x).fold(DivisorClass::zero(), |acc, ((n, _), c)| acc.with(n, c))
    };
    let mut history = m.history.clone();
    history.push(format!("contract {exc}"));
    let out = ThreefoldModel {
        canonical: push(&m.canonical),
        fiber: push(&m.fiber),
        tracked: m.tracked.iter().map(|(n, d)| (n.clone(), push(d))).collect(),
        form,
        history,
        kind: ModelKind::Contraction { pattern, exceptional: exc.clone() },
    };
    Ok((out, checks))
}

/// Pushforward of a class along a contraction described by `basis` and `exc`.
pub fn pushforward(m: &ThreefoldModel, d: &DivisorClass, exc: &DivisorClass, basis: &[(String, DivisorClass)]) -> Option<DivisorClass> {
    let gens = m.form.gen_names();
    let mut full: Vec<DivisorClass> = basis.iter().map(|(_, b)| b.clone()).collect();
    full.push(exc.clone());
    let x = express(d, &full, &gens)?;
    Some(basis.iter().zip(x).fold(DivisorClass::zero(), |acc, ((n, _), c)| acc.with(n, c)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DuValLabel {
    Hirzebruch,
    BlownHirzebruch,
    TwoA1,
    A3,
    D(u32),
}

impl std::fmt::Display for DuValLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DuValLabel::Hirzebruch => write!(f, "F_d"),
            DuValLabel::BlownHirzebruch => write!(f, "S_d"),
            DuValLabel::TwoA1 => write!(f, "2A1"),
            DuValLabel::A3 => write!(f, "A3"),
            DuValLabel::D(m) => write!(f, "D{m}"),
        }
    }
}

impl DuValLabel {
    pub fn of_type(m: u32) -> Self {
        match m {
            0 => DuValLabel::Hirzebruch,
            1 => DuValLabel::BlownHirzebruch,
            2 => DuValLabel::TwoA1,
            3 => DuValLabel::A3,
            m => DuValLabel::D(m),
        }
    }

    pub fn type_number(&self) -> u32 {
        match self {
            DuValLabel::Hirzebruch => 0,
            DuValLabel::BlownHirzebruch => 1,
            DuValLabel::TwoA1 => 2,
            DuValLabel::A3 => 3,
            DuValLabel::D(m) => *m,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "F_d" | "Hirzebruch" => Some(DuValLabel::Hirzebruch),
            "S_d" => Some(DuValLabel::BlownHirzebruch),
            "2A1" => Some(DuValLabel::TwoA1),
            "A3" => Some(DuValLabel::A3),
            _ => s.strip_prefix('D').and_then(|n| n.parse().ok()).filter(|m| *m >= 4).map(DuValLabel::D),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurfaceKind {
    Hirzebruch(u32),
    BlownHirzebruch(u32),
    QuadricSmooth,
    QuadricCone,
    /// Boundary of type m >= 2. The lattice is a numerical shadow on
    /// S, f, e with e^2 = -m, so that K^2 = 8 - m and K.f = -2; `d` is the
    /// Hirzebruch degree carried to the S_d reached at type 1.
    DuVal { label: DuValLabel, d: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceModel {
    pub kind: SurfaceKind,
    pub pairing: SurfacePairing,
    pub canonical: DivisorClass,
}

pub const SIGMA: &str = "S";
pub const FIB: &str = "f";
pub const EXC: &str = "e";

impl SurfaceModel {
    pub fn canonical_square(&self) -> BigRational {
        self.pairing.pair(&self.canonical, &self.canonical).expect("canonical uses own generators")
    }

    pub fn pair(&self, a: &DivisorClass, b: &DivisorClass) -> Result<BigRational> {
        self.pairing.pair(a, b)
    }

    /// Hirzebruch degree for F_d, S_d and the carried degree of DuVal shadows.
    pub fn degree(&self) -> Option<u32> {
        match self.kind {
            SurfaceKind::Hirzebruch(d) | SurfaceKind::BlownHirzebruch(d) | SurfaceKind::DuVal { d, .. } => Some(d),
            SurfaceKind::QuadricSmooth => Some(0),
            SurfaceKind::QuadricCone => None,
        }
    }
}

fn ruled_lattice(d: u32, e2: Option<i64>) -> (SurfacePairing, DivisorClass) {
    let mut gens = vec![SIGMA, FIB];
    if e2.is_some() {
        gens.push(EXC);
    }
    let mut p = SurfacePairing::new(&gens);
    p.set_int(SIGMA, SIGMA, -(d as i64));
    p.set_int(SIGMA, FIB, 1);
    let mut k = DivisorClass::zero().with(SIGMA, -2).with(FIB, -(d as i64) - 2);
    if let Some(v) = e2 {
        p.set_int(EXC, EXC, v);
        k = k.with(EXC, 1);
    }
    (p, k)
}

pub fn hirzebruch(d: u32) -> SurfaceModel {
    let (pairing, canonical) = ruled_lattice(d, None);
    SurfaceModel { kind: SurfaceKind::Hirzebruch(d), pairing, canonical }
}

/// S_d: F_d blown up at a point off the minimal section.
pub fn blown_hirzebruch(d: u32) -> SurfaceModel {
    let (pairing, canonical) = ruled_lattice(d, Some(-1));
    SurfaceModel { kind: SurfaceKind::BlownHirzebruch(d), pairing, canonical }
}

pub fn quadric_smooth() -> SurfaceModel {
    SurfaceModel { kind: SurfaceKind::QuadricSmooth, ..hirzebruch(0) }
}

pub fn quadric_cone() -> SurfaceModel {
    let mut pairing = SurfacePairing::new(&["r"]);
    pairing.set("r", "r", BigRational::new(1.into(), 2.into()));
    pairing.scale_note = Some("O(1) = 2r".into());
    SurfaceModel { kind: SurfaceKind::QuadricCone, pairing, canonical: DivisorClass::from_pairs(&[("r", -4)]) }
}

/// Type m boundary surface: F_d, S_d, or a DuVal shadow for m >= 2.
pub fn boundary_surface(m: u32, d: u32) -> SurfaceModel {
    match m {
        0 => hirzebruch(d),
        1 => blown_hirzebruch(d),
        _ => {
            let (pairing, canonical) = ruled_lattice(d, Some(-(m as i64)));
            SurfaceModel { kind: SurfaceKind::DuVal { label: DuValLabel::of_type(m), d }, pairing, canonical }
        }
    }
}

/// Contracts a (-1)-curve `c` with the new generators given as classes on `s`.
fn contract_surface_curve(s: &SurfaceModel, c: &DivisorClass, basis: &[(&str, DivisorClass)]) -> Result<(SurfacePairing, DivisorClass)> {
    let one = BigRational::one();
    if s.pair(c, c)? != -one.clone() || s.pair(&s.canonical, c)? != -one {
        return Err(Error::PatternMismatch(format!("{c} is not a (-1)-curve")));
    }
    let gens: Vec<String> = s.pairing.gens().to_vec();
    let mut full: Vec<DivisorClass> = basis.iter().map(|(_, b)| b.clone()).collect();
    full.push(c.clone());
    if !is_unimodular(&full, &gens) {
        return Err(Error::PatternMismatch("surface basis is not unimodular".into()));
    }
    for (_, b) in basis {
        if !s.pair(b, c)?.is_zero() {
            return Err(Error::PatternMismatch(format!("{b} is not orthogonal to {c}")));
        }
    }
    let names: Vec<&str> = basis.iter().map(|(n, _)| *n).collect();
    let mut p = SurfacePairing::new(&names);
    for (i, (ni, bi)) in basis.iter().enumerate() {
        for (nj, bj) in &basis[i..] {
            p.set(ni, nj, s.pair(bi, bj)?);
        }
    }
    let x = express(&s.canonical, &full, &gens).expect("unimodular");
    let k = basis.iter().zip(x).fold(DivisorClass::zero(), |acc, ((n, _), v)| acc.with(n, v));
    Ok((p, k))
}

/// Blow up a point of a fiber of F_d and contract the strict transform of
/// that fiber. On the minimal section this gives F_{d+1}, off it F_{d-1}.
pub fn elementary_transform(s: &SurfaceModel, on_minimal_section: bool) -> Result<SurfaceModel> {
    let d = match s.kind {
        SurfaceKind::Hirzebruch(d) => d,
        _ => return Err(Error::WrongModel("elementary transform needs a Hirzebruch surface".into())),
    };
    if !on_minimal_section && d == 0 {
        return Err(Error::DegreeUnderflow("F_0 has two rulings; name the fiber class explicitly".into()));
    }
    let blown = blown_hirzebruch(d);
    let sigma = DivisorClass::gen(SIGMA);
    let f = DivisorClass::gen(FIB);
    let e = DivisorClass::gen(EXC);
    let old_fiber = f.clone() - e.clone();
    let new_sigma = if on_minimal_section { sigma - e } else { sigma + old_fiber.clone() };
    let (pairing, canonical) = contract_surface_curve(&blown, &old_fiber, &[(SIGMA, new_sigma), (FIB, f)])?;
    let s2 = pairing.entry(SIGMA, SIGMA);
    let nd = (-s2).to_integer().to_i64().expect("small degree");
    if nd < 0 {
        return Err(Error::DegreeUnderflow(format!("result would be F_{nd}")));
    }
    let want = hirzebruch(nd as u32);
    debug_assert_eq!(want.pairing, pairing);
    debug_assert_eq!(want.canonical, canonical);
    Ok(want)
}

/// D_h together with the classes of D_h|D_h and D_f|D_h on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceEmbedding {
    pub surface: SurfaceModel,
    pub self_restriction: DivisorClass,
    pub fiber_restriction: DivisorClass,
}

impl SurfaceEmbedding {
    /// Boundary of a quadric fibration with -K = 2D_h + aD_f:
    /// D_h|D_h = -K_{D_h} - a f by adjunction.
    pub fn quadric_boundary(surface: SurfaceModel, a: &BigInt) -> Self {
        let f = DivisorClass::gen(FIB);
        let self_restriction = -surface.canonical.clone() - f.scale(a);
        Self { surface, self_restriction, fiber_restriction: f }
    }

    /// Sub-bundle D ~ xi + eF of a P2-bundle with D = F_d:
    /// D|D = S + ((d + delta + 3e)/2) f.
    pub fn p2_boundary(d: u32, delta: &BigInt, e: &BigInt) -> Option<Self> {
        let twice: BigInt = BigInt::from(d) + delta + e * BigInt::from(3);
        if !(&twice % BigInt::from(2)).is_zero() {
            return None;
        }
        let self_restriction = DivisorClass::gen(SIGMA).with(FIB, twice / 2);
        Some(Self { surface: hirzebruch(d), self_restriction, fiber_restriction: DivisorClass::gen(FIB) })
    }

    /// triple(D, D, X) = pair(D|D, X|D) for X in {D, F}.
    pub fn closure_checks(&self, m: &ThreefoldModel, d: &DivisorClass) -> Result<Vec<Check>> {
        let fib = m.fiber.clone();
        let rat = |v: BigInt| BigRational::from_integer(v);
        let (sr, fr) = (&self.self_restriction, &self.fiber_restriction);
        Ok(vec![
            Check::eq("D^3 = (D|D)^2", rat(m.triple(d, d, d)?), self.surface.pair(sr, sr)?),
            Check::eq("D^2 F = D|D . F|D", rat(m.triple(d, d, &fib)?), self.surface.pair(sr, fr)?),
            Check::eq("D F^2 = (F|D)^2", rat(m.triple(d, &fib, &fib)?), self.surface.pair(fr, fr)?),
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn p2_bundle_basics() {
        let m = p2_bundle(0, 0, 1);
        let xi = DivisorClass::gen(XI);
        assert_eq!(m.form.cube(&xi).unwrap(), b(1));
        assert_eq!(anticanonical_cube(&m).unwrap(), b(54));
        assert_eq!(p2_bundle(0, 0, 0).form.cube(&xi).unwrap(), b(0));
        assert_eq!(p2_bundle(0, 1, 3).form.cube(&xi).unwrap(), b(4));
    }

    #[test]
    fn twists_are_canonical() {
        assert_eq!(p2_bundle(3, -1, 2).kind, ModelKind::P2Bundle { degree: b(7), twists: Some([0, 3, 4]) });
        assert_eq!(p2_bundle(2, 3, 5).form, p2_bundle(0, 1, 3).form);
    }

    #[test]
    fn sub_bundle_self_intersections() {
        // S_i ~ xi - (d+1-i)F on F(0,1,d)
        for d in 1..=6i64 {
            let m = p2_bundle(0, 1, d);
            for i in [1, d] {
                let a = DivisorClass::from_pairs(&[(XI, 1), (F, -(d + 1 - i))]);
                let c = DivisorClass::from_pairs(&[(XI, 1), (F, -i)]);
                assert_eq!(m.triple(&a, &a, &c).unwrap(), b(-(d + 1 - i)));
            }
        }
    }

    #[test]
    fn quadric_cube() {
        let q = quadric_fibration(-4, 3);
        assert_eq!(anticanonical_cube(&q).unwrap(), b(40));
        assert_eq!(anticanonical_cube(&quadric_fibration(0, 0)).unwrap(), b(0));
        assert_eq!(anticanonical_cube(&quadric_fibration(2, 1)).unwrap(), b(40));
    }

    #[test]
    fn ruling_blow_up_matches_hand_expansion() {
        let q = quadric_fibration(-4, 3).with_tracked(DH, DivisorClass::gen(H)).with_tracked(DF, DivisorClass::gen(F));
        let r = CurveData::new(0).hit(H, 1).hit(F, 0).mult(DH, 2).mult(DF, 1);
        let x = blow_up_curve(&q, &r).unwrap();
        let dh = x.tracked(DH).unwrap();
        let df = x.tracked(DF).unwrap();
        assert_eq!(x.triple(dh, dh, df).unwrap(), b(-2));
        assert_eq!(x.triple(dh, df, df).unwrap(), b(-1));
    }

    #[test]
    fn zero_curve_blow_up() {
        let q = quadric_fibration(1, 1);
        let c = CurveData::new(0).hit(H, 0).hit(F, 0);
        let x = blow_up_curve(&q, &c).unwrap();
        let e = DivisorClass::gen("E");
        assert_eq!(x.form.cube(&e).unwrap(), b(2));
        assert_eq!(x.form.cube(&DivisorClass::gen(H)).unwrap(), b(1));
    }

    #[test]
    fn incomplete_curve_data() {
        let q = quadric_fibration(1, 1);
        let c = CurveData::new(0).hit(H, 1);
        assert_eq!(blow_up_curve(&q, &c), Err(Error::IncompleteCurveData(F.into())));
    }

    #[test]
    fn point_blow_up_constants() {
        let m = p2_bundle(0, 1, 2).with_tracked(DH, DivisorClass::from_pairs(&[(XI, 1)]));
        let x = blow_up_point(&m, &PointData::new().mult(DH, 1));
        assert_eq!(x.form.cube(&DivisorClass::gen("E")).unwrap(), b(1));
        assert_eq!(x.canonical.coeff("E"), b(2));
        assert_eq!(x.tracked(DH).unwrap(), &DivisorClass::from_pairs(&[(XI, 1), ("E", -1)]));
        assert_eq!(anticanonical_cube(&x).unwrap(), b(54 - 8));
    }

    #[test]
    fn roundtrip_point_and_curve() {
        let m = quadric_fibration(-4, 3).with_tracked(DH, DivisorClass::gen(H));
        let x = blow_up_point(&m, &PointData::new().mult(DH, 1));
        let back = contract(&x, &DivisorClass::gen("E"), LinkPatternTag::PointPattern).unwrap();
        assert!(back.same_lattice(&m));
        assert_eq!(back.tracked, m.tracked);
        assert_eq!(back.kind, m.kind);

        let c = CurveData::new(0).hit(H, 1).hit(F, 0).mult(DH, 1);
        let x = blow_up_curve(&m, &c).unwrap();
        let back = contract(&x, &DivisorClass::gen("E"), LinkPatternTag::CurvePattern { e3: b(0) }).unwrap();
        assert!(back.same_lattice(&m));
        assert_eq!(back.tracked, m.tracked);
    }

    #[test]
    fn e3_five_is_rejected() {
        let m = quadric_fibration(1, 1);
        let mut bad = blow_up_point(&m, &PointData::new());
        bad.form.set("E", "E", "E", 5);
        assert!(matches!(contract(&bad, &DivisorClass::gen("E"), LinkPatternTag::PointPattern), Err(Error::PatternMismatch(_))));
        for p in [LinkPatternTag::FiberPattern, LinkPatternTag::CurvePattern { e3: b(0) }] {
            assert!(matches!(contract(&bad, &DivisorClass::gen("E"), p), Err(Error::PatternMismatch(_))));
        }
    }

    #[test]
    fn surface_invariants() {
        for d in 0..6 {
            let s = hirzebruch(d);
            let sig = DivisorClass::gen(SIGMA);
            let f = DivisorClass::gen(FIB);
            assert_eq!(s.pair(&sig, &sig).unwrap(), BigRational::from_integer(b(-(d as i64))));
            assert!(s.pair(&f, &f).unwrap().is_zero());
            assert_eq!(s.canonical_square(), BigRational::from_integer(b(8)));
            assert_eq!(blown_hirzebruch(d).canonical_square(), BigRational::from_integer(b(7)));
        }
        assert_eq!(quadric_cone().canonical_square(), BigRational::from_integer(b(8)));
        for m in 2..7 {
            assert_eq!(boundary_surface(m, 2).canonical_square(), BigRational::from_integer(b(8 - m as i64)));
        }
    }

    #[test]
    fn elementary_transforms() {
        assert_eq!(elementary_transform(&hirzebruch(3), false).unwrap(), hirzebruch(2));
        assert_eq!(elementary_transform(&hirzebruch(3), true).unwrap(), hirzebruch(4));
        assert_eq!(elementary_transform(&hirzebruch(0), true).unwrap(), hirzebruch(1));
        assert!(matches!(elementary_transform(&hirzebruch(0), false), Err(Error::DegreeUnderflow(_))));
    }

    #[test]
    fn du_val_parse() {
        for m in 0..8 {
            let l = DuValLabel::of_type(m);
            assert_eq!(DuValLabel::parse(&l.to_string()), Some(l));
            assert_eq!(l.type_number(), m);
        }
    }
}
