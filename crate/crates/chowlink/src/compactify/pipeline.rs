use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::certificate::{CertStep, Certificate, FinalModel, Snapshot};
use super::{classify_quadric, pa_of_b, type_of, Descriptor, P2Compactification, P2Descriptor, QuadricCompactification, QuadricDescriptor};
use crate::chow_core::DivisorClass;
use crate::error::{Error, Result};
use crate::links::{pp_link, qp_link, qq_link, twist_bundle, LinkKind, LinkStep, EXC_KEY};
use crate::models::{
    anticanonical_cube, blown_hirzebruch, boundary_surface, elementary_transform, hirzebruch, Check, CurveData, SurfaceEmbedding, SurfaceKind,
    ThreefoldModel, DF, DH, F, H, XI,
};

fn ruling(mult: u32) -> CurveData {
    CurveData::new(0).hit(H, 1).hit(F, 0).mult(DH, mult)
}

fn for_link(q: &ThreefoldModel, bh: &DivisorClass) -> ThreefoldModel {
    let mut m = q.clone();
    m.tracked.clear();
    m.with_tracked(DH, bh.clone())
}

fn state_checks(st: &QuadricCompactification, m: u32) -> Result<Vec<Check>> {
    let mut c = st.embedding_checks()?;
    c.push(Check::eq("type via qp-link", m, type_of(st)?));
    c.push(Check::holds("classify IsA3", "re-checked on the new state", st.classify().is_a3()));
    if let Some(h) = st.hodge_h12 {
        c.push(Check::eq("p_a(B) = h12", BigInt::from(h), pa_of_b(&st.ambient)?));
    }
    Ok(c)
}

fn after_qq(state: &QuadricCompactification, q: ThreefoldModel, m: u32, surface: crate::models::SurfaceModel) -> QuadricCompactification {
    let a = -q.canonical.coeff(F);
    let df = q.tracked(DF).cloned().unwrap_or_else(|| DivisorClass::gen(F));
    let ambient = for_link(&q, &DivisorClass::gen(H)).with_tracked(DF, df);
    QuadricCompactification {
        ambient,
        boundary_normal: true,
        type_m: m,
        embedding: Some(SurfaceEmbedding::quadric_boundary(surface, &a)),
        hodge_h12: state.hodge_h12,
        flags: state.flags.clone(),
    }
}

/// One qq-link along a component of D_f|D_h lowering the type by one. At
/// type 1, `meets_sigma` selects the component meeting the Sigma-transform
/// (boundary F_d) over the disjoint one (F_{d-1}).
pub fn decrease_type(state: &QuadricCompactification, meets_sigma: bool) -> Result<(QuadricCompactification, LinkStep)> {
    if !state.boundary_normal {
        return Err(Error::WrongModel("decrease_type needs a normal boundary".into()));
    }
    let m = state.type_m;
    if m == 0 {
        return Err(Error::TypeZero);
    }
    let d = state.degree().ok_or_else(|| Error::Undetermined(vec!["boundary surface".into()]))?;
    let (q, _, mut step) = qq_link(&for_link(&state.ambient, &state.boundary_h()), &ruling(1))?;
    let surface = match (m, meets_sigma) {
        (1, true) => hirzebruch(d),
        (1, false) => hirzebruch(d.checked_sub(1).ok_or_else(|| Error::DegreeUnderflow("S_0".into()))?),
        _ => boundary_surface(m - 1, d),
    };
    let next = after_qq(state, q, m - 1, surface);
    let component = match (m, meets_sigma) {
        (1, true) => "meets Sigma-transform",
        (1, false) => "disjoint from Sigma-transform",
        _ => "component of D_f|D_h",
    };
    step = step.with_center("component", component).with_center("type", format!("{m} -> {}", m - 1));
    step.checks.extend(state_checks(&next, m - 1)?);
    Ok((next, step))
}

/// Two qq-links taking a type 0 boundary F_d to F_{d-1} through S_d.
pub fn decrease_degree(state: &QuadricCompactification) -> Result<(QuadricCompactification, [LinkStep; 2])> {
    decrease_degree_via(state).map(|(_, next, steps)| (next, steps))
}

fn decrease_degree_via(state: &QuadricCompactification) -> Result<(QuadricCompactification, QuadricCompactification, [LinkStep; 2])> {
    let d = match state.embedding.as_ref().map(|e| &e.surface.kind) {
        Some(SurfaceKind::Hirzebruch(d)) if state.type_m == 0 => *d,
        _ => return Err(Error::WrongModel("decrease_degree needs a type 0 boundary F_d".into())),
    };
    if d == 0 {
        return Err(Error::DegreeZero);
    }
    let (q1, _, mut s1) = qq_link(&for_link(&state.ambient, &state.boundary_h()), &ruling(0))?;
    let mid = after_qq(state, q1, 1, blown_hirzebruch(d));
    s1 = s1.with_center("component", "ruling of D_f disjoint from Sigma").with_center("surface", format!("F_{d} -> S_{d}"));
    s1.checks.extend(state_checks(&mid, 1)?);
    let (q2, _, mut s2) = qq_link(&for_link(&mid.ambient, &mid.boundary_h()), &ruling(1))?;
    let next = after_qq(&mid, q2, 0, hirzebruch(d - 1));
    s2 = s2.with_center("component", "disjoint from Sigma-transform").with_center("surface", format!("S_{d} -> F_{}", d - 1));
    s2.checks.extend(state_checks(&next, 0)?);
    Ok((mid, next, [s1, s2]))
}

/// Type 0 on F_0 with (-K)^3 = 40: the blow-up of Q3 along a conic with
/// boundary the exceptional divisor. Returns the two identification steps.
pub fn recognize_standard_quadric(state: &QuadricCompactification) -> Result<[LinkStep; 2]> {
    match state.embedding.as_ref().map(|e| &e.surface.kind) {
        Some(SurfaceKind::Hirzebruch(0)) if state.type_m == 0 && state.boundary_normal => {}
        _ => return Err(Error::WrongModel("the standard-model recognizer needs boundary F_0".into())),
    }
    let q = &state.ambient;
    let (dh, df) = (state.boundary_h(), state.boundary_f());
    let minus_k = q.anticanonical();
    let a = state.a();
    let mut checks = Vec::new();
    checks.push(Check::eq("-K = 2 D_h + a D_f", minus_k.clone(), dh.clone() * 2 + df.scale(&a)));
    let emb = state.embedding.as_ref().unwrap();
    let dh3 = q.form.cube(&dh)?;
    let adj = emb.surface.pair(&emb.self_restriction, &emb.self_restriction)?.to_integer();
    checks.push(Check::eq("D_h^3 = 8 - 4a", BigInt::from(8) - &a * BigInt::from(4), dh3.clone()));
    checks.push(Check::eq("D_h^3 = (K_{D_h} + a f)^2", adj, dh3));
    let cube = anticanonical_cube(q)?;
    checks.push(Check::eq("(-K)^3 = 64 - 8a", BigInt::from(64) - &a * BigInt::from(8), cube.clone()));
    if let Some(c) = checks.iter().find(|c| !c.pass) {
        return Err(Error::NotStandard(format!("{}: expected {}, got {}", c.name, c.expected, c.computed)));
    }
    if cube != BigInt::from(40) {
        let forced = (BigInt::from(64) - &cube).div_floor(&BigInt::from(8));
        return Err(Error::NotStandard(format!(
            "(-K)^3 = 40 fails: (-K)^3 = {cube} forces a = {forced} through 64 - 8a, while p_a(B) = 0 needs a = 3"
        )));
    }
    checks.push(Check::eq("a = 3", BigInt::from(3), a.clone()));
    let s = DivisorClass::gen(crate::models::SIGMA);
    let f = DivisorClass::gen(crate::models::FIB);
    let restricted = emb.self_restriction.clone() * 2 + emb.fiber_restriction.scale(&a);
    checks.push(Check::eq("-K|D_h = 4S + f", s * 4 + f, restricted));

    // L = pullback of O_Q3(1) = D_f + D_h, E = D_h
    let l = df.clone() + dh.clone();
    let mut blow = LinkStep::new(LinkKind::BlowDownToQ3).with_center("curve", "smooth conic").with_center("exceptional", "D_h");
    blow.checks = checks;
    blow.checks.push(Check::eq("-K = 3L - E", minus_k.clone(), l.clone() * 3 - dh.clone()));
    blow.checks.push(Check::eq("L^3 = deg Q3", BigInt::from(2), q.form.cube(&l)?));
    blow.checks.push(Check::eq("L^2 E = 0", BigInt::zero(), q.triple(&l, &l, &dh)?));
    blow.checks.push(Check::eq("L E^2 = -deg conic", BigInt::from(-2), q.triple(&l, &dh, &dh)?));
    blow.checks.push(Check::eq("E^3 = -deg N_conic", BigInt::from(-4), q.form.cube(&dh)?));
    blow.transform.insert("O(1)".into(), l.clone());
    blow.transform.insert("E".into(), dh.clone());

    let mut proj = LinkStep::new(LinkKind::ProjectionFromVertex).with_center("vertex", "vertex of the cone D_f").with_center("target", "P3");
    proj.checks.push(Check::eq("D_f = L - E is a hyperplane section class", df.clone(), l - dh.clone()));
    proj.checks.push(Check::eq("D_f^2 D_h = 0", BigInt::zero(), q.triple(&df, &df, &dh)?));
    Ok([blow, proj])
}

/// deg E = 3n+1 with boundary xi - (n+1)F on F_0: twist to F(0,0,1) and
/// read off the blow-up of P3 along a line.
pub fn recognize_standard_bundle(state: &P2Compactification) -> Result<(P2Compactification, LinkStep)> {
    let delta = state.delta();
    let e = state.e.clone();
    let n = -(&e + BigInt::from(1));
    let fail = |what: String| Err(Error::NotStandard(what));
    if state.d() != 0 {
        return fail(format!("boundary is F_{}, not F_0", state.d()));
    }
    if delta != &n * BigInt::from(3) + BigInt::from(1) {
        return fail(format!("deg E = {delta} is not 3n+1 with n = -(e+1) = {n}"));
    }
    let k = n.to_i64().ok_or_else(|| Error::NotStandard("twist out of range".into()))?;
    let (p, map) = twist_bundle(&state.ambient, -k)?;
    let xi = DivisorClass::gen(XI);
    let ff = DivisorClass::gen(F);
    let d = p.tracked(DH).cloned().unwrap();
    let mut step = LinkStep::new(LinkKind::BlowDownToP3).with_center("twist", -k).with_center("n", &n).with_center("curve", "line");
    step.transform = map;
    let c = &mut step.checks;
    c.push(Check::eq("xi^3 = 1 after twist", BigInt::from(1), p.form.cube(&xi)?));
    c.push(Check::eq("D = xi - F", xi.clone() - ff.clone(), d.clone()));
    c.push(Check::eq("-K = 3D + 4F", p.anticanonical(), d.clone() * 3 + ff.clone() * 4));
    c.push(Check::eq("D^3 = (S - f)^2", BigInt::from(-2), p.form.cube(&d)?));
    c.push(Check::eq("D^2 F = 1", BigInt::from(1), p.triple(&d, &d, &ff)?));
    c.push(Check::eq("(-K)^3 = 54", BigInt::from(54), anticanonical_cube(&p)?));
    let l = ff.clone() + d.clone();
    c.push(Check::eq("-K = 4L - E", p.anticanonical(), l.clone() * 4 - d.clone()));
    c.push(Check::eq("L^3 = 1", BigInt::from(1), p.form.cube(&l)?));
    c.push(Check::eq("L^2 E = 0", BigInt::zero(), p.triple(&l, &l, &d)?));
    c.push(Check::eq("L E^2 = -deg line", BigInt::from(-1), p.triple(&l, &d, &d)?));
    step.transform.insert("O(1)".into(), l);
    let twisted = P2Compactification { ambient: p, e: BigInt::from(-1), embedding: state.embedding.clone() };
    Ok((twisted, step))
}

fn p2_next(state: &P2Compactification, p: ThreefoldModel, d: u32) -> Result<(P2Compactification, Vec<Check>)> {
    let bh = p.tracked(DH).cloned().unwrap();
    let e = bh.coeff(F);
    let delta = p.form.cube(&DivisorClass::gen(XI))?;
    let emb = SurfaceEmbedding::p2_boundary(d, &delta, &e).ok_or_else(|| Error::ParityViolation(format!("{} (with d = {d})", &delta + &e)))?;
    let mut ambient = p;
    ambient.tracked.retain(|k, _| k == DH || k == DF);
    let next = P2Compactification { ambient, e, embedding: emb };
    let mut checks = next.embedding_checks()?;
    let parity: BigInt = next.delta() + &next.e + BigInt::from(d);
    checks.push(Check::eq("delta + e + d mod 2", BigInt::zero(), parity.mod_floor(&BigInt::from(2))));
    let _ = state;
    Ok((next, checks))
}

fn p2_cert_steps(start: &P2Compactification) -> Result<(Vec<CertStep>, P2Compactification)> {
    let mut steps = Vec::new();
    let mut st = start.clone();
    // phase 1: point links at D_h, D_f off the minimal section
    while st.d() > 0 {
        let d = st.d();
        let (p, mut step) = pp_link(&st.ambient, 0, &st.boundary_h(), true)?;
        let surface = elementary_transform(&st.embedding.surface, false)?;
        let (next, checks) = p2_next(&st, p, d - 1)?;
        step.checks.push(Check::holds("boundary is the elementary transform", &format!("F_{}", d - 1), surface == next.embedding.surface));
        step.checks.extend(checks);
        step = step.with_center("point", "D_h . D_f off the minimal section").with_center("surface", format!("F_{d} -> F_{}", d - 1));
        steps.push(CertStep::new(step, Snapshot::of_p2(&next)));
        st = next;
    }
    let twice: BigInt = st.delta() + &st.e * BigInt::from(3);
    if twice.is_odd() {
        return Err(Error::ParityViolation((st.delta() + &st.e).to_string()));
    }
    let m: BigInt = twice / BigInt::from(2) + BigInt::from(1);
    let count = m.abs().to_u64().ok_or_else(|| Error::DegreeUnderflow("too many links".into()))?;
    for i in 0..count {
        let (p, mut step) = if m.is_positive() {
            let (p, mut step) = pp_link(&st.ambient, 1, &st.boundary_h(), true)?;
            let (p, map) = twist_bundle(&p, 1)?;
            step.transform = step.transform.iter().map(|(k, v)| (k.clone(), v.substitute(&map))).collect();
            step = step.with_center("twist", 1).with_center("line", "D_h . D_f");
            (p, step)
        } else {
            let (p, step) = pp_link(&st.ambient, 0, &st.boundary_h(), false)?;
            (p, step.with_center("point", "D_f off D_h"))
        };
        let (next, checks) = p2_next(&st, p, 0)?;
        step.checks.extend(checks);
        let m_left: BigInt = (next.delta() + &next.e * BigInt::from(3)) / 2 + BigInt::from(1);
        let want: BigInt = if m.is_positive() { &m - BigInt::from(i + 1) } else { &m + BigInt::from(i + 1) };
        step.checks.push(Check::eq("(delta + 3e)/2 + 1 moves toward 0", want, m_left));
        step.checks.push(Check::eq("delta + e parity", (st.delta() + &st.e).mod_floor(&BigInt::from(2)), (next.delta() + &next.e).mod_floor(&BigInt::from(2))));
        steps.push(CertStep::new(step, Snapshot::of_p2(&next)));
        st = next;
    }
    let (fin, step) = recognize_standard_bundle(&st)?;
    steps.push(CertStep::new(step, Snapshot::of_p2(&fin)));
    Ok((steps, fin))
}

pub fn normalize_p2(state: &P2Compactification) -> Result<Certificate> {
    let initial = Descriptor::P2(P2Descriptor::new_big(state.delta(), state.e.clone(), state.d()));
    let d = state.d() as u64;
    let m: BigInt = (state.delta() - BigInt::from(d) + &state.e * BigInt::from(3)) / 2 + BigInt::from(1);
    let expected = d + m.abs().to_u64().unwrap_or(u64::MAX) + 1;
    let (steps, _) = p2_cert_steps(state)?;
    Ok(Certificate::new(initial, Snapshot::of_p2(state), steps, FinalModel::StandardP3, expected as usize))
}

fn quadric_state(desc: &QuadricDescriptor) -> Result<QuadricCompactification> {
    desc.validate()?;
    classify_quadric(desc).into_result()?;
    let lat = desc.lattice()?.expect("classified");
    if desc.boundary_normal != Some(true) {
        let ambient = crate::models::quadric_fibration(lat.h3, lat.a).with_tracked(DH, DivisorClass::gen(H)).with_tracked(DF, DivisorClass::gen(F));
        return Ok(QuadricCompactification { ambient, boundary_normal: false, type_m: 0, embedding: None, hodge_h12: desc.h12, flags: desc.flags() });
    }
    let st = QuadricCompactification::normal(desc.type_m.unwrap(), desc.hirzebruch_degree.unwrap(), lat.a, desc.h12, desc.flags())?;
    debug_assert_eq!(st.h3(), lat.h3);
    Ok(st)
}

pub fn normalize_quadric_normal(desc: &QuadricDescriptor) -> Result<Certificate> {
    if desc.boundary_normal != Some(true) {
        return Err(Error::WrongModel("normalize_quadric_normal needs a normal boundary".into()));
    }
    let mut st = quadric_state(desc)?;
    let initial_snap = Snapshot::of_quadric(&st);
    let mut steps = Vec::new();
    let mut measure = (st.type_m, st.degree().unwrap());
    let mut descent = |m: (u32, u32), step: &mut LinkStep| {
        step.checks.push(Check::holds("(m, d) decreases", &format!("{:?} -> {:?}", measure, m), m < measure));
        measure = m;
    };
    let m0 = st.type_m;
    while st.type_m > 0 {
        let (next, mut step) = decrease_type(&st, st.type_m == 1 && desc.type1_meets_sigma)?;
        descent((next.type_m, next.degree().unwrap()), &mut step);
        steps.push(CertStep::new(step, Snapshot::of_quadric(&next)));
        st = next;
    }
    let d0 = st.degree().unwrap();
    while st.degree() != Some(0) {
        let (mid, next, [a, mut b]) = decrease_degree_via(&st)?;
        descent((next.type_m, next.degree().unwrap()), &mut b);
        steps.push(CertStep::new(a, Snapshot::of_quadric(&mid)));
        steps.push(CertStep::new(b, Snapshot::of_quadric(&next)));
        st = next;
    }
    let [blow, proj] = recognize_standard_quadric(&st)?;
    steps.push(CertStep::new(blow, Snapshot::of_quadric(&st)));
    steps.push(CertStep::new(proj, Snapshot::of_quadric(&st)));
    let expected = (m0 + 2 * d0 + 2) as usize;
    Ok(Certificate::new(Descriptor::Quadric(desc.clone()), initial_snap, steps, FinalModel::StandardQ3, expected))
}

/// Link along Sing D_h, whose strict transform becomes E_psi; hands the
/// resulting P2-bundle to the P2 normalization.
pub fn normalize_quadric_nonnormal(desc: &QuadricDescriptor) -> Result<Certificate> {
    if desc.boundary_normal != Some(false) {
        return Err(Error::WrongModel("normalize_quadric_nonnormal needs a non-normal boundary".into()));
    }
    let st = quadric_state(desc)?;
    let d = desc.hirzebruch_degree.ok_or_else(|| Error::Undetermined(vec!["hirzebruch_degree".into()]))?;
    let (h3, a) = (st.h3(), st.a());
    // E_psi = H - 2E + tF is the strict transform of D_h exactly when t = 0
    let hs: BigInt = &h3 + &a * BigInt::from(2) - BigInt::from(4);
    let s = CurveData::new(0).hit(H, hs.clone()).hit(F, 1).mult(DH, 2);
    let (p, _, mut step) = qp_link(&for_link(&st.ambient, &st.boundary_h()), &s)?;
    let contracted = p.tracked(DH).cloned().unwrap_or_default();
    step.checks.push(Check::eq("D_h is contracted onto B", DivisorClass::zero(), contracted));
    let new_bh = step.transform[EXC_KEY].clone();
    step.checks.push(Check::eq("new boundary is a sub-bundle xi + eF", BigInt::from(1), new_bh.coeff(XI)));
    step.checks.push(Check::eq("deg E = 2 - a", BigInt::from(2) - &a, p.form.cube(&DivisorClass::gen(XI))?));
    step = step.with_center("section", "Sing D_h");
    let e = new_bh.coeff(F);
    let p2 = P2Compactification::new(p.form.cube(&DivisorClass::gen(XI))?, e, d)?;
    step.checks.push(Check::holds("P2 lattice matches the link", "same form and K", p2.ambient.same_lattice(&p)));
    step.checks.extend(p2.embedding_checks()?);
    let (rest, _) = p2_cert_steps(&p2)?;
    let p2_expected = normalize_p2_expected(&p2);
    let mut steps = vec![CertStep::new(step, Snapshot::of_p2(&p2))];
    steps.extend(rest);
    Ok(Certificate::new(Descriptor::Quadric(desc.clone()), Snapshot::of_quadric(&st), steps, FinalModel::StandardP3, 1 + p2_expected))
}

fn normalize_p2_expected(st: &P2Compactification) -> usize {
    let d = st.d() as u64;
    let m: BigInt = (st.delta() - BigInt::from(d) + &st.e * BigInt::from(3)) / 2 + BigInt::from(1);
    (d + m.abs().to_u64().unwrap_or(u64::MAX) + 1) as usize
}

pub fn normalize(desc: &Descriptor) -> Result<Certificate> {
    match desc {
        Descriptor::P2(p) => {
            let st = P2Compactification::new(p.delta.clone(), p.e.clone(), p.d)?;
            let mut c = normalize_p2(&st)?;
            c.initial = desc.clone();
            Ok(c)
        }
        Descriptor::Quadric(q) => match q.boundary_normal {
            Some(true) => normalize_quadric_normal(q),
            Some(false) => normalize_quadric_nonnormal(q),
            None => Err(Error::Undetermined(vec!["boundary_normal".into()])),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareReport {
    pub checks: Vec<Check>,
    pub consistent: bool,
}

impl SquareReport {
    pub fn passed(&self) -> bool {
        self.consistent && self.checks.iter().all(|c| c.pass)
    }
}

/// Both ways around the square: qq-link along l then qp-link along s, and
/// qp-link along s then a point link at the image of l. `q` tracks D_h = H;
/// s and l lie in D_h and meet once when `meets` holds.
pub fn commuting_square_check(q: &ThreefoldModel, s: &CurveData, l: &CurveData, meets: bool) -> Result<SquareReport> {
    if !meets {
        return Ok(SquareReport { checks: vec![Check::holds("section meets ruling", "transversal intersection", false)], consistent: false });
    }
    let hh = DivisorClass::gen(H);
    let ff = DivisorClass::gen(F);
    let q0 = for_link(q, &hh);
    let hs = s.hits.get(H).cloned().ok_or_else(|| Error::IncompleteCurveData(H.into()))?;

    let (q1, _, qq) = qq_link(&q0, l)?;
    let s1 = CurveData::new(0).hit(H, &hs - BigInt::from(1)).hit(F, 1).mult(DH, 1);
    let (p1, b1, qp1) = qp_link(&for_link(&q1, &hh), &s1)?;

    let (p, b, qp2) = qp_link(&q0, s)?;
    let bh = p.tracked(DH).cloned().ok_or_else(|| Error::PatternMismatch("boundary lost".into()))?;
    let (p2, pp) = pp_link(&p, 0, &bh, true)?;

    let route1 = |d: &DivisorClass, m_l: u32, m_s: u32| qp1.apply(&qq.apply(d, m_l), m_s);
    let route2 = |d: &DivisorClass, m_s: u32, m_x: u32| pp.apply(&qp2.apply(d, m_s), m_x);
    let mut checks = vec![
        Check::holds("P1 and P2 have the same lattice", "form, K and fiber agree", p1.same_lattice(&p2)),
        Check::eq("D_h transport", route1(&hh, 1, 1), route2(&hh, 1, 1)),
        Check::eq("general member of |H|", route1(&hh, 0, 0), route2(&hh, 0, 1)),
        Check::eq("D_f transport", route1(&ff, 1, 0), route2(&ff, 0, 1)),
        Check::eq("tracked boundary", p1.tracked(DH).cloned().unwrap_or_default(), p2.tracked(DH).cloned().unwrap_or_default()),
    ];
    let m: BigInt = qp2.center["m"].parse().unwrap();
    let m1: BigInt = qp1.center["m"].parse().unwrap();
    let b_x = b.degree_of(&bh)?;
    let m2: BigInt = b_x - BigInt::from(1);
    checks.push(Check::eq("B1.(D_h)_P1 = m - 1", &m - BigInt::from(1), m1.clone()));
    checks.push(Check::eq("B1.(D_h)_P1 = B2.(D_h)_P2", m1, m2));
    checks.push(Check::eq("genus of B", b.genus, b1.genus));
    Ok(SquareReport { checks, consistent: true })
}
