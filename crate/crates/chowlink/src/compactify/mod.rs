//! Compactifications of affine 3-space compatible with a quadric fibration
//! or a P2-bundle, their classification predicates, and the normalization
//! pipelines down to (P3, H).

mod certificate;
mod descriptor;
mod pipeline;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::chow_core::DivisorClass;
use crate::error::{Error, Result};
use crate::links::qp_link;
use crate::models::{
    anticanonical_cube, boundary_surface, quadric_fibration, Check, CurveData, DuValLabel, SurfaceEmbedding, SurfaceKind, ThreefoldModel, DF, DH, F,
    H, SIGMA, XI,
};

pub use certificate::{replay, CertStep, Certificate, FinalModel, Snapshot};
pub use descriptor::{Descriptor, FiberShape, P2Descriptor, QuadricDescriptor};
pub use pipeline::{
    commuting_square_check, decrease_degree, decrease_type, normalize, normalize_p2, normalize_quadric_nonnormal, normalize_quadric_normal,
    recognize_standard_bundle, recognize_standard_quadric, SquareReport,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    IsA3,
    NotA3(Vec<String>),
    Undetermined(Vec<String>),
}

impl Verdict {
    pub fn is_a3(&self) -> bool {
        matches!(self, Verdict::IsA3)
    }

    pub fn into_result(self) -> Result<()> {
        match self {
            Verdict::IsA3 => Ok(()),
            Verdict::NotA3(r) => Err(Error::NotA3(r.join("; "))),
            Verdict::Undetermined(m) => Err(Error::Undetermined(m)),
        }
    }
}

/// Boundary data that the lattice cannot see, carried through the pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometricFlags {
    pub base_rational: Option<bool>,
    pub dh_prime: Option<bool>,
    pub df_fiber: Option<FiberShape>,
    pub other_fibers_smooth: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadricCompactification {
    pub ambient: ThreefoldModel,
    pub boundary_normal: bool,
    pub type_m: u32,
    pub embedding: Option<SurfaceEmbedding>,
    pub hodge_h12: Option<u32>,
    pub flags: GeometricFlags,
}

impl QuadricCompactification {
    pub fn boundary_h(&self) -> DivisorClass {
        self.ambient.tracked(DH).cloned().unwrap_or_else(|| DivisorClass::gen(H))
    }

    pub fn boundary_f(&self) -> DivisorClass {
        self.ambient.tracked(DF).cloned().unwrap_or_else(|| DivisorClass::gen(F))
    }

    /// The a of -K ~_C 2H + aF.
    pub fn a(&self) -> BigInt {
        -self.ambient.canonical.coeff(F)
    }

    pub fn h3(&self) -> BigInt {
        self.ambient.form.cube(&DivisorClass::gen(H)).expect("H is a generator")
    }

    /// Hirzebruch degree of the boundary (carried through DuVal stages).
    pub fn degree(&self) -> Option<u32> {
        self.embedding.as_ref().and_then(|e| e.surface.degree())
    }

    /// 2 D_h ~_C -K, read off the lattice.
    pub fn lattice_condition(&self) -> bool {
        let diff = self.ambient.anticanonical() - self.boundary_h() * 2;
        let ok = diff.terms().all(|(n, _)| n == F);
        ok
    }

    pub fn classify(&self) -> Verdict {
        classify_flags(self.boundary_normal, self.lattice_condition(), &self.flags, self.hodge_h12)
    }

    /// Builds the model for a normal boundary of type m on F_d with the
    /// given a: H^3 = 8 - m - 4a.
    pub fn normal(m: u32, d: u32, a: BigInt, h12: Option<u32>, flags: GeometricFlags) -> Result<Self> {
        if m >= 1 && d == 0 {
            return Err(Error::Descriptor(format!("type {m} needs a Hirzebruch degree d > 0")));
        }
        let h3 = BigInt::from(8) - BigInt::from(m) - &a * BigInt::from(4);
        let ambient = quadric_fibration(h3, a.clone()).with_tracked(DH, DivisorClass::gen(H)).with_tracked(DF, DivisorClass::gen(F));
        let embedding = SurfaceEmbedding::quadric_boundary(boundary_surface(m, d), &a);
        Ok(Self { ambient, boundary_normal: true, type_m: m, embedding: Some(embedding), hodge_h12: h12, flags })
    }

    /// D^3, D^2 F, D F^2 against the boundary surface pairings.
    pub fn embedding_checks(&self) -> Result<Vec<Check>> {
        match &self.embedding {
            Some(e) => e.closure_checks(&self.ambient, &self.boundary_h()),
            None => Ok(Vec::new()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct P2Compactification {
    pub ambient: ThreefoldModel,
    pub e: BigInt,
    pub embedding: SurfaceEmbedding,
}

impl P2Compactification {
    pub fn new(delta: BigInt, e: BigInt, d: u32) -> Result<Self> {
        let embedding = SurfaceEmbedding::p2_boundary(d, &delta, &e)
            .ok_or_else(|| Error::ParityViolation(format!("{} (with d = {d})", &delta + &e)))?;
        let ambient = crate::models::p2_bundle_of_degree(delta)
            .with_tracked(DH, DivisorClass::gen(XI).with(F, e.clone()))
            .with_tracked(DF, DivisorClass::gen(F));
        Ok(Self { ambient, e, embedding })
    }

    pub fn delta(&self) -> BigInt {
        self.ambient.form.cube(&DivisorClass::gen(XI)).expect("xi is a generator")
    }

    pub fn d(&self) -> u32 {
        self.embedding.surface.degree().expect("Hirzebruch boundary")
    }

    pub fn boundary_h(&self) -> DivisorClass {
        self.ambient.tracked(DH).cloned().expect("tracked boundary")
    }

    pub fn embedding_checks(&self) -> Result<Vec<Check>> {
        self.embedding.closure_checks(&self.ambient, &self.boundary_h())
    }
}

fn classify_flags(normal: bool, lattice: bool, flags: &GeometricFlags, h12: Option<u32>) -> Verdict {
    let mut failed = Vec::new();
    let mut missing = Vec::new();
    if !lattice {
        failed.push("2 D_h ~_C -K".to_string());
    }
    let mut need = |name: &str, v: Option<bool>| match v {
        Some(true) => {}
        Some(false) => failed.push(name.to_string()),
        None => missing.push(name.to_string()),
    };
    need("base_rational", flags.base_rational);
    need("dh_prime", flags.dh_prime);
    if normal {
        need("df_fiber", flags.df_fiber.map(|s| s == FiberShape::Cone));
        need("h12", h12.map(|h| h == 0));
        need("other_fibers_smooth", flags.other_fibers_smooth);
    }
    if !failed.is_empty() {
        Verdict::NotA3(failed)
    } else if !missing.is_empty() {
        Verdict::Undetermined(missing)
    } else {
        Verdict::IsA3
    }
}

/// Classification of a quadric descriptor. Missing geometric flags give
/// Undetermined; any failing predicate gives NotA3.
pub fn classify_quadric(desc: &QuadricDescriptor) -> Verdict {
    let normal = match desc.boundary_normal {
        Some(n) => n,
        None => return Verdict::Undetermined(vec!["boundary_normal".into()]),
    };
    let flags = desc.flags();
    match desc.lattice() {
        Ok(Some(lattice)) => {
            let mut v = classify_flags(normal, lattice.lattice_ok, &flags, desc.h12);
            if let (Verdict::IsA3, Some(reason)) = (&v, lattice.h12_conflict) {
                v = Verdict::NotA3(vec![reason]);
            }
            v
        }
        Ok(None) => match classify_flags(normal, true, &flags, desc.h12) {
            Verdict::NotA3(r) => Verdict::NotA3(r),
            Verdict::Undetermined(mut m) => {
                m.extend(desc.missing_lattice());
                Verdict::Undetermined(m)
            }
            Verdict::IsA3 => Verdict::Undetermined(desc.missing_lattice()),
        },
        Err(e) => Verdict::NotA3(vec![e.to_string()]),
    }
}

/// Non-negative solutions (h12, #sigma, eu(D_f)) of bound - 2h >= 3 + sigma + eu
/// with eu in `options`, h in 0..=h_max and sigma in 0..=sigma_max.
pub fn euler_solver(options: &[u32], bound: i64, h_max: u32, sigma_max: u32) -> BTreeSet<(u32, u32, u32)> {
    let mut out = BTreeSet::new();
    for h in 0..=h_max {
        for s in 0..=sigma_max {
            for &e in options {
                if bound - 2 * h as i64 >= 3 + s as i64 + e as i64 {
                    out.insert((h, s, e));
                }
            }
        }
    }
    out
}

pub fn euler_solver_default() -> BTreeSet<(u32, u32, u32)> {
    euler_solver(&[3, 4], 6, 3, 3)
}

/// Hodge diamond of a smooth projective 3-fold with b1 = 0, b2 = 2 and
/// h^{2,0} = h^{3,0} = 0. Row k lists h^{p,k-p}.
pub fn hodge_diamond(h12: u32) -> Vec<Vec<u32>> {
    vec![vec![1], vec![0, 0], vec![0, 2, 0], vec![0, h12, h12, 0], vec![0, 2, 0], vec![0, 0], vec![1]]
}

pub fn euler_number(diamond: &[Vec<u32>]) -> i64 {
    diamond
        .iter()
        .enumerate()
        .map(|(k, row)| {
            let b: i64 = row.iter().map(|&v| v as i64).sum();
            if k % 2 == 0 {
                b
            } else {
                -b
            }
        })
        .sum()
}

pub fn singularity_label(m: u32) -> DuValLabel {
    DuValLabel::of_type(m)
}

/// Type of a normal boundary via the qp-link along the minimal section:
/// m = B.(D_h)_P.
pub fn type_of(state: &QuadricCompactification) -> Result<u32> {
    if !state.boundary_normal {
        return Err(Error::WrongModel("type is defined for a normal boundary".into()));
    }
    let emb = state.embedding.as_ref().ok_or_else(|| Error::Undetermined(vec!["boundary surface".into()]))?;
    let sigma = DivisorClass::gen(SIGMA);
    let hs = emb.surface.pair(&emb.self_restriction, &sigma)?;
    let hs = hs.to_integer();
    let s = CurveData::new(0).hit(H, hs).hit(F, 1).mult(DH, 1);
    let mut q = state.ambient.clone();
    q.tracked.retain(|k, _| k == DH);
    let (_, _, step) = qp_link(&q, &s)?;
    let m: BigInt = step.center["m"].parse().map_err(|_| Error::PatternMismatch("type".into()))?;
    m.to_u32().ok_or_else(|| Error::PatternMismatch(format!("negative type {m}")))
}

/// Is the quadric lattice of a standard model: (-K)^3 = 40 exactly when
/// p_a(B) = 0.
pub(crate) fn pa_of_b(q: &ThreefoldModel) -> Result<BigInt> {
    let cube = anticanonical_cube(q)?;
    let (quo, rem) = (BigInt::from(40) - cube).div_rem(&BigInt::from(8));
    if !rem.is_zero() {
        return Err(Error::PatternMismatch(format!("(-K)^3 = 40 - 8 p_a(B) has no integer solution (remainder {rem})")));
    }
    Ok(quo)
}

pub(crate) fn surface_name(e: &SurfaceEmbedding) -> String {
    match &e.surface.kind {
        SurfaceKind::Hirzebruch(d) => format!("F_{d}"),
        SurfaceKind::BlownHirzebruch(d) => format!("S_{d}"),
        SurfaceKind::DuVal { label, d } => format!("{label} (d={d})"),
        SurfaceKind::QuadricSmooth => "Q2".into(),
        SurfaceKind::QuadricCone => "Q2_0".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_default_is_unique() {
        let s = euler_solver_default();
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![(0, 0, 3)]);
        assert!(euler_solver(&[4], 6, 3, 3).is_empty());
        assert!(euler_solver(&[3, 4], 8, 3, 3).contains(&(0, 0, 4)));
    }

    #[test]
    fn hodge_euler() {
        assert_eq!(euler_number(&hodge_diamond(0)), 6);
        assert_eq!(euler_number(&hodge_diamond(1)), 4);
        assert_eq!(euler_number(&hodge_diamond(3)), 0);
    }

    #[test]
    fn labels() {
        assert_eq!(singularity_label(2).to_string(), "2A1");
        assert_eq!(singularity_label(3).to_string(), "A3");
        assert_eq!(singularity_label(0), DuValLabel::Hirzebruch);
        assert_eq!(singularity_label(5).to_string(), "D5");
    }

    #[test]
    fn type_is_recovered() {
        let flags = GeometricFlags { base_rational: Some(true), dh_prime: Some(true), df_fiber: Some(FiberShape::Cone), other_fibers_smooth: Some(true) };
        for (m, d) in [(0, 0), (0, 3), (1, 2), (2, 1), (4, 1), (6, 3)] {
            let st = QuadricCompactification::normal(m, d, BigInt::from(3) - BigInt::from(m), Some(0), flags.clone()).unwrap();
            assert_eq!(type_of(&st).unwrap(), m, "m={m} d={d}");
            assert!(crate::models::all_pass(&st.embedding_checks().unwrap()));
            assert!(st.classify().is_a3());
        }
    }
}
