use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde_json::{Map, Value};

use super::GeometricFlags;
use crate::error::{Error, Result};
use crate::models::DuValLabel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiberShape {
    /// The quadric cone; eu = 3.
    Cone,
    /// A smooth quadric F_0; eu = 4.
    Smooth,
}

impl FiberShape {
    fn name(self) -> &'static str {
        match self {
            FiberShape::Cone => "cone",
            FiberShape::Smooth => "smooth",
        }
    }
}

/// Hypotheses on (Q, D_h, D_f). Absent fields stay None and surface as
/// Undetermined in classification.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QuadricDescriptor {
    pub boundary_normal: Option<bool>,
    pub base_rational: Option<bool>,
    pub dh_prime: Option<bool>,
    pub type_m: Option<u32>,
    pub hirzebruch_degree: Option<u32>,
    pub anticanonical_cube: Option<BigInt>,
    pub a: Option<BigInt>,
    pub h12: Option<u32>,
    pub df_fiber: Option<FiberShape>,
    pub other_fibers_smooth: Option<bool>,
    /// At type 1, link along the component meeting the Sigma-transform
    /// (result F_d) instead of the disjoint one (F_{d-1}).
    pub type1_meets_sigma: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct P2Descriptor {
    pub delta: BigInt,
    pub e: BigInt,
    pub d: u32,
    pub twists: Option<[i64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Descriptor {
    Quadric(QuadricDescriptor),
    P2(P2Descriptor),
}

pub(crate) struct LatticeInfo {
    pub lattice_ok: bool,
    pub h12_conflict: Option<String>,
    pub a: BigInt,
    pub h3: BigInt,
}

impl QuadricDescriptor {
    /// A fully specified normal descriptor with all flags favourable.
    pub fn normal(m: u32, d: u32, cube: i64) -> Self {
        Self {
            boundary_normal: Some(true),
            base_rational: Some(true),
            dh_prime: Some(true),
            type_m: Some(m),
            hirzebruch_degree: Some(d),
            anticanonical_cube: Some(BigInt::from(cube)),
            h12: Some(0),
            df_fiber: Some(FiberShape::Cone),
            other_fibers_smooth: Some(true),
            ..Self::default()
        }
    }

    /// Non-normal boundary with -K = 2H + aF; `d` is the degree of the
    /// boundary F_d after the link along Sing D_h.
    pub fn non_normal(a: i64, d: u32, cube: i64) -> Self {
        Self {
            boundary_normal: Some(false),
            base_rational: Some(true),
            dh_prime: Some(true),
            hirzebruch_degree: Some(d),
            anticanonical_cube: Some(BigInt::from(cube)),
            a: Some(BigInt::from(a)),
            ..Self::default()
        }
    }

    pub(crate) fn flags(&self) -> GeometricFlags {
        GeometricFlags {
            base_rational: self.base_rational,
            dh_prime: self.dh_prime,
            df_fiber: self.df_fiber,
            other_fibers_smooth: self.other_fibers_smooth,
        }
    }

    pub(crate) fn missing_lattice(&self) -> Vec<String> {
        let mut m = Vec::new();
        if self.boundary_normal == Some(true) && self.type_m.is_none() {
            m.push("type_m".to_string());
        }
        if self.anticanonical_cube.is_none() && (self.a.is_none() || self.boundary_normal == Some(false)) {
            m.push("anticanonical_cube".to_string());
        }
        if self.boundary_normal == Some(false) && self.a.is_none() {
            m.push("a".to_string());
        }
        m
    }

    /// Solves for (a, H^3) with D_h = H. Ok(None) when data is missing.
    pub(crate) fn lattice(&self) -> Result<Option<LatticeInfo>> {
        let eight = BigInt::from(8);
        match self.boundary_normal {
            Some(true) => {
                let m = match self.type_m {
                    Some(m) => BigInt::from(m),
                    None => return Ok(None),
                };
                // (-K)^3 = 8 H^3 + 24 a with H^3 = 8 - m - 4a
                let base = BigInt::from(64) - &eight * &m;
                let (a, ok) = match (&self.a, &self.anticanonical_cube) {
                    (Some(a), Some(c)) => (a.clone(), *c == &base - &eight * a),
                    (Some(a), None) => (a.clone(), true),
                    (None, Some(c)) => {
                        let (q, r) = (&base - c).div_rem(&eight);
                        (q, r.is_zero())
                    }
                    (None, None) => return Ok(None),
                };
                let h3 = &eight - &m - &a * BigInt::from(4);
                let cube = &eight * &h3 + BigInt::from(24) * &a;
                let pa = (BigInt::from(40) - &cube).div_floor(&eight);
                let conflict = match self.h12 {
                    Some(h) if ok && BigInt::from(h) != pa => {
                        Some(format!("eu(Q) = 6 - 2 h12 = 6 - 2 p_a(B) fails: h12 = {h}, p_a(B) = (40 - (-K)^3)/8 = {pa}"))
                    }
                    _ => None,
                };
                Ok(Some(LatticeInfo { lattice_ok: ok, h12_conflict: conflict, a, h3 }))
            }
            Some(false) => {
                let (a, c) = match (&self.a, &self.anticanonical_cube) {
                    (Some(a), Some(c)) => (a.clone(), c.clone()),
                    _ => return Ok(None),
                };
                let (h3, r) = (c - BigInt::from(24) * &a).div_rem(&eight);
                Ok(Some(LatticeInfo { lattice_ok: r.is_zero(), h12_conflict: None, a, h3 }))
            }
            None => Ok(None),
        }
    }

    /// Rejects contradictory or incomplete structural fields.
    pub fn validate(&self) -> Result<()> {
        if self.boundary_normal == Some(true) {
            match (self.type_m, self.hirzebruch_degree) {
                (Some(0), None) => return Err(Error::Descriptor("type 0 without hirzebruch_degree".into())),
                (Some(m), Some(0)) if m >= 1 => {
                    return Err(Error::Descriptor(format!("type {m} boundary needs S_d or a DuVal degeneration with d > 0")))
                }
                (Some(m), None) => return Err(Error::Descriptor(format!("type {m} without hirzebruch_degree"))),
                _ => {}
            }
        }
        if self.boundary_normal == Some(false) {
            if self.type_m.is_some() {
                return Err(Error::Descriptor("type_m is defined only for a normal boundary".into()));
            }
            if self.hirzebruch_degree.is_none() {
                return Err(Error::Descriptor("non-normal boundary needs hirzebruch_degree of the link's boundary".into()));
            }
        }
        Ok(())
    }
}

impl P2Descriptor {
    pub fn new(delta: i64, e: i64, d: u32) -> Self {
        Self::new_big(BigInt::from(delta), BigInt::from(e), d)
    }

    pub fn new_big(delta: BigInt, e: BigInt, d: u32) -> Self {
        Self { delta, e, d, twists: None }
    }
}

fn num(v: &Value, key: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| Error::Descriptor(format!("{key}: not an integer"))),
        Value::String(s) => BigInt::from_str(s.trim()).map_err(|_| Error::Descriptor(format!("{key}: `{s}` is not an integer"))),
        _ => Err(Error::Descriptor(format!("{key}: expected an integer"))),
    }
}

fn small(v: &Value, key: &str) -> Result<u32> {
    num(v, key)?.to_u32().ok_or_else(|| Error::Descriptor(format!("{key}: expected a non-negative integer")))
}

fn flag(v: &Value, key: &str) -> Result<bool> {
    v.as_bool().ok_or_else(|| Error::Descriptor(format!("{key}: expected true or false")))
}

fn s(v: &BigInt) -> Value {
    Value::String(v.to_string())
}

const QUADRIC_KEYS: &[&str] = &[
    "format",
    "kind",
    "boundary_normal",
    "base_rational",
    "dh_prime",
    "type_m",
    "singularity",
    "hirzebruch_degree",
    "anticanonical_cube",
    "a",
    "h12",
    "df_fiber",
    "other_fibers_smooth",
    "type1_branch",
];
const P2_KEYS: &[&str] = &["format", "kind", "delta", "e", "hirzebruch_degree", "twists"];

impl Descriptor {
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Descriptor("expected a JSON object".into()))?;
        if let Some(f) = obj.get("format") {
            if num(f, "format")? != BigInt::from(1) {
                return Err(Error::Descriptor(format!("unsupported format {f}")));
            }
        }
        let kind = obj.get("kind").and_then(Value::as_str).ok_or_else(|| Error::Descriptor("missing kind".into()))?;
        let allowed = match kind {
            "quadric" => QUADRIC_KEYS,
            "p2bundle" => P2_KEYS,
            k => return Err(Error::Descriptor(format!("unknown kind `{k}`"))),
        };
        if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::Descriptor(format!("unknown field `{k}` for kind {kind}")));
        }
        if kind == "p2bundle" {
            return Self::p2_from(obj).map(Descriptor::P2);
        }
        let mut q = QuadricDescriptor::default();
        let get = |k: &str| obj.get(k).filter(|v| !v.is_null());
        if let Some(v) = get("boundary_normal") {
            q.boundary_normal = Some(flag(v, "boundary_normal")?);
        }
        if let Some(v) = get("base_rational") {
            q.base_rational = Some(flag(v, "base_rational")?);
        }
        if let Some(v) = get("dh_prime") {
            q.dh_prime = Some(flag(v, "dh_prime")?);
        }
        if let Some(v) = get("other_fibers_smooth") {
            q.other_fibers_smooth = Some(flag(v, "other_fibers_smooth")?);
        }
        if let Some(v) = get("type_m") {
            q.type_m = Some(small(v, "type_m")?);
        }
        if let Some(v) = get("singularity") {
            let label = v.as_str().and_then(DuValLabel::parse).ok_or_else(|| Error::Descriptor(format!("singularity: unknown label {v}")))?;
            match q.type_m {
                Some(m) if m != label.type_number() => {
                    return Err(Error::Descriptor(format!("type_m = {m} contradicts singularity {label}")));
                }
                _ => q.type_m = Some(label.type_number()),
            }
        }
        if let Some(v) = get("hirzebruch_degree") {
            q.hirzebruch_degree = Some(small(v, "hirzebruch_degree")?);
        }
        if let Some(v) = get("anticanonical_cube") {
            q.anticanonical_cube = Some(num(v, "anticanonical_cube")?);
        }
        if let Some(v) = get("a") {
            q.a = Some(num(v, "a")?);
        }
        if let Some(v) = get("h12") {
            q.h12 = Some(small(v, "h12")?);
        }
        if let Some(v) = get("df_fiber") {
            q.df_fiber = Some(match v.as_str() {
                Some("cone") => FiberShape::Cone,
                Some("smooth") => FiberShape::Smooth,
                _ => return Err(Error::Descriptor(format!("df_fiber: expected \"cone\" or \"smooth\", got {v}"))),
            });
        }
        if let Some(v) = get("type1_branch") {
            q.type1_meets_sigma = match v.as_str() {
                Some("meets") => true,
                Some("disjoint") => false,
                _ => return Err(Error::Descriptor(format!("type1_branch: expected \"meets\" or \"disjoint\", got {v}"))),
            };
        }
        q.validate()?;
        Ok(Descriptor::Quadric(q))
    }

    fn p2_from(obj: &Map<String, Value>) -> Result<P2Descriptor> {
        let d = small(obj.get("hirzebruch_degree").ok_or_else(|| Error::Descriptor("missing hirzebruch_degree".into()))?, "hirzebruch_degree")?;
        let e = num(obj.get("e").ok_or_else(|| Error::Descriptor("missing e".into()))?, "e")?;
        let twists = match obj.get("twists") {
            Some(Value::Array(t)) if t.len() == 3 => {
                let mut out = [0i64; 3];
                for (o, v) in out.iter_mut().zip(t) {
                    *o = num(v, "twists")?.to_i64().ok_or_else(|| Error::Descriptor("twists: out of range".into()))?;
                }
                Some(out)
            }
            Some(_) => return Err(Error::Descriptor("twists: expected three integers".into())),
            None => None,
        };
        let delta = match (obj.get("delta"), twists) {
            (Some(v), t) => {
                let delta = num(v, "delta")?;
                if let Some(t) = t {
                    let sum: i64 = t.iter().sum::<i64>() - 3 * t.iter().min().unwrap();
                    if BigInt::from(sum) != delta {
                        return Err(Error::Descriptor(format!("delta = {delta} but the twists give {sum}")));
                    }
                }
                delta
            }
            (None, Some(t)) => BigInt::from(t.iter().sum::<i64>() - 3 * t.iter().min().unwrap()),
            (None, None) => return Err(Error::Descriptor("p2bundle needs delta or twists".into())),
        };
        Ok(P2Descriptor { delta, e, d, twists })
    }

    /// Canonical JSON: every present field, integers as strings.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("format".into(), Value::from(1));
        match self {
            Descriptor::P2(p) => {
                m.insert("kind".into(), "p2bundle".into());
                m.insert("delta".into(), s(&p.delta));
                m.insert("e".into(), s(&p.e));
                m.insert("hirzebruch_degree".into(), p.d.to_string().into());
                if let Some(t) = p.twists {
                    m.insert("twists".into(), Value::Array(t.iter().map(|v| Value::String(v.to_string())).collect()));
                }
            }
            Descriptor::Quadric(q) => {
                m.insert("kind".into(), "quadric".into());
                let mut b = |k: &str, v: Option<bool>| {
                    if let Some(v) = v {
                        m.insert(k.into(), v.into());
                    }
                };
                b("boundary_normal", q.boundary_normal);
                b("base_rational", q.base_rational);
                b("dh_prime", q.dh_prime);
                b("other_fibers_smooth", q.other_fibers_smooth);
                let ints = [
                    ("type_m", q.type_m.map(BigInt::from)),
                    ("hirzebruch_degree", q.hirzebruch_degree.map(BigInt::from)),
                    ("anticanonical_cube", q.anticanonical_cube.clone()),
                    ("a", q.a.clone()),
                    ("h12", q.h12.map(BigInt::from)),
                ];
                for (k, v) in ints {
                    if let Some(v) = v {
                        m.insert(k.into(), s(&v));
                    }
                }
                if let Some(f) = q.df_fiber {
                    m.insert("df_fiber".into(), f.name().into());
                }
                if q.type1_meets_sigma {
                    m.insert("type1_branch".into(), "meets".into());
                }
            }
        }
        Value::Object(m)
    }
}
