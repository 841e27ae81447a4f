//! Divisor classes over named generators, symmetric trilinear forms and
//! surface pairings, all with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Origin {
    BasisOfConstruction,
    ExceptionalOfBlowup,
    PulledBack,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneratorLabel {
    pub name: String,
    pub origin: Origin,
}

impl GeneratorLabel {
    pub fn basis(name: &str) -> Self {
        Self { name: name.to_string(), origin: Origin::BasisOfConstruction }
    }

    pub fn exceptional(name: &str) -> Self {
        Self { name: name.to_string(), origin: Origin::ExceptionalOfBlowup }
    }
}

/// Finitely supported integer combination of generator names. Zero
/// coefficients are never stored, so structural equality is class equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DivisorClass {
    coeffs: BTreeMap<String, BigInt>,
}

impl DivisorClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn gen(name: &str) -> Self {
        Self::zero().with(name, 1)
    }

    pub fn from_pairs(pairs: &[(&str, i64)]) -> Self {
        pairs.iter().fold(Self::zero(), |acc, (n, c)| acc.with(n, *c))
    }

    /// Adds `c` times `name`.
    pub fn with(mut self, name: &str, c: impl Into<BigInt>) -> Self {
        self.add_term(name, c.into());
        self
    }

    fn add_term(&mut self, name: &str, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(name.to_string()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(name);
        }
    }

    pub fn coeff(&self, name: &str) -> BigInt {
        self.coeffs.get(name).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, &BigInt)> {
        self.coeffs.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.iter().map(|(n, c)| (n.clone(), c * k)).collect() }
    }

    /// Removes the generator `name` (a pushforward along a contraction of it).
    pub fn drop_gen(&self, name: &str) -> Self {
        let mut out = self.clone();
        out.coeffs.remove(name);
        out
    }

    /// Substitutes each generator by a class, leaving unmapped ones alone.
    pub fn substitute(&self, map: &BTreeMap<String, DivisorClass>) -> Self {
        let mut out = Self::zero();
        for (n, c) in &self.coeffs {
            match map.get(n) {
                Some(img) => out = out + img.scale(c),
                None => out.add_term(n, c.clone()),
            }
        }
        out
    }

    pub fn rename(&self, from: &str, to: &str) -> Self {
        let mut out = Self::zero();
        for (n, c) in &self.coeffs {
            out.add_term(if n == from { to } else { n }, c.clone());
        }
        out
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(mut self, rhs: DivisorClass) -> DivisorClass {
        for (n, c) in rhs.coeffs {
            self.add_term(&n, c);
        }
        self
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        self + (-rhs)
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        Self { coeffs: self.coeffs.into_iter().map(|(n, c)| (n, -c)).collect() }
    }
}

impl Mul<i64> for DivisorClass {
    type Output = DivisorClass;
    fn mul(self, k: i64) -> DivisorClass {
        self.scale(&BigInt::from(k))
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, d: DivisorClass) -> DivisorClass {
        d.scale(&BigInt::from(self))
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (n, c)) in self.coeffs.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            if a.is_one() {
                write!(f, "{n}")?;
            } else {
                write!(f, "{a}*{n}")?;
            }
        }
        Ok(())
    }
}

fn sorted3<'a>(a: &'a str, b: &'a str, c: &'a str) -> [String; 3] {
    let mut v = [a, b, c];
    v.sort_unstable();
    [v[0].to_string(), v[1].to_string(), v[2].to_string()]
}

/// Symmetric integer trilinear form, stored on sorted generator triples.
#[derive(Debug, Clone)]
pub struct TrilinearForm {
    gens: Vec<GeneratorLabel>,
    entries: BTreeMap<[String; 3], BigInt>,
}

impl TrilinearForm {
    pub fn new(gens: Vec<GeneratorLabel>) -> Self {
        Self { gens, entries: BTreeMap::new() }
    }

    pub fn gens(&self) -> &[GeneratorLabel] {
        &self.gens
    }

    pub fn gen_names(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.name.clone()).collect()
    }

    pub fn has(&self, name: &str) -> bool {
        self.gens.iter().any(|g| g.name == name)
    }

    pub fn origin(&self, name: &str) -> Option<Origin> {
        self.gens.iter().find(|g| g.name == name).map(|g| g.origin)
    }

    pub fn check_known(&self, d: &DivisorClass) -> Result<()> {
        for (n, _) in d.terms() {
            if !self.has(n) {
                return Err(Error::UnknownGenerator(n.to_string()));
            }
        }
        Ok(())
    }

    pub fn set(&mut self, a: &str, b: &str, c: &str, v: impl Into<BigInt>) {
        let key = sorted3(a, b, c);
        let v = v.into();
        if v.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, v);
        }
    }

    pub fn entry(&self, a: &str, b: &str, c: &str) -> BigInt {
        self.entries.get(&sorted3(a, b, c)).cloned().unwrap_or_default()
    }

    /// Nonzero entries on sorted triples.
    pub fn entries(&self) -> impl Iterator<Item = (&[String; 3], &BigInt)> {
        self.entries.iter()
    }

    pub fn triple(&self, a: &DivisorClass, b: &DivisorClass, c: &DivisorClass) -> Result<BigInt> {
        self.check_known(a)?;
        self.check_known(b)?;
        self.check_known(c)?;
        let mut sum = BigInt::zero();
        for (x, cx) in a.terms() {
            for (y, cy) in b.terms() {
                let cxy = cx * cy;
                for (z, cz) in c.terms() {
                    let e = self.entry(x, y, z);
                    if !e.is_zero() {
                        sum += &cxy * cz * e;
                    }
                }
            }
        }
        Ok(sum)
    }

    pub fn cube(&self, a: &DivisorClass) -> Result<BigInt> {
        self.triple(a, a, a)
    }
}

/// Forms are equal when they have the same generator names and entries;
/// origins and list order are bookkeeping only.
impl PartialEq for TrilinearForm {
    fn eq(&self, other: &Self) -> bool {
        let mut a = self.gen_names();
        let mut b = other.gen_names();
        a.sort();
        b.sort();
        a == b && self.entries == other.entries
    }
}

impl Eq for TrilinearForm {}

pub fn triple(form: &TrilinearForm, a: &DivisorClass, b: &DivisorClass, c: &DivisorClass) -> Result<BigInt> {
    form.triple(a, b, c)
}

fn sorted2(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// Symmetric rational pairing on a surface lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfacePairing {
    gens: Vec<String>,
    entries: BTreeMap<(String, String), BigRational>,
    pub scale_note: Option<String>,
}

impl SurfacePairing {
    pub fn new(gens: &[&str]) -> Self {
        Self { gens: gens.iter().map(|s| s.to_string()).collect(), entries: BTreeMap::new(), scale_note: None }
    }

    pub fn gens(&self) -> &[String] {
        &self.gens
    }

    pub fn has(&self, name: &str) -> bool {
        self.gens.iter().any(|g| g == name)
    }

    pub fn set(&mut self, a: &str, b: &str, v: BigRational) {
        let key = sorted2(a, b);
        if v.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, v);
        }
    }

    pub fn set_int(&mut self, a: &str, b: &str, v: i64) {
        self.set(a, b, BigRational::from_integer(v.into()));
    }

    pub fn entry(&self, a: &str, b: &str) -> BigRational {
        self.entries.get(&sorted2(a, b)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn pair(&self, a: &DivisorClass, b: &DivisorClass) -> Result<BigRational> {
        for d in [a, b] {
            for (n, _) in d.terms() {
                if !self.has(n) {
                    return Err(Error::UnknownGenerator(n.to_string()));
                }
            }
        }
        let mut sum = BigRational::zero();
        for (x, cx) in a.terms() {
            for (y, cy) in b.terms() {
                let e = self.entry(x, y);
                if !e.is_zero() {
                    sum += e * BigRational::from_integer(cx * cy);
                }
            }
        }
        Ok(sum)
    }
}

pub fn pair(p: &SurfacePairing, a: &DivisorClass, b: &DivisorClass) -> Result<BigRational> {
    p.pair(a, b)
}

/// Coordinates of `target` in `basis`, if it lies in their integer span.
/// `gens` fixes the ambient coordinates.
pub fn express(target: &DivisorClass, basis: &[DivisorClass], gens: &[String]) -> Option<Vec<BigInt>> {
    let n = basis.len();
    let m = gens.len();
    // augmented system: columns are basis vectors, rows are generators
    let mut rows: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut r: Vec<BigRational> =
                basis.iter().map(|b| BigRational::from_integer(b.coeff(&gens[i]))).collect();
            r.push(BigRational::from_integer(target.coeff(&gens[i])));
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(row, p);
        let inv = rows[row][col].recip();
        for v in rows[row].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..m {
            if r != row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..=n {
                    let t = &rows[row][c] * &f;
                    rows[r][c] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if rows[row..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    let mut sol = vec![BigRational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        sol[c] = rows[r][n].clone();
    }
    if sol.iter().any(|x| !x.is_integer()) {
        return None;
    }
    Some(sol.into_iter().map(|x| x.to_integer()).collect())
}

/// Determinant of the square matrix whose rows are the classes in `gens` coordinates.
pub fn determinant(rows: &[DivisorClass], gens: &[String]) -> BigRational {
    let n = rows.len();
    if n != gens.len() {
        return BigRational::zero();
    }
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| gens.iter().map(|g| BigRational::from_integer(r.coeff(g))).collect())
        .collect();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else { return BigRational::zero() };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let piv = a[col][col].clone();
        det *= &piv;
        for r in col + 1..n {
            let f = &a[r][col] / &piv;
            for c in col..n {
                let t = &a[col][c] * &f;
                a[r][c] -= t;
            }
        }
    }
    det
}

pub fn is_unimodular(rows: &[DivisorClass], gens: &[String]) -> bool {
    determinant(rows, gens).abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2_form(degree: i64) -> TrilinearForm {
        let mut f = TrilinearForm::new(vec![GeneratorLabel::basis("xi"), GeneratorLabel::basis("F")]);
        f.set("xi", "xi", "xi", degree);
        f.set("xi", "xi", "F", 1);
        f
    }

    #[test]
    fn xi_squared_f_is_one() {
        let f = p2_form(4);
        let xi = DivisorClass::gen("xi");
        let fib = DivisorClass::gen("F");
        assert_eq!(f.triple(&xi, &xi, &fib).unwrap(), BigInt::from(1));
        assert_eq!(f.triple(&fib, &xi, &xi).unwrap(), BigInt::from(1));
        assert_eq!(f.cube(&xi).unwrap(), BigInt::from(4));
    }

    #[test]
    fn zero_class_gives_zero() {
        let f = p2_form(3);
        let xi = DivisorClass::gen("xi");
        assert!(f.triple(&DivisorClass::zero(), &xi, &xi).unwrap().is_zero());
    }

    #[test]
    fn unknown_generator_is_reported() {
        let f = p2_form(3);
        let e = DivisorClass::gen("E");
        assert_eq!(f.triple(&e, &e, &e), Err(Error::UnknownGenerator("E".into())));
    }

    #[test]
    fn expand_by_hand() {
        // (xi - 2F)^2 (xi + F) = xi^3 + xi^2F - 4 xi^2F = d - 3
        let f = p2_form(5);
        let a = DivisorClass::from_pairs(&[("xi", 1), ("F", -2)]);
        let b = DivisorClass::from_pairs(&[("xi", 1), ("F", 1)]);
        assert_eq!(f.triple(&a, &a, &b).unwrap(), BigInt::from(2));
    }

    #[test]
    fn cone_ruling_pairs_to_half() {
        let mut p = SurfacePairing::new(&["r"]);
        p.set("r", "r", BigRational::new(1.into(), 2.into()));
        let r = DivisorClass::gen("r");
        assert_eq!(p.pair(&r, &r).unwrap(), BigRational::new(1.into(), 2.into()));
        let o1 = r.clone() * 2;
        assert_eq!(p.pair(&o1, &o1).unwrap(), BigRational::from_integer(2.into()));
    }

    #[test]
    fn express_and_determinant() {
        let gens: Vec<String> = ["H", "F", "E"].iter().map(|s| s.to_string()).collect();
        let basis = vec![
            DivisorClass::from_pairs(&[("H", 1), ("E", -1)]),
            DivisorClass::gen("F"),
            DivisorClass::from_pairs(&[("F", 1), ("E", -1)]),
        ];
        assert!(is_unimodular(&basis, &gens));
        let h = DivisorClass::gen("H");
        let x = express(&h, &basis, &gens).unwrap();
        assert_eq!(x, vec![BigInt::from(1), BigInt::from(1), BigInt::from(-1)]);
        let half = vec![DivisorClass::gen("H") * 2, DivisorClass::gen("F"), DivisorClass::gen("E")];
        assert!(express(&h, &half, &gens).is_none());
    }

    #[test]
    fn display_is_readable() {
        let d = DivisorClass::from_pairs(&[("xi", 1), ("F", -3)]);
        assert_eq!(d.to_string(), "-3*F + xi");
    }
}
