//! Normalizers of infinite cyclic subgroups in `ℤ² ⋊_A ℤ` for hyperbolic `A`.
//!
//! For `c = ((0,0), l)` the normalizer is `⟨((0,0),1)⟩ ≅ ℤ`; for
//! `c = (u, 0)` it is the fibre `ℤ² ⋊ {0}`. The probe certifies this by
//! exact integer checks over a bounded range of exponents.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::BassSerreError;
use crate::gl2z::{Mat2Z, MatClass};

/// `ℤ² ⋊_A ℤ` with `(v, l)·(w, m) = (v + Aˡw, l + m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemidirectSpec {
    pub monodromy: Mat2Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SdElem {
    pub v: (i64, i64),
    pub l: i64,
}

impl SdElem {
    pub const IDENTITY: SdElem = SdElem { v: (0, 0), l: 0 };

    pub fn new(x: i64, y: i64, l: i64) -> Self {
        SdElem { v: (x, y), l }
    }
}

impl fmt::Display for SdElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({},{}),{})", self.v.0, self.v.1, self.l)
    }
}

fn add(a: (i64, i64), b: (i64, i64)) -> Result<(i64, i64), BassSerreError> {
    Ok((
        a.0.checked_add(b.0).ok_or(crate::gl2z::Gl2Error::Overflow)?,
        a.1.checked_add(b.1).ok_or(crate::gl2z::Gl2Error::Overflow)?,
    ))
}

impl SemidirectSpec {
    pub fn new(monodromy: Mat2Z) -> Self {
        SemidirectSpec { monodromy }
    }

    pub fn mul(&self, a: &SdElem, b: &SdElem) -> Result<SdElem, BassSerreError> {
        let moved = self.monodromy.pow(a.l)?.apply(b.v)?;
        Ok(SdElem { v: add(a.v, moved)?, l: a.l + b.l })
    }

    pub fn inverse(&self, a: &SdElem) -> Result<SdElem, BassSerreError> {
        let (x, y) = self.monodromy.pow(-a.l)?.apply(a.v)?;
        Ok(SdElem { v: (-x, -y), l: -a.l })
    }

    pub fn conjugate(&self, g: &SdElem, c: &SdElem) -> Result<SdElem, BassSerreError> {
        self.mul(&self.mul(g, c)?, &self.inverse(g)?)
    }

    /// Whether `x` is a power of `c`, for pure elements `c`.
    pub fn in_cyclic(&self, c: &SdElem, x: &SdElem) -> bool {
        if c.v == (0, 0) {
            return x.v == (0, 0) && c.l != 0 && x.l % c.l == 0;
        }
        if c.l != 0 || x.l != 0 {
            return false;
        }
        // x.v = m·c.v for some integer m
        let (cx, cy) = c.v;
        let (xx, yy) = x.v;
        if cx * yy != cy * xx {
            return false;
        }
        if cx != 0 {
            xx % cx == 0
        } else {
            yy % cy == 0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizerCertificate {
    /// Rank of the normalizer: 1 for `ℤ`, 2 for `ℤ²`.
    pub rank: u8,
    pub checks: Vec<String>,
    pub bound: u32,
}

pub fn normalizer_probe(spec: &SemidirectSpec, c: &SdElem, bound: u32) -> Result<NormalizerCertificate, BassSerreError> {
    let a = spec.monodromy;
    if a.classify() != MatClass::Hyperbolic {
        return Err(BassSerreError::NotHyperbolic);
    }
    if *c == SdElem::IDENTITY {
        return Err(BassSerreError::FiniteOrderElement);
    }
    let mut checks = Vec::new();
    if c.v == (0, 0) {
        // g = (v, w): g c g⁻¹ = (v - Aˡv, l), which lies in ⟨c⟩ iff Aˡv = v
        let mut exponents: Vec<i64> = (1..=i64::from(bound)).flat_map(|m| [m, -m]).collect();
        if !exponents.contains(&c.l) {
            exponents.push(c.l);
        }
        for m in exponents {
            let p = a.pow(m)?;
            let (pa, pb, pc, pd) = p.entries();
            let det = i128::from(pa - 1) * i128::from(pd - 1) - i128::from(pb) * i128::from(pc);
            if det == 0 {
                return Err(BassSerreError::NotHyperbolic);
            }
            checks.push(format!("det(A^{m} - I) = {det} ≠ 0, so A^{m}(-x,-y) = (-x,-y) forces x = y = 0"));
        }
        let gen = SdElem::new(0, 0, 1);
        let conj = spec.conjugate(&gen, c)?;
        if conj != *c {
            return Err(BassSerreError::UnsupportedElement);
        }
        checks.push(format!("{gen}·{c}·{gen}⁻¹ = {conj}"));
        Ok(NormalizerCertificate { rank: 1, checks, bound })
    } else if c.l == 0 {
        // g = (v, w): g c g⁻¹ = (A^w u, 0), which lies in ⟨c⟩ iff A^w u = ±u
        let u = c.v;
        for m in (1..=i64::from(bound)).flat_map(|m| [m, -m]) {
            let img = a.pow(m)?.apply(u)?;
            if img == u || img == (-u.0, -u.1) {
                return Err(BassSerreError::NotHyperbolic);
            }
            checks.push(format!("A^{m}·({},{}) = ({},{}) ≠ ±({},{})", u.0, u.1, img.0, img.1, u.0, u.1));
        }
        for basis in [SdElem::new(1, 0, 0), SdElem::new(0, 1, 0)] {
            let conj = spec.conjugate(&basis, c)?;
            debug_assert_eq!(conj, *c);
            checks.push(format!("{basis}·{c}·{basis}⁻¹ = {conj}"));
        }
        Ok(NormalizerCertificate { rank: 2, checks, bound })
    } else {
        Err(BassSerreError::UnsupportedElement)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat() -> SemidirectSpec {
        SemidirectSpec::new(Mat2Z::new(2, 1, 1, 1).unwrap())
    }

    #[test]
    fn group_law() {
        let s = cat();
        let x = SdElem::new(3, -1, 2);
        let y = SdElem::new(-2, 5, -3);
        let z = SdElem::new(1, 1, 1);
        assert_eq!(s.mul(&x, &s.inverse(&x).unwrap()).unwrap(), SdElem::IDENTITY);
        let left = s.mul(&s.mul(&x, &y).unwrap(), &z).unwrap();
        let right = s.mul(&x, &s.mul(&y, &z).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn fibre_commutes() {
        let s = cat();
        let e1 = SdElem::new(1, 0, 0);
        let e2 = SdElem::new(0, 1, 0);
        assert_eq!(s.mul(&e1, &e2).unwrap(), s.mul(&e2, &e1).unwrap());
    }

    #[test]
    fn probe_examples() {
        let s = cat();
        assert_eq!(normalizer_probe(&s, &SdElem::new(0, 0, 1), 8).unwrap().rank, 1);
        assert_eq!(normalizer_probe(&s, &SdElem::new(1, 0, 0), 8).unwrap().rank, 2);
        assert_eq!(normalizer_probe(&s, &SdElem::new(1, 0, 1), 8), Err(BassSerreError::UnsupportedElement));
        let parabolic = SemidirectSpec::new(Mat2Z::new(1, 1, 0, 1).unwrap());
        assert_eq!(normalizer_probe(&parabolic, &SdElem::new(0, 0, 1), 8), Err(BassSerreError::NotHyperbolic));
    }

    #[test]
    fn cyclic_membership() {
        let s = cat();
        assert!(s.in_cyclic(&SdElem::new(2, 4, 0), &SdElem::new(-4, -8, 0)));
        assert!(!s.in_cyclic(&SdElem::new(2, 4, 0), &SdElem::new(1, 2, 0)));
        assert!(s.in_cyclic(&SdElem::new(0, 0, 2), &SdElem::new(0, 0, -6)));
        assert!(!s.in_cyclic(&SdElem::new(0, 0, 2), &SdElem::new(0, 0, 3)));
    }
}
