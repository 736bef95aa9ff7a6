//! Integer 2×2 matrices of determinant ±1 and their elliptic / parabolic /
//! hyperbolic trichotomy.
//!
//! All arithmetic is checked; any intermediate overflow of `i64` surfaces as
//! [`Gl2Error::Overflow`] rather than wrapping.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::Geometry;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gl2Error {
    #[error("determinant {0} is not ±1")]
    InvalidDeterminant(i64),
    #[error("integer overflow in matrix arithmetic")]
    Overflow,
    #[error("matrix is not parabolic")]
    NotParabolic,
    #[error("cannot parse matrix {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// A row-major matrix `[[a, b], [c, d]]` with `ad - bc = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[[i64; 2]; 2]", into = "[[i64; 2]; 2]")]
pub struct Mat2Z {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

/// The class of a matrix under the trichotomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum MatClass {
    Elliptic { order: u32 },
    Parabolic,
    Hyperbolic,
}

impl MatClass {
    pub fn name(&self) -> &'static str {
        match self {
            MatClass::Elliptic { .. } => "elliptic",
            MatClass::Parabolic => "parabolic",
            MatClass::Hyperbolic => "hyperbolic",
        }
    }

    /// Same class, forgetting the elliptic order.
    pub fn same_kind(&self, other: &MatClass) -> bool {
        std::mem::discriminant(self) == std::mem::discriminant(other)
    }
}

impl fmt::Display for MatClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatClass::Elliptic { order } => write!(f, "elliptic (order {order})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Isomorphism type of `Z² / N ⋊ Z` where `N` is the fixed line of a parabolic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuotientType {
    Z2,
    KleinBottleGroup,
}

/// Largest possible finite order of an element of GL₂(ℤ) is 6 and every
/// finite order divides 12.
pub const ORDER_SEARCH_CAP: u32 = 12;

impl Mat2Z {
    pub const IDENTITY: Mat2Z = Mat2Z { a: 1, b: 0, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, Gl2Error> {
        let det = raw_det(a, b, c, d)?;
        if det != 1 && det != -1 {
            return Err(Gl2Error::InvalidDeterminant(det));
        }
        Ok(Mat2Z { a, b, c, d })
    }

    pub fn from_rows(rows: [[i64; 2]; 2]) -> Result<Self, Gl2Error> {
        Self::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    pub fn rows(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn entries(&self) -> (i64, i64, i64, i64) {
        (self.a, self.b, self.c, self.d)
    }

    /// Always ±1 by construction.
    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn neg_identity() -> Self {
        Mat2Z { a: -1, b: 0, c: 0, d: -1 }
    }

    pub fn mul(&self, rhs: &Mat2Z) -> Result<Mat2Z, Gl2Error> {
        let dot = |x: i64, y: i64, z: i64, w: i64| -> Result<i64, Gl2Error> {
            x.checked_mul(y).zip(z.checked_mul(w)).and_then(|(p, q)| p.checked_add(q)).ok_or(Gl2Error::Overflow)
        };
        Ok(Mat2Z {
            a: dot(self.a, rhs.a, self.b, rhs.c)?,
            b: dot(self.a, rhs.b, self.b, rhs.d)?,
            c: dot(self.c, rhs.a, self.d, rhs.c)?,
            d: dot(self.c, rhs.b, self.d, rhs.d)?,
        })
    }

    /// Exact inverse; entries stay integral because `|det| = 1`.
    pub fn inverse(&self) -> Mat2Z {
        let s = self.det();
        Mat2Z { a: s * self.d, b: -s * self.b, c: -s * self.c, d: s * self.a }
    }

    pub fn pow(&self, n: i64) -> Result<Mat2Z, Gl2Error> {
        let mut base = if n < 0 { self.inverse() } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::IDENTITY;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn apply(&self, v: (i64, i64)) -> Result<(i64, i64), Gl2Error> {
        let x =
            self.a.checked_mul(v.0).zip(self.b.checked_mul(v.1)).and_then(|(p, q)| p.checked_add(q)).ok_or(Gl2Error::Overflow)?;
        let y =
            self.c.checked_mul(v.0).zip(self.d.checked_mul(v.1)).and_then(|(p, q)| p.checked_add(q)).ok_or(Gl2Error::Overflow)?;
        Ok((x, y))
    }

    /// Closed-form classification from determinant and trace.
    ///
    /// A trace −2 matrix other than −I is reported as parabolic: its square is
    /// a nontrivial unipotent, and classes must be stable under powers.
    pub fn classify(&self) -> MatClass {
        let t = self.trace();
        if self.det() == -1 {
            return if t == 0 { MatClass::Elliptic { order: 2 } } else { MatClass::Hyperbolic };
        }
        match t {
            1 => MatClass::Elliptic { order: 6 },
            0 => MatClass::Elliptic { order: 4 },
            -1 => MatClass::Elliptic { order: 3 },
            2 if self.is_identity() => MatClass::Elliptic { order: 1 },
            -2 if *self == Self::neg_identity() => MatClass::Elliptic { order: 2 },
            2 | -2 => MatClass::Parabolic,
            _ => MatClass::Hyperbolic,
        }
    }

    /// Least `n ≥ 1` with `Aⁿ = I`, by brute force up to [`ORDER_SEARCH_CAP`].
    pub fn order(&self) -> Option<u32> {
        let mut p = *self;
        for n in 1..=ORDER_SEARCH_CAP {
            if p.is_identity() {
                return Some(n);
            }
            p = p.mul(self).ok()?;
        }
        None
    }

    /// Primitive integer vector `v` and sign `λ` with `A·v = λ·v`.
    ///
    /// The returned vector has its first nonzero coordinate positive.
    pub fn invariant_eigenvector(&self) -> Result<((i64, i64), i64), Gl2Error> {
        if self.classify() != MatClass::Parabolic {
            return Err(Gl2Error::NotParabolic);
        }
        let lambda = self.trace().signum();
        // rows of A - λI are proportional; any nonzero row (p, q) gives v ⟂ (p, q)
        let rows = [(self.a - lambda, self.b), (self.c, self.d - lambda)];
        let (p, q) = rows.into_iter().find(|&(p, q)| p != 0 || q != 0).expect("parabolic matrix differs from ±I");
        let g = p.gcd(&q);
        let (mut x, mut y) = (q / g, -p / g);
        if x < 0 || (x == 0 && y < 0) {
            x = -x;
            y = -y;
        }
        Ok(((x, y), lambda))
    }

    /// Extends the invariant line `v` to a basis `{v, w}` and reads off the
    /// action on `Z²/⟨v⟩`.
    pub fn parabolic_quotient_type(&self) -> Result<QuotientType, Gl2Error> {
        let ((p, q), lambda) = self.invariant_eigenvector()?;
        // p·s - q·r = 1 for w = (r, s)
        let ext = p.extended_gcd(&q);
        let (r, s) = (-ext.y, ext.x);
        debug_assert_eq!(p * s - q * r, ext.gcd);
        let aw = self.apply((r, s))?;
        // A·w = α·v + β·w, so β = det[v | A·w] / det[v | w]
        let beta = p * aw.1 - q * aw.0;
        debug_assert!(beta == 1 || beta == -1);
        Ok(if beta * lambda == 1 { QuotientType::Z2 } else { QuotientType::KleinBottleGroup })
    }

    /// Geometry of the mapping torus of `T²` under this matrix.
    pub fn geometry_of_monodromy(&self) -> Geometry {
        match self.classify() {
            MatClass::Elliptic { .. } => Geometry::E3,
            MatClass::Parabolic => Geometry::Nil,
            MatClass::Hyperbolic => Geometry::Sol,
        }
    }
}

fn raw_det(a: i64, b: i64, c: i64, d: i64) -> Result<i64, Gl2Error> {
    a.checked_mul(d).zip(b.checked_mul(c)).and_then(|(p, q)| p.checked_sub(q)).ok_or(Gl2Error::Overflow)
}

impl TryFrom<[[i64; 2]; 2]> for Mat2Z {
    type Error = Gl2Error;

    fn try_from(rows: [[i64; 2]; 2]) -> Result<Self, Self::Error> {
        Mat2Z::from_rows(rows)
    }
}

impl From<Mat2Z> for [[i64; 2]; 2] {
    fn from(m: Mat2Z) -> Self {
        m.rows()
    }
}

impl fmt::Display for Mat2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{};{},{}", self.a, self.b, self.c, self.d)
    }
}

/// Parses the command-line syntax `a,b;c,d`.
impl FromStr for Mat2Z {
    type Err = Gl2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| Gl2Error::Parse { input: s.to_string(), reason: reason.to_string() };
        let rows: Vec<&str> = s.split(';').collect();
        if rows.len() != 2 {
            return Err(err("expected two rows separated by ';'"));
        }
        let mut entries = Vec::with_capacity(4);
        for row in rows {
            let cols: Vec<&str> = row.split(',').collect();
            if cols.len() != 2 {
                return Err(err("expected two comma-separated entries per row"));
            }
            for c in cols {
                entries.push(c.trim().parse::<i64>().map_err(|_| err("entry is not an integer"))?);
            }
        }
        Mat2Z::new(entries[0], entries[1], entries[2], entries[3])
    }
}

/// Every matrix with entries in `[-bound, bound]` and determinant ±1.
pub fn enumerate_box(bound: i64) -> Vec<Mat2Z> {
    let range = -bound..=bound;
    let mut out = Vec::new();
    for a in range.clone() {
        for b in range.clone() {
            for c in range.clone() {
                for d in range.clone() {
                    if let Ok(m) = Mat2Z::new(a, b, c, d) {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}
