//! Compact 2-orbifolds with cone points, classified by their orbifold Euler
//! characteristic.
//!
//! Nonorientable underlying surfaces use the crosscap convention: a closed
//! nonorientable surface of genus `g` is the connected sum of `g` projective
//! planes and has `χ = 2 - g`. The Klein bottle is genus 2.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Underlying surface plus cone points. Reflector boundaries are not modelled.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbifoldBase {
    pub genus: u32,
    pub orientable: bool,
    #[serde(default)]
    pub boundary_count: u32,
    #[serde(default)]
    pub cone_orders: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbifoldClass {
    Bad,
    Spherical,
    Flat,
    Hyperbolic,
    /// Bounded with positive Euler characteristic (a disk with at most one
    /// cone point).
    Elementary,
}

impl fmt::Display for OrbifoldClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OrbifoldClass::Bad => "bad",
            OrbifoldClass::Spherical => "spherical",
            OrbifoldClass::Flat => "flat",
            OrbifoldClass::Hyperbolic => "hyperbolic",
            OrbifoldClass::Elementary => "elementary",
        };
        f.write_str(s)
    }
}

impl OrbifoldBase {
    pub fn closed(genus: u32, orientable: bool, cone_orders: Vec<u32>) -> Self {
        OrbifoldBase { genus, orientable, boundary_count: 0, cone_orders }
    }

    pub fn sphere(cone_orders: Vec<u32>) -> Self {
        Self::closed(0, true, cone_orders)
    }

    pub fn with_boundary(mut self, boundary_count: u32) -> Self {
        self.boundary_count = boundary_count;
        self
    }

    pub fn is_closed(&self) -> bool {
        self.boundary_count == 0
    }

    /// Euler characteristic of the underlying surface.
    pub fn surface_euler_characteristic(&self) -> i64 {
        let g = i64::from(self.genus);
        let b = i64::from(self.boundary_count);
        if self.orientable {
            2 - 2 * g - b
        } else {
            2 - g - b
        }
    }

    /// `χ(surface) - Σ (1 - 1/α)`, exactly.
    pub fn euler_characteristic_orb(&self) -> BigRational {
        let mut chi = BigRational::from_integer(BigInt::from(self.surface_euler_characteristic()));
        for &alpha in &self.cone_orders {
            let alpha = BigRational::from_integer(BigInt::from(alpha));
            chi -= BigRational::one() - alpha.recip();
        }
        chi
    }

    /// The bad closed 2-orbifolds without reflectors are the teardrops and the
    /// spindles with unequal orders.
    pub fn is_bad(&self) -> bool {
        if !self.is_closed() || !self.orientable || self.genus != 0 {
            return false;
        }
        match self.cone_orders.as_slice() {
            [_] => true,
            [p, q] => p != q,
            _ => false,
        }
    }

    pub fn classify(&self) -> OrbifoldClass {
        if self.is_bad() {
            return OrbifoldClass::Bad;
        }
        let chi = self.euler_characteristic_orb();
        if chi.is_zero() {
            OrbifoldClass::Flat
        } else if chi.is_negative() {
            OrbifoldClass::Hyperbolic
        } else if self.is_closed() {
            OrbifoldClass::Spherical
        } else {
            OrbifoldClass::Elementary
        }
    }

    /// Human-readable name like `S²(2,3,7)` or `D²(2,2)`.
    pub fn describe(&self) -> String {
        let surface = match (self.orientable, self.genus, self.boundary_count) {
            (true, 0, 0) => "S²".to_string(),
            (true, 0, 1) => "D²".to_string(),
            (true, 0, 2) => "A²".to_string(),
            (true, 1, 0) => "T²".to_string(),
            (false, 1, 0) => "RP²".to_string(),
            (false, 1, 1) => "Mö".to_string(),
            (false, 2, 0) => "K²".to_string(),
            (o, g, b) => {
                let kind = if o { "orientable" } else { "nonorientable" };
                format!("Σ[{kind} g={g} b={b}]")
            }
        };
        if self.cone_orders.is_empty() {
            surface
        } else {
            let orders: Vec<String> = self.cone_orders.iter().map(|o| o.to_string()).collect();
            format!("{surface}({})", orders.join(","))
        }
    }
}
