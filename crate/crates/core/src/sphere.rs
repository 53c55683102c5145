//! Stereographic projection from the north pole and the angle functions
//! `n_V = <n, V>` of a Gauss map `n = π⁻¹(G)` against a fixed unit vector
//! `V = π⁻¹(α)`.

use crate::prelude::*;
use crate::{Error, Result};

/// Guard band below which 1 ± n_V is treated as zero.
pub const ANGLE_GUARD: f64 = 1e-12;

/// A point of the Riemann sphere C ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtendedComplex {
    pub fn finite(re: f64, im: f64) -> Self {
        ExtendedComplex::Finite(Complex64::new(re, im))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedComplex::Infinity)
    }

    pub fn as_finite(&self) -> Option<Complex64> {
        match *self {
            ExtendedComplex::Finite(z) => Some(z),
            ExtendedComplex::Infinity => None,
        }
    }

    /// Chordal distance on the sphere, usable for both finite and infinite points.
    pub fn chordal_distance(&self, other: &ExtendedComplex) -> f64 {
        let a = inverse_stereographic(*self);
        let b = inverse_stereographic(*other);
        let d = [a.0[0] - b.0[0], a.0[1] - b.0[1], a.0[2] - b.0[2]];
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    }
}

impl From<Complex64> for ExtendedComplex {
    fn from(z: Complex64) -> Self {
        ExtendedComplex::Finite(z)
    }
}

impl core::fmt::Display for ExtendedComplex {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ExtendedComplex::Finite(z) => write!(f, "{}", z),
            ExtendedComplex::Infinity => f.write_str("inf"),
        }
    }
}

/// A vector of R³ with unit length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector([f64; 3]);

impl UnitVector {
    pub const E1: UnitVector = UnitVector([1.0, 0.0, 0.0]);
    pub const E2: UnitVector = UnitVector([0.0, 1.0, 0.0]);
    pub const E3: UnitVector = UnitVector([0.0, 0.0, 1.0]);

    /// Accepts `v` if its length is within 1e-9 of one and renormalizes it.
    pub fn new(v: [f64; 3]) -> Result<Self> {
        let norm = norm3(v);
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NotUnit { norm });
        }
        Ok(UnitVector([v[0] / norm, v[1] / norm, v[2] / norm]))
    }

    /// Normalizes any non-zero vector.
    pub fn normalize(v: [f64; 3]) -> Result<Self> {
        let norm = norm3(v);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotUnit { norm });
        }
        Ok(UnitVector([v[0] / norm, v[1] / norm, v[2] / norm]))
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn neg(&self) -> UnitVector {
        UnitVector([-self.0[0], -self.0[1], -self.0[2]])
    }

    pub fn distance(&self, other: &UnitVector) -> f64 {
        norm3([
            self.0[0] - other.0[0],
            self.0[1] - other.0[1],
            self.0[2] - other.0[2],
        ])
    }
}

impl core::ops::Index<usize> for UnitVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// π⁻¹: C ∪ {∞} → S², `α ↦ (2 Re α, 2 Im α, |α|² − 1) / (|α|² + 1)`.
pub fn inverse_stereographic(alpha: ExtendedComplex) -> UnitVector {
    match alpha {
        ExtendedComplex::Infinity => UnitVector::E3,
        ExtendedComplex::Finite(a) => {
            let m = a.norm_sqr();
            if m <= 1.0 {
                let d = m + 1.0;
                UnitVector([2.0 * a.re / d, 2.0 * a.im / d, (m - 1.0) / d])
            } else {
                // same point written in β = 1/α
                let b = a.inv();
                let mb = b.norm_sqr();
                let d = 1.0 + mb;
                UnitVector([2.0 * b.re / d, -2.0 * b.im / d, (1.0 - mb) / d])
            }
        }
    }
}

/// π: S² → C ∪ {∞}, projecting from the north pole.
pub fn stereographic(v: [f64; 3]) -> Result<ExtendedComplex> {
    let norm = norm3(v);
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotUnit { norm });
    }
    let [x, y, z] = [v[0] / norm, v[1] / norm, v[2] / norm];
    if z <= 0.0 {
        Ok(ExtendedComplex::Finite(Complex64::new(x, y) / (1.0 - z)))
    } else {
        // (x + iy)/(1 − z) = (1 + z)/(x − iy) avoids cancellation near the pole
        let w = Complex64::new(x, -y);
        if w.norm_sqr() == 0.0 {
            Ok(ExtendedComplex::Infinity)
        } else {
            Ok(ExtendedComplex::Finite((1.0 + z) / w))
        }
    }
}

/// `−1 / conj(α)`: the parameter of the antipodal vector −π⁻¹(α).
pub fn antipode_parameter(alpha: ExtendedComplex) -> ExtendedComplex {
    match alpha {
        ExtendedComplex::Infinity => ExtendedComplex::Finite(Complex64::new(0.0, 0.0)),
        ExtendedComplex::Finite(a) if a.norm_sqr() == 0.0 => ExtendedComplex::Infinity,
        ExtendedComplex::Finite(a) => ExtendedComplex::Finite(-a.conj().inv()),
    }
}

/// `1 − n_V` at the point with Gauss map value `g`, without cancellation.
pub fn one_minus_angle(g: Complex64, alpha: ExtendedComplex) -> f64 {
    let denom_g = 1.0 + g.norm_sqr();
    match alpha {
        ExtendedComplex::Infinity => 2.0 / denom_g,
        ExtendedComplex::Finite(a) if a.norm_sqr() <= 1.0 => {
            2.0 / (1.0 + a.norm_sqr()) * (g - a).norm_sqr() / denom_g
        }
        ExtendedComplex::Finite(a) => {
            let ia = a.inv();
            2.0 / (1.0 + ia.norm_sqr()) * (g * ia - 1.0).norm_sqr() / denom_g
        }
    }
}

/// `1 + n_V`, evaluated as `1 − n_{−V}`.
pub fn one_plus_angle(g: Complex64, alpha: ExtendedComplex) -> f64 {
    one_minus_angle(g, antipode_parameter(alpha))
}

/// The angle function `n_V = <π⁻¹(G), π⁻¹(α)>` from the closed form of `1 − n_V`.
pub fn angle_function(g: Complex64, alpha: ExtendedComplex) -> f64 {
    (1.0 - one_minus_angle(g, alpha)).clamp(-1.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn c(re: f64, im: f64) -> ExtendedComplex {
        ExtendedComplex::finite(re, im)
    }

    fn close(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
        (0..3).all(|k| (a[k] - b[k]).abs() <= tol)
    }

    #[test]
    fn inverse_projection_of_reference_points() {
        assert!(close(inverse_stereographic(c(1.0, 0.0)).as_array(), [1.0, 0.0, 0.0], 1e-15));
        assert!(close(inverse_stereographic(c(0.0, 0.0)).as_array(), [0.0, 0.0, -1.0], 1e-15));
        assert!(close(inverse_stereographic(ExtendedComplex::Infinity).as_array(), [0.0, 0.0, 1.0], 0.0));
        assert!(close(inverse_stereographic(c(0.0, 1.0)).as_array(), [0.0, 1.0, 0.0], 1e-15));
    }

    #[test]
    fn projection_of_reference_vectors() {
        assert_eq!(stereographic([0.0, 0.0, 1.0]).unwrap(), ExtendedComplex::Infinity);
        let one = stereographic([1.0, 0.0, 0.0]).unwrap().as_finite().unwrap();
        assert!((one - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        for k in 0..12 {
            let t = k as f64 * PI / 6.0 + 0.1;
            let z = stereographic([t.cos(), t.sin(), 0.0]).unwrap().as_finite().unwrap();
            assert!((z - Complex64::from_polar(1.0, t)).norm() < 1e-14);
        }
        assert!(matches!(stereographic([1.0, 1.0, 0.0]), Err(Error::NotUnit { .. })));
    }

    #[test]
    fn angle_function_examples() {
        let g = Complex64::new(0.3, -0.7);
        assert!((angle_function(g, g.into()) - 1.0).abs() < 1e-15);
        assert!(angle_function(Complex64::new(1.0, 0.0), c(0.0, 0.0)).abs() < 1e-15);
        assert!(angle_function(Complex64::new(0.0, 1.0), c(1.0, 0.0)).abs() < 1e-15);
    }

    #[test]
    fn antipode_examples() {
        assert_eq!(antipode_parameter(c(0.0, 0.0)), ExtendedComplex::Infinity);
        assert_eq!(antipode_parameter(ExtendedComplex::Infinity), c(0.0, 0.0));
        let z = antipode_parameter(c(0.0, 1.0)).as_finite().unwrap();
        assert!((z - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        let z = antipode_parameter(c(2.5, 0.0)).as_finite().unwrap();
        assert!((z - Complex64::new(-0.4, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn antipode_maps_to_negated_vector() {
        for alpha in [c(0.2, 0.9), c(-3.0, 4.0), c(1.0, 0.0), ExtendedComplex::Infinity] {
            let v = inverse_stereographic(alpha);
            let w = inverse_stereographic(antipode_parameter(alpha));
            assert!(close(v.neg().as_array(), w.as_array(), 1e-14));
        }
    }
}
