//! Sample sets for the checks.

use crate::chern_ricci::{ChernRicciSpec, Side};
use crate::geom::path::integration_singularities;
use crate::prelude::*;
use crate::sphere::antipode_parameter;
use crate::wdsl::WeierstrassData;

/// `n × n` points evenly spaced over `[lo, hi]²`, row-major in `y`.
pub fn uniform_square(n: usize, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push((lo + step * j as f64, lo + step * i as f64));
        }
    }
    out
}

/// Points `|x| = |y|` on both diagonals of `[−m, m]²`.
pub fn diagonals(n: usize, m: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(2 * n);
    for k in 0..n {
        let t = -m + 2.0 * m * k as f64 / (n - 1).max(1) as f64;
        out.push((t, t));
        out.push((t, -t));
    }
    out
}

/// Points where the Chern-Ricci function of `spec` has a logarithmic singularity.
pub fn spec_singularities(spec: &ChernRicciSpec) -> Vec<Complex64> {
    spec.terms()
        .iter()
        .filter_map(|t| match t.side {
            Side::Minus => t.alpha.as_finite(),
            Side::Plus => antipode_parameter(t.alpha).as_finite(),
        })
        .collect()
}

/// Points on a polar grid with radii log-spaced in `[r_min, r_max]`, kept
/// only when at distance at least `clearance` from the singular set of
/// `data`, from the origin and from `avoid`.
pub fn clear_points(
    data: &WeierstrassData,
    avoid: &[Complex64],
    r_min: f64,
    r_max: f64,
    n_r: usize,
    n_phi: usize,
    clearance: f64,
) -> Vec<Complex64> {
    let mut bad = integration_singularities(data);
    bad.push(Complex64::new(0.0, 0.0));
    bad.extend_from_slice(avoid);
    let mut out = Vec::new();
    let ratio = (r_max / r_min).ln();
    for i in 0..n_r {
        let r = r_min * (ratio * i as f64 / (n_r - 1).max(1) as f64).exp();
        for j in 0..n_phi {
            // offset the angles so no sample sits on a symmetry axis
            let phi = core::f64::consts::TAU * (j as f64 + 0.37) / n_phi as f64;
            let z = Complex64::from_polar(r, phi);
            if bad.iter().all(|b| (z - b).norm() >= clearance) {
                out.push(z);
            }
        }
    }
    out
}
