//! Least-squares rigid alignment of index-matched point sets.

use nalgebra::{Matrix3, Vector3};

use crate::prelude::*;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alignment {
    /// Orthogonal matrix, determinant ±1 (reflections allowed).
    pub rotation: [[f64; 3]; 3],
    pub translation: [f64; 3],
    /// RMS of `|R a_i + t − b_i|`.
    pub rms: f64,
}

impl Alignment {
    pub fn apply(&self, p: &[f64; 3]) -> [f64; 3] {
        let r = &self.rotation;
        let t = &self.translation;
        [
            r[0][0] * p[0] + r[0][1] * p[1] + r[0][2] * p[2] + t[0],
            r[1][0] * p[0] + r[1][1] * p[1] + r[1][2] * p[2] + t[1],
            r[2][0] * p[0] + r[2][1] * p[1] + r[2][2] * p[2] + t[2],
        ]
    }

    pub fn determinant(&self) -> f64 {
        to_matrix(&self.rotation).determinant()
    }
}

fn to_matrix(r: &[[f64; 3]; 3]) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| r[i][j])
}

fn centroid(points: &[[f64; 3]]) -> Vector3<f64> {
    let mut c = Vector3::zeros();
    for p in points {
        c += Vector3::from(*p);
    }
    c / points.len() as f64
}

/// Orthogonal Procrustes: the orthogonal `R` and translation `t` minimizing
/// `Σ |R a_i + t − b_i|²`.
pub fn procrustes_align(a: &[[f64; 3]], b: &[[f64; 3]]) -> Result<Alignment> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!("point sets differ in size: {} and {}", a.len(), b.len())));
    }
    if a.len() < 4 {
        return Err(Error::InvalidArgument("at least 4 corresponding points are needed".into()));
    }
    let ca = centroid(a);
    let cb = centroid(b);
    let mut h = Matrix3::zeros();
    for (p, q) in a.iter().zip(b) {
        h += (Vector3::from(*p) - ca) * (Vector3::from(*q) - cb).transpose();
    }
    let svd = h.svd(true, true);
    let s = svd.singular_values;
    let (smax, smin) = (s.max(), s.min());
    if !(smin > 1e-12 * smax) {
        return Err(Error::DegenerateConfiguration(format!("covariance singular values {:?}", s.as_slice())));
    }
    let (Some(u), Some(vt)) = (svd.u, svd.v_t) else {
        return Err(Error::DegenerateConfiguration("singular value decomposition failed".into()));
    };
    let r = vt.transpose() * u.transpose();
    let t = cb - r * ca;
    let mut rotation = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            rotation[i][j] = r[(i, j)];
        }
    }
    let mut alignment = Alignment { rotation, translation: [t[0], t[1], t[2]], rms: 0.0 };
    let mut sq = 0.0;
    for (p, q) in a.iter().zip(b) {
        let m = alignment.apply(p);
        sq += (m[0] - q[0]).powi(2) + (m[1] - q[1]).powi(2) + (m[2] - q[2]).powi(2);
    }
    alignment.rms = (sq / a.len() as f64).sqrt();
    Ok(alignment)
}
