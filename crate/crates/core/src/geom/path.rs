//! Integration of the Weierstrass forms along straight segments and circular arcs.

use super::quadrature::{self, QuadratureOptions, Vec3c};
use super::weierstrass_forms;
use crate::prelude::*;
use crate::wdsl::{segment_distance, BranchState, WeierstrassData, PATH_CLEARANCE};
use crate::{Error, Result};

/// Default upper bound on a continuation step in the G-plane.
pub const DEFAULT_MAX_STEP: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathPiece {
    Line { from: Complex64, to: Complex64 },
    /// Counter-clockwise when `to_angle > from_angle`.
    Arc { center: Complex64, radius: f64, from_angle: f64, to_angle: f64 },
}

impl PathPiece {
    pub fn point(&self, s: f64) -> Complex64 {
        match *self {
            PathPiece::Line { from, to } => from + (to - from) * s,
            PathPiece::Arc { center, radius, from_angle, to_angle } => {
                center + Complex64::from_polar(radius, from_angle + (to_angle - from_angle) * s)
            }
        }
    }

    /// dz/ds.
    pub fn derivative(&self, s: f64) -> Complex64 {
        match *self {
            PathPiece::Line { from, to } => to - from,
            PathPiece::Arc { center, from_angle, to_angle, .. } => {
                (self.point(s) - center) * I * (to_angle - from_angle)
            }
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            PathPiece::Line { from, to } => (to - from).norm(),
            PathPiece::Arc { radius, from_angle, to_angle, .. } => radius * (to_angle - from_angle).abs(),
        }
    }

    /// Euclidean distance from `p` to the piece.
    pub fn distance_to(&self, p: Complex64) -> f64 {
        match *self {
            PathPiece::Line { from, to } => segment_distance(p, from, to),
            PathPiece::Arc { center, radius, from_angle, to_angle } => {
                let (lo, hi) = if from_angle <= to_angle { (from_angle, to_angle) } else { (to_angle, from_angle) };
                let d = p - center;
                let ends = (p - self.point(0.0)).norm().min((p - self.point(1.0)).norm());
                if d.norm() == 0.0 {
                    return radius;
                }
                let tau = core::f64::consts::TAU;
                let mut phi = d.arg();
                while phi < lo {
                    phi += tau;
                }
                while phi - tau >= lo {
                    phi -= tau;
                }
                if phi <= hi {
                    (d.norm() - radius).abs().min(ends)
                } else {
                    ends
                }
            }
        }
    }
}

/// Points the integration paths must stay clear of: punctures, branch points,
/// and the origin when the forms have a pole there.
pub fn integration_singularities(data: &WeierstrassData) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = data.finite_singularities().collect();
    if data.origin_is_form_pole() {
        pts.push(Complex64::new(0.0, 0.0));
    }
    pts
}

pub fn check_clearance(data: &WeierstrassData, piece: &PathPiece) -> Result<()> {
    for p in integration_singularities(data) {
        let d = piece.distance_to(p);
        if d < PATH_CLEARANCE {
            return Err(Error::SegmentTooClose { distance: d, near: p });
        }
    }
    Ok(())
}

/// Integrates the forms `e^{iθ} Φ` along `piece`, starting from the branch
/// `start`. Returns the complex integral and the branch at the end.
pub fn integrate_piece(
    data: &WeierstrassData,
    theta: f64,
    piece: &PathPiece,
    start: &BranchState,
    max_step: f64,
    opts: &QuadratureOptions,
) -> Result<(Vec3c, BranchState)> {
    check_clearance(data, piece)?;
    let zero = Complex64::new(0.0, 0.0);
    let mut sum = [zero; 3];
    let point = |s: f64| piece.point(s);
    let end = data.walk(&point, piece.length(), start, max_step, true, |s0, s1, state| {
        let part = quadrature::integrate(
            |s| {
                let z = piece.point(s);
                let phi = weierstrass_forms(data, theta, z, state)?;
                let dz = piece.derivative(s);
                Ok([phi[0] * dz, phi[1] * dz, phi[2] * dz])
            },
            s0,
            s1,
            opts,
        )?;
        for c in 0..3 {
            sum[c] += part[c];
        }
        Ok(())
    })?;
    Ok((sum, end))
}

/// Integrates along consecutive pieces, transporting the branch between them.
pub fn integrate_path(
    data: &WeierstrassData,
    theta: f64,
    pieces: &[PathPiece],
    start: &BranchState,
    max_step: f64,
    opts: &QuadratureOptions,
) -> Result<(Vec3c, BranchState)> {
    let zero = Complex64::new(0.0, 0.0);
    let mut sum = [zero; 3];
    let mut state = start.clone();
    for piece in pieces {
        let (part, next) = integrate_piece(data, theta, piece, &state, max_step, opts)?;
        for c in 0..3 {
            sum[c] += part[c];
        }
        state = next;
    }
    Ok((sum, state))
}
