//! Polar sample grids in the G-plane.

use core::f64::consts::TAU;

use super::path::integration_singularities;
use crate::prelude::*;
use crate::wdsl::WeierstrassData;
use crate::{Error, Result};

pub const DEFAULT_EXCLUDE_RADIUS: f64 = 0.05;

/// A tensor grid in polar coordinates around `center`: `n_r` radii spaced
/// evenly in `[r_min, r_max]` and `n_phi` angles spaced evenly in
/// `[phi_min, phi_max]`, both ends included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarGrid {
    pub center: Complex64,
    pub r_min: f64,
    pub r_max: f64,
    pub n_r: usize,
    pub n_phi: usize,
    pub phi_min: f64,
    pub phi_max: f64,
    pub exclude_radius: f64,
}

impl PolarGrid {
    /// Full annulus; the angle 2π repeats the angle 0 so the seam is not glued.
    pub fn annulus(r_min: f64, r_max: f64, n_r: usize, n_phi: usize) -> Self {
        Self::sector(r_min, r_max, n_r, n_phi, 0.0, TAU)
    }

    pub fn sector(r_min: f64, r_max: f64, n_r: usize, n_phi: usize, phi_min: f64, phi_max: f64) -> Self {
        PolarGrid {
            center: Complex64::new(0.0, 0.0),
            r_min,
            r_max,
            n_r,
            n_phi,
            phi_min,
            phi_max,
            exclude_radius: DEFAULT_EXCLUDE_RADIUS,
        }
    }

    pub fn with_center(mut self, center: Complex64) -> Self {
        self.center = center;
        self
    }

    pub fn with_exclusion(mut self, radius: f64) -> Self {
        self.exclude_radius = radius;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.n_r >= 2
            && self.n_phi >= 2
            && self.r_min >= 0.0
            && self.r_min < self.r_max
            && self.r_max.is_finite()
            && self.phi_min < self.phi_max
            && self.phi_max.is_finite()
            && self.exclude_radius >= 0.0
            && self.center.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid polar grid {:?}", self)))
        }
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.r_min + (self.r_max - self.r_min) * i as f64 / (self.n_r - 1) as f64
    }

    pub fn angle(&self, j: usize) -> f64 {
        self.phi_min + (self.phi_max - self.phi_min) * j as f64 / (self.n_phi - 1) as f64
    }

    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        self.center + Complex64::from_polar(self.radius(i), self.angle(j))
    }

    /// All `n_r × n_phi` points, row-major in the radius index.
    pub fn all_points(&self) -> Vec<Complex64> {
        let mut pts = Vec::with_capacity(self.n_r * self.n_phi);
        for i in 0..self.n_r {
            for j in 0..self.n_phi {
                pts.push(self.point(i, j));
            }
        }
        pts
    }

    /// Drops points within the exclusion radius of the singular set of `data`
    /// and lists the quads that neither touch a dropped point nor contain a
    /// singular point.
    pub fn sample(&self, data: &WeierstrassData) -> Result<SampledGrid> {
        self.validate()?;
        let sing = integration_singularities(data);
        let mut points = Vec::new();
        let mut coords = Vec::new();
        let mut index = vec![None; self.n_r * self.n_phi];
        for i in 0..self.n_r {
            for j in 0..self.n_phi {
                let z = self.point(i, j);
                if sing.iter().all(|s| (z - s).norm() >= self.exclude_radius.max(1e-6)) {
                    index[i * self.n_phi + j] = Some(points.len());
                    points.push(z);
                    coords.push((i, j));
                }
            }
        }
        if points.is_empty() {
            return Err(Error::InvalidArgument("every grid point lies in an exclusion disc".into()));
        }
        let mut faces = Vec::new();
        for i in 0..self.n_r - 1 {
            for j in 0..self.n_phi - 1 {
                let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
                let ids: Vec<usize> = corners.iter().filter_map(|&(a, b)| index[a * self.n_phi + b]).collect();
                if ids.len() == 4 && !sing.iter().any(|s| self.cell_contains(i, j, *s)) {
                    faces.push([ids[0], ids[1], ids[2], ids[3]]);
                }
            }
        }
        Ok(SampledGrid { grid: *self, points, coords, index, faces })
    }

    fn cell_contains(&self, i: usize, j: usize, p: Complex64) -> bool {
        let d = p - self.center;
        let r = d.norm();
        if r < self.radius(i) || r > self.radius(i + 1) {
            return false;
        }
        let (lo, hi) = (self.angle(j), self.angle(j + 1));
        let mut phi = d.arg();
        while phi < lo {
            phi += TAU;
        }
        while phi - TAU >= lo {
            phi -= TAU;
        }
        phi <= hi
    }
}

/// The retained points of a [`PolarGrid`] with their mesh connectivity.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledGrid {
    pub grid: PolarGrid,
    pub points: Vec<Complex64>,
    /// `(radius index, angle index)` of each retained point.
    pub coords: Vec<(usize, usize)>,
    index: Vec<Option<usize>>,
    /// Quads as counter-clockwise corner indices into `points`.
    pub faces: Vec<[usize; 4]>,
}

impl SampledGrid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, i: usize, j: usize) -> Option<usize> {
        if i < self.grid.n_r && j < self.grid.n_phi {
            self.index[i * self.grid.n_phi + j]
        } else {
            None
        }
    }

    /// Retained points adjacent in the tensor grid (no wrap in angle).
    pub fn neighbors(&self, k: usize) -> Vec<usize> {
        let (i, j) = self.coords[k];
        let mut out = Vec::with_capacity(4);
        if i > 0 {
            out.extend(self.index_of(i - 1, j));
        }
        out.extend(self.index_of(i + 1, j));
        if j > 0 {
            out.extend(self.index_of(i, j - 1));
        }
        out.extend(self.index_of(i, j + 1));
        out
    }
}
