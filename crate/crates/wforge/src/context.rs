//! Resolution of a [`RunConfig`] into a family member, grid and angle.

use wforge_core::catalog::{instance, Family, FamilyInstance};
use wforge_core::geom::{PolarGrid, DEFAULT_EXCLUDE_RADIUS};
use wforge_core::Complex64;

use crate::config::{GridSpec, RunConfig};
use crate::error::{CliError, CliResult};

/// Default sampling for a family: an annulus inside the unit circle, or a
/// wider one for the catenoid and helicoid.
pub fn default_grid(family: Family) -> GridSpec {
    let (r_min, r_max) = match family {
        Family::Catenoid | Family::Helicoid => (0.3, 3.0),
        Family::Enneper => (0.05, 1.0),
        _ => (0.1, 0.9),
    };
    GridSpec { r_min, r_max, n_r: 16, n_phi: 48, phi_min: None, phi_max: None }
}

#[derive(Debug, Clone)]
pub struct Context {
    pub instance: FamilyInstance,
    pub theta: f64,
    pub grid: PolarGrid,
    pub basepoint: Option<Complex64>,
}

impl Context {
    pub fn from_config(cfg: &RunConfig) -> CliResult<Self> {
        let name = cfg.family.as_deref().ok_or_else(|| CliError::config("--family is required"))?;
        let instance = instance(name, &cfg.params)?;
        let spec = cfg.grid.unwrap_or_else(|| default_grid(instance.family));
        let mut grid = match (spec.phi_min, spec.phi_max) {
            (None, None) => PolarGrid::annulus(spec.r_min, spec.r_max, spec.n_r, spec.n_phi),
            (lo, hi) => PolarGrid::sector(
                spec.r_min,
                spec.r_max,
                spec.n_r,
                spec.n_phi,
                lo.unwrap_or(0.0),
                hi.unwrap_or(std::f64::consts::TAU),
            ),
        };
        grid = grid.with_exclusion(cfg.exclude_radius.unwrap_or(DEFAULT_EXCLUDE_RADIUS));
        grid.validate()?;
        let theta = cfg.theta.unwrap_or(instance.assoc_angle);
        if !theta.is_finite() {
            return Err(CliError::config("--theta must be finite"));
        }
        let basepoint = cfg.basepoint.map(|[re, im]| Complex64::new(re, im));
        Ok(Context { instance, theta, grid, basepoint })
    }
}
