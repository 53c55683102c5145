//! Induced metric, curvature, Weierstrass forms, immersion and periods.
//!
//! With `dh = f(G) dG` and the Gauss map `G` as conformal coordinate, the
//! surface of associate angle θ is `x = Re ∫ e^{iθ} Φ` with
//! `Φ = (½(1/G − G), (i/2)(1/G + G), 1) f(G) dG`. Its metric is
//! `Λ |dG|²` with `Λ = ¼(1/|G| + |G|)² |f|²` and `√(−K) = 4|G| / ((1 + |G|²)² |f|)`.

pub mod grid;
pub mod path;
pub mod quadrature;
pub mod tree;

use core::f64::consts::TAU;

pub use grid::{PolarGrid, SampledGrid, DEFAULT_EXCLUDE_RADIUS};
pub use path::{integrate_path, integrate_piece, PathPiece, DEFAULT_MAX_STEP};
pub use quadrature::{QuadratureOptions, Vec3c};
pub use tree::SpanningTree;

use crate::par::map_indices;
use crate::prelude::*;
use crate::sphere::{inverse_stereographic, ExtendedComplex, UnitVector};
use crate::wdsl::{BranchState, WeierstrassData, PATH_CLEARANCE};
use crate::{Error, Result};

/// `√(−K)` below this is reported as [`Error::FlatPoint`].
pub const FLAT_TOLERANCE: f64 = 1e-12;

fn singular(err: Error, at: Complex64) -> Error {
    match err {
        Error::PoleEncountered { .. } | Error::BranchPointEncountered { .. } => Error::SingularPoint { at },
        e => e,
    }
}

fn abs_f_regular(data: &WeierstrassData, g: Complex64) -> Result<f64> {
    if g.norm_sqr() == 0.0 || !g.is_finite() {
        return Err(Error::SingularPoint { at: g });
    }
    data.abs_f(g).map_err(|e| singular(e, g))
}

/// `Λ(G) = ¼(1/|G| + |G|)² |f(G)|²`.
pub fn metric_factor(data: &WeierstrassData, g: Complex64) -> Result<f64> {
    let af = abs_f_regular(data, g)?;
    let r = g.norm();
    let lambda = 0.25 * (1.0 / r + r).powi(2) * af * af;
    if lambda > 0.0 && lambda.is_finite() {
        Ok(lambda)
    } else {
        Err(Error::SingularPoint { at: g })
    }
}

/// `√(−K)` of the induced metric.
pub fn sqrt_neg_curvature(data: &WeierstrassData, g: Complex64) -> Result<f64> {
    let af = abs_f_regular(data, g)?;
    if af == 0.0 {
        return Err(Error::SingularPoint { at: g });
    }
    let r2 = g.norm_sqr();
    let s = 4.0 * g.norm() / ((1.0 + r2).powi(2) * af);
    if !s.is_finite() {
        return Err(Error::SingularPoint { at: g });
    }
    if s < FLAT_TOLERANCE {
        return Err(Error::FlatPoint { at: g });
    }
    Ok(s)
}

/// Gauss curvature `K < 0` of the induced metric.
pub fn gauss_curvature(data: &WeierstrassData, g: Complex64) -> Result<f64> {
    sqrt_neg_curvature(data, g).map(|s| -(s * s))
}

/// Unit normal, the inverse stereographic image of `G`.
pub fn gauss_map(g: Complex64) -> UnitVector {
    inverse_stereographic(ExtendedComplex::Finite(g))
}

/// `e^{iθ} Φ / dG` at `G`, on the branch continued from `branch`.
pub fn weierstrass_forms(data: &WeierstrassData, theta: f64, g: Complex64, branch: &BranchState) -> Result<Vec3c> {
    let rot = Complex64::from_polar(1.0, theta);
    let f = data.eval_from(g, branch)?;
    let h = rot * f;
    if g.norm_sqr() == 0.0 {
        if data.origin_is_form_pole() {
            return Err(Error::PoleEncountered { at: g });
        }
        // f vanishes at the origin: replace f/G by a central difference for f'(0)
        let eps = 1e-5;
        let step = Complex64::new(eps, 0.0);
        let d = (data.eval_from(step, branch)? - data.eval_from(-step, branch)?) / (2.0 * eps);
        let hg = rot * d;
        return Ok([hg * 0.5, I * hg * 0.5, h]);
    }
    let inv = g.inv();
    Ok([(inv - g) * h * 0.5, I * (inv + g) * h * 0.5, h])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImmerseOptions {
    pub max_step: f64,
    pub quadrature: QuadratureOptions,
}

impl Default for ImmerseOptions {
    fn default() -> Self {
        ImmerseOptions { max_step: DEFAULT_MAX_STEP, quadrature: QuadratureOptions::default() }
    }
}

/// Sampled immersion of a region of the G-plane.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePatch {
    pub grid: Vec<Complex64>,
    pub positions: Vec<[f64; 3]>,
    pub basepoint: Complex64,
    /// Associate angle reduced to `[0, 2π)`.
    pub assoc_angle: f64,
    pub metric: Vec<f64>,
    /// Gauss curvature; points where it is numerically zero store `0.0`.
    pub curvature: Vec<f64>,
    pub normals: Vec<UnitVector>,
    /// Quads as indices into `grid` (empty for unstructured grids).
    pub faces: Vec<[usize; 4]>,
}

impl SurfacePatch {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Largest distance between two stored positions.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (k, a) in self.positions.iter().enumerate() {
            for b in &self.positions[k + 1..] {
                d = d.max(dist3(a, b));
            }
        }
        d
    }
}

fn reduce_angle(theta: f64) -> f64 {
    let r = theta % TAU;
    if r < 0.0 {
        r + TAU
    } else {
        r
    }
}

pub(crate) fn dist3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn edge_admissible(sing: &[Complex64], a: Complex64, b: Complex64) -> bool {
    sing.iter().all(|p| crate::wdsl::segment_distance(*p, a, b) >= PATH_CLEARANCE)
}

/// Immerses `grid` along a nearest-neighbor spanning tree rooted at `basepoint`.
pub fn immerse(data: &WeierstrassData, grid: &[Complex64], theta: f64, basepoint: Complex64) -> Result<SurfacePatch> {
    let mut nodes = Vec::with_capacity(grid.len() + 1);
    nodes.push(basepoint);
    nodes.extend_from_slice(grid);
    let sing = path::integration_singularities(data);
    let tree = SpanningTree::nearest_neighbor(&nodes, |i, j| edge_admissible(&sing, nodes[i], nodes[j]))?;
    immerse_with_tree(data, &nodes, &tree, theta, &ImmerseOptions::default())
}

/// Immerses the retained points of a polar grid along a tree that follows
/// the grid's own adjacency; `basepoint` defaults to the middle radius at the
/// first angle.
pub fn immerse_sampled(
    data: &WeierstrassData,
    sampled: &SampledGrid,
    theta: f64,
    basepoint: Option<Complex64>,
    opts: &ImmerseOptions,
) -> Result<SurfacePatch> {
    let g = &sampled.grid;
    let basepoint = basepoint.unwrap_or_else(|| {
        sampled.index_of(g.n_r / 2, 0).map_or(sampled.points[0], |k| sampled.points[k])
    });
    let mut nodes = Vec::with_capacity(sampled.len() + 1);
    nodes.push(basepoint);
    nodes.extend_from_slice(&sampled.points);
    let sing = path::integration_singularities(data);
    let admissible = |i: usize, j: usize| edge_admissible(&sing, nodes[i], nodes[j]);
    // node 0 is the basepoint; grid point k is node k + 1
    let entry = (1..nodes.len())
        .filter(|&j| admissible(0, j))
        .min_by(|&a, &b| (nodes[a] - basepoint).norm().total_cmp(&(nodes[b] - basepoint).norm()));
    let neighbors = |i: usize| -> Vec<usize> {
        if i == 0 {
            entry.into_iter().collect()
        } else {
            sampled.neighbors(i - 1).into_iter().map(|k| k + 1).collect()
        }
    };
    let tree = SpanningTree::with_neighbors(&nodes, neighbors, admissible)?;
    let mut patch = immerse_with_tree(data, &nodes, &tree, theta, opts)?;
    patch.faces = sampled.faces.clone();
    Ok(patch)
}

/// Immerses `nodes[1..]` along `tree`, whose root `nodes[0]` is the basepoint.
pub fn immerse_with_tree(
    data: &WeierstrassData,
    nodes: &[Complex64],
    tree: &SpanningTree,
    theta: f64,
    opts: &ImmerseOptions,
) -> Result<SurfacePatch> {
    if nodes.is_empty() || tree.len() != nodes.len() {
        return Err(Error::InvalidArgument("tree and node list do not match".into()));
    }
    let n = nodes.len();
    let base = nodes[0];
    let mut states = vec![data.fresh_branch(); n];
    if data.has_branches() {
        let mut root = data.fresh_branch();
        data.eval(base, &mut root)?;
        states[0] = root;
        for (p, c) in tree.edges() {
            states[c] = data.continue_along(nodes[p], nodes[c], &states[p], opts.max_step)?;
        }
    }
    let edges: Vec<(usize, usize)> = tree.edges().collect();
    let increments = map_indices(edges.len(), |k| {
        let (p, c) = edges[k];
        let piece = PathPiece::Line { from: nodes[p], to: nodes[c] };
        integrate_piece(data, theta, &piece, &states[p], opts.max_step, &opts.quadrature).map(|(v, _)| v)
    });
    let mut positions = vec![[0.0; 3]; n];
    for (k, (p, c)) in edges.iter().enumerate() {
        let inc = increments[k].clone()?;
        let base = positions[*p];
        positions[*c] = [base[0] + inc[0].re, base[1] + inc[1].re, base[2] + inc[2].re];
    }
    let grid: Vec<Complex64> = nodes[1..].to_vec();
    let fields = map_indices(grid.len(), |k| point_fields(data, grid[k]));
    let mut metric = Vec::with_capacity(grid.len());
    let mut curvature = Vec::with_capacity(grid.len());
    let mut normals = Vec::with_capacity(grid.len());
    for f in fields {
        let (l, kk, nn) = f?;
        metric.push(l);
        curvature.push(kk);
        normals.push(nn);
    }
    Ok(SurfacePatch {
        grid,
        positions: positions[1..].to_vec(),
        basepoint: base,
        assoc_angle: reduce_angle(theta),
        metric,
        curvature,
        normals,
        faces: Vec::new(),
    })
}

fn point_fields(data: &WeierstrassData, g: Complex64) -> Result<(f64, f64, UnitVector)> {
    let lambda = metric_factor(data, g)?;
    let k = match gauss_curvature(data, g) {
        Ok(k) => k,
        Err(Error::FlatPoint { .. }) => 0.0,
        Err(e) => return Err(e),
    };
    Ok((lambda, k, gauss_map(g)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodVector {
    pub v: [f64; 3],
    pub center: Complex64,
    pub radius: f64,
}

/// Minimum number of arcs in [`period_around`].
pub const MIN_PERIOD_STEPS: usize = 64;

/// `Re ∮ e^{iθ} Φ` over the counter-clockwise circle `|G − center| = radius`,
/// split into `n_steps` arcs, starting on the principal branch at
/// `center + radius`.
pub fn period_around(data: &WeierstrassData, theta: f64, center: Complex64, radius: f64, n_steps: usize) -> Result<PeriodVector> {
    if n_steps < MIN_PERIOD_STEPS {
        return Err(Error::InvalidArgument(format!("n_steps must be at least {}", MIN_PERIOD_STEPS)));
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    let full = PathPiece::Arc { center, radius, from_angle: 0.0, to_angle: TAU };
    path::check_clearance(data, &full)?;
    let pieces: Vec<PathPiece> = (0..n_steps)
        .map(|k| PathPiece::Arc {
            center,
            radius,
            from_angle: TAU * k as f64 / n_steps as f64,
            to_angle: TAU * (k + 1) as f64 / n_steps as f64,
        })
        .collect();
    let opts = QuadratureOptions { rel_tol: 1e-10, ..QuadratureOptions::default() };
    let (sum, _) = integrate_path(data, theta, &pieces, &data.fresh_branch(), DEFAULT_MAX_STEP, &opts)?;
    Ok(PeriodVector { v: [sum[0].re, sum[1].re, sum[2].re], center, radius })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wdsl::{parse_weierstrass, Params};
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn data(src: &str) -> WeierstrassData {
        parse_weierstrass(src, &Params::new()).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn catenoid_unit_circle_fields() {
        let cat = data("1/G");
        for phi in [0.0, 0.7, 2.0] {
            let g = Complex64::from_polar(1.0, phi);
            assert!((metric_factor(&cat, g).unwrap() - 1.0).abs() < 1e-15);
            assert!((gauss_curvature(&cat, g).unwrap() + 1.0).abs() < 1e-15);
        }
        for g in [c(0.3, 0.2), c(2.0, -1.0)] {
            let prod = sqrt_neg_curvature(&cat, g).unwrap() * metric_factor(&cat, g).unwrap();
            assert!((prod - 1.0 / g.norm_sqr()).abs() < 1e-14);
        }
    }

    #[test]
    fn enneper_near_origin() {
        let enn = data("G");
        assert!((metric_factor(&enn, c(0.05, 0.0)).unwrap() - 0.25).abs() < 1e-2);
        assert!((gauss_curvature(&enn, c(0.01, 0.0)).unwrap() + 16.0).abs() < 1e-2);
    }

    #[test]
    fn singular_and_flat_points() {
        let scherk = data("G/(G^4-1)");
        assert!(matches!(metric_factor(&scherk, c(1.0, 0.0)), Err(Error::SingularPoint { .. })));
        assert!(matches!(metric_factor(&scherk, c(0.0, 0.0)), Err(Error::SingularPoint { .. })));
        let huge = data("1e20*G^3");
        assert!(matches!(gauss_curvature(&huge, c(1.0, 0.0)), Err(Error::FlatPoint { .. })));
    }

    #[test]
    fn forms_of_catenoid() {
        let cat = data("1/G");
        let b = cat.fresh_branch();
        let phi = weierstrass_forms(&cat, 0.0, c(1.0, 0.0), &b).unwrap();
        assert!(phi[0].norm() < 1e-16 && (phi[1] - I).norm() < 1e-16 && (phi[2] - 1.0).norm() < 1e-16);
        let rot = weierstrass_forms(&cat, FRAC_PI_2, c(1.3, 0.4), &b).unwrap();
        let plain = weierstrass_forms(&cat, 0.0, c(1.3, 0.4), &b).unwrap();
        for k in 0..3 {
            assert!((rot[k] - I * plain[k]).norm() < 1e-15);
        }
    }

    #[test]
    fn forms_of_enneper_at_origin() {
        let enn = data("G");
        let phi = weierstrass_forms(&enn, 0.0, c(0.0, 0.0), &enn.fresh_branch()).unwrap();
        assert!((phi[0] - 0.5).norm() < 1e-9 && (phi[1] - I * 0.5).norm() < 1e-9 && phi[2].norm() == 0.0);
    }

    #[test]
    fn scherk_periods_match_residues() {
        let scherk = data("G/(G^4-1)");
        let p = period_around(&scherk, 0.0, c(1.0, 0.0), 0.5, 64).unwrap();
        assert!(p.v[0].abs() < 1e-8 && (p.v[1] + FRAC_PI_2).abs() < 1e-8 && p.v[2].abs() < 1e-8, "{:?}", p.v);
        let tower = data("G/(G^4+1)");
        let p = period_around(&tower, 0.0, Complex64::from_polar(1.0, FRAC_PI_4), 0.5, 64).unwrap();
        assert!(p.v[0].abs() < 1e-8 && p.v[1].abs() < 1e-8 && (p.v[2] - FRAC_PI_2).abs() < 1e-8, "{:?}", p.v);
        let empty = period_around(&scherk, 0.0, c(3.0, 3.0), 0.5, 64).unwrap();
        assert!(empty.v.iter().all(|x| x.abs() < 1e-9));
    }

    #[test]
    fn period_radius_independence() {
        let scherk = data("G/(G^4-1)");
        let a = period_around(&scherk, 0.3, c(1.0, 0.0), 0.4, 64).unwrap();
        let b = period_around(&scherk, 0.3, c(1.0, 0.0), 0.6, 64).unwrap();
        for k in 0..3 {
            assert!((a.v[k] - b.v[k]).abs() < 1e-8);
        }
        assert!(period_around(&scherk, 0.0, c(1.0, 0.0), 0.5, 10).is_err());
        assert!(matches!(
            period_around(&scherk, 0.0, c(0.5, 0.0), 0.5, 64),
            Err(Error::SegmentTooClose { .. })
        ));
    }

    #[test]
    fn catenoid_trace() {
        let cat = data("1/G");
        let grid: Vec<Complex64> = (0..9).map(|k| Complex64::from_polar(1.0 + 0.1 * k as f64, 0.3 * k as f64)).collect();
        let patch = immerse(&cat, &grid, 0.0, c(1.0, 0.0)).unwrap();
        for (g, x) in grid.iter().zip(&patch.positions) {
            let t = g.norm().ln();
            let phi = g.arg();
            // G = e^{t+iφ} with dh = dG/G: x = (−cosh t cos φ, −cosh t sin φ, t) up to translation
            let expected = [-t.cosh() * phi.cos() + 1.0, -t.cosh() * phi.sin(), t];
            for k in 0..3 {
                assert!((x[k] - expected[k]).abs() < 1e-9, "{:?} vs {:?}", x, expected);
            }
        }
        assert!(patch.curvature.iter().all(|k| *k < 0.0));
        assert!(patch.metric.iter().all(|l| *l > 0.0));
    }

    #[test]
    fn basepoint_maps_to_origin() {
        let scherk = data("G/(G^4-1)");
        let grid = vec![c(0.5, 0.2), c(0.5, 0.0), c(0.3, 0.3)];
        let patch = immerse(&scherk, &grid, 0.4, c(0.5, 0.0)).unwrap();
        assert_eq!(patch.positions[1], [0.0, 0.0, 0.0]);
    }
}
