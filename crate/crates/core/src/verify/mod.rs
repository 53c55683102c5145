//! Numerical certification of the identities, constancy, harmonicity,
//! flatness, periodicity and congruence properties.
//!
//! Every check returns a [`VerificationReport`] with the maximum deviation
//! from the expected behavior and the tolerance it is judged against.

pub mod procrustes;
pub mod report;
pub mod samples;

use nalgebra::{Matrix3, SymmetricEigen, Vector3};

pub use procrustes::{procrustes_align, Alignment};
pub use report::{ExpectedValue, Provenance, VerificationReport};

use crate::catalog::scherk_graph;
use crate::chern_ricci::{
    cr_function_direct, cr_function_weierstrass, cr_variant_direct, product_form, ChernRicciSpec,
    ConformalFactorField, Normalization, Side, WeierstrassVariant,
};
use crate::geom::{immerse, metric_factor, period_around, SurfacePatch, MIN_PERIOD_STEPS};
use crate::par::map_indices;
use crate::prelude::*;
use crate::sphere::{antipode_parameter, ExtendedComplex};
use crate::wdsl::WeierstrassData;
use crate::{Error, Result};
use report::Stopwatch;

pub const SCHERK_TOLERANCE: f64 = 1e-12;
pub const CONSTANCY_TOLERANCE: f64 = 1e-8;
pub const CONSTANCY_TOLERANCE_BRANCHED: f64 = 1e-7;
pub const DEFAULT_STENCIL: f64 = 1e-3;
pub const HARMONIC_TOLERANCE: f64 = 1e-4;
pub const FLAT_TOLERANCE: f64 = 1e-4;
pub const EQUIVALENCE_TOLERANCE: f64 = 1e-10;
pub const CONGRUENCE_RELATIVE_TOLERANCE: f64 = 1e-4;

struct Stats {
    mean: f64,
    max: f64,
}

fn stats(values: &[f64]) -> Stats {
    let n = values.len().max(1) as f64;
    Stats {
        mean: values.iter().sum::<f64>() / n,
        max: values.iter().fold(0.0, |m: f64, v| m.max(v.abs())),
    }
}

fn collect<T>(results: Vec<Result<T>>) -> Result<Vec<T>> {
    results.into_iter().collect()
}

fn describe_points(n: usize) -> String {
    format!("{} points", n)
}

/// `−K = (1 − n₁²)(1 − n₂²)` on the Scherk graph.
pub fn check_scherk_identity(grid: &[(f64, f64)]) -> Result<VerificationReport> {
    let clock = Stopwatch::start();
    let devs = collect(map_indices(grid.len(), |k| {
        let (x, y) = grid[k];
        let p = scherk_graph(x, y)?;
        let n = p.normal.as_array();
        Ok((-p.curvature - (1.0 - n[0] * n[0]) * (1.0 - n[1] * n[1])).abs())
    }))?;
    let s = stats(&devs);
    let mut r = VerificationReport::new("scherk-identity", describe_points(grid.len()), s.mean, s.max, SCHERK_TOLERANCE)
        .with_expected(ExpectedValue::exact(0.0))
        .with_samples(grid.len());
    r.runtime_s = clock.elapsed_s();
    Ok(r)
}

/// `√(−K) ≤ (1 + n₃²)/2` on the Scherk graph; the deviation is the amount by
/// which the smallest slack falls below zero.
pub fn check_finn_osserman(grid: &[(f64, f64)]) -> Result<VerificationReport> {
    let clock = Stopwatch::start();
    let slack = collect(map_indices(grid.len(), |k| {
        let (x, y) = grid[k];
        let p = scherk_graph(x, y)?;
        let n3 = p.normal.as_array()[2];
        Ok((1.0 + n3 * n3) / 2.0 - (-p.curvature).sqrt())
    }))?;
    let min = slack.iter().copied().fold(f64::INFINITY, f64::min);
    let max = slack.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = slack.iter().sum::<f64>() / slack.len().max(1) as f64;
    let mut r = VerificationReport::new("finn-osserman", describe_points(grid.len()), mean, (-min).max(0.0), SCHERK_TOLERANCE)
        .with_samples(grid.len())
        .with_extra("min_slack", min)
        .with_extra("max_slack", max);
    r.runtime_s = clock.elapsed_s();
    Ok(r)
}

fn constancy_tolerance(data: &WeierstrassData) -> f64 {
    if data.has_branches() {
        CONSTANCY_TOLERANCE_BRANCHED
    } else {
        CONSTANCY_TOLERANCE
    }
}

/// Deviation of the Chern-Ricci function from its mean over `grid`.
pub fn check_constancy(data: &WeierstrassData, spec: &ChernRicciSpec, grid: &[Complex64]) -> Result<VerificationReport> {
    let clock = Stopwatch::start();
    let values = collect(map_indices(grid.len(), |k| cr_function_direct(data, grid[k], spec)))?;
    let mean = values.iter().sum::<f64>() / values.len().max(1) as f64;
    let dev = values.iter().fold(0.0, |m: f64, v| m.max((v - mean).abs()));
    let mut r = VerificationReport::new(
        format!("constancy[{}]", data.label()),
        describe_points(grid.len()),
        mean,
        dev,
        constancy_tolerance(data),
    )
    .with_samples(grid.len());
    r.runtime_s = clock.elapsed_s();
    Ok(r)
}

/// Largest deviation of the Chern-Ricci function from a known constant.
pub fn check_constancy_against(
    data: &WeierstrassData,
    spec: &ChernRicciSpec,
    grid: &[Complex64],
    expected: ExpectedValue,
    tolerance: f64,
) -> Result<VerificationReport> {
    let clock = Stopwatch::start();
    let values = collect(map_indices(grid.len(), |k| cr_function_direct(data, grid[k], spec)))?;
    let mean = values.iter().sum::<f64>() / values.len().max(1) as f64;
    let dev = values.iter().fold(0.0, |m: f64, v| m.max((v - expected.value).abs()));
    let mut r = VerificationReport::new(format!("constancy[{}]", data.label()), describe_points(grid.len()), mean, dev, tolerance)
        .with_expected(expected)
        .with_samples(grid.len());
    r.runtime_s = clock.elapsed_s();
    Ok(r)
}

/// Five-point flat Laplacian with spacing `h`.
pub fn flat_laplacian<F>(field: &F, z: Complex64, h: f64) -> Result<f64>
where
    F: Fn(Complex64) -> Result<f64>,
{
    let c = field(z)?;
    let dx = Complex64::new(h, 0.0);
    let dy = Complex64::new(0.0, h);
    let sum = field(z + dx)? + field(z - dx)? + field(z + dy)? + field(z - dy)?;
    Ok((sum - 4.0 * c) / (h * h))
}

/// Nine-point compact Laplacian with spacing `h`. Its leading error is
/// `h²/12 · Δ²f`, which vanishes on harmonic functions.
pub fn compact_laplacian<F>(field: &F, z: Complex64, h: f64) -> Result<f64>
where
    F: Fn(Complex64) -> Result<f64>,
{
    let at = |dx: f64, dy: f64| field(z + Complex64::new(dx * h, dy * h));
    let edges = at(1.0, 0.0)? + at(-1.0, 0.0)? + at(0.0, 1.0)? + at(0.0, -1.0)?;
    let corners = at(1.0, 1.0)? + at(-1.0, 1.0)? + at(1.0, -1.0)? + at(-1.0, -1.0)?;
    Ok((4.0 * edges + corners - 20.0 * field(z)?) / (6.0 * h * h))
}

fn laplacian_max<F>(field: &F, grid: &[Complex64], h: f64) -> Result<(Vec<f64>, f64)>
where
    F: Fn(Complex64) -> Result<f64> + Sync + Send,
{
    let vals = collect(map_indices(grid.len(), |k| flat_laplacian(field, grid[k], h)))?;
    let max = vals.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    Ok((vals, max))
}

fn refinement_ratio(coarse: f64, fine: f64) -> f64 {
    if fine > 0.0 {
        coarse / fine
    } else if coarse == 0.0 {
        1.0
    } else {
        f64::INFINITY
    }
}

/// Max of the flat Laplacian of `field` over `grid`, with the ratio of that
/// max at `h` and at `h/2` recorded as `refinement_ratio`.
pub fn check_harmonicity<F>(field: &F, grid: &[Complex64], h: f64, tolerance: f64) -> Result<VerificationReport>
where
    F: Fn(Complex64) -> Result<f64> + Sync + Send,
{
    let clock = Stopwatch::start();
    let (vals, max) = laplacian_max(field, grid, h)?;
    let (_, fine) = laplacian_max(field, grid, h / 2.0)?;
    let mean = vals.iter().sum::<f64>() / vals.len().max(1) as f64;
    let mut r = VerificationReport::new("harmonicity", format!("{}, h = {:e}", describe_points(grid.len()), h), mean, max, tolerance)
        .with_expected(ExpectedValue::exact(0.0))
        .with_samples(grid.len())
        .with_extra("max_at_half_step", fine)
        .with_extra("refinement_ratio", refinement_ratio(max, fine));
    r.runtime_s = clock.elapsed_s();
    Ok(r)
}

/// Gauss curvature `−e^{−2u} Δu` of the metric `e^{2u}|dG|²` with
/// `e^{2u} = ⋆ Λ`, with the compact Laplacian so that flat metrics read zero
/// up to fourth-order terms.
pub fn conformal_curvature(data: &WeierstrassData, factor: &ConformalFactorField, z: Complex64, h: f64) -> Result<f64> {
    let u = |g: Complex64| -> Result<f64> { Ok(0.5 * (factor.ln_value(data, g)? + metric_factor(data, g)?.ln())) };
    let lap = compact_laplacian(&u, z, h)?;
    Ok(-(-2.0 * u(z)?).exp() * lap)
}

pub fn check_flatness(
    data: &WeierstrassData,
    factor: &ConformalFactorField,
    grid: &[Complex64],
    h: f64,
    tolerance: f64,
) -> Result<VerificationReport> {
    let clock = Stopwatch::start();
    let at = |step: f64| collect(map_indices(grid.len(), |k| conformal_curvature(data, factor, grid[k], step)));
    let k = at(h)?;
    let k_fine = at(h / 2.0)?;
    let s = stats(&k);
    let fine_max = k_fine.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    let min = k.iter().copied().fold(f64::INFINITY, f64::min);
    let max_signed = k.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut r = VerificationReport::new(
        format!("flatness[{}, {}]", data.label(), factor.label()),
        format!("{}, h = {:e}", describe_points(grid.len()), h),
        s.mean,
        s.max,
        tolerance,
    )
    .with_expected(ExpectedValue::exact(0.0))
    .with_samples(grid.len())
    .with_extra("min_curvature", min)
    .with_extra("max_curvature", max_signed)
    .with_extra("max_at_half_step", fine_max)
    .with_extra("refinement_ratio", refinement_ratio(s.max, fine_max));
    r.runtime_s = clock.elapsed_s();
    Ok(r)
}

/// Compares the closed forms in the Weierstrass data with the direct forms
/// on `(G, α)` pairs. Pairs at which the direct form is undefined (flat or
/// antipodal points) are skipped and counted.
pub fn check_weierstrass_equivalence(data: &WeierstrassData, pairs: &[(Complex64, ExtendedComplex)]) -> Result<VerificationReport> {
    let clock = Stopwatch::start();
    let per_pair = map_indices(pairs.len(), |k| -> Result<Option<[f64; 3]>> {
        let (g, alpha) = pairs[k];
        let mut devs = [0.0; 3];
        for (i, v) in WeierstrassVariant::ALL.iter().enumerate() {
            let direct = match cr_variant_direct(data, g, alpha, *v) {
                Ok(x) => x,
                Err(Error::AntipodalPoint { .. }) | Err(Error::FlatPoint { .. }) => return Ok(None),
                Err(e) => return Err(e),
            };
            let closed = cr_function_weierstrass(data, g, alpha, *v)?;
            devs[i] = (closed - direct).abs();
        }
        Ok(Some(devs))
    });
    let per_pair = collect(per_pair)?;
    let mut max = [0.0f64; 3];
    let mut total = 0.0;
    let mut used = 0usize;
    for d in per_pair.iter().flatten() {
        for i in 0..3 {
            max[i] = max[i].max(d[i]);
            total += d[i];
        }
        used += 1;
    }
    let dev = max[0].max(max[1]).max(max[2]);
    let mut r = VerificationReport::new(
        format!("weierstrass-equivalence[{}]", data.label()),
        format!("{} (G, alpha) pairs", pairs.len()),
        total / (3 * used.max(1)) as f64,
        dev,
        EQUIVALENCE_TOLERANCE,
    )
    .with_samples(used)
    .with_extra("one_minus_max", max[0])
    .with_extra("one_plus_max", max[1])
    .with_extra("product_max", max[2])
    .with_extra("skipped", (pairs.len() - used) as f64);
    r.runtime_s = clock.elapsed_s();
    Ok(r)
}

/// The `1 + n_V` closed form at `α` equals the `1 − n_V` form at the
/// antipodal parameter, and the product form is the mean of the two.
pub fn check_variant_relations(data: &WeierstrassData, pairs: &[(Complex64, ExtendedComplex)]) -> Result<VerificationReport> {
    let clock = Stopwatch::start();
    let per_pair = collect(map_indices(pairs.len(), |k| -> Result<Option<(f64, f64)>> {
        let (g, alpha) = pairs[k];
        let eval = |a: ExtendedComplex, v| match cr_function_weierstrass(data, g, a, v) {
            Ok(x) => Ok(Some(x)),
            Err(Error::AntipodalPoint { .. }) | Err(Error::FlatPoint { .. }) => Ok(None),
            Err(e) => Err(e),
        };
        let (Some(a), Some(b), Some(c), Some(a_anti)) = (
            eval(alpha, WeierstrassVariant::OneMinus)?,
            eval(alpha, WeierstrassVariant::OnePlus)?,
            eval(alpha, WeierstrassVariant::Product)?,
            eval(antipode_parameter(alpha), WeierstrassVariant::OneMinus)?,
        ) else {
            return Ok(None);
        };
        Ok(Some(((b - a_anti).abs(), (a + b - 2.0 * c).abs())))
    }))?;
    let (mut anti, mut sum) = (0.0f64, 0.0f64);
    let mut used = 0;
    for (x, y) in per_pair.iter().flatten() {
        anti = anti.max(*x);
        sum = sum.max(*y);
        used += 1;
    }
    let mut r = VerificationReport::new(
        format!("variant-relations[{}]", data.label()),
        format!("{} (G, alpha) pairs", pairs.len()),
        0.0,
        anti.max(sum),
        EQUIVALENCE_TOLERANCE,
    )
    .with_samples(used)
    .with_extra("antipode_max", anti)
    .with_extra("mean_relation_max", sum);
    r.runtime_s = clock.elapsed_s();
    Ok(r)
}

/// `ln[(1 − n₁²)(1 − n₂²)/(−K)]` equals half the four-term sum over `±V₁, ±V₂`.
pub fn check_product_sum_relation(
    data: &WeierstrassData,
    alpha1: ExtendedComplex,
    alpha2: ExtendedComplex,
    grid: &[Complex64],
) -> Result<VerificationReport> {
    let clock = Stopwatch::start();
    let alphas = [alpha1, antipode_parameter(alpha1), alpha2, antipode_parameter(alpha2)];
    let spec = ChernRicciSpec::uniform(&alphas, Side::Minus, Normalization::Sum)?;
    let devs = collect(map_indices(grid.len(), |k| {
        let p = product_form(data, grid[k], alpha1, alpha2)?;
        let s = cr_function_direct(data, grid[k], &spec)?;
        Ok((p - 0.5 * s).abs())
    }))?;
    let s = stats(&devs);
    let mut r = VerificationReport::new(
        format!("product-sum[{}]", data.label()),
        describe_points(grid.len()),
        s.mean,
        s.max,
        EQUIVALENCE_TOLERANCE,
    )
    .with_expected(ExpectedValue::derived(0.5))
    .with_samples(grid.len());
    r.runtime_s = clock.elapsed_s();
    Ok(r)
}

/// Period of the forms around a circle against an expected vector.
pub fn check_period(
    data: &WeierstrassData,
    theta: f64,
    center: Complex64,
    radius: f64,
    expected: [f64; 3],
    tolerance: f64,
) -> Result<VerificationReport> {
    let clock = Stopwatch::start();
    let p = period_around(data, theta, center, radius, MIN_PERIOD_STEPS)?;
    let dev = (0..3).fold(0.0f64, |m, k| m.max((p.v[k] - expected[k]).abs()));
    let mut r = VerificationReport::new(
        format!("period[{}]", data.label()),
        format!("circle |G - ({}, {})| = {}", center.re, center.im, radius),
        (p.v[0] + p.v[1] + p.v[2]) / 3.0,
        dev,
        tolerance,
    )
    .with_expected(ExpectedValue::derived(0.0))
    .with_samples(MIN_PERIOD_STEPS)
    .with_extra("x1", p.v[0])
    .with_extra("x2", p.v[1])
    .with_extra("x3", p.v[2]);
    r.runtime_s = clock.elapsed_s();
    Ok(r)
}

/// Immerses `data_a` at angle π/2 over `grid` and `data_b` at angle 0 over
/// `rotation · grid`, aligns the two point sets rigidly and compares the RMS
/// residual with `1e-4` times the diameter of the first patch.
pub fn check_conjugate_congruence(
    data_a: &WeierstrassData,
    data_b: &WeierstrassData,
    grid: &[Complex64],
    basepoint: Complex64,
    rotation: Complex64,
) -> Result<VerificationReport> {
    let clock = Stopwatch::start();
    let a = immerse(data_a, grid, core::f64::consts::FRAC_PI_2, basepoint)?;
    let rotated: Vec<Complex64> = grid.iter().map(|z| rotation * z).collect();
    let b = immerse(data_b, &rotated, 0.0, rotation * basepoint)?;
    let alignment = procrustes_align(&a.positions, &b.positions)?;
    let diameter = a.diameter();
    let mut r = VerificationReport::new(
        format!("conjugate-congruence[{} ~ {}]", data_a.label(), data_b.label()),
        describe_points(grid.len()),
        alignment.rms,
        alignment.rms,
        CONGRUENCE_RELATIVE_TOLERANCE * diameter,
    )
    .with_samples(grid.len())
    .with_extra("diameter", diameter)
    .with_extra("determinant", alignment.determinant());
    r.runtime_s = clock.elapsed_s();
    Ok(r)
}

/// Fits the translation `c` for which the patch lies on
/// `(x₁−c₁)² + (x₂−c₂)² = cosh²(x₃ − c₃)` and reports the largest residual.
pub fn check_catenoid(patch: &SurfacePatch) -> Result<VerificationReport> {
    let clock = Stopwatch::start();
    // start from the closed-form position of the basepoint
    let b = patch.basepoint;
    let (t0, phi0) = (b.norm().ln(), b.arg());
    let mut c = Vector3::new(t0.cosh() * phi0.cos(), t0.cosh() * phi0.sin(), -t0);
    let residual = |c: &Vector3<f64>, x: &[f64; 3]| {
        (x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2) - (x[2] - c[2]).cosh().powi(2)
    };
    for _ in 0..50 {
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for x in &patch.positions {
            let r = residual(&c, x);
            let j = Vector3::new(-2.0 * (x[0] - c[0]), -2.0 * (x[1] - c[1]), (2.0 * (x[2] - c[2])).sinh());
            jtj += j * j.transpose();
            jtr += j * r;
        }
        let Some(step) = jtj.lu().solve(&jtr) else {
            return Err(Error::DegenerateConfiguration("catenoid fit is singular".into()));
        };
        c -= step;
        if step.norm() < 1e-15 * (1.0 + c.norm()) {
            break;
        }
    }
    let devs: Vec<f64> = patch.positions.iter().map(|x| residual(&c, x).abs()).collect();
    let s = stats(&devs);
    let mut r = VerificationReport::new("catenoid-fit", describe_points(patch.len()), s.mean, s.max, 1e-6)
        .with_expected(ExpectedValue::derived(0.0))
        .with_samples(patch.len())
        .with_extra("c1", c[0])
        .with_extra("c2", c[1])
        .with_extra("c3", c[2]);
    r.runtime_s = clock.elapsed_s();
    Ok(r)
}

/// Largest distance of the points in each index group from its best-fit line.
pub fn check_straight_lines(patch: &SurfacePatch, lines: &[Vec<usize>], tolerance: f64) -> Result<VerificationReport> {
    let clock = Stopwatch::start();
    let mut max: f64 = 0.0;
    let mut total = 0.0;
    let mut count = 0usize;
    for line in lines.iter().filter(|l| l.len() >= 3) {
        let pts: Vec<Vector3<f64>> = line.iter().map(|&k| Vector3::from(patch.positions[k])).collect();
        let mean = pts.iter().fold(Vector3::zeros(), |a, p| a + p) / pts.len() as f64;
        let cov = pts.iter().fold(Matrix3::zeros(), |a, p| a + (p - mean) * (p - mean).transpose());
        let eig = SymmetricEigen::new(cov);
        let k = eig.eigenvalues.imax();
        let dir = eig.eigenvectors.column(k).into_owned();
        for p in &pts {
            let d = p - mean;
            let off = (d - dir * d.dot(&dir)).norm();
            max = max.max(off);
            total += off;
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::InvalidArgument("no line with at least 3 points".into()));
    }
    let mut r = VerificationReport::new("straight-lines", format!("{} lines", lines.len()), total / count as f64, max, tolerance)
        .with_expected(ExpectedValue::exact(0.0))
        .with_samples(count);
    r.runtime_s = clock.elapsed_s();
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wdsl::{parse_weierstrass, Params};
    use core::f64::consts::FRAC_PI_4;

    #[test]
    fn scherk_identity_reference_points() {
        let r = check_scherk_identity(&[(0.0, 0.0), (FRAC_PI_4, 0.0)]).unwrap();
        assert!(r.pass);
        let fo = check_finn_osserman(&[(0.0, 0.0), (FRAC_PI_4, 0.0)]).unwrap();
        assert!(fo.pass);
        assert!(fo.extra("min_slack").unwrap().abs() < 1e-15);
        assert!((fo.extra("max_slack").unwrap() - (0.75 - 0.5f64.sqrt())).abs() < 1e-15);
        assert!(check_scherk_identity(&[(2.0, 0.0)]).is_err());
    }

    #[test]
    fn harmonicity_controls() {
        let grid = vec![Complex64::new(0.5, 0.3), Complex64::new(-1.0, 0.2)];
        let constant = check_harmonicity(&|_z| Ok(2.5), &grid, 1e-3, 1e-4).unwrap();
        assert_eq!(constant.max_abs_deviation, 0.0);
        let square = check_harmonicity(&|z: Complex64| Ok(z.norm_sqr()), &grid, 1e-3, 1e-4).unwrap();
        assert!(!square.pass);
        assert!((square.max_abs_deviation - 4.0).abs() < 1e-6);
        let log = check_harmonicity(&|z: Complex64| Ok(-2.0 * z.norm().ln()), &grid, 1e-3, 1e-4).unwrap();
        assert!(log.pass);
    }

    #[test]
    fn catenoid_ricci_metric_is_flat_round_sphere_is_not() {
        let cat = parse_weierstrass("1/G", &Params::new()).unwrap();
        let grid = vec![Complex64::new(0.5, 0.3), Complex64::new(-1.0, 0.7)];
        let r = check_flatness(&cat, &ConformalFactorField::Ricci, &grid, 1e-3, 1e-4).unwrap();
        assert!(r.pass, "{:?}", r);
        let s = check_flatness(&cat, &ConformalFactorField::RoundSphere, &grid, 1e-3, 1e-4).unwrap();
        assert!(!s.pass);
        assert!((s.mean - 1.0).abs() < 1e-3);
    }

    #[test]
    fn report_pass_tracks_tolerance() {
        let r = VerificationReport::new("x", "g", 0.0, 2.0, 1.0);
        assert!(!r.pass);
        assert!(r.clone().negative_control().succeeded());
        assert!(r.with_tolerance(3.0).pass);
    }
}
