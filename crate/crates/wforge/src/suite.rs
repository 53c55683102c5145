//! Named checks for one family and named suites across the catalog.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use wforge_core::catalog::{instance, Family, FamilyInstance};
use wforge_core::chern_ricci::{cr_function_direct, ChernRicciSpec, ConformalFactorField, Side};
use wforge_core::geom::{immerse, immerse_sampled, ImmerseOptions, PolarGrid};
use wforge_core::sphere::ExtendedComplex;
use wforge_core::verify::samples::{clear_points, diagonals, spec_singularities, uniform_square};
use wforge_core::verify::*;
use wforge_core::wdsl::{parse_weierstrass, Params};
use wforge_core::Complex64;

use crate::config::{GridSpec, RunConfig};
use crate::context::Context;
use crate::error::{CliError, CliResult};

pub const CHECKS: [&str; 11] = [
    "constancy",
    "harmonicity",
    "flatness",
    "weierstrass",
    "variants",
    "product-sum",
    "congruence",
    "catenoid",
    "straight-lines",
    "scherk-identity",
    "finn-osserman",
];

pub const SUITES: [&str; 8] = ["scherk", "constancy", "harmonicity", "flatness", "periods", "congruence", "geometry", "all"];

pub const DEFAULT_SEED: u64 = 0x5eed;

type Reports = CliResult<Vec<VerificationReport>>;
type Job = Box<dyn Fn() -> Reports + Send + Sync>;

/// Vertex parameter away from every catalog symmetry axis.
pub fn generic_alpha() -> ExtendedComplex {
    ExtendedComplex::Finite(Complex64::new(0.45, 0.62))
}

fn params(pairs: &[(&str, f64)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn member(name: &str, pairs: &[(&str, f64)]) -> CliResult<FamilyInstance> {
    Ok(instance(name, &params(pairs))?)
}

/// One member of every family, used when a suite sweeps the catalog.
pub fn representatives() -> CliResult<Vec<FamilyInstance>> {
    Family::ALL
        .iter()
        .map(|f| match f {
            Family::ScherkSheared => member(f.name(), &[("theta", 0.6)]),
            Family::Tclp => member(f.name(), &[("theta", PI / 8.0 - 0.05)]),
            Family::Td => member(f.name(), &[("lambda", -14.0)]),
            Family::Tp => member(f.name(), &[("lambda", 14.0)]),
            Family::Rpd => member(f.name(), &[("a", 2f64.sqrt())]),
            Family::Hclp => member(f.name(), &[("theta", 0.7)]),
            Family::H => member(f.name(), &[("a", 0.6)]),
            _ => member(f.name(), &[]),
        })
        .collect()
}

/// Sampling settings shared by the checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sampling {
    pub grid: Option<GridSpec>,
    pub clearance: Option<f64>,
    pub tolerance: Option<f64>,
    pub seed: u64,
}

impl Sampling {
    pub fn from_config(cfg: &RunConfig) -> Self {
        Sampling { grid: cfg.grid, clearance: cfg.exclude_radius, tolerance: cfg.tolerance, seed: cfg.seed.unwrap_or(DEFAULT_SEED) }
    }

    fn points(&self, inst: &FamilyInstance, avoid: &[Complex64], default: (f64, f64, usize, usize, f64)) -> CliResult<Vec<Complex64>> {
        let (r0, r1, nr, nphi, clear) = default;
        let (r0, r1, nr, nphi) = self.grid.map_or((r0, r1, nr, nphi), |g| (g.r_min, g.r_max, g.n_r, g.n_phi));
        let pts = clear_points(&inst.data, avoid, r0, r1, nr, nphi, self.clearance.unwrap_or(clear));
        if pts.is_empty() {
            return Err(CliError::config(format!("{}: no sample point clears the singular set", inst.family.name())));
        }
        Ok(pts)
    }

    /// Points for constancy checks.
    fn constancy_points(&self, inst: &FamilyInstance, spec: &ChernRicciSpec) -> CliResult<Vec<Complex64>> {
        self.points(inst, &spec_singularities(spec), (0.1, 3.0, 12, 12, 0.08))
    }

    /// Points for finite-difference checks, well clear of every logarithmic singularity.
    fn stencil_points(&self, inst: &FamilyInstance, avoid: &[Complex64]) -> CliResult<Vec<Complex64>> {
        self.points(inst, avoid, (0.2, 2.0, 8, 12, 0.5))
    }

    fn tol(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }
}

/// Family name followed by its resolved parameters.
pub fn describe(inst: &FamilyInstance) -> String {
    let mut s = inst.family.name().to_string();
    for (k, v) in &inst.params {
        s.push_str(&format!(" {}={:.6}", k, v));
    }
    s
}

fn both_sides(alpha: ExtendedComplex) -> Vec<Complex64> {
    [spec_singularities(&ChernRicciSpec::single(alpha, Side::Minus)), spec_singularities(&ChernRicciSpec::single(alpha, Side::Plus))].concat()
}

/// Constancy of the family's own spec, or of `spec_from`'s spec; the latter
/// is a negative control when the families differ.
pub fn constancy(inst: &FamilyInstance, spec_from: Option<&FamilyInstance>, s: &Sampling) -> CliResult<VerificationReport> {
    let source = spec_from.unwrap_or(inst);
    let spec = source.cr_spec()?;
    let pts = s.constancy_points(inst, &spec)?;
    let default_tol = if inst.data.has_branches() { CONSTANCY_TOLERANCE_BRANCHED } else { CONSTANCY_TOLERANCE };
    let mismatched = source.family != inst.family;
    let report = match (mismatched, inst.cr_constant()) {
        (false, Some(expected)) => check_constancy_against(&inst.data, &spec, &pts, expected, s.tol(default_tol))?,
        _ => check_constancy(&inst.data, &spec, &pts)?.with_tolerance(s.tol(default_tol)),
    };
    let mut report = report;
    report.check = format!("constancy[{}]", describe(inst));
    if mismatched {
        report.check = format!("constancy[{} with {} spec]", describe(inst), source.family.name());
        report = report.negative_control();
    }
    Ok(report)
}

pub fn harmonicity(inst: &FamilyInstance, s: &Sampling) -> Reports {
    let data = &inst.data;
    let single = ChernRicciSpec::single(generic_alpha(), Side::Minus);
    let pts = s.stencil_points(inst, &spec_singularities(&single))?;
    let field = |g: Complex64| cr_function_direct(data, g, &single);
    let mut r = check_harmonicity(&field, &pts, DEFAULT_STENCIL, s.tol(HARMONIC_TOLERANCE))?;
    r.check = format!("harmonicity[{}, chern-ricci at {}]", inst.family.name(), generic_alpha());
    let mut out = vec![r];
    if let Ok(spec) = inst.cr_spec() {
        let pts = s.stencil_points(inst, &spec_singularities(&spec))?;
        let field = |g: Complex64| cr_function_direct(data, g, &spec);
        let mut r = check_harmonicity(&field, &pts, DEFAULT_STENCIL, s.tol(HARMONIC_TOLERANCE))?;
        r.check = format!("harmonicity[{}, catalog sum]", inst.family.name());
        out.push(r);
    }
    Ok(out)
}

pub fn harmonicity_control() -> Reports {
    let grid = vec![Complex64::new(0.5, 0.3), Complex64::new(-1.1, 0.4)];
    let mut r = check_harmonicity(&|g: Complex64| Ok(g.norm_sqr()), &grid, DEFAULT_STENCIL, HARMONIC_TOLERANCE)?;
    r.check = "harmonicity[|G|^2 control]".into();
    Ok(vec![r.negative_control()])
}

pub fn flatness(inst: &FamilyInstance, s: &Sampling) -> Reports {
    let alpha = generic_alpha();
    let pts = s.stencil_points(inst, &both_sides(alpha))?;
    [ConformalFactorField::Chern(alpha), ConformalFactorField::Ricci]
        .iter()
        .map(|f| Ok(check_flatness(&inst.data, f, &pts, DEFAULT_STENCIL, s.tol(FLAT_TOLERANCE))?))
        .collect()
}

pub fn flatness_control(inst: &FamilyInstance, s: &Sampling) -> Reports {
    let pts = s.stencil_points(inst, &[])?;
    Ok(vec![check_flatness(&inst.data, &ConformalFactorField::RoundSphere, &pts, DEFAULT_STENCIL, FLAT_TOLERANCE)?.negative_control()])
}

/// `n` uniformly drawn `(G, α)` pairs; every 50th α is the point at infinity.
pub fn random_pairs(seed: u64, n: usize) -> Vec<(Complex64, ExtendedComplex)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|k| {
            let g = Complex64::from_polar(rng.gen_range(0.05..3.0), rng.gen_range(0.0..2.0 * PI));
            let alpha = if k % 50 == 0 {
                ExtendedComplex::Infinity
            } else {
                ExtendedComplex::Finite(Complex64::from_polar(rng.gen_range(0.0..4.0), rng.gen_range(0.0..2.0 * PI)))
            };
            (g, alpha)
        })
        .collect()
}

pub fn weierstrass(inst: &FamilyInstance, s: &Sampling) -> CliResult<VerificationReport> {
    let r = check_weierstrass_equivalence(&inst.data, &random_pairs(s.seed, 1000))?;
    Ok(match s.tolerance {
        Some(t) => r.with_tolerance(t),
        None => r,
    })
}

pub fn variants(inst: &FamilyInstance, s: &Sampling) -> CliResult<VerificationReport> {
    let r = check_variant_relations(&inst.data, &random_pairs(s.seed ^ 1, 1000))?;
    Ok(match s.tolerance {
        Some(t) => r.with_tolerance(t),
        None => r,
    })
}

/// Product form against half the four-term sum, for families with a
/// two-vector antipodally expanded configuration.
pub fn product_sum(inst: &FamilyInstance, s: &Sampling) -> CliResult<VerificationReport> {
    let cfg = inst.vertex_configuration()?;
    let alphas = cfg.parameters()?;
    if !cfg.expand_antipodes || cfg.listed.len() != 2 {
        return Err(CliError::config(format!("{}: product-sum needs two antipodally expanded vertices", inst.family.name())));
    }
    let spec = inst.cr_spec()?;
    let pts = s.constancy_points(inst, &spec)?;
    Ok(check_product_sum_relation(&inst.data, alphas[0], alphas[2], &pts)?)
}

/// Rotation relating the conjugate partner, if the family has one.
fn conjugate_partner(inst: &FamilyInstance) -> CliResult<(FamilyInstance, Complex64)> {
    let q = Complex64::from_polar(1.0, FRAC_PI_4);
    let lambda = inst.params.get("lambda").copied();
    match inst.family {
        Family::Tp => Ok((member("tD", &[("lambda", -lambda.unwrap())])?, q)),
        Family::Td => Ok((member("tP", &[("lambda", -lambda.unwrap())])?, q)),
        Family::Tclp => Ok((member("tCLP", &[("lambda", -lambda.unwrap())])?, q)),
        Family::Rpd => Ok((member("rPD", &[("a", 1.0 / inst.params["a"])])?, Complex64::from_polar(1.0, FRAC_PI_3))),
        _ => Err(CliError::config(format!("{} has no conjugate partner in the catalog", inst.family.name()))),
    }
}

pub fn congruence_sector() -> Vec<Complex64> {
    PolarGrid::sector(0.15, 0.45, 24, 24, 0.2, 1.3).all_points()
}

pub fn congruence(inst: &FamilyInstance) -> CliResult<VerificationReport> {
    let (partner, rot) = conjugate_partner(inst)?;
    let grid = congruence_sector();
    Ok(check_conjugate_congruence(&inst.data, &partner.data, &grid, grid[0], rot)?)
}

pub fn catenoid_fit(ctx: &Context) -> CliResult<VerificationReport> {
    if ctx.instance.family != Family::Catenoid {
        return Err(CliError::config("the catenoid check applies to the catenoid family"));
    }
    let pts = ctx.grid.sample(&ctx.instance.data)?.points;
    let base = ctx.basepoint.unwrap_or(Complex64::new(1.0, 0.0));
    let patch = immerse(&ctx.instance.data, &pts, 0.0, base)?;
    Ok(check_catenoid(&patch)?)
}

/// Straightness of the radial grid lines of the patch at the context angle.
pub fn straight_lines(ctx: &Context, tolerance: f64) -> CliResult<VerificationReport> {
    let sampled = ctx.grid.sample(&ctx.instance.data)?;
    let patch = immerse_sampled(&ctx.instance.data, &sampled, ctx.theta, ctx.basepoint, &ImmerseOptions::default())?;
    let lines: Vec<Vec<usize>> =
        (0..sampled.grid.n_phi).map(|j| (0..sampled.len()).filter(|&k| sampled.coords[k].1 == j).collect()).collect();
    let mut r = check_straight_lines(&patch, &lines, tolerance)?;
    r.check = format!("straight-lines[{}, theta = {}]", ctx.instance.family.name(), ctx.theta);
    Ok(r)
}

fn scherk_grid() -> Vec<(f64, f64)> {
    uniform_square(64, -1.4, 1.4)
}

pub fn scherk_identity() -> CliResult<VerificationReport> {
    Ok(check_scherk_identity(&scherk_grid())?)
}

/// Inequality on the square and equality on its diagonals.
pub fn finn_osserman() -> Reports {
    let ineq = check_finn_osserman(&scherk_grid())?;
    let diag = check_finn_osserman(&diagonals(64, 1.4))?;
    let gap = diag.extra("min_slack").unwrap_or(0.0).abs().max(diag.extra("max_slack").unwrap_or(0.0).abs());
    let eq = VerificationReport::new("finn-osserman-equality", diag.grid.clone(), diag.mean, gap, SCHERK_TOLERANCE)
        .with_expected(ExpectedValue::derived(0.0))
        .with_samples(diag.samples);
    Ok(vec![ineq, eq])
}

/// Runs the checks named in the config against its family.
pub fn run_checks(cfg: &RunConfig) -> Reports {
    let ctx = Context::from_config(cfg)?;
    let s = Sampling::from_config(cfg);
    let inst = &ctx.instance;
    let spec_from = match cfg.spec.as_deref() {
        Some(name) => Some(instance(name, &Params::new())?),
        None => None,
    };
    let checks: Vec<String> = if cfg.checks.is_empty() { vec!["constancy".into()] } else { cfg.checks.clone() };
    let mut out = Vec::new();
    for check in &checks {
        match check.as_str() {
            "constancy" => out.push(constancy(inst, spec_from.as_ref(), &s)?),
            "harmonicity" => out.extend(harmonicity(inst, &s)?),
            "flatness" => out.extend(flatness(inst, &s)?),
            "weierstrass" => out.push(weierstrass(inst, &s)?),
            "variants" => out.push(variants(inst, &s)?),
            "product-sum" => out.push(product_sum(inst, &s)?),
            "congruence" => out.push(congruence(inst)?),
            "catenoid" => out.push(catenoid_fit(&ctx)?),
            "straight-lines" => out.push(straight_lines(&ctx, s.tol(1e-5))?),
            "scherk-identity" => out.push(scherk_identity()?),
            "finn-osserman" => out.extend(finn_osserman()?),
            other => return Err(CliError::config(format!("unknown check `{}` (one of {})", other, CHECKS.join(", ")))),
        }
    }
    Ok(out)
}

fn job<F: Fn() -> Reports + Send + Sync + 'static>(f: F) -> Job {
    Box::new(f)
}

fn one<F: Fn() -> CliResult<VerificationReport> + Send + Sync + 'static>(f: F) -> Job {
    Box::new(move || f().map(|r| vec![r]))
}

type Member = (&'static str, Vec<(&'static str, f64)>);

fn constancy_job(name: &'static str, pairs: Vec<(&'static str, f64)>, spec_from: Option<Member>, s: Sampling) -> Job {
    one(move || {
        let inst = member(name, &pairs)?;
        let src = spec_from.as_ref().map(|(n, p)| member(n, p)).transpose()?;
        constancy(&inst, src.as_ref(), &s)
    })
}

fn period_job(src: &'static str, center: Complex64, expected: [f64; 3], tol: f64) -> Job {
    one(move || {
        let data = parse_weierstrass(src, &Params::new())?.with_label(src);
        Ok(check_period(&data, 0.0, center, 0.5, expected, tol)?)
    })
}

fn jobs(suite: &str, s: Sampling) -> CliResult<Vec<Job>> {
    let mut v: Vec<Job> = Vec::new();
    let all = suite == "all";
    if suite == "scherk" || all {
        v.push(one(scherk_identity));
        v.push(job(finn_osserman));
        v.push(constancy_job("scherk-doubly", vec![], None, s));
        v.push(constancy_job("scherk-singly", vec![], None, s));
        v.push(constancy_job("scherk-sheared", vec![("theta", PI / 6.0)], None, s));
        v.push(constancy_job("scherk-sheared", vec![("theta", PI / 3.0)], None, s));
        v.push(constancy_job("catenoid", vec![], Some(("scherk-doubly", vec![])), s));
        v.push(one(move || product_sum(&member("scherk-doubly", &[])?, &s)));
    }
    if suite == "constancy" || all {
        for theta in [PI / 12.0, PI / 8.0, PI / 6.0] {
            v.push(constancy_job("tCLP", vec![("theta", theta)], None, s));
        }
        v.push(constancy_job("tD", vec![("theta", (1.0 / 3f64.sqrt()).asin())], None, s));
        for a in [0.5f64.sqrt(), 1.0, 2f64.sqrt()] {
            v.push(constancy_job("rPD", vec![("a", a)], None, s));
        }
        v.push(constancy_job("hCLP", vec![("theta", PI / 6.0)], None, s));
        for f in [0.9, 0.95, 0.99] {
            v.push(constancy_job("hCLP", vec![("theta", f * FRAC_PI_3)], None, s));
        }
        v.push(constancy_job("H", vec![("a", 0.5)], None, s));
        v.push(constancy_job("enneper", vec![], None, s));
        v.push(constancy_job("tCLP", vec![("theta", PI / 8.0)], Some(("scherk-doubly", vec![])), s));
        v.push(constancy_job("H", vec![("a", 0.5)], Some(("hCLP", vec![("theta", PI / 6.0)])), s));
        v.push(constancy_job("jorge-meeks", vec![], Some(("enneper", vec![])), s));
    }
    if suite == "harmonicity" || all {
        for inst in representatives()? {
            v.push(job(move || harmonicity(&inst, &s)));
        }
        v.push(job(harmonicity_control));
    }
    if suite == "flatness" || all {
        for (name, pairs) in [("catenoid", vec![]), ("enneper", vec![]), ("scherk-doubly", vec![]), ("tP", vec![("lambda", 14.0)])] {
            v.push(job(move || flatness(&member(name, &pairs)?, &s)));
        }
        v.push(job(move || flatness_control(&member("catenoid", &[])?, &s)));
    }
    if suite == "periods" || all {
        v.push(period_job("G/(G^4-1)", Complex64::new(1.0, 0.0), [0.0, -FRAC_PI_2, 0.0], 1e-8));
        v.push(period_job("G/(G^4+1)", Complex64::from_polar(1.0, FRAC_PI_4), [0.0, 0.0, FRAC_PI_2], 1e-8));
        v.push(period_job("G/(G^4-1)", Complex64::new(3.0, 3.0), [0.0; 3], 1e-9));
    }
    if suite == "congruence" || all {
        v.push(one(|| congruence(&member("tP", &[("lambda", 14.0)])?)));
        v.push(one(|| congruence(&member("tCLP", &[("lambda", 0.0)])?)));
        v.push(one(|| congruence(&member("rPD", &[("a", 2f64.sqrt())])?)));
    }
    if suite == "geometry" || all {
        let cat = RunConfig { family: Some("catenoid".into()), grid: Some(GridSpec::parse("0.4,2.5,12,24").unwrap()), ..Default::default() };
        let heli = RunConfig {
            family: Some("helicoid".into()),
            grid: Some(GridSpec { r_min: 0.3, r_max: 3.0, n_r: 16, n_phi: 8, phi_min: Some(0.1), phi_max: Some(2.9) }),
            ..Default::default()
        };
        v.push(one(move || catenoid_fit(&Context::from_config(&cat)?)));
        v.push(one(move || straight_lines(&Context::from_config(&heli)?, 1e-5)));
        for inst in representatives()? {
            v.push(one(move || weierstrass(&inst, &s)));
        }
    }
    if v.is_empty() {
        return Err(CliError::config(format!("unknown suite `{}` (one of {})", suite, SUITES.join(", "))));
    }
    Ok(v)
}

/// Runs a named suite; checks run in parallel and reports keep suite order.
pub fn run_suite(name: &str, cfg: &RunConfig) -> Reports {
    let s = Sampling::from_config(cfg);
    let results: Vec<Reports> = jobs(name, s)?.par_iter().map(|j| j()).collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}
