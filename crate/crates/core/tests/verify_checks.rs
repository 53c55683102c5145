use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wforge_core::catalog::{instance, FamilyInstance};
use wforge_core::chern_ricci::{ChernRicciSpec, Side};
use wforge_core::sphere::ExtendedComplex;
use wforge_core::verify::samples::{clear_points, spec_singularities};
use wforge_core::verify::*;
use wforge_core::wdsl::Params;

fn member(name: &str, pairs: &[(&str, f64)]) -> FamilyInstance {
    let p: Params = pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    instance(name, &p).unwrap()
}

fn points(inst: &FamilyInstance, spec: &ChernRicciSpec) -> Vec<Complex64> {
    clear_points(&inst.data, &spec_singularities(spec), 0.1, 3.0, 12, 12, 0.08)
}

fn constancy(inst: &FamilyInstance) -> VerificationReport {
    let spec = inst.cr_spec().unwrap();
    let expected = inst.cr_constant().unwrap();
    let pts = points(inst, &spec);
    assert!(pts.len() > 20);
    let r = check_constancy(&inst.data, &spec, &pts).unwrap();
    assert!((r.mean - expected.value).abs() < 1e-7, "{}: mean {} vs {}", r.check, r.mean, expected.value);
    r
}

fn catalog_members() -> Vec<FamilyInstance> {
    let mut out = vec![
        member("scherk-doubly", &[]),
        member("scherk-singly", &[]),
        member("scherk-sheared", &[("theta", PI / 6.0)]),
        member("scherk-sheared", &[("theta", PI / 3.0)]),
        member("tD", &[("theta", (1.0 / 3f64.sqrt()).asin())]),
        member("hCLP", &[("theta", PI / 6.0)]),
        member("H", &[("a", 0.5)]),
    ];
    for theta in [PI / 12.0, PI / 8.0, PI / 6.0] {
        out.push(member("tCLP", &[("theta", theta)]));
    }
    for a in [0.5f64.sqrt(), 1.0, 2f64.sqrt()] {
        out.push(member("rPD", &[("a", a)]));
    }
    out
}

#[test]
fn catalog_members_are_constant() {
    for inst in catalog_members() {
        let r = constancy(&inst);
        assert!(r.pass, "{} deviation {:e}", r.check, r.max_abs_deviation);
    }
}

#[test]
fn mismatched_families_are_not_constant() {
    let members = catalog_members();
    let specs: Vec<(String, ChernRicciSpec)> =
        members.iter().map(|m| (m.family.name().to_string(), m.cr_spec().unwrap())).collect();
    for m in &members {
        for (name, spec) in &specs {
            if name == m.family.name() {
                continue;
            }
            let r = check_constancy(&m.data, spec, &points(m, spec)).unwrap();
            assert!(r.max_abs_deviation > 0.05, "{} with {} spec: {:e}", m.family.name(), name, r.max_abs_deviation);
        }
    }
}

#[test]
fn hclp_constancy_persists_towards_the_tower_limit() {
    for s in [0.9, 0.95, 0.99] {
        let r = constancy(&member("hCLP", &[("theta", s * FRAC_PI_3)]));
        assert!(r.pass, "{:e}", r.max_abs_deviation);
    }
}

#[test]
fn single_term_constancy_singles_out_enneper() {
    let spec = ChernRicciSpec::single(ExtendedComplex::Infinity, Side::Minus);
    let enn = member("enneper", &[]);
    assert!(check_constancy(&enn.data, &spec, &points(&enn, &spec)).unwrap().pass);
    for other in ["catenoid", "jorge-meeks", "scherk-doubly"] {
        let m = member(other, &[]);
        let r = check_constancy(&m.data, &spec, &points(&m, &spec)).unwrap();
        assert!(!r.pass, "{}", other);
    }
}

#[test]
fn associate_angle_does_not_move_the_scherk_constant() {
    let a = constancy(&member("scherk-doubly", &[("Theta", 0.0)]));
    let b = constancy(&member("scherk-doubly", &[("Theta", 1.1)]));
    assert!((a.mean - b.mean).abs() < 1e-12);
}

#[test]
fn finn_osserman_slack_at_reference_points() {
    let r = check_finn_osserman(&[(FRAC_PI_4, 0.0)]).unwrap();
    assert!((r.mean - (0.75 - 0.5f64.sqrt())).abs() < 1e-15);
    let d = check_finn_osserman(&[(0.7, -0.7), (-1.2, -1.2)]).unwrap();
    assert!(d.extra("max_slack").unwrap().abs() < 1e-12);
}

#[test]
fn procrustes_residual_tracks_noise_scale() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a: Vec<[f64; 3]> = (0..400).map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect();
    let b: Vec<[f64; 3]> = a.iter().map(|p| [0, 1, 2].map(|k| p[k] + rng.gen_range(-1e-3..1e-3))).collect();
    let al = procrustes_align(&a, &b).unwrap();
    assert!(al.rms > 0.3e-3 && al.rms < 1.5e-3, "{}", al.rms);
}

#[test]
fn product_form_is_half_the_four_term_sum() {
    let inst = member("scherk-doubly", &[]);
    let spec = inst.cr_spec().unwrap();
    let grid = points(&inst, &spec);
    let r = check_product_sum_relation(&inst.data, ExtendedComplex::finite(1.0, 0.0), ExtendedComplex::finite(0.0, 1.0), &grid).unwrap();
    assert!(r.pass, "{:e}", r.max_abs_deviation);
    // the product form itself equals half the catalog constant
    let p = wforge_core::chern_ricci::product_form(&inst.data, grid[0], ExtendedComplex::finite(1.0, 0.0), ExtendedComplex::finite(0.0, 1.0)).unwrap();
    assert!((p + 2.0 * 4f64.ln()).abs() < 1e-10);
}

#[test]
fn variant_relations_hold_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let pairs: Vec<_> = (0..300)
        .map(|_| {
            (
                Complex64::from_polar(rng.gen_range(0.1..3.0), rng.gen_range(0.0..6.28)),
                ExtendedComplex::Finite(Complex64::from_polar(rng.gen_range(0.0..3.0), rng.gen_range(0.0..6.28))),
            )
        })
        .collect();
    let r = check_variant_relations(&member("tCLP", &[("lambda", 0.5)]).data, &pairs).unwrap();
    assert!(r.pass, "{:?}", r);
}
