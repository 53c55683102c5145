use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use wforge_core::catalog::instance;
use wforge_core::chern_ricci::{cr_function_direct, cr_function_weierstrass, WeierstrassVariant};
use wforge_core::geom::grid::PolarGrid;
use wforge_core::geom::{immerse, immerse_sampled, period_around, ImmerseOptions};
use wforge_core::sphere::{antipode_parameter, inverse_stereographic, stereographic, ExtendedComplex};
use wforge_core::verify::procrustes_align;
use wforge_core::verify::samples::{clear_points, spec_singularities};
use wforge_core::wdsl::{parse_expr, parse_weierstrass, Expr, Params};

fn expr_strategy() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u32..1000).prop_map(|n| Expr::num(n as f64 / 8.0)),
        Just(Expr::ImagUnit),
        Just(Expr::Pi),
        Just(Expr::Var),
        Just(Expr::param("rho")),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::div(a, b)),
            (inner.clone(), -6i32..7).prop_map(|(a, n)| Expr::pow(a, n)),
            inner.clone().prop_map(Expr::exp),
            inner.prop_map(Expr::neg),
        ]
    })
}

fn finite_point() -> impl Strategy<Value = Complex64> {
    (0.05f64..4.0, 0.0f64..2.0 * PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #[test]
    fn expr_display_reparses(e in expr_strategy()) {
        let text = e.to_string();
        let params: Params = [("rho".to_string(), 1.5)].into_iter().collect();
        let back = parse_expr(&text, &params).unwrap();
        prop_assert_eq!(back, e, "{}", text);
    }

    #[test]
    fn stereographic_round_trip(g in finite_point()) {
        let a = ExtendedComplex::Finite(g);
        let v = inverse_stereographic(a);
        let n = v.as_array();
        prop_assert!((n[0] * n[0] + n[1] * n[1] + n[2] * n[2] - 1.0).abs() < 1e-14);
        let back = stereographic(n).unwrap().as_finite().unwrap();
        prop_assert!((back - g).norm() < 1e-12 * (1.0 + g.norm()));
        let anti = inverse_stereographic(antipode_parameter(a)).as_array();
        for k in 0..3 {
            prop_assert!((anti[k] + n[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn variant_mean_relation(g in finite_point(), alpha in finite_point()) {
        let data = parse_weierstrass("G/(G^4-1)", &Params::new()).unwrap();
        prop_assume!((g - alpha).norm() > 1e-3 && (g.powu(4) - 1.0).norm() > 1e-3);
        let a = ExtendedComplex::Finite(alpha);
        let v = |w| cr_function_weierstrass(&data, g, a, w).unwrap();
        let (m, p, c) = (v(WeierstrassVariant::OneMinus), v(WeierstrassVariant::OnePlus), v(WeierstrassVariant::Product));
        prop_assert!((m + p - 2.0 * c).abs() < 1e-10);
    }

    #[test]
    fn procrustes_recovers_rigid_motions(
        ax in -1.0f64..1.0, ay in -1.0f64..1.0, az in -1.0f64..1.0, angle in 0.0f64..PI,
        t in prop::array::uniform3(-5.0f64..5.0),
    ) {
        let axis = nalgebra::Vector3::new(ax, ay, az + 2.0).normalize();
        let rot = nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(axis), angle);
        let pts: Vec<[f64; 3]> = (0..12).map(|k| {
            let s = k as f64;
            [s.sin(), (2.0 * s).cos(), 0.3 * s]
        }).collect();
        let moved: Vec<[f64; 3]> = pts.iter().map(|p| {
            let q = rot * nalgebra::Vector3::from(*p);
            [q[0] + t[0], q[1] + t[1], q[2] + t[2]]
        }).collect();
        let al = procrustes_align(&pts, &moved).unwrap();
        prop_assert!(al.rms < 1e-10);
    }

    #[test]
    fn scherk_doubly_constant_for_every_rho(rho in 0.1f64..10.0) {
        let inst = instance("scherk-doubly", &[("rho".to_string(), rho)].into_iter().collect()).unwrap();
        let spec = inst.cr_spec().unwrap();
        let expected = inst.cr_constant().unwrap().value;
        for g in clear_points(&inst.data, &spec_singularities(&spec), 0.1, 3.0, 5, 7, 0.05) {
            prop_assert!((cr_function_direct(&inst.data, g, &spec).unwrap() - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn tclp_constant_across_theta(theta in 0.02f64..(PI / 4.0 - 0.02)) {
        let inst = instance("tCLP", &[("theta".to_string(), theta)].into_iter().collect()).unwrap();
        let spec = inst.cr_spec().unwrap();
        for g in clear_points(&inst.data, &spec_singularities(&spec), 0.1, 3.0, 5, 7, 0.05) {
            prop_assert!((cr_function_direct(&inst.data, g, &spec).unwrap() + 8.0 * 4f64.ln()).abs() < 1e-7);
        }
    }

    #[test]
    fn period_is_independent_of_radius(r in 0.2f64..0.9, theta in 0.0f64..(2.0 * PI)) {
        let data = parse_weierstrass("G/(G^4-1)", &Params::new()).unwrap();
        let center = Complex64::new(1.0, 0.0);
        let a = period_around(&data, theta, center, r, 64).unwrap();
        let b = period_around(&data, theta, center, 0.5, 64).unwrap();
        for k in 0..3 {
            prop_assert!((a.v[k] - b.v[k]).abs() < 1e-8);
        }
    }
}

#[test]
fn immersion_does_not_depend_on_the_spanning_tree() {
    let data = parse_weierstrass("G/(G^4-1)", &Params::new()).unwrap();
    let grid = PolarGrid::sector(0.2, 0.8, 8, 9, 0.1, 1.4);
    let sampled = grid.sample(&data).unwrap();
    let base = sampled.points[0];
    let a = immerse_sampled(&data, &sampled, 0.3, Some(base), &ImmerseOptions::default()).unwrap();
    let b = immerse(&data, &sampled.points, 0.3, base).unwrap();
    for (p, q) in a.positions.iter().zip(&b.positions) {
        for k in 0..3 {
            assert!((p[k] - q[k]).abs() < 1e-9);
        }
    }
}

/// Coordinate derivatives of the immersion have equal length `√Λ` and are
/// orthogonal, with second-order convergence in the step.
#[test]
fn immersion_is_conformal() {
    let data = parse_weierstrass("G/(G^4+1)", &Params::new()).unwrap();
    let z = Complex64::new(0.4, 0.2);
    let lambda = wforge_core::geom::metric_factor(&data, z).unwrap();
    let error = |h: f64| {
        let pts = [z + h, z - h, z + Complex64::new(0.0, h), z - Complex64::new(0.0, h)];
        let p = immerse(&data, &pts, 0.7, z).unwrap().positions;
        let xu: Vec<f64> = (0..3).map(|k| (p[0][k] - p[1][k]) / (2.0 * h)).collect();
        let xv: Vec<f64> = (0..3).map(|k| (p[2][k] - p[3][k]) / (2.0 * h)).collect();
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        (dot(&xu, &xu) - lambda).abs().max((dot(&xv, &xv) - lambda).abs()).max(dot(&xu, &xv).abs())
    };
    let (e1, e2) = (error(1e-2), error(5e-3));
    assert!(e1 < 1e-3 && e2 < e1);
    let ratio = e1 / e2;
    assert!((3.0..5.0).contains(&ratio), "ratio {}", ratio);
}
