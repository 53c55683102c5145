//! Globally adaptive Gauss-Kronrod (7/15) quadrature for vector integrands.

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

use crate::prelude::*;
use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

pub const DEFAULT_REL_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_SUBINTERVALS: usize = 1 << 20;

pub type Vec3c = [Complex64; 3];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    pub max_subintervals: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { rel_tol: DEFAULT_REL_TOL, max_subintervals: DEFAULT_MAX_SUBINTERVALS }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Vec3c,
    error: f64,
    l1: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then(other.a.total_cmp(&self.a))
    }
}

fn norm3(v: &Vec3c) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt()
}

fn add3(a: &Vec3c, b: &Vec3c) -> Vec3c {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn sub3(a: &Vec3c, b: &Vec3c) -> Vec3c {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<Vec3c>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let zero = Complex64::new(0.0, 0.0);
    let mut kronrod = [zero; 3];
    let mut gauss = [zero; 3];
    let mut l1 = 0.0;
    for (k, (&x, &w)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let nodes: &[f64] = if x == 0.0 { &[0.0] } else { &[-1.0, 1.0] };
        for &sign in nodes {
            let v = f(center + sign * half * x)?;
            l1 += w * norm3(&v);
            for c in 0..3 {
                kronrod[c] += v[c] * w;
                if k % 2 == 1 {
                    gauss[c] += v[c] * WG[k / 2];
                }
            }
        }
    }
    for c in 0..3 {
        kronrod[c] *= half;
        gauss[c] *= half;
    }
    let error = norm3(&sub3(&kronrod, &gauss));
    Ok(Panel { a, b, value: kronrod, error, l1: l1 * half.abs() })
}

/// Integrates `f` over `[a, b]`, bisecting the panel with the largest error
/// estimate until the summed estimate is below `rel_tol` times the larger of
/// the integral's norm and the integral of the integrand's norm.
pub fn integrate<F>(mut f: F, a: f64, b: f64, opts: &QuadratureOptions) -> Result<Vec3c>
where
    F: FnMut(f64) -> Result<Vec3c>,
{
    if a == b {
        return Ok([Complex64::new(0.0, 0.0); 3]);
    }
    let first = gk15(&mut f, a, b)?;
    let mut total = first.value;
    let mut error = first.error;
    let mut l1 = first.l1;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut count = 1usize;
    let scale = a.abs().max(b.abs());
    loop {
        let target = opts.rel_tol * norm3(&total).max(l1);
        if error <= target || !error.is_finite() {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if (worst.b - worst.a).abs() <= 1e-15 * scale.max(1e-300) || mid == worst.a || mid == worst.b {
            // panel cannot be split further; its error stays in the budget
            heap.push(Panel { error: 0.0, ..worst });
            if heap.iter().all(|p| p.error == 0.0) {
                break;
            }
            continue;
        }
        if count >= opts.max_subintervals {
            return Err(Error::QuadratureFailure { subintervals: count });
        }
        let left = gk15(&mut f, worst.a, mid)?;
        let right = gk15(&mut f, mid, worst.b)?;
        total = add3(&sub3(&total, &worst.value), &add3(&left.value, &right.value));
        error += left.error + right.error - worst.error;
        l1 += left.l1 + right.l1 - worst.l1;
        heap.push(left);
        heap.push(right);
        count += 1;
    }
    if !error.is_finite() {
        return Err(Error::QuadratureFailure { subintervals: count });
    }
    // re-sum to drop accumulated cancellation in the running total
    let mut sum = [Complex64::new(0.0, 0.0); 3];
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    for p in &panels {
        sum = add3(&sum, &p.value);
    }
    Ok(sum)
}
