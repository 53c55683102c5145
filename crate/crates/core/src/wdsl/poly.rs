//! Dense complex polynomials in G and their roots.

use crate::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Poly {
    /// coefficients, lowest degree first
    pub(crate) coeffs: Vec<Complex64>,
}

impl Poly {
    pub(crate) fn constant(c: Complex64) -> Self {
        Poly { coeffs: vec![c] }.trimmed()
    }

    pub(crate) fn var() -> Self {
        Poly { coeffs: vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)] }
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.len() > 1 && self.coeffs.last().map_or(false, |c| c.norm_sqr() == 0.0) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(Complex64::new(0.0, 0.0));
        }
        self
    }

    pub(crate) fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub(crate) fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        let coeffs = (0..n)
            .map(|k| *self.coeffs.get(k).unwrap_or(&zero) + *other.coeffs.get(k).unwrap_or(&zero))
            .collect();
        Poly { coeffs }.trimmed()
    }

    pub(crate) fn scale(&self, s: Complex64) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| c * s).collect() }.trimmed()
    }

    pub(crate) fn mul(&self, other: &Poly) -> Poly {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly { coeffs }.trimmed()
    }

    pub(crate) fn powi(&self, n: u32) -> Poly {
        let mut out = Poly::constant(Complex64::new(1.0, 0.0));
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub(crate) fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// All complex roots with multiplicity, by Aberth-Ehrlich iteration
    /// followed by Newton polishing.
    pub(crate) fn roots(&self) -> Vec<Complex64> {
        let n = self.degree();
        if n == 0 {
            return Vec::new();
        }
        // exact zero roots first: x^k factors
        let lead_zeros = self.coeffs.iter().take_while(|c| c.norm_sqr() == 0.0).count();
        let mut roots = vec![Complex64::new(0.0, 0.0); lead_zeros];
        let reduced = Poly { coeffs: self.coeffs[lead_zeros..].to_vec() };
        let m = reduced.degree();
        if m == 0 {
            return roots;
        }
        let lead = reduced.coeffs[m];
        let monic = reduced.scale(lead.inv());
        // Cauchy bound for the initial circle
        let bound = 1.0 + monic.coeffs[..m].iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut z: Vec<Complex64> = (0..m)
            .map(|k| {
                let t = 2.0 * core::f64::consts::PI * (k as f64 + 0.25) / m as f64 + 0.4;
                Complex64::from_polar(0.5 * bound, t)
            })
            .collect();
        for _ in 0..500 {
            let mut max_step = 0.0f64;
            for k in 0..m {
                let (p, dp) = monic.eval_with_derivative(z[k]);
                if p.norm_sqr() == 0.0 {
                    continue;
                }
                let ratio = p / dp;
                let mut s = Complex64::new(0.0, 0.0);
                for j in 0..m {
                    if j != k {
                        let d = z[k] - z[j];
                        if d.norm_sqr() > 0.0 {
                            s += d.inv();
                        }
                    }
                }
                let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
                if step.is_finite() {
                    z[k] -= step;
                    max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
                }
            }
            if max_step < 1e-15 {
                break;
            }
        }
        for r in z.iter_mut() {
            for _ in 0..3 {
                let (p, dp) = monic.eval_with_derivative(*r);
                if dp.norm_sqr() == 0.0 {
                    break;
                }
                let next = *r - p / dp;
                if !next.is_finite() || monic.eval(next).norm() > p.norm() {
                    break;
                }
                *r = next;
            }
        }
        roots.extend(z);
        roots
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(coeffs: &[f64]) -> Poly {
        Poly { coeffs: coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect() }
    }

    #[test]
    fn fourth_roots_of_unity() {
        let p = poly(&[-1.0, 0.0, 0.0, 0.0, 1.0]);
        let mut roots = p.roots();
        assert_eq!(roots.len(), 4);
        roots.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap());
        for (r, expected) in roots.iter().zip([
            Complex64::new(0.0, -1.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
        ]) {
            assert!((r - expected).norm() < 1e-14, "{} vs {}", r, expected);
        }
    }

    #[test]
    fn roots_satisfy_polynomial_for_eighth_degree() {
        let p = poly(&[1.0, 0.0, 0.0, 0.0, 14.0, 0.0, 0.0, 0.0, 1.0]);
        let roots = p.roots();
        assert_eq!(roots.len(), 8);
        for r in roots {
            let scale: f64 = p.coeffs.iter().enumerate().map(|(k, c)| c.norm() * r.norm().powi(k as i32)).sum();
            assert!(p.eval(r).norm() < 1e-13 * scale);
        }
    }

    #[test]
    fn zero_roots_split_off() {
        let p = poly(&[0.0, 0.0, 1.0]).mul(&poly(&[-2.0, 1.0]));
        let mut roots = p.roots();
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert_eq!(roots[0], Complex64::new(0.0, 0.0));
        assert_eq!(roots[1], Complex64::new(0.0, 0.0));
        assert!((roots[2] - Complex64::new(2.0, 0.0)).norm() < 1e-14);
    }
}
