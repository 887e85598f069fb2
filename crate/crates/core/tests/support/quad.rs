//! Test-only quadrature oracles, independent of the library's evaluation paths.
//!
//! Adaptive Gauss-Legendre: each panel is compared against the sum over its two
//! halves and bisected until they agree.

#![allow(dead_code)]

use num_complex::Complex64;
use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

pub struct Adaptive {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    pub abs_tol: f64,
}

impl Adaptive {
    pub fn new(abs_tol: f64) -> Self {
        let (nodes, weights) = legendre_rule(12);
        Self {
            nodes,
            weights,
            abs_tol,
        }
    }

    /// Panel estimate and the magnitude sum that bounds its round-off.
    fn panel<F: Fn(f64) -> Complex64>(&self, f: &F, a: f64, b: f64) -> (Complex64, f64) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let (mut sum, mut mag) = (Complex64::new(0.0, 0.0), 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let v = f(mid + half * x) * *w;
            sum += v;
            mag += v.norm();
        }
        (sum * half, mag * half.abs())
    }

    fn recurse<F: Fn(f64) -> Complex64>(
        &self,
        f: &F,
        a: f64,
        b: f64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> Complex64 {
        let m = 0.5 * (a + b);
        let (left, left_mag) = self.panel(f, a, m);
        let (right, right_mag) = self.panel(f, m, b);
        let split = left + right;
        // Phases of several hundred radians carry ~1e-13 argument error.
        let floor = 1e4 * f64::EPSILON * (left_mag + right_mag);
        if (split - whole).norm() <= tol.max(floor) || depth > 30 {
            return split;
        }
        self.recurse(f, a, m, left, 0.5 * tol, depth + 1)
            + self.recurse(f, m, b, right, 0.5 * tol, depth + 1)
    }

    /// Integral of `f` over [a, b].
    pub fn integrate<F: Fn(f64) -> Complex64>(&self, f: F, a: f64, b: f64) -> Complex64 {
        if a == b {
            return Complex64::new(0.0, 0.0);
        }
        // Pre-split into unit panels so the first comparison is meaningful for
        // oscillatory integrands.
        let n = ((b - a).abs().ceil() as usize).max(1) * 4;
        let h = (b - a) / n as f64;
        (0..n)
            .map(|i| {
                let lo = a + i as f64 * h;
                let hi = lo + h;
                let (whole, _) = self.panel(&f, lo, hi);
                self.recurse(&f, lo, hi, whole, self.abs_tol / n as f64, 0)
            })
            .sum()
    }
}

/// F(x) = ∫₀ˣ exp(jπt²/2) dt by adaptive quadrature of the defining integral.
pub fn fresnel_oracle(x: f64) -> Complex64 {
    Adaptive::new(1e-14).integrate(|t| Complex64::from_polar(1.0, 0.5 * PI * t * t), 0.0, x)
}

/// ∫_{lo}^{hi} exp(-j·a·(u - c)²) du.
pub fn quadratic_phase_integral(a: f64, centre: f64, lo: f64, hi: f64) -> Complex64 {
    // Scale the tolerance to the expected magnitude ~ sqrt(pi/a).
    let scale = (PI / a).sqrt().min(hi - lo);
    Adaptive::new(1e-13 * scale.max(1e-300)).integrate(
        |u| Complex64::from_polar(1.0, -a * (u - centre) * (u - centre)),
        lo,
        hi,
    )
}
