//! Dense real polynomials with companion-matrix root finding.

use nalgebra::{Complex, DMatrix};

/// Real polynomial, coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn constant(c: f64) -> Self {
        Poly(vec![c])
    }

    /// c0 + c1·x
    pub fn linear(c0: f64, c1: f64) -> Self {
        Poly(vec![c0, c1])
    }

    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly((0..n)
            .map(|i| self.0.get(i).unwrap_or(&0.0) + other.0.get(i).unwrap_or(&0.0))
            .collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn powi(&self, k: u32) -> Poly {
        (0..k).fold(Poly::constant(1.0), |acc, _| acc.mul(self))
    }

    /// Value and first derivative by Horner's scheme.
    pub fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        let mut p = 0.0;
        let mut dp = 0.0;
        for &c in self.0.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_with_derivative(x).0
    }

    /// All complex roots as eigenvalues of the companion matrix. Leading
    /// coefficients below `1e-14 * max|c|` are dropped first; the roots they
    /// would contribute are huge and irrelevant to bounded searches.
    pub fn roots(&self) -> Vec<Complex<f64>> {
        let cmax = self.0.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if cmax == 0.0 {
            return Vec::new();
        }
        let mut coeffs = self.0.clone();
        while coeffs.len() > 1 && coeffs.last().unwrap().abs() <= 1e-14 * cmax {
            coeffs.pop();
        }
        let n = coeffs.len() - 1;
        if n == 0 {
            return Vec::new();
        }
        let lead = coeffs[n];
        let mut c = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            c[(i, i - 1)] = 1.0;
        }
        for i in 0..n {
            c[(i, n - 1)] = -coeffs[i] / lead;
        }
        c.complex_eigenvalues().iter().copied().collect()
    }

    /// Newton refinement of an approximate real root.
    pub fn polish(&self, mut x: f64) -> f64 {
        for _ in 0..60 {
            let (p, dp) = self.eval_with_derivative(x);
            if dp == 0.0 || !p.is_finite() {
                break;
            }
            let step = p / dp;
            let next = x - step;
            if !next.is_finite() {
                break;
            }
            x = next;
            if step.abs() <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
                break;
            }
        }
        x
    }
}
