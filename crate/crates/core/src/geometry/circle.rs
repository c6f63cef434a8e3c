use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Uniform nodes `t_k = 2πk/N` with weight `1/N`, realizing `dt/(2π)`.
///
/// The cosine/sine tables are reflection-exact: `cos(t_{N-k}) == cos(t_k)` and
/// `sin(t_{N-k}) == -sin(t_k)` bit for bit, with exact zeros at `0` and `π`.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleGrid {
    n: usize,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl CircleGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidGrid(format!("N_t = {n}, need an even number >= 4")));
        }
        let mut cos = vec![0.0; n];
        let mut sin = vec![0.0; n];
        for k in 0..=n / 2 {
            let (s, c) = (TAU * k as f64 / n as f64).sin_cos();
            cos[k] = c;
            sin[k] = s;
        }
        sin[0] = 0.0;
        cos[0] = 1.0;
        sin[n / 2] = 0.0;
        cos[n / 2] = -1.0;
        if n % 4 == 0 {
            cos[n / 4] = 0.0;
            sin[n / 4] = 1.0;
        }
        for k in 1..n / 2 {
            cos[n - k] = cos[k];
            sin[n - k] = -sin[k];
        }
        Ok(Self { n, cos, sin })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn node(&self, k: usize) -> f64 {
        TAU * k as f64 / self.n as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|k| self.node(k))
    }

    pub fn cos_at(&self, k: usize) -> f64 {
        self.cos[k]
    }

    pub fn sin_at(&self, k: usize) -> f64 {
        self.sin[k]
    }

    /// Index of `2π - t_k`.
    pub fn reflect(&self, k: usize) -> usize {
        (self.n - k) % self.n
    }

    /// `(1/N) Σ_k f(t_k)`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        crate::sum::fsum(self.nodes().map(f)) / self.n as f64
    }

    /// Index of the node nearest to `t` (mod 2π).
    pub fn nearest(&self, t: f64) -> usize {
        let k = (t.rem_euclid(TAU) / TAU * self.n as f64).round() as usize;
        k % self.n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(CircleGrid::new(2).is_err());
        assert!(CircleGrid::new(7).is_err());
        assert!(CircleGrid::new(4).is_ok());
    }

    #[test]
    fn integrates_trigonometric_polynomials() {
        let g = CircleGrid::new(16).unwrap();
        assert_eq!(g.integrate(|_| 1.0), 1.0);
        for n in 1..8 {
            let c = g.integrate(|t| (n as f64 * t).cos());
            let s = g.integrate(|t| (n as f64 * t).sin());
            assert!(c.abs() < 1e-15 && s.abs() < 1e-15, "n={n}");
        }
        assert!((g.integrate(|t| t.cos().powi(2)) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn reflection_tables_exact() {
        let g = CircleGrid::new(256).unwrap();
        for k in 0..256 {
            let r = g.reflect(k);
            assert_eq!(g.reflect(r), k);
            assert_eq!(g.cos_at(r), g.cos_at(k));
            assert_eq!(g.sin_at(r), -g.sin_at(k));
            assert!((g.cos_at(k) - g.node(k).cos()).abs() < 1e-15);
            assert!((g.sin_at(k) - g.node(k).sin()).abs() < 1e-15);
        }
        assert_eq!(g.sin_at(128), 0.0);
    }
}
