use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gauss::gauss_legendre;
use crate::error::{Error, Result};
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::sum::QuatSum;

/// How polar nodes are placed in `x = cos(polar angle)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum PolarScheme {
    /// Gauss–Legendre in `x`; antipodally symmetric.
    GaussLegendre,
    /// Gauss–Legendre in `s` with `x = -1 + 2((1+s)/2)^order`, clustering nodes
    /// at the south end `-pole`. Integrands with an algebraic singularity at
    /// `-pole` become smooth in `s`. Not antipodally symmetric.
    Graded { order: u32 },
}

/// Product quadrature for the normalized surface measure on the sphere of
/// imaginary units. Node `polar_idx * n_azimuth + azimuth_idx`.
#[derive(Clone, Debug)]
pub struct SphereRule {
    n_polar: usize,
    n_azimuth: usize,
    scheme: PolarScheme,
    pole: ImaginaryUnit,
    nodes: Vec<ImaginaryUnit>,
    weights: Vec<f64>,
    antipode: Option<Vec<usize>>,
}

impl SphereRule {
    /// Gauss–Legendre in `cos(polar)` times the uniform azimuth rule, pole at `k`.
    pub fn gauss_legendre(n_polar: usize, n_azimuth: usize) -> Result<Self> {
        Self::build(n_polar, n_azimuth, PolarScheme::GaussLegendre, ImaginaryUnit::K)
    }

    /// Polar nodes graded toward `-pole`; see [`PolarScheme::Graded`].
    pub fn graded(n_polar: usize, n_azimuth: usize, order: u32, pole: ImaginaryUnit) -> Result<Self> {
        if order < 1 {
            return Err(Error::InvalidGrid("grading order must be at least 1".into()));
        }
        Self::build(n_polar, n_azimuth, PolarScheme::Graded { order }, pole)
    }

    pub fn build(n_polar: usize, n_azimuth: usize, scheme: PolarScheme, pole: ImaginaryUnit) -> Result<Self> {
        if n_polar < 2 {
            return Err(Error::InvalidGrid(format!("n_polar = {n_polar}, need at least 2")));
        }
        if n_azimuth < 2 || n_azimuth % 2 != 0 {
            return Err(Error::InvalidGrid(format!("n_azimuth = {n_azimuth}, need an even number >= 2")));
        }

        let (s, ws) = gauss_legendre(n_polar);
        let (xs, wx): (Vec<f64>, Vec<f64>) = match scheme {
            PolarScheme::GaussLegendre => (s, ws),
            PolarScheme::Graded { order } => {
                let m = order as f64;
                s.iter()
                    .zip(&ws)
                    .map(|(&s, &w)| {
                        let u = 0.5 * (1.0 + s);
                        (-1.0 + 2.0 * u.powf(m), w * m * u.powf(m - 1.0))
                    })
                    .unzip()
            }
        };

        // Azimuth tables with exact antipodal pairing: phi + pi negates (cos, sin).
        let half = n_azimuth / 2;
        let mut cos_phi = vec![0.0; n_azimuth];
        let mut sin_phi = vec![0.0; n_azimuth];
        for j in 0..half {
            let (s, c) = (TAU * j as f64 / n_azimuth as f64).sin_cos();
            cos_phi[j] = c;
            sin_phi[j] = s;
            cos_phi[j + half] = -c;
            sin_phi[j + half] = -s;
        }

        let rotation = rotation_from_k(&pole);
        let mut nodes = Vec::with_capacity(n_polar * n_azimuth);
        let mut weights = Vec::with_capacity(n_polar * n_azimuth);
        let az_weight = 1.0 / (2.0 * n_azimuth as f64);
        for (&x, &w) in xs.iter().zip(&wx) {
            let rho = (1.0 - x * x).max(0.0).sqrt();
            for j in 0..n_azimuth {
                let local = Quaternion::pure(rho * cos_phi[j], rho * sin_phi[j], x);
                let v = rotation * local * rotation.conj();
                nodes.push(normalize_node(v));
                weights.push(w * az_weight);
            }
        }

        let antipode = match scheme {
            PolarScheme::GaussLegendre => Some(
                (0..n_polar)
                    .flat_map(|i| (0..n_azimuth).map(move |j| (n_polar - 1 - i) * n_azimuth + (j + half) % n_azimuth))
                    .collect(),
            ),
            PolarScheme::Graded { .. } => None,
        };

        Ok(Self { n_polar, n_azimuth, scheme, pole, nodes, weights, antipode })
    }

    /// Same sizes and scheme with the pole moved to `pole`.
    pub fn with_pole(&self, pole: ImaginaryUnit) -> Self {
        Self::build(self.n_polar, self.n_azimuth, self.scheme, pole).expect("sizes already validated")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn n_polar(&self) -> usize {
        self.n_polar
    }

    pub fn n_azimuth(&self) -> usize {
        self.n_azimuth
    }

    pub fn scheme(&self) -> PolarScheme {
        self.scheme
    }

    pub fn pole(&self) -> ImaginaryUnit {
        self.pole
    }

    pub fn nodes(&self) -> &[ImaginaryUnit] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Index of `-J` for every node `J`, when the rule is antipodally closed.
    pub fn antipode(&self) -> Option<&[usize]> {
        self.antipode.as_deref()
    }

    /// Highest total degree of spherical polynomials integrated exactly.
    pub fn degree(&self) -> Option<usize> {
        match self.scheme {
            PolarScheme::GaussLegendre => Some((2 * self.n_polar - 1).min(self.n_azimuth - 1)),
            PolarScheme::Graded { .. } => None,
        }
    }

    /// `(polar_idx, azimuth_idx)` of a flat node index.
    pub fn split_index(&self, node: usize) -> (usize, usize) {
        (node / self.n_azimuth, node % self.n_azimuth)
    }

    /// `Σ w_k f(J_k)` in node order, compensated.
    pub fn integrate<F>(&self, f: F) -> Quaternion
    where
        F: Fn(&ImaginaryUnit) -> Quaternion + Sync,
    {
        let terms: Vec<Quaternion> = self
            .nodes
            .par_iter()
            .zip(self.weights.par_iter())
            .map(|(j, &w)| f(j) * w)
            .collect();
        let mut acc = QuatSum::default();
        for t in terms {
            acc.add(t);
        }
        acc.value()
    }

    /// Real-valued variant of [`Self::integrate`].
    pub fn integrate_real<F>(&self, f: F) -> f64
    where
        F: Fn(&ImaginaryUnit) -> f64 + Sync,
    {
        self.integrate(|j| Quaternion::real(f(j))).w
    }
}

fn normalize_node(v: Quaternion) -> ImaginaryUnit {
    // Normalization is sign-symmetric, so antipodal pairs stay exact negatives.
    ImaginaryUnit::new(v.x, v.y, v.z).expect("rotated unit vector")
}

/// Unit quaternion `u` with `u k u* = pole`.
pub fn rotation_from_k(pole: &ImaginaryUnit) -> Quaternion {
    let c = pole.z();
    if c >= 1.0 - 1e-15 && pole.x() == 0.0 && pole.y() == 0.0 {
        return Quaternion::ONE;
    }
    if c < -1.0 + 1e-12 {
        return Quaternion::I;
    }
    // half-way quaternion (1 + k·p, k × p)
    let q = Quaternion::new(1.0 + c, -pole.y(), pole.x(), 0.0);
    q / q.norm()
}
