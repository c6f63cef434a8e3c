//! Seeded random test functions: well-defined boundary functions built from
//! the coordinates of `q = e^{Jt}`, and band-limited slice functions.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::geometry::{BoundaryGrid, CircleGrid, SampledFunction};
use crate::quaternion::Quaternion;
use crate::slice::SliceFunction;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_quaternion<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    Quaternion::new(rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_quaternions(n: usize, seed: u64) -> Vec<Quaternion> {
    let mut r = rng(seed);
    (0..n).map(|_| gaussian_quaternion(&mut r)).collect()
}

/// `φ(q) = Σ_α c_α q_w^{α0} q_x^{α1} q_y^{α2} q_z^{α3}` over all monomials of
/// total degree at most `degree`, with Gaussian quaternion coefficients.
/// Well defined on the boundary and band-limited to `degree` in `t`.
#[derive(Clone, Debug)]
pub struct RandomPolynomial {
    terms: Vec<([u32; 4], Quaternion)>,
}

impl RandomPolynomial {
    pub fn new(degree: u32, seed: u64) -> Self {
        let mut r = rng(seed);
        let mut exps = Vec::new();
        for a in 0..=degree {
            for b in 0..=degree - a {
                for c in 0..=degree - a - b {
                    for d in 0..=degree - a - b - c {
                        exps.push([a, b, c, d]);
                    }
                }
            }
        }
        let scale = 1.0 / (exps.len() as f64).sqrt();
        let terms = exps.into_iter().map(|e| (e, gaussian_quaternion(&mut r) * scale)).collect();
        Self { terms }
    }

    pub fn eval(&self, q: Quaternion) -> Quaternion {
        let c = q.components();
        crate::sum::qsum(self.terms.iter().map(|(e, coeff)| {
            let m: f64 = (0..4).map(|i| c[i].powi(e[i] as i32)).product();
            *coeff * m
        }))
    }

    /// Samples on every grid point. With `q = cos t + J sin t` each node
    /// contributes `Σ_{a,d} cos^a t sin^d t D_{a,d}(J)`, where `D_{a,d}` gathers
    /// the monomials of degree `d` in `J`. Antipodal nodes give identical
    /// values bit for bit.
    pub fn sample(&self, grid: Arc<BoundaryGrid>) -> SampledFunction {
        let degree = self.terms.iter().map(|(e, _)| e.iter().sum::<u32>()).max().unwrap_or(0) as usize;
        let n_t = grid.n_t();
        let circle = grid.circle();
        let width = degree + 1;
        // cos^a t_k sin^d t_k, shared by every node
        let powers: Vec<f64> = (0..n_t)
            .flat_map(|k| {
                let (c, s) = (circle.cos_at(k), circle.sin_at(k));
                (0..width * width).map(move |idx| c.powi((idx / width) as i32) * s.powi((idx % width) as i32))
            })
            .collect();
        let used: Vec<usize> = (0..width * width).filter(|idx| idx / width + idx % width <= degree).collect();
        let mut values = vec![Quaternion::ZERO; grid.len()];
        values.par_chunks_mut(n_t).zip(grid.sphere().nodes().par_iter()).for_each(|(row, j)| {
            let jc = [j.x(), j.y(), j.z()];
            let mut table = vec![Quaternion::ZERO; width * width];
            for (e, coeff) in &self.terms {
                let d = (e[1] + e[2] + e[3]) as usize;
                let m: f64 = (0..3).map(|i| jc[i].powi(e[i + 1] as i32)).product();
                table[e[0] as usize * width + d] += *coeff * m;
            }
            for (k, out) in row.iter_mut().enumerate() {
                let pw = &powers[k * width * width..(k + 1) * width * width];
                let mut acc = Quaternion::ZERO;
                for &idx in &used {
                    acc += table[idx] * pw[idx];
                }
                *out = acc;
            }
        });
        SampledFunction::from_values(grid, values).expect("row per node")
    }
}

/// `a(t) = Σ_{n=0}^{band} cos(nt) α_n`, `b(t) = Σ_{n=1}^{band} sin(nt) β_n`.
#[derive(Clone, Debug)]
pub struct RandomSlice {
    alpha: Vec<Quaternion>,
    beta: Vec<Quaternion>,
}

impl RandomSlice {
    pub fn new(band: usize, seed: u64) -> Self {
        let mut r = rng(seed);
        let alpha = (0..=band).map(|_| gaussian_quaternion(&mut r)).collect();
        let beta = (0..=band).map(|n| if n == 0 { Quaternion::ZERO } else { gaussian_quaternion(&mut r) }).collect();
        Self { alpha, beta }
    }

    pub fn a(&self, t: f64) -> Quaternion {
        crate::sum::qsum(self.alpha.iter().enumerate().map(|(n, c)| *c * (n as f64 * t).cos()))
    }

    pub fn b(&self, t: f64) -> Quaternion {
        crate::sum::qsum(self.beta.iter().enumerate().map(|(n, c)| *c * (n as f64 * t).sin()))
    }

    pub fn to_slice_function(&self, circle: &CircleGrid) -> SliceFunction {
        // sample through the reflection-exact tables so the symmetry is exact
        let n = circle.len();
        let mut a = vec![Quaternion::ZERO; n];
        let mut b = vec![Quaternion::ZERO; n];
        for k in 0..=n / 2 {
            let t = circle.node(k);
            a[k] = self.a(t);
            b[k] = self.b(t);
        }
        b[0] = Quaternion::ZERO;
        b[n / 2] = Quaternion::ZERO;
        for k in 1..n / 2 {
            a[n - k] = a[k];
            b[n - k] = -b[k];
        }
        SliceFunction::new(a, b).expect("valid circle")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::validate_well_defined;

    #[test]
    fn polynomial_is_well_defined_and_seeded() {
        let grid = Arc::new(BoundaryGrid::standard(6, 12, 16).unwrap());
        let f = RandomPolynomial::new(3, 9).sample(grid.clone());
        let g = RandomPolynomial::new(3, 9).sample(grid.clone());
        assert_eq!(f.values(), g.values());
        assert_eq!(validate_well_defined(&f).unwrap().defect, 0.0);
        assert!(f.max_abs() > 0.1);
        let p = RandomPolynomial::new(3, 9);
        let direct = SampledFunction::from_point_fn(grid, |q| p.eval(q));
        assert!(f.sub(&direct).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn random_slice_is_symmetric() {
        let circle = CircleGrid::new(32).unwrap();
        let f = RandomSlice::new(6, 2).to_slice_function(&circle);
        assert_eq!(f.symmetry_defect(), 0.0);
        for k in 0..32 {
            assert!((f.a()[k] - RandomSlice::new(6, 2).a(circle.node(k))).norm() < 1e-13);
        }
    }
}
