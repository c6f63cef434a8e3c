//! The orthogonal projection onto slice functions, computed three ways, plus
//! the rotation-averaged operators and the nonnegative-frequency truncation.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::CircleTransform;
use crate::geometry::{BoundaryFunction, BoundaryGrid, SampledFunction};
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::slice::{coeffs_from_spectrum, poisson_unchecked, SliceFunction};
use crate::sum::QuatSum;

const NODE_CHUNK: usize = 64;

/// Π by averaging the per-slice Fourier coefficients over the sphere:
/// `ã(n) = ∫ â_J(n) dσ(J)`, then `Πφ(e^{It}) = Σ_n e^{Int} ã(n)`.
pub fn project_fourier(phi: &SampledFunction) -> SliceFunction {
    let grid = phi.grid();
    let n_t = grid.n_t();
    let tr = CircleTransform::new(n_t);
    let nodes = grid.sphere().nodes();
    let weights = grid.sphere().weights();
    let n_nodes = grid.n_nodes();

    let starts: Vec<usize> = (0..n_nodes).step_by(NODE_CHUNK).collect();
    let partial: Vec<Vec<Quaternion>> = starts
        .par_iter()
        .map(|&start| {
            let mut acc = vec![QuatSum::default(); n_t];
            for node in start..(start + NODE_CHUNK).min(n_nodes) {
                let table = coeffs_from_spectrum(&tr.forward(phi.slice(node)), &nodes[node]);
                for (slot, c) in acc.iter_mut().zip(table.natural_order()) {
                    slot.add(*c * weights[node]);
                }
            }
            acc.into_iter().map(|s| s.value()).collect()
        })
        .collect();
    let mut averaged = vec![QuatSum::default(); n_t];
    for chunk in &partial {
        for (slot, c) in averaged.iter_mut().zip(chunk) {
            slot.add(*c);
        }
    }
    let coeffs: Vec<Quaternion> = averaged.into_iter().map(|s| s.value()).collect();
    let (a, b) = tr.synthesize_real_coeffs(&coeffs);
    SliceFunction::new(a, b).expect("grid circle is valid")
}

/// Π from the boundary kernel: `Πφ(e^{It}) = ∫ (1 - IJ) φ(e^{Jt}) dσ(J)`,
/// returned as `a = ∫ φ dσ`, `b = -∫ J φ dσ`.
pub fn project_boundary(phi: &SampledFunction) -> SliceFunction {
    let (m0, m1) = phi.sphere_moments();
    let b = m1.into_iter().map(|m| -m).collect();
    SliceFunction::new(m0, b).expect("grid circle is valid")
}

/// Which formula computes Π.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Fourier,
    Boundary,
}

pub fn project(phi: &SampledFunction, route: Route) -> SliceFunction {
    match route {
        Route::Fourier => project_fourier(phi),
        Route::Boundary => project_boundary(phi),
    }
}

fn check_radius(r: f64) -> Result<()> {
    if (0.0..1.0).contains(&r) {
        Ok(())
    } else {
        Err(Error::RadiusOutOfRange(r))
    }
}

/// `K(re^{It}, e^{Js}) = ½[P_r(t+s) + P_r(t-s)] + (IJ/2)[P_r(t+s) - P_r(t-s)]`.
pub fn slice_kernel(r: f64, i: &ImaginaryUnit, t: f64, j: &ImaginaryUnit, s: f64) -> Result<Quaternion> {
    check_radius(r)?;
    let plus = poisson_unchecked(r, t + s);
    let minus = poisson_unchecked(r, t - s);
    Ok(Quaternion::real(0.5 * (plus + minus)) + i.as_quaternion() * j.as_quaternion() * (0.5 * (plus - minus)))
}

/// Upper limit on the refined circle used for kernel integrals.
pub const MAX_REFINED_LEN: usize = 1 << 16;

/// Smallest `N·2^m` with `r^{L - N/2} <= 1e-17` (capped at [`MAX_REFINED_LEN`]).
/// Trapezoid sums of `P_r` against a band-limited slice on `L` nodes are
/// exact up to that aliasing term.
pub fn refined_len(n_t: usize, r: f64) -> usize {
    let mut len = n_t;
    if r == 0.0 {
        return len;
    }
    let needed = (1e-17f64).ln() / r.ln();
    while ((len - n_t / 2) as f64) < needed && len < MAX_REFINED_LEN {
        len *= 2;
    }
    len
}

/// Kernel tables on the refined grid: `α_l = ½[P(t+s_l) + P(t-s_l)]/L`, `β_l = ½[P(t+s_l) - P(t-s_l)]/L`.
fn kernel_tables(r: f64, t: f64, len: usize) -> (Vec<f64>, Vec<f64>) {
    let scale = 0.5 / len as f64;
    (0..len)
        .map(|l| {
            let s = std::f64::consts::TAU * l as f64 / len as f64;
            let plus = poisson_unchecked(r, t + s);
            let minus = poisson_unchecked(r, t - s);
            ((plus + minus) * scale, (plus - minus) * scale)
        })
        .unzip()
}

fn weighted_sum(weights: &[f64], values: &[Quaternion]) -> Quaternion {
    let mut acc = QuatSum::default();
    for (w, v) in weights.iter().zip(values) {
        acc.add(*v * *w);
    }
    acc.value()
}

/// Extension of Πφ into the ball at `re^{It}` from the interior kernel:
/// `∫ K(re^{It}, e^{Js}) φ(e^{Js}) dΣ`, kernel on the left.
pub fn project_interior(phi: &SampledFunction, r: f64, axis: &ImaginaryUnit, t: f64) -> Result<Quaternion> {
    Ok(project_interior_many(phi, r, &[(*axis, t)])?[0])
}

/// [`project_interior`] at several points sharing one radius. Each slice is
/// refined once by trigonometric interpolation and reused for every point.
pub fn project_interior_many(phi: &SampledFunction, r: f64, points: &[(ImaginaryUnit, f64)]) -> Result<Vec<Quaternion>> {
    check_radius(r)?;
    let grid = phi.grid();
    let n_t = grid.n_t();
    let len = refined_len(n_t, r);
    let coarse = CircleTransform::new(n_t);
    let fine = CircleTransform::new(len);
    let tables: Vec<(Vec<f64>, Vec<f64>)> = points.iter().map(|(_, t)| kernel_tables(r, *t, len)).collect();
    let nodes = grid.sphere().nodes();

    let per_node: Vec<Vec<Quaternion>> = (0..grid.n_nodes())
        .into_par_iter()
        .map(|node| {
            let refined = coarse.upsample(phi.slice(node), &fine);
            let j = nodes[node].as_quaternion();
            points
                .iter()
                .zip(&tables)
                .map(|((i, _), (alpha, beta))| {
                    weighted_sum(alpha, &refined) + i.as_quaternion() * j * weighted_sum(beta, &refined)
                })
                .collect()
        })
        .collect();

    let weights = grid.sphere().weights();
    Ok((0..points.len())
        .map(|p| {
            let mut acc = QuatSum::default();
            for (vals, &w) in per_node.iter().zip(weights) {
                acc.add(vals[p] * w);
            }
            acc.value()
        })
        .collect())
}

/// `(A, B)` with `Πφ(re^{It}) = A(r,t) + I B(r,t)`:
/// `A = ∫ ½[P_r(t+s) + P_r(t-s)] m0(s) ds/2π`, `B = ∫ ½[P_r(t+s) - P_r(t-s)] m1(s) ds/2π`,
/// where `m0 = ∫ φ dσ` and `m1 = ∫ J φ dσ`.
pub fn corollary_ab(phi: &SampledFunction, r: f64, t: f64) -> Result<(Quaternion, Quaternion)> {
    Ok(corollary_ab_many(phi, r, &[t])?[0])
}

/// [`corollary_ab`] at several angles, sharing the moments and their refinement.
pub fn corollary_ab_many(phi: &SampledFunction, r: f64, ts: &[f64]) -> Result<Vec<(Quaternion, Quaternion)>> {
    check_radius(r)?;
    let n_t = phi.grid().n_t();
    let len = refined_len(n_t, r);
    let coarse = CircleTransform::new(n_t);
    let fine = CircleTransform::new(len);
    let (m0, m1) = phi.sphere_moments();
    let (m0, m1) = (coarse.upsample(&m0, &fine), coarse.upsample(&m1, &fine));
    Ok(ts
        .par_iter()
        .map(|&t| {
            let (alpha, beta) = kernel_tables(r, t, len);
            (weighted_sum(&alpha, &m0), weighted_sum(&beta, &m1))
        })
        .collect())
}

/// Both sides of `∫ |Πφ(e^{It})|² dσ(I) = |∫ φ dσ|² + |∫ J φ dσ|²` at angle `t`.
/// The left side projects through the Fourier route and integrates over the
/// sphere rule; the right side uses the moments. Off-grid angles are reached
/// through trigonometric interpolation.
pub fn energy_identity(phi: &SampledFunction, t: f64) -> (f64, f64) {
    energy_identity_many(phi, &[t])[0]
}

/// [`energy_identity`] at several angles, projecting once.
pub fn energy_identity_many(phi: &SampledFunction, ts: &[f64]) -> Vec<(f64, f64)> {
    let grid = phi.grid();
    let tr = CircleTransform::new(grid.n_t());
    let proj = project_fourier(phi);
    let (sa, sb) = (tr.forward(proj.a()), tr.forward(proj.b()));
    let (m0, m1) = phi.sphere_moments();
    let (s0, s1) = (tr.forward(&m0), tr.forward(&m1));
    ts.iter()
        .map(|&t| {
            let a = CircleTransform::interpolate(&sa, t);
            let b = CircleTransform::interpolate(&sb, t);
            let lhs = grid.sphere().integrate_real(|i| (a + i.as_quaternion() * b).norm_sqr());
            let m0 = CircleTransform::interpolate(&s0, t);
            let m1 = CircleTransform::interpolate(&s1, t);
            (lhs, m0.norm_sqr() + m1.norm_sqr())
        })
        .collect()
}

/// `t ↦ ∫ φ(e^{Jt}) dσ(J)`, the rotation average of φ.
pub fn project_sphere_mean(phi: &SampledFunction) -> Vec<Quaternion> {
    phi.sphere_moments().0
}

/// A function of `t` alone, viewed as a sampled function on `grid`.
pub fn lift_t_function(grid: Arc<BoundaryGrid>, values: &[Quaternion]) -> Result<SampledFunction> {
    if values.len() != grid.n_t() {
        return Err(Error::GridMismatch);
    }
    let all = (0..grid.len()).map(|idx| values[idx % grid.n_t()]).collect();
    SampledFunction::from_values(grid, all)
}

/// `n` unit quaternions distributed uniformly on the 3-sphere. Sample `k`
/// comes from its own stream of the seeded generator, so the set does not
/// depend on evaluation order.
pub fn haar_samples(n: usize, seed: u64) -> Vec<Quaternion> {
    (0..n)
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            loop {
                let q = crate::testfns::gaussian_quaternion(&mut rng);
                let norm = q.norm();
                if norm > 1e-6 {
                    break q / norm;
                }
            }
        })
        .collect()
}

fn check_samples(n_samples: usize) -> Result<()> {
    if n_samples < 1 {
        Err(Error::InvalidArgument("n_samples must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `(1/n) Σ_u u* φ(e^{(uIu*)t}) u` at one point.
fn covariant_average<F: BoundaryFunction + ?Sized>(f: &F, rotations: &[Quaternion], axis: &ImaginaryUnit, t: f64) -> Quaternion {
    let mut acc = QuatSum::default();
    for u in rotations {
        acc.add(u.conj() * f.value(&axis.rotated(*u), t) * *u);
    }
    acc.value() / rotations.len() as f64
}

/// Monte Carlo estimate of the covariant average
/// `∫ R⁻¹ φ(e^{R(I)t}) dh(R)` on every node of `grid`, with rotations
/// `R(I) = uIu*` acting on values by `v ↦ u* v u`. φ is evaluated off the
/// grid, so it is given as a function rather than as samples.
pub fn project_covariant<F: BoundaryFunction + ?Sized>(
    f: &F,
    grid: Arc<BoundaryGrid>,
    n_samples: usize,
    seed: u64,
) -> Result<SampledFunction> {
    check_samples(n_samples)?;
    let rotations = haar_samples(n_samples, seed);
    let n_t = grid.n_t();
    let values = (0..grid.len())
        .into_par_iter()
        .map(|idx| covariant_average(f, &rotations, &grid.sphere().nodes()[idx / n_t], grid.circle().node(idx % n_t)))
        .collect();
    SampledFunction::from_values(grid, values)
}

/// Covariant average at a single point.
pub fn project_covariant_at<F: BoundaryFunction + ?Sized>(
    f: &F,
    axis: &ImaginaryUnit,
    t: f64,
    n_samples: usize,
    seed: u64,
) -> Result<Quaternion> {
    check_samples(n_samples)?;
    Ok(covariant_average(f, &haar_samples(n_samples, seed), axis, t))
}

/// Estimated covariance defect `|Π′φ(e^{R(I)t}) - R Π′φ(e^{It})|` for the
/// rotation of `v`, with the standard error of the paired per-sample differences.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovarianceCheck {
    pub defect: f64,
    pub std_error: f64,
}

pub fn covariance_defect<F: BoundaryFunction + ?Sized>(
    f: &F,
    axis: &ImaginaryUnit,
    t: f64,
    v: Quaternion,
    n_samples: usize,
    seed: u64,
) -> Result<CovarianceCheck> {
    if n_samples < 2 {
        return Err(Error::InvalidArgument("covariance check needs at least 2 samples".into()));
    }
    let v = v / v.norm();
    let rotated = axis.rotated(v);
    let diffs: Vec<Quaternion> = haar_samples(n_samples, seed)
        .iter()
        .map(|u| {
            let left = u.conj() * f.value(&rotated.rotated(*u), t) * *u;
            let right = v * u.conj() * f.value(&axis.rotated(*u), t) * *u * v.conj();
            left - right
        })
        .collect();
    let n = n_samples as f64;
    let mean = crate::sum::qsum(diffs.iter().copied()) / n;
    let spread = crate::sum::fsum(diffs.iter().map(|d| (*d - mean).norm_sqr()));
    Ok(CovarianceCheck { defect: mean.norm(), std_error: (spread / (n * (n - 1.0))).sqrt() })
}

/// Per slice, keeps the coefficients of `e^{Int}` with `n >= 0`:
/// `Σ_{n=0}^{N/2-1} e^{Int} â_I(n)`.
pub fn truncate_nonneg(phi: &SampledFunction) -> SampledFunction {
    let grid = phi.grid().clone();
    let n_t = grid.n_t();
    let tr = CircleTransform::new(n_t);
    let rows: Vec<Vec<Quaternion>> = (0..grid.n_nodes())
        .into_par_iter()
        .map(|node| {
            let mut spectrum = tr.forward(phi.slice(node));
            for comp in spectrum.comps.iter_mut() {
                for c in comp[n_t / 2..].iter_mut() {
                    *c = Default::default();
                }
            }
            // per component Σ_{n>=0} e^{int} X_n = P + iQ; the slice value is P + I Q
            let (p, q) = tr.synthesize(&spectrum);
            let i = grid.sphere().nodes()[node].as_quaternion();
            p.iter().zip(&q).map(|(p, q)| *p + i * *q).collect()
        })
        .collect();
    SampledFunction::from_values(grid, rows.concat()).expect("same grid")
}
