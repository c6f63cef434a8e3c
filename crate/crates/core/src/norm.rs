//! L^p norms on the boundary, the closed-form constants bounding the
//! operator norm of Π, the extremal function at p = ∞, and a lower-bound
//! search for finite p.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{BoundaryGrid, SampledFunction, SphereRule};
use crate::projection::project_boundary;
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::slice::SliceFunction;
use crate::sum::{fsum, Compensated, QuatSum};
use crate::testfns::RandomPolynomial;

fn check_exponent(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponent(format!("p = {p}, need p >= 1")))
    }
}

/// `1/p + 1/q = 1`, with `1 ↔ ∞`.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// `(∫ |φ|^p dΣ)^{1/p}`; for `p = ∞` the largest modulus on the grid.
pub fn lp_norm(phi: &SampledFunction, p: f64) -> Result<f64> {
    check_exponent(p)?;
    if p.is_infinite() {
        return Ok(phi.max_abs());
    }
    let grid = phi.grid();
    Ok(weighted_power_sum(grid, |node, k| phi.at(node, k).norm(), p).powf(1.0 / p))
}

/// `∫ g^p dΣ` for a nonnegative sample function `g(node, k)`.
fn weighted_power_sum(grid: &BoundaryGrid, g: impl Fn(usize, usize) -> f64 + Sync, p: f64) -> f64 {
    let n_t = grid.n_t();
    let per_node: Vec<f64> = (0..grid.n_nodes())
        .into_par_iter()
        .map(|node| fsum((0..n_t).map(|k| pow(g(node, k), p))) / n_t as f64)
        .collect();
    let mut acc = Compensated::default();
    for (v, w) in per_node.iter().zip(grid.sphere().weights()) {
        acc.add(v * w);
    }
    acc.value()
}

#[inline]
fn pow(x: f64, p: f64) -> f64 {
    if p == 2.0 {
        x * x
    } else {
        x.powf(p)
    }
}

/// L^p norm of a slice function over `grid`. At `p = ∞` the supremum over
/// imaginary units is taken exactly at each circle node.
pub fn slice_lp_norm(f: &SliceFunction, grid: &Arc<BoundaryGrid>, p: f64) -> Result<f64> {
    check_exponent(p)?;
    if f.n_t() != grid.n_t() {
        return Err(Error::GridMismatch);
    }
    if p.is_infinite() {
        return Ok((0..f.n_t()).map(|k| f.sup_over_units_at(k)).fold(0.0, f64::max));
    }
    let nodes = grid.sphere().nodes();
    Ok(weighted_power_sum(grid, |node, k| f.at_node(&nodes[node], k).norm(), p).powf(1.0 / p))
}

/// `⟨f, g⟩ = ∫ conj(g) f dΣ`.
pub fn inner_product(f: &SampledFunction, g: &SampledFunction) -> Result<Quaternion> {
    f.check_same_grid(g)?;
    let grid = f.grid();
    let n_t = grid.n_t();
    let per_node: Vec<Quaternion> = (0..grid.n_nodes())
        .into_par_iter()
        .map(|node| {
            let mut acc = QuatSum::default();
            for (a, b) in f.slice(node).iter().zip(g.slice(node)) {
                acc.add(b.conj() * *a);
            }
            acc.value() / n_t as f64
        })
        .collect();
    let mut acc = QuatSum::default();
    for (v, w) in per_node.iter().zip(grid.sphere().weights()) {
        acc.add(*v * *w);
    }
    Ok(acc.value())
}

/// `∫ |1 - IJ|^q dσ(J) = 2^{q+1}/(q+2)`, the same for every `I`.
pub fn sphere_moment(q_exp: f64) -> Result<f64> {
    if !(q_exp >= 0.0) {
        return Err(Error::InvalidExponent(format!("moment exponent {q_exp} must be >= 0")));
    }
    Ok(2f64.powf(q_exp + 1.0) / (q_exp + 2.0))
}

/// Polar grading order of [`moment_rule`].
pub const MOMENT_GRADING: u32 = 4;

/// Product rule for `J ↦ |1 - IJ|^q`: pole at `I`, polar nodes graded toward
/// the zero of the integrand at `J = -I`.
pub fn moment_rule(axis: &ImaginaryUnit, n_polar: usize, n_azimuth: usize) -> Result<SphereRule> {
    SphereRule::graded(n_polar, n_azimuth, MOMENT_GRADING, *axis)
}

/// `∫ |1 - IJ|^q dσ(J)` by quadrature with a given sphere rule.
pub fn sphere_moment_with(rule: &SphereRule, axis: &ImaginaryUnit, q_exp: f64) -> f64 {
    let i = axis.as_quaternion();
    rule.integrate_real(|j| (Quaternion::ONE - i * j.as_quaternion()).norm().powf(q_exp))
}

/// `∫ |1 - IJ|^q dσ(J)` with [`moment_rule`] at the given sizes.
pub fn sphere_moment_quadrature(q_exp: f64, axis: &ImaginaryUnit, n_polar: usize, n_azimuth: usize) -> Result<f64> {
    sphere_moment(q_exp)?;
    Ok(sphere_moment_with(&moment_rule(axis, n_polar, n_azimuth)?, axis, q_exp))
}

/// `2((2p-2)/(3p-2))^{(p-1)/p}` for `p >= 2`, and the value at the conjugate
/// exponent for `1 <= p < 2`. Equals `sphere_moment(q)^{1/q}` with `q` conjugate to the larger exponent.
pub fn upper_bound_constant(p: f64) -> Result<f64> {
    check_exponent(p)?;
    let p = if p < 2.0 { conjugate_exponent(p) } else { p };
    if p.is_infinite() {
        return Ok(4.0 / 3.0);
    }
    Ok(2.0 * ((2.0 * p - 2.0) / (3.0 * p - 2.0)).powf((p - 1.0) / p))
}

/// `φ*(e^{Js}) = |1 - I₀J|(1 - I₀J)^{-1}` read on the canonical representative:
/// axis `J` for `s ∈ (0, π)`, axis `-J` for `s ∈ (π, 2π)`, and 1 at the real points.
pub fn extremal_function(i0: &ImaginaryUnit, grid: Arc<BoundaryGrid>) -> Result<SampledFunction> {
    let i0q = i0.as_quaternion();
    let g = |j: Quaternion| -> Quaternion {
        let d = Quaternion::ONE - i0q * j;
        // |d| d^{-1} = conj(d)/|d|
        d.conj() / d.norm()
    };
    let circle = grid.circle().clone();
    let n_t = grid.n_t();
    let nodes = grid.sphere().nodes();
    let mut values = Vec::with_capacity(grid.len());
    for j in nodes {
        let jq = j.as_quaternion();
        if (Quaternion::ONE - i0q * jq).norm() < crate::quaternion::ZERO_DIVISOR_EPS {
            return Err(Error::ZeroDivisor(format!("1 - I0 J at J = {jq}")));
        }
        for k in 0..n_t {
            let s = circle.sin_at(k);
            values.push(if s > 0.0 {
                g(jq)
            } else if s < 0.0 {
                g(-jq)
            } else {
                Quaternion::ONE
            });
        }
    }
    SampledFunction::from_values(grid, values)
}

/// `‖Πφ‖_p / ‖φ‖_p`, Π by the boundary route and evaluated on φ's grid
/// (exact supremum over imaginary units when `p = ∞`).
pub fn ratio(phi: &SampledFunction, p: f64) -> Result<f64> {
    ratio_with(phi, &project_boundary(phi), p)
}

/// [`ratio`] with the projection already at hand.
fn ratio_with(phi: &SampledFunction, proj: &SliceFunction, p: f64) -> Result<f64> {
    let denom = lp_norm(phi, p)?;
    if denom == 0.0 {
        return Err(Error::ZeroInput("ratio of a zero function"));
    }
    Ok(slice_lp_norm(proj, phi.grid(), p)? / denom)
}

/// Result of [`norm_lower_bound_search`].
#[derive(Clone, Debug, Serialize)]
pub struct NormReport {
    #[serde(serialize_with = "serialize_exponent")]
    pub p: f64,
    #[serde(serialize_with = "serialize_exponent")]
    pub q: f64,
    pub upper_bound: f64,
    pub lower_bound: f64,
    /// Running best ratio after each iteration, restarts concatenated in order.
    pub iterations: Vec<f64>,
    #[serde(skip)]
    pub witness: SampledFunction,
}

pub fn serialize_exponent<S: Serializer>(p: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if p.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*p)
    }
}

/// Budget and grid of a lower-bound search.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub restarts: usize,
    pub iters: usize,
    pub seed: u64,
    /// Polynomial degree of the random starting functions.
    pub start_degree: u32,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { restarts: 2, iters: 20, seed: 0, start_degree: 3 }
    }
}

fn normalized(phi: &SampledFunction, p: f64) -> Option<SampledFunction> {
    let n = lp_norm(phi, p).ok()?;
    (n > 0.0 && n.is_finite()).then(|| phi.map(|v| v / n))
}

/// `m^e`, with the exponents the search actually uses spelled out.
#[inline]
fn pow_fast(m: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else if e == 2.0 {
        m * m
    } else {
        m.powf(e)
    }
}

/// One sweep of the grid for the slice function `g`: returns `Π(g|g|^e)` and
/// `∫ |g|^{e+2} dΣ`. Π acts on each circle fiber separately, so the
/// evaluation, duality map and sphere moments share a single pass.
fn dual_project(g: &SliceFunction, grid: &BoundaryGrid, e: f64) -> (SliceFunction, f64) {
    const BLOCK: usize = 16;
    let n_t = grid.n_t();
    let rule = grid.sphere();
    let blocks: Vec<(Vec<Quaternion>, Vec<Quaternion>, f64)> = (0..n_t)
        .step_by(BLOCK)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|start| {
            let end = (start + BLOCK).min(n_t);
            let mut m0 = vec![Quaternion::ZERO; end - start];
            let mut m1 = vec![Quaternion::ZERO; end - start];
            let mut power = Compensated::default();
            for (j, &w) in rule.nodes().iter().zip(rule.weights()) {
                let jq = j.as_quaternion();
                let mut row_power = 0.0;
                for k in start..end {
                    let x = g.at_node(j, k);
                    let m = x.norm();
                    if m == 0.0 {
                        continue;
                    }
                    let scale = pow_fast(m, e);
                    row_power += scale * m * m;
                    let y = x * (scale * w);
                    m0[k - start] += y;
                    m1[k - start] += jq * y;
                }
                power.add(row_power * w);
            }
            (m0, m1, power.value())
        })
        .collect();
    let mut a = Vec::with_capacity(n_t);
    let mut b = Vec::with_capacity(n_t);
    let mut power = Compensated::default();
    for (m0, m1, pw) in blocks {
        a.extend(m0);
        b.extend(m1.into_iter().map(|m| -m));
        power.add(pw);
    }
    (SliceFunction::new(a, b).expect("grid circle is valid"), power.value() / n_t as f64)
}

/// `c · v|v|^{q-2}` on the grid.
fn materialize(v: &SliceFunction, c: f64, q: f64, grid: &Arc<BoundaryGrid>) -> Result<SampledFunction> {
    Ok(v.sample(grid.clone())?.map(|x| {
        let m = x.norm();
        if m == 0.0 {
            Quaternion::ZERO
        } else {
            x * (c * pow_fast(m, q - 2.0))
        }
    }))
}

struct RestartOutcome {
    trace: Vec<f64>,
    witness: SampledFunction,
    certified: f64,
}

fn run_restart(grid: &Arc<BoundaryGrid>, p: f64, q: f64, iters: usize, degree: u32, seed: u64) -> Result<RestartOutcome> {
    // resample until the start has a nonzero projection
    let mut attempt = 0u64;
    let (start, proj) = loop {
        let start = RandomPolynomial::new(degree, seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(attempt))
            .sample(grid.clone());
        if let Some(start) = normalized(&start, p) {
            let proj = project_boundary(&start);
            if slice_lp_norm(&proj, grid, p)? > 1e-12 {
                break (start, proj);
            }
        }
        attempt += 1;
        if attempt > 64 {
            return Err(Error::ZeroInput("no starting function with a nonzero projection"));
        }
    };
    let mut best = ratio_with(&start, &proj, p)?;
    let mut trace = vec![best];
    // the current iterate is φ = c·v|v|^{q-2} with ‖φ‖_p = 1, and u = Πφ
    let mut best_iterate: Option<(SliceFunction, f64)> = None;
    let (mut v, _) = dual_project(&proj, grid, p - 2.0);
    for _ in 0..iters {
        let (u_raw, v_power) = dual_project(&v, grid, q - 2.0);
        if !(v_power > 0.0 && v_power.is_finite()) {
            break;
        }
        let c = v_power.powf(-1.0 / p);
        let u = u_raw.right_mul(Quaternion::real(c));
        let (v_next, u_power) = dual_project(&u, grid, p - 2.0);
        let r = u_power.powf(1.0 / p);
        if r > best {
            best = r;
            best_iterate = Some((v.clone(), c));
        }
        trace.push(best);
        v = v_next;
    }
    let witness = match best_iterate {
        Some((v, c)) => materialize(&v, c, q, grid)?,
        None => start,
    };
    let certified = ratio(&witness, p)?;
    Ok(RestartOutcome { trace, witness, certified })
}

/// Lower bound for `‖Π‖_{p,p}` by nonlinear power iteration
/// `u = Πφ, v = Π(u|u|^{p-2}), φ ← v|v|^{q-2}/‖·‖_p` from seeded random
/// starts. Every recorded value is the ratio of an actual function.
pub fn norm_lower_bound_search(p: f64, grid: Arc<BoundaryGrid>, config: &SearchConfig) -> Result<NormReport> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidExponent(format!(
            "search needs 1 < p < inf, got {p}; use the extremal function for p = inf and duality for p = 1"
        )));
    }
    if config.restarts == 0 {
        return Err(Error::InvalidArgument("at least one restart is required".into()));
    }
    let q = conjugate_exponent(p);
    let outcomes: Vec<RestartOutcome> = (0..config.restarts)
        .into_par_iter()
        .map(|r| run_restart(&grid, p, q, config.iters, config.start_degree, config.seed.wrapping_add(r as u64)))
        .collect::<Result<_>>()?;

    let mut running = f64::NEG_INFINITY;
    let mut iterations = Vec::new();
    let mut chosen: Option<RestartOutcome> = None;
    for outcome in outcomes {
        for r in &outcome.trace {
            running = running.max(*r);
            iterations.push(running);
        }
        if chosen.as_ref().is_none_or(|c| outcome.certified > c.certified) {
            chosen = Some(outcome);
        }
    }
    let chosen = chosen.expect("at least one restart");
    Ok(NormReport {
        p,
        q,
        upper_bound: upper_bound_constant(p)?,
        lower_bound: chosen.certified,
        iterations,
        witness: chosen.witness,
    })
}

/// `|lower_p - lower_q|` for reports at conjugate exponents.
pub fn duality_gap(p: f64, report_p: &NormReport, report_q: &NormReport) -> Result<f64> {
    if p == 1.0 || p.is_infinite() {
        return Err(Error::InvalidExponent("duality gap is defined for 1 < p < inf only".into()));
    }
    if report_p.p != p || (1.0 / report_p.p + 1.0 / report_q.p - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidExponent(format!(
            "reports at p = {} and q = {} are not conjugate to p = {p}",
            report_p.p, report_q.p
        )));
    }
    Ok((report_p.lower_bound - report_q.lower_bound).abs())
}
