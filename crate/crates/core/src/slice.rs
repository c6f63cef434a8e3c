//! Slice functions `f(e^{Jt}) = a(t) + J b(t)`: construction from one slice,
//! the slice defect of sampled functions, per-slice Fourier coefficients and
//! the Poisson extension into the ball.

use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{CircleTransform, QuatSpectrum};
use crate::geometry::{BoundaryFunction, BoundaryGrid, CircleGrid, SampledFunction};
use crate::quaternion::{ImaginaryUnit, Quaternion};

/// Circle samples of `a` and `b`, evaluated as `a(t) + J b(t)` on the slice of `J`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceFunction {
    a: Vec<Quaternion>,
    b: Vec<Quaternion>,
}

impl SliceFunction {
    pub fn new(a: Vec<Quaternion>, b: Vec<Quaternion>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidArgument(format!("a has {} samples, b has {}", a.len(), b.len())));
        }
        CircleGrid::new(a.len())?;
        Ok(Self { a, b })
    }

    /// Samples `a` and `b` on `circle`.
    pub fn from_fns(circle: &CircleGrid, a: impl Fn(f64) -> Quaternion, b: impl Fn(f64) -> Quaternion) -> Self {
        Self { a: circle.nodes().map(a).collect(), b: circle.nodes().map(b).collect() }
    }

    pub fn constant(n_t: usize, q: Quaternion) -> Result<Self> {
        Self::new(vec![q; n_t], vec![Quaternion::ZERO; n_t])
    }

    pub fn n_t(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Quaternion] {
        &self.a
    }

    pub fn b(&self) -> &[Quaternion] {
        &self.b
    }

    /// `a(t_k) + J b(t_k)`.
    #[inline]
    pub fn at_node(&self, axis: &ImaginaryUnit, k: usize) -> Quaternion {
        self.a[k] + axis.as_quaternion() * self.b[k]
    }

    /// Value at an arbitrary angle through the trigonometric interpolants of `a` and `b`.
    pub fn eval(&self, axis: &ImaginaryUnit, t: f64) -> Quaternion {
        let tr = CircleTransform::new(self.n_t());
        let a = CircleTransform::interpolate(&tr.forward(&self.a), t);
        let b = CircleTransform::interpolate(&tr.forward(&self.b), t);
        a + axis.as_quaternion() * b
    }

    /// Samples on the slice of `axis`.
    pub fn restrict(&self, axis: &ImaginaryUnit) -> Vec<Quaternion> {
        (0..self.n_t()).map(|k| self.at_node(axis, k)).collect()
    }

    /// Evaluation on every node of a boundary grid with the same circle size.
    pub fn sample(&self, grid: Arc<BoundaryGrid>) -> Result<SampledFunction> {
        if grid.n_t() != self.n_t() {
            return Err(Error::GridMismatch);
        }
        let n_t = self.n_t();
        let values = (0..grid.len())
            .into_par_iter()
            .map(|idx| self.at_node(&grid.sphere().nodes()[idx / n_t], idx % n_t))
            .collect();
        SampledFunction::from_values(grid, values)
    }

    /// `max(|a(2π-t) - a(t)|, |b(2π-t) + b(t)|)`: zero when `(a, b)` describes a
    /// function on the boundary rather than on its double cover.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.n_t();
        (0..n)
            .map(|k| {
                let r = (n - k) % n;
                (self.a[r] - self.a[k]).norm().max((self.b[r] + self.b[k]).norm())
            })
            .fold(0.0, f64::max)
    }

    /// Coefficients of `f(e^{It}) = Σ e^{Int} (c_n + I d_n)`; `d_n` vanishes
    /// when the symmetry defect does, leaving `c_n` independent of `I`.
    pub fn coefficients(&self) -> (FourierTable, FourierTable) {
        let tr = CircleTransform::new(self.n_t());
        let sa = tr.forward(&self.a);
        let sb = tr.forward(&self.b);
        let n = self.n_t() as i64;
        let mut c = Vec::with_capacity(self.n_t());
        let mut d = Vec::with_capacity(self.n_t());
        for m in 0..n {
            c.push(sa.cos_coeff(m) + sb.sin_coeff(m));
            d.push(sb.cos_coeff(m) - sa.sin_coeff(m));
        }
        (FourierTable { coeffs: c }, FourierTable { coeffs: d })
    }

    /// `sup_{I ∈ S} |a(t_k) + I b(t_k)|`, in closed form:
    /// `|a + Ib|^2 = |a|^2 + |b|^2 - 2<I, Im(b conj(a))>`.
    pub fn sup_over_units_at(&self, k: usize) -> f64 {
        let (a, b) = (self.a[k], self.b[k]);
        let cross = (b * a.conj()).imag().norm();
        (a.norm_sqr() + b.norm_sqr() + 2.0 * cross).sqrt()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n_t() != other.n_t() {
            return Err(Error::GridMismatch);
        }
        let a = self.a.iter().zip(&other.a).map(|(x, y)| *x + *y).collect();
        let b = self.b.iter().zip(&other.b).map(|(x, y)| *x + *y).collect();
        Ok(Self { a, b })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.right_mul(-Quaternion::ONE))
    }

    pub fn right_mul(&self, q: Quaternion) -> Self {
        Self { a: self.a.iter().map(|v| *v * q).collect(), b: self.b.iter().map(|v| *v * q).collect() }
    }
}

impl BoundaryFunction for SliceFunction {
    fn value(&self, axis: &ImaginaryUnit, t: f64) -> Quaternion {
        self.eval(axis, t)
    }
}

/// Coefficients indexed by frequency in natural FFT order: entry `m` holds
/// frequency `m` for `m < N/2` and `m - N` otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierTable {
    coeffs: Vec<Quaternion>,
}

impl FourierTable {
    pub fn from_natural_order(coeffs: Vec<Quaternion>) -> Self {
        Self { coeffs }
    }

    pub fn n_t(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of frequency `n`, for `n` in `[-N/2, N/2)`.
    pub fn get(&self, n: i64) -> Quaternion {
        let len = self.coeffs.len() as i64;
        assert!(n >= -len / 2 && n < len / 2, "frequency {n} outside the band");
        self.coeffs[n.rem_euclid(len) as usize]
    }

    pub fn natural_order(&self) -> &[Quaternion] {
        &self.coeffs
    }

    /// `(n, coefficient)` pairs with `n` ascending from `-N/2`.
    pub fn iter_band(&self) -> impl Iterator<Item = (i64, Quaternion)> + '_ {
        let half = self.coeffs.len() as i64 / 2;
        (-half..half).map(move |n| (n, self.get(n)))
    }

    /// `Σ_n e^{I n t} â(n)` (exponential on the left).
    pub fn reconstruct(&self, axis: &ImaginaryUnit, t: f64) -> Quaternion {
        crate::sum::qsum(self.iter_band().map(|(n, c)| crate::exp_unit(axis, n as f64 * t) * c))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (*a - *b).norm()).fold(0.0, f64::max)
    }
}

/// Slice function agreeing with `samples` on the slice of `axis`:
/// `a(t) = (f(t) + f(-t))/2`, `b(t) = (I/2)(f(-t) - f(t))`.
pub fn ext_representation(samples: &[Quaternion], axis: &ImaginaryUnit) -> Result<SliceFunction> {
    let n = samples.len();
    CircleGrid::new(n)?;
    let i = axis.as_quaternion();
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for k in 0..n {
        let f = samples[k];
        let f_neg = samples[(n - k) % n];
        a.push((f + f_neg) * 0.5);
        b.push(i * (f_neg - f) * 0.5);
    }
    Ok(SliceFunction { a, b })
}

/// Pivot slices used by [`slice_defect`].
pub const DEFAULT_DEFECT_PIVOTS: usize = 16;

/// Deviation of a sampled function from the representation formula, taken
/// over `DEFAULT_DEFECT_PIVOTS` reference slices. See [`slice_defect_with_pivots`].
pub fn slice_defect(phi: &SampledFunction) -> f64 {
    slice_defect_with_pivots(phi, DEFAULT_DEFECT_PIVOTS)
}

/// `max |φ(e^{Jt}) - ½[φ(e^{It}) + φ(e^{-It})] - (JI/2)[φ(e^{-It}) - φ(e^{It})]|`
/// over every node `J`, every circle node `t`, and `pivots` reference nodes
/// `I` spread evenly over the node list. Zero iff `φ` is a slice function on
/// the grid, whatever the number of pivots.
pub fn slice_defect_with_pivots(phi: &SampledFunction, pivots: usize) -> f64 {
    let m = phi.grid().n_nodes();
    let count = pivots.clamp(1, m);
    let picks: Vec<usize> = (0..count).map(|p| p * m / count).collect();
    defect_over(phi, &picks)
}

/// The defect over all pairs of sphere nodes. Quadratic in the node count.
pub fn slice_defect_exhaustive(phi: &SampledFunction) -> f64 {
    let picks: Vec<usize> = (0..phi.grid().n_nodes()).collect();
    defect_over(phi, &picks)
}

fn defect_over(phi: &SampledFunction, pivots: &[usize]) -> f64 {
    let grid = phi.grid();
    let nodes = grid.sphere().nodes();
    let reps: Vec<SliceFunction> = pivots
        .iter()
        .map(|&p| ext_representation(phi.slice(p), &nodes[p]).expect("grid circle is valid"))
        .collect();
    // one pass over φ: each row is checked against every pivot while it is in cache
    (0..nodes.len())
        .into_par_iter()
        .map(|node| {
            let j = &nodes[node];
            let row = phi.slice(node);
            let mut worst = 0.0f64;
            for rep in &reps {
                for (k, v) in row.iter().enumerate() {
                    // φ(J,t) - a_I(t) - J b_I(t)
                    worst = worst.max((*v - rep.at_node(j, k)).norm_sqr());
                }
            }
            worst
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0, f64::max)
        .sqrt()
}

/// `â(n) = (1/N) Σ_k e^{-nI t_k} f(t_k)` for `n ∈ [-N/2, N/2)`: the exponential
/// multiplies on the left, the coefficient stands on the right.
pub fn fourier_coeffs_slice(samples: &[Quaternion], axis: &ImaginaryUnit) -> FourierTable {
    let tr = CircleTransform::new(samples.len());
    coeffs_from_spectrum(&tr.forward(samples), axis)
}

/// `â(n) = C_n - I S_n` from the componentwise cosine/sine sums.
pub(crate) fn coeffs_from_spectrum(spectrum: &QuatSpectrum, axis: &ImaginaryUnit) -> FourierTable {
    let i = axis.as_quaternion();
    let n = spectrum.len() as i64;
    let coeffs = (0..n).map(|m| spectrum.cos_coeff(m) - i * spectrum.sin_coeff(m)).collect();
    FourierTable { coeffs }
}

fn check_radius(r: f64) -> Result<()> {
    if (0.0..1.0).contains(&r) {
        Ok(())
    } else {
        Err(Error::RadiusOutOfRange(r))
    }
}

/// `P_r(t) = (1 - r^2) / (1 - 2r cos t + r^2)`, for `0 <= r < 1`.
pub fn poisson_kernel(r: f64, t: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(poisson_unchecked(r, t))
}

#[inline]
pub(crate) fn poisson_unchecked(r: f64, t: f64) -> f64 {
    // 1 - 2r cos t + r^2 = (1 - r)^2 + 4r sin^2(t/2), free of cancellation near t = 0
    let s = (0.5 * t).sin();
    (1.0 - r) * (1.0 + r) / ((1.0 - r) * (1.0 - r) + 4.0 * r * s * s)
}

/// `f(r e^{It}) = Σ_n r^{|n|} e^{Int} f̂(n)` over the band `[-N/2, N/2)`.
/// Equivalently the componentwise harmonic extensions `H[a] + I H[b]`.
pub fn poisson_extend(f: &SliceFunction, r: f64, axis: &ImaginaryUnit, t: f64) -> Result<Quaternion> {
    check_radius(r)?;
    let tr = CircleTransform::new(f.n_t());
    let a = harmonic_extension(&tr.forward(f.a()), r, t);
    let b = harmonic_extension(&tr.forward(f.b()), r, t);
    Ok(a + axis.as_quaternion() * b)
}

/// `Re Σ_{n=0}^{N/2} ε_n X_n z^n` with `z = r e^{it}`, `ε = 1, 2, ..., 2, 1`,
/// evaluated by Horner's rule from the highest frequency down.
pub(crate) fn harmonic_extension(spectrum: &QuatSpectrum, r: f64, t: f64) -> Quaternion {
    let n = spectrum.len();
    let half = n / 2;
    let z = Complex64::from_polar(r, t);
    let mut out = [0.0; 4];
    for (c, comp) in spectrum.comps.iter().enumerate() {
        let mut acc = comp[half];
        for m in (1..half).rev() {
            acc = acc * z + comp[m] * 2.0;
        }
        acc = acc * z + comp[0];
        out[c] = acc.re;
    }
    Quaternion::from_components(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exp_unit;
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    fn grid(np: usize, na: usize, nt: usize) -> Arc<BoundaryGrid> {
        Arc::new(BoundaryGrid::standard(np, na, nt).unwrap())
    }

    fn sgn(x: f64) -> f64 {
        if x.abs() < 1e-12 {
            0.0
        } else {
            x.signum()
        }
    }

    fn random_slice(circle: &CircleGrid, seed: u64) -> SliceFunction {
        crate::testfns::RandomSlice::new(5, seed).to_slice_function(circle)
    }

    #[test]
    fn extension_of_exponential() {
        let circle = CircleGrid::new(16).unwrap();
        let i = ImaginaryUnit::I;
        let samples: Vec<_> = circle.nodes().map(|t| exp_unit(&i, t)).collect();
        let f = ext_representation(&samples, &i).unwrap();
        for (k, t) in circle.nodes().enumerate() {
            assert!((f.a()[k] - Quaternion::real(t.cos())).norm() < 1e-15);
            assert!((f.b()[k] - Quaternion::real(t.sin())).norm() < 1e-15);
            let j = ImaginaryUnit::new(0.2, -0.4, 0.9).unwrap();
            assert!((f.at_node(&j, k) - exp_unit(&j, t)).norm() < 1e-15);
        }
    }

    #[test]
    fn extension_of_constant() {
        let q0 = Quaternion::new(1.0, 2.0, -3.0, 0.5);
        let f = ext_representation(&[q0; 8], &ImaginaryUnit::J).unwrap();
        assert!(f.a().iter().all(|a| *a == q0));
        assert!(f.b().iter().all(|b| *b == Quaternion::ZERO));
    }

    #[test]
    fn extension_of_exponential_times_j() {
        // f_i(t) = e^{it} j: a = cos t j, b = sin t j, f(e^{jt}) = cos t j - sin t
        let circle = CircleGrid::new(32).unwrap();
        let i = ImaginaryUnit::I;
        let samples: Vec<_> = circle.nodes().map(|t| exp_unit(&i, t) * Quaternion::J).collect();
        let f = ext_representation(&samples, &i).unwrap();
        for (k, t) in circle.nodes().enumerate() {
            assert!((f.a()[k] - Quaternion::J * t.cos()).norm() < 1e-15);
            assert!((f.b()[k] - Quaternion::J * t.sin()).norm() < 1e-15);
            let expected = Quaternion::J * t.cos() - Quaternion::real(t.sin());
            assert!((f.at_node(&ImaginaryUnit::J, k) - expected).norm() < 1e-15);
        }
    }

    #[test]
    fn defect_of_slice_functions_vanishes() {
        let g = grid(6, 12, 16);
        let f = random_slice(g.circle(), 3).sample(g.clone()).unwrap();
        assert!(slice_defect(&f) < 1e-12);
        assert!(slice_defect_exhaustive(&f) < 1e-12);
        let odd = SampledFunction::sample(g, &|j: &ImaginaryUnit, t: f64| j.as_quaternion() * sgn(t.sin()));
        assert!(slice_defect_exhaustive(&odd) < 1e-12);
    }

    #[test]
    fn defect_of_first_imaginary_coordinate_is_positive() {
        let g = grid(6, 12, 16);
        let f = SampledFunction::from_point_fn(g, |q| Quaternion::real(q.x));
        let pivoted = slice_defect(&f);
        let full = slice_defect_exhaustive(&f);
        assert!(pivoted > 0.1, "{pivoted}");
        assert!(full >= pivoted);
        assert!(full <= 2.0 * pivoted + 1e-12);
    }

    #[test]
    fn single_slice_coefficients() {
        let circle = CircleGrid::new(32).unwrap();
        let i = ImaginaryUnit::new(1.0, 1.0, -1.0).unwrap();
        let q0 = Quaternion::new(0.3, -1.0, 2.0, 0.7);
        let samples: Vec<_> = circle.nodes().map(|t| exp_unit(&i, t) * q0).collect();
        let table = fourier_coeffs_slice(&samples, &i);
        for (n, c) in table.iter_band() {
            let expected = if n == 1 { q0 } else { Quaternion::ZERO };
            assert!((c - expected).norm() < 1e-15, "n={n}");
        }
        let ones = vec![Quaternion::ONE; 32];
        let table = fourier_coeffs_slice(&ones, &i);
        assert!((table.get(0) - Quaternion::ONE).norm() < 1e-15);
    }

    #[test]
    fn left_factor_order() {
        // j e^{-it} = e^{it} j on the slice of i, so â(1) = j
        let circle = CircleGrid::new(16).unwrap();
        let i = ImaginaryUnit::I;
        let samples: Vec<_> = circle.nodes().map(|t| Quaternion::J * exp_unit(&i, -t)).collect();
        let table = fourier_coeffs_slice(&samples, &i);
        assert!((table.get(1) - Quaternion::J).norm() < 1e-15);
        assert!(table.get(-1).norm() < 1e-15);
    }

    #[test]
    fn coefficients_match_direct_sum() {
        let circle = CircleGrid::new(16).unwrap();
        let i = ImaginaryUnit::new(0.1, 0.5, 0.3).unwrap();
        let f = |t: f64| Quaternion::new(t.cos().powi(3), (2.0 * t).sin(), t.sin() * 0.3 + 1.0, (t * 4.0).cos());
        let samples: Vec<_> = circle.nodes().map(f).collect();
        let table = fourier_coeffs_slice(&samples, &i);
        for n in -8i64..8 {
            let direct = crate::sum::qsum(
                circle.nodes().map(|t| exp_unit(&i, -(n as f64) * t) * f(t) / 16.0),
            );
            assert!((table.get(n) - direct).norm() < 1e-14, "n={n}");
        }
        for t in circle.nodes() {
            assert!((table.reconstruct(&i, t) - f(t)).norm() < 1e-13);
        }
    }

    #[test]
    fn slice_coefficients_independent_of_axis() {
        let g = grid(8, 16, 64);
        let f = random_slice(g.circle(), 11).sample(g.clone()).unwrap();
        let nodes = g.sphere().nodes();
        let reference = fourier_coeffs_slice(f.slice(0), &nodes[0]);
        for node in 1..g.n_nodes() {
            let table = fourier_coeffs_slice(f.slice(node), &nodes[node]);
            assert!(table.max_abs_diff(&reference) < 1e-10);
        }
    }

    #[test]
    fn parseval_per_slice() {
        let g = grid(4, 8, 64);
        let f = crate::testfns::RandomPolynomial::new(3, 5).sample(g.clone());
        for node in 0..g.n_nodes() {
            let s = f.slice(node);
            let energy = crate::sum::fsum(s.iter().map(|v| v.norm_sqr())) / 64.0;
            let table = fourier_coeffs_slice(s, &g.sphere().nodes()[node]);
            let coeff_energy = crate::sum::fsum(table.natural_order().iter().map(|c| c.norm_sqr()));
            assert!((energy - coeff_energy).abs() < 1e-10);
        }
    }

    #[test]
    fn poisson_kernel_values() {
        assert_eq!(poisson_kernel(0.0, 1.3).unwrap(), 1.0);
        let r = 0.7;
        assert!((poisson_kernel(r, 0.0).unwrap() - (1.0 + r) / (1.0 - r)).abs() < 1e-13);
        let circle = CircleGrid::new(512).unwrap();
        assert!((circle.integrate(|t| poisson_kernel(0.9, t).unwrap()) - 1.0).abs() < 1e-12);
        assert!(poisson_kernel(1.0, 0.0).is_err());
        assert!(poisson_kernel(-0.1, 0.0).is_err());
        // truncated series Σ r^{|n|} e^{int}
        for t in [0.0, 0.4, 2.0, PI] {
            let series: f64 = 1.0 + 2.0 * (1..200).map(|n| 0.6f64.powi(n) * (n as f64 * t).cos()).sum::<f64>();
            assert!((poisson_kernel(0.6, t).unwrap() - series).abs() < 1e-13);
        }
    }

    #[test]
    fn poisson_extension_examples() {
        let circle = CircleGrid::new(32).unwrap();
        let q0 = Quaternion::new(0.5, 0.5, -1.0, 2.0);
        let c = SliceFunction::constant(32, q0).unwrap();
        let i = ImaginaryUnit::new(1.0, -2.0, 0.5).unwrap();
        assert!((poisson_extend(&c, 0.8, &i, 1.1).unwrap() - q0).norm() < 1e-14);

        for n in [-3i32, 0, 2, 5] {
            let nf = n as f64;
            let f = SliceFunction::from_fns(&circle, |t| Quaternion::real((nf * t).cos()), |t| Quaternion::real((nf * t).sin()));
            let (r, t) = (0.6, 0.9);
            let expected = exp_unit(&i, nf * t) * 0.6f64.powi(n.abs());
            assert!((poisson_extend(&f, r, &i, t).unwrap() - expected).norm() < 1e-14, "n={n}");
        }
        assert!(poisson_extend(&c, 1.0, &i, 0.0).is_err());

        let f = random_slice(&circle, 7);
        let (coeffs, _) = f.coefficients();
        assert!((poisson_extend(&f, 0.0, &i, 2.0).unwrap() - coeffs.get(0)).norm() < 1e-14);
    }

    #[test]
    fn poisson_extension_approaches_boundary() {
        let circle = CircleGrid::new(256).unwrap();
        let f = random_slice(&circle, 21);
        let g = grid(4, 8, 256);
        let sup = f.sample(g.clone()).unwrap().max_abs();
        for (node, j) in g.sphere().nodes().iter().enumerate().step_by(5) {
            for k in (0..256).step_by(17) {
                let t = TAU * k as f64 / 256.0;
                let inner = poisson_extend(&f, 0.999, j, t).unwrap();
                assert!((inner - f.at_node(j, k)).norm() <= 1e-2 * sup, "node {node} k {k}");
            }
        }
    }

    #[test]
    fn sup_over_units_matches_dense_search() {
        let a = Quaternion::new(0.3, -0.2, 0.9, 0.1);
        let b = Quaternion::new(-0.5, 0.4, 0.2, 0.7);
        let f = SliceFunction::new(vec![a; 4], vec![b; 4]).unwrap();
        let rule = crate::SphereRule::gauss_legendre(200, 400).unwrap();
        let dense = rule.nodes().iter().map(|i| (a + i.as_quaternion() * b).norm()).fold(0.0, f64::max);
        let exact = f.sup_over_units_at(0);
        assert!(exact >= dense - 1e-15);
        assert!(exact - dense < 1e-3);
    }

    proptest! {
        #[test]
        fn extension_restricts_to_source(seed in 0u64..1000, x in -1.0..1.0f64, y in -1.0..1.0f64, z in 0.1..1.0f64) {
            let i = ImaginaryUnit::new(x, y, z).unwrap();
            let circle = CircleGrid::new(16).unwrap();
            let samples = crate::testfns::random_quaternions(16, seed);
            let f = ext_representation(&samples, &i).unwrap();
            for k in 0..16 {
                prop_assert!((f.at_node(&i, k) - samples[k]).norm() < 1e-14);
            }
            prop_assert!(f.symmetry_defect() < 1e-15);
            let _ = circle;
        }

        #[test]
        fn poisson_extension_is_slice(seed in 0u64..200, r in 0.0..0.95f64) {
            let g = grid(4, 8, 32);
            let f = random_slice(g.circle(), seed);
            let ext = SampledFunction::sample(g, &|j: &ImaginaryUnit, t: f64| poisson_extend(&f, r, j, t).unwrap());
            prop_assert!(slice_defect(&ext) < 1e-12);
        }
    }
}
