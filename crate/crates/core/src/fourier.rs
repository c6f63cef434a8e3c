//! Componentwise discrete Fourier analysis of quaternion samples on the circle.
//!
//! A quaternion sequence is four real sequences. Each pair of real
//! components shares one complex FFT.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::quaternion::Quaternion;

/// Forward and inverse plans for one circle size.
#[derive(Clone)]
pub struct CircleTransform {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for CircleTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CircleTransform").field("n", &self.n).finish()
    }
}

/// `X_n = (1/N) Σ_k x_k e^{-2πi nk/N}` for each of the four real components,
/// natural FFT order (index `m` is frequency `m` for `m < N/2`, `m - N` above).
#[derive(Clone, Debug)]
pub struct QuatSpectrum {
    pub comps: [Vec<Complex64>; 4],
}

impl QuatSpectrum {
    pub fn len(&self) -> usize {
        self.comps[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn index(&self, n: i64) -> usize {
        n.rem_euclid(self.len() as i64) as usize
    }

    /// `(1/N) Σ_k cos(n t_k) x_k`, quaternion valued.
    pub fn cos_coeff(&self, n: i64) -> Quaternion {
        let m = self.index(n);
        Quaternion::new(self.comps[0][m].re, self.comps[1][m].re, self.comps[2][m].re, self.comps[3][m].re)
    }

    /// `(1/N) Σ_k sin(n t_k) x_k`, quaternion valued.
    pub fn sin_coeff(&self, n: i64) -> Quaternion {
        let m = self.index(n);
        Quaternion::new(-self.comps[0][m].im, -self.comps[1][m].im, -self.comps[2][m].im, -self.comps[3][m].im)
    }
}

impl CircleTransform {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self { n, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn forward(&self, samples: &[Quaternion]) -> QuatSpectrum {
        assert_eq!(samples.len(), self.n);
        let scale = 1.0 / self.n as f64;
        let (w, x) = self.forward_pair(samples.iter().map(|q| (q.w, q.x)), scale);
        let (y, z) = self.forward_pair(samples.iter().map(|q| (q.y, q.z)), scale);
        QuatSpectrum { comps: [w, x, y, z] }
    }

    fn forward_pair(&self, values: impl Iterator<Item = (f64, f64)>, scale: f64) -> (Vec<Complex64>, Vec<Complex64>) {
        let mut buf: Vec<Complex64> = values.map(|(a, b)| Complex64::new(a, b)).collect();
        self.forward.process(&mut buf);
        let n = self.n;
        let mut a = vec![Complex64::default(); n];
        let mut b = vec![Complex64::default(); n];
        for m in 0..n {
            let zm = buf[m];
            let zc = buf[(n - m) % n].conj();
            a[m] = (zm + zc) * (0.5 * scale);
            // (zm - zc) / (2i)
            let d = zm - zc;
            b[m] = Complex64::new(d.im, -d.re) * (0.5 * scale);
        }
        (a, b)
    }

    /// `Σ_n c_n e^{i n t_k}` for a real coefficient sequence per component,
    /// returned as (real part, imaginary part) = (`Σ cos(n t) c_n`, `Σ sin(n t) c_n`).
    pub fn synthesize_real_coeffs(&self, coeffs: &[Quaternion]) -> (Vec<Quaternion>, Vec<Quaternion>) {
        let spectrum: [Vec<Complex64>; 4] = std::array::from_fn(|c| {
            coeffs.iter().map(|q| Complex64::new(q.components()[c], 0.0)).collect()
        });
        self.synthesize(&QuatSpectrum { comps: spectrum })
    }

    /// Unnormalized inverse transform `Σ_n X_n e^{i n t_k}` per component.
    /// Returns the real and imaginary parts of the four components as two
    /// quaternion sequences.
    pub fn synthesize(&self, spectrum: &QuatSpectrum) -> (Vec<Quaternion>, Vec<Quaternion>) {
        assert_eq!(spectrum.len(), self.n);
        let mut re = vec![Quaternion::ZERO; self.n];
        let mut im = vec![Quaternion::ZERO; self.n];
        for (c, comp) in spectrum.comps.iter().enumerate() {
            let mut buf = comp.clone();
            self.inverse.process(&mut buf);
            for (k, z) in buf.iter().enumerate() {
                let mut r = re[k].components();
                let mut i = im[k].components();
                r[c] = z.re;
                i[c] = z.im;
                re[k] = Quaternion::from_components(r);
                im[k] = Quaternion::from_components(i);
            }
        }
        (re, im)
    }

    /// Trigonometric interpolant of the samples evaluated on the finer uniform
    /// grid of `fine` (its size a multiple of `N`). The Nyquist mode is split
    /// evenly between `±N/2`, i.e. read as `cos(N t / 2)`.
    pub fn upsample(&self, samples: &[Quaternion], fine: &CircleTransform) -> Vec<Quaternion> {
        let len = fine.n;
        assert!(len >= self.n && len % self.n == 0);
        if len == self.n {
            return samples.to_vec();
        }
        let spectrum = self.forward(samples);
        let half = self.n / 2;
        let pad = |c: usize| -> Vec<Complex64> {
            let src = &spectrum.comps[c];
            let mut dst = vec![Complex64::default(); len];
            dst[0] = src[0];
            for m in 1..half {
                dst[m] = src[m];
                dst[len - m] = src[self.n - m];
            }
            dst[half] = src[half] * 0.5;
            dst[len - half] = src[half] * 0.5;
            dst
        };
        // Both padded spectra are Hermitian, so one inverse FFT of X + iY
        // returns the two real interpolants as real and imaginary parts.
        let mut out = vec![Quaternion::ZERO; len];
        for (c0, c1) in [(0usize, 1usize), (2, 3)] {
            let (a, b) = (pad(c0), pad(c1));
            let mut buf: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x + Complex64::i() * y).collect();
            fine.inverse.process(&mut buf);
            for (q, z) in out.iter_mut().zip(&buf) {
                let mut comps = q.components();
                comps[c0] = z.re;
                comps[c1] = z.im;
                *q = Quaternion::from_components(comps);
            }
        }
        out
    }

    /// Trigonometric interpolant at an arbitrary angle, same Nyquist convention
    /// as [`Self::upsample`].
    pub fn interpolate(spectrum: &QuatSpectrum, t: f64) -> Quaternion {
        let n = spectrum.len();
        let half = n / 2;
        let mut out = [0.0; 4];
        for (c, comp) in spectrum.comps.iter().enumerate() {
            let mut acc = crate::sum::Compensated::default();
            acc.add(comp[0].re);
            for m in 1..half {
                let e = Complex64::from_polar(1.0, m as f64 * t);
                // X_m e^{imt} + X_{-m} e^{-imt}
                acc.add((comp[m] * e).re + (comp[n - m] * e.conj()).re);
            }
            acc.add(comp[half].re * (half as f64 * t).cos());
            out[c] = acc.value();
        }
        Quaternion::from_components(out)
    }
}
