//! Trigonometric interpolation on uniform periodic grids.
//!
//! Everything in the crate that touches a smooth periodic quantity goes
//! through [`Spectrum`]: evaluation between samples, spectral
//! differentiation and the periodic antiderivative. Grids are powers of
//! two so the interpolant is the unique band-limited one.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::TAU;

/// Fourier coefficients of a real periodic sample sequence.
///
/// Only the non-negative frequencies 0..=n/2 are stored; the rest are
/// implied by conjugate symmetry.
#[derive(Debug, Clone)]
pub struct Spectrum {
    n: usize,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len();
        assert!(n >= 2 && n.is_power_of_two(), "grid must be a power of two");
        let mut buf: Vec<Complex64> = samples
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let scale = 1.0 / n as f64;
        let coeffs = buf[..=n / 2].iter().map(|c| c * scale).collect();
        Spectrum { n, coeffs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// Evaluate the interpolant at an arbitrary parameter value.
    ///
    /// The Nyquist mode is interpreted as a pure cosine, the standard
    /// convention for real data.
    pub fn eval(&self, t: f64) -> f64 {
        let half = self.n / 2;
        let mut acc = self.coeffs[0].re;
        let rot = Complex64::from_polar(1.0, t);
        let mut e = Complex64::new(1.0, 0.0);
        for j in 1..half {
            e *= rot;
            acc += 2.0 * (self.coeffs[j] * e).re;
        }
        // Nyquist as cos(half * t); half*t accumulated separately to
        // avoid the rounding drift of the recurrence at top frequency.
        acc += (self.coeffs[half] * Complex64::from_polar(1.0, half as f64 * t)).re;
        acc
    }

    /// Spectral derivative. The (odd) Nyquist mode has no representable
    /// derivative and is dropped.
    #[allow(clippy::needless_range_loop)]
    pub fn derivative(&self) -> Spectrum {
        let half = self.n / 2;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); half + 1];
        for j in 1..half {
            coeffs[j] = self.coeffs[j] * Complex64::new(0.0, j as f64);
        }
        Spectrum { n: self.n, coeffs }
    }

    /// Zero-mean periodic part of the antiderivative.
    ///
    /// The full antiderivative of the interpolant is
    /// `mean() * t + antiderivative_periodic().eval(t) + const`.
    #[allow(clippy::needless_range_loop)]
    pub fn antiderivative_periodic(&self) -> Spectrum {
        let half = self.n / 2;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); half + 1];
        for j in 1..half {
            coeffs[j] = self.coeffs[j] / Complex64::new(0.0, j as f64);
        }
        Spectrum { n: self.n, coeffs }
    }

    /// Values of the interpolant on the m-point uniform grid.
    pub fn resample(&self, m: usize) -> Vec<f64> {
        (0..m).map(|j| self.eval(TAU * j as f64 / m as f64)).collect()
    }
}

/// Cumulative integral B(t) = ∫₀ᵗ of a sampled periodic function, with
/// B(0) = 0 and B(t + 2π) = B(t) + 2π·mean.
#[derive(Debug, Clone)]
pub struct Cumulative {
    mean: f64,
    periodic: Spectrum,
    p0: f64,
}

impl Cumulative {
    pub fn from_samples(samples: &[f64]) -> Self {
        let spec = Spectrum::from_samples(samples);
        let mean = spec.mean();
        let periodic = spec.antiderivative_periodic();
        let p0 = periodic.eval(0.0);
        Cumulative { mean, periodic, p0 }
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.mean * t + self.periodic.eval(t) - self.p0
    }

    /// Invert B on a monotone branch: find t in [lo, hi] with B(t) = y.
    /// Requires strictly positive integrand (monotone B); bisection to
    /// 1e-12 in parameter.
    pub fn invert(&self, y: f64, lo: f64, hi: f64) -> f64 {
        let (mut lo, mut hi) = (lo, hi);
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-13 {
                break;
            }
        }
        0.5 * (lo + hi)
    }
}
