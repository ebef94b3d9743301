//! In-place radix-2 FFT for power-of-two lengths.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// A planned transform of one fixed power-of-two length.
#[derive(Debug, Clone)]
pub struct Radix2Fft {
    n: usize,
    // e^{-2πik/n} for k < n/2, each evaluated directly.
    twiddles: Vec<Complex64>,
}

impl Radix2Fft {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::Domain("FFT length must be a power of two ≥ 2"));
        }
        let twiddles = (0..n / 2)
            .map(|k| {
                let theta = -2.0 * PI * (k as f64) / (n as f64);
                Complex64::new(libm::cos(theta), libm::sin(theta))
            })
            .collect();
        Ok(Self { n, twiddles })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Unnormalized forward transform `X_k = Σ x_j e^{-2πijk/n}`.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, false);
    }

    /// Inverse transform including the `1/n` factor.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, true);
        let scale = 1.0 / self.n as f64;
        for z in data.iter_mut() {
            *z *= scale;
        }
    }

    fn transform(&self, data: &mut [Complex64], inverse: bool) {
        assert_eq!(data.len(), self.n, "buffer length does not match the plan");
        let n = self.n;
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if j > i {
                data.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let stride = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..half {
                    let w = self.twiddles[k * stride];
                    let w = if inverse { w.conj() } else { w };
                    let t = w * data[start + k + half];
                    let u = data[start + k];
                    data[start + k] = u + t;
                    data[start + k + half] = u - t;
                }
            }
            len <<= 1;
        }
    }
}

/// Angular frequencies matching the FFT bin order for sample spacing `dx`.
pub fn angular_frequencies(n: usize, dx: f64) -> Vec<f64> {
    let dk = 2.0 * PI / (n as f64 * dx);
    (0..n)
        .map(|j| {
            let signed = if j < n.div_ceil(2) { j as f64 } else { j as f64 - n as f64 };
            signed * dk
        })
        .collect()
}
