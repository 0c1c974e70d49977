//! Radix-2 FFT and linear convolution of real sequences.

use alloc::vec;
use alloc::vec::Vec;

use libm::{cos, sin};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    fn mul(self, o: Self) -> Self {
        Self::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }

    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }

    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

/// In-place FFT. `data.len()` must be a power of two. `inverse` applies the
/// conjugate transform including the `1/n` scaling.
pub fn fft(data: &mut [Complex], inverse: bool) {
    let n = data.len();
    assert!(n.is_power_of_two(), "fft length {n} is not a power of two");
    if n <= 1 {
        return;
    }
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            data.swap(i, j);
        }
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let twiddles: Vec<Complex> = (0..n / 2)
        .map(|k| {
            let theta = sign * 2.0 * core::f64::consts::PI * k as f64 / n as f64;
            Complex::new(cos(theta), sin(theta))
        })
        .collect();
    let mut len = 2;
    while len <= n {
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..len / 2 {
                let w = twiddles[k * stride];
                let u = data[start + k];
                let v = data[start + k + len / 2].mul(w);
                data[start + k] = u.add(v);
                data[start + k + len / 2] = u.sub(v);
            }
        }
        len <<= 1;
    }
    if inverse {
        let scale = 1.0 / n as f64;
        for z in data.iter_mut() {
            z.re *= scale;
            z.im *= scale;
        }
    }
}

fn convolve_direct(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Full linear convolution of two real sequences (length `a + b - 1`).
pub fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len().min(b.len()) <= 64 {
        return convolve_direct(a, b);
    }
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    // Pack a into the real part and b into the imaginary part; one forward
    // transform yields both spectra.
    let mut buf = vec![Complex::default(); size];
    for (z, &x) in buf.iter_mut().zip(a) {
        z.re = x;
    }
    for (z, &y) in buf.iter_mut().zip(b) {
        z.im = y;
    }
    fft(&mut buf, false);
    let mut prod = vec![Complex::default(); size];
    for k in 0..size {
        let zk = buf[k];
        let zn = buf[(size - k) % size];
        let conj_n = Complex::new(zn.re, -zn.im);
        // A_k = (Z_k + conj Z_{-k}) / 2, B_k = (Z_k - conj Z_{-k}) / 2i
        let ak = Complex::new(0.5 * (zk.re + conj_n.re), 0.5 * (zk.im + conj_n.im));
        let d = zk.sub(conj_n);
        let bk = Complex::new(0.5 * d.im, -0.5 * d.re);
        prod[k] = ak.mul(bk);
    }
    fft(&mut prod, true);
    prod.truncate(out_len);
    prod.into_iter().map(|z| z.re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fft_matches_direct_convolution() {
        let a: Vec<f64> = (0..300).map(|i| ((i * 37 % 101) as f64) / 101.0).collect();
        let b: Vec<f64> = (0..200).map(|i| ((i * 53 % 89) as f64) / 89.0).collect();
        let fast = convolve(&a, &b);
        let slow = convolve_direct(&a, &b);
        assert_eq!(fast.len(), slow.len());
        for (x, y) in fast.iter().zip(&slow) {
            assert!((x - y).abs() < 1e-9 * (1.0 + y.abs()), "{x} vs {y}");
        }
    }

    #[test]
    fn round_trip() {
        let mut data: Vec<Complex> = (0..64).map(|i| Complex::new(i as f64, -(i as f64) / 3.0)).collect();
        let orig = data.clone();
        fft(&mut data, false);
        fft(&mut data, true);
        for (x, y) in data.iter().zip(&orig) {
            assert!((x.re - y.re).abs() < 1e-12 && (x.im - y.im).abs() < 1e-12);
        }
    }

    #[test]
    fn small_inputs_use_direct_path() {
        assert_eq!(convolve(&[1.0, 2.0], &[3.0]), vec![3.0, 6.0]);
        assert!(convolve(&[], &[1.0]).is_empty());
    }
}
