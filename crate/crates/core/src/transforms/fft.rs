//! Iterative radix-2 complex FFT with per-stage twiddle tables.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::math;

/// Points per cache-resident block in the unordered transforms.
const BLOCK: usize = 1 << 11;

#[derive(Debug, Clone)]
pub(crate) struct Radix2Fft {
    len: usize,
    /// Twiddles for every stage, concatenated: the stage with half-width `h`
    /// occupies `[h - 1, 2h - 1)` and holds `exp(-iπ j / h)` for `j < h`.
    twiddles: Vec<Complex64>,
}

impl Radix2Fft {
    pub(crate) fn new(len: usize) -> Self {
        assert!(len.is_power_of_two(), "FFT length {len} is not a power of two");
        let mut twiddles = Vec::with_capacity(len.saturating_sub(1));
        let mut half = 1;
        while half < len {
            for j in 0..half {
                let angle = -PI * j as f64 / half as f64;
                twiddles.push(Complex64::new(math::cos(angle), math::sin(angle)));
            }
            half <<= 1;
        }
        Self { len, twiddles }
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    #[cfg(test)]
    fn bit_reverse(&self, buf: &mut [Complex64]) {
        let n = self.len;
        let mut j = 0usize;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                buf.swap(i, j);
            }
        }
    }

    #[cfg(test)]
    /// Unnormalized forward transform, `X[k] = Σ x[j] exp(-2πi jk/n)`.
    pub(crate) fn forward(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.len);
        if self.len <= 1 {
            return;
        }
        self.bit_reverse(buf);
        let mut half = 1;
        while half < self.len {
            let tw = &self.twiddles[half - 1..2 * half - 1];
            for block in buf.chunks_exact_mut(2 * half) {
                let (lo, hi) = block.split_at_mut(half);
                for ((a, b), w) in lo.iter_mut().zip(hi.iter_mut()).zip(tw) {
                    let t = *b * *w;
                    *b = *a - t;
                    *a += t;
                }
            }
            half <<= 1;
        }
    }

    fn dif_stage(&self, buf: &mut [Complex64], half: usize) {
        let tw = &self.twiddles[half - 1..2 * half - 1];
        for block in buf.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for ((a, b), w) in lo.iter_mut().zip(hi.iter_mut()).zip(tw) {
                let d = *a - *b;
                *a += *b;
                *b = d * *w;
            }
        }
    }

    fn dit_inverse_stage(&self, buf: &mut [Complex64], half: usize) {
        let tw = &self.twiddles[half - 1..2 * half - 1];
        for block in buf.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for ((a, b), w) in lo.iter_mut().zip(hi.iter_mut()).zip(tw) {
                let t = *b * w.conj();
                *b = *a - t;
                *a += t;
            }
        }
    }

    /// Decimation-in-frequency forward transform: natural-order input,
    /// bit-reversed output.
    pub(crate) fn forward_to_bit_reversed(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.len);
        let block = self.len.min(BLOCK);
        self.dif_large_stages(buf, block);
        for chunk in buf.chunks_exact_mut(block) {
            self.dif_small_stages(chunk);
        }
    }

    /// Decimation-in-time inverse transform without the `1/n` factor:
    /// bit-reversed input, natural-order output.
    #[cfg(test)]
    pub(crate) fn inverse_from_bit_reversed_unscaled(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.len);
        let block = self.len.min(BLOCK);
        for chunk in buf.chunks_exact_mut(block) {
            self.dit_small_stages(chunk);
        }
        self.dit_large_stages(buf, block);
    }

    /// `buf ← IDFT(spectrum · conj(DFT(buf)))` up to the `1/n` factor, which
    /// the caller folds into `spectrum`. `spectrum` is in bit-reversed order
    /// as produced by [`Self::forward_to_bit_reversed`]. The pointwise product
    /// happens block by block between the two small-stride halves, while each
    /// block is still in cache.
    pub(crate) fn correlate_bit_reversed(&self, buf: &mut [Complex64], spectrum: &[Complex64]) {
        assert_eq!(buf.len(), self.len);
        assert_eq!(spectrum.len(), self.len);
        let block = self.len.min(BLOCK);
        self.dif_large_stages(buf, block);
        for (chunk, spec) in buf.chunks_exact_mut(block).zip(spectrum.chunks_exact(block)) {
            self.dif_small_stages(chunk);
            for (z, s) in chunk.iter_mut().zip(spec) {
                *z = *s * z.conj();
            }
            self.dit_small_stages(chunk);
        }
        self.dit_large_stages(buf, block);
    }

    /// Stages `half` and `half / 2` of the forward transform in one sweep.
    fn dif_stage_pair(&self, buf: &mut [Complex64], half: usize) {
        let quarter = half / 2;
        let outer = &self.twiddles[half - 1..2 * half - 1];
        let inner = &self.twiddles[quarter - 1..half - 1];
        for block in buf.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            let (q0, q1) = lo.split_at_mut(quarter);
            let (q2, q3) = hi.split_at_mut(quarter);
            for j in 0..quarter {
                let (a0, a1, a2, a3) = (q0[j], q1[j], q2[j], q3[j]);
                let (b0, b2) = (a0 + a2, (a0 - a2) * outer[j]);
                let (b1, b3) = (a1 + a3, (a1 - a3) * outer[j + quarter]);
                q0[j] = b0 + b1;
                q1[j] = (b0 - b1) * inner[j];
                q2[j] = b2 + b3;
                q3[j] = (b2 - b3) * inner[j];
            }
        }
    }

    /// Stages `half / 2` and `half` of the inverse transform in one sweep.
    fn dit_inverse_stage_pair(&self, buf: &mut [Complex64], half: usize) {
        let quarter = half / 2;
        let outer = &self.twiddles[half - 1..2 * half - 1];
        let inner = &self.twiddles[quarter - 1..half - 1];
        for block in buf.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            let (q0, q1) = lo.split_at_mut(quarter);
            let (q2, q3) = hi.split_at_mut(quarter);
            for j in 0..quarter {
                let (a0, a1, a2, a3) = (q0[j], q1[j], q2[j], q3[j]);
                let w = inner[j].conj();
                let (t1, t3) = (a1 * w, a3 * w);
                let (b0, b1, b2, b3) = (a0 + t1, a0 - t1, a2 + t3, a2 - t3);
                let (t2, t3) = (b2 * outer[j].conj(), b3 * outer[j + quarter].conj());
                q0[j] = b0 + t2;
                q2[j] = b0 - t2;
                q1[j] = b1 + t3;
                q3[j] = b1 - t3;
            }
        }
    }

    /// Stages with `half ≥ block`, which stream through memory; paired so
    /// each sweep does two of them.
    fn dif_large_stages(&self, buf: &mut [Complex64], block: usize) {
        let mut half = self.len / 2;
        while half >= block {
            if half / 2 >= block {
                self.dif_stage_pair(buf, half);
                half /= 4;
            } else {
                self.dif_stage(buf, half);
                half /= 2;
            }
        }
    }

    fn dif_small_stages(&self, chunk: &mut [Complex64]) {
        let mut half = chunk.len() / 2;
        while half >= 1 {
            self.dif_stage(chunk, half);
            half /= 2;
        }
    }

    fn dit_small_stages(&self, chunk: &mut [Complex64]) {
        let mut half = 1;
        while half < chunk.len() {
            self.dit_inverse_stage(chunk, half);
            half <<= 1;
        }
    }

    fn dit_large_stages(&self, buf: &mut [Complex64], block: usize) {
        let mut half = block;
        while half < self.len {
            if 2 * half < self.len {
                self.dit_inverse_stage_pair(buf, 2 * half);
                half <<= 2;
            } else {
                self.dit_inverse_stage(buf, half);
                half <<= 1;
            }
        }
    }

    #[cfg(test)]
    /// Inverse transform including the `1/n` factor.
    pub(crate) fn inverse(&self, buf: &mut [Complex64]) {
        for z in buf.iter_mut() {
            *z = z.conj();
        }
        self.forward(buf);
        let scale = 1.0 / self.len as f64;
        for z in buf.iter_mut() {
            *z = z.conj() * scale;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(j, &v)| {
                        let a = -2.0 * PI * ((j * k) % n) as f64 / n as f64;
                        v * Complex64::new(a.cos(), a.sin())
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn unordered_pair_round_trips_and_permutes() {
        for &n in &[1usize, 2, 8, 64, 256, 1 << 12, 1 << 13, 1 << 14, 1 << 15] {
            let x: Vec<Complex64> = (0..n)
                .map(|i| Complex64::new((i as f64 * 0.3).cos(), (i as f64 * 0.9).sin()))
                .collect();
            let fft = Radix2Fft::new(n);
            let mut natural = x.clone();
            fft.forward(&mut natural);
            let mut scrambled = x.clone();
            fft.forward_to_bit_reversed(&mut scrambled);
            fft.bit_reverse(&mut scrambled);
            for (a, b) in scrambled.iter().zip(&natural) {
                assert!((a - b).norm() < 1e-10, "n={n}");
            }
            fft.bit_reverse(&mut scrambled);
            fft.inverse_from_bit_reversed_unscaled(&mut scrambled);
            scrambled.iter_mut().for_each(|z| *z /= n as f64);
            for (a, b) in scrambled.iter().zip(&x) {
                assert!((a - b).norm() < 1e-12, "n={n}");
            }
        }
    }

    #[test]
    fn fused_correlation_matches_separate_steps() {
        for &n in &[4usize, 1 << 11, 1 << 13, 1 << 14] {
            let h: Vec<Complex64> = (0..n).map(|i| Complex64::new((i as f64 * 0.37).sin(), 0.0)).collect();
            let x: Vec<Complex64> = (0..n).map(|i| Complex64::new((i as f64 * 1.1).cos(), 0.0)).collect();
            let fft = Radix2Fft::new(n);
            let (mut hs, mut xs) = (h.clone(), x.clone());
            fft.forward(&mut hs);
            fft.forward(&mut xs);
            let mut expected: Vec<Complex64> = hs.iter().zip(&xs).map(|(a, b)| a * b.conj()).collect();
            fft.inverse(&mut expected);
            let mut spectrum = h.clone();
            fft.forward_to_bit_reversed(&mut spectrum);
            spectrum.iter_mut().for_each(|z| *z /= n as f64);
            let mut got = x.clone();
            fft.correlate_bit_reversed(&mut got, &spectrum);
            for (a, b) in got.iter().zip(&expected) {
                assert!((a - b).norm() < 1e-9, "n={n}");
            }
        }
    }

    #[test]
    fn matches_naive_dft() {
        for &n in &[1usize, 2, 4, 8, 32, 128] {
            let x: Vec<Complex64> = (0..n)
                .map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()))
                .collect();
            let mut y = x.clone();
            let fft = Radix2Fft::new(n);
            fft.forward(&mut y);
            let expected = naive_dft(&x);
            for (a, b) in y.iter().zip(&expected) {
                assert!((a - b).norm() < 1e-10, "n={n}");
            }
            fft.inverse(&mut y);
            for (a, b) in y.iter().zip(&x) {
                assert!((a - b).norm() < 1e-12, "n={n}");
            }
        }
    }
}
