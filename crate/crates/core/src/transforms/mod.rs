//! Linear kernels: cyclic shifts, the unitary fast Walsh–Hadamard transform,
//! FFT-based circulant multiplication and row restriction.
//!
//! Indexing is 0-based throughout. Row `i` of the circulant matrix `C_h` is
//! `shift(h, i)`, so row 0 is `h` itself and
//! `(C_h x)[i] = Σ_j h[(i + j) mod n] · x[j]`.

mod fft;

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::math;
use fft::Radix2Fft;

fn check_finite(x: &[f64], what: &str) -> Result<()> {
    match x.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(invalid!("{what} has a non-finite entry at index {i}")),
        None => Ok(()),
    }
}

fn check_vector(x: &[f64], what: &str) -> Result<()> {
    if x.is_empty() {
        return Err(invalid!("{what} has dimension 0"));
    }
    check_finite(x, what)
}

/// Cyclic shift: `output[j] = x[(i + j) mod n]`.
pub fn shift(x: &[f64], i: usize) -> Result<Vec<f64>> {
    check_vector(x, "shift input")?;
    let n = x.len();
    if i >= n {
        return Err(invalid!("shift amount {i} out of range for dimension {n}"));
    }
    let mut out = Vec::with_capacity(n);
    out.extend_from_slice(&x[i..]);
    out.extend_from_slice(&x[..i]);
    Ok(out)
}

/// Writes `shift(x, i)` into `out` without validation; `i` may be any value.
pub(crate) fn shift_into(x: &[f64], i: usize, out: &mut [f64]) {
    let n = x.len();
    let i = i % n;
    out[..n - i].copy_from_slice(&x[i..]);
    out[n - i..].copy_from_slice(&x[..i]);
}

/// Elements per cache-resident block in [`fwht_in_place`].
const FWHT_BLOCK: usize = 1 << 12;

fn fwht_stage(x: &mut [f64], half: usize) {
    for block in x.chunks_exact_mut(2 * half) {
        let (lo, hi) = block.split_at_mut(half);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (s, d) = (*a + *b, *a - *b);
            *a = s;
            *b = d;
        }
    }
}

/// Stages `half` and `2 · half` in one sweep over memory.
fn fwht_stage_pair(x: &mut [f64], half: usize) {
    for block in x.chunks_exact_mut(4 * half) {
        let (lo, hi) = block.split_at_mut(2 * half);
        let (q0, q1) = lo.split_at_mut(half);
        let (q2, q3) = hi.split_at_mut(half);
        for j in 0..half {
            let (a0, a1, a2, a3) = (q0[j], q1[j], q2[j], q3[j]);
            let (b0, b1, b2, b3) = (a0 + a1, a0 - a1, a2 + a3, a2 - a3);
            q0[j] = b0 + b2;
            q2[j] = b0 - b2;
            q1[j] = b1 + b3;
            q3[j] = b1 - b3;
        }
    }
}

/// In-place unitary Walsh–Hadamard transform. Length must be a power of two.
pub fn fwht_in_place(x: &mut [f64]) -> Result<()> {
    let n = x.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(invalid!("Walsh–Hadamard length {n} is not a power of two"));
    }
    // Stages with small strides run block by block while the block is in cache.
    let block = n.min(FWHT_BLOCK);
    for chunk in x.chunks_exact_mut(block) {
        let mut half = 1;
        while half < block {
            fwht_stage(chunk, half);
            half <<= 1;
        }
    }
    let mut half = block;
    while half < n {
        if 2 * half < n {
            fwht_stage_pair(x, half);
            half <<= 2;
        } else {
            fwht_stage(x, half);
            half <<= 1;
        }
    }
    let scale = 1.0 / math::sqrt(n as f64);
    x.iter_mut().for_each(|v| *v *= scale);
    Ok(())
}

/// Returns `H · x` for the unitary (`1/√n`-scaled) Hadamard matrix `H`.
pub fn fwht(x: &[f64]) -> Result<Vec<f64>> {
    check_finite(x, "Walsh–Hadamard input")?;
    let mut out = x.to_vec();
    fwht_in_place(&mut out)?;
    Ok(out)
}

/// Precomputed multiplier for a fixed circulant generator `h`.
///
/// Power-of-two lengths use an FFT of the same size. Other lengths embed the
/// cyclic correlation in a linear one of size `next_pow2(2n)` (generator
/// stored twice, input zero-padded), which needs no wrap-around correction.
#[derive(Debug, Clone)]
pub struct CirculantKernel {
    n: usize,
    fft: Radix2Fft,
    spectrum: Vec<Complex64>,
}

impl CirculantKernel {
    pub fn new(h: &[f64]) -> Result<Self> {
        check_vector(h, "circulant generator")?;
        let n = h.len();
        let m = if n.is_power_of_two() {
            n
        } else {
            (2 * n).next_power_of_two()
        };
        let fft = Radix2Fft::new(m);
        let mut spectrum = vec![Complex64::new(0.0, 0.0); m];
        for (slot, &v) in spectrum.iter_mut().zip(h.iter()) {
            slot.re = v;
        }
        if m != n {
            for (slot, &v) in spectrum[n..].iter_mut().zip(h.iter()) {
                slot.re = v;
            }
        }
        fft.forward_to_bit_reversed(&mut spectrum);
        // Folding the inverse transform's 1/m here saves a pass per apply.
        let scale = 1.0 / m as f64;
        spectrum.iter_mut().for_each(|z| *z *= scale);
        Ok(Self { n, fft, spectrum })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `C_h · x`. Only the length of `x` is checked.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x.len())?;
        let buf = self.correlate(x.iter().copied());
        Ok(buf[..self.n].iter().map(|z| z.re).collect())
    }

    /// Rows `rows` of `C_h · diag(r) · x`, without materializing the other rows.
    pub(crate) fn apply_modulated_rows(&self, x: &[f64], modulator: &[f64], rows: &[usize]) -> Result<Vec<f64>> {
        self.check_len(x.len())?;
        self.check_len(modulator.len())?;
        let buf = self.correlate(x.iter().zip(modulator).map(|(a, r)| a * r));
        Ok(rows.iter().map(|&i| buf[i].re).collect())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(invalid!(
                "circulant dimension mismatch: generator has length {}, input has length {len}",
                self.n
            ));
        }
        Ok(())
    }

    fn correlate(&self, x: impl Iterator<Item = f64>) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.fft.len()];
        for (slot, v) in buf.iter_mut().zip(x) {
            slot.re = v;
        }
        // Correlation theorem for real inputs: DFT(h ⋆ x) = DFT(h) · conj(DFT(x)).
        self.fft.correlate_bit_reversed(&mut buf, &self.spectrum);
        buf
    }
}

/// `C_h · x` via FFT in `O(n log n)`.
pub fn circulant_apply(h: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    if h.len() != x.len() {
        return Err(invalid!(
            "circulant dimension mismatch: generator has length {}, input has length {}",
            h.len(),
            x.len()
        ));
    }
    check_vector(x, "circulant input")?;
    CirculantKernel::new(h)?.apply(x)
}

/// A set of `k` distinct row indices into `[0, dim)`, in selection order.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IndexSet {
    indices: Vec<usize>,
    dim: usize,
}

impl IndexSet {
    pub fn new(indices: Vec<usize>, dim: usize) -> Result<Self> {
        let k = indices.len();
        if k == 0 || k > dim {
            return Err(invalid!("index set size {k} must lie in [1, {dim}]"));
        }
        let mut seen = vec![false; dim];
        for (t, &i) in indices.iter().enumerate() {
            if i >= dim {
                return Err(invalid!("index {i} at position {t} out of range for dimension {dim}"));
            }
            if core::mem::replace(&mut seen[i], true) {
                return Err(invalid!("duplicate index {i} at position {t}"));
            }
        }
        Ok(Self { indices, dim })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// `output[t] = x[S[t]]`, preserving the order of `S`.
pub fn restrict(x: &[f64], s: &IndexSet) -> Result<Vec<f64>> {
    if x.len() != s.dim {
        return Err(invalid!(
            "restriction dimension mismatch: index set over {}, vector of length {}",
            s.dim,
            x.len()
        ));
    }
    Ok(s.indices.iter().map(|&i| x[i]).collect())
}
