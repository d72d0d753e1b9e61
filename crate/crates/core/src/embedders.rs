//! Sign-projection operators.
//!
//! Every operator is a deterministic function of `(kind, n, k, seed)`: its
//! random parameters are regenerated from named substreams of the seed rather
//! than stored, which is also how the `BEOP1` encoding works.
//!
//! | kind       | map                                   | cost        |
//! |------------|---------------------------------------|-------------|
//! | gaussian   | `sgn(G x)`                            | `O(kn)`     |
//! | circulant  | `sgn(R C_h diag(r) x)`                | `O(n log n)`|
//! | randomized | `sgn(R C_h diag(r) H diag(b) pad(x))` | `O(n log n)`|

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::geometry::{BinaryCode, PointSet};
use crate::par;
use crate::rng::{stream, Rng};
use crate::transforms::{fwht_in_place, CirculantKernel, IndexSet};

/// Operator family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum OperatorKind {
    Gaussian,
    Circulant,
    Randomized,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 3] = [Self::Gaussian, Self::Circulant, Self::Randomized];

    pub fn code(self) -> u8 {
        match self {
            Self::Gaussian => 0,
            Self::Circulant => 1,
            Self::Randomized => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.code() == code)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Gaussian => "gaussian",
            Self::Circulant => "circulant",
            Self::Randomized => "randomized",
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| invalid!("unknown operator kind {s:?}"))
    }
}

/// Distribution of the modulation vector `r`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Modulation {
    #[default]
    Gaussian,
    Rademacher,
}

fn check_input(x: &[f64], n: usize) -> Result<()> {
    if x.len() != n {
        return Err(invalid!("input has dimension {}, operator expects {n}", x.len()));
    }
    if let Some(i) = x.iter().position(|v| v.is_nan()) {
        return Err(invalid!("input has NaN at index {i}"));
    }
    Ok(())
}

/// Dense `k × n` matrix of i.i.d. standard normals.
#[derive(Debug, Clone)]
pub struct GaussianOperator {
    n: usize,
    k: usize,
    seed: u64,
    matrix: Vec<f64>,
}

impl GaussianOperator {
    pub fn sample(n: usize, k: usize, seed: u64) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(invalid!("gaussian operator needs n ≥ 1 and k ≥ 1, got n={n}, k={k}"));
        }
        let matrix = Rng::stream(seed, stream::GAUSSIAN_MATRIX).normal_vec(k * n);
        Ok(Self { n, k, seed, matrix })
    }

    /// Row-major `k × n` entries.
    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_input(x, self.n)?;
        Ok(self
            .matrix
            .chunks_exact(self.n)
            .map(|row| crate::math::dot(row, x))
            .collect())
    }
}

/// `A = R · C_h · diag(r)`.
#[derive(Debug, Clone)]
pub struct CirculantOperator {
    n: usize,
    k: usize,
    seed: u64,
    modulation: Modulation,
    generator: Vec<f64>,
    modulator: Vec<f64>,
    selection: IndexSet,
    kernel: CirculantKernel,
}

impl CirculantOperator {
    pub fn sample(n: usize, k: usize, seed: u64) -> Result<Self> {
        Self::sample_with(n, k, seed, Modulation::Gaussian)
    }

    pub fn sample_with(n: usize, k: usize, seed: u64, modulation: Modulation) -> Result<Self> {
        if k == 0 || n == 0 || k > n {
            return Err(invalid!("circulant operator needs 1 ≤ k ≤ n, got n={n}, k={k}"));
        }
        let generator = Rng::stream(seed, stream::GENERATOR).normal_vec(n);
        let mut mod_rng = Rng::stream(seed, stream::MODULATION);
        let modulator = match modulation {
            Modulation::Gaussian => mod_rng.normal_vec(n),
            Modulation::Rademacher => mod_rng.rademacher_vec(n),
        };
        let picks = Rng::stream(seed, stream::SELECTION).choose_without_replacement(n, k);
        let selection = IndexSet::new(picks, n)?;
        let kernel = CirculantKernel::new(&generator)?;
        Ok(Self {
            n,
            k,
            seed,
            modulation,
            generator,
            modulator,
            selection,
            kernel,
        })
    }

    /// `h`.
    pub fn generator(&self) -> &[f64] {
        &self.generator
    }

    /// `r`.
    pub fn modulator(&self) -> &[f64] {
        &self.modulator
    }

    /// `S`.
    pub fn selection(&self) -> &IndexSet {
        &self.selection
    }

    pub fn modulation(&self) -> Modulation {
        self.modulation
    }

    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_input(x, self.n)?;
        self.project_unchecked(x)
    }

    fn project_unchecked(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.kernel
            .apply_modulated_rows(x, &self.modulator, self.selection.indices())
    }
}

/// `A_H = R · C_h · diag(r) · H · diag(b)` at the padded dimension `n′`.
#[derive(Debug, Clone)]
pub struct RandomizedOperator {
    inner: CirculantOperator,
    signs: Vec<f64>,
    n_orig: usize,
}

impl RandomizedOperator {
    pub fn sample(n: usize, k: usize, seed: u64) -> Result<Self> {
        Self::sample_with(n, k, seed, Modulation::Gaussian)
    }

    pub fn sample_with(n: usize, k: usize, seed: u64, modulation: Modulation) -> Result<Self> {
        if n == 0 {
            return Err(invalid!("randomized operator needs n ≥ 1"));
        }
        let padded = n.next_power_of_two();
        if k == 0 || k > padded {
            return Err(invalid!("randomized operator needs 1 ≤ k ≤ n′ = {padded}, got k={k}"));
        }
        let inner = CirculantOperator::sample_with(padded, k, seed, modulation)?;
        let signs = Rng::stream(seed, stream::SIGNS).rademacher_vec(padded);
        Ok(Self {
            inner,
            signs,
            n_orig: n,
        })
    }

    pub fn inner(&self) -> &CirculantOperator {
        &self.inner
    }

    /// `b`, entries ±1.
    pub fn signs(&self) -> &[f64] {
        &self.signs
    }

    pub fn padded_dim(&self) -> usize {
        self.inner.n
    }

    pub fn original_dim(&self) -> usize {
        self.n_orig
    }

    /// `H · diag(b) · pad(x)`.
    pub fn rotate(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_input(x, self.n_orig)?;
        let mut buf = vec![0.0; self.inner.n];
        for ((slot, &v), &b) in buf.iter_mut().zip(x).zip(&self.signs) {
            *slot = v * b;
        }
        fwht_in_place(&mut buf)?;
        Ok(buf)
    }

    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        let rotated = self.rotate(x)?;
        self.inner.project_unchecked(&rotated)
    }
}

/// Any of the three embedding operators.
#[derive(Debug, Clone)]
pub enum Operator {
    Gaussian(GaussianOperator),
    Circulant(CirculantOperator),
    Randomized(RandomizedOperator),
}

impl From<GaussianOperator> for Operator {
    fn from(op: GaussianOperator) -> Self {
        Self::Gaussian(op)
    }
}

impl From<CirculantOperator> for Operator {
    fn from(op: CirculantOperator) -> Self {
        Self::Circulant(op)
    }
}

impl From<RandomizedOperator> for Operator {
    fn from(op: RandomizedOperator) -> Self {
        Self::Randomized(op)
    }
}

/// Length of the `BEOP1` encoding.
pub const ENCODED_LEN: usize = 30;
const MAGIC: &[u8; 5] = b"BEOP1";

impl Operator {
    pub fn sample(kind: OperatorKind, n: usize, k: usize, seed: u64) -> Result<Self> {
        Ok(match kind {
            OperatorKind::Gaussian => GaussianOperator::sample(n, k, seed)?.into(),
            OperatorKind::Circulant => CirculantOperator::sample(n, k, seed)?.into(),
            OperatorKind::Randomized => RandomizedOperator::sample(n, k, seed)?.into(),
        })
    }

    pub fn kind(&self) -> OperatorKind {
        match self {
            Self::Gaussian(_) => OperatorKind::Gaussian,
            Self::Circulant(_) => OperatorKind::Circulant,
            Self::Randomized(_) => OperatorKind::Randomized,
        }
    }

    /// Dimension of the inputs accepted by [`Operator::embed`].
    pub fn input_dim(&self) -> usize {
        match self {
            Self::Gaussian(op) => op.n,
            Self::Circulant(op) => op.n,
            Self::Randomized(op) => op.n_orig,
        }
    }

    /// Code length `k`.
    pub fn code_len(&self) -> usize {
        match self {
            Self::Gaussian(op) => op.k,
            Self::Circulant(op) => op.k,
            Self::Randomized(op) => op.inner.k,
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            Self::Gaussian(op) => op.seed,
            Self::Circulant(op) => op.seed,
            Self::Randomized(op) => op.inner.seed,
        }
    }

    /// The real-valued projection `A x` before the sign.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        match self {
            Self::Gaussian(op) => op.project(x),
            Self::Circulant(op) => op.project(x),
            Self::Randomized(op) => op.project(x),
        }
    }

    /// `sgn(A x)` with `sgn(0) = +1`.
    pub fn embed(&self, x: &[f64]) -> Result<BinaryCode> {
        Ok(BinaryCode::from_signs(&self.project(x)?))
    }

    /// Embeds every point, in input order.
    pub fn embed_all(&self, ps: &PointSet) -> Result<Vec<BinaryCode>> {
        par::map_indexed(ps.len(), |i| self.embed(ps.point(i)))
            .into_iter()
            .collect()
    }

    /// `BEOP1` encoding: magic, kind byte, then little-endian `u64` n, k, seed.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let modulation = match self {
            Self::Gaussian(_) => Modulation::Gaussian,
            Self::Circulant(op) => op.modulation,
            Self::Randomized(op) => op.inner.modulation,
        };
        if modulation != Modulation::Gaussian {
            return Err(invalid!("only Gaussian-modulated operators can be encoded"));
        }
        let mut out = Vec::with_capacity(ENCODED_LEN);
        out.extend_from_slice(MAGIC);
        out.push(self.kind().code());
        for field in [self.input_dim() as u64, self.code_len() as u64, self.seed()] {
            out.extend_from_slice(&field.to_le_bytes());
        }
        Ok(out)
    }

    /// Decodes `BEOP1` bytes and regenerates the operator.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let parse = |offset: usize, message: &str| Error::Parse {
            offset,
            message: message.to_string(),
        };
        if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
            let offset = bytes.iter().zip(MAGIC).take_while(|(a, b)| a == b).count();
            return Err(parse(offset, "bad magic, expected \"BEOP1\""));
        }
        let kind_byte = *bytes
            .get(5)
            .ok_or_else(|| parse(bytes.len(), "truncated before kind byte"))?;
        let kind = OperatorKind::from_code(kind_byte).ok_or_else(|| parse(5, "kind byte must be 0, 1 or 2"))?;
        let field = |offset: usize, name: &str| -> Result<u64> {
            let raw = bytes.get(offset..offset + 8).ok_or_else(|| Error::Parse {
                offset: bytes.len(),
                message: alloc::format!("truncated in field {name}"),
            })?;
            Ok(u64::from_le_bytes(raw.try_into().expect("slice of length 8")))
        };
        let n = field(6, "n")?;
        let k = field(14, "k")?;
        let seed = field(22, "seed")?;
        if bytes.len() != ENCODED_LEN {
            return Err(parse(ENCODED_LEN, "trailing bytes after operator record"));
        }
        let n = usize::try_from(n).map_err(|_| parse(6, "n does not fit in usize"))?;
        let k = usize::try_from(k).map_err(|_| parse(14, "k does not fit in usize"))?;
        Self::sample(kind, n, k, seed).map_err(|e| match e {
            Error::InvalidArgument(m) => Error::Parse { offset: 6, message: m },
            other => other,
        })
    }
}

/// `sgn(A x)` for any operator.
pub fn embed(op: &Operator, x: &[f64]) -> Result<BinaryCode> {
    op.embed(x)
}
