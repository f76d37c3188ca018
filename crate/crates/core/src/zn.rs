//! Z_N labels, clock and shift operators, and generalized Pauli strings.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Opaque edge identifier handed out by the geometry layer.
pub type EdgeId = usize;

/// An element of Z_N.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupLabel {
    value: u32,
    modulus: u32,
}

impl GroupLabel {
    /// Reduces `value` into `[0, modulus)`.
    pub fn new(value: i64, modulus: u32) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        let value = value.rem_euclid(modulus as i64) as u32;
        Self { value, modulus }
    }

    pub fn zero(modulus: u32) -> Self {
        Self::new(0, modulus)
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }
}

impl std::ops::Add for GroupLabel {
    type Output = GroupLabel;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
        GroupLabel::new(self.value as i64 + rhs.value as i64, self.modulus)
    }
}

impl std::ops::Neg for GroupLabel {
    type Output = GroupLabel;
    fn neg(self) -> Self {
        GroupLabel::new(-(self.value as i64), self.modulus)
    }
}

impl std::ops::Sub for GroupLabel {
    type Output = GroupLabel;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

/// e^{2πi·j·power/N}
pub fn clock_phase(j: GroupLabel, power: i64) -> Complex64 {
    phase(j.value as i64 * power, j.modulus as usize)
}

/// ω^k with ω = e^{2πi/N}; the exponent is reduced first so large powers stay exact.
pub fn phase(k: i64, n: usize) -> Complex64 {
    let k = k.rem_euclid(n as i64);
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 2 * k == n as i64 {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * k == n as i64 {
        return Complex64::new(0.0, 1.0);
    }
    if 4 * k == 3 * n as i64 {
        return Complex64::new(0.0, -1.0);
    }
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}

/// (j + power) mod N
pub fn shift_label(j: GroupLabel, power: i64) -> GroupLabel {
    GroupLabel::new(j.value as i64 + power, j.modulus)
}

/// The single-site factor Z^z X^x (X acts first).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliFactor {
    pub z: u32,
    pub x: u32,
}

impl PauliFactor {
    pub fn is_identity(self) -> bool {
        self.z == 0 && self.x == 0
    }

    /// ⟨label'| Z^z X^x |label⟩ is nonzero only for label' = label + x; returns (label', phase).
    pub fn act(self, label: usize, n: usize) -> (usize, Complex64) {
        let out = (label + self.x as usize) % n;
        (out, phase(self.z as i64 * out as i64, n))
    }
}

/// Sparse product of single-site factors; identity factors are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliString {
    modulus: u32,
    factors: BTreeMap<EdgeId, PauliFactor>,
}

impl PauliString {
    pub fn identity(modulus: u32) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        Self { modulus, factors: BTreeMap::new() }
    }

    /// Builds a string from (edge, z, x) triples. Powers are reduced mod N; identity
    /// factors are dropped; a repeated edge is an error.
    pub fn from_factors(modulus: u32, items: impl IntoIterator<Item = (EdgeId, i64, i64)>) -> Result<Self> {
        let mut s = Self::identity(modulus);
        for (e, z, x) in items {
            if s.factors.contains_key(&e) {
                return Err(Error::InvalidArgument(format!("edge {e} appears twice")));
            }
            s.set(e, z, x);
        }
        Ok(s)
    }

    /// Sets (or clears, if both powers vanish mod N) the factor on `edge`.
    pub fn set(&mut self, edge: EdgeId, z: i64, x: i64) {
        let n = self.modulus as i64;
        let f = PauliFactor { z: z.rem_euclid(n) as u32, x: x.rem_euclid(n) as u32 };
        if f.is_identity() {
            self.factors.remove(&edge);
        } else {
            self.factors.insert(edge, f);
        }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn weight(&self) -> usize {
        self.factors.len()
    }

    pub fn get(&self, edge: EdgeId) -> Option<PauliFactor> {
        self.factors.get(&edge).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, PauliFactor)> + '_ {
        self.factors.iter().map(|(e, f)| (*e, *f))
    }

    pub fn is_diagonal(&self) -> bool {
        self.factors.values().all(|f| f.x == 0)
    }

    /// Dense matrix on `k` sites, site 0 being the most significant digit of the index.
    pub fn to_dense(&self, k: usize) -> Result<DMatrix<Complex64>> {
        if let Some((&e, _)) = self.factors.iter().find(|(e, _)| **e >= k) {
            return Err(Error::EdgeOutsidePatch(e));
        }
        let n = self.modulus as usize;
        let dim = checked_pow(n, k)?;
        let mut m = DMatrix::zeros(dim, dim);
        let mut digits = vec![0usize; k];
        for col in 0..dim {
            decode(col, n, &mut digits);
            let (row, amp) = self.apply_to_digits(&digits, n);
            m[(row, col)] = amp;
        }
        Ok(m)
    }

    fn apply_to_digits(&self, digits: &[usize], n: usize) -> (usize, Complex64) {
        let mut amp = Complex64::new(1.0, 0.0);
        let mut row = 0usize;
        for (s, &d) in digits.iter().enumerate() {
            let (out, p) = match self.factors.get(&s) {
                Some(f) => f.act(d, n),
                None => (d, Complex64::new(1.0, 0.0)),
            };
            amp *= p;
            row = row * n + out;
        }
        (row, amp)
    }
}

pub(crate) fn checked_pow(n: usize, k: usize) -> Result<usize> {
    (n as u128)
        .checked_pow(k as u32)
        .filter(|v| *v <= usize::MAX as u128 / 2)
        .map(|v| v as usize)
        .ok_or_else(|| Error::CapExceeded { what: "dimension".into(), needed: u128::MAX, cap: usize::MAX as u128 })
}

/// Writes the base-`n` digits of `index` into `out`, most significant first.
pub(crate) fn decode(mut index: usize, n: usize, out: &mut [usize]) {
    for d in out.iter_mut().rev() {
        *d = index % n;
        index /= n;
    }
}

/// Expands a dense k-site operator in the generalized Pauli basis, using the
/// inner product Tr(A†B)/N^k. Terms with |coefficient| < 1e-14 are dropped.
pub fn pauli_basis_decompose(op: &DMatrix<Complex64>, modulus: u32) -> Result<Vec<(Complex64, PauliString)>> {
    let n = modulus as usize;
    if modulus < 2 {
        return Err(Error::InvalidArgument("modulus must be at least 2".into()));
    }
    let dim = op.nrows();
    if op.ncols() != dim {
        return Err(Error::Dimension(format!("operator is {}x{}", dim, op.ncols())));
    }
    let mut k = 0usize;
    let mut p = 1usize;
    while p < dim {
        p *= n;
        k += 1;
    }
    if p != dim {
        return Err(Error::Dimension(format!("{dim} is not a power of {n}")));
    }
    let terms = checked_pow(n, 2 * k)?;
    let mut out = Vec::new();
    let mut powers = vec![0usize; 2 * k];
    let mut digits = vec![0usize; k];
    for t in 0..terms {
        decode(t, n, &mut powers);
        let items = (0..k).map(|s| (s, powers[2 * s] as i64, powers[2 * s + 1] as i64));
        let ps = PauliString::from_factors(modulus, items)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for col in 0..dim {
            decode(col, n, &mut digits);
            let (row, amp) = ps.apply_to_digits(&digits, n);
            acc += amp.conj() * op[(row, col)];
        }
        let coeff = acc / dim as f64;
        if coeff.norm() >= 1e-14 {
            out.push((coeff, ps));
        }
    }
    Ok(out)
}

/// Inverse of [`pauli_basis_decompose`].
pub fn pauli_reconstruct(terms: &[(Complex64, PauliString)], k: usize) -> Result<DMatrix<Complex64>> {
    let modulus = terms.first().map(|(_, p)| p.modulus()).unwrap_or(2);
    let dim = checked_pow(modulus as usize, k)?;
    let mut m = DMatrix::zeros(dim, dim);
    for (c, p) in terms {
        m += p.to_dense(k)? * *c;
    }
    Ok(m)
}
