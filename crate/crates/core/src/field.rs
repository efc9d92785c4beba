//! Finite-field arithmetic over GF(2^m) and GF(p), and dense matrices over
//! those fields.
//!
//! Symbols are plain `u32` values in `[0, q)`. The hot paths (`GaloisField`
//! and `FieldMatrix`) work on raw symbols; `FieldElement` is the checked
//! wrapper that refuses to mix elements of different fields.
//!
//! Multiplication goes through a single log/antilog table per field. The
//! tables are built once per `FieldSpec` and shared process-wide.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A raw field symbol, always in `[0, q)` for the field it belongs to.
pub type Symbol = u32;

/// Reduction polynomials for GF(2^m), indexed by `m - 1`. Bit `i` is the
/// coefficient of `x^i`. Every entry is primitive, so `x` generates the
/// multiplicative group. The products these define are part of the share
/// file format.
pub const BINARY_POLYNOMIALS: [u32; 16] = [
    0x3,     // x + 1
    0x7,     // x^2 + x + 1
    0xB,     // x^3 + x + 1
    0x13,    // x^4 + x + 1
    0x25,    // x^5 + x^2 + 1
    0x43,    // x^6 + x + 1
    0x89,    // x^7 + x^3 + 1
    0x11D,   // x^8 + x^4 + x^3 + x^2 + 1
    0x211,   // x^9 + x^4 + 1
    0x409,   // x^10 + x^3 + 1
    0x805,   // x^11 + x^2 + 1
    0x1053,  // x^12 + x^6 + x^4 + x + 1
    0x201B,  // x^13 + x^4 + x^3 + x + 1
    0x4443,  // x^14 + x^10 + x^6 + x + 1
    0x8003,  // x^15 + x + 1
    0x1100B, // x^16 + x^12 + x^3 + x + 1
];

/// Largest prime modulus accepted; symbols must fit in two bytes.
pub const MAX_PRIME: u32 = 65521;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("unsupported field: {0}")]
    Unsupported(String),
    #[error("mixed-field operands: {0} and {1}")]
    MixedFields(FieldSpec, FieldSpec),
    #[error("no inverse of zero")]
    ZeroInverse,
    #[error("value {value} is not an element of {field}")]
    OutOfRange { value: u64, field: FieldSpec },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("no solution: system is inconsistent")]
    NoSolution,
    #[error("underdetermined system: rank {rank} < {unknowns} unknowns")]
    Underdetermined { rank: usize, unknowns: usize },
    #[error("matrix is singular")]
    Singular,
}

/// Which finite field: a binary extension GF(2^m) or a prime field GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldSpec {
    Binary { degree: u8 },
    Prime { modulus: u32 },
}

impl FieldSpec {
    /// GF(2^16) with `x^16 + x^12 + x^3 + x + 1`.
    pub const DEFAULT: FieldSpec = FieldSpec::Binary { degree: 16 };

    pub fn binary(degree: u8) -> Result<Self, FieldError> {
        let spec = FieldSpec::Binary { degree };
        spec.validate()?;
        Ok(spec)
    }

    pub fn prime(modulus: u32) -> Result<Self, FieldError> {
        let spec = FieldSpec::Prime { modulus };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        match *self {
            FieldSpec::Binary { degree } if (1..=16).contains(&degree) => Ok(()),
            FieldSpec::Binary { degree } => Err(FieldError::Unsupported(format!(
                "GF(2^{degree}): degree must be in 1..=16"
            ))),
            FieldSpec::Prime { modulus } if modulus > MAX_PRIME => Err(FieldError::Unsupported(
                format!("GF({modulus}): prime moduli are limited to {MAX_PRIME}"),
            )),
            FieldSpec::Prime { modulus } if is_prime(modulus) => Ok(()),
            FieldSpec::Prime { modulus } => Err(FieldError::Unsupported(format!(
                "GF({modulus}): modulus is not prime"
            ))),
        }
    }

    /// Field order q.
    pub fn order(&self) -> u32 {
        match *self {
            FieldSpec::Binary { degree } => 1u32 << degree,
            FieldSpec::Prime { modulus } => modulus,
        }
    }

    pub fn is_binary(&self) -> bool {
        matches!(self, FieldSpec::Binary { .. })
    }

    /// Bytes used to serialize one symbol: 1 when q ≤ 256, else 2.
    pub fn symbol_bytes(&self) -> usize {
        if self.order() <= 256 {
            1
        } else {
            2
        }
    }

    /// The smallest prime field of order at least `min_order`.
    pub fn smallest_prime_field(min_order: u32) -> Result<Self, FieldError> {
        (min_order.max(2)..=MAX_PRIME)
            .find(|&p| is_prime(p))
            .map(|modulus| FieldSpec::Prime { modulus })
            .ok_or_else(|| {
                FieldError::Unsupported(format!("no supported prime field of order ≥ {min_order}"))
            })
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Binary { degree } => write!(f, "GF(2^{degree})"),
            FieldSpec::Prime { modulus } => write!(f, "GF({modulus})"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    /// Accepts `2^m`, `GF(2^m)`, `p` or `GF(p)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        let inner = trimmed
            .strip_prefix("GF(")
            .or_else(|| trimmed.strip_prefix("gf("))
            .and_then(|rest| rest.strip_suffix(')'))
            .unwrap_or(trimmed);
        let bad = || FieldError::Unsupported(format!("cannot parse field '{s}'"));
        if let Some(degree) = inner.strip_prefix("2^") {
            FieldSpec::binary(degree.parse().map_err(|_| bad())?)
        } else {
            FieldSpec::prime(inner.parse().map_err(|_| bad())?)
        }
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

struct Tables {
    /// exp[i] = g^i for i in [0, 2(q-1)), doubled so log sums need no modulo.
    exp: Vec<Symbol>,
    /// log[a] for a != 0; log[0] is unused.
    log: Vec<u32>,
}

/// Product used only while building tables: carry-less multiply and reduce
/// for binary fields, modular product for prime fields.
fn table_mul(spec: FieldSpec, a: Symbol, b: Symbol) -> Symbol {
    match spec {
        FieldSpec::Prime { modulus } => ((a as u64 * b as u64) % modulus as u64) as Symbol,
        FieldSpec::Binary { degree } => {
            let poly = BINARY_POLYNOMIALS[degree as usize - 1];
            let mut acc: u32 = 0;
            let mut a = a;
            let mut b = b;
            while b != 0 {
                if b & 1 != 0 {
                    acc ^= a;
                }
                b >>= 1;
                a <<= 1;
                if a & (1 << degree) != 0 {
                    a ^= poly;
                }
            }
            acc
        }
    }
}

fn build_tables(spec: FieldSpec) -> Tables {
    let q = spec.order();
    let group = (q - 1) as usize;
    let mut exp = vec![0; 2 * group.max(1)];
    let mut log = vec![0; q as usize];
    // For the published polynomials x (= 2) is a generator; the search
    // also covers prime fields, where the smallest primitive root is used.
    let mut generator = if q == 2 { 1 } else { 2 };
    loop {
        let mut x: Symbol = 1;
        let mut cycle = 0;
        loop {
            exp[cycle] = x;
            cycle += 1;
            x = table_mul(spec, x, generator);
            if x == 1 || cycle == group {
                break;
            }
        }
        if x == 1 && cycle == group {
            break;
        }
        generator += 1;
    }
    for i in 0..group {
        log[exp[i] as usize] = i as u32;
        exp[i + group] = exp[i];
    }
    Tables { exp, log }
}

fn shared_tables(spec: FieldSpec) -> Arc<Tables> {
    static CACHE: OnceLock<Mutex<HashMap<FieldSpec, Arc<Tables>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry(spec)
        .or_insert_with(|| Arc::new(build_tables(spec)))
        .clone()
}

/// Arithmetic context for one field. Cheap to clone.
#[derive(Clone)]
pub struct GaloisField {
    spec: FieldSpec,
    order: u32,
    binary: bool,
    tables: Arc<Tables>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GaloisField({})", self.spec)
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for GaloisField {}

impl GaloisField {
    pub fn new(spec: FieldSpec) -> Result<Self, FieldError> {
        spec.validate()?;
        Ok(GaloisField {
            spec,
            order: spec.order(),
            binary: spec.is_binary(),
            tables: shared_tables(spec),
        })
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn contains(&self, value: Symbol) -> bool {
        value < self.order
    }

    pub fn check(&self, value: u64) -> Result<Symbol, FieldError> {
        if value < self.order as u64 {
            Ok(value as Symbol)
        } else {
            Err(FieldError::OutOfRange {
                value,
                field: self.spec,
            })
        }
    }

    pub fn element(&self, value: u64) -> Result<FieldElement, FieldError> {
        Ok(FieldElement {
            value: self.check(value)?,
            field: self.clone(),
        })
    }

    #[inline]
    pub fn add(&self, a: Symbol, b: Symbol) -> Symbol {
        if self.binary {
            a ^ b
        } else {
            let s = a + b;
            if s >= self.order {
                s - self.order
            } else {
                s
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Symbol) -> Symbol {
        if self.binary || a == 0 {
            a
        } else {
            self.order - a
        }
    }

    #[inline]
    pub fn sub(&self, a: Symbol, b: Symbol) -> Symbol {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Symbol, b: Symbol) -> Symbol {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &self.tables;
        t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: Symbol) -> Result<Symbol, FieldError> {
        if a == 0 {
            return Err(FieldError::ZeroInverse);
        }
        let t = &self.tables;
        let group = self.order - 1;
        Ok(t.exp[((group - t.log[a as usize]) % group) as usize])
    }

    pub fn div(&self, a: Symbol, b: Symbol) -> Result<Symbol, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn sum<I: IntoIterator<Item = Symbol>>(&self, items: I) -> Symbol {
        items.into_iter().fold(0, |acc, x| self.add(acc, x))
    }

    /// `dst[i] -= factor * src[i]` for every i.
    pub fn sub_scaled(&self, dst: &mut [Symbol], src: &[Symbol], factor: Symbol) {
        if factor == 0 {
            return;
        }
        let t = &self.tables;
        let lf = t.log[factor as usize];
        if self.binary {
            for (d, &s) in dst.iter_mut().zip(src) {
                if s != 0 {
                    *d ^= t.exp[(lf + t.log[s as usize]) as usize];
                }
            }
        } else {
            let q = self.order;
            for (d, &s) in dst.iter_mut().zip(src) {
                if s != 0 {
                    let p = t.exp[(lf + t.log[s as usize]) as usize];
                    *d = if *d >= p { *d - p } else { *d + q - p };
                }
            }
        }
    }

    /// `dst[i] += factor * src[i]` for every i.
    pub fn add_scaled(&self, dst: &mut [Symbol], src: &[Symbol], factor: Symbol) {
        self.sub_scaled(dst, src, self.neg(factor));
    }

    pub fn scale(&self, row: &mut [Symbol], factor: Symbol) {
        for x in row {
            *x = self.mul(*x, factor);
        }
    }

    pub fn dot(&self, a: &[Symbol], b: &[Symbol]) -> Symbol {
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}

/// A checked field element that knows which field it belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    value: Symbol,
    field: GaloisField,
}

impl FieldElement {
    pub fn value(&self) -> Symbol {
        self.value
    }

    pub fn spec(&self) -> FieldSpec {
        self.field.spec
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.field.spec == other.field.spec {
            Ok(())
        } else {
            Err(FieldError::MixedFields(self.field.spec, other.field.spec))
        }
    }

    fn with(&self, value: Symbol) -> FieldElement {
        FieldElement {
            value,
            field: self.field.clone(),
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        Ok(self.with(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        Ok(self.with(self.field.inv(self.value)?))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.value, self.field.spec)
    }
}

/// Dense row-major matrix over a `GaloisField`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldMatrix {
    field: GaloisField,
    rows: usize,
    cols: usize,
    data: Vec<Symbol>,
}

impl FieldMatrix {
    pub fn new(
        field: &GaloisField,
        rows: usize,
        cols: usize,
        data: Vec<Symbol>,
    ) -> Result<Self, FieldError> {
        if data.len() != rows * cols {
            return Err(FieldError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&v| !field.contains(v)) {
            return Err(FieldError::OutOfRange {
                value: bad as u64,
                field: field.spec,
            });
        }
        Ok(FieldMatrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: &GaloisField, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &GaloisField, size: usize) -> Self {
        let mut m = Self::zeros(field, size, size);
        for i in 0..size {
            m.data[i * size + i] = 1;
        }
        m
    }

    pub fn from_rows(
        field: &GaloisField,
        cols: usize,
        rows: &[Vec<Symbol>],
    ) -> Result<Self, FieldError> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(FieldError::DimensionMismatch(format!(
                "row of length {} in a matrix with {cols} columns",
                r.len()
            )));
        }
        Self::new(field, rows.len(), cols, rows.concat())
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Symbol] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Symbol {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Symbol) {
        debug_assert!(self.field.contains(value));
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Symbol] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [Symbol] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    /// `[self | other]`.
    pub fn hconcat(&self, other: &FieldMatrix) -> Result<Self, FieldError> {
        self.same_field(other)?;
        if self.rows != other.rows {
            return Err(FieldError::DimensionMismatch(format!(
                "cannot join {} rows with {} rows",
                self.rows, other.rows
            )));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Ok(FieldMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols,
            data,
        })
    }

    /// Submatrix made of the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        FieldMatrix {
            field: self.field.clone(),
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn mul_vec(&self, x: &[Symbol]) -> Result<Vec<Symbol>, FieldError> {
        if x.len() != self.cols {
            return Err(FieldError::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.field.dot(self.row(r), x))
            .collect())
    }

    pub fn matmul(&self, other: &FieldMatrix) -> Result<Self, FieldError> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(FieldError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(&self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a != 0 {
                    let (f, src) = (&self.field, other.row(k));
                    f.add_scaled(out.row_mut(r), src, a);
                }
            }
        }
        Ok(out)
    }

    /// Row rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut work = self.data.clone();
        forward_eliminate(&self.field, &mut work, self.rows, self.cols, self.cols).len()
    }

    /// Solves `self · x = y` for a system with full column rank.
    pub fn solve(&self, y: &[Symbol]) -> Result<Vec<Symbol>, FieldError> {
        if y.len() != self.rows {
            return Err(FieldError::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                y.len(),
                self.rows
            )));
        }
        if let Some(&bad) = y.iter().find(|&&v| !self.field.contains(v)) {
            return Err(FieldError::OutOfRange {
                value: bad as u64,
                field: self.field.spec,
            });
        }
        let n = self.cols;
        let width = n + 1;
        let mut work = Vec::with_capacity(self.rows * width);
        for (r, &rhs) in y.iter().enumerate() {
            work.extend_from_slice(self.row(r));
            work.push(rhs);
        }
        let pivots = forward_eliminate(&self.field, &mut work, self.rows, width, n);
        let rank = pivots.len();
        if (rank..self.rows).any(|r| work[r * width + n] != 0) {
            return Err(FieldError::NoSolution);
        }
        if rank < n {
            return Err(FieldError::Underdetermined { rank, unknowns: n });
        }
        // Full column rank: pivot i sits in column i and is normalized to 1.
        let mut x = vec![0; n];
        for i in (0..n).rev() {
            let row = &work[i * width..(i + 1) * width];
            let tail = self.field.dot(&row[i + 1..n], &x[i + 1..]);
            x[i] = self.field.sub(row[n], tail);
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Self, FieldError> {
        if self.rows != self.cols {
            return Err(FieldError::DimensionMismatch(format!(
                "inverse of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let width = 2 * n;
        let mut work = vec![0; n * width];
        for r in 0..n {
            work[r * width..r * width + n].copy_from_slice(self.row(r));
            work[r * width + n + r] = 1;
        }
        let pivots = forward_eliminate(&self.field, &mut work, n, width, n);
        if pivots.len() < n {
            return Err(FieldError::Singular);
        }
        for i in (0..n).rev() {
            let (above, rest) = work.split_at_mut(i * width);
            let pivot_row = &rest[..width];
            for r in 0..i {
                let row = &mut above[r * width..(r + 1) * width];
                let f = row[i];
                self.field.sub_scaled(&mut row[i..], &pivot_row[i..], f);
            }
        }
        let mut inv = Self::zeros(&self.field, n, n);
        for r in 0..n {
            inv.row_mut(r)
                .copy_from_slice(&work[r * width + n..(r + 1) * width]);
        }
        Ok(inv)
    }

    fn same_field(&self, other: &FieldMatrix) -> Result<(), FieldError> {
        if self.field.spec == other.field.spec {
            Ok(())
        } else {
            Err(FieldError::MixedFields(self.field.spec, other.field.spec))
        }
    }
}

/// Forward elimination with first-nonzero pivoting on the first
/// `pivot_cols` columns of a row-major `rows x cols` buffer. Pivot rows end
/// up in positions `0..rank`, normalized so each pivot entry is 1. Returns
/// the pivot columns.
fn forward_eliminate(
    field: &GaloisField,
    data: &mut [Symbol],
    rows: usize,
    cols: usize,
    pivot_cols: usize,
) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| data[i * cols + c] != 0) else {
            continue;
        };
        if p != r {
            for j in c..cols {
                data.swap(r * cols + j, p * cols + j);
            }
        }
        let inv = field
            .inv(data[r * cols + c])
            .expect("pivot is nonzero by selection");
        field.scale(&mut data[r * cols + c..(r + 1) * cols], inv);
        let (top, bottom) = data.split_at_mut((r + 1) * cols);
        let pivot_row = &top[r * cols + c..];
        for row in bottom.chunks_exact_mut(cols) {
            let f = row[c];
            if f != 0 {
                field.sub_scaled(&mut row[c..], pivot_row, f);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf(spec: &str) -> GaloisField {
        GaloisField::new(spec.parse().unwrap()).unwrap()
    }

    /// Schoolbook polynomial product over GF(2) followed by long division.
    fn clmul_oracle(a: u32, b: u32, poly: u32, degree: u32) -> u32 {
        let mut prod: u64 = 0;
        for i in 0..32 {
            if b >> i & 1 == 1 {
                prod ^= (a as u64) << i;
            }
        }
        for bit in (degree..64).rev() {
            if prod >> bit & 1 == 1 {
                prod ^= (poly as u64) << (bit - degree);
            }
        }
        prod as u32
    }

    fn random_matrix(f: &GaloisField, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> FieldMatrix {
        let data = (0..rows * cols).map(|_| rng.gen_range(0..f.order())).collect();
        FieldMatrix::new(f, rows, cols, data).unwrap()
    }

    #[test]
    fn small_field_examples() {
        let f7 = gf("7");
        assert_eq!(f7.add(3, 5), 1);
        assert_eq!(f7.mul(3, 5), 1);
        assert_eq!(f7.inv(3).unwrap(), 5);
        for a in 0..7 {
            assert_eq!(f7.add(a, 0), a);
            assert_eq!(f7.mul(a, 1), a);
        }

        let f16 = gf("2^4");
        assert_eq!(f16.add(0b1010, 0b0110), 0b1100);
        assert_eq!(f16.mul(0b0010, 0b1000), 0b0011);
        for m in 1..=16u8 {
            let f = GaloisField::new(FieldSpec::binary(m).unwrap()).unwrap();
            assert_eq!(f.inv(1).unwrap(), 1);
        }
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(gf("7").inv(0), Err(FieldError::ZeroInverse));
        assert_eq!(gf("2^16").inv(0), Err(FieldError::ZeroInverse));
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = gf("7").element(3).unwrap();
        let b = gf("11").element(3).unwrap();
        assert!(matches!(a.add(&b), Err(FieldError::MixedFields(..))));
        assert!(matches!(a.mul(&b), Err(FieldError::MixedFields(..))));
        assert_eq!(a.mul(&a).unwrap().value(), 2);
        assert!(gf("7").element(7).is_err());
    }

    #[test]
    fn spec_parsing_and_validation() {
        assert_eq!("2^16".parse::<FieldSpec>().unwrap(), FieldSpec::DEFAULT);
        assert_eq!("GF(13)".parse::<FieldSpec>().unwrap(), FieldSpec::Prime { modulus: 13 });
        assert!("2^17".parse::<FieldSpec>().is_err());
        assert!("9".parse::<FieldSpec>().is_err());
        assert!("1".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::smallest_prime_field(6).unwrap().order(), 7);
        assert_eq!(FieldSpec::smallest_prime_field(12).unwrap().order(), 13);
    }

    #[test]
    fn tables_use_the_published_polynomials_as_primitive() {
        // x must generate the multiplicative group for every degree.
        for m in 2..=16u32 {
            let poly = BINARY_POLYNOMIALS[m as usize - 1];
            let mut x = 1u32;
            let mut order = 0u32;
            loop {
                x = clmul_oracle(x, 2, poly, m);
                order += 1;
                if x == 1 {
                    break;
                }
            }
            assert_eq!(order, (1 << m) - 1, "degree {m}");
        }
    }

    #[test]
    fn binary_mul_matches_polynomial_oracle() {
        for m in 1..=8u32 {
            let f = GaloisField::new(FieldSpec::binary(m as u8).unwrap()).unwrap();
            let poly = BINARY_POLYNOMIALS[m as usize - 1];
            for a in 0..1u32 << m {
                for b in 0..1u32 << m {
                    assert_eq!(f.mul(a, b), clmul_oracle(a, b, poly, m));
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in 9..=16u32 {
            let f = GaloisField::new(FieldSpec::binary(m as u8).unwrap()).unwrap();
            let poly = BINARY_POLYNOMIALS[m as usize - 1];
            for _ in 0..2000 {
                let a = rng.gen_range(0..1u32 << m);
                let b = rng.gen_range(0..1u32 << m);
                assert_eq!(f.mul(a, b), clmul_oracle(a, b, poly, m));
            }
        }
    }

    fn check_axioms_exhaustively(f: &GaloisField) {
        let q = f.order();
        for a in 0..q {
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            assert_eq!(f.add(a, f.neg(a)), 0);
            for b in 0..q {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..q {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_gf7_gf16() {
        check_axioms_exhaustively(&gf("7"));
        check_axioms_exhaustively(&gf("2^4"));
    }

    proptest! {
        #[test]
        fn field_axioms_gf65536(a in 0u32..65536, b in 0u32..65536, c in 0u32..65536) {
            let f = gf("2^16");
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            if a != 0 {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }

        #[test]
        fn rank_is_transpose_invariant(seed in any::<u64>(), rows in 0usize..7, cols in 0usize..7) {
            let f = gf("7");
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            // Sparse entries make rank deficiency common.
            let data = (0..rows * cols).map(|_| if rng.gen_bool(0.4) { rng.gen_range(0..7) } else { 0 }).collect();
            let m = FieldMatrix::new(&f, rows, cols, data).unwrap();
            prop_assert_eq!(m.rank(), m.transpose().rank());
            prop_assert!(m.rank() <= rows.min(cols));
        }

        #[test]
        fn rank_of_concatenation_is_bounded(seed in any::<u64>()) {
            let f = gf("2^4");
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&f, 5, rng.gen_range(0..4), &mut rng);
            let b = random_matrix(&f, 5, rng.gen_range(0..4), &mut rng);
            let joined = a.hconcat(&b).unwrap().rank();
            prop_assert!(joined >= a.rank().max(b.rank()));
            prop_assert!(joined <= a.rank() + b.rank());
        }

        #[test]
        fn solve_inverts_apply(seed in any::<u64>(), rows in 1usize..8) {
            let f = gf("7");
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let cols = rng.gen_range(1..=rows);
            let a = random_matrix(&f, rows, cols, &mut rng);
            prop_assume!(a.rank() == cols);
            let x: Vec<u32> = (0..cols).map(|_| rng.gen_range(0..7)).collect();
            let y = a.mul_vec(&x).unwrap();
            prop_assert_eq!(a.solve(&y).unwrap(), x);
        }
    }

    #[test]
    fn rank_examples() {
        let f = gf("7");
        assert_eq!(FieldMatrix::zeros(&f, 3, 4).rank(), 0);
        assert_eq!(FieldMatrix::identity(&f, 5).rank(), 5);
        let m = FieldMatrix::from_rows(&f, 3, &[vec![1, 2, 3], vec![4, 0, 6], vec![5, 2, 2]]).unwrap();
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn solve_identity_and_errors() {
        let f = gf("7");
        let id = FieldMatrix::identity(&f, 3);
        assert_eq!(id.solve(&[4, 5, 6]).unwrap(), vec![4, 5, 6]);

        let singular = FieldMatrix::from_rows(&f, 2, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(
            singular.solve(&[3, 6]),
            Err(FieldError::Underdetermined { rank: 1, unknowns: 2 })
        );
        assert_eq!(singular.solve(&[3, 5]), Err(FieldError::NoSolution));
        assert!(matches!(singular.solve(&[1]), Err(FieldError::DimensionMismatch(_))));
    }

    #[test]
    fn random_invertible_round_trip_gf7() {
        let f = gf("7");
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 50 {
            let a = random_matrix(&f, 4, 4, &mut rng);
            if a.rank() < 4 {
                continue;
            }
            let x: Vec<u32> = (0..4).map(|_| rng.gen_range(0..7)).collect();
            assert_eq!(a.solve(&a.mul_vec(&x).unwrap()).unwrap(), x);
            let inv = a.inverse().unwrap();
            assert_eq!(a.matmul(&inv).unwrap(), FieldMatrix::identity(&f, 4));
            checked += 1;
        }
    }

    #[test]
    fn inverse_of_singular_matrix_fails() {
        let f = gf("2^8");
        let m = FieldMatrix::from_rows(&f, 2, &[vec![3, 5], vec![3, 5]]).unwrap();
        assert_eq!(m.inverse(), Err(FieldError::Singular));
    }
}
