//! Systematic Reed–Solomon code used as the MDS layer.
//!
//! Codeword position `j` is the evaluation of the message polynomial at the
//! field element `j`. Positions `0..k_code` are systematic (the codeword
//! there equals the message), so the message polynomial is the interpolant
//! through `(j, message[j])`. The parity positions `k_code..n_code` are what
//! the layered code actually stores.

use thiserror::Error;

use crate::field::{FieldError, FieldMatrix, GaloisField, Symbol};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MdsError {
    #[error("invalid code shape: {0}")]
    InvalidShape(String),
    #[error("expected {expected} symbols, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("insufficient symbols: have {have}, need {need}")]
    Insufficient { have: usize, need: usize },
    #[error("corrupt symbols: position {position} disagrees with the decoded codeword")]
    Corrupt { position: usize },
    #[error("duplicate codeword position {0}")]
    DuplicatePosition(usize),
    #[error("codeword position {position} out of range for length {n_code}")]
    PositionOutOfRange { position: usize, n_code: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Debug)]
pub struct MdsCode {
    field: GaloisField,
    n_code: usize,
    k_code: usize,
    /// `(n_code - k_code) x k_code`; row `j` gives parity position `k_code + j`.
    parity: FieldMatrix,
}

impl MdsCode {
    pub fn new(field: &GaloisField, n_code: usize, k_code: usize) -> Result<Self, MdsError> {
        if k_code == 0 || k_code > n_code {
            return Err(MdsError::InvalidShape(format!(
                "need 0 < k_code <= n_code, got ({n_code}, {k_code})"
            )));
        }
        if n_code as u64 > field.order() as u64 {
            return Err(MdsError::InvalidShape(format!(
                "length {n_code} needs {n_code} distinct points but {} has only {}",
                field.spec(),
                field.order()
            )));
        }
        let parity = parity_matrix(field, n_code, k_code);
        Ok(MdsCode {
            field: field.clone(),
            n_code,
            k_code,
            parity,
        })
    }

    /// The `(2k, k)` shape used by the layered construction.
    pub fn doubled(field: &GaloisField, k_code: usize) -> Result<Self, MdsError> {
        Self::new(field, 2 * k_code, k_code)
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn n_code(&self) -> usize {
        self.n_code
    }

    pub fn k_code(&self) -> usize {
        self.k_code
    }

    pub fn evaluation_points(&self) -> Vec<Symbol> {
        (0..self.n_code as Symbol).collect()
    }

    /// Non-systematic rows of the generator matrix.
    pub fn parity_matrix(&self) -> &FieldMatrix {
        &self.parity
    }

    /// `n_code x k_code` generator with `codeword = G · message`; the first
    /// `k_code` rows form the identity.
    pub fn generator_matrix(&self) -> FieldMatrix {
        let mut data = FieldMatrix::identity(&self.field, self.k_code).data().to_vec();
        data.extend_from_slice(self.parity.data());
        FieldMatrix::new(&self.field, self.n_code, self.k_code, data)
            .expect("generator dimensions are consistent")
    }

    pub fn encode_parities(&self, message: &[Symbol]) -> Result<Vec<Symbol>, MdsError> {
        if message.len() != self.k_code {
            return Err(MdsError::LengthMismatch {
                expected: self.k_code,
                got: message.len(),
            });
        }
        Ok(self.parity.mul_vec(message)?)
    }

    pub fn encode(&self, message: &[Symbol]) -> Result<Vec<Symbol>, MdsError> {
        let mut codeword = message.to_vec();
        codeword.extend(self.encode_parities(message)?);
        Ok(codeword)
    }

    /// Recovers the message from any `k_code` or more codeword symbols.
    /// Surplus symbols are checked against the decoded codeword.
    pub fn erasure_decode(&self, known: &[(usize, Symbol)]) -> Result<Vec<Symbol>, MdsError> {
        let mut sorted = known.to_vec();
        sorted.sort_by_key(|&(pos, _)| pos);
        for pair in sorted.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(MdsError::DuplicatePosition(pair[0].0));
            }
        }
        for &(position, value) in &sorted {
            if position >= self.n_code {
                return Err(MdsError::PositionOutOfRange {
                    position,
                    n_code: self.n_code,
                });
            }
            self.field.check(value as u64)?;
        }
        if sorted.len() < self.k_code {
            return Err(MdsError::Insufficient {
                have: sorted.len(),
                need: self.k_code,
            });
        }
        let (basis, extra) = sorted.split_at(self.k_code);
        let interp = Interpolant::new(&self.field, basis);
        for &(position, value) in extra {
            if interp.eval(position as Symbol) != value {
                return Err(MdsError::Corrupt { position });
            }
        }
        Ok((0..self.k_code as Symbol).map(|x| interp.eval(x)).collect())
    }
}

/// Barycentric form of the polynomial through the given points.
struct Interpolant<'a> {
    field: &'a GaloisField,
    points: Vec<(Symbol, Symbol)>,
    /// `y_s / prod_{r != s} (x_s - x_r)`.
    scaled: Vec<Symbol>,
}

impl<'a> Interpolant<'a> {
    fn new(field: &'a GaloisField, known: &[(usize, Symbol)]) -> Self {
        let points: Vec<(Symbol, Symbol)> =
            known.iter().map(|&(p, y)| (p as Symbol, y)).collect();
        let scaled = points
            .iter()
            .enumerate()
            .map(|(s, &(xs, ys))| {
                let denom = points
                    .iter()
                    .enumerate()
                    .filter(|&(r, _)| r != s)
                    .fold(1, |acc, (_, &(xr, _))| field.mul(acc, field.sub(xs, xr)));
                field.mul(ys, field.inv(denom).expect("points are distinct"))
            })
            .collect();
        Interpolant {
            field,
            points,
            scaled,
        }
    }

    fn eval(&self, x: Symbol) -> Symbol {
        let f = self.field;
        if let Some(&(_, y)) = self.points.iter().find(|&&(xs, _)| xs == x) {
            return y;
        }
        let node_poly = self
            .points
            .iter()
            .fold(1, |acc, &(xs, _)| f.mul(acc, f.sub(x, xs)));
        let sum = self
            .points
            .iter()
            .zip(&self.scaled)
            .fold(0, |acc, (&(xs, _), &w)| {
                f.add(acc, f.mul(w, f.inv(f.sub(x, xs)).expect("x is not a node")))
            });
        f.mul(node_poly, sum)
    }
}

/// Lagrange basis polynomials through `0..k` evaluated at `k..n`.
fn parity_matrix(field: &GaloisField, n_code: usize, k_code: usize) -> FieldMatrix {
    let f = field;
    let sys: Vec<Symbol> = (0..k_code as Symbol).collect();
    let inv_weights: Vec<Symbol> = sys
        .iter()
        .map(|&xi| {
            let d = sys
                .iter()
                .filter(|&&xl| xl != xi)
                .fold(1, |acc, &xl| f.mul(acc, f.sub(xi, xl)));
            f.inv(d).expect("systematic points are distinct")
        })
        .collect();
    let mut data = Vec::with_capacity((n_code - k_code) * k_code);
    for xj in k_code as Symbol..n_code as Symbol {
        let node_poly = sys.iter().fold(1, |acc, &xl| f.mul(acc, f.sub(xj, xl)));
        for (&xi, &w) in sys.iter().zip(&inv_weights) {
            let basis = f.mul(node_poly, f.inv(f.sub(xj, xi)).expect("points are distinct"));
            data.push(f.mul(basis, w));
        }
    }
    FieldMatrix::new(field, n_code - k_code, k_code, data).expect("parity dimensions")
}
