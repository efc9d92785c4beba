//! Exact repair-secrecy verification.
//!
//! The eavesdropper sees `E = A_M·M + A_K·K`. For uniform independent `M`
//! and `K` over GF(q), `H(E) = rank[A_M | A_K]` and `H(E|M) = rank A_K` in
//! log_q units, so `I(M; E)` is their difference. `entropy_oracle` gets the
//! same numbers by brute-force enumeration of every `(M, K)` through the
//! encoder, without touching the transfer matrices.

use std::collections::HashMap;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::field::{FieldError, FieldMatrix, FieldSpec, Symbol};
use crate::layered::{LayeredCode, LayeredError, SymbolRole};
use crate::region::{Rational, RegionError};

/// Default cap on `q^(B+R)` for the exhaustive oracle.
pub const DEFAULT_ORACLE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SecrecyError {
    #[error("instance too large for oracle: {inputs} joint inputs exceed the budget of {budget}")]
    OracleTooLarge { inputs: String, budget: u64 },
    #[error("eavesdropper distribution has a count of {count} out of {total}, not a power of q")]
    NotQAdic { count: u64, total: u64 },
    #[error(transparent)]
    Layered(#[from] LayeredError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Region(#[from] RegionError),
}

/// Which scheme is analysed. `RandomnessZeroed` replaces `K` by zeros and
/// exists as a negative control.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    #[default]
    Keyed,
    RandomnessZeroed,
}

/// Linear maps from `M` and `K` to the eavesdropped symbols, one row per
/// symbol in `eavesdropper_view` order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferMaps {
    pub message: FieldMatrix,
    pub randomness: FieldMatrix,
}

impl TransferMaps {
    pub fn rows(&self) -> usize {
        self.message.rows()
    }

    pub fn apply(&self, message: &[Symbol], randomness: &[Symbol]) -> Result<Vec<Symbol>, FieldError> {
        let f = self.message.field();
        let a = self.message.mul_vec(message)?;
        let b = self.randomness.mul_vec(randomness)?;
        Ok(a.iter().zip(&b).map(|(&x, &y)| f.add(x, y)).collect())
    }

    pub fn without_randomness(self) -> Self {
        let zero = FieldMatrix::zeros(self.randomness.field(), self.randomness.rows(), self.randomness.cols());
        TransferMaps {
            message: self.message,
            randomness: zero,
        }
    }

    pub fn for_scheme(self, scheme: Scheme) -> Self {
        match scheme {
            Scheme::Keyed => self,
            Scheme::RandomnessZeroed => self.without_randomness(),
        }
    }
}

/// Builds the transfer maps from the generator matrix and the group layout.
/// `targets` may be any set of distinct nodes, including the empty set.
pub fn build_transfer_maps(code: &LayeredCode, targets: &[usize]) -> Result<TransferMaps, SecrecyError> {
    let n = code.params().n;
    let mut sorted = targets.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if let Some(&bad) = sorted.iter().find(|&&v| v == 0 || v > n) {
        return Err(LayeredError::InvalidNode { node: bad, n }.into());
    }
    let f = code.field();
    let dims = code.dimensions();
    let width = dims.code_dimension();
    let parity = code.mds().parity_matrix();
    let layout = code.layout();
    let t = code.params().t;

    let mut rows: Vec<Vec<Symbol>> = Vec::new();
    for &target in &sorted {
        for (helper, gid) in layout.transcript_slots(target) {
            let group = layout.group(gid);
            let row = match group.role(helper).expect("helper belongs to the group") {
                SymbolRole::Parity(i) => parity.row(i).to_vec(),
                SymbolRole::Sum => {
                    let mut acc = vec![0; width];
                    for i in group.parity_start..group.parity_start + t - 1 {
                        f.add_scaled(&mut acc, parity.row(i), 1);
                    }
                    acc
                }
            };
            rows.push(row);
        }
    }
    let b = dims.message_symbols;
    let (m_rows, k_rows): (Vec<Vec<Symbol>>, Vec<Vec<Symbol>>) =
        rows.into_iter().map(|r| (r[..b].to_vec(), r[b..].to_vec())).unzip();
    Ok(TransferMaps {
        message: FieldMatrix::from_rows(f, b, &m_rows)?,
        randomness: FieldMatrix::from_rows(f, width - b, &k_rows)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Leakage {
    /// `rank [A_M | A_K]` = H(E).
    pub joint_rank: usize,
    /// `rank A_K` = H(E | M).
    pub randomness_rank: usize,
    /// Difference of the two = I(M; E).
    pub leakage: usize,
}

pub fn leakage(maps: &TransferMaps) -> Result<Leakage, SecrecyError> {
    let joint_rank = maps.message.hconcat(&maps.randomness)?.rank();
    let randomness_rank = maps.randomness.rank();
    Ok(Leakage {
        joint_rank,
        randomness_rank,
        leakage: joint_rank - randomness_rank,
    })
}

/// `rank [A_M | A_K] - rank A_K`; zero iff the view is independent of `M`.
pub fn leakage_rank(maps: &TransferMaps) -> Result<usize, SecrecyError> {
    Ok(leakage(maps)?.leakage)
}

/// Exact entropies of the eavesdropper view, in log_q units.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub field: FieldSpec,
    pub targets: Vec<usize>,
    pub inputs: u64,
    pub h_e: Rational,
    pub h_e_given_m: Rational,
    pub mutual_information: Rational,
    pub h_k_given_m_e: Rational,
    /// The rank-based leakage on the same instance.
    pub leakage_rank: usize,
    pub agrees: bool,
}

/// Exact `H = Σ (c/N) log_q(N/c)` for a uniform input space of size
/// `N = q^width` whose image classes have the given sizes.
fn exact_entropy(counts: impl Iterator<Item = u64>, q: u64, total: u64) -> Result<Rational, SecrecyError> {
    let mut acc = Rational::ZERO;
    for c in counts {
        let mut ratio = total / c;
        if ratio * c != total {
            return Err(SecrecyError::NotQAdic { count: c, total });
        }
        let mut exponent = 0i128;
        while ratio > 1 {
            if !ratio.is_multiple_of(q) {
                return Err(SecrecyError::NotQAdic { count: c, total });
            }
            ratio /= q;
            exponent += 1;
        }
        acc = acc.checked_add(Rational::new(c as i128 * exponent, total as i128)?)?;
    }
    Ok(acc)
}

/// Enumerates every `(M, K)`, runs the real encoder and repair path, and
/// computes the view's entropies from the resulting histogram.
pub fn entropy_oracle(
    code: &LayeredCode,
    targets: &[usize],
    scheme: Scheme,
    budget: u64,
) -> Result<OracleReport, SecrecyError> {
    let targets = code.check_targets(targets)?;
    let dims = code.dimensions();
    let (b, r) = (dims.message_symbols, dims.random_symbols);
    let q = code.field().order() as u64;
    let inputs = (0..b + r).try_fold(1u128, |acc, _| acc.checked_mul(q as u128));
    let total = match inputs {
        Some(n) if n <= budget as u128 => n as u64,
        other => {
            return Err(SecrecyError::OracleTooLarge {
                inputs: other.map_or_else(|| format!("{q}^{}", b + r), |n| n.to_string()),
                budget,
            })
        }
    };

    let mut by_view: HashMap<Vec<Symbol>, u64> = HashMap::new();
    let mut by_message_view: HashMap<(Vec<Symbol>, Vec<Symbol>), u64> = HashMap::new();
    let zeros = vec![0; r];
    let mut digits = vec![0 as Symbol; b + r];
    for _ in 0..total {
        let (message, key) = digits.split_at(b);
        let key = match scheme {
            Scheme::Keyed => key,
            Scheme::RandomnessZeroed => &zeros[..],
        };
        let shares = code.encode(message, key)?;
        let view: Vec<Symbol> = code
            .eavesdropper_view(&targets, &shares)?
            .iter()
            .flat_map(|tr| tr.flatten())
            .collect();
        *by_message_view.entry((message.to_vec(), view.clone())).or_default() += 1;
        *by_view.entry(view).or_default() += 1;
        // Odometer increment over base-q digits.
        for d in digits.iter_mut().rev() {
            *d += 1;
            if (*d as u64) < q {
                break;
            }
            *d = 0;
        }
    }

    let h_e = exact_entropy(by_view.values().copied(), q, total)?;
    let h_me = exact_entropy(by_message_view.values().copied(), q, total)?;
    let h_m = Rational::integer(b as i128);
    let h_e_given_m = h_me.checked_sub(h_m)?;
    let mutual_information = h_e.checked_sub(h_e_given_m)?;
    // E is a function of (M, K), so H(M, K, E) = H(M, K) = B + R.
    let h_k_given_m_e = Rational::integer((b + r) as i128).checked_sub(h_me)?;

    let maps = build_transfer_maps(code, &targets)?.for_scheme(scheme);
    let leakage_rank = leakage_rank(&maps)?;
    Ok(OracleReport {
        field: code.params().field,
        targets,
        inputs: total,
        agrees: mutual_information == Rational::integer(leakage_rank as i128),
        h_e,
        h_e_given_m,
        mutual_information,
        h_k_given_m_e,
        leakage_rank,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetResult {
    pub targets: Vec<usize>,
    pub exposed_groups: usize,
    pub eavesdropped_symbols: usize,
    #[serde(flatten)]
    pub leakage: Leakage,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SecrecyReport {
    pub scheme: Scheme,
    pub subsets_checked: usize,
    pub max_leakage: usize,
    /// First subset (in lexicographic order) attaining `max_leakage` when it
    /// is nonzero.
    pub witness: Option<Vec<usize>>,
    /// `C(n, t) - C(n-ℓ, t)`.
    pub expected_exposed_groups: usize,
    pub exposure_matches: bool,
    /// `H(E) <= R` on every subset.
    pub entropy_within_randomness: bool,
    pub subsets: Vec<SubsetResult>,
}

impl SecrecyReport {
    pub fn is_secure(&self) -> bool {
        self.max_leakage == 0 && self.exposure_matches && self.entropy_within_randomness
    }
}

/// Rank check over all `C(n, ℓ)` eavesdropper sets, in parallel.
pub fn verify_all_eavesdroppers(code: &LayeredCode, scheme: Scheme) -> Result<SecrecyReport, SecrecyError> {
    let params = code.params();
    let dims = code.dimensions();
    let subsets: Vec<Vec<usize>> = (1..=params.n).combinations(params.ell).collect();
    let subsets = subsets
        .into_par_iter()
        .map(|targets| {
            let maps = build_transfer_maps(code, &targets)?.for_scheme(scheme);
            Ok(SubsetResult {
                exposed_groups: code.layout().exposed_groups(&targets).len(),
                eavesdropped_symbols: maps.rows(),
                leakage: leakage(&maps)?,
                targets,
            })
        })
        .collect::<Result<Vec<_>, SecrecyError>>()?;

    let expected = dims.groups - crate::layered::binomial(params.n - params.ell, params.t).unwrap_or(0) as usize;
    let max_leakage = subsets.iter().map(|s| s.leakage.leakage).max().unwrap_or(0);
    let witness = (max_leakage > 0)
        .then(|| subsets.iter().find(|s| s.leakage.leakage == max_leakage))
        .flatten()
        .map(|s| s.targets.clone());
    Ok(SecrecyReport {
        scheme,
        subsets_checked: subsets.len(),
        max_leakage,
        witness,
        expected_exposed_groups: expected,
        exposure_matches: subsets.iter().all(|s| s.exposed_groups == expected),
        entropy_within_randomness: subsets.iter().all(|s| s.leakage.joint_rank <= dims.random_symbols),
        subsets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layered::{random_symbols, CodeParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn code(n: usize, ell: usize, t: usize, field: &str) -> LayeredCode {
        LayeredCode::new(CodeParams::new(n, ell, t, field.parse().unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn maps_reproduce_the_eavesdropper_view() {
        for (n, ell, t) in [(7, 1, 3), (7, 2, 2), (5, 2, 3)] {
            let c = code(n, ell, t, "2^16");
            let spec = c.params().field;
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64 * 31 + t as u64);
            let targets: Vec<usize> = (1..=ell).map(|i| i * 2).collect();
            let maps = build_transfer_maps(&c, &targets).unwrap();
            for _ in 0..100 {
                let m = random_symbols(spec, &mut rng, c.dimensions().message_symbols);
                let k = random_symbols(spec, &mut rng, c.dimensions().random_symbols);
                let shares = c.encode(&m, &k).unwrap();
                let view: Vec<u32> = c
                    .eavesdropper_view(&targets, &shares)
                    .unwrap()
                    .iter()
                    .flat_map(|tr| tr.flatten())
                    .collect();
                assert_eq!(maps.apply(&m, &k).unwrap(), view);
            }
        }
    }

    #[test]
    fn empty_target_set_gives_empty_maps() {
        let c = code(7, 1, 3, "2^16");
        let maps = build_transfer_maps(&c, &[]).unwrap();
        assert_eq!(maps.rows(), 0);
        assert_eq!(maps.message.cols(), 40);
        assert_eq!(maps.randomness.cols(), 30);
        assert_eq!(leakage_rank(&maps).unwrap(), 0);
    }

    #[test]
    fn three_node_view_is_one_symbol_per_helper() {
        // Repairing node 1 pulls one symbol from node 2 and one from node 3.
        let c = code(3, 1, 2, "7");
        let maps = build_transfer_maps(&c, &[1]).unwrap();
        assert_eq!(maps.rows(), 2);
        assert_eq!(leakage_rank(&maps).unwrap(), 0);
    }

    #[test]
    fn leakage_rank_extremes() {
        let f = crate::field::GaloisField::new("7".parse().unwrap()).unwrap();
        let zero_m = TransferMaps {
            message: FieldMatrix::zeros(&f, 3, 2),
            randomness: FieldMatrix::identity(&f, 3),
        };
        assert_eq!(leakage_rank(&zero_m).unwrap(), 0);
        let exposed = TransferMaps {
            message: FieldMatrix::identity(&f, 4),
            randomness: FieldMatrix::zeros(&f, 4, 2),
        };
        assert_eq!(leakage_rank(&exposed).unwrap(), 4);
    }

    #[test]
    fn oracle_on_three_node_code() {
        let c = code(3, 1, 2, "7");
        for target in 1..=3 {
            let report = entropy_oracle(&c, &[target], Scheme::Keyed, DEFAULT_ORACLE_BUDGET).unwrap();
            assert_eq!(report.inputs, 343);
            assert_eq!(report.h_e, Rational::integer(2));
            assert_eq!(report.mutual_information, Rational::ZERO);
            assert_eq!(report.h_k_given_m_e, Rational::ZERO);
            assert!(report.agrees);
        }
    }

    #[test]
    fn oracle_matches_rank_on_binary_field_and_broken_scheme() {
        let c = code(3, 1, 2, "2^3");
        let keyed = entropy_oracle(&c, &[2], Scheme::Keyed, DEFAULT_ORACLE_BUDGET).unwrap();
        assert!(keyed.agrees);
        assert_eq!(keyed.mutual_information, Rational::ZERO);
        let broken = entropy_oracle(&c, &[2], Scheme::RandomnessZeroed, DEFAULT_ORACLE_BUDGET).unwrap();
        assert!(broken.agrees);
        assert_eq!(broken.mutual_information, Rational::ONE);
    }

    #[test]
    fn oracle_respects_budget() {
        let c = code(3, 1, 2, "7");
        assert!(matches!(
            entropy_oracle(&c, &[1], Scheme::Keyed, 100),
            Err(SecrecyError::OracleTooLarge { .. })
        ));
        let big = code(7, 1, 3, "2^16");
        assert!(matches!(
            entropy_oracle(&big, &[1], Scheme::Keyed, DEFAULT_ORACLE_BUDGET),
            Err(SecrecyError::OracleTooLarge { .. })
        ));
    }

    #[test]
    fn sweeps_are_secure_and_symmetric() {
        for (n, ell, t) in [(7, 1, 2), (7, 1, 3), (6, 2, 3), (6, 3, 2)] {
            let c = code(n, ell, t, "2^16");
            let report = verify_all_eavesdroppers(&c, Scheme::Keyed).unwrap();
            assert!(report.is_secure(), "({n},{ell},{t})");
            assert_eq!(report.witness, None);
            let first = report.subsets[0].leakage;
            assert!(report.subsets.iter().all(|s| s.leakage == first));
            assert_eq!(first.joint_rank, first.randomness_rank);
        }
    }

    #[test]
    fn zeroed_randomness_leaks() {
        let c = code(7, 1, 3, "2^16");
        let report = verify_all_eavesdroppers(&c, Scheme::RandomnessZeroed).unwrap();
        assert!(report.max_leakage > 0);
        assert_eq!(report.witness, Some(vec![1]));
        assert!(!report.is_secure());
        let maps = build_transfer_maps(&c, &[1]).unwrap();
        assert_eq!(report.max_leakage, maps.message.rank());
    }
}
