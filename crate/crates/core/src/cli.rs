//! File-level front end: share files, and the operations behind the `rgc`
//! subcommands.
//!
//! # Share file layout
//!
//! All integers little-endian; the header is 31 bytes.
//!
//! | offset | size | field                                          |
//! |-------:|-----:|------------------------------------------------|
//! | 0      | 4    | magic `RGC1`                                   |
//! | 4      | 1    | version (1)                                    |
//! | 5      | 2    | n                                              |
//! | 7      | 2    | ℓ                                              |
//! | 9      | 2    | t                                              |
//! | 11     | 1    | field kind: 0 = GF(2^m), 1 = GF(p)             |
//! | 12     | 4    | field order q                                  |
//! | 16     | 2    | node id (1-based)                              |
//! | 18     | 4    | payload symbol count                           |
//! | 22     | 8    | original message length in bytes               |
//! | 30     | 1    | padding bytes in the last block, modulo 256    |
//! | 31     | ...  | payload, 1 byte per symbol if q ≤ 256 else 2   |
//!
//! The payload is `blocks × α` symbols: block by block, and within a block
//! in ascending parity-group order.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::field::{FieldSpec, Symbol};
use crate::layered::{random_symbols, CodeParams, Dimensions, LayeredCode, LayeredError, NodeShare};
use crate::region::{
    applicable_bounds, corner_scan, region_7661, srk_point, theorem2_point, RatePoint, Rational,
    RegionError, SystemParams,
};
use crate::secrecy::{
    entropy_oracle, verify_all_eavesdroppers, OracleReport, Scheme, SecrecyError, SecrecyReport,
    DEFAULT_ORACLE_BUDGET,
};

pub const SHARE_MAGIC: [u8; 4] = *b"RGC1";
pub const SHARE_VERSION: u8 = 1;
pub const HEADER_LEN: usize = 31;
pub const SHARE_EXTENSION: &str = "rgc";
/// Overrides the oracle enumeration cap.
pub const ORACLE_BUDGET_ENV: &str = "RGC_ORACLE_BUDGET";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("insufficient shares: have {have}, need {need}")]
    InsufficientShares { have: usize, need: usize },
    #[error("incompatible shares: {0}")]
    IncompatibleShares(String),
    #[error("malformed share file: {0}")]
    Format(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Layered(#[from] LayeredError),
    #[error(transparent)]
    Secrecy(#[from] SecrecyError),
    #[error(transparent)]
    Region(#[from] RegionError),
}

impl CliError {
    /// 2 validation, 3 verification failure, 4 IO.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 4,
            CliError::Verification(_) | CliError::Layered(LayeredError::CorruptShare { .. }) => 3,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShareHeader {
    pub version: u8,
    pub n: u16,
    pub ell: u16,
    pub t: u16,
    pub field: FieldSpec,
    pub node: u16,
    pub symbol_count: u32,
    pub message_len: u64,
    pub padding: u8,
}

impl ShareHeader {
    pub fn params(&self) -> Result<CodeParams, CliError> {
        Ok(CodeParams::new(
            self.n as usize,
            self.ell as usize,
            self.t as usize,
            self.field,
        )?)
    }

    /// Equal in every field except the node id.
    pub fn same_run(&self, other: &ShareHeader) -> bool {
        ShareHeader {
            node: other.node,
            ..self.clone()
        } == *other
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShareFile {
    pub header: ShareHeader,
    pub payload: Vec<Symbol>,
}

impl ShareFile {
    pub fn to_bytes(&self) -> Vec<u8> {
        let h = &self.header;
        let width = h.field.symbol_bytes();
        let mut out = Vec::with_capacity(HEADER_LEN + self.payload.len() * width);
        out.extend_from_slice(&SHARE_MAGIC);
        out.push(h.version);
        out.extend_from_slice(&h.n.to_le_bytes());
        out.extend_from_slice(&h.ell.to_le_bytes());
        out.extend_from_slice(&h.t.to_le_bytes());
        let (kind, order) = match h.field {
            FieldSpec::Binary { .. } => (0u8, h.field.order()),
            FieldSpec::Prime { modulus } => (1u8, modulus),
        };
        out.push(kind);
        out.extend_from_slice(&order.to_le_bytes());
        out.extend_from_slice(&h.node.to_le_bytes());
        out.extend_from_slice(&h.symbol_count.to_le_bytes());
        out.extend_from_slice(&h.message_len.to_le_bytes());
        out.push(h.padding);
        for &s in &self.payload {
            if width == 1 {
                out.push(s as u8);
            } else {
                out.extend_from_slice(&(s as u16).to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CliError> {
        let bad = |msg: String| CliError::Format(msg);
        if bytes.len() < HEADER_LEN {
            return Err(bad(format!("{} bytes is shorter than the header", bytes.len())));
        }
        if bytes[0..4] != SHARE_MAGIC {
            return Err(bad("bad magic".into()));
        }
        let u16_at = |i: usize| u16::from_le_bytes([bytes[i], bytes[i + 1]]);
        let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
        let version = bytes[4];
        if version != SHARE_VERSION {
            return Err(bad(format!("unsupported version {version}")));
        }
        let order = u32_at(12);
        let field = match bytes[11] {
            0 if order.is_power_of_two() && order >= 2 => FieldSpec::binary(order.trailing_zeros() as u8),
            1 => FieldSpec::prime(order),
            kind => return Err(bad(format!("unknown field kind {kind} with order {order}"))),
        }
        .map_err(|e| bad(e.to_string()))?;
        let header = ShareHeader {
            version,
            n: u16_at(5),
            ell: u16_at(7),
            t: u16_at(9),
            field,
            node: u16_at(16),
            symbol_count: u32_at(18),
            message_len: u64::from_le_bytes(bytes[22..30].try_into().unwrap()),
            padding: bytes[30],
        };
        let width = field.symbol_bytes();
        let body = &bytes[HEADER_LEN..];
        if body.len() != header.symbol_count as usize * width {
            return Err(bad(format!(
                "payload has {} bytes, header promises {} symbols of {width} bytes",
                body.len(),
                header.symbol_count
            )));
        }
        let payload: Vec<Symbol> = if width == 1 {
            body.iter().map(|&b| b as Symbol).collect()
        } else {
            body.chunks_exact(2)
                .map(|c| u16::from_le_bytes([c[0], c[1]]) as Symbol)
                .collect()
        };
        if let Some(&s) = payload.iter().find(|&&s| s >= field.order()) {
            return Err(bad(format!("symbol {s} is not in {field}")));
        }
        Ok(ShareFile { header, payload })
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        Self::from_bytes(&fs::read(path)?)
            .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        Ok(fs::write(path, self.to_bytes())?)
    }

    pub fn file_name(node: u16) -> String {
        format!("share_{node:03}.{SHARE_EXTENSION}")
    }
}

/// Parses up to 32 bytes of hex into a ChaCha20 seed, zero-extended.
pub fn parse_seed(hex_seed: &str) -> Result<[u8; 32], CliError> {
    let bytes = hex::decode(hex_seed.trim())
        .map_err(|e| CliError::Validation(format!("seed is not valid hex: {e}")))?;
    if bytes.is_empty() || bytes.len() > 32 {
        return Err(CliError::Validation(format!(
            "seed must be 1 to 32 bytes, got {}",
            bytes.len()
        )));
    }
    let mut seed = [0u8; 32];
    seed[..bytes.len()].copy_from_slice(&bytes);
    Ok(seed)
}

pub fn make_rng(seed: Option<[u8; 32]>) -> ChaCha20Rng {
    match seed {
        Some(s) => ChaCha20Rng::from_seed(s),
        None => ChaCha20Rng::from_entropy(),
    }
}

/// Raw bytes must map one-to-one onto symbols, so file encoding needs
/// GF(2^8) or GF(2^16).
fn byte_aligned(field: FieldSpec) -> Result<usize, CliError> {
    match field {
        FieldSpec::Binary { degree: 8 } => Ok(1),
        FieldSpec::Binary { degree: 16 } => Ok(2),
        other => Err(CliError::Validation(format!(
            "file encoding needs GF(2^8) or GF(2^16), got {other}"
        ))),
    }
}

fn bytes_to_symbols(bytes: &[u8], width: usize) -> Vec<Symbol> {
    if width == 1 {
        bytes.iter().map(|&b| b as Symbol).collect()
    } else {
        bytes
            .chunks_exact(2)
            .map(|c| u16::from_le_bytes([c[0], c[1]]) as Symbol)
            .collect()
    }
}

fn symbols_to_bytes(symbols: &[Symbol], width: usize, out: &mut Vec<u8>) {
    for &s in symbols {
        if width == 1 {
            out.push(s as u8);
        } else {
            out.extend_from_slice(&(s as u16).to_le_bytes());
        }
    }
}

/// Splits `data` into `B`-symbol blocks and encodes each with fresh
/// randomness. Returns one share file per node, in node order.
pub fn encode_bytes<R: Rng + ?Sized>(
    params: CodeParams,
    data: &[u8],
    rng: &mut R,
) -> Result<Vec<ShareFile>, CliError> {
    if data.is_empty() {
        return Err(CliError::Validation("input is empty".into()));
    }
    let width = byte_aligned(params.field)?;
    let code = LayeredCode::new(params)?;
    let dims = *code.dimensions();
    let block_bytes = dims.message_symbols * width;
    let blocks = data.len().div_ceil(block_bytes);
    let padding = blocks * block_bytes - data.len();
    let symbol_count = u32::try_from(blocks * dims.alpha)
        .map_err(|_| CliError::Validation("input too large for one share file".into()))?;

    let mut padded = data.to_vec();
    padded.resize(blocks * block_bytes, 0);
    // Randomness is drawn sequentially so a seed fixes the output; the
    // blocks themselves are independent.
    let keys: Vec<Vec<Symbol>> = (0..blocks)
        .map(|_| random_symbols(params.field, rng, dims.random_symbols))
        .collect();
    let encoded: Vec<Vec<NodeShare>> = padded
        .par_chunks(block_bytes)
        .zip(keys.par_iter())
        .map(|(chunk, key)| code.encode(&bytes_to_symbols(chunk, width), key))
        .collect::<Result<_, _>>()?;

    let header = |node: usize| ShareHeader {
        version: SHARE_VERSION,
        n: params.n as u16,
        ell: params.ell as u16,
        t: params.t as u16,
        field: params.field,
        node: node as u16,
        symbol_count,
        message_len: data.len() as u64,
        padding: (padding % 256) as u8,
    };
    Ok((1..=params.n)
        .map(|node| ShareFile {
            header: header(node),
            payload: encoded.iter().flat_map(|b| b[node - 1].values()).collect(),
        })
        .collect())
}

struct ShareSet<'a> {
    header: ShareHeader,
    code: LayeredCode,
    dims: Dimensions,
    blocks: usize,
    width: usize,
    shares: Vec<&'a ShareFile>,
}

/// Checks that the files come from one encode run and describe a
/// consistent message.
fn share_set(files: &[ShareFile]) -> Result<ShareSet<'_>, CliError> {
    let first = files
        .first()
        .ok_or(CliError::InsufficientShares { have: 0, need: 1 })?;
    let mut shares: Vec<&ShareFile> = Vec::new();
    for f in files {
        if !first.header.same_run(&f.header) {
            return Err(CliError::IncompatibleShares(format!(
                "node {} and node {} headers differ",
                first.header.node, f.header.node
            )));
        }
        match shares.iter().find(|s| s.header.node == f.header.node) {
            Some(s) if s.payload != f.payload => {
                return Err(CliError::IncompatibleShares(format!(
                    "two different shares for node {}",
                    f.header.node
                )))
            }
            Some(_) => {}
            None => shares.push(f),
        }
    }
    let header = first.header.clone();
    let params = header.params()?;
    let width = byte_aligned(params.field)?;
    let code = LayeredCode::new(params)?;
    let dims = *code.dimensions();
    if let Some(s) = shares.iter().find(|s| s.header.node == 0 || s.header.node as usize > params.n) {
        return Err(CliError::Format(format!("node id {} out of range", s.header.node)));
    }
    let count = header.symbol_count as usize;
    let block_bytes = dims.message_symbols * width;
    let blocks = count / dims.alpha;
    let consistent = count.is_multiple_of(dims.alpha)
        && blocks == (header.message_len as usize).div_ceil(block_bytes)
        && (blocks * block_bytes - header.message_len as usize) % 256 == header.padding as usize;
    if !consistent {
        return Err(CliError::Format(format!(
            "{count} symbols do not describe a {}-byte message",
            header.message_len
        )));
    }
    shares.sort_by_key(|s| s.header.node);
    Ok(ShareSet {
        header,
        code,
        dims,
        blocks,
        width,
        shares,
    })
}

fn block_share(set: &ShareSet<'_>, file: &ShareFile, block: usize) -> Result<NodeShare, CliError> {
    let alpha = set.dims.alpha;
    Ok(NodeShare::from_ordered(
        set.code.layout(),
        file.header.node as usize,
        &file.payload[block * alpha..(block + 1) * alpha],
    )?)
}

/// Recovers the original bytes from at least `n-1` shares of one run.
pub fn decode_shares(files: &[ShareFile]) -> Result<Vec<u8>, CliError> {
    let set = share_set(files)?;
    let need = set.code.params().n - 1;
    if set.shares.len() < need {
        return Err(CliError::InsufficientShares {
            have: set.shares.len(),
            need,
        });
    }
    let blocks: Vec<Vec<Symbol>> = (0..set.blocks)
        .into_par_iter()
        .map(|b| {
            let shares = set
                .shares
                .iter()
                .map(|f| block_share(&set, f, b))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(set.code.reconstruct(&shares)?)
        })
        .collect::<Result<_, CliError>>()?;
    let mut out = Vec::with_capacity(set.blocks * set.dims.message_symbols * set.width);
    for b in &blocks {
        symbols_to_bytes(b, set.width, &mut out);
    }
    out.truncate(set.header.message_len as usize);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HelperTraffic {
    pub node: usize,
    pub symbols_per_block: usize,
    pub symbols_total: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepairReport {
    pub failed: usize,
    pub blocks: usize,
    pub alpha: usize,
    pub beta: usize,
    pub helpers: Vec<HelperTraffic>,
    pub symbols_per_block: usize,
    pub symbols_total: usize,
    /// `(n-1)β / ((t-1)α)`; always 1 for this construction.
    pub bandwidth_ratio: Rational,
}

/// Regenerates the share of `failed` from the other `n-1` shares.
pub fn repair_shares(files: &[ShareFile], failed: usize) -> Result<(ShareFile, RepairReport), CliError> {
    let set = share_set(files)?;
    let params = *set.code.params();
    if failed == 0 || failed > params.n {
        return Err(CliError::Validation(format!(
            "failed node {failed} outside 1..={}",
            params.n
        )));
    }
    let helpers: Vec<&ShareFile> = set
        .shares
        .iter()
        .copied()
        .filter(|s| s.header.node as usize != failed)
        .collect();
    if helpers.len() < params.n - 1 {
        let missing: Vec<usize> = (1..=params.n)
            .filter(|&v| v != failed && !helpers.iter().any(|s| s.header.node as usize == v))
            .collect();
        return Err(CliError::Validation(format!("missing helper shares for nodes {missing:?}")));
    }

    let mut traffic = vec![0usize; params.n];
    let mut payload = Vec::with_capacity(set.header.symbol_count as usize);
    for b in 0..set.blocks {
        let shares = helpers
            .iter()
            .map(|f| block_share(&set, f, b))
            .collect::<Result<Vec<_>, _>>()?;
        let transcript = set.code.build_transcript(failed, &shares)?;
        for (&h, entries) in &transcript.helpers {
            traffic[h - 1] += entries.len();
        }
        payload.extend(set.code.repair(failed, &transcript)?.values());
    }

    let dims = set.dims;
    let helpers_report: Vec<HelperTraffic> = (1..=params.n)
        .filter(|&v| v != failed)
        .map(|v| HelperTraffic {
            node: v,
            symbols_per_block: traffic[v - 1] / set.blocks.max(1),
            symbols_total: traffic[v - 1],
        })
        .collect();
    let total: usize = traffic.iter().sum();
    let report = RepairReport {
        failed,
        blocks: set.blocks,
        alpha: dims.alpha,
        beta: dims.beta,
        symbols_per_block: total / set.blocks.max(1),
        symbols_total: total,
        helpers: helpers_report,
        bandwidth_ratio: Rational::new(
            ((params.n - 1) * dims.beta) as i128,
            ((params.t - 1) * dims.alpha) as i128,
        )?,
    };
    let file = ShareFile {
        header: ShareHeader {
            node: failed as u16,
            ..set.header.clone()
        },
        payload,
    };
    Ok((file, report))
}

/// Reads every `*.rgc` file in `dir`, sorted by name.
pub fn load_share_dir(dir: &Path) -> Result<Vec<ShareFile>, CliError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    paths.retain(|p| p.is_file() && p.extension().is_some_and(|e| e == SHARE_EXTENSION));
    paths.sort();
    paths.iter().map(|p| ShareFile::read(p)).collect()
}

#[derive(Clone, Debug)]
pub struct EncodeOptions {
    pub params: CodeParams,
    pub input: PathBuf,
    pub out_dir: PathBuf,
    pub seed: Option<[u8; 32]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EncodeSummary {
    pub params: CodeParams,
    pub dimensions: Dimensions,
    pub message_bytes: u64,
    pub blocks: usize,
    pub symbols_per_share: u32,
    pub files: Vec<PathBuf>,
}

pub fn cmd_encode(opts: &EncodeOptions) -> Result<EncodeSummary, CliError> {
    let data = fs::read(&opts.input)?;
    let mut rng = make_rng(opts.seed);
    let shares = encode_bytes(opts.params, &data, &mut rng)?;
    fs::create_dir_all(&opts.out_dir)?;
    let mut files = Vec::new();
    for s in &shares {
        let path = opts.out_dir.join(ShareFile::file_name(s.header.node));
        s.write(&path)?;
        files.push(path);
    }
    let dims = opts.params.dimensions();
    let symbols = shares[0].header.symbol_count;
    Ok(EncodeSummary {
        params: opts.params,
        dimensions: dims,
        message_bytes: data.len() as u64,
        blocks: symbols as usize / dims.alpha,
        symbols_per_share: symbols,
        files,
    })
}

pub fn cmd_reconstruct(shares_dir: &Path, out: &Path) -> Result<u64, CliError> {
    let files = load_share_dir(shares_dir)?;
    let data = decode_shares(&files)?;
    fs::write(out, &data)?;
    Ok(data.len() as u64)
}

pub fn cmd_repair(shares_dir: &Path, failed: usize, out: &Path) -> Result<RepairReport, CliError> {
    let files = load_share_dir(shares_dir)?;
    let (share, report) = repair_shares(&files, failed)?;
    share.write(out)?;
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub params: CodeParams,
    pub trials: usize,
    pub oracle: bool,
    pub break_randomness: bool,
    pub seed: Option<[u8; 32]>,
    pub oracle_budget: u64,
}

impl VerifyOptions {
    pub fn new(params: CodeParams) -> Self {
        VerifyOptions {
            params,
            trials: 1,
            oracle: false,
            break_randomness: false,
            seed: None,
            oracle_budget: oracle_budget_from_env(),
        }
    }
}

/// `RGC_ORACLE_BUDGET` if set and parseable, else the default.
pub fn oracle_budget_from_env() -> u64 {
    std::env::var(ORACLE_BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_BUDGET)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub checked: usize,
    pub passed: bool,
    /// `(trial, node)` of the first failure.
    pub witness: Option<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum OracleOutcome {
    Ran { reports: Vec<OracleReport>, passed: bool },
    Skipped { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub params: CodeParams,
    pub dimensions: Dimensions,
    pub normalized_rates: RatePoint,
    pub reconstruction: ConditionReport,
    pub repair: ConditionReport,
    pub secrecy: SecrecyReport,
    pub oracle: Option<OracleOutcome>,
    pub passed: bool,
}

fn oracle_run(opts: &VerifyOptions, scheme: Scheme) -> Result<OracleOutcome, CliError> {
    let p = opts.params;
    let dims = p.dimensions();
    let width = dims.code_dimension() as u32;
    let fits = |q: u32| {
        (0..width)
            .try_fold(1u128, |acc, _| acc.checked_mul(q as u128))
            .is_some_and(|n| n <= opts.oracle_budget as u128)
    };
    let field = if fits(p.field.order()) {
        p.field
    } else {
        let min_q = u32::try_from(2 * dims.code_dimension()).unwrap_or(u32::MAX);
        match FieldSpec::smallest_prime_field(min_q) {
            Ok(f) if fits(f.order()) => f,
            _ => {
                return Ok(OracleOutcome::Skipped {
                    reason: format!(
                        "q^(B+R) exceeds the budget of {} for every admissible field",
                        opts.oracle_budget
                    ),
                })
            }
        }
    };
    let code = LayeredCode::new(CodeParams { field, ..p })?;
    let reports = itertools::Itertools::combinations(1..=p.n, p.ell)
        .map(|targets| entropy_oracle(&code, &targets, scheme, opts.oracle_budget))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = reports
        .iter()
        .all(|r| r.agrees && r.mutual_information.is_zero() && r.h_k_given_m_e.is_zero());
    Ok(OracleOutcome::Ran { reports, passed })
}

/// Checks reconstruction from every `n-1` subset, exact repair of every
/// node, and secrecy against every `ℓ`-set of eavesdropped repairs.
pub fn cmd_verify(opts: &VerifyOptions) -> Result<VerifyReport, CliError> {
    let code = LayeredCode::new(opts.params)?;
    let dims = *code.dimensions();
    let n = opts.params.n;
    let scheme = if opts.break_randomness {
        Scheme::RandomnessZeroed
    } else {
        Scheme::Keyed
    };
    let mut rng = make_rng(opts.seed);
    let mut reconstruction = ConditionReport {
        checked: 0,
        passed: true,
        witness: None,
    };
    let mut repair = reconstruction.clone();
    for trial in 0..opts.trials.max(1) {
        let message = random_symbols(opts.params.field, &mut rng, dims.message_symbols);
        let key = match scheme {
            Scheme::Keyed => random_symbols(opts.params.field, &mut rng, dims.random_symbols),
            Scheme::RandomnessZeroed => vec![0; dims.random_symbols],
        };
        let shares = code.encode(&message, &key)?;
        for j in 1..=n {
            let rest: Vec<NodeShare> = shares.iter().filter(|s| s.node() != j).cloned().collect();
            reconstruction.checked += 1;
            if code.reconstruct(&rest).ok().as_ref() != Some(&message) && reconstruction.passed {
                reconstruction.passed = false;
                reconstruction.witness = Some((trial, j));
            }
            repair.checked += 1;
            let ok = code.build_transcript(j, &rest).is_ok_and(|tr| {
                tr.helpers.values().all(|e| e.len() == dims.beta)
                    && code.repair(j, &tr).is_ok_and(|s| s == shares[j - 1])
            });
            if !ok && repair.passed {
                repair.passed = false;
                repair.witness = Some((trial, j));
            }
        }
    }
    let secrecy = verify_all_eavesdroppers(&code, scheme)?;
    let oracle = if opts.oracle {
        Some(oracle_run(opts, scheme)?)
    } else {
        None
    };
    let oracle_ok = !matches!(oracle, Some(OracleOutcome::Ran { passed: false, .. }));
    let passed = reconstruction.passed && repair.passed && secrecy.is_secure() && oracle_ok;
    Ok(VerifyReport {
        params: opts.params,
        dimensions: dims,
        normalized_rates: code.normalized_rates(),
        reconstruction,
        repair,
        secrecy,
        oracle,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundEntry {
    pub name: String,
    /// `[ᾱ coefficient, β̄ coefficient]`; the bound reads `c·(ᾱ, β̄) >= rhs`.
    pub coefficients: [Rational; 2],
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointEntry {
    pub label: String,
    pub alpha_bar: Rational,
    pub beta_bar: Rational,
    pub alpha_bar_decimal: f64,
    pub beta_bar_decimal: f64,
}

impl PointEntry {
    fn new(label: String, p: &RatePoint) -> Self {
        PointEntry {
            label,
            alpha_bar: p.alpha_bar(),
            beta_bar: p.beta_bar(),
            alpha_bar_decimal: p.alpha_bar().to_f64(),
            beta_bar_decimal: p.beta_bar().to_f64(),
        }
    }

    pub fn point(&self) -> Result<RatePoint, RegionError> {
        RatePoint::new(self.alpha_bar, self.beta_bar)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionExport {
    pub params: SystemParams,
    pub bounds: Vec<BoundEntry>,
    pub points: Vec<PointEntry>,
}

impl RegionExport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("region export serializes")
    }

    /// Two columns, `alpha_bar,beta_bar`, as exact fractions.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha_bar,beta_bar\n");
        for p in &self.points {
            out.push_str(&format!("{},{}\n", p.alpha_bar, p.beta_bar));
        }
        out
    }
}

pub fn parse_region_csv(text: &str) -> Result<Vec<RatePoint>, CliError> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("alpha_bar,beta_bar") {
        return Err(CliError::Format("missing alpha_bar,beta_bar header".into()));
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let (a, b) = line
                .split_once(',')
                .ok_or_else(|| CliError::Format(format!("bad csv row '{line}'")))?;
            Ok(RatePoint::new(a.parse()?, b.parse()?)?)
        })
        .collect()
}

/// Bounds and points for `(n, k, d, ℓ)`: the SRK point, and for
/// `k = d = n-1` the layered-code family and its non-dominated subset; for
/// `(7, 6, 6, 1)` also the corners of the closed region.
pub fn cmd_region(params: SystemParams) -> Result<RegionExport, CliError> {
    let SystemParams { n, k, d, ell } = params;
    let bounds = applicable_bounds(&params)?
        .into_iter()
        .filter_map(|(_, b)| b.ok())
        .map(|b| BoundEntry {
            name: b.name,
            coefficients: [b.alpha_coef, b.beta_coef],
            rhs: b.rhs,
        })
        .collect();
    let mut points = vec![PointEntry::new("srk".into(), &srk_point(k, d, ell)?)];
    if params.is_full_repair() && ell >= 1 {
        for t in 2..=n - ell {
            points.push(PointEntry::new(format!("layered t={t}"), &theorem2_point(n, ell, t)?));
        }
        for (t, p) in corner_scan(n, ell)? {
            points.push(PointEntry::new(format!("non_dominated t={t}"), &p));
        }
    }
    if (n, k, d, ell) == (7, 6, 6, 1) {
        for p in region_7661()?.corners {
            points.push(PointEntry::new("corner".into(), &p));
        }
    }
    Ok(RegionExport {
        params,
        bounds,
        points,
    })
}
