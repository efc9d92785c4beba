//! Layered secure exact-repair code for `(n, k = n-1, d = n-1, ℓ)`.
//!
//! `B` message symbols and `R` random symbols are fed through a
//! `(2(R+B), R+B)` systematic Reed–Solomon code and only the `R+B` parity
//! symbols are kept. Those are split into `C(n, t)` parity groups of `t-1`
//! symbols, one group per `t`-subset of nodes in lexicographic order. Each
//! group gains one extra symbol equal to the sum of its parities, and the
//! `t` symbols of a group go one per node of its subset: the sum to the
//! smallest node id, the parities to the remaining nodes in increasing order.
//!
//! Node ids are 1-based throughout.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use itertools::Itertools;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::field::{FieldError, FieldSpec, GaloisField, Symbol};
use crate::mds::{MdsCode, MdsError};
use crate::region::{RatePoint, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LayeredError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("{what}: expected {expected} symbols, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("node id {node} out of range 1..={n}")]
    InvalidNode { node: usize, n: usize },
    #[error("duplicate share for node {0}")]
    DuplicateShare(usize),
    #[error("malformed share for node {node}: {reason}")]
    MalformedShare { node: usize, reason: String },
    #[error("insufficient shares: have {have}, need {need}")]
    InsufficientShares { have: usize, need: usize },
    #[error("corrupt share: parity group {group} violates its sum relation")]
    CorruptShare { group: usize },
    #[error("missing helper symbols: node {helper} did not send its symbol of group {group}")]
    MissingHelperSymbols { helper: usize, group: usize },
    #[error("missing share for helper node {0}")]
    MissingShare(usize),
    #[error("transcript regenerates node {transcript} but node {requested} was requested")]
    TranscriptMismatch { transcript: usize, requested: usize },
    #[error("expected {expected} eavesdropped nodes, got {got}")]
    TargetCount { expected: usize, got: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Mds(#[from] MdsError),
}

/// `C(n, k)`, or `None` on overflow.
pub fn binomial(n: usize, k: usize) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    u64::try_from(acc).ok()
}

fn binom(n: usize, k: usize) -> usize {
    binomial(n, k).expect("validated parameters keep binomials small") as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CodeParams {
    pub n: usize,
    pub ell: usize,
    pub t: usize,
    pub field: FieldSpec,
}

impl CodeParams {
    pub fn new(n: usize, ell: usize, t: usize, field: FieldSpec) -> Result<Self, LayeredError> {
        let params = CodeParams { n, ell, t, field };
        params.validate()?;
        Ok(params)
    }

    /// Same `(n, ℓ, t)` over GF(2^16).
    pub fn with_default_field(n: usize, ell: usize, t: usize) -> Result<Self, LayeredError> {
        Self::new(n, ell, t, FieldSpec::DEFAULT)
    }

    pub fn validate(&self) -> Result<(), LayeredError> {
        let CodeParams { n, ell, t, field } = *self;
        let bad = |msg: String| Err(LayeredError::InvalidParams(msg));
        if n < 3 {
            return bad(format!("n = {n}: need at least 3 nodes"));
        }
        if n > u16::MAX as usize {
            return bad(format!("n = {n} exceeds {}", u16::MAX));
        }
        if ell < 1 || ell > n - 2 {
            return bad(format!("ell = {ell}: need 1 <= ell <= n-2 = {}", n - 2));
        }
        if t < 2 || t > n - ell {
            return bad(format!("t = {t}: need 2 <= t <= n-ell = {}", n - ell));
        }
        field.validate()?;
        let total = binomial(n, t)
            .and_then(|g| g.checked_mul(t as u64 - 1))
            .and_then(|s| s.checked_mul(2));
        match total {
            Some(len) if len <= field.order() as u64 => Ok(()),
            Some(len) => bad(format!(
                "{field} has {} elements but the code needs q >= 2(R+B) = {len}",
                field.order()
            )),
            None => bad(format!("C({n}, {t}) overflows")),
        }
    }

    pub fn dimensions(&self) -> Dimensions {
        derive_dimensions(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Dimensions {
    /// B: information symbols per block.
    pub message_symbols: usize,
    /// R: random symbols per block.
    pub random_symbols: usize,
    /// Symbols stored per node.
    pub alpha: usize,
    /// Symbols sent by each helper in one repair.
    pub beta: usize,
    pub groups: usize,
}

impl Dimensions {
    /// `R + B`, the MDS dimension.
    pub fn code_dimension(&self) -> usize {
        self.message_symbols + self.random_symbols
    }
}

pub fn derive_dimensions(params: &CodeParams) -> Dimensions {
    let CodeParams { n, ell, t, .. } = *params;
    let groups = binom(n, t);
    let message_symbols = binom(n - ell, t) * (t - 1);
    Dimensions {
        message_symbols,
        random_symbols: groups * (t - 1) - message_symbols,
        alpha: binom(n - 1, t - 1),
        beta: binom(n - 2, t - 2),
        groups,
    }
}

/// What a node stores for one parity group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolRole {
    /// The extra symbol: sum of the group's parities.
    Sum,
    /// Index into the MDS parity vector.
    Parity(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityGroup {
    pub id: usize,
    /// Sorted node ids.
    pub nodes: Vec<usize>,
    /// Parity-vector range `[id(t-1), (id+1)(t-1))`.
    pub parity_start: usize,
}

impl ParityGroup {
    pub fn sum_holder(&self) -> usize {
        self.nodes[0]
    }

    pub fn contains(&self, node: usize) -> bool {
        self.nodes.binary_search(&node).is_ok()
    }

    pub fn role(&self, node: usize) -> Option<SymbolRole> {
        match self.nodes.binary_search(&node).ok()? {
            0 => Some(SymbolRole::Sum),
            pos => Some(SymbolRole::Parity(self.parity_start + pos - 1)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GroupLayout {
    n: usize,
    t: usize,
    groups: Vec<ParityGroup>,
    by_node: Vec<Vec<usize>>,
}

impl GroupLayout {
    pub fn new(n: usize, t: usize) -> Self {
        let groups: Vec<ParityGroup> = (1..=n)
            .combinations(t)
            .enumerate()
            .map(|(id, nodes)| ParityGroup {
                id,
                nodes,
                parity_start: id * (t - 1),
            })
            .collect();
        let mut by_node = vec![Vec::new(); n];
        for g in &groups {
            for &v in &g.nodes {
                by_node[v - 1].push(g.id);
            }
        }
        GroupLayout {
            n,
            t,
            groups,
            by_node,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn groups(&self) -> &[ParityGroup] {
        &self.groups
    }

    pub fn group(&self, id: usize) -> &ParityGroup {
        &self.groups[id]
    }

    /// Ids of the groups containing `node`, ascending.
    pub fn groups_of(&self, node: usize) -> &[usize] {
        &self.by_node[node - 1]
    }

    /// Groups containing both nodes, ascending.
    pub fn shared_groups(&self, a: usize, b: usize) -> Vec<usize> {
        self.groups_of(a)
            .iter()
            .copied()
            .filter(|&g| self.groups[g].contains(b))
            .collect()
    }

    /// Groups with at least one node in `targets`.
    pub fn exposed_groups(&self, targets: &[usize]) -> BTreeSet<usize> {
        targets
            .iter()
            .flat_map(|&v| self.groups_of(v).iter().copied())
            .collect()
    }

    /// `(helper, group)` pairs sent to regenerate `failed`, in transcript
    /// order: helpers ascending, then groups ascending.
    pub fn transcript_slots(&self, failed: usize) -> Vec<(usize, usize)> {
        (1..=self.n)
            .filter(|&h| h != failed)
            .flat_map(|h| self.shared_groups(h, failed).into_iter().map(move |g| (h, g)))
            .collect()
    }
}

/// Contents of one node: one symbol per parity group containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeShare {
    node: usize,
    symbols: BTreeMap<usize, Symbol>,
}

impl NodeShare {
    pub fn new(node: usize, symbols: BTreeMap<usize, Symbol>) -> Self {
        NodeShare { node, symbols }
    }

    /// Builds a share from symbols listed in the node's group order.
    pub fn from_ordered(
        layout: &GroupLayout,
        node: usize,
        values: &[Symbol],
    ) -> Result<Self, LayeredError> {
        if node == 0 || node > layout.n() {
            return Err(LayeredError::InvalidNode { node, n: layout.n() });
        }
        let groups = layout.groups_of(node);
        if values.len() != groups.len() {
            return Err(LayeredError::LengthMismatch {
                what: "share",
                expected: groups.len(),
                got: values.len(),
            });
        }
        Ok(NodeShare {
            node,
            symbols: groups.iter().copied().zip(values.iter().copied()).collect(),
        })
    }

    pub fn node(&self) -> usize {
        self.node
    }

    pub fn get(&self, group: usize) -> Option<Symbol> {
        self.symbols.get(&group).copied()
    }

    pub fn set(&mut self, group: usize, value: Symbol) {
        self.symbols.insert(group, value);
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &BTreeMap<usize, Symbol> {
        &self.symbols
    }

    /// Symbols in ascending group order.
    pub fn values(&self) -> Vec<Symbol> {
        self.symbols.values().copied().collect()
    }
}

/// What the helpers send to regenerate one node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairTranscript {
    pub failed: usize,
    /// helper id -> (group id, symbol), groups ascending.
    pub helpers: BTreeMap<usize, Vec<(usize, Symbol)>>,
}

impl RepairTranscript {
    pub fn symbols_from(&self, helper: usize) -> usize {
        self.helpers.get(&helper).map_or(0, Vec::len)
    }

    pub fn total_symbols(&self) -> usize {
        self.helpers.values().map(Vec::len).sum()
    }

    pub fn groups(&self) -> BTreeSet<usize> {
        self.helpers.values().flatten().map(|&(g, _)| g).collect()
    }

    /// All symbols, helpers ascending then groups ascending.
    pub fn flatten(&self) -> Vec<Symbol> {
        self.helpers.values().flatten().map(|&(_, s)| s).collect()
    }
}

pub fn random_symbols<R: Rng + ?Sized>(field: FieldSpec, rng: &mut R, count: usize) -> Vec<Symbol> {
    let q = field.order();
    (0..count).map(|_| rng.gen_range(0..q)).collect()
}

/// A ready-to-use instance: parameters, layout and the underlying MDS code.
#[derive(Clone, Debug)]
pub struct LayeredCode {
    params: CodeParams,
    dims: Dimensions,
    field: GaloisField,
    layout: GroupLayout,
    mds: MdsCode,
}

impl LayeredCode {
    pub fn new(params: CodeParams) -> Result<Self, LayeredError> {
        params.validate()?;
        let dims = params.dimensions();
        let field = GaloisField::new(params.field)?;
        let mds = MdsCode::doubled(&field, dims.code_dimension())?;
        Ok(LayeredCode {
            params,
            dims,
            layout: GroupLayout::new(params.n, params.t),
            field,
            mds,
        })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn dimensions(&self) -> &Dimensions {
        &self.dims
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn layout(&self) -> &GroupLayout {
        &self.layout
    }

    pub fn mds(&self) -> &MdsCode {
        &self.mds
    }

    /// `(α/B, β/B)` realized by this instance.
    pub fn normalized_rates(&self) -> RatePoint {
        let b = self.dims.message_symbols as i128;
        RatePoint::new(
            Rational::new(self.dims.alpha as i128, b).expect("B > 0"),
            Rational::new(self.dims.beta as i128, b).expect("B > 0"),
        )
        .expect("positive rates")
    }

    fn check_node(&self, node: usize) -> Result<(), LayeredError> {
        if node == 0 || node > self.params.n {
            Err(LayeredError::InvalidNode {
                node,
                n: self.params.n,
            })
        } else {
            Ok(())
        }
    }

    fn check_symbols(&self, what: &'static str, expected: usize, values: &[Symbol]) -> Result<(), LayeredError> {
        if values.len() != expected {
            return Err(LayeredError::LengthMismatch {
                what,
                expected,
                got: values.len(),
            });
        }
        for &v in values {
            self.field.check(v as u64)?;
        }
        Ok(())
    }

    pub fn encode(&self, message: &[Symbol], randomness: &[Symbol]) -> Result<Vec<NodeShare>, LayeredError> {
        self.check_symbols("message", self.dims.message_symbols, message)?;
        self.check_symbols("randomness", self.dims.random_symbols, randomness)?;
        let input: Vec<Symbol> = message.iter().chain(randomness).copied().collect();
        let parities = self.mds.encode_parities(&input)?;
        let t = self.params.t;
        let mut shares: Vec<NodeShare> = (1..=self.params.n)
            .map(|node| NodeShare::new(node, BTreeMap::new()))
            .collect();
        for group in self.layout.groups() {
            let slice = &parities[group.parity_start..group.parity_start + t - 1];
            shares[group.sum_holder() - 1].set(group.id, self.field.sum(slice.iter().copied()));
            for (&node, &p) in group.nodes[1..].iter().zip(slice) {
                shares[node - 1].set(group.id, p);
            }
        }
        Ok(shares)
    }

    /// Encodes with `R` fresh uniform random symbols drawn from `rng`.
    pub fn encode_with_rng<R: Rng + ?Sized>(
        &self,
        message: &[Symbol],
        rng: &mut R,
    ) -> Result<Vec<NodeShare>, LayeredError> {
        let randomness = random_symbols(self.params.field, rng, self.dims.random_symbols);
        self.encode(message, &randomness)
    }

    fn check_share(&self, share: &NodeShare) -> Result<(), LayeredError> {
        self.check_node(share.node)?;
        let expected = self.layout.groups_of(share.node);
        if !share.symbols.keys().copied().eq(expected.iter().copied()) {
            return Err(LayeredError::MalformedShare {
                node: share.node,
                reason: format!(
                    "holds {} symbols for the wrong groups (expected {})",
                    share.len(),
                    expected.len()
                ),
            });
        }
        if let Some(&bad) = share.symbols.values().find(|&&v| !self.field.contains(v)) {
            return Err(LayeredError::MalformedShare {
                node: share.node,
                reason: format!("symbol {bad} is not in {}", self.params.field),
            });
        }
        Ok(())
    }

    /// Recovers the message from any `n-1` (or all `n`) shares.
    pub fn reconstruct(&self, shares: &[NodeShare]) -> Result<Vec<Symbol>, LayeredError> {
        let n = self.params.n;
        let mut by_node: HashMap<usize, &NodeShare> = HashMap::new();
        for share in shares {
            self.check_share(share)?;
            if by_node.insert(share.node, share).is_some() {
                return Err(LayeredError::DuplicateShare(share.node));
            }
        }
        if by_node.len() < n - 1 {
            return Err(LayeredError::InsufficientShares {
                have: by_node.len(),
                need: n - 1,
            });
        }
        let f = &self.field;
        let t = self.params.t;
        let mut parities = vec![0; self.dims.code_dimension()];
        for group in self.layout.groups() {
            let held: Vec<Option<Symbol>> = group
                .nodes
                .iter()
                .map(|v| by_node.get(v).and_then(|s| s.get(group.id)))
                .collect();
            let slot = &mut parities[group.parity_start..group.parity_start + t - 1];
            match held.iter().position(Option::is_none) {
                None => {
                    let sum = held[0].unwrap();
                    for (p, h) in slot.iter_mut().zip(&held[1..]) {
                        *p = h.unwrap();
                    }
                    if f.sum(slot.iter().copied()) != sum {
                        return Err(LayeredError::CorruptShare { group: group.id });
                    }
                }
                Some(missing) => {
                    let known = group_completion(f, &held, missing);
                    for (i, p) in slot.iter_mut().enumerate() {
                        *p = if i + 1 == missing { known } else { held[i + 1].unwrap() };
                    }
                }
            }
        }
        let k = self.dims.code_dimension();
        let known: Vec<(usize, Symbol)> = parities
            .iter()
            .enumerate()
            .map(|(i, &p)| (k + i, p))
            .collect();
        let mut decoded = self.mds.erasure_decode(&known)?;
        decoded.truncate(self.dims.message_symbols);
        Ok(decoded)
    }

    /// Collects what each surviving node sends to regenerate `failed`.
    pub fn build_transcript(&self, failed: usize, shares: &[NodeShare]) -> Result<RepairTranscript, LayeredError> {
        self.check_node(failed)?;
        let by_node: HashMap<usize, &NodeShare> = shares
            .iter()
            .filter(|s| s.node != failed)
            .map(|s| (s.node, s))
            .collect();
        let mut helpers: BTreeMap<usize, Vec<(usize, Symbol)>> = BTreeMap::new();
        for (helper, group) in self.layout.transcript_slots(failed) {
            let share = by_node.get(&helper).ok_or(LayeredError::MissingShare(helper))?;
            let value = share
                .get(group)
                .ok_or(LayeredError::MissingHelperSymbols { helper, group })?;
            helpers.entry(helper).or_default().push((group, value));
        }
        Ok(RepairTranscript { failed, helpers })
    }

    /// Regenerates the share of `failed` from a repair transcript.
    pub fn repair(&self, failed: usize, transcript: &RepairTranscript) -> Result<NodeShare, LayeredError> {
        self.check_node(failed)?;
        if transcript.failed != failed {
            return Err(LayeredError::TranscriptMismatch {
                transcript: transcript.failed,
                requested: failed,
            });
        }
        let received: HashMap<(usize, usize), Symbol> = transcript
            .helpers
            .iter()
            .flat_map(|(&h, entries)| entries.iter().map(move |&(g, s)| ((h, g), s)))
            .collect();
        let mut symbols = BTreeMap::new();
        for &gid in self.layout.groups_of(failed) {
            let group = self.layout.group(gid);
            let mut held = Vec::with_capacity(group.nodes.len());
            for &v in &group.nodes {
                if v == failed {
                    held.push(None);
                } else {
                    let s = received
                        .get(&(v, gid))
                        .copied()
                        .ok_or(LayeredError::MissingHelperSymbols { helper: v, group: gid })?;
                    self.field.check(s as u64)?;
                    held.push(Some(s));
                }
            }
            let missing = group.nodes.binary_search(&failed).expect("failed node is in its group");
            symbols.insert(gid, group_completion(&self.field, &held, missing));
        }
        Ok(NodeShare::new(failed, symbols))
    }

    /// Repair transcripts of every eavesdropped node, in ascending node order.
    pub fn eavesdropper_view(&self, targets: &[usize], shares: &[NodeShare]) -> Result<Vec<RepairTranscript>, LayeredError> {
        let targets = self.check_targets(targets)?;
        targets
            .iter()
            .map(|&j| self.build_transcript(j, shares))
            .collect()
    }

    /// Validates an eavesdropper set of exactly `ℓ` distinct nodes and
    /// returns it sorted.
    pub fn check_targets(&self, targets: &[usize]) -> Result<Vec<usize>, LayeredError> {
        let set: BTreeSet<usize> = targets.iter().copied().collect();
        if set.len() != targets.len() || set.len() != self.params.ell {
            return Err(LayeredError::TargetCount {
                expected: self.params.ell,
                got: set.len(),
            });
        }
        for &v in &set {
            self.check_node(v)?;
        }
        Ok(set.into_iter().collect())
    }
}

/// Missing symbol of a group from the other `t-1`, using
/// `sum symbol = Σ parities`. Position 0 is the sum symbol.
fn group_completion(field: &GaloisField, held: &[Option<Symbol>], missing: usize) -> Symbol {
    let parity_sum = field.sum(
        held[1..]
            .iter()
            .enumerate()
            .filter(|&(i, _)| i + 1 != missing)
            .map(|(_, s)| s.expect("only one symbol is missing")),
    );
    if missing == 0 {
        parity_sum
    } else {
        field.sub(held[0].expect("sum symbol is present"), parity_sum)
    }
}
