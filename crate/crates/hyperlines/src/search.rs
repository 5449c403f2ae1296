//! Exhaustive and randomized search over hypergraph space.
//!
//! Hedge subsets are encoded as integers over the colex order of vertex
//! triples, which makes the full enumeration trivially shardable into exact
//! index ranges and resumable from any position. Every examined instance
//! without a universal line is held to the `m >= ceil(lg n)` floor as a
//! runtime self-check of the whole line pipeline: a violation there is a
//! bug, not a discovery.

use std::collections::BTreeMap;
use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::hypergraph::{naive, Hypergraph3};
use crate::proofkit::exact::ceil_log2;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("exhaustive enumeration supports 2 <= n <= 7, got {n}")]
    UnsupportedSize { n: u32 },
    #[error("shard index {index} is not below shard count {count}")]
    InvalidShard { index: u64, count: u64 },
    #[error("sampled search needs at least one trial")]
    NoTrials,
    #[error("no instance met the constraint within {attempts} attempts")]
    SamplingExhausted { attempts: u64 },
    #[error("search results over different populations cannot be merged")]
    MergeMismatch,
}

/// One slice of a partitioned search: `index` of `count` equal ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shard {
    pub index: u64,
    pub count: u64,
}

impl Shard {
    pub const WHOLE: Shard = Shard { index: 0, count: 1 };

    pub fn validate(self) -> Result<(), SearchError> {
        if self.count == 0 || self.index >= self.count {
            return Err(SearchError::InvalidShard {
                index: self.index,
                count: self.count,
            });
        }
        Ok(())
    }

    /// The half-open subrange of `[0, total)` owned by this shard. The
    /// shards of a fixed `count` exactly cover the range without overlap.
    pub fn range(self, total: u64) -> Range<u64> {
        let lo = (total as u128 * self.index as u128 / self.count as u128) as u64;
        let hi = (total as u128 * (self.index + 1) as u128 / self.count as u128) as u64;
        lo..hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Sampled,
}

/// Population filter applied on top of the no-universal-line requirement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    NoUniversal,
    DbeTwoOrThree,
    DbeTwo,
    Unconstrained,
}

impl Constraint {
    pub fn admits(self, h: &Hypergraph3) -> bool {
        match self {
            Constraint::NoUniversal | Constraint::Unconstrained => true,
            Constraint::DbeTwoOrThree => dbe_condition(h, DbeVariant::TwoOrThree),
            Constraint::DbeTwo => dbe_condition(h, DbeVariant::Two),
        }
    }
}

/// A search assignment: what to enumerate and which slice of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchTask {
    pub n: u32,
    pub mode: SearchMode,
    pub constraint: Constraint,
    pub seed: u64,
    pub shard: Shard,
}

/// Which line engine measures the instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineEngine {
    /// Bitset-backed engine.
    Optimized,
    /// Sets-of-sets reference engine, kept free of bit tricks.
    NaiveReference,
}

impl LineEngine {
    fn measure(self, h: &Hypergraph3) -> (u32, bool) {
        match self {
            LineEngine::Optimized => {
                let lines = h.all_lines();
                let universal = lines.iter().any(|l| l.len() == h.n() as usize);
                (lines.m() as u32, universal)
            }
            LineEngine::NaiveReference => {
                let lines = naive::all_lines(h);
                let universal = lines.iter().any(|l| l.len() == h.n() as usize);
                (lines.len() as u32, universal)
            }
        }
    }
}

/// A minimum-line witness with its position in the enumeration (hedge mask
/// for exhaustive runs, trial index for sampled runs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub hypergraph: Hypergraph3,
    pub index: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub n: u32,
    /// Instances that satisfied the constraint and had no universal line.
    pub examined: u64,
    pub min_m: Option<u32>,
    pub argmin: Option<Witness>,
    pub histogram: BTreeMap<u32, u64>,
}

impl SearchResult {
    fn empty(n: u32) -> Self {
        SearchResult {
            n,
            examined: 0,
            min_m: None,
            argmin: None,
            histogram: BTreeMap::new(),
        }
    }

    fn record(&mut self, m: u32, h: &Hypergraph3, index: u64) {
        self.examined += 1;
        *self.histogram.entry(m).or_insert(0) += 1;
        let better = match (&self.min_m, &self.argmin) {
            (None, _) => true,
            (Some(best), Some(w)) => m < *best || (m == *best && index < w.index),
            (Some(best), None) => m < *best,
        };
        if better {
            self.min_m = Some(m);
            self.argmin = Some(Witness {
                hypergraph: h.clone(),
                index,
            });
        }
    }
}

/// Merges two partial results of the same search. Commutative and
/// associative: histograms add, minima reduce, and argmin ties resolve to
/// the smaller enumeration index, so any shard count yields the same total.
pub fn merge_results(a: SearchResult, b: SearchResult) -> Result<SearchResult, SearchError> {
    if a.n != b.n {
        return Err(SearchError::MergeMismatch);
    }
    let mut out = a;
    out.examined += b.examined;
    for (m, c) in b.histogram {
        *out.histogram.entry(m).or_insert(0) += c;
    }
    let take_b = match (&out.min_m, &b.min_m) {
        (None, Some(_)) => true,
        (Some(x), Some(y)) if y < x => true,
        (Some(x), Some(y)) if y == x => match (&out.argmin, &b.argmin) {
            (Some(wa), Some(wb)) => wb.index < wa.index,
            (None, Some(_)) => true,
            _ => false,
        },
        _ => false,
    };
    if take_b {
        out.min_m = b.min_m;
        out.argmin = b.argmin;
    }
    Ok(out)
}

pub fn triple_count(n: u32) -> u64 {
    let n = n as u64;
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// All 3-subsets of `[0, n)` in colex order: the triple `{a < b < c}` sits
/// at index `a + C(b,2) + C(c,3)`.
pub fn colex_triples(n: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::with_capacity(triple_count(n) as usize);
    for c in 2..n {
        for b in 1..c {
            for a in 0..b {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// Colex rank of an ascending triple.
pub fn triple_index(a: u32, b: u32, c: u32) -> u64 {
    debug_assert!(a < b && b < c);
    a as u64 + (b as u64 * (b as u64 - 1)) / 2 + triple_count(c)
}

/// Decodes a hedge-subset mask against the colex triple table.
pub fn hypergraph_from_mask(n: u32, mask: u64, triples: &[[u32; 3]]) -> Hypergraph3 {
    let hedges = triples
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, t)| *t);
    Hypergraph3::new(n, hedges).expect("colex triples are valid hedges")
}

/// Streams every hypergraph on `n` vertices whose hedge mask falls in this
/// shard's index range, in ascending mask order.
pub fn enumerate_hypergraphs(
    n: u32,
    shard: Shard,
) -> Result<impl Iterator<Item = Hypergraph3>, SearchError> {
    if !(2..=7).contains(&n) {
        return Err(SearchError::UnsupportedSize { n });
    }
    shard.validate()?;
    let total = 1u64 << triple_count(n);
    let triples = colex_triples(n);
    Ok(shard
        .range(total)
        .map(move |mask| hypergraph_from_mask(n, mask, &triples)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DbeVariant {
    /// No four vertices carry two or three hedges.
    TwoOrThree,
    /// No four vertices carry exactly two hedges.
    Two,
}

/// Four-vertex hedge-count condition; vacuously true below four vertices.
pub fn dbe_condition(h: &Hypergraph3, variant: DbeVariant) -> bool {
    let n = h.n();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let count = [
                        (a, b, c),
                        (a, b, d),
                        (a, c, d),
                        (b, c, d),
                    ]
                    .into_iter()
                    .filter(|&(x, y, z)| h.has_hedge(x, y, z))
                    .count();
                    let bad = match variant {
                        DbeVariant::TwoOrThree => count == 2 || count == 3,
                        DbeVariant::Two => count == 2,
                    };
                    if bad {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn lg_floor(n: u32) -> u64 {
    ceil_log2(&num_bigint::BigUint::from(n))
}

fn scan_chunk(
    n: u32,
    constraint: Constraint,
    range: Range<u64>,
    engine: LineEngine,
    triples: &[[u32; 3]],
    floor: u64,
) -> SearchResult {
    let mut out = SearchResult::empty(n);
    for mask in range {
        let h = hypergraph_from_mask(n, mask, triples);
        if !constraint.admits(&h) {
            continue;
        }
        let (m, universal) = engine.measure(&h);
        if universal {
            continue;
        }
        assert!(
            m as u64 >= floor,
            "line-count self-check failed: m = {m} < ceil(lg {n}) on mask {mask}"
        );
        out.record(m, &h, mask);
    }
    out
}

/// Exhaustive minimum-line scan over one index range of the enumeration.
pub fn min_lines_range(
    n: u32,
    constraint: Constraint,
    range: Range<u64>,
    engine: LineEngine,
) -> Result<SearchResult, SearchError> {
    if !(2..=7).contains(&n) {
        return Err(SearchError::UnsupportedSize { n });
    }
    let triples = colex_triples(n);
    let floor = lg_floor(n);
    const CHUNK: u64 = 1 << 13;
    let chunks: Vec<Range<u64>> = {
        let mut v = Vec::new();
        let mut lo = range.start;
        while lo < range.end {
            let hi = (lo + CHUNK).min(range.end);
            v.push(lo..hi);
            lo = hi;
        }
        v
    };
    Ok(chunks
        .into_par_iter()
        .map(|r| scan_chunk(n, constraint, r, engine, &triples, floor))
        .reduce(
            || SearchResult::empty(n),
            |a, b| merge_results(a, b).expect("chunks share one population"),
        ))
}

/// One shard of the exhaustive minimum-line search.
pub fn min_lines_sharded(
    n: u32,
    constraint: Constraint,
    shard: Shard,
    engine: LineEngine,
) -> Result<SearchResult, SearchError> {
    if !(2..=7).contains(&n) {
        return Err(SearchError::UnsupportedSize { n });
    }
    shard.validate()?;
    let total = 1u64 << triple_count(n);
    min_lines_range(n, constraint, shard.range(total), engine)
}

/// Minimum line count over every hypergraph on `n` vertices that satisfies
/// the constraint and has no universal line, with the full histogram and the
/// first witness in enumeration order.
pub fn min_lines(n: u32, constraint: Constraint) -> Result<SearchResult, SearchError> {
    min_lines_sharded(n, constraint, Shard::WHOLE, LineEngine::Optimized)
}

/// Isomorphism-rejected variant of [`min_lines`]: only canonical class
/// representatives (masks equal to their own canonical code) are examined,
/// so `examined` counts isomorphism classes. The raw population stays the
/// default everywhere else; the minima of the two runs must agree.
pub fn min_lines_up_to_iso(n: u32, constraint: Constraint) -> Result<SearchResult, SearchError> {
    if !(2..=7).contains(&n) {
        return Err(SearchError::UnsupportedSize { n });
    }
    let triples = colex_triples(n);
    let floor = lg_floor(n);
    let total = 1u64 << triple_count(n);
    let mut out = SearchResult::empty(n);
    for mask in 0..total {
        let h = hypergraph_from_mask(n, mask, &triples);
        if canonical_form(&h).code != mask as u128 {
            continue;
        }
        if !constraint.admits(&h) {
            continue;
        }
        let (m, universal) = LineEngine::Optimized.measure(&h);
        if universal {
            continue;
        }
        assert!(
            m as u64 >= floor,
            "line-count self-check failed: m = {m} < ceil(lg {n}) on mask {mask}"
        );
        out.record(m, &h, mask);
    }
    Ok(out)
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&trial.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

const SAMPLE_ATTEMPT_CAP: u64 = 1_000_000;

fn sample_instance(
    n: u32,
    constraint: Constraint,
    rng: &mut ChaCha8Rng,
) -> Result<Hypergraph3, SearchError> {
    // DBE-constrained populations are sparse; bias the density down so
    // rejection terminates quickly
    let p_cap = match constraint {
        Constraint::DbeTwoOrThree | Constraint::DbeTwo => {
            (8.0 / triple_count(n).max(1) as f64).min(1.0)
        }
        _ => 1.0,
    };
    for _ in 0..SAMPLE_ATTEMPT_CAP {
        let p = rng.gen::<f64>() * p_cap;
        let h = crate::metrics::gen_hypergraph(n, rng, p);
        if constraint.admits(&h) && !h.has_universal_line() {
            return Ok(h);
        }
    }
    Err(SearchError::SamplingExhausted {
        attempts: SAMPLE_ATTEMPT_CAP,
    })
}

/// One range of trial indices of a randomized search. Each trial is seeded
/// independently from its global index, so results are identical for any
/// range split and any execution order.
pub fn sampled_range(
    n: u32,
    constraint: Constraint,
    seed: u64,
    trials: Range<u64>,
) -> Result<SearchResult, SearchError> {
    if n < 2 {
        return Err(SearchError::UnsupportedSize { n });
    }
    let floor = lg_floor(n);
    let indices: Vec<u64> = trials.collect();
    indices
        .into_par_iter()
        .map(|trial| -> Result<SearchResult, SearchError> {
            let mut rng = trial_rng(seed, trial);
            let h = sample_instance(n, constraint, &mut rng)?;
            let (m, universal) = LineEngine::Optimized.measure(&h);
            debug_assert!(!universal);
            assert!(
                m as u64 >= floor,
                "line-count self-check failed: m = {m} < ceil(lg {n}) on trial {trial}"
            );
            let mut out = SearchResult::empty(n);
            out.record(m, &h, trial);
            Ok(out)
        })
        .try_reduce(
            || SearchResult::empty(n),
            |a, b| Ok(merge_results(a, b).expect("trials share one population")),
        )
}

/// Randomized search over this task's shard of `trials` total trials.
/// Deterministic in `(task.seed, trials)`; reports the minimum found, never
/// a claim of global minimality.
pub fn sampled_search(task: &SearchTask, trials: u64) -> Result<SearchResult, SearchError> {
    if trials == 0 {
        return Err(SearchError::NoTrials);
    }
    task.shard.validate()?;
    sampled_range(task.n, task.constraint, task.seed, task.shard.range(trials))
}

/// Canonical encoding of a hypergraph under vertex relabeling: the
/// lexicographically least hedge-bit sequence over all permutations. Two
/// hypergraphs get equal encodings exactly when one is a relabeling of the
/// other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub n: u32,
    pub code: u128,
}

/// Lexicographic comparison of bit sequences `b0, b1, ..` packed at
/// ascending positions: the lowest differing bit decides.
fn seq_less(a: u128, b: u128) -> bool {
    if a == b {
        return false;
    }
    let i = (a ^ b).trailing_zeros();
    a >> i & 1 == 0
}

fn source_mask(h: &Hypergraph3) -> u128 {
    let mut mask = 0u128;
    for &[a, b, c] in h.hedges() {
        mask |= 1 << triple_index(a, b, c);
    }
    mask
}

fn remap_mask(mask: u128, perm: &[u32]) -> u128 {
    let mut out = 0u128;
    let mut rest = mask;
    while rest != 0 {
        let i = rest.trailing_zeros() as u64;
        rest &= rest - 1;
        let [a, b, c] = index_triple(i);
        let mut img = [perm[a as usize], perm[b as usize], perm[c as usize]];
        img.sort_unstable();
        out |= 1 << triple_index(img[0], img[1], img[2]);
    }
    out
}

// inverse of triple_index
fn index_triple(i: u64) -> [u32; 3] {
    // unrank colex: largest c with C(c,3) <= i, then b, then a
    let mut c = 2u32;
    while triple_count(c + 1) <= i {
        c += 1;
    }
    let mut rem = i - triple_count(c);
    let mut b = 1u32;
    while (b as u64 + 1) * b as u64 / 2 <= rem {
        b += 1;
    }
    rem -= b as u64 * (b as u64 - 1) / 2;
    [rem as u32, b, c]
}

fn full_perm_min(n: u32, mask: u128) -> u128 {
    // Heap's algorithm over the identity
    let mut perm: Vec<u32> = (0..n).collect();
    let mut best = remap_mask(mask, &perm);
    let mut counters = vec![0usize; n as usize];
    let mut i = 0usize;
    while i < n as usize {
        if counters[i] < i {
            if i.is_multiple_of(2) {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            let cand = remap_mask(mask, &perm);
            if seq_less(cand, best) {
                best = cand;
            }
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    best
}

fn dfs_min(n: u32, mask: u128) -> u128 {
    let nn = n as usize;
    let t = triple_count(n);
    let full = (1u128 << t) - 1;
    if mask == 0 || mask == full {
        // the only masks fixed by every permutation
        return mask;
    }
    // candidate order: scarce vertices first tends to zero the early bits
    let mut degree = vec![0u32; nn];
    let mut rest = mask;
    while rest != 0 {
        let i = rest.trailing_zeros() as u64;
        rest &= rest - 1;
        for v in index_triple(i) {
            degree[v as usize] += 1;
        }
    }
    let mut order: Vec<u32> = (0..n).collect();
    order.sort_by_key(|&v| (degree[v as usize], v));

    let id: Vec<u32> = (0..n).collect();
    let mut best = remap_mask(mask, &id);

    struct Dfs<'a> {
        n: usize,
        mask: u128,
        order: &'a [u32],
        best: u128,
        perm: Vec<u32>, // perm[target] = source
        used: u64,
    }

    impl Dfs<'_> {
        fn has_hedge(&self, a: u32, b: u32, c: u32) -> bool {
            let mut v = [a, b, c];
            v.sort_unstable();
            self.mask >> triple_index(v[0], v[1], v[2]) & 1 == 1
        }

        fn go(&mut self, depth: usize, cur: u128) {
            if depth == self.n {
                if seq_less(cur, self.best) {
                    self.best = cur;
                }
                return;
            }
            let block_base = triple_count(depth as u32);
            for &v in self.order {
                if self.used >> v & 1 == 1 {
                    continue;
                }
                let mut cand = cur;
                for jj in 1..depth {
                    for ii in 0..jj {
                        if self.has_hedge(self.perm[ii], self.perm[jj], v) {
                            let pair = ii as u64 + (jj as u64 * (jj as u64 - 1)) / 2;
                            cand |= 1 << (block_base + pair);
                        }
                    }
                }
                let prefix_bits = triple_count(depth as u32 + 1);
                let prefix_mask = if prefix_bits >= 128 {
                    u128::MAX
                } else {
                    (1u128 << prefix_bits) - 1
                };
                if seq_less(self.best & prefix_mask, cand & prefix_mask) {
                    continue; // this prefix already lost
                }
                self.used |= 1 << v;
                self.perm.push(v);
                self.go(depth + 1, cand);
                self.perm.pop();
                self.used &= !(1 << v);
            }
        }
    }

    let mut dfs = Dfs {
        n: nn,
        mask,
        order: &order,
        best,
        perm: Vec::with_capacity(nn),
        used: 0,
    };
    dfs.go(0, 0);
    best = dfs.best;
    best
}

/// Canonical form under vertex permutation. Full permutation minimization
/// up to `n = 8`; prefix-pruned assignment search for `n` in 9..=10 (still
/// exact). Larger `n` is out of range.
pub fn canonical_form(h: &Hypergraph3) -> CanonicalForm {
    let n = h.n();
    assert!(n <= 10, "canonical_form supports n <= 10, got {n}");
    let mask = source_mask(h);
    let code = if n <= 8 {
        full_perm_min(n, mask)
    } else {
        dfs_min(n, mask)
    };
    CanonicalForm { n, code }
}
