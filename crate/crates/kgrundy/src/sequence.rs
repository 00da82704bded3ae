//! Legal-move engine for the four k-Grundy sequence variants.
//!
//! A sequence `v_1, ..., v_t` of distinct vertices is legal when every `v_i`
//! brings a witness: a vertex `u` drawn from `v_i`'s candidate neighborhood
//! that fewer than `k` earlier members have covered. The four variants differ
//! only in which side uses closed neighborhoods:
//!
//! | variant | witness drawn from | coverage counted over |
//! |---------|--------------------|-----------------------|
//! | plain   | `N[v_i]`           | `N[v_j]` (closed)     |
//! | total   | `N(v_i)`           | `N(v_j)` (open)       |
//! | z       | `N(v_i)`           | `N[v_j]` (closed)     |
//! | l       | `N[v_i]`           | `N(v_j)` (open)       |
//!
//! Coverage depends only on the set of earlier members, never their order, so
//! [`FootprintState`] keeps one open count per vertex and derives closed
//! counts by adding one when the vertex itself is chosen.

use crate::error::{Error, Result};
use crate::graph::Graph;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Plain,
    Total,
    Z,
    L,
}

pub const ALL_VARIANTS: [Variant; 4] = [Variant::Plain, Variant::Total, Variant::Z, Variant::L];

impl Variant {
    /// Whether witnesses for an appended vertex come from its closed
    /// neighborhood (otherwise open).
    pub fn witness_side_closed(self) -> bool {
        matches!(self, Variant::Plain | Variant::L)
    }

    /// Whether coverage counts closed neighborhoods of earlier members
    /// (otherwise open).
    pub fn count_side_closed(self) -> bool {
        matches!(self, Variant::Plain | Variant::Z)
    }

    pub fn tag(self) -> &'static str {
        match self {
            Variant::Plain => "plain",
            Variant::Total => "total",
            Variant::Z => "z",
            Variant::L => "l",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Variant> {
        match s {
            "plain" => Ok(Variant::Plain),
            "total" => Ok(Variant::Total),
            "z" => Ok(Variant::Z),
            "l" => Ok(Variant::L),
            _ => Err(Error::InvalidParameter(format!(
                "unknown variant \"{s}\" (expected plain, total, z, or l)"
            ))),
        }
    }
}

/// Incremental coverage counts for a growing chosen set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FootprintState {
    chosen: Vec<u64>,
    chosen_count: usize,
    open_count: Vec<u32>,
}

impl FootprintState {
    pub fn new(g: &Graph) -> FootprintState {
        FootprintState {
            chosen: vec![0u64; g.n().div_ceil(64)],
            chosen_count: 0,
            open_count: vec![0; g.n()],
        }
    }

    pub fn is_chosen(&self, v: usize) -> bool {
        self.chosen[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn chosen_count(&self) -> usize {
        self.chosen_count
    }

    /// How many chosen vertices have `u` in their open neighborhood.
    pub fn open_count(&self, u: usize) -> u32 {
        self.open_count[u]
    }

    /// How many chosen vertices have `u` in their closed neighborhood.
    pub fn closed_count(&self, u: usize) -> u32 {
        self.open_count[u] + u32::from(self.is_chosen(u))
    }

    /// The count the given variant charges against witness `u`.
    pub fn coverage(&self, variant: Variant, u: usize) -> u32 {
        if variant.count_side_closed() {
            self.closed_count(u)
        } else {
            self.open_count(u)
        }
    }

    /// Marks `v` chosen and bumps its neighbors' open counts. Legality is the
    /// caller's concern; only duplicates and bad ids are rejected here.
    pub fn append(&mut self, g: &Graph, v: usize) -> Result<()> {
        g.check_vertex(v)?;
        if self.is_chosen(v) {
            return Err(Error::InvalidParameter(format!("vertex {v} already chosen")));
        }
        self.chosen[v / 64] |= 1u64 << (v % 64);
        self.chosen_count += 1;
        for u in g.neighbors(v) {
            self.open_count[u] += 1;
        }
        Ok(())
    }

    /// Reverses an [`append`](Self::append) of `v`.
    pub fn undo(&mut self, g: &Graph, v: usize) -> Result<()> {
        g.check_vertex(v)?;
        if !self.is_chosen(v) {
            return Err(Error::InvalidParameter(format!("vertex {v} is not chosen")));
        }
        self.chosen[v / 64] &= !(1u64 << (v % 64));
        self.chosen_count -= 1;
        for u in g.neighbors(v) {
            self.open_count[u] -= 1;
        }
        Ok(())
    }
}

/// All witnesses that make appending `v` legal, ascending by id: vertices of
/// `v`'s candidate neighborhood whose coverage is still below `k`.
pub fn legal_witnesses(
    g: &Graph,
    st: &FootprintState,
    variant: Variant,
    k: u32,
    v: usize,
) -> Result<Vec<usize>> {
    g.check_vertex(v)?;
    if st.is_chosen(v) {
        return Err(Error::InvalidParameter(format!(
            "vertex {v} already chosen; witnesses are only defined for a fresh append"
        )));
    }
    let mut cand: Vec<usize> = g.neighbors(v).collect();
    if variant.witness_side_closed() {
        cand.push(v);
        cand.sort_unstable();
    }
    cand.retain(|&u| st.coverage(variant, u) < k);
    Ok(cand)
}

/// True when `v` can be legally appended.
pub fn can_append(g: &Graph, st: &FootprintState, variant: Variant, k: u32, v: usize) -> bool {
    !st.is_chosen(v)
        && (variant.witness_side_closed() && st.coverage(variant, v) < k
            || g.neighbors(v).any(|u| st.coverage(variant, u) < k))
}

/// A sequence certificate: the order vertices were appended and, optionally,
/// one recorded witness per step (parallel to `order`; empty when the builder
/// did not annotate witnesses).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GrundySequence {
    pub variant: Variant,
    pub k: u32,
    pub order: Vec<usize>,
    #[serde(default)]
    pub witnesses: Vec<usize>,
}

impl GrundySequence {
    pub fn new(variant: Variant, k: u32) -> GrundySequence {
        GrundySequence {
            variant,
            k,
            order: Vec::new(),
            witnesses: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct VerifyReport {
    pub outcome: VerifyOutcome,
    pub warnings: Vec<String>,
    /// Least-id legal witness for each verified step (the full sequence when
    /// valid, the valid prefix when not). Recomputed here so certificates are
    /// reproducible regardless of what the builder recorded.
    pub canonical_witnesses: Vec<usize>,
}

impl VerifyReport {
    pub fn is_valid(&self) -> bool {
        matches!(self.outcome, VerifyOutcome::Valid)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase", tag = "status")]
pub enum VerifyOutcome {
    Valid,
    Invalid { index: usize, reason: String },
}

/// Replays `seq` against `g`, step by step. Ids out of range are an error;
/// duplicates or witness-less steps make the sequence invalid at that 0-based
/// index. `k == 0` admits only the empty sequence. A Z-variant check with
/// `k` above the minimum degree is legal but gets a warning, since maximal
/// Z-sequences can then stall before covering anything `k` times.
pub fn verify(g: &Graph, seq: &GrundySequence) -> Result<VerifyReport> {
    for &v in &seq.order {
        g.check_vertex(v)?;
    }
    if !seq.witnesses.is_empty() && seq.witnesses.len() != seq.order.len() {
        return Err(Error::InvalidParameter(format!(
            "witness list length {} does not match order length {}",
            seq.witnesses.len(),
            seq.order.len()
        )));
    }
    for &w in &seq.witnesses {
        g.check_vertex(w)?;
    }
    let mut warnings = Vec::new();
    if seq.variant == Variant::Z && g.n() > 0 && seq.k > g.min_degree() as u32 {
        warnings.push(format!(
            "k = {} exceeds the minimum degree {}; Z-sequences cannot cover low-degree vertices k times",
            seq.k,
            g.min_degree()
        ));
    }
    let mut st = FootprintState::new(g);
    let mut canonical = Vec::with_capacity(seq.order.len());
    for (i, &v) in seq.order.iter().enumerate() {
        let invalid = |reason: String| VerifyReport {
            outcome: VerifyOutcome::Invalid { index: i, reason },
            warnings: warnings.clone(),
            canonical_witnesses: canonical.clone(),
        };
        if st.is_chosen(v) {
            return Ok(invalid(format!("vertex {v} repeats")));
        }
        let wits = legal_witnesses(g, &st, seq.variant, seq.k, v)?;
        match wits.first() {
            None => return Ok(invalid(format!("no legal witness for vertex {v}"))),
            Some(&w) => canonical.push(w),
        }
        st.append(g, v)?;
    }
    Ok(VerifyReport {
        outcome: VerifyOutcome::Valid,
        warnings,
        canonical_witnesses: canonical,
    })
}

/// Tie-breaking rule for [`greedy_extend`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GreedyRule {
    /// Always append the least-id legal vertex.
    MinId,
    /// Append a vertex with the most still-uncovered candidates, least id on
    /// ties.
    MaxNewCoverage,
}

/// Extends a valid sequence until no vertex can be appended and returns the
/// maximal sequence, annotating each added step with its least-id witness.
pub fn greedy_extend(g: &Graph, seq: &GrundySequence, rule: GreedyRule) -> Result<GrundySequence> {
    let report = verify(g, seq)?;
    if let VerifyOutcome::Invalid { index, reason } = &report.outcome {
        return Err(Error::InvalidParameter(format!(
            "cannot extend: sequence invalid at index {index}: {reason}"
        )));
    }
    let mut out = GrundySequence {
        variant: seq.variant,
        k: seq.k,
        order: seq.order.clone(),
        witnesses: report.canonical_witnesses,
    };
    let mut st = FootprintState::new(g);
    for &v in &out.order {
        st.append(g, v)?;
    }
    loop {
        let mut pick: Option<(usize, usize)> = None; // (coverage, vertex)
        for v in 0..g.n() {
            if st.is_chosen(v) {
                continue;
            }
            let wits = legal_witnesses(g, &st, out.variant, out.k, v)?;
            if wits.is_empty() {
                continue;
            }
            match rule {
                GreedyRule::MinId => {
                    pick = Some((wits.len(), v));
                    break;
                }
                GreedyRule::MaxNewCoverage => {
                    if pick.map_or(true, |(best, _)| wits.len() > best) {
                        pick = Some((wits.len(), v));
                    }
                }
            }
        }
        let Some((_, v)) = pick else { break };
        let w = legal_witnesses(g, &st, out.variant, out.k, v)?[0];
        st.append(g, v)?;
        out.order.push(v);
        out.witnesses.push(w);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilySpec;

    fn cycle(n: usize) -> Graph {
        FamilySpec::Cycle(n).generate().unwrap()
    }

    fn seq(variant: Variant, k: u32, order: &[usize]) -> GrundySequence {
        GrundySequence {
            variant,
            k,
            order: order.to_vec(),
            witnesses: Vec::new(),
        }
    }

    #[test]
    fn counts_on_a_square() {
        let c4 = cycle(4);
        let mut st = FootprintState::new(&c4);
        st.append(&c4, 0).unwrap();
        assert_eq!((0..4).map(|u| st.open_count(u)).collect::<Vec<_>>(), [0, 1, 0, 1]);
        assert_eq!(st.closed_count(0), 1);
        assert_eq!(st.closed_count(1), 1);
        st.undo(&c4, 0).unwrap();
        assert_eq!(st, FootprintState::new(&c4));
    }

    #[test]
    fn witnesses_on_a_triangle() {
        let k3 = FamilySpec::Complete(3).generate().unwrap();
        let st = FootprintState::new(&k3);
        assert_eq!(legal_witnesses(&k3, &st, Variant::Plain, 1, 0).unwrap(), vec![0, 1, 2]);
        assert_eq!(legal_witnesses(&k3, &st, Variant::Z, 1, 0).unwrap(), vec![1, 2]);
        let mut st = st;
        st.append(&k3, 0).unwrap();
        // Everything is closed-covered once now, so k = 1 leaves nothing.
        assert_eq!(legal_witnesses(&k3, &st, Variant::Plain, 1, 1).unwrap(), Vec::<usize>::new());
        assert_eq!(legal_witnesses(&k3, &st, Variant::Plain, 2, 1).unwrap(), vec![0, 1, 2]);
        assert!(legal_witnesses(&k3, &st, Variant::Plain, 2, 0).is_err(), "already chosen");
    }

    #[test]
    fn cycle_successor_stays_legal() {
        // Walking a cycle forward, the next vertex is always a fresh witness.
        let n = 7;
        let g = cycle(n);
        let mut st = FootprintState::new(&g);
        for i in 0..n - 2 {
            let wits = legal_witnesses(&g, &st, Variant::Plain, 2, i).unwrap();
            assert!(wits.contains(&(i + 1)), "step {i} misses its successor");
            assert!(can_append(&g, &st, Variant::Plain, 2, i));
            st.append(&g, i).unwrap();
        }
    }

    #[test]
    fn verify_z_walk_on_c5() {
        let g = cycle(5);
        let report = verify(&g, &seq(Variant::Z, 2, &[0, 1, 2, 3])).unwrap();
        assert!(report.is_valid());
        assert!(report.warnings.is_empty());
        assert_eq!(report.canonical_witnesses.len(), 4);
    }

    #[test]
    fn verify_rejects_fourth_vertex_on_k4_l2() {
        let k4 = FamilySpec::Complete(4).generate().unwrap();
        for order in [[0, 1, 2], [3, 1, 0], [2, 3, 1]] {
            assert!(verify(&k4, &seq(Variant::L, 2, &order)).unwrap().is_valid());
        }
        let report = verify(&k4, &seq(Variant::L, 2, &[0, 1, 2, 3])).unwrap();
        match report.outcome {
            VerifyOutcome::Invalid { index, ref reason } => {
                assert_eq!(index, 3);
                assert!(reason.contains("no legal witness"));
            }
            VerifyOutcome::Valid => panic!("K4 admits no L-sequence of length 4 at k = 2"),
        }
    }

    #[test]
    fn verify_flags_duplicates_and_bad_ids() {
        let g = cycle(4);
        let report = verify(&g, &seq(Variant::Plain, 2, &[0, 1, 0])).unwrap();
        assert_eq!(
            report.outcome,
            VerifyOutcome::Invalid { index: 2, reason: "vertex 0 repeats".into() }
        );
        assert!(verify(&g, &seq(Variant::Plain, 2, &[0, 9])).is_err());
        assert!(verify(&g, &seq(Variant::Plain, 2, &[])).unwrap().is_valid());
    }

    #[test]
    fn verify_warns_z_above_min_degree() {
        let p3 = FamilySpec::Path(3).generate().unwrap();
        let report = verify(&p3, &seq(Variant::Z, 2, &[0])).unwrap();
        assert!(report.is_valid());
        assert_eq!(report.warnings.len(), 1);
        assert!(report.warnings[0].contains("minimum degree"));
    }

    #[test]
    fn greedy_on_complete_graph_stops_at_k() {
        for (n, k) in [(4, 1), (5, 2), (6, 3), (6, 5)] {
            let g = FamilySpec::Complete(n).generate().unwrap();
            let out = greedy_extend(&g, &GrundySequence::new(Variant::Plain, k), GreedyRule::MinId)
                .unwrap();
            assert_eq!(out.len() as u32, k);
            assert_eq!(out.order, (0..k as usize).collect::<Vec<_>>());
        }
    }

    #[test]
    fn greedy_c6_reaches_five() {
        let out = greedy_extend(
            &cycle(6),
            &GrundySequence::new(Variant::Plain, 2),
            GreedyRule::MinId,
        )
        .unwrap();
        assert_eq!(out.order, vec![0, 1, 2, 3, 4]);
        assert!(verify(&cycle(6), &out).unwrap().is_valid());
    }

    #[test]
    fn greedy_rules_agree_on_maximality() {
        let g = cycle(6);
        for rule in [GreedyRule::MinId, GreedyRule::MaxNewCoverage] {
            let out = greedy_extend(&g, &GrundySequence::new(Variant::Total, 2), rule).unwrap();
            for v in 0..g.n() {
                let mut st = FootprintState::new(&g);
                for &u in &out.order {
                    st.append(&g, u).unwrap();
                }
                if !st.is_chosen(v) {
                    assert!(!can_append(&g, &st, Variant::Total, 2, v));
                }
            }
        }
    }

    #[test]
    fn certificate_json_round_trip() {
        let s = GrundySequence {
            variant: Variant::Z,
            k: 2,
            order: vec![3, 2, 1, 4],
            witnesses: vec![2, 1, 0, 0],
        };
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"variant\":\"z\""));
        assert_eq!(serde_json::from_str::<GrundySequence>(&json).unwrap(), s);
        let bare: GrundySequence =
            serde_json::from_str("{\"variant\":\"plain\",\"k\":1,\"order\":[0]}").unwrap();
        assert!(bare.witnesses.is_empty());
    }
}
