//! k-forcing: color-change closures, minimum forcing sets, and the
//! Z-sequences they induce.
//!
//! The color change rule: a blue vertex with at least one and at most k
//! white neighbors turns them all blue at once (one wave). A set is
//! k-forcing when iterating the rule colors the whole graph, and `F_k` is
//! the least size of such a set.
//!
//! Closures here are canonical: each wave is fired by the least-id eligible
//! blue vertex. The final blue set does not depend on that choice (firing is
//! confluent; an eligible vertex stays eligible until fired), but the wave
//! list does, and downstream constructions want one reproducible trace.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sequence::{self, GrundySequence, Variant, VerifyOutcome};
use serde::{Deserialize, Serialize};

/// One application of the color change rule: `forcer` turned every vertex in
/// `forced` (its whole white neighborhood at that moment, ascending) blue.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Wave {
    pub forcer: usize,
    pub forced: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ForcingTrace {
    pub k: u32,
    pub initial_blue: Vec<usize>,
    pub waves: Vec<Wave>,
    pub final_blue: Vec<usize>,
}

impl ForcingTrace {
    /// Whether the closure colored every vertex.
    pub fn is_complete(&self, g: &Graph) -> bool {
        self.final_blue.len() == g.n()
    }
}

/// Runs the k-forcing closure from `blue` to its fixpoint.
pub fn closure(g: &Graph, k: u32, blue: &[usize]) -> Result<ForcingTrace> {
    check_k(k)?;
    let n = g.n();
    let mut is_blue = vec![false; n];
    for &v in blue {
        g.check_vertex(v)?;
        if is_blue[v] {
            return Err(Error::InvalidParameter(format!(
                "vertex {v} repeats in the initial blue set"
            )));
        }
        is_blue[v] = true;
    }
    let mut white_deg: Vec<usize> = (0..n)
        .map(|v| g.neighbors(v).filter(|&u| !is_blue[u]).count())
        .collect();
    let mut initial_blue: Vec<usize> = blue.to_vec();
    initial_blue.sort_unstable();
    let mut waves = Vec::new();
    loop {
        let forcer = (0..n).find(|&b| is_blue[b] && (1..=k as usize).contains(&white_deg[b]));
        let Some(b) = forcer else { break };
        let forced: Vec<usize> = g.neighbors(b).filter(|&u| !is_blue[u]).collect();
        for &w in &forced {
            is_blue[w] = true;
            for u in g.neighbors(w) {
                white_deg[u] -= 1;
            }
        }
        waves.push(Wave { forcer: b, forced });
    }
    let final_blue: Vec<usize> = (0..n).filter(|&v| is_blue[v]).collect();
    Ok(ForcingTrace {
        k,
        initial_blue,
        waves,
        final_blue,
    })
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ForcingResult {
    /// `F_k(g)`, summed over components for disconnected graphs.
    pub value: usize,
    /// The minimum forcing set that is lexicographically least as a sorted
    /// vertex list (per component, then unioned).
    pub witness_set: Vec<usize>,
    /// Canonical closure of `witness_set` over the whole graph; complete.
    pub trace: ForcingTrace,
}

/// Vertex-count guard for the exact minimum-set search; the subset
/// enumeration per component is exponential.
pub const FORCING_GUARD: usize = 24;

/// Computes the k-forcing number exactly with a witness set. Disconnected
/// graphs are solved per component and summed (closures never cross
/// components).
pub fn k_forcing_number(g: &Graph, k: u32) -> Result<ForcingResult> {
    check_k(k)?;
    let mut witness = Vec::new();
    for comp in g.components() {
        if comp.len() > FORCING_GUARD {
            return Err(Error::Capacity {
                n: comp.len(),
                guard: FORCING_GUARD,
            });
        }
        witness.extend(component_minimum(g, k, &comp));
    }
    witness.sort_unstable();
    let trace = closure(g, k, &witness)?;
    debug_assert!(trace.is_complete(g), "minimum sets must force everything");
    Ok(ForcingResult {
        value: witness.len(),
        witness_set: witness,
        trace,
    })
}

/// Least minimum forcing set of one component, by increasing size and then
/// lexicographic order on sorted vertex lists.
fn component_minimum(g: &Graph, k: u32, comp: &[usize]) -> Vec<usize> {
    let c = comp.len();
    if c == 1 {
        return comp.to_vec();
    }
    // Local bitset adjacency for fast closure trials.
    let local: Vec<u64> = comp
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .filter_map(|u| comp.binary_search(&u).ok())
                .fold(0u64, |m, i| m | 1 << i)
        })
        .collect();
    let full = (1u64 << c) - 1;
    // The first wave needs a blue vertex with at most k white neighbors, so
    // every forcing set has at least delta - k + 1 vertices.
    let delta = comp.iter().map(|&v| g.degree(v)).min().unwrap();
    let s_min = delta.saturating_sub(k as usize - 1).max(1);
    // Failed closures prune: any candidate inside one closes inside it too.
    let mut failed: Vec<u64> = Vec::new();
    for s in s_min..=c {
        let mut found = None;
        for_each_combination(c, s, |mask| {
            if found.is_some() || failed.iter().any(|&f| mask & !f == 0) {
                return;
            }
            let closed = local_closure(&local, k as usize, mask);
            if closed == full {
                found = Some(mask);
            } else if failed.len() < 512 {
                failed.push(closed);
            }
        });
        if let Some(mask) = found {
            return (0..c).filter(|&i| mask >> i & 1 == 1).map(|i| comp[i]).collect();
        }
    }
    unreachable!("the whole component forces itself");
}

fn local_closure(adj: &[u64], k: usize, blue: u64) -> u64 {
    let mut blue = blue;
    'outer: loop {
        let mut b = blue;
        while b != 0 {
            let v = b.trailing_zeros() as usize;
            b &= b - 1;
            let white = adj[v] & !blue;
            let cnt = white.count_ones() as usize;
            if (1..=k).contains(&cnt) {
                blue |= white;
                continue 'outer;
            }
        }
        return blue;
    }
}

/// Visits all size-`s` subsets of `0..c` as masks, in lexicographic order of
/// their sorted element lists.
fn for_each_combination(c: usize, s: usize, mut f: impl FnMut(u64)) {
    let mut idx: Vec<usize> = (0..s).collect();
    loop {
        f(idx.iter().fold(0u64, |m, &i| m | 1 << i));
        // Advance the rightmost index that still has room.
        let mut i = s;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] + (s - i) < c {
                idx[i] += 1;
                for j in i + 1..s {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Turns a complete k-forcing closure into a Z-sequence of length
/// `n - |initial blue|`: waves in reverse order, forced vertices ascending
/// within a wave, each step witnessed by its wave's forcer. The forcer is
/// adjacent to everything it forced, and at the step where a forced vertex
/// is appended, at most k - 1 later-wave or same-wave members have the
/// forcer in their closed neighborhood, so every step is legal. The result
/// is re-verified; a failure would be a bug, not bad input.
pub fn z_sequence_from_forcing(g: &Graph, k: u32, trace: &ForcingTrace) -> Result<GrundySequence> {
    check_k(k)?;
    if trace.k != k {
        return Err(Error::InvalidParameter(format!(
            "trace was computed for k = {}, requested k = {k}",
            trace.k
        )));
    }
    if !trace.is_complete(g) {
        return Err(Error::InvalidParameter(format!(
            "closure is not complete: {} of {} vertices blue",
            trace.final_blue.len(),
            g.n()
        )));
    }
    let mut seq = GrundySequence::new(Variant::Z, k);
    for wave in trace.waves.iter().rev() {
        debug_assert!(wave.forced.windows(2).all(|w| w[0] < w[1]));
        for &v in &wave.forced {
            seq.order.push(v);
            seq.witnesses.push(wave.forcer);
        }
    }
    let report = sequence::verify(g, &seq)?;
    if let VerifyOutcome::Invalid { index, reason } = report.outcome {
        return Err(Error::Internal(format!(
            "reversed forcing trace is not a Z-sequence (index {index}: {reason})"
        )));
    }
    Ok(seq)
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilySpec;

    fn family(s: &str) -> Graph {
        s.parse::<FamilySpec>().unwrap().generate().unwrap()
    }

    #[test]
    fn closure_waves_on_c5() {
        let t = closure(&family("cycle:5"), 2, &[0]).unwrap();
        assert!(t.is_complete(&family("cycle:5")));
        assert_eq!(
            t.waves,
            vec![
                Wave { forcer: 0, forced: vec![1, 4] },
                Wave { forcer: 1, forced: vec![2] },
                Wave { forcer: 2, forced: vec![3] },
            ]
        );
    }

    #[test]
    fn closure_stalls_when_too_many_whites() {
        let t = closure(&family("path:3"), 1, &[1]).unwrap();
        assert_eq!(t.final_blue, vec![1]);
        assert!(t.waves.is_empty());
    }

    #[test]
    fn closure_from_everything_is_complete_with_no_waves() {
        let g = family("cycle:4");
        let t = closure(&g, 1, &[0, 1, 2, 3]).unwrap();
        assert!(t.is_complete(&g));
        assert!(t.waves.is_empty());
    }

    #[test]
    fn closure_rejects_bad_input() {
        let g = family("cycle:4");
        assert!(closure(&g, 0, &[0]).is_err());
        assert!(closure(&g, 1, &[0, 0]).is_err());
        assert!(closure(&g, 1, &[7]).is_err());
    }

    #[test]
    fn forcing_numbers_match_hand_counts() {
        assert_eq!(k_forcing_number(&family("path:6"), 1).unwrap().value, 1);
        assert_eq!(k_forcing_number(&family("cycle:6"), 1).unwrap().value, 2);
        assert_eq!(k_forcing_number(&family("cycle:5"), 2).unwrap().value, 1);
        assert_eq!(k_forcing_number(&family("complete:4"), 1).unwrap().value, 3);
        assert_eq!(k_forcing_number(&family("kbipartite:3,3"), 3).unwrap().value, 1);
    }

    #[test]
    fn witness_set_is_lexicographically_least() {
        let r = k_forcing_number(&family("cycle:6"), 1).unwrap();
        assert_eq!(r.witness_set, vec![0, 1]);
        assert!(r.trace.is_complete(&family("cycle:6")));
        let r = k_forcing_number(&family("path:6"), 1).unwrap();
        assert_eq!(r.witness_set, vec![0]);
    }

    #[test]
    fn single_vertex_forces_when_k_reaches_max_degree() {
        let star = family("kbipartite:4,1");
        let r = k_forcing_number(&star, 4).unwrap();
        assert_eq!(r.value, 1);
        assert_eq!(r.witness_set, vec![0], "a leaf forces the hub, then the hub the rest");
    }

    #[test]
    fn disconnected_graphs_sum_components() {
        let mut g = Graph::empty(10).unwrap();
        for off in [0, 5] {
            for i in 0..5 {
                g.add_edge(off + i, off + (i + 1) % 5).unwrap();
            }
        }
        let r = k_forcing_number(&g, 2).unwrap();
        assert_eq!(r.value, 2);
        assert!(r.trace.is_complete(&g));
        assert_eq!(r.witness_set, vec![0, 5]);
    }

    #[test]
    fn forcing_number_is_monotone_in_k() {
        for spec in ["cycle:7", "kbipartite:3,2", "er:9,0.4,11", "er:9,0.7,3"] {
            let g = family(spec);
            let values: Vec<usize> = (1..=4)
                .map(|k| k_forcing_number(&g, k).unwrap().value)
                .collect();
            assert!(values.windows(2).all(|w| w[0] >= w[1]), "{spec}: {values:?}");
        }
    }

    #[test]
    fn closure_is_monotone_in_the_initial_set() {
        let g = family("er:10,0.3,5");
        let small = closure(&g, 2, &[0, 3]).unwrap();
        let large = closure(&g, 2, &[0, 3, 7]).unwrap();
        assert!(small.final_blue.iter().all(|v| large.final_blue.contains(v)));
    }

    #[test]
    fn fixpoint_ignores_firing_order() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for spec in ["er:11,0.25,1", "er:11,0.4,2", "grid:3,4"] {
            let g = family(spec);
            let canonical = closure(&g, 2, &[0, 1]).unwrap();
            for _ in 0..20 {
                // Re-run the closure firing a random eligible vertex each wave.
                let mut blue = vec![false; g.n()];
                blue[0] = true;
                blue[1] = true;
                loop {
                    let mut eligible: Vec<usize> = (0..g.n())
                        .filter(|&b| {
                            blue[b] && {
                                let w = g.neighbors(b).filter(|&u| !blue[u]).count();
                                (1..=2).contains(&w)
                            }
                        })
                        .collect();
                    eligible.shuffle(&mut rng);
                    match eligible.first() {
                        None => break,
                        Some(&b) => {
                            for u in g.neighbors(b).collect::<Vec<_>>() {
                                blue[u] = true;
                            }
                        }
                    }
                }
                let final_blue: Vec<usize> = (0..g.n()).filter(|&v| blue[v]).collect();
                assert_eq!(final_blue, canonical.final_blue, "{spec}");
            }
        }
    }

    #[test]
    fn z_sequence_from_c5_trace() {
        let g = family("cycle:5");
        let r = k_forcing_number(&g, 2).unwrap();
        let seq = z_sequence_from_forcing(&g, 2, &r.trace).unwrap();
        assert_eq!(seq.order, vec![3, 2, 1, 4]);
        assert_eq!(seq.witnesses, vec![2, 1, 0, 0]);
        assert!(sequence::verify(&g, &seq).unwrap().is_valid());
    }

    #[test]
    fn z_sequence_length_is_n_minus_forcing_number() {
        for (spec, k) in [("kbipartite:3,3", 3), ("cycle:7", 2), ("grid:3,3", 2), ("er:10,0.5,9", 2)] {
            let g = family(spec);
            let r = k_forcing_number(&g, k).unwrap();
            let seq = z_sequence_from_forcing(&g, k, &r.trace).unwrap();
            assert_eq!(seq.len(), g.n() - r.value, "{spec}");
            assert!(sequence::verify(&g, &seq).unwrap().is_valid(), "{spec}");
        }
    }

    #[test]
    fn z_sequence_rejects_incomplete_or_mismatched_traces() {
        let g = family("path:3");
        let stalled = closure(&g, 1, &[1]).unwrap();
        assert!(z_sequence_from_forcing(&g, 1, &stalled).is_err());
        let done = closure(&g, 1, &[0]).unwrap();
        assert!(z_sequence_from_forcing(&g, 2, &done).is_err());
        let empty_start = closure(&g, 1, &[]).unwrap();
        assert!(!empty_start.is_complete(&g));
    }

    #[test]
    fn trace_json_round_trip() {
        let g = family("cycle:5");
        let t = closure(&g, 2, &[0]).unwrap();
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<ForcingTrace>(&json).unwrap(), t);
    }
}
