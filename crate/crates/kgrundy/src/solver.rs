//! Exact k-Grundy values by memoized subset search.
//!
//! Whether a vertex can extend a sequence depends only on the *set* of
//! earlier members, so the longest extension from a position is a function
//! of the chosen set alone. The search memoizes that function over bitmasks,
//! which caps the state space at `2^n` and motivates the capacity guard.
//!
//! Determinism contract: the value, the reported witness, and the witness's
//! recorded per-step witnesses depend only on the graph, variant, and k.
//! Early-exit pruning, memo warmth, and `parallel_width` change how fast the
//! answer arrives, never the answer: the value is the exact optimum either
//! way, and the witness is always re-derived as the lexicographically least
//! optimal sequence in a second, canonical pass.

use crate::constructions::degree_upper_bound;
use crate::error::{Error, Result};
use crate::forcing;
use crate::graph::Graph;
use crate::sequence::{self, GreedyRule, GrundySequence, Variant};
use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicU8, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Most subset entries the memo may hold. Beyond it the search still
    /// finishes, just with more re-exploration.
    pub memo_limit: usize,
    /// Abandon the search as soon as some sequence meets the degree upper
    /// bound, which proves optimality without exhausting the space.
    pub use_degree_bound_pruning: bool,
    /// Permit Z-variant searches with k above the minimum degree.
    pub allow_z_below_delta: bool,
    /// Worker threads that pre-explore top-level branches to warm the memo.
    /// The canonical pass that produces the answer is always sequential.
    pub parallel_width: usize,
    /// Exact search refuses graphs with more vertices than this. Raising it
    /// past the default buys exponentially growing time and memory; 63 is a
    /// hard ceiling (chosen sets are single words).
    pub max_vertices: usize,
}

impl Default for SolverConfig {
    fn default() -> SolverConfig {
        SolverConfig {
            memo_limit: 1 << 24,
            use_degree_bound_pruning: true,
            allow_z_below_delta: false,
            parallel_width: 1,
            max_vertices: 24,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OptimalityProof {
    /// A sequence met the degree upper bound, so nothing longer exists.
    BoundReached,
    /// The reachable state space was exhausted.
    Exhaustion,
}

#[derive(Clone, Debug)]
pub struct SolveStats {
    pub states_visited: u64,
    pub memo_hits: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub value: u32,
    /// Lexicographically least optimal sequence, each step annotated with its
    /// least-id legal witness.
    pub witness: GrundySequence,
    pub proof: OptimalityProof,
    pub stats: SolveStats,
}

/// Bounds that come with receipts: `lower_witness` is a valid sequence of
/// length `lower`.
#[derive(Clone, Debug)]
pub struct BoundsResult {
    pub lower: u32,
    pub upper: u32,
    pub lower_witness: GrundySequence,
}

/// Computes the exact k-Grundy value of `g` for the given variant, with a
/// witness. Errors: `k = 0`, graphs past the capacity guard, and Z-variant
/// requests with `k` above the minimum degree unless the config allows them.
pub fn grundy_number(
    g: &Graph,
    variant: Variant,
    k: u32,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    let started = Instant::now();
    check_k(k)?;
    let guard = cfg.max_vertices.min(63);
    if g.n() > guard {
        return Err(Error::Capacity { n: g.n(), guard });
    }
    if variant == Variant::Z && !cfg.allow_z_below_delta && k > g.min_degree() as u32 {
        return Err(Error::ZBelowDelta { k, delta: g.min_degree() });
    }
    if g.n() == 0 {
        return Ok(SolveResult {
            value: 0,
            witness: GrundySequence::new(variant, k),
            proof: OptimalityProof::Exhaustion,
            stats: SolveStats {
                states_visited: 0,
                memo_hits: 0,
                elapsed: started.elapsed(),
            },
        });
    }

    let ctx = Ctx::new(g, variant, k);
    let memo = Memo::new(g.n(), cfg.memo_limit.max(1024));
    let stats = SharedStats::default();
    let bound = (g.n() as u32).min(degree_upper_bound(g, variant, k));
    // `bound + 1` can never be reached (sequences have distinct vertices and
    // bound >= any length), so it turns the same routine into pure exhaustion.
    let target = if cfg.use_degree_bound_pruning { bound } else { bound + 1 };

    if cfg.parallel_width > 1 {
        warm_memo(&ctx, &memo, &stats, target, cfg.parallel_width);
    }

    let mut walker = Walker::new(&ctx);
    let value = match try_extend(&ctx, &memo, &stats, &mut walker, target, None) {
        Extend::Reached => target,
        Extend::MaxIs(m) => m,
        Extend::Aborted => unreachable!("no abort flag in the canonical pass"),
    };
    let proof = if value == target && cfg.use_degree_bound_pruning {
        OptimalityProof::BoundReached
    } else {
        OptimalityProof::Exhaustion
    };

    debug_assert!(walker.chosen == 0, "walker must unwind to the root");
    let mut witness = GrundySequence::new(variant, k);
    for depth in 0..value {
        let before = walker.below;
        let mut advanced = false;
        for v in 0..ctx.n {
            if walker.chosen >> v & 1 == 1 {
                continue;
            }
            let legal = ctx.cand[v] & before;
            if legal == 0 {
                continue;
            }
            walker.append(&ctx, v);
            let fits = match try_extend(&ctx, &memo, &stats, &mut walker, value - depth - 1, None) {
                Extend::Reached => true,
                Extend::MaxIs(_) => false,
                Extend::Aborted => unreachable!(),
            };
            if fits {
                witness.order.push(v);
                witness.witnesses.push(legal.trailing_zeros() as usize);
                advanced = true;
                break;
            }
            walker.undo(&ctx, v);
        }
        if !advanced {
            return Err(Error::Internal(format!(
                "witness walk stalled at depth {depth} of {value}"
            )));
        }
    }

    Ok(SolveResult {
        value,
        witness,
        proof,
        stats: stats.snapshot(started.elapsed()),
    })
}

/// Cheap certified bounds: the upper bound is the degree bound capped at `n`;
/// the lower bound is the best greedy completion under both tie rules, and
/// for the Z variant additionally the sequence derived from a minimum
/// k-forcing set when the graph is small enough to afford that search
/// (n <= 18). The returned witness always attains the lower bound.
pub fn grundy_bounds(g: &Graph, variant: Variant, k: u32) -> Result<BoundsResult> {
    check_k(k)?;
    let upper = (g.n() as u32).min(degree_upper_bound(g, variant, k));
    let empty = GrundySequence::new(variant, k);
    let mut best = sequence::greedy_extend(g, &empty, GreedyRule::MinId)?;
    let other = sequence::greedy_extend(g, &empty, GreedyRule::MaxNewCoverage)?;
    if other.len() > best.len() {
        best = other;
    }
    if variant == Variant::Z && g.n() <= 18 && g.n() > 0 {
        let forcing = forcing::k_forcing_number(g, k)?;
        if (g.n() - forcing.value) > best.len() {
            best = forcing::z_sequence_from_forcing(g, k, &forcing.trace)?;
        }
    }
    let lower = best.len() as u32;
    debug_assert!(lower <= upper, "greedy lower bound exceeded the degree bound");
    Ok(BoundsResult {
        lower,
        upper,
        lower_witness: best,
    })
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    Ok(())
}

/// Immutable per-solve tables: candidate (witness-side) neighborhood masks
/// and count-side adjacency lists.
struct Ctx {
    n: usize,
    k8: u8,
    cand: Vec<u64>,
    count_adj: Vec<Vec<u32>>,
}

impl Ctx {
    fn new(g: &Graph, variant: Variant, k: u32) -> Ctx {
        let n = g.n();
        let mut cand = vec![0u64; n];
        let mut count_adj = vec![Vec::new(); n];
        for v in 0..n {
            let mut mask = 0u64;
            for u in g.neighbors(v) {
                mask |= 1 << u;
            }
            if variant.witness_side_closed() {
                cand[v] = mask | 1 << v;
            } else {
                cand[v] = mask;
            }
            let mut adj: Vec<u32> = g.neighbors(v).map(|u| u as u32).collect();
            if variant.count_side_closed() {
                adj.push(v as u32);
            }
            count_adj[v] = adj;
        }
        // Counts never exceed n <= 63, so any k past that can never trip the
        // `== k8` threshold, which is exactly right: coverage stays below k.
        Ctx {
            n,
            k8: k.min(64) as u8,
            cand,
            count_adj,
        }
    }
}

struct Walker {
    chosen: u64,
    counts: Vec<u8>,
    below: u64,
}

impl Walker {
    fn new(ctx: &Ctx) -> Walker {
        Walker {
            chosen: 0,
            counts: vec![0; ctx.n],
            below: if ctx.n == 64 { !0 } else { (1u64 << ctx.n) - 1 },
        }
    }

    #[inline]
    fn append(&mut self, ctx: &Ctx, v: usize) {
        debug_assert!(self.chosen >> v & 1 == 0);
        self.chosen |= 1 << v;
        for &u in &ctx.count_adj[v] {
            let u = u as usize;
            self.counts[u] += 1;
            if self.counts[u] == ctx.k8 {
                self.below &= !(1u64 << u);
            }
        }
    }

    #[inline]
    fn undo(&mut self, ctx: &Ctx, v: usize) {
        debug_assert!(self.chosen >> v & 1 == 1);
        self.chosen &= !(1u64 << v);
        for &u in &ctx.count_adj[v] {
            let u = u as usize;
            if self.counts[u] == ctx.k8 {
                self.below |= 1u64 << u;
            }
            self.counts[u] -= 1;
        }
    }
}

enum Extend {
    /// Some extension of the requested length exists below this state.
    Reached,
    /// Exact longest extension from this state (fully explored).
    MaxIs(u32),
    /// Cut short by the abort flag; nothing was recorded.
    Aborted,
}

/// Core search: can the current state be extended by `needed` more vertices?
/// Returns the exact maximum on failure and memoizes only fully explored
/// states, so every stored entry is an exact fact regardless of pruning.
fn try_extend(
    ctx: &Ctx,
    memo: &Memo,
    stats: &SharedStats,
    w: &mut Walker,
    needed: u32,
    abort: Option<&AtomicBool>,
) -> Extend {
    if needed == 0 {
        return Extend::Reached;
    }
    if let Some(e) = memo.get(w.chosen) {
        stats.memo_hits.fetch_add(1, Ordering::Relaxed);
        return if e as u32 >= needed {
            Extend::Reached
        } else {
            Extend::MaxIs(e as u32)
        };
    }
    stats.states_visited.fetch_add(1, Ordering::Relaxed);

    // Fail-first ordering: fewest legal witnesses, then least id.
    let mut cands = [0u16; 64];
    let mut c = 0;
    for v in 0..ctx.n {
        if w.chosen >> v & 1 == 1 {
            continue;
        }
        let wit = ctx.cand[v] & w.below;
        if wit != 0 {
            cands[c] = (wit.count_ones() as u16) << 8 | v as u16;
            c += 1;
        }
    }
    cands[..c].sort_unstable();

    let mut best = 0u32;
    for &key in &cands[..c] {
        if abort.is_some_and(|a| a.load(Ordering::Relaxed)) {
            return Extend::Aborted;
        }
        let v = (key & 0xFF) as usize;
        w.append(ctx, v);
        let r = try_extend(ctx, memo, stats, w, needed - 1, abort);
        w.undo(ctx, v);
        match r {
            Extend::Reached => return Extend::Reached,
            Extend::MaxIs(m) => best = best.max(m + 1),
            Extend::Aborted => return Extend::Aborted,
        }
    }
    memo.put(w.chosen, best as u8);
    Extend::MaxIs(best)
}

/// Pre-explores top-level branches concurrently to fill the shared memo.
/// Workers that prove the target reachable raise a flag so the rest stop
/// early; partial explorations store nothing, so the memo stays exact.
fn warm_memo(ctx: &Ctx, memo: &Memo, stats: &SharedStats, target: u32, width: usize) {
    if target == 0 {
        return;
    }
    let root = Walker::new(ctx);
    let firsts: Vec<usize> = (0..ctx.n).filter(|&v| ctx.cand[v] & root.below != 0).collect();
    let found = AtomicBool::new(false);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(width).build() {
        Ok(pool) => pool,
        Err(_) => return, // warming is best-effort; the canonical pass answers
    };
    pool.install(|| {
        rayon::scope(|scope| {
            for &v in &firsts {
                let found = &found;
                scope.spawn(move |_| {
                    if found.load(Ordering::Relaxed) {
                        return;
                    }
                    let mut w = Walker::new(ctx);
                    w.append(ctx, v);
                    if let Extend::Reached =
                        try_extend(ctx, memo, stats, &mut w, target - 1, Some(found))
                    {
                        found.store(true, Ordering::Relaxed);
                    }
                });
            }
        });
    });
}

enum Memo {
    /// Direct-addressed table over all `2^n` masks; 0xFF means unknown.
    Table(Vec<AtomicU8>),
    /// Fallback for vertex counts whose full table would exceed the memo
    /// limit: a capped hash map.
    Map(Mutex<HashMap<u64, u8>>, usize),
}

impl Memo {
    fn new(n: usize, limit: usize) -> Memo {
        if n < 63 && 1usize << n <= limit {
            Memo::Table((0..1usize << n).map(|_| AtomicU8::new(0xFF)).collect())
        } else {
            Memo::Map(Mutex::new(HashMap::new()), limit)
        }
    }

    #[inline]
    fn get(&self, key: u64) -> Option<u8> {
        match self {
            Memo::Table(t) => {
                let e = t[key as usize].load(Ordering::Relaxed);
                (e != 0xFF).then_some(e)
            }
            Memo::Map(m, _) => m.lock().unwrap().get(&key).copied(),
        }
    }

    #[inline]
    fn put(&self, key: u64, val: u8) {
        match self {
            Memo::Table(t) => t[key as usize].store(val, Ordering::Relaxed),
            Memo::Map(m, cap) => {
                let mut m = m.lock().unwrap();
                if m.len() < *cap {
                    m.insert(key, val);
                }
            }
        }
    }
}

#[derive(Default)]
struct SharedStats {
    states_visited: AtomicU64,
    memo_hits: AtomicU64,
}

impl SharedStats {
    fn snapshot(&self, elapsed: Duration) -> SolveStats {
        SolveStats {
            states_visited: self.states_visited.load(Ordering::Relaxed),
            memo_hits: self.memo_hits.load(Ordering::Relaxed),
            elapsed,
        }
    }
}
