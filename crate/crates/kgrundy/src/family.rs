//! Parametric graph families and the `name:params` grammar used to name them.
//!
//! Vertex id layouts are part of the contract here; witness constructions and
//! tests rely on them:
//! - `cycle`/`path`: ids `0..n` in ring/chain order.
//! - `kbipartite:m,n`: left side `0..m`, right side `m..m+n`.
//! - `hypercube:d`: ids `0..2^d` adjacent iff they differ in one bit; the
//!   first coordinate of a word is the most significant bit.
//! - `grid:m,n` (`m` rows, `n` columns): row-major, `(r, c)` is `r*n + c`;
//!   identical to `path:m` x `path:n` under the product id map.
//! - `gadget:h`: two complete binary trees of height `h` in heap layout
//!   (roots `0` and `2^h - 1`, children of `x` at `2x+1`, `2x+2`, offset for
//!   the second tree), leaves joined in one alternating cycle
//!   `t_0, u_0, t_1, u_1, ...` over both leaf rows in ascending id order.
//! - `trigrid:r,c`: the grid plus the `(r, c) ~ (r+1, c+1)` diagonals.
//! - `er:n,p,seed`: Erdos-Renyi; pairs `(i, j)`, `i < j`, are sampled in
//!   lexicographic order from a ChaCha8 stream seeded with `seed`, so one
//!   spec names one graph on every platform.

use crate::error::{Error, Result};
use crate::graph::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, PartialEq, Debug)]
pub enum FamilySpec {
    Cycle(usize),
    Path(usize),
    Complete(usize),
    CompleteBipartite(usize, usize),
    Hypercube(u32),
    Grid(usize, usize),
    TreeCycleGadget(u32),
    TriangularGrid(usize, usize),
    ErRandom { n: usize, p: f64, seed: u64 },
}

impl FamilySpec {
    pub fn generate(&self) -> Result<Graph> {
        match *self {
            FamilySpec::Cycle(n) => {
                require(n >= 3, "cycle needs at least 3 vertices")?;
                Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
            }
            FamilySpec::Path(n) => {
                require(n >= 1, "path needs at least 1 vertex")?;
                Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
            }
            FamilySpec::Complete(n) => {
                require(n >= 1, "complete graph needs at least 1 vertex")?;
                Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
            }
            FamilySpec::CompleteBipartite(m, n) => {
                require(m >= 1 && n >= 1, "bipartite sides must be nonempty")?;
                Graph::from_edges(
                    m + n,
                    (0..m).flat_map(move |i| (0..n).map(move |j| (i, m + j))),
                )
            }
            FamilySpec::Hypercube(d) => {
                require(d >= 1, "hypercube dimension must be at least 1")?;
                require(d <= 13, "hypercube dimension capped at 13")?;
                let n = 1usize << d;
                Graph::from_edges(
                    n,
                    (0..n).flat_map(move |v| (0..d).map(move |b| (v, v ^ (1 << b))).filter(move |&(v, w)| v < w)),
                )
            }
            FamilySpec::Grid(m, n) => {
                require(m >= 1 && n >= 1, "grid sides must be positive")?;
                let rows = FamilySpec::Path(m).generate()?;
                let cols = FamilySpec::Path(n).generate()?;
                rows.cartesian_product(&cols)
            }
            FamilySpec::TreeCycleGadget(h) => gadget(h),
            FamilySpec::TriangularGrid(r, c) => {
                require(r >= 1 && c >= 1, "triangular grid sides must be positive")?;
                let mut g = FamilySpec::Grid(r, c).generate()?;
                for i in 0..r - 1 {
                    for j in 0..c - 1 {
                        g.add_edge(i * c + j, (i + 1) * c + j + 1)?;
                    }
                }
                Ok(g)
            }
            FamilySpec::ErRandom { n, p, seed } => {
                require(n >= 1, "random graph needs at least 1 vertex")?;
                require(p.is_finite() && (0.0..=1.0).contains(&p), "edge probability must lie in [0, 1]")?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut g = Graph::empty(n)?;
                for i in 0..n {
                    for j in i + 1..n {
                        if rng.gen::<f64>() < p {
                            g.add_edge(i, j)?;
                        }
                    }
                }
                Ok(g)
            }
        }
    }
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg.into()))
    }
}

/// Ids of the gadget tree level `level` (1-based from the root) for the tree
/// whose root has id `offset`.
pub fn gadget_level(offset: usize, level: u32) -> std::ops::Range<usize> {
    let lo = offset + (1usize << (level - 1)) - 1;
    let hi = offset + (1usize << level) - 1;
    lo..hi
}

fn gadget(h: u32) -> Result<Graph> {
    require(h >= 3, "gadget height must be at least 3")?;
    require(h <= 12, "gadget height capped at 12")?;
    let t = (1usize << h) - 1;
    let mut g = Graph::empty(2 * t)?;
    for offset in [0, t] {
        for x in 0..t {
            for child in [2 * x + 1, 2 * x + 2] {
                if child < t {
                    g.add_edge(offset + x, offset + child)?;
                }
            }
        }
    }
    let leaves = 1usize << (h - 1);
    let left = gadget_level(0, h).start;
    let right = gadget_level(t, h).start;
    for i in 0..leaves {
        g.add_edge(left + i, right + i)?;
        g.add_edge(right + i, left + (i + 1) % leaves)?;
    }
    Ok(g)
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Cycle(n) => write!(f, "cycle:{n}"),
            FamilySpec::Path(n) => write!(f, "path:{n}"),
            FamilySpec::Complete(n) => write!(f, "complete:{n}"),
            FamilySpec::CompleteBipartite(m, n) => write!(f, "kbipartite:{m},{n}"),
            FamilySpec::Hypercube(d) => write!(f, "hypercube:{d}"),
            FamilySpec::Grid(m, n) => write!(f, "grid:{m},{n}"),
            FamilySpec::TreeCycleGadget(h) => write!(f, "gadget:{h}"),
            FamilySpec::TriangularGrid(r, c) => write!(f, "trigrid:{r},{c}"),
            FamilySpec::ErRandom { n, p, seed } => write!(f, "er:{n},{p},{seed}"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    /// Grammar: `name:comma-separated-params`, e.g. `cycle:9`, `kbipartite:4,3`,
    /// `er:12,0.5,7` (the seed may be omitted and defaults to 0).
    fn from_str(s: &str) -> Result<FamilySpec> {
        let bad = |msg: String| Error::InvalidParameter(msg);
        let (name, params) = s
            .split_once(':')
            .ok_or_else(|| bad(format!("family spec \"{s}\" is missing \":params\"")))?;
        let parts: Vec<&str> = params.split(',').map(str::trim).collect();
        let arity = |want: usize| -> Result<()> {
            if parts.len() == want {
                Ok(())
            } else {
                Err(bad(format!(
                    "family {name} takes {want} parameter(s), got {}",
                    parts.len()
                )))
            }
        };
        fn num<T: FromStr>(name: &str, raw: &str) -> Result<T> {
            raw.parse().map_err(|_| {
                Error::InvalidParameter(format!("family {name}: bad parameter \"{raw}\""))
            })
        }
        let spec = match name {
            "cycle" => {
                arity(1)?;
                FamilySpec::Cycle(num(name, parts[0])?)
            }
            "path" => {
                arity(1)?;
                FamilySpec::Path(num(name, parts[0])?)
            }
            "complete" => {
                arity(1)?;
                FamilySpec::Complete(num(name, parts[0])?)
            }
            "kbipartite" => {
                arity(2)?;
                FamilySpec::CompleteBipartite(num(name, parts[0])?, num(name, parts[1])?)
            }
            "hypercube" => {
                arity(1)?;
                FamilySpec::Hypercube(num(name, parts[0])?)
            }
            "grid" => {
                arity(2)?;
                FamilySpec::Grid(num(name, parts[0])?, num(name, parts[1])?)
            }
            "gadget" => {
                arity(1)?;
                FamilySpec::TreeCycleGadget(num(name, parts[0])?)
            }
            "trigrid" => {
                arity(2)?;
                FamilySpec::TriangularGrid(num(name, parts[0])?, num(name, parts[1])?)
            }
            "er" => {
                if parts.len() != 2 && parts.len() != 3 {
                    return Err(bad(format!(
                        "family er takes n,p[,seed], got {} parameter(s)",
                        parts.len()
                    )));
                }
                FamilySpec::ErRandom {
                    n: num(name, parts[0])?,
                    p: num(name, parts[1])?,
                    seed: if parts.len() == 3 { num(name, parts[2])? } else { 0 },
                }
            }
            _ => return Err(bad(format!("unknown family \"{name}\""))),
        };
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_and_path_shapes() {
        let c4 = FamilySpec::Cycle(4).generate().unwrap();
        assert_eq!(c4.edge_count(), 4);
        assert!((0..4).all(|v| c4.degree(v) == 2));
        assert!(FamilySpec::Cycle(2).generate().is_err());
        let p5 = FamilySpec::Path(5).generate().unwrap();
        assert_eq!(p5.edge_count(), 4);
        assert_eq!(p5.min_degree(), 1);
    }

    #[test]
    fn hypercube_is_bitflip_adjacency() {
        let q3 = FamilySpec::Hypercube(3).generate().unwrap();
        assert_eq!(q3.n(), 8);
        assert_eq!(q3.edge_count(), 12);
        for u in 0..8 {
            for v in 0..8 {
                if u == v {
                    continue;
                }
                assert_eq!(q3.has_edge(u, v), (u ^ v as usize).count_ones() == 1);
            }
        }
    }

    #[test]
    fn grid_matches_product_of_paths() {
        let grid = FamilySpec::Grid(3, 4).generate().unwrap();
        let prod = FamilySpec::Path(3)
            .generate()
            .unwrap()
            .cartesian_product(&FamilySpec::Path(4).generate().unwrap())
            .unwrap();
        assert_eq!(grid, prod);
        assert_eq!(grid.edge_count(), 3 * 3 + 4 * 2);
    }

    #[test]
    fn gadget_counts_and_degrees() {
        let g = FamilySpec::TreeCycleGadget(3).generate().unwrap();
        assert_eq!(g.n(), 14);
        assert_eq!(g.edge_count(), 20);
        let deg2: Vec<usize> = (0..14).filter(|&v| g.degree(v) == 2).collect();
        assert_eq!(deg2, vec![0, 7], "only the two roots have degree 2");
        assert_eq!(g.min_degree(), 2);
        // Leaf cycle alternates between the trees.
        for i in gadget_level(0, 3) {
            let cross: Vec<usize> = g.neighbors(i).filter(|&v| v >= 7).collect();
            assert_eq!(cross.len(), 2);
        }
        let g4 = FamilySpec::TreeCycleGadget(4).generate().unwrap();
        assert_eq!(g4.n(), 30);
        assert_eq!(g4.min_degree(), 2);
    }

    #[test]
    fn trigrid_degrees() {
        let g = FamilySpec::TriangularGrid(3, 3).generate().unwrap();
        assert_eq!(g.edge_count(), 12 + 4);
        assert_eq!(g.degree(4), 6, "interior vertex of the triangular lattice");
    }

    #[test]
    fn er_is_seed_deterministic() {
        let spec = |seed| FamilySpec::ErRandom { n: 12, p: 0.5, seed };
        assert_eq!(spec(7).generate().unwrap(), spec(7).generate().unwrap());
        assert_ne!(spec(7).generate().unwrap(), spec(8).generate().unwrap());
        assert!(FamilySpec::ErRandom { n: 3, p: 1.5, seed: 0 }.generate().is_err());
    }

    #[test]
    fn grammar_round_trip() {
        for s in [
            "cycle:9",
            "path:5",
            "complete:7",
            "kbipartite:4,3",
            "hypercube:4",
            "grid:3,4",
            "gadget:3",
            "trigrid:2,5",
            "er:12,0.5,7",
        ] {
            let spec: FamilySpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
            spec.generate().unwrap();
        }
        assert_eq!(
            "er:12,0.5".parse::<FamilySpec>().unwrap(),
            FamilySpec::ErRandom { n: 12, p: 0.5, seed: 0 }
        );
        assert!("ring:5".parse::<FamilySpec>().is_err());
        assert!("cycle:".parse::<FamilySpec>().is_err());
        assert!("grid:3".parse::<FamilySpec>().is_err());
    }
}
