//! Finite simple graphs on vertex ids `0..n`.
//!
//! Adjacency is stored as one bitset per vertex, so membership tests are O(1)
//! and neighbor iteration is ascending by id. Everything downstream (sequence
//! legality, solvers, forcing closures) leans on that deterministic order.

use crate::error::{Error, Result};

const WORD: usize = 64;

fn blocks_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// An undirected simple graph: no loops, no multi-edges.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<u64>>,
    deg: Vec<usize>,
    m: usize,
}

/// Supported text encodings for [`Graph::parse`] and [`Graph::serialize`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GraphFormat {
    /// One-line graph6, short form (n <= 62).
    Graph6,
    /// A header line `n`, then one `u v` pair per line, 0-based ids.
    EdgeList,
}

impl Graph {
    /// Hard cap on vertex count; bitset adjacency is quadratic in memory.
    pub const MAX_VERTICES: usize = 8192;

    pub fn empty(n: usize) -> Result<Graph> {
        if n > Self::MAX_VERTICES {
            return Err(Error::InvalidParameter(format!(
                "graph on {n} vertices exceeds the {} vertex cap",
                Self::MAX_VERTICES
            )));
        }
        Ok(Graph {
            n,
            adj: vec![vec![0u64; blocks_for(n)]; n],
            deg: vec![0; n],
            m: 0,
        })
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        let mut g = Graph::empty(n)?;
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds the edge `{u, v}`. Self-loops and repeated edges are rejected.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::InvalidParameter(format!("self-loop at vertex {u}")));
        }
        if self.has_edge(u, v) {
            return Err(Error::InvalidParameter(format!("duplicate edge {u} {v}")));
        }
        self.adj[u][v / WORD] |= 1u64 << (v % WORD);
        self.adj[v][u / WORD] |= 1u64 << (u % WORD);
        self.deg[u] += 1;
        self.deg[v] += 1;
        self.m += 1;
        Ok(())
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::InvalidParameter(format!(
                "vertex {v} out of range for a {}-vertex graph",
                self.n
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.n && v < self.n);
        self.adj[u][v / WORD] >> (v % WORD) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.deg[v]
    }

    /// 0 for the empty graph.
    pub fn min_degree(&self) -> usize {
        self.deg.iter().copied().min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.deg.iter().copied().max().unwrap_or(0)
    }

    /// Neighbors of `v` in ascending id order.
    pub fn neighbors(&self, v: usize) -> Neighbors<'_> {
        Neighbors {
            blocks: &self.adj[v],
            word: 0,
            bits: self.adj[v].first().copied().unwrap_or(0),
        }
    }

    /// All edges as `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Connected components, each sorted ascending, ordered by least member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut queue = vec![start];
            while let Some(u) = queue.pop() {
                for v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Cartesian product: vertex `(u, v)` gets id `u * h.n() + v`, and
    /// `(u, v) ~ (u', v')` iff one coordinate is equal and the other adjacent.
    pub fn cartesian_product(&self, h: &Graph) -> Result<Graph> {
        let n = self
            .n
            .checked_mul(h.n)
            .filter(|&n| n <= Self::MAX_VERTICES)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "product on {} x {} vertices exceeds the {} vertex cap",
                    self.n,
                    h.n,
                    Self::MAX_VERTICES
                ))
            })?;
        let mut g = Graph::empty(n)?;
        for u in 0..self.n {
            for v in 0..h.n {
                let a = u * h.n + v;
                for w in h.neighbors(v) {
                    if v < w {
                        g.add_edge(a, u * h.n + w)?;
                    }
                }
                for w in self.neighbors(u) {
                    if u < w {
                        g.add_edge(a, w * h.n + v)?;
                    }
                }
            }
        }
        Ok(g)
    }

    pub fn parse(text: &str, format: GraphFormat) -> Result<Graph> {
        match format {
            GraphFormat::Graph6 => Self::from_graph6(text),
            GraphFormat::EdgeList => Self::from_edge_list(text),
        }
    }

    pub fn serialize(&self, format: GraphFormat) -> Result<String> {
        match format {
            GraphFormat::Graph6 => self.to_graph6(),
            GraphFormat::EdgeList => Ok(self.to_edge_list()),
        }
    }

    /// Parses one line of graph6 (short form). Accepts an optional
    /// `>>graph6<<` prefix and trailing line ends; anything else malformed
    /// reports the byte offset of the problem.
    pub fn from_graph6(line: &str) -> Result<Graph> {
        let s = line.trim_end_matches(['\r', '\n']);
        let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
        let bytes = s.as_bytes();
        if bytes.is_empty() {
            return Err(Error::parse("byte 0", "empty graph6 string"));
        }
        if bytes[0] == b'~' {
            return Err(Error::parse(
                "byte 0",
                "extended graph6 header (n > 62) is not supported",
            ));
        }
        if !(63..=125).contains(&bytes[0]) {
            return Err(Error::parse(
                "byte 0",
                format!("invalid graph6 size byte 0x{:02x}", bytes[0]),
            ));
        }
        let n = (bytes[0] - 63) as usize;
        let nbits = n * n.saturating_sub(1) / 2;
        let need = nbits.div_ceil(6);
        let body = &bytes[1..];
        if body.len() < need {
            return Err(Error::parse(
                format!("byte {}", bytes.len()),
                format!("truncated graph6 body: need {need} bytes, got {}", body.len()),
            ));
        }
        if body.len() > need {
            return Err(Error::parse(
                format!("byte {}", 1 + need),
                "trailing bytes after graph6 body",
            ));
        }
        for (i, &c) in body.iter().enumerate() {
            if !(63..=126).contains(&c) {
                return Err(Error::parse(
                    format!("byte {}", 1 + i),
                    format!("invalid graph6 body byte 0x{c:02x}"),
                ));
            }
        }
        let mut g = Graph::empty(n)?;
        let mut pos = 0usize;
        for j in 1..n {
            for i in 0..j {
                let bit = body[pos / 6] - 63 >> (5 - pos % 6) & 1;
                if bit == 1 {
                    g.add_edge(i, j)?;
                }
                pos += 1;
            }
        }
        // Padding bits past the triangle must be zero.
        while pos < need * 6 {
            if body[pos / 6] - 63 >> (5 - pos % 6) & 1 == 1 {
                return Err(Error::parse(
                    format!("byte {}", 1 + pos / 6),
                    "nonzero padding bits in graph6 body",
                ));
            }
            pos += 1;
        }
        Ok(g)
    }

    /// Emits short-form graph6; only graphs on at most 62 vertices fit.
    pub fn to_graph6(&self) -> Result<String> {
        if self.n > 62 {
            return Err(Error::InvalidParameter(format!(
                "graph6 short form holds at most 62 vertices, graph has {}",
                self.n
            )));
        }
        let nbits = self.n * self.n.saturating_sub(1) / 2;
        let mut body = vec![0u8; nbits.div_ceil(6)];
        let mut pos = 0usize;
        for j in 1..self.n {
            for i in 0..j {
                if self.has_edge(i, j) {
                    body[pos / 6] |= 1 << (5 - pos % 6);
                }
                pos += 1;
            }
        }
        let mut out = String::with_capacity(1 + body.len());
        out.push((self.n as u8 + 63) as char);
        for b in body {
            out.push((b + 63) as char);
        }
        Ok(out)
    }

    /// Parses the edge-list format: a header line with the vertex count, then
    /// one `u v` pair per line. Blank lines are skipped.
    pub fn from_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line_no, header) = lines
            .next()
            .ok_or_else(|| Error::parse("line 1", "missing vertex-count header"))?;
        let n: usize = header.parse().map_err(|_| {
            Error::parse(
                format!("line {line_no}"),
                format!("expected a vertex count, got \"{header}\""),
            )
        })?;
        let mut g = Graph::empty(n)?;
        for (line_no, line) in lines {
            let loc = || format!("line {line_no}");
            let mut it = line.split_whitespace();
            let mut field = |name: &str| -> Result<usize> {
                it.next()
                    .ok_or_else(|| Error::parse(loc(), format!("missing {name} endpoint")))?
                    .parse()
                    .map_err(|_| Error::parse(loc(), format!("bad {name} endpoint in \"{line}\"")))
            };
            let u = field("first")?;
            let v = field("second")?;
            if it.next().is_some() {
                return Err(Error::parse(loc(), format!("trailing fields in \"{line}\"")));
            }
            g.add_edge(u, v)
                .map_err(|e| Error::parse(loc(), e.to_string()))?;
        }
        Ok(g)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

/// Ascending-id neighbor iterator.
pub struct Neighbors<'a> {
    blocks: &'a [u64],
    word: usize,
    bits: u64,
}

impl Iterator for Neighbors<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.bits == 0 {
            self.word += 1;
            if self.word >= self.blocks.len() {
                return None;
            }
            self.bits = self.blocks[self.word];
        }
        let tz = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(self.word * WORD + tz)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn rejects_self_loop_and_duplicate() {
        let mut g = Graph::empty(3).unwrap();
        assert!(g.add_edge(1, 1).is_err());
        g.add_edge(0, 1).unwrap();
        assert!(g.add_edge(1, 0).is_err());
    }

    #[test]
    fn neighbors_ascend() {
        let g = Graph::from_edges(70, [(65, 3), (65, 64), (65, 0), (65, 69)]).unwrap();
        assert_eq!(g.neighbors(65).collect::<Vec<_>>(), vec![0, 3, 64, 69]);
        assert_eq!(g.degree(65), 4);
    }

    #[test]
    fn components_and_connectivity() {
        let g = Graph::from_edges(5, [(0, 1), (3, 4)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 1], vec![2], vec![3, 4]]);
        assert!(!g.is_connected());
        assert!(cycle(4).is_connected());
    }

    #[test]
    fn product_of_paths_is_cycle_sized() {
        let p2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        let g = p2.cartesian_product(&p2).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 4);
        assert!((0..4).all(|v| g.degree(v) == 2));
    }

    #[test]
    fn product_with_single_vertex_is_identity() {
        let p1 = Graph::empty(1).unwrap();
        let c5 = cycle(5);
        assert_eq!(c5.cartesian_product(&p1).unwrap(), c5);
    }

    #[test]
    fn graph6_known_strings() {
        let k4 = Graph::from_graph6("C~").unwrap();
        assert_eq!(k4.n(), 4);
        assert_eq!(k4.edge_count(), 6);
        assert_eq!(cycle(4).to_graph6().unwrap(), "Cl");
        let star = Graph::from_graph6("D?{").unwrap();
        assert_eq!(star.n(), 5);
        assert_eq!(star.degree(4), 4);
        assert_eq!(star.edge_count(), 4);
        assert_eq!(Graph::empty(1).unwrap().to_graph6().unwrap(), "@");
        assert_eq!(Graph::from_graph6(">>graph6<<A_\n").unwrap().edge_count(), 1);
    }

    #[test]
    fn graph6_round_trip() {
        for g in [cycle(3), cycle(7), Graph::empty(1).unwrap(), Graph::empty(0).unwrap()] {
            let s = g.to_graph6().unwrap();
            assert_eq!(Graph::from_graph6(&s).unwrap(), g);
        }
    }

    #[test]
    fn graph6_errors_carry_offsets() {
        let err = Graph::from_graph6("").unwrap_err();
        assert!(err.to_string().contains("byte 0"));
        let err = Graph::from_graph6("C").unwrap_err();
        assert!(err.to_string().contains("truncated"));
        let err = Graph::from_graph6("C~~").unwrap_err();
        assert!(err.to_string().contains("trailing"));
        let err = Graph::from_graph6("~??").unwrap_err();
        assert!(err.to_string().contains("n > 62"));
    }

    #[test]
    fn edge_list_round_trip_keeps_isolated_vertices() {
        let g = Graph::from_edges(4, [(0, 2)]).unwrap();
        let text = g.to_edge_list();
        assert_eq!(Graph::from_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn edge_list_errors_name_lines() {
        let err = Graph::from_edge_list("3\n0 1\n1 1\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3") && msg.contains("self-loop"), "{msg}");
        let err = Graph::from_edge_list("3\n0 x\n").unwrap_err();
        assert!(err.to_string().contains("line 2"));
        let err = Graph::from_edge_list("").unwrap_err();
        assert!(err.to_string().contains("header"));
    }
}
