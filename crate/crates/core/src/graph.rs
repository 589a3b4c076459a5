//! Undirected simple graphs as sorted adjacency lists, vertex subsets,
//! canonical tree codes, and free-tree enumeration.

use crate::{Error, Rat, Result};
use num_traits::Zero;
use serde::Serialize;
use std::collections::VecDeque;
use std::fmt;

pub const DEFAULT_ENUM_CAP: usize = 16;

/// Immutable undirected simple graph. Vertices are `0..vertex_count`;
/// adjacency lists are sorted, loop-free and duplicate-free, and symmetric.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<u32>>,
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange {
                    index: u.max(v),
                    vertex_count: n,
                });
            }
            if u == v {
                return Err(Error::ParseGraph(format!("self-loop at {u}")));
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::ParseGraph("duplicate edge".into()));
            }
        }
        Ok(Graph { n, adj })
    }

    /// Single vertex.
    pub fn k1() -> Self {
        Graph {
            n: 1,
            adj: vec![Vec::new()],
        }
    }

    /// Path on `n` vertices, 0-1-2-...
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("path is simple")
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &edges).expect("star is simple")
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((0, n - 1));
        Graph::from_edges(n, &edges).expect("cycle is simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|l| l.len()).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(|l| l.len()).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&x| x as usize)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// Parse the text format: first line `n m`, then `m` lines `u v` with
    /// `0 <= u < v < n`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::ParseGraph("empty input".into()))?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::ParseGraph("bad vertex count".into()))?;
        let m: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::ParseGraph("bad edge count".into()))?;
        if it.next().is_some() {
            return Err(Error::ParseGraph("trailing tokens in header".into()));
        }
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let line = lines
                .next()
                .ok_or_else(|| Error::ParseGraph("missing edge line".into()))?;
            let mut it = line.split_whitespace();
            let u: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::ParseGraph(format!("bad edge line {line:?}")))?;
            let v: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::ParseGraph(format!("bad edge line {line:?}")))?;
            if it.next().is_some() {
                return Err(Error::ParseGraph(format!("trailing tokens in {line:?}")));
            }
            if u >= v {
                return Err(Error::ParseGraph(format!(
                    "edges must satisfy u < v, got {u} {v}"
                )));
            }
            edges.push((u, v));
        }
        if lines.next().is_some() {
            return Err(Error::ParseGraph("extra lines after edges".into()));
        }
        Graph::from_edges(n, &edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edge_count());
        for (u, v) in self.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.component_of(0).len() == self.n
    }

    pub fn is_forest(&self) -> bool {
        let comps = self.components();
        self.edge_count() + comps.len() == self.n
    }

    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.is_connected() && self.edge_count() == self.n - 1
    }

    /// Connected component of `v` as a vertex set.
    pub fn component_of(&self, v: usize) -> VertexSet {
        let mut seen = VertexSet::empty(self.n);
        let mut queue = VecDeque::new();
        seen.insert(v);
        queue.push_back(v);
        while let Some(u) = queue.pop_front() {
            for w in self.neighbors(u) {
                if !seen.contains(w) {
                    seen.insert(w);
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// All connected components of the whole graph.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut out = Vec::new();
        let mut seen = VertexSet::empty(self.n);
        for v in 0..self.n {
            if !seen.contains(v) {
                let comp = self.component_of(v);
                for u in comp.iter() {
                    seen.insert(u);
                }
                out.push(comp);
            }
        }
        out
    }

    /// Maximal connected pieces of the subgraph induced by `subset`.
    pub fn components_of(&self, subset: &VertexSet) -> Vec<VertexSet> {
        assert_eq!(subset.universe(), self.n, "subset universe mismatch");
        let mut out = Vec::new();
        let mut seen = VertexSet::empty(self.n);
        for v in subset.iter() {
            if seen.contains(v) {
                continue;
            }
            let mut comp = VertexSet::empty(self.n);
            let mut queue = VecDeque::new();
            comp.insert(v);
            seen.insert(v);
            queue.push_back(v);
            while let Some(u) = queue.pop_front() {
                for w in self.neighbors(u) {
                    if subset.contains(w) && !seen.contains(w) {
                        seen.insert(w);
                        comp.insert(w);
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// External boundary: vertices outside `subset` with a neighbor inside.
    pub fn boundary_of(&self, subset: &VertexSet) -> VertexSet {
        assert_eq!(subset.universe(), self.n, "subset universe mismatch");
        let mut out = VertexSet::empty(self.n);
        for v in subset.iter() {
            for w in self.neighbors(v) {
                if !subset.contains(w) {
                    out.insert(w);
                }
            }
        }
        out
    }

    /// Number of neighbors of `v` inside `subset`.
    pub fn degree_in(&self, v: usize, subset: &VertexSet) -> usize {
        self.neighbors(v).filter(|&w| subset.contains(w)).count()
    }

    /// Induced subgraph plus the map new index -> old index.
    pub fn induced(&self, subset: &VertexSet) -> (Graph, Vec<usize>) {
        let map: Vec<usize> = subset.iter().collect();
        let mut inv = vec![usize::MAX; self.n];
        for (new, &old) in map.iter().enumerate() {
            inv[old] = new;
        }
        let mut edges = Vec::new();
        for (new_u, &old_u) in map.iter().enumerate() {
            for old_v in self.neighbors(old_u) {
                if subset.contains(old_v) && old_u < old_v {
                    edges.push((new_u, inv[old_v]));
                }
            }
        }
        let g = Graph::from_edges(map.len(), &edges).expect("induced subgraph is simple");
        (g, map)
    }

    /// New graph with `v` removed, plus the map new index -> old index.
    pub fn delete_vertex(&self, v: usize) -> (Graph, Vec<usize>) {
        let mut keep = VertexSet::full(self.n);
        keep.remove(v);
        self.induced(&keep)
    }

    /// Relabel by `perm`, where `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let edges: Vec<_> = self
            .edges()
            .iter()
            .map(|&(u, v)| (perm[u], perm[v]))
            .collect();
        Graph::from_edges(self.n, &edges).expect("relabeling preserves simplicity")
    }

    /// Decode a Pruefer sequence over `n >= 2` labels.
    pub fn from_pruefer(n: usize, seq: &[usize]) -> Result<Self> {
        if n < 2 || seq.len() != n - 2 {
            return Err(Error::OutOfRange("bad Pruefer sequence length".into()));
        }
        let mut deg = vec![1usize; n];
        for &s in seq {
            if s >= n {
                return Err(Error::VertexOutOfRange {
                    index: s,
                    vertex_count: n,
                });
            }
            deg[s] += 1;
        }
        let mut edges = Vec::with_capacity(n - 1);
        let mut ptr = 0usize;
        let mut leaf = {
            while deg[ptr] != 1 {
                ptr += 1;
            }
            ptr
        };
        for &s in seq {
            edges.push((leaf, s));
            deg[s] -= 1;
            if deg[s] == 1 && s < ptr {
                leaf = s;
            } else {
                ptr += 1;
                while deg[ptr] != 1 {
                    ptr += 1;
                }
                leaf = ptr;
            }
        }
        edges.push((leaf, n - 1));
        Graph::from_edges(n, &edges)
    }

    /// Exact expectation of `f` under uniform rooting.
    pub fn uniform_rooting_expectation(&self, f: impl Fn(usize) -> Rat) -> Result<Rat> {
        if self.n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut acc = Rat::zero();
        for v in 0..self.n {
            acc += f(v);
        }
        Ok(acc / crate::rat_int(self.n as i64))
    }

    /// Both sides of the Mass Transport Principle under uniform rooting:
    /// `E[sum_x f(G,o,x)]` and `E[sum_x f(G,x,o)]`.
    pub fn mtp_check(&self, f: impl Fn(&Graph, usize, usize) -> Rat) -> (Rat, Rat) {
        let n = crate::rat_int(self.n.max(1) as i64);
        let mut lhs = Rat::zero();
        let mut rhs = Rat::zero();
        for o in 0..self.n {
            for x in 0..self.n {
                lhs += f(self, o, x);
                rhs += f(self, x, o);
            }
        }
        (lhs / n.clone(), rhs / n)
    }

    /// Centroid vertices (one or two) of a tree.
    pub fn centroids(&self) -> Vec<usize> {
        assert!(self.is_tree(), "centroids are defined for trees");
        let n = self.n;
        if n == 1 {
            return vec![0];
        }
        // subtree sizes from a DFS rooted at 0
        let order = self.dfs_order(0);
        let mut size = vec![1usize; n];
        let mut parent = vec![usize::MAX; n];
        for &v in &order {
            for w in self.neighbors(v) {
                if parent[v] != w && (parent[w] == usize::MAX) && w != order[0] {
                    parent[w] = v;
                }
            }
        }
        for &v in order.iter().rev() {
            if parent[v] != usize::MAX {
                size[parent[v]] += size[v];
            }
        }
        let mut best = n;
        let mut out = Vec::new();
        for v in 0..n {
            let mut worst = n - size[v];
            for w in self.neighbors(v) {
                if parent[w] == v {
                    worst = worst.max(size[w]);
                }
            }
            if worst < best {
                best = worst;
                out.clear();
                out.push(v);
            } else if worst == best {
                out.push(v);
            }
        }
        out
    }

    fn dfs_order(&self, root: usize) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.n);
        let mut seen = vec![false; self.n];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            order.push(v);
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        order
    }

    /// Canonical isomorphism code of a free tree.
    pub fn canonical_code(&self) -> CanonicalTreeCode {
        assert!(self.is_tree(), "canonical codes are defined for trees");
        let mut best: Option<Vec<u8>> = None;
        for c in self.centroids() {
            let code = self.ahu_code(c);
            if best.as_ref().map(|b| code < *b).unwrap_or(true) {
                best = Some(code);
            }
        }
        CanonicalTreeCode(best.unwrap())
    }

    /// AHU encoding of the tree rooted at `root`: `(` sorted child codes `)`.
    fn ahu_code(&self, root: usize) -> Vec<u8> {
        fn rec(g: &Graph, v: usize, parent: usize) -> Vec<u8> {
            let mut kids: Vec<Vec<u8>> = g
                .neighbors(v)
                .filter(|&w| w != parent)
                .map(|w| rec(g, w, v))
                .collect();
            kids.sort();
            let mut out = Vec::with_capacity(2 + kids.iter().map(|k| k.len()).sum::<usize>());
            out.push(b'(');
            for k in kids {
                out.extend_from_slice(&k);
            }
            out.push(b')');
            out
        }
        rec(self, root, usize::MAX)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// A rooted graph.
#[derive(Clone, Debug)]
pub struct RootedGraph {
    pub graph: Graph,
    pub root: usize,
}

impl RootedGraph {
    pub fn new(graph: Graph, root: usize) -> Result<Self> {
        if root >= graph.vertex_count() {
            return Err(Error::VertexOutOfRange {
                index: root,
                vertex_count: graph.vertex_count(),
            });
        }
        Ok(RootedGraph { graph, root })
    }

    /// Restriction to the root's connected component; returns the restricted
    /// rooted graph and the map new index -> old index.
    pub fn root_component(&self) -> (RootedGraph, Vec<usize>) {
        let comp = self.graph.component_of(self.root);
        let (g, map) = self.graph.induced(&comp);
        let new_root = map.iter().position(|&old| old == self.root).unwrap();
        (
            RootedGraph {
                graph: g,
                root: new_root,
            },
            map,
        )
    }
}

/// Vertex subset as a bitset over `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = VertexSet::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn from_indices(n: usize, idx: &[usize]) -> Result<Self> {
        let mut s = VertexSet::empty(n);
        for &v in idx {
            if v >= n {
                return Err(Error::VertexOutOfRange {
                    index: v,
                    vertex_count: n,
                });
            }
            s.insert(v);
        }
        Ok(s)
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, v: usize) {
        debug_assert!(v < self.n);
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        debug_assert!(v < self.n);
        self.words[v / 64] &= !(1 << (v % 64));
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.n && (self.words[v / 64] >> (v % 64)) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.contains(v))
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        assert_eq!(self.n, other.n);
        VertexSet {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn intersect(&self, other: &VertexSet) -> VertexSet {
        assert_eq!(self.n, other.n);
        VertexSet {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.intersect(other).is_empty()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertexSet{:?}", self.indices())
    }
}

/// Canonical free-tree code: equal codes iff isomorphic trees.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CanonicalTreeCode(#[serde(serialize_with = "ser_hex")] Vec<u8>);

fn ser_hex<S: serde::Serializer>(bytes: &[u8], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&hex_of(bytes))
}

fn hex_of(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

impl CanonicalTreeCode {
    pub fn to_hex(&self) -> String {
        hex_of(&self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        if s.len() % 2 != 0 {
            return Err(Error::ParseGraph("odd-length hex code".into()));
        }
        let mut bytes = Vec::with_capacity(s.len() / 2);
        for i in (0..s.len()).step_by(2) {
            let b = u8::from_str_radix(&s[i..i + 2], 16)
                .map_err(|_| Error::ParseGraph("bad hex code".into()))?;
            bytes.push(b);
        }
        Ok(CanonicalTreeCode(bytes))
    }

    /// Number of vertices of the encoded tree.
    pub fn vertex_count(&self) -> usize {
        self.0.len() / 2
    }

    /// Rebuild a tree with preorder labels from the code.
    pub fn decode(&self) -> Result<Graph> {
        let mut edges = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut next = 0usize;
        for &b in &self.0 {
            match b {
                b'(' => {
                    if let Some(&parent) = stack.last() {
                        edges.push((parent, next));
                    }
                    stack.push(next);
                    next += 1;
                }
                b')' => {
                    stack
                        .pop()
                        .ok_or_else(|| Error::ParseGraph("unbalanced code".into()))?;
                }
                _ => return Err(Error::ParseGraph("bad code byte".into())),
            }
        }
        if !stack.is_empty() || next == 0 {
            return Err(Error::ParseGraph("unbalanced code".into()));
        }
        Graph::from_edges(next, &edges)
    }
}

impl fmt::Debug for CanonicalTreeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Code({})", String::from_utf8_lossy(&self.0))
    }
}

/// Enumerate one representative per isomorphism class of free trees on `n`
/// vertices, in the deterministic order of the level-sequence successor
/// algorithm (Wright-Richmond-Odlyzko-McKay).
pub fn enumerate_free_trees(n: usize) -> Result<FreeTreeIter> {
    enumerate_free_trees_capped(n, DEFAULT_ENUM_CAP)
}

pub fn enumerate_free_trees_capped(n: usize, cap: usize) -> Result<FreeTreeIter> {
    if n < 1 {
        return Err(Error::OutOfRange("tree order must be >= 1".into()));
    }
    if n > cap {
        return Err(Error::CapExceeded {
            what: "free-tree enumeration order",
            cap,
            got: n,
        });
    }
    let layout = if n == 1 {
        None
    } else {
        // path rooted at its center
        let mut l: Vec<usize> = (0..n / 2 + 1).collect();
        l.extend(1..n.div_ceil(2));
        Some(l)
    };
    Ok(FreeTreeIter {
        order: n,
        layout,
        emitted_k1: false,
    })
}

pub struct FreeTreeIter {
    order: usize,
    layout: Option<Vec<usize>>,
    emitted_k1: bool,
}

impl Iterator for FreeTreeIter {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        if self.order == 1 {
            if self.emitted_k1 {
                return None;
            }
            self.emitted_k1 = true;
            return Some(Graph::k1());
        }
        let candidate = self.layout.take()?;
        let valid = next_valid_tree(candidate)?;
        let g = layout_to_graph(&valid);
        self.layout = next_rooted_tree(&valid, None);
        Some(g)
    }
}

/// Successor of a rooted level sequence (Beyer-Hedetniemi step).
fn next_rooted_tree(pred: &[usize], p: Option<usize>) -> Option<Vec<usize>> {
    let p = match p {
        Some(p) => p,
        None => {
            let mut p = pred.len() - 1;
            while pred[p] == 1 {
                if p == 0 {
                    return None;
                }
                p -= 1;
            }
            p
        }
    };
    if p == 0 {
        return None;
    }
    let mut q = p - 1;
    while pred[q] != pred[p] - 1 {
        q -= 1;
    }
    let mut result = pred.to_vec();
    for i in p..result.len() {
        result[i] = result[i - p + q];
    }
    Some(result)
}

/// Split a layout into the root's first subtree (levels shifted down) and
/// the tree with that subtree removed.
fn split_tree(layout: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut one_found = false;
    let mut m = layout.len();
    for (i, &l) in layout.iter().enumerate() {
        if l == 1 {
            if one_found {
                m = i;
                break;
            }
            one_found = true;
        }
    }
    let left = layout[1..m].iter().map(|&l| l - 1).collect();
    let mut rest = vec![0usize];
    rest.extend_from_slice(&layout[m..]);
    (left, rest)
}

/// Advance to the next level sequence that canonically encodes a free tree
/// (WROM validity filter), starting from `candidate` itself.
fn next_valid_tree(candidate: Vec<usize>) -> Option<Vec<usize>> {
    let mut cand = candidate;
    loop {
        let (left, rest) = split_tree(&cand);
        let left_height = left.iter().copied().max().unwrap_or(0);
        let rest_height = rest.iter().copied().max().unwrap_or(0);
        let mut valid = rest_height >= left_height;
        if valid && rest_height == left_height {
            valid = left.len() <= rest.len();
            if valid && left.len() == rest.len() {
                valid = left <= rest;
            }
        }
        if valid {
            return Some(cand);
        }
        let p = left.len();
        let mut next = next_rooted_tree(&cand, Some(p))?;
        if cand[p] > 2 {
            let (new_left, _) = split_tree(&next);
            let new_left_height = new_left.iter().copied().max().unwrap_or(0);
            let suffix: Vec<usize> = (1..new_left_height + 2).collect();
            let start = next.len() - suffix.len();
            next[start..].copy_from_slice(&suffix);
        }
        cand = next;
    }
}

fn layout_to_graph(layout: &[usize]) -> Graph {
    let mut edges = Vec::with_capacity(layout.len().saturating_sub(1));
    for i in 1..layout.len() {
        let mut j = i - 1;
        while layout[j] != layout[i] - 1 {
            j -= 1;
        }
        edges.push((j, i));
    }
    Graph::from_edges(layout.len(), &edges).expect("layout yields a tree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat_int;
    use std::collections::HashSet;

    #[test]
    fn parse_basic_graphs() {
        let p2 = Graph::parse("2 1\n0 1").unwrap();
        assert_eq!(p2.vertex_count(), 2);
        assert_eq!(p2.edge_count(), 1);
        let k1 = Graph::parse("1 0").unwrap();
        assert_eq!(k1.vertex_count(), 1);
        let star = Graph::parse("4 3\n0 1\n0 2\n0 3").unwrap();
        assert_eq!(star.degree(0), 3);
        assert!(star.is_tree());
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(Graph::parse("2 1\n1 1").is_err()); // v must exceed u
        assert!(Graph::parse("2 1\n0 5").is_err()); // out of range
        assert!(Graph::parse("2 2\n0 1\n0 1").is_err()); // duplicate
        assert!(Graph::parse("2 2\n0 1").is_err()); // missing line
        assert!(Graph::parse("2 1\n0 1\n0 1").is_err()); // extra line
    }

    #[test]
    fn components_and_boundary() {
        let star = Graph::star(3);
        let leaves = VertexSet::from_indices(4, &[1, 2, 3]).unwrap();
        let comps = star.components_of(&leaves);
        assert_eq!(comps.len(), 3);
        let b = star.boundary_of(&leaves);
        assert_eq!(b.indices(), vec![0]);
        let empty = VertexSet::empty(4);
        assert!(star.boundary_of(&empty).is_empty());

        let p3 = Graph::path(3);
        let ends = VertexSet::from_indices(3, &[0, 2]).unwrap();
        assert_eq!(p3.components_of(&ends).len(), 2);
    }

    #[test]
    fn uniform_rooting_mean_degree_of_p3() {
        let p3 = Graph::path(3);
        let e = p3
            .uniform_rooting_expectation(|v| rat_int(p3.degree(v) as i64))
            .unwrap();
        assert_eq!(e, rat_int(4) / rat_int(3));
    }

    #[test]
    fn mtp_on_p3() {
        let p3 = Graph::path(3);
        let (lhs, rhs) = p3.mtp_check(|g, x, y| {
            if g.has_edge(x, y) {
                rat_int(1)
            } else {
                rat_int(0)
            }
        });
        assert_eq!(lhs, rat_int(4) / rat_int(3));
        assert_eq!(lhs, rhs);
        let (l2, r2) = p3.mtp_check(|_, x, y| if x == y { rat_int(1) } else { rat_int(0) });
        assert_eq!(l2, rat_int(1));
        assert_eq!(r2, rat_int(1));
    }

    #[test]
    fn free_tree_counts() {
        // classical counts of free trees on n vertices
        let expect = [1usize, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235];
        for (i, &want) in expect.iter().enumerate() {
            let n = i + 1;
            let got = enumerate_free_trees(n).unwrap().count();
            assert_eq!(got, want, "free tree count at n={n}");
        }
    }

    #[test]
    fn enumerated_trees_are_distinct_trees() {
        for n in 2..=9 {
            let mut seen = HashSet::new();
            for t in enumerate_free_trees(n).unwrap() {
                assert!(t.is_tree());
                assert_eq!(t.vertex_count(), n);
                assert!(seen.insert(t.canonical_code()));
            }
        }
    }

    #[test]
    fn n4_yields_path_and_star() {
        let trees: Vec<_> = enumerate_free_trees(4).unwrap().collect();
        assert_eq!(trees.len(), 2);
        let codes: HashSet<_> = trees.iter().map(|t| t.canonical_code()).collect();
        assert!(codes.contains(&Graph::path(4).canonical_code()));
        assert!(codes.contains(&Graph::star(3).canonical_code()));
    }

    #[test]
    fn enumeration_cap() {
        assert!(enumerate_free_trees(17).is_err());
        assert!(enumerate_free_trees(0).is_err());
    }

    #[test]
    fn canonical_code_roundtrip_and_invariance() {
        let t = Graph::from_edges(6, &[(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)]).unwrap();
        let code = t.canonical_code();
        let back = code.decode().unwrap();
        assert_eq!(back.canonical_code(), code);
        let perm = [3, 0, 5, 1, 2, 4];
        assert_eq!(t.relabel(&perm).canonical_code(), code);
        let hex = code.to_hex();
        assert_eq!(CanonicalTreeCode::from_hex(&hex).unwrap(), code);
    }

    #[test]
    fn pruefer_decodes_to_trees() {
        let g = Graph::from_pruefer(5, &[2, 2, 4]).unwrap();
        assert!(g.is_tree());
        assert_eq!(g.degree(2), 3);
    }

    #[test]
    fn centroids_of_paths() {
        assert_eq!(Graph::path(5).centroids(), vec![2]);
        assert_eq!(Graph::path(4).centroids(), vec![1, 2]);
        assert_eq!(Graph::star(3).centroids(), vec![0]);
    }

    #[test]
    fn delete_vertex_maps_indices() {
        let p4 = Graph::path(4);
        let (g, map) = p4.delete_vertex(1);
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(map, vec![0, 2, 3]);
        assert_eq!(g.edge_count(), 1); // 2-3 edge survives
        assert!(!g.is_connected());
    }
}
