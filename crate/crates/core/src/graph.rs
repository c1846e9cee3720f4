//! Square rhomboids as explicit labeled st-dags.
//!
//! `SR(n)` has `n` basic vertices on the middle row, `n - 1` upper and
//! `n - 1` lower vertices. Edge families, for `p` in range:
//!
//! ```text
//! b_p      : basic p  -> basic p+1
//! e_{2p-1} : basic p  -> upper p      e_{2p} : upper p -> basic p+1
//! d_{2p-1} : basic p  -> lower p      d_{2p} : lower p -> basic p+1
//! c_p      : upper p  -> upper p+1
//! a_p      : lower p  -> lower p+1
//! ```
//!
//! Subgraphs keep the global edge indices of the ambient rhomboid, so
//! subexpressions compose without relabeling.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Monomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Letter {
    A,
    B,
    C,
    D,
    E,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
            Letter::C => 'c',
            Letter::D => 'd',
            Letter::E => 'e',
        }
    }

    fn from_char(c: char) -> Option<Letter> {
        Some(match c {
            'a' => Letter::A,
            'b' => Letter::B,
            'c' => Letter::C,
            'd' => Letter::D,
            'e' => Letter::E,
            _ => return None,
        })
    }
}

/// An edge label such as `b1` or `e10`. Ordered by letter, then index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeLabel {
    pub letter: Letter,
    pub index: u32,
}

impl EdgeLabel {
    pub const fn new(letter: Letter, index: u32) -> Self {
        EdgeLabel { letter, index }
    }
    pub const fn a(index: u32) -> Self {
        Self::new(Letter::A, index)
    }
    pub const fn b(index: u32) -> Self {
        Self::new(Letter::B, index)
    }
    pub const fn c(index: u32) -> Self {
        Self::new(Letter::C, index)
    }
    pub const fn d(index: u32) -> Self {
        Self::new(Letter::D, index)
    }
    pub const fn e(index: u32) -> Self {
        Self::new(Letter::E, index)
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter.as_char(), self.index)
    }
}

impl FromStr for EdgeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |reason| Error::Parse {
            input: s.to_owned(),
            reason,
        };
        let mut chars = s.chars();
        let letter = chars
            .next()
            .and_then(Letter::from_char)
            .ok_or_else(|| parse_err("expected one of a, b, c, d, e"))?;
        let index: u32 = chars
            .as_str()
            .parse()
            .map_err(|_| parse_err("expected a positive index"))?;
        if index == 0 {
            return Err(parse_err("expected a positive index"));
        }
        Ok(EdgeLabel { letter, index })
    }
}

impl Serialize for EdgeLabel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EdgeLabel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Which row of the rhomboid a vertex sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TerminalKind {
    Basic,
    Upper,
    Lower,
}

/// A vertex of a square rhomboid, which doubles as the vertex key.
///
/// The derived order (index first, then basic < upper < lower) is a
/// topological order of every rhomboid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Terminal {
    pub index: u32,
    pub kind: TerminalKind,
}

impl Terminal {
    pub const fn basic(index: u32) -> Self {
        Terminal {
            index,
            kind: TerminalKind::Basic,
        }
    }
    pub const fn upper(index: u32) -> Self {
        Terminal {
            index,
            kind: TerminalKind::Upper,
        }
    }
    pub const fn lower(index: u32) -> Self {
        Terminal {
            index,
            kind: TerminalKind::Lower,
        }
    }

    pub fn is_basic(self) -> bool {
        self.kind == TerminalKind::Basic
    }

    /// Horizontal position: basic `p` at `2p`, upper/lower `p` at `2p + 1`.
    pub fn position(self) -> u64 {
        let base = 2 * u64::from(self.index);
        if self.is_basic() {
            base
        } else {
            base + 1
        }
    }

    /// Whether this vertex exists in `SR(n)`.
    pub fn in_sr(self, n: u32) -> bool {
        self.index >= 1
            && match self.kind {
                TerminalKind::Basic => self.index <= n,
                _ => self.index < n,
            }
    }

    fn prefix(self) -> char {
        match self.kind {
            TerminalKind::Basic => 'b',
            TerminalKind::Upper => 'u',
            TerminalKind::Lower => 'l',
        }
    }
}

/// Renders as `b3`, `u5`, `l2`.
impl fmt::Display for Terminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.prefix(), self.index)
    }
}

impl FromStr for Terminal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |reason| Error::Parse {
            input: s.to_owned(),
            reason,
        };
        let trimmed = s.trim();
        let mut chars = trimmed.chars();
        let kind = match chars.next() {
            Some('b') => TerminalKind::Basic,
            Some('u') => TerminalKind::Upper,
            Some('l') => TerminalKind::Lower,
            _ => return Err(parse_err("expected terminal prefix b, u or l")),
        };
        let index: u32 = chars
            .as_str()
            .parse()
            .map_err(|_| parse_err("expected a positive index"))?;
        if index == 0 {
            return Err(parse_err("expected a positive index"));
        }
        Ok(Terminal { index, kind })
    }
}

impl Serialize for Terminal {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge {
    pub tail: Terminal,
    pub head: Terminal,
    pub label: EdgeLabel,
}

/// Subgraph family, a pure function of the (source, sink) row pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    Sr,
    SlBasicUpper,
    SlUpperBasic,
    SlBasicLower,
    SlLowerBasic,
    TrapUpperUpper,
    TrapLowerLower,
    ParaLowerUpper,
    ParaUpperLower,
}

impl Family {
    pub fn of(src: TerminalKind, dst: TerminalKind) -> Family {
        use TerminalKind::*;
        match (src, dst) {
            (Basic, Basic) => Family::Sr,
            (Basic, Upper) => Family::SlBasicUpper,
            (Upper, Basic) => Family::SlUpperBasic,
            (Basic, Lower) => Family::SlBasicLower,
            (Lower, Basic) => Family::SlLowerBasic,
            (Upper, Upper) => Family::TrapUpperUpper,
            (Lower, Lower) => Family::TrapLowerLower,
            (Lower, Upper) => Family::ParaLowerUpper,
            (Upper, Lower) => Family::ParaUpperLower,
        }
    }

    pub fn is_single_leaf(self) -> bool {
        matches!(
            self,
            Family::SlBasicUpper | Family::SlUpperBasic | Family::SlBasicLower | Family::SlLowerBasic
        )
    }

    pub fn is_dipterous(self) -> bool {
        self.is_trapezoidal() || self.is_parallelogram()
    }

    pub fn is_trapezoidal(self) -> bool {
        matches!(self, Family::TrapUpperUpper | Family::TrapLowerLower)
    }

    pub fn is_parallelogram(self) -> bool {
        matches!(self, Family::ParaLowerUpper | Family::ParaUpperLower)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SubgraphKind {
    pub family: Family,
    /// Number of basic vertices in the subgraph.
    pub size: u32,
}

/// Classifies the subgraph spanned by `src -> dst`.
pub fn classify(src: Terminal, dst: Terminal) -> Result<SubgraphKind> {
    let ordered = src.position() < dst.position() || (src == dst && src.is_basic());
    if !ordered {
        return Err(Error::Ordering { src, dst });
    }
    let size = if src.is_basic() {
        dst.index - src.index + 1
    } else {
        dst.index - src.index
    };
    Ok(SubgraphKind {
        family: Family::of(src.kind, dst.kind),
        size,
    })
}

/// An immutable labeled st-dag whose vertices are [`Terminal`]s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledDigraph {
    vertices: BTreeSet<Terminal>,
    /// Sorted by label.
    edges: Vec<Edge>,
    source: Terminal,
    sink: Terminal,
    outgoing: BTreeMap<Terminal, Vec<usize>>,
    incoming: BTreeMap<Terminal, Vec<usize>>,
}

impl LabeledDigraph {
    fn from_parts(vertices: BTreeSet<Terminal>, mut edges: Vec<Edge>, source: Terminal, sink: Terminal) -> Self {
        edges.sort_by_key(|e| e.label);
        let mut outgoing: BTreeMap<Terminal, Vec<usize>> = vertices.iter().map(|&v| (v, Vec::new())).collect();
        let mut incoming = outgoing.clone();
        for (i, e) in edges.iter().enumerate() {
            outgoing.get_mut(&e.tail).expect("tail is a vertex").push(i);
            incoming.get_mut(&e.head).expect("head is a vertex").push(i);
        }
        LabeledDigraph {
            vertices,
            edges,
            source,
            sink,
            outgoing,
            incoming,
        }
    }

    pub fn vertices(&self) -> &BTreeSet<Terminal> {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn source(&self) -> Terminal {
        self.source
    }

    pub fn sink(&self) -> Terminal {
        self.sink
    }

    pub fn labels(&self) -> impl Iterator<Item = EdgeLabel> + '_ {
        self.edges.iter().map(|e| e.label)
    }

    pub fn out_edges(&self, v: Terminal) -> impl Iterator<Item = &Edge> + '_ {
        self.outgoing
            .get(&v)
            .into_iter()
            .flatten()
            .map(move |&i| &self.edges[i])
    }

    pub fn in_edges(&self, v: Terminal) -> impl Iterator<Item = &Edge> + '_ {
        self.incoming
            .get(&v)
            .into_iter()
            .flatten()
            .map(move |&i| &self.edges[i])
    }

    /// Kahn's algorithm, smallest ready vertex first. `None` on a cycle.
    pub fn topological_order(&self) -> Option<Vec<Terminal>> {
        let mut indegree: BTreeMap<Terminal, usize> =
            self.vertices.iter().map(|&v| (v, self.incoming[&v].len())).collect();
        let mut ready: BTreeSet<Terminal> = indegree.iter().filter(|&(_, &d)| d == 0).map(|(&v, _)| v).collect();
        let mut order = Vec::with_capacity(self.vertices.len());
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for e in self.out_edges(v) {
                let d = indegree.get_mut(&e.head).expect("head is a vertex");
                *d -= 1;
                if *d == 0 {
                    ready.insert(e.head);
                }
            }
        }
        (order.len() == self.vertices.len()).then_some(order)
    }

    /// Acyclic, one source, one sink, every vertex on a source-sink path.
    pub fn is_st_dag(&self) -> bool {
        if self.topological_order().is_none() {
            return false;
        }
        let sources: Vec<_> = self.vertices.iter().filter(|v| self.incoming[v].is_empty()).collect();
        let sinks: Vec<_> = self.vertices.iter().filter(|v| self.outgoing[v].is_empty()).collect();
        if sources != [&self.source] || sinks != [&self.sink] {
            return false;
        }
        let forward = self.reachable(self.source, Direction::Forward);
        let backward = self.reachable(self.sink, Direction::Backward);
        self.vertices
            .iter()
            .all(|v| forward.contains(v) && backward.contains(v))
    }

    fn reachable(&self, start: Terminal, dir: Direction) -> BTreeSet<Terminal> {
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let next: Vec<Terminal> = match dir {
                Direction::Forward => self.out_edges(v).map(|e| e.head).collect(),
                Direction::Backward => self.in_edges(v).map(|e| e.tail).collect(),
            };
            for w in next {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Shortest and longest source-sink path, in edges.
    pub fn path_length_bounds(&self) -> (u64, u64) {
        let order = self.topological_order().expect("st-dag is acyclic");
        let mut bounds: BTreeMap<Terminal, (u64, u64)> = BTreeMap::new();
        bounds.insert(self.source, (0, 0));
        for v in order {
            let Some(&(lo, hi)) = bounds.get(&v) else {
                continue;
            };
            for e in self.out_edges(v) {
                let entry = bounds.entry(e.head).or_insert((u64::MAX, 0));
                entry.0 = entry.0.min(lo + 1);
                entry.1 = entry.1.max(hi + 1);
            }
        }
        bounds[&self.sink]
    }
}

#[derive(Clone, Copy)]
enum Direction {
    Forward,
    Backward,
}

/// Builds `SR(n)`.
pub fn build_sr(n: u32) -> Result<LabeledDigraph> {
    if n == 0 {
        return Err(Error::InvalidSize(n));
    }
    let mut vertices = BTreeSet::new();
    let mut edges = Vec::new();
    for p in 1..=n {
        vertices.insert(Terminal::basic(p));
    }
    for p in 1..n {
        let (bp, bn) = (Terminal::basic(p), Terminal::basic(p + 1));
        let (up, lp) = (Terminal::upper(p), Terminal::lower(p));
        vertices.insert(up);
        vertices.insert(lp);
        edges.push(Edge {
            tail: bp,
            head: bn,
            label: EdgeLabel::b(p),
        });
        edges.push(Edge {
            tail: bp,
            head: up,
            label: EdgeLabel::e(2 * p - 1),
        });
        edges.push(Edge {
            tail: up,
            head: bn,
            label: EdgeLabel::e(2 * p),
        });
        edges.push(Edge {
            tail: bp,
            head: lp,
            label: EdgeLabel::d(2 * p - 1),
        });
        edges.push(Edge {
            tail: lp,
            head: bn,
            label: EdgeLabel::d(2 * p),
        });
        if p + 1 < n {
            edges.push(Edge {
                tail: up,
                head: Terminal::upper(p + 1),
                label: EdgeLabel::c(p),
            });
            edges.push(Edge {
                tail: lp,
                head: Terminal::lower(p + 1),
                label: EdgeLabel::a(p),
            });
        }
    }
    Ok(LabeledDigraph::from_parts(
        vertices,
        edges,
        Terminal::basic(1),
        Terminal::basic(n),
    ))
}

/// The subgraph made of every vertex and edge on some `src -> dst` path.
pub fn induced_subgraph(g: &LabeledDigraph, src: Terminal, dst: Terminal) -> Result<LabeledDigraph> {
    let empty = || Error::EmptySubgraph { src, dst };
    if !g.vertices.contains(&src) || !g.vertices.contains(&dst) {
        return Err(empty());
    }
    let forward = g.reachable(src, Direction::Forward);
    if !forward.contains(&dst) {
        return Err(empty());
    }
    let backward = g.reachable(dst, Direction::Backward);
    let vertices: BTreeSet<Terminal> = forward.intersection(&backward).copied().collect();
    let edges = g
        .edges
        .iter()
        .filter(|e| vertices.contains(&e.tail) && vertices.contains(&e.head))
        .copied()
        .collect();
    Ok(LabeledDigraph::from_parts(vertices, edges, src, dst))
}

/// Number of source-sink paths, by dynamic programming over a topological order.
pub fn path_count(g: &LabeledDigraph) -> BigUint {
    let order = g.topological_order().expect("st-dag is acyclic");
    let mut ways: BTreeMap<Terminal, BigUint> = BTreeMap::new();
    ways.insert(g.source, BigUint::one());
    for v in order {
        let Some(here) = ways.get(&v).cloned() else {
            continue;
        };
        for e in g.out_edges(v) {
            *ways.entry(e.head).or_insert_with(BigUint::zero) += &here;
        }
    }
    ways.remove(&g.sink).unwrap_or_default()
}

/// One monomial per source-sink path, in DFS order (edges by label).
pub fn enumerate_paths(g: &LabeledDigraph, limit: u64) -> Result<Vec<Monomial>> {
    let count = path_count(g);
    if count > BigUint::from(limit) {
        return Err(Error::Capacity {
            count: count.to_string(),
            limit,
        });
    }
    let mut out = Vec::new();
    let mut stack = Vec::new();
    walk(g, g.source, &mut stack, &mut out);
    Ok(out)
}

fn walk(g: &LabeledDigraph, v: Terminal, stack: &mut Vec<EdgeLabel>, out: &mut Vec<Monomial>) {
    if v == g.sink {
        out.push(Monomial::new(stack.clone()));
        return;
    }
    for e in g.out_edges(v) {
        stack.push(e.label);
        walk(g, e.head, stack, out);
        stack.pop();
    }
}

/// Graphviz rendering. Nodes sorted by terminal, edges by label.
pub fn to_dot(g: &LabeledDigraph) -> String {
    let mut out = String::from("digraph rhomboid {\n    rankdir=LR;\n");
    for v in &g.vertices {
        let id = dot_id(*v);
        let mut attrs = format!("label=\"{}\"", v);
        if *v == g.source || *v == g.sink {
            attrs.push_str(", shape=doublecircle");
        }
        out.push_str(&format!("    {id} [{attrs}];\n"));
    }
    for e in &g.edges {
        out.push_str(&format!(
            "    {} -> {} [label=\"{}\"];\n",
            dot_id(e.tail),
            dot_id(e.head),
            e.label
        ));
    }
    out.push_str("}\n");
    out
}

fn dot_id(v: Terminal) -> String {
    let kind = match v.kind {
        TerminalKind::Basic => "B",
        TerminalKind::Upper => "U",
        TerminalKind::Lower => "L",
    };
    format!("{kind}{}", v.index)
}
