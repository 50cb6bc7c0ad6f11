//! Partially directed graphs over named nodes.
//!
//! A [`Pdag`] stores one mark per ordered node pair, so every adjacency query is
//! O(1). Graphs are immutable once built; operations that change structure
//! return a new graph.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::meek;

/// A node name. Names match `[A-Za-z0-9_.]+` and compare case-sensitively.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct NodeId(String);

impl NodeId {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        let valid = !name.is_empty() && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'.');
        if valid {
            Ok(NodeId(name))
        } else {
            Err(Error::InvalidName(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for NodeId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        NodeId::new(s)
    }
}

impl TryFrom<String> for NodeId {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        NodeId::new(s)
    }
}

impl From<NodeId> for String {
    fn from(id: NodeId) -> String {
        id.0
    }
}

/// An ordered set of node names.
pub type NodeSet = BTreeSet<NodeId>;

/// Builds a [`NodeSet`] from string literals.
///
/// Panics on an invalid name; intended for tests and examples.
pub fn node_set<I, S>(names: I) -> NodeSet
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    names.into_iter().map(|s| NodeId::new(s.as_ref()).expect("valid node name")).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    /// `a -> b`
    Directed,
    /// `a -- b`
    Undirected,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub a: NodeId,
    pub b: NodeId,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn directed(a: &str, b: &str) -> Result<Edge> {
        Ok(Edge { a: NodeId::new(a)?, b: NodeId::new(b)?, kind: EdgeKind::Directed })
    }

    pub fn undirected(a: &str, b: &str) -> Result<Edge> {
        Ok(Edge { a: NodeId::new(a)?, b: NodeId::new(b)?, kind: EdgeKind::Undirected })
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            EdgeKind::Directed => write!(f, "{} -> {}", self.a, self.b),
            EdgeKind::Undirected => write!(f, "{} -- {}", self.a, self.b),
        }
    }
}

/// The validity class a graph has been checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphClass {
    Pdag,
    Dag,
    Cpdag,
    Mpdag,
}

impl GraphClass {
    pub fn name(self) -> &'static str {
        match self {
            GraphClass::Pdag => "PDAG",
            GraphClass::Dag => "DAG",
            GraphClass::Cpdag => "CPDAG",
            GraphClass::Mpdag => "MPDAG",
        }
    }
}

/// Mark stored for the ordered pair `(i, j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Mark {
    None,
    /// `i -> j`
    Out,
    /// `i <- j`
    In,
    Undirected,
}

impl Mark {
    fn reversed(self) -> Mark {
        match self {
            Mark::Out => Mark::In,
            Mark::In => Mark::Out,
            m => m,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Parents,
    Ancestors,
    Descendants,
    PossibleAncestors,
    PossibleDescendants,
}

/// A partially directed graph with at most one edge per node pair.
#[derive(Clone, Debug)]
pub struct Pdag {
    names: Vec<NodeId>,
    index: HashMap<NodeId, usize>,
    marks: Vec<Mark>,
    class: GraphClass,
}

/// Structural equality: same node names and the same edges. Node order and the
/// class tag are ignored.
impl PartialEq for Pdag {
    fn eq(&self, other: &Pdag) -> bool {
        if self.len() != other.len() || !self.names.iter().all(|n| other.index.contains_key(n)) {
            return false;
        }
        let map: Vec<usize> = self.names.iter().map(|n| other.index[n]).collect();
        (0..self.len()).all(|i| (0..self.len()).all(|j| self.mark(i, j) == other.mark(map[i], map[j])))
    }
}

impl Eq for Pdag {}

impl Default for Pdag {
    fn default() -> Self {
        Pdag::empty()
    }
}

impl Pdag {
    pub fn empty() -> Pdag {
        Pdag { names: Vec::new(), index: HashMap::new(), marks: Vec::new(), class: GraphClass::Pdag }
    }

    /// Builds an acyclic PDAG. Nodes are ordered as given, followed by nodes that
    /// first appear in `edges`.
    pub fn new<N, E>(nodes: N, edges: E) -> Result<Pdag>
    where
        N: IntoIterator<Item = NodeId>,
        E: IntoIterator<Item = Edge>,
    {
        let mut names: Vec<NodeId> = Vec::new();
        let mut index = HashMap::new();
        let mut add = |id: &NodeId, names: &mut Vec<NodeId>| {
            if !index.contains_key(id) {
                index.insert(id.clone(), names.len());
                names.push(id.clone());
            }
        };
        for n in nodes {
            add(&n, &mut names);
        }
        let edges: Vec<Edge> = edges.into_iter().collect();
        for e in &edges {
            add(&e.a, &mut names);
            add(&e.b, &mut names);
        }
        let mut g = Pdag::with_nodes(names);
        for e in edges {
            g.insert_edge(&e)?;
        }
        if !g.is_acyclic() {
            return Err(Error::DirectedCycle);
        }
        Ok(g)
    }

    /// Edgeless graph on the given nodes.
    pub(crate) fn with_nodes(names: Vec<NodeId>) -> Pdag {
        let n = names.len();
        let index = names.iter().cloned().enumerate().map(|(i, id)| (id, i)).collect();
        Pdag { names, index, marks: vec![Mark::None; n * n], class: GraphClass::Pdag }
    }

    fn insert_edge(&mut self, e: &Edge) -> Result<()> {
        let i = self.require(&e.a)?;
        let j = self.require(&e.b)?;
        if i == j {
            return Err(Error::SelfLoop(e.a.clone()));
        }
        if self.mark(i, j) != Mark::None {
            return Err(Error::DuplicateEdge(e.a.clone(), e.b.clone()));
        }
        match e.kind {
            EdgeKind::Directed => self.set_mark(i, j, Mark::Out),
            EdgeKind::Undirected => self.set_mark(i, j, Mark::Undirected),
        }
        Ok(())
    }

    /// Re-validates the graph against `class` and tags it on success.
    pub fn with_class(mut self, class: GraphClass) -> Result<Pdag> {
        if !self.is_acyclic() {
            return Err(Error::DirectedCycle);
        }
        let invalid = |why: &str| Err(Error::InvalidClass(class.name(), why.to_string()));
        match class {
            GraphClass::Pdag => {}
            GraphClass::Dag => {
                if self.has_undirected_edges() {
                    return invalid("contains undirected edges");
                }
            }
            GraphClass::Mpdag => {
                if !meek::is_mpdag(&self) {
                    return invalid("an orientation rule still applies");
                }
            }
            GraphClass::Cpdag => {
                if !meek::is_mpdag(&self) {
                    return invalid("an orientation rule still applies");
                }
                let dag = meek::consistent_extension(&self)?;
                if meek::cpdag_of(&dag)? != self {
                    return invalid("some directed edge is not compelled");
                }
            }
        }
        self.class = class;
        Ok(self)
    }

    pub fn class(&self) -> GraphClass {
        self.class
    }

    pub(crate) fn set_class_unchecked(&mut self, class: GraphClass) {
        self.class = class;
    }

    pub fn parse(text: &str) -> Result<Pdag> {
        text.parse()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.names
    }

    pub fn node_set(&self) -> NodeSet {
        self.names.iter().cloned().collect()
    }

    pub fn contains(&self, id: &NodeId) -> bool {
        self.index.contains_key(id)
    }

    pub fn index_of(&self, id: &NodeId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub(crate) fn require(&self, id: &NodeId) -> Result<usize> {
        self.index_of(id).ok_or_else(|| Error::UnknownNode(id.clone()))
    }

    pub(crate) fn resolve<'a, I>(&self, ids: I) -> Result<Vec<usize>>
    where
        I: IntoIterator<Item = &'a NodeId>,
    {
        ids.into_iter().map(|id| self.require(id)).collect()
    }

    pub(crate) fn name(&self, i: usize) -> &NodeId {
        &self.names[i]
    }

    pub(crate) fn names_of<I: IntoIterator<Item = usize>>(&self, idx: I) -> NodeSet {
        idx.into_iter().map(|i| self.names[i].clone()).collect()
    }

    pub(crate) fn names_where(&self, mask: &[bool]) -> NodeSet {
        self.names_of(mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i))
    }

    #[inline]
    pub(crate) fn mark(&self, i: usize, j: usize) -> Mark {
        self.marks[i * self.names.len() + j]
    }

    pub(crate) fn set_mark(&mut self, i: usize, j: usize, m: Mark) {
        let n = self.names.len();
        self.marks[i * n + j] = m;
        self.marks[j * n + i] = m.reversed();
    }

    #[inline]
    pub(crate) fn adjacent(&self, i: usize, j: usize) -> bool {
        self.mark(i, j) != Mark::None
    }

    /// `i -> j`
    #[inline]
    pub(crate) fn directed(&self, i: usize, j: usize) -> bool {
        self.mark(i, j) == Mark::Out
    }

    #[inline]
    pub(crate) fn undirected(&self, i: usize, j: usize) -> bool {
        self.mark(i, j) == Mark::Undirected
    }

    pub(crate) fn parents_of(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&j| self.mark(i, j) == Mark::In)
    }

    pub(crate) fn children_of(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&j| self.mark(i, j) == Mark::Out)
    }

    pub(crate) fn undirected_of(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&j| self.mark(i, j) == Mark::Undirected)
    }

    pub(crate) fn neighbors_of(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&j| self.mark(i, j) != Mark::None)
    }

    pub fn has_undirected_edges(&self) -> bool {
        self.marks.contains(&Mark::Undirected)
    }

    /// Edges in canonical order: by the node-order position of the earlier endpoint,
    /// then of the later one.
    pub fn edges(&self) -> Vec<Edge> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let (a, b, kind) = match self.mark(i, j) {
                    Mark::None => continue,
                    Mark::Out => (i, j, EdgeKind::Directed),
                    Mark::In => (j, i, EdgeKind::Directed),
                    Mark::Undirected => (i, j, EdgeKind::Undirected),
                };
                out.push(Edge { a: self.names[a].clone(), b: self.names[b].clone(), kind });
            }
        }
        out
    }

    /// The edge between `a` and `b`, oriented from `a` when undirected.
    pub fn edge_between(&self, a: &NodeId, b: &NodeId) -> Option<Edge> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        let (a, b) = (a.clone(), b.clone());
        match self.mark(i, j) {
            Mark::None => None,
            Mark::Out => Some(Edge { a, b, kind: EdgeKind::Directed }),
            Mark::In => Some(Edge { a: b, b: a, kind: EdgeKind::Directed }),
            Mark::Undirected => Some(Edge { a, b, kind: EdgeKind::Undirected }),
        }
    }

    /// True when the directed part has no cycle.
    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// A topological order of the directed part (undirected edges ignored), or
    /// `None` if there is a directed cycle.
    pub(crate) fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.len();
        let mut indegree: Vec<usize> = (0..n).map(|i| self.parents_of(i).count()).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = queue.pop_front() {
            order.push(i);
            for j in self.children_of(i) {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    queue.push_back(j);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Induced subgraph on `keep`; the result is tagged as a plain PDAG.
    pub fn induced_subgraph(&self, keep: &NodeSet) -> Result<Pdag> {
        let mut idx = self.resolve(keep)?;
        idx.sort_unstable();
        Ok(self.induced_by_index(&idx))
    }

    pub(crate) fn induced_by_index(&self, idx: &[usize]) -> Pdag {
        let mut g = Pdag::with_nodes(idx.iter().map(|&i| self.names[i].clone()).collect());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate().skip(a + 1) {
                let m = self.mark(i, j);
                if m != Mark::None {
                    g.set_mark(a, b, m);
                }
            }
        }
        g
    }

    /// Same nodes, undirected edges only.
    pub fn undirected_subgraph(&self) -> Pdag {
        let mut g = Pdag::with_nodes(self.names.clone());
        for i in 0..self.len() {
            for j in self.undirected_of(i).filter(|&j| j > i).collect::<Vec<_>>() {
                g.set_mark(i, j, Mark::Undirected);
            }
        }
        g
    }

    /// Parents of a set exclude the set itself; every other relation is the
    /// union over members and contains the members.
    pub fn relatives(&self, xs: &NodeSet, relation: Relation) -> Result<NodeSet> {
        let idx = self.resolve(xs)?;
        let mask = match relation {
            Relation::Parents => self.parents_of_set(&idx),
            Relation::Ancestors => self.reach(&idx, |m| m == Mark::In),
            Relation::Descendants => self.reach(&idx, |m| m == Mark::Out),
            Relation::PossibleAncestors => self.possibly_causal_reach(&idx, true),
            Relation::PossibleDescendants => self.possible_descendants(&idx),
        };
        Ok(self.names_where(&mask))
    }

    pub(crate) fn parents_of_set(&self, idx: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.len()];
        for &i in idx {
            for p in self.parents_of(i) {
                mask[p] = true;
            }
        }
        for &i in idx {
            mask[i] = false;
        }
        mask
    }

    pub(crate) fn ancestors(&self, idx: &[usize]) -> Vec<bool> {
        self.reach(idx, |m| m == Mark::In)
    }

    /// Ends of possibly causal paths out of `idx`, `idx` included.
    pub(crate) fn possible_descendants(&self, idx: &[usize]) -> Vec<bool> {
        self.possibly_causal_reach(idx, false)
    }

    /// Depth-first search over possibly causal paths starting (or, when
    /// `backward`, ending) in `idx`.
    ///
    /// Following non-backward edges is not enough: in `V0 -- V1`, `V0 -- V2`,
    /// `V0 -- V3`, `V2 -- V3`, `V3 -> V1`, every path from `V1` to `V3` has the
    /// chord `V3 -> V1`. A path is
    /// only extended by nodes with no directed edge into the path (out of it,
    /// when `backward`). Only unshielded paths are explored, since every
    /// possibly causal path in an MPDAG has an unshielded possibly causal
    /// subsequence between the same endpoints.
    fn possibly_causal_reach(&self, idx: &[usize], backward: bool) -> Vec<bool> {
        fn extend(g: &Pdag, path: &mut Vec<usize>, seen: &mut [bool], backward: bool) {
            let last = path[path.len() - 1];
            for w in 0..g.len() {
                let (from, to) = if backward { (w, last) } else { (last, w) };
                if !matches!(g.mark(from, to), Mark::Out | Mark::Undirected) || path.contains(&w) {
                    continue;
                }
                if path.len() >= 2 && g.adjacent(path[path.len() - 2], w) {
                    continue;
                }
                let chord = |u: usize| if backward { g.directed(u, w) } else { g.directed(w, u) };
                if path.iter().any(|&u| chord(u)) {
                    continue;
                }
                seen[w] = true;
                path.push(w);
                extend(g, path, seen, backward);
                path.pop();
            }
        }

        let mut seen = vec![false; self.len()];
        for &i in idx {
            seen[i] = true;
        }
        for &i in idx {
            extend(self, &mut vec![i], &mut seen, backward);
        }
        seen
    }

    /// Reflexive closure of `idx` under steps `i -> j` where `step(mark(i, j))`.
    fn reach(&self, idx: &[usize], step: impl Fn(Mark) -> bool) -> Vec<bool> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        for &i in idx {
            if !seen[i] {
                seen[i] = true;
                stack.push(i);
            }
        }
        while let Some(i) = stack.pop() {
            for (j, s) in seen.iter_mut().enumerate() {
                if !*s && step(self.mark(i, j)) {
                    *s = true;
                    stack.push(j);
                }
            }
        }
        seen
    }

    /// Writes the graph in the edge-list text format. Isolated nodes are declared
    /// with `node` lines so that parsing the output reproduces the graph.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (i, name) in self.names.iter().enumerate() {
            if self.neighbors_of(i).next().is_none() {
                out.push_str(&format!("node {name}\n"));
            }
        }
        for e in self.edges() {
            out.push_str(&format!("{e}\n"));
        }
        out
    }
}

impl fmt::Display for Pdag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

/// One meaningful line of the edge-list format.
pub(crate) enum Line {
    Node(NodeId),
    Edge(usize, Edge),
}

/// Tokenizes the edge-list format: `A -> B`, `A -- B`, `node A`, `#` comments.
pub(crate) fn parse_lines(text: &str) -> Result<Vec<Line>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |message: String| Error::Parse { line: lineno + 1, message };
        let name = |s: &str| NodeId::new(s).map_err(|e| bad(e.to_string()));
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["node", a] => out.push(Line::Node(name(a)?)),
            [a, op, b] => {
                let kind = match *op {
                    "->" => EdgeKind::Directed,
                    "--" => EdgeKind::Undirected,
                    _ => return Err(bad(format!("unknown edge operator {op:?}"))),
                };
                out.push(Line::Edge(lineno + 1, Edge { a: name(a)?, b: name(b)?, kind }));
            }
            _ => return Err(bad(format!("expected `A -> B`, `A -- B` or `node A`, got {line:?}"))),
        }
    }
    Ok(out)
}

impl FromStr for Pdag {
    type Err = Error;

    fn from_str(text: &str) -> Result<Pdag> {
        let lines = parse_lines(text)?;
        let mut nodes: Vec<NodeId> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for line in &lines {
            let ids: Vec<&NodeId> = match line {
                Line::Node(a) => vec![a],
                Line::Edge(_, e) => vec![&e.a, &e.b],
            };
            for id in ids {
                if seen.insert(id.clone()) {
                    nodes.push(id.clone());
                }
            }
        }
        let mut g = Pdag::with_nodes(nodes);
        for line in &lines {
            if let Line::Edge(lineno, e) = line {
                g.insert_edge(e).map_err(|err| Error::Parse { line: *lineno, message: err.to_string() })?;
            }
        }
        if !g.is_acyclic() {
            return Err(Error::DirectedCycle);
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MPDAG4: &str = "V1 -- X\nY1 -> X\nX -> Y2\nY1 -> Y2\nV1 -- Y1\n";

    #[test]
    fn parses_mixed_edges_in_first_appearance_order() {
        let g = Pdag::parse("V1 -- X\nX -> Y2").unwrap();
        assert_eq!(g.len(), 3);
        let names: Vec<&str> = g.nodes().iter().map(NodeId::as_str).collect();
        assert_eq!(names, ["V1", "X", "Y2"]);
        let kinds: Vec<EdgeKind> = g.edges().iter().map(|e| e.kind).collect();
        assert_eq!(kinds, [EdgeKind::Undirected, EdgeKind::Directed]);
        assert_eq!(g.class(), GraphClass::Pdag);
    }

    #[test]
    fn empty_input_is_empty_graph() {
        let g = Pdag::parse("").unwrap();
        assert!(g.is_empty());
        assert!(Pdag::parse("# just a comment\n\n").unwrap().is_empty());
    }

    #[test]
    fn rejects_duplicate_pairs_self_loops_and_garbage() {
        let err = Pdag::parse("X -> Y\nY -> X").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(matches!(Pdag::parse("A -- A"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(Pdag::parse("A -> B\n\nA => C"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(Pdag::parse("A -> B C"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(Pdag::parse("A-b -> C"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn rejects_directed_cycles() {
        assert_eq!(Pdag::parse("A -> B\nB -> C\nC -> A"), Err(Error::DirectedCycle));
        // Undirected edges do not count towards cycles.
        assert!(Pdag::parse("A -> B\nB -> C\nC -- A").is_ok());
    }

    #[test]
    fn comments_and_isolated_nodes() {
        let g = Pdag::parse("node Z # lonely\nA -> B # edge\n").unwrap();
        assert_eq!(g.len(), 3);
        let round = Pdag::parse(&g.to_edge_list()).unwrap();
        assert_eq!(round, g);
    }

    #[test]
    fn induced_subgraph_drops_removed_endpoints() {
        let g = Pdag::parse(MPDAG4).unwrap();
        let sub = g.induced_subgraph(&node_set(["V1", "Y1", "Y2"])).unwrap();
        let expected = Pdag::parse("V1 -- Y1\nY1 -> Y2").unwrap();
        assert_eq!(sub, expected);
        assert_eq!(g.induced_subgraph(&g.node_set()).unwrap(), g);
        assert!(g.induced_subgraph(&NodeSet::new()).unwrap().is_empty());
        assert!(matches!(g.induced_subgraph(&node_set(["Q"])), Err(Error::UnknownNode(_))));
    }

    #[test]
    fn undirected_subgraph_keeps_only_lines() {
        let g = Pdag::parse(MPDAG4).unwrap();
        let u = g.undirected_subgraph();
        assert_eq!(u.len(), 4);
        assert_eq!(u, Pdag::parse("V1 -- X\nV1 -- Y1\nnode Y2").unwrap());
        let dag = Pdag::parse("A -> B\nB -> C").unwrap();
        assert!(dag.undirected_subgraph().edges().is_empty());
        let full = Pdag::parse("A -- B\nB -- C\nA -- C").unwrap();
        assert_eq!(full.undirected_subgraph(), full);
    }

    #[test]
    fn relatives_follow_set_conventions() {
        let g = Pdag::parse(MPDAG4).unwrap();
        assert_eq!(g.relatives(&node_set(["Y2"]), Relation::Parents).unwrap(), node_set(["X", "Y1"]));
        assert_eq!(g.relatives(&node_set(["X", "Y2"]), Relation::Parents).unwrap(), node_set(["Y1"]));
        assert!(g.relatives(&node_set(["V1"]), Relation::Ancestors).unwrap().contains(&NodeId::new("V1").unwrap()));
        let sub = g.induced_subgraph(&node_set(["V1", "Y1", "Y2"])).unwrap();
        assert_eq!(sub.relatives(&node_set(["Y1", "Y2"]), Relation::Ancestors).unwrap(), node_set(["Y1", "Y2"]));
        assert_eq!(
            g.relatives(&node_set(["V1"]), Relation::PossibleDescendants).unwrap(),
            node_set(["V1", "X", "Y1", "Y2"])
        );
        assert_eq!(g.relatives(&node_set(["Y2"]), Relation::PossibleDescendants).unwrap(), node_set(["Y2"]));
        assert_eq!(g.relatives(&node_set(["X"]), Relation::PossibleAncestors).unwrap(), node_set(["V1", "X", "Y1"]));
        assert!(g.relatives(&node_set(["nope"]), Relation::Parents).is_err());
    }

    #[test]
    fn backward_chords_cut_possible_descendants() {
        let g = Pdag::parse("V0 -- V1\nV0 -- V2\nV0 -- V3\nV3 -> V1\nV2 -- V3").unwrap();
        assert!(crate::meek::is_mpdag(&g));
        assert_eq!(
            g.relatives(&node_set(["V1"]), Relation::PossibleDescendants).unwrap(),
            node_set(["V0", "V1", "V2"])
        );
        assert_eq!(g.relatives(&node_set(["V3"]), Relation::PossibleAncestors).unwrap(), node_set(["V0", "V2", "V3"]));
    }

    #[test]
    fn class_tags_are_validated() {
        let dag = Pdag::parse("A -> B").unwrap();
        assert_eq!(dag.clone().with_class(GraphClass::Dag).unwrap().class(), GraphClass::Dag);
        let und = Pdag::parse("A -- B").unwrap();
        assert!(und.clone().with_class(GraphClass::Dag).is_err());
        assert!(und.clone().with_class(GraphClass::Cpdag).is_ok());
        // A -> B alone is not a CPDAG: the orientation is not compelled.
        assert!(dag.clone().with_class(GraphClass::Cpdag).is_err());
        assert!(dag.with_class(GraphClass::Mpdag).is_ok());
        let rule1 = Pdag::parse("A -> B\nB -- C").unwrap();
        assert!(rule1.with_class(GraphClass::Mpdag).is_err());
    }

    #[test]
    fn node_names_are_validated() {
        assert!(NodeId::new("x_1.a").is_ok());
        assert!(NodeId::new("").is_err());
        assert!(NodeId::new("a b").is_err());
        assert_ne!(NodeId::new("x").unwrap(), NodeId::new("X").unwrap());
    }
}
