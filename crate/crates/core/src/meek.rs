//! Meek's orientation rules: closing a PDAG plus pairwise background knowledge
//! into an MPDAG, and checking the forbidden induced subgraphs.
//!
//! Rule numbering, with `a -- b` the edge being oriented `a -> b`:
//!
//! 1. `c -> a -- b`, `c` and `b` nonadjacent.
//! 2. `a -> c -> b`.
//! 3. `a -- c -> b`, `a -- d -> b`, `c` and `d` nonadjacent.
//! 4. `a -- d -> c -> b`, `a` adjacent to `c`, `d` and `b` nonadjacent.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{parse_lines, EdgeKind, GraphClass, Line, Mark, NodeId, Pdag};

/// Required orientations `(tail, head)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BackgroundKnowledge {
    required: BTreeSet<(NodeId, NodeId)>,
}

impl BackgroundKnowledge {
    pub fn new<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let required: BTreeSet<_> = pairs.into_iter().collect();
        for (a, b) in &required {
            if a == b {
                return Err(Error::SelfLoop(a.clone()));
            }
            if required.contains(&(b.clone(), a.clone())) {
                return Err(Error::InconsistentKnowledge(format!("both {a} -> {b} and {b} -> {a} required")));
            }
        }
        Ok(BackgroundKnowledge { required })
    }

    /// Parses the edge-list format; only directed lines are allowed.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for line in parse_lines(text)? {
            match line {
                Line::Edge(_, e) if e.kind == EdgeKind::Directed => pairs.push((e.a, e.b)),
                Line::Edge(lineno, _) => {
                    return Err(Error::Parse { line: lineno, message: "background knowledge must be directed".into() })
                }
                Line::Node(_) => {}
            }
        }
        BackgroundKnowledge::new(pairs)
    }

    pub fn pairs(&self) -> impl Iterator<Item = &(NodeId, NodeId)> {
        self.required.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.required.is_empty()
    }
}

/// Orients every background-knowledge pair and applies the four rules to a fixpoint.
pub fn close(g: &Pdag, bk: &BackgroundKnowledge) -> Result<Pdag> {
    if !g.is_acyclic() {
        return Err(Error::DirectedCycle);
    }
    let mut out = g.clone();
    for (a, b) in bk.pairs() {
        let (i, j) = (out.require(a)?, out.require(b)?);
        match out.mark(i, j) {
            Mark::Out => {}
            Mark::Undirected => out.set_mark(i, j, Mark::Out),
            Mark::In => {
                return Err(Error::InconsistentKnowledge(format!("{a} -> {b} contradicts {b} -> {a}")));
            }
            Mark::None => {
                return Err(Error::InconsistentKnowledge(format!("{a} and {b} are not adjacent")));
            }
        }
    }
    apply_rules(&mut out, |cands| cands[0])?;
    out.set_class_unchecked(GraphClass::Mpdag);
    Ok(out)
}

/// True when the graph is acyclic and none of the four rules applies.
pub fn is_mpdag(g: &Pdag) -> bool {
    g.is_acyclic() && first_applicable(g).is_none()
}

/// Closes `g` in place. `pick` chooses which of the currently applicable
/// orientations to perform; the result does not depend on the choice.
pub(crate) fn apply_rules<F>(g: &mut Pdag, mut pick: F) -> Result<()>
where
    F: FnMut(&[(usize, usize)]) -> (usize, usize),
{
    let order = name_order(g);
    loop {
        let cands = applicable(g, &order);
        if cands.is_empty() {
            break;
        }
        let (a, b) = pick(&cands);
        g.set_mark(a, b, Mark::Out);
    }
    if !g.is_acyclic() {
        return Err(Error::InconsistentKnowledge("orientation creates a directed cycle".into()));
    }
    Ok(())
}

/// Ordered pairs sorted by endpoint names.
fn name_order(g: &Pdag) -> Vec<(usize, usize)> {
    let mut idx: Vec<usize> = (0..g.len()).collect();
    idx.sort_by(|&x, &y| g.name(x).cmp(g.name(y)));
    let mut pairs = Vec::new();
    for &a in &idx {
        for &b in &idx {
            if a != b {
                pairs.push((a, b));
            }
        }
    }
    pairs
}

/// Every applicable orientation, ordered by rule index and then by edge names.
fn applicable(g: &Pdag, order: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for rule in [rule1, rule2, rule3, rule4] {
        for &(a, b) in order {
            if g.undirected(a, b) && rule(g, a, b) && !out.contains(&(a, b)) {
                out.push((a, b));
            }
        }
    }
    out
}

fn first_applicable(g: &Pdag) -> Option<(usize, usize)> {
    let n = g.len();
    (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .find(|&(a, b)| g.undirected(a, b) && [rule1, rule2, rule3, rule4].iter().any(|r| r(g, a, b)))
}

fn rule1(g: &Pdag, a: usize, b: usize) -> bool {
    g.parents_of(a).any(|c| c != b && !g.adjacent(c, b))
}

fn rule2(g: &Pdag, a: usize, b: usize) -> bool {
    g.children_of(a).any(|c| g.directed(c, b))
}

fn rule3(g: &Pdag, a: usize, b: usize) -> bool {
    let cs: Vec<usize> = g.undirected_of(a).filter(|&c| c != b && g.directed(c, b)).collect();
    cs.iter().enumerate().any(|(k, &c)| cs[k + 1..].iter().any(|&d| !g.adjacent(c, d)))
}

fn rule4(g: &Pdag, a: usize, b: usize) -> bool {
    g.undirected_of(a)
        .filter(|&d| d != b && !g.adjacent(d, b))
        .any(|d| g.children_of(d).any(|c| c != a && c != b && g.adjacent(a, c) && g.directed(c, b)))
}

/// Some DAG represented by the MPDAG `g`: orient one undirected edge at a time
/// and re-close.
pub fn consistent_extension(g: &Pdag) -> Result<Pdag> {
    let mut cur = g.clone();
    let order = name_order(&cur);
    while let Some(&(a, b)) = order.iter().find(|&&(a, b)| cur.undirected(a, b)) {
        let mut forward = cur.clone();
        forward.set_mark(a, b, Mark::Out);
        cur = match apply_rules(&mut forward, |c| c[0]) {
            Ok(()) => forward,
            Err(_) => {
                let mut backward = cur.clone();
                backward.set_mark(b, a, Mark::Out);
                apply_rules(&mut backward, |c| c[0])?;
                backward
            }
        };
    }
    cur.set_class_unchecked(GraphClass::Dag);
    Ok(cur)
}

/// The CPDAG of a DAG: keep unshielded colliders, undirect the rest, close.
pub fn cpdag_of(dag: &Pdag) -> Result<Pdag> {
    if dag.has_undirected_edges() || !dag.is_acyclic() {
        return Err(Error::InvalidClass("DAG", "expected a directed acyclic graph".into()));
    }
    let n = dag.len();
    let mut keep = vec![false; n * n];
    for c in 0..n {
        let pa: Vec<usize> = dag.parents_of(c).collect();
        for (k, &a) in pa.iter().enumerate() {
            for &b in &pa[k + 1..] {
                if !dag.adjacent(a, b) {
                    keep[a * n + c] = true;
                    keep[b * n + c] = true;
                }
            }
        }
    }
    let mut out = dag.clone();
    for i in 0..n {
        for j in 0..n {
            if dag.directed(i, j) && !keep[i * n + j] {
                out.set_mark(i, j, Mark::Undirected);
            }
        }
    }
    apply_rules(&mut out, |c| c[0])?;
    out.set_class_unchecked(GraphClass::Cpdag);
    Ok(out)
}
