//! Buckets and the partial causal ordering of an MPDAG.
//!
//! A bucket in `D` is a maximal subset of `D` whose members are pairwise joined
//! by undirected paths in the whole graph. The paths may leave `D`, so the
//! buckets in `D` are the components of the undirected subgraph intersected
//! with `D`.

use crate::error::{Error, Result};
use crate::graph::{NodeSet, Pdag};
use crate::meek;

/// Buckets in the order produced by [`pco`]; every edge between two buckets
/// points from the earlier one to the later one.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrderedBuckets {
    buckets: Vec<NodeSet>,
}

impl OrderedBuckets {
    pub fn buckets(&self) -> &[NodeSet] {
        &self.buckets
    }

    pub fn len(&self) -> usize {
        self.buckets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, NodeSet> {
        self.buckets.iter()
    }

    pub fn into_vec(self) -> Vec<NodeSet> {
        self.buckets
    }
}

impl<'a> IntoIterator for &'a OrderedBuckets {
    type Item = &'a NodeSet;
    type IntoIter = std::slice::Iter<'a, NodeSet>;
    fn into_iter(self) -> Self::IntoIter {
        self.buckets.iter()
    }
}

/// Component label of every node in the undirected subgraph.
fn undirected_components(g: &Pdag) -> Vec<usize> {
    let n = g.len();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for w in g.undirected_of(v) {
                if label[w] == usize::MAX {
                    label[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    label
}

/// The bucket decomposition of `D`, sorted by each bucket's smallest name.
pub fn bucket_decomposition(g: &Pdag, d: &NodeSet) -> Result<Vec<NodeSet>> {
    let idx = g.resolve(d)?;
    let label = undirected_components(g);
    let mut groups: std::collections::BTreeMap<usize, NodeSet> = Default::default();
    for i in idx {
        groups.entry(label[i]).or_default().insert(g.name(i).clone());
    }
    let mut out: Vec<NodeSet> = groups.into_values().collect();
    out.sort();
    Ok(out)
}

/// Orders the bucket decomposition of `D` so that all edges between buckets
/// point forwards.
///
/// Components of the undirected subgraph are peeled off from the sink end:
/// a component is removable once every edge to the remaining components points
/// into it. When several are removable, the one whose smallest name is largest
/// goes first, which fixes the output order.
pub fn pco(g: &Pdag, d: &NodeSet) -> Result<OrderedBuckets> {
    if !meek::is_mpdag(g) {
        return Err(Error::InvalidClass("MPDAG", "an orientation rule still applies".into()));
    }
    let idx = g.resolve(d)?;
    let mut in_d = vec![false; g.len()];
    for i in idx {
        in_d[i] = true;
    }
    let buckets = pco_by_index(g, &in_d).into_iter().map(|b| g.names_of(b)).collect();
    Ok(OrderedBuckets { buckets })
}

/// Index form of [`pco`]; assumes `g` is an MPDAG.
pub(crate) fn pco_by_index(g: &Pdag, in_d: &[bool]) -> Vec<Vec<usize>> {
    let n = g.len();
    let label = undirected_components(g);
    let count = label.iter().map(|&l| l + 1).max().unwrap_or(0);
    let mut comps: Vec<Vec<usize>> = vec![Vec::new(); count];
    for v in 0..n {
        comps[label[v]].push(v);
    }
    let smallest: Vec<&str> = comps.iter().map(|c| c.iter().map(|&v| g.name(v).as_str()).min().unwrap_or("")).collect();

    let mut remaining: Vec<bool> = vec![true; count];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for _ in 0..count {
        let removable = (0..count).filter(|&c| remaining[c]).filter(|&c| {
            comps[c].iter().all(|&v| {
                (0..n).all(|w| !remaining[label[w]] || label[w] == c || !g.adjacent(v, w) || g.directed(w, v))
            })
        });
        let Some(c) = removable.max_by(|&a, &b| smallest[a].cmp(smallest[b])) else {
            // Unreachable on an MPDAG: the component graph is acyclic.
            break;
        };
        remaining[c] = false;
        let mut bucket: Vec<usize> = comps[c].iter().copied().filter(|&v| in_d[v]).collect();
        if !bucket.is_empty() {
            bucket.sort_by(|&a, &b| g.name(a).cmp(g.name(b)));
            out.push(bucket);
        }
    }
    out.reverse();
    out
}
