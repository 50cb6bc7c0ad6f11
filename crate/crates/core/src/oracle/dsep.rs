use crate::error::{Error, Result};
use crate::graph::{NodeSet, Pdag};
use crate::paths::resolve_disjoint;

/// d-separation in a DAG by the moral graph of the ancestral set: `X` and `Y`
/// are separated by `Z` iff removing `Z` disconnects them in the moralized
/// subgraph induced by the ancestors of `X`, `Y` and `Z`.
pub fn dag_d_separated(dag: &Pdag, xs: &NodeSet, ys: &NodeSet, zs: &NodeSet) -> Result<bool> {
    if dag.has_undirected_edges() {
        return Err(Error::InvalidClass("DAG", "contains undirected edges".into()));
    }
    let sets = resolve_disjoint(dag, &[("X", xs), ("Y", ys), ("Z", zs)], &["X", "Y"])?;
    let n = dag.len();
    let seeds: Vec<usize> = sets.iter().flatten().copied().collect();
    let keep = dag.ancestors(&seeds);
    let mut adj = vec![vec![false; n]; n];
    for c in (0..n).filter(|&c| keep[c]) {
        let pa: Vec<usize> = dag.parents_of(c).collect();
        for (k, &a) in pa.iter().enumerate() {
            adj[a][c] = true;
            adj[c][a] = true;
            for &b in &pa[k + 1..] {
                adj[a][b] = true;
                adj[b][a] = true;
            }
        }
    }
    let mut blocked = vec![false; n];
    for &z in &sets[2] {
        blocked[z] = true;
    }
    let mut seen = vec![false; n];
    let mut stack = sets[0].clone();
    for &x in &stack {
        seen[x] = true;
    }
    while let Some(v) = stack.pop() {
        for w in 0..n {
            if adj[v][w] && keep[w] && !blocked[w] && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    Ok(!sets[1].iter().any(|&y| seen[y]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::node_set;

    #[test]
    fn textbook_cases() {
        let chain = Pdag::parse("X -> Z\nZ -> Y").unwrap();
        assert!(dag_d_separated(&chain, &node_set(["X"]), &node_set(["Y"]), &node_set(["Z"])).unwrap());
        assert!(!dag_d_separated(&chain, &node_set(["X"]), &node_set(["Y"]), &NodeSet::new()).unwrap());
        let collider = Pdag::parse("X -> C\nY -> C\nC -> D").unwrap();
        assert!(dag_d_separated(&collider, &node_set(["X"]), &node_set(["Y"]), &NodeSet::new()).unwrap());
        assert!(!dag_d_separated(&collider, &node_set(["X"]), &node_set(["Y"]), &node_set(["D"])).unwrap());
    }
}
