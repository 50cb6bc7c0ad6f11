use crate::error::{Error, Result};
use crate::graph::{GraphClass, Mark, Pdag};
use crate::meek;

/// Every DAG represented by the MPDAG `g`: same adjacencies and unshielded
/// colliders, containing all of `g`'s directed edges.
///
/// Branches on one undirected edge at a time and re-closes after each choice,
/// so dead branches are cut early. The worst case is still exponential in the
/// number of undirected edges. The result is sorted by the orientation of
/// `g`'s undirected edges (in [`Pdag::edges`] order, `false` for the listed
/// direction) read as a bit string.
pub fn enumerate_dags(g: &Pdag) -> Result<Vec<Pdag>> {
    if !meek::is_mpdag(g) {
        return Err(Error::InvalidClass("MPDAG", "an orientation rule still applies".into()));
    }
    let mut out = Vec::new();
    branch(g, g.clone(), &mut out);
    let undirected: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .filter(|e| e.kind == crate::graph::EdgeKind::Undirected)
        .map(|e| (g.index_of(&e.a).unwrap(), g.index_of(&e.b).unwrap()))
        .collect();
    let key = |d: &Pdag| -> Vec<bool> { undirected.iter().map(|&(a, b)| d.directed(b, a)).collect() };
    out.sort_by_cached_key(key);
    Ok(out)
}

fn branch(g: &Pdag, cur: Pdag, out: &mut Vec<Pdag>) {
    let n = cur.len();
    let next = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| cur.undirected(i, j));
    let Some((i, j)) = next else {
        if same_colliders(g, &cur) {
            let mut d = cur;
            d.set_class_unchecked(GraphClass::Dag);
            out.push(d);
        }
        return;
    };
    for (a, b) in [(i, j), (j, i)] {
        let mut child = cur.clone();
        child.set_mark(a, b, Mark::Out);
        if meek::apply_rules(&mut child, |c| c[0]).is_ok() {
            branch(g, child, out);
        }
    }
}

/// True when `d` has exactly the unshielded colliders of `g`.
fn same_colliders(g: &Pdag, d: &Pdag) -> bool {
    let n = g.len();
    for c in 0..n {
        for a in 0..n {
            for b in a + 1..n {
                if a == c || b == c || g.adjacent(a, b) || !g.adjacent(a, c) || !g.adjacent(b, c) {
                    continue;
                }
                let in_g = g.directed(a, c) && g.directed(b, c);
                let in_d = d.directed(a, c) && d.directed(b, c);
                if in_g != in_d {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeKind;

    const CPDAG4: &str = "V1 -- X\nY1 -- V1\nY2 -- X\nX -- Y1\nY2 -- Y1\n";
    const MPDAG4: &str = "V1 -- X\nY1 -> X\nX -> Y2\nY1 -> Y2\nV1 -- Y1\n";

    #[test]
    fn counts_members() {
        let all = enumerate_dags(&Pdag::parse(CPDAG4).unwrap()).unwrap();
        assert_eq!(all.len(), 10);
        let some = enumerate_dags(&Pdag::parse(MPDAG4).unwrap()).unwrap();
        assert_eq!(some.len(), 3);
        for d in &some {
            assert!(all.contains(d));
            assert_eq!(d.class(), GraphClass::Dag);
        }
        let dag = Pdag::parse("A -> B\nB -> C").unwrap();
        assert_eq!(enumerate_dags(&dag).unwrap(), vec![dag]);
        assert_eq!(enumerate_dags(&Pdag::parse("A -- B").unwrap()).unwrap().len(), 2);
    }

    #[test]
    fn members_keep_directed_edges_and_are_sorted() {
        let g = Pdag::parse(MPDAG4).unwrap();
        let dags = enumerate_dags(&g).unwrap();
        for d in &dags {
            assert!(d.is_acyclic() && !d.has_undirected_edges());
            for e in g.edges().into_iter().filter(|e| e.kind == EdgeKind::Directed) {
                assert_eq!(d.edge_between(&e.a, &e.b), Some(e));
            }
        }
        assert_eq!(enumerate_dags(&g).unwrap(), dags);
    }
}
