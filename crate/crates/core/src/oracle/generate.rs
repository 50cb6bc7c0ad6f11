use rand::Rng;

use crate::graph::{EdgeKind, Mark, NodeId, Pdag};
use crate::meek::{self, BackgroundKnowledge};

/// A DAG on nodes `V0..V{n-1}` whose edges follow a random permutation and are
/// each present with probability `edge_prob`.
pub fn random_dag<R: Rng + ?Sized>(rng: &mut R, n: usize, edge_prob: f64) -> Pdag {
    let names: Vec<NodeId> = (0..n).map(|i| NodeId::new(format!("V{i}")).expect("valid name")).collect();
    let mut dag = Pdag::with_nodes(names);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(edge_prob) {
                dag.set_mark(perm[a], perm[b], Mark::Out);
            }
        }
    }
    dag.set_class_unchecked(crate::graph::GraphClass::Dag);
    dag
}

/// The CPDAG of a random DAG, with each undirected edge oriented as in that
/// DAG with probability `knowledge_prob`, then closed.
pub fn random_mpdag<R: Rng + ?Sized>(rng: &mut R, n: usize, edge_prob: f64, knowledge_prob: f64) -> Pdag {
    let dag = random_dag(rng, n, edge_prob);
    let cpdag = meek::cpdag_of(&dag).expect("a DAG has a CPDAG");
    let mut pairs = Vec::new();
    for e in cpdag.edges() {
        if e.kind == EdgeKind::Undirected && rng.random_bool(knowledge_prob) {
            let d = dag.edge_between(&e.a, &e.b).expect("same skeleton");
            pairs.push((d.a, d.b));
        }
    }
    let bk = BackgroundKnowledge::new(pairs).expect("orientations from one DAG are consistent");
    meek::close(&cpdag, &bk).expect("knowledge taken from a member DAG is consistent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::enumerate_dags;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_graphs_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let n = rng.random_range(1..=6);
            let g = random_mpdag(&mut rng, n, 0.5, 0.3);
            assert!(meek::is_mpdag(&g));
            assert!(!enumerate_dags(&g).unwrap().is_empty());
        }
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = random_mpdag(&mut ChaCha8Rng::seed_from_u64(5), 5, 0.5, 0.5);
        let b = random_mpdag(&mut ChaCha8Rng::seed_from_u64(5), 5, 0.5, 0.5);
        assert_eq!(a, b);
    }
}
