use mpdag_core::meek::{consistent_extension, cpdag_of};
use mpdag_core::oracle::{enumerate_dags, random_mpdag};
use mpdag_core::{
    bucket_decomposition, classify_path, close, d_separated, identify, is_mpdag, node_set, pco, BackgroundKnowledge,
    EdgeKind, IdFormula, NodeId, NodeSet, Path, Pdag, Relation, Style,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn mpdag() -> impl Strategy<Value = Pdag> {
    (any::<u64>(), 1usize..=6, 0.2f64..0.9, 0.0f64..0.6).prop_map(|(seed, n, edge_prob, knowledge_prob)| {
        random_mpdag(&mut ChaCha8Rng::seed_from_u64(seed), n, edge_prob, knowledge_prob)
    })
}

fn adjacent(g: &Pdag, a: &NodeId, b: &NodeId) -> bool {
    g.edge_between(a, b).is_some()
}

/// Endpoints of every simple path out of `start` that is possibly causal by
/// the literal definition, checked one path at a time.
fn literal_possible_descendants(g: &Pdag, start: &NodeId) -> NodeSet {
    fn walk(g: &Pdag, path: &mut Vec<NodeId>, out: &mut NodeSet) {
        if path.len() > 1 {
            let p = Path::new(path.clone()).unwrap();
            if !classify_path(g, &p, &NodeSet::new()).unwrap().possibly_causal {
                return;
            }
        }
        out.insert(path.last().unwrap().clone());
        for next in g.nodes() {
            if !path.contains(next) && adjacent(g, path.last().unwrap(), next) {
                path.push(next.clone());
                walk(g, path, out);
                path.pop();
            }
        }
    }
    let mut out = NodeSet::new();
    walk(g, &mut vec![start.clone()], &mut out);
    out
}

fn pick(g: &Pdag, mask: u32) -> NodeSet {
    g.nodes().iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| v.clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closure_is_idempotent(g in mpdag()) {
        prop_assert!(is_mpdag(&g));
        prop_assert_eq!(close(&g, &BackgroundKnowledge::default()).unwrap(), g.clone());
        let text = g.to_edge_list();
        prop_assert_eq!(Pdag::parse(&text).unwrap(), g);
    }

    #[test]
    fn relatives_nest(g in mpdag(), mask in any::<u32>()) {
        let xs = pick(&g, mask);
        let parents = g.relatives(&xs, Relation::Parents).unwrap();
        let anc = g.relatives(&xs, Relation::Ancestors).unwrap();
        let desc = g.relatives(&xs, Relation::Descendants).unwrap();
        let panc = g.relatives(&xs, Relation::PossibleAncestors).unwrap();
        let pdesc = g.relatives(&xs, Relation::PossibleDescendants).unwrap();
        prop_assert!(parents.is_disjoint(&xs));
        prop_assert!(parents.is_subset(&anc));
        prop_assert!(xs.is_subset(&anc) && xs.is_subset(&desc));
        prop_assert!(anc.is_subset(&panc));
        prop_assert!(desc.is_subset(&pdesc));
    }

    #[test]
    fn possible_descendants_match_literal_paths(g in mpdag()) {
        for v in g.nodes() {
            let fast = g.relatives(&node_set([v.as_str()]), Relation::PossibleDescendants).unwrap();
            prop_assert_eq!(fast, literal_possible_descendants(&g, v), "from {} in\n{}", v, g);
        }
    }

    #[test]
    fn pco_partitions_into_forward_ordered_buckets(g in mpdag(), mask in any::<u32>()) {
        let d = pick(&g, mask);
        let order = pco(&g, &d).unwrap();
        let mut decomposition = bucket_decomposition(&g, &d).unwrap();
        let mut buckets = order.buckets().to_vec();
        decomposition.sort();
        buckets.sort();
        prop_assert_eq!(&buckets, &decomposition);
        let flat: NodeSet = buckets.iter().flatten().cloned().collect();
        prop_assert_eq!(flat.len(), buckets.iter().map(|b| b.len()).sum::<usize>());
        prop_assert_eq!(flat, d);
        let rank = |v: &NodeId| order.iter().position(|b| b.contains(v));
        for e in g.edges() {
            if let (Some(i), Some(j)) = (rank(&e.a), rank(&e.b)) {
                match e.kind {
                    EdgeKind::Undirected => prop_assert_eq!(i, j),
                    EdgeKind::Directed => prop_assert!(i <= j, "{} against the order", e),
                }
            }
        }
    }

    #[test]
    fn members_share_one_cpdag(g in mpdag()) {
        let dags = enumerate_dags(&g).unwrap();
        prop_assert!(dags.contains(&consistent_extension(&g).unwrap()));
        let first = cpdag_of(&dags[0]).unwrap();
        for d in &dags[1..] {
            prop_assert_eq!(&cpdag_of(d).unwrap(), &first);
        }
    }

    #[test]
    fn d_separation_is_symmetric(g in mpdag(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let xs = pick(&g, a);
        let ys: NodeSet = pick(&g, b).difference(&xs).cloned().collect();
        let zs: NodeSet = pick(&g, c).difference(&xs).filter(|v| !ys.contains(*v)).cloned().collect();
        if xs.is_empty() || ys.is_empty() {
            return Ok(());
        }
        prop_assert_eq!(d_separated(&g, &xs, &ys, &zs).unwrap(), d_separated(&g, &ys, &xs, &zs).unwrap());
    }

    #[test]
    fn formulas_survive_json(g in mpdag(), a in any::<u32>(), b in any::<u32>()) {
        let xs = pick(&g, a);
        let ys: NodeSet = pick(&g, b).difference(&xs).cloned().collect();
        if ys.is_empty() {
            return Ok(());
        }
        if let Some(f) = identify(&g, &xs, &ys).unwrap().formula() {
            let back = IdFormula::from_json(&f.to_json()).unwrap();
            prop_assert!(back.structurally_equal(f));
            prop_assert_eq!(back.render(Style::Text), f.render(Style::Text));
            prop_assert_eq!(back.render(Style::Latex), f.render(Style::Latex));
        }
    }
}
