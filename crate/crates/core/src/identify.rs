//! Deciding identifiability of `f(y | do(x))` in an MPDAG, building the
//! identification formula, and the generalized adjustment criterion.

use crate::error::{Error, Result};
use crate::formula::{Factor, IdFormula};
use crate::graph::{NodeSet, Pdag};
use crate::meek;
use crate::ordering::pco_by_index;
use crate::paths::{self, Path};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Identification {
    Identifiable(IdFormula),
    /// A proper possibly causal path from `X` to `Y` starting with an
    /// undirected edge.
    NotIdentifiable(Path),
}

impl Identification {
    pub fn formula(&self) -> Option<&IdFormula> {
        match self {
            Identification::Identifiable(f) => Some(f),
            Identification::NotIdentifiable(_) => None,
        }
    }

    pub fn is_identifiable(&self) -> bool {
        matches!(self, Identification::Identifiable(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoAdjustmentReason {
    /// The effect is not identifiable at all.
    NotAmenable,
    /// Identifiable, but no candidate set blocks every non-causal path.
    BlockedPathUnachievable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Adjustment {
    SetFound(NodeSet),
    NoneExists(NoAdjustmentReason),
    /// `Y` is a parent of `X`, so `X` has no effect on `Y`.
    ZeroEffect,
}

/// Largest candidate universe for the exhaustive set search.
pub const MAX_SEARCH_UNIVERSE: usize = 20;

fn require_mpdag(g: &Pdag) -> Result<()> {
    if meek::is_mpdag(g) {
        Ok(())
    } else {
        Err(Error::InvalidClass("MPDAG", "an orientation rule still applies".into()))
    }
}

/// Decides identifiability of `f(y | do(x))`.
///
/// When no possibly causal path leads from `X` to `Y` the result is the
/// simplified `f(y | do(x)) = f(y)`; [`identification_formula`] gives the
/// unsimplified product. An empty `X` yields the observational marginal of `Y`.
pub fn identify(g: &Pdag, xs: &NodeSet, ys: &NodeSet) -> Result<Identification> {
    require_mpdag(g)?;
    let sets = paths::resolve_disjoint(g, &[("X", xs), ("Y", ys)], &["Y"])?;
    let (x, y) = (&sets[0], &sets[1]);
    if !x.is_empty() {
        if let Some(w) = paths::witness_by_index(g, x, y) {
            let nodes = w.iter().map(|&i| g.name(i).clone()).collect();
            return Ok(Identification::NotIdentifiable(Path::new(nodes)?));
        }
        if !paths::possibly_causal_by_index(g, x, y) {
            let f = IdFormula::new(vec![Factor::new(ys.clone(), NodeSet::new())?], xs.clone(), ys.clone())?;
            return Ok(Identification::Identifiable(f));
        }
    }
    identification_formula(g, xs, ys).map(Identification::Identifiable)
}

/// The product over the ordered buckets `B_i` of the ancestors of `Y` outside
/// `X`, of `f(b_i | pa(b_i))`, integrated over those ancestors not in `Y`.
///
/// This does not check amenability; the result is only meaningful when
/// [`identify`] reports the effect identifiable.
pub fn identification_formula(g: &Pdag, xs: &NodeSet, ys: &NodeSet) -> Result<IdFormula> {
    require_mpdag(g)?;
    let sets = paths::resolve_disjoint(g, &[("X", xs), ("Y", ys)], &["Y"])?;
    let (x, y) = (&sets[0], &sets[1]);
    let n = g.len();
    let mut keep = vec![true; n];
    for &i in x {
        keep[i] = false;
    }
    let mut in_a = vec![false; n];
    let mut stack: Vec<usize> = y.clone();
    for &i in y {
        in_a[i] = true;
    }
    while let Some(v) = stack.pop() {
        for p in g.parents_of(v) {
            if keep[p] && !in_a[p] {
                in_a[p] = true;
                stack.push(p);
            }
        }
    }
    let factors = bucket_factors(g, &in_a)?;
    IdFormula::new(factors, xs.clone(), ys.clone())
}

fn bucket_factors(g: &Pdag, in_d: &[bool]) -> Result<Vec<Factor>> {
    pco_by_index(g, in_d)
        .into_iter()
        .map(|b| Factor::new(g.names_of(b.iter().copied()), g.names_where(&g.parents_of_set(&b))))
        .collect()
}

/// `f(v' | do(x))` for `V' = V \ X` as a product over the ordered buckets of
/// `V'`. Requires that no undirected edge joins `X` to the rest of the graph.
/// With empty `X` this is the factorization of the observational density.
pub fn truncated_factorization(g: &Pdag, xs: &NodeSet) -> Result<IdFormula> {
    require_mpdag(g)?;
    let x = g.resolve(xs)?;
    let mut in_rest = vec![true; g.len()];
    for &i in &x {
        in_rest[i] = false;
    }
    let mut x_sorted = x.clone();
    x_sorted.sort_by(|&a, &b| g.name(a).cmp(g.name(b)));
    for &i in &x_sorted {
        let mut nb: Vec<usize> = g.undirected_of(i).filter(|&v| in_rest[v]).collect();
        nb.sort_by(|&a, &b| g.name(a).cmp(g.name(b)));
        if let Some(&v) = nb.first() {
            return Err(Error::NotTruncatable(g.name(i).clone(), g.name(v).clone()));
        }
    }
    let factors = bucket_factors(g, &in_rest)?;
    IdFormula::new(factors, xs.clone(), g.names_where(&in_rest))
}

/// The generalized adjustment criterion: `Z` is an adjustment set for
/// `(X, Y)` in `g` iff the effect is amenable, `Z` avoids the forbidden set,
/// and `Z` blocks every proper definite-status non-causal path from `X` to `Y`.
pub fn check_adjustment(g: &Pdag, xs: &NodeSet, ys: &NodeSet, zs: &NodeSet) -> Result<bool> {
    require_mpdag(g)?;
    let sets = paths::resolve_disjoint(g, &[("X", xs), ("Y", ys), ("Z", zs)], &["X", "Y"])?;
    Ok(adjustment_by_index(g, &sets[0], &sets[1], &sets[2]))
}

fn adjustment_by_index(g: &Pdag, x: &[usize], y: &[usize], z: &[usize]) -> bool {
    if paths::witness_by_index(g, x, y).is_some() {
        return false;
    }
    let forb = paths::forbidden_by_index(g, x, y);
    z.iter().all(|&v| !forb[v]) && paths::blocks_noncausal(g, x, y, z)
}

/// Finds an adjustment set when one exists.
///
/// For a single treatment and outcome the parents of the treatment are an
/// adjustment set whenever any set is. Otherwise subsets of the nodes outside
/// `X`, `Y` and the forbidden set are tried by increasing size, which is
/// exponential; the universe is limited to [`MAX_SEARCH_UNIVERSE`] nodes.
pub fn find_adjustment_set(g: &Pdag, xs: &NodeSet, ys: &NodeSet) -> Result<Adjustment> {
    require_mpdag(g)?;
    let sets = paths::resolve_disjoint(g, &[("X", xs), ("Y", ys)], &["X", "Y"])?;
    let (x, y) = (&sets[0], &sets[1]);
    if x.len() == 1 && y.len() == 1 {
        let pa: Vec<usize> = g.parents_of(x[0]).collect();
        if pa.contains(&y[0]) {
            return Ok(Adjustment::ZeroEffect);
        }
        if paths::witness_by_index(g, x, y).is_some() {
            return Ok(Adjustment::NoneExists(NoAdjustmentReason::NotAmenable));
        }
        return Ok(if adjustment_by_index(g, x, y, &pa) {
            Adjustment::SetFound(g.names_of(pa))
        } else {
            Adjustment::NoneExists(NoAdjustmentReason::BlockedPathUnachievable)
        });
    }
    if paths::witness_by_index(g, x, y).is_some() {
        return Ok(Adjustment::NoneExists(NoAdjustmentReason::NotAmenable));
    }
    let forb = paths::forbidden_by_index(g, x, y);
    let mut universe: Vec<usize> = (0..g.len()).filter(|&v| !forb[v] && !x.contains(&v) && !y.contains(&v)).collect();
    universe.sort_by(|&a, &b| g.name(a).cmp(g.name(b)));
    if universe.len() > MAX_SEARCH_UNIVERSE {
        return Err(Error::Precondition(format!(
            "{} candidate nodes exceed the exhaustive-search limit of {MAX_SEARCH_UNIVERSE}",
            universe.len()
        )));
    }
    for size in 0..=universe.len() {
        let mut found = None;
        for_each_subset(&universe, size, &mut |z| {
            if paths::blocks_noncausal(g, x, y, z) {
                found = Some(z.to_vec());
                true
            } else {
                false
            }
        });
        if let Some(z) = found {
            return Ok(Adjustment::SetFound(g.names_of(z)));
        }
    }
    Ok(Adjustment::NoneExists(NoAdjustmentReason::BlockedPathUnachievable))
}

/// Visits the `size`-subsets of `items` in lexicographic order of positions
/// until `visit` returns `true`.
pub(crate) fn for_each_subset(items: &[usize], size: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(
        items: &[usize],
        start: usize,
        size: usize,
        cur: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if cur.len() == size {
            return visit(cur);
        }
        for i in start..items.len() {
            if items.len() - i < size - cur.len() {
                break;
            }
            cur.push(items[i]);
            let stop = rec(items, i + 1, size, cur, visit);
            cur.pop();
            if stop {
                return true;
            }
        }
        false
    }
    rec(items, 0, size, &mut Vec::with_capacity(size), visit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Style;
    use crate::graph::node_set;

    const MPDAG4: &str = "V1 -- X\nY1 -> X\nX -> Y2\nY1 -> Y2\nV1 -- Y1\n";
    const FIVE: &str = "V3 -> X\nV3 -- V1\nX -> Y\nV1 -- V2\nV2 -> X\nV2 -> Y\nV1 -> X\nV1 -> Y\n";
    const TWO_TREATMENTS: &str = "X1 -> V4\nV4 -> Y\nV4 -> X2\nX2 -> Y\nV2 -> X1\nV1 -> X1\nV3 -> X2\nX1 -> Y\n";

    fn g(text: &str) -> Pdag {
        Pdag::parse(text).unwrap()
    }

    fn text(r: &Identification) -> String {
        r.formula().expect("identifiable").render(Style::Text)
    }

    #[test]
    fn identifies_examples() {
        let r = identify(&g(MPDAG4), &node_set(["X"]), &node_set(["Y1", "Y2"])).unwrap();
        assert_eq!(text(&r), "f(y1,y2|do(x)) = f(y1) f(y2|x,y1)");
        let r = identify(&g(FIVE), &node_set(["X"]), &node_set(["Y"])).unwrap();
        assert_eq!(text(&r), "f(y|do(x)) = ∫ f(v1,v2) f(y|x,v1,v2) d(v1,v2)");
        let r = identify(&g(TWO_TREATMENTS), &node_set(["X1", "X2"]), &node_set(["Y"])).unwrap();
        assert_eq!(text(&r), "f(y|do(x1,x2)) = ∫ f(v4|x1) f(y|x1,x2,v4) d(v4)");
        let r = identify(&g("X1 -- X2\nX2 -> Y"), &node_set(["X1", "X2"]), &node_set(["Y"])).unwrap();
        assert_eq!(text(&r), "f(y|do(x1,x2)) = f(y|x2)");
    }

    #[test]
    fn reports_witness() {
        let r = identify(&g("X -- Y"), &node_set(["X"]), &node_set(["Y"])).unwrap();
        assert_eq!(r, Identification::NotIdentifiable(Path::from_names(&["X", "Y"]).unwrap()));
    }

    #[test]
    fn zero_effect_shortcut() {
        let m = g(MPDAG4);
        let r = identify(&m, &node_set(["Y2"]), &node_set(["X"])).unwrap();
        assert_eq!(text(&r), "f(x|do(y2)) = f(x)");
        let long = identification_formula(&m, &node_set(["Y2"]), &node_set(["X"])).unwrap();
        assert_eq!(long.to_string(), "f(x|do(y2)) = ∫ f(x,y1) d(y1)");
    }

    #[test]
    fn empty_treatment_is_observational() {
        let r = identify(&g("A -> B\nB -> C"), &NodeSet::new(), &node_set(["C"])).unwrap();
        assert_eq!(text(&r), "f(c) = ∫ f(a) f(b|a) f(c|b) d(a,b)");
    }

    #[test]
    fn input_errors() {
        let m = g(MPDAG4);
        assert!(matches!(identify(&m, &node_set(["X"]), &node_set(["X"])), Err(Error::Overlap(_))));
        assert!(matches!(identify(&m, &node_set(["X"]), &NodeSet::new()), Err(Error::EmptySet("Y"))));
        assert!(matches!(identify(&m, &node_set(["Q"]), &node_set(["X"])), Err(Error::UnknownNode(_))));
        assert!(matches!(
            identify(&g("A -> B\nB -- C"), &node_set(["A"]), &node_set(["C"])),
            Err(Error::InvalidClass(..))
        ));
    }

    #[test]
    fn truncated_factorizations() {
        let f = truncated_factorization(&g(FIVE), &node_set(["X"])).unwrap();
        assert_eq!(f.factors().len(), 2);
        assert_eq!(f.to_string(), "f(v1,v2,v3,y|do(x)) = f(v1,v2,v3) f(y|x,v1,v2)");
        assert!(matches!(truncated_factorization(&g(MPDAG4), &node_set(["X"])), Err(Error::NotTruncatable(..))));
        let f = truncated_factorization(&g(MPDAG4), &NodeSet::new()).unwrap();
        assert_eq!(f.to_string(), "f(v1,x,y1,y2) = f(v1,x,y1) f(y2|x,y1)");
    }

    #[test]
    fn adjustment_examples() {
        let d = g(TWO_TREATMENTS);
        assert!(!check_adjustment(&d, &node_set(["X1", "X2"]), &node_set(["Y"]), &NodeSet::new()).unwrap());
        let m = g(MPDAG4);
        for z in [NodeSet::new(), node_set(["V1"])] {
            assert!(!check_adjustment(&m, &node_set(["X"]), &node_set(["Y1", "Y2"]), &z).unwrap());
        }
        assert!(check_adjustment(&g("X -> Y"), &node_set(["X"]), &node_set(["Y"]), &NodeSet::new()).unwrap());
    }

    #[test]
    fn finds_adjustment_sets() {
        assert_eq!(
            find_adjustment_set(&g(FIVE), &node_set(["X"]), &node_set(["Y"])).unwrap(),
            Adjustment::SetFound(node_set(["V1", "V2", "V3"]))
        );
        assert_eq!(
            find_adjustment_set(&g(MPDAG4), &node_set(["X"]), &node_set(["Y1", "Y2"])).unwrap(),
            Adjustment::NoneExists(NoAdjustmentReason::BlockedPathUnachievable)
        );
        assert_eq!(
            find_adjustment_set(&g(TWO_TREATMENTS), &node_set(["X1", "X2"]), &node_set(["Y"])).unwrap(),
            Adjustment::NoneExists(NoAdjustmentReason::BlockedPathUnachievable)
        );
        assert_eq!(
            find_adjustment_set(&g("Y -> X"), &node_set(["X"]), &node_set(["Y"])).unwrap(),
            Adjustment::ZeroEffect
        );
        assert_eq!(
            find_adjustment_set(&g("X -- Y"), &node_set(["X"]), &node_set(["Y"])).unwrap(),
            Adjustment::NoneExists(NoAdjustmentReason::NotAmenable)
        );
    }

    #[test]
    fn subsets_in_order() {
        let mut seen = Vec::new();
        for_each_subset(&[1, 2, 3], 2, &mut |s| {
            seen.push(s.to_vec());
            false
        });
        assert_eq!(seen, [vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut empty = 0;
        for_each_subset(&[1, 2], 0, &mut |_| {
            empty += 1;
            false
        });
        assert_eq!(empty, 1);
    }
}
