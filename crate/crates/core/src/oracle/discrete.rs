use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Exp1};

use crate::error::{Error, Result};
use crate::formula::IdFormula;
use crate::graph::{NodeId, NodeSet, Pdag};

/// Hard limit on the number of configurations enumerated by any evaluation.
pub const MAX_CONFIGURATIONS: usize = 1 << 20;

/// Values of some variables, `0..cardinality`.
pub type Assignment = BTreeMap<NodeId, usize>;

/// A probability table over variables sorted by name. Configurations are laid
/// out in mixed radix with the first variable varying fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    vars: Vec<NodeId>,
    card: Vec<usize>,
    probs: Vec<f64>,
}

impl Distribution {
    fn zeros(vars: Vec<NodeId>, card: Vec<usize>) -> Result<Distribution> {
        let size = configurations(&card)?;
        Ok(Distribution { vars, card, probs: vec![0.0; size] })
    }

    pub fn vars(&self) -> &[NodeId] {
        &self.vars
    }

    pub fn cardinalities(&self) -> &[usize] {
        &self.card
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    fn strides(&self) -> Vec<usize> {
        strides(&self.card)
    }

    /// Probability of a full configuration of this table's variables.
    pub fn prob(&self, values: &Assignment) -> Result<f64> {
        let mut idx = 0;
        for ((v, &c), s) in self.vars.iter().zip(&self.card).zip(self.strides()) {
            let x = *values.get(v).ok_or_else(|| Error::UnknownNode(v.clone()))?;
            if x >= c {
                return Err(Error::Precondition(format!("value {x} out of range for {v}")));
            }
            idx += x * s;
        }
        Ok(self.probs[idx])
    }

    /// Sums out every variable not in `keep`.
    pub fn marginal(&self, keep: &NodeSet) -> Result<Distribution> {
        if let Some(v) = keep.iter().find(|v| !self.vars.contains(v)) {
            return Err(Error::UnknownNode(v.clone()));
        }
        let pos: Vec<usize> = keep.iter().map(|v| self.vars.iter().position(|w| w == v).unwrap()).collect();
        let card: Vec<usize> = pos.iter().map(|&p| self.card[p]).collect();
        let mut out = Distribution::zeros(keep.iter().cloned().collect(), card)?;
        let src = self.strides();
        let dst = out.strides();
        for (idx, &p) in self.probs.iter().enumerate() {
            let mut j = 0;
            for (k, &q) in pos.iter().enumerate() {
                j += (idx / src[q]) % self.card[q] * dst[k];
            }
            out.probs[j] += p;
        }
        Ok(out)
    }

    /// Half the L1 distance; both tables must cover the same variables.
    pub fn total_variation(&self, other: &Distribution) -> Result<f64> {
        if self.vars != other.vars || self.card != other.card {
            return Err(Error::Precondition("distributions over different variables".into()));
        }
        Ok(0.5 * self.probs.iter().zip(&other.probs).map(|(a, b)| (a - b).abs()).sum::<f64>())
    }
}

fn strides(card: &[usize]) -> Vec<usize> {
    let mut s = Vec::with_capacity(card.len());
    let mut acc = 1;
    for &c in card {
        s.push(acc);
        acc *= c;
    }
    s
}

fn configurations(card: &[usize]) -> Result<usize> {
    let total: u128 = card.iter().map(|&c| c as u128).product();
    if total > MAX_CONFIGURATIONS as u128 {
        return Err(Error::ConfigurationCap(total, MAX_CONFIGURATIONS));
    }
    Ok(total as usize)
}

/// Steps `values` at `positions` through all configurations, first position
/// fastest. Returns `false` after the last one.
fn advance(values: &mut [usize], positions: &[usize], card: &[usize]) -> bool {
    for &p in positions {
        values[p] += 1;
        if values[p] < card[p] {
            return true;
        }
        values[p] = 0;
    }
    false
}

/// A discrete Bayesian network: one conditional probability table per node of
/// a DAG.
#[derive(Clone, Debug)]
pub struct DiscreteModel {
    dag: Pdag,
    card: Vec<usize>,
    /// Parents of each node, sorted by name.
    parents: Vec<Vec<usize>>,
    /// `cpts[v][config * card[v] + value]`, parent configurations in mixed
    /// radix with the first parent fastest.
    cpts: Vec<Vec<f64>>,
}

impl DiscreteModel {
    fn skeleton(dag: &Pdag, card: Vec<usize>) -> Result<DiscreteModel> {
        if dag.has_undirected_edges() || !dag.is_acyclic() {
            return Err(Error::InvalidClass("DAG", "expected a directed acyclic graph".into()));
        }
        let parents: Vec<Vec<usize>> = (0..dag.len())
            .map(|v| {
                let mut p: Vec<usize> = dag.parents_of(v).collect();
                p.sort_by(|&a, &b| dag.name(a).cmp(dag.name(b)));
                p
            })
            .collect();
        let cpts = (0..dag.len())
            .map(|v| {
                let rows: usize = parents[v].iter().map(|&p| card[p]).product();
                vec![0.0; rows * card[v]]
            })
            .collect();
        Ok(DiscreteModel { dag: dag.clone(), card, parents, cpts })
    }

    /// CPT columns drawn from a symmetric Dirichlet(1) with a ChaCha8 stream
    /// seeded by `seed`.
    pub fn random(dag: &Pdag, cardinalities: &BTreeMap<NodeId, usize>, seed: u64) -> Result<DiscreteModel> {
        let card = dag
            .nodes()
            .iter()
            .map(|v| match cardinalities.get(v) {
                Some(&c) if c >= 2 => Ok(c),
                Some(&c) => Err(Error::Precondition(format!("cardinality of {v} is {c}, need at least 2"))),
                None => Err(Error::Precondition(format!("no cardinality for {v}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut m = DiscreteModel::skeleton(dag, card)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for v in 0..dag.len() {
            let k = m.card[v];
            for column in m.cpts[v].chunks_mut(k) {
                for x in column.iter_mut() {
                    *x = Exp1.sample(&mut rng);
                }
                let s: f64 = column.iter().sum();
                column.iter_mut().for_each(|x| *x /= s);
            }
        }
        Ok(m)
    }

    pub fn random_binary(dag: &Pdag, seed: u64) -> Result<DiscreteModel> {
        let cards = dag.nodes().iter().map(|v| (v.clone(), 2)).collect();
        DiscreteModel::random(dag, &cards, seed)
    }

    /// Refactorizes a joint distribution along `dag`; columns for parent
    /// configurations of probability zero are uniform.
    pub fn from_joint(dag: &Pdag, joint: &Distribution) -> Result<DiscreteModel> {
        if dag.node_set() != joint.vars.iter().cloned().collect::<NodeSet>() {
            return Err(Error::Precondition("joint and DAG cover different nodes".into()));
        }
        let card = dag.nodes().iter().map(|v| joint.card[joint.vars.iter().position(|w| w == v).unwrap()]).collect();
        let mut m = DiscreteModel::skeleton(dag, card)?;
        let card = m.card.clone();
        for v in 0..dag.len() {
            let pa = m.parents[v].clone();
            let mut keep: NodeSet = dag.names_of(pa.iter().copied());
            keep.insert(dag.name(v).clone());
            let fam = joint.marginal(&keep)?;
            let fs = fam.strides();
            let pos = |i: usize| fam.vars.iter().position(|w| w == dag.name(i)).unwrap();
            let k = m.card[v];
            let rows = m.cpts[v].len() / k;
            let mut values = vec![0; dag.len()];
            for row in 0..rows {
                let mut base = 0;
                for &p in &pa {
                    base += values[p] * fs[pos(p)];
                }
                let col: Vec<f64> = (0..k).map(|x| fam.probs[base + x * fs[pos(v)]]).collect();
                let s: f64 = col.iter().sum();
                for (x, c) in col.iter().enumerate() {
                    m.cpts[v][row * k + x] = if s > 0.0 { c / s } else { 1.0 / k as f64 };
                }
                advance(&mut values, &pa, &card);
            }
        }
        Ok(m)
    }

    pub fn dag(&self) -> &Pdag {
        &self.dag
    }

    pub fn cardinality(&self, v: &NodeId) -> Option<usize> {
        self.dag.index_of(v).map(|i| self.card[i])
    }

    /// Parents of `v` in the order used by its table.
    pub fn parents(&self, v: &NodeId) -> Option<Vec<NodeId>> {
        let i = self.dag.index_of(v)?;
        Some(self.parents[i].iter().map(|&p| self.dag.name(p).clone()).collect())
    }

    /// The table of `v`: parent configuration major, value minor.
    pub fn cpt(&self, v: &NodeId) -> Option<&[f64]> {
        self.dag.index_of(v).map(|i| self.cpts[i].as_slice())
    }

    fn row(&self, v: usize, values: &[usize]) -> usize {
        let mut idx = 0;
        let mut stride = 1;
        for &p in &self.parents[v] {
            idx += values[p] * stride;
            stride *= self.card[p];
        }
        idx
    }

    pub fn joint(&self) -> Result<Distribution> {
        self.interventional_joint(&Assignment::new())
    }

    /// `f(v' | do(x))` over every node outside the assignment: the product of
    /// the remaining tables with intervened parents held at their assigned
    /// values.
    pub fn interventional_joint(&self, x: &Assignment) -> Result<Distribution> {
        let n = self.dag.len();
        let mut values = vec![0; n];
        let mut fixed = vec![false; n];
        for (v, &val) in x {
            let i = self.dag.require(v)?;
            if val >= self.card[i] {
                return Err(Error::Precondition(format!("value {val} out of range for {v}")));
            }
            values[i] = val;
            fixed[i] = true;
        }
        let mut free: Vec<usize> = (0..n).filter(|&i| !fixed[i]).collect();
        free.sort_by(|&a, &b| self.dag.name(a).cmp(self.dag.name(b)));
        let mut out = Distribution::zeros(
            free.iter().map(|&i| self.dag.name(i).clone()).collect(),
            free.iter().map(|&i| self.card[i]).collect(),
        )?;
        let mut idx = 0;
        loop {
            let mut p = 1.0;
            for &v in &free {
                p *= self.cpts[v][self.row(v, &values) * self.card[v] + values[v]];
            }
            out.probs[idx] = p;
            idx += 1;
            if !advance(&mut values, &free, &self.card) {
                break;
            }
        }
        Ok(out)
    }
}

/// The truncated factorization evaluated on `m` and marginalized to `Y`.
pub fn gformula_eval(m: &DiscreteModel, x: &Assignment, ys: &NodeSet) -> Result<Distribution> {
    if let Some(y) = ys.iter().find(|y| x.contains_key(*y)) {
        return Err(Error::Overlap(y.clone()));
    }
    m.interventional_joint(x)?.marginal(ys)
}

/// Evaluates `f` with every factor computed from the observational joint of `m`.
pub fn eval_id_formula(f: &IdFormula, m: &DiscreteModel, x: &Assignment) -> Result<Distribution> {
    eval_id_formula_on_joint(f, &m.joint()?, x)
}

/// Where a factor variable takes its value from during evaluation.
enum Source {
    Free(usize),
    Fixed(usize),
}

struct Table {
    dist: Distribution,
    sources: Vec<(usize, Source)>,
}

impl Table {
    fn new(joint: &Distribution, keep: &NodeSet, free: &[NodeId], x: &Assignment) -> Result<Table> {
        let dist = joint.marginal(keep)?;
        let sources = dist
            .vars
            .iter()
            .zip(dist.strides())
            .map(|(v, s)| {
                let src = match free.iter().position(|w| w == v) {
                    Some(k) => Source::Free(k),
                    None => {
                        Source::Fixed(*x.get(v).ok_or_else(|| Error::Precondition(format!("no value given for {v}")))?)
                    }
                };
                Ok((s, src))
            })
            .collect::<Result<_>>()?;
        Ok(Table { dist, sources })
    }

    fn at(&self, values: &[usize]) -> f64 {
        let idx: usize = self
            .sources
            .iter()
            .map(|(s, src)| {
                s * match src {
                    Source::Free(k) => values[*k],
                    Source::Fixed(v) => *v,
                }
            })
            .sum();
        self.dist.probs[idx]
    }
}

pub fn eval_id_formula_on_joint(f: &IdFormula, joint: &Distribution, x: &Assignment) -> Result<Distribution> {
    if let Some(v) = f.intervened().iter().find(|v| !x.contains_key(*v)) {
        return Err(Error::Precondition(format!("no value given for intervened node {v}")));
    }
    let free: Vec<NodeId> = f.response().union(f.integrate_over()).cloned().collect();
    let card_of = |v: &NodeId| {
        joint.vars.iter().position(|w| w == v).map(|p| joint.card[p]).ok_or_else(|| Error::UnknownNode(v.clone()))
    };
    let card: Vec<usize> = free.iter().map(card_of).collect::<Result<_>>()?;
    configurations(&card)?;
    for (v, &val) in x {
        if val >= card_of(v)? {
            return Err(Error::Precondition(format!("value {val} out of range for {v}")));
        }
    }
    let mut tables = Vec::new();
    for factor in f.factors() {
        let all: NodeSet = factor.targets.union(&factor.conditioners).cloned().collect();
        let num = Table::new(joint, &all, &free, x)?;
        let den = Table::new(joint, &factor.conditioners, &free, x)?;
        let label = format!("{}|{}", join(&factor.targets), join(&factor.conditioners));
        tables.push((num, den, label));
    }
    let response: Vec<usize> = f.response().iter().map(|v| free.iter().position(|w| w == v).unwrap()).collect();
    let mut out =
        Distribution::zeros(f.response().iter().cloned().collect(), response.iter().map(|&k| card[k]).collect())?;
    let out_strides = out.strides();
    let positions: Vec<usize> = (0..free.len()).collect();
    let mut values = vec![0; free.len()];
    loop {
        let mut p = 1.0;
        for (num, den, label) in &tables {
            let d = den.at(&values);
            if d <= 0.0 {
                return Err(Error::DegenerateConditioning(label.clone()));
            }
            p *= num.at(&values) / d;
        }
        let j: usize = response.iter().zip(&out_strides).map(|(&k, s)| values[k] * s).sum();
        out.probs[j] += p;
        if !advance(&mut values, &positions, &card) {
            break;
        }
    }
    Ok(out)
}

fn join(s: &NodeSet) -> String {
    s.iter().map(NodeId::as_str).collect::<Vec<_>>().join(",")
}
