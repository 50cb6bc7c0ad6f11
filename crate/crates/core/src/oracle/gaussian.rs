use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal};

use crate::error::{Error, Result};
use crate::estimate::Dataset;
use crate::graph::{NodeId, Pdag};

/// Edge coefficients keyed by `(tail, head)`.
pub type Coefficients = BTreeMap<(NodeId, NodeId), f64>;

/// A zero-mean linear structural equation model on a DAG:
/// `V_j = sum_i b_ij V_i + e_j` with independent `e_j ~ N(0, noise_j)`.
#[derive(Clone, Debug)]
pub struct GaussianModel {
    dag: Pdag,
    /// `b[(i, j)]` is the coefficient of `i -> j`, zero off the edges.
    b: DMatrix<f64>,
    noise: Vec<f64>,
}

impl GaussianModel {
    /// Edges missing from `coeffs` get coefficient zero.
    pub fn new(dag: &Pdag, coeffs: &Coefficients, noise_vars: &BTreeMap<NodeId, f64>) -> Result<GaussianModel> {
        let b = coefficient_matrix(dag, coeffs)?;
        let noise = dag
            .nodes()
            .iter()
            .map(|v| match noise_vars.get(v) {
                Some(&w) if w > 0.0 => Ok(w),
                Some(&w) => Err(Error::Precondition(format!("noise variance of {v} is {w}"))),
                None => Err(Error::Precondition(format!("no noise variance for {v}"))),
            })
            .collect::<Result<_>>()?;
        Ok(GaussianModel { dag: dag.clone(), b, noise })
    }

    /// Chooses every noise variance so that each variable has variance one.
    pub fn unit_variance(dag: &Pdag, coeffs: &Coefficients) -> Result<GaussianModel> {
        let b = coefficient_matrix(dag, coeffs)?;
        let n = dag.len();
        let order = dag.topological_order().ok_or(Error::DirectedCycle)?;
        let mut sigma = DMatrix::<f64>::zeros(n, n);
        let mut noise = vec![0.0; n];
        let mut done: Vec<usize> = Vec::with_capacity(n);
        for &j in &order {
            let pa: Vec<usize> = dag.parents_of(j).collect();
            let mut explained = 0.0;
            for &p in &pa {
                for &q in &pa {
                    explained += b[(p, j)] * b[(q, j)] * sigma[(p, q)];
                }
            }
            let w = 1.0 - explained;
            if w <= 0.0 {
                return Err(Error::NotUnitVariance(dag.name(j).clone(), explained));
            }
            noise[j] = w;
            for &k in &done {
                let c: f64 = pa.iter().map(|&p| b[(p, j)] * sigma[(p, k)]).sum();
                sigma[(j, k)] = c;
                sigma[(k, j)] = c;
            }
            sigma[(j, j)] = 1.0;
            done.push(j);
        }
        Ok(GaussianModel { dag: dag.clone(), b, noise })
    }

    pub fn dag(&self) -> &Pdag {
        &self.dag
    }

    pub fn coefficient(&self, tail: &NodeId, head: &NodeId) -> Option<f64> {
        let (i, j) = (self.dag.index_of(tail)?, self.dag.index_of(head)?);
        self.dag.directed(i, j).then(|| self.b[(i, j)])
    }

    pub fn noise_variance(&self, v: &NodeId) -> Option<f64> {
        self.dag.index_of(v).map(|i| self.noise[i])
    }

    /// `(I - B^T)^{-1} diag(noise) (I - B^T)^{-T}`, rows and columns in node order.
    pub fn covariance(&self) -> DMatrix<f64> {
        let t = self.total_effect_matrix(&[]);
        let omega = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.noise.clone()));
        &t * omega * t.transpose()
    }

    /// `(I - B'^T)^{-1}` where `B'` drops the edges into `cut`. Entry `(j, i)` is
    /// the total effect of `i` on `j`.
    fn total_effect_matrix(&self, cut: &[usize]) -> DMatrix<f64> {
        let n = self.dag.len();
        let mut bt = self.b.transpose();
        for &x in cut {
            bt.row_mut(x).fill(0.0);
        }
        let a = DMatrix::<f64>::identity(n, n) - bt;
        // Unit lower triangular in a topological order, hence always invertible.
        a.try_inverse().expect("I - B is invertible for a DAG")
    }

    /// `d E[y | do(x)] / d x_k` for each `x_k` in order.
    pub fn causal_effects(&self, xs: &[NodeId], y: &NodeId) -> Result<Vec<f64>> {
        let x = self.dag.resolve(xs)?;
        let yi = self.dag.require(y)?;
        if let Some(&k) = x.iter().find(|&&k| k == yi) {
            return Err(Error::Overlap(self.dag.name(k).clone()));
        }
        let t = self.total_effect_matrix(&x);
        Ok(x.iter().map(|&k| t[(yi, k)]).collect())
    }

    pub fn interventional_mean(&self, x: &BTreeMap<NodeId, f64>, y: &NodeId) -> Result<f64> {
        let names: Vec<NodeId> = x.keys().cloned().collect();
        let grad = self.causal_effects(&names, y)?;
        Ok(grad.iter().zip(x.values()).map(|(g, v)| g * v).sum())
    }

    /// `n` independent draws, columns in node order.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Dataset> {
        let p = self.dag.len();
        let order = self.dag.topological_order().ok_or(Error::DirectedCycle)?;
        let sd: Vec<f64> = self.noise.iter().map(|w| w.sqrt()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = DMatrix::<f64>::zeros(n, p);
        for r in 0..n {
            for &j in &order {
                let e: f64 = StandardNormal.sample(&mut rng);
                let mut v = sd[j] * e;
                for i in self.dag.parents_of(j) {
                    v += self.b[(i, j)] * rows[(r, i)];
                }
                rows[(r, j)] = v;
            }
        }
        Dataset::new(self.dag.nodes().to_vec(), rows)
    }
}

fn coefficient_matrix(dag: &Pdag, coeffs: &Coefficients) -> Result<DMatrix<f64>> {
    if dag.has_undirected_edges() || !dag.is_acyclic() {
        return Err(Error::InvalidClass("DAG", "expected a directed acyclic graph".into()));
    }
    let n = dag.len();
    let mut b = DMatrix::<f64>::zeros(n, n);
    for ((t, h), &c) in coeffs {
        let (i, j) = (dag.require(t)?, dag.require(h)?);
        if !dag.directed(i, j) {
            return Err(Error::Precondition(format!("{t} -> {h} is not an edge")));
        }
        b[(i, j)] = c;
    }
    Ok(b)
}

/// Covariances of a unit-variance model by Wright's rule: the sum over
/// collider-free paths of the product of their edge coefficients.
pub fn wright_cov(m: &GaussianModel) -> Result<DMatrix<f64>> {
    let cov = m.covariance();
    for i in 0..m.dag.len() {
        if (cov[(i, i)] - 1.0).abs() > 1e-9 {
            return Err(Error::NotUnitVariance(m.dag.name(i).clone(), cov[(i, i)]));
        }
    }
    let n = m.dag.len();
    let mut out = DMatrix::<f64>::identity(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let mut total = 0.0;
            let mut visited = vec![false; n];
            visited[i] = true;
            treks(m, i, j, true, 1.0, &mut visited, &mut total);
            out[(i, j)] = total;
            out[(j, i)] = total;
        }
    }
    Ok(out)
}

/// Extends a collider-free path at `v`. While `up` the path may still move
/// against edges; after its first forward step it only moves forward.
fn treks(m: &GaussianModel, v: usize, target: usize, up: bool, acc: f64, visited: &mut [bool], total: &mut f64) {
    if v == target {
        *total += acc;
        return;
    }
    let mut step = |w: usize, coef: f64, up: bool, visited: &mut [bool]| {
        if !visited[w] {
            visited[w] = true;
            treks(m, w, target, up, acc * coef, visited, total);
            visited[w] = false;
        }
    };
    if up {
        for p in m.dag.parents_of(v).collect::<Vec<_>>() {
            step(p, m.b[(p, v)], true, visited);
        }
    }
    for c in m.dag.children_of(v).collect::<Vec<_>>() {
        step(c, m.b[(v, c)], false, visited);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> NodeId {
        NodeId::new(s).unwrap()
    }

    fn coeffs(pairs: &[(&str, &str, f64)]) -> Coefficients {
        pairs.iter().map(|(a, b, c)| ((id(a), id(b)), *c)).collect()
    }

    #[test]
    fn chain_covariance() {
        let d = Pdag::parse("X -> V\nV -> Y").unwrap();
        let m = GaussianModel::unit_variance(&d, &coeffs(&[("X", "V", 0.5), ("V", "Y", 0.4)])).unwrap();
        let w = wright_cov(&m).unwrap();
        assert!((w[(0, 2)] - 0.2).abs() < 1e-15);
        assert!((&w - m.covariance()).abs().max() < 1e-12);
        for i in 0..3 {
            assert!((w[(i, i)] - 1.0).abs() < 1e-12);
        }
        let d = Pdag::parse("A -> B\nnode C").unwrap();
        let m = GaussianModel::unit_variance(&d, &coeffs(&[("A", "B", 0.3)])).unwrap();
        assert_eq!(wright_cov(&m).unwrap()[(0, 2)], 0.0);
    }

    #[test]
    fn shielded_and_confounded_paths() {
        let d = Pdag::parse("Z -> X\nZ -> Y\nX -> Y").unwrap();
        let m =
            GaussianModel::unit_variance(&d, &coeffs(&[("Z", "X", 0.4), ("Z", "Y", 0.3), ("X", "Y", 0.5)])).unwrap();
        let w = wright_cov(&m).unwrap();
        assert!((&w - m.covariance()).abs().max() < 1e-12);
        // Cov(X, Y) = 0.5 + 0.4 * 0.3
        assert!((w[(1, 2)] - 0.62).abs() < 1e-12);
    }

    #[test]
    fn non_unit_variance_is_rejected() {
        let d = Pdag::parse("A -> B").unwrap();
        let noise = [(id("A"), 2.0), (id("B"), 1.0)].into_iter().collect();
        let m = GaussianModel::new(&d, &coeffs(&[("A", "B", 1.0)]), &noise).unwrap();
        assert!(matches!(wright_cov(&m), Err(Error::NotUnitVariance(..))));
        let too_big = Pdag::parse("A -> C\nB -> C").unwrap();
        assert!(GaussianModel::unit_variance(&too_big, &coeffs(&[("A", "C", 0.8), ("B", "C", 0.8)])).is_err());
        assert!(GaussianModel::unit_variance(&d, &coeffs(&[("B", "A", 0.1)])).is_err());
    }

    #[test]
    fn interventions() {
        let d = Pdag::parse("Z -> X\nZ -> Y\nX -> Y\nX -> M\nM -> Y").unwrap();
        let c = coeffs(&[("Z", "X", 0.4), ("Z", "Y", 0.2), ("X", "Y", 0.3), ("X", "M", 0.2), ("M", "Y", 0.4)]);
        let m = GaussianModel::unit_variance(&d, &c).unwrap();
        let e = m.causal_effects(&[id("X")], &id("Y")).unwrap();
        assert!((e[0] - (0.3 + 0.2 * 0.4)).abs() < 1e-12);
        let x = [(id("X"), 2.0)].into_iter().collect();
        assert!((m.interventional_mean(&x, &id("Y")).unwrap() - 2.0 * 0.38).abs() < 1e-12);
        assert_eq!(m.causal_effects(&[id("Y")], &id("X")).unwrap(), [0.0]);
    }

    #[test]
    fn sampling_matches_covariance() {
        let d = Pdag::parse("A -> B\nB -> C").unwrap();
        let m = GaussianModel::unit_variance(&d, &coeffs(&[("A", "B", 0.6), ("B", "C", -0.5)])).unwrap();
        let data = m.sample(50_000, 1).unwrap();
        let a = m.sample(10, 7).unwrap();
        let b = m.sample(10, 7).unwrap();
        assert_eq!(a.rows(), b.rows());
        let x = data.rows();
        let n = x.nrows() as f64;
        let cov_bc = x.column(1).dot(&x.column(2)) / n;
        assert!((cov_bc + 0.5).abs() < 0.03);
    }
}
