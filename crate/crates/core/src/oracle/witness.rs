use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{NodeId, NodeSet, Pdag};
use crate::paths::{self, Path};

use super::enumerate::enumerate_dags;
use super::gaussian::{Coefficients, GaussianModel};

/// Two linear-Gaussian models on DAGs represented by the same MPDAG that share
/// their covariance matrix yet disagree on `E[y | do(x)]`.
#[derive(Clone, Debug)]
pub struct NonIdWitness {
    /// `X = V0 -- V1 ... Y`, proper and possibly causal.
    pub path: Path,
    /// Orients the path as `X -> V1 -> ... -> Y`.
    pub forward: GaussianModel,
    /// Orients the path as `X <- V1 -> ... -> Y`.
    pub reversed: GaussianModel,
    /// `|E_forward[y | do(X = 1)] - E_reversed[y | do(X = 1)]|`.
    pub delta: f64,
}

pub fn nonid_witness(g: &Pdag, xs: &NodeSet, ys: &NodeSet) -> Result<NonIdWitness> {
    nonid_witness_with(g, xs, ys, 0.5)
}

/// Builds the witness with every path edge weighted `coefficient` and every
/// other edge zero, noise variances chosen so each variable has variance one.
///
/// Candidate paths are the proper possibly causal paths from `X` to `Y` that
/// start with an undirected edge, shortest first; the first one that both
/// orientations can realize within the class is used.
pub fn nonid_witness_with(g: &Pdag, xs: &NodeSet, ys: &NodeSet, coefficient: f64) -> Result<NonIdWitness> {
    if !(coefficient != 0.0 && coefficient.abs() < 1.0) {
        return Err(Error::Precondition(format!("path coefficient {coefficient} must lie in (-1, 1) and be nonzero")));
    }
    let sets = paths::resolve_disjoint(g, &[("X", xs), ("Y", ys)], &["X", "Y"])?;
    let mut candidates = paths::all_amenability_witnesses(g, &sets[0], &sets[1]);
    if candidates.is_empty() {
        return Err(Error::Precondition("no proper possibly causal path starts with an undirected edge".into()));
    }
    candidates.sort_by_key(|p| p.len());
    let dags = enumerate_dags(g)?;
    for p in &candidates {
        let realizes = |d: &Pdag, reversed: bool| {
            p.windows(2).enumerate().all(|(k, w)| {
                if k == 0 && reversed {
                    d.directed(w[1], w[0])
                } else {
                    d.directed(w[0], w[1])
                }
            })
        };
        let (Some(d1), Some(d2)) = (dags.iter().find(|d| realizes(d, false)), dags.iter().find(|d| realizes(d, true)))
        else {
            continue;
        };
        let coeffs = |reversed: bool| -> Coefficients {
            p.windows(2)
                .enumerate()
                .map(|(k, w)| {
                    let (a, b) = if k == 0 && reversed { (w[1], w[0]) } else { (w[0], w[1]) };
                    ((g.name(a).clone(), g.name(b).clone()), coefficient)
                })
                .collect()
        };
        let forward = GaussianModel::unit_variance(d1, &coeffs(false))?;
        let reversed = GaussianModel::unit_variance(d2, &coeffs(true))?;
        let x: BTreeMap<NodeId, f64> = xs.iter().map(|v| (v.clone(), 1.0)).collect();
        let y = g.name(p[p.len() - 1]);
        let delta = (forward.interventional_mean(&x, y)? - reversed.interventional_mean(&x, y)?).abs();
        let path = Path::new(p.iter().map(|&i| g.name(i).clone()).collect())?;
        return Ok(NonIdWitness { path, forward, reversed, delta });
    }
    Err(Error::Precondition("no candidate path is realized in both orientations by the class".into()))
}
