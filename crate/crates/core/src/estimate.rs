//! Plug-in estimation of total effects from linear-Gaussian data by evaluating
//! an identification formula with least-squares regressions.

use std::collections::BTreeMap;
use std::io::Read;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::formula::IdFormula;
use crate::graph::NodeId;

/// A numeric data table with one named column per node.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    columns: Vec<NodeId>,
    rows: DMatrix<f64>,
}

impl Dataset {
    /// Requires distinct column names, finite values, and more rows than columns.
    pub fn new(columns: Vec<NodeId>, rows: DMatrix<f64>) -> Result<Dataset> {
        if rows.ncols() != columns.len() {
            return Err(Error::Data(format!("{} columns named, {} present", columns.len(), rows.ncols())));
        }
        for (i, c) in columns.iter().enumerate() {
            if columns[..i].contains(c) {
                return Err(Error::Data(format!("column {c} appears twice")));
            }
        }
        if rows.nrows() <= columns.len() {
            return Err(Error::Data(format!(
                "{} rows for {} columns; need more rows than columns",
                rows.nrows(),
                columns.len()
            )));
        }
        if rows.iter().any(|v| !v.is_finite()) {
            return Err(Error::Data("non-finite value".into()));
        }
        Ok(Dataset { columns, rows })
    }

    /// Reads comma-separated values with a header row of node names.
    pub fn from_csv<R: Read>(reader: R) -> Result<Dataset> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let header = rdr.headers().map_err(|e| Error::Data(e.to_string()))?.clone();
        let columns = header.iter().map(|h| NodeId::new(h.trim())).collect::<Result<Vec<_>>>()?;
        let mut values = Vec::new();
        let mut n = 0;
        for (line, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Data(e.to_string()))?;
            for cell in record.iter() {
                let v: f64 = cell
                    .trim()
                    .parse()
                    .map_err(|_| Error::Data(format!("row {}: cannot parse {cell:?} as a number", line + 2)))?;
                values.push(v);
            }
            n += 1;
        }
        let rows = DMatrix::from_row_slice(n, columns.len(), &values);
        Dataset::new(columns, rows)
    }

    pub fn columns(&self) -> &[NodeId] {
        &self.columns
    }

    pub fn rows(&self) -> &DMatrix<f64> {
        &self.rows
    }

    fn column(&self, v: &NodeId) -> Result<usize> {
        self.columns.iter().position(|c| c == v).ok_or_else(|| Error::Data(format!("no column for {v}")))
    }
}

/// Least-squares fit of each of `targets` on `regressors` plus an intercept.
/// Returns one coefficient vector per target, intercept first.
fn ols(data: &Dataset, targets: &[usize], regressors: &[usize], label: &str) -> Result<Vec<DVector<f64>>> {
    let n = data.rows.nrows();
    let mut design = DMatrix::<f64>::from_element(n, regressors.len() + 1, 1.0);
    for (k, &c) in regressors.iter().enumerate() {
        design.set_column(k + 1, &data.rows.column(c));
    }
    let gram = design.transpose() * &design;
    let chol = gram.cholesky().ok_or_else(|| Error::SingularDesign(label.to_string()))?;
    Ok(targets.iter().map(|&t| chol.solve(&(design.transpose() * data.rows.column(t)))).collect())
}

/// Gradient of `E[y | do(x)]` with respect to `xs`, estimated by evaluating
/// `f` on the data.
///
/// Every factor's targets are regressed on its conditioners. Walking the
/// factors in order, each target's interventional mean is an affine function
/// of `x`: the fitted intercept plus the fitted slopes applied to the means of
/// the conditioners, which are either intervened values or earlier targets.
pub fn gaussian_effect(f: &IdFormula, data: &Dataset, xs: &[NodeId], y: &NodeId) -> Result<Vec<f64>> {
    if f.response().len() != 1 || !f.response().contains(y) {
        return Err(Error::Precondition(format!("formula response must be exactly {{{y}}}")));
    }
    let given: crate::graph::NodeSet = xs.iter().cloned().collect();
    if given.len() != xs.len() || &given != f.intervened() {
        return Err(Error::Formula("treatment list does not match the formula's interventions".into()));
    }
    // Affine maps: slopes over xs.
    let mut mean: BTreeMap<NodeId, DVector<f64>> = BTreeMap::new();
    for (k, x) in xs.iter().enumerate() {
        let mut e = DVector::zeros(xs.len());
        e[k] = 1.0;
        mean.insert(x.clone(), e);
    }
    for factor in f.factors() {
        let targets: Vec<&NodeId> = factor.targets.iter().collect();
        let conds: Vec<&NodeId> = factor.conditioners.iter().collect();
        let t_idx = targets.iter().map(|v| data.column(v)).collect::<Result<Vec<_>>>()?;
        let c_idx = conds.iter().map(|v| data.column(v)).collect::<Result<Vec<_>>>()?;
        let label = targets.iter().map(|v| v.as_str()).collect::<Vec<_>>().join(",");
        let fits = ols(data, &t_idx, &c_idx, &label)?;
        for (t, beta) in targets.iter().zip(fits) {
            let mut slope = DVector::zeros(xs.len());
            for (k, c) in conds.iter().enumerate() {
                let m = mean.get(*c).ok_or_else(|| Error::Formula(format!("{c} used before it is defined")))?;
                slope += m * beta[k + 1];
            }
            mean.insert((*t).clone(), slope);
        }
    }
    let m = mean.get(y).ok_or_else(|| Error::Formula(format!("{y} is not a target")))?;
    Ok(m.iter().copied().collect())
}
