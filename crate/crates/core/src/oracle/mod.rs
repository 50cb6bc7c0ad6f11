//! Brute-force checks: the DAGs an MPDAG represents, exact discrete
//! interventional distributions, linear-Gaussian covariances, and
//! non-identifiability witnesses.

mod discrete;
mod dsep;
mod enumerate;
mod gaussian;
mod generate;
mod witness;

pub use discrete::{
    eval_id_formula, eval_id_formula_on_joint, gformula_eval, Assignment, DiscreteModel, Distribution,
    MAX_CONFIGURATIONS,
};
pub use dsep::dag_d_separated;
pub use enumerate::enumerate_dags;
pub use gaussian::{wright_cov, Coefficients, GaussianModel};
pub use generate::{random_dag, random_mpdag};
pub use witness::{nonid_witness, nonid_witness_with, NonIdWitness};
