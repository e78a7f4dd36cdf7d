//! Named, runtime-selectable Ricci evaluations.

use std::sync::Arc;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::registry::{Registry, Strategy};
use crate::linalg::Q;
use crate::scalar::Scalar;

use super::connection::ricci_connection_path;
use super::{dispatch, ricci_closed_form, ricci_triple_bracket, BlockGeometry, CasimirMatrix};
use super::{MetricParams, RicciComponents, TripleBracketTable};

pub trait RicciPath: Strategy {
    fn ricci(&self, u: &MetricParams) -> Result<RicciComponents>;
}

pub struct ClosedFormPath {
    casimir: CasimirMatrix,
}

impl ClosedFormPath {
    pub fn new(casimir: CasimirMatrix) -> Self {
        Self { casimir }
    }
}

impl Strategy for ClosedFormPath {
    fn name(&self) -> &'static str {
        "closed"
    }

    fn description(&self) -> &'static str {
        "closed form in the block Casimir constants"
    }
}

impl RicciPath for ClosedFormPath {
    fn ricci(&self, u: &MetricParams) -> Result<RicciComponents> {
        ricci_closed_form(u, &self.casimir)
    }
}

/// Triple-bracket formula; `u` is converted to negative-Killing coefficients `y = u / scale`.
pub struct TripleBracketPath {
    table: TripleBracketTable,
    scale: Q,
}

impl TripleBracketPath {
    pub fn new(table: TripleBracketTable, scale: Q) -> Self {
        Self { table, scale }
    }

    fn eval<S: Scalar>(&self, u: &[S; 4]) -> Result<[S; 4]> {
        let y: Vec<S> = u.iter().map(|x| x.clone() / S::from_ratio(self.scale)).collect();
        let r = ricci_triple_bracket(&y, &self.table)?;
        r.try_into().map_err(|_| Error::DimensionMismatch { expected: 4, got: self.table.blocks() })
    }
}

impl Strategy for TripleBracketPath {
    fn name(&self) -> &'static str {
        "brackets"
    }

    fn description(&self) -> &'static str {
        "component formula in the triple brackets [k;ij]"
    }
}

impl RicciPath for TripleBracketPath {
    fn ricci(&self, u: &MetricParams) -> Result<RicciComponents> {
        dispatch(u, |v: &[BigRational; 4]| self.eval(v), |v: &[f64; 4]| self.eval(v))
    }
}

pub struct ConnectionPath {
    geometry: Arc<BlockGeometry>,
}

impl ConnectionPath {
    pub fn new(geometry: Arc<BlockGeometry>) -> Self {
        Self { geometry }
    }
}

impl Strategy for ConnectionPath {
    fn name(&self) -> &'static str {
        "connection"
    }

    fn description(&self) -> &'static str {
        "trace of the curvature tensor of the Levi-Civita connection"
    }
}

impl RicciPath for ConnectionPath {
    fn ricci(&self, u: &MetricParams) -> Result<RicciComponents> {
        ricci_connection_path(u, &self.geometry)
    }
}

pub type RicciRegistry = Registry<dyn RicciPath>;

impl Registry<dyn RicciPath> {
    /// Evaluate every path; also returns the largest componentwise disagreement.
    pub fn evaluate_all(&self, u: &MetricParams) -> Result<(Vec<(&'static str, RicciComponents)>, f64)> {
        let results = self
            .iter()
            .map(|p| p.ricci(u).map(|r| (p.name(), r)))
            .collect::<Result<Vec<_>>>()?;
        let mut disagreement: f64 = 0.0;
        for a in &results {
            for b in &results {
                disagreement = disagreement.max(a.1.max_abs_diff(&b.1));
            }
        }
        Ok((results, disagreement))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PairModel;

    #[test]
    fn default_paths_registered_in_order() {
        let reg = PairModel::standard().unwrap().ricci_registry();
        assert_eq!(reg.names(), vec!["closed", "brackets", "connection"]);
        assert!(reg.get("closed").is_ok());
        assert!(reg.get("spectral").is_err());
    }

    #[test]
    fn all_paths_agree_exactly_on_rational_input() {
        let reg = PairModel::standard().unwrap().ricci_registry();
        let u: MetricParams = "3/5,1,1,1".parse().unwrap();
        let (results, diff) = reg.evaluate_all(&u).unwrap();
        assert_eq!(diff, 0.0);
        for (_, r) in &results {
            assert!(r.all_equal_exactly());
            assert_eq!(r.to_strings()[0], "59/10");
        }
    }

    #[test]
    fn duplicate_registration_keeps_single_entry() {
        let m = PairModel::standard().unwrap();
        let mut reg = RicciRegistry::new("Ricci path");
        reg.register(Box::new(ClosedFormPath::new(m.casimir.clone())));
        reg.register(Box::new(ClosedFormPath::new(m.casimir.clone())));
        assert_eq!(reg.len(), 1);
    }
}
