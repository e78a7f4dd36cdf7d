//! Everything derived from one commuting involution pair on one algebra.

use std::sync::{Arc, OnceLock};

use crate::chevalley::{build_chevalley, ChevalleyAlgebra};
use crate::compact::{compact_form, invariant_form, CompactBasis};
use crate::curvature::registry::{ClosedFormPath, ConnectionPath, TripleBracketPath};
use crate::curvature::{casimir_matrix, triple_brackets, BlockGeometry, CasimirMatrix, RicciRegistry, TripleBracketTable};
use crate::error::{Error, Result};
use crate::involution::{check_involution, involution_from_marks, joint_decomposition};
use crate::involution::{DiagonalAutomorphism, GradedDecomposition, InvolutionSpec};
use crate::linalg::Q;
use crate::root_system::{build_root_system, CartanType, FormNormalization, RootSystemData};

pub const STANDARD_THETA: &str = "0001";
pub const STANDARD_TAU: &str = "0010";

pub struct PairModel {
    pub rs: RootSystemData,
    pub alg: ChevalleyAlgebra,
    pub cb: CompactBasis,
    pub theta: DiagonalAutomorphism,
    pub tau: DiagonalAutomorphism,
    pub decomp: GradedDecomposition,
    pub casimir: CasimirMatrix,
    pub brackets_long: TripleBracketTable,
    pub brackets_killing: TripleBracketTable,
    /// Negative Killing form divided by the long-root-2 form.
    pub killing_scale: Q,
    pub geometry: Arc<BlockGeometry>,
}

/// Algebra, involution pair and block decomposition, without curvature data.
pub struct PairDecomposition {
    pub rs: RootSystemData,
    pub alg: ChevalleyAlgebra,
    pub cb: CompactBasis,
    pub theta: DiagonalAutomorphism,
    pub tau: DiagonalAutomorphism,
    pub decomp: GradedDecomposition,
}

impl PairDecomposition {
    pub fn build(t: CartanType, theta: &InvolutionSpec, tau: &InvolutionSpec) -> Result<Self> {
        let rs = build_root_system(t)?;
        let alg = build_chevalley(&rs)?;
        let cb = compact_form(&rs, &alg)?;
        for spec in [theta, tau] {
            if spec.marks.len() != rs.rank() {
                return Err(Error::InvalidInvolution(format!(
                    "{} marks given for rank {}",
                    spec.marks.len(),
                    rs.rank()
                )));
            }
        }
        let theta = involution_from_marks(&rs, theta)?;
        let tau = involution_from_marks(&rs, tau)?;
        for a in [&theta, &tau] {
            if !check_involution(a, &alg) {
                return Err(Error::InvalidInvolution("map is not an involutive automorphism".into()));
            }
        }
        let decomp = joint_decomposition(&theta, &tau, &cb)?;
        Ok(Self { rs, alg, cb, theta, tau, decomp })
    }
}

impl PairModel {
    pub fn build(t: CartanType, theta: &InvolutionSpec, tau: &InvolutionSpec) -> Result<Self> {
        let PairDecomposition { rs, alg, cb, theta, tau, decomp } = PairDecomposition::build(t, theta, tau)?;
        let casimir = casimir_matrix(&decomp, &cb)?;
        let brackets_long = triple_brackets(&decomp, &cb, FormNormalization::LongRoot2)?;
        let killing_scale = invariant_form(&cb, FormNormalization::NegativeKilling)?.scale;
        let brackets_killing = brackets_long.rescaled(killing_scale, FormNormalization::NegativeKilling);
        let geometry = Arc::new(BlockGeometry::new(&cb, &decomp));
        Ok(Self { rs, alg, cb, theta, tau, decomp, casimir, brackets_long, brackets_killing, killing_scale, geometry })
    }

    /// The F4 pair with `alpha_4` and `alpha_3` marked, built once per process.
    pub fn standard() -> Result<&'static PairModel> {
        static MODEL: OnceLock<std::result::Result<PairModel, String>> = OnceLock::new();
        MODEL
            .get_or_init(|| {
                let theta = STANDARD_THETA.parse().map_err(|e: Error| e.to_string())?;
                let tau = STANDARD_TAU.parse().map_err(|e: Error| e.to_string())?;
                PairModel::build(CartanType::F4, &theta, &tau).map_err(|e| e.to_string())
            })
            .as_ref()
            .map_err(|e| Error::Construction(e.clone()))
    }

    pub fn brackets(&self, normalization: FormNormalization) -> &TripleBracketTable {
        match normalization {
            FormNormalization::LongRoot2 => &self.brackets_long,
            FormNormalization::NegativeKilling => &self.brackets_killing,
        }
    }

    /// The three Ricci evaluations, registered as `closed`, `brackets`, `connection`.
    pub fn ricci_registry(&self) -> RicciRegistry {
        let mut reg = RicciRegistry::new("Ricci path");
        reg.register(Box::new(ClosedFormPath::new(self.casimir.clone())));
        reg.register(Box::new(TripleBracketPath::new(self.brackets_killing.clone(), self.killing_scale)));
        reg.register(Box::new(ConnectionPath::new(Arc::clone(&self.geometry))));
        reg
    }
}
