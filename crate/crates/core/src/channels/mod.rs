//! States, random unitary operations, superoperators and the exact
//! two-qudit twirl.

mod ensemble;
mod state;
mod superop;
mod werner;

pub use ensemble::{apply_ruo, apply_ruo_matrix, factor_collective, lift, EnsembleFile, EnsembleItem, UnitaryEnsemble};
pub(crate) use ensemble::exact_sqrt;
pub use state::DensityMatrix;
pub use superop::{build_superoperator, Superoperator};
pub use werner::{
    asym_rank, flip_operator, hs_distance_to_twirl, sym_asym_projectors, sym_rank, twirl_project,
    twirl_project_matrix, twirl_superoperator, werner_basis, werner_state, WernerParams,
};
