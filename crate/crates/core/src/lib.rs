//! Exact rational certificates for a family of isometric phenomena on
//! sequence spaces: independent sign functionals on `l_infinity`,
//! Daugavet equations for rank-one operators on `l1`, thickness
//! witnesses for finite nets on the unit sphere, and an equivalent
//! norm built from a disjoint-block embedding together with its type
//! functionals.
//!
//! Everything is computed over arbitrary-precision rationals; a check
//! either certifies its identity exactly or reports a typed error.
//! Randomized suites ([`suite::run_suite`]) re-verify the core
//! identities over seeded corpora and emit replayable reports.

pub mod cert;
pub mod corpus;
pub mod daugavet;
pub mod error;
pub mod rat;
pub mod renorm;
pub mod signs;
pub mod span;
pub mod sparse;
pub mod suite;
pub mod thickness;

pub use cert::{CertReport, Claim, Witness};
pub use corpus::{Corpus, SuiteConfig};
pub use daugavet::{
    daugavet_defect, inf_sum_counterexample, opnorm_id_plus_rank_one, slice_point_cert,
    weakstar_slice_cert, InfSumFunctional, InfSumObstruction, InfSumPoint, RankOneOp,
};
pub use error::{Error, Result};
pub use rat::{format_rat, parse_rat, rat, rat_int, Rat};
pub use renorm::{
    equivalence_scan, lemma41_suite, model_norm, model_norm_parts, p_r, pbar_and_q,
    renorm_type_check, EmbeddingModel, L1Seminorm, Lemma41Report, ModelConfig, ModelNormParts,
    ModelSeminorm, PairingKind, Seminorm,
};
pub use signs::{
    double_norming_witness, eps_orthogonality_check, f_coord, g_sign, isometric_l1_witness,
    pattern_witness, sparse_pattern_witness, DualVector, Sign, SignCombo,
};
pub use span::{dist_to_span, DisjointSpan};
pub use sparse::{norm_l1, SparseVec};
pub use suite::{replay_case, run_suite, SuiteCase, SuiteName, SuiteReport, SuiteSummary};
pub use thickness::{
    net_radius_bruteforce, thickness_witness, type_trajectory, FiniteNet, TrajectorySequence,
    TypeTrajectory,
};
