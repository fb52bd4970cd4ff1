//! The separating example spaces, their realizers and the adversaries that
//! defeat candidate realizers with checkable certificates.

pub mod da;
pub mod finite;
pub mod ha;
pub mod halting;
pub mod nprime;
pub mod oracle;
pub mod pn;
pub mod sa;

pub use da::{
    bundled_candidates, da_diagonalize, da_discreteness, da_name, da_space, DaCertificate, DaPoint, HwitCandidate,
};
pub use finite::{bijection_upgrade, finite_injection, PointWitness};
pub use ha::{ha_hausdorff, ha_medvedev, ha_overt_to_cototal, ha_reference_overt, HaSpace};
pub use halting::{halting_complement_refute, injection_diagonalizer, DiagonalizerFailure, DiagonalizerRun};
pub use nprime::{BbTable, NPrime};
pub use oracle::{Enumeration, OracleSet, StageLog, StageTable};
pub use pn::{pn_name, pn_space, PnSpace};
pub use sa::{dce_to_embedding, delta02_subspace_code, norm_to_dce, sa_iso_when_ce, sa_name, sa_space, sa_witnesses};
