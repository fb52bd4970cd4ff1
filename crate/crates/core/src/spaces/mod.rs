//! Represented spaces: descriptors, open/closed/overt codes, separation
//! witnesses, effective bases and ball separation in the cube.

pub mod balls;
pub mod basis;
pub mod descriptor;
pub mod open;
pub mod separation;

pub use balls::{
    canonical_enumeration, grid_report, separate_by_balls, BallRegion, DyadicBall, DyadicPoint, GridReport,
};
pub use basis::{
    baire_basis, embed_into_opens_of_nat, extend_open, gamma_decode, gamma_encode, EffectiveBasis, FibreOvertRep,
};
pub use descriptor::{Denotation, Point, SpaceDescriptor, SpaceTag};
pub use open::{
    open_member, ClosedSetCode, DiscretenessWitness, HausdorffWitness, HausdorffWitnessSequence, OpenSetCode, OvertCode,
};
pub use separation::{
    check_hausdorff_witness_sequence, henorm_to_normsub, normsub_to_henorm, reg_from_discrete_hausdorff,
    HeNormRealizer, NormSubRealizer, SamplePair, WitnessReport,
};
