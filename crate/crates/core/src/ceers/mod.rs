pub mod example35;
pub mod presentation;
pub mod quotient;

pub use example35::{
    check_no_decidable_property, example35_ceer, example35_edge_of, example35_edges, inseparability_probe,
    out_degree_violations, replay_certificate, Edge, Example35Audit, FailureCertificate, SeparationVerdict,
};
pub use presentation::{
    ceer_equal, parse_pair_list, saturate, CeerPresentation, ClosureState, GeneratorSource, MergeEvent, TimedPair,
};
pub use quotient::{
    ceer_discreteness, extract_equality_prefixes, injection_when_decidable, iso_with_quotient,
    quotient_admissibility_decode, surjection_from_prefixes, DecidableInjection, NeighborhoodFilter, PrefixSurjection,
    QuotientIso,
};
