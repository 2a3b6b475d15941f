//! Finite rings with involution as explicit operation tables.
//!
//! The crate builds and validates table-defined rings, computes Peirce
//! decompositions relative to symmetric idempotents, enumerates every map
//! satisfying a twisted reverse-derivation identity, and replays the
//! additivity argument for such maps lemma by lemma on concrete instances.
//!
//! All scans are exhaustive and deterministic. Work is spread over the
//! current rayon pool; results never depend on the number of threads.

pub mod conditions;
pub mod constructors;
pub mod involution;
pub mod maps;
pub mod peirce;
pub mod ring;
pub mod search;
pub mod verdict;
pub mod verify;

pub use conditions::{check_m1, check_m2, check_m3, condition_report, is_prime, ConditionReport};
pub use involution::{AntiAutomorphism, InvolutionFamily};
pub use maps::{check_identity, IdentityKind, RingMap};
pub use peirce::{find_idempotents, Component, PeirceFrame, PeirceSplit};
pub use ring::{Elem, FiniteRing, RingError, ValidateOptions};
pub use search::{enumerate_reverse_maps, naive_enumerate, SearchConfig, SearchOutcome};
pub use verdict::Verdict;
pub use verify::{verify_theorem, VerificationReport};
