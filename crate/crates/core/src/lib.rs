//! Computation and certification of topological-entropy lower bounds for
//! entire maps.
//!
//! The crate is organised bottom-up:
//!
//! - [`function`]: expression trees for entire functions with exact
//!   derivatives, and Newton preimage search ([`newton`]).
//! - [`shift`]: exact entropy of subshifts of finite type and executable
//!   entropy laws; [`estimate`]: a separated-set entropy estimator.
//! - [`winding`] and [`lift`]: argument-principle degrees and analytic
//!   continuation of inverse branches along paths.
//! - [`island`]: numerical detection of simple islands, the island digraph,
//!   two-cycle search and family scans.
//! - [`ifs`]: contracting inverse-branch systems and their address maps.
//! - [`polylike`]: traced polynomial-like restrictions and degree counting.
//! - [`rescale`]: end-to-end certification on the family `f(nz)/n`.
//! - [`certificate`]: hashed, revalidatable entropy certificates.
//! - [`render`]: escape-time rasters.

#![forbid(unsafe_code)]

pub mod analytic;
pub mod certificate;
pub mod estimate;
pub mod function;
pub mod ifs;
pub mod island;
pub mod lift;
pub mod newton;
pub mod polylike;
pub mod render;
pub mod rescale;
pub mod shift;
pub mod winding;

pub use num_complex::Complex64;

/// A point of the complex plane.
pub type ComplexVal = Complex64;

pub use analytic::{AnalyticMap, Disk, EvalError, Jet};
pub use function::{parse_map, eval_jet, EntireMap, Expr, ParseError};
pub use estimate::{separated_entropy_estimate, EntropyEstimate, EstimateError};
pub use certificate::{EntropyCertificate, Provenance, Route};
pub use ifs::{address_point, koebe_constant, verify_conjugacy, BranchSystem, ConjugacyReport, InverseBranch};
pub use island::{
    build_digraph, find_islands, find_two_cycles, scan_family, Digraph, IslandDigraph, IslandWitness, TwoCycleCertificate,
};
pub use lift::{lift_circle, lift_ray, LiftError, LiftOptions};
pub use newton::newton_preimages;
pub use polylike::{certify_polylike, entropy_from_polylike, trace_component, PolyLikeRestriction, PolylikeError, TracedBoundary};
pub use render::{render_escape, EscapeRaster, Window};
pub use rescale::{
    certify, certify_via_islands, certify_via_zeros, count_zeros, entropy_ladder, max_modulus, Budgets, CertificationRequest,
    LadderReport, RescaleError, RescaleFamily, RoutePreference,
};
pub use shift::{entropy_laws_check, sft_entropy, LawsReport, SymbolWord, TransitionMatrix};
pub use winding::{winding_degree, WindingError};
