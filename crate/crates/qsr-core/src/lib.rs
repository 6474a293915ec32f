//! Segment-routing traffic engineering toolkit.
//!
//! The crate models a capacitated directed network in which traffic between a
//! source and a target is steered through an ordered list of segment nodes.
//! Within each segment the flow follows the IGP's equal-cost multipath (ECMP)
//! split, so a routing choice is fully described by the node list and the
//! network's shortest-path structure.
//!
//! Modules, bottom-up:
//!
//! | module     | provides                                                          |
//! |------------|-------------------------------------------------------------------|
//! | [`topology`] | network / request model, file formats, named generators          |
//! | [`intra`]    | per-pair ECMP flow splits and the precomputed split table        |
//! | [`srpath`]   | layered auxiliary graph and the min-cost segment-list kernel     |
//! | [`offline`]  | fully polynomial approximation scheme for max concurrent flow    |
//! | [`online`]   | primal-dual admission control for sequentially arriving requests |
//! | [`simplex`]  | small dense LP solver (Bland's rule)                             |
//! | [`oracle`]   | exhaustive segment-list enumeration + exact LP/ILP baselines     |
//! | [`gen`]      | seeded request/trace generators for experiments                  |

pub mod gen;
pub mod intra;
pub mod offline;
pub mod online;
pub mod oracle;
pub mod simplex;
pub mod srpath;
pub mod topology;

pub use intra::{build_intra_table, compute_ecmp_split, FlowSplit, IntraTable};
pub use offline::{run_fptas, FptasParams, FptasResult};
pub use online::{run_trace, OnlineParams, OnlineResult};
pub use srpath::{apfsc, mincost_sr_path, sr_function, AuxGraph, DualLengths};
pub use topology::{LinkId, Network, NodeId, Request};
