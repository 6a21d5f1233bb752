//! Exact intersection theory on blow-ups of the projective plane, singularity
//! classification of contracted curve configurations, and the log minimal
//! model program step loop on tracked curves.

pub mod bundled;
pub mod dot;
pub mod dual_graph;
pub mod experiments;
pub mod lattice;
pub mod linalg;
pub mod mmp;
pub mod scenario;
pub mod singularities;

pub use dual_graph::{build_dual_graph, graph_shape, is_negative_definite, GraphShape, WeightedDualGraph};
pub use lattice::{CurveClass, LatticeError, PointSpec, SurfaceModel};
pub use singularities::{
    classify, classify_graph, log_discrepancies, minimal_resolution, pullback, total_discrepancy_snc,
    Classification, Discrepancy, LogPullback, QDivisor, SingularityClass, SingularityError, SncConfiguration,
};
pub use mmp::{
    audit_run, contract, run, step_candidates, AuditReport, Candidate, ContractionKind, FiberBase, MmpError, MmpRun,
    MmpState, MmpStep, Outcome, Strategy, Violation,
};
