//! Large subsets of the `n × n` integer grid in which every four points
//! determine at least five distinct distances.
//!
//! The construction intersects the grid with a random non-degenerate
//! parabola `(a·x + b·y)² ≡ c·x + d·y + e (mod p)` for a prime
//! `4n < p < 8n`, thins the result at random and deletes the few
//! forbidden quadruples that survive. Alongside it live exact verifiers:
//! integer predicates for the eight forbidden four-point patterns, grid
//! censuses, and brute-force oracles over F_p.

pub mod analysis;
pub mod cli;
pub mod construction;
pub mod error;
pub mod field;
pub mod io;
pub mod patterns;
pub mod rng;

pub use analysis::{
    cardinality_stats, count_solution_quintuples, distinct_distances, ffp_parallelogram_free, fit_growth_exponent,
    grid_distinct_distances, grid_pattern_census, montecarlo_containment, predicted_solution_count,
    reduced_solution_count, CensusReport, GrowthFit,
};
pub use construction::{
    build_set, construct_pipeline, delete_concyclic, delete_forbidden, refine, sample_params, transport_params,
    Construction, ConstructionConfig, ConstructionReport, DeletionMode, ParabolaParams, Ratio,
};
pub use error::{Error, Result};
pub use field::{legendre_symbol, prime_in_range, quadratic_form_root_count, AffineMap, Fp, FpPoint};
pub use patterns::{
    classify, collinear, concyclic, concyclic_quadruples, count_forbidden, distance_multiset, enumerate_forbidden,
    is_additive_parallelogram, is_forbidden, squared_distance, GridPoint, PatternCounts, PatternKind, PatternSet,
    PointSet, Quadruple, ScanMode,
};
