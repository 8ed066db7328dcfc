//! Degree of commutativity and conjugacy ratio of finitely generated
//! groups under sequences of finitely supported probability measures
//! (uniform-on-ball sequences and symmetric lazy random walks), with
//! exact structural verification suites on a catalog of finite groups.
//!
//! Built-in group families: finite multiplication tables, Z^d, the
//! discrete Heisenberg group, free groups, the infinite dihedral group,
//! and direct products. Arithmetic is exact rational wherever feasible.

pub mod conj;
pub mod coset;
pub mod dc;
pub mod error;
pub mod finite;
pub mod group;
pub mod measure;
pub mod report;
pub mod scalar;
pub mod subgroup;

pub use conj::{conj_canonical, cr_lower_bound, cr_sequence, ConjClassId, CrReport};
pub use coset::{
    coset_mass, distinct_coset_reps, index_measurement_curve, mixing_bound, schreier_cosets,
    verify_uniform_measurement, CosetTable, MixingParams, SubgroupIndex,
};
pub use dc::{
    dc_central_formula, dc_montecarlo, dc_of_measure, dc_sequence, gustafson_upper_bound,
    mass_of_small_centralizers, neumann_lower_bound, Caps, DcPoint, DcReport, McEstimate,
};
pub use error::{Error, ResourceError, Result};
pub use finite::{
    center, centralizer, commutator_subgroup, conj_classes, dc_class_formula,
    neumann_decompose, subgroup_closure, verify_center_bound, verify_gustafson, verify_nvl,
    ConjDecomp, NeumannDecomposition, Verdict,
};
pub use group::{
    ball, build_catalog, growth_ratio, Element, Family, FiniteTable, GenSet, GroupSpec,
};
pub use measure::{Measure, MeasureSeqSpec, WeightMode};
pub use scalar::{parse_rational, Scalar};
pub use subgroup::SubgroupOracle;
