//! Zero-sum invariants of finite abelian groups.
//!
//! Exact computation of the Davenport constant `D`, the Erdős–Ginzburg–Ziv
//! constant `s` and its squarefree analogue `g` by symmetry-reduced search,
//! verification of Property D and Property D0, and a bounds engine that
//! combines known values, inference rules and exact threshold formulas.

pub mod bounds;
pub mod canon;
pub mod cap;
mod cap_data;
pub mod detect;
mod engine;
pub mod error;
pub mod group;
pub mod property_d;
pub mod search;
pub mod sequence;

pub use bounds::{
    application_threshold, apply_rules, conjecture_42_check, conjecture_43_alpha_range,
    seed_knowledge_base, theorem1_threshold, BigGroup, BoundRecord, KnowledgeBase, Rule,
    Theorem1Hypotheses, Threshold,
};
pub use canon::canonical_form;
pub use cap::{is_cap, max_cap, CapReport};
pub use detect::{
    find_nonempty_zero_sum, find_zero_sum_fixed_length, has_nonempty_zero_sum,
    has_zero_sum_fixed_length,
};
pub use engine::{Budget, Cursor, SearchStats};
pub use error::{Error, Result};
pub use group::{GroupElement, GroupSpec, Homomorphism, PackedGroup};
pub use property_d::{
    d0_compose, verify_d, verify_d0, D0Oracle, D0Outcome, D0Verdict, DirectOracle, PropertyDReport,
    SearchCheckpoint,
};
pub use search::{
    check_prop41_chain, davenport, egz_constant, g_constant, lower_bound_witness,
    ExtremalCertificate, Invariant,
};
pub use sequence::GroupSequence;
