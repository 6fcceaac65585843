//! k-submodular relaxation of functions on `[k]^n`.
//!
//! Decides whether `f : [k]^n -> Q ∪ {+inf}` extends to a k-submodular
//! function on `[0,k]^n`, builds such an extension by greedy elimination,
//! and checks the properties it comes with (half-integrality, maximality
//! for `n = 2`, persistency). The [`vcsp`] module applies the construction
//! constraint by constraint to valued CSP instances.

pub mod cli;
pub mod closure;
pub mod error;
pub mod format;
pub mod labeling;
pub mod oracle;
pub mod relax;
pub mod table;
pub mod value;
pub mod vcsp;

pub use closure::{closure_meet, closure_meet_join, closure_theta, theta_witness, LabelingSet, ThetaEscape};
pub use error::{Error, Result};
pub use format::{parse_ksf, parse_vcsp, print_ksf, print_vcsp, ParseError};
pub use labeling::{decode, encode, join, meet, theta, zero_count, Cube, Labeling, DEFAULT_MAX_CELLS};
pub use oracle::{brute_min, max_on_interior, persistency_check, reference_relax, MinimizationReport};
pub use relax::{
    assert_maximal_binary, default_epsilon, relax, relax_with, scaling_factor, tightness_witnesses, verify_ksubmodular,
    NonExtendable, RelaxOptions, Relaxation, RelaxationOutcome, TightCase, Tightness, Violation,
};
pub use table::{CostTable, DomainKind};
pub use value::{rhs_avg, rhs_general, CostValue};
pub use vcsp::{
    assemble, autarky, autarky_from, gap_d, instance_scaling_factor, relax_instance, AutarkyReport, Constraint,
    RelaxedInstance, VcspInstance,
};
