//! Exact computation of associated primes and v-numbers for graded
//! subquotients of weighted polynomial rings along powers of a monomial
//! ideal: the module families `M/IⁿN` and `Iⁿ⁻¹N/IⁿN`, their stabilization,
//! and the constant/linear dichotomy of their local v-numbers.
//!
//! Everything is exact integer arithmetic on exponent vectors; there is no
//! floating point and no Gröbner machinery — monomial ideals admit direct
//! lattice algorithms for sums, products, colons, intersections, saturation
//! and irredundant primary decomposition.

pub mod decompose;
pub mod error;
pub mod ideal;
pub mod input;
pub mod lab;
pub mod modules;
pub mod monomial;
pub mod prime;
pub mod report;
pub mod ring;
pub mod vnumber;

pub use decompose::{
    ass_quotient, boxed_ass_subquotient, boxed_local_witness, irreducible_decomposition,
    irredundant_primary, PrimaryComponent,
};
pub use error::{Error, Result};
pub use ideal::{parse_ideal, MonomialIdeal};
pub use input::{parse_input, render_input};
pub use lab::{
    analyze, detect_stabilization, evaluate_family, explore_q45, fit_tail, random_instance,
    record_at, verify, Analysis, EvalOptions, ExploreReport, FamilyEvaluation, FitEntry, FitKind,
    InstanceParams, InvariantRecord, LinearFit, ModuleEntry, StableEntry, Verdict, VerdictStatus,
    VerifyReport, VERDICT_IDS,
};
pub use modules::{
    FamilyComponent, FamilySpec, Part, PowerPart, SubquotientComponent, SubquotientModule, Val,
};
pub use monomial::{parse_monomial, Monomial};
pub use prime::{parse_prime, render_prime_set, MonomialPrime};
pub use report::{fit_line, render_analysis, render_explore, render_record, render_verify, Format};
pub use ring::Ring;
pub use vnumber::{
    ass_subquotient, field_witness_oracle, global_vnumber, local_vnumber, module_invariants,
    LocalWitness, VNumberResult,
};
