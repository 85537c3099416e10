//! Finite non-deterministic matrices (Nmatrices) as models of
//! multiple-conclusion logics.
//!
//! The crate decides finite entailments and rule soundness, searches for
//! strict homomorphisms and isomorphisms, builds quotients, images,
//! subNmatrices, products and ultraproducts, and compares the logics of two
//! finite Nmatrices over bounded formula universes.
//!
//! ```
//! use nmatrix::{builtin_family, entails, parse_sequent, Family};
//!
//! let mp = builtin_family(Family::MP, 1, 1).unwrap();
//! let s = parse_sequent("p, ->(p,q) |- q", mp.signature()).unwrap();
//! assert!(entails(&mp, &s).unwrap().holds);
//! ```

pub mod bitset;
pub mod cli;
pub mod compare;
pub mod constructions;
pub mod error;
pub mod formula;
pub mod matrix;
pub mod morphisms;
pub mod semantics;

pub use bitset::BitSet;
pub use compare::{
    bounded_equivalent, bounded_leq, distinguishing_sequent, witness_chain, ComparisonReport,
    PairMode, WitnessChain,
};
pub use constructions::{
    enumerate_compatible_partitions, is_compatible, is_subnmatrix, product, quotient,
    restriction, sound_compatible_quotients, ultrafilters, ultraproduct, Partition, Ultrafilter,
};
pub use error::{Error, Result};
pub use formula::{
    apply_substitution, depth, formulas_up_to, parse_formula, parse_formula_list, parse_sequent,
    subformula_closure, Formula, Sequent, Signature, Substitution,
};
pub use matrix::{builtin_family, is_deterministic, validate_nmatrix, Family, Nmatrix, RawNmatrix};
pub use morphisms::{
    find_isomorphism, find_strict_hom, image, is_covering, is_embedding, is_hom, is_strict,
    kernel_partition, HomFlags, HomMap,
};
pub use semantics::{
    check_rule_under_all_substitutions, entails, entails_class, enumerate_assignments,
    realized_patterns, rule_sound, ruleset_sound, Assignment, Constraint, PatternFamily, Verdict,
};

/// Size caps for the bounded (exponential) operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Formulas in a bounded universe.
    pub formulas: usize,
    /// Distinct realized patterns.
    pub patterns: usize,
    /// Partial assignments kept by the pattern search at one step.
    pub states: usize,
    /// Substitution instances of a rule.
    pub substitutions: usize,
    /// Carrier size of a product or ultraproduct.
    pub carrier: usize,
    /// Compatible partitions of one carrier.
    pub partitions: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            formulas: formula::DEFAULT_FORMULA_CAP,
            patterns: 1 << 20,
            states: 1 << 20,
            substitutions: 1 << 16,
            carrier: 4096,
            partitions: 1 << 16,
        }
    }
}
