//! A workbench for computation with advice on represented spaces: infinite
//! names and monotone prefix machines, a catalog of multivalued problems
//! with finite-precision verifiers, advice schemes and their combinators,
//! executable Weihrauch-reduction witnesses, a Monte-Carlo harness for
//! random advice, and a step-counted complexity model.

pub mod names;
pub mod par;
pub mod rational;

pub use names::{
    pair_names, run_machine, tuple_names, unpair_names, Alphabet, Diverged, Fuel, Name, Prefix,
    PrefixMachine, Symbol,
};
