//! Infinite names, finite prefixes and the monotone prefix-machine
//! abstraction.
//!
//! A [`Name`] is an infinite sequence of symbols over a countable alphabet,
//! always finitely described: either an eventually-periodic literal, the
//! output of a [`PrefixMachine`] on another name, or an interleaving of
//! finitely many names. Machines map finite input prefixes to finite output
//! prefixes, monotonically, and carry an explicit step counter; they are the
//! realizer representation used by every module above this one.
//!
//! Step accounting is fixed here once and for all: one step is one input
//! symbol read, one output symbol emitted, or one internal tick declared by
//! the machine.

mod combinators;
mod exec;
mod machine;

pub use combinators::*;
pub use exec::{
    apply_to_prefix, run_machine, run_machine_with_stats, Execution, Fuel, NameStream, RunStats,
};
pub use machine::{
    Action, PrefixMachine, Process, Program, RoundFn, RoundOutcome, RoundProcess,
};

use std::fmt;
use std::sync::Arc;

/// A symbol of a name; alphabets are subsets of the naturals.
pub type Symbol = u64;

/// The ambient alphabet of a name or machine tape.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Alphabet {
    /// {0, 1}
    Binary,
    /// all non-negative integers
    Natural,
    /// {0, .., k-1}, k >= 1
    Finite(u64),
}

impl Alphabet {
    pub fn contains(&self, s: Symbol) -> bool {
        match self {
            Alphabet::Binary => s < 2,
            Alphabet::Natural => true,
            Alphabet::Finite(k) => s < *k,
        }
    }

    /// Whether every symbol of `other` is a symbol of `self`.
    pub fn subsumes(&self, other: &Alphabet) -> bool {
        match (self, other) {
            (Alphabet::Natural, _) => true,
            (Alphabet::Binary, Alphabet::Binary) => true,
            (Alphabet::Binary, Alphabet::Finite(k)) => *k <= 2,
            (Alphabet::Finite(k), Alphabet::Binary) => *k >= 2,
            (Alphabet::Finite(k), Alphabet::Finite(j)) => k >= j,
            _ => false,
        }
    }

    /// Least alphabet covering both.
    pub fn join(&self, other: &Alphabet) -> Alphabet {
        match (self, other) {
            (Alphabet::Binary, Alphabet::Binary) => Alphabet::Binary,
            (Alphabet::Finite(k), Alphabet::Finite(j)) => Alphabet::Finite(*k.max(j)),
            (Alphabet::Finite(k), Alphabet::Binary) | (Alphabet::Binary, Alphabet::Finite(k)) => {
                Alphabet::Finite((*k).max(2))
            }
            _ => Alphabet::Natural,
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::Binary => write!(f, "bin"),
            Alphabet::Natural => write!(f, "nat"),
            Alphabet::Finite(k) => write!(f, "fin{k}"),
        }
    }
}

/// A finite initial segment of a name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prefix {
    alphabet: Alphabet,
    symbols: Vec<Symbol>,
}

impl Prefix {
    pub fn new(alphabet: Alphabet, symbols: Vec<Symbol>) -> Self {
        debug_assert!(symbols.iter().all(|&s| alphabet.contains(s)));
        Prefix { alphabet, symbols }
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Prefix { alphabet, symbols: Vec::new() }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn get(&self, i: usize) -> Option<Symbol> {
        self.symbols.get(i).copied()
    }

    /// Prefix order on finite words.
    pub fn is_prefix_of(&self, other: &Prefix) -> bool {
        other.symbols.len() >= self.symbols.len()
            && other.symbols[..self.symbols.len()] == self.symbols[..]
    }

    pub fn truncated(&self, len: usize) -> Prefix {
        Prefix {
            alphabet: self.alphabet,
            symbols: self.symbols[..len.min(self.symbols.len())].to_vec(),
        }
    }
}

impl fmt::Display for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Clone)]
enum NameSource {
    EventuallyPeriodic { prefix: Vec<Symbol>, period: Vec<Symbol> },
    Generated { machine: PrefixMachine, input: Name },
    Interleaved { parts: Vec<Name> },
}

/// An infinite sequence of symbols, finitely described.
#[derive(Clone)]
pub struct Name {
    alphabet: Alphabet,
    source: Arc<NameSource>,
}

impl Name {
    /// Name with the given finite prefix followed by the period repeated
    /// forever. The period must be non-empty.
    pub fn eventually_periodic(
        alphabet: Alphabet,
        prefix: Vec<Symbol>,
        period: Vec<Symbol>,
    ) -> Self {
        assert!(!period.is_empty(), "period must be non-empty");
        debug_assert!(prefix.iter().chain(period.iter()).all(|&s| alphabet.contains(s)));
        Name {
            alphabet,
            source: Arc::new(NameSource::EventuallyPeriodic { prefix, period }),
        }
    }

    /// The constant name s, s, s, ...
    pub fn constant(alphabet: Alphabet, s: Symbol) -> Self {
        Name::eventually_periodic(alphabet, vec![], vec![s])
    }

    pub fn zeros(alphabet: Alphabet) -> Self {
        Name::constant(alphabet, 0)
    }

    /// The output of `machine` run on `input`.
    pub fn generated(machine: PrefixMachine, input: Name) -> Self {
        Name {
            alphabet: machine.output_alphabet(),
            source: Arc::new(NameSource::Generated { machine, input }),
        }
    }

    /// Flat k-ary interleaving: symbol(i) = parts[i mod k](i div k).
    pub fn interleaved(parts: Vec<Name>) -> Self {
        assert!(!parts.is_empty());
        let alphabet = parts
            .iter()
            .skip(1)
            .fold(parts[0].alphabet, |a, p| a.join(&p.alphabet));
        Name { alphabet, source: Arc::new(NameSource::Interleaved { parts }) }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn source(&self) -> &NameSource {
        &self.source
    }

    /// The literal description, if this name is an eventually-periodic
    /// literal: (prefix, period).
    pub fn as_literal(&self) -> Option<(&[Symbol], &[Symbol])> {
        match self.source.as_ref() {
            NameSource::EventuallyPeriodic { prefix, period } => Some((prefix, period)),
            _ => None,
        }
    }

    /// The component names, if this name is a structural interleaving.
    pub fn as_interleaved(&self) -> Option<&[Name]> {
        match self.source.as_ref() {
            NameSource::Interleaved { parts } => Some(parts),
            _ => None,
        }
    }

    /// The generating machine and its input, for generated names.
    pub fn as_generated(&self) -> Option<(&PrefixMachine, &Name)> {
        match self.source.as_ref() {
            NameSource::Generated { machine, input } => Some((machine, input)),
            _ => None,
        }
    }

    /// Materialize the first `len` symbols, spending fuel on generated parts.
    pub fn prefix(&self, len: usize, fuel: &mut Fuel) -> Result<Prefix, Diverged> {
        let mut stream = NameStream::new(self.clone());
        stream.extend_to(len, fuel)?;
        Ok(Prefix::new(self.alphabet, (0..len).map(|i| stream.get(i)).collect()))
    }

    /// Convenience wrapper with a fresh fuel budget.
    pub fn prefix_with_budget(&self, len: usize, budget: u64) -> Result<Prefix, Diverged> {
        self.prefix(len, &mut Fuel::new(budget))
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.source.as_ref() {
            NameSource::EventuallyPeriodic { prefix, period } => {
                write!(f, "Name[{}; {:?}({:?})^w]", self.alphabet, prefix, period)
            }
            NameSource::Generated { machine, input } => {
                write!(f, "Name[{} <- {:?}]", machine.label(), input)
            }
            NameSource::Interleaved { parts } => write!(f, "Name[interleave x{}]", parts.len()),
        }
    }
}

/// Pair two names by strict interleaving: result(2i) = p(i), result(2i+1) = q(i).
pub fn pair_names(p: &Name, q: &Name) -> Name {
    Name::interleaved(vec![p.clone(), q.clone()])
}

/// Interleave k names; inverse of the per-component projections.
pub fn tuple_names(parts: Vec<Name>) -> Name {
    Name::interleaved(parts)
}

/// Structural inverse of [`pair_names`]. For non-structural names the
/// components are produced by projection machines.
pub fn unpair_names(p: &Name) -> (Name, Name) {
    if let Some(parts) = p.as_interleaved() {
        if parts.len() == 2 {
            return (parts[0].clone(), parts[1].clone());
        }
    }
    (
        Name::generated(project(0, 2, p.alphabet), p.clone()),
        Name::generated(project(1, 2, p.alphabet), p.clone()),
    )
}

/// The error signalled when a run exhausts its step budget. Insufficient
/// fuel and an input outside the machine's domain are indistinguishable by
/// design.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Diverged;

impl fmt::Display for Diverged {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "computation exhausted its step budget or left the machine's domain")
    }
}

impl std::error::Error for Diverged {}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(sym: &[Symbol], period: &[Symbol]) -> Name {
        Name::eventually_periodic(Alphabet::Binary, sym.to_vec(), period.to_vec())
    }

    #[test]
    fn pairing_interleaves() {
        // p = 0^w, q = 1^w -> (0,1,0,1,...)
        let p = Name::zeros(Alphabet::Binary);
        let q = Name::constant(Alphabet::Binary, 1);
        let paired = pair_names(&p, &q);
        let got = paired.prefix_with_budget(8, 1_000).unwrap();
        assert_eq!(got.symbols(), &[0, 1, 0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn pairing_equal_zero() {
        let p = Name::zeros(Alphabet::Binary);
        let paired = pair_names(&p, &p);
        let got = paired.prefix_with_budget(6, 1_000).unwrap();
        assert_eq!(got.symbols(), &[0; 6]);
    }

    #[test]
    fn unpair_round_trip_by_index() {
        // Round-trip checked against direct index computation: the oracle is
        // <p,q>(2i) = p(i), <p,q>(2i+1) = q(i), evaluated on the literals.
        let p = bits(&[0, 1, 1], &[0, 1]);
        let q = bits(&[1], &[1, 0, 0]);
        let (p2, q2) = unpair_names(&pair_names(&p, &q));
        let depth = 64;
        let pa = p.prefix_with_budget(depth, 10_000).unwrap();
        let qa = q.prefix_with_budget(depth, 10_000).unwrap();
        assert_eq!(p2.prefix_with_budget(depth, 10_000).unwrap(), pa);
        assert_eq!(q2.prefix_with_budget(depth, 10_000).unwrap(), qa);
    }

    #[test]
    fn literal_wraps_period() {
        let n = Name::eventually_periodic(Alphabet::Natural, vec![5], vec![1, 2]);
        let p = n.prefix_with_budget(6, 100).unwrap();
        assert_eq!(p.symbols(), &[5, 1, 2, 1, 2, 1]);
    }

    #[test]
    fn prefix_order() {
        let a = Prefix::new(Alphabet::Binary, vec![0, 1]);
        let b = Prefix::new(Alphabet::Binary, vec![0, 1, 1]);
        assert!(a.is_prefix_of(&b));
        assert!(!b.is_prefix_of(&a));
        assert!(a.is_prefix_of(&a));
    }
}
