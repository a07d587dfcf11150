//! The prefix-machine representation: programs, processes and the
//! round-based construction kit.
//!
//! A machine is operationally a deterministic process that takes one atomic
//! action per step: read one input symbol, emit one output symbol, or tick.
//! Output is append-only and input is consumed left to right, so the induced
//! map on prefixes is monotone by construction.

use std::sync::Arc;

use super::{Alphabet, Symbol};

/// One atomic machine action. Each of the first three costs one step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    /// Consume the symbol that was offered as `peek`. Only legal when the
    /// peek was `Some`.
    Read,
    /// Append one output symbol.
    Emit(Symbol),
    /// One unit of internal work.
    Tick,
    /// Cannot proceed without more input; only legal when the peek was
    /// `None`. Costs nothing.
    Starve,
}

/// A resumable machine run. Implementations must be deterministic functions
/// of the sequence of peeks they have been given.
pub trait Process: Send {
    fn step(&mut self, peek: Option<Symbol>) -> Action;
}

/// A machine description that can boot fresh runs.
pub trait Program: Send + Sync {
    fn boot(&self) -> Box<dyn Process>;
}

impl<F> Program for F
where
    F: Fn() -> Box<dyn Process> + Send + Sync,
{
    fn boot(&self) -> Box<dyn Process> {
        self()
    }
}

type LookaheadFn = dyn Fn(usize) -> usize + Send + Sync;

/// A monotone map from input prefixes to output prefixes with an explicit
/// step counter, packaged as a bootable program.
#[derive(Clone)]
pub struct PrefixMachine {
    label: Arc<str>,
    input_alphabet: Alphabet,
    output_alphabet: Alphabet,
    program: Arc<dyn Program>,
    lookahead: Option<Arc<LookaheadFn>>,
}

impl PrefixMachine {
    pub fn new(
        label: impl Into<String>,
        input_alphabet: Alphabet,
        output_alphabet: Alphabet,
        program: Arc<dyn Program>,
    ) -> Self {
        PrefixMachine {
            label: label.into().into(),
            input_alphabet,
            output_alphabet,
            program,
            lookahead: None,
        }
    }

    /// Declare an upper bound on the number of input symbols needed to
    /// produce k output symbols. Enables exact complexity profiles.
    pub fn with_lookahead(
        mut self,
        bound: impl Fn(usize) -> usize + Send + Sync + 'static,
    ) -> Self {
        self.lookahead = Some(Arc::new(bound));
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn relabelled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into().into();
        self
    }

    pub fn input_alphabet(&self) -> Alphabet {
        self.input_alphabet
    }

    pub fn output_alphabet(&self) -> Alphabet {
        self.output_alphabet
    }

    pub fn declared_lookahead(&self, k: usize) -> Option<usize> {
        self.lookahead.as_ref().map(|f| f(k))
    }

    pub fn boot(&self) -> Box<dyn Process> {
        self.program.boot()
    }

    /// Build a machine from a round description; see [`RoundFn`].
    pub fn from_rounds<R, F>(
        label: impl Into<String>,
        input_alphabet: Alphabet,
        output_alphabet: Alphabet,
        factory: F,
    ) -> Self
    where
        R: RoundFn + 'static,
        F: Fn() -> R + Send + Sync + 'static,
    {
        let program = move || -> Box<dyn Process> { Box::new(RoundProcess::new(factory())) };
        PrefixMachine::new(label, input_alphabet, output_alphabet, Arc::new(program))
    }

    /// Build a machine from a pure monotone prefix map. The map is re-run on
    /// each extended input prefix; emissions are the newly determined output
    /// symbols. Suitable for glue; dedicated processes are used where exact
    /// step constants are pinned.
    pub fn from_prefix_map<F>(
        label: impl Into<String>,
        input_alphabet: Alphabet,
        output_alphabet: Alphabet,
        map: F,
    ) -> Self
    where
        F: Fn(&[Symbol]) -> Vec<Symbol> + Send + Sync + Clone + 'static,
    {
        struct MapRound<F> {
            map: F,
        }
        impl<F> RoundFn for MapRound<F>
        where
            F: Fn(&[Symbol]) -> Vec<Symbol> + Send,
        {
            fn demand(&self, round: u64) -> usize {
                round as usize
            }
            fn produce(&mut self, _round: u64, input: &[Symbol], emitted: usize) -> RoundOutcome {
                let out = (self.map)(input);
                RoundOutcome::emit(out[emitted.min(out.len())..].to_vec())
            }
        }
        PrefixMachine::from_rounds(label, input_alphabet, output_alphabet, move || MapRound {
            map: map.clone(),
        })
    }
}

impl std::fmt::Debug for PrefixMachine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PrefixMachine({})", self.label)
    }
}

/// What one round of a [`RoundFn`] machine produced.
#[derive(Clone, Debug, Default)]
pub struct RoundOutcome {
    pub emit: Vec<Symbol>,
    pub ticks: u64,
}

impl RoundOutcome {
    pub fn emit(symbols: Vec<Symbol>) -> Self {
        RoundOutcome { emit: symbols, ticks: 0 }
    }

    pub fn ticks(n: u64) -> Self {
        RoundOutcome { emit: Vec::new(), ticks: n }
    }

    pub fn emit_with_ticks(symbols: Vec<Symbol>, ticks: u64) -> Self {
        RoundOutcome { emit: symbols, ticks }
    }
}

/// A machine described round by round: in round r it demands a specific
/// input length, then computes from exactly that prefix. `produce` must only
/// depend on the slice it is given, which makes the machine monotone.
///
/// A round that neither emits nor ticks is charged one bookkeeping tick so
/// that every round makes fuel progress.
pub trait RoundFn: Send {
    /// Input length required before round `round` can run.
    fn demand(&self, round: u64) -> usize;
    /// Run round `round` on the demanded input prefix. `emitted` is the
    /// number of symbols emitted so far.
    fn produce(&mut self, round: u64, input: &[Symbol], emitted: usize) -> RoundOutcome;
}

/// Driver adapting a [`RoundFn`] to the atomic-action interface.
pub struct RoundProcess<R: RoundFn> {
    f: R,
    round: u64,
    seen: Vec<Symbol>,
    emitted: usize,
    pending_emit: std::collections::VecDeque<Symbol>,
    pending_ticks: u64,
}

impl<R: RoundFn> RoundProcess<R> {
    pub fn new(f: R) -> Self {
        RoundProcess {
            f,
            round: 0,
            seen: Vec::new(),
            emitted: 0,
            pending_emit: std::collections::VecDeque::new(),
            pending_ticks: 0,
        }
    }
}

impl<R: RoundFn> Process for RoundProcess<R> {
    fn step(&mut self, peek: Option<Symbol>) -> Action {
        loop {
            if self.pending_ticks > 0 {
                self.pending_ticks -= 1;
                return Action::Tick;
            }
            if let Some(s) = self.pending_emit.pop_front() {
                self.emitted += 1;
                return Action::Emit(s);
            }
            let d = self.f.demand(self.round);
            if self.seen.len() < d {
                return match peek {
                    Some(s) => {
                        self.seen.push(s);
                        Action::Read
                    }
                    None => Action::Starve,
                };
            }
            let outcome = self.f.produce(self.round, &self.seen[..d], self.emitted);
            self.round += 1;
            self.pending_ticks = outcome.ticks;
            self.pending_emit = outcome.emit.into();
            if self.pending_ticks == 0 && self.pending_emit.is_empty() {
                // silent round: charge a bookkeeping tick
                self.pending_ticks = 1;
            }
        }
    }
}
