//! Evaluation semantics: fuel-bounded, deterministic execution of machines
//! on names.
//!
//! A single fuel pool covers the machine's own steps and the cost of
//! generating the input symbols it consumes (recursively, for generated
//! names). Exhausting the pool yields [`Diverged`]; by design that is
//! indistinguishable from the input lying outside the machine's domain.

use super::machine::{Action, Process};
use super::{Diverged, Name, NameSource, Prefix, PrefixMachine, Symbol};

/// A shared step budget.
#[derive(Clone, Copy, Debug)]
pub struct Fuel {
    remaining: u64,
    initial: u64,
}

impl Fuel {
    pub fn new(budget: u64) -> Self {
        Fuel { remaining: budget, initial: budget }
    }

    pub fn unlimited() -> Self {
        Fuel::new(u64::MAX)
    }

    pub fn charge(&mut self, n: u64) -> Result<(), Diverged> {
        if self.remaining < n {
            self.remaining = 0;
            return Err(Diverged);
        }
        self.remaining -= n;
        Ok(())
    }

    pub fn used(&self) -> u64 {
        self.initial - self.remaining
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }
}

/// Incremental, resumable materialization of a name. Every requested symbol
/// is computed exactly once per stream.
pub struct NameStream {
    alphabet: super::Alphabet,
    body: StreamBody,
}

enum StreamBody {
    Literal { prefix: Vec<Symbol>, period: Vec<Symbol> },
    Machine(Box<Execution>),
    Interleaved { parts: Vec<NameStream> },
}

impl NameStream {
    pub fn new(name: Name) -> Self {
        let alphabet = name.alphabet();
        let body = match name.source() {
            NameSource::EventuallyPeriodic { prefix, period } => StreamBody::Literal {
                prefix: prefix.clone(),
                period: period.clone(),
            },
            NameSource::Generated { machine, input } => {
                StreamBody::Machine(Box::new(Execution::new(machine, input.clone())))
            }
            NameSource::Interleaved { parts } => StreamBody::Interleaved {
                parts: parts.iter().map(|p| NameStream::new(p.clone())).collect(),
            },
        };
        NameStream { alphabet, body }
    }

    /// Ensure at least `len` symbols are materialized.
    pub fn extend_to(&mut self, len: usize, fuel: &mut Fuel) -> Result<(), Diverged> {
        match &mut self.body {
            StreamBody::Literal { .. } => Ok(()),
            StreamBody::Machine(exec) => exec.run_to_output(len, fuel),
            StreamBody::Interleaved { parts } => {
                let k = parts.len();
                for (j, part) in parts.iter_mut().enumerate() {
                    // symbols j, j+k, j+2k, ... come from part j
                    let need = if len > j { (len - j - 1) / k + 1 } else { 0 };
                    part.extend_to(need, fuel)?;
                }
                Ok(())
            }
        }
    }

    /// Symbol at index i; must already be materialized.
    pub fn get(&self, i: usize) -> Symbol {
        match &self.body {
            StreamBody::Literal { prefix, period } => {
                if i < prefix.len() {
                    prefix[i]
                } else {
                    period[(i - prefix.len()) % period.len()]
                }
            }
            StreamBody::Machine(exec) => exec.output(i),
            StreamBody::Interleaved { parts } => {
                let k = parts.len();
                parts[i % k].get(i / k)
            }
        }
    }

    /// Symbol at index i if materialized.
    pub fn try_get(&self, i: usize) -> Option<Symbol> {
        match &self.body {
            StreamBody::Literal { .. } => Some(self.get(i)),
            StreamBody::Machine(exec) => exec.try_output(i),
            StreamBody::Interleaved { parts } => {
                let k = parts.len();
                parts[i % k].try_get(i / k)
            }
        }
    }

    pub fn alphabet(&self) -> super::Alphabet {
        self.alphabet
    }
}

/// An in-progress run of one machine on one input stream.
pub struct Execution {
    process: Box<dyn Process>,
    input: NameStream,
    cursor: usize,
    output: Vec<Symbol>,
    own_steps: u64,
    output_alphabet: super::Alphabet,
}

impl Execution {
    pub fn new(machine: &PrefixMachine, input: Name) -> Self {
        Execution {
            process: machine.boot(),
            input: NameStream::new(input),
            cursor: 0,
            output: Vec::new(),
            own_steps: 0,
            output_alphabet: machine.output_alphabet(),
        }
    }

    pub fn output_len(&self) -> usize {
        self.output.len()
    }

    pub fn output(&self, i: usize) -> Symbol {
        self.output[i]
    }

    pub fn try_output(&self, i: usize) -> Option<Symbol> {
        self.output.get(i).copied()
    }

    pub fn output_prefix(&self) -> Prefix {
        Prefix::new(self.output_alphabet, self.output.clone())
    }

    /// Steps taken by this machine itself (reads + emits + ticks), not
    /// counting the generation cost of its input.
    pub fn own_steps(&self) -> u64 {
        self.own_steps
    }

    /// Input symbols consumed so far.
    pub fn input_consumed(&self) -> usize {
        self.cursor
    }

    /// Drive the machine until its output holds at least `k` symbols.
    pub fn run_to_output(&mut self, k: usize, fuel: &mut Fuel) -> Result<(), Diverged> {
        while self.output.len() < k {
            let peek = self.input.try_get(self.cursor);
            let had_peek = peek.is_some();
            match self.process.step(peek) {
                Action::Read => {
                    assert!(had_peek, "machine read beyond available input");
                    fuel.charge(1)?;
                    self.own_steps += 1;
                    self.cursor += 1;
                }
                Action::Emit(s) => {
                    fuel.charge(1)?;
                    self.own_steps += 1;
                    self.output.push(s);
                }
                Action::Tick => {
                    fuel.charge(1)?;
                    self.own_steps += 1;
                }
                Action::Starve => {
                    assert!(!had_peek, "machine starved with input available");
                    self.input.extend_to(self.cursor + 1, fuel)?;
                }
            }
        }
        Ok(())
    }
}

/// Statistics of a completed [`run_machine_with_stats`] call.
#[derive(Clone, Debug)]
pub struct RunStats {
    pub output: Prefix,
    /// Steps of the top-level machine itself.
    pub own_steps: u64,
    /// Input symbols the top-level machine consumed.
    pub input_consumed: usize,
    /// Total fuel spent, including input generation.
    pub fuel_used: u64,
}

/// Feed increasing input prefixes to `m` until it has produced `k` output
/// symbols, or the budget runs out.
pub fn run_machine(m: &PrefixMachine, x: &Name, k: usize, budget: u64) -> Result<Prefix, Diverged> {
    run_machine_with_stats(m, x, k, budget).map(|s| s.output)
}

/// As [`run_machine`], additionally reporting step accounting.
pub fn run_machine_with_stats(
    m: &PrefixMachine,
    x: &Name,
    k: usize,
    budget: u64,
) -> Result<RunStats, Diverged> {
    let mut fuel = Fuel::new(budget);
    let mut exec = Execution::new(m, x.clone());
    exec.run_to_output(k, &mut fuel)?;
    Ok(RunStats {
        output: exec.output_prefix(),
        own_steps: exec.own_steps(),
        input_consumed: exec.input_consumed(),
        fuel_used: fuel.used(),
    })
}

/// Run a machine on a fixed, finite input prefix: pump until it starves on
/// the end of the prefix, produces `max_output` symbols, or spends
/// `max_steps`. Returns the output prefix and the steps taken.
///
/// This is the denotational view of the machine as a map on prefixes; it is
/// what the monotonicity property quantifies over.
pub fn apply_to_prefix(
    m: &PrefixMachine,
    input: &Prefix,
    max_output: usize,
    max_steps: u64,
) -> (Prefix, u64) {
    let mut process = m.boot();
    let mut cursor = 0usize;
    let mut out = Vec::new();
    let mut steps = 0u64;
    while steps < max_steps && out.len() < max_output {
        let peek = input.get(cursor);
        match process.step(peek) {
            Action::Read => {
                cursor += 1;
                steps += 1;
            }
            Action::Emit(s) => {
                out.push(s);
                steps += 1;
            }
            Action::Tick => {
                steps += 1;
            }
            Action::Starve => break,
        }
    }
    (Prefix::new(m.output_alphabet(), out), steps)
}
