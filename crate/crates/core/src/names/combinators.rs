//! The machine catalog: basic machines and the combinators every reduction
//! and advice construction is wired from.

use std::sync::Arc;

use super::machine::{Action, PrefixMachine, Process};
use super::{Alphabet, Symbol};

/// Copies its input: read, emit, read, emit. Steps to k output symbols: 2k.
pub fn identity(alphabet: Alphabet) -> PrefixMachine {
    symbol_map("identity", alphabet, alphabet, |s| s).with_lookahead(|k| k)
}

/// Flips Cantor-space bits. An involution.
pub fn bitflip() -> PrefixMachine {
    symbol_map("bitflip", Alphabet::Binary, Alphabet::Binary, |s| 1 - s).with_lookahead(|k| k)
}

/// Symbol-wise transducer: one read and one emit per symbol.
pub fn symbol_map(
    label: impl Into<String>,
    input: Alphabet,
    output: Alphabet,
    f: impl Fn(Symbol) -> Symbol + Send + Sync + Clone + 'static,
) -> PrefixMachine {
    struct P<F> {
        f: F,
        held: Option<Symbol>,
    }
    impl<F: Fn(Symbol) -> Symbol + Send> Process for P<F> {
        fn step(&mut self, peek: Option<Symbol>) -> Action {
            if let Some(s) = self.held.take() {
                return Action::Emit((self.f)(s));
            }
            match peek {
                Some(s) => {
                    self.held = Some(s);
                    Action::Read
                }
                None => Action::Starve,
            }
        }
    }
    let program = move || -> Box<dyn Process> { Box::new(P { f: f.clone(), held: None }) };
    PrefixMachine::new(label, input, output, Arc::new(program)).with_lookahead(|k| k)
}

/// Projection to component `j` of a flat `arity`-way interleaving. Reads
/// every symbol up to the one it needs; for arity 2, steps to k output
/// symbols are 3k-1 (j = 0) and 3k (j = 1).
pub fn project(j: usize, arity: usize, alphabet: Alphabet) -> PrefixMachine {
    assert!(j < arity && arity >= 1);
    struct P {
        j: usize,
        arity: usize,
        pos: usize,
        held: Option<Symbol>,
    }
    impl Process for P {
        fn step(&mut self, peek: Option<Symbol>) -> Action {
            if let Some(s) = self.held.take() {
                return Action::Emit(s);
            }
            match peek {
                Some(s) => {
                    if self.pos % self.arity == self.j {
                        self.held = Some(s);
                    }
                    self.pos += 1;
                    Action::Read
                }
                None => Action::Starve,
            }
        }
    }
    let label = format!("project{j}of{arity}");
    let program = move || -> Box<dyn Process> {
        Box::new(P { j, arity, pos: 0, held: None })
    };
    PrefixMachine::new(label, alphabet, alphabet, Arc::new(program))
        .with_lookahead(move |k| if k == 0 { 0 } else { (k - 1) * arity + j + 1 })
}

/// Second projection on a pair: the paper's pi_2. Steps to k bits: 3k.
pub fn project_second(alphabet: Alphabet) -> PrefixMachine {
    project(1, 2, alphabet).relabelled("pi2")
}

/// First projection on a pair.
pub fn project_first(alphabet: Alphabet) -> PrefixMachine {
    project(0, 2, alphabet).relabelled("pi1")
}

/// Emits the given eventually-periodic literal, ignoring its input.
pub fn emit_literal(
    label: impl Into<String>,
    alphabet: Alphabet,
    prefix: Vec<Symbol>,
    period: Vec<Symbol>,
) -> PrefixMachine {
    assert!(!period.is_empty());
    struct P {
        prefix: Vec<Symbol>,
        period: Vec<Symbol>,
        pos: usize,
    }
    impl Process for P {
        fn step(&mut self, _peek: Option<Symbol>) -> Action {
            let s = if self.pos < self.prefix.len() {
                self.prefix[self.pos]
            } else {
                self.period[(self.pos - self.prefix.len()) % self.period.len()]
            };
            self.pos += 1;
            Action::Emit(s)
        }
    }
    let program = move || -> Box<dyn Process> {
        Box::new(P { prefix: prefix.clone(), period: period.clone(), pos: 0 })
    };
    PrefixMachine::new(label, Alphabet::Natural, alphabet, Arc::new(program))
        .with_lookahead(|_| 0)
}

/// Never produces output; ticks forever.
pub fn diverge(alphabet: Alphabet) -> PrefixMachine {
    struct P;
    impl Process for P {
        fn step(&mut self, _peek: Option<Symbol>) -> Action {
            Action::Tick
        }
    }
    let program = || -> Box<dyn Process> { Box::new(P) };
    PrefixMachine::new("diverge", alphabet, alphabet, Arc::new(program))
}

/// Emits each input symbol twice: output(i) = input(floor(i/2)).
pub fn doubler(alphabet: Alphabet) -> PrefixMachine {
    struct P {
        held: Option<Symbol>,
        second: Option<Symbol>,
    }
    impl Process for P {
        fn step(&mut self, peek: Option<Symbol>) -> Action {
            if let Some(s) = self.held.take() {
                self.second = Some(s);
                return Action::Emit(s);
            }
            if let Some(s) = self.second.take() {
                return Action::Emit(s);
            }
            match peek {
                Some(s) => {
                    self.held = Some(s);
                    Action::Read
                }
                None => Action::Starve,
            }
        }
    }
    let program = || -> Box<dyn Process> { Box::new(P { held: None, second: None }) };
    PrefixMachine::new("doubler", alphabet, alphabet, Arc::new(program))
        .with_lookahead(|k| k.div_ceil(2))
}

/// Performs 2^i internal ticks before reading and copying bit i. Total
/// steps to k bits: 2^k - 1 + 2k.
pub fn padded_delay() -> PrefixMachine {
    struct P {
        index: u32,
        ticks_left: u64,
        held: Option<Symbol>,
    }
    impl Process for P {
        fn step(&mut self, peek: Option<Symbol>) -> Action {
            if self.ticks_left > 0 {
                self.ticks_left -= 1;
                return Action::Tick;
            }
            if let Some(s) = self.held.take() {
                self.index += 1;
                self.ticks_left = 1u64 << self.index.min(62);
                return Action::Emit(s);
            }
            match peek {
                Some(s) => {
                    self.held = Some(s);
                    Action::Read
                }
                None => Action::Starve,
            }
        }
    }
    let program = || -> Box<dyn Process> {
        Box::new(P { index: 0, ticks_left: 1, held: None })
    };
    PrefixMachine::new("padded-delay", Alphabet::Binary, Alphabet::Binary, Arc::new(program))
        .with_lookahead(|k| k)
}

/// outer after inner: the composite computes outer(inner(x)) at prefix
/// level. Its step count is the sum of the two components' counts; internal
/// symbol transfers surface as ticks.
pub fn compose(outer: &PrefixMachine, inner: &PrefixMachine) -> PrefixMachine {
    assert!(
        outer.input_alphabet().subsumes(&inner.output_alphabet()),
        "compose: alphabet mismatch between {} and {}",
        outer.label(),
        inner.label()
    );
    struct P {
        outer: Box<dyn Process>,
        inner: Box<dyn Process>,
        mid: Vec<Symbol>,
        outer_cursor: usize,
    }
    impl Process for P {
        fn step(&mut self, peek: Option<Symbol>) -> Action {
            let outer_peek = self.mid.get(self.outer_cursor).copied();
            let outer_had = outer_peek.is_some();
            match self.outer.step(outer_peek) {
                Action::Read => {
                    debug_assert!(outer_had);
                    self.outer_cursor += 1;
                    Action::Tick
                }
                Action::Emit(s) => Action::Emit(s),
                Action::Tick => Action::Tick,
                Action::Starve => match self.inner.step(peek) {
                    Action::Read => Action::Read,
                    Action::Emit(s) => {
                        self.mid.push(s);
                        Action::Tick
                    }
                    Action::Tick => Action::Tick,
                    Action::Starve => Action::Starve,
                },
            }
        }
    }
    let label = format!("{}.{}", outer.label(), inner.label());
    let (o, i) = (outer.clone(), inner.clone());
    let program = move || -> Box<dyn Process> {
        Box::new(P { outer: o.boot(), inner: i.boot(), mid: Vec::new(), outer_cursor: 0 })
    };
    let la = match (outer.declared_lookahead(0), inner.declared_lookahead(0)) {
        (Some(_), Some(_)) => {
            let (o2, i2) = (outer.clone(), inner.clone());
            Some(move |k: usize| i2.declared_lookahead(o2.declared_lookahead(k).unwrap()).unwrap())
        }
        _ => None,
    };
    let m = PrefixMachine::new(
        label,
        inner.input_alphabet(),
        outer.output_alphabet(),
        Arc::new(program),
    );
    match la {
        Some(f) => m.with_lookahead(f),
        None => m,
    }
}

/// Runs two machines on the same input and interleaves their outputs:
/// result = <m1(x), m2(x)>. Reads are shared through an internal buffer.
pub fn pair_machines(m1: &PrefixMachine, m2: &PrefixMachine) -> PrefixMachine {
    struct P {
        subs: [Box<dyn Process>; 2],
        cursors: [usize; 2],
        buf: Vec<Symbol>,
        turn: usize,
    }
    impl Process for P {
        fn step(&mut self, peek: Option<Symbol>) -> Action {
            let c = self.cursors[self.turn];
            let sub_peek = if c < self.buf.len() { Some(self.buf[c]) } else { peek };
            let from_buf = c < self.buf.len();
            match self.subs[self.turn].step(sub_peek) {
                Action::Read => {
                    self.cursors[self.turn] += 1;
                    if from_buf {
                        Action::Tick
                    } else {
                        self.buf.push(sub_peek.expect("read without symbol"));
                        Action::Read
                    }
                }
                Action::Emit(s) => {
                    self.turn = 1 - self.turn;
                    Action::Emit(s)
                }
                Action::Tick => Action::Tick,
                Action::Starve => {
                    debug_assert!(sub_peek.is_none());
                    Action::Starve
                }
            }
        }
    }
    assert_eq!(
        m1.input_alphabet(),
        m2.input_alphabet(),
        "pair_machines: input alphabets differ"
    );
    let label = format!("<{},{}>", m1.label(), m2.label());
    let out_alpha = m1.output_alphabet().join(&m2.output_alphabet());
    let (a, b) = (m1.clone(), m2.clone());
    let program = move || -> Box<dyn Process> {
        Box::new(P { subs: [a.boot(), b.boot()], cursors: [0, 0], buf: Vec::new(), turn: 0 })
    };
    let la = match (m1.declared_lookahead(0), m2.declared_lookahead(0)) {
        (Some(_), Some(_)) => {
            let (a2, b2) = (m1.clone(), m2.clone());
            Some(move |k: usize| {
                let k1 = k.div_ceil(2);
                let k2 = k / 2;
                a2.declared_lookahead(k1).unwrap().max(b2.declared_lookahead(k2).unwrap())
            })
        }
        _ => None,
    };
    let m = PrefixMachine::new(label, m1.input_alphabet(), out_alpha, Arc::new(program));
    match la {
        Some(f) => m.with_lookahead(f),
        None => m,
    }
}

/// On a pair <a, b>, applies `j` to the second component: <a, b> -> <a, j(b)>.
pub fn on_second(j: &PrefixMachine) -> PrefixMachine {
    let alpha = j.input_alphabet();
    let label = format!("on_second({})", j.label());
    pair_machines(&project_first(alpha), &compose(j, &project_second(alpha))).relabelled(label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::names::{pair_names, run_machine, run_machine_with_stats, Name, Prefix};

    fn bin(prefix: &[Symbol], period: &[Symbol]) -> Name {
        Name::eventually_periodic(Alphabet::Binary, prefix.to_vec(), period.to_vec())
    }

    #[test]
    fn identity_copies_and_costs_2k() {
        let x = bin(&[0, 1, 1, 0], &[0]);
        let stats = run_machine_with_stats(&identity(Alphabet::Binary), &x, 4, 1_000).unwrap();
        assert_eq!(stats.output.symbols(), &[0, 1, 1, 0]);
        assert_eq!(stats.own_steps, 8);
    }

    #[test]
    fn diverge_exhausts_fuel() {
        let x = Name::zeros(Alphabet::Binary);
        assert!(run_machine(&diverge(Alphabet::Binary), &x, 1, 1_000_000).is_err());
    }

    #[test]
    fn compose_identity_is_identity() {
        let m = bitflip();
        let c = compose(&identity(Alphabet::Binary), &m);
        let x = bin(&[1, 0, 1], &[1, 1, 0]);
        for len in [1usize, 5, 17] {
            let lhs = run_machine(&c, &x, len, 100_000).unwrap();
            let rhs = run_machine(&m, &x, len, 100_000).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn compose_bitflip_involution() {
        let c = compose(&bitflip(), &bitflip());
        let x = bin(&[1, 0], &[0, 1, 1]);
        let got = run_machine(&c, &x, 12, 100_000).unwrap();
        let want = x.prefix_with_budget(12, 1_000).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn compose_of_identities_matches_identity_output() {
        let c = compose(&identity(Alphabet::Binary), &identity(Alphabet::Binary));
        let x = bin(&[0, 1, 1, 0], &[0, 1, 1, 0]);
        let got = run_machine(&c, &x, 4, 1_000).unwrap();
        assert_eq!(got.symbols(), &[0, 1, 1, 0]);
    }

    #[test]
    fn projections_invert_pairing() {
        let p = bin(&[1, 1, 0], &[1, 0]);
        let q = bin(&[], &[0, 0, 1]);
        let paired = pair_names(&p, &q);
        let left = run_machine(&project_first(Alphabet::Binary), &paired, 10, 100_000).unwrap();
        let right = run_machine(&project_second(Alphabet::Binary), &paired, 10, 100_000).unwrap();
        assert_eq!(left, p.prefix_with_budget(10, 1_000).unwrap());
        assert_eq!(right, q.prefix_with_budget(10, 1_000).unwrap());
    }

    #[test]
    fn pi2_costs_3k() {
        let paired = pair_names(&bin(&[], &[0]), &bin(&[], &[1]));
        let stats =
            run_machine_with_stats(&project_second(Alphabet::Binary), &paired, 5, 1_000).unwrap();
        assert_eq!(stats.own_steps, 15);
    }

    #[test]
    fn pair_machines_interleaves() {
        let m = pair_machines(&identity(Alphabet::Binary), &bitflip());
        let x = bin(&[1, 0, 0], &[1]);
        let got = run_machine(&m, &x, 6, 100_000).unwrap();
        assert_eq!(got.symbols(), &[1, 0, 0, 1, 0, 1]);
    }

    #[test]
    fn compose_associativity_on_prefixes() {
        // (a.b).c = a.(b.c), evaluated directly on sampled prefixes.
        let a = bitflip();
        let b = doubler(Alphabet::Binary);
        let c = identity(Alphabet::Binary);
        let lhs = compose(&compose(&a, &b), &c);
        let rhs = compose(&a, &compose(&b, &c));
        let mut state = 0x9e3779b97f4a7c15u64;
        for _ in 0..100 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let len = (state >> 59) as usize;
            let symbols: Vec<Symbol> = (0..len).map(|i| (state >> i) & 1).collect();
            let p = Prefix::new(Alphabet::Binary, symbols);
            let (o1, _) = crate::names::apply_to_prefix(&lhs, &p, usize::MAX, 100_000);
            let (o2, _) = crate::names::apply_to_prefix(&rhs, &p, usize::MAX, 100_000);
            assert_eq!(o1, o2);
        }
    }

    #[test]
    fn on_second_rewires_pairs() {
        let p = bin(&[1, 0], &[1]);
        let q = bin(&[0, 0], &[1]);
        let m = on_second(&bitflip());
        let got = run_machine(&m, &pair_names(&p, &q), 8, 100_000).unwrap();
        assert_eq!(got.symbols(), &[1, 1, 0, 1, 1, 0, 1, 0]);
    }
}
