//! The signed-digit representation of the reals.
//!
//! A real name is a self-delimiting exponent header followed by an infinite
//! digit stream over {-1, 0, +1}: the value is 2^e * sum d_i 2^{-i}, and a
//! prefix with n digits confines the value to a closed interval of width
//! 2^{e-n+1}. The header is a sign bit, |e| in unary (1-symbols) and a 0
//! terminator. Digits are coded 0 -> 0, 1 -> +1, 2 -> -1.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};

use crate::names::{Alphabet, Name, Prefix, PrefixMachine, RoundFn, RoundOutcome, Symbol};
use crate::rational::{mag_exponent, pow2, rat, Rat, RatInterval};

pub const DIGIT_ZERO: Symbol = 0;
pub const DIGIT_PLUS: Symbol = 1;
pub const DIGIT_MINUS: Symbol = 2;

fn digit_value(s: Symbol) -> Option<i64> {
    match s {
        DIGIT_ZERO => Some(0),
        DIGIT_PLUS => Some(1),
        DIGIT_MINUS => Some(-1),
        _ => None,
    }
}

fn digit_symbol(d: i64) -> Symbol {
    match d {
        0 => DIGIT_ZERO,
        1 => DIGIT_PLUS,
        -1 => DIGIT_MINUS,
        _ => unreachable!("digit out of range"),
    }
}

/// A malformed real name: bad header or digit symbol out of range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MalformedName;

impl fmt::Display for MalformedName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed real name")
    }
}

impl std::error::Error for MalformedName {}

/// Header encoding of an exponent.
pub fn header_symbols(e: i64) -> Vec<Symbol> {
    let mut out = vec![if e < 0 { 1 } else { 0 }];
    out.extend(std::iter::repeat(1).take(e.unsigned_abs() as usize));
    out.push(0);
    out
}

enum HeaderParse {
    Incomplete,
    Done { e: i64, digits_start: usize },
    Malformed,
}

fn parse_header(symbols: &[Symbol]) -> HeaderParse {
    if symbols.is_empty() {
        return HeaderParse::Incomplete;
    }
    if symbols[0] > 1 {
        return HeaderParse::Malformed;
    }
    let negative = symbols[0] == 1;
    let mut i = 1;
    let mut mag = 0i64;
    loop {
        match symbols.get(i) {
            None => return HeaderParse::Incomplete,
            Some(0) => {
                let e = if negative { -mag } else { mag };
                return HeaderParse::Done { e, digits_start: i + 1 };
            }
            Some(1) => {
                mag += 1;
                i += 1;
            }
            Some(_) => return HeaderParse::Malformed,
        }
    }
}

/// What a finite real-name prefix reveals about the value.
#[derive(Clone, Debug, PartialEq)]
pub enum RealPrefixInfo {
    /// Header not complete yet: no bound is known.
    Pending,
    /// Header read, n digits seen: the tightest closed dyadic interval
    /// containing all completions.
    Bounded(RatInterval),
}

impl RealPrefixInfo {
    pub fn interval(&self) -> Option<&RatInterval> {
        match self {
            RealPrefixInfo::Bounded(i) => Some(i),
            RealPrefixInfo::Pending => None,
        }
    }
}

/// Decode a prefix of a signed-digit real name into the interval of its
/// completions.
pub fn decode_real_prefix(p: &Prefix) -> Result<RealPrefixInfo, MalformedName> {
    decode_real_symbols(p.symbols())
}

pub fn decode_real_symbols(symbols: &[Symbol]) -> Result<RealPrefixInfo, MalformedName> {
    match parse_header(symbols) {
        HeaderParse::Incomplete => Ok(RealPrefixInfo::Pending),
        HeaderParse::Malformed => Err(MalformedName),
        HeaderParse::Done { e, digits_start } => {
            let mut sum = Rat::zero();
            let mut n = 0i64;
            for &s in &symbols[digits_start..] {
                let d = digit_value(s).ok_or(MalformedName)?;
                n += 1;
                sum += rat(d) * pow2(-n);
            }
            let scale = pow2(e);
            let radius = pow2(-n);
            let lo = (&sum - &radius) * &scale;
            let hi = (&sum + &radius) * &scale;
            Ok(RealPrefixInfo::Bounded(RatInterval::new(lo, hi)))
        }
    }
}

/// Interval of completions of a unit-interval binary prefix:
/// [S, S + 2^{-n}] with S = sum b(i) 2^{-i-1}.
pub fn decode_unit_binary_prefix(symbols: &[Symbol]) -> RatInterval {
    let mut sum = Rat::zero();
    for (i, &b) in symbols.iter().enumerate() {
        sum += rat(b as i64) * pow2(-(i as i64) - 1);
    }
    let hi = &sum + pow2(-(symbols.len() as i64));
    RatInterval::new(sum, hi)
}

/// Total signed-digit name of a rational, as an eventually-periodic literal.
/// Every prefix interval contains q and the intervals shrink to {q}.
pub fn encode_rational(q: &Rat) -> Name {
    let e = mag_exponent(q);
    let mut symbols = header_symbols(e);
    let negative = q.is_negative();
    let m = q.abs() / pow2(e);
    // binary long division of m = N/D in [0, 1]
    let d_den = m.denom().clone();
    let mut n_num = m.numer().clone();
    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    let mut digits: Vec<Symbol> = Vec::new();
    let (prefix_digits, period_digits) = loop {
        if let Some(&at) = seen.get(&n_num) {
            let period: Vec<Symbol> = digits[at..].to_vec();
            let prefix: Vec<Symbol> = digits[..at].to_vec();
            break (prefix, period);
        }
        seen.insert(n_num.clone(), digits.len());
        let doubled = &n_num * BigInt::from(2);
        let bit = if doubled >= d_den { 1u64 } else { 0u64 };
        n_num = if bit == 1 { doubled - &d_den } else { doubled };
        // x = 1 stays at 1: emits 1 forever
        if bit == 1 && n_num > d_den {
            n_num = d_den.clone();
        }
        digits.push(if negative && bit == 1 { DIGIT_MINUS } else { bit });
    };
    symbols.extend(prefix_digits);
    let period = if period_digits.is_empty() { vec![DIGIT_ZERO] } else { period_digits };
    Name::eventually_periodic(Alphabet::Natural, symbols, period)
}

/// Exact value of an eventually-periodic signed-digit real name.
pub fn literal_real_value(name: &Name) -> Option<Rat> {
    let (prefix, period) = name.as_literal()?;
    let at = |i: usize| -> Symbol {
        if i < prefix.len() {
            prefix[i]
        } else {
            period[(i - prefix.len()) % period.len()]
        }
    };
    // parse header over the infinite literal
    let bound = prefix.len() + period.len() + 2;
    let mut i = 1;
    if at(0) > 1 {
        return None;
    }
    let mut mag = 0i64;
    while at(i) == 1 {
        mag += 1;
        i += 1;
        if i > bound + mag as usize {
            return None; // header never terminates
        }
    }
    if at(i) != 0 {
        return None;
    }
    let e = if at(0) == 1 { -mag } else { mag };
    let digits_start = i + 1;
    let digit_at = |j: usize| digit_value(at(digits_start + j));
    // digit stream is eventually periodic: explicit part then a cycle
    let explicit = if digits_start < prefix.len() { prefix.len() - digits_start } else { 0 };
    let cycle = period.len();
    let mut value = Rat::zero();
    for j in 0..explicit {
        value += rat(digit_at(j)?) * pow2(-(j as i64) - 1);
    }
    let mut cycle_sum = Rat::zero();
    for j in 0..cycle {
        cycle_sum += rat(digit_at(explicit + j)?) * pow2(-(j as i64) - 1);
    }
    let tail = pow2(-(explicit as i64)) * cycle_sum / (Rat::one() - pow2(-(cycle as i64)));
    value += tail;
    Some(value * pow2(e))
}

/// Exact value sum b(i) 2^{-i-1} of an eventually-periodic binary name.
pub fn literal_binary_fraction(name: &Name) -> Option<Rat> {
    let (prefix, period) = name.as_literal()?;
    if prefix.iter().chain(period.iter()).any(|&s| s > 1) {
        return None;
    }
    let mut value = Rat::zero();
    for (j, &b) in prefix.iter().enumerate() {
        value += rat(b as i64) * pow2(-(j as i64) - 1);
    }
    let mut cycle_sum = Rat::zero();
    for (j, &b) in period.iter().enumerate() {
        cycle_sum += rat(b as i64) * pow2(-(j as i64) - 1);
    }
    let tail = pow2(-(prefix.len() as i64)) * cycle_sum / (Rat::one() - pow2(-(period.len() as i64)));
    Some(value + tail)
}

/// Translates a unit-interval binary name into a signed-digit real name of
/// the same value: header e = 0, then the bits verbatim as digits.
pub fn translate_binary_to_signed() -> PrefixMachine {
    struct T {
        header_left: u8,
        held: Option<Symbol>,
    }
    impl crate::names::Process for T {
        fn step(&mut self, peek: Option<Symbol>) -> crate::names::Action {
            use crate::names::Action;
            if self.header_left > 0 {
                self.header_left -= 1;
                return Action::Emit(0);
            }
            if let Some(s) = self.held.take() {
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
    let program = || -> Box<dyn crate::names::Process> {
        Box::new(T { header_left: 2, held: None })
    };
    PrefixMachine::new(
        "translate-binary-signed",
        Alphabet::Binary,
        Alphabet::Natural,
        Arc::new(program),
    )
    .with_lookahead(|k| k)
}

/// Incremental signed-digit emitter: feed it shrinking enclosures of a real
/// value and it yields the newly determined name symbols (header first).
/// Enclosures are intersected, so feeding is robust to non-nested refiners
/// as long as they converge to the same value.
pub struct DigitEmitter {
    current: Option<RatInterval>,
    exponent: Option<i64>,
    digits: i64,
    sum: Rat,
}

impl DigitEmitter {
    pub fn new() -> Self {
        DigitEmitter { current: None, exponent: None, digits: 0, sum: Rat::zero() }
    }

    pub fn feed(&mut self, enclosure: &RatInterval) -> Vec<Symbol> {
        let merged = match &self.current {
            None => enclosure.clone(),
            Some(prev) => prev
                .intersect(enclosure)
                .expect("refiner produced disjoint enclosures"),
        };
        self.current = Some(merged);
        let i = self.current.as_ref().unwrap().clone();
        let mut out = Vec::new();
        let e = match self.exponent {
            Some(e) => e,
            None => {
                let bound = i.lo.abs().max(i.hi.abs());
                let e = mag_exponent(&bound);
                self.exponent = Some(e);
                out.extend(header_symbols(e));
                e
            }
        };
        let scale = pow2(e);
        loop {
            let mut emitted = false;
            for d in [0i64, 1, -1] {
                let next_sum = &self.sum + rat(d) * pow2(-self.digits - 1);
                let half = pow2(-self.digits - 1);
                let lo = (&next_sum - &half) * &scale;
                let hi = (&next_sum + &half) * &scale;
                if lo <= i.lo && i.hi <= hi {
                    out.push(digit_symbol(d));
                    self.sum = next_sum;
                    self.digits += 1;
                    emitted = true;
                    break;
                }
            }
            if !emitted {
                break;
            }
        }
        out
    }
}

impl Default for DigitEmitter {
    fn default() -> Self {
        Self::new()
    }
}

/// Input-ignoring machine emitting the real name defined by an enclosure
/// function: `refine(t)` must return intervals that all contain one common
/// value, with widths tending to zero.
pub fn real_from_fn_machine(
    label: impl Into<String>,
    refine: impl Fn(u64) -> RatInterval + Send + Sync + Clone + 'static,
) -> PrefixMachine {
    struct R<F> {
        refine: F,
        emitter: DigitEmitter,
    }
    impl<F: Fn(u64) -> RatInterval + Send> RoundFn for R<F> {
        fn demand(&self, _round: u64) -> usize {
            0
        }
        fn produce(&mut self, round: u64, _input: &[Symbol], _emitted: usize) -> RoundOutcome {
            let enclosure = (self.refine)(round);
            RoundOutcome::emit_with_ticks(self.emitter.feed(&enclosure), 1)
        }
    }
    PrefixMachine::from_rounds(label, Alphabet::Natural, Alphabet::Natural, move || R {
        refine: refine.clone(),
        emitter: DigitEmitter::new(),
    })
}

/// The real name defined by an enclosure function.
pub fn real_name_from_fn(
    label: impl Into<String>,
    refine: impl Fn(u64) -> RatInterval + Send + Sync + Clone + 'static,
) -> Name {
    Name::generated(real_from_fn_machine(label, refine), Name::zeros(Alphabet::Natural))
}

/// Name of sqrt(q) for a non-negative rational.
pub fn sqrt_rational_name(q: &Rat) -> Name {
    let q = q.clone();
    real_name_from_fn("sqrt", move |t| {
        let prec = 8 + 8 * t.min(1_000) as u32;
        let (lo, hi) = crate::rational::sqrt_enclosure(&q, prec);
        RatInterval::new(lo, hi)
    })
}

/// Machine computing x -> a*x + b on signed-digit real names.
pub fn real_affine_machine(a: Rat, b: Rat) -> PrefixMachine {
    struct Aff {
        a: Rat,
        b: Rat,
        emitter: DigitEmitter,
        poisoned: bool,
    }
    impl RoundFn for Aff {
        fn demand(&self, round: u64) -> usize {
            round as usize
        }
        fn produce(&mut self, _round: u64, input: &[Symbol], _emitted: usize) -> RoundOutcome {
            if self.poisoned {
                return RoundOutcome::ticks(1);
            }
            match decode_real_symbols(input) {
                Err(MalformedName) => {
                    self.poisoned = true;
                    RoundOutcome::ticks(1)
                }
                Ok(RealPrefixInfo::Pending) => RoundOutcome::ticks(1),
                Ok(RealPrefixInfo::Bounded(i)) => {
                    let image = i.scale(&self.a).shift(&self.b);
                    RoundOutcome::emit_with_ticks(self.emitter.feed(&image), 1)
                }
            }
        }
    }
    let label = format!("affine({a},{b})");
    PrefixMachine::from_rounds(label, Alphabet::Natural, Alphabet::Natural, move || Aff {
        a: a.clone(),
        b: b.clone(),
        emitter: DigitEmitter::new(),
        poisoned: false,
    })
}

/// Machine computing the product of the two components of a paired real
/// name: <x, y> -> x*y.
pub fn real_product_machine() -> PrefixMachine {
    struct Prod {
        emitter: DigitEmitter,
        poisoned: bool,
    }
    impl RoundFn for Prod {
        fn demand(&self, round: u64) -> usize {
            2 * round as usize
        }
        fn produce(&mut self, _round: u64, input: &[Symbol], _emitted: usize) -> RoundOutcome {
            if self.poisoned {
                return RoundOutcome::ticks(1);
            }
            let left: Vec<Symbol> = input.iter().step_by(2).copied().collect();
            let right: Vec<Symbol> = input.iter().skip(1).step_by(2).copied().collect();
            match (decode_real_symbols(&left), decode_real_symbols(&right)) {
                (Err(_), _) | (_, Err(_)) => {
                    self.poisoned = true;
                    RoundOutcome::ticks(1)
                }
                (Ok(RealPrefixInfo::Bounded(a)), Ok(RealPrefixInfo::Bounded(b))) => {
                    RoundOutcome::emit_with_ticks(self.emitter.feed(&a.mul(&b)), 1)
                }
                _ => RoundOutcome::ticks(1),
            }
        }
    }
    PrefixMachine::from_rounds("real-product", Alphabet::Natural, Alphabet::Natural, || Prod {
        emitter: DigitEmitter::new(),
        poisoned: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn decode_empty_digits() {
        // e = 0, no digits -> [-1, 1]
        let p = Prefix::new(Alphabet::Natural, vec![0, 0]);
        let info = decode_real_prefix(&p).unwrap();
        assert_eq!(info.interval().unwrap(), &RatInterval::new(rat(-1), rat(1)));
    }

    #[test]
    fn decode_one_digit() {
        // e = 0, digits (1) -> [0, 1]: 1/2 +- 1/2 by the layout formula
        let p = Prefix::new(Alphabet::Natural, vec![0, 0, DIGIT_PLUS]);
        let info = decode_real_prefix(&p).unwrap();
        assert_eq!(info.interval().unwrap(), &RatInterval::new(rat(0), rat(1)));
    }

    #[test]
    fn decode_two_digits() {
        // e = 0, digits (1, 0) -> [1/4, 3/4]: 1/2 +- 1/4
        let p = Prefix::new(Alphabet::Natural, vec![0, 0, DIGIT_PLUS, DIGIT_ZERO]);
        let info = decode_real_prefix(&p).unwrap();
        assert_eq!(
            info.interval().unwrap(),
            &RatInterval::new(ratio(1, 4), ratio(3, 4))
        );
    }

    #[test]
    fn decode_rejects_bad_digit() {
        let p = Prefix::new(Alphabet::Natural, vec![0, 0, 7]);
        assert!(decode_real_prefix(&p).is_err());
    }

    #[test]
    fn encode_zero() {
        let n = encode_rational(&rat(0));
        let (prefix, period) = n.as_literal().unwrap();
        assert_eq!(prefix, &[0, 0]);
        assert_eq!(period, &[DIGIT_ZERO]);
    }

    #[test]
    fn encode_half() {
        // 1/2 -> e = 0, digits (1, 0, 0, ...)
        let n = encode_rational(&ratio(1, 2));
        let v = literal_real_value(&n).unwrap();
        assert_eq!(v, ratio(1, 2));
        let p = n.prefix_with_budget(5, 100).unwrap();
        assert_eq!(&p.symbols()[..3], &[0, 0, DIGIT_PLUS]);
    }

    #[test]
    fn encode_three_uses_exponent_two() {
        // 3 -> e = 2, digits encoding 3/4
        let n = encode_rational(&rat(3));
        let (prefix, _) = n.as_literal().unwrap();
        assert_eq!(&prefix[..4], &[0, 1, 1, 0]);
        assert_eq!(literal_real_value(&n).unwrap(), rat(3));
    }

    #[test]
    fn encode_decode_shrinks_to_value() {
        for q in [ratio(1, 3), ratio(-7, 5), rat(2), ratio(5, 8), rat(-1)] {
            let n = encode_rational(&q);
            assert_eq!(literal_real_value(&n).unwrap(), q);
            let mut last_width: Option<Rat> = None;
            for len in [3usize, 6, 10, 20, 40] {
                let p = n.prefix_with_budget(len, 1_000).unwrap();
                if let RealPrefixInfo::Bounded(i) = decode_real_prefix(&p).unwrap() {
                    assert!(i.contains(&q), "interval must contain {q}");
                    if let Some(w) = &last_width {
                        assert!(&i.width() <= w, "nesting: widths shrink");
                    }
                    last_width = Some(i.width());
                }
            }
            assert!(last_width.unwrap() <= pow2(-30));
        }
    }

    #[test]
    fn translate_zero_and_one() {
        use crate::names::run_machine;
        // 0^w -> name of 0
        let z = Name::zeros(Alphabet::Binary);
        let t = translate_binary_to_signed();
        let out = run_machine(&t, &z, 20, 10_000).unwrap();
        let info = decode_real_prefix(&out).unwrap();
        assert!(info.interval().unwrap().contains(&rat(0)));
        assert!(info.interval().unwrap().width() <= pow2(-15));
        // 1^w -> name of 1 (geometric series)
        let ones = Name::constant(Alphabet::Binary, 1);
        let out = run_machine(&t, &ones, 20, 10_000).unwrap();
        let info = decode_real_prefix(&out).unwrap();
        assert!(info.interval().unwrap().contains(&rat(1)));
    }

    #[test]
    fn translate_first_bit_one_stays_in_upper_half() {
        // prefix (1): the range of completions is [1/2, 1]; checked exactly
        // on eventually-periodic completions via the literal value.
        for period in [[1, 0], [0, 0], [0, 1]] {
            let b = Name::eventually_periodic(Alphabet::Binary, vec![1], period.to_vec());
            let v = literal_binary_fraction(&b).unwrap();
            assert!(v >= ratio(1, 2) && v <= rat(1));
        }
    }

    #[test]
    fn sqrt_name_converges() {
        let n = sqrt_rational_name(&rat(2));
        let p = n.prefix_with_budget(40, 1_000_000).unwrap();
        let info = decode_real_prefix(&p).unwrap();
        let i = info.interval().unwrap();
        // contains sqrt(2): check by squaring endpoints
        assert!(&i.lo * &i.lo <= rat(2));
        assert!(&i.hi * &i.hi >= rat(2));
        assert!(i.width() <= pow2(-20));
    }

    #[test]
    fn affine_machine_maps_value() {
        use crate::names::run_machine;
        // x -> x - 1 on the name of 1/3
        let x = encode_rational(&ratio(1, 3));
        let m = real_affine_machine(rat(1), rat(-1));
        let out = run_machine(&m, &x, 40, 1_000_000).unwrap();
        let info = decode_real_prefix(&out).unwrap();
        let i = info.interval().unwrap();
        assert!(i.contains(&ratio(-2, 3)));
        assert!(i.width() <= pow2(-20));
    }

    #[test]
    fn product_machine_multiplies() {
        use crate::names::{pair_names, run_machine};
        let a = encode_rational(&ratio(3, 2));
        let b = encode_rational(&ratio(-1, 3));
        let m = real_product_machine();
        let out = run_machine(&m, &pair_names(&a, &b), 40, 1_000_000).unwrap();
        let info = decode_real_prefix(&out).unwrap();
        let i = info.interval().unwrap();
        assert!(i.contains(&ratio(-1, 2)));
        assert!(i.width() <= pow2(-15));
    }

    #[test]
    fn literal_value_handles_periodic_digits() {
        // 1/3 = 0.0101...: value recovered exactly from the periodic literal
        let n = encode_rational(&ratio(1, 3));
        assert_eq!(literal_real_value(&n).unwrap(), ratio(1, 3));
        let m = encode_rational(&ratio(-5, 7));
        assert_eq!(literal_real_value(&m).unwrap(), ratio(-5, 7));
    }
}
