//! Exact rational arithmetic: dyadic powers, outward-rounded intervals and
//! square-root enclosures.
//!
//! Everything downstream that reasons about real numbers (signed-digit
//! codecs, eigenvector enclosures, fat-Cantor endpoints) goes through this
//! module so that no floating point enters a correctness decision.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

/// Integer as an exact rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// p/q as an exact rational. Panics on q = 0.
pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// 2^e for any sign of `e`.
pub fn pow2(e: i64) -> Rat {
    if e >= 0 {
        Rat::from_integer(BigInt::one() << e as usize)
    } else {
        Rat::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// Smallest e >= 0 with |q| <= 2^e.
pub fn mag_exponent(q: &Rat) -> i64 {
    let a = q.abs();
    let mut e = 0i64;
    while a > pow2(e) {
        e += 1;
    }
    e
}

pub fn to_f64(q: &Rat) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Floor of sqrt(t) for a non-negative rational, as an integer.
fn floor_sqrt_rat(t: &Rat) -> BigInt {
    debug_assert!(!t.is_negative());
    t.floor().to_integer().sqrt()
}

/// Dyadic enclosure of sqrt(q): returns (lo, hi) with lo <= sqrt(q) <= hi and
/// hi - lo <= sqrt(hi_in) - sqrt(lo_in) + 2^{1-prec}.
pub fn sqrt_enclosure(q: &Rat, prec: u32) -> (Rat, Rat) {
    debug_assert!(!q.is_negative(), "sqrt of negative rational");
    let scale = pow2(prec as i64);
    let scaled = q * &scale * &scale;
    let lo_int = floor_sqrt_rat(&scaled);
    let lo = Rat::from_integer(lo_int.clone()) / &scale;
    let hi = Rat::from_integer(lo_int + BigInt::one()) / &scale;
    (lo, hi)
}

/// A closed interval with exact rational endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct RatInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl RatInterval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo <= hi, "interval endpoints out of order");
        RatInterval { lo, hi }
    }

    pub fn point(q: Rat) -> Self {
        RatInterval { lo: q.clone(), hi: q }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / rat(2)
    }

    pub fn contains(&self, q: &Rat) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_interval(&self, other: &RatInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Strictly inside the open interval (a, b).
    pub fn inside_open(&self, a: &Rat, b: &Rat) -> bool {
        a < &self.lo && &self.hi < b
    }

    pub fn intersect(&self, other: &RatInterval) -> Option<RatInterval> {
        let lo = if self.lo >= other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi <= other.hi { self.hi.clone() } else { other.hi.clone() };
        if lo <= hi {
            Some(RatInterval { lo, hi })
        } else {
            None
        }
    }

    pub fn excludes_zero(&self) -> bool {
        self.lo.is_positive() || self.hi.is_negative()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn neg(&self) -> RatInterval {
        RatInterval::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn add(&self, other: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn mul(&self, other: &RatInterval) -> RatInterval {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if *c < lo {
                lo = c.clone();
            }
            if *c > hi {
                hi = c.clone();
            }
        }
        RatInterval { lo, hi }
    }

    pub fn scale(&self, q: &Rat) -> RatInterval {
        self.mul(&RatInterval::point(q.clone()))
    }

    pub fn shift(&self, q: &Rat) -> RatInterval {
        RatInterval::new(&self.lo + q, &self.hi + q)
    }

    /// Division; the divisor must provably exclude zero.
    pub fn div(&self, other: &RatInterval) -> RatInterval {
        debug_assert!(other.excludes_zero(), "interval division by interval containing zero");
        let inv = RatInterval::new(
            Rat::one() / other.hi.clone(),
            Rat::one() / other.lo.clone(),
        );
        self.mul(&inv)
    }

    pub fn square(&self) -> RatInterval {
        let sq = self.mul(self);
        if self.contains(&Rat::zero()) {
            RatInterval::new(Rat::zero(), sq.hi)
        } else {
            sq
        }
    }

    /// Outward-rounded square-root enclosure; requires hi >= 0. Negative
    /// lower endpoints are clamped to zero (interval noise around 0).
    pub fn sqrt(&self, prec: u32) -> RatInterval {
        let lo_in = if self.lo.is_negative() { Rat::zero() } else { self.lo.clone() };
        let (lo, _) = sqrt_enclosure(&lo_in, prec);
        let (_, hi) = sqrt_enclosure(&self.hi, prec);
        RatInterval::new(lo, hi)
    }

    /// Separation between two intervals: max(0, gap). Positive iff provably disjoint.
    pub fn provably_disjoint(&self, other: &RatInterval) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow2_signs() {
        assert_eq!(pow2(3), rat(8));
        assert_eq!(pow2(0), rat(1));
        assert_eq!(pow2(-2), ratio(1, 4));
    }

    #[test]
    fn sqrt_enclosure_brackets_value() {
        // sqrt(2) to 40 fractional bits, checked by squaring (independent route).
        let (lo, hi) = sqrt_enclosure(&rat(2), 40);
        assert!(&lo * &lo <= rat(2));
        assert!(&hi * &hi >= rat(2));
        assert!(&hi - &lo <= pow2(-39));
    }

    #[test]
    fn sqrt_exact_square() {
        let (lo, hi) = sqrt_enclosure(&ratio(9, 4), 20);
        assert!(lo <= ratio(3, 2) && ratio(3, 2) <= hi);
    }

    #[test]
    fn interval_mul_signs() {
        let a = RatInterval::new(rat(-2), rat(3));
        let b = RatInterval::new(rat(-1), rat(4));
        let p = a.mul(&b);
        assert_eq!(p.lo, rat(-8));
        assert_eq!(p.hi, rat(12));
    }

    #[test]
    fn interval_div_excludes_zero() {
        let a = RatInterval::new(rat(1), rat(2));
        let b = RatInterval::new(rat(2), rat(4));
        let q = a.div(&b);
        assert_eq!(q.lo, ratio(1, 4));
        assert_eq!(q.hi, rat(1));
    }

    #[test]
    fn mag_exponent_examples() {
        assert_eq!(mag_exponent(&rat(0)), 0);
        assert_eq!(mag_exponent(&ratio(1, 2)), 0);
        assert_eq!(mag_exponent(&rat(3)), 2);
        assert_eq!(mag_exponent(&rat(-5)), 3);
    }
}
