//! Binary fixed-point numbers on `BigInt`: a value `v` is stored as
//! `round(v * 2^bits)`. Only what the extended-precision eigensolver needs.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct FixedPoint {
    pub bits: u32,
}

impl FixedPoint {
    pub fn new(bits: u32) -> Self {
        FixedPoint { bits }
    }

    pub fn one(&self) -> BigInt {
        BigInt::one() << self.bits
    }

    pub fn encode(&self, x: f64) -> BigInt {
        if x == 0.0 || !x.is_finite() {
            return BigInt::zero();
        }
        let bits = x.abs().to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let (mantissa, e) = if exp == 0 {
            (bits & ((1 << 52) - 1), -1074)
        } else {
            ((bits & ((1 << 52) - 1)) | (1 << 52), exp - 1075)
        };
        let m = BigInt::from(mantissa);
        let shift = e + i64::from(self.bits);
        let raw = if shift >= 0 {
            m << shift as u64
        } else {
            m >> (-shift) as u64
        };
        if x < 0.0 {
            -raw
        } else {
            raw
        }
    }

    pub fn encode_rational(&self, q: &BigRational) -> BigInt {
        let num: BigInt = q.numer() << self.bits;
        round_div(&num, q.denom())
    }

    pub fn decode(self, raw: &BigInt) -> f64 {
        if raw.is_zero() {
            return 0.0;
        }
        let extra = raw.bits().saturating_sub(64);
        let head = (raw >> extra).to_f64().unwrap_or(0.0);
        ldexp(head, extra as i64 - i64::from(self.bits))
    }

    pub fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b) >> self.bits
    }

    pub fn div(&self, a: &BigInt, b: &BigInt) -> BigInt {
        round_div(&(a << self.bits), b)
    }

    pub fn sqrt(&self, a: &BigInt) -> BigInt {
        debug_assert!(!a.is_negative());
        (a << self.bits).sqrt()
    }

    pub fn dot(&self, a: &[BigInt], b: &[BigInt]) -> BigInt {
        let sum: BigInt = a.iter().zip(b).map(|(x, y)| x * y).sum();
        sum >> self.bits
    }

    /// `exp(z)` for `z <= 0`: halve until small, Taylor series, square back.
    pub fn exp_nonpositive(&self, z: &BigInt) -> BigInt {
        debug_assert!(!z.is_positive());
        let guard = 32;
        let wide = FixedPoint::new(self.bits + guard);
        let mut arg: BigInt = z << guard;
        let limit = wide.one() >> 8;
        let mut halvings = 0;
        while arg.abs() > limit {
            arg >>= 1;
            halvings += 1;
        }
        let mut term = wide.one();
        let mut sum = term.clone();
        let mut k = 1u32;
        while !term.is_zero() {
            term = wide.mul(&term, &arg) / BigInt::from(k);
            sum += &term;
            k += 1;
        }
        for _ in 0..halvings {
            sum = wide.mul(&sum, &sum);
        }
        sum >> guard
    }
}

fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    // Round half away from zero.
    let twice: BigInt = num.abs() << 1u32;
    let q: BigInt = ((twice / den.abs()) + 1) >> 1u32;
    if (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus) {
        -q
    } else {
        q
    }
}

fn ldexp(x: f64, mut e: i64) -> f64 {
    let mut v = x;
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
    }
    v * 2f64.powi(e as i32)
}
