//! Exact scalars: arbitrary-precision rationals and cyclotomic fields Q(ζ_N).

mod cyclo;

pub use cyclo::{cyclotomic_polynomial, CycloField, CycloNum};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Squarefree part of a nonzero integer, keeping its sign.
pub(crate) fn squarefree_part(n: &BigInt) -> BigInt {
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut m = n.abs();
    let mut out = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= &p;
        }
        p += 1;
    }
    out * m * sign
}

/// Smallest N such that Q(ζ_N) contains √q, for a nonzero rational q.
pub fn sqrt_conductor(q: &Rational) -> u32 {
    assert!(!q.is_zero(), "square root conductor of zero");
    let n = squarefree_part(&(q.numer() * q.denom()));
    if n.is_one() {
        return 1;
    }
    let a: u32 = n.abs().try_into().expect("squarefree part fits in u32");
    let rem: u32 = ((&n % 4i32 + 4i32) % 4i32).try_into().unwrap_or(0);
    if rem == 1 {
        a
    } else {
        4 * a
    }
}

pub(crate) fn lcm_u32(a: u32, b: u32) -> u32 {
    num_integer::Integer::lcm(&a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_part(&BigInt::from(-108)), BigInt::from(-3));
        assert_eq!(squarefree_part(&BigInt::from(50)), BigInt::from(2));
        assert_eq!(squarefree_part(&BigInt::from(1)), BigInt::from(1));
    }

    #[test]
    fn conductors() {
        assert_eq!(sqrt_conductor(&int(-108)), 3);
        assert_eq!(sqrt_conductor(&int(-1)), 4);
        assert_eq!(sqrt_conductor(&int(2)), 8);
        assert_eq!(sqrt_conductor(&int(5)), 5);
        assert_eq!(sqrt_conductor(&rat(9, 4)), 1);
    }
}
