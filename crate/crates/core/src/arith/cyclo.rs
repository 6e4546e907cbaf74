use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{squarefree_part, Rational};
use crate::error::{Error, Result};

/// Integer coefficients of the N-th cyclotomic polynomial, lowest degree first.
///
/// Computed as (x^N - 1) divided exactly by Φ_d for every proper divisor d of N.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic polynomial needs N >= 1");
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in (1..n).filter(|d| n % d == 0) {
        num = exact_div_monic(&num, &cyclotomic_polynomial(d));
    }
    num
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quo = vec![BigInt::zero(); num.len() - dn];
    for i in (0..quo.len()).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quo[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "cyclotomic division left a remainder");
    quo
}

/// The cyclotomic field Q(ζ_N) presented as Q[x]/(Φ_N).
#[derive(Debug)]
pub struct CycloField {
    order: u32,
    modulus: Vec<BigInt>,
    // ζ^k reduced mod Φ_N for k in 0..N; integral because Φ_N is monic
    powers: Vec<Vec<BigInt>>,
}

impl CycloField {
    pub fn new(order: u32) -> Arc<Self> {
        let modulus = cyclotomic_polynomial(order);
        let degree = modulus.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![BigInt::zero(); degree];
        cur[0] = BigInt::one();
        for _ in 0..order {
            powers.push(cur.clone());
            let top = cur[degree - 1].clone();
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = BigInt::zero();
            if !top.is_zero() {
                for (i, m) in modulus.iter().take(degree).enumerate() {
                    cur[i] -= &top * m;
                }
            }
        }
        Arc::new(CycloField {
            order,
            modulus,
            powers,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// deg Φ_N, the Euler totient of N.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn minimal_polynomial(&self) -> &[BigInt] {
        &self.modulus
    }

    pub fn zero(self: &Arc<Self>) -> CycloNum {
        CycloNum {
            field: Arc::clone(self),
            num: vec![BigInt::zero(); self.degree()],
            den: BigInt::one(),
        }
    }

    pub fn one(self: &Arc<Self>) -> CycloNum {
        self.from_int(1)
    }

    pub fn from_rational(self: &Arc<Self>, q: Rational) -> CycloNum {
        let mut z = self.zero();
        let (n, d) = q.into_raw();
        z.num[0] = n;
        z.den = d;
        z.normalize();
        z
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> CycloNum {
        let mut z = self.zero();
        z.num[0] = BigInt::from(n);
        z
    }

    /// ζ_N^k with k taken modulo N.
    pub fn root_of_unity(self: &Arc<Self>, k: i64) -> CycloNum {
        let k = k.rem_euclid(self.order as i64) as usize;
        CycloNum {
            field: Arc::clone(self),
            num: self.powers[k].clone(),
            den: BigInt::one(),
        }
    }

    /// Build an element from coefficients of powers of ζ (any length; reduced mod Φ_N).
    pub fn from_coeffs(self: &Arc<Self>, coeffs: &[Rational]) -> CycloNum {
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut out = self.from_int_coeffs(&ints);
        out.den = den;
        out.normalize();
        out
    }

    fn from_int_coeffs(self: &Arc<Self>, coeffs: &[BigInt]) -> CycloNum {
        let mut out = self.zero();
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = &self.powers[k % self.order as usize];
            for (o, pi) in out.num.iter_mut().zip(p) {
                if !pi.is_zero() {
                    *o += c * pi;
                }
            }
        }
        out
    }

    /// A square root of the rational `q` inside this field, if one exists.
    ///
    /// Built from quadratic Gauss sums and the roots √-1, √±2; the result is checked by squaring.
    pub fn sqrt_rational(self: &Arc<Self>, q: &Rational) -> Option<CycloNum> {
        if q.is_zero() {
            return Some(self.zero());
        }
        let prod = q.numer() * q.denom();
        let n = squarefree_part(&prod);
        let k = (prod.clone() / &n).abs().sqrt();
        debug_assert_eq!(&k * &k * &n, prod);
        let mut root = self.one();
        let mut rest = n.clone();
        let mut m = n.abs();
        if m.is_even() {
            // the factor 2 is absorbed by the unit below
            m /= 2u32;
        }
        let mut p = 3u32;
        while !m.is_one() {
            let pb = BigInt::from(p);
            if (&m % &pb).is_zero() {
                m /= &pb;
                if self.order % p != 0 {
                    return None;
                }
                root = &root * &self.gauss_sum(p);
                let p_star = if p % 4 == 1 { pb } else { -pb };
                rest /= p_star;
            } else {
                p += 2;
            }
        }
        let unit = match rest.to_i64() {
            Some(1) => self.one(),
            Some(-1) if self.order % 4 == 0 => self.root_of_unity(self.order as i64 / 4),
            Some(2) if self.order % 8 == 0 => {
                let e = self.order as i64 / 8;
                &self.root_of_unity(e) + &self.root_of_unity(7 * e)
            }
            Some(-2) if self.order % 8 == 0 => {
                let e = self.order as i64 / 8;
                &self.root_of_unity(e) + &self.root_of_unity(3 * e)
            }
            _ => return None,
        };
        root = &root * &unit;
        let out = root.scale(&Rational::new(k, q.denom().clone()));
        if &out * &out == self.from_rational(q.clone()) {
            Some(out)
        } else {
            None
        }
    }

    fn gauss_sum(self: &Arc<Self>, p: u32) -> CycloNum {
        let step = (self.order / p) as i64;
        let mut g = self.zero();
        for a in 1..p {
            let r = self.root_of_unity(step * a as i64);
            if legendre(a, p) == 1 {
                g = &g + &r;
            } else {
                g = &g - &r;
            }
        }
        g
    }
}

fn legendre(a: u32, p: u32) -> i32 {
    let mut r = 1u64;
    let (mut b, mut e) = (a as u64 % p as u64, (p as u64 - 1) / 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

/// An element of Q(ζ_N): the canonical residue of degree < deg Φ_N.
///
/// Stored as an integer coefficient vector over one positive common denominator, in lowest terms.
#[derive(Clone)]
pub struct CycloNum {
    field: Arc<CycloField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycloNum {
    fn normalize(&mut self) {
        if self.den.is_one() {
            return;
        }
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c /= &g;
            }
            self.den /= &g;
        }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    /// Rational coefficients of 1, ζ, …, ζ^{d-1}.
    pub fn coeffs(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|c| Rational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    fn is_rational(&self) -> bool {
        self.num[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, when the element lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational()
            .then(|| Rational::new(self.num[0].clone(), self.den.clone()))
    }

    fn check_field(&self, other: &CycloNum) -> Result<()> {
        if self.field.order == other.field.order {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field.order, other.field.order))
        }
    }

    fn combine(&self, other: &CycloNum, negate: bool) -> CycloNum {
        let (num, den) = if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| if negate { a - b } else { a + b })
                .collect();
            (num, self.den.clone())
        } else {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| {
                    let x = a * &other.den;
                    let y = b * &self.den;
                    if negate {
                        x - y
                    } else {
                        x + y
                    }
                })
                .collect();
            (num, &self.den * &other.den)
        };
        let mut out = CycloNum {
            field: Arc::clone(&self.field),
            num,
            den,
        };
        out.normalize();
        out
    }

    pub fn checked_add(&self, other: &CycloNum) -> Result<CycloNum> {
        self.check_field(other)?;
        Ok(self.combine(other, false))
    }

    pub fn checked_sub(&self, other: &CycloNum) -> Result<CycloNum> {
        self.check_field(other)?;
        Ok(self.combine(other, true))
    }

    pub fn checked_mul(&self, other: &CycloNum) -> Result<CycloNum> {
        self.check_field(other)?;
        if self.is_rational() {
            return Ok(other.scale_parts(&self.num[0], &self.den));
        }
        if other.is_rational() {
            return Ok(self.scale_parts(&other.num[0], &other.den));
        }
        let d = self.field.degree();
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let m = &self.field.modulus;
        for i in (d..prod.len()).rev() {
            let c = std::mem::take(&mut prod[i]);
            if c.is_zero() {
                continue;
            }
            for (j, mj) in m.iter().take(d).enumerate() {
                if !mj.is_zero() {
                    prod[i - d + j] -= &c * mj;
                }
            }
        }
        prod.truncate(d);
        let mut out = CycloNum {
            field: Arc::clone(&self.field),
            num: prod,
            den: &self.den * &other.den,
        };
        out.normalize();
        Ok(out)
    }

    fn scale_parts(&self, n: &BigInt, d: &BigInt) -> CycloNum {
        if n.is_zero() {
            return self.field.zero();
        }
        let mut out = CycloNum {
            field: Arc::clone(&self.field),
            num: self.num.iter().map(|c| c * n).collect(),
            den: &self.den * d,
        };
        out.normalize();
        out
    }

    pub fn scale(&self, q: &Rational) -> CycloNum {
        self.scale_parts(q.numer(), q.denom())
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_N.
    pub fn invert(&self) -> Result<CycloNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(self
                .field
                .from_rational(Rational::new(self.den.clone(), self.num[0].clone())));
        }
        let modulus: Vec<Rational> = self
            .field
            .modulus
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        // invariant: s_i * a ≡ r_i (mod Φ)
        let (mut r0, mut r1) = (modulus, trim(self.coeffs()));
        let (mut s0, mut s1) = (vec![], vec![Rational::one()]);
        while r1.len() > 1 {
            let (q, r) = qpoly_divrem(&r0, &r1);
            let s2 = qpoly_sub(&s0, &qpoly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant since Φ_N is irreducible
        let c = r1[0].recip();
        Ok(self.field.from_coeffs(&s1).scale(&c))
    }

    /// Complex conjugation ζ ↦ ζ^{N-1}.
    pub fn conjugate(&self) -> CycloNum {
        let n = self.field.order as i64;
        let mut spread = vec![BigInt::zero(); self.field.order as usize];
        for (i, c) in self.num.iter().enumerate() {
            spread[((n - 1) * i as i64).rem_euclid(n) as usize] = c.clone();
        }
        let mut out = self.field.from_int_coeffs(&spread);
        out.den = self.den.clone();
        out
    }

    pub fn pow(&self, mut e: u32) -> CycloNum {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Map into Q(ζ_M): requires N | M, or the element to be rational.
    pub fn embed(&self, target: &Arc<CycloField>) -> Result<CycloNum> {
        if self.is_rational() {
            let mut z = target.zero();
            z.num[0] = self.num[0].clone();
            z.den = self.den.clone();
            return Ok(z);
        }
        if target.order % self.field.order != 0 {
            return Err(Error::FieldMismatch(self.field.order, target.order));
        }
        let step = (target.order / self.field.order) as usize;
        let mut spread = vec![BigInt::zero(); step * self.num.len()];
        for (i, c) in self.num.iter().enumerate() {
            spread[i * step] = c.clone();
        }
        let mut out = target.from_int_coeffs(&spread);
        out.den = self.den.clone();
        Ok(out)
    }
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn qpoly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn qpoly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn qpoly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    if rem.len() <= db {
        return (vec![Rational::zero()], trim(rem));
    }
    let lead = b[db].recip();
    let mut quo = vec![Rational::zero(); rem.len() - db];
    for i in (0..quo.len()).rev() {
        let c = &rem[i + db] * &lead;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        quo[i] = c;
    }
    rem.truncate(db.max(1));
    (quo, trim(rem))
}

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl Eq for CycloField {}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.den == other.den && self.num == other.num
    }
}

impl Eq for CycloNum {}

impl Hash for CycloNum {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.order.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a CycloNum> for &'a CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: &'a CycloNum) -> CycloNum {
                self.$checked(rhs).expect("cyclotomic operands from different fields")
            }
        }
        impl $tr<CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: CycloNum) -> CycloNum {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum {
            field: Arc::clone(&self.field),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

impl fmt::Display for CycloNum {
    /// Written in the literal grammar accepted by the expression parser, e.g. `1/2 - zeta(8)^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let root = match k {
                0 => String::new(),
                1 => format!("zeta({})", self.field.order),
                _ => format!("zeta({})^{}", self.field.order, k),
            };
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "{root}")?,
                _ => write!(f, "{mag}*{root}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNum({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn poly(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), poly(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(5), poly(&[1, 1, 1, 1, 1]));
        // Φ8 = (x^8 - 1) / ((x - 1)(x + 1)(x^2 + 1))
        assert_eq!(cyclotomic_polynomial(8), poly(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic_polynomial(12), poly(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn degree_is_totient() {
        let phi = |n: u32| (1..=n).filter(|k| num_integer::gcd(*k, n) == 1).count();
        for n in 1..40 {
            assert_eq!(CycloField::new(n).degree(), phi(n), "N = {n}");
        }
    }

    #[test]
    fn roots_of_unity() {
        let f4 = CycloField::new(4);
        assert_eq!(f4.root_of_unity(2), f4.from_int(-1));
        let f8 = CycloField::new(8);
        assert_eq!(f8.root_of_unity(4), f8.from_int(-1));
        let f5 = CycloField::new(5);
        assert!(f5.root_of_unity(5).is_one());
        assert_eq!(f5.root_of_unity(-1), f5.root_of_unity(4));
    }

    #[test]
    fn inversion_and_conjugation() {
        let f4 = CycloField::new(4);
        let i = f4.root_of_unity(1);
        let a = &f4.one() + &i;
        let expect = (&f4.one() - &i).scale(&rat(1, 2));
        assert_eq!(a.invert().unwrap(), expect);
        assert!(matches!(f4.zero().invert(), Err(Error::DivisionByZero)));

        let f8 = CycloField::new(8);
        let z = f8.root_of_unity(1);
        assert!((&z.conjugate() * &z).is_one());
    }

    #[test]
    fn golden_ratio_identity() {
        let f5 = CycloField::new(5);
        let s = &f5.root_of_unity(1) + &f5.root_of_unity(4);
        let e = &(&(&s * &s) + &s) - &f5.one();
        assert!(e.is_zero());
        let sqrt5 = &s.scale(&int(2)) + &f5.one();
        assert_eq!(&sqrt5 * &sqrt5, f5.from_int(5));
    }

    #[test]
    fn sqrt_two_in_q_zeta8() {
        let f8 = CycloField::new(8);
        let s = &f8.root_of_unity(1) + &f8.root_of_unity(7);
        assert_eq!(&s * &s, f8.from_int(2));
    }

    #[test]
    fn rational_square_roots() {
        let f12 = CycloField::new(12);
        let r = f12.sqrt_rational(&int(-108)).unwrap();
        assert_eq!(&r * &r, f12.from_int(-108));
        assert!(CycloField::new(8).sqrt_rational(&int(-3)).is_none());
        let f20 = CycloField::new(20);
        let r = f20.sqrt_rational(&rat(-5, 9)).unwrap();
        assert_eq!(&r * &r, f20.from_rational(rat(-5, 9)));
        let f24 = CycloField::new(24);
        for q in [2, -2, 3, -3, 6, -6, -1] {
            let r = f24.sqrt_rational(&int(q)).unwrap();
            assert_eq!(&r * &r, f24.from_int(q), "q = {q}");
        }
    }

    #[test]
    fn field_mismatch_is_an_error() {
        let a = CycloField::new(5).root_of_unity(1);
        let b = CycloField::new(8).root_of_unity(1);
        assert!(matches!(a.checked_add(&b), Err(Error::FieldMismatch(5, 8))));
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn embedding_preserves_products() {
        let f4 = CycloField::new(4);
        let f12 = CycloField::new(12);
        let i = f4.root_of_unity(1);
        let e = i.embed(&f12).unwrap();
        assert_eq!(&e * &e, f12.from_int(-1));
        assert_eq!(e, f12.root_of_unity(3));
        assert!(CycloField::new(8).root_of_unity(1).embed(&f12).is_err());
    }

    #[test]
    fn display_round_trips_through_literal_grammar() {
        let f8 = CycloField::new(8);
        let a = &f8.root_of_unity(3).scale(&rat(-2, 3)) + &f8.from_rational(rat(1, 2));
        assert_eq!(a.to_string(), "1/2 - 2/3*zeta(8)^3");
    }
}
