use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::arith::{CycloField, CycloNum, Rational};
use crate::error::{Error, Result};

/// 2×2 matrix acting on the coordinate pair (Z₁, Z₂).
pub type Mat2 = [[CycloNum; 2]; 2];

/// Sparse polynomial in two variables Z₁, Z₂ (also used for chart coordinates u, v).
///
/// Keys are exponent pairs `(a, b)` for Z₁^a Z₂^b; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct BiPoly {
    field: Arc<CycloField>,
    terms: BTreeMap<(u32, u32), CycloNum>,
}

impl BiPoly {
    pub fn zero(field: &Arc<CycloField>) -> Self {
        BiPoly {
            field: Arc::clone(field),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: CycloNum) -> Self {
        let mut p = BiPoly::zero(c.field());
        p.add_term(0, 0, c);
        p
    }

    pub fn monomial(field: &Arc<CycloField>, a: u32, b: u32) -> Self {
        let mut p = BiPoly::zero(field);
        p.add_term(a, b, field.one());
        p
    }

    /// Build from `(a, b, c)` triples with integer coefficients.
    pub fn from_int_terms(field: &Arc<CycloField>, terms: &[(u32, u32, i64)]) -> Self {
        let mut p = BiPoly::zero(field);
        for &(a, b, c) in terms {
            p.add_term(a, b, field.from_int(c));
        }
        p
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &CycloNum)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, a: u32, b: u32) -> Option<&CycloNum> {
        self.terms.get(&(a, b))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, a: u32, b: u32, c: CycloNum) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&(a, b)) {
            Some(old) => {
                let s = &*old + &c;
                if s.is_zero() {
                    self.terms.remove(&(a, b));
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert((a, b), c);
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).max()
    }

    /// Lowest total degree of a monomial; `None` for the zero polynomial.
    pub fn low_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).min()
    }

    /// The common degree when every monomial has the same total degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.degree()?;
        self.terms.keys().all(|(a, b)| a + b == d).then_some(d)
    }

    /// Sum of the terms of lowest total degree.
    pub fn lowest_form(&self) -> BiPoly {
        let mut out = BiPoly::zero(&self.field);
        if let Some(d) = self.low_degree() {
            for (&(a, b), c) in &self.terms {
                if a + b == d {
                    out.terms.insert((a, b), c.clone());
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &CycloNum) -> BiPoly {
        let mut out = BiPoly::zero(&self.field);
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            out.terms.insert(*k, v * c);
        }
        out
    }

    pub fn checked_add(&self, other: &BiPoly) -> Result<BiPoly> {
        same_field(&self.field, &other.field)?;
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add_term(a, b, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &BiPoly) -> Result<BiPoly> {
        same_field(&self.field, &other.field)?;
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add_term(a, b, -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &BiPoly) -> Result<BiPoly> {
        same_field(&self.field, &other.field)?;
        let mut acc: BTreeMap<(u32, u32), CycloNum> = BTreeMap::new();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &other.terms {
                let p = c1 * c2;
                let key = (a1 + a2, b1 + b2);
                match acc.get_mut(&key) {
                    Some(old) => *old = &*old + &p,
                    None => {
                        acc.insert(key, p);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(BiPoly {
            field: Arc::clone(&self.field),
            terms: acc,
        })
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        let mut acc = BiPoly::constant(self.field.one());
        let mut base = self.clone();
        let mut e = e;
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

    /// Partial derivative in the first (`var = 0`) or second (`var = 1`) variable.
    pub fn derivative(&self, var: usize) -> BiPoly {
        let mut out = BiPoly::zero(&self.field);
        for (&(a, b), c) in &self.terms {
            let e = if var == 0 { a } else { b };
            if e == 0 {
                continue;
            }
            let key = if var == 0 { (a - 1, b) } else { (a, b - 1) };
            out.add_term(key.0, key.1, c.scale(&Rational::from_integer(e.into())));
        }
        out
    }

    /// Determinant of the 2×2 Hessian matrix.
    pub fn hessian_det(&self) -> BiPoly {
        let p11 = self.derivative(0).derivative(0);
        let p22 = self.derivative(1).derivative(1);
        let p12 = self.derivative(0).derivative(1);
        &(&p11 * &p22) - &(&p12 * &p12)
    }

    /// Determinant of the Jacobian matrix of (self, other).
    pub fn jacobian_det(&self, other: &BiPoly) -> BiPoly {
        let a = &self.derivative(0) * &other.derivative(1);
        let b = &self.derivative(1) * &other.derivative(0);
        &a - &b
    }

    /// P(M·(Z₁, Z₂)ᵀ), expanded exactly.
    pub fn substitute_linear(&self, m: &Mat2) -> Result<BiPoly> {
        for row in m {
            for e in row {
                if e.field().order() != self.field.order() {
                    return Err(Error::FieldMismatch(self.field.order(), e.field().order()));
                }
            }
        }
        let l1 = linear_form(&m[0][0], &m[0][1]);
        let l2 = linear_form(&m[1][0], &m[1][1]);
        let max_a = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        let max_b = self.terms.keys().map(|k| k.1).max().unwrap_or(0);
        let p1 = powers(&l1, max_a, &self.field);
        let p2 = powers(&l2, max_b, &self.field);
        let mut out = BiPoly::zero(&self.field);
        for (&(a, b), c) in &self.terms {
            let t = (&p1[a as usize] * &p2[b as usize]).scale(c);
            for (&(x, y), v) in &t.terms {
                out.add_term(x, y, v.clone());
            }
        }
        Ok(out)
    }

    pub fn eval(&self, x: &CycloNum, y: &CycloNum) -> CycloNum {
        let mut acc = self.field.zero();
        for (&(a, b), c) in &self.terms {
            acc = &acc + &(&(c * &x.pow(a)) * &y.pow(b));
        }
        acc
    }

    /// Taylor shift: the polynomial Q(s, t) = P(x + s, y + t).
    pub fn translate(&self, x: &CycloNum, y: &CycloNum) -> BiPoly {
        let sx = {
            let mut p = BiPoly::monomial(&self.field, 1, 0);
            p.add_term(0, 0, x.clone());
            p
        };
        let sy = {
            let mut p = BiPoly::monomial(&self.field, 0, 1);
            p.add_term(0, 0, y.clone());
            p
        };
        let max_a = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        let max_b = self.terms.keys().map(|k| k.1).max().unwrap_or(0);
        let px = powers(&sx, max_a, &self.field);
        let py = powers(&sy, max_b, &self.field);
        let mut out = BiPoly::zero(&self.field);
        for (&(a, b), c) in &self.terms {
            let t = (&px[a as usize] * &py[b as usize]).scale(c);
            for (&(i, j), v) in &t.terms {
                out.add_term(i, j, v.clone());
            }
        }
        out
    }

    /// Multiplicity of the curve P = 0 at the point (x, y): the lowest total degree after translation.
    ///
    /// Zero when P does not vanish there; `None` for the zero polynomial.
    pub fn point_multiplicity(&self, x: &CycloNum, y: &CycloNum) -> Option<u32> {
        self.translate(x, y).low_degree()
    }

    /// Largest (a, b) such that Z₁^a Z₂^b divides P.
    pub fn monomial_content(&self) -> (u32, u32) {
        let a = self.terms.keys().map(|k| k.0).min().unwrap_or(0);
        let b = self.terms.keys().map(|k| k.1).min().unwrap_or(0);
        (a, b)
    }

    /// Divide by Z₁^a Z₂^b; errors if the monomial does not divide P.
    pub fn div_monomial(&self, a: u32, b: u32) -> Result<BiPoly> {
        let mut out = BiPoly::zero(&self.field);
        for (&(x, y), c) in &self.terms {
            if x < a || y < b {
                return Err(Error::Invalid(format!("monomial Z1^{a} Z2^{b} does not divide")));
            }
            out.terms.insert((x - a, y - b), c.clone());
        }
        Ok(out)
    }

    /// Exchange the two variables.
    pub fn swap_vars(&self) -> BiPoly {
        BiPoly {
            field: Arc::clone(&self.field),
            terms: self.terms.iter().map(|(&(a, b), c)| ((b, a), c.clone())).collect(),
        }
    }

    /// Map every coefficient into a larger cyclotomic field.
    pub fn embed(&self, target: &Arc<CycloField>) -> Result<BiPoly> {
        let mut out = BiPoly::zero(target);
        for (&k, c) in &self.terms {
            out.terms.insert(k, c.embed(target)?);
        }
        Ok(out)
    }

    /// Coefficient of v^b as a dense polynomial in the first variable.
    pub fn coefficient_in_second(&self, b: u32) -> Vec<CycloNum> {
        let deg = self
            .terms
            .keys()
            .filter(|k| k.1 == b)
            .map(|k| k.0)
            .max();
        let Some(deg) = deg else {
            return Vec::new();
        };
        let mut out = vec![self.field.zero(); deg as usize + 1];
        for (&(a, bb), c) in &self.terms {
            if bb == b {
                out[a as usize] = c.clone();
            }
        }
        out
    }

    /// Degree in the second variable.
    pub fn degree_in_second(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }
}

fn same_field(a: &Arc<CycloField>, b: &Arc<CycloField>) -> Result<()> {
    if a.order() == b.order() {
        Ok(())
    } else {
        Err(Error::FieldMismatch(a.order(), b.order()))
    }
}

fn linear_form(c1: &CycloNum, c2: &CycloNum) -> BiPoly {
    let mut p = BiPoly::zero(c1.field());
    p.add_term(1, 0, c1.clone());
    p.add_term(0, 1, c2.clone());
    p
}

fn powers(base: &BiPoly, max: u32, field: &Arc<CycloField>) -> Vec<BiPoly> {
    let mut out = Vec::with_capacity(max as usize + 1);
    out.push(BiPoly::constant(field.one()));
    for i in 0..max as usize {
        let next = &out[i] * base;
        out.push(next);
    }
    out
}

macro_rules! forward_poly_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> std::ops::$tr<&'a BiPoly> for &'a BiPoly {
            type Output = BiPoly;
            fn $method(self, rhs: &'a BiPoly) -> BiPoly {
                self.$checked(rhs).expect("polynomials over different fields")
            }
        }
    };
}

forward_poly_op!(Add, add, checked_add);
forward_poly_op!(Sub, sub, checked_sub);
forward_poly_op!(Mul, mul, checked_mul);

impl std::ops::Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            field: Arc::clone(&self.field),
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(a, b), c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono = match (a, b) {
                (0, 0) => String::new(),
                _ => {
                    let mut s = Vec::new();
                    if a > 0 {
                        s.push(if a == 1 { "Z1".to_string() } else { format!("Z1^{a}") });
                    }
                    if b > 0 {
                        s.push(if b == 1 { "Z2".to_string() } else { format!("Z2^{b}") });
                    }
                    s.join("*")
                }
            };
            let is_one = c.is_one();
            match (mono.is_empty(), is_one) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "({c})*{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly[Q(zeta_{})]({self})", self.field.order())
    }
}

/// The 2×2 identity over a field.
pub fn identity(field: &Arc<CycloField>) -> Mat2 {
    [
        [field.one(), field.zero()],
        [field.zero(), field.one()],
    ]
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn mat_det(a: &Mat2) -> CycloNum {
    &(&a[0][0] * &a[1][1]) - &(&a[0][1] * &a[1][0])
}

pub fn mat_is_scalar(a: &Mat2, s: i64) -> bool {
    let f = a[0][0].field();
    a[0][1].is_zero() && a[1][0].is_zero() && a[0][0] == f.from_int(s) && a[1][1] == f.from_int(s)
}
