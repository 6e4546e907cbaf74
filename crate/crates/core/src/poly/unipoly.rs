use std::fmt;
use std::sync::Arc;

use crate::arith::{CycloField, CycloNum, Rational};
use crate::error::{Error, Result};

/// Dense univariate polynomial over Q(ζ_N), lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: Arc<CycloField>,
    coeffs: Vec<CycloNum>,
}

impl UniPoly {
    pub fn new(field: &Arc<CycloField>, coeffs: Vec<CycloNum>) -> Self {
        let mut p = UniPoly {
            field: Arc::clone(field),
            coeffs,
        };
        p.trim();
        p
    }

    pub fn zero(field: &Arc<CycloField>) -> Self {
        UniPoly::new(field, Vec::new())
    }

    pub fn one(field: &Arc<CycloField>) -> Self {
        UniPoly::new(field, vec![field.one()])
    }

    pub fn from_ints(field: &Arc<CycloField>, coeffs: &[i64]) -> Self {
        UniPoly::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    /// The linear polynomial x - a.
    pub fn linear_root(a: &CycloNum) -> Self {
        let f = a.field();
        UniPoly::new(f, vec![-a, f.one()])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(CycloNum::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[CycloNum] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&CycloNum> {
        self.coeffs.last()
    }

    /// Order of vanishing at x = 0; `None` for the zero polynomial.
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Divide by x^k (caller guarantees divisibility).
    pub fn shift_down(&self, k: usize) -> UniPoly {
        UniPoly::new(&self.field, self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = l.invert().expect("nonzero leading coefficient");
                UniPoly::new(&self.field, self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn derivative(&self) -> UniPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&Rational::from_integer((i as i64).into())))
            .collect();
        UniPoly::new(&self.field, coeffs)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        UniPoly::new(&self.field, coeffs)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly::new(&self.field, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        UniPoly::new(&self.field, out)
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        (0..e).fold(UniPoly::one(&self.field), |acc, _| acc.mul(self))
    }

    pub fn div_rem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        if self.degree().is_none_or(|n| n < dd) {
            return Ok((UniPoly::zero(&self.field), self.clone()));
        }
        let inv = d.coeffs[dd].invert()?;
        let mut rem = self.coeffs.clone();
        let mut quo = vec![self.field.zero(); rem.len() - dd];
        for i in (0..quo.len()).rev() {
            let c = &rem[i + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &(&c * dj);
            }
            quo[i] = c;
        }
        rem.truncate(dd);
        Ok((UniPoly::new(&self.field, quo), UniPoly::new(&self.field, rem)))
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn div_exact(&self, d: &UniPoly) -> Result<UniPoly> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::Invalid("inexact polynomial division".into()))
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &CycloNum) -> CycloNum {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Yun's squarefree decomposition: monic squarefree, pairwise coprime factors g_i with
    /// f = lc · Π g_i^i. Returned as (multiplicity, factor) with nonconstant factors only.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(u32, UniPoly)>> {
        if self.is_zero() {
            return Err(Error::Invalid("squarefree decomposition of zero".into()));
        }
        let mut out = Vec::new();
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_exact(&a0)?;
        let mut c = fp.div_exact(&a0)?;
        let mut d = c.sub(&b.derivative());
        let mut i = 1u32;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((i, a.clone()));
            }
            b = b.div_exact(&a)?;
            c = d.div_exact(&a)?;
            d = c.sub(&b.derivative());
            i += 1;
        }
        Ok(out)
    }
}

/// Degree and multiplicity of one factor in a squarefree decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
pub struct RootClass {
    pub degree: usize,
    pub multiplicity: u32,
}

/// Multiplicity structure of f without extracting roots: one entry per squarefree factor.
pub fn multiplicity_pattern(f: &UniPoly) -> Result<Vec<RootClass>> {
    Ok(f.squarefree_decomposition()?
        .into_iter()
        .map(|(m, g)| RootClass {
            degree: g.degree().unwrap_or(0),
            multiplicity: m,
        })
        .collect())
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}
