//! Basic invariants X, Y, Z of each group, their syzygy, and expansion of polynomials in X, Y, Z.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{lcm_u32, rat, CycloField, CycloNum, Rational};
use crate::error::{Error, Result};
use crate::groups::{GroupData, GroupKind};
use crate::linalg::nullspace;
use crate::poly::BiPoly;

/// Z₁Z₂(Z₁⁴ − Z₂⁴).
pub fn f6(field: &Arc<CycloField>) -> BiPoly {
    BiPoly::from_int_terms(field, &[(5, 1, 1), (1, 5, -1)])
}

/// Z₁⁸ + 14Z₁⁴Z₂⁴ + Z₂⁸.
pub fn f8(field: &Arc<CycloField>) -> BiPoly {
    BiPoly::from_int_terms(field, &[(8, 0, 1), (4, 4, 14), (0, 8, 1)])
}

/// Z₁¹² − 33Z₁⁸Z₂⁴ − 33Z₁⁴Z₂⁸ + Z₂¹².
pub fn f12(field: &Arc<CycloField>) -> BiPoly {
    BiPoly::from_int_terms(field, &[(12, 0, 1), (8, 4, -33), (4, 8, -33), (0, 12, 1)])
}

/// Z₁Z₂(Z₁¹⁰ + 11Z₁⁵Z₂⁵ − Z₂¹⁰).
pub fn big_f12(field: &Arc<CycloField>) -> BiPoly {
    BiPoly::from_int_terms(field, &[(11, 1, 1), (6, 6, 11), (1, 11, -1)])
}

/// The Hessian determinant of F₁₂.
pub fn big_f20(field: &Arc<CycloField>) -> BiPoly {
    big_f12(field).hessian_det()
}

/// The three basic invariants of a group.
#[derive(Clone, Debug)]
pub struct InvariantTriple {
    pub kind: GroupKind,
    pub x: BiPoly,
    pub y: BiPoly,
    pub z: BiPoly,
    pub degrees: (u32, u32, u32),
    /// Which scalar factors of the classical forms were dropped, as text.
    pub normalization: String,
}

impl InvariantTriple {
    pub fn field(&self) -> &Arc<CycloField> {
        self.x.field()
    }

    pub fn get(&self, i: usize) -> &BiPoly {
        match i {
            0 => &self.x,
            1 => &self.y,
            _ => &self.z,
        }
    }
}

/// Table degrees of (X, Y, Z).
pub fn invariant_degrees(kind: GroupKind) -> (u32, u32, u32) {
    match kind {
        GroupKind::A(r) => (2, r + 1, r + 1),
        GroupKind::D(r) => (4, 2 * r - 4, 2 * r - 2),
        GroupKind::E6 => (6, 8, 12),
        GroupKind::E7 => (8, 12, 18),
        GroupKind::E8 => (12, 20, 30),
    }
}

pub fn invariant_triple(kind: GroupKind) -> Result<InvariantTriple> {
    kind.validate()?;
    let field = CycloField::new(kind.field_order());
    let half = field.from_rational(rat(1, 2));
    let (x, y, z, norm) = match kind {
        GroupKind::A(r) => (
            BiPoly::monomial(&field, 1, 1),
            BiPoly::monomial(&field, r + 1, 0),
            BiPoly::monomial(&field, 0, r + 1),
            "none",
        ),
        GroupKind::D(r) => {
            let n = 2 * r - 4;
            let y = BiPoly::from_int_terms(&field, &[(n, 0, 1), (0, n, 1)]).scale(&half);
            let z = BiPoly::from_int_terms(&field, &[(n + 1, 1, 1), (1, n + 1, -1)]).scale(&half);
            (BiPoly::monomial(&field, 2, 2), y, z, "none")
        }
        GroupKind::E6 => (
            f6(&field),
            f8(&field),
            f12(&field),
            "X = f6; Y = f8 (drops -1/(3*cbrt(4))); Z = f12 (drops 1/(6*sqrt(3)))",
        ),
        GroupKind::E7 => {
            let s = f6(&field);
            (
                f8(&field),
                &s * &s,
                &s * &f12(&field),
                "X = f8 (drops -1/cbrt(3)); Y = f6^2 (drops -6); Z = f6*f12 (drops i*sqrt(2))",
            )
        }
        GroupKind::E8 => {
            let a = big_f12(&field);
            let b = big_f20(&field);
            let c = a.jacobian_det(&b);
            (
                a,
                b,
                c,
                "X = F12 (drops -fifth_root(1728)); Y = F20 (drops 1/121); Z = Jacobian(F12, F20) (drops 1/20)",
            )
        }
    };
    Ok(InvariantTriple {
        kind,
        x,
        y,
        z,
        degrees: invariant_degrees(kind),
        normalization: norm.to_string(),
    })
}

/// Result of checking P(g·z) = P(z) for all group elements.
#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub checked: usize,
    /// Human-readable failures: which polynomial failed under which element index.
    pub failures: Vec<String>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Whether a single polynomial is fixed by every element of the group.
pub fn is_invariant(p: &BiPoly, g: &GroupData) -> Result<bool> {
    let p = if p.field().order() == g.field.order() {
        p.clone()
    } else {
        p.embed(&g.field)?
    };
    let all = g
        .elements
        .par_iter()
        .map(|m| p.substitute_linear(m).map(|q| q == p))
        .collect::<Result<Vec<bool>>>()?;
    Ok(all.into_iter().all(|b| b))
}

pub fn verify_invariance(t: &InvariantTriple, g: &GroupData) -> Result<InvarianceReport> {
    if t.kind != g.kind {
        return Err(Error::Invalid(format!("triple for {} against group {}", t.kind, g.kind)));
    }
    verify_polys_invariant(&[("X", &t.x), ("Y", &t.y), ("Z", &t.z)], g)
}

/// Check a list of named polynomials against every group element.
pub fn verify_polys_invariant(polys: &[(&str, &BiPoly)], g: &GroupData) -> Result<InvarianceReport> {
    let jobs: Vec<(usize, usize)> = (0..polys.len())
        .flat_map(|p| (0..g.order()).map(move |e| (p, e)))
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(p, e)| {
            let q = polys[p].1.substitute_linear(&g.elements[e])?;
            Ok((p, e, q == *polys[p].1))
        })
        .collect::<Result<Vec<_>>>()?;
    let failures = results
        .into_iter()
        .filter(|r| !r.2)
        .map(|(p, e, _)| format!("{} not fixed by element #{e}", polys[p].0))
        .collect();
    Ok(InvarianceReport {
        checked: jobs.len(),
        failures,
    })
}

/// A polynomial in the abstract symbols X, Y, Z.
#[derive(Clone, PartialEq, Eq)]
pub struct XyzPoly {
    field: Arc<CycloField>,
    terms: BTreeMap<(u32, u32, u32), CycloNum>,
}

impl XyzPoly {
    pub fn zero(field: &Arc<CycloField>) -> Self {
        XyzPoly {
            field: Arc::clone(field),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: CycloNum) -> Self {
        let mut p = XyzPoly::zero(c.field());
        p.add_term((0, 0, 0), c);
        p
    }

    pub fn monomial(field: &Arc<CycloField>, e: (u32, u32, u32)) -> Self {
        let mut p = XyzPoly::zero(field);
        p.add_term(e, field.one());
        p
    }

    /// The symbol X (0), Y (1) or Z (2).
    pub fn var(field: &Arc<CycloField>, i: usize) -> Self {
        let e = match i {
            0 => (1, 0, 0),
            1 => (0, 1, 0),
            _ => (0, 0, 1),
        };
        XyzPoly::monomial(field, e)
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32, u32), &CycloNum)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Option<&CycloNum> {
        self.terms.get(&(0, 0, 0))
    }

    pub fn add_term(&mut self, e: (u32, u32, u32), c: CycloNum) {
        if c.is_zero() {
            return;
        }
        let c = if c.field().order() == self.field.order() {
            c
        } else {
            let target = CycloField::new(lcm_u32(c.field().order(), self.field.order()));
            *self = self.embed(&target).expect("divides lcm");
            c.embed(&target).expect("divides lcm")
        };
        match self.terms.get_mut(&e) {
            Some(old) => {
                let s = &*old + &c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn embed(&self, target: &Arc<CycloField>) -> Result<XyzPoly> {
        let mut out = XyzPoly::zero(target);
        for (&e, c) in &self.terms {
            out.terms.insert(e, c.embed(target)?);
        }
        Ok(out)
    }

    fn common_field(&self, other: &XyzPoly) -> (XyzPoly, XyzPoly) {
        if self.field.order() == other.field.order() {
            return (self.clone(), other.clone());
        }
        let f = CycloField::new(lcm_u32(self.field.order(), other.field.order()));
        (self.embed(&f).expect("lcm"), other.embed(&f).expect("lcm"))
    }

    pub fn add(&self, other: &XyzPoly) -> XyzPoly {
        let (mut a, b) = self.common_field(other);
        for (&e, c) in &b.terms {
            a.add_term(e, c.clone());
        }
        a
    }

    pub fn neg(&self) -> XyzPoly {
        XyzPoly {
            field: Arc::clone(&self.field),
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &XyzPoly) -> XyzPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &XyzPoly) -> XyzPoly {
        let (a, b) = self.common_field(other);
        let mut out = XyzPoly::zero(&a.field);
        for (&(x1, y1, z1), c1) in &a.terms {
            for (&(x2, y2, z2), c2) in &b.terms {
                out.add_term((x1 + x2, y1 + y2, z1 + z2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> XyzPoly {
        (0..e).fold(XyzPoly::constant(self.field.one()), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, c: &CycloNum) -> XyzPoly {
        self.mul(&XyzPoly::constant(c.clone()))
    }

    /// Weighted degree with weights (dX, dY, dZ); `None` when not weighted-homogeneous.
    pub fn weighted_degree(&self, w: (u32, u32, u32)) -> Option<u32> {
        let mut degs = self.terms.keys().map(|&(a, b, c)| a * w.0 + b * w.1 + c * w.2);
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }
}

impl fmt::Display for XyzPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(a, b, c), coeff) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut parts: Vec<String> = Vec::new();
            for (sym, e) in [("X", a), ("Y", b), ("Z", c)] {
                match e {
                    0 => {}
                    1 => parts.push(sym.to_string()),
                    _ => parts.push(format!("{sym}^{e}")),
                }
            }
            if parts.is_empty() {
                write!(f, "({coeff})")?;
            } else if coeff.is_one() {
                write!(f, "{}", parts.join("*"))?;
            } else {
                write!(f, "({coeff})*{}", parts.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for XyzPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XyzPoly({self})")
    }
}

/// Field holding both the expression's coefficients and the triple.
pub fn expansion_field(expr: &XyzPoly, t: &InvariantTriple) -> Arc<CycloField> {
    let n = lcm_u32(expr.field().order(), t.field().order());
    if n == t.field().order() {
        Arc::clone(t.field())
    } else {
        CycloField::new(n)
    }
}

/// Substitute the concrete invariants for X, Y, Z and expand in Z₁, Z₂.
pub fn expand_xyz(expr: &XyzPoly, t: &InvariantTriple) -> Result<BiPoly> {
    let field = expansion_field(expr, t);
    expand_xyz_in(expr, t, &field)
}

/// As [`expand_xyz`], over a given field containing both coefficient fields.
pub fn expand_xyz_in(expr: &XyzPoly, t: &InvariantTriple, field: &Arc<CycloField>) -> Result<BiPoly> {
    let expr = expr.embed(field)?;
    let base = [t.x.embed(field)?, t.y.embed(field)?, t.z.embed(field)?];
    let mut max = [0u32; 3];
    for &(a, b, c) in expr.terms.keys() {
        max[0] = max[0].max(a);
        max[1] = max[1].max(b);
        max[2] = max[2].max(c);
    }
    let pows: Vec<Vec<BiPoly>> = (0..3)
        .map(|i| {
            let mut v = vec![BiPoly::constant(field.one())];
            for k in 0..max[i] as usize {
                let next = &v[k] * &base[i];
                v.push(next);
            }
            v
        })
        .collect();
    let mut out = BiPoly::zero(field);
    for (&(a, b, c), coeff) in &expr.terms {
        let term = &(&pows[0][a as usize] * &pows[1][b as usize]) * &pows[2][c as usize];
        out = &out + &term.scale(coeff);
    }
    Ok(out)
}

/// A relation Σ cᵢ·X^aᵢ Y^bᵢ Z^cᵢ = 0 among the basic invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Syzygy {
    pub monomials: Vec<(u32, u32, u32)>,
    pub coefficients: Vec<Rational>,
}

impl Syzygy {
    pub fn as_xyz(&self, field: &Arc<CycloField>) -> XyzPoly {
        let mut p = XyzPoly::zero(field);
        for (m, c) in self.monomials.iter().zip(&self.coefficients) {
            p.add_term(*m, field.from_rational(c.clone()));
        }
        p
    }

    pub fn coefficient_of(&self, m: (u32, u32, u32)) -> Option<&Rational> {
        self.monomials
            .iter()
            .position(|x| *x == m)
            .map(|i| &self.coefficients[i])
    }
}

impl fmt::Display for Syzygy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = CycloField::new(1);
        let mut s = String::new();
        for (i, (m, c)) in self.monomials.iter().zip(&self.coefficients).enumerate() {
            let mono = XyzPoly::monomial(&field, *m).to_string();
            let neg = c < &Rational::from_integer(0.into());
            let mag = if neg { -c.clone() } else { c.clone() };
            let sign = match (i, neg) {
                (0, true) => "-".to_string(),
                (0, false) => String::new(),
                (_, true) => " - ".to_string(),
                (_, false) => " + ".to_string(),
            };
            if mag == Rational::from_integer(1.into()) {
                s.push_str(&format!("{sign}{mono}"));
            } else {
                s.push_str(&format!("{sign}{mag}*{mono}"));
            }
        }
        write!(f, "{s} = 0")
    }
}

/// Candidate monomials of the relation, in the order used for normalization.
pub fn syzygy_monomials(kind: GroupKind) -> Vec<(u32, u32, u32)> {
    match kind {
        GroupKind::A(r) => vec![(r + 1, 0, 0), (0, 1, 1)],
        GroupKind::D(r) => vec![(r - 1, 0, 0), (1, 2, 0), (0, 0, 2)],
        GroupKind::E6 => vec![(4, 0, 0), (0, 3, 0), (0, 0, 2)],
        GroupKind::E7 => vec![(3, 1, 0), (0, 3, 0), (0, 0, 2)],
        GroupKind::E8 => vec![(5, 0, 0), (0, 3, 0), (0, 0, 2)],
    }
}

/// Solve for the unique (up to scale) relation among the admissible monomials.
pub fn solve_syzygy(t: &InvariantTriple) -> Result<Syzygy> {
    let monos = syzygy_monomials(t.kind);
    let field = t.field();
    let expanded: Vec<BiPoly> = monos
        .iter()
        .map(|&m| expand_xyz(&XyzPoly::monomial(field, m), t))
        .collect::<Result<_>>()?;
    let mut keys: Vec<(u32, u32)> = expanded
        .iter()
        .flat_map(|p| p.terms().map(|(k, _)| *k).collect::<Vec<_>>())
        .collect();
    keys.sort_unstable();
    keys.dedup();
    let rows: Vec<Vec<CycloNum>> = keys
        .iter()
        .map(|&(a, b)| {
            expanded
                .iter()
                .map(|p| p.coeff(a, b).cloned().unwrap_or_else(|| field.zero()))
                .collect()
        })
        .collect();
    let kernel = nullspace(&rows, monos.len(), &field.zero());
    match kernel.len() {
        0 => return Err(Error::NoSyzygy),
        1 => {}
        n => {
            return Err(Error::Invalid(format!(
                "syzygy kernel has dimension {n}; expected 1"
            )))
        }
    }
    let v = &kernel[0];
    let lead = v
        .iter()
        .find(|c| !c.is_zero())
        .ok_or(Error::NoSyzygy)?
        .invert()?;
    let coefficients = v
        .iter()
        .map(|c| {
            (c * &lead)
                .as_rational()
                .ok_or_else(|| Error::Invalid("syzygy coefficient is not rational".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Syzygy {
        monomials: monos,
        coefficients,
    })
}

/// Evaluate the relation at random rational points (Z₁, Z₂); true when it vanishes at all of them.
pub fn syzygy_vanishes_at_random_points(
    t: &InvariantTriple,
    s: &Syzygy,
    points: usize,
    seed: u64,
) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = t.field();
    (0..points).all(|_| {
        let mut coord = || {
            let n: i64 = rng.gen_range(-9..=9);
            let d: i64 = rng.gen_range(1..=7);
            field.from_rational(rat(n, d))
        };
        let (z1, z2) = (coord(), coord());
        let vals = [t.x.eval(&z1, &z2), t.y.eval(&z1, &z2), t.z.eval(&z1, &z2)];
        let mut acc = field.zero();
        for (&(a, b, c), coeff) in s.monomials.iter().zip(&s.coefficients) {
            let term = &(&vals[0].pow(a) * &vals[1].pow(b)) * &vals[2].pow(c);
            acc = &acc + &term.scale(coeff);
        }
        acc.is_zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::groups::build_group;

    #[test]
    fn a_and_d_relations_match_the_table() {
        for r in 2..7 {
            let s = solve_syzygy(&invariant_triple(GroupKind::A(r)).unwrap()).unwrap();
            assert_eq!(s.coefficients, vec![int(1), int(-1)]);
        }
        for r in 4..9 {
            let s = solve_syzygy(&invariant_triple(GroupKind::D(r)).unwrap()).unwrap();
            assert_eq!(s.coefficients, vec![int(1), int(-1), int(1)], "D{r}");
        }
    }

    #[test]
    fn e_relations() {
        let s6 = solve_syzygy(&invariant_triple(GroupKind::E6).unwrap()).unwrap();
        assert_eq!(s6.coefficients, vec![int(1), rat(-1, 108), rat(1, 108)]);
        let s7 = solve_syzygy(&invariant_triple(GroupKind::E7).unwrap()).unwrap();
        assert_eq!(s7.coefficients, vec![int(1), int(-108), int(-1)]);
        let s8 = solve_syzygy(&invariant_triple(GroupKind::E8).unwrap()).unwrap();
        // kernel (-10119859200, 400/121, 1) from an independent computer-algebra run
        let lead = rat(-10119859200, 1);
        assert_eq!(
            s8.coefficients,
            vec![int(1), rat(400, 121) / &lead, int(1) / &lead]
        );
    }

    #[test]
    fn f20_matches_reference_expansion() {
        let f = CycloField::new(1);
        let expect = BiPoly::from_int_terms(
            &f,
            &[
                (20, 0, -121),
                (15, 5, 27588),
                (10, 10, -59774),
                (5, 15, -27588),
                (0, 20, -121),
            ],
        );
        assert_eq!(big_f20(&f), expect);
    }

    #[test]
    fn degrees_are_homogeneous() {
        for kind in [GroupKind::A(4), GroupKind::D(6), GroupKind::E6, GroupKind::E7, GroupKind::E8] {
            let t = invariant_triple(kind).unwrap();
            let d = (
                t.x.homogeneous_degree().unwrap(),
                t.y.homogeneous_degree().unwrap(),
                t.z.homogeneous_degree().unwrap(),
            );
            assert_eq!(d, t.degrees, "{kind}");
        }
    }

    #[test]
    fn invariance_under_generators_and_failures() {
        let g = build_group(GroupKind::E6).unwrap();
        let t = invariant_triple(GroupKind::E6).unwrap();
        assert!(verify_invariance(&t, &g).unwrap().passed());
        let a2 = build_group(GroupKind::A(2)).unwrap();
        let z1 = BiPoly::monomial(&a2.field, 1, 0);
        assert!(!is_invariant(&z1, &a2).unwrap());
    }

    #[test]
    fn expansion_examples() {
        let t = invariant_triple(GroupKind::D(4)).unwrap();
        let f = t.field().clone();
        let c = f.from_int(2);
        let expr = XyzPoly::var(&f, 0).add(&XyzPoly::var(&f, 1).scale(&c));
        let p = expand_xyz(&expr, &t).unwrap();
        let expect = BiPoly::from_int_terms(&f, &[(2, 2, 1), (4, 0, 1), (0, 4, 1)]);
        assert_eq!(p, expect);
        let ta = invariant_triple(GroupKind::A(3)).unwrap();
        let fa = ta.field().clone();
        let yz = XyzPoly::var(&fa, 1).mul(&XyzPoly::var(&fa, 2));
        assert_eq!(expand_xyz(&yz, &ta).unwrap(), BiPoly::monomial(&fa, 4, 4));
    }

    #[test]
    fn syzygy_at_random_points() {
        for kind in [GroupKind::E6, GroupKind::E7, GroupKind::E8] {
            let t = invariant_triple(kind).unwrap();
            let s = solve_syzygy(&t).unwrap();
            assert!(syzygy_vanishes_at_random_points(&t, &s, 5, 7));
            let mut bad = s.clone();
            bad.coefficients[0] = &bad.coefficients[0] + int(1);
            assert!(!syzygy_vanishes_at_random_points(&t, &bad, 5, 7));
        }
    }
}
