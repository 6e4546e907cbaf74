//! E-type profiles through the quotient map of the exceptional curve of the A₁ resolution.
//!
//! The A₁ resolution M is the total space of O(−2) over P¹ = [Z₁ : Z₂]. A homogeneous form of
//! degree 2k vanishes to order k along the zero section ẽ. Over a critical value v_j of the
//! quotient map the stabilizer is cyclic of order b_j and acts on local coordinates (z₁, z₂),
//! z₁ = 0 being ẽ, as an A_{b_j−1} action; the minimal resolution there is the toric one.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::a::{attach_open_named, divisor_profile_a, OpenGerm};
use crate::arith::{lcm_u32, rat, CycloField, CycloNum, Rational};
use crate::error::{Error, Result};
use crate::groups::GroupKind;
use crate::invariants::{invariant_triple, solve_syzygy, Syzygy};
use crate::poly::germs::{dehomogenize, line_germs};
use crate::poly::{BiPoly, UniPoly};
use crate::profile::{ComponentKind, DivisorProfile};

fn e_only(kind: GroupKind) -> Result<()> {
    match kind {
        GroupKind::E6 | GroupKind::E7 | GroupKind::E8 => Ok(()),
        _ => Err(Error::Invalid(format!("{kind} is not of type E"))),
    }
}

/// Field used for the fibers: the invariants have integer coefficients, and the E₆ critical
/// values need √−3 next to ±i.
fn branch_field(kind: GroupKind) -> Arc<CycloField> {
    CycloField::new(if kind == GroupKind::E6 { 12 } else { 1 })
}

/// The pair of forms defining the quotient map P¹ → P¹/Ḡ.
pub fn quotient_map(kind: GroupKind) -> Result<(BiPoly, BiPoly)> {
    e_only(kind)?;
    let field = branch_field(kind);
    let t = invariant_triple(kind)?;
    let (x, y, z) = (t.x.embed(&field)?, t.y.embed(&field)?, t.z.embed(&field)?);
    Ok(match kind {
        GroupKind::E6 => (z, x.pow(2)),
        GroupKind::E7 => (y.pow(2), x.pow(3)),
        _ => (y.pow(3), x.pow(5)),
    })
}

/// A critical value [s : t] of the quotient map with its fiber data.
#[derive(Clone, Debug, Serialize)]
pub struct CriticalValue {
    pub label: String,
    /// The value this one was seeded from.
    pub seed: String,
    pub value: String,
    /// How the seed value had to be rescaled, if it did.
    pub scaling: Option<String>,
    pub branch_index: u32,
    /// Number of distinct points in the fiber.
    pub points: usize,
    #[serde(skip)]
    pub s: CycloNum,
    #[serde(skip)]
    pub t: CycloNum,
    /// Monic squarefree polynomial in x = Z₁/Z₂ vanishing at the finite fiber points.
    #[serde(skip)]
    pub radical: UniPoly,
    pub contains_infinity: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchData {
    pub kind: GroupKind,
    /// (v₁, v₂, v_∞).
    pub values: Vec<CriticalValue>,
    pub b: (u32, u32, u32),
    pub m: u32,
    /// |Ḡ|, the degree of the quotient map.
    pub degree: u32,
    /// Number of candidate values tested.
    pub candidates: usize,
    #[serde(skip)]
    pub phi: (BiPoly, BiPoly),
}

impl BranchData {
    pub fn indices(&self) -> [u32; 3] {
        [self.b.0, self.b.1, self.b.2]
    }
}

struct Fiber {
    b: u32,
    points: usize,
    radical: UniPoly,
    infinity: bool,
}

/// Common multiplicity of the fiber t·φ₁ − s·φ₂, if every point has the same one.
fn uniform_fiber(phi: &(BiPoly, BiPoly), s: &CycloNum, t: &CycloNum) -> Result<Option<Fiber>> {
    let form = phi.0.scale(t).checked_sub(&phi.1.scale(s))?;
    let (poly, inf) = dehomogenize(&form)?;
    let parts = poly.squarefree_decomposition()?;
    let mut mults: Vec<u32> = parts.iter().map(|(m, _)| *m).collect();
    if inf > 0 {
        mults.push(inf);
    }
    mults.dedup();
    if mults.len() != 1 {
        return Ok(None);
    }
    let mut radical = UniPoly::one(poly.field());
    let mut points = usize::from(inf > 0);
    for (_, g) in &parts {
        radical = radical.mul(g);
        points += g.degree().unwrap_or(0);
    }
    Ok(Some(Fiber {
        b: mults[0],
        points,
        radical,
        infinity: inf > 0,
    }))
}

/// Critical values for the integer-normalized invariants, read off the syzygy.
fn rescaled(kind: GroupKind, label: &str, syz: &Syzygy, field: &Arc<CycloField>) -> Result<(CycloNum, CycloNum)> {
    let coef = |m| syz.coefficient_of(m).cloned().unwrap_or_else(|| rat(0, 1));
    let missing = || Error::Invalid(format!("no rescaled value for {label} of {kind}"));
    match (kind, label) {
        (GroupKind::E6, "v1" | "v2") => {
            // α X⁴ + β Y³ + γ Z² = 0 and the fibers Z ∓ s X² with s² = −α/γ are cubes.
            let q: Rational = -(coef((4, 0, 0)) / coef((0, 0, 2)));
            let s = field.sqrt_rational(&q).ok_or_else(missing)?;
            Ok((if label == "v1" { s } else { -&s }, field.one()))
        }
        (GroupKind::E7, "v2") => {
            // Y(α X³ + β Y²) = −γ Z².
            let q = -(coef((3, 1, 0)) / coef((0, 3, 0)));
            Ok((field.from_rational(q), field.one()))
        }
        (GroupKind::E8, "v2") => {
            // α X⁵ + β Y³ = −γ Z².
            let q = -(coef((5, 0, 0)) / coef((0, 3, 0)));
            Ok((field.from_rational(q), field.one()))
        }
        _ => Err(missing()),
    }
}

fn ratio_text(s: &CycloNum, t: &CycloNum) -> String {
    format!("[{s} : {t}]")
}

pub fn branch_data(kind: GroupKind) -> Result<BranchData> {
    e_only(kind)?;
    let field = branch_field(kind);
    let phi = quotient_map(kind)?;
    let syz = solve_syzygy(&invariant_triple(kind)?)?;
    let one = field.one();
    let zero = field.zero();
    let i = || field.root_of_unity(3);
    let seeds: Vec<(&str, CycloNum, CycloNum)> = match kind {
        GroupKind::E6 => vec![("v1", i(), one.clone()), ("v2", -&i(), one.clone()), ("vinf", one.clone(), zero.clone())],
        GroupKind::E7 => vec![("v1", zero.clone(), one.clone()), ("v2", one.clone(), one.clone()), ("vinf", one.clone(), zero.clone())],
        _ => vec![("v1", zero.clone(), one.clone()), ("v2", -&one, one.clone()), ("vinf", one.clone(), zero.clone())],
    };
    let mut candidates = 0;
    let mut values = Vec::new();
    for (label, s, t) in seeds {
        candidates += 1;
        let seed = ratio_text(&s, &t);
        let mut found = uniform_fiber(&phi, &s, &t)?
            .filter(|f| f.b > 1)
            .map(|f| (f, s.clone(), t.clone(), None));
        if found.is_none() {
            candidates += 1;
            let (s2, t2) = rescaled(kind, label, &syz, &field)?;
            let note = if s.is_zero() {
                format!("{seed} replaced by {}", ratio_text(&s2, &t2))
            } else {
                format!("s scaled by {}", &s2 * &s.invert()?)
            };
            found = uniform_fiber(&phi, &s2, &t2)?
                .filter(|f| f.b > 1)
                .map(|f| (f, s2, t2, Some(note)));
        }
        let (fib, s, t, scaling) = found.ok_or_else(|| {
            Error::Invalid(format!("fiber over {seed} for {kind} has mixed multiplicities"))
        })?;
        values.push(CriticalValue {
            label: label.to_string(),
            seed,
            value: ratio_text(&s, &t),
            scaling,
            branch_index: fib.b,
            points: fib.points,
            s,
            t,
            radical: fib.radical,
            contains_infinity: fib.infinity,
        });
    }
    let degree = phi.0.homogeneous_degree().unwrap_or(0);
    for v in &values {
        if v.points as u32 * v.branch_index != degree {
            return Err(Error::Invalid(format!(
                "fiber over {} has {} points of index {}, but the map has degree {degree}",
                v.label, v.points, v.branch_index
            )));
        }
    }
    let x = invariant_triple(kind)?.x.embed(&field)?;
    let (xp, xinf) = dehomogenize(&x)?;
    if xinf > 1 || xp.squarefree_decomposition()?.iter().any(|(m, _)| *m > 1) {
        return Err(Error::Invalid("X has a repeated linear factor".into()));
    }
    let m = x.homogeneous_degree().unwrap_or(0) / 2;
    let b = (values[0].branch_index, values[1].branch_index, values[2].branch_index);
    if m != b.2 + 1 || m % b.0 != 0 || m % b.1 != 0 {
        return Err(Error::Invalid(format!("branch indices {b:?} incompatible with m = {m}")));
    }
    Ok(BranchData {
        kind,
        values,
        b,
        m,
        degree,
        candidates,
        phi,
    })
}

fn chain_id(label: &str, k: u32) -> String {
    format!("{label}.{k}")
}

fn chain_skeleton(bd: &BranchData, e_mult: u32, chain_mult: impl Fn(usize, u32) -> u32) -> DivisorProfile {
    let mut p = DivisorProfile::new();
    p.add("e", ComponentKind::Exceptional, e_mult);
    for (j, v) in bd.values.iter().enumerate() {
        for k in 1..v.branch_index {
            p.add(chain_id(&v.label, k), ComponentKind::Exceptional, chain_mult(j, k));
        }
        if v.branch_index > 1 {
            p.connect("e", &chain_id(&v.label, 1), 1);
        }
        for k in 1..v.branch_index.saturating_sub(1) {
            p.connect(&chain_id(&v.label, k), &chain_id(&v.label, k + 1), 1);
        }
    }
    p
}

/// Divisor of F = X: m·e + d + Σ (m − k) ℓ_{∞,k} + Σ (m − mk/b_j) ℓ_{j,k}.
pub fn divisor_profile_e(kind: GroupKind) -> Result<DivisorProfile> {
    let bd = branch_data(kind)?;
    let m = bd.m;
    for v in &bd.values[..2] {
        if m % v.branch_index != 0 {
            return Err(Error::Invalid(format!("m = {m} is not divisible by b = {}", v.branch_index)));
        }
    }
    let mut p = chain_skeleton(&bd, m, |j, k| {
        if j == 2 {
            m - k
        } else {
            m - m * k / bd.values[j].branch_index
        }
    });
    if p.components.iter().any(|c| c.multiplicity == 0) {
        return Err(Error::Invalid("a chain multiplicity is not positive".into()));
    }
    let b_inf = bd.b.2;
    p.add("d", ComponentKind::Open, 1);
    p.connect("d", &chain_id("vinf", b_inf - 1), 1);
    Ok(p)
}

fn embed_uni(p: &UniPoly, field: &Arc<CycloField>) -> Result<UniPoly> {
    Ok(UniPoly::new(
        field,
        p.coeffs().iter().map(|c| c.embed(field)).collect::<Result<_>>()?,
    ))
}

/// Order of vanishing of a form along a fiber, read at one of its points.
fn order_on_fiber(form: &BiPoly, radical: &UniPoly, infinity: bool) -> Result<u32> {
    let (mut poly, inf) = dehomogenize(form)?;
    if infinity {
        return Ok(inf);
    }
    let mut n = 0;
    loop {
        let (q, rem) = poly.div_rem(radical)?;
        if !rem.is_zero() {
            return Ok(n);
        }
        poly = q;
        n += 1;
    }
}

/// Divisor of an arbitrary G-invariant polynomial for G of type E.
///
/// Valuations along e and the chains are exact. Near a critical point the function is
/// Σ z₁^{k'} z₂^{ν_{k'}}·(unit) over its homogeneous parts of degree 2k'; only the minimal
/// exponent pairs matter, and the open part there is read from the local toric model with unit
/// coefficients. Open curves through non-critical points are computed exactly.
pub fn candidate_profile_e(p: &BiPoly, kind: GroupKind) -> Result<DivisorProfile> {
    let bd = branch_data(kind)?;
    let field = CycloField::new(lcm_u32(p.field().order(), branch_field(kind).order()));
    let p = p.embed(&field)?;
    if p.is_zero() {
        return Err(Error::Invalid("the zero function has no divisor".into()));
    }
    let mut parts: BTreeMap<u32, BiPoly> = BTreeMap::new();
    for (&(a, b), c) in p.terms() {
        if (a + b) % 2 == 1 {
            return Err(Error::NotInvariant);
        }
        parts
            .entry((a + b) / 2)
            .or_insert_with(|| BiPoly::zero(&field))
            .add_term(a, b, c.clone());
    }
    let k = *parts.keys().next().expect("nonzero polynomial");

    let radicals: Vec<UniPoly> = bd
        .values
        .iter()
        .map(|v| embed_uni(&v.radical, &field))
        .collect::<Result<_>>()?;
    let orders: Vec<Vec<(u32, u32)>> = bd
        .values
        .iter()
        .zip(&radicals)
        .map(|(v, rad)| {
            parts
                .iter()
                .map(|(&kk, f)| Ok((kk, order_on_fiber(f, rad, v.contains_infinity)?)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut locals = Vec::new();
    for (v, pts) in bd.values.iter().zip(&orders) {
        let minimal: Vec<(u32, u32)> = pts
            .iter()
            .copied()
            .filter(|&(a, c)| !pts.iter().any(|&(a2, c2)| (a2, c2) != (a, c) && a2 <= a && c2 <= c))
            .collect();
        let q = CycloField::new(1);
        let mut model = BiPoly::zero(&q);
        for (a, c) in minimal {
            model.add_term(a, c, q.one());
        }
        let local = divisor_profile_a(&model, v.branch_index - 1).map_err(|_| Error::NotInvariant)?;
        if local.multiplicity("c0") != Some(k) {
            return Err(Error::Invalid("local model disagrees with the order along e".into()));
        }
        locals.push(local);
    }
    let mut profile = chain_skeleton(&bd, k, |j, kk| {
        locals[j].multiplicity(&format!("l{kk}")).unwrap_or(0)
    });

    let mut open = Vec::new();
    for (v, local) in bd.values.iter().zip(&locals) {
        let rename = |id: &str| -> Option<String> {
            if id == "c0" {
                Some("e".into())
            } else {
                id.strip_prefix('l').map(|n| format!("{}.{n}", v.label))
            }
        };
        for o in local.open().filter(|o| o.id != "c0") {
            let meets = local
                .adjacency
                .iter()
                .filter_map(|(a, b, n)| {
                    let other = if a == &o.id { b } else if b == &o.id { a } else { return None };
                    rename(other).map(|id| (id, *n))
                })
                .collect();
            open.push(OpenGerm {
                multiplicity: o.multiplicity,
                meets,
            });
        }
    }

    let mut residual = BiPoly::zero(&field);
    for (&kk, f) in &parts {
        for (&(a, _), c) in f.terms() {
            residual.add_term(a, kk - k, c.clone());
        }
    }
    let critical = radicals.iter().fold(UniPoly::one(&field), |acc, r| acc.mul(r));
    if !critical.eval(&field.zero()).is_zero() {
        return Err(Error::Invalid("the point x = 0 is expected to be critical".into()));
    }
    for g in line_germs(&residual)? {
        let common = g.points.gcd(&critical);
        let rest = g.points.div_exact(&common)?;
        let n = rest.degree().unwrap_or(0) as u32;
        if n == 0 {
            continue;
        }
        if n % bd.degree != 0 {
            return Err(Error::Invalid("non-critical points do not form free orbits".into()));
        }
        let (m, i) = g.multiplicity_and_intersection();
        for _ in 0..n / bd.degree {
            open.push(OpenGerm {
                multiplicity: m,
                meets: vec![("e".into(), i)],
            });
        }
    }
    attach_open_named(&mut profile, open, "d");
    profile.prune_zero_open();
    Ok(profile)
}
