//! D-type profiles through the index-2 cyclic subgroup H = A_h, h = 2r − 5.
//!
//! τ acts on the resolution of ℂ²/H by exchanging ℓ_j and ℓ_{h+1-j} and preserving the middle
//! curve ℓ_{r-2}, on which it fixes the two points v_{r-3} = 0, u_{r-3}² = (−1)^r. After blowing
//! those points up, the quotient by τ is the minimal resolution of ℂ²/D_r: ℓ_j and ℓ_{h+1-j} go
//! to d_j, ℓ_{r-2} goes two-to-one onto d_{r-2}, and the blow-up curves ẽ_i are branch curves
//! that go to e_i.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::a::{
    attach_open, chart_expression, corner_open_germ, divisor_profile_a, line_open_germs,
    ChartExpression, OpenGerm, ToricComponent, ToricResolution,
};
use crate::arith::{lcm_u32, CycloField, CycloNum};
use crate::error::{Error, Result};
use crate::groups::{generators, GroupKind};
use crate::invariants::invariant_triple;
use crate::poly::{BiPoly, UniPoly};
use crate::profile::{ComponentKind, DivisorProfile};

#[derive(Clone, Debug)]
pub struct DTypeGeometry {
    pub r: u32,
    pub h: u32,
    /// u_{r-3}-coordinates of the two τ-fixed points on ℓ_{r-2}.
    pub alpha_points: [CycloNum; 2],
}

impl DTypeGeometry {
    pub fn new(r: u32, field: &Arc<CycloField>) -> Result<Self> {
        if r < 4 {
            return Err(Error::Invalid(format!("D{r} needs r >= 4")));
        }
        let a = if r % 2 == 0 {
            field.one()
        } else {
            if field.order() % 4 != 0 {
                return Err(Error::Invalid("the fixed points need sqrt(-1) in the field".into()));
            }
            field.root_of_unity(field.order() as i64 / 4)
        };
        Ok(DTypeGeometry {
            r,
            h: 2 * r - 5,
            alpha_points: [a.clone(), -&a],
        })
    }

    /// u² − (−1)^r, vanishing exactly at the fixed points.
    pub fn alpha_polynomial(&self) -> UniPoly {
        let f = self.alpha_points[0].field();
        let s = if self.r % 2 == 0 { -1 } else { 1 };
        UniPoly::from_ints(f, &[s, 0, 1])
    }
}

fn field_with_i(p: &BiPoly) -> Result<BiPoly> {
    let n = p.field().order();
    if n % 4 == 0 {
        Ok(p.clone())
    } else {
        p.embed(&CycloField::new(lcm_u32(n, 4)))
    }
}

fn check_invariant(p: &BiPoly, r: u32) -> Result<()> {
    let t = p.substitute_linear(&generators::tau(p.field()))?;
    if &t != p {
        return Err(Error::NotInvariant);
    }
    // Invariance under σ is checked by the chart conversion itself.
    chart_expression(p, 2 * r - 5, 0).map_err(|_| Error::NotInvariant)?;
    Ok(())
}

/// P in chart U_j of the A_h resolution, as u^α v^β · residual.
pub fn chart_expression_d(p: &BiPoly, r: u32, j: u32) -> Result<ChartExpression> {
    if r < 4 || j > r - 3 {
        return Err(Error::Invalid(format!("chart U_{j} is not used for D{r}")));
    }
    check_invariant(p, r)?;
    chart_expression(p, 2 * r - 5, j)
}

/// Profile on the D_r resolution together with the data it was read from.
#[derive(Clone, Debug)]
pub struct DProfile {
    pub profile: DivisorProfile,
    /// The divisor on the blown-up A_h resolution, before taking the quotient.
    pub cover: DivisorProfile,
    /// Classes of points where the open part meets d₂, as polynomials in u₁ on ℓ₂ ⊂ U₁.
    pub rho_classes: Vec<UniPoly>,
}

/// Divisor of an arbitrary D_r-invariant polynomial.
pub fn divisor_profile_d_of(p: &BiPoly, r: u32) -> Result<DProfile> {
    let p = field_with_i(p)?;
    check_invariant(&p, r)?;
    let geo = DTypeGeometry::new(r, p.field())?;
    let h = geo.h;
    let mid = r - 2;
    let res = ToricResolution::new(&p, h)?;
    let val = |j: u32| res.valuation(ToricComponent::L(j));
    for j in 1..=h {
        if val(j) != val(h + 1 - j) {
            return Err(Error::Invalid(format!("valuations on l{j} and l{} differ", h + 1 - j)));
        }
    }

    let middle = &res.charts[(mid - 1) as usize].residual;
    let mut e_tilde = [0u32; 2];
    for (i, a) in geo.alpha_points.iter().enumerate() {
        let pm = middle
            .point_multiplicity(a, &a.field().zero())
            .expect("residual is nonzero");
        if pm > 0 {
            return Err(Error::Degenerate(format!(
                "the curve passes through the fixed point alpha{}",
                i + 1
            )));
        }
        e_tilde[i] = val(mid) + pm;
        if e_tilde[i] % 2 == 1 {
            return Err(Error::Invalid(format!(
                "odd valuation {} along the branch curve e{}",
                e_tilde[i],
                i + 1
            )));
        }
    }

    let mut cover = divisor_profile_a(&p, h)?;
    for (i, e) in e_tilde.iter().enumerate() {
        let id = format!("et{}", i + 1);
        cover.add(&id, ComponentKind::Exceptional, *e);
        cover.connect(&id, &format!("l{mid}"), 1);
    }

    let mut profile = DivisorProfile::new();
    profile.add("c", ComponentKind::Open, res.valuation(ToricComponent::C0));
    for j in 1..=mid {
        profile.add(format!("d{j}"), ComponentKind::Exceptional, val(j));
    }
    for (i, e) in e_tilde.iter().enumerate() {
        profile.add(format!("e{}", i + 1), ComponentKind::Exceptional, e / 2);
        profile.connect(&format!("e{}", i + 1), &format!("d{mid}"), 1);
    }
    profile.connect("c", "d1", 1);
    for j in 1..mid {
        profile.connect(&format!("d{j}"), &format!("d{}", j + 1), 1);
    }

    let mut open: Vec<OpenGerm> = Vec::new();
    let mut rho_classes = Vec::new();
    for j in 1..mid {
        let g = res.line_germs(j)?;
        if j == 2 {
            rho_classes.extend(g.iter().map(|x| x.points.clone()));
        }
        line_open_germs(&g, &format!("d{j}"), &mut open);
    }
    let alpha = geo.alpha_polynomial();
    for g in res.line_germs(mid)? {
        if g.points.gcd(&alpha).degree().unwrap_or(0) > 0 {
            return Err(Error::Degenerate("the curve passes through a fixed point".into()));
        }
        if g.count() % 2 == 1 {
            return Err(Error::Invalid(format!(
                "points on l{mid} do not pair up under the involution"
            )));
        }
        if mid == 2 {
            rho_classes.push(g.points.clone());
        }
        let (m, i) = g.multiplicity_and_intersection();
        for _ in 0..g.count() / 2 {
            open.push(OpenGerm {
                multiplicity: m,
                meets: vec![(format!("d{mid}"), i)],
            });
        }
    }
    for k in 0..mid {
        if let Some(c) = res.corner(k) {
            let u = if k == 0 { "c".to_string() } else { format!("d{k}") };
            open.push(corner_open_germ(&c, &u, &format!("d{}", k + 1)));
        }
    }
    attach_open(&mut profile, open);
    profile.prune_zero_open();
    Ok(DProfile {
        profile,
        cover,
        rho_classes,
    })
}

/// F = X + cY for D_r, in a field containing both the invariants and c.
pub fn distinguished_function(c: &CycloNum, r: u32) -> Result<BiPoly> {
    let t = invariant_triple(GroupKind::D(r))?;
    let n = lcm_u32(t.field().order(), c.field().order());
    let field = CycloField::new(n);
    let x = t.x.embed(&field)?;
    let y = t.y.embed(&field)?;
    let c = c.embed(&field)?;
    x.checked_add(&y.scale(&c))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Degeneracy {
    ZeroParameter,
    /// The residual curve meets d₂ in a repeated point.
    RootCollision,
    /// The residual curve passes through a τ-fixed point.
    AlphaIncidence,
    /// Anything else that keeps the profile from being the expected one.
    Unexpected(String),
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degeneracy::ZeroParameter => write!(f, "c = 0"),
            Degeneracy::RootCollision => write!(f, "coincident residual roots on d2"),
            Degeneracy::AlphaIncidence => write!(f, "residual curve passes through a fixed point"),
            Degeneracy::Unexpected(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegenerateCheck {
    pub reasons: Vec<Degeneracy>,
}

impl DegenerateCheck {
    pub fn passed(&self) -> bool {
        self.reasons.is_empty()
    }

    pub fn summary(&self) -> String {
        self.reasons
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; ")
    }
}

pub fn degenerate_check(c: &CycloNum, r: u32) -> Result<DegenerateCheck> {
    GroupKind::D(r).validate()?;
    if c.is_zero() {
        return Ok(DegenerateCheck {
            reasons: vec![Degeneracy::ZeroParameter],
        });
    }
    let f = field_with_i(&distinguished_function(c, r)?)?;
    let geo = DTypeGeometry::new(r, f.field())?;
    let mut reasons = Vec::new();

    let on_d2 = chart_expression(&f, geo.h, 1)?.residual;
    let h0 = UniPoly::new(f.field(), on_d2.coefficient_in_second(0));
    if h0.squarefree_decomposition()?.iter().any(|(m, _)| *m > 1) {
        reasons.push(Degeneracy::RootCollision);
    }
    let middle = chart_expression(&f, geo.h, r - 3)?.residual;
    let zero = f.field().zero();
    if geo.alpha_points.iter().any(|a| middle.eval(a, &zero).is_zero()) {
        reasons.push(Degeneracy::AlphaIncidence);
    }
    if !reasons.is_empty() {
        return Ok(DegenerateCheck { reasons });
    }

    match divisor_profile_d_of(&f, r) {
        Err(e) => reasons.push(Degeneracy::Unexpected(e.to_string())),
        Ok(dp) => {
            let open: Vec<_> = dp.profile.open().collect();
            let single = open.len() == 1
                && open[0].multiplicity == 1
                && dp.profile.intersection(&open[0].id, "d2") == 1
                && dp
                    .profile
                    .exceptional()
                    .all(|e| e.id == "d2" || dp.profile.intersection(&open[0].id, &e.id) == 0);
            if !single {
                reasons.push(Degeneracy::Unexpected(
                    "the proper transform is not one smooth curve meeting d2 transversally".into(),
                ));
            }
        }
    }
    Ok(DegenerateCheck { reasons })
}

/// Divisor of F = X + cY on the minimal resolution of ℂ²/D_r.
pub fn divisor_profile_d(c: &CycloNum, r: u32) -> Result<DivisorProfile> {
    let check = degenerate_check(c, r)?;
    if !check.passed() {
        return Err(Error::Degenerate(check.summary()));
    }
    Ok(divisor_profile_d_of(&distinguished_function(c, r)?, r)?.profile)
}

/// Coordinate on d₂ of a point class: u₁ for r ≥ 5, and u₁ + 1/u₁ for r = 4 where d₂ is the
/// quotient of ℓ₂ by u₁ ↦ 1/u₁.
pub fn class_point(class: &UniPoly, r: u32) -> Result<CycloNum> {
    let c = class.monic();
    match (r, c.degree()) {
        (4, Some(2)) => Ok(-&c.coeffs()[1]),
        (r, Some(1)) if r >= 5 => Ok(-&c.coeffs()[0]),
        _ => Err(Error::Invalid(format!(
            "a single point on d2 was expected, found a class of degree {:?}",
            c.degree()
        ))),
    }
}

/// The point ρ·d₂ for F = X + cY.
pub fn rho_intersection_point(c: &CycloNum, r: u32) -> Result<CycloNum> {
    let check = degenerate_check(c, r)?;
    if !check.passed() {
        return Err(Error::Degenerate(check.summary()));
    }
    let dp = divisor_profile_d_of(&distinguished_function(c, r)?, r)?;
    match dp.rho_classes.as_slice() {
        [one] => class_point(one, r),
        _ => Err(Error::Invalid("expected one point class on d2".into())),
    }
}

/// Invert the point map: the parameter c whose curve meets d₂ at `point`.
pub fn recover_c(point: &CycloNum, r: u32) -> Result<CycloNum> {
    let two = point.field().from_int(2);
    if r == 4 {
        Ok(-&(&two * &point.invert()?))
    } else {
        Ok(-&(&two * point))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::dynkin::{affine_diagram, match_profile};

    fn q(n: i64, d: i64) -> CycloNum {
        CycloField::new(1).from_rational(rat(n, d))
    }

    #[test]
    fn chart_expressions_match_closed_forms() {
        for r in 4..=8 {
            let c = q(3, 1);
            let f = distinguished_function(&c, r).unwrap();
            let field = f.field().clone();
            let half_c = field.from_rational(rat(3, 2));
            let e1 = chart_expression_d(&f, r, 1).unwrap();
            let e0 = chart_expression_d(&f, r, 0).unwrap();
            if r >= 5 {
                assert_eq!((e1.alpha, e1.beta), (1, 2));
                let mut want = BiPoly::monomial(&field, 1, 0);
                want.add_term(2 * r - 6, 2 * r - 8, half_c.clone());
                want.add_term(0, 0, half_c.clone());
                assert_eq!(e1.residual, want);
            } else {
                assert_eq!((e1.alpha, e1.beta), (1, 2));
                let mut want = BiPoly::zero(&field);
                want.add_term(2, 0, half_c.clone());
                want.add_term(1, 0, field.one());
                want.add_term(0, 0, half_c.clone());
                assert_eq!(e1.residual, want);
            }
            assert_eq!((e0.alpha, e0.beta), (0, 1));
            let mut want = BiPoly::monomial(&field, 2, 1);
            want.add_term(2 * r - 4, 2 * r - 6, half_c.clone());
            want.add_term(0, 0, half_c.clone());
            assert_eq!(e0.residual, want);
        }
        let t = invariant_triple(GroupKind::D(6)).unwrap();
        let e = chart_expression_d(&t.x, 6, 2).unwrap();
        assert_eq!((e.alpha, e.beta), (2, 2));
        assert_eq!(e.residual, BiPoly::constant(t.field().one()));
    }

    #[test]
    fn d4_profile() {
        let p = divisor_profile_d(&q(2, 1), 4).unwrap();
        assert_eq!(p.multiplicity("d2"), Some(2));
        assert_eq!(p.multiplicity("d1"), Some(1));
        assert_eq!(p.multiplicity("e1"), Some(1));
        assert_eq!(p.multiplicity("e2"), Some(1));
        assert_eq!(p.multiplicity("rho"), Some(1));
        assert_eq!(p.intersection("rho", "d2"), 1);
        assert_eq!(p.components.len(), 5);
        assert!(match_profile(&p, &affine_diagram(GroupKind::D(4)).unwrap()).is_ok());
    }

    #[test]
    fn d5_profile_and_cover() {
        let f = distinguished_function(&q(1, 1), 5).unwrap();
        let dp = divisor_profile_d_of(&f, 5).unwrap();
        let p = &dp.profile;
        assert_eq!(p.multiplicity("d1"), Some(1));
        assert_eq!(p.multiplicity("d2"), Some(2));
        assert_eq!(p.multiplicity("d3"), Some(2));
        assert_eq!(p.multiplicity("e1"), Some(1));
        assert_eq!(p.multiplicity("rho"), Some(1));
        assert_eq!(p.intersection("rho", "d2"), 1);
        let mut cover: Vec<(String, u32)> = dp
            .cover
            .components
            .iter()
            .map(|c| (c.id.clone(), c.multiplicity))
            .collect();
        cover.sort();
        let want = [("et1", 2), ("et2", 2), ("l1", 1), ("l2", 2), ("l3", 2), ("l4", 2), ("l5", 1), ("rho1", 1), ("rho2", 1)];
        let want: Vec<(String, u32)> = want.iter().map(|(a, b)| (a.to_string(), *b)).collect();
        assert_eq!(cover, want);
    }

    #[test]
    fn degenerate_parameters() {
        let one = q(1, 1);
        let chk = degenerate_check(&one, 4).unwrap();
        assert!(chk.reasons.contains(&Degeneracy::RootCollision));
        assert!(!degenerate_check(&q(-1, 1), 4).unwrap().passed());
        for r in 4..=7 {
            assert_eq!(degenerate_check(&q(0, 1), r).unwrap().reasons, vec![Degeneracy::ZeroParameter]);
        }
        assert!(degenerate_check(&q(5, 1), 6).unwrap().passed());
        assert!(degenerate_check(&one, 5).unwrap().passed());
        assert!(matches!(divisor_profile_d(&one, 4), Err(Error::Degenerate(_))));
    }

    #[test]
    fn point_map_is_invertible() {
        for r in [4, 5, 6] {
            for c in [q(2, 1), q(3, 1), q(-7, 3), q(1, 5)] {
                let p = rho_intersection_point(&c, r).unwrap();
                assert_eq!(recover_c(&p, r).unwrap().as_rational(), c.as_rational());
            }
            let a = rho_intersection_point(&q(2, 1), r).unwrap();
            let b = rho_intersection_point(&q(6, 1), r).unwrap();
            assert_ne!(a.as_rational(), b.as_rational());
        }
    }

    #[test]
    fn cyclotomic_parameter() {
        let f = CycloField::new(3);
        let c = f.root_of_unity(1);
        let p = divisor_profile_d(&c, 5).unwrap();
        assert!(match_profile(&p, &affine_diagram(GroupKind::D(5)).unwrap()).is_ok());
        let back = recover_c(&rho_intersection_point(&c, 5).unwrap(), 5).unwrap();
        assert_eq!(back, c.embed(back.field()).unwrap());
    }
}
