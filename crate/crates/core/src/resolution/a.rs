//! Toric minimal resolution of ℂ²/A_r.
//!
//! Chart U_k (k = 0..r) has coordinates u_k = Z₁^{k+1} Z₂^{-(r-k)}, v_k = Z₁^{-k} Z₂^{r+1-k}.
//! The curve ℓ_j is v_{j-1} = 0 in U_{j-1} and u_j = 0 in U_j; c₀ is u₀ = 0 and c_{r+1} is
//! v_r = 0.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::germs::{self, CornerGerm, LineGerm};
use crate::poly::BiPoly;
use crate::profile::{ComponentKind, DivisorProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChartMap {
    pub r: u32,
    pub k: u32,
}

impl ChartMap {
    pub fn new(r: u32, k: u32) -> Result<Self> {
        if r == 0 || k > r {
            return Err(Error::Invalid(format!("no chart U_{k} for A{r}")));
        }
        Ok(ChartMap { r, k })
    }

    /// Exponents of (Z₁, Z₂) in u_k (first row) and v_k (second row).
    pub fn exponent_matrix(&self) -> [[i64; 2]; 2] {
        let (r, k) = (self.r as i64, self.k as i64);
        [[k + 1, -(r - k)], [-k, r + 1 - k]]
    }

    pub fn determinant(&self) -> i64 {
        let m = self.exponent_matrix();
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// Exponents (α, β) with Z₁^a Z₂^b = u_k^α v_k^β.
    pub fn to_chart(&self, a: u32, b: u32) -> Result<(u32, u32)> {
        let n = self.r as u64 + 1;
        let (a, b, k) = (a as u64, b as u64, self.k as u64);
        if (a + n * (b / n + 1) - b) % n != 0 {
            return Err(Error::Invalid(format!(
                "Z1^{a} Z2^{b} is not invariant under A{}",
                self.r
            )));
        }
        let alpha = (a * (n - k) + b * k) / n;
        let beta = (a * (n - 1 - k) + b * (k + 1)) / n;
        Ok((alpha as u32, beta as u32))
    }

    /// The polynomial P rewritten in (u_k, v_k).
    pub fn apply(&self, p: &BiPoly) -> Result<BiPoly> {
        let mut out = BiPoly::zero(p.field());
        for (&(a, b), c) in p.terms() {
            let (x, y) = self.to_chart(a, b)?;
            out.add_term(x, y, c.clone());
        }
        Ok(out)
    }
}

pub fn monomial_to_chart(a: u32, b: u32, r: u32, k: u32) -> Result<(u32, u32)> {
    ChartMap::new(r, k)?.to_chart(a, b)
}

/// P in chart U_k written as u^α v^β · residual with the residual divisible by neither u nor v.
#[derive(Clone, Debug)]
pub struct ChartExpression {
    pub k: u32,
    pub alpha: u32,
    pub beta: u32,
    pub residual: BiPoly,
}

pub fn chart_expression(p: &BiPoly, r: u32, k: u32) -> Result<ChartExpression> {
    if p.is_zero() {
        return Err(Error::Invalid("the zero function has no divisor".into()));
    }
    let q = ChartMap::new(r, k)?.apply(p)?;
    let (alpha, beta) = q.monomial_content();
    Ok(ChartExpression {
        k,
        alpha,
        beta,
        residual: q.div_monomial(alpha, beta)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ToricComponent {
    C0,
    L(u32),
    CEnd,
}

/// All r+1 chart expressions of one invariant polynomial.
#[derive(Clone, Debug)]
pub struct ToricResolution {
    pub r: u32,
    pub charts: Vec<ChartExpression>,
}

impl ToricResolution {
    pub fn new(p: &BiPoly, r: u32) -> Result<Self> {
        let charts = (0..=r)
            .into_par_iter()
            .map(|k| chart_expression(p, r, k))
            .collect::<Result<Vec<_>>>()?;
        for j in 1..=r as usize {
            if charts[j - 1].beta != charts[j].alpha {
                return Err(Error::Invalid(format!(
                    "valuation along l{j} differs between adjacent charts"
                )));
            }
        }
        Ok(ToricResolution { r, charts })
    }

    pub fn valuation(&self, c: ToricComponent) -> u32 {
        match c {
            ToricComponent::C0 => self.charts[0].alpha,
            ToricComponent::L(j) => self.charts[j as usize].alpha,
            ToricComponent::CEnd => self.charts[self.r as usize].beta,
        }
    }

    pub fn id(&self, c: ToricComponent) -> String {
        match c {
            ToricComponent::C0 => "c0".into(),
            ToricComponent::L(j) => format!("l{j}"),
            ToricComponent::CEnd => format!("c{}", self.r + 1),
        }
    }

    /// Points of the residual curve on ℓ_j away from ℓ_{j-1} (or c₀), read in U_{j-1}.
    pub fn line_germs(&self, j: u32) -> Result<Vec<LineGerm>> {
        germs::line_germs(&self.charts[j as usize - 1].residual)
    }

    /// The residual curve at the origin of U_k.
    pub fn corner(&self, k: u32) -> Option<CornerGerm> {
        germs::corner_germ(&self.charts[k as usize].residual)
    }

    /// The toric curves through the origin of U_k: (u_k = 0, v_k = 0).
    pub fn corner_components(&self, k: u32) -> (ToricComponent, ToricComponent) {
        let u = if k == 0 { ToricComponent::C0 } else { ToricComponent::L(k) };
        let v = if k == self.r {
            ToricComponent::CEnd
        } else {
            ToricComponent::L(k + 1)
        };
        (u, v)
    }
}

pub fn valuation_a(p: &BiPoly, r: u32, c: ToricComponent) -> Result<u32> {
    Ok(match c {
        ToricComponent::C0 => chart_expression(p, r, 0)?.alpha,
        ToricComponent::L(j) if (1..=r).contains(&j) => chart_expression(p, r, j)?.alpha,
        ToricComponent::L(j) => return Err(Error::Invalid(format!("A{r} has no curve l{j}"))),
        ToricComponent::CEnd => chart_expression(p, r, r)?.beta,
    })
}

/// One open curve germ: multiplicity and intersections with named components.
pub(crate) struct OpenGerm {
    pub multiplicity: u32,
    pub meets: Vec<(String, u32)>,
}

pub(crate) fn line_open_germs(germs: &[LineGerm], line: &str, out: &mut Vec<OpenGerm>) {
    for g in germs {
        let (m, i) = g.multiplicity_and_intersection();
        for _ in 0..g.count() {
            out.push(OpenGerm {
                multiplicity: m,
                meets: vec![(line.to_string(), i)],
            });
        }
    }
}

pub(crate) fn corner_open_germ(c: &CornerGerm, u_line: &str, v_line: &str) -> OpenGerm {
    let (m, iv, iu) = c.multiplicity_and_intersections();
    OpenGerm {
        multiplicity: m,
        meets: vec![(v_line.to_string(), iv), (u_line.to_string(), iu)],
    }
}

pub(crate) fn attach_open(profile: &mut DivisorProfile, germs: Vec<OpenGerm>) {
    attach_open_named(profile, germs, "rho");
}

pub(crate) fn attach_open_named(profile: &mut DivisorProfile, germs: Vec<OpenGerm>, prefix: &str) {
    let names = super::open_names(prefix, germs.len());
    for (g, name) in germs.into_iter().zip(names) {
        profile.add(name.clone(), ComponentKind::Open, g.multiplicity);
        for (c, n) in g.meets {
            profile.connect(&name, &c, n);
        }
    }
}

/// Divisor of the pull-back of an A_r-invariant polynomial to the minimal resolution.
pub fn divisor_profile_a(p: &BiPoly, r: u32) -> Result<DivisorProfile> {
    let res = ToricResolution::new(p, r)?;
    let mut profile = DivisorProfile::new();
    let c0 = res.id(ToricComponent::C0);
    let cend = res.id(ToricComponent::CEnd);
    profile.add(&c0, ComponentKind::Open, res.valuation(ToricComponent::C0));
    for j in 1..=r {
        profile.add(
            res.id(ToricComponent::L(j)),
            ComponentKind::Exceptional,
            res.valuation(ToricComponent::L(j)),
        );
    }
    profile.add(&cend, ComponentKind::Open, res.valuation(ToricComponent::CEnd));
    profile.connect(&c0, "l1", 1);
    for j in 1..r {
        profile.connect(&format!("l{j}"), &format!("l{}", j + 1), 1);
    }
    profile.connect(&format!("l{r}"), &cend, 1);

    let line_germs = (1..=r)
        .into_par_iter()
        .map(|j| res.line_germs(j))
        .collect::<Result<Vec<_>>>()?;
    let mut open = Vec::new();
    for (j, g) in (1..=r).zip(&line_germs) {
        line_open_germs(g, &format!("l{j}"), &mut open);
    }
    for k in 0..=r {
        if let Some(c) = res.corner(k) {
            let (u, v) = res.corner_components(k);
            open.push(corner_open_germ(&c, &res.id(u), &res.id(v)));
        }
    }
    attach_open(&mut profile, open);
    profile.prune_zero_open();
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynkin::{affine_diagram, match_profile};
    use crate::groups::GroupKind;
    use crate::invariants::invariant_triple;

    #[test]
    fn chart_exponents() {
        for r in 1..8 {
            for k in 0..=r {
                let m = ChartMap::new(r, k).unwrap();
                assert_eq!(m.determinant(), r as i64 + 1);
                assert_eq!(m.to_chart(1, 1).unwrap(), (1, 1));
                assert_eq!(m.to_chart(r + 1, 0).unwrap(), (r - k + 1, r - k));
                assert_eq!(m.to_chart(0, r + 1).unwrap(), (k, k + 1));
            }
        }
        assert!(monomial_to_chart(2, 0, 3, 1).is_err());
    }

    #[test]
    fn valuations_of_basic_invariants() {
        for r in 2..=10 {
            let t = invariant_triple(GroupKind::A(r)).unwrap();
            for j in 1..=r {
                assert_eq!(valuation_a(&t.x, r, ToricComponent::L(j)).unwrap(), 1);
                assert_eq!(valuation_a(&t.y, r, ToricComponent::L(j)).unwrap(), r + 1 - j);
                assert_eq!(valuation_a(&t.z, r, ToricComponent::L(j)).unwrap(), j);
            }
            assert_eq!(valuation_a(&t.z, r, ToricComponent::C0).unwrap(), 0);
            assert_eq!(valuation_a(&t.y, r, ToricComponent::C0).unwrap(), r + 1);
        }
    }

    #[test]
    fn profile_of_x_matches_cycle() {
        for r in 2..=10 {
            let kind = GroupKind::A(r);
            let t = invariant_triple(kind).unwrap();
            let p = divisor_profile_a(&t.x, r).unwrap();
            assert!(p.components.iter().all(|c| c.multiplicity == 1));
            assert_eq!(p.open().count(), 2);
            let m = match_profile(&p, &affine_diagram(kind).unwrap()).unwrap();
            assert_eq!(m.open_components, vec!["c0".to_string(), format!("c{}", r + 1)]);
        }
    }

    #[test]
    fn products_add_valuations() {
        let t = invariant_triple(GroupKind::A(3)).unwrap();
        let yz = &t.y * &t.z;
        let p = divisor_profile_a(&yz, 3).unwrap();
        assert_eq!(p.exceptional_multiplicities(), vec![4, 4, 4]);

        let t2 = invariant_triple(GroupKind::A(2)).unwrap();
        let p = divisor_profile_a(&(&t2.x * &t2.x), 2).unwrap();
        assert!(p.components.iter().all(|c| c.multiplicity == 2));
        assert!(match_profile(&p, &affine_diagram(GroupKind::A(2)).unwrap()).is_err());
    }

    #[test]
    fn unit_multiple_keeps_profile() {
        let t = invariant_triple(GroupKind::A(3)).unwrap();
        let f = t.x.field().clone();
        let unit = {
            let mut u = t.x.clone();
            u.add_term(0, 0, f.one());
            u
        };
        let p = divisor_profile_a(&(&unit * &t.x), 3).unwrap();
        assert_eq!(p, divisor_profile_a(&t.x, 3).unwrap());
    }

    #[test]
    fn residual_curve_through_interior_point() {
        // X + Y on A_2: in U_1 the residual is 1 + u, a smooth curve meeting l2 away from corners.
        let t = invariant_triple(GroupKind::A(2)).unwrap();
        let p = divisor_profile_a(&(&t.x + &t.y), 2).unwrap();
        assert_eq!(p.exceptional_multiplicities(), vec![1, 1]);
        assert!(match_profile(&p, &affine_diagram(GroupKind::A(2)).unwrap()).is_ok());
    }
}
