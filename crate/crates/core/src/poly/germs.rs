//! Root-free local analysis of a plane curve R(u, v) = 0 along the line v = 0 and at the origin.
//!
//! Points are never extracted: they are grouped into classes (squarefree factors in u) that share
//! the same local invariants, so every quantity stays inside the coefficient field.

use super::{BiPoly, UniPoly};
use crate::error::{Error, Result};

/// A class of points on the line v = 0 (u ≠ 0) where the curve R = 0 meets the line.
#[derive(Clone, Debug)]
pub struct LineGerm {
    /// Monic squarefree polynomial in u whose roots are the points of the class.
    pub points: UniPoly,
    /// Order of R(u, 0) at each point: the local intersection number with the line.
    pub restricted: u32,
    /// Multiplicity of the curve R = 0 at each point.
    pub point_multiplicity: u32,
}

impl LineGerm {
    pub fn count(&self) -> usize {
        self.points.degree().unwrap_or(0)
    }

    /// Divisor multiplicity of the germ and its intersection with the line.
    ///
    /// A germ whose point multiplicity divides its intersection number is read as a power of a
    /// smooth branch; otherwise it is a reduced singular germ.
    pub fn multiplicity_and_intersection(&self) -> (u32, u32) {
        split_power(self.point_multiplicity, &[self.restricted])
    }
}

/// The curve R = 0 passing through the origin of the (u, v)-plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerGerm {
    pub point_multiplicity: u32,
    /// Order of R(u, 0) at u = 0: contact with the line v = 0.
    pub contact_v_line: u32,
    /// Order of R(0, v) at v = 0: contact with the line u = 0.
    pub contact_u_line: u32,
}

impl CornerGerm {
    /// (divisor multiplicity, intersection with v = 0, intersection with u = 0).
    pub fn multiplicity_and_intersections(&self) -> (u32, u32, u32) {
        let (m, _) = split_power(
            self.point_multiplicity,
            &[self.contact_v_line, self.contact_u_line],
        );
        (m, self.contact_v_line / m, self.contact_u_line / m)
    }
}

fn split_power(mu: u32, contacts: &[u32]) -> (u32, u32) {
    let g = contacts
        .iter()
        .fold(mu, |acc, &c| num_integer::Integer::gcd(&acc, &c));
    let m = if g == mu { mu } else { 1 };
    (m.max(1), contacts[0] / m.max(1))
}

fn coefficient_poly(r: &BiPoly, b: u32) -> UniPoly {
    UniPoly::new(r.field(), r.coefficient_in_second(b))
}

/// Classes of intersection points of R = 0 with the line v = 0 away from u = 0.
///
/// R must not be divisible by v.
pub fn line_germs(r: &BiPoly) -> Result<Vec<LineGerm>> {
    let h0 = coefficient_poly(r, 0);
    let k = h0
        .low_order()
        .ok_or_else(|| Error::Invalid("residual is divisible by the line equation".into()))?;
    let h0 = h0.shift_down(k);
    let mut out = Vec::new();
    for (e, g) in h0.squarefree_decomposition()? {
        let mut classes = vec![(g, e)];
        for b in 1..e {
            let hb = coefficient_poly(r, b);
            let mut next = Vec::new();
            for (cls, mu) in classes {
                for (part, ord) in split_by_order(&cls, &hb, e - b) {
                    next.push((part, mu.min(b + ord)));
                }
            }
            classes = next;
        }
        for (points, mu) in classes {
            out.push(LineGerm {
                points,
                restricted: e,
                point_multiplicity: mu,
            });
        }
    }
    Ok(out)
}

/// Split the roots of the squarefree `cls` by the order of vanishing of `h` there, capped at `cap`.
fn split_by_order(cls: &UniPoly, h: &UniPoly, cap: u32) -> Vec<(UniPoly, u32)> {
    let mut out = Vec::new();
    let mut current = cls.clone();
    let mut deriv = h.clone();
    for ord in 0..cap {
        let vanish = current.gcd(&deriv);
        let rest = current.div_exact(&vanish).expect("gcd divides");
        if rest.degree().unwrap_or(0) > 0 {
            out.push((rest, ord));
        }
        if vanish.degree().unwrap_or(0) == 0 {
            return out;
        }
        current = vanish;
        deriv = deriv.derivative();
    }
    out.push((current, cap));
    out
}

/// Local data of R = 0 at the origin, or `None` if R(0, 0) ≠ 0.
///
/// R must be divisible by neither u nor v.
pub fn corner_germ(r: &BiPoly) -> Option<CornerGerm> {
    if r.coeff(0, 0).is_some() {
        return None;
    }
    let mu = r.low_degree()?;
    let ord_u = r.terms().filter(|(k, _)| k.1 == 0).map(|(k, _)| k.0).min()?;
    let ord_v = r.terms().filter(|(k, _)| k.0 == 0).map(|(k, _)| k.1).min()?;
    Some(CornerGerm {
        point_multiplicity: mu,
        contact_v_line: ord_u,
        contact_u_line: ord_v,
    })
}

/// Dehomogenize a binary form at Z₂ = 1: the affine polynomial in x = Z₁/Z₂ and the multiplicity
/// of the point [1 : 0].
pub fn dehomogenize(p: &BiPoly) -> Result<(UniPoly, u32)> {
    let d = p
        .homogeneous_degree()
        .ok_or_else(|| Error::Invalid("form is not homogeneous".into()))?;
    let mut coeffs = vec![p.field().zero(); d as usize + 1];
    let mut at_infinity = u32::MAX;
    for (&(a, b), c) in p.terms() {
        coeffs[a as usize] = c.clone();
        at_infinity = at_infinity.min(b);
    }
    Ok((UniPoly::new(p.field(), coeffs), at_infinity))
}
