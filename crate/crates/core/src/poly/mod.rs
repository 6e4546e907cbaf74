//! Sparse bivariate and dense univariate polynomials over Q(ζ_N).

mod bipoly;
pub mod germs;
mod unipoly;

pub use bipoly::{identity, mat_det, mat_is_scalar, mat_mul, BiPoly, Mat2};
pub use unipoly::{multiplicity_pattern, RootClass, UniPoly};

#[cfg(test)]
mod tests {
    use super::germs::*;
    use super::*;
    use crate::arith::CycloField;

    #[test]
    fn substitution_examples() {
        let f4 = CycloField::new(4);
        let p = BiPoly::monomial(&f4, 1, 1);
        let tau: Mat2 = [
            [f4.zero(), f4.one()],
            [f4.from_int(-1), f4.zero()],
        ];
        assert_eq!(p.substitute_linear(&tau).unwrap(), -&p);
        let f4b = CycloField::new(4);
        let sigma: Mat2 = [
            [f4b.root_of_unity(1), f4b.zero()],
            [f4b.zero(), f4b.root_of_unity(-1)],
        ];
        let y = BiPoly::monomial(&f4b, 4, 0);
        assert_eq!(y.substitute_linear(&sigma).unwrap(), y);
    }

    #[test]
    fn hessian_and_jacobian() {
        let f = CycloField::new(1);
        let xy = BiPoly::monomial(&f, 1, 1);
        assert_eq!(xy.hessian_det(), BiPoly::constant(f.from_int(-1)));
        let z1 = BiPoly::monomial(&f, 1, 0);
        let z2 = BiPoly::monomial(&f, 0, 1);
        assert_eq!(z1.jacobian_det(&z2), BiPoly::constant(f.one()));
    }

    #[test]
    fn squarefree_pattern() {
        let f = CycloField::new(1);
        // x^2 (x - 1) = x^3 - x^2
        let p = UniPoly::from_ints(&f, &[0, 0, -1, 1]);
        let mut pat = multiplicity_pattern(&p).unwrap();
        pat.sort();
        assert_eq!(
            pat,
            vec![
                RootClass { degree: 1, multiplicity: 1 },
                RootClass { degree: 1, multiplicity: 2 }
            ]
        );
        let sq = UniPoly::from_ints(&f, &[-1, 0, 0, 1]);
        assert!(multiplicity_pattern(&sq).unwrap().iter().all(|c| c.multiplicity == 1));
        assert!(multiplicity_pattern(&UniPoly::zero(&f)).is_err());
    }

    #[test]
    fn point_multiplicities() {
        let f = CycloField::new(1);
        let zero = f.zero();
        assert_eq!(BiPoly::monomial(&f, 1, 1).point_multiplicity(&zero, &zero), Some(2));
        let p = BiPoly::from_int_terms(&f, &[(1, 0, 1), (0, 2, 1)]);
        assert_eq!(p.point_multiplicity(&zero, &zero), Some(1));
        let q = BiPoly::from_int_terms(&f, &[(2, 1, 1), (1, 2, 1)]);
        assert_eq!(q.point_multiplicity(&zero, &zero), Some(3));
        // (u - 1)^2 + v^3 is singular of multiplicity 2 at (1, 0)
        let r = BiPoly::from_int_terms(&f, &[(2, 0, 1), (1, 0, -2), (0, 0, 1), (0, 3, 1)]);
        assert_eq!(r.point_multiplicity(&f.one(), &zero), Some(2));
    }

    #[test]
    fn line_germ_classes() {
        let f = CycloField::new(1);
        // R = (u - 1)^2 + v : smooth, tangent to v = 0 at u = 1
        let r = BiPoly::from_int_terms(&f, &[(2, 0, 1), (1, 0, -2), (0, 0, 1), (0, 1, 1)]);
        let g = line_germs(&r).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!((g[0].restricted, g[0].point_multiplicity), (2, 1));
        assert_eq!(g[0].multiplicity_and_intersection(), (1, 2));
        // R = (u - 2)^2 + u v^2 : multiplicity 2 at u = 2, read as a double smooth branch
        let r = BiPoly::from_int_terms(&f, &[(2, 0, 1), (1, 0, -4), (0, 0, 4), (1, 2, 1)]);
        let g = line_germs(&r).unwrap();
        assert_eq!(g[0].multiplicity_and_intersection(), (2, 1));
        assert_eq!(g[0].points, UniPoly::linear_root(&f.from_int(2)));
    }

    #[test]
    fn line_germs_split_by_higher_terms() {
        let f = CycloField::new(1);
        // h0 = (u^2 - 1)^2, h1 = u - 1: the root u = 1 is a double point, u = -1 is smooth
        let r = BiPoly::from_int_terms(
            &f,
            &[(4, 0, 1), (2, 0, -2), (0, 0, 1), (1, 1, 1), (0, 1, -1)],
        );
        let mut g = line_germs(&r).unwrap();
        g.sort_by_key(|x| x.point_multiplicity);
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].point_multiplicity, 1);
        assert_eq!(g[0].points, UniPoly::linear_root(&f.from_int(-1)));
        assert_eq!(g[1].point_multiplicity, 2);
    }

    #[test]
    fn corner_data() {
        let f = CycloField::new(1);
        let r = BiPoly::from_int_terms(&f, &[(0, 0, 1), (1, 1, 1)]);
        assert!(corner_germ(&r).is_none());
        let r = BiPoly::from_int_terms(&f, &[(1, 0, 1), (0, 1, 1)]);
        let c = corner_germ(&r).unwrap();
        assert_eq!(c.multiplicity_and_intersections(), (1, 1, 1));
    }

    #[test]
    fn dehomogenized_infinity() {
        let f = CycloField::new(1);
        // Z1^2 Z2^3 - Z1^5
        let p = BiPoly::from_int_terms(&f, &[(2, 3, 1), (5, 0, -1)]);
        let (u, inf) = dehomogenize(&p).unwrap();
        assert_eq!(inf, 0);
        assert_eq!(u.degree(), Some(5));
        let q = BiPoly::from_int_terms(&f, &[(2, 3, 1), (1, 4, 1)]);
        assert_eq!(dehomogenize(&q).unwrap().1, 3);
    }
}
