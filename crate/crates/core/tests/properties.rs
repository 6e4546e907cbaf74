use std::sync::Arc;

use proptest::prelude::*;

use kleinian::arith::{rat, CycloField, CycloNum, Rational};
use kleinian::dynkin::{affine_diagram, match_profile};
use kleinian::groups::{build_group, GroupKind};
use kleinian::invariants::invariant_triple;
use kleinian::poly::{mat_mul, BiPoly};
use kleinian::resolution::{divisor_profile_a, valuation_a, ToricComponent};

fn element(field: &Arc<CycloField>, coeffs: &[(i64, i64)]) -> CycloNum {
    let q: Vec<Rational> = coeffs.iter().map(|&(n, d)| rat(n, d)).collect();
    field.from_coeffs(&q)
}

fn coeffs(len: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-20i64..=20, 1i64..=9), len)
}

fn check_axioms(n: u32, a: &[(i64, i64)], b: &[(i64, i64)], c: &[(i64, i64)]) -> Result<(), TestCaseError> {
    let f = CycloField::new(n);
    let (a, b, c) = (element(&f, a), element(&f, b), element(&f, c));
    prop_assert_eq!(&a + &b, &b + &a);
    prop_assert_eq!(&a * &b, &b * &a);
    prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
    prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    prop_assert_eq!(&a + &f.zero(), a.clone());
    prop_assert_eq!(&a * &f.one(), a.clone());
    prop_assert!((&a - &a).is_zero());
    if !a.is_zero() {
        prop_assert!((&a * &a.invert().unwrap()).is_one());
    }
    prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
    Ok(())
}

macro_rules! field_axioms {
    ($name:ident, $n:expr, $deg:expr) => {
        proptest! {
            #![proptest_config(ProptestConfig::with_cases(200))]
            #[test]
            fn $name(a in coeffs($deg), b in coeffs($deg), c in coeffs($deg)) {
                check_axioms($n, &a, &b, &c)?;
            }
        }
    };
}

field_axioms!(field_axioms_q4, 4, 2);
field_axioms!(field_axioms_q5, 5, 4);
field_axioms!(field_axioms_q8, 8, 4);
field_axioms!(field_axioms_q12, 12, 4);

/// Z₁^a Z₂^b with a ≡ b mod r+1, i.e. invariant under the cyclic group.
fn invariant_monomial(r: u32) -> impl Strategy<Value = (u32, u32)> {
    (0u32..=12, 0u32..=3).prop_map(move |(a, k)| (a, a % (r + 1) + k * (r + 1)))
}

fn valuation_additivity(r: u32, m1: (u32, u32), m2: (u32, u32)) -> Result<(), TestCaseError> {
    let q = CycloField::new(1);
    let p1 = BiPoly::monomial(&q, m1.0, m1.1);
    let p2 = BiPoly::monomial(&q, m2.0, m2.1);
    let prod = p1.checked_mul(&p2).unwrap();
    let mut comps = vec![ToricComponent::C0, ToricComponent::CEnd];
    comps.extend((1..=r).map(ToricComponent::L));
    for c in comps {
        let v = valuation_a(&prod, r, c).unwrap();
        prop_assert_eq!(v, valuation_a(&p1, r, c).unwrap() + valuation_a(&p2, r, c).unwrap());
    }
    Ok(())
}

macro_rules! additivity {
    ($name:ident, $r:expr) => {
        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]
            #[test]
            fn $name(m1 in invariant_monomial($r), m2 in invariant_monomial($r)) {
                valuation_additivity($r, m1, m2)?;
            }
        }
    };
}

additivity!(valuation_additivity_a2, 2);
additivity!(valuation_additivity_a3, 3);
additivity!(valuation_additivity_a4, 4);
additivity!(valuation_additivity_a5, 5);
additivity!(valuation_additivity_a6, 6);
additivity!(valuation_additivity_a7, 7);
additivity!(valuation_additivity_a8, 8);
additivity!(valuation_additivity_a9, 9);
additivity!(valuation_additivity_a10, 10);

fn functoriality(kind: GroupKind, i: usize, j: usize) -> Result<(), TestCaseError> {
    let g = build_group(kind).unwrap();
    let (i, j) = (i % g.order(), j % g.order());
    let p = BiPoly::from_int_terms(&g.field, &[(3, 0, 1), (1, 2, -2), (0, 1, 5), (2, 2, 1)]);
    let (m, n) = (&g.elements[i], &g.elements[j]);
    let lhs = p.substitute_linear(m).unwrap().substitute_linear(n).unwrap();
    let rhs = p.substitute_linear(&mat_mul(m, n)).unwrap();
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

macro_rules! functorial {
    ($name:ident, $kind:expr) => {
        proptest! {
            #![proptest_config(ProptestConfig::with_cases(50))]
            #[test]
            fn $name(i in 0usize..1000, j in 0usize..1000) {
                functoriality($kind, i, j)?;
            }
        }
    };
}

functorial!(substitution_functorial_a4, GroupKind::A(4));
functorial!(substitution_functorial_d5, GroupKind::D(5));
functorial!(substitution_functorial_e6, GroupKind::E6);
functorial!(substitution_functorial_e7, GroupKind::E7);
functorial!(substitution_functorial_e8, GroupKind::E8);

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    #[test]
    fn matcher_ignores_component_names(r in 2u32..=8, shift in 1usize..50) {
        let t = invariant_triple(GroupKind::A(r)).unwrap();
        let p = divisor_profile_a(&t.x, r).unwrap();
        let ids: Vec<String> = p.components.iter().map(|c| c.id.clone()).collect();
        let n = ids.len();
        let renamed = p.relabel(|id| {
            let i = ids.iter().position(|x| x == id).unwrap();
            format!("n{}", (i + shift) % n)
        });
        let d = affine_diagram(GroupKind::A(r)).unwrap();
        prop_assert!(match_profile(&p, &d).is_ok());
        prop_assert!(match_profile(&renamed, &d).is_ok());
    }
}
