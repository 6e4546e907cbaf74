//! The Kleinian subgroups of SL₂ built from explicit generators, enumerated by closure.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{lcm_u32, rat, CycloField, CycloNum};
use crate::error::{Error, Result};
use crate::poly::{identity, mat_det, mat_is_scalar, mat_mul, Mat2};

/// A 2×2 matrix of determinant one over the group's cyclotomic field.
pub type GroupElement = Mat2;

/// With (2,2) entry ω₈⁷ the matrix μ has determinant ≠ 1; the entry ω₈ is used instead.
pub const MU_CORRECTION_NOTE: &str =
    "mu uses entry (2,2) = zeta(8) in place of zeta(8)^7 so that det(mu) = 1 and the listed relations hold";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GroupKind {
    A(u32),
    D(u32),
    E6,
    E7,
    E8,
}

impl GroupKind {
    /// Build from a family letter and an optional rank, validating the range.
    pub fn new(family: &str, r: Option<u32>) -> Result<Self> {
        let fam = family.trim().to_ascii_uppercase();
        let kind = match (fam.as_str(), r) {
            ("A", Some(r)) => GroupKind::A(r),
            ("D", Some(r)) => GroupKind::D(r),
            ("E", Some(6)) | ("E6", None) => GroupKind::E6,
            ("E", Some(7)) | ("E7", None) => GroupKind::E7,
            ("E", Some(8)) | ("E8", None) => GroupKind::E8,
            ("E6", Some(6)) => GroupKind::E6,
            ("E7", Some(7)) => GroupKind::E7,
            ("E8", Some(8)) => GroupKind::E8,
            _ => return Err(Error::Invalid(format!("unknown group {family} with rank {r:?}"))),
        };
        kind.validate()?;
        Ok(kind)
    }

    pub fn validate(self) -> Result<()> {
        match self {
            GroupKind::A(r) if r < 1 => Err(Error::Invalid("A_r needs r >= 1".into())),
            GroupKind::D(r) if r < 4 => Err(Error::Invalid("D_r needs r >= 4".into())),
            _ => Ok(()),
        }
    }

    pub fn rank(self) -> u32 {
        match self {
            GroupKind::A(r) | GroupKind::D(r) => r,
            GroupKind::E6 => 6,
            GroupKind::E7 => 7,
            GroupKind::E8 => 8,
        }
    }

    pub fn family(self) -> char {
        match self {
            GroupKind::A(_) => 'A',
            GroupKind::D(_) => 'D',
            _ => 'E',
        }
    }

    /// Order N of the cyclotomic field holding all generator entries.
    pub fn field_order(self) -> u32 {
        match self {
            GroupKind::A(r) => r + 1,
            GroupKind::D(r) => lcm_u32(4, 2 * r - 4),
            GroupKind::E6 | GroupKind::E7 => 8,
            GroupKind::E8 => 5,
        }
    }

    pub fn expected_order(self) -> usize {
        match self {
            GroupKind::A(r) => r as usize + 1,
            GroupKind::D(r) => 4 * (r as usize - 2),
            GroupKind::E6 => 24,
            GroupKind::E7 => 48,
            GroupKind::E8 => 120,
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::A(r) => write!(f, "A{r}"),
            GroupKind::D(r) => write!(f, "D{r}"),
            GroupKind::E6 => write!(f, "E6"),
            GroupKind::E7 => write!(f, "E7"),
            GroupKind::E8 => write!(f, "E8"),
        }
    }
}

impl FromStr for GroupKind {
    type Err = Error;

    /// Accepts "A3", "D5", "E6", also with an underscore ("A_3").
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (fam, rest) = s.split_at(s.chars().next().map_or(0, char::len_utf8));
        let rest = rest.trim_start_matches('_');
        if rest.is_empty() {
            return Err(Error::Invalid(format!("missing rank in group name {s:?}")));
        }
        let r: u32 = rest
            .parse()
            .map_err(|_| Error::Invalid(format!("bad rank in group name {s:?}")))?;
        GroupKind::new(fam, Some(r))
    }
}

/// Named generator matrices.
pub mod generators {
    use super::*;

    /// σ_n = diag(ω_n, ω_n⁻¹) inside Q(ζ_N) for n | N.
    pub fn sigma(field: &Arc<CycloField>, n: u32) -> Mat2 {
        assert_eq!(field.order() % n, 0, "sigma_{n} needs n | N");
        let step = (field.order() / n) as i64;
        [
            [field.root_of_unity(step), field.zero()],
            [field.zero(), field.root_of_unity(-step)],
        ]
    }

    pub fn tau(field: &Arc<CycloField>) -> Mat2 {
        [[field.zero(), field.one()], [field.from_int(-1), field.zero()]]
    }

    /// 1/√2 · [[ω₈⁷, ω₈⁷], [ω₈⁵, ω₈]] over Q(ζ₈).
    pub fn mu(field: &Arc<CycloField>) -> Mat2 {
        assert_eq!(field.order(), 8);
        let inv_sqrt2 = (&field.root_of_unity(1) + &field.root_of_unity(7)).scale(&rat(1, 2));
        let w = |k: i64| &field.root_of_unity(k) * &inv_sqrt2;
        [[w(7), w(7)], [w(5), w(1)]]
    }

    /// The variant with (2,2) entry ω₈⁷; kept for the determinant check only.
    pub fn mu_uncorrected(field: &Arc<CycloField>) -> Mat2 {
        let mut m = mu(field);
        let inv_sqrt2 = (&field.root_of_unity(1) + &field.root_of_unity(7)).scale(&rat(1, 2));
        m[1][1] = &field.root_of_unity(7) * &inv_sqrt2;
        m
    }

    /// 1/√5 · [[ω⁴−ω, ω²−ω³], [ω²−ω³, ω−ω⁴]] with ω = ω₅.
    pub fn kappa(field: &Arc<CycloField>) -> Mat2 {
        assert_eq!(field.order(), 5);
        let w = |k: i64| field.root_of_unity(k);
        let sqrt5 = &(&w(1) + &w(4)).scale(&rat(2, 1)) + &field.one();
        let inv = sqrt5.invert().expect("sqrt 5 is nonzero");
        let a = &(&w(4) - &w(1)) * &inv;
        let b = &(&w(2) - &w(3)) * &inv;
        let d = &(&w(1) - &w(4)) * &inv;
        [[a, b.clone()], [b, d]]
    }

    /// σ₁₀ inside Q(ζ₅), using ω₁₀ = −ω₅³.
    pub fn sigma10_in_q5(field: &Arc<CycloField>) -> Mat2 {
        assert_eq!(field.order(), 5);
        let w = -&field.root_of_unity(3);
        let winv = -&field.root_of_unity(2);
        [[w, field.zero()], [field.zero(), winv]]
    }
}

/// A fully enumerated Kleinian group.
#[derive(Clone, Debug)]
pub struct GroupData {
    pub kind: GroupKind,
    pub field: Arc<CycloField>,
    pub generators: Vec<(String, Mat2)>,
    pub elements: Vec<GroupElement>,
    /// `table[i][j]` is the index of elements[i] · elements[j].
    pub table: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
    pub identity: usize,
    pub minus_identity: Option<usize>,
    pub classes: Vec<Vec<usize>>,
    pub center: Vec<usize>,
}

/// Generators of each group, by name.
pub fn group_generators(kind: GroupKind) -> Result<(Arc<CycloField>, Vec<(String, Mat2)>)> {
    kind.validate()?;
    let field = CycloField::new(kind.field_order());
    use generators::*;
    let gens = match kind {
        GroupKind::A(r) => vec![(format!("sigma_{}", r + 1), sigma(&field, r + 1))],
        GroupKind::D(r) => vec![
            (format!("sigma_{}", 2 * r - 4), sigma(&field, 2 * r - 4)),
            ("tau".into(), tau(&field)),
        ],
        GroupKind::E6 => vec![
            ("sigma_4".into(), sigma(&field, 4)),
            ("tau".into(), tau(&field)),
            ("mu".into(), mu(&field)),
        ],
        GroupKind::E7 => vec![
            ("sigma_8".into(), sigma(&field, 8)),
            ("tau".into(), tau(&field)),
            ("mu".into(), mu(&field)),
        ],
        GroupKind::E8 => vec![
            ("sigma_10".into(), sigma10_in_q5(&field)),
            ("kappa".into(), kappa(&field)),
        ],
    };
    Ok((field, gens))
}

/// Enumerate the group by breadth-first closure of its generators.
pub fn build_group(kind: GroupKind) -> Result<GroupData> {
    let (field, gens) = group_generators(kind)?;
    let cap = 4 * kind.expected_order();
    let mut elements: Vec<Mat2> = vec![identity(&field)];
    let mut index: HashMap<Mat2, usize> = HashMap::new();
    index.insert(elements[0].clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for (_, g) in &gens {
            let p = mat_mul(&elements[i], g);
            if !index.contains_key(&p) {
                if elements.len() >= cap {
                    return Err(Error::ClosureOverflow(cap));
                }
                index.insert(p.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(p);
            }
        }
    }
    let n = elements.len();
    let table: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    let p = mat_mul(&elements[i], &elements[j]);
                    *index.get(&p).expect("closed under multiplication")
                })
                .collect()
        })
        .collect();
    let inverse: Vec<usize> = (0..n)
        .map(|i| (0..n).find(|&j| table[i][j] == 0).expect("finite group has inverses"))
        .collect();
    let minus_identity = elements.iter().position(|m| mat_is_scalar(m, -1));
    let classes = conjugacy_classes_from_table(&table, &inverse);
    let center = (0..n)
        .filter(|&x| (0..n).all(|g| table[g][x] == table[x][g]))
        .collect();
    Ok(GroupData {
        kind,
        field,
        generators: gens,
        elements,
        table,
        inverse,
        identity: 0,
        minus_identity,
        classes,
        center,
    })
}

fn conjugacy_classes_from_table(table: &[Vec<usize>], inverse: &[usize]) -> Vec<Vec<usize>> {
    let n = table.len();
    let mut seen = vec![false; n];
    let mut classes = Vec::new();
    for x in 0..n {
        if seen[x] {
            continue;
        }
        let mut cls: Vec<usize> = (0..n).map(|g| table[table[g][x]][inverse[g]]).collect();
        cls.sort_unstable();
        cls.dedup();
        for &y in &cls {
            seen[y] = true;
        }
        classes.push(cls);
    }
    classes
}

/// Outcome of one checked relation.
#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub holds: bool,
}

impl GroupData {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn center(&self) -> &[usize] {
        &self.center
    }

    /// |G| / |G ∩ {±1}|.
    pub fn projective_order(&self) -> usize {
        let pm = 1 + usize::from(self.minus_identity.is_some());
        self.order() / pm
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut cur = i;
        while cur != self.identity {
            cur = self.table[cur][i];
            k += 1;
        }
        k
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        (0..self.order()).fold(1, |acc, i| {
            num_integer::Integer::lcm(&acc, &self.element_order(i))
        })
    }

    pub fn generator(&self, name: &str) -> Option<&Mat2> {
        self.generators.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    /// Index of the class containing element `i`.
    pub fn class_of(&self, i: usize) -> usize {
        self.classes
            .iter()
            .position(|c| c.binary_search(&i).is_ok())
            .expect("every element lies in a class")
    }

    /// The listed relations among generators present in this group, plus det = 1 for each.
    pub fn check_relations(&self) -> Vec<RelationCheck> {
        let f = &self.field;
        let mut out = Vec::new();
        let minus = neg_identity(f);
        let mut push = |name: String, holds: bool| out.push(RelationCheck { relation: name, holds });
        for (name, g) in &self.generators {
            push(format!("det({name}) = 1"), mat_det(g).is_one());
        }
        let tau = self.generator("tau").cloned();
        let mu = self.generator("mu").cloned();
        let kappa = self.generator("kappa").cloned();
        if let Some(t) = &tau {
            for (name, s) in self.generators.iter().filter(|(n, _)| n.starts_with("sigma")) {
                let lhs = mat_mul(t, s);
                let rhs = mat_mul(&mat_inverse(s), t);
                push(format!("tau {name} = {name}^-1 tau"), lhs == rhs);
            }
            push("tau^2 = -1".into(), mat_mul(t, t) == minus);
        }
        if let Some(m) = &mu {
            push("mu^3 = -1".into(), mat_mul(&mat_mul(m, m), m) == minus);
            if let Some(t) = &tau {
                let s4 = generators::sigma(f, 4);
                let lhs = mat_mul(m, t);
                let rhs = mat_mul(&mat_mul(&mat_mul(&minus, &s4), t), m);
                push("mu tau = -sigma_4 tau mu".into(), lhs == rhs);
                let lhs = mat_mul(m, &s4);
                let rhs = mat_mul(&mat_inverse(t), m);
                push("mu sigma_4 = tau^-1 mu".into(), lhs == rhs);
            }
        }
        if let Some(k) = &kappa {
            push("kappa^2 = -1".into(), mat_mul(k, k) == minus);
        }
        out
    }
}

fn neg_identity(f: &Arc<CycloField>) -> Mat2 {
    [[f.from_int(-1), f.zero()], [f.zero(), f.from_int(-1)]]
}

/// Inverse of a determinant-one matrix.
pub fn mat_inverse(m: &Mat2) -> Mat2 {
    let det = mat_det(m);
    let inv = det.invert().expect("invertible matrix");
    let s = |x: &CycloNum| x * &inv;
    [
        [s(&m[1][1]), s(&-&m[0][1])],
        [s(&-&m[1][0]), s(&m[0][0])],
    ]
}

pub fn trace(m: &Mat2) -> CycloNum {
    &m[0][0] + &m[1][1]
}
