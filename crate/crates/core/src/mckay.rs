//! McKay graphs from character tables computed modulo a prime (Dixon's method).
//!
//! Class-sum structure constants are exact integers. Central characters are the common
//! eigenvectors of the class-sum matrices over F_p; degrees and tensor multiplicities are small
//! integers and are lifted from F_p.

use serde::Serialize;

use crate::arith::CycloNum;
use crate::dynkin::{affine_diagram, find_isomorphism, MarkedGraph};
use crate::error::{Error, Result};
use crate::groups::{trace, GroupData, GroupKind};

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn primitive_root(p: u64) -> u64 {
    let mut factors = Vec::new();
    let mut m = p - 1;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("F_p has a primitive root")
}

/// Primes p ≡ 1 mod `modulus` with p > `bound`, in increasing order.
fn admissible_primes(modulus: u64, bound: u64) -> impl Iterator<Item = u64> {
    let start = bound.div_ceil(modulus).max(1);
    (start..).map(move |k| k * modulus + 1).filter(|&p| is_prime(p))
}

/// Right kernel of a matrix over F_p.
fn nullspace_mod(rows: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m = rows.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(piv) = (row..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(row, piv);
        let inv = inv_mod(m[row][col], p);
        for x in m[row].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..m.len() {
            if i != row && m[i][col] != 0 {
                let f = m[i][col];
                for j in 0..ncols {
                    m[i][j] = (m[i][j] + p - f * m[row][j] % p) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; ncols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - m[r][free]) % p;
        }
        basis.push(v);
    }
    basis
}

#[derive(Clone, Debug, Serialize)]
pub struct ModularCharacterData {
    pub prime: u64,
    pub class_sizes: Vec<usize>,
    /// Index into the group's element list of one element per class.
    pub class_reps: Vec<usize>,
    /// Character values mod p; rows are irreducibles, the first row is the trivial character.
    pub table: Vec<Vec<u64>>,
    pub dimensions: Vec<u32>,
}

/// c[i][j][k] = #{x ∈ C_i : x⁻¹ g_k ∈ C_j}, the coefficient of C_k in C_i·C_j.
fn class_constants(g: &GroupData) -> Vec<Vec<Vec<u64>>> {
    let h = g.classes.len();
    let mut c = vec![vec![vec![0u64; h]; h]; h];
    for (i, ci) in g.classes.iter().enumerate() {
        for (k, ck) in g.classes.iter().enumerate() {
            let z = ck[0];
            for &x in ci {
                let y = g.table[g.inverse[x]][z];
                c[i][g.class_of(y)][k] += 1;
            }
        }
    }
    c
}

fn try_prime(g: &GroupData, consts: &[Vec<Vec<u64>>], p: u64) -> Option<ModularCharacterData> {
    let h = g.classes.len();
    let sizes: Vec<usize> = g.classes.iter().map(Vec::len).collect();
    let mut order: Vec<usize> = (0..h).collect();
    order.sort_by_key(|&i| (sizes[i], i));

    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..h)
        .map(|i| (0..h).map(|j| u64::from(i == j)).collect())
        .collect()];
    for &i in &order {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for space in spaces {
            if space.len() == 1 {
                next.push(space);
                continue;
            }
            // Apply the class-sum matrix (A_i)[j][k] = c_ijk to each basis vector.
            let image: Vec<Vec<u64>> = space
                .iter()
                .map(|v| {
                    (0..h)
                        .map(|j| (0..h).map(|k| consts[i][j][k] % p * v[k] % p).sum::<u64>() % p)
                        .collect()
                })
                .collect();
            let mut found = 0;
            for lambda in 0..p {
                let rows: Vec<Vec<u64>> = (0..h)
                    .map(|j| {
                        (0..space.len())
                            .map(|b| (image[b][j] + p - lambda * space[b][j] % p) % p)
                            .collect()
                    })
                    .collect();
                let ker = nullspace_mod(&rows, space.len(), p);
                if ker.is_empty() {
                    continue;
                }
                found += ker.len();
                let sub: Vec<Vec<u64>> = ker
                    .iter()
                    .map(|c| {
                        (0..h)
                            .map(|j| (0..space.len()).map(|b| c[b] * space[b][j] % p).sum::<u64>() % p)
                            .collect()
                    })
                    .collect();
                next.push(sub);
                if found == space.len() {
                    break;
                }
            }
            if found != space.len() {
                return None;
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return None;
    }

    let reps: Vec<usize> = g.classes.iter().map(|c| c[0]).collect();
    let inv_class: Vec<usize> = reps.iter().map(|&x| g.class_of(g.inverse[x])).collect();
    let id_class = g.class_of(g.identity);
    let n = g.order() as u64;
    let bound = (g.order() as f64).sqrt() as u64 + 1;
    let mut rows = Vec::new();
    for s in spaces {
        let v = &s[0];
        if v[id_class] == 0 {
            return None;
        }
        let scale = inv_mod(v[id_class], p);
        let w: Vec<u64> = v.iter().map(|x| x * scale % p).collect();
        let sum = (0..h)
            .map(|k| w[k] * w[inv_class[k]] % p * inv_mod(sizes[k] as u64 % p, p) % p)
            .sum::<u64>()
            % p;
        if sum == 0 {
            return None;
        }
        let d2 = n % p * inv_mod(sum, p) % p;
        let d = (1..=bound).find(|d| d * d % p == d2)?;
        let chi: Vec<u64> = (0..h)
            .map(|k| d * w[k] % p * inv_mod(sizes[k] as u64 % p, p) % p)
            .collect();
        rows.push((d as u32, chi));
    }
    let trivial = vec![1u64; h];
    rows.sort_by(|a, b| (a.1 != trivial, a.0, &a.1).cmp(&(b.1 != trivial, b.0, &b.1)));
    if rows[0].1 != trivial {
        return None;
    }
    Some(ModularCharacterData {
        prime: p,
        class_sizes: sizes,
        class_reps: reps,
        dimensions: rows.iter().map(|r| r.0).collect(),
        table: rows.into_iter().map(|r| r.1).collect(),
    })
}

/// Modulus for the prime: p − 1 must be divisible by the exponent and by the field order, so
/// that both the characters and the matrix traces reduce into F_p.
fn prime_modulus(g: &GroupData) -> u64 {
    num_integer::Integer::lcm(&(g.exponent() as u64), &(g.field.order() as u64))
}

pub fn character_data(g: &GroupData) -> Result<ModularCharacterData> {
    let consts = class_constants(g);
    for p in admissible_primes(prime_modulus(g), 2 * g.order() as u64).take(8) {
        if let Some(data) = try_prime(g, &consts, p) {
            return Ok(data);
        }
    }
    Err(Error::CharacterTable(format!(
        "no admissible prime split the class algebra of {}",
        g.kind
    )))
}

/// Image of an element of Q(ζ_N) under ζ_N ↦ `root` in F_p.
fn reduce(x: &CycloNum, root: u64, p: u64) -> Result<u64> {
    let mut acc = 0u64;
    for (i, c) in x.coeffs().iter().enumerate() {
        let num = c.numer() % num_bigint::BigInt::from(p);
        let den = c.denom() % num_bigint::BigInt::from(p);
        let num: i64 = num.try_into().expect("reduced value fits");
        let den: u64 = den.try_into().expect("reduced value fits");
        if den == 0 {
            return Err(Error::CharacterTable("denominator divisible by p".into()));
        }
        let num = ((num % p as i64 + p as i64) % p as i64) as u64;
        acc = (acc + num * inv_mod(den, p) % p * pow_mod(root, i as u64, p)) % p;
    }
    Ok(acc)
}

#[derive(Clone, Debug, Serialize)]
pub struct McKayGraph {
    pub dimensions: Vec<u32>,
    /// adjacency[i][j] = multiplicity of irreducible j in V ⊗ irreducible i.
    pub adjacency: Vec<Vec<u32>>,
    pub prime: u64,
}

impl McKayGraph {
    pub fn is_symmetric(&self) -> bool {
        let n = self.adjacency.len();
        (0..n).all(|i| (0..n).all(|j| self.adjacency[i][j] == self.adjacency[j][i]))
    }

    pub fn has_loops(&self) -> bool {
        (0..self.adjacency.len()).any(|i| self.adjacency[i][i] != 0)
    }

    /// 2·d_i = Σ_j A_ij d_j for every i.
    pub fn dimension_identity_holds(&self) -> bool {
        self.adjacency.iter().zip(&self.dimensions).all(|(row, &d)| {
            2 * d == row.iter().zip(&self.dimensions).map(|(a, b)| a * b).sum::<u32>()
        })
    }

    pub fn sum_of_squares(&self) -> u32 {
        self.dimensions.iter().map(|d| d * d).sum()
    }

    pub fn marked_graph(&self) -> MarkedGraph {
        let n = self.dimensions.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.adjacency[i][j] > 0 {
                    edges.push((i, j, self.adjacency[i][j]));
                }
            }
        }
        MarkedGraph {
            names: (0..n).map(|i| format!("chi{i}")).collect(),
            marks: self.dimensions.clone(),
            edges,
            special: Some(0),
        }
    }
}

pub fn mckay_graph(g: &GroupData) -> Result<McKayGraph> {
    let data = character_data(g)?;
    let p = data.prime;
    let n = g.field.order() as u64;
    let root = pow_mod(primitive_root(p), (p - 1) / n, p);
    let chi_v: Vec<u64> = data
        .class_reps
        .iter()
        .map(|&x| reduce(&trace(&g.elements[x]), root, p))
        .collect::<Result<_>>()?;
    let inv_class: Vec<usize> = data
        .class_reps
        .iter()
        .map(|&x| g.class_of(g.inverse[x]))
        .collect();
    let h = data.class_sizes.len();
    let inv_order = inv_mod(g.order() as u64 % p, p);
    let mut adjacency = vec![vec![0u32; h]; h];
    for i in 0..h {
        for j in 0..h {
            let s = (0..h)
                .map(|k| {
                    data.class_sizes[k] as u64 % p * chi_v[k] % p * data.table[i][k] % p
                        * data.table[j][inv_class[k]]
                        % p
                })
                .sum::<u64>()
                % p;
            let a = s * inv_order % p;
            if a >= 3 {
                return Err(Error::CharacterTable(format!(
                    "tensor multiplicity lifted to {a}; expected at most 2"
                )));
            }
            adjacency[i][j] = a as u32;
        }
    }
    Ok(McKayGraph {
        dimensions: data.dimensions,
        adjacency,
        prime: p,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct McKayReport {
    pub kind: String,
    pub target: String,
    pub dimensions: Vec<u32>,
    pub prime: u64,
    /// McKay node name to diagram node name, when the graphs are isomorphic.
    pub mapping: Option<Vec<(String, String)>>,
    pub symmetric: bool,
    pub loops: bool,
    pub dimension_identity: bool,
    pub sum_of_squares: u32,
    pub group_order: usize,
}

impl McKayReport {
    pub fn passed(&self) -> bool {
        self.mapping.is_some()
            && self.symmetric
            && !self.loops
            && self.dimension_identity
            && self.sum_of_squares as usize == self.group_order
    }
}

/// Compare the McKay graph of `g` with the affine diagram of `target`; the trivial character
/// must land on ⊕.
pub fn verify_mckay(g: &GroupData, target: GroupKind) -> Result<McKayReport> {
    let graph = mckay_graph(g)?;
    let diagram = affine_diagram(target)?;
    let mg = graph.marked_graph();
    let mapping = find_isomorphism(&mg, &diagram.graph).map(|m| {
        m.iter()
            .enumerate()
            .map(|(i, &j)| (mg.names[i].clone(), diagram.graph.names[j].clone()))
            .collect()
    });
    Ok(McKayReport {
        kind: g.kind.to_string(),
        target: target.to_string(),
        dimensions: graph.dimensions.clone(),
        prime: graph.prime,
        mapping,
        symmetric: graph.is_symmetric(),
        loops: graph.has_loops(),
        dimension_identity: graph.dimension_identity_holds(),
        sum_of_squares: graph.sum_of_squares(),
        group_order: g.order(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::build_group;

    #[test]
    fn cyclic_group_has_linear_characters() {
        let g = build_group(GroupKind::A(2)).unwrap();
        let d = character_data(&g).unwrap();
        assert_eq!(d.dimensions, vec![1, 1, 1]);
        assert_eq!(d.table[0], vec![1, 1, 1]);
        let m = verify_mckay(&g, GroupKind::A(2)).unwrap();
        assert!(m.passed());
    }

    #[test]
    fn quaternion_group() {
        let g = build_group(GroupKind::D(4)).unwrap();
        let d = character_data(&g).unwrap();
        assert_eq!(d.dimensions, vec![1, 1, 1, 1, 2]);
        assert!(verify_mckay(&g, GroupKind::D(4)).unwrap().passed());
    }

    #[test]
    fn binary_icosahedral() {
        let g = build_group(GroupKind::E8).unwrap();
        let m = mckay_graph(&g).unwrap();
        assert_eq!(m.prime, 241);
        assert_eq!(m.dimensions.len(), 9);
        let mut dims = m.dimensions.clone();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 2, 2, 3, 3, 4, 4, 5, 6]);
        assert!(verify_mckay(&g, GroupKind::E8).unwrap().passed());
        assert!(!verify_mckay(&g, GroupKind::A(8)).unwrap().passed());
    }

    #[test]
    fn binary_tetrahedral_dimensions() {
        let g = build_group(GroupKind::E6).unwrap();
        let r = verify_mckay(&g, GroupKind::E6).unwrap();
        assert!(r.passed());
        let mut dims = r.dimensions.clone();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 1, 1, 2, 2, 2, 3]);
    }
}
