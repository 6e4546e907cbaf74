//! Affine A-D-E diagrams with marks, affine Cartan matrices, and graph matching.

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{CycloField, Rational};
use crate::error::{Error, Result};
use crate::groups::GroupKind;
use crate::linalg::nullspace;
use crate::profile::DivisorProfile;

/// A vertex-marked multigraph with an optional distinguished vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MarkedGraph {
    pub names: Vec<String>,
    pub marks: Vec<u32>,
    /// (i, j, multiplicity) with i < j.
    pub edges: Vec<(usize, usize, u32)>,
    pub special: Option<usize>,
}

impl MarkedGraph {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    fn adjacency_matrix(&self) -> Vec<Vec<u32>> {
        let n = self.len();
        let mut m = vec![vec![0; n]; n];
        for &(i, j, k) in &self.edges {
            m[i][j] += k;
            m[j][i] += k;
        }
        m
    }
}

/// Find a bijection `map[i]` from the vertices of `a` to those of `b` preserving marks,
/// edge multiplicities and the distinguished vertex.
pub fn find_isomorphism(a: &MarkedGraph, b: &MarkedGraph) -> Option<Vec<usize>> {
    let n = a.len();
    if n != b.len() || a.special.is_some() != b.special.is_some() {
        return None;
    }
    let ma = a.adjacency_matrix();
    let mb = b.adjacency_matrix();
    let deg = |m: &Vec<Vec<u32>>, i: usize| m[i].iter().sum::<u32>();
    let signature = |g: &MarkedGraph, m: &Vec<Vec<u32>>, i: usize| {
        (g.marks[i], deg(m, i), g.special == Some(i))
    };
    let sa: Vec<_> = (0..n).map(|i| signature(a, &ma, i)).collect();
    let sb: Vec<_> = (0..n).map(|i| signature(b, &mb, i)).collect();
    let (sa_sorted, sb_sorted) = {
        let mut x = sa.clone();
        let mut y = sb.clone();
        x.sort();
        y.sort();
        (x, y)
    };
    if sa_sorted != sb_sorted {
        return None;
    }
    // assign vertices of `a` in an order where each has an already-assigned neighbour when possible
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    let start = a.special.unwrap_or(0);
    while order.len() < n {
        let next = (0..n)
            .filter(|&i| !placed[i])
            .max_by_key(|&i| {
                let linked = order.iter().filter(|&&j| ma[i][j] > 0).count();
                (linked, usize::from(i == start), std::cmp::Reverse(i))
            })
            .expect("unplaced vertex");
        placed[next] = true;
        order.push(next);
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        k: usize,
        order: &[usize],
        sa: &[(u32, u32, bool)],
        sb: &[(u32, u32, bool)],
        ma: &[Vec<u32>],
        mb: &[Vec<u32>],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let i = order[k];
        for j in 0..sb.len() {
            if used[j] || sa[i] != sb[j] {
                continue;
            }
            let consistent = order[..k].iter().all(|&p| ma[i][p] == mb[j][map[p]]);
            if !consistent {
                continue;
            }
            map[i] = j;
            used[j] = true;
            if extend(k + 1, order, sa, sb, ma, mb, map, used) {
                return true;
            }
            used[j] = false;
            map[i] = usize::MAX;
        }
        false
    }
    extend(0, &order, &sa, &sb, &ma, &mb, &mut map, &mut used).then_some(map)
}

/// An affine A-D-E diagram with its marks.
#[derive(Clone, Debug, Serialize)]
pub struct AffineDiagram {
    pub kind: GroupKind,
    pub graph: MarkedGraph,
    /// Kodaira fibre label, metadata only.
    pub kodaira: String,
}

impl AffineDiagram {
    pub fn marks(&self) -> &[u32] {
        &self.graph.marks
    }

    pub fn affine_node(&self) -> usize {
        self.graph.special.expect("affine diagrams carry a distinguished node")
    }

    pub fn cartan(&self) -> CartanMatrix {
        let n = self.graph.len();
        let mut m = vec![vec![0i64; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(i, j, k) in &self.graph.edges {
            m[i][j] -= k as i64;
            m[j][i] -= k as i64;
        }
        CartanMatrix(m)
    }
}

struct Builder {
    names: Vec<String>,
    marks: Vec<u32>,
    edges: Vec<(usize, usize, u32)>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            names: Vec::new(),
            marks: Vec::new(),
            edges: Vec::new(),
        }
    }

    fn node(&mut self, name: &str, mark: u32) -> usize {
        self.names.push(name.to_string());
        self.marks.push(mark);
        self.names.len() - 1
    }

    fn edge(&mut self, i: usize, j: usize) {
        let (a, b) = (i.min(j), i.max(j));
        if let Some(e) = self.edges.iter_mut().find(|e| e.0 == a && e.1 == b) {
            e.2 += 1;
        } else {
            self.edges.push((a, b, 1));
        }
    }

    fn chain(&mut self, nodes: &[usize]) {
        for w in nodes.windows(2) {
            self.edge(w[0], w[1]);
        }
    }

    fn finish(self, special: usize) -> MarkedGraph {
        MarkedGraph {
            names: self.names,
            marks: self.marks,
            edges: self.edges,
            special: Some(special),
        }
    }
}

/// The affine diagram of a kind, nodes listed in a fixed order; ⊕ is named "+".
pub fn affine_diagram(kind: GroupKind) -> Result<AffineDiagram> {
    kind.validate()?;
    let mut b = Builder::new();
    let (graph, kodaira) = match kind {
        GroupKind::A(r) => {
            let plus = b.node("+", 1);
            let mut ids = vec![plus];
            for j in 1..=r {
                ids.push(b.node(&format!("a{j}"), 1));
            }
            b.chain(&ids);
            b.edge(ids[r as usize], plus);
            (b.finish(plus), format!("I_{}", r + 1))
        }
        GroupKind::D(r) => {
            let plus = b.node("+", 1);
            let a1 = b.node("a1", 1);
            let chain: Vec<usize> = (2..=r - 2).map(|j| b.node(&format!("a{j}"), 2)).collect();
            let end1 = b.node(&format!("a{}", r - 1), 1);
            let end2 = b.node(&format!("a{r}"), 1);
            b.edge(plus, chain[0]);
            b.edge(a1, chain[0]);
            b.chain(&chain);
            b.edge(end1, chain[chain.len() - 1]);
            b.edge(end2, chain[chain.len() - 1]);
            (b.finish(plus), format!("I*_{}", r - 4))
        }
        GroupKind::E6 => {
            let chain: Vec<usize> = [1, 2, 3, 2, 1]
                .iter()
                .enumerate()
                .map(|(k, &m)| b.node(&format!("a{}", k + 1), m))
                .collect();
            let branch = b.node("a6", 2);
            let plus = b.node("+", 1);
            b.chain(&chain);
            b.edge(chain[2], branch);
            b.edge(branch, plus);
            (b.finish(plus), "IV*".to_string())
        }
        GroupKind::E7 => {
            let mut chain: Vec<usize> = [1, 2, 3, 4, 3, 2]
                .iter()
                .enumerate()
                .map(|(k, &m)| b.node(&format!("a{}", k + 1), m))
                .collect();
            let plus = b.node("+", 1);
            let branch = b.node("a7", 2);
            chain.push(plus);
            b.chain(&chain);
            b.edge(chain[3], branch);
            (b.finish(plus), "III*".to_string())
        }
        GroupKind::E8 => {
            let plus = b.node("+", 1);
            let mut chain = vec![plus];
            for (k, m) in [2, 3, 4, 5, 6, 4, 2].into_iter().enumerate() {
                chain.push(b.node(&format!("a{}", k + 1), m));
            }
            let branch = b.node("a8", 3);
            b.chain(&chain);
            b.edge(chain[5], branch);
            (b.finish(plus), "II*".to_string())
        }
    };
    Ok(AffineDiagram {
        kind,
        graph,
        kodaira,
    })
}

/// Square integer matrix with 2 on the diagonal and minus edge counts off it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartanMatrix(pub Vec<Vec<i64>>);

impl CartanMatrix {
    pub fn apply(&self, v: &[u32]) -> Vec<i64> {
        self.0
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, &b)| a * b as i64).sum())
            .collect()
    }
}

/// The primitive positive integer kernel vector of an affine Cartan matrix.
pub fn null_vector(c: &CartanMatrix) -> Result<Vec<u32>> {
    let q = CycloField::new(1);
    let n = c.0.len();
    let rows: Vec<Vec<_>> = c
        .0
        .iter()
        .map(|row| row.iter().map(|&x| q.from_int(x)).collect())
        .collect();
    let kernel = nullspace(&rows, n, &q.zero());
    if kernel.len() != 1 {
        return Err(Error::Invalid(format!(
            "Cartan kernel has dimension {}; expected 1",
            kernel.len()
        )));
    }
    let v: Vec<Rational> = kernel[0]
        .iter()
        .map(|x| x.as_rational().expect("rational field"))
        .collect();
    let den = v
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let g = ints
        .iter()
        .fold(num_bigint::BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
    let sign_negative = ints.iter().any(|x| x.is_negative());
    ints.iter()
        .map(|x| {
            let y = if sign_negative { -x / &g } else { x / &g };
            y.to_u32()
                .filter(|&y| y > 0)
                .ok_or_else(|| Error::Invalid("null vector is not positive".into()))
        })
        .collect()
}

/// A successful match of a profile onto a diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramMatch {
    pub kind: String,
    /// Profile node (an exceptional component id, or "+" for the open part) to diagram node.
    pub mapping: BTreeMap<String, String>,
    /// Ids of the open components that together form the ⊕ node.
    pub open_components: Vec<String>,
}

/// Why a profile fails to reproduce a diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub reason: String,
}

/// Collapse the open components of a profile into one distinguished node.
///
/// Each open component must have multiplicity 1 and meet the exceptional set in one transversal
/// point; anything else is reported as a mismatch.
pub fn profile_graph(p: &DivisorProfile) -> std::result::Result<(MarkedGraph, Vec<String>), Mismatch> {
    let exc: Vec<&str> = p.exceptional().map(|c| c.id.as_str()).collect();
    let open: Vec<&str> = p
        .open()
        .filter(|c| c.multiplicity > 0)
        .map(|c| c.id.as_str())
        .collect();
    if open.is_empty() {
        return Err(Mismatch {
            reason: "no open component: the function does not cut out a curve through the exceptional set".into(),
        });
    }
    for o in &open {
        let m = p.multiplicity(o).unwrap_or(0);
        if m != 1 {
            return Err(Mismatch {
                reason: format!("open component {o} has multiplicity {m}"),
            });
        }
        let meets: u32 = exc.iter().map(|e| p.intersection(o, e)).sum();
        if meets != 1 {
            return Err(Mismatch {
                reason: format!("open component {o} meets the exceptional set with total intersection {meets}"),
            });
        }
    }
    let mut names: Vec<String> = exc.iter().map(|s| s.to_string()).collect();
    names.push("+".into());
    let mut marks: Vec<u32> = exc.iter().map(|e| p.multiplicity(e).unwrap_or(0)).collect();
    marks.push(1);
    let plus = exc.len();
    let mut edges = Vec::new();
    for i in 0..exc.len() {
        for j in i + 1..exc.len() {
            let k = p.intersection(exc[i], exc[j]);
            if k > 0 {
                edges.push((i, j, k));
            }
        }
        let k: u32 = open.iter().map(|o| p.intersection(o, exc[i])).sum();
        if k > 0 {
            edges.push((i, plus, k));
        }
    }
    Ok((
        MarkedGraph {
            names,
            marks,
            edges,
            special: Some(plus),
        },
        open.iter().map(|s| s.to_string()).collect(),
    ))
}

pub fn match_profile(p: &DivisorProfile, d: &AffineDiagram) -> std::result::Result<DiagramMatch, Mismatch> {
    let (g, open) = profile_graph(p)?;
    match find_isomorphism(&g, &d.graph) {
        Some(map) => Ok(DiagramMatch {
            kind: d.kind.to_string(),
            mapping: map
                .iter()
                .enumerate()
                .map(|(i, &j)| (g.names[i].clone(), d.graph.names[j].clone()))
                .collect(),
            open_components: open,
        }),
        None => {
            let mut pm = g.marks.clone();
            let mut dm = d.graph.marks.clone();
            pm.sort_unstable();
            dm.sort_unstable();
            let reason = if g.len() != d.graph.len() {
                format!(
                    "profile has {} nodes after collapsing open components, diagram has {}",
                    g.len(),
                    d.graph.len()
                )
            } else if pm != dm {
                format!("marks differ: profile {pm:?}, diagram {dm:?}")
            } else {
                "marks agree but the intersection graph is not isomorphic to the diagram".into()
            };
            Err(Mismatch { reason })
        }
    }
}
