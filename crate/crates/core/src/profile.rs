//! Divisors of pulled-back functions: weighted curve components and their intersections.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    /// A compact curve over the singular point.
    Exceptional,
    /// A non-compact curve: a proper transform of part of (F = 0).
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub id: String,
    pub kind: ComponentKind,
    pub multiplicity: u32,
}

/// A divisor Σ mᵢ Cᵢ together with the intersection numbers Cᵢ·Cⱼ of distinct components.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DivisorProfile {
    pub components: Vec<Component>,
    pub adjacency: Vec<(String, String, u32)>,
}

impl DivisorProfile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, id: impl Into<String>, kind: ComponentKind, multiplicity: u32) {
        self.components.push(Component {
            id: id.into(),
            kind,
            multiplicity,
        });
    }

    /// Record an intersection; repeated pairs accumulate.
    pub fn connect(&mut self, a: &str, b: &str, count: u32) {
        if count == 0 || a == b {
            return;
        }
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        if let Some(e) = self.adjacency.iter_mut().find(|e| e.0 == a && e.1 == b) {
            e.2 += count;
        } else {
            self.adjacency.push((a.to_string(), b.to_string(), count));
        }
    }

    pub fn get(&self, id: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.id == id)
    }

    pub fn multiplicity(&self, id: &str) -> Option<u32> {
        self.get(id).map(|c| c.multiplicity)
    }

    pub fn intersection(&self, a: &str, b: &str) -> u32 {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.adjacency
            .iter()
            .find(|e| e.0 == a && e.1 == b)
            .map_or(0, |e| e.2)
    }

    pub fn exceptional(&self) -> impl Iterator<Item = &Component> {
        self.components
            .iter()
            .filter(|c| c.kind == ComponentKind::Exceptional)
    }

    pub fn open(&self) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(|c| c.kind == ComponentKind::Open)
    }

    /// Exceptional multiplicities in component order.
    pub fn exceptional_multiplicities(&self) -> Vec<u32> {
        self.exceptional().map(|c| c.multiplicity).collect()
    }

    /// Drop components of multiplicity zero together with their intersections.
    pub fn prune_zero_open(&mut self) {
        let dead: Vec<String> = self
            .components
            .iter()
            .filter(|c| c.kind == ComponentKind::Open && c.multiplicity == 0)
            .map(|c| c.id.clone())
            .collect();
        self.components.retain(|c| !dead.contains(&c.id));
        self.adjacency
            .retain(|e| !dead.contains(&e.0) && !dead.contains(&e.1));
    }

    /// Rename every component through `f` (ids must stay distinct).
    pub fn relabel(&self, f: impl Fn(&str) -> String) -> DivisorProfile {
        let mut out = DivisorProfile::new();
        for c in &self.components {
            out.add(f(&c.id), c.kind, c.multiplicity);
        }
        for (a, b, n) in &self.adjacency {
            out.connect(&f(a), &f(b), *n);
        }
        out
    }

    /// Sum of two divisors on the same components (intersections are taken from `self`).
    pub fn add_multiplicities(&self, other: &DivisorProfile) -> Option<DivisorProfile> {
        let mut out = self.clone();
        for c in &mut out.components {
            c.multiplicity += other.multiplicity(&c.id)?;
        }
        Some(out)
    }
}
