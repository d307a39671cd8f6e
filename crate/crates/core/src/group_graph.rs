//! Lattices Γ = ℤ^d (d ≤ 3) acting freely on graphs with a finite
//! fundamental domain.
//!
//! A vertex is a pair (orbit, translate): `orbit` indexes the fundamental
//! domain and `translate` is the group element carrying the representative
//! onto the vertex. Edges are generated from a finite list of templates
//! `(origin orbit, terminus orbit, offset)`; the template edge from
//! `(origin, γ)` to `(terminus, γ + offset)` is the positive orientation and
//! its reversal is the other one.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_DIMENSION: usize = 3;

/// An element of ℤ^d stored as a 3-vector; coordinates beyond `d` stay zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(pub [i64; MAX_DIMENSION]);

impl GroupElement {
    pub const ZERO: GroupElement = GroupElement([0; MAX_DIMENSION]);

    pub fn from_slice(coords: &[i64]) -> Self {
        let mut c = [0; MAX_DIMENSION];
        c[..coords.len()].copy_from_slice(coords);
        GroupElement(c)
    }

    pub fn basis(axis: usize) -> Self {
        let mut c = [0; MAX_DIMENSION];
        c[axis] = 1;
        GroupElement(c)
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }

    /// ℓ¹ length, which is the word length for the standard generators.
    pub fn word_length(&self) -> usize {
        self.0.iter().map(|c| c.unsigned_abs() as usize).sum()
    }

    pub fn coord(&self, axis: usize) -> i64 {
        self.0[axis]
    }

    pub fn scale(&self, k: i64) -> Self {
        GroupElement([self.0[0] * k, self.0[1] * k, self.0[2] * k])
    }
}

impl Add for GroupElement {
    type Output = GroupElement;
    fn add(self, rhs: Self) -> Self {
        GroupElement([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl Sub for GroupElement {
    type Output = GroupElement;
    fn sub(self, rhs: Self) -> Self {
        GroupElement([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1], self.0[2] - rhs.0[2]])
    }
}

impl Neg for GroupElement {
    type Output = GroupElement;
    fn neg(self) -> Self {
        GroupElement([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// Field order gives the lexicographic (translate, orbit) ordering used for
/// window enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub translate: GroupElement,
    pub orbit: usize,
}

impl Vertex {
    pub fn new(orbit: usize, translate: GroupElement) -> Self {
        Vertex { translate, orbit }
    }
}

/// Γ acts by translating the second component.
pub fn act(gamma: GroupElement, v: Vertex) -> Vertex {
    Vertex { translate: v.translate + gamma, orbit: v.orbit }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OrientedEdge {
    pub origin: Vertex,
    pub terminus: Vertex,
    pub template: usize,
    pub reversed: bool,
}

impl OrientedEdge {
    pub fn reverse(&self) -> OrientedEdge {
        OrientedEdge {
            origin: self.terminus,
            terminus: self.origin,
            template: self.template,
            reversed: !self.reversed,
        }
    }

    /// Membership in E⁺: the template orientation.
    pub fn is_positive(&self) -> bool {
        !self.reversed
    }

    /// The E⁺ representative of {e, ē}.
    pub fn positive(&self) -> OrientedEdge {
        if self.reversed {
            self.reverse()
        } else {
            *self
        }
    }

    pub fn translated(&self, gamma: GroupElement) -> OrientedEdge {
        OrientedEdge {
            origin: act(gamma, self.origin),
            terminus: act(gamma, self.terminus),
            ..*self
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeTemplate {
    pub origin: usize,
    pub terminus: usize,
    pub offset: GroupElement,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TemplateSpec {
    pub origin: usize,
    pub terminus: usize,
    pub offset: Vec<i64>,
}

/// Declarative graph description as it appears in experiment configs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphSpec {
    pub dimension: usize,
    pub fundamental_domain: usize,
    #[serde(default)]
    pub templates: Vec<TemplateSpec>,
}

impl GraphSpec {
    pub fn line() -> Self {
        GraphSpec {
            dimension: 1,
            fundamental_domain: 1,
            templates: vec![TemplateSpec { origin: 0, terminus: 0, offset: vec![1] }],
        }
    }

    pub fn square() -> Self {
        GraphSpec {
            dimension: 2,
            fundamental_domain: 1,
            templates: vec![
                TemplateSpec { origin: 0, terminus: 0, offset: vec![1, 0] },
                TemplateSpec { origin: 0, terminus: 0, offset: vec![0, 1] },
            ],
        }
    }

    /// ℤ-many disjoint triangles: three orbits joined by zero-offset edges.
    pub fn triangle_cells() -> Self {
        GraphSpec {
            dimension: 1,
            fundamental_domain: 3,
            templates: vec![
                TemplateSpec { origin: 0, terminus: 1, offset: vec![0] },
                TemplateSpec { origin: 1, terminus: 2, offset: vec![0] },
                TemplateSpec { origin: 2, terminus: 0, offset: vec![0] },
            ],
        }
    }

    /// ℤ-many isolated vertices.
    pub fn isolated_points() -> Self {
        GraphSpec { dimension: 1, fundamental_domain: 1, templates: vec![] }
    }
}

#[derive(Clone, Debug)]
pub struct PeriodicGraph {
    dimension: usize,
    fundamental_size: usize,
    templates: Vec<EdgeTemplate>,
    generators: Vec<GroupElement>,
    valence: Vec<usize>,
}

pub fn build_graph(spec: &GraphSpec) -> Result<PeriodicGraph> {
    let d = spec.dimension;
    if d == 0 || d > MAX_DIMENSION {
        return Err(Error::InvalidGraph(format!("dimension {d} not in 1..={MAX_DIMENSION}")));
    }
    if spec.fundamental_domain == 0 {
        return Err(Error::InvalidGraph("empty fundamental domain".into()));
    }
    let n = spec.fundamental_domain;
    let mut templates = Vec::with_capacity(spec.templates.len());
    for (i, t) in spec.templates.iter().enumerate() {
        if t.origin >= n || t.terminus >= n {
            return Err(Error::InvalidGraph(format!(
                "template {i}: orbit index out of range (fundamental domain has {n} orbits)"
            )));
        }
        if t.offset.len() != d {
            return Err(Error::InvalidGraph(format!(
                "template {i}: offset has {} coordinates, expected {d}",
                t.offset.len()
            )));
        }
        let offset = GroupElement::from_slice(&t.offset);
        if t.origin == t.terminus && offset.is_zero() {
            return Err(Error::InvalidGraph(format!("template {i}: self-loop")));
        }
        templates.push(EdgeTemplate { origin: t.origin, terminus: t.terminus, offset });
    }
    let mut valence = vec![0; n];
    for t in &templates {
        valence[t.origin] += 1;
        valence[t.terminus] += 1;
    }
    let generators = (0..d)
        .flat_map(|a| [GroupElement::basis(a), -GroupElement::basis(a)])
        .collect();
    Ok(PeriodicGraph { dimension: d, fundamental_size: n, templates, generators, valence })
}

impl PeriodicGraph {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn fundamental_size(&self) -> usize {
        self.fundamental_size
    }

    pub fn templates(&self) -> &[EdgeTemplate] {
        &self.templates
    }

    /// ± standard basis vectors.
    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn valence(&self, v: &Vertex) -> usize {
        self.valence[v.orbit]
    }

    pub fn max_valence(&self) -> usize {
        self.valence.iter().copied().max().unwrap_or(0)
    }

    /// Largest word length of a template offset.
    pub fn max_offset_length(&self) -> usize {
        self.templates.iter().map(|t| t.offset.word_length()).max().unwrap_or(0)
    }

    /// The E⁺ edge of template `template` starting at translate `at`.
    pub fn positive_edge(&self, template: usize, at: GroupElement) -> OrientedEdge {
        let t = &self.templates[template];
        OrientedEdge {
            origin: Vertex::new(t.origin, at),
            terminus: Vertex::new(t.terminus, at + t.offset),
            template,
            reversed: false,
        }
    }

    /// All oriented edges with origin `v`, in template order (forward before
    /// reversed within a template).
    pub fn neighbors(&self, v: &Vertex) -> Vec<OrientedEdge> {
        let mut out = Vec::with_capacity(self.valence[v.orbit]);
        for (i, t) in self.templates.iter().enumerate() {
            if t.origin == v.orbit {
                out.push(self.positive_edge(i, v.translate));
            }
            if t.terminus == v.orbit {
                out.push(self.positive_edge(i, v.translate - t.offset).reverse());
            }
        }
        out
    }

    /// Vertices within simplicial distance `radius` of `v`, with distances.
    /// Breadth-first search never leaves the `radius`-ball.
    pub fn ball(&self, v: &Vertex, radius: usize) -> HashMap<Vertex, usize> {
        let mut dist = HashMap::new();
        dist.insert(*v, 0usize);
        let mut queue = VecDeque::from([*v]);
        while let Some(u) = queue.pop_front() {
            let du = dist[&u];
            if du == radius {
                continue;
            }
            for e in self.neighbors(&u) {
                if let std::collections::hash_map::Entry::Vacant(slot) = dist.entry(e.terminus) {
                    slot.insert(du + 1);
                    queue.push_back(e.terminus);
                }
            }
        }
        dist
    }

    /// Simplicial distance if it is at most `max`.
    pub fn distance(&self, u: &Vertex, v: &Vertex, max: usize) -> Option<usize> {
        self.ball(u, max).get(v).copied()
    }
}

/// {γ : |γ|₁ ≤ radius} in lexicographic order.
pub fn word_ball(dimension: usize, radius: usize) -> Vec<GroupElement> {
    let r = radius as i64;
    let mut out = Vec::new();
    let range = |axis: usize| if axis < dimension { -r..=r } else { 0..=0 };
    for x in range(0) {
        for y in range(1) {
            for z in range(2) {
                let g = GroupElement([x, y, z]);
                if g.word_length() <= radius {
                    out.push(g);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn g2(x: i64, y: i64) -> GroupElement {
        GroupElement::from_slice(&[x, y])
    }

    #[test]
    fn lattices_build() {
        let line = build_graph(&GraphSpec::line()).unwrap();
        assert_eq!(line.dimension(), 1);
        assert_eq!(line.fundamental_size(), 1);
        let sq = build_graph(&GraphSpec::square()).unwrap();
        assert_eq!(sq.templates().len(), 2);
        let tri = build_graph(&GraphSpec::triangle_cells()).unwrap();
        assert_eq!(tri.fundamental_size(), 3);
    }

    #[test]
    fn rejects_bad_specs() {
        let mut s = GraphSpec::line();
        s.fundamental_domain = 0;
        assert!(matches!(build_graph(&s), Err(Error::InvalidGraph(m)) if m.contains("empty")));

        let mut s = GraphSpec::line();
        s.templates[0].terminus = 1;
        assert!(matches!(build_graph(&s), Err(Error::InvalidGraph(m)) if m.contains("out of range")));

        let mut s = GraphSpec::triangle_cells();
        s.templates[0].terminus = 0;
        assert!(matches!(build_graph(&s), Err(Error::InvalidGraph(m)) if m.contains("self-loop")));

        let mut s = GraphSpec::square();
        s.templates[0].offset = vec![1];
        assert!(build_graph(&s).is_err());
    }

    #[test]
    fn action_examples() {
        let v = Vertex::new(0, g2(2, 3));
        assert_eq!(act(GroupElement::ZERO, v), v);
        assert_eq!(act(g2(1, 0), v), Vertex::new(0, g2(3, 3)));
        assert_eq!(act(g2(-1, -1), act(g2(1, 1), v)), v);
    }

    #[test]
    fn valences() {
        let line = build_graph(&GraphSpec::line()).unwrap();
        let v = Vertex::new(0, GroupElement::from_slice(&[5]));
        let nb = line.neighbors(&v);
        assert_eq!(nb.len(), 2);
        let ends: HashSet<_> = nb.iter().map(|e| e.terminus.translate.coord(0)).collect();
        assert_eq!(ends, HashSet::from([4, 6]));

        let sq = build_graph(&GraphSpec::square()).unwrap();
        assert_eq!(sq.neighbors(&Vertex::new(0, g2(1, -2))).len(), 4);

        let tri = build_graph(&GraphSpec::triangle_cells()).unwrap();
        for o in 0..3 {
            let v = Vertex::new(o, GroupElement::from_slice(&[7]));
            let nb = tri.neighbors(&v);
            assert_eq!(nb.len(), 2);
            assert!(nb.iter().all(|e| e.origin == v && e.terminus.translate == v.translate));
        }
    }

    #[test]
    fn word_balls() {
        assert_eq!(word_ball(1, 0), vec![GroupElement::ZERO]);
        assert_eq!(word_ball(1, 2).len(), 5);
        assert_eq!(word_ball(2, 1).len(), 5);
        // |ℓ¹ ball| in ℤ² is 2r² + 2r + 1; in ℤ³ r=1 gives 7.
        assert_eq!(word_ball(2, 3).len(), 25);
        assert_eq!(word_ball(3, 1).len(), 7);
    }

    #[test]
    fn canonical_orientation() {
        let line = build_graph(&GraphSpec::line()).unwrap();
        let v = Vertex::new(0, GroupElement::ZERO);
        for e in line.neighbors(&v) {
            let p = e.positive();
            assert!(p.is_positive());
            assert_eq!(p.terminus.translate.coord(0) - p.origin.translate.coord(0), 1);
        }
        let sq = build_graph(&GraphSpec::square()).unwrap();
        let pos: Vec<_> = sq
            .neighbors(&Vertex::new(0, GroupElement::ZERO))
            .into_iter()
            .filter(|e| e.is_positive())
            .map(|e| e.terminus.translate)
            .collect();
        assert_eq!(pos, vec![g2(1, 0), g2(0, 1)]);
    }

    #[test]
    fn ball_and_distance() {
        let sq = build_graph(&GraphSpec::square()).unwrap();
        let o = Vertex::new(0, GroupElement::ZERO);
        assert_eq!(sq.ball(&o, 2).len(), 13);
        assert_eq!(sq.distance(&o, &Vertex::new(0, g2(2, -1)), 5), Some(3));
        let tri = build_graph(&GraphSpec::triangle_cells()).unwrap();
        let a = Vertex::new(0, GroupElement::ZERO);
        assert_eq!(tri.distance(&a, &Vertex::new(0, GroupElement::from_slice(&[1])), 10), None);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn element(d: usize) -> impl Strategy<Value = GroupElement> {
            proptest::collection::vec(-20i64..20, d).prop_map(|c| GroupElement::from_slice(&c))
        }

        proptest! {
            #[test]
            fn action_is_free_and_compatible(a in element(2), b in element(2), o in 0usize..3) {
                let v = Vertex::new(o, GroupElement::from_slice(&[1, -4]));
                prop_assert_eq!(act(a, act(b, v)), act(a + b, v));
                prop_assert_eq!(act(a, v) == v, a.is_zero());
            }

            #[test]
            fn neighbors_are_equivariant(g in element(2), x in element(2)) {
                let spec = GraphSpec {
                    dimension: 2,
                    fundamental_domain: 2,
                    templates: vec![
                        TemplateSpec { origin: 0, terminus: 1, offset: vec![0, 0] },
                        TemplateSpec { origin: 1, terminus: 0, offset: vec![1, 0] },
                        TemplateSpec { origin: 0, terminus: 0, offset: vec![0, 1] },
                        TemplateSpec { origin: 0, terminus: 1, offset: vec![0, 0] },
                    ],
                };
                let graph = build_graph(&spec).unwrap();
                for orbit in 0..2 {
                    let v = Vertex::new(orbit, x);
                    let moved: Vec<_> = graph.neighbors(&v).iter().map(|e| e.translated(g)).collect();
                    prop_assert_eq!(moved, graph.neighbors(&act(g, v)));
                    prop_assert_eq!(graph.neighbors(&v).len(), graph.valence(&v));
                    for e in graph.neighbors(&v) {
                        // exactly one of e, ē is positive
                        prop_assert!(e.is_positive() != e.reverse().is_positive());
                        let back = graph.neighbors(&e.terminus);
                        prop_assert!(back.contains(&e.reverse()));
                    }
                }
            }
        }
    }
}
