//! Box Følner sequences in ℤ^d, the windows X_m they cut out of X, and
//! r-interiors of windows.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::group_graph::{word_ball, GroupElement, OrientedEdge, PeriodicGraph, Vertex};

/// Λ_m = corner + {0,…,m−1}^d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FolnerSet {
    pub dimension: usize,
    pub index: usize,
    pub corner: GroupElement,
    elements: Vec<GroupElement>,
}

pub fn folner_box(dimension: usize, m: usize) -> FolnerSet {
    FolnerSet::boxed(dimension, m, GroupElement::ZERO)
}

impl FolnerSet {
    pub fn boxed(dimension: usize, m: usize, corner: GroupElement) -> Self {
        assert!(m >= 1, "Følner index starts at 1");
        let side = m as i64;
        let span = |a: usize| if a < dimension { 0..side } else { 0..1 };
        let mut elements = Vec::with_capacity(m.pow(dimension as u32));
        for x in span(0) {
            for y in span(1) {
                for z in span(2) {
                    elements.push(corner + GroupElement([x, y, z]));
                }
            }
        }
        FolnerSet { dimension, index: m, corner, elements }
    }

    pub fn translated(&self, gamma: GroupElement) -> Self {
        FolnerSet::boxed(self.dimension, self.index, self.corner + gamma)
    }

    /// The box grown by `pad` on every side (a superset, not part of the tower).
    pub fn padded(&self, pad: usize) -> Self {
        let p = pad as i64;
        let mut shift = GroupElement::ZERO;
        for a in 0..self.dimension {
            shift.0[a] = -p;
        }
        FolnerSet::boxed(self.dimension, self.index + 2 * pad, self.corner + shift)
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        (0..3).all(|a| {
            let c = g.coord(a) - self.corner.coord(a);
            if a < self.dimension {
                (0..self.index as i64).contains(&c)
            } else {
                c == 0
            }
        })
    }
}

/// #∂_δΛ and #Λ for the two-sided collar
/// ∂_δΛ = {γ : dist(γ, Λ) ≤ δ and dist(γ, Γ∖Λ) ≤ δ}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryRatio {
    pub boundary: usize,
    pub size: usize,
}

impl BoundaryRatio {
    pub fn value(&self) -> f64 {
        self.boundary as f64 / self.size as f64
    }
}

pub fn isoperimetric_ratio(set: &FolnerSet, delta: usize) -> BoundaryRatio {
    let ball = word_ball(set.dimension, delta);
    let mut candidates: HashSet<GroupElement> = HashSet::new();
    for g in set.elements() {
        for b in &ball {
            candidates.insert(*g + *b);
        }
    }
    // every candidate is within δ of Λ by construction
    let boundary = candidates
        .iter()
        .filter(|g| {
            if set.contains(g) {
                ball.iter().any(|b| !set.contains(&(**g + *b)))
            } else {
                true
            }
        })
        .count();
    BoundaryRatio { boundary, size: set.len() }
}

/// X_m: vertices (orbit, γ) with γ ∈ Λ_m, ordered by (translate, orbit).
#[derive(Clone, Debug)]
pub struct Window {
    vertices: Vec<Vertex>,
    index: HashMap<Vertex, usize>,
    folner: FolnerSet,
}

pub fn window_subgraph(graph: &PeriodicGraph, set: &FolnerSet) -> Window {
    let mut vertices = Vec::with_capacity(set.len() * graph.fundamental_size());
    for g in set.elements() {
        for o in 0..graph.fundamental_size() {
            vertices.push(Vertex::new(o, *g));
        }
    }
    vertices.sort();
    let index = vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    Window { vertices, index, folner: set.clone() }
}

impl Window {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, v: &Vertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.index.contains_key(v)
    }

    pub fn folner(&self) -> &FolnerSet {
        &self.folner
    }

    /// #Λ_m, the normalization of all window densities.
    pub fn normalization(&self) -> usize {
        self.folner.len()
    }

    /// Positive edges with both endpoints in the window.
    pub fn edges(&self, graph: &PeriodicGraph) -> Vec<OrientedEdge> {
        self.vertices
            .iter()
            .flat_map(|v| graph.neighbors(v))
            .filter(|e| e.is_positive() && self.contains(&e.terminus))
            .collect()
    }

    /// Valence of `v` in the induced subgraph.
    pub fn inner_valence(&self, graph: &PeriodicGraph, v: &Vertex) -> usize {
        graph.neighbors(v).iter().filter(|e| self.contains(&e.terminus)).count()
    }
}

/// Split of a window into its r-interior Y and the collar verts(w) ∖ Y.
#[derive(Clone, Debug)]
pub struct Interior {
    pub radius: usize,
    /// Window indices of Y, increasing.
    pub interior: Vec<usize>,
    /// Window indices of the collar, increasing.
    pub boundary: Vec<usize>,
}

/// Y = vertices whose simplicial r-ball lies in the window, i.e. whose
/// distance to X ∖ w exceeds r. Distances come from a breadth-first search
/// seeded at the outer vertex boundary and confined to the window.
pub fn interior_vertices(graph: &PeriodicGraph, window: &Window, radius: usize) -> Interior {
    let n = window.len();
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for (i, v) in window.vertices().iter().enumerate() {
        if graph.neighbors(v).iter().any(|e| !window.contains(&e.terminus)) {
            dist[i] = 1;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        if dist[i] > radius {
            continue;
        }
        for e in graph.neighbors(&window.vertices()[i]) {
            if let Some(j) = window.index_of(&e.terminus) {
                if dist[j] == usize::MAX {
                    dist[j] = dist[i] + 1;
                    queue.push_back(j);
                }
            }
        }
    }
    let (interior, boundary): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| dist[i] > radius);
    Interior { radius, interior, boundary }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_graph::{build_graph, GraphSpec};

    #[test]
    fn boxes() {
        let b = folner_box(1, 3);
        let xs: Vec<_> = b.elements().iter().map(|g| g.coord(0)).collect();
        assert_eq!(xs, vec![0, 1, 2]);
        assert_eq!(folner_box(2, 2).len(), 4);
        assert_eq!(folner_box(2, 10).len(), 100);
        assert_eq!(folner_box(3, 4).len(), 64);
        // nested
        let small = folner_box(2, 5);
        let big = folner_box(2, 6);
        assert!(small.elements().iter().all(|g| big.contains(g)));
    }

    #[test]
    fn boundary_ratios() {
        let r = isoperimetric_ratio(&folner_box(1, 10), 1);
        assert_eq!(r, BoundaryRatio { boundary: 4, size: 10 });
        assert!((r.value() - 0.4).abs() < 1e-15);
        let r = isoperimetric_ratio(&folner_box(2, 10), 1);
        assert_eq!(r, BoundaryRatio { boundary: 76, size: 100 });
        for d in 1..=3 {
            for m in 2..6 {
                let a = isoperimetric_ratio(&folner_box(d, m), 1).value();
                let b = isoperimetric_ratio(&folner_box(d, 2 * m), 1).value();
                assert!(b < a, "d={d} m={m}");
            }
        }
    }

    #[test]
    fn windows() {
        let line = build_graph(&GraphSpec::line()).unwrap();
        let w = window_subgraph(&line, &folner_box(1, 3));
        assert_eq!(w.len(), 3);
        assert_eq!(w.edges(&line).len(), 2);

        let sq = build_graph(&GraphSpec::square()).unwrap();
        let w = window_subgraph(&sq, &folner_box(2, 2));
        assert_eq!(w.edges(&sq).len(), 4);
        assert!(w.vertices().iter().all(|v| w.inner_valence(&sq, v) == 2));

        let tri = build_graph(&GraphSpec::triangle_cells()).unwrap();
        let w = window_subgraph(&tri, &folner_box(1, 5));
        assert_eq!(w.len(), 15);
        assert_eq!(w.edges(&tri).len(), 15);
        // lexicographic (translate, orbit)
        assert_eq!(w.vertices()[1], Vertex::new(1, GroupElement::ZERO));
        assert_eq!(w.vertices()[3], Vertex::new(0, GroupElement::from_slice(&[1])));
    }

    #[test]
    fn interiors() {
        let line = build_graph(&GraphSpec::line()).unwrap();
        let w = window_subgraph(&line, &folner_box(1, 5));
        let i = interior_vertices(&line, &w, 1);
        assert_eq!(i.interior, vec![1, 2, 3]);
        assert_eq!(i.boundary, vec![0, 4]);
        let i0 = interior_vertices(&line, &w, 0);
        assert!(i0.boundary.is_empty());
        assert_eq!(i0.interior.len(), 5);

        let sq = build_graph(&GraphSpec::square()).unwrap();
        for m in 3..9 {
            let w = window_subgraph(&sq, &folner_box(2, m));
            assert_eq!(interior_vertices(&sq, &w, 1).interior.len(), (m - 2) * (m - 2));
        }

        let tri = build_graph(&GraphSpec::triangle_cells()).unwrap();
        let w = window_subgraph(&tri, &folner_box(1, 4));
        assert_eq!(interior_vertices(&tri, &w, 3).interior.len(), 12);
    }

    #[test]
    fn interior_matches_ball_definition() {
        let sq = build_graph(&GraphSpec::square()).unwrap();
        let w = window_subgraph(&sq, &folner_box(2, 7));
        for r in 0..4 {
            let split = interior_vertices(&sq, &w, r);
            for (i, v) in w.vertices().iter().enumerate() {
                let inside = sq.ball(v, r).keys().all(|u| w.contains(u));
                assert_eq!(inside, split.interior.contains(&i), "r={r} v={v:?}");
            }
        }
    }

    #[test]
    fn interiors_shrink_with_radius_and_partition() {
        let sq = build_graph(&GraphSpec::square()).unwrap();
        let w = window_subgraph(&sq, &folner_box(2, 9));
        let mut prev: Option<Vec<usize>> = None;
        for r in 0..5 {
            let s = interior_vertices(&sq, &w, r);
            assert_eq!(s.interior.len() + s.boundary.len(), w.len());
            assert!(s.interior.iter().all(|i| !s.boundary.contains(i)));
            if let Some(p) = prev {
                assert!(s.interior.iter().all(|i| p.contains(i)));
            }
            prev = Some(s.interior);
        }
    }

    #[test]
    fn collar_fraction_bound() {
        // #(X_m ∖ Y_m(δ)) / #X_m < 4dδ/m for boxes with m ≥ 4δ
        let sq = build_graph(&GraphSpec::square()).unwrap();
        for delta in 1..3 {
            let mut last = f64::INFINITY;
            for m in (4 * delta)..(4 * delta + 12) {
                let w = window_subgraph(&sq, &folner_box(2, m));
                let s = interior_vertices(&sq, &w, delta);
                let frac = s.boundary.len() as f64 / w.len() as f64;
                assert!(frac < 4.0 * 2.0 * delta as f64 / m as f64);
                assert!(frac < last);
                last = frac;
            }
        }
    }
}
