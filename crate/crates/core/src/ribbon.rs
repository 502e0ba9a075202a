//! Ribbon (fat) graphs: graphs with a cyclic order of half-edges at every
//! vertex. A ribbon graph thickens to a compact oriented surface with
//! boundary; its boundary components are the faces traced below, and its
//! first homology is the cycle space of the graph.

use crate::linalg::IntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum End {
    Tail,
    Head,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfEdge {
    pub edge: usize,
    pub end: End,
}

impl HalfEdge {
    pub fn tail(edge: usize) -> Self {
        HalfEdge { edge, end: End::Tail }
    }

    pub fn head(edge: usize) -> Self {
        HalfEdge { edge, end: End::Head }
    }
}

/// An edge traversed forwards (tail to head) or backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub edge: usize,
    pub forward: bool,
}

/// Sign convention for the vertex-local intersection count; fixed so that
/// `⟨a_1, b_1⟩ = +1` on the standard surface model.
const ORIENTATION: i64 = -1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RibbonGraph {
    vertex_count: usize,
    /// `(tail, head)` vertex of each edge.
    edges: Vec<(usize, usize)>,
    /// Counterclockwise order of half-edges around each vertex.
    rotation: Vec<Vec<HalfEdge>>,
}

impl RibbonGraph {
    /// Panics if the rotation does not list every half-edge exactly once at
    /// its own vertex.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>, rotation: Vec<Vec<HalfEdge>>) -> Self {
        assert_eq!(rotation.len(), vertex_count);
        let mut seen = vec![[false; 2]; edges.len()];
        for (v, rot) in rotation.iter().enumerate() {
            for h in rot {
                let (t, hd) = edges[h.edge];
                let (at, slot) = match h.end {
                    End::Tail => (t, 0),
                    End::Head => (hd, 1),
                };
                assert_eq!(at, v, "half-edge listed at the wrong vertex");
                assert!(!seen[h.edge][slot], "half-edge listed twice");
                seen[h.edge][slot] = true;
            }
        }
        assert!(seen.iter().all(|s| s[0] && s[1]), "half-edge missing from rotation");
        RibbonGraph {
            vertex_count,
            edges,
            rotation,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn rotation(&self, v: usize) -> &[HalfEdge] {
        &self.rotation[v]
    }

    fn vertex_of(&self, h: HalfEdge) -> usize {
        let (t, hd) = self.edges[h.edge];
        match h.end {
            End::Tail => t,
            End::Head => hd,
        }
    }

    /// Successor of `h` in the cyclic order at its vertex.
    fn next_around(&self, h: HalfEdge) -> HalfEdge {
        let rot = &self.rotation[self.vertex_of(h)];
        let i = rot.iter().position(|&x| x == h).expect("half-edge in rotation");
        rot[(i + 1) % rot.len()]
    }

    /// Boundary cycles. Arriving at a vertex through half-edge `h`, the walk
    /// leaves through the successor of `h`; leaving through a tail traverses
    /// the edge forwards. Faces are listed by first departing half-edge in
    /// (edge, end) order; an isolated vertex contributes one empty face.
    pub fn faces(&self) -> Vec<Vec<Step>> {
        let mut used = vec![[false; 2]; self.edges.len()];
        let mut faces = Vec::new();
        for e in 0..self.edges.len() {
            for end in [End::Tail, End::Head] {
                let start = HalfEdge { edge: e, end };
                let slot = (end == End::Head) as usize;
                if used[e][slot] {
                    continue;
                }
                let mut face = Vec::new();
                let mut depart = start;
                loop {
                    let s = (depart.end == End::Head) as usize;
                    used[depart.edge][s] = true;
                    let forward = depart.end == End::Tail;
                    face.push(Step {
                        edge: depart.edge,
                        forward,
                    });
                    let arrive = HalfEdge {
                        edge: depart.edge,
                        end: if forward { End::Head } else { End::Tail },
                    };
                    depart = self.next_around(arrive);
                    if depart == start {
                        break;
                    }
                }
                faces.push(face);
            }
        }
        for v in 0..self.vertex_count {
            if self.rotation[v].is_empty() {
                faces.push(Vec::new());
            }
        }
        faces
    }

    /// Edge chain of a closed walk.
    pub fn chain_of(&self, steps: &[Step]) -> Vec<i64> {
        let mut c = vec![0; self.edges.len()];
        for s in steps {
            c[s.edge] += if s.forward { 1 } else { -1 };
        }
        c
    }

    /// True iff the chain has zero boundary.
    pub fn is_cycle(&self, chain: &[i64]) -> bool {
        let mut b = vec![0i64; self.vertex_count];
        for (e, &(t, h)) in self.edges.iter().enumerate() {
            b[h] += chain[e];
            b[t] -= chain[e];
        }
        b.iter().all(|&x| x == 0)
    }

    /// Bilinear form `K` on edge chains with `zᵀ K w` the algebraic
    /// intersection number of the cycles `z`, `w` in the thickened surface.
    ///
    /// `w` is pushed off to the left of every edge band, so all crossings
    /// happen inside vertex disks. There each chain restricts to arcs whose
    /// endpoints sit on the disk boundary, and two arc systems in a disk
    /// meet algebraically according to how their endpoints interleave; with
    /// a cut point fixed on the circle that count is
    /// `Σ z_P w_Q [P before Q]`. The cut point drops out because each chain
    /// has zero total boundary in each disk.
    pub fn intersection_form(&self) -> IntMatrix {
        let e = self.edges.len();
        let mut k = IntMatrix::zeros(e, e);
        for rot in &self.rotation {
            // (slot, offset, edge, sign) for z-points and w-points
            let z_points: Vec<(usize, i8, usize, i64)> = rot
                .iter()
                .enumerate()
                .map(|(s, h)| (s, 0, h.edge, end_sign(h.end)))
                .collect();
            let w_points: Vec<(usize, i8, usize, i64)> = rot
                .iter()
                .enumerate()
                .map(|(s, h)| {
                    let offset = if h.end == End::Tail { 1 } else { -1 };
                    (s, offset, h.edge, end_sign(h.end))
                })
                .collect();
            for &(sp, op, ep, gp) in &z_points {
                for &(sq, oq, eq, gq) in &w_points {
                    if (sp, op) < (sq, oq) {
                        k[(ep, eq)] += ORIENTATION * gp * gq;
                    }
                }
            }
        }
        k
    }

    /// Component label of every vertex, numbered in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.vertex_count];
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(t, h) in &self.edges {
            adj[t].push(h);
            adj[h].push(t);
        }
        let mut next = 0;
        for root in 0..self.vertex_count {
            if label[root] != usize::MAX {
                continue;
            }
            label[root] = next;
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// Spanning forest by breadth-first search (edges scanned in index
    /// order) and the fundamental cycle of every non-tree edge.
    pub fn cycle_basis(&self) -> CycleBasis {
        let v = self.vertex_count;
        let mut root_path: Vec<Option<Vec<i64>>> = vec![None; v];
        let mut in_tree = vec![false; self.edges.len()];
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); v];
        for (e, &(t, h)) in self.edges.iter().enumerate() {
            incident[t].push(e);
            if h != t {
                incident[h].push(e);
            }
        }
        for root in 0..v {
            if root_path[root].is_some() {
                continue;
            }
            root_path[root] = Some(vec![0; self.edges.len()]);
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                for &e in &incident[x] {
                    let (t, h) = self.edges[e];
                    let (other, dir) = if t == x { (h, 1) } else { (t, -1) };
                    if root_path[other].is_none() {
                        // path from `other` to root: step back along e, then x's path
                        let mut p = root_path[x].clone().unwrap();
                        p[e] -= dir;
                        root_path[other] = Some(p);
                        in_tree[e] = true;
                        queue.push_back(other);
                    }
                }
            }
        }
        let root_path: Vec<Vec<i64>> = root_path.into_iter().map(Option::unwrap).collect();
        let mut non_tree = Vec::new();
        let mut cycles = Vec::new();
        for (e, &(t, h)) in self.edges.iter().enumerate() {
            if in_tree[e] {
                continue;
            }
            let mut c = vec![0; self.edges.len()];
            c[e] += 1;
            for (i, x) in c.iter_mut().enumerate() {
                *x += root_path[h][i] - root_path[t][i];
            }
            non_tree.push(e);
            cycles.push(c);
        }
        CycleBasis { non_tree, cycles }
    }
}

fn end_sign(end: End) -> i64 {
    match end {
        End::Tail => 1,
        End::Head => -1,
    }
}

/// Fundamental cycles of a spanning forest. A cycle's coordinates in this
/// basis are its coefficients on the non-tree edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleBasis {
    pub non_tree: Vec<usize>,
    pub cycles: Vec<Vec<i64>>,
}

impl CycleBasis {
    pub fn rank(&self) -> usize {
        self.non_tree.len()
    }

    pub fn coordinates(&self, chain: &[i64]) -> Vec<i64> {
        self.non_tree.iter().map(|&e| chain[e]).collect()
    }

    pub fn as_matrix(&self, edge_count: usize) -> IntMatrix {
        IntMatrix::from_columns(edge_count, &self.cycles)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Once-holed torus: one vertex, rotation a⁻ b⁺ a⁺ b⁻.
    fn torus() -> RibbonGraph {
        RibbonGraph::new(
            1,
            vec![(0, 0), (0, 0)],
            vec![vec![
                HalfEdge::head(0),
                HalfEdge::tail(1),
                HalfEdge::tail(0),
                HalfEdge::head(1),
            ]],
        )
    }

    #[test]
    fn torus_has_one_face_and_unit_pairing() {
        let g = torus();
        assert_eq!(g.faces().len(), 1);
        let k = g.intersection_form();
        assert_eq!(k.bilinear(&[1, 0], &[0, 1]), 1);
        assert_eq!(k.bilinear(&[0, 1], &[1, 0]), -1);
        assert_eq!(k.bilinear(&[1, 1], &[1, 1]), 0);
    }

    #[test]
    fn annulus_pairing_vanishes() {
        let g = RibbonGraph::new(1, vec![(0, 0)], vec![vec![HalfEdge::head(0), HalfEdge::tail(0)]]);
        assert_eq!(g.faces().len(), 2);
        assert_eq!(g.intersection_form().bilinear(&[1], &[1]), 0);
    }

    #[test]
    fn cycle_basis_of_theta_graph() {
        // two vertices joined by three edges
        let g = RibbonGraph::new(
            2,
            vec![(0, 1), (0, 1), (0, 1)],
            vec![
                vec![HalfEdge::tail(0), HalfEdge::tail(1), HalfEdge::tail(2)],
                vec![HalfEdge::head(2), HalfEdge::head(1), HalfEdge::head(0)],
            ],
        );
        let basis = g.cycle_basis();
        assert_eq!(basis.rank(), 2);
        for c in &basis.cycles {
            assert!(g.is_cycle(c));
        }
        // planar embedding: two faces of degree 2 plus the outer one
        assert_eq!(g.faces().len(), 3);
    }
}
