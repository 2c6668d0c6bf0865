use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::perm::{edge_index, face_verts, EDGE_VERTS};
use crate::tri::Triangulation;

/// A tetrahedron-edge slot: edge `edge` (0..6) of tetrahedron `tet`.
pub type EdgeSlot = (usize, u8);

/// Union-find over slots with an orientation bit per element relative to its
/// parent. A union demanding inconsistent orientation marks the class
/// reversed instead of failing, so censuses can count and discard.
struct ParityForest {
    parent: Vec<usize>,
    parity: Vec<bool>,
    reversed: Vec<bool>,
}

impl ParityForest {
    fn new(n: usize) -> ParityForest {
        ParityForest { parent: (0..n).collect(), parity: vec![false; n], reversed: vec![false; n] }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        if self.parent[x] == x {
            return (x, false);
        }
        let (root, p) = self.find(self.parent[x]);
        self.parent[x] = root;
        self.parity[x] ^= p;
        (root, self.parity[x])
    }

    /// Unite with `parity(a) ^ parity(b) == flip`.
    fn union(&mut self, a: usize, b: usize, flip: bool) {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            if pa ^ pb != flip {
                self.reversed[ra] = true;
            }
            return;
        }
        self.parent[rb] = ra;
        self.parity[rb] = pa ^ pb ^ flip;
        self.reversed[ra] |= self.reversed[rb];
    }
}

/// Plain union-find for vertex slots and edge-end slots.
struct Forest {
    parent: Vec<usize>,
}

impl Forest {
    fn new(n: usize) -> Forest {
        Forest { parent: (0..n).collect() }
    }
    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] == x {
            x
        } else {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
            r
        }
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[rb.max(ra)] = ra.min(rb);
        }
    }
}

#[derive(Clone, Debug)]
pub struct EdgeClass {
    /// Slots in this class, ascending.
    pub slots: Vec<EdgeSlot>,
    /// Orientation of each slot relative to the representative slot.
    pub slot_parity: Vec<bool>,
    pub degree: usize,
    pub boundary: bool,
    /// Some slot identification reverses the edge; the quotient is then not
    /// a manifold along this edge.
    pub reversed: bool,
    /// Slots in cyclic (interior) or fan (boundary) order around the edge,
    /// where defined: absent for reversed edges.
    pub ordered_slots: Option<Vec<EdgeSlot>>,
}

#[derive(Clone, Debug)]
pub struct VertexClass {
    /// Vertex slots `(tet, vertex)` in this class, ascending.
    pub slots: Vec<(usize, u8)>,
    pub link_euler: i64,
    pub link_connected: bool,
    pub on_boundary: bool,
}

#[derive(Clone, Debug)]
pub struct FaceClass {
    /// One slot for a boundary face, two for an interior face.
    pub slots: Vec<(usize, u8)>,
    pub interior: bool,
    /// Edge classes of the representative slot's three sides (with
    /// multiplicity), indexed by ascending edge index within the face.
    pub edge_classes: [usize; 3],
}

/// The quotient skeleton of a triangulation: edge, vertex and face classes
/// with degrees, boundary data and vertex-link invariants.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub edges: Vec<EdgeClass>,
    pub vertices: Vec<VertexClass>,
    pub faces: Vec<FaceClass>,
    /// Edge class of each slot, `[tet][edge]`.
    pub edge_class_of: Vec<[usize; 6]>,
    /// Vertex class of each slot, `[tet][vertex]`.
    pub vertex_class_of: Vec<[usize; 4]>,
    /// Face class of each slot, `[tet][face]`.
    pub face_class_of: Vec<[usize; 4]>,
}

impl Skeleton {
    /// Compute the skeleton without validating the gluing table first. The
    /// caller is responsible for structural sanity (see `Triangulation::validate`).
    pub fn build_unchecked(tri: &Triangulation) -> Skeleton {
        let n = tri.tet_count();

        // --- edge classes with orientation parity ---
        let mut edge_forest = ParityForest::new(6 * n);
        // --- vertex classes ---
        let mut vertex_forest = Forest::new(4 * n);
        // --- edge-end classes (corners of vertex links) ---
        let mut end_forest = Forest::new(12 * n);

        let eslot = |t: usize, e: usize| 6 * t + e;
        let vslot = |t: usize, v: u8| 4 * t + v as usize;
        // end 0 of an edge is at its smaller vertex, end 1 at the larger
        let endslot = |t: usize, e: usize, end: usize| 12 * t + 2 * e + end;

        for t in 0..n {
            for f in 0..4u8 {
                let Some(g) = tri.gluing(t, f) else { continue };
                // process each pairing once
                if (g.tet, g.face) < (t, f) {
                    continue;
                }
                for v in face_verts(f) {
                    vertex_forest.union(vslot(t, v), vslot(g.tet, g.perm.apply(v)));
                }
                let fv = face_verts(f);
                for i in 0..3 {
                    for j in i + 1..3 {
                        let (a, b) = (fv[i], fv[j]); // a < b
                        let (ia, ib) = (g.perm.apply(a), g.perm.apply(b));
                        let e = edge_index(a, b);
                        let e2 = edge_index(ia, ib);
                        // orientation flips iff the image order is reversed
                        let flip = ia > ib;
                        edge_forest.union(eslot(t, e), eslot(g.tet, e2), flip);
                        // end 0 sits at the smaller vertex; the end at a maps
                        // to the end at its image
                        let end_a = if flip { 1 } else { 0 };
                        end_forest.union(endslot(t, e, 0), endslot(g.tet, e2, end_a));
                        end_forest.union(endslot(t, e, 1), endslot(g.tet, e2, 1 - end_a));
                    }
                }
            }
        }

        // gather edge classes
        let mut edge_class_of = vec![[usize::MAX; 6]; n];
        let mut edge_groups: BTreeMap<usize, Vec<(EdgeSlot, bool)>> = BTreeMap::new();
        for t in 0..n {
            for e in 0..6usize {
                let (root, parity) = edge_forest.find(eslot(t, e));
                edge_groups.entry(root).or_default().push(((t, e as u8), parity));
            }
        }
        let mut edges = Vec::with_capacity(edge_groups.len());
        for (idx, (root, group)) in edge_groups.iter().enumerate() {
            let rep_parity = group[0].1;
            let slots: Vec<EdgeSlot> = group.iter().map(|&(s, _)| s).collect();
            let slot_parity: Vec<bool> = group.iter().map(|&(_, p)| p ^ rep_parity).collect();
            for &(t, e) in &slots {
                edge_class_of[t][e as usize] = idx;
            }
            edges.push(EdgeClass {
                degree: slots.len(),
                slots,
                slot_parity,
                boundary: false,
                reversed: edge_forest.reversed[*root],
                ordered_slots: None,
            });
        }

        // boundary flags: an edge lying in a boundary face is a boundary edge
        for t in 0..n {
            for f in 0..4u8 {
                if tri.is_boundary(t, f) {
                    let fv = face_verts(f);
                    for i in 0..3 {
                        for j in i + 1..3 {
                            let e = edge_index(fv[i], fv[j]);
                            edges[edge_class_of[t][e]].boundary = true;
                        }
                    }
                }
            }
        }

        // fan/cyclic orders
        for idx in 0..edges.len() {
            if !edges[idx].reversed {
                edges[idx].ordered_slots = edge_fan_order(tri, &edges[idx]);
            }
        }

        // gather vertex classes
        let mut vertex_class_of = vec![[usize::MAX; 4]; n];
        let mut vertex_groups: BTreeMap<usize, Vec<(usize, u8)>> = BTreeMap::new();
        for t in 0..n {
            for v in 0..4u8 {
                let root = vertex_forest.find(vslot(t, v));
                vertex_groups.entry(root).or_default().push((t, v));
            }
        }
        // link vertices: edge-end classes, attributed to the vertex class of
        // their end slot
        let mut end_class_count: BTreeMap<usize, ()> = BTreeMap::new();
        let mut ends_by_vertex_root: BTreeMap<usize, BTreeMap<usize, ()>> = BTreeMap::new();
        for t in 0..n {
            for e in 0..6usize {
                let [a, b] = EDGE_VERTS[e];
                for (end, v) in [(0usize, a), (1usize, b)] {
                    let root = end_forest.find(endslot(t, e, end));
                    end_class_count.insert(root, ());
                    let vr = vertex_forest.find(vslot(t, v));
                    ends_by_vertex_root.entry(vr).or_default().insert(root, ());
                }
            }
        }

        let mut vertices = Vec::with_capacity(vertex_groups.len());
        for (vr, group) in vertex_groups.iter() {
            // link triangles F = slots; link edges: per slot 3 sides, glued
            // in pairs across interior faces
            let f_link = group.len() as i64;
            let mut free_sides = 0i64;
            let mut glued_pairs = 0i64;
            // connectivity of link: union-find over the slots of this class
            let mut local_index: BTreeMap<(usize, u8), usize> = BTreeMap::new();
            for (i, &s) in group.iter().enumerate() {
                local_index.insert(s, i);
            }
            let mut link_forest = Forest::new(group.len());
            for &(t, v) in group.iter() {
                for f in 0..4u8 {
                    if f == v {
                        continue;
                    }
                    match tri.gluing(t, f) {
                        None => free_sides += 1,
                        Some(g) => {
                            glued_pairs += 1; // counted from both sides; halve below
                            let other = (g.tet, g.perm.apply(v));
                            let (a, b) = (local_index[&(t, v)], local_index[&other]);
                            link_forest.union(a, b);
                        }
                    }
                }
            }
            debug_assert!(glued_pairs % 2 == 0);
            glued_pairs /= 2;
            let e_link = glued_pairs + free_sides;
            let v_link = ends_by_vertex_root.get(vr).map_or(0, |m| m.len()) as i64;
            let link_euler = v_link - e_link + f_link;
            let mut roots: BTreeMap<usize, ()> = BTreeMap::new();
            for i in 0..group.len() {
                roots.insert(link_forest.find(i), ());
            }
            vertices.push(VertexClass {
                slots: group.clone(),
                link_euler,
                link_connected: roots.len() <= 1,
                on_boundary: free_sides > 0,
            });
        }
        for (idx, v) in vertices.iter().enumerate() {
            for &(t, vv) in &v.slots {
                vertex_class_of[t][vv as usize] = idx;
            }
        }

        // face classes
        let mut face_class_of = vec![[usize::MAX; 4]; n];
        let mut faces = Vec::new();
        for t in 0..n {
            for f in 0..4u8 {
                if face_class_of[t][f as usize] != usize::MAX {
                    continue;
                }
                let idx = faces.len();
                let mut slots = vec![(t, f)];
                if let Some(g) = tri.gluing(t, f) {
                    if (g.tet, g.face) != (t, f) {
                        slots.push((g.tet, g.face));
                    }
                }
                for &(tt, ff) in &slots {
                    face_class_of[tt][ff as usize] = idx;
                }
                let fv = face_verts(f);
                let mut ecs = [0usize; 3];
                let mut k = 0;
                for i in 0..3 {
                    for j in i + 1..3 {
                        ecs[k] = edge_class_of[t][edge_index(fv[i], fv[j])];
                        k += 1;
                    }
                }
                faces.push(FaceClass { interior: slots.len() == 2, slots, edge_classes: ecs });
            }
        }

        Skeleton { edges, vertices, faces, edge_class_of, vertex_class_of, face_class_of }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Boundary edge classes, ascending by class index.
    pub fn boundary_edges(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].boundary).collect()
    }

    /// The degree map `i -> E_i` restricted to a closed one-vertex
    /// triangulation, together with the forced identities.
    pub fn degree_census(&self, tri: &Triangulation) -> Result<BTreeMap<usize, usize>> {
        let report = tri.validate();
        if report.class != crate::tri::TriClass::ValidClosed {
            return Err(Error::NotClosed);
        }
        if self.vertex_count() != 1 {
            return Err(Error::NotOneVertex);
        }
        let mut census: BTreeMap<usize, usize> = BTreeMap::new();
        for e in &self.edges {
            *census.entry(e.degree).or_insert(0) += 1;
        }
        Ok(census)
    }
}

/// Compute the skeleton of a structurally valid triangulation.
pub fn skeleton(tri: &Triangulation) -> Result<Skeleton> {
    let (inv, selfg, badp) = {
        let report = tri.validate();
        (report.involution_violations, report.self_gluings, report.bad_permutations)
    };
    if !(inv.is_empty() && selfg.is_empty() && badp.is_empty()) {
        return Err(Error::InvalidGluing("involution or permutation violations".into()));
    }
    Ok(Skeleton::build_unchecked(tri))
}

/// One step of the fan walk around an edge: the slot's tetrahedron, the
/// vertex pair `(lo, hi)` in that tetrahedron (oriented consistently with
/// the starting slot: `lo` always corresponds to the start's smaller
/// vertex), and the face through which the walk leaves the tetrahedron.
#[derive(Clone, Copy, Debug)]
pub struct FanStep {
    pub tet: usize,
    pub lo: u8,
    pub hi: u8,
    pub leave_face: u8,
}

impl FanStep {
    pub fn slot(&self) -> EdgeSlot {
        (self.tet, edge_index(self.lo, self.hi) as u8)
    }
}

/// Walks the fan of faces around one edge class. For an interior,
/// non-reversed edge this is a cycle through all `degree` slots; for a
/// boundary edge it is the path from one boundary face to the other. The
/// walk visits each slot exactly once; `None` for reversed edges or when the
/// walk is inconsistent with the class degree.
pub fn edge_fan(tri: &Triangulation, class: &EdgeClass) -> Option<Vec<FanStep>> {
    if class.reversed {
        return None;
    }

    // flanking faces of a slot {lo, hi}: the faces opposite the two other
    // vertices; both contain the edge
    let flanks = |lo: u8, hi: u8| -> (u8, u8) {
        let mut it = (0..4u8).filter(|&v| v != lo && v != hi);
        (it.next().unwrap(), it.next().unwrap())
    };

    // pick the start: for boundary edges, a slot flanked by a boundary face
    // (entering from the boundary); otherwise the minimal slot
    let mut start_slot = class.slots[0];
    let mut entry_face: Option<u8> = None;
    if class.boundary {
        'scan: for &(t, e) in &class.slots {
            let [a, b] = EDGE_VERTS[e as usize];
            let (c, d) = flanks(a, b);
            for f in [c, d] {
                if tri.is_boundary(t, f) {
                    start_slot = (t, e);
                    entry_face = Some(f);
                    break 'scan;
                }
            }
        }
        entry_face?;
    }

    let [a, b] = EDGE_VERTS[start_slot.1 as usize];
    let (c, d) = flanks(a, b);
    let leave0 = match entry_face {
        Some(f) => {
            if f == c {
                d
            } else {
                c
            }
        }
        None => c,
    };

    let mut out: Vec<FanStep> = Vec::new();
    let mut cur = FanStep { tet: start_slot.0, lo: a, hi: b, leave_face: leave0 };
    loop {
        out.push(cur);
        if out.len() == class.degree {
            return Some(out);
        }
        if out.len() > class.degree {
            return None;
        }
        match tri.gluing(cur.tet, cur.leave_face) {
            None => {
                // hit the boundary before covering the class
                return None;
            }
            Some(g) => {
                let nlo = g.perm.apply(cur.lo);
                let nhi = g.perm.apply(cur.hi);
                let entered = g.perm.apply(cur.leave_face);
                let (nc, nd) = flanks(nlo.min(nhi), nlo.max(nhi));
                let leave = if nc == entered { nd } else { nc };
                cur = FanStep { tet: g.tet, lo: nlo, hi: nhi, leave_face: leave };
            }
        }
    }
}

fn edge_fan_order(tri: &Triangulation, class: &EdgeClass) -> Option<Vec<EdgeSlot>> {
    edge_fan(tri, class).map(|fan| fan.into_iter().map(|s| s.slot()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tri::one_tet_solid_torus;

    #[test]
    fn lone_tet_skeleton() {
        let tri = Triangulation::new(1);
        let skel = Skeleton::build_unchecked(&tri);
        assert_eq!(skel.edges.len(), 6);
        assert!(skel.edges.iter().all(|e| e.degree == 1 && e.boundary));
        assert_eq!(skel.vertices.len(), 4);
        assert_eq!(skel.faces.len(), 4);
        // every vertex link is a disc
        assert!(skel.vertices.iter().all(|v| v.link_euler == 1 && v.link_connected));
    }

    #[test]
    fn s1_skeleton() {
        let tri = one_tet_solid_torus();
        let skel = Skeleton::build_unchecked(&tri);
        assert_eq!(skel.vertices.len(), 1);
        assert_eq!(skel.edges.len(), 3);
        let mut degrees: Vec<usize> = skel.edges.iter().map(|e| e.degree).collect();
        degrees.sort_unstable();
        assert_eq!(degrees, vec![1, 2, 3]);
        assert!(skel.edges.iter().all(|e| e.boundary && !e.reversed));
        // one interior face pair + two boundary faces
        let interior = skel.faces.iter().filter(|f| f.interior).count();
        assert_eq!(interior, 1);
        assert_eq!(skel.faces.len(), 3);
        // boundary torus: single vertex with disc link
        assert!(skel.vertices[0].on_boundary);
        assert_eq!(skel.vertices[0].link_euler, 1);
    }

    #[test]
    fn s1_edge_fans() {
        let tri = one_tet_solid_torus();
        let skel = Skeleton::build_unchecked(&tri);
        for e in &skel.edges {
            let fan = edge_fan(&tri, e).expect("fan exists");
            assert_eq!(fan.len(), e.degree, "fan covers the class");
        }
    }
}
