use crate::error::{Error, Result};
use crate::perm::{face_verts, Perm4};

/// One side of a face pairing: face `face` of tetrahedron `tet`, carried by
/// the vertex permutation `perm` (which must map `face` to the index of the
/// target face).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub tet: usize,
    pub face: u8,
    pub perm: Perm4,
}

/// A pseudo-simplicial triangulation: a set of tetrahedra together with a
/// face-pairing involution. Face `f` of a tetrahedron is the face opposite
/// vertex `f`. Values are immutable once built; every operation returns a
/// new triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    gluings: Vec<[Option<Gluing>; 4]>,
}

/// How a triangulation fared under validation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriClass {
    Invalid,
    ValidBounded,
    ValidClosed,
}

/// Report-style validation outcome; never an error.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub class: TriClass,
    pub involution_violations: Vec<(usize, u8)>,
    pub self_gluings: Vec<(usize, u8)>,
    pub bad_permutations: Vec<(usize, u8)>,
    pub connected: bool,
    pub boundary_faces: usize,
    pub reversed_edges: usize,
    pub bad_vertex_links: usize,
}

impl ValidationReport {
    pub fn violations(&self) -> usize {
        self.involution_violations.len()
            + self.self_gluings.len()
            + self.bad_permutations.len()
            + self.reversed_edges
            + self.bad_vertex_links
    }

    pub fn is_valid(&self) -> bool {
        self.class != TriClass::Invalid
    }
}

impl Triangulation {
    /// A triangulation with `n` tetrahedra and no gluings.
    pub fn new(tet_count: usize) -> Triangulation {
        Triangulation { gluings: vec![[None; 4]; tet_count] }
    }

    pub fn tet_count(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, tet: usize, face: u8) -> Option<Gluing> {
        self.gluings[tet][face as usize]
    }

    pub fn is_boundary(&self, tet: usize, face: u8) -> bool {
        self.gluings[tet][face as usize].is_none()
    }

    pub fn boundary_faces(&self) -> Vec<(usize, u8)> {
        let mut out = Vec::new();
        for t in 0..self.tet_count() {
            for f in 0..4u8 {
                if self.is_boundary(t, f) {
                    out.push((t, f));
                }
            }
        }
        out
    }

    /// Glue face `f` of `t` to face `f2` of `t2` via `perm` and record the
    /// inverse pairing. Fails if either side is occupied, the faces coincide,
    /// or `perm` does not carry `f` to `f2`.
    pub fn glue(&mut self, t: usize, f: u8, t2: usize, f2: u8, perm: Perm4) -> Result<()> {
        if perm.apply(f) != f2 {
            return Err(Error::InvalidGluing(format!(
                "permutation {perm} does not map face {f} to face {f2}"
            )));
        }
        if t == t2 && f == f2 {
            return Err(Error::InvalidGluing(format!("face {f} of tetrahedron {t} glued to itself")));
        }
        if self.gluings[t][f as usize].is_some() || self.gluings[t2][f2 as usize].is_some() {
            return Err(Error::InvalidGluing(format!(
                "face already glued: ({t},{f}) or ({t2},{f2})"
            )));
        }
        self.gluings[t][f as usize] = Some(Gluing { tet: t2, face: f2, perm });
        self.gluings[t2][f2 as usize] = Some(Gluing { tet: t, face: f, perm: perm.inverse() });
        Ok(())
    }

    /// Remove the pairing at `(t, f)` and at its partner.
    pub fn unglue(&mut self, t: usize, f: u8) {
        if let Some(g) = self.gluings[t][f as usize].take() {
            self.gluings[g.tet][g.face as usize] = None;
        }
    }

    /// Build from an explicit table without consistency checks; pair with
    /// [`Triangulation::validate`] to diagnose. Used by the JSON loader and
    /// by tests that construct deliberately broken tables.
    pub fn from_raw(gluings: Vec<[Option<Gluing>; 4]>) -> Triangulation {
        Triangulation { gluings }
    }

    pub fn raw(&self) -> &[[Option<Gluing>; 4]] {
        &self.gluings
    }

    /// Apply a relabeling: tetrahedron `t` becomes `tet_map[t]` and its
    /// vertices are renamed by `vertex_maps[t]`.
    pub fn relabel(&self, tet_map: &[usize], vertex_maps: &[Perm4]) -> Triangulation {
        let n = self.tet_count();
        assert_eq!(tet_map.len(), n);
        assert_eq!(vertex_maps.len(), n);
        let mut out = vec![[None; 4]; n];
        for t in 0..n {
            for f in 0..4u8 {
                if let Some(g) = self.gluings[t][f as usize] {
                    let nt = tet_map[t];
                    let nf = vertex_maps[t].apply(f);
                    let perm = vertex_maps[g.tet].compose(&g.perm).compose(&vertex_maps[t].inverse());
                    out[nt][nf as usize] =
                        Some(Gluing { tet: tet_map[g.tet], face: perm.apply(nf), perm });
                }
            }
        }
        Triangulation { gluings: out }
    }

    pub fn is_connected(&self) -> bool {
        let n = self.tet_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(t) = stack.pop() {
            for f in 0..4u8 {
                if let Some(g) = self.gluings[t][f as usize] {
                    if g.tet < n && !seen[g.tet] {
                        seen[g.tet] = true;
                        count += 1;
                        stack.push(g.tet);
                    }
                }
            }
        }
        count == n
    }

    /// Structural table checks: involution, no face glued to itself, and
    /// `perm(face) == target face` on every record.
    fn table_violations(&self) -> (Vec<(usize, u8)>, Vec<(usize, u8)>, Vec<(usize, u8)>) {
        let mut involution = Vec::new();
        let mut self_glued = Vec::new();
        let mut bad_perm = Vec::new();
        for t in 0..self.tet_count() {
            for f in 0..4u8 {
                if let Some(g) = self.gluings[t][f as usize] {
                    if g.tet >= self.tet_count() {
                        involution.push((t, f));
                        continue;
                    }
                    if g.perm.apply(f) != g.face {
                        bad_perm.push((t, f));
                    }
                    if g.tet == t && g.face == f {
                        self_glued.push((t, f));
                        continue;
                    }
                    match self.gluings[g.tet][g.face as usize] {
                        Some(back) if back.tet == t && back.face == f && back.perm == g.perm.inverse() => {}
                        _ => involution.push((t, f)),
                    }
                }
            }
        }
        (involution, self_glued, bad_perm)
    }

    /// Full validation. Reports all violations and classifies the
    /// triangulation; degenerate inputs (no tetrahedra, disconnected) are
    /// classified valid-bounded.
    pub fn validate(&self) -> ValidationReport {
        let (involution_violations, self_gluings, bad_permutations) = self.table_violations();
        let structural_ok =
            involution_violations.is_empty() && self_gluings.is_empty() && bad_permutations.is_empty();
        let connected = self.is_connected();
        let boundary_faces = self.boundary_faces().len();

        if !structural_ok {
            return ValidationReport {
                class: TriClass::Invalid,
                involution_violations,
                self_gluings,
                bad_permutations,
                connected,
                boundary_faces,
                reversed_edges: 0,
                bad_vertex_links: 0,
            };
        }

        let skel = crate::skeleton::Skeleton::build_unchecked(self);
        let reversed_edges = skel.edges.iter().filter(|e| e.reversed).count();
        let bad_vertex_links = skel
            .vertices
            .iter()
            .filter(|v| {
                !v.link_connected || v.link_euler != if v.on_boundary { 1 } else { 2 }
            })
            .count();

        let class = if reversed_edges > 0 || bad_vertex_links > 0 {
            TriClass::Invalid
        } else if boundary_faces == 0 && connected && self.tet_count() > 0 {
            TriClass::ValidClosed
        } else {
            TriClass::ValidBounded
        };
        ValidationReport {
            class,
            involution_violations,
            self_gluings,
            bad_permutations,
            connected,
            boundary_faces,
            reversed_edges,
            bad_vertex_links,
        }
    }

    /// `true` iff the tetrahedra admit orientations making every gluing
    /// orientation-reversing on faces (so the quotient is orientable).
    pub fn is_orientable(&self) -> bool {
        let n = self.tet_count();
        let mut orient: Vec<i8> = vec![0; n];
        for start in 0..n {
            if orient[start] != 0 {
                continue;
            }
            orient[start] = 1;
            let mut stack = vec![start];
            while let Some(t) = stack.pop() {
                for f in 0..4u8 {
                    if let Some(g) = self.gluings[t][f as usize] {
                        // consistent iff orient[t] * orient[t'] == -sign(perm)
                        let required = -g.perm.sign() * orient[t];
                        if orient[g.tet] == 0 {
                            orient[g.tet] = required;
                            stack.push(g.tet);
                        } else if orient[g.tet] != required {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// The one-tetrahedron solid torus: faces 2 and 3 identified by the cycle
/// 0 -> 1 -> 2 -> 3 -> 0. Boundary edge slopes {1, 2, 3}.
pub fn one_tet_solid_torus() -> Triangulation {
    let mut tri = Triangulation::new(1);
    tri.glue(0, 2, 0, 3, Perm4::new([1, 2, 3, 0])).unwrap();
    tri
}

/// Convenience for tests and examples: faces of a face index.
pub fn face_vertices(f: u8) -> [u8; 3] {
    face_verts(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_is_valid_bounded() {
        let tri = Triangulation::new(0);
        let report = tri.validate();
        assert_eq!(report.class, TriClass::ValidBounded);
        assert_eq!(report.violations(), 0);
    }

    #[test]
    fn lone_tet_is_valid_bounded() {
        let tri = Triangulation::new(1);
        let report = tri.validate();
        assert_eq!(report.class, TriClass::ValidBounded);
        assert_eq!(report.boundary_faces, 4);
    }

    #[test]
    fn s1_is_valid_bounded() {
        let tri = one_tet_solid_torus();
        let report = tri.validate();
        assert_eq!(report.class, TriClass::ValidBounded);
        assert_eq!(report.violations(), 0);
        assert_eq!(report.boundary_faces, 2);
        assert!(tri.is_orientable());
    }

    #[test]
    fn corrupted_involution_is_reported() {
        // face 0 glued to face 1, inverse record deliberately wrong
        let perm = Perm4::new([1, 0, 2, 3]);
        let good = Gluing { tet: 0, face: 1, perm };
        let bad = Gluing { tet: 0, face: 0, perm }; // should be perm.inverse()... same here
        // build a two-sided record whose back-pointer references the wrong face
        let tri = Triangulation::from_raw(vec![[
            Some(good),
            Some(Gluing { tet: 0, face: 2, perm: perm.inverse() }),
            Some(bad),
            None,
        ]]);
        let report = tri.validate();
        assert_eq!(report.class, TriClass::Invalid);
        assert!(!report.involution_violations.is_empty() || !report.bad_permutations.is_empty());
    }

    #[test]
    fn face_glued_to_itself_rejected() {
        let mut tri = Triangulation::new(1);
        assert!(tri.glue(0, 0, 0, 0, Perm4::IDENTITY).is_err());
    }

    #[test]
    fn relabel_preserves_validity() {
        let tri = one_tet_solid_torus();
        let relabeled = tri.relabel(&[0], &[Perm4::new([2, 0, 3, 1])]);
        assert_eq!(relabeled.validate().class, TriClass::ValidBounded);
        assert!(relabeled.is_orientable());
    }
}
