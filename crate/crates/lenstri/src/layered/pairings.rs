use super::build::{s_k, LayeredBuild};
use crate::error::{Error, Result};
use crate::perm::{edge_index, face_verts, Perm4};
use crate::skeleton::Skeleton;
use crate::tri::Triangulation;

/// Result of identifying the boundaries of two layered solid tori.
#[derive(Clone, Debug)]
pub struct PairingResult {
    pub tri: Triangulation,
    /// Predicted order of H1; 0 encodes the infinite case (t = s in
    /// pairing 4).
    pub expected_h1_order: u64,
}

/// Slope correspondence of the six boundary pairings, in the listed order:
/// the boundary of `s_k(s)` written `(s+2, s+1, 1)` is matched positionally
/// against the returned triple for `s_k(t)`.
fn pairing_table(s: u64, t: u64, pairing: u8) -> Result<[u64; 3]> {
    Ok(match pairing {
        1 => [t + 1, t + 2, 1],
        2 => [t + 1, 1, t + 2],
        3 => [1, t + 2, t + 1],
        4 => [t + 2, t + 1, 1],
        5 => [t + 2, 1, t + 1],
        6 => [1, t + 1, t + 2],
        _ => return Err(Error::Precondition(format!("pairing index {pairing} not in 1..=6"))),
    })
}

fn expected_order(s: u64, t: u64, pairing: u8) -> u64 {
    match pairing {
        1 => s + t + 3,
        2 => (s + 1) * (t + 2) + 1,
        3 => (s + 2) * (t + 1) + 1,
        4 => t - s,
        5 => s * (t + 1) + t,
        6 => (s + 1) * (t + 2) + t + 1,
        _ => unreachable!(),
    }
}

/// Vertex of the triangular face `(tet, face)` opposite the side lying in
/// the given edge class.
fn corner_opposite(skel: &Skeleton, tet: usize, face: u8, edge_class: usize) -> Result<u8> {
    let fv = face_verts(face);
    for &corner in &fv {
        let side: Vec<u8> = fv.iter().copied().filter(|&v| v != corner).collect();
        let e = edge_index(side[0], side[1]);
        if skel.edge_class_of[tet][e] == edge_class {
            return Ok(corner);
        }
    }
    Err(Error::Precondition("edge class not on this face".into()))
}

/// Glue the boundaries of `s_k(s)` and `s_k(t)` by the indexed boundary-edge
/// pairing. The identification is the simplicial map extending the edge
/// correspondence; an error is returned if no candidate extends to a valid
/// closed triangulation.
pub fn pair_solid_tori(s: u64, t: u64, pairing: u8) -> Result<PairingResult> {
    if !(1 <= s && s <= t) {
        return Err(Error::Precondition(format!("need t >= s >= 1, got s={s}, t={t}")));
    }
    let b1 = s_k(s)?;
    let b2 = s_k(t)?;
    let map_to = pairing_table(s, t, pairing)?;
    let from = [s + 2, s + 1, 1];

    // combined triangulation: b2's tetrahedra shifted past b1's
    let shift = b1.tet_count();
    let mut raw = b1.tri().raw().to_vec();
    for tet in b2.tri().raw() {
        let mut row = [None; 4];
        for (f, g) in tet.iter().enumerate() {
            row[f] = g.map(|mut g| {
                g.tet += shift;
                g
            });
        }
        raw.push(row);
    }

    let slope_class = |b: &LayeredBuild, slope: u64| -> Result<usize> { b.boundary_edge_with_slope(slope) };

    let faces1 = b1.tri().boundary_faces();
    let faces2 = b2.tri().boundary_faces();
    debug_assert_eq!(faces1.len(), 2);
    debug_assert_eq!(faces2.len(), 2);

    let mut candidates = Vec::new();
    for assign in [[0usize, 1], [1, 0]] {
        let mut tri = Triangulation::from_raw(raw.clone());
        let mut ok = true;
        for (i, &(t1, f1)) in faces1.iter().enumerate() {
            let (t2, f2) = faces2[assign[i]];
            // vertex map by matching opposite boundary edge classes
            let mut images = [4u8; 4];
            images[f1 as usize] = f2;
            for (pos, &x) in from.iter().enumerate() {
                let c1 = slope_class(&b1, x)?;
                let c2 = slope_class(&b2, map_to[pos])?;
                let v1 = corner_opposite(b1.skeleton(), t1, f1, c1)?;
                let v2 = corner_opposite(b2.skeleton(), t2, f2, c2)?;
                images[v1 as usize] = v2;
            }
            let Some(perm) = Perm4::try_new(images) else {
                ok = false;
                break;
            };
            if tri.glue(t1, f1, t2 + shift, f2, perm).is_err() {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let report = tri.validate();
        if report.class == crate::tri::TriClass::ValidClosed {
            candidates.push(tri);
        }
    }

    let tri = candidates.into_iter().next().ok_or_else(|| {
        Error::Precondition(format!(
            "pairing {pairing} of s={s}, t={t}: the edge identification extends to no simplicial map"
        ))
    })?;
    Ok(PairingResult { tri, expected_h1_order: expected_order(s, t, pairing) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::h1;

    fn h1_order(tri: &Triangulation) -> u64 {
        h1(tri).unwrap().order().unwrap_or(0)
    }

    #[test]
    fn pairing_h1_orders_match() {
        for s in 1..=3u64 {
            for t in s..=3 {
                for pairing in 1..=6u8 {
                    let result = pair_solid_tori(s, t, pairing).unwrap();
                    assert_eq!(
                        h1_order(&result.tri),
                        result.expected_h1_order,
                        "pairing {pairing} s={s} t={t}"
                    );
                    assert_eq!(result.tri.tet_count(), (s + t) as usize);
                }
            }
        }
    }

    #[test]
    fn pairing_one_small() {
        let result = pair_solid_tori(1, 2, 1).unwrap();
        assert_eq!(result.expected_h1_order, 6);
        assert_eq!(h1_order(&result.tri), 6);
    }

    #[test]
    fn pairing_four_has_degree_two_edge() {
        let result = pair_solid_tori(1, 3, 4).unwrap();
        assert_eq!(result.expected_h1_order, 2);
        let skel = Skeleton::build_unchecked(&result.tri);
        assert!(skel.edges.iter().any(|e| e.degree == 2));
    }
}
