use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::perm::{edge_index, face_verts};
use crate::skeleton::Skeleton;
use crate::tri::Triangulation;

/// A finitely generated abelian group in Smith normal form: free rank plus
/// invariant factors `torsion[0] | torsion[1] | ...`, each at least 2.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn trivial() -> AbelianGroup {
        AbelianGroup { rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> AbelianGroup {
        AbelianGroup { rank, torsion: Vec::new() }
    }

    pub fn cyclic(n: u64) -> AbelianGroup {
        if n <= 1 {
            AbelianGroup::trivial()
        } else {
            AbelianGroup { rank: 0, torsion: vec![n] }
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Order of the group: `Some(product of torsion)` when finite, `None`
    /// when of positive rank.
    pub fn order(&self) -> Option<u64> {
        if self.rank > 0 {
            None
        } else {
            Some(self.torsion.iter().product())
        }
    }
}

impl std::fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z_{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Dense integer matrix for the tiny chain complexes arising here.
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] += v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    fn add_row(&mut self, src: usize, dst: usize, factor: &BigInt) {
        for c in 0..self.cols {
            let v = self.get(src, c).clone() * factor;
            self.data[dst * self.cols + c] += v;
        }
    }

    fn add_col(&mut self, src: usize, dst: usize, factor: &BigInt) {
        for r in 0..self.rows {
            let v = self.get(r, src).clone() * factor;
            self.data[r * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c).clone();
            self.set(r, c, v);
        }
    }
}

/// Result of a Smith normal form computation: the diagonal entries (invariant
/// factors, nonnegative, divisibility chain) and the row transform `U` with
/// `U * A * V = D`. `V` is not tracked.
pub struct Snf {
    pub diag: Vec<BigInt>,
    pub row_transform: Vec<Vec<BigInt>>,
}

/// Smith normal form by repeated pivoting; entries are arbitrary precision
/// so intermediate growth is harmless at these sizes.
pub fn smith_normal_form(mut m: IntMatrix) -> Snf {
    let (rows, cols) = (m.rows, m.cols);
    let mut u: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| (0..rows).map(|j| if i == j { BigInt::from(1) } else { BigInt::zero() }).collect())
        .collect();

    let mut add_row = |u: &mut Vec<Vec<BigInt>>, src: usize, dst: usize, factor: &BigInt| {
        for j in 0..rows {
            let v = u[src][j].clone() * factor;
            u[dst][j] += v;
        }
    };

    let k_max = rows.min(cols);
    let mut k = 0;
    while k < k_max {
        // find the pivot: minimal nonzero absolute value in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for r in k..rows {
            for c in k..cols {
                if !m.get(r, c).is_zero() {
                    match pivot {
                        None => pivot = Some((r, c)),
                        Some((pr, pc)) => {
                            if m.get(r, c).abs() < m.get(pr, pc).abs() {
                                pivot = Some((r, c));
                            }
                        }
                    }
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        m.swap_rows(k, pr);
        u.swap(k, pr);
        m.swap_cols(k, pc);

        // eliminate; pivoting may need several passes when remainders appear
        loop {
            let mut clean = true;
            for r in k + 1..rows {
                if m.get(r, k).is_zero() {
                    continue;
                }
                let q = -(m.get(r, k) / m.get(k, k));
                m.add_row(k, r, &q);
                add_row(&mut u, k, r, &q);
                if !m.get(r, k).is_zero() {
                    // remainder smaller than pivot: swap up and restart
                    m.swap_rows(k, r);
                    u.swap(k, r);
                    clean = false;
                }
            }
            for c in k + 1..cols {
                if m.get(k, c).is_zero() {
                    continue;
                }
                let q = -(m.get(k, c) / m.get(k, k));
                m.add_col(k, c, &q);
                if !m.get(k, c).is_zero() {
                    m.swap_cols(k, c);
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }

        // divisibility: fold any entry not divisible by the pivot into row k
        let mut fixed = false;
        'outer: for r in k + 1..rows {
            for c in k + 1..cols {
                if !(m.get(r, c) % m.get(k, k)).is_zero() {
                    let one = BigInt::from(1);
                    m.add_row(r, k, &one);
                    add_row(&mut u, r, k, &one);
                    fixed = true;
                    break 'outer;
                }
            }
        }
        if fixed {
            continue; // redo this k with the disturbed row
        }

        if m.get(k, k).is_negative() {
            m.negate_row(k);
            for v in u[k].iter_mut() {
                *v = -v.clone();
            }
        }
        k += 1;
    }

    let diag = (0..k_max).map(|i| m.get(i, i).clone()).collect();
    Snf { diag, row_transform: u }
}

/// The two boundary matrices of the quotient CW complex: `d1[v][e]` over the
/// edge classes and `d2[e][f]` over the face classes (each face's cell uses
/// the representative slot, traversed `x -> y -> z -> x` over its ascending
/// vertices).
pub fn boundary_matrices(tri: &Triangulation, skel: &Skeleton) -> (IntMatrix, IntMatrix) {
    let mut d1 = IntMatrix::zero(skel.vertices.len(), skel.edges.len());
    for (idx, e) in skel.edges.iter().enumerate() {
        let (t, slot) = e.slots[0];
        let [a, b] = crate::perm::EDGE_VERTS[slot as usize];
        let head = skel.vertex_class_of[t][b as usize];
        let tail = skel.vertex_class_of[t][a as usize];
        d1.add_to(head, idx, 1);
        d1.add_to(tail, idx, -1);
    }

    let mut d2 = IntMatrix::zero(skel.edges.len(), skel.faces.len());
    for (fidx, fclass) in skel.faces.iter().enumerate() {
        let (t, f) = fclass.slots[0];
        let [x, y, z] = face_verts(f);
        // traversal x->y, y->z, z->x; the slot orientation is min->max
        for (p, q, sign) in [(x, y, 1i64), (y, z, 1), (z, x, -1)] {
            let e = edge_index(p, q);
            let class = skel.edge_class_of[t][e];
            let pos = skel.edges[class].slots.iter().position(|&s| s == (t, e as u8)).unwrap();
            let parity = skel.edges[class].slot_parity[pos];
            let coeff = if parity { -sign } else { sign };
            d2.add_to(class, fidx, coeff);
        }
    }
    (d1, d2)
}

fn h1_from_matrices(edge_count: usize, d1: IntMatrix, d2: IntMatrix) -> Result<AbelianGroup> {
    let snf1 = smith_normal_form(d1);
    let rank1 = snf1.diag.iter().filter(|d| !d.is_zero()).count();
    let snf2 = smith_normal_form(d2);
    let rank2 = snf2.diag.iter().filter(|d| !d.is_zero()).count();
    let rank = edge_count - rank1 - rank2;
    let mut torsion = Vec::new();
    for d in &snf2.diag {
        if d.is_zero() {
            continue;
        }
        let v: u64 = d
            .try_into()
            .map_err(|_| Error::Other("torsion coefficient exceeds u64".into()))?;
        if v > 1 {
            torsion.push(v);
        }
    }
    torsion.sort_unstable();
    Ok(AbelianGroup { rank, torsion })
}

/// First integral homology of the quotient space.
pub fn h1(tri: &Triangulation) -> Result<AbelianGroup> {
    let report = tri.validate();
    if !report.is_valid() {
        return Err(Error::InvalidGluing("invalid triangulation".into()));
    }
    let skel = Skeleton::build_unchecked(tri);
    let (d1, d2) = boundary_matrices(tri, &skel);
    h1_from_matrices(skel.edges.len(), d1, d2)
}

/// H1 of a one-vertex triangulation together with the image of every edge
/// class. With a single vertex every edge is a loop and H1 is the cokernel
/// of the face boundary map; images are reported as coordinates `(free
/// part, torsion residues)` in the Smith basis.
pub struct H1WithImages {
    pub group: AbelianGroup,
    /// For each edge class: coordinates in the free summands.
    pub free_images: Vec<Vec<BigInt>>,
    /// For each edge class: residues modulo each torsion factor.
    pub torsion_images: Vec<Vec<u64>>,
}

pub fn h1_with_edge_images(tri: &Triangulation, skel: &Skeleton) -> Result<H1WithImages> {
    if skel.vertices.len() != 1 {
        return Err(Error::NotOneVertex);
    }
    let edge_count = skel.edges.len();
    let (_, d2) = boundary_matrices(tri, skel);
    let snf = smith_normal_form(d2);
    let mut torsion_factors: Vec<(usize, u64)> = Vec::new(); // (snf row, factor)
    let mut free_rows: Vec<usize> = Vec::new();
    for r in 0..edge_count {
        let d = snf.diag.get(r).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            free_rows.push(r);
        } else {
            let v: u64 = (&d)
                .try_into()
                .map_err(|_| Error::Other("torsion coefficient exceeds u64".into()))?;
            if v > 1 {
                torsion_factors.push((r, v));
            }
        }
    }
    let group = AbelianGroup {
        rank: free_rows.len(),
        torsion: {
            let mut t: Vec<u64> = torsion_factors.iter().map(|&(_, v)| v).collect();
            t.sort_unstable();
            t
        },
    };
    let mut free_images = Vec::with_capacity(edge_count);
    let mut torsion_images = Vec::with_capacity(edge_count);
    for e in 0..edge_count {
        // coordinates of basis vector e in the Smith basis: column e of U
        let coords: Vec<&BigInt> = (0..edge_count).map(|r| &snf.row_transform[r][e]).collect();
        free_images.push(free_rows.iter().map(|&r| coords[r].clone()).collect());
        torsion_images.push(
            torsion_factors
                .iter()
                .map(|&(r, v)| {
                    let m = coords[r] % BigInt::from(v);
                    let m = if m.is_negative() { m + BigInt::from(v) } else { m };
                    u64::try_from(&m).unwrap()
                })
                .collect(),
        );
    }
    Ok(H1WithImages { group, free_images, torsion_images })
}

/// Meridian-intersection slope of an edge in a one-vertex solid-torus
/// triangulation: the absolute value of its image in H1 = Z.
pub fn solid_torus_edge_slopes(tri: &Triangulation, skel: &Skeleton) -> Result<Vec<u64>> {
    let images = h1_with_edge_images(tri, skel)?;
    if images.group.rank != 1 || !images.group.torsion.is_empty() {
        return Err(Error::Precondition(format!(
            "expected H1 = Z for a solid torus, got {}",
            images.group
        )));
    }
    Ok(images
        .free_images
        .iter()
        .map(|coords| u64::try_from(&coords[0].abs()).unwrap_or(u64::MAX))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tri::one_tet_solid_torus;

    fn mat(rows: usize, cols: usize, entries: &[i64]) -> IntMatrix {
        let mut m = IntMatrix::zero(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, BigInt::from(entries[r * cols + c]));
            }
        }
        m
    }

    #[test]
    fn snf_known_matrix() {
        // diag(1, 3, 21, 0) example
        let m = mat(4, 4, &[-6, 111, -36, 6, 5, -672, 210, 74, 0, -255, 81, 24, -7, 255, -81, -10]);
        let snf = smith_normal_form(m);
        let d: Vec<i64> = snf.diag.iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(d, vec![1, 3, 21, 0]);
    }

    #[test]
    fn snf_divisibility_chain() {
        let m = mat(3, 3, &[2, 0, 0, 0, 3, 0, 0, 0, 5]);
        let snf = smith_normal_form(m);
        let d: Vec<i64> = snf.diag.iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(d, vec![1, 1, 30]);
    }

    #[test]
    fn solid_torus_h1_is_z() {
        let tri = one_tet_solid_torus();
        assert_eq!(h1(&tri).unwrap(), AbelianGroup::free(1));
    }

    #[test]
    fn s1_slopes_are_1_2_3() {
        let tri = one_tet_solid_torus();
        let skel = Skeleton::build_unchecked(&tri);
        let mut slopes = solid_torus_edge_slopes(&tri, &skel).unwrap();
        slopes.sort_unstable();
        assert_eq!(slopes, vec![1, 2, 3]);
    }
}
