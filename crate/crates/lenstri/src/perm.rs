/// A permutation of the four vertex labels `0..4` of a tetrahedron.
///
/// `images[i]` is the image of label `i`. Gluing permutations carry the three
/// vertices of a face onto the target face and the opposite vertex onto the
/// target's opposite vertex.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm4 {
    images: [u8; 4],
}

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4 { images: [0, 1, 2, 3] };

    pub fn new(images: [u8; 4]) -> Perm4 {
        let mut seen = [false; 4];
        for &i in &images {
            assert!(i < 4 && !seen[i as usize], "not a permutation: {images:?}");
            seen[i as usize] = true;
        }
        Perm4 { images }
    }

    pub fn try_new(images: [u8; 4]) -> Option<Perm4> {
        let mut seen = [false; 4];
        for &i in &images {
            if i >= 4 || seen[i as usize] {
                return None;
            }
            seen[i as usize] = true;
        }
        Some(Perm4 { images })
    }

    pub fn apply(&self, i: u8) -> u8 {
        self.images[i as usize]
    }

    pub fn images(&self) -> [u8; 4] {
        self.images
    }

    pub fn inverse(&self) -> Perm4 {
        let mut inv = [0u8; 4];
        for i in 0..4 {
            inv[self.images[i] as usize] = i as u8;
        }
        Perm4 { images: inv }
    }

    /// Composition `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Perm4) -> Perm4 {
        let mut images = [0u8; 4];
        for i in 0..4 {
            images[i] = self.images[other.images[i] as usize];
        }
        Perm4 { images }
    }

    /// Sign of the permutation: +1 even, -1 odd.
    pub fn sign(&self) -> i8 {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.images[i] > self.images[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Index in the lexicographic enumeration of S4 (0..24).
    pub fn index(&self) -> u8 {
        let mut remaining = vec![0u8, 1, 2, 3];
        let mut idx = 0u8;
        let factorial = [6u8, 2, 1, 1];
        for i in 0..4 {
            let pos = remaining.iter().position(|&x| x == self.images[i]).unwrap();
            idx += pos as u8 * factorial[i];
            remaining.remove(pos);
        }
        idx
    }

    pub fn from_index(mut idx: u8) -> Perm4 {
        assert!(idx < 24);
        let mut remaining = vec![0u8, 1, 2, 3];
        let mut images = [0u8; 4];
        let factorial = [6u8, 2, 1, 1];
        for i in 0..4 {
            let pos = (idx / factorial[i]) as usize;
            idx %= factorial[i];
            images[i] = remaining.remove(pos);
        }
        Perm4 { images }
    }

    pub fn all() -> impl Iterator<Item = Perm4> {
        (0..24).map(Perm4::from_index)
    }
}

impl std::fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}{}{}{}]",
            self.images[0], self.images[1], self.images[2], self.images[3]
        )
    }
}

impl std::fmt::Display for Perm4 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}{}{}{}",
            self.images[0], self.images[1], self.images[2], self.images[3]
        )
    }
}

/// Vertex pairs of the six edges of a tetrahedron, in index order.
/// Edge `i` and edge `5 - i` are opposite.
pub const EDGE_VERTS: [[u8; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// Edge index of the pair `{a, b}`, `a != b`.
pub fn edge_index(a: u8, b: u8) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    EDGE_VERTS.iter().position(|&[x, y]| x == a && y == b).unwrap()
}

/// The three vertices of face `f` (the face opposite vertex `f`), ascending.
pub fn face_verts(f: u8) -> [u8; 3] {
    let mut verts = [0u8; 3];
    let mut k = 0;
    for v in 0..4u8 {
        if v != f {
            verts[k] = v;
            k += 1;
        }
    }
    verts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        for i in 0..24 {
            assert_eq!(Perm4::from_index(i).index(), i);
        }
    }

    #[test]
    fn compose_and_inverse() {
        for a in Perm4::all() {
            assert_eq!(a.compose(&a.inverse()), Perm4::IDENTITY);
            for b in Perm4::all() {
                let c = a.compose(&b);
                for i in 0..4 {
                    assert_eq!(c.apply(i), a.apply(b.apply(i)));
                }
                assert_eq!(c.sign(), a.sign() * b.sign());
            }
        }
    }

    #[test]
    fn edge_indexing() {
        for e in 0..6 {
            let [a, b] = EDGE_VERTS[e];
            assert_eq!(edge_index(a, b), e);
            assert_eq!(edge_index(b, a), e);
        }
        // opposite edges are disjoint
        for e in 0..6 {
            let [a, b] = EDGE_VERTS[e];
            let [c, d] = EDGE_VERTS[5 - e];
            assert!(a != c && a != d && b != c && b != d);
        }
    }
}
