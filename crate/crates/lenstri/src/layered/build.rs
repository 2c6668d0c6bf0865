use std::collections::BTreeMap;

use super::arith::LensSpec;
use crate::error::{Error, Result};
use crate::perm::{Perm4, EDGE_VERTS};
use crate::skeleton::{edge_fan, FanStep, Skeleton};
use crate::tri::{one_tet_solid_torus, Triangulation};

/// The unordered meridian-intersection numbers `{p, q, p+q}` of the three
/// boundary edges of a one-vertex torus boundary, stored ascending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct SlopeTriple(pub [u64; 3]);

impl SlopeTriple {
    pub fn new(mut values: [u64; 3]) -> Result<SlopeTriple> {
        values.sort_unstable();
        if values[0] + values[1] != values[2] {
            return Err(Error::Precondition(format!(
                "not a slope triple: {values:?} (max must be sum of the others)"
            )));
        }
        Ok(SlopeTriple(values))
    }

    pub fn from_pair(p: u64, q: u64) -> SlopeTriple {
        let mut v = [p, q, p + q];
        v.sort_unstable();
        SlopeTriple(v)
    }

    pub fn contains(&self, x: u64) -> bool {
        self.0.contains(&x)
    }

    /// The two elements other than one occurrence of `x`.
    fn retained(&self, x: u64) -> (u64, u64) {
        let mut rest = Vec::with_capacity(2);
        let mut skipped = false;
        for &v in &self.0 {
            if v == x && !skipped {
                skipped = true;
            } else {
                rest.push(v);
            }
        }
        (rest[0], rest[1])
    }

    /// Slope of the edge created by layering on the edge of slope `x`:
    /// the sum of the retained slopes, or their difference when layering on
    /// the sum edge.
    pub fn layered_slope(&self, x: u64) -> Result<u64> {
        if !self.contains(x) {
            return Err(Error::Precondition(format!("slope {x} not in triple {:?}", self.0)));
        }
        let (r1, r2) = self.retained(x);
        Ok(if x == self.0[2] { r1.abs_diff(r2) } else { r1 + r2 })
    }
}

impl std::fmt::Display for SlopeTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{},{},{}}}", self.0[0], self.0[1], self.0[2])
    }
}

/// One layering step: the slope of the boundary edge that was layered on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct LayerStep {
    pub slope: u64,
}

/// A layered triangulation of the solid torus under construction: the
/// triangulation, its skeleton, the layering history, and the absolute
/// homotopy label of every edge class (image in the fundamental group of the
/// solid torus, up to sign).
#[derive(Clone, Debug)]
pub struct LayeredBuild {
    tri: Triangulation,
    skel: Skeleton,
    /// Label per edge class, indexed like `skel.edges`.
    labels: Vec<u64>,
    steps: Vec<LayerStep>,
    /// Representative slot of the first layered-on edge, when any.
    base_rep: Option<(usize, u8)>,
}

struct BoundaryGeometry {
    /// `(tet, face)` of the two boundary faces flanking the edge, in fan
    /// order, plus the oriented edge ends in each: `lo` ends correspond.
    first_face: (usize, u8),
    last_face: (usize, u8),
    first: FanStep,
    last: FanStep,
}

impl LayeredBuild {
    pub fn tri(&self) -> &Triangulation {
        &self.tri
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skel
    }

    pub fn tet_count(&self) -> usize {
        self.tri.tet_count()
    }

    pub fn steps(&self) -> &[LayerStep] {
        &self.steps
    }

    pub fn label(&self, edge_class: usize) -> u64 {
        self.labels[edge_class]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Boundary edge classes with their slopes, ascending by class index.
    pub fn boundary_edges(&self) -> Vec<(usize, u64)> {
        self.skel
            .boundary_edges()
            .into_iter()
            .map(|c| (c, self.labels[c]))
            .collect()
    }

    pub fn triple(&self) -> SlopeTriple {
        let mut v: Vec<u64> = self.boundary_edges().iter().map(|&(_, s)| s).collect();
        v.sort_unstable();
        SlopeTriple([v[0], v[1], v[2]])
    }

    /// The unique boundary edge of degree one.
    pub fn univalent_edge(&self) -> usize {
        self.skel
            .boundary_edges()
            .into_iter()
            .find(|&c| self.skel.edges[c].degree == 1)
            .expect("layered build has a univalent edge")
    }

    /// The first layered-on edge; undefined for a single tetrahedron.
    pub fn base_edge(&self) -> Option<usize> {
        self.base_rep.map(|rep| {
            self.skel
                .edges
                .iter()
                .position(|e| e.slots.contains(&rep))
                .expect("base edge representative survives layering")
        })
    }

    /// A boundary edge class with the given slope, smallest class index on a
    /// tie (equal slopes occur, e.g. in the `{1,1,2}` boundary).
    pub fn boundary_edge_with_slope(&self, slope: u64) -> Result<usize> {
        self.boundary_edges()
            .into_iter()
            .find(|&(_, s)| s == slope)
            .map(|(c, _)| c)
            .ok_or_else(|| {
                Error::Precondition(format!("no boundary edge of slope {slope} in {}", self.triple()))
            })
    }

    fn boundary_geometry(&self, edge_class: usize) -> Result<BoundaryGeometry> {
        let class = &self.skel.edges[edge_class];
        if !class.boundary {
            return Err(Error::Precondition(format!("edge class {edge_class} is not a boundary edge")));
        }
        let fan = edge_fan(&self.tri, class)
            .ok_or_else(|| Error::Precondition("edge fan undefined (reversed edge)".into()))?;
        let first = fan[0];
        let last = *fan.last().unwrap();
        let entry_face = {
            let mut it = (0..4u8).filter(|&v| v != first.lo && v != first.hi && v != first.leave_face);
            it.next().unwrap()
        };
        debug_assert!(self.tri.is_boundary(first.tet, entry_face));
        debug_assert!(self.tri.is_boundary(last.tet, last.leave_face));
        Ok(BoundaryGeometry {
            first_face: (first.tet, entry_face),
            last_face: (last.tet, last.leave_face),
            first,
            last,
        })
    }

    /// Layer a tetrahedron on the given boundary edge: its two lower faces
    /// are paired, without a twist, with the two boundary faces incident to
    /// the edge, which becomes interior.
    pub fn layer_on(&self, edge_class: usize) -> Result<LayeredBuild> {
        let geo = self.boundary_geometry(edge_class)?;
        let x = self.labels[edge_class];
        let new_label = self.triple().layered_slope(x)?;

        let n = self.tri.tet_count();
        let mut tri = self.tri.clone();
        // room for the new tetrahedron
        let mut raw = tri.raw().to_vec();
        raw.push([None; 4]);
        tri = Triangulation::from_raw(raw);

        let (t1, f1) = geo.first_face;
        let (t2, f2) = geo.last_face;
        let z1 = other_vertex(geo.first.lo, geo.first.hi, f1);
        let z2 = other_vertex(geo.last.lo, geo.last.hi, f2);
        // sigma's face 0 onto the first boundary face, face 1 onto the last;
        // edge {2,3} of sigma covers the layered edge with lo-ends aligned
        let p1 = perm_from_images(f1, z1, geo.first.lo, geo.first.hi);
        let p2 = perm_from_images(z2, f2, geo.last.lo, geo.last.hi);
        tri.glue(n, 0, t1, f1, p1)?;
        tri.glue(n, 1, t2, f2, p2)?;

        let skel = Skeleton::build_unchecked(&tri);
        let mut labels = vec![u64::MAX; skel.edges.len()];
        for (old_idx, old_class) in self.skel.edges.iter().enumerate() {
            let rep = old_class.slots[0];
            let new_idx = skel
                .edges
                .iter()
                .position(|e| e.slots.contains(&rep))
                .expect("old classes survive layering");
            labels[new_idx] = self.labels[old_idx];
        }
        for (idx, l) in labels.iter_mut().enumerate() {
            if *l == u64::MAX {
                debug_assert!(skel.edges[idx].slots.iter().all(|&(t, _)| t == n));
                *l = new_label;
            }
        }

        let mut steps = self.steps.clone();
        steps.push(LayerStep { slope: x });
        let base_rep = self.base_rep.or(Some(self.skel.edges[edge_class].slots[0]));
        let build = LayeredBuild { tri, skel, labels, steps, base_rep };
        build.assert_invariants();
        Ok(build)
    }

    pub fn layer_on_slope(&self, slope: u64) -> Result<LayeredBuild> {
        let class = self.boundary_edge_with_slope(slope)?;
        self.layer_on(class)
    }

    /// Fold ("close the book") along the given boundary edge: the two
    /// boundary faces are identified fixing the edge pointwise, producing a
    /// closed triangulation of a lens space.
    pub fn fold_on(&self, edge_class: usize) -> Result<(Triangulation, LensSpec)> {
        let geo = self.boundary_geometry(edge_class)?;
        let x = self.labels[edge_class];
        let t = self.triple();
        let (r1, r2) = t.retained(x);
        // fold on p -> L(2q+p, q); on q -> L(2p+q, p); on p+q -> L(|p-q|, p).
        // When folding on p the retained slopes are {q, p+q}, whose sum is
        // 2q+p; the Q parameter is the retained slope that is not the sum.
        let (p_out, q_out) = if x == t.0[2] {
            (r1.abs_diff(r2), r1.min(r2))
        } else {
            let non_sum = if r1 == t.0[2] { r2 } else { r1 };
            (r1 + r2, non_sum)
        };
        if p_out == 0 {
            return Err(Error::LensParameters(
                "folding here gives S2 x S1 (p = 0), not a lens space".into(),
            ));
        }

        let (t1, f1) = geo.first_face;
        let (t2, f2) = geo.last_face;
        let z1 = other_vertex(geo.first.lo, geo.first.hi, f1);
        let z2 = other_vertex(geo.last.lo, geo.last.hi, f2);
        // identity on the folded edge, third vertex to third vertex
        let mut images = [0u8; 4];
        images[f1 as usize] = f2;
        images[z1 as usize] = z2;
        images[geo.first.lo as usize] = geo.last.lo;
        images[geo.first.hi as usize] = geo.last.hi;
        let perm = Perm4::new(images);

        let mut tri = self.tri.clone();
        tri.glue(t1, f1, t2, f2, perm)?;
        let report = tri.validate();
        if !report.is_valid() {
            return Err(Error::Precondition(format!(
                "folding along slope {x} is obstructed: {} reversed edges, {} bad links",
                report.reversed_edges, report.bad_vertex_links
            )));
        }
        let spec = LensSpec::new(p_out, q_out % p_out)?;
        Ok((tri, spec))
    }

    pub fn fold_on_slope(&self, slope: u64) -> Result<(Triangulation, LensSpec)> {
        let class = self.boundary_edge_with_slope(slope)?;
        self.fold_on(class)
    }

    fn assert_invariants(&self) {
        debug_assert_eq!(self.tri.boundary_faces().len(), 2);
        debug_assert_eq!(self.skel.vertices.len(), 1);
        debug_assert_eq!(self.skel.boundary_edges().len(), 3);
        let univalent: Vec<usize> = self
            .skel
            .boundary_edges()
            .into_iter()
            .filter(|&c| self.skel.edges[c].degree == 1)
            .collect();
        debug_assert_eq!(univalent.len(), 1, "exactly one univalent edge");
        let t = self.triple();
        debug_assert_eq!(t.0[0] + t.0[1], t.0[2]);
        debug_assert_eq!(gcd(t.0[0].max(1), t.0[1]), 1, "coprime slope pair in {t}");
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn other_vertex(lo: u8, hi: u8, skip: u8) -> u8 {
    (0..4u8).find(|&v| v != lo && v != hi && v != skip).unwrap()
}

/// Permutation sending sigma labels 0,1,2,3 to the given images.
fn perm_from_images(i0: u8, i1: u8, i2: u8, i3: u8) -> Perm4 {
    Perm4::new([i0, i1, i2, i3])
}

/// The one-tetrahedron solid torus with boundary triple {1, 2, 3}; labels
/// are seeded from the homology images of the edge classes.
pub fn s1() -> LayeredBuild {
    let tri = one_tet_solid_torus();
    let skel = Skeleton::build_unchecked(&tri);
    let labels = crate::homology::solid_torus_edge_slopes(&tri, &skel)
        .expect("one-tetrahedron solid torus has H1 = Z");
    let build = LayeredBuild { tri, skel, labels, steps: Vec::new(), base_rep: None };
    build.assert_invariants();
    debug_assert_eq!(build.triple(), SlopeTriple([1, 2, 3]));
    build
}

/// The layered solid torus with `k` tetrahedra and boundary triple
/// `{1, k+1, k+2}`: the unique interior edge of degree three sits at the
/// bottom, and all other interior edges have degree four.
pub fn s_k(k: u64) -> Result<LayeredBuild> {
    if k < 1 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let mut build = s1();
    for i in 1..k {
        build = build.layer_on_slope(i + 1)?;
    }
    Ok(build)
}

/// The minimal layered triangulation of `L(k+3, 1)`: fold the layered solid
/// torus `s_k(k)` along its slope `k+1` boundary edge.
pub fn l_k(k: u64) -> Result<(Triangulation, LensSpec)> {
    let build = s_k(k)?;
    build.fold_on_slope(k + 1)
}

/// The unique minimal layered extension of the boundary triple
/// `{p, q, p+q}`, built by reverse subtractive descent to `{1, 2, 3}` and
/// forward replay; it has `E(q, p) - 1` tetrahedra.
pub fn minimal_layered_extension(triple: SlopeTriple) -> Result<LayeredBuild> {
    let [p, q, _] = triple.0;
    if p == 0 {
        return Err(Error::Precondition("triple must have positive entries".into()));
    }
    if p == q {
        return Err(Error::Precondition(format!("need q > p > 0, got {triple}")));
    }
    if gcd(p, q) != 1 {
        return Err(Error::Precondition(format!("gcd({p},{q}) != 1")));
    }
    // descend {a, b, a+b} -> {b-a, a, b} until {1, 2, 3}, recording the
    // forward layering slopes (the predecessor pair of {a, b} is {b-a, a})
    let mut stack: Vec<u64> = Vec::new();
    let (mut a, mut b) = (p, q);
    while (a, b) != (1, 2) {
        if a == b {
            return Err(Error::Precondition(format!(
                "triple {triple} does not descend to {{1,2,3}}"
            )));
        }
        let diff = b - a;
        stack.push(diff);
        (a, b) = (diff.min(a), diff.max(a));
    }
    let mut build = s1();
    while let Some(slope) = stack.pop() {
        build = build.layer_on_slope(slope)?;
    }
    if build.triple() != triple {
        return Err(Error::Other(format!(
            "extension replay reached {} instead of {}",
            build.triple(),
            triple
        )));
    }
    Ok(build)
}

/// The minimal layered triangulation of a lens space with `p >= 4`:
/// `E(p, q) - 3` tetrahedra. The parameter is normalized to the smallest
/// equivalent `q'` with `2 q' < p`, the extension of `{q', p - 2q', p - q'}`
/// is built and folded along the slope `p - 2q'` edge.
pub fn minimal_layered_lens(spec: &LensSpec) -> Result<Triangulation> {
    if spec.p <= 3 {
        return Err(Error::LensParameters(format!(
            "L({},{}) is a special case (use minimal_s3, minimal_rp3 or minimal_l31)",
            spec.p, spec.q
        )));
    }
    let q_choice = spec
        .equivalent_q()
        .into_iter()
        .find(|&q| 2 * q < spec.p && q > 0)
        .ok_or_else(|| {
            Error::LensParameters(format!("no equivalent q with 2q < p for {spec}"))
        })?;
    let p_param = q_choice;
    let q_param = spec.p - 2 * q_choice;
    let triple = SlopeTriple::from_pair(p_param, q_param);
    let build = minimal_layered_extension(triple)?;
    let (tri, folded) = build.fold_on_slope(q_param)?;
    debug_assert_eq!(folded.p, spec.p);
    Ok(tri)
}

/// One-tetrahedron triangulation of the 3-sphere (fold the solid torus along
/// its slope 3 edge).
pub fn minimal_s3() -> Triangulation {
    s1().fold_on_slope(3).expect("fold exists").0
}

/// Two-tetrahedron one-vertex triangulation of RP^3 (fold s_2 along its
/// univalent edge).
pub fn minimal_rp3() -> Triangulation {
    s_k(2).unwrap().fold_on_slope(4).expect("fold exists").0
}

/// Two-tetrahedron triangulation of L(3,1) (layer on the slope 3 edge of the
/// solid torus, then fold along a slope 1 edge).
pub fn minimal_l31() -> Triangulation {
    s1()
        .layer_on_slope(3)
        .unwrap()
        .fold_on_slope(1)
        .expect("fold exists")
        .0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{h1, solid_torus_edge_slopes, AbelianGroup};

    fn degrees_by_label(build: &LayeredBuild) -> BTreeMap<u64, Vec<usize>> {
        let mut out: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for (idx, e) in build.skeleton().edges.iter().enumerate() {
            out.entry(build.label(idx)).or_default().push(e.degree);
        }
        out
    }

    #[test]
    fn s1_shape() {
        let b = s1();
        assert_eq!(b.triple(), SlopeTriple([1, 2, 3]));
        assert_eq!(b.tet_count(), 1);
        assert_eq!(b.skeleton().boundary_edges().len(), 3);
        assert_eq!(b.labels().len(), 3);
        assert_eq!(h1(b.tri()).unwrap(), AbelianGroup::free(1));
        assert!(b.base_edge().is_none());
    }

    #[test]
    fn layering_matches_homology_oracle() {
        // every build with <= 5 tetrahedra over all layering choices: the
        // bookkept labels agree with the meridian-intersection oracle
        let mut frontier = vec![s1()];
        for _ in 0..4 {
            let mut next = Vec::new();
            for b in &frontier {
                for (class, _) in b.boundary_edges() {
                    let layered = b.layer_on(class).unwrap();
                    let oracle = solid_torus_edge_slopes(layered.tri(), layered.skeleton()).unwrap();
                    assert_eq!(layered.labels(), &oracle[..], "labels match H1 images");
                    next.push(layered);
                }
            }
            frontier = next;
        }
    }

    #[test]
    fn layer_on_slope_three_gives_112() {
        let b = s1().layer_on_slope(3).unwrap();
        assert_eq!(b.triple(), SlopeTriple([1, 1, 2]));
    }

    #[test]
    fn s_2_matches_paper_degrees() {
        let b = s_k(2).unwrap();
        assert_eq!(b.triple(), SlopeTriple([1, 3, 4]));
        let d = degrees_by_label(&b);
        assert_eq!(d[&1], vec![5]);
        assert_eq!(d[&2], vec![3]);
        assert_eq!(d[&3], vec![3]);
        assert_eq!(d[&4], vec![1]);
    }

    #[test]
    fn s_k_degree_table() {
        for k in 3..=12u64 {
            let b = s_k(k).unwrap();
            assert_eq!(b.triple(), SlopeTriple([1, k + 1, k + 2]));
            let d = degrees_by_label(&b);
            assert_eq!(d[&1], vec![2 * k as usize + 1], "e1 at k={k}");
            assert_eq!(d[&2], vec![3], "e2 at k={k}");
            for i in 3..=k {
                assert_eq!(d[&i], vec![4], "e{i} at k={k}");
            }
            assert_eq!(d[&(k + 1)], vec![3], "e(k+1) at k={k}");
            assert_eq!(d[&(k + 2)], vec![1], "univalent at k={k}");
            assert_eq!(b.base_edge().map(|c| b.label(c)), Some(2));
        }
    }

    #[test]
    fn folds_of_s1() {
        let b = s1();
        let (_, l52) = b.fold_on_slope(1).unwrap();
        assert_eq!((l52.p, l52.q), (5, 2));
        let (_, l41) = b.fold_on_slope(2).unwrap();
        assert_eq!((l41.p, l41.q), (4, 1));
        let (s3, sphere) = b.fold_on_slope(3).unwrap();
        assert_eq!(sphere.p, 1);
        assert_eq!(h1(&s3).unwrap(), AbelianGroup::trivial());
    }

    #[test]
    fn folds_of_s2_match_paper() {
        let b = s_k(2).unwrap();
        let (t5, l51) = b.fold_on_slope(3).unwrap();
        assert_eq!((l51.p, l51.q), (5, 1));
        assert_eq!(h1(&t5).unwrap(), AbelianGroup::cyclic(5));
        let (t7, l7) = b.fold_on_slope(1).unwrap();
        assert_eq!(t7.tet_count(), 2);
        assert_eq!(l7.p, 7);
        assert!(super::super::arith::lens_equal(&l7, &LensSpec::new(7, 2).unwrap()));
        assert_eq!(h1(&t7).unwrap(), AbelianGroup::cyclic(7));
        let (rp3, l2) = b.fold_on_slope(4).unwrap();
        assert_eq!((l2.p, l2.q), (2, 1));
        assert_eq!(h1(&rp3).unwrap(), AbelianGroup::cyclic(2));
    }

    #[test]
    fn l_k_homology_and_degrees() {
        for k in 1..=10u64 {
            let (tri, spec) = l_k(k).unwrap();
            assert_eq!((spec.p, spec.q), (k + 3, 1));
            assert_eq!(h1(&tri).unwrap(), AbelianGroup::cyclic(k + 3));
            assert_eq!(tri.tet_count(), k as usize);
            let skel = Skeleton::build_unchecked(&tri);
            assert_eq!(skel.edges.len(), k as usize + 1, "E = T + 1");
            let mut degrees: Vec<usize> = skel.edges.iter().map(|e| e.degree).collect();
            degrees.sort_unstable();
            let mut expected: Vec<usize> = match k {
                1 => vec![2, 4],
                2 => vec![3, 3, 6],
                k => {
                    let mut v = vec![3, 3, 2 * k as usize + 2];
                    v.extend(std::iter::repeat_n(4, k as usize - 2));
                    v
                }
            };
            expected.sort_unstable();
            assert_eq!(degrees, expected, "degree vector of l_{k}");
        }
    }

    #[test]
    fn minimal_extension_counts() {
        let b = minimal_layered_extension(SlopeTriple([1, 3, 4])).unwrap();
        assert_eq!(b.tet_count(), 2); // E(3,1) - 1
        for k in 1..=8u64 {
            let b = minimal_layered_extension(SlopeTriple([1, k + 1, k + 2])).unwrap();
            assert_eq!(b.tet_count(), k as usize);
            assert_eq!(b.triple(), SlopeTriple([1, k + 1, k + 2]));
        }
        let b = minimal_layered_extension(SlopeTriple([2, 5, 7])).unwrap();
        assert_eq!(b.tet_count(), 3); // E(5,2) - 1 = 3
    }

    #[test]
    fn minimal_lens_counts() {
        let l = |p, q| LensSpec::new(p, q).unwrap();
        assert_eq!(minimal_layered_lens(&l(4, 1)).unwrap().tet_count(), 1);
        for n in 2..=8u64 {
            let tri = minimal_layered_lens(&l(2 * n, 1)).unwrap();
            assert_eq!(tri.tet_count(), (2 * n - 3) as usize, "L(2n,1) at n={n}");
            assert_eq!(h1(&tri).unwrap(), AbelianGroup::cyclic(2 * n));
        }
        assert_eq!(minimal_layered_lens(&l(26, 5)).unwrap().tet_count(), 7);
        assert_eq!(minimal_layered_lens(&l(16, 5)).unwrap().tet_count(), 5);
        assert!(minimal_layered_lens(&l(3, 1)).is_err());
    }

    #[test]
    fn special_small_cases() {
        assert_eq!(minimal_s3().tet_count(), 1);
        assert_eq!(h1(&minimal_s3()).unwrap(), AbelianGroup::trivial());
        assert_eq!(minimal_rp3().tet_count(), 2);
        assert_eq!(h1(&minimal_rp3()).unwrap(), AbelianGroup::cyclic(2));
        assert_eq!(minimal_l31().tet_count(), 2);
        assert_eq!(h1(&minimal_l31()).unwrap(), AbelianGroup::cyclic(3));
    }
}
