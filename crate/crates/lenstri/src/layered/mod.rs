//! Layered solid tori and layered lens spaces: the one-tetrahedron solid
//! torus, layerings with slope-triple and edge-label bookkeeping, folds,
//! minimal layered extensions and minimal layered triangulations, plus the
//! arithmetic layer (subtractive Euclidean counts, continued fractions,
//! lens-space equivalence and family classification).

mod arith;
mod build;
mod pairings;

pub use arith::{
    classify_family, continued_fraction, euclid_steps, lens_equal, Family, LensSpec,
};
pub use build::{
    minimal_l31, minimal_layered_extension, minimal_layered_lens, minimal_rp3, minimal_s3,
    s1, s_k, LayerStep, LayeredBuild, SlopeTriple,
};
pub use pairings::{pair_solid_tori, PairingResult};

use crate::error::{Error, Result};

/// Whether the headline criterion applies to a lens space with even
/// fundamental group: builds the minimal layered triangulation, colours it
/// with the unique nontrivial Z2 class, and tests that the even edges are at
/// least as numerous as the odd ones.
pub fn theorem_applies(lens: &LensSpec) -> Result<bool> {
    if lens.p % 2 != 0 {
        return Err(Error::NoZ2Class);
    }
    if lens.p < 4 {
        return Err(Error::LensParameters(format!(
            "L({},{}) has no minimal layered parameterisation here",
            lens.p, lens.q
        )));
    }
    let tri = minimal_layered_lens(lens)?;
    let skel = crate::skeleton::Skeleton::build_unchecked(&tri);
    let colorings = crate::z2::z2_colorings(&tri, &skel)?;
    if colorings.len() != 1 {
        return Err(Error::Other(format!(
            "expected a unique nontrivial colouring for L({},{}), found {}",
            lens.p,
            lens.q,
            colorings.len()
        )));
    }
    let stats = crate::z2::stats(&tri, &skel, &colorings[0])?;
    Ok(stats.even >= stats.odd)
}
