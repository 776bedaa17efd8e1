//! Analytically known surfaces, one or more per class, used by the tests,
//! the acceptance suite and the book.

use std::f64::consts::{PI, TAU};

use crate::surface::{Generatrix, RadialConformalFactor, SurfaceClassIndex, SurfaceKind, SurfaceSpec, WarpedProfile};

/// Modulus of the flat annuli in the corpus.
pub const ANNULUS_RHO: f64 = 0.3;

/// End circulation used for the classes that carry one.
pub const CORPUS_GAMMA: f64 = 0.3;

/// Width of the flat strips in the corpus (deliberately not `π`).
pub const STRIP_WIDTH: f64 = 2.0;

/// A named surface with its declared class.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub spec: SurfaceSpec,
}

fn entry(name: &'static str, kind: SurfaceKind, class: SurfaceClassIndex) -> CorpusEntry {
    CorpusEntry { name, spec: SurfaceSpec::new(kind, class) }
}

fn flat(r_min: f64, r_max: f64) -> SurfaceKind {
    SurfaceKind::RadialConformal(RadialConformalFactor::constant(1.0, r_min, r_max).expect("static range"))
}

fn flat_profile(lo: f64, hi: f64, base: f64) -> SurfaceKind {
    SurfaceKind::Warped(WarpedProfile::new(1.0, |_| [1.0, 0.0, 0.0], lo, hi, base).expect("static profile"))
}

/// Unit sphere from the generatrix `(sin θ, cos θ)`.
pub fn sphere() -> CorpusEntry {
    entry("sphere", SurfaceKind::Revolution(Generatrix::sphere(1.0)), SurfaceClassIndex::new(0, TAU))
}

/// Round torus from the generatrix `(√2 + cos θ, sin θ)`.
pub fn torus() -> CorpusEntry {
    entry("torus", SurfaceKind::Revolution(Generatrix::torus(2f64.sqrt(), 1.0)), SurfaceClassIndex::new(3, TAU))
}

/// Flat cylinder, `σ = 1/r` on the punctured plane.
pub fn flat_cylinder() -> CorpusEntry {
    entry(
        "flat-cylinder",
        SurfaceKind::RadialConformal(RadialConformalFactor::cylinder(0.0, f64::INFINITY).expect("static range")),
        SurfaceClassIndex::new(6, TAU).with_gamma_end(CORPUS_GAMMA),
    )
}

/// Every corpus surface, rotational classes 0 to 10 first.
pub fn corpus() -> Vec<CorpusEntry> {
    let gamma = |i: u8| SurfaceClassIndex::new(i, TAU).with_gamma_end(CORPUS_GAMMA);
    vec![
        sphere(),
        entry("flat-disc", flat(0.0, 1.0), SurfaceClassIndex::new(1, TAU)),
        entry("flat-annulus", flat(ANNULUS_RHO, 1.0), SurfaceClassIndex::new(2, TAU).with_rho(ANNULUS_RHO)),
        torus(),
        entry("plane", flat(0.0, f64::INFINITY), SurfaceClassIndex::new(4, TAU)),
        entry(
            "poincare-disc",
            SurfaceKind::RadialConformal(RadialConformalFactor::poincare_disc()),
            SurfaceClassIndex::new(5, TAU),
        ),
        flat_cylinder(),
        entry("punctured-open-disc", flat(0.0, 1.0), gamma(7)),
        entry("open-annulus", flat(ANNULUS_RHO, 1.0), SurfaceClassIndex::new(8, TAU).with_rho(ANNULUS_RHO)),
        entry("punctured-disc", flat(0.0, 1.0), gamma(9)),
        entry("semi-annulus", flat(ANNULUS_RHO, 1.0), SurfaceClassIndex::new(10, TAU).with_rho(ANNULUS_RHO)),
        entry("strip", flat_profile(0.0, STRIP_WIDTH, 1.0), gamma(11)),
        entry("semi-strip", flat_profile(0.0, STRIP_WIDTH, 1.0), gamma(12)),
        entry(
            "translational-plane",
            flat_profile(f64::NEG_INFINITY, f64::INFINITY, 0.0),
            SurfaceClassIndex::new(4, TAU).translational(),
        ),
        entry("translational-open-strip", flat_profile(0.0, PI, 0.5), SurfaceClassIndex::new(5, TAU).translational()),
        entry(
            "translational-cylinder",
            SurfaceKind::Warped(WarpedProfile::closed(1.0, |_| [1.0, 0.0, 0.0], 0.0, 3.0).expect("static profile")),
            gamma(6).translational(),
        ),
    ]
}

/// First corpus entry of class `i` (rotational when both forms exist).
pub fn by_class(i: u8) -> Option<CorpusEntry> {
    corpus().into_iter().find(|e| e.spec.class.i == i)
}

/// Corpus entry by name.
pub fn by_name(name: &str) -> Option<CorpusEntry> {
    corpus().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::validate_class;

    #[test]
    fn corpus_validates() {
        for e in corpus() {
            assert_eq!(validate_class(&e.spec), vec![], "{}", e.name);
        }
    }

    #[test]
    fn every_class_is_present() {
        for i in 0..=12 {
            assert!(by_class(i).is_some(), "class {i}");
        }
    }
}
