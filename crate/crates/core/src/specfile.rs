//! Surface specification files.
//!
//! A specification is a TOML document with a top-level `kind`, a `[class]`
//! table and one payload table matching the kind:
//!
//! ```toml
//! kind = "revolution"          # or "radial", "warped"
//!
//! [class]
//! i = 0
//! tau = 6.283185307179586      # optional, 2π by default
//!
//! [generatrix]
//! primitive = "sphere"
//! radius = 1.0
//! ```
//!
//! Errors carry the line number of the offending entry.

use std::f64::consts::TAU;
use std::ops::Range;

use serde::Deserialize;
use toml::Spanned;

use crate::error::{Error, Result};
use crate::surface::{
    Generatrix, RadialConformalFactor, SurfaceClassIndex, SurfaceKind, SurfaceSpec, Symmetry, WarpedProfile,
};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    kind: Spanned<String>,
    class: Spanned<ClassTable>,
    generatrix: Option<Spanned<GeneratrixTable>>,
    sigma: Option<Spanned<SigmaTable>>,
    profile: Option<Spanned<ProfileTable>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassTable {
    i: u8,
    tau: Option<f64>,
    rho: Option<f64>,
    gamma_end: Option<f64>,
    varpi: Option<f64>,
    symmetry: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratrixTable {
    primitive: Option<String>,
    radius: Option<f64>,
    radial: Option<f64>,
    axial: Option<f64>,
    major: Option<f64>,
    minor: Option<f64>,
    half_angle: Option<f64>,
    waist: Option<f64>,
    lo: Option<f64>,
    hi: Option<f64>,
    /// `[θ, R₁, R₂]` triples.
    samples: Option<Vec<[f64; 3]>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SigmaTable {
    primitive: Option<String>,
    value: Option<f64>,
    radius: Option<f64>,
    r_min: Option<f64>,
    r_max: Option<f64>,
    /// `[r, σ]` pairs on a uniform radial grid.
    samples: Option<Vec<[f64; 2]>>,
    identification: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileTable {
    a: f64,
    s_base: Option<f64>,
    primitive: Option<String>,
    value: Option<f64>,
    lo: Option<f64>,
    hi: Option<f64>,
    period: Option<f64>,
    /// `[s, f]` pairs.
    samples: Option<Vec<[f64; 2]>>,
}

/// 1-based line of a byte offset.
fn line_at(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

struct Located<'a> {
    text: &'a str,
    span: Range<usize>,
}

impl Located<'_> {
    fn fail(&self, message: impl Into<String>) -> Error {
        Error::Parse { line: line_at(self.text, self.span.start), message: message.into() }
    }

    /// Attach this location to a library error raised while building.
    fn wrap(&self, err: Error) -> Error {
        match err {
            Error::Parse { .. } => err,
            other => self.fail(other.to_string()),
        }
    }

    fn need(&self, value: Option<f64>, key: &str) -> Result<f64> {
        value.ok_or_else(|| self.fail(format!("missing key `{key}`")))
    }
}

fn class_index(table: &ClassTable, at: &Located) -> Result<SurfaceClassIndex> {
    let mut class = SurfaceClassIndex::new(table.i, table.tau.unwrap_or(TAU));
    class.rho = table.rho;
    class.gamma_end = table.gamma_end;
    class.varpi = table.varpi;
    if let Some(symmetry) = &table.symmetry {
        class.symmetry = match symmetry.as_str() {
            "rotational" => Symmetry::Rotational,
            "translational" => Symmetry::Translational,
            other => return Err(at.fail(format!("unknown symmetry `{other}`"))),
        };
    }
    Ok(class)
}

fn generatrix(table: &GeneratrixTable, at: &Located) -> Result<Generatrix> {
    if let Some(samples) = &table.samples {
        if table.primitive.is_some() {
            return Err(at.fail("give either `primitive` or `samples`, not both"));
        }
        let theta: Vec<f64> = samples.iter().map(|s| s[0]).collect();
        let r1: Vec<f64> = samples.iter().map(|s| s[1]).collect();
        let r2: Vec<f64> = samples.iter().map(|s| s[2]).collect();
        return Generatrix::from_samples(&theta, &r1, &r2).map_err(|e| at.wrap(e));
    }
    let primitive = table.primitive.as_deref().ok_or_else(|| at.fail("missing `primitive` or `samples`"))?;
    for (key, value) in
        [("radius", table.radius), ("major", table.major), ("minor", table.minor), ("waist", table.waist)]
    {
        if let Some(v) = value {
            if !(v > 0.0) {
                return Err(at.fail(format!("`{key}` must be positive, got {v}")));
            }
        }
    }
    if let (Some(major), Some(minor)) = (table.major, table.minor) {
        if !(minor < major) {
            return Err(at.fail(format!("torus needs minor < major, got {minor} and {major}")));
        }
    }
    let g = match primitive {
        "sphere" => Generatrix::sphere(table.radius.unwrap_or(1.0)),
        "spheroid" => Generatrix::spheroid(at.need(table.radial, "radial")?, at.need(table.axial, "axial")?)
            .map_err(|e| at.wrap(e))?,
        "torus" => Generatrix::torus(at.need(table.major, "major")?, at.need(table.minor, "minor")?),
        "cylinder" => {
            Generatrix::cylinder(table.radius.unwrap_or(1.0), at.need(table.lo, "lo")?, at.need(table.hi, "hi")?)
        }
        "flat" => Generatrix::flat_radial(at.need(table.lo, "lo")?, at.need(table.hi, "hi")?),
        "cone" => Generatrix::cone(
            at.need(table.half_angle, "half_angle")?,
            at.need(table.lo, "lo")?,
            at.need(table.hi, "hi")?,
        ),
        "catenoid" => {
            Generatrix::catenoid(table.waist.unwrap_or(1.0), at.need(table.lo, "lo")?, at.need(table.hi, "hi")?)
        }
        other => return Err(at.fail(format!("unknown generatrix primitive `{other}`"))),
    };
    Ok(g)
}

fn sigma(table: &SigmaTable, at: &Located) -> Result<RadialConformalFactor> {
    let factor = if let Some(samples) = &table.samples {
        if table.primitive.is_some() {
            return Err(at.fail("give either `primitive` or `samples`, not both"));
        }
        let r: Vec<f64> = samples.iter().map(|s| s[0]).collect();
        let v: Vec<f64> = samples.iter().map(|s| s[1]).collect();
        RadialConformalFactor::from_samples(&r, &v)
    } else {
        let primitive = table.primitive.as_deref().ok_or_else(|| at.fail("missing `primitive` or `samples`"))?;
        let range = || -> Result<(f64, f64)> { Ok((at.need(table.r_min, "r_min")?, at.need(table.r_max, "r_max")?)) };
        match primitive {
            "constant" => {
                let (lo, hi) = range()?;
                RadialConformalFactor::constant(table.value.unwrap_or(1.0), lo, hi)
            }
            "round-sphere" => Ok(RadialConformalFactor::round_sphere(table.radius.unwrap_or(1.0))),
            "poincare-disc" => Ok(RadialConformalFactor::poincare_disc()),
            "cylinder" => {
                let (lo, hi) = range()?;
                RadialConformalFactor::cylinder(lo, hi)
            }
            other => return Err(at.fail(format!("unknown sigma primitive `{other}`"))),
        }
    }
    .map_err(|e| at.wrap(e))?;
    match table.identification {
        Some(rho) => factor.with_identification(rho).map_err(|e| at.wrap(e)),
        None => Ok(factor),
    }
}

fn profile(table: &ProfileTable, at: &Located) -> Result<WarpedProfile> {
    if let Some(samples) = &table.samples {
        if table.primitive.is_some() {
            return Err(at.fail("give either `primitive` or `samples`, not both"));
        }
        let s: Vec<f64> = samples.iter().map(|p| p[0]).collect();
        let f: Vec<f64> = samples.iter().map(|p| p[1]).collect();
        let built = match table.period {
            Some(period) => WarpedProfile::closed_from_samples(table.a, &s, &f, period),
            None => WarpedProfile::from_samples(table.a, &s, &f, table.s_base),
        };
        return built.map_err(|e| at.wrap(e));
    }
    let primitive = table.primitive.as_deref().ok_or_else(|| at.fail("missing `primitive` or `samples`"))?;
    if primitive != "constant" {
        return Err(at.fail(format!("unknown profile primitive `{primitive}`")));
    }
    let value = table.value.unwrap_or(1.0);
    let jet = move |_: f64| [value, 0.0, 0.0];
    let built = match table.period {
        Some(period) => WarpedProfile::closed(table.a, jet, table.s_base.unwrap_or(0.0), period),
        None => {
            let (lo, hi) = (at.need(table.lo, "lo")?, at.need(table.hi, "hi")?);
            let base = table.s_base.unwrap_or(if lo.is_finite() && hi.is_finite() {
                0.5 * (lo + hi)
            } else if lo.is_finite() {
                lo + 1.0
            } else if hi.is_finite() {
                hi - 1.0
            } else {
                0.0
            });
            WarpedProfile::new(table.a, jet, lo, hi, base)
        }
    };
    built.map_err(|e| at.wrap(e))
}

/// Parse a specification document. Class consistency is not checked here;
/// that happens when the chart is built.
pub fn parse_spec(text: &str) -> Result<SurfaceSpec> {
    let doc: Document = toml::from_str(text).map_err(|e| Error::Parse {
        line: e.span().map_or(1, |s| line_at(text, s.start)),
        message: e.message().trim().to_string(),
    })?;
    let located = |span: Range<usize>| Located { text, span };
    let class = class_index(doc.class.get_ref(), &located(doc.class.span()))?;
    let kind_at = located(doc.kind.span());
    let payloads = [doc.generatrix.is_some(), doc.sigma.is_some(), doc.profile.is_some()];
    if payloads.iter().filter(|&&p| p).count() > 1 {
        return Err(kind_at.fail("more than one payload table"));
    }
    let kind = match doc.kind.get_ref().as_str() {
        "revolution" => {
            let t = doc.generatrix.ok_or_else(|| kind_at.fail("kind `revolution` needs a [generatrix] table"))?;
            SurfaceKind::Revolution(generatrix(t.get_ref(), &located(t.span()))?)
        }
        "radial" => {
            let t = doc.sigma.ok_or_else(|| kind_at.fail("kind `radial` needs a [sigma] table"))?;
            SurfaceKind::RadialConformal(sigma(t.get_ref(), &located(t.span()))?)
        }
        "warped" => {
            let t = doc.profile.ok_or_else(|| kind_at.fail("kind `warped` needs a [profile] table"))?;
            SurfaceKind::Warped(profile(t.get_ref(), &located(t.span()))?)
        }
        other => return Err(kind_at.fail(format!("unknown kind `{other}`"))),
    };
    Ok(SurfaceSpec::new(kind, class))
}

/// Read and parse a specification file.
pub fn load_spec(path: &std::path::Path) -> Result<SurfaceSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    parse_spec(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_document() {
        let spec = parse_spec("kind = \"revolution\"\n[class]\ni = 0\n[generatrix]\nprimitive = \"sphere\"\n").unwrap();
        assert_eq!(spec.class.i, 0);
        assert!(matches!(spec.kind, SurfaceKind::Revolution(_)));
    }

    #[test]
    fn syntax_error_reports_its_line() {
        let err = parse_spec("kind = \"radial\"\n[class]\ni = = 4\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn unknown_key_reports_its_line() {
        let err = parse_spec("kind = \"radial\"\n\n[class]\ni = 4\nrh0 = 0.3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }), "{err:?}");
    }

    #[test]
    fn missing_payload_points_at_kind() {
        let err = parse_spec("\nkind = \"warped\"\n[class]\ni = 4\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn infinite_radius_is_accepted() {
        let spec = parse_spec(
            "kind = \"radial\"\n[class]\ni = 4\n[sigma]\nprimitive = \"constant\"\nr_min = 0.0\nr_max = inf\n",
        )
        .unwrap();
        match spec.kind {
            SurfaceKind::RadialConformal(s) => assert_eq!(s.radial_range(), (0.0, f64::INFINITY)),
            _ => panic!("wrong kind"),
        }
    }
}
