//! Loading patches, tetrahedra and approximations from the command line.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use tri_implicit::barycentric::auto_tetrahedron;
use tri_implicit::fixtures;
use tri_implicit::{ImplicitApprox, Simplex, TriangularPatch};

/// A patch together with where it came from and its preferred reference
/// tetrahedron, if it ships with one.
pub struct LoadedPatch {
    pub label: String,
    pub patch: TriangularPatch,
    pub tetrahedron: Option<Simplex>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PatchFile {
    One(TriangularPatch),
    Many(Vec<TriangularPatch>),
}

/// `fixture:NAME` or a JSON file holding one patch or an array of patches.
pub fn load_patches(spec: &str) -> Result<Vec<LoadedPatch>> {
    if let Some(name) = spec.strip_prefix("fixture:") {
        let Some(f) = fixtures::by_name(name) else {
            bail!("unknown fixture {name:?}; known: {}", fixtures::FIXTURE_NAMES.join(", "));
        };
        return Ok(vec![LoadedPatch { label: spec.into(), patch: f.patch, tetrahedron: f.tetrahedron }]);
    }
    let text = fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
    let parsed: PatchFile = serde_json::from_str(&text)?;
    Ok(match parsed {
        PatchFile::One(p) => vec![LoadedPatch { label: spec.into(), patch: p, tetrahedron: None }],
        PatchFile::Many(ps) => ps
            .into_iter()
            .enumerate()
            .map(|(k, p)| LoadedPatch { label: format!("{spec}[{k}]"), patch: p, tetrahedron: None })
            .collect(),
    })
}

pub fn load_all(specs: &[String]) -> Result<Vec<LoadedPatch>> {
    let mut out = Vec::new();
    for s in specs {
        out.extend(load_patches(s)?);
    }
    if out.is_empty() {
        bail!("no patches given");
    }
    Ok(out)
}

// vertices are validated after parsing so that a degenerate tetrahedron is
// reported as such rather than as malformed input
#[derive(Deserialize)]
#[serde(untagged)]
enum TetrahedronFile {
    Bare(Vec<Vec<f64>>),
    Wrapped { tetrahedron: Vec<Vec<f64>> },
}

/// `auto`, inline JSON, or a file holding either a vertex array or any
/// object with a `tetrahedron` field (such as a saved approximation).
pub fn resolve_tetrahedron(spec: &str, patches: &[LoadedPatch]) -> Result<Simplex> {
    if spec == "auto" {
        if let Some(first) = patches[0].tetrahedron.as_ref() {
            if patches.iter().all(|p| p.tetrahedron.as_ref().is_some_and(|t| t.approx_eq(first, 0.0))) {
                return Ok(first.clone());
            }
        }
        let points: Vec<[f64; 3]> = patches.iter().flat_map(|p| p.patch.control_points().iter().copied()).collect();
        return Ok(auto_tetrahedron(&points)?);
    }
    let text = if spec.trim_start().starts_with('[') || spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?
    };
    let vertices = match serde_json::from_str::<TetrahedronFile>(&text)? {
        TetrahedronFile::Bare(v) | TetrahedronFile::Wrapped { tetrahedron: v } => v,
    };
    if vertices.len() != 4 {
        bail!(tri_implicit::Error::DimensionMismatch { expected: 4, found: vertices.len() });
    }
    Ok(Simplex::new(vertices)?)
}

pub fn load_approx(path: &Path) -> Result<ImplicitApprox> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(serde_json::from_str(&text)?)
}
