//! JSON encodings of tuples, bodies and certificates.
//!
//! Matrices are lists of `[re, im]` pairs in row-major order. Floats are
//! written in shortest round-trip form and parsed exactly, so a tuple
//! survives a write/read cycle bit for bit.

use mct_core::bodies::{product, BodyKind, ConvexBody, Facet, NamedBody};
use mct_core::certificate::{Certificate, Claim, Property};
use mct_core::{ComplexMatrix, Isometry, MatrixTuple, C64};
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Core(#[from] mct_core::Error),
}

pub type IoResult<T> = Result<T, IoError>;

/// Hermitian flags in a tuple file are checked at this relative tolerance.
pub const HERMITIAN_LOAD_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TupleJson {
    pub d: usize,
    pub n: usize,
    pub hermitian: Vec<bool>,
    pub matrices: Vec<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FacetJson {
    pub a: Vec<f64>,
    pub b: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum NameJson {
    Ball {
        radius: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
    },
    Cube {
        half_width: f64,
    },
    SimplexStandard,
    DiamondStandard,
    DiskProduct {
        radii: Vec<f64>,
    },
    IntervalProduct {
        bounds: Vec<[f64; 2]>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BodyJson {
    pub dim: usize,
    /// `v_polytope`, `h_polytope`, `named` or `product`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<FacetJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<NameJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<BodyJson>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub complex: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PropertyJson {
    Compression,
    Isometry,
    Hermitian,
    Normal,
    Commuting,
    Anticommuting,
    Annihilating { groups: Option<Vec<usize>> },
    NormBound { index: usize, bound: f64 },
    SquareScalar { index: usize, value: f64 },
    Unitary { index: usize, scale: f64 },
    SpectrumIn { index: usize, points: Vec<f64> },
    JointSpectrumIn { body: BodyJson },
    JointSpectrumAt { points: Vec<Vec<f64>> },
    GroupedSpectrumIn { groups: Vec<usize>, bodies: Vec<BodyJson> },
    AnticommutesWith { witness: MatrixJson },
    ResolutionOfIdentity { aux: String },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClaimJson {
    pub name: String,
    /// Residual at construction time; `verify` ignores it.
    pub residual: f64,
    pub bound: f64,
    pub property: PropertyJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuxJson {
    pub name: String,
    pub tuple: TupleJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    pub input: TupleJson,
    pub dilation: TupleJson,
    pub isometry: MatrixJson,
    pub claims: Vec<ClaimJson>,
    #[serde(default)]
    pub scale: Vec<f64>,
    #[serde(default)]
    pub aux: Vec<AuxJson>,
    #[serde(default)]
    pub conclusion: Option<String>,
    #[serde(default)]
    pub notes: Vec<String>,
}

fn pairs(m: &ComplexMatrix) -> Vec<[f64; 2]> {
    m.data().iter().map(|z| [z.re, z.im]).collect()
}

fn from_pairs(rows: usize, cols: usize, entries: &[[f64; 2]]) -> IoResult<ComplexMatrix> {
    let data = entries.iter().map(|[re, im]| C64::new(*re, *im)).collect();
    Ok(ComplexMatrix::new(rows, cols, data)?)
}

pub fn matrix_to_json(m: &ComplexMatrix) -> MatrixJson {
    MatrixJson { rows: m.rows(), cols: m.cols(), entries: pairs(m) }
}

pub fn matrix_from_json(j: &MatrixJson) -> IoResult<ComplexMatrix> {
    from_pairs(j.rows, j.cols, &j.entries)
}

pub fn tuple_to_json(t: &MatrixTuple) -> TupleJson {
    TupleJson { d: t.d(), n: t.dim(), hermitian: t.hermitian_flags().to_vec(), matrices: t.iter().map(pairs).collect() }
}

/// Parses a tuple, checking the declared sizes and Hermitian flags
/// (relative tolerance `herm_tol`).
pub fn tuple_from_json_with(j: &TupleJson, herm_tol: f64) -> IoResult<MatrixTuple> {
    if j.matrices.len() != j.d || j.hermitian.len() != j.d {
        return Err(IoError::Format(format!(
            "d = {} but {} matrices and {} Hermitian flags",
            j.d,
            j.matrices.len(),
            j.hermitian.len()
        )));
    }
    let matrices = j
        .matrices
        .iter()
        .map(|m| {
            if m.len() != j.n * j.n {
                return Err(IoError::Format(format!("{} entries for an {}x{} matrix", m.len(), j.n, j.n)));
            }
            from_pairs(j.n, j.n, m)
        })
        .collect::<IoResult<Vec<_>>>()?;
    Ok(MatrixTuple::with_flags(matrices, j.hermitian.clone(), herm_tol)?)
}

pub fn tuple_from_json(j: &TupleJson) -> IoResult<MatrixTuple> {
    tuple_from_json_with(j, HERMITIAN_LOAD_TOL)
}

pub fn body_to_json(k: &ConvexBody) -> BodyJson {
    let mut out = BodyJson {
        dim: k.dim(),
        kind: String::new(),
        vertices: None,
        facets: None,
        name: None,
        factors: None,
        complex: k.is_complex(),
    };
    let facets = |f: &[Facet]| f.iter().map(|f| FacetJson { a: f.a.clone(), b: f.b }).collect();
    match k.kind() {
        BodyKind::VPolytope { vertices, facets: f } => {
            out.kind = "v_polytope".into();
            out.vertices = Some(vertices.clone());
            out.facets = f.as_deref().map(facets);
        }
        BodyKind::HPolytope { facets: f, vertices } => {
            out.kind = "h_polytope".into();
            out.facets = Some(facets(f));
            out.vertices = Some(vertices.clone());
        }
        BodyKind::Named(name) => {
            out.kind = "named".into();
            out.name = Some(match name {
                NamedBody::Ball { radius, center } => NameJson::Ball { radius: *radius, center: center.clone() },
                NamedBody::Cube { half_width } => NameJson::Cube { half_width: *half_width },
                NamedBody::SimplexStandard => NameJson::SimplexStandard,
                NamedBody::DiamondStandard => NameJson::DiamondStandard,
                NamedBody::DiskProduct { radii } => NameJson::DiskProduct { radii: radii.clone() },
                NamedBody::IntervalProduct { bounds } => {
                    NameJson::IntervalProduct { bounds: bounds.iter().map(|&(lo, hi)| [lo, hi]).collect() }
                }
            });
        }
        BodyKind::Product(parts) => {
            out.kind = "product".into();
            out.factors = Some(parts.iter().map(body_to_json).collect());
        }
    }
    out
}

pub fn body_from_json(j: &BodyJson) -> IoResult<ConvexBody> {
    let facets = |f: &[FacetJson]| f.iter().map(|f| Facet { a: f.a.clone(), b: f.b }).collect::<Vec<_>>();
    let body = match j.kind.as_str() {
        "v_polytope" => {
            let vertices = j.vertices.clone().ok_or_else(|| IoError::Format("v_polytope without vertices".into()))?;
            match &j.facets {
                Some(f) => ConvexBody::v_polytope_with_facets(vertices, facets(f))?,
                None => ConvexBody::v_polytope(vertices)?,
            }
        }
        "h_polytope" => {
            let f = j.facets.as_deref().ok_or_else(|| IoError::Format("h_polytope without facets".into()))?;
            ConvexBody::h_polytope(facets(f))?
        }
        "named" => {
            let name = j.name.clone().ok_or_else(|| IoError::Format("named body without a name".into()))?;
            let named = match name {
                NameJson::Ball { radius, center } => NamedBody::Ball { radius, center },
                NameJson::Cube { half_width } => NamedBody::Cube { half_width },
                NameJson::SimplexStandard => NamedBody::SimplexStandard,
                NameJson::DiamondStandard => NamedBody::DiamondStandard,
                NameJson::DiskProduct { radii } => NamedBody::DiskProduct { radii },
                NameJson::IntervalProduct { bounds } => {
                    NamedBody::IntervalProduct { bounds: bounds.iter().map(|[lo, hi]| (*lo, *hi)).collect() }
                }
            };
            ConvexBody::named(j.dim, named)?
        }
        "product" => {
            let parts = j.factors.as_deref().ok_or_else(|| IoError::Format("product without factors".into()))?;
            product(parts.iter().map(body_from_json).collect::<IoResult<Vec<_>>>()?)?
        }
        other => return Err(IoError::Format(format!("unknown body kind {other:?}"))),
    };
    if body.dim() != j.dim {
        return Err(IoError::Format(format!("declared dim {} but the body lives in R^{}", j.dim, body.dim())));
    }
    Ok(body.set_complex(j.complex))
}

pub fn property_to_json(p: &Property) -> PropertyJson {
    match p {
        Property::Compression => PropertyJson::Compression,
        Property::Isometry => PropertyJson::Isometry,
        Property::Hermitian => PropertyJson::Hermitian,
        Property::Normal => PropertyJson::Normal,
        Property::Commuting => PropertyJson::Commuting,
        Property::Anticommuting => PropertyJson::Anticommuting,
        Property::Annihilating { groups } => PropertyJson::Annihilating { groups: groups.clone() },
        Property::NormBound { index, bound } => PropertyJson::NormBound { index: *index, bound: *bound },
        Property::SquareScalar { index, value } => PropertyJson::SquareScalar { index: *index, value: *value },
        Property::Unitary { index, scale } => PropertyJson::Unitary { index: *index, scale: *scale },
        Property::SpectrumIn { index, points } => PropertyJson::SpectrumIn { index: *index, points: points.clone() },
        Property::JointSpectrumIn { body } => PropertyJson::JointSpectrumIn { body: body_to_json(body) },
        Property::JointSpectrumAt { points } => PropertyJson::JointSpectrumAt { points: points.clone() },
        Property::GroupedSpectrumIn { groups, bodies } => PropertyJson::GroupedSpectrumIn {
            groups: groups.clone(),
            bodies: bodies.iter().map(body_to_json).collect(),
        },
        Property::AnticommutesWith { witness } => PropertyJson::AnticommutesWith { witness: matrix_to_json(witness) },
        Property::ResolutionOfIdentity { aux } => PropertyJson::ResolutionOfIdentity { aux: aux.clone() },
    }
}

pub fn property_from_json(p: &PropertyJson) -> IoResult<Property> {
    Ok(match p {
        PropertyJson::Compression => Property::Compression,
        PropertyJson::Isometry => Property::Isometry,
        PropertyJson::Hermitian => Property::Hermitian,
        PropertyJson::Normal => Property::Normal,
        PropertyJson::Commuting => Property::Commuting,
        PropertyJson::Anticommuting => Property::Anticommuting,
        PropertyJson::Annihilating { groups } => Property::Annihilating { groups: groups.clone() },
        PropertyJson::NormBound { index, bound } => Property::NormBound { index: *index, bound: *bound },
        PropertyJson::SquareScalar { index, value } => Property::SquareScalar { index: *index, value: *value },
        PropertyJson::Unitary { index, scale } => Property::Unitary { index: *index, scale: *scale },
        PropertyJson::SpectrumIn { index, points } => Property::SpectrumIn { index: *index, points: points.clone() },
        PropertyJson::JointSpectrumIn { body } => Property::JointSpectrumIn { body: body_from_json(body)? },
        PropertyJson::JointSpectrumAt { points } => Property::JointSpectrumAt { points: points.clone() },
        PropertyJson::GroupedSpectrumIn { groups, bodies } => Property::GroupedSpectrumIn {
            groups: groups.clone(),
            bodies: bodies.iter().map(body_from_json).collect::<IoResult<Vec<_>>>()?,
        },
        PropertyJson::AnticommutesWith { witness } => Property::AnticommutesWith { witness: matrix_from_json(witness)? },
        PropertyJson::ResolutionOfIdentity { aux } => Property::ResolutionOfIdentity { aux: aux.clone() },
    })
}

pub fn certificate_to_json(c: &Certificate) -> CertificateJson {
    CertificateJson {
        input: tuple_to_json(&c.input),
        dilation: tuple_to_json(&c.dilation),
        isometry: matrix_to_json(c.isometry.matrix()),
        claims: c
            .claims
            .iter()
            .map(|cl| ClaimJson {
                name: cl.property.name(),
                residual: cl.residual,
                bound: cl.bound,
                property: property_to_json(&cl.property),
            })
            .collect(),
        scale: c.scale.clone(),
        aux: c.aux.iter().map(|(name, t)| AuxJson { name: name.clone(), tuple: tuple_to_json(t) }).collect(),
        conclusion: c.conclusion.clone(),
        notes: c.notes.clone(),
    }
}

/// Rebuilds a certificate without checking any claim: Hermitian flags and
/// the isometry are taken as stored, so that `verify` sees exactly what the
/// file says.
pub fn certificate_from_json(j: &CertificateJson) -> IoResult<Certificate> {
    let claims = j
        .claims
        .iter()
        .map(|c| Ok(Claim { property: property_from_json(&c.property)?, bound: c.bound, residual: c.residual }))
        .collect::<IoResult<Vec<_>>>()?;
    Ok(Certificate {
        input: tuple_from_json_with(&j.input, f64::INFINITY)?,
        dilation: tuple_from_json_with(&j.dilation, f64::INFINITY)?,
        isometry: Isometry::unchecked(matrix_from_json(&j.isometry)?),
        claims,
        scale: j.scale.clone(),
        aux: j
            .aux
            .iter()
            .map(|a| Ok((a.name.clone(), tuple_from_json_with(&a.tuple, f64::INFINITY)?)))
            .collect::<IoResult<Vec<_>>>()?,
        conclusion: j.conclusion.clone(),
        notes: j.notes.clone(),
    })
}

/// Reads a file, or stdin for `-`.
pub fn read_text(path: &Path) -> IoResult<String> {
    let mut s = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|source| IoError::File { path: "<stdin>".into(), source })?;
    } else {
        s = fs::read_to_string(path).map_err(|source| IoError::File { path: path.display().to_string(), source })?;
    }
    Ok(s)
}

/// Writes to a file, or stdout for `None`.
pub fn write_text(path: Option<&Path>, text: &str) -> IoResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| IoError::File { path: p.display().to_string(), source }),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}").map_err(|source| IoError::File { path: "<stdout>".into(), source })
        }
    }
}

pub fn read_tuple(path: &Path) -> IoResult<MatrixTuple> {
    tuple_from_json(&serde_json::from_str(&read_text(path)?)?)
}

pub fn read_body(path: &Path) -> IoResult<ConvexBody> {
    body_from_json(&serde_json::from_str(&read_text(path)?)?)
}

pub fn read_certificate(path: &Path) -> IoResult<Certificate> {
    certificate_from_json(&serde_json::from_str(&read_text(path)?)?)
}

pub fn to_pretty<T: Serialize>(value: &T) -> IoResult<String> {
    Ok(serde_json::to_string_pretty(value)?)
}
