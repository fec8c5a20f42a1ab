//! Dilation certificates. A certificate stores raw matrices and a list of
//! claimed properties; [`Certificate::verify`] recomputes every residual
//! from the matrices and never reads the stored ones.

use crate::bodies::ConvexBody;
use crate::error::{Error, Result};
use crate::linalg::{compression_residual, op_norm, ComplexMatrix, Isometry, MatrixTuple, ToleranceConfig};
use crate::matrix_convex::real_joint_spectrum;
use crate::num;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

/// A checkable property of the dilation tuple (or of a named auxiliary tuple).
#[derive(Clone, Debug, PartialEq)]
pub enum Property {
    /// `max ‖V*NᵢV − Xᵢ‖`.
    Compression,
    /// `‖V*V − I‖`.
    Isometry,
    Hermitian,
    Normal,
    /// `[Nᵢ, Nⱼ] = 0` and `[Nᵢ, Nⱼ*] = 0`.
    Commuting,
    /// `NᵢNⱼ + NⱼNᵢ = 0` for `i ≠ j`.
    Anticommuting,
    /// `NᵢNⱼ = 0` for `i ≠ j` in the same group; `None` means one group.
    Annihilating { groups: Option<Vec<usize>> },
    /// `‖Nᵢ‖ ≤ bound`; the residual is the excess.
    NormBound { index: usize, bound: f64 },
    /// `Nᵢ² = value·I`.
    SquareScalar { index: usize, value: f64 },
    /// `Nᵢ*Nᵢ = NᵢNᵢ* = scale²·I`.
    Unitary { index: usize, scale: f64 },
    /// Every eigenvalue of the Hermitian `Nᵢ` is one of `points`.
    SpectrumIn { index: usize, points: Vec<f64> },
    /// The joint spectrum of the (commuting normal) dilation lies in `body`,
    /// complex members read as `(Re, Im)` pairs.
    JointSpectrumIn { body: ConvexBody },
    /// Every joint eigenvalue is one of `points`.
    JointSpectrumAt { points: Vec<Vec<f64>> },
    /// Every joint eigenvalue vanishes outside one group `i`, where it lies in
    /// `bodies[i]`.
    GroupedSpectrumIn { groups: Vec<usize>, bodies: Vec<ConvexBody> },
    /// `W` anticommutes with every member.
    AnticommutesWith { witness: ComplexMatrix },
    /// `Σ SⱼSⱼ* = I = Σ Sⱼ*Sⱼ` for the named auxiliary tuple.
    ResolutionOfIdentity { aux: String },
}

impl Property {
    pub fn name(&self) -> String {
        match self {
            Property::Compression => "compression".into(),
            Property::Isometry => "isometry".into(),
            Property::Hermitian => "hermitian".into(),
            Property::Normal => "normal".into(),
            Property::Commuting => "commuting".into(),
            Property::Anticommuting => "anticommuting".into(),
            Property::Annihilating { .. } => "annihilating".into(),
            Property::NormBound { index, bound } => format!("norm_bound[{index}] <= {bound}"),
            Property::SquareScalar { index, value } => format!("square[{index}] = {value} I"),
            Property::Unitary { index, scale } => format!("unitary[{index}] scale {scale}"),
            Property::SpectrumIn { index, .. } => format!("spectrum_in[{index}]"),
            Property::JointSpectrumIn { .. } => "joint_spectrum_in".into(),
            Property::JointSpectrumAt { .. } => "joint_spectrum_at_points".into(),
            Property::GroupedSpectrumIn { .. } => "grouped_joint_spectrum_in".into(),
            Property::AnticommutesWith { .. } => "anticommutes_with_witness".into(),
            Property::ResolutionOfIdentity { aux } => format!("resolution_of_identity[{aux}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Claim {
    pub property: Property,
    /// Largest acceptable residual.
    pub bound: f64,
    /// Residual recorded at construction time (informational only).
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub input: MatrixTuple,
    pub dilation: MatrixTuple,
    pub isometry: Isometry,
    pub claims: Vec<Claim>,
    /// The norm scales the construction certifies.
    pub scale: Vec<f64>,
    /// Named intermediate tuples that some claims refer to.
    pub aux: Vec<(String, MatrixTuple)>,
    pub conclusion: Option<String>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn worst(&self) -> Option<&CheckResult> {
        self.checks.iter().max_by(|a, b| (a.residual - a.bound).total_cmp(&(b.residual - b.bound)))
    }
}

impl Certificate {
    /// A certificate with the compression and isometry claims already set.
    pub fn new(input: MatrixTuple, dilation: MatrixTuple, isometry: Isometry, tol: f64) -> Result<Self> {
        let mut cert = Certificate {
            input,
            dilation,
            isometry,
            claims: Vec::new(),
            scale: Vec::new(),
            aux: Vec::new(),
            conclusion: None,
            notes: Vec::new(),
        };
        cert.claim(Property::Isometry, tol)?;
        cert.claim(Property::Compression, tol)?;
        Ok(cert)
    }

    /// Adds a claim, evaluating it now. A residual above the bound is an error:
    /// constructions never emit failing claims.
    pub fn claim(&mut self, property: Property, bound: f64) -> Result<&mut Self> {
        let residual = self.evaluate(&property)?;
        if !(residual <= bound) {
            return Err(Error::Premise(format!(
                "construction failed its own claim {}: residual {residual:.3e} > {bound:.3e}",
                property.name()
            )));
        }
        self.claims.push(Claim { property, bound, residual });
        Ok(self)
    }

    pub fn with_aux(&mut self, name: &str, tuple: MatrixTuple) -> &mut Self {
        self.aux.push((name.into(), tuple));
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }

    pub fn aux(&self, name: &str) -> Option<&MatrixTuple> {
        self.aux.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    /// Recomputes every claim. With `tol`, each claim's acceptable residual is
    /// replaced by `tol`.
    pub fn verify(&self, tol: Option<f64>) -> VerifyReport {
        let checks = self
            .claims
            .iter()
            .map(|c| {
                let residual = self.evaluate(&c.property).unwrap_or(f64::INFINITY);
                let bound = tol.unwrap_or(c.bound);
                CheckResult { name: c.property.name(), residual, bound, pass: residual <= bound }
            })
            .collect();
        VerifyReport { checks }
    }

    /// Residual of `property` recomputed from the stored matrices.
    pub fn evaluate(&self, property: &Property) -> Result<f64> {
        let n = &self.dilation;
        let members = n.matrices();
        let index = |i: usize| {
            members.get(i).ok_or_else(|| Error::Shape(format!("claim refers to member {i} of a {}-tuple", n.d())))
        };
        Ok(match property {
            Property::Compression => compression_residual(&self.isometry, n, &self.input)?,
            Property::Isometry => self.isometry.defect(),
            Property::Hermitian => n.hermitian_residual(),
            Property::Normal => n.normality_residual(),
            Property::Commuting => n.commutator_residual(),
            Property::Anticommuting => n.anticommutator_residual(),
            Property::Annihilating { groups } => {
                let sizes = groups.clone().unwrap_or_else(|| alloc::vec![n.d()]);
                if sizes.iter().sum::<usize>() != n.d() {
                    return Err(Error::Shape("group sizes do not add up to the tuple length".into()));
                }
                let mut worst = 0.0f64;
                let mut start = 0;
                for s in sizes {
                    for i in start..start + s {
                        for j in start..start + s {
                            if i != j {
                                worst = worst.max(members[i].matmul(&members[j]).frobenius());
                            }
                        }
                    }
                    start += s;
                }
                worst
            }
            Property::NormBound { index: i, bound } => (op_norm(index(*i)?) - bound).max(0.0),
            Property::SquareScalar { index: i, value } => {
                let m = index(*i)?;
                (&m.matmul(m) - &ComplexMatrix::identity(m.rows()).scale_real(*value)).frobenius()
            }
            Property::Unitary { index: i, scale } => {
                let m = index(*i)?;
                let target = ComplexMatrix::identity(m.rows()).scale_real(scale * scale);
                let a = (&m.adjoint_mul(m) - &target).frobenius();
                let b = (&m.matmul(&m.adjoint()) - &target).frobenius();
                a.max(b)
            }
            Property::SpectrumIn { index: i, points } => {
                let m = index(*i)?;
                let eig = crate::linalg::hermitian_eigen(m)?;
                let herm = m.hermitian_residual();
                eig.values
                    .iter()
                    .map(|v| points.iter().map(|p| (v - p).abs()).fold(f64::INFINITY, f64::min))
                    .fold(herm, f64::max)
            }
            Property::JointSpectrumIn { body } => {
                let spectrum = self.real_joint_spectrum()?;
                let mut worst = 0.0f64;
                for p in &spectrum {
                    worst = worst.max(body.distance(p)?);
                }
                worst
            }
            Property::JointSpectrumAt { points } => {
                let spectrum = self.real_joint_spectrum()?;
                let mut worst = 0.0f64;
                for p in &spectrum {
                    if points.iter().any(|q| q.len() != p.len()) {
                        return Err(Error::Shape("spectrum points of the wrong length".into()));
                    }
                    let d = points.iter().map(|q| crate::linalg::real::dist(p, q)).fold(f64::INFINITY, f64::min);
                    worst = worst.max(d);
                }
                worst
            }
            Property::GroupedSpectrumIn { groups, bodies } => {
                let spectrum = self.real_joint_spectrum()?;
                let widths = self.group_widths(groups)?;
                let mut worst = 0.0f64;
                for p in &spectrum {
                    worst = worst.max(grouped_distance(p, &widths, bodies)?);
                }
                worst
            }
            Property::AnticommutesWith { witness } => {
                let mut worst = 0.0f64;
                for m in members {
                    if witness.rows() != m.rows() || !witness.is_square() {
                        return Err(Error::Shape("witness size does not match the dilation".into()));
                    }
                    worst = worst.max(m.anticommutator(witness).frobenius());
                }
                worst
            }
            Property::ResolutionOfIdentity { aux } => {
                let s = self.aux(aux).ok_or_else(|| Error::Shape(format!("no auxiliary tuple named {aux}")))?;
                let dim = s.dim();
                let mut left = ComplexMatrix::zeros(dim, dim);
                let mut right = ComplexMatrix::zeros(dim, dim);
                for m in s.iter() {
                    left += &m.matmul(&m.adjoint());
                    right += &m.adjoint_mul(m);
                }
                let id = ComplexMatrix::identity(dim);
                (&left - &id).frobenius().max((&right - &id).frobenius())
            }
        })
    }

    /// Joint eigenvalues as real vectors, each complex member contributing its
    /// real and imaginary parts.
    fn real_joint_spectrum(&self) -> Result<Vec<Vec<f64>>> {
        real_joint_spectrum(&self.dilation, &ToleranceConfig::default().with_tol(1e-6))
    }

    fn group_widths(&self, groups: &[usize]) -> Result<Vec<usize>> {
        let flags = self.dilation.hermitian_flags();
        if groups.iter().sum::<usize>() != flags.len() {
            return Err(Error::Shape("group sizes do not add up to the tuple length".into()));
        }
        let mut widths = Vec::with_capacity(groups.len());
        let mut start = 0;
        for &g in groups {
            widths.push(flags[start..start + g].iter().map(|&h| if h { 1 } else { 2 }).sum());
            start += g;
        }
        Ok(widths)
    }
}

/// Distance from `p` to the union over `i` of `{0} × ... × bodies[i] × ... × {0}`.
fn grouped_distance(p: &[f64], widths: &[usize], bodies: &[ConvexBody]) -> Result<f64> {
    if widths.len() != bodies.len() {
        return Err(Error::Shape("one body per group is required".into()));
    }
    let mut blocks = Vec::with_capacity(widths.len());
    let mut start = 0;
    for &w in widths {
        blocks.push(&p[start..start + w]);
        start += w;
    }
    let sq: Vec<f64> = blocks.iter().map(|b| b.iter().map(|x| x * x).sum()).collect();
    let total: f64 = sq.iter().sum();
    let mut best = f64::INFINITY;
    for (i, body) in bodies.iter().enumerate() {
        let d = body.distance(blocks[i])?;
        best = best.min(num::sqrt(d * d + (total - sq[i]).max(0.0)));
    }
    Ok(best)
}
