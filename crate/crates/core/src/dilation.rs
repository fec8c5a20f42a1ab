//! Explicit dilation constructions: Halmos unitary dilations, the rank-one
//! orthogonal family `Q₁, ..., Q_d`, tensor dilations built on it, and the
//! contraction-to-normal pipeline.
//!
//! Tensor products put the family index outside: `Qᵢ ⊗ M`. The first basis
//! vector of every `Qᵢ` has weight one, so `V = e₁ ⊗ I` compresses
//! `Qᵢ ⊗ M` back to `M`.

use crate::bodies::scale::ScaleVector;
use crate::bodies::{product, ConvexBody};
use crate::certificate::{Certificate, Property};
use crate::error::{Error, Result};
use crate::linalg::eigen::{hermitian_eigen, op_norm, psd_sqrt};
use crate::linalg::{ComplexMatrix, Isometry, MatrixTuple, ToleranceConfig, C64};
use crate::matrix_convex::{check_commuting_normal, joint_diagonalize, povm_blocks, real_joint_spectrum};
use crate::num;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

/// Default claim bound: `1e-8` up to dimension 256, growing linearly after.
pub fn claim_bound(dim: usize) -> f64 {
    1e-8 * (dim as f64 / 256.0).max(1.0)
}

fn norm_slack(tol: &ToleranceConfig, bound: f64) -> f64 {
    tol.scaled(bound)
}

/// `[[X, √(b²I − XX*)], [√(b²I − X*X), −X*]]`.
pub fn halmos_matrix(x: &ComplexMatrix, bound: f64, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    if !x.is_square() {
        return Err(Error::NotSquare { rows: x.rows(), cols: x.cols() });
    }
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }
    let norm = op_norm(x);
    if norm > bound + norm_slack(tol, bound) {
        return Err(Error::NormExceeded { index: 0, norm, bound });
    }
    let n = x.rows();
    let b2 = ComplexMatrix::identity(n).scale_real(bound * bound);
    // The norm check above already admitted `‖X‖` slightly over `b`.
    let loose = ToleranceConfig { eig_tol: tol.eig_tol.max(4.0 * norm_slack(tol, bound) / bound.max(1e-300)), ..*tol };
    let x_adj = x.adjoint();
    let top = psd_sqrt(&(&b2 - &x.matmul(&x_adj)).hermitian_part(), &loose)?;
    let bottom = psd_sqrt(&(&b2 - &x_adj.matmul(x)).hermitian_part(), &loose)?;
    Ok(ComplexMatrix::block2x2(x, &top, &bottom, &(-&x_adj)))
}

/// Halmos dilation of `X` with `‖X‖ ≤ bound`: unitary after division by
/// `bound`, Hermitian with square `b²I` when `X` is Hermitian.
pub fn halmos(x: &ComplexMatrix, bound: f64, tol: &ToleranceConfig) -> Result<Certificate> {
    let u = halmos_matrix(x, bound, tol)?;
    let n = x.rows();
    let hermitian = x.hermitian_residual() <= tol.scaled(x.frobenius());
    let input = MatrixTuple::with_flags(vec![x.clone()], vec![hermitian], f64::INFINITY)?;
    let dilation = MatrixTuple::with_flags(vec![u], vec![hermitian], f64::INFINITY)?;
    let b = claim_bound(2 * n) * bound.max(1.0);
    let mut cert = Certificate::new(input, dilation, Isometry::leading(2 * n, n), b)?;
    cert.claim(Property::Unitary { index: 0, scale: bound }, b * bound.max(1.0))?;
    if hermitian {
        cert.claim(Property::Hermitian, b)?;
        cert.claim(Property::SquareScalar { index: 0, value: bound * bound }, b * bound.max(1.0))?;
    }
    cert.scale = vec![bound];
    Ok(cert)
}

/// Rank-one Hermitian `Qᵢ` with `σ(Qᵢ) = {0, aᵢ}`, `QᵢQⱼ = 0` and
/// `(Qᵢ)₁₁ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalFamily {
    pub scales: ScaleVector,
    pub q: Vec<ComplexMatrix>,
}

impl OrthogonalFamily {
    pub fn d(&self) -> usize {
        self.q.len()
    }

    /// Largest deviation over all defining properties and `Σ Qᵢ/aᵢ = I`.
    pub fn residual(&self) -> Result<f64> {
        let d = self.d();
        let a = self.scales.values();
        let mut worst = 0.0f64;
        let mut sum = ComplexMatrix::zeros(d, d);
        for (i, qi) in self.q.iter().enumerate() {
            worst = worst.max(qi.hermitian_residual());
            let eig = hermitian_eigen(qi)?;
            for (k, v) in eig.values.iter().enumerate() {
                let target = if k + 1 == d { a[i] } else { 0.0 };
                worst = worst.max((v - target).abs());
            }
            worst = worst.max((qi[(0, 0)] - C64::new(1.0, 0.0)).norm());
            for (j, qj) in self.q.iter().enumerate() {
                if i != j {
                    worst = worst.max(qi.matmul(qj).frobenius());
                }
            }
            sum.axpy(C64::new(1.0 / a[i], 0.0), qi);
        }
        Ok(worst.max((&sum - &ComplexMatrix::identity(d)).frobenius()))
    }
}

/// The family for scales with `Σ 1/aᵢ = 1`. With `H` the Householder
/// reflection taking `e₁` to `w = (aᵢ^{-1/2})ᵢ`, `Qᵢ = aᵢ hᵢhᵢᵀ` for the
/// columns `hᵢ` of `H`.
pub fn q_family(a: &ScaleVector) -> Result<OrthogonalFamily> {
    let h = a.harmonic_sum();
    if (h - 1.0).abs() > 1e-12 {
        return Err(Error::InfeasibleScales(format!("q_family needs sum of reciprocals 1, got {h}")));
    }
    let d = a.d();
    let w: Vec<f64> = a.values().iter().map(|x| 1.0 / num::sqrt(*x)).collect();
    let mut z = w.clone();
    z[0] -= 1.0;
    let zz: f64 = z.iter().map(|x| x * x).sum();
    let house = |i: usize, j: usize| {
        let id = if i == j { 1.0 } else { 0.0 };
        if zz < 1e-30 {
            id
        } else {
            id - 2.0 * z[i] * z[j] / zz
        }
    };
    let q = (0..d)
        .map(|k| {
            let col: Vec<f64> = (0..d).map(|i| house(i, k)).collect();
            ComplexMatrix::from_fn(d, d, |i, j| C64::new(a.values()[k] * col[i] * col[j], 0.0))
        })
        .collect();
    Ok(OrthogonalFamily { scales: a.clone(), q })
}

/// Scales shrunk to `Σ 1/aᵢ = 1` when the sum is below one.
fn tight(a: &ScaleVector) -> Result<ScaleVector> {
    if !a.is_harmonic_feasible() {
        return Err(Error::InfeasibleScales(format!("sum of reciprocals {:.6} > 1", a.harmonic_sum())));
    }
    if (a.harmonic_sum() - 1.0).abs() <= 1e-12 {
        Ok(a.clone())
    } else {
        a.tightened()
    }
}

fn group_sizes(tuples: &[MatrixTuple]) -> Vec<usize> {
    tuples.iter().map(|t| t.d()).collect()
}

fn common_dim(tuples: &[MatrixTuple]) -> Result<usize> {
    let n = tuples.first().ok_or_else(|| Error::Shape("no groups".into()))?.dim();
    if tuples.iter().any(|t| t.dim() != n) {
        return Err(Error::Shape("groups act on spaces of different dimension".into()));
    }
    Ok(n)
}

/// Checks `σ(M) ⊆ K` for a commuting normal group.
fn check_spectrum_in(m: &MatrixTuple, k: &ConvexBody, tol: &ToleranceConfig, group: usize) -> Result<()> {
    let scale = 1.0 + m.max_norm();
    for p in real_joint_spectrum(m, tol)? {
        if p.len() != k.dim() {
            return Err(Error::Shape(format!("group {} has {} real coordinates, its body {}", group + 1, p.len(), k.dim())));
        }
        let dist = k.distance(&p)?;
        if dist > 1e3 * tol.scaled(scale) {
            return Err(Error::Premise(format!("joint eigenvalue {p:?} of group {} is {dist:.3e} outside its body", group + 1)));
        }
    }
    Ok(())
}

/// `N^[i]_j = Qᵢ ⊗ M^[i]_j` for commuting normal groups with `σ(M^[i]) ⊆ Kᵢ`,
/// `0 ∈ Kᵢ` and `Σ 1/aᵢ ≤ 1`. The joint spectrum lands in
/// `⋃ᵢ {0} × ... × aᵢKᵢ × ... × {0}`.
pub fn positive_scaling_dilation(
    tuples: &[MatrixTuple],
    bodies: &[ConvexBody],
    a: &ScaleVector,
    tol: &ToleranceConfig,
) -> Result<Certificate> {
    let d = tuples.len();
    if bodies.len() != d || a.d() != d {
        return Err(Error::Shape(format!("{d} groups, {} bodies, {} scales", bodies.len(), a.d())));
    }
    let n = common_dim(tuples)?;
    for (i, (m, k)) in tuples.iter().zip(bodies).enumerate() {
        check_commuting_normal(m, tol)?;
        if !k.contains_origin()? {
            return Err(Error::Premise(format!("0 is not in the body of group {}", i + 1)));
        }
        check_spectrum_in(m, k, tol, i)?;
    }
    let scales = tight(a)?;
    let family = q_family(&scales)?;
    let mut members = Vec::new();
    let mut flags = Vec::new();
    for (i, m) in tuples.iter().enumerate() {
        for (j, mj) in m.iter().enumerate() {
            members.push(family.q[i].kron(mj));
            flags.push(m.hermitian_flags()[j]);
        }
    }
    let dilation = MatrixTuple::with_flags(members, flags, f64::INFINITY)?;
    let input = MatrixTuple::conjoin(tuples)?;
    let bound = claim_bound(n * d) * (1.0 + input.max_norm());
    let mut cert = Certificate::new(input, dilation, Isometry::leading(n * d, n), bound)?;
    let scaled: Vec<ConvexBody> = bodies.iter().zip(scales.values()).map(|(k, s)| k.scaled(*s)).collect::<Result<_>>()?;
    cert.claim(Property::Normal, bound * scales.values()[0].max(1.0))?;
    cert.claim(Property::Commuting, bound)?;
    cert.claim(Property::GroupedSpectrumIn { groups: group_sizes(tuples), bodies: scaled }, 1e3 * bound)?;
    cert.scale = scales.values().to_vec();
    Ok(cert)
}

/// Projective groups keep their own space; others get a Naimark dilation.
/// Returns the isometry into the group space and one projection per member.
fn group_projections(group: &MatrixTuple, tol: &ToleranceConfig) -> Result<(ComplexMatrix, Vec<ComplexMatrix>)> {
    let p = group.matrices();
    let n = group.dim();
    let blocks = povm_blocks(p, tol)?;
    let slack = tol.scaled(1.0) * 10.0;
    let projective = p.iter().enumerate().all(|(i, pi)| {
        (&pi.matmul(pi) - pi).frobenius() <= slack
            && p.iter().enumerate().all(|(j, pj)| i == j || pi.matmul(pj).frobenius() <= slack)
    });
    if projective {
        return Ok((ComplexMatrix::identity(n), p.iter().map(|m| m.hermitian_part()).collect()));
    }
    // Zero blocks contribute nothing to `V`; their projections are zero.
    let live: Vec<usize> = (0..blocks.len()).filter(|&i| blocks[i].max_abs() > tol.eig_tol).collect();
    let roots: Vec<ComplexMatrix> = live.iter().map(|&i| psd_sqrt(&blocks[i], tol)).collect::<Result<_>>()?;
    let refs: Vec<&ComplexMatrix> = roots.iter().collect();
    let v = ComplexMatrix::vstack(&refs);
    let big = v.rows();
    let mut projections = Vec::with_capacity(p.len());
    for k in 0..p.len() {
        let mut pi = ComplexMatrix::zeros(big, big);
        if let Some(pos) = live.iter().position(|&i| i == k) {
            for r in 0..n {
                pi[(pos * n + r, pos * n + r)] = C64::new(1.0, 0.0);
            }
        }
        projections.push(pi);
    }
    Ok((v, projections))
}

/// Dilation of sub-POVM groups (`Σⱼ P^[i]_j ≤ I` for each `i`) to commuting
/// Hermitian `Q^[i]_j` with spectra in `{0, aᵢ}` and `Q^[i]_k Q^[i]_l = 0`.
///
/// Each group is dilated to projections `Π^[i]` on `ℂ^{mᵢ}` through
/// `Vᵢ`. Since every `Qᵢ` of the orthogonal family has rank one,
/// `Π ⊗ Qᵢ` only needs the range of `Qᵢ`: the output lives on `⊕ᵢ ℂ^{mᵢ}`
/// with `aᵢΠ^[i]_j` on block `i`, and `W = ⊕ᵢ aᵢ^{-1/2} Vᵢ`. When
/// `Σ 1/aᵢ < 1` the scales are kept and `W` gets one more block
/// `(1 − Σ 1/aᵢ)^{1/2} I` on which every output vanishes, so the spectra stay
/// in `{0, aᵢ}`.
pub fn sd_projection_dilation(groups: &[MatrixTuple], a: &ScaleVector, tol: &ToleranceConfig) -> Result<Certificate> {
    let d = groups.len();
    if a.d() != d {
        return Err(Error::Shape(format!("{d} groups but {} scales", a.d())));
    }
    let n = common_dim(groups)?;
    if !a.is_harmonic_feasible() {
        return Err(Error::InfeasibleScales(format!("sum of reciprocals {:.6} > 1", a.harmonic_sum())));
    }
    let scales = a.clone();
    let slack = 1.0 - a.harmonic_sum();
    let parts: Vec<(ComplexMatrix, Vec<ComplexMatrix>)> =
        groups.iter().map(|g| group_projections(g, tol)).collect::<Result<_>>()?;
    let widths: Vec<usize> = parts.iter().map(|(v, _)| v.rows()).collect();
    let pad = if slack > 1e-12 { n } else { 0 };
    let total: usize = widths.iter().sum::<usize>() + pad;
    let mut w = ComplexMatrix::zeros(total, n);
    if pad > 0 {
        w.set_block(total - pad, 0, &ComplexMatrix::identity(n).scale_real(num::sqrt(slack)));
    }
    let mut members = Vec::new();
    let mut offset = 0;
    for (i, (v, projections)) in parts.iter().enumerate() {
        let ai = scales.values()[i];
        w.set_block(offset, 0, &v.scale_real(1.0 / num::sqrt(ai)));
        for pi in projections {
            let mut m = ComplexMatrix::zeros(total, total);
            m.set_block(offset, offset, &pi.scale_real(ai));
            members.push(m);
        }
        offset += widths[i];
    }
    let input = MatrixTuple::conjoin(groups)?;
    let dilation = MatrixTuple::with_flags(members, vec![true; input.d()], f64::INFINITY)?;
    let bound = claim_bound(total);
    let isometry = Isometry::new(w, 1e-8)?;
    let mut cert = Certificate::new(input, dilation, isometry, bound)?;
    let amax = scales.values().iter().fold(1.0f64, |x, y| x.max(*y));
    let mut index = 0;
    for (i, g) in groups.iter().enumerate() {
        let ai = scales.values()[i];
        for _ in 0..g.d() {
            cert.claim(Property::SpectrumIn { index, points: vec![-ai, 0.0, ai] }, bound * amax)?;
            index += 1;
        }
    }
    cert.claim(Property::Hermitian, bound)?;
    cert.claim(Property::Commuting, bound * amax * amax)?;
    cert.claim(Property::Annihilating { groups: Some(group_sizes(groups)) }, bound * amax * amax)?;
    cert.note(format!("finite-dimensional output on C^{total}"));
    cert.scale = scales.values().to_vec();
    Ok(cert)
}

/// Whether `K = −K`, from the vertices for polytopes and from sampled
/// supports otherwise.
fn is_symmetric(k: &ConvexBody, tol: f64) -> Result<bool> {
    let scale = 1.0 + k.radius_bound()?;
    if let Some(vertices) = k.vertices() {
        for v in vertices {
            let neg: Vec<f64> = v.iter().map(|x| -x).collect();
            if !k.member(&neg, tol * scale)? {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    for c in crate::bodies::directions::directions(k.dim(), 64, 0) {
        let neg: Vec<f64> = c.iter().map(|x| -x).collect();
        if (k.support(&c)? - k.support(&neg)?).abs() > tol * scale {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Commuting normal Hermitian groups with `σ(N^[i]) ⊆ Kᵢ = −Kᵢ` dilate to
/// `M^[i]_j = Σₖ λ^[i]_{j,k} (Qᵢ ⊗ P^[i]_k)`, where `P^[i]_k` are the rank-one
/// joint eigenprojections of group `i`. The joint spectrum lies in `∏ aᵢKᵢ`.
pub fn symmetric_sd_dilation(
    tuples: &[MatrixTuple],
    bodies: &[ConvexBody],
    a: &ScaleVector,
    tol: &ToleranceConfig,
) -> Result<Certificate> {
    let d = tuples.len();
    if bodies.len() != d || a.d() != d {
        return Err(Error::Shape(format!("{d} groups, {} bodies, {} scales", bodies.len(), a.d())));
    }
    let n = common_dim(tuples)?;
    for (i, (m, k)) in tuples.iter().zip(bodies).enumerate() {
        if !m.is_hermitian() {
            return Err(Error::Premise(format!("group {} is not Hermitian", i + 1)));
        }
        if !is_symmetric(k, 1e-9)? {
            return Err(Error::Premise(format!("the body of group {} is not symmetric", i + 1)));
        }
        check_spectrum_in(m, k, tol, i)?;
    }
    let scales = tight(a)?;
    let family = q_family(&scales)?;
    let mut members = Vec::new();
    for (i, m) in tuples.iter().enumerate() {
        let jd = joint_diagonalize(m, tol)?;
        let projections: Vec<ComplexMatrix> = (0..n)
            .map(|k| {
                let col = jd.vectors.column_vec(k);
                family.q[i].kron(&ComplexMatrix::outer(&col))
            })
            .collect();
        for j in 0..m.d() {
            let mut out = ComplexMatrix::zeros(n * d, n * d);
            for (k, p) in projections.iter().enumerate() {
                out.axpy(C64::new(jd.values[k][j].re, 0.0), p);
            }
            members.push(out.hermitian_part());
        }
    }
    let input = MatrixTuple::conjoin(tuples)?;
    let dilation = MatrixTuple::with_flags(members, vec![true; input.d()], f64::INFINITY)?;
    let amax = scales.values().iter().fold(1.0f64, |x, y| x.max(*y));
    let bound = claim_bound(n * d) * (1.0 + input.max_norm()) * amax;
    let mut cert = Certificate::new(input, dilation, Isometry::leading(n * d, n), bound)?;
    let scaled: Vec<ConvexBody> = bodies.iter().zip(scales.values()).map(|(k, s)| k.scaled(*s)).collect::<Result<_>>()?;
    cert.claim(Property::Hermitian, bound)?;
    cert.claim(Property::Commuting, bound * amax)?;
    cert.claim(Property::GroupedSpectrumIn { groups: group_sizes(tuples), bodies: scaled.clone() }, 1e3 * bound)?;
    cert.claim(Property::JointSpectrumIn { body: product(scaled)? }, 1e3 * bound)?;
    cert.scale = scales.values().to_vec();
    Ok(cert)
}

/// Constructions turning Hermitian contractions `Z₁, ..., Z_m` into mutually
/// annihilating Hermitian dilations `Mₖ` with `‖Mₖ‖ ≤ scale`.
pub trait AnnihilatingBackend {
    fn name(&self) -> &'static str;
    fn dilate(&self, z: &MatrixTuple, tol: &ToleranceConfig) -> Result<Certificate>;
}

/// The explicit backend: `Mₖ = Qₖ ⊗ Zₖ` with uniform scales `m`.
#[derive(Clone, Copy, Debug, Default)]
pub struct QFamilyBackend;

impl AnnihilatingBackend for QFamilyBackend {
    fn name(&self) -> &'static str {
        "q-family"
    }

    fn dilate(&self, z: &MatrixTuple, tol: &ToleranceConfig) -> Result<Certificate> {
        orthogonal_family_dilation(z, &ScaleVector::uniform(z.d(), z.d() as f64)?, tol)
    }
}

/// `Mₖ = Qₖ ⊗ Zₖ` for Hermitian contractions `Zₖ`: Hermitian, mutually
/// annihilating, `‖Mₖ‖ ≤ aₖ`.
pub fn orthogonal_family_dilation(z: &MatrixTuple, a: &ScaleVector, tol: &ToleranceConfig) -> Result<Certificate> {
    let m = z.d();
    if a.d() != m {
        return Err(Error::Shape(format!("{m} operators but {} scales", a.d())));
    }
    if !z.is_hermitian() {
        return Err(Error::Premise("orthogonal family dilations need Hermitian operators".into()));
    }
    for (index, zk) in z.iter().enumerate() {
        let norm = op_norm(zk);
        if norm > 1.0 + norm_slack(tol, 1.0) {
            return Err(Error::NormExceeded { index, norm, bound: 1.0 });
        }
    }
    let scales = tight(a)?;
    let family = q_family(&scales)?;
    let n = z.dim();
    let members: Vec<ComplexMatrix> = z.iter().zip(&family.q).map(|(zk, q)| q.kron(zk)).collect();
    let dilation = MatrixTuple::with_flags(members, vec![true; m], f64::INFINITY)?;
    let bound = claim_bound(n * m);
    let amax = scales.values().iter().fold(1.0f64, |x, y| x.max(*y));
    let mut cert = Certificate::new(z.clone(), dilation, Isometry::leading(n * m, n), bound)?;
    cert.claim(Property::Hermitian, bound)?;
    cert.claim(Property::Annihilating { groups: None }, bound * amax * amax)?;
    for (index, &s) in scales.values().iter().enumerate() {
        cert.claim(Property::NormBound { index, bound: s }, bound * amax)?;
    }
    cert.scale = scales.values().to_vec();
    Ok(cert)
}

/// Entrywise compensated (Neumaier) sum `Σ cₖ Aₖ`.
fn compensated_combination(terms: &[(C64, &ComplexMatrix)]) -> ComplexMatrix {
    let (rows, cols) = (terms[0].1.rows(), terms[0].1.cols());
    ComplexMatrix::from_fn(rows, cols, |i, j| {
        let (mut sum, mut comp) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        for (c, m) in terms {
            let x = c * m[(i, j)];
            let t = sum + x;
            let fix = |s: f64, x: f64, t: f64| if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
            comp += C64::new(fix(sum.re, x.re, t.re), fix(sum.im, x.im, t.im));
            sum = t;
        }
        sum + comp
    })
}

/// `ω^k` for the principal `d`-th root of unity.
fn omega_power(d: usize, k: i64) -> C64 {
    let r = k.rem_euclid(d as i64) as f64;
    let angle = core::f64::consts::TAU * r / d as f64;
    C64::new(num::cos(angle), num::sin(angle))
}

/// `Sⱼ = (1/d) Σₖ ω^{jk} Uₖ` for `j, k = 1, ..., d`.
pub fn averaged_unitaries(u: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    let d = u.len();
    (1..=d)
        .map(|j| {
            let terms: Vec<(C64, &ComplexMatrix)> =
                u.iter().enumerate().map(|(k, uk)| (omega_power(d, (j * (k + 1)) as i64) / d as f64, uk)).collect();
            compensated_combination(&terms)
        })
        .collect()
}

/// `Σₙ ω^{-jn} Sₙ`, which recovers `Uⱼ`.
pub fn inverse_average(s: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    let d = s.len();
    (1..=d)
        .map(|j| {
            let terms: Vec<(C64, &ComplexMatrix)> =
                s.iter().enumerate().map(|(k, sk)| (omega_power(d, -((j * (k + 1)) as i64)), sk)).collect();
            compensated_combination(&terms)
        })
        .collect()
}

/// `‖T₁ + T₂*‖`, a lower bound for the scale of normal dilations of a pair
/// of contractions.
pub fn adjoint_sum_norm(t: &MatrixTuple) -> Result<f64> {
    if t.d() < 2 {
        return Err(Error::Shape("needs at least two operators".into()));
    }
    Ok(op_norm(&(t.get(0) + &t.get(1).adjoint())))
}

/// Commuting normal dilation of contractions `T₁, ..., T_d` with
/// `‖Nⱼ‖ ≤ 2d`, on `ℂ^{4nd}`.
pub fn contraction_normal_dilation(t: &MatrixTuple, tol: &ToleranceConfig) -> Result<Certificate> {
    contraction_normal_dilation_with(&QFamilyBackend, t, tol)
}

/// Pipeline: Halmos unitaries `Uₖ`, averages `Sⱼ` with `Σ SⱼSⱼ* = I`,
/// Hermitian splitting `Sⱼ = Xⱼ + iYⱼ`, an annihilating dilation `R` of
/// `(X₁, Y₁, ..., X_d, Y_d)`, `M′ⱼ = R_{2j−1} + iR_{2j}` and finally
/// `Nⱼ = Σₙ ω^{−jn} M′ₙ`.
pub fn contraction_normal_dilation_with(
    backend: &dyn AnnihilatingBackend,
    t: &MatrixTuple,
    tol: &ToleranceConfig,
) -> Result<Certificate> {
    let d = t.d();
    let n = t.dim();
    for (index, tk) in t.iter().enumerate() {
        let norm = op_norm(tk);
        if norm > 1.0 + norm_slack(tol, 1.0) {
            return Err(Error::NormExceeded { index, norm, bound: 1.0 });
        }
    }
    if d == 1 {
        let u = halmos_matrix(t.get(0), 1.0, tol)?;
        let dilation = MatrixTuple::with_flags(vec![u], t.hermitian_flags().to_vec(), f64::INFINITY)?;
        let bound = claim_bound(2 * n);
        let mut cert = Certificate::new(t.clone(), dilation, Isometry::leading(2 * n, n), bound)?;
        cert.claim(Property::Unitary { index: 0, scale: 1.0 }, bound)?;
        cert.claim(Property::Normal, bound)?;
        cert.claim(Property::NormBound { index: 0, bound: 1.0 }, bound)?;
        cert.scale = vec![1.0];
        return Ok(cert);
    }
    let u: Vec<ComplexMatrix> = t.iter().map(|tk| halmos_matrix(tk, 1.0, tol)).collect::<Result<_>>()?;
    let s = averaged_unitaries(&u);
    let mut parts = Vec::with_capacity(2 * d);
    for sj in &s {
        parts.push(sj.hermitian_part());
        parts.push(sj.skew_part());
    }
    let z = MatrixTuple::with_flags(parts, vec![true; 2 * d], f64::INFINITY)?;
    let inner = backend.dilate(&z, tol)?;
    let r = inner.dilation.matrices();
    let big = r[0].rows();
    let m_prime: Vec<ComplexMatrix> = (0..d)
        .map(|j| {
            let mut m = r[2 * j].clone();
            m.axpy(C64::new(0.0, 1.0), &r[2 * j + 1]);
            m
        })
        .collect();
    let members = inverse_average(&m_prime);
    let dilation = MatrixTuple::with_flags(members, vec![false; d], f64::INFINITY)?;
    // Both stages embed onto leading coordinates, so their composite does too.
    if inner.isometry.big_dim() != big || inner.isometry.matrix() != Isometry::leading(big, 2 * n).matrix() {
        return Err(Error::Unsupported(format!("backend {} does not embed onto leading coordinates", backend.name())));
    }
    let scale = inner.scale.iter().fold(0.0f64, |x, y| x.max(*y));
    let bound = claim_bound(big) * scale;
    let mut cert = Certificate::new(t.clone(), dilation, Isometry::leading(big, n), bound)?;
    cert.with_aux("S", MatrixTuple::with_flags(s, vec![false; d], f64::INFINITY)?);
    cert.with_aux("U", MatrixTuple::with_flags(u, vec![false; d], f64::INFINITY)?);
    cert.claim(Property::ResolutionOfIdentity { aux: "S".into() }, claim_bound(2 * n))?;
    cert.claim(Property::Normal, bound * scale)?;
    cert.claim(Property::Commuting, bound * scale)?;
    for index in 0..d {
        cert.claim(Property::NormBound { index, bound: scale }, bound)?;
    }
    cert.scale = vec![scale; d];
    cert.note(format!("backend {}: certified scale {scale}", backend.name()));
    cert.note(format!("sqrt(2d) = {:.6} is a bound this construction does not certify", num::sqrt(2.0 * d as f64)));
    if d == 2 {
        cert.note(format!("lower bound witness ||T1 + T2*|| = {:.12}", adjoint_sum_norm(t)?));
    }
    Ok(cert)
}

/// Describes a scale vector for reports.
pub fn describe_scales(a: &[f64]) -> String {
    let parts: Vec<String> = a.iter().map(|x| format!("{x}")).collect();
    parts.join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;
    use crate::matrix_convex::joint_spectrum;
    use crate::rng::SeededRng;
    use proptest::prelude::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn m(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows)
    }

    fn random_contraction(n: usize, rng: &mut SeededRng) -> ComplexMatrix {
        let g = ComplexMatrix::from_fn(n, n, |_, _| C64::new(rng.normal(), rng.normal()));
        let s = op_norm(&g);
        g.scale_real(rng.uniform() / s)
    }

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, eps: f64) -> bool {
        (a - b).frobenius() <= eps
    }

    #[test]
    fn halmos_examples() {
        let c = halmos(&m(&[&[0.0]]), 1.0, &tol()).unwrap();
        assert_eq!(c.dilation.get(0), &m(&[&[0.0, 1.0], &[1.0, 0.0]]));
        let c = halmos(&m(&[&[1.0]]), 1.0, &tol()).unwrap();
        assert_eq!(c.dilation.get(0), &m(&[&[1.0, 0.0], &[0.0, -1.0]]));
        let c = halmos(&m(&[&[0.5]]), 1.0, &tol()).unwrap();
        let r = num::sqrt(3.0) / 2.0;
        assert!(close(c.dilation.get(0), &m(&[&[0.5, r], &[r, -0.5]]), 1e-15));
        assert!(c.verify(None).ok());
        assert!(matches!(halmos(&m(&[&[1.5]]), 1.0, &tol()), Err(Error::NormExceeded { .. })));
    }

    #[test]
    fn halmos_with_bound() {
        let x = m(&[&[1.0, 2.0], &[0.0, -1.0]]);
        let c = halmos(&x, 3.0, &tol()).unwrap();
        let u = c.dilation.get(0);
        assert!(close(&u.adjoint_mul(u), &ComplexMatrix::identity(4).scale_real(9.0), 1e-12));
        assert!(c.verify(None).ok());
    }

    #[test]
    fn q_family_examples() {
        let f = q_family(&ScaleVector::new(vec![1.0]).unwrap()).unwrap();
        assert_eq!(f.q, vec![m(&[&[1.0]])]);
        let f = q_family(&ScaleVector::new(vec![2.0, 2.0]).unwrap()).unwrap();
        assert!(close(&f.q[0], &m(&[&[1.0, 1.0], &[1.0, 1.0]]), 1e-14));
        assert!(close(&f.q[1], &m(&[&[1.0, -1.0], &[-1.0, 1.0]]), 1e-14));
        let f = q_family(&ScaleVector::uniform(3, 3.0).unwrap()).unwrap();
        assert!(f.residual().unwrap() <= 1e-12);
        assert!(q_family(&ScaleVector::new(vec![3.0, 3.0]).unwrap()).is_err());
    }

    #[test]
    fn positive_scaling_examples() {
        let unit = ConvexBody::unit_box(1).unwrap();
        let one = MatrixTuple::scalars(&[1.0]).unwrap();
        let c = positive_scaling_dilation(std::slice::from_ref(&one), std::slice::from_ref(&unit), &ScaleVector::new(vec![1.0]).unwrap(), &tol())
            .unwrap();
        assert_eq!(c.dilation.get(0), &m(&[&[1.0]]));

        let a = ScaleVector::new(vec![2.0, 2.0]).unwrap();
        let c = positive_scaling_dilation(&[one.clone(), one], &[unit.clone(), unit], &a, &tol()).unwrap();
        let mut spec: Vec<Vec<f64>> = joint_spectrum(&c.dilation, &tol())
            .unwrap()
            .into_iter()
            .map(|p| p.iter().map(|z| z.re).collect())
            .collect();
        spec.sort_by(|x, y| x[0].total_cmp(&y[0]).then(x[1].total_cmp(&y[1])));
        assert!(crate::linalg::real::dist(&spec[0], &[0.0, 2.0]) < 1e-12);
        assert!(crate::linalg::real::dist(&spec[1], &[2.0, 0.0]) < 1e-12);

        let sym = ConvexBody::cube(1, 1.0).unwrap();
        let z = MatrixTuple::new(vec![pauli::z()]).unwrap();
        let x = MatrixTuple::new(vec![pauli::x()]).unwrap();
        let c = positive_scaling_dilation(&[z, x], &[sym.clone(), sym], &a, &tol()).unwrap();
        assert!(c.verify(Some(1e-10)).ok());
    }

    #[test]
    fn positive_scaling_premises() {
        let unit = ConvexBody::unit_box(1).unwrap();
        let two = MatrixTuple::scalars(&[2.0]).unwrap();
        let a = ScaleVector::new(vec![1.0]).unwrap();
        assert!(positive_scaling_dilation(&[two], std::slice::from_ref(&unit), &a, &tol()).is_err());
        let away = ConvexBody::interval_product(vec![(1.0, 2.0)]).unwrap();
        let one = MatrixTuple::scalars(&[1.0]).unwrap();
        assert!(positive_scaling_dilation(std::slice::from_ref(&one), &[away], &a, &tol()).is_err());
        let small = ScaleVector::new(vec![1.5, 1.5]).unwrap();
        assert!(positive_scaling_dilation(&[one.clone(), one], &[unit.clone(), unit], &small, &tol()).is_err());
    }

    #[test]
    fn sd_projection_examples() {
        let half = MatrixTuple::scalars(&[0.5]).unwrap();
        let c = sd_projection_dilation(std::slice::from_ref(&half), &ScaleVector::new(vec![1.0]).unwrap(), &tol()).unwrap();
        assert!(close(c.dilation.get(0), &ComplexMatrix::from_real_diag(&[1.0, 0.0]), 1e-15));

        let c = sd_projection_dilation(&[half.clone(), half.clone()], &ScaleVector::new(vec![2.0, 2.0]).unwrap(), &tol()).unwrap();
        assert!(c.verify(Some(1e-10)).ok());

        // Slack in Σ 1/aᵢ keeps the scales: spectra in {0, 3}, not {0, 2}.
        let c = sd_projection_dilation(&[half.clone(), half.clone()], &ScaleVector::new(vec![3.0, 3.0]).unwrap(), &tol())
            .unwrap();
        assert!(c.verify(Some(1e-10)).ok());
        assert_eq!(c.scale, vec![3.0, 3.0]);
        for m in c.dilation.iter() {
            let e = hermitian_eigen(m).unwrap();
            assert!(e.values.iter().all(|v| v.abs() < 1e-12 || (v - 3.0).abs() < 1e-12));
            assert!((e.max() - 3.0).abs() < 1e-12);
        }

        let pvm = MatrixTuple::new(vec![
            ComplexMatrix::from_real_diag(&[1.0, 0.0]),
            ComplexMatrix::from_real_diag(&[0.0, 1.0]),
        ])
        .unwrap();
        let c = sd_projection_dilation(std::slice::from_ref(&pvm), &ScaleVector::new(vec![1.0]).unwrap(), &tol()).unwrap();
        assert_eq!(c.dilation, pvm);

        let over = MatrixTuple::scalars(&[0.7, 0.7]).unwrap();
        assert!(sd_projection_dilation(&[over], &ScaleVector::new(vec![1.0]).unwrap(), &tol()).is_err());
    }

    #[test]
    fn symmetric_sd_examples() {
        let sym = ConvexBody::cube(1, 1.0).unwrap();
        let a = ScaleVector::new(vec![2.0, 2.0]).unwrap();
        let z = MatrixTuple::new(vec![pauli::z()]).unwrap();
        let x = MatrixTuple::new(vec![pauli::x()]).unwrap();
        let c = symmetric_sd_dilation(&[z.clone(), x.clone()], &[sym.clone(), sym.clone()], &a, &tol()).unwrap();
        let f = q_family(&a).unwrap();
        assert!(close(c.dilation.get(0), &f.q[0].kron(&pauli::z()), 1e-12));
        assert!(close(c.dilation.get(1), &f.q[1].kron(&pauli::x()), 1e-12));
        assert!(c.verify(None).ok());

        let n = MatrixTuple::diagonal(&[vec![0.3, -0.2], vec![-0.5, 0.1]]).unwrap();
        let diamond = ConvexBody::diamond_standard(2).unwrap();
        let c = symmetric_sd_dilation(std::slice::from_ref(&n), std::slice::from_ref(&diamond), &ScaleVector::new(vec![1.0]).unwrap(), &tol()).unwrap();
        assert!(c.dilation.matrices().iter().zip(n.iter()).all(|(p, q)| close(p, q, 1e-12)));

        let c = symmetric_sd_dilation(&[n.clone(), n.clone()], &[diamond.clone(), diamond.clone()], &a, &tol()).unwrap();
        let target = product(vec![diamond.scaled(2.0).unwrap(), diamond.scaled(2.0).unwrap()]).unwrap();
        for p in real_joint_spectrum(&c.dilation, &tol()).unwrap() {
            assert!(target.distance(&p).unwrap() < 1e-9);
        }

        let unit = ConvexBody::unit_box(1).unwrap();
        let half = MatrixTuple::scalars(&[0.5]).unwrap();
        assert!(symmetric_sd_dilation(&[half.clone(), half], &[unit.clone(), unit], &a, &tol()).is_err());
    }

    #[test]
    fn orthogonal_family_examples() {
        let z = MatrixTuple::new(vec![pauli::z()]).unwrap();
        let c = orthogonal_family_dilation(&z, &ScaleVector::new(vec![1.0]).unwrap(), &tol()).unwrap();
        assert_eq!(c.dilation.get(0), &pauli::z());

        let zx = MatrixTuple::new(vec![pauli::z(), pauli::x()]).unwrap();
        let c = orthogonal_family_dilation(&zx, &ScaleVector::uniform(2, 2.0).unwrap(), &tol()).unwrap();
        assert!(c.dilation.get(0).matmul(c.dilation.get(1)).frobenius() <= 1e-12);
        for mk in c.dilation.iter() {
            assert!((op_norm(mk) - 2.0).abs() < 1e-12);
        }
        assert!(c.verify(None).ok());
    }

    #[test]
    fn contraction_examples() {
        let zero = MatrixTuple::new(vec![m(&[&[0.0]])]).unwrap();
        let c = contraction_normal_dilation(&zero, &tol()).unwrap();
        assert_eq!(c.dilation.get(0), &m(&[&[0.0, 1.0], &[1.0, 0.0]]));
        assert_eq!(c.scale, vec![1.0]);

        let e = MatrixTuple::new(vec![pauli::elementary(2, 0, 1), pauli::elementary(2, 1, 0)]).unwrap();
        let c = contraction_normal_dilation(&e, &tol()).unwrap();
        assert!(c.verify(Some(1e-9)).ok());
        assert_eq!(c.dilation.dim(), 16);
        assert!(c.dilation.iter().all(|n| op_norm(n) <= 4.0 + 1e-9));
        assert!((adjoint_sum_norm(&e).unwrap() - 2.0).abs() < 1e-12);

        let mut rng = SeededRng::new(3);
        let t = MatrixTuple::new((0..3).map(|_| random_contraction(4, &mut rng)).collect()).unwrap();
        let c = contraction_normal_dilation(&t, &tol()).unwrap();
        assert!(c.dilation.normality_residual() <= 1e-8 && c.dilation.commutator_residual() <= 1e-8);
        assert!(c.evaluate(&Property::Compression).unwrap() <= 1e-9);
        assert!(c.dilation.iter().all(|n| op_norm(n) <= 6.0 + 1e-9));

        let big = MatrixTuple::new(vec![m(&[&[1.2]]), m(&[&[0.0]])]).unwrap();
        assert!(matches!(contraction_normal_dilation(&big, &tol()), Err(Error::NormExceeded { index: 0, .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn q_family_resolves_identity(raw in proptest::collection::vec(0.05f64..1.0, 1..6)) {
            let total: f64 = raw.iter().sum();
            let a = ScaleVector::new(raw.iter().map(|w| total / w).collect()).unwrap();
            let f = q_family(&a.tightened().unwrap()).unwrap();
            prop_assert!(f.residual().unwrap() <= 1e-10);
        }

        #[test]
        fn averaging_identities(seed in any::<u64>(), d in 2usize..5, n in 1usize..4) {
            let mut rng = SeededRng::new(seed);
            let u: Vec<ComplexMatrix> = (0..d)
                .map(|_| halmos_matrix(&random_contraction(n, &mut rng), 1.0, &tol()).unwrap())
                .collect();
            let s = averaged_unitaries(&u);
            let mut left = ComplexMatrix::zeros(2 * n, 2 * n);
            let mut right = left.clone();
            for sj in &s {
                left += &sj.matmul(&sj.adjoint());
                right += &sj.adjoint_mul(sj);
            }
            let id = ComplexMatrix::identity(2 * n);
            prop_assert!(close(&left, &id, 1e-10) && close(&right, &id, 1e-10));
            for (back, uj) in inverse_average(&s).iter().zip(&u) {
                prop_assert!(close(back, uj, 1e-10));
            }
        }

        #[test]
        fn contraction_certificates_reverify(seed in any::<u64>(), d in 1usize..4, n in 1usize..4) {
            let mut rng = SeededRng::new(seed);
            let t = MatrixTuple::new((0..d).map(|_| random_contraction(n, &mut rng)).collect()).unwrap();
            let c = contraction_normal_dilation(&t, &tol()).unwrap();
            let report = c.verify(None);
            prop_assert!(report.ok(), "{:?}", report.worst());
        }
    }
}
