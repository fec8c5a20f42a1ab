//! Joint eigenvector hunting, reducing-subspace decompositions, minimality
//! diagnostics and finite truncations of the compact counterexamples.

use crate::anticommuting::clifford_generators;
use crate::bodies::{hull, ConvexBody};
use crate::error::{Error, Result};
use crate::linalg::eigen::{hermitian_eigen, lambda_max, orthonormal_basis};
use crate::linalg::real;
use crate::linalg::{ComplexMatrix, Isometry, MatrixTuple, ToleranceConfig, C64};
use crate::matrix_convex::{combination, joint_diagonalize, wmax_membership, Verdict};
use crate::num;
use crate::rng::SeededRng;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

/// Orthonormal basis of `⋂ᵢ ker(Tᵢ − λᵢI)`, from the small singular values
/// of the stacked matrix `[T₁ − λ₁I; ...; T_d − λ_dI]`.
pub fn joint_eigenvector_hunt(t: &MatrixTuple, lambda: &[C64], tol: &ToleranceConfig) -> Result<Vec<Vec<C64>>> {
    if lambda.len() != t.d() {
        return Err(Error::Shape(format!("λ has {} entries for a {}-tuple", lambda.len(), t.d())));
    }
    let n = t.dim();
    let mut gram = ComplexMatrix::zeros(n, n);
    let mut scale = 1.0f64;
    for (m, &l) in t.iter().zip(lambda) {
        let shifted = m - &ComplexMatrix::identity(n).scale(l);
        scale = scale.max(shifted.frobenius());
        gram += &shifted.adjoint_mul(&shifted);
    }
    let eig = hermitian_eigen(&gram.hermitian_part())?;
    let cut = tol.eig_tol * scale;
    Ok((0..n).filter(|&k| num::sqrt(eig.values[k].max(0.0)) <= cut).map(|k| eig.vector(k)).collect())
}

/// Commutant of `{Tᵢ, Tᵢ*}` as a list of basis matrices.
///
/// A generic Hermitian element `G` of the generated algebra is diagonalized
/// first; every commutant element is block diagonal in its eigenbasis, which
/// leaves only the pairs inside eigenvalue clusters as unknowns. The kernel
/// of `X ↦ ([Hᵢ, X])ᵢ` on that span is read off its Gram matrix.
pub fn commutant_basis(t: &MatrixTuple, tol: &ToleranceConfig) -> Result<Vec<ComplexMatrix>> {
    let n = t.dim();
    let parts = t.real_parts();
    let mut rng = SeededRng::new(tol.seed ^ 0x5eed);
    let scale = parts.iter().map(|p| p.max_abs()).fold(1e-300, f64::max);
    let mut g = ComplexMatrix::zeros(n, n);
    for p in &parts {
        g.axpy(C64::new(rng.normal(), 0.0), p);
    }
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            g.axpy(C64::new(rng.normal() / scale, 0.0), &parts[i].anticommutator(&parts[j]).scale_real(0.5));
        }
    }
    let eig = hermitian_eigen(&g.hermitian_part())?;
    let gscale = eig.values.iter().fold(scale, |a, v| a.max(v.abs()));
    let mut cluster = vec![0usize; n];
    for k in 1..n {
        cluster[k] = cluster[k - 1] + usize::from(eig.values[k] - eig.values[k - 1] > tol.eig_tol * gscale);
    }
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|p| (0..n).map(move |q| (p, q))).filter(|&(p, q)| cluster[p] == cluster[q]).collect();
    let dim = pairs.len();
    if dim > 4096 {
        return Err(Error::Unsupported(format!("commutant search over {dim} unknowns")));
    }
    let u = &eig.vectors;
    let rotated: Vec<ComplexMatrix> = parts.iter().map(|p| u.adjoint().matmul(&p.matmul(u))).collect();
    let squares: Vec<ComplexMatrix> = rotated.iter().map(|h| h.matmul(h)).collect();
    let mut gram = ComplexMatrix::zeros(dim, dim);
    for (h, h2) in rotated.iter().zip(&squares) {
        for (b, &(p, q)) in pairs.iter().enumerate() {
            for (c, &(r, s)) in pairs.iter().enumerate() {
                let mut v = -(h[(p, r)] * h[(s, q)]) * 2.0;
                if q == s {
                    v += h2[(p, r)];
                }
                if p == r {
                    v += h2[(s, q)];
                }
                gram[(b, c)] += v;
            }
        }
    }
    let geig = hermitian_eigen(&gram.hermitian_part())?;
    let top = geig.max().max(scale * scale);
    let cut = ((tol.eig_tol * scale) * (tol.eig_tol * scale)).max(64.0 * f64::EPSILON * dim as f64 * top);
    let mut basis = Vec::new();
    for k in 0..dim {
        if geig.values[k] > cut {
            break;
        }
        let mut x = ComplexMatrix::zeros(n, n);
        for (b, &(p, q)) in pairs.iter().enumerate() {
            x[(p, q)] = geig.vectors[(b, k)];
        }
        basis.push(u.matmul(&x.matmul(&u.adjoint())));
    }
    Ok(basis)
}

/// One summand of a reducing decomposition: `tuple = V* T V` with `V`
/// spanning a reducing subspace.
#[derive(Clone, Debug)]
pub struct ReducingBlock {
    pub isometry: Isometry,
    pub tuple: MatrixTuple,
    /// Dimension of the block's computed commutant.
    pub commutant_dim: usize,
}

/// Splits `T` into irreducible summands: a random Hermitian element of the
/// commutant is diagonalized and each eigenspace is split recursively.
pub fn reducing_decomposition(t: &MatrixTuple, tol: &ToleranceConfig) -> Result<Vec<ReducingBlock>> {
    let mut rng = SeededRng::new(tol.seed);
    let n = t.dim();
    let mut out = Vec::new();
    decompose(t, ComplexMatrix::identity(n), tol, &mut rng, &mut out)?;
    Ok(out)
}

fn decompose(
    t: &MatrixTuple,
    frame: ComplexMatrix,
    tol: &ToleranceConfig,
    rng: &mut SeededRng,
    out: &mut Vec<ReducingBlock>,
) -> Result<()> {
    let n = t.dim();
    let basis = commutant_basis(t, tol)?;
    if basis.len() <= 1 {
        out.push(ReducingBlock { isometry: Isometry::new(frame, 1e-8)?, tuple: t.clone(), commutant_dim: basis.len() });
        return Ok(());
    }
    for _attempt in 0..8 {
        let mut x = ComplexMatrix::zeros(n, n);
        for b in &basis {
            x.axpy(C64::new(rng.normal(), rng.normal()), b);
        }
        let h = x.hermitian_part();
        let eig = hermitian_eigen(&h)?;
        let spread = eig.max() - eig.min();
        if spread <= tol.eig_tol * (1.0 + h.max_abs()) {
            continue;
        }
        let mut start = 0;
        for end in 1..=n {
            if end == n || eig.values[end] - eig.values[end - 1] > 1e-3 * spread {
                let w = ComplexMatrix::from_fn(n, end - start, |i, j| eig.vectors[(i, start + j)]);
                let sub = t.map(|_, m| w.adjoint().matmul(&m.matmul(&w)))?;
                let sub = MatrixTuple::with_flags(sub.into_matrices(), t.hermitian_flags().to_vec(), f64::INFINITY)?;
                decompose(&sub, frame.matmul(&w), tol, rng, out)?;
                start = end;
            }
        }
        return Ok(());
    }
    out.push(ReducingBlock { isometry: Isometry::new(frame, 1e-8)?, tuple: t.clone(), commutant_dim: basis.len() });
    Ok(())
}

/// `max ‖Σ_b V_b T^b_i V_b* − Tᵢ‖` over the blocks of a decomposition.
pub fn reconstruction_residual(t: &MatrixTuple, blocks: &[ReducingBlock]) -> f64 {
    let n = t.dim();
    let mut worst = 0.0f64;
    for (i, m) in t.iter().enumerate() {
        let mut sum = ComplexMatrix::zeros(n, n);
        for b in blocks {
            let v = b.isometry.matrix();
            sum += &v.matmul(&b.tuple.get(i).matmul(&v.adjoint()));
        }
        worst = worst.max((&sum - m).frobenius());
    }
    worst
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinimalityVerdict {
    MinimalDiagonal,
    NotMinimal,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct MinimalityReport {
    pub w1_in_k: bool,
    /// Smallest facet slack of `W₁(T)` in `K`.
    pub margin: f64,
    /// Each vertex of `K` with the joint eigenvectors found there.
    pub vertex_eigenvectors: Vec<(Vec<f64>, Vec<Vec<C64>>)>,
    /// Dimensions of the joint eigenspaces at the vertices; each is a
    /// reducing subspace on which `T` acts as scalars.
    pub normal_summand_dims: Vec<usize>,
    pub verdict: MinimalityVerdict,
    pub notes: Vec<String>,
}

/// Minimality diagnostics for a Hermitian tuple with `W₁(T) ⊆ K`.
pub fn minimality_report(t: &MatrixTuple, k: &ConvexBody, tol: &ToleranceConfig) -> Result<MinimalityReport> {
    if !t.is_hermitian() {
        return Err(Error::Premise("minimality reports need a Hermitian tuple".into()));
    }
    let vertices = k.vertices().ok_or_else(|| Error::Premise("K must be a polytope".into()))?;
    let membership = wmax_membership(t, k, 720, tol)?;
    if membership.verdict == Verdict::NonMember {
        return Err(Error::Premise(format!("W1(T) is not inside K (margin {:.3e})", membership.margin)));
    }
    let n = t.dim();
    let mut notes = Vec::new();
    let mut vertex_eigenvectors = Vec::with_capacity(vertices.len());
    for v in &vertices {
        let lambda: Vec<C64> = v.iter().map(|x| C64::new(*x, 0.0)).collect();
        vertex_eigenvectors.push((v.clone(), joint_eigenvector_hunt(t, &lambda, tol)?));
    }
    let normal_summand_dims: Vec<usize> = vertex_eigenvectors.iter().map(|(_, e)| e.len()).collect();
    let missing: Vec<&Vec<f64>> =
        vertex_eigenvectors.iter().filter(|(_, e)| e.is_empty()).map(|(v, _)| v).collect();
    let covered: usize = normal_summand_dims.iter().sum();
    let scale = 1.0 + t.max_norm();

    let verdict = if t.is_commuting_normal(tol.abs_tol.max(1e-9)) {
        let jd = joint_diagonalize(t, tol)?;
        let points: Vec<Vec<f64>> = jd.values.iter().map(|p| p.iter().map(|z| z.re).collect()).collect();
        let mut removable = None;
        for (i, p) in points.iter().enumerate() {
            let others: Vec<Vec<f64>> =
                points.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q.clone()).collect();
            let duplicate = others.iter().any(|q| real::dist(p, q) <= tol.eig_tol * scale);
            if duplicate || (!others.is_empty() && hull::in_hull(&others, p, tol.eig_tol * scale)?) {
                removable = Some((p.clone(), duplicate));
                break;
            }
        }
        match removable {
            Some((p, duplicate)) => {
                notes.push(if duplicate {
                    format!("joint eigenvalue {p:?} is repeated; dropping one copy keeps the matrix range")
                } else {
                    format!("joint eigenvalue {p:?} lies in the hull of the others; its eigenspace is removable")
                });
                MinimalityVerdict::NotMinimal
            }
            None if missing.is_empty() && covered == n && normal_summand_dims.iter().all(|&d| d == 1) => {
                MinimalityVerdict::MinimalDiagonal
            }
            None => {
                notes.push("minimal, but its joint spectrum misses some vertices of K".into());
                MinimalityVerdict::Inconclusive
            }
        }
    } else if normal_summand_dims.iter().any(|&d| d >= 2) {
        notes.push("a vertex eigenspace has dimension >= 2; dropping one copy keeps the matrix range".into());
        MinimalityVerdict::NotMinimal
    } else if missing.is_empty() && k.is_simplex() && covered < n {
        notes.push("K is a simplex, so the non-vertex part lies in Wmin(K) and is removable".into());
        MinimalityVerdict::NotMinimal
    } else {
        for v in &missing {
            notes.push(format!("no joint eigenvector at vertex {v:?}"));
        }
        if !missing.is_empty() {
            notes.push("compact tuples may miss extreme points as joint eigenvalues; infinite-dimensional minimality not decidable at truncation".into());
        }
        MinimalityVerdict::Inconclusive
    };
    notes.push("full compression (every compression has a strictly smaller range) is not tested".into());
    Ok(MinimalityReport {
        w1_in_k: true,
        margin: membership.margin,
        vertex_eigenvectors,
        normal_summand_dims,
        verdict,
        notes,
    })
}

/// The diagonal tuple whose `k`-th joint eigenvalue is the `k`-th vertex of `K`.
pub fn minimal_normal_tuple(k: &ConvexBody) -> Result<MatrixTuple> {
    let vertices = k.vertices().ok_or_else(|| Error::Premise("K must be a polytope".into()))?;
    MatrixTuple::diagonal(&vertices)
}

/// `T₁ = 1 ⊕ 0 ⊕ S₁`, `T₂ = 0 ⊕ 1 ⊕ S₂` on `ℂ^{m+2}` with
/// `S₁ = Σ (1/3nᵖ) P_{eₙ}` and `S₂ = Σ (1/3nᵖ) P_{vₙ}`, where `v₁ ∝ (2^{−n/2})ₙ`
/// is completed to an orthonormal basis by Gram-Schmidt.
pub fn simplex_surprise_tuple(p: f64, m: usize) -> Result<MatrixTuple> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::OutOfRange(format!("p = {p} must be at least 1")));
    }
    if m < 2 {
        return Err(Error::OutOfRange(format!("truncation m = {m} must be at least 2")));
    }
    let weights: Vec<f64> = (1..=m).map(|n| 1.0 / (3.0 * num::powf(n as f64, p))).collect();
    let mut seed: Vec<Vec<f64>> = vec![(1..=m).map(|n| num::powf(2.0, -(n as f64) / 2.0)).collect()];
    seed.extend((0..m).map(|i| real::unit(m, i)));
    let v = real::gram_schmidt(&seed, 1e-10);
    let size = m + 2;
    let mut t1 = ComplexMatrix::zeros(size, size);
    let mut t2 = ComplexMatrix::zeros(size, size);
    t1[(0, 0)] = C64::new(1.0, 0.0);
    t2[(1, 1)] = C64::new(1.0, 0.0);
    for (n, w) in weights.iter().enumerate() {
        t1[(n + 2, n + 2)] = C64::new(*w, 0.0);
        for i in 0..m {
            for j in 0..m {
                t2[(i + 2, j + 2)] += C64::new(w * v[n][i] * v[n][j], 0.0);
            }
        }
    }
    MatrixTuple::with_flags(vec![t1, t2.hermitian_part()], vec![true, true], f64::INFINITY)
}

/// The `S`-part `(S₁, S₂)` of [`simplex_surprise_tuple`].
pub fn surprise_s_part(t: &MatrixTuple) -> Result<MatrixTuple> {
    let size = t.dim();
    if size < 3 {
        return Err(Error::Shape("tuple too small".into()));
    }
    t.map(|_, m| m.submatrix(2, 2, size - 2, size - 2))
}

/// `dist(p, W₁(T))` for a Hermitian pair, maximizing `c·p − λ_max(Σ cᵢTᵢ)`
/// over unit `c`: a grid of `samples` angles refined by golden sections.
pub fn distance_to_level1(t: &MatrixTuple, p: &[f64], samples: usize) -> Result<f64> {
    let parts = t.real_parts();
    if parts.len() != 2 || p.len() != 2 {
        return Err(Error::Shape("distance_to_level1 works in the plane".into()));
    }
    let f = |theta: f64| -> Result<f64> {
        let c = [num::cos(theta), num::sin(theta)];
        Ok(real::dot(&c, p) - lambda_max(&combination(&parts, &c))?)
    };
    let samples = samples.max(16);
    let step = core::f64::consts::TAU / samples as f64;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for k in 0..samples {
        let theta = k as f64 * step;
        let v = f(theta)?;
        if v > best.0 {
            best = (v, theta);
        }
    }
    let (mut lo, mut hi) = (best.1 - step, best.1 + step);
    let g = 0.5 * (num::sqrt(5.0) - 1.0);
    for _ in 0..80 {
        let a = hi - g * (hi - lo);
        let b = lo + g * (hi - lo);
        if f(a)? >= f(b)? {
            hi = b;
        } else {
            lo = a;
        }
    }
    Ok(best.0.max(f(0.5 * (lo + hi))?).max(0.0))
}

/// Diagonal tuple with joint eigenvalues `v₁, ..., vₙ, vₙ/2, ..., vₙ/m`, where
/// `vᵢ` are the nonzero vertices of `K` (which must have `0` as a vertex).
pub fn staircase_normal_tuple(k: &ConvexBody, m: usize) -> Result<MatrixTuple> {
    let vertices = k.vertices().ok_or_else(|| Error::Premise("K must be a polytope".into()))?;
    let scale = vertices.iter().map(|v| real::norm(v)).fold(1.0, f64::max);
    let (zero, nonzero): (Vec<Vec<f64>>, Vec<Vec<f64>>) =
        vertices.into_iter().partition(|v| real::norm(v) <= 1e-12 * scale);
    if zero.is_empty() {
        return Err(Error::Premise("0 is not a vertex of K".into()));
    }
    let last = nonzero.last().cloned().ok_or_else(|| Error::Premise("K has no nonzero vertex".into()))?;
    let mut points = nonzero;
    points.extend((2..=m).map(|j| real::scale(&last, 1.0 / j as f64)));
    MatrixTuple::diagonal(&points)
}

/// A direct sum of scaled `F^[2]` copies `xₖ + cₖF^[2]` marching toward the
/// vertices of a polygon.
#[derive(Clone, Debug)]
pub struct BallCovering {
    pub tuple: MatrixTuple,
    /// Disk centers and radii, in summand order.
    pub disks: Vec<(Vec<f64>, f64)>,
    /// Hausdorff distance between `conv ⋃ disks` and `K`.
    pub hausdorff: f64,
}

impl BallCovering {
    /// Whether every summand whose radius is resolvable in double precision
    /// (`cₖ > 1e-6‖xₖ‖`) has a scalar commutant. Returns the number checked.
    pub fn summands_irreducible(&self, tol: &ToleranceConfig) -> Result<(bool, usize)> {
        let mut checked = 0;
        for (i, (x, c)) in self.disks.iter().enumerate() {
            if *c <= 1e-6 * real::norm(x).max(1.0) {
                continue;
            }
            let block = self.tuple.map(|_, m| m.submatrix(2 * i, 2 * i, 2, 2))?;
            checked += 1;
            if commutant_basis(&block, tol)?.len() != 1 {
                return Ok((false, checked));
            }
        }
        Ok((true, checked))
    }
}

/// For each vertex `w` and `k = 1, ..., k_max`: the disk at
/// `xₖ = g + (1 − 2^{−k})(w − g)` (`g` the vertex centroid) with radius
/// `cₖ = ½·2^{−k}·dist(xₖ, ∂K)`, realized as `xₖ + cₖ(F₁^[2], F₂^[2])`.
pub fn ball_covering_tuple(k: &ConvexBody, k_max: usize) -> Result<BallCovering> {
    if k.dim() != 2 || k.affine_dim() != 2 {
        return Err(Error::Premise("K must be a full-dimensional polygon".into()));
    }
    if k_max == 0 {
        return Err(Error::OutOfRange("k_max must be positive".into()));
    }
    let vertices = k.vertices().ok_or_else(|| Error::Premise("K must be a polygon".into()))?;
    let facets = k.facets().ok_or_else(|| Error::Premise("K must be a polygon".into()))?;
    let g = real::scale(&vertices.iter().fold(vec![0.0, 0.0], |acc, v| real::add(&acc, v)), 1.0 / vertices.len() as f64);
    let boundary_distance = |x: &[f64]| {
        facets.iter().map(|f| (f.b - real::dot(&f.a, x)) / real::norm(&f.a)).fold(f64::INFINITY, f64::min)
    };
    let f2 = clifford_generators(2)?.f;
    let mut disks = Vec::new();
    let mut blocks1 = Vec::new();
    let mut blocks2 = Vec::new();
    for w in &vertices {
        for step in 1..=k_max {
            let t = 1.0 - num::powf(2.0, -(step as f64));
            let x = real::axpy(&g, t, &real::sub(w, &g));
            let c = 0.5 * num::powf(2.0, -(step as f64)) * boundary_distance(&x);
            let id = ComplexMatrix::identity(2);
            blocks1.push(&id.scale_real(x[0]) + &f2.get(0).scale_real(c));
            blocks2.push(&id.scale_real(x[1]) + &f2.get(1).scale_real(c));
            disks.push((x, c));
        }
    }
    let r1: Vec<&ComplexMatrix> = blocks1.iter().collect();
    let r2: Vec<&ComplexMatrix> = blocks2.iter().collect();
    let tuple = MatrixTuple::with_flags(
        vec![ComplexMatrix::block_diag(&r1), ComplexMatrix::block_diag(&r2)],
        vec![true, true],
        f64::INFINITY,
    )?;
    // conv ⋃ disks ⊆ K, so the distance is the largest support gap.
    let mut hausdorff = 0.0f64;
    for c in crate::bodies::directions::directions(2, 1440, 0) {
        let inner = disks.iter().map(|(x, r)| real::dot(&c, x) + r).fold(f64::NEG_INFINITY, f64::max);
        hausdorff = hausdorff.max(k.support(&c)? - inner);
    }
    Ok(BallCovering { tuple, disks, hausdorff })
}

/// Dimension of the commutant of `T` (1 means irreducible).
pub fn commutant_dim(t: &MatrixTuple, tol: &ToleranceConfig) -> Result<usize> {
    Ok(commutant_basis(t, tol)?.len())
}

/// Orthonormal basis for the span of the given vectors.
pub fn span_basis(vectors: &[Vec<C64>], n: usize) -> Result<ComplexMatrix> {
    let cols = ComplexMatrix::from_fn(n, vectors.len(), |i, j| vectors[j][i]);
    orthonormal_basis(&cols, 1e-10)
}
