//! Level-one matrix ranges, W^max membership, joint spectra of commuting
//! normal tuples, Naimark dilations and W^min certificates over simplices.

use crate::bodies::{directions::directions, hull, ConvexBody, Facet};
use crate::certificate::{Certificate, Property};
use crate::error::{Error, Result};
use crate::linalg::eigen::{expectation, hermitian_eigen, psd_sqrt};
use crate::linalg::real;
use crate::linalg::{ComplexMatrix, Isometry, MatrixTuple, ToleranceConfig, C64};
use crate::rng::SeededRng;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Member,
    NonMember,
    MemberSampled,
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MembershipVerdict {
    pub verdict: Verdict,
    /// A violating direction `c` for non-members.
    pub witness: Option<Vec<f64>>,
    /// `min (b − λ_max(Σ cⱼXⱼ))` over the checked inequalities; negative
    /// when some inequality fails.
    pub margin: f64,
    pub checked: usize,
}

/// `Σ cⱼ Hⱼ`.
pub fn combination(parts: &[ComplexMatrix], c: &[f64]) -> ComplexMatrix {
    let n = parts[0].rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (m, &cj) in parts.iter().zip(c) {
        if cj != 0.0 {
            out.axpy(C64::new(cj, 0.0), m);
        }
    }
    out
}

fn check_body_dim(t: &MatrixTuple, k: &ConvexBody) -> Result<Vec<ComplexMatrix>> {
    let parts = t.real_parts();
    if parts.len() != k.dim() {
        return Err(Error::Shape(format!(
            "a tuple with {} real coordinates against a body in R^{}",
            parts.len(),
            k.dim()
        )));
    }
    Ok(parts)
}

/// Decides `X ∈ W^max(K)`: exactly from the facets of `K` when they are
/// known, otherwise by sampling `directions` support inequalities.
pub fn wmax_membership(
    x: &MatrixTuple,
    k: &ConvexBody,
    directions_count: usize,
    tol: &ToleranceConfig,
) -> Result<MembershipVerdict> {
    let parts = check_body_dim(x, k)?;
    let scale = 1.0 + x.max_norm() + k.radius_bound()?;
    let slack = tol.scaled(scale);
    let (checks, exact): (Vec<(Vec<f64>, f64)>, bool) = match k.facets() {
        Some(facets) => (facets.into_iter().map(|Facet { a, b }| (a, b)).collect(), true),
        None => {
            let dirs = directions(k.dim(), directions_count, tol.seed);
            let mut out = Vec::with_capacity(dirs.len());
            for c in dirs {
                let h = k.support(&c)?;
                out.push((c, h));
            }
            (out, false)
        }
    };
    let mut margin = f64::INFINITY;
    let mut witness = None;
    for (c, b) in &checks {
        let lam = hermitian_eigen(&combination(&parts, c))?.max();
        let cn = real::norm(c).max(1e-300);
        let m = (b - lam) / cn;
        if m < margin {
            margin = m;
            if m < -slack {
                witness = Some(c.clone());
            }
        }
    }
    // Keep the first direction attaining the worst violation.
    if margin < -slack {
        let worst = checks
            .iter()
            .find(|(c, b)| {
                let lam = hermitian_eigen(&combination(&parts, c)).map(|e| e.max()).unwrap_or(f64::NAN);
                ((b - lam) / real::norm(c).max(1e-300) - margin).abs() <= 1e-12 * scale
            })
            .map(|(c, _)| c.clone());
        witness = worst.or(witness);
    }
    let verdict = if margin < -slack {
        Verdict::NonMember
    } else if exact {
        Verdict::Member
    } else {
        Verdict::MemberSampled
    };
    Ok(MembershipVerdict {
        verdict,
        witness: if verdict == Verdict::NonMember { witness } else { None },
        margin,
        checked: checks.len(),
    })
}

/// Inner and outer polytopes sandwiching the joint numerical range `W₁(T)`.
#[derive(Clone, Debug)]
pub struct Level1Range {
    /// Supporting half-spaces `c·x ≤ λ_max(Σ cⱼHⱼ)`.
    pub outer_facets: Vec<Facet>,
    /// The intersection of those half-spaces, built when the range lives in
    /// the line or the plane.
    pub outer: Option<ConvexBody>,
    /// Hull of the maximizing eigenvector expectations.
    pub inner: ConvexBody,
}

impl Level1Range {
    /// `max_k (c·p_k)` over the outer half-spaces' own directions, i.e. the
    /// outer support in a sampled direction.
    pub fn outer_support(&self, c: &[f64]) -> Option<f64> {
        self.outer_facets.iter().find(|f| real::dist(&f.a, c) < 1e-14).map(|f| f.b)
    }

    /// Largest violation of the outer half-spaces at `x`.
    pub fn outer_violation(&self, x: &[f64]) -> f64 {
        self.outer_facets.iter().map(|f| real::dot(&f.a, x) - f.b).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Level-one range of `T` from `directions_count` sampled directions (plus
/// `±eᵢ`). Non-Hermitian members contribute their real and imaginary parts.
pub fn level1_range(t: &MatrixTuple, directions_count: usize, seed: u64) -> Result<Level1Range> {
    let parts = t.real_parts();
    let dim = parts.len();
    let dirs = directions(dim, directions_count, seed);
    let mut facets = Vec::with_capacity(dirs.len());
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(dirs.len());
    for c in &dirs {
        let eig = hermitian_eigen(&combination(&parts, c))?;
        let top = eig.values.len() - 1;
        let v = eig.vector(top);
        points.push(parts.iter().map(|h| expectation(h, &v)).collect());
        facets.push(Facet { a: c.clone(), b: eig.values[top] });
    }
    let inner = match dim {
        2 => ConvexBody::v_polytope_trusted(hull::convex_hull_2d(&points))?,
        _ => ConvexBody::v_polytope(points)?,
    };
    let outer = match dim {
        1 => {
            let hi = facets.iter().filter(|f| f.a[0] > 0.0).map(|f| f.b).fold(f64::INFINITY, f64::min);
            let lo = facets.iter().filter(|f| f.a[0] < 0.0).map(|f| -f.b).fold(f64::NEG_INFINITY, f64::max);
            Some(ConvexBody::v_polytope_trusted(vec![vec![lo], vec![hi]])?)
        }
        2 => Some(outer_polygon(&facets)?),
        _ => None,
    };
    let inner = inner.set_complex(!t.is_hermitian());
    Ok(Level1Range { outer_facets: facets, outer, inner })
}

/// Intersection of supporting half-planes, from consecutive line crossings.
fn outer_polygon(facets: &[Facet]) -> Result<ConvexBody> {
    let mut sorted: Vec<&Facet> = facets.iter().collect();
    sorted.sort_by(|a, b| libm::atan2(a.a[1], a.a[0]).total_cmp(&libm::atan2(b.a[1], b.a[0])));
    sorted.dedup_by(|a, b| real::dist(&a.a, &b.a) < 1e-14);
    let m = sorted.len();
    let mut vertices = Vec::with_capacity(m);
    for i in 0..m {
        let (f, g) = (sorted[i], sorted[(i + 1) % m]);
        let a = vec![f.a.clone(), g.a.clone()];
        if let Some(x) = real::solve(&a, &[f.b, g.b], 1e-14) {
            vertices.push(x);
        }
    }
    let vertices = hull::convex_hull_2d(&vertices);
    ConvexBody::v_polytope_trusted(vertices)
}

/// Simultaneous diagonalization of a commuting normal tuple.
#[derive(Clone, Debug)]
pub struct JointDiagonalization {
    /// Orthonormal joint eigenvectors as columns.
    pub vectors: ComplexMatrix,
    /// `values[k][j] = ⟨Nⱼ v_k, v_k⟩`.
    pub values: Vec<Vec<C64>>,
}

/// Checks the commuting normal premise against `tol` relative to the scale.
pub fn check_commuting_normal(n: &MatrixTuple, tol: &ToleranceConfig) -> Result<()> {
    let s = n.scale_frobenius();
    let bound = tol.scaled(s * s);
    let commutator = n.commutator_residual();
    let normality = n.normality_residual();
    if commutator > bound || normality > bound {
        return Err(Error::NotCommutingNormal { commutator, normality });
    }
    Ok(())
}

/// Joint eigenvectors and eigenvalues: diagonalize a random real combination
/// of the Hermitian coordinates, then split eigenvalue clusters (within
/// `eig_tol`) with fresh combinations until each cluster is scalar.
pub fn joint_diagonalize(n: &MatrixTuple, tol: &ToleranceConfig) -> Result<JointDiagonalization> {
    check_commuting_normal(n, tol)?;
    let parts = n.real_parts();
    let dim = n.dim();
    let scale = parts.iter().map(|p| p.frobenius()).fold(1.0, f64::max);
    let mut rng = SeededRng::new(tol.seed);
    let mut done: Vec<Vec<C64>> = Vec::with_capacity(dim);
    // Work list of orthonormal bases (columns) still to be split.
    let mut work = vec![(ComplexMatrix::identity(dim), 0usize)];
    while let Some((basis, depth)) = work.pop() {
        let restricted: Vec<ComplexMatrix> = parts.iter().map(|p| basis.adjoint().matmul(&p.matmul(&basis))).collect();
        let k = basis.cols();
        let scalar = restricted.iter().all(|r| {
            let mean = r.trace().re / k as f64;
            (r - &ComplexMatrix::identity(k).scale_real(mean)).frobenius() <= tol.eig_tol * scale
        });
        if scalar || depth > 8 {
            for c in 0..k {
                done.push(basis.column_vec(c));
            }
            continue;
        }
        let coeffs: Vec<f64> = (0..parts.len()).map(|_| rng.normal()).collect();
        let eig = hermitian_eigen(&combination(&restricted, &coeffs))?;
        let mut start = 0;
        for end in 1..=k {
            if end == k || eig.values[end] - eig.values[end - 1] > tol.eig_tol * scale {
                let cluster = ComplexMatrix::from_fn(k, end - start, |i, j| eig.vectors[(i, start + j)]);
                let lifted = basis.matmul(&cluster);
                if end - start == 1 {
                    done.push(lifted.column_vec(0));
                } else {
                    work.push((lifted, depth + 1));
                }
                start = end;
            }
        }
    }
    let vectors = ComplexMatrix::from_fn(dim, dim, |i, j| done[j][i]);
    let values = done
        .iter()
        .map(|v| {
            n.iter()
                .map(|m| {
                    let mv = m.mat_vec(v);
                    crate::linalg::eigen::inner(v, &mv)
                })
                .collect()
        })
        .collect();
    Ok(JointDiagonalization { vectors, values })
}

/// The `n` joint eigenvalues of a commuting normal tuple.
pub fn joint_spectrum(n: &MatrixTuple, tol: &ToleranceConfig) -> Result<Vec<Vec<C64>>> {
    Ok(joint_diagonalize(n, tol)?.values)
}

/// Joint eigenvalues in real coordinates: Hermitian members give one
/// coordinate, others give `(Re, Im)`.
pub fn real_joint_spectrum(n: &MatrixTuple, tol: &ToleranceConfig) -> Result<Vec<Vec<f64>>> {
    let flags = n.hermitian_flags().to_vec();
    Ok(joint_spectrum(n, tol)?
        .into_iter()
        .map(|p| {
            let mut out = Vec::new();
            for (z, h) in p.iter().zip(&flags) {
                out.push(z.re);
                if !h {
                    out.push(z.im);
                }
            }
            out
        })
        .collect())
}

/// `𝒲₁(N) = conv σ(N)` for commuting normal `N`.
pub fn matrix_range_of_normal(n: &MatrixTuple, tol: &ToleranceConfig) -> Result<ConvexBody> {
    let body = ConvexBody::v_polytope(real_joint_spectrum(n, tol)?)?;
    Ok(body.set_complex(!n.is_hermitian()))
}

/// Projection-valued dilation of a sub-POVM.
#[derive(Clone, Debug)]
pub struct Naimark {
    pub isometry: Isometry,
    /// `Π₁, ..., Π_k, Π_{k+1}`; the last one dilates `I − ΣPᵢ`.
    pub projections: Vec<ComplexMatrix>,
    /// Rank of `I − ΣPᵢ`.
    pub complement_rank: usize,
}

/// Naimark dilation: `V = [√P₁; ...; √P_{k+1}]` with
/// `P_{k+1} = I − ΣPᵢ`, and `Πᵢ` the `i`-th block identity.
pub fn naimark(p: &[ComplexMatrix], tol: &ToleranceConfig) -> Result<Naimark> {
    let blocks = povm_blocks(p, tol)?;
    let complement_rank = {
        let eig = hermitian_eigen(blocks.last().unwrap())?;
        eig.values.iter().filter(|&&v| v > tol.eig_tol).count()
    };
    let (isometry, projections) = stack_blocks(&blocks, tol)?;
    Ok(Naimark { isometry, projections, complement_rank })
}

/// `(P₁, ..., P_k, I − ΣPᵢ)` after checking positivity and `ΣPᵢ ≤ I`.
pub(crate) fn povm_blocks(p: &[ComplexMatrix], tol: &ToleranceConfig) -> Result<Vec<ComplexMatrix>> {
    let n = p.first().ok_or_else(|| Error::Shape("empty POVM".into()))?.rows();
    let mut total = ComplexMatrix::zeros(n, n);
    for m in p {
        if !m.is_square() || m.rows() != n {
            return Err(Error::Shape("POVM elements of different sizes".into()));
        }
        crate::linalg::eigen::check_hermitian(m, tol)?;
        let low = hermitian_eigen(m)?.min();
        if low < -tol.eig_tol {
            return Err(Error::NegativeEigenvalue { value: low });
        }
        total += m;
    }
    let top = hermitian_eigen(&total)?.max();
    if top > 1.0 + tol.eig_tol {
        return Err(Error::Premise(format!("sum of POVM elements has norm {top} > 1")));
    }
    let mut blocks: Vec<ComplexMatrix> = p.iter().map(|m| m.hermitian_part()).collect();
    blocks.push(&ComplexMatrix::identity(n) - &total.hermitian_part());
    Ok(blocks)
}

/// Stacks `√Pᵢ` into an isometry and returns the matching block projections.
pub(crate) fn stack_blocks(blocks: &[ComplexMatrix], tol: &ToleranceConfig) -> Result<(Isometry, Vec<ComplexMatrix>)> {
    let n = blocks[0].rows();
    let roots: Vec<ComplexMatrix> = blocks.iter().map(|b| psd_sqrt(b, tol)).collect::<Result<_>>()?;
    let refs: Vec<&ComplexMatrix> = roots.iter().collect();
    let v = ComplexMatrix::vstack(&refs);
    let big = n * blocks.len();
    let projections = (0..blocks.len())
        .map(|i| {
            let mut pi = ComplexMatrix::zeros(big, big);
            for r in 0..n {
                pi[(i * n + r, i * n + r)] = C64::new(1.0, 0.0);
            }
            pi
        })
        .collect();
    Ok((Isometry::new(v, 1e-8 * (1.0 + n as f64))?, projections))
}

/// Normal dilation of `X ∈ W^max(K)` for a simplex `K`, with joint spectrum
/// in the vertex set. `K`'s barycentric coordinates applied to `X` form a
/// sub-POVM (this is exactly the facet check); its Naimark dilation gives
/// `Nⱼ = Σᵢ wᵢ[j] Πᵢ`. The first listed vertex takes the complement block.
pub fn wmin_certificate_simplex(x: &MatrixTuple, k: &ConvexBody, tol: &ToleranceConfig) -> Result<Certificate> {
    if !x.is_hermitian() {
        return Err(Error::Premise("W^min certificates over real simplices need a Hermitian tuple".into()));
    }
    if !k.is_simplex() {
        return Err(Error::Premise("K is not a nondegenerate simplex".into()));
    }
    let d = k.dim();
    if x.d() != d {
        return Err(Error::Shape(format!("a {}-tuple against a simplex in R^{d}", x.d())));
    }
    let verts = k.vertices().unwrap();
    let w0 = &verts[0];
    // Columns wᵢ − w₀; barycentric coordinates solve B β = x − w₀.
    let b: Vec<Vec<f64>> = (0..d).map(|r| (1..=d).map(|i| verts[i][r] - w0[r]).collect()).collect();
    let mut binv = vec![vec![0.0; d]; d];
    for c in 0..d {
        let col = real::solve(&b, &real::unit(d, c), 1e-12).ok_or_else(|| Error::Premise("degenerate simplex".into()))?;
        for r in 0..d {
            binv[r][c] = col[r];
        }
    }
    let n = x.dim();
    let shifted: Vec<ComplexMatrix> = x
        .iter()
        .zip(w0)
        .map(|(m, &w)| m - &ComplexMatrix::identity(n).scale_real(w))
        .collect();
    let p: Vec<ComplexMatrix> = binv.iter().map(|row| combination(&shifted, row)).collect();
    let membership = wmax_membership(x, k, 0, tol)?;
    if membership.verdict == Verdict::NonMember {
        return Err(Error::Premise(format!(
            "X is not in W^max(K): facet {:?} violated by {:.3e}",
            membership.witness.unwrap_or_default(),
            -membership.margin
        )));
    }
    let mut blocks = povm_blocks(&p, &tol.with_tol(tol.abs_tol.max(1e-9)))
        .map_err(|e| Error::Premise(format!("barycentric sub-POVM check failed: {e}")))?;
    // Vertex order matching the blocks: w₁, ..., w_d, then w₀.
    let mut vertex_of_block: Vec<Vec<f64>> = verts[1..].to_vec();
    vertex_of_block.push(w0.clone());
    let keep: Vec<usize> = (0..blocks.len()).filter(|&i| blocks[i].max_abs() > tol.eig_tol).collect();
    blocks = keep.iter().map(|&i| blocks[i].clone()).collect();
    let vertex_of_block: Vec<Vec<f64>> = keep.iter().map(|&i| vertex_of_block[i].clone()).collect();
    let (isometry, projections) = stack_blocks(&blocks, tol)?;
    let big = isometry.big_dim();
    let dilation: Vec<ComplexMatrix> = (0..d)
        .map(|j| {
            let mut m = ComplexMatrix::zeros(big, big);
            for (pi, w) in projections.iter().zip(&vertex_of_block) {
                m.axpy(C64::new(w[j], 0.0), pi);
            }
            m
        })
        .collect();
    let dilation = MatrixTuple::with_flags(dilation, vec![true; d], 1e-12)?;
    let bound = 1e-8;
    let mut cert = Certificate::new(x.clone(), dilation, isometry, bound)?;
    cert.claim(Property::Hermitian, bound)?;
    cert.claim(Property::Commuting, bound)?;
    cert.claim(Property::JointSpectrumAt { points: verts.clone() }, bound)?;
    cert.conclusion = Some("X in W^min(K) certified".into());
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;
    use proptest::prelude::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn random_hermitian(n: usize, rng: &mut SeededRng) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |_, _| C64::new(rng.normal(), rng.normal())).hermitian_part()
    }

    fn clifford2() -> MatrixTuple {
        MatrixTuple::new(vec![pauli::z(), pauli::x()]).unwrap()
    }

    #[test]
    fn wmax_examples() {
        let scalar = MatrixTuple::scalars(&[0.3, 0.4]).unwrap();
        let sq = ConvexBody::unit_box(2).unwrap();
        assert_eq!(wmax_membership(&scalar, &sq, 0, &tol()).unwrap().verdict, Verdict::Member);
        let ball = ConvexBody::ball(2, 1.0).unwrap();
        let v = wmax_membership(&clifford2(), &ball, 360, &tol()).unwrap();
        assert_eq!(v.verdict, Verdict::MemberSampled);
        let big = clifford2().map(|_, m| m.scale_real(1.1)).unwrap();
        let v = wmax_membership(&big, &ball, 360, &tol()).unwrap();
        assert_eq!(v.verdict, Verdict::NonMember);
        assert_eq!(v.witness.unwrap(), vec![1.0, 0.0]);
        assert!((v.margin + 0.1).abs() < 1e-12);
        assert!(wmax_membership(&scalar, &ConvexBody::ball(3, 1.0).unwrap(), 10, &tol()).is_err());
    }

    #[test]
    fn level1_examples() {
        let diag = MatrixTuple::diagonal(&[vec![1.0, 3.0], vec![2.0, 4.0]]).unwrap();
        let r = level1_range(&diag, 64, 0).unwrap();
        let seg = ConvexBody::v_polytope(vec![vec![1.0, 3.0], vec![2.0, 4.0]]).unwrap();
        assert!(r.inner.hausdorff(&seg, 0, 0).unwrap() < 1e-9);
        // The outer polygon is a thin sliver around the segment.
        let outer = r.outer.unwrap();
        assert!(outer.hausdorff(&seg, 0, 0).unwrap() < 0.1);
        assert!(seg.vertices().unwrap().iter().all(|v| outer.member(v, 1e-9).unwrap()));

        let r = level1_range(&clifford2(), 720, 0).unwrap();
        let ball = ConvexBody::ball(2, 1.0).unwrap();
        assert!(r.inner.hausdorff(&ball, 720, 1).unwrap() < 1e-2);
        assert!(r.outer.unwrap().hausdorff(&ball, 720, 1).unwrap() < 1e-2);
    }

    #[test]
    fn jordan_block_range_is_half_disk() {
        let t = MatrixTuple::new(vec![pauli::elementary(2, 0, 1)]).unwrap();
        let r = level1_range(&t, 360, 0).unwrap();
        let disk = ConvexBody::ball(2, 0.5).unwrap();
        assert!(r.outer.as_ref().unwrap().hausdorff(&disk, 360, 2).unwrap() < 1e-3);
        // Independent check: expectations of random unit vectors stay in the disk
        // and come close to its boundary.
        let mut rng = SeededRng::new(9);
        let mut far = 0.0f64;
        for _ in 0..4000 {
            let v = rng.unit_complex(2);
            let z = crate::linalg::eigen::inner(&v, &t.get(0).mat_vec(&v));
            assert!(z.norm() <= 0.5 + 1e-12);
            far = far.max(z.norm());
        }
        assert!(far > 0.49);
    }

    #[test]
    fn joint_spectrum_examples() {
        let diag = MatrixTuple::diagonal(&[vec![1.0, 3.0], vec![2.0, 4.0]]).unwrap();
        let mut s = real_joint_spectrum(&diag, &tol()).unwrap();
        s.sort_by(|a, b| a[0].total_cmp(&b[0]));
        assert!(real::dist(&s[0], &[1.0, 3.0]) < 1e-12 && real::dist(&s[1], &[2.0, 4.0]) < 1e-12);
        assert!(matches!(joint_spectrum(&clifford2(), &tol()), Err(Error::NotCommutingNormal { .. })));
        let scalar = MatrixTuple::scalars(&[2.5]).unwrap();
        let body = matrix_range_of_normal(&scalar, &tol()).unwrap();
        assert_eq!(body.vertices().unwrap(), vec![vec![2.5]]);
    }

    #[test]
    fn joint_spectrum_with_degenerate_combination() {
        // diag(1,1,2) and diag(0,1,0): the first member alone cannot separate.
        let n = MatrixTuple::diagonal(&[vec![1.0, 0.0], vec![1.0, 1.0], vec![2.0, 0.0]]).unwrap();
        let u = {
            let mut rng = SeededRng::new(4);
            
            crate::linalg::eigen::orthonormal_basis(
                &ComplexMatrix::from_fn(3, 3, |_, _| C64::new(rng.normal(), rng.normal())),
                1e-12,
            )
            .unwrap()
        };
        let rotated = n.map(|_, m| u.matmul(&m.matmul(&u.adjoint()))).unwrap();
        let mut s = real_joint_spectrum(&rotated, &tol()).unwrap();
        s.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        let want = [[1.0, 0.0], [1.0, 1.0], [2.0, 0.0]];
        for (p, w) in s.iter().zip(want) {
            assert!(real::dist(p, &w) < 1e-9, "{s:?}");
        }
    }

    #[test]
    fn naimark_examples() {
        let half = ComplexMatrix::from_real_rows(&[&[0.5]]);
        let nm = naimark(std::slice::from_ref(&half), &tol()).unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!((nm.isometry.matrix()[(0, 0)].re - h).abs() < 1e-12);
        assert!((nm.isometry.matrix()[(1, 0)].re - h).abs() < 1e-12);
        assert_eq!(nm.projections[0], ComplexMatrix::from_real_diag(&[1.0, 0.0]));
        assert!((nm.isometry.compress_matrix(&nm.projections[0]).unwrap()[(0, 0)].re - 0.5).abs() < 1e-12);

        let full = naimark(&[ComplexMatrix::identity(2)], &tol()).unwrap();
        assert_eq!(full.complement_rank, 0);
        assert!(naimark(&[ComplexMatrix::identity(2).scale_real(1.1)], &tol()).is_err());
        assert!(naimark(&[pauli::z()], &tol()).is_err());
    }

    #[test]
    fn wmin_simplex_examples() {
        let x = MatrixTuple::scalars(&[0.5]).unwrap();
        let k = ConvexBody::unit_box(1).unwrap();
        let cert = wmin_certificate_simplex(&x, &k, &tol()).unwrap();
        assert_eq!(cert.dilation.get(0), &ComplexMatrix::from_real_diag(&[1.0, 0.0]));
        assert!(cert.verify(None).ok());

        let vertex = MatrixTuple::scalars(&[1.0, 0.0]).unwrap();
        let tri = ConvexBody::simplex_standard(2).unwrap();
        let cert = wmin_certificate_simplex(&vertex, &tri, &tol()).unwrap();
        assert_eq!(cert.dilation.dim(), 1);
        assert!((cert.dilation.get(0)[(0, 0)].re - 1.0).abs() < 1e-12);

        let outside = MatrixTuple::scalars(&[0.7, 0.7]).unwrap();
        assert!(wmin_certificate_simplex(&outside, &tri, &tol()).is_err());
        assert!(wmin_certificate_simplex(&vertex, &ConvexBody::unit_box(2).unwrap(), &tol()).is_err());
    }

    #[test]
    fn wmin_simplex_positive_pair() {
        let p1 = ComplexMatrix::from_real_rows(&[&[0.4, 0.1], &[0.1, 0.2]]);
        let p2 = ComplexMatrix::from_real_rows(&[&[0.3, -0.1], &[-0.1, 0.5]]);
        let x = MatrixTuple::new(vec![p1, p2]).unwrap();
        let cert = wmin_certificate_simplex(&x, &ConvexBody::simplex_standard(2).unwrap(), &tol()).unwrap();
        assert_eq!(cert.dilation.dim(), 6);
        let report = cert.verify(Some(1e-10));
        assert!(report.ok(), "{report:?}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn affine_equivariance_of_outer_supports(seed in any::<u64>(), n in 1usize..4) {
            let mut rng = SeededRng::new(seed);
            let t = MatrixTuple::new(vec![random_hermitian(n, &mut rng), random_hermitian(n, &mut rng)]).unwrap();
            let a = [[rng.normal(), rng.normal()], [rng.normal(), rng.normal()]];
            prop_assume!((a[0][0] * a[1][1] - a[0][1] * a[1][0]).abs() > 0.1);
            let b = [rng.normal(), rng.normal()];
            let image = MatrixTuple::new((0..2).map(|i| {
                let mut m = combination(t.matrices(), &a[i]);
                m.axpy(C64::new(b[i], 0.0), &ComplexMatrix::identity(n));
                m
            }).collect()).unwrap();
            let r = level1_range(&image, 40, 3).unwrap();
            let parts = t.real_parts();
            for f in &r.outer_facets {
                // h_{A(T)}(c) = h_T(Aᵀc) + c·b.
                let at_c = [a[0][0] * f.a[0] + a[1][0] * f.a[1], a[0][1] * f.a[0] + a[1][1] * f.a[1]];
                let h = hermitian_eigen(&combination(&parts, &at_c)).unwrap().max() + real::dot(&f.a, &b);
                prop_assert!((h - f.b).abs() <= 1e-8 * (1.0 + h.abs()));
            }
        }

        #[test]
        fn normal_tuple_range_matches_spectrum_hull(seed in any::<u64>(), n in 1usize..6) {
            let mut rng = SeededRng::new(seed);
            let pts: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.normal(), rng.normal()]).collect();
            let q = crate::linalg::eigen::orthonormal_basis(
                &ComplexMatrix::from_fn(n, n, |_, _| C64::new(rng.normal(), rng.normal())), 1e-12).unwrap();
            let t = MatrixTuple::diagonal(&pts).unwrap().map(|_, m| q.matmul(&m.matmul(&q.adjoint()))).unwrap();
            let hull_body = matrix_range_of_normal(&t, &tol()).unwrap();
            let r = level1_range(&t, 90, 0).unwrap();
            for f in &r.outer_facets {
                prop_assert!((hull_body.support(&f.a).unwrap() - f.b).abs() <= 1e-8);
            }
            for v in r.inner.vertices().unwrap() {
                prop_assert!(hull_body.distance(&v).unwrap() <= 1e-8);
            }
        }

        #[test]
        fn naimark_reconstructs(seed in any::<u64>(), n in 1usize..7, k in 1usize..5) {
            let mut rng = SeededRng::new(seed);
            let raw: Vec<ComplexMatrix> = (0..k).map(|_| {
                let g = ComplexMatrix::from_fn(n, n, |_, _| C64::new(rng.normal(), rng.normal()));
                g.matmul(&g.adjoint())
            }).collect();
            let mut total = ComplexMatrix::zeros(n, n);
            for m in &raw { total += m; }
            let s = 1.0 / (hermitian_eigen(&total).unwrap().max() * (1.0 + rng.uniform()));
            let p: Vec<ComplexMatrix> = raw.iter().map(|m| m.scale_real(s)).collect();
            let nm = naimark(&p, &tol()).unwrap();
            for (pi, proj) in p.iter().zip(&nm.projections) {
                let back = nm.isometry.compress_matrix(proj).unwrap();
                prop_assert!((&back - pi).frobenius() <= 1e-10);
            }
            for i in 0..nm.projections.len() {
                for j in 0..nm.projections.len() {
                    if i != j {
                        prop_assert!(nm.projections[i].matmul(&nm.projections[j]).frobenius() <= 1e-12);
                    }
                }
            }
        }
    }
}
