//! Anticommuting self-adjoint unitaries `F^[d]`, anticommuting dilations of
//! Hermitian contractions, their normalization to symmetries, and the
//! resulting cube-in-ball certificates.
//!
//! Tensor products put the new factor outside (`Z ⊗ W`), so every output
//! compresses to its input on the leading coordinates.

use crate::bodies::scale::ScaleVector;
use crate::certificate::{Certificate, Property};
use crate::dilation::{claim_bound, halmos_matrix};
use crate::error::{Error, Result};
use crate::linalg::eigen::{hermitian_eigen, op_norm};
use crate::linalg::matrix::pauli;
use crate::linalg::{ComplexMatrix, Isometry, MatrixTuple, ToleranceConfig};
use crate::num;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// Largest `d` accepted by [`clifford_generators`] (dimension `2^13`).
pub const MAX_CLIFFORD_D: usize = 14;

/// Largest dilation dimension the anticommuting pipeline will build.
pub const GUARDRAIL_DIM: usize = 1 << 20;

/// `d` pairwise anticommuting Hermitian unitaries of size `2^{d−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordTuple {
    pub d: usize,
    pub f: MatrixTuple,
}

impl CliffordTuple {
    /// Residuals of `Fᵢ = Fᵢ*`, `Fᵢ² = I` and `FᵢFⱼ = −FⱼFᵢ`.
    pub fn residuals(&self) -> (f64, f64, f64) {
        let hermitian = self.f.hermitian_residual();
        let n = self.f.dim();
        let square = self
            .f
            .iter()
            .map(|m| (&m.matmul(m) - &ComplexMatrix::identity(n)).frobenius())
            .fold(0.0, f64::max);
        (hermitian, square, self.f.anticommutator_residual())
    }
}

/// `F^[1] = (1)`, `F^[d]ⱼ = F^[d−1]ⱼ ⊗ Z` for `j < d` and
/// `F^[d]_d = I_{2^{d−2}} ⊗ X`.
pub fn clifford_generators(d: usize) -> Result<CliffordTuple> {
    if d == 0 || d > MAX_CLIFFORD_D {
        return Err(Error::OutOfRange(format!("d = {d} outside 1..={MAX_CLIFFORD_D}")));
    }
    let mut f = vec![ComplexMatrix::identity(1)];
    for k in 2..=d {
        let mut next: Vec<ComplexMatrix> = f.iter().map(|m| m.kron(&pauli::z())).collect();
        next.push(ComplexMatrix::identity(1 << (k - 2)).kron(&pauli::x()));
        f = next;
    }
    Ok(CliffordTuple { d, f: MatrixTuple::with_flags(f, vec![true; d], f64::INFINITY)? })
}

/// `Z^{⊗k}`.
fn z_power(k: usize) -> ComplexMatrix {
    pauli::z_power(k)
}

fn guardrail(n: usize, d: usize) -> Result<()> {
    let dim = (n as u128) << (3 * d as u32 - 2).min(120);
    if dim > GUARDRAIL_DIM as u128 {
        return Err(Error::Unsupported(format!(
            "n = {n}, d = {d} needs dimension n·4^(d−1)·2^d = {dim} > {GUARDRAIL_DIM}"
        )));
    }
    Ok(())
}

fn check_hermitian_contractions(x: &MatrixTuple, c: &[f64], tol: &ToleranceConfig) -> Result<()> {
    if !x.is_hermitian() {
        return Err(Error::Premise("the tuple is not Hermitian".into()));
    }
    for (index, (m, &bound)) in x.iter().zip(c).enumerate() {
        let norm = op_norm(m);
        if norm > bound + tol.scaled(bound) {
            return Err(Error::NormExceeded { index, norm, bound });
        }
    }
    Ok(())
}

fn check_witnesses(x: &MatrixTuple, witnesses: &[ComplexMatrix], tol: &ToleranceConfig) -> Result<()> {
    let n = x.dim();
    for w in witnesses {
        if !w.is_square() || w.rows() != n {
            return Err(Error::Shape(format!("witness of size {}x{} for dimension {n}", w.rows(), w.cols())));
        }
        for m in x.iter() {
            let residual = m.anticommutator(w).frobenius();
            if residual > tol.scaled(m.frobenius() * w.frobenius()) {
                return Err(Error::NotAnticommuting { residual });
            }
        }
    }
    Ok(())
}

/// One level of the recursion. `x` are Hermitian contractions with
/// `Σ aⱼ⁻² ≤ 1`; the result has `‖Aⱼ‖ ≤ aⱼ` on `ℂ^{n·4^{d−1}}`.
fn anticommuting_rec(x: &[ComplexMatrix], a: &[f64], tol: &ToleranceConfig) -> Result<Vec<ComplexMatrix>> {
    let d = x.len();
    if d == 1 {
        return Ok(vec![x[0].clone()]);
    }
    let n = x[0].rows();
    let y: Vec<ComplexMatrix> = x.iter().map(|m| halmos_matrix(m, 1.0, tol).map(|u| u.hermitian_part())).collect::<Result<_>>()?;
    let ad = a[d - 1];
    let r = num::sqrt(ad * ad - 1.0);
    if !(r > 0.0) {
        return Err(Error::InfeasibleScales(format!("a_d = {ad} must exceed 1 when d ≥ 2")));
    }
    let yd = &y[d - 1];
    let id = ComplexMatrix::identity(2 * n);
    let shrink = 1.0 / num::sqrt(1.0 + 1.0 / (r * r));
    let mut g = Vec::with_capacity(d - 1);
    for yj in &y[..d - 1] {
        let c = yj.anticommutator(yd).scale_real(0.5 / r);
        let block = ComplexMatrix::block2x2(yj, &c, &c, &(-yj));
        g.push(block.scale_real(shrink).hermitian_part());
    }
    let e = ComplexMatrix::block2x2(yd, &id.scale_real(-r), &id.scale_real(-r), &(-yd));
    let b: Vec<f64> = a[..d - 1].iter().map(|aj| aj * shrink).collect();
    let sub = anticommuting_rec(&g, &b, tol)?;
    let mut out: Vec<ComplexMatrix> = sub.into_iter().map(|m| m.scale_real(1.0 / shrink)).collect();
    out.push(z_power(2 * (d - 2)).kron(&e));
    Ok(out)
}

/// Anticommuting Hermitian dilation `A` of Hermitian contractions `X` with
/// `‖Aⱼ‖ ≤ aⱼ`, for `Σ aⱼ⁻² ≤ 1`. Each witness `W` anticommuting with all
/// `Xⱼ` propagates to `Z^{⊗2(d−1)} ⊗ W`, anticommuting with all `Aⱼ`.
pub fn anticommuting_dilation(
    x: &MatrixTuple,
    a: &ScaleVector,
    witnesses: &[ComplexMatrix],
    tol: &ToleranceConfig,
) -> Result<Certificate> {
    let d = x.d();
    let n = x.dim();
    if a.d() != d {
        return Err(Error::Shape(format!("{d} operators but {} scales", a.d())));
    }
    if !a.is_square_feasible() {
        return Err(Error::InfeasibleScales(format!("sum of inverse squares {:.6} > 1", a.square_sum())));
    }
    guardrail(n, d)?;
    check_hermitian_contractions(x, &vec![1.0; d], tol)?;
    check_witnesses(x, witnesses, tol)?;
    let members = anticommuting_rec(x.matrices(), a.values(), tol)?;
    let big = members[0].rows();
    let dilation = MatrixTuple::with_flags(members, vec![true; d], f64::INFINITY)?;
    let amax = a.values().iter().fold(1.0f64, |p, q| p.max(*q));
    let bound = claim_bound(big) * amax;
    let mut cert = Certificate::new(x.clone(), dilation, Isometry::leading(big, n), bound)?;
    cert.claim(Property::Hermitian, bound)?;
    cert.claim(Property::Anticommuting, bound * amax)?;
    for (index, &s) in a.values().iter().enumerate() {
        cert.claim(Property::NormBound { index, bound: s }, bound)?;
    }
    let lift = z_power(2 * (d - 1));
    for w in witnesses {
        let witness = lift.kron(w);
        let scale = 1.0 + w.frobenius();
        cert.claim(Property::AnticommutesWith { witness }, bound * amax * scale)?;
    }
    cert.scale = a.values().to_vec();
    Ok(cert)
}

/// Symmetries `Mⱼ` with `Mⱼ² = aⱼ²I` dilating anticommuting Hermitian `Aⱼ`.
fn symmetry_rec(a_tuple: &[ComplexMatrix], a: &[f64], tol: &ToleranceConfig) -> Result<Vec<ComplexMatrix>> {
    let d = a_tuple.len();
    let last = &a_tuple[d - 1];
    let ad = a[d - 1];
    let m = last.rows();
    // `√(a²I − A²)` through the spectrum of `A` itself. Upstream `A²` is
    // often exactly `a²I`, so the argument is pure rounding noise of order
    // `ε·a²·√m`; values that small are zero, the change to `M²` stays
    // below `1e-10·a²`.
    let defect = {
        let eig = hermitian_eigen(last)?;
        let top = eig.values.iter().fold(0.0f64, |p, v| p.max(v.abs()));
        if top > ad + tol.scaled(ad) {
            return Err(Error::NormExceeded { index: d - 1, norm: top, bound: ad });
        }
        let floor = (64.0 * f64::EPSILON * m as f64).max(1e-10) * ad * ad;
        eig.reassemble(|v| {
            let g = ad * ad - v * v;
            if g > floor { num::sqrt(g) } else { 0.0 }
        })
    };
    if d == 1 {
        let h = ComplexMatrix::block2x2(last, &defect, &defect, &(-last));
        return Ok(vec![h]);
    }
    let inner = symmetry_rec(&a_tuple[..d - 1], &a[..d - 1], tol)?;
    let copies = 1usize << (d - 1);
    let lifted = z_power(d - 1).kron(last);
    let s = ComplexMatrix::identity(copies).kron(&defect);
    let z = pauli::z();
    let mut out: Vec<ComplexMatrix> = inner.iter().map(|l| z.kron(l)).collect();
    out.push(ComplexMatrix::block2x2(&lifted, &s, &s, &(-&lifted)));
    Ok(out)
}

/// Pairwise anticommuting Hermitian `Mⱼ` on `ℂ^{2^d·m}` with `Mⱼ² = aⱼ²I`
/// dilating anticommuting Hermitian `Aⱼ` with `‖Aⱼ‖ ≤ aⱼ`. Witnesses `W`
/// propagate to `Z^{⊗d} ⊗ W`.
pub fn symmetry_normalize(
    a_tuple: &MatrixTuple,
    a: &ScaleVector,
    witnesses: &[ComplexMatrix],
    tol: &ToleranceConfig,
) -> Result<Certificate> {
    let d = a_tuple.d();
    let m = a_tuple.dim();
    if a.d() != d {
        return Err(Error::Shape(format!("{d} operators but {} scales", a.d())));
    }
    if (m as u128) << d as u32 > GUARDRAIL_DIM as u128 {
        return Err(Error::Unsupported(format!("output dimension {m}·2^{d} exceeds {GUARDRAIL_DIM}")));
    }
    check_hermitian_contractions(a_tuple, a.values(), tol)?;
    let s = a_tuple.scale_frobenius();
    let residual = a_tuple.anticommutator_residual();
    if residual > tol.scaled(s * s) {
        return Err(Error::NotAnticommuting { residual });
    }
    check_witnesses(a_tuple, witnesses, tol)?;
    let members = symmetry_rec(a_tuple.matrices(), a.values(), tol)?;
    normalized_certificate(a_tuple.clone(), members, a.values(), witnesses)
}

fn normalized_certificate(
    input: MatrixTuple,
    members: Vec<ComplexMatrix>,
    squares: &[f64],
    witnesses: &[ComplexMatrix],
) -> Result<Certificate> {
    let d = members.len();
    let n = input.dim();
    let big = members[0].rows();
    let dilation = MatrixTuple::with_flags(members, vec![true; d], f64::INFINITY)?;
    let amax = squares.iter().fold(1.0f64, |p, q| p.max(*q));
    let bound = claim_bound(big) * amax;
    let mut cert = Certificate::new(input, dilation, Isometry::leading(big, n), bound)?;
    cert.claim(Property::Hermitian, bound)?;
    for (index, &s) in squares.iter().enumerate() {
        cert.claim(Property::SquareScalar { index, value: s * s }, bound * amax)?;
    }
    cert.claim(Property::Anticommuting, bound * amax)?;
    let lift = z_power(d);
    for w in witnesses {
        let witness = lift.kron(w);
        let scale = 1.0 + w.frobenius();
        cert.claim(Property::AnticommutesWith { witness }, bound * amax * scale)?;
    }
    cert.scale = squares.to_vec();
    Ok(cert)
}

/// Certificate that `X ∈ 𝒲(F^[d])` whenever `‖Xⱼ‖ ≤ cⱼ` with `Σ cⱼ² ≤ 1`:
/// anticommuting symmetries `Lⱼ` (`Lⱼ² = I`) dilating `X`.
pub fn cube_ball_certificate(x: &MatrixTuple, c: &[f64], tol: &ToleranceConfig) -> Result<Certificate> {
    let d = x.d();
    if c.len() != d {
        return Err(Error::Shape(format!("{d} operators but {} bounds", c.len())));
    }
    if let Some(bad) = c.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::Premise(format!("bound {bad} is not positive")));
    }
    let sq: f64 = c.iter().map(|v| v * v).sum();
    if sq > 1.0 + 1e-12 {
        return Err(Error::Premise(format!("sum of squared bounds {sq:.6} > 1")));
    }
    guardrail(x.dim(), d)?;
    check_hermitian_contractions(x, c, tol)?;
    let b: Vec<ComplexMatrix> = x.iter().zip(c).map(|(m, cj)| m.scale_real(1.0 / cj)).collect();
    let a: Vec<f64> = c.iter().map(|cj| 1.0 / cj).collect();
    let ac = anticommuting_rec(&b, &a, tol)?;
    let sym = symmetry_rec(&ac, &a, tol)?;
    let members: Vec<ComplexMatrix> = sym.into_iter().zip(c).map(|(m, cj)| m.scale_real(*cj)).collect();
    let mut cert = normalized_certificate(x.clone(), members, &vec![1.0; d], &[])?;
    cert.scale = c.to_vec();
    cert.conclusion = Some("X ∈ 𝒲(F^[d]) certified".into());
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real;
    use crate::rng::SeededRng;
    use crate::C64;
    use proptest::prelude::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn random_hermitian_contraction(n: usize, rng: &mut SeededRng) -> ComplexMatrix {
        let g = ComplexMatrix::from_fn(n, n, |_, _| C64::new(rng.normal(), rng.normal())).hermitian_part();
        let s = op_norm(&g).max(1e-12);
        g.scale_real(rng.uniform() / s)
    }

    // Block-sparse inputs make the intermediate matrices highly degenerate
    // with exact zeros, which used to defeat the eigensolver two levels down.
    #[test]
    fn structured_inputs_at_depth_four() {
        let mut rng = SeededRng::new(4);
        for _ in 0..6 {
            let xs: Vec<ComplexMatrix> = (0..4)
                .map(|_| {
                    let mut m = random_hermitian_contraction(3, &mut rng);
                    for (r, s) in [(0, 0), (1, 1), (0, 2), (2, 0), (1, 2), (2, 1)] {
                        m[(r, s)] = C64::new(0.0, 0.0);
                    }
                    let norm = op_norm(&m).max(1e-12);
                    m.scale_real(rng.uniform_in(0.3, 1.0) / norm)
                })
                .collect();
            let x = MatrixTuple::with_flags(xs, vec![true; 4], 1e-12).unwrap();
            let a = ScaleVector::uniform(4, 2.0).unwrap();
            anticommuting_dilation(&x, &a, &[], &tol()).unwrap();
        }
    }

    #[test]
    fn clifford_examples() {
        assert_eq!(clifford_generators(1).unwrap().f.get(0), &ComplexMatrix::identity(1));
        let f2 = clifford_generators(2).unwrap();
        assert_eq!(f2.f.matrices(), &[pauli::z(), pauli::x()]);
        let f3 = clifford_generators(3).unwrap();
        let want = [pauli::z().kron(&pauli::z()), pauli::x().kron(&pauli::z()), ComplexMatrix::identity(2).kron(&pauli::x())];
        assert_eq!(f3.f.matrices(), &want);
        let (h, s, a) = f3.residuals();
        assert!(h <= 1e-14 && s <= 1e-14 && a <= 1e-14);
        assert!(clifford_generators(0).is_err() && clifford_generators(15).is_err());
    }

    #[test]
    fn ac_dilation_examples() {
        let x = MatrixTuple::scalars(&[0.3]).unwrap();
        let c = anticommuting_dilation(&x, &ScaleVector::new(vec![1.0]).unwrap(), &[], &tol()).unwrap();
        assert_eq!(c.dilation, x);

        let ones = MatrixTuple::scalars(&[1.0, 1.0]).unwrap();
        let r2 = num::sqrt(2.0);
        let c = anticommuting_dilation(&ones, &ScaleVector::uniform(2, r2).unwrap(), &[], &tol()).unwrap();
        let z = pauli::z();
        let id = ComplexMatrix::identity(2);
        let a1 = ComplexMatrix::block2x2(&z, &id, &id, &(-&z));
        let a2 = ComplexMatrix::block2x2(&z, &(-&id), &(-&id), &(-&z));
        assert!((c.dilation.get(0) - &a1).frobenius() < 1e-14);
        assert!((c.dilation.get(1) - &a2).frobenius() < 1e-14);
        for m in c.dilation.iter() {
            assert!((op_norm(m) - r2).abs() < 1e-12);
            assert!((m[(0, 0)].re - 1.0).abs() < 1e-14);
        }

        let mut rng = SeededRng::new(11);
        let x = MatrixTuple::new((0..3).map(|_| random_hermitian_contraction(2, &mut rng)).collect()).unwrap();
        let c = anticommuting_dilation(&x, &ScaleVector::uniform(3, num::sqrt(3.0)).unwrap(), &[], &tol()).unwrap();
        assert_eq!(c.dilation.dim(), 32);
        assert!(c.verify(Some(1e-8)).ok());

        assert!(anticommuting_dilation(&ones, &ScaleVector::uniform(2, 1.2).unwrap(), &[], &tol()).is_err());
    }

    #[test]
    fn tight_norm_at_top_level() {
        for d in 2..=4 {
            let ones = MatrixTuple::scalars(&vec![1.0; d]).unwrap();
            let a = num::sqrt(d as f64);
            let c = anticommuting_dilation(&ones, &ScaleVector::uniform(d, a).unwrap(), &[], &tol()).unwrap();
            let top = c.dilation.iter().map(op_norm).fold(0.0, f64::max);
            assert!((top - a).abs() < 1e-10, "d = {d}: {top}");
        }
    }

    #[test]
    fn witness_propagates() {
        let x = MatrixTuple::new(vec![pauli::z(), pauli::x()]).unwrap();
        let c = anticommuting_dilation(&x, &ScaleVector::uniform(2, num::sqrt(2.0)).unwrap(), &[pauli::y()], &tol()).unwrap();
        let w = pauli::z().kron(&pauli::z()).kron(&pauli::y());
        for m in c.dilation.iter() {
            assert!(m.anticommutator(&w).frobenius() <= 1e-12);
        }
        assert!(anticommuting_dilation(&x, &ScaleVector::uniform(2, 2.0).unwrap(), &[pauli::z()], &tol()).is_err());
    }

    /// Least-squares residual of `target` against the real span of `basis`.
    fn span_residual(target: &ComplexMatrix, basis: &[ComplexMatrix]) -> f64 {
        let flat = |m: &ComplexMatrix| -> Vec<f64> { m.data().iter().flat_map(|z| [z.re, z.im]).collect() };
        let vecs: Vec<Vec<f64>> = basis.iter().map(flat).collect();
        let ortho = real::gram_schmidt(&vecs, 1e-10);
        let mut rest = flat(target);
        for q in &ortho {
            let c = real::dot(&rest, q);
            rest = real::axpy(&rest, -c, q);
        }
        real::norm(&rest)
    }

    #[test]
    fn block_entries_are_short_words() {
        let mut rng = SeededRng::new(5);
        for n in 1..=2 {
            let x = MatrixTuple::new((0..2).map(|_| random_hermitian_contraction(n, &mut rng)).collect()).unwrap();
            let c = anticommuting_dilation(&x, &ScaleVector::uniform(2, 1.6).unwrap(), &[], &tol()).unwrap();
            let y: Vec<ComplexMatrix> = x.iter().map(|m| halmos_matrix(m, 1.0, &tol()).unwrap()).collect();
            let mut words = vec![ComplexMatrix::identity(2 * n)];
            words.extend(y.iter().cloned());
            for p in &y {
                for q in &y {
                    words.push(p.matmul(q));
                }
            }
            let k = 2 * n;
            for m in c.dilation.iter() {
                for bi in 0..2 {
                    for bj in 0..2 {
                        let block = m.submatrix(bi * k, bj * k, k, k);
                        assert!(span_residual(&block, &words) <= 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn symmetry_examples() {
        let zero = MatrixTuple::scalars(&[0.0]).unwrap();
        let c = symmetry_normalize(&zero, &ScaleVector::new(vec![1.0]).unwrap(), &[], &tol()).unwrap();
        assert_eq!(c.dilation.get(0), &pauli::x());

        let f = clifford_generators(2).unwrap().f;
        let c = symmetry_normalize(&f, &ScaleVector::uniform(2, 1.0).unwrap(), &[], &tol()).unwrap();
        assert_eq!(c.dilation.dim(), 8);
        for (m, a) in c.dilation.iter().zip(f.iter()) {
            // Defect blocks vanish, so the dilation is block diagonal.
            assert!((&m.submatrix(0, 0, 2, 2) - a).frobenius() < 1e-12);
            assert!(m.submatrix(0, 2, 2, 6).frobenius() < 1e-7);
        }

        let ones = MatrixTuple::scalars(&[1.0, 1.0]).unwrap();
        let a = ScaleVector::uniform(2, num::sqrt(2.0)).unwrap();
        let ac = anticommuting_dilation(&ones, &a, &[], &tol()).unwrap();
        let c = symmetry_normalize(&ac.dilation, &a, &[], &tol()).unwrap();
        for m in c.dilation.iter() {
            assert!((&m.matmul(m) - &ComplexMatrix::identity(16).scale_real(2.0)).frobenius() < 1e-12);
        }
        assert!(symmetry_normalize(&ones, &a, &[], &tol()).is_err());
    }

    #[test]
    fn symmetry_witness_propagates() {
        let f = clifford_generators(3).unwrap().f;
        let pair = MatrixTuple::new(f.matrices()[..2].to_vec()).unwrap();
        let w = f.get(2).clone();
        let c = symmetry_normalize(&pair.map(|_, m| m.scale_real(0.5)).unwrap(), &ScaleVector::uniform(2, 1.0).unwrap(), std::slice::from_ref(&w), &tol())
            .unwrap();
        let lifted = z_power(2).kron(&w);
        for m in c.dilation.iter() {
            assert!(m.anticommutator(&lifted).frobenius() <= 1e-12);
        }
    }

    #[test]
    fn cube_ball_examples() {
        let x = MatrixTuple::scalars(&[0.5]).unwrap();
        let c = cube_ball_certificate(&x, &[1.0], &tol()).unwrap();
        let r = num::sqrt(0.75);
        assert!((c.dilation.get(0) - &ComplexMatrix::from_real_rows(&[&[0.5, r], &[r, -0.5]])).frobenius() < 1e-12);

        let x = MatrixTuple::scalars(&[0.6, 0.8]).unwrap();
        let c = cube_ball_certificate(&x, &[0.6, 0.8], &tol()).unwrap();
        assert!(c.verify(Some(1e-9)).ok());
        assert_eq!(c.conclusion.as_deref(), Some("X ∈ 𝒲(F^[d]) certified"));

        let x = MatrixTuple::new(vec![pauli::z().scale_real(0.6), pauli::x().scale_real(0.8)]).unwrap();
        let c = cube_ball_certificate(&x, &[0.6, 0.8], &tol()).unwrap();
        assert!(c.verify(Some(1e-9)).ok());

        assert!(cube_ball_certificate(&x, &[0.7, 0.8], &tol()).is_err());
        assert!(cube_ball_certificate(&x, &[0.5, 0.8], &tol()).is_err());
    }

    #[test]
    fn guardrail_refuses_large_dimensions() {
        let x = MatrixTuple::scalars(&[0.1; 8]).unwrap();
        let a = ScaleVector::uniform(8, num::sqrt(8.0)).unwrap();
        assert!(matches!(anticommuting_dilation(&x, &a, &[], &tol()), Err(Error::Unsupported(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn clifford_relations(d in 1usize..9) {
            let (h, s, a) = clifford_generators(d).unwrap().residuals();
            prop_assert!(h <= 1e-13 && s <= 1e-13 && a <= 1e-13);
        }

        #[test]
        fn dilations_reverify(seed in any::<u64>(), d in 2usize..4, n in 1usize..3) {
            let mut rng = SeededRng::new(seed);
            let x = MatrixTuple::new((0..d).map(|_| random_hermitian_contraction(n, &mut rng)).collect()).unwrap();
            let a = ScaleVector::uniform(d, num::sqrt(d as f64)).unwrap();
            let c = anticommuting_dilation(&x, &a, &[], &tol()).unwrap();
            prop_assert!(c.verify(None).ok());
            let s = symmetry_normalize(&c.dilation, &a, &[], &tol()).unwrap();
            prop_assert!(s.verify(None).ok());
        }
    }
}
