//! Dilation scale of a body that is simplex-pointed at the origin.
//!
//! For `Π = conv(0, s₁e₁, ..., s_d e_d)`, `K ⊆ Π` holds iff
//! `Σ vᵢ/sᵢ ≤ 1` for every vertex `v`, and `Π ⊆ C·K` iff `sᵢγᵢ ≤ C` with
//! `γᵢ = gauge(K, eᵢ)`. Vertices are nonnegative, so the best choice is
//! `1/sᵢ = γᵢ/C`, and the least feasible `C` is `max(1, max_v ⟨v, γ⟩)`.

use super::ConvexBody;
use crate::error::{Error, Result};
use crate::linalg::real::{self, dot};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug)]
pub struct ThetaResult {
    pub theta: f64,
    /// `s₁, ..., s_d` of the witnessing simplex.
    pub scales: Vec<f64>,
    pub simplex: ConvexBody,
    /// `gauge(K, eᵢ)`.
    pub gauges: Vec<f64>,
}

/// Coordinate gauges `γᵢ = gauge(K, eᵢ)` after checking the premise.
fn coordinate_gauges(k: &ConvexBody) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let vertices = k
        .vertices()
        .ok_or_else(|| Error::Premise("θ needs a polytope".into()))?;
    let scale = vertices.iter().map(|v| real::norm(v)).fold(1.0, f64::max);
    if let Some(v) = vertices.iter().find(|v| v.iter().any(|&x| x < -1e-12 * scale)) {
        return Err(Error::Premise(format!("vertex {v:?} leaves the nonnegative orthant")));
    }
    if !k.contains_origin()? {
        return Err(Error::Premise("0 is not a point of K".into()));
    }
    let d = k.dim();
    let mut gauges = Vec::with_capacity(d);
    for i in 0..d {
        let g = match k.gauge(&real::unit(d, i)) {
            Ok(g) => g,
            Err(Error::OutsideHull) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        if !g.is_finite() || g <= 0.0 {
            return Err(Error::Premise(format!(
                "no neighborhood simplex at 0: K contains no positive multiple of e{}",
                i + 1
            )));
        }
        gauges.push(g);
    }
    Ok((vertices, gauges))
}

/// Least `C` with `K ⊆ Π ⊆ C·K` for a simplex `Π = conv(0, sᵢeᵢ)`, and the
/// witnessing simplex. `K` must lie in `[0, ∞)^d` with `0 ∈ K` and a
/// positive multiple of every `eᵢ` in `K`.
pub fn theta_simplex_pointed(k: &ConvexBody) -> Result<ThetaResult> {
    let (vertices, gauges) = coordinate_gauges(k)?;
    let theta = vertices.iter().map(|v| dot(v, &gauges)).fold(1.0, f64::max);
    witness(k, theta, gauges)
}

fn witness(k: &ConvexBody, theta: f64, gauges: Vec<f64>) -> Result<ThetaResult> {
    let d = k.dim();
    let scales: Vec<f64> = gauges.iter().map(|g| theta / g).collect();
    let mut pts = vec![vec![0.0; d]];
    pts.extend((0..d).map(|i| real::scale(&real::unit(d, i), scales[i])));
    let simplex = ConvexBody::v_polytope(pts)?;
    Ok(ThetaResult { theta, scales, simplex, gauges })
}

/// Feasibility of "some `u` with `uᵢ ≥ γᵢ/C` and `Σ vᵢuᵢ ≤ 1` for every
/// vertex `v`"; returns the `u` found.
pub fn theta_feasible(vertices: &[Vec<f64>], gauges: &[f64], c: f64) -> Result<Option<Vec<f64>>> {
    let d = gauges.len();
    let mut lp = LinearProgram::minimize(vec![0.0; d]);
    for (i, g) in gauges.iter().enumerate() {
        lp.constrain(real::unit(d, i), Relation::Ge, g / c)?;
    }
    for v in vertices {
        lp.constrain(v.clone(), Relation::Le, 1.0 + 1e-12)?;
    }
    Ok(match lp.solve()? {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    })
}

/// The same quantity by bisection on `C` over [`theta_feasible`], to
/// absolute accuracy `tol`.
pub fn theta_by_bisection(k: &ConvexBody, tol: f64) -> Result<ThetaResult> {
    let (vertices, gauges) = coordinate_gauges(k)?;
    let mut lo = 1.0;
    if theta_feasible(&vertices, &gauges, lo)?.is_some() {
        return witness(k, lo, gauges);
    }
    let mut hi = 2.0;
    while theta_feasible(&vertices, &gauges, hi)?.is_none() {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Premise("θ bisection found no feasible bound".into()));
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if theta_feasible(&vertices, &gauges, mid)?.is_some() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    witness(k, hi, gauges)
}
