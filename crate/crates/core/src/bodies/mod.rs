//! Compact convex bodies in `ℝⁿ`: polytopes in either representation, the
//! named analytic bodies, and Cartesian products of those.
//!
//! Complex bodies in `ℂᵈ` are stored in `ℝ^{2d}` with interleaved
//! coordinates `(Re z₁, Im z₁, Re z₂, ...)`.

pub mod directions;
pub mod hull;
pub mod scale;
pub mod theta;

pub use scale::{sd_classify, ScaleClass, ScaleVector, SdClass};
pub use theta::{theta_simplex_pointed, ThetaResult};

use crate::error::{Error, Result};
use crate::linalg::real::{self, dot, norm};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::num;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

/// Half-space `a·x ≤ b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Facet {
    pub a: Vec<f64>,
    pub b: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum NamedBody {
    /// Euclidean ball; the center defaults to the origin.
    Ball { radius: f64, center: Option<Vec<f64>> },
    /// `[-h, h]^n`.
    Cube { half_width: f64 },
    /// `conv(0, e₁, ..., eₙ)`.
    SimplexStandard,
    /// The `ℓ¹` unit ball.
    DiamondStandard,
    /// `∏ {|z_k| ≤ r_k}` in `ℂᵈ`.
    DiskProduct { radii: Vec<f64> },
    /// `∏ [lo_k, hi_k]`.
    IntervalProduct { bounds: Vec<(f64, f64)> },
}

#[derive(Clone, Debug, PartialEq)]
pub enum BodyKind {
    /// Extreme points, with facets when known.
    VPolytope { vertices: Vec<Vec<f64>>, facets: Option<Vec<Facet>> },
    /// Facets, with the vertices computed at construction.
    HPolytope { facets: Vec<Facet>, vertices: Vec<Vec<f64>> },
    Named(NamedBody),
    Product(Vec<ConvexBody>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvexBody {
    dim: usize,
    kind: BodyKind,
    complex: bool,
}

/// Relative tolerance used when pruning vertices and testing `0 ∈ K`.
const GEOM_TOL: f64 = 1e-9;

impl ConvexBody {
    /// Convex hull of the given points; non-extreme points are dropped.
    pub fn v_polytope(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let dim = check_points(&vertices)?;
        let vertices = hull::prune_to_extreme(vertices, GEOM_TOL)?;
        Ok(ConvexBody { dim, kind: BodyKind::VPolytope { vertices, facets: None }, complex: false })
    }

    /// Points already known to be the extreme points, e.g. from a planar
    /// hull; skips pruning.
    pub(crate) fn v_polytope_trusted(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let dim = check_points(&vertices)?;
        Ok(ConvexBody { dim, kind: BodyKind::VPolytope { vertices, facets: None }, complex: false })
    }

    /// Like [`ConvexBody::v_polytope`], with caller-supplied facets. Every
    /// vertex must satisfy every facet.
    pub fn v_polytope_with_facets(vertices: Vec<Vec<f64>>, facets: Vec<Facet>) -> Result<Self> {
        let mut body = Self::v_polytope(vertices)?;
        check_facets(&facets, body.dim)?;
        if let BodyKind::VPolytope { vertices, facets: slot } = &mut body.kind {
            let scale = vertices.iter().map(|v| norm(v)).fold(1.0, f64::max);
            for f in &facets {
                let an = norm(&f.a).max(1e-300);
                if vertices.iter().any(|v| dot(&f.a, v) > f.b + 1e-9 * scale * an) {
                    return Err(Error::InvalidBody("a vertex violates a supplied facet".into()));
                }
            }
            *slot = Some(facets);
        }
        Ok(body)
    }

    /// `{x : a·x ≤ b}`; must be bounded and nonempty.
    pub fn h_polytope(facets: Vec<Facet>) -> Result<Self> {
        let dim = facets.first().map(|f| f.a.len()).ok_or_else(|| Error::InvalidBody("no facets".into()))?;
        check_facets(&facets, dim)?;
        let vertices = hull::enumerate_vertices(&facets, dim)?;
        let vertices = hull::prune_to_extreme(vertices, GEOM_TOL)?;
        // Boundedness: the LP support in every coordinate direction is finite.
        for i in 0..dim {
            for s in [1.0, -1.0] {
                let mut lp = LinearProgram::maximize(real::scale(&real::unit(dim, i), s));
                lp.all_free();
                for f in &facets {
                    lp.constrain(f.a.clone(), Relation::Le, f.b)?;
                }
                if !matches!(lp.solve()?, LpOutcome::Optimal { .. }) {
                    return Err(Error::InvalidBody("H-polytope is unbounded".into()));
                }
            }
        }
        Ok(ConvexBody { dim, kind: BodyKind::HPolytope { facets, vertices }, complex: false })
    }

    pub fn named(dim: usize, body: NamedBody) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidBody("dimension must be positive".into()));
        }
        let positive = |x: f64| x.is_finite() && x > 0.0;
        let complex = matches!(body, NamedBody::DiskProduct { .. });
        match &body {
            NamedBody::Ball { radius, center } => {
                if !positive(*radius) {
                    return Err(Error::InvalidBody(format!("ball radius {radius}")));
                }
                if let Some(c) = center {
                    if c.len() != dim || c.iter().any(|x| !x.is_finite()) {
                        return Err(Error::InvalidBody("ball center of the wrong dimension".into()));
                    }
                }
            }
            NamedBody::Cube { half_width } if !positive(*half_width) => {
                return Err(Error::InvalidBody(format!("cube half width {half_width}")));
            }
            NamedBody::DiskProduct { radii } => {
                if radii.len() * 2 != dim || !radii.iter().all(|&r| positive(r)) {
                    return Err(Error::InvalidBody("disk product needs dim = 2·len(radii) positive radii".into()));
                }
            }
            NamedBody::IntervalProduct { bounds }
                if (bounds.len() != dim || bounds.iter().any(|&(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo <= hi))) => {
                    return Err(Error::InvalidBody("interval product needs dim finite intervals lo ≤ hi".into()));
                }
            _ => {}
        }
        Ok(ConvexBody { dim, kind: BodyKind::Named(body), complex })
    }

    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        Self::named(dim, NamedBody::Ball { radius, center: None })
    }

    pub fn cube(dim: usize, half_width: f64) -> Result<Self> {
        Self::named(dim, NamedBody::Cube { half_width })
    }

    pub fn simplex_standard(dim: usize) -> Result<Self> {
        Self::named(dim, NamedBody::SimplexStandard)
    }

    pub fn diamond_standard(dim: usize) -> Result<Self> {
        Self::named(dim, NamedBody::DiamondStandard)
    }

    pub fn disk_product(radii: Vec<f64>) -> Result<Self> {
        Self::named(2 * radii.len(), NamedBody::DiskProduct { radii })
    }

    pub fn interval_product(bounds: Vec<(f64, f64)>) -> Result<Self> {
        Self::named(bounds.len(), NamedBody::IntervalProduct { bounds })
    }

    /// `[0, 1]^dim`.
    pub fn unit_box(dim: usize) -> Result<Self> {
        Self::interval_product(vec![(0.0, 1.0); dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &BodyKind {
        &self.kind
    }

    pub fn is_complex(&self) -> bool {
        self.complex
    }

    pub fn set_complex(mut self, complex: bool) -> Self {
        self.complex = complex;
        self
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::Shape(format!("vector of length {} for a body in dimension {}", x.len(), self.dim)));
        }
        Ok(())
    }

    /// `max_{x ∈ K} c·x`.
    pub fn support(&self, c: &[f64]) -> Result<f64> {
        self.check_dim(c)?;
        Ok(match &self.kind {
            BodyKind::VPolytope { vertices, .. } | BodyKind::HPolytope { vertices, .. } => {
                vertices.iter().map(|v| dot(c, v)).fold(f64::NEG_INFINITY, f64::max)
            }
            BodyKind::Named(named) => match named {
                NamedBody::Ball { radius, center } => {
                    radius * norm(c) + center.as_ref().map_or(0.0, |z| dot(c, z))
                }
                NamedBody::Cube { half_width } => half_width * c.iter().map(|x| x.abs()).sum::<f64>(),
                NamedBody::SimplexStandard => c.iter().copied().fold(0.0, f64::max),
                NamedBody::DiamondStandard => c.iter().fold(0.0, |a, x| a.max(x.abs())),
                NamedBody::DiskProduct { radii } => {
                    radii.iter().enumerate().map(|(k, r)| r * num::hypot(c[2 * k], c[2 * k + 1])).sum()
                }
                NamedBody::IntervalProduct { bounds } => {
                    bounds.iter().zip(c).map(|(&(lo, hi), &ci)| (lo * ci).max(hi * ci)).sum()
                }
            },
            BodyKind::Product(parts) => {
                let mut total = 0.0;
                for (p, block) in parts.iter().zip(split_blocks(parts, c)) {
                    total += p.support(block)?;
                }
                total
            }
        })
    }

    /// A point of `K` attaining [`ConvexBody::support`].
    pub fn support_point(&self, c: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(c)?;
        Ok(match &self.kind {
            BodyKind::VPolytope { vertices, .. } | BodyKind::HPolytope { vertices, .. } => vertices
                .iter()
                .max_by(|a, b| dot(c, a).total_cmp(&dot(c, b)))
                .cloned()
                .unwrap_or_default(),
            BodyKind::Named(named) => match named {
                NamedBody::Ball { radius, center } => {
                    let n = norm(c);
                    let mut p = if n > 0.0 { real::scale(c, radius / n) } else { vec![0.0; self.dim] };
                    if n == 0.0 {
                        p[0] = *radius;
                    }
                    match center {
                        Some(z) => real::add(&p, z),
                        None => p,
                    }
                }
                NamedBody::Cube { half_width } => {
                    c.iter().map(|&x| if x < 0.0 { -half_width } else { *half_width }).collect()
                }
                NamedBody::SimplexStandard => {
                    let (i, m) = argmax(c);
                    if m > 0.0 {
                        real::unit(self.dim, i)
                    } else {
                        vec![0.0; self.dim]
                    }
                }
                NamedBody::DiamondStandard => {
                    let abs: Vec<f64> = c.iter().map(|x| x.abs()).collect();
                    let (i, _) = argmax(&abs);
                    real::scale(&real::unit(self.dim, i), if c[i] < 0.0 { -1.0 } else { 1.0 })
                }
                NamedBody::DiskProduct { radii } => {
                    let mut p = vec![0.0; self.dim];
                    for (k, r) in radii.iter().enumerate() {
                        let h = num::hypot(c[2 * k], c[2 * k + 1]);
                        if h > 0.0 {
                            p[2 * k] = r * c[2 * k] / h;
                            p[2 * k + 1] = r * c[2 * k + 1] / h;
                        } else {
                            p[2 * k] = *r;
                        }
                    }
                    p
                }
                NamedBody::IntervalProduct { bounds } => {
                    bounds.iter().zip(c).map(|(&(lo, hi), &ci)| if ci < 0.0 { lo } else { hi }).collect()
                }
            },
            BodyKind::Product(parts) => {
                let mut p = Vec::with_capacity(self.dim);
                for (part, block) in parts.iter().zip(split_blocks(parts, c)) {
                    p.extend(part.support_point(block)?);
                }
                p
            }
        })
    }

    /// Euclidean distance from `x` to `K`.
    pub fn distance(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(match &self.kind {
            BodyKind::VPolytope { vertices, .. } | BodyKind::HPolytope { vertices, .. } => {
                let shifted: Vec<Vec<f64>> = vertices.iter().map(|v| real::sub(v, x)).collect();
                norm(&hull::min_norm_point(&shifted).0)
            }
            BodyKind::Named(named) => real::dist(x, &project_named(named, x)),
            BodyKind::Product(parts) => {
                let mut total = 0.0;
                for (part, block) in parts.iter().zip(split_blocks(parts, x)) {
                    let d = part.distance(block)?;
                    total += d * d;
                }
                num::sqrt(total)
            }
        })
    }

    /// True iff `x` lies within Euclidean distance `tol` of `K`.
    pub fn member(&self, x: &[f64], tol: f64) -> Result<bool> {
        Ok(self.distance(x)? <= tol)
    }

    /// Minkowski gauge `min{t ≥ 0 : x ∈ tK}` in the recession sense: `+∞`
    /// when `x` is not in the cone generated by `K`. Requires `0 ∈ K`.
    pub fn gauge(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        if !self.contains_origin()? {
            return Err(Error::InvalidBody("gauge needs 0 ∈ K".into()));
        }
        if norm(x) == 0.0 {
            return Ok(0.0);
        }
        match &self.kind {
            BodyKind::VPolytope { vertices, .. } | BodyKind::HPolytope { vertices, .. } => gauge_vertices(vertices, x),
            BodyKind::Named(named) => Ok(gauge_named(named, x)),
            BodyKind::Product(parts) => {
                let mut g = 0.0f64;
                for (part, block) in parts.iter().zip(split_blocks(parts, x)) {
                    if norm(block) > 0.0 {
                        g = g.max(part.gauge(block)?);
                    }
                }
                Ok(g)
            }
        }
    }

    pub fn contains_origin(&self) -> Result<bool> {
        let scale = self.radius_bound()?.max(1.0);
        self.member(&vec![0.0; self.dim], GEOM_TOL * scale)
    }

    /// `max_{x ∈ K} ‖x‖`.
    pub fn radius_bound(&self) -> Result<f64> {
        Ok(match &self.kind {
            BodyKind::VPolytope { vertices, .. } | BodyKind::HPolytope { vertices, .. } => {
                vertices.iter().map(|v| norm(v)).fold(0.0, f64::max)
            }
            BodyKind::Named(NamedBody::Ball { radius, center }) => radius + center.as_ref().map_or(0.0, |c| norm(c)),
            BodyKind::Named(NamedBody::DiskProduct { radii }) => num::sqrt(radii.iter().map(|r| r * r).sum()),
            BodyKind::Product(parts) => {
                let mut t = 0.0;
                for p in parts {
                    let r = p.radius_bound()?;
                    t += r * r;
                }
                num::sqrt(t)
            }
            BodyKind::Named(_) => self.vertices().unwrap_or_default().iter().map(|v| norm(v)).fold(0.0, f64::max),
        })
    }

    /// Vertices when `K` is a polytope. Products and boxes list them with the
    /// first coordinate (block) varying fastest.
    pub fn vertices(&self) -> Option<Vec<Vec<f64>>> {
        match &self.kind {
            BodyKind::VPolytope { vertices, .. } | BodyKind::HPolytope { vertices, .. } => Some(vertices.clone()),
            BodyKind::Named(named) => match named {
                NamedBody::Ball { .. } | NamedBody::DiskProduct { .. } => None,
                NamedBody::Cube { half_width } => {
                    Some(grid(&vec![vec![-half_width, *half_width]; self.dim]))
                }
                NamedBody::SimplexStandard => {
                    let mut v = vec![vec![0.0; self.dim]];
                    v.extend((0..self.dim).map(|i| real::unit(self.dim, i)));
                    Some(v)
                }
                NamedBody::DiamondStandard => Some(
                    (0..self.dim)
                        .flat_map(|i| [real::unit(self.dim, i), real::scale(&real::unit(self.dim, i), -1.0)])
                        .collect(),
                ),
                NamedBody::IntervalProduct { bounds } => {
                    let axes: Vec<Vec<f64>> =
                        bounds.iter().map(|&(lo, hi)| if lo == hi { vec![lo] } else { vec![lo, hi] }).collect();
                    Some(grid(&axes))
                }
            },
            BodyKind::Product(parts) => {
                let blocks: Option<Vec<Vec<Vec<f64>>>> = parts.iter().map(|p| p.vertices()).collect();
                Some(product_points(&blocks?))
            }
        }
    }

    pub fn is_polytope(&self) -> bool {
        match &self.kind {
            BodyKind::Named(NamedBody::Ball { .. } | NamedBody::DiskProduct { .. }) => false,
            BodyKind::Product(parts) => parts.iter().all(|p| p.is_polytope()),
            _ => true,
        }
    }

    /// Exact facets: supplied or analytic ones, or enumerated when the
    /// affine dimension is at most 3. `None` for curved bodies and for
    /// high-dimensional V-polytopes without supplied facets.
    pub fn facets(&self) -> Option<Vec<Facet>> {
        let dim = self.dim;
        match &self.kind {
            BodyKind::VPolytope { vertices, facets } => facets.clone().or_else(|| hull::enumerate_facets(vertices)),
            BodyKind::HPolytope { facets, .. } => Some(facets.clone()),
            BodyKind::Named(named) => match named {
                NamedBody::Ball { .. } | NamedBody::DiskProduct { .. } => None,
                NamedBody::Cube { half_width } => Some(
                    (0..dim)
                        .flat_map(|i| {
                            [
                                Facet { a: real::unit(dim, i), b: *half_width },
                                Facet { a: real::scale(&real::unit(dim, i), -1.0), b: *half_width },
                            ]
                        })
                        .collect(),
                ),
                NamedBody::SimplexStandard => {
                    let mut f: Vec<Facet> =
                        (0..dim).map(|i| Facet { a: real::scale(&real::unit(dim, i), -1.0), b: 0.0 }).collect();
                    f.push(Facet { a: vec![1.0; dim], b: 1.0 });
                    Some(f)
                }
                NamedBody::DiamondStandard => {
                    if dim > 16 {
                        return None;
                    }
                    Some(
                        (0..(1usize << dim))
                            .map(|mask| Facet {
                                a: (0..dim).map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 }).collect(),
                                b: 1.0,
                            })
                            .collect(),
                    )
                }
                NamedBody::IntervalProduct { bounds } => Some(
                    bounds
                        .iter()
                        .enumerate()
                        .flat_map(|(i, &(lo, hi))| {
                            [
                                Facet { a: real::unit(dim, i), b: hi },
                                Facet { a: real::scale(&real::unit(dim, i), -1.0), b: -lo },
                            ]
                        })
                        .collect(),
                ),
            },
            BodyKind::Product(parts) => {
                let mut out = Vec::new();
                let mut offset = 0;
                for p in parts {
                    for f in p.facets()? {
                        let mut a = vec![0.0; dim];
                        a[offset..offset + p.dim].copy_from_slice(&f.a);
                        out.push(Facet { a, b: f.b });
                    }
                    offset += p.dim;
                }
                Some(out)
            }
        }
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        match self.vertices() {
            Some(v) => hull::AffineHull::of(&v).dim(),
            None => self.dim,
        }
    }

    /// True for a full-dimensional simplex.
    pub fn is_simplex(&self) -> bool {
        match self.vertices() {
            Some(v) => v.len() == self.dim + 1 && self.affine_dim() == self.dim,
            None => false,
        }
    }

    /// `tK` for `t > 0`, keeping the named structure where possible.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::OutOfRange(format!("scale factor {t}")));
        }
        let kind = match &self.kind {
            BodyKind::VPolytope { vertices, facets } => BodyKind::VPolytope {
                vertices: vertices.iter().map(|v| real::scale(v, t)).collect(),
                facets: facets.as_ref().map(|fs| scale_facets(fs, t)),
            },
            BodyKind::HPolytope { facets, vertices } => BodyKind::HPolytope {
                facets: scale_facets(facets, t),
                vertices: vertices.iter().map(|v| real::scale(v, t)).collect(),
            },
            BodyKind::Named(named) => match named {
                NamedBody::Ball { radius, center } => BodyKind::Named(NamedBody::Ball {
                    radius: radius * t,
                    center: center.as_ref().map(|c| real::scale(c, t)),
                }),
                NamedBody::Cube { half_width } => BodyKind::Named(NamedBody::Cube { half_width: half_width * t }),
                NamedBody::DiskProduct { radii } => {
                    BodyKind::Named(NamedBody::DiskProduct { radii: radii.iter().map(|r| r * t).collect() })
                }
                NamedBody::IntervalProduct { bounds } => BodyKind::Named(NamedBody::IntervalProduct {
                    bounds: bounds.iter().map(|&(lo, hi)| (lo * t, hi * t)).collect(),
                }),
                NamedBody::SimplexStandard | NamedBody::DiamondStandard => BodyKind::VPolytope {
                    vertices: self.vertices().unwrap_or_default().iter().map(|v| real::scale(v, t)).collect(),
                    facets: self.facets().map(|fs| scale_facets(&fs, t)),
                },
            },
            BodyKind::Product(parts) => {
                BodyKind::Product(parts.iter().map(|p| p.scaled(t)).collect::<Result<_>>()?)
            }
        };
        Ok(ConvexBody { dim: self.dim, kind, complex: self.complex })
    }

    /// Image under `x ↦ A x + b`, with `A` given by rows. Polytopes map
    /// through their vertices; balls only under similarities.
    pub fn affine_image(&self, a: &[Vec<f64>], b: &[f64]) -> Result<Self> {
        let out_dim = a.len();
        if b.len() != out_dim || a.iter().any(|r| r.len() != self.dim) {
            return Err(Error::Shape("affine map does not match the body dimension".into()));
        }
        let apply = |x: &[f64]| real::add(&real::mat_vec(a, x), b);
        if let Some(vertices) = self.vertices() {
            let mapped: Vec<Vec<f64>> = vertices.iter().map(|v| apply(v)).collect();
            let mut body = Self::v_polytope(mapped)?;
            // Carry facets across an invertible square map.
            if out_dim == self.dim {
                if let (Some(facets), Some(inv_t)) = (self.facets(), inverse_transpose(a)) {
                    let moved: Vec<Facet> = facets
                        .iter()
                        .map(|f| {
                            let a2 = real::mat_vec(&inv_t, &f.a);
                            let b2 = f.b + dot(&a2, b);
                            Facet { a: a2, b: b2 }
                        })
                        .collect();
                    if let BodyKind::VPolytope { facets: slot, .. } = &mut body.kind {
                        *slot = Some(moved);
                    }
                }
            }
            return Ok(body.set_complex(self.complex && out_dim == self.dim));
        }
        if let BodyKind::Named(NamedBody::Ball { radius, center }) = &self.kind {
            if let Some(s) = similarity_factor(a) {
                let c = center.clone().unwrap_or_else(|| vec![0.0; self.dim]);
                return Self::named(out_dim, NamedBody::Ball { radius: radius * s, center: Some(apply(&c)) });
            }
        }
        if let Some(t) = scalar_factor(a) {
            if b.iter().all(|&x| x == 0.0) && t > 0.0 {
                return self.scaled(t);
            }
        }
        Err(Error::Unsupported("affine image of a curved body under a non-similarity map".into()))
    }

    /// Hausdorff distance. Exact for two polytopes (vertex distances);
    /// otherwise the largest support-function gap over sampled directions.
    pub fn hausdorff(&self, other: &ConvexBody, directions: usize, seed: u64) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::Shape("Hausdorff distance between bodies of different dimension".into()));
        }
        if let (Some(va), Some(vb)) = (self.vertices(), other.vertices()) {
            let mut h = 0.0f64;
            for v in &va {
                h = h.max(other.distance(v)?);
            }
            for v in &vb {
                h = h.max(self.distance(v)?);
            }
            return Ok(h);
        }
        let mut h = 0.0f64;
        for u in directions::directions(self.dim, directions, seed) {
            h = h.max((self.support(&u)? - other.support(&u)?).abs());
        }
        Ok(h)
    }

    /// Short human-readable description.
    pub fn describe(&self) -> String {
        match &self.kind {
            BodyKind::VPolytope { vertices, .. } => format!("V-polytope in R^{} with {} vertices", self.dim, vertices.len()),
            BodyKind::HPolytope { facets, .. } => format!("H-polytope in R^{} with {} facets", self.dim, facets.len()),
            BodyKind::Named(n) => format!("{n:?} in R^{}", self.dim),
            BodyKind::Product(p) => format!("product of {} bodies in R^{}", p.len(), self.dim),
        }
    }
}

/// Cartesian product; vertices of a product of polytopes are the tuples of
/// vertices, first factor varying fastest.
pub fn product(bodies: Vec<ConvexBody>) -> Result<ConvexBody> {
    if bodies.is_empty() {
        return Err(Error::InvalidBody("empty product".into()));
    }
    let dim = bodies.iter().map(|b| b.dim).sum();
    let complex = bodies.iter().all(|b| b.complex);
    Ok(ConvexBody { dim, kind: BodyKind::Product(bodies), complex })
}

fn check_points(points: &[Vec<f64>]) -> Result<usize> {
    let dim = points.first().map(|p| p.len()).ok_or_else(|| Error::InvalidBody("no vertices".into()))?;
    if dim == 0 {
        return Err(Error::InvalidBody("dimension must be positive".into()));
    }
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::InvalidBody("vertices of different dimensions".into()));
    }
    if points.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(dim)
}

fn check_facets(facets: &[Facet], dim: usize) -> Result<()> {
    for f in facets {
        if f.a.len() != dim {
            return Err(Error::InvalidBody("facet normal of the wrong dimension".into()));
        }
        if !f.b.is_finite() || f.a.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
    }
    Ok(())
}

fn split_blocks<'a>(parts: &[ConvexBody], x: &'a [f64]) -> Vec<&'a [f64]> {
    let mut out = Vec::with_capacity(parts.len());
    let mut offset = 0;
    for p in parts {
        out.push(&x[offset..offset + p.dim]);
        offset += p.dim;
    }
    out
}

fn argmax(v: &[f64]) -> (usize, f64) {
    v.iter().enumerate().fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &x)| if x > bv { (i, x) } else { (bi, bv) })
}

/// All points with coordinate `i` drawn from `axes[i]`, first coordinate
/// varying fastest.
fn grid(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let blocks: Vec<Vec<Vec<f64>>> = axes.iter().map(|a| a.iter().map(|&x| vec![x]).collect()).collect();
    product_points(&blocks)
}

fn product_points(blocks: &[Vec<Vec<f64>>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for block in blocks {
        let mut next = Vec::with_capacity(out.len() * block.len());
        for v in block {
            for prefix in &out {
                let mut p = prefix.clone();
                p.extend_from_slice(v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

fn scale_facets(facets: &[Facet], t: f64) -> Vec<Facet> {
    facets.iter().map(|f| Facet { a: f.a.clone(), b: f.b * t }).collect()
}

fn inverse_transpose(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let at: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| a[i][j]).collect()).collect();
    // Columns of (Aᵀ)⁻¹ by solving against unit vectors.
    let cols: Option<Vec<Vec<f64>>> = (0..n).map(|k| real::solve(&at, &real::unit(n, k), 1e-12)).collect();
    let cols = cols?;
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect())
}

/// `s` when `AᵀA = s²I` with `s > 0`.
fn similarity_factor(a: &[Vec<f64>]) -> Option<f64> {
    let cols = a[0].len();
    let gram = |i: usize, j: usize| a.iter().map(|r| r[i] * r[j]).sum::<f64>();
    let s2 = gram(0, 0);
    if s2 <= 0.0 {
        return None;
    }
    for i in 0..cols {
        for j in 0..cols {
            let target = if i == j { s2 } else { 0.0 };
            if (gram(i, j) - target).abs() > 1e-12 * s2 {
                return None;
            }
        }
    }
    Some(num::sqrt(s2))
}

fn scalar_factor(a: &[Vec<f64>]) -> Option<f64> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return None;
    }
    let t = a[0][0];
    for (i, row) in a.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if (i == j && x != t) || (i != j && x != 0.0) {
                return None;
            }
        }
    }
    Some(t)
}

fn gauge_vertices(vertices: &[Vec<f64>], x: &[f64]) -> Result<f64> {
    let dim = x.len();
    let m = vertices.len();
    let mut lp = LinearProgram::minimize(vec![1.0; m]);
    for i in 0..dim {
        lp.constrain(vertices.iter().map(|v| v[i]).collect(), Relation::Eq, x[i])?;
    }
    match lp.solve()? {
        LpOutcome::Optimal { value, .. } => Ok(value),
        LpOutcome::Unbounded => Err(Error::Lp("gauge LP unbounded".into())),
        LpOutcome::Infeasible => {
            let h = hull::AffineHull::of(vertices);
            // The affine hull passes through 0, so it is the linear span.
            if h.offset(x) > 1e-9 * norm(x).max(1.0) {
                Err(Error::OutsideHull)
            } else {
                Ok(f64::INFINITY)
            }
        }
    }
}

fn gauge_named(named: &NamedBody, x: &[f64]) -> f64 {
    match named {
        NamedBody::Ball { radius, center } => match center {
            None => norm(x) / radius,
            Some(c) => {
                // Smallest positive t with ‖x - t c‖ = t r.
                let qa = dot(c, c) - radius * radius;
                let qb = -2.0 * dot(x, c);
                let qc = dot(x, x);
                if qa.abs() < 1e-14 * radius * radius {
                    if qb < 0.0 { -qc / qb } else { f64::INFINITY }
                } else {
                    let disc = (qb * qb - 4.0 * qa * qc).max(0.0);
                    let r1 = (-qb - num::sqrt(disc)) / (2.0 * qa);
                    let r2 = (-qb + num::sqrt(disc)) / (2.0 * qa);
                    let roots = [r1, r2];
                    roots.iter().copied().filter(|t| *t > 0.0).fold(f64::INFINITY, f64::min)
                }
            }
        },
        NamedBody::Cube { half_width } => x.iter().fold(0.0f64, |a, v| a.max(v.abs())) / half_width,
        NamedBody::SimplexStandard => {
            if x.iter().any(|&v| v < 0.0) {
                f64::INFINITY
            } else {
                x.iter().sum()
            }
        }
        NamedBody::DiamondStandard => x.iter().map(|v| v.abs()).sum(),
        NamedBody::DiskProduct { radii } => radii
            .iter()
            .enumerate()
            .map(|(k, r)| num::hypot(x[2 * k], x[2 * k + 1]) / r)
            .fold(0.0, f64::max),
        NamedBody::IntervalProduct { bounds } => bounds
            .iter()
            .zip(x)
            .map(|(&(lo, hi), &v)| {
                if v > 0.0 {
                    if hi > 0.0 { v / hi } else { f64::INFINITY }
                } else if v < 0.0 {
                    if lo < 0.0 { v / lo } else { f64::INFINITY }
                } else {
                    0.0
                }
            })
            .fold(0.0, f64::max),
    }
}

/// Euclidean projection onto a named body.
fn project_named(named: &NamedBody, x: &[f64]) -> Vec<f64> {
    match named {
        NamedBody::Ball { radius, center } => {
            let c = center.clone().unwrap_or_else(|| vec![0.0; x.len()]);
            let y = real::sub(x, &c);
            let n = norm(&y);
            if n <= *radius {
                x.to_vec()
            } else {
                real::axpy(&c, radius / n, &y)
            }
        }
        NamedBody::Cube { half_width } => x.iter().map(|v| v.clamp(-half_width, *half_width)).collect(),
        NamedBody::IntervalProduct { bounds } => {
            bounds.iter().zip(x).map(|(&(lo, hi), &v)| v.clamp(lo, hi)).collect()
        }
        NamedBody::SimplexStandard => {
            let clipped: Vec<f64> = x.iter().map(|v| v.max(0.0)).collect();
            if clipped.iter().sum::<f64>() <= 1.0 {
                clipped
            } else {
                project_probability_simplex(x)
            }
        }
        NamedBody::DiamondStandard => {
            if x.iter().map(|v| v.abs()).sum::<f64>() <= 1.0 {
                x.to_vec()
            } else {
                let abs: Vec<f64> = x.iter().map(|v| v.abs()).collect();
                let p = project_probability_simplex(&abs);
                p.iter().zip(x).map(|(pi, xi)| if *xi < 0.0 { -pi } else { *pi }).collect()
            }
        }
        NamedBody::DiskProduct { radii } => {
            let mut p = x.to_vec();
            for (k, r) in radii.iter().enumerate() {
                let h = num::hypot(x[2 * k], x[2 * k + 1]);
                if h > *r {
                    p[2 * k] *= r / h;
                    p[2 * k + 1] *= r / h;
                }
            }
            p
        }
    }
}

/// Projection onto `{y ≥ 0, Σy = 1}` (sort-based).
fn project_probability_simplex(x: &[f64]) -> Vec<f64> {
    let mut u = x.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cumsum += uj;
        let t = (cumsum - 1.0) / (j + 1) as f64;
        if uj - t > 0.0 {
            theta = t;
        }
    }
    x.iter().map(|v| (v - theta).max(0.0)).collect()
}
