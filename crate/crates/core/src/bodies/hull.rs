//! Polytope bookkeeping: extreme-point pruning, affine hulls, facet and
//! vertex enumeration in low dimension, and Wolfe's minimum-norm point.

use super::Facet;
use crate::error::{Error, Result};
use crate::linalg::real::{self, dot, norm, sub};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use alloc::vec;
use alloc::vec::Vec;

/// Affine hull `centroid + span(basis)` of a point set, basis orthonormal.
#[derive(Clone, Debug)]
pub struct AffineHull {
    pub centroid: Vec<f64>,
    pub basis: Vec<Vec<f64>>,
    /// Orthonormal basis of the complement of `basis`.
    pub normals: Vec<Vec<f64>>,
}

impl AffineHull {
    pub fn of(points: &[Vec<f64>]) -> Self {
        let dim = points[0].len();
        let m = points.len() as f64;
        let mut centroid = vec![0.0; dim];
        for p in points {
            for (c, x) in centroid.iter_mut().zip(p) {
                *c += x / m;
            }
        }
        let spread = points.iter().map(|p| real::dist(p, &centroid)).fold(0.0, f64::max);
        let diffs: Vec<Vec<f64>> = points.iter().map(|p| sub(p, &centroid)).collect();
        let basis = real::gram_schmidt(&diffs, 1e-9 * spread.max(1e-300));
        let mut all = basis.clone();
        all.extend((0..dim).map(|i| real::unit(dim, i)));
        let normals = real::gram_schmidt(&all, 1e-9).split_off(basis.len());
        AffineHull { centroid, basis, normals }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let y = sub(x, &self.centroid);
        self.basis.iter().map(|b| dot(b, &y)).collect()
    }

    /// Distance from `x` to the affine hull.
    pub fn offset(&self, x: &[f64]) -> f64 {
        let y = sub(x, &self.centroid);
        norm(&self.normals.iter().map(|n| dot(n, &y)).collect::<Vec<_>>())
    }

    /// Ambient facet from a hull-coordinate facet `n·y ≤ c`.
    fn lift(&self, n: &[f64], c: f64) -> Facet {
        let mut a = vec![0.0; self.centroid.len()];
        for (ni, b) in n.iter().zip(&self.basis) {
            a = real::axpy(&a, *ni, b);
        }
        let b = c + dot(&a, &self.centroid);
        Facet { a, b }
    }
}

/// `x ∈ conv(points)` feasibility by LP.
pub fn in_hull(points: &[Vec<f64>], x: &[f64], tol: f64) -> Result<bool> {
    if points.is_empty() {
        return Ok(false);
    }
    let m = points.len();
    let dim = x.len();
    // Minimize the total residual slack to stay robust to round-off.
    let mut obj = vec![0.0; m];
    obj.extend(vec![1.0; 2 * dim]);
    let mut lp = LinearProgram::minimize(obj);
    for i in 0..dim {
        let mut row: Vec<f64> = points.iter().map(|p| p[i]).collect();
        row.extend(vec![0.0; 2 * dim]);
        row[m + 2 * i] = 1.0;
        row[m + 2 * i + 1] = -1.0;
        lp.constrain(row, Relation::Eq, x[i])?;
    }
    let mut ones = vec![1.0; m];
    ones.extend(vec![0.0; 2 * dim]);
    lp.constrain(ones, Relation::Eq, 1.0)?;
    match lp.solve()? {
        LpOutcome::Optimal { value, .. } => Ok(value <= tol),
        _ => Ok(false),
    }
}

/// Removes duplicates and points inside the hull of the others, keeping the
/// original order of the survivors.
pub fn prune_to_extreme(points: Vec<Vec<f64>>, tol: f64) -> Result<Vec<Vec<f64>>> {
    let mut unique: Vec<Vec<f64>> = Vec::new();
    for p in points {
        if !unique.iter().any(|q| real::dist(q, &p) <= tol) {
            unique.push(p);
        }
    }
    if unique.len() <= 2 {
        return Ok(unique);
    }
    let scale = unique.iter().map(|p| norm(p)).fold(1.0, f64::max);
    let mut keep = vec![true; unique.len()];
    for i in 0..unique.len() {
        let others: Vec<Vec<f64>> = unique
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i && keep[j])
            .map(|(_, p)| p.clone())
            .collect();
        if in_hull(&others, &unique[i], tol * scale)? {
            keep[i] = false;
        }
    }
    Ok(unique.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect())
}

/// Facets of `conv(points)` when its affine dimension is at most 3; the
/// affine hull contributes pairs of opposite equality facets.
pub fn enumerate_facets(points: &[Vec<f64>]) -> Option<Vec<Facet>> {
    let hull = AffineHull::of(points);
    let k = hull.dim();
    let local: Vec<Vec<f64>> = points.iter().map(|p| hull.project(p)).collect();
    let mut facets: Vec<Facet> = match k {
        0 => Vec::new(),
        1 => {
            let hi = local.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
            let lo = local.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
            vec![hull.lift(&[1.0], hi), hull.lift(&[-1.0], -lo)]
        }
        2 => polygon_edges(&local).into_iter().map(|(n, c)| hull.lift(&n, c)).collect(),
        3 => polyhedron_faces(&local).into_iter().map(|(n, c)| hull.lift(&n, c)).collect(),
        _ => return None,
    };
    for n in &hull.normals {
        let c = dot(n, &hull.centroid);
        facets.push(Facet { a: n.clone(), b: c });
        facets.push(Facet { a: real::scale(n, -1.0), b: -c });
    }
    Some(facets)
}

/// Counter-clockwise convex hull (Andrew's monotone chain) of planar points.
pub fn convex_hull_2d(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut pts: Vec<Vec<f64>> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup_by(|a, b| real::dist(a, b) < 1e-14);
    if pts.len() < 3 {
        return pts;
    }
    let scale = pts.iter().map(|p| norm(p)).fold(1.0, f64::max);
    let eps = 1e-12 * scale * scale;
    let cross = |o: &[f64], a: &[f64], b: &[f64]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<Vec<f64>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= eps {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<f64>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= eps {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn polygon_edges(points: &[Vec<f64>]) -> Vec<(Vec<f64>, f64)> {
    let hull = convex_hull_2d(points);
    let m = hull.len();
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let (p, q) = (&hull[i], &hull[(i + 1) % m]);
        let e = sub(q, p);
        // Outward normal of a counter-clockwise edge.
        let n = vec![e[1], -e[0]];
        let l = norm(&n);
        let n = real::scale(&n, 1.0 / l);
        out.push((n.clone(), dot(&n, p)));
    }
    out
}

fn polyhedron_faces(points: &[Vec<f64>]) -> Vec<(Vec<f64>, f64)> {
    let m = points.len();
    let scale = points.iter().map(|p| norm(p)).fold(1.0, f64::max);
    let eps = 1e-10 * scale;
    let mut out: Vec<(Vec<f64>, f64)> = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            for l in (j + 1)..m {
                let u = sub(&points[j], &points[i]);
                let v = sub(&points[l], &points[i]);
                let n = vec![
                    u[1] * v[2] - u[2] * v[1],
                    u[2] * v[0] - u[0] * v[2],
                    u[0] * v[1] - u[1] * v[0],
                ];
                let len = norm(&n);
                if len <= 1e-12 * scale * scale {
                    continue;
                }
                let mut n = real::scale(&n, 1.0 / len);
                let mut c = dot(&n, &points[i]);
                let above = points.iter().any(|p| dot(&n, p) > c + eps);
                let below = points.iter().any(|p| dot(&n, p) < c - eps);
                if above && below {
                    continue;
                }
                if above {
                    n = real::scale(&n, -1.0);
                    c = -c;
                }
                if !out.iter().any(|(n2, c2)| real::dist(n2, &n) < 1e-9 && (c2 - c).abs() < eps) {
                    out.push((n, c));
                }
            }
        }
    }
    out
}

/// Vertices of the bounded polyhedron `{x : a·x ≤ b}` by brute force over
/// `dim`-subsets of facets.
pub fn enumerate_vertices(facets: &[Facet], dim: usize) -> Result<Vec<Vec<f64>>> {
    if facets.len() < dim + 1 && dim > 0 {
        return Err(Error::InvalidBody("too few facets for a bounded polytope".into()));
    }
    let scale = facets.iter().map(|f| f.b.abs()).fold(1.0, f64::max);
    let mut found: Vec<Vec<f64>> = Vec::new();
    for subset in Combinations::new(facets.len(), dim) {
        let a: Vec<Vec<f64>> = subset.iter().map(|&i| facets[i].a.clone()).collect();
        let b: Vec<f64> = subset.iter().map(|&i| facets[i].b).collect();
        let Some(x) = real::solve(&a, &b, 1e-12) else { continue };
        if facets.iter().all(|f| dot(&f.a, &x) <= f.b + 1e-9 * scale)
            && !found.iter().any(|q| real::dist(q, &x) <= 1e-9 * scale)
        {
            found.push(x);
        }
    }
    if found.is_empty() {
        return Err(Error::InvalidBody("H-polytope is empty or unbounded".into()));
    }
    Ok(found)
}

/// Lexicographic `k`-subsets of `0..n`.
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = if k <= n { Some((0..k).collect()) } else { None };
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in (i + 1)..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// Wolfe's algorithm: the point of `conv(points)` closest to the origin,
/// with its convex weights.
pub fn min_norm_point(points: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let m = points.len();
    let scale = points.iter().map(|p| dot(p, p)).fold(0.0, f64::max).max(1e-300);
    let start = (0..m).min_by(|&i, &j| dot(&points[i], &points[i]).total_cmp(&dot(&points[j], &points[j]))).unwrap();
    let mut set = vec![start];
    let mut lambda = vec![1.0];
    let mut x = points[start].clone();
    for _ in 0..(50 * m + 100) {
        let j = (0..m).min_by(|&a, &b| dot(&points[a], &x).total_cmp(&dot(&points[b], &x))).unwrap();
        if dot(&x, &x) - dot(&x, &points[j]) <= 1e-14 * scale || set.contains(&j) {
            break;
        }
        set.push(j);
        lambda.push(0.0);
        while let Some(alpha) = affine_minimizer(points, &set) {
            if alpha.iter().all(|&a| a > 1e-14) {
                lambda = alpha;
                break;
            }
            let mut theta = 1.0f64;
            for (l, a) in lambda.iter().zip(&alpha) {
                if *a <= 1e-14 && l - a > 0.0 {
                    theta = theta.min(l / (l - a));
                }
            }
            for (l, a) in lambda.iter_mut().zip(&alpha) {
                *l = theta * a + (1.0 - theta) * *l;
            }
            let mut k = 0;
            while k < set.len() {
                if lambda[k] <= 1e-14 {
                    set.remove(k);
                    lambda.remove(k);
                } else {
                    k += 1;
                }
            }
            let total: f64 = lambda.iter().sum();
            lambda.iter_mut().for_each(|l| *l /= total);
            if set.len() <= 1 {
                break;
            }
        }
        x = combine(points, &set, &lambda);
    }
    let mut weights = vec![0.0; m];
    for (&i, &l) in set.iter().zip(&lambda) {
        weights[i] = l;
    }
    (x, weights)
}

fn combine(points: &[Vec<f64>], set: &[usize], lambda: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; points[0].len()];
    for (&i, &l) in set.iter().zip(lambda) {
        x = real::axpy(&x, l, &points[i]);
    }
    x
}

fn affine_minimizer(points: &[Vec<f64>], set: &[usize]) -> Option<Vec<f64>> {
    let k = set.len();
    let mut a = vec![vec![0.0; k + 1]; k + 1];
    for r in 0..k {
        for c in 0..k {
            a[r][c] = dot(&points[set[r]], &points[set[c]]);
        }
        a[r][k] = 1.0;
        a[k][r] = 1.0;
    }
    let mut b = vec![0.0; k + 1];
    b[k] = 1.0;
    let sol = real::solve(&a, &b, 1e-15)?;
    Some(sol[..k].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<Vec<f64>> {
        vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]
    }

    #[test]
    fn prunes_interior_and_duplicates() {
        let mut pts = square();
        pts.push(vec![0.5, 0.5]);
        pts.push(vec![1.0, 0.0]);
        pts.push(vec![0.5, 0.0]);
        assert_eq!(prune_to_extreme(pts, 1e-10).unwrap(), square());
    }

    #[test]
    fn square_facets() {
        let f = enumerate_facets(&square()).unwrap();
        assert_eq!(f.len(), 4);
        for v in square() {
            assert!(f.iter().all(|f| dot(&f.a, &v) <= f.b + 1e-12));
        }
        assert!(f.iter().any(|f| dot(&f.a, &[0.5, 1.2]) > f.b));
    }

    #[test]
    fn cube_faces_and_degenerate_hulls() {
        let mut cube = Vec::new();
        for k in 0..8 {
            cube.push(vec![(k & 1) as f64, ((k >> 1) & 1) as f64, ((k >> 2) & 1) as f64]);
        }
        assert_eq!(enumerate_facets(&cube).unwrap().len(), 6);
        // A segment in the plane: two end facets plus an equality pair.
        let seg = vec![vec![1.0, 3.0], vec![2.0, 4.0]];
        assert_eq!(enumerate_facets(&seg).unwrap().len(), 4);
    }

    #[test]
    fn h_to_v_round_trip() {
        let facets = enumerate_facets(&square()).unwrap();
        let mut v = enumerate_vertices(&facets, 2).unwrap();
        v.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        assert_eq!(v.len(), 4);
        assert!(real::dist(&v[3], &[1.0, 1.0]) < 1e-12);
    }

    #[test]
    fn wolfe_distance() {
        let shifted: Vec<Vec<f64>> = square().iter().map(|p| sub(p, &[2.0, 0.5])).collect();
        let (x, w) = min_norm_point(&shifted);
        assert!((norm(&x) - 1.0).abs() < 1e-12);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let inside: Vec<Vec<f64>> = square().iter().map(|p| sub(p, &[0.3, 0.6])).collect();
        assert!(norm(&min_norm_point(&inside).0) < 1e-12);
    }

    #[test]
    fn combinations_count() {
        assert_eq!(Combinations::new(5, 2).count(), 10);
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
    }
}
