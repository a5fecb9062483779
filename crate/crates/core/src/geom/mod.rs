//! Exact lattice-polytope geometry.
//!
//! Everything here is computed over arbitrary-precision integers and
//! rationals: saturated lattice frames (the volume normalization), convex
//! hulls by exhaustive facet enumeration, lattice-normalized volumes via
//! recursive triangulation, Minkowski sums, and the generalized mixed
//! `s`-volume normalized by `V_s(K^s) = Vol_s(K)`. Ambient dimensions stay
//! in the single digits, so the brute-force methods are both adequate and
//! easy to trust.

#![allow(clippy::needless_range_loop)]

pub mod lp;

use crate::{Error, Int, Rat, Result};
use itertools::Itertools;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

// ---------------------------------------------------------------------------
// Small exact linear algebra
// ---------------------------------------------------------------------------

pub(crate) fn dot_int(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn sub_int(a: &[Int], b: &[Int]) -> Vec<Int> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Divide by the gcd of the entries; the zero vector stays zero.
pub fn primitive_vector(v: &[Int]) -> Vec<Int> {
    let mut g = Int::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Determinant of a square integer matrix (Bareiss, fraction-free).
pub fn det_int(mut m: Vec<Vec<Int>>) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = &v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Rank of an integer matrix over the rationals.
pub fn rank_int(rows: &[Vec<Int>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| r.iter().map(|v| Rat::from_integer(v.clone())).collect())
        .collect();
    rank_rat_in_place(&mut m, cols)
}

pub(crate) fn rank_rat(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m = rows.to_vec();
    rank_rat_in_place(&mut m, cols)
}

fn rank_rat_in_place(m: &mut [Vec<Rat>], cols: usize) -> usize {
    let mut rank = 0;
    let mut col = 0;
    while rank < m.len() && col < cols {
        let piv = (rank..m.len()).find(|&r| !m[r][col].is_zero());
        let Some(piv) = piv else {
            col += 1;
            continue;
        };
        m.swap(rank, piv);
        let p = m[rank][col].clone();
        for r in rank + 1..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for c in col..cols {
                let v = &m[rank][c] * &f;
                m[r][c] = &m[r][c] - &v;
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// Solve `A x = b` over the rationals (any solution). `None` when the
/// system is inconsistent; the caller is responsible for uniqueness.
pub(crate) fn solve_rat(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    if rows == 0 {
        return Some(Vec::new());
    }
    let cols = a[0].len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let piv = (rank..rows).find(|&r| !m[r][col].is_zero());
        let Some(piv) = piv else { continue };
        m.swap(rank, piv);
        let p = m[rank][col].clone();
        for c in col..=cols {
            m[rank][c] = &m[rank][c] / &p;
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=cols {
                    let v = &m[rank][c] * &f;
                    m[r][c] = &m[r][c] - &v;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    // Inconsistent if a zero row has nonzero rhs.
    for r in rank..rows {
        if !m[r][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); cols];
    for (r, &col) in pivots.iter().enumerate() {
        x[col] = m[r][cols].clone();
    }
    Some(x)
}

/// Lattice basis of `{ x ∈ Z^dim : r · x = 0 for every row r }`.
///
/// Unimodular column reduction of the stacked matrix; the result is a
/// basis of the full integer kernel, which is automatically saturated.
pub fn orthogonal_lattice(rows: &[Vec<Int>], dim: usize) -> Vec<Vec<Int>> {
    // Column j carries (a_j, w_j): the image column and the witness.
    let mut a: Vec<Vec<Int>> = (0..dim)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect();
    let mut w: Vec<Vec<Int>> = (0..dim)
        .map(|j| {
            (0..dim)
                .map(|i| if i == j { Int::one() } else { Int::zero() })
                .collect()
        })
        .collect();
    let nrows = rows.len();
    let mut fixed = 0;
    for i in 0..nrows {
        loop {
            // Among active columns, find the smallest nonzero entry in row i.
            let mut best: Option<usize> = None;
            for j in fixed..dim {
                if !a[j][i].is_zero() {
                    best = match best {
                        None => Some(j),
                        Some(k) if a[j][i].abs() < a[k][i].abs() => Some(j),
                        keep => keep,
                    };
                }
            }
            let Some(p) = best else { break };
            let mut done = true;
            for j in fixed..dim {
                if j == p || a[j][i].is_zero() {
                    continue;
                }
                let q = Int::from(&a[j][i] / &a[p][i]);
                if !q.is_zero() {
                    for r in 0..nrows {
                        let v = &a[p][r] * &q;
                        a[j][r] = &a[j][r] - &v;
                    }
                    for r in 0..dim {
                        let v = &w[p][r] * &q;
                        w[j][r] = &w[j][r] - &v;
                    }
                }
                if !a[j][i].is_zero() {
                    done = false;
                }
            }
            if done {
                a.swap(fixed, p);
                w.swap(fixed, p);
                fixed += 1;
                break;
            }
        }
    }
    w.drain(fixed..).collect()
}

// ---------------------------------------------------------------------------
// Saturated affine lattice frames
// ---------------------------------------------------------------------------

/// An affine frame for a rational affine subspace `L`: an origin together
/// with a basis of the saturated direction lattice `L₀ ∩ Z^D`. Expressing
/// lattice points of `L` in the frame yields integer coordinates, and the
/// basis parallelepiped has normalized volume one, which is exactly the
/// volume normalization used throughout.
#[derive(Clone, Debug)]
pub struct AffineLatticeFrame {
    pub origin: Vec<Rat>,
    pub basis: Vec<Vec<Int>>,
    pub ambient_dim: usize,
}

impl AffineLatticeFrame {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a rational point in the frame, or `None` when the
    /// point is outside the affine hull.
    pub fn coords(&self, p: &[Rat]) -> Option<Vec<Rat>> {
        let rhs: Vec<Rat> = p
            .iter()
            .zip(&self.origin)
            .map(|(a, b)| a - b)
            .collect();
        if self.basis.is_empty() {
            return if rhs.iter().all(|v| v.is_zero()) {
                Some(Vec::new())
            } else {
                None
            };
        }
        // Solve basisᵀ · x = rhs (ambient_dim equations, dim unknowns).
        let a: Vec<Vec<Rat>> = (0..self.ambient_dim)
            .map(|i| {
                self.basis
                    .iter()
                    .map(|b| Rat::from_integer(b[i].clone()))
                    .collect()
            })
            .collect();
        let x = solve_rat(&a, &rhs)?;
        // Check consistency (solve_rat only guarantees a solution of the
        // row-reduced system when the system is solvable).
        for i in 0..self.ambient_dim {
            if dot_rat(&a[i], &x) != rhs[i] {
                return None;
            }
        }
        Some(x)
    }

    /// Integer frame coordinates of a lattice point of the hull lattice.
    pub fn coords_int(&self, p: &[Int]) -> Option<Vec<Int>> {
        let pr: Vec<Rat> = p.iter().map(|v| Rat::from_integer(v.clone())).collect();
        let x = self.coords(&pr)?;
        let mut out = Vec::with_capacity(x.len());
        for v in x {
            if !v.denom().is_one() {
                return None;
            }
            out.push(v.numer().clone());
        }
        Some(out)
    }
}

/// Saturated frame of the affine hull of a set of lattice points.
pub fn saturated_frame(points: &[Vec<Int>]) -> Result<AffineLatticeFrame> {
    if points.is_empty() {
        return Err(Error::EmptySupport);
    }
    let prat: Vec<Vec<Rat>> = points
        .iter()
        .map(|p| p.iter().map(|v| Rat::from_integer(v.clone())).collect())
        .collect();
    saturated_frame_rat(&prat)
}

/// Saturated frame of the affine hull of a set of rational points. The
/// direction lattice is still `L₀ ∩ Z^D`, so rescaling a difference vector
/// to a primitive integer vector does not change the answer.
pub fn saturated_frame_rat(points: &[Vec<Rat>]) -> Result<AffineLatticeFrame> {
    if points.is_empty() {
        return Err(Error::EmptySupport);
    }
    let ambient_dim = points[0].len();
    let origin = points[0].clone();
    let mut diffs: Vec<Vec<Int>> = Vec::new();
    for p in &points[1..] {
        let d: Vec<Rat> = p.iter().zip(&origin).map(|(a, b)| a - b).collect();
        if d.iter().all(|v| v.is_zero()) {
            continue;
        }
        // Clear denominators and reduce: the rational span is unchanged.
        let mut lcm = Int::one();
        for v in &d {
            lcm = lcm.lcm(v.denom());
        }
        let scaled: Vec<Int> = d.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
        diffs.push(primitive_vector(&scaled));
    }
    if diffs.is_empty() {
        return Ok(AffineLatticeFrame {
            origin,
            basis: Vec::new(),
            ambient_dim,
        });
    }
    let normals = orthogonal_lattice(&diffs, ambient_dim);
    let basis = orthogonal_lattice(&normals, ambient_dim);
    Ok(AffineLatticeFrame {
        origin,
        basis,
        ambient_dim,
    })
}

// ---------------------------------------------------------------------------
// Hulls of full-dimensional integer point sets
// ---------------------------------------------------------------------------

/// A facet `{ x : normal · x = offset }` of a full-dimensional hull, with
/// `normal · p ≥ offset` for every input point. The normal is a primitive
/// integer vector; `on` lists the indices of all input points on the facet.
#[derive(Clone, Debug)]
pub(crate) struct IntFacet {
    pub normal: Vec<Int>,
    pub offset: Int,
    pub on: Vec<usize>,
}

/// Hyperplane through `s` affinely independent points of `Z^s` via the
/// generalized cross product; `None` for degenerate tuples.
fn cross_normal(pts: &[&Vec<Int>]) -> Option<(Vec<Int>, Int)> {
    let s = pts.len();
    debug_assert!(s >= 1);
    let diffs: Vec<Vec<Int>> = pts[1..].iter().map(|p| sub_int(p, pts[0])).collect();
    let mut normal = Vec::with_capacity(s);
    for j in 0..s {
        let minor: Vec<Vec<Int>> = diffs
            .iter()
            .map(|d| {
                d.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let m = det_int(minor);
        normal.push(if j % 2 == 0 { m } else { -m });
    }
    if normal.iter().all(|v| v.is_zero()) {
        return None;
    }
    let normal = primitive_vector(&normal);
    let offset = dot_int(&normal, pts[0]);
    Some((normal, offset))
}

/// All facets of the convex hull of a full-dimensional set of points in
/// `Z^s`, by exhaustive hyperplane enumeration over `s`-subsets.
pub(crate) fn hull_facets(points: &[Vec<Int>], s: usize) -> Vec<IntFacet> {
    assert!(s >= 1, "facet enumeration needs dimension >= 1");
    let mut seen: BTreeSet<(Vec<Int>, Int)> = BTreeSet::new();
    for subset in (0..points.len()).combinations(s) {
        let pts: Vec<&Vec<Int>> = subset.iter().map(|&i| &points[i]).collect();
        let Some((normal, offset)) = cross_normal(&pts) else {
            continue;
        };
        let mut above = false;
        let mut below = false;
        for p in points {
            match dot_int(&normal, p).cmp(&offset) {
                std::cmp::Ordering::Greater => above = true,
                std::cmp::Ordering::Less => below = true,
                std::cmp::Ordering::Equal => {}
            }
            if above && below {
                break;
            }
        }
        if above && below {
            continue;
        }
        let (normal, offset) = if below {
            (normal.iter().map(|v| -v).collect(), -offset)
        } else {
            (normal, offset)
        };
        seen.insert((normal, offset));
    }
    let mut out = Vec::new();
    for (normal, offset) in seen {
        let on: Vec<usize> = points
            .iter()
            .enumerate()
            .filter(|(_, p)| dot_int(&normal, p) == offset)
            .map(|(i, _)| i)
            .collect();
        // A true facet spans the hyperplane.
        let on_pts: Vec<Vec<Int>> = on.iter().map(|&i| sub_int(&points[i], &points[on[0]])).collect();
        if rank_int(&on_pts) == s - 1 {
            out.push(IntFacet { normal, offset, on });
        }
    }
    out
}

/// Indices of the vertices of the hull of a full-dimensional point set:
/// the points whose incident facet normals span the whole space.
pub(crate) fn hull_vertex_indices(points: &[Vec<Int>], s: usize, facets: &[IntFacet]) -> Vec<usize> {
    if s == 0 {
        return vec![0];
    }
    let mut verts = Vec::new();
    for (i, _) in points.iter().enumerate() {
        let normals: Vec<Vec<Int>> = facets
            .iter()
            .filter(|f| f.on.contains(&i))
            .map(|f| f.normal.clone())
            .collect();
        if rank_int(&normals) == s {
            verts.push(i);
        }
    }
    verts
}

/// Triangulate the hull of a full-dimensional point set in `Z^s` into
/// `s`-simplices, returned as index lists. Deterministic: cone from the
/// lexicographically smallest point over recursively triangulated facets.
pub(crate) fn triangulate_points(points: &[Vec<Int>], s: usize) -> Vec<Vec<usize>> {
    if s == 0 {
        return vec![vec![0]];
    }
    if s == 1 {
        let min = (0..points.len()).min_by_key(|&i| points[i].clone()).unwrap();
        let max = (0..points.len()).max_by_key(|&i| points[i].clone()).unwrap();
        return vec![vec![min, max]];
    }
    let apex = (0..points.len()).min_by_key(|&i| points[i].clone()).unwrap();
    let mut facets = hull_facets(points, s);
    facets.sort_by(|a, b| (&a.normal, &a.offset).cmp(&(&b.normal, &b.offset)));
    let mut cells = Vec::new();
    for f in &facets {
        if dot_int(&f.normal, &points[apex]) == f.offset {
            continue;
        }
        // Project the facet along a coordinate its normal does not
        // annihilate; this is an affine bijection of the hyperplane.
        let drop = f
            .normal
            .iter()
            .position(|v| !v.is_zero())
            .expect("nonzero normal");
        let sub_points: Vec<Vec<Int>> = f
            .on
            .iter()
            .map(|&i| {
                points[i]
                    .iter()
                    .enumerate()
                    .filter(|(c, _)| *c != drop)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        for cell in triangulate_points(&sub_points, s - 1) {
            let mut simplex: Vec<usize> = cell.iter().map(|&k| f.on[k]).collect();
            simplex.push(apex);
            cells.push(simplex);
        }
    }
    cells
}

/// Euclidean `s`-volume of the hull of a full-dimensional point set in
/// `Z^s` (which is the lattice-normalized volume in frame coordinates).
pub(crate) fn volume_lattice(points: &[Vec<Int>], s: usize) -> Rat {
    if s == 0 {
        return Rat::one();
    }
    let mut dedup = points.to_vec();
    dedup.sort();
    dedup.dedup();
    if dedup.len() <= s {
        return Rat::zero();
    }
    let mut total = Int::zero();
    if dedup.len() == s + 1 {
        let m: Vec<Vec<Int>> = dedup[1..].iter().map(|p| sub_int(p, &dedup[0])).collect();
        total = det_int(m).abs();
    } else {
        for cell in triangulate_points(&dedup, s) {
            let base = &dedup[cell[0]];
            let m: Vec<Vec<Int>> = cell[1..].iter().map(|&i| sub_int(&dedup[i], base)).collect();
            total += det_int(m).abs();
        }
    }
    let mut fact = Int::one();
    for k in 2..=s {
        fact *= Int::from(k);
    }
    Rat::new(total, fact)
}

// ---------------------------------------------------------------------------
// Rational polytopes
// ---------------------------------------------------------------------------

/// A polytope given by its irredundant vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolytope {
    vertices: Vec<Vec<Rat>>,
    ambient_dim: usize,
}

impl RationalPolytope {
    /// Build directly from a known vertex set. The points are deduplicated
    /// and sorted but trusted to be extreme; use [`convex_hull`] otherwise.
    pub fn from_vertex_set(vertices: Vec<Vec<Rat>>) -> Self {
        assert!(!vertices.is_empty(), "polytope needs at least one vertex");
        let ambient_dim = vertices[0].len();
        let mut vertices = vertices;
        vertices.sort();
        vertices.dedup();
        RationalPolytope {
            vertices,
            ambient_dim,
        }
    }

    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Dimension of the affine hull.
    pub fn dim(&self) -> usize {
        saturated_frame_rat(&self.vertices)
            .expect("nonempty polytope")
            .dim()
    }

    /// Translate by a rational vector.
    pub fn translate(&self, t: &[Rat]) -> RationalPolytope {
        RationalPolytope {
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().zip(t).map(|(a, b)| a + b).collect())
                .collect(),
            ambient_dim: self.ambient_dim,
        }
    }

    /// Dilate by a nonnegative integer factor.
    pub fn dilate(&self, k: &Int) -> RationalPolytope {
        let kr = Rat::from_integer(k.clone());
        RationalPolytope {
            vertices: if k.is_zero() {
                vec![vec![Rat::zero(); self.ambient_dim]]
            } else {
                self.vertices
                    .iter()
                    .map(|v| v.iter().map(|a| a * &kr).collect())
                    .collect()
            },
            ambient_dim: self.ambient_dim,
        }
    }

    /// Exact membership: inside the affine hull and on the inner side of
    /// every facet.
    pub fn contains(&self, point: &[Rat]) -> bool {
        if point.len() != self.ambient_dim {
            return false;
        }
        let frame = saturated_frame_rat(&self.vertices).expect("nonempty polytope");
        let Some(coords) = frame.coords(point) else {
            return false;
        };
        let s = frame.dim();
        if s == 0 {
            return true;
        }
        let mut in_frame: Vec<Vec<Rat>> = self
            .vertices
            .iter()
            .map(|v| frame.coords(v).expect("vertex in own hull"))
            .collect();
        in_frame.push(coords);
        let (scaled, _) = scale_to_int(&in_frame);
        let target = scaled.last().expect("just pushed").clone();
        let hull_pts = &scaled[..scaled.len() - 1];
        if s == 1 {
            let min = hull_pts.iter().min().expect("nonempty");
            let max = hull_pts.iter().max().expect("nonempty");
            return *min <= target && target <= *max;
        }
        hull_facets(hull_pts, s)
            .iter()
            .all(|f| dot_int(&f.normal, &target) >= f.offset)
    }
}

/// Scale a rational point set to integers; returns the scaled points and
/// the common denominator λ, so `points = scaled / λ`.
fn scale_to_int(points: &[Vec<Rat>]) -> (Vec<Vec<Int>>, Int) {
    let mut lambda = Int::one();
    for p in points {
        for v in p {
            lambda = lambda.lcm(v.denom());
        }
    }
    let scaled = points
        .iter()
        .map(|p| {
            p.iter()
                .map(|v| v.numer() * (&lambda / v.denom()))
                .collect()
        })
        .collect();
    (scaled, lambda)
}

/// Convex hull: the irredundant vertex set of a finite rational point set,
/// in sorted order.
pub fn convex_hull(points: &[Vec<Rat>]) -> Result<RationalPolytope> {
    if points.is_empty() {
        return Err(Error::EmptySupport);
    }
    let ambient_dim = points[0].len();
    for p in points {
        if p.len() != ambient_dim {
            return Err(Error::DimensionMismatch(ambient_dim, p.len()));
        }
    }
    let mut dedup = points.to_vec();
    dedup.sort();
    dedup.dedup();
    let frame = saturated_frame_rat(&dedup)?;
    let s = frame.dim();
    if s == 0 {
        return Ok(RationalPolytope {
            vertices: dedup,
            ambient_dim,
        });
    }
    let in_frame: Vec<Vec<Rat>> = dedup
        .iter()
        .map(|p| frame.coords(p).expect("point in own affine hull"))
        .collect();
    let (scaled, _) = scale_to_int(&in_frame);
    let vertex_idx = if s == 1 {
        let min = (0..scaled.len()).min_by_key(|&i| scaled[i].clone()).unwrap();
        let max = (0..scaled.len()).max_by_key(|&i| scaled[i].clone()).unwrap();
        vec![min, max]
    } else {
        let facets = hull_facets(&scaled, s);
        hull_vertex_indices(&scaled, s, &facets)
    };
    let mut vertices: Vec<Vec<Rat>> = vertex_idx.into_iter().map(|i| dedup[i].clone()).collect();
    vertices.sort();
    vertices.dedup();
    Ok(RationalPolytope {
        vertices,
        ambient_dim,
    })
}

/// Lattice-normalized volume `Vol_s(P)` for `s = dim P`, computed in the
/// saturated frame of the affine hull. Points have volume one.
pub fn normalized_volume(p: &RationalPolytope) -> Rat {
    let frame = saturated_frame_rat(&p.vertices).expect("nonempty polytope");
    let s = frame.dim();
    if s == 0 {
        return Rat::one();
    }
    let in_frame: Vec<Vec<Rat>> = p
        .vertices
        .iter()
        .map(|v| frame.coords(v).expect("vertex in own hull"))
        .collect();
    let (scaled, lambda) = scale_to_int(&in_frame);
    let vol = volume_lattice(&scaled, s);
    let mut scale = Rat::one();
    let lr = Rat::from_integer(lambda);
    for _ in 0..s {
        scale *= &lr;
    }
    vol / scale
}

/// `s`-dimensional normalized volume of a polytope of any dimension:
/// zero unless `dim P = s`.
pub fn volume_s(p: &RationalPolytope, s: usize) -> Rat {
    if p.dim() != s {
        return Rat::zero();
    }
    normalized_volume(p)
}

/// Minkowski sum: the hull of pairwise vertex sums.
pub fn minkowski_sum(p: &RationalPolytope, q: &RationalPolytope) -> Result<RationalPolytope> {
    if p.ambient_dim != q.ambient_dim {
        return Err(Error::DimensionMismatch(p.ambient_dim, q.ambient_dim));
    }
    let mut sums = Vec::with_capacity(p.vertices.len() * q.vertices.len());
    for a in &p.vertices {
        for b in &q.vertices {
            sums.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
        }
    }
    convex_hull(&sums)
}

/// Generalized mixed `s`-volume with the normalization `V_s(K^s) = Vol_s(K)`.
///
/// Bodies are given with multiplicities summing to `s`. When no translates
/// of the bodies fit in a common rational `s`-plane every term vanishes and
/// the result is zero. Evaluated by inclusion–exclusion over sub-multisets,
/// with repeated bodies collapsed into dilations:
///
/// `s!·V_s = Σ (−1)^{s−Σa_i} Π C(m_i, a_i) · Vol_s(Σ a_i·K_i)`.
pub fn mixed_volume(bodies: &[(RationalPolytope, usize)], s: usize) -> Result<Rat> {
    let total: usize = bodies.iter().map(|(_, m)| m).sum();
    if total != s {
        return Err(Error::BadMultiplicities(total, s));
    }
    if s == 0 {
        return Ok(Rat::one());
    }
    let active: Vec<&(RationalPolytope, usize)> =
        bodies.iter().filter(|(_, m)| *m > 0).collect();
    // A point slot contributes nothing in any coordinate of multilinearity.
    if active.iter().any(|(b, _)| b.vertices.len() == 1) {
        return Ok(Rat::zero());
    }
    // Direction span of all bodies together; more than s-dimensional means
    // no common s-plane and a vanishing mixed volume.
    let mut diffs: Vec<Vec<Rat>> = Vec::new();
    for (b, _) in &active {
        let base = &b.vertices[0];
        for v in &b.vertices[1..] {
            diffs.push(v.iter().zip(base).map(|(a, c)| a - c).collect());
        }
    }
    if rank_rat(&diffs) > s {
        return Ok(Rat::zero());
    }

    let t = active.len();
    let mut counters = vec![0usize; t];
    let mut acc = Rat::zero();
    loop {
        // Advance the mixed radix counter over 0..=m_i.
        let mut k = 0;
        while k < t {
            counters[k] += 1;
            if counters[k] <= active[k].1 {
                break;
            }
            counters[k] = 0;
            k += 1;
        }
        if k == t {
            break;
        }
        let picked: usize = counters.iter().sum();
        // Minkowski sum of the dilated sub-multiset.
        let mut sum: Option<RationalPolytope> = None;
        for (i, &a) in counters.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let dilated = active[i].0.dilate(&Int::from(a));
            sum = Some(match sum {
                None => dilated,
                Some(acc) => minkowski_sum(&acc, &dilated)?,
            });
        }
        let vol = volume_s(&sum.expect("picked > 0"), s);
        if vol.is_zero() {
            continue;
        }
        let mut weight = Int::one();
        for (i, &a) in counters.iter().enumerate() {
            weight *= binomial(active[i].1, a);
        }
        let sign = if (s - picked).is_multiple_of(2) { 1 } else { -1 };
        acc += vol * Rat::from_integer(weight * Int::from(sign));
    }
    let mut fact = Int::one();
    for k in 2..=s {
        fact *= Int::from(k);
    }
    Ok(acc / Rat::from_integer(fact))
}

pub(crate) fn binomial(n: usize, k: usize) -> Int {
    if k > n {
        return Int::zero();
    }
    let mut num = Int::one();
    let mut den = Int::one();
    for i in 0..k.min(n - k) {
        num *= Int::from(n - i);
        den *= Int::from(i + 1);
    }
    num / den
}

/// All lattice points in the box `[lo, hi]` satisfying the predicate,
/// in lexicographic order.
pub fn lattice_points_in(
    lo: &[Int],
    hi: &[Int],
    pred: impl Fn(&[Int]) -> bool,
) -> Vec<Vec<Int>> {
    let dim = lo.len();
    assert_eq!(dim, hi.len());
    let mut out = Vec::new();
    if dim == 0 {
        return out;
    }
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return out;
    }
    let mut cur: Vec<Int> = lo.to_vec();
    loop {
        if pred(&cur) {
            out.push(cur.clone());
        }
        // Lexicographic increment from the last coordinate.
        let mut k = dim;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] <= hi[k] {
                break;
            }
            cur[k] = lo[k].clone();
        }
    }
}
