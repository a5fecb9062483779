//! Newton diagrams: the face structure of the Newton polyhedron of a
//! support set and of all its coordinate sub-polyhedra.
//!
//! The compact faces of `Γ₊(f)` are exactly the faces of the polytope
//! spanned by the support points whose closed normal cone contains a
//! strictly positive vector, and a face of a coordinate sub-polyhedron is
//! always such a face as well (an `∞` weight entry can be simulated by a
//! sufficiently large finite one). So a single hull computation plus one
//! feasibility test per candidate face enumerates every face of every
//! sub-diagram.
//!
//! A face `K` carries `I_K`, the set of coordinates not identically zero
//! on it. It is a *coordinate facet* when `dim K = |I_K| − 1`; these are
//! the faces with a unique primitive integral normal (finite positive on
//! `I_K`, `∞` outside), the weights `m = ∧_f v`, `n = ∧_g v`, and they are
//! the only faces that contribute to Newton numbers.

use crate::geom::{
    self,
    lp::{self, Constraint, Rel},
};
use crate::kn::ExtNat;
use crate::{Error, Int, Rat, Result};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;

// ---------------------------------------------------------------------------
// Support sets
// ---------------------------------------------------------------------------

/// The support of a power series: a finite set of lattice points in the
/// nonnegative orthant, none of them the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportSet {
    num_vars: usize,
    points: Vec<Vec<Int>>,
}

impl SupportSet {
    pub fn new(num_vars: usize, points: Vec<Vec<Int>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySupport);
        }
        let mut cleaned: Vec<Vec<Int>> = Vec::with_capacity(points.len());
        for p in points {
            if p.len() != num_vars {
                return Err(Error::BadSupportPoint(
                    format_point(&p),
                    format!("expected {num_vars} coordinates"),
                ));
            }
            if p.iter().any(|v| v.is_negative()) {
                return Err(Error::BadSupportPoint(
                    format_point(&p),
                    "negative exponent".into(),
                ));
            }
            if p.iter().all(|v| v.is_zero()) {
                return Err(Error::BadSupportPoint(
                    format_point(&p),
                    "the origin cannot support a function vanishing at 0".into(),
                ));
            }
            cleaned.push(p);
        }
        cleaned.sort();
        cleaned.dedup();
        Ok(SupportSet {
            num_vars,
            points: cleaned,
        })
    }

    /// Convenience constructor from machine integers.
    pub fn from_rows(rows: &[&[i64]]) -> Result<Self> {
        let num_vars = rows.first().map_or(0, |r| r.len());
        SupportSet::new(
            num_vars,
            rows.iter()
                .map(|r| r.iter().map(|&v| Int::from(v)).collect())
                .collect(),
        )
    }

    /// Number of variables `n+1`.
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn points(&self) -> &[Vec<Int>] {
        &self.points
    }

    /// The multiplicity: minimal total degree of a support point.
    pub fn multiplicity(&self) -> Int {
        self.points
            .iter()
            .map(|p| p.iter().sum::<Int>())
            .min()
            .expect("support is nonempty")
    }

    /// Support of the product with another series: pointwise sums.
    pub fn product(&self, other: &SupportSet) -> Result<SupportSet> {
        if self.num_vars != other.num_vars {
            return Err(Error::DimensionMismatch(self.num_vars, other.num_vars));
        }
        let mut sums = Vec::with_capacity(self.points.len() * other.points.len());
        for a in &self.points {
            for b in &other.points {
                sums.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        SupportSet::new(self.num_vars, sums)
    }

    /// Support of a generic linear form: the standard basis points.
    pub fn generic_linear(num_vars: usize) -> SupportSet {
        let points = (0..num_vars)
            .map(|i| {
                (0..num_vars)
                    .map(|j| if i == j { Int::one() } else { Int::zero() })
                    .collect()
            })
            .collect();
        SupportSet { num_vars, points }
    }

    /// `∧_f v = min_{Γ₊(f)} v`, with `∞·0 = 0`; `∞` when every support
    /// point meets an `∞` coordinate of `v`.
    pub fn wedge(&self, v: &WeightVector) -> ExtNat {
        let mut best: Option<Int> = None;
        for p in &self.points {
            let mut acc = Int::zero();
            let mut infinite = false;
            for (u, w) in p.iter().zip(v.entries()) {
                match w {
                    ExtNat::Finite(wv) => acc += u * wv,
                    ExtNat::Infinity => {
                        if !u.is_zero() {
                            infinite = true;
                            break;
                        }
                    }
                }
            }
            if !infinite {
                best = Some(match best {
                    None => acc,
                    Some(b) => b.min(acc),
                });
            }
        }
        match best {
            Some(b) => ExtNat::Finite(b),
            None => ExtNat::Infinity,
        }
    }
}

fn format_point(p: &[Int]) -> String {
    let inner: Vec<String> = p.iter().map(|v| v.to_string()).collect();
    format!("({})", inner.join(","))
}

// ---------------------------------------------------------------------------
// Weight vectors
// ---------------------------------------------------------------------------

/// A primitive weight vector: entries in the positive integers or `∞`,
/// at least one finite, the finite entries coprime. The set of `∞`
/// entries is its (refined) sedentarity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    entries: Vec<ExtNat>,
}

impl WeightVector {
    /// Build a weight vector; finite entries are normalized by their gcd
    /// so the result is primitive.
    pub fn new(entries: Vec<ExtNat>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::BadWeightVector("()".into(), "empty".into()));
        }
        let mut gcd = Int::zero();
        let mut finite = 0usize;
        for e in &entries {
            match e {
                ExtNat::Finite(v) => {
                    if !v.is_positive() {
                        return Err(Error::BadWeightVector(
                            format_weights(&entries),
                            "entries must be positive".into(),
                        ));
                    }
                    gcd = num_integer::Integer::gcd(&gcd, v);
                    finite += 1;
                }
                ExtNat::Infinity => {}
            }
        }
        if finite == 0 {
            return Err(Error::BadWeightVector(
                format_weights(&entries),
                "at least one entry must be finite".into(),
            ));
        }
        let entries = if gcd.is_one() {
            entries
        } else {
            entries
                .into_iter()
                .map(|e| match e {
                    ExtNat::Finite(v) => ExtNat::Finite(v / &gcd),
                    ExtNat::Infinity => ExtNat::Infinity,
                })
                .collect()
        };
        Ok(WeightVector { entries })
    }

    /// Finite-entry helper.
    pub fn from_ints(entries: &[i64]) -> Result<Self> {
        WeightVector::new(entries.iter().map(|&v| ExtNat::from(v)).collect())
    }

    /// Entries with `None` marking `∞`.
    pub fn from_options(entries: &[Option<i64>]) -> Result<Self> {
        WeightVector::new(
            entries
                .iter()
                .map(|v| match v {
                    Some(x) => ExtNat::from(*x),
                    None => ExtNat::Infinity,
                })
                .collect(),
        )
    }

    pub fn entries(&self) -> &[ExtNat] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The refined sedentarity: indices of the `∞` entries.
    pub fn sedentarity(&self) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_finite())
            .map(|(i, _)| i)
            .collect()
    }

    /// `∧_Λ v`: the weight of a generic linear form, i.e. the minimal
    /// finite entry.
    pub fn wedge_linear(&self) -> ExtNat {
        self.entries
            .iter()
            .filter_map(|e| e.as_finite())
            .min()
            .map(|v| ExtNat::Finite(v.clone()))
            .expect("at least one finite entry")
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", inner.join(","))
    }
}

fn format_weights(entries: &[ExtNat]) -> String {
    let inner: Vec<String> = entries.iter().map(|e| e.to_string()).collect();
    format!("({})", inner.join(","))
}

// ---------------------------------------------------------------------------
// Faces
// ---------------------------------------------------------------------------

/// A compact face of the Newton polyhedron or of one of its coordinate
/// sub-polyhedra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// True vertices, sorted.
    vertices: Vec<Vec<Int>>,
    /// All support points lying on the face, sorted.
    points: Vec<Vec<Int>>,
    /// Coordinates not identically zero on the face, sorted.
    i_k: Vec<usize>,
    dim: usize,
    /// Primitive integral normal, present exactly for coordinate facets.
    normal: Option<WeightVector>,
    /// `∧_f v` of the normal, for coordinate facets.
    m: Option<Int>,
    /// `∧_g v` of the normal, for coordinate facets.
    n: Option<Int>,
}

impl Face {
    pub fn vertices(&self) -> &[Vec<Int>] {
        &self.vertices
    }

    /// All support points on the face (vertices included).
    pub fn support_points(&self) -> &[Vec<Int>] {
        &self.points
    }

    pub fn i_k(&self) -> &[usize] {
        &self.i_k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_coordinate_facet(&self) -> bool {
        self.normal.is_some()
    }

    pub fn normal(&self) -> Option<&WeightVector> {
        self.normal.as_ref()
    }

    pub fn weight_m(&self) -> Option<&Int> {
        self.m.as_ref()
    }

    pub fn weight_n(&self) -> Option<&Int> {
        self.n.as_ref()
    }

    /// `M(F) = m_F / n_F` for a coordinate facet.
    pub fn maximal_axial(&self) -> Option<Rat> {
        match (&self.m, &self.n) {
            (Some(m), Some(n)) => Some(Rat::new(m.clone(), n.clone())),
            _ => None,
        }
    }

    /// Exact membership of a lattice point in the face.
    pub fn contains_lattice_point(&self, p: &[Int]) -> bool {
        if p.len() != self.vertices[0].len() {
            return false;
        }
        let k = self.vertices.len();
        // Convex combination feasibility: Σ λ_i v_i = p, Σ λ_i = 1, λ ≥ 0.
        let mut constraints = Vec::new();
        for c in 0..p.len() {
            let coeffs: Vec<Rat> = self
                .vertices
                .iter()
                .map(|v| Rat::from_integer(v[c].clone()))
                .collect();
            constraints.push(Constraint::new(
                coeffs,
                Rel::Eq,
                Rat::from_integer(p[c].clone()),
            ));
        }
        constraints.push(Constraint::new(vec![Rat::one(); k], Rel::Eq, Rat::one()));
        lp::feasible(k, &constraints).is_some()
    }

    /// `s! · Vol_s` of the face in its saturated lattice, `s = dim`.
    pub fn normalized_volume_scaled(&self) -> Rat {
        let verts: Vec<Vec<Rat>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| Rat::from_integer(x.clone())).collect())
            .collect();
        let poly = geom::convex_hull(&verts).expect("face is nonempty");
        let mut fact = Int::one();
        for k in 2..=self.dim {
            fact *= Int::from(k);
        }
        geom::normalized_volume(&poly) * Rat::from_integer(fact)
    }
}

// ---------------------------------------------------------------------------
// The diagram
// ---------------------------------------------------------------------------

/// The Newton diagram of a support set with its full compact face
/// structure, coordinate facets first-class.
#[derive(Clone, Debug)]
pub struct NewtonDiagram {
    support: SupportSet,
    faces: Vec<Face>,
    coordinate_facets: Vec<usize>,
    maximal_faces: Vec<usize>,
}

impl NewtonDiagram {
    pub fn new(support: SupportSet) -> Result<Self> {
        let faces = enumerate_faces(&support)?;
        let coordinate_facets = faces
            .iter()
            .enumerate()
            .filter(|(_, f)| f.is_coordinate_facet())
            .map(|(i, _)| i)
            .collect();
        let mut maximal_faces = Vec::new();
        for (i, f) in faces.iter().enumerate() {
            let maximal = !faces
                .iter()
                .enumerate()
                .any(|(j, g)| j != i && is_subset(&f.points, &g.points));
            if maximal {
                maximal_faces.push(i);
            }
        }
        Ok(NewtonDiagram {
            support,
            faces,
            coordinate_facets,
            maximal_faces,
        })
    }

    pub fn from_rows(rows: &[&[i64]]) -> Result<Self> {
        NewtonDiagram::new(SupportSet::from_rows(rows)?)
    }

    pub fn support(&self) -> &SupportSet {
        &self.support
    }

    /// `n`, the number of variables minus one.
    pub fn n(&self) -> usize {
        self.support.num_vars() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.support.num_vars()
    }

    /// All compact faces of all coordinate sub-polyhedra, deterministic
    /// order (lexicographic in `(I_K, vertices)`).
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, idx: usize) -> &Face {
        &self.faces[idx]
    }

    /// Indices of the coordinate facets.
    pub fn coordinate_facet_indices(&self) -> &[usize] {
        &self.coordinate_facets
    }

    pub fn coordinate_facets(&self) -> impl Iterator<Item = &Face> {
        self.coordinate_facets.iter().map(|&i| &self.faces[i])
    }

    /// Indices of the faces not contained in any other face.
    pub fn maximal_face_indices(&self) -> &[usize] {
        &self.maximal_faces
    }

    /// Face containment, as point sets.
    pub fn face_contains(&self, outer: usize, inner: usize) -> bool {
        is_subset(&self.faces[inner].points, &self.faces[outer].points)
    }

    /// Facets of a face: its maximal proper subfaces.
    pub fn face_facets(&self, idx: usize) -> Vec<usize> {
        let proper: Vec<usize> = (0..self.faces.len())
            .filter(|&j| j != idx && self.face_contains(idx, j))
            .collect();
        proper
            .iter()
            .copied()
            .filter(|&j| {
                !proper
                    .iter()
                    .any(|&k| k != j && self.face_contains(k, j))
            })
            .collect()
    }

    /// `∧_f v`.
    pub fn wedge(&self, v: &WeightVector) -> ExtNat {
        self.support.wedge(v)
    }

    /// `∧_Λ v` for the generic linear form (the standard simplex diagram).
    pub fn wedge_linear(&self, v: &WeightVector) -> ExtNat {
        v.wedge_linear()
    }

    /// The face `K_f(v)`; `None` when `∧_f v = ∞`.
    pub fn face_of(&self, v: &WeightVector) -> Option<&Face> {
        let m = match self.support.wedge(v) {
            ExtNat::Finite(m) => m,
            ExtNat::Infinity => return None,
        };
        let mut attaining: Vec<Vec<Int>> = Vec::new();
        for p in self.support.points() {
            let mut acc = Int::zero();
            let mut infinite = false;
            for (u, w) in p.iter().zip(v.entries()) {
                match w {
                    ExtNat::Finite(wv) => acc += u * wv,
                    ExtNat::Infinity => {
                        if !u.is_zero() {
                            infinite = true;
                            break;
                        }
                    }
                }
            }
            if !infinite && acc == m {
                attaining.push(p.clone());
            }
        }
        attaining.sort();
        let found = self
            .faces
            .iter()
            .find(|f| f.points == attaining)
            .expect("K_f(v) is a face of the diagram");
        Some(found)
    }

    /// `M(v) = ∧_Γ v / ∧_Λ v`.
    pub fn maximal_axial(&self, v: &WeightVector) -> Result<Rat> {
        let m = match self.support.wedge(v) {
            ExtNat::Finite(m) => m,
            ExtNat::Infinity => return Err(Error::InfiniteWeight),
        };
        let n = v
            .wedge_linear()
            .as_finite()
            .expect("wedge_linear is finite")
            .clone();
        Ok(Rat::new(m, n))
    }

    /// `M(Γ) = max M(v)` over coordinate facet normals.
    pub fn maximal_axial_diagram(&self) -> Result<Rat> {
        self.coordinate_facets()
            .map(|f| f.maximal_axial().expect("coordinate facet"))
            .max()
            .ok_or(Error::NoCoordinateFacet)
    }

    /// The minimum of `M` over the closed normal cone of a face.
    ///
    /// A face lies in `s_α(Γ)` iff this value is at most `α`: a minimizer
    /// on the cone boundary supports a larger face, whose presence in the
    /// union already covers this one. An `∞` weight entry can be simulated
    /// by a large finite entry without changing `M`, so minimizing over
    /// finite vectors alone is exact. Normalized by `min_j v_j = 1` with
    /// the minimizing coordinate `i` swept over all positions, each giving
    /// one exact LP.
    pub fn min_axial_over_cone(&self, face_idx: usize) -> Rat {
        let face = &self.faces[face_idx];
        let dim = self.num_vars();
        let u0 = &face.vertices[0];
        let points = self.support.points();
        let mut best: Option<Rat> = None;
        for i in 0..dim {
            // Variables x_j = v_j − 1 ≥ 0; v_i = 1 fixes the minimum entry.
            let mut constraints = Vec::new();
            let mut row_i = vec![Rat::zero(); dim];
            row_i[i] = Rat::one();
            constraints.push(Constraint::new(row_i, Rel::Eq, Rat::zero()));
            for vtx in &face.vertices[1..] {
                let coeffs: Vec<Rat> = (0..dim)
                    .map(|j| Rat::from_integer(&vtx[j] - &u0[j]))
                    .collect();
                let shift: Rat = coeffs.iter().fold(Rat::zero(), |a, b| a + b);
                constraints.push(Constraint::new(coeffs, Rel::Eq, -shift));
            }
            for w in points {
                if face.points.contains(w) {
                    continue;
                }
                let coeffs: Vec<Rat> = (0..dim)
                    .map(|j| Rat::from_integer(&w[j] - &u0[j]))
                    .collect();
                let shift: Rat = coeffs.iter().fold(Rat::zero(), |a, b| a + b);
                constraints.push(Constraint::new(coeffs, Rel::Ge, -shift));
            }
            let objective: Vec<Rat> = (0..dim)
                .map(|j| Rat::from_integer(u0[j].clone()))
                .collect();
            let degree_shift: Rat = objective.iter().fold(Rat::zero(), |a, b| a + b);
            match lp::minimize(&objective, &constraints) {
                lp::Outcome::Optimal { value, .. } => {
                    let total = value + degree_shift;
                    best = Some(match best {
                        None => total,
                        Some(b) => b.min(total),
                    });
                }
                lp::Outcome::Infeasible => {}
                lp::Outcome::Unbounded => unreachable!("objective is nonnegative"),
            }
        }
        best.expect("every diagram face has a positive supporting vector")
    }

    /// The faces whose union is `s_α(Γ)`: those supported by a positive
    /// weight vector of maximal axial number at most `α`.
    pub fn s_alpha(&self, alpha: &Rat) -> Vec<usize> {
        (0..self.faces.len())
            .filter(|&i| self.min_axial_over_cone(i) <= *alpha)
            .collect()
    }

    /// True iff every coordinate axis carries a support point.
    pub fn is_convenient(&self) -> bool {
        (0..self.num_vars()).all(|axis| {
            self.support.points().iter().any(|p| {
                p.iter()
                    .enumerate()
                    .all(|(j, v)| if j == axis { v.is_positive() } else { v.is_zero() })
            })
        })
    }

    /// The region `S₋ = ∪ [0,1]·u` over the union of the given faces,
    /// described as pyramids (cones to the origin) over the faces that are
    /// maximal within their coordinate subspace; their interiors are
    /// disjoint.
    pub fn gamma_minus_region(&self, face_indices: &[usize]) -> GammaMinusRegion {
        let mut pyramids = Vec::new();
        for &i in face_indices {
            let fi = &self.faces[i];
            let shadowed = face_indices.iter().any(|&j| {
                j != i && self.faces[j].i_k == fi.i_k && self.face_contains(j, i)
            });
            if !shadowed {
                pyramids.push(Pyramid {
                    face_index: i,
                    i_k: fi.i_k.clone(),
                    dim: fi.dim + 1,
                });
            }
        }
        pyramids.sort_by_key(|a| a.face_index);
        GammaMinusRegion { pyramids }
    }

    /// Region under the whole diagram.
    pub fn gamma_minus(&self) -> GammaMinusRegion {
        let all: Vec<usize> = (0..self.faces.len()).collect();
        self.gamma_minus_region(&all)
    }

    /// The unsigned Newton number `ν(S) = Σ_J |J|!·Vol_{|J|}(S ∩ R^J)`,
    /// with the empty term contributing 1 when the region is nonempty.
    ///
    /// Only the coordinate facets contribute positive-dimensional volume;
    /// each pyramid volume is evaluated through the identity
    /// `(s+1)!·Vol_{s+1}(F₋) = m_F·s!·Vol_s(F)`.
    pub fn newton_number_unsigned(&self, region: &GammaMinusRegion) -> Rat {
        if region.pyramids.is_empty() {
            return Rat::zero();
        }
        let mut total = Rat::one();
        for pyr in &region.pyramids {
            let face = &self.faces[pyr.face_index];
            if !face.is_coordinate_facet() {
                continue;
            }
            let m = face.weight_m().expect("coordinate facet");
            total += Rat::from_integer(m.clone()) * face.normalized_volume_scaled();
        }
        total
    }

    /// The signed (Kouchnirenko-style) Newton number of a region:
    /// `Σ_J (−1)^{n+1−|J|}·|J|!·Vol_{|J|}(S ∩ R^J)`, the alternating
    /// companion of [`NewtonDiagram::newton_number_unsigned`]. This is the
    /// quantity whose sublevel equality detects the Łojasiewicz exponent;
    /// the unsigned sums of facets on opposite parities do not cancel and
    /// can strictly separate `s_α(Γ)₋` from `Γ₋` even past the exponent.
    pub fn newton_number_signed(&self, region: &GammaMinusRegion) -> Rat {
        if region.pyramids.is_empty() {
            return Rat::zero();
        }
        let n = self.n();
        let mut total = Rat::from_integer(if (n + 1).is_multiple_of(2) {
            Int::one()
        } else {
            -Int::one()
        });
        for pyr in &region.pyramids {
            let face = &self.faces[pyr.face_index];
            if !face.is_coordinate_facet() {
                continue;
            }
            let s = face.dim();
            let m = face.weight_m().expect("coordinate facet");
            let sign = if (n - s).is_multiple_of(2) {
                Int::one()
            } else {
                -Int::one()
            };
            total += Rat::from_integer(sign * m) * face.normalized_volume_scaled();
        }
        total
    }

    /// Kouchnirenko's signed alternating sum over the full diagram; equals
    /// the Milnor number for convenient Newton nondegenerate singularities.
    pub fn milnor_number_kouchnirenko(&self) -> Result<Int> {
        if !self.is_convenient() {
            return Err(Error::NotConvenient);
        }
        let total = self.newton_number_signed(&self.gamma_minus());
        debug_assert!(total.denom().is_one(), "signed Newton number is integral");
        Ok(total.numer().clone())
    }
}

/// Pyramid over a face, coned to the origin.
#[derive(Clone, Debug)]
pub struct Pyramid {
    pub face_index: usize,
    pub i_k: Vec<usize>,
    pub dim: usize,
}

/// A region `S₋` under a union of faces, as disjoint-interior pyramids.
#[derive(Clone, Debug)]
pub struct GammaMinusRegion {
    pub pyramids: Vec<Pyramid>,
}

fn is_subset(inner: &[Vec<Int>], outer: &[Vec<Int>]) -> bool {
    inner.iter().all(|p| outer.binary_search(p).is_ok())
}

// ---------------------------------------------------------------------------
// Face enumeration
// ---------------------------------------------------------------------------

fn enumerate_faces(support: &SupportSet) -> Result<Vec<Face>> {
    let dim = support.num_vars();
    let pts = support.points();
    let frame = geom::saturated_frame(pts)?;
    let q = frame.dim();

    // Candidate faces as sets of support-point indices.
    let mut candidates: BTreeSet<Vec<usize>> = BTreeSet::new();
    let all: Vec<usize> = (0..pts.len()).collect();
    if q == 0 {
        candidates.insert(all.clone());
    } else {
        let in_frame: Vec<Vec<Int>> = pts
            .iter()
            .map(|p| frame.coords_int(p).expect("support point in own hull"))
            .collect();
        candidates.insert(all.clone());
        let facet_sets: Vec<Vec<usize>> = if q == 1 {
            let min = (0..in_frame.len())
                .min_by_key(|&i| in_frame[i].clone())
                .unwrap();
            let max = (0..in_frame.len())
                .max_by_key(|&i| in_frame[i].clone())
                .unwrap();
            vec![vec![min], vec![max]]
        } else {
            geom::hull_facets(&in_frame, q)
                .into_iter()
                .map(|f| f.on)
                .collect()
        };
        for fs in &facet_sets {
            candidates.insert(fs.clone());
        }
        // Close under intersection: every proper face of a polytope is an
        // intersection of facets.
        loop {
            let mut fresh = Vec::new();
            for a in &candidates {
                for b in &candidates {
                    let inter: Vec<usize> =
                        a.iter().filter(|i| b.binary_search(i).is_ok()).copied().collect();
                    if !inter.is_empty() && !candidates.contains(&inter) {
                        fresh.push(inter);
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            candidates.extend(fresh);
        }
    }

    // Keep the candidates whose closed normal cone meets the strictly
    // positive orthant.
    let mut faces = Vec::new();
    for cand in candidates {
        let base = &pts[cand[0]];
        let mut constraints = Vec::new();
        // Variables x_j = v_j − 1 ≥ 0.
        for &i in &cand[1..] {
            let coeffs: Vec<Rat> = (0..dim)
                .map(|j| Rat::from_integer(&pts[i][j] - &base[j]))
                .collect();
            let shift: Rat = coeffs.iter().fold(Rat::zero(), |a, b| a + b);
            constraints.push(Constraint::new(coeffs, Rel::Eq, -shift));
        }
        for (i, p) in pts.iter().enumerate() {
            if cand.binary_search(&i).is_ok() {
                continue;
            }
            let coeffs: Vec<Rat> = (0..dim)
                .map(|j| Rat::from_integer(&p[j] - &base[j]))
                .collect();
            let shift: Rat = coeffs.iter().fold(Rat::zero(), |a, b| a + b);
            constraints.push(Constraint::new(coeffs, Rel::Ge, -shift));
        }
        if lp::feasible(dim, &constraints).is_none() {
            continue;
        }
        faces.push(build_face(pts, &cand, support)?);
    }
    faces.sort_by(|a, b| (&a.i_k, &a.vertices).cmp(&(&b.i_k, &b.vertices)));
    Ok(faces)
}

fn build_face(pts: &[Vec<Int>], members: &[usize], support: &SupportSet) -> Result<Face> {
    let dim = pts[0].len();
    let member_pts: Vec<Vec<Int>> = members.iter().map(|&i| pts[i].clone()).collect();
    let face_frame = geom::saturated_frame(&member_pts)?;
    let fdim = face_frame.dim();

    // Vertices of the face: the members that are vertices of its hull.
    let vertices: Vec<Vec<Int>> = if fdim == 0 {
        member_pts.clone()
    } else {
        let in_frame: Vec<Vec<Int>> = member_pts
            .iter()
            .map(|p| face_frame.coords_int(p).expect("member in own hull"))
            .collect();
        if fdim == 1 {
            let min = (0..in_frame.len())
                .min_by_key(|&i| in_frame[i].clone())
                .unwrap();
            let max = (0..in_frame.len())
                .max_by_key(|&i| in_frame[i].clone())
                .unwrap();
            let mut v = vec![member_pts[min].clone(), member_pts[max].clone()];
            v.sort();
            v
        } else {
            let facets = geom::hull_facets(&in_frame, fdim);
            let mut v: Vec<Vec<Int>> = geom::hull_vertex_indices(&in_frame, fdim, &facets)
                .into_iter()
                .map(|i| member_pts[i].clone())
                .collect();
            v.sort();
            v
        }
    };

    let mut i_k: Vec<usize> = (0..dim)
        .filter(|&j| vertices.iter().any(|v| v[j].is_positive()))
        .collect();
    i_k.sort();

    let mut normal = None;
    let mut m = None;
    let mut n = None;
    if fdim + 1 == i_k.len() {
        // Coordinate facet: the unique primitive normal within R^{I_K}.
        let restricted: Vec<Vec<Int>> = vertices
            .iter()
            .map(|v| i_k.iter().map(|&j| v[j].clone()).collect())
            .collect();
        let diffs: Vec<Vec<Int>> = restricted[1..]
            .iter()
            .map(|v| v.iter().zip(&restricted[0]).map(|(a, b)| a - b).collect())
            .collect();
        let kernel = geom::orthogonal_lattice(&diffs, i_k.len());
        debug_assert_eq!(kernel.len(), 1, "facet normal is unique up to sign");
        let mut w = kernel.into_iter().next().expect("normal exists");
        if w.iter().any(|v| v.is_negative()) {
            w = w.iter().map(|v| -v).collect();
        }
        assert!(
            w.iter().all(|v| v.is_positive()),
            "coordinate facet normal must be strictly positive"
        );
        let m_val = geom::dot_int(&w, &restricted[0]);
        let n_val = w.iter().min().expect("nonempty").clone();
        let mut entries = vec![ExtNat::Infinity; dim];
        for (pos, &j) in i_k.iter().enumerate() {
            entries[j] = ExtNat::Finite(w[pos].clone());
        }
        let wv = WeightVector::new(entries)?;
        debug_assert_eq!(
            support.wedge(&wv),
            ExtNat::Finite(m_val.clone()),
            "facet weight matches the support minimum"
        );
        normal = Some(wv);
        m = Some(m_val);
        n = Some(n_val);
    }

    Ok(Face {
        vertices,
        points: member_pts,
        i_k,
        dim: fdim,
        normal,
        m,
        n,
    })
}
