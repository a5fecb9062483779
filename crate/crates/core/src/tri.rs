//! Triangulations of the Newton diagram and the invariants built on them:
//! the lattice point count `Cap`, the relative combinatorial Newton
//! polyhedra `CN(T/T₀)`, the alternating Jacobian polygon through the
//! `Cap`/`CN` identity, the sets `T_ne` and `F_ne`, the exceptional-facet
//! predicate, and the per-instance reports for the two conjectures about
//! the Łojasiewicz exponent.

use crate::diagram::{Face, NewtonDiagram};
use crate::geom::{
    self,
    lp::{self, Constraint, Rel},
};
use crate::jacobian;
use crate::kn::{Degree, ExtNat, KNElement};
use crate::{Error, Int, Rat, Result};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

// ---------------------------------------------------------------------------
// Simplices and triangulations
// ---------------------------------------------------------------------------

/// A simplex with lattice-point vertices on the diagram.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Simplex {
    vertices: Vec<Vec<Int>>,
}

impl Simplex {
    pub fn new(mut vertices: Vec<Vec<Int>>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::BadTriangulation("a cell has no vertices".into()));
        }
        let dim = vertices[0].len();
        if vertices.iter().any(|v| v.len() != dim) {
            return Err(Error::BadTriangulation(
                "cell vertices have mixed ambient dimensions".into(),
            ));
        }
        vertices.sort();
        vertices.dedup();
        let diffs: Vec<Vec<Int>> = vertices[1..]
            .iter()
            .map(|v| v.iter().zip(&vertices[0]).map(|(a, b)| a - b).collect())
            .collect();
        if geom::rank_int(&diffs) + 1 != vertices.len() {
            return Err(Error::BadTriangulation(format!(
                "cell {} is not a simplex (affinely dependent vertices)",
                format_cell(&vertices)
            )));
        }
        Ok(Simplex { vertices })
    }

    pub fn from_rows(rows: &[&[i64]]) -> Result<Self> {
        Simplex::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| Int::from(v)).collect())
                .collect(),
        )
    }

    pub fn vertices(&self) -> &[Vec<Int>] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Coordinates not identically zero on the simplex.
    pub fn i_s(&self) -> Vec<usize> {
        let dim = self.vertices[0].len();
        (0..dim)
            .filter(|&j| self.vertices.iter().any(|v| v[j].is_positive()))
            .collect()
    }

    /// Vertex-set containment, which for cells of a simplicial complex is
    /// geometric containment.
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.vertices
            .iter()
            .all(|v| other.vertices.binary_search(v).is_ok())
    }
}

fn format_cell(vertices: &[Vec<Int>]) -> String {
    let inner: Vec<String> = vertices
        .iter()
        .map(|v| {
            let c: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            format!("({})", c.join(","))
        })
        .collect();
    format!("[{}]", inner.join(" "))
}

/// Weights attached to a coordinate simplex: those of the coordinate
/// facet of equal dimension containing it.
#[derive(Clone, Debug)]
pub struct CoordinateCell {
    pub cell: usize,
    pub facet: usize,
    pub m: Int,
    pub n: Int,
}

/// A validated triangulation of the Newton diagram: a simplicial complex
/// with lattice vertices on the diagram whose maximal cells cover it.
/// `cells` is closed under taking faces; the formal empty cell is
/// implicit.
#[derive(Clone, Debug)]
pub struct Triangulation {
    n: usize,
    cells: Vec<Simplex>,
    maximal: Vec<usize>,
    coordinate: Vec<CoordinateCell>,
}

impl Triangulation {
    pub fn cells(&self) -> &[Simplex] {
        &self.cells
    }

    pub fn maximal_cells(&self) -> impl Iterator<Item = &Simplex> {
        self.maximal.iter().map(|&i| &self.cells[i])
    }

    pub fn coordinate_cells(&self) -> &[CoordinateCell] {
        &self.coordinate
    }

    /// Index of a cell given by its vertex set.
    pub fn find_cell(&self, s: &Simplex) -> Option<usize> {
        self.cells.iter().position(|c| c == s)
    }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Check the complex and covering conditions exactly and identify the
/// coordinate simplices with their weights. The diagnostic of the first
/// failed condition names the offending cells.
pub fn validate(diagram: &NewtonDiagram, input_cells: &[Simplex]) -> Result<Triangulation> {
    if input_cells.is_empty() {
        return Err(Error::BadTriangulation("no cells given".into()));
    }
    let num_vars = diagram.num_vars();
    let mut cells: Vec<Simplex> = input_cells.to_vec();
    cells.sort();
    cells.dedup();

    // Every vertex is a lattice point on the diagram, and every cell lies
    // inside a single face.
    for cell in &cells {
        if cell.vertices()[0].len() != num_vars {
            return Err(Error::BadTriangulation(format!(
                "cell {} does not match the diagram dimension",
                format_cell(cell.vertices())
            )));
        }
        for v in cell.vertices() {
            if v.iter().any(|x| x.is_negative()) {
                return Err(Error::BadTriangulation(format!(
                    "vertex of cell {} has a negative coordinate",
                    format_cell(cell.vertices())
                )));
            }
        }
        let hosted = diagram
            .faces()
            .iter()
            .any(|f| cell.vertices().iter().all(|v| f.contains_lattice_point(v)));
        if !hosted {
            return Err(Error::BadTriangulation(format!(
                "cell {} does not lie on a single face of the diagram",
                format_cell(cell.vertices())
            )));
        }
    }

    // Pairwise intersections are common faces.
    for (i, a) in cells.iter().enumerate() {
        for b in cells.iter().skip(i + 1) {
            if !meets_in_common_face(a, b) {
                return Err(Error::BadTriangulation(format!(
                    "cells {} and {} do not intersect in a common face",
                    format_cell(a.vertices()),
                    format_cell(b.vertices())
                )));
            }
        }
    }

    // Volume covering of every maximal face of the diagram.
    for &fi in diagram.maximal_face_indices() {
        let face = diagram.face(fi);
        let target = face.normalized_volume_scaled();
        let mut got = Rat::zero();
        for cell in &cells {
            if cell.dim() == face.dim()
                && cell
                    .vertices()
                    .iter()
                    .all(|v| face.contains_lattice_point(v))
            {
                got += simplex_volume_scaled(cell);
            }
        }
        if got != target {
            return Err(Error::BadTriangulation(format!(
                "cells of dimension {} cover {} of face volume {} (vertices {})",
                face.dim(),
                got,
                target,
                format_cell(face.vertices())
            )));
        }
    }

    // Close under faces.
    let mut closed: BTreeSet<Simplex> = BTreeSet::new();
    for cell in &cells {
        let k = cell.vertices().len();
        for mask in 1u64..(1 << k) {
            let sub: Vec<Vec<Int>> = (0..k)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| cell.vertices()[i].clone())
                .collect();
            closed.insert(Simplex { vertices: sub });
        }
    }
    let cells: Vec<Simplex> = closed.into_iter().collect();

    let maximal: Vec<usize> = (0..cells.len())
        .filter(|&i| {
            !cells
                .iter()
                .enumerate()
                .any(|(j, c)| j != i && cells[i].is_face_of(c))
        })
        .collect();

    // Coordinate simplices: dim S = |I_S| − 1, inside the coordinate facet
    // with the same coordinate set.
    let mut coordinate = Vec::new();
    for (ci, cell) in cells.iter().enumerate() {
        let i_s = cell.i_s();
        if cell.dim() + 1 != i_s.len() {
            continue;
        }
        let facet = diagram
            .coordinate_facet_indices()
            .iter()
            .copied()
            .find(|&fi| {
                let f = diagram.face(fi);
                f.i_k() == i_s.as_slice()
                    && cell
                        .vertices()
                        .iter()
                        .all(|v| f.contains_lattice_point(v))
            });
        match facet {
            Some(fi) => {
                let f = diagram.face(fi);
                coordinate.push(CoordinateCell {
                    cell: ci,
                    facet: fi,
                    m: f.weight_m().expect("coordinate facet").clone(),
                    n: f.weight_n().expect("coordinate facet").clone(),
                });
            }
            None => {
                return Err(Error::BadTriangulation(format!(
                    "coordinate simplex {} lies in no coordinate facet",
                    format_cell(cell.vertices())
                )));
            }
        }
    }

    Ok(Triangulation {
        n: num_vars - 1,
        cells,
        maximal,
        coordinate,
    })
}

/// `conv(A) ∩ conv(B) = conv(A ∩ B)`, decided exactly: maximize the total
/// barycentric mass on non-shared vertices over the intersection; the
/// cells meet properly iff the maximum is zero (or the hulls are
/// disjoint).
fn meets_in_common_face(a: &Simplex, b: &Simplex) -> bool {
    let shared: Vec<bool> = a
        .vertices()
        .iter()
        .map(|v| b.vertices().binary_search(v).is_ok())
        .collect();
    let shared_b: Vec<bool> = b
        .vertices()
        .iter()
        .map(|v| a.vertices().binary_search(v).is_ok())
        .collect();
    let ka = a.vertices().len();
    let kb = b.vertices().len();
    let dim = a.vertices()[0].len();
    // Variables: λ (ka) then μ (kb).
    let mut constraints = Vec::new();
    for c in 0..dim {
        let mut coeffs = Vec::with_capacity(ka + kb);
        for v in a.vertices() {
            coeffs.push(Rat::from_integer(v[c].clone()));
        }
        for w in b.vertices() {
            coeffs.push(-Rat::from_integer(w[c].clone()));
        }
        constraints.push(Constraint::new(coeffs, Rel::Eq, Rat::zero()));
    }
    let mut lambda_row = vec![Rat::zero(); ka + kb];
    for v in lambda_row.iter_mut().take(ka) {
        *v = Rat::one();
    }
    constraints.push(Constraint::new(lambda_row, Rel::Eq, Rat::one()));
    let mut mu_row = vec![Rat::zero(); ka + kb];
    for v in mu_row.iter_mut().skip(ka) {
        *v = Rat::one();
    }
    constraints.push(Constraint::new(mu_row, Rel::Eq, Rat::one()));

    let mut objective = vec![Rat::zero(); ka + kb];
    for (i, &is_shared) in shared.iter().enumerate() {
        if !is_shared {
            objective[i] = -Rat::one();
        }
    }
    for (j, &is_shared) in shared_b.iter().enumerate() {
        if !is_shared {
            objective[ka + j] = -Rat::one();
        }
    }
    match lp::minimize(&objective, &constraints) {
        lp::Outcome::Optimal { value, .. } => value.is_zero(),
        lp::Outcome::Infeasible => true,
        lp::Outcome::Unbounded => unreachable!("barycentric masses are bounded"),
    }
}

fn simplex_volume_scaled(cell: &Simplex) -> Rat {
    let s = cell.dim();
    if s == 0 {
        return Rat::one();
    }
    let frame = geom::saturated_frame(cell.vertices()).expect("nonempty");
    debug_assert_eq!(frame.dim(), s);
    let m: Vec<Vec<Int>> = cell.vertices()[1..]
        .iter()
        .map(|v| frame.coords_int(v).expect("lattice vertex"))
        .collect();
    Rat::from_integer(geom::det_int(m).abs())
}

// ---------------------------------------------------------------------------
// Default triangulation
// ---------------------------------------------------------------------------

/// The pulling triangulation of the diagram by global lexicographic
/// vertex order: every face is coned from its smallest vertex over the
/// triangulated facets avoiding it. Restricting to a shared face gives
/// the same cells, so the union over maximal faces is a complex; it is
/// validated before being returned.
pub fn default_triangulation(diagram: &NewtonDiagram) -> Triangulation {
    let mut memo: BTreeMap<usize, Vec<Vec<Vec<Int>>>> = BTreeMap::new();
    let mut max_cells: Vec<Simplex> = Vec::new();
    for &fi in diagram.maximal_face_indices() {
        for cell in pull(diagram, fi, &mut memo) {
            max_cells.push(Simplex::new(cell).expect("pulling produces simplices"));
        }
    }
    max_cells.sort();
    max_cells.dedup();
    validate(diagram, &max_cells).expect("pulling triangulation is valid")
}

fn pull(
    diagram: &NewtonDiagram,
    face_idx: usize,
    memo: &mut BTreeMap<usize, Vec<Vec<Vec<Int>>>>,
) -> Vec<Vec<Vec<Int>>> {
    if let Some(cached) = memo.get(&face_idx) {
        return cached.clone();
    }
    let face = diagram.face(face_idx);
    let cells = if face.dim() == 0 {
        vec![face.vertices().to_vec()]
    } else {
        let apex = face
            .vertices()
            .iter()
            .min()
            .expect("face has vertices")
            .clone();
        let mut cells = Vec::new();
        for g in diagram.face_facets(face_idx) {
            if diagram.face(g).vertices().contains(&apex) {
                continue;
            }
            for sub in pull(diagram, g, memo) {
                let mut cell = sub.clone();
                cell.push(apex.clone());
                cell.sort();
                cells.push(cell);
            }
        }
        cells
    };
    memo.insert(face_idx, cells.clone());
    cells
}

// ---------------------------------------------------------------------------
// Cap and the combinatorial Newton polyhedra
// ---------------------------------------------------------------------------

/// `Cap(S)`: the number of lattice points `Σ λ_i v_i` with every
/// `λ_i ∈ (0,1)` strictly; `Cap(∅) = 1`. The vertex matrix has full
/// column rank (the affine hull of a diagram simplex avoids the origin),
/// so membership is a linear solve.
pub fn cap(cell: Option<&Simplex>) -> Int {
    let Some(cell) = cell else {
        return Int::one();
    };
    let verts = cell.vertices();
    let k = verts.len();
    let dim = verts[0].len();
    // Pick k rows forming an invertible submatrix.
    let mut chosen: Vec<usize> = Vec::new();
    let mut chosen_rows: Vec<Vec<Int>> = Vec::new();
    for r in 0..dim {
        if chosen.len() == k {
            break;
        }
        let row: Vec<Int> = verts.iter().map(|v| v[r].clone()).collect();
        chosen_rows.push(row);
        if geom::rank_int(&chosen_rows) == chosen_rows.len() {
            chosen.push(r);
        } else {
            chosen_rows.pop();
        }
    }
    assert_eq!(
        chosen.len(),
        k,
        "simplex vertices are linearly independent"
    );
    let square: Vec<Vec<Rat>> = chosen_rows
        .iter()
        .map(|row| row.iter().map(|v| Rat::from_integer(v.clone())).collect())
        .collect();
    // Box bounds for the chosen coordinates: 0 ≤ p_r ≤ Σ_i v_i[r].
    let lo = vec![Int::zero(); k];
    let hi: Vec<Int> = chosen_rows.iter().map(|row| row.iter().sum()).collect();
    let mut count = Int::zero();
    let one = Rat::one();
    for p in geom::lattice_points_in(&lo, &hi, |_| true) {
        let rhs: Vec<Rat> = p.iter().map(|v| Rat::from_integer(v.clone())).collect();
        let Some(lambda) = geom::solve_rat(&square, &rhs) else {
            continue;
        };
        if !lambda.iter().all(|l| l.is_positive() && *l < one) {
            continue;
        }
        // The remaining coordinates must come out integral.
        let mut integral = true;
        for r in 0..dim {
            if chosen.contains(&r) {
                continue;
            }
            let mut acc = Rat::zero();
            for (i, v) in verts.iter().enumerate() {
                acc += Rat::from_integer(v[r].clone()) * &lambda[i];
            }
            if !acc.denom().is_one() {
                integral = false;
                break;
            }
        }
        if integral {
            count += 1;
        }
    }
    count
}

/// The relative combinatorial Newton polyhedron
/// `CN(T/T₀) = Σ_{S ∈ T_c, S ⊇ T₀} ((−1)^{n−s}/m_S)·[m_S; n_S]`,
/// with `T₀ = ∅` allowed.
pub fn cn(tri: &Triangulation, base: Option<&Simplex>) -> Result<KNElement<Rat>> {
    let base_idx = match base {
        None => None,
        Some(s) => Some(tri.find_cell(s).ok_or(Error::UnknownCell)?),
    };
    Ok(cn_impl(tri, base_idx))
}

fn cn_by_index(tri: &Triangulation, base: usize) -> KNElement<Rat> {
    cn_impl(tri, Some(base))
}

fn cn_impl(tri: &Triangulation, base: Option<usize>) -> KNElement<Rat> {
    let mut acc: KNElement<Rat> = KNElement::zero();
    for cc in &tri.coordinate {
        let cell = &tri.cells[cc.cell];
        if let Some(bi) = base {
            if !tri.cells[bi].is_face_of(cell) {
                continue;
            }
        }
        let s = cell.dim();
        let mut coeff = Rat::new(Int::one(), cc.m.clone());
        if (tri.n - s) % 2 == 1 {
            coeff = -coeff;
        }
        let term = KNElement::<Rat>::from_pair(
            &ExtNat::Finite(cc.m.clone()),
            &ExtNat::Finite(cc.n.clone()),
        )
        .expect("positive weights");
        acc = acc.add(&term.scale(&coeff));
    }
    acc
}

/// `AJ(f,0) = Σ_{T ∈ T ∪ {∅}} Cap(T)·CN(T/T)`: the triangulation-based
/// route to the alternating Jacobian polygon, identical for every valid
/// triangulation.
pub fn aj_via_cap(tri: &Triangulation) -> KNElement<Int> {
    // Cap(∅) = 1 contributes cn(∅) once.
    let mut acc = cn_impl(tri, None);
    for (i, cell) in tri.cells.iter().enumerate() {
        let c = cap(Some(cell));
        if c.is_zero() {
            continue;
        }
        let term = cn_by_index(tri, i).scale(&Rat::from_integer(c));
        acc = acc.add(&term);
    }
    acc.to_integral()
        .expect("Cap/CN sum of a valid triangulation is integral")
}

/// `T_ne`: the cells with `Cap(T)·CN(T/T) ≠ 0`, as indices into
/// [`Triangulation::cells`].
pub fn t_ne(tri: &Triangulation) -> Vec<usize> {
    (0..tri.cells.len())
        .filter(|&i| {
            let c = cn_by_index(tri, i);
            if c.is_zero() {
                return false;
            }
            !cap(Some(&tri.cells[i])).is_zero()
        })
        .collect()
}

/// `F_ne`: the coordinate facets containing a cell of `T_ne` whose
/// relative polyhedron reaches the facet's maximal axial number. Returns
/// face indices of the diagram.
pub fn f_ne(diagram: &NewtonDiagram, tri: &Triangulation) -> Vec<usize> {
    let tne = t_ne(tri);
    let mut out = Vec::new();
    for &fi in diagram.coordinate_facet_indices() {
        let face = diagram.face(fi);
        let target = face.maximal_axial().expect("coordinate facet");
        let witnessed = tne.iter().any(|&ti| {
            let cell = &tri.cells[ti];
            let inside = cell
                .vertices()
                .iter()
                .all(|v| face.contains_lattice_point(v));
            if !inside {
                return false;
            }
            match cn_by_index(tri, ti).degree() {
                Degree::Slope(s) => s.as_rat().map(|r| r >= target).unwrap_or(true),
                Degree::MinusInfinity => false,
            }
        });
        if witnessed {
            out.push(fi);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Exceptional facets and the conjecture reports
// ---------------------------------------------------------------------------

/// A facet is exceptional when for some `i ≠ j` all but one vertex lies
/// on the `j`-th coordinate hyperplane and the remaining vertex is the
/// exponent of `x_j·x_i^k`.
pub fn bko_exceptional(diagram: &NewtonDiagram, face: &Face) -> Result<bool> {
    let n = diagram.n();
    if face.dim() != n {
        return Err(Error::NotAFacet(face.dim(), n));
    }
    let dim = diagram.num_vars();
    for j in 0..dim {
        let off: Vec<&Vec<Int>> = face
            .vertices()
            .iter()
            .filter(|v| !v[j].is_zero())
            .collect();
        if off.len() != 1 {
            continue;
        }
        let v = off[0];
        if !v[j].is_one() {
            continue;
        }
        for i in 0..dim {
            if i == j {
                continue;
            }
            let pure = v
                .iter()
                .enumerate()
                .all(|(c, x)| c == i || c == j || x.is_zero());
            if pure {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Evidence report for the two conjectures on one input.
#[derive(Clone, Debug)]
pub struct ConjectureReport {
    /// The toolkit's Łojasiewicz exponent.
    pub loj: Rat,
    pub morse_exception: bool,
    /// Facets (dimension `n`) that are not exceptional.
    pub nonexceptional_facets: Vec<usize>,
    /// `max M(F) − 1` over nonexceptional facets, when any exist.
    pub bko_predicted: Option<Rat>,
    pub bko_matches: Option<bool>,
    /// `max deg CN(T/T) − 1` over `T_ne`.
    pub conj_a_deg: Option<Rat>,
    pub conj_a_deg_matches: Option<bool>,
    /// `max M(F) − 1` over `F_ne`.
    pub conj_a_facet: Option<Rat>,
    pub conj_a_facet_matches: Option<bool>,
}

pub fn conjecture_report(diagram: &NewtonDiagram, tri: &Triangulation) -> ConjectureReport {
    let loj = jacobian::lojasiewicz(diagram);

    let mut nonexceptional = Vec::new();
    for &fi in diagram.coordinate_facet_indices() {
        let face = diagram.face(fi);
        if face.dim() == diagram.n()
            && !bko_exceptional(diagram, face).expect("facet dimension checked")
        {
            nonexceptional.push(fi);
        }
    }
    let bko_predicted = nonexceptional
        .iter()
        .map(|&fi| diagram.face(fi).maximal_axial().expect("facet"))
        .max()
        .map(|m| m - Rat::one());
    let bko_matches = bko_predicted.as_ref().map(|p| *p == loj.value);

    let tne = t_ne(tri);
    let conj_a_deg = tne
        .iter()
        .filter_map(|&ti| match cn_by_index(tri, ti).degree() {
            Degree::Slope(s) => s.as_rat(),
            Degree::MinusInfinity => None,
        })
        .max()
        .map(|m| m - Rat::one());
    let conj_a_deg_matches = conj_a_deg.as_ref().map(|p| *p == loj.value);

    let fne = f_ne(diagram, tri);
    let conj_a_facet = fne
        .iter()
        .map(|&fi| diagram.face(fi).maximal_axial().expect("coordinate facet"))
        .max()
        .map(|m| m - Rat::one());
    let conj_a_facet_matches = conj_a_facet.as_ref().map(|p| *p == loj.value);

    ConjectureReport {
        loj: loj.value,
        morse_exception: loj.morse_exception,
        nonexceptional_facets: nonexceptional,
        bko_predicted,
        bko_matches,
        conj_a_deg,
        conj_a_deg_matches,
        conj_a_facet,
        conj_a_facet_matches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kn::Slope;
    use crate::{int, rat};

    fn twosimp() -> NewtonDiagram {
        NewtonDiagram::from_rows(&[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1], &[0, 0, 2]]).unwrap()
    }

    fn e8() -> NewtonDiagram {
        NewtonDiagram::from_rows(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 5]]).unwrap()
    }

    // Vertices of the twosimp quadrilateral: A: yz, B: z², C: xz, D: xy.
    const A: [i64; 3] = [0, 1, 1];
    const B: [i64; 3] = [0, 0, 2];
    const C: [i64; 3] = [1, 0, 1];
    const D: [i64; 3] = [1, 1, 0];

    fn ip(coords: &[i64]) -> Vec<Int> {
        coords.iter().map(|&v| int(v)).collect()
    }

    fn left_triangulation(d: &NewtonDiagram) -> Triangulation {
        validate(
            d,
            &[
                Simplex::from_rows(&[&A, &C, &D]).unwrap(),
                Simplex::from_rows(&[&A, &B, &C]).unwrap(),
            ],
        )
        .unwrap()
    }

    fn right_triangulation(d: &NewtonDiagram) -> Triangulation {
        validate(
            d,
            &[
                Simplex::from_rows(&[&A, &B, &D]).unwrap(),
                Simplex::from_rows(&[&B, &C, &D]).unwrap(),
            ],
        )
        .unwrap()
    }

    fn cell(rows: &[&[i64]]) -> Simplex {
        Simplex::from_rows(rows).unwrap()
    }

    #[test]
    fn twosimp_left_validates_with_expected_coordinate_cells() {
        let d = twosimp();
        let t = left_triangulation(&d);
        let mut coord: Vec<Vec<Vec<Int>>> = t
            .coordinate_cells()
            .iter()
            .map(|cc| t.cells()[cc.cell].vertices().to_vec())
            .collect();
        coord.sort();
        let mut expect: Vec<Vec<Vec<Int>>> = vec![
            cell(&[&A, &C, &D]).vertices().to_vec(),
            cell(&[&A, &B, &C]).vertices().to_vec(),
            cell(&[&A, &B]).vertices().to_vec(),
            cell(&[&B, &C]).vertices().to_vec(),
            cell(&[&B]).vertices().to_vec(),
        ];
        expect.sort();
        assert_eq!(coord, expect);
        for cc in t.coordinate_cells() {
            assert_eq!(cc.m, int(2));
            assert_eq!(cc.n, int(1));
        }
    }

    #[test]
    fn invalid_triangulations_are_diagnosed() {
        let d = twosimp();
        // Two triangles overlapping in more than a face.
        let bad = validate(
            &d,
            &[
                cell(&[&A, &C, &D]),
                cell(&[&A, &B, &C]),
                cell(&[&A, &B, &D]),
            ],
        );
        assert!(matches!(bad, Err(Error::BadTriangulation(_))));
        // Not covering the quadrilateral.
        let partial = validate(&d, &[cell(&[&A, &C, &D])]);
        assert!(matches!(partial, Err(Error::BadTriangulation(_))));
        // A vertex off the diagram.
        let off = validate(&d, &[cell(&[&A, &C, &[2, 2, 2]])]);
        assert!(matches!(off, Err(Error::BadTriangulation(_))));
    }

    #[test]
    fn default_triangulation_is_deterministic_and_valid() {
        let d = twosimp();
        let t = default_triangulation(&d);
        // Pulling from the smallest vertex B gives the right-hand
        // triangulation {ABD, BCD}.
        let mut maxcells: Vec<Vec<Vec<Int>>> =
            t.maximal_cells().map(|c| c.vertices().to_vec()).collect();
        maxcells.sort();
        let mut expect = vec![
            cell(&[&A, &B, &D]).vertices().to_vec(),
            cell(&[&B, &C, &D]).vertices().to_vec(),
        ];
        expect.sort();
        assert_eq!(maxcells, expect);

        // E8: the faces are already simplices.
        let t = default_triangulation(&e8());
        let top: Vec<&Simplex> = t.maximal_cells().collect();
        assert_eq!(top.len(), 1);
        assert_eq!(top[0].vertices().len(), 3);
    }

    #[test]
    fn cap_values() {
        assert_eq!(cap(None), int(1));
        assert_eq!(cap(Some(&cell(&[&A, &C, &D]))), int(1));
        assert_eq!(cap(Some(&cell(&[&B]))), int(1));
        assert_eq!(cap(Some(&cell(&[&A]))), int(0));
        assert_eq!(cap(Some(&cell(&[&A, &B]))), int(0));
        assert_eq!(cap(Some(&cell(&[&A, &B, &C]))), int(0));
    }

    #[test]
    fn cap_is_invariant_under_unimodular_maps_and_vertex_order() {
        // Vertex order is normalized away by construction.
        let s1 = cell(&[&A, &C, &D]);
        let s2 = cell(&[&D, &A, &C]);
        assert_eq!(s1, s2);
        // A unimodular change of coordinates preserves the count.
        let u = [[1i64, 1, 0], [0, 1, 0], [2, 0, 1]];
        let map = |p: &[Int]| -> Vec<Int> {
            (0..3)
                .map(|i| (0..3).map(|j| int(u[i][j]) * &p[j]).sum())
                .collect()
        };
        for verts in [[A, C, D], [A, B, C], [A, B, D]] {
            let orig = Simplex::new(verts.iter().map(|v| ip(v)).collect()).unwrap();
            let mapped =
                Simplex::new(orig.vertices().iter().map(|v| map(v)).collect()).unwrap();
            assert_eq!(cap(Some(&orig)), cap(Some(&mapped)));
        }
    }

    #[test]
    fn cn_values_on_twosimp() {
        let d = twosimp();
        let left = left_triangulation(&d);
        let half2 = KNElement::<Rat>::term(Slope::finite(2, 1), rat(1, 2));
        assert_eq!(cn(&left, Some(&cell(&[&A, &C, &D]))).unwrap(), half2);
        assert!(cn(&left, Some(&cell(&[&A, &B]))).unwrap().is_zero());
        let right = right_triangulation(&d);
        let at_b = cn(&right, Some(&cell(&[&B]))).unwrap();
        assert_eq!(at_b, half2);
        assert!(matches!(
            cn(&left, Some(&cell(&[&B, &D]))),
            Err(Error::UnknownCell)
        ));
    }

    #[test]
    fn euler_relation_for_cn() {
        // CN(T/∅) = Σ_T (−1)^{dim T} CN(T/T).
        let d = twosimp();
        for t in [left_triangulation(&d), right_triangulation(&d)] {
            let empty = cn(&t, None).unwrap();
            let mut acc: KNElement<Rat> = KNElement::zero();
            for (i, c) in t.cells().iter().enumerate() {
                let sign = if c.dim() % 2 == 0 {
                    rat(1, 1)
                } else {
                    rat(-1, 1)
                };
                acc = acc.add(&cn_by_index(&t, i).scale(&sign));
            }
            assert_eq!(acc, empty);
        }
    }

    #[test]
    fn aj_via_cap_matches_aj() {
        let d = twosimp();
        let expected = KNElement::term(Slope::finite(2, 1), int(1));
        assert_eq!(aj_via_cap(&left_triangulation(&d)), expected);
        assert_eq!(aj_via_cap(&right_triangulation(&d)), expected);

        let e = e8();
        let t = default_triangulation(&e);
        assert_eq!(aj_via_cap(&t), jacobian::aj_via_volumes(&e));
    }

    #[test]
    fn tne_and_fne_on_both_triangulations() {
        let d = twosimp();
        let left = left_triangulation(&d);
        let tne: Vec<&Simplex> = t_ne(&left).into_iter().map(|i| &left.cells()[i]).collect();
        assert_eq!(tne.len(), 1);
        assert_eq!(tne[0], &cell(&[&A, &C, &D]));
        let fne = f_ne(&d, &left);
        assert_eq!(fne.len(), 1);
        assert_eq!(d.face(fne[0]).dim(), 2);

        let right = right_triangulation(&d);
        let tne: Vec<&Simplex> = t_ne(&right)
            .into_iter()
            .map(|i| &right.cells()[i])
            .collect();
        assert_eq!(tne.len(), 1);
        assert_eq!(tne[0], &cell(&[&B]));
        let fne = f_ne(&d, &right);
        assert_eq!(fne.len(), d.coordinate_facet_indices().len());
    }

    #[test]
    fn e8_tne_degree_matches_conjecture() {
        let e = e8();
        let t = default_triangulation(&e);
        let tne = t_ne(&t);
        assert!(!tne.is_empty());
        let max_deg = tne
            .iter()
            .filter_map(|&i| match cn_by_index(&t, i).degree() {
                Degree::Slope(s) => s.as_rat(),
                Degree::MinusInfinity => None,
            })
            .max()
            .unwrap();
        assert_eq!(max_deg, rat(5, 1));
    }

    #[test]
    fn exceptional_facets() {
        // x² + x^k·y in two variables: the edge (2,0)–(k,1) is exceptional.
        // k = 1 keeps (k,1) on the diagram.
        let d2 = NewtonDiagram::from_rows(&[&[2, 0], &[1, 1]]).unwrap();
        let facet = d2
            .coordinate_facets()
            .find(|f| f.dim() == 1)
            .expect("edge facet");
        assert!(bko_exceptional(&d2, facet).unwrap());

        let e = e8();
        let facet = e.coordinate_facets().find(|f| f.dim() == 2).unwrap();
        assert!(!bko_exceptional(&e, facet).unwrap());
        // Wrong dimension is rejected.
        let edge = e.coordinate_facets().find(|f| f.dim() == 1).unwrap();
        assert!(bko_exceptional(&e, edge).is_err());
    }

    #[test]
    fn overlapping_segments_on_a_line_are_rejected() {
        // Two cells of the xy-edge of x^4 + y^4 overlapping in a segment
        // that is not a common face.
        let d = NewtonDiagram::from_rows(&[&[4, 0], &[0, 4]]).unwrap();
        let bad = validate(
            &d,
            &[
                cell(&[&[4, 0], &[1, 3]]),
                cell(&[&[3, 1], &[0, 4]]),
            ],
        );
        assert!(matches!(bad, Err(Error::BadTriangulation(_))));
        // The proper split into three segments validates, with lattice
        // points of the diagram as extra vertices.
        let good = validate(
            &d,
            &[
                cell(&[&[4, 0], &[3, 1]]),
                cell(&[&[3, 1], &[1, 3]]),
                cell(&[&[1, 3], &[0, 4]]),
            ],
        )
        .unwrap();
        assert_eq!(aj_via_cap(&good), jacobian::aj_via_volumes(&d));
    }

    #[test]
    fn triangulation_of_a_diagram_without_coordinate_cells() {
        // z0·z1 + z2·z3: the diagram is a single segment, no coordinate
        // simplices exist, and the Cap route returns the zero element,
        // agreeing with AJ = 0.
        let d = NewtonDiagram::from_rows(&[&[1, 1, 0, 0], &[0, 0, 1, 1]]).unwrap();
        let t = default_triangulation(&d);
        assert!(t.coordinate_cells().is_empty());
        assert!(aj_via_cap(&t).is_zero());
        assert!(t_ne(&t).is_empty());
        assert!(f_ne(&d, &t).is_empty());
    }

    #[test]
    fn default_triangulation_splits_nonsimplex_facets() {
        // The counterexample facet F1 has six vertices; the pulling
        // triangulation splits it and still validates.
        let d = NewtonDiagram::from_rows(&[
            &[2, 0, 0, 0],
            &[0, 2, 0, 0],
            &[1, 0, 1, 0],
            &[1, 0, 0, 1],
            &[0, 1, 1, 0],
            &[0, 1, 0, 1],
            &[0, 0, 3, 0],
            &[0, 0, 0, 3],
        ])
        .unwrap();
        let t = default_triangulation(&d);
        let top: Vec<&Simplex> = t.maximal_cells().collect();
        assert!(top.len() > 2, "both hexahedral facets split into simplices");
        assert!(aj_via_cap(&t).is_zero());
    }

    #[test]
    fn conjecture_reports_on_examples() {
        let e = e8();
        let rep = conjecture_report(&e, &default_triangulation(&e));
        assert_eq!(rep.loj, rat(4, 1));
        assert_eq!(rep.bko_predicted, Some(rat(4, 1)));
        assert_eq!(rep.bko_matches, Some(true));
        assert_eq!(rep.conj_a_deg, Some(rat(4, 1)));
        assert_eq!(rep.conj_a_facet, Some(rat(4, 1)));

        let d = twosimp();
        for t in [left_triangulation(&d), right_triangulation(&d)] {
            let rep = conjecture_report(&d, &t);
            assert_eq!(rep.loj, rat(1, 1));
            assert_eq!(rep.conj_a_deg, Some(rat(1, 1)));
            assert_eq!(rep.conj_a_facet, Some(rat(1, 1)));
            assert_eq!(rep.conj_a_deg_matches, Some(true));
            assert_eq!(rep.conj_a_facet_matches, Some(true));
        }
    }
}
