//! Jacobian and alternating Jacobian polygons, and the Łojasiewicz
//! exponent, for Newton nondegenerate isolated singularities.
//!
//! Everything is evaluated combinatorially from the diagram:
//!
//! * `AJ⁽ⁿ⁺¹⁾` as a signed sum of lattice volumes of coordinate facets,
//!   `Σ (−1)^{n−s}·s!·Vol_s(F)·[m_F; n_F]`;
//! * `AJ⁽ᵈ⁺¹⁾` for every level through the mixed-volume weights
//!   `W⁽ᵈ⁺¹⁾(v)`, summed over the coordinate facet normals of the product
//!   diagram `Γ(f·g)` (all other weights vanish);
//! * `J⁽ᵈ⁺¹⁾ = AJ⁽ᵈ⁺¹⁾ + AJ⁽ᵈ⁾`;
//! * the Łojasiewicz exponent as `deg AJ − 1`, with value `1` in the
//!   Morse exception where `AJ = 0`.
//!
//! The generator pairs `(m_v, n_v)` are fed to the group unreduced; the
//! relation `[cm; cn] = c·[m; n]` supplies the collapsing factor, and the
//! volume sum is wrong without it.

use crate::diagram::{Face, NewtonDiagram, SupportSet, WeightVector};
use crate::geom::{self, RationalPolytope};
use crate::kn::{Degree, Ext, ExtNat, KNElement, Slope};
use crate::{Error, Int, Rat, Result};
use num_traits::{One, Signed, Zero};

/// The Łojasiewicz exponent together with how it was determined.
#[derive(Clone, Debug)]
pub struct LojResult {
    pub value: Rat,
    /// Set exactly when `AJ = 0`, i.e. `n` odd and the singularity Morse;
    /// the exponent is then `1` and no facet witnesses it.
    pub morse_exception: bool,
    /// A coordinate facet whose maximal axial number is `deg AJ`.
    pub witness_facet: Option<Face>,
}

/// Diagram of `f·g` for a generic linear `g`: the Minkowski-sum
/// polyhedron whose coordinate facet normals carry every nonzero
/// `W⁽ᵈ⁺¹⁾`.
pub fn product_diagram(diagram: &NewtonDiagram) -> NewtonDiagram {
    let g = SupportSet::generic_linear(diagram.num_vars());
    let fg = diagram
        .support()
        .product(&g)
        .expect("same ambient dimension");
    NewtonDiagram::new(fg).expect("product support is valid")
}

fn face_polytope(face: &Face) -> RationalPolytope {
    let verts: Vec<Vec<Rat>> = face
        .vertices()
        .iter()
        .map(|v| v.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect();
    RationalPolytope::from_vertex_set(verts)
}

/// The face `K_g(v)` of the standard simplex: the basis points with
/// minimal finite weight.
fn linear_face_polytope(v: &WeightVector) -> RationalPolytope {
    let n_v = v.wedge_linear();
    let dim = v.len();
    let mut verts = Vec::new();
    for (i, e) in v.entries().iter().enumerate() {
        if e == &n_v {
            let mut p = vec![Rat::zero(); dim];
            p[i] = Rat::one();
            verts.push(p);
        }
    }
    RationalPolytope::from_vertex_set(verts)
}

fn factorial(s: usize) -> Int {
    let mut f = Int::one();
    for k in 2..=s {
        f *= Int::from(k);
    }
    f
}

/// The mixed-volume weight `W⁽ᵈ⁺¹⁾(v)`.
///
/// With `s = n − |sed(v)|` and `c = n − d`: for `c = 0` this is
/// `s!·Vol_s(K_f(v))`; otherwise it is the sum of
/// `s!·V_s(K_f(v)^{k₀}, K_g(v)^{k₁}, …, K_g(v)^{k_c})` over compositions
/// `k₀ ≥ 0`, `k₁,…,k_c ≥ 1` with `Σk = s`, which collapses to the
/// binomial form `Σ_k C(k−1, c−1)·s!·V_s(K_f^{s−k}, K_g^{k})`.
pub fn w_mixed(diagram: &NewtonDiagram, v: &WeightVector, level: usize) -> Result<Rat> {
    let n = diagram.n();
    if level > n {
        return Err(Error::LevelOutOfRange(level, n));
    }
    let sed = v.sedentarity().len();
    debug_assert!(sed <= n, "weight vector has a finite entry");
    let s = n - sed;
    let c = n - level;
    let Some(k_f) = diagram.face_of(v) else {
        return Ok(Rat::zero());
    };
    if c == 0 {
        let body = face_polytope(k_f);
        return Ok(geom::volume_s(&body, s) * Rat::from_integer(factorial(s)));
    }
    if s == 0 {
        // No composition has c ≥ 1 positive parts summing to 0.
        return Ok(Rat::zero());
    }
    let body_f = face_polytope(k_f);
    let body_g = linear_face_polytope(v);
    if body_g.vertices().len() == 1 {
        // A point in a mandatory slot kills every term.
        return Ok(Rat::zero());
    }
    let s_fact = Rat::from_integer(factorial(s));
    let mut total = Rat::zero();
    for k in c..=s {
        let weight = geom::binomial(k - 1, c - 1);
        if weight.is_zero() {
            continue;
        }
        let v_s = geom::mixed_volume(&[(body_f.clone(), s - k), (body_g.clone(), k)], s)?;
        if v_s.is_zero() {
            continue;
        }
        total += Rat::from_integer(weight) * &s_fact * v_s;
    }
    Ok(total)
}

/// `AJ(f,0)` over the coordinate facets of `Γ(f)`:
/// `Σ_F (−1)^{n−s}·s!·Vol_s(F)·[m_F; n_F]`.
pub fn aj_via_volumes(diagram: &NewtonDiagram) -> KNElement<Int> {
    let n = diagram.n();
    let mut acc = KNElement::zero();
    for face in diagram.coordinate_facets() {
        let s = face.dim();
        let vol = face.normalized_volume_scaled();
        debug_assert!(vol.denom().is_one(), "s!·Vol_s of a lattice face is integral");
        let mut coeff = vol.numer().clone();
        if (n - s) % 2 == 1 {
            coeff = -coeff;
        }
        let m = ExtNat::Finite(face.weight_m().expect("coordinate facet").clone());
        let nn = ExtNat::Finite(face.weight_n().expect("coordinate facet").clone());
        let term = KNElement::from_pair(&m, &nn).expect("positive weights");
        acc = acc.add(&term.scale_int(&coeff));
    }
    acc
}

fn aj_via_mixed_with(
    diagram: &NewtonDiagram,
    fg: &NewtonDiagram,
    level: usize,
) -> Result<KNElement<Int>> {
    let n = diagram.n();
    if level > n {
        return Err(Error::LevelOutOfRange(level, n));
    }
    let mut acc = KNElement::zero();
    for facet in fg.coordinate_facets() {
        let v = facet.normal().expect("coordinate facet");
        let w = w_mixed(diagram, v, level)?;
        if w.is_zero() {
            continue;
        }
        debug_assert!(w.denom().is_one(), "W^{{(d+1)}} of lattice faces is integral");
        let s = n - v.sedentarity().len();
        let mut coeff = w.numer().clone();
        if (n - s) % 2 == 1 {
            coeff = -coeff;
        }
        let m_v = diagram.wedge(v);
        debug_assert!(m_v.is_finite(), "facet normals of Γ(fg) see the support");
        let n_v = v.wedge_linear();
        let term = KNElement::from_pair(&m_v, &n_v).expect("positive weights");
        acc = acc.add(&term.scale_int(&coeff));
    }
    Ok(acc)
}

/// `AJ⁽ᵈ⁺¹⁾(f,0)` by the mixed-volume sum over the coordinate facet
/// normals of `Γ(f·g)`, at any level `0 ≤ d ≤ n`. At `d = n` this is an
/// independent route to [`aj_via_volumes`].
pub fn aj_via_mixed(diagram: &NewtonDiagram, level: usize) -> Result<KNElement<Int>> {
    let fg = product_diagram(diagram);
    aj_via_mixed_with(diagram, &fg, level)
}

/// `AJ⁽ᵈ⁺¹⁾(f,0)`: the volume route at the top level, the mixed-volume
/// route below it.
pub fn aj(diagram: &NewtonDiagram, level: usize) -> Result<KNElement<Int>> {
    let n = diagram.n();
    if level > n {
        return Err(Error::LevelOutOfRange(level, n));
    }
    if level == n {
        Ok(aj_via_volumes(diagram))
    } else {
        aj_via_mixed(diagram, level)
    }
}

/// All levels `AJ⁽¹⁾ … AJ⁽ⁿ⁺¹⁾`, sharing one product diagram.
pub fn aj_levels(diagram: &NewtonDiagram) -> Vec<KNElement<Int>> {
    let n = diagram.n();
    let fg = product_diagram(diagram);
    let mut out = Vec::with_capacity(n + 1);
    for level in 0..n {
        out.push(aj_via_mixed_with(diagram, &fg, level).expect("level in range"));
    }
    out.push(aj_via_volumes(diagram));
    out
}

/// `J⁽ᵈ⁺¹⁾ = AJ⁽ᵈ⁺¹⁾ + AJ⁽ᵈ⁾`, with `AJ⁽⁰⁾ = 0`.
pub fn jacobian_polygon(diagram: &NewtonDiagram, level: usize) -> Result<KNElement<Int>> {
    let top = aj(diagram, level)?;
    if level == 0 {
        Ok(top)
    } else {
        Ok(top.add(&aj(diagram, level - 1)?))
    }
}

/// All levels `J⁽¹⁾ … J⁽ⁿ⁺¹⁾`.
pub fn jacobian_polygons(diagram: &NewtonDiagram) -> Vec<KNElement<Int>> {
    level_polygons(diagram).jacobian
}

/// The full ladder of polygons: `aj[d] = AJ⁽ᵈ⁺¹⁾` and
/// `jacobian[d] = J⁽ᵈ⁺¹⁾ = AJ⁽ᵈ⁺¹⁾ + AJ⁽ᵈ⁾` for `d = 0..=n`. Every
/// `J⁽ᵈ⁺¹⁾` is effective with slopes in `[2, ∞)` when the input is
/// singular.
#[derive(Clone, Debug)]
pub struct LevelPolygonSet {
    pub n: usize,
    pub aj: Vec<KNElement<Int>>,
    pub jacobian: Vec<KNElement<Int>>,
}

pub fn level_polygons(diagram: &NewtonDiagram) -> LevelPolygonSet {
    let ajs = aj_levels(diagram);
    let mut jacobian = Vec::with_capacity(ajs.len());
    for (d, a) in ajs.iter().enumerate() {
        jacobian.push(if d == 0 {
            a.clone()
        } else {
            a.add(&ajs[d - 1])
        });
    }
    LevelPolygonSet {
        n: diagram.n(),
        aj: ajs,
        jacobian,
    }
}

/// The Łojasiewicz exponent `L(f,0) = deg AJ − 1`, with the Morse
/// exception `AJ = 0 ⇒ L = 1`.
pub fn lojasiewicz(diagram: &NewtonDiagram) -> LojResult {
    let a = aj_via_volumes(diagram);
    if a.is_zero() {
        return LojResult {
            value: Rat::one(),
            morse_exception: true,
            witness_facet: None,
        };
    }
    let deg = match a.degree() {
        Degree::Slope(s) => s,
        Degree::MinusInfinity => unreachable!("nonzero element"),
    };
    let deg_rat = deg.as_rat().expect("finite slope");
    let witness = diagram
        .coordinate_facets()
        .find(|f| f.maximal_axial().as_ref() == Some(&deg_rat))
        .cloned();
    LojResult {
        value: deg_rat - Rat::one(),
        morse_exception: false,
        witness_facet: witness,
    }
}

/// The Łojasiewicz exponent as the smallest `α − 1` for which the signed
/// Newton numbers of `s_α(Γ)₋` and `Γ₋` agree, sweeping the candidate
/// thresholds given by the per-face cone minima of the maximal axial
/// number.
///
/// The signed sum is the form in which the sublevel criterion is
/// provable: the facet terms missing from `s_α(Γ)` are exactly the
/// `AJ`-terms of slope above `α`, whose signed total is the truncated
/// length `ℓ(AJ_{≥α})`, zero precisely past the degree. With the unsigned
/// sum, facets of opposite parities fail to cancel and the equality can
/// first hold strictly above the exponent (x² + y³ + z² + w⁴ + xw is an
/// A₂ witness; see the regression test).
pub fn lojasiewicz_via_newton_numbers(diagram: &NewtonDiagram) -> Rat {
    let full = diagram.gamma_minus();
    let target = diagram.newton_number_signed(&full);
    let minima: Vec<Rat> = (0..diagram.faces().len())
        .map(|i| diagram.min_axial_over_cone(i))
        .collect();
    let mut candidates: Vec<Rat> = minima.clone();
    candidates.sort();
    candidates.dedup();
    for alpha in candidates {
        let included: Vec<usize> = (0..diagram.faces().len())
            .filter(|&i| minima[i] <= alpha)
            .collect();
        let region = diagram.gamma_minus_region(&included);
        if diagram.newton_number_signed(&region) == target {
            return alpha - Rat::one();
        }
    }
    unreachable!("the largest candidate includes every face")
}

// ---------------------------------------------------------------------------
// Consistency report
// ---------------------------------------------------------------------------

/// One named consistency check.
#[derive(Clone, Debug)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

/// Structural inequalities and identities that every Newton nondegenerate
/// isolated singularity satisfies. A failure flags bad input (a support
/// that is not nondegenerate-isolated as asserted) or an implementation
/// bug.
#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub ok: bool,
    pub checks: Vec<PropertyCheck>,
    pub aj_top: KNElement<Int>,
}

fn finite(v: &Ext<Int>) -> Rat {
    match v {
        Ext::Finite(x) => Rat::from_integer(x.clone()),
        _ => panic!("value is infinite"),
    }
}

pub fn property_report(diagram: &NewtonDiagram) -> PropertyReport {
    let n = diagram.n();
    let fg = product_diagram(diagram);
    let mut ajs: Vec<KNElement<Int>> = (0..n)
        .map(|level| aj_via_mixed_with(diagram, &fg, level).expect("level in range"))
        .collect();
    ajs.push(aj_via_volumes(diagram));
    let jps: Vec<KNElement<Int>> = (0..=n)
        .map(|d| {
            if d == 0 {
                ajs[0].clone()
            } else {
                ajs[d].add(&ajs[d - 1])
            }
        })
        .collect();
    let aj_top = ajs[n].clone();
    let mut checks = Vec::new();

    // Path agreement of the two top-level formulas.
    let mixed_top = aj_via_mixed_with(diagram, &fg, n).expect("level in range");
    checks.push(PropertyCheck {
        name: "aj-path-agreement",
        passed: mixed_top == aj_top,
        details: format!("volumes: {aj_top}, mixed: {mixed_top}"),
    });

    // Virtual vertices in the closed upper halfplane.
    let verts = aj_top.virtual_vertices().expect("finite extent");
    let vert_list: Vec<String> = verts.iter().map(|(x, y)| format!("({x},{y})")).collect();
    checks.push(PropertyCheck {
        name: "upper-half",
        passed: verts.iter().all(|(_, y)| !y.is_negative()),
        details: vert_list.join(" "),
    });

    let j_top = &jps[n];
    if !aj_top.is_zero() {
        // Truncation lengths: ℓ(AJ_{≥α}) ≥ 0 with zero iff α > deg J.
        let mut slopes: Vec<Slope> = aj_top.support();
        slopes.extend(j_top.support());
        slopes.sort();
        slopes.dedup();
        let degj = j_top.degree();
        let mut passed = true;
        let mut details = String::new();
        for sl in &slopes {
            let l = finite(&aj_top.truncate_geq(sl).length());
            let beyond = matches!(&degj, Degree::Slope(d) if sl > d);
            if l.is_negative() || (l.is_zero() != beyond) {
                passed = false;
                details = format!("at slope {sl}: length {l}");
                break;
            }
        }
        checks.push(PropertyCheck {
            name: "truncation-lengths",
            passed,
            details,
        });

        checks.push(PropertyCheck {
            name: "positive-leading-coefficient",
            passed: aj_top.leading_coeff().map(|c| c.is_positive()).unwrap_or(false),
            details: format!("lc = {:?}", aj_top.leading_coeff()),
        });

        checks.push(PropertyCheck {
            name: "degree-agreement",
            passed: aj_top.degree() == j_top.degree(),
            details: format!("deg AJ = {}, deg J = {}", aj_top.degree(), j_top.degree()),
        });
    }

    // Degrees of J nondecreasing in the level.
    {
        let mut passed = true;
        let mut details = String::new();
        for d in 1..=n {
            let lo = jps[d - 1].degree();
            let hi = jps[d].degree();
            let ok = match (&lo, &hi) {
                (Degree::MinusInfinity, _) => true,
                (_, Degree::MinusInfinity) => false,
                (Degree::Slope(a), Degree::Slope(b)) => a <= b,
            };
            if !ok {
                passed = false;
                details = format!("levels {d}: {lo} then {hi}", );
                break;
            }
        }
        checks.push(PropertyCheck {
            name: "degrees-nondecreasing",
            passed,
            details,
        });
    }

    // Effectivity of every J: nonnegative coefficients, slopes ≥ mult ≥ 2.
    if diagram.support().multiplicity() >= Int::from(2) {
        let two = Rat::from_integer(Int::from(2));
        let mut passed = true;
        let mut details = String::new();
        'outer: for (d, jp) in jps.iter().enumerate() {
            for (slope, coeff) in jp.iter() {
                let slope_ok = match slope.as_rat() {
                    Some(r) => r >= two,
                    None => false,
                };
                if coeff.is_negative() || !slope_ok {
                    passed = false;
                    details = format!("J^({}) has term {coeff}{{{slope}}}", d + 1);
                    break 'outer;
                }
            }
        }
        checks.push(PropertyCheck {
            name: "effective-jacobian",
            passed,
            details,
        });
    }

    // Height chain: h(J^{(d+1)}) = ℓ(AJ^{(d)}) − (−1)^{d−1}.
    {
        let mut passed = true;
        let mut details = String::new();
        for d in 1..=n {
            let h = finite(&jps[d].height());
            let l = finite(&ajs[d - 1].length());
            let sign = if (d - 1) % 2 == 0 { Rat::one() } else { -Rat::one() };
            if h != &l - &sign {
                passed = false;
                details = format!("level {d}: h = {h}, ℓ − sign = {}", &l - &sign);
                break;
            }
        }
        checks.push(PropertyCheck {
            name: "height-chain",
            passed,
            details,
        });
    }

    // The truncation inequalities across consecutive levels.
    {
        let mut hlh_ok = true;
        let mut mono_ok = true;
        let mut details_hlh = String::new();
        let mut details_mono = String::new();
        for d in 1..=n {
            let hi = &jps[d];
            let lo = &jps[d - 1];
            let mut slopes: Vec<Slope> = hi.support();
            slopes.extend(lo.support());
            slopes.sort();
            slopes.dedup();
            for sl in &slopes {
                let alpha = sl.as_rat().expect("finite slope");
                let hi_t = hi.truncate_geq(sl);
                let lo_t = lo.truncate_geq(sl);
                let lhs = finite(&hi_t.height());
                let rhs = &finite(&lo_t.length()) - &finite(&lo_t.height());
                if hlh_ok && lhs < rhs {
                    hlh_ok = false;
                    details_hlh = format!("level {d}, slope {sl}: {lhs} < {rhs}");
                }
                let lhs = finite(&hi_t.length());
                let rhs = (&alpha - &Rat::one()) * finite(&lo_t.length());
                let strict = hi.degree().cmp_rat(&alpha) == std::cmp::Ordering::Greater;
                let bad = if strict { lhs <= rhs } else { lhs < rhs };
                if mono_ok && bad {
                    mono_ok = false;
                    details_mono = format!("level {d}, slope {sl}: {lhs} vs {rhs}");
                }
            }
        }
        checks.push(PropertyCheck {
            name: "truncation-height-inequality",
            passed: hlh_ok,
            details: details_hlh,
        });
        checks.push(PropertyCheck {
            name: "truncation-growth-inequality",
            passed: mono_ok,
            details: details_mono,
        });
    }

    // Telescoping against the signed Newton number on convenient diagrams.
    if diagram.is_convenient() {
        let mu = diagram
            .milnor_number_kouchnirenko()
            .expect("convenient diagram");
        let expected = Rat::from_integer(mu)
            + if n.is_multiple_of(2) { Rat::one() } else { -Rat::one() };
        let l = finite(&aj_top.length());
        checks.push(PropertyCheck {
            name: "telescoping-length",
            passed: l == expected,
            details: format!("ℓ(AJ) = {l}, μ + (−1)^n = {expected}"),
        });
    }

    let ok = checks.iter().all(|c| c.passed);
    PropertyReport {
        ok,
        checks,
        aj_top,
    }
}
