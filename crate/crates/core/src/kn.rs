//! The Grothendieck group of Newton polygons.
//!
//! A Newton polygon is an integral polygon in the closed positive quadrant
//! whose recession cone is the whole quadrant. As a semigroup under
//! Minkowski sum, the polygons are generated by the elementary shapes
//! `[m; n]` (the polygon of `x^m + y^n`, allowing `m` or `n` to be `∞`)
//! subject to the relations `[cm; cn] = c·[m; n]`. The Grothendieck group
//! `KN` therefore has a canonical basis indexed by reduced slopes: every
//! element is a finite combination `Σ a_α {α}` with
//!
//! * `{α} = [m; n]` for `α = m/n` in lowest terms,
//! * `{0} = [1; ∞]` and `{∞} = [∞; 1]`.
//!
//! [`KNElement`] stores exactly that canonical form. The coefficient ring
//! is a type parameter: invariants of singularities live in the integer
//! group, while the relative combinatorial Newton polyhedra of
//! triangulations need rational coefficients.

use crate::{Error, Int, Rat, Result};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

// ---------------------------------------------------------------------------
// ExtNat
// ---------------------------------------------------------------------------

/// A nonnegative integer extended by `∞`, with `c·∞ = ∞` for `c > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtNat {
    Finite(Int),
    Infinity,
}

impl ExtNat {
    pub fn finite(v: i64) -> Self {
        ExtNat::Finite(Int::from(v))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtNat::Finite(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtNat::Finite(v) if v.is_zero())
    }

    /// The finite value, if any.
    pub fn as_finite(&self) -> Option<&Int> {
        match self {
            ExtNat::Finite(v) => Some(v),
            ExtNat::Infinity => None,
        }
    }

    /// `self + other`, with `∞` absorbing.
    pub fn add(&self, other: &ExtNat) -> ExtNat {
        match (self, other) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => ExtNat::Finite(a + b),
            _ => ExtNat::Infinity,
        }
    }

    /// `self · k` for a nonnegative integer `k`, with `∞·0 = 0`.
    pub fn mul_nat(&self, k: &Int) -> ExtNat {
        if k.is_zero() {
            return ExtNat::Finite(Int::zero());
        }
        match self {
            ExtNat::Finite(v) => ExtNat::Finite(v * k),
            ExtNat::Infinity => ExtNat::Infinity,
        }
    }
}

impl PartialOrd for ExtNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtNat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => a.cmp(b),
            (ExtNat::Finite(_), ExtNat::Infinity) => Ordering::Less,
            (ExtNat::Infinity, ExtNat::Finite(_)) => Ordering::Greater,
            (ExtNat::Infinity, ExtNat::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(v) => write!(f, "{v}"),
            ExtNat::Infinity => write!(f, "inf"),
        }
    }
}

impl From<i64> for ExtNat {
    fn from(v: i64) -> Self {
        ExtNat::Finite(Int::from(v))
    }
}

// ---------------------------------------------------------------------------
// Slope
// ---------------------------------------------------------------------------

/// A reduced slope indexing the canonical basis of `KN`:
/// an element of `Q_{>0}` stored in lowest terms, or one of the two
/// out-of-band markers `0` (for `[1;∞]`) and `∞` (for `[∞;1]`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Slope {
    Zero,
    /// `num/den` with `num, den > 0` and `gcd(num, den) = 1`.
    Finite(Int, Int),
    Infinity,
}

impl Slope {
    /// Reduced finite slope `num/den`; both arguments must be positive.
    pub fn finite(num: i64, den: i64) -> Self {
        assert!(num > 0 && den > 0, "finite slopes are positive");
        let (n, d) = (Int::from(num), Int::from(den));
        let g = n.gcd(&d);
        Slope::Finite(n / &g, d / g)
    }

    /// Reduced positive slope from big integers.
    pub fn from_ratio(num: &Int, den: &Int) -> Self {
        assert!(
            num.is_positive() && den.is_positive(),
            "finite slopes are positive"
        );
        let g = num.gcd(den);
        Slope::Finite(num / &g, den / g)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Slope::Finite(..))
    }

    /// The slope as a rational number, when finite (`0` counts as finite).
    pub fn as_rat(&self) -> Option<Rat> {
        match self {
            Slope::Zero => Some(Rat::zero()),
            Slope::Finite(n, d) => Some(Rat::new(n.clone(), d.clone())),
            Slope::Infinity => None,
        }
    }

    /// Length and height of the generator `{α}`, i.e. the pair `(m, n)`
    /// with `{α} = [m; n]`.
    pub fn generator_pair(&self) -> (ExtNat, ExtNat) {
        match self {
            Slope::Zero => (ExtNat::Finite(Int::one()), ExtNat::Infinity),
            Slope::Finite(p, q) => (ExtNat::Finite(p.clone()), ExtNat::Finite(q.clone())),
            Slope::Infinity => (ExtNat::Infinity, ExtNat::Finite(Int::one())),
        }
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        use Slope::*;
        match (self, other) {
            (Zero, Zero) | (Infinity, Infinity) => Ordering::Equal,
            (Zero, _) | (_, Infinity) => Ordering::Less,
            (_, Zero) | (Infinity, _) => Ordering::Greater,
            (Finite(a, b), Finite(c, d)) => (a * d).cmp(&(c * b)),
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Zero => write!(f, "0"),
            Slope::Finite(n, d) => {
                if d.is_one() {
                    write!(f, "{n}")
                } else {
                    write!(f, "{n}/{d}")
                }
            }
            Slope::Infinity => write!(f, "inf"),
        }
    }
}

// ---------------------------------------------------------------------------
// Coefficients
// ---------------------------------------------------------------------------

/// Coefficient ring of a [`KNElement`]: integers or rationals.
pub trait Coeff: Clone + Eq + fmt::Debug + fmt::Display + Signed {
    fn mul_int(&self, k: &Int) -> Self;
    fn from_int(k: Int) -> Self;
    fn to_rat(&self) -> Rat;
}

impl Coeff for Int {
    fn mul_int(&self, k: &Int) -> Self {
        self * k
    }
    fn from_int(k: Int) -> Self {
        k
    }
    fn to_rat(&self) -> Rat {
        Rat::from_integer(self.clone())
    }
}

impl Coeff for Rat {
    fn mul_int(&self, k: &Int) -> Self {
        self * Rat::from_integer(k.clone())
    }
    fn from_int(k: Int) -> Self {
        Rat::from_integer(k)
    }
    fn to_rat(&self) -> Rat {
        self.clone()
    }
}

// ---------------------------------------------------------------------------
// Extended values
// ---------------------------------------------------------------------------

/// A coefficient value extended by `±∞`, the codomain of heights and
/// lengths. `±∞` occurs exactly when the coefficient of `{0}` (for the
/// height) or of `{∞}` (for the length) is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ext<C> {
    NegInfinity,
    Finite(C),
    PosInfinity,
}

/// Extended integer, the height/length codomain for integer polygons.
pub type ExtInt = Ext<Int>;

impl<C: Coeff> Ext<C> {
    pub fn finite(v: C) -> Self {
        Ext::Finite(v)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Ext::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&C> {
        match self {
            Ext::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl<C: fmt::Display> fmt::Display for Ext<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::NegInfinity => write!(f, "-inf"),
            Ext::Finite(v) => write!(f, "{v}"),
            Ext::PosInfinity => write!(f, "inf"),
        }
    }
}

/// Degree of a `KN` element: the largest slope in its support, with a
/// dedicated marker for the zero element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degree {
    MinusInfinity,
    Slope(Slope),
}

impl Degree {
    pub fn as_slope(&self) -> Option<&Slope> {
        match self {
            Degree::Slope(s) => Some(s),
            Degree::MinusInfinity => None,
        }
    }

    /// Compare against a rational threshold; `-∞` is below everything and
    /// a degree of `∞` above everything.
    pub fn cmp_rat(&self, value: &Rat) -> Ordering {
        match self {
            Degree::MinusInfinity => Ordering::Less,
            Degree::Slope(Slope::Infinity) => Ordering::Greater,
            Degree::Slope(s) => s.as_rat().expect("finite slope").cmp(value),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => write!(f, "-inf"),
            Degree::Slope(s) => write!(f, "{s}"),
        }
    }
}

// ---------------------------------------------------------------------------
// KNElement
// ---------------------------------------------------------------------------

/// An element of the Grothendieck group of Newton polygons in canonical
/// form: a finite map from reduced slopes to nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KNElement<C: Coeff = Int> {
    terms: BTreeMap<Slope, C>,
}

impl<C: Coeff> Default for KNElement<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> KNElement<C> {
    /// The zero element.
    pub fn zero() -> Self {
        KNElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The basis element `{α}`.
    pub fn generator(slope: Slope) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(slope, C::one());
        KNElement { terms }
    }

    /// `c·{α}`, canonicalized.
    pub fn term(slope: Slope, coeff: C) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(slope, coeff);
        }
        KNElement { terms }
    }

    /// The element `[m; n]`, reduced through the relation
    /// `[cm; cn] = c·[m; n]`.
    ///
    /// The pairs `(0,0)` and `(∞,∞)` are undefined. A pair with exactly one
    /// zero component denotes the polygon of a unit, which is the neutral
    /// element.
    pub fn from_pair(m: &ExtNat, n: &ExtNat) -> Result<Self> {
        match (m, n) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) if a.is_zero() && b.is_zero() => {
                Err(Error::InvalidGenerator(m.to_string(), n.to_string()))
            }
            (ExtNat::Infinity, ExtNat::Infinity) => {
                Err(Error::InvalidGenerator(m.to_string(), n.to_string()))
            }
            (ExtNat::Finite(a), _) if a.is_zero() => Ok(Self::zero()),
            (_, ExtNat::Finite(b)) if b.is_zero() => Ok(Self::zero()),
            (ExtNat::Finite(a), ExtNat::Infinity) => {
                Ok(Self::term(Slope::Zero, C::from_int(a.clone())))
            }
            (ExtNat::Infinity, ExtNat::Finite(b)) => {
                Ok(Self::term(Slope::Infinity, C::from_int(b.clone())))
            }
            (ExtNat::Finite(a), ExtNat::Finite(b)) => {
                let g = a.gcd(b);
                Ok(Self::term(
                    Slope::from_ratio(a, b),
                    C::from_int(g),
                ))
            }
        }
    }

    /// Coefficient of `{α}` (zero when absent).
    pub fn coeff_of(&self, slope: &Slope) -> C {
        self.terms.get(slope).cloned().unwrap_or_else(C::zero)
    }

    /// Iterate over `(slope, coefficient)` pairs, slopes ascending.
    pub fn iter(&self) -> impl Iterator<Item = (&Slope, &C)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (s, c) in &other.terms {
            let entry = terms.entry(s.clone()).or_insert_with(C::zero);
            *entry = entry.clone() + c.clone();
        }
        terms.retain(|_, c| !c.is_zero());
        KNElement { terms }
    }

    pub fn negate(&self) -> Self {
        KNElement {
            terms: self
                .terms
                .iter()
                .map(|(s, c)| (s.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.negate())
    }

    /// Scale every coefficient by `c`.
    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        KNElement {
            terms: self
                .terms
                .iter()
                .map(|(s, k)| (s.clone(), k.clone() * c.clone()))
                .collect(),
        }
    }

    /// Scale by an integer.
    pub fn scale_int(&self, k: &Int) -> Self {
        self.scale(&C::from_int(k.clone()))
    }

    /// The set of slopes with nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<Slope> {
        self.terms.keys().cloned().collect()
    }

    /// The largest slope in the support, or `-∞` for the zero element.
    pub fn degree(&self) -> Degree {
        match self.terms.keys().next_back() {
            Some(s) => Degree::Slope(s.clone()),
            None => Degree::MinusInfinity,
        }
    }

    /// Coefficient of the degree term; undefined for the zero element.
    pub fn leading_coeff(&self) -> Result<C> {
        self.terms
            .values()
            .next_back()
            .cloned()
            .ok_or(Error::LeadingCoeffOfZero)
    }

    /// Truncation `A_{≥α}`: the terms with slope at least `α`.
    pub fn truncate_geq(&self, alpha: &Slope) -> Self {
        KNElement {
            terms: self
                .terms
                .iter()
                .filter(|(s, _)| *s >= alpha)
                .map(|(s, c)| (s.clone(), c.clone()))
                .collect(),
        }
    }

    /// Complementary truncation `A_{<α}`.
    pub fn truncate_lt(&self, alpha: &Slope) -> Self {
        KNElement {
            terms: self
                .terms
                .iter()
                .filter(|(s, _)| *s < alpha)
                .map(|(s, c)| (s.clone(), c.clone()))
                .collect(),
        }
    }

    /// Truncation at a rational threshold (every slope `≥ value`).
    pub fn truncate_geq_rat(&self, value: &Rat) -> Self {
        KNElement {
            terms: self
                .terms
                .iter()
                .filter(|(s, _)| match s {
                    Slope::Infinity => true,
                    s => s.as_rat().expect("finite") >= *value,
                })
                .map(|(s, c)| (s.clone(), c.clone()))
                .collect(),
        }
    }

    /// Height: the linear extension of `h([m;n]) = n`. Infinite exactly
    /// when `{0}` carries a nonzero coefficient, with its sign.
    pub fn height(&self) -> Ext<C> {
        let a0 = self.coeff_of(&Slope::Zero);
        if !a0.is_zero() {
            return if a0.is_negative() {
                Ext::NegInfinity
            } else {
                Ext::PosInfinity
            };
        }
        let mut total = C::zero();
        for (s, c) in &self.terms {
            match s {
                Slope::Zero => unreachable!(),
                Slope::Finite(_, q) => total = total + c.mul_int(q),
                Slope::Infinity => total = total + c.clone(),
            }
        }
        Ext::Finite(total)
    }

    /// Length: the linear extension of `ℓ([m;n]) = m`. Infinite exactly
    /// when `{∞}` carries a nonzero coefficient, with its sign.
    pub fn length(&self) -> Ext<C> {
        let ainf = self.coeff_of(&Slope::Infinity);
        if !ainf.is_zero() {
            return if ainf.is_negative() {
                Ext::NegInfinity
            } else {
                Ext::PosInfinity
            };
        }
        let mut total = C::zero();
        for (s, c) in &self.terms {
            match s {
                Slope::Zero => total = total + c.clone(),
                Slope::Finite(p, _) => total = total + c.mul_int(p),
                Slope::Infinity => unreachable!(),
            }
        }
        Ext::Finite(total)
    }

    /// The virtual vertices `(ℓ(A_{<α}), h(A_{≥α}))`, ordered by the sweep
    /// of `α` through `(0, ∞]`. Consecutive points are joined by the
    /// virtual edges. Requires finite height and length.
    pub fn virtual_vertices(&self) -> Result<Vec<(Rat, Rat)>> {
        if !self.coeff_of(&Slope::Zero).is_zero() || !self.coeff_of(&Slope::Infinity).is_zero() {
            return Err(Error::InfiniteExtent);
        }
        let slopes = self.support();
        let mut points = Vec::with_capacity(slopes.len() + 1);
        for i in 0..=slopes.len() {
            // α in the interval bounded by slopes[i-1] (inclusive) below.
            let below: KNElement<C> = KNElement {
                terms: self
                    .terms
                    .iter()
                    .take(i)
                    .map(|(s, c)| (s.clone(), c.clone()))
                    .collect(),
            };
            let above: KNElement<C> = KNElement {
                terms: self
                    .terms
                    .iter()
                    .skip(i)
                    .map(|(s, c)| (s.clone(), c.clone()))
                    .collect(),
            };
            let l = match below.length() {
                Ext::Finite(v) => v.to_rat(),
                _ => return Err(Error::InfiniteExtent),
            };
            let h = match above.height() {
                Ext::Finite(v) => v.to_rat(),
                _ => return Err(Error::InfiniteExtent),
            };
            points.push((l, h));
        }
        Ok(points)
    }

    /// Vertex chain of the realization of a nonnegative element as an
    /// actual Newton polygon: the Minkowski sum of `a_α` copies of each
    /// generator polygon, assembled edge by edge. Equals
    /// [`KNElement::virtual_vertices`] on nonnegative elements with finite
    /// extent; elements of infinite height or length are allowed here and
    /// yield a chain that starts or ends away from the axes.
    pub fn realize_polygon(&self) -> Result<Vec<(Rat, Rat)>> {
        for (s, c) in &self.terms {
            if c.is_negative() {
                return Err(Error::NegativeCoefficient(c.to_string(), s.to_string()));
            }
        }
        let a0 = self.coeff_of(&Slope::Zero).to_rat();
        let ainf = self.coeff_of(&Slope::Infinity).to_rat();
        let mut height_total = ainf.clone();
        for (s, c) in &self.terms {
            if let Slope::Finite(_, q) = s {
                height_total += c.to_rat() * Rat::from_integer(q.clone());
            }
        }
        let mut x = a0;
        let mut y = height_total;
        let mut chain = vec![(x.clone(), y.clone())];
        for (s, c) in &self.terms {
            if let Slope::Finite(p, q) = s {
                let cr = c.to_rat();
                if cr.is_zero() {
                    continue;
                }
                x += cr.clone() * Rat::from_integer(p.clone());
                y -= cr * Rat::from_integer(q.clone());
                chain.push((x.clone(), y.clone()));
            }
        }
        Ok(chain)
    }
}

impl KNElement<Int> {
    /// View in the rationalized group `KN ⊗ Q`.
    pub fn to_rational(&self) -> KNElement<Rat> {
        KNElement {
            terms: self
                .terms
                .iter()
                .map(|(s, c)| (s.clone(), c.to_rat()))
                .collect(),
        }
    }
}

impl KNElement<Rat> {
    /// Back to integer coefficients; `None` if any coefficient is not an
    /// integer.
    pub fn to_integral(&self) -> Option<KNElement<Int>> {
        let mut terms = BTreeMap::new();
        for (s, c) in &self.terms {
            if !c.denom().is_one() {
                return None;
            }
            terms.insert(s.clone(), c.numer().clone());
        }
        Some(KNElement { terms })
    }
}

impl<C: Coeff> fmt::Display for KNElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}{{{s}}}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int;

    fn fp(m: i64, n: i64) -> KNElement<Int> {
        KNElement::from_pair(&ExtNat::from(m), &ExtNat::from(n)).unwrap()
    }

    fn fp_ext(m: ExtNat, n: ExtNat) -> Result<KNElement<Int>> {
        KNElement::from_pair(&m, &n)
    }

    /// The E8 alternating Jacobian polygon `2{5} - {3} + {2}`.
    fn e8_aj() -> KNElement<Int> {
        KNElement::term(Slope::finite(5, 1), int(2))
            .add(&KNElement::term(Slope::finite(3, 1), int(-1)))
            .add(&KNElement::generator(Slope::finite(2, 1)))
    }

    #[test]
    fn from_pair_collapses_common_factors() {
        assert_eq!(fp(30, 6), KNElement::term(Slope::finite(5, 1), int(6)));
        assert_eq!(fp(2, 1), KNElement::generator(Slope::finite(2, 1)));
        assert_eq!(
            fp_ext(ExtNat::finite(1), ExtNat::Infinity).unwrap(),
            KNElement::generator(Slope::Zero)
        );
        assert_eq!(
            fp_ext(ExtNat::Infinity, ExtNat::finite(3)).unwrap(),
            KNElement::term(Slope::Infinity, int(3))
        );
    }

    #[test]
    fn from_pair_rejects_undefined_generators() {
        assert!(fp_ext(ExtNat::finite(0), ExtNat::finite(0)).is_err());
        assert!(fp_ext(ExtNat::Infinity, ExtNat::Infinity).is_err());
        // One zero component is the polygon of a unit: the neutral element.
        assert!(fp_ext(ExtNat::finite(0), ExtNat::finite(4))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn group_operations() {
        let a = KNElement::term(Slope::finite(5, 1), int(2));
        assert!(a.add(&a.negate()).is_zero());
        let b = KNElement::generator(Slope::finite(3, 1)).add(&fp(6, 2));
        assert_eq!(b, KNElement::term(Slope::finite(3, 1), int(3)));
        let half = fp(2, 1).to_rational().scale(&crate::rat(1, 2));
        assert_eq!(
            half,
            KNElement::term(Slope::finite(2, 1), crate::rat(1, 2))
        );
    }

    #[test]
    fn degree_and_leading_coeff() {
        let a = e8_aj();
        assert_eq!(a.degree(), Degree::Slope(Slope::finite(5, 1)));
        assert_eq!(a.leading_coeff().unwrap(), int(2));
        assert_eq!(KNElement::<Int>::zero().degree(), Degree::MinusInfinity);
        assert!(KNElement::<Int>::zero().leading_coeff().is_err());
        assert_eq!(
            a.support(),
            vec![Slope::finite(2, 1), Slope::finite(3, 1), Slope::finite(5, 1)]
        );
    }

    #[test]
    fn truncation() {
        let a = e8_aj();
        let t3 = a.truncate_geq(&Slope::finite(3, 1));
        assert_eq!(
            t3,
            KNElement::term(Slope::finite(5, 1), int(2))
                .add(&KNElement::term(Slope::finite(3, 1), int(-1)))
        );
        assert_eq!(a.truncate_geq(&Slope::Zero), a);
        assert!(a.truncate_geq(&Slope::finite(6, 1)).is_zero());
        // Composition truncates at the max.
        let t35 = a.truncate_geq(&Slope::finite(3, 1)).truncate_geq(&Slope::finite(5, 1));
        assert_eq!(t35, a.truncate_geq(&Slope::finite(5, 1)));
    }

    #[test]
    fn height_and_length() {
        let a = e8_aj();
        assert_eq!(a.length(), Ext::Finite(int(9)));
        assert_eq!(a.height(), Ext::Finite(int(2)));
        assert_eq!(
            KNElement::<Int>::generator(Slope::Zero).height(),
            Ext::PosInfinity
        );
        assert_eq!(
            KNElement::<Int>::term(Slope::Zero, int(-1)).height(),
            Ext::NegInfinity
        );
        assert_eq!(
            KNElement::<Int>::generator(Slope::Infinity).length(),
            Ext::PosInfinity
        );
        assert_eq!(KNElement::<Int>::generator(Slope::Zero).length(), Ext::Finite(int(1)));
    }

    #[test]
    fn virtual_vertices_e8() {
        let a = e8_aj();
        let pts = a.virtual_vertices().unwrap();
        let expect: Vec<(Rat, Rat)> = [(0, 2), (2, 1), (-1, 2), (9, 0)]
            .iter()
            .map(|&(x, y)| (crate::rat(x, 1), crate::rat(y, 1)))
            .collect();
        assert_eq!(pts, expect);
    }

    #[test]
    fn virtual_vertices_small() {
        let a = KNElement::<Int>::generator(Slope::finite(2, 1));
        let pts = a.virtual_vertices().unwrap();
        assert_eq!(pts, vec![(crate::rat(0, 1), crate::rat(1, 1)), (crate::rat(2, 1), crate::rat(0, 1))]);
        let z = KNElement::<Int>::zero();
        assert_eq!(z.virtual_vertices().unwrap(), vec![(crate::rat(0, 1), crate::rat(0, 1))]);
        assert!(KNElement::<Int>::generator(Slope::Zero).virtual_vertices().is_err());
    }

    #[test]
    fn realize_polygon_examples() {
        let a = KNElement::<Int>::generator(Slope::finite(2, 1))
            .add(&KNElement::generator(Slope::finite(3, 1)));
        let chain = a.realize_polygon().unwrap();
        let expect: Vec<(Rat, Rat)> = [(0, 2), (2, 1), (5, 0)]
            .iter()
            .map(|&(x, y)| (crate::rat(x, 1), crate::rat(y, 1)))
            .collect();
        assert_eq!(chain, expect);

        let b = fp(6, 2);
        assert_eq!(
            b.realize_polygon().unwrap(),
            vec![(crate::rat(0, 1), crate::rat(2, 1)), (crate::rat(6, 1), crate::rat(0, 1))]
        );
        assert_eq!(
            KNElement::<Int>::zero().realize_polygon().unwrap(),
            vec![(crate::rat(0, 1), crate::rat(0, 1))]
        );
        assert!(e8_aj().realize_polygon().is_err());
    }

    #[test]
    fn realization_matches_virtual_vertices_on_nonnegative_elements() {
        let a = fp(4, 6).add(&fp(7, 2)).add(&KNElement::term(Slope::finite(1, 3), int(5)));
        assert_eq!(a.realize_polygon().unwrap(), a.virtual_vertices().unwrap());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_element() -> impl Strategy<Value = KNElement<Int>> {
            proptest::collection::vec(((1i64..=40, 1i64..=40), -4i64..=4), 0..6).prop_map(
                |terms| {
                    let mut acc = KNElement::zero();
                    for ((m, n), c) in terms {
                        acc = acc.add(
                            &KNElement::from_pair(&ExtNat::from(m), &ExtNat::from(n))
                                .unwrap()
                                .scale_int(&int(c)),
                        );
                    }
                    acc
                },
            )
        }

        proptest! {
            #[test]
            fn semigroup_relation(m in 1i64..=30, n in 1i64..=30, c in 1i64..=9) {
                let scaled = KNElement::<Int>::from_pair(&ExtNat::from(c * m), &ExtNat::from(c * n)).unwrap();
                let base = KNElement::<Int>::from_pair(&ExtNat::from(m), &ExtNat::from(n)).unwrap();
                prop_assert_eq!(scaled, base.scale_int(&int(c)));
            }

            #[test]
            fn length_and_height_are_additive(a in arb_element(), b in arb_element()) {
                let sum = a.add(&b);
                let (la, lb, ls) = (a.length(), b.length(), sum.length());
                if let (Ext::Finite(x), Ext::Finite(y), Ext::Finite(z)) = (la, lb, ls) {
                    prop_assert_eq!(x + y, z);
                }
                let (ha, hb, hs) = (a.height(), b.height(), sum.height());
                if let (Ext::Finite(x), Ext::Finite(y), Ext::Finite(z)) = (ha, hb, hs) {
                    prop_assert_eq!(x + y, z);
                }
            }

            #[test]
            fn truncation_composes_to_max(a in arb_element(), p1 in 1i64..=20, q1 in 1i64..=20, p2 in 1i64..=20, q2 in 1i64..=20) {
                let s1 = Slope::finite(p1, q1);
                let s2 = Slope::finite(p2, q2);
                let m = s1.clone().max(s2.clone());
                prop_assert_eq!(
                    a.truncate_geq(&s1).truncate_geq(&s2),
                    a.truncate_geq(&m)
                );
            }

            #[test]
            fn realization_is_a_semigroup_morphism(a in arb_element(), b in arb_element()) {
                // Fold signs away so both elements are nonnegative.
                let a = KNElement { terms: a.terms.iter().map(|(s, c)| (s.clone(), c.abs())).collect() };
                let b = KNElement { terms: b.terms.iter().map(|(s, c)| (s.clone(), c.abs())).collect() };
                let sum_chain = a.add(&b).realize_polygon().unwrap();
                // Minkowski-sum oracle: sum every pair of vertices, keep the
                // lower-left hull, read the chain off by angle.
                let ca = a.realize_polygon().unwrap();
                let cb = b.realize_polygon().unwrap();
                let mut pts = Vec::new();
                for (xa, ya) in &ca {
                    for (xb, yb) in &cb {
                        pts.push((xa + xb, ya + yb));
                    }
                }
                // Lower-left staircase: sort by (x, y); keep points not dominated
                // strictly by the hull of the others via a monotone-chain scan.
                pts.sort();
                pts.dedup();
                let mut hull: Vec<(Rat, Rat)> = Vec::new();
                for p in pts {
                    // For equal x, the sort order guarantees the lowest y
                    // arrives first; later ones sit above the chain.
                    if let Some(last) = hull.last() {
                        if last.0 == p.0 {
                            continue;
                        }
                    }
                    // Walking top-left to bottom-right, the chain turns left
                    // at every vertex; pop anything that breaks that.
                    while hull.len() >= 2 {
                        let a2 = &hull[hull.len() - 2];
                        let b2 = &hull[hull.len() - 1];
                        let cross = (&b2.0 - &a2.0) * (&p.1 - &a2.1) - (&b2.1 - &a2.1) * (&p.0 - &a2.0);
                        if cross <= Rat::zero() {
                            hull.pop();
                        } else {
                            break;
                        }
                    }
                    hull.push(p);
                }
                prop_assert_eq!(sum_chain, hull);
            }
        }
    }
}
