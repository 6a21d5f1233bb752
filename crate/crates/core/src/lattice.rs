//! Picard lattices of iterated blow-ups of the projective plane.
//!
//! Classes are integer vectors in the basis `H, e_1, …, e_n` with the
//! diagonal form `H² = 1`, `e_i² = -1`. Blow-downs never shrink the
//! coordinate vectors: a blown-down class `e` stays in the ambient space and
//! every surviving class is replaced by its pullback representative, which
//! is orthogonal to `e`. Pairings of representatives are pairings on the
//! blown-down surface.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("class length {got} does not match lattice dimension {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("curve name `{0}` is already in use")]
    DuplicateName(String),
    #[error("cannot blow up a singular model (contracted set is non-empty)")]
    SingularModel,
    #[error("curves `{0}` and `{1}` do not meet")]
    NotIntersecting(String, String),
    #[error("a point on the intersection needs two distinct curves, got `{0}` twice")]
    SameCurve(String),
    #[error("`{name}` is not a (-1)-curve (C² = {self_int}, K·C = {canonical})")]
    NotMinusOneCurve { name: String, self_int: BigInt, canonical: BigInt },
    #[error("blowing down `{exceptional}` would make `{curve}` singular (they meet {multiplicity} times)")]
    SingularImage { exceptional: String, curve: String, multiplicity: BigInt },
    #[error("curve `{name}` has arithmetic genus {genus}, only smooth rational curves are supported")]
    NotRational { name: String, genus: BigRational },
    #[error("curves `{0}` and `{1}` have negative intersection number")]
    NegativeIntersection(String, String),
    #[error("contracted curve `{name}` has self-intersection {self_int} >= 0")]
    NonNegativeContracted { name: String, self_int: BigInt },
    #[error("intersection matrix of the contracted set {0:?} is not negative definite")]
    NotContractible(Vec<String>),
}

/// A divisor class in the Picard lattice; index 0 is `H`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CurveClass(Vec<BigInt>);

impl CurveClass {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        CurveClass(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        CurveClass(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        CurveClass(vec![BigInt::zero(); dim])
    }

    pub fn hyperplane(dim: usize) -> Self {
        Self::basis(dim, 0)
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut c = Self::zero(dim);
        c.0[index] = BigInt::one();
        c
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        CurveClass(self.0.iter().map(|c| c * k).collect())
    }

    fn extended(&self, dim: usize) -> Self {
        let mut v = self.0.clone();
        v.resize(dim, BigInt::zero());
        CurveClass(v)
    }

    /// The diagonal pairing; callers guarantee equal lengths.
    fn dot(&self, other: &Self) -> BigInt {
        debug_assert_eq!(self.len(), other.len());
        let mut it = self.0.iter().zip(&other.0);
        let mut acc = match it.next() {
            Some((a, b)) => a * b,
            None => return BigInt::zero(),
        };
        for (a, b) in it {
            acc -= a * b;
        }
        acc
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let basis = if i == 0 { "H".to_string() } else { format!("e{i}") };
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mag.is_one() {
                write!(f, "{basis}")?;
            } else {
                write!(f, "{mag}{basis}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &CurveClass {
    type Output = CurveClass;
    fn add(self, rhs: &CurveClass) -> CurveClass {
        CurveClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &CurveClass {
    type Output = CurveClass;
    fn sub(self, rhs: &CurveClass) -> CurveClass {
        CurveClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &CurveClass {
    type Output = CurveClass;
    fn neg(self) -> CurveClass {
        CurveClass(self.0.iter().map(|a| -a).collect())
    }
}

/// Where a blow-up centre sits relative to the tracked curves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PointSpec {
    General,
    OnCurve(String),
    AtIntersection(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HistoryEntry {
    BlowUp { point: PointSpec, name: String, index: usize },
    BlowDown { name: String },
}

/// A smooth surface `Y` obtained from the plane by blow-ups and blow-downs,
/// together with a set of tracked curves and a contracted subset. The
/// contracted subset describes a normal surface `X` with `Y → X` its
/// resolution; an empty set means `X = Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceModel {
    dim: usize,
    active_rank: usize,
    canonical: CurveClass,
    curves: BTreeMap<String, CurveClass>,
    contracted: BTreeSet<String>,
    history: Vec<HistoryEntry>,
}

impl Default for SurfaceModel {
    fn default() -> Self {
        Self::projective_plane()
    }
}

impl SurfaceModel {
    pub fn projective_plane() -> Self {
        SurfaceModel {
            dim: 1,
            active_rank: 1,
            canonical: CurveClass::from_i64(&[-3]),
            curves: BTreeMap::new(),
            contracted: BTreeSet::new(),
            history: Vec::new(),
        }
    }

    /// Length of every class vector (1 + number of blow-ups performed).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Picard number of the smooth model `Y`.
    pub fn active_rank(&self) -> usize {
        self.active_rank
    }

    /// Picard number of the (possibly singular) surface `X`.
    pub fn picard_number(&self) -> usize {
        self.active_rank - self.contracted.len()
    }

    pub fn canonical(&self) -> &CurveClass {
        &self.canonical
    }

    pub fn curves(&self) -> &BTreeMap<String, CurveClass> {
        &self.curves
    }

    pub fn curve(&self, name: &str) -> Result<&CurveClass, LatticeError> {
        self.curves.get(name).ok_or_else(|| LatticeError::UnknownCurve(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.curves.contains_key(name)
    }

    pub fn contracted(&self) -> &BTreeSet<String> {
        &self.contracted
    }

    pub fn is_contracted(&self, name: &str) -> bool {
        self.contracted.contains(name)
    }

    pub fn is_smooth(&self) -> bool {
        self.contracted.is_empty()
    }

    pub fn history(&self) -> &[HistoryEntry] {
        &self.history
    }

    /// Tracked curves that are not contracted, i.e. curves on `X`.
    pub fn surviving_curves(&self) -> impl Iterator<Item = &str> {
        self.curves.keys().filter(|n| !self.contracted.contains(*n)).map(String::as_str)
    }

    pub fn intersect(&self, a: &CurveClass, b: &CurveClass) -> Result<BigInt, LatticeError> {
        for c in [a, b] {
            if c.len() != self.dim {
                return Err(LatticeError::LengthMismatch { expected: self.dim, got: c.len() });
            }
        }
        Ok(a.dot(b))
    }

    /// Intersection number of two tracked curves.
    pub fn intersection(&self, a: &str, b: &str) -> Result<BigInt, LatticeError> {
        Ok(self.curve(a)?.dot(self.curve(b)?))
    }

    pub fn self_intersection(&self, name: &str) -> Result<BigInt, LatticeError> {
        self.intersection(name, name)
    }

    /// `K·C` for a tracked curve.
    pub fn canonical_degree(&self, name: &str) -> Result<BigInt, LatticeError> {
        Ok(self.canonical.dot(self.curve(name)?))
    }

    /// `1 + (C² + K·C) / 2`.
    pub fn arithmetic_genus(&self, c: &CurveClass) -> Result<BigRational, LatticeError> {
        let s = self.intersect(c, c)? + self.intersect(&self.canonical, c)?;
        Ok(BigRational::one() + BigRational::new(s, BigInt::from(2)))
    }

    /// Gram matrix of the coordinate basis `H, e_1, …`.
    pub fn gram_matrix(&self) -> linalg::Matrix {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| {
                        let a = CurveClass::basis(self.dim, i);
                        let b = CurveClass::basis(self.dim, j);
                        a.dot(&b)
                    })
                    .collect()
            })
            .collect()
    }

    /// Intersection matrix of the given tracked curves, in the given order.
    pub fn intersection_matrix(&self, names: &[String]) -> Result<linalg::Matrix, LatticeError> {
        let classes = names.iter().map(|n| self.curve(n)).collect::<Result<Vec<_>, _>>()?;
        Ok(classes.iter().map(|a| classes.iter().map(|b| a.dot(b)).collect()).collect())
    }

    /// Start tracking a curve with the given class. Only smooth rational
    /// curves meeting the other tracked curves non-negatively are accepted.
    pub fn track_curve(&self, name: &str, class: CurveClass) -> Result<SurfaceModel, LatticeError> {
        if self.contains(name) {
            return Err(LatticeError::DuplicateName(name.to_string()));
        }
        let genus = self.arithmetic_genus(&class)?;
        if !genus.is_zero() {
            return Err(LatticeError::NotRational { name: name.to_string(), genus });
        }
        for (other, c) in &self.curves {
            if c.dot(&class).is_negative() {
                return Err(LatticeError::NegativeIntersection(other.clone(), name.to_string()));
            }
        }
        let mut next = self.clone();
        next.curves.insert(name.to_string(), class);
        Ok(next)
    }

    /// Track a general line (class `H`).
    pub fn add_line(&self, name: &str) -> Result<SurfaceModel, LatticeError> {
        self.track_curve(name, CurveClass::hyperplane(self.dim))
    }

    pub fn blow_up(&self, point: PointSpec, exc_name: &str) -> Result<SurfaceModel, LatticeError> {
        if !self.is_smooth() {
            return Err(LatticeError::SingularModel);
        }
        if self.contains(exc_name) {
            return Err(LatticeError::DuplicateName(exc_name.to_string()));
        }
        let through: Vec<&str> = match &point {
            PointSpec::General => vec![],
            PointSpec::OnCurve(c) => {
                self.curve(c)?;
                vec![c.as_str()]
            }
            PointSpec::AtIntersection(a, b) => {
                if a == b {
                    return Err(LatticeError::SameCurve(a.clone()));
                }
                if self.intersection(a, b)? < BigInt::one() {
                    return Err(LatticeError::NotIntersecting(a.clone(), b.clone()));
                }
                vec![a.as_str(), b.as_str()]
            }
        };

        let dim = self.dim + 1;
        let index = self.dim;
        let e = CurveClass::basis(dim, index);
        let mut curves: BTreeMap<String, CurveClass> =
            self.curves.iter().map(|(n, c)| (n.clone(), c.extended(dim))).collect();
        for name in through {
            let c = curves.get_mut(name).expect("checked above");
            *c = &*c - &e;
        }
        curves.insert(exc_name.to_string(), e.clone());
        let mut history = self.history.clone();
        history.push(HistoryEntry::BlowUp { point, name: exc_name.to_string(), index });
        Ok(SurfaceModel {
            dim,
            active_rank: self.active_rank + 1,
            canonical: &self.canonical.extended(dim) + &e,
            curves,
            contracted: self.contracted.clone(),
            history,
        })
    }

    /// Castelnuovo contraction of a tracked (-1)-curve.
    pub fn blow_down(&self, exc_name: &str) -> Result<SurfaceModel, LatticeError> {
        let e = self.curve(exc_name)?.clone();
        let self_int = e.dot(&e);
        let canonical = self.canonical.dot(&e);
        if self_int != -BigInt::one() || canonical != -BigInt::one() {
            return Err(LatticeError::NotMinusOneCurve {
                name: exc_name.to_string(),
                self_int,
                canonical,
            });
        }
        let mut curves = BTreeMap::new();
        for (name, c) in &self.curves {
            if name == exc_name {
                continue;
            }
            let m = c.dot(&e);
            if m.is_negative() {
                return Err(LatticeError::NegativeIntersection(name.clone(), exc_name.to_string()));
            }
            if m > BigInt::one() {
                return Err(LatticeError::SingularImage {
                    exceptional: exc_name.to_string(),
                    curve: name.clone(),
                    multiplicity: m,
                });
            }
            curves.insert(name.clone(), c + &e.scale(&m));
        }
        let mut contracted = self.contracted.clone();
        contracted.remove(exc_name);
        let mut history = self.history.clone();
        history.push(HistoryEntry::BlowDown { name: exc_name.to_string() });
        Ok(SurfaceModel {
            dim: self.dim,
            active_rank: self.active_rank - 1,
            // K + (K·e)e with K·e = -1
            canonical: &self.canonical - &e,
            curves,
            contracted,
            history,
        })
    }

    /// Adds curves to the contracted set after checking that the enlarged
    /// set is negative definite.
    pub fn contract<I, S>(&self, names: I) -> Result<SurfaceModel, LatticeError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut next = self.clone();
        for n in names {
            let n = n.as_ref();
            self.curve(n)?;
            next.contracted.insert(n.to_string());
        }
        next.check_contracted()?;
        Ok(next)
    }

    fn check_contracted(&self) -> Result<(), LatticeError> {
        let names: Vec<String> = self.contracted.iter().cloned().collect();
        for n in &names {
            let s = self.self_intersection(n)?;
            if !s.is_negative() {
                return Err(LatticeError::NonNegativeContracted { name: n.clone(), self_int: s });
            }
        }
        if !linalg::is_negative_definite(&self.intersection_matrix(&names)?) {
            return Err(LatticeError::NotContractible(names));
        }
        Ok(())
    }

    /// Checks every model invariant: genus 0 tracked curves, non-negative
    /// pairwise intersections and a contractible contracted set.
    pub fn validate(&self) -> Result<(), LatticeError> {
        for (name, c) in &self.curves {
            let genus = self.arithmetic_genus(c)?;
            if !genus.is_zero() {
                return Err(LatticeError::NotRational { name: name.clone(), genus });
            }
        }
        let names: Vec<&String> = self.curves.keys().collect();
        for (i, a) in names.iter().enumerate() {
            for b in &names[i + 1..] {
                if self.intersection(a, b)?.is_negative() {
                    return Err(LatticeError::NegativeIntersection((*a).clone(), (*b).clone()));
                }
            }
        }
        self.check_contracted()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn plane_basics() {
        let p2 = SurfaceModel::projective_plane();
        let k = p2.canonical().clone();
        let h = CurveClass::hyperplane(1);
        assert_eq!(p2.intersect(&k, &k).unwrap(), int(9));
        assert_eq!(p2.intersect(&h, &h).unwrap(), int(1));
        assert!(p2.arithmetic_genus(&h).unwrap().is_zero());
        assert_eq!(p2.arithmetic_genus(&h.scale(&int(3))).unwrap(), BigRational::one());
        assert_eq!(p2.active_rank(), 1);
        assert!(p2.is_smooth());
    }

    #[test]
    fn first_blow_up_is_minus_one_curve() {
        let y = SurfaceModel::projective_plane().blow_up(PointSpec::General, "E0").unwrap();
        assert_eq!(y.self_intersection("E0").unwrap(), int(-1));
        assert_eq!(y.canonical_degree("E0").unwrap(), int(-1));
        let k = y.canonical().clone();
        assert_eq!(y.intersect(&k, &k).unwrap(), int(8));
    }

    #[test]
    fn points_on_curve_lower_self_intersection() {
        let mut y = SurfaceModel::projective_plane().blow_up(PointSpec::General, "E0").unwrap();
        for n in ["A", "B", "C"] {
            y = y.blow_up(PointSpec::OnCurve("E0".into()), n).unwrap();
        }
        assert_eq!(y.self_intersection("E0").unwrap(), int(-4));
        assert_eq!(y.intersection("E0", "A").unwrap(), int(1));
    }

    #[test]
    fn blow_up_at_node_separates() {
        let y = SurfaceModel::projective_plane()
            .blow_up(PointSpec::General, "A")
            .unwrap()
            .blow_up(PointSpec::OnCurve("A".into()), "B")
            .unwrap();
        assert_eq!(y.intersection("A", "B").unwrap(), int(1));
        let z = y.blow_up(PointSpec::AtIntersection("A".into(), "B".into()), "C").unwrap();
        assert_eq!(z.intersection("A", "B").unwrap(), int(0));
        assert_eq!(z.intersection("A", "C").unwrap(), int(1));
        assert_eq!(z.intersection("B", "C").unwrap(), int(1));
        z.validate().unwrap();
    }

    #[test]
    fn blow_up_errors() {
        let y = SurfaceModel::projective_plane().blow_up(PointSpec::General, "A").unwrap();
        assert_eq!(
            y.blow_up(PointSpec::General, "A"),
            Err(LatticeError::DuplicateName("A".into()))
        );
        assert_eq!(
            y.blow_up(PointSpec::OnCurve("Z".into()), "B"),
            Err(LatticeError::UnknownCurve("Z".into()))
        );
        let y = y.blow_up(PointSpec::General, "B").unwrap();
        assert_eq!(
            y.blow_up(PointSpec::AtIntersection("A".into(), "B".into()), "C"),
            Err(LatticeError::NotIntersecting("A".into(), "B".into()))
        );
        let y = y.blow_up(PointSpec::OnCurve("A".into()), "C").unwrap();
        let x = y.contract(["A"]).unwrap();
        assert_eq!(x.blow_up(PointSpec::General, "D"), Err(LatticeError::SingularModel));
    }

    #[test]
    fn round_trip_blow_down() {
        let y = SurfaceModel::projective_plane().blow_up(PointSpec::General, "E").unwrap();
        let x = y.blow_down("E").unwrap();
        let k = x.canonical().clone();
        assert_eq!(x.intersect(&k, &k).unwrap(), int(9));
        assert_eq!(x.active_rank(), 1);
        // the new canonical representative is orthogonal to e
        let e = y.curve("E").unwrap();
        assert_eq!(x.intersect(&k, e).unwrap(), int(0));
    }

    #[test]
    fn neighbour_gains_self_intersection() {
        // C = e1 - e2 has C² = -2 and meets e2 once
        let y = SurfaceModel::projective_plane()
            .blow_up(PointSpec::General, "C")
            .unwrap()
            .blow_up(PointSpec::OnCurve("C".into()), "E")
            .unwrap();
        assert_eq!(y.self_intersection("C").unwrap(), int(-2));
        let x = y.blow_down("E").unwrap();
        assert_eq!(x.self_intersection("C").unwrap(), int(-1));
        assert!(!x.contains("E"));
    }

    #[test]
    fn blow_down_rejects_non_exceptional() {
        let y = SurfaceModel::projective_plane()
            .blow_up(PointSpec::General, "C")
            .unwrap()
            .blow_up(PointSpec::OnCurve("C".into()), "E")
            .unwrap();
        assert!(matches!(y.blow_down("C"), Err(LatticeError::NotMinusOneCurve { .. })));
        assert_eq!(y.blow_down("Q"), Err(LatticeError::UnknownCurve("Q".into())));
    }

    #[test]
    fn lines_and_tracking() {
        let p2 = SurfaceModel::projective_plane().add_line("L").unwrap();
        let y = p2.blow_up(PointSpec::OnCurve("L".into()), "E").unwrap();
        assert_eq!(y.self_intersection("L").unwrap(), int(0));
        assert_eq!(y.intersection("L", "E").unwrap(), int(1));
        let conic = CurveClass::from_i64(&[2, 0]);
        y.track_curve("Q", conic).unwrap();
        let cubic = CurveClass::from_i64(&[3, 0]);
        assert!(matches!(y.track_curve("T", cubic), Err(LatticeError::NotRational { .. })));
    }

    #[test]
    fn contract_requires_negative_definite() {
        let y = SurfaceModel::projective_plane().add_line("L").unwrap();
        assert!(matches!(y.contract(["L"]), Err(LatticeError::NonNegativeContracted { .. })));
    }

    #[test]
    fn signature_of_basis() {
        let mut y = SurfaceModel::projective_plane();
        for i in 0..4 {
            y = y.blow_up(PointSpec::General, &format!("E{i}")).unwrap();
        }
        let minors = linalg::leading_principal_minors(&y.gram_matrix()).unwrap();
        // 1, -1, 1, -1, 1 : one positive and rank-1 negative directions
        let signs: Vec<i64> = minors.iter().map(|m| if m.is_positive() { 1 } else { -1 }).collect();
        assert_eq!(signs, vec![1, -1, 1, -1, 1]);
    }

    #[test]
    fn display_class() {
        let c = CurveClass::from_i64(&[1, -1, 0, 2]);
        assert_eq!(c.to_string(), "H - e1 + 2e3");
        assert_eq!(CurveClass::zero(3).to_string(), "0");
    }
}
