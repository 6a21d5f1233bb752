//! Mumford pullbacks, discrepancies and the ε-classification of contracted
//! configurations.
//!
//! For a model `Y → X` contracting `E_1, …, E_k` and a boundary `Δ` on `X`
//! (given on `Y` by its strict transform `Δ'`) the log pullback is
//! `K_Y + Γ = f*(K_X + Δ)` with `Γ = Δ' + Σ b_i E_i`. The `b_i` are the
//! unique rationals making `K_Y + Γ` orthogonal to every `E_j`, and the log
//! discrepancies are `a_i = -b_i`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::dual_graph::WeightedDualGraph;
use crate::lattice::{LatticeError, SurfaceModel};
use crate::linalg::{self, LinalgError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SingularityError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("intersection matrix of {0:?} is not negative definite")]
    NotContractible(Vec<String>),
    #[error("`{0}` is contracted and cannot carry a boundary coefficient")]
    BoundaryOnContracted(String),
    #[error("boundary coefficient of `{name}` is {value}, expected a value in [0, 1]")]
    CoefficientOutOfRange { name: String, value: BigRational },
    #[error("epsilon {0} is outside [0, 1]")]
    EpsilonOutOfRange(BigRational),
    #[error("`{a}` and `{b}` meet with multiplicity {multiplicity}; only simple normal crossing configurations are classified")]
    NonSnc { a: String, b: String, multiplicity: BigInt },
    #[error("`{0}` is not a smooth rational curve; only simple normal crossing configurations are classified")]
    NonRationalVertex(String),
}

/// A ℚ-divisor supported on named curves. Zero coefficients are not stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QDivisor(BTreeMap<String, BigRational>);

impl QDivisor {
    pub fn new() -> Self {
        QDivisor::default()
    }

    pub fn from_pairs<S: AsRef<str>>(pairs: impl IntoIterator<Item = (S, BigRational)>) -> Self {
        let mut d = QDivisor::new();
        for (n, q) in pairs {
            d.set(n.as_ref(), q);
        }
        d
    }

    pub fn get(&self, name: &str) -> BigRational {
        self.0.get(name).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn set(&mut self, name: &str, value: BigRational) {
        if value.is_zero() {
            self.0.remove(name);
        } else {
            self.0.insert(name.to_string(), value);
        }
    }

    pub fn remove(&mut self, name: &str) -> Option<BigRational> {
        self.0.remove(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &BigRational)> {
        self.0.iter().map(|(n, q)| (n.as_str(), q))
    }

    pub fn support(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.0.values().all(|q| !q.is_negative())
    }

    pub fn scale(&self, k: &BigRational) -> QDivisor {
        QDivisor::from_pairs(self.iter().map(|(n, q)| (n, q * k)))
    }
}

impl fmt::Display for QDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.iter().map(|(n, q)| format!("{q}·{n}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Result of a log pullback computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogPullback {
    /// `Γ`: boundary coefficients on surviving curves and `b_i` on
    /// contracted curves.
    pub boundary_part: QDivisor,
    /// `a_i = -b_i` for every contracted curve (zeros included).
    pub discrepancies: BTreeMap<String, BigRational>,
    /// Coefficients `c_i` of `f*Δ = Δ' + Σ c_i E_i`.
    pub pullback_coeffs: QDivisor,
}

impl LogPullback {
    /// `(K_Y + Γ)·E_j` for every contracted curve; all zero for a correct
    /// solve.
    pub fn orthogonality_defects(&self, model: &SurfaceModel) -> Result<Vec<BigRational>, SingularityError> {
        model
            .contracted()
            .iter()
            .map(|e| {
                let k = BigRational::from_integer(model.canonical_degree(e)?);
                Ok(k + pair_with_curve(model, &self.boundary_part, e)?)
            })
            .collect()
    }
}

/// Total discrepancy: a rational, or `-∞` when some coefficient exceeds 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Discrepancy {
    NegInfinity,
    Finite(BigRational),
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Discrepancy::NegInfinity => write!(f, "-inf"),
            Discrepancy::Finite(q) => write!(f, "{q}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    /// total discrepancy `> -1 + ε`
    EpsLogTerminal,
    /// total discrepancy `= -1 + ε`
    EpsLogCanonical,
    /// total discrepancy `< -1 + ε`
    NotLogCanonical,
}

impl Classification {
    pub fn at(total: &Discrepancy, epsilon: &BigRational) -> Self {
        match total {
            Discrepancy::NegInfinity => Classification::NotLogCanonical,
            Discrepancy::Finite(t) => {
                let threshold = epsilon - BigRational::one();
                match t.cmp(&threshold) {
                    std::cmp::Ordering::Greater => Classification::EpsLogTerminal,
                    std::cmp::Ordering::Equal => Classification::EpsLogCanonical,
                    std::cmp::Ordering::Less => Classification::NotLogCanonical,
                }
            }
        }
    }

    /// ε-log canonical in the wide sense (terminal or exactly canonical).
    pub fn is_eps_log_canonical(self) -> bool {
        self != Classification::NotLogCanonical
    }

    pub fn label(self) -> &'static str {
        match self {
            Classification::EpsLogTerminal => "eps-log-terminal",
            Classification::EpsLogCanonical => "eps-log-canonical",
            Classification::NotLogCanonical => "not-log-canonical",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularityClass {
    pub epsilon: BigRational,
    pub total_discrepancy: Discrepancy,
    pub classification: Classification,
    pub mr_total_discrepancy: BigRational,
    pub mr_classification: Classification,
    /// Discrepancies of the exceptional curves of the minimal resolution.
    pub exceptional_discrepancies: BTreeMap<String, BigRational>,
}

/// A simple normal crossing configuration with coefficients `b_i` on its
/// components (`K_Y + Σ b_i B_i` is the pulled-back log canonical class).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SncConfiguration {
    names: Vec<String>,
    coefficients: Vec<BigRational>,
    edges: Vec<(usize, usize, BigInt)>,
}

impl SncConfiguration {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: &str, coefficient: BigRational) -> usize {
        self.names.push(name.to_string());
        self.coefficients.push(coefficient);
        self.names.len() - 1
    }

    pub fn add_edge(&mut self, a: usize, b: usize, multiplicity: BigInt) {
        self.edges.push((a, b, multiplicity));
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn edges(&self) -> &[(usize, usize, BigInt)] {
        &self.edges
    }
}

/// Infimum of the discrepancies of all divisors over a log smooth pair,
/// including the components of the pair itself:
/// `min(1, -b_i, 1 - b_i - b_j for meeting i, j)`, or `-∞` once some
/// `b_i > 1`.
pub fn total_discrepancy_snc(config: &SncConfiguration) -> Result<Discrepancy, SingularityError> {
    for (a, b, m) in &config.edges {
        if *m > BigInt::one() {
            return Err(SingularityError::NonSnc {
                a: config.names[*a].clone(),
                b: config.names[*b].clone(),
                multiplicity: m.clone(),
            });
        }
    }
    let one = BigRational::one();
    if config.coefficients.iter().any(|b| *b > one) {
        return Ok(Discrepancy::NegInfinity);
    }
    let mut total = one.clone();
    for b in &config.coefficients {
        total = total.min(-b);
    }
    for (i, j, m) in &config.edges {
        if m.is_zero() {
            continue;
        }
        total = total.min(&one - &config.coefficients[*i] - &config.coefficients[*j]);
    }
    Ok(Discrepancy::Finite(total))
}

fn check_epsilon(epsilon: &BigRational) -> Result<(), SingularityError> {
    if epsilon.is_negative() || *epsilon > BigRational::one() {
        return Err(SingularityError::EpsilonOutOfRange(epsilon.clone()));
    }
    Ok(())
}

/// Validates a boundary: tracked, not contracted, coefficients in `[0, 1]`.
pub fn check_boundary(model: &SurfaceModel, boundary: &QDivisor) -> Result<(), SingularityError> {
    for (name, q) in boundary.iter() {
        model.curve(name)?;
        if model.is_contracted(name) {
            return Err(SingularityError::BoundaryOnContracted(name.to_string()));
        }
        if q.is_negative() || *q > BigRational::one() {
            return Err(SingularityError::CoefficientOutOfRange { name: name.to_string(), value: q.clone() });
        }
    }
    Ok(())
}

/// `D·C` for a ℚ-divisor on tracked curves and a tracked curve, on `Y`.
pub fn pair_with_curve(model: &SurfaceModel, d: &QDivisor, curve: &str) -> Result<BigRational, LatticeError> {
    let mut acc = BigRational::zero();
    for (n, q) in d.iter() {
        acc += q * BigRational::from_integer(model.intersection(n, curve)?);
    }
    Ok(acc)
}

fn contracted_matrix(model: &SurfaceModel) -> Result<(Vec<String>, linalg::Matrix), SingularityError> {
    let names: Vec<String> = model.contracted().iter().cloned().collect();
    let m = model.intersection_matrix(&names)?;
    if !linalg::is_negative_definite(&m) {
        return Err(SingularityError::NotContractible(names));
    }
    Ok((names, m))
}

/// Coefficients `c_i` with `(D + Σ c_i E_i)·E_j = 0` for every contracted
/// `E_j`.
pub fn pullback(model: &SurfaceModel, divisor: &QDivisor) -> Result<QDivisor, SingularityError> {
    for name in divisor.support() {
        model.curve(name)?;
        if model.is_contracted(name) {
            return Err(SingularityError::BoundaryOnContracted(name.to_string()));
        }
    }
    let (names, m) = contracted_matrix(model)?;
    let rhs = names
        .iter()
        .map(|e| pair_with_curve(model, divisor, e).map(|v| -v))
        .collect::<Result<Vec<_>, _>>()?;
    let c = linalg::solve(&m, &rhs)?;
    Ok(QDivisor::from_pairs(names.into_iter().zip(c)))
}

/// Solves `Σ_i a_i (E_i·E_j) = (K_Y + Δ')·E_j` over the contracted set.
pub fn log_discrepancies(model: &SurfaceModel, boundary: &QDivisor) -> Result<LogPullback, SingularityError> {
    check_boundary(model, boundary)?;
    let (names, m) = contracted_matrix(model)?;
    let rhs = names
        .iter()
        .map(|e| {
            let k = BigRational::from_integer(model.canonical_degree(e)?);
            Ok(k + pair_with_curve(model, boundary, e)?)
        })
        .collect::<Result<Vec<_>, LatticeError>>()?;
    let a = linalg::solve(&m, &rhs)?;
    let mut gamma = boundary.clone();
    for (n, ai) in names.iter().zip(&a) {
        gamma.set(n, -ai);
    }
    Ok(LogPullback {
        boundary_part: gamma,
        discrepancies: names.into_iter().zip(a).collect(),
        pullback_coeffs: pullback(model, boundary)?,
    })
}

/// `(K_X + Δ)·C` for a surviving tracked curve `C`, computed as
/// `(K_Y + Γ)·C̃`.
pub fn log_canonical_degree(
    model: &SurfaceModel,
    lp: &LogPullback,
    curve: &str,
) -> Result<BigRational, SingularityError> {
    let k = BigRational::from_integer(model.canonical_degree(curve)?);
    Ok(k + pair_with_curve(model, &lp.boundary_part, curve)?)
}

/// `C²` on `X` for a surviving tracked curve: `C̃·(C̃ + Σ c_i E_i)`.
pub fn self_intersection_on_contraction(model: &SurfaceModel, curve: &str) -> Result<BigRational, SingularityError> {
    let d = QDivisor::from_pairs([(curve, BigRational::one())]);
    let c = pullback(model, &d)?;
    let mut full = c;
    full.set(curve, BigRational::one());
    Ok(pair_with_curve(model, &full, curve)?)
}

/// `D_1·D_2` on `X` for ℚ-divisors supported on surviving curves.
pub fn intersection_on_contraction(
    model: &SurfaceModel,
    d1: &QDivisor,
    d2: &QDivisor,
) -> Result<BigRational, SingularityError> {
    let mut full = pullback(model, d2)?;
    for (n, q) in d2.iter() {
        full.set(n, q.clone());
    }
    let mut acc = BigRational::zero();
    for (n, q) in d1.iter() {
        acc += q * pair_with_curve(model, &full, n)?;
    }
    Ok(acc)
}

/// Blows down contracted (-1)-curves, smallest name first, until none is
/// left. The result is the minimal resolution of `X`.
pub fn minimal_resolution(model: &SurfaceModel) -> Result<SurfaceModel, SingularityError> {
    contracted_matrix(model)?;
    let mut current = model.clone();
    loop {
        let next = current
            .contracted()
            .iter()
            .find(|n| current.self_intersection(n).map(|s| s == -BigInt::one()).unwrap_or(false))
            .cloned();
        match next {
            Some(n) => current = current.blow_down(&n)?,
            None => return Ok(current),
        }
    }
}

fn summarize(
    total: Discrepancy,
    exceptional: BTreeMap<String, BigRational>,
    boundary: &QDivisor,
    epsilon: &BigRational,
) -> SingularityClass {
    let mut mr = BigRational::one();
    for a in exceptional.values() {
        mr = mr.min(a.clone());
    }
    for (_, q) in boundary.iter() {
        mr = mr.min(-q);
    }
    let classification = Classification::at(&total, epsilon);
    let mr_classification = Classification::at(&Discrepancy::Finite(mr.clone()), epsilon);
    SingularityClass {
        epsilon: epsilon.clone(),
        total_discrepancy: total,
        classification,
        mr_total_discrepancy: mr,
        mr_classification,
        exceptional_discrepancies: exceptional,
    }
}

/// Total discrepancy read off the resolution `model`: its contracted curves
/// with `b_i = -a_i` and the boundary curves with their coefficients.
fn total_on_resolution(model: &SurfaceModel, boundary: &QDivisor) -> Result<Discrepancy, SingularityError> {
    let lp = log_discrepancies(model, boundary)?;
    let mut config = SncConfiguration::new();
    let mut names = Vec::new();
    for e in model.contracted() {
        config.add_vertex(e, -&lp.discrepancies[e]);
        names.push(e.clone());
    }
    for (n, q) in boundary.iter() {
        config.add_vertex(n, q.clone());
        names.push(n.to_string());
    }
    for (i, a) in names.iter().enumerate() {
        for (j, b) in names.iter().enumerate().skip(i + 1) {
            let m = model.intersection(a, b)?;
            if !m.is_zero() {
                config.add_edge(i, j, m);
            }
        }
    }
    total_discrepancy_snc(&config)
}

/// Classifies `(X, Δ)` at level `ε`. Exceptional discrepancies come from
/// the minimal resolution. The total discrepancy is read off the minimal
/// resolution when that is a log resolution, and off `model` otherwise.
pub fn classify(
    model: &SurfaceModel,
    boundary: &QDivisor,
    epsilon: &BigRational,
) -> Result<SingularityClass, SingularityError> {
    check_epsilon(epsilon)?;
    check_boundary(model, boundary)?;
    let res = minimal_resolution(model)?;
    let lp = log_discrepancies(&res, boundary)?;
    let total = match total_on_resolution(&res, boundary) {
        Err(SingularityError::NonSnc { .. }) if &res != model => total_on_resolution(model, boundary)?,
        other => other?,
    };
    Ok(summarize(total, lp.discrepancies, boundary, epsilon))
}

fn graph_total(g: &WeightedDualGraph, a: &BTreeMap<String, BigRational>) -> Result<Discrepancy, SingularityError> {
    let mut config = SncConfiguration::new();
    for v in g.vertices() {
        if !v.genus.is_zero() {
            return Err(SingularityError::NonRationalVertex(v.name.clone()));
        }
        config.add_vertex(&v.name, -&a[&v.name]);
    }
    for (x, y, m) in g.edges() {
        config.add_edge(g.index(x).expect("vertex"), g.index(y).expect("vertex"), m.clone());
    }
    total_discrepancy_snc(&config)
}

/// Discrepancies of an abstract configuration in which every vertex is
/// contracted: solves `Σ_i a_i (E_i·E_j) = K·E_j` with `K·E` from
/// adjunction.
pub fn graph_discrepancies(g: &WeightedDualGraph) -> Result<BTreeMap<String, BigRational>, SingularityError> {
    let m = g.intersection_matrix();
    let names: Vec<String> = g.vertices().iter().map(|v| v.name.clone()).collect();
    if !linalg::is_negative_definite(&m) {
        return Err(SingularityError::NotContractible(names));
    }
    let rhs: Vec<BigRational> = g.vertices().iter().map(|v| v.canonical_degree()).collect();
    let a = linalg::solve(&m, &rhs)?;
    Ok(names.into_iter().zip(a).collect())
}

/// Classifies the singularity obtained by contracting every vertex of an
/// abstract dual graph, with empty boundary. The minimal resolution is
/// computed on the graph itself; `g` is used for the total discrepancy when
/// the minimal resolution is not a log resolution.
pub fn classify_graph(g: &WeightedDualGraph, epsilon: &BigRational) -> Result<SingularityClass, SingularityError> {
    check_epsilon(epsilon)?;
    let names: Vec<String> = g.vertices().iter().map(|v| v.name.clone()).collect();
    if !linalg::is_negative_definite(&g.intersection_matrix()) {
        return Err(SingularityError::NotContractible(names));
    }
    let res = g.minimal_resolution();
    let a = graph_discrepancies(&res)?;
    let total = match graph_total(&res, &a) {
        Err(SingularityError::NonSnc { .. } | SingularityError::NonRationalVertex(_)) if &res != g => {
            graph_total(g, &graph_discrepancies(g)?)?
        }
        other => other?,
    };
    Ok(summarize(total, a, &QDivisor::new(), epsilon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::PointSpec;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn snc(coeffs: &[BigRational], edges: &[(usize, usize)]) -> SncConfiguration {
        let mut c = SncConfiguration::new();
        for (i, b) in coeffs.iter().enumerate() {
            c.add_vertex(&format!("V{i}"), b.clone());
        }
        for &(a, b) in edges {
            c.add_edge(a, b, BigInt::one());
        }
        c
    }

    #[test]
    fn snc_single_and_pair() {
        assert_eq!(total_discrepancy_snc(&snc(&[q(1, 1)], &[])).unwrap(), Discrepancy::Finite(q(-1, 1)));
        assert_eq!(
            total_discrepancy_snc(&snc(&[q(1, 2), q(1, 2)], &[(0, 1)])).unwrap(),
            Discrepancy::Finite(q(-1, 2))
        );
        assert_eq!(total_discrepancy_snc(&snc(&[], &[])).unwrap(), Discrepancy::Finite(q(1, 1)));
        assert_eq!(total_discrepancy_snc(&snc(&[q(21, 20)], &[])).unwrap(), Discrepancy::NegInfinity);
    }

    #[test]
    fn snc_star_from_triple_fork() {
        let c = snc(&[q(1, 1), q(1, 2), q(2, 3), q(5, 6)], &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(total_discrepancy_snc(&c).unwrap(), Discrepancy::Finite(q(-1, 1)));
    }

    #[test]
    fn snc_refuses_multi_edges() {
        let mut c = snc(&[q(0, 1), q(0, 1)], &[]);
        c.add_edge(0, 1, BigInt::from(2));
        assert!(matches!(total_discrepancy_snc(&c), Err(SingularityError::NonSnc { .. })));
    }

    #[test]
    fn classification_thresholds() {
        let eps = q(1, 7);
        assert_eq!(Classification::at(&Discrepancy::Finite(q(-6, 7)), &eps), Classification::EpsLogCanonical);
        assert_eq!(Classification::at(&Discrepancy::Finite(q(-5, 7)), &eps), Classification::EpsLogTerminal);
        assert_eq!(Classification::at(&Discrepancy::Finite(q(-1, 1)), &eps), Classification::NotLogCanonical);
        assert_eq!(Classification::at(&Discrepancy::NegInfinity, &q(0, 1)), Classification::NotLogCanonical);
    }

    fn a1_model() -> SurfaceModel {
        // C = e1 - e2 is a (-2)-curve, E = e2 a (-1)-curve meeting it
        SurfaceModel::projective_plane()
            .blow_up(PointSpec::General, "C")
            .unwrap()
            .blow_up(PointSpec::OnCurve("C".into()), "E")
            .unwrap()
    }

    #[test]
    fn a1_point_is_canonical() {
        let x = a1_model().contract(["C"]).unwrap();
        let lp = log_discrepancies(&x, &QDivisor::new()).unwrap();
        assert_eq!(lp.discrepancies["C"], q(0, 1));
        let class = classify(&x, &QDivisor::new(), &q(0, 1)).unwrap();
        assert_eq!(class.total_discrepancy, Discrepancy::Finite(q(0, 1)));
        assert_eq!(class.classification, Classification::EpsLogTerminal);
        let at_one = classify(&x, &QDivisor::new(), &q(1, 1)).unwrap();
        assert_eq!(at_one.classification, Classification::EpsLogCanonical);
    }

    #[test]
    fn pullback_of_disjoint_divisor_vanishes() {
        let y = a1_model().blow_up(PointSpec::General, "F").unwrap();
        let x = y.contract(["C"]).unwrap();
        let c = pullback(&x, &QDivisor::from_pairs([("F", q(1, 1))])).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn pullback_through_a1() {
        let x = a1_model().contract(["C"]).unwrap();
        let c = pullback(&x, &QDivisor::from_pairs([("E", q(1, 1))])).unwrap();
        assert_eq!(c.get("C"), q(1, 2));
        assert_eq!(self_intersection_on_contraction(&x, "E").unwrap(), q(-1, 2));
    }

    #[test]
    fn boundary_errors() {
        let x = a1_model().contract(["C"]).unwrap();
        let on_c = QDivisor::from_pairs([("C", q(1, 2))]);
        assert_eq!(
            log_discrepancies(&x, &on_c),
            Err(SingularityError::BoundaryOnContracted("C".into()))
        );
        let big = QDivisor::from_pairs([("E", q(3, 2))]);
        assert!(matches!(log_discrepancies(&x, &big), Err(SingularityError::CoefficientOutOfRange { .. })));
        assert!(matches!(
            classify(&x, &QDivisor::new(), &q(2, 1)),
            Err(SingularityError::EpsilonOutOfRange(_))
        ));
    }

    #[test]
    fn smooth_surface_without_boundary() {
        let y = a1_model();
        let class = classify(&y, &QDivisor::new(), &q(0, 1)).unwrap();
        assert_eq!(class.total_discrepancy, Discrepancy::Finite(q(1, 1)));
        assert_eq!(class.mr_total_discrepancy, q(1, 1));
    }

    #[test]
    fn contracting_minus_one_curve_gives_smooth_point() {
        let y = SurfaceModel::projective_plane().blow_up(PointSpec::General, "E").unwrap();
        let x = y.contract(["E"]).unwrap();
        let r = minimal_resolution(&x).unwrap();
        assert!(r.is_smooth());
        assert_eq!(r.active_rank(), 1);
        let class = classify(&x, &QDivisor::new(), &q(0, 1)).unwrap();
        assert_eq!(class.total_discrepancy, Discrepancy::Finite(q(1, 1)));
    }
}
