//! The log minimal model program on tracked curves.
//!
//! A step picks a surviving tracked curve `C` with `(K_X + Δ)·C < 0` and
//! `C² < 0` on `X` and contracts it. On the resolution this is either a
//! Castelnuovo blow-down (a (-1)-curve away from the singular points) or the
//! enlargement of the contracted set. Nefness can only be tested against the
//! tracked curves, hence the `MinimalOverTracked` outcome.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{LatticeError, SurfaceModel};
use crate::singularities::{
    self, check_boundary, classify, intersection_on_contraction, log_canonical_degree, log_discrepancies,
    minimal_resolution, pullback, self_intersection_on_contraction, Classification, QDivisor,
    SingularityClass, SingularityError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MmpError {
    #[error(transparent)]
    Singularity(#[from] SingularityError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("`{curve}` cannot be contracted: (K+Δ)·C = {value}, C² = {self_intersection}")]
    NotACandidate { curve: String, value: BigRational, self_intersection: BigRational },
    #[error("`{0}` is already contracted")]
    AlreadyContracted(String),
    #[error("unknown strategy `{0}` (expected `most-negative-first` or `named:A,B,...`)")]
    UnknownStrategy(String),
    #[error("the number of trials must be at least 1")]
    ZeroTrials,
}

/// A log surface `(X_i, Δ_i)` in a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmpState {
    pub surface: SurfaceModel,
    pub boundary: QDivisor,
    pub step_index: usize,
}

impl MmpState {
    pub fn new(surface: SurfaceModel, boundary: QDivisor) -> Result<Self, MmpError> {
        check_boundary(&surface, &boundary)?;
        Ok(MmpState { surface, boundary, step_index: 0 })
    }

    pub fn picard_number(&self) -> usize {
        self.surface.picard_number()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub name: String,
    /// `(K_X + Δ)·C`
    pub extremal_value: BigRational,
    /// `C²` on `X`
    pub self_intersection: BigRational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContractionKind {
    Castelnuovo,
    ArtinType,
}

impl fmt::Display for ContractionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContractionKind::Castelnuovo => write!(f, "castelnuovo"),
            ContractionKind::ArtinType => write!(f, "artin"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmpStep {
    pub index: usize,
    pub contracted_curve: String,
    pub extremal_value: BigRational,
    pub self_intersection: BigRational,
    pub kind: ContractionKind,
    pub rho_before: usize,
    pub rho_after: usize,
    /// Classification of the new surface on its own (empty boundary).
    pub surface_class: Option<SingularityClass>,
    /// Classification of the new pair `(X_{i+1}, Δ_{i+1})`.
    pub pair_class: Option<SingularityClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    MostNegativeFirst,
    /// Listed curves are preferred in list order; unlisted candidates follow
    /// in most-negative-first order.
    NamedOrder(Vec<String>),
}

impl FromStr for Strategy {
    type Err = MmpError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "most-negative-first" {
            return Ok(Strategy::MostNegativeFirst);
        }
        if let Some(rest) = s.strip_prefix("named:") {
            let names: Vec<String> =
                rest.split(',').map(str::trim).filter(|n| !n.is_empty()).map(String::from).collect();
            if !names.is_empty() {
                return Ok(Strategy::NamedOrder(names));
            }
        }
        Err(MmpError::UnknownStrategy(s.to_string()))
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::MostNegativeFirst => write!(f, "most-negative-first"),
            Strategy::NamedOrder(names) => write!(f, "named:{}", names.join(",")),
        }
    }
}

/// Base of a detected Mori fibre space, read off the sign of `C²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FiberBase {
    Point,
    Curve,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// `K + Δ` is non-negative on every surviving tracked curve.
    MinimalOverTracked,
    /// Every `(K+Δ)`-negative tracked curve has `C² >= 0`.
    MoriFiberSignal { curve: String, self_intersection: BigRational, base: FiberBase },
    /// No surviving tracked curves are left to test against.
    Exhausted,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::MinimalOverTracked => write!(f, "minimal over tracked curves"),
            Outcome::MoriFiberSignal { curve, self_intersection, base } => {
                let base = match base {
                    FiberBase::Point => "point",
                    FiberBase::Curve => "curve",
                };
                write!(f, "Mori fibre signal on {curve} (C² = {self_intersection}, base looks like a {base})")
            }
            Outcome::Exhausted => write!(f, "exhausted (no tracked curves left)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmpRun {
    pub strategy: Strategy,
    pub steps: Vec<MmpStep>,
    pub outcome: Outcome,
    pub final_state: MmpState,
    pub audit: AuditReport,
}

/// Surviving tracked curves with `(K_X + Δ)·C < 0`, sorted by value and
/// then by name.
pub fn step_candidates(state: &MmpState) -> Result<Vec<Candidate>, MmpError> {
    let lp = log_discrepancies(&state.surface, &state.boundary)?;
    let mut out = Vec::new();
    for name in state.surface.surviving_curves() {
        let v = log_canonical_degree(&state.surface, &lp, name)?;
        if v.is_negative() {
            out.push(Candidate {
                name: name.to_string(),
                extremal_value: v,
                self_intersection: self_intersection_on_contraction(&state.surface, name)?,
            });
        }
    }
    out.sort_by(|a, b| a.extremal_value.cmp(&b.extremal_value).then_with(|| a.name.cmp(&b.name)));
    Ok(out)
}

/// Contracts one extremal curve.
pub fn contract(state: &MmpState, curve: &str) -> Result<(MmpState, ContractionKind), MmpError> {
    let surface = &state.surface;
    surface.curve(curve)?;
    if surface.is_contracted(curve) {
        return Err(MmpError::AlreadyContracted(curve.to_string()));
    }
    let lp = log_discrepancies(surface, &state.boundary)?;
    let value = log_canonical_degree(surface, &lp, curve)?;
    let self_int = self_intersection_on_contraction(surface, curve)?;
    if !value.is_negative() || !self_int.is_negative() {
        return Err(MmpError::NotACandidate {
            curve: curve.to_string(),
            value,
            self_intersection: self_int,
        });
    }
    let minus_one = surface.self_intersection(curve)? == -BigInt::one();
    let away_from_singularities = surface
        .contracted()
        .iter()
        .all(|e| surface.intersection(curve, e).map(|m| m.is_zero()).unwrap_or(false));
    let (next, kind) = if minus_one && away_from_singularities {
        (surface.blow_down(curve)?, ContractionKind::Castelnuovo)
    } else {
        (surface.contract([curve])?, ContractionKind::ArtinType)
    };
    let mut boundary = state.boundary.clone();
    boundary.remove(curve);
    Ok((MmpState { surface: next, boundary, step_index: state.step_index + 1 }, kind))
}

fn choose<'a>(candidates: &'a [Candidate], strategy: &Strategy) -> &'a Candidate {
    if let Strategy::NamedOrder(order) = strategy {
        for name in order {
            if let Some(c) = candidates.iter().find(|c| &c.name == name) {
                return c;
            }
        }
    }
    &candidates[0]
}

/// Runs the program to completion, auditing every step at level `epsilon`.
pub fn run(state: &MmpState, strategy: &Strategy, epsilon: &BigRational) -> Result<MmpRun, MmpError> {
    let initial = state.clone();
    let mut current = state.clone();
    let mut steps = Vec::new();
    let none = QDivisor::new();
    let outcome = loop {
        if current.surface.surviving_curves().next().is_none() {
            break Outcome::Exhausted;
        }
        let candidates = step_candidates(&current)?;
        if candidates.is_empty() {
            break Outcome::MinimalOverTracked;
        }
        let contractible: Vec<Candidate> =
            candidates.iter().filter(|c| c.self_intersection.is_negative()).cloned().collect();
        if contractible.is_empty() {
            let c = &candidates[0];
            let base = if c.self_intersection.is_positive() { FiberBase::Point } else { FiberBase::Curve };
            break Outcome::MoriFiberSignal {
                curve: c.name.clone(),
                self_intersection: c.self_intersection.clone(),
                base,
            };
        }
        let chosen = choose(&contractible, strategy).clone();
        let rho_before = current.picard_number();
        let (next, kind) = contract(&current, &chosen.name)?;
        steps.push(MmpStep {
            index: steps.len(),
            contracted_curve: chosen.name,
            extremal_value: chosen.extremal_value,
            self_intersection: chosen.self_intersection,
            kind,
            rho_before,
            rho_after: next.picard_number(),
            surface_class: classify(&next.surface, &none, epsilon).ok(),
            pair_class: classify(&next.surface, &next.boundary, epsilon).ok(),
        });
        current = next;
    };
    let mut run = MmpRun {
        strategy: strategy.clone(),
        steps,
        outcome,
        final_state: current,
        audit: AuditReport::default(),
    };
    run.audit = audit_run(&run, &initial, epsilon);
    Ok(run)
}

/// Sign record of `Δ_i·C_i` for one step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundaryDegree {
    /// The pullback of `C_i` to the minimal resolution of `X_i` contains a
    /// (-1)-curve, so no sign is forced.
    NotApplicable,
    Checked(BigRational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepAudit {
    pub index: usize,
    pub curve: String,
    pub kind: Option<ContractionKind>,
    /// `G_i` on the initial resolution with
    /// `f_0*(K_{X_0} + Δ_0) = f_i*(K_{X_i} + Δ_i) + G_i`, here `i` is the
    /// surface after this step.
    pub correction: QDivisor,
    pub effective: bool,
    pub rho_before: usize,
    pub rho_after: usize,
    pub boundary_degree: BoundaryDegree,
    pub surface_class: Option<SingularityClass>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Replaying the recorded step did not reproduce it.
    Replay { step: usize, message: String },
    NotEffective { step: usize, curve: String, coefficient: BigRational },
    RhoDrop { step: usize, before: usize, after: usize },
    TooManySteps { steps: usize, bound: usize },
    BoundaryNotPushforward { step: usize },
    BoundaryDegreeNonNegative { step: usize, value: BigRational },
    /// Surface `X_i` (0 is the start) is not ε-log terminal although the
    /// start is smooth with boundary coefficients at most `1 - ε`.
    NotEpsLogTerminal { surface: usize, class: Box<SingularityClass> },
    Unclassifiable { surface: usize, message: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Replay { step, message } => write!(f, "step {step}: replay failed: {message}"),
            Violation::NotEffective { step, curve, coefficient } => {
                write!(f, "step {step}: correction has coefficient {coefficient} < 0 on {curve}")
            }
            Violation::RhoDrop { step, before, after } => {
                write!(f, "step {step}: Picard number went from {before} to {after}")
            }
            Violation::TooManySteps { steps, bound } => write!(f, "{steps} steps exceed the bound {bound}"),
            Violation::BoundaryNotPushforward { step } => {
                write!(f, "step {step}: boundary is not the pushforward of the initial boundary")
            }
            Violation::BoundaryDegreeNonNegative { step, value } => {
                write!(f, "step {step}: Δ·C = {value} is not negative")
            }
            Violation::NotEpsLogTerminal { surface, class } => write!(
                f,
                "X_{surface} is {} (total discrepancy {})",
                class.classification, class.total_discrepancy
            ),
            Violation::Unclassifiable { surface, message } => write!(f, "X_{surface}: {message}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AuditReport {
    pub epsilon: BigRational,
    pub smooth_start: bool,
    /// Smooth start with every boundary coefficient at most `1 - ε`.
    pub smooth_start_bound_applies: bool,
    pub initial_class: Option<SingularityClass>,
    pub steps: Vec<StepAudit>,
    pub rho_sequence: Vec<usize>,
    pub violations: Vec<Violation>,
    /// Surfaces (by index) that are not log canonical in the plain sense,
    /// recorded for singular starts where this is allowed.
    pub non_log_canonical: Vec<usize>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn boundary_degree(state: &MmpState, curve: &str) -> Result<BoundaryDegree, SingularityError> {
    let res = minimal_resolution(&state.surface)?;
    let c = QDivisor::from_pairs([(curve, BigRational::one())]);
    let mut support: Vec<String> = pullback(&res, &c)?.support().map(String::from).collect();
    support.push(curve.to_string());
    for n in &support {
        if res.self_intersection(n)? == -BigInt::one() {
            return Ok(BoundaryDegree::NotApplicable);
        }
    }
    Ok(BoundaryDegree::Checked(intersection_on_contraction(&res, &state.boundary, &c)?))
}

/// Replays `run` from `initial` and checks, for every step: effectivity of
/// the discrepancy correction relative to the start, the Picard number
/// drop, the sign of `Δ_i·C_i` when forced, and, for smooth starts with
/// coefficients at most `1 - ε`, that every surface is ε-log terminal.
pub fn audit_run(run: &MmpRun, initial: &MmpState, epsilon: &BigRational) -> AuditReport {
    let none = QDivisor::new();
    let one = BigRational::one();
    let smooth_start = initial.surface.is_smooth();
    let bound_applies = smooth_start && initial.boundary.iter().all(|(_, q)| *q <= &one - epsilon);
    let mut report = AuditReport {
        epsilon: epsilon.clone(),
        smooth_start,
        smooth_start_bound_applies: bound_applies,
        rho_sequence: vec![initial.picard_number()],
        ..AuditReport::default()
    };

    let zero = BigRational::zero();
    let check_surface = |report: &mut AuditReport, index: usize, surface: &SurfaceModel| {
        match classify(surface, &none, epsilon) {
            Ok(class) => {
                let plain = Classification::at(&class.total_discrepancy, &zero);
                if plain == Classification::NotLogCanonical {
                    report.non_log_canonical.push(index);
                }
                if bound_applies && class.classification != Classification::EpsLogTerminal {
                    report
                        .violations
                        .push(Violation::NotEpsLogTerminal { surface: index, class: Box::new(class.clone()) });
                }
                Some(class)
            }
            Err(e) => {
                if bound_applies {
                    report.violations.push(Violation::Unclassifiable { surface: index, message: e.to_string() });
                }
                None
            }
        }
    };
    report.initial_class = check_surface(&mut report, 0, &initial.surface);

    let bound = initial.picard_number().saturating_sub(1);
    if run.steps.len() > bound {
        report.violations.push(Violation::TooManySteps { steps: run.steps.len(), bound });
    }

    let gamma0 = match log_discrepancies(&initial.surface, &initial.boundary) {
        Ok(lp) => lp.boundary_part,
        Err(e) => {
            report.violations.push(Violation::Replay { step: 0, message: e.to_string() });
            return report;
        }
    };

    let mut state = initial.clone();
    let mut contracted_so_far: Vec<String> = Vec::new();
    for (i, step) in run.steps.iter().enumerate() {
        let curve = step.contracted_curve.as_str();
        let replayed = step_candidates(&state).ok().and_then(|c| c.into_iter().find(|c| c.name == curve));
        match replayed {
            Some(c) if c.extremal_value == step.extremal_value && c.self_intersection == step.self_intersection => {}
            _ => report.violations.push(Violation::Replay {
                step: i,
                message: format!("`{curve}` is not a candidate with the recorded values"),
            }),
        }

        let degree = match boundary_degree(&state, curve) {
            Ok(d) => d,
            Err(e) => {
                report.violations.push(Violation::Replay { step: i, message: e.to_string() });
                BoundaryDegree::NotApplicable
            }
        };
        if let BoundaryDegree::Checked(v) = &degree {
            if !v.is_negative() {
                report.violations.push(Violation::BoundaryDegreeNonNegative { step: i, value: v.clone() });
            }
        }

        let (next, kind) = match contract(&state, curve) {
            Ok(x) => x,
            Err(e) => {
                report.violations.push(Violation::Replay { step: i, message: e.to_string() });
                break;
            }
        };
        let rho_before = state.picard_number();
        let rho_after = next.picard_number();
        if rho_after + 1 != rho_before {
            report.violations.push(Violation::RhoDrop { step: i, before: rho_before, after: rho_after });
        }
        report.rho_sequence.push(rho_after);

        // Everything contracted so far, as curves on the initial resolution.
        contracted_so_far.push(curve.to_string());
        let mut pushed = initial.boundary.clone();
        for n in &contracted_so_far {
            pushed.remove(n);
        }
        if pushed != next.boundary {
            report.violations.push(Violation::BoundaryNotPushforward { step: i });
        }
        let mut correction = QDivisor::new();
        let mut effective = true;
        match initial
            .surface
            .contract(&contracted_so_far)
            .map_err(SingularityError::from)
            .and_then(|y| log_discrepancies(&y, &pushed).map(|lp| (y, lp)))
        {
            Ok((y, lp)) => {
                for e in y.contracted() {
                    let g = gamma0.get(e) - lp.boundary_part.get(e);
                    if g.is_negative() {
                        effective = false;
                        report.violations.push(Violation::NotEffective {
                            step: i,
                            curve: e.clone(),
                            coefficient: g.clone(),
                        });
                    }
                    correction.set(e, g);
                }
            }
            Err(e) => {
                effective = false;
                report.violations.push(Violation::Replay { step: i, message: e.to_string() });
            }
        }

        let surface_class = check_surface(&mut report, i + 1, &next.surface);
        report.steps.push(StepAudit {
            index: i,
            curve: curve.to_string(),
            kind: Some(kind),
            correction,
            effective,
            rho_before,
            rho_after,
            boundary_degree: degree,
            surface_class,
        });
        state = next;
    }
    report
}

/// Convenience: `(K_X + Δ)·C` for a single surviving curve.
pub fn extremal_value(state: &MmpState, curve: &str) -> Result<BigRational, MmpError> {
    let lp = singularities::log_discrepancies(&state.surface, &state.boundary)?;
    Ok(log_canonical_degree(&state.surface, &lp, curve)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::PointSpec;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn strategy_parsing() {
        assert_eq!("most-negative-first".parse::<Strategy>().unwrap(), Strategy::MostNegativeFirst);
        assert_eq!(
            "named:D, E0".parse::<Strategy>().unwrap(),
            Strategy::NamedOrder(vec!["D".into(), "E0".into()])
        );
        assert!("random".parse::<Strategy>().is_err());
        assert!("named:".parse::<Strategy>().is_err());
        let s = Strategy::NamedOrder(vec!["A".into(), "B".into()]);
        assert_eq!(s.to_string().parse::<Strategy>().unwrap(), s);
    }

    #[test]
    fn short_runs_and_nef_start() {
        let y = SurfaceModel::projective_plane()
            .blow_up(PointSpec::General, "C")
            .unwrap()
            .blow_up(PointSpec::OnCurve("C".into()), "E")
            .unwrap();
        let state = MmpState::new(y.blow_down("E").unwrap(), QDivisor::new()).unwrap();
        let r = run(&state, &Strategy::MostNegativeFirst, &q(0, 1)).unwrap();
        // C is now a (-1)-curve: one Castelnuovo step, then nothing is tracked
        assert_eq!(r.steps.len(), 1);
        assert_eq!(r.outcome, Outcome::Exhausted);

        // three boundary lines: K + L1 + L2 + L3 is trivial on every line
        let mut plane = SurfaceModel::projective_plane();
        for n in ["L1", "L2", "L3", "L4"] {
            plane = plane.add_line(n).unwrap();
        }
        let boundary = QDivisor::from_pairs(["L1", "L2", "L3"].map(|n| (n, q(1, 1))));
        let state = MmpState::new(plane, boundary).unwrap();
        assert!(step_candidates(&state).unwrap().is_empty());
        let r = run(&state, &Strategy::MostNegativeFirst, &q(0, 1)).unwrap();
        assert!(r.steps.is_empty());
        assert_eq!(r.outcome, Outcome::MinimalOverTracked);
        assert!(r.audit.passed());
    }

    #[test]
    fn plane_blown_up_once_signals_fibre() {
        let y = SurfaceModel::projective_plane()
            .add_line("L")
            .unwrap()
            .blow_up(PointSpec::General, "E")
            .unwrap();
        let state = MmpState::new(y, QDivisor::new()).unwrap();
        let r = run(&state, &Strategy::MostNegativeFirst, &q(0, 1)).unwrap();
        assert_eq!(r.steps.len(), 1);
        assert_eq!(r.steps[0].kind, ContractionKind::Castelnuovo);
        assert_eq!(r.steps[0].extremal_value, q(-1, 1));
        assert_eq!(
            r.outcome,
            Outcome::MoriFiberSignal { curve: "L".into(), self_intersection: q(1, 1), base: FiberBase::Point }
        );
        assert_eq!(r.audit.rho_sequence, vec![2, 1]);
        assert!(r.audit.passed(), "{:?}", r.audit.violations);
    }

    #[test]
    fn minus_two_curve_with_boundary_is_artin_type() {
        let y = SurfaceModel::projective_plane()
            .blow_up(PointSpec::General, "C")
            .unwrap()
            .blow_up(PointSpec::OnCurve("C".into()), "E")
            .unwrap();
        let state = MmpState::new(y, QDivisor::from_pairs([("C", q(1, 3))])).unwrap();
        assert_eq!(extremal_value(&state, "C").unwrap(), q(-2, 3));
        let (next, kind) = contract(&state, "C").unwrap();
        assert_eq!(kind, ContractionKind::ArtinType);
        assert!(next.boundary.is_zero());
        let class = classify(&next.surface, &QDivisor::new(), &q(1, 2)).unwrap();
        assert_eq!(class.exceptional_discrepancies["C"], q(0, 1));
        assert_eq!(class.classification, Classification::EpsLogTerminal);
    }

    #[test]
    fn contract_rejects_non_candidates() {
        let y = SurfaceModel::projective_plane()
            .blow_up(PointSpec::General, "C")
            .unwrap()
            .blow_up(PointSpec::OnCurve("C".into()), "E")
            .unwrap();
        let state = MmpState::new(y, QDivisor::new()).unwrap();
        assert!(matches!(contract(&state, "C"), Err(MmpError::NotACandidate { .. })));
        assert!(matches!(contract(&state, "Z"), Err(MmpError::Lattice(LatticeError::UnknownCurve(_)))));
    }

    #[test]
    fn empty_run_audit_is_vacuous() {
        let state = MmpState::new(SurfaceModel::projective_plane(), QDivisor::new()).unwrap();
        let r = run(&state, &Strategy::MostNegativeFirst, &q(0, 1)).unwrap();
        assert_eq!(r.outcome, Outcome::Exhausted);
        assert!(r.audit.passed());
        assert_eq!(r.audit.rho_sequence, vec![1]);
    }
}
