//! Seeded random scenarios and the batch harnesses built on them.
//!
//! Trial `i` of a batch with master seed `s` draws from
//! `ChaCha8Rng::seed_from_u64(s)` on stream `i`, so trials are independent
//! of scheduling and a batch is reproducible from `(s, trials)`.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::lattice::{PointSpec, SurfaceModel};
use crate::mmp::{run, MmpError, Strategy, Violation};
use crate::scenario::{Blowup, Scenario};
use crate::singularities::{classify, Classification, Discrepancy, QDivisor};

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// `{k/6 : k/6 <= 1 - ε} ∪ {1 - ε}`.
pub fn coefficient_menu(epsilon: &BigRational) -> Vec<BigRational> {
    let cap = BigRational::one() - epsilon;
    let mut menu: Vec<BigRational> =
        (0..=6).map(|k| BigRational::new(k.into(), 6.into())).filter(|q| q <= &cap).collect();
    if !menu.contains(&cap) {
        menu.push(cap);
    }
    menu
}

/// A smooth blow-up of the plane: between 1 and `max_blowups` blow-ups at
/// general points or on tracked curves, optionally with a tracked line, and
/// boundary coefficients drawn from `menu` on every tracked curve.
pub fn random_smooth_scenario<R: Rng>(
    rng: &mut R,
    max_blowups: usize,
    menu: &[BigRational],
    epsilon: &BigRational,
) -> Scenario {
    let mut lines = Vec::new();
    let mut names: Vec<String> = Vec::new();
    if rng.gen_bool(0.5) {
        lines.push("L".to_string());
        names.push("L".into());
    }
    let count = rng.gen_range(1..=max_blowups.max(1));
    let mut blowups = Vec::with_capacity(count);
    for k in 0..count {
        let point = if names.is_empty() || rng.gen_bool(0.5) {
            PointSpec::General
        } else {
            PointSpec::OnCurve(names.choose(rng).expect("non-empty").clone())
        };
        let name = format!("E{k}");
        blowups.push(Blowup { point, name: name.clone() });
        names.push(name);
    }
    let mut boundary = QDivisor::new();
    for n in &names {
        boundary.set(n, menu.choose(rng).expect("non-empty menu").clone());
    }
    Scenario {
        lines,
        blowups,
        contract: Vec::new(),
        boundary,
        epsilon: epsilon.clone(),
        strategy: Strategy::MostNegativeFirst,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialFailure {
    pub trial: u64,
    pub scenario: Scenario,
    pub problems: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub seed: u64,
    pub epsilon: BigRational,
    pub trials: u64,
    pub total_steps: usize,
    pub max_steps: usize,
    /// Runs that ended in each outcome: minimal, Mori fibre, exhausted.
    pub outcomes: [usize; 3],
    pub failures: Vec<TrialFailure>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn outcome_slot(o: &crate::mmp::Outcome) -> usize {
    match o {
        crate::mmp::Outcome::MinimalOverTracked => 0,
        crate::mmp::Outcome::MoriFiberSignal { .. } => 1,
        crate::mmp::Outcome::Exhausted => 2,
    }
}

/// Runs the greedy program on `trials` random smooth starts with boundary
/// coefficients at most `1 - ε` and collects every audit violation.
pub fn verify_smooth_starts(
    trials: u64,
    seed: u64,
    epsilon: &BigRational,
    max_blowups: usize,
) -> Result<VerificationReport, MmpError> {
    if trials == 0 {
        return Err(MmpError::ZeroTrials);
    }
    if epsilon < &BigRational::zero() || epsilon > &BigRational::one() {
        return Err(crate::singularities::SingularityError::EpsilonOutOfRange(epsilon.clone()).into());
    }
    let menu = coefficient_menu(epsilon);
    let results: Vec<(u64, Scenario, Result<crate::mmp::MmpRun, MmpError>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let scenario = random_smooth_scenario(&mut rng, max_blowups, &menu, epsilon);
            let r = run(&scenario.build(), &Strategy::MostNegativeFirst, epsilon);
            (t, scenario, r)
        })
        .collect();

    let mut report = VerificationReport {
        seed,
        epsilon: epsilon.clone(),
        trials,
        total_steps: 0,
        max_steps: 0,
        outcomes: [0; 3],
        failures: Vec::new(),
    };
    for (trial, scenario, r) in results {
        match r {
            Ok(r) => {
                report.total_steps += r.steps.len();
                report.max_steps = report.max_steps.max(r.steps.len());
                report.outcomes[outcome_slot(&r.outcome)] += 1;
                let problems: Vec<String> = r.audit.violations.iter().map(Violation::to_string).collect();
                if !r.audit.smooth_start_bound_applies {
                    report.failures.push(TrialFailure {
                        trial,
                        scenario,
                        problems: vec!["generated start is outside the smooth-start bound".into()],
                    });
                } else if !problems.is_empty() {
                    report.failures.push(TrialFailure { trial, scenario, problems });
                }
            }
            Err(e) => report.failures.push(TrialFailure { trial, scenario, problems: vec![e.to_string()] }),
        }
    }
    Ok(report)
}

/// Singularities allowed on the starting surface of a search trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StartKind {
    #[default]
    Smooth,
    /// One contracted (-2)-curve.
    A1,
    /// A random negative definite set of (-2)-curves, which gives canonical
    /// (du Val) points.
    Canonical,
}

impl FromStr for StartKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "smooth" => Ok(StartKind::Smooth),
            "a1" => Ok(StartKind::A1),
            "canonical" => Ok(StartKind::Canonical),
            _ => Err(format!("unknown start kind `{s}` (smooth, a1, canonical)")),
        }
    }
}

impl fmt::Display for StartKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StartKind::Smooth => "smooth",
            StartKind::A1 => "a1",
            StartKind::Canonical => "canonical",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub start: StartKind,
    pub max_blowups: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { start: StartKind::Canonical, max_blowups: 10 }
    }
}

/// An intermediate surface of a run that is not log canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonLcWitness {
    pub trial: u64,
    /// Index `i` of `X_i` (the start is 0).
    pub surface: usize,
    pub total_discrepancy: Discrepancy,
    pub scenario: Scenario,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub seed: u64,
    pub config: SearchConfig,
    pub trials: u64,
    /// Trials whose generated start had the requested kind of singularities.
    pub starts: u64,
    pub skipped: u64,
    pub steps: usize,
    pub errors: Vec<(u64, String)>,
    pub witnesses: Vec<NonLcWitness>,
}

fn random_start<R: Rng>(rng: &mut R, config: &SearchConfig) -> Option<Scenario> {
    let menu = coefficient_menu(&BigRational::zero());
    let mut s = random_smooth_scenario(rng, config.max_blowups, &menu, &BigRational::zero());
    if config.start == StartKind::Smooth {
        return Some(s);
    }
    let y = s.build().surface;
    let mut minus_two: Vec<String> = y
        .curves()
        .keys()
        .filter(|n| y.self_intersection(n).map(|v| v == (-2).into()).unwrap_or(false))
        .cloned()
        .collect();
    minus_two.shuffle(rng);
    let mut chosen: Vec<String> = Vec::new();
    let mut model = y.clone();
    for c in minus_two {
        let mut trial = chosen.clone();
        trial.push(c.clone());
        if let Ok(m) = y.contract(&trial) {
            chosen = trial;
            model = m;
            if config.start == StartKind::A1 {
                break;
            }
        }
    }
    if chosen.is_empty() {
        return None;
    }
    // canonical means total discrepancy at least 0 with empty boundary
    let class = classify(&model, &QDivisor::new(), &BigRational::zero()).ok()?;
    if class.total_discrepancy < Discrepancy::Finite(BigRational::zero()) {
        return None;
    }
    chosen.sort();
    for c in &chosen {
        s.boundary.remove(c);
    }
    s.contract = vec![chosen];
    Some(s)
}

/// Runs the greedy program at `ε = 0` from random starts with the requested
/// singularities and random boundaries, recording every intermediate
/// surface that is not log canonical.
pub fn search_canonical_starts(config: &SearchConfig, trials: u64, seed: u64) -> Result<SearchReport, MmpError> {
    if trials == 0 {
        return Err(MmpError::ZeroTrials);
    }
    let zero = BigRational::zero();
    let per_trial: Vec<(u64, Option<Scenario>, Option<Result<crate::mmp::MmpRun, MmpError>>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let s = random_start(&mut rng, config);
            let r = s.as_ref().map(|s| run(&s.build(), &Strategy::MostNegativeFirst, &zero));
            (t, s, r)
        })
        .collect();
    let mut report = SearchReport {
        seed,
        config: config.clone(),
        trials,
        starts: 0,
        skipped: 0,
        steps: 0,
        errors: Vec::new(),
        witnesses: Vec::new(),
    };
    for (t, s, r) in per_trial {
        let (Some(s), Some(r)) = (s, r) else {
            report.skipped += 1;
            continue;
        };
        report.starts += 1;
        match r {
            Ok(r) => {
                report.steps += r.steps.len();
                for &i in &r.audit.non_log_canonical {
                    let total = if i == 0 {
                        r.audit.initial_class.as_ref()
                    } else {
                        r.audit.steps[i - 1].surface_class.as_ref()
                    }
                    .map(|c| c.total_discrepancy.clone())
                    .unwrap_or(Discrepancy::NegInfinity);
                    report.witnesses.push(NonLcWitness {
                        trial: t,
                        surface: i,
                        total_discrepancy: total,
                        scenario: s.clone(),
                    });
                }
            }
            Err(e) => report.errors.push((t, e.to_string())),
        }
    }
    Ok(report)
}

/// Whether the plain classification (ε = 0) of a surface is log canonical.
pub fn is_log_canonical(surface: &SurfaceModel) -> bool {
    classify(surface, &QDivisor::new(), &BigRational::zero())
        .map(|c| c.classification != Classification::NotLogCanonical)
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn menus() {
        assert_eq!(coefficient_menu(&q(0, 1)).len(), 7);
        let m = coefficient_menu(&q(1, 7));
        assert_eq!(m.last(), Some(&q(6, 7)));
        assert!(m.iter().all(|c| c <= &q(6, 7)));
        assert_eq!(coefficient_menu(&q(1, 1)), vec![q(0, 1)]);
    }

    #[test]
    fn generator_is_seeded() {
        let menu = coefficient_menu(&q(1, 4));
        let a = random_smooth_scenario(&mut trial_rng(3, 5), 10, &menu, &q(1, 4));
        let b = random_smooth_scenario(&mut trial_rng(3, 5), 10, &menu, &q(1, 4));
        let c = random_smooth_scenario(&mut trial_rng(3, 6), 10, &menu, &q(1, 4));
        assert_eq!(a, b);
        assert_ne!(a.to_json_string(), c.to_json_string());
        assert!(a.build().surface.is_smooth());
    }

    #[test]
    fn small_verification_batch() {
        let r = verify_smooth_starts(10, 1, &q(1, 4), 6).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.outcomes.iter().sum::<usize>(), 10);
        assert_eq!(verify_smooth_starts(0, 1, &q(0, 1), 6), Err(MmpError::ZeroTrials));
    }

    #[test]
    fn search_rejects_zero_trials() {
        assert_eq!(search_canonical_starts(&SearchConfig::default(), 0, 1), Err(MmpError::ZeroTrials));
    }

    #[test]
    fn canonical_starts_are_canonical() {
        let config = SearchConfig { start: StartKind::Canonical, max_blowups: 8 };
        for t in 0..20 {
            if let Some(s) = random_start(&mut trial_rng(11, t), &config) {
                let state = s.build();
                assert!(!state.surface.is_smooth());
                for c in state.surface.contracted() {
                    assert_eq!(state.surface.self_intersection(c).unwrap(), (-2).into());
                }
                assert!(is_log_canonical(&state.surface));
            }
        }
    }
}
