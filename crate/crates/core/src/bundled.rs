//! Builders for the bundled example scenarios.
//!
//! `example_4_1`: a triple fork `E0` (centre, `E0² = -n0`) with leaves
//! `E1, E2, E3` of self-intersection `-2, -3, -6`, and a curve `D` with
//! `D² = -n` meeting `E0` once. The fork is contracted and `D` carries
//! coefficient 1.
//!
//! `example_4_2`: the same shape with all leaves `-2`, `E0² = -5`,
//! `D² = -3` and `D` carrying `6/7`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::lattice::PointSpec;
use crate::mmp::Strategy;
use crate::scenario::{Blowup, Scenario};
use crate::singularities::QDivisor;

fn general(name: &str) -> Blowup {
    Blowup { point: PointSpec::General, name: name.into() }
}

fn on(curve: &str, name: &str) -> Blowup {
    Blowup { point: PointSpec::OnCurve(curve.into()), name: name.into() }
}

fn at(a: &str, b: &str, name: &str) -> Blowup {
    Blowup { point: PointSpec::AtIntersection(a.into(), b.into()), name: name.into() }
}

/// `k` auxiliary blow-ups on `curve`, named `{prefix}1..{prefix}k`.
fn points_on(curve: &str, prefix: &str, k: usize) -> Vec<Blowup> {
    (1..=k).map(|i| on(curve, &format!("{prefix}{i}"))).collect()
}

fn fork() -> Vec<String> {
    ["E0", "E1", "E2", "E3"].map(String::from).to_vec()
}

/// Triple fork with leaves `(-2, -3, -6)`; needs `n0 >= 3` and `n >= 1`.
pub fn example_4_1(n0: usize, n: usize) -> Scenario {
    assert!(n0 >= 3 && n >= 1, "example_4_1 needs n0 >= 3 and n >= 1");
    // E2 = -1 -> -2 -> -3, E1 = -1 -> -2, E0 = -1
    let mut blowups = vec![general("E2"), on("E2", "E1"), at("E2", "E1", "E0"), on("E0", "E3"), on("E0", "D")];
    blowups.extend(points_on("E0", "P", n0 - 3));
    blowups.extend(points_on("E3", "Q", 5));
    blowups.extend(points_on("D", "R", n - 1));
    Scenario {
        lines: Vec::new(),
        blowups,
        contract: vec![fork()],
        boundary: QDivisor::from_pairs([("D", BigRational::one())]),
        epsilon: BigRational::zero(),
        strategy: Strategy::MostNegativeFirst,
    }
}

/// `E0² = -5`, three `(-2)` leaves, `D² = -3`, boundary `(6/7) D`,
/// `ε = 1/7`. Ten blow-ups.
pub fn example_4_2() -> Scenario {
    let mut blowups = vec![general("E0")];
    for c in ["E1", "E2", "E3", "D"] {
        blowups.push(on("E0", c));
    }
    for (c, p) in [("E1", "P1"), ("E2", "P2"), ("E3", "P3"), ("D", "P4"), ("D", "P5")] {
        blowups.push(on(c, p));
    }
    Scenario {
        lines: Vec::new(),
        blowups,
        contract: vec![fork()],
        boundary: QDivisor::from_pairs([("D", BigRational::new(6.into(), 7.into()))]),
        epsilon: BigRational::new(1.into(), 7.into()),
        strategy: Strategy::MostNegativeFirst,
    }
}

/// [`example_4_2`] with `D` contracted as well (the quadruple fork) and no
/// boundary.
pub fn example_4_2_star() -> Scenario {
    let mut s = example_4_2();
    s.contract.push(vec!["D".into()]);
    s.boundary = QDivisor::new();
    s
}

/// Repository file name and builder output of every bundled scenario.
pub fn bundled_scenarios() -> Vec<(&'static str, Scenario)> {
    vec![
        ("example_4_1.json", example_4_1(3, 3)),
        ("example_4_2.json", example_4_2()),
        ("example_4_2_star.json", example_4_2_star()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;
    use num_bigint::BigInt;

    #[test]
    fn example_4_1_self_intersections() {
        for n0 in 3..=8 {
            let state = example_4_1(n0, 4).build();
            let y = &state.surface;
            let si = |c: &str| y.self_intersection(c).unwrap();
            assert_eq!(si("E0"), BigInt::from(-(n0 as i64)));
            assert_eq!((si("E1"), si("E2"), si("E3"), si("D")), (BigInt::from(-2), (-3).into(), (-6).into(), (-4).into()));
            for c in ["E1", "E2", "E3", "D"] {
                assert_eq!(y.intersection(c, "E0").unwrap(), BigInt::one());
            }
            assert_eq!(y.intersection("D", "E1").unwrap(), BigInt::zero());
        }
    }

    #[test]
    fn example_4_2_has_ten_blowups() {
        let s = example_4_2();
        assert_eq!(s.blowups.len(), 10);
        let y = s.build().surface;
        assert_eq!(y.self_intersection("E0").unwrap(), BigInt::from(-5));
        assert_eq!(y.self_intersection("D").unwrap(), BigInt::from(-3));
        for c in ["E1", "E2", "E3"] {
            assert_eq!(y.self_intersection(c).unwrap(), BigInt::from(-2));
        }
    }

    #[test]
    fn builders_survive_serialization() {
        for (_, s) in bundled_scenarios() {
            assert_eq!(parse_scenario(&s.to_json_string()).unwrap(), s);
        }
    }
}
