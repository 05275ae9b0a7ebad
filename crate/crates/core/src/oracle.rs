//! Exhaustive enumeration of finite spaces, used to pin down the true
//! optimum that searches are judged against.
//!
//! Integer and categorical dimensions enumerate themselves; continuous
//! dimensions need an explicit list of values to visit. Enumeration walks
//! the space lexicographically (first dimension slowest) and keeps the first
//! configuration achieving the minimum, so ties resolve to the
//! lexicographically smallest point. The objective is called directly, with
//! no cache and no budget; a hard cap on cardinality guards against
//! accidentally unbounded sweeps.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::objective::{Objective, ObjectiveError};
use crate::space::{Assignment, Configuration, ParamKind, SearchSpace};

/// Refuse to enumerate more than this many configurations unless the caller
/// raises the cap explicitly.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Errors raised by exhaustive enumeration.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    /// The space holds more configurations than the cap allows.
    TooLarge {
        /// Number of configurations the space holds.
        cardinality: u128,
        /// Enumeration cap in force.
        cap: u64,
    },
    /// A continuous dimension has no discretization values.
    MissingDiscretization(String),
    /// A discretization lists no values for a dimension.
    EmptyAxis(String),
    /// The objective failed on a configuration.
    Evaluation {
        /// The assignment that failed.
        assignment: Assignment,
        /// Why it failed.
        reason: String,
    },
}

impl core::fmt::Display for OracleError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            OracleError::TooLarge { cardinality, cap } => {
                write!(f, "space holds {cardinality} configurations, above the cap of {cap}")
            }
            OracleError::MissingDiscretization(name) => {
                write!(f, "continuous parameter `{name}` needs discretization values")
            }
            OracleError::EmptyAxis(name) => {
                write!(f, "no values to enumerate for parameter `{name}`")
            }
            OracleError::Evaluation { assignment, reason } => {
                write!(f, "objective failed on {assignment}: {reason}")
            }
        }
    }
}

impl core::error::Error for OracleError {}

/// Explicit values to visit on continuous dimensions.
#[derive(Debug, Clone, Default)]
pub struct Discretization {
    values: Vec<(String, Vec<f64>)>,
}

impl Discretization {
    /// No continuous dimensions discretized.
    pub fn none() -> Self {
        Self::default()
    }

    /// Visit `values` on dimension `name` (repaired into bounds first).
    pub fn with_values(mut self, name: impl Into<String>, values: Vec<f64>) -> Self {
        self.values.push((name.into(), values));
        self
    }

    fn get(&self, name: &str) -> Option<&[f64]> {
        self.values.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }
}

/// What exhaustive enumeration found.
#[derive(Debug, Clone)]
pub struct OracleResult {
    /// The minimizing configuration, encoded.
    pub best_config: Configuration,
    /// The minimizing configuration, decoded.
    pub best_assignment: Assignment,
    /// The minimum objective value.
    pub best_value: f64,
    /// Number of configurations visited.
    pub evaluated: u64,
}

/// A frozen enumeration result, for checking searches against a known
/// optimum without re-running the sweep.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OracleFixture {
    /// Fingerprint of the space the sweep ran over, in hex.
    pub space_hash: String,
    /// Seed of the objective's underlying data, if any.
    pub seed: u64,
    /// The minimizing configuration.
    pub best: Assignment,
    /// The minimum objective value.
    pub best_value: f64,
    /// Number of configurations the sweep visited.
    pub evaluated: u64,
}

impl OracleFixture {
    /// Freeze `result` for `space`.
    pub fn capture(space: &SearchSpace, seed: u64, result: &OracleResult) -> Self {
        Self {
            space_hash: space_hash(space),
            seed,
            best: result.best_assignment.clone(),
            best_value: result.best_value,
            evaluated: result.evaluated,
        }
    }

    /// Whether this fixture was captured over `space`.
    pub fn matches_space(&self, space: &SearchSpace) -> bool {
        self.space_hash == space_hash(space)
    }
}

/// Hex form of a space's fingerprint, as stored in fixtures.
pub fn space_hash(space: &SearchSpace) -> String {
    let mut out = String::new();
    let mut h = space.fingerprint();
    for _ in 0..16 {
        let digit = (h >> 60) as u8;
        out.push(char::from_digit(digit as u32, 16).unwrap());
        h <<= 4;
    }
    out
}

/// Every value one dimension can take, in enumeration order.
fn axis_values(space: &SearchSpace, discretization: &Discretization) -> Result<Vec<Vec<f64>>, OracleError> {
    space
        .params()
        .iter()
        .map(|p| match p.kind() {
            ParamKind::Integer { lower, upper } => {
                Ok((*lower..=*upper).map(|i| i as f64).collect())
            }
            ParamKind::Categorical { choices } => {
                Ok((0..choices.len()).map(|i| i as f64).collect())
            }
            ParamKind::Continuous { .. } => {
                let raw = discretization
                    .get(p.name())
                    .ok_or_else(|| OracleError::MissingDiscretization(p.name().to_string()))?;
                if raw.is_empty() {
                    return Err(OracleError::EmptyAxis(p.name().to_string()));
                }
                let mut values: Vec<f64> = raw.iter().map(|&v| p.repair_value(v)).collect();
                values.dedup_by(|a, b| a == b);
                Ok(values)
            }
        })
        .collect()
}

/// Number of configurations enumeration would visit.
pub fn cardinality(
    space: &SearchSpace,
    discretization: &Discretization,
) -> Result<u128, OracleError> {
    let axes = axis_values(space, discretization)?;
    Ok(axes.iter().map(|a| a.len() as u128).product())
}

/// Visit every configuration and return the first minimizer.
pub fn exhaustive_min(
    space: &SearchSpace,
    objective: &dyn Objective,
    discretization: &Discretization,
    cap: u64,
) -> Result<OracleResult, OracleError> {
    let axes = axis_values(space, discretization)?;
    let total: u128 = axes.iter().map(|a| a.len() as u128).product();
    if total > u128::from(cap) {
        return Err(OracleError::TooLarge { cardinality: total, cap });
    }

    let dims = axes.len();
    let mut indices = alloc::vec![0usize; dims];
    let mut values = alloc::vec![0f64; dims];
    let mut best: Option<(Configuration, Assignment, f64)> = None;
    let mut evaluated = 0u64;
    loop {
        for (d, &i) in indices.iter().enumerate() {
            values[d] = axes[d][i];
        }
        let config = space.repair(&values).expect("axis values match the space");
        let assignment = space.decode(&config);
        let value = objective.evaluate(&assignment).map_err(|e: ObjectiveError| {
            OracleError::Evaluation { assignment: assignment.clone(), reason: e.message().to_string() }
        })?;
        if !value.is_finite() {
            return Err(OracleError::Evaluation {
                assignment,
                reason: alloc::format!("non-finite objective value {value}"),
            });
        }
        evaluated += 1;
        if best.as_ref().is_none_or(|(_, _, b)| value < *b) {
            best = Some((config, assignment, value));
        }

        // Advance the odometer, last dimension fastest.
        let mut d = dims;
        loop {
            if d == 0 {
                let (best_config, best_assignment, best_value) =
                    best.expect("enumeration visited at least one configuration");
                return Ok(OracleResult { best_config, best_assignment, best_value, evaluated });
            }
            d -= 1;
            indices[d] += 1;
            if indices[d] < axes[d].len() {
                break;
            }
            indices[d] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::{FnObjective, MixedSphere, SphereTerm};
    use crate::space::ParamSpec;
    use alloc::vec;

    fn square_space() -> SearchSpace {
        SearchSpace::new(vec![
            ParamSpec::integer("alpha", 0, 9).unwrap(),
            ParamSpec::integer("beta", 1, 6).unwrap(),
            ParamSpec::categorical("gamma", ["a", "b"]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn enumerates_every_point_and_finds_the_minimum() {
        let space = square_space();
        let sphere = MixedSphere::with_targets(
            &space,
            vec![
                SphereTerm::Integer(7),
                SphereTerm::Integer(2),
                SphereTerm::Categorical(vec![("a".into(), 0.4), ("b".into(), 0.0)]),
            ],
        )
        .unwrap();
        let result =
            exhaustive_min(&space, &sphere, &Discretization::none(), DEFAULT_ENUMERATION_CAP)
                .unwrap();
        assert_eq!(result.evaluated, 120);
        assert_eq!(result.best_value, 0.0);
        assert_eq!(result.best_assignment.int("alpha"), Some(7));
        assert_eq!(result.best_assignment.int("beta"), Some(2));
        assert_eq!(result.best_assignment.choice("gamma"), Some("b"));
    }

    #[test]
    fn ties_resolve_to_the_lexicographically_smallest_point() {
        let space = SearchSpace::new(vec![
            ParamSpec::integer("x", 0, 3).unwrap(),
            ParamSpec::integer("y", 0, 1).unwrap(),
        ])
        .unwrap();
        // Flat zero across x in {1, 2} at any y: (1, 0) comes first.
        let objective = FnObjective::new("plateau", |a: &Assignment| {
            let x = a.int("x").unwrap();
            if x == 1 || x == 2 { 0.0 } else { 1.0 }
        });
        let result =
            exhaustive_min(&space, &objective, &Discretization::none(), 100).unwrap();
        assert_eq!(result.best_assignment.int("x"), Some(1));
        assert_eq!(result.best_assignment.int("y"), Some(0));
        assert_eq!(result.evaluated, 8);
    }

    #[test]
    fn continuous_dimensions_require_discretization() {
        let space = SearchSpace::new(vec![
            ParamSpec::integer("n", 0, 3).unwrap(),
            ParamSpec::continuous("rate", 0.0, 1.0).unwrap(),
        ])
        .unwrap();
        let flat = FnObjective::new("flat", |_: &Assignment| 0.0);
        let err = exhaustive_min(&space, &flat, &Discretization::none(), 100).unwrap_err();
        assert_eq!(err, OracleError::MissingDiscretization("rate".into()));

        let disc = Discretization::none().with_values("rate", vec![0.0, 0.5, 2.0]);
        // 2.0 repairs to the 1.0 bound: 4 x 3 = 12 points.
        let result = exhaustive_min(&space, &flat, &disc, 100).unwrap();
        assert_eq!(result.evaluated, 12);

        let empty = Discretization::none().with_values("rate", vec![]);
        let err = exhaustive_min(&space, &flat, &empty, 100).unwrap_err();
        assert_eq!(err, OracleError::EmptyAxis("rate".into()));
    }

    #[test]
    fn cap_refuses_oversized_spaces() {
        let space = SearchSpace::new(vec![
            ParamSpec::integer("x", 0, 9).unwrap(),
            ParamSpec::integer("y", 0, 9).unwrap(),
        ])
        .unwrap();
        let flat = FnObjective::new("flat", |_: &Assignment| 0.0);
        let err = exhaustive_min(&space, &flat, &Discretization::none(), 50).unwrap_err();
        assert_eq!(err, OracleError::TooLarge { cardinality: 100, cap: 50 });
        assert_eq!(cardinality(&space, &Discretization::none()).unwrap(), 100);
    }

    #[test]
    fn objective_failures_surface_with_the_offending_assignment() {
        let space = SearchSpace::new(vec![ParamSpec::integer("n", 0, 3).unwrap()]).unwrap();
        struct Fallible;
        impl Objective for Fallible {
            fn evaluate(&self, a: &Assignment) -> Result<f64, ObjectiveError> {
                if a.int("n") == Some(2) {
                    Err(ObjectiveError::new("broke"))
                } else {
                    Ok(0.0)
                }
            }
        }
        let err = exhaustive_min(&space, &Fallible, &Discretization::none(), 100).unwrap_err();
        match err {
            OracleError::Evaluation { assignment, reason } => {
                assert_eq!(assignment.int("n"), Some(2));
                assert_eq!(reason, "broke");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn fixtures_capture_and_match_their_space() {
        let space = square_space();
        let sphere = MixedSphere::centered(&space);
        let result =
            exhaustive_min(&space, &sphere, &Discretization::none(), 1000).unwrap();
        let fixture = OracleFixture::capture(&space, 42, &result);
        assert!(fixture.matches_space(&space));
        assert_eq!(fixture.space_hash.len(), 16);
        let other = SearchSpace::new(vec![ParamSpec::integer("x", 0, 1).unwrap()]).unwrap();
        assert!(!fixture.matches_space(&other));
    }
}
