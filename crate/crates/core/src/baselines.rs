//! Random-search and grid-search baselines.
//!
//! Both run through the same evaluator as the colony, so their logs, caching
//! behavior, and best-so-far traces are directly comparable. Random search
//! spends its budget on uniform draws (repeat draws are cache hits and cost
//! nothing); grid search sweeps a fixed lattice once.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::colony::{RunResult, StopReason};
use crate::objective::{EvalError, Evaluator, Objective, Phase};
use crate::space::{ParamKind, SearchSpace};

/// Refuse to sweep more than this many grid points unless the caller raises
/// the cap explicitly.
pub const DEFAULT_GRID_CAP: u64 = 1_000_000;

/// Errors raised by the baselines.
#[derive(Debug, Clone, PartialEq)]
pub enum BaselineError {
    /// A budget of zero draws was requested.
    ZeroBudget,
    /// A step is unusable for the named dimension.
    BadStep {
        /// Dimension the step was given for.
        name: String,
        /// Why the step is unusable.
        reason: String,
    },
    /// A step was given for a categorical dimension, which always
    /// enumerates every choice.
    StepForCategorical(String),
    /// A numeric dimension was given no step.
    MissingStep(String),
    /// A step names a dimension the space does not have.
    UnknownStep(String),
    /// The grid holds more points than the cap allows.
    TooLarge {
        /// Number of points on the grid.
        cardinality: u128,
        /// Cap in force.
        cap: u64,
    },
    /// An objective evaluation failed.
    Evaluation(EvalError),
}

impl core::fmt::Display for BaselineError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            BaselineError::ZeroBudget => write!(f, "budget must be at least 1"),
            BaselineError::BadStep { name, reason } => {
                write!(f, "bad step for `{name}`: {reason}")
            }
            BaselineError::StepForCategorical(name) => {
                write!(f, "categorical `{name}` enumerates all choices; it takes no step")
            }
            BaselineError::MissingStep(name) => {
                write!(f, "numeric parameter `{name}` needs a step")
            }
            BaselineError::UnknownStep(name) => {
                write!(f, "step given for unknown parameter `{name}`")
            }
            BaselineError::TooLarge { cardinality, cap } => {
                write!(f, "grid holds {cardinality} points, above the cap of {cap}")
            }
            BaselineError::Evaluation(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for BaselineError {}

impl From<EvalError> for BaselineError {
    fn from(e: EvalError) -> Self {
        BaselineError::Evaluation(e)
    }
}

/// Uniform random sampling: `budget` draws, duplicates answered by the
/// cache. The number of real objective calls is therefore at most `budget`
/// and can be lower on small spaces.
pub fn random_search(
    space: &SearchSpace,
    objective: &dyn Objective,
    budget: usize,
    seed: u64,
) -> Result<RunResult, BaselineError> {
    if budget == 0 {
        return Err(BaselineError::ZeroBudget);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut evaluator = Evaluator::new(space, objective, budget);
    for _ in 0..budget {
        let config = space.sample_uniform(&mut rng);
        evaluator.evaluate(&config, 0, Phase::Baseline, None)?;
    }
    Ok(finish(space, evaluator))
}

/// Step sizes defining a grid: one per numeric dimension, none for
/// categoricals (which always enumerate every choice).
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    steps: Vec<Option<f64>>,
}

impl GridSpec {
    /// The same step on every numeric dimension.
    pub fn uniform(space: &SearchSpace, step: f64) -> Result<Self, BaselineError> {
        let steps = space
            .params()
            .iter()
            .map(|p| match p.kind() {
                ParamKind::Categorical { .. } => Ok(None),
                _ => check_step(p.name(), p.kind(), step).map(Some),
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { steps })
    }

    /// Explicit named steps; every numeric dimension needs exactly one.
    pub fn from_steps(space: &SearchSpace, steps: &[(String, f64)]) -> Result<Self, BaselineError> {
        for (name, _) in steps {
            match space.index_of(name) {
                None => return Err(BaselineError::UnknownStep(name.clone())),
                Some(i) => {
                    if matches!(space.params()[i].kind(), ParamKind::Categorical { .. }) {
                        return Err(BaselineError::StepForCategorical(name.clone()));
                    }
                }
            }
        }
        let resolved = space
            .params()
            .iter()
            .map(|p| match p.kind() {
                ParamKind::Categorical { .. } => Ok(None),
                kind => {
                    let step = steps
                        .iter()
                        .find(|(name, _)| name == p.name())
                        .map(|(_, s)| *s)
                        .ok_or_else(|| BaselineError::MissingStep(p.name().to_string()))?;
                    check_step(p.name(), kind, step).map(Some)
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { steps: resolved })
    }

    /// Values visited on each dimension, in sweep order.
    pub fn axes(&self, space: &SearchSpace) -> Vec<Vec<f64>> {
        space
            .params()
            .iter()
            .zip(&self.steps)
            .map(|(p, step)| match (p.kind(), step) {
                (ParamKind::Categorical { choices }, _) => {
                    (0..choices.len()).map(|i| i as f64).collect()
                }
                (_, Some(step)) => {
                    let (lo, hi) = p.encoded_bounds();
                    let count = libm::floor((hi - lo) / step + 1e-9) as usize + 1;
                    let mut values: Vec<f64> =
                        (0..count).map(|i| p.repair_value(lo + i as f64 * step)).collect();
                    values.dedup_by(|a, b| a == b);
                    values
                }
                (_, None) => unreachable!("numeric dimensions always carry a step"),
            })
            .collect()
    }

    /// Number of points the sweep visits.
    pub fn cardinality(&self, space: &SearchSpace) -> u128 {
        self.axes(space).iter().map(|a| a.len() as u128).product()
    }
}

/// A positive step; whole for integer dimensions.
fn check_step(name: &str, kind: &ParamKind, step: f64) -> Result<f64, BaselineError> {
    if !step.is_finite() || step <= 0.0 {
        return Err(BaselineError::BadStep {
            name: name.to_string(),
            reason: format!("step {step} is not positive"),
        });
    }
    if matches!(kind, ParamKind::Integer { .. }) && libm::trunc(step) != step {
        return Err(BaselineError::BadStep {
            name: name.to_string(),
            reason: format!("integer dimensions need whole steps, got {step}"),
        });
    }
    Ok(step)
}

/// Sweep the grid once, lexicographically with the first dimension slowest.
/// Deterministic: no randomness is involved at all.
pub fn grid_search(
    space: &SearchSpace,
    objective: &dyn Objective,
    grid: &GridSpec,
    cap: u64,
) -> Result<RunResult, BaselineError> {
    let axes = grid.axes(space);
    let total: u128 = axes.iter().map(|a| a.len() as u128).product();
    if total > u128::from(cap) {
        return Err(BaselineError::TooLarge { cardinality: total, cap });
    }
    let mut evaluator = Evaluator::new(space, objective, total as usize);
    let dims = axes.len();
    let mut indices = alloc::vec![0usize; dims];
    let mut values = alloc::vec![0f64; dims];
    'sweep: loop {
        for (d, &i) in indices.iter().enumerate() {
            values[d] = axes[d][i];
        }
        let config = space.repair(&values).expect("axis values match the space");
        evaluator.evaluate(&config, 0, Phase::Baseline, None)?;

        let mut d = dims;
        loop {
            if d == 0 {
                break 'sweep;
            }
            d -= 1;
            indices[d] += 1;
            if indices[d] < axes[d].len() {
                break;
            }
            indices[d] = 0;
        }
    }
    Ok(finish(space, evaluator))
}

/// Package a finished sweep, mirroring the colony's result shape.
fn finish(space: &SearchSpace, evaluator: Evaluator<'_>) -> RunResult {
    let (best_config, best_objective) = {
        let (c, v) = evaluator.best().expect("baselines evaluate at least once");
        (c.clone(), v)
    };
    let (records, cache, evaluations) = evaluator.finish();
    RunResult {
        best_assignment: space.decode(&best_config),
        best_config,
        best_objective,
        evaluations,
        cycles: 0,
        stop: StopReason::Completed,
        cache_hits: cache.hits(),
        cache_misses: cache.misses(),
        records,
    }
}
