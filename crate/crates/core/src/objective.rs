//! Objective plumbing shared by the optimizer and the baselines.
//!
//! Every candidate goes through an [`Evaluator`]: the cache is consulted
//! first (hits are free), the budget is charged only for real objective
//! calls, and each request is logged as an [`EvalRecord`] in evaluation
//! order. [`MixedSphere`] is the built-in benchmark objective; model-backed
//! objectives live in [`crate::surrogate`].

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use crate::space::{Assignment, ConfigKey, Configuration, ParamKind, SearchSpace};

/// Failure reported by an objective function.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveError {
    message: String,
}

impl ObjectiveError {
    /// Build from any printable reason.
    pub fn new(message: impl Into<String>) -> Self {
        Self { message: message.into() }
    }

    /// The failure reason.
    pub fn message(&self) -> &str {
        &self.message
    }
}

impl fmt::Display for ObjectiveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl core::error::Error for ObjectiveError {}

/// A function to minimize over decoded assignments.
///
/// Implementations must be pure enough to cache: within one run, equal
/// assignments are assumed to produce equal values.
pub trait Objective: Sync {
    /// Objective value (lower is better) for one assignment.
    fn evaluate(&self, assignment: &Assignment) -> Result<f64, ObjectiveError>;

    /// Short human-readable name used in logs.
    fn description(&self) -> &str {
        "objective"
    }

    /// Whether repeated evaluation of one assignment returns one value.
    fn deterministic(&self) -> bool {
        true
    }
}

/// Adapts a plain function or closure into an [`Objective`].
pub struct FnObjective<F> {
    f: F,
    description: String,
}

impl<F> FnObjective<F>
where
    F: Fn(&Assignment) -> f64 + Sync,
{
    /// Wrap `f` under the given log name.
    pub fn new(description: impl Into<String>, f: F) -> Self {
        Self { f, description: description.into() }
    }
}

impl<F> Objective for FnObjective<F>
where
    F: Fn(&Assignment) -> f64 + Sync,
{
    fn evaluate(&self, assignment: &Assignment) -> Result<f64, ObjectiveError> {
        Ok((self.f)(assignment))
    }

    fn description(&self) -> &str {
        &self.description
    }
}

/// Which stage of a run requested an evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Phase {
    /// Population initialization.
    Init,
    /// Employed bee phase.
    Employed,
    /// Onlooker bee phase.
    Onlooker,
    /// Scout replacement.
    Scout,
    /// Random or grid search baseline.
    Baseline,
}

impl Phase {
    /// Lowercase label used in log files.
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Init => "init",
            Phase::Employed => "employed",
            Phase::Onlooker => "onlooker",
            Phase::Scout => "scout",
            Phase::Baseline => "baseline",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One logged evaluation request.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRecord {
    /// Position in the evaluation sequence, starting at 0.
    pub eval_index: u64,
    /// Cycle the request belongs to (0 for initialization and baselines).
    pub cycle: u32,
    /// Requesting stage.
    pub phase: Phase,
    /// Index of the food source involved, when the optimizer made the
    /// request.
    pub source: Option<usize>,
    /// Decoded configuration that was scored.
    pub assignment: Assignment,
    /// Objective value.
    pub objective: f64,
    /// Best objective seen up to and including this request.
    pub best_so_far: f64,
    /// Whether the value came from the cache instead of a fresh call.
    pub cache_hit: bool,
    /// Wall time of the objective call; zero for cache hits.
    pub elapsed: Duration,
}

/// Memoization table keyed by exact encoded values.
#[derive(Debug, Default)]
pub struct EvalCache {
    map: BTreeMap<ConfigKey, f64>,
    hits: u64,
    misses: u64,
}

impl EvalCache {
    /// An empty cache.
    pub fn new() -> Self {
        Self::default()
    }

    /// Stored value for a key, if any. Does not touch the counters.
    pub fn get(&self, key: &ConfigKey) -> Option<f64> {
        self.map.get(key).copied()
    }

    /// Store a value. Later inserts for the same key are ignored.
    pub fn insert(&mut self, key: ConfigKey, value: f64) {
        self.map.entry(key).or_insert(value);
    }

    /// Count one lookup toward the hit or miss counter.
    pub fn count_lookup(&mut self, hit: bool) {
        if hit {
            self.hits += 1;
        } else {
            self.misses += 1;
        }
    }

    /// Number of lookups answered from the table.
    pub fn hits(&self) -> u64 {
        self.hits
    }

    /// Number of lookups that required a fresh evaluation.
    pub fn misses(&self) -> u64 {
        self.misses
    }

    /// Number of distinct configurations stored.
    pub fn len(&self) -> usize {
        self.map.len()
    }

    /// Whether the cache is empty.
    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Errors surfaced while evaluating a candidate.
#[derive(Debug, Clone, PartialEq)]
pub enum EvalError {
    /// The evaluation budget is spent; signals termination, not failure.
    BudgetExhausted,
    /// The objective failed or returned a non-finite value.
    Failed {
        /// Configuration that triggered the failure.
        assignment: Assignment,
        /// The underlying reason.
        reason: String,
    },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::BudgetExhausted => write!(f, "evaluation budget exhausted"),
            EvalError::Failed { assignment, reason } => {
                write!(f, "objective failed on {assignment}: {reason}")
            }
        }
    }
}

impl core::error::Error for EvalError {}

/// Outcome of one evaluation request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluated {
    /// Objective value.
    pub value: f64,
    /// Whether the cache answered the request.
    pub cache_hit: bool,
}

/// Callback receiving every record as it is logged.
type Observer<'a> = Box<dyn FnMut(&EvalRecord) + 'a>;

/// Budgeted, cached, logging gateway to an objective.
///
/// All evaluation flows through [`Evaluator::evaluate`] (or the lower-level
/// probe/commit pair used for batched dispatch), so budget accounting, the
/// best-so-far trace, and the record log stay consistent no matter which
/// search produced the candidate.
pub struct Evaluator<'a> {
    space: &'a SearchSpace,
    objective: &'a dyn Objective,
    cache: EvalCache,
    budget: usize,
    evaluations: usize,
    records: Vec<EvalRecord>,
    best: Option<(Configuration, f64)>,
    observer: Option<Observer<'a>>,
}

impl<'a> Evaluator<'a> {
    /// A fresh evaluator allowed `budget` real objective calls.
    pub fn new(space: &'a SearchSpace, objective: &'a dyn Objective, budget: usize) -> Self {
        Self {
            space,
            objective,
            cache: EvalCache::new(),
            budget,
            evaluations: 0,
            records: Vec::new(),
            best: None,
            observer: None,
        }
    }

    /// Forward every record to `observer`, in evaluation order.
    pub fn set_observer(&mut self, observer: impl FnMut(&EvalRecord) + 'a) {
        self.observer = Some(Box::new(observer));
    }

    /// Whether the budget is spent.
    pub fn exhausted(&self) -> bool {
        self.evaluations >= self.budget
    }

    /// Real objective calls made so far.
    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    /// Maximum number of real objective calls.
    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Best `(configuration, value)` over everything scored so far.
    pub fn best(&self) -> Option<(&Configuration, f64)> {
        self.best.as_ref().map(|(c, v)| (c, *v))
    }

    /// The cache, for inspection.
    pub fn cache(&self) -> &EvalCache {
        &self.cache
    }

    /// Records logged so far.
    pub fn records(&self) -> &[EvalRecord] {
        &self.records
    }

    /// Score one configuration: cache first, fresh call otherwise.
    ///
    /// Cache hits never fail on budget; a fresh call when the budget is
    /// already spent returns [`EvalError::BudgetExhausted`].
    pub fn evaluate(
        &mut self,
        config: &Configuration,
        cycle: u32,
        phase: Phase,
        source: Option<usize>,
    ) -> Result<Evaluated, EvalError> {
        let key = config.key();
        if let Some(value) = self.cache.get(&key) {
            self.commit(config, value, None, cycle, phase, source);
            return Ok(Evaluated { value, cache_hit: true });
        }
        if self.exhausted() {
            return Err(EvalError::BudgetExhausted);
        }
        let assignment = self.space.decode(config);
        let (value, elapsed) = call_objective(self.objective, &assignment)?;
        self.commit(config, value, Some(elapsed), cycle, phase, source);
        Ok(Evaluated { value, cache_hit: false })
    }

    /// Cache lookup without logging; used to plan batched dispatch.
    pub(crate) fn probe(&self, key: &ConfigKey) -> Option<f64> {
        self.cache.get(key)
    }

    /// The objective being optimized; used to dispatch batched calls.
    pub(crate) fn objective(&self) -> &'a dyn Objective {
        self.objective
    }

    /// Log one answered request, update the cache, counters, and trace.
    /// `fresh_elapsed` is the wall time of a real objective call, or `None`
    /// when the value came from the cache.
    pub(crate) fn commit(
        &mut self,
        config: &Configuration,
        value: f64,
        fresh_elapsed: Option<Duration>,
        cycle: u32,
        phase: Phase,
        source: Option<usize>,
    ) {
        let cache_hit = fresh_elapsed.is_none();
        if !cache_hit {
            self.cache.insert(config.key(), value);
            self.evaluations += 1;
        }
        self.cache.count_lookup(cache_hit);
        let best_so_far = match &self.best {
            Some((_, b)) if *b <= value => *b,
            _ => {
                self.best = Some((config.clone(), value));
                value
            }
        };
        let record = EvalRecord {
            eval_index: self.records.len() as u64,
            cycle,
            phase,
            source,
            assignment: self.space.decode(config),
            objective: value,
            best_so_far,
            cache_hit,
            elapsed: fresh_elapsed.unwrap_or(Duration::ZERO),
        };
        if let Some(observer) = &mut self.observer {
            observer(&record);
        }
        self.records.push(record);
    }

    /// Tear down into `(records, cache, evaluations)`.
    pub fn finish(self) -> (Vec<EvalRecord>, EvalCache, usize) {
        (self.records, self.cache, self.evaluations)
    }
}

/// Run the objective on one assignment, timing the call and rejecting
/// non-finite values.
pub(crate) fn call_objective(
    objective: &dyn Objective,
    assignment: &Assignment,
) -> Result<(f64, Duration), EvalError> {
    #[cfg(feature = "std")]
    let start = std::time::Instant::now();
    let value = objective.evaluate(assignment).map_err(|e| EvalError::Failed {
        assignment: assignment.clone(),
        reason: e.message().to_owned(),
    })?;
    #[cfg(feature = "std")]
    let elapsed = start.elapsed();
    #[cfg(not(feature = "std"))]
    let elapsed = Duration::ZERO;
    if !value.is_finite() {
        return Err(EvalError::Failed {
            assignment: assignment.clone(),
            reason: format!("non-finite objective value {value}"),
        });
    }
    Ok((value, elapsed))
}

/// Per-dimension target of the [`MixedSphere`] benchmark.
#[derive(Debug, Clone, PartialEq)]
pub enum SphereTerm {
    /// Squared distance to this value.
    Continuous(f64),
    /// Absolute distance to this whole value.
    Integer(i64),
    /// Table of penalties, one per choice label.
    Categorical(Vec<(String, f64)>),
}

/// Separable benchmark objective over mixed spaces.
///
/// Continuous dimensions contribute their squared distance to a target,
/// integer dimensions their absolute distance, and categorical dimensions a
/// per-choice penalty. With a zero penalty on the target choice the global
/// minimum is exactly 0 at the target configuration.
pub struct MixedSphere {
    terms: Vec<(String, SphereTerm)>,
}

impl MixedSphere {
    /// Targets at the middle of every dimension: continuous midpoint,
    /// rounded integer midpoint, and index distance to the middle choice.
    pub fn centered(space: &SearchSpace) -> Self {
        let terms = space
            .params()
            .iter()
            .map(|p| {
                let term = match p.kind() {
                    ParamKind::Integer { lower, upper } => {
                        SphereTerm::Integer(libm::round((*lower as f64 + *upper as f64) / 2.0) as i64)
                    }
                    ParamKind::Continuous { lower, upper, .. } => {
                        SphereTerm::Continuous((lower + upper) / 2.0)
                    }
                    ParamKind::Categorical { choices } => {
                        let target = (choices.len() - 1) / 2;
                        SphereTerm::Categorical(
                            choices
                                .iter()
                                .enumerate()
                                .map(|(i, c)| (c.clone(), i.abs_diff(target) as f64))
                                .collect(),
                        )
                    }
                };
                (p.name().to_owned(), term)
            })
            .collect();
        Self { terms }
    }

    /// Explicit targets, one per dimension in space order.
    pub fn with_targets(
        space: &SearchSpace,
        targets: Vec<SphereTerm>,
    ) -> Result<Self, ObjectiveError> {
        if targets.len() != space.dimension() {
            return Err(ObjectiveError::new(format!(
                "{} targets for {} dimensions",
                targets.len(),
                space.dimension()
            )));
        }
        let terms = space
            .params()
            .iter()
            .map(|p| p.name().to_owned())
            .zip(targets)
            .collect();
        Ok(Self { terms })
    }
}

impl Objective for MixedSphere {
    fn evaluate(&self, assignment: &Assignment) -> Result<f64, ObjectiveError> {
        let mut total = 0.0;
        for (name, term) in &self.terms {
            let missing = || ObjectiveError::new(format!("missing parameter `{name}`"));
            total += match term {
                SphereTerm::Continuous(target) => {
                    let x = assignment.float(name).ok_or_else(missing)?;
                    (x - target) * (x - target)
                }
                SphereTerm::Integer(target) => {
                    let n = assignment.int(name).ok_or_else(missing)?;
                    n.abs_diff(*target) as f64
                }
                SphereTerm::Categorical(penalties) => {
                    let label = assignment.choice(name).ok_or_else(missing)?;
                    penalties
                        .iter()
                        .find(|(c, _)| c == label)
                        .map(|(_, p)| *p)
                        .ok_or_else(|| {
                            ObjectiveError::new(format!("unknown choice `{label}` for `{name}`"))
                        })?
                }
            };
        }
        Ok(total)
    }

    fn description(&self) -> &str {
        "mixed_sphere"
    }
}
