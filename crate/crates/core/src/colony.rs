//! The bee-colony optimizer.
//!
//! A population of food sources (candidate configurations) is refined in
//! cycles of three phases. Employed bees try a one-dimensional move for
//! every source; onlooker bees re-try sources picked proportionally to
//! fitness; a scout abandons the most stubborn source once its failed-try
//! counter passes the trial limit and replaces it with a fresh uniform
//! sample. Greedy replacement keeps a source only when the candidate is
//! strictly better, and a candidate identical to the source it challenges is
//! never evaluated at all.
//!
//! The employed phase draws all of its random moves before any objective
//! call is dispatched and applies results in source order, so runs with a
//! `parallel_width` above 1 evaluate exactly the same configurations as
//! sequential runs; only wall time changes.

use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::objective::{call_objective, EvalError, EvalRecord, Evaluator, Objective, Phase};
use crate::space::{Assignment, ConfigKey, Configuration, SearchSpace};

/// How many times a collapsed neighbor move is redrawn (fresh dimension,
/// partner, and step) before the attempt counts as a plain rejection.
pub const DUPLICATE_RETRIES: usize = 10;

/// Errors raised by the optimizer.
#[derive(Debug, Clone, PartialEq)]
pub enum ColonyError {
    /// Fewer than two food sources requested.
    PopulationTooSmall(usize),
    /// The evaluation budget cannot even cover initialization.
    BudgetBelowPopulation {
        /// Requested budget.
        budget: usize,
        /// Requested population size.
        population: usize,
    },
    /// A trial limit of zero was requested.
    ZeroTrialLimit,
    /// A parallel width of zero was requested.
    ZeroParallelWidth,
    /// A cycle limit of zero was requested.
    ZeroCycleLimit,
    /// [`fitness_of`] was given a non-finite objective value.
    NonFiniteObjective(f64),
    /// Selection probabilities were requested for an empty population.
    EmptyPopulation,
    /// The population's total fitness is zero or not finite.
    ZeroTotalFitness,
    /// An objective evaluation failed.
    Evaluation(EvalError),
}

impl fmt::Display for ColonyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColonyError::PopulationTooSmall(np) => {
                write!(f, "population {np} is too small; need at least 2 sources")
            }
            ColonyError::BudgetBelowPopulation { budget, population } => {
                write!(f, "budget {budget} cannot initialize {population} sources")
            }
            ColonyError::ZeroTrialLimit => write!(f, "trial limit must be at least 1"),
            ColonyError::ZeroParallelWidth => write!(f, "parallel width must be at least 1"),
            ColonyError::ZeroCycleLimit => write!(f, "cycle limit must be at least 1"),
            ColonyError::NonFiniteObjective(v) => {
                write!(f, "objective value {v} is not finite")
            }
            ColonyError::EmptyPopulation => write!(f, "population is empty"),
            ColonyError::ZeroTotalFitness => write!(f, "total fitness is zero"),
            ColonyError::Evaluation(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ColonyError {}

impl From<EvalError> for ColonyError {
    fn from(e: EvalError) -> Self {
        ColonyError::Evaluation(e)
    }
}

/// Map an objective value (minimized) to a positive fitness:
/// `1 / (1 + f)` for `f >= 0`, `1 + |f|` otherwise.
pub fn fitness_of(objective: f64) -> Result<f64, ColonyError> {
    if !objective.is_finite() {
        return Err(ColonyError::NonFiniteObjective(objective));
    }
    Ok(if objective >= 0.0 { 1.0 / (1.0 + objective) } else { 1.0 + objective.abs() })
}

/// Roulette-wheel weights: each source's share of the population's total
/// fitness.
pub fn selection_probabilities(fitness: &[f64]) -> Result<Vec<f64>, ColonyError> {
    if fitness.is_empty() {
        return Err(ColonyError::EmptyPopulation);
    }
    let total: f64 = fitness.iter().sum();
    if !total.is_finite() || total <= 0.0 {
        return Err(ColonyError::ZeroTotalFitness);
    }
    Ok(fitness.iter().map(|f| f / total).collect())
}

/// One member of the population.
#[derive(Debug, Clone)]
pub struct FoodSource {
    config: Configuration,
    objective: f64,
    fitness: f64,
    trial: usize,
}

impl FoodSource {
    fn new(config: Configuration, objective: f64) -> Self {
        let fitness = fitness_of(objective).expect("evaluated objective values are finite");
        Self { config, objective, fitness, trial: 0 }
    }

    /// The source's configuration.
    pub fn config(&self) -> &Configuration {
        &self.config
    }

    /// Objective value of the configuration.
    pub fn objective(&self) -> f64 {
        self.objective
    }

    /// Fitness derived from the objective value.
    pub fn fitness(&self) -> f64 {
        self.fitness
    }

    /// Consecutive failed improvement attempts.
    pub fn trial(&self) -> usize {
        self.trial
    }
}

/// Tuning knobs for a run.
#[derive(Debug, Clone, PartialEq)]
pub struct ColonyParams {
    population: usize,
    trial_limit: Option<usize>,
    max_evaluations: usize,
    max_cycles: Option<usize>,
    target_objective: Option<f64>,
    seed: u64,
    parallel_width: usize,
}

impl ColonyParams {
    /// Defaults: 50 sources, trial limit `population * dimensions`, cycle
    /// cap equal to the budget, no target, seed 0, sequential dispatch.
    pub fn new(max_evaluations: usize) -> Self {
        Self {
            population: 50,
            trial_limit: None,
            max_evaluations,
            max_cycles: None,
            target_objective: None,
            seed: 0,
            parallel_width: 1,
        }
    }

    /// Set the number of food sources.
    pub fn with_population(mut self, population: usize) -> Self {
        self.population = population;
        self
    }

    /// Set the trial limit explicitly instead of `population * dimensions`.
    pub fn with_trial_limit(mut self, limit: usize) -> Self {
        self.trial_limit = Some(limit);
        self
    }

    /// Cap the number of cycles (defaults to the evaluation budget, which
    /// guarantees termination even when every candidate is a cache hit).
    pub fn with_max_cycles(mut self, cycles: usize) -> Self {
        self.max_cycles = Some(cycles);
        self
    }

    /// Stop as soon as the best objective reaches `target` or better.
    pub fn with_target(mut self, target: f64) -> Self {
        self.target_objective = Some(target);
        self
    }

    /// Seed for the run's random stream.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Number of employed-phase evaluations dispatched concurrently.
    pub fn with_parallel_width(mut self, width: usize) -> Self {
        self.parallel_width = width;
        self
    }

    /// Number of food sources.
    pub fn population(&self) -> usize {
        self.population
    }

    /// Evaluation budget.
    pub fn max_evaluations(&self) -> usize {
        self.max_evaluations
    }

    /// Explicit trial limit, if one was set.
    pub fn trial_limit(&self) -> Option<usize> {
        self.trial_limit
    }

    /// Target objective, if one was set.
    pub fn target_objective(&self) -> Option<f64> {
        self.target_objective
    }

    /// Seed for the run's random stream.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Concurrent dispatch width.
    pub fn parallel_width(&self) -> usize {
        self.parallel_width
    }

    fn validate(&self) -> Result<(), ColonyError> {
        if self.population < 2 {
            return Err(ColonyError::PopulationTooSmall(self.population));
        }
        if self.max_evaluations < self.population {
            return Err(ColonyError::BudgetBelowPopulation {
                budget: self.max_evaluations,
                population: self.population,
            });
        }
        if self.trial_limit == Some(0) {
            return Err(ColonyError::ZeroTrialLimit);
        }
        if self.max_cycles == Some(0) {
            return Err(ColonyError::ZeroCycleLimit);
        }
        if self.parallel_width == 0 {
            return Err(ColonyError::ZeroParallelWidth);
        }
        Ok(())
    }
}

/// Why a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// The best objective reached the target.
    TargetReached,
    /// The evaluation budget was spent.
    BudgetExhausted,
    /// The cycle cap was reached (only relevant on spaces small enough for
    /// the cache to absorb whole cycles).
    CycleLimit,
    /// The search visited everything it was asked to (baselines only).
    Completed,
}

impl StopReason {
    /// Lowercase label used in reports.
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::TargetReached => "target_reached",
            StopReason::BudgetExhausted => "budget_exhausted",
            StopReason::CycleLimit => "cycle_limit",
            StopReason::Completed => "completed",
        }
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a finished search.
#[derive(Debug, Clone)]
pub struct RunResult {
    /// Best configuration, decoded.
    pub best_assignment: Assignment,
    /// Best configuration, encoded.
    pub best_config: Configuration,
    /// Best objective value.
    pub best_objective: f64,
    /// Real objective calls consumed.
    pub evaluations: usize,
    /// Cycles completed (0 when the run ended during or right after
    /// initialization, and for baselines).
    pub cycles: u32,
    /// Why the run ended.
    pub stop: StopReason,
    /// Evaluation requests answered from the cache.
    pub cache_hits: u64,
    /// Evaluation requests that called the objective.
    pub cache_misses: u64,
    /// Every evaluation request, in order.
    pub records: Vec<EvalRecord>,
}

/// Search state: the population, its evaluator, and the random stream.
pub struct Colony<'a> {
    space: &'a SearchSpace,
    params: ColonyParams,
    trial_limit: usize,
    max_cycles: u64,
    rng: ChaCha8Rng,
    evaluator: Evaluator<'a>,
    sources: Vec<FoodSource>,
    cycle: u32,
}

/// One planned employed-phase attempt, in source order.
enum PlannedAttempt {
    /// Candidate generation kept collapsing onto the source; rejected
    /// without an evaluation.
    Collapsed,
    /// The cache already knows this candidate.
    Hit(Configuration, f64),
    /// Fresh evaluation; the index points into the dispatched job list.
    Fresh(Configuration, usize),
    /// Same key as an earlier fresh candidate in this batch; shares its
    /// value and is logged as a cache hit.
    SharesFresh(Configuration, usize),
}

impl<'a> Colony<'a> {
    /// Validate parameters and set up a colony over `space`.
    pub fn new(
        space: &'a SearchSpace,
        objective: &'a dyn Objective,
        params: ColonyParams,
    ) -> Result<Self, ColonyError> {
        params.validate()?;
        let trial_limit = params.trial_limit.unwrap_or(params.population * space.dimension());
        let max_cycles = params.max_cycles.unwrap_or(params.max_evaluations) as u64;
        let rng = ChaCha8Rng::seed_from_u64(params.seed);
        let evaluator = Evaluator::new(space, objective, params.max_evaluations);
        Ok(Self {
            space,
            params,
            trial_limit,
            max_cycles,
            rng,
            evaluator,
            sources: Vec::new(),
            cycle: 0,
        })
    }

    /// Forward every evaluation record to `observer`, in order.
    pub fn set_observer(&mut self, observer: impl FnMut(&EvalRecord) + 'a) {
        self.evaluator.set_observer(observer);
    }

    /// The population, in source order.
    pub fn sources(&self) -> &[FoodSource] {
        &self.sources
    }

    /// Cycles completed so far.
    pub fn cycle(&self) -> u32 {
        self.cycle
    }

    /// Real objective calls consumed so far.
    pub fn evaluations_used(&self) -> usize {
        self.evaluator.evaluations()
    }

    /// Best `(configuration, objective)` seen so far.
    pub fn best(&self) -> Option<(&Configuration, f64)> {
        self.evaluator.best()
    }

    /// Effective trial limit for this run.
    pub fn trial_limit(&self) -> usize {
        self.trial_limit
    }

    /// Sample and evaluate the initial population. Requires a budget of at
    /// least one call per source; duplicates among the samples are served by
    /// the cache.
    pub fn initialize(&mut self) -> Result<(), ColonyError> {
        assert!(self.sources.is_empty(), "population is already initialized");
        for i in 0..self.params.population {
            let config = self.space.sample_uniform(&mut self.rng);
            let out = self.evaluator.evaluate(&config, 0, Phase::Init, Some(i))?;
            self.sources.push(FoodSource::new(config, out.value));
        }
        Ok(())
    }

    /// Employed phase: one improvement attempt per source.
    ///
    /// All moves are drawn first, against the population as it stood at
    /// phase start; then candidates are evaluated (concurrently up to the
    /// configured width) and applied in source order.
    pub fn employed_phase(&mut self) -> Result<Option<StopReason>, ColonyError> {
        assert!(!self.sources.is_empty(), "initialize the population first");
        if self.evaluator.exhausted() {
            return Ok(Some(StopReason::BudgetExhausted));
        }

        let candidates: Vec<Option<Configuration>> = (0..self.sources.len())
            .map(|i| self.draw_candidate(i))
            .collect();

        // Plan in source order: cache hits are free, duplicates within the
        // batch share one fresh call, and planning stops where the budget
        // would run out (exactly where a sequential pass would stop).
        let mut plan = Vec::with_capacity(candidates.len());
        let mut jobs: Vec<Assignment> = Vec::new();
        let mut pending: Vec<(ConfigKey, usize)> = Vec::new();
        let mut truncated = false;
        let mut affordable = self.evaluator.budget() - self.evaluator.evaluations();
        for candidate in candidates {
            let Some(config) = candidate else {
                plan.push(PlannedAttempt::Collapsed);
                continue;
            };
            let key = config.key();
            if let Some(value) = self.evaluator.probe(&key) {
                plan.push(PlannedAttempt::Hit(config, value));
            } else if let Some(&(_, job)) = pending.iter().find(|(k, _)| *k == key) {
                plan.push(PlannedAttempt::SharesFresh(config, job));
            } else if affordable == 0 {
                truncated = true;
                break;
            } else {
                affordable -= 1;
                let job = jobs.len();
                jobs.push(self.space.decode(&config));
                pending.push((key, job));
                plan.push(PlannedAttempt::Fresh(config, job));
            }
        }

        let results = dispatch(self.evaluator.objective(), &jobs, self.params.parallel_width)?;

        for (i, planned) in plan.into_iter().enumerate() {
            let (config, value, fresh_elapsed) = match planned {
                PlannedAttempt::Collapsed => {
                    self.sources[i].trial += 1;
                    continue;
                }
                PlannedAttempt::Hit(config, value) => (config, value, None),
                PlannedAttempt::Fresh(config, job) => {
                    let (value, elapsed) = results[job];
                    (config, value, Some(elapsed))
                }
                PlannedAttempt::SharesFresh(config, job) => (config, results[job].0, None),
            };
            self.evaluator.commit(&config, value, fresh_elapsed, self.cycle, Phase::Employed, Some(i));
            self.apply_greedy(i, config, value);
            if self.target_met() {
                return Ok(Some(StopReason::TargetReached));
            }
        }

        if truncated {
            return Ok(Some(StopReason::BudgetExhausted));
        }
        Ok(None)
    }

    /// Onlooker phase: sources are revisited with probability proportional
    /// to fitness. Probabilities are computed once at phase start;
    /// replacements take effect immediately for later draws.
    pub fn onlooker_phase(&mut self) -> Result<Option<StopReason>, ColonyError> {
        assert!(!self.sources.is_empty(), "initialize the population first");
        let fitness: Vec<f64> = self.sources.iter().map(|s| s.fitness).collect();
        let probabilities = selection_probabilities(&fitness)?;
        for (i, &probability) in probabilities.iter().enumerate() {
            let u: f64 = self.rng.random_range(0.0..=1.0);
            if u < probability {
                if self.evaluator.exhausted() {
                    return Ok(Some(StopReason::BudgetExhausted));
                }
                if let Some(stop) = self.attempt(i, Phase::Onlooker)? {
                    return Ok(Some(stop));
                }
            }
        }
        Ok(None)
    }

    /// Scout phase: if the most-tried source has failed more than the trial
    /// limit allows, replace it with a fresh uniform sample. At most one
    /// source is replaced per cycle; the global best is kept separately and
    /// survives the abandonment.
    pub fn scout_phase(&mut self) -> Result<Option<StopReason>, ColonyError> {
        assert!(!self.sources.is_empty(), "initialize the population first");
        let mut idx = 0;
        for (i, source) in self.sources.iter().enumerate() {
            if source.trial > self.sources[idx].trial {
                idx = i;
            }
        }
        if self.sources[idx].trial <= self.trial_limit {
            return Ok(None);
        }
        if self.evaluator.exhausted() {
            return Ok(Some(StopReason::BudgetExhausted));
        }
        let fresh = self.space.sample_uniform(&mut self.rng);
        match self.evaluator.evaluate(&fresh, self.cycle, Phase::Scout, Some(idx)) {
            Ok(out) => self.sources[idx] = FoodSource::new(fresh, out.value),
            Err(EvalError::BudgetExhausted) => return Ok(Some(StopReason::BudgetExhausted)),
            Err(e) => return Err(e.into()),
        }
        if self.target_met() {
            return Ok(Some(StopReason::TargetReached));
        }
        Ok(None)
    }

    /// Run until the target is met, the budget is spent, or the cycle cap
    /// is hit.
    pub fn run(mut self) -> Result<RunResult, ColonyError> {
        self.initialize()?;
        let mut stop = if self.target_met() { Some(StopReason::TargetReached) } else { None };
        while stop.is_none() {
            if self.evaluator.exhausted() {
                stop = Some(StopReason::BudgetExhausted);
                break;
            }
            if u64::from(self.cycle) >= self.max_cycles {
                stop = Some(StopReason::CycleLimit);
                break;
            }
            self.cycle += 1;
            stop = self.employed_phase()?;
            if stop.is_none() {
                stop = self.onlooker_phase()?;
            }
            if stop.is_none() {
                stop = self.scout_phase()?;
            }
        }
        let stop = stop.expect("loop only exits with a stop reason");

        let (best_config, best_objective) = {
            let (c, v) = self.evaluator.best().expect("initialization evaluated at least once");
            (c.clone(), v)
        };
        let cycles = self.cycle;
        let (records, cache, evaluations) = self.evaluator.finish();
        Ok(RunResult {
            best_assignment: self.space.decode(&best_config),
            best_config,
            best_objective,
            evaluations,
            cycles,
            stop,
            cache_hits: cache.hits(),
            cache_misses: cache.misses(),
            records,
        })
    }

    /// One sequential improvement attempt for source `i`.
    fn attempt(&mut self, i: usize, phase: Phase) -> Result<Option<StopReason>, ColonyError> {
        match self.draw_candidate(i) {
            None => {
                self.sources[i].trial += 1;
                Ok(None)
            }
            Some(candidate) => {
                let out = match self.evaluator.evaluate(&candidate, self.cycle, phase, Some(i)) {
                    Ok(out) => out,
                    Err(EvalError::BudgetExhausted) => {
                        return Ok(Some(StopReason::BudgetExhausted))
                    }
                    Err(e) => return Err(e.into()),
                };
                self.apply_greedy(i, candidate, out.value);
                if self.target_met() {
                    return Ok(Some(StopReason::TargetReached));
                }
                Ok(None)
            }
        }
    }

    /// Draw a one-dimensional move for source `i`: uniform dimension,
    /// uniform partner `k != i`, uniform step in `[-1, 1]`. Binary
    /// categorical dimensions flip instead of stepping. A candidate equal to
    /// the source is redrawn up to [`DUPLICATE_RETRIES`] times; `None` means
    /// every redraw collapsed.
    fn draw_candidate(&mut self, i: usize) -> Option<Configuration> {
        let np = self.sources.len();
        let dims = self.space.dimension();
        for _ in 0..DUPLICATE_RETRIES {
            let dim = self.rng.random_range(0..dims);
            let mut k = self.rng.random_range(0..np - 1);
            if k >= i {
                k += 1;
            }
            let phi: f64 = self.rng.random_range(-1.0..=1.0);
            let candidate = self
                .space
                .neighbor_move(&self.sources[i].config, &self.sources[k].config, dim, phi)
                .expect("population configurations match the space");
            if candidate != self.sources[i].config {
                return Some(candidate);
            }
        }
        None
    }

    /// Keep the better of source `i` and `candidate`; ties count as failed
    /// attempts.
    fn apply_greedy(&mut self, i: usize, candidate: Configuration, value: f64) {
        if value < self.sources[i].objective {
            self.sources[i] = FoodSource::new(candidate, value);
        } else {
            self.sources[i].trial += 1;
        }
    }

    fn target_met(&self) -> bool {
        match (self.evaluator.best(), self.params.target_objective) {
            (Some((_, best)), Some(target)) => best <= target,
            _ => false,
        }
    }
}

/// Evaluate planned jobs, at most `width` at a time. Results come back in
/// job order; the first failure (by job order) wins.
fn dispatch(
    objective: &dyn Objective,
    jobs: &[Assignment],
    width: usize,
) -> Result<Vec<(f64, Duration)>, EvalError> {
    #[cfg(feature = "std")]
    if width > 1 && jobs.len() > 1 {
        let mut results = Vec::with_capacity(jobs.len());
        for wave in jobs.chunks(width) {
            let wave_results: Vec<Result<(f64, Duration), EvalError>> =
                std::thread::scope(|scope| {
                    let handles: Vec<_> = wave
                        .iter()
                        .map(|assignment| scope.spawn(move || call_objective(objective, assignment)))
                        .collect();
                    handles
                        .into_iter()
                        .map(|h| h.join().expect("objective call panicked"))
                        .collect()
                });
            for r in wave_results {
                results.push(r?);
            }
        }
        return Ok(results);
    }
    let _ = width;
    jobs.iter().map(|assignment| call_objective(objective, assignment)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::{FnObjective, MixedSphere, SphereTerm};
    use crate::space::ParamSpec;
    use alloc::vec;
    use approx::assert_relative_eq;

    fn square_space() -> SearchSpace {
        SearchSpace::new(vec![
            ParamSpec::integer("a", 0, 9).unwrap(),
            ParamSpec::integer("b", 1, 6).unwrap(),
            ParamSpec::categorical("c", ["off", "on"]).unwrap(),
        ])
        .unwrap()
    }

    fn square_sphere(space: &SearchSpace) -> MixedSphere {
        MixedSphere::with_targets(
            space,
            vec![
                SphereTerm::Integer(7),
                SphereTerm::Integer(2),
                SphereTerm::Categorical(vec![("off".into(), 0.4), ("on".into(), 0.0)]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn fitness_matches_pinned_values() {
        assert_eq!(fitness_of(0.0).unwrap(), 1.0);
        assert_relative_eq!(fitness_of(0.12).unwrap(), 1.0 / 1.12, epsilon = 1e-9);
        assert_eq!(fitness_of(-1.0).unwrap(), 2.0);
        assert!(fitness_of(f64::NAN).is_err());
        assert!(fitness_of(f64::INFINITY).is_err());
    }

    #[test]
    fn fitness_is_positive_for_finite_inputs() {
        for i in -1000..1000 {
            let f = i as f64 * 1e3;
            assert!(fitness_of(f).unwrap() > 0.0, "fitness <= 0 for {f}");
        }
    }

    #[test]
    fn probabilities_match_pinned_values() {
        assert_eq!(selection_probabilities(&[1.0, 2.0, 1.0]).unwrap(), vec![0.25, 0.5, 0.25]);
        let p = selection_probabilities(&[1.0, 1.0 / 1.12]).unwrap();
        assert_relative_eq!(p[0], 28.0 / 53.0, epsilon = 1e-12);
        assert_relative_eq!(p[1], 25.0 / 53.0, epsilon = 1e-12);
    }

    #[test]
    fn probabilities_sum_to_one_and_reject_degenerate_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let n = rng.random_range(1..40);
            let fitness: Vec<f64> =
                (0..n).map(|_| rng.random_range(1e-6..10.0)).collect();
            let p = selection_probabilities(&fitness).unwrap();
            let total: f64 = p.iter().sum();
            assert!((total - 1.0).abs() <= 1e-12, "sum {total}");
        }
        assert_eq!(selection_probabilities(&[]), Err(ColonyError::EmptyPopulation));
        assert_eq!(selection_probabilities(&[0.0, 0.0]), Err(ColonyError::ZeroTotalFitness));
    }

    #[test]
    fn uniform_fitness_gives_equal_probabilities() {
        let p = selection_probabilities(&[1.0; 4]).unwrap();
        assert_eq!(p, vec![0.25; 4]);
        let p = selection_probabilities(&[0.37; 50]).unwrap();
        assert!(p.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn onlooker_selection_rate_matches_probabilities() {
        // Uniform fitness over 50 sources: each source should be selected in
        // about 1/50 of draws across 1000 simulated phases.
        let np = 50;
        let phases = 1000;
        let probabilities = selection_probabilities(&vec![1.0; np]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut counts = vec![0u32; np];
        for _ in 0..phases {
            for (i, count) in counts.iter_mut().enumerate() {
                let u: f64 = rng.random_range(0.0..=1.0);
                if u < probabilities[i] {
                    *count += 1;
                }
            }
        }
        let p = 1.0 / np as f64;
        let sigma = (phases as f64 * p * (1.0 - p)).sqrt();
        let expected = phases as f64 * p;
        for (i, &count) in counts.iter().enumerate() {
            let deviation = (count as f64 - expected).abs();
            assert!(deviation <= 3.0 * sigma, "source {i} selected {count} times");
        }
    }

    #[test]
    fn params_validation_rejects_bad_settings() {
        let space = square_space();
        let sphere = square_sphere(&space);
        let bad = |p: ColonyParams| Colony::new(&space, &sphere, p).err().unwrap();
        assert_eq!(
            bad(ColonyParams::new(100).with_population(1)),
            ColonyError::PopulationTooSmall(1)
        );
        assert_eq!(
            bad(ColonyParams::new(5).with_population(10)),
            ColonyError::BudgetBelowPopulation { budget: 5, population: 10 }
        );
        assert_eq!(bad(ColonyParams::new(100).with_trial_limit(0)), ColonyError::ZeroTrialLimit);
        assert_eq!(
            bad(ColonyParams::new(100).with_parallel_width(0)),
            ColonyError::ZeroParallelWidth
        );
        assert_eq!(bad(ColonyParams::new(100).with_max_cycles(0)), ColonyError::ZeroCycleLimit);
    }

    #[test]
    fn trial_limit_defaults_to_population_times_dimensions() {
        let space = square_space();
        let sphere = square_sphere(&space);
        let colony =
            Colony::new(&space, &sphere, ColonyParams::new(100).with_population(10)).unwrap();
        assert_eq!(colony.trial_limit(), 30);
    }

    #[test]
    fn initialization_consumes_one_call_per_distinct_source() {
        let space = square_space();
        let sphere = square_sphere(&space);
        let mut colony =
            Colony::new(&space, &sphere, ColonyParams::new(100).with_population(20).with_seed(5))
                .unwrap();
        colony.initialize().unwrap();
        assert_eq!(colony.sources().len(), 20);
        let hits = 20 - colony.evaluations_used();
        // 120-point space: a few of the 20 samples may repeat, and repeats
        // must not burn budget.
        assert_eq!(colony.evaluations_used() + hits, 20);
        assert!(colony.best().is_some());
        for s in colony.sources() {
            assert_eq!(s.trial(), 0);
            assert_eq!(s.fitness(), fitness_of(s.objective()).unwrap());
        }
    }

    #[test]
    fn employed_phase_attempts_every_source_once() {
        let space = SearchSpace::new(vec![
            ParamSpec::continuous("x", 0.0, 1.0).unwrap(),
            ParamSpec::continuous("y", 0.0, 1.0).unwrap(),
        ])
        .unwrap();
        let sphere = MixedSphere::centered(&space);
        let mut colony =
            Colony::new(&space, &sphere, ColonyParams::new(100).with_population(8).with_seed(3))
                .unwrap();
        colony.initialize().unwrap();
        colony.cycle = 1;
        let before = colony.evaluations_used();
        assert_eq!(colony.employed_phase().unwrap(), None);
        // Continuous space: every move lands somewhere new, so all 8
        // attempts evaluate.
        assert_eq!(colony.evaluations_used(), before + 8);
    }

    #[test]
    fn employed_phase_stops_exactly_at_the_budget() {
        let space = SearchSpace::new(vec![
            ParamSpec::continuous("x", 0.0, 1.0).unwrap(),
            ParamSpec::continuous("y", 0.0, 1.0).unwrap(),
        ])
        .unwrap();
        let sphere = MixedSphere::centered(&space);
        // Budget NP + 3: employed gets three calls past initialization.
        let mut colony =
            Colony::new(&space, &sphere, ColonyParams::new(8).with_population(5).with_seed(3))
                .unwrap();
        colony.initialize().unwrap();
        colony.cycle = 1;
        assert_eq!(colony.employed_phase().unwrap(), Some(StopReason::BudgetExhausted));
        assert_eq!(colony.evaluations_used(), 8);
        assert!(colony.best().is_some());
    }

    #[test]
    fn collapsed_moves_are_rejected_without_evaluation() {
        let space = SearchSpace::new(vec![ParamSpec::integer("n", 0, 1).unwrap()]).unwrap();
        let constant = FnObjective::new("flat", |_: &Assignment| 1.0);
        let mut colony =
            Colony::new(&space, &constant, ColonyParams::new(50).with_population(3).with_seed(1))
                .unwrap();
        colony.initialize().unwrap();
        // Force every source onto the same point: all partner differences
        // are zero, so every redraw collapses.
        let same = colony.sources[0].config.clone();
        let value = colony.sources[0].objective;
        for s in &mut colony.sources {
            *s = FoodSource::new(same.clone(), value);
        }
        let records_before = colony.evaluator.records().len();
        colony.cycle = 1;
        assert_eq!(colony.employed_phase().unwrap(), None);
        assert_eq!(colony.evaluator.records().len(), records_before);
        for s in colony.sources() {
            assert_eq!(s.trial(), 1);
        }
    }

    #[test]
    fn greedy_replacement_requires_strict_improvement() {
        let space = SearchSpace::new(vec![
            ParamSpec::continuous("x", 0.0, 1.0).unwrap(),
        ])
        .unwrap();
        let constant = FnObjective::new("flat", |_: &Assignment| 2.5);
        let mut colony =
            Colony::new(&space, &constant, ColonyParams::new(200).with_population(4).with_seed(8))
                .unwrap();
        colony.initialize().unwrap();
        let configs_before: Vec<_> =
            colony.sources().iter().map(|s| s.config().clone()).collect();
        colony.cycle = 1;
        colony.employed_phase().unwrap();
        // Ties everywhere: nothing replaced, every trial bumped.
        for (s, before) in colony.sources().iter().zip(&configs_before) {
            assert_eq!(s.config(), before);
            assert_eq!(s.trial(), 1);
        }
    }

    #[test]
    fn scout_requires_trial_strictly_above_limit() {
        let space = square_space();
        let sphere = square_sphere(&space);
        let params = ColonyParams::new(100).with_population(4).with_trial_limit(3).with_seed(2);
        let mut colony = Colony::new(&space, &sphere, params).unwrap();
        colony.initialize().unwrap();
        colony.cycle = 1;

        for s in &mut colony.sources {
            s.trial = 3;
        }
        let before: Vec<_> = colony.sources().iter().map(|s| s.config().clone()).collect();
        assert_eq!(colony.scout_phase().unwrap(), None);
        for (s, b) in colony.sources().iter().zip(&before) {
            assert_eq!(s.config(), b, "no trial exceeds the limit, nothing moves");
        }

        colony.sources[1].trial = 4;
        colony.sources[2].trial = 4;
        colony.scout_phase().unwrap();
        // Only the first source over the limit is replaced, and its counter
        // resets.
        assert_eq!(colony.sources()[1].trial(), 0);
        assert_eq!(colony.sources()[2].trial(), 4);
        assert_eq!(colony.sources()[0].config(), &before[0]);
    }

    #[test]
    fn scout_never_discards_the_global_best() {
        let space = square_space();
        let sphere = square_sphere(&space);
        let params = ColonyParams::new(60).with_population(4).with_trial_limit(1).with_seed(6);
        let mut colony = Colony::new(&space, &sphere, params).unwrap();
        colony.initialize().unwrap();
        let best_value = colony.best().unwrap().1;
        // Mark the best source for abandonment.
        let best_idx = (0..4).min_by(|&a, &b| {
            colony.sources[a].objective.partial_cmp(&colony.sources[b].objective).unwrap()
        })
        .unwrap();
        colony.sources[best_idx].trial = 2;
        colony.cycle = 1;
        colony.scout_phase().unwrap();
        assert!(colony.best().unwrap().1 <= best_value);
    }

    #[test]
    fn run_stops_right_after_init_when_target_is_met() {
        let space = square_space();
        let sphere = square_sphere(&space);
        let params =
            ColonyParams::new(100).with_population(10).with_seed(4).with_target(1e9);
        let result = Colony::new(&space, &sphere, params).unwrap().run().unwrap();
        assert_eq!(result.stop, StopReason::TargetReached);
        assert_eq!(result.cycles, 0);
        assert!(result.records.iter().all(|r| r.phase == Phase::Init));
    }

    #[test]
    fn run_respects_budget_and_cycle_accounting() {
        let space = square_space();
        let sphere = square_sphere(&space);
        let params = ColonyParams::new(60).with_population(6).with_seed(9);
        let result = Colony::new(&space, &sphere, params).unwrap().run().unwrap();
        assert!(result.evaluations <= 60);
        // Per-cycle fresh calls never exceed one employed and one onlooker
        // attempt per source plus one scout.
        for cycle in 1..=result.cycles {
            let fresh = result
                .records
                .iter()
                .filter(|r| r.cycle == cycle && !r.cache_hit)
                .count();
            assert!(fresh <= 2 * 6 + 1, "cycle {cycle} used {fresh} fresh calls");
        }
        let min = result
            .records
            .iter()
            .map(|r| r.objective)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(result.best_objective, min);
    }

    #[test]
    fn run_terminates_on_fully_cached_tiny_spaces() {
        let space = SearchSpace::new(vec![
            ParamSpec::categorical("bit", ["zero", "one"]).unwrap(),
        ])
        .unwrap();
        let objective = FnObjective::new("bit", |a: &Assignment| {
            if a.choice("bit") == Some("one") { 0.5 } else { 1.0 }
        });
        let params = ColonyParams::new(50).with_population(4).with_seed(3);
        let result = Colony::new(&space, &objective, params).unwrap().run().unwrap();
        // Two points exist; caching keeps fresh calls at two no matter how
        // long the colony keeps proposing them.
        assert!(result.evaluations <= 2);
        assert_eq!(result.stop, StopReason::CycleLimit);
        assert_eq!(result.best_objective, 0.5);
    }

    #[test]
    fn identical_seeds_replay_identical_runs() {
        let space = square_space();
        let sphere = square_sphere(&space);
        let run = || {
            let params = ColonyParams::new(80).with_population(8).with_seed(21);
            Colony::new(&space, &sphere, params).unwrap().run().unwrap()
        };
        let a = run();
        let b = run();
        assert_eq!(a.best_config, b.best_config);
        assert_eq!(a.evaluations, b.evaluations);
        assert_eq!(a.records.len(), b.records.len());
        for (ra, rb) in a.records.iter().zip(&b.records) {
            assert_eq!(ra.assignment, rb.assignment);
            assert_eq!(ra.objective, rb.objective);
            assert_eq!(ra.cache_hit, rb.cache_hit);
            assert_eq!(ra.phase, rb.phase);
        }
    }

    #[test]
    fn parallel_width_changes_wall_time_only() {
        let space = square_space();
        let sphere = square_sphere(&space);
        let run = |width: usize| {
            let params = ColonyParams::new(90)
                .with_population(9)
                .with_seed(17)
                .with_parallel_width(width);
            Colony::new(&space, &sphere, params).unwrap().run().unwrap()
        };
        let sequential = run(1);
        let wide = run(4);
        assert_eq!(sequential.best_config, wide.best_config);
        assert_eq!(sequential.evaluations, wide.evaluations);
        assert_eq!(sequential.records.len(), wide.records.len());
        for (ra, rb) in sequential.records.iter().zip(&wide.records) {
            assert_eq!(ra.assignment, rb.assignment);
            assert_eq!(ra.objective, rb.objective);
            assert_eq!(ra.cache_hit, rb.cache_hit);
            assert_eq!(ra.phase, rb.phase);
            assert_eq!(ra.source, rb.source);
        }
    }

    #[test]
    fn candidates_never_tie_bitwise_with_their_source() {
        // Every evaluated employed/onlooker candidate must differ from the
        // source it challenges; reconstruct incumbents from the log.
        let space = square_space();
        let sphere = square_sphere(&space);
        let params = ColonyParams::new(120).with_population(6).with_seed(13);
        let result = Colony::new(&space, &sphere, params).unwrap().run().unwrap();
        let mut incumbents: Vec<Option<(Assignment, f64)>> = vec![None; 6];
        for r in &result.records {
            let i = r.source.expect("colony records carry a source index");
            match r.phase {
                Phase::Init | Phase::Scout => {
                    incumbents[i] = Some((r.assignment.clone(), r.objective));
                }
                Phase::Employed | Phase::Onlooker => {
                    let (current, value) =
                        incumbents[i].as_ref().expect("source was initialized");
                    assert_ne!(&r.assignment, current, "challenged with an identical config");
                    if r.objective < *value {
                        incumbents[i] = Some((r.assignment.clone(), r.objective));
                    }
                }
                Phase::Baseline => unreachable!("colony runs do not log baseline records"),
            }
        }
    }

    #[test]
    fn oracle_minimum_is_found_on_the_small_square() {
        // 10 x 6 x 2 grid with a unique zero at (7, 2, on).
        let space = square_space();
        let sphere = square_sphere(&space);
        let mut found = 0;
        for seed in 0..40 {
            let params =
                ColonyParams::new(100).with_population(10).with_seed(seed).with_target(0.0);
            let result = Colony::new(&space, &sphere, params).unwrap().run().unwrap();
            if result.best_objective == 0.0 {
                found += 1;
                assert_eq!(result.best_assignment.int("a"), Some(7));
                assert_eq!(result.best_assignment.int("b"), Some(2));
                assert_eq!(result.best_assignment.choice("c"), Some("on"));
            }
        }
        assert!(found >= 36, "found the optimum in only {found}/40 runs");
    }
}
