//! Bee-colony hyper-parameter search over mixed parameter spaces.
//!
//! The optimizer maintains a population of candidate configurations ("food
//! sources") and improves them through employed, onlooker, and scout phases.
//! Integer and categorical dimensions are kept valid by a repair step after
//! every move, binary categorical dimensions move by flipping their encoded
//! bit, and an evaluation cache guarantees that no configuration is ever
//! scored twice. Random and grid search baselines plus an exhaustive oracle
//! share the same evaluation plumbing, so results are directly comparable.
//!
//! The crate is `no_std` compatible (with `alloc`); the default `std` feature
//! adds wall-clock timing of evaluations and thread-parallel dispatch.
//!
//! ```
//! use hypabc::{ColonyParams, Colony, MixedSphere, ParamSpec, SearchSpace};
//!
//! let space = SearchSpace::new(vec![
//!     ParamSpec::integer("trees", 5, 500).unwrap(),
//!     ParamSpec::continuous("rate", 0.0, 1.0).unwrap(),
//!     ParamSpec::categorical("criterion", ["gini", "entropy"]).unwrap(),
//! ])
//! .unwrap();
//! let objective = MixedSphere::centered(&space);
//! let params = ColonyParams::new(200).with_population(10).with_seed(7);
//! let result = Colony::new(&space, &objective, params).unwrap().run().unwrap();
//! assert!(result.evaluations <= 200);
//! ```

#![no_std]
#![warn(missing_docs)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod baselines;
pub mod colony;
pub mod objective;
pub mod oracle;
pub mod space;
pub mod surrogate;

pub use baselines::{grid_search, random_search, BaselineError, GridSpec, DEFAULT_GRID_CAP};
pub use colony::{
    fitness_of, selection_probabilities, Colony, ColonyError, ColonyParams, FoodSource,
    RunResult, StopReason,
};
pub use objective::{
    EvalCache, EvalError, EvalRecord, Evaluator, FnObjective, MixedSphere, Objective,
    ObjectiveError, Phase, SphereTerm,
};
pub use oracle::{
    cardinality, exhaustive_min, space_hash, Discretization, OracleError, OracleFixture,
    OracleResult, DEFAULT_ENUMERATION_CAP,
};
pub use space::{
    Assignment, ConfigKey, Configuration, ParamKind, ParamSpec, ParamValue, RawParamSpec,
    SearchSpace, SpaceError,
};
pub use surrogate::{
    cross_validate, generate_dataset, stratified_folds, Classifier, Dataset, KnnClassifier,
    KnnCv,
};
