//! Mixed-type search spaces.
//!
//! A [`SearchSpace`] is an ordered list of named dimensions: whole-valued
//! ranges, real ranges, or finite label sets. Every dimension is encoded as
//! an `f64` (categoricals as choice indices), so the optimizer can move
//! through all of them with the same arithmetic. The [`SearchSpace::repair`]
//! step makes any raw vector valid again: values are clamped into bounds and
//! discrete dimensions are rounded half away from zero. All configurations
//! handed out by this module are repair fixed points.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

/// Amount added to an exclusive lower bound when clamping, so repaired
/// values stay strictly above it.
pub const LOWER_BOUND_EPSILON: f64 = 1e-6;

/// Errors raised while building or using a search space.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceError {
    /// The space has no dimensions.
    Empty,
    /// Two parameters share the same name.
    DuplicateName(String),
    /// A parameter description is invalid; the reason says why.
    InvalidParam {
        /// Name of the offending parameter.
        name: String,
        /// Human-readable explanation.
        reason: String,
    },
    /// A value vector does not have one entry per dimension.
    DimensionMismatch {
        /// Number of dimensions in the space.
        expected: usize,
        /// Number of values supplied.
        got: usize,
    },
    /// A dimension index is out of range.
    BadDimension {
        /// Requested index.
        dim: usize,
        /// Number of dimensions in the space.
        dims: usize,
    },
    /// A bit flip was requested on a dimension that is not a two-choice
    /// categorical.
    NotBinary(String),
    /// A named assignment cannot be encoded into this space.
    BadAssignment {
        /// Name of the offending parameter.
        name: String,
        /// Human-readable explanation.
        reason: String,
    },
}

impl fmt::Display for SpaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceError::Empty => write!(f, "search space has no dimensions"),
            SpaceError::DuplicateName(name) => write!(f, "duplicate parameter name `{name}`"),
            SpaceError::InvalidParam { name, reason } => {
                write!(f, "invalid parameter `{name}`: {reason}")
            }
            SpaceError::DimensionMismatch { expected, got } => {
                write!(f, "expected {expected} values, got {got}")
            }
            SpaceError::BadDimension { dim, dims } => {
                write!(f, "dimension index {dim} out of range for {dims}-dimensional space")
            }
            SpaceError::NotBinary(name) => {
                write!(f, "parameter `{name}` is not a binary categorical")
            }
            SpaceError::BadAssignment { name, reason } => {
                write!(f, "bad assignment for `{name}`: {reason}")
            }
        }
    }
}

impl core::error::Error for SpaceError {}

/// The type and domain of one dimension.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamKind {
    /// Whole values in `lower..=upper`.
    Integer {
        /// Inclusive lower bound.
        lower: i64,
        /// Inclusive upper bound.
        upper: i64,
    },
    /// Real values in `[lower, upper]`, or `(lower, upper]` when the lower
    /// bound is exclusive.
    Continuous {
        /// Lower bound.
        lower: f64,
        /// Inclusive upper bound.
        upper: f64,
        /// When set, repaired values stay strictly above `lower`.
        lower_exclusive: bool,
    },
    /// One of a finite set of labels, encoded as indices `0..choices.len()`.
    Categorical {
        /// Labels in encoding order.
        choices: Vec<String>,
    },
}

/// One named dimension of a search space.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamSpec {
    name: String,
    kind: ParamKind,
}

impl ParamSpec {
    /// A whole-valued dimension with inclusive bounds.
    pub fn integer(name: impl Into<String>, lower: i64, upper: i64) -> Result<Self, SpaceError> {
        let name = name.into();
        if lower >= upper {
            return Err(SpaceError::InvalidParam {
                name,
                reason: format!("bounds [{lower}, {upper}] are not increasing"),
            });
        }
        Ok(Self { name, kind: ParamKind::Integer { lower, upper } })
    }

    /// A real-valued dimension with inclusive bounds.
    pub fn continuous(name: impl Into<String>, lower: f64, upper: f64) -> Result<Self, SpaceError> {
        Self::real(name.into(), lower, upper, false)
    }

    /// A real-valued dimension on `(lower, upper]`; repair keeps values
    /// strictly above the lower bound.
    pub fn continuous_above(
        name: impl Into<String>,
        lower: f64,
        upper: f64,
    ) -> Result<Self, SpaceError> {
        Self::real(name.into(), lower, upper, true)
    }

    fn real(name: String, lower: f64, upper: f64, lower_exclusive: bool) -> Result<Self, SpaceError> {
        if !lower.is_finite() || !upper.is_finite() {
            return Err(SpaceError::InvalidParam { name, reason: "bounds must be finite".to_owned() });
        }
        if lower >= upper {
            return Err(SpaceError::InvalidParam {
                name,
                reason: format!("bounds [{lower}, {upper}] are not increasing"),
            });
        }
        Ok(Self { name, kind: ParamKind::Continuous { lower, upper, lower_exclusive } })
    }

    /// A categorical dimension over at least two labels.
    pub fn categorical<I, S>(name: impl Into<String>, choices: I) -> Result<Self, SpaceError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let name = name.into();
        let choices: Vec<String> = choices.into_iter().map(Into::into).collect();
        if choices.len() < 2 {
            return Err(SpaceError::InvalidParam {
                name,
                reason: "categorical needs at least two choices".to_owned(),
            });
        }
        for (i, c) in choices.iter().enumerate() {
            if choices[..i].contains(c) {
                return Err(SpaceError::InvalidParam {
                    name,
                    reason: format!("duplicate choice `{c}`"),
                });
            }
        }
        Ok(Self { name, kind: ParamKind::Categorical { choices } })
    }

    /// Parameter name.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Parameter type and domain.
    pub fn kind(&self) -> &ParamKind {
        &self.kind
    }

    /// Whether repaired values are rounded to whole numbers.
    pub fn is_discrete(&self) -> bool {
        !matches!(self.kind, ParamKind::Continuous { .. })
    }

    /// Whether this is a categorical dimension with exactly two choices.
    pub fn is_binary_categorical(&self) -> bool {
        matches!(&self.kind, ParamKind::Categorical { choices } if choices.len() == 2)
    }

    /// Encoded numeric bounds: integer bounds as-is, categorical choices as
    /// the index range `[0, len - 1]`.
    pub fn encoded_bounds(&self) -> (f64, f64) {
        match &self.kind {
            ParamKind::Integer { lower, upper } => (*lower as f64, *upper as f64),
            ParamKind::Continuous { lower, upper, .. } => (*lower, *upper),
            ParamKind::Categorical { choices } => (0.0, (choices.len() - 1) as f64),
        }
    }

    /// Smallest encoded value repair will produce (exclusive lower bounds
    /// are nudged inward by [`LOWER_BOUND_EPSILON`]).
    fn clamp_floor(&self) -> f64 {
        match &self.kind {
            ParamKind::Continuous { lower, lower_exclusive: true, .. } => {
                lower + LOWER_BOUND_EPSILON
            }
            _ => self.encoded_bounds().0,
        }
    }

    /// Clamp into bounds, then round discrete dimensions half away from
    /// zero. Negative zero is normalized so equal values share one bit
    /// pattern.
    pub fn repair_value(&self, raw: f64) -> f64 {
        let (_, hi) = self.encoded_bounds();
        let lo = self.clamp_floor();
        let mut v = if raw.is_nan() || raw < lo {
            lo
        } else if raw > hi {
            hi
        } else {
            raw
        };
        if self.is_discrete() {
            v = libm::round(v);
        }
        if v == 0.0 {
            v = 0.0;
        }
        v
    }
}

/// An encoded, repaired point in a search space.
///
/// Values are stored one `f64` per dimension; discrete dimensions hold whole
/// numbers and categoricals hold choice indices. Instances only come out of
/// [`SearchSpace`] operations, so they are always repair fixed points.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    values: Vec<f64>,
}

impl Configuration {
    /// Encoded coordinates, one per dimension.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Canonical cache key: the exact bit pattern of every coordinate.
    pub fn key(&self) -> ConfigKey {
        ConfigKey(self.values.iter().map(|v| v.to_bits()).collect())
    }
}

/// Bit-exact identity of a configuration, usable as a map key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConfigKey(Vec<u64>);

/// A decoded parameter value.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    /// Whole value of an integer dimension.
    Int(i64),
    /// Real value of a continuous dimension.
    Float(f64),
    /// Label of a categorical dimension.
    Choice(String),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Float(v) => write!(f, "{v}"),
            ParamValue::Choice(v) => write!(f, "{v}"),
        }
    }
}

/// A decoded configuration: `(name, value)` pairs in dimension order.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment(Vec<(String, ParamValue)>);

impl Assignment {
    /// Build from `(name, value)` pairs.
    pub fn new(pairs: Vec<(String, ParamValue)>) -> Self {
        Self(pairs)
    }

    /// Value for `name`, if present.
    pub fn get(&self, name: &str) -> Option<&ParamValue> {
        self.0.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    /// Whole value for `name`; accepts a whole-valued float.
    pub fn int(&self, name: &str) -> Option<i64> {
        match self.get(name)? {
            ParamValue::Int(v) => Some(*v),
            ParamValue::Float(v) if *v == libm::trunc(*v) => Some(*v as i64),
            _ => None,
        }
    }

    /// Real value for `name`; accepts a whole value.
    pub fn float(&self, name: &str) -> Option<f64> {
        match self.get(name)? {
            ParamValue::Float(v) => Some(*v),
            ParamValue::Int(v) => Some(*v as f64),
            _ => None,
        }
    }

    /// Choice label for `name`.
    pub fn choice(&self, name: &str) -> Option<&str> {
        match self.get(name)? {
            ParamValue::Choice(v) => Some(v),
            _ => None,
        }
    }

    /// Iterate over `(name, value)` pairs in dimension order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &ParamValue)> {
        self.0.iter().map(|(n, v)| (n.as_str(), v))
    }

    /// Number of parameters.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Whether the assignment is empty.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (n, v)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}={v}")?;
        }
        write!(f, "}}")
    }
}

/// Unvalidated parameter description, as read from a config file.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct RawParamSpec {
    /// Parameter name.
    pub name: String,
    /// One of `integer`, `continuous`, `categorical`.
    #[cfg_attr(feature = "serde", serde(rename = "type"))]
    pub kind: String,
    /// Lower bound (integer and continuous).
    #[cfg_attr(feature = "serde", serde(default))]
    pub min: Option<f64>,
    /// Upper bound (integer and continuous).
    #[cfg_attr(feature = "serde", serde(default))]
    pub max: Option<f64>,
    /// Marks the lower bound as exclusive (continuous only).
    #[cfg_attr(feature = "serde", serde(default))]
    pub lower_exclusive: Option<bool>,
    /// Choice labels (categorical only).
    #[cfg_attr(feature = "serde", serde(default))]
    pub choices: Option<Vec<String>>,
}

/// An ordered, validated collection of dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace {
    params: Vec<ParamSpec>,
}

impl SearchSpace {
    /// Build a space from validated parameters. Names must be unique and at
    /// least one dimension is required.
    pub fn new(params: Vec<ParamSpec>) -> Result<Self, SpaceError> {
        if params.is_empty() {
            return Err(SpaceError::Empty);
        }
        for (i, p) in params.iter().enumerate() {
            if params[..i].iter().any(|q| q.name == p.name) {
                return Err(SpaceError::DuplicateName(p.name.clone()));
            }
        }
        Ok(Self { params })
    }

    /// Validate raw file-level descriptions into a space. Errors name the
    /// offending parameter.
    pub fn from_raw(raw: &[RawParamSpec]) -> Result<Self, SpaceError> {
        let mut params = Vec::with_capacity(raw.len());
        for r in raw {
            params.push(Self::param_from_raw(r)?);
        }
        Self::new(params)
    }

    fn param_from_raw(r: &RawParamSpec) -> Result<ParamSpec, SpaceError> {
        let name = r.name.clone();
        let bound = |side: &str, v: &Option<f64>| -> Result<f64, SpaceError> {
            v.ok_or_else(|| SpaceError::InvalidParam {
                name: name.clone(),
                reason: format!("missing `{side}` bound"),
            })
        };
        match r.kind.as_str() {
            "integer" => {
                let (lo, hi) = (bound("min", &r.min)?, bound("max", &r.max)?);
                for b in [lo, hi] {
                    if !b.is_finite() || b != libm::trunc(b) {
                        return Err(SpaceError::InvalidParam {
                            name,
                            reason: format!("integer bound {b} is not a whole number"),
                        });
                    }
                }
                ParamSpec::integer(name, lo as i64, hi as i64)
            }
            "continuous" => {
                let (lo, hi) = (bound("min", &r.min)?, bound("max", &r.max)?);
                if r.lower_exclusive.unwrap_or(false) {
                    ParamSpec::continuous_above(name, lo, hi)
                } else {
                    ParamSpec::continuous(name, lo, hi)
                }
            }
            "categorical" => {
                let choices = r.choices.clone().ok_or_else(|| SpaceError::InvalidParam {
                    name: name.clone(),
                    reason: "missing `choices`".to_owned(),
                })?;
                ParamSpec::categorical(name, choices)
            }
            other => Err(SpaceError::InvalidParam {
                name,
                reason: format!("unknown type `{other}`"),
            }),
        }
    }

    /// Number of dimensions.
    pub fn dimension(&self) -> usize {
        self.params.len()
    }

    /// Dimensions in order.
    pub fn params(&self) -> &[ParamSpec] {
        &self.params
    }

    /// Index of the parameter called `name`.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|p| p.name == name)
    }

    /// Stable 64-bit fingerprint of the space definition, used to tie
    /// fixtures to the space they were computed on.
    pub fn fingerprint(&self) -> u64 {
        let mut text = String::new();
        for p in &self.params {
            text.push_str(&p.name);
            match &p.kind {
                ParamKind::Integer { lower, upper } => {
                    text.push_str(&format!(":integer[{lower},{upper}];"));
                }
                ParamKind::Continuous { lower, upper, lower_exclusive } => {
                    let open = if *lower_exclusive { "(" } else { "[" };
                    text.push_str(&format!(":continuous{open}{lower},{upper}];"));
                }
                ParamKind::Categorical { choices } => {
                    text.push_str(":categorical{");
                    text.push_str(&choices.join(","));
                    text.push_str("};");
                }
            }
        }
        fnv1a(text.as_bytes())
    }

    /// Draw a uniform configuration: each coordinate is
    /// `lower + u * (upper - lower)` with `u` uniform in `[0, 1]`, then
    /// repaired.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Configuration {
        let values = self
            .params
            .iter()
            .map(|p| {
                let (lo, hi) = p.encoded_bounds();
                let u: f64 = rng.random_range(0.0..=1.0);
                p.repair_value(lo + u * (hi - lo))
            })
            .collect();
        Configuration { values }
    }

    /// Make a raw vector valid: clamp every coordinate into bounds and round
    /// discrete dimensions half away from zero. Idempotent.
    pub fn repair(&self, raw: &[f64]) -> Result<Configuration, SpaceError> {
        if raw.len() != self.params.len() {
            return Err(SpaceError::DimensionMismatch {
                expected: self.params.len(),
                got: raw.len(),
            });
        }
        let values = self
            .params
            .iter()
            .zip(raw)
            .map(|(p, &v)| p.repair_value(v))
            .collect();
        Ok(Configuration { values })
    }

    /// One-dimensional move: coordinate `dim` becomes
    /// `x + phi * (x - other[dim])`, repaired. All other coordinates are
    /// copied bit for bit.
    pub fn neighbor(
        &self,
        current: &Configuration,
        other: &Configuration,
        dim: usize,
        phi: f64,
    ) -> Result<Configuration, SpaceError> {
        self.check_dim(dim)?;
        self.check_len(current)?;
        self.check_len(other)?;
        let mut values = current.values.clone();
        let x = values[dim];
        values[dim] = self.params[dim].repair_value(x + phi * (x - other.values[dim]));
        Ok(Configuration { values })
    }

    /// Invert the encoded bit of a two-choice categorical dimension.
    pub fn flip_binary(
        &self,
        current: &Configuration,
        dim: usize,
    ) -> Result<Configuration, SpaceError> {
        self.check_dim(dim)?;
        self.check_len(current)?;
        let p = &self.params[dim];
        if !p.is_binary_categorical() {
            return Err(SpaceError::NotBinary(p.name.clone()));
        }
        let mut values = current.values.clone();
        values[dim] = if values[dim] == 0.0 { 1.0 } else { 0.0 };
        Ok(Configuration { values })
    }

    /// The move used by the optimizer: binary categorical dimensions flip
    /// their bit, everything else takes the arithmetic [`Self::neighbor`]
    /// step.
    pub fn neighbor_move(
        &self,
        current: &Configuration,
        other: &Configuration,
        dim: usize,
        phi: f64,
    ) -> Result<Configuration, SpaceError> {
        self.check_dim(dim)?;
        if self.params[dim].is_binary_categorical() {
            self.flip_binary(current, dim)
        } else {
            self.neighbor(current, other, dim, phi)
        }
    }

    /// Decode an encoded configuration into named values.
    pub fn decode(&self, config: &Configuration) -> Assignment {
        let pairs = self
            .params
            .iter()
            .zip(&config.values)
            .map(|(p, &v)| {
                let value = match &p.kind {
                    ParamKind::Integer { .. } => ParamValue::Int(v as i64),
                    ParamKind::Continuous { .. } => ParamValue::Float(v),
                    ParamKind::Categorical { choices } => {
                        ParamValue::Choice(choices[v as usize].clone())
                    }
                };
                (p.name.clone(), value)
            })
            .collect();
        Assignment(pairs)
    }

    /// Encode a named assignment back into a configuration. The assignment
    /// must cover every dimension with an in-domain value; unknown names are
    /// rejected.
    pub fn encode(&self, assignment: &Assignment) -> Result<Configuration, SpaceError> {
        for (name, _) in assignment.iter() {
            if self.index_of(name).is_none() {
                return Err(SpaceError::BadAssignment {
                    name: name.to_owned(),
                    reason: "no such parameter".to_owned(),
                });
            }
        }
        let mut values = Vec::with_capacity(self.params.len());
        for p in &self.params {
            let missing = || SpaceError::BadAssignment {
                name: p.name.clone(),
                reason: "missing value".to_owned(),
            };
            let v = match &p.kind {
                ParamKind::Integer { lower, upper } => {
                    let v = assignment.int(&p.name).ok_or_else(missing)?;
                    if v < *lower || v > *upper {
                        return Err(SpaceError::BadAssignment {
                            name: p.name.clone(),
                            reason: format!("{v} outside [{lower}, {upper}]"),
                        });
                    }
                    v as f64
                }
                ParamKind::Continuous { lower, upper, .. } => {
                    let v = assignment.float(&p.name).ok_or_else(missing)?;
                    if !(v >= *lower && v <= *upper) {
                        return Err(SpaceError::BadAssignment {
                            name: p.name.clone(),
                            reason: format!("{v} outside [{lower}, {upper}]"),
                        });
                    }
                    v
                }
                ParamKind::Categorical { choices } => {
                    let label = assignment.choice(&p.name).ok_or_else(missing)?;
                    let idx = choices.iter().position(|c| c == label).ok_or_else(|| {
                        SpaceError::BadAssignment {
                            name: p.name.clone(),
                            reason: format!("unknown choice `{label}`"),
                        }
                    })?;
                    idx as f64
                }
            };
            values.push(p.repair_value(v));
        }
        Ok(Configuration { values })
    }

    fn check_dim(&self, dim: usize) -> Result<(), SpaceError> {
        if dim >= self.params.len() {
            return Err(SpaceError::BadDimension { dim, dims: self.params.len() });
        }
        Ok(())
    }

    fn check_len(&self, config: &Configuration) -> Result<(), SpaceError> {
        if config.values.len() != self.params.len() {
            return Err(SpaceError::DimensionMismatch {
                expected: self.params.len(),
                got: config.values.len(),
            });
        }
        Ok(())
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

#[cfg(feature = "serde")]
mod serde_impls {
    use super::{Assignment, ParamValue};
    use alloc::string::String;
    use alloc::vec::Vec;
    use core::fmt;
    use serde::de::{MapAccess, Visitor};
    use serde::ser::SerializeMap;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    impl Serialize for ParamValue {
        fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
            match self {
                ParamValue::Int(v) => serializer.serialize_i64(*v),
                ParamValue::Float(v) => serializer.serialize_f64(*v),
                ParamValue::Choice(v) => serializer.serialize_str(v),
            }
        }
    }

    impl<'de> Deserialize<'de> for ParamValue {
        fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
            struct ValueVisitor;

            impl<'de> Visitor<'de> for ValueVisitor {
                type Value = ParamValue;

                fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                    f.write_str("a number or a string")
                }

                fn visit_i64<E>(self, v: i64) -> Result<ParamValue, E> {
                    Ok(ParamValue::Int(v))
                }

                fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<ParamValue, E> {
                    i64::try_from(v)
                        .map(ParamValue::Int)
                        .map_err(|_| E::custom("integer out of range"))
                }

                fn visit_f64<E>(self, v: f64) -> Result<ParamValue, E> {
                    Ok(ParamValue::Float(v))
                }

                fn visit_str<E>(self, v: &str) -> Result<ParamValue, E>
                where
                    E: serde::de::Error,
                {
                    Ok(ParamValue::Choice(String::from(v)))
                }
            }

            deserializer.deserialize_any(ValueVisitor)
        }
    }

    impl Serialize for Assignment {
        fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
            let mut map = serializer.serialize_map(Some(self.len()))?;
            for (name, value) in self.iter() {
                map.serialize_entry(name, value)?;
            }
            map.end()
        }
    }

    impl<'de> Deserialize<'de> for Assignment {
        fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
            struct MapVisitor;

            impl<'de> Visitor<'de> for MapVisitor {
                type Value = Assignment;

                fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                    f.write_str("a map from parameter names to values")
                }

                fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Assignment, A::Error> {
                    let mut pairs = Vec::new();
                    while let Some((name, value)) = access.next_entry::<String, ParamValue>()? {
                        pairs.push((name, value));
                    }
                    Ok(Assignment::new(pairs))
                }
            }

            deserializer.deserialize_map(MapVisitor)
        }
    }
}
