//! Scenario files and the compact text forms used on the command line.
//!
//! Transforms are written `"exp"`, `"logshift"`, `{"power": r}` or
//! `["power", r]`; distributions `{"gengamma": [p, alpha, lambda]}`,
//! `{"invgengamma": [p, alpha, lambda]}` or `["gengamma", p, alpha, lambda]`.
//! On the command line the same objects are spelled `exp`, `logshift`,
//! `power:R`, `gengamma:P,A,L` and `invgengamma:P,A,L`.

use std::path::Path;

use schurorder_core::distributions::PowerMap;
use schurorder_core::harness::{Scenario, MIN_SAMPLES};
use schurorder_core::transforms::TransformKind;
use schurorder_core::{DistSpec, Family, MajorizationMode, Transform, Variant, WeightVector};
use serde::{Deserialize, Serialize};

use crate::AppError;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 100_000;
pub const DEFAULT_DELTA: f64 = 0.01;

/// Serializable name of a transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TransformRepr {
    Named(NamedTransform),
    Power { power: f64 },
    Pair(PowerTag, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedTransform {
    Exp,
    Logshift,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerTag {
    Power,
}

impl TransformRepr {
    pub fn build(self) -> Result<Transform, AppError> {
        Ok(match self {
            TransformRepr::Named(NamedTransform::Exp) => Transform::exp(),
            TransformRepr::Named(NamedTransform::Logshift) => Transform::log_shift(),
            TransformRepr::Power { power: r } | TransformRepr::Pair(PowerTag::Power, r) => Transform::power(r)?,
        })
    }

    /// Canonical form of a built-in transform; custom maps have none.
    pub fn of(t: &Transform) -> Result<Self, AppError> {
        Ok(match t.kind() {
            TransformKind::Exp => TransformRepr::Named(NamedTransform::Exp),
            TransformKind::LogShift => TransformRepr::Named(NamedTransform::Logshift),
            TransformKind::Power(r) => TransformRepr::Power { power: r },
            TransformKind::Custom => {
                return Err(AppError::Usage(format!("transform {} has no file representation", t.label())))
            }
        })
    }

    /// Parses `exp`, `logshift` or `power:R`.
    pub fn parse(s: &str) -> Result<Self, AppError> {
        match s.trim() {
            "exp" => Ok(TransformRepr::Named(NamedTransform::Exp)),
            "logshift" => Ok(TransformRepr::Named(NamedTransform::Logshift)),
            other => {
                let r = other.strip_prefix("power:").ok_or_else(|| {
                    AppError::Usage(format!("unknown transform {other:?}; expected exp, logshift or power:R"))
                })?;
                Ok(TransformRepr::Power { power: parse_real(r, "power exponent")? })
            }
        }
    }
}

/// Serializable name of a distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DistRepr {
    Tagged(TaggedDist),
    Flat(DistTag, f64, f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaggedDist {
    Gengamma([f64; 3]),
    Invgengamma([f64; 3]),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistTag {
    Gengamma,
    Invgengamma,
}

impl DistRepr {
    pub fn build(self) -> Result<DistSpec, AppError> {
        let (tag, [p, a, l]) = match self {
            DistRepr::Tagged(TaggedDist::Gengamma(v)) => (DistTag::Gengamma, v),
            DistRepr::Tagged(TaggedDist::Invgengamma(v)) => (DistTag::Invgengamma, v),
            DistRepr::Flat(tag, p, a, l) => (tag, [p, a, l]),
        };
        Ok(match tag {
            DistTag::Gengamma => DistSpec::gen_gamma(p, a, l)?,
            DistTag::Invgengamma => DistSpec::inv_gen_gamma(p, a, l)?,
        })
    }

    pub fn of(d: &DistSpec) -> Self {
        use schurorder_core::Continuous;
        match d.family() {
            Family::GeneralizedGamma { p, alpha, lambda } => DistRepr::Tagged(TaggedDist::Gengamma([p, alpha, lambda])),
            Family::InverseGeneralizedGamma { p, alpha, lambda } => {
                DistRepr::Tagged(TaggedDist::Invgengamma([p, alpha, lambda]))
            }
            Family::Other => unreachable!("DistSpec only holds parametric families"),
        }
    }

    /// Parses `gengamma:P,A,L` or `invgengamma:P,A,L`.
    pub fn parse(s: &str) -> Result<Self, AppError> {
        let (tag, rest) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| AppError::Usage(format!("distribution {s:?} must look like gengamma:P,A,L")))?;
        let tag = match tag {
            "gengamma" => DistTag::Gengamma,
            "invgengamma" => DistTag::Invgengamma,
            other => return Err(AppError::Usage(format!("unknown distribution family {other:?}"))),
        };
        let v = parse_reals(rest, "distribution parameters")?;
        match v.as_slice() {
            &[p, a, l] => Ok(DistRepr::Flat(tag, p, a, l)),
            _ => Err(AppError::Usage(format!("distribution {s:?} needs exactly three parameters"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantRepr {
    Convex,
    Concave,
}

impl From<VariantRepr> for Variant {
    fn from(v: VariantRepr) -> Self {
        match v {
            VariantRepr::Convex => Variant::Convex,
            VariantRepr::Concave => Variant::Concave,
        }
    }
}

impl From<Variant> for VariantRepr {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Convex => VariantRepr::Convex,
            Variant::Concave => VariantRepr::Concave,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModeRepr {
    #[serde(rename = "m")]
    Full,
    #[serde(rename = "sub")]
    Sub,
    #[serde(rename = "sup")]
    Sup,
}

impl From<ModeRepr> for MajorizationMode {
    fn from(m: ModeRepr) -> Self {
        match m {
            ModeRepr::Full => MajorizationMode::Full,
            ModeRepr::Sub => MajorizationMode::WeakSub,
            ModeRepr::Sup => MajorizationMode::WeakSup,
        }
    }
}

impl From<MajorizationMode> for ModeRepr {
    fn from(m: MajorizationMode) -> Self {
        match m {
            MajorizationMode::Full => ModeRepr::Full,
            MajorizationMode::WeakSub => ModeRepr::Sub,
            MajorizationMode::WeakSup => ModeRepr::Sup,
        }
    }
}

/// Power map applied before a log-concavity check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MapRepr {
    Identity,
    Log,
    Power(f64),
}

impl MapRepr {
    /// Parses `identity`, `log` or `power:R`.
    pub fn parse(s: &str) -> Result<Self, AppError> {
        match s.trim() {
            "identity" => Ok(MapRepr::Identity),
            "log" => Ok(MapRepr::Log),
            other => {
                let r = other.strip_prefix("power:").ok_or_else(|| {
                    AppError::Usage(format!("unknown map {other:?}; expected identity, log or power:R"))
                })?;
                Ok(MapRepr::Power(parse_real(r, "map exponent")?))
            }
        }
    }
}

impl From<MapRepr> for PowerMap {
    fn from(m: MapRepr) -> Self {
        match m {
            MapRepr::Identity => PowerMap::Identity,
            MapRepr::Log => PowerMap::Log,
            MapRepr::Power(r) => PowerMap::Power(r),
        }
    }
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}
fn default_samples() -> usize {
    DEFAULT_SAMPLES
}
fn default_delta() -> f64 {
    DEFAULT_DELTA
}
fn default_mode() -> ModeRepr {
    ModeRepr::Full
}

/// One scenario as stored on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub dists: Vec<DistRepr>,
    pub phi: TransformRepr,
    pub psi: TransformRepr,
    pub variant: VariantRepr,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    #[serde(default = "default_mode")]
    pub premise_mode: ModeRepr,
    #[serde(default = "default_samples")]
    pub n_samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_delta")]
    pub delta: f64,
}

impl ScenarioFile {
    pub fn build(&self) -> Result<Scenario, AppError> {
        if self.n_samples < MIN_SAMPLES {
            return Err(AppError::Usage(format!(
                "scenario {}: field n_samples must be at least {MIN_SAMPLES}, got {}",
                self.name, self.n_samples
            )));
        }
        Ok(Scenario {
            name: self.name.clone(),
            dists: self.dists.iter().map(|d| d.build()).collect::<Result<_, _>>()?,
            phi: self.phi.build()?,
            psi: self.psi.build()?,
            variant: self.variant.into(),
            a: WeightVector::new(self.a.clone())?,
            b: WeightVector::new(self.b.clone())?,
            premise_mode: self.premise_mode.into(),
            n_samples: self.n_samples,
            seed: self.seed,
            delta: self.delta,
        })
    }

    pub fn of(s: &Scenario) -> Result<Self, AppError> {
        Ok(Self {
            name: s.name.clone(),
            dists: s.dists.iter().map(DistRepr::of).collect(),
            phi: TransformRepr::of(&s.phi)?,
            psi: TransformRepr::of(&s.psi)?,
            variant: s.variant.into(),
            a: s.a.values().to_vec(),
            b: s.b.values().to_vec(),
            premise_mode: s.premise_mode.into(),
            n_samples: s.n_samples,
            seed: s.seed,
            delta: s.delta,
        })
    }
}

/// A scenario file holds one scenario object or an array of them. Errors
/// name the offending field.
pub fn parse_scenarios(text: &str) -> Result<Vec<ScenarioFile>, AppError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| AppError::Usage(format!("scenario file: {e}")))?;
    let one = |v: serde_json::Value, at: String| {
        serde_path_to_error::deserialize::<_, ScenarioFile>(v).map_err(|e| {
            let path = e.path().to_string();
            let field = if path == "." { at.clone() } else { format!("{at}{path}") };
            AppError::Usage(format!("scenario field {field}: {}", e.inner()))
        })
    };
    match value {
        serde_json::Value::Array(items) => {
            items.into_iter().enumerate().map(|(i, v)| one(v, format!("[{i}]."))).collect()
        }
        v => Ok(vec![one(v, String::new())?]),
    }
}

pub fn load_scenarios(path: &Path) -> Result<Vec<ScenarioFile>, AppError> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::Io(format!("{}: {e}", path.display())))?;
    parse_scenarios(&text).map_err(|e| match e {
        AppError::Usage(m) => AppError::Usage(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn parse_real(s: &str, what: &str) -> Result<f64, AppError> {
    s.trim().parse::<f64>().map_err(|_| AppError::Usage(format!("{what}: cannot parse {s:?} as a number")))
}

/// Comma-separated reals, e.g. `4,1`.
pub fn parse_reals(s: &str, what: &str) -> Result<Vec<f64>, AppError> {
    s.split(',').map(|t| parse_real(t, what)).collect()
}
