//! JSON run configuration. Exact numbers are decimal strings (`"3"`, `"-2/5"`);
//! plain JSON integers are accepted too.

use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize};

use crate::algebra::field::{parse_rational, DEFAULT_PRIME, DEFAULT_SEED};
use crate::algebra::{FieldConfig, FieldKind, Rational};
use crate::geometry::{build_tower, BlowupTower, CenterSpec, CurveClass, TowerSpec};

use super::VerifyError;

/// Current config and report schema version.
pub const SCHEMA_VERSION: u32 = 1;

/// An exact rational read from a decimal string.
#[derive(Clone, Debug, PartialEq)]
pub struct Exact(pub Rational);

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Exact;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an exact number as a decimal string such as \"3\" or \"-2/5\"")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<Exact, E> {
                parse_rational(s).map(Exact).map_err(|_| E::invalid_value(de::Unexpected::Str(s), &self))
            }
            fn visit_i64<E: de::Error>(self, n: i64) -> Result<Exact, E> {
                Ok(Exact(Rational::from_integer(n.into())))
            }
            fn visit_u64<E: de::Error>(self, n: u64) -> Result<Exact, E> {
                Ok(Exact(Rational::from_integer(n.into())))
            }
        }
        d.deserialize_any(V)
    }
}

fn exact_vec(v: &[Exact]) -> Vec<Rational> {
    v.iter().map(|x| x.0.clone()).collect()
}

fn exact_mat(v: &[Vec<Exact>]) -> Vec<Vec<Rational>> {
    v.iter().map(|r| exact_vec(r)).collect()
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CenterConfig {
    /// Per factor, the linear forms cutting out the center in that factor.
    Linear { equations: Vec<Vec<Vec<Exact>>> },
    /// A point, homogeneous coordinates per factor.
    Point { coords: Vec<Vec<Exact>> },
    Infinitesimal { parent: usize, chart: usize, direction: Vec<Exact> },
}

impl CenterConfig {
    fn to_spec(&self) -> CenterSpec {
        match self {
            CenterConfig::Linear { equations } => {
                CenterSpec::Linear { equations: equations.iter().map(|f| exact_mat(f)).collect() }
            }
            CenterConfig::Point { coords } => CenterSpec::Point { coords: exact_mat(coords) },
            CenterConfig::Infinitesimal { parent, chart, direction } => {
                CenterSpec::Infinitesimal { parent: *parent, chart: *chart, direction: exact_vec(direction) }
            }
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassConfig {
    pub degrees: Vec<i64>,
    pub e_total: Vec<i64>,
}

/// An incidence datum: domain point `p = [s:t]`, center index, optional target.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumConfig {
    pub p: Vec<Exact>,
    pub center: usize,
    #[serde(default)]
    pub q: Option<Vec<Vec<Exact>>>,
    #[serde(default = "one")]
    pub mult: usize,
}

fn one() -> usize {
    1
}

/// A jet prescription: domain point, base point per factor, and one series
/// (coefficients of `t^0, t^1, ...`) per affine coordinate.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetConfig {
    pub p: Vec<Exact>,
    pub base: Vec<Vec<Exact>>,
    pub values: Vec<Vec<Exact>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldTag {
    Rational,
    Prime,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    pub kind: FieldTag,
    #[serde(default)]
    pub prime: Option<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    FiberDimension,
    Freeness,
    SplittingCensus,
    JetRoundtrip,
    PencilClosure,
    Consistency,
    /// Every exact-law suite in turn.
    Properties,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::FiberDimension => "fiber-dimension",
            ExperimentKind::Freeness => "freeness",
            ExperimentKind::SplittingCensus => "splitting-census",
            ExperimentKind::JetRoundtrip => "jet-roundtrip",
            ExperimentKind::PencilClosure => "pencil-closure",
            ExperimentKind::Consistency => "consistency",
            ExperimentKind::Properties => "properties",
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub kind: ExperimentKind,
    pub trials: usize,
    #[serde(default)]
    pub retries: Option<usize>,
    /// Record results without asserting thresholds.
    #[serde(default)]
    pub exploratory: bool,
}

/// The raw configuration file.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub schema: Option<u32>,
    pub ambient: Vec<usize>,
    #[serde(default)]
    pub centers: Vec<CenterConfig>,
    #[serde(default)]
    pub beta: Option<ClassConfig>,
    #[serde(default)]
    pub data: Vec<DatumConfig>,
    #[serde(default)]
    pub jets: Vec<JetConfig>,
    #[serde(default)]
    pub field: Option<FieldSection>,
    #[serde(default)]
    pub experiment: Option<ExperimentSection>,
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

fn config_error(path: &str, message: impl Into<String>) -> VerifyError {
    VerifyError::Config { path: path.to_string(), message: message.into() }
}

/// Overrides supplied on the command line.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub field: Option<FieldTag>,
    pub prime: Option<u64>,
}

/// A validated configuration: built tower, class, field and experiment.
#[derive(Clone, Debug)]
pub struct Problem {
    pub config: Config,
    pub tower: BlowupTower,
    pub beta: Option<CurveClass>,
    pub field: FieldConfig,
    pub experiment: Option<ExperimentSection>,
}

impl Problem {
    pub fn beta(&self) -> Result<&CurveClass, VerifyError> {
        self.beta.as_ref().ok_or_else(|| config_error("/beta", "this command needs a curve class"))
    }

    pub fn retries(&self) -> usize {
        self.experiment
            .as_ref()
            .and_then(|e| e.retries)
            .unwrap_or(crate::incidence::DEFAULT_RETRIES)
    }
}

/// Parses JSON text; errors carry a JSON-pointer path.
pub fn parse_config(text: &str) -> Result<Config, VerifyError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = pointer(e.path());
        config_error(&path, e.into_inner().to_string())
    })
}

/// Validates a parsed config and applies the overrides.
pub fn resolve(config: Config, overrides: &Overrides) -> Result<Problem, VerifyError> {
    if let Some(v) = config.schema {
        if v != SCHEMA_VERSION {
            return Err(config_error("/schema", format!("unsupported schema version {v}")));
        }
    }
    let tower = build_tower(&TowerSpec {
        ambient: config.ambient.clone(),
        centers: config.centers.iter().map(CenterConfig::to_spec).collect(),
    })
    .map_err(|e| config_error("/centers", e.to_string()))?;

    let beta = match &config.beta {
        Some(b) => {
            let c = CurveClass::new(b.degrees.clone(), b.e_total.clone());
            c.check(&tower).map_err(|e| config_error("/beta", e.to_string()))?;
            Some(c)
        }
        None => None,
    };

    let section = config.field.clone();
    let kind = overrides.field.or(section.as_ref().map(|s| s.kind)).unwrap_or(FieldTag::Prime);
    let seed = overrides.seed.or(section.as_ref().and_then(|s| s.seed)).unwrap_or(DEFAULT_SEED);
    let field = match kind {
        FieldTag::Rational => FieldConfig::rationals(seed),
        FieldTag::Prime => {
            let prime = match (overrides.prime, &section) {
                (Some(p), _) => p,
                (None, Some(s)) if s.kind == FieldTag::Prime => {
                    s.prime.ok_or_else(|| config_error("/field/prime", "a prime field needs \"prime\""))?
                }
                _ => DEFAULT_PRIME,
            };
            let f = FieldConfig::prime(prime, seed);
            f.validate().map_err(|e| config_error("/field/prime", e.to_string()))?;
            f
        }
    };
    debug_assert!(field.kind == FieldKind::Rationals || field.prime >= crate::algebra::field::MIN_PRIME);

    let mut experiment = config.experiment.clone();
    if let Some(e) = experiment.as_mut() {
        if let Some(t) = overrides.trials {
            e.trials = t;
        }
        if e.trials == 0 {
            return Err(config_error("/experiment/trials", "trials must be at least 1"));
        }
    }
    for (a, d) in config.data.iter().enumerate() {
        if d.center >= tower.len() {
            return Err(config_error(&format!("/data/{a}/center"), format!("no center {}", d.center)));
        }
        if d.p.len() != 2 {
            return Err(config_error(&format!("/data/{a}/p"), "a domain point has two coordinates"));
        }
    }
    for (a, j) in config.jets.iter().enumerate() {
        if j.p.len() != 2 {
            return Err(config_error(&format!("/jets/{a}/p"), "a domain point has two coordinates"));
        }
    }
    Ok(Problem { config, tower, beta, field, experiment })
}

/// Reads, parses and resolves a config file.
pub fn load_problem(path: &std::path::Path, overrides: &Overrides) -> Result<Problem, VerifyError> {
    let text = std::fs::read_to_string(path).map_err(|e| VerifyError::Usage(format!("{}: {e}", path.display())))?;
    resolve(parse_config(&text)?, overrides)
}
