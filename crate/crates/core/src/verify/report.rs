use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::algebra::FieldConfig;
use crate::geometry::{FiberDimension, HypothesisReport};
use crate::morphism::{SplittingType, TwistVanishing};

use super::config::ExperimentKind;

fn is_false(b: &bool) -> bool {
    !*b
}

/// One trial of a suite.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<i64>,
    /// Projective dimension; `-1` for an empty fiber.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed: Option<i64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub kp_splitting: Vec<SplittingType>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub splitting_bounds_ok: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tangent_splitting: Vec<SplittingType>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attempts: Option<usize>,
    #[serde(skip_serializing_if = "is_false")]
    pub degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl TrialRecord {
    pub fn new(trial: usize) -> Self {
        TrialRecord { trial, ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub kind: ExperimentKind,
    pub trials: usize,
    pub passes: usize,
    pub pass_rate: f64,
    pub threshold: f64,
    /// Whether the threshold is enforced for this run.
    pub asserted: bool,
    pub passed: bool,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub census: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<u64>,
    pub records: Vec<TrialRecord>,
}

impl SuiteReport {
    /// Aggregates records, which must already be sorted by trial index.
    pub fn from_records(kind: ExperimentKind, threshold: f64, asserted: bool, records: Vec<TrialRecord>) -> Self {
        debug_assert!(records.windows(2).all(|w| w[0].trial < w[1].trial));
        let trials = records.len();
        let passes = records.iter().filter(|r| r.pass).count();
        let pass_rate = if trials == 0 { 0.0 } else { passes as f64 / trials as f64 };
        SuiteReport {
            kind,
            trials,
            passes,
            pass_rate,
            threshold,
            asserted,
            passed: !asserted || (trials > 0 && pass_rate >= threshold),
            census: BTreeMap::new(),
            wall_clock_ms: None,
            records,
        }
    }
}

/// Output of `verify`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub seed: u64,
    pub field: FieldConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypotheses: Option<HypothesisReport>,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

/// Output of `check`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub schema: u32,
    pub degrees: Vec<i64>,
    pub e_total: Vec<i64>,
    pub e_strict: Vec<i64>,
    pub hypotheses: HypothesisReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_h: Option<i64>,
}

/// Output of `dims`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimsReport {
    pub schema: u32,
    pub ambient_dim: usize,
    /// Codimension of each center in the blowup it lives on.
    pub center_codims: Vec<usize>,
    pub coefficient_space_dim: usize,
    pub expected_dim_mor: i64,
    pub expected_fiber_dim: FiberDimension,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FiberKind {
    Sigma,
    Tau,
}

/// Output of `solve`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    pub schema: u32,
    pub seed: u64,
    pub field: FieldConfig,
    pub kind: FiberKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypotheses: Option<HypothesisReport>,
    pub rows: usize,
    pub rank: usize,
    pub affine_dim: usize,
    pub projective_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<FiberDimension>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_expected: Option<bool>,
    pub degenerate: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub kp_splitting: Vec<SplittingType>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub splitting_bounds: Vec<(i64, i64)>,
    pub splitting_bounds_ok: bool,
    /// Kernel basis as morphisms: per factor, per component, coefficients.
    pub kernel: Vec<Vec<Vec<Vec<String>>>>,
    pub passed: bool,
}

/// Output of `sample`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleOutput {
    pub schema: u32,
    pub seed: u64,
    pub field: FieldConfig,
    pub hypotheses: HypothesisReport,
    pub found: bool,
    pub attempts: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub morphism: Option<Vec<Vec<Vec<String>>>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub splitting: Vec<SplittingType>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twist: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twist_vanishing: Option<TwistVanishing>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub free: Option<bool>,
    pub passed: bool,
}

fn list<T: std::fmt::Debug>(xs: &[T]) -> String {
    xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" ")
}

fn splittings(xs: &[SplittingType]) -> String {
    xs.iter().map(|s| format!("{:?}", s.entries())).collect::<Vec<_>>().join(" ")
}

/// Plain-text rendering for terminals.
pub trait Render {
    fn render(&self) -> String;
}

impl Render for CheckReport {
    fn render(&self) -> String {
        let h = &self.hypotheses;
        let mut s = String::new();
        writeln!(s, "degrees        {}", list(&self.degrees)).unwrap();
        writeln!(s, "e (total)      {}", list(&self.e_total)).unwrap();
        writeln!(s, "e (strict)     {}", list(&self.e_strict)).unwrap();
        writeln!(s, "factor margins {}", list(&h.factor_margins)).unwrap();
        writeln!(s, "center margins {}", list(&h.center_margins)).unwrap();
        writeln!(s, "clause         {:?}", h.clause).unwrap();
        if let Some(c) = self.c_h {
            writeln!(s, "c_H            {c}").unwrap();
        }
        writeln!(s, "verdict        {}", if h.pass { "pass" } else { "fail" }).unwrap();
        s
    }
}

impl Render for DimsReport {
    fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, "dim X              {}", self.ambient_dim).unwrap();
        writeln!(s, "center codims      {}", list(&self.center_codims)).unwrap();
        writeln!(s, "coefficients       {}", self.coefficient_space_dim).unwrap();
        writeln!(s, "expected dim Mor   {}", self.expected_dim_mor).unwrap();
        let e = &self.expected_fiber_dim;
        writeln!(s, "expected fiber dim {}{}", e.value, if e.expected_empty { " (empty)" } else { "" }).unwrap();
        s
    }
}

impl Render for SolveReport {
    fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{:?} fiber over {:?}, seed {}", self.kind, self.field.kind, self.seed).unwrap();
        writeln!(s, "rows {} rank {}", self.rows, self.rank).unwrap();
        match self.projective_dim {
            Some(d) => writeln!(s, "projective dim {d}").unwrap(),
            None => writeln!(s, "empty fiber").unwrap(),
        }
        if let Some(e) = self.expected {
            writeln!(s, "expected       {} (match: {})", e.value, self.matches_expected.unwrap_or(false)).unwrap();
        }
        if self.degenerate {
            writeln!(s, "degenerate: some factor is forced constant").unwrap();
        }
        if !self.kp_splitting.is_empty() {
            writeln!(s, "K_P splitting  {} (bounds ok: {})", splittings(&self.kp_splitting), self.splitting_bounds_ok)
                .unwrap();
        }
        s
    }
}

impl Render for SampleOutput {
    fn render(&self) -> String {
        let mut s = String::new();
        if !self.found {
            writeln!(s, "no member with exact contacts in {} draws", self.attempts).unwrap();
            return s;
        }
        writeln!(s, "found after {} draw(s)", self.attempts).unwrap();
        if let Some(m) = &self.morphism {
            for (k, factor) in m.iter().enumerate() {
                writeln!(s, "factor {k}: {factor:?}").unwrap();
            }
        }
        writeln!(s, "f*T splitting  {}", splittings(&self.splitting)).unwrap();
        if let (Some(t), Some(v)) = (self.twist, &self.twist_vanishing) {
            writeln!(s, "h1 vanishing at twist -{t}: {}", v.overall).unwrap();
        }
        writeln!(s, "free           {}", self.free.unwrap_or(false)).unwrap();
        s
    }
}

impl Render for VerifyReport {
    fn render(&self) -> String {
        let mut s = String::new();
        for suite in &self.suites {
            writeln!(
                s,
                "{:<18} {:>5}/{:<5} rate {:.4} threshold {:.2} {}",
                suite.kind.name(),
                suite.passes,
                suite.trials,
                suite.pass_rate,
                suite.threshold,
                match (suite.asserted, suite.passed) {
                    (false, _) => "recorded",
                    (true, true) => "PASS",
                    (true, false) => "FAIL",
                }
            )
            .unwrap();
            for (key, n) in &suite.census {
                writeln!(s, "    {n:>5}  {key}").unwrap();
            }
        }
        s
    }
}
