//! JSON and CSV report emission.
//!
//! Every JSON document starts with `schema_version` and `kind`. Field order
//! is fixed by the struct definitions. Reals are rounded to 12 significant
//! digits and magnitudes below 1e-14 are written as 0, so reruns are
//! byte-identical and round-off never shows up as spurious amplitudes.

use std::collections::BTreeMap;

use serde::Serialize;

use sdc_core::dynamics::{DeviationReport, PhaseMode};
use sdc_core::elements::Message;
use sdc_core::protocol::{ConfusionMatrix, DecoderKind, PostselectPolicy, SdcReport, SweepPoint};
use sdc_core::qstate::{CompositeState, SubsystemKind};
use sdc_core::C64;

use crate::config::{Derived, Format, RunConfig};

pub const SCHEMA_VERSION: &str = "1.0";

/// Round-off floor below which reals are written as zero.
const ZERO_FLOOR: f64 = 1e-14;

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    if x.abs() < ZERO_FLOOR {
        return 0.0;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for Complex {
    fn from(z: C64) -> Self {
        Self { re: sig12(z.re), im: sig12(z.im) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubsystemDump {
    pub name: String,
    pub kind: &'static str,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AmplitudeEntry {
    pub labels: Vec<String>,
    pub amplitude: Complex,
}

/// A state vector with every basis entry, in row-major order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateDump {
    pub subsystems: Vec<SubsystemDump>,
    pub amplitudes: Vec<AmplitudeEntry>,
}

impl From<&CompositeState> for StateDump {
    fn from(s: &CompositeState) -> Self {
        let subsystems = s
            .subsystems()
            .iter()
            .map(|x| SubsystemDump {
                name: x.name().to_owned(),
                kind: match x.kind() {
                    SubsystemKind::AtomInternal => "internal",
                    SubsystemKind::AtomMomentum => "momentum",
                    SubsystemKind::CavityFock => "fock",
                },
                labels: x.labels().iter().map(ToString::to_string).collect(),
            })
            .collect();
        let amplitudes = s
            .entries()
            .map(|(labels, a)| AmplitudeEntry { labels: labels.iter().map(ToString::to_string).collect(), amplitude: a.into() })
            .collect();
        Self { subsystems, amplitudes }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Snapshot {
    pub stage: String,
    pub state: StateDump,
}

pub fn phase_mode_name(m: PhaseMode) -> &'static str {
    match m {
        PhaseMode::Full => "full",
        PhaseMode::Paper => "paper",
    }
}

pub fn decoder_name(d: DecoderKind) -> &'static str {
    match d {
        DecoderKind::PaperLiteral => "paper-literal",
        DecoderKind::Oracle => "oracle",
    }
}

pub fn policy_name(p: PostselectPolicy) -> &'static str {
    match p {
        PostselectPolicy::SingleOutcome => "g-a-e-b-only",
        PostselectPolicy::AllOutcomesCorrected => "all-outcomes-corrected",
    }
}

/// Config echo attached to reports at normal verbosity and above.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Echo {
    pub config: RunConfig,
    pub derived: Derived,
}

fn distribution(p: &[f64; 4]) -> BTreeMap<String, f64> {
    Message::ALL.iter().map(|m| (m.to_string(), sig12(p[m.index()]))).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InternalOutcome {
    pub alice: String,
    pub bob: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub schema_version: &'static str,
    pub kind: &'static str,
    pub message: String,
    pub decoded_bits: Option<String>,
    pub decoder: &'static str,
    pub phase_mode: &'static str,
    pub postselect_policy: &'static str,
    pub encode_phase: f64,
    pub seed: u64,
    pub encoded_state_fidelity: f64,
    pub aux_probability: f64,
    pub blackbox1_outcome: InternalOutcome,
    pub blackbox1_probability: f64,
    pub pipeline_yield: f64,
    pub momentum_concurrence: f64,
    /// Keyed by bits; P₀ ↦ 0 and P₋₂ ↦ 1, Alice first.
    pub outcome_distribution: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshots: Option<Vec<Snapshot>>,
    #[serde(flatten)]
    pub echo: Option<Echo>,
}

impl RunReport {
    pub fn new(r: &SdcReport, echo: Option<Echo>, with_snapshots: bool) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            kind: "run",
            message: r.message.to_string(),
            decoded_bits: r.decoded_bits.map(|m| m.to_string()),
            decoder: decoder_name(r.decoder),
            phase_mode: phase_mode_name(r.phase_mode),
            postselect_policy: policy_name(r.postselect_policy),
            encode_phase: r.encode_phase,
            seed: r.seed,
            encoded_state_fidelity: sig12(r.encoded_state_fidelity),
            aux_probability: sig12(r.aux_probability),
            blackbox1_outcome: InternalOutcome { alice: r.blackbox1_outcome.0.to_string(), bob: r.blackbox1_outcome.1.to_string() },
            blackbox1_probability: sig12(r.blackbox1_probability),
            pipeline_yield: sig12(r.pipeline_yield),
            momentum_concurrence: sig12(r.momentum_concurrence),
            outcome_distribution: distribution(&r.outcome_distribution),
            snapshots: with_snapshots.then(|| {
                r.snapshots.iter().map(|(stage, s)| Snapshot { stage: stage.clone(), state: s.into() }).collect()
            }),
            echo,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfusionRow {
    pub sent: String,
    pub decoded: BTreeMap<String, f64>,
    /// The literal decoder's most likely reading is not unique.
    pub tied: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfusionReport {
    pub schema_version: &'static str,
    pub kind: &'static str,
    pub decoder: &'static str,
    pub phase_mode: &'static str,
    pub postselect_policy: &'static str,
    pub encode_phase: f64,
    pub rows: Vec<ConfusionRow>,
    pub message_success_probability: f64,
    pub bit_success_probability: f64,
    #[serde(flatten)]
    pub echo: Option<Echo>,
}

impl ConfusionReport {
    pub fn new(cm: &ConfusionMatrix, cfg: &sdc_core::protocol::SdcConfig, echo: Option<Echo>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            kind: "confusion",
            decoder: decoder_name(cfg.decoder),
            phase_mode: phase_mode_name(cfg.phase_mode),
            postselect_policy: policy_name(cfg.postselect_policy),
            encode_phase: cfg.encode_phase,
            rows: Message::ALL
                .iter()
                .map(|m| ConfusionRow { sent: m.to_string(), decoded: distribution(&cm.rows[m.index()]), tied: cm.tied[m.index()] })
                .collect(),
            message_success_probability: sig12(cm.message_success()),
            bit_success_probability: sig12(cm.bit_success()),
            echo,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    /// Mean fraction of correctly decoded bits.
    pub success_probability: f64,
    pub message_success_probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub schema_version: &'static str,
    pub kind: &'static str,
    pub phase_mode: &'static str,
    pub postselect_policy: &'static str,
    pub points: Vec<SweepRow>,
    #[serde(flatten)]
    pub echo: Option<Echo>,
}

impl SweepReport {
    pub fn new(points: &[SweepPoint], cfg: &sdc_core::protocol::SdcConfig, echo: Option<Echo>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            kind: "sweep-alpha",
            phase_mode: phase_mode_name(cfg.phase_mode),
            postselect_policy: policy_name(cfg.postselect_policy),
            points: points
                .iter()
                .map(|p| SweepRow {
                    alpha: sig12(p.alpha),
                    success_probability: sig12(p.success_probability),
                    message_success_probability: sig12(p.message_success_probability),
                })
                .collect(),
            echo,
        }
    }

    /// Two-column CSV, `alpha,success_probability`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["alpha", "success_probability"]).expect("in-memory write");
        for p in &self.points {
            w.write_record([p.alpha.to_string(), p.success_probability.to_string()]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyRow {
    pub detuning_ratio: f64,
    pub detuning_over_recoil: f64,
    pub max_population_deviation: f64,
    pub max_leakage: f64,
    pub within_tolerance: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub schema_version: &'static str,
    pub kind: &'static str,
    pub time_points: usize,
    pub max_population_deviation_tolerance: f64,
    pub max_leakage_tolerance: f64,
    pub rows: Vec<VerifyRow>,
    #[serde(flatten)]
    pub echo: Option<Echo>,
}

impl VerifyRow {
    pub fn new(r: &DeviationReport, max_deviation: f64, max_leakage: f64) -> Self {
        Self {
            detuning_ratio: sig12(r.detuning_ratio),
            detuning_over_recoil: sig12(r.detuning_over_recoil),
            max_population_deviation: sig12(r.max_deviation),
            max_leakage: sig12(r.max_leakage),
            within_tolerance: r.max_deviation <= max_deviation && r.max_leakage <= max_leakage,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrepareReport {
    pub schema_version: &'static str,
    pub kind: &'static str,
    pub stage: &'static str,
    pub phase_mode: &'static str,
    /// Fidelity to the target ket, up to global phase.
    pub reference_fidelity: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aux_probability: Option<f64>,
    pub state: StateDump,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshots: Option<Vec<Snapshot>>,
    #[serde(flatten)]
    pub echo: Option<Echo>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorReport {
    pub schema_version: &'static str,
    pub error: ErrorBody,
}

impl ErrorReport {
    pub fn new(kind: impl Into<String>, message: impl Into<String>) -> Self {
        Self { schema_version: SCHEMA_VERSION, error: ErrorBody { kind: kind.into(), message: message.into() } }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Renders a report in `format`; only sweeps have a CSV form.
pub fn emit_report<T: Serialize + AsCsv>(value: &T, format: Format) -> Result<String, UnsupportedFormat> {
    match format {
        Format::Json => Ok(to_json(value)),
        Format::Csv => value.as_csv().ok_or(UnsupportedFormat(value.kind())),
    }
}

#[derive(Debug, thiserror::Error)]
#[error("`{0}` reports have no CSV form; use json")]
pub struct UnsupportedFormat(pub &'static str);

/// Reports with an optional CSV rendering.
pub trait AsCsv {
    fn kind(&self) -> &'static str;
    fn as_csv(&self) -> Option<String> {
        None
    }
}

impl AsCsv for SweepReport {
    fn kind(&self) -> &'static str {
        self.kind
    }
    fn as_csv(&self) -> Option<String> {
        Some(self.to_csv())
    }
}

macro_rules! json_only {
    ($($t:ty),*) => {$(
        impl AsCsv for $t {
            fn kind(&self) -> &'static str {
                self.kind
            }
        }
    )*};
}

json_only!(RunReport, ConfusionReport, VerifyReport, PrepareReport);
