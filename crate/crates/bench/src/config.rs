//! Run configuration: a TOML document with `[physical]`, `[protocol]`,
//! `[numerics]` and `[output]` tables. See `configs/rb85.toml` for a
//! commented example.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use sdc_core::dynamics::{BraggConfig, PhaseMode, PhysicalParams, AMU};
use sdc_core::protocol::{DecoderKind, PostselectPolicy, SdcConfig};

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "SDC_CONFIG";

/// The bundled Rb-85 configuration.
pub const RB85_TOML: &str = include_str!("../configs/rb85.toml");

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config `{path}`: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("give exactly one of `recoil_frequency_rad_s` and `wavenumber_per_m`")]
    RecoilSource,
    #[error("`{0}` must be a positive, finite number")]
    NonPositive(&'static str),
    #[error("`detuning_rad_s` must be nonzero: the Bragg and phase cavities are operated off resonance (Δ ≫ μ√n)")]
    ZeroDetuning,
    #[error("`photon_number` must be at least 1")]
    NoPhotons,
    #[error("`encode_phase` must lie in [0, 2π], got {0}")]
    EncodePhase(f64),
    #[error("invalid numerics block: {0}")]
    Numerics(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseModeName {
    #[default]
    Full,
    Paper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DecoderName {
    PaperLiteral,
    #[default]
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyName {
    /// Keep only the (g_A, e_B) outcome.
    #[default]
    #[value(name = "g-a-e-b-only")]
    #[serde(rename = "g-a-e-b-only")]
    GAEBOnly,
    /// Keep every outcome and fix the branch sign on Bob's momentum.
    AllOutcomesCorrected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Verbosity {
    /// Results only.
    Quiet,
    /// Results plus the echoed config and derived quantities.
    #[default]
    Normal,
    /// Also every intermediate state.
    Verbose,
}

impl From<PhaseModeName> for PhaseMode {
    fn from(m: PhaseModeName) -> Self {
        match m {
            PhaseModeName::Full => PhaseMode::Full,
            PhaseModeName::Paper => PhaseMode::Paper,
        }
    }
}

impl From<DecoderName> for DecoderKind {
    fn from(d: DecoderName) -> Self {
        match d {
            DecoderName::PaperLiteral => DecoderKind::PaperLiteral,
            DecoderName::Oracle => DecoderKind::Oracle,
        }
    }
}

impl From<PolicyName> for PostselectPolicy {
    fn from(p: PolicyName) -> Self {
        match p {
            PolicyName::GAEBOnly => PostselectPolicy::SingleOutcome,
            PolicyName::AllOutcomesCorrected => PostselectPolicy::AllOutcomesCorrected,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalBlock {
    pub mass_amu: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recoil_frequency_rad_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavenumber_per_m: Option<f64>,
    pub coupling_rad_s: f64,
    pub detuning_rad_s: f64,
    pub photon_number: u32,
    /// Defaults to `coupling_rad_s`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aux_coupling_rad_s: Option<f64>,
    /// Classical π-pulse Rabi frequency; defaults to 2π·1 MHz.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rabi_frequency_rad_s: Option<f64>,
    /// Classical laser phase; defaults to −π/2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub laser_phase_rad: Option<f64>,
    /// Metadata only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finesse: Option<f64>,
    /// Metadata only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavelength_nm: Option<f64>,
}

fn default_encode_phase() -> f64 {
    PI
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolBlock {
    #[serde(default)]
    pub phase_mode: PhaseModeName,
    #[serde(default = "default_encode_phase")]
    pub encode_phase: f64,
    #[serde(default)]
    pub decoder: DecoderName,
    #[serde(default)]
    pub postselect_policy: PolicyName,
    #[serde(default)]
    pub seed: u64,
}

impl Default for ProtocolBlock {
    fn default() -> Self {
        Self {
            phase_mode: PhaseModeName::default(),
            encode_phase: PI,
            decoder: DecoderName::default(),
            postselect_policy: PolicyName::default(),
            seed: 0,
        }
    }
}

/// Pass/fail thresholds for `verify`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyTolerances {
    #[serde(default = "VerifyTolerances::default_deviation")]
    pub max_population_deviation: f64,
    #[serde(default = "VerifyTolerances::default_leakage")]
    pub max_leakage: f64,
}

impl VerifyTolerances {
    fn default_deviation() -> f64 {
        0.01
    }
    fn default_leakage() -> f64 {
        0.02
    }
}

impl Default for VerifyTolerances {
    fn default() -> Self {
        Self { max_population_deviation: 0.01, max_leakage: 0.02 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsBlock {
    /// Highest Fock state kept.
    #[serde(default = "NumericsBlock::default_n_max")]
    pub n_max: u32,
    /// Inclusive momentum lattice range `[l_min, l_max]` of the oracle.
    #[serde(default = "NumericsBlock::default_l_range")]
    pub l_range: [i32; 2],
    /// Grid points per mirror time in `verify`.
    #[serde(default = "NumericsBlock::default_time_points")]
    pub time_points: usize,
    #[serde(default)]
    pub tolerances: VerifyTolerances,
}

impl NumericsBlock {
    fn default_n_max() -> u32 {
        3
    }
    fn default_l_range() -> [i32; 2] {
        [-3, 1]
    }
    fn default_time_points() -> usize {
        41
    }
}

impl Default for NumericsBlock {
    fn default() -> Self {
        Self { n_max: 3, l_range: [-3, 1], time_points: 41, tolerances: VerifyTolerances::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub verbosity: Verbosity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub physical: PhysicalBlock,
    #[serde(default)]
    pub protocol: ProtocolBlock,
    #[serde(default)]
    pub numerics: NumericsBlock,
    #[serde(default)]
    pub output: OutputBlock,
}

/// Quantities computed from the physical block, echoed in reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Derived {
    pub recoil_frequency_rad_s: f64,
    pub wavenumber_per_m: f64,
    /// 2π/k, for comparison with the lattice wavelength.
    pub implied_wavelength_nm: f64,
    /// β = μ²/ω_r.
    pub beta_rad_s: f64,
    /// α = μ²n/4Δ.
    pub bragg_alpha_rad_s: f64,
    pub detuning_ratio: f64,
    pub detuning_over_recoil: f64,
}

fn positive(name: &'static str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(ConfigError::NonPositive(name))
    }
}

impl RunConfig {
    /// The bundled Rb-85 configuration.
    pub fn rb85() -> Self {
        parse_config(RB85_TOML).expect("bundled config is valid")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.params().map(|_| ())?;
        let phase = self.protocol.encode_phase;
        if !(0.0..=2.0 * PI).contains(&phase) {
            return Err(ConfigError::EncodePhase(phase));
        }
        let sdc = self.sdc_config()?;
        sdc.validate().map_err(|e| ConfigError::Numerics(e.to_string()))?;
        if self.numerics.time_points < 2 {
            return Err(ConfigError::Numerics("time_points must be at least 2".into()));
        }
        positive("numerics.tolerances.max_population_deviation", self.numerics.tolerances.max_population_deviation)?;
        positive("numerics.tolerances.max_leakage", self.numerics.tolerances.max_leakage)?;
        Ok(())
    }

    pub fn params(&self) -> Result<PhysicalParams, ConfigError> {
        let p = &self.physical;
        let mass = positive("mass_amu", p.mass_amu)? * AMU;
        let coupling = positive("coupling_rad_s", p.coupling_rad_s)?;
        if p.detuning_rad_s == 0.0 {
            return Err(ConfigError::ZeroDetuning);
        }
        let detuning = positive("detuning_rad_s", p.detuning_rad_s)?;
        if p.photon_number == 0 {
            return Err(ConfigError::NoPhotons);
        }
        let aux_coupling = positive("aux_coupling_rad_s", p.aux_coupling_rad_s.unwrap_or(coupling))?;
        let rabi_frequency = positive("rabi_frequency_rad_s", p.rabi_frequency_rad_s.unwrap_or(2.0 * PI * 1.0e6))?;
        let laser_phase = p.laser_phase_rad.unwrap_or(-FRAC_PI_2);
        if !laser_phase.is_finite() {
            return Err(ConfigError::NonPositive("laser_phase_rad"));
        }
        if let Some(f) = p.finesse {
            positive("finesse", f)?;
        }
        if let Some(w) = p.wavelength_nm {
            positive("wavelength_nm", w)?;
        }
        let base = PhysicalParams {
            mass,
            recoil_frequency: 1.0,
            coupling,
            detuning,
            photon_number: p.photon_number,
            aux_coupling,
            rabi_frequency,
            laser_phase,
        };
        match (p.recoil_frequency_rad_s, p.wavenumber_per_m) {
            (Some(w), None) => Ok(PhysicalParams { recoil_frequency: positive("recoil_frequency_rad_s", w)?, ..base }),
            (None, Some(k)) => base
                .with_wavenumber(positive("wavenumber_per_m", k)?)
                .map_err(|_| ConfigError::NonPositive("wavenumber_per_m")),
            _ => Err(ConfigError::RecoilSource),
        }
    }

    pub fn bragg(&self) -> BraggConfig {
        BraggConfig {
            n_max: self.numerics.n_max,
            l_min: self.numerics.l_range[0],
            l_max: self.numerics.l_range[1],
            ..BraggConfig::default()
        }
    }

    pub fn sdc_config(&self) -> Result<SdcConfig, ConfigError> {
        Ok(SdcConfig {
            params: self.params()?,
            bragg: self.bragg(),
            phase_mode: self.protocol.phase_mode.into(),
            encode_phase: self.protocol.encode_phase,
            decoder: self.protocol.decoder.into(),
            postselect_policy: self.protocol.postselect_policy.into(),
            seed: self.protocol.seed,
        })
    }

    pub fn derived(&self) -> Result<Derived, ConfigError> {
        let p = self.params()?;
        let k = p.wavenumber();
        let vacuum_rabi = p.coupling * (p.photon_number as f64).sqrt();
        Ok(Derived {
            recoil_frequency_rad_s: p.recoil_frequency,
            wavenumber_per_m: k,
            implied_wavelength_nm: 2.0 * PI / k * 1e9,
            beta_rad_s: p.beta(),
            bragg_alpha_rad_s: p.rabi_alpha().map_err(|e| ConfigError::Numerics(e.to_string()))?,
            detuning_ratio: p.detuning / vacuum_rabi,
            detuning_over_recoil: p.detuning / p.recoil_frequency,
        })
    }

    /// The config as TOML; `parse_config` of the result gives it back.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

/// Parses and validates a TOML config document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let cfg: RunConfig = toml::from_str(text)?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_owned(), source })?;
    parse_config(&text)
}

/// `explicit`, else the file named by `SDC_CONFIG`, else the bundled Rb-85
/// config.
pub fn resolve_config(explicit: Option<&Path>) -> Result<RunConfig, ConfigError> {
    match explicit {
        Some(p) => load_config(p),
        None => match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => load_config(Path::new(&p)),
            _ => Ok(RunConfig::rb85()),
        },
    }
}
