//! Experiment harness: seeded parallel chains on a padded window, event
//! tallies per ladder rung, Wilson intervals, exponent fits, the
//! quasi-multiplicativity ratio table and comparison with theory.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::almost_arms::{b_event, AlmostArmError, AlmostArmWrt};
use crate::arm_events::{
    detect_arm_event, detect_fk_arm_event, detect_halfplane_arm_event, ArmDetection, ArmError,
    ArmVariant, ColorSeq, TypeSeq,
};
use crate::coloring::{color_clusters, ColorMode, ColoringError};
use crate::exponents::{exponent_for, ModelParams, Setting, TheoryError};
use crate::fk_sampler::{BoundaryCondition, ChainState, SamplerError};
use crate::geometry::{
    build_annulus, build_box, build_half_annulus, build_half_box, GeometryError, Region,
};

/// Version tag written into every CSV and JSON output.
pub const SCHEMA: &str = "fuzzy-potts/estimate-v1";
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Error)]
pub enum EstimationError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Arm(#[from] ArmError),
    #[error(transparent)]
    AlmostArm(#[from] AlmostArmError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error("thread pool: {0}")]
    Pool(String),
}

fn config_err(msg: impl Into<String>) -> EstimationError {
    EstimationError::Config(msg.into())
}

/// Which event is measured on each annulus of the ladder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EventFamily {
    /// `A_τ`, red strong and blue weak.
    A,
    /// `A^s_τ`, all arms strong.
    As,
    APlus,
    APlusS,
    /// FK primal/dual arms.
    Fk,
    /// Almost-arms in the plane.
    B,
    /// Halfplane almost-arms, interior clusters avoid `∂S`.
    BPlus,
    /// Halfplane almost-arms, interior clusters avoid `∂₊S`.
    BPlusPlus,
}

impl EventFamily {
    /// Annulus shape the family lives on; `None` if either works.
    pub fn setting(self) -> Option<Setting> {
        match self {
            EventFamily::A | EventFamily::As | EventFamily::B => Some(Setting::Plane),
            EventFamily::APlus
            | EventFamily::APlusS
            | EventFamily::BPlus
            | EventFamily::BPlusPlus => Some(Setting::Halfplane),
            EventFamily::Fk => None,
        }
    }

    /// Does the family read a colouring (rather than only bonds)?
    pub fn colored(self) -> bool {
        self != EventFamily::Fk
    }
}

impl fmt::Display for EventFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventFamily::A => "A",
            EventFamily::As => "As",
            EventFamily::APlus => "A+",
            EventFamily::APlusS => "A+s",
            EventFamily::Fk => "FK",
            EventFamily::B => "B",
            EventFamily::BPlus => "B+",
            EventFamily::BPlusPlus => "B++",
        })
    }
}

impl FromStr for EventFamily {
    type Err = EstimationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim() {
            "A" => EventFamily::A,
            "As" => EventFamily::As,
            "A+" => EventFamily::APlus,
            "A+s" => EventFamily::APlusS,
            "FK" => EventFamily::Fk,
            "B" => EventFamily::B,
            "B+" => EventFamily::BPlus,
            "B++" => EventFamily::BPlusPlus,
            other => return Err(config_err(format!("unknown event family {other:?}"))),
        })
    }
}

pub fn setting_name(s: Setting) -> &'static str {
    match s {
        Setting::Plane => "plane",
        Setting::Halfplane => "halfplane",
    }
}

fn parse_setting(s: &str) -> Result<Setting, EstimationError> {
    match s.trim() {
        "plane" => Ok(Setting::Plane),
        "halfplane" => Ok(Setting::Halfplane),
        other => Err(config_err(format!("unknown setting {other:?}"))),
    }
}

pub fn variant_name(v: ArmVariant) -> &'static str {
    match v {
        ArmVariant::Mixed => "mixed",
        ArmVariant::AllStrong => "allstrong",
    }
}

fn parse_variant(s: &str) -> Result<ArmVariant, EstimationError> {
    match s.trim() {
        "mixed" => Ok(ArmVariant::Mixed),
        "allstrong" => Ok(ArmVariant::AllStrong),
        other => Err(config_err(format!("unknown variant {other:?}"))),
    }
}

/// Arm sequence: colours for colour families, primal/dual types for FK.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArmSeq {
    Colors(ColorSeq),
    Types(TypeSeq),
}

impl fmt::Display for ArmSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArmSeq::Colors(c) => c.fmt(f),
            ArmSeq::Types(t) => t.fmt(f),
        }
    }
}

/// Validated experiment description.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub q: f64,
    pub r: f64,
    /// Shape of the measured annuli.
    pub setting: Setting,
    /// Window the configuration is sampled in: a box (plane) or a half box.
    pub measure: Setting,
    pub variant: ArmVariant,
    pub family: EventFamily,
    pub tau: ArmSeq,
    pub ladder: Vec<(i32, i32)>,
    /// Window radius as a multiple of the largest `n` on the ladder.
    pub padding: i32,
    pub chains: usize,
    pub samples_per_chain: usize,
    pub burn_in: u64,
    pub thin: u64,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

/// Flat key/value form of [`RunConfig`], as read from and written to
/// config files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub q: f64,
    pub r: f64,
    #[serde(default)]
    pub setting: Option<String>,
    #[serde(default)]
    pub measure: Option<String>,
    #[serde(default = "default_variant")]
    pub variant: String,
    pub family: String,
    pub tau: String,
    pub ladder: Vec<[i32; 2]>,
    #[serde(default = "default_padding")]
    pub padding: i32,
    #[serde(default = "default_one")]
    pub chains: usize,
    pub samples_per_chain: usize,
    #[serde(default)]
    pub burn_in: u64,
    #[serde(default = "default_one_u64")]
    pub thin: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<String>,
}

fn default_variant() -> String {
    "mixed".into()
}
fn default_padding() -> i32 {
    2
}
fn default_one() -> usize {
    1
}
fn default_one_u64() -> u64 {
    1
}

impl RunConfig {
    /// Parses the flat `key = value` config format.
    pub fn from_text(text: &str) -> Result<Self, EstimationError> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| config_err(e.message().to_string()))?;
        RunConfig::from_raw(raw)
    }

    pub fn from_raw(raw: RawConfig) -> Result<Self, EstimationError> {
        let family: EventFamily = raw.family.parse()?;
        let setting = match (&raw.setting, family.setting()) {
            (Some(s), fixed) => {
                let s = parse_setting(s)?;
                if fixed.is_some_and(|f| f != s) {
                    return Err(config_err(format!(
                        "family {family} requires the other setting"
                    )));
                }
                s
            }
            (None, Some(f)) => f,
            (None, None) => return Err(config_err("setting is required for family FK")),
        };
        let measure = match &raw.measure {
            Some(m) => parse_setting(m)?,
            None => setting,
        };
        if setting == Setting::Plane && measure == Setting::Halfplane {
            return Err(config_err(
                "a plane annulus does not fit in a halfplane window",
            ));
        }
        let tau = if family.colored() {
            ArmSeq::Colors(
                raw.tau
                    .parse()
                    .map_err(|e: ArmError| config_err(e.to_string()))?,
            )
        } else {
            ArmSeq::Types(
                raw.tau
                    .parse()
                    .map_err(|e: ArmError| config_err(e.to_string()))?,
            )
        };
        let cfg = RunConfig {
            q: raw.q,
            r: raw.r,
            setting,
            measure,
            variant: parse_variant(&raw.variant)?,
            family,
            tau,
            ladder: raw.ladder.iter().map(|p| (p[0], p[1])).collect(),
            padding: raw.padding,
            chains: raw.chains,
            samples_per_chain: raw.samples_per_chain,
            burn_in: raw.burn_in,
            thin: raw.thin,
            seed: raw.seed,
            output: raw.output.map(PathBuf::from),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_raw(&self) -> RawConfig {
        RawConfig {
            q: self.q,
            r: self.r,
            setting: Some(setting_name(self.setting).into()),
            measure: Some(setting_name(self.measure).into()),
            variant: variant_name(self.variant).into(),
            family: self.family.to_string(),
            tau: self.tau.to_string(),
            ladder: self.ladder.iter().map(|&(m, n)| [m, n]).collect(),
            padding: self.padding,
            chains: self.chains,
            samples_per_chain: self.samples_per_chain,
            burn_in: self.burn_in,
            thin: self.thin,
            seed: self.seed,
            output: self.output.as_ref().map(|p| p.display().to_string()),
        }
    }

    /// Config text that parses back to `self`.
    pub fn to_text(&self) -> String {
        toml::to_string(&self.to_raw()).unwrap_or_default()
    }

    pub fn validate(&self) -> Result<(), EstimationError> {
        if !(1.0..4.0).contains(&self.q) {
            return Err(config_err(format!("q must lie in [1, 4), got {}", self.q)));
        }
        if !(self.r > 0.0 && self.r < 1.0) {
            return Err(config_err(format!("r must lie in (0, 1), got {}", self.r)));
        }
        if self.ladder.is_empty() {
            return Err(config_err("ladder is empty"));
        }
        for &(m, n) in &self.ladder {
            if !(1 <= m && m <= n) {
                return Err(config_err(format!("rung ({m}, {n}) violates 1 <= m <= n")));
            }
        }
        let min_pad = if self.measure == Setting::Halfplane {
            2
        } else {
            1
        };
        if self.padding < min_pad {
            return Err(config_err(format!("padding must be at least {min_pad}")));
        }
        if self.chains == 0 {
            return Err(config_err("chains must be positive"));
        }
        if self.thin == 0 {
            return Err(config_err("thin must be positive"));
        }
        Ok(())
    }

    /// Radius of the shared sampling window.
    pub fn window_radius(&self) -> i32 {
        self.padding * self.ladder.iter().map(|r| r.1).max().unwrap_or(1)
    }

    /// Total number of samples over all chains.
    pub fn total_samples(&self) -> usize {
        self.chains * self.samples_per_chain
    }
}

/// One ladder rung of an [`EstimateTable`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateRow {
    pub m: i32,
    pub n: i32,
    pub trials: u64,
    /// Occurrences, including answers given for a reduced sequence.
    pub hits: u64,
    /// Occurrences excluding reduced-sequence answers.
    pub hits_exclusive: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl EstimateRow {
    pub fn new(m: i32, n: i32, trials: u64, hits: u64, hits_exclusive: u64) -> Self {
        let (p_hat, ci_low, ci_high) = wilson(hits, trials);
        EstimateRow {
            m,
            n,
            trials,
            hits,
            hits_exclusive,
            p_hat,
            ci_low,
            ci_high,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateTable {
    pub config: RunConfig,
    pub rows: Vec<EstimateRow>,
}

/// Point estimate and Wilson 95% interval; `(0, 0, 1)` without trials.
pub fn wilson(hits: u64, trials: u64) -> (f64, f64, f64) {
    if trials == 0 {
        return (0.0, 0.0, 1.0);
    }
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    (
        (p),
        (centre - half).max(0.0).min(p),
        (centre + half).min(1.0).max(p),
    )
}

/// One per-sample event record.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EventRow {
    pub family: String,
    pub q: f64,
    pub r: f64,
    pub variant: String,
    pub tau: String,
    pub m: i32,
    pub n: i32,
    pub occurs: bool,
    pub reduced_only: bool,
    pub seed: u64,
    pub chain: u64,
}

pub const EVENT_HEADER: &str = "family,q,r,variant,tau,m,n,occurs,reduced_only,seed,chain";

impl EventRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.family,
            self.q,
            self.r,
            self.variant,
            self.tau,
            self.m,
            self.n,
            self.occurs as u8,
            self.reduced_only as u8,
            self.seed,
            self.chain
        )
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Tally {
    trials: u64,
    hits: u64,
    hits_exclusive: u64,
}

impl Tally {
    fn add(&mut self, d: ArmDetection) {
        self.trials += 1;
        self.hits += d.occurs as u64;
        self.hits_exclusive += (d.occurs && !d.reduced_only) as u64;
    }

    fn merge(&mut self, o: &Tally) {
        self.trials += o.trials;
        self.hits += o.hits;
        self.hits_exclusive += o.hits_exclusive;
    }
}

struct Rung {
    m: i32,
    n: i32,
    region: Arc<Region>,
}

fn build_rungs(cfg: &RunConfig) -> Result<Vec<Rung>, EstimationError> {
    cfg.ladder
        .iter()
        .map(|&(m, n)| {
            let region = match cfg.setting {
                Setting::Plane => build_annulus(m, n)?,
                Setting::Halfplane => build_half_annulus(m, n)?,
            };
            Ok(Rung {
                m,
                n,
                region: Arc::new(region),
            })
        })
        .collect()
}

fn build_window(cfg: &RunConfig) -> Result<Arc<Region>, EstimationError> {
    let radius = cfg.window_radius();
    Ok(Arc::new(match cfg.measure {
        Setting::Plane => build_box(radius)?,
        Setting::Halfplane => build_half_box(radius)?,
    }))
}

fn detect(
    cfg: &RunConfig,
    rung: &Rung,
    chain: &ChainState,
    sigma: Option<&crate::coloring::Coloring>,
) -> Result<ArmDetection, EstimationError> {
    let region = &rung.region;
    let sub_sigma = || {
        sigma
            .map(|s| s.restrict_to(region))
            .expect("colour families carry a colouring")
    };
    Ok(match (&cfg.tau, cfg.family) {
        (ArmSeq::Types(t), EventFamily::Fk) => {
            let omega = chain.config().restrict_to(region);
            detect_fk_arm_event(region, &omega, t)?
        }
        (ArmSeq::Colors(t), EventFamily::A | EventFamily::APlus) => {
            let s = sub_sigma();
            if cfg.setting == Setting::Plane {
                detect_arm_event(region, &s, t, cfg.variant)?
            } else {
                detect_halfplane_arm_event(region, &s, t, cfg.variant)?
            }
        }
        (ArmSeq::Colors(t), EventFamily::As | EventFamily::APlusS) => {
            let s = sub_sigma();
            if cfg.setting == Setting::Plane {
                detect_arm_event(region, &s, t, ArmVariant::AllStrong)?
            } else {
                detect_halfplane_arm_event(region, &s, t, ArmVariant::AllStrong)?
            }
        }
        (ArmSeq::Colors(t), EventFamily::B | EventFamily::BPlus | EventFamily::BPlusPlus) => {
            let omega = chain.config().restrict_to(region);
            let s = sub_sigma();
            let wrt = if cfg.family == EventFamily::BPlusPlus {
                AlmostArmWrt::HalfplaneZ
            } else {
                AlmostArmWrt::Z2
            };
            b_event(&omega, &s, t, wrt)?
        }
        _ => return Err(config_err("sequence kind does not match the event family")),
    })
}

struct ChainResult {
    tallies: Vec<Tally>,
    events: Vec<EventRow>,
}

fn run_chain(
    cfg: &RunConfig,
    window: &Arc<Region>,
    rungs: &[Rung],
    chain_id: u64,
    keep_events: bool,
) -> Result<ChainResult, EstimationError> {
    let mut chain = ChainState::new(
        Arc::clone(window),
        cfg.q,
        BoundaryCondition::Free,
        cfg.seed,
        chain_id,
    )?;
    let mut tallies = vec![Tally::default(); rungs.len()];
    let mut events = Vec::new();
    if cfg.samples_per_chain > 0 {
        chain.run(cfg.burn_in);
    }
    for _ in 0..cfg.samples_per_chain {
        chain.run(cfg.thin);
        let sigma = if cfg.family.colored() {
            let (cs, rng) = chain.clusters_and_rng();
            Some(color_clusters(window, cs, cfg.r, ColorMode::Iid, rng)?)
        } else {
            None
        };
        for (k, rung) in rungs.iter().enumerate() {
            let d = detect(cfg, rung, &chain, sigma.as_ref())?;
            tallies[k].add(d);
            if keep_events {
                events.push(EventRow {
                    family: cfg.family.to_string(),
                    q: cfg.q,
                    r: cfg.r,
                    variant: variant_name(cfg.variant).into(),
                    tau: cfg.tau.to_string(),
                    m: rung.m,
                    n: rung.n,
                    occurs: d.occurs,
                    reduced_only: d.reduced_only,
                    seed: cfg.seed,
                    chain: chain_id,
                });
            }
        }
    }
    Ok(ChainResult { tallies, events })
}

/// Runs all chains (on `threads` worker threads) and tallies every rung.
/// Chain `k` uses stream `k` of the master seed, so results do not depend
/// on the thread count.
pub fn run_experiment(cfg: &RunConfig, threads: usize) -> Result<EstimateTable, EstimationError> {
    run_experiment_with_events(cfg, threads, false).map(|(t, _)| t)
}

/// As [`run_experiment`], also returning the per-sample event stream in
/// chain order when `keep_events` is set.
pub fn run_experiment_with_events(
    cfg: &RunConfig,
    threads: usize,
    keep_events: bool,
) -> Result<(EstimateTable, Vec<EventRow>), EstimationError> {
    cfg.validate()?;
    let window = build_window(cfg)?;
    let rungs = build_rungs(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| EstimationError::Pool(e.to_string()))?;
    let results: Vec<Result<ChainResult, EstimationError>> = pool.install(|| {
        (0..cfg.chains as u64)
            .into_par_iter()
            .map(|k| run_chain(cfg, &window, &rungs, k, keep_events))
            .collect()
    });
    let mut total = vec![Tally::default(); rungs.len()];
    let mut events = Vec::new();
    for r in results {
        let r = r?;
        for (t, c) in total.iter_mut().zip(&r.tallies) {
            t.merge(c);
        }
        events.extend(r.events);
    }
    let rows = rungs
        .iter()
        .zip(&total)
        .map(|(g, t)| EstimateRow::new(g.m, g.n, t.trials, t.hits, t.hits_exclusive))
        .collect();
    Ok((
        EstimateTable {
            config: cfg.clone(),
            rows,
        },
        events,
    ))
}

pub const TABLE_HEADER: &str =
    "family,tau,setting,measure,q,r,m,n,trials,hits,hits_exclusive,p_hat,ci_low,ci_high,seed";

impl EstimateTable {
    /// CSV with a schema line and `# key=value` metadata. The `generated`
    /// line carries a timestamp when `stamp` is given; everything else is a
    /// function of the config.
    pub fn to_csv(&self, stamp: Option<u64>) -> String {
        let c = &self.config;
        let mut s = format!(
            "# schema={SCHEMA}\n# code_version={}\n",
            env!("CARGO_PKG_VERSION")
        );
        if let Some(t) = stamp {
            s.push_str(&format!("# generated={t}\n"));
        }
        let mut meta = c.clone();
        meta.output = None;
        for line in meta.to_text().lines() {
            s.push_str(&format!("# {line}\n"));
        }
        s.push_str(TABLE_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{:.8e},{:.8e},{:.8e},{}\n",
                c.family,
                c.tau,
                setting_name(c.setting),
                setting_name(c.measure),
                c.q,
                c.r,
                r.m,
                r.n,
                r.trials,
                r.hits,
                r.hits_exclusive,
                r.p_hat,
                r.ci_low,
                r.ci_high,
                c.seed
            ));
        }
        s
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum FitError {
    #[error("exponent undefined: {0}")]
    Undefined(String),
}

/// Weighted least-squares fit of `log p̂` against `log(m/n)`: the slope is
/// the exponent `α` in `p ≈ (m/n)^α`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fit {
    pub exponent: f64,
    pub stderr: f64,
    pub intercept: f64,
    pub rungs_used: usize,
}

/// Rungs with fewer hits are dropped before fitting.
pub const MIN_HITS: u64 = 5;

/// Fits points `(x, y, σ_y)` by weighted least squares with known variances.
pub fn fit_points(points: &[(f64, f64, f64)]) -> Result<Fit, FitError> {
    if points.len() < 3 {
        return Err(FitError::Undefined(format!(
            "{} usable rungs, need 3",
            points.len()
        )));
    }
    let w: Vec<f64> = points.iter().map(|p| 1.0 / (p.2 * p.2)).collect();
    let sw: f64 = w.iter().sum();
    let xm = points.iter().zip(&w).map(|(p, w)| w * p.0).sum::<f64>() / sw;
    let ym = points.iter().zip(&w).map(|(p, w)| w * p.1).sum::<f64>() / sw;
    let sxx: f64 = points
        .iter()
        .zip(&w)
        .map(|(p, w)| w * (p.0 - xm).powi(2))
        .sum();
    if !(sxx > 0.0) {
        return Err(FitError::Undefined(
            "all rungs share one scale ratio".into(),
        ));
    }
    let sxy: f64 = points
        .iter()
        .zip(&w)
        .map(|(p, w)| w * (p.0 - xm) * (p.1 - ym))
        .sum();
    let slope = sxy / sxx;
    Ok(Fit {
        exponent: slope,
        stderr: (1.0 / sxx).sqrt(),
        intercept: ym - slope * xm,
        rungs_used: points.len(),
    })
}

/// Exponent fit over the rungs of a table with at least [`MIN_HITS`] hits;
/// `σ_y` is the log-scale half-width of the Wilson interval over `z`.
pub fn fit_exponent(table: &EstimateTable) -> Result<Fit, FitError> {
    fit_rows(&table.rows)
}

pub fn fit_rows(rows: &[EstimateRow]) -> Result<Fit, FitError> {
    if rows.iter().all(|r| r.hits == 0) {
        return Err(FitError::Undefined("no rung has any hit".into()));
    }
    let pts: Vec<(f64, f64, f64)> = rows
        .iter()
        .filter(|r| r.hits >= MIN_HITS && r.ci_low > 0.0)
        .map(|r| {
            let x = (r.m as f64 / r.n as f64).ln();
            let sigma = (r.ci_high.ln() - r.ci_low.ln()) / (2.0 * Z95);
            (x, r.p_hat.ln(), sigma)
        })
        .collect();
    fit_points(&pts)
}

/// Flags raised by the quasi-multiplicativity table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QmFlag {
    /// Interval misses `[1/10, 10]`.
    OutOfBand,
    ZeroDenominator,
    /// `ℓ = m = n`: the ratio is `1/p̂` by definition.
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QmRow {
    pub l: i32,
    pub m: i32,
    pub n: i32,
    pub p_ln: f64,
    pub p_lm: f64,
    pub p_mn: f64,
    pub ratio: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub flag: Option<QmFlag>,
}

impl QmRow {
    pub fn intersects(&self, lo: f64, hi: f64) -> bool {
        self.ci_low <= hi && self.ci_high >= lo
    }
}

/// The ladder needed by [`quasi_mult_from_table`] for the given triples.
pub fn qm_ladder(triples: &[(i32, i32, i32)]) -> Vec<(i32, i32)> {
    let mut v: Vec<(i32, i32)> = triples
        .iter()
        .flat_map(|&(l, m, n)| [(l, n), (l, m), (m, n)])
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Ratios `p̂(ℓ,n) / (p̂(ℓ,m) p̂(m,n))` with a delta-method interval on the
/// log scale, treating the three estimates as independent.
pub fn quasi_mult_from_table(rows: &[EstimateRow], triples: &[(i32, i32, i32)]) -> Vec<QmRow> {
    let find = |m: i32, n: i32| rows.iter().find(|r| r.m == m && r.n == n);
    let log_var = |r: &EstimateRow| (1.0 - r.p_hat) / (r.trials as f64 * r.p_hat);
    triples
        .iter()
        .map(|&(l, m, n)| {
            let (ln, lm, mn) = (find(l, n), find(l, m), find(m, n));
            let p = |r: Option<&EstimateRow>| r.map_or(0.0, |r| r.p_hat);
            let mut row = QmRow {
                l,
                m,
                n,
                p_ln: p(ln),
                p_lm: p(lm),
                p_mn: p(mn),
                ratio: f64::NAN,
                ci_low: 0.0,
                ci_high: f64::INFINITY,
                flag: None,
            };
            if row.p_lm == 0.0 || row.p_mn == 0.0 {
                row.flag = Some(QmFlag::ZeroDenominator);
                return row;
            }
            row.ratio = row.p_ln / (row.p_lm * row.p_mn);
            if row.p_ln > 0.0 {
                let (a, b, c) = (ln.unwrap(), lm.unwrap(), mn.unwrap());
                let sd = if l == m && m == n {
                    log_var(a).sqrt()
                } else {
                    (log_var(a) + log_var(b) + log_var(c)).sqrt()
                };
                row.ci_low = row.ratio * (-Z95 * sd).exp();
                row.ci_high = row.ratio * (Z95 * sd).exp();
            }
            row.flag = if l == m && m == n {
                Some(QmFlag::Degenerate)
            } else if !row.intersects(0.1, 10.0) {
                Some(QmFlag::OutOfBand)
            } else {
                None
            };
            row
        })
        .collect()
}

/// Runs the ladder needed for `triples` (overriding `cfg.ladder`) and
/// returns the ratio table. The sequence must be alternating.
pub fn quasi_mult_report(
    cfg: &RunConfig,
    triples: &[(i32, i32, i32)],
    threads: usize,
) -> Result<(EstimateTable, Vec<QmRow>), EstimationError> {
    if let ArmSeq::Colors(t) = &cfg.tau {
        if !crate::arm_events::is_alternating(t, cfg.setting) {
            return Err(config_err(format!("{t} is not alternating")));
        }
    }
    for &(l, m, n) in triples {
        if !(1 <= l && l <= m && m <= n) {
            return Err(config_err(format!(
                "triple ({l}, {m}, {n}) violates 1 <= l <= m <= n"
            )));
        }
    }
    let mut c = cfg.clone();
    c.ladder = qm_ladder(triples);
    let table = run_experiment(&c, threads)?;
    let rows = quasi_mult_from_table(&table.rows, triples);
    Ok((table, rows))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoryRow {
    pub tau: String,
    pub setting: String,
    pub fitted: f64,
    pub stderr: f64,
    pub theoretical: Option<f64>,
    pub z: Option<f64>,
}

/// Fitted exponents next to the predicted ones, with `z = (fit - theory) /
/// stderr` (zero when both agree exactly).
pub fn compare_to_theory(
    fits: &[(ColorSeq, Setting, Fit)],
    params: &ModelParams,
) -> Result<Vec<TheoryRow>, EstimationError> {
    fits.iter()
        .map(|(tau, setting, fit)| {
            let th = exponent_for(tau, *setting, params)?;
            let z = th.map(|t| {
                let d = fit.exponent - t;
                if d == 0.0 {
                    0.0
                } else {
                    d / fit.stderr
                }
            });
            Ok(TheoryRow {
                tau: tau.to_string(),
                setting: setting_name(*setting).into(),
                fitted: fit.exponent,
                stderr: fit.stderr,
                theoretical: th,
                z,
            })
        })
        .collect()
}

/// Everything the `report` command writes.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub config: RawConfig,
    pub rows: Vec<EstimateRow>,
    pub fitted: Vec<Fit>,
    pub theory: Vec<TheoryRow>,
    pub flags: Vec<String>,
}

/// Runs, fits and compares; fit failures and missing predictions become
/// flags rather than errors.
pub fn build_report(cfg: &RunConfig, threads: usize) -> Result<Report, EstimationError> {
    let table = run_experiment(cfg, threads)?;
    let mut flags = vec![
        "statistical bands are artifact choices; theory gives only asymptotic exponents"
            .to_string(),
    ];
    let mut fitted = Vec::new();
    let mut theory = Vec::new();
    for r in &table.rows {
        if r.hits < MIN_HITS {
            flags.push(format!("rung ({}, {}) dropped: {} hits", r.m, r.n, r.hits));
        }
        if r.hits != r.hits_exclusive {
            flags.push(format!(
                "rung ({}, {}): {} hits answered for the reduced sequence",
                r.m,
                r.n,
                r.hits - r.hits_exclusive
            ));
        }
    }
    match fit_exponent(&table) {
        Ok(fit) => {
            if let ArmSeq::Colors(t) = &cfg.tau {
                let params = ModelParams::new(cfg.q, cfg.r)?;
                theory = compare_to_theory(&[(t.clone(), cfg.setting, fit.clone())], &params)?;
            } else {
                flags.push("no prediction for FK arm sequences".into());
            }
            fitted.push(fit);
        }
        Err(e) => flags.push(e.to_string()),
    }
    Ok(Report {
        schema: SCHEMA,
        config: cfg.to_raw(),
        rows: table.rows,
        fitted,
        theory,
        flags,
    })
}
