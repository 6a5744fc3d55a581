//! Command-line front end: theory tables, sampling, arm-event estimation,
//! loop export, quasi-multiplicativity and JSON reports.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use fuzzy_potts::arm_events::{interface_count, ArmError, ColorSeq};
use fuzzy_potts::coloring::{color_clusters, ColorMode};
use fuzzy_potts::estimation::{
    build_report, quasi_mult_report, run_experiment, run_experiment_with_events, setting_name,
    EstimationError, RunConfig, EVENT_HEADER,
};
use fuzzy_potts::exponents::{exponent_for, ModelParams, Setting, TheoryError};
use fuzzy_potts::fk_sampler::{BoundaryCondition, ChainState};
use fuzzy_potts::geometry::{build_box, build_half_box};
use fuzzy_potts::loops::{d_loopsets, encode_bond_loops, encode_color_loops, LoopError, Sign};

#[derive(Parser, Debug)]
#[command(
    name = "fuzzy-potts",
    version,
    about = "Monte Carlo tools for the critical fuzzy Potts model"
)]
struct Cli {
    /// Experiment config file (TOML key/value pairs).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the master seed of the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Output file; stdout when absent and the config names none.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Predicted exponents as CSV.
    Theory {
        /// Comma-separated q values.
        #[arg(long, default_value = "1,2,3")]
        q: String,
        /// Comma-separated r values.
        #[arg(long, default_value = "0.5")]
        r: String,
        /// Comma-separated colour sequences.
        #[arg(long, default_value = "RB,RBR,RBRB,RBRBRB")]
        tau: String,
    },
    /// Bond and colour snapshots of the sampling window.
    Sample,
    /// Per-sample event stream, or the per-rung table with `--table`.
    Arms {
        #[arg(long)]
        table: bool,
    },
    /// Loop export of one sample of the window with the colour-loop
    /// coupling diagnostic.
    Loops,
    /// Quasi-multiplicativity ratios for `l,m,n` triples separated by `;`.
    Qmult {
        #[arg(long)]
        triples: String,
    },
    /// Estimates, exponent fit and theory comparison as JSON.
    Report,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
enum Failure {
    Config(anyhow::Error),
    Assertion(anyhow::Error),
    Other(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Assertion(_) => 3,
            Failure::Other(_) => 1,
        }
    }

    fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Config(e) | Failure::Assertion(e) | Failure::Other(e) => e,
        }
    }
}

#[derive(Debug)]
struct ConfigProblem(String);

impl std::fmt::Display for ConfigProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigProblem {}

fn config_problem(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(ConfigProblem(msg.into()))
}

fn classify(e: anyhow::Error) -> Failure {
    for cause in e.chain() {
        if cause.is::<ConfigProblem>() || cause.is::<ArmError>() {
            return Failure::Config(e);
        }
        if let Some(est) = cause.downcast_ref::<EstimationError>() {
            match est {
                EstimationError::Config(_) => return Failure::Config(e),
                EstimationError::Theory(TheoryError::Branch { .. }) => {
                    return Failure::Assertion(e)
                }
                _ => {}
            }
        }
        if let Some(TheoryError::Branch { .. }) = cause.downcast_ref::<TheoryError>() {
            return Failure::Assertion(e);
        }
        if let Some(TheoryError::QOutOfRange(_) | TheoryError::ROutOfRange(_)) =
            cause.downcast_ref::<TheoryError>()
        {
            return Failure::Config(e);
        }
        if let Some(LoopError::Stuck(_)) = cause.downcast_ref::<LoopError>() {
            return Failure::Assertion(e);
        }
    }
    Failure::Other(e)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let f = classify(e);
            eprintln!("error: {:#}", f.error());
            ExitCode::from(f.code())
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| config_problem("this command needs --config"))?;
    let text =
        fs::read_to_string(path).map_err(|e| config_problem(format!("{}: {e}", path.display())))?;
    let mut cfg =
        RunConfig::from_text(&text).with_context(|| format!("reading {}", path.display()))?;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.output = Some(o.clone());
    }
    Ok(cfg)
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn header(kind: &str) -> String {
    format!("# schema=fuzzy-potts/{kind}-v1\n# generated={}\n", now())
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| config_problem(format!("bad {what} value {x:?}")))
        })
        .collect()
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.cmd {
        Cmd::Theory { q, r, tau } => {
            let text = theory_table(&parse_list(q, "q")?, &parse_list(r, "r")?, tau)?;
            emit(cli.out.as_deref(), &text)
        }
        Cmd::Sample => {
            let cfg = load_config(cli)?;
            emit(cfg.output.as_deref(), &sample_text(&cfg)?)
        }
        Cmd::Arms { table } => {
            let cfg = load_config(cli)?;
            let text = if *table {
                run_experiment(&cfg, cli.threads)?.to_csv(Some(now()))
            } else {
                let (_, events) = run_experiment_with_events(&cfg, cli.threads, true)?;
                let mut s = header("events");
                s.push_str(EVENT_HEADER);
                s.push('\n');
                for e in &events {
                    s.push_str(&e.to_csv());
                    s.push('\n');
                }
                s
            };
            emit(cfg.output.as_deref(), &text)
        }
        Cmd::Loops => {
            let cfg = load_config(cli)?;
            emit(cfg.output.as_deref(), &loops_text(&cfg)?)
        }
        Cmd::Qmult { triples } => {
            let cfg = load_config(cli)?;
            let triples = parse_triples(triples)?;
            let (_, rows) = quasi_mult_report(&cfg, &triples, cli.threads)?;
            let mut s = header("qmult");
            s.push_str("l,m,n,p_ln,p_lm,p_mn,ratio,ci_low,ci_high,flag\n");
            for r in rows {
                let flag = r.flag.map(|f| format!("{f:?}")).unwrap_or_default();
                s.push_str(&format!(
                    "{},{},{},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{}\n",
                    r.l, r.m, r.n, r.p_ln, r.p_lm, r.p_mn, r.ratio, r.ci_low, r.ci_high, flag
                ));
            }
            emit(cfg.output.as_deref(), &s)
        }
        Cmd::Report => {
            let cfg = load_config(cli)?;
            let report = build_report(&cfg, cli.threads)?;
            let mut text = serde_json::to_string_pretty(&report)?;
            text.push('\n');
            emit(cfg.output.as_deref(), &text)
        }
    }
}

fn theory_table(qs: &[f64], rs: &[f64], taus: &str) -> Result<String> {
    let taus: Vec<ColorSeq> = taus
        .split(',')
        .map(|t| t.trim().parse::<ColorSeq>())
        .collect::<Result<_, _>>()?;
    let mut s = header("theory");
    s.push_str("q,r,tau,setting,I,Iplus,exponent\n");
    for &q in qs {
        for &r in rs {
            let params = ModelParams::new(q, r)?;
            for tau in &taus {
                let (i, ip) = interface_count(tau);
                for setting in [Setting::Plane, Setting::Halfplane] {
                    let a = exponent_for(tau, setting, &params)?;
                    let a = a.map(|a| format!("{a:.12}")).unwrap_or_default();
                    s.push_str(&format!(
                        "{q},{r},{tau},{},{i},{ip},{a}\n",
                        setting_name(setting)
                    ));
                }
            }
        }
    }
    Ok(s)
}

fn parse_triples(s: &str) -> Result<Vec<(i32, i32, i32)>> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let v: Vec<i32> = parse_list(t, "triple")?;
            match v[..] {
                [l, m, n] => Ok((l, m, n)),
                _ => Err(config_problem(format!("triple {t:?} needs three entries"))),
            }
        })
        .collect()
}

fn window_chain(cfg: &RunConfig) -> Result<ChainState> {
    let radius = cfg.window_radius();
    let region = Arc::new(match cfg.measure {
        Setting::Plane => build_box(radius)?,
        Setting::Halfplane => build_half_box(radius)?,
    });
    Ok(ChainState::new(
        region,
        cfg.q,
        BoundaryCondition::Free,
        cfg.seed,
        0,
    )?)
}

fn sample_text(cfg: &RunConfig) -> Result<String> {
    let mut chain = window_chain(cfg)?;
    let mut s = header("sample");
    s.push_str(&format!(
        "# q={} r={} radius={}\n",
        cfg.q,
        cfg.r,
        cfg.window_radius()
    ));
    chain.run(cfg.burn_in);
    for k in 0..cfg.samples_per_chain {
        chain.run(cfg.thin);
        let region = Arc::clone(chain.config().region());
        let bonds = chain.config().to_snapshot();
        let (cs, rng) = chain.clusters_and_rng();
        let sigma = color_clusters(&region, cs, cfg.r, ColorMode::Iid, rng)?;
        s.push_str(&format!(
            "sample {k}\n{}\n{}\n",
            bonds.trim_end(),
            sigma.to_snapshot().trim_end()
        ));
    }
    Ok(s)
}

fn loops_text(cfg: &RunConfig) -> Result<String> {
    let mut chain = window_chain(cfg)?;
    chain.run(cfg.burn_in.max(1));
    let region = Arc::clone(chain.config().region());
    let omega = chain.config().clone();
    let (cs, rng) = chain.clusters_and_rng();
    let sigma = color_clusters(&region, cs, cfg.r, ColorMode::Iid, rng)?;
    let bond = encode_bond_loops(&omega)?;
    let plus = encode_color_loops(&sigma, Sign::Plus)?;
    let minus = encode_color_loops(&sigma, Sign::Minus)?;
    let n = cfg.window_radius() as f64;
    let eps = region.mesh().value();
    if eps <= 0.0 {
        bail!("mesh must be positive");
    }
    let diag = d_loopsets(&plus, &minus) / (2.0 * n * eps);
    let mut s = header("loops");
    s.push_str(&format!(
        "# bond_loops={} plus_loops={} minus_loops={}\n# d_plus_minus_over_2n_eps={diag:.6}\n",
        bond.set.len(),
        plus.len(),
        minus.len()
    ));
    for set in [&bond.set, &plus, &minus] {
        s.push_str(&set.to_text());
    }
    if !diag.is_finite() {
        return Err(anyhow!("coupling diagnostic is not finite"));
    }
    Ok(s)
}
