//! degcom: degree of commutativity and conjugacy ratio of finitely
//! generated groups under ball and random-walk measure sequences.
//!
//! Exit codes: 0 success, 1 configuration error, 2 resource cap
//! exceeded, 3 verification failure.

mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{resolve, RunArgs, RunConfig};
use degcom::report;
use degcom::{
    cr_sequence, dc_montecarlo, dc_sequence, index_measurement_curve, mixing_bound,
    parse_rational, verify_uniform_measurement, Error, Measure, MeasureSeqSpec, MixingParams,
    SubgroupOracle,
};

#[derive(Parser)]
#[command(
    name = "degcom",
    version,
    about = "Degree of commutativity and conjugacy ratio of finitely generated groups"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Degree-of-commutativity series (or a Monte-Carlo estimate with
    /// --mc-trials over a walk sequence)
    Dc(RunArgs),
    /// Conjugacy-ratio series over a ball sequence
    Cr(RunArgs),
    /// Coset-mass deviation curve |mu_n(xH) - 1/[G:H]|
    IndexCurve(RunArgs),
    /// Print the walk mixing bound ceil(1 + 32(1-c)^2 / (c^4 eps^2))
    MixBound {
        /// Minimum step probability, exact (e.g. 0.25 or 1/4)
        #[arg(long)]
        c: String,
        /// Target accuracy, exact
        #[arg(long)]
        eps: String,
    },
    /// Verification suites
    Verify {
        #[command(subcommand)]
        which: VerifyCmd,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Structural theorem checks over the whole finite catalog
    Catalog(RunArgs),
    /// Walk coset masses within eps at the mixing bound (exact chain)
    RwUniform(RunArgs),
    /// Pointwise conjugacy ratio vs degree of commutativity
    CrEqDc(RunArgs),
    /// Ball-sequence dc tail vs lazy-walk dc tail
    Independence(RunArgs),
}

const EXIT_CONFIG: u8 = 1;
const EXIT_RESOURCE: u8 = 2;
const EXIT_VERIFY: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version are normal exits; anything else is a config error
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(EXIT_CONFIG);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("degcom: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn degcom_exit(e: &Error) -> u8 {
    match e {
        Error::Resource(_) => EXIT_RESOURCE,
        _ => EXIT_CONFIG,
    }
}

fn emit(cfg: &RunConfig, body: &impl serde::Serialize, csv: Option<String>) -> Result<(), String> {
    let rendered = report::render_report(&cfg.config_json(), body);
    if let Some(path) = &cfg.json {
        std::fs::write(path, &rendered).map_err(|e| format!("writing {path}: {e}"))?;
    }
    if let (Some(path), Some(text)) = (&cfg.csv, csv) {
        std::fs::write(path, text).map_err(|e| format!("writing {path}: {e}"))?;
    }
    Ok(())
}

fn run(cmd: Cmd) -> Result<u8, String> {
    match cmd {
        Cmd::Dc(args) => cmd_dc(&resolve(&args)?),
        Cmd::Cr(args) => cmd_cr(&resolve(&args)?),
        Cmd::IndexCurve(args) => cmd_index_curve(&resolve(&args)?),
        Cmd::MixBound { c, eps } => {
            let params = MixingParams::new(
                parse_rational(&c).map_err(|e| e.to_string())?,
                parse_rational(&eps).map_err(|e| e.to_string())?,
            )
            .map_err(|e| e.to_string())?;
            let n = mixing_bound(&params).map_err(|e| e.to_string())?;
            println!("{n}");
            Ok(0)
        }
        Cmd::Verify { which } => match which {
            VerifyCmd::Catalog(args) => cmd_verify_catalog(&resolve(&args)?),
            VerifyCmd::RwUniform(args) => cmd_verify_rw(&resolve(&args)?),
            VerifyCmd::CrEqDc(args) => cmd_verify_cr_eq_dc(&resolve(&args)?),
            VerifyCmd::Independence(args) => cmd_verify_independence(&resolve(&args)?),
        },
    }
}

fn cmd_dc(cfg: &RunConfig) -> Result<u8, String> {
    let spec = cfg.group_spec()?;
    let (lo, hi) = cfg.range();
    let caps = cfg.caps();
    if cfg.mc_trials > 0 {
        if cfg.seq != "walk" {
            return Err("--mc-trials needs --seq walk".to_string());
        }
        let step =
            Measure::lazy_uniform_step(&spec, spec.default_genset()).map_err(|e| e.to_string())?;
        let est = match dc_montecarlo(&step, hi, cfg.mc_trials, cfg.seed, &caps) {
            Ok(e) => e,
            Err(e) => return Ok(degcom_exit(&e)),
        };
        println!(
            "dc[{}] walk n={} mc: mean {:.6} ci [{:.6}, {:.6}] ({} trials, seed {})",
            spec.name(),
            hi,
            est.mean,
            est.ci_low,
            est.ci_high,
            est.trials,
            est.seed
        );
        emit(cfg, &report::mc_json(spec.name(), hi, &est), None)?;
        return Ok(0);
    }
    let seq = cfg.sequence(&spec)?;
    let rep = match dc_sequence(&spec, &seq, lo..=hi, cfg.tail, &caps) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("degcom: {e}");
            return Ok(degcom_exit(&e));
        }
    };
    println!(
        "dc[{}] {} n={}..{}: tail max {:.6} min {:.6} over last {}",
        spec.name(),
        cfg.seq,
        lo,
        hi,
        rep.tail_max.to_f64(),
        rep.tail_min.to_f64(),
        rep.tail_window
    );
    emit(
        cfg,
        &report::dc_report_json(spec.name(), &cfg.seq, &rep),
        Some(report::dc_report_csv(&rep)),
    )?;
    Ok(0)
}

fn cmd_cr(cfg: &RunConfig) -> Result<u8, String> {
    let spec = cfg.group_spec()?;
    let (lo, hi) = cfg.range();
    let seq = MeasureSeqSpec::BallUniform(spec.default_genset().clone());
    let rep = match cr_sequence(&spec, &seq, lo..=hi, cfg.tail, &cfg.caps()) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("degcom: {e}");
            return Ok(degcom_exit(&e));
        }
    };
    println!(
        "cr[{}] ball n={}..{}: tail max {:.6} min {:.6} over last {}",
        spec.name(),
        lo,
        hi,
        rep.tail_max.to_f64(),
        rep.tail_min.to_f64(),
        rep.tail_window
    );
    emit(
        cfg,
        &report::cr_report_json(spec.name(), "ball", &rep),
        Some(report::cr_report_csv(&rep)),
    )?;
    Ok(0)
}

fn cmd_index_curve(cfg: &RunConfig) -> Result<u8, String> {
    let spec = cfg.group_spec()?;
    let sub = cfg
        .subgroup
        .as_deref()
        .ok_or_else(|| "index-curve needs --subgroup".to_string())?;
    let h = SubgroupOracle::parse(&spec, sub, cfg.coset_cap).map_err(|e| e.to_string())?;
    let probes = cfg.probe_elements(&spec)?;
    let (lo, hi) = cfg.range();
    let seq = cfg.sequence(&spec)?;
    let curve = match index_measurement_curve(&spec, &seq, &h, &probes, lo..=hi, &cfg.caps()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("degcom: {e}");
            return Ok(degcom_exit(&e));
        }
    };
    let last = curve.points.last().expect("nonempty range");
    println!(
        "index-curve[{}] {} subgroup {} (index {}): final deviations {:?}",
        spec.name(),
        cfg.seq,
        curve.subgroup,
        curve.index,
        last.deviations.iter().map(|d| d.to_f64()).collect::<Vec<_>>()
    );
    emit(
        cfg,
        &report::index_curve_json(spec.name(), &cfg.seq, &curve),
        Some(report::index_curve_csv(&curve)),
    )?;
    Ok(0)
}

fn cmd_verify_catalog(cfg: &RunConfig) -> Result<u8, String> {
    let mut verdicts = degcom::finite::verify_catalog();
    verdicts.extend(degcom::finite::verify_translates_catalog(4, 125, cfg.seed));
    let failures: Vec<_> = verdicts.iter().filter(|v| !v.pass).collect();
    for f in &failures {
        eprintln!("FAIL {} on {}: {}", f.check, f.group, f.details);
    }
    println!(
        "verify catalog: {} checks, {} failures",
        verdicts.len(),
        failures.len()
    );
    emit(cfg, &report::verdicts_json(&verdicts), None)?;
    Ok(if failures.is_empty() { 0 } else { EXIT_VERIFY })
}

fn cmd_verify_rw(cfg: &RunConfig) -> Result<u8, String> {
    let eps = cfg.epsilon()?;
    let cases: Vec<(degcom::GroupSpec, String)> = match (&cfg.group, &cfg.subgroup) {
        (Some(_), Some(sub)) => vec![(cfg.group_spec()?, sub.clone())],
        (None, None) => vec![
            (
                degcom::group::words::lookup_group("z12").map_err(|e| e.to_string())?,
                "gens:g^3".to_string(),
            ),
            (
                degcom::group::words::lookup_group("d4").map_err(|e| e.to_string())?,
                "center".to_string(),
            ),
        ],
        _ => return Err("rw-uniform needs both --group and --subgroup (or neither)".to_string()),
    };
    let mut all_pass = true;
    let mut reports = Vec::new();
    for (spec, sub) in cases {
        let h = SubgroupOracle::parse(&spec, &sub, cfg.coset_cap).map_err(|e| e.to_string())?;
        let step =
            Measure::lazy_uniform_step(&spec, spec.default_genset()).map_err(|e| e.to_string())?;
        let probes = cfg.probe_elements(&spec)?;
        let rep = verify_uniform_measurement(&spec, &step, &[h], &eps, &probes, &cfg.caps())
            .map_err(|e| e.to_string())?;
        for e in &rep.entries {
            println!(
                "rw-uniform[{}] {} index {}: n* = {}, certified at {} (pass: {})",
                spec.name(),
                e.subgroup,
                e.index,
                e.n_star,
                e.certified_n.map_or("-".to_string(), |n| n.to_string()),
                e.pass
            );
        }
        all_pass &= rep.pass;
        reports.push(report::uniformity_json(&rep));
    }
    emit(cfg, &reports, None)?;
    Ok(if all_pass { 0 } else { EXIT_VERIFY })
}

fn cmd_verify_cr_eq_dc(cfg: &RunConfig) -> Result<u8, String> {
    let spec = match &cfg.group {
        Some(_) => cfg.group_spec()?,
        None => degcom::group::words::lookup_group("dinf").map_err(|e| e.to_string())?,
    };
    let n = if cfg.n == "1..12" { 200 } else { cfg.range().1 };
    let tol = cfg.tol.unwrap_or(0.05);
    let seq = MeasureSeqSpec::BallUniform(spec.default_genset().clone());
    let cmp = degcom::conj::verify_cr_eq_dc(&spec, &seq, n, tol, &cfg.caps())
        .map_err(|e| e.to_string())?;
    println!(
        "cr-eq-dc[{}] n={}: cr {:.6} dc {:.6} |diff| {:.6} tol {} -> {}",
        spec.name(),
        n,
        cmp.cr.to_f64(),
        cmp.dc.to_f64(),
        cmp.diff,
        tol,
        if cmp.pass { "pass" } else { "FAIL" }
    );
    #[derive(serde::Serialize)]
    struct CmpJson {
        group: String,
        n: u64,
        cr: f64,
        dc: f64,
        diff: f64,
        tol: f64,
        pass: bool,
    }
    emit(
        cfg,
        &CmpJson {
            group: spec.name().to_string(),
            n,
            cr: cmp.cr.to_f64(),
            dc: cmp.dc.to_f64(),
            diff: cmp.diff,
            tol,
            pass: cmp.pass,
        },
        None,
    )?;
    Ok(if cmp.pass { 0 } else { EXIT_VERIFY })
}

fn cmd_verify_independence(cfg: &RunConfig) -> Result<u8, String> {
    let spec = match &cfg.group {
        Some(_) => cfg.group_spec()?,
        None => degcom::group::words::lookup_group("dinf").map_err(|e| e.to_string())?,
    };
    let tol = cfg.tol.unwrap_or(0.02);
    let caps = cfg.caps();
    // ball tail over [150, 200]; long lazy walk in float mode over
    // [500, 560], where the slowly decaying walk dc has caught up
    let (ball_lo, ball_hi, ball_win) = (150u64, 200u64, 51usize);
    let (walk_lo, walk_hi, walk_win) = (500u64, 560u64, 61usize);
    let ball_seq = MeasureSeqSpec::BallUniform(spec.default_genset().clone());
    let ball_rep = dc_sequence(&spec, &ball_seq, ball_lo..=ball_hi, ball_win, &caps)
        .map_err(|e| e.to_string())?;
    let step = Measure::lazy_uniform_step(&spec, spec.default_genset())
        .map_err(|e| e.to_string())?
        .to_float();
    let walk_seq = MeasureSeqSpec::WalkPower(step);
    let walk_rep = dc_sequence(&spec, &walk_seq, walk_lo..=walk_hi, walk_win, &caps)
        .map_err(|e| e.to_string())?;
    let gap_max = (ball_rep.tail_max.to_f64() - walk_rep.tail_max.to_f64()).abs();
    let gap_min = (ball_rep.tail_min.to_f64() - walk_rep.tail_min.to_f64()).abs();
    let pass = gap_max <= tol && gap_min <= tol;
    println!(
        "independence[{}]: ball tail [{:.6}, {:.6}] walk tail [{:.6}, {:.6}] gaps ({:.4}, {:.4}) tol {} -> {}",
        spec.name(),
        ball_rep.tail_min.to_f64(),
        ball_rep.tail_max.to_f64(),
        walk_rep.tail_min.to_f64(),
        walk_rep.tail_max.to_f64(),
        gap_min,
        gap_max,
        tol,
        if pass { "pass" } else { "FAIL" }
    );
    #[derive(serde::Serialize)]
    struct IndepJson {
        group: String,
        ball: report::DcReportJson,
        walk: report::DcReportJson,
        gap_max: f64,
        gap_min: f64,
        tol: f64,
        pass: bool,
    }
    emit(
        cfg,
        &IndepJson {
            group: spec.name().to_string(),
            ball: report::dc_report_json(spec.name(), "ball", &ball_rep),
            walk: report::dc_report_json(spec.name(), "walk", &walk_rep),
            gap_max,
            gap_min,
            tol,
            pass,
        },
        None,
    )?;
    Ok(if pass { 0 } else { EXIT_VERIFY })
}
