//! Run configuration: defaults, an optional TOML config file, and
//! command-line flags (flags win over the file).

use clap::Args;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use degcom::group::words::{lookup_group, parse_element, parse_genset};
use degcom::{parse_rational, Caps, Element, GenSet, GroupSpec, Measure, MeasureSeqSpec};

/// Fixed default seed, embedded in every report.
pub const DEFAULT_SEED: u64 = 17;

#[derive(Args, Debug, Default, Clone)]
pub struct RunArgs {
    /// TOML config file; flags override its fields
    #[arg(long)]
    pub config: Option<String>,
    /// Group name: z, z^2, heisenberg, dinf, f2, zxf2, or a catalog
    /// table (q8, s3, d4, z12, ...)
    #[arg(long)]
    pub group: Option<String>,
    /// Generating set as words (e.g. "e" "t" "t^-1" "s"); defaults per family
    #[arg(long, num_args = 1..)]
    pub gens: Option<Vec<String>>,
    /// Measure sequence: ball | walk
    #[arg(long)]
    pub seq: Option<String>,
    /// Radius/step range "A..B" or a single "N"
    #[arg(long)]
    pub n: Option<String>,
    /// Tail window for limsup/liminf statistics
    #[arg(long)]
    pub tail: Option<usize>,
    /// RNG seed for sampling paths
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte-Carlo trials (0 = exact computation)
    #[arg(long)]
    pub mc_trials: Option<u64>,
    /// Subgroup: even-sum | center | translations | factor:I | gens:w1,w2
    #[arg(long)]
    pub subgroup: Option<String>,
    /// Probe elements as words (default: identity and first generator)
    #[arg(long, num_args = 1..)]
    pub probe: Option<Vec<String>>,
    /// Weight mode: rational | float
    #[arg(long)]
    pub mode: Option<String>,
    /// Accuracy for uniformity verification (exact rational, e.g. 0.05 or 1/20)
    #[arg(long)]
    pub eps: Option<String>,
    /// Tolerance for verification comparisons
    #[arg(long)]
    pub tol: Option<f64>,
    /// Ball enumeration atom cap
    #[arg(long)]
    pub ball_cap: Option<usize>,
    /// Pair-count cap for quadratic dc paths
    #[arg(long)]
    pub pairs_cap: Option<u64>,
    /// Coset enumeration cap
    #[arg(long)]
    pub coset_cap: Option<usize>,
    /// Write the JSON report here
    #[arg(long)]
    pub json: Option<String>,
    /// Write the CSV series here
    #[arg(long)]
    pub csv: Option<String>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    group: Option<String>,
    gens: Option<Vec<String>>,
    seq: Option<String>,
    n: Option<String>,
    tail: Option<usize>,
    seed: Option<u64>,
    mc_trials: Option<u64>,
    subgroup: Option<String>,
    probes: Option<Vec<String>>,
    mode: Option<String>,
    eps: Option<String>,
    tol: Option<f64>,
    ball_cap: Option<usize>,
    pairs_cap: Option<u64>,
    coset_cap: Option<usize>,
    json: Option<String>,
    csv: Option<String>,
}

/// Fully resolved configuration; serialized verbatim into reports.
#[derive(Serialize, Debug, Clone)]
pub struct RunConfig {
    pub group: Option<String>,
    pub gens: Option<Vec<String>>,
    pub seq: String,
    pub n: String,
    pub tail: usize,
    pub seed: u64,
    pub mc_trials: u64,
    pub subgroup: Option<String>,
    pub probes: Option<Vec<String>>,
    pub mode: String,
    pub eps: String,
    pub tol: Option<f64>,
    pub ball_cap: usize,
    pub pairs_cap: u64,
    pub coset_cap: usize,
    #[serde(skip)]
    pub json: Option<String>,
    #[serde(skip)]
    pub csv: Option<String>,
}

pub fn resolve(args: &RunArgs) -> Result<RunConfig, String> {
    let file: FileConfig = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {path}: {e}"))?;
            toml::from_str(&text).map_err(|e| format!("bad config {path}: {e}"))?
        }
        None => FileConfig::default(),
    };
    let caps = Caps::default();
    let n = args.n.clone().or(file.n).unwrap_or_else(|| "1..12".to_string());
    let (lo, hi) = parse_range(&n)?;
    let span = (hi.saturating_sub(lo) + 1) as usize;
    Ok(RunConfig {
        group: args.group.clone().or(file.group),
        gens: args.gens.clone().or(file.gens),
        seq: args.seq.clone().or(file.seq).unwrap_or_else(|| "ball".to_string()),
        n,
        tail: args.tail.or(file.tail).unwrap_or_else(|| span.div_ceil(4)),
        seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        mc_trials: args.mc_trials.or(file.mc_trials).unwrap_or(0),
        subgroup: args.subgroup.clone().or(file.subgroup),
        probes: args.probe.clone().or(file.probes),
        mode: args.mode.clone().or(file.mode).unwrap_or_else(|| "rational".to_string()),
        eps: args.eps.clone().or(file.eps).unwrap_or_else(|| "0.05".to_string()),
        tol: args.tol.or(file.tol),
        ball_cap: args.ball_cap.or(file.ball_cap).unwrap_or(caps.ball_atoms),
        pairs_cap: args.pairs_cap.or(file.pairs_cap).unwrap_or(caps.pairs),
        coset_cap: args.coset_cap.or(file.coset_cap).unwrap_or(caps.coset),
        json: args.json.clone().or(file.json),
        csv: args.csv.clone().or(file.csv),
    })
}

pub fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once("..") {
        let lo: u64 = a.trim().parse().map_err(|_| format!("bad range {s:?}"))?;
        let hi: u64 = b.trim().parse().map_err(|_| format!("bad range {s:?}"))?;
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok((lo, hi))
    } else {
        let n: u64 = s.parse().map_err(|_| format!("bad range {s:?}"))?;
        Ok((n, n))
    }
}

impl RunConfig {
    pub fn caps(&self) -> Caps {
        Caps {
            ball_atoms: self.ball_cap,
            support_atoms: self.ball_cap,
            pairs: self.pairs_cap,
            coset: self.coset_cap,
            class: Caps::default().class,
        }
    }

    pub fn range(&self) -> (u64, u64) {
        parse_range(&self.n).expect("validated in resolve")
    }

    pub fn group_spec(&self) -> Result<GroupSpec, String> {
        let name = self
            .group
            .as_deref()
            .ok_or_else(|| "missing --group".to_string())?;
        let spec = lookup_group(name).map_err(|e| e.to_string())?;
        match &self.gens {
            Some(words) => {
                let gens: GenSet =
                    parse_genset(&spec, words).map_err(|e| e.to_string())?;
                Ok(spec.with_genset(gens))
            }
            None => Ok(spec),
        }
    }

    pub fn sequence(&self, spec: &GroupSpec) -> Result<MeasureSeqSpec, String> {
        match self.seq.as_str() {
            "ball" => Ok(MeasureSeqSpec::BallUniform(spec.default_genset().clone())),
            "walk" => {
                let step = Measure::lazy_uniform_step(spec, spec.default_genset())
                    .map_err(|e| e.to_string())?;
                let step = match self.mode.as_str() {
                    "rational" => step,
                    "float" => step.to_float(),
                    other => return Err(format!("unknown mode {other:?}")),
                };
                Ok(MeasureSeqSpec::WalkPower(step))
            }
            other => Err(format!("unknown sequence kind {other:?} (ball | walk)")),
        }
    }

    pub fn probe_elements(&self, spec: &GroupSpec) -> Result<Vec<Element>, String> {
        match &self.probes {
            Some(words) => words
                .iter()
                .map(|w| parse_element(spec, w).map_err(|e| e.to_string()))
                .collect(),
            None => {
                let mut out = vec![spec.identity()];
                if let Some(g) = spec
                    .default_genset()
                    .elements()
                    .iter()
                    .find(|g| !spec.is_identity(g))
                {
                    out.push(g.clone());
                }
                Ok(out)
            }
        }
    }

    pub fn epsilon(&self) -> Result<BigRational, String> {
        parse_rational(&self.eps).map_err(|e| e.to_string())
    }

    pub fn config_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}
