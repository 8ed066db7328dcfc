//! JSON and CSV renderings of reports. JSON output is deterministic:
//! struct field order is fixed and every report embeds the tool version
//! and the caller's config for reproducibility.

use serde::Serialize;

use crate::conj::CrReport;
use crate::coset::{IndexCurve, UniformityReport};
use crate::dc::{DcReport, McEstimate};
use crate::finite::Verdict;
use crate::scalar::Scalar;

pub const TOOL_NAME: &str = "degcom";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
struct ScalarJson {
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<String>,
}

impl From<&Scalar> for ScalarJson {
    fn from(s: &Scalar) -> Self {
        ScalarJson {
            value: s.to_f64(),
            exact: s.exact_string(),
        }
    }
}

#[derive(Serialize)]
pub struct DcPointJson {
    n: u64,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<String>,
    support: u64,
}

#[derive(Serialize)]
pub struct TailJson {
    window: usize,
    max: f64,
    min: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_exact: Option<String>,
}

#[derive(Serialize)]
pub struct DcReportJson {
    group: String,
    sequence: String,
    points: Vec<DcPointJson>,
    tail: TailJson,
}

pub fn dc_report_json(group: &str, sequence: &str, rep: &DcReport) -> DcReportJson {
    DcReportJson {
        group: group.to_string(),
        sequence: sequence.to_string(),
        points: rep
            .points
            .iter()
            .map(|p| DcPointJson {
                n: p.n,
                value: p.value.to_f64(),
                exact: p.value.exact_string(),
                support: p.support,
            })
            .collect(),
        tail: TailJson {
            window: rep.tail_window,
            max: rep.tail_max.to_f64(),
            min: rep.tail_min.to_f64(),
            max_exact: rep.tail_max.exact_string(),
            min_exact: rep.tail_min.exact_string(),
        },
    }
}

pub fn dc_report_csv(rep: &DcReport) -> String {
    let mut out = String::from("n,value\n");
    for p in &rep.points {
        out.push_str(&format!("{},{}\n", p.n, p.value.to_f64()));
    }
    out
}

#[derive(Serialize)]
pub struct CrPointJson {
    n: u64,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<String>,
    support: u64,
    classes_meeting: u64,
    classes_contained: u64,
}

#[derive(Serialize)]
pub struct CrReportJson {
    group: String,
    sequence: String,
    points: Vec<CrPointJson>,
    tail: TailJson,
}

pub fn cr_report_json(group: &str, sequence: &str, rep: &CrReport) -> CrReportJson {
    CrReportJson {
        group: group.to_string(),
        sequence: sequence.to_string(),
        points: rep
            .points
            .iter()
            .map(|p| CrPointJson {
                n: p.n,
                value: p.value.to_f64(),
                exact: p.value.exact_string(),
                support: p.ball_size,
                classes_meeting: p.classes_meeting,
                classes_contained: p.classes_contained,
            })
            .collect(),
        tail: TailJson {
            window: rep.tail_window,
            max: rep.tail_max.to_f64(),
            min: rep.tail_min.to_f64(),
            max_exact: rep.tail_max.exact_string(),
            min_exact: rep.tail_min.exact_string(),
        },
    }
}

pub fn cr_report_csv(rep: &CrReport) -> String {
    let mut out = String::from("n,value,classes_meeting,classes_contained\n");
    for p in &rep.points {
        out.push_str(&format!(
            "{},{},{},{}\n",
            p.n,
            p.value.to_f64(),
            p.classes_meeting,
            p.classes_contained
        ));
    }
    out
}

#[derive(Serialize)]
pub struct IndexPointJson {
    n: u64,
    support: u64,
    masses: Vec<ScalarJson>,
    deviations: Vec<ScalarJson>,
}

#[derive(Serialize)]
pub struct IndexCurveJson {
    group: String,
    sequence: String,
    subgroup: String,
    index: String,
    probes: Vec<String>,
    points: Vec<IndexPointJson>,
}

pub fn index_curve_json(group: &str, sequence: &str, curve: &IndexCurve) -> IndexCurveJson {
    IndexCurveJson {
        group: group.to_string(),
        sequence: sequence.to_string(),
        subgroup: curve.subgroup.clone(),
        index: curve.index.to_string(),
        probes: curve.probes.clone(),
        points: curve
            .points
            .iter()
            .map(|p| IndexPointJson {
                n: p.n,
                support: p.support,
                masses: p.masses.iter().map(ScalarJson::from).collect(),
                deviations: p.deviations.iter().map(ScalarJson::from).collect(),
            })
            .collect(),
    }
}

pub fn index_curve_csv(curve: &IndexCurve) -> String {
    let mut out = String::from("n");
    for p in &curve.probes {
        out.push_str(&format!(",mass[{p}],dev[{p}]"));
    }
    out.push('\n');
    for p in &curve.points {
        out.push_str(&p.n.to_string());
        for (m, d) in p.masses.iter().zip(&p.deviations) {
            out.push_str(&format!(",{},{}", m.to_f64(), d.to_f64()));
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
pub struct McJson {
    group: String,
    n: u64,
    trials: u64,
    seed: u64,
    mean: f64,
    ci_low: f64,
    ci_high: f64,
}

pub fn mc_json(group: &str, n: u64, est: &McEstimate) -> McJson {
    McJson {
        group: group.to_string(),
        n,
        trials: est.trials,
        seed: est.seed,
        mean: est.mean,
        ci_low: est.ci_low,
        ci_high: est.ci_high,
    }
}

#[derive(Serialize)]
pub struct VerdictJson {
    check: String,
    group: String,
    pass: bool,
    details: String,
}

pub fn verdicts_json(vs: &[Verdict]) -> Vec<VerdictJson> {
    vs.iter()
        .map(|v| VerdictJson {
            check: v.check.clone(),
            group: v.group.clone(),
            pass: v.pass,
            details: v.details.clone(),
        })
        .collect()
}

#[derive(Serialize)]
pub struct UniformityEntryJson {
    subgroup: String,
    index: usize,
    n_star: u64,
    certified_n: Option<u64>,
    tv_at_certified: Option<ScalarJson>,
    probe_deviations: Vec<(String, ScalarJson)>,
    direct_dev_at_n_star: Option<ScalarJson>,
    direct_dev_at_2n_star: Option<ScalarJson>,
    pass: bool,
}

#[derive(Serialize)]
pub struct UniformityJson {
    c: ScalarJson,
    epsilon: ScalarJson,
    entries: Vec<UniformityEntryJson>,
    pass: bool,
}

pub fn uniformity_json(rep: &UniformityReport) -> UniformityJson {
    UniformityJson {
        c: ScalarJson::from(&rep.c),
        epsilon: ScalarJson::from(&rep.epsilon),
        entries: rep
            .entries
            .iter()
            .map(|e| UniformityEntryJson {
                subgroup: e.subgroup.clone(),
                index: e.index,
                n_star: e.n_star,
                certified_n: e.certified_n,
                tv_at_certified: e.tv_at_certified.as_ref().map(ScalarJson::from),
                probe_deviations: e
                    .probe_deviations
                    .iter()
                    .map(|(p, s)| (p.clone(), ScalarJson::from(s)))
                    .collect(),
                direct_dev_at_n_star: e
                    .direct
                    .as_ref()
                    .map(|d| ScalarJson::from(&d.max_dev_at_n_star)),
                direct_dev_at_2n_star: e
                    .direct
                    .as_ref()
                    .map(|d| ScalarJson::from(&d.max_dev_at_2n_star)),
                pass: e.pass,
            })
            .collect(),
        pass: rep.pass,
    }
}

/// Wraps a report body with the tool banner and the caller's config;
/// identical config and body give byte-identical output.
pub fn render_report<T: Serialize>(config: &serde_json::Value, body: &T) -> String {
    let mut root = serde_json::Map::new();
    root.insert(
        "tool".to_string(),
        serde_json::json!({ "name": TOOL_NAME, "version": TOOL_VERSION }),
    );
    root.insert("config".to_string(), config.clone());
    match serde_json::to_value(body).expect("report bodies serialize") {
        serde_json::Value::Object(m) => {
            for (k, v) in m {
                root.insert(k, v);
            }
        }
        other => {
            root.insert("report".to_string(), other);
        }
    }
    let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(root))
        .expect("json rendering");
    s.push('\n');
    s
}
