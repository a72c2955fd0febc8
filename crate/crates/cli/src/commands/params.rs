use std::fmt::Write as _;
use std::path::Path;

use pecl_nn::accounting::{count, relative_delta, CountReport, REFERENCE_BASELINE_TRAINABLE, REFERENCE_MACS, REFERENCE_PARAMS};
use pecl_nn::config::{preset, Topology};
use pecl_nn::SequenceRule;
use serde::Serialize;

use super::{create_dir, write_json};
use crate::manifest::{in_dir, ManifestBuilder};
use crate::{CliError, RunManifest};

/// Tolerance on the published total that at least one sequence rule must meet.
pub const TOTAL_TOLERANCE: f64 = 0.20;
/// Tolerance on the single-branch baseline.
pub const BASELINE_TOLERANCE: f64 = 0.02;

#[derive(Debug, Clone, Serialize)]
pub struct RuleAudit {
    pub report: CountReport,
    pub params_delta: f64,
    pub macs_delta: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamsAudit {
    pub preset: String,
    pub rules: Vec<RuleAudit>,
    pub baseline_trainable: usize,
    pub baseline_delta: f64,
}

impl ParamsAudit {
    /// The published totals describe the full-size network only, so the
    /// check applies to `b0`.
    pub fn passed(&self) -> bool {
        if self.preset != "b0" {
            return true;
        }
        self.baseline_delta.abs() <= BASELINE_TOLERANCE
            && self.rules.iter().any(|r| r.params_delta.abs() <= TOTAL_TOLERANCE)
    }
}

pub fn audit(name: &str, rules: &[SequenceRule]) -> Result<ParamsAudit, CliError> {
    let cfg = preset(name)?;
    let rules = if cfg.topology == Topology::Pecl { rules } else { &rules[..1] };
    let rules = rules
        .iter()
        .map(|&rule| {
            let report = count(&cfg.clone().with_rule(rule));
            RuleAudit {
                params_delta: relative_delta(report.total.trainable, REFERENCE_PARAMS),
                macs_delta: relative_delta(report.total.macs, REFERENCE_MACS),
                report,
            }
        })
        .collect();
    let baseline = count(&preset("baseline_se")?).total.trainable;
    Ok(ParamsAudit {
        preset: name.into(),
        rules,
        baseline_trainable: baseline,
        baseline_delta: relative_delta(baseline, REFERENCE_BASELINE_TRAINABLE),
    })
}

fn millions(n: usize) -> String {
    format!("{:.2}M", n as f64 / 1e6)
}

pub fn render(a: &ParamsAudit) -> String {
    let mut s = String::new();
    for r in &a.rules {
        let rep = &r.report;
        let _ = writeln!(s, "preset {}  lstm rule {}", rep.config, rep.rule);
        let _ = writeln!(s, "{:<16} {:>14} {:>10} {:>16}", "module", "trainable", "buffers", "MACs");
        for row in &rep.rows {
            let c = row.count;
            let _ = writeln!(s, "{:<16} {:>14} {:>10} {:>16}", row.module, c.trainable, c.buffers, c.macs);
        }
        let t = rep.total;
        let _ = writeln!(s, "{:<16} {:>14} {:>10} {:>16}", "total", t.trainable, t.buffers, t.macs);
        if a.preset == "b0" {
            let _ = writeln!(
                s,
                "vs published: params {} vs 23.42M ({:+.1}%), MACs {:.2}M vs 1324.82M ({:+.1}%)",
                millions(t.trainable),
                100.0 * r.params_delta,
                t.macs as f64 / 1e6,
                100.0 * r.macs_delta
            );
        }
        s.push('\n');
    }
    let _ = writeln!(
        s,
        "single-branch SE baseline: {} trainable ({}) vs 5.29M ({:+.2}%)",
        a.baseline_trainable,
        millions(a.baseline_trainable),
        100.0 * a.baseline_delta
    );
    s
}

pub fn run(name: &str, rule: Option<&str>, out: Option<&Path>, argv: &[String]) -> Result<RunManifest, CliError> {
    let rules = match rule {
        Some(r) => vec![SequenceRule::parse(r).map_err(|e| CliError::Input(e.to_string()))?],
        None => vec![SequenceRule::HxC, SequenceRule::COnly],
    };
    let mut m = ManifestBuilder::new("params", argv, serde_json::json!({ "preset": name, "rules": rules }))?;
    let a = audit(name, &rules)?;
    print!("{}", render(&a));
    if let Some(dir) = out {
        create_dir(dir)?;
        let p = dir.join("params.json");
        write_json(&p, &a)?;
        m.output(&p);
    }
    m.results(serde_json::json!({
        "passed": a.passed(),
        "baseline_trainable": a.baseline_trainable,
        "totals": a.rules.iter().map(|r| (r.report.rule.clone(), r.report.total)).collect::<Vec<_>>(),
    }));
    let manifest = m.emit(out.map(in_dir))?;
    if !a.passed() {
        return Err(CliError::Verification(format!(
            "no sequence rule within {:.0}% of 23.42M or baseline outside {:.0}% of 5.29M",
            100.0 * TOTAL_TOLERANCE,
            100.0 * BASELINE_TOLERANCE
        )));
    }
    Ok(manifest)
}
