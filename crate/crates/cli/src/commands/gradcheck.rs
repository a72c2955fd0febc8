use std::fmt::Write as _;
use std::path::Path;

use pecl_nn::gradcheck::{run_selected, CheckConfig, CheckReport, GradCheckRegistry, TOLERANCE};

use super::{create_dir, write_json};
use crate::manifest::{in_dir, ManifestBuilder};
use crate::{CliError, RunManifest};

/// Network cases plus the loss.
pub fn registry() -> GradCheckRegistry {
    let mut r = GradCheckRegistry::default();
    pecl_train::loss::register_checks(&mut r);
    r
}

pub fn check(module: &str) -> Result<Vec<CheckReport>, CliError> {
    let cfg = CheckConfig::default();
    run_selected(&registry(), module, &cfg).map_err(|e| match e {
        pecl_nn::NnError::Unknown { .. } => CliError::Input(e.to_string()),
        e => CliError::Internal(e.to_string()),
    })
}

pub fn render(reports: &[CheckReport]) -> String {
    let mut s = format!("{:<18} {:>8} {:>12}  result\n", "case", "probes", "max rel err");
    for r in reports {
        let probes: usize = r.tensors.iter().map(|t| t.probed).sum();
        let _ = writeln!(
            s,
            "{:<18} {:>8} {:>12.3e}  {}",
            r.case,
            probes,
            r.max_rel_error,
            if r.passed { "PASS" } else { "FAIL" }
        );
    }
    s
}

pub fn run(module: &str, out: Option<&Path>, argv: &[String]) -> Result<RunManifest, CliError> {
    let cfg = CheckConfig::default();
    let mut m = ManifestBuilder::new(
        "gradcheck",
        argv,
        serde_json::json!({ "module": module, "eps": cfg.eps, "tolerance": TOLERANCE }),
    )?;
    m.seed("probe", cfg.seed);
    let reports = check(module)?;
    print!("{}", render(&reports));
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.case.as_str()).collect();
    if let Some(dir) = out {
        create_dir(dir)?;
        let p = dir.join("gradcheck.json");
        write_json(&p, &reports)?;
        m.output(&p);
    }
    m.results(serde_json::json!({ "cases": reports.len(), "failed": failed }));
    let manifest = m.emit(out.map(in_dir))?;
    if !failed.is_empty() {
        return Err(CliError::Verification(format!("gradient check failed: {}", failed.join(", "))));
    }
    Ok(manifest)
}
