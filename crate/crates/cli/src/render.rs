//! Human-readable rendering of a report.

use std::fmt::Write;

use serde_json::Value;

use utgrade::analysis::Status;

use crate::config::Diagnostic;
use crate::job::Report;

pub fn text(report: &Report) -> String {
    let mut out = String::new();
    let cfg = &report.config_echo;
    let _ = writeln!(out, "job: n = {}, {}, {}, {} tasks", cfg.n, cfg.field, cfg.product, cfg.tasks.len());
    for task in cfg.tasks.iter().map(|t| t.name()) {
        let Some(result) = report.results.get(task) else { continue };
        let _ = writeln!(out, "\n[{task}]");
        render_value(&mut out, result, 1);
        let mut any = false;
        for a in report.assertions.iter().filter(|a| a.task == task) {
            if !any {
                let _ = writeln!(out, "  assertions:");
                any = true;
            }
            let status = match a.assertion.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            let _ = write!(out, "    {status} {}: {}", a.assertion.id, a.assertion.statement);
            match &a.assertion.witness {
                Some(w) => {
                    let _ = writeln!(out, " ({w})");
                }
                None => out.push('\n'),
            }
        }
    }
    if !report.timing.work.is_empty() {
        let _ = writeln!(out, "\nwork:");
        for (task, w) in &report.timing.work {
            let _ = writeln!(
                out,
                "  {task}: {} inner candidates, {} kept, {} psi tuples, {} diagonal candidates, {} sampled pairs, {} full-scan maps",
                w.inner_candidates, w.kept_candidates, w.psi_tuples, w.diagonal_candidates, w.sampled_pairs, w.full_scan_maps
            );
        }
    }
    if let Some(ms) = &report.timing.wall_clock_ms {
        let _ = writeln!(out, "\nwall clock:");
        for (task, t) in ms {
            let _ = writeln!(out, "  {task}: {t} ms");
        }
    }
    let failed = report.failed_assertions().count();
    let _ = writeln!(out, "\n{} assertions, {failed} failed", report.assertions.len());
    if report.incomplete {
        let _ = writeln!(out, "INCOMPLETE");
    }
    if let Some(e) = &report.error {
        let _ = writeln!(out, "error: {e}");
    }
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(format!("[{}]", items.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn render_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render_value(out, x, depth + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        render_value(out, x, depth + 1);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}

pub fn diagnostics(diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| format!("error: {d}\n")).collect()
}
