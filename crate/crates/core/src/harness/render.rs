use super::experiment::ExperimentReport;

/// Human-readable summary of a report.
pub fn render_report(report: &ExperimentReport) -> String {
    let c = &report.config;
    let s = &report.summary;
    let mut out = format!(
        "# {} on {} (n={}, t={}, backend {})\n\n",
        c.attack,
        c.construction.variant.name(),
        c.construction.n,
        c.t,
        c.backend
    );
    out.push_str(&format!("convention: {}\n\n", report.convention));
    out.push_str(&format!(
        "success {}/{} = {:.4}, Wilson 95% [{:.4}, {:.4}]\n",
        s.successes, s.trials, s.success_rate, s.wilson_low, s.wilson_high
    ));
    if let Some(b) = &report.bounds {
        out.push_str(&format!(
            "bounds: c′={}, iterations {} (closed form) / {:.2} (floor form), success ≥ {:.6}\n",
            b.c_prime, b.iterations_closed_form, b.iterations_floor, b.success_lower_bound
        ));
    }
    if !report.trials.is_empty() {
        let n = report.trials.len() as f64;
        let mean = |f: fn(&super::TrialRecord) -> u64| report.trials.iter().map(f).sum::<u64>() as f64 / n;
        out.push_str(&format!(
            "mean queries: classical {:.1}, quantum {:.1}, public {:.1}\n",
            mean(|r| r.classical_queries),
            mean(|r| r.quantum_queries),
            mean(|r| r.public_evals)
        ));
    }
    out
}
