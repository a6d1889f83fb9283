//! The four subcommands. Each returns an [`Outcome`] holding the file bodies
//! it produced and the verdict that decides the exit code; nothing here
//! touches the filesystem.

use std::fmt::Write as _;

use nonclassic::closed_forms::{closed_form, Criterion, ShortTimeInput};
use nonclassic::evolution::write_trajectory_csv;
use nonclassic::oracles::log_log_slope;
use nonclassic::study::{run_exact, ExactRun, RunRequest};
use nonclassic::{sweep, CriterionReport, Mode, Preset, ProcessSpec};

use crate::config::{Resolved, RunConfig};
use crate::error::CliError;
use crate::selftest;

/// Result of a subcommand, before anything is written.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub command: &'static str,
    /// `(default file name, contents)`.
    pub files: Vec<(String, String)>,
    pub summary: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pass,
    /// Leakage or convergence outside bounds (exit 3).
    Numerical(String),
    /// A claim checked by the command did not hold (exit 4).
    Claim(String),
}

impl Verdict {
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Numerical(_) => 3,
            Verdict::Claim(_) => 4,
        }
    }

    fn merge(self, other: Verdict) -> Verdict {
        match (&self, &other) {
            (Verdict::Pass, _) => other,
            (Verdict::Numerical(_), Verdict::Claim(_)) => other,
            _ => self,
        }
    }
}

pub(crate) fn num(x: f64) -> String {
    format!("{x:.17e}")
}

fn request(resolved: &Resolved, spec: ProcessSpec, modes: Vec<Mode>) -> RunRequest {
    let cfg = &resolved.config;
    RunRequest {
        spec,
        alpha_sq: cfg.alpha_sq,
        times: resolved.times.clone(),
        cutoffs: Some(resolved.cutoffs),
        l_max: cfg.l_max.max(2),
        modes,
        method: resolved.method,
        tolerance: cfg.evolution.tolerance,
    }
}

fn criterion_value(report: &CriterionReport, c: Criterion) -> f64 {
    match c {
        Criterion::D1 => report.d(1),
        Criterion::D2 => report.d(2),
        Criterion::BigD2 => report.big_d(2),
    }
    .expect("reports carry d(1), d(2) and D(2) when l_max >= 3")
}

fn diagnostics(out: &mut String, run: &ExactRun) {
    let _ = writeln!(
        out,
        "cutoffs: max_a={} max_b={}",
        run.cutoffs.max_a(),
        run.cutoffs.max_b()
    );
    let _ = writeln!(out, "initial truncation tail: {:.3e}", run.tail_mass);
    let _ = writeln!(out, "evolution method: {}", run.trajectory.method.name());
    let _ = writeln!(out, "max leakage: {:.3e}", run.trajectory.max_leakage());
    let _ = writeln!(out, "norm drift: {:.3e}", run.norm_drift);
    let _ = writeln!(out, "relative energy drift: {:.3e}", run.energy_drift);
    let _ = writeln!(out, "relative charge drift: {:.3e}", run.charge_drift);
    for w in &run.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
}

fn leakage_verdict(run: &ExactRun) -> Verdict {
    if run.trajectory.flagged {
        Verdict::Numerical(format!(
            "truncation leakage {:.3e} above ceiling {:.0e}",
            run.trajectory.max_leakage(),
            nonclassic::evolution::LEAKAGE_CEILING
        ))
    } else {
        Verdict::Pass
    }
}

/// Criteria `d(1..=l_max)` and `D(1..l_max)` along an exact trajectory.
pub fn cmd_criteria(config: &RunConfig) -> Result<Outcome, CliError> {
    let resolved = &config.resolve()?;
    let cfg = &resolved.config;
    let req = RunRequest {
        l_max: cfg.l_max,
        ..request(resolved, resolved.spec.clone(), resolved.modes.clone())
    };
    let run = run_exact(&req)?;
    let header = resolved.header("criteria");

    let mut csv = header.clone();
    let mut columns = vec!["time".to_string(), "mode".to_string()];
    columns.extend((1..=cfg.l_max).map(|l| format!("d{l}")));
    columns.extend((1..cfg.l_max).map(|o| format!("D{o}")));
    columns.push("leakage".into());
    csv.push_str(&columns.join(","));
    csv.push('\n');
    for (i, t) in resolved.times.iter().enumerate() {
        for mode in &resolved.modes {
            let r = &run.reports(*mode)[i];
            let mut row = vec![num(*t), mode.to_string()];
            row.extend(r.hoa.values().map(|v| num(*v)));
            row.extend(r.hosps.values().map(|v| num(*v)));
            row.push(num(r.leakage));
            csv.push_str(&row.join(","));
            csv.push('\n');
        }
    }

    let mut trajectory = header.clone().into_bytes();
    write_trajectory_csv(
        &mut trajectory,
        &run.trajectory,
        &resolved.spec,
        &resolved.modes,
    )?;

    let mut summary = header.clone();
    let _ = writeln!(summary, "process: {}", process_label(&resolved.spec));
    diagnostics(&mut summary, &run);
    for mode in &resolved.modes {
        let reports = run.reports(*mode);
        for l in 1..=cfg.l_max {
            let negative = reports.iter().filter(|r| r.d(l).unwrap() < 0.0).count();
            let min = reports
                .iter()
                .map(|r| r.d(l).unwrap())
                .fold(f64::INFINITY, f64::min);
            let _ = writeln!(
                summary,
                "mode {mode} d{l}: negative at {negative}/{} times, min {min:.6e}",
                reports.len()
            );
        }
        for o in 1..cfg.l_max {
            let negative = reports.iter().filter(|r| r.big_d(o).unwrap() < 0.0).count();
            let min = reports
                .iter()
                .map(|r| r.big_d(o).unwrap())
                .fold(f64::INFINITY, f64::min);
            let _ = writeln!(
                summary,
                "mode {mode} D{o}: negative at {negative}/{} times, min {min:.6e}",
                reports.len()
            );
        }
    }
    let verdict = leakage_verdict(&run);
    let _ = writeln!(summary, "verdict: {}", verdict_text(&verdict));

    let plot = format!("{header}{}", plot_criteria(cfg));
    Ok(finish(Outcome {
        command: "criteria",
        files: vec![
            ("criteria.csv".into(), csv),
            (
                "trajectory.csv".into(),
                String::from_utf8(trajectory).expect("CSV is UTF-8"),
            ),
            ("summary.txt".into(), summary),
            ("plot.gp".into(), plot),
        ],
        summary: String::new(),
        verdict,
    }))
}

fn finish(mut o: Outcome) -> Outcome {
    if let Some((_, s)) = o.files.iter().find(|(n, _)| n == "summary.txt") {
        o.summary = s.clone();
    }
    o
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Pass => "pass".into(),
        Verdict::Numerical(m) => format!("numerical failure: {m}"),
        Verdict::Claim(m) => format!("claim failed: {m}"),
    }
}

fn process_label(spec: &ProcessSpec) -> String {
    format!(
        "{} (m={}, n={}, omega1={}, omega2={}, g={:e})",
        spec.name.as_deref().unwrap_or("custom"),
        spec.m,
        spec.n,
        spec.omega1,
        spec.omega2,
        spec.g
    )
}

fn companion(p: Preset) -> Preset {
    match p {
        Preset::FiveWaveMixing => Preset::ThirdHarmonic,
        Preset::ThirdHarmonic => Preset::FiveWaveMixing,
    }
}

/// One exact-versus-closed-form comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRecord {
    pub time: f64,
    pub criterion: Criterion,
    pub exact: f64,
    pub closed_form: f64,
    pub abs_deviation: f64,
    /// `None` when `|closed_form| <= 1e-30`.
    pub rel_deviation: Option<f64>,
    pub leakage: f64,
}

impl ComparisonRecord {
    pub fn new(
        time: f64,
        criterion: Criterion,
        exact: f64,
        closed_form: f64,
        leakage: f64,
    ) -> Self {
        let abs_deviation = (exact - closed_form).abs();
        let rel_deviation = (closed_form.abs() > 1e-30).then(|| abs_deviation / closed_form.abs());
        Self {
            time,
            criterion,
            exact,
            closed_form,
            abs_deviation,
            rel_deviation,
            leakage,
        }
    }
}

/// Per-criterion convergence summary of a comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceFit {
    pub criterion: Criterion,
    /// Least-squares slope of `ln |residual|` against `ln t`; `None` with
    /// fewer than two usable points.
    pub order: Option<f64>,
    pub final_rel_deviation: Option<f64>,
}

pub fn comparison_records(
    preset: Preset,
    alpha_sq: f64,
    g: f64,
    run: &ExactRun,
) -> Vec<ComparisonRecord> {
    let mut out = Vec::new();
    for r in run.reports(Mode::A) {
        let input = ShortTimeInput::new(alpha_sq, g, r.time).expect("validated inputs");
        for c in Criterion::ALL {
            out.push(ComparisonRecord::new(
                r.time,
                c,
                criterion_value(r, c),
                closed_form(preset, c, &input),
                r.leakage,
            ));
        }
    }
    out
}

pub fn fit_convergence(records: &[ComparisonRecord]) -> Vec<ConvergenceFit> {
    Criterion::ALL
        .iter()
        .map(|&c| {
            let pts: Vec<&ComparisonRecord> = records
                .iter()
                .filter(|r| r.criterion == c && r.time > 0.0 && r.abs_deviation > 0.0)
                .collect();
            let order = (pts.len() >= 2).then(|| {
                let ts: Vec<f64> = pts.iter().map(|r| r.time).collect();
                let res: Vec<f64> = pts.iter().map(|r| r.abs_deviation).collect();
                log_log_slope(&ts, &res)
            });
            let final_rel_deviation = records
                .iter()
                .filter(|r| r.criterion == c)
                .max_by(|a, b| a.time.total_cmp(&b.time))
                .and_then(|r| r.rel_deviation);
            ConvergenceFit {
                criterion: c,
                order,
                final_rel_deviation,
            }
        })
        .collect()
}

/// Exact evolution against the closed forms of a preset process.
pub fn cmd_compare(config: &RunConfig) -> Result<Outcome, CliError> {
    let preset = config.preset().ok_or_else(|| {
        CliError::config("compare needs a preset process (five-wave-mixing or third-harmonic)")
    })?;
    let omega1 = config.process.omega1.unwrap_or(1.0);
    let specs: Vec<ProcessSpec> = [preset, companion(preset)]
        .iter()
        .map(|&p| ProcessSpec::preset(p, omega1, config.g))
        .collect::<Result<_, _>>()?;
    let resolved = &config.resolve_with(&specs)?;
    let cfg = &resolved.config;
    let runs = sweep::map(&specs, |s| {
        run_exact(&request(resolved, s.clone(), vec![Mode::A]))
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let (run, other) = (&runs[0], &runs[1]);

    let records = comparison_records(preset, cfg.alpha_sq, cfg.g, run);
    let fits = fit_convergence(&records);
    let header = resolved.header("compare");

    let mut csv = header.clone();
    csv.push_str("time,criterion,exact,closed_form,abs_dev,rel_dev,leakage\n");
    for r in &records {
        let rel = r.rel_deviation.map_or_else(|| "undefined".to_string(), num);
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            num(r.time),
            r.criterion.id(),
            num(r.exact),
            num(r.closed_form),
            num(r.abs_deviation),
            rel,
            num(r.leakage)
        );
    }

    let mut summary = header.clone();
    let _ = writeln!(summary, "process: {}", process_label(&resolved.spec));
    diagnostics(&mut summary, run);
    let [lo, hi] = cfg.compare.order_band;
    let mut verdict = leakage_verdict(run);
    for fit in &fits {
        let id = fit.criterion.id();
        match fit.order {
            Some(p) => {
                let ok = (lo..=hi).contains(&p);
                let _ = writeln!(
                    summary,
                    "{id}: fitted residual order {p:.4} (band [{lo}, {hi}]) {}",
                    if ok { "ok" } else { "OUT OF BAND" }
                );
                if !ok {
                    verdict = verdict.merge(Verdict::Numerical(format!(
                        "{id} residual order {p:.3} outside [{lo}, {hi}]"
                    )));
                }
            }
            None => {
                let _ = writeln!(
                    summary,
                    "{id}: fewer than two nonzero residuals, order not fitted"
                );
            }
        }
        if let Some(rel) = fit.final_rel_deviation {
            let ok = rel < cfg.compare.relative_tolerance;
            let _ = writeln!(
                summary,
                "{id}: relative deviation at final time {rel:.4e} (limit {}) {}",
                cfg.compare.relative_tolerance,
                if ok { "ok" } else { "EXCEEDED" }
            );
            if !ok {
                verdict = verdict.merge(Verdict::Claim(format!(
                    "{id} deviates by {rel:.3e} at the final time"
                )));
            }
        }
    }
    if let (Some(a), Some(b)) = (run.reports(Mode::A).last(), other.reports(Mode::A).last()) {
        let ratio = a.big_d(2).unwrap() / b.big_d(2).unwrap();
        let _ = writeln!(
            summary,
            "exact D2({}) / D2({}) at t={}: {ratio:.6}",
            preset.name(),
            companion(preset).name(),
            a.time
        );
    }
    if let Some(&t) = resolved.times.last() {
        if let Ok(input) = ShortTimeInput::new(cfg.alpha_sq, cfg.g, t) {
            if let Some(w) = input.validity_warning() {
                let _ = writeln!(summary, "warning: {w}");
            }
        }
    }
    let _ = writeln!(summary, "verdict: {}", verdict_text(&verdict));

    Ok(finish(Outcome {
        command: "compare",
        files: vec![
            ("compare.csv".into(), csv),
            ("summary.txt".into(), summary),
            ("plot.gp".into(), format!("{header}{}", plot_compare())),
        ],
        summary: String::new(),
        verdict,
    }))
}

/// Magnitudes `|d1|, |d2|, |D2|` for one process at one time.
fn magnitudes(values: [f64; 3]) -> [f64; 3] {
    values.map(f64::abs)
}

/// Five-wave mixing against third-harmonic generation at matched parameters.
pub fn cmd_depth(config: &RunConfig) -> Result<Outcome, CliError> {
    let presets = [Preset::FiveWaveMixing, Preset::ThirdHarmonic];
    let omega1 = config.process.omega1.unwrap_or(1.0);
    let specs: Vec<ProcessSpec> = presets
        .iter()
        .map(|&p| ProcessSpec::preset(p, omega1, config.g))
        .collect::<Result<_, _>>()?;
    let resolved = config.resolve_with(&specs)?;
    let runs = sweep::map(&specs, |s| {
        run_exact(&request(&resolved, s.clone(), vec![Mode::A]))
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let header = resolved.header("depth");
    let degenerate = config.alpha_sq == 0.0 || config.g == 0.0;

    let mut csv = header.clone();
    csv.push_str("time,source,fwm_abs_d1,thg_abs_d1,ratio_d1,fwm_abs_d2,thg_abs_d2,ratio_d2,fwm_abs_D2,thg_abs_D2,ratio_D2\n");
    let mut verdict = Verdict::Pass;
    for run in &runs {
        verdict = verdict.merge(leakage_verdict(run));
    }
    let mut worst_ratio_dev = [0.0f64; 3];
    for (i, &t) in resolved.times.iter().enumerate() {
        let input = ShortTimeInput::new(config.alpha_sq, config.g, t)?;
        let cf = presets.map(|p| magnitudes(Criterion::ALL.map(|c| closed_form(p, c, &input))));
        let ex = [0, 1].map(|k| {
            let r = &runs[k].reports(Mode::A)[i];
            magnitudes(Criterion::ALL.map(|c| criterion_value(r, c)))
        });
        for (source, [fwm, thg]) in [("closed_form", cf), ("exact", ex)] {
            let mut row = vec![num(t), source.to_string()];
            for c in 0..3 {
                let ratio = if thg[c] > 0.0 {
                    fwm[c] / thg[c]
                } else {
                    f64::NAN
                };
                row.extend([
                    num(fwm[c]),
                    num(thg[c]),
                    if ratio.is_nan() {
                        "undefined".into()
                    } else {
                        num(ratio)
                    },
                ]);
                if t > 0.0 && !degenerate {
                    if fwm[c] <= thg[c] || fwm[c].is_nan() {
                        verdict = verdict.merge(Verdict::Claim(format!(
                            "{source} |{}| not larger for five-wave mixing at t={t}",
                            Criterion::ALL[c].id()
                        )));
                    }
                    if source == "exact" && ratio.is_finite() {
                        worst_ratio_dev[c] = worst_ratio_dev[c].max((ratio - 2.0).abs() / 2.0);
                    }
                }
            }
            csv.push_str(&row.join(","));
            csv.push('\n');
        }
    }

    let mut summary = header.clone();
    let _ = writeln!(
        summary,
        "processes: five-wave-mixing vs third-harmonic at alpha_sq={} g={:e}",
        config.alpha_sq, config.g
    );
    for (p, run) in presets.iter().zip(&runs) {
        let _ = writeln!(summary, "[{}]", p.name());
        diagnostics(&mut summary, run);
    }
    if degenerate {
        let _ = writeln!(summary, "warning: alpha_sq or g is zero; every criterion vanishes and the comparison is degenerate");
    } else {
        for (c, dev) in Criterion::ALL.iter().zip(worst_ratio_dev) {
            let _ = writeln!(
                summary,
                "{}: closed-form ratio 2, exact ratio within {:.3e} relative of 2",
                c.id(),
                dev
            );
        }
    }
    let _ = writeln!(summary, "verdict: {}", verdict_text(&verdict));
    Ok(finish(Outcome {
        command: "depth",
        files: vec![
            ("depth.csv".into(), csv),
            ("summary.txt".into(), summary),
            ("plot.gp".into(), format!("{header}{}", plot_depth())),
        ],
        summary: String::new(),
        verdict,
    }))
}

/// Runs the invariant checks with the configured seed.
pub fn cmd_selftest(config: &RunConfig) -> Result<Outcome, CliError> {
    let resolved = config.resolve()?;
    let results = selftest::run_all(config.seed);
    let header = resolved.header("selftest");
    let mut csv = header.clone();
    csv.push_str("check,status,value,threshold\n");
    let mut summary = header;
    let mut failed = Vec::new();
    for r in &results {
        let status = if r.passed { "pass" } else { "fail" };
        let _ = writeln!(
            csv,
            "{},{status},{},{}",
            r.name,
            num(r.value),
            num(r.threshold)
        );
        let _ = writeln!(
            summary,
            "[{}] {}: {:.3e} (threshold {:.1e})",
            status.to_uppercase(),
            r.name,
            r.value,
            r.threshold
        );
        if !r.passed {
            failed.push(r.name.clone());
        }
    }
    let verdict = if failed.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Claim(format!("failed checks: {}", failed.join(", ")))
    };
    let _ = writeln!(summary, "verdict: {}", verdict_text(&verdict));
    Ok(finish(Outcome {
        command: "selftest",
        files: vec![
            ("selftest.csv".into(), csv),
            ("summary.txt".into(), summary),
        ],
        summary: String::new(),
        verdict,
    }))
}

fn plot_criteria(cfg: &RunConfig) -> String {
    let mut s = String::from(
        "# gnuplot script; run from the output directory\nset datafile separator ','\nset key autotitle columnhead\nset key left bottom\nset xlabel 't'\nset ylabel 'criterion value'\nset terminal pngcairo size 900,600\nset output 'criteria.png'\n",
    );
    let mut plots = Vec::new();
    for l in 1..=cfg.l_max {
        plots.push(format!("'criteria.csv' using 1:(strcol(2) eq 'A' ? ${} : 1/0) with linespoints title 'd{l} (A)'", l + 2));
    }
    for o in 1..cfg.l_max {
        plots.push(format!(
            "'criteria.csv' using 1:(strcol(2) eq 'A' ? ${} : 1/0) with linespoints title 'D{o} (A)'",
            cfg.l_max + o + 2
        ));
    }
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}

fn plot_compare() -> String {
    let mut s = String::from(
        "# gnuplot script; run from the output directory\nset datafile separator ','\nset key autotitle columnhead\nset logscale xy\nset xlabel 't'\nset ylabel '|exact - closed form|'\nset terminal pngcairo size 900,600\nset output 'compare.png'\n",
    );
    let plots: Vec<String> = Criterion::ALL
        .iter()
        .map(|c| format!("'compare.csv' using 1:(strcol(2) eq '{0}' ? $5 : 1/0) with linespoints title '{0}'", c.id()))
        .collect();
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}

fn plot_depth() -> String {
    String::from(
        "# gnuplot script; run from the output directory\nset datafile separator ','\nset key autotitle columnhead\nset xlabel 't'\nset ylabel '|D2|'\nset terminal pngcairo size 900,600\nset output 'depth.png'\nplot 'depth.csv' using 1:(strcol(2) eq 'exact' ? $9 : 1/0) with linespoints title 'five-wave mixing', \\\n     'depth.csv' using 1:(strcol(2) eq 'exact' ? $10 : 1/0) with linespoints title 'third harmonic'\n",
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_deviation_undefined_near_zero() {
        let r = ComparisonRecord::new(0.0, Criterion::D1, 0.0, 0.0, 0.0);
        assert_eq!(r.rel_deviation, None);
        assert_eq!(r.abs_deviation, 0.0);
        let r = ComparisonRecord::new(1.0, Criterion::D1, -1.1, -1.0, 0.0);
        assert!((r.rel_deviation.unwrap() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn verdict_precedence() {
        let n = Verdict::Numerical("x".into());
        let c = Verdict::Claim("y".into());
        assert_eq!(Verdict::Pass.merge(n.clone()), n);
        assert_eq!(n.clone().merge(c.clone()).exit_code(), 4);
        assert_eq!(c.clone().merge(n).exit_code(), 4);
    }

    #[test]
    fn zero_coupling_criteria_vanish() {
        let cfg = RunConfig {
            g: 0.0,
            ..RunConfig::default()
        };
        let out = cmd_criteria(&cfg).unwrap();
        assert_eq!(out.verdict, Verdict::Pass);
        let csv = &out.files[0].1;
        for line in csv.lines().filter(|l| !l.starts_with('#')).skip(1) {
            let fields: Vec<&str> = line.split(',').collect();
            for v in &fields[2..fields.len() - 1] {
                let v: f64 = v.parse().unwrap();
                assert!(v.abs() < 1e-9, "{line}");
            }
        }
    }

    #[test]
    fn compare_rejects_custom_process() {
        let cfg = RunConfig::from_toml("[process]\nm = 2\nn = 1\nomega2 = 2.0\n").unwrap();
        let err = cmd_compare(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn compare_has_zero_row_at_origin() {
        let cfg = RunConfig::default();
        let out = cmd_compare(&cfg).unwrap();
        let first = out.files[0]
            .1
            .lines()
            .find(|l| !l.starts_with('#') && !l.starts_with("time"))
            .unwrap();
        let f: Vec<&str> = first.split(',').collect();
        assert_eq!(f[0].parse::<f64>().unwrap(), 0.0);
        assert!(f[2].parse::<f64>().unwrap().abs() < 1e-15);
        assert_eq!(f[3].parse::<f64>().unwrap(), 0.0);
        assert_eq!(f[5], "undefined");
        assert_eq!(out.verdict, Verdict::Pass, "{}", out.summary);
    }

    #[test]
    fn depth_with_vacuum_pump_is_degenerate() {
        let cfg = RunConfig {
            alpha_sq: 0.0,
            ..RunConfig::default()
        };
        let out = cmd_depth(&cfg).unwrap();
        assert_eq!(out.verdict, Verdict::Pass);
        assert!(out.summary.contains("degenerate"));
    }

    #[test]
    fn tiny_cutoffs_exit_three() {
        let cfg = RunConfig::from_toml(
            "g = 0.05\nalpha_sq = 2.0\ncutoffs = { max_a = 14, max_b = 4 }\n[times]\nstart = 0.0\nstop = 2.0\ncount = 3\n",
        )
        .unwrap();
        let out = cmd_criteria(&cfg).unwrap();
        assert_eq!(out.verdict.exit_code(), 3);
    }
}
