//! Run configuration: TOML schema, flag overrides and resolution.
//!
//! ```toml
//! g = 1e-3
//! alpha_sq = 1.0
//! l_max = 3
//! modes = ["A", "B"]
//! seed = 2024
//! cutoffs = "auto"            # or { max_a = 30, max_b = 18 }
//!
//! [process]
//! preset = "five-wave-mixing" # or "third-harmonic"; or give m, n, omega1, omega2
//!
//! [times]
//! start = 0.0
//! stop = 1.0
//! count = 9
//! spacing = "linear"          # or "log"; `values = [...]` lists times explicitly
//!
//! [evolution]
//! method = "eigen"            # "expm" or "ode"
//! tolerance = 1e-10
//!
//! [compare]
//! order_band = [3.5, 4.5]
//! relative_tolerance = 0.02
//!
//! [outputs]
//! csv = "criteria.csv"
//! summary = "summary.txt"
//! plot_script = "plot.gp"
//! trajectory = "trajectory.csv"
//! ```

use std::path::{Path, PathBuf};

use nonclassic::evolution::EvolutionMethod;
use nonclassic::study::auto_cutoffs;
use nonclassic::{FockCutoffs, Mode, Preset, ProcessSpec};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_g")]
    pub g: f64,
    #[serde(default = "default_alpha_sq")]
    pub alpha_sq: f64,
    #[serde(default = "default_l_max")]
    pub l_max: usize,
    #[serde(default = "default_modes")]
    pub modes: Vec<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub cutoffs: CutoffsConfig,
    #[serde(default)]
    pub process: ProcessConfig,
    #[serde(default)]
    pub times: TimesConfig,
    #[serde(default)]
    pub evolution: EvolutionConfig,
    #[serde(default)]
    pub compare: CompareConfig,
    #[serde(default)]
    pub outputs: OutputsConfig,
}

fn default_g() -> f64 {
    1e-3
}

fn default_alpha_sq() -> f64 {
    1.0
}

fn default_l_max() -> usize {
    3
}

fn default_modes() -> Vec<String> {
    vec!["A".into(), "B".into()]
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            g: default_g(),
            alpha_sq: default_alpha_sq(),
            l_max: default_l_max(),
            modes: default_modes(),
            seed: 0,
            cutoffs: CutoffsConfig::default(),
            process: ProcessConfig::default(),
            times: TimesConfig::default(),
            evolution: EvolutionConfig::default(),
            compare: CompareConfig::default(),
            outputs: OutputsConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CutoffsConfig {
    Auto(String),
    Explicit { max_a: usize, max_b: usize },
}

impl Default for CutoffsConfig {
    fn default() -> Self {
        CutoffsConfig::Auto("auto".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega2: Option<f64>,
}

impl Default for ProcessConfig {
    fn default() -> Self {
        Self {
            preset: Some(Preset::FiveWaveMixing.name().into()),
            m: None,
            n: None,
            omega1: None,
            omega2: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimesConfig {
    #[serde(default)]
    pub start: f64,
    #[serde(default = "default_stop")]
    pub stop: f64,
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default = "default_spacing")]
    pub spacing: Spacing,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

fn default_stop() -> f64 {
    1.0
}

fn default_count() -> usize {
    9
}

fn default_spacing() -> Spacing {
    Spacing::Linear
}

impl Default for TimesConfig {
    fn default() -> Self {
        Self {
            start: 0.0,
            stop: default_stop(),
            count: default_count(),
            spacing: default_spacing(),
            values: None,
        }
    }
}

impl TimesConfig {
    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        let times = match &self.values {
            Some(v) => v.clone(),
            None => {
                if self.count == 0 {
                    return Err(CliError::config("times.count must be at least 1"));
                }
                if self.count == 1 {
                    vec![self.start]
                } else {
                    let steps = (self.count - 1) as f64;
                    match self.spacing {
                        Spacing::Linear => (0..self.count)
                            .map(|i| self.start + (self.stop - self.start) * i as f64 / steps)
                            .collect(),
                        Spacing::Log => {
                            if !(self.start > 0.0 && self.stop > 0.0) {
                                return Err(CliError::config(
                                    "log spacing needs times.start > 0 and times.stop > 0",
                                ));
                            }
                            let (lo, hi) = (self.start.ln(), self.stop.ln());
                            (0..self.count)
                                .map(|i| (lo + (hi - lo) * i as f64 / steps).exp())
                                .collect()
                        }
                    }
                }
            }
        };
        let ok = !times.is_empty()
            && times.iter().all(|t| t.is_finite() && *t >= 0.0)
            && times.windows(2).all(|w| w[0] < w[1]);
        if !ok {
            return Err(CliError::config(
                "times must be finite, nonnegative and strictly increasing",
            ));
        }
        Ok(times)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionConfig {
    #[serde(default = "default_method")]
    pub method: String,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_method() -> String {
    EvolutionMethod::EigenDecomposition.name().into()
}

fn default_tolerance() -> f64 {
    1e-10
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            method: default_method(),
            tolerance: default_tolerance(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareConfig {
    /// Accepted range for the fitted residual order.
    #[serde(default = "default_order_band")]
    pub order_band: [f64; 2],
    /// Largest accepted relative deviation at the final time.
    #[serde(default = "default_relative_tolerance")]
    pub relative_tolerance: f64,
}

fn default_order_band() -> [f64; 2] {
    [3.5, 4.5]
}

fn default_relative_tolerance() -> f64 {
    0.02
}

impl Default for CompareConfig {
    fn default() -> Self {
        Self {
            order_band: default_order_band(),
            relative_tolerance: default_relative_tolerance(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot_script: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<PathBuf>,
}

/// Flag overrides applied on top of the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub g: Option<f64>,
    pub alpha_sq: Option<f64>,
    pub t_start: Option<f64>,
    pub t_stop: Option<f64>,
    pub t_count: Option<usize>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(g) = o.g {
            self.g = g;
        }
        if let Some(a) = o.alpha_sq {
            self.alpha_sq = a;
        }
        let touches_grid = o.t_start.is_some() || o.t_stop.is_some() || o.t_count.is_some();
        if touches_grid {
            self.times.values = None;
        }
        if let Some(t) = o.t_start {
            self.times.start = t;
        }
        if let Some(t) = o.t_stop {
            self.times.stop = t;
        }
        if let Some(c) = o.t_count {
            self.times.count = c;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configuration serializes to TOML")
    }

    /// Resolves every field; `auto` cutoffs become explicit, sized for all
    /// of `specs_for_cutoffs` (defaults to the configured process).
    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let spec = self.process_spec()?;
        self.resolve_with(&[spec])
    }

    pub fn resolve_with(&self, specs_for_cutoffs: &[ProcessSpec]) -> Result<Resolved, CliError> {
        let spec = self.process_spec()?;
        if !(self.alpha_sq.is_finite() && self.alpha_sq >= 0.0) {
            return Err(CliError::config("alpha_sq must be finite and nonnegative"));
        }
        if self.l_max == 0 || self.l_max + 1 > nonclassic::fock::MAX_MOMENT_ORDER {
            return Err(CliError::config(format!(
                "l_max must lie in 1..={}",
                nonclassic::fock::MAX_MOMENT_ORDER - 1
            )));
        }
        let modes = self
            .modes
            .iter()
            .map(|m| match m.as_str() {
                "A" | "a" => Ok(Mode::A),
                "B" | "b" => Ok(Mode::B),
                other => Err(CliError::config(format!("unknown mode `{other}`"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if modes.is_empty() {
            return Err(CliError::config("modes must name at least one of A, B"));
        }
        let method = EvolutionMethod::from_name(&self.evolution.method).ok_or_else(|| {
            CliError::config(format!(
                "unknown evolution method `{}`",
                self.evolution.method
            ))
        })?;
        if !(self.evolution.tolerance > 0.0 && self.evolution.tolerance.is_finite()) {
            return Err(CliError::config("evolution.tolerance must be positive"));
        }
        let [lo, hi] = self.compare.order_band;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(CliError::config(
                "compare.order_band must be [low, high] with low <= high",
            ));
        }
        let times = self.times.grid()?;
        let cutoffs = match &self.cutoffs {
            CutoffsConfig::Auto(s) if s == "auto" => {
                let mut max_a = 1;
                let mut max_b = 1;
                for s in specs_for_cutoffs {
                    let c = auto_cutoffs(s, self.alpha_sq).map_err(CliError::config)?;
                    max_a = max_a.max(c.max_a());
                    max_b = max_b.max(c.max_b());
                }
                FockCutoffs::new(max_a, max_b).map_err(CliError::config)?
            }
            CutoffsConfig::Auto(other) => {
                return Err(CliError::config(format!(
                    "cutoffs must be \"auto\" or {{ max_a, max_b }}, got \"{other}\""
                )))
            }
            CutoffsConfig::Explicit { max_a, max_b } => {
                FockCutoffs::new(*max_a, *max_b).map_err(CliError::config)?
            }
        };
        let mut echoed = self.clone();
        echoed.cutoffs = CutoffsConfig::Explicit {
            max_a: cutoffs.max_a(),
            max_b: cutoffs.max_b(),
        };
        echoed.times.values = Some(times.clone());
        Ok(Resolved {
            config: echoed,
            spec,
            times,
            cutoffs,
            modes,
            method,
        })
    }

    pub fn process_spec(&self) -> Result<ProcessSpec, CliError> {
        let p = &self.process;
        let omega1 = p.omega1.unwrap_or(1.0);
        let spec = match &p.preset {
            Some(name) => {
                let preset = Preset::from_name(name)
                    .ok_or_else(|| CliError::config(format!("unknown process preset `{name}`")))?;
                if p.m.is_some() || p.n.is_some() || p.omega2.is_some() {
                    return Err(CliError::config(
                        "process: give either a preset or explicit m, n, omega2, not both",
                    ));
                }
                ProcessSpec::preset(preset, omega1, self.g)
            }
            None => {
                let (Some(m), Some(n), Some(omega2)) = (p.m, p.n, p.omega2) else {
                    return Err(CliError::config(
                        "process: explicit form needs m, n and omega2",
                    ));
                };
                ProcessSpec::new(omega1, omega2, self.g, m, n)
            }
        };
        spec.map_err(CliError::config)
    }

    /// The preset this configuration names, if any.
    pub fn preset(&self) -> Option<Preset> {
        match &self.process.preset {
            Some(name) => Preset::from_name(name),
            None => self.process_spec().ok().and_then(|s| s.matching_preset()),
        }
    }
}

/// A validated configuration ready to run.
#[derive(Debug, Clone)]
pub struct Resolved {
    /// The configuration as run, with cutoffs and times made explicit.
    pub config: RunConfig,
    pub spec: ProcessSpec,
    pub times: Vec<f64>,
    pub cutoffs: FockCutoffs,
    pub modes: Vec<Mode>,
    pub method: EvolutionMethod,
}

impl Resolved {
    /// Header block echoing the resolved configuration, one `#` line each.
    pub fn header(&self, command: &str) -> String {
        let mut out = format!(
            "# nonclassic {command} (version {})\n# resolved configuration:\n",
            env!("CARGO_PKG_VERSION")
        );
        for line in self.config.to_toml().lines() {
            if line.is_empty() {
                out.push_str("#\n");
            } else {
                out.push_str("# ");
                out.push_str(line);
                out.push('\n');
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve() {
        let r = RunConfig::default().resolve().unwrap();
        assert_eq!(r.times.len(), 9);
        assert_eq!(r.cutoffs.as_pair(), (29, 18));
        assert_eq!(r.spec.m, 3);
        assert_eq!(r.modes, vec![Mode::A, Mode::B]);
    }

    #[test]
    fn parses_full_file() {
        let cfg = RunConfig::from_toml(
            r#"
            g = 2e-3
            alpha_sq = 4.0
            modes = ["A"]
            cutoffs = { max_a = 50, max_b = 20 }
            [process]
            preset = "third-harmonic"
            [times]
            start = 0.125
            stop = 1.0
            count = 4
            spacing = "log"
            "#,
        )
        .unwrap();
        let r = cfg.resolve().unwrap();
        assert_eq!(r.cutoffs.as_pair(), (50, 20));
        assert_eq!(r.spec.omega2, 3.0);
        let expect = [0.125, 0.25, 0.5, 1.0];
        for (a, b) in r.times.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn explicit_process() {
        let cfg = RunConfig::from_toml("[process]\nm = 2\nn = 1\nomega2 = 2.0\n").unwrap();
        let spec = cfg.process_spec().unwrap();
        assert_eq!((spec.m, spec.n), (2, 1));
        assert_eq!(cfg.preset(), None);
        let cfg = RunConfig::from_toml("[process]\nm = 3\nn = 2\nomega2 = 1.5\n").unwrap();
        assert_eq!(cfg.preset(), Some(Preset::FiveWaveMixing));
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "unknown_key = 1",
            "cutoffs = \"big\"",
            "[process]\npreset = \"four-wave\"",
            "[process]\nm = 3",
            "[times]\nstart = 1.0\nstop = 0.5\ncount = 3",
            "[times]\nstart = 0.0\nspacing = \"log\"",
            "modes = [\"C\"]",
            "l_max = 8",
            "alpha_sq = -1.0",
            "[evolution]\nmethod = \"rk4\"",
        ] {
            let res = RunConfig::from_toml(text).and_then(|c| c.resolve());
            assert!(res.is_err(), "accepted: {text}");
        }
    }

    #[test]
    fn overrides_replace_fields() {
        let mut cfg = RunConfig::default();
        cfg.times.values = Some(vec![0.5]);
        cfg.apply(&Overrides {
            g: Some(0.5),
            t_count: Some(3),
            ..Default::default()
        });
        assert_eq!(cfg.g, 0.5);
        assert_eq!(cfg.times.values, None);
        assert_eq!(cfg.resolve().unwrap().times, vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn header_round_trips() {
        let r = RunConfig::default().resolve().unwrap();
        let header = r.header("criteria");
        assert!(header.lines().all(|l| l.starts_with('#')));
        let body: String = header
            .lines()
            .skip(2)
            .map(|l| l.trim_start_matches('#').trim_start())
            .collect::<Vec<_>>()
            .join("\n");
        let back = RunConfig::from_toml(&body).unwrap();
        assert_eq!(back, r.config);
    }
}
