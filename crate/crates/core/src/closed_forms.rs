//! Second-order short-time results for the pump mode of `|alpha, 0>`.
//!
//! Every expression depends on `g` and `t` only through `(g t)^2`, with
//! `lambda = |alpha|^2`. Third-harmonic factorial moments are not available
//! in closed form; only its criteria are.

use crate::error::{Error, Result};
use crate::fock::{FactorialMoments, Mode};
use crate::process::Preset;

/// Default ceiling on the expansion parameter `g t lambda^(3/2)`.
pub const DEFAULT_GT_WARN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShortTimeInput {
    /// `|alpha|^2`.
    pub alpha_sq: f64,
    pub g: f64,
    pub t: f64,
    pub gt_warn: f64,
}

impl ShortTimeInput {
    pub fn new(alpha_sq: f64, g: f64, t: f64) -> Result<Self> {
        for (name, v) in [("alpha_sq", alpha_sq), ("g", g), ("t", t)] {
            if !v.is_finite() {
                return Err(Error::NonFinite(name));
            }
            if v < 0.0 {
                return Err(Error::OutOfRange {
                    name,
                    value: v,
                    reason: "must be nonnegative",
                });
            }
        }
        Ok(Self {
            alpha_sq,
            g,
            t,
            gt_warn: DEFAULT_GT_WARN,
        })
    }

    /// `(g t)^2`.
    pub fn gt_sq(&self) -> f64 {
        let gt = self.g * self.t;
        gt * gt
    }

    /// `g t lambda^(3/2)`, the quantity the expansion is small in.
    pub fn expansion_parameter(&self) -> f64 {
        self.g * self.t * self.alpha_sq.powf(1.5)
    }

    /// A message when the expansion parameter exceeds `gt_warn`.
    pub fn validity_warning(&self) -> Option<String> {
        let x = self.expansion_parameter();
        (x > self.gt_warn).then(|| {
            format!(
                "g*t*|alpha|^3 = {x:.3e} exceeds {:.3e}; the second-order expansion is unreliable",
                self.gt_warn
            )
        })
    }
}

/// Pump-mode `<N>`, `<N^(2)>`, `<N^(3)>` for five-wave mixing.
pub fn moments_fwm(input: &ShortTimeInput) -> FactorialMoments {
    let l = input.alpha_sq;
    let s = input.gt_sq();
    let values = vec![
        l - 6.0 * s * l.powi(3),
        l.powi(2) - 12.0 * s * (l.powi(4) + l.powi(3)),
        l.powi(3) - 6.0 * s * (3.0 * l.powi(5) + 6.0 * l.powi(4) + 2.0 * l.powi(3)),
    ];
    FactorialMoments::new(Mode::A, values)
        .expect("closed-form moments are finite for finite inputs")
}

pub fn d1_fwm(input: &ShortTimeInput) -> f64 {
    -12.0 * input.gt_sq() * input.alpha_sq.powi(3)
}

pub fn d2_fwm(input: &ShortTimeInput) -> f64 {
    let l = input.alpha_sq;
    -12.0 * input.gt_sq() * (3.0 * l.powi(4) + l.powi(3))
}

pub fn big_d2_fwm(input: &ShortTimeInput) -> f64 {
    -48.0 * input.gt_sq() * input.alpha_sq.powi(3)
}

pub fn d1_thg(input: &ShortTimeInput) -> f64 {
    -6.0 * input.gt_sq() * input.alpha_sq.powi(3)
}

pub fn d2_thg(input: &ShortTimeInput) -> f64 {
    let l = input.alpha_sq;
    -6.0 * input.gt_sq() * (3.0 * l.powi(4) + l.powi(3))
}

pub fn big_d2_thg(input: &ShortTimeInput) -> f64 {
    -24.0 * input.gt_sq() * input.alpha_sq.powi(3)
}

/// The three pump-mode criteria that have closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Criterion {
    /// `d(1)`, normal antibunching.
    D1,
    /// `d(2)`, second-order antibunching.
    D2,
    /// `D(2)`, second-order sub-Poissonian statistics.
    BigD2,
}

impl Criterion {
    pub const ALL: [Criterion; 3] = [Criterion::D1, Criterion::D2, Criterion::BigD2];

    pub fn id(self) -> &'static str {
        match self {
            Criterion::D1 => "d1",
            Criterion::D2 => "d2",
            Criterion::BigD2 => "D2",
        }
    }
}

/// Closed-form value of `criterion` for a preset process.
pub fn closed_form(preset: Preset, criterion: Criterion, input: &ShortTimeInput) -> f64 {
    match (preset, criterion) {
        (Preset::FiveWaveMixing, Criterion::D1) => d1_fwm(input),
        (Preset::FiveWaveMixing, Criterion::D2) => d2_fwm(input),
        (Preset::FiveWaveMixing, Criterion::BigD2) => big_d2_fwm(input),
        (Preset::ThirdHarmonic, Criterion::D1) => d1_thg(input),
        (Preset::ThirdHarmonic, Criterion::D2) => d2_thg(input),
        (Preset::ThirdHarmonic, Criterion::BigD2) => big_d2_thg(input),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn input(l: f64, g: f64, t: f64) -> ShortTimeInput {
        ShortTimeInput::new(l, g, t).unwrap()
    }

    #[test]
    fn zero_time_gives_coherent_moments() {
        let m = moments_fwm(&input(2.5, 0.1, 0.0));
        assert_eq!(m.values(), &[2.5, 6.25, 15.625]);
    }

    #[test]
    fn unit_lambda_substitution() {
        let m = moments_fwm(&input(1.0, 1e-3, 1.0));
        assert_relative_eq!(m.values()[0], 1.0 - 6e-6, max_relative = 1e-15);
        assert_relative_eq!(m.values()[1], 1.0 - 2.4e-5, max_relative = 1e-15);
        assert_relative_eq!(m.values()[2], 1.0 - 6.6e-5, max_relative = 1e-15);
    }

    #[test]
    fn spot_values() {
        let x = input(4.0, 1e-2, 1.0);
        assert_relative_eq!(d1_fwm(&x), -0.0768, max_relative = 1e-15);
        assert_relative_eq!(big_d2_fwm(&x), -0.3072, max_relative = 1e-15);
        assert_relative_eq!(d1_thg(&x), -0.0384, max_relative = 1e-15);
        assert_relative_eq!(big_d2_thg(&x), -0.1536, max_relative = 1e-15);
        assert_relative_eq!(
            d2_fwm(&x),
            -12e-4 * (3.0 * 256.0 + 64.0),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            d2_thg(&x),
            -6e-4 * (3.0 * 256.0 + 64.0),
            max_relative = 1e-15
        );
    }

    #[test]
    fn zero_coupling_vanishes() {
        let x = input(3.0, 0.0, 5.0);
        for p in [Preset::FiveWaveMixing, Preset::ThirdHarmonic] {
            for c in Criterion::ALL {
                assert_eq!(closed_form(p, c, &x), 0.0);
            }
        }
    }

    #[test]
    fn five_wave_is_twice_third_harmonic() {
        for (l, g, t) in [(1.0, 1e-3, 1.0), (0.5, 0.02, 3.0), (4.0, 1e-4, 0.25)] {
            let x = input(l, g, t);
            assert_relative_eq!(big_d2_fwm(&x) / big_d2_thg(&x), 2.0, max_relative = 1e-15);
            assert_relative_eq!(d1_fwm(&x) / d1_thg(&x), 2.0, max_relative = 1e-15);
            assert_relative_eq!(d2_fwm(&x) / d2_thg(&x), 2.0, max_relative = 1e-15);
        }
    }

    #[test]
    fn depends_on_gt_only() {
        let (g, t) = (0.37, 0.125);
        let a = input(2.0, g, t);
        let b = input(2.0, g * t, 1.0);
        for p in [Preset::FiveWaveMixing, Preset::ThirdHarmonic] {
            for c in Criterion::ALL {
                assert_eq!(closed_form(p, c, &a), closed_form(p, c, &b));
            }
        }
        assert_eq!(moments_fwm(&a), moments_fwm(&b));
    }

    #[test]
    fn validity_warning_threshold() {
        assert!(input(1.0, 1e-3, 1.0).validity_warning().is_none());
        assert!(input(4.0, 1e-2, 1.0).validity_warning().is_some());
        assert_abs_diff_eq!(
            input(4.0, 1e-2, 1.0).expansion_parameter(),
            0.08,
            epsilon = 1e-15
        );
        assert!(ShortTimeInput::new(-1.0, 0.1, 1.0).is_err());
        assert!(ShortTimeInput::new(1.0, f64::INFINITY, 1.0).is_err());
    }
}
