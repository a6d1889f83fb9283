//! Higher-order antibunching and sub-Poissonian criteria.
//!
//! Every criterion consumes [`FactorialMoments`] only, so analytic moments,
//! simulated states and synthetic distributions go through the same code.
//! Values are returned signed; a negative value witnesses the effect.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fock::{factorial_moments, FactorialMoments, Mode, TwoModeState, MAX_MOMENT_ORDER};
use crate::numeric::{binomial, CompensatedSum};
use crate::stirling::StirlingTable;

/// `d(l) = <N^(l+1)> - <N>^(l+1)`; negative for l-th order antibunching.
pub fn hoa_d(moments: &FactorialMoments, l: usize) -> Result<f64> {
    if l == 0 {
        return Err(Error::OutOfRange {
            name: "l",
            value: 0.0,
            reason: "antibunching order starts at 1",
        });
    }
    let correlated = moments.get(l + 1)?;
    Ok(correlated - moments.mean().powi(l as i32 + 1))
}

/// `D(l-1)`: the l-th central moment of the photon-number distribution
/// minus that of a Poisson distribution with the same mean.
///
/// Both double sums over `k` and `i` are accumulated separately with
/// exact integer prefactors `C(l, k) S2(l-k, i)` and subtracted last.
pub fn hosps_d(moments: &FactorialMoments, l: usize) -> Result<f64> {
    if l < 2 {
        return Err(Error::OutOfRange {
            name: "l",
            value: l as f64,
            reason: "sub-Poissonian order needs l >= 2",
        });
    }
    moments.get(l)?;
    let table = StirlingTable::shared();
    if l > table.max_n() {
        return Err(Error::StirlingOutOfRange {
            n: l,
            k: 0,
            bound: table.max_n(),
        });
    }
    let mean = moments.mean();
    let mut observed = CompensatedSum::new();
    let mut poisson = CompensatedSum::new();
    for k in 0..=l {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let choose = binomial(l as u64, k as u64);
        let mean_k = mean.powi(k as i32);
        for i in 0..=(l - k) {
            let coefficient = sign * (choose * table.get(l - k, i)?) as f64;
            if coefficient == 0.0 {
                continue;
            }
            observed.add(coefficient * moments.get(i)? * mean_k);
            poisson.add(coefficient * mean.powi((k + i) as i32));
        }
    }
    Ok(observed.value() - poisson.value())
}

/// Second-order sub-Poissonian criterion written out explicitly:
/// `D(2) = <N^(3)> + 2<N>^3 - 3<N^(2)><N> + 3<N^(2)> - 3<N>^2`.
pub fn hosps_d2_special(moments: &FactorialMoments) -> Result<f64> {
    let n1 = moments.mean();
    let n2 = moments.get(2)?;
    let n3 = moments.get(3)?;
    Ok(n3 + 2.0 * n1.powi(3) - 3.0 * n2 * n1 + 3.0 * n2 - 3.0 * n1 * n1)
}

/// Criterion values for one mode at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub mode: Mode,
    pub time: f64,
    /// `d(l)` keyed by `l = 1..=l_max`.
    pub hoa: BTreeMap<usize, f64>,
    /// `D(l-1)` keyed by the sub-Poissonian order `l-1 = 1..l_max`.
    pub hosps: BTreeMap<usize, f64>,
    pub leakage: f64,
}

impl CriterionReport {
    pub fn from_moments(
        moments: &FactorialMoments,
        time: f64,
        l_max: usize,
        leakage: f64,
    ) -> Result<Self> {
        let mut hoa = BTreeMap::new();
        let mut hosps = BTreeMap::new();
        for l in 1..=l_max {
            hoa.insert(l, hoa_d(moments, l)?);
            if l >= 2 {
                hosps.insert(l - 1, hosps_d(moments, l)?);
            }
        }
        Ok(Self {
            mode: moments.mode(),
            time,
            hoa,
            hosps,
            leakage,
        })
    }

    /// `d(l)`, if computed.
    pub fn d(&self, l: usize) -> Option<f64> {
        self.hoa.get(&l).copied()
    }

    /// `D(order)`, if computed.
    pub fn big_d(&self, order: usize) -> Option<f64> {
        self.hosps.get(&order).copied()
    }
}

/// Evaluates `d(1..=l_max)` and `D(1..l_max)` on one mode of a state.
pub fn report(
    state: &TwoModeState,
    mode: Mode,
    time: f64,
    l_max: usize,
) -> Result<CriterionReport> {
    if l_max == 0 || l_max + 1 > MAX_MOMENT_ORDER {
        return Err(Error::MomentOrderTooLarge {
            requested: l_max + 1,
            bound: MAX_MOMENT_ORDER,
        });
    }
    let moments = factorial_moments(state, mode, l_max + 1)?;
    CriterionReport::from_moments(&moments, time, l_max, state.leakage())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{make_coherent_vacuum, make_fock, FockCutoffs};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn poissonian(lambda: f64, k: usize) -> FactorialMoments {
        FactorialMoments::new(Mode::A, (1..=k).map(|i| lambda.powi(i as i32)).collect()).unwrap()
    }

    fn fock_moments(n: u64, k: usize) -> FactorialMoments {
        let values = (1..=k)
            .map(|i| crate::numeric::falling_factorial(n, i as u32) as f64)
            .collect();
        FactorialMoments::new(Mode::A, values).unwrap()
    }

    #[test]
    fn coherent_boundary() {
        assert_eq!(hoa_d(&poissonian(2.0, 2), 1).unwrap(), 0.0);
        for lambda in [0.3, 1.0, 2.0, 7.5] {
            let m = poissonian(lambda, 6);
            for l in 1..=4 {
                assert_abs_diff_eq!(hoa_d(&m, l).unwrap(), 0.0, epsilon = 1e-9);
            }
            for l in 2..=5 {
                assert_abs_diff_eq!(hosps_d(&m, l).unwrap(), 0.0, epsilon = 1e-9);
            }
        }
        assert_eq!(hosps_d2_special(&poissonian(1.0, 3)).unwrap(), 0.0);
    }

    #[test]
    fn fock_values() {
        assert_eq!(hoa_d(&fock_moments(3, 2), 1).unwrap(), -3.0);
        assert_eq!(hosps_d2_special(&fock_moments(2, 3)).unwrap(), -2.0);
        assert_abs_diff_eq!(
            hosps_d(&fock_moments(2, 3), 3).unwrap(),
            -2.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn fock_states_antibunch_at_every_order_below_n() {
        for n in 2..=10u64 {
            let m = fock_moments(n, 8);
            for l in 1..(n as usize).min(8) {
                assert!(hoa_d(&m, l).unwrap() < 0.0, "n={n} l={l}");
            }
        }
    }

    #[test]
    fn geometric_first_order_is_mean_squared() {
        // thermal pmf p(n) = (1-q) q^n with mean q/(1-q): variance - mean = mean^2
        let q: f64 = 0.4;
        let pmf: Vec<f64> = (0..200).map(|n| (1.0 - q) * q.powi(n)).collect();
        let m = FactorialMoments::from_pmf(Mode::A, &pmf, 2).unwrap();
        let mean = q / (1.0 - q);
        assert_abs_diff_eq!(hosps_d(&m, 2).unwrap(), mean * mean, epsilon = 1e-12);
    }

    #[test]
    fn errors_on_missing_orders() {
        let m = poissonian(1.0, 2);
        assert!(matches!(
            hoa_d(&m, 2),
            Err(Error::InsufficientMoments { .. })
        ));
        assert!(matches!(
            hosps_d(&m, 3),
            Err(Error::InsufficientMoments { .. })
        ));
        assert!(hosps_d2_special(&m).is_err());
        assert!(hoa_d(&m, 0).is_err());
        assert!(hosps_d(&m, 1).is_err());
        let long = poissonian(1.0, 8);
        assert!(hosps_d(&long, 21).is_err());
    }

    #[test]
    fn report_on_vacuum_and_coherent() {
        let c = FockCutoffs::new(30, 3).unwrap();
        let vac = make_fock(0, 0, c).unwrap();
        let r = report(&vac, Mode::B, 0.0, 3).unwrap();
        assert!(r.hoa.values().chain(r.hosps.values()).all(|&v| v == 0.0));
        assert_eq!(r.hoa.len(), 3);
        assert_eq!(r.hosps.len(), 2);

        let coh = make_coherent_vacuum(Complex64::new(1.0, 0.0), c)
            .unwrap()
            .state;
        let r = report(&coh, Mode::A, 0.0, 4).unwrap();
        for v in r.hoa.values().chain(r.hosps.values()) {
            assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-9);
        }
        assert!(report(&coh, Mode::A, 0.0, 8).is_err());
    }
}
