//! Truncated two-mode Fock space.
//!
//! The basis is row-major over `(n_a, n_b)` with `n_b` running fastest, so
//! basis index `i` corresponds to `(i / max_b, i % max_b)`.

use std::fmt;
use std::io::{self, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{falling_factorial, sum_compensated, CompensatedSum};

/// Largest factorial-moment order accepted by [`factorial_moments`].
pub const MAX_MOMENT_ORDER: usize = 8;

/// Coherent-state truncation tail above which construction is refused.
pub const TAIL_CEILING: f64 = 1e-6;

/// Which of the two bosonic modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// Pump mode.
    A,
    /// Signal mode.
    B,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::A => f.write_str("A"),
            Mode::B => f.write_str("B"),
        }
    }
}

/// Exclusive photon-number bounds of the two modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockCutoffs {
    max_a: usize,
    max_b: usize,
}

impl FockCutoffs {
    pub fn new(max_a: usize, max_b: usize) -> Result<Self> {
        if max_a == 0 || max_b == 0 {
            return Err(Error::InvalidCutoffs { max_a, max_b });
        }
        Ok(Self { max_a, max_b })
    }

    pub fn max_a(&self) -> usize {
        self.max_a
    }

    pub fn max_b(&self) -> usize {
        self.max_b
    }

    pub fn max(&self, mode: Mode) -> usize {
        match mode {
            Mode::A => self.max_a,
            Mode::B => self.max_b,
        }
    }

    pub fn dim(&self) -> usize {
        self.max_a * self.max_b
    }

    pub fn index(&self, n_a: usize, n_b: usize) -> usize {
        debug_assert!(n_a < self.max_a && n_b < self.max_b);
        n_a * self.max_b + n_b
    }

    pub fn occupation(&self, index: usize) -> (usize, usize) {
        (index / self.max_b, index % self.max_b)
    }

    pub fn contains(&self, n_a: usize, n_b: usize) -> bool {
        n_a < self.max_a && n_b < self.max_b
    }

    pub fn as_pair(&self) -> (usize, usize) {
        (self.max_a, self.max_b)
    }
}

/// Pump cutoff heuristic for a coherent input of mean photon number `alpha_sq`.
pub fn suggest_pump_cutoff(alpha_sq: f64) -> usize {
    let lambda = alpha_sq.max(0.0);
    (lambda + 10.0 * lambda.sqrt() + 15.0).ceil() as usize
}

/// Upper Poisson tail `P(N >= from)` for mean `lambda`, summed directly.
fn poisson_upper_tail(lambda: f64, from: usize) -> f64 {
    if lambda == 0.0 {
        return if from == 0 { 1.0 } else { 0.0 };
    }
    // log p(from) via lgamma-free accumulation
    let mut log_p = -lambda;
    for n in 1..=from {
        log_p += lambda.ln() - (n as f64).ln();
    }
    let mut term = log_p.exp();
    let mut tail = CompensatedSum::new();
    let mut n = from;
    loop {
        tail.add(term);
        n += 1;
        term *= lambda / n as f64;
        if (n as f64) > lambda && term <= 1e-300_f64.max(tail.value() * 1e-18) {
            break;
        }
    }
    tail.value()
}

/// Normalized pure state of the two modes on a truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    amplitudes: Vec<Complex64>,
    cutoffs: FockCutoffs,
    truncation_deficit: f64,
}

impl TwoModeState {
    /// Wraps raw amplitudes, renormalizing them. The pre-normalization
    /// deficit `1 - norm²` is kept as a diagnostic.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>, cutoffs: FockCutoffs) -> Result<Self> {
        if amplitudes.len() != cutoffs.dim() {
            return Err(Error::DimensionMismatch {
                len: amplitudes.len(),
                dim: cutoffs.dim(),
            });
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite("amplitudes"));
        }
        let norm_sq = sum_compensated(amplitudes.iter().map(|z| z.norm_sqr()));
        if norm_sq == 0.0 {
            return Err(Error::OutOfRange {
                name: "amplitudes",
                value: 0.0,
                reason: "state has zero norm",
            });
        }
        let mut state = Self {
            amplitudes,
            cutoffs,
            truncation_deficit: 1.0 - norm_sq,
        };
        if (norm_sq - 1.0).abs() > f64::EPSILON {
            let scale = norm_sq.sqrt().recip();
            state.amplitudes.iter_mut().for_each(|z| *z *= scale);
        }
        Ok(state)
    }

    /// Wraps amplitudes produced by a unitary map of a normalized state,
    /// without renormalizing them, so that norm drift stays observable.
    pub(crate) fn from_evolved(
        amplitudes: Vec<Complex64>,
        cutoffs: FockCutoffs,
        truncation_deficit: f64,
    ) -> Self {
        debug_assert_eq!(amplitudes.len(), cutoffs.dim());
        Self {
            amplitudes,
            cutoffs,
            truncation_deficit,
        }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, n_a: usize, n_b: usize) -> Complex64 {
        self.amplitudes[self.cutoffs.index(n_a, n_b)]
    }

    pub fn cutoffs(&self) -> FockCutoffs {
        self.cutoffs
    }

    /// Probability lost to truncation before the state was renormalized.
    pub fn truncation_deficit(&self) -> f64 {
        self.truncation_deficit
    }

    pub fn norm_sqr(&self) -> f64 {
        sum_compensated(self.amplitudes.iter().map(|z| z.norm_sqr()))
    }

    /// Probability in the outermost basis layer of either mode.
    pub fn leakage(&self) -> f64 {
        self.boundary_mass(1, 1)
    }

    /// Probability with `n_a >= max_a - width_a` or `n_b >= max_b - width_b`.
    pub fn boundary_mass(&self, width_a: usize, width_b: usize) -> f64 {
        let FockCutoffs { max_a, max_b } = self.cutoffs;
        let edge_a = max_a.saturating_sub(width_a);
        let edge_b = max_b.saturating_sub(width_b);
        sum_compensated(self.amplitudes.iter().enumerate().filter_map(|(i, z)| {
            let (n_a, n_b) = self.cutoffs.occupation(i);
            (n_a >= edge_a || n_b >= edge_b).then(|| z.norm_sqr())
        }))
    }

    /// `|<self|other>|`.
    pub fn overlap(&self, other: &TwoModeState) -> f64 {
        let mut re = CompensatedSum::new();
        let mut im = CompensatedSum::new();
        for (x, y) in self.amplitudes.iter().zip(&other.amplitudes) {
            let p = x.conj() * y;
            re.add(p.re);
            im.add(p.im);
        }
        Complex64::new(re.value(), im.value()).norm()
    }

    /// Writes `n_a,n_b,re,im` rows for every basis state.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "n_a,n_b,re,im")?;
        for (i, z) in self.amplitudes.iter().enumerate() {
            let (n_a, n_b) = self.cutoffs.occupation(i);
            writeln!(out, "{n_a},{n_b},{:.17e},{:.17e}", z.re, z.im)?;
        }
        Ok(())
    }
}

/// Result of [`make_coherent_vacuum`]: the state plus its truncation tail.
#[derive(Debug, Clone)]
pub struct CoherentVacuum {
    pub state: TwoModeState,
    /// Poisson mass at `n_a >= max_a` discarded by the truncation.
    pub tail_mass: f64,
}

/// `|alpha, 0>`: pump in a coherent state, signal in vacuum.
pub fn make_coherent_vacuum(alpha: Complex64, cutoffs: FockCutoffs) -> Result<CoherentVacuum> {
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::NonFinite("alpha"));
    }
    let lambda = alpha.norm_sqr();
    let tail_mass = poisson_upper_tail(lambda, cutoffs.max_a());
    if tail_mass > TAIL_CEILING {
        return Err(Error::CutoffTooSmall {
            tail: tail_mass,
            max_a: cutoffs.max_a(),
            ceiling: TAIL_CEILING,
        });
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); cutoffs.dim()];
    let mut a_n = Complex64::new((-lambda / 2.0).exp(), 0.0);
    for n_a in 0..cutoffs.max_a() {
        if n_a > 0 {
            a_n = a_n * alpha / (n_a as f64).sqrt();
        }
        amplitudes[cutoffs.index(n_a, 0)] = a_n;
    }
    let mut state = TwoModeState::from_amplitudes(amplitudes, cutoffs)?;
    state.truncation_deficit = tail_mass;
    Ok(CoherentVacuum { state, tail_mass })
}

/// Number state `|n_a, n_b>`.
pub fn make_fock(n_a: usize, n_b: usize, cutoffs: FockCutoffs) -> Result<TwoModeState> {
    if !cutoffs.contains(n_a, n_b) {
        return Err(Error::IndexOutOfRange {
            n_a,
            n_b,
            max_a: cutoffs.max_a(),
            max_b: cutoffs.max_b(),
        });
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); cutoffs.dim()];
    amplitudes[cutoffs.index(n_a, n_b)] = Complex64::new(1.0, 0.0);
    TwoModeState::from_amplitudes(amplitudes, cutoffs)
}

/// Marginal photon-number distribution of one mode.
pub fn number_distribution(state: &TwoModeState, mode: Mode) -> Vec<f64> {
    let cutoffs = state.cutoffs();
    let len = cutoffs.max(mode);
    let mut acc = vec![CompensatedSum::new(); len];
    for (i, z) in state.amplitudes().iter().enumerate() {
        let (n_a, n_b) = cutoffs.occupation(i);
        let n = match mode {
            Mode::A => n_a,
            Mode::B => n_b,
        };
        acc[n].add(z.norm_sqr());
    }
    acc.into_iter().map(|s| s.value()).collect()
}

/// Factorial moments `<N^(i)>`, `i = 1..=k_max`, of a single mode.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorialMoments {
    mode: Mode,
    values: Vec<f64>,
}

impl FactorialMoments {
    /// `values[i - 1] = <N^(i)>`. Values need only be finite; analytic
    /// approximations may leave the physical (nonnegative) domain.
    pub fn new(mode: Mode, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InsufficientMoments {
                needed: 1,
                available: 0,
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("factorial moments"));
        }
        Ok(Self { mode, values })
    }

    /// Factorial moments of a photon-number pmf, `k_max <= MAX_MOMENT_ORDER`.
    pub fn from_pmf(mode: Mode, pmf: &[f64], k_max: usize) -> Result<Self> {
        check_order(k_max)?;
        let values = (1..=k_max)
            .map(|i| {
                sum_compensated(
                    pmf.iter()
                        .enumerate()
                        .map(|(n, &p)| p * falling_factorial(n as u64, i as u32) as f64),
                )
            })
            .collect();
        Self::new(mode, values)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn k_max(&self) -> usize {
        self.values.len()
    }

    /// `<N>`.
    pub fn mean(&self) -> f64 {
        self.values[0]
    }

    /// `<N^(order)>`, with `<N^(0)> = 1`.
    pub fn get(&self, order: usize) -> Result<f64> {
        match order {
            0 => Ok(1.0),
            i if i <= self.values.len() => Ok(self.values[i - 1]),
            i => Err(Error::InsufficientMoments {
                needed: i,
                available: self.values.len(),
            }),
        }
    }
}

fn check_order(k_max: usize) -> Result<()> {
    if k_max == 0 {
        return Err(Error::OutOfRange {
            name: "k_max",
            value: 0.0,
            reason: "at least one moment order is required",
        });
    }
    if k_max > MAX_MOMENT_ORDER {
        return Err(Error::MomentOrderTooLarge {
            requested: k_max,
            bound: MAX_MOMENT_ORDER,
        });
    }
    Ok(())
}

pub fn factorial_moments(
    state: &TwoModeState,
    mode: Mode,
    k_max: usize,
) -> Result<FactorialMoments> {
    check_order(k_max)?;
    FactorialMoments::from_pmf(mode, &number_distribution(state, mode), k_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cut(a: usize, b: usize) -> FockCutoffs {
        FockCutoffs::new(a, b).unwrap()
    }

    #[test]
    fn cutoffs_reject_zero() {
        assert!(FockCutoffs::new(0, 3).is_err());
        assert!(FockCutoffs::new(3, 0).is_err());
    }

    #[test]
    fn index_round_trip() {
        let c = cut(5, 3);
        for i in 0..c.dim() {
            let (a, b) = c.occupation(i);
            assert_eq!(c.index(a, b), i);
        }
        assert_eq!(c.index(1, 0), 3);
    }

    #[test]
    fn coherent_zero_is_vacuum() {
        let s = make_coherent_vacuum(Complex64::new(0.0, 0.0), cut(6, 3))
            .unwrap()
            .state;
        assert_eq!(s.amplitude(0, 0), Complex64::new(1.0, 0.0));
        assert_eq!(s.norm_sqr(), 1.0);
        assert!(s.amplitudes()[1..].iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn coherent_one_photon_probability() {
        let s = make_coherent_vacuum(Complex64::new(1.0, 0.0), cut(30, 4))
            .unwrap()
            .state;
        assert_abs_diff_eq!(
            s.amplitude(1, 0).norm_sqr(),
            (-1.0f64).exp(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn coherent_mean_two() {
        let s = make_coherent_vacuum(Complex64::new(2f64.sqrt(), 0.0), cut(40, 4))
            .unwrap()
            .state;
        let m = factorial_moments(&s, Mode::A, 2).unwrap();
        assert_abs_diff_eq!(m.mean(), 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(m.values()[1], 4.0, epsilon = 1e-10);
    }

    #[test]
    fn coherent_refuses_small_cutoff() {
        let err = make_coherent_vacuum(Complex64::new(3.0, 0.0), cut(5, 2)).unwrap_err();
        assert!(matches!(err, Error::CutoffTooSmall { .. }));
        let err = make_coherent_vacuum(Complex64::new(f64::NAN, 0.0), cut(5, 2)).unwrap_err();
        assert_eq!(err, Error::NonFinite("alpha"));
    }

    #[test]
    fn coherent_reports_tail_below_ceiling() {
        // lambda = 1, cutoff 10: tail = P(N >= 10) ~ 1.1e-7
        let cv = make_coherent_vacuum(Complex64::new(1.0, 0.0), cut(10, 1)).unwrap();
        assert!(cv.tail_mass > 1e-8 && cv.tail_mass < 1e-6);
        assert_abs_diff_eq!(cv.state.norm_sqr(), 1.0, epsilon = 1e-15);
        let direct: f64 = 1.0 - (0..10).map(|n| poisson_pmf(1.0, n)).sum::<f64>();
        assert_abs_diff_eq!(cv.tail_mass, direct, epsilon = 1e-15);
    }

    fn poisson_pmf(lambda: f64, n: usize) -> f64 {
        (-lambda).exp() * lambda.powi(n as i32) / (1..=n).map(|k| k as f64).product::<f64>()
    }

    #[test]
    fn fock_fixtures() {
        let s = make_fock(3, 0, cut(8, 4)).unwrap();
        let m = factorial_moments(&s, Mode::A, 4).unwrap();
        assert_eq!(m.values(), &[3.0, 6.0, 6.0, 0.0]);
        let s = make_fock(2, 1, cut(4, 3)).unwrap();
        assert_eq!(s.leakage(), 0.0);
        assert!(make_fock(8, 0, cut(8, 4)).is_err());
        let vac = make_fock(0, 0, cut(3, 3)).unwrap();
        assert_eq!(number_distribution(&vac, Mode::B), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn marginals_of_coherent_vacuum() {
        let s = make_coherent_vacuum(Complex64::new(1.0, 0.0), cut(30, 3))
            .unwrap()
            .state;
        let pa = number_distribution(&s, Mode::A);
        for (n, p) in pa.iter().enumerate() {
            assert_abs_diff_eq!(*p, poisson_pmf(1.0, n), epsilon = 1e-15);
        }
        assert_eq!(number_distribution(&s, Mode::B), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn coherent_third_moment_against_brute_force() {
        let s = make_coherent_vacuum(Complex64::new(1.0, 0.0), cut(60, 2))
            .unwrap()
            .state;
        let m = factorial_moments(&s, Mode::A, 3).unwrap();
        let brute: f64 = (0..60)
            .map(|n| poisson_pmf(1.0, n) * (n * n.saturating_sub(1) * n.saturating_sub(2)) as f64)
            .sum();
        assert_abs_diff_eq!(m.values()[2], brute, epsilon = 1e-12);
        assert_abs_diff_eq!(m.values()[2], 1.0, epsilon = 1e-10);
    }

    #[test]
    fn moment_order_bound() {
        let s = make_fock(1, 1, cut(3, 3)).unwrap();
        assert!(matches!(
            factorial_moments(&s, Mode::A, MAX_MOMENT_ORDER + 1),
            Err(Error::MomentOrderTooLarge { .. })
        ));
        assert!(factorial_moments(&s, Mode::A, 0).is_err());
    }

    #[test]
    fn leakage_counts_outer_layer() {
        let s = make_fock(3, 0, cut(4, 2)).unwrap();
        assert_eq!(s.leakage(), 1.0);
        assert_eq!(s.boundary_mass(0, 0), 0.0);
    }

    #[test]
    fn csv_dump_has_all_rows() {
        let s = make_fock(1, 0, cut(2, 2)).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(text.lines().nth(3).unwrap().starts_with("1,0,1.0"));
    }
}
