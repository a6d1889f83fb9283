//! Two-mode exchange Hamiltonians
//! `H = w1 a^dag a + w2 b^dag b + g (a^dag^m b^n + a^m b^dag^n)`.

use std::collections::BTreeMap;
use std::io::{self, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockCutoffs, TwoModeState};
use crate::numeric::{falling_factorial, rising_product, CompensatedSum};

/// Largest exchange integer accepted for `m` or `n`.
pub const MAX_EXCHANGE: u32 = 6;

/// Dimension below which the Hamiltonian is stored densely.
pub const DENSE_BELOW: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Preset {
    /// Three pump quanta absorbed, two signal quanta emitted.
    FiveWaveMixing,
    /// Three pump quanta absorbed, one signal quantum emitted.
    ThirdHarmonic,
}

impl Preset {
    pub const ALL: [Preset; 2] = [Preset::FiveWaveMixing, Preset::ThirdHarmonic];

    pub fn exchange(self) -> (u32, u32) {
        match self {
            Preset::FiveWaveMixing => (3, 2),
            Preset::ThirdHarmonic => (3, 1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::FiveWaveMixing => "five-wave-mixing",
            Preset::ThirdHarmonic => "third-harmonic",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "five-wave-mixing" | "fwm" => Some(Preset::FiveWaveMixing),
            "third-harmonic" | "thg" => Some(Preset::ThirdHarmonic),
            _ => None,
        }
    }
}

/// Parameters of the exchange interaction, with `hbar = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessSpec {
    pub omega1: f64,
    pub omega2: f64,
    pub g: f64,
    /// Pump quanta exchanged per event.
    pub m: u32,
    /// Signal quanta exchanged per event.
    pub n: u32,
    pub name: Option<String>,
}

impl ProcessSpec {
    pub fn new(omega1: f64, omega2: f64, g: f64, m: u32, n: u32) -> Result<Self> {
        let spec = Self {
            omega1,
            omega2,
            g,
            m,
            n,
            name: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Resonant preset with the given pump frequency and coupling.
    pub fn preset(preset: Preset, omega1: f64, g: f64) -> Result<Self> {
        let (m, n) = preset.exchange();
        let mut spec = Self::new(omega1, omega1 * f64::from(m) / f64::from(n), g, m, n)?;
        spec.name = Some(preset.name().to_string());
        Ok(spec)
    }

    pub fn five_wave_mixing(g: f64) -> Result<Self> {
        Self::preset(Preset::FiveWaveMixing, 1.0, g)
    }

    pub fn third_harmonic(g: f64) -> Result<Self> {
        Self::preset(Preset::ThirdHarmonic, 1.0, g)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("g", self.g),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFinite(name));
            }
        }
        if self.g < 0.0 {
            return Err(Error::OutOfRange {
                name: "g",
                value: self.g,
                reason: "coupling must be nonnegative",
            });
        }
        for (name, v) in [("m", self.m), ("n", self.n)] {
            if v == 0 || v > MAX_EXCHANGE {
                return Err(Error::OutOfRange {
                    name,
                    value: f64::from(v),
                    reason: "exchange integers must lie in 1..=6",
                });
            }
        }
        Ok(())
    }

    /// Which preset these exchange integers and frequencies match, if any.
    pub fn matching_preset(&self) -> Option<Preset> {
        Preset::ALL
            .into_iter()
            .find(|p| p.exchange() == (self.m, self.n) && self.resonance_mismatch() == 0.0)
    }

    /// `m w1 - n w2`.
    pub fn resonance_mismatch(&self) -> f64 {
        f64::from(self.m) * self.omega1 - f64::from(self.n) * self.omega2
    }

    pub fn is_resonant(&self) -> bool {
        let scale = (f64::from(self.m) * self.omega1.abs()).max(f64::MIN_POSITIVE);
        self.resonance_mismatch().abs() <= 1e-12 * scale
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.is_resonant() {
            out.push(format!(
                "off resonance: m*omega1 - n*omega2 = {:.3e}; the interaction picture is time dependent",
                self.resonance_mismatch()
            ));
        }
        out
    }
}

/// Compressed sparse rows.
#[derive(Debug, Clone, PartialEq)]
struct Csr {
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<f64>,
}

impl Csr {
    fn from_entries(dim: usize, entries: &BTreeMap<(usize, usize), f64>) -> Self {
        let mut row_ptr = vec![0; dim + 1];
        let mut cols = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        for (&(r, c), &v) in entries {
            row_ptr[r + 1] += 1;
            cols.push(c);
            values.push(v);
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self {
            row_ptr,
            cols,
            values,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Storage {
    Dense(DMatrix<f64>),
    Sparse(Csr),
}

/// Real symmetric Hamiltonian on the truncated two-mode basis.
///
/// All matrix elements are real because `g` is real and ladder-operator
/// elements are square roots of integers.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix {
    spec: ProcessSpec,
    cutoffs: FockCutoffs,
    storage: Storage,
    /// Nonzero entries, both triangles, keyed by (row, col).
    entries: BTreeMap<(usize, usize), f64>,
}

/// Squared interaction element `|<n_a - m, n_b + n| a^m b^dag^n |n_a, n_b>|^2`.
pub fn ladder_weight(n_a: usize, n_b: usize, m: u32, n: u32) -> u128 {
    falling_factorial(n_a as u64, m) * rising_product(n_b as u64, n)
}

pub fn build_hamiltonian(spec: &ProcessSpec, cutoffs: FockCutoffs) -> Result<HamiltonianMatrix> {
    spec.validate()?;
    let dim = cutoffs.dim();
    let mut entries = BTreeMap::new();
    for i in 0..dim {
        let (n_a, n_b) = cutoffs.occupation(i);
        let diag = spec.omega1 * n_a as f64 + spec.omega2 * n_b as f64;
        if diag != 0.0 {
            entries.insert((i, i), diag);
        }
        let (m, n) = (spec.m as usize, spec.n as usize);
        if spec.g == 0.0 || n_a < m || !cutoffs.contains(n_a - m, n_b + n) {
            continue;
        }
        let j = cutoffs.index(n_a - m, n_b + n);
        let value = spec.g * (ladder_weight(n_a, n_b, spec.m, spec.n) as f64).sqrt();
        entries.insert((j, i), value);
        entries.insert((i, j), value);
    }
    let storage = if dim < DENSE_BELOW {
        let mut dense = DMatrix::zeros(dim, dim);
        for (&(r, c), &v) in &entries {
            dense[(r, c)] = v;
        }
        Storage::Dense(dense)
    } else {
        Storage::Sparse(Csr::from_entries(dim, &entries))
    };
    Ok(HamiltonianMatrix {
        spec: spec.clone(),
        cutoffs,
        storage,
        entries,
    })
}

impl HamiltonianMatrix {
    pub fn spec(&self) -> &ProcessSpec {
        &self.spec
    }

    pub fn cutoffs(&self) -> FockCutoffs {
        self.cutoffs
    }

    pub fn dim(&self) -> usize {
        self.cutoffs.dim()
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries.get(&(row, col)).copied().unwrap_or(0.0)
    }

    /// Element `<n_a', n_b'| H |n_a, n_b>`.
    pub fn element(&self, bra: (usize, usize), ket: (usize, usize)) -> f64 {
        self.get(
            self.cutoffs.index(bra.0, bra.1),
            self.cutoffs.index(ket.0, ket.1),
        )
    }

    /// Nonzero entries as `(row, col, value)`, row-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.entries.iter().map(|(&(r, c), &v)| (r, c, v))
    }

    /// Number of nonzero off-diagonal elements.
    pub fn interaction_count(&self) -> usize {
        self.entries.keys().filter(|(r, c)| r != c).count()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        match &self.storage {
            Storage::Dense(d) => d.clone(),
            Storage::Sparse(_) => {
                let mut d = DMatrix::zeros(self.dim(), self.dim());
                for (&(r, c), &v) in &self.entries {
                    d[(r, c)] = v;
                }
                d
            }
        }
    }

    /// `out = H x`.
    pub fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.dim());
        match &self.storage {
            Storage::Dense(d) => {
                out.iter_mut().for_each(|o| *o = Complex64::default());
                // column-major storage: accumulate column by column
                for (c, column) in d.column_iter().enumerate() {
                    let xc = x[c];
                    if xc == Complex64::default() {
                        continue;
                    }
                    for (o, &h) in out.iter_mut().zip(column.iter()) {
                        if h != 0.0 {
                            *o += xc * h;
                        }
                    }
                }
            }
            Storage::Sparse(csr) => {
                for (r, o) in out.iter_mut().enumerate() {
                    let span = csr.row_ptr[r]..csr.row_ptr[r + 1];
                    *o = csr.cols[span.clone()]
                        .iter()
                        .zip(&csr.values[span])
                        .map(|(&c, &h)| x[c] * h)
                        .sum();
                }
            }
        }
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let mut rows = vec![0.0; self.dim()];
        for (&(r, _), &v) in &self.entries {
            rows[r] += v.abs();
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    /// `<psi|H|psi>`.
    pub fn expectation(&self, state: &TwoModeState) -> Result<f64> {
        self.check_cutoffs(state)?;
        let psi = state.amplitudes();
        let mut acc = CompensatedSum::new();
        for (&(r, c), &v) in &self.entries {
            acc.add(v * (psi[r].conj() * psi[c]).re);
        }
        Ok(acc.value())
    }

    pub(crate) fn check_cutoffs(&self, state: &TwoModeState) -> Result<()> {
        if state.cutoffs() != self.cutoffs {
            return Err(Error::CutoffMismatch {
                state: state.cutoffs().as_pair(),
                hamiltonian: self.cutoffs.as_pair(),
            });
        }
        Ok(())
    }

    /// Warnings about the process parameters and about an interaction that the cutoffs remove entirely.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = self.spec.warnings();
        if self.spec.g > 0.0 && self.interaction_count() == 0 {
            out.push(format!(
                "cutoffs {:?} leave no room for the m={} n={} exchange; the interaction vanishes",
                self.cutoffs.as_pair(),
                self.spec.m,
                self.spec.n
            ));
        }
        out
    }

    /// Coordinate-format dump: `row,col,re,im`.
    pub fn write_coo<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "row,col,re,im")?;
        for (&(r, c), &v) in &self.entries {
            writeln!(out, "{r},{c},{v:.17e},{:.17e}", 0.0)?;
        }
        Ok(())
    }
}

/// Diagonal conserved charge `Q = n N_A + m N_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservedCharge {
    cutoffs: FockCutoffs,
    values: Vec<u64>,
}

pub fn conserved_charge(spec: &ProcessSpec, cutoffs: FockCutoffs) -> ConservedCharge {
    let values = (0..cutoffs.dim())
        .map(|i| {
            let (n_a, n_b) = cutoffs.occupation(i);
            u64::from(spec.n) * n_a as u64 + u64::from(spec.m) * n_b as u64
        })
        .collect();
    ConservedCharge { cutoffs, values }
}

impl ConservedCharge {
    /// Diagonal entries, indexed like the basis.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn at(&self, n_a: usize, n_b: usize) -> u64 {
        self.values[self.cutoffs.index(n_a, n_b)]
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.values.len(),
            self.values.iter().map(|&q| q as f64),
        ))
    }

    /// Basis indices grouped by charge, ascending in charge and index.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut by_charge: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for (i, &q) in self.values.iter().enumerate() {
            by_charge.entry(q).or_default().push(i);
        }
        by_charge.into_values().collect()
    }

    pub fn expectation(&self, state: &TwoModeState) -> f64 {
        let mut acc = CompensatedSum::new();
        for (z, &q) in state.amplitudes().iter().zip(&self.values) {
            acc.add(z.norm_sqr() * q as f64);
        }
        acc.value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cut(a: usize, b: usize) -> FockCutoffs {
        FockCutoffs::new(a, b).unwrap()
    }

    #[test]
    fn free_hamiltonian_is_diagonal() {
        let spec = ProcessSpec::new(1.0, 1.5, 0.0, 3, 2).unwrap();
        let h = build_hamiltonian(&spec, cut(5, 4)).unwrap();
        assert_eq!(h.interaction_count(), 0);
        assert_eq!(h.element((2, 3), (2, 3)), 2.0 + 4.5);
    }

    #[test]
    fn preset_elements() {
        let g = 0.7;
        let fwm = build_hamiltonian(&ProcessSpec::five_wave_mixing(g).unwrap(), cut(6, 5)).unwrap();
        assert_abs_diff_eq!(
            fwm.element((0, 2), (3, 0)),
            g * 12f64.sqrt(),
            epsilon = 1e-15
        );
        assert_eq!(fwm.element((3, 0), (0, 2)), fwm.element((0, 2), (3, 0)));
        let thg = build_hamiltonian(&ProcessSpec::third_harmonic(g).unwrap(), cut(6, 5)).unwrap();
        assert_abs_diff_eq!(
            thg.element((0, 1), (3, 0)),
            g * 6f64.sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn presets_are_resonant() {
        let fwm = ProcessSpec::five_wave_mixing(0.1).unwrap();
        assert_eq!(fwm.omega2, 1.5);
        assert!(fwm.is_resonant() && fwm.warnings().is_empty());
        assert_eq!(fwm.matching_preset(), Some(Preset::FiveWaveMixing));
        let thg = ProcessSpec::third_harmonic(0.1).unwrap();
        assert_eq!(thg.omega2, 3.0);
        assert_eq!(thg.matching_preset(), Some(Preset::ThirdHarmonic));
        let off = ProcessSpec::new(1.0, 1.4, 0.1, 3, 2).unwrap();
        assert!(!off.is_resonant());
        assert_eq!(off.warnings().len(), 1);
        assert_eq!(off.matching_preset(), None);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ProcessSpec::new(f64::NAN, 1.0, 0.1, 3, 2).is_err());
        assert!(ProcessSpec::new(1.0, 1.0, -0.1, 3, 2).is_err());
        assert!(ProcessSpec::new(1.0, 1.0, 0.1, 7, 2).is_err());
        assert!(ProcessSpec::new(1.0, 1.0, 0.1, 3, 0).is_err());
    }

    #[test]
    fn small_cutoffs_remove_interaction() {
        let h = build_hamiltonian(&ProcessSpec::five_wave_mixing(0.1).unwrap(), cut(3, 5)).unwrap();
        assert_eq!(h.interaction_count(), 0);
        assert_eq!(h.warnings().len(), 1);
    }

    #[test]
    fn charge_values() {
        let fwm = ProcessSpec::five_wave_mixing(0.1).unwrap();
        let q = conserved_charge(&fwm, cut(6, 4));
        assert_eq!(q.at(3, 0), 6);
        assert_eq!(q.at(0, 2), 6);
        let thg = ProcessSpec::third_harmonic(0.1).unwrap();
        let q = conserved_charge(&thg, cut(6, 4));
        assert_eq!(q.at(3, 0), 3);
        assert_eq!(q.at(0, 1), 3);
    }

    #[test]
    fn commutator_with_charge_vanishes() {
        for spec in [
            ProcessSpec::five_wave_mixing(0.3).unwrap(),
            ProcessSpec::third_harmonic(0.3).unwrap(),
            ProcessSpec::new(1.0, 0.5, 0.2, 1, 2).unwrap(),
        ] {
            let c = cut(9, 7);
            let h = build_hamiltonian(&spec, c).unwrap().to_dense();
            let q = conserved_charge(&spec, c).to_dense();
            let comm = &h * &q - &q * &h;
            assert_eq!(comm.amax(), 0.0);
        }
    }

    #[test]
    fn sparse_and_dense_agree() {
        let spec = ProcessSpec::five_wave_mixing(0.2).unwrap();
        let small = build_hamiltonian(&spec, cut(10, 6)).unwrap();
        let large = build_hamiltonian(&spec, cut(40, 8)).unwrap();
        assert!(small.is_dense());
        assert!(!large.is_dense());
        let x: Vec<Complex64> = (0..large.dim())
            .map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos()))
            .collect();
        let mut y = vec![Complex64::default(); large.dim()];
        large.apply(&x, &mut y);
        let dense = large.to_dense();
        for r in 0..large.dim() {
            let expect: Complex64 = (0..large.dim()).map(|c| x[c] * dense[(r, c)]).sum();
            assert_abs_diff_eq!((y[r] - expect).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn coo_dump_lists_entries() {
        let h = build_hamiltonian(&ProcessSpec::third_harmonic(1.0).unwrap(), cut(4, 2)).unwrap();
        let mut buf = Vec::new();
        h.write_coo(&mut buf).unwrap();
        let lines = String::from_utf8(buf).unwrap().lines().count();
        assert_eq!(lines, 1 + h.entries().count());
    }
}
