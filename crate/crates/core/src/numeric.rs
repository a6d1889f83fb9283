//! Exact integer combinatorics and compensated floating-point summation.

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Compensated sum of an iterator of floats.
pub fn sum_compensated<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// Falling factorial `n (n-1) ... (n-k+1)`, zero when `k > n`.
///
/// Panics on overflow of `u128`, which cannot happen for the bounded
/// orders and photon numbers used in this crate.
pub fn falling_factorial(n: u64, k: u32) -> u128 {
    if u64::from(k) > n {
        return 0;
    }
    (0..u64::from(k)).fold(1u128, |acc, j| {
        acc.checked_mul(u128::from(n - j))
            .expect("falling factorial overflows u128")
    })
}

/// Rising factorial `(n+1)(n+2)...(n+k)`: the squared norm gained by `k` creation operators on `|n>`.
pub fn rising_product(n: u64, k: u32) -> u128 {
    (1..=u64::from(k)).fold(1u128, |acc, j| {
        acc.checked_mul(u128::from(n + j))
            .expect("rising product overflows u128")
    })
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        // acc * (n - j) is always divisible by (j + 1)
        acc = acc * u128::from(n - j) / u128::from(j + 1);
    }
    acc
}
