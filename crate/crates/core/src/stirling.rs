//! Stirling numbers of the second kind.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest `n` held by the shared table.
pub const STIRLING_BOUND: usize = 20;

/// Exact `S2(n, k)` for `0 <= k <= n <= max_n`, filled by the
/// recurrence `S2(n, k) = k S2(n-1, k) + S2(n-1, k-1)`.
#[derive(Debug, Clone)]
pub struct StirlingTable {
    max_n: usize,
    rows: Vec<Vec<u128>>,
}

impl StirlingTable {
    pub fn new(max_n: usize) -> Self {
        let mut rows: Vec<Vec<u128>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![1]);
        for n in 1..=max_n {
            let prev = &rows[n - 1];
            let row = (0..=n)
                .map(|k| {
                    let stay = if k < n { k as u128 * prev[k] } else { 0 };
                    let join = if k > 0 { prev[k - 1] } else { 0 };
                    stay + join
                })
                .collect();
            rows.push(row);
        }
        Self { max_n, rows }
    }

    /// The process-wide table up to [`STIRLING_BOUND`].
    pub fn shared() -> &'static StirlingTable {
        static TABLE: OnceLock<StirlingTable> = OnceLock::new();
        TABLE.get_or_init(|| StirlingTable::new(STIRLING_BOUND))
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn get(&self, n: usize, k: usize) -> Result<u128> {
        if k > n || n > self.max_n {
            return Err(Error::StirlingOutOfRange {
                n,
                k,
                bound: self.max_n,
            });
        }
        Ok(self.rows[n][k])
    }
}

/// `S2(n, k)` from the shared table.
pub fn stirling2(n: usize, k: usize) -> Result<u128> {
    StirlingTable::shared().get(n, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_identities() {
        assert_eq!(stirling2(0, 0).unwrap(), 1);
        for n in 1..=STIRLING_BOUND {
            assert_eq!(stirling2(n, 0).unwrap(), 0);
            assert_eq!(stirling2(n, n).unwrap(), 1);
            assert_eq!(stirling2(n, 1).unwrap(), 1);
        }
    }

    #[test]
    fn small_values() {
        assert_eq!(stirling2(4, 2).unwrap(), 7);
        assert_eq!(stirling2(5, 3).unwrap(), 25);
        assert_eq!(stirling2(10, 5).unwrap(), 42525);
    }

    #[test]
    fn recurrence_holds_everywhere() {
        let t = StirlingTable::shared();
        for n in 1..=t.max_n() {
            for k in 1..=n {
                let below = if k < n { t.get(n - 1, k).unwrap() } else { 0 };
                assert_eq!(
                    t.get(n, k).unwrap(),
                    k as u128 * below + t.get(n - 1, k - 1).unwrap()
                );
            }
        }
    }

    #[test]
    fn out_of_range() {
        assert!(stirling2(3, 4).is_err());
        assert!(stirling2(STIRLING_BOUND + 1, 1).is_err());
    }
}
