//! Brute-force reference computations.
//!
//! Nothing here shares code with the production paths it is used to check:
//! set partitions are enumerated one by one and moments are summed directly
//! over a distribution with plain powers.

use rand::Rng;

/// Number of partitions of an `n`-set into exactly `k` nonempty blocks,
/// counted by enumerating restricted growth strings.
pub fn count_set_partitions(n: usize, k: usize) -> u64 {
    if n == 0 {
        return u64::from(k == 0);
    }
    fn walk(pos: usize, n: usize, blocks: usize, k: usize) -> u64 {
        if pos == n {
            return u64::from(blocks == k);
        }
        if blocks + (n - pos) < k {
            return 0;
        }
        // join an existing block or open a new one
        let mut total = 0;
        for _ in 0..blocks {
            total += walk(pos + 1, n, blocks, k);
        }
        if blocks < k {
            total += walk(pos + 1, n, blocks + 1, k);
        }
        total
    }
    walk(1, n, 1, k)
}

pub fn mean(pmf: &[f64]) -> f64 {
    pmf.iter().enumerate().map(|(n, p)| p * n as f64).sum()
}

/// `E[N^power]`.
pub fn raw_moment(pmf: &[f64], power: i32) -> f64 {
    pmf.iter()
        .enumerate()
        .map(|(n, p)| p * (n as f64).powi(power))
        .sum()
}

/// `E[(N - mean)^order]`.
pub fn central_moment(pmf: &[f64], order: i32) -> f64 {
    let mu = mean(pmf);
    pmf.iter()
        .enumerate()
        .map(|(n, p)| p * (n as f64 - mu).powi(order))
        .sum()
}

/// Poisson pmf with mean `lambda` on `0..len`, built from factorials.
pub fn poisson_pmf(lambda: f64, len: usize) -> Vec<f64> {
    (0..len)
        .map(|n| {
            let fact: f64 = (1..=n).map(|k| k as f64).product();
            (-lambda).exp() * lambda.powi(n as i32) / fact
        })
        .collect()
}

/// Central moment of a Poisson distribution, summed far into the tail.
pub fn poisson_central_moment(lambda: f64, order: i32) -> f64 {
    let len = (lambda + 20.0 * lambda.sqrt() + 60.0) as usize;
    central_moment(&poisson_pmf(lambda, len.min(170)), order)
}

/// Random normalized pmf on `0..len` with a random support pattern.
pub fn random_pmf<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..len)
        .map(|_| {
            if rng.random_bool(0.3) {
                0.0
            } else {
                rng.random::<f64>()
            }
        })
        .collect();
    if w.iter().all(|&x| x == 0.0) {
        w[0] = 1.0;
    }
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

/// Geometric (thermal) pmf with mean `mean` on `0..len`.
pub fn thermal_pmf(mean: f64, len: usize) -> Vec<f64> {
    let q = mean / (1.0 + mean);
    (0..len).map(|n| (1.0 - q) * q.powi(n as i32)).collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && y.abs() > 0.0)
        .map(|(x, y)| (x.ln(), y.abs().ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        assert_eq!(count_set_partitions(0, 0), 1);
        assert_eq!(count_set_partitions(4, 2), 7);
        assert_eq!(count_set_partitions(5, 3), 25);
        // Bell number B5 = 52
        assert_eq!((0..=5).map(|k| count_set_partitions(5, k)).sum::<u64>(), 52);
    }

    #[test]
    fn poisson_central_moments() {
        // for Poisson, mu2 = mu3 = lambda and mu4 = lambda + 3 lambda^2
        let l = 1.7;
        assert!((poisson_central_moment(l, 2) - l).abs() < 1e-12);
        assert!((poisson_central_moment(l, 3) - l).abs() < 1e-12);
        assert!((poisson_central_moment(l, 4) - (l + 3.0 * l * l)).abs() < 1e-11);
    }

    #[test]
    fn slope_of_power_law() {
        let xs = [0.1, 0.2, 0.4, 0.8];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powi(3)).collect();
        assert!((log_log_slope(&xs, &ys) - 3.0).abs() < 1e-12);
    }
}
