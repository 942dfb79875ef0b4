//! Power-law fits of sweep outputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Least-squares slope of `y` against `x`; `None` for fewer than two distinct abscissae.
pub fn ls_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len();
    if n < 2 || n != y.len() {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if !(sxx > 0.0) {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    Some(sxy / sxx)
}

/// Log-log slope fit with a bootstrap interval over the columns (modes).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    /// 2.5% and 97.5% bootstrap quantiles.
    pub lo: f64,
    pub hi: f64,
}

/// Fits `log max_j g[i][j]` against `log x[i]`. Rows containing a non-finite or
/// non-positive entry are dropped before fitting.
pub fn fit_max_growth(x: &[f64], g: &[Vec<f64>], resamples: usize, seed: u64) -> Option<SlopeFit> {
    let ok = |row: &Vec<f64>| !row.is_empty() && row.iter().all(|v| v.is_finite() && *v > 0.0);
    let rows: Vec<(f64, &Vec<f64>)> = x.iter().copied().zip(g).filter(|(_, r)| ok(r)).collect();
    let lx: Vec<f64> = rows.iter().map(|(a, _)| a.ln()).collect();
    let cols = rows.first()?.1.len();
    let fit_with = |pick: &[usize]| {
        let ly: Vec<f64> = rows
            .iter()
            .map(|(_, r)| pick.iter().map(|&j| r[j]).fold(f64::MIN, f64::max).ln())
            .collect();
        ls_slope(&lx, &ly)
    };
    let all: Vec<usize> = (0..cols).collect();
    let slope = fit_with(&all)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut boot: Vec<f64> = (0..resamples)
        .filter_map(|_| {
            let pick: Vec<usize> = (0..cols).map(|_| rng.random_range(0..cols)).collect();
            fit_with(&pick)
        })
        .collect();
    if boot.is_empty() {
        return Some(SlopeFit {
            slope,
            lo: slope,
            hi: slope,
        });
    }
    boot.sort_by(f64::total_cmp);
    let q = |p: f64| boot[((boot.len() - 1) as f64 * p).round() as usize];
    Some(SlopeFit {
        slope,
        lo: q(0.025),
        hi: q(0.975),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let x = [1e-9, 1e-8, 1e-7];
        let g: Vec<Vec<f64>> = x
            .iter()
            .map(|v: &f64| vec![v.powf(-0.3), 0.5 * v.powf(-0.3)])
            .collect();
        let f = fit_max_growth(&x, &g, 50, 1).unwrap();
        assert!((f.slope + 0.3).abs() < 1e-12);
        assert!((f.lo + 0.3).abs() < 1e-12 && (f.hi + 0.3).abs() < 1e-12);
    }

    #[test]
    fn singleton_is_undefined() {
        assert!(fit_max_growth(&[1e-8], &[vec![3.0]], 10, 1).is_none());
        assert!(ls_slope(&[2.0, 2.0], &[1.0, 3.0]).is_none());
    }

    #[test]
    fn failed_rows_are_dropped() {
        let x = [1.0, 10.0, 100.0];
        let g = vec![vec![1.0], vec![f64::NAN], vec![100.0]];
        assert!((fit_max_growth(&x, &g, 0, 1).unwrap().slope - 1.0).abs() < 1e-12);
    }
}
