//! Small dense/banded solvers used by the PDE codes.

use crate::error::{Error, Result};

/// Square banded matrix with `kl` sub- and `ku` super-diagonals, stored with
/// `kl` extra rows of fill for partial pivoting.
#[derive(Debug, Clone)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    ld: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let ld = 2 * kl + ku + 1;
        BandedMatrix { n, kl, ku, ld, data: vec![0.0; ld * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        // column-major band storage, row offset kl + ku + i - j
        j * self.ld + self.kl + self.ku + i - j
    }

    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && j + self.kl >= i && i + self.ku >= j
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "entry ({i},{j}) outside band");
        let s = self.slot(i, j);
        self.data[s] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[self.slot(i, j)]
        } else {
            0.0
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for j in 0..self.n {
            let lo = j.saturating_sub(self.ku);
            let hi = (j + self.kl).min(self.n - 1);
            for (i, yi) in y.iter_mut().enumerate().take(hi + 1).skip(lo) {
                *yi += self.data[self.slot(i, j)] * x[j];
            }
        }
        y
    }

    /// Solve `A x = b` by LU with partial pivoting. Consumes the matrix.
    pub fn solve(mut self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        let (kl, ku) = (self.kl, self.ku);
        let kv = ku + kl; // upper bandwidth of U after pivoting
        let mut x = b.to_vec();
        let scale = self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return Err(Error::Singular);
        }
        let ld = self.ld;
        let idx = |i: usize, j: usize| j * ld + kl + ku + i - j;
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = self.data[idx(k, k)].abs();
            for i in k + 1..=last {
                let v = self.data[idx(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= scale * 1e-300 {
                return Err(Error::Singular);
            }
            let jmax = (k + kv).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    self.data.swap(idx(k, j), idx(p, j));
                }
                x.swap(k, p);
            }
            let piv = self.data[idx(k, k)];
            if last == k {
                continue;
            }
            // multipliers, stored contiguously below the pivot
            let mut mult = vec![0.0; last - k];
            for (t, i) in (k + 1..=last).enumerate() {
                let s = idx(i, k);
                mult[t] = self.data[s] / piv;
                self.data[s] = 0.0;
                x[i] -= mult[t] * x[k];
            }
            for j in k + 1..=jmax {
                let u = self.data[idx(k, j)];
                if u == 0.0 {
                    continue;
                }
                let start = idx(k + 1, j);
                let col = &mut self.data[start..start + mult.len()];
                for (a, m) in col.iter_mut().zip(&mult) {
                    *a -= m * u;
                }
            }
        }
        for k in (0..n).rev() {
            let jmax = (k + kv).min(n - 1);
            let mut s = x[k];
            for j in k + 1..=jmax {
                s -= self.data[idx(k, j)] * x[j];
            }
            x[k] = s / self.data[idx(k, k)];
        }
        Ok(x)
    }
}

/// Thomas algorithm for a tridiagonal system. `a` is the sub-diagonal
/// (a[0] unused), `c` the super-diagonal (c[n-1] unused).
pub fn solve_tridiagonal(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> Result<Vec<f64>> {
    let n = b.len();
    let mut cp = vec![0.0; n];
    let mut dp = vec![0.0; n];
    let mut den = b[0];
    if den == 0.0 {
        return Err(Error::Singular);
    }
    cp[0] = c[0] / den;
    dp[0] = d[0] / den;
    for i in 1..n {
        den = b[i] - a[i] * cp[i - 1];
        if den == 0.0 || !den.is_finite() {
            return Err(Error::Singular);
        }
        cp[i] = if i + 1 < n { c[i] / den } else { 0.0 };
        dp[i] = (d[i] - a[i] * dp[i - 1]) / den;
    }
    let mut x = dp;
    for i in (0..n - 1).rev() {
        x[i] -= cp[i] * x[i + 1];
    }
    Ok(x)
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn banded_matches_dense_with_pivoting() {
        let n = 7;
        let mut a = BandedMatrix::zeros(n, 2, 1);
        let mut dense = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                if a.in_band(i, j) {
                    // small diagonal forces pivoting
                    let v = if i == j { 1e-3 } else { (i * 3 + j + 1) as f64 * 0.37 };
                    a.add(i, j, v);
                    dense[i][j] = v;
                }
            }
        }
        let xs: Vec<f64> = (0..n).map(|i| (i as f64).sin() + 0.5).collect();
        let b: Vec<f64> = (0..n).map(|i| (0..n).map(|j| dense[i][j] * xs[j]).sum()).collect();
        assert_eq!(a.mul_vec(&xs).len(), n);
        let x = a.solve(&b).unwrap();
        for i in 0..n {
            assert!((x[i] - xs[i]).abs() < 1e-10, "{} vs {}", x[i], xs[i]);
        }
    }

    #[test]
    fn tridiagonal_poisson() {
        let n = 50;
        let a = vec![-1.0; n];
        let b = vec![2.0; n];
        let c = vec![-1.0; n];
        let xs: Vec<f64> = (0..n).map(|i| (i as f64 * 0.1).cos()).collect();
        let d: Vec<f64> = (0..n)
            .map(|i| {
                let l = if i > 0 { xs[i - 1] } else { 0.0 };
                let r = if i + 1 < n { xs[i + 1] } else { 0.0 };
                2.0 * xs[i] - l - r
            })
            .collect();
        let x = solve_tridiagonal(&a, &b, &c, &d).unwrap();
        assert!(x.iter().zip(&xs).all(|(p, q)| (p - q).abs() < 1e-10));
    }

    #[test]
    fn singular_is_reported() {
        let a = BandedMatrix::zeros(3, 1, 1);
        assert_eq!(a.solve(&[1.0, 2.0, 3.0]), Err(Error::Singular));
    }
}
