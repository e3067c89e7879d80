// SPDX-License-Identifier: MIT OR Apache-2.0

//! Dense least squares via Householder QR with column-norm pivoting.

/// Column-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[j * self.rows + i] = v;
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    fn column_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        for (j, &c) in v.iter().enumerate() {
            if c != 0.0 {
                for (o, &a) in out.iter_mut().zip(self.column(j)) {
                    *o += a * c;
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LstsqSolution {
    pub coef: Vec<f64>,
    pub rss: f64,
    /// Numerical rank fell below the column count and a ridge term was added.
    pub regularized: bool,
    pub rank: usize,
}

/// Residual sum of squares of `y - a * coef`.
pub fn residual_ss(a: &Matrix, y: &[f64], coef: &[f64]) -> f64 {
    a.mul_vec(coef)
        .iter()
        .zip(y)
        .map(|(f, y)| (y - f) * (y - f))
        .sum()
}

/// Minimises `||y - a * beta||^2`.
///
/// Rank is read off the pivoted `R`. If it is short of the column count the
/// problem is re-solved with a ridge of `1e-10 * trace(A'A) / cols`.
pub fn solve(a: &Matrix, y: &[f64]) -> LstsqSolution {
    assert_eq!(a.rows, y.len(), "design/response length mismatch");
    let k = a.cols;
    if k == 0 {
        return LstsqSolution {
            coef: Vec::new(),
            rss: y.iter().map(|v| v * v).sum(),
            regularized: false,
            rank: 0,
        };
    }
    let qr = PivotedQr::new(a.clone(), y.to_vec());
    if qr.rank == k {
        let coef = qr.coefficients();
        let rss = residual_ss(a, y, &coef);
        return LstsqSolution {
            coef,
            rss,
            regularized: false,
            rank: k,
        };
    }
    let trace: f64 = (0..k)
        .map(|j| a.column(j).iter().map(|v| v * v).sum::<f64>())
        .sum();
    let lambda = if trace > 0.0 {
        1e-10 * trace / k as f64
    } else {
        1e-10
    };
    let mut aug = Matrix::zeros(a.rows + k, k);
    for j in 0..k {
        aug.column_mut(j)[..a.rows].copy_from_slice(a.column(j));
        aug.set(a.rows + j, j, lambda.sqrt());
    }
    let mut y_aug = y.to_vec();
    y_aug.resize(a.rows + k, 0.0);
    let rank = qr.rank;
    let coef = PivotedQr::new(aug, y_aug).coefficients();
    let rss = residual_ss(a, y, &coef);
    LstsqSolution {
        coef,
        rss,
        regularized: true,
        rank,
    }
}

struct PivotedQr {
    /// Householder-reduced matrix; upper triangle holds R.
    qr: Matrix,
    /// Q' y.
    qty: Vec<f64>,
    /// perm[i] = original column sitting at position i.
    perm: Vec<usize>,
    rank: usize,
}

impl PivotedQr {
    fn new(mut a: Matrix, mut y: Vec<f64>) -> Self {
        let (n, k) = (a.rows, a.cols);
        let steps = n.min(k);
        let mut perm: Vec<usize> = (0..k).collect();
        let mut norms: Vec<f64> = (0..k)
            .map(|j| a.column(j).iter().map(|v| v * v).sum())
            .collect();
        let mut diag = Vec::with_capacity(steps);
        for i in 0..steps {
            // pivot on the largest remaining column norm (recomputed, not downdated)
            for (j, norm) in norms.iter_mut().enumerate().skip(i) {
                *norm = a.column(j)[i..].iter().map(|v| v * v).sum();
            }
            let p = (i..k).fold(i, |best, j| if norms[j] > norms[best] { j } else { best });
            if p != i {
                for r in 0..n {
                    let t = a.get(r, i);
                    a.set(r, i, a.get(r, p));
                    a.set(r, p, t);
                }
                perm.swap(i, p);
                norms.swap(i, p);
            }
            let col = &a.column(i)[i..];
            let alpha = col.iter().map(|v| v * v).sum::<f64>().sqrt();
            if alpha == 0.0 {
                diag.push(0.0);
                continue;
            }
            let r_ii = if col[0] > 0.0 { -alpha } else { alpha };
            // v = x - r_ii e1, stored in place of the column
            let mut v: Vec<f64> = col.to_vec();
            v[0] -= r_ii;
            let vtv: f64 = v.iter().map(|t| t * t).sum();
            for j in (i + 1)..k {
                let cj = &mut a.column_mut(j)[i..];
                let dot: f64 = v.iter().zip(cj.iter()).map(|(a, b)| a * b).sum();
                let f = 2.0 * dot / vtv;
                for (c, vv) in cj.iter_mut().zip(&v) {
                    *c -= f * vv;
                }
            }
            let yi = &mut y[i..];
            let dot: f64 = v.iter().zip(yi.iter()).map(|(a, b)| a * b).sum();
            let f = 2.0 * dot / vtv;
            for (c, vv) in yi.iter_mut().zip(&v) {
                *c -= f * vv;
            }
            let ci = a.column_mut(i);
            ci[i] = r_ii;
            ci[i + 1..].iter_mut().for_each(|c| *c = 0.0);
            diag.push(r_ii);
        }
        let tol = (n.max(k) as f64) * f64::EPSILON * diag.first().map_or(0.0, |d| d.abs());
        let rank = diag.iter().take_while(|d| d.abs() > tol).count();
        Self {
            qr: a,
            qty: y,
            perm,
            rank,
        }
    }

    // Back substitution on the leading rank x rank block, then unpermute.
    fn coefficients(&self) -> Vec<f64> {
        let k = self.qr.cols;
        let r = self.rank;
        let mut z = vec![0.0; k];
        for i in (0..r).rev() {
            let mut acc = self.qty[i];
            for (j, zj) in z.iter().enumerate().take(r).skip(i + 1) {
                acc -= self.qr.get(i, j) * zj;
            }
            z[i] = acc / self.qr.get(i, i);
        }
        let mut coef = vec![0.0; k];
        for (pos, &orig) in self.perm.iter().enumerate() {
            coef[orig] = z[pos];
        }
        coef
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_rows(rows: &[&[f64]]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), rows[0].len());
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    #[test]
    fn exact_fit_recovers_coefficients() {
        let a = from_rows(&[&[1.0, 0.0], &[1.0, 1.0], &[1.0, 2.0], &[1.0, 3.0]]);
        let y = [1.0, 3.0, 5.0, 7.0];
        let s = solve(&a, &y);
        assert!(!s.regularized);
        assert!((s.coef[0] - 1.0).abs() < 1e-12 && (s.coef[1] - 2.0).abs() < 1e-12);
        assert!(s.rss < 1e-20);
    }

    #[test]
    fn matches_normal_equations() {
        // small overdetermined system, oracle via 2x2 normal equations
        let a = from_rows(&[
            &[1.0, 0.5],
            &[1.0, -1.0],
            &[1.0, 2.0],
            &[1.0, 0.0],
            &[1.0, 3.0],
        ]);
        let y = [0.3, -1.2, 2.5, 0.1, 2.9];
        let (mut s11, mut s12, mut s22, mut t1, mut t2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (i, yi) in y.iter().enumerate() {
            let (u, v) = (a.get(i, 0), a.get(i, 1));
            s11 += u * u;
            s12 += u * v;
            s22 += v * v;
            t1 += u * yi;
            t2 += v * yi;
        }
        let det = s11 * s22 - s12 * s12;
        let b0 = (s22 * t1 - s12 * t2) / det;
        let b1 = (s11 * t2 - s12 * t1) / det;
        let s = solve(&a, &y);
        assert!((s.coef[0] - b0).abs() < 1e-12 && (s.coef[1] - b1).abs() < 1e-12);
        assert!((s.rss - residual_ss(&a, &y, &[b0, b1])).abs() < 1e-12);
    }

    #[test]
    fn rank_deficient_is_regularized() {
        let a = from_rows(&[&[1.0, 2.0], &[1.0, 2.0], &[1.0, 2.0]]);
        let s = solve(&a, &[1.0, 2.0, 3.0]);
        assert!(s.regularized);
        assert_eq!(s.rank, 1);
        assert!(s.coef.iter().all(|c| c.is_finite()));
        // fitted values are the mean
        assert!((s.rss - 2.0).abs() < 1e-6);
    }
}
