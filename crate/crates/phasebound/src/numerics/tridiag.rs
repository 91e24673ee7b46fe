//! Symmetric tridiagonal eigenvalues by Sturm-sequence bisection, with
//! inverse iteration for eigenvectors.

/// Symmetric tridiagonal matrix: `diag` has n entries, `off` has n-1.
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len());
        SymTridiag { diag, off }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `x` (Sturm count via LDL^T signs).
    pub fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE / f64::EPSILON;
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.n() {
            if q.abs() < tiny {
                q = if q < 0.0 { -tiny } else { tiny };
            }
            q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / q;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// All eigenvalues in (lo, hi), each refined to absolute tolerance `tol`.
    pub fn eigenvalues_in(&self, lo: f64, hi: f64, tol: f64) -> Vec<f64> {
        let mut out = Vec::new();
        let c_lo = self.count_below(lo);
        let c_hi = self.count_below(hi);
        if c_hi > c_lo {
            self.split(lo, hi, c_lo, c_hi, tol, &mut out);
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }

    fn split(&self, lo: f64, hi: f64, c_lo: usize, c_hi: usize, tol: f64, out: &mut Vec<f64>) {
        if hi - lo <= tol {
            let e = 0.5 * (lo + hi);
            for _ in 0..(c_hi - c_lo) {
                out.push(e);
            }
            return;
        }
        if c_hi - c_lo == 1 {
            // Bisect a single eigenvalue.
            let (mut a, mut b) = (lo, hi);
            while b - a > tol {
                let m = 0.5 * (a + b);
                if self.count_below(m) > c_lo {
                    b = m;
                } else {
                    a = m;
                }
            }
            out.push(0.5 * (a + b));
            return;
        }
        let m = 0.5 * (lo + hi);
        let c_m = self.count_below(m);
        if c_m > c_lo {
            self.split(lo, m, c_lo, c_m, tol, out);
        }
        if c_hi > c_m {
            self.split(m, hi, c_m, c_hi, tol, out);
        }
    }

    /// Eigenvector by inverse iteration at a converged eigenvalue estimate.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.n();
        let mut v: Vec<f64> = (0..n)
            .map(|i| if i % 2 == 0 { 1.0 } else { -0.5 })
            .collect();
        normalize(&mut v);
        // Small shift keeps the factorization well defined at the eigenvalue.
        let scale = self.diag.iter().fold(0.0f64, |a, &d| a.max(d.abs()))
            + self.off.iter().fold(0.0f64, |a, &e| a.max(e.abs()));
        let shift = lambda + scale * 1e-13;
        for _ in 0..4 {
            v = self.solve_shifted(shift, &v);
            normalize(&mut v);
        }
        v
    }

    /// Solve (T - shift) x = b with partial pivoting (fill into 2nd superdiag).
    fn solve_shifted(&self, shift: f64, b: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut d: Vec<f64> = self.diag.iter().map(|&x| x - shift).collect();
        let mut du: Vec<f64> = self.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let dl: Vec<f64> = self.off.clone();
        let mut x: Vec<f64> = b.to_vec();
        // Forward elimination.
        for i in 0..n - 1 {
            if dl[i].abs() <= d[i].abs() {
                let piv = if d[i] != 0.0 { d[i] } else { f64::MIN_POSITIVE };
                let m = dl[i] / piv;
                d[i + 1] -= m * du[i];
                x[i + 1] -= m * x[i];
                if i + 2 < n {
                    du2[i] = 0.0;
                }
            } else {
                // Swap rows i and i+1.
                let m = d[i] / dl[i];
                d[i] = dl[i];
                let t = d[i + 1];
                d[i + 1] = du[i] - m * t;
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -m * du2[i];
                }
                du[i] = t;
                x.swap(i, i + 1);
                x[i + 1] -= m * x[i];
            }
        }
        // Back substitution.
        let last = n - 1;
        x[last] /= if d[last] != 0.0 { d[last] } else { f64::MIN_POSITIVE };
        if n >= 2 {
            x[last - 1] = (x[last - 1] - du[last - 1] * x[last]) / d[last - 1];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
        }
        x
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // Toeplitz tridiagonal (a on diag, b off) has eigenvalues
    // a + 2 b cos(k pi / (n+1)), an independent closed form.
    #[test]
    fn toeplitz_spectrum() {
        let n = 40;
        let (a, b) = (0.3, -1.1);
        let t = SymTridiag::new(vec![a; n], vec![b; n - 1]);
        let mut expect: Vec<f64> = (1..=n)
            .map(|k| a + 2.0 * b * (k as f64 * PI / (n as f64 + 1.0)).cos())
            .collect();
        expect.sort_by(|p, q| p.partial_cmp(q).unwrap());
        let got = t.eigenvalues_in(a - 2.0 * b.abs() - 1.0, a + 2.0 * b.abs() + 1.0, 1e-12);
        assert_eq!(got.len(), n);
        for (g, e) in got.iter().zip(&expect) {
            assert!((g - e).abs() < 1e-10, "{g} vs {e}");
        }
    }

    #[test]
    fn eigenvector_residual() {
        let n = 60;
        let t = SymTridiag::new(
            (0..n).map(|i| (i as f64 * 0.1).sin()).collect(),
            vec![0.4; n - 1],
        );
        let evs = t.eigenvalues_in(-2.0, 2.0, 1e-13);
        assert!(!evs.is_empty());
        let lambda = evs[evs.len() / 2];
        let v = t.eigenvector(lambda);
        // || (T - lambda) v ||
        let mut res: f64 = 0.0;
        for i in 0..n {
            let mut r = (t.diag[i] - lambda) * v[i];
            if i > 0 {
                r += t.off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                r += t.off[i] * v[i + 1];
            }
            res += r * r;
        }
        assert!(res.sqrt() < 1e-8, "residual {}", res.sqrt());
    }
}
