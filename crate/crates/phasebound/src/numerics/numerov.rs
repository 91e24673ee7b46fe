//! Numerov propagation for y'' = f(x) y and a node-count eigenvalue solver
//! for the 1D Schrodinger problem with hard walls.

/// Count sign changes of the Numerov solution integrated from the left wall.
///
/// y'' = f(x) y, y(x0) = 0, with periodic renormalization against overflow.
/// The count equals the number of Dirichlet eigenvalues below the trial
/// energy encoded in `f`.
pub fn node_count<F: Fn(f64) -> f64>(f: &F, x0: f64, h: f64, n: usize) -> usize {
    let h2 = h * h;
    let w = |x: f64| 1.0 + h2 * f(x) / 12.0;
    let mut ym = 0.0f64;
    let mut y = h; // arbitrary scale
    let mut xm = x0;
    let mut x = x0 + h;
    let mut nodes = 0;
    let mut prev_sign = y.signum();
    for _ in 1..n {
        let xp = x + h;
        let yp = ((12.0 - 10.0 * w(x)) * y - w(xm) * ym) / w(xp);
        if yp != 0.0 {
            let s = yp.signum();
            if s != prev_sign && prev_sign != 0.0 {
                nodes += 1;
            }
            prev_sign = s;
        }
        ym = y;
        y = yp;
        xm = x;
        x = xp;
        if y.abs() > 1e200 {
            ym /= 1e200;
            y /= 1e200;
        }
    }
    nodes
}

/// All Schrodinger bound levels of mass `mass` in potential `u` below zero,
/// on [-half_width, half_width] with `n` grid points, refined to `tol_e`.
pub fn schrodinger_bound_levels<U: Fn(f64) -> f64>(
    u: &U,
    mass: f64,
    half_width: f64,
    n: usize,
    tol_e: f64,
) -> Vec<f64> {
    let h = 2.0 * half_width / (n as f64 - 1.0);
    let x0 = -half_width;
    let mut u_min = f64::INFINITY;
    for i in 0..n {
        u_min = u_min.min(u(x0 + i as f64 * h));
    }
    if u_min >= 0.0 {
        return Vec::new();
    }
    let count_at = |eps: f64| {
        let f = |x: f64| 2.0 * mass * (u(x) - eps);
        node_count(&f, x0, h, n)
    };
    let eps_top = -tol_e.max(1e-300);
    let total = count_at(eps_top);
    let mut levels = Vec::with_capacity(total);
    let mut lo = u_min;
    for t in 0..total {
        // Level t sits where the node count passes from t to t+1.
        let (mut a, mut b) = (lo, eps_top);
        while b - a > tol_e {
            let m = 0.5 * (a + b);
            if count_at(m) > t {
                b = m;
            } else {
                a = m;
            }
        }
        let e = 0.5 * (a + b);
        levels.push(e);
        lo = e;
    }
    levels
}

#[cfg(test)]
mod tests {
    use super::*;

    // Harmonic oscillator: u = x^2 / 2 - depth, mass 1, levels at
    // -depth + (n + 1/2).
    #[test]
    fn harmonic_levels() {
        let depth = 4.0;
        let u = |x: f64| 0.5 * x * x - depth;
        let levels = schrodinger_bound_levels(&u, 1.0, 12.0, 6001, 1e-11);
        assert_eq!(levels.len(), 4);
        for (i, e) in levels.iter().enumerate() {
            let expect = -depth + (i as f64 + 0.5);
            assert!((e - expect).abs() < 1e-7, "level {i}: {e} vs {expect}");
        }
    }
}
