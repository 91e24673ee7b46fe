//! Monotone cubic (Fritsch-Carlson) interpolation with exact piecewise
//! integrals, used for tabulated potentials.

#[derive(Debug, Clone, PartialEq)]
pub struct Pchip {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    slopes: Vec<f64>,
    /// cumulative[i] = integral from xs[0] to xs[i]
    cumulative: Vec<f64>,
}

impl Pchip {
    /// Build from strictly increasing abscissae.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        assert_eq!(xs.len(), ys.len());
        assert!(xs.len() >= 2);
        let n = xs.len();
        let mut d = vec![0.0; n - 1];
        for i in 0..n - 1 {
            d[i] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
        }
        let mut m = vec![0.0; n];
        m[0] = d[0];
        m[n - 1] = d[n - 2];
        for i in 1..n - 1 {
            if d[i - 1] * d[i] <= 0.0 {
                m[i] = 0.0;
            } else {
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                let w1 = 2.0 * h1 + h0;
                let w2 = h1 + 2.0 * h0;
                m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        // Clamp endpoint slopes to preserve monotonicity on edge intervals.
        for (i, edge) in [(0usize, 0usize), (n - 1, n - 2)] {
            if m[i] * d[edge] <= 0.0 {
                m[i] = 0.0;
            } else if m[i].abs() > 3.0 * d[edge].abs() {
                m[i] = 3.0 * d[edge];
            }
        }
        let mut cumulative = vec![0.0; n];
        for i in 0..n - 1 {
            let h = xs[i + 1] - xs[i];
            // Exact integral of the cubic Hermite segment.
            let seg = 0.5 * h * (ys[i] + ys[i + 1]) + h * h / 12.0 * (m[i] - m[i + 1]);
            cumulative[i + 1] = cumulative[i] + seg;
        }
        Pchip { xs, ys, slopes: m, cumulative }
    }

    fn segment(&self, x: f64) -> usize {
        match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.xs.len() - 2),
        }
    }

    /// Interpolated value; zero outside the table.
    pub fn eval(&self, x: f64) -> f64 {
        if x < self.xs[0] || x > *self.xs.last().unwrap() {
            return 0.0;
        }
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[i] + h10 * h * self.slopes[i] + h01 * self.ys[i + 1] + h11 * h * self.slopes[i + 1]
    }

    /// Derivative of the interpolant; zero outside the table.
    pub fn derivative(&self, x: f64) -> f64 {
        if x < self.xs[0] || x > *self.xs.last().unwrap() {
            return 0.0;
        }
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let dh00 = (6.0 * t2 - 6.0 * t) / h;
        let dh10 = 3.0 * t2 - 4.0 * t + 1.0;
        let dh01 = (-6.0 * t2 + 6.0 * t) / h;
        let dh11 = 3.0 * t2 - 2.0 * t;
        dh00 * self.ys[i] + dh10 * self.slopes[i] + dh01 * self.ys[i + 1] + dh11 * self.slopes[i + 1]
    }

    /// Integral from the left table edge to x (clamped to the table).
    pub fn integral_from_left(&self, x: f64) -> f64 {
        if x <= self.xs[0] {
            return 0.0;
        }
        if x >= *self.xs.last().unwrap() {
            return *self.cumulative.last().unwrap();
        }
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (t2, t3, t4) = (t * t, t * t * t, t * t * t * t);
        // Antiderivatives of the Hermite basis on [0, 1], scaled by h.
        let ih00 = 0.5 * t4 - t3 + t;
        let ih10 = 0.25 * t4 - 2.0 / 3.0 * t3 + 0.5 * t2;
        let ih01 = -0.5 * t4 + t3;
        let ih11 = 0.25 * t4 - t3 / 3.0;
        self.cumulative[i]
            + h * (ih00 * self.ys[i]
                + ih10 * h * self.slopes[i]
                + ih01 * self.ys[i + 1]
                + ih11 * h * self.slopes[i + 1])
    }

    pub fn total_integral(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Node slopes, for monotonicity splitting.
    pub fn node_slopes(&self) -> &[f64] {
        &self.slopes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_nodes_and_monotone() {
        let xs: Vec<f64> = (0..40).map(|i| i as f64 * 0.25 - 5.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| -1.0 / x.cosh()).collect();
        let p = Pchip::new(xs.clone(), ys.clone());
        for (x, y) in xs.iter().zip(&ys) {
            assert!((p.eval(*x) - y).abs() < 1e-14);
        }
        // Monotone on the left half.
        let mut prev = p.eval(-5.0);
        let mut x = -5.0;
        while x < -0.26 {
            x += 0.01;
            let v = p.eval(x);
            assert!(v <= prev + 1e-12);
            prev = v;
        }
    }

    #[test]
    fn integral_matches_quadrature() {
        let xs: Vec<f64> = (0..201).map(|i| i as f64 * 0.1 - 10.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (-x * x / 4.0).exp()).collect();
        let p = Pchip::new(xs, ys);
        let total = p.total_integral();
        let expect = (4.0 * std::f64::consts::PI).sqrt(); // integral of exp(-x^2/4), tails < 1e-11
        assert!((total - expect).abs() < 1e-5, "{total} vs {expect}");
    }
}
