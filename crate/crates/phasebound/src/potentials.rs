//! Catalog of 1D confining potentials with closed-form primitives, total
//! strength, characteristic width, and monotonicity decomposition.
//!
//! Units are dimensionless throughout (hbar = s = 1). The strength integral
//! G = ∫ U dx is stored together with its decomposition G = pi (n_G + dn_G),
//! dn_G in [0, 1), which controls the single-level regime and the zero-mode
//! thresholds.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::pchip::Pchip;
use crate::numerics::quadrature;

pub const DEFAULT_TABLE_DECAY_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// G * delta(x): handled symbolically, never sampled.
    Delta { g: f64 },
    /// -U0 / cosh(x / d)
    Sech { u0: f64, d: f64 },
    /// U0 * exp(-|x| / d)
    Exponential { u0: f64, d: f64 },
    /// -U0 / ((x/d)^2 + 1)
    Lorentzian { u0: f64, d: f64 },
    /// (U0/2) * ln((x^2 + (h2-h1)^2) / (x^2 + (h2+h1)^2))
    TopGate { u0: f64, h1: f64, h2: f64 },
    /// Monotone cubic interpolant of a sample table, zero outside.
    Tabulated { table: Pchip },
}

#[derive(Debug, Clone)]
pub struct Potential {
    pub shape: Shape,
    /// G = integral of U over the line.
    pub strength_g: f64,
    /// G = pi * (n_g + delta_n_g), delta_n_g in [0, 1).
    pub n_g: i64,
    pub delta_n_g: f64,
    /// Smallest half-width holding 99% of the strength (second-moment radius
    /// when G = 0); zero for the delta potential.
    pub width_d: f64,
}

impl Potential {
    pub fn delta(g: f64) -> Result<Self> {
        if !g.is_finite() {
            return Err(Error::InvalidParams("delta strength must be finite".into()));
        }
        Ok(Self::finish(Shape::Delta { g }, g))
    }

    pub fn sech(u0: f64, d: f64) -> Result<Self> {
        check_width(d)?;
        Ok(Self::finish(Shape::Sech { u0, d }, -PI * u0 * d))
    }

    pub fn exponential(u0: f64, d: f64) -> Result<Self> {
        check_width(d)?;
        Ok(Self::finish(Shape::Exponential { u0, d }, 2.0 * u0 * d))
    }

    pub fn lorentzian(u0: f64, d: f64) -> Result<Self> {
        check_width(d)?;
        Ok(Self::finish(Shape::Lorentzian { u0, d }, -PI * u0 * d))
    }

    pub fn top_gate(u0: f64, h1: f64, h2: f64) -> Result<Self> {
        if !(h1 > 0.0) || !(h2 > 0.0) || h1 >= h2 {
            return Err(Error::InvalidParams(format!(
                "top-gate geometry requires 0 < h1 < h2 (got h1={h1}, h2={h2})"
            )));
        }
        Ok(Self::finish(Shape::TopGate { u0, h1, h2 }, -2.0 * PI * u0 * h1))
    }

    pub fn tabulated(xs: Vec<f64>, us: Vec<f64>) -> Result<Self> {
        Self::tabulated_with_tolerance(xs, us, DEFAULT_TABLE_DECAY_TOL)
    }

    pub fn tabulated_with_tolerance(xs: Vec<f64>, us: Vec<f64>, decay_tol: f64) -> Result<Self> {
        if xs.len() != us.len() || xs.len() < 4 {
            return Err(Error::InvalidParams(
                "table needs at least 4 (x, U) rows of equal length".into(),
            ));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParams(
                "table abscissae must be strictly increasing".into(),
            ));
        }
        let umax = us.iter().fold(0.0f64, |a, &u| a.max(u.abs()));
        if umax > 0.0 {
            let edge = us[0].abs().max(us.last().unwrap().abs());
            if edge > decay_tol * umax {
                return Err(Error::InvalidParams(format!(
                    "table does not decay at its ends (edge |U| = {edge:e} vs max {umax:e})"
                )));
            }
        }
        let table = Pchip::new(xs, us);
        let g = table.total_integral();
        Ok(Self::finish(Shape::Tabulated { table }, g))
    }

    fn finish(shape: Shape, g: f64) -> Self {
        let q = g / PI;
        let n_g = q.floor();
        let delta_n_g = q - n_g;
        let mut pot = Potential {
            shape,
            strength_g: g,
            n_g: n_g as i64,
            delta_n_g,
            width_d: 0.0,
        };
        pot.width_d = pot.compute_width();
        pot
    }

    /// U(x) for the continuous part; zero everywhere for the delta shape.
    pub(crate) fn u(&self, x: f64) -> f64 {
        match &self.shape {
            Shape::Delta { .. } => 0.0,
            Shape::Sech { u0, d } => -u0 / (x / d).cosh(),
            Shape::Exponential { u0, d } => u0 * (-(x.abs()) / d).exp(),
            Shape::Lorentzian { u0, d } => {
                let t = x / d;
                -u0 / (t * t + 1.0)
            }
            Shape::TopGate { u0, h1, h2 } => {
                let a = h2 - h1;
                let b = h2 + h1;
                let x2 = x * x;
                0.5 * u0 * ((a * a - b * b) / (x2 + b * b)).ln_1p()
            }
            Shape::Tabulated { table } => table.eval(x),
        }
    }

    /// Pointwise evaluation; the delta potential is singular at its site.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::InvalidParams(format!("x must be finite, got {x}")));
        }
        if let Shape::Delta { .. } = self.shape {
            if x == 0.0 {
                return Err(Error::EvalAtSingularity { x });
            }
        }
        Ok(self.u(x))
    }

    /// Point-supported components as (location, strength).
    pub fn delta_components(&self) -> Vec<(f64, f64)> {
        match self.shape {
            Shape::Delta { g } => vec![(0.0, g)],
            _ => Vec::new(),
        }
    }

    /// Integral of U from -infinity to x (delta step included for x > 0).
    pub fn integral_from_neg_inf(&self, x: f64) -> f64 {
        match &self.shape {
            Shape::Delta { g } => {
                if x > 0.0 {
                    *g
                } else {
                    0.0
                }
            }
            Shape::Sech { u0, d } => -u0 * d * ((x / d).tanh().asin() + 0.5 * PI),
            Shape::Exponential { u0, d } => {
                if x <= 0.0 {
                    u0 * d * (x / d).exp()
                } else {
                    u0 * d * (2.0 - (-x / d).exp())
                }
            }
            Shape::Lorentzian { u0, d } => -u0 * d * ((x / d).atan() + 0.5 * PI),
            Shape::TopGate { u0, h1, h2 } => {
                let a = h2 - h1;
                let b = h2 + h1;
                let anti = 0.5
                    * u0
                    * (x * ((a * a - b * b) / (x * x + b * b)).ln_1p() + 2.0 * a * (x / a).atan()
                        - 2.0 * b * (x / b).atan());
                anti + PI * u0 * h1
            }
            Shape::Tabulated { table } => table.integral_from_left(x),
        }
    }

    /// Primitive integral with limits and the x-weighted integrability flag.
    pub fn primitive(&self) -> Primitive {
        let x_weighted_integrable = match self.shape {
            Shape::Delta { .. }
            | Shape::Sech { .. }
            | Shape::Exponential { .. }
            | Shape::Tabulated { .. } => true,
            // 1/x^2 tails: x U(x) decays like 1/x, not integrable.
            Shape::Lorentzian { .. } | Shape::TopGate { .. } => false,
        };
        Primitive {
            x0: f64::NEG_INFINITY,
            limit_neg: 0.0,
            limit_pos: self.strength_g,
            x_weighted_integrable,
            pot: self.clone(),
        }
    }

    /// max |U| over the line (excluding delta spikes).
    pub fn sup_abs_u(&self) -> f64 {
        match &self.shape {
            Shape::Delta { .. } => 0.0,
            Shape::Sech { u0, .. } | Shape::Exponential { u0, .. } | Shape::Lorentzian { u0, .. } => {
                u0.abs()
            }
            Shape::TopGate { u0, h1, h2 } => {
                (u0 * ((h2 - h1) / (h2 + h1)).ln()).abs()
            }
            Shape::Tabulated { table } => table.ys.iter().fold(0.0f64, |a, &u| a.max(u.abs())),
        }
    }

    /// inf U over the line (never positive: U decays to zero).
    pub fn inf_u(&self) -> f64 {
        match &self.shape {
            Shape::Delta { .. } => 0.0,
            Shape::Sech { u0, .. } | Shape::Lorentzian { u0, .. } => (-u0).min(0.0),
            Shape::Exponential { u0, .. } => u0.min(0.0),
            Shape::TopGate { u0, h1, h2 } => (u0 * ((h2 - h1) / (h2 + h1)).ln()).min(0.0),
            Shape::Tabulated { table } => table.ys.iter().fold(0.0f64, |a, &u| a.min(u)),
        }
    }

    /// Abscissa of the deepest / strongest point, used as a matching point.
    pub fn center(&self) -> f64 {
        match &self.shape {
            Shape::Tabulated { table } => {
                let mut best = (0.0, -1.0);
                for (x, u) in table.xs.iter().zip(&table.ys) {
                    if u.abs() > best.1 {
                        best = (*x, u.abs());
                    }
                }
                best.0
            }
            _ => 0.0,
        }
    }

    /// Radius outside of which |U| is monotonically decaying.
    pub fn core_radius(&self) -> f64 {
        let bp = self
            .monotone_breakpoints()
            .iter()
            .fold(0.0f64, |a, &x| a.max(x.abs()));
        match &self.shape {
            Shape::Tabulated { table } => {
                bp.max(table.xs[0].abs()).max(table.xs.last().unwrap().abs())
            }
            _ => bp + self.width_d,
        }
    }

    fn monotone_breakpoints(&self) -> Vec<f64> {
        match &self.shape {
            Shape::Delta { .. } => Vec::new(),
            Shape::Sech { u0, .. } | Shape::Exponential { u0, .. } | Shape::Lorentzian { u0, .. } => {
                if *u0 == 0.0 {
                    Vec::new()
                } else {
                    vec![0.0]
                }
            }
            Shape::TopGate { u0, .. } => {
                if *u0 == 0.0 {
                    Vec::new()
                } else {
                    vec![0.0]
                }
            }
            Shape::Tabulated { table } => {
                let slopes = table.node_slopes();
                let mut bps = Vec::new();
                let mut prev: Option<f64> = None;
                for (i, &s) in slopes.iter().enumerate() {
                    if s == 0.0 {
                        continue;
                    }
                    if let Some(p) = prev {
                        if p * s < 0.0 {
                            bps.push(table.xs[i]);
                        }
                    }
                    prev = Some(s);
                }
                bps
            }
        }
    }

    /// Split the line into intervals of strict monotonicity of U.
    pub fn monotone_decomposition(&self) -> Result<MonotoneDecomposition> {
        let bps = self.monotone_breakpoints();
        if bps.len() > 64 {
            return Err(Error::NonMonotoneResolutionFailure(format!(
                "{} extrema found; table too noisy",
                bps.len()
            )));
        }
        let mut edges = vec![f64::NEG_INFINITY];
        edges.extend(&bps);
        edges.push(f64::INFINITY);
        let mut intervals = Vec::with_capacity(edges.len() - 1);
        for w in edges.windows(2) {
            let (x_lo, x_hi) = (w[0], w[1]);
            let u_lo = if x_lo.is_finite() { self.u(x_lo) } else { 0.0 };
            let u_hi = if x_hi.is_finite() { self.u(x_hi) } else { 0.0 };
            intervals.push(MonotoneInterval {
                x_lo,
                x_hi,
                u_lo,
                u_hi,
                increasing: u_hi >= u_lo,
            });
        }
        Ok(MonotoneDecomposition {
            breakpoints: bps,
            intervals,
            pot: self.clone(),
        })
    }

    fn compute_width(&self) -> f64 {
        if let Shape::Delta { .. } = self.shape {
            return 0.0;
        }
        let g = self.strength_g;
        if g != 0.0 {
            // Smallest W with |int_{-W}^{W} U - G| < 0.01 |G|.
            let target = 0.01 * g.abs();
            let resid = |w: f64| {
                ((self.integral_from_neg_inf(w) - self.integral_from_neg_inf(-w)) - g).abs()
            };
            let mut w = 1e-3;
            let mut it = 0;
            while resid(w) >= target && it < 200 {
                w *= 2.0;
                it += 1;
            }
            if it == 0 {
                return w;
            }
            let (mut lo, mut hi) = (w / 2.0, w);
            for _ in 0..60 {
                let m = 0.5 * (lo + hi);
                if resid(m) < target {
                    hi = m;
                } else {
                    lo = m;
                }
            }
            hi
        } else {
            // Second-moment radius of |U|.
            let hw = match &self.shape {
                Shape::Tabulated { table } => table.xs[0].abs().max(table.xs.last().unwrap().abs()),
                _ => 1.0,
            };
            let norm = quadrature::integrate(|x| self.u(x).abs(), -hw, hw, 1e-12).unwrap_or(0.0);
            if norm <= 0.0 {
                return 1.0;
            }
            let m2 = quadrature::integrate(|x| x * x * self.u(x).abs(), -hw, hw, 1e-12)
                .unwrap_or(0.0);
            (m2 / norm).sqrt().max(1e-6)
        }
    }
}

fn check_width(d: f64) -> Result<()> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::InvalidParams(format!("width d must be positive, got {d}")));
    }
    Ok(())
}

/// f_{x0}(x) = integral of U from the anchor to x.
pub struct Primitive {
    pub x0: f64,
    pub limit_neg: f64,
    pub limit_pos: f64,
    pub x_weighted_integrable: bool,
    pot: Potential,
}

impl Primitive {
    pub fn value(&self, x: f64) -> f64 {
        let base = if self.x0.is_finite() {
            self.pot.integral_from_neg_inf(self.x0)
        } else {
            0.0
        };
        self.pot.integral_from_neg_inf(x) - base
    }

    pub fn with_anchor(mut self, x0: f64) -> Self {
        let shift = if x0.is_finite() {
            self.pot.integral_from_neg_inf(x0)
        } else {
            0.0
        };
        self.limit_neg = -shift;
        self.limit_pos = self.pot.strength_g - shift;
        self.x0 = x0;
        self
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MonotoneInterval {
    pub x_lo: f64,
    pub x_hi: f64,
    pub u_lo: f64,
    pub u_hi: f64,
    pub increasing: bool,
}

impl MonotoneInterval {
    pub fn u_range(&self) -> (f64, f64) {
        (self.u_lo.min(self.u_hi), self.u_lo.max(self.u_hi))
    }
}

pub struct MonotoneDecomposition {
    pub breakpoints: Vec<f64>,
    pub intervals: Vec<MonotoneInterval>,
    pot: Potential,
}

impl MonotoneDecomposition {
    pub fn n_intervals(&self) -> usize {
        self.intervals.len()
    }

    /// Slope field G_j(U) = dU/dx expressed through U on interval j.
    pub fn slope_at_u(&self, j: usize, u: f64) -> f64 {
        let iv = &self.intervals[j];
        let sign = if iv.increasing { 1.0 } else { -1.0 };
        let mag = match &self.pot.shape {
            Shape::Delta { .. } => 0.0,
            Shape::Sech { u0, d } => {
                let c = u0.abs();
                u.abs() * (c * c - u * u).max(0.0).sqrt() / (c * d)
            }
            Shape::Exponential { d, .. } => u.abs() / d,
            Shape::Lorentzian { u0, d } => {
                let c = u0.abs();
                2.0 * u * u / (c * d) * ((c / u.abs()) - 1.0).max(0.0).sqrt()
            }
            Shape::TopGate { .. } | Shape::Tabulated { .. } => {
                return self.slope_numeric(j, u);
            }
        };
        sign * mag
    }

    /// Invert U on interval j by bisection, then differentiate.
    fn slope_numeric(&self, j: usize, u: f64) -> f64 {
        let iv = &self.intervals[j];
        let (u_min, u_max) = iv.u_range();
        if u <= u_min || u >= u_max {
            // Endpoints of the range are stationary (or at infinity).
            if (u - iv.u_lo).abs() < (u - iv.u_hi).abs() && iv.x_lo.is_finite() {
                return self.derivative_at(iv.x_lo);
            }
            if iv.x_hi.is_finite() {
                return self.derivative_at(iv.x_hi);
            }
            return 0.0;
        }
        let big = 1e12;
        let (mut a, mut b) = (iv.x_lo.max(-big), iv.x_hi.min(big));
        // U is monotone on [a, b]; bisect U(x) = u.
        let fa = self.pot.u(a) - u;
        let x = crate::numerics::roots::bisect(
            |x| self.pot.u(x) - u,
            a,
            b,
            fa,
            1e-13 * (b - a).abs().max(1.0),
        );
        let _ = (&mut a, &mut b);
        self.derivative_at(x)
    }

    fn derivative_at(&self, x: f64) -> f64 {
        match &self.pot.shape {
            Shape::TopGate { u0, h1, h2 } => {
                let a = h2 - h1;
                let b = h2 + h1;
                u0 * x * (1.0 / (x * x + a * a) - 1.0 / (x * x + b * b))
            }
            Shape::Tabulated { table } => table.derivative(x),
            Shape::Sech { u0, d } => {
                let t = x / d;
                u0 / d * t.sinh() / (t.cosh() * t.cosh())
            }
            Shape::Exponential { u0, d } => -x.signum() * u0 / d * (-(x.abs()) / d).exp(),
            Shape::Lorentzian { u0, d } => {
                let t = x / d;
                2.0 * u0 * t / (d * (t * t + 1.0) * (t * t + 1.0))
            }
            Shape::Delta { .. } => 0.0,
        }
    }

    /// Interval index containing x.
    pub fn interval_of(&self, x: f64) -> usize {
        match self
            .breakpoints
            .binary_search_by(|b| b.partial_cmp(&x).unwrap())
        {
            Ok(i) => i + 1,
            Err(i) => i,
        }
    }
}

/// Parse the potential grammar:
/// `kind=<name> U0=<v> d=<v> G=<v> h1=<v> h2=<v> file=<path>`.
pub fn parse_spec(spec: &str) -> Result<Potential> {
    let mut kind = None;
    let mut vals: std::collections::HashMap<&str, String> = Default::default();
    for tok in spec.split_whitespace() {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| Error::InvalidParams(format!("expected key=value, got `{tok}`")))?;
        match key {
            "kind" => kind = Some(val.to_string()),
            "U0" | "d" | "G" | "h1" | "h2" | "file" => {
                vals.insert(
                    match key {
                        "U0" => "U0",
                        "d" => "d",
                        "G" => "G",
                        "h1" => "h1",
                        "h2" => "h2",
                        _ => "file",
                    },
                    val.to_string(),
                );
            }
            _ => return Err(Error::InvalidParams(format!("unknown key `{key}`"))),
        }
    }
    let kind = kind.ok_or_else(|| Error::InvalidParams("missing kind=<name>".into()))?;
    let num = |k: &str| -> Result<f64> {
        vals.get(k)
            .ok_or_else(|| Error::InvalidParams(format!("kind {kind} requires {k}=<v>")))?
            .parse::<f64>()
            .map_err(|e| Error::InvalidParams(format!("bad value for {k}: {e}")))
    };
    match kind.as_str() {
        "delta" => Potential::delta(num("G")?),
        "sech" => Potential::sech(num("U0")?, num("d")?),
        "exponential" => Potential::exponential(num("U0")?, num("d")?),
        "lorentzian" => Potential::lorentzian(num("U0")?, num("d")?),
        "topgate" | "top-gate" => Potential::top_gate(num("U0")?, num("h1")?, num("h2")?),
        "tabulated" => {
            let path = vals
                .get("file")
                .ok_or_else(|| Error::InvalidParams("tabulated requires file=<path>".into()))?;
            let (xs, us) = load_table(std::path::Path::new(path))?;
            Potential::tabulated(xs, us)
        }
        other => Err(Error::InvalidParams(format!("unknown potential kind `{other}`"))),
    }
}

/// Two-column whitespace-separated `x U` table; `#` starts a comment line.
pub fn load_table(path: &std::path::Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let text = std::fs::read_to_string(path)?;
    let mut xs = Vec::new();
    let mut us = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let (x, u) = (it.next(), it.next());
        match (x, u) {
            (Some(x), Some(u)) => {
                let x: f64 = x.parse().map_err(|e| {
                    Error::InvalidParams(format!("line {}: bad x: {e}", lineno + 1))
                })?;
                let u: f64 = u.parse().map_err(|e| {
                    Error::InvalidParams(format!("line {}: bad U: {e}", lineno + 1))
                })?;
                xs.push(x);
                us.push(u);
            }
            _ => {
                return Err(Error::InvalidParams(format!(
                    "line {}: expected two columns",
                    lineno + 1
                )))
            }
        }
    }
    Ok((xs, us))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn sech_strength_closed_form() {
        let p = Potential::sech(1.0, 0.5).unwrap();
        assert!((p.strength_g - (-PI * 0.5)).abs() < 1e-14);
        assert_eq!(p.n_g, -1);
        assert!((p.delta_n_g - 0.5).abs() < 1e-14);
    }

    #[test]
    fn zero_delta_is_trivial() {
        let p = Potential::delta(0.0).unwrap();
        assert_eq!(p.strength_g, 0.0);
        assert_eq!(p.n_g, 0);
        assert_eq!(p.delta_n_g, 0.0);
        assert_eq!(p.width_d, 0.0);
    }

    #[test]
    fn top_gate_strength_matches_quadrature() {
        // Independent check of the closed form: adaptive quadrature over
        // (-X, X) plus Richardson extrapolation in 1/X for the 1/x tail.
        let p = Potential::top_gate(1.0, 0.25, 1.0).unwrap();
        let ival = |hw: f64| quadrature::integrate(|x| p.u(x), -hw, hw, 1e-13).unwrap();
        let (i1, i2) = (ival(4000.0), ival(8000.0));
        // Tail of the integral behaves like c / X, so extrapolate: I = 2*I2 - I1.
        let extrap = 2.0 * i2 - i1;
        assert!(
            (extrap - p.strength_g).abs() < 1e-6,
            "quadrature {extrap} vs closed form {}",
            p.strength_g
        );
        assert!((p.strength_g - (-0.5 * PI)).abs() < 1e-12);
    }

    #[test]
    fn evaluate_examples() {
        let lor = Potential::lorentzian(1.0, 1.0).unwrap();
        assert!((lor.evaluate(0.0).unwrap() - (-1.0)).abs() < 1e-15);
        assert!((lor.evaluate(1.0).unwrap() - (-0.5)).abs() < 1e-15);
        let sech = Potential::sech(1.0, 1.0).unwrap();
        assert!((sech.evaluate(0.0).unwrap() - (-1.0)).abs() < 1e-15);
        let del = Potential::delta(1.0).unwrap();
        assert!(matches!(del.evaluate(0.0), Err(Error::EvalAtSingularity { .. })));
        assert_eq!(del.evaluate(1.0).unwrap(), 0.0);
    }

    #[test]
    fn primitive_examples() {
        let del = Potential::delta(1.2).unwrap();
        let f = del.primitive().with_anchor(-1.0);
        assert_eq!(f.value(-0.5), 0.0);
        assert_eq!(f.value(0.5), 1.2);

        let sech = Potential::sech(1.0, 1.0).unwrap();
        let f = sech.primitive();
        assert!((f.limit_pos - f.limit_neg - (-PI)).abs() < 1e-12);

        let ex = Potential::exponential(0.5, 1.0).unwrap();
        let f = ex.primitive();
        assert!((f.limit_pos - f.limit_neg - 1.0).abs() < 1e-12);
        assert!(f.x_weighted_integrable);
        assert!(!Potential::lorentzian(1.0, 1.0).unwrap().primitive().x_weighted_integrable);
    }

    #[test]
    fn primitive_matches_quadrature_for_all_kinds() {
        let pots = vec![
            Potential::sech(0.8, 1.3).unwrap(),
            Potential::exponential(-0.5, 0.7).unwrap(),
            Potential::lorentzian(1.1, 0.9).unwrap(),
            Potential::top_gate(0.6, 0.3, 1.7).unwrap(),
        ];
        for p in &pots {
            for x in [-3.0, -0.4, 0.0, 0.9, 5.0] {
                let q = quadrature::integrate_from_neg_infinity(|t| p.u(t), x, 1e-11).unwrap();
                let f = p.integral_from_neg_inf(x);
                assert!(
                    (q - f).abs() < 1e-8,
                    "{:?} at {x}: quad {q} vs closed {f}",
                    p.shape
                );
            }
        }
    }

    #[test]
    fn monotone_decomposition_slopes_match_finite_differences() {
        let pots = vec![
            Potential::sech(1.0, 1.0).unwrap(),
            Potential::lorentzian(1.0, 1.0).unwrap(),
            Potential::exponential(0.7, 1.2).unwrap(),
            Potential::top_gate(1.0, 0.25, 1.0).unwrap(),
        ];
        for p in &pots {
            let dec = p.monotone_decomposition().unwrap();
            assert_eq!(dec.n_intervals(), 2, "{:?}", p.shape);
            for &x in &[-2.0, -0.7, 0.6, 1.9] {
                let j = dec.interval_of(x);
                let u = p.u(x);
                let g = dec.slope_at_u(j, u);
                let h = 1e-5;
                let fd = (p.u(x + h) - p.u(x - h)) / (2.0 * h);
                assert!(
                    rel(g, fd) < 1e-5 || (g - fd).abs() < 1e-9,
                    "{:?} at x={x}: slope {g} vs fd {fd}",
                    p.shape
                );
            }
        }
    }

    #[test]
    fn lorentzian_slope_closed_form() {
        let p = Potential::lorentzian(1.0, 1.0).unwrap();
        let dec = p.monotone_decomposition().unwrap();
        for &u in &[-0.9, -0.5, -0.2] {
            let expect = 2.0 * u * u * (-1.0 / u - 1.0f64).sqrt();
            assert!((dec.slope_at_u(1, u) - expect).abs() < 1e-12);
            assert!((dec.slope_at_u(0, u) + expect).abs() < 1e-12);
        }
    }

    #[test]
    fn strength_decomposition_is_exact() {
        for g in [-7.3, -PI, -0.5, 0.0, 0.3, PI, 4.0, 9.42] {
            let p = Potential::delta(g).unwrap();
            assert!(
                (PI * (p.n_g as f64 + p.delta_n_g) - g).abs() < 1e-12 * g.abs().max(1.0),
                "g = {g}"
            );
            assert!((0.0..1.0).contains(&p.delta_n_g));
        }
    }

    #[test]
    fn width_captures_99_percent() {
        let p = Potential::sech(1.0, 1.0).unwrap();
        let w = p.width_d;
        let inside = p.integral_from_neg_inf(w) - p.integral_from_neg_inf(-w);
        assert!((inside - p.strength_g).abs() <= 0.0101 * p.strength_g.abs());
        // Slightly smaller window must not capture 99%.
        let w2 = 0.9 * w;
        let inside2 = p.integral_from_neg_inf(w2) - p.integral_from_neg_inf(-w2);
        assert!((inside2 - p.strength_g).abs() > 0.0099 * p.strength_g.abs());
    }

    #[test]
    fn tabulated_roundtrip_and_checks() {
        let xs: Vec<f64> = (0..401).map(|i| -10.0 + 0.05 * i as f64).collect();
        let us: Vec<f64> = xs.iter().map(|x| -1.0 / x.cosh()).collect();
        let p = Potential::tabulated(xs, us).unwrap();
        let exact = Potential::sech(1.0, 1.0).unwrap();
        assert!((p.strength_g - exact.strength_g).abs() < 1e-5);
        assert!((p.u(0.123) - exact.u(0.123)).abs() < 1e-6);
        assert_eq!(p.monotone_decomposition().unwrap().n_intervals(), 2);

        let bad = Potential::tabulated(vec![0.0, 1.0, 1.0, 2.0], vec![0.0; 4]);
        assert!(matches!(bad, Err(Error::InvalidParams(_))));
        // Non-decaying table is rejected.
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let us = vec![1.0; 10];
        assert!(matches!(
            Potential::tabulated(xs, us),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn spec_grammar() {
        let p = parse_spec("kind=sech U0=1 d=0.5").unwrap();
        assert!((p.strength_g + PI * 0.5).abs() < 1e-14);
        assert!(parse_spec("kind=nosuch U0=1").is_err());
        assert!(parse_spec("kind=topgate U0=1 h1=2 h2=1").is_err());
        assert!(parse_spec("kind=sech U0=1 d=-1").is_err());
    }
}
