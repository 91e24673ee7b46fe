//! The variable phase equation
//!
//!     Omega'(x) = 2 (U(x) - E) - 2 p_y sin Omega(x)
//!
//! and its separatrix solutions. For E inside the gap (-p_y, p_y) the free
//! dynamics has two families of stationary phases,
//!
//!     Omega_-(n) = -asin(E / p_y) + 2 pi n        (repels at -inf, attracts at +inf)
//!     Omega_+(n) =  asin(E / p_y) + pi + 2 pi n   (attracts at -inf, repels at +inf)
//!
//! The left separatrix is pinned on Omega_-(0) at -inf, the right separatrix
//! on Omega_+(0) at +inf; bound states occur exactly where the two families
//! degenerate. The integer branch on which the left separatrix terminates is
//! the staircase value driving the level count.
//!
//! Delta components are never sampled: crossing one shifts the phase by
//! exactly 2 G.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::quadrature;
use crate::numerics::rk45::{self, StepControl};
use crate::potentials::Potential;

const TAU: f64 = 2.0 * PI;

/// Solver tolerances shared across the pipeline.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Relative error target of the phase integration.
    pub tol_phase: f64,
    /// Radius (radians) for terminal branch classification.
    pub classify_tol: f64,
    /// Eigenvalue bisection width, relative to p_y.
    pub refine_tol_rel: f64,
    /// Distance of the staircase edge limits from |E| = p_y, relative to p_y.
    pub eps_edge_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_phase: 1e-9,
            classify_tol: 1e-3,
            refine_tol_rel: 1e-8,
            eps_edge_rel: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn step_control(&self) -> StepControl {
        StepControl {
            rtol: self.tol_phase,
            atol: 1e-2 * self.tol_phase,
            max_steps: 20_000_000,
        }
    }
}

/// One (potential, E, p_y) instance with |E| strictly inside the gap.
#[derive(Clone, Copy)]
pub struct PhaseProblem<'a> {
    pub pot: &'a Potential,
    pub e: f64,
    pub p_y: f64,
    pub k: f64,
    r_core: f64,
}

impl<'a> PhaseProblem<'a> {
    pub fn new(pot: &'a Potential, e: f64, p_y: f64) -> Result<Self> {
        if !(p_y > 0.0) || !p_y.is_finite() {
            return Err(Error::InvalidParams(format!("p_y must be positive, got {p_y}")));
        }
        let r = e / p_y;
        if !(r.abs() < 1.0) {
            return Err(Error::InvalidParams(format!(
                "E = {e} must lie strictly inside the gap (-{p_y}, {p_y})"
            )));
        }
        // Cancellation-safe k = sqrt(p_y^2 - E^2).
        let k = p_y * ((1.0 - r) * (1.0 + r)).sqrt();
        Ok(PhaseProblem { pot, e, p_y, k, r_core: pot.core_radius() })
    }

    #[inline]
    pub fn asin_e(&self) -> f64 {
        (self.e / self.p_y).asin()
    }

    /// Repellor-at-minus-infinity / attractor-at-plus-infinity family.
    #[inline]
    pub fn omega_minus(&self, n: i64) -> f64 {
        -self.asin_e() + TAU * n as f64
    }

    /// Attractor-at-minus-infinity / repellor-at-plus-infinity family.
    #[inline]
    pub fn omega_plus(&self, n: i64) -> f64 {
        self.asin_e() + PI + TAU * n as f64
    }

    #[inline]
    fn rhs(&self, x: f64, omega: f64) -> f64 {
        2.0 * (self.pot.u(x) - self.e) - 2.0 * self.p_y * omega.sin()
    }

    /// Step-size ceiling: resolves the local winding scale inside the
    /// potential core and grows linearly in the tails, where the embedded
    /// error estimate governs accuracy and stability rejections cap the
    /// relaxation rate.
    fn max_step(&self, x: f64) -> f64 {
        let scale = self.p_y.max(self.e.abs()).max(self.pot.u(x).abs());
        let core = 0.1 / scale;
        let tail = 0.05 * (x.abs() - self.r_core).max(0.0);
        core.max(tail)
    }

    /// Half-width of the truncated integration domain: covers the potential
    /// support, the e^{-2kx} relaxation, and pushes the remaining tail below
    /// the quasi-equilibrium offset that classification can tolerate.
    pub fn domain_half_width(&self, ctrl: &Tolerances) -> Result<f64> {
        let mut l = (10.0 * self.pot.width_d).max(self.r_core) + 4.0 / self.k;
        let u_tol = 0.3 * ctrl.classify_tol * self.k;
        let mut it = 0;
        while self.pot.u(l).abs().max(self.pot.u(-l).abs()) > u_tol {
            l *= 1.3;
            it += 1;
            if it > 400 || !l.is_finite() {
                return Err(Error::DomainTooSmall { half_width: l });
            }
        }
        Ok(l)
    }

    /// First-order tail of the left separatrix at x = -l:
    /// 2 * int_0^inf U(-l - t) e^{-2 k t} dt.
    pub fn tail_seed_left(&self, l: f64) -> Result<f64> {
        self.tail_seed(-l)
    }

    /// Mirror tail for the right separatrix at x = +l.
    pub fn tail_seed_right(&self, l: f64) -> Result<f64> {
        Ok(-self.tail_seed(l)?)
    }

    fn tail_seed(&self, edge: f64) -> Result<f64> {
        let sign = edge.signum();
        if self.pot.sup_abs_u() == 0.0 {
            return Ok(0.0);
        }
        let k2 = 2.0 * self.k;
        let f = |t: f64| self.pot.u(edge - sign * t) * (-k2 * t).exp();
        // Tabulated potentials vanish identically outside the table.
        let t_max = match &self.pot.shape {
            crate::potentials::Shape::Tabulated { table } => {
                let reach = if sign < 0.0 {
                    -table.xs[0] + edge
                } else {
                    *table.xs.last().unwrap() - edge
                };
                if reach <= 0.0 {
                    return Ok(0.0);
                }
                Some(reach)
            }
            crate::potentials::Shape::Delta { .. } => return Ok(0.0),
            _ => None,
        };
        let val = match t_max {
            Some(tm) => quadrature::integrate(f, 0.0, tm, 1e-14)?,
            None => quadrature::integrate_to_infinity(f, 0.0, 1e-14)?,
        };
        Ok(2.0 * val)
    }
}

/// Terminal classification of a trajectory endpoint against the stationary
/// families on the side it runs toward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TerminalClass {
    /// Settled on the attractor family, branch n, within `classify_tol`.
    Attractor { branch: i64, residual: f64 },
    /// Hugging the repellor family within `classify_tol`; `above` records the
    /// side, which determines the adjacent attractor the true limit selects.
    NearRepellor { branch: i64, above: bool, residual: f64 },
    Unresolved { residual: f64 },
}

impl TerminalClass {
    pub fn residual(&self) -> f64 {
        match *self {
            TerminalClass::Attractor { residual, .. }
            | TerminalClass::NearRepellor { residual, .. }
            | TerminalClass::Unresolved { residual } => residual,
        }
    }
}

/// Sampled solution of the phase equation.
pub struct PhaseTrajectory {
    pub e: f64,
    pub p_y: f64,
    pub x_start: f64,
    pub x_end: f64,
    pub omega_start: f64,
    pub omega_end: f64,
    /// Repellor branch the run was seeded on.
    pub start_branch: i64,
    pub terminal: TerminalClass,
    /// Dense samples (x ascending) when a grid was requested.
    pub xs: Vec<f64>,
    pub omegas: Vec<f64>,
    /// Accepted integration steps when requested (in travel order).
    pub steps: Vec<(f64, f64)>,
}

impl PhaseTrajectory {
    /// max |Omega| over whatever points were recorded.
    pub fn max_abs_omega(&self) -> f64 {
        let a = self
            .omegas
            .iter()
            .chain(self.steps.iter().map(|(_, o)| o))
            .fold(0.0f64, |m, &o| m.max(o.abs()));
        a.max(self.omega_start.abs()).max(self.omega_end.abs())
    }
}

#[derive(Debug, Clone)]
pub enum SampleMode {
    None,
    /// Record every accepted integration step.
    Steps,
    /// Record a uniform grid of this many points across the domain
    /// (forced odd so delta sites at the center are never sampled).
    GridCount(usize),
}

/// Split [x0, x1] at delta sites; each segment carries the phase jump applied
/// after it (zero for the last).
pub(crate) fn delta_segments(pot: &Potential, x0: f64, x1: f64) -> Vec<(f64, f64, f64)> {
    let dir = if x1 >= x0 { 1.0 } else { -1.0 };
    let mut sites: Vec<(f64, f64)> = pot
        .delta_components()
        .into_iter()
        .filter(|(x, _)| (x - x0) * dir > 0.0 && (x1 - x) * dir > 0.0)
        .collect();
    sites.sort_by(|a, b| (dir * a.0).partial_cmp(&(dir * b.0)).unwrap());
    let mut segs = Vec::with_capacity(sites.len() + 1);
    let mut a = x0;
    for (x, g) in sites {
        // Jump is +2G crossing rightward, -2G leftward.
        segs.push((a, x, 2.0 * g * dir));
        a = x;
    }
    segs.push((a, x1, 0.0));
    segs
}

/// General-purpose initial-value integration of the phase equation with
/// delta jumps, adaptive steps, and optional dense output.
pub fn integrate_phase(
    prob: &PhaseProblem,
    omega0: f64,
    x0: f64,
    x1: f64,
    ctrl: &Tolerances,
    mode: SampleMode,
) -> Result<PhaseTrajectory> {
    if x0 == x1 {
        return Err(Error::InvalidParams("x0 and x1 must differ".into()));
    }
    let samples = build_grid(&mode, x0, x1);
    let (omega_end, xs, omegas, steps) =
        run_segments(prob, omega0, x0, x1, ctrl, &samples, matches!(mode, SampleMode::Steps))?;
    let terminal = if x1 > x0 {
        classify_toward_plus_inf(prob, omega_end, ctrl.classify_tol)
    } else {
        classify_toward_minus_inf(prob, omega_end, ctrl.classify_tol)
    };
    Ok(PhaseTrajectory {
        e: prob.e,
        p_y: prob.p_y,
        x_start: x0,
        x_end: x1,
        omega_start: omega0,
        omega_end,
        start_branch: 0,
        terminal,
        xs,
        omegas,
        steps,
    })
}

fn build_grid(mode: &SampleMode, x0: f64, x1: f64) -> Vec<f64> {
    match mode {
        SampleMode::GridCount(n) => {
            let n = (*n).max(3) | 1; // odd
            (0..n)
                .map(|i| x0 + (x1 - x0) * i as f64 / (n - 1) as f64)
                .collect()
        }
        _ => Vec::new(),
    }
}

fn run_segments(
    prob: &PhaseProblem,
    omega0: f64,
    x0: f64,
    x1: f64,
    ctrl: &Tolerances,
    samples: &[f64],
    record_steps: bool,
) -> Result<(f64, Vec<f64>, Vec<f64>, Vec<(f64, f64)>)> {
    let dir = if x1 >= x0 { 1.0 } else { -1.0 };
    let sc = ctrl.step_control();
    let mut omega = omega0;
    let mut xs = Vec::with_capacity(samples.len());
    let mut omegas = Vec::with_capacity(samples.len());
    let mut steps = Vec::new();
    let mut s_idx = 0;
    for (a, b, jump) in delta_segments(prob.pot, x0, x1) {
        let mut seg_samples = Vec::new();
        while s_idx < samples.len() && (samples[s_idx] - b) * dir <= 0.0 {
            seg_samples.push(samples[s_idx]);
            s_idx += 1;
        }
        let sol = rk45::integrate::<1, _, _>(
            |x, y| [prob.rhs(x, y[0])],
            |x, _| prob.max_step(x),
            a,
            b,
            [omega],
            &sc,
            Some(&seg_samples),
            record_steps,
        )?;
        for (sx, sy) in seg_samples.iter().zip(&sol.at_samples) {
            xs.push(*sx);
            omegas.push(sy[0]);
        }
        if record_steps {
            steps.extend(sol.steps.iter().map(|(x, y)| (*x, y[0])));
        }
        omega = sol.y_end[0] + jump;
        if jump != 0.0 && record_steps {
            steps.push((b, omega));
        }
    }
    if dir < 0.0 {
        // Keep dense samples ascending in x.
        xs.reverse();
        omegas.reverse();
    }
    Ok((omega, xs, omegas, steps))
}

pub fn classify_toward_plus_inf(prob: &PhaseProblem, omega: f64, tol: f64) -> TerminalClass {
    let asin_e = prob.asin_e();
    classify(omega, -asin_e, asin_e + PI, tol)
}

pub fn classify_toward_minus_inf(prob: &PhaseProblem, omega: f64, tol: f64) -> TerminalClass {
    let asin_e = prob.asin_e();
    classify(omega, asin_e + PI, -asin_e, tol)
}

fn classify(omega: f64, att_base: f64, rep_base: f64, tol: f64) -> TerminalClass {
    let m_att = ((omega - att_base) / TAU).round();
    let res_att = (omega - (att_base + TAU * m_att)).abs();
    let m_rep = ((omega - rep_base) / TAU).round();
    let rep_val = rep_base + TAU * m_rep;
    let res_rep = (omega - rep_val).abs();
    if res_att <= res_rep && res_att < tol {
        TerminalClass::Attractor { branch: m_att as i64, residual: res_att }
    } else if res_rep < tol {
        TerminalClass::NearRepellor {
            branch: m_rep as i64,
            above: omega > rep_val,
            residual: res_rep,
        }
    } else {
        TerminalClass::Unresolved { residual: res_att.min(res_rep) }
    }
}

/// Left separatrix: seeded on Omega_-(0) at -L with the first-order tail
/// correction, integrated to +L, classified there. An unresolved endpoint
/// triggers one automatic extension of the domain to 2L.
pub fn left_separatrix(
    prob: &PhaseProblem,
    ctrl: &Tolerances,
    mode: SampleMode,
) -> Result<PhaseTrajectory> {
    let l = prob.domain_half_width(ctrl)?;
    let omega0 = prob.omega_minus(0) + prob.tail_seed_left(l)?;
    let mut traj = integrate_phase(prob, omega0, -l, l, ctrl, mode)?;
    traj.omega_start = omega0;
    if let TerminalClass::Unresolved { .. } = traj.terminal {
        extend(prob, &mut traj, 2.0 * l, ctrl)?;
    }
    if let TerminalClass::Unresolved { residual } = traj.terminal {
        return Err(Error::Unresolved { residual });
    }
    Ok(traj)
}

/// Right separatrix: seeded on Omega_+(0) at +L, integrated backward to -L,
/// classified against the attractor family there.
pub fn right_separatrix(
    prob: &PhaseProblem,
    ctrl: &Tolerances,
    mode: SampleMode,
) -> Result<PhaseTrajectory> {
    let l = prob.domain_half_width(ctrl)?;
    let omega0 = prob.omega_plus(0) + prob.tail_seed_right(l)?;
    let mut traj = integrate_phase(prob, omega0, l, -l, ctrl, mode)?;
    traj.omega_start = omega0;
    if let TerminalClass::Unresolved { .. } = traj.terminal {
        extend(prob, &mut traj, 2.0 * l, ctrl)?;
    }
    if let TerminalClass::Unresolved { residual } = traj.terminal {
        return Err(Error::Unresolved { residual });
    }
    Ok(traj)
}

fn extend(prob: &PhaseProblem, traj: &mut PhaseTrajectory, l2: f64, ctrl: &Tolerances) -> Result<()> {
    let forward = traj.x_end > traj.x_start;
    let target = if forward { l2 } else { -l2 };
    let (omega_end, _, _, steps) =
        run_segments(prob, traj.omega_end, traj.x_end, target, ctrl, &[], !traj.steps.is_empty())?;
    traj.steps.extend(steps.into_iter().skip(1));
    traj.x_end = target;
    traj.omega_end = omega_end;
    traj.terminal = if forward {
        classify_toward_plus_inf(prob, omega_end, ctrl.classify_tol)
    } else {
        classify_toward_minus_inf(prob, omega_end, ctrl.classify_tol)
    };
    Ok(())
}

/// Staircase branch of a left-separatrix run. Near-repellor endpoints carry
/// the side information: hugging from above means the true limit is the
/// attractor one branch up.
pub fn left_branch(traj: &PhaseTrajectory) -> Result<(i64, bool)> {
    match traj.terminal {
        TerminalClass::Attractor { branch, .. } => Ok((branch, false)),
        TerminalClass::NearRepellor { branch, above, .. } => {
            Ok((if above { branch + 1 } else { branch }, true))
        }
        TerminalClass::Unresolved { residual } => Err(Error::Unresolved { residual }),
    }
}

/// Diagnostic integral 2 * int (E + p_y sin Omega) dx along a sampled
/// trajectory (trapezoid). Together with 2G it makes up the total variance.
pub fn kappa_along(traj: &PhaseTrajectory) -> f64 {
    let mut acc = 0.0;
    for w in traj.xs.windows(2).zip(traj.omegas.windows(2)) {
        let (xw, ow) = w;
        let f0 = 2.0 * (traj.e + traj.p_y * ow[0].sin());
        let f1 = 2.0 * (traj.e + traj.p_y * ow[1].sin());
        acc += 0.5 * (f0 + f1) * (xw[1] - xw[0]);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::Potential;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn free_potential_separatrices_are_stationary() {
        let pot = Potential::sech(0.0, 1.0).unwrap();
        for &(e, p_y) in &[(0.0, 1.0), (0.3, 0.5), (-0.2, 0.4)] {
            let prob = PhaseProblem::new(&pot, e, p_y).unwrap();
            let l = left_separatrix(&prob, &tols(), SampleMode::None).unwrap();
            assert!((l.omega_end - prob.omega_minus(0)).abs() < 1e-9);
            assert_eq!(left_branch(&l).unwrap().0, 0);
            let r = right_separatrix(&prob, &tols(), SampleMode::None).unwrap();
            assert!((r.omega_end - prob.omega_plus(0)).abs() < 1e-9);
        }
    }

    #[test]
    fn delta_jump_rule_is_exact() {
        let g = 0.8;
        let pot = Potential::delta(g).unwrap();
        let prob = PhaseProblem::new(&pot, 0.1, 0.5).unwrap();
        let eps = 1e-7;
        let traj = integrate_phase(
            &prob,
            prob.omega_minus(0),
            -1.0,
            1.0,
            &tols(),
            SampleMode::GridCount(200001),
        )
        .unwrap();
        // Samples straddling the site differ by 2G up to the smooth drift.
        let i = traj.xs.partition_point(|&x| x < -eps) - 1;
        let j = traj.xs.partition_point(|&x| x <= eps);
        let jump = traj.omegas[j] - traj.omegas[i];
        assert!(
            (jump - 2.0 * g).abs() < 1e-4,
            "jump {jump} vs {}",
            2.0 * g
        );
    }

    #[test]
    fn delta_total_variance_at_top_edge_counts_n_g() {
        // G = pi (1 + 0.3): the left separatrix jumps up by 2G and relaxes
        // down to the stationary point 2 pi below, leaving a 2 pi n_G sweep.
        let g = PI * 1.3;
        let pot = Potential::delta(g).unwrap();
        let p_y = 0.5;
        let ctrl = tols();
        let e = p_y * (1.0 - ctrl.eps_edge_rel);
        let prob = PhaseProblem::new(&pot, e, p_y).unwrap();
        let traj = left_separatrix(&prob, &ctrl, SampleMode::None).unwrap();
        assert_eq!(left_branch(&traj).unwrap().0, 1);
        let e = -p_y * (1.0 - ctrl.eps_edge_rel);
        let prob = PhaseProblem::new(&pot, e, p_y).unwrap();
        let traj = left_separatrix(&prob, &ctrl, SampleMode::None).unwrap();
        assert_eq!(left_branch(&traj).unwrap().0, 2);
    }

    #[test]
    fn free_motion_decreases_at_top_edge() {
        let pot = Potential::sech(0.0, 1.0).unwrap();
        let p_y = 1.0;
        let e = p_y * (1.0 - 1e-6);
        let prob = PhaseProblem::new(&pot, e, p_y).unwrap();
        let omega0 = prob.omega_minus(0) - 0.3;
        let traj = integrate_phase(&prob, omega0, 0.0, 60.0, &tols(), SampleMode::GridCount(301))
            .unwrap();
        for w in traj.omegas.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
    }

    #[test]
    fn constant_on_attractor() {
        let pot = Potential::sech(0.0, 1.0).unwrap();
        let prob = PhaseProblem::new(&pot, 0.2, 1.0).unwrap();
        // Attractor toward +inf is omega_minus.
        let traj = integrate_phase(
            &prob,
            prob.omega_minus(0),
            0.0,
            30.0,
            &tols(),
            SampleMode::None,
        )
        .unwrap();
        assert!((traj.omega_end - prob.omega_minus(0)).abs() < 1e-10);
    }

    #[test]
    fn sech_variance_approaches_twice_strength_at_small_py() {
        let pot = Potential::sech(1.0, 1.0).unwrap();
        let p_y = 0.1;
        let prob = PhaseProblem::new(&pot, 0.0, p_y).unwrap();
        let traj = integrate_phase(
            &prob,
            prob.omega_minus(0),
            -40.0,
            40.0,
            &tols(),
            SampleMode::GridCount(4001),
        )
        .unwrap();
        let d_omega = traj.omega_end - traj.omega_start;
        let kappa = kappa_along(&traj);
        let two_g = 2.0 * pot.strength_g;
        // Variance decomposes into 2G plus the kappa integral, which is O(p_y d).
        assert!(
            (d_omega - two_g - kappa).abs() < 1e-3,
            "dOmega {d_omega} vs 2G {two_g} + kappa {kappa}"
        );
        assert!(kappa.abs() < 10.0 * p_y * 1.0);
        assert!((d_omega - two_g).abs() < 10.0 * p_y);
    }

    #[test]
    fn boundedness_is_insensitive_to_domain_doubling() {
        let pot = Potential::lorentzian(1.0, 1.0).unwrap();
        let ctrl = tols();
        for &e in &[0.05, -0.03] {
            let prob = PhaseProblem::new(&pot, e, 0.1).unwrap();
            let l = prob.domain_half_width(&ctrl).unwrap();
            let t1 = integrate_phase(
                &prob,
                prob.omega_minus(0) + prob.tail_seed_left(l).unwrap(),
                -l,
                l,
                &ctrl,
                SampleMode::Steps,
            )
            .unwrap();
            let t2 = integrate_phase(
                &prob,
                prob.omega_minus(0) + prob.tail_seed_left(2.0 * l).unwrap(),
                -2.0 * l,
                2.0 * l,
                &ctrl,
                SampleMode::Steps,
            )
            .unwrap();
            assert!(t1.max_abs_omega().is_finite());
            assert!(
                (t1.max_abs_omega() - t2.max_abs_omega()).abs() < ctrl.classify_tol,
                "max |Omega| drifted: {} vs {}",
                t1.max_abs_omega(),
                t2.max_abs_omega()
            );
        }
    }

    #[test]
    fn seed_perturbation_does_not_change_branch() {
        // Off-spectrum E: the terminal branch is stable to seed jitter.
        let pot = Potential::lorentzian(1.0, 1.0).unwrap();
        let ctrl = tols();
        let prob = PhaseProblem::new(&pot, 0.0, 0.1).unwrap();
        let l = prob.domain_half_width(&ctrl).unwrap();
        let base = prob.omega_minus(0) + prob.tail_seed_left(l).unwrap();
        let mut branches = Vec::new();
        for d in [-1e-4, 0.0, 1e-4] {
            let t = integrate_phase(&prob, base + d, -l, l, &ctrl, SampleMode::None).unwrap();
            branches.push(left_branch(&t).unwrap().0);
        }
        assert_eq!(branches[0], branches[1]);
        assert_eq!(branches[1], branches[2]);
    }

    #[test]
    fn reversal_consistency() {
        let pot = Potential::sech(1.0, 1.0).unwrap();
        let ctrl = tols();
        let prob = PhaseProblem::new(&pot, 0.1, 0.5).unwrap();
        let (a, b) = (-3.0, 3.0);
        let omega0 = prob.omega_minus(0);
        let fwd = integrate_phase(&prob, omega0, a, b, &ctrl, SampleMode::None).unwrap();
        let back = integrate_phase(&prob, fwd.omega_end, b, a, &ctrl, SampleMode::None).unwrap();
        // Roundtrip error is amplified by the backward instability e^{2k span}.
        let bound = 10.0 * ctrl.tol_phase * (2.0 * prob.k * (b - a)).exp();
        assert!(
            (back.omega_end - omega0).abs() < bound,
            "roundtrip {} vs bound {bound}",
            (back.omega_end - omega0).abs()
        );
    }
}
