//! Exact-penalty DC reformulation of the binary program and the DCA loop.
//!
//! The penalized objective is F_t(x) = c'x + t p(x) over the relaxation
//! polytope. Each DCA step linearizes the concave part at the iterate and
//! minimizes the resulting convex surrogate: a linear program for the
//! piecewise-linear and quadratic penalties, a convex QP handled by
//! conditional gradient (with the same LP as its oracle) for the
//! trigonometric one.

use crate::error::{Error, Result};
use crate::ilp::BinaryLinearProgram;
use crate::simplex::{LpStatus, SimplexInstance};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::f64::consts::PI;
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PenaltyKind {
    /// sum of min(x_i, 1 - x_i); concave piecewise linear.
    P1,
    /// sum of x_i (1 - x_i); concave quadratic.
    P2,
    /// sum of sin^2(pi x_i); penalization is inexact.
    P3,
}

impl PenaltyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PenaltyKind::P1 => "p1",
            PenaltyKind::P2 => "p2",
            PenaltyKind::P3 => "p3",
        }
    }
}

#[derive(Debug, Clone)]
pub struct DcaConfig {
    pub kind: PenaltyKind,
    /// Penalty weight; large enough for exactness on every tested instance.
    pub t: f64,
    /// Stop when the iterate stops moving ...
    pub eps1: f64,
    /// ... or the penalized objective stops improving.
    pub eps2: f64,
    pub max_iters: usize,
    /// Multiply t by 10 (up to 1e8) whenever DCA converges nonbinary.
    pub t_schedule: bool,
}

impl Default for DcaConfig {
    fn default() -> Self {
        DcaConfig {
            kind: PenaltyKind::P2,
            t: 1e5,
            eps1: 1e-6,
            eps2: 1e-8,
            max_iters: 200,
            t_schedule: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DcaResult {
    pub x: Vec<f64>,
    /// F_t at the final iterate.
    pub objective: f64,
    pub iterations: usize,
    /// Penalized objective at every iterate that lies in the polytope.
    pub trajectory: Vec<f64>,
    /// p(x) at the same iterates.
    pub trajectory_penalty: Vec<f64>,
    pub binary_feasible: bool,
    pub lp_solves: u64,
}

impl DcaResult {
    /// CSV dump of the trajectory, for debugging.
    pub fn write_trace_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "iteration,objective,penalty")?;
        for (i, (f, p)) in self.trajectory.iter().zip(&self.trajectory_penalty).enumerate() {
            writeln!(w, "{},{},{}", i, f, p)?;
        }
        Ok(())
    }
}

/// p(x) over the binary-designated coordinates.
pub fn penalty_value(kind: PenaltyKind, x: &[f64], mask: &[bool]) -> f64 {
    x.iter()
        .zip(mask)
        .filter(|(_, m)| **m)
        .map(|(&v, _)| match kind {
            PenaltyKind::P1 => v.min(1.0 - v),
            PenaltyKind::P2 => v * (1.0 - v),
            PenaltyKind::P3 => (PI * v).sin().powi(2),
        })
        .sum()
}

/// One subgradient of h at x (coordinates off the mask carry zero). At the
/// p1 tie x_i = 1/2 the selection is the constant 1.
pub fn subgrad_u(kind: PenaltyKind, x: &[f64], mask: &[bool]) -> Vec<f64> {
    x.iter()
        .zip(mask)
        .map(|(&v, &m)| {
            if !m {
                return 0.0;
            }
            match kind {
                PenaltyKind::P1 => {
                    if v > 0.5 {
                        1.0
                    } else if v < 0.5 {
                        -1.0
                    } else {
                        1.0
                    }
                }
                PenaltyKind::P2 => 2.0 * v - 1.0,
                PenaltyKind::P3 => 2.0 * PI * PI * v - PI * (2.0 * PI * v).sin(),
            }
        })
        .collect()
}

/// y = -c + t u with u in the subdifferential of h at x.
pub fn subgrad_h(kind: PenaltyKind, x: &[f64], t: f64, c: &[f64], mask: &[bool]) -> Vec<f64> {
    subgrad_u(kind, x, mask)
        .into_iter()
        .zip(c)
        .map(|(u, &ci)| -ci + t * u)
        .collect()
}

fn norm2(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// DCA from `x0` (clamped into the box; row feasibility is not required).
/// Node-level bound fixings can be supplied without rebuilding the instance.
pub fn dca(
    bp: &BinaryLinearProgram,
    cfg: &DcaConfig,
    x0: &[f64],
    extra_bounds: Option<&[(usize, f64, f64)]>,
) -> Result<DcaResult> {
    if !(cfg.t > 0.0) || !(cfg.eps1 > 0.0) || !(cfg.eps2 > 0.0) || cfg.max_iters == 0 {
        return Err(Error::Config(
            "penalty weight, tolerances and iteration cap must be positive".into(),
        ));
    }
    let mut inst = SimplexInstance::new(bp, None, extra_bounds)?;
    let mask = &bp.binary_mask;
    let c = &bp.objective;
    let mut t = cfg.t;

    // effective box including any node-level fixings
    let mut lo = bp.lower.clone();
    let mut hi = bp.upper.clone();
    if let Some(eb) = extra_bounds {
        for &(v, l, u) in eb {
            lo[v] = lo[v].max(l);
            hi[v] = hi[v].min(u);
        }
    }
    let mut x: Vec<f64> = x0
        .iter()
        .enumerate()
        .map(|(i, &v)| if lo[i] <= hi[i] { v.clamp(lo[i], hi[i]) } else { lo[i] })
        .collect();
    let f_t = |x: &[f64], t: f64| bp.objective_value(x) + t * penalty_value(cfg.kind, x, mask);

    let mut trajectory = Vec::new();
    let mut trajectory_penalty = Vec::new();
    let mut rows_ok = bp.rows_satisfied(&x);
    let mut prev_f = if rows_ok {
        let f = f_t(&x, t);
        trajectory.push(f);
        trajectory_penalty.push(penalty_value(cfg.kind, &x, mask));
        f
    } else {
        f64::INFINITY
    };

    let mut lp_solves = 0u64;
    let mut iterations = 0usize;
    while iterations < cfg.max_iters {
        iterations += 1;
        let y = subgrad_h(cfg.kind, &x, t, c, mask);
        let x_next = match cfg.kind {
            PenaltyKind::P1 | PenaltyKind::P2 => {
                // argmin -<y, x> over the polytope
                let cost: Vec<f64> = y.iter().map(|v| -v).collect();
                let sol = inst.resolve_with_cost(&cost)?;
                lp_solves += 1;
                match sol.status {
                    LpStatus::Optimal => sol.x,
                    LpStatus::Infeasible => {
                        return Err(Error::Infeasible("DCA subproblem polytope is empty".into()))
                    }
                    LpStatus::Unbounded => {
                        return Err(Error::Internal("unbounded DCA subproblem".into()))
                    }
                }
            }
            PenaltyKind::P3 => {
                let (z, solves) = frank_wolfe_quadratic(&mut inst, mask, t, &y, &x, rows_ok)?;
                lp_solves += solves;
                z
            }
        };
        let f_next = f_t(&x_next, t);
        trajectory.push(f_next);
        trajectory_penalty.push(penalty_value(cfg.kind, &x_next, mask));
        let step = norm2(&x_next, &x);
        let df = (f_next - prev_f).abs();
        let converged = step <= cfg.eps1 || df <= cfg.eps2;
        x = x_next;
        rows_ok = true;
        prev_f = f_next;
        if converged {
            if cfg.t_schedule
                && penalty_value(cfg.kind, &x, mask) > 1e-6
                && t < 1e8
            {
                t *= 10.0;
                prev_f = f_t(&x, t);
                continue;
            }
            break;
        }
    }

    let binary_feasible = bp.is_binary_feasible(&x);
    Ok(DcaResult {
        objective: prev_f,
        x,
        iterations,
        trajectory,
        trajectory_penalty,
        binary_feasible,
        lp_solves,
    })
}

/// Conditional gradient for min t pi^2 |x_mask|^2 - <y, x> over the polytope,
/// using the simplex as the linear minimization oracle. Stops at duality gap
/// 1e-7 or after a fixed number of oracle calls.
fn frank_wolfe_quadratic(
    inst: &mut SimplexInstance,
    mask: &[bool],
    t: f64,
    y: &[f64],
    start: &[f64],
    start_feasible: bool,
) -> Result<(Vec<f64>, u64)> {
    const GAP_TOL: f64 = 1e-7;
    // At large penalty weights the quadratic dominates and the gap shrinks
    // like 1/k; starting from the current iterate keeps the outer descent
    // valid for any step budget, so the budget stays small.
    const MAX_STEPS: usize = 50;
    let q = t * PI * PI;
    let grad = |z: &[f64]| -> Vec<f64> {
        z.iter()
            .zip(mask)
            .zip(y)
            .map(|((&zi, &m), &yi)| if m { 2.0 * q * zi - yi } else { -yi })
            .collect()
    };
    let mut solves = 0u64;
    // starting at the current iterate keeps the outer DCA descent exact; an
    // infeasible start is replaced by the best vertex of its linearization
    let mut z = if start_feasible {
        start.to_vec()
    } else {
        let g0 = grad(start);
        let sol = inst.resolve_with_cost(&g0)?;
        solves += 1;
        match sol.status {
            LpStatus::Optimal => sol.x,
            LpStatus::Infeasible => {
                return Err(Error::Infeasible("QP subproblem polytope is empty".into()))
            }
            LpStatus::Unbounded => return Err(Error::Internal("unbounded QP oracle".into())),
        }
    };
    for _ in 0..MAX_STEPS {
        let g = grad(&z);
        let sol = inst.resolve_with_cost(&g)?;
        solves += 1;
        let v = match sol.status {
            LpStatus::Optimal => sol.x,
            _ => return Err(Error::Internal("oracle failed inside conditional gradient".into())),
        };
        let gap: f64 = g.iter().zip(&z).zip(&v).map(|((gi, zi), vi)| gi * (zi - vi)).sum();
        if gap <= GAP_TOL {
            break;
        }
        let diff: Vec<f64> = v.iter().zip(&z).map(|(vi, zi)| vi - zi).collect();
        let denom: f64 = 2.0
            * q
            * diff
                .iter()
                .zip(mask)
                .filter(|(_, m)| **m)
                .map(|(d, _)| d * d)
                .sum::<f64>();
        let theta = if denom > 1e-18 { (gap / denom).clamp(0.0, 1.0) } else { 1.0 };
        for (zi, di) in z.iter_mut().zip(&diff) {
            *zi += theta * di;
        }
        if theta * diff.iter().map(|d| d * d).sum::<f64>().sqrt() <= 1e-12 {
            break;
        }
    }
    Ok((z, solves))
}

/// Diagnostic report around the exact-penalty threshold formula
/// t0 = (min over the binary set - relaxation value) / m, with m the least
/// positive penalty over polytope vertices. Vertices are sampled by solving
/// the relaxation under random objectives; oracle-sized instances only.
#[derive(Debug, Clone)]
pub struct PenaltyThresholdReport {
    pub alpha0: f64,
    pub min_over_binaries: f64,
    /// Least positive penalty over the sampled vertex set, when any vertex
    /// is fractional.
    pub m: Option<f64>,
    pub t0: f64,
    pub vertices_sampled: usize,
}

pub fn penalty_threshold_report(
    bp: &BinaryLinearProgram,
    kind: PenaltyKind,
    samples: usize,
    seed: u64,
) -> Result<PenaltyThresholdReport> {
    let masked = bp.binary_mask.iter().filter(|m| **m).count();
    if masked > 24 {
        return Err(Error::SizeGuard(
            "penalty threshold diagnostics are oracle-sized only".into(),
        ));
    }
    let relax = crate::simplex::solve_lp(bp, None, None, None)?;
    if relax.status != LpStatus::Optimal {
        return Err(Error::Infeasible("relaxation is infeasible".into()));
    }
    let feasible = crate::ilp::enumerate_feasible(bp)?;
    if feasible.is_empty() {
        return Err(Error::Infeasible("binary feasible set is empty".into()));
    }
    let min_over_binaries = feasible
        .iter()
        .map(|x| bp.objective_value(x))
        .fold(f64::INFINITY, f64::min);

    let mut rng = StdRng::seed_from_u64(seed);
    let mut inst = SimplexInstance::new(bp, None, None)?;
    let mut vertices: Vec<Vec<f64>> = vec![relax.x.clone()];
    for _ in 0..samples {
        let c: Vec<f64> = (0..bp.n_vars()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let sol = inst.resolve_with_cost(&c)?;
        if sol.status == LpStatus::Optimal {
            let rounded: Vec<f64> = sol.x.iter().map(|v| (v * 1e9).round() / 1e9).collect();
            if !vertices.iter().any(|u| u == &rounded) {
                vertices.push(rounded);
            }
        }
    }
    let m = vertices
        .iter()
        .map(|v| penalty_value(kind, v, &bp.binary_mask))
        .filter(|p| *p > 1e-9)
        .fold(f64::INFINITY, f64::min);
    let m = if m.is_finite() { Some(m) } else { None };
    let numerator = (min_over_binaries - relax.value).max(0.0);
    let t0 = match m {
        // the convention 1/(+inf) = 0 when no vertex has positive penalty
        None => 0.0,
        Some(_) if numerator <= 1e-12 => 0.0,
        Some(mv) => numerator / mv,
    };
    Ok(PenaltyThresholdReport {
        alpha0: relax.value,
        min_over_binaries,
        m,
        t0,
        vertices_sampled: vertices.len(),
    })
}
