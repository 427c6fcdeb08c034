//! Bounded-variable primal simplex over a dense tableau.
//!
//! Solves min c'x over { lb <= x <= ub, rows hold } in two phases with
//! artificial variables, Dantzig pricing by default and Bland's rule engaged
//! after a run of degenerate pivots. Inequality rows get internal slack
//! columns; the caller's variable space is untouched.

use crate::error::{Error, Result};
use crate::ilp::{BinaryLinearProgram, Relation};

const FEAS_TOL: f64 = 1e-8;
const COST_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Basis snapshot usable as a warm start: the basic column of every row plus
/// which nonbasic columns rest at their upper bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    pub basic: Vec<usize>,
    pub at_upper: Vec<bool>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Structural variables only.
    pub x: Vec<f64>,
    pub value: f64,
    pub basis: Option<Basis>,
}

impl LpSolution {
    fn infeasible() -> LpSolution {
        LpSolution {
            status: LpStatus::Infeasible,
            x: Vec::new(),
            value: f64::INFINITY,
            basis: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarState {
    Basic(usize),
    AtLower,
    AtUpper,
}

/// A solvable LP over one polytope. The instance keeps its final basis, so a
/// sequence of solves with changing objectives re-optimizes cheaply.
pub struct SimplexInstance {
    m: usize,
    n_struct: usize,
    n_total: usize,
    /// column-major original matrix rows? kept row-major: a[row][col]
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    cost: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    art_base: usize,
    art_sign: Vec<f64>,

    // mutable solver state
    t: Vec<Vec<f64>>,
    xb: Vec<f64>,
    basic: Vec<usize>,
    state: Vec<VarState>,
    degenerate_run: usize,
    bland: bool,
    solved_feasible: bool,
    pub pivots: u64,
}

impl SimplexInstance {
    pub fn new(
        bp: &BinaryLinearProgram,
        c_override: Option<&[f64]>,
        extra_bounds: Option<&[(usize, f64, f64)]>,
    ) -> Result<SimplexInstance> {
        bp.validate()?;
        let n_struct = bp.n_vars();
        let m = bp.rows.len();
        let n_slack = bp
            .rows
            .iter()
            .filter(|r| r.relation != Relation::Eq)
            .count();
        let n_total = n_struct + n_slack + m;
        let art_base = n_struct + n_slack;

        let mut lower = vec![0.0; n_total];
        let mut upper = vec![0.0; n_total];
        lower[..n_struct].copy_from_slice(&bp.lower);
        upper[..n_struct].copy_from_slice(&bp.upper);
        if let Some(eb) = extra_bounds {
            for &(v, lo, hi) in eb {
                if v >= n_struct {
                    return Err(Error::Internal("extra bound on unknown variable".into()));
                }
                lower[v] = lower[v].max(lo);
                upper[v] = upper[v].min(hi);
            }
        }
        for v in 0..n_struct {
            if lower[v] > upper[v] + 1e-12 {
                // empty box: represent as an immediately infeasible instance
                return Ok(SimplexInstance::empty_infeasible(n_struct));
            }
            // guard tiny inversions from float noise
            if lower[v] > upper[v] {
                lower[v] = upper[v];
            }
        }

        let mut a = vec![vec![0.0; n_total]; m];
        let mut b = vec![0.0; m];
        let mut slack = n_struct;
        for (ri, row) in bp.rows.iter().enumerate() {
            for &(v, c) in &row.coeffs {
                a[ri][v] += c;
            }
            b[ri] = row.rhs;
            match row.relation {
                Relation::Eq => {}
                Relation::Le => {
                    a[ri][slack] = 1.0;
                    lower[slack] = 0.0;
                    upper[slack] = f64::INFINITY;
                    slack += 1;
                }
                Relation::Ge => {
                    a[ri][slack] = -1.0;
                    lower[slack] = 0.0;
                    upper[slack] = f64::INFINITY;
                    slack += 1;
                }
            }
        }
        // artificial columns, sign chosen at phase-1 setup
        for ri in 0..m {
            a[ri][art_base + ri] = 1.0;
        }

        let mut cost = vec![0.0; n_total];
        let base_cost = c_override.unwrap_or(&bp.objective);
        if base_cost.len() != n_struct {
            return Err(Error::Internal("objective length mismatch".into()));
        }
        cost[..n_struct].copy_from_slice(base_cost);

        Ok(SimplexInstance {
            m,
            n_struct,
            n_total,
            a,
            b,
            cost,
            lower,
            upper,
            art_base,
            art_sign: vec![1.0; m],
            t: Vec::new(),
            xb: Vec::new(),
            basic: Vec::new(),
            state: Vec::new(),
            degenerate_run: 0,
            bland: false,
            solved_feasible: false,
            pivots: 0,
        })
    }

    fn empty_infeasible(n_struct: usize) -> SimplexInstance {
        SimplexInstance {
            m: 0,
            n_struct,
            n_total: n_struct,
            a: Vec::new(),
            b: Vec::new(),
            cost: vec![0.0; n_struct],
            lower: vec![1.0; n_struct],
            upper: vec![0.0; n_struct],
            art_base: n_struct,
            art_sign: Vec::new(),
            t: Vec::new(),
            xb: Vec::new(),
            basic: Vec::new(),
            state: Vec::new(),
            degenerate_run: 0,
            bland: false,
            solved_feasible: false,
            pivots: 0,
        }
    }

    fn is_empty_box(&self) -> bool {
        (0..self.n_struct).any(|v| self.lower[v] > self.upper[v])
    }

    fn bound_value(&self, v: usize, st: VarState) -> f64 {
        match st {
            VarState::AtLower => self.lower[v],
            VarState::AtUpper => self.upper[v],
            VarState::Basic(r) => self.xb[r],
        }
    }

    /// Cold start: nonbasic at finite bounds, artificial basis absorbing the
    /// residual, phase 1 then phase 2.
    pub fn solve(&mut self, warm: Option<&Basis>) -> Result<LpSolution> {
        if self.is_empty_box() {
            self.solved_feasible = false;
            return Ok(LpSolution::infeasible());
        }
        if let Some(basis) = warm {
            if self.try_warm(basis) {
                return self.run_phase2();
            }
        }
        self.setup_phase1();
        let p1 = self.primal_loop(true)?;
        if p1 == LpStatus::Unbounded {
            return Err(Error::Internal("phase 1 reported unbounded".into()));
        }
        let art_sum: f64 = (0..self.m)
            .filter_map(|r| match self.state[self.art_base + r] {
                VarState::Basic(row) if self.basic[row] == self.art_base + r => Some(self.xb[row]),
                _ => None,
            })
            .sum();
        let scale = 1.0 + self.b.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if art_sum > FEAS_TOL * scale * 10.0 {
            self.solved_feasible = false;
            return Ok(LpSolution::infeasible());
        }
        self.drive_out_artificials();
        self.run_phase2()
    }

    /// Re-optimizes from the current feasible basis under a new objective.
    pub fn resolve_with_cost(&mut self, c: &[f64]) -> Result<LpSolution> {
        if c.len() != self.n_struct {
            return Err(Error::Internal("objective length mismatch".into()));
        }
        if self.is_empty_box() {
            return Ok(LpSolution::infeasible());
        }
        self.cost[..self.n_struct].copy_from_slice(c);
        if !self.solved_feasible {
            return self.solve(None);
        }
        self.run_phase2()
    }

    fn run_phase2(&mut self) -> Result<LpSolution> {
        // artificials are pinned at zero and can never re-enter
        for r in 0..self.m {
            let av = self.art_base + r;
            self.lower[av] = 0.0;
            self.upper[av] = 0.0;
        }
        let status = self.primal_loop(false)?;
        if status == LpStatus::Unbounded {
            return Err(Error::Internal(
                "unbounded phase 2 on a box-bounded instance".into(),
            ));
        }
        self.refresh_xb()?;
        self.solved_feasible = true;
        let mut x = vec![0.0; self.n_struct];
        for v in 0..self.n_struct {
            x[v] = self.bound_value(v, self.state[v]);
        }
        let value = (0..self.n_struct).map(|v| self.cost[v] * x[v]).sum();
        Ok(LpSolution {
            status: LpStatus::Optimal,
            x,
            value,
            basis: Some(Basis {
                basic: self.basic.clone(),
                at_upper: (0..self.n_total)
                    .map(|v| self.state[v] == VarState::AtUpper)
                    .collect(),
            }),
        })
    }

    fn setup_phase1(&mut self) {
        self.state = vec![VarState::AtLower; self.n_total];
        self.basic = Vec::with_capacity(self.m);
        self.t = self.a.clone();
        self.xb = vec![0.0; self.m];
        self.degenerate_run = 0;
        self.bland = false;
        // nonbasic structural/slack at their finite lower bound, except fully
        // fixed-from-above variables which sit at the upper bound
        for v in 0..self.art_base {
            self.state[v] = VarState::AtLower;
        }
        // residual per row once nonbasic values are set
        for r in 0..self.m {
            let mut resid = self.b[r];
            for v in 0..self.art_base {
                let val = self.lower[v];
                if val != 0.0 {
                    resid -= self.a[r][v] * val;
                }
            }
            let sign = if resid >= 0.0 { 1.0 } else { -1.0 };
            self.art_sign[r] = sign;
            let av = self.art_base + r;
            self.lower[av] = 0.0;
            self.upper[av] = f64::INFINITY;
            if sign < 0.0 {
                for v in 0..self.n_total {
                    self.t[r][v] = -self.a[r][v];
                }
                self.t[r][av] = 1.0;
            } else {
                self.t[r].copy_from_slice(&self.a[r]);
            }
            self.xb[r] = resid.abs();
            self.basic.push(av);
            self.state[av] = VarState::Basic(r);
        }
    }

    fn phase_cost(&self, v: usize, phase1: bool) -> f64 {
        if phase1 {
            if v >= self.art_base {
                1.0
            } else {
                0.0
            }
        } else {
            self.cost[v]
        }
    }

    fn reduced_costs(&self, phase1: bool) -> Vec<f64> {
        // d = c - c_B^T T
        let mut d: Vec<f64> = (0..self.n_total).map(|v| self.phase_cost(v, phase1)).collect();
        for r in 0..self.m {
            let cb = self.phase_cost(self.basic[r], phase1);
            if cb != 0.0 {
                for v in 0..self.n_total {
                    d[v] -= cb * self.t[r][v];
                }
            }
        }
        d
    }

    fn primal_loop(&mut self, phase1: bool) -> Result<LpStatus> {
        let mut d = self.reduced_costs(phase1);
        let max_pivots = 2_000 + 200 * (self.m + self.n_total) as u64;
        let mut local_pivots: u64 = 0;
        loop {
            // entering column
            let mut enter: Option<(usize, f64)> = None;
            for v in 0..self.n_total {
                if matches!(self.state[v], VarState::Basic(_)) {
                    continue;
                }
                if self.upper[v] - self.lower[v] <= 1e-14 {
                    continue;
                }
                let viol = match self.state[v] {
                    VarState::AtLower => -d[v],
                    VarState::AtUpper => d[v],
                    VarState::Basic(_) => unreachable!(),
                };
                if viol > COST_TOL {
                    if self.bland {
                        enter = Some((v, viol));
                        break;
                    }
                    match enter {
                        Some((_, best)) if best >= viol => {}
                        _ => enter = Some((v, viol)),
                    }
                }
            }
            let Some((j, _)) = enter else {
                return Ok(LpStatus::Optimal);
            };
            let dir = if self.state[j] == VarState::AtLower { 1.0 } else { -1.0 };

            // ratio test
            let own_range = self.upper[j] - self.lower[j];
            let mut best_delta = own_range;
            let mut blocker: Option<(usize, bool)> = None; // (row, leaves_at_lower)
            for r in 0..self.m {
                let w = self.t[r][j];
                if w.abs() <= PIVOT_TOL {
                    continue;
                }
                let basic_var = self.basic[r];
                let move_rate = -dir * w; // basic value changes at this rate
                let (room, hits_lower) = if move_rate < 0.0 {
                    (self.xb[r] - self.lower[basic_var], true)
                } else {
                    (self.upper[basic_var] - self.xb[r], false)
                };
                if room.is_infinite() {
                    continue;
                }
                let delta = (room.max(0.0)) / move_rate.abs();
                let better = match blocker {
                    None => delta < best_delta - 1e-12,
                    Some((br, _)) => {
                        delta < best_delta - 1e-12
                            || (delta < best_delta + 1e-12 && {
                                if self.bland {
                                    self.basic[r] < self.basic[br]
                                } else {
                                    w.abs() > self.t[br][j].abs() + 1e-12
                                        || (w.abs() > self.t[br][j].abs() - 1e-12
                                            && self.basic[r] < self.basic[br])
                                }
                            })
                    }
                };
                if better {
                    best_delta = delta.min(best_delta);
                    blocker = Some((r, hits_lower));
                }
            }
            if best_delta.is_infinite() && blocker.is_none() {
                return Ok(LpStatus::Unbounded);
            }

            local_pivots += 1;
            self.pivots += 1;
            if local_pivots > max_pivots {
                return Err(Error::Internal("pivot limit exceeded".into()));
            }
            if best_delta <= PIVOT_TOL {
                self.degenerate_run += 1;
                if self.degenerate_run > 5 * (self.m + self.n_total) {
                    self.bland = true;
                }
            } else {
                self.degenerate_run = 0;
            }

            match blocker {
                None => {
                    // bound flip: j moves across its whole range
                    let delta = own_range;
                    for r in 0..self.m {
                        let w = self.t[r][j];
                        if w.abs() > 0.0 {
                            self.xb[r] -= delta * dir * w;
                        }
                    }
                    self.state[j] = if dir > 0.0 { VarState::AtUpper } else { VarState::AtLower };
                }
                Some((r, hits_lower)) => {
                    let delta = best_delta.max(0.0);
                    let entering_value = self.bound_value(j, self.state[j]) + dir * delta;
                    for i in 0..self.m {
                        if i != r {
                            let w = self.t[i][j];
                            if w.abs() > 0.0 {
                                self.xb[i] -= delta * dir * w;
                            }
                        }
                    }
                    let leaving = self.basic[r];
                    self.state[leaving] = if hits_lower { VarState::AtLower } else { VarState::AtUpper };
                    // row reduction
                    let piv = self.t[r][j];
                    let inv = 1.0 / piv;
                    for v in 0..self.n_total {
                        self.t[r][v] *= inv;
                    }
                    self.t[r][j] = 1.0;
                    for i in 0..self.m {
                        if i == r {
                            continue;
                        }
                        let f = self.t[i][j];
                        if f.abs() > 1e-13 {
                            for v in 0..self.n_total {
                                self.t[i][v] -= f * self.t[r][v];
                            }
                            self.t[i][j] = 0.0;
                        }
                    }
                    let dj = d[j];
                    if dj.abs() > 0.0 {
                        for v in 0..self.n_total {
                            d[v] -= dj * self.t[r][v];
                        }
                        d[j] = 0.0;
                    }
                    self.basic[r] = j;
                    self.state[j] = VarState::Basic(r);
                    self.xb[r] = entering_value;
                }
            }
        }
    }

    /// Pivots basic artificials out where a structural column is available;
    /// rows without one are redundant and keep a zero artificial.
    fn drive_out_artificials(&mut self) {
        for r in 0..self.m {
            if self.basic[r] < self.art_base {
                continue;
            }
            let mut pick = None;
            for v in 0..self.art_base {
                if !matches!(self.state[v], VarState::Basic(_)) && self.t[r][v].abs() > 1e-7 {
                    pick = Some(v);
                    break;
                }
            }
            let Some(j) = pick else { continue };
            let leaving = self.basic[r];
            self.state[leaving] = VarState::AtLower;
            let entering_value = self.bound_value(j, self.state[j]);
            let piv = self.t[r][j];
            let inv = 1.0 / piv;
            for v in 0..self.n_total {
                self.t[r][v] *= inv;
            }
            self.t[r][j] = 1.0;
            for i in 0..self.m {
                if i == r {
                    continue;
                }
                let f = self.t[i][j];
                if f.abs() > 1e-13 {
                    for v in 0..self.n_total {
                        self.t[i][v] -= f * self.t[r][v];
                    }
                    self.t[i][j] = 0.0;
                }
            }
            self.basic[r] = j;
            self.state[j] = VarState::Basic(r);
            self.xb[r] = entering_value;
            self.pivots += 1;
        }
    }

    /// Recomputes basic values from the original data under the current
    /// basis, clearing accumulated pivot drift.
    fn refresh_xb(&mut self) -> Result<()> {
        let m = self.m;
        if m == 0 {
            return Ok(());
        }
        // rhs minus nonbasic contributions
        let mut rhs = self.b.clone();
        for v in 0..self.n_total {
            if matches!(self.state[v], VarState::Basic(_)) {
                continue;
            }
            let val = self.bound_value(v, self.state[v]);
            if val != 0.0 {
                for r in 0..m {
                    let col = if v == self.art_base + r { self.art_sign[r] } else { self.a[r][v] };
                    if col != 0.0 {
                        rhs[r] -= col * val;
                    }
                }
            }
        }
        // solve B y = rhs by Gaussian elimination with partial pivoting
        let mut mat = vec![vec![0.0; m + 1]; m];
        for r in 0..m {
            for (ci, &bv) in self.basic.iter().enumerate() {
                mat[r][ci] = if bv >= self.art_base {
                    if bv == self.art_base + r {
                        self.art_sign[r]
                    } else {
                        0.0
                    }
                } else {
                    self.a[r][bv]
                };
            }
            mat[r][m] = rhs[r];
        }
        for c in 0..m {
            let mut piv = c;
            for r in (c + 1)..m {
                if mat[r][c].abs() > mat[piv][c].abs() {
                    piv = r;
                }
            }
            if mat[piv][c].abs() < 1e-12 {
                return Ok(()); // keep tableau values if the basis went near-singular
            }
            mat.swap(c, piv);
            let inv = 1.0 / mat[c][c];
            for v in c..=m {
                mat[c][v] *= inv;
            }
            for r in 0..m {
                if r != c && mat[r][c].abs() > 0.0 {
                    let f = mat[r][c];
                    for v in c..=m {
                        mat[r][v] -= f * mat[c][v];
                    }
                }
            }
        }
        for r in 0..m {
            self.xb[r] = mat[r][m];
        }
        Ok(())
    }

    /// Installs a previous basis. Returns false when the basis is stale
    /// (singular or primal infeasible), in which case a cold start follows.
    fn try_warm(&mut self, basis: &Basis) -> bool {
        if basis.basic.len() != self.m || basis.at_upper.len() != self.n_total {
            return false;
        }
        let mut seen = vec![false; self.n_total];
        for &v in &basis.basic {
            if v >= self.n_total || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        // rebuild T = B^{-1} A by row reduction of [B | A]
        let m = self.m;
        let mut full = vec![vec![0.0; m + self.n_total]; m];
        for r in 0..m {
            for (ci, &bv) in basis.basic.iter().enumerate() {
                full[r][ci] = if bv == self.art_base + r {
                    self.art_sign[r]
                } else if bv >= self.art_base {
                    0.0
                } else {
                    self.a[r][bv]
                };
            }
            for v in 0..self.n_total {
                full[r][m + v] = if v == self.art_base + r {
                    self.art_sign[r]
                } else if v >= self.art_base {
                    0.0
                } else {
                    self.a[r][v]
                };
            }
        }
        for c in 0..m {
            let mut piv = c;
            for r in (c + 1)..m {
                if full[r][c].abs() > full[piv][c].abs() {
                    piv = r;
                }
            }
            if full[piv][c].abs() < 1e-10 {
                return false;
            }
            full.swap(c, piv);
            let inv = 1.0 / full[c][c];
            for v in c..(m + self.n_total) {
                full[c][v] *= inv;
            }
            for r in 0..m {
                if r != c {
                    let f = full[r][c];
                    if f.abs() > 0.0 {
                        for v in c..(m + self.n_total) {
                            full[r][v] -= f * full[c][v];
                        }
                    }
                }
            }
        }
        self.t = (0..m)
            .map(|r| full[r][m..].to_vec())
            .collect();
        self.basic = basis.basic.clone();
        self.state = (0..self.n_total)
            .map(|v| {
                if basis.at_upper[v] && self.upper[v].is_finite() {
                    VarState::AtUpper
                } else {
                    VarState::AtLower
                }
            })
            .collect();
        for (r, &v) in basis.basic.iter().enumerate() {
            self.state[v] = VarState::Basic(r);
        }
        self.xb = vec![0.0; m];
        if self.refresh_xb().is_err() {
            return false;
        }
        for r in 0..m {
            let v = self.basic[r];
            if self.xb[r] < self.lower[v] - FEAS_TOL || self.xb[r] > self.upper[v] + FEAS_TOL {
                return false;
            }
        }
        self.degenerate_run = 0;
        self.bland = false;
        true
    }
}

/// One-shot solve of the relaxation (or a re-costed variant) of an instance.
pub fn solve_lp(
    bp: &BinaryLinearProgram,
    c_override: Option<&[f64]>,
    extra_bounds: Option<&[(usize, f64, f64)]>,
    warm: Option<&Basis>,
) -> Result<LpSolution> {
    SimplexInstance::new(bp, c_override, extra_bounds)?.solve(warm)
}
