//! The compression integer linear program: decision-variable indexing,
//! objective and constraint construction, solution decoding, and the
//! exhaustive enumeration oracle for small instances.
//!
//! Variables follow the word-sequence model: a choice variable per word,
//! context variables for word triples (first index 0 standing for the start
//! marker) and for sentence-ending pairs. The start variables can be
//! eliminated through the "preceded by two words" balance constraint; the
//! eliminated form keeps their nonnegativity as explicit rows so the
//! feasible set is unchanged.

use crate::error::{Error, Result};
use crate::ngram::NgramModel;
use crate::rules::{DeltaFixing, Fixing, PhraseSpan};
use crate::tokens::TokenSeq;
use std::io::{BufRead, Write};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }
}

/// Sparse linear row: sum of coeff * x_var REL rhs.
#[derive(Debug, Clone)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

/// min c'x over { lb <= x <= ub, rows hold }, with a subset of coordinates
/// designated binary. Bounds stay within the unit interval.
#[derive(Debug, Clone)]
pub struct BinaryLinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub binary_mask: Vec<bool>,
}

pub const BINARY_TOL: f64 = 1e-6;

impl BinaryLinearProgram {
    pub fn new(n: usize) -> BinaryLinearProgram {
        BinaryLinearProgram {
            objective: vec![0.0; n],
            rows: Vec::new(),
            lower: vec![0.0; n],
            upper: vec![1.0; n],
            binary_mask: vec![true; n],
        }
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_vars();
        if self.lower.len() != n || self.upper.len() != n || self.binary_mask.len() != n {
            return Err(Error::Internal("inconsistent instance arrays".into()));
        }
        for i in 0..n {
            if !(0.0..=1.0).contains(&self.lower[i])
                || !(0.0..=1.0).contains(&self.upper[i])
                || self.lower[i] > self.upper[i]
            {
                return Err(Error::Internal(format!("bad bounds on variable {}", i)));
            }
        }
        for r in &self.rows {
            if r.coeffs.iter().any(|(v, _)| *v >= n) {
                return Err(Error::Internal("row references unknown variable".into()));
            }
        }
        Ok(())
    }

    pub fn fix_var(&mut self, v: usize, value: f64) {
        self.lower[v] = value;
        self.upper[v] = value;
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, xi)| c * xi).sum()
    }

    pub fn row_activity(&self, row: &Row, x: &[f64]) -> f64 {
        row.coeffs.iter().map(|(v, c)| c * x[*v]).sum()
    }

    pub fn rows_satisfied(&self, x: &[f64]) -> bool {
        self.rows.iter().all(|r| {
            let a = self.row_activity(r, x);
            let tol = 1e-8 * (1.0 + r.rhs.abs());
            match r.relation {
                Relation::Eq => (a - r.rhs).abs() <= tol,
                Relation::Le => a <= r.rhs + tol,
                Relation::Ge => a >= r.rhs - tol,
            }
        })
    }

    /// Binary on the mask within tolerance, inside bounds, rows satisfied.
    pub fn is_binary_feasible(&self, x: &[f64]) -> bool {
        let binary = (0..self.n_vars()).all(|i| {
            !self.binary_mask[i] || (x[i] - x[i].round()).abs() <= BINARY_TOL
        });
        let bounded = (0..self.n_vars())
            .all(|i| x[i] >= self.lower[i] - 1e-9 && x[i] <= self.upper[i] + 1e-9);
        binary && bounded && self.rows_satisfied(x)
    }

    /// Rounds masked coordinates to exact binary values.
    pub fn snap(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .enumerate()
            .map(|(i, &v)| if self.binary_mask[i] { v.round() } else { v })
            .collect()
    }
}

/// Bijection between (delta, alpha, beta, gamma) word indices and flat
/// variable positions. Index 0 in a gamma/beta first position denotes the
/// start token. With `with_alpha` the start variables are explicit;
/// otherwise they are represented implicitly.
#[derive(Debug, Clone)]
pub struct CompressionIndexing {
    n: usize,
    with_alpha: bool,
    gamma_base: usize,
    beta_base: usize,
}

impl CompressionIndexing {
    pub fn new(n: usize, with_alpha: bool) -> CompressionIndexing {
        let gamma_base = if with_alpha { 2 * n } else { n };
        let beta_base = gamma_base + Self::gamma_count(n);
        CompressionIndexing {
            n,
            with_alpha,
            gamma_base,
            beta_base,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn with_alpha(&self) -> bool {
        self.with_alpha
    }

    /// Triples 0 <= i < j < k <= n.
    pub fn gamma_count(n: usize) -> usize {
        (n + 1) * n * n.saturating_sub(1) / 6
    }

    /// Pairs 0 <= i < j <= n.
    pub fn beta_count(n: usize) -> usize {
        (n + 1) * n / 2
    }

    /// The closed-form variable count (n^3 + 3n^2 + 14n)/6 of the model with
    /// explicit start variables.
    pub fn paper_count(n: usize) -> usize {
        (n * n * n + 3 * n * n + 14 * n) / 6
    }

    pub fn total_vars(&self) -> usize {
        self.beta_base + Self::beta_count(self.n)
    }

    pub fn delta(&self, i: usize) -> usize {
        debug_assert!(1 <= i && i <= self.n);
        i - 1
    }

    pub fn alpha(&self, i: usize) -> Option<usize> {
        if self.with_alpha {
            debug_assert!(1 <= i && i <= self.n);
            Some(self.n + i - 1)
        } else {
            None
        }
    }

    pub fn gamma(&self, i: usize, j: usize, k: usize) -> usize {
        debug_assert!(i < j && j < k && k <= self.n);
        let n = self.n;
        // triples before first index i: sum_{a<i} C(n-a, 2)
        let mut off = 0;
        for a in 0..i {
            off += (n - a) * (n - a - 1) / 2;
        }
        // pairs (j,k) with fixed i, ordered lexicographically
        for b in (i + 1)..j {
            off += n - b;
        }
        self.gamma_base + off + (k - j - 1)
    }

    pub fn beta(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j <= self.n);
        let n = self.n;
        // pairs with a smaller first index: sum_{a<i} (n - a)
        self.beta_base + i * (2 * n + 1 - i) / 2 + (j - i - 1)
    }

    pub fn gamma_triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let n = self.n;
        (0..n.saturating_sub(1)).flat_map(move |i| {
            ((i + 1)..n).flat_map(move |j| ((j + 1)..=n).map(move |k| (i, j, k)))
        })
    }

    pub fn beta_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| ((i + 1)..=n).map(move |j| (i, j)))
    }

    /// The full binary encoding of an ascending word-index subsequence:
    /// choice variables, consecutive-triple contexts (with the start-token
    /// prefix), the closing pair, and the start variables when explicit.
    pub fn encode_subsequence(&self, selected: &[usize]) -> Result<Vec<f64>> {
        if selected.len() < 2 {
            return Err(Error::Config("a compression keeps at least two words".into()));
        }
        if selected.windows(2).any(|w| w[0] >= w[1]) || *selected.last().unwrap() > self.n {
            return Err(Error::Config("selection must be ascending word indices".into()));
        }
        let mut x = vec![0.0; self.total_vars()];
        for &i in selected {
            x[self.delta(i)] = 1.0;
        }
        if let Some(a) = self.alpha(selected[0]) {
            x[a] = 1.0;
        }
        let mut chain = vec![0usize];
        chain.extend_from_slice(selected);
        for w in chain.windows(3) {
            x[self.gamma(w[0], w[1], w[2])] = 1.0;
        }
        let m = selected.len();
        x[self.beta(selected[m - 2], selected[m - 1])] = 1.0;
        Ok(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreMode {
    Log,
    Raw,
}

#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub score: ScoreMode,
    /// Keep the start variables explicit instead of eliminating them.
    pub with_alpha: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            score: ScoreMode::Log,
            with_alpha: false,
        }
    }
}

/// Builds the compression program for a sentence: probability objective,
/// the five sequence constraints, the length window, phrase constraints,
/// and any parse-tree variable fixings (with presolve of dead contexts).
pub fn build(
    tokens: &TokenSeq,
    lm: &NgramModel,
    len_bounds: (usize, usize),
    fixing: Option<&DeltaFixing>,
    phrase_spans: &[PhraseSpan],
    opts: &BuildOptions,
) -> Result<(BinaryLinearProgram, CompressionIndexing)> {
    let n = tokens.len();
    let (l_low, l_up) = len_bounds;
    if n == 0 {
        return Err(Error::Config("empty sentence".into()));
    }
    if l_low < 2 {
        return Err(Error::Config("lower length bound must be at least 2".into()));
    }
    if l_low > n || l_up > n || l_low > l_up {
        return Err(Error::Config(format!(
            "length bounds [{}, {}] are invalid for {} words",
            l_low, l_up, n
        )));
    }
    if let Some(f) = fixing {
        if f.len() != n {
            return Err(Error::Config("fixing length differs from sentence length".into()));
        }
    }
    for s in phrase_spans {
        if s.intro == 0 || s.intro > n || s.members.iter().any(|&j| j == 0 || j > n) {
            return Err(Error::Config("phrase span index out of range".into()));
        }
    }

    let idx = CompressionIndexing::new(n, opts.with_alpha);
    let mut bp = BinaryLinearProgram::new(idx.total_vars());

    let start = lm.start_marker();
    let word = |i: usize| -> &str {
        if i == 0 {
            start
        } else {
            tokens.word(i)
        }
    };
    let score = |p: f64| -> f64 {
        match opts.score {
            ScoreMode::Log => p.ln(),
            ScoreMode::Raw => p,
        }
    };

    // Objective: minimize -f. With start variables eliminated, their scores
    // fold into the choice variables and out of the triple contexts.
    let mut s_start = vec![0.0; n + 1];
    for k in 1..=n {
        s_start[k] = score(lm.prob_start(word(k))?);
    }
    if opts.with_alpha {
        for k in 1..=n {
            bp.objective[idx.alpha(k).unwrap()] = -s_start[k];
        }
    } else {
        for k in 1..=n {
            bp.objective[idx.delta(k)] = -s_start[k];
        }
    }
    for (i, j, k) in idx.gamma_triples() {
        let s = score(lm.prob_trigram(word(i), word(j), word(k))?);
        bp.objective[idx.gamma(i, j, k)] = if opts.with_alpha { -s } else { s_start[k] - s };
    }
    for (i, j) in idx.beta_pairs() {
        let s = score(lm.prob_end(word(i), word(j))?);
        bp.objective[idx.beta(i, j)] = -s;
    }

    // C1: exactly one word begins the sentence.
    if opts.with_alpha {
        bp.rows.push(Row {
            coeffs: (1..=n).map(|k| (idx.alpha(k).unwrap(), 1.0)).collect(),
            relation: Relation::Eq,
            rhs: 1.0,
        });
        // C2: a chosen word starts, or is preceded by two tokens.
        for k in 1..=n {
            let mut coeffs = vec![(idx.delta(k), 1.0), (idx.alpha(k).unwrap(), -1.0)];
            for i in 0..k {
                for j in (i + 1)..k {
                    coeffs.push((idx.gamma(i, j, k), -1.0));
                }
            }
            bp.rows.push(Row {
                coeffs,
                relation: Relation::Eq,
                rhs: 0.0,
            });
        }
    } else {
        // C1 with the start variables substituted out ...
        let mut coeffs: Vec<(usize, f64)> = (1..=n).map(|k| (idx.delta(k), 1.0)).collect();
        for (i, j, k) in idx.gamma_triples() {
            coeffs.push((idx.gamma(i, j, k), -1.0));
        }
        bp.rows.push(Row {
            coeffs,
            relation: Relation::Eq,
            rhs: 1.0,
        });
        // ... and C2 kept as their nonnegativity, so the feasible set of the
        // remaining variables is exactly the one of the full model.
        for k in 1..=n {
            let mut coeffs = vec![(idx.delta(k), 1.0)];
            for i in 0..k {
                for j in (i + 1)..k {
                    coeffs.push((idx.gamma(i, j, k), -1.0));
                }
            }
            bp.rows.push(Row {
                coeffs,
                relation: Relation::Ge,
                rhs: 0.0,
            });
        }
    }

    // C3: a chosen word is followed by something (word pair or end).
    for j in 1..=n {
        let mut coeffs = vec![(idx.delta(j), 1.0)];
        for i in 0..j {
            for k in (j + 1)..=n {
                coeffs.push((idx.gamma(i, j, k), -1.0));
            }
            coeffs.push((idx.beta(i, j), -1.0));
        }
        bp.rows.push(Row {
            coeffs,
            relation: Relation::Eq,
            rhs: 0.0,
        });
    }

    // C4: a chosen word is followed by two words, or one word and the end,
    // or closes the sentence itself.
    for i in 1..=n {
        let mut coeffs = vec![(idx.delta(i), 1.0)];
        for j in (i + 1)..=n {
            for k in (j + 1)..=n {
                coeffs.push((idx.gamma(i, j, k), -1.0));
            }
            coeffs.push((idx.beta(i, j), -1.0));
        }
        for h in 0..i {
            coeffs.push((idx.beta(h, i), -1.0));
        }
        bp.rows.push(Row {
            coeffs,
            relation: Relation::Eq,
            rhs: 0.0,
        });
    }

    // C5: exactly one pair ends the sentence.
    bp.rows.push(Row {
        coeffs: idx.beta_pairs().map(|(i, j)| (idx.beta(i, j), 1.0)).collect(),
        relation: Relation::Eq,
        rhs: 1.0,
    });

    // C6: length window.
    let delta_sum: Vec<(usize, f64)> = (1..=n).map(|i| (idx.delta(i), 1.0)).collect();
    bp.rows.push(Row {
        coeffs: delta_sum.clone(),
        relation: Relation::Ge,
        rhs: l_low as f64,
    });
    bp.rows.push(Row {
        coeffs: delta_sum,
        relation: Relation::Le,
        rhs: l_up as f64,
    });

    // C7: a phrase keeps its introducing term iff it keeps any member.
    for span in phrase_spans {
        let di = idx.delta(span.intro);
        let mut coeffs: Vec<(usize, f64)> =
            span.members.iter().map(|&j| (idx.delta(j), 1.0)).collect();
        coeffs.push((di, -1.0));
        bp.rows.push(Row {
            coeffs,
            relation: Relation::Ge,
            rhs: 0.0,
        });
        for &j in &span.members {
            bp.rows.push(Row {
                coeffs: vec![(di, 1.0), (idx.delta(j), -1.0)],
                relation: Relation::Ge,
                rhs: 0.0,
            });
        }
    }

    // Parse-tree fixings as bound fixings, then presolve: a word fixed out
    // kills every context that mentions it.
    if let Some(f) = fixing {
        for (i, fx) in f.iter() {
            match fx {
                Fixing::FixedOne => bp.fix_var(idx.delta(i), 1.0),
                Fixing::FixedZero => bp.fix_var(idx.delta(i), 0.0),
                Fixing::Free => {}
            }
        }
        let dead = |i: usize| i >= 1 && f.get(i) == Fixing::FixedZero;
        for (i, j, k) in idx.gamma_triples() {
            if dead(i) || dead(j) || dead(k) {
                bp.fix_var(idx.gamma(i, j, k), 0.0);
            }
        }
        for (i, j) in idx.beta_pairs() {
            if dead(i) || dead(j) {
                bp.fix_var(idx.beta(i, j), 0.0);
            }
        }
    }

    bp.validate()?;
    Ok((bp, idx))
}

/// A decoded compression with solver bookkeeping.
#[derive(Debug, Clone)]
pub struct CompressionResult {
    /// Ascending 1-based indices of the kept words.
    pub selected: Vec<usize>,
    pub compressed: TokenSeq,
    /// The maximized probability score (sum of log or raw probabilities).
    pub objective: f64,
    pub nodes: u64,
    pub dca_restarts: u64,
    pub wall_ms: f64,
    /// Set when the hybrid pipeline fell back to the purely probabilistic model.
    pub fallback: bool,
}

/// Decodes a solver vector: rounds the choice variables, rebuilds the word
/// subsequence, and cross-checks that the context variables match it.
pub fn decode(
    x: &[f64],
    idx: &CompressionIndexing,
    tokens: &TokenSeq,
    bp: &BinaryLinearProgram,
) -> Result<CompressionResult> {
    if x.len() != idx.total_vars() {
        return Err(Error::Decode("solution length differs from instance".into()));
    }
    for (v, &xi) in x.iter().enumerate() {
        if bp.binary_mask[v] && (xi - xi.round()).abs() > BINARY_TOL {
            return Err(Error::Decode(format!(
                "variable {} = {} is not binary within tolerance",
                v, xi
            )));
        }
    }
    let selected: Vec<usize> = (1..=idx.n())
        .filter(|&i| x[idx.delta(i)].round() == 1.0)
        .collect();
    if selected.len() < 2 {
        return Err(Error::Decode("fewer than two words selected".into()));
    }
    let implied = idx.encode_subsequence(&selected)?;
    for (v, (&got, &want)) in x.iter().zip(&implied).enumerate() {
        if (got.round() - want).abs() > 0.5 {
            return Err(Error::Integrity(format!(
                "context variable {} disagrees with the selected subsequence",
                v
            )));
        }
    }
    let compressed = tokens.subsequence(&selected)?;
    Ok(CompressionResult {
        selected,
        compressed,
        objective: -bp.objective_value(&bp.snap(x)),
        nodes: 0,
        dca_restarts: 0,
        wall_ms: 0.0,
        fallback: false,
    })
}

/// Exhaustively enumerates binary feasible points, depth-first with interval
/// pruning per row. Refuses instances with more than 24 binary variables.
pub fn enumerate_feasible(bp: &BinaryLinearProgram) -> Result<Vec<Vec<f64>>> {
    let masked = bp.binary_mask.iter().filter(|m| **m).count();
    if masked > 24 {
        return Err(Error::SizeGuard(format!(
            "{} binary variables exceed the enumeration guard of 24",
            masked
        )));
    }
    enumerate_feasible_unguarded(bp, 200_000_000)
}

/// The same enumeration without the variable-count guard, for structured
/// instances whose row system prunes hard. `node_budget` bounds the search
/// tree; exceeding it is an error rather than a wrong answer.
pub fn enumerate_feasible_unguarded(
    bp: &BinaryLinearProgram,
    node_budget: u64,
) -> Result<Vec<Vec<f64>>> {
    bp.validate()?;
    if bp.binary_mask.iter().any(|m| !m) {
        return Err(Error::SizeGuard(
            "enumeration requires every variable to be binary".into(),
        ));
    }
    let n = bp.n_vars();
    // per-variable rows touched, with coefficients
    let mut touching: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (ri, row) in bp.rows.iter().enumerate() {
        for &(v, c) in &row.coeffs {
            touching[v].push((ri, c));
        }
    }
    let m = bp.rows.len();
    let mut cur = vec![0.0; m];
    let mut rem_pos = vec![0.0; m];
    let mut rem_neg = vec![0.0; m];
    for (ri, row) in bp.rows.iter().enumerate() {
        for &(_, c) in &row.coeffs {
            if c > 0.0 {
                rem_pos[ri] += c;
            } else {
                rem_neg[ri] += c;
            }
        }
    }
    let feasible_interval = |ri: usize, cur: f64, lo: f64, hi: f64| -> bool {
        let row = &bp.rows[ri];
        let tol = 1e-9 * (1.0 + row.rhs.abs());
        match row.relation {
            Relation::Eq => cur + lo <= row.rhs + tol && cur + hi >= row.rhs - tol,
            Relation::Le => cur + lo <= row.rhs + tol,
            Relation::Ge => cur + hi >= row.rhs - tol,
        }
    };

    let mut x = vec![0u8; n];
    let mut out = Vec::new();
    let mut nodes: u64 = 0;

    if n == 0 {
        return Ok(if (0..m).all(|ri| feasible_interval(ri, 0.0, 0.0, 0.0)) {
            vec![Vec::new()]
        } else {
            Vec::new()
        });
    }

    // iterative DFS with explicit undo
    enum Step {
        Try(usize, u8),
        Undo(usize, u8),
    }
    let choices = |v: usize| -> Vec<u8> {
        let lo = bp.lower[v] > 0.5;
        let hi = bp.upper[v] < 0.5;
        if lo {
            vec![1]
        } else if hi {
            vec![0]
        } else {
            vec![0, 1]
        }
    };
    let mut stack: Vec<Step> = Vec::new();
    if (0..m).all(|ri| feasible_interval(ri, 0.0, rem_neg[ri], rem_pos[ri])) {
        for &c in choices(0).iter().rev() {
            stack.push(Step::Try(0, c));
        }
    }
    while let Some(step) = stack.pop() {
        match step {
            Step::Undo(v, val) => {
                for &(ri, c) in &touching[v] {
                    cur[ri] -= c * val as f64;
                    if c > 0.0 {
                        rem_pos[ri] += c;
                    } else {
                        rem_neg[ri] += c;
                    }
                }
            }
            Step::Try(v, val) => {
                nodes += 1;
                if nodes > node_budget {
                    return Err(Error::SizeGuard("enumeration node budget exhausted".into()));
                }
                // apply
                let mut ok = true;
                for &(ri, c) in &touching[v] {
                    cur[ri] += c * val as f64;
                    if c > 0.0 {
                        rem_pos[ri] -= c;
                    } else {
                        rem_neg[ri] -= c;
                    }
                }
                for &(ri, _) in &touching[v] {
                    if !feasible_interval(ri, cur[ri], rem_neg[ri], rem_pos[ri]) {
                        ok = false;
                        break;
                    }
                }
                x[v] = val;
                stack.push(Step::Undo(v, val));
                if ok {
                    if v + 1 == n {
                        out.push(x.iter().map(|&b| b as f64).collect());
                    } else {
                        for &c in choices(v + 1).iter().rev() {
                            stack.push(Step::Try(v + 1, c));
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

impl BinaryLinearProgram {
    /// Text dump for solver debugging and replay tests.
    pub fn write_lp_text<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "blp v1 vars={} rows={}", self.n_vars(), self.rows.len())?;
        let c: Vec<String> = self.objective.iter().map(|v| format!("{:?}", v)).collect();
        writeln!(w, "min {}", c.join(" "))?;
        for r in &self.rows {
            let terms: Vec<String> = r
                .coeffs
                .iter()
                .map(|(v, c)| format!("{:?}*x{}", c, v))
                .collect();
            writeln!(w, "row {} {} {:?}", terms.join(" + "), r.relation.as_str(), r.rhs)?;
        }
        for i in 0..self.n_vars() {
            writeln!(
                w,
                "bound x{} {:?} {:?}{}",
                i,
                self.lower[i],
                self.upper[i],
                if self.binary_mask[i] { " binary" } else { "" }
            )?;
        }
        Ok(())
    }

    pub fn read_lp_text<R: BufRead>(r: R) -> Result<BinaryLinearProgram> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty instance dump".into()))??;
        let mut nv = None;
        for part in header.split_whitespace() {
            if let Some(v) = part.strip_prefix("vars=") {
                nv = v.parse::<usize>().ok();
            }
        }
        let n = nv.ok_or_else(|| Error::Format("bad instance header".into()))?;
        let mut bp = BinaryLinearProgram::new(n);
        bp.binary_mask = vec![false; n];
        for line in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("min ") {
                bp.objective = rest
                    .split_whitespace()
                    .map(|t| t.parse::<f64>().map_err(|_| Error::Format("bad objective".into())))
                    .collect::<Result<Vec<f64>>>()?;
            } else if let Some(rest) = line.strip_prefix("row ") {
                let (rel, relstr) = if rest.contains(" <= ") {
                    (Relation::Le, " <= ")
                } else if rest.contains(" >= ") {
                    (Relation::Ge, " >= ")
                } else {
                    (Relation::Eq, " = ")
                };
                let (lhs, rhs) = rest
                    .split_once(relstr)
                    .ok_or_else(|| Error::Format("bad row".into()))?;
                let rhs: f64 = rhs.trim().parse().map_err(|_| Error::Format("bad rhs".into()))?;
                let mut coeffs = Vec::new();
                for term in lhs.split('+') {
                    let term = term.trim();
                    let (c, v) = term
                        .split_once("*x")
                        .ok_or_else(|| Error::Format("bad term".into()))?;
                    coeffs.push((
                        v.parse::<usize>().map_err(|_| Error::Format("bad var".into()))?,
                        c.parse::<f64>().map_err(|_| Error::Format("bad coeff".into()))?,
                    ));
                }
                bp.rows.push(Row {
                    coeffs,
                    relation: rel,
                    rhs,
                });
            } else if let Some(rest) = line.strip_prefix("bound ") {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() < 3 {
                    return Err(Error::Format("bad bound line".into()));
                }
                let v: usize = parts[0]
                    .strip_prefix('x')
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::Format("bad bound var".into()))?;
                bp.lower[v] = parts[1].parse().map_err(|_| Error::Format("bad bound".into()))?;
                bp.upper[v] = parts[2].parse().map_err(|_| Error::Format("bad bound".into()))?;
                bp.binary_mask[v] = parts.get(3) == Some(&"binary");
            } else {
                return Err(Error::Format(format!("unrecognized dump line: {}", line)));
            }
        }
        bp.validate()?;
        Ok(bp)
    }
}
