//! Alternate row/column scaling (Sinkhorn iteration).
//!
//! The sequence starts at `A(0) = A` and alternates column scaling
//! `A(l+1) = A(l) Y(A(l))` with row scaling `A(l+1) = X(A(l)) A(l)`. A run stops
//! at the first `l` where `A(l)` meets every margin target within the
//! tolerance. In the exact regime the tolerance is zero, so stopping means the
//! iterate is exactly doubly (or `(r, c)`-) stochastic and the sequence is
//! constant from then on.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Result, ScalingError};
use crate::exact::Rational;
use crate::matrix::{DiagonalScaling, MarginTarget, PositiveMatrix};
use crate::scalar::Scalar;

pub const DEFAULT_MAX_STEPS: usize = 10_000;
pub const DEFAULT_EXACT_MAX_STEPS: usize = 64;
pub const DEFAULT_TOLERANCE: f64 = 1e-12;
/// Entry-size budget for search runs. 2x2 runs stay far below it over 64
/// steps; 3x3 runs reach it after about a dozen.
pub const DEFAULT_SEARCH_MAX_BITS: u64 = 4096;

/// Which scaling produces `A(1)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StartSide {
    #[default]
    ColumnFirst,
    RowFirst,
}

impl StartSide {
    pub fn first_side(self) -> Side {
        match self {
            StartSide::ColumnFirst => Side::Col,
            StartSide::RowFirst => Side::Row,
        }
    }

    pub fn other(self) -> Self {
        match self {
            StartSide::ColumnFirst => StartSide::RowFirst,
            StartSide::RowFirst => StartSide::ColumnFirst,
        }
    }
}

impl fmt::Display for StartSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StartSide::ColumnFirst => "column-first",
            StartSide::RowFirst => "row-first",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Row,
    Col,
}

impl Side {
    pub fn flip(self) -> Self {
        match self {
            Side::Row => Side::Col,
            Side::Col => Side::Row,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Row => "row",
            Side::Col => "col",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationConfig {
    pub start_side: StartSide,
    /// Number of half-steps (single row or column scalings) allowed.
    pub max_steps: usize,
    /// Max-norm margin tolerance. Must be 0 for exact matrices.
    pub tolerance: f64,
    /// Keep every iterate in the trace, not just margin summaries.
    pub record_matrices: bool,
    /// Exact regime: stop once an entry's numerator or denominator exceeds
    /// this many bits. Entry size doubles per step for `n >= 3`.
    pub max_entry_bits: Option<u64>,
}

impl IterationConfig {
    /// Defaults for floating-point runs: 10,000 steps, tolerance `1e-12`.
    pub fn approximate() -> Self {
        Self {
            start_side: StartSide::ColumnFirst,
            max_steps: DEFAULT_MAX_STEPS,
            tolerance: DEFAULT_TOLERANCE,
            record_matrices: false,
            max_entry_bits: None,
        }
    }

    /// Defaults for exact runs: 64 steps, tolerance 0.
    pub fn exact() -> Self {
        Self {
            start_side: StartSide::ColumnFirst,
            max_steps: DEFAULT_EXACT_MAX_STEPS,
            tolerance: 0.0,
            record_matrices: false,
            max_entry_bits: None,
        }
    }

    pub fn with_start_side(mut self, side: StartSide) -> Self {
        self.start_side = side;
        self
    }

    pub fn with_max_steps(mut self, steps: usize) -> Self {
        self.max_steps = steps;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn with_max_entry_bits(mut self, bits: u64) -> Self {
        self.max_entry_bits = Some(bits);
        self
    }

    pub fn recording(mut self) -> Self {
        self.record_matrices = true;
        self
    }

    fn validate<S: Scalar>(&self) -> Result<()> {
        if self.max_steps < 1 {
            return Err(ScalingError::InvalidConfig("max_steps must be at least 1".into()));
        }
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(ScalingError::InvalidConfig(format!(
                "tolerance must be a finite non-negative number, got {}",
                self.tolerance
            )));
        }
        if S::EXACT && self.tolerance != 0.0 {
            return Err(ScalingError::InexactTolerance(self.tolerance));
        }
        Ok(())
    }
}

impl Default for IterationConfig {
    fn default() -> Self {
        Self::approximate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    /// Exact regime: `A(L)` is exactly stochastic and no earlier iterate is.
    TerminatedFinite(usize),
    /// Approximate regime: margins within tolerance.
    ConvergedWithinTolerance,
    /// The step cap (or the entry-size budget) ran out first.
    MaxStepsReached,
}

impl Status {
    pub fn is_success(self) -> bool {
        !matches!(self, Status::MaxStepsReached)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::TerminatedFinite(l) => write!(f, "terminated finitely, L = {l}"),
            Status::ConvergedWithinTolerance => f.write_str("converged within tolerance"),
            Status::MaxStepsReached => f.write_str("max steps reached"),
        }
    }
}

/// One step of a run. Step 0 is the input and has no side.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord<S> {
    pub step: usize,
    pub side: Option<Side>,
    pub max_row_err: S,
    pub max_col_err: S,
    pub max_entry_bits: Option<u64>,
    /// Present only when the run recorded matrices.
    pub matrix: Option<PositiveMatrix<S>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationTrace<S> {
    pub records: Vec<TraceRecord<S>>,
}

impl<S: Scalar> IterationTrace<S> {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Iterates `A(l)` when matrices were recorded.
    pub fn matrices(&self) -> impl Iterator<Item = &PositiveMatrix<S>> {
        self.records.iter().filter_map(|r| r.matrix.as_ref())
    }

    /// CSV with columns `step,side,max_row_err,max_col_err[,max_entry_bits]`.
    ///
    /// Exact runs print errors as rationals and include the bit-size column;
    /// approximate runs print errors with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,side,max_row_err,max_col_err");
        if S::EXACT {
            out.push_str(",max_entry_bits");
        }
        out.push('\n');
        for r in &self.records {
            let side = r.side.map_or("-", Side::as_str);
            if S::EXACT {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.step,
                    side,
                    r.max_row_err,
                    r.max_col_err,
                    r.max_entry_bits.unwrap_or(0)
                ));
            } else {
                out.push_str(&format!(
                    "{},{},{:.16e},{:.16e}\n",
                    r.step,
                    side,
                    r.max_row_err.to_f64(),
                    r.max_col_err.to_f64()
                ));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SinkhornResult<S> {
    pub limit: PositiveMatrix<S>,
    pub left_accum: DiagonalScaling<S>,
    pub right_accum: DiagonalScaling<S>,
    pub steps_taken: usize,
    pub status: Status,
    pub trace: IterationTrace<S>,
}

impl<S: Scalar> SinkhornResult<S> {
    /// `L` when the run terminated exactly.
    pub fn termination_length(&self) -> Option<usize> {
        match self.status {
            Status::TerminatedFinite(l) => Some(l),
            _ => None,
        }
    }
}

/// Doubly stochastic scaling of a square matrix.
pub fn sinkhorn<S: Scalar>(a: &PositiveMatrix<S>, cfg: &IterationConfig) -> Result<SinkhornResult<S>> {
    if !a.is_square() {
        return Err(ScalingError::NotSquare {
            context: "doubly stochastic scaling",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    run(a, None, cfg)
}

/// `(r, c)`-stochastic scaling of an `m x n` matrix.
pub fn rc_sinkhorn<S: Scalar>(
    a: &PositiveMatrix<S>,
    target: &MarginTarget<S>,
    cfg: &IterationConfig,
) -> Result<SinkhornResult<S>> {
    target.check_dims(a)?;
    run(a, Some(target), cfg)
}

fn run<S: Scalar>(
    a: &PositiveMatrix<S>,
    target: Option<&MarginTarget<S>>,
    cfg: &IterationConfig,
) -> Result<SinkhornResult<S>> {
    cfg.validate::<S>()?;
    let tol = S::from_tolerance(cfg.tolerance);
    let mut current = a.clone();
    let mut left = DiagonalScaling::identity(a.rows());
    let mut right = DiagonalScaling::identity(a.cols());
    let mut records = Vec::new();

    let mut done = record(&mut records, 0, None, &current, target, &tol, cfg.record_matrices)?;
    let mut step = 0;
    let mut side = cfg.start_side.first_side();
    let over_budget = |m: &PositiveMatrix<S>| match (cfg.max_entry_bits, m.max_entry_bits()) {
        (Some(cap), Some(bits)) => bits > cap,
        _ => false,
    };
    while !done && step < cfg.max_steps && !over_budget(&current) {
        step += 1;
        match side {
            Side::Col => {
                let y = current.col_scaling(target)?;
                current = current.apply_right(&y)?;
                right = right.compose(&y)?;
            }
            Side::Row => {
                let x = current.row_scaling(target)?;
                current = current.apply_left(&x)?;
                left = left.compose(&x)?;
            }
        }
        rebalance(&mut left, &mut right)?;
        done = record(
            &mut records,
            step,
            Some(side),
            &current,
            target,
            &tol,
            cfg.record_matrices,
        )?;
        side = side.flip();
    }

    let status = match (done, S::EXACT) {
        (true, true) => Status::TerminatedFinite(step),
        (true, false) => Status::ConvergedWithinTolerance,
        (false, _) => Status::MaxStepsReached,
    };
    Ok(SinkhornResult {
        limit: current,
        left_accum: left,
        right_accum: right,
        steps_taken: step,
        status,
        trace: IterationTrace { records },
    })
}

/// Moves the common factor of the pair into `right` so that `left[0] = 1`.
/// `X A Y` is unchanged; without this the exact products carry a shared
/// scalar whose size grows quadratically in the step count.
fn rebalance<S: Scalar>(left: &mut DiagonalScaling<S>, right: &mut DiagonalScaling<S>) -> Result<()> {
    let lead = left.as_slice()[0].clone();
    if !lead.is_one() {
        *left = left.scaled(&(S::one() / &lead))?;
        *right = right.scaled(&lead)?;
    }
    Ok(())
}

fn record<S: Scalar>(
    records: &mut Vec<TraceRecord<S>>,
    step: usize,
    side: Option<Side>,
    current: &PositiveMatrix<S>,
    target: Option<&MarginTarget<S>>,
    tol: &S,
    keep_matrix: bool,
) -> Result<bool> {
    let max_row_err = current.max_row_error(target)?;
    let max_col_err = current.max_col_error(target)?;
    let done = max_row_err <= *tol && max_col_err <= *tol;
    records.push(TraceRecord {
        step,
        side,
        max_row_err,
        max_col_err,
        max_entry_bits: current.max_entry_bits(),
        matrix: keep_matrix.then(|| current.clone()),
    });
    Ok(done)
}

/// Max-norm distance between the limits of `A` and `P A Q`, from two
/// independent runs.
pub fn scaling_invariance_check<S: Scalar>(
    a: &PositiveMatrix<S>,
    p: &DiagonalScaling<S>,
    q: &DiagonalScaling<S>,
    cfg: &IterationConfig,
) -> Result<f64> {
    let paq = a.apply_left(p)?.apply_right(q)?;
    let first = sinkhorn(a, cfg)?;
    let second = sinkhorn(&paq, cfg)?;
    first.limit.max_abs_diff(&second.limit)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    /// Exact step cap per run.
    pub max_steps: usize,
    /// Start orders to try for each candidate.
    pub sides: Vec<StartSide>,
    /// Row-normalize each candidate first and skip duplicates.
    pub normalize_rows: bool,
    /// Refuse enumerations larger than this.
    pub candidate_cap: u128,
    /// Per-run entry-size budget; runs that exceed it count as non-terminating.
    pub max_entry_bits: Option<u64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            max_steps: DEFAULT_EXACT_MAX_STEPS,
            sides: vec![StartSide::ColumnFirst, StartSide::RowFirst],
            normalize_rows: false,
            candidate_cap: 10_000_000,
            max_entry_bits: Some(DEFAULT_SEARCH_MAX_BITS),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchEntry {
    /// The enumerated integer matrix.
    pub matrix: PositiveMatrix<Rational>,
    /// The matrix the run started from (row-normalized when requested).
    pub start: PositiveMatrix<Rational>,
    pub start_side: StartSide,
    pub steps: usize,
    pub limit: PositiveMatrix<Rational>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SearchCatalog {
    pub candidates: u128,
    pub runs: usize,
    pub entries: Vec<SearchEntry>,
    /// Count of entries per termination length.
    pub histogram: BTreeMap<usize, usize>,
}

impl SearchCatalog {
    pub fn contains(&self, m: &PositiveMatrix<Rational>, side: StartSide) -> Option<&SearchEntry> {
        self.entries
            .iter()
            .find(|e| &e.matrix == m && e.start_side == side)
    }
}

/// Enumerates every `n x n` integer matrix with entries in `1..=bound`, runs
/// exact iteration, and keeps the ones that terminate in `L >= 1` steps.
pub fn finite_termination_search(n: usize, bound: u64, cfg: &SearchConfig) -> Result<SearchCatalog> {
    if n < 2 {
        return Err(ScalingError::InvalidConfig(
            "search dimension must be at least 2".into(),
        ));
    }
    if bound < 1 {
        return Err(ScalingError::InvalidConfig(
            "entry bound must be at least 1".into(),
        ));
    }
    if cfg.sides.is_empty() {
        return Err(ScalingError::InvalidConfig("no start side selected".into()));
    }
    let cells =
        u32::try_from(n * n).map_err(|_| ScalingError::InvalidConfig("dimension too large".into()))?;
    let total = u128::from(bound)
        .checked_pow(cells)
        .filter(|t| *t <= cfg.candidate_cap);
    let total = total.ok_or(ScalingError::EnumerationCap {
        requested: u128::from(bound).saturating_pow(cells),
        cap: cfg.candidate_cap,
    })?;
    let run_cfg = IterationConfig {
        max_entry_bits: cfg.max_entry_bits,
        ..IterationConfig::exact().with_max_steps(cfg.max_steps)
    };
    let decode = |index: u128| {
        let mut rest = index;
        let data = (0..n * n)
            .map(|_| {
                let digit = (rest % u128::from(bound)) as u64 + 1;
                rest /= u128::from(bound);
                Rational::from(digit)
            })
            .collect();
        PositiveMatrix::from_row_major(n, n, data)
    };

    let mut starts = Vec::new();
    let mut seen = HashSet::new();
    for index in 0..total {
        let m = decode(index)?;
        let start = if cfg.normalize_rows {
            let normalized = m.apply_left(&m.row_scaling(None)?)?;
            if !seen.insert(normalized.to_rows()) {
                continue;
            }
            normalized
        } else {
            m.clone()
        };
        for &side in &cfg.sides {
            starts.push((m.clone(), start.clone(), side));
        }
    }

    let outcomes: Vec<Result<Option<SearchEntry>>> = starts
        .into_par_iter()
        .map(|(matrix, start, side)| {
            let result = sinkhorn(&start, &run_cfg.clone().with_start_side(side))?;
            Ok(match result.status {
                Status::TerminatedFinite(steps) if steps >= 1 => Some(SearchEntry {
                    matrix,
                    start,
                    start_side: side,
                    steps,
                    limit: result.limit,
                }),
                _ => None,
            })
        })
        .collect();

    let mut catalog = SearchCatalog {
        candidates: total,
        runs: outcomes.len(),
        ..SearchCatalog::default()
    };
    for outcome in outcomes {
        if let Some(entry) = outcome? {
            *catalog.histogram.entry(entry.steps).or_default() += 1;
            catalog.entries.push(entry);
        }
    }
    Ok(catalog)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{from_integer, parse_rational, ratio};

    fn q(rows: &[&[&str]]) -> PositiveMatrix<Rational> {
        PositiveMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|s| parse_rational(s).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    fn ints(rows: &[&[i64]]) -> PositiveMatrix<Rational> {
        PositiveMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| from_integer(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn floats(rows: &[&[f64]]) -> PositiveMatrix<f64> {
        PositiveMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn exact_worked_trace() {
        let cfg = IterationConfig::exact().with_max_steps(3).recording();
        let out = sinkhorn(&ints(&[&[1, 3], &[3, 4]]), &cfg).unwrap();
        let ms: Vec<_> = out.trace.matrices().cloned().collect();
        assert_eq!(ms.len(), 4);
        assert_eq!(ms[1], q(&[&["1/4", "3/7"], &["3/4", "4/7"]]));
        assert_eq!(ms[2], q(&[&["7/19", "12/19"], &["21/37", "16/37"]]));
        assert_eq!(ms[3], q(&[&["37/94", "111/187"], &["57/94", "76/187"]]));
        assert_eq!(out.status, Status::MaxStepsReached);
        assert_eq!(out.steps_taken, 3);
        let sides: Vec<_> = out.trace.records.iter().map(|r| r.side).collect();
        assert_eq!(
            sides,
            vec![None, Some(Side::Col), Some(Side::Row), Some(Side::Col)]
        );
    }

    #[test]
    fn doubly_stochastic_input_is_fixed_point() {
        let a = q(&[&["2/5", "3/5"], &["3/5", "2/5"]]);
        let out = sinkhorn(&a, &IterationConfig::exact()).unwrap();
        assert_eq!(out.status, Status::TerminatedFinite(0));
        assert_eq!(out.limit, a);
        assert_eq!(out.trace.len(), 1);
        assert!(out.left_accum.is_identity() && out.right_accum.is_identity());
    }

    #[test]
    fn approximate_converges_to_closed_form() {
        let out = sinkhorn(
            &floats(&[&[1.0, 3.0], &[3.0, 4.0]]),
            &IterationConfig::approximate(),
        )
        .unwrap();
        assert_eq!(out.status, Status::ConvergedWithinTolerance);
        assert!(out.steps_taken <= DEFAULT_MAX_STEPS);
        let expect = floats(&[&[0.4, 0.6], &[0.6, 0.4]]);
        assert!(out.limit.max_abs_diff(&expect).unwrap() <= 1e-10);
    }

    #[test]
    fn accumulated_scalings_reproduce_limit() {
        let a = ints(&[&[1, 2, 5], &[3, 4, 1], &[2, 2, 7]]);
        let out = sinkhorn(&a, &IterationConfig::exact().with_max_steps(6)).unwrap();
        let rebuilt = a
            .apply_left(&out.left_accum)
            .unwrap()
            .apply_right(&out.right_accum)
            .unwrap();
        assert_eq!(rebuilt, out.limit);

        let f = a.map_to_f64();
        let out = sinkhorn(&f, &IterationConfig::approximate()).unwrap();
        let rebuilt = f
            .apply_left(&out.left_accum)
            .unwrap()
            .apply_right(&out.right_accum)
            .unwrap();
        assert!(rebuilt.max_abs_diff(&out.limit).unwrap() < 1e-12);
    }

    #[test]
    fn config_errors() {
        let a = ints(&[&[1, 2], &[3, 4]]);
        assert_eq!(
            sinkhorn(&a, &IterationConfig::exact().with_tolerance(1e-3)).unwrap_err(),
            ScalingError::InexactTolerance(1e-3)
        );
        assert!(sinkhorn(&a, &IterationConfig::exact().with_max_steps(0)).is_err());
        let f = a.map_to_f64();
        assert!(sinkhorn(&f, &IterationConfig::approximate().with_tolerance(-1.0)).is_err());
        assert!(matches!(
            sinkhorn(&ints(&[&[1, 2, 3]]), &IterationConfig::exact()),
            Err(ScalingError::NotSquare { .. })
        ));
    }

    #[test]
    fn rc_examples() {
        let a = ints(&[&[1, 3], &[3, 4]]);
        let cfg = IterationConfig::exact().with_max_steps(12).recording();
        let plain = sinkhorn(&a, &cfg).unwrap();
        let unit = rc_sinkhorn(&a, &MarginTarget::unit(2), &cfg).unwrap();
        assert_eq!(plain.trace, unit.trace);

        let ones = ints(&[&[1, 1], &[1, 1]]);
        let t = MarginTarget::new(
            vec![from_integer(1), from_integer(3)],
            vec![from_integer(2), from_integer(2)],
        )
        .unwrap();
        let out = rc_sinkhorn(&ones, &t, &IterationConfig::exact()).unwrap();
        assert_eq!(out.limit, q(&[&["1/2", "1/2"], &["3/2", "3/2"]]));
        assert!(out.termination_length().is_some());

        let a = ints(&[&[1, 2], &[3, 4]]);
        let t = MarginTarget::new(
            vec![from_integer(3), from_integer(7)],
            vec![from_integer(4), from_integer(6)],
        )
        .unwrap();
        assert_eq!(
            rc_sinkhorn(&a, &t, &IterationConfig::exact()).unwrap().status,
            Status::TerminatedFinite(0)
        );

        let bad = MarginTarget::new(vec![from_integer(2)], vec![from_integer(1), from_integer(1)]).unwrap();
        assert!(rc_sinkhorn(&a, &bad, &IterationConfig::exact()).is_err());
    }

    #[test]
    fn rc_rectangular_approximate() {
        let a = floats(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]]);
        let t = MarginTarget::new(vec![1.0, 2.0], vec![0.5, 1.0, 1.5]).unwrap();
        let out = rc_sinkhorn(&a, &t, &IterationConfig::approximate()).unwrap();
        assert_eq!(out.status, Status::ConvergedWithinTolerance);
        assert!(out.limit.is_rc_stochastic(&t, 1e-12).unwrap());
    }

    #[test]
    fn invariance_examples() {
        let cfg = IterationConfig::approximate();
        let a = floats(&[&[1.0, 3.0], &[3.0, 4.0]]);
        let id = DiagonalScaling::identity(2);
        assert_eq!(scaling_invariance_check(&a, &id, &id, &cfg).unwrap(), 0.0);
        let p = DiagonalScaling::new(vec![2.0, 1.0]).unwrap();
        let qd = DiagonalScaling::new(vec![1.0, 5.0]).unwrap();
        assert!(scaling_invariance_check(&a, &p, &qd, &cfg).unwrap() <= 2e-12);
        let a = floats(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let p = DiagonalScaling::new(vec![3.0, 7.0]).unwrap();
        assert!(scaling_invariance_check(&a, &p, &id, &cfg).unwrap() <= 2e-12);
    }

    #[test]
    fn start_orders_agree() {
        let a = floats(&[&[1.0, 2.0, 0.5], &[3.0, 4.0, 2.0], &[1.0, 9.0, 3.0]]);
        let cfg = IterationConfig::approximate();
        let col = sinkhorn(&a, &cfg).unwrap();
        let row = sinkhorn(&a, &cfg.clone().with_start_side(StartSide::RowFirst)).unwrap();
        assert!(col.limit.max_abs_diff(&row.limit).unwrap() <= 2.0 * cfg.tolerance);
    }

    #[test]
    fn exact_alternation_and_soundness() {
        let a = ints(&[&[2, 1, 3], &[1, 5, 2], &[4, 1, 1]]);
        let out = sinkhorn(&a, &IterationConfig::exact().with_max_steps(8).recording()).unwrap();
        for r in &out.trace.records {
            match r.side {
                Some(Side::Col) => assert_eq!(r.max_col_err, from_integer(0)),
                Some(Side::Row) => assert_eq!(r.max_row_err, from_integer(0)),
                None => assert_eq!(r.step, 0),
            }
        }
        assert_eq!(out.status, Status::MaxStepsReached);
        let bits: Vec<_> = out
            .trace
            .records
            .iter()
            .map(|r| r.max_entry_bits.unwrap())
            .collect();
        assert!(bits.last() > bits.first());
    }

    #[test]
    fn trace_csv_format() {
        let out = sinkhorn(
            &ints(&[&[1, 3], &[3, 4]]),
            &IterationConfig::exact().with_max_steps(2),
        )
        .unwrap();
        let csv = out.trace.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "step,side,max_row_err,max_col_err,max_entry_bits");
        assert_eq!(lines[1], "0,-,6,6,3");
        assert_eq!(lines[2], "1,col,9/28,0,3");
        assert_eq!(lines.len(), 4);

        let out = sinkhorn(
            &floats(&[&[0.5, 0.5], &[0.5, 0.5]]),
            &IterationConfig::approximate(),
        )
        .unwrap();
        let csv = out.trace.to_csv();
        assert_eq!(
            csv,
            "step,side,max_row_err,max_col_err\n0,-,0.0000000000000000e0,0.0000000000000000e0\n"
        );
    }

    #[test]
    fn search_small_catalog() {
        let cat = finite_termination_search(2, 4, &SearchConfig::default()).unwrap();
        assert_eq!(cat.candidates, 256);
        let rank_one = ints(&[&[1, 2], &[2, 4]]);
        assert_eq!(cat.contains(&rank_one, StartSide::RowFirst).unwrap().steps, 2);
        let proportional = ints(&[&[2, 1], &[2, 1]]);
        let hit = cat.contains(&proportional, StartSide::ColumnFirst).unwrap();
        assert_eq!(hit.steps, 1);
        assert!(cat
            .contains(&ints(&[&[1, 2], &[3, 4]]), StartSide::ColumnFirst)
            .is_none());
        assert!(cat
            .contains(&ints(&[&[1, 2], &[3, 4]]), StartSide::RowFirst)
            .is_none());
        assert!(cat.histogram.keys().all(|&l| (1..=2).contains(&l)));
        for e in &cat.entries {
            assert!(e.limit.is_doubly_stochastic(0.0).unwrap());
        }
    }

    #[test]
    fn search_bounds_and_normalization() {
        let cat = finite_termination_search(2, 1, &SearchConfig::default()).unwrap();
        assert_eq!(cat.entries.len(), 2);
        assert!(cat
            .entries
            .iter()
            .all(|e| e.steps == 1 && e.limit.entries().iter().all(|x| *x == ratio(1, 2))));

        let cfg = SearchConfig {
            normalize_rows: true,
            ..SearchConfig::default()
        };
        let cat = finite_termination_search(2, 3, &cfg).unwrap();
        let plain = finite_termination_search(2, 3, &SearchConfig::default()).unwrap();
        assert!(cat.runs < plain.runs);

        assert!(finite_termination_search(1, 3, &SearchConfig::default()).is_err());
        assert!(finite_termination_search(2, 0, &SearchConfig::default()).is_err());
        let tiny = SearchConfig {
            candidate_cap: 100,
            ..SearchConfig::default()
        };
        assert!(matches!(
            finite_termination_search(3, 2, &tiny),
            Err(ScalingError::EnumerationCap {
                requested: 512,
                cap: 100
            })
        ));
    }

    #[test]
    fn entry_bit_budget() {
        let a = ints(&[&[1, 2, 1], &[2, 1, 2], &[1, 1, 2]]);
        let run = sinkhorn(&a, &IterationConfig::exact().with_max_entry_bits(1000)).unwrap();
        assert_eq!(run.status, Status::MaxStepsReached);
        let bits: Vec<u64> = run
            .trace
            .records
            .iter()
            .filter_map(|r| r.max_entry_bits)
            .collect();
        assert!(
            bits[bits.len() - 2] <= 1000 && bits[bits.len() - 1] > 1000,
            "{bits:?}"
        );

        // 2x2 growth is linear, so the default budget never binds there.
        let unbounded = SearchConfig {
            max_entry_bits: None,
            ..SearchConfig::default()
        };
        assert_eq!(
            finite_termination_search(2, 4, &unbounded).unwrap(),
            finite_termination_search(2, 4, &SearchConfig::default()).unwrap()
        );
        let cat = finite_termination_search(3, 2, &SearchConfig::default()).unwrap();
        assert_eq!(cat.candidates, 512);
        assert!(cat
            .entries
            .iter()
            .any(|e| e.matrix.entries().iter().all(|x| *x == ratio(1, 1))));
    }
}
