//! Exact decision procedure for finite termination of `2 x 2` scaling.
//!
//! For `A = (a b; c d)` started with column scaling:
//! - `A` doubly stochastic: `L = 0`;
//! - `ab = cd`: one column scaling finishes, `A = (a ct; c at)`;
//! - `ad = bc` (rank one): column scaling gives equal columns and a row
//!   scaling finishes at `(1/2 1/2; 1/2 1/2)`, `A = (p q; pt qt)`;
//! - otherwise the sequence never becomes doubly stochastic.
//!
//! Starting with row scaling mirrors this with `ac = bd` and `A = (p pt; r rt)`.
//! Every verdict is cross-checked against the exact engine.

use std::fmt;

use num_traits::One;

use crate::engine::{sinkhorn, IterationConfig, StartSide};
use crate::error::{Result, ScalingError};
use crate::exact::{half, Rational};
use crate::matrix::PositiveMatrix;

/// Steps run by the engine to confirm a verdict; finite 2x2 runs need at most 2.
const CROSS_CHECK_STEPS: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TerminationKind {
    AlreadyDoublyStochastic,
    /// `A = (a ct; c at)`; column scaling alone is doubly stochastic.
    OneStepColumn {
        a: Rational,
        c: Rational,
        t: Rational,
    },
    /// `A = (a b; bt at)`; row scaling alone is doubly stochastic.
    OneStepRow {
        a: Rational,
        b: Rational,
        t: Rational,
    },
    /// `A = (p pt; r rt)`, `t != 1`: row scaling then column scaling.
    TwoStepColumnLast {
        p: Rational,
        r: Rational,
        t: Rational,
    },
    /// `A = (p q; pt qt)`, `t != 1`: column scaling then row scaling.
    TwoStepRowLast {
        p: Rational,
        q: Rational,
        t: Rational,
    },
    Infinite,
}

impl TerminationKind {
    pub fn steps(&self) -> Option<usize> {
        match self {
            TerminationKind::AlreadyDoublyStochastic => Some(0),
            TerminationKind::OneStepColumn { .. } | TerminationKind::OneStepRow { .. } => Some(1),
            TerminationKind::TwoStepColumnLast { .. } | TerminationKind::TwoStepRowLast { .. } => Some(2),
            TerminationKind::Infinite => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TerminationKind::AlreadyDoublyStochastic => "AlreadyDoublyStochastic",
            TerminationKind::OneStepColumn { .. } => "OneStepColumn",
            TerminationKind::OneStepRow { .. } => "OneStepRow",
            TerminationKind::TwoStepColumnLast { .. } => "TwoStepColumnLast",
            TerminationKind::TwoStepRowLast { .. } => "TwoStepRowLast",
            TerminationKind::Infinite => "Infinite",
        }
    }

    /// Named parameters of the variant, in display order.
    pub fn parameters(&self) -> Vec<(&'static str, &Rational)> {
        match self {
            TerminationKind::OneStepColumn { a, c, t } => vec![("a", a), ("c", c), ("t", t)],
            TerminationKind::OneStepRow { a, b, t } => vec![("a", a), ("b", b), ("t", t)],
            TerminationKind::TwoStepColumnLast { p, r, t } => vec![("p", p), ("r", r), ("t", t)],
            TerminationKind::TwoStepRowLast { p, q, t } => vec![("p", p), ("q", q), ("t", t)],
            TerminationKind::AlreadyDoublyStochastic | TerminationKind::Infinite => Vec::new(),
        }
    }

    /// Rebuilds `A` from the parameters of a one- or two-step form.
    pub fn reconstruct(&self) -> Option<PositiveMatrix<Rational>> {
        let entries = match self {
            TerminationKind::OneStepColumn { a, c, t } => [a.clone(), c * t, c.clone(), a * t],
            TerminationKind::OneStepRow { a, b, t } => [a.clone(), b.clone(), b * t, a * t],
            TerminationKind::TwoStepColumnLast { p, r, t } => [p.clone(), p * t, r.clone(), r * t],
            TerminationKind::TwoStepRowLast { p, q, t } => [p.clone(), q.clone(), p * t, q * t],
            TerminationKind::AlreadyDoublyStochastic | TerminationKind::Infinite => return None,
        };
        PositiveMatrix::from_row_major(2, 2, entries.to_vec()).ok()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TerminationClass {
    pub kind: TerminationKind,
    /// Exact doubly stochastic limit; present for every finite verdict.
    pub limit: Option<PositiveMatrix<Rational>>,
    pub start_side: StartSide,
}

impl TerminationClass {
    pub fn steps(&self) -> Option<usize> {
        self.kind.steps()
    }

    pub fn is_finite(&self) -> bool {
        self.steps().is_some()
    }
}

impl fmt::Display for TerminationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.kind.name(), self.start_side)?;
        match self.steps() {
            Some(l) => write!(f, ", L = {l}"),
            None => f.write_str(", never terminates"),
        }
    }
}

fn entries(a: &PositiveMatrix<Rational>) -> Result<[&Rational; 4]> {
    if a.rows() != 2 || a.cols() != 2 {
        return Err(ScalingError::NotTwoByTwo {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    Ok([a.get(0, 0), a.get(0, 1), a.get(1, 0), a.get(1, 1)])
}

fn symmetric_limit(alpha: Rational, beta: Rational) -> PositiveMatrix<Rational> {
    PositiveMatrix::from_row_major(2, 2, vec![alpha.clone(), beta.clone(), beta, alpha])
        .expect("limit entries are positive")
}

fn flat_limit() -> PositiveMatrix<Rational> {
    symmetric_limit(half(), half())
}

/// Decides how many steps the exact sequence needs from `start_side`.
pub fn classify_2x2(a: &PositiveMatrix<Rational>, start_side: StartSide) -> Result<TerminationClass> {
    let [p, q, r, s] = entries(a)?;
    let (kind, limit) = if a.is_doubly_stochastic(0.0)? {
        (TerminationKind::AlreadyDoublyStochastic, Some(a.clone()))
    } else {
        match start_side {
            StartSide::ColumnFirst if p * q == r * s => {
                let total = p + r;
                let limit = symmetric_limit(p / &total, r / &total);
                (
                    TerminationKind::OneStepColumn {
                        a: p.clone(),
                        c: r.clone(),
                        t: q / r,
                    },
                    Some(limit),
                )
            }
            StartSide::RowFirst if p * r == q * s => {
                let total = p + q;
                let limit = symmetric_limit(p / &total, q / &total);
                (
                    TerminationKind::OneStepRow {
                        a: p.clone(),
                        b: q.clone(),
                        t: r / q,
                    },
                    Some(limit),
                )
            }
            StartSide::ColumnFirst if p * s == q * r => (
                TerminationKind::TwoStepRowLast {
                    p: p.clone(),
                    q: q.clone(),
                    t: r / p,
                },
                Some(flat_limit()),
            ),
            StartSide::RowFirst if p * s == q * r => (
                TerminationKind::TwoStepColumnLast {
                    p: p.clone(),
                    r: r.clone(),
                    t: q / p,
                },
                Some(flat_limit()),
            ),
            _ => (TerminationKind::Infinite, None),
        }
    };
    let verdict = TerminationClass {
        kind,
        limit,
        start_side,
    };
    cross_check(a, &verdict)?;
    Ok(verdict)
}

fn cross_check(a: &PositiveMatrix<Rational>, verdict: &TerminationClass) -> Result<()> {
    let cfg = IterationConfig::exact()
        .with_start_side(verdict.start_side)
        .with_max_steps(CROSS_CHECK_STEPS);
    let run = sinkhorn(a, &cfg)?;
    let engine_steps = run.termination_length();
    let limit_agrees = match (&verdict.limit, engine_steps) {
        (Some(limit), Some(_)) => *limit == run.limit,
        (None, None) => true,
        _ => false,
    };
    if engine_steps != verdict.steps() || !limit_agrees {
        return Err(ScalingError::Internal(format!(
            "classifier says {verdict} but the exact engine reports {:?} for {a}",
            run.status
        )));
    }
    Ok(())
}

/// Verdicts for both start orders. `N1` starts with row scaling, `N2` with
/// column scaling.
#[derive(Clone, Debug, PartialEq)]
pub struct BothOrders {
    pub row_first: TerminationClass,
    pub column_first: TerminationClass,
    /// `|N1 - N2|` when both are finite.
    pub difference: Option<usize>,
}

pub fn classify_both_orders(a: &PositiveMatrix<Rational>) -> Result<BothOrders> {
    let row_first = classify_2x2(a, StartSide::RowFirst)?;
    let column_first = classify_2x2(a, StartSide::ColumnFirst)?;
    let difference = match (row_first.steps(), column_first.steps()) {
        (Some(n1), Some(n2)) => Some(n1.abs_diff(n2)),
        _ => None,
    };
    Ok(BothOrders {
        row_first,
        column_first,
        difference,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StochasticShape {
    /// `(a 1-a; a 1-a)`: row stochastic, column scaling finishes.
    EqualRows,
    /// `(a a; 1-a 1-a)`: column stochastic, row scaling finishes.
    EqualColumns,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OneStepForm {
    pub shape: StochasticShape,
    pub a: Rational,
    pub limit: PositiveMatrix<Rational>,
}

/// Detects the stochastic-but-not-doubly-stochastic shapes that one scaling
/// turns into `(1/2 1/2; 1/2 1/2)`.
pub fn stochastic_one_step_forms(m: &PositiveMatrix<Rational>) -> Option<OneStepForm> {
    let [a, b, c, d] = entries(m).ok()?;
    if *a == half() {
        return None;
    }
    let one = Rational::one();
    let shape = if a == c && b == d && a + b == one {
        StochasticShape::EqualRows
    } else if a == b && c == d && a + c == one {
        StochasticShape::EqualColumns
    } else {
        return None;
    };
    Some(OneStepForm {
        shape,
        a: a.clone(),
        limit: flat_limit(),
    })
}
