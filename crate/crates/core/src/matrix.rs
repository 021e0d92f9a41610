//! Positive matrices, positive diagonal scalings and margin targets.
//!
//! Row scaling multiplies row `i` by `target_i / row_i(A)`; column scaling
//! multiplies column `j` by `target_j / col_j(A)`. Targets default to one,
//! which gives the classical `X(A)` and `Y(A)`.

use std::fmt;

use crate::error::{Result, ScalingError};
use crate::scalar::{self, Scalar};

/// Dense row-major `rows x cols` matrix of strictly positive entries.
#[derive(Clone, Debug, PartialEq)]
pub struct PositiveMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

/// Positive diagonal matrix stored as its diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalScaling<S> {
    diag: Vec<S>,
}

/// Target row sums `r` and column sums `c` with `sum(r) == sum(c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MarginTarget<S> {
    row_targets: Vec<S>,
    col_targets: Vec<S>,
}

impl<S: Scalar> PositiveMatrix<S> {
    pub fn new(rows: Vec<Vec<S>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if m == 0 || n == 0 {
            return Err(ScalingError::Empty);
        }
        let mut data = Vec::with_capacity(m * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(ScalingError::Ragged {
                    row: i + 1,
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Self::from_row_major(m, n, data)
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(ScalingError::Empty);
        }
        if data.len() != rows * cols {
            return Err(ScalingError::DimensionMismatch {
                context: "row-major data",
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|x| !x.is_strictly_positive()) {
            return Err(ScalingError::NonPositiveEntry {
                row: k / cols + 1,
                col: k % cols + 1,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds without validation; callers guarantee positivity.
    fn from_parts(rows: usize, cols: usize, data: Vec<S>) -> Self {
        debug_assert!(data.iter().all(Scalar::is_strictly_positive));
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry at zero-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        self.data.chunks(self.cols).map(<[S]>::to_vec).collect()
    }

    pub fn row_sums(&self) -> Vec<S> {
        self.data.chunks(self.cols).map(|r| scalar::sum(r)).collect()
    }

    pub fn col_sums(&self) -> Vec<S> {
        let mut sums = self.row(0).to_vec();
        for i in 1..self.rows {
            for (s, x) in sums.iter_mut().zip(self.row(i)) {
                *s = s.clone() + x;
            }
        }
        sums
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Self::from_parts(self.cols, self.rows, data)
    }

    /// `X_r(A)`: coordinate `i` is `r_i / row_i(A)`, with `r_i = 1` when no target is given.
    pub fn row_scaling(&self, target: Option<&MarginTarget<S>>) -> Result<DiagonalScaling<S>> {
        let targets = match target {
            Some(t) => Some(t.check_rows(self.rows)?),
            None => None,
        };
        Ok(DiagonalScaling::from_parts(reciprocal_scaling(
            self.row_sums(),
            targets,
        )))
    }

    /// `Y_c(A)`: coordinate `j` is `c_j / col_j(A)`.
    pub fn col_scaling(&self, target: Option<&MarginTarget<S>>) -> Result<DiagonalScaling<S>> {
        let targets = match target {
            Some(t) => Some(t.check_cols(self.cols)?),
            None => None,
        };
        Ok(DiagonalScaling::from_parts(reciprocal_scaling(
            self.col_sums(),
            targets,
        )))
    }

    /// `D A`: row `i` multiplied by `D_i`.
    pub fn apply_left(&self, d: &DiagonalScaling<S>) -> Result<Self> {
        if d.len() != self.rows {
            return Err(ScalingError::DimensionMismatch {
                context: "left diagonal",
                expected: self.rows,
                found: d.len(),
            });
        }
        let data = self
            .data
            .chunks(self.cols)
            .zip(d.as_slice())
            .flat_map(|(row, x)| row.iter().map(move |a| a.clone() * x))
            .collect();
        Ok(Self::from_parts(self.rows, self.cols, data))
    }

    /// `A D`: column `j` multiplied by `D_j`.
    pub fn apply_right(&self, d: &DiagonalScaling<S>) -> Result<Self> {
        if d.len() != self.cols {
            return Err(ScalingError::DimensionMismatch {
                context: "right diagonal",
                expected: self.cols,
                found: d.len(),
            });
        }
        let data = self
            .data
            .chunks(self.cols)
            .flat_map(|row| row.iter().zip(d.as_slice()).map(|(a, x)| a.clone() * x))
            .collect();
        Ok(Self::from_parts(self.rows, self.cols, data))
    }

    /// Largest `|row_i(A) - r_i|`.
    pub fn max_row_error(&self, target: Option<&MarginTarget<S>>) -> Result<S> {
        let targets = match target {
            Some(t) => Some(t.check_rows(self.rows)?),
            None => None,
        };
        Ok(margin_error(self.row_sums(), targets))
    }

    /// Largest `|col_j(A) - c_j|`.
    pub fn max_col_error(&self, target: Option<&MarginTarget<S>>) -> Result<S> {
        let targets = match target {
            Some(t) => Some(t.check_cols(self.cols)?),
            None => None,
        };
        Ok(margin_error(self.col_sums(), targets))
    }

    /// True iff every `|row_i(A) - r_i| <= tol`. Exact matrices compare exactly.
    pub fn is_row_stochastic(&self, target: Option<&MarginTarget<S>>, tol: f64) -> bool {
        self.max_row_error(target)
            .is_ok_and(|e| e <= S::from_tolerance(tol))
    }

    pub fn is_col_stochastic(&self, target: Option<&MarginTarget<S>>, tol: f64) -> bool {
        self.max_col_error(target)
            .is_ok_and(|e| e <= S::from_tolerance(tol))
    }

    /// Row and column sums all within `tol` of one. Requires a square matrix.
    pub fn is_doubly_stochastic(&self, tol: f64) -> Result<bool> {
        if !self.is_square() {
            return Err(ScalingError::NotSquare {
                context: "doubly stochastic check",
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.is_row_stochastic(None, tol) && self.is_col_stochastic(None, tol))
    }

    /// `(r, c)`-stochastic within `tol`.
    pub fn is_rc_stochastic(&self, target: &MarginTarget<S>, tol: f64) -> Result<bool> {
        let tol = S::from_tolerance(tol);
        Ok(self.max_row_error(Some(target))? <= tol && self.max_col_error(Some(target))? <= tol)
    }

    /// Largest bit size of any numerator or denominator (exact regime only).
    pub fn max_entry_bits(&self) -> Option<u64> {
        self.data.iter().filter_map(Scalar::bit_size).max()
    }

    pub fn map_to_f64(&self) -> PositiveMatrix<f64> {
        PositiveMatrix::from_parts(
            self.rows,
            self.cols,
            self.data.iter().map(Scalar::to_f64).collect(),
        )
    }

    /// Largest `|a_ij - b_ij|` as a double.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(ScalingError::DimensionMismatch {
                context: "matrix comparison",
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b).abs().to_f64())
            .fold(0.0, f64::max))
    }
}

fn reciprocal_scaling<S: Scalar>(sums: Vec<S>, targets: Option<&[S]>) -> Vec<S> {
    match targets {
        Some(t) => sums.into_iter().zip(t).map(|(s, r)| r.clone() / &s).collect(),
        None => sums.into_iter().map(|s| S::one() / &s).collect(),
    }
}

fn margin_error<S: Scalar>(sums: Vec<S>, targets: Option<&[S]>) -> S {
    match targets {
        Some(t) => scalar::max_of(sums.into_iter().zip(t).map(|(s, r)| (s - r).abs())),
        None => {
            let one = S::one();
            scalar::max_of(sums.into_iter().map(|s| (s - &one).abs()))
        }
    }
}

impl<S: Scalar> fmt::Display for PositiveMatrix<S> {
    /// Rows separated by `; `, entries by `, `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.data.chunks(self.cols).enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> DiagonalScaling<S> {
    pub fn new(diag: Vec<S>) -> Result<Self> {
        if let Some(k) = diag.iter().position(|x| !x.is_strictly_positive()) {
            return Err(ScalingError::NonPositiveDiagonal { index: k + 1 });
        }
        Ok(Self { diag })
    }

    fn from_parts(diag: Vec<S>) -> Self {
        debug_assert!(diag.iter().all(Scalar::is_strictly_positive));
        Self { diag }
    }

    pub fn identity(k: usize) -> Self {
        Self::from_parts(vec![S::one(); k])
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn as_slice(&self) -> &[S] {
        &self.diag
    }

    pub fn is_identity(&self) -> bool {
        self.diag.iter().all(|x| x.is_one())
    }

    /// Coordinatewise product: the diagonal of `self * other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(ScalingError::DimensionMismatch {
                context: "diagonal product",
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(Self::from_parts(
            self.diag
                .iter()
                .zip(&other.diag)
                .map(|(a, b)| a.clone() * b)
                .collect(),
        ))
    }

    /// `lambda * D` for positive `lambda`.
    pub fn scaled(&self, lambda: &S) -> Result<Self> {
        if !lambda.is_strictly_positive() {
            return Err(ScalingError::NotPositive("diagonal multiplier"));
        }
        Ok(Self::from_parts(
            self.diag.iter().map(|x| x.clone() * lambda).collect(),
        ))
    }
}

impl<S: Scalar> MarginTarget<S> {
    pub fn new(row_targets: Vec<S>, col_targets: Vec<S>) -> Result<Self> {
        if row_targets.is_empty() || col_targets.is_empty() {
            return Err(ScalingError::Empty);
        }
        if let Some(k) = row_targets.iter().position(|x| !x.is_strictly_positive()) {
            return Err(ScalingError::NonPositiveTarget {
                which: "row",
                index: k + 1,
            });
        }
        if let Some(k) = col_targets.iter().position(|x| !x.is_strictly_positive()) {
            return Err(ScalingError::NonPositiveTarget {
                which: "column",
                index: k + 1,
            });
        }
        let rows: S = scalar::sum(&row_targets);
        let cols: S = scalar::sum(&col_targets);
        if !S::totals_agree(&rows, &cols) {
            return Err(ScalingError::UnequalTotals {
                rows: rows.to_string(),
                cols: cols.to_string(),
            });
        }
        Ok(Self {
            row_targets,
            col_targets,
        })
    }

    /// All-ones targets for an `n x n` problem.
    pub fn unit(n: usize) -> Self {
        Self {
            row_targets: vec![S::one(); n],
            col_targets: vec![S::one(); n],
        }
    }

    /// The margins of `a` itself.
    pub fn of_matrix(a: &PositiveMatrix<S>) -> Self {
        Self {
            row_targets: a.row_sums(),
            col_targets: a.col_sums(),
        }
    }

    pub fn row_targets(&self) -> &[S] {
        &self.row_targets
    }

    pub fn col_targets(&self) -> &[S] {
        &self.col_targets
    }

    pub fn is_unit(&self) -> bool {
        self.row_targets
            .iter()
            .chain(&self.col_targets)
            .all(|x| x.is_one())
    }

    pub fn check_dims(&self, a: &PositiveMatrix<S>) -> Result<()> {
        self.check_rows(a.rows())?;
        self.check_cols(a.cols())?;
        Ok(())
    }

    fn check_rows(&self, m: usize) -> Result<&[S]> {
        if self.row_targets.len() != m {
            return Err(ScalingError::DimensionMismatch {
                context: "row targets",
                expected: m,
                found: self.row_targets.len(),
            });
        }
        Ok(&self.row_targets)
    }

    fn check_cols(&self, n: usize) -> Result<&[S]> {
        if self.col_targets.len() != n {
            return Err(ScalingError::DimensionMismatch {
                context: "column targets",
                expected: n,
                found: self.col_targets.len(),
            });
        }
        Ok(&self.col_targets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{from_integer, parse_rational, ratio, Rational};
    use proptest::prelude::*;

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

    fn v(xs: &[&str]) -> Vec<Rational> {
        xs.iter().map(|s| parse_rational(s).unwrap()).collect()
    }

    #[test]
    fn rejects_non_positive_and_ragged() {
        let err = PositiveMatrix::new(vec![vec![1.0, 2.0], vec![0.0, 4.0]]).unwrap_err();
        assert_eq!(err, ScalingError::NonPositiveEntry { row: 2, col: 1 });
        assert_eq!(err.to_string(), "entry (2,1) is not positive");
        assert!(matches!(
            PositiveMatrix::new(vec![vec![1.0, 2.0], vec![3.0]]),
            Err(ScalingError::Ragged { row: 2, .. })
        ));
        assert!(matches!(
            PositiveMatrix::<f64>::new(vec![]),
            Err(ScalingError::Empty)
        ));
        assert!(PositiveMatrix::new(vec![vec![-1.0]]).is_err());
        assert!(DiagonalScaling::new(vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn margins() {
        assert_eq!(ints(&[&[1, 3], &[3, 4]]).row_sums(), v(&["4", "7"]));
        assert_eq!(q(&[&["1/2", "1/2"], &["1/2", "1/2"]]).row_sums(), v(&["1", "1"]));
        assert_eq!(ints(&[&[1, 2], &[3, 4]]).row_sums(), v(&["3", "7"]));
        assert_eq!(ints(&[&[1, 3], &[3, 4]]).col_sums(), v(&["4", "7"]));
        assert_eq!(q(&[&["1/2", "1/2"], &["1/2", "1/2"]]).col_sums(), v(&["1", "1"]));
        assert_eq!(ints(&[&[1, 2], &[3, 4]]).col_sums(), v(&["4", "6"]));
    }

    #[test]
    fn row_scaling_examples() {
        // (u u; 1-u 1-u) row scales by diag(1/(2u), 1/(2-2u))
        let u = ratio(1, 3);
        let one_minus = ratio(2, 3);
        let a = PositiveMatrix::new(vec![
            vec![u.clone(), u.clone()],
            vec![one_minus.clone(), one_minus],
        ])
        .unwrap();
        let x = a.row_scaling(None).unwrap();
        assert_eq!(x.as_slice(), v(&["3/2", "3/4"]).as_slice());
        assert!(a
            .apply_left(&x)
            .unwrap()
            .entries()
            .iter()
            .all(|e| *e == ratio(1, 2)));

        let stochastic = q(&[&["1/4", "3/4"], &["2/5", "3/5"]]);
        assert!(stochastic.row_scaling(None).unwrap().is_identity());

        let t = MarginTarget::new(v(&["2", "2"]), v(&["1", "3"])).unwrap();
        let x = ints(&[&[1, 2], &[3, 4]]).row_scaling(Some(&t)).unwrap();
        assert_eq!(x.as_slice(), v(&["2/3", "2/7"]).as_slice());
    }

    #[test]
    fn col_scaling_examples() {
        let y = ints(&[&[1, 3], &[3, 4]]).col_scaling(None).unwrap();
        assert_eq!(y.as_slice(), v(&["1/4", "1/7"]).as_slice());
        let a = ints(&[&[2, 5], &[7, 11]]);
        let y = a.col_scaling(None).unwrap();
        assert_eq!(y.as_slice(), v(&["1/9", "1/16"]).as_slice());
        let cs = q(&[&["1/4", "2/5"], &["3/4", "3/5"]]);
        assert!(cs.col_scaling(None).unwrap().is_identity());
        // Y(A) = X(A^t)
        assert_eq!(a.transpose().row_scaling(None).unwrap(), y);
    }

    #[test]
    fn apply_examples() {
        let a1 = q(&[&["1/4", "3/7"], &["3/4", "4/7"]]);
        let a2 = a1.apply_left(&a1.row_scaling(None).unwrap()).unwrap();
        assert_eq!(a2, q(&[&["7/19", "12/19"], &["21/37", "16/37"]]));
        assert_eq!(a1.apply_left(&DiagonalScaling::identity(2)).unwrap(), a1);
        let ones = ints(&[&[1, 1], &[1, 1]]);
        let d = DiagonalScaling::new(v(&["2", "3"])).unwrap();
        assert_eq!(ones.apply_left(&d).unwrap(), ints(&[&[2, 2], &[3, 3]]));
        assert_eq!(ones.apply_right(&d).unwrap(), ints(&[&[2, 3], &[2, 3]]));
        let a0 = ints(&[&[1, 3], &[3, 4]]);
        assert_eq!(a0.apply_right(&a0.col_scaling(None).unwrap()).unwrap(), a1);
        assert_eq!(a0.apply_right(&DiagonalScaling::identity(2)).unwrap(), a0);
        assert!(a0.apply_right(&DiagonalScaling::identity(3)).is_err());
        assert!(a0.apply_left(&DiagonalScaling::identity(1)).is_err());
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(ints(&[&[1, 2], &[3, 4]]).transpose(), ints(&[&[1, 3], &[2, 4]]));
        let sym = ints(&[&[1, 2], &[2, 5]]);
        assert_eq!(sym.transpose(), sym);
        let a = ints(&[&[1, 3], &[3, 4]]);
        let at = a.transpose();
        assert_eq!(
            a.apply_right(&a.col_scaling(None).unwrap()).unwrap(),
            at.apply_left(&at.row_scaling(None).unwrap()).unwrap().transpose()
        );
        let rect = ints(&[&[1, 2, 3], &[4, 5, 6]]);
        assert_eq!(rect.transpose().rows(), 3);
        assert_eq!(rect.transpose().get(2, 1), &from_integer(6));
    }

    #[test]
    fn stochastic_predicates() {
        assert!(q(&[&["1/4", "3/4"], &["3/4", "1/4"]]).is_row_stochastic(None, 0.0));
        assert!(!ints(&[&[1, 3], &[3, 4]]).is_row_stochastic(None, 0.0));
        let a1 = q(&[&["1/4", "3/7"], &["3/4", "4/7"]]);
        assert!(!a1.is_row_stochastic(None, 0.0));
        assert!(a1.is_col_stochastic(None, 0.0));
        assert!(q(&[&["2/5", "3/5"], &["3/5", "2/5"]])
            .is_doubly_stochastic(0.0)
            .unwrap());
        assert!(!a1.is_doubly_stochastic(0.0).unwrap());
        assert!(q(&[&["1/2", "1/2"], &["1/2", "1/2"]])
            .is_doubly_stochastic(0.0)
            .unwrap());
        assert!(ints(&[&[1, 2, 3]]).is_doubly_stochastic(0.0).is_err());

        let approx = PositiveMatrix::new(vec![vec![0.5, 0.5 + 1e-13], vec![0.5, 0.5]]).unwrap();
        assert!(approx.is_doubly_stochastic(1e-12).unwrap());
        assert!(!approx.is_doubly_stochastic(1e-14).unwrap());
    }

    #[test]
    fn margin_targets() {
        assert!(matches!(
            MarginTarget::new(v(&["1", "2"]), v(&["1", "1"])),
            Err(ScalingError::UnequalTotals { .. })
        ));
        assert!(matches!(
            MarginTarget::new(v(&["0", "2"]), v(&["1", "1"])),
            Err(ScalingError::NonPositiveTarget {
                which: "row",
                index: 1
            })
        ));
        let a = ints(&[&[1, 2], &[3, 4]]);
        let t = MarginTarget::of_matrix(&a);
        assert!(a.is_rc_stochastic(&t, 0.0).unwrap());
        let wrong = MarginTarget::new(v(&["1", "1", "1"]), v(&["3"])).unwrap();
        assert!(a.row_scaling(Some(&wrong)).is_err());
        assert!(MarginTarget::new(vec![1.0, 2.0], vec![1.5, 1.5 + 1e-15]).is_ok());
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (1i64..=30, 1i64..=30).prop_map(|(p, q)| ratio(p, q))
    }

    fn exact_matrix() -> impl Strategy<Value = PositiveMatrix<Rational>> {
        (1usize..=5, 1usize..=5).prop_flat_map(|(m, n)| {
            proptest::collection::vec(small_rational(), m * n)
                .prop_map(move |data| PositiveMatrix::from_row_major(m, n, data).unwrap())
        })
    }

    fn float_matrix() -> impl Strategy<Value = PositiveMatrix<f64>> {
        (1usize..=6, 1usize..=6).prop_flat_map(|(m, n)| {
            proptest::collection::vec(0.01f64..100.0, m * n)
                .prop_map(move |data| PositiveMatrix::from_row_major(m, n, data).unwrap())
        })
    }

    proptest! {
        #[test]
        fn row_scaling_makes_rows_stochastic(a in exact_matrix()) {
            let scaled = a.apply_left(&a.row_scaling(None).unwrap()).unwrap();
            prop_assert!(scaled.is_row_stochastic(None, 0.0));
            let scaled = a.apply_right(&a.col_scaling(None).unwrap()).unwrap();
            prop_assert!(scaled.is_col_stochastic(None, 0.0));
        }

        #[test]
        fn row_scaling_float_within_rounding(a in float_matrix()) {
            let scaled = a.apply_left(&a.row_scaling(None).unwrap()).unwrap();
            let tol = 4.0 * f64::EPSILON * a.cols() as f64;
            prop_assert!(scaled.is_row_stochastic(None, tol));
        }

        #[test]
        fn transpose_symmetry(a in exact_matrix()) {
            let at = a.transpose();
            prop_assert_eq!(
                a.apply_right(&a.col_scaling(None).unwrap()).unwrap(),
                at.apply_left(&at.row_scaling(None).unwrap()).unwrap().transpose()
            );
            prop_assert_eq!(
                a.apply_left(&a.row_scaling(None).unwrap()).unwrap(),
                at.apply_right(&at.col_scaling(None).unwrap()).unwrap().transpose()
            );
            prop_assert_eq!(at.row_sums(), a.col_sums());
            prop_assert_eq!(at.transpose(), a);
        }

        #[test]
        fn scaling_preserves_positivity(a in float_matrix(), seed in 0.001f64..1000.0) {
            let d = DiagonalScaling::new(vec![seed; a.rows()]).unwrap();
            let out = a.apply_left(&d).unwrap();
            prop_assert!(out.entries().iter().all(|x| *x > 0.0));
        }
    }
}
