//! Exact probabilities under the traditional and name-popularity models.
//!
//! Events follow the usual notation: `Eb`/`Yb` for an elder/younger boy,
//! `Eg1`/`Yg1` for an elder/younger girl named `n1`, and `Eg\Eg1`/`Yg\Yg1`
//! for a girl carrying any other name. The [`JointTable`] holds the 3×3
//! joint probabilities over these partitions.

use std::fmt;

use crate::error::{Error, Result};
use crate::SUM_TOLERANCE;

pub use crate::interval::Interval;

/// Which naming model completes the joint table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Younger girls are named `n1` with the same marginal probability as
    /// elder girls.
    A,
    /// Names are drawn by popularity; a second daughter is named from the
    /// popularities left once her sister's name is removed.
    B,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::A => f.write_str("A"),
            Model::B => f.write_str("B"),
        }
    }
}

/// Name popularities `(r1, ..., rK)` with a non-increasing tail.
///
/// `r1` is the popularity of the distinguished name `n1` and is not ordered
/// relative to the tail.
#[derive(Debug, Clone, PartialEq)]
pub struct PopularityVector {
    values: Vec<f64>,
}

/// Validates `values` and returns a popularity vector with its tail
/// (positions 2..K) stably sorted in non-increasing order.
///
/// Zero entries are rejected unless `allow_zero` is set. Entries equal to 1
/// are always rejected.
pub fn make_popularity(values: &[f64], allow_zero: bool) -> Result<PopularityVector> {
    if values.len() < 2 {
        return Err(Error::Size(values.len()));
    }
    for (i, &v) in values.iter().enumerate() {
        let ok = if allow_zero {
            (0.0..1.0).contains(&v)
        } else {
            v > 0.0 && v < 1.0
        };
        if !ok {
            let bound = if allow_zero { "[0, 1)" } else { "(0, 1)" };
            return Err(Error::range(format!(
                "popularity r{} = {v} is outside {bound}",
                i + 1
            )));
        }
    }
    let sum: f64 = values.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::Sum {
            sum,
            tolerance: SUM_TOLERANCE,
        });
    }
    let mut values = values.to_vec();
    // sort_by is stable, so ties keep their input order
    values[1..].sort_by(|a, b| b.total_cmp(a));
    Ok(PopularityVector { values })
}

impl PopularityVector {
    /// `(1/K, ..., 1/K)`
    pub fn uniform(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::Size(k));
        }
        Ok(Self {
            values: vec![1.0 / k as f64; k],
        })
    }

    /// `(r1, (1-r1)/(K-1), ..., (1-r1)/(K-1))`
    pub fn uniform_tail(k: usize, r1: f64) -> Result<Self> {
        if k < 2 {
            return Err(Error::Size(k));
        }
        if !(r1 > 0.0 && r1 < 1.0) {
            return Err(Error::range(format!("r1 = {r1} is outside (0, 1)")));
        }
        let rest = (1.0 - r1) / (k - 1) as f64;
        let mut values = vec![rest; k];
        values[0] = r1;
        Ok(Self { values })
    }

    pub fn k(&self) -> usize {
        self.values.len()
    }

    pub fn r1(&self) -> f64 {
        self.values[0]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Popularities of `n2, ..., nK`.
    pub fn tail(&self) -> &[f64] {
        &self.values[1..]
    }

    /// Popularity of name `n_k`, 1-based.
    pub fn get(&self, name: usize) -> f64 {
        self.values[name - 1]
    }

    /// `sum_{k>=2} r_k / (1 - r_k)`
    pub fn tail_odds_sum(&self) -> f64 {
        tail_odds_sum(self.tail())
    }
}

pub(crate) fn tail_odds_sum(tail: &[f64]) -> f64 {
    tail.iter().map(|&r| r / (1.0 - r)).sum()
}

/// Row of the joint table: the elder child.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elder {
    Boy = 0,
    GirlN1 = 1,
    GirlOther = 2,
}

/// Column of the joint table: the younger child.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Younger {
    Boy = 0,
    GirlN1 = 1,
    GirlOther = 2,
}

/// Joint probabilities over `{Eb, Eg1, Eg\Eg1} × {Yb, Yg1, Yg\Yg1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    cells: [[f64; 3]; 3],
    r1: f64,
    model: Model,
}

impl JointTable {
    /// Fills the cells shared by both models and completes the last row
    /// with `p32`.
    fn complete(r1: f64, p32: f64, model: Model) -> Self {
        let cells = [
            [0.25, r1 / 4.0, (1.0 - r1) / 4.0],
            [r1 / 4.0, 0.0, r1 / 4.0],
            [(1.0 - r1) / 4.0, p32, (1.0 - r1) / 4.0 - p32],
        ];
        Self { cells, r1, model }
    }

    pub fn cell(&self, elder: Elder, younger: Younger) -> f64 {
        self.cells[elder as usize][younger as usize]
    }

    pub fn cells(&self) -> &[[f64; 3]; 3] {
        &self.cells
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn p32(&self) -> f64 {
        self.cells[2][1]
    }

    pub fn p33(&self) -> f64 {
        self.cells[2][2]
    }

    /// `P[Yg1]`
    pub fn p_col2(&self) -> f64 {
        self.column_sum(1)
    }

    /// `P[Yg\Yg1]`
    pub fn p_col3(&self) -> f64 {
        self.column_sum(2)
    }

    pub fn row_sum(&self, row: usize) -> f64 {
        self.cells[row].iter().sum()
    }

    pub fn column_sum(&self, col: usize) -> f64 {
        self.cells.iter().map(|row| row[col]).sum()
    }

    pub fn total(&self) -> f64 {
        self.cells.iter().flatten().sum()
    }

    /// `P[boy | girl named n1]` read off the table.
    pub fn prob_other_boy(&self) -> f64 {
        let with_boy = self.cells[1][0] + self.cells[0][1];
        with_boy / (self.r1 / 2.0 + self.p_col2())
    }

    /// Checks the margin and sign constraints every table must satisfy.
    pub fn check_invariants(&self, tol: f64) -> Result<()> {
        let r1 = self.r1;
        let bad = |what: &str, got: f64, want: f64| {
            Err(Error::Model(format!("{what} = {got}, expected {want}")))
        };
        if let Some(&c) = self.cells.iter().flatten().find(|&&c| c < -tol) {
            return bad("negative cell", c, 0.0);
        }
        if (self.total() - 1.0).abs() > tol {
            return bad("total", self.total(), 1.0);
        }
        for (row, want) in [0.5, r1 / 2.0, (1.0 - r1) / 2.0].into_iter().enumerate() {
            if (self.row_sum(row) - want).abs() > tol {
                return bad(&format!("row {row} sum"), self.row_sum(row), want);
            }
        }
        if (self.column_sum(0) - 0.5).abs() > tol {
            return bad("Yb column sum", self.column_sum(0), 0.5);
        }
        if self.cells[1][1] != 0.0 {
            return bad("(Eg1, Yg1)", self.cells[1][1], 0.0);
        }
        Ok(())
    }
}

impl fmt::Display for JointTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model {} r1 = {}", self.model, self.r1)?;
        writeln!(f, "{:>10} {:>14} {:>14} {:>14}", "", "Yb", "Yg1", "Yg\\Yg1")?;
        for (label, row) in ["Eb", "Eg1", "Eg\\Eg1"].iter().zip(&self.cells) {
            writeln!(
                f,
                "{:>10} {:>14.10} {:>14.10} {:>14.10}",
                label, row[0], row[1], row[2]
            )?;
        }
        write!(
            f,
            "{:>10} {:>14.10} {:>14.10} {:>14.10}",
            "",
            self.column_sum(0),
            self.column_sum(1),
            self.column_sum(2)
        )
    }
}

fn check_model_a_r1(r1: f64) -> Result<()> {
    if r1 > 0.0 && r1 <= 0.5 {
        Ok(())
    } else {
        Err(Error::range(format!(
            "model A requires 0 < r1 <= 1/2, got r1 = {r1}"
        )))
    }
}

/// Joint table under model A: `p32 = r1/4`, `p33 = (1 - 2 r1)/4`.
pub fn joint_table_model_a(r1: f64) -> Result<JointTable> {
    check_model_a_r1(r1)?;
    Ok(JointTable::complete(r1, r1 / 4.0, Model::A))
}

/// Joint table under model B: `p32 = (1/4) sum_{k>=2} r1 r_k / (1 - r_k)`.
pub fn joint_table_model_b(r: &PopularityVector) -> JointTable {
    let r1 = r.r1();
    let p32 = r.tail().iter().map(|&rk| r1 * rk / (1.0 - rk)).sum::<f64>() / 4.0;
    JointTable::complete(r1, p32, Model::B)
}

/// Model A answer. Always `1/2`, computed from the table.
pub fn prob_other_boy_model_a(r1: f64) -> Result<f64> {
    Ok(joint_table_model_a(r1)?.prob_other_boy())
}

/// Model B answer `p(r) = 2 / (3 + sum_{k>=2} r_k / (1 - r_k))`.
pub fn prob_other_boy_model_b(r: &PopularityVector) -> f64 {
    2.0 / (3.0 + r.tail_odds_sum())
}

/// `P[boy | girl with an attribute]` when sisters may share the attribute,
/// each girl carrying it independently with probability `attr_prob`
/// (the "born on a Tuesday" variant): `2 / (4 - attr_prob)`.
pub fn attribute_variant_prob(attr_prob: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&attr_prob) {
        return Err(Error::range(format!(
            "attribute probability {attr_prob} is outside [0, 1]"
        )));
    }
    Ok(2.0 / (4.0 - attr_prob))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_is_sorted_and_r1_stays_first() {
        let r = make_popularity(&[0.4, 0.1, 0.5], false).unwrap();
        assert_eq!(r.values(), &[0.4, 0.5, 0.1]);
        assert_eq!(r.r1(), 0.4);
        assert_eq!(r.k(), 3);
    }

    #[test]
    fn rejects_bad_popularities() {
        assert!(matches!(
            make_popularity(&[0.5, 0.5, 0.1], false),
            Err(Error::Sum { .. })
        ));
        assert!(matches!(
            make_popularity(&[0.2, 0.8, 0.0], false),
            Err(Error::Range(_))
        ));
        assert_eq!(
            make_popularity(&[0.2, 0.8, 0.0], true).unwrap().values(),
            &[0.2, 0.8, 0.0]
        );
        assert!(matches!(
            make_popularity(&[1.0], false),
            Err(Error::Size(1))
        ));
        assert!(matches!(
            make_popularity(&[1.0, 0.0], true),
            Err(Error::Range(_))
        ));
        assert!(matches!(
            make_popularity(&[1.2, -0.2], true),
            Err(Error::Range(_))
        ));
        assert!(matches!(
            make_popularity(&[f64::NAN, 0.5], true),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn decimal_inputs_pass_sum_tolerance() {
        assert!(make_popularity(&[0.1; 10], false).is_ok());
    }

    #[test]
    fn model_a_table_at_r1_0_4() {
        let t = joint_table_model_a(0.4).unwrap();
        let want = [[0.25, 0.1, 0.15], [0.1, 0.0, 0.1], [0.15, 0.1, 0.05]];
        for (row, want_row) in t.cells().iter().zip(want) {
            for (&got, want) in row.iter().zip(want_row) {
                assert!((got - want).abs() < 1e-15, "{got} vs {want}");
            }
        }
        assert!((t.p_col2() - 0.2).abs() < 1e-15);
        assert!((t.p_col3() - 0.3).abs() < 1e-15);
        t.check_invariants(1e-12).unwrap();
    }

    #[test]
    fn model_a_feasibility_boundary() {
        assert_eq!(joint_table_model_a(0.5).unwrap().p33(), 0.0);
        assert!(matches!(joint_table_model_a(0.6), Err(Error::Range(_))));
        assert!(matches!(joint_table_model_a(0.0), Err(Error::Range(_))));
    }

    #[test]
    fn model_b_tables() {
        let r = make_popularity(&[0.5, 0.5], false).unwrap();
        let t = joint_table_model_b(&r);
        assert_eq!(t.p32(), 0.125);
        assert_eq!(t.p33(), 0.0);

        let r = PopularityVector::uniform(3).unwrap();
        let t = joint_table_model_b(&r);
        assert!((t.p_col2() - 1.0 / 6.0).abs() < 1e-15);
        assert!((t.p_col2() - joint_table_model_a(1.0 / 3.0).unwrap().p_col2()).abs() < 1e-15);

        // exact value 1/9 from rational enumeration
        let r = make_popularity(&[0.4, 0.5, 0.1], false).unwrap();
        let t = joint_table_model_b(&r);
        assert!((t.p32() - 1.0 / 9.0).abs() < 1e-15);
        assert!((t.p33() - 7.0 / 180.0).abs() < 1e-15);
        t.check_invariants(1e-12).unwrap();
    }

    #[test]
    fn model_a_is_one_half() {
        assert_eq!(prob_other_boy_model_a(0.05).unwrap(), 0.5);
        assert_eq!(prob_other_boy_model_a(0.5).unwrap(), 0.5);
        assert!(matches!(prob_other_boy_model_a(0.7), Err(Error::Range(_))));
    }

    #[test]
    fn model_b_closed_form() {
        for k in [2, 3, 7, 100] {
            let r = PopularityVector::uniform(k).unwrap();
            assert!((prob_other_boy_model_b(&r) - 0.5).abs() < 1e-12);
        }
        let r = make_popularity(&[0.25, 0.75], false).unwrap();
        assert!((prob_other_boy_model_b(&r) - 1.0 / 3.0).abs() < 1e-15);
        let r = make_popularity(&[0.4, 0.5, 0.1], false).unwrap();
        assert!((prob_other_boy_model_b(&r) - 18.0 / 37.0).abs() < 1e-15);
    }

    #[test]
    fn attribute_variant() {
        assert!((attribute_variant_prob(1.0 / 7.0).unwrap() - 14.0 / 27.0).abs() <= 1e-15);
        assert_eq!(attribute_variant_prob(0.0).unwrap(), 0.5);
        assert!((attribute_variant_prob(1.0).unwrap() - 2.0 / 3.0).abs() < 1e-16);
        assert!(attribute_variant_prob(1.5).is_err());
        assert!(attribute_variant_prob(-0.1).is_err());
    }

    #[test]
    fn uniform_tail_shape() {
        let r = PopularityVector::uniform_tail(4, 0.25).unwrap();
        assert_eq!(r.values(), &[0.25, 0.25, 0.25, 0.25]);
        assert!(PopularityVector::uniform_tail(1, 0.5).is_err());
        assert!(PopularityVector::uniform_tail(3, 1.0).is_err());
    }
}
