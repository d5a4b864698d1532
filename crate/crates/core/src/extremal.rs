//! Extremal behaviour of the model B answer `p(r)`.
//!
//! For fixed `r1`, `p` depends on the tail `(r2, ..., rK)` only through
//! `sum r_k / (1 - r_k)`, a sum of a convex function, so `p` is strictly
//! Schur-concave in the tail. The most even tail maximises `p` and the most
//! concentrated one, `(1 - r1, 0, ..., 0)`, is its infimum. Everything in
//! this module follows from that ordering.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::prob_core::{
    make_popularity, prob_other_boy_model_b, tail_odds_sum, Interval, PopularityVector,
};
use crate::SUM_TOLERANCE;

/// `p(r1, tail)` without building a [`PopularityVector`].
fn p_of_tail(tail: &[f64]) -> f64 {
    2.0 / (3.0 + tail_odds_sum(tail))
}

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut v = v.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Whether `a` majorizes `b` (`a ≻ b`): the descending prefix sums of `a`
/// dominate those of `b`, with equal totals.
///
/// Prefix sums are compared with an absolute tolerance of `1e-12`, so the
/// relation is reflexive.
pub fn majorizes(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::Shape {
            left: a.len(),
            right: b.len(),
        });
    }
    let (sa, sb): (f64, f64) = (a.iter().sum(), b.iter().sum());
    if (sa - sb).abs() > SUM_TOLERANCE {
        return Err(Error::Sum {
            sum: sa - sb,
            tolerance: SUM_TOLERANCE,
        });
    }
    let (a, b) = (sorted_desc(a), sorted_desc(b));
    let (mut pa, mut pb) = (0.0, 0.0);
    for (x, y) in a.iter().zip(&b) {
        pa += x;
        pb += y;
        if pa < pb - SUM_TOLERANCE {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The set of values `p` takes over popularity vectors with `K` names and a
/// fixed `r1`, with witnesses for both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsResult {
    pub interval: Interval,
    /// Uniform-tail configuration attaining the upper bound.
    pub argmax_config: PopularityVector,
    /// The lower bound is a limit, not attained; this describes the
    /// configuration `(r1, 1 - r1, 0, ..., 0)` it is approached along.
    pub liminf_config_description: String,
}

impl BoundsResult {
    pub fn k(&self) -> usize {
        self.argmax_config.k()
    }

    pub fn r1(&self) -> f64 {
        self.argmax_config.r1()
    }

    /// `(r1, 1 - r1 - (K-2) eps, eps, ..., eps)`, which tends to the
    /// lower-bound configuration as `eps -> 0`.
    pub fn lower_witness(&self, eps: f64) -> Result<PopularityVector> {
        concentrated_tail(self.k(), self.r1(), eps)
    }
}

fn concentrated_tail(k: usize, r1: f64, eps: f64) -> Result<PopularityVector> {
    let lead = 1.0 - r1 - (k - 2) as f64 * eps;
    if eps <= 0.0 || eps.is_nan() || lead < eps {
        return Err(Error::range(format!(
            "eps = {eps} is too large for K = {k}, r1 = {r1}"
        )));
    }
    let mut values = vec![eps; k];
    values[0] = r1;
    values[1] = lead;
    make_popularity(&values, false)
}

/// `2 r1 / (2 r1 + 1)`, the infimum of `p` over every `K`.
pub fn lower_bound(r1: f64) -> f64 {
    2.0 * r1 / (2.0 * r1 + 1.0)
}

/// `2 (K - 2 + r1) / (4 (K - 2 + r1) + 1 - K r1)`, attained at the uniform tail.
pub fn upper_bound(k: usize, r1: f64) -> f64 {
    let m = k as f64 - 2.0 + r1;
    2.0 * m / (4.0 * m + 1.0 - k as f64 * r1)
}

fn check_open_unit(r1: f64) -> Result<()> {
    if r1 > 0.0 && r1 < 1.0 {
        Ok(())
    } else {
        Err(Error::range(format!("r1 = {r1} is outside (0, 1)")))
    }
}

/// Range of `p` over all configurations with `K` names and first popularity
/// `r1`: the singleton `{2 r1/(2 r1 + 1)}` for `K = 2`, otherwise
/// `(lower_bound(r1), upper_bound(K, r1)]`.
pub fn p_bounds(k: usize, r1: f64) -> Result<BoundsResult> {
    if k < 2 {
        return Err(Error::range(format!("K = {k} must be at least 2")));
    }
    check_open_unit(r1)?;
    let argmax_config = PopularityVector::uniform_tail(k, r1)?;
    let lo = lower_bound(r1);
    let (interval, liminf_config_description) = if k == 2 {
        (
            Interval::singleton(lo),
            format!("attained at r = ({r1}, {})", 1.0 - r1),
        )
    } else {
        let zeros = vec!["0"; k - 2].join(", ");
        (
            Interval::open_closed(lo, upper_bound(k, r1))?,
            format!("approached as r -> ({r1}, {}, {zeros})", 1.0 - r1),
        )
    };
    Ok(BoundsResult {
        interval,
        argmax_config,
        liminf_config_description,
    })
}

/// Upper end of the fixed-`r1` range as `K -> ∞`: `2 / (4 - r1)`.
pub fn limit_upper(r1: f64) -> Result<f64> {
    check_open_unit(r1)?;
    Ok(2.0 / (4.0 - r1))
}

/// Values of `r1` for which some `K`-name configuration gives `p = 1/2`:
/// `{1/2}` for `K = 2`, `[1/K, 1/2)` otherwise.
pub fn feasible_set_s(k: usize) -> Result<Interval> {
    match k {
        0 | 1 => Err(Error::range(format!("K = {k} must be at least 2"))),
        2 => Ok(Interval::singleton(0.5)),
        _ => Interval::closed_open(1.0 / k as f64, 0.5),
    }
}

/// The unique `(r2, r3)` with `r2 >= r3` making `p(r1, r2, r3) = 1/2`:
///
/// ```text
/// r2, r3 = (1 - r1)/2 ± sqrt((3 r1 + 1)^2 - 4) / 6
/// ```
///
/// Solutions satisfy `r3 <= r1 <= r2`. (Plotted curves of this solution
/// sometimes get captioned as `r1 ∈ [r2, r3]`; with `r2 >= r3` that
/// bracket is reversed.)
pub fn solve_k3_manifold(r1: f64) -> Result<(f64, f64)> {
    let s3 = feasible_set_s(3)?;
    if !s3.contains(r1) {
        return Err(Error::range(format!(
            "no configuration with K = 3 and r1 = {r1} gives p = 1/2: r1 must lie in S_3 = [1/3, 1/2)"
        )));
    }
    let disc = (3.0 * r1 + 1.0).powi(2) - 4.0;
    if disc <= 0.0 {
        // r1 = 1/3: the uniform configuration
        return Ok((r1, r1));
    }
    let half = (1.0 - r1) / 2.0;
    let offset = disc.sqrt() / 6.0;
    Ok((half + offset, half - offset))
}

/// Membership in the equal-genders set `{r : p(r) = 1/2}`, to within `1e-12`.
pub fn is_equal_genders(r: &PopularityVector) -> bool {
    (prob_other_boy_model_b(r) - 0.5).abs() <= 1e-12
}

/// Some configuration with `K` names and first popularity `r1` making
/// `p = 1/2`, or a range error when `r1` is outside `S_K`.
///
/// Uses the closed form for `K <= 3`. For larger `K` it bisects along the
/// segment from a nearly concentrated tail to the uniform tail, on which
/// `p` is monotone.
pub fn equal_genders_config(k: usize, r1: f64) -> Result<PopularityVector> {
    let s = feasible_set_s(k)?;
    if !s.contains(r1) {
        return Err(Error::range(format!(
            "no configuration with K = {k} and r1 = {r1} gives p = 1/2: S_{k} = {s}"
        )));
    }
    if k == 2 {
        return make_popularity(&[0.5, 0.5], false);
    }
    if k == 3 {
        let (r2, r3) = solve_k3_manifold(r1)?;
        return make_popularity(&[r1, r2, r3], false);
    }

    let top = PopularityVector::uniform_tail(k, r1)?;
    if prob_other_boy_model_b(&top) - 0.5 <= 1e-15 {
        return Ok(top);
    }
    let mut eps = (1.0 - r1) / (k - 1) as f64 * 1e-3;
    let mut bottom = concentrated_tail(k, r1, eps)?;
    while prob_other_boy_model_b(&bottom) >= 0.5 {
        eps *= 1e-3;
        if eps < 1e-300 {
            return Err(Error::range(format!(
                "could not bracket p = 1/2 for K = {k}, r1 = {r1}"
            )));
        }
        bottom = concentrated_tail(k, r1, eps)?;
    }

    let mix = |t: f64| -> Vec<f64> {
        let mut v: Vec<f64> = bottom
            .values()
            .iter()
            .zip(top.values())
            .map(|(b, u)| (1.0 - t) * b + t * u)
            .collect();
        v[0] = r1;
        v
    };
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut best = mix(1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = mix(mid);
        let p = p_of_tail(&v[1..]);
        best = v;
        match p.partial_cmp(&0.5) {
            Some(Ordering::Less) => lo = mid,
            Some(Ordering::Greater) => hi = mid,
            _ => break,
        }
        if (p - 0.5).abs() <= 1e-15 {
            break;
        }
    }
    make_popularity(&best, false)
}

/// Result of comparing `p` on a tail and a tail that majorizes it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchurComparison {
    /// `p(r1, tail_a)` for the majorized (more even) tail.
    pub p_even: f64,
    /// `p(r1, tail_b)` for the majorizing (more spread) tail.
    pub p_spread: f64,
    /// The tails agree up to ordering.
    pub permutation: bool,
}

impl SchurComparison {
    pub fn margin(&self) -> f64 {
        self.p_even - self.p_spread
    }

    /// `p_even >= p_spread`, strictly unless the tails are permutations.
    pub fn holds(&self) -> bool {
        if self.permutation {
            self.margin().abs() <= 1e-14
        } else {
            self.margin() > 0.0
        }
    }
}

fn check_tail(r1: f64, tail: &[f64]) -> Result<()> {
    if let Some(&x) = tail.iter().find(|&&x| !(x > 0.0 && x < 1.0)) {
        return Err(Error::range(format!("tail entry {x} is outside (0, 1)")));
    }
    let sum: f64 = tail.iter().sum();
    if (sum - (1.0 - r1)).abs() > SUM_TOLERANCE {
        return Err(Error::Sum {
            sum: r1 + sum,
            tolerance: SUM_TOLERANCE,
        });
    }
    Ok(())
}

/// Evaluates `p` on `tail_a ≺ tail_b` (both completing `r1`).
///
/// Incomparable pairs and pairs given in the wrong order are rejected with
/// [`Error::Order`].
pub fn compare_tails(r1: f64, tail_a: &[f64], tail_b: &[f64]) -> Result<SchurComparison> {
    check_open_unit(r1)?;
    if tail_a.len() != tail_b.len() {
        return Err(Error::Shape {
            left: tail_a.len(),
            right: tail_b.len(),
        });
    }
    if tail_a.len() < 2 {
        return Err(Error::Size(tail_a.len() + 1));
    }
    check_tail(r1, tail_a)?;
    check_tail(r1, tail_b)?;
    if !majorizes(tail_b, tail_a)? {
        let msg = if majorizes(tail_a, tail_b)? {
            "tail_a majorizes tail_b; swap the arguments"
        } else {
            "neither tail majorizes the other"
        };
        return Err(Error::Order(msg.into()));
    }
    let permutation = sorted_desc(tail_a)
        .iter()
        .zip(sorted_desc(tail_b))
        .all(|(a, b)| (a - b).abs() <= 2.0 * SUM_TOLERANCE);
    Ok(SchurComparison {
        p_even: p_of_tail(tail_a),
        p_spread: p_of_tail(tail_b),
        permutation,
    })
}

/// Executable Schur-concavity check: `true` iff `p(r1, tail_a) >= p(r1, tail_b)`
/// for `tail_a ≺ tail_b`, strictly when the tails are not permutations.
pub fn check_schur_concave(r1: f64, tail_a: &[f64], tail_b: &[f64]) -> Result<bool> {
    compare_tails(r1, tail_a, tail_b).map(|c| c.holds())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn majorization_examples() {
        let r1 = 0.3;
        let a = [1.0 - r1, 0.0, 0.0];
        let b = [(1.0 - r1) / 2.0, (1.0 - r1) / 2.0, 0.0];
        assert!(majorizes(&a, &b).unwrap());
        assert!(!majorizes(&b, &a).unwrap());
        assert!(majorizes(&[0.3, 0.3], &[0.3, 0.3]).unwrap());
        assert!(!majorizes(&[0.25; 4], &[0.4, 0.3, 0.2, 0.1]).unwrap());
        assert!(majorizes(&[0.4, 0.3, 0.2, 0.1], &[0.25; 4]).unwrap());
    }

    #[test]
    fn majorization_errors() {
        assert!(matches!(
            majorizes(&[0.5, 0.5], &[1.0]),
            Err(Error::Shape { left: 2, right: 1 })
        ));
        assert!(matches!(
            majorizes(&[0.5, 0.5], &[0.5, 0.6]),
            Err(Error::Sum { .. })
        ));
    }

    #[test]
    fn bounds_k2_is_singleton() {
        let b = p_bounds(2, 0.25).unwrap();
        assert!(b.interval.is_singleton());
        assert!((b.interval.lo() - 1.0 / 3.0).abs() < 1e-15);
        assert!((upper_bound(2, 0.25) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn bounds_k3_uniform() {
        let b = p_bounds(3, 1.0 / 3.0).unwrap();
        assert!((b.interval.lo() - 0.4).abs() < 1e-15);
        assert!((b.interval.hi() - 0.5).abs() < 1e-15);
        assert!(!b.interval.lo_closed() && b.interval.hi_closed());
        for &x in b.argmax_config.values() {
            assert!((x - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn bounds_k4_small_r1() {
        let b = p_bounds(4, 0.05).unwrap();
        assert!((b.interval.lo() - 0.1 / 1.1).abs() < 1e-15);
        assert!((b.interval.hi() - 4.1 / 9.0).abs() < 1e-15);
        assert!((prob_other_boy_model_b(&b.argmax_config) - b.interval.hi()).abs() < 1e-12);
        assert!(b.liminf_config_description.contains("0.95, 0, 0"));
    }

    #[test]
    fn bounds_errors() {
        assert!(p_bounds(1, 0.3).is_err());
        assert!(p_bounds(3, 0.0).is_err());
        assert!(p_bounds(3, 1.0).is_err());
    }

    #[test]
    fn limit_upper_values() {
        assert!((limit_upper(1.0 / 7.0).unwrap() - 14.0 / 27.0).abs() < 1e-15);
        assert!((limit_upper(1.0 - 1e-12).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!(limit_upper(1.0).is_err());
        let far = p_bounds(1_000_000, 0.05).unwrap().interval.hi();
        assert!((far - 2.0 / 3.95).abs() < 1e-5);
    }

    #[test]
    fn feasible_sets() {
        assert_eq!(feasible_set_s(2).unwrap(), Interval::singleton(0.5));
        let s4 = feasible_set_s(4).unwrap();
        assert_eq!((s4.lo(), s4.hi()), (0.25, 0.5));
        assert!(s4.lo_closed() && !s4.hi_closed());
        let s3 = feasible_set_s(3).unwrap();
        assert_eq!(s3.lo(), 1.0 / 3.0);
        assert!(feasible_set_s(1).is_err());
    }

    #[test]
    fn k3_manifold() {
        assert_eq!(
            solve_k3_manifold(1.0 / 3.0).unwrap(),
            (1.0 / 3.0, 1.0 / 3.0)
        );
        let (r2, r3) = solve_k3_manifold(0.4).unwrap();
        assert!((r2 - 0.452_752_523_165_194_76).abs() < 1e-15);
        assert!((r3 - 0.147_247_476_834_805_24).abs() < 1e-15);
        let r = make_popularity(&[0.4, r2, r3], false).unwrap();
        assert!(is_equal_genders(&r));
        assert!(matches!(solve_k3_manifold(0.2), Err(Error::Range(m)) if m.contains("S_3")));
        assert!(solve_k3_manifold(0.5).is_err());
    }

    #[test]
    fn schur_examples() {
        let c = compare_tails(0.2, &[0.4, 0.4], &[0.7, 0.1]).unwrap();
        assert!(c.holds() && !c.permutation && c.margin() > 0.0);
        let c = compare_tails(0.2, &[0.4, 0.4], &[0.4, 0.4]).unwrap();
        assert!(c.holds() && c.permutation && c.margin() == 0.0);
        assert!(matches!(
            check_schur_concave(0.2, &[0.5, 0.2, 0.1], &[0.4, 0.3, 0.1]),
            Err(Error::Order(_))
        ));
        assert!(check_schur_concave(0.2, &[0.4, 0.3, 0.1], &[0.5, 0.2, 0.1]).unwrap());
    }

    #[test]
    fn schur_rejects_incomparable() {
        // prefix sums 0.5, 0.6, 0.7 vs 0.4, 0.7, 0.75 cross
        let a = [0.5, 0.1, 0.1, 0.1];
        let b = [0.4, 0.3, 0.05, 0.05];
        assert!(matches!(
            check_schur_concave(0.2, &a, &b),
            Err(Error::Order(m)) if m.contains("neither")
        ));
    }

    #[test]
    fn equal_genders_witnesses() {
        for (k, r1) in [(4, 0.3), (5, 0.2), (10, 0.45), (4, 0.25), (3, 0.45)] {
            let r = equal_genders_config(k, r1).unwrap();
            assert_eq!(r.k(), k);
            assert_eq!(r.r1(), r1);
            assert!(is_equal_genders(&r), "{k} {r1} {r:?}");
        }
        assert!(equal_genders_config(4, 0.2).is_err());
        assert!(equal_genders_config(2, 0.3).is_err());
    }
}
