//! Generative simulation of two-children families and an exact
//! enumeration oracle over the same outcome space.
//!
//! Model B is sampled directly from its naming scheme. Model A only fixes
//! the 3×3 coarsening of the outcome space, so a sampled cell is refined
//! into concrete names uniformly over `n2, ..., nK`; every model A query
//! in this crate depends on the coarsening alone.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::prob_core::{joint_table_model_a, Model, PopularityVector};

/// Default cap on raw family draws in a single estimate.
pub const MAX_RAW_DRAWS: u64 = 1_000_000_000;

/// Samples per RNG substream.
const CHUNK: u64 = 1_000;

/// One child: a boy, or a girl with a 1-based name index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Child {
    Boy,
    Girl(usize),
}

impl Child {
    pub fn is_boy(self) -> bool {
        self == Child::Boy
    }

    pub fn is_girl_named(self, name: usize) -> bool {
        self == Child::Girl(name)
    }
}

impl fmt::Display for Child {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Child::Boy => f.write_str("B"),
            Child::Girl(k) => write!(f, "G{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FamilyOutcome {
    pub elder: Child,
    pub younger: Child,
}

impl FamilyOutcome {
    pub fn new(elder: Child, younger: Child) -> Self {
        Self { elder, younger }
    }

    pub fn has_boy(&self) -> bool {
        self.elder.is_boy() || self.younger.is_boy()
    }

    pub fn has_girl_named(&self, name: usize) -> bool {
        self.elder.is_girl_named(name) || self.younger.is_girl_named(name)
    }

    /// Row/column of the 3×3 coarsening: 0 boy, 1 girl `n1`, 2 other girl.
    pub fn cell(&self) -> (usize, usize) {
        fn class(c: Child) -> usize {
            match c {
                Child::Boy => 0,
                Child::Girl(1) => 1,
                Child::Girl(_) => 2,
            }
        }
        (class(self.elder), class(self.younger))
    }
}

/// Predicates over outcomes for use with [`exact_conditional`].
pub mod events {
    use super::{Child, FamilyOutcome};

    pub fn has_boy(o: &FamilyOutcome) -> bool {
        o.has_boy()
    }

    pub fn has_girl_named(name: usize) -> impl Fn(&FamilyOutcome) -> bool {
        move |o| o.has_girl_named(name)
    }

    pub fn elder_is_girl(o: &FamilyOutcome) -> bool {
        matches!(o.elder, Child::Girl(_))
    }

    pub fn younger_is_boy(o: &FamilyOutcome) -> bool {
        o.younger.is_boy()
    }
}

/// Draws an index from `weights` with the entry `skip` removed (and the
/// remainder renormalised). `u` is uniform on `[0, 1)`.
fn pick(weights: &[f64], skip: Option<usize>, u: f64) -> usize {
    let total: f64 = match skip {
        Some(s) => 1.0 - weights[s],
        None => 1.0,
    };
    let target = u * total;
    let mut acc = 0.0;
    let mut last = None;
    for (i, &w) in weights.iter().enumerate() {
        if Some(i) == skip || w <= 0.0 {
            continue;
        }
        acc += w;
        last = Some(i);
        if target < acc {
            return i;
        }
    }
    // only reachable through rounding in acc
    last.expect("at least one eligible name")
}

/// Pre-validated sampler for one model and popularity vector.
#[derive(Debug, Clone)]
pub struct Sampler {
    model: Model,
    r: PopularityVector,
    /// Model A: flattened 3×3 joint table.
    cells: [f64; 9],
}

impl Sampler {
    pub fn new(model: Model, r: &PopularityVector) -> Result<Self> {
        let mut cells = [0.0; 9];
        if model == Model::A {
            let table = model_a_table(r)?;
            for (dst, &src) in cells.iter_mut().zip(table.cells().iter().flatten()) {
                *dst = src;
            }
        }
        Ok(Self {
            model,
            r: r.clone(),
            cells,
        })
    }

    pub fn model(&self) -> Model {
        self.model
    }

    /// Distribution of a younger sister's name (1-based index `i` at
    /// position `i - 1`) when the elder girl is named `elder_name`.
    pub fn second_girl_weights(&self, elder_name: usize) -> Vec<f64> {
        let k = self.r.k();
        match self.model {
            Model::B => {
                let rk = self.r.get(elder_name);
                (1..=k)
                    .map(|l| {
                        if l == elder_name {
                            0.0
                        } else {
                            self.r.get(l) / (1.0 - rk)
                        }
                    })
                    .collect()
            }
            Model::A => {
                let row = if elder_name == 1 { 1 } else { 2 };
                let (p_n1, p_other) = (self.cells[row * 3 + 1], self.cells[row * 3 + 2]);
                let girls = p_n1 + p_other;
                let others = if elder_name == 1 { k - 1 } else { k - 2 };
                (1..=k)
                    .map(|l| {
                        if l == elder_name {
                            0.0
                        } else if l == 1 {
                            p_n1 / girls
                        } else {
                            p_other / girls / others as f64
                        }
                    })
                    .collect()
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> FamilyOutcome {
        match self.model {
            Model::B => self.sample_b(rng),
            Model::A => self.sample_a(rng),
        }
    }

    fn sample_b<R: Rng + ?Sized>(&self, rng: &mut R) -> FamilyOutcome {
        let r = self.r.values();
        let elder = if rng.random::<bool>() {
            Child::Boy
        } else {
            Child::Girl(pick(r, None, rng.random()) + 1)
        };
        let younger = if rng.random::<bool>() {
            Child::Boy
        } else {
            let skip = match elder {
                Child::Girl(k) => Some(k - 1),
                Child::Boy => None,
            };
            Child::Girl(pick(r, skip, rng.random()) + 1)
        };
        FamilyOutcome { elder, younger }
    }

    fn sample_a<R: Rng + ?Sized>(&self, rng: &mut R) -> FamilyOutcome {
        let cell = pick(&self.cells, None, rng.random());
        let (row, col) = (cell / 3, cell % 3);
        let k = self.r.k();
        let elder = match row {
            0 => Child::Boy,
            1 => Child::Girl(1),
            _ => Child::Girl(rng.random_range(2..=k)),
        };
        let younger = match (col, elder) {
            (0, _) => Child::Boy,
            (1, _) => Child::Girl(1),
            (_, Child::Girl(e)) if e >= 2 => {
                // uniform over the K - 2 names other than n1 and the sister's
                let l = rng.random_range(2..k);
                Child::Girl(if l >= e { l + 1 } else { l })
            }
            _ => Child::Girl(rng.random_range(2..=k)),
        };
        FamilyOutcome { elder, younger }
    }
}

fn model_a_table(r: &PopularityVector) -> Result<crate::prob_core::JointTable> {
    let table = joint_table_model_a(r.r1())
        .map_err(|e| Error::Model(format!("model A is infeasible: {e}")))?;
    if r.k() == 2 && table.p33() > 0.0 {
        return Err(Error::Model(format!(
            "model A with K = 2 puts mass {} on two sisters sharing the only name other than n1",
            table.p33()
        )));
    }
    Ok(table)
}

/// Draws one family. Builds a [`Sampler`] per call; use
/// [`Sampler::sample`] in loops.
pub fn sample_family<R: Rng + ?Sized>(
    model: Model,
    r: &PopularityVector,
    rng: &mut R,
) -> Result<FamilyOutcome> {
    Ok(Sampler::new(model, r)?.sample(rng))
}

/// Monte Carlo estimate of `P[boy | girl named n1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub p_hat: f64,
    pub n_total: u64,
    pub n_conditioned: u64,
    /// Binomial standard error `sqrt(p_hat (1 - p_hat) / n_conditioned)`.
    pub std_err: f64,
    pub seed: u64,
}

/// What the replication count `n` counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Replication {
    /// Families having a girl named `n1`; others are discarded and redrawn.
    #[default]
    Conditioned,
    /// Raw families, conditioned or not.
    RawFamilies,
}

/// Configuration for [`Simulation::run`].
#[derive(Debug, Clone, Copy)]
pub struct Simulation {
    pub model: Model,
    pub replication: Replication,
    pub max_raw_draws: u64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Counts {
    raw: u64,
    conditioned: u64,
    with_boy: u64,
}

impl Simulation {
    pub fn new(model: Model) -> Self {
        Self {
            model,
            replication: Replication::Conditioned,
            max_raw_draws: MAX_RAW_DRAWS,
        }
    }

    pub fn replication(mut self, replication: Replication) -> Self {
        self.replication = replication;
        self
    }

    pub fn max_raw_draws(mut self, max_raw_draws: u64) -> Self {
        self.max_raw_draws = max_raw_draws;
        self
    }

    /// Runs `n` replications seeded by `seed`.
    ///
    /// Work is split into fixed chunks, chunk `i` drawing from ChaCha8
    /// stream `i` of `seed`, so the result does not depend on the number of
    /// threads.
    pub fn run(&self, r: &PopularityVector, n: u64, seed: u64) -> Result<MCEstimate> {
        if n == 0 {
            return Err(Error::range("replication count must be at least 1"));
        }
        let sampler = Sampler::new(self.model, r)?;
        let chunks = n.div_ceil(CHUNK);
        let per_chunk: Vec<Counts> = (0..chunks)
            .into_par_iter()
            .map(|i| {
                let quota = CHUNK.min(n - i * CHUNK);
                let budget = (self.max_raw_draws as u128 * quota as u128).div_ceil(n as u128);
                self.run_chunk(&sampler, seed, i, quota, budget as u64)
            })
            .collect();

        let mut total = Counts::default();
        for c in &per_chunk {
            total.raw += c.raw;
            total.conditioned += c.conditioned;
            total.with_boy += c.with_boy;
        }
        let short = match self.replication {
            Replication::Conditioned => total.conditioned < n,
            Replication::RawFamilies => total.raw < n,
        };
        if short {
            return Err(Error::Nontermination {
                raw_draws: total.raw,
                accepted: total.conditioned,
                requested: n,
            });
        }
        if total.conditioned == 0 {
            return Err(Error::ZeroCondition);
        }
        let p_hat = total.with_boy as f64 / total.conditioned as f64;
        Ok(MCEstimate {
            p_hat,
            n_total: total.raw,
            n_conditioned: total.conditioned,
            std_err: (p_hat * (1.0 - p_hat) / total.conditioned as f64).sqrt(),
            seed,
        })
    }

    fn run_chunk(
        &self,
        sampler: &Sampler,
        seed: u64,
        chunk: u64,
        quota: u64,
        budget: u64,
    ) -> Counts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk);
        let mut c = Counts::default();
        loop {
            let done = match self.replication {
                Replication::Conditioned => c.conditioned >= quota,
                Replication::RawFamilies => c.raw >= quota,
            };
            if done || c.raw >= budget {
                return c;
            }
            let family = sampler.sample(&mut rng);
            c.raw += 1;
            if family.has_girl_named(1) {
                c.conditioned += 1;
                if family.has_boy() {
                    c.with_boy += 1;
                }
            }
        }
    }
}

/// Estimates `P[boy | girl named n1]` from `n` conditioned families.
pub fn estimate_conditional(
    model: Model,
    r: &PopularityVector,
    n: u64,
    seed: u64,
) -> Result<MCEstimate> {
    Simulation::new(model).run(r, n, seed)
}

/// Every `(elder, younger)` outcome with its exact probability.
///
/// Same-name sisters are impossible in both models and are left out; their
/// weight reads as 0 through [`ExactDistribution::weight`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDistribution {
    pub outcomes: Vec<(FamilyOutcome, f64)>,
    pub model: Model,
}

impl ExactDistribution {
    pub fn weight(&self, outcome: &FamilyOutcome) -> f64 {
        self.outcomes
            .iter()
            .find(|(o, _)| o == outcome)
            .map_or(0.0, |&(_, w)| w)
    }

    pub fn total(&self) -> f64 {
        self.outcomes.iter().map(|(_, w)| w).sum()
    }

    /// Probability of an event.
    pub fn mass<F: Fn(&FamilyOutcome) -> bool>(&self, event: F) -> f64 {
        self.outcomes
            .iter()
            .filter(|(o, _)| event(o))
            .map(|(_, w)| w)
            .sum()
    }

    /// Aggregates into the `{boy, girl n1, other girl}²` joint table.
    pub fn coarsen(&self) -> [[f64; 3]; 3] {
        let mut cells = [[0.0; 3]; 3];
        for (o, w) in &self.outcomes {
            let (i, j) = o.cell();
            cells[i][j] += w;
        }
        cells
    }
}

/// Enumerates all outcomes with their exact weights under `model`.
pub fn enumerate_exact(model: Model, r: &PopularityVector) -> Result<ExactDistribution> {
    let k = r.k();
    let children: Vec<Child> = std::iter::once(Child::Boy)
        .chain((1..=k).map(Child::Girl))
        .collect();
    let mut outcomes = Vec::with_capacity((k + 1) * (k + 1) - k);

    match model {
        Model::B => {
            for &elder in &children {
                let (p_elder, sister) = match elder {
                    Child::Boy => (0.5, None),
                    Child::Girl(e) => (0.5 * r.get(e), Some(e)),
                };
                for &younger in &children {
                    let p_younger = match (younger, sister) {
                        (Child::Boy, _) => 0.5,
                        (Child::Girl(y), None) => 0.5 * r.get(y),
                        (Child::Girl(y), Some(e)) if y == e => continue,
                        (Child::Girl(y), Some(e)) => 0.5 * r.get(y) / (1.0 - r.get(e)),
                    };
                    outcomes.push((FamilyOutcome { elder, younger }, p_elder * p_younger));
                }
            }
        }
        Model::A => {
            let table = model_a_table(r)?;
            let others = (k - 1) as f64;
            let other_pairs = ((k - 1) * (k - 2)) as f64;
            for &elder in &children {
                for &younger in &children {
                    let o = FamilyOutcome { elder, younger };
                    if let (Child::Girl(e), Child::Girl(y)) = (elder, younger) {
                        if e == y {
                            continue;
                        }
                    }
                    let (i, j) = o.cell();
                    let cell = table.cells()[i][j];
                    let w = match (i, j) {
                        (2, 2) if other_pairs == 0.0 => 0.0,
                        (2, 2) => cell / other_pairs,
                        (2, _) | (_, 2) => cell / others,
                        _ => cell,
                    };
                    outcomes.push((o, w));
                }
            }
        }
    }
    Ok(ExactDistribution { outcomes, model })
}

/// `P[target | condition]` under `dist`.
pub fn exact_conditional<C, T>(dist: &ExactDistribution, condition: C, target: T) -> Result<f64>
where
    C: Fn(&FamilyOutcome) -> bool,
    T: Fn(&FamilyOutcome) -> bool,
{
    let cond = dist.mass(&condition);
    if cond <= 0.0 {
        return Err(Error::ZeroCondition);
    }
    Ok(dist.mass(|o| condition(o) && target(o)) / cond)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob_core::make_popularity;

    #[test]
    fn forced_second_name_with_two_names() {
        let r = make_popularity(&[0.999, 0.001], false).unwrap();
        let s = Sampler::new(Model::B, &r).unwrap();
        let w = s.second_girl_weights(1);
        assert!(w[0] == 0.0 && (w[1] - 1.0).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let f = s.sample(&mut rng);
            if f.elder == Child::Girl(1) {
                assert!(matches!(f.younger, Child::Boy | Child::Girl(2)));
            }
        }
    }

    #[test]
    fn uniform_renormalisation() {
        let r = PopularityVector::uniform(3).unwrap();
        let s = Sampler::new(Model::B, &r).unwrap();
        let w = s.second_girl_weights(2);
        assert!((w[0] - 0.5).abs() < 1e-15 && w[1] == 0.0 && (w[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn same_seed_same_family() {
        let r = make_popularity(&[0.4, 0.5, 0.1], false).unwrap();
        for model in [Model::A, Model::B] {
            let a = sample_family(model, &r, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
            let b = sample_family(model, &r, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn model_a_rejects_large_r1_and_k2() {
        let r = make_popularity(&[0.6, 0.3, 0.1], false).unwrap();
        assert!(matches!(Sampler::new(Model::A, &r), Err(Error::Model(_))));
        let r = make_popularity(&[0.3, 0.7], false).unwrap();
        assert!(matches!(Sampler::new(Model::A, &r), Err(Error::Model(_))));
        let r = make_popularity(&[0.5, 0.5], false).unwrap();
        assert!(Sampler::new(Model::A, &r).is_ok());
    }

    #[test]
    fn pick_skips_excluded_and_zero_names() {
        let w = [0.2, 0.0, 0.5, 0.3];
        for i in 0..1000 {
            let u = i as f64 / 1000.0;
            let got = pick(&w, Some(2), u);
            assert!(got == 0 || got == 3);
            assert_ne!(pick(&w, None, u), 1);
        }
        assert_eq!(pick(&w, Some(2), 1.0 - f64::EPSILON), 3);
    }

    #[test]
    fn enumeration_k2() {
        let r = make_popularity(&[0.5, 0.5], false).unwrap();
        let d = enumerate_exact(Model::B, &r).unwrap();
        assert_eq!(d.outcomes.len(), 9 - 2);
        assert_eq!(
            d.weight(&FamilyOutcome::new(Child::Girl(1), Child::Girl(1))),
            0.0
        );
        assert_eq!(
            d.weight(&FamilyOutcome::new(Child::Girl(1), Child::Girl(2))),
            0.125
        );
        assert!((d.total() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn enumeration_conditionals() {
        let r = make_popularity(&[0.4, 0.5, 0.1], false).unwrap();
        let d = enumerate_exact(Model::B, &r).unwrap();
        let p = exact_conditional(&d, events::has_girl_named(1), events::has_boy).unwrap();
        assert!((p - 18.0 / 37.0).abs() < 1e-15);
        let q = exact_conditional(&d, events::elder_is_girl, events::younger_is_boy).unwrap();
        assert!((q - 0.5).abs() < 1e-15);

        let r = make_popularity(&[0.25, 0.75], false).unwrap();
        let d = enumerate_exact(Model::B, &r).unwrap();
        let p = exact_conditional(&d, events::has_girl_named(1), events::has_boy).unwrap();
        assert!((p - 1.0 / 3.0).abs() < 1e-15);

        let r = make_popularity(&[0.4, 0.5, 0.1], false).unwrap();
        let d = enumerate_exact(Model::A, &r).unwrap();
        let p = exact_conditional(&d, events::has_girl_named(1), events::has_boy).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_condition() {
        let r = make_popularity(&[0.4, 0.6, 0.0], true).unwrap();
        let d = enumerate_exact(Model::B, &r).unwrap();
        assert!(matches!(
            exact_conditional(&d, events::has_girl_named(3), events::has_boy),
            Err(Error::ZeroCondition)
        ));
    }

    #[test]
    fn guard_trips_on_tiny_budget() {
        // with K = 2 the sister of an n2 girl is always n1, so use K = 3
        let r = make_popularity(&[1e-6, 0.5, 0.5 - 1e-6], false).unwrap();
        let err = Simulation::new(Model::B)
            .max_raw_draws(10_000)
            .run(&r, 100, 1)
            .unwrap_err();
        assert!(matches!(err, Error::Nontermination { requested: 100, .. }));
    }

    #[test]
    fn raw_family_semantics() {
        let r = PopularityVector::uniform(3).unwrap();
        let est = Simulation::new(Model::B)
            .replication(Replication::RawFamilies)
            .run(&r, 5_000, 3)
            .unwrap();
        assert_eq!(est.n_total, 5_000);
        assert!(est.n_conditioned < 5_000);
    }

    #[test]
    fn conditioned_semantics_counts() {
        let r = PopularityVector::uniform(3).unwrap();
        let est = estimate_conditional(Model::B, &r, 2_500, 9).unwrap();
        assert_eq!(est.n_conditioned, 2_500);
        assert!(est.n_total > 2_500);
        assert_eq!(est.seed, 9);
        assert!(estimate_conditional(Model::B, &r, 0, 9).is_err());
    }
}
