//! Data behind the three figures, as rows and as CSV.

use std::io::Write;

use two_children::extremal::{lower_bound, p_bounds, solve_k3_manifold};
use two_children::montecarlo::Simulation;
use two_children::prob_core::{
    prob_other_boy_model_a, prob_other_boy_model_b, Model, PopularityVector,
};

use crate::format::fmt_sig;
use crate::CliError;

/// Inclusive arithmetic sweep `start, start + step, ..., <= stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self, String> {
        if step.is_nan() || step <= 0.0 || step.is_infinite() {
            return Err(format!("grid step must be positive, got {step}"));
        }
        if start.is_nan() || stop.is_nan() || start > stop {
            return Err(format!("grid start {start} exceeds stop {stop}"));
        }
        Ok(Self { start, stop, step })
    }

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n)
            .map(|i| {
                let x = self.start + i as f64 * self.step;
                // absorb drift such as 0.01 + 28 * 0.01 = 0.29000000000000004
                let snapped = (x * 1e12).round() / 1e12;
                if (snapped - x).abs() <= 4.0 * f64::EPSILON * x.abs() {
                    snapped
                } else {
                    x
                }
            })
            .collect()
    }
}

/// splitmix64 finaliser, used to give every figure cell its own seed.
fn mix_seed(seed: u64, cell: u64) -> u64 {
    let mut z = seed.wrapping_add(cell.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig1Row {
    pub r1: f64,
    pub k: usize,
    pub p_exact: f64,
    pub p_mc: f64,
    pub std_err: f64,
    pub seed: u64,
}

/// Exact and simulated `p` at `r = (r1, (1-r1)/(K-1), ...)` for every grid
/// point and `K`. Each cell is simulated with its own seed, reported in the
/// row so it can be rerun alone.
pub fn fig1_rows(
    grid: &Grid,
    ks: &[usize],
    sim: &Simulation,
    n: u64,
    seed: u64,
) -> Result<Vec<Fig1Row>, CliError> {
    let mut rows = Vec::new();
    for r1 in grid.points() {
        for &k in ks {
            let r = PopularityVector::uniform_tail(k, r1)?;
            let p_exact = match sim.model {
                Model::A => prob_other_boy_model_a(r1)?,
                Model::B => prob_other_boy_model_b(&r),
            };
            let cell_seed = mix_seed(seed, rows.len() as u64);
            let est = sim.run(&r, n, cell_seed)?;
            rows.push(Fig1Row {
                r1,
                k,
                p_exact,
                p_mc: est.p_hat,
                std_err: est.std_err,
                seed: cell_seed,
            });
        }
    }
    Ok(rows)
}

pub fn fig1_csv(
    out: &mut dyn Write,
    grid: &Grid,
    ks: &[usize],
    sim: &Simulation,
    n: u64,
    seed: u64,
) -> Result<(), CliError> {
    let rows = fig1_rows(grid, ks, sim, n, seed)?;
    writeln!(out, "r1,K,p_exact,p_mc,std_err,seed")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_sig(row.r1),
            row.k,
            fmt_sig(row.p_exact),
            fmt_sig(row.p_mc),
            fmt_sig(row.std_err),
            row.seed
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig2Row {
    pub r1: f64,
    pub lower: f64,
    /// Upper bound for each requested `K`, in request order.
    pub upper: Vec<f64>,
}

pub fn fig2_rows(grid: &Grid, ks: &[usize]) -> Result<Vec<Fig2Row>, CliError> {
    grid.points()
        .into_iter()
        .map(|r1| {
            let upper = ks
                .iter()
                .map(|&k| p_bounds(k, r1).map(|b| b.interval.hi()))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Fig2Row {
                r1,
                lower: lower_bound(r1),
                upper,
            })
        })
        .collect()
}

pub fn fig2_csv(out: &mut dyn Write, grid: &Grid, ks: &[usize]) -> Result<(), CliError> {
    let rows = fig2_rows(grid, ks)?;
    let header: Vec<String> = ks.iter().map(|k| format!("upper_{k}")).collect();
    writeln!(out, "r1,lower,{}", header.join(","))?;
    for row in rows {
        let upper: Vec<String> = row.upper.iter().map(|&u| fmt_sig(u)).collect();
        writeln!(
            out,
            "{},{},{}",
            fmt_sig(row.r1),
            fmt_sig(row.lower),
            upper.join(",")
        )?;
    }
    Ok(())
}

pub fn fig3_rows(grid: &Grid) -> Result<Vec<(f64, f64, f64)>, CliError> {
    grid.points()
        .into_iter()
        .map(|r1| {
            let (r2, r3) = solve_k3_manifold(r1)?;
            Ok((r1, r2, r3))
        })
        .collect()
}

pub fn fig3_csv(out: &mut dyn Write, grid: &Grid) -> Result<(), CliError> {
    writeln!(out, "r1,r2,r3")?;
    for (r1, r2, r3) in fig3_rows(grid)? {
        writeln!(out, "{},{},{}", fmt_sig(r1), fmt_sig(r2), fmt_sig(r3))?;
    }
    Ok(())
}
