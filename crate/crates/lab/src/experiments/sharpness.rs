//! Lower-bound example for the sparse operator on nested intervals.
//!
//! With `I_j = [0, 2^{-j})`, `S f = Σ_j E_{I_j}(f) 1_{I_j}`, the function
//! `f = x^{δ-1} 1_{[0,1)}` and the weight `w = x^{(1-δ)(p-1)}`, the norm
//! `‖S f‖_{L^p(w)}^p` is a series over the shells `[2^{-k-1}, 2^{-k})`, on
//! which `S f` is the constant `(1/δ) Σ_{j≤k} 2^{j(1-δ)}`.

use std::f64::consts::LN_2;

use dyadlab_core::operators::sparse_apply;
use dyadlab_core::oscillation::SparseFamily;
use dyadlab_core::weights::conjugate;
use dyadlab_core::{ap_characteristic, power_weight, Domain, DyadicCube};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::table::{num, CsvTable};
use crate::{Check, Report};

/// Exponent `(1-δ)(p-1)` of the weight.
pub fn weight_exponent(delta: f64, p: f64) -> f64 {
    (1.0 - delta) * (p - 1.0)
}

/// `‖f‖_{L^p(w)}^p = ∫_0^1 x^{(δ-1)p + (1-δ)(p-1)} dx`.
pub fn norm_f_p(delta: f64, p: f64) -> f64 {
    1.0 / ((delta - 1.0) * p + weight_exponent(delta, p) + 1.0)
}

/// Closed-form `[w]_{A_p}` over dyadic intervals, attained on every `[0, h)`.
pub fn ap_closed(delta: f64, p: f64) -> f64 {
    let c = weight_exponent(delta, p);
    1.0 / ((c + 1.0) * (1.0 - c / (p - 1.0)).powf(p - 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShellSum {
    /// `‖S f‖_{L^p(w)}^p`.
    pub value: f64,
    pub shells: usize,
    /// Bound on the omitted tail relative to `value` (0 when truncated to a mesh).
    pub tail_bound: f64,
}

/// `ln` of `S f` on shell `k`, `(1/δ)(2^{(k+1)ε} - 1)/(2^ε - 1)` with `ε = 1-δ`.
fn ln_sf(delta: f64, k: usize) -> f64 {
    let eps = 1.0 - delta;
    let a = (k + 1) as f64 * eps * LN_2;
    -delta.ln() + a + (-(-a).exp_m1()).ln() - (eps * LN_2).exp_m1().ln()
}

/// `ln ∫_{2^{-k-1}}^{2^{-k}} x^c dx`.
fn ln_shell_weight(c: f64, k: usize) -> f64 {
    -(k as f64) * (c + 1.0) * LN_2 + (-(-(c + 1.0) * LN_2).exp_m1()).ln() - (c + 1.0).ln()
}

/// Sums the shell series until the geometric tail bound falls below
/// `tail_tol` relative. Terms are built in log space; the partial sums of
/// `S f` overflow long before the series converges for small `δ`.
pub fn shell_oracle(delta: f64, p: f64, tail_tol: f64) -> ShellSum {
    let c = weight_exponent(delta, p);
    let term = |k: usize| (p * ln_sf(delta, k) + ln_shell_weight(c, k)).exp();
    let mut sum = 0.0;
    let mut k = 0;
    let mut current = term(0);
    loop {
        sum += current;
        let next = term(k + 1);
        let rho = next / current;
        // successive ratios decrease, so ρ bounds every later ratio
        if rho < 1.0 {
            let tail = next / (1.0 - rho);
            if tail < tail_tol * sum {
                return ShellSum { value: sum, shells: k + 1, tail_bound: tail / sum };
            }
        }
        current = next;
        k += 1;
    }
}

/// The same series cut at a mesh of depth `n`: shells `k < n` plus the
/// bottom cell `[0, 2^{-n})`, where `S f` collects all `n + 1` averages.
pub fn shell_oracle_truncated(delta: f64, p: f64, n: usize) -> ShellSum {
    let c = weight_exponent(delta, p);
    let mut sum: f64 = (0..n).map(|k| (p * ln_sf(delta, k) + ln_shell_weight(c, k)).exp()).sum();
    let bottom = -(n as f64) * (c + 1.0) * LN_2 - (c + 1.0).ln();
    sum += (p * ln_sf(delta, n) + bottom).exp();
    ShellSum { value: sum, shells: n + 1, tail_bound: 0.0 }
}

#[derive(Clone, Copy, Debug)]
struct GridCheck {
    norm_sf_p: f64,
    oracle: f64,
    ap: f64,
}

fn grid_check(delta: f64, p: f64, depth: u32) -> Result<GridCheck> {
    let d = Domain::unit(1, depth)?;
    let f = power_weight(&d, delta - 1.0, None)?.cells().clone();
    let w = power_weight(&d, weight_exponent(delta, p), Some(p))?;
    let family = SparseFamily::new((0..=depth as i32).map(|j| DyadicCube::interval(j, 0)))?;
    let sf = sparse_apply(&family, &f)?;
    Ok(GridCheck {
        norm_sf_p: sf.lp_norm(p, Some(&w))?.powf(p),
        oracle: shell_oracle_truncated(delta, p, depth as usize).value,
        ap: ap_characteristic(&w, p, None)?.value,
    })
}

pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    let p = cfg.p;
    let rows: Vec<(f64, ShellSum, Option<GridCheck>)> = cfg
        .deltas
        .par_iter()
        .map(|&delta| {
            let series = shell_oracle(delta, p, cfg.tail_tol);
            let grid = if cfg.grid_depth > 0 && delta >= cfg.grid_min_delta {
                Some(grid_check(delta, p, cfg.grid_depth)?)
            } else {
                None
            };
            Ok((delta, series, grid))
        })
        .collect::<Result<_>>()?;

    let mut table = CsvTable::new([
        "delta",
        "norm_f_p",
        "norm_sf_p",
        "shells",
        "tail_bound",
        "ratio",
        "delta_ratio",
        "ap_closed",
        "ratio_to_char",
        "slope",
        "grid_norm_sf_p",
        "grid_oracle",
        "grid_rel_err",
        "grid_ap",
    ]);
    let mut checks = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    let mut slope_fail = Vec::new();
    let mut drs = Vec::new();
    for (delta, series, grid) in &rows {
        let nf = norm_f_p(*delta, p);
        let ratio = (series.value / nf).powf(p.recip());
        let ap = ap_closed(*delta, p);
        let slope = match prev {
            Some((d0, s0)) => (series.value.log2() - s0.log2()) / (d0.log2() - delta.log2()),
            None => f64::NAN,
        };
        if *delta <= 0.0625 && slope.is_finite() && (slope - (p + 1.0)).abs() > 0.15 {
            slope_fail.push(format!("δ={delta}: slope {slope:.4}"));
        }
        prev = Some((*delta, series.value));
        drs.push(delta * ratio);
        if (nf * delta - 1.0).abs() > 1e-9 {
            checks.push(Check::fail("norm_f", format!("δ={delta}: ‖f‖^p = {nf}")));
        }
        let (gn, go, ge, ga) = match grid {
            Some(g) => {
                let err = (g.norm_sf_p - g.oracle).abs() / g.oracle;
                if err > 1e-3 || (g.ap - ap).abs() > 1e-9 * ap {
                    checks.push(Check::fail("grid", format!("δ={delta}: rel err {err:e}, A_p {} vs {ap}", g.ap)));
                }
                (g.norm_sf_p, g.oracle, err, g.ap)
            }
            None => (f64::NAN, f64::NAN, f64::NAN, f64::NAN),
        };
        table.push(vec![
            num(*delta),
            num(nf),
            num(series.value),
            series.shells.to_string(),
            num(series.tail_bound),
            num(ratio),
            num(delta * ratio),
            num(ap),
            num(ratio / ap.powf((p - 1.0).recip())),
            num(slope),
            num(gn),
            num(go),
            num(ge),
            num(ga),
        ]);
    }
    checks.push(Check::new("slope", slope_fail.is_empty(), slope_fail.join("; ")));
    let lo = drs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = drs.iter().copied().fold(0.0, f64::max);
    checks.push(Check::new("delta_ratio_band", hi / lo < 1.5, format!("δR in [{lo:.4}, {hi:.4}]")));
    table.note("p", p);
    table.note("weight", format!("x^((1-delta)(p-1)), dual exponent {}", 1.0 - conjugate(p)));
    Ok(Report { table, checks })
}
