//! Dyadic `A_p` characteristic of power weights against the closed form.

use dyadlab_core::weights::conjugate;
use dyadlab_core::{ap_characteristic, power_weight, Domain};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::table::{num, CsvTable};
use crate::{Check, Report};

/// `⟨x^a⟩_{[0,h)} ⟨x^{a(1-p')}⟩_{[0,h)}^{p-1}`, the supremum for `x^a` on `[0, 1)`.
pub fn power_ap(a: f64, p: f64) -> f64 {
    let b = a * (1.0 - conjugate(p));
    1.0 / ((a + 1.0) * (b + 1.0).powf(p - 1.0))
}

pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    let powers: Vec<f64> =
        if cfg.powers.is_empty() { cfg.deltas.iter().map(|d| d - 1.0).collect() } else { cfg.powers.clone() };
    let mut depths = vec![cfg.depth];
    depths.extend(cfg.depths.iter().copied().filter(|&d| d != cfg.depth));
    let jobs: Vec<(f64, u32)> = powers.iter().flat_map(|&a| depths.iter().map(move |&n| (a, n))).collect();
    let results = jobs
        .par_iter()
        .map(|&(a, n)| {
            let d = Domain::unit(1, n)?;
            let w = power_weight(&d, a, Some(cfg.p))?;
            Ok(ap_characteristic(&w, cfg.p, None)?)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = CsvTable::new(["power", "p", "depth", "value", "witness", "closed_form", "rel_err"]);
    let mut checks = Vec::new();
    for (&(a, n), rep) in jobs.iter().zip(&results) {
        let closed = power_ap(a, cfg.p);
        let err = (rep.value - closed).abs() / closed;
        if err > 1e-9 || rep.value < 1.0 - 1e-12 {
            checks.push(Check::fail("closed_form", format!("a={a} depth={n}: {} vs {closed}", rep.value)));
        }
        table.push(vec![num(a), num(cfg.p), n.to_string(), num(rep.value), rep.witness.to_string(), num(closed), num(err)]);
    }
    // the supremum can only grow with the mesh
    for (i, &a) in powers.iter().enumerate() {
        let mut by_depth: Vec<(u32, f64)> =
            depths.iter().enumerate().map(|(j, &n)| (n, results[i * depths.len() + j].value)).collect();
        by_depth.sort_by_key(|x| x.0);
        if by_depth.windows(2).any(|w| w[1].1 < w[0].1 - 1e-12 * w[0].1) {
            checks.push(Check::fail("monotone", format!("a={a}: {by_depth:?}")));
        }
    }
    checks.push(Check::new("apchar", checks.is_empty(), format!("{} weights", jobs.len())));
    table.note("scope", "standard dyadic subintervals of [0,1), exact dual cells");
    Ok(Report { table, checks })
}
