//! Growth in `κ` of the weak (1,1) ratio of vector Haar shifts, or of the
//! unweighted `L^p` ratio of vector positive shifts.

use dyadlab_core::operators::{
    positive_shift_apply, random_positive_shift, random_shift, random_vector, trial_rng, vector_shift_apply,
    ShiftEnsembleConfig,
};
use dyadlab_core::{Domain, StepFunction};
use rayon::prelude::*;

use crate::config::{ExperimentConfig, WeakMode};
use crate::error::Result;
use crate::table::{num, CsvTable};
use crate::{stream_id, Check, Report};

/// `sup_t t·|{g > t}|`: with cell values sorted descending, the level set
/// just below the `j`-th largest value holds at least `j` cells.
pub fn weak_l1(g: &StepFunction<f64>) -> f64 {
    let mut v: Vec<f64> = g.cells().iter().map(|x| x.abs()).collect();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let h = g.domain().cell_volume::<f64>();
    v.iter().enumerate().map(|(j, &x)| x * (j + 1) as f64 * h).fold(0.0, f64::max)
}

fn trial_ratio(cfg: &ExperimentConfig, kappa: u32, trial: usize) -> Result<f64> {
    let d = Domain::unit(1, cfg.depth)?;
    let stream = stream_id(kappa, trial);
    let mut rng = trial_rng(cfg.seed, stream);
    let ens = ShiftEnsembleConfig { kappa, components: cfg.components, seed: cfg.seed ^ stream, cancellative: true };
    match cfg.mode {
        WeakMode::Shift => {
            let f = random_vector(d, cfg.components, cfg.r, &mut rng, true)?;
            let specs = random_shift::<f64>(&ens, &d)?;
            let out = vector_shift_apply(&specs, &f)?;
            Ok(weak_l1(&out) / f.l1_lr_norm())
        }
        WeakMode::Positive => {
            let f = random_vector(d, cfg.components, cfg.r, &mut rng, false)?;
            let spec = random_positive_shift(&ens, &d)?;
            let out = positive_shift_apply(&spec, &f)?;
            Ok(out.lp_norm(cfg.p, None)? / f.lr_norm_pointwise().lp_norm(cfg.p, None)?)
        }
    }
}

/// Least-squares slope of `ln y` against `ln κ` over `κ ≥ 1`.
pub fn fit_exponent(kappas: &[u32], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = kappas
        .iter()
        .zip(ys)
        .filter(|(&k, &y)| k >= 1 && y > 0.0)
        .map(|(&k, &y)| ((k as f64).ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    let per_kappa: Vec<Vec<f64>> = cfg
        .kappas
        .iter()
        .map(|&k| (0..cfg.trials).into_par_iter().map(|t| trial_ratio(cfg, k, t)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let maxes: Vec<f64> = per_kappa.iter().map(|v| v.iter().copied().fold(0.0, f64::max)).collect();
    // growth model: κ^{1+1/r} for the weak bound, κ^r for positive shifts
    let growth = match cfg.mode {
        WeakMode::Shift => 1.0 + cfg.r.recip(),
        WeakMode::Positive => cfg.r,
    };
    let base = cfg.kappas.iter().zip(&maxes).find(|(&k, _)| k == 1).map(|(_, &m)| m);

    let mut table = CsvTable::new(["kappa", "trials", "max_ratio", "mean_ratio", "bound", "within"]);
    let mut checks = Vec::new();
    for ((&k, ratios), &max) in cfg.kappas.iter().zip(&per_kappa).zip(&maxes) {
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let bound = base.map_or(f64::NAN, |c1| 4.0 * c1 * (k.max(1) as f64).powf(growth));
        let within = !bound.is_finite() || max <= bound;
        if !within {
            checks.push(Check::fail("growth", format!("κ={k}: {max} exceeds {bound}")));
        }
        table.push(vec![k.to_string(), ratios.len().to_string(), num(max), num(mean), num(bound), within.to_string()]);
    }
    checks.push(Check::new("growth_bound", checks.is_empty(), format!("model κ^{growth}")));
    table.note("mode", if cfg.mode == WeakMode::Shift { "shift" } else { "positive" });
    table.note("fitted_exponent", num(fit_exponent(&cfg.kappas, &maxes)));
    table.note("growth_model", growth);
    table.note(
        "input_law",
        if cfg.mode == WeakMode::Shift { "signed uniform [-1,1] cells" } else { "uniform [0,1] cells" },
    );
    Ok(Report { table, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Experiment;

    #[test]
    fn weak_norm_of_indicator() {
        let d = Domain::unit(1, 4).unwrap();
        let g = StepFunction::from_fn(d, |c| if c.lower::<f64>(0) < 0.25 { 3.0 } else { 0.0 });
        assert_eq!(weak_l1(&g), 0.75);
    }

    #[test]
    fn zero_complexity_cancellative_shift_vanishes() {
        let mut cfg = ExperimentConfig::defaults(Experiment::Weaktype);
        cfg.depth = 6;
        assert_eq!(trial_ratio(&cfg, 0, 0).unwrap(), 0.0);
    }

    #[test]
    fn fit_recovers_power() {
        let ks = [1, 2, 3, 4];
        let ys: Vec<f64> = ks.iter().map(|&k| 2.0 * (k as f64).powf(1.5)).collect();
        assert!((fit_exponent(&ks, &ys) - 1.5).abs() < 1e-12);
    }
}
