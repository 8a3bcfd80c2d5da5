//! Exhaustive check of the one-third-shift covering bound on `[0, 1)`.

use dyadlab_core::{shifted_cover, AxisBox};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::table::{num, CsvTable};
use crate::{Check, Report};

/// Histogram bin width for `side(I)/side(Q)`.
const BIN: f64 = 0.5;
const BINS: usize = 12;

#[derive(Clone, Debug, Default)]
struct Sweep {
    boxes: usize,
    uncovered: usize,
    max_ratio: f64,
    worst: Option<(i64, i64)>,
    hist: [usize; BINS + 1],
}

impl Sweep {
    fn merge(mut self, o: Sweep) -> Sweep {
        self.boxes += o.boxes;
        self.uncovered += o.uncovered;
        if o.max_ratio > self.max_ratio {
            self.max_ratio = o.max_ratio;
            self.worst = o.worst;
        }
        for (a, b) in self.hist.iter_mut().zip(o.hist) {
            *a += b;
        }
        self
    }
}

/// Every interval `[i h, (i+len) h) ⊆ [0, 1)` with `h = 2^{-depth}`.
pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    let n = 1i64 << cfg.depth;
    let h = 1.0 / n as f64;
    let sweep = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut s = Sweep::default();
            for len in 1..=n - i {
                let b = AxisBox::interval(i as f64 * h, (i + len) as f64 * h);
                s.boxes += 1;
                match shifted_cover(&b) {
                    Ok(c) if c.ratio <= 6.0 => {
                        if c.ratio > s.max_ratio {
                            s.max_ratio = c.ratio;
                            s.worst = Some((i, len));
                        }
                        s.hist[((c.ratio - 1.0) / BIN).floor().clamp(0.0, BINS as f64) as usize] += 1;
                    }
                    _ => s.uncovered += 1,
                }
            }
            s
        })
        .reduce(Sweep::default, Sweep::merge);

    let mut table = CsvTable::new(["ratio_from", "ratio_to", "count"]);
    for (b, &count) in sweep.hist.iter().enumerate() {
        let from = 1.0 + b as f64 * BIN;
        table.push(vec![num(from), num(from + BIN), count.to_string()]);
    }
    table.note("depth", cfg.depth);
    table.note("boxes", sweep.boxes);
    table.note("uncovered", sweep.uncovered);
    table.note("max_ratio", num(sweep.max_ratio));
    if let Some((i, len)) = sweep.worst {
        table.note("worst_box", format!("[{}, {})", num(i as f64 * h), num((i + len) as f64 * h)));
    }
    let checks = vec![Check::new(
        "cover",
        sweep.uncovered == 0 && sweep.max_ratio <= 6.0,
        format!("{} boxes, {} uncovered, max ratio {}", sweep.boxes, sweep.uncovered, sweep.max_ratio),
    )];
    Ok(Report { table, checks })
}
