//! Weights, their duals, and the dyadic `A_p` characteristic.

use crate::domain::Domain;
use crate::dyadic::DyadicCube;
use crate::error::{DyadError, Result};
use crate::scalar::Scalar;
use crate::step::StepFunction;

/// A positive step function, optionally remembering the power law it was
/// averaged from and an exactly computed dual for one exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct Weight<T> {
    cells: StepFunction<T>,
    power: Option<T>,
    dual: Option<(T, StepFunction<T>)>,
}

impl<T: Scalar> Weight<T> {
    /// Wraps strictly positive, finite cells.
    pub fn new(cells: StepFunction<T>) -> Result<Self> {
        check_positive(&cells)?;
        Ok(Self { cells, power: None, dual: None })
    }

    pub fn unit(domain: Domain) -> Self {
        Self { cells: StepFunction::constant(domain, T::one()), power: None, dual: None }
    }

    /// Attaches dual cells `σ` for exponent `p`, e.g. computed in closed form.
    pub fn with_dual(mut self, p: T, sigma: StepFunction<T>) -> Result<Self> {
        self.cells.same_mesh(&sigma)?;
        check_positive(&sigma)?;
        self.dual = Some((p, sigma));
        Ok(self)
    }

    pub fn cells(&self) -> &StepFunction<T> {
        &self.cells
    }

    pub fn domain(&self) -> &Domain {
        self.cells.domain()
    }

    /// Exponent `a` when the cells are exact averages of `|x|^a`.
    pub fn power(&self) -> Option<T> {
        self.power
    }

    /// Stored dual cells, if they were computed for this `p`.
    pub fn dual_cells(&self, p: T) -> Option<&StepFunction<T>> {
        match &self.dual {
            Some((q, s)) if *q == p => Some(s),
            _ => None,
        }
    }

    /// `c·w`; a stored dual becomes `c^{1-p'} σ`.
    pub fn scale(&self, c: T) -> Result<Self> {
        if !(c > T::zero()) || !c.is_finite() {
            return Err(DyadError::Parameter(format!("weight scale {c} must be positive")));
        }
        let dual = self.dual.as_ref().map(|(p, s)| (*p, s.scale(c.powf(T::one() - conjugate(*p)))));
        Ok(Self { cells: self.cells.scale(c), power: None, dual })
    }

    /// `w(Q)/|Q|` over a standard cube of the mesh.
    pub fn average(&self, q: &DyadicCube) -> Result<T> {
        self.cells.average(q)
    }
}

fn check_positive<T: Scalar>(f: &StepFunction<T>) -> Result<()> {
    match f.cells().iter().position(|&v| !(v > T::zero()) || !v.is_finite()) {
        Some(i) => Err(DyadError::Parameter(format!("weight cell {i} is {} (must be positive)", f.cells()[i]))),
        None => Ok(()),
    }
}

/// `p' = p/(p-1)`.
pub fn conjugate<T: Scalar>(p: T) -> T {
    p / (p - T::one())
}

/// Exact average of `|x|^a` over `[lo, hi)`, an interval not straddling 0.
pub fn power_average(a: f64, lo: f64, hi: f64) -> f64 {
    let (alpha, beta) = if hi <= 0.0 { (-hi, -lo) } else { (lo, hi) };
    debug_assert!(alpha >= 0.0 && beta > alpha);
    if a == 0.0 {
        return 1.0;
    }
    let e = a + 1.0;
    if alpha == 0.0 {
        return beta.powf(a) / e;
    }
    // (β^{e} - α^{e}) / (e (β - α)) without cancellation for thin cells
    let t = (beta - alpha) / beta;
    -beta.powf(a) * (e * (-t).ln_1p()).exp_m1() / (e * t)
}

fn power_cells<T: Scalar>(domain: &Domain, a: f64) -> StepFunction<T> {
    StepFunction::from_fn(*domain, |c| T::of(power_average(a, c.lower::<f64>(0), c.upper::<f64>(0))))
}

fn check_power_domain(domain: &Domain, a: f64) -> Result<()> {
    if domain.dim() != 1 {
        return Err(DyadError::Parameter("power weights are one-dimensional".into()));
    }
    if !(a > -1.0) || !a.is_finite() {
        return Err(DyadError::Integrability(format!("|x|^{a} is not locally integrable at 0")));
    }
    Ok(())
}

/// Cells are exact averages of `|x|^a`. When `dual_p` is given the dual
/// `|x|^{a(1-p')}` is averaged in closed form as well.
pub fn power_weight<T: Scalar>(domain: &Domain, a: T, dual_p: Option<T>) -> Result<Weight<T>> {
    let af = a.as_f64();
    check_power_domain(domain, af)?;
    let mut w = Weight { cells: power_cells(domain, af), power: Some(a), dual: None };
    if let Some(p) = dual_p {
        if !(p > T::one()) {
            return Err(DyadError::Parameter(format!("dual exponent {p} must exceed 1")));
        }
        let b = af * (1.0 - conjugate(p.as_f64()));
        check_power_domain(domain, b)?;
        w.dual = Some((p, power_cells(domain, b)));
    }
    check_positive(&w.cells)?;
    Ok(w)
}

/// Weight with cells chosen so that `‖f‖_{L^p(w)}` of the given surrogate
/// `f` equals `(∫ |x|^{a_f p + a_w})^{1/p}` exactly; the dual for `p` is the
/// exact average of `|x|^{a_w(1-p')}`.
pub fn coupled_power_weight<T: Scalar>(f: &StepFunction<T>, p: T, a_f: T, a_w: T) -> Result<Weight<T>> {
    let d = f.domain();
    let b = a_f.as_f64() * p.as_f64() + a_w.as_f64();
    check_power_domain(d, b)?;
    let sigma_exp = a_w.as_f64() * (1.0 - conjugate(p.as_f64()));
    check_power_domain(d, sigma_exp)?;
    let mut cells = Vec::with_capacity(d.len());
    for (i, &v) in f.cells().iter().enumerate() {
        let c = d.cell_cube(i);
        let num = power_average(b, c.lower::<f64>(0), c.upper::<f64>(0));
        let den = v.as_f64().abs().powf(p.as_f64());
        if den == 0.0 {
            return Err(DyadError::Parameter(format!("surrogate vanishes on cell {i}")));
        }
        cells.push(T::of(num / den));
    }
    Weight::new(StepFunction::from_cells(*d, cells)?)?.with_dual(p, power_cells(d, sigma_exp))
}

/// `σ = w^{1-p'}`, exact in closed form when the weight carries a power law
/// or a stored dual for `p`, cellwise otherwise. The result stores `w` as
/// its own dual for `p'`.
pub fn dual_weight<T: Scalar>(w: &Weight<T>, p: T) -> Result<Weight<T>> {
    if !(p > T::one()) {
        return Err(DyadError::Parameter(format!("dual exponent {p} must exceed 1")));
    }
    let e = T::one() - conjugate(p);
    let (cells, power) = if let Some(s) = w.dual_cells(p) {
        (s.clone(), w.power.map(|a| a * e))
    } else if let Some(a) = w.power {
        (power_cells(w.domain(), (a * e).as_f64()), Some(a * e))
    } else {
        (w.cells.powf(e), None)
    };
    Ok(Weight { cells, power, dual: Some((conjugate(p), w.cells.clone())) })
}

/// Which cubes the supremum ran over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ApScope {
    /// Standard dyadic cubes from the root blocks down to this many levels.
    pub max_level: u32,
    /// Whether `σ` came from exact dual cells rather than `w^{1-p'}` per cell.
    pub exact_dual: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApReport<T> {
    pub value: T,
    pub witness: DyadicCube,
    pub p: T,
    pub scope: ApScope,
}

/// `max_Q ⟨w⟩_Q ⟨σ⟩_Q^{p-1}` over standard cubes of the mesh down to
/// `max_level` levels below the root blocks (all levels when `None`).
pub fn ap_characteristic<T: Scalar>(w: &Weight<T>, p: T, max_level: Option<u32>) -> Result<ApReport<T>> {
    if !(p > T::one()) || !p.is_finite() {
        return Err(DyadError::Parameter(format!("A_p exponent {p} must lie in (1, ∞)")));
    }
    let d = *w.domain();
    let max_level = max_level.unwrap_or(d.depth()).min(d.depth());
    let stored = w.dual_cells(p);
    let computed;
    let sigma = match stored {
        Some(s) => s,
        None => {
            computed = w.cells.powf(T::one() - conjugate(p));
            &computed
        }
    };
    let mut best: Option<(T, u32, usize)> = None;
    for level in 0..=max_level {
        let wa = w.cells.level_averages(level);
        let sa = sigma.level_averages(level);
        for (chunk, (a, s)) in wa.into_iter().zip(sa).enumerate() {
            let v = a * s.powf(p - T::one());
            if best.map_or(true, |(b, _, _)| v > b) {
                best = Some((v, level, chunk));
            }
        }
    }
    let (value, level, chunk) = best.expect("every domain has a root block");
    Ok(ApReport {
        value,
        witness: d.cube_at(level, chunk),
        p,
        scope: ApScope { max_level, exact_dual: stored.is_some() },
    })
}
