//! Seeded generators for shift ensembles, sparse families and test inputs.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::Domain;
use crate::dyadic::DyadicCube;
use crate::error::{DyadError, Result};
use crate::operators::haar::HaarShiftSpec;
use crate::operators::positive::{PositiveComponent, PositiveShiftSpec};
use crate::oscillation::SparseFamily;
use crate::scalar::Scalar;
use crate::step::{StepFunction, VectorStepFunction};

/// Independent stream `stream` of the root seed; trial `i` always sees the
/// same numbers regardless of how trials are scheduled.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShiftEnsembleConfig {
    pub kappa: u32,
    pub components: usize,
    pub seed: u64,
    pub cancellative: bool,
}

/// `J` random shifts of complexity `κ`, one term on every cube that resolves
/// `κ` levels down. Coefficients are uniform on `[-1, 1]`, mean-corrected
/// when cancellative, then scaled to `‖k_I‖_∞ = ‖h_I‖_∞ = |I|^{-1/2}`.
pub fn random_shift<T: Scalar>(config: &ShiftEnsembleConfig, domain: &Domain) -> Result<Vec<HaarShiftSpec<T>>> {
    if config.kappa > domain.depth() {
        return Err(DyadError::Resolution(format!(
            "complexity {} exceeds mesh depth {}",
            config.kappa,
            domain.depth()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let subs = 1usize << (domain.dim() as u32 * config.kappa);
    let coefs = |rng: &mut ChaCha8Rng, scale: T| -> Vec<T> {
        let mut v: Vec<f64> = (0..subs).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        if config.cancellative {
            let m = v.iter().sum::<f64>() / subs as f64;
            v.iter_mut().for_each(|x| *x -= m);
        }
        let max = v.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        if max == 0.0 {
            return vec![T::zero(); subs];
        }
        let out: Vec<T> = v.iter().map(|x| T::of(x / max) * scale).collect();
        if config.cancellative {
            // remove the rounding residue of the rescale from the last entry
            let s: T = out.iter().copied().sum();
            let mut out = out;
            let last = out.len() - 1;
            out[last] = out[last] - s;
            if out[last].abs() > scale {
                out[last] = scale * out[last].signum();
            }
            return out;
        }
        out
    };
    (0..config.components)
        .map(|_| {
            let mut spec = HaarShiftSpec::new(config.kappa, config.cancellative);
            for level in 0..=domain.depth() - config.kappa {
                for chunk in 0..domain.cubes_at_level(level) {
                    let cube = domain.cube_at(level, chunk);
                    let scale = cube.volume::<T>().recip().sqrt();
                    let k = coefs(&mut rng, scale);
                    let h = coefs(&mut rng, scale);
                    spec.insert(cube, k, h)?;
                }
            }
            Ok(spec)
        })
        .collect()
}

/// Cell values i.i.d. uniform on `[0, 1]` (`signed = false`) or `[-1, 1]`.
pub fn random_step<T: Scalar>(domain: Domain, rng: &mut impl Rng, signed: bool) -> StepFunction<T> {
    let lo = if signed { -1.0 } else { 0.0 };
    let cells = (0..domain.len()).map(|_| T::of(rng.gen_range(lo..=1.0))).collect();
    StepFunction::from_cells(domain, cells).expect("length matches the mesh")
}

pub fn random_vector<T: Scalar>(domain: Domain, components: usize, r: T, rng: &mut impl Rng, signed: bool) -> Result<VectorStepFunction<T>> {
    let comps = (0..components).map(|_| random_step(domain, rng, signed)).collect();
    VectorStepFunction::new(comps, r)
}

/// A random sparse family containing every root block.
///
/// Inside each member, half of the children are kept free of further
/// members, so every cube retains at least half its measure. Members stay
/// `margin` levels above the mesh.
pub fn random_sparse_family(domain: &Domain, margin: u32, rng: &mut impl Rng) -> Result<SparseFamily> {
    if margin > domain.depth() {
        return Err(DyadError::Resolution(format!("margin {margin} exceeds depth {}", domain.depth())));
    }
    let max_scale = domain.cell_scale() - margin as i32;
    let mut out = Vec::new();
    let mut members: Vec<DyadicCube> = domain.top_cubes();
    while let Some(q) = members.pop() {
        out.push(q);
        if q.scale() >= max_scale {
            continue;
        }
        let mut children = q.children_unchecked();
        children.shuffle(rng);
        let busy = children.len() / 2;
        let mut search: Vec<DyadicCube> = children[..busy].to_vec();
        while let Some(c) = search.pop() {
            if rng.gen_bool(0.5) {
                members.push(c);
            } else if c.scale() < max_scale {
                search.extend(c.children_unchecked());
            }
        }
    }
    Ok(SparseFamily::new(out)?.with_margin(margin))
}

/// A positive shift with independent random sparse families per component
/// and random exceptional sets of depth-`κ` subcubes.
pub fn random_positive_shift(config: &ShiftEnsembleConfig, domain: &Domain) -> Result<PositiveShiftSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = domain.dim() as u32;
    let kappa = config.kappa;
    let min_pieces = 1usize << ((n - 1) * kappa);
    let all_pieces = 1usize << (n * kappa);
    let components = (0..config.components)
        .map(|_| {
            let family = random_sparse_family(domain, kappa, &mut rng)?;
            let mut exceptional = BTreeMap::new();
            for q in family.cubes() {
                let mut subs = vec![*q];
                for _ in 0..kappa {
                    subs = subs.iter().flat_map(|s| s.children_unchecked()).collect();
                }
                subs.shuffle(&mut rng);
                let take = rng.gen_range(min_pieces..=all_pieces);
                subs.truncate(take);
                exceptional.insert(*q, subs);
            }
            Ok(PositiveComponent { family, exceptional })
        })
        .collect::<Result<Vec<_>>>()?;
    PositiveShiftSpec::new(kappa, components)
}
