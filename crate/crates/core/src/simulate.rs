//! Path generators.
//!
//! The primary sampler draws the observation skeleton from the exact one-step
//! transition law by rejection: propose a free Gaussian endpoint, keep it as a
//! no-hit sample with the absorbed-kernel probability, otherwise redraw the
//! endpoint from the conditional law given a zero hit (atom, or a crossing
//! magnitude found by root-solving the closed-form tail mass). This produces
//! the exact joint law of (endpoint, interval-hit flag): the kept branch has
//! exactly the absorbed density, and given the endpoint the flag is Bernoulli
//! with the kernel hit probability.
//!
//! The time-change sampler discretizes A(t) = t + rho L_t over a fine grid and
//! is approximate; it exists to cross-validate the exact sampler and to handle
//! the Ito variant with non-constant coefficients.

use crate::error::{Error, Result};
use crate::kernel::{raw_atom, raw_half_mass};
use crate::path_model::{ModelKind, ObservationGrid, SamplePath, StickyModel};
use crate::rng::{stream_rng, StreamRole};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimMethod {
    KernelExact,
    TimeChange,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub model: StickyModel,
    pub grid: ObservationGrid,
    pub method: SimMethod,
    /// Fine substeps per observation interval (TimeChange only).
    pub refine: u32,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.refine < 1 {
            return Err(Error::Config("refine must be >= 1".into()));
        }
        if self.method == SimMethod::KernelExact && self.model.kind == ModelKind::StickyIto {
            return Err(Error::Config(
                "the kernel-exact method covers sticky and sticky-reflected Brownian motion only"
                    .into(),
            ));
        }
        Ok(())
    }
}

/// Find z >= lo with raw_half_mass(t, z, rho) = r (the mass is strictly
/// decreasing in z). Safeguarded Newton inside a doubling bracket.
fn solve_half_mass(t: f64, rho: f64, r: f64, lo: f64) -> f64 {
    if raw_half_mass(t, lo, rho) <= r {
        return lo;
    }
    let s2t = (2.0 * t).sqrt();
    let mut step = s2t;
    let mut hi = lo + step;
    while raw_half_mass(t, hi, rho) > r {
        step *= 2.0;
        hi += step;
    }
    let (mut a, mut b) = (lo, hi);
    let mut z = 0.5 * (a + b);
    for _ in 0..200 {
        let f = raw_half_mass(t, z, rho) - r;
        if f == 0.0 {
            return z;
        }
        if f > 0.0 {
            a = z;
        } else {
            b = z;
        }
        let slope = -raw_atom(t, z, rho) / rho;
        let mut zn = z - f / slope;
        if !(zn > a && zn < b) {
            zn = 0.5 * (a + b);
        }
        if (zn - z).abs() <= 1e-15 * (1.0 + z.abs()) {
            return zn;
        }
        z = zn;
    }
    z
}

/// Streaming exact one-step sampler for sticky Brownian motion at step `dt`.
///
/// Statistics over very long paths can be accumulated through [`step`] without
/// materializing the path.
///
/// [`step`]: ExactSampler::step
pub struct ExactSampler {
    dt: f64,
    rho: f64,
    atom_from_zero: f64,
    half_from_zero: f64,
    increments: ChaCha8Rng,
    atoms: ChaCha8Rng,
    hits: ChaCha8Rng,
}

impl ExactSampler {
    pub fn new(dt: f64, rho: f64, path_seed: u64) -> Result<Self> {
        if !(dt > 0.0) || !(rho > 0.0) {
            return Err(Error::Domain(format!(
                "need dt > 0 and rho > 0, got {dt}, {rho}"
            )));
        }
        Ok(ExactSampler {
            dt,
            rho,
            atom_from_zero: raw_atom(dt, 0.0, rho),
            half_from_zero: raw_half_mass(dt, 0.0, rho),
            increments: stream_rng(path_seed, StreamRole::Increments),
            atoms: stream_rng(path_seed, StreamRole::Atoms),
            hits: stream_rng(path_seed, StreamRole::Hits),
        })
    }

    /// One exact transition from `x`; returns (endpoint, interval hit flag).
    pub fn step(&mut self, x: f64) -> (f64, bool) {
        let t = self.dt;
        if x == 0.0 {
            if self.atoms.gen::<f64>() < self.atom_from_zero {
                return (0.0, true);
            }
            let v = self.crossing_magnitude(self.half_from_zero, 0.0);
            return (self.signed(v), true);
        }
        let m = x.abs();
        let y = x + t.sqrt() * self.increments.sample::<f64, _>(StandardNormal);
        if y * x > 0.0 && self.hits.gen::<f64>() >= (-2.0 * m * y.abs() / t).exp() {
            // Free proposal kept with the no-hit (reflection) probability:
            // the kept endpoint has exactly the absorbed density.
            return (y, false);
        }
        // Conditional law given a hit: atom, or a symmetric crossing tail.
        let atom = raw_atom(t, m, self.rho);
        let half = raw_half_mass(t, m, self.rho);
        if self.atoms.gen::<f64>() * (atom + 2.0 * half) < atom {
            return (0.0, true);
        }
        let v = self.crossing_magnitude(half, m);
        (self.signed(v), true)
    }

    /// |endpoint| given a hit and a continuous endpoint, started from |x| = m.
    fn crossing_magnitude(&mut self, half: f64, m: f64) -> f64 {
        let r = half * (1.0 - self.atoms.gen::<f64>());
        let v = solve_half_mass(self.dt, self.rho, r, m) - m;
        if v > 0.0 {
            v
        } else {
            f64::MIN_POSITIVE
        }
    }

    fn signed(&mut self, v: f64) -> f64 {
        if self.atoms.gen::<bool>() {
            v
        } else {
            -v
        }
    }
}

pub fn sample_sticky_bm_exact(config: &SimConfig) -> Result<SamplePath> {
    config.validate()?;
    if config.method != SimMethod::KernelExact || config.model.kind != ModelKind::StickyBm {
        return Err(Error::Config(
            "sample_sticky_bm_exact needs method = KernelExact and a sticky BM model".into(),
        ));
    }
    let steps = config.grid.intervals();
    let mut sampler = ExactSampler::new(config.grid.dt(), config.model.rho, config.seed)?;
    let mut values = Vec::with_capacity(steps + 1);
    let mut flags = Vec::with_capacity(steps);
    let mut x = config.model.x0;
    values.push(x);
    for _ in 0..steps {
        let (y, hit) = sampler.step(x);
        values.push(y);
        flags.push(hit);
        x = y;
    }
    SamplePath::new(config.grid, values, flags, config.seed)
}

/// Whether a fine segment (za -> zb over dt_seg, diffusion sig at the left
/// endpoint) hits 0, sampling the Brownian-bridge crossing event when the
/// endpoints do not force it.
fn segment_hits(za: f64, zb: f64, dt_seg: f64, sig: f64, hits: &mut ChaCha8Rng) -> bool {
    if za == 0.0 || zb == 0.0 || za * zb < 0.0 {
        return true;
    }
    if dt_seg <= 0.0 {
        return false;
    }
    let p = (-2.0 * za * zb / (sig * sig * dt_seg)).exp();
    hits.gen::<f64>() < p
}

/// Shared fine-grid time-change driver for the approximate samplers.
///
/// Walks a fine Euler-Maruyama path z, accumulates a local-time estimate from
/// the scaled occupation of [0, eps), splits the clock A = s + rho L into the
/// time part and the local part of each fine step, and reads observations off
/// the inverse clock: observation times landing in a local part yield an exact
/// 0 (the path sits on the atom there).
fn time_change_driver<M, S>(
    grid: ObservationGrid,
    refine: u32,
    rho: f64,
    x0: f64,
    mu: M,
    sigma: S,
    seed: u64,
) -> Result<SamplePath>
where
    M: Fn(f64) -> f64,
    S: Fn(f64) -> f64,
{
    let steps = grid.intervals();
    let h = grid.dt() / refine as f64;
    let sqh = h.sqrt();
    let sig0 = sigma(0.0);
    if !(sig0 > 0.0) {
        return Err(Error::Model(format!(
            "diffusion coefficient at 0 must be positive, got {sig0}"
        )));
    }
    let eps = sqh * sig0;
    let mut increments = stream_rng(seed, StreamRole::Increments);
    let mut hits = stream_rng(seed, StreamRole::Hits);

    let mut values = Vec::with_capacity(steps + 1);
    let mut flags: Vec<bool> = Vec::with_capacity(steps);
    values.push(x0);
    let mut z = x0;
    let mut a = 0.0f64;
    let mut hit_acc = false;
    let mut i = 1usize;
    while i <= steps {
        let sig_z = sigma(z);
        if !(sig_z > 0.0) {
            return Err(Error::Model(format!(
                "diffusion coefficient must stay positive, got {sig_z} at {z}"
            )));
        }
        let zn = z + mu(z) * h + sig_z * sqh * increments.sample::<f64, _>(StandardNormal);
        let tau = grid.time(i);
        if i <= steps && tau > a && tau <= a + h {
            // Observation inside the time part of this fine step: bridge.
            let f = ((tau - a) / h).clamp(0.0, 1.0);
            let v = if f >= 1.0 {
                zn
            } else if f <= 0.0 {
                z
            } else {
                z + f * (zn - z)
                    + (f * (1.0 - f) * h).sqrt()
                        * sig_z
                        * increments.sample::<f64, _>(StandardNormal)
            };
            hit_acc |= segment_hits(z, v, f * h, sig_z, &mut hits);
            values.push(v);
            flags.push(hit_acc);
            hit_acc = segment_hits(v, zn, (1.0 - f) * h, sig_z, &mut hits);
            i += 1;
        } else {
            hit_acc |= segment_hits(z, zn, h, sig_z, &mut hits);
        }
        a += h;
        // Local part: the clock advances by rho dL while the path sits at 0.
        if zn >= 0.0 && zn < eps {
            let sig_n = sigma(zn);
            let dl = sig_n * sig_n * h / eps;
            hit_acc = true;
            let a_end = a + rho * dl;
            while i <= steps && grid.time(i) > a && grid.time(i) <= a_end {
                values.push(0.0);
                flags.push(true);
                i += 1;
            }
            a = a_end;
        }
        z = zn;
    }
    // The bridge draws are per-segment; make the flags consistent with the
    // emitted values wherever the endpoints force a hit.
    for j in 1..values.len() {
        if values[j - 1] == 0.0 || values[j] == 0.0 || values[j - 1] * values[j] < 0.0 {
            flags[j - 1] = true;
        }
    }
    SamplePath::new(grid, values, flags, seed)
}

pub fn sample_sticky_bm_timechange(config: &SimConfig) -> Result<SamplePath> {
    config.validate()?;
    if config.method != SimMethod::TimeChange || config.model.kind != ModelKind::StickyBm {
        return Err(Error::Config(
            "sample_sticky_bm_timechange needs method = TimeChange and a sticky BM model".into(),
        ));
    }
    time_change_driver(
        config.grid,
        config.refine,
        config.model.rho,
        config.model.x0,
        |_| 0.0,
        |_| 1.0,
        config.seed,
    )
}

/// Sticky-reflected Brownian motion: the absolute value of a sticky BM of the
/// same rho (exact in law); hit flags inherited from the underlying path.
pub fn sample_sticky_reflected(config: &SimConfig) -> Result<SamplePath> {
    config.validate()?;
    if config.model.kind != ModelKind::StickyReflectedBm {
        return Err(Error::Config(
            "sample_sticky_reflected needs a sticky-reflected model".into(),
        ));
    }
    let underlying = SimConfig {
        model: StickyModel::brownian(config.model.rho, config.model.x0)?,
        ..config.clone()
    };
    let path = match config.method {
        SimMethod::KernelExact => sample_sticky_bm_exact(&underlying)?,
        SimMethod::TimeChange => sample_sticky_bm_timechange(&underlying)?,
    };
    let values = path.values.iter().map(|v| v.abs()).collect();
    SamplePath::new(config.grid, values, path.hit_flags, config.seed)
}

/// Approximate sampler for the sticky Ito SDE; exact in law only for constant
/// sigma (where it reduces to a scaled sticky BM).
pub fn sample_sticky_ito(config: &SimConfig) -> Result<SamplePath> {
    config.validate()?;
    if config.model.kind != ModelKind::StickyIto {
        return Err(Error::Config(
            "sample_sticky_ito needs a sticky Ito model".into(),
        ));
    }
    let mu = config
        .model
        .mu
        .unwrap_or(crate::path_model::Coefficient::Constant(0.0));
    let sigma = config
        .model
        .sigma
        .unwrap_or(crate::path_model::Coefficient::Constant(1.0));
    time_change_driver(
        config.grid,
        config.refine,
        config.model.rho,
        config.model.x0,
        move |x| mu.eval(x),
        move |x| sigma.eval(x),
        config.seed,
    )
}

/// Dispatch on model kind and method.
pub fn sample_path(config: &SimConfig) -> Result<SamplePath> {
    config.validate()?;
    match config.model.kind {
        ModelKind::StickyBm => match config.method {
            SimMethod::KernelExact => sample_sticky_bm_exact(config),
            SimMethod::TimeChange => sample_sticky_bm_timechange(config),
        },
        ModelKind::StickyReflectedBm => sample_sticky_reflected(config),
        ModelKind::StickyIto => sample_sticky_ito(config),
    }
}

/// Reflect the path at its first zero hit: negate every value from the right
/// endpoint of the first interval whose hit flag is set (from index 0 when the
/// path starts at 0). Hit flags are unchanged, so the transform is an
/// involution and preserves absolute values.
pub fn reflect_at_first_hit(path: &SamplePath) -> SamplePath {
    let tau = if path.values.first() == Some(&0.0) {
        Some(0)
    } else {
        path.hit_flags.iter().position(|&f| f).map(|i| i + 1)
    };
    let mut out = path.clone();
    if let Some(tau) = tau {
        for v in out.values[tau..].iter_mut() {
            if *v != 0.0 {
                *v = -*v;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path_model::Coefficient;

    fn bm_config(rho: f64, x0: f64, n: u64, horizon: f64, seed: u64) -> SimConfig {
        SimConfig {
            model: StickyModel::brownian(rho, x0).unwrap(),
            grid: ObservationGrid::new(n, horizon).unwrap(),
            method: SimMethod::KernelExact,
            refine: 1,
            seed,
        }
    }

    #[test]
    fn exact_sampler_is_deterministic() {
        let cfg = bm_config(1.0, 0.0, 500, 1.0, 42);
        let a = sample_sticky_bm_exact(&cfg).unwrap();
        let b = sample_sticky_bm_exact(&cfg).unwrap();
        assert_eq!(a, b);
        let c = sample_sticky_bm_exact(&bm_config(1.0, 0.0, 500, 1.0, 43)).unwrap();
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn exact_paths_are_valid_and_hit_the_atom() {
        let cfg = bm_config(1.0, 0.0, 2000, 1.0, 7);
        let p = sample_sticky_bm_exact(&cfg).unwrap();
        assert!(p.validate().is_empty());
        let zeros = p.values.iter().filter(|&&v| v == 0.0).count();
        assert!(zeros > 100, "expected many exact zeros, got {zeros}");
    }

    #[test]
    fn one_step_atom_frequency_matches_kernel() {
        let dt = 0.01;
        let rho = 1.0;
        let mut sampler = ExactSampler::new(dt, rho, 11).unwrap();
        let trials = 40_000;
        let mut zeros = 0usize;
        for _ in 0..trials {
            if sampler.step(0.0).0 == 0.0 {
                zeros += 1;
            }
        }
        let p = raw_atom(dt, 0.0, rho);
        let freq = zeros as f64 / trials as f64;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((freq - p).abs() < 4.0 * se, "freq {freq}, want {p} +- {se}");
    }

    #[test]
    fn no_hit_steps_never_flag_and_hits_are_forced() {
        let cfg = bm_config(0.5, 1.0, 1000, 1.0, 3);
        let p = sample_sticky_bm_exact(&cfg).unwrap();
        for i in 0..p.intervals() {
            let (a, b) = (p.values[i], p.values[i + 1]);
            if a == 0.0 || b == 0.0 || a * b < 0.0 {
                assert!(p.hit_flags[i]);
            }
        }
    }

    #[test]
    fn timechange_is_deterministic_and_valid() {
        let mut cfg = bm_config(1.0, 0.0, 128, 1.0, 9);
        cfg.method = SimMethod::TimeChange;
        cfg.refine = 32;
        let a = sample_sticky_bm_timechange(&cfg).unwrap();
        let b = sample_sticky_bm_timechange(&cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.validate().is_empty());
        assert_eq!(a.values.len(), 129);
        // The time-change path visits exact zeros.
        assert!(a.values.iter().any(|&v| v == 0.0));
    }

    #[test]
    fn reflected_paths_are_nonnegative() {
        let mut cfg = bm_config(1.0, 0.5, 500, 1.0, 5);
        cfg.model = StickyModel::reflected(1.0, 0.5).unwrap();
        let p = sample_sticky_reflected(&cfg).unwrap();
        assert!(p.values.iter().all(|&v| v >= 0.0));
        assert!(p.validate().is_empty());
    }

    #[test]
    fn ito_constant_sigma_runs_and_validates() {
        let cfg = SimConfig {
            model: StickyModel::ito(
                1.0,
                0.0,
                Coefficient::Constant(0.0),
                Coefficient::Constant(2.0),
            )
            .unwrap(),
            grid: ObservationGrid::new(64, 1.0).unwrap(),
            method: SimMethod::TimeChange,
            refine: 32,
            seed: 13,
        };
        let p = sample_sticky_ito(&cfg).unwrap();
        assert!(p.validate().is_empty());
    }

    #[test]
    fn exact_method_rejects_ito_models() {
        let cfg = SimConfig {
            model: StickyModel::ito(
                1.0,
                0.0,
                Coefficient::Constant(0.0),
                Coefficient::Constant(1.0),
            )
            .unwrap(),
            grid: ObservationGrid::new(10, 1.0).unwrap(),
            method: SimMethod::KernelExact,
            refine: 1,
            seed: 0,
        };
        assert!(matches!(sample_path(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn reflection_is_an_involution_preserving_magnitudes() {
        let cfg = bm_config(1.0, 0.3, 800, 1.0, 21);
        let p = sample_sticky_bm_exact(&cfg).unwrap();
        let r = reflect_at_first_hit(&p);
        assert_eq!(r.hit_flags, p.hit_flags);
        for (a, b) in p.values.iter().zip(&r.values) {
            assert_eq!(a.abs(), b.abs());
        }
        let rr = reflect_at_first_hit(&r);
        assert_eq!(rr, p);
    }

    #[test]
    fn reflection_leaves_untouched_paths_alone() {
        let grid = ObservationGrid::new(4, 1.0).unwrap();
        let p = SamplePath::new(grid, vec![1.0, 2.0, 1.5, 0.7, 2.2], vec![false; 4], 0).unwrap();
        assert_eq!(reflect_at_first_hit(&p), p);
    }

    #[test]
    fn reflection_flips_after_first_flag() {
        let grid = ObservationGrid::new(4, 1.0).unwrap();
        let p = SamplePath::new(
            grid,
            vec![1.0, 0.5, -0.5, 0.0, 1.0],
            vec![true, true, true, true],
            0,
        )
        .unwrap();
        let r = reflect_at_first_hit(&p);
        assert_eq!(r.values, vec![1.0, -0.5, 0.5, 0.0, -1.0]);
    }
}
