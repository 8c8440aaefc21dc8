//! Monte Carlo harness and check suites behind the CLI verbs.
//!
//! Replicas run in parallel with seeds derived from the master seed by
//! replica index; results are collected in index order before the reduction,
//! so outputs are byte-identical regardless of scheduling.

use crate::config::RunConfig;
use crate::error::{Error, Result, Violation};
use crate::estimate::{
    default_g, estimate_rho_crossing, estimate_rho_ito, estimate_rho_occupation, CrossingVariant,
    EstimateResult,
};
use crate::kernel::{
    asymptotic_fn, hit_probability, m_functional, sticky_atom_mass, sticky_density, AsymKind,
};
use crate::ks::two_sample_ks;
use crate::path_model::{
    fmt_f64, Coefficient, ModelKind, ObservationGrid, SamplePath, StickyModel,
};
use crate::quad::adaptive_simpson;
use crate::rng::replica_seed;
use crate::simulate::{reflect_at_first_hit, sample_path, ExactSampler, SimConfig, SimMethod};
use crate::statistics::{
    bouncings, conditional_crossings, crossings, differences, occupation_stat, Region,
};
use rayon::prelude::*;
use std::time::Instant;

// ---------------------------------------------------------------- config glue

pub fn model_from_config(cfg: &RunConfig) -> Result<StickyModel> {
    let rho = cfg.f64_or("model.rho", 1.0)?;
    let x0 = cfg.f64_or("model.x0", 0.0)?;
    match cfg.str_or("model.kind", "sticky-bm") {
        "sticky-bm" => StickyModel::brownian(rho, x0),
        "sticky-reflected" => StickyModel::reflected(rho, x0),
        "sticky-ito" => {
            let mu = Coefficient::Affine {
                intercept: cfg.f64_or("model.mu", 0.0)?,
                slope: cfg.f64_or("model.mu_slope", 0.0)?,
            };
            let sigma = Coefficient::Affine {
                intercept: cfg.f64_or("model.sigma", 1.0)?,
                slope: cfg.f64_or("model.sigma_slope", 0.0)?,
            };
            StickyModel::ito(rho, x0, mu, sigma)
        }
        other => Err(Error::Config(format!("unknown model.kind `{other}`"))),
    }
}

pub fn grid_from_config(cfg: &RunConfig) -> Result<ObservationGrid> {
    ObservationGrid::new(cfg.u64_or("grid.n", 10_000)?, cfg.f64_or("grid.T", 1.0)?)
}

pub fn sim_config_from(cfg: &RunConfig, seed: u64) -> Result<SimConfig> {
    let method = match cfg.str_or("sim.method", "exact") {
        "exact" => SimMethod::KernelExact,
        "time-change" => SimMethod::TimeChange,
        other => return Err(Error::Config(format!("unknown sim.method `{other}`"))),
    };
    let sim = SimConfig {
        model: model_from_config(cfg)?,
        grid: grid_from_config(cfg)?,
        method,
        refine: cfg.u64_or("sim.refine", 64)? as u32,
        seed,
    };
    sim.validate()?;
    Ok(sim)
}

/// Estimator choice parsed out of the configuration.
#[derive(Debug, Clone, Copy)]
pub enum EstimatorSpec {
    Crossing(CrossingVariant),
    Occupation {
        alpha: f64,
    },
    Ito {
        sigma0: f64,
        variant: CrossingVariant,
    },
}

fn variant_from(cfg: &RunConfig) -> Result<CrossingVariant> {
    match cfg.str_or("estimator.variant", "C") {
        "C" => Ok(CrossingVariant::C),
        "B" => Ok(CrossingVariant::B),
        "D" => Ok(CrossingVariant::D),
        other => Err(Error::Config(format!(
            "unknown estimator.variant `{other}`"
        ))),
    }
}

pub fn estimator_from_config(cfg: &RunConfig) -> Result<EstimatorSpec> {
    match cfg.str_or("estimator.method", "crossing") {
        "crossing" => Ok(EstimatorSpec::Crossing(variant_from(cfg)?)),
        "occupation" => Ok(EstimatorSpec::Occupation {
            alpha: cfg.f64_or("estimator.alpha", 0.5)?,
        }),
        "crossing-ito" => {
            let sigma0 = match cfg.get("estimator.sigma0") {
                Some(_) => cfg.f64_or("estimator.sigma0", 1.0)?,
                None => model_from_config(cfg)?.sigma0(),
            };
            Ok(EstimatorSpec::Ito {
                sigma0,
                variant: variant_from(cfg)?,
            })
        }
        other => Err(Error::Config(format!("unknown estimator.method `{other}`"))),
    }
}

pub fn estimate_on_path(path: &SamplePath, spec: EstimatorSpec) -> Result<EstimateResult> {
    match spec {
        EstimatorSpec::Crossing(v) => estimate_rho_crossing(path, v),
        EstimatorSpec::Occupation { alpha } => {
            estimate_rho_occupation(path, &default_g, alpha, 1.0)
        }
        EstimatorSpec::Ito { sigma0, variant } => estimate_rho_ito(path, sigma0, variant),
    }
}

// ------------------------------------------------------------- MC estimation

#[derive(Debug, Clone, PartialEq)]
pub struct McSummary {
    pub echo: String,
    pub n_replicas: u64,
    pub included: u64,
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub conditioning_rate: f64,
    pub error_count: u64,
    pub wall_seconds: f64,
}

fn mean_std(values: &[f64]) -> (Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() > 1 {
        Some((values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt())
    } else {
        Some(0.0)
    };
    (Some(mean), std)
}

pub fn run_mc_estimation(cfg: &RunConfig) -> Result<McSummary> {
    let start = Instant::now();
    let replicas = cfg.u64_or("mc.replicas", 500)?;
    if replicas == 0 {
        return Err(Error::Config("mc.replicas must be >= 1".into()));
    }
    let master = cfg.u64_or("mc.master_seed", 0)?;
    let spec = estimator_from_config(cfg)?;
    sim_config_from(cfg, 0)?; // validate the simulation block up front

    let records: Vec<Result<EstimateResult>> = (0..replicas)
        .into_par_iter()
        .map(|i| {
            let sim = sim_config_from(cfg, replica_seed(master, i))?;
            let path = sample_path(&sim)?;
            estimate_on_path(&path, spec)
        })
        .collect();

    let mut values = Vec::new();
    let mut hits = 0u64;
    let mut errors = 0u64;
    for rec in &records {
        match rec {
            Ok(r) => {
                if r.hit_event {
                    hits += 1;
                }
                if let Some(v) = r.value {
                    values.push(v);
                }
            }
            Err(_) => errors += 1,
        }
    }
    let (mean, std) = mean_std(&values);
    Ok(McSummary {
        echo: format!(
            "kind={} rho={} x0={} n={} T={} method={} estimator={}",
            cfg.str_or("model.kind", "sticky-bm"),
            cfg.f64_or("model.rho", 1.0)?,
            cfg.f64_or("model.x0", 0.0)?,
            cfg.u64_or("grid.n", 10_000)?,
            cfg.f64_or("grid.T", 1.0)?,
            cfg.str_or("sim.method", "exact"),
            cfg.str_or("estimator.method", "crossing"),
        ),
        n_replicas: replicas,
        included: values.len() as u64,
        mean,
        std,
        conditioning_rate: hits as f64 / replicas as f64,
        error_count: errors,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn mc_summary_csv(s: &McSummary) -> String {
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    format!(
        "echo,n_replicas,included,mean,std,conditioning_rate,error_count,wall_seconds\n\"{}\",{},{},{},{},{},{},{}\n",
        s.echo,
        s.n_replicas,
        s.included,
        opt(s.mean),
        opt(s.std),
        fmt_f64(s.conditioning_rate),
        s.error_count,
        fmt_f64(s.wall_seconds),
    )
}

// -------------------------------------------------------- convergence suite

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub statistic: String,
    pub n: u64,
    pub t: f64,
    /// MC mean of the absolute deviation from the reference limit.
    pub mean_abs_dev: f64,
    /// MC mean of the reference limit itself.
    pub mean_ref: f64,
}

struct PathDeviations {
    /// (statistic name, |deviation|, reference value)
    rows: Vec<(&'static str, f64, f64)>,
}

fn sticky_bm_deviations(path: &SamplePath, rho: f64, k: usize) -> Result<PathDeviations> {
    let n = path.grid.n() as f64;
    let rn = n.sqrt();
    let root_2_pi = (2.0 / std::f64::consts::PI).sqrt();
    let occ = occupation_stat(path, Region::Point(0.0))?.at(k) as f64;
    let lhat = occ / (n * rho);
    let c0 = crossings(path, 0)?.at(k) as f64;
    let c1 = crossings(path, 1)?.at(k) as f64;
    let c2 = crossings(path, 2)?.at(k) as f64;
    let b1 = bouncings(path, 1)?.at(k) as f64;
    let b2 = bouncings(path, 2)?.at(k) as f64;
    let d1 = differences(path, 1)?.at(k) as f64;
    let d2 = differences(path, 2)?.at(k) as f64;
    let cond0 = conditional_crossings(path, 0, rho)?[k];
    let lim1 = 4.0 * root_2_pi * lhat;
    let lim2 = rho * lhat;
    Ok(PathDeviations {
        rows: vec![
            ("C0/sqrt(n)", c0 / rn, 0.0),
            ("C1/sqrt(n)", (c1 / rn - lim1).abs(), lim1),
            ("D1/sqrt(n)", (d1 / rn - lim1).abs(), lim1),
            ("C2/n", (c2 / n - lim2).abs(), lim2),
            ("D2/n", (d2 / n - lim2).abs(), lim2),
            ("|B1-C1|/sqrt(n)", (b1 - c1).abs() / rn, lim1),
            ("|B2-C2|/n", (b2 - c2).abs() / n, lim2),
            ("CondC0", (cond0 - lhat / rho).abs(), lhat / rho),
        ],
    })
}

fn reflected_deviations(path: &SamplePath, rho: f64, k: usize) -> Result<PathDeviations> {
    let n = path.grid.n() as f64;
    let rn = n.sqrt();
    let root_2_pi = (2.0 / std::f64::consts::PI).sqrt();
    // occupation at 0 estimates rho L^Y = (rho/2) L^X for the folded path
    let occ = occupation_stat(path, Region::Point(0.0))?.at(k) as f64;
    let lhat = 2.0 * occ / (n * rho);
    let b1 = bouncings(path, 1)?.at(k) as f64;
    let b2 = bouncings(path, 2)?.at(k) as f64;
    let lim1 = 2.0 * root_2_pi * lhat;
    let lim2 = 0.5 * rho * lhat;
    Ok(PathDeviations {
        rows: vec![
            ("B1/sqrt(n) (reflected)", (b1 / rn - lim1).abs(), lim1),
            ("B2/n (reflected)", (b2 / n - lim2).abs(), lim2),
        ],
    })
}

pub fn run_convergence_suite(cfg: &RunConfig) -> Result<Vec<ConvergenceRow>> {
    let n_list = cfg.u64_list_or("converge.n_list", &[1_000, 10_000, 100_000])?;
    if n_list.is_empty() {
        return Err(Error::Config("converge.n_list must not be empty".into()));
    }
    let replicas = cfg.u64_or("mc.replicas", 200)?;
    if replicas == 0 {
        return Err(Error::Config("mc.replicas must be >= 1".into()));
    }
    let master = cfg.u64_or("mc.master_seed", 0)?;
    let model = model_from_config(cfg)?;
    let horizon = cfg.f64_or("grid.T", 1.0)?;
    let reflected = model.kind == ModelKind::StickyReflectedBm;

    let mut out = Vec::new();
    for &n in &n_list {
        let grid = ObservationGrid::new(n, horizon)?;
        let steps = grid.intervals();
        let ks: Vec<usize> = [steps / 4, steps / 2, steps]
            .into_iter()
            .filter(|&k| k > 0)
            .collect();
        let per_replica: Vec<Result<Vec<PathDeviations>>> = (0..replicas)
            .into_par_iter()
            .map(|i| {
                let sim = SimConfig {
                    model: model.clone(),
                    grid,
                    method: SimMethod::KernelExact,
                    refine: 1,
                    seed: replica_seed(master ^ n, i),
                };
                let path = sample_path(&sim)?;
                ks.iter()
                    .map(|&k| {
                        if reflected {
                            reflected_deviations(&path, model.rho, k)
                        } else {
                            sticky_bm_deviations(&path, model.rho, k)
                        }
                    })
                    .collect()
            })
            .collect();
        // reduce: mean over replicas for each (time index, statistic)
        let mut acc: Vec<Vec<(f64, f64)>> = Vec::new();
        let mut names: Vec<Vec<&'static str>> = Vec::new();
        let mut count = 0usize;
        for rep in per_replica {
            let rep = rep?;
            if acc.is_empty() {
                for devs in &rep {
                    acc.push(vec![(0.0, 0.0); devs.rows.len()]);
                    names.push(devs.rows.iter().map(|r| r.0).collect());
                }
            }
            for (ti, devs) in rep.iter().enumerate() {
                for (si, &(_, dev, reference)) in devs.rows.iter().enumerate() {
                    acc[ti][si].0 += dev;
                    acc[ti][si].1 += reference;
                }
            }
            count += 1;
        }
        for (ti, &k) in ks.iter().enumerate() {
            for (si, &name) in names[ti].iter().enumerate() {
                out.push(ConvergenceRow {
                    statistic: name.to_string(),
                    n,
                    t: grid.time(k),
                    mean_abs_dev: acc[ti][si].0 / count as f64,
                    mean_ref: acc[ti][si].1 / count as f64,
                });
            }
        }
    }
    Ok(out)
}

pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut s = String::from("statistic,n,t,mean_abs_dev,mean_ref\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            r.statistic,
            r.n,
            fmt_f64(r.t),
            fmt_f64(r.mean_abs_dev),
            fmt_f64(r.mean_ref)
        ));
    }
    s
}

// ------------------------------------------------------------ kernel checks

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub name: String,
    pub achieved: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn check(name: impl Into<String>, achieved: f64, tolerance: f64) -> CheckRow {
    CheckRow {
        name: name.into(),
        achieved,
        tolerance,
        pass: achieved <= tolerance,
    }
}

pub fn run_kernel_checks(cfg: &RunConfig) -> Result<Vec<CheckRow>> {
    let rho = cfg.f64_or("model.rho", 1.0)?;
    let mut rows = Vec::new();

    // normalization against the speed measure
    for &(t, x) in &[(1.0, 0.0), (0.5, 0.7), (2.0, -1.3)] {
        let f =
            |y: f64| sticky_density(t, x, if y == 0.0 { 1e-300 } else { y }, rho).unwrap_or(0.0);
        let hw = 10.0 * t.sqrt() + x.abs();
        let mass = adaptive_simpson(&f, -hw, 0.0, 1e-11)?.value
            + adaptive_simpson(&f, 0.0, hw, 1e-11)?.value
            + sticky_atom_mass(t, x, rho)?;
        rows.push(check(
            format!("normalization t={t} x={x}"),
            (mass - 1.0).abs(),
            1e-8,
        ));
    }

    // symmetry p(t,x,y) = p(t,-x,-y)
    let mut sym_err = 0.0f64;
    for i in 0..100 {
        let x = -2.0 + 0.04 * i as f64;
        let y = 1.7 - 0.033 * i as f64;
        if y == 0.0 {
            continue;
        }
        let a = sticky_density(0.8, x, y, rho)?;
        let b = sticky_density(0.8, -x, -y, rho)?;
        sym_err = sym_err.max((a - b).abs());
    }
    rows.push(check("symmetry", sym_err, 1e-15));

    // Chapman-Kolmogorov on sampled triples
    for &(s, t, x, y) in &[(0.5, 0.5, 0.0, 0.5), (0.3, 0.7, 0.4, -0.6)] {
        let f = |z: f64| {
            let z = if z == 0.0 { 1e-300 } else { z };
            sticky_density(s, x, z, rho).unwrap_or(0.0)
                * sticky_density(t, z, y, rho).unwrap_or(0.0)
        };
        let hw = 12.0;
        let lhs = adaptive_simpson(&f, -hw, 0.0, 1e-11)?.value
            + adaptive_simpson(&f, 0.0, hw, 1e-11)?.value
            + sticky_atom_mass(s, x, rho)? * sticky_density(t, 0.0, y, rho)?;
        let rhs = sticky_density(s + t, x, y, rho)?;
        rows.push(check(
            format!("chapman-kolmogorov s={s} t={t} x={x} y={y}"),
            (lhs - rhs).abs(),
            1e-6,
        ));
    }

    // scaling identity
    let mut scale_err = 0.0f64;
    for &c in &[0.25, 4.0] {
        let rc = c * 1.0f64;
        let rc = (rc as f64).sqrt();
        for &(t, x, y) in &[(1.0, 0.3, -0.8), (0.5, 1.1, 0.4)] {
            let lhs = sticky_density(c * t, x, y, rho)?;
            let rhs = sticky_density(t, x / rc, y / rc, rho / rc)? / rc;
            scale_err = scale_err.max((lhs - rhs).abs() / lhs.max(1.0));
            let la = sticky_atom_mass(c * t, x, rho)?;
            let ra = sticky_atom_mass(t, x / rc, rho / rc)?;
            scale_err = scale_err.max((la - ra).abs());
        }
    }
    rows.push(check("scaling identity", scale_err, 1e-12));

    // small-time limits at n in {1e2, 1e4, 1e6}
    let k_limit = 2.0 * (2.0 / std::f64::consts::PI).sqrt();
    let deficit_limit = crate::kernel::atom_deficit_limit(rho);
    for (n, tol) in [(100u64, 0.2), (10_000, 0.02), (1_000_000, 0.01)] {
        let fn0 = asymptotic_fn(AsymKind::F, n, 0.0, rho)?;
        let deficit = (n as f64).sqrt() * (1.0 - fn0);
        rows.push(check(
            format!("sqrt(n)(1-f_n(0)) n={n}"),
            (deficit - deficit_limit).abs() / deficit_limit,
            tol,
        ));
        let kf = |x: f64| asymptotic_fn(AsymKind::K, n, x, rho).unwrap_or(0.0);
        let mk = m_functional(&kf, n, rho, None)?.value;
        rows.push(check(
            format!("m(k_n) n={n}"),
            (mk - k_limit).abs() / k_limit,
            tol,
        ));
        let hf = |x: f64| asymptotic_fn(AsymKind::H, n, x, rho).unwrap_or(0.0);
        let mh = m_functional(&hf, n, rho, None)?.value;
        rows.push(check(
            format!("m(h_n) n={n}"),
            (mh - 1.0 / rho).abs() * rho,
            tol,
        ));
    }

    // hit probability stays a probability on a tuple sweep
    let mut bad = 0u64;
    let mut i = 0u64;
    'outer: for ti in 1..=10 {
        for xi in 0..40 {
            for yi in 0..40 {
                i += 1;
                if i > 10_000 {
                    break 'outer;
                }
                let t = ti as f64 * 0.2;
                let x = -2.0 + 0.1 * xi as f64 + 0.013;
                let y = -2.0 + 0.1 * yi as f64 + 0.029;
                let h = hit_probability(t, x, y, rho)?;
                if !(0.0..=1.0).contains(&h) {
                    bad += 1;
                }
            }
        }
    }
    rows.push(check("hit probability in [0,1]", bad as f64, 0.0));
    Ok(rows)
}

pub fn check_csv(rows: &[CheckRow]) -> String {
    let mut s = String::from("check,achieved,tolerance,pass\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{}\n",
            r.name,
            fmt_f64(r.achieved),
            fmt_f64(r.tolerance),
            u8::from(r.pass)
        ));
    }
    s
}

/// Turn failing check rows into a validation error (exit code 4 for check verbs).
pub fn checks_to_result(rows: &[CheckRow]) -> Result<()> {
    let violations: Vec<Violation> = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.pass)
        .map(|(i, r)| Violation {
            index: i,
            message: format!(
                "{}: achieved {} > tolerance {}",
                r.name, r.achieved, r.tolerance
            ),
        })
        .collect();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(violations))
    }
}

// ---------------------------------------------------------- reflection test

#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionReport {
    pub n_paths: u64,
    pub ks_statistic: f64,
    pub p_value: f64,
}

pub fn run_reflection_test(cfg: &RunConfig) -> Result<ReflectionReport> {
    let n_paths = cfg.u64_or("reflect.paths", 10_000)?;
    if n_paths == 0 {
        return Err(Error::Config("reflect.paths must be >= 1".into()));
    }
    let master = cfg.u64_or("mc.master_seed", 0)?;
    let model = model_from_config(cfg)?;
    if model.kind != ModelKind::StickyBm {
        return Err(Error::Config(
            "the reflection test runs on sticky Brownian motion".into(),
        ));
    }
    let grid = grid_from_config(cfg)?;
    let terminals: Vec<Result<(f64, f64)>> = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let mk = |seed| SimConfig {
                model: model.clone(),
                grid,
                method: SimMethod::KernelExact,
                refine: 1,
                seed,
            };
            let base = sample_path(&mk(replica_seed(master, 2 * i)))?;
            let fresh = sample_path(&mk(replica_seed(master, 2 * i + 1)))?;
            let reflected = reflect_at_first_hit(&base);
            Ok((
                *reflected.values.last().unwrap(),
                *fresh.values.last().unwrap(),
            ))
        })
        .collect();
    let mut reflected = Vec::with_capacity(n_paths as usize);
    let mut fresh = Vec::with_capacity(n_paths as usize);
    for r in terminals {
        let (a, b) = r?;
        reflected.push(a);
        fresh.push(b);
    }
    let ks = two_sample_ks(&reflected, &fresh)?;
    Ok(ReflectionReport {
        n_paths,
        ks_statistic: ks.statistic,
        p_value: ks.p_value,
    })
}

pub fn reflection_csv(r: &ReflectionReport) -> String {
    format!(
        "n_paths,ks_statistic,p_value\n{},{},{}\n",
        r.n_paths,
        fmt_f64(r.ks_statistic),
        fmt_f64(r.p_value)
    )
}

// ----------------------------------------------------- per-path CSV reports

/// Full statistics table of one path: one row per grid index.
pub fn stats_csv(path: &SamplePath) -> Result<String> {
    let c0 = crossings(path, 0)?;
    let c1 = crossings(path, 1)?;
    let c2 = crossings(path, 2)?;
    let b0 = bouncings(path, 0)?;
    let b1 = bouncings(path, 1)?;
    let b2 = bouncings(path, 2)?;
    let d1 = differences(path, 1)?;
    let d2 = differences(path, 2)?;
    let occ = occupation_stat(path, Region::Point(0.0))?;
    let mut s = String::from("k,t,C0,C1,C2,B0,B1,B2,D1,D2,OCC0\n");
    for k in 0..=path.intervals() {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            k,
            fmt_f64(path.grid.time(k)),
            c0.at(k),
            c1.at(k),
            c2.at(k),
            b0.at(k),
            b1.at(k),
            b2.at(k),
            d1.at(k),
            d2.at(k),
            occ.at(k),
        ));
    }
    Ok(s)
}

/// Single-row estimator report for one path.
pub fn estimate_csv(path: &SamplePath, spec: EstimatorSpec) -> Result<String> {
    let r = estimate_on_path(path, spec)?;
    Ok(format!(
        "method,value,hit,n,T,N1,N2\n{},{},{},{},{},{},{}\n",
        r.method,
        r.value.map(fmt_f64).unwrap_or_default(),
        u8::from(r.hit_event),
        path.grid.n(),
        fmt_f64(path.grid.horizon()),
        fmt_f64(r.n1),
        fmt_f64(r.n2),
    ))
}

// ----------------------------------------------------------- limit-law check

/// Empirical P(C0_{n,1} = 0) for sticky BM started at 0, by streaming replicas
/// that stop at the first strict sign change.
pub fn zero_crossing_survival(n: u64, replicas: u64, rho: f64, master_seed: u64) -> Result<f64> {
    if replicas == 0 {
        return Err(Error::Config("need at least one replica".into()));
    }
    let survived: u64 = (0..replicas)
        .into_par_iter()
        .map(|i| -> Result<u64> {
            let mut sampler = ExactSampler::new(1.0 / n as f64, rho, replica_seed(master_seed, i))?;
            let mut x = 0.0f64;
            for _ in 0..n {
                let (y, _) = sampler.step(x);
                if (x > 0.0 && y < 0.0) || (x < 0.0 && y > 0.0) {
                    return Ok(0);
                }
                x = y;
            }
            Ok(1)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(survived as f64 / replicas as f64)
}
