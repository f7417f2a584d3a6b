//! Sweep execution: analytic columns for every grid point and, optionally,
//! Monte Carlo estimates with their standard errors.

use rayon::prelude::*;
use tsnet_core::coverage::Analysis;
use tsnet_core::energy::EnergyLaw;
use tsnet_core::montecarlo::{
    CoverageConfig, Estimate, FadingSpec, MonteCarlo, SecondaryProfile, SimWindow,
};
use tsnet_core::{AccessResult, Error as CoreError, Network, QuadratureSpec, SystemParams};

use crate::config::{point_params, Axis, CouplingMode, Series, SimSettings, SweepKind, SweepSpec};
use crate::runner::Rayon;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    /// Add Monte Carlo columns. `coverage-rician` always simulates.
    pub simulate: bool,
    pub settings: SimSettings,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub series: String,
    /// Grid value in the axis unit.
    pub axis: f64,
    /// One value per entry of [`SweepTable::columns`].
    pub values: Vec<f64>,
    /// Problems met while computing the row, e.g. `nonconvergence`.
    pub flags: Vec<&'static str>,
}

impl SweepRow {
    pub fn status(&self) -> String {
        if self.flags.is_empty() {
            "ok".into()
        } else {
            self.flags.join("|")
        }
    }

    pub fn nonconverged(&self) -> bool {
        self.flags.contains(&"nonconvergence")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub kind: SweepKind,
    pub axis: String,
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn nonconverged_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.nonconverged()).count()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

#[derive(Debug, Default)]
struct Flags(Vec<&'static str>);

impl Flags {
    fn add(&mut self, e: &CoreError) {
        let tag = match e {
            CoreError::NonConvergence { .. } => "nonconvergence",
            CoreError::SecondaryUnpowered => "secondary-unpowered",
            CoreError::InvalidParameter { .. } => "invalid-parameter",
            CoreError::Domain { .. } => "domain",
            CoreError::MomentViolation { .. } => "moment-violation",
            CoreError::DegenerateDistribution { .. } => "degenerate",
        };
        if !self.0.contains(&tag) {
            self.0.push(tag);
        }
    }

    /// The value, or the best estimate of a non-converged one, or NaN.
    fn take(&mut self, r: tsnet_core::Result<f64>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.add(&e);
                match e {
                    CoreError::NonConvergence { estimate, .. } => estimate,
                    _ => f64::NAN,
                }
            }
        }
    }

    fn merge(&mut self, other: Flags) {
        for t in other.0 {
            if !self.0.contains(&t) {
                self.0.push(t);
            }
        }
    }
}

fn analytic_columns(kind: SweepKind) -> &'static [&'static str] {
    match kind {
        SweepKind::EnergyCoverage => &["pi_eps_analytic", "mean_energy_analytic", "p2_analytic"],
        SweepKind::TransmitProb => &[
            "pi_eps_analytic",
            "pi_rho_analytic",
            "pi_s_analytic",
            "lambda2_active_analytic",
        ],
        SweepKind::Coverage => &[
            "p2_analytic",
            "lambda2_active_analytic",
            "p1c_analytic",
            "p2c_analytic",
        ],
        SweepKind::CoverageRician => &[
            "p2_analytic",
            "lambda2_active_analytic",
            "p1c_rayleigh_analytic",
            "p2c_rayleigh_analytic",
        ],
        SweepKind::Throughput => &[
            "pi_s_analytic",
            "p1c_analytic",
            "p2c_analytic",
            "t1_analytic",
            "t2_analytic",
        ],
        SweepKind::Meta => &[
            "m1_primary_analytic",
            "m2_primary_analytic",
            "f1_analytic",
            "m1_secondary_analytic",
            "m2_secondary_analytic",
            "f2_analytic",
        ],
        SweepKind::Validate => &[],
    }
}

fn mc_columns(kind: SweepKind) -> &'static [&'static str] {
    match kind {
        SweepKind::EnergyCoverage => &["pi_eps_mc", "pi_eps_stderr"],
        SweepKind::TransmitProb => &[
            "pi_eps_mc",
            "pi_eps_stderr",
            "pi_rho_mc",
            "pi_rho_stderr",
            "pi_s_mc",
            "pi_s_stderr",
        ],
        SweepKind::Coverage | SweepKind::CoverageRician => {
            &["p1c_mc", "p1c_stderr", "p2c_mc", "p2c_stderr"]
        }
        SweepKind::Throughput => &["t1_mc", "t1_stderr", "t2_mc", "t2_stderr"],
        SweepKind::Meta => &["f1_mc", "f1_stderr", "f2_mc", "f2_stderr"],
        SweepKind::Validate => &[],
    }
}

fn quad() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn analytic(kind: SweepKind, p: &SystemParams, x: f64, flags: &mut Flags) -> Vec<f64> {
    let n = analytic_columns(kind).len();
    if matches!(kind, SweepKind::EnergyCoverage | SweepKind::TransmitProb) {
        let law = EnergyLaw::new(*p, quad());
        let (pi_eps, p2) = match law.profile() {
            Ok(prof) => (prof.pi_eps, prof.p2),
            Err(e) => {
                flags.add(&e);
                (flags.take(law.energy_ccdf(p.epsilon)), f64::NAN)
            }
        };
        if kind == SweepKind::EnergyCoverage {
            return vec![pi_eps, law.mean_harvested_energy(), p2];
        }
        let a = AccessResult::from_energy_coverage(p, pi_eps);
        return vec![a.pi_eps, a.pi_rho, a.pi_s, a.lambda2_active];
    }
    let a = match Analysis::run(*p, quad()) {
        Ok(a) => a,
        Err(e) => {
            flags.add(&e);
            return vec![f64::NAN; n];
        }
    };
    let link = &a.link;
    let mut cov = |net| flags.take(link.coverage_prob(p.zeta, net));
    match kind {
        SweepKind::Coverage | SweepKind::CoverageRician => {
            let (c1, c2) = (cov(Network::Primary), cov(Network::Secondary));
            vec![a.link.p2(), a.link.lambda2_active(), c1, c2]
        }
        SweepKind::Throughput => {
            let (c1, c2) = (cov(Network::Primary), cov(Network::Secondary));
            let t1 = flags.take(link.spatial_throughput(p.zeta, Network::Primary));
            let t2 = flags.take(link.spatial_throughput(p.zeta, Network::Secondary));
            vec![a.access.pi_s, c1, c2, t1, t2]
        }
        SweepKind::Meta => {
            let mut out = Vec::with_capacity(n);
            for net in Network::BOTH {
                match link.conditional_moments(p.zeta, net) {
                    Ok(m) => {
                        out.push(m.m1);
                        out.push(m.m2);
                        out.push(flags.take(tsnet_core::meta::meta_from_moments(x, &m)));
                    }
                    Err(e) => {
                        flags.add(&e);
                        out.extend([f64::NAN; 3]);
                    }
                }
            }
            out
        }
        _ => unreachable!("handled above"),
    }
}

/// Grid point of one series.
struct Point<'a> {
    series: &'a Series,
    value: f64,
    params: tsnet_core::Result<SystemParams>,
}

impl Point<'_> {
    /// Meta-distribution threshold, if the axis is `x`.
    fn x(&self, axis: &Axis) -> f64 {
        match axis {
            Axis::X => self.value,
            Axis::Param(_) => f64::NAN,
        }
    }
}

fn coverage_config(
    series: &Series,
    analysis: &Analysis,
    s: &SimSettings,
) -> tsnet_core::Result<CoverageConfig> {
    let mut cfg = CoverageConfig::rayleigh(SecondaryProfile::from(&analysis.link))
        .with_interferers(series.interferers);
    if let Some(k) = series.k_factor {
        cfg = cfg.with_desired(FadingSpec::rician(k)?);
    }
    if let CouplingMode::Coupled(mode) = s.coupling {
        cfg = cfg.coupled(mode, s.harvest_radius);
    }
    Ok(cfg)
}

fn push_estimate(out: &mut Vec<f64>, e: tsnet_core::Result<Estimate>, flags: &mut Flags) {
    match e {
        Ok(e) => out.extend([e.mean, e.stderr]),
        Err(e) => {
            flags.add(&e);
            out.extend([f64::NAN; 2]);
        }
    }
}

fn bernoulli(p: f64, n: usize) -> [f64; 2] {
    [p, (p * (1.0 - p) / n as f64).sqrt()]
}

/// Whether every point of a series can share one simulation run.
fn batched(kind: SweepKind, axis: &Axis) -> bool {
    match kind {
        SweepKind::EnergyCoverage => matches!(axis.field(), Some("epsilon" | "e_sat")),
        SweepKind::Coverage | SweepKind::CoverageRician => axis.field() == Some("zeta"),
        SweepKind::Meta => true,
        _ => false,
    }
}

/// Monte Carlo columns for the points of one series that share a run.
fn simulate_batch(
    kind: SweepKind,
    axis: &Axis,
    points: &[&Point],
    s: &SimSettings,
) -> Vec<(Vec<f64>, Flags)> {
    let width = mc_columns(kind).len();
    let first = points[0];
    let Ok(p) = first.params.as_ref() else {
        return points
            .iter()
            .map(|_| (vec![f64::NAN; width], Flags::default()))
            .collect();
    };
    let fail = |e: CoreError| {
        points
            .iter()
            .map(|_| {
                let mut f = Flags::default();
                f.add(&e);
                (vec![f64::NAN; width], f)
            })
            .collect::<Vec<_>>()
    };
    match kind {
        SweepKind::EnergyCoverage => {
            let w = match SimWindow::energy(p, s.disk_radius, s.replicates, s.seed) {
                Ok(w) => w,
                Err(e) => return fail(e),
            };
            let draws = MonteCarlo::with_runner(*p, w, Rayon).simulate_energy(s.samples);
            points
                .iter()
                .map(|pt| {
                    let eps = pt.params.as_ref().map(|q| q.epsilon).unwrap_or(f64::NAN);
                    let hits = draws.iter().filter(|&&e| e > eps).count();
                    let frac = hits as f64 / draws.len() as f64;
                    (bernoulli(frac, draws.len()).to_vec(), Flags::default())
                })
                .collect()
        }
        SweepKind::Coverage | SweepKind::CoverageRician | SweepKind::Meta => {
            let analysis = match Analysis::run(*p, quad()) {
                Ok(a) => a,
                Err(e) => return fail(e),
            };
            let cfg = match coverage_config(first.series, &analysis, s) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            let w = match SimWindow::coverage(p, s.disk_radius, s.replicates, s.seed) {
                Ok(w) => w,
                Err(e) => return fail(e),
            };
            let mc = MonteCarlo::with_runner(*p, w, Rayon);
            let mut out: Vec<(Vec<f64>, Flags)> = points
                .iter()
                .map(|_| (Vec::with_capacity(width), Flags::default()))
                .collect();
            if kind == SweepKind::Meta {
                let n_fading = if cfg.desired.is_rayleigh() {
                    0
                } else {
                    s.n_fading
                };
                for net in Network::BOTH {
                    match mc.simulate_meta(p.zeta, net, s.samples, n_fading, &cfg) {
                        Ok(emp) => {
                            for ((vals, _), pt) in out.iter_mut().zip(points) {
                                vals.extend(bernoulli(emp.ccdf(pt.x(axis)), emp.len()));
                            }
                        }
                        Err(e) => {
                            for (vals, flags) in &mut out {
                                flags.add(&e);
                                vals.extend([f64::NAN; 2]);
                            }
                        }
                    }
                }
                return out;
            }
            let zetas: Vec<f64> = points
                .iter()
                .map(|pt| pt.params.as_ref().map(|q| q.zeta).unwrap_or(f64::NAN))
                .collect();
            for net in Network::BOTH {
                match mc.simulate_coverage_curve(&zetas, net, s.samples, &cfg) {
                    Ok(curve) => {
                        for ((vals, flags), e) in out.iter_mut().zip(curve) {
                            push_estimate(vals, Ok(e), flags);
                        }
                    }
                    Err(e) => {
                        for (vals, flags) in &mut out {
                            push_estimate(vals, Err(e.clone()), flags);
                        }
                    }
                }
            }
            out
        }
        _ => unreachable!("not batched"),
    }
}

fn simulate_point(kind: SweepKind, pt: &Point, s: &SimSettings) -> (Vec<f64>, Flags) {
    let width = mc_columns(kind).len();
    let mut flags = Flags::default();
    let p = match &pt.params {
        Ok(p) => p,
        Err(e) => {
            flags.add(e);
            return (vec![f64::NAN; width], flags);
        }
    };
    let mut out = Vec::with_capacity(width);
    match kind {
        SweepKind::TransmitProb => {
            match SimWindow::energy(p, s.disk_radius, s.replicates, s.seed) {
                Ok(w) => {
                    let est = MonteCarlo::with_runner(*p, w, Rayon).simulate_access(s.samples);
                    for e in [est.energy, est.void, est.joint] {
                        out.extend([e.mean, e.stderr]);
                    }
                }
                Err(e) => {
                    flags.add(&e);
                    out = vec![f64::NAN; width];
                }
            }
        }
        SweepKind::Throughput => {
            let run = || -> tsnet_core::Result<(Analysis, CoverageConfig, SimWindow)> {
                let a = Analysis::run(*p, quad())?;
                let cfg = coverage_config(pt.series, &a, s)?;
                let w = SimWindow::coverage(p, s.disk_radius, s.replicates, s.seed)?;
                Ok((a, cfg, w))
            };
            match run() {
                Ok((a, cfg, w)) => {
                    let mc = MonteCarlo::with_runner(*p, w, Rayon);
                    let rate = a.link.rate_at(p.zeta);
                    for net in Network::BOTH {
                        let scale = p.t_i * rate * a.link.interferers(net).0;
                        let e =
                            mc.simulate_coverage(p.zeta, net, s.samples, &cfg)
                                .map(|e| Estimate {
                                    mean: scale * e.mean,
                                    stderr: scale * e.stderr,
                                    samples: e.samples,
                                });
                        push_estimate(&mut out, e, &mut flags);
                    }
                }
                Err(e) => {
                    flags.add(&e);
                    out = vec![f64::NAN; width];
                }
            }
        }
        _ => {
            let (vals, f) = simulate_batch(kind, &Axis::X, &[pt], s).remove(0);
            return (vals, f);
        }
    }
    (out, flags)
}

/// Evaluate every grid point of every series. Rows are ordered by series,
/// then by grid value, whatever order the workers finish in.
pub fn run_sweep(spec: &SweepSpec, base: &SystemParams, opts: &RunOptions) -> SweepTable {
    let kind = spec.kind;
    let simulate = opts.simulate || kind == SweepKind::CoverageRician;
    let mut columns: Vec<String> = analytic_columns(kind)
        .iter()
        .map(|c| c.to_string())
        .collect();
    if simulate {
        columns.extend(mc_columns(kind).iter().map(|c| c.to_string()));
    }
    let points: Vec<Point> = spec
        .series
        .iter()
        .flat_map(|series| {
            spec.grid.iter().map(move |&value| Point {
                series,
                value,
                params: point_params(base, &spec.axis, value, series),
            })
        })
        .collect();

    let mut rows: Vec<(Vec<f64>, Flags)> = points
        .par_iter()
        .map(|pt| {
            let mut flags = Flags::default();
            let vals = match &pt.params {
                Ok(p) => analytic(kind, p, pt.x(&spec.axis), &mut flags),
                Err(e) => {
                    flags.add(e);
                    vec![f64::NAN; analytic_columns(kind).len()]
                }
            };
            (vals, flags)
        })
        .collect();

    if simulate {
        let sims: Vec<(Vec<f64>, Flags)> = if batched(kind, &spec.axis) {
            let per_series = spec.grid.len();
            let groups: Vec<Vec<&Point>> = points
                .chunks(per_series)
                .map(|c| c.iter().collect())
                .collect();
            groups
                .par_iter()
                .map(|g| simulate_batch(kind, &spec.axis, g, &opts.settings))
                .collect::<Vec<_>>()
                .into_iter()
                .flatten()
                .collect()
        } else {
            points
                .par_iter()
                .map(|pt| simulate_point(kind, pt, &opts.settings))
                .collect()
        };
        for ((vals, flags), (extra, more)) in rows.iter_mut().zip(sims) {
            vals.extend(extra);
            flags.merge(more);
        }
    }

    SweepTable {
        kind,
        axis: spec.axis.name(),
        columns,
        rows: points
            .iter()
            .zip(rows)
            .map(|(pt, (values, flags))| SweepRow {
                series: pt.series.label.clone(),
                axis: pt.value,
                values,
                flags: flags.0,
            })
            .collect(),
    }
}
