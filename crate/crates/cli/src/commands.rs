//! One function per subcommand.

use crate::cache;
use crate::config::{AlphaSpec, CoeffRule, ExperimentConfig, Format};
use crate::error::CliError;
use crate::manifest::{self, Run};
use crate::table::Table;
use distal_core::confrac::dyadic::Dyadic;
use distal_core::confrac::{build_liouville_alpha, value_interval, PartialQuotients};
use distal_core::correlation::{self, decay_fit, CorrelationSeries, DecayFit};
use distal_core::flows::{
    irregularity_scan, skew_orbit, tower_diagnostic, truncation_cutoff, CertifiedRotation, Fiber, PrecisionMode,
    Rotation,
};
use distal_core::sieve::{mertens, MobiusTable};
use distal_core::{Complex64, FurstenbergCocycle64, SkewProductMap64};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::path::Path;
use std::sync::Arc;

pub fn load_alpha(cfg: &ExperimentConfig) -> Result<PartialQuotients, CliError> {
    match &cfg.alpha {
        AlphaSpec::Liouville => Ok(build_liouville_alpha(cfg.q_cap)?),
        AlphaSpec::Golden { len } => Ok(PartialQuotients::golden(*len)),
        AlphaSpec::File { path } => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            Ok(PartialQuotients::from_text(&text)?)
        }
    }
}

fn rotation(cfg: &ExperimentConfig, run: &mut Run) -> Result<Arc<CertifiedRotation>, CliError> {
    let pq = load_alpha(cfg)?;
    let rot = run.stage("alpha", || CertifiedRotation::new(pq, cfg.precision_bits))?;
    run.precision("precision_bits", rot.precision_bits());
    run.precision("alpha_source", rot.alpha().source().name());
    run.precision("quotients", rot.alpha().len());
    run.precision("certified_k", rot.k_support());
    run.precision("phase_eps", rot.eps());
    let q: Vec<String> = rot.denominators().iter().map(BigInt::to_string).collect();
    run.precision("q", q);
    let d: Vec<f64> = (1..=rot.k_support()).map(|k| rot.delta_f64(k)).collect();
    run.precision("delta", d);
    Ok(Arc::new(rot))
}

fn cocycle(cfg: &ExperimentConfig, rot: Arc<CertifiedRotation>) -> Result<FurstenbergCocycle64, CliError> {
    Ok(match &cfg.coeff_rule {
        CoeffRule::Furstenberg => FurstenbergCocycle64::furstenberg(rot),
        CoeffRule::Constant => FurstenbergCocycle64::constant(rot, cfg.c_bound)?,
        CoeffRule::Zero => FurstenbergCocycle64::zero(rot),
        CoeffRule::File { path } => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            let c = text
                .lines()
                .map(|l| l.split('#').next().unwrap_or("").trim())
                .filter(|l| !l.is_empty())
                .map(|l| l.parse::<f64>().map_err(|_| CliError::Config(format!("bad coefficient '{l}'"))))
                .collect::<Result<Vec<_>, _>>()?;
            FurstenbergCocycle64::new(rot, c, cfg.c_bound)?
        }
    })
}

fn table(cfg: &ExperimentConfig, run: &mut Run, rebuild: bool) -> Result<MobiusTable, CliError> {
    let loaded = run.stage("sieve", || cache::load_or_build(&cfg.cache_dir, cfg.kind, cfg.n_max, rebuild))?;
    run.cache(loaded.hit);
    run.input(&loaded.path, &loaded.sha256)?;
    Ok(loaded.table)
}

fn series_table(series: &CorrelationSeries<f64>) -> Table {
    let mut t = Table::new(&["N", "re_S", "im_S", "abs_S", "abs_S_over_N"]);
    for &(n, v) in series.entries() {
        let abs = v.norm();
        t.push(vec![n.into(), v.re.into(), v.im.into(), abs.into(), (abs / n as f64).into()]);
    }
    t
}

pub fn sieve(cfg: &ExperimentConfig, run: &mut Run, rebuild: bool) -> Result<(), CliError> {
    let tab = table(cfg, run, rebuild)?;
    let mut checkpoints = cfg.grid.clone();
    checkpoints.push(cfg.n_max);
    let m = run.stage("mertens", || mertens(&tab, &checkpoints))?;
    let mut t = Table::new(&["N", "M"]);
    for &n in &cfg.grid {
        t.push(vec![n.into(), m.at(n).expect("checkpoint present").into()]);
    }
    run.result("kind", cfg.kind.name());
    run.result("n_max", cfg.n_max);
    run.result("mertens_n_max", m.at(cfg.n_max).expect("checkpoint present"));
    run.emit(&t.render(cfg.format))
}

pub fn alpha(cfg: &ExperimentConfig, run: &mut Run, golden: Option<usize>) -> Result<(), CliError> {
    let pq = match golden {
        Some(0) => return Err(CliError::Config("--golden needs a positive length".into())),
        Some(len) => PartialQuotients::golden(len),
        None => load_alpha(cfg)?,
    };
    let q: Vec<String> = pq.denominators().iter().map(BigInt::to_string).collect();
    run.result("source", pq.source().name());
    run.result("len", pq.len());
    run.result("q", q);
    run.emit(&pq.to_text())
}

/// Decimal digits of `α` on which both ends of its enclosure agree.
fn certified_decimal(pq: &PartialQuotients, digits: usize, precision_bits: u64) -> String {
    let bits = precision_bits.max((digits as f64 * 3.33) as u64 + 16);
    let iv = value_interval(pq, bits);
    let scale = BigInt::from(10u8).pow(digits as u32);
    let render = |x: &Dyadic| {
        let f = Dyadic::new(x.mantissa() * &scale, x.exponent()).floor();
        let (int, frac) = (&f / &scale, &f % &scale);
        format!("{int}.{:0>width$}", frac.to_string(), width = digits)
    };
    let (lo, hi) = (render(&iv.lo), render(&iv.hi));
    let common = lo.bytes().zip(hi.bytes()).take_while(|(a, b)| a == b).count();
    let s = &lo[..common];
    s.strip_suffix('.').unwrap_or(s).to_string()
}

pub fn cf(cfg: &ExperimentConfig, run: &mut Run, value: Option<usize>) -> Result<(), CliError> {
    if let Some(digits) = value {
        let pq = load_alpha(cfg)?;
        let s = run.stage("expand", || certified_decimal(&pq, digits, cfg.precision_bits));
        let certified = s.split_once('.').map_or(0, |(_, f)| f.len());
        run.result("requested_digits", digits);
        run.result("certified_digits", certified);
        return run.emit(&format!("{s}\n"));
    }
    let rot = rotation(cfg, run)?;
    let mut t = Table::new(&["k", "a_k", "l_k", "q_k", "delta_k"]);
    for c in rot.alpha().all_convergents() {
        let a = rot.alpha().quotients()[c.k].to_string();
        let delta = (c.k >= 1 && c.k <= rot.k_support()).then(|| rot.delta_f64(c.k));
        t.push(vec![c.k.into(), a.into(), c.l.to_string().into(), c.q.to_string().into(), delta.into()]);
    }
    run.emit(&t.render(cfg.format))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum FiberKind {
    Zero,
    Cocycle,
}

pub struct OrbitArgs {
    pub steps: u64,
    pub x0: f64,
    pub y0: f64,
    pub mode: PrecisionMode,
    pub fiber: FiberKind,
    pub truncation: Option<usize>,
    pub average: Option<(i64, i64)>,
}

pub fn orbit(cfg: &ExperimentConfig, run: &mut Run, args: &OrbitArgs) -> Result<(), CliError> {
    let rot = rotation(cfg, run)?;
    let horizon = args.average.map_or(args.steps, |_| *cfg.grid.last().expect("grid is non-empty"));
    let map = match args.fiber {
        FiberKind::Zero => SkewProductMap64::new(1, 0, 1, Rotation::Certified(rot.clone()), Fiber::Zero)?,
        FiberKind::Cocycle => {
            let k = match args.truncation {
                Some(k) => k,
                None => truncation_cutoff(rot.denominators(), horizon.max(1))?,
            };
            run.result("truncation", k);
            SkewProductMap64::furstenberg(Arc::new(cocycle(cfg, rot.clone())?), k)?
        }
    };
    if let Some((m1, m2)) = args.average {
        let report = run.stage("orbit", || irregularity_scan(&map, (m1, m2), (args.x0, args.y0), &cfg.grid, args.mode))?;
        let mut t = Table::new(&["N", "re_avg", "im_avg"]);
        for &(n, v) in &report.averages {
            t.push(vec![n.into(), v.re.into(), v.im.into()]);
        }
        run.result("observable", [m1, m2]);
        run.result("min_abs", report.min_abs);
        run.result("max_abs", report.max_abs);
        run.result("oscillation", report.oscillation);
        run.result("generic", report.generic);
        return run.emit(&t.render(cfg.format));
    }
    let steps = usize::try_from(args.steps).map_err(|_| CliError::Config("steps too large".into()))?;
    let orbit = run.stage("orbit", || skew_orbit(&map, (args.x0, args.y0), steps, args.mode))?;
    let mut t = Table::new(&["n", "x", "y"]);
    for (n, &(x, y)) in orbit.points.iter().enumerate() {
        t.push(vec![n.into(), x.into(), y.into()]);
    }
    run.result("generic", orbit.generic);
    run.emit(&t.render(cfg.format))
}

pub fn cocycle_cmd(cfg: &ExperimentConfig, run: &mut Run) -> Result<(), CliError> {
    let rot = rotation(cfg, run)?;
    let c = cocycle(cfg, rot.clone())?;
    let mut t = Table::new(&["N", "K", "naive", "telescoped", "abs_diff"]);
    let mut worst = 0.0f64;
    run.stage("cocycle", || -> Result<(), CliError> {
        for &n in &cfg.grid {
            let k = truncation_cutoff(rot.denominators(), n)?.min(c.k_support());
            let naive = c.cocycle_sum_naive(n, k)?;
            let tele = c.cocycle_sum_telescoped(n, k)?;
            let diff = (naive - tele).abs();
            worst = worst.max(diff);
            t.push(vec![n.into(), k.into(), naive.into(), tele.into(), diff.into()]);
        }
        Ok(())
    })?;
    run.result("max_abs_diff", worst);
    run.emit(&t.render(cfg.format))
}

pub fn correlate(cfg: &ExperimentConfig, run: &mut Run, rebuild: bool) -> Result<(), CliError> {
    let rot = rotation(cfg, run)?;
    let c = cocycle(cfg, rot.clone())?;
    let tab = table(cfg, run, rebuild)?;
    let series = run.stage("correlate", || correlation::furstenberg_s(&c, &tab, &cfg.grid))?;
    let mut tilde = Vec::new();
    let mut towers = Vec::new();
    let mut bounds = Vec::new();
    run.stage("diagnostics", || -> Result<(), CliError> {
        for &(n, s) in series.entries() {
            let k = truncation_cutoff(rot.denominators(), n)?;
            let st = correlation::s_tilde(&c, &tab, n)?;
            let dk = if k <= rot.k_support() { rot.delta_f64(k).abs() } else { f64::NAN };
            let rounding = 64.0 * f64::EPSILON * n as f64;
            let bound = 8.0 * std::f64::consts::PI.powi(2) * c.bound() * dk * (n as f64).powi(2) + rounding;
            tilde.push(json!({
                "N": n,
                "K": k,
                "abs_s_tilde": st.norm(),
                "abs_gap": (s.norm() - st.norm()).abs(),
                "gap_bound": bound,
            }));
            let tw = tower_diagnostic(rot.denominators(), n)?;
            towers.push(json!({ "N": n, "K": tw.k, "tower": tw.tower, "two_log_n": tw.two_log_n, "holds": tw.holds }));
            bounds.push(correlation::constant_bound_diagnostic(c.bound(), k, n));
        }
        Ok(())
    })?;
    run.result("meta", series.meta());
    run.result("abs_s_over_n", series.normalized());
    let decreasing = series.normalized().windows(2).all(|w| w[1] < w[0]);
    run.result("strictly_decreasing", decreasing);
    run.result("s_tilde", tilde);
    run.result("tower", towers);
    run.result("constant_bound", bounds);
    run.emit(&series_table(&series).render(cfg.format))?;
    match decay_fit(&series) {
        Ok(fit) => {
            run.emit_sibling(".fit.json", &fit_json(&fit))?;
            run.result("fit", &fit);
        }
        Err(e) => run.result("fit_error", e.to_string()),
    }
    Ok(())
}

fn fit_json(fit: &DecayFit) -> String {
    let mut s = serde_json::to_string_pretty(fit).expect("fit serializes");
    s.push('\n');
    s
}

pub enum DavenportMode {
    Theta(f64),
    Multi(Vec<(i64, f64)>),
    Sup(u64),
    Random(usize),
}

pub fn davenport(cfg: &ExperimentConfig, run: &mut Run, mode: DavenportMode, rebuild: bool) -> Result<(), CliError> {
    let tab = table(cfg, run, rebuild)?;
    let t = run.stage("davenport", || -> Result<Table, CliError> {
        match &mode {
            DavenportMode::Theta(theta) => {
                let entries = cfg
                    .grid
                    .iter()
                    .map(|&n| Ok((n, correlation::davenport_sum(&tab, *theta, n)?)))
                    .collect::<Result<Vec<(u64, Complex64)>, CliError>>()?;
                Ok(series_table(&CorrelationSeries::new(entries, "davenport")?))
            }
            DavenportMode::Multi(pairs) => {
                let (l, th): (Vec<i64>, Vec<f64>) = pairs.iter().copied().unzip();
                let entries = cfg
                    .grid
                    .iter()
                    .map(|&n| Ok((n, correlation::multifreq_davenport(&tab, &l, &th, n)?)))
                    .collect::<Result<Vec<(u64, Complex64)>, CliError>>()?;
                Ok(series_table(&CorrelationSeries::new(entries, "multifrequency davenport")?))
            }
            DavenportMode::Sup(g) => {
                let mut t = Table::new(&["N", "grid_count", "index", "theta", "abs_S", "abs_S_over_N"]);
                for &n in &cfg.grid {
                    let p = correlation::sup_davenport::<f64>(&tab, n, *g)?;
                    t.push(vec![
                        n.into(),
                        g.to_owned().into(),
                        p.index.into(),
                        p.theta.into(),
                        p.value.norm().into(),
                        p.normalized(n).into(),
                    ]);
                }
                Ok(t)
            }
            DavenportMode::Random(count) => {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                let mut t = Table::new(&["sample", "theta", "N", "re_S", "im_S", "abs_S", "abs_S_over_N"]);
                for i in 0..*count {
                    let theta: f64 = rng.gen();
                    for &n in &cfg.grid {
                        let v = correlation::davenport_sum(&tab, theta, n)?;
                        let abs = v.norm();
                        t.push(vec![
                            i.into(),
                            theta.into(),
                            n.into(),
                            v.re.into(),
                            v.im.into(),
                            abs.into(),
                            (abs / n as f64).into(),
                        ]);
                    }
                }
                Ok(t)
            }
        }
    })?;
    run.emit(&t.render(cfg.format))
}

pub fn phi(cfg: &ExperimentConfig, run: &mut Run, c1: f64, l_max: i64, nodes: usize) -> Result<(), CliError> {
    if !c1.is_finite() || l_max < 0 {
        return Err(CliError::Config("need finite c1 and non-negative l_max".into()));
    }
    let mut t = Table::new(&["l", "re_a", "im_a", "abs_a", "quad_error", "oracle_abs_err", "bound_ratio"]);
    let mut worst = 0.0f64;
    let mut worst_ratio = 0.0f64;
    run.stage("phi", || -> Result<(), CliError> {
        for l in -l_max..=l_max {
            let a = correlation::phi_fourier_coeff(c1, l, nodes)?;
            let err = (a.value - correlation::phi_bessel_reference(c1, l)).norm();
            let ratio = (l != 0).then(|| a.value.norm() / correlation::phi_coefficient_bound(c1, l));
            worst = worst.max(err);
            worst_ratio = worst_ratio.max(ratio.unwrap_or(0.0));
            t.push(vec![
                l.into(),
                a.value.re.into(),
                a.value.im.into(),
                a.value.norm().into(),
                a.quad_error.into(),
                err.into(),
                ratio.into(),
            ]);
        }
        Ok(())
    })?;
    run.result("c1", c1);
    run.result("nodes", nodes);
    run.result("max_oracle_abs_err", worst);
    run.result("max_bound_ratio", worst_ratio);
    run.emit(&t.render(cfg.format))
}

/// Reads a series CSV with columns `N` and either `re_S, im_S` or `abs_S`.
pub fn read_series_csv(path: &Path) -> Result<CorrelationSeries<f64>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines.next().unwrap_or("").split(',').map(str::trim).collect();
    let col = |name: &str| header.iter().position(|h| *h == name);
    let n_col = col("N").ok_or_else(|| CliError::Config("input has no N column".into()))?;
    let (re, im, abs) = (col("re_S"), col("im_S"), col("abs_S"));
    if (re.is_none() || im.is_none()) && abs.is_none() {
        return Err(CliError::Config("input needs re_S and im_S, or abs_S".into()));
    }
    let mut entries = Vec::new();
    for (i, line) in lines.enumerate() {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        let num = |j: usize| -> Result<f64, CliError> {
            f.get(j)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| CliError::Config(format!("row {}: bad number", i + 2)))
        };
        let n = f
            .get(n_col)
            .and_then(|s| crate::config::parse_count("N", s).ok())
            .ok_or_else(|| CliError::Config(format!("row {}: bad N", i + 2)))?;
        let v = match (re, im) {
            (Some(r), Some(m)) => Complex64::new(num(r)?, num(m)?),
            _ => Complex64::new(num(abs.expect("checked above"))?, 0.0),
        };
        entries.push((n, v));
    }
    Ok(CorrelationSeries::new(entries, format!("read from {}", path.display()))?)
}

pub fn fit(cfg: &ExperimentConfig, run: &mut Run, input: &Path) -> Result<(), CliError> {
    let series = read_series_csv(input)?;
    let fit = run.stage("fit", || decay_fit(&series))?;
    run.result("fit", &fit);
    if cfg.format == Format::Csv {
        let mut t = Table::new(&["a_hat", "scale", "residual_rms", "n_min", "n_max"]);
        t.push(vec![fit.a_hat.into(), fit.scale.into(), fit.residual_rms.into(), fit.n_min.into(), fit.n_max.into()]);
        run.emit(&t.to_csv())
    } else {
        run.emit(&fit_json(&fit))
    }
}

pub fn verify(path: &Path) -> Result<(), CliError> {
    let v = manifest::verify(path)?;
    for m in &v.mismatched {
        eprintln!("mismatch: {m}");
    }
    if !v.mismatched.is_empty() {
        return Err(CliError::Checksum(format!("{} of {} files differ", v.mismatched.len(), v.checked)));
    }
    println!("ok: {} files verified", v.checked);
    Ok(())
}

/// `m1,m2` as an observable `e(m₁x + m₂y)`.
pub fn parse_observable(s: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::Config(format!("invalid observable '{s}', expected m1,m2"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

/// `l1:θ1,l2:θ2,…`.
pub fn parse_multi(s: &str) -> Result<Vec<(i64, f64)>, CliError> {
    let bad = || CliError::Config(format!("invalid frequency list '{s}', expected l1:theta1,l2:theta2"));
    let pairs = s
        .split(',')
        .map(|p| {
            let (l, th) = p.split_once(':').ok_or_else(bad)?;
            Ok((l.trim().parse().map_err(|_| bad())?, th.trim().parse().map_err(|_| bad())?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    if pairs.is_empty() {
        return Err(bad());
    }
    Ok(pairs)
}
