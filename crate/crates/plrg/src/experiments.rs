//! The experiment drivers. Each one turns a configuration into CSV rows,
//! optional auxiliary tables and plots, and the threshold checks used by
//! `--check`.

use crate::config::{Experiment, ExperimentConfig};
use crate::error::HarnessError;
use crate::formats::{covariance_rows, write_fluctuation_csv};
use crate::plot::PlotData;
use crate::report::{Report, Row};
use plrg_core::bernoulli::{lone_clique_follower_stats, mc_empty_graph, mc_nonisolated_given_no_clique, RowMode, FULL_BUILD_LIMIT};
use plrg_core::dist::{classify_log_rule, mean_clique_size, scaling_a_n};
use plrg_core::exec::Executor;
use plrg_core::graphex::{critical_clique_pmf, graphex_clique_pmf};
use plrg_core::graphon::clique_stretch_mismatch;
use plrg_core::height::{boundary_profile, fluctuation_summary, HeightMode};
use plrg_core::rng::{derive_seed, label_key};
use plrg_core::stats::{
    binomial_clique_probabilities, expected_edges, expected_edges_mc, expected_vertices, expected_vertices_mc,
    motif_mc_with, slope, supercritical_clique_stats, CountMode, MotifEvent, MotifMethod,
};
use plrg_core::TailModel;

/// Seed for the replicates of `experiment` at size `n`.
pub fn sub_seed(seed: u64, experiment: Experiment, n: u64) -> u64 {
    derive_seed(derive_seed(seed, label_key(experiment.name())), n)
}

/// Largest pmf index tabulated by the graphex experiment.
const PMF_MAX: u64 = 5;
/// Indices checked against the Poisson limit.
const PMF_CHECKED: u64 = 3;

pub fn execute<E: Executor + ?Sized>(config: &ExperimentConfig, exec: &E) -> Result<Report, HarnessError> {
    let mut report = Report::default();
    for &n in &config.n_list {
        report.sub_seeds.push(crate::report::SubSeed {
            n,
            seed: sub_seed(config.seed, config.experiment, n),
        });
    }
    match config.experiment {
        Experiment::Motifs => motifs(config, exec, &mut report)?,
        Experiment::EdgesVertices => edges_vertices(config, exec, &mut report)?,
        Experiment::Supercritical => supercritical(config, exec, &mut report)?,
        Experiment::Graphex => graphex(config, exec, &mut report)?,
        Experiment::Height => height(config, exec, &mut report)?,
        Experiment::Graphon => graphon(config, exec, &mut report)?,
        Experiment::Bernoulli => bernoulli(config, exec, &mut report)?,
        Experiment::Regimes => regimes(config, &mut report)?,
    }
    Ok(report)
}

fn params(c: &ExperimentConfig) -> impl Iterator<Item = (f64, f64, u64)> + '_ {
    c.alpha.iter().flat_map(move |&a| {
        c.gamma
            .iter()
            .flat_map(move |&g| c.n_list.iter().map(move |&n| (a, g, n)))
    })
}

fn motifs<E: Executor + ?Sized>(c: &ExperimentConfig, exec: &E, r: &mut Report) -> Result<(), HarnessError> {
    let name = c.experiment.name();
    for (alpha, gamma, n) in params(c) {
        let seed = sub_seed(c.seed, c.experiment, n);
        let mut path = None;
        let mut triangle = None;
        for event in MotifEvent::ALL {
            let e = motif_mc_with(exec, MotifMethod::Conditioned, event, alpha, gamma, n, c.reps, seed)?;
            r.rows.push(Row::new(name, event.name(), alpha, gamma, n, c.reps, e.mc_mean, e.mc_se, e.asymptote));
            match event {
                MotifEvent::Path2 => path = Some(e),
                MotifEvent::Triangle => triangle = Some(e),
                _ => {}
            }
        }
        if let (Some(p), Some(t)) = (path, triangle) {
            if gamma > 1.0 && gamma < 2.0 {
                let ok = t.mc_mean < 0.2 * p.mc_mean && p.mc_se < 0.1 * p.mc_mean && t.mc_se < 0.1 * p.mc_mean;
                r.check(
                    format!("triangle_below_path a={alpha} g={gamma} n={n}"),
                    ok,
                    format!("triangle {:.4e} ± {:.1e}, path {:.4e} ± {:.1e}", t.mc_mean, t.mc_se, p.mc_mean, p.mc_se),
                );
            }
        }
    }
    Ok(())
}

fn edges_vertices<E: Executor + ?Sized>(c: &ExperimentConfig, exec: &E, r: &mut Report) -> Result<(), HarnessError> {
    let name = c.experiment.name();
    for &alpha in &c.alpha {
        for &gamma in &c.gamma {
            let mut means = Vec::new();
            for &n in &c.n_list {
                let seed = sub_seed(c.seed, c.experiment, n);
                let asym = expected_edges(alpha, gamma, n, CountMode::Asymptotic)?;
                let e = expected_edges_mc(exec, alpha, gamma, n, c.reps, seed)?;
                r.rows.push(Row::new(name, "edges", alpha, gamma, n, c.reps, e.mean, e.std_error(), asym));
                let exact = expected_edges(alpha, gamma, n, CountMode::Exact)?;
                r.rows.push(Row::new(name, "edges_exact", alpha, gamma, n, 0, exact, 0.0, asym));
                let v = expected_vertices_mc(exec, alpha, gamma, n, c.reps, seed)?;
                let v_asym = if n >= 3 { expected_vertices(alpha, gamma, n, CountMode::Asymptotic)? } else { f64::NAN };
                r.rows.push(Row::new(name, "vertices", alpha, gamma, n, c.reps, v.mean, v.std_error(), v_asym));
                means.push((n, e.mean));
            }
            if means.len() >= 2 {
                let s = slope(means.iter().filter(|m| m.1 > 0.0).map(|&(n, m)| ((n as f64).ln(), m.ln())));
                let n_max = means.iter().map(|m| m.0).max().unwrap_or(0);
                r.rows.push(Row::new(name, "edges_slope", alpha, gamma, n_max, c.reps, s, f64::NAN, 2.0 - gamma));
                r.check(
                    format!("edges_slope a={alpha} g={gamma}"),
                    (s - (2.0 - gamma)).abs() <= 0.1,
                    format!("slope {s:.4} vs {:.4}", 2.0 - gamma),
                );
            }
        }
    }
    Ok(())
}

fn supercritical<E: Executor + ?Sized>(c: &ExperimentConfig, exec: &E, r: &mut Report) -> Result<(), HarnessError> {
    let name = c.experiment.name();
    let mut configs = csv::Writer::from_writer(Vec::new());
    configs.write_record(["alpha", "gamma", "n", "vertices", "clique", "count"])?;
    for (alpha, gamma, n) in params(c) {
        let s = supercritical_clique_stats(exec, alpha, gamma, n, c.reps, sub_seed(c.seed, c.experiment, n))?;
        r.rows.push(Row::new(name, "p_any_clique", alpha, gamma, n, 0, s.p_any_clique, 0.0, s.clique_asymptote));
        r.rows.push(Row::new(name, "p_one_clique", alpha, gamma, n, 0, s.p_one_clique, 0.0, s.clique_asymptote));
        r.rows.push(Row::new(name, "star", alpha, gamma, n, c.reps, s.star.mean, s.star.se, s.star_asymptote));
        r.rows.push(Row::new(
            name,
            "star_one_follower",
            alpha,
            gamma,
            n,
            c.reps,
            s.star_one_follower.mean,
            s.star_one_follower.se,
            s.star_asymptote,
        ));
        for &((v, k), count) in &s.configurations {
            configs.serialize((alpha, gamma, n, v, k, count))?;
        }
        let modal = s.modal_configuration();
        r.check(
            format!("modal_configuration a={alpha} g={gamma} n={n}"),
            modal == Some((2, 1)),
            format!("modal {modal:?} among {} non-empty graphs", s.nonempty),
        );
        let p = s.p_clique;
        let (any, one) = binomial_clique_probabilities(n, p);
        let nf = n as f64;
        let direct_one = nf * p * ((nf - 1.0) * (-p).ln_1p()).exp();
        let direct_any = -(nf * (-p).ln_1p()).exp_m1();
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
        r.check(
            format!("binomial_exact a={alpha} g={gamma} n={n}"),
            rel(one, direct_one) < 1e-12 && rel(any, direct_any) < 1e-12,
            format!("P(K=1) {one:.12e}, P(K>=1) {any:.12e}"),
        );
    }
    let bytes = configs.into_inner().map_err(|e| HarnessError::Config(e.to_string()))?;
    r.tables.push(crate::report::Table {
        name: "supercritical_configurations".into(),
        csv: bytes,
    });
    Ok(())
}

fn graphex<E: Executor + ?Sized>(c: &ExperimentConfig, exec: &E, r: &mut Report) -> Result<(), HarnessError> {
    let name = c.experiment.name();
    for &alpha in &c.alpha {
        for &n in &c.n_list {
            let seed = sub_seed(c.seed, c.experiment, n);
            let discrete = critical_clique_pmf(exec, alpha, c.x0, n, PMF_MAX, c.reps, seed)?;
            let limit = graphex_clique_pmf(exec, 1.0, c.x0, alpha, PMF_MAX, c.reps, seed)?;
            let mut ok = true;
            for p in &discrete {
                r.rows.push(Row::new(name, format!("k0_pmf_{}", p.k), alpha, f64::NAN, n, c.reps, p.estimate.mean, p.estimate.se, p.poisson));
                if p.k <= PMF_CHECKED {
                    ok &= (p.estimate.mean - p.poisson).abs() <= 3.0 * p.estimate.se;
                }
            }
            for p in &limit {
                r.rows.push(Row::new(
                    name,
                    format!("graphex_k0_pmf_{}", p.k),
                    alpha,
                    f64::NAN,
                    n,
                    c.reps,
                    p.estimate.mean,
                    p.estimate.se,
                    p.poisson,
                ));
            }
            r.check(
                format!("critical_poisson a={alpha} n={n}"),
                ok,
                format!("pmf k=0..={PMF_CHECKED} within 3 SE of Poisson({})", c.x0.powf(-alpha / 2.0)),
            );
        }
    }
    Ok(())
}

fn height<E: Executor + ?Sized>(c: &ExperimentConfig, exec: &E, r: &mut Report) -> Result<(), HarnessError> {
    let name = c.experiment.name();
    let g = &c.x_grid;
    let d = g.len();
    for (alpha, gamma, n) in params(c) {
        let seed = sub_seed(c.seed, c.experiment, n);
        let model = TailModel::pareto(alpha)?;
        let a = scaling_a_n(alpha, gamma, n)?;
        let s = fluctuation_summary(exec, HeightMode::Binned, &model, n, a, g, c.reps, seed)?;
        let nr = c.reps as f64;
        // normal-theory standard error of a sample covariance
        let cov_se = |m: &[f64], i: usize, j: usize| ((m[i * d + i] * m[j * d + j] + m[i * d + j].powi(2)) / nr).sqrt();
        for i in 0..d {
            for j in i..d {
                let tag = format!("{}_{}", g[i], g[j]);
                for (label, emp, target) in [
                    ("cov_total", &s.emp_cov, &s.target_cov),
                    ("cov_h1", &s.h1_cov, &s.h1_target),
                    ("cov_h2", &s.h2_cov, &s.h2_target),
                ] {
                    r.rows.push(Row::new(
                        name,
                        format!("{label}_{tag}"),
                        alpha,
                        gamma,
                        n,
                        c.reps,
                        emp[i * d + j],
                        cov_se(emp, i, j),
                        target[i * d + j],
                    ));
                }
            }
        }
        r.rows.push(Row::new(name, "max_identity_error", alpha, gamma, n, c.reps, s.max_identity_error, 0.0, 0.0));
        let mut buf = Vec::new();
        write_fluctuation_csv(&mut buf, &s)?;
        r.tables.push(crate::report::Table {
            name: format!("height_fluctuation_a{alpha}_g{gamma}_n{n}"),
            csv: buf,
        });
        r.plots.push(PlotData::CovMatrix {
            label: format!("cov_matrix_a{alpha}_g{gamma}_n{n}"),
            entries: covariance_rows(&s).iter().map(|c| (c.x, c.y, c.emp_cov, c.target_cov)).collect(),
        });
        r.check(
            format!("identity a={alpha} g={gamma} n={n}"),
            s.max_identity_error <= 1e-9,
            format!("max relative error {:.2e}", s.max_identity_error),
        );
        if let Some(i) = g.iter().position(|&x| x == 0.5) {
            let (emp, target) = (s.emp_cov[i * d + i], s.target_cov[i * d + i]);
            r.check(
                format!("variance_half a={alpha} g={gamma} n={n}"),
                (emp / target - 1.0).abs() <= 0.15,
                format!("{emp:.4} vs {target:.4}"),
            );
        }
        if let (Some(i), Some(j)) = (g.iter().position(|&x| x == 0.25), g.iter().position(|&x| x == 0.5)) {
            let (emp, target) = (s.h2_cov[i * d + j], s.h2_target[i * d + j]);
            r.check(
                format!("h2_covariance a={alpha} g={gamma} n={n}"),
                (emp / target - 1.0).abs() <= 0.15,
                format!("{emp:.4} vs {target:.4}"),
            );
        }
        let profile = boundary_profile(exec, HeightMode::Binned, &model, n, a, g, c.reps, seed)?;
        let mut inside = true;
        for p in &profile {
            r.rows.push(Row::new(name, format!("boundary_{}", p.x), alpha, gamma, n, c.reps, p.h_hat, p.se, p.h));
            inside &= (0.85..=1.15).contains(&p.ratio());
        }
        r.check(
            format!("boundary a={alpha} g={gamma} n={n}"),
            inside,
            "h_hat(x) x within [0.85, 1.15]",
        );
        r.plots.push(PlotData::BoundaryCurve {
            label: format!("boundary_curve_a{alpha}_g{gamma}_n{n}"),
            points: profile.iter().map(|p| (p.x, p.h_hat)).collect(),
        });
    }
    Ok(())
}

fn graphon<E: Executor + ?Sized>(c: &ExperimentConfig, exec: &E, r: &mut Report) -> Result<(), HarnessError> {
    let name = c.experiment.name();
    for &alpha in &c.alpha {
        for &gamma in &c.gamma {
            let mut trend = Vec::new();
            for &n in &c.n_list {
                let seed = sub_seed(c.seed, c.experiment, n);
                let s = clique_stretch_mismatch(exec, alpha, gamma, n, c.window, c.resolution, c.reps, seed)?;
                r.rows.push(Row::new(name, "mismatch", alpha, gamma, n, c.reps, s.mismatch.mean, s.mismatch.se, 0.0));
                r.rows.push(Row::new(name, "mean_grid_mismatch", alpha, gamma, n, c.reps, s.mean_grid_mismatch, f64::NAN, 0.0));
                r.rows.push(Row::new(name, "expected_clique_size", alpha, gamma, n, 0, s.ek0, 0.0, f64::NAN));
                r.plots.push(PlotData::GraphonHeatmap {
                    label: format!("graphon_heatmap_a{alpha}_g{gamma}_n{n}"),
                    grid: s.first.grid.clone(),
                });
                r.plots.push(PlotData::GraphonHeatmap {
                    label: format!("graphon_heatmap_mean_a{alpha}_g{gamma}_n{n}"),
                    grid: s.mean_grid.clone(),
                });
                trend.push((n, s.mismatch.mean));
            }
            trend.sort_by_key(|t| t.0);
            if let Some(&(n_max, last)) = trend.last() {
                let decreasing = trend.windows(2).all(|w| w[1].1 < w[0].1);
                r.check(
                    format!("graphon_mismatch a={alpha} g={gamma}"),
                    last < 0.10 && decreasing,
                    format!("mean mismatch {last:.4} at n={n_max}; trend {trend:?}"),
                );
            }
        }
    }
    Ok(())
}

fn bernoulli<E: Executor + ?Sized>(c: &ExperimentConfig, exec: &E, r: &mut Report) -> Result<(), HarnessError> {
    let name = c.experiment.name();
    for (alpha, gamma, n) in params(c) {
        let seed = sub_seed(c.seed, c.experiment, n);
        let b = mc_nonisolated_given_no_clique(exec, RowMode::Marginalized, alpha, gamma, n, c.reps, seed)?;
        r.rows.push(Row::new(name, "nonisolated_given_no_clique", alpha, gamma, n, c.reps, b.estimate.mean, b.estimate.se, b.asymptote));
        let (ok, detail) = if gamma / alpha < 1.0 {
            (b.estimate.mean >= 0.9, format!("estimate {:.4} >= 0.9", b.estimate.mean))
        } else {
            ((0.7..=1.3).contains(&b.ratio), format!("estimate / asymptote {:.4} in [0.7, 1.3]", b.ratio))
        };
        r.check(format!("nonisolation a={alpha} g={gamma} n={n}"), ok, detail);

        let lone = lone_clique_follower_stats(exec, alpha, gamma, n, c.reps, seed)?;
        let l = &lone.p_lone_nonisolated;
        r.rows.push(Row::new(name, "lone_clique_nonisolated", alpha, gamma, n, c.reps, l.mean, l.se, lone.asymptote));
        let share = lone.single_follower_share();
        let share_se = (share * (1.0 - share) / lone.events.max(1) as f64).sqrt();
        r.rows.push(Row::new(name, "lone_clique_single_follower_share", alpha, gamma, n, c.reps, share, share_se, f64::NAN));
        if n as usize <= FULL_BUILD_LIMIT {
            let reps = c.reps.min(10_000);
            let e = mc_empty_graph(exec, alpha, gamma, n, reps, seed)?;
            r.rows.push(Row::new(name, "empty_graph", alpha, gamma, n, reps, e.estimate.mean, e.estimate.se, e.asymptote));
        }
    }
    Ok(())
}

fn regimes(c: &ExperimentConfig, r: &mut Report) -> Result<(), HarnessError> {
    let name = c.experiment.name();
    for (alpha, gamma, n) in params(c) {
        let regime = classify_log_rule(alpha, gamma)?;
        let a = scaling_a_n(alpha, gamma, n)?;
        let size = mean_clique_size(&TailModel::pareto(alpha)?, n, a);
        let nf = n as f64;
        let asym = nf.powf(1.0 - gamma / 2.0) / nf.ln().sqrt();
        r.rows.push(Row::new(name, regime.name(), alpha, gamma, n, 0, size, 0.0, asym));
    }
    Ok(())
}
