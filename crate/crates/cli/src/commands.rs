//! The four harness commands.

use std::path::{Path, PathBuf};

use coulomb_core::exactpf::{
    ln_z_sphere_exact, ln_z_sphere_gram, ln_z_theta_torus_exact, partition_from_modified,
};
use coulomb_core::expansion::{coeffs_modified, coeffs_plain, eval_expansion, fit_b2};
use coulomb_core::geometry::{make_grid, SurfaceSpec};
use coulomb_core::specfun::PeriodMatrix;
use coulomb_core::verify::{run_suite, IdentityReport, SUITE_NAMES};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::parallel::parallel_map;
use crate::table::{write_rows, ResidualRow};

fn output_path(cfg: &RunConfig, out: Option<&Path>, default_name: &str) -> PathBuf {
    if let Some(p) = out {
        return p.to_path_buf();
    }
    if !cfg.run.output_path.is_empty() {
        return PathBuf::from(&cfg.run.output_path);
    }
    PathBuf::from(default_name)
}

/// Residual sweep of the sphere expansion against the exact partition
/// function. Exit 0 iff the scaled residual stays under the configured
/// bound and the residual is non-increasing over the last three doublings.
pub fn cmd_verify_sphere(cfg: &RunConfig, out: Option<&Path>) -> Result<()> {
    let surface = cfg.surface()?;
    if surface != SurfaceSpec::Sphere {
        return Err(CliError::Config("verify-sphere needs genus 0".into()));
    }
    let potential = cfg.potential()?;
    let grid = make_grid(surface, cfg.run.grid_resolution)?;
    // admissibility gate with diagnostic
    let min_fv = potential.min_f_v(&grid)?;
    if min_fv <= 1e-6 {
        return Err(CliError::Verification(format!(
            "potential not quasi-subharmonic: min f_V = {min_fv}"
        )));
    }
    let with_potential = !potential.is_zero();
    if with_potential && cfg.run.grid_resolution < 4 * cfg.run.n_max as usize {
        return Err(CliError::Config(format!(
            "Gram route needs grid_resolution >= 4 n_max = {}",
            4 * cfg.run.n_max
        )));
    }
    let coeffs = coeffs_plain(surface, &potential, &grid)?;
    let ns = cfg.sweep();
    let rows: Vec<Result<ResidualRow>> = parallel_map(&ns, |&n| {
        let exact = if with_potential {
            ln_z_sphere_gram(n, &potential, &grid)?.value
        } else {
            ln_z_sphere_exact(n)
        };
        Ok(ResidualRow::new(n, exact, eval_expansion(&coeffs, n)))
    });
    let mut table = Vec::with_capacity(rows.len());
    for r in rows {
        table.push(r?);
    }
    let path = output_path(cfg, out, "verify-sphere.csv");
    write_rows(&path, &format!("coulomb verify-sphere seed={}", cfg.run.seed), &table)?;

    let bound = cfg.tolerance("scaled-residual-bound", 0.5);
    for row in &table {
        if row.scaled_residual > bound {
            return Err(CliError::Verification(format!(
                "scaled residual {} at N={} exceeds bound {bound}",
                row.scaled_residual, row.n
            )));
        }
    }
    // monotonic over the last three doublings present in the sweep
    let scaled_at = |n: u64| table.iter().find(|r| r.n == n).map(|r| r.scaled_residual);
    let mut checked = None;
    for row in table.iter().rev() {
        let n = row.n;
        if n % 4 == 0 {
            if let (Some(r1), Some(r2), Some(r4)) =
                (scaled_at(n), scaled_at(n / 2), scaled_at(n / 4))
            {
                if !(r1 <= r2 && r2 <= r4) {
                    return Err(CliError::Verification(format!(
                        "scaled residual not non-increasing over {} -> {} -> {}: {r4} {r2} {r1}",
                        n / 4,
                        n / 2,
                        n
                    )));
                }
                checked = Some(n);
                break;
            }
        }
    }
    println!(
        "verify-sphere: {} rows written to {}; scaled residual <= {bound}{}",
        table.len(),
        path.display(),
        match checked {
            Some(n) => format!("; non-increasing over {}..{n}", n / 4),
            None => "; no doubling triple in sweep".into(),
        }
    );
    Ok(())
}

/// Exactness ladder for the torus modified partition function, plus the
/// modified-to-plain shift consistency.
pub fn cmd_verify_torus(cfg: &RunConfig, out: Option<&Path>) -> Result<()> {
    let surface = cfg.surface()?;
    let SurfaceSpec::Torus(tau) = surface else {
        return Err(CliError::Config("verify-torus needs genus 1".into()));
    };
    let potential = cfg.potential()?;
    if !potential.is_zero() {
        return Err(CliError::Config(
            "the torus exactness ladder is a zero-potential statement".into(),
        ));
    }
    let grid = make_grid(surface, cfg.run.grid_resolution)?;
    let modified = coeffs_modified(surface, &potential, &grid)?;
    let plain = coeffs_plain(surface, &potential, &grid)?;
    let pm = PeriodMatrix::genus_one(tau);
    let ns = cfg.sweep();
    let rows: Vec<ResidualRow> = parallel_map(&ns, |&k| {
        ResidualRow::new(k, ln_z_theta_torus_exact(k, tau), eval_expansion(&modified, k))
    });
    let path = output_path(cfg, out, "verify-torus.csv");
    write_rows(&path, &format!("coulomb verify-torus seed={}", cfg.run.seed), &rows)?;

    let tol = cfg.tolerance("torus-exactness", 1e-10);
    for row in &rows {
        if row.residual > tol {
            return Err(CliError::Verification(format!(
                "exactness residual {} at k={} exceeds {tol}",
                row.residual, row.n
            )));
        }
        // the modified -> plain shift stays exact as well
        let shifted = partition_from_modified(row.exact, 1, Some(&pm))?;
        let plain_eval = eval_expansion(&plain, row.n);
        if (shifted - plain_eval).abs() > tol {
            return Err(CliError::Verification(format!(
                "modified-to-plain shift residual {} at k={}",
                (shifted - plain_eval).abs(),
                row.n
            )));
        }
    }
    println!(
        "verify-torus: {} rows written to {}; all residuals <= {tol}",
        rows.len(),
        path.display()
    );
    Ok(())
}

fn effective_tolerance(cfg: &RunConfig, suite: &str, report: &IdentityReport) -> f64 {
    // report-name override wins over suite-name override
    cfg.tolerance(report.name, cfg.tolerance(suite, report.tolerance))
}

/// Run the identity suites, one PASS/FAIL line per identity.
pub fn cmd_identities(cfg: &RunConfig, only: Option<&str>, out: Option<&Path>) -> Result<()> {
    let selected: Vec<&str> = match only {
        Some(name) => {
            if !SUITE_NAMES.contains(&name) {
                return Err(CliError::Config(format!(
                    "unknown suite '{name}'; available: {}",
                    SUITE_NAMES.join(", ")
                )));
            }
            vec![name]
        }
        None => SUITE_NAMES.to_vec(),
    };
    let mut lines = Vec::new();
    lines.push(format!("# coulomb identities seed={}", cfg.run.seed));
    let mut failures = 0usize;
    for suite in selected {
        let reports = run_suite(suite, cfg.run.seed)?;
        for r in &reports {
            let tol = effective_tolerance(cfg, suite, r);
            let pass = r.deviation <= tol;
            if !pass {
                failures += 1;
            }
            lines.push(format!(
                "{:<32} {:>13.6e} {:>10.1e} {}",
                r.name,
                r.deviation,
                tol,
                if pass { "PASS" } else { "FAIL" }
            ));
        }
    }
    for l in &lines {
        println!("{l}");
    }
    if let Some(p) = out {
        std::fs::write(p, lines.join("\n") + "\n")?;
    }
    if failures > 0 {
        return Err(CliError::Verification(format!("{failures} identities failed")));
    }
    Ok(())
}

/// Fit the quadratic coefficient of ln Z(N, V) - ln Z(N, 0) and compare
/// with the quadrature functional.
pub fn cmd_fit_b2(cfg: &RunConfig, out: Option<&Path>) -> Result<()> {
    let surface = cfg.surface()?;
    if surface != SurfaceSpec::Sphere {
        return Err(CliError::Config("fit-b2 needs genus 0".into()));
    }
    if cfg.run.n_max > 40 {
        return Err(CliError::Config(
            "fit-b2 is limited to N <= 40 (Gram conditioning)".into(),
        ));
    }
    if cfg.run.grid_resolution < 4 * cfg.run.n_max as usize {
        return Err(CliError::Config(format!(
            "fit-b2 needs grid_resolution >= 4 n_max = {}",
            4 * cfg.run.n_max
        )));
    }
    let potential = cfg.potential()?;
    let ns = cfg.sweep();
    if ns.len() < 3 {
        return Err(CliError::Config("fit-b2 needs at least three N values".into()));
    }
    let report = fit_b2(&potential, &ns, cfg.run.grid_resolution).map_err(|e| match e {
        coulomb_core::Error::SingularMatrix => {
            CliError::Conditioning("Gram factorization failed".into())
        }
        other => CliError::from(other),
    })?;
    if report.resolution_disagreement > 1e-6 {
        return Err(CliError::Conditioning(format!(
            "doubling-resolution disagreement {} > 1e-6",
            report.resolution_disagreement
        )));
    }
    let lines = vec![
        format!("fitted_b2            {:.16e}", report.fitted_b2),
        format!("s2_quadrature        {:.16e}", report.s2_quadrature),
        format!("relative_deviation   {:.6e}", report.rel_deviation),
        format!("resolution_disagreement {:.3e}", report.resolution_disagreement),
    ];
    for l in &lines {
        println!("{l}");
    }
    if let Some(p) = out {
        std::fs::write(p, lines.join("\n") + "\n")?;
    }
    if potential.is_zero() {
        if report.fitted_b2.abs() > cfg.tolerance("b2-zero-absolute", 1e-10) {
            return Err(CliError::Verification(format!(
                "zero potential fitted B2 = {}",
                report.fitted_b2
            )));
        }
    } else if report.rel_deviation > cfg.tolerance("b2-relative", 5e-2) {
        return Err(CliError::Verification(format!(
            "fitted B2 deviates {:.2}% from quadrature",
            100.0 * report.rel_deviation
        )));
    }
    println!("fit-b2: PASS");
    Ok(())
}
