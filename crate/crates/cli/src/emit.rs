//! CSV and JSON emitters.
//!
//! All floats are written with Rust's shortest round-trip formatting and all
//! row orders are fixed, so identical inputs produce byte-identical files.

use anyhow::{Context, Result};
use std::fs;
use std::io::Write;
use std::path::Path;
use swr_core::{IterationTrace, RootPair, SpaceTimeField, Surface};

fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut file = fs::File::create(path)
        .with_context(|| format!("cannot create {}", path.display()))?;
    file.write_all(contents.as_bytes())
        .with_context(|| format!("cannot write {}", path.display()))
}

/// `omega,sigma,abs_rho`, sigma-major then omega.
pub fn write_surface_csv(path: &Path, surface: &Surface) -> Result<()> {
    let mut out = String::from("omega,sigma,abs_rho\n");
    for (i, &sigma) in surface.sigmas.iter().enumerate() {
        for (j, &omega) in surface.omegas.iter().enumerate() {
            out.push_str(&format!("{omega},{sigma},{}\n", surface.value(i, j)));
        }
    }
    write_file(path, &out)
}

/// `iteration,residual,error_vs_reference`; the error column is empty when
/// no converged reference exists.
pub fn write_trace_csv(path: &Path, trace: &IterationTrace) -> Result<()> {
    let mut out = String::from("iteration,residual,error_vs_reference\n");
    for (index, residual) in trace.residuals.iter().enumerate() {
        let error = trace
            .errors_vs_reference
            .get(index)
            .map(|e| format!("{e}"))
            .unwrap_or_default();
        out.push_str(&format!("{},{residual},{error}\n", index + 1));
    }
    write_file(path, &out)
}

/// `omega,re_r_minus,im_r_minus,abs_r_minus,re_r_plus,im_r_plus,abs_r_plus`.
pub fn write_roots_csv(path: &Path, rows: &[(f64, RootPair)]) -> Result<()> {
    let mut out =
        String::from("omega,re_r_minus,im_r_minus,abs_r_minus,re_r_plus,im_r_plus,abs_r_plus\n");
    for (omega, roots) in rows {
        out.push_str(&format!(
            "{omega},{},{},{},{},{},{}\n",
            roots.r_minus.re,
            roots.r_minus.im,
            roots.r_minus.norm(),
            roots.r_plus.re,
            roots.r_plus.im,
            roots.r_plus.norm()
        ));
    }
    write_file(path, &out)
}

/// `x,t,value,subdomain,iteration_tag` for a list of tagged iterate pairs.
pub fn write_snapshots_csv(
    path: &Path,
    dt: f64,
    tagged: &[(String, &SpaceTimeField, &SpaceTimeField)],
) -> Result<()> {
    let mut out = String::from("x,t,value,subdomain,iteration_tag\n");
    for (tag, v, w) in tagged {
        for (field, name) in [(v, "left"), (w, "right")] {
            let positions = field.grid().node_positions();
            for level in 0..field.n_levels() {
                let t = dt * level as f64;
                for (node, &x) in positions.iter().enumerate() {
                    out.push_str(&format!("{x},{t},{},{name},{tag}\n", field.at(level, node)));
                }
            }
        }
    }
    write_file(path, &out)
}

/// Two traces side by side; rows past a trace's end leave its columns empty.
pub fn write_compare_csv(
    path: &Path,
    dirichlet: &IterationTrace,
    optimized: &IterationTrace,
) -> Result<()> {
    let mut out = String::from(
        "iteration,residual_dirichlet,error_dirichlet,residual_optimized,error_optimized\n",
    );
    let rows = dirichlet.residuals.len().max(optimized.residuals.len());
    let cell = |values: &[f64], index: usize| {
        values.get(index).map(|v| format!("{v}")).unwrap_or_default()
    };
    for index in 0..rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            index + 1,
            cell(&dirichlet.residuals, index),
            cell(&dirichlet.errors_vs_reference, index),
            cell(&optimized.residuals, index),
            cell(&optimized.errors_vs_reference, index),
        ));
    }
    write_file(path, &out)
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).context("serializing JSON output")?;
    text.push('\n');
    write_file(path, &text)
}
