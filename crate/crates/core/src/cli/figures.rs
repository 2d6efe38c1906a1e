//! Figure datasets and the discrepancy report.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::json;

use super::output::{default_dir, json_bytes, resolve, Cell, Table, SCHEMA_VERSION};
use super::runs::CQZ_REFERENCE;
use super::{CliError, Figure, FiguresArgs};
use crate::channels::{
    bec_capacity, discrepancy_report, duplex_capacity, optimize_duplex_k, optimize_telex, AsymmetricBec,
    MessageWeights, Strategy,
};
use crate::zeno::{delta1, lambda0, lambda1, lambda2, lambda3, lambda4, zeta_c, zeta_q};
use crate::Result;

const FIG9_N: u32 = 100;
const FIG9_MK: u32 = 10;
/// Reference ζ_q at `|α|² = 1/2` (any `|γ|²`) and at `(|α|², |γ|²) = (0, 1)`.
const FIG9_REFERENCE: [((f64, Option<f64>), f64); 2] = [((0.5, None), 0.659), ((0.0, Some(1.0)), 0.903)];
/// Reference (M★, K★, Q) along the telex optimum; `None` where no value is given.
const FIG10_REFERENCE: [(u32, f64, f64, Option<f64>); 2] = [(100, 10.0, 10.0, None), (218, 21.0, 15.0, Some(1.0))];

fn write(dir: &Path, name: &str, bytes: &[u8]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), bytes)
}

fn fig4(n_max: u32) -> Result<Table> {
    let rows: Vec<Vec<Cell>> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let (l0, l1) = (lambda0(2)?, lambda1(2, n)?);
            let r = bec_capacity(&AsymmetricBec::new(l0, l1)?);
            let reference = CQZ_REFERENCE.iter().find(|(rn, _, _)| *rn == n);
            let d = |f: Option<f64>, r: Option<f64>| f.zip(r).map(|(f, r)| f - r);
            let (rc, rp) = (reference.map(|r| r.1), reference.map(|r| r.2));
            Ok(vec![
                n.into(),
                2u32.into(),
                l0.into(),
                l1.into(),
                r.capacity.into(),
                Cell::opt_f(r.p_star),
                Cell::opt_f(rc),
                Cell::opt_f(rp),
                Cell::opt_f(d(Some(r.capacity), rc)),
                Cell::opt_f(d(r.p_star, rp)),
            ])
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new(&[
        "n",
        "m",
        "lambda0",
        "lambda1",
        "capacity",
        "p_star",
        "reference_capacity",
        "reference_p_star",
        "diff_capacity",
        "diff_p_star",
    ]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

fn fig7(n_max: u32, k_max: u32) -> Result<(Table, Table)> {
    let grid: Vec<(u32, u32)> = (1..=n_max).flat_map(|n| (1..=k_max).map(move |k| (n, k))).collect();
    let rows: Vec<Vec<Cell>> = grid
        .par_iter()
        .map(|&(n, k)| {
            Ok(vec![
                n.into(),
                k.into(),
                lambda2(n, k)?.into(),
                zeta_c(n, k)?.into(),
                duplex_capacity(n, k)?.capacity.into(),
            ])
        })
        .collect::<Result<_>>()?;
    let mut g = Table::new(&["n", "k", "lambda2", "zeta_c", "capacity"]);
    rows.into_iter().for_each(|r| g.push(r));

    let rows: Vec<Vec<Cell>> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let (k, r) = optimize_duplex_k(n)?;
            Ok(vec![n.into(), k.into(), zeta_c(n, k)?.into(), r.capacity.into()])
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new(&["n", "k_star", "zeta_c", "capacity"]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok((g, t))
}

fn fig9_reference(a: f64, g: f64) -> Option<f64> {
    let close = |x: f64, y: f64| (x - y).abs() < 1e-12;
    FIG9_REFERENCE.iter().find(|((ra, rg), _)| close(a, *ra) && rg.is_none_or(|rg| close(g, rg))).map(|(_, v)| *v)
}

fn fig9(steps: u32) -> Result<Table> {
    let steps = steps.max(2);
    let axis: Vec<f64> = (0..steps).map(|i| i as f64 / (steps - 1) as f64).collect();
    let grid: Vec<(f64, f64)> = axis.iter().flat_map(|&a| axis.iter().map(move |&g| (a, g))).collect();
    let rows: Vec<Vec<Cell>> = grid
        .par_iter()
        .map(|&(a, g)| {
            let d1 = delta1(a, g)?;
            let z = zeta_q(a, g, FIG9_MK, FIG9_N, FIG9_MK)?;
            let r = fig9_reference(a, g);
            Ok(vec![
                FIG9_N.into(),
                FIG9_MK.into(),
                FIG9_MK.into(),
                a.into(),
                g.into(),
                d1.into(),
                lambda3(a, FIG9_MK, FIG9_N)?.into(),
                lambda4(d1, FIG9_N, FIG9_MK)?.into(),
                z.into(),
                Cell::opt_f(r),
                Cell::opt_f(r.map(|r| z - r)),
            ])
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new(&[
        "n",
        "m",
        "k",
        "alpha_sq",
        "gamma_sq",
        "delta1",
        "lambda3",
        "lambda4",
        "zeta_q",
        "reference_zeta_q",
        "diff_zeta_q",
    ]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

fn fig10(n_max: u32) -> Result<Table> {
    let w = MessageWeights::new(0.5, 0.5)?;
    let rows: Vec<Vec<Cell>> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let o = optimize_telex(n, w, Strategy::Separable)?;
            let r = FIG10_REFERENCE.iter().find(|r| r.0 == n);
            Ok(vec![
                n.into(),
                o.m_star.into(),
                o.k_star.into(),
                o.zeta_q.into(),
                o.q.into(),
                Cell::opt_f(r.map(|r| r.1)),
                Cell::opt_f(r.map(|r| r.2)),
                Cell::opt_f(r.and_then(|r| r.3)),
            ])
        })
        .collect::<Result<_>>()?;
    let mut t =
        Table::new(&["n", "m_star", "k_star", "zeta_q", "q", "reference_m_star", "reference_k_star", "reference_q"]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

fn report(dir: &Path) -> std::result::Result<(), CliError> {
    let r = discrepancy_report()?;
    let mut t = Table::new(&[
        "id",
        "quantity",
        "formula_value",
        "reference_value",
        "abs_diff",
        "tolerance",
        "comparison",
        "within",
    ]);
    for c in &r.checks {
        let comparison = serde_json::to_value(c.comparison).expect("serializable");
        t.push(vec![
            c.id.into(),
            c.quantity.into(),
            c.formula_value.into(),
            c.reference_value.into(),
            c.abs_diff.into(),
            c.tolerance.into(),
            Cell::S(comparison.as_str().unwrap_or_default().to_string()),
            Cell::S(c.within.to_string()),
        ]);
    }
    write(dir, "discrepancy.csv", &t.to_csv()?)?;
    let v = json!({ "schema_version": SCHEMA_VERSION, "checks": r.checks, "misses": r.misses().count() });
    write(dir, "discrepancy.json", &json_bytes(v))?;
    Ok(())
}

pub fn run(a: &FiguresArgs) -> std::result::Result<(), CliError> {
    let dir: PathBuf = a.out_dir.as_deref().map(resolve).unwrap_or_else(default_dir);
    let all = a.which == Figure::All;
    if all || a.which == Figure::Fig4 {
        write(&dir, "fig4.csv", &fig4(a.n_max.unwrap_or(100))?.to_csv()?)?;
    }
    if all || a.which == Figure::Fig7 {
        let (g, t) = fig7(a.n_max.unwrap_or(512), a.k_max.max(1))?;
        write(&dir, "fig7_grid.csv", &g.to_csv()?)?;
        write(&dir, "fig7_trajectory.csv", &t.to_csv()?)?;
    }
    if all || a.which == Figure::Fig9 {
        write(&dir, "fig9.csv", &fig9(a.steps)?.to_csv()?)?;
    }
    if all || a.which == Figure::Fig10 {
        write(&dir, "fig10.csv", &fig10(a.n_max.unwrap_or(256))?.to_csv()?)?;
    }
    if all || a.which == Figure::Report {
        report(&dir)?;
    }
    Ok(())
}
