use anyhow::Result;
use clap::Args;

use cmcsurf::mesh_io;
use cmcsurf::period::{
    search, solve_b_with, verify_closure, ClosureGrid, PeriodError, PeriodReport, PhiScan, Rational,
    SolutionEntry,
};

use crate::config::Config;
use crate::{usage, Outcome};

#[derive(Debug, Args)]
pub struct PeriodArgs {
    /// Modulus μ in (0, 1)
    #[arg(long)]
    pub mu: f64,
    /// Rational target q/p for Φ + 1/2 (repeatable)
    #[arg(long, required_unless_present = "search", conflicts_with = "search")]
    pub target: Vec<String>,
    /// Search all q/p with p ≤ P_MAX inside the scanned range. Φ grows without
    /// bound near b = 1, so the range is wide; roots past about 40 sit too close
    /// to the ends to certify at 1e-8. Use --upper to cap it
    #[arg(long, value_name = "P_MAX", num_args = 0..=1, default_missing_value = "8")]
    pub search: Option<u32>,
    /// Upper cap on q/p during --search
    #[arg(long, requires = "search")]
    pub upper: Option<f64>,
    /// Closure tolerance (default from config)
    #[arg(long)]
    pub tol: Option<f64>,
    /// Closure grid size per direction (default from config)
    #[arg(long)]
    pub grid: Option<usize>,
    /// Scan points for the root finder (default from config)
    #[arg(long)]
    pub scan: Option<usize>,
    /// Report file name
    #[arg(long, default_value = "period.json")]
    pub name: String,
}

pub fn run(args: &PeriodArgs, config: &Config) -> Result<Outcome> {
    let tol = args.tol.unwrap_or(config.tolerances.closure);
    if !(tol > 0.0) {
        return Err(usage(format!("--tol must be positive (got {tol})")));
    }
    let n = args.grid.unwrap_or(config.grid.closure);
    let points = args.scan.unwrap_or(config.grid.scan);
    if n < 2 || points < 2 {
        return Err(usage("grid and scan sizes must be at least 2"));
    }
    let scan = PhiScan::new(args.mu, points).map_err(|e| usage(e.to_string()))?;

    let (targets, solutions) = match args.search {
        Some(p_max) => {
            let found = search(&scan, p_max.max(1), args.upper)?;
            let mut t: Vec<Rational> = found
                .iter()
                .map(|s| Rational { q: s.q as i64, p: s.p as i64 })
                .collect();
            t.sort_by(|a, b| (a.q * b.p).cmp(&(b.q * a.p)));
            t.dedup();
            (t, found)
        }
        None => {
            let mut t = Vec::new();
            for s in &args.target {
                let r: Rational = s.parse().map_err(|e: PeriodError| usage(e.to_string()))?;
                if !t.contains(&r) {
                    t.push(r);
                }
            }
            let mut found = Vec::new();
            for &r in &t {
                found.extend(solve_b_with(&scan, r)?);
            }
            (t, found)
        }
    };

    let grid = ClosureGrid { nu: n, nv: n };
    let mut entries = Vec::with_capacity(solutions.len());
    let mut ok = true;
    for s in &solutions {
        let gaps = verify_closure(s, grid)?;
        ok &= gaps.certified(s.m) < tol;
        entries.push(SolutionEntry::new(s, gaps));
    }
    let report = PeriodReport::new(&scan, targets, entries);
    std::fs::create_dir_all(&config.out_dir)?;
    mesh_io::export_report_json(&report, &config.out_dir.join(&args.name))?;
    println!("{}", serde_json::to_string_pretty(&report)?);

    if report.solutions.is_empty() {
        let (lo, hi) = scan.range();
        eprintln!(
            "no b in ({}, {}) solves Φ + 1/2 = target; scanned range of Φ + 1/2 is [{lo}, {hi}] (empirical)",
            scan.b[0],
            scan.b[scan.b.len() - 1],
        );
        return Ok(Outcome::Empty);
    }
    if !ok {
        eprintln!("closure gap above {tol} for at least one solution");
        return Ok(Outcome::Failed);
    }
    Ok(Outcome::Ok)
}
