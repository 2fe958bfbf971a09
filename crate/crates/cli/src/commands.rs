//! Subcommand definitions and handlers.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Subcommand;
use num_rational::BigRational;
use serde_json::json;

use amoeba_core::algebra::{ExponentVector, LaurentPolynomial};
use amoeba_core::amoeba;
use amoeba_core::asymptotics;
use amoeba_core::ensemble::{self, parse_rational, Spectrum};
use amoeba_core::gauss;
use amoeba_core::numeric::rational_to_f64;

use crate::output::{
    csv_document, emit, json_document, rational_string, svg_scatter, ConfigHash,
};
use crate::{CliError, CliResult};

#[derive(Subcommand)]
pub enum Command {
    /// Render a 2-D amoeba point cloud as CSV (and optionally SVG).
    Amoeba {
        /// Polynomial JSON file.
        #[arg(long)]
        poly: PathBuf,
        /// Range of the first log coordinate, as lo:hi:steps.
        #[arg(long, allow_hyphen_values = true)]
        x1: String,
        /// Phase samples per column.
        #[arg(long, default_value_t = 128)]
        phases: usize,
        /// Output CSV path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optional SVG scatter path.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Order vector of the amoeba-complement component containing a point.
    Order {
        #[arg(long)]
        poly: PathBuf,
        /// Point in R^n, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 32)]
        phases: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Detect complement components on a rectangular grid (n = 2).
    Components {
        #[arg(long)]
        poly: PathBuf,
        /// lo:hi:steps for the first coordinate.
        #[arg(long, allow_hyphen_values = true)]
        x1: String,
        /// lo:hi:steps for the second coordinate.
        #[arg(long, allow_hyphen_values = true)]
        x2: String,
        #[arg(long, default_value_t = 16)]
        phases: usize,
        /// Membership tolerance in log-modulus.
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trace the amoeba contour by sweeping real normal directions.
    Contour {
        #[arg(long)]
        poly: PathBuf,
        /// Number of sweep directions.
        #[arg(long, default_value_t = 180)]
        sweep: usize,
        /// Fresh deterministic seeds per direction.
        #[arg(long, default_value_t = 6)]
        seeds: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact Laurent coefficient of P/Q in a vertex expansion.
    Coeffs {
        #[arg(long)]
        poly_p: PathBuf,
        #[arg(long)]
        poly_q: PathBuf,
        /// Vertex of the Newton polyhedron, comma separated integers.
        #[arg(long, allow_hyphen_values = true)]
        vertex: String,
        /// Target exponent, comma separated integers.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Cap on the geometric-series order.
        #[arg(long, default_value_t = 512)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Diagonal-coefficient asymptotics against the exact oracle.
    Asymp {
        #[arg(long)]
        poly_p: PathBuf,
        #[arg(long)]
        poly_q: PathBuf,
        /// Integer direction, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        /// Values of k, comma separated.
        #[arg(long)]
        k: String,
        #[arg(long, default_value_t = 512)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the mean-energy system: z(u), temperature, entropy et al.
    EnsembleSolve {
        #[arg(long)]
        spectrum: PathBuf,
        /// Mean energy, comma-separated rationals (p/q, decimals, integers).
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        /// Also report occupation numbers for this many systems.
        #[arg(long, alias = "N")]
        systems: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact finite-ensemble statistics (total states, average occupations).
    EnsembleExact {
        #[arg(long)]
        spectrum: PathBuf,
        #[arg(long, alias = "N")]
        systems: u64,
        /// Total energy of the integer spectrum part, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        energy: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact average occupations against their thermodynamic limit.
    EnsembleCompare {
        #[arg(long)]
        spectrum: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        /// Ensemble sizes, comma separated.
        #[arg(long, alias = "N")]
        systems: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact admissibility of a mean energy (interior of the spectrum hull).
    Admissible {
        #[arg(long)]
        spectrum: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
    },
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn load_poly(path: &Path) -> CliResult<LaurentPolynomial> {
    let text = fs::read_to_string(path)
        .map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input(format!("bad polynomial JSON: {e}")))
}

fn load_spectrum(path: &Path) -> CliResult<Spectrum> {
    let text = fs::read_to_string(path)
        .map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input(format!("bad spectrum JSON: {e}")))
}

fn parse_range(text: &str) -> CliResult<(f64, f64, usize)> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(input(format!("range '{text}' is not lo:hi:steps")));
    }
    let lo: f64 = parts[0].parse().map_err(|_| input("bad range start"))?;
    let hi: f64 = parts[1].parse().map_err(|_| input("bad range end"))?;
    let steps: usize = parts[2].parse().map_err(|_| input("bad range steps"))?;
    if steps < 2 {
        return Err(input("range needs at least 2 steps"));
    }
    Ok((lo, hi, steps))
}

fn parse_f64_list(text: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(|t| t.trim().parse().map_err(|_| input(format!("bad number '{t}'"))))
        .collect()
}

fn parse_i64_list(text: &str) -> CliResult<Vec<i64>> {
    text.split(',')
        .map(|t| t.trim().parse().map_err(|_| input(format!("bad integer '{t}'"))))
        .collect()
}

fn parse_u64_list(text: &str) -> CliResult<Vec<u64>> {
    text.split(',')
        .map(|t| t.trim().parse().map_err(|_| input(format!("bad count '{t}'"))))
        .collect()
}

fn parse_rational_list(text: &str) -> CliResult<Vec<BigRational>> {
    text.split(',')
        .map(|t| parse_rational(t).map_err(CliError::from))
        .collect()
}

pub fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Amoeba {
            poly,
            x1,
            phases,
            out,
            svg,
        } => {
            let q = load_poly(&poly)?;
            let (lo, hi, steps) = parse_range(&x1)?;
            let hash = ConfigHash::new(
                &format!("amoeba;x1={lo}:{hi}:{steps};phases={phases}"),
                &[&poly],
            )?;
            let cloud = amoeba::render2d(&q, lo, hi, steps, phases)?;
            let rows: Vec<String> = cloud
                .points
                .iter()
                .map(|(a, b)| format!("{a},{b}"))
                .collect();
            emit(out.as_deref(), &csv_document(&hash, "x1,x2", &rows))?;
            if let Some(svg_path) = svg {
                emit(Some(&svg_path), &svg_scatter(&hash, &cloud.points))?;
            }
            if cloud.skipped_fibers > 0 {
                eprintln!("note: {} degenerate fibers skipped", cloud.skipped_fibers);
            }
            Ok(())
        }
        Command::Order { poly, x, phases, out } => {
            let q = load_poly(&poly)?;
            let point = parse_f64_list(&x)?;
            let hash = ConfigHash::new(&format!("order;x={x};phases={phases}"), &[&poly])?;
            let order = amoeba::order(&q, &point, phases)?;
            let doc = json_document(
                &hash,
                json!({ "x": point, "order": order.coords() }),
            );
            emit(out.as_deref(), &doc)
        }
        Command::Components {
            poly,
            x1,
            x2,
            phases,
            tol,
            out,
        } => {
            if tol <= 0.0 {
                return Err(input("tolerance must be positive"));
            }
            let q = load_poly(&poly)?;
            let r1 = parse_range(&x1)?;
            let r2 = parse_range(&x2)?;
            let hash = ConfigHash::new(
                &format!("components;x1={x1};x2={x2};phases={phases};tol={tol}"),
                &[&poly],
            )?;
            let grid = amoeba::GridSpec {
                mins: vec![r1.0, r2.0],
                maxs: vec![r1.1, r2.1],
                steps: vec![r1.2, r2.2],
            };
            let report = amoeba::detect_components(&q, &grid, phases, tol)?;
            let comps: Vec<serde_json::Value> = report
                .components
                .iter()
                .map(|c| {
                    json!({
                        "order": c.order.coords(),
                        "representative": c.representative,
                        "cells": c.grid_cells.len(),
                    })
                })
                .collect();
            let doc = json_document(
                &hash,
                json!({
                    "components": comps,
                    "outside_cells": report.outside_cells,
                    "inside_cells": report.inside_cells,
                    "uncertain_cells": report.uncertain_cells,
                }),
            );
            emit(out.as_deref(), &doc)
        }
        Command::Contour {
            poly,
            sweep,
            seeds,
            out,
        } => {
            let q = load_poly(&poly)?;
            if sweep < 2 {
                return Err(input("sweep needs at least 2 directions"));
            }
            let n = q.n();
            let hash =
                ConfigHash::new(&format!("contour;sweep={sweep};seeds={seeds}"), &[&poly])?;
            let (angles, directions): (Vec<f64>, Vec<Vec<f64>>) = match n {
                1 => (vec![0.0], vec![vec![1.0]]),
                2 => (0..sweep)
                    .map(|i| {
                        let angle = std::f64::consts::PI * (i as f64 + 0.5) / sweep as f64;
                        (angle, vec![angle.cos(), angle.sin()])
                    })
                    .unzip(),
                _ => {
                    // Index-labelled spherical grid over half of S^{n-1}.
                    let side = (sweep as f64).sqrt().ceil() as usize;
                    let mut angles = Vec::new();
                    let mut dirs = Vec::new();
                    for i in 0..side {
                        let polar = std::f64::consts::PI * (i as f64 + 0.5) / side as f64;
                        for j in 0..side {
                            let azimuth = std::f64::consts::PI * (j as f64 + 0.5) / side as f64;
                            angles.push((i * side + j) as f64);
                            let mut d = vec![polar.sin() * azimuth.cos(), polar.sin() * azimuth.sin(), polar.cos()];
                            d.resize(n, 0.0);
                            dirs.push(d);
                        }
                    }
                    (angles, dirs)
                }
            };
            let points = gauss::contour(&q, &directions, &gauss::default_seeds(n, seeds));
            let coord_header: Vec<String> = (1..=n).map(|j| format!("x{j}")).collect();
            let header = format!("q_angle,{},branch_id", coord_header.join(","));
            let rows: Vec<String> = points
                .iter()
                .map(|p| {
                    let angle = directions
                        .iter()
                        .position(|d| *d == p.direction)
                        .map(|i| angles[i])
                        .unwrap_or(f64::NAN);
                    let coords: Vec<String> = p.x.iter().map(|v| v.to_string()).collect();
                    format!("{angle},{},{}", coords.join(","), p.branch)
                })
                .collect();
            emit(out.as_deref(), &csv_document(&hash, &header, &rows))
        }
        Command::Coeffs {
            poly_p,
            poly_q,
            vertex,
            alpha,
            budget,
            out,
        } => {
            let p = load_poly(&poly_p)?;
            let q = load_poly(&poly_q)?;
            let v = ExponentVector::new(parse_i64_list(&vertex)?);
            let a = ExponentVector::new(parse_i64_list(&alpha)?);
            let hash = ConfigHash::new(
                &format!("coeffs;vertex={vertex};alpha={alpha};budget={budget}"),
                &[&poly_p, &poly_q],
            )?;
            let coefficient = amoeba_core::algebra::laurent_oracle(&p, &q, &v, &a, budget)?;
            let doc = json_document(
                &hash,
                json!({
                    "vertex": v.coords(),
                    "alpha": a.coords(),
                    "coefficient": rational_string(&coefficient),
                }),
            );
            emit(out.as_deref(), &doc)
        }
        Command::Asymp {
            poly_p,
            poly_q,
            q,
            k,
            budget,
            out,
        } => {
            let p = load_poly(&poly_p)?;
            let qq = load_poly(&poly_q)?;
            let dir = ExponentVector::new(parse_i64_list(&q)?);
            let ks = parse_u64_list(&k)?;
            let hash = ConfigHash::new(
                &format!("asymp;q={q};k={k};budget={budget}"),
                &[&poly_p, &poly_q],
            )?;
            let (est, rows) = asymptotics::compare(&p, &qq, &dir, &ks, budget)?;
            for w in &est.warnings {
                eprintln!("note: {w}");
            }
            let body: Vec<String> = rows
                .iter()
                .map(|r| {
                    format!(
                        "{},{},{},{}",
                        r.k,
                        rational_string(&r.exact),
                        r.estimate,
                        r.ratio
                    )
                })
                .collect();
            emit(out.as_deref(), &csv_document(&hash, "k,exact,estimate,ratio", &body))
        }
        Command::EnsembleSolve {
            spectrum,
            u,
            systems,
            out,
        } => {
            let s = load_spectrum(&spectrum)?;
            let u_rat = parse_rational_list(&u)?;
            let u_f: Vec<f64> = u_rat.iter().map(rational_to_f64).collect();
            let hash = ConfigHash::new(
                &format!("ensemble-solve;u={u};systems={systems:?}"),
                &[&spectrum],
            )?;
            let solution = ensemble::solve_mean_energy(&s, &u_f)?;
            let temperature: Vec<serde_json::Value> = solution
                .temperature
                .iter()
                .map(|&t| {
                    if t.is_finite() {
                        json!(t)
                    } else {
                        json!("inf")
                    }
                })
                .collect();
            let mut body = json!({
                "u": solution.u,
                "z": solution.z,
                "mu": solution.mu,
                "temperature": temperature,
                "entropy": solution.entropy,
                "grad_norm": solution.grad_norm,
            });
            if let Some(n_systems) = systems {
                let occ = ensemble::occupations(&s, &solution, n_systems);
                body["occupations"] = json!(occ);
                body["systems"] = json!(n_systems);
            }
            emit(out.as_deref(), &json_document(&hash, body))
        }
        Command::EnsembleExact {
            spectrum,
            systems,
            energy,
            out,
        } => {
            let s = load_spectrum(&spectrum)?;
            let e = parse_i64_list(&energy)?;
            let hash = ConfigHash::new(
                &format!("ensemble-exact;systems={systems};energy={energy}"),
                &[&spectrum],
            )?;
            let stats = ensemble::exact_stats(&s, systems, &e)?;
            let averages: Vec<String> = stats.averages.iter().map(rational_string).collect();
            let doc = json_document(
                &hash,
                json!({
                    "systems": stats.n_systems,
                    "energy": stats.energy,
                    "total_states": stats.total_states.to_string(),
                    "averages": averages,
                    "levels": s.points(),
                }),
            );
            emit(out.as_deref(), &doc)
        }
        Command::EnsembleCompare {
            spectrum,
            u,
            systems,
            out,
        } => {
            let s = load_spectrum(&spectrum)?;
            let u_rat = parse_rational_list(&u)?;
            let n_list = parse_u64_list(&systems)?;
            let hash = ConfigHash::new(
                &format!("ensemble-compare;u={u};systems={systems}"),
                &[&spectrum],
            )?;
            let rows = ensemble::compare_average_occupations(&s, &u_rat, &n_list)?;
            let body: Vec<String> = rows
                .iter()
                .map(|r| {
                    format!(
                        "{},{},{},{},{}",
                        r.n_systems,
                        r.k,
                        rational_string(&r.exact),
                        r.asymptotic,
                        r.relative_error
                    )
                })
                .collect();
            emit(
                out.as_deref(),
                &csv_document(&hash, "N,k,exact,asymptotic,rel_error", &body),
            )
        }
        Command::Admissible { spectrum, u } => {
            let s = load_spectrum(&spectrum)?;
            let u_rat = parse_rational_list(&u)?;
            let verdict = s.admissible(&u_rat)?;
            println!("{verdict}");
            Ok(())
        }
    }
}
