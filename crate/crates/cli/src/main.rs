//! `flowjet`: time-1 map inversion, flow jets, Birkhoff constants and
//! seasonal simulation from the command line.

mod repro;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use flowjet::angle::parse_pi_fraction;
use flowjet::io::{self, DriftDoc};
use flowjet::seasonal::{ClassifyConfig, Season};
use flowjet::{
    birkhoff_b1, flow_at, flow_expand, flow_numeric_oracle, integrate_seasonal, invert_map, jet_eval, paradox_demo,
    radial_drift_oracle, resonance_table, Cx, Error, Jet, Monomial, Result, SeasonSchedule,
};

#[derive(Parser)]
#[command(name = "flowjet", version, about = "Vector fields realizing planar map jets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Io {
    /// Input file; stdin when absent or `-`.
    input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Report {
    Resonances,
}

#[derive(Subcommand)]
enum Command {
    /// Find a vector field whose time-1 map has the given jet.
    Invert {
        #[command(flatten)]
        io: Io,
        /// Rotation angle as p/q, meaning α = pπ/q.
        #[arg(long, value_name = "p/q", value_parser = alpha_pi)]
        alpha_pi: Option<f64>,
        /// Value of a free resonant slot, `j,k=re,im`.
        #[arg(long = "free", value_name = "j,k=re,im", value_parser = free_value)]
        free: Vec<(Monomial, Cx<f64>)>,
        #[arg(long, value_enum)]
        report: Option<Report>,
    },
    /// Time-t map jet of a vector field.
    Flow {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_name = "p/q", value_parser = alpha_pi)]
        alpha_pi: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        time: f64,
        /// Jet order; the field's degree by default.
        #[arg(long)]
        order: Option<u32>,
        /// Also compare with numeric integration, writing CSV here.
        #[arg(long, value_name = "CSV")]
        oracle: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-2)]
        oracle_radius: f64,
        #[arg(long, default_value_t = 16)]
        oracle_samples: usize,
    },
    /// First Birkhoff constant of a map jet.
    Birkhoff {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_name = "p/q", value_parser = alpha_pi)]
        alpha_pi: Option<f64>,
        /// Fit the radial drift by iterating the map: `radius,iters`.
        #[arg(long, value_name = "radius,iters", value_parser = oracle_spec)]
        oracle: Option<(f64, usize)>,
    },
    /// Integrate a seasonal schedule and emit the trajectory as CSV.
    Simulate {
        #[command(flatten)]
        io: Io,
        /// Overrides the rotation of every season's field.
        #[arg(long, value_name = "p/q", value_parser = alpha_pi)]
        alpha_pi: Option<f64>,
        #[arg(long, value_name = "re,im", value_parser = complex, allow_hyphen_values = true)]
        z0: Cx<f64>,
        #[arg(long, default_value_t = 100)]
        periods: usize,
        #[arg(long, default_value_t = 16)]
        samples_per_period: usize,
    },
    /// LAS + LAS = repeller, with the time-reversed converse.
    ParadoxDemo {
        #[arg(long, value_name = "re,im", value_parser = complex, default_value = "0,0", allow_hyphen_values = true)]
        mu: Cx<f64>,
        /// Periods per radius in the classification.
        #[arg(long, default_value_t = flowjet::seasonal::DEFAULT_PERIODS)]
        periods: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Directory for per-case trajectory CSVs.
        #[arg(long, value_name = "DIR")]
        csv_dir: Option<PathBuf>,
        /// Starting point of the plotted trajectories.
        #[arg(long, value_name = "re,im", value_parser = complex, default_value = "0.02,0", allow_hyphen_values = true)]
        csv_z0: Cx<f64>,
        #[arg(long, default_value_t = 200)]
        csv_periods: usize,
    },
    /// Reproduce a published claim.
    Repro {
        #[arg(value_enum)]
        target: repro::Target,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn alpha_pi(s: &str) -> std::result::Result<f64, String> {
    parse_pi_fraction(s).map_err(|e| e.to_string())
}

fn pair(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected two comma-separated numbers, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t:?}"));
    Ok((num(a)?, num(b)?))
}

fn complex(s: &str) -> std::result::Result<Cx<f64>, String> {
    let (re, im) = pair(s)?;
    Ok(Cx::new(re, im))
}

fn free_value(s: &str) -> std::result::Result<(Monomial, Cx<f64>), String> {
    let (slot, value) = s.split_once('=').ok_or_else(|| format!("expected j,k=re,im, got {s:?}"))?;
    let (j, k) = slot.split_once(',').ok_or_else(|| format!("expected j,k before '=', got {slot:?}"))?;
    let idx = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("not an index: {t:?}"));
    Ok(((idx(j)?, idx(k)?), complex(value)?))
}

fn oracle_spec(s: &str) -> std::result::Result<(f64, usize), String> {
    let (r, n) = s.split_once(',').ok_or_else(|| format!("expected radius,iters, got {s:?}"))?;
    let radius = r.trim().parse().map_err(|_| format!("not a number: {r:?}"))?;
    let iters = n.trim().parse().map_err(|_| format!("not a count: {n:?}"))?;
    Ok((radius, iters))
}

fn read_input(path: Option<&Path>) -> Result<String> {
    let mut text = String::new();
    match path {
        None => std::io::stdin().read_to_string(&mut text).map(|_| ()),
        Some(p) if p == Path::new("-") => std::io::stdin().read_to_string(&mut text).map(|_| ()),
        Some(p) => std::fs::read_to_string(p).map(|t| text = t),
    }
    .map_err(|e| Error::Usage(format!("cannot read input: {e}")))?;
    Ok(text)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    let mut text = text.to_owned();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match path {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
    .map_err(|e| Error::Usage(format!("cannot write output: {e}")))
}

fn with_alpha<J: Jet<f64>>(jet: J, alpha: Option<f64>) -> Result<J> {
    match alpha {
        Some(a) => J::from_parts(a, jet.degree(), jet.coeffs().clone()),
        None => Ok(jet),
    }
}

fn trajectory_csv(s: &SeasonSchedule<f64>, z0: Cx<f64>, periods: usize, samples: usize) -> Result<String> {
    let traj = integrate_seasonal(s, z0, periods, samples)?;
    let mut csv = String::from("t,z_re,z_im,r2,season\n");
    for p in &traj.samples {
        writeln!(csv, "{},{},{},{},{}", p.t, p.z.re, p.z.im, p.r2, p.season_index).unwrap();
    }
    Ok(csv)
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Invert {
            io,
            alpha_pi,
            free,
            report,
        } => {
            let f = with_alpha(io::parse_map(&read_input(io.input.as_deref())?)?, alpha_pi)?;
            let mut values = BTreeMap::new();
            for (m, v) in free {
                if values.insert(m, v).is_some() {
                    return Err(Error::Usage(format!("free slot ({},{}) given twice", m.0, m.1)));
                }
            }
            let outcome = invert_map(&f, &values)?;
            let text = match report {
                Some(Report::Resonances) => {
                    io::outcome_with_resonances_to_json(&outcome, &resonance_table(f.alpha(), f.degree()))
                }
                None => io::outcome_to_json(&outcome),
            };
            write_output(io.output.as_deref(), &text)?;
        }
        Command::Flow {
            io,
            alpha_pi,
            time,
            order,
            oracle,
            oracle_radius,
            oracle_samples,
        } => {
            let x = with_alpha(io::parse_field(&read_input(io.input.as_deref())?)?, alpha_pi)?;
            let n = order.unwrap_or(x.degree());
            if n < 2 {
                return Err(Error::Usage("order must be at least 2".into()));
            }
            let map = flow_at(&flow_expand(&x, n), time)?;
            if let Some(path) = oracle {
                if oracle_samples == 0 {
                    return Err(Error::Usage("oracle needs at least one sample".into()));
                }
                let pts: Vec<Cx<f64>> = (0..oracle_samples)
                    .map(|k| Cx::from_polar(oracle_radius, std::f64::consts::TAU * k as f64 / oracle_samples as f64))
                    .collect();
                let ode = flow_numeric_oracle(&x, time, &pts)?;
                let mut csv = String::from("z0_re,z0_im,jet_re,jet_im,ode_re,ode_im,abs_err\n");
                for (z, w) in pts.iter().zip(&ode) {
                    let j = jet_eval(&map, *z);
                    let err = (j - w).norm();
                    writeln!(csv, "{},{},{},{},{},{},{}", z.re, z.im, j.re, j.im, w.re, w.im, err).unwrap();
                }
                write_output(Some(&path), &csv)?;
            }
            write_output(io.output.as_deref(), &io::map_to_json(&map))?;
        }
        Command::Birkhoff { io, alpha_pi, oracle } => {
            let f = with_alpha(io::parse_map(&read_input(io.input.as_deref())?)?, alpha_pi)?;
            let report = birkhoff_b1(&f)?;
            let drift = match oracle {
                Some((radius, iterations)) => Some(DriftDoc {
                    radius,
                    iterations,
                    v1_fit: radial_drift_oracle(&f, radius, iterations)?,
                }),
                None => None,
            };
            write_output(io.output.as_deref(), &io::stability_to_json(&report, drift))?;
        }
        Command::Simulate {
            io,
            alpha_pi,
            z0,
            periods,
            samples_per_period,
        } => {
            let mut s = io::parse_schedule(&read_input(io.input.as_deref())?)?;
            if alpha_pi.is_some() {
                let seasons = s
                    .seasons()
                    .iter()
                    .map(|season| {
                        Ok(Season {
                            field: with_alpha(season.field.clone(), alpha_pi)?,
                            duration: season.duration,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                s = SeasonSchedule::new(seasons)?;
            }
            write_output(io.output.as_deref(), &trajectory_csv(&s, z0, periods, samples_per_period)?)?;
        }
        Command::ParadoxDemo {
            mu,
            periods,
            output,
            csv_dir,
            csv_z0,
            csv_periods,
        } => {
            let config = ClassifyConfig {
                periods,
                ..ClassifyConfig::default()
            };
            let report = paradox_demo(mu, &config)?;
            if let Some(dir) = csv_dir {
                std::fs::create_dir_all(&dir).map_err(|e| Error::Usage(format!("cannot create {dir:?}: {e}")))?;
                for (name, s) in flowjet::seasonal::paradox_schedules(mu)? {
                    let stem = name.replace(',', "_");
                    let csv = trajectory_csv(&s, csv_z0, csv_periods, 16)?;
                    write_output(Some(&dir.join(format!("{stem}.csv"))), &csv)?;
                    let csv = trajectory_csv(&s.negated(), csv_z0, csv_periods, 16)?;
                    write_output(Some(&dir.join(format!("neg_{stem}.csv"))), &csv)?;
                }
            }
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            write_output(output.as_deref(), &text)?;
        }
        Command::Repro { target, seed, output } => {
            let outcome = repro::run(target, seed)?;
            write_output(output.as_deref(), &outcome.text)?;
            if !outcome.passed {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn report_error(kind: &str, message: &str, code: u8) -> ExitCode {
    let doc = serde_json::json!({ "error": { "kind": kind, "message": message } });
    eprintln!("{doc}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            return report_error("usage", e.to_string().trim_end(), 2);
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => report_error(e.kind(), &e.to_string(), if e.is_usage() { 2 } else { 1 }),
    }
}
