use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use discmeans::fit::{dyadic_deltas, dyadic_radii, fit_exponent, DEFAULT_FLOOR_EPS};
use discmeans::measures::default_grid_size;
use discmeans::means::mean_profile;
use discmeans::verify::example2_measure;
use discmeans::*;

#[derive(Debug, Parser)]
#[command(name = "discmeans", version, about = "Integral means and box statistics in the unit disc")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Theorem {
    Box,
    Stolz,
    Growth,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate u(z) for a spec file (log|B(z)| for a zero file).
    Eval {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_complex)]
        z: Complex64,
    },
    /// Integral means m_p(r) on r = 1 - 2^-j.
    Means {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long, value_parser = parse_dyadic)]
        r_dyadic: (u32, u32),
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Carleson-box integral L(delta, p) on delta = 2^-j.
    Boxmass {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long, value_parser = parse_dyadic)]
        delta_dyadic: (u32, u32),
        /// Exact breakpoint sweep instead of a midpoint grid.
        #[arg(long)]
        exact: bool,
        /// Genus used when the input is a bare zero file.
        #[arg(long, default_value_t = 0)]
        s: u32,
    },
    /// Fit y ~ A x^e from two CSV columns.
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        x_col: String,
        #[arg(long)]
        y_col: String,
    },
    /// I(r) and J(r) on a dyadic grid, or psi_r and Phi on the boundary with --r.
    Classical {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_dyadic, required_unless_present = "r")]
        r_dyadic: Option<(u32, u32)>,
        #[arg(long, conflicts_with = "r_dyadic")]
        r: Option<f64>,
        #[arg(long, default_value_t = 1024)]
        n_theta: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Write the lattice zeros (1 - 2^-k) e^{im 2^-k} with multiplicity 2^{alpha k} and print their genus.
    #[command(name = "gen-example1")]
    GenExample1 {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        kmax: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate Re (1 - z)^-(q+1).
    Example2 {
        #[arg(long, allow_negative_numbers = true)]
        q: f64,
        #[arg(long, value_parser = parse_complex)]
        z: Complex64,
    },
    /// Run a theorem harness and print its report.
    Verify {
        #[arg(long, value_enum)]
        theorem: Theorem,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        tolerance: f64,
        #[arg(long, value_parser = parse_dyadic, default_value = "4:12")]
        r_dyadic: (u32, u32),
        #[arg(long, value_parser = parse_dyadic, default_value = "4:12")]
        delta_dyadic: (u32, u32),
        /// Stolz-angle vertices (comma separated angles).
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "0")]
        vertices: Vec<f64>,
        /// Genus for the growth harness.
        #[arg(long)]
        s: Option<u32>,
        /// Target exponent for the growth harness.
        #[arg(long)]
        alpha: Option<f64>,
    },
}

enum Failure {
    Input(String),
    NonConvergence(String),
    Inconsistent,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. } => Failure::NonConvergence(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn parse_dyadic(s: &str) -> std::result::Result<(u32, u32), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected J0:J1, got {s:?}"))?;
    let a: u32 = a.trim().parse().map_err(|e| format!("bad J0 in {s:?}: {e}"))?;
    let b: u32 = b.trim().parse().map_err(|e| format!("bad J1 in {s:?}: {e}"))?;
    if a > b || b > 60 {
        return Err(format!("need J0 <= J1 <= 60, got {s:?}"));
    }
    Ok((a, b))
}

/// Parses `a`, `bi`, `a+bi` or `a-bi`, each number with optional sign and exponent.
fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("expected a complex number like 0.3-0.2i, got {s:?}");
    let num = |x: &str| -> std::result::Result<f64, String> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse::<f64>().map_err(|_| bad()),
        }
    };
    let Some(body) = t.strip_suffix('i') else {
        return match t.parse::<f64>() {
            Ok(re) if re.is_finite() => Ok(Complex64::new(re, 0.0)),
            _ => Err(bad()),
        };
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().map_err(|_| bad())?, num(&body[k..])?),
        None => (0.0, num(body)?),
    };
    if re.is_finite() && im.is_finite() {
        Ok(Complex64::new(re, im))
    } else {
        Err(bad())
    }
}

/// Shortest text that reads back to the same `f64`.
fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn point(z: Complex64) -> std::result::Result<DiscPoint, Failure> {
    Ok(DiscPoint::from_complex(z)?)
}

fn write_table(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Outcome {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(std::io::stdout().lock());
    let io = |e: csv::Error| Failure::Input(format!("writing CSV: {e}"));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row.into_iter().map(fmt_f64)).map_err(io)?;
    }
    w.flush().map_err(|e| Failure::Input(format!("writing CSV: {e}")))
}

/// A measure document, or a zero file read as unit atoms at genus `s`.
fn read_measure(text: &str, s: u32) -> std::result::Result<MeasureDocument, Failure> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Failure::Input(format!("JSON: {e}")))?;
    if value.get("zeros").is_some() {
        let zeros = ZeroSequence::from_json(text)?;
        Ok(MeasureDocument { s, measure: zeros.to_measure() })
    } else {
        Ok(MeasureDocument::from_json(text)?)
    }
}

fn fit_csv(path: &Path, x_col: &str, y_col: &str) -> std::result::Result<GrowthFit, Failure> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let headers = rdr.headers().map_err(|e| Failure::Input(e.to_string()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Failure::Input(format!("column {name:?} not in header {headers:?}")))
    };
    let (xi, yi) = (col(x_col)?, col(y_col)?);
    let mut samples = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Failure::Input(e.to_string()))?;
        let cell = |i: usize| {
            record
                .get(i)
                .and_then(|v| v.trim().parse::<f64>().ok())
                .ok_or_else(|| Failure::Input(format!("non-numeric cell in row {record:?}")))
        };
        samples.push((cell(xi)?, cell(yi)?));
    }
    Ok(fit_exponent(&samples, DEFAULT_FLOOR_EPS)?)
}

fn verify(
    theorem: Theorem,
    text: &str,
    p: f64,
    tolerance: f64,
    r_grid: DyadicRange,
    delta_grid: DyadicRange,
    vertices: &[f64],
    s: Option<u32>,
    alpha: Option<f64>,
) -> std::result::Result<VerificationReport, Failure> {
    Ok(match theorem {
        Theorem::Box => {
            let (lambda, u) = match SubharmonicSpec::from_json(text)? {
                SubharmonicSpec::ClosedForm(ClosedForm::Example2 { q }) => {
                    if q.fract() != 0.0 || q < 0.0 {
                        return Err(Failure::Input(format!("box harness needs integer q >= 0, got {q}")));
                    }
                    (example2_measure(q as u32), SubharmonicSpec::ClosedForm(ClosedForm::Example2 { q }))
                }
                SubharmonicSpec::BlaschkeLogMod(zeros) => {
                    (build_complete_measure(&zeros.to_measure(), 0), SubharmonicSpec::BlaschkeLogMod(zeros))
                }
                SubharmonicSpec::Representation { lambda, c } => {
                    (lambda.clone(), SubharmonicSpec::Representation { lambda, c })
                }
                _ => return Err(Failure::Input("box harness needs zeros, a measure or example2".into())),
            };
            let genus = lambda.s();
            verify_box_vs_means(&lambda, &u, genus, p, delta_grid, r_grid, tolerance)?
        }
        Theorem::Stolz => {
            let zeros = ZeroSequence::from_json(text)?;
            verify_stolz(&zeros, vertices, p, r_grid, tolerance)?
        }
        Theorem::Growth => {
            let alpha = alpha.ok_or_else(|| Failure::Input("growth harness needs --alpha".into()))?;
            let doc = read_measure(text, s.unwrap_or(0))?;
            let genus = s.unwrap_or(doc.s);
            verify_growth_sufficiency(&doc.measure, genus, p, alpha, r_grid, tolerance)?
        }
    })
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Eval { input, z } => {
            let u = SubharmonicSpec::from_json(&read(&input)?)?;
            println!("{}", fmt_f64(u.eval(point(z)?)?));
        }
        Command::Means { input, p, r_dyadic, tol } => {
            let u = SubharmonicSpec::from_json(&read(&input)?)?;
            let radii = dyadic_radii(r_dyadic.0, r_dyadic.1);
            let means = mean_profile(&u, &radii, p, tol)?;
            write_table(&["r", "m_p"], radii.iter().zip(&means).map(|(&r, &m)| vec![r, m]))?;
        }
        Command::Boxmass { input, p, delta_dyadic, exact, s } => {
            let doc = read_measure(&read(&input)?, s)?;
            let lambda = build_complete_measure(&doc.measure, doc.s);
            let mode = if exact {
                BoxIntegralMode::ExactBreakpoints
            } else {
                BoxIntegralMode::Grid(default_grid_size(lambda.atom_count()))
            };
            let deltas = dyadic_deltas(delta_dyadic.0, delta_dyadic.1);
            let rows = deltas
                .iter()
                .map(|&d| Ok(vec![d, box_mass_integral(&lambda, d, p, mode, MassKind::Signed)?]))
                .collect::<Result<Vec<_>>>()?;
            write_table(&["delta", "L"], rows)?;
        }
        Command::Fit { input, x_col, y_col } => {
            println!("{}", fit_csv(&input, &x_col, &y_col)?.to_json());
        }
        Command::Classical { input, r_dyadic, r, n_theta, tol } => {
            let zeros = ZeroSequence::from_json(&read(&input)?)?;
            if let Some(r) = r {
                let psi = BoundaryFunctionSample::psi(&zeros, r, n_theta)?;
                let phi = BoundaryFunctionSample::stolz(&zeros, n_theta)?;
                let psi_name = if r == 0.0 { "psi0" } else { "psi_r" };
                let rows = (0..n_theta).map(|k| vec![psi.thetas()[k], psi.values()[k], phi.values()[k]]);
                write_table(&["theta", psi_name, "Phi"], rows)?;
            } else {
                let (j0, j1) = r_dyadic.expect("clap enforces --r-dyadic without --r");
                let rows = dyadic_radii(j0, j1)
                    .into_iter()
                    .map(|r| Ok(vec![r, i_mean(&zeros, r, tol)?, j_sum(&zeros, r, tol)?.value]))
                    .collect::<Result<Vec<_>>>()?;
                write_table(&["r", "I", "J"], rows)?;
            }
        }
        Command::GenExample1 { alpha, beta, kmax, out } => {
            let (zeros, s) = gen_example1(alpha, beta, kmax)?;
            if let Some(out) = out {
                fs::write(&out, zeros.to_json() + "\n")
                    .map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
            }
            println!("{s}");
        }
        Command::Example2 { q, z } => {
            println!("{}", fmt_f64(example2_logmod(q, point(z)?)?));
        }
        Command::Verify { theorem, input, p, tolerance, r_dyadic, delta_dyadic, vertices, s, alpha } => {
            let r_grid = DyadicRange::new(r_dyadic.0, r_dyadic.1)?;
            let delta_grid = DyadicRange::new(delta_dyadic.0, delta_dyadic.1)?;
            let report = verify(theorem, &read(&input)?, p, tolerance, r_grid, delta_grid, &vertices, s, alpha)?;
            println!("{}", report.to_json());
            if !report.consistent {
                return Err(Failure::Inconsistent);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    eprintln!("{:?}", cli.command);
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Inconsistent) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::NonConvergence(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
