//! Command-line front end: build convergent tables, sweep the boundary
//! envelope and the field, sample metric curvature, run the verification
//! suites, export the envelope-versus-square-root comparison, and dump the
//! toric descriptor.
//!
//! Conventions shared by every subcommand:
//! - digit input is one of `--digits` (inline), `--periodic` (block repeated
//!   to depth), or `--digits-file` (newline-delimited); the truncation depth
//!   `--depth` is always explicit because it controls truncation error;
//! - CSV output starts with a `# cfmetric <version>` comment line and every
//!   float is printed with 17 significant digits so values round-trip;
//! - JSON documents carry a `version` field;
//! - reruns with identical arguments produce byte-identical output;
//! - exit codes: 0 success, 1 a verified property failed (suite failure,
//!   figure comparison violation), 2 usage or runtime error;
//! - sweeps parallelize through the thread pool, sized by `RAYON_NUM_THREADS`.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cfmetric::boundary::BoundaryData;
use cfmetric::convergents::ConvergentTable;
use cfmetric::curvature::curvature_at;
use cfmetric::digits::DigitSequence;
use cfmetric::error::{Error, Result};
use cfmetric::field::{field_sample, field_sample_with_w};
use cfmetric::metric::EnvelopeMetric;
use cfmetric::rat::{fmt_f64, rat_to_f64, ratio};
use cfmetric::topology::polygon_descriptor;
use cfmetric::verify;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "cfmetric",
    version,
    about = "Self-dual Einstein metrics from bounded digit sequences",
    after_help = "Exit codes: 0 success, 1 verified property failed, 2 usage/runtime error.\n\
                  Thread count: set RAYON_NUM_THREADS."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact convergent table: pairs, corners, weights, enclosure.
    Convergents {
        #[command(flatten)]
        digits: DigitArgs,
        /// Emit the full JSON document instead of the CSV table.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Envelope sweep: eta and the odd-extended boundary datum on an x grid.
    Envelope {
        #[command(flatten)]
        digits: DigitArgs,
        /// Grid LO:HI:N over x.
        #[arg(long, value_parser = parse_grid1)]
        grid: Grid1,
        #[command(flatten)]
        out: OutArg,
    },
    /// Field sweep: f, gradient, w (both routes), truncation bound.
    Field {
        #[command(flatten)]
        digits: DigitArgs,
        /// Grid XLO:XHI:NX,YLO:YHI:NY.
        #[arg(long, value_parser = parse_grid2)]
        grid: Grid2,
        /// Truncation budget per point; evaluation refuses points where the
        /// a-posteriori bound exceeds it. Default: unbounded (report only).
        #[arg(long)]
        tol: Option<f64>,
    #[command(flatten)]
        out: OutArg,
    },
    /// Curvature sweep: Einstein residual, constant, Weyl half norms.
    Metric {
        #[command(flatten)]
        digits: DigitArgs,
        /// Grid XLO:XHI:NX,YLO:YHI:NY.
        #[arg(long, value_parser = parse_grid2)]
        grid: Grid2,
        /// Coarse finite-difference step (the report extrapolates h, h/2).
        #[arg(long, default_value_t = 2e-3)]
        h: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run every verification suite; exit 1 if any case fails.
    Verify {
        #[command(flatten)]
        digits: DigitArgs,
        /// Seed for the randomized corpora.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Emit the full JSON report (summary lines move to stderr).
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Toric descriptor: edge labels, intersection data, enclosure.
    Topology {
        #[command(flatten)]
        digits: DigitArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Envelope versus sqrt(sqrt(5) (x - alpha_hat)) on (alpha_hat, 1].
    ///
    /// The comparison constant is specific to the all-3 expansion; for all-3
    /// input the envelope column is asserted <= the sqrt column (1e-9 slack)
    /// and a violation exits 1. Other digit sequences get the columns
    /// without the assertion.
    Figure1 {
        #[command(flatten)]
        digits: DigitArgs,
        /// Number of sample points on (alpha_hat, 1].
        #[arg(long, default_value_t = 512)]
        points: usize,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args)]
struct DigitArgs {
    /// Inline digit list, e.g. 3,4,3 (each digit >= 3).
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["periodic", "digits_file"])]
    digits: Option<Vec<u32>>,
    /// Periodic block, repeated as far as the depth requires.
    #[arg(long, value_delimiter = ',', conflicts_with = "digits_file")]
    periodic: Option<Vec<u32>>,
    /// Newline-delimited digit file.
    #[arg(long)]
    digits_file: Option<PathBuf>,
    /// Truncation depth J (explicit: it controls the truncation error).
    #[arg(long)]
    depth: usize,
}

impl DigitArgs {
    fn sequence(&self) -> Result<DigitSequence> {
        if let Some(d) = &self.digits {
            return DigitSequence::inline(d.clone());
        }
        if let Some(p) = &self.periodic {
            return DigitSequence::periodic(p.clone());
        }
        if let Some(path) = &self.digits_file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
            let parsed: std::result::Result<Vec<u32>, _> = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(str::parse)
                .collect();
            return DigitSequence::inline(
                parsed.map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?,
            );
        }
        Err(Error::Invalid(
            "one of --digits, --periodic, --digits-file is required".to_string(),
        ))
    }

    fn table(&self) -> Result<ConvergentTable> {
        ConvergentTable::build(&self.sequence()?, self.depth)
    }

    /// Sequence gated on metric admissibility (`e_j >= 3` throughout): the
    /// boundary envelope, field, metric, and suites are only defined there.
    /// Plain `e_j >= 2` expansions remain available through `convergents`.
    fn metric_sequence(&self) -> Result<DigitSequence> {
        let seq = self.sequence()?;
        if !seq.is_metric_admissible() {
            return Err(Error::Invalid(
                "digit sequence is not metric admissible (every digit must be >= 3)"
                    .to_string(),
            ));
        }
        Ok(seq)
    }

    fn metric_table(&self) -> Result<ConvergentTable> {
        ConvergentTable::build(&self.metric_sequence()?, self.depth)
    }

    fn all_three(&self) -> Result<bool> {
        Ok(self.sequence()?.take(self.depth)?.iter().all(|&e| e == 3))
    }
}

#[derive(Args)]
struct OutArg {
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OutArg {
    fn write(&self, payload: &str) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, payload)
                .map_err(|e| Error::Invalid(format!("{}: {e}", path.display()))),
            None => {
                print!("{payload}");
                Ok(())
            }
        }
    }
}

/// One-dimensional grid `LO:HI:N`, endpoints included.
#[derive(Clone, Copy, Debug)]
struct Grid1 {
    lo: f64,
    hi: f64,
    n: usize,
}

impl Grid1 {
    fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        (0..self.n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64)
            .collect()
    }
}

#[derive(Clone, Copy, Debug)]
struct Grid2 {
    x: Grid1,
    y: Grid1,
}

fn parse_grid1(s: &str) -> std::result::Result<Grid1, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(format!("expected LO:HI:N, got {s:?}"));
    };
    let grid = Grid1 {
        lo: lo.parse().map_err(|e| format!("LO: {e}"))?,
        hi: hi.parse().map_err(|e| format!("HI: {e}"))?,
        n: n.parse().map_err(|e| format!("N: {e}"))?,
    };
    if grid.n == 0 {
        return Err("N must be positive".to_string());
    }
    Ok(grid)
}

fn parse_grid2(s: &str) -> std::result::Result<Grid2, String> {
    let (xs, ys) = s
        .split_once(',')
        .ok_or_else(|| format!("expected XLO:XHI:NX,YLO:YHI:NY, got {s:?}"))?;
    Ok(Grid2 {
        x: parse_grid1(xs)?,
        y: parse_grid1(ys)?,
    })
}

fn csv_header(columns: &str) -> String {
    format!("# cfmetric {VERSION}\n{columns}\n")
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Convergents { digits, json, out } => {
            let table = digits.table()?;
            if json {
                let mut doc = table.to_json();
                doc["version"] = serde_json::Value::String(VERSION.to_string());
                out.write(&format!("{:#}\n", doc))?;
            } else {
                let mut csv = csv_header("j,m,n,corner,weight");
                for j in 0..=table.depth() {
                    let (m, n) = table.pair(j);
                    let _ = writeln!(
                        csv,
                        "{j},{m},{n},{},{}",
                        table.corner(j),
                        table.weight(j)
                    );
                }
                out.write(&csv)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Envelope { digits, grid, out } => {
            let b = BoundaryData::new(digits.metric_table()?);
            let mut csv = csv_header("x,eta,u");
            for x in grid.points() {
                let eta = b.envelope_eval(x)?;
                let u = b.boundary_u(x)?;
                let _ = writeln!(csv, "{},{},{}", fmt_f64(x), fmt_f64(eta), fmt_f64(u));
            }
            out.write(&csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Field {
            digits,
            grid,
            tol,
            out,
        } => {
            let b = BoundaryData::new(digits.metric_table()?);
            let tol = tol.unwrap_or(f64::INFINITY);
            let mut csv = csv_header("x,y,f,f_x,f_y,w_alg,w_int,trunc_bound,J_used");
            for x in grid.x.points() {
                for y in grid.y.points() {
                    // The double-sum route is refused below y = 1e-3 (its
                    // y^-2 prefactor is ill-conditioned there); the column
                    // stays empty at such rows.
                    let s = if y >= 1e-3 {
                        field_sample_with_w(&b, x, y, tol)?
                    } else {
                        field_sample(&b, x, y, tol)?
                    };
                    let w_int = s.w_int.map(fmt_f64).unwrap_or_default();
                    let _ = writeln!(
                        csv,
                        "{},{},{},{},{},{},{w_int},{},{}",
                        fmt_f64(x),
                        fmt_f64(y),
                        fmt_f64(s.f),
                        fmt_f64(s.f_x),
                        fmt_f64(s.f_y),
                        fmt_f64(s.w_alg),
                        fmt_f64(s.trunc_bound),
                        s.j_used
                    );
                }
            }
            out.write(&csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Metric {
            digits,
            grid,
            h,
            out,
        } => {
            let b = BoundaryData::new(digits.metric_table()?);
            let metric = EnvelopeMetric {
                boundary: &b,
                tol: f64::INFINITY,
            };
            let mut csv = csv_header("x,y,residual,lambda,weyl_sd,weyl_asd");
            for x in grid.x.points() {
                for y in grid.y.points() {
                    let r = curvature_at(&metric, x, y, h)?;
                    let _ = writeln!(
                        csv,
                        "{},{},{},{},{},{}",
                        fmt_f64(x),
                        fmt_f64(y),
                        fmt_f64(r.einstein_residual),
                        fmt_f64(r.lambda),
                        fmt_f64(r.weyl_sd_norm),
                        fmt_f64(r.weyl_asd_norm)
                    );
                }
            }
            out.write(&csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify {
            digits,
            seed,
            json,
            out,
        } => {
            let seq = digits.metric_sequence()?;
            let suites = verify::run_all(&seq, digits.depth, seed)?;
            let all_pass = suites.iter().all(|s| s.pass);
            for s in &suites {
                if json {
                    eprintln!("{}", s.summary_line());
                } else {
                    println!("{}", s.summary_line());
                }
            }
            if json {
                let doc = serde_json::json!({
                    "version": VERSION,
                    "seed": seed,
                    "depth": digits.depth,
                    "pass": all_pass,
                    "suites": suites,
                });
                out.write(&format!("{:#}\n", doc))?;
            }
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Cmd::Topology { digits, out } => {
            let table = digits.metric_table()?;
            let descriptor = polygon_descriptor(&table);
            let mut doc = serde_json::to_value(&descriptor)
                .map_err(|e| Error::Invalid(e.to_string()))?;
            doc["version"] = serde_json::Value::String(VERSION.to_string());
            out.write(&format!("{:#}\n", doc))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Figure1 {
            digits,
            points,
            out,
        } => {
            if points < 2 {
                return Err(Error::Invalid("--points must be at least 2".to_string()));
            }
            let assert_bound = digits.all_three()?;
            let b = BoundaryData::new(digits.metric_table()?);
            let ah = b.alpha_hat();
            let span = ratio(1, 1) - ah;
            let root5 = 5f64.sqrt();
            let mut csv = csv_header("x,eta,sqrt_bound");
            let mut violation: Option<(f64, f64, f64)> = None;
            for i in 1..=points {
                // dx built exactly so the square root never sees the
                // cancellation of x - alpha_hat near the left end.
                let dx = &span * ratio(i as i64, 1) / ratio(points as i64, 1);
                let x = ah + &dx;
                let eta = rat_to_f64(&b.envelope_exact(&x)?);
                let dxf = rat_to_f64(&dx);
                let bound = (root5 * dxf).sqrt();
                if assert_bound && eta > bound + 1e-9 && violation.is_none() {
                    violation = Some((rat_to_f64(&x), eta, bound));
                }
                let _ = writeln!(
                    csv,
                    "{},{},{}",
                    fmt_f64(rat_to_f64(&x)),
                    fmt_f64(eta),
                    fmt_f64(bound)
                );
            }
            out.write(&csv)?;
            if let Some((x, eta, bound)) = violation {
                eprintln!(
                    "figure1: envelope exceeds the square-root bound at x = {}: \
                     eta = {} > {}",
                    fmt_f64(x),
                    fmt_f64(eta),
                    fmt_f64(bound)
                );
                return Ok(ExitCode::FAILURE);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("cfmetric: {e}");
            ExitCode::from(2)
        }
    }
}
