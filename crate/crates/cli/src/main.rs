use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use spinclone_core::channel::{
    check_dense, covariance_residual, permutation_residual, trace_preservation_residual,
    unit_eigenvalue_verdict,
};
use spinclone_core::optimizer::{max_fidelity_with, sweep_with};
use spinclone_core::report::{
    format_sig17, write_sweep_csv, ChoiReport, FidelityReport, TransformEntry, TransformReport,
};
use spinclone_core::verify::{all_passed, Verifier};
use spinclone_core::{
    build_isometry, choi_from_isometry, choi_spectrum, decompose_triple, CoherentPoint,
    SolverOptions,
};

const THREADS_ENV: &str = "SPINCLONE_THREADS";
const CONJECTURE_TOL: f64 = 1e-8;
const PRINT_TOL: f64 = 1e-14;

#[derive(Parser)]
#[command(
    name = "spinclone",
    version,
    about = "Optimal 1 -> 2 cloning of spin coherent states"
)]
struct Cli {
    /// Output format; `sweep` defaults to csv, everything else to text.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true, visible_alias = "out")]
    output: Option<PathBuf>,
    /// Seed for sampled group elements.
    #[arg(long, global = true, default_value_t = 2005)]
    seed: u64,
    /// Relative gap below which eigenvalues count as degenerate.
    #[arg(long, global = true, value_parser = positive_f64)]
    degeneracy_tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal coherent and universal fidelity for one dimension.
    Fidelity {
        #[arg(long, value_parser = dimension)]
        dim: usize,
    },
    /// Fidelities for d = min..=max as CSV `d,f_coherent,f_universal`.
    Sweep {
        #[arg(long, value_parser = dimension)]
        max: usize,
        #[arg(long, value_parser = dimension, default_value_t = 2)]
        min: usize,
    },
    /// Coefficients <a|R_ns> of the optimal cloning isometry.
    Transform {
        #[arg(long, value_parser = dimension)]
        dim: usize,
    },
    /// Choi operator spectrum and channel residuals (d <= 12).
    Choi {
        #[arg(long, value_parser = dimension)]
        dim: usize,
        /// Number of sampled rotations for the covariance residual.
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Invariant subspaces of V ⊗ V ⊗ V*.
    Decompose {
        #[arg(long, value_parser = dimension)]
        dim: usize,
        /// Include basis amplitudes.
        #[arg(long)]
        basis: bool,
    },
    /// Run the acceptance checks; exit status 1 if any fails.
    Verify {
        /// Same as `--format json`.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

fn dimension(s: &str) -> Result<usize, String> {
    let d: usize = s.parse().map_err(|e| format!("{e}"))?;
    if d < 2 {
        return Err(format!("dimension must be at least 2, got {d}"));
    }
    Ok(d)
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(format!("tolerance must be positive, got {x}"));
    }
    Ok(x)
}

enum Failure {
    Usage(String),
    Compute(String),
    /// Checks ran but at least one failed; the report is already written.
    Checks,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Compute(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Checks) => ExitCode::from(1),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::Usage(format!(
            "{THREADS_ENV} must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    let opts = match cli.degeneracy_tol {
        Some(tol) => SolverOptions::with_degeneracy_tol(tol)?,
        None => SolverOptions::default(),
    };
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(io::BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    let format = cli.format;
    let text = |default| format.unwrap_or(default);

    match cli.command {
        Command::Fidelity { dim } => {
            let rep = FidelityReport::from(&max_fidelity_with(dim, &opts)?);
            match text(Format::Text) {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rep)?)?,
                Format::Csv => {
                    writeln!(out, "d,f_coherent,f_universal,lambda_max,multiplicity")?;
                    writeln!(
                        out,
                        "{},{},{},{},{}",
                        rep.d,
                        format_sig17(rep.f_coherent),
                        format_sig17(rep.f_universal),
                        format_sig17(rep.lambda_max),
                        rep.multiplicity
                    )?;
                }
                Format::Text => {
                    writeln!(out, "d            {}", rep.d)?;
                    writeln!(out, "f_coherent   {:.12}", rep.f_coherent)?;
                    writeln!(out, "f_universal  {:.12}", rep.f_universal)?;
                    writeln!(out, "lambda_max   {:.12}", rep.lambda_max)?;
                    writeln!(out, "multiplicity {}", rep.multiplicity)?;
                }
            }
        }
        Command::Sweep { max, min } => {
            if min > max {
                return Err(Failure::Usage(format!("--min {min} exceeds --max {max}")));
            }
            let rows = sweep_with(min, max, &opts)?;
            match text(Format::Csv) {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?,
                Format::Csv => write_sweep_csv(&rows, &mut out)?,
                Format::Text => {
                    writeln!(
                        out,
                        "{:>3}  {:>14}  {:>14}",
                        "d", "f_coherent", "f_universal"
                    )?;
                    for r in &rows {
                        writeln!(
                            out,
                            "{:>3}  {:>14.10}  {:>14.10}",
                            r.d, r.f_coherent, r.f_universal
                        )?;
                    }
                }
            }
        }
        Command::Transform { dim } => {
            let sol = max_fidelity_with(dim, &opts)?;
            let iso = build_isometry(&sol)?;
            let basis = iso.basis();
            let mut entries = Vec::new();
            for (n, comp) in iso.components().iter().enumerate() {
                for s in 0..comp.nrows() {
                    for a in 0..comp.ncols() {
                        let z = comp[(s, a)];
                        if z.norm() > PRINT_TOL {
                            let (i, j) = basis.pair(s);
                            entries.push(TransformEntry {
                                n,
                                s: [i, j],
                                a,
                                re: z.re,
                                im: z.im,
                            });
                        }
                    }
                }
            }
            let rep = TransformReport {
                d: dim,
                ancilla_dim: iso.ancilla_dim(),
                fidelity: sol.fidelity,
                isometry_residual: iso.isometry_residual(),
                entries,
            };
            match text(Format::Text) {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rep)?)?,
                Format::Csv => {
                    writeln!(out, "n,i,j,a,re,im")?;
                    for e in &rep.entries {
                        writeln!(
                            out,
                            "{},{},{},{},{},{}",
                            e.n,
                            e.s[0],
                            e.s[1],
                            e.a,
                            format_sig17(e.re),
                            format_sig17(e.im)
                        )?;
                    }
                }
                Format::Text => {
                    writeln!(
                        out,
                        "d = {}, ancilla dimension {}, F = {:.12}",
                        rep.d, rep.ancilla_dim, rep.fidelity
                    )?;
                    writeln!(out, "isometry residual {:.3e}", rep.isometry_residual)?;
                    let mut current = None;
                    for e in &rep.entries {
                        if current != Some(e.n) {
                            writeln!(out, "|{}> ->", e.n)?;
                            current = Some(e.n);
                        }
                        let amp = if e.im.abs() > PRINT_TOL {
                            format!("{:+.10}{:+.10}i", e.re, e.im)
                        } else {
                            format!("{:+.10}", e.re)
                        };
                        writeln!(out, "    {amp} |{},{}>|A{}>", e.s[0], e.s[1], e.a)?;
                    }
                }
            }
        }
        Command::Choi { dim, samples } => {
            // refuse before paying for the eigensolve
            check_dense(dim)?;
            let iso = build_isometry(&max_fidelity_with(dim, &opts)?)?;
            let p = choi_from_isometry(&iso)?;
            let eigenvalues = choi_spectrum(&p)?;
            let rep = ChoiReport {
                d: dim,
                conjecture: unit_eigenvalue_verdict(&eigenvalues, dim, CONJECTURE_TOL),
                trace_residual: trace_preservation_residual(&p),
                covariance_residual: covariance_residual(
                    &p,
                    &CoherentPoint::sample(samples, cli.seed),
                )?,
                permutation_residual: permutation_residual(&p),
                eigenvalues,
            };
            match text(Format::Text) {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rep)?)?,
                Format::Csv => {
                    writeln!(out, "k,eigenvalue")?;
                    for (k, v) in rep.eigenvalues.iter().enumerate() {
                        writeln!(out, "{k},{}", format_sig17(*v))?;
                    }
                }
                Format::Text => {
                    let shown: Vec<String> = rep
                        .eigenvalues
                        .iter()
                        .take(dim + 2)
                        .map(|v| format!("{v:.10}"))
                        .collect();
                    writeln!(
                        out,
                        "d = {}, {} eigenvalues, leading: {}",
                        rep.d,
                        rep.eigenvalues.len(),
                        shown.join(" ")
                    )?;
                    writeln!(out, "trace residual        {:.3e}", rep.trace_residual)?;
                    writeln!(
                        out,
                        "covariance residual   {:.3e} ({samples} rotations)",
                        rep.covariance_residual
                    )?;
                    writeln!(
                        out,
                        "permutation residual  {:.3e}",
                        rep.permutation_residual
                    )?;
                    let v = &rep.conjecture;
                    writeln!(
                        out,
                        "{dim} unit eigenvalues, rest zero: {} (top deviation {:.1e}, tail {:.1e}, tol {:.0e})",
                        if v.holds { "holds" } else { "fails" },
                        v.top_deviation,
                        v.tail_max,
                        v.tolerance
                    )?;
                }
            }
        }
        Command::Decompose { dim, basis } => {
            let table = decompose_triple(dim)?.table(basis);
            match text(Format::Text) {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&table)?)?,
                Format::Csv => {
                    writeln!(out, "space,dimension,spin,pair_spin,symmetry")?;
                    for r in &table.subspaces {
                        writeln!(
                            out,
                            "{},{},{},{},{}",
                            r.space,
                            r.dimension,
                            r.spin,
                            r.pair_spin,
                            r.symmetry.tag()
                        )?;
                    }
                }
                Format::Text => write!(out, "{}", table.to_text())?,
            }
        }
        Command::Verify { json } => {
            let outcomes = Verifier {
                seed: cli.seed,
                ..Verifier::default()
            }
            .run_all();
            if json || format == Some(Format::Json) {
                writeln!(out, "{}", serde_json::to_string_pretty(&outcomes)?)?;
            } else {
                for o in &outcomes {
                    writeln!(out, "{}", o.line())?;
                }
            }
            out.flush()?;
            if !all_passed(&outcomes) {
                return Err(Failure::Checks);
            }
        }
    }
    out.flush()?;
    Ok(())
}
