//! The `slopecert` command line.
//!
//! Exit codes: 0 success, 1 error, 2 minimal polystable surface
//! (`destabilize` only), 3 certificate rejected (`verify` only).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use crate::autgroup::matsushima_verdict;
use crate::destabilize::{
    destabilize, verify, Certificate, DestabilizeOptions, Verdict, VerifyReport,
};
use crate::error::{Error, Result};
use crate::futaki::{df_slope, minimize_on_candidates, slope, SlopeInput};
use crate::lattice::DivisorClass;
use crate::positivity::{hirzebruch_coords, seshadri_at_z};
use crate::rational::{approx, fmt_q, parse_q_lenient, qi, Q};
use crate::surface::SurfacePresentation;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_POLYSTABLE: i32 = 2;
pub const EXIT_REJECTED: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "slopecert",
    version,
    about = "Exact K-instability certificates for polarized rational surfaces"
)]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; each subcommand accepts a subset.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Append decimal approximations next to exact values.
    #[arg(long, global = true)]
    pub approx: bool,
}

#[derive(Debug, Args)]
pub struct Depths {
    /// Number of dyadic samples when searching for lambda.
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u32).range(1..))]
    pub lambda_depth: u32,
    /// Halving depth for each epsilon.
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
    pub epsilon_depth: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a presentation and print its lattice data.
    Parse { presentation: String },
    /// Build and check a destabilizing certificate.
    Destabilize {
        presentation: String,
        /// Write the certificate here (atomically).
        #[arg(long)]
        emit: Option<PathBuf>,
        #[command(flatten)]
        depths: Depths,
    },
    /// Replay a certificate file.
    Verify { path: PathBuf },
    /// Evaluate DF of the slope test configuration of Z on a Hirzebruch surface.
    Df {
        /// Bare Hirzebruch surface, e.g. "F(1)".
        #[arg(long)]
        surface: String,
        /// Coefficients of L in the basis (Z, F), comma separated.
        #[arg(long = "class", value_delimiter = ',', num_args = 1..)]
        class: Vec<String>,
        #[arg(long)]
        lambda: String,
    },
    /// Sweep L = Z + tF on F(n) for t on a grid in (n, n + range].
    Scan {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "4")]
        range: String,
        /// Number of grid points.
        #[arg(long)]
        grid: usize,
        #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u32).range(1..))]
        lambda_depth: u32,
    },
    /// Reductivity of Aut0 for a toric presentation.
    Reductivity { presentation: String },
}

struct Out<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
    approx: bool,
}

impl Out<'_> {
    fn q(&self, x: &Q) -> String {
        if self.approx {
            format!("{} (approx {})", fmt_q(x), approx(x))
        } else {
            fmt_q(x)
        }
    }

    fn line(&mut self, s: &str) {
        let _ = writeln!(self.stdout, "{s}");
    }

    fn err(&mut self, s: &str) {
        let _ = writeln!(self.stderr, "slopecert: {s}");
    }
}

fn format_for(requested: Option<Format>, allowed: &[Format], name: &str) -> Result<Format> {
    match requested {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => Err(Error::Usage(
            format!("--format {f:?} is not available for `{name}`").to_lowercase(),
        )),
    }
}

fn json_line(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("json value")
}

/// Run the CLI on `args` (including the program name) and return the exit
/// code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    let mut out = Out {
        stdout,
        stderr,
        approx: config.approx,
    };
    match dispatch(&config, &mut out) {
        Ok(code) => code,
        Err(e) => {
            out.err(&e.to_string());
            EXIT_ERROR
        }
    }
}

fn dispatch(config: &CliConfig, out: &mut Out<'_>) -> Result<i32> {
    match &config.command {
        Command::Parse { presentation } => cmd_parse(presentation, config.format, out),
        Command::Destabilize {
            presentation,
            emit,
            depths,
        } => cmd_destabilize(presentation, emit.as_ref(), depths, config.format, out),
        Command::Verify { path } => cmd_verify(path, config.format, out),
        Command::Df {
            surface,
            class,
            lambda,
        } => cmd_df(surface, class, lambda, config.format, out),
        Command::Scan {
            n,
            range,
            grid,
            lambda_depth,
        } => cmd_scan(*n, range, *grid, *lambda_depth, config.format, out),
        Command::Reductivity { presentation } => cmd_reductivity(presentation, config.format, out),
    }
}

fn cmd_parse(text: &str, format: Option<Format>, out: &mut Out<'_>) -> Result<i32> {
    let format = format_for(format, &[Format::Text, Format::Json], "parse")?;
    let p: SurfacePresentation = text.parse()?;
    let norm = p.normalize();
    match format {
        Format::Json => {
            let tracked: Vec<_> = p
                .tracked()
                .iter()
                .map(|c| {
                    json!({
                        "tag": c.tag(),
                        "class": c.class().coeffs().iter().map(fmt_q).collect::<Vec<_>>(),
                        "genus": c.genus(),
                        "self_intersection": fmt_q(&c.class().square()),
                    })
                })
                .collect();
            let v = json!({
                "presentation": p.to_string(),
                "picard_rank": p.picard_rank(),
                "basis": p.lattice().labels(),
                "gram": p.lattice().gram(),
                "canonical": p.canonical().coeffs().iter().map(fmt_q).collect::<Vec<_>>(),
                "tracked": tracked,
                "normalized": norm.presentation.to_string(),
                "minimal_polystable": norm.minimal_polystable,
            });
            out.line(&json_line(&v));
        }
        _ => {
            out.line(&format!("presentation: {p}"));
            out.line(&format!("picard rank: {}", p.picard_rank()));
            out.line(&format!("basis: {}", p.lattice().labels().join(" ")));
            out.line(&format!("K = {}", p.canonical()));
            for c in p.tracked() {
                out.line(&format!(
                    "{} = {}  (self-intersection {}, genus {})",
                    c.tag(),
                    c.class(),
                    fmt_q(&c.class().square()),
                    c.genus()
                ));
            }
            if norm.minimal_polystable {
                out.line("normal form: minimal polystable");
            } else {
                out.line(&format!("normal form: {}", norm.presentation));
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_destabilize(
    text: &str,
    emit: Option<&PathBuf>,
    depths: &Depths,
    format: Option<Format>,
    out: &mut Out<'_>,
) -> Result<i32> {
    let format = format_for(format, &[Format::Json, Format::Text], "destabilize")?;
    let p: SurfacePresentation = text.parse()?;
    let options = DestabilizeOptions {
        lambda_depth: depths.lambda_depth,
        epsilon_depth: depths.epsilon_depth,
    };
    let cert = match destabilize(&p, options)? {
        Verdict::MinimalPolystable { reason } => {
            out.line(&match format {
                Format::Json => {
                    json_line(&json!({"verdict": "minimal_polystable", "reason": reason}))
                }
                _ => format!("minimal polystable: {reason}"),
            });
            return Ok(EXIT_POLYSTABLE);
        }
        Verdict::Destabilized(cert) => cert,
    };
    let report = verify(&cert);
    if !report.accepted {
        let failure = report
            .first_failure()
            .expect("rejected report names a check");
        return Err(Error::Invariant(format!(
            "fresh certificate failed {}: {}",
            failure.name, failure.detail
        )));
    }
    if let Some(path) = emit {
        cert.emit(path)?;
    }
    match (format, emit) {
        (Format::Json, None) => {
            let _ = write!(out.stdout, "{}", cert.to_json());
        }
        _ => {
            out.line(&format!("destabilized: {}", cert.presentation));
            out.line(&format!("normal form: {}", cert.normalized_presentation));
            let np: SurfacePresentation = cert.normalized_presentation.parse()?;
            let l = DivisorClass::new(np.lattice(), cert.polarization.clone())?;
            out.line(&format!("L = {l}"));
            out.line(&format!("lambda = {}", out.q(&cert.lambda)));
            out.line(&format!("DF = {}", out.q(&cert.df_value)));
            let eps: Vec<String> = cert.epsilon_chain.iter().map(fmt_q).collect();
            out.line(&format!("epsilon chain: [{}]", eps.join(", ")));
            if !cert.assumptions.is_empty() {
                out.line(&format!("assumptions: {}", cert.assumptions.join(", ")));
            }
            if let Some(path) = emit {
                out.line(&format!("certificate written to {}", path.display()));
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(path: &Path, format: Option<Format>, out: &mut Out<'_>) -> Result<i32> {
    let format = format_for(format, &[Format::Text, Format::Json], "verify")?;
    let report = match Certificate::load(path) {
        Ok(cert) => verify(&cert),
        Err(e) => VerifyReport::rejected("load", e.to_string()),
    };
    match format {
        Format::Json => out.line(&serde_json::to_string_pretty(&report).expect("report")),
        _ => match report.first_failure() {
            None => out.line(&format!("accepted ({} checks)", report.checks.len())),
            Some(f) => out.line(&format!("rejected at {}: {}", f.name, f.detail)),
        },
    }
    Ok(if report.accepted {
        EXIT_OK
    } else {
        EXIT_REJECTED
    })
}

fn cmd_df(
    surface: &str,
    class: &[String],
    lambda: &str,
    format: Option<Format>,
    out: &mut Out<'_>,
) -> Result<i32> {
    let format = format_for(format, &[Format::Text, Format::Json], "df")?;
    let p: SurfacePresentation = surface.parse()?;
    let coeffs = class
        .iter()
        .map(|s| parse_q_lenient(s))
        .collect::<Result<Vec<_>>>()?;
    let l = DivisorClass::new(p.lattice(), coeffs)?;
    let (n, a, b) = hirzebruch_coords(&p, &l)?;
    let lambda = parse_q_lenient(lambda)?;
    let sesh = seshadri_at_z(n, &a, &b)?;
    let input = SlopeInput::from_presentation(&p, &l, sesh)?;
    let df = df_slope(&input, &lambda)?;
    match format {
        Format::Json => {
            let mut v = json!({
                "surface": p.to_string(),
                "polarization": [fmt_q(&a), fmt_q(&b)],
                "lambda": fmt_q(&lambda),
                "nu": fmt_q(&slope(&p, &l)?),
                "seshadri_bound": fmt_q(&input.sesh),
                "df": fmt_q(&df),
            });
            if out.approx {
                v["df_approx"] = json!(approx(&df));
            }
            out.line(&json_line(&v));
        }
        _ => out.line(&out.q(&df)),
    }
    Ok(EXIT_OK)
}

/// One scan row: `(t, λ*, DF_min)`.
pub fn scan_rows(n: u32, range: &Q, grid: usize, lambda_depth: u32) -> Result<Vec<(Q, Q, Q)>> {
    if grid == 0 {
        return Err(Error::Usage("scan grid is empty (N = 0)".into()));
    }
    if *range <= qi(0) {
        return Err(Error::Usage("scan range must be positive".into()));
    }
    (1..=grid)
        .into_par_iter()
        .map(|j| {
            let t = qi(n as i64) + range * qi(j as i64) / qi(grid as i64);
            let input = SlopeInput::hirzebruch(n, &qi(1), &t)?;
            let (lambda, df) = minimize_on_candidates(&input, lambda_depth)
                .ok_or_else(|| Error::Invariant("empty candidate set".into()))?;
            Ok((t, lambda, df))
        })
        .collect()
}

fn cmd_scan(
    n: u32,
    range: &str,
    grid: usize,
    lambda_depth: u32,
    format: Option<Format>,
    out: &mut Out<'_>,
) -> Result<i32> {
    let format = format_for(format, &[Format::Csv, Format::Json, Format::Text], "scan")?;
    let range = parse_q_lenient(range)?;
    let rows = scan_rows(n, &range, grid, lambda_depth)?;
    match format {
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|(t, l, d)| {
                    let mut row =
                        json!({"t": fmt_q(t), "lambda_star": fmt_q(l), "df_min": fmt_q(d)});
                    if out.approx {
                        row["df_min_approx"] = json!(approx(d));
                    }
                    row
                })
                .collect();
            out.line(&json_line(&json!(v)));
        }
        Format::Csv => {
            out.line(if out.approx {
                "t,lambda_star,df_min,t_approx,lambda_star_approx,df_min_approx"
            } else {
                "t,lambda_star,df_min"
            });
            for (t, l, d) in &rows {
                let mut line = format!("{},{},{}", fmt_q(t), fmt_q(l), fmt_q(d));
                if out.approx {
                    line += &format!(",{},{},{}", approx(t), approx(l), approx(d));
                }
                out.line(&line);
            }
        }
        Format::Text => {
            for (t, l, d) in &rows {
                let s = format!(
                    "t = {}  lambda* = {}  DF = {}",
                    out.q(t),
                    out.q(l),
                    out.q(d)
                );
                out.line(&s);
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_reductivity(text: &str, format: Option<Format>, out: &mut Out<'_>) -> Result<i32> {
    let format = format_for(format, &[Format::Text, Format::Json], "reductivity")?;
    let p: SurfacePresentation = text.parse()?;
    let report = matsushima_verdict(&p)?;
    match format {
        Format::Json => out.line(&report.to_json()),
        _ => {
            let _ = write!(out.stdout, "{}", report.to_text());
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let mut full = vec!["slopecert"];
        full.extend_from_slice(args);
        let code = run(full, &mut o, &mut e);
        (
            code,
            String::from_utf8(o).unwrap(),
            String::from_utf8(e).unwrap(),
        )
    }

    #[test]
    fn df_command() {
        let (code, out, _) = call(&[
            "df",
            "--surface",
            "F(1)",
            "--class",
            "1,2",
            "--lambda",
            "9/10",
        ]);
        assert_eq!((code, out.trim()), (0, "-9/100"));
        let (code, _, err) = call(&["df", "--surface", "F(1)", "--class", "1,2", "--lambda", "0"]);
        assert_eq!(code, 1);
        assert!(err.contains("domain"));
        let (code, out, _) = call(&[
            "df",
            "--surface",
            "F(0)",
            "--class",
            "1,1",
            "--lambda",
            "1/2",
        ]);
        assert_eq!((code, out.trim()), (0, "1/2"));
        let (_, out, _) = call(&[
            "df",
            "--surface",
            "F(1)",
            "--class",
            "1,2",
            "--lambda",
            "9/10",
            "--approx",
        ]);
        assert!(out.contains("-9/100 (approx -0.09)"));
    }

    #[test]
    fn scan_command() {
        let (code, out, _) = call(&["scan", "--n", "1", "--grid", "10"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "t,lambda_star,df_min");
        assert_eq!(lines.len(), 11);
        assert!(lines[1..]
            .iter()
            .all(|l| l.split(',').nth(2).unwrap().starts_with('-')));
        let (code, out, _) = call(&["scan", "--n", "0", "--grid", "5"]);
        assert_eq!(code, 0);
        assert!(out
            .lines()
            .skip(1)
            .all(|l| !l.split(',').nth(2).unwrap().starts_with('-')));
        assert_eq!(call(&["scan", "--n", "1", "--grid", "0"]).0, 1);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["destabilize", "P2"]).0, 2);
        assert_eq!(call(&["destabilize", "F(oops)"]).0, 1);
        assert_eq!(call(&["destabilize", "F(2)", "--format", "csv"]).0, 1);
        assert_eq!(call(&["bogus"]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
        let (code, out, _) = call(&["destabilize", "P2"]);
        assert_eq!(code, 2);
        assert!(out.contains("polystable"));
    }

    #[test]
    fn reductivity_command() {
        let (code, out, _) = call(&["reductivity", "F(4)"]);
        assert_eq!(code, 0);
        assert!(out.contains("no cscK metric"));
        let (_, out, _) = call(&["reductivity", "F(0)", "--format", "json"]);
        assert!(out.contains("\"silent\""));
        assert_eq!(
            call(&["reductivity", "F(1); blowup generic; blowup generic"]).0,
            1
        );
    }
}
