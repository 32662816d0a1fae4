//! The `secrecy` command-line tool.
//!
//! Exit codes: 0 for `ConfirmedStrict` (and for every other successful
//! command), 3 for `ConfirmedWithTies`, 2 for `Refuted`, 1 for any error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::catalog::{catalog_all, catalog_entry};
use crate::descriptor::{LatticeDescriptor, ResolvedLattice};
use crate::error::{Error, Result};
use crate::qseries::{fit_a_basis, fit_b_basis};
use crate::rat::{fmt_decimal, fmt_decimal_f64, fmt_rational};
use crate::secrecy::{gain_at_one, xi_poly};
use crate::theta_numeric::{check_transform_identities, z_of_y};
use crate::verifier::{verify_min_at_quarter, VerdictStatus};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_REFUTED: i32 = 2;
pub const EXIT_TIES: i32 = 3;

pub const PRECISION_ENV: &str = "SECRECY_PRECISION";
pub const DEFAULT_PRECISION: f64 = 1e-12;
/// Significant digits of every decimal the tool prints by default.
pub const DEFAULT_DIGITS: usize = 12;

#[derive(Parser, Debug)]
#[command(name = "secrecy", version, about = "Secrecy functions of unimodular lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether the secrecy function peaks at y = 1 and print the certificate.
    Verify { descriptor: PathBuf },
    /// Print the secrecy function at y = 1 exactly and in decimal.
    Gain {
        descriptor: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DIGITS)]
        digits: usize,
    },
    /// Sample y, z(y) and the secrecy function on a log-spaced grid as CSV.
    Scan {
        descriptor: PathBuf,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        /// Number of sample points, both ends included.
        #[arg(long)]
        steps: usize,
    },
    /// Fit the theta series in one of the two modular bases.
    Fit {
        descriptor: PathBuf,
        #[arg(long, value_enum)]
        basis: Basis,
    },
    /// Browse the reference lattices.
    Catalog {
        #[command(subcommand)]
        action: Option<CatalogAction>,
    },
    /// Residuals of the theta transformation laws at y.
    Identities {
        #[arg(long)]
        y: f64,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    List,
    Show {
        /// Extremal dimension or entry name.
        entry: String,
        /// Print the entry as a lattice descriptor instead.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Basis {
    Ar,
    Bj,
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_ERROR
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn precision() -> Result<f64> {
    match std::env::var(PRECISION_ENV) {
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(p) if p > 0.0 && p < 1.0 => Ok(p),
            _ => Err(Error::Domain(format!("{PRECISION_ENV} must be in (0, 1), got `{s}`"))),
        },
        Err(_) => Ok(DEFAULT_PRECISION),
    }
}

fn load(path: &PathBuf) -> Result<ResolvedLattice> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Descriptor(format!("{}: {e}", path.display())))?;
    LatticeDescriptor::from_json(&text)?.resolve()
}

fn io(e: std::io::Error) -> Error {
    Error::Domain(format!("write failed: {e}"))
}

/// Log-spaced points from `from` to `to`, both included.
pub fn scan_grid(from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
    if !(from > 0.0 && to > 0.0 && from.is_finite() && to.is_finite()) {
        return Err(Error::Domain("scan bounds must be positive and finite".into()));
    }
    if steps == 0 || (steps == 1 && from != to) {
        return Err(Error::Domain("scan needs at least two steps".into()));
    }
    if steps == 1 {
        return Ok(vec![from]);
    }
    let ratio = to / from;
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| match i {
            0 => from,
            _ if i == steps - 1 => to,
            _ => from * ratio.powf(i as f64 / last),
        })
        .collect())
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Verify { descriptor } => {
            let lat = load(&descriptor)?;
            let verdict = verify_min_at_quarter(&lat.denominator)?;
            writeln!(out, "lattice: {}", lat.name).map_err(io)?;
            writeln!(out, "dim: {}", lat.n).map_err(io)?;
            writeln!(out, "theta_series: {}", if lat.is_lattice() { "yes" } else { "no" })
                .map_err(io)?;
            out.write_all(verdict.certificate.as_bytes()).map_err(io)?;
            Ok(match verdict.status {
                VerdictStatus::ConfirmedStrict => EXIT_OK,
                VerdictStatus::ConfirmedWithTies => EXIT_TIES,
                VerdictStatus::Refuted => EXIT_REFUTED,
            })
        }
        Command::Gain { descriptor, digits } => {
            if digits == 0 {
                return Err(Error::Domain("--digits must be positive".into()));
            }
            let lat = load(&descriptor)?;
            let g = gain_at_one(&lat.denominator)?;
            writeln!(out, "gain: {}", fmt_rational(&g)).map_err(io)?;
            writeln!(out, "gain_decimal: {}", fmt_decimal(&g, digits)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Scan { descriptor, from, to, steps } => {
            let p = precision()?;
            let lat = load(&descriptor)?;
            let grid = scan_grid(from, to, steps)?;
            let mut rows = String::from("y,z,xi\n");
            for y in grid {
                let z = z_of_y(y, p)?;
                let xi = xi_poly(&lat.denominator, y, p)?;
                rows.push_str(&format!(
                    "{},{},{}\n",
                    fmt_decimal_f64(y, DEFAULT_DIGITS),
                    fmt_decimal_f64(z, DEFAULT_DIGITS),
                    fmt_decimal_f64(xi, DEFAULT_DIGITS)
                ));
            }
            out.write_all(rows.as_bytes()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Fit { descriptor, basis } => {
            let lat = load(&descriptor)?;
            let theta = lat.theta.as_ref().ok_or_else(|| {
                Error::InvalidTheta(format!("{} has no lattice theta series to fit", lat.name))
            })?;
            let (label, coeffs) = match basis {
                Basis::Ar => ("a", fit_a_basis(theta, lat.n)?.a().to_vec()),
                Basis::Bj => ("b", fit_b_basis(theta, lat.n)?.b().to_vec()),
            };
            writeln!(out, "basis: {label}").map_err(io)?;
            let first = if label == "a" { 0 } else { 1 };
            for (i, c) in coeffs.iter().enumerate() {
                writeln!(out, "{label}_{}: {}", i + first, fmt_rational(c)).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Catalog { action } => {
            match action.unwrap_or(CatalogAction::List) {
                CatalogAction::List => {
                    writeln!(out, "{:<4} {:<16} xi", "dim", "name").map_err(io)?;
                    for e in catalog_all() {
                        writeln!(out, "{e}").map_err(io)?;
                    }
                }
                CatalogAction::Show { entry, json } => {
                    let e = catalog_entry(&entry)?;
                    if json {
                        writeln!(out, "{}", e.descriptor().to_json()).map_err(io)?;
                    } else {
                        writeln!(out, "name: {}", e.name).map_err(io)?;
                        writeln!(out, "dim: {}", e.n).map_err(io)?;
                        writeln!(out, "source: {}", e.source.as_str()).map_err(io)?;
                        writeln!(out, "lattice: {}", if e.is_lattice { "yes" } else { "no" })
                            .map_err(io)?;
                        writeln!(out, "xi: {}", e.xi_display()).map_err(io)?;
                        writeln!(out, "denominator: {}", e.expected_d).map_err(io)?;
                        let g = gain_at_one(&e.expected_d)?;
                        writeln!(out, "gain: {}", fmt_rational(&g)).map_err(io)?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Identities { y } => {
            let r = check_transform_identities(y, precision()?)?;
            writeln!(out, "y: {}", fmt_decimal_f64(y, DEFAULT_DIGITS)).map_err(io)?;
            for (k, v) in [
                ("theta2", r.theta2),
                ("theta3", r.theta3),
                ("theta4", r.theta4),
                ("jacobi", r.jacobi),
                ("max", r.max()),
            ] {
                writeln!(out, "{k}: {v:.3e}").map_err(io)?;
            }
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(args.iter().copied(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn grid_hits_one_exactly() {
        let g = scan_grid(0.25, 4.0, 97).unwrap();
        assert_eq!(g.len(), 97);
        assert_eq!(g[48], 1.0);
        assert_eq!(g[96], 4.0);
        assert!(scan_grid(0.0, 4.0, 5).is_err());
        assert!(scan_grid(1.0, 4.0, 1).is_err());
    }

    #[test]
    fn catalog_commands() {
        let (code, out, _) = run_str(&["secrecy", "catalog", "list"]);
        assert_eq!(code, 0);
        assert!(out.contains("1/((1-z)^3 - 45/16 z^2)"));
        let (code, out, _) = run_str(&["secrecy", "catalog", "show", "24"]);
        assert_eq!(code, 0);
        assert!(out.contains("gain: 256/63"));
        let (code, _, err) = run_str(&["secrecy", "catalog", "show", "25"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error:"));
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_str(&["secrecy"]).0, 1);
        assert_eq!(run_str(&["secrecy", "bogus"]).0, 1);
        assert_eq!(run_str(&["secrecy", "--help"]).0, 0);
        assert_eq!(run_str(&["secrecy", "verify", "/nonexistent.json"]).0, 1);
    }
}
