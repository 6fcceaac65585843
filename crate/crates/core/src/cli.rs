//! The `ksub` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::closure::{theta_witness, LabelingSet};
use crate::error::Error;
use crate::format::{parse_ksf, parse_vcsp, print_ksf, print_vcsp};
use crate::labeling::DEFAULT_MAX_CELLS;
use crate::oracle::brute_min_with_limit;
use crate::relax::{
    assert_maximal_binary, default_epsilon, relax_with, tightness_witnesses, verify_ksubmodular, NonExtendable,
    RelaxOptions, RelaxationOutcome,
};
use crate::table::{CostTable, DomainKind};
use crate::value::format_rational;
use crate::vcsp::{autarky_from, gap_d, instance_scaling_factor, relax_instance, AutarkyReport, VcspInstance};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ksub", version, about = "k-submodular relaxations of functions on [k]^n")]
struct Cli {
    /// Refuse cubes with more than this many cells.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_CELLS)]
    max_cells: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Relax a positive-only table to [0,k]^n.
    Relax {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Test theta-closure of the domain before relaxing.
        #[arg(long)]
        preflight_theta: bool,
        /// Print half-integrality, scaling factor, nonnegativity and, for n=2, maximality.
        #[arg(long)]
        report: bool,
    },
    /// Decide whether the domain is closed under theta.
    CheckExtendable { input: PathBuf },
    /// Check k-submodularity of a table.
    Verify { input: PathBuf },
    /// Exhaustive minimization.
    Minimize { input: PathBuf },
    /// Valued CSP instances.
    Vcsp {
        #[command(subcommand)]
        action: VcspAction,
    },
}

#[derive(Debug, Subcommand)]
enum VcspAction {
    /// Relax every constraint and write the relaxed instance.
    Relax {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Partial assignment from a minimizer of the relaxed instance.
    Autarky {
        input: PathBuf,
        /// Re-check persistency against the unrelaxed instance.
        #[arg(long)]
        verify: bool,
    },
    /// Print c, d, k^(cd), nonnegativity and the autarky.
    Report { input: PathBuf },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Outcome {
    let limit = cli.max_cells;
    match &cli.command {
        Command::Relax { input, output, preflight_theta, report } => {
            cmd_relax(out, &read_ksf(input, limit)?, output.as_deref(), *preflight_theta, *report)
        }
        Command::CheckExtendable { input } => cmd_check(out, &read_ksf(input, limit)?),
        Command::Verify { input } => cmd_verify(out, &read_ksf(input, limit)?),
        Command::Minimize { input } => cmd_minimize(out, &read_ksf(input, limit)?, limit),
        Command::Vcsp { action } => match action {
            VcspAction::Relax { input, output } => cmd_vcsp_relax(out, &read_vcsp(input, limit)?, output.as_deref()),
            VcspAction::Autarky { input, verify } => cmd_vcsp_autarky(out, &read_vcsp(input, limit)?, *verify),
            VcspAction::Report { input } => cmd_vcsp_report(out, &read_vcsp(input, limit)?),
        },
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn read_ksf(path: &Path, limit: u64) -> std::result::Result<CostTable, Failure> {
    parse_ksf(&read(path)?, limit).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn read_vcsp(path: &Path, limit: u64) -> std::result::Result<VcspInstance, Failure> {
    parse_vcsp(&read(path)?, limit).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure(format!("{}: {e}", p.display()))),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn describe_witness(w: &NonExtendable) -> String {
    match w {
        NonExtendable::MissingJoin { x, y, join, level } => {
            format!("x={x} y={y} have join {join} outside the domain (level {level})")
        }
        NonExtendable::ThetaEscape(t) => {
            format!("theta({}, {}, {}) = {} is outside the domain", t.x, t.y, t.z, t.image)
        }
    }
}

fn cmd_relax(
    out: &mut dyn Write,
    f: &CostTable,
    output: Option<&Path>,
    preflight_theta: bool,
    report: bool,
) -> Outcome {
    let r = match relax_with(f, RelaxOptions { preflight_theta })? {
        RelaxationOutcome::Relaxed(r) => r,
        RelaxationOutcome::NotExtendable(w) => {
            writeln!(out, "not extendable: {}", describe_witness(&w))?;
            return Ok(EXIT_NEGATIVE);
        }
    };
    emit(out, output, &print_ksf(&r.table))?;
    if report {
        // Report lines share stdout with the table only when no output
        // file is given; keep the result parseable in that case.
        let prefix = if output.is_none() { "# " } else { "" };
        let mut line = format!(
            "{prefix}scaling_factor={} half_integral={} nonnegative={}",
            r.scaling_factor,
            yes_no(r.half_integral),
            yes_no(r.nonnegative)
        );
        if f.n() == 2 {
            let maximal = assert_maximal_binary(&r.table, f, &default_epsilon(&r.table))?;
            let tight = tightness_witnesses(&r.table, f).is_ok();
            line.push_str(&format!(" maximal={} tight={}", yes_no(maximal), yes_no(tight)));
        }
        writeln!(out, "{line}")?;
    }
    Ok(EXIT_OK)
}

fn cmd_check(out: &mut dyn Write, f: &CostTable) -> Outcome {
    if f.kind() != DomainKind::PositiveOnly {
        return Err(Error::WrongKind { expected: "positive-only" }.into());
    }
    let dom = LabelingSet::from_indices(f.cube(), f.domain_indices())?;
    match theta_witness(&dom)? {
        None => {
            writeln!(out, "YES")?;
            Ok(EXIT_OK)
        }
        Some(t) => {
            writeln!(out, "NO ({}, {}, {}) -> {}", t.x, t.y, t.z, t.image)?;
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn cmd_verify(out: &mut dyn Write, g: &CostTable) -> Outcome {
    match verify_ksubmodular(g) {
        None => {
            writeln!(out, "OK")?;
            Ok(EXIT_OK)
        }
        Some(v) => {
            writeln!(out, "violated by x={} y={}: {} < {}", v.x, v.y, v.lhs, v.rhs)?;
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn cmd_minimize(out: &mut dyn Write, g: &CostTable, limit: u64) -> Outcome {
    let r = brute_min_with_limit(g, limit)?;
    let count = r.minimizers.len();
    writeln!(out, "optimum {}, {} minimizer{}", r.optimum, count, if count == 1 { "" } else { "s" })?;
    for x in r.labelings() {
        writeln!(out, "{x}")?;
    }
    Ok(EXIT_OK)
}

fn relax_or_report(
    out: &mut dyn Write,
    inst: &VcspInstance,
) -> std::result::Result<Option<crate::vcsp::RelaxedInstance>, Failure> {
    match relax_instance(inst) {
        Ok(r) => Ok(Some(r)),
        Err(Error::ConstraintNotExtendable { position, witness }) => {
            writeln!(out, "constraint {} not extendable: {}", position + 1, describe_witness(&witness))?;
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_vcsp_relax(out: &mut dyn Write, inst: &VcspInstance, output: Option<&Path>) -> Outcome {
    let Some(r) = relax_or_report(out, inst)? else {
        return Ok(EXIT_NEGATIVE);
    };
    emit(out, output, &print_vcsp(&r.instance))?;
    Ok(EXIT_OK)
}

fn write_autarky(out: &mut dyn Write, a: &AutarkyReport) -> std::result::Result<(), Failure> {
    writeln!(out, "relaxed_optimum {}", a.relaxed_optimum)?;
    writeln!(out, "minimizer {}", a.chosen_minimizer)?;
    if a.fixed.is_empty() {
        writeln!(out, "autarky none")?;
    } else {
        let parts: Vec<String> = a.fixed.iter().map(|(v, l)| format!("x{}={l}", v + 1)).collect();
        writeln!(out, "autarky {}", parts.join(" "))?;
    }
    if let Some(ok) = a.persistency_verified {
        writeln!(out, "persistency {}", if ok { "verified" } else { "FAILED" })?;
    }
    Ok(())
}

fn cmd_vcsp_autarky(out: &mut dyn Write, inst: &VcspInstance, verify: bool) -> Outcome {
    let Some(r) = relax_or_report(out, inst)? else {
        return Ok(EXIT_NEGATIVE);
    };
    match autarky_from(inst, &r, verify) {
        Ok(a) => write_autarky(out, &a)?,
        Err(Error::Infeasible) => writeln!(out, "relaxed instance is infeasible; no autarky")?,
        Err(e) => return Err(e.into()),
    }
    Ok(EXIT_OK)
}

/// `k^(cd)` as a decimal string, or in exponent form when too large to print.
fn branching_bound(k: u32, cd: &BigInt) -> String {
    match cd.to_u32() {
        Some(e) if e <= 4096 => num_traits::pow(BigInt::from(k), e as usize).to_string(),
        _ => format!("{k}^{cd}"),
    }
}

fn cmd_vcsp_report(out: &mut dyn Write, inst: &VcspInstance) -> Outcome {
    let Some(r) = relax_or_report(out, inst)? else {
        return Ok(EXIT_NEGATIVE);
    };
    let c = instance_scaling_factor(&r);
    match gap_d(inst, &r) {
        Ok(d) => {
            let cd = &d * num_rational::BigRational::from_integer(c.clone());
            let bound = branching_bound(inst.k(), &cd.ceil().to_integer());
            writeln!(out, "c={c} d={} k^(cd)={bound}", format_rational(&d))?;
        }
        Err(Error::Infeasible) => writeln!(out, "c={c} d=undefined (instance is infeasible)")?,
        Err(e) => return Err(e.into()),
    }
    writeln!(out, "nonnegative={}", yes_no(r.nonnegative))?;
    match autarky_from(inst, &r, false) {
        Ok(a) => write_autarky(out, &a)?,
        Err(Error::Infeasible) => writeln!(out, "autarky none (relaxed instance is infeasible)")?,
        Err(e) => return Err(e.into()),
    }
    Ok(EXIT_OK)
}
