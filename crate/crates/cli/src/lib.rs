//! Command implementations for the `asl` binary. Each command writes its
//! report to the given sink and returns the process exit code.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use asl_core::canonical::{canonical_code, Mode};
use asl_core::constructions::{example_chain, explicit_maximal};
use asl_core::enumeration::{
    a_infinity_from_maximal, enumerate_maximal, enumerate_maximal_naive, FillingPoset, DEFAULT_BUDGET,
};
use asl_core::formulas;
use asl_core::io::{export_dot, read_presentation, write_chain, write_presentation};
use asl_core::predicates::{classify_piece, fills_up, is_maximal, rank, validate};
use asl_core::{Error, SurfaceSpec};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_BUDGET: u8 = 2;

pub const BUDGET_VAR: &str = "ASL_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "asl", version, about = "Enumerate and check arc systems on punctured surfaces")]
pub struct Cli {
    /// Equivalence used to identify systems
    #[arg(long, global = true, default_value = "pmod", value_parser = ["pmod", "mod"])]
    pub mode: String,

    /// Machine-readable output
    #[arg(long, global = true)]
    pub json: bool,

    /// Worker threads for enumeration (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct SpecArgs {
    #[arg(long)]
    pub g: u32,
    #[arg(long)]
    pub s: u32,
    #[arg(long)]
    pub m: u32,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compare brute-force counts against the closed formulas
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        /// Also run the unpruned generator and compare class sets
        #[arg(long)]
        oracle: bool,
        /// Write the longest chain found as JSON
        #[arg(long, value_name = "FILE")]
        witness: Option<PathBuf>,
    },
    /// Print formula values for every valid (g, s, m) in range
    Table {
        #[arg(long, default_value_t = 2)]
        gmax: u32,
        #[arg(long, default_value_t = 4)]
        smax: u32,
    },
    /// Write an explicit maximal system
    Construct {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, short, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Write the chain of filling systems on the genus-g surface with one
    /// decorated point and one puncture
    ChainDemo {
        #[arg(long)]
        g: u32,
        /// Directory for one file per system; prints the chain otherwise
        #[arg(long, value_name = "DIR")]
        out_dir: Option<PathBuf>,
    },
    /// Validate a file and print its piece census
    Inspect { file: PathBuf },
    /// Dual graph of a file in DOT format
    ExportDot {
        file: PathBuf,
        #[arg(long, short, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

/// Everything a command needs besides its own arguments.
pub struct Context<'a> {
    pub mode: Mode,
    pub json: bool,
    pub budget: u32,
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

pub fn budget_from_env() -> Result<u32, String> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| format!("{BUDGET_VAR}={v:?} is not a non-negative integer")),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_MISMATCH,
    }
}

fn fail(ctx: &mut Context<'_>, e: &Error) -> u8 {
    let _ = writeln!(ctx.err, "error: {e}");
    exit_for(e)
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            let _ = writeln!(err, "warning: thread pool already configured: {e}");
        }
    }
    let budget = match budget_from_env() {
        Ok(b) => b,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_MISMATCH;
        }
    };
    let mode = cli.mode.parse().expect("clap restricts the mode values");
    let mut ctx = Context { mode, json: cli.json, budget, out, err };
    match cli.command {
        Command::Verify { spec, oracle, witness } => cmd_verify(&mut ctx, spec, oracle, witness.as_deref()),
        Command::Table { gmax, smax } => cmd_table(&mut ctx, gmax, smax),
        Command::Construct { spec, out } => cmd_construct(&mut ctx, spec, out.as_deref()),
        Command::ChainDemo { g, out_dir } => cmd_chain_demo(&mut ctx, g, out_dir.as_deref()),
        Command::Inspect { file } => cmd_inspect(&mut ctx, &file),
        Command::ExportDot { file, out } => cmd_export_dot(&mut ctx, &file, out.as_deref()),
    }
}

#[derive(Serialize, Debug)]
pub struct CheckRow {
    pub name: &'static str,
    pub observed: String,
    pub expected: String,
    pub ok: bool,
}

#[derive(Serialize, Debug)]
pub struct VerifyReport {
    pub g: u32,
    pub s: u32,
    pub m: u32,
    pub mode: String,
    pub budget: u32,
    pub maximal_classes: usize,
    pub filling_classes: usize,
    pub spine_dim: i64,
    pub harer_claimed_dim: i64,
    pub checks: Vec<CheckRow>,
    pub agree: bool,
}

fn row(name: &'static str, observed: impl ToString, expected: impl ToString, ok: bool) -> CheckRow {
    CheckRow { name, observed: observed.to_string(), expected: expected.to_string(), ok }
}

fn eq_row<T: PartialEq + ToString>(name: &'static str, observed: T, expected: T) -> CheckRow {
    let ok = observed == expected;
    row(name, observed, expected, ok)
}

/// Runs every brute-force count for one spec and compares it to the formula.
pub fn verify_report(
    spec: SurfaceSpec,
    mode: Mode,
    budget: u32,
    oracle: bool,
) -> Result<(VerifyReport, asl_core::constructions::ChainCertificate), Error> {
    let (g, s, m) = (spec.g, spec.s, spec.m);
    let maximal = enumerate_maximal(spec, mode, budget)?;
    let poset = FillingPoset::from_maximal(spec, mode, &maximal)?;
    let spine = poset.spine_dimension();
    let min = poset.min_filling();
    let a_inf = a_infinity_from_maximal(spec, mode, &maximal)?;
    let spine_formula = formulas::spine_dim(g, s, m)?;
    let claimed = formulas::harer_claimed_dim(g, s, m)?;

    let mut checks = vec![
        eq_row("max rank", poset.max_rank().unwrap_or(-1), formulas::arc_complex_dim(g, s, m)?),
        eq_row("spine dimension (longest chain)", spine.longest_chain, spine_formula),
        eq_row("spine dimension (rank span)", spine.rank_span, spine_formula),
        eq_row("min filling rank", min.rank, formulas::min_filling_rank(g, s, m)?),
        eq_row("minimal systems of expected shape", min.shape_violations.len(), 0),
        row(
            "non-filling rank <= dim - 2",
            a_inf.max_nonfilling_rank.map_or("none".to_string(), |r| r.to_string()),
            format!("<= {}", a_inf.bound),
            a_inf.holds,
        ),
    ];
    let explicit = explicit_maximal(spec)?;
    let explicit_found = maximal.contains_key(&canonical_code(&explicit, mode)?);
    checks.push(row("explicit maximal system enumerated", explicit_found, true, explicit_found));
    let sanity = poset.sanity();
    checks.push(row(
        "poset consistency",
        sanity.as_ref().err().cloned().unwrap_or_else(|| "ok".into()),
        "ok",
        sanity.is_ok(),
    ));
    let witness_check = spine.witness.verify();
    checks.push(row(
        "witness chain certificate",
        witness_check.as_ref().err().cloned().unwrap_or_else(|| "ok".into()),
        "ok",
        witness_check.is_ok(),
    ));
    if oracle {
        let naive = enumerate_maximal_naive(spec, mode, budget)?;
        let same = naive.keys().eq(maximal.keys());
        checks.push(row("naive oracle class count", naive.len(), maximal.len(), same));
    }
    let agree = checks.iter().all(|c| c.ok);
    let report = VerifyReport {
        g,
        s,
        m,
        mode: mode.to_string(),
        budget,
        maximal_classes: maximal.len(),
        filling_classes: poset.nodes.len(),
        spine_dim: spine.longest_chain,
        harer_claimed_dim: claimed,
        checks,
        agree,
    };
    Ok((report, spine.witness))
}

fn to_spec(ctx: &mut Context<'_>, a: SpecArgs) -> Result<SurfaceSpec, u8> {
    SurfaceSpec::new(a.g, a.s, a.m).map_err(|e| fail(ctx, &e))
}

pub fn cmd_verify(ctx: &mut Context<'_>, args: SpecArgs, oracle: bool, witness: Option<&Path>) -> u8 {
    let spec = match to_spec(ctx, args) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let (report, chain) = match verify_report(spec, ctx.mode, ctx.budget, oracle) {
        Ok(r) => r,
        Err(e) => return fail(ctx, &e),
    };
    if let Some(path) = witness {
        if let Err(e) = fs::write(path, write_chain(&chain)) {
            let _ = writeln!(ctx.err, "error: cannot write {}: {e}", path.display());
            return EXIT_MISMATCH;
        }
    }
    if ctx.json {
        let _ = writeln!(ctx.out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        let _ = writeln!(
            ctx.out,
            "{spec} mode={} budget={}: {} maximal classes, {} filling classes",
            report.mode, report.budget, report.maximal_classes, report.filling_classes
        );
        let width = report.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &report.checks {
            let mark = if c.ok { "ok" } else { "MISMATCH" };
            let _ = writeln!(
                ctx.out,
                "  {:<width$}  {:>6}  {:>8}  {mark}",
                c.name, c.observed, c.expected
            );
        }
        let delta = report.spine_dim - report.harer_claimed_dim;
        let _ = writeln!(
            ctx.out,
            "  spine dimension {} vs 4g-5+s+m = {} (difference {delta})",
            report.spine_dim, report.harer_claimed_dim
        );
        if !report.agree {
            let _ = writeln!(ctx.out, "!!! brute force disagrees with the formulas !!!");
        }
    }
    if report.agree {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    }
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub g: u32,
    pub s: u32,
    pub m: u32,
    pub arc_complex_dim: i64,
    pub min_filling_rank: i64,
    pub spine_dim: i64,
    pub harer_claimed_dim: i64,
    pub vcd_pmod: i64,
    pub corrected: bool,
}

pub fn table_rows(gmax: u32, smax: u32) -> Vec<TableRow> {
    let mut rows = Vec::new();
    for g in 0..=gmax {
        for s in 0..=smax {
            for m in 1..=s {
                if SurfaceSpec::new(g, s, m).is_err() {
                    continue;
                }
                let spine = formulas::spine_dim(g, s, m).expect("valid spec");
                let claimed = formulas::harer_claimed_dim(g, s, m).expect("valid spec");
                rows.push(TableRow {
                    g,
                    s,
                    m,
                    arc_complex_dim: formulas::arc_complex_dim(g, s, m).expect("valid spec"),
                    min_filling_rank: formulas::min_filling_rank(g, s, m).expect("valid spec"),
                    spine_dim: spine,
                    harer_claimed_dim: claimed,
                    vcd_pmod: formulas::vcd_pmod(g, s).expect("valid spec lies in the table"),
                    corrected: spine != claimed,
                });
            }
        }
    }
    rows
}

pub fn cmd_table(ctx: &mut Context<'_>, gmax: u32, smax: u32) -> u8 {
    let rows = table_rows(gmax, smax);
    if ctx.json {
        let _ = writeln!(ctx.out, "{}", serde_json::to_string_pretty(&rows).expect("rows serialize"));
        return EXIT_OK;
    }
    let _ = writeln!(ctx.out, "(g,s,m)    dim A  min r  spine  claimed  vcd");
    for r in &rows {
        let claimed = format!("{}{}", r.harer_claimed_dim, if r.corrected { "*" } else { "" });
        let _ = writeln!(
            ctx.out,
            "{:<9}  {:>5}  {:>5}  {:>5}  {:>7}  {:>3}",
            format!("({},{},{})", r.g, r.s, r.m),
            r.arc_complex_dim,
            r.min_filling_rank,
            r.spine_dim,
            claimed,
            r.vcd_pmod
        );
    }
    let _ = writeln!(ctx.out, "* claimed value differs from the spine dimension");
    EXIT_OK
}

fn emit(ctx: &mut Context<'_>, text: &str, path: Option<&Path>) -> u8 {
    match path {
        Some(p) => match fs::write(p, text) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(ctx.err, "error: cannot write {}: {e}", p.display());
                EXIT_MISMATCH
            }
        },
        None => {
            let _ = ctx.out.write_all(text.as_bytes());
            EXIT_OK
        }
    }
}

pub fn cmd_construct(ctx: &mut Context<'_>, args: SpecArgs, out: Option<&Path>) -> u8 {
    let spec = match to_spec(ctx, args) {
        Ok(s) => s,
        Err(code) => return code,
    };
    match explicit_maximal(spec) {
        Ok(sp) => emit(ctx, &write_presentation(&sp), out),
        Err(e) => fail(ctx, &e),
    }
}

pub fn cmd_chain_demo(ctx: &mut Context<'_>, g: u32, out_dir: Option<&Path>) -> u8 {
    let chain = match example_chain(g) {
        Ok(c) => c,
        Err(e) => return fail(ctx, &e),
    };
    if let Err(msg) = chain.verify() {
        let _ = writeln!(ctx.err, "error: chain does not verify: {msg}");
        return EXIT_MISMATCH;
    }
    let Some(dir) = out_dir else {
        return emit(ctx, &write_chain(&chain), None);
    };
    if let Err(e) = fs::create_dir_all(dir) {
        let _ = writeln!(ctx.err, "error: cannot create {}: {e}", dir.display());
        return EXIT_MISMATCH;
    }
    for (i, sp) in chain.systems.iter().enumerate() {
        let path = dir.join(format!("chain_{i:02}.json"));
        if emit(ctx, &write_presentation(sp), Some(&path)) != EXIT_OK {
            return EXIT_MISMATCH;
        }
        let _ = writeln!(ctx.out, "{}  rank {}", path.display(), rank(sp));
    }
    EXIT_OK
}

fn load(ctx: &mut Context<'_>, file: &Path) -> Result<asl_core::SplitPresentation, u8> {
    let text = fs::read_to_string(file).map_err(|e| {
        let _ = writeln!(ctx.err, "error: cannot read {}: {e}", file.display());
        EXIT_MISMATCH
    })?;
    read_presentation(&text).map_err(|e| fail(ctx, &e))
}

#[derive(Serialize, Debug)]
struct InspectReport {
    valid: bool,
    failures: Vec<String>,
    arcs: usize,
    rank: i64,
    fills_up: bool,
    maximal: bool,
    pieces: Vec<String>,
}

pub fn cmd_inspect(ctx: &mut Context<'_>, file: &Path) -> u8 {
    let sp = match load(ctx, file) {
        Ok(sp) => sp,
        Err(code) => return code,
    };
    let report = validate(&sp);
    let valid = report.valid;
    let inspect = InspectReport {
        valid,
        failures: report.failures.iter().map(|f| format!("{}: {}", f.check.name(), f.detail)).collect(),
        arcs: sp.arcs.len(),
        rank: rank(&sp),
        fills_up: valid && fills_up(&sp),
        maximal: valid && is_maximal(&sp),
        pieces: sp.pieces.iter().map(|p| classify_piece(p).to_string()).collect(),
    };
    if ctx.json {
        let _ = writeln!(ctx.out, "{}", serde_json::to_string_pretty(&inspect).expect("report serializes"));
    } else {
        let _ = write!(ctx.out, "{}: {}", sp.spec, report);
        let _ = writeln!(
            ctx.out,
            "arcs {}  rank {}  fills up: {}  maximal: {}",
            inspect.arcs, inspect.rank, inspect.fills_up, inspect.maximal
        );
        for (i, class) in inspect.pieces.iter().enumerate() {
            let _ = writeln!(ctx.out, "  piece {i}: {class}");
        }
    }
    if valid {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    }
}

pub fn cmd_export_dot(ctx: &mut Context<'_>, file: &Path, out: Option<&Path>) -> u8 {
    match load(ctx, file) {
        Ok(sp) => emit(ctx, &export_dot(&sp), out),
        Err(code) => code,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (u8, String) {
        let cli = Cli::try_parse_from(std::iter::once("asl").chain(args.iter().copied())).unwrap();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(cli, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn correction_flags_match_puncture_count() {
        for r in table_rows(3, 5) {
            assert_eq!(r.corrected, r.m < r.s, "{r:?}");
        }
    }

    #[test]
    fn verify_report_agrees_on_torus() {
        let spec = SurfaceSpec::new(1, 1, 1).unwrap();
        let (report, chain) = verify_report(spec, Mode::PMod, DEFAULT_BUDGET, true).unwrap();
        assert!(report.agree);
        assert_eq!(chain.dimension(), 1);
    }

    #[test]
    fn budget_error_maps_to_two() {
        assert_eq!(exit_for(&Error::BudgetExceeded { arcs: 10, budget: 9 }), EXIT_BUDGET);
        assert_eq!(exit_for(&Error::InvalidSpec { g: 0, s: 1, m: 1 }), EXIT_MISMATCH);
    }

    #[test]
    fn table_json_is_an_array() {
        let (code, text) = run_args(&["--json", "table", "--gmax", "0", "--smax", "3"]);
        assert_eq!(code, EXIT_OK);
        let rows: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(rows.as_array().unwrap().len(), 3);
    }

    #[test]
    fn rejects_unknown_mode() {
        assert!(Cli::try_parse_from(["asl", "--mode", "full", "table"]).is_err());
    }
}
