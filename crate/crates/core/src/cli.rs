//! Command-line front end. Each command writes its report to `out`,
//! diagnostics to `err`, and returns the process exit status.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bench::{self, auto_mode, Family, CSV_HEADER};
use crate::derive::{refute, Basis, RefuteOptions};
use crate::encoder::{EncodingMode, HypothesisBank};
use crate::format::{emit_proof, parse_proof, parse_system, FormatError, ProofFile};
use crate::gf::{brute_force_sat, solve, LinSystemFp, OracleVerdict, Solution, DEFAULT_ORACLE_CAP};
use crate::kernel::{check, is_refutation, metrics};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SAT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;
pub const EXIT_HYP_MISMATCH: i32 = 4;
pub const EXIT_RULE: i32 = 5;
pub const EXIT_NOT_REFUTATION: i32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Auto,
    F2,
    Fp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Product,
    Extended,
}

#[derive(Parser, Debug)]
#[command(name = "saproof", about = "Semi-algebraic refutations of unsatisfiable linear systems over F_p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compile a refutation of an unsatisfiable system.
    Refute {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
        /// Monomials used to split indicator-encoded rows.
        #[arg(long, value_enum, default_value = "product")]
        basis: BasisArg,
    },
    /// Re-verify a proof file against the system it claims to refute.
    Check {
        proof: PathBuf,
        #[arg(long)]
        system: PathBuf,
    },
    /// Gaussian elimination: a solution or a certificate.
    Solve { input: PathBuf },
    /// Exhaustive satisfiability search.
    Oracle {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        cap: u64,
    },
    /// Metrics of a proof file.
    Stats { proof: PathBuf },
    /// Refute and check a family of instances, writing CSV.
    Bench {
        #[arg(long)]
        family: String,
        /// `A:B` (inclusive) or a comma-separated list.
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 2)]
        field: u64,
        #[arg(long, default_value_t = 2)]
        w: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn read(path: &Path, err: &mut dyn Write) -> Option<String> {
    match fs::read_to_string(path) {
        Ok(t) => Some(t),
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", path.display());
            None
        }
    }
}

fn load_system(path: &Path, err: &mut dyn Write) -> Option<LinSystemFp> {
    let text = read(path, err)?;
    match parse_system(&text) {
        Ok(s) => Some(s),
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", path.display());
            None
        }
    }
}

fn fmt_vec(x: &[u64]) -> String {
    x.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

pub fn cmd_refute(
    input: &Path,
    output: &Path,
    mode: ModeArg,
    basis: BasisArg,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let Some(sys) = load_system(input, err) else {
        return EXIT_INPUT;
    };
    let cert = match solve(&sys) {
        Ok(Solution::Satisfiable(x)) => {
            let _ = writeln!(out, "SAT x=({})", fmt_vec(&x));
            return EXIT_SAT;
        }
        Ok(Solution::Unsatisfiable(c)) => c,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            return EXIT_INPUT;
        }
    };
    let mode = match mode {
        ModeArg::Auto => auto_mode(sys.p()),
        ModeArg::F2 => EncodingMode::F2,
        ModeArg::Fp => EncodingMode::Fp,
    };
    let basis = match basis {
        BasisArg::Product => Basis::Product,
        BasisArg::Extended => Basis::Extended,
    };
    let proof = match refute(&sys, &cert, mode, RefuteOptions { basis }) {
        Ok(p) => p,
        Err(crate::derive::DeriveError::Encode(e)) => {
            let _ = writeln!(err, "{e}");
            return EXIT_INPUT;
        }
        Err(e) => {
            let _ = writeln!(err, "internal error: {e}");
            return EXIT_INTERNAL;
        }
    };
    let m = match check(&proof) {
        Ok(m) if is_refutation(&proof) => m,
        Ok(_) => {
            let _ = writeln!(err, "internal error: compiled proof does not end in -1");
            return EXIT_INTERNAL;
        }
        Err(e) => {
            let _ = writeln!(err, "internal error: compiled proof rejected at line {}: {e}", e.line());
            return EXIT_INTERNAL;
        }
    };
    let file = ProofFile {
        field: sys.p(),
        mode,
        proof,
    };
    if let Err(e) = fs::write(output, emit_proof(&file)) {
        let _ = writeln!(err, "{}: {e}", output.display());
        return EXIT_INPUT;
    }
    let _ = writeln!(out, "UNSAT {cert}");
    let _ = writeln!(out, "refutation: {m}");
    EXIT_OK
}

pub fn cmd_check(proof_path: &Path, system_path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let Some(sys) = load_system(system_path, err) else {
        return EXIT_INPUT;
    };
    let Some(text) = read(proof_path, err) else {
        return EXIT_INPUT;
    };
    let file = match parse_proof(&text) {
        Ok(f) => f,
        Err(FormatError::Record { line, reason }) => {
            let _ = writeln!(out, "rejected: line {line}: {reason}");
            return EXIT_RULE;
        }
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", proof_path.display());
            return EXIT_INPUT;
        }
    };
    if file.field != sys.p() {
        let _ = writeln!(out, "hypothesis mismatch: proof is over F_{}, system over F_{}", file.field, sys.p());
        return EXIT_HYP_MISMATCH;
    }
    let bank = match HypothesisBank::for_system(&sys, file.mode) {
        Ok(b) => b,
        Err(e) => {
            let _ = writeln!(out, "hypothesis mismatch: {e}");
            return EXIT_HYP_MISMATCH;
        }
    };
    if bank.polys() != file.proof.hypotheses.as_slice() {
        let first = bank
            .polys()
            .iter()
            .zip(&file.proof.hypotheses)
            .position(|(a, b)| a != b)
            .unwrap_or_else(|| bank.len().min(file.proof.hypotheses.len()));
        let _ = writeln!(
            out,
            "hypothesis mismatch: system encodes {} hypotheses, proof lists {}; first difference at index {first}",
            bank.len(),
            file.proof.hypotheses.len()
        );
        return EXIT_HYP_MISMATCH;
    }
    match check(&file.proof) {
        Err(e) => {
            let _ = writeln!(out, "rejected: line {}: {e}", e.line());
            EXIT_RULE
        }
        Ok(m) if is_refutation(&file.proof) => {
            let _ = writeln!(out, "accepted refutation: {m}");
            EXIT_OK
        }
        Ok(m) => {
            let _ = writeln!(out, "accepted, but the final line is not -1: {m}");
            EXIT_NOT_REFUTATION
        }
    }
}

pub fn cmd_solve(input: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let Some(sys) = load_system(input, err) else {
        return EXIT_INPUT;
    };
    match solve(&sys) {
        Ok(Solution::Satisfiable(x)) => {
            let _ = writeln!(out, "SAT x=({})", fmt_vec(&x));
        }
        Ok(Solution::Unsatisfiable(c)) => {
            let _ = writeln!(out, "UNSAT {c}");
        }
        Err(e) => {
            let _ = writeln!(err, "{e}");
            return EXIT_INPUT;
        }
    }
    EXIT_OK
}

pub fn cmd_oracle(input: &Path, cap: u64, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let Some(sys) = load_system(input, err) else {
        return EXIT_INPUT;
    };
    match brute_force_sat(&sys, cap) {
        Ok(OracleVerdict::Satisfiable(x)) => {
            let _ = writeln!(out, "SAT x=({})", fmt_vec(&x));
            EXIT_OK
        }
        Ok(OracleVerdict::Unsatisfiable) => {
            let _ = writeln!(out, "UNSAT (all {}^{} assignments fail)", sys.p(), sys.n());
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "{e}");
            EXIT_INPUT
        }
    }
}

pub fn cmd_stats(proof_path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let Some(text) = read(proof_path, err) else {
        return EXIT_INPUT;
    };
    match parse_proof(&text) {
        Ok(f) => {
            let m = metrics(&f.proof);
            let _ = writeln!(out, "field={} mode={} hypotheses={}", f.field, f.mode.tag(), f.proof.hypotheses.len());
            let _ = writeln!(out, "{m}");
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", proof_path.display());
            EXIT_INPUT
        }
    }
}

/// `A:B` (inclusive range) or `a,b,c`.
pub fn parse_ns(s: &str) -> Option<Vec<usize>> {
    if let Some((a, b)) = s.split_once(':') {
        let (a, b): (usize, usize) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
        return (a <= b).then(|| (a..=b).collect());
    }
    s.split(',').map(|t| t.trim().parse().ok()).collect()
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_bench(
    family: &str,
    ns: &str,
    p: u64,
    w: usize,
    seed: u64,
    csv: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let Some(family) = Family::from_name(family) else {
        let _ = writeln!(err, "unknown family `{family}` (expected tseitin-cycle or random)");
        return EXIT_INPUT;
    };
    let Some(ns) = parse_ns(ns) else {
        let _ = writeln!(err, "bad --n `{ns}`");
        return EXIT_INPUT;
    };
    if !crate::gf::is_prime(p) || w == 0 || ns.iter().any(|&n| n < 2) {
        let _ = writeln!(err, "need a prime field, w >= 1 and n >= 2");
        return EXIT_INPUT;
    }
    let records = match bench::run(family, &ns, p, w, seed) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "internal error: {e}");
            return EXIT_INTERNAL;
        }
    };
    let mut text = format!("{CSV_HEADER}\n");
    for r in &records {
        text.push_str(&format!("{r}\n"));
    }
    match csv {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                let _ = writeln!(err, "{}: {e}", path.display());
                return EXIT_INPUT;
            }
        }
        None => {
            let _ = write!(out, "{text}");
        }
    }
    EXIT_OK
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match cli.command {
        Command::Refute {
            input,
            output,
            mode,
            basis,
        } => cmd_refute(&input, &output, mode, basis, out, err),
        Command::Check { proof, system } => cmd_check(&proof, &system, out, err),
        Command::Solve { input } => cmd_solve(&input, out, err),
        Command::Oracle { input, cap } => cmd_oracle(&input, cap, out, err),
        Command::Stats { proof } => cmd_stats(&proof, out, err),
        Command::Bench {
            family,
            n,
            field,
            w,
            seed,
            csv,
        } => cmd_bench(&family, &n, field, w, seed, csv.as_deref(), out, err),
    }
}
