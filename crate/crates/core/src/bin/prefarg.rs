use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use prefarg::generate::{
    random_complete_labelling, random_framework, random_labelling, rng_from_seed,
};
use prefarg::io::{self, ResultFormat};
use prefarg::oracle::DEFAULT_COMPONENT_CAP;
use prefarg::semantics::DEFAULT_ENUMERATION_CAP;
use prefarg::{
    brute_force_ex, decide, enumerate_complete, reduce, verify_witness, Decision, Framework,
    Labelling, Reduction, Verdict,
};

const CAP_VAR: &str = "PREFARG_SIZE_CAP";

/// Decide and solve inverse preference problems on argumentation frameworks.
///
/// Exit status: 0 for YES, 1 for NO, 2 for input errors.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether some order makes the labelling complete after a reduction.
    Decide(DecideArgs),
    /// Like `decide`, but verifies the witness before printing it.
    Solve(DecideArgs),
    /// Apply a reduction under a given order and print the result.
    Reduce {
        #[arg(long)]
        framework: PathBuf,
        #[arg(long)]
        order: PathBuf,
        #[arg(long, value_parser = parse_reduction)]
        reduction: Reduction,
        /// Print Graphviz instead of APX; attacks created by the reduction are red.
        #[arg(long)]
        dot: bool,
    },
    /// Print every complete labelling as a JSON line.
    Labellings {
        #[arg(long)]
        framework: PathBuf,
    },
    /// Brute-force verdict by trying every order.
    Oracle {
        #[arg(long)]
        framework: PathBuf,
        #[arg(long)]
        labelling: PathBuf,
        #[arg(long, value_parser = parse_selection)]
        reduction: Selection,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Generate a random framework and labelling.
    Gen {
        #[arg(long = "args")]
        n: usize,
        #[arg(long)]
        attack_prob: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = LabellingMode::Random)]
        labelling_mode: LabellingMode,
        /// Write PREFIX.apx and PREFIX.json instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct DecideArgs {
    /// APX file, or a directory of them for batch mode.
    #[arg(long)]
    framework: PathBuf,
    /// Labelling JSON file, or a directory paired with --framework by file stem.
    #[arg(long)]
    labelling: PathBuf,
    #[arg(long, value_parser = parse_selection)]
    reduction: Selection,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum LabellingMode {
    Random,
    Complete,
}

#[derive(Clone, Copy)]
enum Selection {
    One(Reduction),
    All,
}

impl Selection {
    fn reductions(self) -> Vec<Reduction> {
        match self {
            Selection::One(r) => vec![r],
            Selection::All => Reduction::ALL.to_vec(),
        }
    }
}

fn parse_reduction(s: &str) -> Result<Reduction, String> {
    let i: u8 = s
        .parse()
        .map_err(|_| format!("expected 1, 2, 3 or 4, got {s:?}"))?;
    Reduction::try_from(i).map_err(|e| e.to_string())
}

fn parse_selection(s: &str) -> Result<Selection, String> {
    if s == "all" {
        Ok(Selection::All)
    } else {
        parse_reduction(s).map(Selection::One)
    }
}

fn size_caps() -> Result<(usize, usize)> {
    match std::env::var(CAP_VAR) {
        Ok(v) => {
            let cap = v
                .trim()
                .parse()
                .with_context(|| format!("{CAP_VAR}={v:?} is not a size"))?;
            Ok((cap, cap))
        }
        Err(_) => Ok((DEFAULT_ENUMERATION_CAP, DEFAULT_COMPONENT_CAP)),
    }
}

fn read_framework(path: &Path) -> Result<Framework> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    io::parse_apx(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_labelling(path: &Path, framework: &Framework) -> Result<Labelling> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let l = io::parse_labelling(&text).with_context(|| format!("parsing {}", path.display()))?;
    l.to_indexed(framework)
        .with_context(|| format!("labelling {} does not fit the framework", path.display()))?;
    Ok(l)
}

fn exit_for(verdicts: impl IntoIterator<Item = Verdict>) -> ExitCode {
    if verdicts.into_iter().any(|v| v == Verdict::Yes) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run_one(
    framework: &Framework,
    labelling: &Labelling,
    reduction: Reduction,
    verify: bool,
) -> Result<Decision> {
    let d = decide(framework, labelling, reduction)?;
    if verify && d.is_yes() {
        let w = d
            .witness
            .as_ref()
            .context("internal error: YES without a witness")?;
        if !verify_witness(framework, labelling, reduction, w)? {
            bail!("internal error: witness for reduction {reduction} failed verification:\n{w}");
        }
    }
    Ok(d)
}

/// One-line summary used by the `all` matrix in text mode.
fn matrix_row(d: &Decision) -> String {
    let detail = match (&d.witness, &d.certificate) {
        (Some(w), _) => w.to_string().trim_end().replace('\n', " | "),
        (None, Some(c)) => c.to_string(),
        (None, None) => String::new(),
    };
    format!("{}\t{}\t{}", d.reduction, d.verdict, detail)
}

fn print_decisions(decisions: &[(Decision, std::time::Duration)], format: Format, matrix: bool) {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for (d, t) in decisions {
        let line = match (format, matrix) {
            (Format::Text, true) => format!("{}\n", matrix_row(d)),
            (Format::Json, _) => format!("{}\n", io::emit_result(d, ResultFormat::Json, Some(*t))),
            (Format::Text, false) => io::emit_result(d, ResultFormat::Text, Some(*t)),
        };
        let _ = out.write_all(line.as_bytes());
    }
}

fn cmd_decide(args: &DecideArgs, verify: bool) -> Result<ExitCode> {
    if args.framework.is_dir() {
        return batch(args, verify);
    }
    let f = read_framework(&args.framework)?;
    let l = read_labelling(&args.labelling, &f)?;
    let mut decisions = Vec::new();
    for r in args.reduction.reductions() {
        let start = Instant::now();
        let d = run_one(&f, &l, r, verify)?;
        decisions.push((d, start.elapsed()));
    }
    print_decisions(
        &decisions,
        args.format,
        matches!(args.reduction, Selection::All),
    );
    Ok(exit_for(decisions.iter().map(|(d, _)| d.verdict)))
}

fn files_by_stem(dir: &Path) -> Result<BTreeMap<String, PathBuf>> {
    let mut out = BTreeMap::new();
    for entry in fs::read_dir(dir).with_context(|| format!("listing {}", dir.display()))? {
        let path = entry?.path();
        if let (true, Some(stem)) = (path.is_file(), path.file_stem().and_then(|s| s.to_str())) {
            out.insert(stem.to_string(), path);
        }
    }
    Ok(out)
}

/// Directory mode: one JSON line per instance and reduction, in stem order.
/// Exits 2 if any instance failed to load, else 0.
fn batch(args: &DecideArgs, verify: bool) -> Result<ExitCode> {
    if !args.labelling.is_dir() {
        bail!("--framework is a directory, so --labelling must be one too");
    }
    let frameworks = files_by_stem(&args.framework)?;
    let labellings = files_by_stem(&args.labelling)?;
    let reductions = args.reduction.reductions();
    let instances: Vec<(&String, &PathBuf)> = frameworks.iter().collect();
    let results: Vec<(Vec<String>, bool)> = instances
        .par_iter()
        .map(|(stem, fpath)| {
            let Some(lpath) = labellings.get(*stem) else {
                let line =
                    serde_json::json!({"instance": stem, "error": "no labelling with this stem"});
                return (vec![line.to_string()], false);
            };
            let run = || -> Result<Vec<String>> {
                let f = read_framework(fpath)?;
                let l = read_labelling(lpath, &f)?;
                reductions
                    .iter()
                    .map(|&r| {
                        let start = Instant::now();
                        let d = run_one(&f, &l, r, verify)?;
                        let mut v = io::decision_value(&d, Some(start.elapsed()));
                        v.as_object_mut().expect("decision is an object").insert(
                            "instance".into(),
                            serde_json::Value::String(stem.to_string()),
                        );
                        Ok(v.to_string())
                    })
                    .collect()
            };
            match run() {
                Ok(lines) => (lines, true),
                Err(e) => {
                    let line = serde_json::json!({"instance": stem, "error": format!("{e:#}")});
                    (vec![line.to_string()], false)
                }
            }
        })
        .collect();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut ok = true;
    for (lines, fine) in results {
        ok &= fine;
        for line in lines {
            writeln!(out, "{line}")?;
        }
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn cmd_reduce(framework: &Path, order: &Path, reduction: Reduction, dot: bool) -> Result<ExitCode> {
    let f = read_framework(framework)?;
    let text = fs::read_to_string(order).with_context(|| format!("reading {}", order.display()))?;
    let ord = io::parse_order(&text).with_context(|| format!("parsing {}", order.display()))?;
    let reduced = reduce(&f, &ord, reduction)
        .with_context(|| format!("order {} does not fit", order.display()))?;
    if dot {
        let created: Vec<_> = reduced
            .attacks()
            .into_iter()
            .filter(|(s, d)| !f.has_attack(s.as_str(), d.as_str()))
            .collect();
        print!("{}", io::emit_dot(&reduced, None, &created));
    } else {
        print!("{}", io::emit_apx(&reduced));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_labellings(framework: &Path) -> Result<ExitCode> {
    let f = read_framework(framework)?;
    let (cap, _) = size_caps()?;
    let all =
        enumerate_complete(&f, cap).map_err(|e| anyhow!("{e}; raise the limit with {CAP_VAR}"))?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for l in all {
        writeln!(out, "{}", io::emit_labelling(&l))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(
    framework: &Path,
    labelling: &Path,
    selection: Selection,
    format: Format,
) -> Result<ExitCode> {
    let f = read_framework(framework)?;
    let l = read_labelling(labelling, &f)?;
    let (_, cap) = size_caps()?;
    let mut decisions = Vec::new();
    for r in selection.reductions() {
        let start = Instant::now();
        let found = brute_force_ex(&f, &l, r, cap)
            .map_err(|e| anyhow!("{e}; raise the limit with {CAP_VAR}"))?;
        let d = Decision {
            reduction: r,
            verdict: if found.is_some() {
                Verdict::Yes
            } else {
                Verdict::No
            },
            witness: found,
            certificate: None,
        };
        decisions.push((d, start.elapsed()));
    }
    print_decisions(&decisions, format, matches!(selection, Selection::All));
    Ok(exit_for(decisions.iter().map(|(d, _)| d.verdict)))
}

fn cmd_gen(
    n: usize,
    p: f64,
    seed: u64,
    mode: LabellingMode,
    out: Option<&Path>,
) -> Result<ExitCode> {
    if !(0.0..=1.0).contains(&p) {
        bail!("--attack-prob must lie in [0, 1], got {p}");
    }
    let mut rng = rng_from_seed(seed);
    let f = random_framework(&mut rng, n, p);
    let l = match mode {
        LabellingMode::Random => random_labelling(&mut rng, &f),
        LabellingMode::Complete => {
            let (cap, _) = size_caps()?;
            match random_complete_labelling(&mut rng, &f, cap) {
                Some(l) => l,
                None => {
                    eprintln!("warning: {n} arguments exceed the enumeration limit {cap}; using a random labelling");
                    random_labelling(&mut rng, &f)
                }
            }
        }
    };
    let apx = format!("% seed {seed}\n{}", io::emit_apx(&f));
    let labelling = io::emit_labelling(&l);
    match out {
        Some(prefix) => {
            let apx_path = prefix.with_extension("apx");
            let json_path = prefix.with_extension("json");
            fs::write(&apx_path, apx).with_context(|| format!("writing {}", apx_path.display()))?;
            fs::write(&json_path, format!("{labelling}\n"))
                .with_context(|| format!("writing {}", json_path.display()))?;
        }
        None => println!("{apx}% labelling {labelling}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Decide(args) => cmd_decide(&args, false),
        Command::Solve(args) => cmd_decide(&args, true),
        Command::Reduce {
            framework,
            order,
            reduction,
            dot,
        } => cmd_reduce(&framework, &order, reduction, dot),
        Command::Labellings { framework } => cmd_labellings(&framework),
        Command::Oracle {
            framework,
            labelling,
            reduction,
            format,
        } => cmd_oracle(&framework, &labelling, reduction, format),
        Command::Gen {
            n,
            attack_prob,
            seed,
            labelling_mode,
            out,
        } => cmd_gen(n, attack_prob, seed, labelling_mode, out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
