//! Command-line front end. Each subcommand loads its inputs, calls one
//! library operation and renders the result.
//!
//! Exit status: 0 when everything checked passes, 1 when a check found a
//! violation or countermodel, 2 when the command could not run.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::algebra::{check_basic_laws, induced_order, validate_effect_axioms, EffectAlgebra};
use crate::corpus::corpus;
use crate::enumerate::{census_with, enumerate_up_to, write_directory, EnumerateOptions, DEFAULT_CAP};
use crate::implication::{
    natural_implication_table, sasaki_implication_table, set_implication_table, ImplicationTable,
};
use crate::io::{self, ModelFile};
use crate::logic::{
    builtin_suite, check_quasiidentity, semantic_consequence, Identity, QuasiIdentity, SuiteName,
    Verdict,
};
use crate::proof::{check_derivation, search_proof, soundness_audit, CheckResult, SearchBound, System};
use crate::report::label;
use crate::term::Term;
use crate::transforms::{
    effect_to_implication, round_trip_check, table_to_effect, validate_implication_axioms, AxiomMode, RoundTripInput,
};

/// Outcome of one command: the exit status and the text to print.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    pub exit: i32,
    pub report: String,
}

impl CommandResult {
    fn new(ok: bool, report: String) -> Self {
        CommandResult { exit: if ok { 0 } else { 1 }, report }
    }

    fn usage(message: impl ToString) -> Self {
        CommandResult { exit: 2, report: message.to_string() }
    }
}

#[derive(Parser, Debug)]
#[command(name = "effect-workbench", version, about = "Finite-model workbench for effect algebras and their implication logics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    Implication,
    Effect,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Natural,
    Sasaki,
    Set,
}

fn parse_suite(s: &str) -> Result<SuiteName, String> {
    s.parse().map_err(|e: crate::logic::LogicError| e.to_string())
}

fn parse_system(s: &str) -> Result<System, String> {
    s.parse()
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the effect algebra axioms and the basic derived laws.
    Validate { model: PathBuf },
    /// Induced order, lattice status, join and meet tables.
    Order {
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert between effect algebras and implication tables.
    Transform {
        #[arg(long, value_enum)]
        to: Target,
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert there and back and compare.
    Roundtrip { file: PathBuf },
    /// Build an implication table.
    Imp {
        #[arg(long, value_enum)]
        kind: Kind,
        model: PathBuf,
        #[arg(long)]
        compare: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a built-in suite, an identity or a quasi-identity on models.
    #[command(group(ArgGroup::new("what").required(true).args(["suite", "identity", "quasi"])))]
    Check {
        #[arg(long, value_parser = parse_suite)]
        suite: Option<SuiteName>,
        #[arg(long)]
        identity: Option<String>,
        #[arg(long)]
        quasi: Option<String>,
        #[arg(long = "model", required = true, num_args = 1..)]
        models: Vec<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Semantic consequence over every model in a directory.
    Consequence {
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long)]
        goal: String,
        #[arg(long)]
        models: PathBuf,
    },
    /// Verify a derivation, optionally auditing it against models.
    CheckProof {
        file: PathBuf,
        #[arg(long)]
        audit_models: Option<PathBuf>,
    },
    /// Bounded proof search.
    Prove {
        #[arg(long, value_parser = parse_system)]
        system: System,
        #[arg(long)]
        goal: String,
        #[arg(long = "hyp")]
        hyps: Vec<String>,
        #[arg(long, default_value_t = 30)]
        max_lines: usize,
        #[arg(long, default_value_t = 8)]
        max_depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write every effect algebra up to a size into a directory.
    Enumerate {
        #[arg(long)]
        max_size: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Count effect algebras per size.
    Census {
        #[arg(long)]
        max_size: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

type Outcome = Result<CommandResult, String>;

/// Parse `argv` (program name first) and run the command.
pub fn run_command<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let exit = if e.use_stderr() { 2 } else { 0 };
            return CommandResult { exit, report: e.render().to_string() };
        }
    };
    let outcome = match cli.command {
        Command::Validate { model } => validate(&model),
        Command::Order { model, out } => order(&model, out.as_deref()),
        Command::Transform { to, file, out } => transform(to, &file, out.as_deref()),
        Command::Roundtrip { file } => roundtrip(&file),
        Command::Imp { kind, model, compare, out } => imp(kind, &model, compare, out.as_deref()),
        Command::Check { suite, identity, quasi, models, jobs } => check(suite, identity, quasi, &models, jobs),
        Command::Consequence { sigma, goal, models } => consequence(&sigma, &goal, &models),
        Command::CheckProof { file, audit_models } => check_proof(&file, audit_models.as_deref()),
        Command::Prove { system, goal, hyps, max_lines, max_depth, out } => {
            prove(system, &goal, &hyps, SearchBound { max_lines, max_depth, ..SearchBound::default() }, out.as_deref())
        }
        Command::Enumerate { max_size, out, jobs, cap } => enumerate(max_size, &out, EnumerateOptions { cap, jobs, ..Default::default() }),
        Command::Census { max_size, jobs, cap, out } => {
            census(max_size, EnumerateOptions { cap, jobs, ..Default::default() }, out.as_deref())
        }
    };
    outcome.unwrap_or_else(CommandResult::usage)
}

fn err(e: impl ToString) -> String {
    e.to_string()
}

fn load_effect(path: &Path) -> Result<EffectAlgebra, String> {
    let t = io::read_effect(path).map_err(err)?;
    EffectAlgebra::new(t).map_err(|e| format!("{}: {}", path.display(), e))
}

/// The implication table a model file denotes: I(E) for effect algebras.
fn load_table(path: &Path) -> Result<ImplicationTable, String> {
    match io::read_model(path).map_err(err)? {
        ModelFile::Effect(t) => {
            let e = EffectAlgebra::new(t).map_err(|e| format!("{}: {}", path.display(), e))?;
            Ok(effect_to_implication(&e))
        }
        ModelFile::Implication(t) => Ok(t),
    }
}

fn load_dir(dir: &Path) -> Result<Vec<(PathBuf, ImplicationTable)>, String> {
    let paths = io::model_paths(dir).map_err(err)?;
    if paths.is_empty() {
        return Err(format!("{}: no model files", dir.display()));
    }
    paths.into_iter().map(|p| Ok((p.clone(), load_table(&p)?))).collect()
}

fn write_out(path: Option<&Path>, text: &str, report: &mut String) -> Result<(), String> {
    if let Some(p) = path {
        io::write(p, text).map_err(err)?;
        let _ = writeln!(report, "wrote {}", p.display());
    }
    Ok(())
}

fn render_set(s: &std::collections::BTreeSet<usize>, names: Option<&[String]>) -> String {
    let parts: Vec<String> = s.iter().map(|&x| label(x, names)).collect();
    if parts.len() == 1 {
        parts[0].clone()
    } else {
        format!("{{{}}}", parts.join(","))
    }
}

/// Operation table with row and column labels.
pub fn render_table(t: &ImplicationTable) -> String {
    let names = t.names.as_deref();
    let cells: Vec<Vec<String>> =
        t.cells().iter().map(|row| row.iter().map(|c| render_set(c, names)).collect()).collect();
    let heads: Vec<String> = t.elements().map(|x| label(x, names)).collect();
    let width = cells.iter().flatten().chain(&heads).map(|s| s.len()).max().unwrap_or(1);
    let side = width.max(2);
    let mut out = format!("{:>w$} |", "->", w = side);
    for h in &heads {
        let _ = write!(out, " {:>w$}", h, w = width);
    }
    out.push('\n');
    for (h, row) in heads.iter().zip(&cells) {
        let _ = write!(out, "{:>w$} |", h, w = side);
        for c in row {
            let _ = write!(out, " {:>w$}", c, w = width);
        }
        out.push('\n');
    }
    out
}

fn validate(path: &Path) -> Outcome {
    let t = io::read_effect(path).map_err(err)?;
    let names = t.names.clone();
    let v = validate_effect_axioms(&t).map_err(err)?;
    let mut report = String::new();
    if !v.is_ok() {
        report.push_str("E1-E4: fail\n");
        for viol in &v.violations {
            let w: Vec<String> = viol.witness.iter().map(|&x| label(x, names.as_deref())).collect();
            let _ = writeln!(report, "  {}: ({}) {}", viol.axiom, w.join(", "), viol.detail);
        }
        return Ok(CommandResult::new(false, report));
    }
    let laws = check_basic_laws(&t).map_err(err)?;
    if laws.passed() {
        report.push_str("E1-E4: pass; basic laws (i)-(viii): pass\n");
    } else {
        report.push_str("E1-E4: pass; basic laws: fail\n");
        report.push_str(&laws.render(names.as_deref()));
    }
    Ok(CommandResult::new(laws.passed(), report))
}

fn order(path: &Path, out: Option<&Path>) -> Outcome {
    let e = load_effect(path)?;
    let o = induced_order(&e);
    let names = e.names();
    let mut report = String::from("order:\n");
    for x in e.elements() {
        let above: Vec<String> = e.elements().filter(|&y| y != x && o.leq[x][y]).map(|y| label(y, names)).collect();
        let _ = writeln!(report, "  {} <= {}", label(x, names), above.join(", "));
    }
    let _ = writeln!(report, "lattice: {}", if o.is_lattice { "yes" } else { "no" });
    for (title, table) in [("join", &o.join), ("meet", &o.meet)] {
        if let Some(tab) = table {
            let _ = writeln!(report, "{}:", title);
            for row in tab {
                let r: Vec<String> = row.iter().map(|&v| label(v, names)).collect();
                let _ = writeln!(report, "  {}", r.join(" "));
            }
        }
    }
    write_out(out, &io::order_to_json(&o), &mut report)?;
    Ok(CommandResult::new(true, report))
}

fn transform(to: Target, path: &Path, out: Option<&Path>) -> Outcome {
    let model = io::read_model(path).map_err(err)?;
    let mut report = String::new();
    match (to, model) {
        (Target::Implication, ModelFile::Effect(t)) => {
            let e = EffectAlgebra::new(t).map_err(err)?;
            let t = effect_to_implication(&e);
            let mode = if t.is_single_valued() { AxiomMode::Leia } else { AxiomMode::Eia };
            let r = validate_implication_axioms(&t, mode).map_err(err)?;
            report.push_str(&render_table(&t));
            report.push_str(&r.render(t.names.as_deref()));
            write_out(out, &io::implication_to_json(&t), &mut report)?;
            Ok(CommandResult::new(r.passed(), report))
        }
        (Target::Effect, ModelFile::Implication(t)) => match table_to_effect(&t) {
            Ok(e) => {
                let v = validate_effect_axioms(e.tables()).map_err(err)?;
                let _ = writeln!(report, "effect algebra on {} elements; E1-E4: {}", e.size(), if v.is_ok() { "pass" } else { "fail" });
                for x in e.elements() {
                    let row: Vec<String> =
                        e.elements().map(|y| e.sum(x, y).map_or("-".into(), |s| label(s, e.names()))).collect();
                    let _ = writeln!(report, "  {} + : {}", label(x, e.names()), row.join(" "));
                }
                write_out(out, &io::effect_to_json(e.tables()), &mut report)?;
                Ok(CommandResult::new(v.is_ok(), report))
            }
            Err(e) => Ok(CommandResult::new(false, e.to_string())),
        },
        (Target::Implication, ModelFile::Implication(_)) => Err("input is already an implication table".into()),
        (Target::Effect, ModelFile::Effect(_)) => Err("input is already an effect algebra".into()),
    }
}

fn roundtrip(path: &Path) -> Outcome {
    let (input, names) = match io::read_model(path).map_err(err)? {
        ModelFile::Effect(t) => {
            let names = t.names.clone();
            (RoundTripInput::Effect(EffectAlgebra::new(t).map_err(err)?), names)
        }
        ModelFile::Implication(t) => {
            let names = t.names.clone();
            (RoundTripInput::Implication(t), names)
        }
    };
    match round_trip_check(&input) {
        Ok(r) => Ok(CommandResult::new(r.passed(), r.render(names.as_deref()))),
        Err(e) => Ok(CommandResult::new(false, e.to_string())),
    }
}

fn imp(kind: Kind, path: &Path, compare: bool, out: Option<&Path>) -> Outcome {
    let e = load_effect(path)?;
    let not_lattice = |_| format!("{}: not lattice-ordered; use --kind set", path.display());
    let t = match kind {
        Kind::Natural => natural_implication_table(&e).map_err(not_lattice)?,
        Kind::Sasaki => sasaki_implication_table(&e).map_err(not_lattice)?,
        Kind::Set => set_implication_table(&e),
    };
    let mut report = render_table(&t);
    if compare {
        let natural = natural_implication_table(&e).map_err(not_lattice)?;
        let sasaki = sasaki_implication_table(&e).map_err(not_lattice)?;
        let set = set_implication_table(&e);
        for (title, other) in [("sasaki", &sasaki), ("set", &set)] {
            let diff = natural.diff(other);
            let _ = writeln!(report, "natural vs {}: {} differing cells", title, diff.len());
            for (x, y) in diff {
                let _ = writeln!(
                    report,
                    "  {} -> {}: {} vs {}",
                    label(x, e.names()),
                    label(y, e.names()),
                    render_set(natural.entry(x, y), e.names()),
                    render_set(other.entry(x, y), e.names())
                );
            }
        }
    }
    write_out(out, &io::implication_to_json(&t), &mut report)?;
    Ok(CommandResult::new(true, report))
}

fn check(
    suite: Option<SuiteName>,
    identity: Option<String>,
    quasi: Option<String>,
    models: &[PathBuf],
    jobs: usize,
) -> Outcome {
    let tables: Vec<(PathBuf, ImplicationTable)> =
        models.iter().map(|p| Ok((p.clone(), load_table(p)?))).collect::<Result<_, String>>()?;
    let single: Option<QuasiIdentity> = match (&identity, &quasi) {
        (Some(text), _) => Some(text.parse::<Identity>().map_err(err)?.into()),
        (_, Some(text)) => Some(text.parse::<QuasiIdentity>().map_err(err)?),
        _ => None,
    };
    let run = |(path, table): &(PathBuf, ImplicationTable)| -> (bool, String) {
        let names = table.names.as_deref();
        let mut out = String::new();
        let mut ok = true;
        if let Some(name) = suite {
            let results = builtin_suite(name).run(table);
            let holds = results.iter().filter(|(_, v)| v.holds()).count();
            let _ = writeln!(out, "{}: {} {}/{} entries hold", path.display(), name, holds, results.len());
            for (label, v) in &results {
                if let Verdict::Countermodel(c) = v {
                    ok = false;
                    let _ = writeln!(out, "  {} fails: {}", label, c.render(names));
                }
            }
        } else if let Some(q) = &single {
            match check_quasiidentity(table, q) {
                Verdict::Holds => {
                    let _ = writeln!(out, "{}: holds", path.display());
                }
                Verdict::Countermodel(c) => {
                    ok = false;
                    let _ = writeln!(out, "{}: fails: {}", path.display(), c.render(names));
                }
            }
        }
        (ok, out)
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().map_err(err)?;
    let results: Vec<(bool, String)> = pool.install(|| tables.par_iter().map(run).collect());
    let ok = results.iter().all(|(ok, _)| *ok);
    Ok(CommandResult::new(ok, results.into_iter().map(|(_, s)| s).collect()))
}

fn consequence(sigma: &Path, goal: &str, models: &Path) -> Outcome {
    let premises: Vec<Identity> = io::read_identities(sigma)
        .map_err(err)?
        .into_iter()
        .map(|q| {
            if q.premises.is_empty() {
                Ok(q.conclusion)
            } else {
                Err(format!("{}: `{}` is not an identity", sigma.display(), q))
            }
        })
        .collect::<Result<_, String>>()?;
    let goal: Identity = goal.parse().map_err(err)?;
    let loaded = load_dir(models)?;
    let tables: Vec<ImplicationTable> = loaded.iter().map(|(_, t)| t.clone()).collect();
    match semantic_consequence(&tables, &premises, &goal).map_err(err)? {
        Verdict::Holds => Ok(CommandResult::new(true, format!("holds in all {} models\n", tables.len()))),
        Verdict::Countermodel(c) => {
            let m = c.model.unwrap_or(0);
            let names = tables[m].names.as_deref();
            let report = format!("countermodel in {}: {}\n", loaded[m].0.display(), c.render(names));
            Ok(CommandResult::new(false, report))
        }
    }
}

/// The shipped corpus plus every derivation with an id in `dir`.
fn library_for(dir: Option<&Path>) -> crate::proof::FixtureLibrary {
    let mut lib = corpus();
    if let Some(entries) = dir.and_then(|d| std::fs::read_dir(d).ok()) {
        let mut paths: Vec<PathBuf> = entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
        paths.sort();
        for p in paths {
            if p.to_string_lossy().ends_with(".prf.json") {
                if let Ok(d) = io::read_derivation(&p) {
                    if let Some(id) = d.id.clone() {
                        if lib.get(&id).is_none() {
                            lib.insert(&id, d);
                        }
                    }
                }
            }
        }
    }
    lib
}

fn check_proof(path: &Path, audit: Option<&Path>) -> Outcome {
    let d = io::read_derivation(path).map_err(err)?;
    let lib = library_for(path.parent());
    let result = check_derivation(&d, &lib);
    let mut report = format!("{}\n", result);
    let mut ok = result.is_verified();
    if let (Some(dir), CheckResult::Verified) = (audit, &result) {
        let models = load_dir(dir)?;
        let tables: Vec<ImplicationTable> = models.iter().map(|(_, t)| t.clone()).collect();
        let r = soundness_audit(&d, &tables);
        let _ = writeln!(report, "soundness over {} models: {}", tables.len(), if r.passed() { "pass" } else { "fail" });
        if !r.passed() {
            report.push_str(&r.render(None));
        }
        ok &= r.passed();
    }
    Ok(CommandResult::new(ok, report))
}

fn prove(system: System, goal: &str, hyps: &[String], bound: SearchBound, out: Option<&Path>) -> Outcome {
    let goal: Term = goal.parse().map_err(err)?;
    let hyps: Vec<Term> = hyps.iter().map(|h| h.parse()).collect::<Result<_, _>>().map_err(err)?;
    match search_proof(system, &hyps, &goal, bound) {
        Ok(d) => {
            let mut report = d.to_string();
            write_out(out, &io::derivation_to_json(&d), &mut report)?;
            Ok(CommandResult::new(true, report))
        }
        Err(e) => Ok(CommandResult::new(false, format!("{}\n", e))),
    }
}

fn enumerate(max_size: usize, out: &Path, opts: EnumerateOptions) -> Outcome {
    let algebras = enumerate_up_to(max_size, &opts).map_err(err)?;
    let paths = write_directory(out, &algebras).map_err(err)?;
    let mut report = String::new();
    for (n, group) in crate::enumerate::by_size(&algebras) {
        let _ = writeln!(report, "size {}: {}", n, group.len());
    }
    let _ = writeln!(report, "wrote {} files to {}", paths.len(), out.display());
    Ok(CommandResult::new(true, report))
}

fn census(max_size: usize, opts: EnumerateOptions, out: Option<&Path>) -> Outcome {
    let c = census_with(max_size, &opts).map_err(err)?;
    let mut report = format!("{}\n", c);
    let json = serde_json::to_string_pretty(&c).map_err(err)? + "\n";
    write_out(out, &json, &mut report)?;
    Ok(CommandResult::new(true, report))
}
