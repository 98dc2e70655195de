use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use veltman::bisim::{is_bisimulation, largest_autobisimulation, Relation};
use veltman::decide::{decide, proof_problem, DecideError, SearchBudget, Verdict};
use veltman::filtration::{filtrate, verify_filtration, FiltrationError};
use veltman::formula::{d_closure, Formula, FormulaSet};
use veltman::hilbert::{check_proof, Logic, ProofObject, SchemaId};
use veltman::model::{load, truth_set, GenModel, LoadedModel, ModelFile};
use veltman::properties::{
    check_property, correspondence_bench, schema_frame_valid, BenchOptions, PropertyId,
    DEFAULT_SCHEMA_WORLD_CAP,
};
use veltman::worldset::WorldSet;

#[derive(Parser)]
#[command(name = "veltman", version, about = "Interpretability logics over Veltman models")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Close S under the frame clauses when loading generalized models.
    #[arg(long, global = true)]
    closure: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its syntax tree.
    Parse { formula: String },
    /// Check that a model file describes a legal frame.
    CheckModel { model: PathBuf },
    /// Evaluate a formula on a model.
    ModelCheck {
        model: PathBuf,
        formula: String,
        /// Only check this world.
        #[arg(long)]
        world: Option<String>,
    },
    /// Check a characteristic frame property.
    CheckProperty {
        #[arg(long)]
        property: PropertyId,
        model: PathBuf,
    },
    /// Check whether an axiom schema is valid on a model's frame.
    SchemaValid { schema: SchemaId, model: PathBuf },
    /// Largest autobisimulation, or check a relation between two models.
    Bisim {
        model: PathBuf,
        /// Second model; requires --relation.
        #[arg(long, requires = "relation")]
        against: Option<PathBuf>,
        /// JSON list of [world, world'] pairs.
        #[arg(long, requires = "against")]
        relation: Option<PathBuf>,
    },
    /// Filtrate a model through the adequate set of some formulas.
    Filtrate {
        model: PathBuf,
        /// Seed formula of D (repeatable); D is its subformula and negation closure.
        #[arg(long = "formula", required = true)]
        formulas: Vec<String>,
        /// Write the partition JSON here.
        #[arg(long)]
        partition_out: Option<PathBuf>,
    },
    /// Check a Hilbert-style proof.
    CheckProof {
        #[arg(long, default_value = "IL")]
        logic: Logic,
        proof: PathBuf,
    },
    /// Bounded countermodel search.
    Search {
        #[arg(long, default_value = "IL")]
        logic: Logic,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
        /// Maximum generators per S_w(u).
        #[arg(long)]
        max_generators: Option<usize>,
        /// Seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        /// A proof of the formula; accepted proofs skip the search.
        #[arg(long)]
        proof: Option<PathBuf>,
        formula: String,
    },
    /// Compare a frame property with validity of its schema on small frames.
    Bench {
        #[arg(long)]
        property: PropertyId,
        #[arg(long, default_value_t = 4)]
        max_worlds: usize,
        /// Frames sampled at four worlds.
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Operational failure: exit code 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn parse_formula(text: &str) -> Result<Formula, Failure> {
    text.parse::<Formula>().map_err(|e| Failure(e.to_string()))
}

/// Loads a model and rejects illegal ones.
fn legal_model(path: &Path, closure: bool) -> Result<LoadedModel, Failure> {
    let (model, report) = load(&read(path)?, closure)?;
    if !report.is_legal() {
        return Err(Failure(format!("{}: illegal model\n{report}", path.display())));
    }
    Ok(model)
}

fn emit(format: Format, text: impl FnOnce() -> String, value: impl FnOnce() -> Value) {
    match format {
        Format::Text => print!("{}", text()),
        Format::Json => println!("{}", serde_json::to_string_pretty(&value()).expect("json")),
    }
}

fn ast(f: &Formula) -> String {
    let bin = |name: &str, a: &Formula, b: &Formula| format!("{name}({},{})", ast(a), ast(b));
    match f {
        Formula::Var(p) => p.clone(),
        Formula::Bot => "Bot".into(),
        Formula::Top => "Top".into(),
        Formula::Neg(a) => format!("Neg({})", ast(a)),
        Formula::Box(a) => format!("Box({})", ast(a)),
        Formula::Dia(a) => format!("Dia({})", ast(a)),
        Formula::And(a, b) => bin("And", a, b),
        Formula::Or(a, b) => bin("Or", a, b),
        Formula::Impl(a, b) => bin("Impl", a, b),
        Formula::Rhd(a, b) => bin("Rhd", a, b),
    }
}

fn names_of(names: &[String], s: WorldSet) -> Vec<String> {
    s.iter().map(|i| names[i].clone()).collect()
}

fn run(cli: Cli) -> Outcome {
    let format = cli.format;
    match cli.command {
        Command::Parse { formula } => {
            let f = parse_formula(&formula)?;
            emit(
                format,
                || format!("{}\n{}\n", ast(&f), f),
                || {
                    json!({
                        "formula": f.to_string(),
                        "ast": ast(&f),
                        "normalized": f.normalize().to_string(),
                        "depth": f.depth(),
                        "modal_depth": f.modal_depth(),
                        "variables": f.variables(),
                    })
                },
            );
            Ok(true)
        }
        Command::CheckModel { model } => {
            let (m, report) = load(&read(&model)?, cli.closure)?;
            let legal = report.is_legal();
            emit(
                format,
                || format!("{report}\n"),
                || {
                    json!({
                        "legal": legal,
                        "worlds": m.worlds(),
                        "violations": report.lines(),
                    })
                },
            );
            Ok(legal)
        }
        Command::ModelCheck {
            model,
            formula,
            world,
        } => {
            let m = legal_model(&model, cli.closure)?;
            let f = parse_formula(&formula)?;
            let names = m.worlds().to_vec();
            let t = match &m {
                LoadedModel::Gen(g) => truth_set(g, &f),
                LoadedModel::Ord(o) => truth_set(o, &f),
            };
            let scope = match &world {
                Some(w) => {
                    let i = names
                        .iter()
                        .position(|x| x == w)
                        .ok_or_else(|| Failure(format!("unknown world {w:?}")))?;
                    WorldSet::singleton(i)
                }
                None => WorldSet::full(names.len()),
            };
            let failing = scope - t;
            emit(
                format,
                || {
                    let mut out = format!("forced at: {:?}\n", names_of(&names, t));
                    if !failing.is_empty() {
                        out.push_str(&format!("fails at: {:?}\n", names_of(&names, failing)));
                    }
                    out
                },
                || {
                    json!({
                        "formula": f.to_string(),
                        "forced_at": names_of(&names, t),
                        "fails_at": names_of(&names, failing),
                    })
                },
            );
            Ok(failing.is_empty())
        }
        Command::CheckProperty { property, model } => {
            let m = legal_model(&model, cli.closure)?.to_gen();
            let result = check_property(&m.frame, property);
            let names = m.frame.worlds();
            emit(
                format,
                || match &result {
                    Ok(()) => format!("{} holds\n", property.name()),
                    Err(c) => format!("{} fails: {}\n", property.name(), c.describe(names)),
                },
                || {
                    json!({
                        "property": property.name(),
                        "holds": result.is_ok(),
                        "witness": result.as_ref().err().map(|c| c.describe(names)),
                    })
                },
            );
            Ok(result.is_ok())
        }
        Command::SchemaValid { schema, model } => {
            let m = legal_model(&model, cli.closure)?.to_gen();
            let result = schema_frame_valid(&m.frame, schema, DEFAULT_SCHEMA_WORLD_CAP)?;
            let names = m.frame.worlds();
            let instance = schema.fresh_instance();
            let falsifier = result.as_ref().map(|fal| {
                let val: serde_json::Map<String, Value> = fal
                    .valuation
                    .iter()
                    .map(|(p, s)| (p.clone(), json!(names_of(names, *s))))
                    .collect();
                (names[fal.world].clone(), val)
            });
            emit(
                format,
                || match &falsifier {
                    None => format!("{} is valid on the frame\n", schema.name()),
                    Some((w, val)) => format!(
                        "{} fails: {} is false at {w} under {}\n",
                        schema.name(),
                        instance,
                        Value::Object(val.clone())
                    ),
                },
                || {
                    json!({
                        "schema": schema.name(),
                        "instance": instance.to_string(),
                        "valid": falsifier.is_none(),
                        "world": falsifier.as_ref().map(|f| f.0.clone()),
                        "valuation": falsifier.as_ref().map(|f| Value::Object(f.1.clone())),
                    })
                },
            );
            Ok(falsifier.is_none())
        }
        Command::Bisim {
            model,
            against,
            relation,
        } => {
            let m = legal_model(&model, cli.closure)?.to_gen();
            match (against, relation) {
                (Some(other), Some(rel)) => {
                    let m2 = legal_model(&other, cli.closure)?.to_gen();
                    let z = read_relation(&read(&rel)?, &m, &m2)?;
                    let result = is_bisimulation(&m, &m2, &z);
                    let (l, r) = (m.frame.worlds(), m2.frame.worlds());
                    emit(
                        format,
                        || match &result {
                            Ok(()) => "bisimulation\n".into(),
                            Err(e) => format!("not a bisimulation: {}\n", e.describe(l, r)),
                        },
                        || {
                            json!({
                                "bisimulation": result.is_ok(),
                                "failure": result.as_ref().err().map(|e| e.describe(l, r)),
                            })
                        },
                    );
                    Ok(result.is_ok())
                }
                _ => {
                    let p = largest_autobisimulation(&m);
                    let names = m.frame.worlds();
                    emit(format, || p.describe(names), || p.to_json(names));
                    Ok(true)
                }
            }
        }
        Command::Filtrate {
            model,
            formulas,
            partition_out,
        } => {
            let m = legal_model(&model, cli.closure)?.to_gen();
            let seed = formulas
                .iter()
                .map(|s| parse_formula(s))
                .collect::<Result<FormulaSet, _>>()?;
            let r = match filtrate(&m, &d_closure(&seed)) {
                Ok(r) => r,
                Err(FiltrationError::IllegalQuotient(report)) => {
                    println!("the quotient is not a legal frame:\n{report}");
                    return Ok(false);
                }
                Err(e) => return Err(e.into()),
            };
            let names = m.frame.worlds();
            let partition = r.partition.to_json(names);
            if let Some(path) = partition_out {
                let text = serde_json::to_string_pretty(&partition).expect("json");
                fs::write(&path, text + "\n")
                    .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            }
            let quotient = ModelFile::from_gen(&r.quotient).to_json();
            let check = verify_filtration(&m, &r);
            match format {
                Format::Text => {
                    eprint!("{}", r.partition.describe(names));
                    println!("{quotient}");
                }
                Format::Json => println!("{quotient}"),
            }
            if let Err(c) = &check {
                eprintln!(
                    "truth preservation fails: {} at {}",
                    c.formula, names[c.world]
                );
            }
            Ok(check.is_ok())
        }
        Command::CheckProof { logic, proof } => {
            let p = ProofObject::parse(&read(&proof)?)?;
            let result = check_proof(&p, logic);
            emit(
                format,
                || match &result {
                    Ok(()) => format!(
                        "accepted in {}: {}\n",
                        logic.name(),
                        p.conclusion().map(ToString::to_string).unwrap_or_default()
                    ),
                    Err(r) => format!("rejected: {r}\n"),
                },
                || {
                    json!({
                        "logic": logic.name(),
                        "accepted": result.is_ok(),
                        "line": result.as_ref().err().map(|r| r.line),
                        "reason": result.as_ref().err().map(|r| r.reason.clone()),
                    })
                },
            );
            Ok(result.is_ok())
        }
        Command::Search {
            logic,
            max_worlds,
            max_generators,
            time_limit,
            proof,
            formula,
        } => {
            let a = parse_formula(&formula)?;
            let time_limit = match time_limit {
                Some(s) if !(s > 0.0 && s.is_finite()) => {
                    return Err(Failure("time limit must be positive".into()))
                }
                Some(s) => Some(Duration::from_secs_f64(s)),
                None => None,
            };
            let budget = SearchBudget {
                max_worlds,
                max_generators,
                time_limit,
            };
            let proof = match proof {
                Some(path) => Some(ProofObject::parse(&read(&path)?)?),
                None => None,
            };
            if let Some(p) = &proof {
                if let Some(problem) = proof_problem(&a, logic, p) {
                    eprintln!("proof not used: {problem}");
                }
            }
            let verdict = decide(&a, logic, budget, proof.as_ref()).map_err(|e| match e {
                DecideError::TimeLimit(_) => Failure(format!("budget exhausted: {e}")),
                other => Failure(other.to_string()),
            })?;
            report_verdict(format, &verdict, logic)
        }
        Command::Bench {
            property,
            max_worlds,
            samples,
            seed,
        } => {
            let opts = BenchOptions { samples, seed };
            let mut all_agree = true;
            let mut reports = Vec::new();
            for n in 1..=max_worlds {
                let r = correspondence_bench(n, property, opts)?;
                all_agree &= r.all_agree();
                reports.push(r);
            }
            emit(
                format,
                || {
                    let mut out = String::new();
                    for r in &reports {
                        let mode = if r.exhaustive { "exhaustive" } else { "sampled" };
                        out.push_str(&format!(
                            "# n = {} ({mode}, {} frames, {} disagreements)\n",
                            r.worlds,
                            r.rows.len(),
                            r.disagreements().count()
                        ));
                        out.push_str(&r.text_table());
                    }
                    out
                },
                || serde_json::to_value(&reports).expect("json"),
            );
            Ok(all_agree)
        }
    }
}

fn report_verdict(format: Format, verdict: &Verdict, logic: Logic) -> Outcome {
    match verdict {
        Verdict::Refuted { model, world } => {
            let mut file = ModelFile::from_gen(model);
            file.refuted_at = Some(model.frame.name(*world).to_string());
            if format == Format::Text {
                eprintln!(
                    "countermodel with {} worlds over {}, refuted at {}",
                    model.len(),
                    logic.name(),
                    model.frame.name(*world)
                );
            }
            println!("{}", file.to_json());
            Ok(false)
        }
        Verdict::NoCountermodelUpTo(n) => {
            emit(
                format,
                || format!("no countermodel over {} frames with at most {n} worlds\n", logic.name()),
                || json!({"verdict": "no-countermodel", "logic": logic.name(), "max_worlds": n}),
            );
            Ok(true)
        }
        Verdict::CheckedTheorem { logic, steps } => {
            emit(
                format,
                || format!("theorem of {} (checked proof, {steps} lines)\n", logic.name()),
                || json!({"verdict": "theorem", "logic": logic.name(), "steps": steps}),
            );
            Ok(true)
        }
    }
}

fn read_relation(text: &str, m: &GenModel, m2: &GenModel) -> Result<Relation, Failure> {
    let pairs: Vec<[String; 2]> = serde_json::from_str(text)?;
    let mut z = vec![WorldSet::EMPTY; m.len()];
    for [a, b] in pairs {
        let i = m
            .frame
            .index_of(&a)
            .ok_or_else(|| Failure(format!("unknown world {a:?} in the first model")))?;
        let j = m2
            .frame
            .index_of(&b)
            .ok_or_else(|| Failure(format!("unknown world {b:?} in the second model")))?;
        z[i].insert(j);
    }
    Ok(z)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
