mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tts_core::basis::{j_geq, join_decompose, t_geq};
use tts_core::closure::{c_closure, density_by_formula, e_c, is_class_transversal};
use tts_core::connect::{c_components, find_connection, is_c_connected};
use tts_core::ingest::{self, fixtures, AncestorScope};
use tts_core::io::{space_to_json, SpaceDoc};
use tts_core::oracle::{oracle_check_space, oracle_min_dense, OracleBudget};
use tts_core::stats::{self, AffinityMode, ScoreTable};
use tts_core::{ChainView, Error, NeighborhoodMode, TypeChain, TypedSpace};

#[derive(Parser)]
#[command(name = "tts", version, about = "Typed topological spaces on finite sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Write the output here instead of stdout.
    #[arg(short = 'o', long, global = true)]
    output: Option<PathBuf>,
    /// Leave out timing so that reruns are byte-identical.
    #[arg(long, global = true)]
    stable: bool,
    /// Let every open between two chain levels count as a neighborhood.
    #[arg(long, global = true)]
    literal_chains: bool,
    /// Largest point count searched exhaustively.
    #[arg(long, global = true, env = "TTS_BUDGET_POINTS")]
    budget_points: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a space from a dataset or a built-in fixture.
    Build(BuildArgs),
    /// Check the type mapping of a space.
    Validate {
        space: PathBuf,
        /// Also require strict typing.
        #[arg(long)]
        strict: bool,
    },
    /// Opens whose type lies above `--p`.
    Basis {
        space: PathBuf,
        #[arg(long)]
        p: String,
        #[arg(long)]
        x: Option<String>,
        /// Decompose this open into irreducible members.
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<String>>,
    },
    /// Chain neighborhoods of one point or of every point.
    Nbhd {
        space: PathBuf,
        #[arg(long)]
        chain: String,
        #[arg(long)]
        x: Option<String>,
    },
    /// Closure of a set along a chain, with a witness per added point
    Closure {
        space: PathBuf,
        #[arg(long)]
        chain: String,
        #[arg(long, value_delimiter = ',', default_value = "")]
        set: Vec<String>,
    },
    /// Smallest c-dense sets.
    Dense {
        space: PathBuf,
        #[arg(long)]
        chain: String,
    },
    /// Connection between two points, connectedness of a set, or the
    /// components when neither is given.
    Connect {
        space: PathBuf,
        #[arg(long)]
        chain: String,
        #[arg(long, requires = "y")]
        x: Option<String>,
        #[arg(long, requires = "x")]
        y: Option<String>,
        #[arg(long, value_delimiter = ',', conflicts_with = "x")]
        set: Option<Vec<String>>,
    },
    /// Z-scores of open sizes, point activity or pair affinity.
    Stats {
        space: PathBuf,
        #[arg(long, value_enum, default_value_t = Measure::Pchain)]
        measure: Measure,
        /// Generator for `pchain` and `activity`.
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        two_witness: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Compute in single precision.
        #[arg(long)]
        f32: bool,
    },
    /// Re-verify the structural properties of a space exhaustively.
    Oracle {
        space: PathBuf,
        /// Chains checked in addition to the realized two- and three-chains.
        #[arg(long)]
        chain: Vec<String>,
    },
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long, conflicts_with = "dataset")]
    fixture: Option<String>,
    #[arg(long, requires = "kind")]
    dataset: Option<PathBuf>,
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    /// Predicate definitions for `--kind table`.
    #[arg(long)]
    predicates: Option<PathBuf>,
    /// Ancestor types range over co-students only.
    #[arg(long)]
    co_students: bool,
    /// Make the result strictly typed.
    #[arg(long)]
    strictify: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Genealogy,
    Community,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Measure {
    Pchain,
    Activity,
    Affinity,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

enum Failure {
    Usage(String),
    Query(String),
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Validation(_) | Error::NotStrict(_) | Error::Invariant(_) => Failure::Invalid(msg),
            Error::UnknownPoint(_)
            | Error::Budget(_)
            | Error::Precondition(_)
            | Error::NoVariance { .. }
            | Error::ValuationBound { .. }
            | Error::Capacity { .. } => Failure::Query(msg),
            _ => Failure::Usage(msg),
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Query(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Usage(m) | Failure::Query(m) => m,
        }
    }
}

type Outcome = Result<Output, Failure>;

enum Output {
    /// A report; `ok` is false when the command found a violation.
    Report { command: Value, space: Value, result: Value, ok: bool },
    Raw(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let out = run(&cli);
    let (text, code) = match out {
        Ok(Output::Raw(text)) => (text, 0),
        Ok(Output::Report { command, space, result, ok }) => {
            let mut doc = json!({ "command": command, "space": space, "result": result });
            if !cli.global.stable {
                doc["timing"] = json!({ "elapsed_ms": start.elapsed().as_secs_f64() * 1e3 });
            }
            let mut text = serde_json::to_string_pretty(&doc).expect("plain data");
            text.push('\n');
            (text, if ok { 0 } else { 1 })
        }
        Err(f) => {
            eprintln!("tts: {}", f.message());
            return ExitCode::from(f.code());
        }
    };
    let written = match &cli.global.output {
        Some(path) => std::fs::write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("tts: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}

fn load(path: &Path) -> Result<TypedSpace, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let doc: SpaceDoc = serde_json::from_str(&text).map_err(Error::from)?;
    Ok(doc.into_space()?)
}

fn budget(g: &Global) -> OracleBudget {
    let mut b = OracleBudget::default();
    if let Some(n) = g.budget_points {
        b.max_points = n;
        b.max_connect_points = n;
    }
    b
}

fn mode(g: &Global) -> NeighborhoodMode {
    if g.literal_chains {
        NeighborhoodMode::Literal
    } else {
        NeighborhoodMode::Restricted
    }
}

fn point(s: &TypedSpace, name: &str) -> Result<usize, Failure> {
    Ok(s.point_id(name)?)
}

fn report(command: Value, s: &TypedSpace, result: Value) -> Outcome {
    Ok(Output::Report { command, space: report::digest(s), result, ok: true })
}

fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Build(args) => build(args),
        Command::Validate { space, strict } => {
            let text = std::fs::read_to_string(space)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", space.display())))?;
            let doc: SpaceDoc = serde_json::from_str(&text).map_err(Error::from)?;
            let s = doc.into_unvalidated()?;
            let checks = s.validate_type_mapping();
            let strictness = s.is_strictly_typed();
            let counterexample = strictness.counterexample.map(|(u, v)| {
                json!({ "smaller": report::open(&s, u), "larger": report::open(&s, v) })
            });
            let ok = checks.passed() && (!strict || strictness.strict);
            Ok(Output::Report {
                command: json!({ "name": "validate", "space": space, "strict": strict }),
                space: report::digest(&s),
                result: json!({
                    "valid": checks.passed(),
                    "checks": checks.checks,
                    "strict": strictness.strict,
                    "strictness_counterexample": counterexample,
                }),
                ok,
            })
        }
        Command::Basis { space, p, x, set } => {
            let s = load(space)?;
            let anchor = s.ctx().parse(p)?;
            let at = x.as_deref().map(|n| point(&s, n)).transpose()?;
            let all = t_geq(&s, &anchor, at)?;
            let irreducible = j_geq(&s, &anchor, at)?;
            let mut result = json!({
                "t_geq": report::family(&s, &all),
                "j_geq": report::family(&s, &irreducible),
            });
            if let Some(names) = set {
                let u = s.point_set(names)?;
                let id = s
                    .open_id(u)
                    .ok_or_else(|| Failure::Query(format!("{} is not open", s.format_set(u))))?;
                result["decomposition"] = report::opens(&s, &join_decompose(&s, id, &anchor)?);
            }
            report(json!({ "name": "basis", "space": space, "p": p, "x": x, "set": set }), &s, result)
        }
        Command::Nbhd { space, chain, x } => {
            let s = load(space)?;
            let c = TypeChain::parse(s.ctx(), chain)?;
            let v = ChainView::new(&s, &c, mode(g))?;
            let points: Vec<usize> = match x {
                Some(n) => vec![point(&s, n)?],
                None => (0..s.point_count()).collect(),
            };
            let mut rows = Vec::new();
            for x in points {
                rows.push(json!({
                    "point": s.ctx().points()[x],
                    "t_c": report::opens(&s, &v.tc_at(x)?),
                    "j_c": report::opens(&s, &v.jc_at(x)?),
                }));
            }
            let result = json!({ "exceptional": report::set(&s, e_c(&v)), "points": rows });
            report(chain_command("nbhd", space, chain, g, json!({ "x": x })), &s, result)
        }
        Command::Closure { space, chain, set } => {
            let s = load(space)?;
            let c = TypeChain::parse(s.ctx(), chain)?;
            let v = ChainView::new(&s, &c, mode(g))?;
            let names: Vec<&String> = set.iter().filter(|n| !n.is_empty()).collect();
            let a = s.point_set(&names)?;
            let r = c_closure(&v, a)?;
            report(chain_command("closure", space, chain, g, json!({ "set": names })), &s, report::closure(&s, &r))
        }
        Command::Dense { space, chain } => {
            let s = load(space)?;
            let c = TypeChain::parse(s.ctx(), chain)?;
            let v = ChainView::new(&s, &c, mode(g))?;
            let mut d = density_by_formula(&v);
            let b = budget(g);
            let mut oracle_witnesses = None;
            let mut transversal = None;
            if s.point_count() <= b.max_points {
                let found = oracle_min_dense(&s, &c, mode(g), &b)?;
                if found.size != d.density {
                    return Err(Failure::Invalid(format!(
                        "maximal-family count gives {} but the smallest c-dense set has size {} (e.g. {})",
                        d.density,
                        found.size,
                        s.format_set(found.witnesses[0])
                    )));
                }
                transversal = Some(found.witnesses.iter().all(|&w| is_class_transversal(&d, w)));
                d.oracle_density = Some(found.size);
                oracle_witnesses = Some(found.witnesses.len());
            }
            report(chain_command("dense", space, chain, g, json!({})), &s, report::density(&s, &d, oracle_witnesses, transversal))
        }
        Command::Connect { space, chain, x, y, set } => {
            let s = load(space)?;
            let c = TypeChain::parse(s.ctx(), chain)?;
            let v = ChainView::new(&s, &c, mode(g))?;
            let extra = json!({ "x": x, "y": y, "set": set });
            let result = match (x, y, set) {
                (Some(x), Some(y), _) => {
                    let o = find_connection(&v, point(&s, x)?, point(&s, y)?, &budget(g))?;
                    report::connection(&s, &o)
                }
                (_, _, Some(names)) => {
                    let a = s.point_set(names)?;
                    let r = is_c_connected(&v, a)?;
                    json!({
                        "set": report::set(&s, a),
                        "connected": r.connected,
                        "separator": r.separator.map(|(u, w)| [report::open(&s, u), report::open(&s, w)]),
                    })
                }
                _ => report::components(&s, &c_components(&v)?),
            };
            report(chain_command("connect", space, chain, g, extra), &s, result)
        }
        Command::Stats { space, measure, p, two_witness, format, f32 } => {
            let s = load(space)?;
            let need_p = || {
                p.as_deref()
                    .ok_or_else(|| Failure::Usage("this measure needs --p <generator>".into()))
            };
            let affinity = if *two_witness { AffinityMode::TwoWitness } else { AffinityMode::SingleWitness };
            let (csv, table) = if *f32 {
                let t: ScoreTable<f32> = match measure {
                    Measure::Pchain => stats::pchain_stats(&s, need_p()?)?,
                    Measure::Activity => stats::point_activity(&s, need_p()?)?,
                    Measure::Affinity => stats::pair_affinity(&s, affinity)?,
                };
                (t.to_csv()?, t.to_json())
            } else {
                let t: ScoreTable<f64> = match measure {
                    Measure::Pchain => stats::pchain_stats(&s, need_p()?)?,
                    Measure::Activity => stats::point_activity(&s, need_p()?)?,
                    Measure::Affinity => stats::pair_affinity(&s, affinity)?,
                };
                (t.to_csv()?, t.to_json())
            };
            if *format == Format::Csv {
                return Ok(Output::Raw(csv));
            }
            let name = match measure {
                Measure::Pchain => "pchain",
                Measure::Activity => "activity",
                Measure::Affinity => "affinity",
            };
            let command = json!({
                "name": "stats", "space": space, "measure": name, "p": p,
                "two_witness": two_witness, "f32": f32,
            });
            report(command, &s, table)
        }
        Command::Oracle { space, chain } => {
            let s = load(space)?;
            let chains = chain
                .iter()
                .map(|c| TypeChain::parse(s.ctx(), c))
                .collect::<Result<Vec<_>, _>>()?;
            let r = oracle_check_space(&s, mode(g), &chains, &budget(g))?;
            let command = chain_command("oracle", space, &chain.join(" | "), g, json!({}));
            Ok(Output::Report {
                command,
                space: report::digest(&s),
                result: json!({
                    "passed": r.passed(),
                    "chains_examined": r.chains_examined,
                    "checks": r.checks,
                }),
                ok: r.passed(),
            })
        }
    }
}

fn chain_command(name: &str, space: &Path, chain: &str, g: &Global, extra: Value) -> Value {
    let mut v = json!({
        "name": name,
        "space": space,
        "chain": chain,
        "literal_chains": g.literal_chains,
    });
    if let (Value::Object(dst), Value::Object(src)) = (&mut v, extra) {
        dst.extend(src);
    }
    v
}

fn build(args: &BuildArgs) -> Outcome {
    let s = if let Some(name) = &args.fixture {
        fixtures::by_name(name).ok_or_else(|| {
            Failure::Usage(format!(
                "unknown fixture `{name}`; expected one of {}",
                fixtures::NAMES.join(", ")
            ))
        })?
    } else {
        let (Some(path), Some(kind)) = (&args.dataset, args.kind) else {
            return Err(Failure::Usage("give --fixture or --dataset with --kind".into()));
        };
        let read = |p: &Path| {
            std::fs::read_to_string(p)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display())))
        };
        let text = read(path)?;
        match kind {
            Kind::Genealogy => {
                let d = ingest::GenealogyDataset::from_csv(text.as_bytes())?;
                let scope = if args.co_students {
                    AncestorScope::CoStudents
                } else {
                    AncestorScope::AdvisorDescendants
                };
                ingest::build_genealogy(&d, scope)?
            }
            Kind::Community => ingest::build_community(&ingest::CommunityDataset::from_json(&text)?)?,
            Kind::Table => {
                let preds = args
                    .predicates
                    .as_deref()
                    .ok_or_else(|| Failure::Usage("--kind table needs --predicates".into()))?;
                let d = ingest::PredicateTableDataset::from_csv_and_json(text.as_bytes(), &read(preds)?)?;
                ingest::build_table(&d, args.strictify)?
            }
        }
    };
    let s = if args.strictify && !s.is_strictly_typed().strict { s.strictify()? } else { s };
    Ok(Output::Raw(space_to_json(&s)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_map_to_exit_codes() {
        assert_eq!(Failure::from(Error::UnknownPoint("q".into())).code(), 3);
        assert_eq!(Failure::from(Error::Budget("x".into())).code(), 3);
        assert_eq!(Failure::from(Error::InvalidChain("x".into())).code(), 2);
        assert_eq!(Failure::from(Error::Format("x".into())).code(), 2);
        assert_eq!(Failure::from(Error::NotStrict("x".into())).code(), 1);
    }

    #[test]
    fn arguments_parse() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
        let cli = Cli::try_parse_from(["tts", "connect", "s.json", "--chain", "a ; b", "--set", "x,y"]).unwrap();
        let Command::Connect { set, .. } = cli.command else { panic!() };
        assert_eq!(set, Some(vec!["x".to_string(), "y".to_string()]));
        assert!(Cli::try_parse_from(["tts", "connect", "s.json", "--chain", "c", "--x", "a"]).is_err());
    }
}
