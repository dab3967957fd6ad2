mod input;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fgroup::cogen::{self, CheckOutcome, CogenCertificate, ObstructionReport};
use fgroup::construct::Limits;
use fgroup::dynamics::{self, DEFAULT_ITERATION_CAP};
use fgroup::eqrel::{EqrelConfig, EquivRelation};
use fgroup::sample::Sampler;
use fgroup::{Element, Error};
use serde_json::json;

/// Exact computations in Thompson's group F.
#[derive(Parser, Debug)]
#[command(name = "fgroup", version)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Bound on iterations when pushing intervals along an orbital.
    #[arg(long, env = "FGROUP_ITER_CAP", default_value_t = DEFAULT_ITERATION_CAP, global = true,
          value_parser = clap::value_parser!(u64).range(1..))]
    iter_cap: u64,

    /// Seed for randomized commands.
    #[arg(long, default_value_t = 1, global = true)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the abelian image (c,d): log2 of the slopes at 0 and at 1.
    Pi { element: String },
    /// List the orbitals with their directions.
    Orbitals { element: String },
    /// Construct a conjugate co-generating every element of a set.
    Cogen(CogenArgs),
    /// Query the relation on binary words induced by a set of generators.
    Eqrel(EqrelArgs),
    /// Print random products of x0, x1 and their inverses.
    Sample {
        #[arg(long, default_value_t = 6)]
        len: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
}

#[derive(Args, Debug)]
struct Budget {
    /// Longest product of generators in the ball.
    #[arg(long = "L", default_value_t = 4)]
    word_budget: usize,
    /// Longest binary word in the relation.
    #[arg(long = "D", default_value_t = 6)]
    depth_bound: usize,
    /// Use only the descendant and coherence rules.
    #[arg(long)]
    no_accelerators: bool,
}

impl Budget {
    fn config(&self) -> EqrelConfig {
        EqrelConfig {
            word_budget: self.word_budget,
            depth_bound: self.depth_bound,
            accelerators: !self.no_accelerators,
            ..EqrelConfig::default()
        }
    }
}

#[derive(Args, Debug)]
struct CogenArgs {
    /// Elements separated by `;`.
    #[arg(long)]
    set: String,
    /// Conjugate this element instead of searching for one.
    #[arg(long)]
    g: Option<String>,
    /// Check each pair (f_i, g^σ) for collapse of the inner words up to this length.
    #[arg(long)]
    verify_depth: Option<usize>,
    #[command(flatten)]
    budget: Budget,
}

#[derive(Args, Debug)]
#[group(id = "question", required = true, multiple = false, args = ["query", "collapsed"])]
struct EqrelArgs {
    /// Generators separated by `;`.
    #[arg(long)]
    gens: String,
    #[arg(long, num_args = 2, value_names = ["U", "V"])]
    query: Option<Vec<String>>,
    #[arg(long, value_name = "d")]
    collapsed: Option<usize>,
    /// Also print the classes and the provenance log.
    #[arg(long)]
    dump: bool,
    #[command(flatten)]
    budget: Budget,
}

const EXIT_OBSTRUCTED: u8 = 2;
const EXIT_BUDGET: u8 = 3;

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Usage(s)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Budget(_) | Error::IterationCapExceeded { .. } => EXIT_BUDGET,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Pi { element } => {
            let p = input::element(element)?.abelianization();
            if json {
                println!("{}", json!({ "c": p.c, "d": p.d }));
            } else {
                println!("{p}");
            }
            Ok(0)
        }
        Command::Orbitals { element } => {
            let orbs = dynamics::orbitals(&input::element(element)?);
            if json {
                println!(
                    "{}",
                    serde_json::to_string(&orbs).expect("orbitals serialize")
                );
            } else {
                for o in &orbs {
                    println!("{o}");
                }
            }
            Ok(0)
        }
        Command::Cogen(args) => cogen_command(cli, args),
        Command::Eqrel(args) => eqrel_command(cli, args),
        Command::Sample { len, count } => {
            let mut s = Sampler::new(cli.seed);
            let elements: Vec<Element> = (0..*count).map(|_| s.element(*len)).collect();
            if json {
                println!(
                    "{}",
                    serde_json::to_string(&elements).expect("elements serialize")
                );
            } else {
                for e in &elements {
                    println!("{e}");
                }
            }
            Ok(0)
        }
    }
}

struct PairVerdict {
    collapsed: bool,
    inner_classes: usize,
}

/// Collapse checks for every pair `(f_i, h)`, one thread per pair, in input order.
fn verify_pairs(
    s: &[Element],
    h: &Element,
    depth: usize,
    config: EqrelConfig,
) -> Result<Vec<PairVerdict>, Error> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = s
            .iter()
            .map(|f| {
                scope.spawn(move || {
                    let mut rel = EquivRelation::from_generators(&[f.clone(), h.clone()], config)?;
                    Ok(PairVerdict {
                        collapsed: rel.inner_collapsed(depth)?,
                        inner_classes: rel.inner_class_count(depth),
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verification thread panicked"))
            .collect()
    })
}

fn cogen_command(cli: &Cli, args: &CogenArgs) -> Result<u8, Failure> {
    let json = cli.format == Format::Json;
    let s = input::set(&args.set)?;
    let limits = Limits {
        iteration_cap: cli.iter_cap,
        ..Limits::default()
    };

    let (report, outcome) = match &args.g {
        Some(g) => {
            let g = input::element(g)?;
            let report = cogen::analyze_obstruction(&s, &g)?;
            (Some(report), cogen::cogenerator_conjugate(&s, &g, &limits))
        }
        None => (
            None,
            cogen::find_cogenerator(&s, &limits).map(|(_, cert)| cert),
        ),
    };
    let cert = match outcome {
        Ok(cert) => cert,
        Err(Error::Obstructed(reason)) => {
            print_obstructed(json, &reason, report.as_ref());
            return Ok(EXIT_OBSTRUCTED);
        }
        Err(e) => return Err(e.into()),
    };

    let checks = cert.verify(&s);
    let pairs = match args.verify_depth {
        Some(d) => Some(verify_pairs(&s, &cert.conjugated, d, args.budget.config())?),
        None => None,
    };
    if json {
        let pairs: Option<Vec<_>> = pairs.as_ref().map(|ps| {
            ps.iter()
                .enumerate()
                .map(|(i, p)| json!({ "member": i + 1, "collapsed": p.collapsed, "inner_classes": p.inner_classes }))
                .collect()
        });
        let out = json!({
            "status": "certificate",
            "certificate": cert,
            "pi": cert.conjugated.abelianization(),
            "checks": checks,
            "valid": checks.iter().all(|c| c.passed),
            "verification": pairs,
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&out).expect("certificate serializes")
        );
    } else {
        print_certificate(&cert, &checks);
        if let Some(ps) = &pairs {
            for (i, p) in ps.iter().enumerate() {
                let verdict = if p.collapsed {
                    "yes".to_string()
                } else {
                    format!("no, {} inner classes (inconclusive)", p.inner_classes)
                };
                println!("pair (f{}, g^σ): collapsed: {verdict}", i + 1);
            }
        }
    }
    if checks.iter().all(|c| c.passed) {
        Ok(0)
    } else {
        Err(Error::Internal("the certificate failed its own checks".into()).into())
    }
}

fn print_obstructed(json: bool, reason: &str, report: Option<&ObstructionReport>) {
    if json {
        println!(
            "{}",
            json!({ "status": "obstructed", "reason": reason, "report": report })
        );
    } else {
        println!("OBSTRUCTED: {reason}");
    }
}

fn print_certificate(cert: &CogenCertificate, checks: &[CheckOutcome]) {
    println!("construction: {}", cert.construction);
    println!("g = {}", cert.g);
    println!("σ = {}", cert.sigma);
    println!("g^σ = {}", cert.conjugated);
    println!("π(g^σ) = {}", cert.conjugated.abelianization());
    if cert.frame.mirrored || cert.frame.inverted {
        println!(
            "frame: mirrored={} inverted={}",
            cert.frame.mirrored, cert.frame.inverted
        );
    }
    if !cert.chain.is_empty() {
        let chain: Vec<String> = cert.chain.iter().map(ToString::to_string).collect();
        println!("chain: {}", chain.join(" -> "));
    }
    println!("checks:");
    for c in checks {
        let mark = if c.passed { "ok" } else { "FAILED" };
        match c.member {
            Some(i) => println!("  [{mark}] f{}: {}", i + 1, c.description),
            None => println!("  [{mark}] {}", c.description),
        }
    }
}

fn eqrel_command(cli: &Cli, args: &EqrelArgs) -> Result<u8, Failure> {
    let json = cli.format == Format::Json;
    let gens = input::set(&args.gens)?;
    let mut rel = EquivRelation::from_generators(&gens, args.budget.config())?;
    let mut out = serde_json::Map::new();
    if let Some(q) = &args.query {
        let (u, v) = (input::word(&q[0])?, input::word(&q[1])?);
        let same = rel.same_class(&u, &v)?;
        if json {
            out.insert("equivalent".into(), same.into());
        } else {
            println!(
                "{}",
                if same {
                    "equivalent"
                } else {
                    "not equivalent at this budget (inconclusive)"
                }
            );
        }
    }
    if let Some(d) = args.collapsed {
        let collapsed = rel.inner_collapsed(d)?;
        if json {
            out.insert("collapsed".into(), collapsed.into());
            out.insert("inner_classes".into(), rel.inner_class_count(d).into());
        } else if collapsed {
            println!("collapsed (evidence for [F,F] ≤ Cl(H))");
        } else {
            println!("not collapsed at this budget (inconclusive)");
        }
    }
    if args.dump {
        let dump = rel.dump();
        if json {
            out.insert(
                "relation".into(),
                serde_json::to_value(&dump).expect("dump serializes"),
            );
        } else {
            for class in &dump.classes {
                let words: Vec<String> = class.iter().map(ToString::to_string).collect();
                println!("class: {}", words.join(" "));
            }
            for line in &dump.log {
                println!("{line}");
            }
        }
    }
    if json {
        println!("{}", serde_json::Value::Object(out));
    }
    Ok(0)
}
