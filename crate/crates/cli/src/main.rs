// SPDX-License-Identifier: Apache-2.0

//! `quadrep`: decide representations by binary quadratic forms, inspect
//! class groups and do ideal arithmetic from the command line.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 invalid input,
//! 3 factorization failure.

mod cache;
mod envelope;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use quadrep::decompose::decompose_order_ideal;
use quadrep::{
    oracle_decide, ClassElem, ClassGroup, Decider, DiscContext, Error,
    ExampleId, Failure, OrderIdeal, QuadForm,
};
use serde::Serialize;
use serde_json::Value;

use cache::Cache;
use envelope::*;

#[derive(Parser, Debug)]
#[command(name = "quadrep", version, about = "Representations of integers by binary quadratic forms")]
#[command(allow_negative_numbers = true)]
struct Cli {
    /// Emit one JSON envelope on standard output.
    #[arg(long, global = true)]
    json: bool,

    /// Directory for cached class-group tables.
    #[arg(long, global = true, env = "QUADREP_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct FormArgs {
    #[arg(allow_negative_numbers = true)]
    a: i64,
    #[arg(allow_negative_numbers = true)]
    b: i64,
    #[arg(allow_negative_numbers = true)]
    c: i64,
}

impl FormArgs {
    fn form(&self) -> QuadForm {
        QuadForm::new(self.a, self.b, self.c)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce a form and print the transform taking it to its reduction.
    Reduce {
        #[command(flatten)]
        form: FormArgs,
    },
    /// List the reduced forms, inverses and multiplication table of C(D).
    #[command(allow_negative_numbers = true)]
    Classgroup {
        #[arg(allow_negative_numbers = true)]
        discriminant: i64,
    },
    /// Decide whether the form represents m.
    #[command(allow_negative_numbers = true)]
    Decide {
        #[command(flatten)]
        form: FormArgs,
        #[arg(allow_negative_numbers = true)]
        m: String,
        /// Print the witness and the chosen classes.
        #[arg(long)]
        certificate: bool,
        /// Print every step of the decision.
        #[arg(long)]
        explain: bool,
        /// Also run the exhaustive search and fail on disagreement.
        #[arg(long)]
        oracle_check: bool,
    },
    /// Ideal arithmetic on literals `D:num/den:a:b`.
    Ideal {
        #[command(subcommand)]
        op: IdealOp,
    },
    /// Image of a form class under C(D) -> C(D') for D = r^2 D'.
    #[command(allow_negative_numbers = true)]
    Pi {
        #[arg(allow_negative_numbers = true)]
        discriminant: i64,
        #[arg(allow_negative_numbers = true)]
        target: i64,
        #[command(flatten)]
        form: FormArgs,
    },
    /// Compare decision, closed-form criterion and exhaustive search for a
    /// worked example (1.1, 1.2, 1.3, 8.2, 8.5).
    Examples {
        id: String,
        #[arg(long, default_value_t = 1000)]
        max: u64,
    },
}

#[derive(Subcommand, Debug)]
enum IdealOp {
    Mul {
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
    },
    Norm {
        #[arg(allow_hyphen_values = true)]
        ideal: String,
    },
    Conj {
        #[arg(allow_hyphen_values = true)]
        ideal: String,
    },
    Inv {
        #[arg(allow_hyphen_values = true)]
        ideal: String,
    },
    /// Extend to the larger order of discriminant `target`.
    #[command(allow_negative_numbers = true)]
    Extend {
        #[arg(allow_hyphen_values = true)]
        ideal: String,
        #[arg(allow_negative_numbers = true)]
        target: i64,
    },
    /// Intersect with the smaller order of discriminant `target`.
    #[command(allow_negative_numbers = true)]
    Contract {
        #[arg(allow_hyphen_values = true)]
        ideal: String,
        #[arg(allow_negative_numbers = true)]
        target: i64,
    },
    Decompose {
        #[arg(allow_hyphen_values = true)]
        ideal: String,
    },
}

/// What a command produced: result payload, text lines and exit code.
struct Report {
    result: Value,
    text: Vec<String>,
    diagnostics: Vec<String>,
    exit: u8,
}

impl Report {
    fn ok(result: impl Serialize, text: Vec<String>) -> Report {
        Report { result: to_value(result), text, diagnostics: Vec::new(), exit: 0 }
    }
}

fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("payloads serialize")
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::FactorizationIncomplete(_) => 3,
        Error::Internal(_) => 1,
        _ => 2,
    }
}

/// Write to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    if text.is_empty() {
        return;
    }
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}").and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache = Cache::new(cli.cache_dir.clone());
    let mut notes = Vec::new();
    let (name, input, outcome) = run(&cli.command, &cache, &mut notes);
    for note in &notes {
        eprintln!("{note}");
    }
    let code = match outcome {
        Ok(report) => {
            if cli.json {
                let env = OutputEnvelope::new(name, input, Some(report.result), report.diagnostics);
                emit(&serde_json::to_string_pretty(&env).expect("envelope serializes"));
            } else {
                emit(&report.text.join("\n"));
                for d in &report.diagnostics {
                    eprintln!("{d}");
                }
            }
            report.exit
        }
        Err(e) => {
            let message = format!("error: {e}");
            eprintln!("{message}");
            if cli.json {
                let env = OutputEnvelope::<Value, Value>::new(name, input, None, vec![message]);
                emit(&serde_json::to_string_pretty(&env).expect("envelope serializes"));
            }
            exit_code(&e)
        }
    };
    ExitCode::from(code)
}

fn run(cmd: &Command, cache: &Cache, notes: &mut Vec<String>) -> (&'static str, Value, quadrep::Result<Report>) {
    match cmd {
        Command::Reduce { form } => {
            let f = form.form();
            ("reduce", to_value(FormInput { form: f.to_string() }), cmd_reduce(&f))
        }
        Command::Classgroup { discriminant } => (
            "classgroup",
            to_value(ClassGroupInput { discriminant: *discriminant }),
            cmd_classgroup(*discriminant, cache, notes),
        ),
        Command::Decide { form, m, certificate, explain, oracle_check } => {
            let f = form.form();
            let input = DecideInput {
                form: f.to_string(),
                m: m.clone(),
                certificate: *certificate,
                explain: *explain,
                oracle_check: *oracle_check,
            };
            ("decide", to_value(&input), cmd_decide(&f, &input, cache, notes))
        }
        Command::Ideal { op } => {
            let (operation, ideals, target) = match op {
                IdealOp::Mul { left, right } => ("mul", vec![left.clone(), right.clone()], None),
                IdealOp::Norm { ideal } => ("norm", vec![ideal.clone()], None),
                IdealOp::Conj { ideal } => ("conj", vec![ideal.clone()], None),
                IdealOp::Inv { ideal } => ("inv", vec![ideal.clone()], None),
                IdealOp::Extend { ideal, target } => ("extend", vec![ideal.clone()], Some(*target)),
                IdealOp::Contract { ideal, target } => ("contract", vec![ideal.clone()], Some(*target)),
                IdealOp::Decompose { ideal } => ("decompose", vec![ideal.clone()], None),
            };
            let input = IdealInput { operation: operation.into(), ideals, discriminant: target };
            ("ideal", to_value(&input), cmd_ideal(&input))
        }
        Command::Pi { discriminant, target, form } => {
            let f = form.form();
            let input = PiInput { discriminant: *discriminant, target: *target, form: f.to_string() };
            ("pi", to_value(&input), cmd_pi(&input, &f, cache, notes))
        }
        Command::Examples { id, max } => (
            "examples",
            to_value(ExamplesInput { id: id.clone(), max: *max }),
            cmd_examples(id, *max),
        ),
    }
}

fn cmd_reduce(form: &QuadForm) -> quadrep::Result<Report> {
    let (reduced, map) = form.reduce()?;
    let result = ReduceResult {
        reduced: reduced.to_string(),
        transform: map.to_string(),
        discriminant: form.discriminant().to_string(),
    };
    let text = vec![reduced.to_string(), format!("transform {map}")];
    Ok(Report::ok(result, text))
}

fn element_order(g: &ClassGroup, x: ClassElem) -> u64 {
    let mut n = 1;
    let mut acc = x;
    while acc != g.identity() {
        acc = g.mul(acc, x);
        n += 1;
    }
    n
}

fn cmd_classgroup(d: i64, cache: &Cache, notes: &mut Vec<String>) -> quadrep::Result<Report> {
    let g = cache.class_group(d, notes)?;
    let ctx = g.ctx();
    let classes: Vec<ClassEntry> = g
        .elements()
        .map(|x| ClassEntry {
            index: x.0,
            form: g.form(x).to_string(),
            inverse: g.inverse(x).0,
            order: element_order(&g, x),
        })
        .collect();
    let table = g.table();
    let mut text = vec![
        format!("D = {d} = {}^2 * {}", ctx.conductor(), ctx.d_k()),
        format!("h = {}", g.order()),
        format!("identity {}", g.form(g.identity())),
    ];
    for c in &classes {
        text.push(format!("{} {} inverse {} order {}", c.index, c.form, c.inverse, c.order));
    }
    text.push("table".into());
    for row in &table {
        text.push(row.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(" "));
    }
    let result = ClassGroupResult {
        discriminant: d,
        fundamental_discriminant: ctx.d_k(),
        conductor: ctx.conductor(),
        class_number: g.order(),
        identity: g.form(g.identity()).to_string(),
        classes,
        table,
    };
    Ok(Report::ok(result, text))
}

fn witness(w: &Option<(BigInt, BigInt)>) -> Option<Witness> {
    w.as_ref().map(|(x, y)| Witness { x: x.to_string(), y: y.to_string() })
}

fn failure_info(f: &Failure) -> FailureInfo {
    let (kind, prime, exponent) = match *f {
        Failure::NonPositive => ("NonPositive", None, None),
        Failure::OddInertExponent(q) => ("OddInertExponent", Some(q), None),
        Failure::ClassEquationUnsatisfiable => ("ClassEquationUnsatisfiable", None, None),
        Failure::ConductorPowerUnrepresentable(l, h) => ("ConductorPowerUnrepresentable", Some(l), Some(h)),
    };
    FailureInfo { kind: kind.into(), prime, exponent, message: f.to_string() }
}

fn cmd_decide(form: &QuadForm, input: &DecideInput, cache: &Cache, notes: &mut Vec<String>) -> quadrep::Result<Report> {
    form.validate()?;
    let m: BigInt = input
        .m
        .parse()
        .map_err(|_| Error::InvalidInput(format!("m = {:?} is not an integer", input.m)))?;
    let d = form.discriminant_i64()?;
    let decider = Decider::with_group(cache.class_group(d, notes)?);
    let g = decider.group().clone();
    let decision = decider.decide(form, &m)?;

    let mut text = Vec::new();
    match (&decision.witness, decision.verdict) {
        (Some((x, y)), true) if input.certificate => text.push(format!("YES (x,y)=({x},{y})")),
        (_, true) => text.push("YES".into()),
        (_, false) => text.push(format!(
            "NO: {}",
            decision.failure.as_ref().map(|f| f.to_string()).unwrap_or_default()
        )),
    }
    let class_witness = decision.class_witness.as_ref().map(|cw| {
        cw.iter()
            .map(|(w, x)| ClassWitnessEntry { factor: w.to_string(), class: g.form(*x).to_string() })
            .collect::<Vec<_>>()
    });
    if input.certificate {
        for e in class_witness.iter().flatten() {
            text.push(format!("class {} represents {}", e.class, e.factor));
        }
    }
    if input.explain {
        text.extend(decision.trace.iter().map(|t| format!("  {t}")));
    }

    let mut exit = 0;
    let mut diagnostics = Vec::new();
    let oracle = input.oracle_check.then(|| {
        let found = oracle_decide(form, &m);
        let agrees = found.is_some() == decision.verdict;
        if agrees {
            text.push("oracle: agrees".into());
        } else {
            text.push(format!("oracle: MISMATCH, exhaustive search says {}", found.is_some()));
            diagnostics.push("decision disagrees with exhaustive search".into());
            exit = 1;
        }
        OracleCheck { agrees, witness: witness(&found) }
    });

    let result = DecideResult {
        verdict: decision.verdict,
        witness: witness(&decision.witness),
        class_witness,
        failure: decision.failure.as_ref().map(failure_info),
        trace: input.explain.then(|| decision.trace.clone()),
        oracle,
    };
    Ok(Report { result: to_value(result), text, diagnostics, exit })
}

fn parse_ideal(s: &str) -> quadrep::Result<OrderIdeal> {
    s.parse()
}

fn ideal_result(ideal: OrderIdeal) -> IdealResult {
    IdealResult {
        norm: ideal.norm().to_string(),
        proper: ideal.is_proper(),
        ideal: Some(ideal.to_string()),
        prime_to_relative_conductor: None,
        decomposition: None,
    }
}

fn cmd_ideal(input: &IdealInput) -> quadrep::Result<Report> {
    let a = parse_ideal(&input.ideals[0])?;
    let target = || -> quadrep::Result<Arc<DiscContext>> {
        DiscContext::new(input.discriminant.expect("target given for extend and contract"))
    };
    let result = match input.operation.as_str() {
        "mul" => ideal_result(a.mul(&parse_ideal(&input.ideals[1])?)?),
        "norm" => IdealResult { ideal: None, ..ideal_result(a) },
        "conj" => ideal_result(a.conj()),
        "inv" => ideal_result(a.inv()?),
        "extend" => {
            let t = target()?;
            let r = quadrep::orders::relative_conductor(a.ctx(), &t)?;
            IdealResult { prime_to_relative_conductor: Some(a.is_prime_to(r)), ..ideal_result(a.extend(&t)?) }
        }
        "contract" => {
            let c = a.contract(&target()?)?;
            IdealResult { prime_to_relative_conductor: Some(c.prime_to_relative_conductor), ..ideal_result(c.ideal) }
        }
        "decompose" => {
            let dec = decompose_order_ideal(&a)?;
            let decomposition = Decomposition {
                primes: dec
                    .split_ramified
                    .iter()
                    .map(|(p, e)| PrimePart { ideal: p.to_string(), exponent: *e })
                    .collect(),
                inert: dec.inert.iter().map(|&(q, k)| InertPart { prime: q, exponent: k }).collect(),
                conductor_parts: dec
                    .conductor_parts
                    .iter()
                    .map(|(l, c)| ConductorPart { prime: *l, ideal: c.to_string(), norm: c.norm().to_string() })
                    .collect(),
            };
            IdealResult { ideal: None, decomposition: Some(decomposition), ..ideal_result(a) }
        }
        other => return Err(Error::InvalidInput(format!("unknown ideal operation {other}"))),
    };
    let mut text = Vec::new();
    match (&result.ideal, &result.decomposition) {
        (_, Some(dec)) => {
            for p in &dec.primes {
                text.push(format!("prime {} ^ {}", p.ideal, p.exponent));
            }
            for q in &dec.inert {
                text.push(format!("inert ({}) ^ {}", q.prime, q.exponent));
            }
            for c in &dec.conductor_parts {
                text.push(format!("conductor {} {} norm {}", c.prime, c.ideal, c.norm));
            }
            if text.is_empty() {
                text.push("unit".into());
            }
        }
        (Some(ideal), None) => {
            text.push(ideal.clone());
            text.push(format!("norm {}", result.norm));
            if !result.proper {
                text.push("not proper".into());
            }
            if result.prime_to_relative_conductor == Some(false) {
                text.push("not prime to the relative conductor".into());
            }
        }
        (None, None) => text.push(result.norm.clone()),
    }
    Ok(Report::ok(result, text))
}

fn cmd_pi(input: &PiInput, form: &QuadForm, cache: &Cache, notes: &mut Vec<String>) -> quadrep::Result<Report> {
    let g = cache.class_group(input.discriminant, notes)?;
    let t = cache.class_group(input.target, notes)?;
    let r = quadrep::orders::relative_conductor(g.ctx(), t.ctx())?;
    let image = g.surjection_pi(g.element_of(form)?, &t)?;
    let result = PiResult { image: t.form(image).to_string(), relative_conductor: r };
    let text = vec![result.image.clone()];
    Ok(Report::ok(result, text))
}

fn cmd_examples(id: &str, max: u64) -> quadrep::Result<Report> {
    let example: ExampleId = id.parse()?;
    if max == 0 {
        return Err(Error::InvalidInput("--max must be positive".into()));
    }
    let report = quadrep::verify_example(example, max)?;
    let disagreements: Vec<DisagreementEntry> = report
        .disagreements
        .iter()
        .map(|d| DisagreementEntry { m: d.m, decide: d.decide, predicate: d.predicate, oracle: d.oracle })
        .collect();
    let agreed = max - disagreements.len() as u64;
    let mut text = vec![
        format!("{} {agreed}/{max}", if report.passed() { "OK" } else { "MISMATCH" }),
        format!("form {}", report.form),
        format!("represented {}", report.represented),
    ];
    for d in &disagreements {
        text.push(format!("m={} decide={} predicate={} oracle={}", d.m, d.decide, d.predicate, d.oracle));
    }
    let result = ExamplesResult {
        id: example.to_string(),
        form: report.form.to_string(),
        checked: max,
        represented: report.represented,
        ok: report.passed(),
        disagreements,
    };
    let exit = if result.ok { 0 } else { 1 };
    Ok(Report { result: to_value(result), text, diagnostics: Vec::new(), exit })
}
