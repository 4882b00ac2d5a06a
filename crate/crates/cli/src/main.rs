//! Command-line front end: exact root-system, multiplet, spinor, Dirac
//! kernel, and index computations with machine-readable reports.
//!
//! Exit status: 0 on success, 1 when a verification command finds a
//! counterexample, 2 on usage errors.

mod report;

use clap::{Args, Parser, Subcommand};
use gkrs::characters::{
    decompose_h, enumerate_dominant, enumerate_h_dominant, irrep_character, spinor_character,
    weyl_dim, weyl_dim_h, SpinPart,
};
use gkrs::chevalley::chevalley_basis;
use gkrs::cliffordspin::{build_spin_module, cubic_element, SpinModule};
use gkrs::diracop::build_dirac;
use gkrs::indexcalc::{harmonic_spinors, index_crosscheck, twisted_index, IndexResult};
use gkrs::matrix::QMatrix;
use gkrs::multiplet::{multiplet, verify_gkrs};
use gkrs::ratio::{format_rat, parse_rat, Rat};
use gkrs::rootsystem::{build_root_system, LieType, RootDatum, Weight};
use gkrs::subpair::{borel_de_siebenthal, build_subpair, EqualRankPair, HSpec};
use gkrs::weylgroup::{enumerate, WeylElement};
use report::{
    rat_value, sign_text, weight_text, weight_value, weights_value, word_value, Obj, Report,
};
use serde_json::{json, Value};
use std::process::ExitCode;

const DEFAULT_DIM_CAP: usize = 200;
const DIM_CAP_ENV: &str = "GKRS_DIM_CAP";

#[derive(Parser)]
#[command(
    name = "gkrs",
    version,
    about = "Exact multiplets, cubic Dirac kernels, and equivariant indices for equal-rank pairs"
)]
struct Cli {
    /// Output format: text or json.
    #[arg(long, global = true, default_value = "text", value_parser = ["text", "json"])]
    output: String,
    /// Cap on dim V or dim(V (x) S) for explicit matrix work
    /// (overrides the GKRS_DIM_CAP environment variable; default 200).
    #[arg(long, global = true)]
    dim_cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TypeArg {
    /// Lie type, e.g. G2 or A1xA1.
    #[arg(long = "type")]
    lie_type: String,
}

#[derive(Args)]
struct PairArgs {
    /// Lie type, e.g. G2 or A1xA1.
    #[arg(long = "type")]
    lie_type: String,
    /// Subalgebra spec: cartan | bds:<node> | roots:[i1,i2,...].
    #[arg(long = "h")]
    h_spec: String,
}

#[derive(Subcommand)]
enum Command {
    /// Root datum: Cartan matrix, positive roots, invariant form, rho.
    Roots {
        #[command(flatten)]
        ty: TypeArg,
    },
    /// Weyl group enumeration; optionally apply a word to a weight.
    Weyl {
        #[command(flatten)]
        ty: TypeArg,
        /// Comma-separated simple-reflection indices (0-based), applied to
        /// --on right to left.
        #[arg(long)]
        act: Option<String>,
        /// Weight coordinates the word acts on.
        #[arg(long)]
        on: Option<String>,
    },
    /// Maximal equal-rank subalgebras of a simple type.
    Subpairs {
        #[command(flatten)]
        ty: TypeArg,
    },
    /// Weight multiplicities of an irreducible module.
    Character {
        #[command(flatten)]
        ty: TypeArg,
        #[arg(long)]
        lambda: String,
    },
    /// Branching of an irreducible module to the subalgebra.
    Branch {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        lambda: String,
    },
    /// The spin module of the complement and the cubic element.
    Spin {
        #[command(flatten)]
        pair: PairArgs,
        /// Include raw action matrices in the report.
        #[arg(long)]
        dump_matrices: bool,
    },
    /// The signed multiplet attached to a dominant weight.
    Multiplet {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        lambda: String,
    },
    /// Invert the shifted action on a single subalgebra weight.
    Inverse {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        mu: String,
    },
    /// Assemble the Dirac operator and report its exact kernel.
    Kernel {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        lambda: String,
        /// Include the operator matrix and kernel basis in the report.
        #[arg(long)]
        dump_matrices: bool,
    },
    /// Equivariant index of the operator twisted by a subalgebra weight.
    Index {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        mu: String,
        /// Also run the independent block-sum route and compare.
        #[arg(long)]
        crosscheck: bool,
    },
    /// Materialize and certify the space of harmonic spinors for a twist.
    Harmonic {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        mu: String,
    },
    /// Verify an identity over a sweep; nonzero exit on any counterexample.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Classify every subalgebra-dominant weight in a norm ball.
    Sweep {
        #[command(flatten)]
        pair: PairArgs,
        /// Bound on |mu + rho_h|^2 (rational, e.g. 12 or 25/2).
        #[arg(long)]
        max_norm: String,
        #[arg(long)]
        crosscheck: bool,
    },
}

#[derive(Subcommand)]
enum VerifyTarget {
    /// The multiplet identity in the representation ring, swept over all
    /// dominant weights with |lambda + rho_g|^2 bounded.
    Gkrs {
        #[command(flatten)]
        pair: PairArgs,
        /// Bound on |lambda + rho_g|^2 (rational).
        #[arg(long)]
        max_norm: String,
    },
}

struct UsageError(String);

type CmdResult = Result<Report, UsageError>;

impl From<gkrs::Error> for UsageError {
    fn from(e: gkrs::Error) -> Self {
        UsageError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(2);
        }
    };
    let json_output = cli.output == "json";
    let cap = cli
        .dim_cap
        .or_else(|| std::env::var(DIM_CAP_ENV).ok().and_then(|v| v.parse().ok()))
        .unwrap_or(DEFAULT_DIM_CAP);
    match run(cli.command, cap) {
        Ok(report) => {
            print!("{}", report.render(json_output));
            if report.verified == Some(false) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            eprintln!(
                "usage: --type <A|B|C|D|E|F|G><rank>[x...], --h cartan|bds:<node>|roots:[i,...], weights as comma-separated rationals"
            );
            ExitCode::from(2)
        }
    }
}

fn parse_type(s: &str) -> Result<RootDatum, UsageError> {
    Ok(build_root_system(&LieType::parse(s)?)?)
}

fn parse_pair(args: &PairArgs) -> Result<EqualRankPair, UsageError> {
    let d = parse_type(&args.lie_type)?;
    Ok(build_subpair(&d, &HSpec::parse(&args.h_spec)?)?)
}

fn parse_weight(s: &str, rank: usize) -> Result<Weight, UsageError> {
    let coords: Option<Vec<Rat>> = s.split(',').map(|p| parse_rat(p.trim())).collect();
    let coords = coords.ok_or_else(|| UsageError(format!("cannot parse weight '{s}'")))?;
    if coords.len() != rank {
        return Err(UsageError(format!(
            "weight '{s}' has {} coordinates, expected {rank}",
            coords.len()
        )));
    }
    Ok(Weight(coords))
}

fn parse_norm(s: &str) -> Result<Rat, UsageError> {
    parse_rat(s).ok_or_else(|| UsageError(format!("cannot parse norm bound '{s}'")))
}

fn run(cmd: Command, cap: usize) -> CmdResult {
    match cmd {
        Command::Roots { ty } => cmd_roots(&ty.lie_type),
        Command::Weyl { ty, act, on } => cmd_weyl(&ty.lie_type, act.as_deref(), on.as_deref()),
        Command::Subpairs { ty } => cmd_subpairs(&ty.lie_type),
        Command::Character { ty, lambda } => cmd_character(&ty.lie_type, &lambda),
        Command::Branch { pair, lambda } => cmd_branch(&pair, &lambda),
        Command::Spin {
            pair,
            dump_matrices,
        } => cmd_spin(&pair, dump_matrices),
        Command::Multiplet { pair, lambda } => cmd_multiplet(&pair, &lambda),
        Command::Inverse { pair, mu } => cmd_inverse(&pair, &mu),
        Command::Kernel {
            pair,
            lambda,
            dump_matrices,
        } => cmd_kernel(&pair, &lambda, dump_matrices, cap),
        Command::Index {
            pair,
            mu,
            crosscheck,
        } => cmd_index(&pair, &mu, crosscheck),
        Command::Harmonic { pair, mu } => cmd_harmonic(&pair, &mu, cap),
        Command::Verify {
            target: VerifyTarget::Gkrs { pair, max_norm },
        } => cmd_verify_gkrs(&pair, &max_norm),
        Command::Sweep {
            pair,
            max_norm,
            crosscheck,
        } => cmd_sweep(&pair, &max_norm, crosscheck),
    }
}

fn matrix_value(m: &QMatrix) -> Value {
    Value::Array(
        (0..m.rows)
            .map(|i| Value::Array((0..m.cols).map(|j| rat_value(m.get(i, j))).collect()))
            .collect(),
    )
}

fn index_outcome_value(r: &IndexResult) -> Value {
    match &r.outcome {
        None => json!({ "kind": "zero" }),
        Some((sign, lambda)) => {
            let mut o = serde_json::Map::new();
            o.insert("kind".into(), json!("module"));
            o.insert("sign".into(), json!(sign));
            o.insert("lambda".into(), weight_value(lambda));
            Value::Object(o)
        }
    }
}

fn cmd_roots(t: &str) -> CmdResult {
    let d = parse_type(t)?;
    let json = Obj::new("roots")
        .field("type", json!(d.lie_type.to_string()))
        .field("rank", json!(d.rank))
        .field(
            "cartan",
            Value::Array(
                d.cartan
                    .iter()
                    .map(|row| Value::Array(row.iter().map(|&x| json!(x)).collect()))
                    .collect(),
            ),
        )
        .field(
            "simple_norms",
            Value::Array(d.simple_norms.iter().map(rat_value).collect()),
        )
        .field("positive_roots", weights_value(&d.positive_roots))
        .field("rho", weight_value(&d.rho()))
        .field(
            "form",
            Value::Array(
                d.form
                    .iter()
                    .map(|row| Value::Array(row.iter().map(rat_value).collect()))
                    .collect(),
            ),
        )
        .build();
    let mut text = vec![
        format!("type {}  rank {}", d.lie_type, d.rank),
        format!("positive roots ({}):", d.positive_roots.len()),
    ];
    for (i, r) in d.positive_roots.iter().enumerate() {
        text.push(format!(
            "  [{i}] {}  |.|^2 = {}",
            weight_text(r),
            format_rat(&d.norm_sq(r))
        ));
    }
    text.push(format!("rho = {}", weight_text(&d.rho())));
    Ok(Report::new(json, text))
}

fn cmd_weyl(t: &str, act: Option<&str>, on: Option<&str>) -> CmdResult {
    let d = parse_type(t)?;
    let group = enumerate(&d);
    let mut obj = Obj::new("weyl")
        .field("type", json!(d.lie_type.to_string()))
        .field("order", json!(group.order()))
        .field(
            "elements",
            Value::Array(
                group
                    .elements
                    .iter()
                    .map(|w| {
                        let mut e = serde_json::Map::new();
                        e.insert("word".into(), word_value(&w.word));
                        e.insert("sign".into(), json!(w.sign()));
                        Value::Object(e)
                    })
                    .collect(),
            ),
        );
    let mut text = vec![format!("type {}  |W| = {}", d.lie_type, group.order())];
    match (act, on) {
        (Some(word), Some(weight)) => {
            let x = parse_weight(weight, d.rank)?;
            let mut w = WeylElement::identity(d.rank);
            if !word.trim().is_empty() {
                for part in word.split(',') {
                    let i: usize = part
                        .trim()
                        .parse()
                        .map_err(|_| UsageError(format!("bad word '{word}'")))?;
                    if i >= d.rank {
                        return Err(UsageError(format!("generator {i} out of range")));
                    }
                    let s = WeylElement {
                        word: vec![i],
                        matrix: gkrs::weylgroup::simple_reflection_matrix(&d, i),
                    };
                    w = w.compose(&s);
                }
            }
            let result = w.act_checked(&x)?;
            let mut a = serde_json::Map::new();
            a.insert("word".into(), word_value(&w.word));
            a.insert("on".into(), weight_value(&x));
            a.insert("result".into(), weight_value(&result));
            obj = obj.field("action", Value::Object(a));
            text.push(format!(
                "word [{}] acting on {} = {}",
                w.word
                    .iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                weight_text(&x),
                weight_text(&result)
            ));
        }
        (None, None) => {}
        _ => return Err(UsageError("--act and --on must be given together".into())),
    }
    Ok(Report::new(obj.build(), text))
}

fn cmd_subpairs(t: &str) -> CmdResult {
    let d = parse_type(t)?;
    let specs = borel_de_siebenthal(&d)?;
    let mut arr = Vec::new();
    let mut text = vec![format!("maximal equal-rank subalgebras of {}:", d.lie_type)];
    for spec in &specs {
        let p = build_subpair(&d, spec)?;
        let mut e = serde_json::Map::new();
        e.insert("h_spec".into(), json!(spec.to_string()));
        e.insert("h_simple".into(), weights_value(&p.h_simple));
        e.insert("h_positive_count".into(), json!(p.h_positive.len()));
        e.insert("rho_h".into(), weight_value(&p.rho_h));
        e.insert("p_root_count".into(), json!(p.p_roots.len()));
        e.insert("h_weyl_order".into(), json!(p.h_weyl_order));
        e.insert("coset_count".into(), json!(p.cosets.len()));
        arr.push(Value::Object(e));
        text.push(format!(
            "  {}: |Delta+(h)| = {}, |Delta(p)| = {}, |W_h| = {}, |C| = {}",
            spec,
            p.h_positive.len(),
            p.p_roots.len(),
            p.h_weyl_order,
            p.cosets.len()
        ));
    }
    let json = Obj::new("subpairs")
        .field("type", json!(d.lie_type.to_string()))
        .field("subpairs", Value::Array(arr))
        .build();
    Ok(Report::new(json, text))
}

fn cmd_character(t: &str, lambda: &str) -> CmdResult {
    let d = parse_type(t)?;
    let lam = parse_weight(lambda, d.rank)?;
    let ch = irrep_character(&d, &lam)?;
    let dim = weyl_dim(&d, &lam)?;
    let terms: Vec<Value> = ch
        .iter()
        .map(|(w, m)| {
            let mut e = serde_json::Map::new();
            e.insert("weight".into(), weight_value(w));
            e.insert("multiplicity".into(), json!(m));
            Value::Object(e)
        })
        .collect();
    let json = Obj::new("character")
        .field("type", json!(d.lie_type.to_string()))
        .field("lambda", weight_value(&lam))
        .field("dimension", json!(dim))
        .field("terms", Value::Array(terms))
        .build();
    let mut text = vec![format!(
        "character of lambda = {} on {}: dimension {dim}",
        weight_text(&lam),
        d.lie_type
    )];
    for (w, m) in ch.iter() {
        text.push(format!("  {}  x{m}", weight_text(w)));
    }
    Ok(Report::new(json, text))
}

fn cmd_branch(args: &PairArgs, lambda: &str) -> CmdResult {
    let pair = parse_pair(args)?;
    let lam = parse_weight(lambda, pair.g.rank)?;
    let ch = irrep_character(&pair.g, &lam)?;
    let dec = decompose_h(&pair, &ch)?;
    let summands: Vec<Value> = dec
        .iter()
        .map(|(mu, m)| {
            let mut e = serde_json::Map::new();
            e.insert("weight".into(), weight_value(mu));
            e.insert("multiplicity".into(), json!(m));
            e.insert(
                "h_dimension".into(),
                json!(weyl_dim_h(&pair, mu).unwrap_or(0)),
            );
            Value::Object(e)
        })
        .collect();
    let json = Obj::new("branch")
        .field("type", json!(pair.g.lie_type.to_string()))
        .field("h_spec", json!(args.h_spec.clone()))
        .field("lambda", weight_value(&lam))
        .field("summands", Value::Array(summands))
        .build();
    let mut text = vec![format!(
        "branching of lambda = {} under h = {}:",
        weight_text(&lam),
        args.h_spec
    )];
    for (mu, m) in &dec {
        text.push(format!(
            "  {} x{m}  (dim {})",
            weight_text(mu),
            weyl_dim_h(&pair, mu).unwrap_or(0)
        ));
    }
    Ok(Report::new(json, text))
}

fn spin_gen_value(spin: &SpinModule, d: &RootDatum, flat: usize) -> Value {
    let root = &d.positive_roots[spin.p_indices[flat / 2]];
    let kind = if flat % 2 == 0 { "e" } else { "f" };
    let mut e = serde_json::Map::new();
    e.insert("gen".into(), json!(kind));
    e.insert("root".into(), weight_value(root));
    Value::Object(e)
}

fn cmd_spin(args: &PairArgs, dump: bool) -> CmdResult {
    let pair = parse_pair(args)?;
    let cb = chevalley_basis(&pair.g)?;
    let spin = build_spin_module(&pair, &cb)?;
    let v = cubic_element(&cb, &spin);
    let plus = spinor_character(&pair, SpinPart::Plus);
    let minus = spinor_character(&pair, SpinPart::Minus);
    let cubic_terms: Vec<Value> = v
        .terms()
        .map(|(mono, coeff)| {
            let mut e = serde_json::Map::new();
            e.insert(
                "monomial".into(),
                Value::Array(
                    mono.iter()
                        .map(|&g| spin_gen_value(&spin, &pair.g, g))
                        .collect(),
                ),
            );
            e.insert("coefficient".into(), rat_value(coeff));
            Value::Object(e)
        })
        .collect();
    let expand = |ch: &gkrs::characters::FormalCharacter| -> Value {
        let mut out = Vec::new();
        for (w, m) in ch.iter() {
            for _ in 0..*m {
                out.push(weight_value(w));
            }
        }
        Value::Array(out)
    };
    let mut obj = Obj::new("spin")
        .field("type", json!(pair.g.lie_type.to_string()))
        .field("h_spec", json!(args.h_spec.clone()))
        .field("dim_s", json!(spin.dim))
        .field("plus_weights", expand(&plus))
        .field("minus_weights", expand(&minus))
        .field("cubic_element", Value::Array(cubic_terms));
    if dump {
        let gammas: Vec<Value> = (0..spin.p_basis_len())
            .map(|flat| {
                let mut e = serde_json::Map::new();
                e.insert("generator".into(), spin_gen_value(&spin, &pair.g, flat));
                e.insert(
                    "matrix".into(),
                    matrix_value(&spin.gamma[&spin.generator(flat)]),
                );
                Value::Object(e)
            })
            .collect();
        obj = obj.field("gamma_matrices", Value::Array(gammas));
    }
    let mut text = vec![format!(
        "spin module for {} / {}: dim S = {}, dim S+ = {}, dim S- = {}",
        pair.g.lie_type,
        args.h_spec,
        spin.dim,
        plus.total(),
        minus.total()
    )];
    text.push(format!("cubic element: {} monomial(s)", v.len()));
    Ok(Report::new(obj.build(), text))
}

fn cmd_multiplet(args: &PairArgs, lambda: &str) -> CmdResult {
    let pair = parse_pair(args)?;
    let lam = parse_weight(lambda, pair.g.rank)?;
    let entries = multiplet(&pair, &lam)?;
    let arr: Vec<Value> = entries
        .iter()
        .map(|e| {
            let mut o = serde_json::Map::new();
            o.insert("word".into(), word_value(&e.element.word));
            o.insert("sign".into(), json!(e.sign));
            o.insert("mu".into(), weight_value(&e.mu));
            o.insert(
                "h_dimension".into(),
                json!(weyl_dim_h(&pair, &e.mu).unwrap_or(0)),
            );
            Value::Object(o)
        })
        .collect();
    let json = Obj::new("multiplet")
        .field("type", json!(pair.g.lie_type.to_string()))
        .field("h_spec", json!(args.h_spec.clone()))
        .field("lambda", weight_value(&lam))
        .field("entries", Value::Array(arr))
        .build();
    let mut text = vec![format!(
        "multiplet of lambda = {} for {} / {}:",
        weight_text(&lam),
        pair.g.lie_type,
        args.h_spec
    )];
    for e in &entries {
        text.push(format!(
            "  {} {}  (dim {})",
            sign_text(e.sign),
            weight_text(&e.mu),
            weyl_dim_h(&pair, &e.mu).unwrap_or(0)
        ));
    }
    Ok(Report::new(json, text))
}

fn cmd_inverse(args: &PairArgs, mu: &str) -> CmdResult {
    let pair = parse_pair(args)?;
    let mu = parse_weight(mu, pair.g.rank)?;
    let r = twisted_index(&pair, &mu)?;
    let json = Obj::new("inverse")
        .field("type", json!(pair.g.lie_type.to_string()))
        .field("h_spec", json!(args.h_spec.clone()))
        .field("mu", weight_value(&mu))
        .field("outcome", index_outcome_value(&r))
        .build();
    let text = vec![match &r.outcome {
        None => format!("mu = {}: orphan (no module)", weight_text(&mu)),
        Some((sign, lam)) => format!(
            "mu = {}: {} lambda = {}",
            weight_text(&mu),
            sign_text(*sign),
            weight_text(lam)
        ),
    }];
    Ok(Report::new(json, text))
}

fn cmd_kernel(args: &PairArgs, lambda: &str, dump: bool, cap: usize) -> CmdResult {
    let pair = parse_pair(args)?;
    let lam = parse_weight(lambda, pair.g.rank)?;
    let cb = chevalley_basis(&pair.g)?;
    let op = build_dirac(&pair, &cb, &lam, cap)?;
    let square = op.square_check()?;
    let kernel = op.kernel()?;
    let labels: Vec<Value> = kernel
        .labels
        .iter()
        .map(|l| {
            let mut o = serde_json::Map::new();
            o.insert("mu".into(), weight_value(&l.mu));
            o.insert("sign".into(), json!(l.sign));
            o.insert(
                "parity".into(),
                json!(if l.parity_odd { "odd" } else { "even" }),
            );
            o.insert("dimension".into(), json!(l.dim));
            Value::Object(o)
        })
        .collect();
    let square_table: Vec<Value> = square
        .blocks
        .iter()
        .map(|b| {
            let mut o = serde_json::Map::new();
            o.insert("mu".into(), weight_value(&b.mu));
            o.insert("multiplicity".into(), json!(b.mult));
            o.insert("scalar".into(), rat_value(&b.expected));
            o.insert("scalar_ok".into(), json!(b.scalar_ok));
            Value::Object(o)
        })
        .collect();
    let mut obj = Obj::new("kernel")
        .field("type", json!(pair.g.lie_type.to_string()))
        .field("h_spec", json!(args.h_spec.clone()))
        .field("lambda", weight_value(&lam))
        .field("dim_v", json!(kernel.dim_v))
        .field("dim_s", json!(kernel.dim_s))
        .field("dim_ker", json!(kernel.dim_kernel))
        .field("labels", Value::Array(labels))
        .field("square_table", Value::Array(square_table))
        .field("square_all_ok", json!(square.all_ok));
    if dump {
        obj = obj
            .field("matrix", matrix_value(&op.matrix))
            .field("kernel_basis", matrix_value(&kernel.basis));
    }
    let mut text = vec![format!(
        "Dirac kernel for {} / {}, lambda = {}: dim V = {}, dim S = {}, dim Ker = {}",
        pair.g.lie_type,
        args.h_spec,
        weight_text(&lam),
        kernel.dim_v,
        kernel.dim_s,
        kernel.dim_kernel
    )];
    for l in &kernel.labels {
        text.push(format!(
            "  {} {}  parity {}  dim {}",
            sign_text(l.sign),
            weight_text(&l.mu),
            if l.parity_odd { "odd" } else { "even" },
            l.dim
        ));
    }
    text.push(format!(
        "square scalar law: {}",
        if square.all_ok { "holds" } else { "VIOLATED" }
    ));
    Ok(Report::new(obj.build(), text).with_verified(square.all_ok))
}

fn cmd_index(args: &PairArgs, mu: &str, crosscheck: bool) -> CmdResult {
    let pair = parse_pair(args)?;
    let mu = parse_weight(mu, pair.g.rank)?;
    if crosscheck {
        let r = index_crosscheck(&pair, &mu)?;
        let blocks: Vec<Value> = r
            .blocks
            .iter()
            .map(|b| {
                let mut o = serde_json::Map::new();
                o.insert("lambda".into(), weight_value(&b.lambda));
                o.insert("hom_dim_plus".into(), json!(b.hom_dim_plus));
                o.insert("hom_dim_minus".into(), json!(b.hom_dim_minus));
                Value::Object(o)
            })
            .collect();
        let mut obj = Obj::new("index")
            .field("type", json!(pair.g.lie_type.to_string()))
            .field("h_spec", json!(args.h_spec.clone()))
            .field("mu", weight_value(&mu))
            .field("outcome", index_outcome_value(&r.index));
        if let Some(w) = &r.index.witness {
            obj = obj.field("witness_word", word_value(&w.word));
        }
        let obj = obj
            .field("blocks", Value::Array(blocks))
            .field("crosscheck_agrees", json!(r.agrees));
        let text = vec![
            index_text(&mu, &r.index),
            format!(
                "block route: {} block(s), {}",
                r.blocks.len(),
                if r.agrees { "agrees" } else { "DISAGREES" }
            ),
        ];
        Ok(Report::new(obj.build(), text).with_verified(r.agrees))
    } else {
        let r = twisted_index(&pair, &mu)?;
        let mut obj = Obj::new("index")
            .field("type", json!(pair.g.lie_type.to_string()))
            .field("h_spec", json!(args.h_spec.clone()))
            .field("mu", weight_value(&mu))
            .field("outcome", index_outcome_value(&r));
        if let Some(w) = &r.witness {
            obj = obj.field("witness_word", word_value(&w.word));
        }
        let text = vec![index_text(&mu, &r)];
        Ok(Report::new(obj.build(), text))
    }
}

fn index_text(mu: &Weight, r: &IndexResult) -> String {
    match &r.outcome {
        None => format!("index for mu = {}: 0", weight_text(mu)),
        Some((sign, lam)) => format!(
            "index for mu = {}: {}[V_{}]",
            weight_text(mu),
            sign_text(*sign),
            weight_text(lam)
        ),
    }
}

fn cmd_harmonic(args: &PairArgs, mu: &str, cap: usize) -> CmdResult {
    let pair = parse_pair(args)?;
    let mu = parse_weight(mu, pair.g.rank)?;
    let cb = chevalley_basis(&pair.g)?;
    let r = harmonic_spinors(&pair, &cb, &mu, cap)?;
    let mut obj = Obj::new("harmonic")
        .field("type", json!(pair.g.lie_type.to_string()))
        .field("h_spec", json!(args.h_spec.clone()))
        .field("mu", weight_value(&mu))
        .field("outcome", index_outcome_value(&r.index))
        .field("materialized", json!(r.materialized))
        .field("certified", json!(r.certified))
        .field("kernel_isotypic_dim", json!(r.kernel_isotypic_dim));
    if let Some(d) = r.realized_dim {
        obj = obj.field("realized_dimension", json!(d));
    }
    if let Some(m) = r.pw_multiplicity {
        obj = obj.field("pw_multiplicity", json!(m));
    }
    if let Some(s) = r.parity_sign {
        obj = obj.field("parity_sign", json!(s));
    }
    let mut text = vec![index_text(&mu, &r.index)];
    if !r.materialized {
        text.push("operator exceeds the dimension cap: closed form only (not materialized)".into());
    } else {
        text.push(format!(
            "kernel isotypic dimension {} ({})",
            r.kernel_isotypic_dim,
            if r.certified {
                "certified"
            } else {
                "NOT certified"
            }
        ));
    }
    Ok(Report::new(obj.build(), text))
}

fn cmd_verify_gkrs(args: &PairArgs, max_norm: &str) -> CmdResult {
    let pair = parse_pair(args)?;
    let bound = parse_norm(max_norm)?;
    let lambdas = enumerate_dominant(&pair.g, &bound);
    let mut failures = Vec::new();
    for lam in &lambdas {
        let r = verify_gkrs(&pair, lam)?;
        if !r.equal {
            failures.push(lam.clone());
        }
    }
    let ok = failures.is_empty();
    let json = Obj::new("verify")
        .field("target", json!("gkrs"))
        .field("type", json!(pair.g.lie_type.to_string()))
        .field("h_spec", json!(args.h_spec.clone()))
        .field("max_norm", json!(format_rat(&bound)))
        .field("checked", json!(lambdas.len()))
        .field("all_equal", json!(ok))
        .field("failures", weights_value(&failures))
        .build();
    let text = vec![if ok {
        format!(
            "multiplet identity verified for {} dominant weight(s) with |lambda+rho|^2 <= {}",
            lambdas.len(),
            format_rat(&bound)
        )
    } else {
        format!(
            "multiplet identity FAILED at lambda = {}",
            weight_text(&failures[0])
        )
    }];
    Ok(Report::new(json, text).with_verified(ok))
}

fn cmd_sweep(args: &PairArgs, max_norm: &str, crosscheck: bool) -> CmdResult {
    let pair = parse_pair(args)?;
    let bound = parse_norm(max_norm)?;
    let mus = enumerate_h_dominant(&pair, &bound);
    let mut arr = Vec::new();
    let mut text = vec![format!(
        "sweep over {} h-dominant weight(s) with |mu+rho_h|^2 <= {}:",
        mus.len(),
        format_rat(&bound)
    )];
    let mut all_agree = true;
    for mu in &mus {
        let idx = twisted_index(&pair, mu)?;
        let mut o = serde_json::Map::new();
        o.insert("mu".into(), weight_value(mu));
        o.insert("outcome".into(), index_outcome_value(&idx));
        if crosscheck {
            let r = index_crosscheck(&pair, mu)?;
            o.insert("crosscheck_agrees".into(), json!(r.agrees));
            all_agree &= r.agrees;
        }
        arr.push(Value::Object(o));
        text.push(format!("  {}", index_text(mu, &idx)));
    }
    let mut json = Obj::new("sweep")
        .field("type", json!(pair.g.lie_type.to_string()))
        .field("h_spec", json!(args.h_spec.clone()))
        .field("max_norm", json!(format_rat(&bound)))
        .field("entries", Value::Array(arr));
    if crosscheck {
        json = json.field("all_crosschecks_agree", json!(all_agree));
        text.push(format!(
            "crosschecks: {}",
            if all_agree { "all agree" } else { "DISAGREEMENT" }
        ));
    }
    let mut report = Report::new(json.build(), text);
    if crosscheck {
        report = report.with_verified(all_agree);
    }
    Ok(report)
}
