use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use atwkit::atw::{
    analyze_atw, classify_half_distance, example1_code, example2_code, expand_mrd_to_atw, is_induced_by_mrd,
    HalfDistanceClass,
};
use atwkit::format::{parse_generator, parse_spread, parse_subspace, write_generator, write_hamming, write_spread};
use atwkit::hamming::{analyze_hamming_two_weight, hamming_expansion, verify_weight_correspondence, HammingCode};
use atwkit::rank::{codes_equivalent, gabidulin, hadamard_code, is_mrd, Equivalence, DEFAULT_BUDGET};
use atwkit::search::{run_search, SearchJob, SearchMode};
use atwkit::spreads::{direct_sum_split, project_spread, spread_from_atw, verify_spread, verify_theorem6};
use atwkit::{Error, Extension, Field, Mat, RankCode};

#[derive(Parser)]
#[command(name = "atwkit", version, about = "Antipodal two-weight rank-metric codes, spreads and Hamming expansions")]
struct Cli {
    /// Machine-readable JSON output
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for enumerations (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Maximum number of objects any single enumeration may visit
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe a field given as p^D or p^D:modulus
    Field { spec: String },
    /// Build a generator matrix
    Construct {
        #[arg(value_enum)]
        kind: Kind,
        #[command(flatten)]
        params: Params,
        /// Write the generator file here instead of stdout
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Weight distribution and ATW report of a generator file
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = MetricArg::Rank)]
        metric: MetricArg,
    },
    /// Run a verifier; exit code 1 when it fails
    Verify {
        #[arg(value_enum)]
        what: Check,
        /// Generator file (spread dump for `spread`)
        file: PathBuf,
    },
    /// Spread extraction, splitting and projection
    Spread {
        #[command(subcommand)]
        action: SpreadCmd,
    },
    /// Write the Hamming-metric expansion of a rank-metric code
    ExpandHamming {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Enumerate or sample q-systems and report their weight supports
    Search {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Sample this many systems instead of visiting all of them
        #[arg(long)]
        sample: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        atw_only: bool,
        #[arg(long)]
        two_weight_only: bool,
    },
    /// Decide whether two codes are equivalent
    Equiv { first: PathBuf, second: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Example1,
    Example2,
    Gabidulin,
    Hadamard,
    ExpandMrd,
}

#[derive(Args)]
struct Params {
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    t: Option<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    Rank,
    HammingExpansion,
    /// The file is already a Hamming generator
    Hamming,
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    Atw,
    Mrd,
    Spread,
    Theorem6,
    WeightCorr,
    InducedByMrd,
    HalfClassify,
}

#[derive(Subcommand)]
enum SpreadCmd {
    /// Spread cut out on the q-system of an ATW code
    Extract {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Greedy direct-sum decomposition of a spread dump
    Split { dump: PathBuf },
    /// Intersections of a spread with a subspace file
    Project { dump: PathBuf, subspace: PathBuf },
}

enum Failure {
    Input(String),
    Budget(String),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    json: bool,
    budget: u64,
}

impl Ctx {
    fn emit(&self, text: &str, value: serde_json::Value) {
        if self.json {
            println!("{value}");
        } else {
            println!("{text}");
        }
    }

    fn verdict(&self, name: &str, pass: bool, detail: String, extra: serde_json::Value) -> Outcome {
        let text = format!("{name}: {} {detail}", if pass { "PASS" } else { "FAIL" });
        let mut value = json!({ "check": name, "pass": pass, "detail": detail });
        if let (Some(obj), serde_json::Value::Object(more)) = (value.as_object_mut(), extra) {
            obj.extend(more);
        }
        self.emit(&text, value);
        if pass {
            Ok(())
        } else {
            Err(Failure::Verify(format!("{name} failed")))
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_code(path: &Path) -> Result<RankCode, Failure> {
    Ok(parse_generator(&read(path)?)?)
}

fn require_nondegenerate(code: &RankCode) -> Outcome {
    let dim = code.qsystem().dim();
    if dim != code.n() {
        return Err(Error::Degenerate { length: code.n(), qsystem_dim: dim }.into());
    }
    Ok(())
}

fn need<T>(v: Option<T>, flag: &str, kind: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Input(format!("{kind} needs --{flag}")))
}

fn prime_power(q: u64) -> Result<(u64, u32), Failure> {
    atwkit::field::prime_power(q).ok_or_else(|| Failure::Input(format!("{q} is not a prime power")))
}

fn construct(kind: Kind, p: &Params, budget: u64) -> Result<RankCode, Failure> {
    let q = need(p.q, "q", "construct")?;
    Ok(match kind {
        Kind::Example1 => example1_code(q, need(p.d, "d", "example1")?, need(p.m, "m", "example1")?)?,
        Kind::Example2 => example2_code(q, need(p.d, "d", "example2")?, need(p.k, "k", "example2")?)?,
        Kind::Hadamard => hadamard_code(q, need(p.m, "m", "hadamard")?, need(p.k, "k", "hadamard")?)?,
        Kind::Gabidulin => {
            let (ps, s) = prime_power(q)?;
            let m = need(p.m, "m", "gabidulin")?;
            let ext = Arc::new(Extension::canonical(ps, s, m)?);
            gabidulin(ext, need(p.l, "l", "gabidulin")?, need(p.k, "k", "gabidulin")?, None)?
        }
        Kind::ExpandMrd => {
            let (ps, s) = prime_power(q)?;
            let (t, l, m) = (need(p.t, "t", "expand-mrd")?, need(p.l, "l", "expand-mrd")?, need(p.m, "m", "expand-mrd")?);
            if t == 0 || m % t != 0 {
                return Err(Failure::Input(format!("--t {t} must divide --m {m}")));
            }
            let sup = Field::canonical(ps, s * m)?;
            let mid = Field::canonical(ps, s * t)?;
            let mrd = gabidulin(Arc::new(Extension::new(&sup, &mid)?), l, 2, None)?;
            expand_mrd_to_atw(&mrd, &Field::canonical(ps, s)?, budget)?
        }
    })
}

fn matrix_json(m: &Mat) -> serde_json::Value {
    json!(m.row_vecs())
}

fn run(cli: Cli) -> Outcome {
    let ctx = Ctx { json: cli.json, budget: cli.budget };
    let budget = cli.budget;
    match cli.command {
        Command::Field { spec } => {
            let f: Field = spec.parse()?;
            let prim = f.primitive_element();
            let text = format!(
                "field {}\n  characteristic {}\n  degree {}\n  order {}\n  modulus {:?} (low to high)\n  primitive element {prim}",
                f.spec(),
                f.characteristic(),
                f.degree(),
                f.order(),
                f.modulus()
            );
            ctx.emit(
                &text,
                json!({
                    "spec": f.spec(), "p": f.characteristic(), "degree": f.degree(), "order": f.order(),
                    "modulus": f.modulus(), "primitive_element": prim,
                }),
            );
            Ok(())
        }
        Command::Construct { kind, params, out } => {
            let code = construct(kind, &params, budget)?;
            let file = write_generator(&code);
            if ctx.json {
                if let Some(p) = &out {
                    write_or_print(Some(p), &file)?;
                }
                println!(
                    "{}",
                    json!({
                        "field": code.sup().spec(), "base": code.base().spec(), "k": code.k(), "n": code.n(),
                        "generator": matrix_json(code.generator()),
                    })
                );
                Ok(())
            } else {
                if out.is_some() {
                    eprintln!("field={} base={} k={} n={}", code.sup().spec(), code.base().spec(), code.k(), code.n());
                }
                write_or_print(out.as_deref(), &file)
            }
        }
        Command::Analyze { file, metric } => {
            let code = load_code(&file)?;
            match metric {
                MetricArg::Rank => {
                    require_nondegenerate(&code)?;
                    let r = analyze_atw(&code, budget)?;
                    let counts: Vec<String> =
                        r.distribution.counts.iter().map(|(w, c)| format!("{w:>3}: {c}")).collect();
                    let text = format!(
                        "[{}, {}, {}] over {}/{}\n{}\natw={} two_weight={}",
                        r.n,
                        r.k,
                        r.d,
                        code.sup().spec(),
                        code.base().spec(),
                        counts.join("\n"),
                        r.is_antipodal,
                        r.is_two_weight
                    );
                    ctx.emit(&text, r.to_json());
                }
                MetricArg::HammingExpansion => {
                    let h = hamming_expansion(&code, budget)?;
                    hamming_report(&ctx, &h, Some(&code))?;
                }
                MetricArg::Hamming => {
                    let h = HammingCode { generator: code.generator().clone() };
                    hamming_report(&ctx, &h, None)?;
                }
            }
            Ok(())
        }
        Command::Verify { what, file } => verify(&ctx, what, &file),
        Command::Spread { action } => spread(&ctx, action),
        Command::ExpandHamming { file, out } => {
            let code = load_code(&file)?;
            let h = hamming_expansion(&code, budget)?;
            write_or_print(out.as_deref(), &write_hamming(&h))
        }
        Command::Search { q, m, n, k, sample, seed, atw_only, two_weight_only } => {
            let mode = match sample {
                Some(count) => SearchMode::Sample { count, seed },
                None => SearchMode::Exhaustive,
            };
            let job = SearchJob { q, m, n, k, mode, atw_only, two_weight_only, budget };
            let summary = run_search(&job, |f| {
                if ctx.json {
                    println!("{}", serde_json::to_string(f).expect("serialisable"));
                } else {
                    println!(
                        "#{:<10} d={:<3} support={:<12} atw={:<5} generator={:?}",
                        f.index,
                        f.d,
                        format!("{:?}", f.support),
                        f.atw,
                        f.generator
                    );
                }
            })?;
            if ctx.json {
                println!("{}", json!({ "summary": summary }));
            } else {
                println!(
                    "summary: visited {} of {} (skipped {} non-spanning), two-weight {}, atw {}, emitted {}",
                    summary.visited, summary.total, summary.skipped_nonspanning, summary.two_weight, summary.atw,
                    summary.emitted
                );
                for (support, count) in &summary.by_support {
                    println!("  support {support:<12} {count}");
                }
            }
            Ok(())
        }
        Command::Equiv { first, second } => {
            let (a, b) = (load_code(&first)?, load_code(&second)?);
            match codes_equivalent(&a, &b, budget)? {
                Equivalence::Yes { alpha, m } => {
                    let rows: Vec<String> = m.row_vecs().iter().map(|r| format!("  {r:?}")).collect();
                    ctx.emit(
                        &format!("equivalent: alpha = {alpha}, M =\n{}", rows.join("\n")),
                        json!({ "equivalent": true, "alpha": alpha, "m": matrix_json(&m) }),
                    );
                    Ok(())
                }
                Equivalence::No => {
                    ctx.emit("not equivalent", json!({ "equivalent": false }));
                    Err(Failure::Verify("codes are not equivalent".into()))
                }
                Equivalence::BudgetExceeded { needed } => Err(Error::BudgetExceeded { needed, budget }.into()),
            }
        }
    }
}

fn hamming_report(ctx: &Ctx, h: &HammingCode, source: Option<&RankCode>) -> Outcome {
    let r = analyze_hamming_two_weight(h, ctx.budget, source)?;
    let counts: Vec<String> = r.distribution.counts.iter().map(|(w, c)| format!("{w:>5}: {c}")).collect();
    let text = format!(
        "Hamming [{}, {}] over {}\n{}\ntwo_weight={} antipodal={}{}",
        r.length,
        r.k,
        h.generator.field().spec(),
        counts.join("\n"),
        r.two_weight,
        r.antipodal,
        r.prediction_matches.map(|m| format!(" prediction_matches={m}")).unwrap_or_default()
    );
    ctx.emit(&text, r.to_json());
    Ok(())
}

fn verify(ctx: &Ctx, what: Check, file: &Path) -> Outcome {
    let budget = ctx.budget;
    if let Check::Spread = what {
        let s = parse_spread(&read(file)?)?;
        return match verify_spread(&s) {
            Ok(()) => ctx.verdict("spread", true, format!("{}-spread of F_{}^{} with {} elements", s.t(), s.field().order(), s.ambient(), s.len()), json!({})),
            Err(v) => ctx.verdict("spread", false, v.to_string(), json!({})),
        };
    }
    let code = load_code(file)?;
    match what {
        Check::Atw => {
            let r = analyze_atw(&code, budget)?;
            ctx.verdict("atw", r.is_antipodal, format!("weights {:?}", r.distribution.support()), r.to_json())
        }
        Check::Mrd => {
            let pass = is_mrd(&code, budget)?;
            ctx.verdict("mrd", pass, format!("n={} k={}", code.n(), code.k()), json!({}))
        }
        Check::Theorem6 => {
            let t = verify_theorem6(&code, budget)?;
            ctx.verdict(
                "theorem6",
                t.agree,
                format!("atw={} induces_subspread={} t'={:?}", t.atw, t.induces_subspread, t.t_prime),
                json!({ "atw": t.atw, "induces_subspread": t.induces_subspread, "t_prime": t.t_prime }),
            )
        }
        Check::WeightCorr => {
            let c = verify_weight_correspondence(&code, budget)?;
            let detail = match &c.counterexample {
                None => format!("{} projective codewords", c.checked),
                Some(x) => format!("fails at x = {x:?}"),
            };
            ctx.verdict("weight-corr", c.holds, detail, json!({ "checked": c.checked }))
        }
        Check::InducedByMrd => {
            let pass = is_induced_by_mrd(&code, budget)?;
            ctx.verdict("induced-by-mrd", pass, String::new(), json!({}))
        }
        Check::HalfClassify => match classify_half_distance(&code, budget)? {
            HalfDistanceClass::Canonical(form) => ctx.verdict(
                "half-classify",
                true,
                format!("canonical over F_(q^{}), e = {:?}", form.subfield_degree, form.subfield_basis),
                json!({
                    "subfield_degree": form.subfield_degree,
                    "subfield_basis": form.subfield_basis,
                    "generator": matrix_json(&form.generator),
                    "row_transform": matrix_json(&form.row_transform),
                    "column_transform": matrix_json(&form.column_transform),
                }),
            ),
            HalfDistanceClass::NotAtw => ctx.verdict("half-classify", false, "not ATW".into(), json!({})),
        },
        Check::Spread => unreachable!(),
    }
}

fn spread(ctx: &Ctx, action: SpreadCmd) -> Outcome {
    match action {
        SpreadCmd::Extract { file, out } => {
            let code = load_code(&file)?;
            let s = spread_from_atw(&code, ctx.budget)?;
            write_or_print(out.as_deref(), &write_spread(&s.spread))
        }
        SpreadCmd::Split { dump } => {
            let s = parse_spread(&read(&dump)?)?;
            let blocks = direct_sum_split(&s)?;
            let lines: Vec<String> = blocks
                .iter()
                .map(|&i| format!("{i:>4}: {:?}", s.elements()[i].basis_vecs()))
                .collect();
            let vectors: Vec<_> = blocks.iter().map(|&i| s.elements()[i].basis_vecs()).collect();
            ctx.emit(&lines.join("\n"), json!({ "blocks": blocks, "bases": vectors }));
            Ok(())
        }
        SpreadCmd::Project { dump, subspace } => {
            let s = parse_spread(&read(&dump)?)?;
            let w = parse_subspace(&read(&subspace)?)?;
            let (els, r) = project_spread(&s, &w)?;
            let text = format!(
                "dim W = {}, {} nonzero sections, dimensions {:?}, t' = {}, subspread = {}",
                w.dim(),
                r.count,
                r.dims,
                r.t_prime.map(|t| t.to_string()).unwrap_or_else(|| "mixed".into()),
                r.is_subspread
            );
            let bases: Vec<_> = els.iter().map(|e| e.basis_vecs()).collect();
            ctx.emit(
                &text,
                json!({
                    "dim_w": w.dim(), "count": r.count, "dims": r.dims, "t_prime": r.t_prime,
                    "is_subspread": r.is_subspread, "sections": bases,
                }),
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg} (raise --budget)");
            ExitCode::from(3)
        }
    }
}
