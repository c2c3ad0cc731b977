use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hyperdisc::canonical::{phi, CanonicalSequence, Decomposer};
use hyperdisc::constructions::{crosscut, random_hypergraph, scaled_phi_family, sts};
use hyperdisc::discrepancy::{disc_exact, disc_heuristic, exp_abs_exact, exp_abs_mc, expected_intersection, single_disc, Annealing, DiscrepancyReport, SearchParams};
use hyperdisc::rng::DEFAULT_SEED;
use hyperdisc::transpositions::{gamma_exact, gamma_mc, poly_coeffs, TranspositionFamily};
use hyperdisc::verify::{run_verify, Scale};
use hyperdisc::whg::{format_weighting, read_weighting, write_weighting};
use hyperdisc::wvector::{wvector_canonical, wvector_mc, wvector_recursive, WVector};
use hyperdisc::{Error, Weighting};

/// Discrepancy of pairs of weighted k-uniform hypergraphs.
///
/// Weightings are read and written in the .whg text format. Vertices on the
/// command line are 1-indexed, like in files.
#[derive(Parser)]
#[command(name = "hyperdisc", version)]
struct Cli {
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the report (or generated weighting) here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// W-vector of a weighting.
    Wvector {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = WMethodArg::Canonical)]
        method: WMethodArg,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Pair discrepancy disc⁺, disc⁻ and disc.
    Disc {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum, default_value_t = DiscMethodArg::Exact)]
        method: DiscMethodArg,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// E_π |<w_π, u>|.
    Expect {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum, default_value_t = EstMethodArg::Exact)]
        method: EstMethodArg,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Average effect γ(w, u) of one transposition.
    Gamma {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum, default_value_t = EstMethodArg::Exact)]
        method: EstMethodArg,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Transposition used by the Monte Carlo definition, e.g. "1,2".
        #[arg(long, default_value = "1,2")]
        transposition: String,
    },
    /// Coefficients of the expected effect of a random subfamily of transpositions.
    Polycoeff {
        #[command(flatten)]
        pair: PairArgs,
        /// Disjoint pairs "x1,y1;x2,y2;..."; defaults to (1 2), (3 4), ...
        #[arg(long)]
        pairs: Option<String>,
    },
    /// Discrepancy of a single weighting against vertex subsets.
    SingleDisc {
        #[arg(long)]
        input: PathBuf,
    },
    /// Split a weighting into its V_0, ..., V_k components.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        /// Directory for the component files (default: next to the input).
        #[arg(long)]
        components: Option<PathBuf>,
    },
    /// Generate a weighting.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run the property suites.
    Verify {
        /// "all" or one suite name.
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long, default_value = "small")]
        scale: String,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Canonical weighting φ_i (or φ_i* with --star).
    Phi {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        i: usize,
        /// Vertex sequence "x1,y1,...,xi,yi"; defaults to 1,2,...,2i.
        #[arg(long)]
        seq: Option<String>,
        #[arg(long)]
        star: bool,
    },
    /// Steiner triple system (n ≡ 1 or 3 mod 6).
    Sts {
        #[arg(long)]
        n: usize,
    },
    /// Triples meeting both A and its complement.
    Crosscut {
        #[arg(long)]
        n: usize,
        /// Vertex list, e.g. "1,2,3".
        #[arg(long)]
        a: String,
    },
    /// Random hypergraph with edge probability p.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: f64,
    },
    /// The k rescaled canonical weightings with pairwise discrepancy zero.
    Orthoset {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Args)]
struct PairArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 50)]
    restarts: usize,
    #[arg(long, default_value_t = 1000)]
    max_sweeps: usize,
    #[arg(long, default_value_t = 20)]
    plateau: usize,
    /// Initial annealing temperature; enables annealing after the climb.
    #[arg(long)]
    anneal_temp: Option<f64>,
    #[arg(long, default_value_t = 0.995)]
    anneal_cooling: f64,
    #[arg(long, default_value_t = 2000)]
    anneal_steps: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum WMethodArg {
    Recursive,
    Canonical,
    Mc,
}

#[derive(Clone, Copy, ValueEnum)]
enum DiscMethodArg {
    Exact,
    Heuristic,
}

#[derive(Clone, Copy, ValueEnum)]
enum EstMethodArg {
    Exact,
    Mc,
}

enum Failure {
    Lib(Error),
    Usage(String),
    File(PathBuf, Error),
    ChecksFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::ChecksFailed => 1,
            Failure::Lib(Error::Capacity(_)) | Failure::File(_, Error::Capacity(_)) => 3,
            _ => 2,
        }
    }
}

/// What a command produced, before formatting.
struct Output {
    command: &'static str,
    params: Value,
    result: Value,
    text: String,
    csv: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: could not configure {} threads: {e}", cli.threads);
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Lib(e) => eprintln!("error: {e}"),
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::File(p, e) => eprintln!("error: {}: {e}", p.display()),
                Failure::ChecksFailed => eprintln!("verification failed"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let start = Instant::now();
    let (output, failed) = match &cli.command {
        Command::Gen(g) => return generate(cli, g),
        Command::Verify { suite, scale } => {
            let scale: Scale = scale.parse()?;
            let rep = run_verify(suite, scale, cli.seed)?;
            let mut text = String::new();
            let mut csv = String::from("criterion,name,status,seconds\n");
            for c in &rep.checks {
                let _ = writeln!(text, "[{}] {:>2} {:<18} {:.2}s {}", c.status, c.criterion, c.name, c.seconds, c.detail);
                let _ = writeln!(csv, "{},{},{},{:.3}", c.criterion, c.name, c.status, c.seconds);
            }
            let _ = writeln!(text, "{}", if rep.passed { "all checks passed" } else { "some checks FAILED" });
            let out = Output {
                command: "verify",
                params: json!({ "suite": suite, "scale": rep.scale }),
                result: serde_json::to_value(&rep).expect("serializable"),
                text,
                csv: Some(csv),
            };
            (out, !rep.passed)
        }
        other => (analyze(cli, other)?, false),
    };
    emit(cli, output, start.elapsed().as_secs_f64())?;
    if failed {
        Err(Failure::ChecksFailed)
    } else {
        Ok(())
    }
}

fn emit(cli: &Cli, out: Output, seconds: f64) -> Result<(), Failure> {
    let body = match cli.format {
        Format::Json => {
            let mut obj = match out.result {
                Value::Object(m) => m,
                other => {
                    let mut m = serde_json::Map::new();
                    m.insert("result".into(), other);
                    m
                }
            };
            obj.insert(
                "metadata".into(),
                json!({
                    "version": env!("CARGO_PKG_VERSION"),
                    "command": out.command,
                    "seed": cli.seed,
                    "params": out.params,
                    "timings": { "seconds": seconds },
                }),
            );
            serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable") + "\n"
        }
        Format::Text => out.text,
        Format::Csv => out.csv.ok_or_else(|| Failure::Usage(format!("{} has no tabular output; use --format json or text", out.command)))?,
    };
    write_out(cli.out.as_deref(), &body)
}

fn write_out(path: Option<&Path>, body: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| Failure::File(p.to_path_buf(), e.into())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<Weighting, Failure> {
    read_weighting(path).map_err(|e| Failure::File(path.to_path_buf(), e))
}

fn load_pair(p: &PairArgs) -> Result<(Weighting, Weighting), Failure> {
    let (a, b) = (load(&p.a)?, load(&p.b)?);
    if (a.n(), a.k()) != (b.n(), b.k()) {
        return Err(Failure::Usage(format!(
            "{} is ({},{}) but {} is ({},{}); both weightings need the same n and k",
            p.a.display(),
            a.n(),
            a.k(),
            p.b.display(),
            b.n(),
            b.k()
        )));
    }
    Ok((a, b))
}

/// Parses a 1-indexed vertex list "1,2,3" into 0-indexed vertices.
fn parse_vertices(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v - 1),
            _ => Err(Failure::Usage(format!("bad vertex {t:?} (vertices are 1-indexed)"))),
        })
        .collect()
}

fn parse_pairs(s: &str) -> Result<Vec<(usize, usize)>, Failure> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| match parse_vertices(t)?.as_slice() {
            [x, y] => Ok((*x, *y)),
            _ => Err(Failure::Usage(format!("bad pair {t:?}; expected \"x,y\""))),
        })
        .collect()
}

fn wvector_text(wv: &WVector) -> String {
    let mut s = format!("W-vector ({:?}) of a ({},{}) weighting\n", wv.method, wv.n, wv.k);
    for (i, v) in wv.values.iter().enumerate() {
        match &wv.stderr {
            Some(se) => {
                let _ = writeln!(s, "W_{i} = {v} ± {}", se[i]);
            }
            None => {
                let _ = writeln!(s, "W_{i} = {v}");
            }
        }
    }
    s
}

fn disc_text(r: &DiscrepancyReport) -> String {
    let one = |p: &hyperdisc::Permutation| p.one_indexed().iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    format!(
        "method {:?}\ndisc+ = {}\ndisc- = {}\ndisc  = {}\nbaseline d(w)d(u)C(n,k) = {}\nmax intersection {} at π = [{}]\nmin intersection {} at π = [{}]\n",
        r.method,
        r.disc_plus,
        r.disc_minus,
        r.disc,
        r.baseline,
        r.max_intersection,
        one(&r.argmax_perm),
        r.min_intersection,
        one(&r.argmin_perm)
    )
}

fn analyze(cli: &Cli, cmd: &Command) -> Result<Output, Failure> {
    Ok(match cmd {
        Command::Wvector { input, method, samples } => {
            let w = load(input)?;
            let wv = match method {
                WMethodArg::Recursive => wvector_recursive(&w)?,
                WMethodArg::Canonical => wvector_canonical(&w)?,
                WMethodArg::Mc => wvector_mc(&w, *samples, cli.seed)?,
            };
            let mut csv = String::from("level,value,stderr\n");
            for (i, v) in wv.values.iter().enumerate() {
                let se = wv.stderr.as_ref().map(|s| s[i].to_string()).unwrap_or_default();
                let _ = writeln!(csv, "{i},{v},{se}");
            }
            Output {
                command: "wvector",
                params: json!({ "input": input, "method": wv.method, "samples": matches!(method, WMethodArg::Mc).then_some(*samples) }),
                result: to_value(&wv),
                text: wvector_text(&wv),
                csv: Some(csv),
            }
        }
        Command::Disc { pair, method, search } => {
            let (a, b) = load_pair(pair)?;
            let params = SearchParams {
                restarts: search.restarts,
                max_sweeps: search.max_sweeps,
                plateau_budget: search.plateau,
                seed: cli.seed,
                annealing: search.anneal_temp.map(|t| Annealing { initial_temperature: t, cooling: search.anneal_cooling, steps: search.anneal_steps }),
            };
            let r = match method {
                DiscMethodArg::Exact => disc_exact(&a, &b)?,
                DiscMethodArg::Heuristic => disc_heuristic(&a, &b, &params)?,
            };
            let p = match method {
                DiscMethodArg::Exact => json!({ "a": pair.a, "b": pair.b, "method": "exact" }),
                DiscMethodArg::Heuristic => json!({ "a": pair.a, "b": pair.b, "method": "heuristic", "search": params }),
            };
            Output { command: "disc", params: p, result: to_value(&r), text: disc_text(&r), csv: None }
        }
        Command::Expect { pair, method, samples } => {
            let (a, b) = load_pair(pair)?;
            let mean = expected_intersection(&a, &b)?;
            let (result, text, p) = match method {
                EstMethodArg::Exact => {
                    let v = exp_abs_exact(&a, &b)?;
                    (json!({ "method": "exact", "exp_abs": v, "mean_intersection": mean }), format!("E|<w_π,u>| = {v}\nE<w_π,u> = {mean}\n"), json!({ "a": pair.a, "b": pair.b, "method": "exact" }))
                }
                EstMethodArg::Mc => {
                    let e = exp_abs_mc(&a, &b, *samples, cli.seed)?;
                    (
                        json!({ "method": "mc", "exp_abs": e.mean, "stderr": e.stderr, "samples": e.samples, "mean_intersection": mean }),
                        format!("E|<w_π,u>| ≈ {} ± {} ({} samples)\nE<w_π,u> = {mean}\n", e.mean, e.stderr, e.samples),
                        json!({ "a": pair.a, "b": pair.b, "method": "mc", "samples": samples }),
                    )
                }
            };
            Output { command: "expect", params: p, result, text, csv: None }
        }
        Command::Gamma { pair, method, samples, transposition } => {
            let (a, b) = load_pair(pair)?;
            let (result, text, p) = match method {
                EstMethodArg::Exact => {
                    let g = gamma_exact(&a, &b)?;
                    (json!({ "method": "exact", "gamma": g }), format!("γ = {g}\n"), json!({ "a": pair.a, "b": pair.b, "method": "exact" }))
                }
                EstMethodArg::Mc => {
                    let t = match parse_vertices(transposition)?.as_slice() {
                        [x, y] => (*x, *y),
                        _ => return Err(Failure::Usage(format!("bad transposition {transposition:?}; expected \"x,y\""))),
                    };
                    let e = gamma_mc(&a, &b, *samples, cli.seed, t)?;
                    (
                        json!({ "method": "mc", "gamma": e.mean, "stderr": e.stderr, "samples": e.samples }),
                        format!("γ ≈ {} ± {} ({} samples)\n", e.mean, e.stderr, e.samples),
                        json!({ "a": pair.a, "b": pair.b, "method": "mc", "samples": samples, "transposition": [t.0 + 1, t.1 + 1] }),
                    )
                }
            };
            Output { command: "gamma", params: p, result, text, csv: None }
        }
        Command::Polycoeff { pair, pairs } => {
            let (a, b) = load_pair(pair)?;
            let family = match pairs {
                Some(s) => TranspositionFamily::new(a.n(), parse_pairs(s)?)?,
                None => TranspositionFamily::standard(a.n()),
            };
            let pc = poly_coeffs(&a, &b, &family)?;
            let mut text = format!("constant term {}\n", pc.constant_term);
            for (i, c) in pc.coefficients.iter().enumerate() {
                let _ = writeln!(text, "A_{} = {c}", i + 1);
            }
            let _ = writeln!(text, "δ(I) = {}\nresidual above degree k = {}", pc.delta_sum, pc.higher_residual);
            let one_indexed: Vec<[usize; 2]> = family.pairs().iter().map(|&(x, y)| [x + 1, y + 1]).collect();
            Output { command: "polycoeff", params: json!({ "a": pair.a, "b": pair.b, "pairs": one_indexed }), result: to_value(&pc), text, csv: None }
        }
        Command::SingleDisc { input } => {
            let w = load(input)?;
            let s = single_disc(&w)?;
            let one = |v: &[usize]| v.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(" ");
            let text = format!(
                "disc+ = {} at S = {{{}}}\ndisc- = {} at S = {{{}}}\ndisc  = {}\n",
                s.disc_plus,
                one(&s.plus_witness),
                s.disc_minus,
                one(&s.minus_witness),
                s.disc
            );
            Output { command: "single-disc", params: json!({ "input": input }), result: to_value(&s), text, csv: None }
        }
        Command::Decompose { input, components } => {
            let w = load(input)?;
            let dec = Decomposer::new(w.n(), w.k())?.decompose(&w)?;
            let dir = components.clone().unwrap_or_else(|| input.parent().map(Path::to_path_buf).unwrap_or_default());
            let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("weighting");
            fs::create_dir_all(if dir.as_os_str().is_empty() { Path::new(".") } else { &dir }).map_err(|e| Failure::File(dir.clone(), e.into()))?;
            let mut levels = Vec::new();
            let mut text = String::new();
            let mut csv = String::from("level,file,l1_norm,l2_norm\n");
            for (i, c) in dec.components.iter().enumerate() {
                let path = dir.join(format!("{stem}.V{i}.whg"));
                write_weighting(&path, c).map_err(|e| Failure::File(path.clone(), e))?;
                levels.push(json!({ "level": i, "file": path, "l1_norm": c.l1_norm(), "l2_norm": c.l2_norm() }));
                let _ = writeln!(text, "V_{i}: ‖u_{i}‖_1 = {} -> {}", c.l1_norm(), path.display());
                let _ = writeln!(csv, "{i},{},{},{}", path.display(), c.l1_norm(), c.l2_norm());
            }
            let _ = writeln!(text, "reconstruction residual ‖w − Σu_i‖_1 = {}", dec.residual);
            Output {
                command: "decompose",
                params: json!({ "input": input, "components": dir }),
                result: json!({ "n": w.n(), "k": w.k(), "components": levels, "residual": dec.residual }),
                text,
                csv: Some(csv),
            }
        }
        Command::Gen(_) | Command::Verify { .. } => unreachable!("handled by run"),
    })
}

fn generate(cli: &Cli, g: &GenCommand) -> Result<(), Failure> {
    let single = |w: Weighting| write_out(cli.out.as_deref(), &format_weighting(&w));
    match g {
        GenCommand::Phi { n, k, i, seq, star } => {
            let seq = match seq {
                Some(s) => {
                    let v = parse_vertices(s)?;
                    if v.len() != 2 * i {
                        return Err(Failure::Usage(format!("--seq has {} vertices; level {i} needs {}", v.len(), 2 * i)));
                    }
                    CanonicalSequence::new(&v, *n)?
                }
                None => CanonicalSequence::standard(*i),
            };
            let w = phi(*n, *k, &seq)?;
            single(if *star { w.scale(1.0 / hyperdisc::combinatorics::binomial_f64(n - 2 * i, k - i)) } else { w })
        }
        GenCommand::Sts { n } => single(sts(*n)?),
        GenCommand::Crosscut { n, a } => single(crosscut(*n, &parse_vertices(a)?)?),
        GenCommand::Random { n, k, p } => single(random_hypergraph(*n, *k, *p, cli.seed)?),
        GenCommand::Orthoset { n, k } => {
            let set = scaled_phi_family(*n, *k)?;
            match &cli.out {
                Some(out) => {
                    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("orthoset");
                    let dir = out.parent().map(Path::to_path_buf).unwrap_or_default();
                    for (i, w) in set.iter().enumerate() {
                        let path = dir.join(format!("{stem}_{}.whg", i + 1));
                        write_weighting(&path, w).map_err(|e| Failure::File(path.clone(), e))?;
                        println!("{}", path.display());
                    }
                    Ok(())
                }
                None => {
                    for (i, w) in set.iter().enumerate() {
                        print!("# w_{}\n{}", i + 1, format_weighting(w));
                    }
                    Ok(())
                }
            }
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use hyperdisc::verify::SUITES;

    #[test]
    fn vertex_lists_are_one_indexed() {
        assert_eq!(parse_vertices("1, 2,3").ok(), Some(vec![0, 1, 2]));
        assert!(parse_vertices("0,1").is_err());
        assert!(parse_vertices("a").is_err());
        assert_eq!(parse_pairs("1,2;3,4").ok(), Some(vec![(0, 1), (2, 3)]));
        assert!(parse_pairs("1,2,3").is_err());
    }

    #[test]
    fn suites_listed() {
        assert_eq!(SUITES.len(), 12);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
