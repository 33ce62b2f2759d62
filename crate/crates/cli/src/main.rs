//! `rectcover` command-line tool.
//!
//! Exit codes: 0 success, 1 invalid input or failed verification, 2 a
//! search or enumeration budget ran out.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rectcover::boolmat::{all_ones, disjointness, kneser_submatrix, kronecker, triangular};
use rectcover::covers::{
    covering_cost, enumerate_all_rectangles, enumerate_maximal_rectangles_with_budget, fractional_cost, is_partition,
    DEFAULT_MAX_RECTS,
};
use rectcover::exact::{
    exact_boolean_rank_with_budget, exact_or2_with_budget, verify_direct_product, verify_direct_product_sum,
    ExactResult, DEFAULT_BB_BUDGET, NECHIPORUK_BUDGET,
};
use rectcover::greedy::{
    block_density, disjointness_full_cover, entropy_exponent, f_value, greedy_bound, greedy_cover, kneser_d, mu_star,
    report_csv, SetCoverInstance, REPORT_HEADER,
};
use rectcover::lp::{cover_lp_from_family, solve_dual, solve_lp, verify_certificate, DualCertificate, Q};
use rectcover::regexlang::{
    divide_and_conquer_regex, nfa_sizes_with_budget, optimal_regex_length_with_budget, TwoLetterLanguage,
};
use rectcover::{BooleanMatrix, Covering, Error, FractionalCovering, RectifierNetwork};

#[derive(Parser)]
#[command(
    name = "rectcover",
    version,
    about = "Rectangle coverings, rectifier networks and their bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a matrix in .bm format.
    Gen {
        #[command(subcommand)]
        what: Gen,
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Find or bound a covering of a matrix.
    Cover(CoverArgs),
    /// Check a covering, certificate or network against a matrix.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Print the lower and upper bounds that apply.
    Bounds(BoundsArgs),
    /// Sum-of-products expressions for two-letter languages.
    Regex {
        #[command(subcommand)]
        what: RegexCmd,
    },
    /// Disjointness sweep over k.
    Table(TableArgs),
}

#[derive(Subcommand)]
enum Gen {
    /// Strict upper triangle `T_n`.
    Triangular { n: usize },
    /// `D_{2^k}`, rows and columns indexed by subset masks.
    Disjointness { k: usize },
    /// Block of `D_{2^k}` with `|row set| = x`, `|column set| = y`.
    Kneser { k: usize, x: usize, y: usize },
    /// Kronecker product of two .bm files.
    Kron { left: PathBuf, right: PathBuf },
    /// All-ones `m × n`.
    Allones { m: usize, n: usize },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Greedy,
    Exact,
    Lp,
}

#[derive(Args, Clone, Copy)]
struct Budgets {
    /// Cap on enumerated rectangles.
    #[arg(long, default_value_t = DEFAULT_MAX_RECTS)]
    max_rects: usize,
    /// Cap on row subsets examined by the density bound.
    #[arg(long, default_value_t = NECHIPORUK_BUDGET)]
    max_nodes: u64,
    /// Cap on branch-and-bound nodes.
    #[arg(long, default_value_t = DEFAULT_BB_BUDGET)]
    bb_budget: u64,
}

#[derive(Args)]
struct CoverArgs {
    matrix: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    method: Method,
    /// Cost |R|+|C| per rectangle (the default).
    #[arg(long, conflicts_with = "unweighted")]
    weighted: bool,
    /// Cost 1 per rectangle.
    #[arg(long)]
    unweighted: bool,
    /// Write the covering (.cov).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// With `--method lp`, write the dual solution (.dc).
    #[arg(long)]
    dual: Option<PathBuf>,
    #[command(flatten)]
    budgets: Budgets,
}

#[derive(Subcommand)]
enum Verify {
    /// Validity and cost of a .cov file; fractional weights allowed.
    Covering { matrix: PathBuf, covering: PathBuf },
    /// Feasibility and value of a .dc dual certificate.
    Certificate { matrix: PathBuf, certificate: PathBuf },
    /// That a .rn network expresses the matrix.
    Network {
        matrix: PathBuf,
        network: PathBuf,
        /// Fail unless every path count is at most 1.
        #[arg(long)]
        unambiguous: bool,
    },
    /// The edge-weight chain for a network of `K ⊗ M`.
    DirectProduct {
        k: PathBuf,
        m: PathBuf,
        network: PathBuf,
        /// Also require unambiguous subnetworks.
        #[arg(long)]
        sum: bool,
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, group = "subject")]
    matrix: Option<PathBuf>,
    /// Block `(k, x, y)` of the disjointness matrix.
    #[arg(long, num_args = 3, value_names = ["K", "X", "Y"], group = "subject")]
    kneser: Option<Vec<usize>>,
    /// `d(m, k)` for the middle disjointness block.
    #[arg(long, num_args = 2, value_names = ["M", "K"], group = "subject")]
    kneser_d: Option<Vec<usize>>,
    /// `argmax` and `max` of `H(α) + 1 − 3α`.
    #[arg(long, group = "subject")]
    entropy: bool,
    #[command(flatten)]
    budgets: Budgets,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    /// `{a_i a_j : i < j < n}`.
    Ln,
}

#[derive(Args)]
struct LanguageArgs {
    /// Built-in language family and its size.
    #[arg(long, value_enum, requires = "n", conflicts_with = "language")]
    family: Option<Family>,
    n: Option<usize>,
    /// Language file (.l2).
    #[arg(long)]
    language: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_BB_BUDGET)]
    bb_budget: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegexMethod {
    Exact,
    /// Halving construction for `L_n`.
    Dc,
}

#[derive(Subcommand)]
enum RegexCmd {
    /// Print an expression, one per line.
    Emit {
        #[command(flatten)]
        lang: LanguageArgs,
        #[arg(long, value_enum, default_value_t = RegexMethod::Exact)]
        method: RegexMethod,
    },
    /// Print the shortest expression length.
    Length {
        #[command(flatten)]
        lang: LanguageArgs,
        /// Also print the automaton sizes.
        #[arg(long)]
        nfa: bool,
    },
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, default_value_t = 8)]
    k_max: usize,
    /// Per-block CSV instead of the exponent table.
    #[arg(long)]
    blocks: bool,
}

/// Failure classes mapped onto exit codes.
enum Failure {
    Invalid(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeLimit { .. } | Error::IterationLimit => Failure::Budget(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn load<T>(path: &Path, parse: impl Fn(&str) -> rectcover::Result<T>) -> std::result::Result<T, Failure> {
    parse(&read(path)?).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn load_matrix(path: &Path) -> std::result::Result<BooleanMatrix, Failure> {
    load(path, str::parse)
}

fn emit(text: String, output: Option<&Path>) -> Outcome {
    match output {
        Some(p) => {
            fs::write(p, text).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn write_file(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

/// Binary64 output, 9 significant digits.
fn sig9(v: f64) -> String {
    if v == 0.0 {
        return "0.00000000".into();
    }
    let digits = 8 - v.abs().log10().floor() as i32;
    if (0..=20).contains(&digits) {
        format!("{v:.*}", digits as usize)
    } else {
        format!("{v:.8e}")
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Gen { what, output } => {
            let a = match what {
                Gen::Triangular { n } => triangular(n)?,
                Gen::Disjointness { k } => disjointness(k)?,
                Gen::Kneser { k, x, y } => kneser_submatrix(k, x, y)?,
                Gen::Kron { left, right } => kronecker(&load_matrix(&left)?, &load_matrix(&right)?)?,
                Gen::Allones { m, n } => all_ones(m, n)?,
            };
            emit(a.to_bm_string(), output.as_deref())
        }
        Command::Cover(args) => cover(args),
        Command::Verify { what } => verify(what),
        Command::Bounds(args) => bounds(args),
        Command::Regex { what } => regex(what),
        Command::Table(args) => table(args),
    }
}

fn cover(args: CoverArgs) -> Outcome {
    let a = load_matrix(&args.matrix)?;
    let weighted = !args.unweighted;
    let b = args.budgets;
    let maximal = enumerate_maximal_rectangles_with_budget(&a, b.max_rects)?;
    let mut out = String::new();
    match args.method {
        Method::Greedy => {
            let index: Vec<(usize, usize)> = a.ones().collect();
            let sets = maximal
                .iter()
                .map(|r| {
                    r.entries()
                        .map(|e| index.binary_search(&e).expect("entry is a 1"))
                        .collect()
                })
                .collect();
            let inst = if weighted {
                let w = maximal.iter().map(|r| Q::from_integer(r.cost().into())).collect();
                SetCoverInstance::weighted(index.len(), sets, w)?
            } else {
                SetCoverInstance::new(index.len(), sets)?
            };
            let chosen = greedy_cover(&inst)?;
            let c = Covering::new(a.dims(), chosen.iter().map(|&k| maximal[k].clone()).collect());
            let _ = writeln!(out, "rectangles {}", c.len());
            let _ = writeln!(out, "cost {}", c.cost());
            if let Some(p) = &args.output {
                write_file(p, &c.to_cov_string())?;
            }
        }
        Method::Exact => {
            let r: ExactResult = if weighted {
                exact_or2_with_budget(&a, b.bb_budget)?
            } else {
                exact_boolean_rank_with_budget(&a, b.bb_budget)?
            };
            let label = if weighted { "cost" } else { "rank" };
            let _ = writeln!(out, "{label} {}", r.value);
            let _ = writeln!(out, "lower_bound {}", r.lower_bound);
            let _ = writeln!(out, "optimal {}", r.optimal);
            let _ = writeln!(out, "nodes {}", r.nodes);
            if let Some(p) = &args.output {
                write_file(p, &r.covering.to_cov_string())?;
            }
            if !r.optimal {
                print!("{out}");
                return Err(Failure::Budget(format!("search stopped after {} nodes", r.nodes)));
            }
        }
        Method::Lp => {
            let (value, duals) = solve_dual(&a, weighted)?;
            let _ = writeln!(out, "lp {value}");
            if let Some(p) = &args.dual {
                let cert = DualCertificate {
                    rows: a.rows(),
                    cols: a.cols(),
                    values: duals,
                };
                write_file(p, &cert.to_dc_string())?;
            }
            if let Some(p) = &args.output {
                let family = if weighted {
                    enumerate_all_rectangles(&a, b.max_rects)?
                } else {
                    maximal
                };
                let cl = cover_lp_from_family(&a, family, weighted, true)?;
                let sol = solve_lp(&cl.lp)?;
                write_file(p, &cl.covering(&sol).to_cov_string())?;
            }
        }
    }
    Ok(out)
}

fn verify(what: Verify) -> Outcome {
    let mut out = String::new();
    match what {
        Verify::Covering { matrix, covering } => {
            let a = load_matrix(&matrix)?;
            let f: FractionalCovering = load(&covering, FractionalCovering::parse)?;
            match f.to_integral() {
                Ok(c) => {
                    let cost = covering_cost(&a, &c)?;
                    let kind = if is_partition(&a, &c)? { "partition" } else { "covering" };
                    let _ = writeln!(out, "valid {kind}, {} rectangles, cost {cost}", c.len());
                }
                Err(_) => {
                    let cost = fractional_cost(&a, &f)?;
                    let _ = writeln!(out, "valid fractional covering, cost {cost}");
                }
            }
        }
        Verify::Certificate { matrix, certificate } => {
            let a = load_matrix(&matrix)?;
            let cert = load(&certificate, DualCertificate::parse)?;
            let r = verify_certificate(&a, &cert)?;
            if !r.feasible {
                let why = match (&r.negative, &r.violation) {
                    (Some((i, j)), _) => format!("negative value at ({i},{j})"),
                    (None, Some(rect)) => format!(
                        "rectangle rows {:?} cols {:?} exceeds its cost by {}",
                        rect.rows(),
                        rect.cols(),
                        -r.worst_slack.clone()
                    ),
                    (None, None) => "constraint violated".into(),
                };
                return Err(Failure::Invalid(format!("infeasible: {why}")));
            }
            let _ = writeln!(out, "feasible, value {}", r.value);
        }
        Verify::Network {
            matrix,
            network,
            unambiguous,
        } => {
            let a = load_matrix(&matrix)?;
            let net: RectifierNetwork = load(&network, str::parse)?;
            net.check_expresses(&a)?;
            let (lo, hi) = net.depth_profile()?;
            let unamb = net.is_unambiguous();
            let _ = writeln!(
                out,
                "expresses, size {}, depth {lo}..{hi}, unambiguous {unamb}",
                net.size()
            );
            if unambiguous && !unamb {
                let (row, col, paths) = net.first_ambiguity().expect("ambiguous network has a witness");
                print!("{out}");
                return Err(Error::Ambiguous {
                    row,
                    col,
                    paths: paths.to_string(),
                }
                .into());
            }
        }
        Verify::DirectProduct {
            k,
            m,
            network,
            sum,
            csv,
        } => {
            let (k, m) = (load_matrix(&k)?, load_matrix(&m)?);
            let net: RectifierNetwork = load(&network, str::parse)?;
            let report = if sum {
                verify_direct_product_sum(&k, &m, &net)?
            } else {
                verify_direct_product(&k, &m, &net)?
            };
            out = if csv { report.to_csv() } else { report.to_text() };
            if !report.holds() {
                print!("{out}");
                return Err(Failure::Invalid("direct-product chain does not hold".into()));
            }
        }
    }
    Ok(out)
}

fn bounds(args: BoundsArgs) -> Outcome {
    let mut out = String::new();
    let b = args.budgets;
    if let Some(path) = &args.matrix {
        let a = load_matrix(path)?;
        let (m, n) = a.dims();
        let _ = writeln!(out, "dims {m} {n}");
        let _ = writeln!(out, "ones {}", a.ones_count());
        if m == n && m >= 2 && a == triangular(n)? {
            let s: usize = (1..n).map(|t| t.ilog2() as usize + 2).sum();
            let _ = writeln!(out, "s(n) {s}");
        }
        enumerate_maximal_rectangles_with_budget(&a, b.max_rects)?;
        let (rk, _) = solve_dual(&a, false)?;
        let _ = writeln!(out, "rk_star {rk}");
        let (lp, _) = solve_dual(&a, true)?;
        let _ = writeln!(out, "or_lp {lp}");
        // best density bound over small forbidden shapes
        let mut best: Option<(Q, usize, usize)> = None;
        for k in 1..=m.min(4) {
            for l in 1..=n.min(4) {
                match rectcover::exact::nechiporuk_bound_with_budget(&a, k, l, b.max_nodes) {
                    Ok(v) if best.as_ref().is_none_or(|(w, _, _)| v > *w) => best = Some((v, k, l)),
                    Ok(_) | Err(Error::DenseWitness { .. }) => {}
                    Err(e) => return Err(e.into()),
                }
            }
        }
        if let Some((v, k, l)) = best {
            let _ = writeln!(out, "nechiporuk {v} (k={k}, l={l})");
        }
        let r = exact_or2_with_budget(&a, b.bb_budget)?;
        let _ = writeln!(out, "or2 {}", r.value);
        let _ = writeln!(out, "or2_lower_bound {}", r.lower_bound);
        let _ = writeln!(out, "optimal {}", r.optimal);
        if !r.optimal {
            print!("{out}");
            return Err(Failure::Budget(format!("search stopped after {} nodes", r.nodes)));
        }
    } else if let Some(v) = &args.kneser {
        let (k, x, y) = (v[0], v[1], v[2]);
        let (x, y) = (x.max(y), x.min(y));
        let gamma = block_density(k, x, y)?;
        let units = rectcover::greedy::binomial(k, x) * rectcover::greedy::binomial(k - x, y);
        let units: usize = units
            .try_into()
            .map_err(|_| Failure::Invalid("block too large".into()))?;
        let mu = mu_star(k, x, y)?;
        let _ = writeln!(out, "block {k} {x} {y}");
        let _ = writeln!(out, "ones {units}");
        let _ = writeln!(out, "gamma {gamma}");
        let _ = writeln!(out, "greedy_bound {}", greedy_bound(&gamma, units)?);
        let _ = writeln!(out, "mu_star {mu}");
        let _ = writeln!(out, "lp_lower_bound {}", mu * Q::from_integer(units.into()));
        match f_value(k, x, y) {
            Ok(f) => {
                let _ = writeln!(out, "f {f}");
            }
            Err(Error::Parity(_)) => {}
            Err(e) => return Err(e.into()),
        }
    } else if let Some(v) = &args.kneser_d {
        let _ = writeln!(out, "d {}", kneser_d(v[0], v[1])?);
    } else if args.entropy {
        let (alpha, value) = entropy_exponent();
        let _ = writeln!(out, "alpha_star {}", sig9(alpha));
        let _ = writeln!(out, "value {}", sig9(value));
    } else {
        return Err(Failure::Invalid(
            "bounds needs one of --matrix, --kneser, --kneser-d, --entropy".into(),
        ));
    }
    Ok(out)
}

fn language(l: &LanguageArgs) -> std::result::Result<TwoLetterLanguage, Failure> {
    match (&l.family, &l.language) {
        (Some(Family::Ln), _) => Ok(TwoLetterLanguage::triangular(l.n.expect("required by clap"))?),
        (None, Some(p)) => load(p, str::parse),
        (None, None) => Err(Failure::Invalid("give --family Ln <n> or --language <file>".into())),
    }
}

fn regex(what: RegexCmd) -> Outcome {
    let mut out = String::new();
    match what {
        RegexCmd::Emit { lang, method } => {
            let l = language(&lang)?;
            match method {
                RegexMethod::Dc => {
                    let (m, n) = l.alphabet_sizes();
                    if m != n || l != TwoLetterLanguage::triangular(n)? {
                        return Err(Failure::Invalid("the halving construction needs L_n".into()));
                    }
                    let _ = writeln!(out, "{}", divide_and_conquer_regex(n)?);
                }
                RegexMethod::Exact => {
                    let r = optimal_regex_length_with_budget(&l, lang.bb_budget)?;
                    let _ = writeln!(out, "{}", r.regex);
                    if !r.exact {
                        print!("{out}");
                        return Err(Failure::Budget(
                            "search budget exhausted; expression may not be shortest".into(),
                        ));
                    }
                }
            }
        }
        RegexCmd::Length { lang, nfa } => {
            let l = language(&lang)?;
            if nfa {
                let s = nfa_sizes_with_budget(&l, lang.bb_budget)?;
                let _ = writeln!(out, "{}", s.eps_free_size);
                let _ = writeln!(out, "eps_free_nfa {}", s.eps_free_size);
                let _ = writeln!(out, "eps_nfa_upper {}", s.eps_upper);
                if !s.eps_free_exact {
                    print!("{out}");
                    return Err(Failure::Budget(
                        "search budget exhausted; length is an upper bound".into(),
                    ));
                }
            } else {
                let r = optimal_regex_length_with_budget(&l, lang.bb_budget)?;
                let _ = writeln!(out, "{}", r.length);
                if !r.exact {
                    print!("{out}");
                    return Err(Failure::Budget(
                        "search budget exhausted; length is an upper bound".into(),
                    ));
                }
            }
        }
    }
    Ok(out)
}

fn table(args: TableArgs) -> Outcome {
    let mut out = String::new();
    if args.blocks {
        out.push_str(REPORT_HEADER);
        out.push('\n');
        for k in 1..=args.k_max {
            let csv = report_csv(k)?;
            for line in csv.lines().skip(1) {
                out.push_str(line);
                out.push('\n');
            }
        }
    } else {
        out.push_str("k,n,cover_cost,exponent\n");
        for k in 1..=args.k_max {
            let c = disjointness_full_cover(k)?.cost();
            let _ = writeln!(out, "{k},{},{c},{}", 1usize << k, sig9((c as f64).log2() / k as f64));
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("budget exceeded: {msg}");
            ExitCode::from(2)
        }
    }
}
