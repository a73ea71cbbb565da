//! Subcommand definitions and handlers.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nlbox_core::compile::{
    circuit_to_nlb, compile_any, oneway_from_and, synth_rank, synth_vandam, Compiler,
    CompilerReport, DistributedCircuit,
};
use nlbox_core::correlations::{rt_trials, CorrelationMatrix};
use nlbox_core::gf2::{eps_rank, EpsRank, EpsRankQuery};
use nlbox_core::library::{
    chsh_classical_optimum, chsh_nlb_success, disj_det_protocol, disj_rand_parallel, disj_table,
    ip_protocol, ip_table, vandam_protocol,
};
use nlbox_core::par::{self, Mode};
use nlbox_core::protocol::{
    error_profile, exec_exact, nonsignaling_audit, privacy_audit_and, privacy_audit_ot,
    sample_with, self_error_profile, validate_any, AnyProtocol, ErrorProfile, Exec, Protocol,
    ProtocolFile, ProtocolMixture,
};
use nlbox_core::rational::{format_prob, parse_prob, to_big};
use nlbox_core::seed::trial_rng;
use nlbox_core::{BitMatrix, Prob, TruthTable};

use crate::report::{sha256_hex, violations, CliError, CliResult, Report};

#[derive(Parser, Debug)]
#[command(
    name = "nlbox",
    version,
    about = "Protocols over non-local boxes, oblivious transfer and secure AND"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// GF(2) rank of a truth table.
    Rank(TableArg),
    /// Rank-r factorization of a truth table.
    Factorize(TableArg),
    /// ε-approximate GF(2) rank of a truth table or correlation matrix.
    Epsrank(EpsrankArgs),
    /// Synthesize a parallel NLB protocol for a function.
    Synth(SynthArgs),
    /// Compile a protocol into another resource model.
    Compile(CompileArgs),
    /// Execute a protocol exactly or by seeded sampling.
    Exec(ExecArgs),
    /// Audit a protocol.
    Audit(AuditArgs),
    /// Emit a library protocol.
    Lib(LibArgs),
    /// Three-box simulation of random two-outcome measurements.
    Rt(RtArgs),
    /// Exhaustive synthesis check over every function on 2×2 input bits.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct TableArg {
    /// Truth-table file.
    #[arg(short = 'f', long = "function")]
    function: PathBuf,
}

#[derive(Args, Debug)]
struct OutArg {
    /// Write the protocol here instead of standard output.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EpsrankArgs {
    #[arg(
        short = 'f',
        long = "function",
        conflicts_with = "corr",
        required_unless_present = "corr"
    )]
    function: Option<PathBuf>,
    /// Correlation-matrix file (`corr r c` then rational entries).
    #[arg(long)]
    corr: Option<PathBuf>,
    /// Approximation radius, e.g. `1/4`.
    #[arg(long, default_value = "0")]
    eps: String,
    /// Largest rank to try; defaults to min(rows, cols).
    #[arg(long)]
    tmax: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Rank,
    Vandam,
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[arg(short = 'f', long = "function")]
    function: PathBuf,
    #[arg(long, value_enum, default_value = "rank")]
    method: Method,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum From {
    Oneway,
    Twoway,
    Circuit,
    OrderedToOt,
    AndFromOneway,
    OnewayFromAnd,
}

#[derive(Args, Debug)]
struct CompileArgs {
    /// Source model. Omit to only apply the normalization flags.
    #[arg(long, value_enum)]
    from: Option<From>,
    /// Source protocol (or circuit) file.
    #[arg(short = 'i', long = "input")]
    input: PathBuf,
    /// Function the source computes; required by `oneway-from-and`.
    #[arg(short = 'f', long = "function")]
    function: Option<PathBuf>,
    /// Remove linearly dependent boxes from a parallel protocol.
    #[arg(long)]
    independence_reduce: bool,
    /// Rewrite an exact NLB protocol into strict XOR form.
    #[arg(long)]
    xor_normalize: bool,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("how").required(true).args(["exact", "samples"]))]
struct ExecArgs {
    #[arg(short = 'i', long = "input")]
    input: PathBuf,
    /// Reference function; without it errors are against the majority parity.
    #[arg(short = 'f', long = "function")]
    function: Option<PathBuf>,
    #[arg(long)]
    exact: bool,
    /// Samples per input pair.
    #[arg(long, requires = "seed")]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Restrict to one input pair and print its distribution.
    #[arg(short = 'x', requires = "y")]
    x: Option<usize>,
    #[arg(short = 'y', requires = "x")]
    y: Option<usize>,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("which").required(true).args(["nonsignaling", "privacy_and", "privacy_ot"]))]
struct AuditArgs {
    #[arg(short = 'i', long = "input")]
    input: PathBuf,
    #[arg(short = 'f', long = "function")]
    function: Option<PathBuf>,
    #[arg(long)]
    nonsignaling: bool,
    #[arg(long, requires = "function")]
    privacy_and: bool,
    #[arg(long)]
    privacy_ot: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LibName {
    Ip,
    DisjDet,
    DisjRand,
    Chsh,
    Vandam,
}

#[derive(Args, Debug)]
struct LibArgs {
    #[arg(value_enum)]
    name: LibName,
    #[arg(short = 'n', long, default_value_t = 2)]
    n: usize,
    /// Error parameter of `disj-rand`.
    #[arg(short = 'p', long, default_value = "1/3")]
    p: String,
    /// Function for `vandam`.
    #[arg(short = 'f', long = "function")]
    function: Option<PathBuf>,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args, Debug)]
struct RtArgs {
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    sequential: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    sequential: bool,
}

fn mode(sequential: bool) -> Mode {
    if sequential {
        Mode::Sequential
    } else {
        Mode::Parallel
    }
}

/// File contents plus their SHA-256, recorded in the report.
fn read(report: &mut Report, key: &str, path: &Path) -> CliResult<String> {
    let bytes = fs::read(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    report.put(format!("{key}_sha256"), sha256_hex(&bytes));
    String::from_utf8(bytes)
        .map_err(|_| CliError::Validation(format!("{}: not UTF-8", path.display())))
}

fn load_table(report: &mut Report, path: &Path) -> CliResult<TruthTable> {
    let text = read(report, "function", path)?;
    let t: TruthTable = text.parse()?;
    report.put("nx", t.nx()).put("ny", t.ny());
    Ok(t)
}

fn load_protocol(report: &mut Report, path: &Path) -> CliResult<(AnyProtocol, String)> {
    let text = read(report, "input", path)?;
    let file = ProtocolFile::parse(&text)?;
    validate_any(&file.protocol).map_err(violations)?;
    let kind = file.protocol.kind().map_or("empty", |k| k.name());
    report.put("input_kind", kind);
    Ok((file.protocol, sha256_hex(text.as_bytes())))
}

fn single(p: AnyProtocol, what: &str) -> CliResult<Protocol> {
    let mut p = p;
    if p.components.len() != 1 {
        return Err(CliError::Validation(format!(
            "{what} expects a single protocol, not a mixture"
        )));
    }
    Ok(p.components.pop().expect("one component").1)
}

fn prob_arg(s: &str, name: &str) -> CliResult<Prob> {
    parse_prob(s).map_err(|e| CliError::Usage(format!("--{name} {s:?}: {e}")))
}

fn put_profile(report: &mut Report, e: &ErrorProfile) {
    report
        .put("max_error", format_prob(&e.worst))
        .put("exact", e.is_exact());
}

/// The protocol goes to `-o` if given; otherwise it follows the report on
/// standard output, with the report lines commented so the whole stream
/// still parses as a protocol file.
fn emit(
    report: &mut Report,
    p: AnyProtocol,
    provenance: String,
    out: &OutArg,
) -> CliResult<String> {
    let text = ProtocolFile::with_provenance(p, provenance).to_text();
    match &out.output {
        Some(path) => {
            fs::write(path, &text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            report
                .put("output", path.display())
                .put("output_sha256", sha256_hex(text.as_bytes()));
            Ok(report.render(""))
        }
        None => Ok(report.render("# ") + &text),
    }
}

pub fn run(cli: Cli) -> Result<String, (String, CliError)> {
    let mut report = Report::default();
    let result = match cli.command {
        Command::Rank(a) => rank(&mut report, a),
        Command::Factorize(a) => factorize(&mut report, a),
        Command::Epsrank(a) => epsrank(&mut report, a),
        Command::Synth(a) => synth(&mut report, a),
        Command::Compile(a) => compile(&mut report, a),
        Command::Exec(a) => exec(&mut report, a),
        Command::Audit(a) => audit(&mut report, a),
        Command::Lib(a) => lib(&mut report, a),
        Command::Rt(a) => rt(&mut report, a),
        Command::Sweep(a) => sweep(&mut report, a),
    };
    result.map_err(|e| {
        report.put("status", "fail");
        (report.render(""), e)
    })
}

fn rank(r: &mut Report, a: TableArg) -> CliResult<String> {
    *r = Report::new("rank");
    let f = load_table(r, &a.function)?;
    r.put("rank", f.rank());
    Ok(r.render(""))
}

fn bits(v: &[bool]) -> String {
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn factorize(r: &mut Report, a: TableArg) -> CliResult<String> {
    *r = Report::new("factorize");
    let f = load_table(r, &a.function)?;
    let fac = f.factorize();
    r.put("rank", fac.rank);
    for (i, (p, q)) in fac.row_factors.iter().zip(&fac.col_factors).enumerate() {
        r.put(format!("p{}", i + 1), bits(p))
            .put(format!("q{}", i + 1), bits(q));
    }
    let ok = fac.reconstruct(f.rows(), f.cols()) == *f.matrix();
    r.put("reconstructs", ok);
    Ok(r.render(""))
}

fn epsrank(r: &mut Report, a: EpsrankArgs) -> CliResult<String> {
    *r = Report::new("epsrank");
    let eps = to_big(&prob_arg(&a.eps, "eps")?);
    let query = if let Some(path) = &a.function {
        let f = load_table(r, path)?;
        EpsRankQuery::boolean(&f, eps, a.tmax.unwrap_or(f.rows().min(f.cols())))
    } else {
        let path = a.corr.as_ref().expect("clap enforces one input");
        let c: CorrelationMatrix = read(r, "corr", path)?
            .parse()
            .map_err(|e| CliError::Validation(format!("correlation matrix: {e}")))?;
        let target = c.entries().iter().map(to_big).collect();
        EpsRankQuery::rational(
            c.rows(),
            c.cols(),
            target,
            eps,
            a.tmax.unwrap_or(c.rows().min(c.cols())),
        )
    };
    r.put("eps", &query.eps).put("tmax", query.tmax);
    match eps_rank(&query)? {
        EpsRank::Value { t, witness } => {
            r.put("eps_rank", t)
                .put("witness_components", witness.components.len());
            for (i, (w, m)) in witness.components.iter().enumerate() {
                r.put(
                    format!("witness{}", i + 1),
                    format!("{w} rank={} bits={}", m.rank(), matrix_bits(m)),
                );
            }
        }
        EpsRank::ExceedsTmax => {
            r.put("eps_rank", format!(">{}", query.tmax));
        }
    }
    Ok(r.render(""))
}

fn matrix_bits(m: &BitMatrix) -> String {
    (0..m.rows())
        .map(|x| bits(&m.row(x)))
        .collect::<Vec<_>>()
        .join("/")
}

fn synth(r: &mut Report, a: SynthArgs) -> CliResult<String> {
    *r = Report::new("synth");
    let f = load_table(r, &a.function)?;
    let (name, p) = match a.method {
        Method::Rank => ("synth-rank", synth_rank(&f)),
        Method::Vandam => ("synth-vandam", synth_vandam(&f)),
    };
    r.put("method", name)
        .put("rank", f.rank())
        .put("boxes", p.boxes());
    put_profile(r, &error_profile(&p, &f)?);
    let src = r_hash(&a.function)?;
    emit(
        r,
        ProtocolMixture::single(Protocol::from(p)),
        format!("{name} source=sha256:{src}"),
        &a.out,
    )
}

fn r_hash(path: &Path) -> CliResult<String> {
    fs::read(path)
        .map(|b| sha256_hex(&b))
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn put_compile(r: &mut Report, c: &CompilerReport) {
    r.put("compiler", c.compiler)
        .put("source_size", c.source_size)
        .put("target_size", c.target_size);
    r.put(
        "bound",
        c.bound.map_or("none".to_string(), |b| b.to_string()),
    );
    r.put("within_bound", c.within_bound());
}

fn compile(r: &mut Report, a: CompileArgs) -> CliResult<String> {
    *r = Report::new("compile");
    let mut names = Vec::new();
    let (mut p, source) = match a.from {
        Some(From::Circuit) => {
            let text = read(r, "input", &a.input)?;
            let c: DistributedCircuit = text.parse()?;
            let o = circuit_to_nlb(&c)?;
            r.put("compiler", "circuit-to-nlb")
                .put("circuit_boxes", c.box_count())
                .put("target_size", o.boxes());
            names.push("circuit-to-nlb");
            (
                ProtocolMixture::single(Protocol::from(o)),
                sha256_hex(text.as_bytes()),
            )
        }
        Some(From::OnewayFromAnd) => {
            let (p, h) = load_protocol(r, &a.input)?;
            let path = a
                .function
                .as_ref()
                .ok_or_else(|| CliError::Usage("oneway-from-and needs -f".into()))?;
            let f = load_table(r, path)?;
            let Protocol::And(and) = single(p, "oneway-from-and")? else {
                return Err(CliError::Validation(
                    "oneway-from-and expects an AND protocol".into(),
                ));
            };
            let o = oneway_from_and(&and, &f)?;
            r.put("compiler", "oneway-from-and")
                .put("source_size", and.gates())
                .put("target_size", o.bits);
            names.push("oneway-from-and");
            (ProtocolMixture::single(Protocol::from(o)), h)
        }
        Some(from) => {
            let (p, h) = load_protocol(r, &a.input)?;
            let c = match from {
                From::Oneway => Compiler::OneWay,
                From::Twoway => Compiler::TwoWay,
                From::OrderedToOt => Compiler::OrderedToOt,
                From::AndFromOneway => Compiler::AndFromOneWay,
                From::Circuit | From::OnewayFromAnd => unreachable!(),
            };
            let (out, rep) = compile_any(&p, c)?;
            put_compile(r, &rep);
            names.push(c.name());
            (out, h)
        }
        None => load_protocol(r, &a.input)?,
    };
    for (flag, c) in [
        (a.independence_reduce, Compiler::IndependenceReduce),
        (a.xor_normalize, Compiler::XorNormalize),
    ] {
        if flag {
            let (out, rep) = compile_any(&p, c)?;
            r.put(format!("{}_boxes", c.name()), rep.target_size);
            names.push(c.name());
            p = out;
        }
    }
    if names.is_empty() {
        return Err(CliError::Usage(
            "nothing to do: give --from or a normalization flag".into(),
        ));
    }
    validate_any(&p).map_err(violations)?;
    if let Some(path) = &a.function {
        if a.from != Some(From::OnewayFromAnd) {
            let f = load_table(r, path)?;
            put_profile(r, &error_profile(&p, &f)?);
        }
    }
    r.put("output_kind", p.kind().map_or("empty", |k| k.name()))
        .put("output_size", p.size());
    emit(
        r,
        p,
        format!("{} source=sha256:{source}", names.join("+")),
        &a.out,
    )
}

fn exec(r: &mut Report, a: ExecArgs) -> CliResult<String> {
    *r = Report::new("exec");
    let (p, _) = load_protocol(r, &a.input)?;
    let f = a
        .function
        .as_ref()
        .map(|path| load_table(r, path))
        .transpose()?;
    p.check()?;
    let (xs, ys) = p.domains();
    if let Some(f) = &f {
        if (f.x_size(), f.y_size()) != (xs, ys) {
            return Err(CliError::Validation(format!(
                "function is {}x{}, protocol is {xs}x{ys}",
                f.x_size(),
                f.y_size()
            )));
        }
    }
    r.put("size", p.size()).put(
        "reference",
        if f.is_some() { "function" } else { "majority" },
    );
    if let (Some(x), Some(y)) = (a.x, a.y) {
        r.put("x", x).put("y", y);
        if a.exact {
            let d = exec_exact(&p, x, y)?;
            for (ab, (va, vb)) in [(false, false), (false, true), (true, false), (true, true)]
                .into_iter()
                .enumerate()
            {
                r.put(
                    format!("p{}{}", ab >> 1, ab & 1),
                    format_prob(&d.get(va, vb)),
                );
            }
            r.put("parity_one", format_prob(&d.parity_one()));
        } else {
            let seed = a.seed.expect("clap requires --seed");
            let n = a.samples.expect("clap group");
            if x >= xs || y >= ys {
                return Err(CliError::Usage(format!(
                    "input ({x},{y}) outside {xs}x{ys}"
                )));
            }
            let mut rng = trial_rng(seed, 0);
            let ones = (0..n)
                .filter(|_| {
                    let s = sample_with(&p, x, y, &mut rng);
                    s.a ^ s.b
                })
                .count();
            r.put("seed", seed)
                .put("samples", n)
                .put("parity_one_count", ones);
        }
        return Ok(r.render(""));
    }
    if a.exact {
        let e = match &f {
            Some(f) => error_profile(&p, f)?,
            None => self_error_profile(&p)?,
        };
        put_profile(r, &e);
        return Ok(r.render(""));
    }
    let seed = a.seed.expect("clap requires --seed");
    let n = a.samples.expect("clap group");
    let counts = par::map_range(Mode::Parallel, xs * ys, |i| {
        let (x, y) = (i / ys, i % ys);
        let mut rng = trial_rng(seed, i as u64);
        (0..n)
            .filter(|_| {
                let s = sample_with(&p, x, y, &mut rng);
                s.a ^ s.b
            })
            .count() as u64
    });
    let wrong: Vec<u64> = match &f {
        Some(f) => counts
            .iter()
            .enumerate()
            .map(|(i, &c)| if f.eval(i / ys, i % ys) { n - c } else { c })
            .collect(),
        None => counts.iter().map(|&c| c.min(n - c)).collect(),
    };
    let worst = wrong.iter().copied().max().unwrap_or(0);
    let total: u64 = wrong.iter().sum();
    r.put("seed", seed).put("samples_per_input", n);
    r.put(
        "max_error_estimate",
        format_prob(&Prob::new(worst as i128, n.max(1) as i128)),
    );
    r.put(
        "mean_error_estimate",
        format_prob(&Prob::new(
            total as i128,
            (n * (xs * ys) as u64).max(1) as i128,
        )),
    );
    Ok(r.render(""))
}

fn audit(r: &mut Report, a: AuditArgs) -> CliResult<String> {
    *r = Report::new("audit");
    let (p, _) = load_protocol(r, &a.input)?;
    let (name, result) = if a.nonsignaling {
        ("nonsignaling", nonsignaling_audit(&p))
    } else if a.privacy_ot {
        ("privacy-ot", privacy_audit_ot(&p))
    } else {
        let f = load_table(r, a.function.as_ref().expect("clap requires -f"))?;
        let Protocol::And(and) = single(p, "privacy-and")? else {
            return Err(CliError::Validation(
                "privacy-and expects an AND protocol".into(),
            ));
        };
        ("privacy-and", privacy_audit_and(&and, &f))
    };
    r.put("audit", name);
    match result {
        Ok(()) => {
            r.put("verdict", "pass");
            Ok(r.render(""))
        }
        Err(e) => {
            let e = CliError::from(e);
            if matches!(e, CliError::Audit(_)) {
                r.put("verdict", "fail");
            }
            Err(e)
        }
    }
}

fn lib(r: &mut Report, a: LibArgs) -> CliResult<String> {
    *r = Report::new("lib");
    let (name, p, f) = match a.name {
        LibName::Chsh => {
            let (best, s) = chsh_classical_optimum();
            r.put("name", "chsh")
                .put("classical_optimum", format_prob(&best));
            r.put(
                "classical_strategy",
                format!("a={} b={}", bits(&s.a_map), bits(&s.b_map)),
            );
            r.put("nlb_success", format_prob(&chsh_nlb_success()?));
            return Ok(r.render(""));
        }
        LibName::Ip => (
            "ip",
            ProtocolMixture::single(Protocol::from(ip_protocol(a.n)?)),
            ip_table(a.n),
        ),
        LibName::DisjDet => (
            "disj-det",
            ProtocolMixture::single(Protocol::from(disj_det_protocol(a.n)?)),
            disj_table(a.n),
        ),
        LibName::DisjRand => {
            let p = prob_arg(&a.p, "p")?;
            r.put("p", format_prob(&p));
            (
                "disj-rand",
                disj_rand_parallel(a.n, p)?.into_any(),
                disj_table(a.n),
            )
        }
        LibName::Vandam => {
            let path = a
                .function
                .as_ref()
                .ok_or_else(|| CliError::Usage("vandam needs -f".into()))?;
            let f = load_table(r, path)?;
            (
                "vandam",
                ProtocolMixture::single(Protocol::from(vandam_protocol(&f))),
                f,
            )
        }
    };
    r.put("name", name);
    if !matches!(a.name, LibName::Vandam) {
        r.put("n", a.n);
    }
    r.put("boxes", p.size());
    put_profile(r, &error_profile(&p, &f)?);
    let provenance = format!(
        "lib-{name} function=sha256:{}",
        sha256_hex(f.to_text().as_bytes())
    );
    emit(r, p, provenance, &a.out)
}

fn rt(r: &mut Report, a: RtArgs) -> CliResult<String> {
    *r = Report::new("rt");
    let s = rt_trials(a.dim, a.trials, a.seed, mode(a.sequential))
        .map_err(|e| CliError::Usage(e.to_string()))?;
    r.put("dim", s.dim)
        .put("seed", a.seed)
        .put("trials", s.trials);
    r.put("mean_a", format!("{:.6}", s.mean_a()))
        .put("mean_b", format!("{:.6}", s.mean_b()));
    r.put("mean_ab", format!("{:.6}", s.mean_ab()))
        .put("tolerance", format!("{:.6}", s.tolerance()));
    r.put("coupled_violations", s.violations)
        .put("box_count_violations", s.box_count_violations);
    let ok = s.violations == 0
        && s.box_count_violations == 0
        && s.mean_a().abs() <= s.tolerance()
        && s.mean_b().abs() <= s.tolerance();
    r.put("verdict", if ok { "pass" } else { "fail" });
    if ok {
        Ok(r.render(""))
    } else {
        Err(CliError::Audit(
            "three-box simulation disagrees with the message protocol".into(),
        ))
    }
}

fn sweep(r: &mut Report, a: SweepArgs) -> CliResult<String> {
    *r = Report::new("sweep");
    let results = par::map_range(mode(a.sequential), 1 << 16, |i| {
        let f = TruthTable::from_index(2, 2, i as u64);
        let p = synth_rank(&f);
        let exact = error_profile(&p, &f).map(|e| e.is_exact()).unwrap_or(false);
        (f.rank(), p.boxes() == f.rank() && exact)
    });
    let mut by_rank = [0usize; 5];
    for (rank, _) in &results {
        by_rank[*rank] += 1;
    }
    let failures = results.iter().filter(|(_, ok)| !ok).count();
    r.put("functions", results.len());
    for (k, c) in by_rank.iter().enumerate() {
        r.put(format!("rank{k}"), c);
    }
    r.put("failures", failures);
    r.put("verdict", if failures == 0 { "pass" } else { "fail" });
    if failures == 0 {
        Ok(r.render(""))
    } else {
        Err(CliError::Audit(format!(
            "{failures} functions not synthesized exactly"
        )))
    }
}
