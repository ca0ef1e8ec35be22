mod report;
mod svg;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use jordanlens::equivalence::{build_swap_unitary, decide_equivalent};
use jordanlens::numrange::{product_disks, product_range, sum_range, DEFAULT_SAMPLES};
use jordanlens::principal::{jordan_frames, principal_angles};
use jordanlens::spectra::{
    analytic_eigenpairs, build_operator, numerical_spectrum, spectrum_mismatch, OperatorKind,
};
use jordanlens::subspace::{five_part_decompose, synthesize_pair, ProjectorPair, Subspace};
use jordanlens::verify::{corpus, verify_pair, VerifyReport};
use jordanlens::{io as mio, Error};

use report::{fmt_angle, fmt_complex, fmt_real};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "jordanlens",
    version,
    about = "Principal angles and numerical ranges of subspace pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Rank and angle classification tolerance.
    #[arg(long, global = true, env = "JORDANLENS_TOL", default_value_t = jordanlens::DEFAULT_TOL)]
    tol: f64,

    /// Boundary samples per disk and support directions of the oracle.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,

    /// Seed for commands that draw random numbers.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write the result here instead of standard output.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Print angles in degrees.
    #[arg(long, global = true)]
    degrees: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Svg,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Principal angles, Dixmier and Friedrichs angles, classification counts.
    Angles { m: PathBuf, n: PathBuf },
    /// Dimensions of the five-part splitting.
    Decompose { m: PathBuf, n: PathBuf },
    /// Jordan frames (u, v, s, t) for every interior angle.
    Frames { m: PathBuf, n: PathBuf },
    /// Decide unitary equivalence of (M1, N1) and (M2, N2).
    Equiv {
        m1: PathBuf,
        n1: PathBuf,
        m2: PathBuf,
        n2: PathBuf,
    },
    /// Unitary mapping (M, N) onto (M⊥, N⊥), in the matrix exchange format.
    SwapUnitary { m: PathBuf, n: PathBuf },
    /// Closed-form eigenpairs of one operator with residuals.
    Spectrum {
        m: PathBuf,
        n: PathBuf,
        /// SUM, DIFF, PQ, QP, ANTICOMM or COMM.
        #[arg(long, value_parser = parse_kind)]
        kind: OperatorKind,
    },
    /// Numerical range of P+Q.
    NumrangeSum { m: PathBuf, n: PathBuf },
    /// Numerical range of PQ as a convex polygon.
    NumrangeProduct { m: PathBuf, n: PathBuf },
    /// Run the invariant suite on a pair, or on a seeded corpus with --corpus.
    Verify {
        #[arg(num_args = 0..=2)]
        paths: Vec<PathBuf>,
        /// Number of synthesized pairs to check instead of reading files.
        #[arg(long)]
        corpus: Option<usize>,
    },
    /// Synthesize a pair with prescribed angles and intersection dimensions.
    RandomPair {
        m_out: PathBuf,
        n_out: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        angles: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        a: usize,
        #[arg(long, default_value_t = 0)]
        b: usize,
        #[arg(long, default_value_t = 0)]
        c: usize,
        #[arg(long, default_value_t = 0)]
        d: usize,
    },
}

fn parse_kind(s: &str) -> Result<OperatorKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Outcome classes mapped onto exit codes.
#[derive(Debug)]
enum Failure {
    /// Bad arguments, unreadable or malformed input, preconditions not met.
    Usage(String),
    /// A check ran and did not hold.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence(_) | Error::Inconsistent(_) => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = validate(&cli) {
        Cli::command()
            .error(clap::error::ErrorKind::ArgumentConflict, msg)
            .exit();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            if !msg.is_empty() {
                eprintln!("jordanlens: {msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("jordanlens: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Argument checks that clap cannot express, done before reading any input.
fn validate(cli: &Cli) -> Result<(), String> {
    if !(cli.tol.is_finite() && cli.tol > 0.0 && cli.tol < 0.1) {
        return Err(format!("--tol must lie in (0, 0.1), got {}", cli.tol));
    }
    if cli.samples < 3 {
        return Err("--samples must be at least 3".into());
    }
    let allowed: &[Format] = match &cli.command {
        Command::NumrangeProduct { .. } => &[Format::Text, Format::Csv, Format::Svg, Format::Json],
        _ => &[Format::Text, Format::Json],
    };
    if !allowed.contains(&cli.format) {
        return Err(format!(
            "--format {:?} is not available for this command",
            cli.format
        )
        .to_lowercase());
    }
    if let Command::Verify { paths, corpus } = &cli.command {
        match (paths.len(), corpus) {
            (2, None) | (0, Some(_)) => {}
            (_, Some(_)) => {
                return Err("verify takes either two input files or --corpus, not both".into())
            }
            (k, None) => return Err(format!("verify needs two input files, got {k}")),
        }
    }
    Ok(())
}

fn read_subspace(path: &Path, tol: f64) -> Result<Subspace, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let raw = mio::parse_matrix_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Subspace::orthonormalize(&raw, tol)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_pair(m: &Path, n: &Path, tol: f64) -> Result<(Subspace, Subspace), Failure> {
    let pair = (read_subspace(m, tol)?, read_subspace(n, tol)?);
    if pair.0.ambient_dim() != pair.1.ambient_dim() {
        return Err(Error::DimensionMismatch {
            left: pair.0.ambient_dim(),
            right: pair.1.ambient_dim(),
        }
        .into());
    }
    Ok(pair)
}

fn emit(cli: &Cli, body: &str) -> Outcome {
    match &cli.output {
        Some(path) => {
            fs::write(path, body).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_json(cli: &Cli, command: &str, mut value: Value) -> Outcome {
    if let Value::Object(map) = &mut value {
        map.insert("schema_version".into(), json!(SCHEMA_VERSION));
        map.insert("command".into(), json!(command));
    }
    let mut text = serde_json::to_string_pretty(&value).expect("JSON values always serialize");
    text.push('\n');
    emit(cli, &text)
}

fn run(cli: &Cli) -> Outcome {
    let tol = cli.tol;
    match &cli.command {
        Command::Angles { m, n } => angles(cli, &read_pair(m, n, tol)?),
        Command::Decompose { m, n } => decompose(cli, &read_pair(m, n, tol)?),
        Command::Frames { m, n } => frames(cli, &read_pair(m, n, tol)?),
        Command::Equiv { m1, n1, m2, n2 } => {
            let p1 = read_pair(m1, n1, tol)?;
            let p2 = read_pair(m2, n2, tol)?;
            equiv(cli, &p1, &p2)
        }
        Command::SwapUnitary { m, n } => swap_unitary(cli, &read_pair(m, n, tol)?),
        Command::Spectrum { m, n, kind } => spectrum(cli, &read_pair(m, n, tol)?, *kind),
        Command::NumrangeSum { m, n } => numrange_sum(cli, &read_pair(m, n, tol)?),
        Command::NumrangeProduct { m, n } => numrange_product(cli, &read_pair(m, n, tol)?),
        Command::Verify {
            paths,
            corpus: None,
        } => {
            let pair = read_pair(&paths[0], &paths[1], tol)?;
            verify_one(cli, &pair)
        }
        Command::Verify {
            corpus: Some(count),
            ..
        } => verify_corpus(cli, *count),
        Command::RandomPair {
            m_out,
            n_out,
            angles,
            a,
            b,
            c,
            d,
        } => random_pair(cli, m_out, n_out, angles, [*a, *b, *c, *d]),
    }
}

fn angles(cli: &Cli, (m, n): &(Subspace, Subspace)) -> Outcome {
    let dec = principal_angles(m, n, cli.tol)?;
    let unit = if cli.degrees { "deg" } else { "rad" };
    if cli.format == Format::Json {
        let conv = |t: f64| if cli.degrees { t.to_degrees() } else { t };
        return emit_json(
            cli,
            "angles",
            json!({
                "unit": unit,
                "dim_m": m.dim(),
                "dim_n": n.dim(),
                "ambient_dim": m.ambient_dim(),
                "angles": dec.angles.iter().map(|&t| conv(t)).collect::<Vec<_>>(),
                "dixmier": dec.dixmier().map(conv),
                "friedrichs": dec.friedrichs().map(conv),
                "n_zero": dec.n_zero,
                "n_interior": dec.n_interior,
                "n_right": dec.n_right,
            }),
        );
    }
    let mut out = format!(
        "dim M = {}, dim N = {}, n = {} ({unit})\n",
        m.dim(),
        n.dim(),
        m.ambient_dim()
    );
    for (k, &t) in dec.angles.iter().enumerate() {
        out.push_str(&format!(
            "theta_{} = {}\n",
            k + 1,
            fmt_angle(t, cli.degrees)
        ));
    }
    let opt = |x: Option<f64>| x.map_or("undefined".to_string(), |t| fmt_angle(t, cli.degrees));
    out.push_str(&format!("dixmier = {}\n", opt(dec.dixmier())));
    out.push_str(&format!("friedrichs = {}\n", opt(dec.friedrichs())));
    out.push_str(&format!(
        "zero = {}, interior = {}, right = {}\n",
        dec.n_zero, dec.n_interior, dec.n_right
    ));
    emit(cli, &out)
}

fn decompose(cli: &Cli, (m, n): &(Subspace, Subspace)) -> Outcome {
    let f = five_part_decompose(m, n, cli.tol)?;
    if cli.format == Format::Json {
        return emit_json(
            cli,
            "decompose",
            json!({
                "a": f.a, "b": f.b, "c": f.c, "d": f.d, "r": f.r,
                "dim_r_part": f.r_part.dim(),
                "generic": f.is_generic(),
            }),
        );
    }
    let out = format!(
        "a = {}  dim(M∩N)\nb = {}  dim(M⊥∩N⊥)\nc = {}  dim(M∩N⊥)\nd = {}  dim(M⊥∩N)\nr = {}  (dim R = {})\ngeneric = {}\n",
        f.a,
        f.b,
        f.c,
        f.d,
        f.r,
        f.r_part.dim(),
        f.is_generic()
    );
    emit(cli, &out)
}

fn frames(cli: &Cli, (m, n): &(Subspace, Subspace)) -> Outcome {
    let fr = jordan_frames(&principal_angles(m, n, cli.tol)?);
    if cli.format == Format::Json {
        let vec_json = |v: &jordanlens::CVector| v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>();
        let items: Vec<Value> = fr
            .iter()
            .map(|f| {
                json!({
                    "theta": if cli.degrees { f.theta.to_degrees() } else { f.theta },
                    "u": vec_json(&f.u), "v": vec_json(&f.v), "s": vec_json(&f.s), "t": vec_json(&f.t),
                    "identity_defect": f.identity_defect(),
                })
            })
            .collect();
        return emit_json(
            cli,
            "frames",
            json!({ "unit": if cli.degrees { "deg" } else { "rad" }, "frames": items }),
        );
    }
    let mut out = format!("{} interior angle(s)\n", fr.len());
    for (k, f) in fr.iter().enumerate() {
        out.push_str(&format!(
            "frame {}: theta = {}\n",
            k + 1,
            fmt_angle(f.theta, cli.degrees)
        ));
        for (name, v) in [("u", &f.u), ("v", &f.v), ("s", &f.s), ("t", &f.t)] {
            let entries: Vec<String> = v.iter().map(|&z| fmt_complex(z)).collect();
            out.push_str(&format!("  {name} = [{}]\n", entries.join(", ")));
        }
        out.push_str(&format!(
            "  identity defect = {:.3e}\n",
            f.identity_defect()
        ));
    }
    emit(cli, &out)
}

fn equiv(cli: &Cli, p1: &(Subspace, Subspace), p2: &(Subspace, Subspace)) -> Outcome {
    if p1.0.ambient_dim() != p2.0.ambient_dim() {
        return Err(Error::DimensionMismatch {
            left: p1.0.ambient_dim(),
            right: p2.0.ambient_dim(),
        }
        .into());
    }
    let rep = decide_equivalent((&p1.0, &p1.1), (&p2.0, &p2.1), cli.tol)?;
    if cli.format == Format::Json {
        let dev = rep.angle_deviation;
        emit_json(
            cli,
            "equiv",
            json!({
                "equivalent": rep.equivalent,
                "dim_checks": rep.dim_checks,
                "angle_deviation": if dev.is_finite() { json!(dev) } else { Value::Null },
            }),
        )?;
    } else {
        let mut out = String::new();
        for c in &rep.dim_checks {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            out.push_str(&format!(
                "{mark} {} : {} vs {}\n",
                c.name, c.first, c.second
            ));
        }
        out.push_str(&format!(
            "angle deviation = {}\n",
            fmt_real(rep.angle_deviation)
        ));
        out.push_str(&format!("equivalent = {}\n", rep.equivalent));
        emit(cli, &out)?;
    }
    if rep.equivalent {
        Ok(())
    } else {
        Err(Failure::Check(String::new()))
    }
}

fn swap_unitary(cli: &Cli, (m, n): &(Subspace, Subspace)) -> Outcome {
    let u = build_swap_unitary(m, n, cli.tol)?;
    if cli.format == Format::Json {
        let rows: Vec<Vec<[f64; 2]>> = (0..u.nrows())
            .map(|r| {
                (0..u.ncols())
                    .map(|c| [u[(r, c)].re, u[(r, c)].im])
                    .collect()
            })
            .collect();
        return emit_json(cli, "swap-unitary", json!({ "matrix": rows }));
    }
    emit(cli, &mio::write_matrix_string(&u))
}

fn spectrum(cli: &Cli, (m, n): &(Subspace, Subspace), kind: OperatorKind) -> Outcome {
    let five = five_part_decompose(m, n, cli.tol)?;
    let fr = jordan_frames(&principal_angles(m, n, cli.tol)?);
    let pair = ProjectorPair::new(m, n)?;
    let a = build_operator(kind, &pair);
    let pairs = analytic_eigenpairs(kind, &fr, &five);
    let values: Vec<_> = pairs.iter().map(|p| p.value).collect();
    let mismatch = spectrum_mismatch(&values, &numerical_spectrum(kind, &pair)?);
    let residuals: Vec<f64> = pairs.iter().map(|p| p.relative_residual(&a)).collect();
    let max_res = residuals.iter().copied().fold(0.0, f64::max);

    if cli.format == Format::Json {
        let items: Vec<Value> = pairs
            .iter()
            .zip(&residuals)
            .map(|(p, r)| {
                json!({
                    "value": [p.value.re, p.value.im],
                    "vector": p.vector.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                    "relative_residual": r,
                })
            })
            .collect();
        return emit_json(
            cli,
            "spectrum",
            json!({
                "kind": kind.label(),
                "eigenpairs": items,
                "max_relative_residual": max_res,
                "eigensolver_mismatch": mismatch,
            }),
        );
    }
    let mut out = format!("{kind}: {} eigenpairs\n", pairs.len());
    for (p, r) in pairs.iter().zip(&residuals) {
        out.push_str(&format!(
            "lambda = {}  residual = {:.3e}\n",
            fmt_complex(p.value),
            r
        ));
    }
    out.push_str(&format!("max residual = {max_res:.3e}\n"));
    out.push_str(&format!("eigensolver mismatch = {mismatch:.3e}\n"));
    emit(cli, &out)
}

fn numrange_sum(cli: &Cli, (m, n): &(Subspace, Subspace)) -> Outcome {
    let w = sum_range(m, n)?;
    if cli.format == Format::Json {
        return emit_json(cli, "numrange-sum", json!({ "lo": w.lo, "hi": w.hi }));
    }
    emit(
        cli,
        &format!("W(P+Q) = [{}, {}]\n", fmt_real(w.lo), fmt_real(w.hi)),
    )
}

fn numrange_product(cli: &Cli, (m, n): &(Subspace, Subspace)) -> Outcome {
    let region = product_range(m, n, cli.samples, cli.tol)?;
    let disks = product_disks(&jordan_frames(&principal_angles(m, n, cli.tol)?));
    match cli.format {
        Format::Csv => emit(cli, &mio::region_to_csv(&region)),
        Format::Svg => match &cli.output {
            Some(path) => svg::emit_svg(&region, &disks, path).map_err(Failure::from),
            None => emit(cli, &svg::render_svg(&region, &disks)),
        },
        Format::Json => emit_json(
            cli,
            "numrange-product",
            json!({ "region": region, "disks": disks }),
        ),
        Format::Text => {
            let (x0, x1, y0, y1) = region.bounding_box();
            let mut out = format!(
                "{} disk(s), {} hull vertices\n",
                disks.len(),
                region.vertices.len()
            );
            for d in &disks {
                out.push_str(&format!(
                    "disk: center = {}, semi-axes = {}, {}\n",
                    fmt_complex(d.center),
                    fmt_real(d.semi_major),
                    fmt_real(d.semi_minor)
                ));
            }
            out.push_str(&format!(
                "re in [{}, {}], im in [{}, {}]\n",
                fmt_real(x0),
                fmt_real(x1),
                fmt_real(y0),
                fmt_real(y1)
            ));
            emit(cli, &out)
        }
    }
}

fn verify_text(rep: &VerifyReport) -> String {
    let mut out = String::new();
    for c in &rep.checks {
        let mark = if c.pass { "ok  " } else { "FAIL" };
        out.push_str(&format!(
            "{mark} {}: {:.3e} (limit {:.1e})\n",
            c.name, c.value, c.threshold
        ));
    }
    out
}

fn verify_one(cli: &Cli, (m, n): &(Subspace, Subspace)) -> Outcome {
    let rep = verify_pair(m, n, cli.tol, cli.samples)?;
    let pass = rep.all_pass();
    if cli.format == Format::Json {
        emit_json(cli, "verify", json!({ "pass": pass, "checks": rep.checks }))?;
    } else {
        let mut out = verify_text(&rep);
        let failed = rep.failures().count();
        out.push_str(&format!("{} checks, {failed} failed\n", rep.checks.len()));
        emit(cli, &out)?;
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::Check(String::new()))
    }
}

fn verify_corpus(cli: &Cli, count: usize) -> Outcome {
    let entries = corpus(count, cli.seed.unwrap_or(0));
    let mut failed_pairs = Vec::new();
    let mut total_checks = 0;
    for (i, e) in entries.iter().enumerate() {
        let (m, n) = e.synthesize()?;
        let rep = verify_pair(&m, &n, cli.tol, cli.samples)?;
        total_checks += rep.checks.len();
        if !rep.all_pass() {
            failed_pairs.push((i, e.clone(), rep));
        }
    }
    if cli.format == Format::Json {
        let failures: Vec<Value> = failed_pairs
            .iter()
            .map(|(i, e, rep)| json!({ "index": i, "pair": e, "failed_checks": rep.failures().collect::<Vec<_>>() }))
            .collect();
        emit_json(
            cli,
            "verify",
            json!({
                "pass": failed_pairs.is_empty(),
                "pairs": entries.len(),
                "checks": total_checks,
                "failures": failures,
            }),
        )?;
    } else {
        let mut out = String::new();
        for (i, e, rep) in &failed_pairs {
            out.push_str(&format!("pair {i} {e:?}\n"));
            for c in rep.failures() {
                out.push_str(&format!(
                    "  FAIL {}: {:.3e} (limit {:.1e})\n",
                    c.name, c.value, c.threshold
                ));
            }
        }
        out.push_str(&format!(
            "{} pairs, {total_checks} checks, {} pair(s) failed\n",
            entries.len(),
            failed_pairs.len()
        ));
        emit(cli, &out)?;
    }
    if failed_pairs.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(String::new()))
    }
}

fn random_pair(
    cli: &Cli,
    m_out: &Path,
    n_out: &Path,
    angles: &[f64],
    counts: [usize; 4],
) -> Outcome {
    let [a, b, c, d] = counts;
    let seed = cli.seed.unwrap_or(0);
    let (m, n) = synthesize_pair(angles, a, b, c, d, seed)?;
    for (path, s) in [(m_out, &m), (n_out, &n)] {
        fs::write(path, mio::write_matrix_string(s.basis()))
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    if cli.format == Format::Json {
        return emit_json(
            cli,
            "random-pair",
            json!({
                "ambient_dim": m.ambient_dim(), "dim_m": m.dim(), "dim_n": n.dim(),
                "angles": angles, "a": a, "b": b, "c": c, "d": d, "seed": seed,
                "m_path": m_out, "n_path": n_out,
            }),
        );
    }
    emit(
        cli,
        &format!(
            "wrote {} ({}x{}) and {} ({}x{}), seed {seed}\n",
            m_out.display(),
            m.ambient_dim(),
            m.dim(),
            n_out.display(),
            n.ambient_dim(),
            n.dim()
        ),
    )
}
