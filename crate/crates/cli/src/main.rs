use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fermiroot::oracle::{compare_multisets, dense_matrix, full_spectrum, sector_project};
use fermiroot::report::{self, audit_line};
use fermiroot::solver::{coefficients_for, lambda_sweep, parse_bit_string, recognize_hamiltonian, DEFAULT_MAX_SECTORS};
use fermiroot::{analyze, models, Error, HamiltonianSpec, K3Root, SectorSelection, SolveOptions};
use serde::Serialize;

/// Absolute tolerance of oracle comparisons.
const ORACLE_TOL: f64 = 1e-8;

#[derive(Parser)]
#[command(name = "fermiroot", version, about = "Free-fermion solutions of Pauli Hamiltonians via line-graph roots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test whether the frustration graph is a line graph; print root or witness.
    Recognize {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: Outputs,
        #[arg(long, value_enum, default_value_t = K3Arg::Claw)]
        k3_root: K3Arg,
    },
    /// Twin stabilizers, cycle and parity generators, logical-qubit count.
    Symmetries {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: Outputs,
    },
    /// Spectrum of every (or selected) symmetry sector.
    Solve {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: Outputs,
        #[command(flatten)]
        solve: SolveArgs,
        /// Compare with dense diagonalization (n ≤ 12).
        #[arg(long)]
        verify: bool,
        /// Sweep a model parameter, `name:lo:hi:step`, writing single-particle energies as CSV.
        #[arg(long, value_name = "PARAM:LO:HI:STEP")]
        sweep: Option<String>,
    },
    /// Compare the pipeline with dense diagonalization, per sector and overall.
    Verify {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: Outputs,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Emit a generated Hamiltonian as JSON.
    Model {
        #[arg(value_enum)]
        family: Family,
        #[command(flatten)]
        params: ModelParams,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Source {
    /// Hamiltonian JSON file: {"n": int, "terms": [{"pauli": "XY", "coeff": 1.0}]}.
    #[arg(long, conflicts_with = "model", required_unless_present = "model")]
    input: Option<PathBuf>,
    /// Generate the Hamiltonian instead of reading it.
    #[arg(long, value_enum)]
    model: Option<Family>,
    #[command(flatten)]
    params: ModelParams,
}

#[derive(Args)]
struct Outputs {
    #[arg(long)]
    out_json: Option<PathBuf>,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_dot: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// `auto` for every sector, or one bit string per sector (repeatable).
    #[arg(long, default_value = "auto")]
    sector: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_MAX_SECTORS, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    max_sectors: usize,
    #[arg(long, value_enum, default_value_t = K3Arg::Claw)]
    k3_root: K3Arg,
}

#[derive(Args, Clone)]
struct ModelParams {
    /// Qubits (chains).
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    lx: usize,
    #[arg(long, default_value_t = 2)]
    ly: usize,
    /// Sierpinski level.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Ising coupling, or the Sierpinski field (default 0 there).
    #[arg(long)]
    j: Option<f64>,
    /// Transverse field.
    #[arg(long, default_value_t = 1.0)]
    g: f64,
    #[arg(long, default_value_t = 1.0)]
    jx: f64,
    #[arg(long, default_value_t = 1.0)]
    jy: f64,
    #[arg(long, default_value_t = 1.0)]
    jz: f64,
    #[arg(long)]
    periodic: bool,
    /// Root vertices (planted-root).
    #[arg(long, default_value_t = 6)]
    vertices: usize,
    /// Root edges (planted-root).
    #[arg(long, default_value_t = 9)]
    edges: usize,
    /// Vertices added around the forbidden graph (planted-beineke).
    #[arg(long, default_value_t = 3)]
    extra: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    XyChain,
    Tfim,
    Honeycomb,
    Sierpinski,
    SingleQubit,
    TwoQubit,
    Claw,
    TwinDemo,
    PlantedRoot,
    PlantedBeineke,
}

#[derive(Clone, Copy, ValueEnum)]
enum K3Arg {
    Claw,
    Triangle,
}

impl From<K3Arg> for K3Root {
    fn from(k: K3Arg) -> Self {
        match k {
            K3Arg::Claw => K3Root::Claw,
            K3Arg::Triangle => K3Root::Triangle,
        }
    }
}

fn generate(family: Family, p: &ModelParams) -> fermiroot::Result<HamiltonianSpec> {
    match family {
        Family::XyChain => models::xy_chain_random(p.n, p.periodic, p.seed),
        Family::Tfim => models::tfim(p.n, p.j.unwrap_or(1.0), p.g),
        Family::Honeycomb => models::kitaev_honeycomb(p.lx, p.ly, [p.jx, p.jy, p.jz]),
        Family::Sierpinski => models::sierpinski_hanoi(p.k, p.j.unwrap_or(0.0)),
        Family::SingleQubit => Ok(models::single_qubit()),
        Family::TwoQubit => Ok(models::two_qubit_full()),
        Family::Claw => Ok(models::claw()),
        Family::TwinDemo => Ok(models::twin_demo()),
        Family::PlantedRoot => models::planted_root(p.vertices, p.edges, p.seed).map(|r| r.hamiltonian),
        Family::PlantedBeineke => models::planted_beineke(p.extra, p.seed).map(|b| b.hamiltonian),
    }
}

fn load(source: &Source) -> anyhow::Result<HamiltonianSpec> {
    match (&source.input, source.model) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(HamiltonianSpec::from_json(&text)?)
        }
        (None, Some(family)) => Ok(generate(family, &source.params)?),
        (None, None) => bail!("either --input or --model is required"),
    }
}

fn write_or_print(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                out.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn to_json(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("report types serialize")
}

/// Witness JSON on stdout (or `--out-json`), then the error for exit code 2.
fn obstruction(h: &HamiltonianSpec, err: Error, out: &Outputs) -> anyhow::Result<()> {
    if let Error::Obstruction(w) = &err {
        write_or_print(out.out_json.as_deref(), &to_json(&report::witness_json(h, w)))?;
    }
    Err(err.into())
}

fn options(args: &SolveArgs) -> anyhow::Result<SolveOptions> {
    let sectors = if args.sector.iter().any(|s| s == "auto") {
        if args.sector.len() > 1 {
            bail!("--sector auto cannot be combined with explicit sectors");
        }
        SectorSelection::All
    } else {
        SectorSelection::Explicit(args.sector.iter().map(|s| parse_bit_string(s)).collect::<Result<_, _>>()?)
    };
    Ok(SolveOptions { k3_root: args.k3_root.into(), max_sectors: args.max_sectors, sectors, ..Default::default() })
}

fn recognize(source: &Source, out: &Outputs, k3: K3Root) -> anyhow::Result<()> {
    let h = load(source)?;
    match recognize_hamiltonian(&h, k3) {
        Ok(comps) => {
            if let Some(p) = &out.out_dot {
                write_or_print(Some(p), &report::dot(&h, &comps))?;
            }
            write_or_print(out.out_json.as_deref(), &to_json(&report::recognition_json(&h, &[], &comps)))
        }
        Err(e) => obstruction(&h, e, out),
    }
}

fn symmetries(source: &Source, out: &Outputs) -> anyhow::Result<()> {
    let h = load(source)?;
    let model = match analyze(&h, K3Root::Claw) {
        Ok(m) => m,
        Err(e) => return obstruction(&h, e, out),
    };
    if let Some(p) = &out.out_dot {
        write_or_print(Some(p), &report::dot(&h, &model.rooted()))?;
    }
    write_or_print(out.out_json.as_deref(), &to_json(&report::symmetry_json(&model)))
}

fn write_spectrum_csv(path: &Path, r: &fermiroot::SpectrumReport) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["energy", "multiplicity", "sector"])?;
    for s in &r.sectors {
        for &(e, m) in &s.energies {
            w.write_record([e.to_string(), m.to_string(), s.label_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

struct Sweep {
    param: String,
    values: Vec<f64>,
}

fn parse_sweep(spec: &str) -> anyhow::Result<Sweep> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [param, lo, hi, step] = parts[..] else {
        bail!("--sweep expects PARAM:LO:HI:STEP, got {spec:?}");
    };
    let num = |s: &str| s.parse::<f64>().map_err(|_| anyhow!("--sweep bound {s:?} is not a number"));
    let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
    if !(step > 0.0) || !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
        bail!("--sweep needs finite LO <= HI and STEP > 0");
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok(Sweep { param: param.to_ascii_lowercase(), values: (0..=count).map(|i| lo + i as f64 * step).collect() })
}

fn with_param(p: &ModelParams, name: &str, v: f64) -> anyhow::Result<ModelParams> {
    let mut p = p.clone();
    match name {
        "j" => p.j = Some(v),
        "g" => p.g = v,
        "jx" => p.jx = v,
        "jy" => p.jy = v,
        "jz" => p.jz = v,
        _ => bail!("unknown sweep parameter {name:?}; expected j, g, jx, jy or jz"),
    }
    Ok(p)
}

/// Fixes the term structure from the union over the sweep, then recomputes
/// single-particle energies at each value in one sector.
fn sweep(source: &Source, spec: &str, args: &SolveArgs, out: &Outputs) -> anyhow::Result<()> {
    let Some(family) = source.model else { bail!("--sweep needs --model") };
    let sw = parse_sweep(spec)?;
    let mut raw: Vec<Vec<(fermiroot::PauliWord, f64)>> = Vec::new();
    for &v in &sw.values {
        let p = with_param(&source.params, &sw.param, v)?;
        let terms = match family {
            Family::Sierpinski => models::sierpinski_terms(p.k, p.j.unwrap_or(0.0))?,
            _ => generate(family, &p)?.terms().iter().map(|t| (t.word.clone(), t.coeff)).collect(),
        };
        raw.push(terms);
    }
    let n = raw[0].first().map(|(w, _)| w.n()).unwrap_or(0);
    let structure =
        fermiroot::pauli::validate_hamiltonian(n, raw.iter().flatten().map(|(w, _)| (w.clone(), 1.0)).collect::<Vec<_>>())?;
    let model = analyze(&structure, args.k3_root.into())?;
    let sector = match options(args)?.sectors {
        SectorSelection::All => vec![false; model.symmetry.center_size],
        SectorSelection::Explicit(mut s) if s.len() == 1 => s.remove(0),
        SectorSelection::Explicit(_) => bail!("--sweep takes a single --sector"),
    };
    let coeffs = raw.iter().map(|t| coefficients_for(&model, t)).collect::<Result<Vec<_>, _>>()?;
    let lambdas = lambda_sweep(&model, &coeffs, &sector)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([sw.param.as_str(), "component", "index", "lambda"])?;
    for (v, comps) in sw.values.iter().zip(&lambdas) {
        for (c, ls) in comps.iter().enumerate() {
            for (i, l) in ls.iter().enumerate() {
                w.write_record([v.to_string(), c.to_string(), i.to_string(), l.to_string()])?;
            }
        }
    }
    let text = String::from_utf8(w.into_inner()?)?;
    write_or_print(out.out_csv.as_deref(), &text)
}

#[derive(Serialize)]
struct SectorCheck {
    sector: String,
    equal: bool,
    max_deviation: f64,
    states: usize,
}

#[derive(Serialize)]
struct VerifyReport {
    n: usize,
    tolerance: f64,
    sectors: Vec<SectorCheck>,
    overall: fermiroot::oracle::MultisetComparison,
    ground_energy: f64,
    oracle_ground_energy: f64,
}

fn oracle_check(h: &HamiltonianSpec, opts: &SolveOptions, per_sector: bool) -> anyhow::Result<VerifyReport> {
    let model = analyze(h, opts.k3_root)?;
    let r = model.solve(opts)?;
    if !r.complete {
        return Err(Error::ResourceCap("verification needs every sector fully enumerated".into()).into());
    }
    let dense = dense_matrix(h)?;
    let full = full_spectrum(&dense)?;
    let mut sectors = Vec::new();
    if per_sector {
        for s in &r.sectors {
            let oracle = sector_project(&dense, &model.sector_stabilizers(&s.label))?;
            let mine: Vec<f64> = s.energies.iter().flat_map(|&(e, m)| std::iter::repeat_n(e, m as usize)).collect();
            let c = compare_multisets(&mine, &oracle, ORACLE_TOL);
            sectors.push(SectorCheck { sector: s.label_string(), equal: c.equal, max_deviation: c.max_deviation, states: oracle.len() });
        }
    }
    Ok(VerifyReport {
        n: h.n(),
        tolerance: ORACLE_TOL,
        sectors,
        overall: compare_multisets(&r.expanded(), &full, ORACLE_TOL),
        ground_energy: r.ground_energy,
        oracle_ground_energy: full[0],
    })
}

fn match_line(v: &VerifyReport) -> String {
    let ok = v.overall.equal && v.sectors.iter().all(|s| s.equal);
    let dev = v.sectors.iter().map(|s| s.max_deviation).fold(v.overall.max_deviation, f64::max);
    if ok {
        format!("oracle: MATCH (max dev {dev:.3e} < {:.0e})", v.tolerance)
    } else {
        format!("oracle: MISMATCH (max dev {dev:.3e}, tolerance {:.0e})", v.tolerance)
    }
}

fn solve(source: &Source, out: &Outputs, args: &SolveArgs, verify: bool) -> anyhow::Result<()> {
    let h = load(source)?;
    let opts = options(args)?;
    let model = match analyze(&h, opts.k3_root) {
        Ok(m) => m,
        Err(e) => return obstruction(&h, e, out),
    };
    let r = model.solve(&opts)?;
    write_or_print(out.out_json.as_deref(), &to_json(&report::spectrum_json(&r)))?;
    if let Some(p) = &out.out_csv {
        write_spectrum_csv(p, &r)?;
    }
    if let Some(p) = &out.out_dot {
        write_or_print(Some(p), &report::dot(&h, &model.rooted()))?;
    }
    eprintln!("ground energy: {}", r.ground_energy);
    eprintln!("{}", audit_line(&r));
    if verify {
        let v = oracle_check(&h, &opts, false)?;
        let line = match_line(&v);
        eprintln!("{line}");
        if line.contains("MISMATCH") {
            bail!("pipeline disagrees with the dense oracle");
        }
    }
    let listed = r.sectors.iter().all(|s| !s.energies.is_empty());
    if !listed {
        return Err(Error::ResourceCap("state cap reached; energies omitted for some sectors".into()).into());
    }
    Ok(())
}

fn verify(source: &Source, out: &Outputs, args: &SolveArgs) -> anyhow::Result<()> {
    let h = load(source)?;
    let opts = options(args)?;
    if let Err(e) = analyze(&h, opts.k3_root) {
        return obstruction(&h, e, out);
    }
    let v = oracle_check(&h, &opts, true)?;
    if let Some(p) = &out.out_json {
        write_or_print(Some(p), &to_json(&v))?;
    }
    for s in &v.sectors {
        println!("sector {}: {} ({} states, max dev {:.3e})", s.sector, if s.equal { "MATCH" } else { "MISMATCH" }, s.states, s.max_deviation);
    }
    let line = match_line(&v);
    println!("{line}");
    if line.contains("MISMATCH") {
        bail!("pipeline disagrees with the dense oracle");
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Recognize { source, out, k3_root } => recognize(&source, &out, k3_root.into()),
        Command::Symmetries { source, out } => symmetries(&source, &out),
        Command::Solve { source, out, solve: args, verify, sweep: Some(spec) } => {
            if verify {
                bail!("--verify and --sweep are exclusive");
            }
            sweep(&source, &spec, &args, &out)
        }
        Command::Solve { source, out, solve: args, verify, sweep: None } => solve(&source, &out, &args, verify),
        Command::Verify { source, out, solve: args } => verify(&source, &out, &args),
        Command::Model { family, params, out } => {
            let h = generate(family, &params)?;
            write_or_print(out.as_deref(), &h.to_json())
        }
    }
}

fn main() -> ExitCode {
    // usage errors exit 1; clap's own code 2 is reserved for obstructions
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::Obstruction(_)) => ExitCode::from(2),
                Some(Error::ResourceCap(_)) => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
    }
}
