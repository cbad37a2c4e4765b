//! `mopuc` command-line front end.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use mopuc::measure::chebyshev_check;
use mopuc::para::{build_para, equispaced_taus, para_residuals, trig_form};
use mopuc::zeros::{
    counterexample_scan, phase, verify_para_theorems, verify_thm5_1, verify_thm5_2, zero_report,
    Tolerances, ZeroReport,
};
use mopuc::{
    build_t, normality_scan, presets, solve_hp, solve_hp_star, solve_phi, solve_phi_sharp, Error,
    MeasureSystem, MultiIndex, ScanMode, SystemDescription,
};

use output::{Csv, Outputs};

#[derive(Parser)]
#[command(name = "mopuc", version, about = "Multiple orthogonal and paraorthogonal polynomials on the unit circle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump the moments needed for T_n (or for every n up to --max-index) as CSV.
    Moments(Common),
    /// Solve for the Laurent multiple orthogonal polynomial phi_n.
    Solve(Common),
    /// Solve the two-point Hermite-Pade pair Phi_{n,m} and Phi*_{n,m}.
    Hp(Common),
    /// Build paraorthogonal polynomials X_n^(tau).
    Para(Common),
    /// Locate and classify zeros of z^{|n|/2} phi_n, or of X_n^(tau) with --taus.
    Zeros(Common),
    /// Run the theorem verifiers (--mode all, thm5_1, para or thm5_2).
    Verify(Common),
    /// Normality scan over {0..max_index}^r (--mode phi, hp_diag or hp_offdiag).
    Scan(Common),
    /// Largest root modulus of the ordinary type II polynomials over a catalog.
    Counterexample(Common),
    /// Sampled Blaschke phase of the zeros of z^{|n|/2} phi_n as CSV.
    Phase(Common),
    /// Randomized sign test of the Chebyshev determinant of an AT system.
    Chebyshev(Common),
}

#[derive(Args, Clone)]
struct Common {
    /// Named system: SYS-LEB, SYS-BS:<a>, SYS-A2, SYS-AT2.
    #[arg(long, conflicts_with = "system")]
    preset: Option<String>,
    /// JSON system description.
    #[arg(long)]
    system: Option<PathBuf>,
    /// Multi-index, e.g. 2,1.
    #[arg(long)]
    n: Option<String>,
    /// Second multi-index for hp.
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    max_index: Option<usize>,
    /// Command-specific mode.
    #[arg(long)]
    mode: Option<String>,
    /// Count of equispaced taus, `random:<k>`, or comma-separated angles in radians.
    #[arg(long)]
    taus: Option<String>,
    #[arg(long)]
    tol_circle: Option<f64>,
    /// Phase sampling grid.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Trials for the chebyshev command.
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Emit the sharp (solve) instead of the polynomial itself.
    #[arg(long)]
    sharp: bool,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

/// Error carrying the exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        let code = match e.downcast_ref::<Error>() {
            Some(Error::NonNormal { .. } | Error::TheoremViolated { .. }) => 2,
            _ => 1,
        };
        Failure { code, message: format!("{e:#}") }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    if let Err(message) = configure_threads() {
        eprintln!("error: {message}");
        return ExitCode::from(1);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("MOPUC_THREADS") else { return Ok(()) };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("MOPUC_THREADS must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Moments(c) => moments(&c),
        Command::Solve(c) => solve(&c),
        Command::Hp(c) => hp(&c),
        Command::Para(c) => para(&c),
        Command::Zeros(c) => zeros(&c),
        Command::Verify(c) => verify(&c),
        Command::Scan(c) => scan(&c),
        Command::Counterexample(c) => counterexample(&c),
        Command::Phase(c) => phase_cmd(&c),
        Command::Chebyshev(c) => chebyshev(&c),
    }
}

impl Common {
    fn load_system(&self) -> anyhow::Result<(String, MeasureSystem)> {
        match (&self.preset, &self.system) {
            (Some(name), None) => Ok((name.clone(), presets::preset(name)?)),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("cannot read system description {}", path.display()))?;
                let system = SystemDescription::from_json(&text)?.build()?;
                Ok((path.display().to_string(), system))
            }
            _ => bail!("exactly one of --preset or --system is required"),
        }
    }

    fn index(&self, system: &MeasureSystem, raw: Option<&String>, flag: &str) -> anyhow::Result<MultiIndex> {
        let raw = raw.ok_or_else(|| anyhow!("--{flag} is required"))?;
        let n: MultiIndex = raw.parse()?;
        system.check_index(&n)?;
        Ok(n)
    }

    fn n(&self, system: &MeasureSystem) -> anyhow::Result<MultiIndex> {
        self.index(system, self.n.as_ref(), "n")
    }

    /// `--n` alone, else the grid `{0..max_index}^r`.
    fn indices(&self, system: &MeasureSystem) -> anyhow::Result<Vec<MultiIndex>> {
        match (&self.n, self.max_index) {
            (Some(_), None) => Ok(vec![self.n(system)?]),
            (None, Some(k)) => Ok(MultiIndex::grid(system.r(), k)),
            (Some(_), Some(_)) => bail!("--n and --max-index are mutually exclusive here"),
            (None, None) => bail!("one of --n or --max-index is required"),
        }
    }

    fn tolerances(&self) -> anyhow::Result<Tolerances> {
        let mut tol = Tolerances::default();
        if let Some(t) = self.tol_circle {
            if !(t > 0.0 && t.is_finite()) {
                bail!("--tol-circle must be positive, got {t}");
            }
            tol.tol_circle = t;
        }
        if let Some(g) = self.grid {
            if g < 16 {
                bail!("--grid must be at least 16, got {g}");
            }
            tol.grid = g;
        }
        Ok(tol)
    }

    fn taus(&self, default_count: Option<usize>) -> anyhow::Result<Vec<Complex64>> {
        let Some(raw) = self.taus.as_deref().map(str::trim) else {
            return default_count
                .map(equispaced_taus)
                .ok_or_else(|| anyhow!("--taus is required"));
        };
        parse_taus(raw, self.seed)
    }

    fn outputs(&self, command: &str) -> anyhow::Result<Outputs> {
        Outputs::new(&self.out, command)
    }
}

/// An integer is a count of equispaced points, `random:k` draws `k` angles
/// from the seeded generator, anything else is a list of angles in radians.
fn parse_taus(raw: &str, seed: u64) -> anyhow::Result<Vec<Complex64>> {
    if let Ok(k) = raw.parse::<usize>() {
        if k == 0 {
            bail!("--taus count must be positive");
        }
        return Ok(equispaced_taus(k));
    }
    if let Some(k) = raw.strip_prefix("random:") {
        let k: usize = k.trim().parse().with_context(|| format!("bad --taus {raw:?}"))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        return Ok((0..k)
            .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect());
    }
    raw.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map(|theta| Complex64::from_polar(1.0, theta))
                .with_context(|| format!("bad --taus entry {t:?}"))
        })
        .collect()
}

fn system_json(name: &str, system: &MeasureSystem) -> Value {
    json!({ "name": name, "description": SystemDescription::from_system(system) })
}

fn moments(c: &Common) -> CmdResult {
    let (_, system) = c.load_system()?;
    for n in c.indices(&system)? {
        if !n.is_zero() {
            build_t(&system, &n)?;
        }
    }
    let mut csv = Csv::new(&["component", "2t", "re", "im"]);
    for (j, two_t, v) in system.cached_moments() {
        csv.row(&[j.to_string(), two_t.to_string(), fmt(v.re), fmt(v.im)]);
    }
    let out = c.outputs("moments")?;
    out.csv(&csv)?;
    Ok(())
}

fn solve(c: &Common) -> CmdResult {
    let (name, system) = c.load_system()?;
    let n = c.n(&system)?;
    let result = if c.sharp { solve_phi_sharp(&system, &n)? } else { solve_phi(&system, &n)? };
    let body = json!({
        "system": system_json(&name, &system),
        "n": n,
        "polynomial": if c.sharp { "phi_sharp" } else { "phi" },
        "result": result,
    });
    c.outputs("solve")?.json(&body)?;
    println!("{}", result.poly);
    Ok(())
}

fn hp(c: &Common) -> CmdResult {
    let (name, system) = c.load_system()?;
    let n = c.n(&system)?;
    let m = c.index(&system, c.m.as_ref(), "m")?;
    let phi = solve_hp(&system, &n, &m)?;
    let star = solve_hp_star(&system, &n, &m)?;
    let body = json!({
        "system": system_json(&name, &system),
        "n": n,
        "m": m,
        "hp": phi,
        "hp_star": star,
    });
    c.outputs("hp")?.json(&body)?;
    println!("Phi = {}\nPhi* = {}", phi.poly, star.poly);
    Ok(())
}

fn para(c: &Common) -> CmdResult {
    let (name, system) = c.load_system()?;
    let n = c.n(&system)?;
    let taus = c.taus(Some(1))?;
    let phi = solve_phi(&system, &n)?.poly;
    let mut entries = Vec::new();
    for tau in taus {
        let p = build_para(&phi, tau)?;
        let trig = trig_form(&p, system.branch())?;
        let residuals = para_residuals(&system, &p, &n)?;
        entries.push(json!({
            "tau": [tau.re, tau.im],
            "coefficients": p.x,
            "trig": trig,
            "residuals": residuals,
        }));
    }
    let body = json!({ "system": system_json(&name, &system), "n": n, "para": entries });
    c.outputs("para")?.json(&body)?;
    Ok(())
}

fn root_table(csv: &mut Csv, source: &str, report: &ZeroReport) {
    for r in &report.roots {
        csv.row(&[
            source.to_string(),
            fmt(r.z.re),
            fmt(r.z.im),
            fmt(r.modulus),
            fmt(r.arg),
            r.class.as_str().to_string(),
            r.arc.map_or(String::new(), |a| a.to_string()),
        ]);
    }
}

const ROOT_HEADER: [&str; 7] = ["source", "re", "im", "abs", "arg", "class", "arc"];

fn tau_label(n: &MultiIndex, tau: Complex64) -> String {
    format!("X{n}[tau={}]", fmt(tau.arg()))
}

fn zeros(c: &Common) -> CmdResult {
    let (name, system) = c.load_system()?;
    let n = c.n(&system)?;
    let tol = c.tolerances()?;
    let phi = solve_phi(&system, &n)?.poly;
    let mut csv = Csv::new(&ROOT_HEADER);
    let mut reports = Vec::new();
    if c.taus.is_some() {
        for tau in c.taus(None)? {
            let p = build_para(&phi, tau)?;
            let report = zero_report(&system, &p.x, tol.tol_circle)?;
            let label = tau_label(&n, tau);
            root_table(&mut csv, &label, &report);
            reports.push(json!({ "source": label, "tau": [tau.re, tau.im], "report": report }));
        }
    } else {
        let report = zero_report(&system, &phi, tol.tol_circle)?;
        let label = format!("phi{n}");
        root_table(&mut csv, &label, &report);
        reports.push(json!({ "source": label, "report": report }));
    }
    let body = json!({ "system": system_json(&name, &system), "n": n, "zeros": reports });
    let out = c.outputs("zeros")?;
    out.json(&body)?;
    out.csv(&csv)?;
    Ok(())
}

fn verify(c: &Common) -> CmdResult {
    let (name, system) = c.load_system()?;
    let mode = c.mode.as_deref().unwrap_or("all");
    let (thm51, para_mode, thm52) = match mode {
        "all" => (true, true, true),
        "thm5_1" => (true, false, false),
        "para" => (false, true, false),
        "thm5_2" => (false, false, true),
        other => return Err(anyhow!("unknown verify mode {other:?} (all, thm5_1, para, thm5_2)").into()),
    };
    let tol = c.tolerances()?;
    let indices = c.indices(&system)?;
    let taus = c.taus(Some(8))?;
    let mut violations: Vec<String> = Vec::new();
    let mut body = json!({ "system": system_json(&name, &system), "mode": mode, "tolerances": tol });
    let mut csv = Csv::new(&ROOT_HEADER);
    let record = |violations: &mut Vec<String>, e: Error| -> CmdResult {
        match e {
            Error::TheoremViolated { .. } | Error::NonNormal { .. } => {
                violations.push(e.to_string());
                Ok(())
            }
            other => Err(other.into()),
        }
    };

    if thm51 {
        let mut verdicts = Vec::new();
        for n in &indices {
            match verify_thm5_1(&system, n, &tol) {
                Ok(v) => {
                    root_table(&mut csv, &format!("phi{n}"), &v.zeros);
                    if let Err(e) = v.ensure() {
                        record(&mut violations, e)?;
                    }
                    verdicts.push(serde_json::to_value(&v).map_err(anyhow::Error::from)?);
                }
                Err(e) => {
                    verdicts.push(json!({ "n": n, "error": e.to_string() }));
                    record(&mut violations, e)?;
                }
            }
        }
        body["thm5_1"] = Value::Array(verdicts);
    }
    if para_mode {
        let mut verdicts = Vec::new();
        for n in &indices {
            match verify_para_theorems(&system, n, &taus, &tol) {
                Ok(vs) => {
                    for v in vs {
                        if let Some(z) = &v.zeros {
                            root_table(&mut csv, &tau_label(n, v.tau), z);
                        }
                        if let Err(e) = v.ensure() {
                            record(&mut violations, e)?;
                        }
                        verdicts.push(serde_json::to_value(&v).map_err(anyhow::Error::from)?);
                    }
                }
                Err(e) => {
                    verdicts.push(json!({ "n": n, "error": e.to_string() }));
                    record(&mut violations, e)?;
                }
            }
        }
        body["para"] = Value::Array(verdicts);
    }
    if thm52 {
        let max_index = match (c.max_index, &c.n) {
            (Some(k), _) => k,
            (None, _) => indices.iter().flat_map(|n| n.entries().to_vec()).max().unwrap_or(0),
        };
        let verdicts = verify_thm5_2(&system, max_index, &tol)?;
        for v in &verdicts {
            if let Err(e) = v.ensure() {
                record(&mut violations, e)?;
            }
        }
        body["thm5_2"] = serde_json::to_value(&verdicts).map_err(anyhow::Error::from)?;
    }
    body["violations"] = json!(violations);
    body["passed"] = json!(violations.is_empty());
    let out = c.outputs("verify")?;
    out.json(&body)?;
    out.csv(&csv)?;
    if violations.is_empty() {
        println!("all checks passed");
        Ok(())
    } else {
        for v in &violations {
            eprintln!("{v}");
        }
        Err(Failure { code: 2, message: format!("{} check(s) failed", violations.len()) })
    }
}

fn scan(c: &Common) -> CmdResult {
    let (_, system) = c.load_system()?;
    let mode: ScanMode = c.mode.as_deref().unwrap_or("phi").parse()?;
    let max_index = c.max_index.ok_or_else(|| anyhow!("--max-index is required"))?;
    let rows = normality_scan(&system, max_index, mode)?;
    let mut csv = Csv::new(&["n", "m", "sigma_min", "sigma_max", "ratio", "verdict"]);
    for row in &rows {
        csv.row(&[
            row.n.to_string(),
            row.m.as_ref().map_or(String::new(), |m| m.to_string()),
            fmt(row.report.sigma_min),
            fmt(row.report.sigma_max),
            fmt(row.report.ratio),
            row.report.verdict.as_str().to_string(),
        ]);
    }
    c.outputs("scan")?.csv(&csv)?;
    Ok(())
}

fn counterexample(c: &Common) -> CmdResult {
    let catalog = if c.preset.is_some() || c.system.is_some() {
        vec![c.load_system()?]
    } else {
        presets::a2_family()
    };
    let report = counterexample_scan(&catalog, c.max_index.unwrap_or(4))?;
    let mut csv = Csv::new(&["system", "n", "verdict", "max_abs_root", "exceeds_unit"]);
    for row in &report.rows {
        csv.row(&[
            row.system.clone(),
            row.n.to_string(),
            row.verdict.as_str().to_string(),
            row.max_abs_root.map_or(String::new(), fmt),
            row.exceeds_unit.to_string(),
        ]);
    }
    let out = c.outputs("counterexample")?;
    out.json(&report)?;
    out.csv(&csv)?;
    println!("{} rows, {} finding(s) with a root outside the closed disk", report.rows.len(), report.findings.len());
    Ok(())
}

fn phase_cmd(c: &Common) -> CmdResult {
    let (_, system) = c.load_system()?;
    let n = c.n(&system)?;
    let tol = c.tolerances()?;
    let phi = solve_phi(&system, &n)?.poly;
    let report = zero_report(&system, &phi, tol.tol_circle)?;
    let p = phase(&report.values(), tol.grid)?;
    let mut csv = Csv::new(&["theta", "psi"]);
    for (t, v) in p.theta_grid.iter().zip(&p.psi) {
        csv.row(&[fmt(*t), fmt(*v)]);
    }
    c.outputs("phase")?.csv(&csv)?;
    println!("winding {} monotone {}", p.winding, p.monotone);
    Ok(())
}

fn chebyshev(c: &Common) -> CmdResult {
    let (name, system) = c.load_system()?;
    let n = c.n(&system)?;
    let report = chebyshev_check(&system, &n, c.trials, c.seed)?;
    let body = json!({ "system": system_json(&name, &system), "seed": c.seed, "report": report });
    c.outputs("chebyshev")?.json(&body)?;
    println!("signs agree: {}", report.signs_agree);
    Ok(())
}

/// Shortest round-trip decimal form; independent of locale.
fn fmt(x: f64) -> String {
    format!("{x:?}")
}
