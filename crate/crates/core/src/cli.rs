//! Command-line frontend.
//!
//! Exit status: 0 success, 1 a check failed, 2 usage error, 3 numeric
//! failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::analytic::n4_spacing_table;
use crate::check::{run_checks, CheckConfig, DEFAULT_SEED};
use crate::error::{Error, Result};
use crate::hilbert::{Basis, Site};
use crate::model::{build_hamiltonian, ModelParams};
use crate::observables::{
    atom_moments, polariton_group_distribution, site_moments, total_atomic_distribution,
};
use crate::solver::{ground_state, Method, SolveOptions};
use crate::sweep::{
    classify_phase, fig9_scan, format_float, parse_n_list, run_sweep, write_output, Axis, GridSpec,
    OutputFormat, SweepOptions, Thresholds,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "jch",
    version,
    about = "Two-site Jaynes-Cummings-Hubbard model at fixed excitation number"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ground state and observables at one parameter point.
    Solve(SolveArgs),
    /// Observables over an (N, h, Δ) grid, written as CSV or JSON.
    Sweep(SweepArgs),
    /// Spacings between consecutive N = 4 polariton groups at h = 0.
    Gaps(GapsArgs),
    /// ΔN₁ against N at large positive and negative detuning.
    Fig9(Fig9Args),
    /// Closed-form versus numerical comparisons.
    Check(CheckArgs),
}

/// Parameters shared by every physics subcommand. Energies are in units of λ.
#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Atom-field coupling.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub lambda: f64,
    /// Cavity frequency; adds N·ω_c to every energy.
    #[arg(
        long = "include-omega-c",
        alias = "omega-c",
        default_value_t = 0.0,
        allow_hyphen_values = true
    )]
    pub omega_c: f64,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// auto, dense or lanczos.
    #[arg(long, default_value = "auto")]
    pub method: Method,
    /// Residual tolerance ‖Hv − Ev‖; default 1e-10·max(1, ‖H‖).
    #[arg(long)]
    pub tol: Option<f64>,
}

impl SolverArgs {
    fn options(&self) -> Result<SolveOptions> {
        if let Some(t) = self.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "tolerance must be positive, got {t}"
                )));
            }
        }
        Ok(SolveOptions {
            method: self.method,
            tol: self.tol,
            ..SolveOptions::default()
        })
    }
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    /// Insulator threshold on ΔN₁/N.
    #[arg(long = "eps-sf", default_value_t = 0.05)]
    pub eps_sf: f64,
    /// Frozen-atom threshold on ΔN₁A.
    #[arg(long = "eps-a", default_value_t = 0.01)]
    pub eps_a: f64,
}

impl ThresholdArgs {
    fn thresholds(&self) -> Thresholds {
        Thresholds {
            eps_sf: self.eps_sf,
            eps_a: self.eps_a,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Total excitation number.
    #[arg(long = "n")]
    pub n_total: usize,
    /// Atom-cavity detuning ω_a − ω_c.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub delta: f64,
    /// Photon hopping between the cavities.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub hopping: f64,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
    /// Write the ground-state amplitudes to this file (`-` for stdout).
    #[arg(long)]
    pub dump_state: Option<PathBuf>,
    /// Write the Hamiltonian as upper-triangle triplets to this file.
    #[arg(long)]
    pub dump_hamiltonian: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Excitation numbers: `4`, `4,8` or `4,6,...,30`.
    #[arg(long = "n")]
    pub n_values: NList,
    /// Detuning grid: `min:max:count`, `log:start:end:count` or a list.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Axis,
    /// Hopping grid, same syntax as `--delta`.
    #[arg(long, allow_hyphen_values = true)]
    pub hopping: Axis,
    #[arg(long)]
    pub out: PathBuf,
    /// csv or json.
    #[arg(long, default_value = "csv")]
    pub format: OutputFormat,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
}

/// Excitation-number list as one argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NList(pub Vec<usize>);

impl std::str::FromStr for NList {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_n_list(s).map(NList)
    }
}

#[derive(Debug, Args)]
pub struct GapsArgs {
    /// Detuning grid.
    #[arg(long, default_value = "-10:10:201", allow_hyphen_values = true)]
    pub delta: Axis,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Write the table here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Fig9Args {
    #[arg(long, default_value_t = 25.0, allow_hyphen_values = true)]
    pub hopping: f64,
    /// |Δ|; both signs are evaluated.
    #[arg(long = "delta-magnitude", default_value_t = 1e4)]
    pub delta_magnitude: f64,
    #[arg(long = "n", default_value = "2,4,...,30")]
    pub n_values: NList,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Write `sign,n_total,d_n1,expected` rows here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Run only the named checks (repeatable).
    #[arg(long)]
    pub only: Vec<String>,
    /// Largest N in scans over N.
    #[arg(long = "n-max", default_value_t = 30)]
    pub n_max: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
    /// List the available checks and exit.
    #[arg(long)]
    pub list: bool,
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out, err),
        Command::Gaps(a) => cmd_gaps(&a, out),
        Command::Fig9(a) => cmd_fig9(&a, out),
        Command::Check(a) => cmd_check(&a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_numeric() {
                EXIT_NUMERIC
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn params(delta: f64, hopping: f64, model: &ModelArgs) -> Result<ModelParams> {
    let p = ModelParams::new(delta, hopping)
        .with_lambda(model.lambda)
        .with_omega_c(model.omega_c);
    p.validate()?;
    Ok(p)
}

fn open_output(path: &std::path::Path) -> Result<Box<dyn Write>> {
    if path.as_os_str() == "-" {
        Ok(Box::new(io::stdout()))
    } else {
        Ok(Box::new(BufWriter::new(File::create(path)?)))
    }
}

fn num(x: f64) -> String {
    format_float(x)
}

pub fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let p = params(a.delta, a.hopping, &a.model)?;
    let basis = Basis::new(a.n_total);
    let h = build_hamiltonian(&p, &basis)?;
    if let Some(path) = &a.dump_hamiltonian {
        let mut w = open_output(path)?;
        h.write_triplets(&mut w)?;
        w.flush()?;
    }
    let g = ground_state(&h, &a.solver.options()?)?;
    let site = site_moments(&g.vector, &basis, Site::One)?;
    let atom = atom_moments(&g.vector, &basis, Site::One)?;
    let p_na = total_atomic_distribution(&g.vector, &basis)?;
    let groups = polariton_group_distribution(&g.vector, &basis, &p)?;
    let phase = classify_phase(
        site.relative_variance,
        atom.variance,
        p_na,
        g.degenerate,
        &a.thresholds.thresholds(),
    );

    writeln!(out, "n_total      {}", a.n_total)?;
    writeln!(out, "dimension    {}", basis.dim())?;
    writeln!(
        out,
        "parameters   delta={} hopping={} lambda={} omega_c={}",
        num(p.delta),
        num(p.hopping),
        num(p.lambda),
        num(p.omega_c)
    )?;
    writeln!(out, "energy       {}", num(g.energy))?;
    writeln!(out, "gap          {}", num(g.gap_to_first_excited))?;
    writeln!(out, "degenerate   {}", g.degenerate)?;
    writeln!(out, "mean_n1      {}", num(site.mean_excitation))?;
    writeln!(out, "d_n1         {}", num(site.variance))?;
    writeln!(out, "d_n1_rel     {}", num(site.relative_variance))?;
    writeln!(out, "d_n1a        {}", num(atom.variance))?;
    let prod = crate::observables::variance_product(&site, &atom);
    writeln!(out, "prod         {}", num(prod.absolute))?;
    writeln!(out, "prod_rel     {}", num(prod.relative))?;
    writeln!(
        out,
        "p_na         {} {} {}",
        num(p_na[0]),
        num(p_na[1]),
        num(p_na[2])
    )?;
    writeln!(out, "phase        {phase}")?;
    writeln!(out, "groups")?;
    for grp in &groups.groups {
        let members: Vec<String> = grp
            .members
            .iter()
            .map(|m| format!("{}⊗{}", m[0], m[1]))
            .collect();
        writeln!(
            out,
            "  G{:<3} energy {}  p {}  [{}]",
            grp.label,
            num(grp.energy),
            num(grp.probability),
            members.join(" ")
        )?;
    }

    if let Some(path) = &a.dump_state {
        let mut w = open_output(path)?;
        writeln!(w, "index,atom1,atom2,n1,n2,amplitude")?;
        for (i, (s, c)) in basis.iter().zip(&g.vector).enumerate() {
            writeln!(
                w,
                "{i},{},{},{},{},{}",
                if s.atoms[0] { 'e' } else { 'g' },
                if s.atoms[1] { 'e' } else { 'g' },
                s.photons[0],
                s.photons[1],
                num(*c)
            )?;
        }
        w.flush()?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let base = params(0.0, 0.0, &a.model)?;
    let grid = GridSpec {
        delta: a.delta.clone(),
        hopping: a.hopping.clone(),
        n_values: a.n_values.0.clone(),
    };
    let opts = SweepOptions {
        thresholds: a.thresholds.thresholds(),
        solver: a.solver.options()?,
        jobs: a.jobs,
    };
    let outcome = run_sweep(&grid, &base, &opts)?;
    write_output(&outcome.records, a.format, &a.out)?;
    writeln!(
        out,
        "wrote {} records to {}",
        outcome.records.len(),
        a.out.display()
    )?;
    if outcome.all_solved() {
        return Ok(EXIT_OK);
    }
    for (i, msg) in &outcome.failures {
        let r = &outcome.records[*i];
        writeln!(
            err,
            "point N={} h={} delta={}: {msg}",
            r.n_total, r.h, r.delta
        )?;
    }
    writeln!(
        err,
        "{} of {} points failed",
        outcome.failures.len(),
        outcome.records.len()
    )?;
    Ok(EXIT_NUMERIC)
}

pub fn cmd_gaps(a: &GapsArgs, out: &mut dyn Write) -> Result<i32> {
    let base = params(0.0, 0.0, &a.model)?;
    let table = n4_spacing_table(&a.delta.values(), &base);
    let mut w: Box<dyn Write + '_> = match &a.out {
        Some(path) => open_output(path)?,
        None => Box::new(&mut *out),
    };
    writeln!(
        w,
        "delta,{}",
        (1..=8)
            .map(|k| format!("g{}_{}", k + 1, k))
            .collect::<Vec<_>>()
            .join(",")
    )?;
    for (d, gaps) in table {
        writeln!(w, "{},{}", num(d), gaps.map(num).join(","))?;
    }
    w.flush()?;
    Ok(EXIT_OK)
}

pub fn cmd_fig9(a: &Fig9Args, out: &mut dyn Write) -> Result<i32> {
    let base = params(0.0, 0.0, &a.model)?;
    let opts = SweepOptions {
        solver: a.solver.options()?,
        ..SweepOptions::default()
    };
    let scan = fig9_scan(a.hopping, a.delta_magnitude, &a.n_values.0, &base, &opts)?;
    {
        let mut w: Box<dyn Write + '_> = match &a.out {
            Some(path) => open_output(path)?,
            None => Box::new(&mut *out),
        };
        writeln!(w, "sign,n_total,d_n1,expected")?;
        for (sign, pts) in [("+", &scan.positive), ("-", &scan.negative)] {
            for p in pts.iter() {
                let e = p.expected.map_or_else(|| "nan".to_string(), num);
                writeln!(w, "{sign},{},{},{e}", p.n_total, num(p.d_n1))?;
            }
        }
        w.flush()?;
    }
    for (label, fit) in [
        ("positive", scan.positive_fit),
        ("negative", scan.negative_fit),
    ] {
        if let Some(f) = fit {
            writeln!(
                out,
                "# fit {label}: slope {} intercept {}",
                num(f.slope),
                num(f.intercept)
            )?;
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_check(a: &CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    if a.list {
        for c in crate::check::CHECKS {
            writeln!(out, "{:<24} {}", c.name, c.summary)?;
        }
        return Ok(EXIT_OK);
    }
    let cfg = CheckConfig {
        n_max: a.n_max,
        seed: a.seed,
        jobs: a.jobs,
        thresholds: a.thresholds.thresholds(),
    };
    let outcomes = run_checks(&cfg, &a.only)?;
    let mut failed = Vec::new();
    for o in &outcomes {
        let status = if o.passed() { "PASS" } else { "FAIL" };
        let worst = o.worst();
        writeln!(
            out,
            "{status} {:<24} max deviation {} (tolerance {})",
            o.name,
            worst.map_or_else(|| "-".into(), |p| num(p.deviation)),
            worst.map_or_else(|| "-".into(), |p| num(p.tolerance)),
        )?;
        for p in &o.parts {
            writeln!(
                out,
                "    {} {}: {} <= {}",
                if p.passed() { "ok  " } else { "fail" },
                p.label,
                num(p.deviation),
                num(p.tolerance)
            )?;
        }
        for n in &o.notes {
            writeln!(out, "    note: {n}")?;
        }
        if !o.passed() {
            failed.push(o.name);
        }
    }
    if failed.is_empty() {
        writeln!(out, "all {} checks passed", outcomes.len())?;
        Ok(EXIT_OK)
    } else {
        writeln!(err, "failed checks: {}", failed.join(", "))?;
        Ok(EXIT_CHECK_FAILED)
    }
}
