//! Ground-state observables over `(N, h, Δ)` grids.
//!
//! Points are solved independently (in parallel when a pool is available)
//! and emitted in `(N, h, Δ)` lexicographic order. The CSV and JSON writers
//! are the interchange format for plotting scripts.

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{limit_variance, DetuningLimit};
use crate::error::{Error, Result};
use crate::hilbert::{Basis, Site};
use crate::model::{build_hamiltonian, ModelParams};
use crate::observables::{atom_moments, site_moments, total_atomic_distribution, variance_product};
use crate::solver::{ground_state, SolveOptions};

pub const CSV_HEADER: &str =
    "delta,h,n_total,energy,gap,d_n1,d_n1_rel,d_n1a,prod,prod_rel,p_na0,p_na1,p_na2,phase,degenerate";

/// One grid axis.
#[derive(Debug, Clone, PartialEq)]
pub enum Axis {
    List(Vec<f64>),
    /// `count` evenly spaced values including both ends.
    Linear {
        min: f64,
        max: f64,
        count: usize,
    },
    /// `count` geometrically spaced values; both ends share a sign and are
    /// nonzero.
    Geometric {
        start: f64,
        end: f64,
        count: usize,
    },
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Axis::List(ref v) => v.clone(),
            Axis::Linear { min, max, count } => {
                if count == 1 {
                    return vec![min];
                }
                let step = (max - min) / (count - 1) as f64;
                (0..count)
                    .map(|i| {
                        if i + 1 == count {
                            max
                        } else {
                            min + step * i as f64
                        }
                    })
                    .collect()
            }
            Axis::Geometric { start, end, count } => {
                if count == 1 {
                    return vec![start];
                }
                let sign = start.signum();
                let (a, b) = (start.abs().ln(), end.abs().ln());
                (0..count)
                    .map(|i| {
                        if i + 1 == count {
                            end
                        } else {
                            sign * (a + (b - a) * i as f64 / (count - 1) as f64).exp()
                        }
                    })
                    .collect()
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        match *self {
            Axis::List(ref v) if v.is_empty() => bad("empty value list".into()),
            Axis::List(ref v) if v.iter().any(|x| !x.is_finite()) => {
                bad("non-finite grid value".into())
            }
            Axis::Linear { count: 0, .. } | Axis::Geometric { count: 0, .. } => {
                bad("grid count must be at least 1".into())
            }
            Axis::Linear { min, max, .. } if !(min.is_finite() && max.is_finite()) => {
                bad("non-finite grid bound".into())
            }
            Axis::Geometric { start, end, .. }
                if start == 0.0 || end == 0.0 || start.signum() != end.signum() =>
            {
                bad(format!(
                    "geometric grid {start}..{end} must not cross or touch zero"
                ))
            }
            _ => Ok(()),
        }
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("`{s}` is not a number")))
}

fn parse_count(s: &str) -> Result<usize> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| Error::Parse(format!("`{s}` is not a count")))
}

/// Expands `a,b,...,z` into the arithmetic progression with step `b − a`.
fn expand_ellipsis<T, F>(
    s: &str,
    parse: F,
    step_of: impl Fn(T, T) -> Result<Vec<T>>,
) -> Result<Vec<T>>
where
    T: Copy,
    F: Fn(&str) -> Result<T>,
{
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.iter().position(|p| *p == "...") {
        None => parts.iter().map(|p| parse(p)).collect(),
        Some(pos) if pos == 2 && parts.len() == 4 => {
            let a = parse(parts[0])?;
            let b = parse(parts[1])?;
            let z = parse(parts[3])?;
            let mut head = step_of(a, b)?;
            head.push(z);
            Ok(head)
        }
        Some(_) => Err(Error::Parse(format!(
            "`{s}`: ellipsis lists are written `first,second,...,last`"
        ))),
    }
}

impl FromStr for Axis {
    type Err = Error;

    /// `min:max:count`, `log:start:end:count`, or a comma list (optionally
    /// `a,b,...,z`).
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let axis = match parts.as_slice() {
            ["log", a, b, c] => Axis::Geometric {
                start: parse_f64(a)?,
                end: parse_f64(b)?,
                count: parse_count(c)?,
            },
            [a, b, c] => Axis::Linear {
                min: parse_f64(a)?,
                max: parse_f64(b)?,
                count: parse_count(c)?,
            },
            [_] => {
                let values = expand_ellipsis(s, parse_f64, |a: f64, b: f64| {
                    let z = parse_f64(s.rsplit(',').next().unwrap_or_default())?;
                    let step = b - a;
                    if step == 0.0 || (z - a) / step < 0.0 {
                        return Err(Error::Parse(format!(
                            "`{s}` does not progress towards its end"
                        )));
                    }
                    let count = ((z - a) / step + 1e-9).floor() as usize;
                    Ok((0..count).map(|i| a + step * i as f64).collect())
                })?;
                Axis::List(values)
            }
            _ => return Err(Error::Parse(format!("cannot read grid `{s}`"))),
        };
        axis.validate()?;
        Ok(axis)
    }
}

/// Parses `4`, `2,4,8` or `4,6,...,30`.
pub fn parse_n_list(s: &str) -> Result<Vec<usize>> {
    let values = expand_ellipsis(s, parse_count, |a: usize, b: usize| {
        let z = parse_count(s.rsplit(',').next().unwrap_or_default())?;
        if b <= a || z < a {
            return Err(Error::Parse(format!("`{s}` must increase")));
        }
        Ok((a..z).step_by(b - a).collect())
    })?;
    if values.is_empty() {
        return Err(Error::Parse("empty excitation list".into()));
    }
    Ok(values)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub delta: Axis,
    pub hopping: Axis,
    pub n_values: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    PolaritonicInsulator,
    PhotonicSuperfluid,
    Coexisting,
    PolaritonicSuperfluid,
    Indeterminate,
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::PolaritonicInsulator => "polaritonic-insulator",
            Phase::PhotonicSuperfluid => "photonic-superfluid",
            Phase::Coexisting => "coexisting",
            Phase::PolaritonicSuperfluid => "polaritonic-superfluid",
            Phase::Indeterminate => "indeterminate",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Below this `ΔN₁/N` the state counts as localized.
    pub eps_sf: f64,
    /// Below this `ΔN₁A` the atoms count as frozen.
    pub eps_a: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            eps_sf: 0.05,
            eps_a: 0.01,
        }
    }
}

pub fn classify_phase(
    d_n1_rel: f64,
    d_n1a: f64,
    p_na: [f64; 3],
    degenerate: bool,
    thresholds: &Thresholds,
) -> Phase {
    if degenerate {
        Phase::Indeterminate
    } else if d_n1_rel < thresholds.eps_sf {
        Phase::PolaritonicInsulator
    } else if d_n1a < thresholds.eps_a && p_na[0] > 0.5 {
        Phase::PhotonicSuperfluid
    } else if d_n1a < thresholds.eps_a && p_na[2] > 0.5 {
        Phase::Coexisting
    } else {
        Phase::PolaritonicSuperfluid
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub delta: f64,
    pub h: f64,
    pub n_total: usize,
    pub energy: f64,
    pub gap: f64,
    pub d_n1: f64,
    pub d_n1_rel: f64,
    pub d_n1a: f64,
    pub prod: f64,
    pub prod_rel: f64,
    pub p_na0: f64,
    pub p_na1: f64,
    pub p_na2: f64,
    pub phase: Phase,
    pub degenerate: bool,
}

impl SweepRecord {
    pub fn p_na(&self) -> [f64; 3] {
        [self.p_na0, self.p_na1, self.p_na2]
    }

    fn failed(delta: f64, h: f64, n_total: usize) -> Self {
        Self {
            delta,
            h,
            n_total,
            energy: f64::NAN,
            gap: f64::NAN,
            d_n1: f64::NAN,
            d_n1_rel: f64::NAN,
            d_n1a: f64::NAN,
            prod: f64::NAN,
            prod_rel: f64::NAN,
            p_na0: f64::NAN,
            p_na1: f64::NAN,
            p_na2: f64::NAN,
            phase: Phase::Indeterminate,
            degenerate: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SweepOptions {
    pub thresholds: Thresholds,
    pub solver: SolveOptions,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

/// Solves one point and evaluates every observable on the same vector.
pub fn evaluate_point(
    n_total: usize,
    params: &ModelParams,
    opts: &SweepOptions,
) -> Result<SweepRecord> {
    let basis = Basis::new(n_total);
    let h = build_hamiltonian(params, &basis)?;
    let gs = ground_state(&h, &opts.solver)?;
    let site = site_moments(&gs.vector, &basis, Site::One)?;
    let atom = atom_moments(&gs.vector, &basis, Site::One)?;
    let p_na = total_atomic_distribution(&gs.vector, &basis)?;
    let prod = variance_product(&site, &atom);
    Ok(SweepRecord {
        delta: params.delta,
        h: params.hopping,
        n_total,
        energy: gs.energy,
        gap: gs.gap_to_first_excited,
        d_n1: site.variance,
        d_n1_rel: site.relative_variance,
        d_n1a: atom.variance,
        prod: prod.absolute,
        prod_rel: prod.relative,
        p_na0: p_na[0],
        p_na1: p_na[1],
        p_na2: p_na[2],
        phase: classify_phase(
            site.relative_variance,
            atom.variance,
            p_na,
            gs.degenerate,
            &opts.thresholds,
        ),
        degenerate: gs.degenerate,
    })
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub records: Vec<SweepRecord>,
    /// `(record index, error)` for points whose solve failed; those records
    /// carry NaN observables and the `indeterminate` label.
    pub failures: Vec<(usize, String)>,
}

impl SweepOutcome {
    pub fn all_solved(&self) -> bool {
        self.failures.is_empty()
    }
}

pub(crate) fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

pub fn run_sweep(grid: &GridSpec, base: &ModelParams, opts: &SweepOptions) -> Result<SweepOutcome> {
    grid.delta.validate()?;
    grid.hopping.validate()?;
    if grid.n_values.is_empty() {
        return Err(Error::InvalidParameter(
            "no excitation numbers given".into(),
        ));
    }
    base.validate()?;
    let deltas = grid.delta.values();
    let hops = grid.hopping.values();
    let points: Vec<(usize, f64, f64)> = grid
        .n_values
        .iter()
        .flat_map(|&n| {
            let deltas = &deltas;
            hops.iter()
                .flat_map(move |&h| deltas.iter().map(move |&d| (n, h, d)))
        })
        .collect();

    let results: Vec<Result<SweepRecord>> = with_pool(opts.jobs, || {
        points
            .par_iter()
            .map(|&(n, h, d)| {
                let params = ModelParams {
                    delta: d,
                    hopping: h,
                    ..*base
                };
                evaluate_point(n, &params, opts)
            })
            .collect()
    })?;

    let mut records = Vec::with_capacity(points.len());
    let mut failures = Vec::new();
    for (i, (res, &(n, h, d))) in results.into_iter().zip(&points).enumerate() {
        match res {
            Ok(r) => records.push(r),
            Err(e) => {
                failures.push((i, e.to_string()));
                records.push(SweepRecord::failed(d, h, n));
            }
        }
    }
    Ok(SweepOutcome { records, failures })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
}

impl LinearFit {
    /// Ordinary least squares; `None` with fewer than two distinct x.
    pub fn least_squares(points: &[(f64, f64)]) -> Option<Self> {
        let n = points.len() as f64;
        let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
        let my = points.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        if points.len() < 2 || sxx == 0.0 {
            return None;
        }
        let slope = sxy / sxx;
        Some(Self {
            slope,
            intercept: my - slope * mx,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariancePoint {
    pub n_total: usize,
    pub d_n1: f64,
    /// Large-detuning prediction, absent where it is undefined.
    pub expected: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Fig9Scan {
    pub hopping: f64,
    pub delta_magnitude: f64,
    pub positive: Vec<VariancePoint>,
    pub negative: Vec<VariancePoint>,
    pub positive_fit: Option<LinearFit>,
    pub negative_fit: Option<LinearFit>,
}

/// `ΔN₁` against `N` at `Δ = ±|Δ|` with fixed hopping.
pub fn fig9_scan(
    hopping: f64,
    delta_magnitude: f64,
    n_values: &[usize],
    base: &ModelParams,
    opts: &SweepOptions,
) -> Result<Fig9Scan> {
    let mag = delta_magnitude.abs();
    let branch = |sign: f64, limit: DetuningLimit| -> Result<Vec<VariancePoint>> {
        n_values
            .iter()
            .map(|&n| {
                let params = ModelParams {
                    delta: sign * mag,
                    hopping,
                    ..*base
                };
                let r = evaluate_point(n, &params, opts)?;
                Ok(VariancePoint {
                    n_total: n,
                    d_n1: r.d_n1,
                    expected: limit_variance(n, limit).ok(),
                })
            })
            .collect()
    };
    let positive = branch(1.0, DetuningLimit::Positive)?;
    let negative = branch(-1.0, DetuningLimit::Negative)?;
    let fit = |pts: &[VariancePoint]| {
        let xy: Vec<(f64, f64)> = pts.iter().map(|p| (p.n_total as f64, p.d_n1)).collect();
        LinearFit::least_squares(&xy)
    };
    Ok(Fig9Scan {
        hopping,
        delta_magnitude: mag,
        positive_fit: fit(&positive),
        negative_fit: fit(&negative),
        positive,
        negative,
    })
}

/// `ΔN₁/N` at resonance for each `N`, and the first `N` whose state is no
/// longer classified as an insulator.
pub fn insulator_breakdown(
    hopping: f64,
    n_values: &[usize],
    base: &ModelParams,
    opts: &SweepOptions,
) -> Result<(Vec<SweepRecord>, Option<usize>)> {
    let records = n_values
        .iter()
        .map(|&n| {
            let params = ModelParams {
                delta: 0.0,
                hopping,
                ..*base
            };
            evaluate_point(n, &params, opts)
        })
        .collect::<Result<Vec<_>>>()?;
    let first = records
        .iter()
        .find(|r| r.d_n1_rel >= opts.thresholds.eps_sf)
        .map(|r| r.n_total);
    Ok((records, first))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown output format `{other}`")),
        }
    }
}

/// 12 significant digits, locale independent.
pub fn format_float(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn write_csv<W: Write>(records: &[SweepRecord], mut w: W) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        let observables = [
            r.energy, r.gap, r.d_n1, r.d_n1_rel, r.d_n1a, r.prod, r.prod_rel, r.p_na0, r.p_na1,
            r.p_na2,
        ]
        .map(format_float);
        writeln!(
            w,
            "{},{},{},{},{},{}",
            format_float(r.delta),
            format_float(r.h),
            r.n_total,
            observables.join(","),
            r.phase,
            r.degenerate
        )?;
    }
    Ok(())
}

pub fn write_json<W: Write>(records: &[SweepRecord], mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, records).map_err(|e| Error::Parse(e.to_string()))?;
    writeln!(w)?;
    Ok(())
}

pub fn write_output(records: &[SweepRecord], format: OutputFormat, path: &Path) -> Result<()> {
    if records.is_empty() {
        return Err(Error::InvalidParameter("no records to write".into()));
    }
    let file = std::io::BufWriter::new(std::fs::File::create(path)?);
    match format {
        OutputFormat::Csv => write_csv(records, file),
        OutputFormat::Json => write_json(records, file),
    }
}

pub fn read_csv<R: Read>(r: R) -> Result<Vec<SweepRecord>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let header = reader
        .headers()
        .map_err(|e| Error::Parse(e.to_string()))?
        .iter()
        .collect::<Vec<_>>()
        .join(",");
    if header != CSV_HEADER {
        return Err(Error::Parse(format!("unexpected header `{header}`")));
    }
    reader
        .deserialize()
        .map(|row| row.map_err(|e| Error::Parse(e.to_string())))
        .collect()
}

pub fn read_json<R: Read>(r: R) -> Result<Vec<SweepRecord>> {
    serde_json::from_reader(r).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::ground_state;

    #[test]
    fn axis_parsing() {
        assert_eq!(
            "-8:8:5".parse::<Axis>().unwrap().values(),
            vec![-8.0, -4.0, 0.0, 4.0, 8.0]
        );
        assert_eq!("1e-4".parse::<Axis>().unwrap().values(), vec![1e-4]);
        assert_eq!(
            "0.5,1,2".parse::<Axis>().unwrap().values(),
            vec![0.5, 1.0, 2.0]
        );
        assert_eq!(
            "1,2,...,5".parse::<Axis>().unwrap().values(),
            vec![1.0, 2.0, 3.0, 4.0, 5.0]
        );
        let g = "log:1e-4:1:5".parse::<Axis>().unwrap().values();
        assert_eq!(g.len(), 5);
        assert!((g[2] - 1e-2).abs() < 1e-15);
        assert_eq!(g[4], 1.0);
        assert!("log:-1:1:4".parse::<Axis>().is_err());
        assert!("1:2:0".parse::<Axis>().is_err());
        assert!("a:b:c".parse::<Axis>().is_err());
        assert_eq!("-8:8:161".parse::<Axis>().unwrap().values().len(), 161);
    }

    #[test]
    fn n_list_parsing() {
        assert_eq!(parse_n_list("4").unwrap(), vec![4]);
        assert_eq!(parse_n_list("2,3,7").unwrap(), vec![2, 3, 7]);
        let evens = parse_n_list("4,6,...,30").unwrap();
        assert_eq!(evens, (4..=30).step_by(2).collect::<Vec<_>>());
        assert!(parse_n_list("4,4,...,8").is_err());
        assert!(parse_n_list("4,...,8").is_err());
        assert!(parse_n_list("x").is_err());
    }

    #[test]
    fn classification_rules() {
        let t = Thresholds::default();
        assert_eq!(
            classify_phase(0.01, 0.25, [0.25, 0.5, 0.25], false, &t),
            Phase::PolaritonicInsulator
        );
        assert_eq!(
            classify_phase(0.25, 0.0, [1.0, 0.0, 0.0], false, &t),
            Phase::PhotonicSuperfluid
        );
        assert_eq!(
            classify_phase(0.125, 0.0, [0.0, 0.0, 1.0], false, &t),
            Phase::Coexisting
        );
        assert_eq!(
            classify_phase(0.2, 0.1, [0.4, 0.3, 0.3], false, &t),
            Phase::PolaritonicSuperfluid
        );
        assert_eq!(
            classify_phase(0.2, 0.1, [0.4, 0.3, 0.3], true, &t),
            Phase::Indeterminate
        );
    }

    #[test]
    fn classified_points() {
        let o = SweepOptions::default();
        let at = |d: f64, h: f64| {
            evaluate_point(4, &ModelParams::new(d, h), &o)
                .unwrap()
                .phase
        };
        assert_eq!(at(0.0, 1e-4), Phase::PolaritonicInsulator);
        assert_eq!(at(-1e3, 1e-4), Phase::Coexisting);
        assert_eq!(at(1e3, 1e-4), Phase::PhotonicSuperfluid);
        assert_eq!(at(-50.0, 50.0), Phase::PolaritonicSuperfluid);
    }

    #[test]
    fn single_point_matches_direct_solve() {
        let grid = GridSpec {
            delta: Axis::List(vec![0.3]),
            hopping: Axis::List(vec![0.7]),
            n_values: vec![5],
        };
        let out = run_sweep(&grid, &ModelParams::default(), &SweepOptions::default()).unwrap();
        assert_eq!(out.records.len(), 1);
        let params = ModelParams::new(0.3, 0.7);
        let basis = Basis::new(5);
        let h = build_hamiltonian(&params, &basis).unwrap();
        let g = ground_state(&h, &SolveOptions::default()).unwrap();
        let site = site_moments(&g.vector, &basis, Site::One).unwrap();
        let r = &out.records[0];
        assert_eq!(r.energy, g.energy);
        assert_eq!(r.gap, g.gap_to_first_excited);
        assert_eq!(r.d_n1, site.variance);
    }

    #[test]
    fn canonical_order() {
        let grid = GridSpec {
            delta: "-1:1:3".parse().unwrap(),
            hopping: "0.1,0.2".parse().unwrap(),
            n_values: vec![3, 2],
        };
        let out = run_sweep(
            &grid,
            &ModelParams::default(),
            &SweepOptions {
                jobs: Some(2),
                ..Default::default()
            },
        )
        .unwrap();
        let keys: Vec<(usize, f64, f64)> = out
            .records
            .iter()
            .map(|r| (r.n_total, r.h, r.delta))
            .collect();
        assert_eq!(keys.len(), 12);
        assert_eq!(keys[0], (3, 0.1, -1.0));
        assert_eq!(keys[3], (3, 0.2, -1.0));
        assert_eq!(keys[6], (2, 0.1, -1.0));
        assert!(out.all_solved());
    }

    #[test]
    fn linear_fit_exact() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 0.25 * i as f64 - 0.5)).collect();
        let fit = LinearFit::least_squares(&pts).unwrap();
        assert!((fit.slope - 0.25).abs() < 1e-15);
        assert!((fit.intercept + 0.5).abs() < 1e-15);
        assert!(LinearFit::least_squares(&[(1.0, 1.0)]).is_none());
    }

    #[test]
    fn fig9_negative_branch_small_n() {
        let scan = fig9_scan(
            25.0,
            1e4,
            &[2, 4],
            &ModelParams::default(),
            &SweepOptions::default(),
        )
        .unwrap();
        assert!(scan.negative[0].d_n1.abs() < 1e-6);
        assert!((scan.negative[1].d_n1 - 0.5).abs() < 0.005);
        assert!((scan.positive[1].d_n1 - 1.0).abs() < 0.01);
    }

    #[test]
    fn empty_output_rejected() {
        let dir = tempfile::tempdir().unwrap();
        assert!(write_output(&[], OutputFormat::Csv, &dir.path().join("x.csv")).is_err());
    }

    fn sample_records() -> Vec<SweepRecord> {
        let grid = GridSpec {
            delta: "-3:3:4".parse().unwrap(),
            hopping: "1e-4,50".parse().unwrap(),
            n_values: vec![1, 4],
        };
        run_sweep(&grid, &ModelParams::default(), &SweepOptions::default())
            .unwrap()
            .records
    }

    fn close(a: f64, b: f64) -> bool {
        // 12 significant digits bound the relative error by 5e-12.
        a == b || (a - b).abs() <= 5e-12 * a.abs().max(b.abs())
    }

    #[test]
    fn csv_header_and_round_trip() {
        let records = sample_records();
        let mut buf = Vec::new();
        write_csv(&records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(text.lines().count(), records.len() + 1);
        let back = read_csv(text.as_bytes()).unwrap();
        assert_eq!(back.len(), records.len());
        for (a, b) in records.iter().zip(&back) {
            assert_eq!(
                (a.n_total, a.phase, a.degenerate),
                (b.n_total, b.phase, b.degenerate)
            );
            let fa = [
                a.delta, a.h, a.energy, a.gap, a.d_n1, a.d_n1_rel, a.d_n1a, a.prod, a.prod_rel,
                a.p_na0, a.p_na1, a.p_na2,
            ];
            let fb = [
                b.delta, b.h, b.energy, b.gap, b.d_n1, b.d_n1_rel, b.d_n1a, b.prod, b.prod_rel,
                b.p_na0, b.p_na1, b.p_na2,
            ];
            for (x, y) in fa.iter().zip(&fb) {
                assert!(close(*x, *y), "{x} vs {y}");
            }
        }
    }

    #[test]
    fn csv_rejects_foreign_header() {
        assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn failed_point_serializes() {
        let r = SweepRecord::failed(1.0, 2.0, 3);
        let mut buf = Vec::new();
        write_csv(&[r], &mut buf).unwrap();
        let back = read_csv(buf.as_slice()).unwrap();
        assert!(back[0].energy.is_nan());
        assert_eq!(back[0].phase, Phase::Indeterminate);
    }

    #[test]
    fn json_round_trip_exact() {
        let records = sample_records();
        let mut buf = Vec::new();
        write_json(&records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("\"d_n1_rel\""));
        assert!(
            text.contains("\"polaritonic-insulator\"") || text.contains("\"photonic-superfluid\"")
        );
        assert_eq!(read_json(text.as_bytes()).unwrap(), records);
    }

    #[test]
    fn output_is_byte_stable() {
        let dir = tempfile::tempdir().unwrap();
        let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
        write_output(&sample_records(), OutputFormat::Csv, &a).unwrap();
        write_output(&sample_records(), OutputFormat::Csv, &b).unwrap();
        assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    }

    #[test]
    fn record_invariants() {
        for r in sample_records() {
            assert!(r.gap >= 0.0 && r.d_n1 >= 0.0 && r.d_n1a >= 0.0 && r.prod >= 0.0);
            assert!((r.p_na().iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn float_format() {
        assert_eq!(format_float(0.25), "2.50000000000e-1");
        assert_eq!(format_float(-1234.5), "-1.23450000000e3");
        assert_eq!(format_float(f64::INFINITY), "inf");
    }
}
