//! Named comparisons between closed-form results and diagonalization.
//!
//! Each check is a list of parts; a part passes when its deviation is at
//! most its tolerance. Bound-type criteria are expressed the same way: the
//! deviation is the distance outside the admissible region.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::{
    coexisting_state_limit, gap_lowest_two, gap_lowest_two_general, gap_total_n_form,
    hph_ground_energy, n4_group_energies, n4_group_spacings, perturbative_states_n4,
    photonic_ground_state, polariton_product_states, AnalyticState, N4_GROUPS,
};
use crate::error::{Error, Result};
use crate::hilbert::{Basis, Site};
use crate::model::{build_hamiltonian, coupled_partners, dot, ModelParams};
use crate::observables::{
    atom_moments, polariton_group_distribution, site_moments, total_atomic_distribution,
};
use crate::solver::{full_spectrum, ground_state, lowest_k, SolveOptions};
use crate::sweep::{evaluate_point, fig9_scan, insulator_breakdown, SweepOptions, Thresholds};

pub const DEFAULT_SEED: u64 = 20_240_607;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckConfig {
    /// Largest total excitation number used by scans over `N`.
    pub n_max: usize,
    pub seed: u64,
    pub jobs: Option<usize>,
    pub thresholds: Thresholds,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            n_max: 30,
            seed: DEFAULT_SEED,
            jobs: None,
            thresholds: Thresholds::default(),
        }
    }
}

impl CheckConfig {
    fn sweep_options(&self) -> SweepOptions {
        SweepOptions {
            thresholds: self.thresholds,
            solver: SolveOptions::dense(),
            jobs: self.jobs,
        }
    }

    fn even_n(&self, from: usize) -> Vec<usize> {
        (from..=self.n_max.min(30)).step_by(2).collect()
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckPart {
    pub label: String,
    pub deviation: f64,
    pub tolerance: f64,
}

impl CheckPart {
    pub fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub parts: Vec<CheckPart>,
    /// Free-form findings that are reported but not judged.
    pub notes: Vec<String>,
}

impl CheckOutcome {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            parts: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn part(&mut self, label: impl Into<String>, deviation: f64, tolerance: f64) {
        // NaN deviations fail.
        let deviation = if deviation.is_nan() {
            f64::INFINITY
        } else {
            deviation
        };
        self.parts.push(CheckPart {
            label: label.into(),
            deviation,
            tolerance,
        });
    }

    fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn passed(&self) -> bool {
        self.parts.iter().all(CheckPart::passed)
    }

    /// The part with the largest deviation-to-tolerance ratio.
    pub fn worst(&self) -> Option<&CheckPart> {
        let ratio = |p: &CheckPart| {
            if p.tolerance > 0.0 {
                p.deviation / p.tolerance
            } else if p.deviation > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        };
        self.parts
            .iter()
            .max_by(|a, b| ratio(a).total_cmp(&ratio(b)))
    }
}

type CheckFn = fn(&CheckConfig) -> Result<CheckOutcome>;

pub struct CheckDef {
    pub name: &'static str,
    pub summary: &'static str,
    run: CheckFn,
}

pub const CHECKS: &[CheckDef] = &[
    CheckDef {
        name: "polariton-energies",
        summary: "product polaritons are h = 0 eigenstates",
        run: polariton_energies,
    },
    CheckDef {
        name: "gap-n2",
        summary: "N = 2 resonant gap",
        run: gap_n2,
    },
    CheckDef {
        name: "gap-n4",
        summary: "N = 4 resonant gap",
        run: gap_n4,
    },
    CheckDef {
        name: "gap-function",
        summary: "N = 4 gap against detuning",
        run: gap_function,
    },
    CheckDef {
        name: "gap-general",
        summary: "resonant gap for even N",
        run: gap_general,
    },
    CheckDef {
        name: "spacing-table",
        summary: "N = 4 group energies and spacings",
        run: spacing_table,
    },
    CheckDef {
        name: "limit-states",
        summary: "large-detuning ground-state fidelities",
        run: limit_states,
    },
    CheckDef {
        name: "limit-state-amplitudes",
        summary: "displayed N = 4 photonic amplitudes",
        run: limit_state_amplitudes,
    },
    CheckDef {
        name: "perturbative-states",
        summary: "four degenerate λ = 0 states",
        run: perturbative_states,
    },
    CheckDef {
        name: "small-lambda",
        summary: "weak-coupling energies, degeneracy and span",
        run: small_lambda,
    },
    CheckDef {
        name: "photonic-energy",
        summary: "photon-only ground energy",
        run: photonic_energy,
    },
    CheckDef {
        name: "variance-law",
        summary: "linear growth of ΔN₁ at large detuning",
        run: variance_law,
    },
    CheckDef {
        name: "resonance-insulator",
        summary: "N = 4 insulator at weak hopping",
        run: resonance_insulator,
    },
    CheckDef {
        name: "critical-point",
        summary: "ΔN₁/N near Δ = −h at strong hopping",
        run: critical_point,
    },
    CheckDef {
        name: "trend-width",
        summary: "atomic-fluctuation window widens with N",
        run: trend_width,
    },
    CheckDef {
        name: "trend-product",
        summary: "variance-product peak grows with N",
        run: trend_product,
    },
    CheckDef {
        name: "structural",
        summary: "symmetry, block, sign and scaling invariants",
        run: structural,
    },
    CheckDef {
        name: "lanczos-dense",
        summary: "Lanczos against dense ground energies",
        run: lanczos_dense,
    },
    CheckDef {
        name: "insulator-breakdown",
        summary: "first N leaving the insulator at resonance",
        run: insulator_breakdown_report,
    },
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.name).collect()
}

pub fn run_check(name: &str, cfg: &CheckConfig) -> Result<CheckOutcome> {
    let def = CHECKS.iter().find(|c| c.name == name).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "unknown check `{name}`; known: {}",
            check_names().join(", ")
        ))
    })?;
    (def.run)(cfg)
}

/// Runs the named checks (all when `only` is empty), in suite order.
pub fn run_checks(cfg: &CheckConfig, only: &[String]) -> Result<Vec<CheckOutcome>> {
    for name in only {
        if !CHECKS.iter().any(|c| c.name == name) {
            return Err(Error::InvalidParameter(format!(
                "unknown check `{name}`; known: {}",
                check_names().join(", ")
            )));
        }
    }
    CHECKS
        .iter()
        .filter(|c| only.is_empty() || only.iter().any(|o| o == c.name))
        .map(|c| (c.run)(cfg))
        .collect()
}

fn spectrum(params: &ModelParams, n: usize) -> Result<Vec<f64>> {
    let h = build_hamiltonian(params, &Basis::new(n))?;
    Ok(full_spectrum(&h)?.eigenvalues)
}

fn dense_gap(params: &ModelParams, n: usize) -> Result<f64> {
    let e = spectrum(params, n)?;
    Ok(e[1] - e[0])
}

fn dense_ground(params: &ModelParams, n: usize) -> Result<(Basis, Vec<f64>, f64)> {
    let basis = Basis::new(n);
    let h = build_hamiltonian(params, &basis)?;
    let g = ground_state(&h, &SolveOptions::dense())?;
    Ok((basis, g.vector, g.energy))
}

fn polariton_energies(cfg: &CheckConfig) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("polariton-energies");
    let mut rng = cfg.rng(1);
    let mut worst: f64 = 0.0;
    for n in 0..=cfg.n_max {
        let params =
            ModelParams::new(rng.gen_range(-10.0..10.0), 0.0).with_lambda(rng.gen_range(0.1..3.0));
        let basis = Basis::new(n);
        let h = build_hamiltonian(&params, &basis)?;
        for p in polariton_product_states(&basis, &params) {
            let hv = h.apply(&p.amplitudes)?;
            let r = hv
                .iter()
                .zip(&p.amplitudes)
                .map(|(a, b)| (a - p.energy * b).powi(2))
                .sum::<f64>()
                .sqrt();
            worst = worst.max(r / params.lambda.max(1.0));
        }
    }
    out.part(
        format!("‖Hv − Ev‖ for all product states, N ≤ {}", cfg.n_max),
        worst,
        1e-12,
    );
    Ok(out)
}

fn gap_n2(_: &CheckConfig) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("gap-n2");
    let gap = dense_gap(&ModelParams::default(), 2)?;
    out.part(
        "dense gap vs 2 − √2",
        (gap - (2.0 - 2f64.sqrt())).abs(),
        1e-10,
    );
    let general = gap_lowest_two_general(2, 1.0)?;
    out.part("general even-N gap at N = 2", (gap - general).abs(), 1e-10);
    Ok(out)
}

fn gap_n4(_: &CheckConfig) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("gap-n4");
    let gap = dense_gap(&ModelParams::default(), 4)?;
    let expected = 2.0 * 2f64.sqrt() - 1.0 - 3f64.sqrt();
    out.part("dense gap vs 2√2 − 1 − √3", (gap - expected).abs(), 1e-10);
    out.part(
        "closed form at Δ = 0",
        (gap_lowest_two(&ModelParams::default()) - expected).abs(),
        1e-12,
    );
    Ok(out)
}

fn gap_function(cfg: &CheckConfig) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("gap-function");
    let mut rng = cfg.rng(2);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let params = ModelParams::new(rng.gen_range(-20.0..20.0), 0.0);
        worst = worst.max((gap_lowest_two(&params) - dense_gap(&params, 4)?).abs());
    }
    out.part(
        "closed form vs dense, 50 random Δ ∈ [−20, 20]",
        worst,
        1e-10,
    );
    for d in [1e6, -1e6] {
        let params = ModelParams::new(d, 0.0);
        out.part(
            format!("closed form at Δ = {d:e}"),
            gap_lowest_two(&params),
            1e-4,
        );
        out.part(
            format!("dense gap at Δ = {d:e}"),
            dense_gap(&params, 4)?,
            1e-4,
        );
    }
    Ok(out)
}

fn gap_general(cfg: &CheckConfig) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("gap-general");
    let mut worst: f64 = 0.0;
    let mut total_n_form: f64 = 0.0;
    for n in cfg.even_n(4) {
        let gap = dense_gap(&ModelParams::default(), n)?;
        worst = worst.max((gap - gap_lowest_two_general(n, 1.0)?).abs());
        total_n_form = total_n_form.max((gap - gap_total_n_form(n, 1.0)).abs());
    }
    out.part(
        format!(
            "per-site form vs dense, even N ∈ [4, {}]",
            cfg.n_max.min(30)
        ),
        worst,
        1e-9,
    );
    out.note(format!(
        "total-N form 2√N − √(N−1) − √(N+1) deviates from dense by up to {total_n_form:.6e}"
    ));
    Ok(out)
}

fn spacing_table(cfg: &CheckConfig) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("spacing-table");
    let mut rng = cfg.rng(3);
    let mut worst_level: f64 = 0.0;
    let mut worst_spacing: f64 = 0.0;
    let mut most_negative: f64 = 0.0;
    for _ in 0..20 {
        let params = ModelParams::new(rng.gen_range(-10.0..10.0), 0.0);
        let dense = spectrum(&params, 4)?;
        let groups = n4_group_energies(&params);
        let mut expected: Vec<f64> = groups
            .iter()
            .zip(N4_GROUPS)
            .flat_map(|(&e, members)| std::iter::repeat_n(e, members.len()))
            .collect();
        expected.sort_by(f64::total_cmp);
        for (a, b) in dense.iter().zip(&expected) {
            worst_level = worst_level.max((a - b).abs());
        }
        // First dense level of each group, in group order.
        let mut first = Vec::with_capacity(8);
        let mut start = 0;
        for members in N4_GROUPS {
            first.push(dense[start]);
            start += members.len();
        }
        for (k, s) in n4_group_spacings(&params).iter().enumerate() {
            worst_spacing = worst_spacing.max((s - (first[k + 1] - first[k])).abs());
            most_negative = most_negative.max(-s);
        }
    }
    out.part(
        "group energies vs dense spectrum, 20 random Δ",
        worst_level,
        1e-10,
    );
    out.part("spacings vs dense cluster gaps", worst_spacing, 1e-10);
    out.part("spacings are non-negative", most_negative, 0.0);
    Ok(out)
}

fn limit_states(cfg: &CheckConfig) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("limit-states");
    let hop = 1e-4;
    for n in 2..=cfg.n_max.min(12) {
        let (basis, v, _) = dense_ground(&ModelParams::new(1e3, hop), n)?;
        let f = photonic_ground_state(&basis).fidelity(&v);
        out.part(
            format!("photonic superfluid fidelity, N = {n}, Δ = +1e3"),
            1.0 - f,
            1e-3,
        );
        let (basis, v, _) = dense_ground(&ModelParams::new(-1e3, hop), n)?;
        let co = coexisting_state_limit(&basis, hop)?;
        out.part(
            format!("coexisting fidelity, N = {n}, Δ = −1e3"),
            1.0 - co.fidelity(&v),
            1e-3,
        );
    }
    // The relative sign between |1,1⟩ and |0,2⟩ + |2,0⟩ decides between the
    // two normal modes; report both at N = 4.
    let (basis, v, _) = dense_ground(&ModelParams::new(-1e3, hop), 4)?;
    let plus = crate::analytic::delocalized_photon_state(
        &basis,
        [true, true],
        crate::analytic::PhotonMode::Symmetric,
        "b+",
    )?;
    let minus = crate::analytic::delocalized_photon_state(
        &basis,
        [true, true],
        crate::analytic::PhotonMode::Antisymmetric,
        "b-",
    )?;
    out.note(format!(
        "N = 4, Δ = −1e3: fidelity {:.6} with the antisymmetric-mode state, {:.6} with the symmetric-mode state",
        minus.fidelity(&v),
        plus.fidelity(&v)
    ));
    Ok(out)
}

fn limit_state_amplitudes(_: &CheckConfig) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("limit-state-amplitudes");
    let (basis, v, _) = dense_ground(&ModelParams::new(1e3, 1e-4), 4)?;
    // Amplitudes on |g,g; n₁, 4 − n₁⟩ for n₁ = 0..=4.
    let displayed = [
        -(5f64.sqrt()) / 10.0,
        0.5,
        10f64.sqrt() / 5.0,
        0.5,
        -(5f64.sqrt()) / 10.0,
    ];
    let numeric: Vec<f64> = (0..=4)
        .map(|n1| {
            basis
                .index_of(&crate::hilbert::BasisState::new(false, false, n1, 4 - n1))
                .map(|i| v[i])
        })
        .collect::<Result<_>>()?;
    // Global sign is free.
    let dev = |s: f64| {
        displayed
            .iter()
            .zip(&numeric)
            .map(|(a, b)| (s * a - b).abs())
            .fold(0.0, f64::max)
    };
    out.part(
        "component-wise, N = 4, Δ = +1e3, h = 1e-4",
        dev(1.0).min(dev(-1.0)),
        1e-3,
    );
    let state = AnalyticState {
        label: "displayed".into(),
        amplitudes: {
            let mut a = vec![0.0; basis.dim()];
            for (n1, c) in displayed.iter().enumerate() {
                a[basis.index_of(&crate::hilbert::BasisState::new(false, false, n1, 4 - n1))?] = *c;
            }
            a
        },
    };
    out.note(format!(
        "fidelity of the displayed amplitudes with the ground state: {:.6}; ground amplitudes {:?}",
        state.fidelity(&v),
        numeric
            .iter()
            .map(|x| format!("{x:.6}"))
            .collect::<Vec<_>>()
    ));
    Ok(out)
}

fn perturbative_states(_: &CheckConfig) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("perturbative-states");
    let params = ModelParams::new(-1.0, 1.0).with_lambda(0.0);
    let basis = Basis::new(4);
    let h = build_hamiltonian(&params, &basis)?;
    let states = perturbative_states_n4(&basis, &params)?;
    let expected = -4.0 * params.hopping;
    let mut residual: f64 = 0.0;
    let mut ortho: f64 = 0.0;
    for (i, s) in states.iter().enumerate() {
        let hv = h.apply(&s.amplitudes)?;
        let r = hv
            .iter()
            .zip(&s.amplitudes)
            .map(|(a, b)| (a - expected * b).powi(2))
            .sum::<f64>()
            .sqrt();
        residual = residual.max(r);
        for (j, t) in states.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            ortho = ortho.max((dot(&s.amplitudes, &t.amplitudes) - target).abs());
        }
    }
    out.part(
        "eigen-residual at energy −4h (λ = 0, h = −Δ = 1)",
        residual,
        1e-12,
    );
    out.part("orthonormality", ortho, 1e-12);
    Ok(out)
}

fn small_lambda(_: &CheckConfig) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("small-lambda");
    let lambda = 1e-8;
    let mut worst: f64 = 0.0;
    for (delta, hop) in [
        (-1.0, 0.3),
        (-1.0, 0.7),
        (-1.0, 1.5),
        (-1.0, 3.0),
        (-2.5, 1.0),
        (-2.5, 4.0),
        (1.0, 0.5),
        (2.0, 2.0),
    ] {
        let params = ModelParams::new(delta, hop).with_lambda(lambda);
        let expected = if hop < -delta {
            2.0 * delta - 2.0 * hop
        } else {
            -4.0 * hop
        };
        worst = worst.max((spectrum(&params, 4)?[0] - expected).abs());
    }
    out.part("ground energy vs 2Δ − 2h / −4h", worst, 1e-6);

    let mut spread: f64 = 0.0;
    let mut weight_dev: f64 = 0.0;
    for hop in [0.5, 1.0, 2.0] {
        let params = ModelParams::new(-hop, hop).with_lambda(lambda);
        let e = spectrum(&params, 4)?;
        spread = spread.max(e[3] - e[0]).max((e[0] + 4.0 * hop).abs());

        let params = ModelParams::new(-hop, hop).with_lambda(1e-3);
        let (basis, v, _) = dense_ground(&params, 4)?;
        let weight: f64 = perturbative_states_n4(&basis, &params)?
            .iter()
            .map(|s| s.fidelity(&v))
            .sum();
        weight_dev = weight_dev.max(1.0 - weight);
    }
    out.part(
        "four lowest levels coincide at h = −Δ (λ = 1e-8)",
        spread,
        1e-6,
    );
    out.part(
        "ground weight in the degenerate span (λ = 1e-3)",
        weight_dev,
        0.01,
    );
    Ok(out)
}

fn photonic_energy(_: &CheckConfig) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("photonic-energy");
    for (n, hop) in [(8, 25.0), (4, 1.0), (6, -3.0)] {
        let params = ModelParams::new(1e3, hop).with_lambda(1e-8);
        let e = spectrum(&params, n)?[0];
        out.part(
            format!("N = {n}, h = {hop}"),
            (e - hph_ground_energy(n, &params).energy).abs(),
            1e-4,
        );
    }
    Ok(out)
}

fn variance_law(cfg: &CheckConfig) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("variance-law");
    let ns = cfg.even_n(2);
    let scan = fig9_scan(
        25.0,
        1e4,
        &ns,
        &ModelParams::default(),
        &cfg.sweep_options(),
    )?;
    for (branch, pts) in [("Δ = +1e4", &scan.positive), ("Δ = −1e4", &scan.negative)] {
        let mut worst: f64 = 0.0;
        let mut zero_dev: f64 = 0.0;
        for p in pts.iter() {
            match p.expected {
                Some(e) if e > 0.0 => worst = worst.max(rel_to(p.d_n1, e)),
                // A vanishing prediction has no relative scale.
                Some(_) => zero_dev = zero_dev.max(p.d_n1.abs()),
                None => {}
            }
        }
        out.part(
            format!("{branch}: relative deviation from the limit law"),
            worst,
            0.01,
        );
        if zero_dev > 0.0 || pts.iter().any(|p| p.expected == Some(0.0)) {
            out.part(format!("{branch}: N = 2 variance vanishes"), zero_dev, 1e-6);
        }
    }
    if ns.len() >= 2 {
        let slope = |f: Option<crate::sweep::LinearFit>| f.map_or(f64::NAN, |f| f.slope);
        out.part(
            "slope, Δ = +1e4",
            (slope(scan.positive_fit) - 0.25).abs(),
            0.01,
        );
        out.part(
            "slope, Δ = −1e4",
            (slope(scan.negative_fit) - 0.25).abs(),
            0.01,
        );
        if let (Some(p), Some(m)) = (scan.positive_fit, scan.negative_fit) {
            out.note(format!(
                "intercepts {:.6} (Δ > 0) and {:.6} (Δ < 0)",
                p.intercept, m.intercept
            ));
        }
    }
    Ok(out)
}

fn rel_to(x: f64, expected: f64) -> f64 {
    (x - expected).abs() / expected.abs()
}

fn resonance_insulator(_: &CheckConfig) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("resonance-insulator");
    let params = ModelParams::new(0.0, 1.0 / 200.0);
    let (basis, v, _) = dense_ground(&params, 4)?;
    let groups = polariton_group_distribution(&v, &basis, &params)?;
    let p_gamma1 = groups.groups[0].probability;
    out.part("P(Γ₁) ≥ 0.99", (0.99 - p_gamma1).max(0.0), 0.0);
    let p_na = total_atomic_distribution(&v, &basis)?;
    let dev = p_na
        .iter()
        .zip([0.25, 0.5, 0.25])
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    out.part("P(N_A) vs (1/4, 1/2, 1/4)", dev, 0.01);
    let site = site_moments(&v, &basis, Site::One)?;
    out.part("ΔN₁ ≤ 0.01", (site.variance - 0.01).max(0.0), 0.0);
    out.note(format!(
        "P(Γ₁) = {p_gamma1:.6}, P(N_A) = ({:.6}, {:.6}, {:.6}), ΔN₁ = {:.6}",
        p_na[0], p_na[1], p_na[2], site.variance
    ));
    Ok(out)
}

fn critical_point(cfg: &CheckConfig) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("critical-point");
    let hop = 50.0;
    let params = ModelParams::new(-hop * (1.0 - 1e-3), hop);
    let mut values = Vec::new();
    for n in cfg.even_n(4) {
        let r = evaluate_point(n, &params, &cfg.sweep_options())?;
        let outside = (0.24 - r.d_n1_rel).max(r.d_n1_rel - 0.25).max(0.0);
        out.part(format!("N = {n}: ΔN₁/N ∈ [0.24, 0.25]"), outside, 0.0);
        values.push(format!("{n}:{:.4}", r.d_n1_rel));
    }
    out.note(format!("ΔN₁/N by N: {}", values.join(" ")));
    Ok(out)
}

/// Measure of `{Δ ∈ [lo, hi] : f(Δ) > 0}`, from a uniform grid refined by
/// bisection at each sign change.
fn positive_measure(f: impl Fn(f64) -> Result<f64>, lo: f64, hi: f64, cells: usize) -> Result<f64> {
    let xs: Vec<f64> = (0..=cells)
        .map(|i| lo + (hi - lo) * i as f64 / cells as f64)
        .collect();
    let ys = xs.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
    let mut width = 0.0;
    for i in 0..cells {
        let (a, b) = (xs[i], xs[i + 1]);
        match (ys[i] > 0.0, ys[i + 1] > 0.0) {
            (true, true) => width += b - a,
            (false, false) => {}
            (left_in, _) => {
                let (mut l, mut r) = (a, b);
                for _ in 0..50 {
                    let m = 0.5 * (l + r);
                    if (f(m)? > 0.0) == left_in {
                        l = m;
                    } else {
                        r = m;
                    }
                }
                let root = 0.5 * (l + r);
                width += if left_in { root - a } else { b - root };
            }
        }
    }
    Ok(width)
}

fn trend_width(cfg: &CheckConfig) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("trend-width");
    let opts = cfg.sweep_options();
    let (lo, hi) = (-40.0, 40.0);
    let mut widths = Vec::new();
    for n in cfg.even_n(4) {
        let f = |d: f64| Ok(evaluate_point(n, &ModelParams::new(d, 1e-4), &opts)?.d_n1a - 0.05);
        let edge_in = f(lo)? > 0.0 || f(hi)? > 0.0;
        if edge_in {
            out.note(format!(
                "N = {n}: window edge inside the interval, width is clipped"
            ));
        }
        widths.push((n, positive_measure(f, lo, hi, 80)?));
    }
    let mut drop: f64 = 0.0;
    for w in widths.windows(2) {
        drop = drop.max(w[0].1 - w[1].1);
    }
    out.part(
        "width of {ΔN₁A > 0.05} is non-decreasing in N (h = 1e-4)",
        drop,
        1e-6,
    );
    out.note(format!(
        "widths on Δ ∈ [{lo}, {hi}]: {}",
        widths
            .iter()
            .map(|(n, w)| format!("{n}:{w:.4}"))
            .collect::<Vec<_>>()
            .join(" ")
    ));
    Ok(out)
}

/// Maximum of `f` on `[lo, hi]`: grid search, then golden-section refinement
/// around the best grid point.
fn grid_maximum(
    f: impl Fn(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    cells: usize,
) -> Result<(f64, f64)> {
    let step = (hi - lo) / cells as f64;
    let mut best = (lo, f(lo)?);
    for i in 1..=cells {
        let x = lo + step * i as f64;
        let y = f(x)?;
        if y > best.1 {
            best = (x, y);
        }
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = ((best.0 - step).max(lo), (best.0 + step).min(hi));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > 1e-7 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let x = 0.5 * (a + b);
    let y = f(x)?;
    Ok(if y > best.1 { (x, y) } else { best })
}

fn trend_product(cfg: &CheckConfig) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("trend-product");
    let opts = cfg.sweep_options();
    let hop = 50.0;
    let mut peaks = Vec::new();
    for n in cfg.even_n(4) {
        let f = |d: f64| Ok(evaluate_point(n, &ModelParams::new(d, hop), &opts)?.prod_rel);
        peaks.push((n, grid_maximum(f, -56.0, -44.0, 48)?));
    }
    let mut drop: f64 = 0.0;
    for w in peaks.windows(2) {
        drop = drop.max(w[0].1 .1 - w[1].1 .1);
    }
    out.part(
        "max of (ΔN₁/N)·ΔN₁A is non-decreasing in N (h = 50)",
        drop,
        1e-9,
    );
    out.note(format!(
        "peaks (N: Δ, value): {}",
        peaks
            .iter()
            .map(|(n, (d, v))| format!("{n}: {d:.4}, {v:.6}"))
            .collect::<Vec<_>>()
            .join("; ")
    ));
    Ok(out)
}

fn random_params(rng: &mut ChaCha8Rng) -> ModelParams {
    ModelParams {
        omega_c: rng.gen_range(-2.0..2.0),
        delta: rng.gen_range(-10.0..10.0),
        lambda: rng.gen_range(0.1..3.0),
        hopping: rng.gen_range(-5.0..5.0),
    }
}

fn structural(cfg: &CheckConfig) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("structural");
    let mut rng = cfg.rng(4);
    let (mut herm, mut block, mut sign, mut scale, mut neg_var, mut complete): (
        f64,
        f64,
        f64,
        f64,
        f64,
        f64,
    ) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for n in 0..=cfg.n_max.min(12) {
        for _ in 0..5 {
            let params = random_params(&mut rng);
            let basis = Basis::new(n);
            let h = build_hamiltonian(&params, &basis)?;
            let norm = h.norm_bound().max(1.0);

            let x: Vec<f64> = (0..basis.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..basis.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            herm = herm.max((dot(&x, &h.apply(&y)?) - dot(&h.apply(&x)?, &y)).abs() / norm);

            for s in basis.iter() {
                for (t, _) in coupled_partners(&params, s) {
                    if t.excitations() != s.excitations() {
                        block = block.max(1.0);
                    }
                }
            }

            let e = full_spectrum(&h)?.eigenvalues;
            let flipped = spectrum(
                &ModelParams {
                    hopping: -params.hopping,
                    ..params
                },
                n,
            )?;
            for (a, b) in e.iter().zip(&flipped) {
                sign = sign.max((a - b).abs() / norm);
            }
            let c = rng.gen_range(0.2..5.0);
            let scaled = spectrum(&params.scaled(c), n)?;
            for (a, b) in e.iter().zip(&scaled) {
                scale = scale.max((c * a - b).abs() / (c * norm));
            }

            let g = ground_state(&h, &SolveOptions::dense())?;
            for site in [Site::One, Site::Two] {
                let m = site_moments(&g.vector, &basis, site)?;
                let a = atom_moments(&g.vector, &basis, site)?;
                neg_var = neg_var.max(-m.variance).max(-a.variance);
            }
            let p: f64 = polariton_group_distribution(&g.vector, &basis, &params)?
                .probabilities()
                .iter()
                .sum();
            complete = complete.max((p - 1.0).abs());
        }
    }
    out.part("⟨x, Hy⟩ = ⟨Hx, y⟩", herm, 1e-12);
    out.part("couplings conserve N", block, 0.0);
    out.part("spectrum invariant under h → −h", sign, 1e-10);
    out.part("spectrum scales with all energies", scale, 1e-10);
    out.part("variances non-negative", neg_var, 1e-12);
    out.part("Σ P(Γ_k) = 1", complete, 1e-10);
    Ok(out)
}

fn lanczos_dense(cfg: &CheckConfig) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("lanczos-dense");
    let mut rng = cfg.rng(5);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    let mut skipped = 0;
    while done < 100 {
        let n = rng.gen_range(1..=cfg.n_max.clamp(1, 12));
        let params = ModelParams::new(rng.gen_range(-10.0..10.0), rng.gen_range(-5.0..5.0));
        let basis = Basis::new(n);
        let h = build_hamiltonian(&params, &basis)?;
        let dense = full_spectrum(&h)?.eigenvalues;
        if dense[1] - dense[0] < 1e-3 {
            skipped += 1;
            continue;
        }
        let lz = lowest_k(&h, 1, &SolveOptions::lanczos())?;
        worst = worst.max((lz.eigenvalues[0] - dense[0]).abs());
        done += 1;
    }
    out.part(
        "ground energy, 100 random instances with N ≤ 12",
        worst,
        1e-9,
    );
    out.note(format!("{skipped} near-degenerate draws skipped"));
    Ok(out)
}

fn insulator_breakdown_report(cfg: &CheckConfig) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("insulator-breakdown");
    let ns = cfg.even_n(4);
    let (records, first) =
        insulator_breakdown(1e-4, &ns, &ModelParams::default(), &cfg.sweep_options())?;
    let worst_nan = records.iter().filter(|r| !r.d_n1_rel.is_finite()).count() as f64;
    out.part("resonant ΔN₁/N evaluated for every N", worst_nan, 0.0);
    out.note(format!(
        "ΔN₁/N at Δ = 0, h = 1e-4: {}",
        records
            .iter()
            .map(|r| format!("{}:{:.4}", r.n_total, r.d_n1_rel))
            .collect::<Vec<_>>()
            .join(" ")
    ));
    out.note(match first {
        Some(n) => format!("first N with ΔN₁/N ≥ {}: {n}", cfg.thresholds.eps_sf),
        None => format!(
            "ΔN₁/N stays below {} for every N ≤ {}",
            cfg.thresholds.eps_sf,
            ns.last().copied().unwrap_or(0)
        ),
    });
    Ok(out)
}
