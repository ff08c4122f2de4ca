use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{empirical_mean_density, haar_pair, haar_state, mc_success, overlap_identity_with, random_unitary};
use super::{grid_scan_max, kolmogorov_pvalue, ks_statistic, simulate_programmable, Which};
use crate::error::{Error, Result};
use crate::jordan::{self, build_gh_bases, cross_gram};
use crate::linalg::{self, CMatrix};
use crate::optics::{self, discriminator_network, reck_decompose, DiscriminatorNetwork, D1_OUTPUT, D2_OUTPUT};
use crate::povm::{self, MeasurementTriple, Priors, ReciprocalBasis};
use crate::spaces::{self, SpaceSpec, StateVector};

/// Numerical thresholds used by [`verify_all`].
///
/// Statistical checks (Monte Carlo, KS, click sampling) use fixed sigma or
/// p-value thresholds and ignore these.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Identities that hold to rounding error (Gram matrices, Born rule, unambiguity).
    pub strict: f64,
    /// Operator identities involving eigen/SVD solvers or long sums.
    pub op: f64,
    /// Singular-value cutoff for rank measurements.
    pub rank: f64,
    /// Agreement between closed-form optima and grid scans.
    pub scan: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { strict: 1e-12, op: 1e-10, rank: spaces::TAU_RANK, scan: 1e-6 }
    }
}

impl Tolerances {
    /// Sets every comparison tolerance to `t`; the rank cutoff is left alone
    /// because it changes what is measured rather than how strictly.
    pub fn uniform(t: f64) -> Self {
        Self { strict: t, op: t, scan: t, ..Self::default() }
    }
}

/// One line item of the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Qudit dimension, or `None` for dimension-free checks.
    pub n: Option<usize>,
    pub topic: String,
    pub passed: bool,
    pub worst_deviation: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Outcome of [`verify_all`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub n_max: usize,
    pub tolerances: Tolerances,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn find(&self, name: &str, n: Option<usize>) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name && c.n == n)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failed = self.failures().count();
        writeln!(f, "n_max: {}", self.n_max)?;
        writeln!(f, "checks: {}", self.checks.len())?;
        writeln!(f, "passed: {}", self.checks.len() - failed)?;
        writeln!(f, "failed: {failed}")?;
        writeln!(f, "status: {}", if failed == 0 { "pass" } else { "fail" })?;
        for c in &self.checks {
            writeln!(f)?;
            match c.n {
                Some(n) => writeln!(f, "[{} n={n}]", c.name)?,
                None => writeln!(f, "[{}]", c.name)?,
            }
            writeln!(f, "topic: {}", c.topic)?;
            writeln!(f, "passed: {}", c.passed)?;
            writeln!(f, "worst_deviation: {:.6e}", c.worst_deviation)?;
            writeln!(f, "tolerance: {:.6e}", c.tolerance)?;
            if let Some(note) = &c.note {
                writeln!(f, "note: {note}")?;
            }
        }
        Ok(())
    }
}

/// Collects checks; a failing computation becomes a failed check instead of an error.
struct Collector {
    checks: Vec<Check>,
}

impl Collector {
    fn at_most(&mut self, name: &str, n: Option<usize>, topic: &str, tol: f64, dev: Result<f64>) {
        self.push(name, n, topic, tol, dev, |d, t| d <= t);
    }

    /// Passes when the deviation exceeds the tolerance (used to reject a formula).
    fn at_least(&mut self, name: &str, n: Option<usize>, topic: &str, tol: f64, dev: Result<f64>) {
        self.push(name, n, topic, tol, dev, |d, t| d > t);
    }

    fn push(
        &mut self,
        name: &str,
        n: Option<usize>,
        topic: &str,
        tol: f64,
        dev: Result<f64>,
        ok: impl Fn(f64, f64) -> bool,
    ) {
        let (worst_deviation, passed, note) = match dev {
            Ok(d) => (d, !d.is_nan() && ok(d, tol), None),
            Err(e) => (f64::INFINITY, false, Some(e.to_string())),
        };
        self.checks.push(Check {
            name: name.to_owned(),
            n,
            topic: topic.to_owned(),
            passed,
            worst_deviation,
            tolerance: tol,
            note,
        });
    }
}

const OMEGA_GRID: usize = 50;
const HAAR_PAIRS: u64 = 100;
const SCAN_STEP: f64 = 1e-6;

fn omega_grid(points: usize) -> Vec<f64> {
    (0..points).map(|k| FRAC_PI_2 * k as f64 / (points - 1) as f64).collect()
}

fn prior_grid() -> Vec<Priors> {
    (1..=99).map(|k| Priors::from_eta1(k as f64 / 100.0).expect("in range")).collect()
}

/// Runs every invariant suite for `n = 2..=n_max` plus the dimension-free checks.
pub fn verify_all(n_max: usize, tol: Tolerances) -> Result<Report> {
    if n_max < 2 {
        return Err(Error::domain(format!("n_max must be at least 2, got {n_max}")));
    }
    let mut c = Collector { checks: Vec::new() };
    for n in 2..=n_max {
        per_dimension(&mut c, n, &tol);
    }
    dimension_free(&mut c, n_max, &tol);
    Ok(Report { n_max, tolerances: tol, checks: c.checks })
}

fn per_dimension(c: &mut Collector, n: usize, tol: &Tolerances) {
    let s = Some(n);
    c.at_most(
        "dimension_formulas",
        s,
        "symmetric subspace dimensions",
        0.0,
        (|| {
            let measured = spaces::measured_dimension_table(n, tol.rank)?;
            Ok(measured.max_deviation(&spaces::dimension_table(n)?) as f64)
        })(),
    );

    c.at_most(
        "symmetric_projectors",
        s,
        "symmetric projectors",
        tol.op,
        (|| {
            let ps = [
                spaces::symmetric_projector(n, 2)?,
                spaces::s0_projector(n)?,
                spaces::s1_projector(n)?,
                spaces::s2_projector(n)?,
            ];
            Ok(ps.iter().map(|p| p.idempotency_defect().max(p.hermiticity_defect())).fold(0.0, f64::max))
        })(),
    );

    let set = match build_gh_bases(n) {
        Ok(set) => set,
        Err(e) => {
            c.at_most("jordan_bases", s, "Jordan pair construction", 0.0, Err(e));
            return;
        }
    };

    c.at_most(
        "jordan_overlaps",
        s,
        "Jordan pair overlaps",
        tol.strict,
        (|| {
            let id = CMatrix::identity(set.len(), set.len());
            let gg = linalg::max_abs_diff(&cross_gram(&set.g, &set.g)?, &id);
            let hh = linalg::max_abs_diff(&cross_gram(&set.h, &set.h)?, &id);
            Ok(jordan::overlap_matrix(&set)?.max_deviation.max(gg).max(hh))
        })(),
    );

    c.at_most(
        "jordan_cosines",
        s,
        "principal angles between g and h spans",
        tol.op,
        (|| {
            let a = jordan::jordan_angles(&set.g, &set.h)?;
            Ok(a.cosines.iter().map(|x| (x - 0.5).abs()).fold(0.0, f64::max))
        })(),
    );

    c.at_most(
        "block_orthogonality",
        s,
        "Jordan block orthogonality",
        tol.strict,
        jordan::block_orthogonality_defect(&set),
    );

    c.at_most("density_jordan_form", s, "averaged input densities", tol.strict, jordan::density_consistency(n));

    let povms: Result<Vec<MeasurementTriple>> = ReciprocalBasis::from_pair_set(&set)
        .and_then(|b| omega_grid(OMEGA_GRID).into_iter().map(|w| b.povm(w)).collect());
    let povms = match povms {
        Ok(p) => p,
        Err(e) => {
            c.at_most("povm_construction", s, "POVM construction", 0.0, Err(e));
            return;
        }
    };

    c.at_most(
        "povm_positivity",
        s,
        "POVM validity",
        tol.op,
        Ok(povms.iter().flat_map(|p| p.min_eigenvalues()).map(|m| (-m).max(0.0)).fold(0.0, f64::max)),
    );

    c.at_most(
        "povm_completeness",
        s,
        "POVM validity",
        tol.op,
        Ok(povms.iter().map(MeasurementTriple::completeness_defect).fold(0.0, f64::max)),
    );

    let densities = spaces::mean_density_operators(n);
    c.at_most(
        "unambiguity",
        s,
        "no wrong identification",
        tol.strict,
        (|| {
            let (r1, r2) = densities.as_ref().map_err(|e| Error::contract(e.to_string()))?;
            let mut worst = 0.0f64;
            for p in &povms {
                worst = worst.max(p.pi1.trace_product(r2)?.abs()).max(p.pi2.trace_product(r1)?.abs());
            }
            Ok(worst)
        })(),
    );

    c.at_most(
        "average_success_closed_form",
        s,
        "averaged success probability",
        tol.op,
        (|| {
            let (r1, r2) = densities.as_ref().map_err(|e| Error::contract(e.to_string()))?;
            let mut worst = 0.0f64;
            for p in &povms {
                for priors in [Priors::from_eta1(0.1)?, Priors::equal(), Priors::from_eta1(0.9)?] {
                    let direct = povm::success_from_operators(p, r1, r2, priors)?;
                    worst = worst.max((direct - povm::average_success(n, p.omega1, priors)?).abs());
                }
            }
            Ok(worst)
        })(),
    );

    c.at_most(
        "pure_success_closed_form",
        s,
        "pure-state success probability",
        tol.op,
        (|| {
            let mut worst = 0.0f64;
            for t in 0..HAAR_PAIRS {
                let (a, b) = haar_pair(n, 1000 + n as u64, t)?;
                let p = &povms[t as usize % povms.len()];
                let priors = Priors::from_eta1(0.05 + 0.9 * t as f64 / HAAR_PAIRS as f64)?;
                let direct = povm::pure_success_from_operators(p, &a, &b, priors)?;
                worst = worst.max((direct - povm::pure_success(&a, &b, p.omega1, priors, n)?).abs());
            }
            Ok(worst)
        })(),
    );

    c.at_most(
        "dimension_independence",
        s,
        "conditional success does not depend on n",
        tol.op,
        (|| {
            let mut worst = 0.0f64;
            for (k, p) in povms.iter().enumerate().step_by(7) {
                let (a, b) = haar_pair(n, 2000, k as u64)?;
                let priors = Priors::from_eta1(0.3)?;
                let overlap = a.inner(&b)?.norm_sqr();
                let ratio = povm::pure_success_from_operators(p, &a, &b, priors)? / (1.0 - overlap);
                // n = 2 reference value of the same ratio, evaluated on operators
                let reference = reference_ratio(p.omega1, priors)?;
                worst = worst.max((ratio - reference).abs());
            }
            Ok(worst)
        })(),
    );

    c.at_most(
        "overlap_identity",
        s,
        "reciprocal-state overlap identity",
        tol.op,
        (|| {
            let basis = ReciprocalBasis::from_pair_set(&set)?;
            let mut worst = 0.0f64;
            for t in 0..HAAR_PAIRS {
                let (a, b) = haar_pair(n, 3000 + n as u64, t)?;
                worst = worst.max(overlap_identity_with(&basis, &a, &b)?.max_discrepancy());
            }
            Ok(worst)
        })(),
    );

    c.at_most(
        "discriminator_born_rule",
        s,
        "optical network reproduces the POVM",
        tol.strict,
        (|| {
            let (g, h) = (&set.g[0], &set.h[0]);
            let mut worst = 0.0f64;
            for w in omega_grid(20) {
                let net = discriminator_network(w)?;
                let block = povm::subspace_povm(g, h, w)?;
                let pg = net.probabilities(&DiscriminatorNetwork::input_g())?;
                let ph = net.probabilities(&DiscriminatorNetwork::input_h())?;
                let qg = block.probabilities(g)?;
                let qh = block.probabilities(h)?;
                for (x, y) in
                    [(pg[0], qg[0]), (pg[1], qg[1]), (pg[2], qg[2]), (ph[0], qh[0]), (ph[1], qh[1]), (ph[2], qh[2])]
                {
                    worst = worst.max((x - y).abs());
                }
            }
            Ok(worst)
        })(),
    );

    c.at_most(
        "monte_carlo_average",
        s,
        "Haar average of pure-state success (sigmas)",
        3.0,
        (|| {
            let mut worst = 0.0f64;
            for (k, w) in [0.2, 0.6, 1.2].into_iter().enumerate() {
                for (j, eta1) in [0.1, 0.5, 0.9].into_iter().enumerate() {
                    let priors = Priors::from_eta1(eta1)?;
                    let est = mc_success(n, w, priors, 4000, 40 + (3 * k + j) as u64)?;
                    worst = worst.max(est.z_score(povm::average_success(n, w, priors)?));
                }
            }
            Ok(worst)
        })(),
    );

    let (ks, crit) = haar_ks(n, 10_000, 77);
    c.at_most("haar_first_amplitude_ks", s, "Haar sampler marginal law (KS statistic)", crit, ks);
}

/// `pure_success / (1 − overlap)` evaluated on explicit operators at `n = 2`
/// for a fixed pair with overlap ½.
fn reference_ratio(omega1: f64, priors: Priors) -> Result<f64> {
    let sp = SpaceSpec::single(2)?;
    let a = StateVector::basis(sp, &[1])?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let b = StateVector::from_slice(sp, &[linalg::re(h), linalg::re(h)])?;
    let p = ReciprocalBasis::new(2)?.povm(omega1)?;
    Ok(povm::pure_success_from_operators(&p, &a, &b, priors)? / 0.5)
}

/// KS statistic of `|a₁|²` against `Beta(1, n−1)` and the critical value at p = 10⁻³.
pub(super) fn haar_ks(n: usize, samples: u64, seed: u64) -> (Result<f64>, f64) {
    let crit = ks_critical(1e-3, samples as usize);
    let res = (|| {
        let xs = (0..samples)
            .map(|t| Ok(haar_pair(n, seed, t)?.0.amplitudes()[0].norm_sqr()))
            .collect::<Result<Vec<f64>>>()?;
        let k = ks_statistic(&xs, |x| 1.0 - (1.0 - x.clamp(0.0, 1.0)).powi(n as i32 - 1))?;
        Ok(k.statistic)
    })();
    (res, crit)
}

/// Smallest KS statistic whose asymptotic p-value is at most `p`.
fn ks_critical(p: f64, m: usize) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_pvalue(mid, m) > p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

fn dimension_free(c: &mut Collector, n_max: usize, tol: &Tolerances) {
    let priors = prior_grid();

    let scans: Result<Vec<f64>> = priors
        .iter()
        .map(|p| {
            let (e1, e2) = (p.eta1, p.eta2);
            Ok(grid_scan_max(|x| 1.0 - e1 * x / 4.0 - e2 / x, 1.0, 4.0, SCAN_STEP)?.max)
        })
        .collect();

    c.at_most(
        "regime_optimum_scan",
        None,
        "per-block optimum vs 1e-6 grid scan",
        tol.scan,
        (|| {
            let scans = scans.as_ref().map_err(|e| Error::contract(e.to_string()))?;
            let mut worst = 0.0f64;
            for (p, s) in priors.iter().zip(scans) {
                worst = worst.max((povm::optimal_subspace(*p)?.value - s).abs());
            }
            Ok(worst)
        })(),
    );

    c.at_most(
        "average_optimum_scan",
        Some(n_max),
        "averaged optimum vs 1e-6 grid scan",
        tol.scan,
        (|| {
            let nf = n_max as f64;
            let mut worst = 0.0f64;
            for p in &priors {
                let (e1, e2) = (p.eta1, p.eta2);
                // P̃ with sin²ω₁ = (4 − x)/3 and cos²ω₁ = (x − 1)/3
                let scan = grid_scan_max(
                    |x| (nf - 1.0) * e1 * (4.0 - x) / (6.0 * nf) + 2.0 * (nf - 1.0) * e2 * (x - 1.0) / (3.0 * nf * x),
                    1.0,
                    4.0,
                    SCAN_STEP,
                )?;
                worst = worst.max((povm::optimal_average(n_max, *p)?.value - scan.max).abs());
            }
            Ok(worst)
        })(),
    );

    c.at_least(
        "doubled_root_middle_value_rejected",
        None,
        "1 - 2 sqrt(eta1 eta2) disagrees with the scan",
        tol.scan,
        (|| {
            let scans = scans.as_ref().map_err(|e| Error::contract(e.to_string()))?;
            let mut closest = f64::INFINITY;
            for (p, s) in priors.iter().zip(scans) {
                if povm::optimal_x(*p)?.0 == povm::Regime::Middle {
                    closest = closest.min((1.0 - 2.0 * (p.eta1 * p.eta2).sqrt() - s).abs());
                }
            }
            Ok(closest)
        })(),
    );

    c.at_most(
        "regime_continuity",
        None,
        "optimum is continuous across regime boundaries",
        tol.strict,
        (|| {
            let mut worst = 0.0f64;
            for b in [0.2, 0.8] {
                let below = povm::optimal_subspace(Priors::from_eta1(b - 1e-14)?)?.value;
                let at = povm::optimal_subspace(Priors::from_eta1(b)?)?.value;
                let above = povm::optimal_subspace(Priors::from_eta1(b + 1e-14)?)?.value;
                worst = worst.max((below - at).abs()).max((above - at).abs());
            }
            Ok(worst)
        })(),
    );

    c.at_most(
        "reck_round_trip",
        None,
        "triangular synthesis of random unitaries",
        tol.op,
        (|| {
            let mut worst = 0.0f64;
            for dim in 1..=8 {
                for seed in 0..3 {
                    let u = random_unitary(dim, 42 + seed)?;
                    let net = reck_decompose(&u)?;
                    if net.layers().len() > dim * (dim - 1) / 2 {
                        return Err(Error::contract(format!("{} layers for N = {dim}", net.layers().len())));
                    }
                    worst = worst.max(linalg::max_abs_diff(&net.unitary(), &u));
                }
            }
            Ok(worst)
        })(),
    );

    c.at_most(
        "state_preparation",
        None,
        "single-photon state preparation",
        tol.op,
        (|| {
            let mut worst = 0.0f64;
            for dim in 1..=8 {
                let psi = haar_state(dim, 7 + dim as u64)?;
                let net = optics::prepare_state_network(psi.amplitudes().as_slice())?;
                let col = net.unitary().column(0).into_owned();
                worst = (col - psi.amplitudes()).iter().map(|z| z.norm()).fold(worst, f64::max);
            }
            Ok(worst)
        })(),
    );

    c.at_most(
        "network_unitarity",
        None,
        "discriminator network is unitary",
        tol.strict,
        (|| {
            let mut worst = 0.0f64;
            for w in omega_grid(20) {
                worst = worst.max(discriminator_network(w)?.interferometer.unitarity_defect());
            }
            Ok(worst)
        })(),
    );

    c.at_most(
        "mean_density_sampling",
        Some(2),
        "Haar average reproduces the input densities",
        0.01,
        (|| {
            let (r1, _) = spaces::mean_density_operators(2)?;
            let emp = empirical_mean_density(2, Which::First, 20_000, 5)?;
            emp.max_abs_diff(&r1)
        })(),
    );

    c.at_most(
        "click_sampling",
        None,
        "sampled clicks match Born probabilities (sigmas)",
        5.0,
        (|| {
            let net = discriminator_network(povm::omega1_from_x(2.0)?)?;
            let input = StateVector::new(SpaceSpec::single(3)?, DiscriminatorNetwork::input_g())?;
            let stats = optics::simulate_clicks(&net.interferometer, &input, 100_000, 11)?;
            let exact = net.probabilities(&DiscriminatorNetwork::input_g())?;
            let f = stats.frequencies();
            let mut worst = 0.0f64;
            for k in [D1_OUTPUT, D2_OUTPUT] {
                let sigma = stats.sigma(exact[k]);
                let d = (f[k] - exact[k]).abs();
                worst = worst.max(if sigma > 0.0 {
                    d / sigma
                } else if d == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                });
            }
            Ok(worst)
        })(),
    );

    c.at_most(
        "programmable_simulation",
        Some(2),
        "end-to-end discriminator simulation (sigmas)",
        5.0,
        (|| {
            let run = simulate_programmable(2, Priors::equal(), povm::omega1_from_x(2.0)?, 100_000, 12)?;
            if run.errors > 0 {
                return Err(Error::contract(format!("{} misidentified shots", run.errors)));
            }
            Ok(run.z_score())
        })(),
    );
}
