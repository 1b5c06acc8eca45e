//! Self-validation suites: fast path against the exact-diagonalization
//! oracle, closed forms against the Green's-matrix path, and structural
//! properties of the oracle states.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::correlator::{
    alpha33_closed_form, greens_matrix, homogeneous_alphas, reduced_density_matrix, GreensMatrix,
};
use crate::ed::{build_full_hamiltonian, free_fermion_levels, many_body_spectrum, pair_coefficients, Oracle};
use crate::entanglement::concurrence_xstate;
use crate::error::Result;
use crate::par::{self, Execution};
use crate::spectrum::{analytic_spectrum, build_one_particle_matrix, numeric_spectrum, AlternatingAux, ChainSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationSize {
    Small,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationOptions {
    pub seed: u64,
    pub size: ValidationSize,
    /// Offset added to every closed-form `alpha33`; exercises the failure path.
    pub alpha33_fault: Option<f64>,
    pub execution: Execution,
}

impl ValidationOptions {
    pub fn new(seed: u64, size: ValidationSize) -> Self {
        Self {
            seed,
            size,
            alpha33_fault: None,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    /// Set when a case could not be evaluated at all.
    pub error: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.max_deviation <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub suites: Vec<SuiteReport>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            let _ = write!(
                out,
                "[{}] {:<22} cases={:<4} max_dev={:.3e} tol={:.0e}",
                if s.passed() { "PASS" } else { "FAIL" },
                s.name,
                s.cases,
                s.max_deviation,
                s.tolerance
            );
            if let Some(e) = &s.error {
                let _ = write!(out, " error: {e}");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "{}", if self.passed() { "all suites passed" } else { "validation FAILED" });
        out
    }
}

fn suite(name: &'static str, tolerance: f64, deviations: Vec<Result<f64>>) -> SuiteReport {
    let cases = deviations.len();
    let mut max_deviation: f64 = 0.0;
    let mut error = None;
    for d in deviations {
        match d {
            // NaN must fail the suite
            Ok(v) if v.is_nan() => max_deviation = f64::INFINITY,
            Ok(v) => max_deviation = max_deviation.max(v),
            Err(e) => {
                error.get_or_insert_with(|| e.to_string());
            }
        }
    }
    SuiteReport {
        name,
        cases,
        max_deviation,
        tolerance,
        error,
    }
}

fn fast_greens(spec: &ChainSpec) -> Result<GreensMatrix> {
    greens_matrix(spec, &numeric_spectrum(&build_one_particle_matrix(spec)?)?)
}

/// Largest |dC| and entrywise pair-state deviation over every bond.
pub fn oracle_deviation(spec: &ChainSpec) -> Result<f64> {
    let g = fast_greens(spec)?;
    let oracle = Oracle::with_execution(spec, Execution::Sequential)?;
    let mut worst: f64 = 0.0;
    for i in 1..spec.n_spins {
        let fast = reduced_density_matrix(spec, &g, i, i + 1)?;
        let rho = oracle.pair_state(i, i + 1)?;
        let exact = crate::entanglement::concurrence_general(&rho)?.concurrence;
        worst = worst
            .max((concurrence_xstate(&fast).concurrence - exact).abs())
            .max(fast.max_deviation(&rho));
    }
    Ok(worst)
}

/// Largest magnitude among the coefficients that vanish for an XY chain.
pub fn structural_zero_deviation(spec: &ChainSpec) -> Result<f64> {
    let oracle = Oracle::with_execution(spec, Execution::Sequential)?;
    let n = spec.n_spins;
    let mut worst: f64 = 0.0;
    for i in 1..n {
        for j in i + 1..=n {
            let a = pair_coefficients(&oracle.state, i, j)?;
            let zeros = [
                a[0][1], a[1][0], a[0][2], a[2][0], a[1][3], a[2][3], a[3][1], a[3][2], a[1][2], a[2][1],
                a[1][1] - a[2][2],
            ];
            worst = zeros.iter().map(|z| z.norm()).fold(worst, f64::max);
        }
    }
    Ok(worst)
}

/// Closed-form `alpha33` against the Green's-matrix value on every bond.
pub fn closed_form_deviation(spec: &ChainSpec, fault: f64) -> Result<f64> {
    let aux = AlternatingAux::new(spec)?;
    let g = fast_greens(spec)?;
    let mut worst: f64 = 0.0;
    for i in 1..spec.n_spins {
        let st = reduced_density_matrix(spec, &g, i, i + 1)?;
        let cf = alpha33_closed_form(spec, &aux, i)? + fault;
        worst = worst.max((cf - st.alphas.a33).abs());
    }
    Ok(worst)
}

/// Homogeneous sine sums against the Green's-matrix path on every bond.
pub fn homogeneous_deviation(spec: &ChainSpec) -> Result<f64> {
    let g = fast_greens(spec)?;
    let mut worst: f64 = 0.0;
    for i in 1..spec.n_spins {
        let st = reduced_density_matrix(spec, &g, i, i + 1)?;
        let h = homogeneous_alphas(spec.n_spins, spec.omega_odd, spec.tau, i, i + 1)?;
        let a = st.alphas;
        for (x, y) in [(h.a03, a.a03), (h.a30, a.a30), (h.a33, a.a33), (h.a11.unwrap_or(f64::NAN), a.a11)] {
            worst = worst.max((x - y).abs());
        }
    }
    Ok(worst)
}

pub fn many_body_deviation(spec: &ChainSpec) -> Result<f64> {
    let ed = many_body_spectrum(&build_full_hamiltonian(spec)?)?;
    let ff = free_fermion_levels(spec, &numeric_spectrum(&build_one_particle_matrix(spec)?)?);
    Ok(ed.iter().zip(&ff).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// Analytic versus numeric eigenvalues and Green's matrices.
pub fn spectral_path_deviation(spec: &ChainSpec) -> Result<f64> {
    let numeric = numeric_spectrum(&build_one_particle_matrix(spec)?)?;
    let analytic = analytic_spectrum(spec)?;
    let values = numeric
        .eigenvalues
        .iter()
        .zip(&analytic.eigenvalues)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let ga = greens_matrix(spec, &analytic)?;
    let gn = greens_matrix(spec, &numeric)?;
    Ok(values.max((ga.matrix - gn.matrix).amax()))
}

fn random_zero_field(rng: &mut ChaCha8Rng, lengths: &[usize]) -> ChainSpec {
    let n = lengths[rng.random_range(0..lengths.len())];
    ChainSpec {
        n_spins: n,
        omega_odd: 0.0,
        omega_even: 0.0,
        delta: rng.random_range(0.3..=3.0),
        tau: rng.random_range(0.0..=30.0),
    }
}

fn random_field(rng: &mut ChaCha8Rng, lengths: &[usize]) -> ChainSpec {
    let mut spec = random_zero_field(rng, lengths);
    spec.omega_odd = rng.random_range(-1.0..=1.0);
    spec.omega_even = rng.random_range(-1.0..=1.0);
    spec
}

pub fn run_validation(opts: &ValidationOptions) -> ValidationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let exec = opts.execution;
    let full = opts.size == ValidationSize::Full;

    let (oracle_cases, oracle_lengths): (usize, &[usize]) = if full {
        (50, &[3, 5, 7, 9, 11])
    } else {
        (12, &[3, 5, 7, 9])
    };
    let cases: Vec<ChainSpec> = (0..oracle_cases)
        .map(|_| random_zero_field(&mut rng, oracle_lengths))
        .collect();
    let oracle = suite("oracle-equivalence", 1e-8, par::map(exec, &cases, oracle_deviation));

    let cases: Vec<ChainSpec> = (0..if full { 12 } else { 4 })
        .map(|_| random_field(&mut rng, &[3, 4, 5, 6]))
        .collect();
    let zeros = suite("structural-zeros", 1e-10, par::map(exec, &cases, structural_zero_deviation));

    let fault = opts.alpha33_fault.unwrap_or(0.0);
    let mut closed: Vec<ChainSpec> = (0..if full { 100 } else { 30 })
        .map(|k| {
            let lengths = [3, 5, 7, 9, 11, 13, 17, 21];
            if k % 2 == 0 {
                random_zero_field(&mut rng, &lengths)
            } else {
                random_field(&mut rng, &lengths)
            }
        })
        .collect();
    // fixed anchors: dimerized chain at low temperature, infinite temperature
    closed.push(ChainSpec { n_spins: 17, omega_odd: 0.0, omega_even: 0.0, delta: 3.0, tau: 30.0 });
    closed.push(ChainSpec { n_spins: 9, omega_odd: 0.0, omega_even: 0.0, delta: 1.0, tau: 0.0 });
    let closed_form = suite(
        "closed-form-alpha33",
        1e-9,
        par::map(exec, &closed, |s| closed_form_deviation(s, fault)),
    );

    let homogeneous: Vec<ChainSpec> = (0..if full { 40 } else { 12 })
        .map(|_| {
            let n = rng.random_range(2..=60);
            let w = rng.random_range(-1.0..=1.0);
            ChainSpec { n_spins: n, omega_odd: w, omega_even: w, delta: 1.0, tau: rng.random_range(0.0..=30.0) }
        })
        .collect();
    let homogeneous = suite("homogeneous-alphas", 1e-9, par::map(exec, &homogeneous, homogeneous_deviation));

    let lengths: &[usize] = if full { &[3, 5, 7, 9] } else { &[3, 5, 7] };
    let spectra: Vec<ChainSpec> = lengths
        .iter()
        .map(|&n| ChainSpec { n_spins: n, ..random_field(&mut rng, &[n]) })
        .collect();
    let many_body = suite("many-body-spectrum", 1e-9, par::map(exec, &spectra, many_body_deviation));

    let paths: Vec<ChainSpec> = (0..if full { 40 } else { 12 })
        .map(|_| random_field(&mut rng, &[3, 5, 7, 9, 11, 21, 51, 101]))
        .collect();
    let spectral = suite("spectral-paths", 1e-10, par::map(exec, &paths, spectral_path_deviation));

    let hot: Vec<ChainSpec> = [3usize, 6, 9]
        .iter()
        .map(|&n| ChainSpec { n_spins: n, omega_odd: 0.0, omega_even: 0.0, delta: 1.5, tau: 0.0 })
        .collect();
    let infinite_t = suite(
        "infinite-temperature",
        0.0,
        par::map(exec, &hot, |spec| {
            let g = fast_greens(spec)?;
            let oracle = Oracle::with_execution(spec, Execution::Sequential)?;
            let mut worst: f64 = 0.0;
            for i in 1..spec.n_spins {
                let st = reduced_density_matrix(spec, &g, i, i + 1)?;
                worst = worst.max(concurrence_xstate(&st).concurrence);
                for j in i + 1..=spec.n_spins {
                    worst = worst.max(oracle.concurrence(i, j)?);
                }
            }
            Ok(worst)
        }),
    );

    ValidationReport {
        suites: vec![oracle, zeros, closed_form, homogeneous, many_body, spectral, infinite_t],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_validation_passes() {
        let report = run_validation(&ValidationOptions::new(42, ValidationSize::Small));
        assert!(report.passed(), "{}", report.render());
        let oracle = &report.suites[0];
        assert!(oracle.max_deviation <= 1e-8);
    }

    #[test]
    fn corrupted_closed_form_fails() {
        let mut opts = ValidationOptions::new(42, ValidationSize::Small);
        opts.alpha33_fault = Some(1e-6);
        let report = run_validation(&opts);
        assert!(!report.passed());
        let failing: Vec<_> = report.suites.iter().filter(|s| !s.passed()).map(|s| s.name).collect();
        assert_eq!(failing, vec!["closed-form-alpha33"]);
    }

    #[test]
    fn nan_deviation_fails() {
        assert!(!suite("x", 1.0, vec![Ok(f64::NAN)]).passed());
    }
}
