//! Brute-force exact diagonalization of the spin Hamiltonian.
//!
//! `H = sum_n omega_n I_nz + sum_n D_{n,n+1} (I_nx I_{n+1,x} + I_ny I_{n+1,y})`
//! is built as a dense `2^N x 2^N` real matrix. Basis index bit `N - n`
//! holds site `n` (site 1 is the most significant qubit); bit value 0 is
//! spin up. The thermal state is formed from a dense eigen-decomposition of
//! each fixed-magnetization block, which is exact because `H` conserves
//! total `I_z`.

use nalgebra::{DMatrix, Matrix2, Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::entanglement::concurrence_general;
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::spectrum::{ChainSpec, Spectrum};

/// Hard cap for building the full Hamiltonian.
pub const HAMILTONIAN_MAX_SPINS: usize = 14;
/// Working range of the oracle pipeline.
pub const ORACLE_MAX_SPINS: usize = 12;

/// Single-site spin-1/2 matrices `1, I_x, I_y, I_z` in the `{up, down}` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperatorSet {
    pub ops: [Matrix2<Complex64>; 4],
}

impl Default for SpinOperatorSet {
    fn default() -> Self {
        let o = Complex64::new(0.0, 0.0);
        let h = Complex64::new(0.5, 0.0);
        let ih = Complex64::new(0.0, 0.5);
        Self {
            ops: [
                Matrix2::identity(),
                Matrix2::new(o, h, h, o),
                Matrix2::new(o, -ih, ih, o),
                Matrix2::new(h, o, o, -h),
            ],
        }
    }
}

impl SpinOperatorSet {
    pub fn get(&self, xi: usize) -> &Matrix2<Complex64> {
        &self.ops[xi]
    }

    /// `x^a (x) x^b` on an ordered pair.
    pub fn pair(&self, a: usize, b: usize) -> Matrix4<Complex64> {
        let k = self.ops[a].kronecker(&self.ops[b]);
        Matrix4::from_fn(|r, c| k[(r, c)])
    }

    /// Embed a single-site operator at 1-based `site` of an `n`-spin register.
    pub fn embed(&self, xi: usize, site: usize, n: usize) -> DMatrix<Complex64> {
        let mut out = DMatrix::<Complex64>::identity(1, 1);
        for s in 1..=n {
            let factor = if s == site { self.ops[xi] } else { self.ops[0] };
            out = out.kronecker(&factor);
        }
        out
    }
}

#[inline]
fn bit_of(index: usize, site: usize, n: usize) -> usize {
    (index >> (n - site)) & 1
}

/// Dense spin Hamiltonian of a chain.
#[derive(Debug, Clone, PartialEq)]
pub struct FullHamiltonian {
    pub n_spins: usize,
    pub matrix: DMatrix<f64>,
}

impl FullHamiltonian {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

pub fn build_full_hamiltonian(spec: &ChainSpec) -> Result<FullHamiltonian> {
    spec.validate()?;
    let n = spec.n_spins;
    if n > HAMILTONIAN_MAX_SPINS {
        return Err(Error::OracleTooLarge {
            n,
            cap: HAMILTONIAN_MAX_SPINS,
        });
    }
    let dim = 1usize << n;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for state in 0..dim {
        let mut diag = 0.0;
        for site in 1..=n {
            let sz = if bit_of(state, site, n) == 0 { 0.5 } else { -0.5 };
            diag += spec.omega(site) * sz;
        }
        h[(state, state)] = diag;
        // I_x I_x + I_y I_y = (I_+ I_- + I_- I_+) / 2 flips antiparallel pairs
        for bond in 1..n {
            if bit_of(state, bond, n) != bit_of(state, bond + 1, n) {
                let flipped = state ^ (1 << (n - bond)) ^ (1 << (n - bond - 1));
                h[(flipped, state)] += 0.5 * spec.coupling(bond);
            }
        }
    }
    Ok(FullHamiltonian { n_spins: n, matrix: h })
}

/// Eigen-decomposition of one fixed-magnetization block.
struct Sector {
    states: Vec<usize>,
    energies: Vec<f64>,
    vectors: DMatrix<f64>,
}

fn diagonalize_sectors(h: &FullHamiltonian, exec: Execution) -> Result<Vec<Sector>> {
    let n = h.n_spins;
    let dim = h.dim();
    if dim != 1 << n || h.matrix.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: 1 << n,
            found: dim,
        });
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for state in 0..dim {
        groups[state.count_ones() as usize].push(state);
    }
    for r in 0..dim {
        for c in 0..dim {
            if h.matrix[(r, c)] != 0.0 && r.count_ones() != c.count_ones() {
                return Err(Error::InvalidRequest(
                    "Hamiltonian does not conserve total I_z".into(),
                ));
            }
        }
    }
    par::try_map(exec, &groups, |states| {
        let block = DMatrix::from_fn(states.len(), states.len(), |r, c| h.matrix[(states[r], states[c])]);
        let eig = SymmetricEigen::try_new(block, f64::EPSILON, 10_000).ok_or_else(|| {
            Error::NonConvergence(format!("sector of dimension {}", states.len()))
        })?;
        Ok(Sector {
            states: states.clone(),
            energies: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        })
    })
}

/// Sorted many-body energies of `h`.
pub fn many_body_spectrum(h: &FullHamiltonian) -> Result<Vec<f64>> {
    let mut all: Vec<f64> = diagonalize_sectors(h, Execution::default())?
        .into_iter()
        .flat_map(|s| s.energies)
        .collect();
    all.sort_by(f64::total_cmp);
    Ok(all)
}

/// Sorted energies `1/2 sum_k n_k lambda_k - 1/2 sum_n omega_n` over all
/// occupations `n_k in {0, 1}` of the one-particle modes.
pub fn free_fermion_levels(spec: &ChainSpec, spectrum: &Spectrum) -> Vec<f64> {
    let offset: f64 = (1..=spec.n_spins).map(|s| spec.omega(s)).sum::<f64>() / 2.0;
    let mut levels = vec![-offset];
    for &lam in &spectrum.eigenvalues {
        let shifted: Vec<f64> = levels.iter().map(|e| e + lam / 2.0).collect();
        levels.extend(shifted);
    }
    levels.sort_by(f64::total_cmp);
    levels
}

/// Gibbs state `exp(-beta H) / Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalState {
    pub n_spins: usize,
    pub tau: f64,
    pub rho: DMatrix<f64>,
    pub ground_energy: f64,
    /// `Z * exp(beta E_0)`, finite for any `tau`.
    pub shifted_partition: f64,
}

impl ThermalState {
    pub fn log_partition(&self) -> f64 {
        self.shifted_partition.ln() - 2.0 * self.tau * self.ground_energy
    }

    /// `tr(rho O)` for a dense real operator.
    pub fn expectation(&self, op: &DMatrix<f64>) -> f64 {
        self.rho.component_mul(&op.transpose()).sum()
    }
}

pub fn thermal_state(h: &FullHamiltonian, tau: f64) -> Result<ThermalState> {
    thermal_state_with(h, tau, Execution::default())
}

pub fn thermal_state_with(h: &FullHamiltonian, tau: f64, exec: Execution) -> Result<ThermalState> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::InvalidSpec(format!("tau must be non-negative, got {tau}")));
    }
    let sectors = diagonalize_sectors(h, exec)?;
    let beta = 2.0 * tau;
    let ground = sectors
        .iter()
        .flat_map(|s| s.energies.iter().copied())
        .fold(f64::INFINITY, f64::min);

    let blocks = par::map(exec, &sectors, |s| {
        let w: Vec<f64> = s.energies.iter().map(|e| (-beta * (e - ground)).exp()).collect();
        let scaled = DMatrix::from_fn(s.vectors.nrows(), s.vectors.ncols(), |r, c| s.vectors[(r, c)] * w[c]);
        (scaled * s.vectors.transpose(), w.iter().sum::<f64>())
    });

    let dim = h.dim();
    let mut rho = DMatrix::zeros(dim, dim);
    let mut z = 0.0;
    for (sector, (block, weight)) in sectors.iter().zip(blocks) {
        z += weight;
        for (r, &sr) in sector.states.iter().enumerate() {
            for (c, &sc) in sector.states.iter().enumerate() {
                rho[(sr, sc)] = block[(r, c)];
            }
        }
    }
    rho /= z;
    Ok(ThermalState {
        n_spins: h.n_spins,
        tau,
        rho,
        ground_energy: ground,
        shifted_partition: z,
    })
}

fn check_sites(n: usize, i: usize, j: usize) -> Result<()> {
    if i == 0 || i >= j || j > n {
        return Err(Error::SiteOutOfRange { i, j, n });
    }
    Ok(())
}

/// Basis states with the bits of sites `i` and `j` cleared.
fn environment(n: usize, i: usize, j: usize) -> impl Iterator<Item = usize> {
    let mask = (1usize << (n - i)) | (1usize << (n - j));
    (0..1usize << n).filter(move |s| s & mask == 0)
}

/// Reduced state of sites `i < j` by summing over all environment
/// configurations.
pub fn partial_trace_pair(state: &ThermalState, i: usize, j: usize) -> Result<Matrix4<Complex64>> {
    let n = state.n_spins;
    check_sites(n, i, j)?;
    let (mi, mj) = (1usize << (n - i), 1usize << (n - j));
    let local = |q: usize| (if q & 2 != 0 { mi } else { 0 }) | (if q & 1 != 0 { mj } else { 0 });
    let mut out = Matrix4::<Complex64>::zeros();
    for base in environment(n, i, j) {
        for r in 0..4 {
            for c in 0..4 {
                out[(r, c)] += state.rho[(base | local(r), base | local(c))];
            }
        }
    }
    Ok(out)
}

/// Coefficients `alpha^{ab} = 2^{N-2} tr(rho x_i^a x_j^b) / tr((x_i^a)^2 (x_j^b)^2)`
/// of the pair state, evaluated on the full register.
pub fn pair_coefficients(state: &ThermalState, i: usize, j: usize) -> Result<[[Complex64; 4]; 4]> {
    let n = state.n_spins;
    check_sites(n, i, j)?;
    let ops = SpinOperatorSet::default();
    let dim = 1usize << n;
    let (mi, mj) = (1usize << (n - i), 1usize << (n - j));
    let mut alpha = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (a, row) in alpha.iter_mut().enumerate() {
        for (b, slot) in row.iter_mut().enumerate() {
            let (oa, ob) = (ops.get(a), ops.get(b));
            // tr(rho O) = sum_{r,c} rho[c, r] O[r, c]; O only acts on bits i, j.
            let mut tr = Complex64::new(0.0, 0.0);
            for r in 0..dim {
                let (ri, rj) = (bit_of(r, i, n), bit_of(r, j, n));
                for ci in 0..2 {
                    for cj in 0..2 {
                        let elem = oa[(ri, ci)] * ob[(rj, cj)];
                        if elem.norm_sqr() == 0.0 {
                            continue;
                        }
                        let c = (r & !(mi | mj)) | (if ci == 1 { mi } else { 0 }) | (if cj == 1 { mj } else { 0 });
                        tr += elem * state.rho[(c, r)];
                    }
                }
            }
            let norm_a = if a == 0 { 1.0 } else { 0.25 };
            let norm_b = if b == 0 { 1.0 } else { 0.25 };
            let denom = dim as f64 * norm_a * norm_b;
            *slot = tr * (dim as f64 / 4.0) / denom;
        }
    }
    Ok(alpha)
}

/// `sum_{ab} alpha^{ab} x^a (x) x^b`.
pub fn reconstruct_pair(alpha: &[[Complex64; 4]; 4]) -> Matrix4<Complex64> {
    let ops = SpinOperatorSet::default();
    let mut out = Matrix4::zeros();
    for (a, row) in alpha.iter().enumerate() {
        for (b, &coef) in row.iter().enumerate() {
            out += ops.pair(a, b) * coef;
        }
    }
    out
}

/// Thermal state of one chain, reusable across pairs.
#[derive(Debug, Clone)]
pub struct Oracle {
    pub spec: ChainSpec,
    pub state: ThermalState,
}

impl Oracle {
    pub fn new(spec: &ChainSpec) -> Result<Self> {
        Self::with_execution(spec, Execution::default())
    }

    pub fn with_execution(spec: &ChainSpec, exec: Execution) -> Result<Self> {
        spec.validate()?;
        if spec.n_spins > ORACLE_MAX_SPINS {
            return Err(Error::OracleTooLarge {
                n: spec.n_spins,
                cap: ORACLE_MAX_SPINS,
            });
        }
        let h = build_full_hamiltonian(spec)?;
        let state = thermal_state_with(&h, spec.tau, exec)?;
        Ok(Self { spec: *spec, state })
    }

    pub fn pair_state(&self, i: usize, j: usize) -> Result<Matrix4<Complex64>> {
        partial_trace_pair(&self.state, i, j)
    }

    pub fn concurrence(&self, i: usize, j: usize) -> Result<f64> {
        Ok(concurrence_general(&self.pair_state(i, j)?)?.concurrence)
    }
}

/// Full pipeline: Hamiltonian, Gibbs state, partial trace, concurrence.
pub fn oracle_concurrence(spec: &ChainSpec, i: usize, j: usize) -> Result<f64> {
    check_sites(spec.n_spins, i, j)?;
    Oracle::new(spec)?.concurrence(i, j)
}
