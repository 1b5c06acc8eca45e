//! Chain model and the one-particle spectrum.
//!
//! After the Jordan-Wigner mapping the XY chain becomes
//! `H = 1/2 c^† M c - 1/2 sum_n omega_n`, where `M` is the tridiagonal
//! one-particle matrix with diagonal `2 omega_n` and off-diagonal couplings
//! `D_{n,n+1}`. Mode energies are `lambda_k / 2`.
//!
//! Two routes to the spectrum of `M` are provided: a numeric tridiagonal QL
//! solver valid for any chain, and closed forms for odd-length alternating
//! chains (plus the homogeneous sine-mode solution for any length).

mod tridiag;

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Below this distance from `delta = 1` the mid-mode norm uses its limit.
const UNIFORM_COUPLING_EPS: f64 = 1e-8;

/// Physical parameters of an open alternating XY chain.
///
/// Energies are in units of the odd-bond coupling `D1`. Odd sites carry
/// Larmor frequency `omega_odd`, even sites `omega_even`; odd bonds
/// `(1,2), (3,4), ...` have coupling 1 and even bonds `delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    pub n_spins: usize,
    pub omega_odd: f64,
    pub omega_even: f64,
    pub delta: f64,
    /// Dimensionless inverse temperature `beta * D1 / 2`; 0 is infinite
    /// temperature.
    pub tau: f64,
}

impl ChainSpec {
    pub fn new(n_spins: usize, omega_odd: f64, omega_even: f64, delta: f64, tau: f64) -> Result<Self> {
        let spec = Self {
            n_spins,
            omega_odd,
            omega_even,
            delta,
            tau,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Zero-field chain with coupling ratio `delta`.
    pub fn zero_field(n_spins: usize, delta: f64, tau: f64) -> Result<Self> {
        Self::new(n_spins, 0.0, 0.0, delta, tau)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_spins < 2 {
            return Err(Error::InvalidSpec(format!(
                "need at least 2 spins, got {}",
                self.n_spins
            )));
        }
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "coupling ratio must be positive and finite, got {}",
                self.delta
            )));
        }
        if !(self.tau.is_finite() && self.tau >= 0.0) {
            return Err(Error::InvalidSpec(format!(
                "tau must be non-negative and finite, got {}",
                self.tau
            )));
        }
        if !(self.omega_odd.is_finite() && self.omega_even.is_finite()) {
            return Err(Error::InvalidSpec("Larmor frequencies must be finite".into()));
        }
        Ok(())
    }

    /// Larmor frequency of 1-based `site`.
    pub fn omega(&self, site: usize) -> f64 {
        if site % 2 == 1 {
            self.omega_odd
        } else {
            self.omega_even
        }
    }

    /// Coupling of the bond `(bond, bond + 1)`, 1-based.
    pub fn coupling(&self, bond: usize) -> f64 {
        if bond % 2 == 1 {
            1.0
        } else {
            self.delta
        }
    }

    /// `beta` in units of `1 / D1`.
    pub fn beta(&self) -> f64 {
        2.0 * self.tau
    }

    pub fn with_tau(self, tau: f64) -> Self {
        Self { tau, ..self }
    }

    pub fn with_delta(self, delta: f64) -> Self {
        Self { delta, ..self }
    }

    pub fn with_n(self, n_spins: usize) -> Self {
        Self { n_spins, ..self }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.delta == 1.0 && self.omega_odd == self.omega_even
    }
}

/// The tridiagonal matrix `D + 2 Omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneParticleMatrix {
    pub diag: Vec<f64>,
    pub off_diag: Vec<f64>,
}

impl OneParticleMatrix {
    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.order();
        DMatrix::from_fn(n, n, |r, c| {
            if r == c {
                self.diag[r]
            } else if r + 1 == c {
                self.off_diag[r]
            } else if c + 1 == r {
                self.off_diag[c]
            } else {
                0.0
            }
        })
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    /// `tr(M^2)`, used for spectral sum rules.
    pub fn frobenius_sq(&self) -> f64 {
        self.diag.iter().map(|d| d * d).sum::<f64>()
            + 2.0 * self.off_diag.iter().map(|e| e * e).sum::<f64>()
    }

    /// `(M v)_row` without forming the dense matrix.
    fn apply_row(&self, v: impl Fn(usize) -> f64, row: usize) -> f64 {
        let mut acc = self.diag[row] * v(row);
        if row > 0 {
            acc += self.off_diag[row - 1] * v(row - 1);
        }
        if row + 1 < self.order() {
            acc += self.off_diag[row] * v(row + 1);
        }
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumSource {
    Analytic,
    Numeric,
}

/// Eigenvalues (descending) and orthonormal eigenvectors (columns) of the
/// one-particle matrix. Column `k - 1` holds `|u_k>`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
    pub source: SpectrumSource,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Amplitude `u_{site,k}` with 1-based indices.
    pub fn amplitude(&self, site: usize, k: usize) -> f64 {
        self.eigenvectors[(site - 1, k - 1)]
    }

    /// `max |<u_k|u_l> - delta_kl|`.
    pub fn orthonormality_error(&self) -> f64 {
        let gram = self.eigenvectors.transpose() * &self.eigenvectors;
        (gram - DMatrix::identity(self.len(), self.len())).amax()
    }

    /// Largest relative residual `|M u_k - lambda_k u_k|_inf / max(1, |lambda_k|)`.
    pub fn max_relative_residual(&self, m: &OneParticleMatrix) -> f64 {
        let n = self.len();
        (0..n)
            .map(|k| {
                let lam = self.eigenvalues[k];
                let col = self.eigenvectors.column(k);
                let worst = (0..n)
                    .map(|row| (m.apply_row(|r| col[r], row) - lam * col[row]).abs())
                    .fold(0.0, f64::max);
                worst / lam.abs().max(1.0)
            })
            .fold(0.0, f64::max)
    }

    /// Copy with selected eigenvector columns negated.
    pub fn with_flipped_columns(&self, flip: &[bool]) -> Spectrum {
        let mut out = self.clone();
        for (k, &f) in flip.iter().enumerate() {
            if f {
                out.eigenvectors.column_mut(k).neg_mut();
            }
        }
        out
    }
}

/// Fill the alternating tridiagonal one-particle matrix.
pub fn build_one_particle_matrix(spec: &ChainSpec) -> Result<OneParticleMatrix> {
    spec.validate()?;
    let n = spec.n_spins;
    Ok(OneParticleMatrix {
        diag: (1..=n).map(|site| 2.0 * spec.omega(site)).collect(),
        off_diag: (1..n).map(|bond| spec.coupling(bond)).collect(),
    })
}

/// Numerically diagonalize the one-particle matrix (any chain).
pub fn numeric_spectrum(m: &OneParticleMatrix) -> Result<Spectrum> {
    let (eigenvalues, eigenvectors) = tridiag::eigh_tridiagonal(&m.diag, &m.off_diag)?;
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        source: SpectrumSource::Numeric,
    })
}

/// Per-mode closed-form quantities for `k != (N+1)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeAux {
    /// 1-based mode index.
    pub k: usize,
    /// `1 + 2 delta cos(2 pi k / (N+1)) + delta^2`.
    pub delta_k: f64,
    /// Normalization `A_k`.
    pub amplitude: f64,
    /// `L_k = D1 / (lambda_k - 2 omega_1)`.
    pub l: f64,
    /// `f_k = A_k^2`.
    pub f: f64,
    /// `R_k = A_k^2 L_k^2`.
    pub r: f64,
    /// `eps_k = lambda_k / D1`.
    pub eps: f64,
}

/// Closed-form helper quantities of an odd-length alternating chain.
#[derive(Debug, Clone, PartialEq)]
pub struct AlternatingAux {
    pub n_spins: usize,
    pub delta: f64,
    /// `(omega_2 - omega_1) / D1`.
    pub c1: f64,
    /// `(omega_2 + omega_1) / D1`.
    pub c2: f64,
    /// Index `(N+1)/2` of the mode living on odd sites only.
    pub mid: usize,
    /// Norm `B` of the mid mode.
    pub b: f64,
    /// Energy `2 omega_1 / D1` of the mid mode.
    pub mid_eps: f64,
    /// All other modes in ascending `k`.
    pub modes: Vec<ModeAux>,
}

impl AlternatingAux {
    pub fn new(spec: &ChainSpec) -> Result<Self> {
        spec.validate()?;
        let n = spec.n_spins;
        if n % 2 == 0 {
            return Err(Error::EvenChainLength(n));
        }
        let delta = spec.delta;
        let c1 = spec.omega_even - spec.omega_odd;
        let c2 = spec.omega_even + spec.omega_odd;
        let mid = (n + 1) / 2;
        let np1 = (n + 1) as f64;

        let modes = (1..=n)
            .filter(|&k| k != mid)
            .map(|k| {
                let delta_k = 1.0 + 2.0 * delta * (2.0 * PI * k as f64 / np1).cos() + delta * delta;
                let root = (c1 * c1 + delta_k).sqrt();
                // lambda_k - 2 omega_1 in units of D1
                let shifted = if k < mid { c1 + root } else { c1 - root };
                let denom = shifted * shifted + delta_k;
                let f = 4.0 / np1 * (1.0 - delta_k / denom);
                ModeAux {
                    k,
                    delta_k,
                    amplitude: 2.0 * shifted.abs() / np1.sqrt() / denom.sqrt(),
                    l: 1.0 / shifted,
                    f,
                    r: 4.0 / np1 / denom,
                    eps: if k < mid { c2 + root } else { c2 - root },
                }
            })
            .collect();

        let b = if (delta - 1.0).abs() < UNIFORM_COUPLING_EPS {
            (2.0 / np1).sqrt()
        } else {
            ((delta * delta - 1.0) / (delta.powi(n as i32 + 1) - 1.0)).sqrt()
        };

        Ok(Self {
            n_spins: n,
            delta,
            c1,
            c2,
            mid,
            b,
            mid_eps: 2.0 * spec.omega_odd,
            modes,
        })
    }

    /// `sin(pi k m / (N+1))`.
    pub fn sine(&self, k: usize, m: usize) -> f64 {
        (PI * (k * m) as f64 / (self.n_spins + 1) as f64).sin()
    }

    /// Mid-mode amplitude on 1-based `site`.
    pub fn mid_amplitude(&self, site: usize) -> f64 {
        if site % 2 == 0 {
            0.0
        } else {
            let power = ((self.n_spins - site) / 2) as i32;
            self.b * (-self.delta).powi(power)
        }
    }

    /// Amplitude `u_{site,k}` of a non-mid mode.
    pub fn mode_amplitude(&self, mode: &ModeAux, site: usize) -> f64 {
        if site % 2 == 1 {
            mode.amplitude
                * mode.l
                * (self.delta * self.sine(mode.k, site - 1) + self.sine(mode.k, site + 1))
        } else {
            mode.amplitude * self.sine(mode.k, site)
        }
    }
}

/// Closed-form spectrum of an odd-length alternating chain.
pub fn analytic_spectrum(spec: &ChainSpec) -> Result<Spectrum> {
    let aux = AlternatingAux::new(spec)?;
    let n = spec.n_spins;
    let mut eigenvalues = vec![0.0; n];
    let mut eigenvectors = DMatrix::zeros(n, n);
    eigenvalues[aux.mid - 1] = aux.mid_eps;
    for site in 1..=n {
        eigenvectors[(site - 1, aux.mid - 1)] = aux.mid_amplitude(site);
    }
    for mode in &aux.modes {
        eigenvalues[mode.k - 1] = mode.eps;
        for site in 1..=n {
            eigenvectors[(site - 1, mode.k - 1)] = aux.mode_amplitude(mode, site);
        }
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        source: SpectrumSource::Analytic,
    })
}

/// Sine-mode spectrum of the homogeneous chain (`D = 1`, field `omega0`),
/// valid for odd and even length.
pub fn homogeneous_spectrum(n: usize, omega0: f64) -> Result<Spectrum> {
    ChainSpec::new(n, omega0, omega0, 1.0, 0.0)?;
    let np1 = (n + 1) as f64;
    let norm = (2.0 / np1).sqrt();
    let eigenvalues = (1..=n)
        .map(|k| 2.0 * ((PI * k as f64 / np1).cos() + omega0))
        .collect();
    let eigenvectors = DMatrix::from_fn(n, n, |row, col| {
        norm * (PI * ((row + 1) * (col + 1)) as f64 / np1).sin()
    });
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        source: SpectrumSource::Analytic,
    })
}
