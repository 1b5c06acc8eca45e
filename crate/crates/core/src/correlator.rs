//! Thermal one-particle correlations and two-spin reduced density matrices.
//!
//! With `G_ij = <c_i^† c_j>` Wick's theorem gives every correlator entering
//! the pair state of sites `i < j`:
//!
//! * `alpha30 = G_ii - 1/2`, `alpha03 = G_jj - 1/2`
//! * `alpha33 = 4 (G_ii G_jj - G_ij^2) - 2 (G_ii + G_jj) + 1`
//! * `alpha11 = alpha22 = 2 G_{i,i+1}` (nearest neighbours only; longer
//!   range pairs carry a Jordan-Wigner string and are refused here)
//!
//! The explicit mode-sum expressions for odd alternating chains and for
//! homogeneous chains are kept as independent evaluations in
//! [`alpha33_closed_form`] and [`homogeneous_alphas`].

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectrum::{AlternatingAux, ChainSpec, Spectrum};

/// Fermi occupation `e^{-tau eps} / (1 + e^{-tau eps})`, evaluated without
/// overflow for any sign of `tau * eps`.
pub fn fermi_factor(eps: f64, tau: f64) -> f64 {
    let x = tau * eps;
    if x >= 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Thermal Green's matrix `G_ij = sum_k u_ik u_jk g(lambda_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GreensMatrix {
    pub matrix: DMatrix<f64>,
    /// Mode occupations `g(lambda_k)` in spectrum order.
    pub occupations: Vec<f64>,
    pub tau: f64,
}

impl GreensMatrix {
    pub fn order(&self) -> usize {
        self.matrix.nrows()
    }

    /// Entry with 1-based site indices.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i - 1, j - 1)]
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }
}

pub fn greens_matrix(spec: &ChainSpec, spectrum: &Spectrum) -> Result<GreensMatrix> {
    spec.validate()?;
    let n = spec.n_spins;
    if spectrum.len() != n || spectrum.eigenvectors.nrows() != n || spectrum.eigenvectors.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: spectrum.len(),
        });
    }
    let occupations: Vec<f64> = spectrum
        .eigenvalues
        .iter()
        .map(|&lam| fermi_factor(lam, spec.tau))
        .collect();

    let u = &spectrum.eigenvectors;
    let mut matrix = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = 0.0;
            for (k, g) in occupations.iter().enumerate() {
                acc += u[(i, k)] * u[(j, k)] * g;
            }
            matrix[(i, j)] = acc;
            matrix[(j, i)] = acc;
        }
    }
    Ok(GreensMatrix {
        matrix,
        occupations,
        tau: spec.tau,
    })
}

/// Expansion coefficients of a pair state in the basis `x^a (x) x^b` with
/// `x^0 = 1`, `x^{1,2,3} = I_{x,y,z}`. All other coefficients vanish for the
/// XY chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alphas {
    pub a00: f64,
    pub a30: f64,
    pub a03: f64,
    pub a33: f64,
    /// Equal to `alpha22`.
    pub a11: f64,
}

/// X-shaped two-spin density matrix in the basis `|q_i q_j>`, `|0> = up`:
///
/// ```text
/// | a 0 0 0 |
/// | 0 b x 0 |
/// | 0 x c 0 |
/// | 0 0 0 d |
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSpinState {
    pub i: usize,
    pub j: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub x: f64,
    pub alphas: Alphas,
}

impl TwoSpinState {
    pub fn from_alphas(i: usize, j: usize, alphas: Alphas) -> Self {
        let Alphas { a30, a03, a33, a11, .. } = alphas;
        Self {
            i,
            j,
            a: 0.25 + a03 / 2.0 + a30 / 2.0 + a33 / 4.0,
            b: 0.25 - a03 / 2.0 + a30 / 2.0 - a33 / 4.0,
            c: 0.25 + a03 / 2.0 - a30 / 2.0 - a33 / 4.0,
            d: 0.25 - a03 / 2.0 - a30 / 2.0 + a33 / 4.0,
            x: a11 / 2.0,
            alphas,
        }
    }

    pub fn trace(&self) -> f64 {
        self.a + self.b + self.c + self.d
    }

    /// Dense 4x4 embedding.
    pub fn to_matrix(&self) -> Matrix4<Complex64> {
        let r = |v: f64| Complex64::new(v, 0.0);
        let z = r(0.0);
        Matrix4::new(
            r(self.a), z, z, z,
            z, r(self.b), r(self.x), z,
            z, r(self.x), r(self.c), z,
            z, z, z, r(self.d),
        )
    }

    /// Largest entrywise distance to a dense 4x4 matrix.
    pub fn max_deviation(&self, rho: &Matrix4<Complex64>) -> f64 {
        (self.to_matrix() - rho).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn check_pair(n: usize, i: usize, j: usize) -> Result<()> {
    if i == 0 || i >= j || j > n {
        return Err(Error::SiteOutOfRange { i, j, n });
    }
    Ok(())
}

/// Nearest-neighbour pair state from the Green's matrix.
pub fn reduced_density_matrix(spec: &ChainSpec, g: &GreensMatrix, i: usize, j: usize) -> Result<TwoSpinState> {
    let n = spec.n_spins;
    if g.order() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g.order(),
        });
    }
    check_pair(n, i, j)?;
    if j != i + 1 {
        return Err(Error::NonAdjacentPair { i, j });
    }
    let (gii, gjj, gij) = (g.get(i, i), g.get(j, j), g.get(i, j));
    let alphas = Alphas {
        a00: 0.25,
        a30: gii - 0.5,
        a03: gjj - 0.5,
        a33: 4.0 * (gii * gjj - gij * gij) - 2.0 * (gii + gjj) + 1.0,
        a11: 2.0 * gij,
    };
    Ok(TwoSpinState::from_alphas(i, j, alphas))
}

/// `<I_iz I_{i+1,z}>`-coefficient `alpha33` from the explicit mode sums of
/// an odd alternating chain. Even and odd `i` use different expressions
/// because the chain is not reflection symmetric.
pub fn alpha33_closed_form(spec: &ChainSpec, aux: &AlternatingAux, i: usize) -> Result<f64> {
    spec.validate()?;
    let n = spec.n_spins;
    if n % 2 == 0 {
        return Err(Error::EvenChainLength(n));
    }
    if aux.n_spins != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: aux.n_spins,
        });
    }
    check_pair(n, i, i + 1)?;

    let tau = spec.tau;
    let modes = &aux.modes;
    let g: Vec<f64> = modes.iter().map(|m| fermi_factor(m.eps, tau)).collect();
    let g_mid = fermi_factor(aux.mid_eps, tau);
    let b2 = aux.b * aux.b;
    let delta = aux.delta;

    // Even i: site i only sees sin(pi m i / (N+1)); site i+1 sees S(m).
    // Odd i: site i sees Q(m) (and the mid mode); site i+1 sees sin(pi m (i+1) / (N+1)).
    let (sine_site, kernel): (usize, Vec<f64>) = if i % 2 == 0 {
        let s = modes
            .iter()
            .map(|m| delta * aux.sine(m.k, i) + aux.sine(m.k, i + 2))
            .collect();
        (i, s)
    } else {
        let q = modes
            .iter()
            .map(|m| delta * aux.sine(m.k, i - 1) + aux.sine(m.k, i + 1))
            .collect();
        (i + 1, q)
    };
    let sines: Vec<f64> = modes.iter().map(|m| aux.sine(m.k, sine_site)).collect();
    let mid_weight = if i % 2 == 0 {
        b2 * delta.powi((n - i - 1) as i32)
    } else {
        b2 * delta.powi((n - i) as i32)
    };

    let count = modes.len();
    let mut direct = 0.0;
    let mut exchange = 0.0;
    for m in 0..count {
        for nn in 0..count {
            if nn == m {
                continue;
            }
            let gg = g[m] * g[nn];
            if i % 2 == 0 {
                direct += modes[m].f * modes[nn].r * sines[m].powi(2) * kernel[nn].powi(2) * gg;
            } else {
                direct += modes[nn].f * modes[m].r * sines[nn].powi(2) * kernel[m].powi(2) * gg;
            }
            exchange += modes[m].f
                * modes[nn].f
                * modes[nn].l
                * modes[m].l
                * kernel[m]
                * kernel[nn]
                * sines[m]
                * sines[nn]
                * gg;
        }
    }
    let with_mid: f64 = (0..count)
        .map(|m| modes[m].f * mid_weight * sines[m].powi(2) * g_mid * g[m])
        .sum();
    let overlap: f64 = (0..count).map(|m| modes[m].f * modes[m].l * kernel[m] * sines[m]).sum();
    let overlap_thermal: f64 = (0..count)
        .map(|m| modes[m].f * modes[m].l * kernel[m] * sines[m] * g[m])
        .sum();
    let occ_sine: f64 = (0..count).map(|m| modes[m].f * sines[m].powi(2) * g[m]).sum();
    let occ_kernel: f64 = (0..count).map(|m| modes[m].r * kernel[m].powi(2) * g[m]).sum();

    Ok(4.0 * (direct + with_mid + overlap * overlap_thermal - exchange)
        - 2.0 * (occ_sine + occ_kernel + mid_weight * g_mid)
        + 1.0)
}

/// Homogeneous-chain coefficients; `a11` is present only for `j = i + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneousAlphas {
    pub a03: f64,
    pub a30: f64,
    pub a33: f64,
    pub a11: Option<f64>,
}

/// Sine-mode sums for the homogeneous chain (`D = 1`, field `omega0`), any
/// length.
pub fn homogeneous_alphas(n: usize, omega0: f64, tau: f64, i: usize, j: usize) -> Result<HomogeneousAlphas> {
    ChainSpec::new(n, omega0, omega0, 1.0, tau)?;
    check_pair(n, i, j)?;
    let np1 = (n + 1) as f64;
    let g: Vec<f64> = (1..=n)
        .map(|k| fermi_factor(2.0 * (PI * k as f64 / np1).cos() + 2.0 * omega0, tau))
        .collect();
    let si: Vec<f64> = (1..=n).map(|k| (i as f64 * PI * k as f64 / np1).sin()).collect();
    let sj: Vec<f64> = (1..=n).map(|k| (j as f64 * PI * k as f64 / np1).sin()).collect();

    let occ_i: f64 = (0..n).map(|k| si[k].powi(2) * g[k]).sum();
    let occ_j: f64 = (0..n).map(|k| sj[k].powi(2) * g[k]).sum();

    let mut direct = 0.0;
    let mut exchange = 0.0;
    for k in 0..n {
        for p in 0..n {
            if p == k {
                continue;
            }
            let gg = g[k] * g[p];
            direct += si[k].powi(2) * sj[p].powi(2) * gg;
            exchange += si[k] * si[p] * sj[k] * sj[p] * gg;
        }
    }

    let a11 = (j == i + 1).then(|| 4.0 / np1 * (0..n).map(|k| si[k] * sj[k] * g[k]).sum::<f64>());
    Ok(HomogeneousAlphas {
        a03: 2.0 / np1 * occ_j - 0.5,
        a30: 2.0 / np1 * occ_i - 0.5,
        a33: 16.0 / (np1 * np1) * (direct - exchange) - 4.0 / np1 * (occ_i + occ_j) + 1.0,
        a11,
    })
}
