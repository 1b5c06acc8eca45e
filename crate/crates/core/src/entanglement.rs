//! Wootters concurrence of two-qubit states.
//!
//! Basis convention: `|q_i q_j>` with `|0> = spin up` and `i` the lower site
//! index, so index 0 is `|up up>` and index 3 is `|down down>`.

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::correlator::TwoSpinState;
use crate::error::{Error, Result};

/// Tolerance for accepting a matrix as a density matrix.
const DENSITY_TOL: f64 = 1e-10;
/// Negative eigenvalues of `rho rho~` above `-CLAMP_TOL` are rounding noise.
const CLAMP_TOL: f64 = 1e-10;

/// Square roots of the eigenvalues of `rho rho~`, sorted descending, and the
/// concurrence `max(0, l1 - l2 - l3 - l4)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceResult {
    pub lambdas: [f64; 4],
    pub concurrence: f64,
}

impl ConcurrenceResult {
    pub fn from_lambdas(mut lambdas: [f64; 4]) -> Self {
        lambdas.sort_by(|a, b| b.total_cmp(a));
        let raw = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
        Self {
            lambdas,
            concurrence: raw.clamp(0.0, 1.0),
        }
    }
}

/// `sigma_y (x) sigma_y` in the computational basis (real).
fn sigma_yy() -> Matrix4<Complex64> {
    let o = Complex64::new(0.0, 0.0);
    let p = Complex64::new(1.0, 0.0);
    let m = -p;
    Matrix4::new(
        o, o, o, m,
        o, o, p, o,
        o, p, o, o,
        m, o, o, o,
    )
}

fn hermitian_eigen(m: Matrix4<Complex64>) -> Result<SymmetricEigen<Complex64, nalgebra::U4>> {
    SymmetricEigen::try_new(m, f64::EPSILON, 1000)
        .ok_or_else(|| Error::NonConvergence("4x4 Hermitian eigensolver".into()))
}

fn check_density_matrix(rho: &Matrix4<Complex64>) -> Result<SymmetricEigen<Complex64, nalgebra::U4>> {
    if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NotDensityMatrix("non-finite entry".into()));
    }
    let asym = (rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if asym > DENSITY_TOL {
        return Err(Error::NotDensityMatrix(format!("not Hermitian (deviation {asym:e})")));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
        return Err(Error::NotDensityMatrix(format!("trace {tr} differs from 1")));
    }
    let eig = hermitian_eigen((rho + rho.adjoint()).scale(0.5))?;
    let min = eig.eigenvalues.min();
    if min < -DENSITY_TOL {
        return Err(Error::NotDensityMatrix(format!("negative eigenvalue {min:e}")));
    }
    Ok(eig)
}

/// Spin-flipped state `(sigma_y (x) sigma_y) rho^* (sigma_y (x) sigma_y)`.
pub fn spin_flip(rho: &Matrix4<Complex64>) -> Result<Matrix4<Complex64>> {
    check_density_matrix(rho)?;
    Ok(flip_unchecked(rho))
}

fn flip_unchecked(rho: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let yy = sigma_yy();
    yy * rho.conjugate() * yy
}

/// Concurrence of an arbitrary two-qubit density matrix.
///
/// The eigenvalues of `rho rho~` are taken from the Hermitian matrix
/// `sqrt(rho) rho~ sqrt(rho)`, which is similar to `rho rho~`.
pub fn concurrence_general(rho: &Matrix4<Complex64>) -> Result<ConcurrenceResult> {
    let eig = check_density_matrix(rho)?;
    let roots = eig.eigenvalues.map(|w| Complex64::new(w.max(0.0).sqrt(), 0.0));
    let v = &eig.eigenvectors;
    let sqrt_rho = v * Matrix4::from_diagonal(&roots) * v.adjoint();

    let r = sqrt_rho * flip_unchecked(rho) * sqrt_rho;
    let r = (r + r.adjoint()).scale(0.5);
    let mu = hermitian_eigen(r)?.eigenvalues;

    let mut lambdas = [0.0; 4];
    for (slot, &m) in lambdas.iter_mut().zip(mu.iter()) {
        if m < -CLAMP_TOL {
            return Err(Error::NotDensityMatrix(format!(
                "rho rho~ has eigenvalue {m:e} below the clamping threshold"
            )));
        }
        *slot = m.max(0.0).sqrt();
    }
    Ok(ConcurrenceResult::from_lambdas(lambdas))
}

/// X-state shortcut: `l1 = l4 = sqrt(ad)`, `l2,3 = |x +- sqrt(bc)|`.
pub fn concurrence_xstate(s: &TwoSpinState) -> ConcurrenceResult {
    let ad = (s.a * s.d).max(0.0).sqrt();
    let bc = (s.b * s.c).max(0.0).sqrt();
    ConcurrenceResult::from_lambdas([ad, ad, (s.x + bc).abs(), (s.x - bc).abs()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlator::Alphas;
    use approx::assert_abs_diff_eq;
    use nalgebra::Vector4;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn projector(psi: Vector4<Complex64>) -> Matrix4<Complex64> {
        let psi = psi.normalize();
        psi * psi.adjoint()
    }

    fn bell_phi_plus() -> Matrix4<Complex64> {
        projector(Vector4::new(c(1.0), c(0.0), c(0.0), c(1.0)))
    }

    fn max_mixed() -> Matrix4<Complex64> {
        Matrix4::identity().scale(0.25)
    }

    fn close(a: &Matrix4<Complex64>, b: &Matrix4<Complex64>, tol: f64) -> bool {
        (a - b).iter().all(|z| z.norm() <= tol)
    }

    #[test]
    fn flip_examples() {
        assert!(close(&spin_flip(&max_mixed()).unwrap(), &max_mixed(), 1e-15));
        let up_up = projector(Vector4::new(c(1.0), c(0.0), c(0.0), c(0.0)));
        let down_down = projector(Vector4::new(c(0.0), c(0.0), c(0.0), c(1.0)));
        assert!(close(&spin_flip(&up_up).unwrap(), &down_down, 1e-15));
        assert!(close(&spin_flip(&bell_phi_plus()).unwrap(), &bell_phi_plus(), 1e-15));
    }

    #[test]
    fn rejects_non_density_matrices() {
        let mut m = max_mixed();
        m[(0, 0)] = c(0.5);
        assert!(matches!(spin_flip(&m), Err(Error::NotDensityMatrix(_))));
        let mut m = max_mixed();
        m[(0, 1)] = c(0.1);
        assert!(matches!(concurrence_general(&m), Err(Error::NotDensityMatrix(_))));
        let neg = Matrix4::from_diagonal(&Vector4::new(c(0.6), c(0.6), c(-0.1), c(-0.1)));
        assert!(matches!(concurrence_general(&neg), Err(Error::NotDensityMatrix(_))));
    }

    #[test]
    fn general_examples() {
        assert_abs_diff_eq!(concurrence_general(&bell_phi_plus()).unwrap().concurrence, 1.0, epsilon = 1e-7);
        assert_eq!(concurrence_general(&max_mixed()).unwrap().concurrence, 0.0);

        // Werner state p |psi-><psi-| + (1-p) I/4
        let p = 0.9;
        let singlet = projector(Vector4::new(c(0.0), c(1.0), c(-1.0), c(0.0)));
        let werner = singlet.scale(p) + max_mixed().scale(1.0 - p);
        // eigenvalues 0.925 (singlet) and 3 x 0.025 give C = 0.85 = (3p - 1) / 2
        let r = concurrence_general(&werner).unwrap();
        assert_abs_diff_eq!(r.concurrence, 0.85, epsilon = 1e-12);
        assert_abs_diff_eq!(r.concurrence, (3.0 * p - 1.0) / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn xstate_examples() {
        let mk = |a, b, cc, d, x| TwoSpinState {
            i: 1,
            j: 2,
            a,
            b,
            c: cc,
            d,
            x,
            alphas: Alphas { a00: 0.25, a30: 0.0, a03: 0.0, a33: 0.0, a11: 0.0 },
        };
        assert_eq!(concurrence_xstate(&mk(0.0, 0.5, 0.5, 0.0, 0.5)).concurrence, 1.0);
        assert_eq!(concurrence_xstate(&mk(0.25, 0.25, 0.25, 0.25, 0.0)).concurrence, 0.0);
        let s = mk(0.1, 0.3, 0.4, 0.2, -0.25);
        let general = concurrence_general(&s.to_matrix()).unwrap();
        let fast = concurrence_xstate(&s);
        for k in 0..4 {
            assert_abs_diff_eq!(general.lambdas[k], fast.lambdas[k], epsilon = 1e-12);
        }
        assert_abs_diff_eq!(general.concurrence, fast.concurrence, epsilon = 1e-12);
    }

    #[test]
    fn product_state_is_separable() {
        let up = nalgebra::Matrix2::new(c(0.7), Complex64::new(0.1, 0.2), Complex64::new(0.1, -0.2), c(0.3));
        let down = nalgebra::Matrix2::new(c(0.4), c(0.0), c(0.0), c(0.6));
        let rho = up.kronecker(&down);
        let m = Matrix4::from_fn(|r, cc| rho[(r, cc)]);
        assert_eq!(concurrence_general(&m).unwrap().concurrence, 0.0);
    }
}
