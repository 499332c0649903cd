use crate::error::{Error, Result};
use nalgebra::linalg::Schur;
use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

pub const SPECTRUM_SIZE_LIMIT: usize = 512;
const SCHUR_MAX_ITER: usize = 20_000;
const ROTATION_ATTEMPTS: u64 = 16;

/// Eigenvalues with multiplicity, sorted by decreasing modulus then argument.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex<f64>>,
}

/// Real Schur form, retried under seeded orthogonal similarities when the
/// shifted QR iteration stalls (it does on some 0/1 flow matrices).
fn schur_eigenvalues(k: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    if let Some(s) = Schur::try_new(k.clone(), f64::EPSILON, SCHUR_MAX_ITER) {
        return Ok(s.complex_eigenvalues().iter().copied().collect());
    }
    let n = k.nrows();
    for attempt in 1..=ROTATION_ATTEMPTS {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(attempt);
        let q = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal)).qr().q();
        if let Some(s) = Schur::try_new(q.transpose() * k * &q, f64::EPSILON, SCHUR_MAX_ITER) {
            return Ok(s.complex_eigenvalues().iter().copied().collect());
        }
    }
    Err(Error::NoConvergence { iterations: SCHUR_MAX_ITER })
}

/// All eigenvalues of a square matrix through a real Schur decomposition.
pub fn full_spectrum(k: &DMatrix<f64>) -> Result<Spectrum> {
    let n = k.nrows();
    if n != k.ncols() {
        return Err(Error::InvalidInput(format!("matrix is {}x{}, not square", n, k.ncols())));
    }
    if n > SPECTRUM_SIZE_LIMIT {
        return Err(Error::SizeLimit { size: n, limit: SPECTRUM_SIZE_LIMIT });
    }
    if n == 0 {
        return Ok(Spectrum { eigenvalues: Vec::new() });
    }
    let mut eigenvalues = schur_eigenvalues(k)?;
    eigenvalues.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(a.arg().total_cmp(&b.arg())));
    Ok(Spectrum { eigenvalues })
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Eigenvalues (with multiplicity) whose modulus is within `tol` of `r`.
    pub fn of_modulus(&self, r: f64, tol: f64) -> Vec<Complex<f64>> {
        self.eigenvalues.iter().copied().filter(|z| (z.norm() - r).abs() <= tol).collect()
    }

    pub fn count_of_modulus(&self, r: f64, tol: f64) -> usize {
        self.of_modulus(r, tol).len()
    }

    /// Distinct values among those of modulus `r`, merging values closer
    /// than `tol`.
    pub fn distinct_of_modulus(&self, r: f64, tol: f64) -> Vec<Complex<f64>> {
        let mut distinct: Vec<Complex<f64>> = Vec::new();
        for z in self.of_modulus(r, tol) {
            if !distinct.iter().any(|d| (d - z).norm() <= tol) {
                distinct.push(z);
            }
        }
        distinct
    }

    /// True when every eigenvalue of `other` can be matched to a distinct
    /// eigenvalue of `self` within `tol`.
    pub fn contains(&self, other: &Spectrum, tol: f64) -> bool {
        let mut used = vec![false; self.len()];
        other.eigenvalues.iter().all(|z| {
            let best = self
                .eigenvalues
                .iter()
                .enumerate()
                .filter(|(i, w)| !used[*i] && (*w - z).norm() <= tol)
                .min_by(|a, b| (a.1 - z).norm().total_cmp(&(b.1 - z).norm()));
            match best {
                Some((i, _)) => {
                    used[i] = true;
                    true
                }
                None => false,
            }
        })
    }

    /// Spectral radius.
    pub fn radius(&self) -> f64 {
        self.eigenvalues.first().map_or(0.0, |z| z.norm())
    }
}
