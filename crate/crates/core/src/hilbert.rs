//! Finite-dimensional Hilbert-space primitives: states, overlaps, the two
//! measurement forks (affirmative and null), phase-insensitive comparison and
//! unitary evolution.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, Matrix};
use crate::scalar::Real;

/// A normalized vector of complex probability amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// Wraps amplitudes that are already normalized; anything further than
    /// the norm tolerance from unit length is rejected.
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::EmptySpace);
        }
        let norm = norm_of(&amplitudes);
        if !norm.is_finite() || (norm - T::one()).abs() > T::norm_tolerance() {
            return Err(Error::NotNormalized {
                norm: norm.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { amplitudes })
    }

    pub fn from_real(amplitudes: &[T]) -> Result<Self> {
        Self::new(
            amplitudes
                .iter()
                .map(|&x| Complex::new(x, T::zero()))
                .collect(),
        )
    }

    /// Scales `raw` to unit norm.
    pub fn normalize(raw: Vec<Complex<T>>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptySpace);
        }
        let norm = norm_of(&raw);
        if norm.is_nan() || norm <= T::zero_tolerance() {
            return Err(Error::NullVector);
        }
        Ok(Self {
            amplitudes: raw.into_iter().map(|c| c / norm).collect(),
        })
    }

    /// Standard basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptySpace);
        }
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: index + 1,
            });
        }
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); dim];
        amplitudes[index] = Complex::new(T::one(), T::zero());
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        check_dims(self.dim(), other.dim())?;
        Ok(dot(&self.amplitudes, &other.amplitudes))
    }

    /// Multiplies every amplitude by `phase / |phase|`.
    pub fn with_global_phase(&self, phase: Complex<T>) -> Self {
        let unit = phase / phase.norm();
        Self {
            amplitudes: self.amplitudes.iter().map(|c| c * unit).collect(),
        }
    }

    /// Representative of the ray with the first significant amplitude real
    /// and positive.
    pub fn canonical(&self) -> Self {
        Self {
            amplitudes: canonicalize(self.amplitudes.clone()),
        }
    }

    /// True when every amplitude has a zero imaginary part within `tol`.
    pub fn is_real(&self, tol: T) -> bool {
        self.amplitudes.iter().all(|c| c.im.abs() <= tol)
    }
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub(crate) fn dot<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
    u.iter()
        .zip(v)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
            acc + a.conj() * b
        })
}

pub(crate) fn norm_of<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt()
}

pub(crate) fn canonicalize<T: Real>(mut amplitudes: Vec<Complex<T>>) -> Vec<Complex<T>> {
    let anchor = amplitudes
        .iter()
        .find(|c| c.norm() > T::aggregation_tolerance())
        .copied();
    if let Some(anchor) = anchor {
        let rot = anchor.conj() / anchor.norm();
        for c in &mut amplitudes {
            *c *= rot;
        }
        // exact zero imaginary part on the anchor
        if let Some(c) = amplitudes
            .iter_mut()
            .find(|c| c.norm() > T::aggregation_tolerance())
        {
            *c = Complex::new(c.norm(), T::zero());
        }
    }
    amplitudes
}

pub fn inner_product<T: Real>(u: &StateVector<T>, v: &StateVector<T>) -> Result<Complex<T>> {
    u.inner(v)
}

pub fn normalize<T: Real>(raw: Vec<Complex<T>>) -> Result<StateVector<T>> {
    StateVector::normalize(raw)
}

/// Probability of a measurement fork and the state it leaves behind.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection<T> {
    pub probability: T,
    /// `None` when the fork is impossible (probability at or below the zero tolerance).
    pub collapsed: Option<StateVector<T>>,
}

/// Affirmative fork: `ψ` collapses onto `a` with probability `|⟨a|ψ⟩|²`.
pub fn project_affirmative<T: Real>(
    psi: &StateVector<T>,
    a: &StateVector<T>,
) -> Result<Projection<T>> {
    let probability = a.inner(psi)?.norm_sqr();
    let collapsed = (probability > T::zero_tolerance()).then(|| a.canonical());
    Ok(Projection {
        probability,
        collapsed,
    })
}

/// Null fork: `ψ` collapses onto the complement of `a` with probability
/// `1 - |⟨a|ψ⟩|²`.
pub fn project_null<T: Real>(psi: &StateVector<T>, a: &StateVector<T>) -> Result<Projection<T>> {
    let overlap = a.inner(psi)?;
    let probability = T::one() - overlap.norm_sqr();
    let collapsed = if probability > T::zero_tolerance() {
        let residual: Vec<_> = psi
            .amplitudes
            .iter()
            .zip(&a.amplitudes)
            .map(|(p, x)| p - x * overlap)
            .collect();
        Some(StateVector::normalize(residual)?)
    } else {
        None
    };
    Ok(Projection {
        probability,
        collapsed,
    })
}

/// Equality up to global phase: `|⟨u|v⟩|² ≥ 1 - tol`.
pub fn phase_equal<T: Real>(u: &StateVector<T>, v: &StateVector<T>, tol: T) -> Result<bool> {
    Ok(u.inner(v)?.norm_sqr() >= T::one() - tol)
}

/// Hermitian matrix, validated on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator<T> {
    matrix: Matrix<T>,
}

impl<T: Real> HermitianOperator<T> {
    pub fn new(matrix: Matrix<T>) -> Result<Self> {
        if !matrix.is_hermitian(T::norm_tolerance()) {
            return Err(Error::NotHermitian);
        }
        Ok(Self { matrix })
    }

    pub fn diagonal(values: &[T]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySpace);
        }
        Self::new(Matrix::diagonal(values))
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            matrix: Matrix::zeros(dim),
        }
    }

    pub fn pauli_x() -> Self {
        let mut m = Matrix::zeros(2);
        m[(0, 1)] = Complex::new(T::one(), T::zero());
        m[(1, 0)] = Complex::new(T::one(), T::zero());
        Self { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    /// Real symmetric `2n x 2n` embedding `[[A, -B], [B, A]]` of `H = A + iB`.
    fn real_embedding(&self) -> Vec<T> {
        let n = self.dim();
        let m = 2 * n;
        let mut out = vec![T::zero(); m * m];
        for i in 0..n {
            for j in 0..n {
                let h = self.matrix[(i, j)];
                out[i * m + j] = h.re;
                out[(i + n) * m + (j + n)] = h.re;
                out[i * m + (j + n)] = -h.im;
                out[(i + n) * m + j] = h.im;
            }
        }
        out
    }

    /// Eigenvalues in ascending order, with multiplicity.
    pub fn eigenvalues(&self) -> Vec<T> {
        let n = self.dim();
        let (mut vals, _) = symmetric_eigen(self.real_embedding(), 2 * n);
        vals.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        // the embedding doubles every eigenvalue
        vals.into_iter().step_by(2).collect()
    }

    /// `exp(-i H t) v`, via the spectral decomposition of `H`.
    fn propagate(&self, v: &[Complex<T>], t: T) -> Vec<Complex<T>> {
        let n = self.dim();
        let m = 2 * n;
        let (vals, q) = symmetric_eigen(self.real_embedding(), m);
        let x: Vec<T> = v
            .iter()
            .map(|c| c.re)
            .chain(v.iter().map(|c| c.im))
            .collect();
        // coordinates in the eigenbasis
        let w: Vec<T> = (0..m)
            .map(|k| (0..m).map(|i| q[i * m + k] * x[i]).sum())
            .collect();
        let back = |f: &dyn Fn(T) -> T| -> Vec<T> {
            (0..m)
                .map(|i| (0..m).map(|k| q[i * m + k] * f(vals[k] * t) * w[k]).sum())
                .collect()
        };
        let c = back(&|x: T| x.cos());
        let s = back(&|x: T| x.sin());
        // exp(-iHt) = cos(Ht) - i sin(Ht)
        (0..n)
            .map(|i| Complex::new(c[i] + s[i + n], c[i + n] - s[i]))
            .collect()
    }
}

/// Schrödinger evolution for time `t` in units where ħ = 1.
pub fn evolve_unitary<T: Real>(
    psi: &StateVector<T>,
    h: &HermitianOperator<T>,
    t: T,
) -> Result<StateVector<T>> {
    check_dims(psi.dim(), h.dim())?;
    StateVector::normalize(h.propagate(psi.amplitudes(), t))
}

/// Haar-random state drawn from a generator the caller owns.
pub fn random_state_with<T: Real, R: Rng + ?Sized>(
    dim: usize,
    rng: &mut R,
) -> Result<StateVector<T>> {
    if dim == 0 {
        return Err(Error::EmptySpace);
    }
    loop {
        let raw: Vec<Complex<T>> = (0..dim)
            .map(|_| {
                let re = T::sample_standard_normal(rng);
                let im = T::sample_standard_normal(rng);
                Complex::new(re, im)
            })
            .collect();
        match StateVector::normalize(raw) {
            Ok(state) => return Ok(state),
            Err(Error::NullVector) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// Haar-random state; the same `(dim, seed)` always yields the same state.
pub fn random_state<T: Real>(dim: usize, seed: u64) -> Result<StateVector<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_state_with(dim, &mut rng)
}

/// Orthonormal basis obtained by Gram-Schmidt over seeded Haar-random vectors.
pub fn random_orthonormal_basis<T: Real>(dim: usize, seed: u64) -> Result<Vec<StateVector<T>>> {
    if dim == 0 {
        return Err(Error::EmptySpace);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<StateVector<T>> = Vec::with_capacity(dim);
    while out.len() < dim {
        let mut v = random_state_with::<T, _>(dim, &mut rng)?.into_amplitudes();
        // two passes keep the result orthogonal to working precision
        for _ in 0..2 {
            for b in &out {
                let c = dot(b.amplitudes(), &v);
                for (x, e) in v.iter_mut().zip(b.amplitudes()) {
                    *x -= e * c;
                }
            }
        }
        if norm_of(&v) > T::lit(1e-3) {
            out.push(StateVector::normalize(v)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn real(v: &[f64]) -> StateVector<f64> {
        StateVector::from_real(v).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn deg(x: f64) -> f64 {
        x.to_radians()
    }

    fn psi0() -> StateVector<f64> {
        real(&[3f64.sqrt() / 2.0, 0.5])
    }

    fn tilted(angle: f64) -> StateVector<f64> {
        real(&[deg(angle).sin(), deg(angle).cos()])
    }

    #[test]
    fn inner_product_examples() {
        let x = real(&[1.0, 0.0]);
        let y = real(&[0.0, 1.0]);
        assert_eq!(inner_product(&x, &x).unwrap(), c(1.0, 0.0));
        assert_eq!(inner_product(&x, &y).unwrap(), c(0.0, 0.0));
        let got = inner_product(&psi0(), &tilted(10.0)).unwrap();
        assert!((got.re - deg(50.0).cos()).abs() < 1e-15);
        assert!((got.re - 0.642788).abs() < 1e-6);
        assert_eq!(got.im, 0.0);
    }

    #[test]
    fn inner_product_rejects_mismatched_dims() {
        let err = inner_product(&real(&[1.0, 0.0]), &real(&[1.0, 0.0, 0.0])).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 2,
                found: 3
            }
        );
    }

    #[test]
    fn normalize_examples() {
        let v = normalize(vec![c(2.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(v.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);
        let v = normalize(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let h = 0.5f64.sqrt();
        assert!((v.amplitudes()[0].re - h).abs() < 1e-15);
        assert!((v.amplitudes()[1].re - h).abs() < 1e-15);
        assert_eq!(
            normalize::<f64>(vec![c(0.0, 0.0), c(0.0, 0.0)]).unwrap_err(),
            Error::NullVector
        );
    }

    #[test]
    fn new_rejects_unnormalized() {
        assert!(matches!(
            StateVector::from_real(&[1.0, 1.0]),
            Err(Error::NotNormalized { .. })
        ));
        assert_eq!(
            StateVector::<f64>::new(vec![]).unwrap_err(),
            Error::EmptySpace
        );
    }

    #[test]
    fn affirmative_examples() {
        let p = project_affirmative(&psi0(), &real(&[1.0, 0.0])).unwrap();
        assert!((p.probability - 0.75).abs() < 1e-15);
        assert_eq!(p.collapsed.unwrap(), real(&[1.0, 0.0]));

        let p = project_affirmative(&real(&[0.0, 1.0]), &real(&[1.0, 0.0])).unwrap();
        assert_eq!(p.probability, 0.0);
        assert!(p.collapsed.is_none());

        let a = tilted(10.0);
        let p = project_affirmative(&real(&[1.0, 0.0]), &a).unwrap();
        assert!((p.probability - deg(10.0).sin().powi(2)).abs() < 1e-15);
        assert!((p.probability - 0.030154).abs() < 1e-6);
        assert!(phase_equal(&p.collapsed.unwrap(), &a, 1e-12).unwrap());
    }

    #[test]
    fn null_examples() {
        let p = project_null(&psi0(), &real(&[1.0, 0.0])).unwrap();
        assert!((p.probability - 0.25).abs() < 1e-15);
        assert!(phase_equal(&p.collapsed.unwrap(), &real(&[0.0, 1.0]), 1e-12).unwrap());

        let p = project_null(&real(&[1.0, 0.0]), &real(&[1.0, 0.0])).unwrap();
        assert_eq!(p.probability, 0.0);
        assert!(p.collapsed.is_none());

        let (s, co) = (deg(10.0).sin(), deg(10.0).cos());
        let p = project_null(&real(&[1.0, 0.0]), &tilted(10.0)).unwrap();
        assert!((p.probability - co * co).abs() < 1e-15);
        assert!((p.probability - 0.969846).abs() < 1e-6);
        let expected = normalize(vec![c(co * co, 0.0), c(-s * co, 0.0)]).unwrap();
        let got = p.collapsed.unwrap();
        for (g, e) in got.amplitudes().iter().zip(expected.amplitudes()) {
            assert!((g - e).norm() < 1e-14);
        }
    }

    #[test]
    fn phase_equal_examples() {
        let h = 0.5f64.sqrt();
        assert!(phase_equal(&real(&[1.0, 0.0]), &real(&[-1.0, 0.0]), 1e-9).unwrap());
        assert!(!phase_equal(&real(&[1.0, 0.0]), &real(&[0.0, 1.0]), 1e-9).unwrap());
        let u = real(&[h, h]);
        let v = StateVector::new(vec![c(0.0, h), c(0.0, h)]).unwrap();
        assert!(phase_equal(&u, &v, 1e-9).unwrap());
    }

    #[test]
    fn canonical_phase_makes_first_amplitude_positive() {
        let h = 0.5f64.sqrt();
        let v = StateVector::new(vec![c(0.0, -h), c(h, 0.0)])
            .unwrap()
            .canonical();
        assert_eq!(v.amplitudes()[0], c(h, 0.0));
        assert!((v.amplitudes()[1] - c(0.0, h)).norm() < 1e-15);
        // tiny leading amplitude is skipped
        let v = StateVector::new(vec![c(1e-12, 0.0), c(-1.0, 0.0)])
            .unwrap()
            .canonical();
        assert_eq!(v.amplitudes()[1], c(1.0, 0.0));
    }

    #[test]
    fn evolve_examples() {
        let psi = psi0();
        let out = evolve_unitary(&psi, &HermitianOperator::zero(2), 3.7).unwrap();
        for (a, b) in out.amplitudes().iter().zip(psi.amplitudes()) {
            assert!((a - b).norm() < 1e-14);
        }

        let h = HermitianOperator::diagonal(&[1.0, 2.0]).unwrap();
        let x = real(&[1.0, 0.0]);
        let out = evolve_unitary(&x, &h, PI).unwrap();
        assert!((out.amplitudes()[0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!(phase_equal(&out, &x, 1e-12).unwrap());

        let out = evolve_unitary(&x, &HermitianOperator::pauli_x(), FRAC_PI_2).unwrap();
        assert!((out.amplitudes()[0]).norm() < 1e-12);
        assert!((out.amplitudes()[1] - c(0.0, -1.0)).norm() < 1e-12);
        assert!(phase_equal(&out, &real(&[0.0, 1.0]), 1e-12).unwrap());
    }

    #[test]
    fn evolve_matches_closed_form_pauli_rotation() {
        // exp(-iθσx) = cosθ·I − i sinθ·σx
        let psi = StateVector::new(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        for &theta in &[0.1, 0.7, 2.3, -1.1] {
            let got = evolve_unitary(&psi, &HermitianOperator::pauli_x(), theta).unwrap();
            let a = psi.amplitudes();
            let i = c(0.0, 1.0);
            let e0 = a[0] * theta.cos() - i * theta.sin() * a[1];
            let e1 = a[1] * theta.cos() - i * theta.sin() * a[0];
            assert!((got.amplitudes()[0] - e0).norm() < 1e-12);
            assert!((got.amplitudes()[1] - e1).norm() < 1e-12);
        }
    }

    #[test]
    fn evolve_matches_taylor_series_on_complex_hamiltonian() {
        let m = Matrix::from_rows(vec![
            vec![c(0.3, 0.0), c(0.2, -0.5), c(0.0, 0.1)],
            vec![c(0.2, 0.5), c(-0.4, 0.0), c(0.7, 0.0)],
            vec![c(0.0, -0.1), c(0.7, 0.0), c(1.1, 0.0)],
        ])
        .unwrap();
        let h = HermitianOperator::new(m.clone()).unwrap();
        let psi = random_state::<f64>(3, 11).unwrap();
        let t = 0.9;
        let mut term = psi.amplitudes().to_vec();
        let mut sum = term.clone();
        for k in 1..60 {
            let applied = m.apply(&term);
            term = applied
                .into_iter()
                .map(|x| x * c(0.0, -t) / (k as f64))
                .collect();
            for (s, x) in sum.iter_mut().zip(&term) {
                *s += x;
            }
        }
        let got = evolve_unitary(&psi, &h, t).unwrap();
        for (g, e) in got.amplitudes().iter().zip(&sum) {
            assert!((g - e).norm() < 1e-12);
        }
    }

    #[test]
    fn eigenvalues_of_pauli_x() {
        let vals = HermitianOperator::<f64>::pauli_x().eigenvalues();
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = Matrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(HermitianOperator::new(m).unwrap_err(), Error::NotHermitian);
    }

    #[test]
    fn random_state_contract() {
        let v = random_state::<f64>(1, 99).unwrap();
        assert!((v.amplitudes()[0].norm() - 1.0).abs() < 1e-14);
        assert_eq!(
            random_state::<f64>(2, 42).unwrap(),
            random_state::<f64>(2, 42).unwrap()
        );
        assert_ne!(
            random_state::<f64>(2, 42).unwrap(),
            random_state::<f64>(2, 43).unwrap()
        );
        assert_eq!(random_state::<f64>(0, 1).unwrap_err(), Error::EmptySpace);
    }

    #[test]
    fn random_state_first_weight_is_uniform_on_average() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let draws = 10_000;
        let mean = (0..draws)
            .map(|_| {
                random_state_with::<f64, _>(2, &mut rng)
                    .unwrap()
                    .amplitudes()[0]
                    .norm_sqr()
            })
            .sum::<f64>()
            / draws as f64;
        assert!((0.48..=0.52).contains(&mean), "mean {mean}");
    }

    #[test]
    fn single_precision_instantiation() {
        let psi = StateVector::<f32>::from_real(&[0.6, 0.8]).unwrap();
        let a = StateVector::<f32>::from_real(&[1.0, 0.0]).unwrap();
        let aff = project_affirmative(&psi, &a).unwrap();
        let null = project_null(&psi, &a).unwrap();
        assert!((aff.probability - 0.36).abs() < 1e-6);
        assert!((aff.probability + null.probability - 1.0).abs() < 1e-6);
    }

    fn arb_state(dim: usize) -> impl Strategy<Value = StateVector<f64>> {
        any::<u64>().prop_map(move |seed| random_state(dim, seed).unwrap())
    }

    fn arb_pair() -> impl Strategy<Value = (StateVector<f64>, StateVector<f64>)> {
        (1usize..=6).prop_flat_map(|d| (arb_state(d), arb_state(d)))
    }

    proptest! {
        #[test]
        fn forks_are_complementary((psi, a) in arb_pair()) {
            let aff = project_affirmative(&psi, &a).unwrap();
            let null = project_null(&psi, &a).unwrap();
            prop_assert!((aff.probability + null.probability - 1.0).abs() < 1e-10);
            if let Some(rest) = null.collapsed {
                prop_assert!(a.inner(&rest).unwrap().norm() <= 1e-9);
            }
        }

        #[test]
        fn conjugate_symmetry((u, v) in arb_pair()) {
            let uv = u.inner(&v).unwrap();
            let vu = v.inner(&u).unwrap();
            prop_assert!((uv - vu.conj()).norm() < 1e-12);
            prop_assert!(uv.norm() <= 1.0 + 1e-10);
        }

        #[test]
        fn evolution_is_unitary((u, v) in arb_pair(), seed in any::<u64>(), t in -5.0f64..5.0) {
            let d = u.dim();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut m = Matrix::zeros(d);
            for i in 0..d {
                for j in i..d {
                    let re = rng.random::<f64>() - 0.5;
                    let im = if i == j { 0.0 } else { rng.random::<f64>() - 0.5 };
                    m[(i, j)] = c(re, im);
                    m[(j, i)] = c(re, -im);
                }
            }
            let h = HermitianOperator::new(m).unwrap();
            let raw_u = h.propagate(u.amplitudes(), t);
            prop_assert!((norm_of(&raw_u) - 1.0).abs() < 1e-9);
            let eu = evolve_unitary(&u, &h, t).unwrap();
            let ev = evolve_unitary(&v, &h, t).unwrap();
            let before = u.inner(&v).unwrap();
            let after = eu.inner(&ev).unwrap();
            prop_assert!((before - after).norm() < 1e-9);
        }

        #[test]
        fn phase_equal_is_phase_invariant((u, v) in arb_pair(), theta in 0.0f64..6.3, phi in 0.0f64..6.3) {
            prop_assert!(phase_equal(&u, &u, 1e-9).unwrap());
            prop_assert_eq!(phase_equal(&u, &v, 1e-9).unwrap(), phase_equal(&v, &u, 1e-9).unwrap());
            let ut = u.with_global_phase(Complex::from_polar(1.0, theta));
            let vt = v.with_global_phase(Complex::from_polar(1.0, phi));
            prop_assert!(phase_equal(&u, &ut, 1e-9).unwrap());
            prop_assert_eq!(phase_equal(&u, &v, 1e-9).unwrap(), phase_equal(&ut, &vt, 1e-9).unwrap());
        }
    }
}
