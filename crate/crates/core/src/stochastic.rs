//! Poisson collision times and the collision unitary.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, ZenoError};
use crate::model::ModelParams;

/// Per-trajectory stream of exponential collision intervals.
///
/// Backed by a ChaCha8 block cipher keyed by the global seed with the
/// trajectory index as stream id, so draw `k` of trajectory `i` is a pure
/// function of `(seed, i, k)`.
#[derive(Debug, Clone)]
pub struct PoissonStream {
    tau: f64,
    rng: ChaCha8Rng,
}

impl PoissonStream {
    pub fn new(seed: u64, trajectory: u64, tau: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trajectory);
        Self { tau, rng }
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    pub fn sample_interval(&mut self) -> f64 {
        let y = self.uniform();
        interval_from_uniform(y, self.tau)
    }
}

/// `δτ = −τ ln y`; a zero draw is replaced by the smallest positive draw `2⁻⁵³`.
pub fn interval_from_uniform(y: f64, tau: f64) -> f64 {
    let y = if y <= 0.0 { f64::EPSILON / 2.0 } else { y };
    -tau * y.ln()
}

/// Spectrum of the `n`-site path-graph adjacency matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEigensystem {
    pub values: Vec<f64>,
    /// Row-major: `vectors[k * n + m]` is component `m` of eigenvector `k`.
    pub vectors: Vec<f64>,
}

impl PathEigensystem {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        let n = self.len();
        &self.vectors[k * n..(k + 1) * n]
    }
}

/// `λ_k = 2cos(kπ/(n+1))`, `u_k(m) = √(2/(n+1)) sin(mkπ/(n+1))`, `k, m = 1..n`.
pub fn path_graph_eigensystem(n: usize) -> PathEigensystem {
    let h = PI / (n as f64 + 1.0);
    let norm = (2.0 / (n as f64 + 1.0)).sqrt();
    let values = (1..=n).map(|k| 2.0 * (k as f64 * h).cos()).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for k in 1..=n {
        for m in 1..=n {
            vectors.push(norm * ((m * k) as f64 * h).sin());
        }
    }
    PathEigensystem { values, vectors }
}

/// Dense complex square block, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryBlock {
    n: usize,
    data: Vec<Complex64>,
}

impl UnitaryBlock {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.n + col]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        assert_eq!(n, other.n);
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Self { n, data }
    }

    /// `max |U†U − I|` entrywise.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.data[k * n + i].conj() * self.data[k * n + j];
                }
                if i == j {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    /// `amps ← U amps`, using `scratch` (resized as needed).
    pub fn apply(&self, amps: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        let n = self.n;
        debug_assert_eq!(amps.len(), n);
        scratch.clear();
        scratch.extend_from_slice(amps);
        for (row, out) in self.data.chunks_exact(n).zip(amps.iter_mut()) {
            let (mut re, mut im) = (0.0, 0.0);
            for (u, a) in row.iter().zip(scratch.iter()) {
                re += u.re * a.re - u.im * a.im;
                im += u.re * a.im + u.im * a.re;
            }
            *out = Complex64::new(re, im);
        }
    }
}

/// `exp(−iαV)` for the `n`-site path graph, built from its eigensystem.
pub fn collision_unitary(n: usize, alpha: f64) -> UnitaryBlock {
    if alpha == 0.0 {
        return UnitaryBlock::identity(n);
    }
    let eig = path_graph_eigensystem(n);
    let phases: Vec<Complex64> = eig
        .values
        .iter()
        .map(|&lambda| Complex64::from_polar(1.0, -alpha * lambda))
        .collect();
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    for (k, phase) in phases.iter().enumerate() {
        let u = eig.vector(k);
        for i in 0..n {
            let ui = u[i] * phase;
            for j in 0..n {
                data[i * n + j] += ui * u[j];
            }
        }
    }
    UnitaryBlock { n, data }
}

/// Precomputed block-diagonal collision operator `exp(−iα_L V_L) ⊕ exp(−iα_R V_R)`.
#[derive(Debug, Clone)]
pub struct CollisionKernel {
    pub block_left: UnitaryBlock,
    pub block_right: UnitaryBlock,
    pub alpha_left: f64,
    pub alpha_right: f64,
}

impl CollisionKernel {
    pub fn new(n_left: usize, n_right: usize, alpha_left: f64, alpha_right: f64) -> Self {
        Self {
            block_left: collision_unitary(n_left, alpha_left),
            block_right: collision_unitary(n_right, alpha_right),
            alpha_left,
            alpha_right,
        }
    }

    pub fn from_params(params: &ModelParams) -> Self {
        Self::new(params.n_left, params.n_right, params.alpha_left, params.alpha_right)
    }

    pub fn dim(&self) -> usize {
        self.block_left.dim() + self.block_right.dim()
    }

    /// Applies the kernel in place. Identity blocks are skipped.
    pub fn apply(&self, amps: &mut [Complex64], scratch: &mut Vec<Complex64>) -> Result<()> {
        if amps.len() != self.dim() {
            return Err(ZenoError::DimensionMismatch { expected: self.dim(), found: amps.len() });
        }
        let (left, right) = amps.split_at_mut(self.block_left.dim());
        if self.alpha_left != 0.0 {
            self.block_left.apply(left, scratch);
        }
        if self.alpha_right != 0.0 {
            self.block_right.apply(right, scratch);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn interval_inverts_log() {
        let tau = 2.5;
        assert!((interval_from_uniform((-1.0f64).exp(), tau) - tau).abs() < 1e-15);
        let near_one = 1.0 - f64::EPSILON;
        let dt = interval_from_uniform(near_one, tau);
        assert!(dt > 0.0 && dt < 1e-15);
        let dt0 = interval_from_uniform(0.0, tau);
        assert!(dt0.is_finite() && dt0 > 0.0);
    }

    #[test]
    fn interval_mean_converges() {
        let mut s = PoissonStream::new(17, 0, 1.0);
        let m = 1_000_000;
        let mean = (0..m).map(|_| s.sample_interval()).sum::<f64>() / m as f64;
        // standard error is 1e-3
        assert!((mean - 1.0).abs() < 4e-3, "mean {mean}");
    }

    #[test]
    fn intervals_pass_kolmogorov_smirnov() {
        let tau = 0.7;
        let mut s = PoissonStream::new(2024, 5, tau);
        let m = 100_000;
        let mut xs: Vec<f64> = (0..m).map(|_| s.sample_interval()).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let d = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let cdf = 1.0 - (-x / tau).exp();
                let lo = i as f64 / m as f64;
                let hi = (i + 1) as f64 / m as f64;
                (cdf - lo).abs().max((hi - cdf).abs())
            })
            .fold(0.0, f64::max);
        // 1% critical value of the one-sample KS statistic
        let critical = 1.628 / (m as f64).sqrt();
        assert!(d < critical, "D = {d}, critical {critical}");
    }

    #[test]
    fn streams_are_keyed_by_trajectory() {
        let mut a = PoissonStream::new(1, 3, 1.0);
        let mut b = PoissonStream::new(1, 3, 1.0);
        let mut other = PoissonStream::new(1, 4, 1.0);
        let xa: Vec<f64> = (0..8).map(|_| a.uniform()).collect();
        let xb: Vec<f64> = (0..8).map(|_| b.uniform()).collect();
        let xo: Vec<f64> = (0..8).map(|_| other.uniform()).collect();
        assert_eq!(xa, xb);
        assert_ne!(xa, xo);
    }

    #[test]
    fn small_path_spectra() {
        assert_eq!(path_graph_eigensystem(1).values.len(), 1);
        assert!(path_graph_eigensystem(1).values[0].abs() < 1e-15);
        let two = path_graph_eigensystem(2).values;
        assert!((two[0] - 1.0).abs() < 1e-15 && (two[1] + 1.0).abs() < 1e-15);
        let three = path_graph_eigensystem(3).values;
        let expected = [2f64.sqrt(), 0.0, -(2f64.sqrt())];
        for (a, b) in three.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn path_spectrum_matches_dense_diagonalization() {
        for n in [3, 5, 12] {
            let v = crate::model::ladder_coupling(n);
            let mut dense: Vec<f64> = v.symmetric_eigen().eigenvalues.iter().copied().collect();
            dense.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let closed = path_graph_eigensystem(n).values;
            for (a, b) in closed.iter().zip(&dense) {
                assert!((a - b).abs() < 1e-12, "n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn two_level_quarter_turn() {
        let u = collision_unitary(2, std::f64::consts::FRAC_PI_2);
        assert!(u.get(0, 0).norm() < 1e-15);
        assert!((u.get(0, 1) - c(0.0, -1.0)).norm() < 1e-15);
        assert!((u.get(1, 0) - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_coupling_is_identity() {
        assert_eq!(collision_unitary(7, 0.0), UnitaryBlock::identity(7));
    }

    /// `exp(−iαV)` by scaling and squaring a truncated Taylor series.
    fn taylor_exp_first_column(n: usize, alpha: f64) -> Vec<Complex64> {
        let squarings = 4;
        let scale = alpha / f64::from(1 << squarings);
        let v = crate::model::ladder_coupling(n);
        let a: Vec<Complex64> = v.iter().map(|x| c(0.0, -scale * x)).collect();
        // column-major from nalgebra; V is symmetric so layout does not matter
        let mul = |x: &[Complex64], y: &[Complex64]| -> Vec<Complex64> {
            let mut out = vec![c(0.0, 0.0); n * n];
            for i in 0..n {
                for k in 0..n {
                    for j in 0..n {
                        out[i * n + j] += x[i * n + k] * y[k * n + j];
                    }
                }
            }
            out
        };
        let mut sum = vec![c(0.0, 0.0); n * n];
        let mut term = vec![c(0.0, 0.0); n * n];
        for i in 0..n {
            sum[i * n + i] = c(1.0, 0.0);
            term[i * n + i] = c(1.0, 0.0);
        }
        for k in 1..30 {
            term = mul(&term, &a).into_iter().map(|z| z / k as f64).collect();
            for (s, t) in sum.iter_mut().zip(&term) {
                *s += t;
            }
        }
        for _ in 0..squarings {
            sum = mul(&sum, &sum);
        }
        (0..n).map(|i| sum[i * n]).collect()
    }

    #[test]
    fn forty_levels_match_taylor_oracle() {
        let u = collision_unitary(40, 0.2);
        assert!(u.unitarity_error() <= 1e-12);
        let col = taylor_exp_first_column(40, 0.2);
        for (i, z) in col.iter().enumerate() {
            assert!((u.get(i, 0) - z).norm() < 1e-10, "row {i}");
        }
    }

    #[test]
    fn kernel_is_block_diagonal() {
        let k = CollisionKernel::new(3, 4, 0.3, 0.5);
        let mut amps = vec![c(0.0, 0.0); 7];
        amps[1] = c(0.6, 0.0);
        amps[2] = c(0.0, 0.8);
        let mut scratch = Vec::new();
        k.apply(&mut amps, &mut scratch).unwrap();
        let left: f64 = amps[..3].iter().map(|a| a.norm_sqr()).sum();
        assert!((left - 1.0).abs() < 1e-14);
        assert!(amps[3..].iter().all(|a| a.norm() == 0.0));
        assert!(k.apply(&mut amps[..5], &mut scratch).is_err());
    }

    proptest! {
        #[test]
        fn unitary_and_symmetric(n in 1usize..24, alpha in -3.0f64..3.0) {
            let u = collision_unitary(n, alpha);
            prop_assert!(u.unitarity_error() <= 1e-12);
            for i in 0..n {
                for j in 0..n {
                    prop_assert!((u.get(i, j) - u.get(j, i)).norm() < 1e-13);
                }
            }
        }

        #[test]
        fn exponents_add(n in 1usize..16, a in -2.0f64..2.0, b in -2.0f64..2.0) {
            let lhs = collision_unitary(n, a).mul(&collision_unitary(n, b));
            let rhs = collision_unitary(n, a + b);
            for (x, y) in lhs.as_slice().iter().zip(rhs.as_slice()) {
                prop_assert!((x - y).norm() < 1e-11);
            }
        }

        #[test]
        fn eigenvectors_map_to_phases(n in 1usize..16, alpha in -2.0f64..2.0) {
            let u = collision_unitary(n, alpha);
            let eig = path_graph_eigensystem(n);
            for k in 0..n {
                let v = eig.vector(k);
                let mut w: Vec<Complex64> = v.iter().map(|x| c(*x, 0.0)).collect();
                let mut scratch = Vec::new();
                u.apply(&mut w, &mut scratch);
                let phase = Complex64::from_polar(1.0, -alpha * eig.values[k]);
                for (wi, vi) in w.iter().zip(v) {
                    prop_assert!((wi - phase * vi).norm() < 1e-12);
                }
            }
        }
    }
}
