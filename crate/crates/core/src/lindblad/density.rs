use nalgebra::DMatrix;
use num_complex::Complex64;

/// Row-major complex density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    /// `|k⟩⟨k|`.
    pub fn pure_basis(dim: usize, k: usize) -> Self {
        let mut rho = Self::zeros(dim);
        rho.data[k * dim + k] = Complex64::new(1.0, 0.0);
        rho
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let mut rho = Self::zeros(dim);
        for k in 0..dim {
            rho.data[k * dim + k] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        rho
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.data[row * self.dim + col] = v;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|k| self.get(k, k)).sum()
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim).map(|k| self.get(k, k).re).collect()
    }

    /// `max |ρ_ij − ρ_ji*|`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Replaces `ρ` by `(ρ + ρ†)/2`.
    pub fn symmetrize(&mut self) {
        symmetrize_slice(self.dim, &mut self.data);
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let mut m = self.to_matrix();
        let adj = m.adjoint();
        m = (m + adj) * Complex64::new(0.5, 0.0);
        m.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub(crate) fn as_reals(&self) -> Vec<f64> {
        self.data.iter().flat_map(|c| [c.re, c.im]).collect()
    }

    pub(crate) fn from_reals(dim: usize, y: &[f64]) -> Self {
        Self { dim, data: y.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect() }
    }
}

/// Symmetrizes an interleaved re/im buffer; reports whether anything moved.
pub(crate) fn symmetrize_reals(dim: usize, y: &mut [f64]) -> bool {
    let mut changed = false;
    for i in 0..dim {
        let d = 2 * (i * dim + i) + 1;
        if y[d] != 0.0 {
            y[d] = 0.0;
            changed = true;
        }
        for j in i + 1..dim {
            let a = 2 * (i * dim + j);
            let b = 2 * (j * dim + i);
            let re = 0.5 * (y[a] + y[b]);
            let im = 0.5 * (y[a + 1] - y[b + 1]);
            if re != y[a] || re != y[b] || im != y[a + 1] || -im != y[b + 1] {
                changed = true;
            }
            y[a] = re;
            y[b] = re;
            y[a + 1] = im;
            y[b + 1] = -im;
        }
    }
    changed
}

fn symmetrize_slice(dim: usize, data: &mut [Complex64]) {
    for i in 0..dim {
        data[i * dim + i].im = 0.0;
        for j in i + 1..dim {
            let avg = 0.5 * (data[i * dim + j] + data[j * dim + i].conj());
            data[i * dim + j] = avg;
            data[j * dim + i] = avg.conj();
        }
    }
}
