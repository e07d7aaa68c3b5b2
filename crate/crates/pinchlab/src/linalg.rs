//! Shared numerical helpers: orthonormalization, Haar-random frames,
//! deterministic seed derivation, and the Halton sequence used for chart
//! sampling.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{PinchError, Result};

/// Tolerance for "is this frame orthonormal" checks on caller-provided input.
pub const ORTHONORMAL_TOL: f64 = 1e-8;

/// Maximum deviation from orthonormality of `m`'s columns: `max |m^T m - I|`.
pub fn orthonormal_deviation(m: &DMatrix<f64>) -> f64 {
    let gram = m.transpose() * m;
    let k = m.ncols();
    let mut worst = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - target).abs());
        }
    }
    worst
}

/// Check that `m` has orthonormal columns, with the standard tolerance.
pub fn require_orthonormal(m: &DMatrix<f64>) -> Result<()> {
    let dev = orthonormal_deviation(m);
    if dev > ORTHONORMAL_TOL {
        return Err(PinchError::NotOrthonormal(dev));
    }
    Ok(())
}

/// Modified Gram-Schmidt in column order (no pivoting, so the orientation of
/// the input column set is preserved). Returns `(q, r)` with `q` having
/// orthonormal columns, `r` upper triangular with positive diagonal.
///
/// Fails if a column's residual drops below `tol` times its original norm —
/// the caller is expected to have checked rank beforehand for a better error.
pub fn mgs_qr(a: &DMatrix<f64>, tol: f64) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let (rows, cols) = a.shape();
    let mut q = a.clone();
    let mut r = DMatrix::zeros(cols, cols);
    for j in 0..cols {
        let orig_norm = a.column(j).norm();
        for i in 0..j {
            let qi = q.column(i).clone_owned();
            let proj = qi.dot(&q.column(j));
            r[(i, j)] = proj;
            let mut col = q.column_mut(j);
            col.axpy(-proj, &qi, 1.0);
        }
        // One re-orthogonalization pass keeps the frame orthonormal to
        // rounding even for moderately ill-conditioned Jacobians.
        for i in 0..j {
            let qi = q.column(i).clone_owned();
            let proj = qi.dot(&q.column(j));
            r[(i, j)] += proj;
            let mut col = q.column_mut(j);
            col.axpy(-proj, &qi, 1.0);
        }
        let norm = q.column(j).norm();
        if norm <= tol * orig_norm.max(1e-300) {
            return Err(PinchError::DegenerateParametrization(format!(
                "column {j} of a {rows}x{cols} matrix is dependent on its predecessors"
            )));
        }
        r[(j, j)] = norm;
        q.column_mut(j).scale_mut(1.0 / norm);
    }
    Ok((q, r))
}

/// Extend the orthonormal columns of `basis` to a full orthonormal basis of
/// the ambient space, returning only the `n - basis.ncols()` new columns.
/// Deterministic: candidates are the identity columns taken in order, each
/// sign-normalized so its largest-magnitude entry is positive.
pub fn orthonormal_complement(basis: &DMatrix<f64>) -> DMatrix<f64> {
    let n = basis.nrows();
    let k = basis.ncols();
    let mut cols: Vec<nalgebra::DVector<f64>> = (0..k).map(|j| basis.column(j).clone_owned()).collect();
    let mut new_cols = Vec::with_capacity(n - k);
    for cand_idx in 0..n {
        if new_cols.len() == n - k {
            break;
        }
        let mut v = nalgebra::DVector::zeros(n);
        v[cand_idx] = 1.0;
        for _pass in 0..2 {
            for c in &cols {
                let proj = c.dot(&v);
                v.axpy(-proj, c, 1.0);
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            v.scale_mut(1.0 / norm);
            canonicalize_sign(&mut v);
            cols.push(v.clone());
            new_cols.push(v);
        }
    }
    debug_assert_eq!(new_cols.len(), n - k);
    DMatrix::from_columns(&new_cols)
}

/// Flip `v` in place so its largest-magnitude entry (first such on ties) is
/// positive. Removes the sign ambiguity of normalized vectors so repeated
/// runs report identical frames.
pub fn canonicalize_sign(v: &mut nalgebra::DVector<f64>) {
    let mut best = 0usize;
    let mut best_abs = 0.0f64;
    for (idx, &x) in v.iter().enumerate() {
        if x.abs() > best_abs {
            best_abs = x.abs();
            best = idx;
        }
    }
    if v[best] < 0.0 {
        v.scale_mut(-1.0);
    }
}

/// Column-wise [`canonicalize_sign`].
pub fn canonicalize_columns(m: &mut DMatrix<f64>) {
    let ncols = m.ncols();
    for j in 0..ncols {
        let mut col = m.column(j).clone_owned();
        canonicalize_sign(&mut col);
        m.set_column(j, &col);
    }
}

/// Lexicographic comparison of two frames (column-major order), used only to
/// break exact ties between restarts so the reported frame is reproducible.
pub fn frame_lex_less(a: &DMatrix<f64>, b: &DMatrix<f64>) -> bool {
    for (x, y) in a.iter().zip(b.iter()) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

/// Haar-distributed random `n x k` orthonormal frame: QR of an i.i.d.
/// standard-normal matrix with the R-diagonal sign fix.
pub fn haar_frame(rng: &mut impl Rng, n: usize, k: usize) -> DMatrix<f64> {
    loop {
        let g = DMatrix::from_fn(n, k, |_, _| standard_normal(rng));
        if let Ok((q, _)) = mgs_qr(&g, 1e-10) {
            return q;
        }
        // Astronomically unlikely rank deficiency: draw again.
    }
}

/// Standard normal via Box-Muller on the raw uniform stream. Keeps the
/// sampling chain free of distribution-crate version drift, which matters
/// because report bytes are part of the determinism contract.
pub fn standard_normal(rng: &mut impl Rng) -> f64 {
    loop {
        let u1: f64 = rng.random();
        let u2: f64 = rng.random();
        if u1 > 1e-300 {
            return (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
        }
    }
}

/// SplitMix64 step — used to derive independent per-point and per-restart
/// seeds from the global seed without correlations.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic sub-seed for stage `label` and index `idx` under `seed`.
pub fn derive_seed(seed: u64, label: u64, idx: u64) -> u64 {
    splitmix64(seed ^ splitmix64(label.wrapping_mul(0x9e37_79b9) ^ idx))
}

/// Seeded ChaCha stream. ChaCha8 is plenty for sampling and is fast and
/// portable across platforms, which the determinism contract relies on.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Halton low-discrepancy sequence in `dim` dimensions (prime bases,
/// one-based index so the all-zeros point is skipped).
pub struct Halton {
    dim: usize,
    index: u64,
}

const HALTON_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

impl Halton {
    pub fn new(dim: usize) -> Self {
        assert!(dim <= HALTON_PRIMES.len(), "Halton dimension too large");
        Halton { dim, index: 0 }
    }

    /// Next point in the unit cube.
    pub fn next_point(&mut self) -> Vec<f64> {
        self.index += 1;
        (0..self.dim)
            .map(|d| radical_inverse(self.index, HALTON_PRIMES[d]))
            .collect()
    }
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 0.0;
    let mut frac = 1.0 / base as f64;
    while i > 0 {
        inv += (i % base) as f64 * frac;
        i /= base;
        frac /= base as f64;
    }
    inv
}
