//! Second fundamental form, ambient space, mean curvature, and the
//! frame-dependent partial-trace functional used by the Lawson-Simons-type
//! bounds.

use nalgebra::{DMatrix, DVector};

use crate::error::{PinchError, Result};
use crate::linalg::require_orthonormal;

/// Rounding slack admitted when symmetrizing caller-provided coefficients.
const SYMMETRY_SLACK: f64 = 1e-12;

/// Ambient space form of constant sectional curvature `c`.
///
/// Only the curvature constant matters for every pointwise computation in
/// this library; the sign conventions are fixed so that the unit round
/// sphere has `c = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmbientSpace {
    pub c: f64,
}

impl AmbientSpace {
    pub fn new(c: f64) -> Self {
        AmbientSpace { c }
    }

    pub fn euclidean() -> Self {
        AmbientSpace { c: 0.0 }
    }
}

/// Coefficients of the second fundamental form at one point, expressed in an
/// orthonormal tangent frame `e_1..e_n` and orthonormal normal frame
/// `xi_1..xi_m`:
///
/// `h[a][i][j] = < alpha(e_i, e_j), xi_a >`.
///
/// Each slice `h[a]` is symmetric in `(i, j)`; the constructor symmetrizes
/// rounding-level asymmetry and rejects anything larger.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondFundamentalForm {
    n: usize,
    m: usize,
    h: Vec<f64>, // layout: a * n*n + i * n + j
}

impl SecondFundamentalForm {
    pub fn new(n: usize, m: usize, coeffs: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(PinchError::BadDimension { got: n, need: "n >= 2" });
        }
        if m == 0 {
            return Err(PinchError::BadDimension { got: m, need: "m >= 1" });
        }
        let expected = m * n * n;
        if coeffs.len() != expected {
            return Err(PinchError::WrongLength { expected, got: coeffs.len() });
        }
        if coeffs.iter().any(|x| !x.is_finite()) {
            return Err(PinchError::NonFinite("second fundamental form"));
        }
        let mut h = coeffs;
        let scale = h.iter().fold(0.0f64, |acc, x| acc.max(x.abs())).max(1.0);
        for a in 0..m {
            for i in 0..n {
                for j in (i + 1)..n {
                    let ij = a * n * n + i * n + j;
                    let ji = a * n * n + j * n + i;
                    let delta = (h[ij] - h[ji]).abs();
                    if delta > SYMMETRY_SLACK * scale {
                        return Err(PinchError::AsymmetricSff { a, i, j, delta });
                    }
                    let avg = 0.5 * (h[ij] + h[ji]);
                    h[ij] = avg;
                    h[ji] = avg;
                }
            }
        }
        Ok(SecondFundamentalForm { n, m, h })
    }

    /// Build from a coefficient function; symmetry is taken from the
    /// `i <= j` triangle so the closure only needs to be right there.
    pub fn from_fn(n: usize, m: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Result<Self> {
        let mut coeffs = vec![0.0; m * n * n];
        for a in 0..m {
            for i in 0..n {
                for j in i..n {
                    let v = f(a, i, j);
                    coeffs[a * n * n + i * n + j] = v;
                    coeffs[a * n * n + j * n + i] = v;
                }
            }
        }
        SecondFundamentalForm::new(n, m, coeffs)
    }

    /// Totally geodesic data: alpha = 0 with `m` normal directions.
    pub fn zeros(n: usize, m: usize) -> Self {
        SecondFundamentalForm::new(n, m, vec![0.0; m * n * n]).expect("zero sff is valid")
    }

    /// Umbilic hypersurface data of a round sphere of radius `r` (inward
    /// normal, so the principal curvatures are `+1/r`).
    pub fn round_sphere(n: usize, r: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(PinchError::BadParameter(format!("sphere radius must be positive, got {r}")));
        }
        SecondFundamentalForm::from_fn(n, 1, |_a, i, j| if i == j { 1.0 / r } else { 0.0 })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, a: usize, i: usize, j: usize) -> f64 {
        self.h[a * self.n * self.n + i * self.n + j]
    }

    /// `alpha(e_i, e_j)` as a vector of normal-frame coefficients.
    pub fn alpha(&self, i: usize, j: usize) -> DVector<f64> {
        DVector::from_fn(self.m, |a, _| self.get(a, i, j))
    }

    /// Shape operator `A_a` (the matrix `h[a][.][.]`).
    pub fn shape_operator(&self, a: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(a, i, j))
    }

    /// Squared Frobenius norm `|alpha|^2 = sum_a sum_ij h[a][i][j]^2`.
    pub fn norm_squared(&self) -> f64 {
        self.h.iter().map(|x| x * x).sum()
    }
}

/// Mean curvature vector `(1/n) sum_i alpha(e_i, e_i)` in normal-frame
/// coefficients, together with its norm `H >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanCurvature {
    pub vector: DVector<f64>,
    pub norm: f64,
}

/// Mean curvature of `sff`.
pub fn mean_curvature(sff: &SecondFundamentalForm) -> MeanCurvature {
    let n = sff.n();
    let vector = DVector::from_fn(sff.m(), |a, _| {
        (0..n).map(|i| sff.get(a, i, i)).sum::<f64>() / n as f64
    });
    let norm = vector.norm();
    MeanCurvature { vector, norm }
}

/// Re-express `sff` in rotated frames: tangent frame `f_k = sum_i Qt[i][k] e_i`
/// and normal frame `xi'_b = sum_a Qn[a][b] xi_a`. Both matrices must have
/// orthonormal columns; `Qt` is `n x n`, `Qn` is `m x m`.
pub fn rotate_sff(
    sff: &SecondFundamentalForm,
    q_tangent: &DMatrix<f64>,
    q_normal: &DMatrix<f64>,
) -> Result<SecondFundamentalForm> {
    let (n, m) = (sff.n(), sff.m());
    if q_tangent.shape() != (n, n) {
        return Err(PinchError::WrongLength { expected: n * n, got: q_tangent.len() });
    }
    if q_normal.shape() != (m, m) {
        return Err(PinchError::WrongLength { expected: m * m, got: q_normal.len() });
    }
    require_orthonormal(q_tangent)?;
    require_orthonormal(q_normal)?;

    // Tangent rotation first: t[a][k][l] = Qt^T h[a] Qt, done with matrix
    // products per normal slice.
    let mut out = vec![0.0; m * n * n];
    let mut rotated_slices = Vec::with_capacity(m);
    for a in 0..m {
        let slice = sff.shape_operator(a);
        rotated_slices.push(q_tangent.transpose() * slice * q_tangent);
    }
    for b in 0..m {
        for k in 0..n {
            for l in 0..n {
                let mut acc = 0.0;
                for (a, slice) in rotated_slices.iter().enumerate() {
                    acc += q_normal[(a, b)] * slice[(k, l)];
                }
                out[b * n * n + k * n + l] = acc;
            }
        }
    }
    SecondFundamentalForm::new(n, m, out)
}

/// Partial-trace curvature functional of the splitting `V = span(f_1..f_p)`:
///
/// `sum_{i<=p, j>p} ( 2 |alpha(f_i,f_j)|^2 - <alpha(f_i,f_i), alpha(f_j,f_j)> )`
///
/// evaluated in the frame `f_k = frame * e_k`. The value depends only on the
/// subspace `V`, not on the basis chosen inside `V` or its complement. The
/// ambient curvature does not enter the value; it belongs to the bound the
/// caller compares against (`p (n-p) c`).
pub fn theta_p(
    sff: &SecondFundamentalForm,
    _amb: &AmbientSpace,
    p: usize,
    frame: &DMatrix<f64>,
) -> Result<f64> {
    let n = sff.n();
    if p == 0 || p >= n {
        return Err(PinchError::BadSplit { p, n });
    }
    if frame.shape() != (n, n) {
        return Err(PinchError::WrongLength { expected: n * n, got: frame.len() });
    }
    require_orthonormal(frame)?;
    let rotated = rotate_sff(sff, frame, &DMatrix::identity(sff.m(), sff.m()))?;
    let mut total = 0.0;
    for i in 0..p {
        for j in p..n {
            let mut cross = 0.0;
            let mut diag = 0.0;
            for a in 0..sff.m() {
                let hij = rotated.get(a, i, j);
                cross += hij * hij;
                diag += rotated.get(a, i, i) * rotated.get(a, j, j);
            }
            total += 2.0 * cross - diag;
        }
    }
    Ok(total)
}

/// Same functional expressed through the orthogonal projector `P = U U^T`
/// onto `V` (so no completion of the frame is needed):
///
/// `sum_a [ 2 tr(A_a P A_a (I-P)) - tr(A_a P) (tr A_a - tr(A_a P)) ]`.
///
/// Used by the subspace search, where only a basis `U` of `V` is available.
pub fn theta_p_subspace(sff: &SecondFundamentalForm, u: &DMatrix<f64>) -> f64 {
    let n = sff.n();
    let p = u.ncols();
    debug_assert!(p >= 1 && p < n);
    let mut total = 0.0;
    for a in 0..sff.m() {
        let a_mat = sff.shape_operator(a);
        let au = &a_mat * u; // n x p
        let uau = u.transpose() * &au; // p x p
        let trace_full = (0..n).map(|i| a_mat[(i, i)]).sum::<f64>();
        let trace_v = (0..p).map(|i| uau[(i, i)]).sum::<f64>();
        // tr(A P A) = |A U|_F^2, tr(A P A P) = |U^T A U|_F^2.
        let apa = au.iter().map(|x| x * x).sum::<f64>();
        let apap = uau.iter().map(|x| x * x).sum::<f64>();
        total += 2.0 * (apa - apap) - trace_v * (trace_full - trace_v);
    }
    total
}
