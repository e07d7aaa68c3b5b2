//! Riemann curvature tensor of the induced metric and the pointwise
//! quantities read off it: sectional curvature, Ricci, the isotropic
//! four-frame expression, and the pinching threshold.

use nalgebra::{DMatrix, DVector};

use super::sff::{AmbientSpace, SecondFundamentalForm};
use crate::error::{PinchError, Result};
use crate::linalg::require_orthonormal;

/// Dense curvature tensor `R_{ijkl} = g(R(e_i, e_j) e_k, e_l)` in an
/// orthonormal frame, with the sign convention fixed so that a coordinate
/// plane has sectional curvature `K(e_i ^ e_j) = R_{ijji}` and the round
/// unit sphere comes out at `+1`.
///
/// Invariants (checked on untrusted construction, produced exactly by
/// [`gauss_curvature`]): antisymmetry in the first and last pairs, symmetry
/// under pair exchange, and the first Bianchi identity.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    n: usize,
    r: Vec<f64>, // layout: ((i*n + j)*n + k)*n + l
}

/// Relative tolerance for symmetry validation of caller-provided tensors.
const SYMMETRY_TOL: f64 = 1e-8;

impl CurvatureTensor {
    /// Validating constructor for externally assembled component arrays.
    pub fn from_entries(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(PinchError::BadDimension { got: n, need: "n >= 2" });
        }
        let expected = n * n * n * n;
        if entries.len() != expected {
            return Err(PinchError::WrongLength { expected, got: entries.len() });
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(PinchError::NonFinite("curvature tensor"));
        }
        let t = CurvatureTensor { n, r: entries };
        t.validate_symmetries()?;
        Ok(t)
    }

    /// Internal constructor for tensors built by formulas that guarantee the
    /// symmetries (Gauss equation, space-form models, frame rotations).
    pub(crate) fn from_fn_unchecked(n: usize, f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let mut r = vec![0.0; n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        r[((i * n + j) * n + k) * n + l] = f(i, j, k, l);
                    }
                }
            }
        }
        CurvatureTensor { n, r }
    }

    /// Space form of constant sectional curvature `k0`.
    pub fn constant_curvature(n: usize, k0: f64) -> Self {
        CurvatureTensor::from_fn_unchecked(n, |i, j, k, l| {
            let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
            k0 * (d(j, k) * d(i, l) - d(i, k) * d(j, l))
        })
    }

    /// Four-dimensional complex-space-form tensor of constant holomorphic
    /// sectional curvature `4k`, in a frame adapted to the complex structure
    /// `J e_1 = e_2`, `J e_3 = e_4`. Totally real planes then have sectional
    /// curvature `k` and complex lines `4k`.
    pub fn constant_holomorphic(k: f64) -> Self {
        let n = 4;
        // j[(a,b)] = <J e_a, e_b>.
        let mut jm = [[0.0f64; 4]; 4];
        jm[0][1] = 1.0;
        jm[1][0] = -1.0;
        jm[2][3] = 1.0;
        jm[3][2] = -1.0;
        CurvatureTensor::from_fn_unchecked(n, move |i, j, kk, l| {
            let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
            k * (d(j, kk) * d(i, l) - d(i, kk) * d(j, l) + jm[j][kk] * jm[i][l]
                - jm[i][kk] * jm[j][l]
                - 2.0 * jm[i][j] * jm[kk][l])
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n;
        self.r[((i * n + j) * n + k) * n + l]
    }

    /// Components in a rotated or restricted frame: `basis` is `n x k` with
    /// orthonormal columns `f_a`, and the result is the `k`-dimensional
    /// array `R'_{abcd} = R(f_a, f_b, f_c, f_d)`.
    pub fn in_frame(&self, basis: &DMatrix<f64>) -> Result<CurvatureTensor> {
        let n = self.n;
        if basis.nrows() != n || basis.ncols() > n || basis.ncols() < 2 {
            return Err(PinchError::BadDimension { got: basis.ncols(), need: "2 <= k <= n frame columns" });
        }
        require_orthonormal(basis)?;
        let k = basis.ncols();
        // Contract one index at a time; cost k n^4 instead of k^4 n^4.
        let mut t1 = vec![0.0; k * n * n * n]; // (a, j, kk, l)
        for a in 0..k {
            for j in 0..n {
                for kk in 0..n {
                    for l in 0..n {
                        let mut acc = 0.0;
                        for i in 0..n {
                            acc += basis[(i, a)] * self.get(i, j, kk, l);
                        }
                        t1[((a * n + j) * n + kk) * n + l] = acc;
                    }
                }
            }
        }
        let mut t2 = vec![0.0; k * k * n * n]; // (a, b, kk, l)
        for a in 0..k {
            for b in 0..k {
                for kk in 0..n {
                    for l in 0..n {
                        let mut acc = 0.0;
                        for j in 0..n {
                            acc += basis[(j, b)] * t1[((a * n + j) * n + kk) * n + l];
                        }
                        t2[((a * k + b) * n + kk) * n + l] = acc;
                    }
                }
            }
        }
        let mut t3 = vec![0.0; k * k * k * n]; // (a, b, c, l)
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    for l in 0..n {
                        let mut acc = 0.0;
                        for kk in 0..n {
                            acc += basis[(kk, c)] * t2[((a * k + b) * n + kk) * n + l];
                        }
                        t3[((a * k + b) * k + c) * n + l] = acc;
                    }
                }
            }
        }
        let mut out = vec![0.0; k * k * k * k];
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    for dd in 0..k {
                        let mut acc = 0.0;
                        for l in 0..n {
                            acc += basis[(l, dd)] * t3[((a * k + b) * k + c) * n + l];
                        }
                        out[((a * k + b) * k + c) * k + dd] = acc;
                    }
                }
            }
        }
        Ok(CurvatureTensor { n: k, r: out })
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.r.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
    }

    fn validate_symmetries(&self) -> Result<()> {
        let n = self.n;
        let scale = self.max_abs().max(1.0);
        let tol = SYMMETRY_TOL * scale;
        let mut worst_anti_first = 0.0f64;
        let mut worst_anti_last = 0.0f64;
        let mut worst_pair = 0.0f64;
        let mut worst_bianchi = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.get(i, j, k, l);
                        worst_anti_first = worst_anti_first.max((r + self.get(j, i, k, l)).abs());
                        worst_anti_last = worst_anti_last.max((r + self.get(i, j, l, k)).abs());
                        worst_pair = worst_pair.max((r - self.get(k, l, i, j)).abs());
                        worst_bianchi = worst_bianchi
                            .max((r + self.get(j, k, i, l) + self.get(k, i, j, l)).abs());
                    }
                }
            }
        }
        for (which, delta) in [
            ("antisymmetry in first pair", worst_anti_first),
            ("antisymmetry in last pair", worst_anti_last),
            ("pair exchange", worst_pair),
            ("first Bianchi identity", worst_bianchi),
        ] {
            if delta > tol {
                return Err(PinchError::BrokenSymmetry { which, delta });
            }
        }
        Ok(())
    }

    /// Worst deviation over the four Riemann symmetries; exposed so tests
    /// and the FFI layer can report tensor health without pattern-matching
    /// errors.
    pub fn symmetry_deviation(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.get(i, j, k, l);
                        worst = worst
                            .max((r + self.get(j, i, k, l)).abs())
                            .max((r + self.get(i, j, l, k)).abs())
                            .max((r - self.get(k, l, i, j)).abs())
                            .max((r + self.get(j, k, i, l) + self.get(k, i, j, l)).abs());
                    }
                }
            }
        }
        worst
    }
}

/// Gauss equation for a submanifold of a space form of curvature `c`:
///
/// `R_{ijkl} = c (d_jk d_il - d_ik d_jl) + <alpha_il, alpha_jk> - <alpha_ik, alpha_jl>`
///
/// with `<alpha_ij, alpha_kl> = sum_a h[a][i][j] h[a][k][l]`. The output
/// satisfies all four Riemann symmetries identically (up to rounding).
pub fn gauss_curvature(sff: &SecondFundamentalForm, amb: &AmbientSpace) -> CurvatureTensor {
    let n = sff.n();
    let m = sff.m();
    let c = amb.c;
    CurvatureTensor::from_fn_unchecked(n, |i, j, k, l| {
        let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        let mut il_jk = 0.0;
        let mut ik_jl = 0.0;
        for a in 0..m {
            il_jk += sff.get(a, i, l) * sff.get(a, j, k);
            ik_jl += sff.get(a, i, k) * sff.get(a, j, l);
        }
        c * (d(j, k) * d(i, l) - d(i, k) * d(j, l)) + il_jk - ik_jl
    })
}

/// Sectional curvature of the plane spanned by `u` and `v`:
/// `K = R(u, v, v, u) / (|u|^2 |v|^2 - <u,v>^2)`.
pub fn sectional(r: &CurvatureTensor, u: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
    let n = r.n();
    if u.len() != n || v.len() != n {
        return Err(PinchError::WrongLength { expected: n, got: u.len().max(v.len()) });
    }
    let gram = u.norm_squared() * v.norm_squared() - u.dot(v).powi(2);
    // The threshold is scale-aware: unit vectors at an angle of ~1e-4 rad
    // are still fine, parallel ones are not.
    if gram <= 1e-12 * (u.norm_squared() * v.norm_squared()).max(1e-300) {
        return Err(PinchError::DegeneratePlane(gram));
    }
    Ok(curvature_form(r, u, v) / gram)
}

/// Unnormalized numerator `R(u, v, v, u)`; callers that guarantee an
/// orthonormal pair can use it directly as the sectional curvature.
pub fn curvature_form(r: &CurvatureTensor, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
    let n = r.n();
    // Contract pairs of indices through intermediate matrices: cost O(n^3).
    // w[k][l] = sum_j v_j R_. with fixed i... Direct quadruple loop is fine
    // for the n <= 12 sizes this library targets, but the two-stage
    // contraction keeps the inner loops tight for the optimizer's hot path.
    let mut acc = 0.0;
    for i in 0..n {
        if u[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            if v[j] == 0.0 {
                continue;
            }
            let uv = u[i] * v[j];
            for k in 0..n {
                let uvv = uv * v[k];
                if uvv == 0.0 {
                    continue;
                }
                for l in 0..n {
                    acc += uvv * u[l] * r.get(i, j, k, l);
                }
            }
        }
    }
    acc
}

/// Sectional curvature of the coordinate plane `e_i ^ e_j` of `r`.
pub fn coordinate_sectional(r: &CurvatureTensor, i: usize, j: usize) -> f64 {
    r.get(i, j, j, i)
}

/// Ricci tensor `Ric_{ij} = sum_k R_{ikkj}` as a symmetric matrix.
pub fn ricci(r: &CurvatureTensor) -> DMatrix<f64> {
    let n = r.n();
    DMatrix::from_fn(n, n, |i, j| (0..n).map(|k| r.get(i, k, k, j)).sum())
}

/// The four-frame curvature expression whose sign over all orthonormal
/// four-frames `(f_1, f_2, f_3, f_4)` decides nonnegativity of the
/// isotropic curvature:
///
/// `R_1331 + R_1441 + R_2332 + R_2442 - 2 R_1234` (components in the frame).
pub fn isotropic_expression(r: &CurvatureTensor, frame: &DMatrix<f64>) -> Result<f64> {
    let n = r.n();
    if frame.nrows() != n || frame.ncols() != 4 {
        return Err(PinchError::BadDimension { got: frame.ncols(), need: "n x 4 frame" });
    }
    require_orthonormal(frame)?;
    Ok(isotropic_expression_unchecked(r, frame))
}

/// Hot-path variant without the orthonormality check; the optimizer calls
/// this with frames it just retracted.
pub(crate) fn isotropic_expression_unchecked(r: &CurvatureTensor, frame: &DMatrix<f64>) -> f64 {
    let f = |a: usize| frame.column(a).clone_owned();
    let (f1, f2, f3, f4) = (f(0), f(1), f(2), f(3));
    curvature_form(r, &f1, &f3)
        + curvature_form(r, &f1, &f4)
        + curvature_form(r, &f2, &f3)
        + curvature_form(r, &f2, &f4)
        - 2.0 * component_in_frame(r, &f1, &f2, &f3, &f4)
}

/// `R(x, y, z, w)` for arbitrary vectors.
pub fn component_in_frame(
    r: &CurvatureTensor,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
    w: &DVector<f64>,
) -> f64 {
    let n = r.n();
    let mut acc = 0.0;
    for i in 0..n {
        if x[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            if y[j] == 0.0 {
                continue;
            }
            let xy = x[i] * y[j];
            for k in 0..n {
                let xyz = xy * z[k];
                if xyz == 0.0 {
                    continue;
                }
                for l in 0..n {
                    acc += xyz * w[l] * r.get(i, j, k, l);
                }
            }
        }
    }
    acc
}

/// Pinching threshold `b(n, H, c)`: the sectional-curvature level that the
/// pointwise condition compares `K_min` against,
///
/// * `n >= 5`: `(c + n H^2 / 4) / 2`
/// * `n == 4`: `(c + H^2) / 3`.
///
/// Dimensions below 4 are outside the scope of every statement made here.
pub fn pinching_bound(n: usize, h: f64, c: f64) -> Result<f64> {
    if !h.is_finite() || !c.is_finite() {
        return Err(PinchError::NonFinite("pinching bound arguments"));
    }
    if h < 0.0 {
        return Err(PinchError::BadParameter(format!(
            "mean curvature must be the norm |H| >= 0, got {h}"
        )));
    }
    match n {
        0..=3 => Err(PinchError::BadDimension { got: n, need: "n >= 4" }),
        4 => Ok((c + h * h) / 3.0),
        _ => Ok(0.5 * (c + n as f64 * h * h / 4.0)),
    }
}
