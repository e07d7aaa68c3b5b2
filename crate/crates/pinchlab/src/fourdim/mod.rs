//! Dimension-four structures: bivector algebra, the Hodge star on 2-forms,
//! the curvature endomorphism of 2-forms with its self-dual/anti-self-dual
//! spectra, and the borderline-case predicates (first-order component
//! vanishing, the second-fundamental-form equality pattern, and the complex
//! structure it induces).
//!
//! Bivectors are expanded in the lexicographic basis e_12, e_13, e_14,
//! e_23, e_24, e_34 with ⟨⟨u∧v, w∧z⟩⟩ the Gram determinant, so coordinate
//! bivectors have unit norm and the star is an involutive isometry.

use nalgebra::{DMatrix, DVector, Matrix3, Matrix6};

use crate::curvature::{
    curvature_form, gauss_curvature, ricci, rotate_sff, AmbientSpace, CurvatureTensor,
    SecondFundamentalForm,
};
use crate::error::{PinchError, Result};
use crate::linalg::require_orthonormal;
use crate::search::{k_min, multi_start_min_fd, SearchConfig};

/// Index pairs (i, j), i < j, of the lexicographic bivector basis.
pub const BIVECTOR_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Relative slack on the star-commutation requirement before spectra are
/// refused; a violation beyond this signals a broken upstream tensor (the
/// endomorphism of a genuine curvature tensor always commutes).
pub const STAR_COMMUTATOR_TOL: f64 = 1e-8;

/// The curvature endomorphism of 2-forms as a symmetric 6x6 matrix in the
/// lexicographic bivector basis, together with the orientation flag that
/// fixes the sign of the Hodge star (and hence which block is called
/// self-dual).
#[derive(Debug, Clone, PartialEq)]
pub struct BochnerMatrix {
    mat: Matrix6<f64>,
    orientation: i8,
}

impl BochnerMatrix {
    pub fn matrix(&self) -> &Matrix6<f64> {
        &self.mat
    }

    /// +1 for the standard orientation of the frame order, -1 for the
    /// reversed one.
    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    /// The same endomorphism for the opposite orientation; swaps which
    /// spectrum block is labeled self-dual.
    pub fn flipped(&self) -> BochnerMatrix {
        BochnerMatrix { mat: self.mat, orientation: -self.orientation }
    }

    /// Max-abs deviation from symmetry.
    pub fn symmetry_deviation(&self) -> f64 {
        (self.mat - self.mat.transpose()).amax()
    }

    /// Max-abs entry of the commutator with the Hodge star matrix.
    pub fn star_commutator_deviation(&self) -> f64 {
        let s = star_matrix(self.orientation);
        (self.mat * s - s * self.mat).amax()
    }
}

/// Matrix of the Hodge star on 2-forms in the lexicographic basis;
/// `orientation` of -1 negates it. Involutive and symmetric.
pub fn star_matrix(orientation: i8) -> Matrix6<f64> {
    let mut s = Matrix6::zeros();
    // *e12 = e34, *e13 = -e24, *e14 = e23, and the star is an involution.
    s[(5, 0)] = 1.0;
    s[(0, 5)] = 1.0;
    s[(4, 1)] = -1.0;
    s[(1, 4)] = -1.0;
    s[(3, 2)] = 1.0;
    s[(2, 3)] = 1.0;
    if orientation < 0 {
        s = -s;
    }
    s
}

/// Orthonormal eigenbasis of the star: columns 1-3 span the +1 eigenspace
/// (self-dual for the standard orientation), columns 4-6 the -1 eigenspace.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaBasis {
    w: Matrix6<f64>,
}

impl EtaBasis {
    pub fn standard() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut w = Matrix6::zeros();
        // eta_1 = (e12 + e34)/sqrt2, eta_2 = (e13 - e24)/sqrt2,
        // eta_3 = (e14 + e23)/sqrt2; columns 4-6 are the sign-flipped
        // companions spanning the opposite star eigenspace.
        w[(0, 0)] = s;
        w[(5, 0)] = s;
        w[(1, 1)] = s;
        w[(4, 1)] = -s;
        w[(2, 2)] = s;
        w[(3, 2)] = s;
        w[(0, 3)] = s;
        w[(5, 3)] = -s;
        w[(1, 4)] = s;
        w[(4, 4)] = s;
        w[(2, 5)] = s;
        w[(3, 5)] = -s;
        EtaBasis { w }
    }

    pub fn matrix(&self) -> &Matrix6<f64> {
        &self.w
    }
}

/// Eigenvalues of the two star-invariant blocks, each ascending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumReport {
    pub mu_sd: [f64; 3],
    pub mu_asd: [f64; 3],
    pub min_eig: f64,
}

/// Assemble the curvature endomorphism of 2-forms from Ricci and the full
/// tensor, standard orientation. Requires n = 4.
pub fn bochner_matrix(r: &CurvatureTensor) -> Result<BochnerMatrix> {
    if r.n() != 4 {
        return Err(PinchError::NotDimensionFour(r.n()));
    }
    let ric = ricci(r);
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let mut mat = Matrix6::zeros();
    for (row, &(i, j)) in BIVECTOR_PAIRS.iter().enumerate() {
        for (col, &(k, l)) in BIVECTOR_PAIRS.iter().enumerate() {
            mat[(row, col)] = ric[(i, k)] * d(j, l) + ric[(j, l)] * d(i, k)
                - ric[(i, l)] * d(j, k)
                - ric[(j, k)] * d(i, l)
                - 2.0 * r.get(i, j, l, k);
        }
    }
    Ok(BochnerMatrix { mat, orientation: 1 })
}

fn sorted3(m: &Matrix3<f64>) -> [f64; 3] {
    let sym = 0.5 * (m + m.transpose());
    let eig = sym.symmetric_eigen();
    let mut vals = [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2]];
    vals.sort_by(f64::total_cmp);
    vals
}

/// Block spectra of the endomorphism in the star eigenbasis.
///
/// Errors when the matrix fails to commute with the star (relative to its
/// own scale), since then the block labels would be meaningless.
pub fn sd_asd_spectra(b: &BochnerMatrix) -> Result<SpectrumReport> {
    let scale = b.mat.amax().max(1.0);
    let dev = b.star_commutator_deviation();
    if dev > STAR_COMMUTATOR_TOL * scale {
        return Err(PinchError::StarInvarianceBroken(dev));
    }
    let w = EtaBasis::standard();
    let conj = w.matrix().transpose() * b.mat * w.matrix();
    let plus = sorted3(&conj.fixed_view::<3, 3>(0, 0).into_owned());
    let minus = sorted3(&conj.fixed_view::<3, 3>(3, 3).into_owned());
    let (mu_sd, mu_asd) = if b.orientation >= 0 { (plus, minus) } else { (minus, plus) };
    Ok(SpectrumReport { mu_sd, mu_asd, min_eig: mu_sd[0].min(mu_asd[0]) })
}

/// Max off-block entry of the endomorphism conjugated into the star
/// eigenbasis; near zero exactly when the star commutes.
pub fn eta_off_block_deviation(b: &BochnerMatrix) -> f64 {
    let w = EtaBasis::standard();
    let conj = w.matrix().transpose() * b.mat * w.matrix();
    let mut worst = 0.0f64;
    for i in 0..6 {
        for j in 0..6 {
            if (i < 3) != (j < 3) {
                worst = worst.max(conj[(i, j)].abs());
            }
        }
    }
    worst
}

/// Outcome of the first-order component-vanishing check at a frame of
/// minimizing mixed planes.
#[derive(Debug, Clone)]
pub struct LemmaReport {
    /// Searched minimum sectional curvature used in the hypothesis.
    pub k_min: f64,
    /// Worst hypothesis deviation |K_ij - k_min| over the four mixed pairs.
    pub hypothesis_deviation: f64,
    /// Max |R'_ijkl| over components carrying exactly three distinct
    /// indices, in the rotated frame.
    pub max_component: f64,
    /// Indices attaining `max_component`.
    pub worst_indices: (usize, usize, usize, usize),
    pub pass: bool,
}

fn distinct_count(i: usize, j: usize, k: usize, l: usize) -> usize {
    let mut v = [i, j, k, l];
    v.sort_unstable();
    1 + (0..3).filter(|&t| v[t] != v[t + 1]).count()
}

/// At a frame whose four mixed planes (first two columns against last two)
/// all attain the global minimum of sectional curvature, every curvature
/// component with exactly three distinct indices must vanish — the
/// first-order condition of that minimality. Verifies the hypothesis to
/// `tol` (the minimum itself is found by search with `cfg`), then reports
/// the worst offending component in the rotated frame.
pub fn check_lemma_r(
    r: &CurvatureTensor,
    frame: &DMatrix<f64>,
    tol: f64,
    cfg: &SearchConfig,
) -> Result<LemmaReport> {
    if r.n() != 4 {
        return Err(PinchError::NotDimensionFour(r.n()));
    }
    if frame.nrows() != 4 || frame.ncols() != 4 {
        return Err(PinchError::BadDimension { got: frame.ncols(), need: "a 4x4 frame" });
    }
    require_orthonormal(frame)?;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(PinchError::BadParameter(format!("tolerance must be positive, got {tol}")));
    }
    let kmin = k_min(r, cfg)?.value;
    let rt = r.in_frame(frame)?;

    let mut hypothesis_deviation = 0.0f64;
    for i in 0..2 {
        for j in 2..4 {
            let dev = (rt.get(i, j, j, i) - kmin).abs();
            hypothesis_deviation = hypothesis_deviation.max(dev);
            if dev > tol {
                return Err(PinchError::HypothesisNotMet(format!(
                    "K_{}{} = {} differs from the minimum sectional curvature {} by {dev:.3e} (tol {tol:.3e})",
                    i + 1,
                    j + 1,
                    rt.get(i, j, j, i),
                    kmin,
                )));
            }
        }
    }

    let mut max_component = 0.0f64;
    let mut worst_indices = (0, 0, 0, 0);
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    if distinct_count(i, j, k, l) == 3 {
                        let v = rt.get(i, j, k, l).abs();
                        if v > max_component {
                            max_component = v;
                            worst_indices = (i, j, k, l);
                        }
                    }
                }
            }
        }
    }
    Ok(LemmaReport {
        k_min: kmin,
        hypothesis_deviation,
        max_component,
        worst_indices,
        pass: max_component <= tol,
    })
}

/// Analytic partial derivatives, at the coordinate pair (e_i, e_j), of the
/// plane-deficit function F(x, y) = R(x, y, y, x) − k_min·‖x∧y‖².
///
/// Returns (∂F/∂x, ∂F/∂y) with components 2R_kjji and 2R_kiij for
/// k ∉ {i, j}; the k ∈ {i, j} slots are set to zero by convention (those
/// directions rescale the plane rather than tilt it, and the vanishing
/// statement never uses them). In the off-pair slots the k_min term's
/// partials vanish identically at the evaluation point, so the result
/// depends only on the tensor; `k_min` is still validated for finiteness
/// as part of the contract.
pub fn lemma_r_gradient(
    r: &CurvatureTensor,
    k_min: f64,
    i: usize,
    j: usize,
) -> Result<(DVector<f64>, DVector<f64>)> {
    if r.n() != 4 {
        return Err(PinchError::NotDimensionFour(r.n()));
    }
    if !k_min.is_finite() {
        return Err(PinchError::NonFinite("k_min"));
    }
    if !(i < 2 && (2..4).contains(&j)) {
        return Err(PinchError::BadParameter(format!(
            "index pair ({i}, {j}) out of range: need i in 0..2 and j in 2..4"
        )));
    }
    let mut gx = DVector::zeros(4);
    let mut gy = DVector::zeros(4);
    for k in 0..4 {
        if k == i || k == j {
            continue;
        }
        gx[k] = 2.0 * r.get(k, j, j, i);
        gy[k] = 2.0 * r.get(k, i, i, j);
    }
    Ok((gx, gy))
}

/// Residual table of the borderline second-fundamental-form pattern.
#[derive(Debug, Clone)]
pub struct EqualityReport {
    /// Named residuals, all of which must be ≤ tol to pass. Labels use
    /// 1-based indices matching the usual display of the conditions.
    pub residuals: Vec<(String, f64)>,
    pub max_residual: f64,
    pub pass: bool,
}

/// Test, in the rotated frame, the paired-index equality pattern of the
/// second fundamental form:
/// α11 = α22, α33 = α44, α12 = α34 = 0, α13 = α24, α14 + α23 = 0,
/// ‖α13‖ = ‖α14‖, ⟨α13, α14⟩ = 0, and ⟨α_jj, α_1i⟩ = 0 for j ∈ 1..4,
/// i ∈ {3, 4}.
pub fn check_equality_sff(
    sff: &SecondFundamentalForm,
    frame: &DMatrix<f64>,
    tol: f64,
) -> Result<EqualityReport> {
    if sff.n() != 4 {
        return Err(PinchError::NotDimensionFour(sff.n()));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(PinchError::BadParameter(format!("tolerance must be positive, got {tol}")));
    }
    let rotated = rotate_sff(sff, frame, &DMatrix::identity(sff.m(), sff.m()))?;
    let a = |i: usize, j: usize| rotated.alpha(i, j);

    let mut residuals: Vec<(String, f64)> = Vec::new();
    residuals.push(("|alpha_11 - alpha_22|".into(), (a(0, 0) - a(1, 1)).norm()));
    residuals.push(("|alpha_33 - alpha_44|".into(), (a(2, 2) - a(3, 3)).norm()));
    residuals.push(("|alpha_12|".into(), a(0, 1).norm()));
    residuals.push(("|alpha_34|".into(), a(2, 3).norm()));
    residuals.push(("|alpha_13 - alpha_24|".into(), (a(0, 2) - a(1, 3)).norm()));
    residuals.push(("|alpha_14 + alpha_23|".into(), (a(0, 3) + a(1, 2)).norm()));
    residuals.push((
        "||alpha_13| - |alpha_14||".into(),
        (a(0, 2).norm() - a(0, 3).norm()).abs(),
    ));
    residuals.push(("|<alpha_13, alpha_14>|".into(), a(0, 2).dot(&a(0, 3)).abs()));
    for j in 0..4 {
        for i in [2usize, 3] {
            residuals.push((
                format!("|<alpha_{}{}, alpha_1{}>|", j + 1, j + 1, i + 1),
                a(j, j).dot(&a(0, i)).abs(),
            ));
        }
    }
    let max_residual = residuals.iter().map(|(_, v)| *v).fold(0.0f64, f64::max);
    Ok(EqualityReport { residuals, max_residual, pass: max_residual <= tol })
}

/// Result of the search for a frame realizing the borderline pattern.
#[derive(Debug, Clone)]
pub struct EqualityFrame {
    /// Best tangent frame found (orthonormal 4x4).
    pub frame: DMatrix<f64>,
    /// Sum of squared residuals of the mixed-plane minimality conditions
    /// and the full equality pattern at that frame.
    pub residual: f64,
    /// Searched minimum sectional curvature entering the objective.
    pub k_min: f64,
}

/// Minimum restart count for the equality-frame search; its landscape has
/// many shallow basins, so the effort floor is higher than for the plain
/// extremum searches.
pub const EQUALITY_SEARCH_MIN_RESTARTS: usize = 128;

/// Smooth ambient extension of the equality-pattern residual: rotated
/// second-fundamental-form vectors by plain bilinear contraction (no
/// orthonormality enforcement), mixed-plane curvature by the quartic form.
fn equality_objective(
    alphas: &[DVector<f64>],
    r: &CurvatureTensor,
    kmin: f64,
    q: &DMatrix<f64>,
) -> f64 {
    let m = alphas[0].len();
    let rot = |i: usize, j: usize| {
        let mut out = DVector::zeros(m);
        for s in 0..4 {
            let qs = q[(s, i)];
            if qs == 0.0 {
                continue;
            }
            for t in 0..4 {
                let w = qs * q[(t, j)];
                if w != 0.0 {
                    out.axpy(w, &alphas[s * 4 + t], 1.0);
                }
            }
        }
        out
    };
    let mut e = 0.0;
    for i in 0..2 {
        for j in 2..4 {
            let kij = curvature_form(r, &q.column(i).clone_owned(), &q.column(j).clone_owned());
            e += (kij - kmin).powi(2);
        }
    }
    let a00 = rot(0, 0);
    let a11 = rot(1, 1);
    let a22 = rot(2, 2);
    let a33 = rot(3, 3);
    let a01 = rot(0, 1);
    let a23 = rot(2, 3);
    let a02 = rot(0, 2);
    let a13 = rot(1, 3);
    let a03 = rot(0, 3);
    let a12 = rot(1, 2);
    e += (&a00 - &a11).norm_squared();
    e += (&a22 - &a33).norm_squared();
    e += a01.norm_squared();
    e += a23.norm_squared();
    e += (&a02 - &a13).norm_squared();
    e += (&a03 + &a12).norm_squared();
    e += (a02.norm() - a03.norm()).powi(2);
    e += a02.dot(&a03).powi(2);
    for diag in [&a00, &a11, &a22, &a33] {
        e += diag.dot(&a02).powi(2);
        e += diag.dot(&a03).powi(2);
    }
    e
}

/// Search over tangent frames (both orientation classes) for one realizing
/// the borderline pattern; the caller judges the residual against its own
/// tolerance. The objective is the sum of squares reported in `residual`.
pub fn find_equality_frame(
    sff: &SecondFundamentalForm,
    amb: &AmbientSpace,
    cfg: &SearchConfig,
) -> Result<EqualityFrame> {
    if sff.n() != 4 {
        return Err(PinchError::NotDimensionFour(sff.n()));
    }
    cfg.validate()?;
    let r = gauss_curvature(sff, amb);
    let kmin = k_min(&r, cfg)?.value;
    let alphas: Vec<DVector<f64>> =
        (0..16).map(|idx| sff.alpha(idx / 4, idx % 4)).collect();
    let objective = |q: &DMatrix<f64>| equality_objective(&alphas, &r, kmin, q);
    let restarts = cfg.restarts.max(EQUALITY_SEARCH_MIN_RESTARTS);
    let (residual, frame) = multi_start_min_fd(4, 4, cfg, restarts, 1e-5, &objective);
    Ok(EqualityFrame { frame, residual, k_min: kmin })
}

/// The orthogonal complex structure adapted to a frame: J q1 = q2,
/// J q3 = q4 (and skew-symmetry for the rest).
pub fn complex_structure_from_frame(q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if q.nrows() != 4 || q.ncols() != 4 {
        return Err(PinchError::BadDimension { got: q.ncols(), need: "a 4x4 frame" });
    }
    require_orthonormal(q)?;
    let mut j0 = DMatrix::zeros(4, 4);
    j0[(1, 0)] = 1.0;
    j0[(0, 1)] = -1.0;
    j0[(3, 2)] = 1.0;
    j0[(2, 3)] = -1.0;
    Ok(q * j0 * q.transpose())
}

/// Max over basis pairs of ‖α(J e_i, J e_j) − α(e_i, e_j)‖: zero exactly
/// when the second fundamental form is invariant under the complex
/// structure. `j` must be orthogonal, skew, and square to -identity (each
/// to 1e-10).
pub fn kaehler_residual(sff: &SecondFundamentalForm, j: &DMatrix<f64>) -> Result<f64> {
    if sff.n() != 4 {
        return Err(PinchError::NotDimensionFour(sff.n()));
    }
    if j.nrows() != 4 || j.ncols() != 4 {
        return Err(PinchError::BadDimension { got: j.ncols(), need: "a 4x4 complex structure" });
    }
    let id = DMatrix::<f64>::identity(4, 4);
    let ortho_dev = (j.transpose() * j - &id).amax();
    let skew_dev = (j + j.transpose()).amax();
    let square_dev = (j * j + &id).amax();
    let worst = ortho_dev.max(skew_dev).max(square_dev);
    if worst > 1e-10 {
        return Err(PinchError::InvalidComplexStructure(format!(
            "orthogonality dev {ortho_dev:.3e}, skewness dev {skew_dev:.3e}, J^2+I dev {square_dev:.3e}"
        )));
    }
    let m = sff.m();
    let alpha_vec = |u: &DVector<f64>, v: &DVector<f64>| {
        let mut out = DVector::zeros(m);
        for s in 0..4 {
            for t in 0..4 {
                let w = u[s] * v[t];
                if w != 0.0 {
                    out.axpy(w, &sff.alpha(s, t), 1.0);
                }
            }
        }
        out
    };
    let mut worst = 0.0f64;
    for i in 0..4 {
        for k in i..4 {
            let ji = j.column(i).clone_owned();
            let jk = j.column(k).clone_owned();
            let dev = (alpha_vec(&ji, &jk) - sff.alpha(i, k)).norm();
            worst = worst.max(dev);
        }
    }
    Ok(worst)
}
