//! Parametrized immersions and the finite-difference pipeline that turns a
//! chart into pointwise second-fundamental-form data.
//!
//! Charts evaluate ℝⁿ coordinates to ℝᴺ positions. Derivatives are taken
//! by central differences with one Richardson extrapolation step (fourth
//! order), the tangent frame by Gram–Schmidt on the Jacobian **without
//! pivoting** — pivoting would shuffle frame orientation from point to
//! point and scramble the self-dual/anti-self-dual labels downstream — and
//! the normal frame completes the basis, with the radial direction removed
//! first for charts whose image lies on a sphere about the origin.

mod generators;

pub use generators::{
    epsilon_bound, gen_cp2, gen_ellipsoid, gen_product_spheres, gen_sphere, gen_veronese,
};

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::curvature::{AmbientSpace, SecondFundamentalForm};
use crate::error::{PinchError, Result};
use crate::linalg::{mgs_qr, orthonormal_complement, Halton};

type EvalFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A parametrized immersion chart into Euclidean space, optionally flagged
/// as lying on a sphere about the origin (in which case all submanifold
/// data is computed relative to that sphere and the ambient curvature is
/// 1/r²).
#[derive(Clone)]
pub struct ImmersionChart {
    name: String,
    n: usize,
    ambient_dim: usize,
    eval: EvalFn,
    sphere_radius: Option<f64>,
    fd_step: f64,
    domain: Vec<(f64, f64)>,
}

impl std::fmt::Debug for ImmersionChart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ImmersionChart")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("ambient_dim", &self.ambient_dim)
            .field("sphere_radius", &self.sphere_radius)
            .field("fd_step", &self.fd_step)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

/// Default finite-difference step in chart units.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

impl ImmersionChart {
    pub fn new(
        name: impl Into<String>,
        n: usize,
        ambient_dim: usize,
        domain: Vec<(f64, f64)>,
        sphere_radius: Option<f64>,
        eval: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Result<Self> {
        if n < 2 {
            return Err(PinchError::BadDimension { got: n, need: "chart dimension >= 2" });
        }
        if ambient_dim <= n {
            return Err(PinchError::BadDimension {
                got: ambient_dim,
                need: "ambient dimension > chart dimension",
            });
        }
        if domain.len() != n {
            return Err(PinchError::WrongLength { expected: n, got: domain.len() });
        }
        for &(lo, hi) in &domain {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(PinchError::BadParameter(format!(
                    "domain interval ({lo}, {hi}) is not a proper finite interval"
                )));
            }
        }
        if let Some(r) = sphere_radius {
            if !(r.is_finite() && r > 0.0) {
                return Err(PinchError::BadParameter(format!(
                    "sphere radius must be positive, got {r}"
                )));
            }
        }
        Ok(ImmersionChart {
            name: name.into(),
            n,
            ambient_dim,
            eval: Arc::new(eval),
            sphere_radius,
            fd_step: DEFAULT_FD_STEP,
            domain,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn sphere_radius(&self) -> Option<f64> {
        self.sphere_radius
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    /// Ambient curvature of the space the data is computed relative to.
    pub fn ambient_curvature(&self) -> f64 {
        self.sphere_radius.map_or(0.0, |r| 1.0 / (r * r))
    }

    pub fn with_fd_step(mut self, step: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(PinchError::BadParameter(format!(
                "finite-difference step must be positive, got {step}"
            )));
        }
        self.fd_step = step;
        Ok(self)
    }

    /// The same map treated as an immersion into flat ℝᴺ: drops the sphere
    /// flag, so the full second fundamental form (radial part included) is
    /// computed against ambient curvature zero.
    pub fn composed(&self) -> Self {
        let mut chart = self.clone();
        chart.sphere_radius = None;
        chart
    }

    /// Evaluate the chart, validating coordinate and output shapes.
    pub fn evaluate(&self, u: &[f64]) -> Result<DVector<f64>> {
        if u.len() != self.n {
            return Err(PinchError::WrongLength { expected: self.n, got: u.len() });
        }
        if u.iter().any(|v| !v.is_finite()) {
            return Err(PinchError::NonFinite("chart coordinates"));
        }
        let out = (self.eval)(u);
        if out.len() != self.ambient_dim {
            return Err(PinchError::WrongLength { expected: self.ambient_dim, got: out.len() });
        }
        if out.iter().any(|v| !v.is_finite()) {
            return Err(PinchError::NonFinite("chart evaluation"));
        }
        Ok(DVector::from_vec(out))
    }
}

/// Everything the certificates need at one chart point.
#[derive(Debug, Clone)]
pub struct PointData {
    /// Chart coordinates the data was computed at.
    pub coords: Vec<f64>,
    /// Ambient position f(u).
    pub position: DVector<f64>,
    /// Orthonormal tangent frame, N x n.
    pub tangent: DMatrix<f64>,
    /// Orthonormal normal frame, N x m; excludes the radial direction for
    /// sphere-flagged charts.
    pub normal: DMatrix<f64>,
    pub sff: SecondFundamentalForm,
    pub amb: AmbientSpace,
}

/// Richardson-extrapolated derivative data of a chart at a point.
struct ChartJet {
    position: DVector<f64>,
    jacobian: DMatrix<f64>,
    /// Second partials, indexed i * n + j (symmetric in i, j).
    hessian: Vec<DVector<f64>>,
}

fn chart_jet(chart: &ImmersionChart, u: &[f64]) -> Result<ChartJet> {
    let n = chart.n();
    let nn = chart.ambient_dim();
    let h = chart.fd_step();
    let probe = |offsets: &[(usize, f64)]| -> Result<DVector<f64>> {
        let mut shifted = u.to_vec();
        for &(idx, delta) in offsets {
            shifted[idx] += delta;
        }
        chart.evaluate(&shifted)
    };

    let position = probe(&[])?;
    let mut plus_h = Vec::with_capacity(n);
    let mut minus_h = Vec::with_capacity(n);
    let mut plus_half = Vec::with_capacity(n);
    let mut minus_half = Vec::with_capacity(n);
    for i in 0..n {
        plus_h.push(probe(&[(i, h)])?);
        minus_h.push(probe(&[(i, -h)])?);
        plus_half.push(probe(&[(i, 0.5 * h)])?);
        minus_half.push(probe(&[(i, -0.5 * h)])?);
    }

    // First derivatives: central differences at h and h/2, extrapolated to
    // fourth order.
    let mut jacobian = DMatrix::zeros(nn, n);
    for i in 0..n {
        let coarse = (&plus_h[i] - &minus_h[i]) / (2.0 * h);
        let fine = (&plus_half[i] - &minus_half[i]) / h;
        jacobian.set_column(i, &((4.0 * fine - coarse) / 3.0));
    }

    let mut hessian = vec![DVector::zeros(nn); n * n];
    for i in 0..n {
        let coarse = (&plus_h[i] - 2.0 * &position + &minus_h[i]) / (h * h);
        let fine = (&plus_half[i] - 2.0 * &position + &minus_half[i]) / (0.25 * h * h);
        hessian[i * n + i] = (4.0 * fine - coarse) / 3.0;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mixed = |s: f64| -> Result<DVector<f64>> {
                let pp = probe(&[(i, s), (j, s)])?;
                let pm = probe(&[(i, s), (j, -s)])?;
                let mp = probe(&[(i, -s), (j, s)])?;
                let mm = probe(&[(i, -s), (j, -s)])?;
                Ok((pp - pm - mp + mm) / (4.0 * s * s))
            };
            let coarse = mixed(h)?;
            let fine = mixed(0.5 * h)?;
            let value = (4.0 * fine - coarse) / 3.0;
            hessian[j * n + i] = value.clone();
            hessian[i * n + j] = value;
        }
    }
    Ok(ChartJet { position, jacobian, hessian })
}

/// Compute frames and the second fundamental form at chart point `u`.
///
/// The tangent frame comes from Gram–Schmidt on the Jacobian columns in
/// chart order; the normal frame completes the basis (radial direction
/// excluded first when the sphere flag is set). For flat hypersurfaces the
/// single normal is oriented inward (toward the origin), so convex bodies
/// about the origin get positive principal curvatures; all other normals
/// carry a deterministic canonical sign.
pub fn pointwise_sff(chart: &ImmersionChart, u: &[f64]) -> Result<PointData> {
    let n = chart.n();
    let jet = chart_jet(chart, u)?;

    // Rank check on the Jacobian before any frame is built.
    let svd = jet.jacobian.clone().svd(false, false);
    let sigma_max = svd.singular_values.iter().copied().fold(0.0f64, f64::max);
    let sigma_min = svd.singular_values.iter().copied().fold(f64::INFINITY, f64::min);
    if !(sigma_max > 0.0) || sigma_min <= 1e-8 * sigma_max {
        return Err(PinchError::DegenerateParametrization(format!(
            "chart differential at {u:?} has singular values in [{sigma_min:.3e}, {sigma_max:.3e}]"
        )));
    }

    let (tangent, r_factor) = mgs_qr(&jet.jacobian, 1e-10)?;
    // Columns of the Jacobian expand as J = Q R, so frame coordinates of
    // the coordinate vector fields are the columns of R^{-1}.
    let coeff = r_factor
        .clone()
        .try_inverse()
        .ok_or_else(|| PinchError::DegenerateParametrization("singular chart metric".into()))?;

    let (normal, amb) = match chart.sphere_radius() {
        Some(r) => {
            let norm = jet.position.norm();
            if (norm - r).abs() > 1e-10 * r.max(1.0) {
                return Err(PinchError::SphereViolation(format!(
                    "|f(u)| = {norm} but the chart claims radius {r}"
                )));
            }
            let m = chart.ambient_dim() - n - 1;
            if m == 0 {
                return Err(PinchError::BadDimension {
                    got: chart.ambient_dim(),
                    need: "positive codimension within the sphere",
                });
            }
            let mut spanned = DMatrix::zeros(chart.ambient_dim(), n + 1);
            spanned.view_mut((0, 0), (chart.ambient_dim(), n)).copy_from(&tangent);
            spanned.set_column(n, &(&jet.position / norm));
            (orthonormal_complement(&spanned), AmbientSpace::new(1.0 / (r * r)))
        }
        None => (orthonormal_complement(&tangent), AmbientSpace::euclidean()),
    };
    let m = normal.ncols();
    let mut normal = normal;
    if m == 1 && chart.sphere_radius().is_none() {
        // Single flat normal: orient inward so spheres about the origin
        // get principal curvature +1/r.
        if normal.column(0).dot(&jet.position) > 0.0 {
            normal.column_mut(0).neg_mut();
        }
    }

    // h[a][i][j] = <second derivative along frame directions, xi_a>; the
    // tangential part of the chart Hessian dies on the normal projection.
    let mut projections = vec![0.0; m * n * n];
    for s in 0..n {
        for t in 0..n {
            let hst = &jet.hessian[s * n + t];
            for a in 0..m {
                projections[(a * n + s) * n + t] = normal.column(a).dot(hst);
            }
        }
    }
    let sff = SecondFundamentalForm::from_fn(n, m, |a, i, j| {
        let mut acc = 0.0;
        for s in 0..n {
            let ci = coeff[(s, i)];
            if ci == 0.0 {
                continue;
            }
            for t in 0..n {
                acc += ci * coeff[(t, j)] * projections[(a * n + s) * n + t];
            }
        }
        acc
    })?;

    Ok(PointData {
        coords: u.to_vec(),
        position: jet.position,
        tangent,
        normal,
        sff,
        amb,
    })
}

/// Deterministic low-discrepancy sample of chart coordinates, mapped into
/// the chart domain. The sequence is fixed (no seed dependence) so repeated
/// runs certify identical points.
pub fn sample_points(chart: &ImmersionChart, count: usize) -> Vec<Vec<f64>> {
    let mut halton = Halton::new(chart.n());
    (0..count)
        .map(|_| {
            let unit = halton.next_point();
            chart
                .domain()
                .iter()
                .zip(unit.iter())
                .map(|(&(lo, hi), &t)| lo + (hi - lo) * t)
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{gauss_curvature, sectional};
    use crate::linalg::{haar_frame, rng_from_seed};
    use approx::assert_abs_diff_eq;

    fn sphere_cap_chart(radius: f64, pad_to: usize) -> ImmersionChart {
        // Angular chart of S^4(radius), optionally zero-padded into a
        // larger ambient space.
        ImmersionChart::new(
            "test-subsphere",
            4,
            pad_to,
            vec![(0.15, std::f64::consts::PI - 0.15); 4],
            None,
            move |u| {
                let mut out = vec![0.0; pad_to];
                let mut sin_prod = radius;
                for (i, &angle) in u.iter().enumerate() {
                    out[i] = sin_prod * angle.cos();
                    sin_prod *= angle.sin();
                }
                out[4] = sin_prod;
                out
            },
        )
        .unwrap()
    }

    #[test]
    fn chart_validation_rejects_bad_shapes() {
        let eval = |_: &[f64]| vec![0.0; 5];
        assert!(ImmersionChart::new("x", 1, 5, vec![(0.0, 1.0)], None, eval).is_err());
        assert!(ImmersionChart::new("x", 4, 4, vec![(0.0, 1.0); 4], None, eval).is_err());
        assert!(ImmersionChart::new("x", 4, 5, vec![(0.0, 1.0); 3], None, eval).is_err());
        assert!(ImmersionChart::new("x", 4, 5, vec![(0.0, 1.0); 4], Some(-1.0), eval).is_err());
        assert!(ImmersionChart::new("x", 4, 5, vec![(1.0, 0.0); 4], None, eval).is_err());
    }

    #[test]
    fn sphere_chart_gives_umbilic_data() {
        let chart = sphere_cap_chart(2.0, 5);
        for coords in sample_points(&chart, 6) {
            let point = pointwise_sff(&chart, &coords).unwrap();
            assert_eq!(point.sff.m(), 1);
            assert_abs_diff_eq!(point.amb.c, 0.0);
            for i in 0..4 {
                for j in 0..4 {
                    let expect = if i == j { 0.5 } else { 0.0 };
                    assert_abs_diff_eq!(point.sff.get(0, i, j), expect, epsilon = 1e-6);
                }
            }
        }
    }

    #[test]
    fn great_subsphere_is_totally_geodesic() {
        let mut chart = sphere_cap_chart(1.5, 6);
        chart.sphere_radius = Some(1.5);
        for coords in sample_points(&chart, 4) {
            let point = pointwise_sff(&chart, &coords).unwrap();
            assert_eq!(point.sff.m(), 1);
            assert_abs_diff_eq!(point.amb.c, 1.0 / 2.25, epsilon = 1e-15);
            let worst = (0..4)
                .flat_map(|i| (0..4).map(move |j| (i, j)))
                .map(|(i, j)| point.sff.get(0, i, j).abs())
                .fold(0.0f64, f64::max);
            assert!(worst <= 1e-6, "worst sff entry {worst}");
        }
    }

    #[test]
    fn sphere_flag_normals_exclude_the_radial_direction() {
        let mut chart = sphere_cap_chart(1.0, 7);
        chart.sphere_radius = Some(1.0);
        let coords = &sample_points(&chart, 1)[0];
        let point = pointwise_sff(&chart, coords).unwrap();
        assert_eq!(point.normal.ncols(), 2);
        let radial = &point.position / point.position.norm();
        for a in 0..2 {
            assert_abs_diff_eq!(point.normal.column(a).dot(&radial), 0.0, epsilon = 1e-9);
            for i in 0..4 {
                assert_abs_diff_eq!(
                    point.normal.column(a).dot(&point.tangent.column(i)),
                    0.0,
                    epsilon = 1e-9
                );
            }
        }
    }

    #[test]
    fn intrinsic_curvature_of_spheres_is_radius_squared_inverse() {
        for r in [1.0, 2.0] {
            let chart = sphere_cap_chart(r, 5);
            let mut rng = rng_from_seed(7);
            for coords in sample_points(&chart, 3) {
                let point = pointwise_sff(&chart, &coords).unwrap();
                let tensor = gauss_curvature(&point.sff, &point.amb);
                for _ in 0..5 {
                    let plane = haar_frame(&mut rng, 4, 2);
                    let k = sectional(
                        &tensor,
                        &plane.column(0).clone_owned(),
                        &plane.column(1).clone_owned(),
                    )
                    .unwrap();
                    assert_abs_diff_eq!(k, 1.0 / (r * r), epsilon = 1e-6);
                }
            }
        }
    }

    #[test]
    fn richardson_errors_shrink_by_at_least_three_on_halving() {
        // In the truncation-dominated regime the scheme is fourth order, so
        // halving the step should shrink errors by ~16; demand >= 3. The
        // steps are deliberately coarse: at the default step this chart is
        // already at the roundoff floor and halving cannot pay.
        let chart = sphere_cap_chart(2.0, 5);
        let worst_error = |step: f64| -> f64 {
            let chart = chart.clone().with_fd_step(step).unwrap();
            let mut worst = 0.0f64;
            for coords in sample_points(&chart, 5) {
                let point = pointwise_sff(&chart, &coords).unwrap();
                for i in 0..4 {
                    for j in 0..4 {
                        let expect = if i == j { 0.5 } else { 0.0 };
                        worst = worst.max((point.sff.get(0, i, j) - expect).abs());
                    }
                }
            }
            worst
        };
        let coarse = worst_error(5e-2);
        let fine = worst_error(2.5e-2);
        assert!(
            fine * 3.0 <= coarse,
            "halving did not pay: coarse {coarse:.3e}, fine {fine:.3e}"
        );
    }

    #[test]
    fn degenerate_charts_are_rejected() {
        let chart = ImmersionChart::new(
            "collapsed",
            2,
            4,
            vec![(0.0, 1.0); 2],
            None,
            |u| vec![u[0], u[0], 0.0, 1.0],
        )
        .unwrap();
        match pointwise_sff(&chart, &[0.4, 0.6]) {
            Err(PinchError::DegenerateParametrization(_)) => {}
            other => panic!("expected degeneracy error, got {other:?}"),
        }
    }

    #[test]
    fn sphere_violations_are_rejected() {
        let mut chart = sphere_cap_chart(2.0, 5);
        chart.sphere_radius = Some(1.0);
        // m would be zero anyway for N = 5; pad into R^6 to hit the radius
        // check itself.
        let mut chart6 = sphere_cap_chart(2.0, 6);
        chart6.sphere_radius = Some(1.0);
        assert!(matches!(
            pointwise_sff(&chart6, &sample_points(&chart6, 1)[0]),
            Err(PinchError::SphereViolation(_))
        ));
        assert!(pointwise_sff(&chart, &sample_points(&chart, 1)[0]).is_err());
    }

    #[test]
    fn composed_charts_drop_the_flag_but_keep_the_map() {
        let mut chart = sphere_cap_chart(1.0, 6);
        chart.sphere_radius = Some(1.0);
        let composed = chart.composed();
        assert!(composed.sphere_radius().is_none());
        let u = &sample_points(&chart, 1)[0];
        assert_eq!(chart.evaluate(u).unwrap(), composed.evaluate(u).unwrap());
        let flat = pointwise_sff(&composed, u).unwrap();
        assert_eq!(flat.sff.m(), 2);
        assert_abs_diff_eq!(flat.amb.c, 0.0);
    }

    #[test]
    fn sample_points_are_deterministic_and_in_domain() {
        let chart = sphere_cap_chart(1.0, 5);
        let a = sample_points(&chart, 40);
        let b = sample_points(&chart, 40);
        assert_eq!(a, b);
        for coords in &a {
            for (value, &(lo, hi)) in coords.iter().zip(chart.domain()) {
                assert!(lo <= *value && *value < hi);
            }
        }
    }
}
