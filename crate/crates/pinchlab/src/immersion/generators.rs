//! Built-in example charts: round spheres, ellipsoids, products of
//! 2-spheres, Veronese embeddings, and the projective plane in the
//! 7-sphere. Each generator returns a validated [`ImmersionChart`] whose
//! domain stays clear of coordinate degeneracies.

use std::f64::consts::PI;

use crate::error::{PinchError, Result};

use super::ImmersionChart;

/// Margin kept between angular chart domains and the poles where the
/// parametrization degenerates.
const ANGULAR_MARGIN: f64 = 0.15;

/// Wider pole margin for the Veronese chart: the map is quadratic in the
/// angular point, so derivative growth toward the poles is squared and
/// the differentiation error near a 0.15 margin can reach 1e-5. By
/// homogeneity of the embedding the narrower box certifies the same
/// geometry.
const VERONESE_MARGIN: f64 = 0.45;

/// Supremum of the axis ratio `a` for which the ellipsoid
/// `E(1, ..., 1, a)` in dimension `n` satisfies the pinching condition
/// everywhere: `3^(1/6)` for `n = 4` and `(8/n)^(1/6)` for `5 <= n <= 8`.
/// No ratio above 1 works for `n >= 9`.
pub fn epsilon_bound(n: usize) -> Result<f64> {
    match n {
        4 => Ok(3.0f64.powf(1.0 / 6.0)),
        5..=8 => Ok((8.0 / n as f64).powf(1.0 / 6.0)),
        _ => Err(PinchError::BadDimension { got: n, need: "4 <= n <= 8" }),
    }
}

/// Unit-sphere point from `n` polar angles:
/// `x_1 = cos u_1, x_2 = sin u_1 cos u_2, ..., x_{n+1} = sin u_1 ... sin u_n`.
fn angular_point(u: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; u.len() + 1];
    let mut sin_prod = 1.0;
    for (i, &angle) in u.iter().enumerate() {
        out[i] = sin_prod * angle.cos();
        sin_prod *= angle.sin();
    }
    out[u.len()] = sin_prod;
    out
}

fn angular_domain(n: usize) -> Vec<(f64, f64)> {
    vec![(ANGULAR_MARGIN, PI - ANGULAR_MARGIN); n]
}

/// Round hypersphere `S^n(r)` in flat space, via polar angles.
pub fn gen_sphere(n: usize, r: f64) -> Result<ImmersionChart> {
    if !(r.is_finite() && r > 0.0) {
        return Err(PinchError::BadParameter(format!("sphere radius must be positive, got {r}")));
    }
    ImmersionChart::new(
        format!("sphere(n={n}, r={r})"),
        n,
        n + 1,
        angular_domain(n),
        None,
        move |u| angular_point(u).into_iter().map(|x| r * x).collect(),
    )
}

/// Ellipsoid with the given semi-axes (the polar-angle sphere chart scaled
/// axis by axis); dimension is `axes.len() - 1`.
pub fn gen_ellipsoid(axes: &[f64]) -> Result<ImmersionChart> {
    if axes.len() < 3 {
        return Err(PinchError::BadDimension {
            got: axes.len(),
            need: "at least 3 semi-axes",
        });
    }
    if axes.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
        return Err(PinchError::BadParameter(format!(
            "all semi-axes must be positive, got {axes:?}"
        )));
    }
    let n = axes.len() - 1;
    let axes = axes.to_vec();
    ImmersionChart::new(
        format!("ellipsoid{axes:?}"),
        n,
        n + 1,
        angular_domain(n),
        None,
        move |u| {
            angular_point(u)
                .into_iter()
                .zip(&axes)
                .map(|(x, a)| a * x)
                .collect()
        },
    )
}

/// Product of two round 2-spheres in flat 6-space, coordinates
/// `(phi_1, theta_1, phi_2, theta_2)`. With `on_sphere` set, the chart is
/// flagged as lying on the origin-centered sphere of radius
/// `sqrt(r1^2 + r2^2)` — the natural home of the product — and all data is
/// computed relative to that sphere (codimension one there).
pub fn gen_product_spheres(r1: f64, r2: f64, on_sphere: bool) -> Result<ImmersionChart> {
    for r in [r1, r2] {
        if !(r.is_finite() && r > 0.0) {
            return Err(PinchError::BadParameter(format!(
                "factor radii must be positive, got {r}"
            )));
        }
    }
    let theta_range = (ANGULAR_MARGIN, 2.0 * PI - ANGULAR_MARGIN);
    let phi_range = (ANGULAR_MARGIN, PI - ANGULAR_MARGIN);
    let radius = on_sphere.then(|| (r1 * r1 + r2 * r2).sqrt());
    ImmersionChart::new(
        format!("product-spheres(r1={r1}, r2={r2})"),
        4,
        6,
        vec![phi_range, theta_range, phi_range, theta_range],
        radius,
        move |u| {
            let factor = |r: f64, phi: f64, theta: f64| {
                [
                    r * phi.sin() * theta.cos(),
                    r * phi.sin() * theta.sin(),
                    r * phi.cos(),
                ]
            };
            let a = factor(r1, u[0], u[1]);
            let b = factor(r2, u[2], u[3]);
            vec![a[0], a[1], a[2], b[0], b[1], b[2]]
        },
    )
}

/// Veronese embedding of `S^n` (antipodal points identified): the unit
/// sphere point `x` maps to `sqrt((n+1)/n) (x x^T - I/(n+1))`, a traceless
/// symmetric matrix written in orthonormal coordinates (Helmert diagonal
/// combinations plus `sqrt(2)` times each upper off-diagonal entry). The
/// image lies on the unit sphere of `R^{n(n+3)/2}` and the chart carries
/// that flag, so data is computed relative to the sphere, where the
/// embedding is minimal.
pub fn gen_veronese(n: usize) -> Result<ImmersionChart> {
    if n < 2 {
        return Err(PinchError::BadDimension { got: n, need: "n >= 2" });
    }
    let dim = n + 1;
    let ambient = n * (n + 3) / 2;
    ImmersionChart::new(
        format!("veronese(n={n})"),
        n,
        ambient,
        vec![(VERONESE_MARGIN, PI - VERONESE_MARGIN); n],
        Some(1.0),
        move |u| {
            let x = angular_point(u);
            let scale = (dim as f64 / n as f64).sqrt();
            let y_diag = |i: usize| scale * (x[i] * x[i] - 1.0 / dim as f64);
            let mut out = Vec::with_capacity(ambient);
            for k in 1..=n {
                let mut d = 0.0;
                for i in 0..k {
                    d += y_diag(i);
                }
                d -= k as f64 * y_diag(k);
                out.push(d / (k as f64 * (k + 1) as f64).sqrt());
            }
            for i in 0..dim {
                for j in (i + 1)..dim {
                    out.push(std::f64::consts::SQRT_2 * scale * x[i] * x[j]);
                }
            }
            out
        },
    )
}

/// The complex projective plane in the 7-sphere: the affine chart
/// `z = (1, w_1 + i w_2, w_3 + i w_4) / |...|` maps to the traceless
/// Hermitian matrix `z z^* - I/3`, written in orthonormal real coordinates
/// (two diagonal combinations, then real and imaginary off-diagonal parts,
/// each scaled by `sqrt(2)`). The image lies on the sphere of radius
/// `sqrt(2/3)` in `R^8`, where the embedding is minimal with codimension
/// three; `composed()` gives the same map into flat `R^8`.
pub fn gen_cp2() -> Result<ImmersionChart> {
    ImmersionChart::new(
        "cp2-s7",
        4,
        8,
        vec![(-1.0, 1.0); 4],
        Some((2.0f64 / 3.0).sqrt()),
        |w| {
            let norm = (1.0 + w.iter().map(|v| v * v).sum::<f64>()).sqrt();
            let re = [1.0 / norm, w[0] / norm, w[2] / norm];
            let im = [0.0, w[1] / norm, w[3] / norm];
            // X_{jk} = z_j conj(z_k) - delta_{jk}/3.
            let x_re =
                |j: usize, k: usize| re[j] * re[k] + im[j] * im[k] - if j == k { 1.0 / 3.0 } else { 0.0 };
            let x_im = |j: usize, k: usize| im[j] * re[k] - re[j] * im[k];
            let s = std::f64::consts::SQRT_2;
            vec![
                (x_re(0, 0) - x_re(1, 1)) / s,
                (x_re(0, 0) + x_re(1, 1) - 2.0 * x_re(2, 2)) / 6.0f64.sqrt(),
                s * x_re(0, 1),
                s * x_re(0, 2),
                s * x_re(1, 2),
                s * x_im(0, 1),
                s * x_im(0, 2),
                s * x_im(1, 2),
            ]
        },
    )
}
