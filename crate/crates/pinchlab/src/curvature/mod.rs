//! Pointwise curvature data of an isometric immersion: second fundamental
//! form coefficients, the induced curvature tensor via the Gauss equation,
//! and the scalar functionals (sectional, Ricci, partial traces, isotropic
//! expression, pinching threshold) that the certificates are built from.
//!
//! Conventions, fixed once for the whole workspace:
//! * frames are orthonormal; the metric never appears explicitly;
//! * `R_{ijkl} = g(R(e_i, e_j) e_k, e_l)` with `K(e_i ^ e_j) = R_{ijji}`,
//!   so the round unit sphere has sectional curvature `+1`;
//! * normal indices come first in `h[a][i][j]`;
//! * the mean curvature `H` is the norm of the mean curvature vector.

mod sff;
mod tensor;

pub use sff::{
    mean_curvature, rotate_sff, theta_p, theta_p_subspace, AmbientSpace, MeanCurvature,
    SecondFundamentalForm,
};
pub use tensor::{
    component_in_frame, coordinate_sectional, curvature_form, gauss_curvature,
    isotropic_expression, pinching_bound, ricci, sectional, CurvatureTensor,
};

pub(crate) use tensor::isotropic_expression_unchecked;
