//! Exact pointwise linear algebra on one oriented 4-dimensional tangent
//! space: wedge and interior products, Hodge stars of arbitrary metrics, the
//! metric `g^rho` attached to a nondegenerate 2-form, and quaternion triples.
//!
//! All operations are pure functions on `Copy` value types.

pub mod forms;
pub mod metric;
pub mod quaternion;
pub mod rho;
pub mod signs;

pub use forms::{
    interior, wedge12, wedge13, wedge22, Components, Form1, Form2, Form3, Form4, Interior, LinMap4,
    Vector4,
};
pub use metric::{hodge, HodgeDual, HodgeStar, Metric4};
pub use quaternion::{metric_from_vol_and_plane, quaternion_triple, standard_triple};
pub use rho::{
    a_of, check_admissible, g_rho, j_rho, r_rho, sd_split, star_rho_1, star_rho_2, star_rho_3,
    theta_dot_point, theta_point, u_of, vector_from_interior, U_FLOOR,
};
