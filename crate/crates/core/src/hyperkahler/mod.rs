//! The flat hyperKähler structure of the torus and the formulas for the
//! energy, `Theta`, the gradient and the Hessian in terms of the functions
//! `K_i = omega_i ^ rho / dvol_rho`. They are independent of the formulas
//! in [`crate::flow`] and serve as cross-checks for them.

pub mod hessian;
pub mod structure;

pub use hessian::{
    covariant_derivative, hessian_hk, hessian_hk3, hessiancov_check, jacobian, k_hat, khat_hhat,
    vector_field, HessianFields, HessianLedger, VectorField,
};
pub use structure::{
    d_theta_hk, energy_hk, grad_hk, hk_one_form, j_rho_fields, k_functions, k_point, theta_hk,
    theta_hk_point, u_and_k, HKTriple, KFunctions,
};
