//! Legendre polynomials, Fourier–Laplace transforms, the eigenspace
//! decomposition of the Hardy tensor square, and the constant `b_ℓ`.
//!
//! Hardy norms are always taken through the half-line Plancherel reductions.

mod ftilde;
mod legendre;
mod norms;
mod profile;

pub use ftilde::{diagram_check, ftilde, legendre_poly, phase_oracle, rg_legendre_check, ExpLift, FTilde, FTILDE_S_NODES, FTILDE_V_NODES};
pub use legendre::{legendre, legendre_generic, legendre_norm, legendre_rodrigues, ptilde_check, LegendreTable, LEGENDRE_TABLE_MAX};
pub use norms::{
    b_ell, b_ell_double_factorial, c_ell, gram_matrix, hardy_inner, hardy_norm_ratio, hermitian_defect,
    laguerre_profiles, off_diagonal_defect, p_matrix, ptilde_poly, SeparableElement,
};
pub use profile::{bergman_norm_check, fourier_laplace, half_line_integral, weighted_l2_norm_sq, HalfLineProfile};
