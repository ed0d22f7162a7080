//! Dense complex linear algebra kernels.

mod eigen;
mod functions;
mod io;
mod matrix;
mod svd;

pub use eigen::{check_hermitian, hermitian_eig, hermitian_eigenvalues, HermitianEigenDecomp};
pub use functions::{
    ensure_hermitian, func_apply, hermitian_schatten, inverse_hermitian, inverse_pd, matrix_abs, min_eig_psd_check,
    normal_eigenvalues, normality_defect, polar_decompose, schatten, schatten_norm, SchattenP, Side,
};
pub use io::{matrix_from_json, matrix_to_json};
pub use matrix::{dot, vec_norm, ComplexMatrix, C64};
pub use svd::{complete_orthonormal, operator_norm, singular_values, svd_decompose, SingularDecomp};
