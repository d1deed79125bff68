//! Dense linear algebra kernels, all deterministic given input bits.

pub mod hessenberg_eig;
pub mod jacobi_svd;
pub mod qr;
pub mod sym_eigen;

pub use hessenberg_eig::{eigenvalues, NonSymEigenError};
pub use jacobi_svd::{jacobi_svd, singular_values, JacobiSvd, SvdError};
pub use qr::sigma_min_via_qr;
pub use sym_eigen::{sym_eigen, EigenError, SymEigen};
