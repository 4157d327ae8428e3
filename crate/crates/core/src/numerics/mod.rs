//! Small numerical kernels: tridiagonal elimination, adaptive quadrature,
//! monotone interpolation, finite-difference stencils and least-squares fits.

pub mod fd;
pub mod fit;
pub mod interp;
pub mod quadrature;
pub mod tridiag;
