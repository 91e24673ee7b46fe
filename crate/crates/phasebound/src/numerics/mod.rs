//! Shared numerical kernels: quadrature, an embedded Runge-Kutta integrator,
//! root finding, tridiagonal eigensolvers, Numerov propagation, and monotone
//! cubic interpolation.

pub mod numerov;
pub mod pchip;
pub mod quadrature;
pub mod rk45;
pub mod roots;
pub mod tridiag;
