//! The Hessian of the gate objective at the zero control.
//!
//! The reduced operator `K` has three eigenvalue branches (oscillatory,
//! linear, hyperbolic), each the zero set of a closed-form characteristic
//! function. [`spectrum_report`] enumerates them and classifies the point.

pub mod characteristic;
pub mod domain;
pub mod kernel;
pub mod quadrature;
pub mod report;
pub mod roots;

pub use characteristic::{f1, f2, mu1_determinant};
pub use domain::{classify_domain, DomainLabel, LandscapePoint};
pub use kernel::{
    apply_reduced_kernel, hessian_kernel, nystrom_eigenvalues, quadratic_form, quadratic_form_piecewise,
    reduced_kernel,
};
pub use report::{
    eigen_residual, eigenfunction_coeffs, scan_signs, sign_scan_lemma_checks, spectrum_report, Branch,
    Eigenpair, SignScan, SpectrumReport, Verdict,
};
pub use roots::{bracket_f1_roots, refine_root, Bracket};
