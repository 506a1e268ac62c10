//! Differential geometry of surfaces in the pseudo-Galilean space G³₁.
//!
//! The crate is organised bottom-up:
//!
//! * [`gcore`]: points, vectors, products and the six-parameter motion group.
//! * [`jets`]: order-3 Taylor jets used as the derivative carrier everywhere.
//! * [`surface`]: fundamental forms, normal frame and curvatures of a patch.
//! * [`laplace2`]: the Laplacian with respect to the second fundamental form.
//! * [`homothetical`]: factorable surfaces, the null-curvature classifier and
//!   the case audits for the eigenvalue problem `Δᴵᴵ xᵢ = λᵢ xᵢ`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod gcore;
pub mod grid;
pub mod homothetical;
pub mod jets;
pub mod laplace2;
pub mod surface;
pub mod tolerances;

pub use error::{GeomError, ParseError};
pub use gcore::{g_cross, g_distance, g_dot, GPoint, GVector, IsotropyClass, Motion};
pub use grid::{Axis, Grid};
pub use homothetical::{
    audit::{audit_all, audit_case, CaseAudit, CaseId, Contradiction, Evidence, ParamSet},
    classify_null_k, degeneracy, parse_factor, reduced_equation_residual, relative_degeneracy,
    FactorFn, FactorKind, HomotheticalSurface, NullKClass, SurfaceType,
};
pub use jets::{jet_fn, Elementary, Jet, Jet1, Jet2};
pub use laplace2::{
    chain_identity_residual, eigen_fit, laplacian_ii, ChainIdentityReport, EigenFit, LaplaceSample,
};
pub use surface::{
    CurvaturePair, FirstFundamental, FrameData, NormalFrame, SecondFundamental, SurfacePatch,
};
pub use tolerances::Tolerances;
