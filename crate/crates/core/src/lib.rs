//! Exact certification of K-instability for polarised rational surfaces.
//!
//! A surface is presented as `P2` or a Hirzebruch surface `F(n)` followed by
//! blow-ups tagged by whether the point lies on the negative section `Z`.
//! [`destabilize`] produces a [`Certificate`]: a polarisation, a curve, a
//! parameter `λ` and a chain of blow-up perturbations for which the slope
//! test configuration has negative Donaldson–Futaki invariant. [`verify`]
//! replays a certificate from its presentation string alone.
//!
//! All arithmetic is over arbitrary-precision rationals.

pub mod autgroup;
pub mod cli;
pub mod destabilize;
pub mod error;
pub mod futaki;
pub mod lattice;
pub mod positivity;
pub mod rational;
pub mod surface;

pub use autgroup::{
    aut0_description, demazure_roots, fan_of, is_reductive, matsushima_verdict, DemazureRoot,
    FanModel, GroupDescription, ObstructionReport,
};
pub use destabilize::{
    destabilize, verify, Certificate, DestabilizeOptions, Verdict, VerifyReport,
};
pub use error::{Error, Result};
pub use futaki::{
    df_slope, df_total_space_oracle, find_destabilizing_lambda, hirzebruch_endpoint_df, slope,
    SlopeInput, SlopeOutcome, TestConfigModel,
};
pub use lattice::{BaseKind, CurveClassRecord, CurveTag, DivisorClass, IntersectionLattice};
pub use positivity::{PositivityReport, PositivityVerdict};
pub use rational::Q;
pub use surface::{parse_presentation, BlowupStep, Locus, SurfacePresentation};
