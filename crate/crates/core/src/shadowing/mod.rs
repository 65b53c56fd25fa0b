//! Pseudo-orbits, exact shadowing feasibility and growth of images.

pub mod feasibility;
pub mod mixing;
pub mod pseudo_orbit;

pub use feasibility::{
    constraint_window, shadow_feasible, witness_holds, DeadEnd, FeasibleInterval,
    NoShadowCertificate, ShadowOutcome, ShadowWitness, DEFAULT_BRANCH_CAP,
};
pub use mixing::{classify, growing_images_series, HausdorffSeries, MixingVerdict, PLATEAU_RUN};
pub use pseudo_orbit::{
    diagonal_pseudo_orbit, diagonal_threshold, separation_radius, staircase_pseudo_orbit,
    verify_pseudo_orbit, PseudoOrbit,
};
