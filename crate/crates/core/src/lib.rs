//! nervekit: finite bicategories and their nerves, sheaves and linear
//! orders over finite sober spaces, principal bundles, and integral
//! homology probes — everything decidable checked by exhaustive
//! enumeration at desk scale.

pub mod bicategory;
pub mod category;
pub mod finspace;
pub mod fixtures;
pub mod homology;
pub mod principal;
pub mod simplicial;
