//! Truncated simplicial machinery: simplicial and bisimplicial sets,
//! coskeleta and Segal maps, Cat-valued simplicial objects, and sheaves on
//! simplicial spaces.

mod catsset;
mod sheaf;
mod sset;

pub use catsset::{
    arrow_token, discrete_catsset_from_sset, is_discrete_isofibration,
    is_equivalence_of_categories, is_simpson, is_tamsamani, segal_functor_report, ArrowData,
    CatCoskUnit, CatOp, CatSSet, CatSSetJson, LaxIconLevel, LevelCategory, SegalFunctorReport,
};
pub use sheaf::{
    constant_sheaf_system, pulled_back_system, validate_sheaf_on_sspace, MonotoneKey,
    SheafOnSSpace, SheafSystemJson, SpaceSSet, SpaceSSetJson,
};
pub use sset::{
    codegeneracy, coface, constant_singleton, coskeleton_level, diagonal, is_k_coskeletal,
    matching_tuples, monotone_maps, product_bisset, product_cell_id, product_sset, segal_map,
    CoskLevel, CoskeletalReport, IdentityViolation, SegalMap, TruncBiSSet, TruncSSet,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimplicialError {
    #[error("truncation too shallow: need level {needed}, have {have}")]
    TruncationTooShallow { needed: usize, have: usize },
    #[error("{0}")]
    Malformed(String),
}
