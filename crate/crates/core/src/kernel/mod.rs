//! Finite objects, morphisms, diagrams and limits shared by every category.

mod budget;
mod hom;
mod limit;
mod subobject;

pub use budget::{Budget, Meter, BUDGET_ENV, DEFAULT_BUDGET};
pub use hom::{compose, enumerate_hom, FinMorphism};
pub use limit::{
    compatible_families, compatible_families_by_product, limit, limit_of_checked, product,
    pullback, structure_families, Arrow, FinDiagram, Limit,
};
pub use subobject::{global_elements, intersect_subobjects, Subobject};
