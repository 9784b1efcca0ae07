//! Category descriptors: objects, morphism conditions, internal homs,
//! dualizing objects and enumeration of small objects.

mod category;
mod internal;
mod lift;
pub(crate) mod morphism;
mod object;
mod relation;
mod skeleton;

pub use category::{Category, Monoid, Signature, Symbol, MAX_ARITY, MAX_SYMBOLS};
pub use internal::{
    cogenerator_check, dualizing_object, internal_hom, subset_label, unit_object, HomObject,
    Unseparated,
};
pub use lift::{initial_lift, rref_basis, Leg};
pub use morphism::is_morphism;
pub use object::{
    basis_vector, coords, from_coords, validate, vec_add, vec_scale, Carrier, Elem, FinObject,
    Structure, BOTTOM_LABEL,
};
pub use relation::{BitSet, Relation};
pub use skeleton::{
    canonical_form, fp_objects_up_to, relabel, substructures, ImageFactor, IsoKey, Subcategory,
    MAX_CANONICAL_SIZE,
};
