//! The codensity monad of a full subcategory: the limit formula, the
//! submonad of the dualizing-object monad, comparison of constructions and
//! natural transformations.

mod compare;
mod coslice;
mod enrich;
mod instance;
mod limit;
mod smonad;

pub use compare::{
    available_constructions, compare_constructions, compare_instances, compare_multiplications,
    Agreement, Comparison, Mismatch,
};
pub use coslice::{connecting_morphisms, Connecting, Coslice, CosliceEntry, MemberHoms};
pub use enrich::{
    enrichment_structure_check, lambda, lambda_check, natural_transformations, LambdaCheck,
    NaturalTransformations,
};
pub use instance::{
    check_laws, cone_is_natural, t_on_morphism, Construction, Embedding, LawCheck, MonadInstance,
    MonadTower, Setting, DEFAULT_MULT_CAP,
};
pub use limit::{codensity_by_limit, coslice_diagram, full_limit, CosliceDiagram, LimitMode};
pub use smonad::{codensity_by_smonad, s_monad, SMonadInstance};

use crate::dultrafilter::monad_by_intersection;
use crate::error::Result;
use crate::plugins::{Elem, FinObject};

/// `TX` by the chosen construction.
pub fn construct(
    setting: &Setting,
    x: &FinObject,
    construction: Construction,
) -> Result<MonadInstance> {
    match construction {
        Construction::DoubleDual => monad_by_intersection(setting, x),
        Construction::LimitFormula => codensity_by_limit(setting, x, LimitMode::Auto),
        Construction::SMonad => codensity_by_smonad(setting, x),
    }
}
