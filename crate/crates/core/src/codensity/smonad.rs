use std::sync::Arc;

use super::instance::{Construction, MonadInstance, Setting};
use crate::dultrafilter::{instance_in_ambient, Ambient, AmbientKind};
use crate::error::{Error, Result};
use crate::kernel::Budget;
use crate::plugins::{Category, Elem, FinObject};

/// `SX = D^Hom(X, D)` with its unit; projections are indexed by the probes.
#[derive(Clone, Debug)]
pub struct SMonadInstance {
    pub base: Arc<FinObject>,
    pub ambient: Arc<Ambient>,
    pub unit: Vec<Elem>,
}

impl SMonadInstance {
    /// Projection `π_f: SX -> D` for the probe with index `f`.
    pub fn projection(&self, f: usize) -> Vec<Elem> {
        self.ambient.elements.iter().map(|u| u[f]).collect()
    }

    /// `μ^S: S(SX) -> SX` from `π_f ∘ μ = π_{π_f}`, where `outer` is built on `SX`.
    pub fn multiplication(&self, outer: &SMonadInstance) -> Result<Vec<Elem>> {
        let slots: Vec<usize> = (0..self.ambient.probes.len())
            .map(|f| {
                outer
                    .ambient
                    .probe_index(&self.projection(f))
                    .ok_or_else(|| Error::Construction("a projection of SX is not a probe".into()))
            })
            .collect::<Result<_>>()?;
        outer
            .ambient
            .elements
            .iter()
            .map(|w| {
                let table: Vec<Elem> = slots.iter().map(|&s| w[s]).collect();
                self.ambient
                    .index_of(&table)
                    .ok_or_else(|| Error::Construction("multiplication leaves SX".into()))
            })
            .collect()
    }

    /// `Sf: SX -> SY`, `u ↦ (g ↦ u(g ∘ f))`.
    pub fn on_morphism(&self, target: &SMonadInstance, f: &[Elem]) -> Result<Vec<Elem>> {
        let slots: Vec<usize> = target
            .ambient
            .probes
            .iter()
            .map(|g| {
                let gf: Vec<Elem> = f.iter().map(|&x| g[x]).collect();
                self.ambient
                    .probe_index(&gf)
                    .ok_or_else(|| Error::Construction("a precomposite probe is missing".into()))
            })
            .collect::<Result<_>>()?;
        self.ambient
            .elements
            .iter()
            .map(|u| {
                let table: Vec<Elem> = slots.iter().map(|&s| u[s]).collect();
                target
                    .ambient
                    .index_of(&table)
                    .ok_or_else(|| Error::Construction("image leaves SY".into()))
            })
            .collect()
    }
}

/// The monad of the adjunction induced by the dualizing object.
pub fn s_monad(cat: &Category, x: &FinObject, budget: Budget) -> Result<SMonadInstance> {
    let ambient = Arc::new(Ambient::build(cat, AmbientKind::Power, x, budget)?);
    let unit = ambient.eta(x.len())?;
    Ok(SMonadInstance {
        base: Arc::new(x.clone()),
        ambient,
        unit,
    })
}

/// `TX` as the intersection inside `SX` of the preimages of the points of
/// each member.
pub fn codensity_by_smonad(setting: &Setting, x: &FinObject) -> Result<MonadInstance> {
    let s = s_monad(&setting.category, x, setting.budget)?;
    instance_in_ambient(Construction::SMonad, setting, s.ambient, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_monad_laws_on_a_point() {
        let cat = Category::Set;
        let b = Budget::default();
        let x = FinObject::set(1);
        let s = s_monad(&cat, &x, b).unwrap();
        assert_eq!(s.ambient.len(), 4);
        let ss = s_monad(&cat, &s.ambient.object, b).unwrap();
        assert_eq!(ss.ambient.len(), 1 << 16);
        let mu = s.multiplication(&ss).unwrap();
        // μ ∘ η_S = id and μ ∘ S(η) = id
        assert!((0..4).all(|u| mu[ss.unit[u]] == u));
        let s_eta = s.on_morphism(&ss, &s.unit).unwrap();
        assert!((0..4).all(|u| mu[s_eta[u]] == u));
    }

    #[test]
    fn unit_hits_projections() {
        let cat = Category::Vec { q: 2 };
        let x = FinObject::vector(2, 1);
        let s = s_monad(&cat, &x, Budget::default()).unwrap();
        assert_eq!(s.ambient.len(), 4);
        for (f, g) in s.ambient.probes.iter().enumerate() {
            let pi = s.projection(f);
            assert!((0..x.len()).all(|p| pi[s.unit[p]] == g[p]));
        }
    }
}
