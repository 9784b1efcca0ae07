use std::collections::HashMap;
use std::sync::Arc;

use super::coslice::Coslice;
use super::instance::{MonadInstance, Setting};
use crate::error::{Error, Result};
use crate::kernel::{compatible_families, enumerate_hom};
use crate::plugins::{internal_hom, is_morphism, Category, Elem, FinObject};

/// Families `τ_A: Hom(X, A) -> Hom(Z, A)` natural in the member `A`, each
/// stored per coslice entry as an index into `z_homs[A]`.
#[derive(Clone, Debug)]
pub struct NaturalTransformations {
    pub coslice: Arc<Coslice>,
    pub z_homs: Vec<Vec<Vec<Elem>>>,
    z_index: Vec<HashMap<Vec<Elem>, usize>>,
    pub families: Vec<Vec<usize>>,
}

impl NaturalTransformations {
    /// Index of `m` in `Hom(Z, A_k)`.
    pub fn index_in(&self, k: usize, m: &[Elem]) -> Option<usize> {
        self.z_index[k].get(m).copied()
    }
}

pub fn natural_transformations(
    setting: &Setting,
    x: &FinObject,
    z: &FinObject,
) -> Result<NaturalTransformations> {
    let cat = &setting.category;
    let coslice = setting.coslice(x)?;
    let homs = setting.member_homs()?;
    let members = &setting.subcat.objects;
    let z_homs: Vec<Vec<Vec<Elem>>> = members
        .iter()
        .map(|a| enumerate_hom(cat, z, a, setting.budget))
        .collect::<Result<_>>()?;
    let z_index: Vec<HashMap<Vec<Elem>, usize>> = z_homs
        .iter()
        .map(|hs| hs.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect())
        .collect();
    // postcomposition with each h: A_k -> A_j on Hom(Z, -)
    let mut post: HashMap<(usize, usize, usize), Vec<usize>> = HashMap::new();
    let mut arrows: Vec<(usize, usize, (usize, usize, usize))> = Vec::new();
    let mut buf = Vec::new();
    let mut meter = setting.budget.meter("enumerating naturality constraints");
    for (e, entry) in coslice.entries.iter().enumerate() {
        let k = entry.object;
        for j in 0..members.len() {
            for (hi, h) in homs.get(k, j).iter().enumerate() {
                meter.tick()?;
                buf.clear();
                buf.extend(entry.map.iter().map(|&v| h[v]));
                let to = coslice
                    .find(j, &buf)
                    .expect("composite of morphisms is a morphism");
                post.entry((k, j, hi)).or_insert_with(|| {
                    z_homs[k]
                        .iter()
                        .map(|m| {
                            let hm: Vec<Elem> = m.iter().map(|&v| h[v]).collect();
                            z_index[j][&hm]
                        })
                        .collect()
                });
                arrows.push((e, to, (k, j, hi)));
            }
        }
    }
    let domains: Vec<usize> = coslice
        .entries
        .iter()
        .map(|en| z_homs[en.object].len())
        .collect();
    let constraints: Vec<(usize, usize, &[Elem])> = arrows
        .iter()
        .map(|(s, t, key)| (*s, *t, post[key].as_slice()))
        .collect();
    let families = compatible_families(&domains, &constraints, setting.budget)?;
    Ok(NaturalTransformations {
        coslice,
        z_homs,
        z_index,
        families,
    })
}

/// `z ↦ (a ↦ ψ_a ∘ z)` for every `z: Z -> TX`.
pub fn lambda(
    inst: &MonadInstance,
    nat: &NaturalTransformations,
    z_to_t: &[Vec<Elem>],
) -> Result<Vec<Vec<usize>>> {
    z_to_t
        .iter()
        .map(|zm| {
            inst.coslice
                .entries
                .iter()
                .zip(&inst.cone)
                .map(|(entry, psi)| {
                    let composite: Vec<Elem> = zm.iter().map(|&u| psi[u]).collect();
                    nat.index_in(entry.object, &composite)
                        .ok_or_else(|| Error::Construction("ψ ∘ z is not a morphism".into()))
                })
                .collect()
        })
        .collect()
}

/// Outcome of the natural-transformation comparison for one pair `X, Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaCheck {
    pub natural: usize,
    pub homs: usize,
    pub bijective: bool,
    /// Posets only: `z ≤ z'` iff `τ^z ≤ τ^{z'}` pointwise.
    pub order_agrees: Option<bool>,
}

pub fn lambda_check(setting: &Setting, inst: &MonadInstance, z: &FinObject) -> Result<LambdaCheck> {
    let nat = natural_transformations(setting, inst.base(), z)?;
    let z_to_t = enumerate_hom(&setting.category, z, &inst.object, setting.budget)?;
    let images = lambda(inst, &nat, &z_to_t)?;
    let mut sorted = images.clone();
    sorted.sort();
    sorted.dedup();
    let bijective = sorted.len() == images.len() && sorted == nat.families;
    let order_agrees = matches!(setting.category, Category::Pos).then(|| {
        let members = &setting.subcat.objects;
        let tau_le = |s: &[usize], t: &[usize]| {
            nat.coslice.entries.iter().enumerate().all(|(e, entry)| {
                let a = &members[entry.object];
                let (ms, mt) = (
                    &nat.z_homs[entry.object][s[e]],
                    &nat.z_homs[entry.object][t[e]],
                );
                ms.iter().zip(mt).all(|(&p, &q)| a.le(p, q))
            })
        };
        (0..z_to_t.len()).all(|i| {
            (0..z_to_t.len()).all(|j| {
                let z_le = z_to_t[i]
                    .iter()
                    .zip(&z_to_t[j])
                    .all(|(&p, &q)| inst.object.le(p, q));
                z_le == tau_le(&images[i], &images[j])
            })
        })
    });
    Ok(LambdaCheck {
        natural: nat.families.len(),
        homs: z_to_t.len(),
        bijective,
        order_agrees,
    })
}

/// `ψ_r` for an arbitrary function `r: X -> A` on underlying sets: the
/// unique `y` whose fibre lies in the collection of `u`.
fn psi_on_function(inst: &MonadInstance, r: &[Elem], a_len: usize, u: Elem) -> Result<Elem> {
    let emb = inst
        .embedding
        .as_ref()
        .ok_or_else(|| Error::Input("maps on underlying sets need an embedded instance".into()))?;
    let values = &emb.ambient.elements[emb.map[u]];
    let mut found = None;
    for y in 0..a_len {
        let chi: Vec<Elem> = r.iter().map(|&v| usize::from(v == y)).collect();
        let p = emb
            .ambient
            .probe_index(&chi)
            .ok_or_else(|| Error::Construction("a characteristic map is not a probe".into()))?;
        if values[p] == 1 {
            if found.is_some() {
                return Err(Error::Construction(
                    "two fibres lie in one ultrafilter".into(),
                ));
            }
            found = Some(y);
        }
    }
    found.ok_or_else(|| Error::Construction("no fibre lies in the ultrafilter".into()))
}

/// Member and reason for each failure of `[X, A] -> [TX, A]`, `a ↦ ψ_a`, to
/// be a morphism.
pub fn enrichment_structure_check(
    setting: &Setting,
    inst: &MonadInstance,
) -> Result<Vec<(usize, String)>> {
    let cat = &setting.category;
    let mut failures = Vec::new();
    for (k, a) in setting.subcat.objects.iter().enumerate() {
        let hx = internal_hom(cat, inst.base(), a, setting.budget)?;
        let ht = internal_hom(cat, &inst.object, a, setting.budget)?;
        let mut map = Vec::with_capacity(hx.len());
        for r in &hx.maps {
            let psi: Vec<Elem> = match inst.coslice.find(k, r) {
                Some(e) => inst.cone[e].clone(),
                None => (0..inst.len())
                    .map(|u| psi_on_function(inst, r, a.len(), u))
                    .collect::<Result<_>>()?,
            };
            match ht.index_of(&psi) {
                Some(i) => map.push(i),
                None => {
                    failures.push((k, "a cone map is missing from [TX, A]".to_string()));
                    break;
                }
            }
        }
        if map.len() == hx.len() && !is_morphism(cat, &hx.object, &ht.object, &map) {
            failures.push((k, "a ↦ ψ_a does not preserve structure".to_string()));
        }
    }
    Ok(failures)
}
