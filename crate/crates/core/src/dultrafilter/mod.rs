//! Derived subobjects, the intersection monad inside the double dual, and
//! enumeration of D-ultrafilters.

mod ambient;

use std::sync::Arc;

pub use ambient::{Ambient, AmbientKind, TargetProbes};

use crate::codensity::{Construction, Embedding, MonadInstance, Setting};
use crate::error::{Error, Result};
use crate::kernel::{global_elements, Subobject};
use crate::plugins::{initial_lift, Carrier, Elem, FinObject, Leg};

/// Elements `u` of the ambient whose image under `a` is a point of `A`,
/// each paired with that point.
#[derive(Clone, Debug)]
pub struct DerivedSubobject {
    pub target: usize,
    pub witness: Vec<Elem>,
    pub members: Vec<Elem>,
    /// `p(a)`: element `i` goes to `projection[i]` in the target.
    pub projection: Vec<Elem>,
    pub object: FinObject,
}

impl DerivedSubobject {
    pub fn as_subobject(&self, ambient: &Ambient) -> Subobject {
        Subobject {
            ambient: ambient.object.clone(),
            members: self.members.clone(),
            object: self.object.clone(),
        }
    }
}

/// The preimage of the points of member `target` under `a`.
pub fn derived_subobject(
    setting: &Setting,
    ambient: &Ambient,
    target: usize,
    a: &[Elem],
) -> Result<DerivedSubobject> {
    let targets = setting.target_probes()?;
    let probes = &targets[target];
    let pull = ambient.pull(probes, a)?;
    let mut buf = Vec::new();
    let mut members = Vec::new();
    let mut projection = Vec::new();
    for u in 0..ambient.len() {
        ambient.push(u, &pull, &mut buf);
        if let Some(t) = probes.point(&buf) {
            members.push(u);
            projection.push(t);
        }
    }
    let a_obj = &setting.subcat.objects[target];
    let legs = [
        Leg::new(&ambient.object, &members),
        Leg::new(a_obj, &projection),
    ];
    let carrier = Carrier::Named(members.iter().map(|&m| ambient.object.label(m)).collect());
    let (object, order) = initial_lift(&setting.category, members.len(), &legs, carrier)?;
    let members = order.iter().map(|&o| members[o]).collect();
    let projection = order.iter().map(|&o| projection[o]).collect();
    Ok(DerivedSubobject {
        target,
        witness: a.to_vec(),
        members,
        projection,
        object,
    })
}

/// `TX` inside the given ambient: the elements lying in every derived
/// subobject, with `ψ_a(u)` the point hit by `a(u)`.
pub(crate) fn instance_in_ambient(
    construction: Construction,
    setting: &Setting,
    ambient: Arc<Ambient>,
    x: &FinObject,
) -> Result<MonadInstance> {
    let coslice = setting.coslice(x)?;
    let targets = setting.target_probes()?;
    let mut meter = setting.budget.meter("intersecting derived subobjects");
    let mut survivors: Vec<Elem> = (0..ambient.len()).collect();
    let mut buf = Vec::new();
    let mut pulls = Vec::with_capacity(coslice.len());
    for entry in &coslice.entries {
        let probes = &targets[entry.object];
        let pull = ambient.pull(probes, &entry.map)?;
        meter.add(survivors.len() as u64 + 1)?;
        survivors.retain(|&u| {
            ambient.push(u, &pull, &mut buf);
            probes.point(&buf).is_some()
        });
        pulls.push(pull);
    }
    let cone: Vec<Vec<Elem>> = coslice
        .entries
        .iter()
        .zip(&pulls)
        .map(|(entry, pull)| {
            survivors
                .iter()
                .map(|&u| {
                    ambient.push(u, pull, &mut buf);
                    targets[entry.object]
                        .point(&buf)
                        .expect("survivor lies in every derived subobject")
                })
                .collect()
        })
        .collect();
    let (object, order) = {
        let mut legs = vec![Leg::new(&ambient.object, &survivors)];
        legs.extend(
            coslice.entries.iter().zip(&cone).map(|(entry, leg)| {
                Leg::new(&setting.subcat.objects[entry.object], leg.as_slice())
            }),
        );
        let carrier = Carrier::Named(survivors.iter().map(|&m| ambient.object.label(m)).collect());
        initial_lift(&setting.category, survivors.len(), &legs, carrier)?
    };
    let members = order.iter().map(|&o| survivors[o]).collect();
    let cone = cone
        .iter()
        .map(|leg| order.iter().map(|&o| leg[o]).collect())
        .collect();
    finish(construction, coslice, object, cone, ambient, members)
}

fn finish(
    construction: Construction,
    coslice: Arc<crate::codensity::Coslice>,
    object: FinObject,
    cone: Vec<Vec<Elem>>,
    ambient: Arc<Ambient>,
    members: Vec<Elem>,
) -> Result<MonadInstance> {
    let inst = MonadInstance::assemble(
        construction,
        coslice,
        object,
        cone,
        Some(Embedding {
            ambient,
            map: members,
        }),
    )?;
    let emb = inst.embedding.as_ref().unwrap();
    let eta = emb.ambient.eta(inst.base().len())?;
    if inst.unit.iter().zip(&eta).any(|(&u, &e)| emb.map[u] != e) {
        return Err(Error::Construction(
            "the unit of TX does not restrict the ambient unit".into(),
        ));
    }
    Ok(inst)
}

/// `TX` as the intersection of all derived subobjects of `X**`.
pub fn monad_by_intersection(setting: &Setting, x: &FinObject) -> Result<MonadInstance> {
    let ambient = Arc::new(Ambient::build(
        &setting.category,
        AmbientKind::DoubleDual,
        x,
        setting.budget,
    )?);
    instance_in_ambient(Construction::DoubleDual, setting, ambient, x)
}

/// A global element of `TX` with its table on `Hom(X, D)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DUltrafilter {
    pub element: Elem,
    pub label: String,
    pub global_element: Vec<Elem>,
    pub values: Vec<Elem>,
}

/// Global elements of `TX` for the intersection construction.
pub fn list_d_ultrafilters(
    setting: &Setting,
    x: &FinObject,
) -> Result<(MonadInstance, Vec<DUltrafilter>)> {
    let inst = monad_by_intersection(setting, x)?;
    let emb = inst.embedding.as_ref().unwrap();
    let list = global_elements(&setting.category, &inst.object, setting.budget)?
        .into_iter()
        .map(|(global_element, element)| DUltrafilter {
            element,
            label: inst.object.label(element),
            global_element,
            values: emb.ambient.elements[emb.map[element]].clone(),
        })
        .collect();
    Ok((inst, list))
}
