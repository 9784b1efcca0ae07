use std::collections::HashMap;
use std::sync::Arc;

use super::budget::Budget;
use super::hom::enumerate_hom;
use crate::error::{Error, Result};
use crate::plugins::{initial_lift, unit_object, Carrier, Category, Elem, FinObject, Leg};

/// A monomorphism into `ambient`, recorded by the ambient elements it hits.
/// Element `i` of `object` is ambient element `members[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subobject {
    pub ambient: Arc<FinObject>,
    pub members: Vec<Elem>,
    pub object: FinObject,
}

impl Subobject {
    /// Subobject carried by `members` with the structure induced from the ambient.
    pub fn induced(cat: &Category, ambient: Arc<FinObject>, members: Vec<Elem>) -> Result<Self> {
        let carrier = Carrier::Named(members.iter().map(|&m| ambient.label(m)).collect());
        let (object, order) =
            initial_lift(cat, members.len(), &[Leg::new(&ambient, &members)], carrier)?;
        let members = order.iter().map(|&o| members[o]).collect();
        Ok(Subobject {
            ambient,
            members,
            object,
        })
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.members.contains(&x)
    }

    pub fn inclusion(&self) -> &[Elem] {
        &self.members
    }
}

/// Wide pullback of subobjects of a common ambient object.
pub fn intersect_subobjects(cat: &Category, subs: &[Subobject]) -> Result<Subobject> {
    let first = subs
        .first()
        .ok_or_else(|| Error::Input("cannot intersect an empty family of subobjects".into()))?;
    if subs.iter().any(|s| s.ambient != first.ambient) {
        return Err(Error::Input(
            "subobjects live in different ambient objects".into(),
        ));
    }
    let positions: Vec<HashMap<Elem, usize>> = subs
        .iter()
        .map(|s| s.members.iter().enumerate().map(|(i, &m)| (m, i)).collect())
        .collect();
    let mut members: Vec<Elem> = first.members.clone();
    members.sort();
    members.retain(|m| positions.iter().all(|p| p.contains_key(m)));
    let tables: Vec<Vec<Elem>> = positions
        .iter()
        .map(|p| members.iter().map(|m| p[m]).collect())
        .collect();
    let mut legs = vec![Leg::new(&first.ambient, &members)];
    legs.extend(
        subs.iter()
            .zip(&tables)
            .map(|(s, t)| Leg::new(&s.object, t)),
    );
    let carrier = Carrier::Named(members.iter().map(|&m| first.ambient.label(m)).collect());
    let (object, order) = initial_lift(cat, members.len(), &legs, carrier)?;
    let members = order.iter().map(|&o| members[o]).collect();
    Ok(Subobject {
        ambient: first.ambient.clone(),
        members,
        object,
    })
}

/// Morphisms from the unit object, each paired with the element it picks.
pub fn global_elements(
    cat: &Category,
    obj: &FinObject,
    budget: Budget,
) -> Result<Vec<(Vec<Elem>, Elem)>> {
    let (unit, generator) = unit_object(cat);
    let maps = enumerate_hom(cat, &unit, obj, budget)?;
    Ok(maps
        .into_iter()
        .map(|m| {
            let x = m[generator];
            (m, x)
        })
        .collect())
}
