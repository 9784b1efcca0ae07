use std::collections::HashMap;
use std::ops::Range;
use std::sync::Arc;

use crate::error::Result;
use crate::kernel::{enumerate_hom, Budget};
use crate::plugins::{Elem, FinObject, Subcategory};

/// A morphism from the base object into a member of the subcategory.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosliceEntry {
    pub object: usize,
    pub map: Vec<Elem>,
}

/// All morphisms `X -> A` into members `A`, grouped by member and ordered
/// lexicographically within each group.
#[derive(Clone, Debug)]
pub struct Coslice {
    pub base: Arc<FinObject>,
    pub subcat: Arc<Subcategory>,
    pub entries: Vec<CosliceEntry>,
    ranges: Vec<Range<usize>>,
    index: Vec<HashMap<Vec<Elem>, usize>>,
}

impl Coslice {
    pub fn build(subcat: Arc<Subcategory>, base: Arc<FinObject>, budget: Budget) -> Result<Self> {
        let cat = &subcat.category;
        let mut entries = Vec::new();
        let mut ranges = Vec::with_capacity(subcat.len());
        let mut index = Vec::with_capacity(subcat.len());
        let mut meter = budget.meter("enumerating the coslice");
        for (k, a) in subcat.objects.iter().enumerate() {
            let maps = enumerate_hom(cat, &base, a, budget)?;
            meter.add(maps.len() as u64)?;
            let start = entries.len();
            let mut idx = HashMap::with_capacity(maps.len());
            for (i, m) in maps.into_iter().enumerate() {
                idx.insert(m.clone(), start + i);
                entries.push(CosliceEntry { object: k, map: m });
            }
            ranges.push(start..entries.len());
            index.push(idx);
        }
        Ok(Coslice {
            base,
            subcat,
            entries,
            ranges,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn find(&self, object: usize, map: &[Elem]) -> Option<usize> {
        self.index[object].get(map).copied()
    }

    pub fn entries_into(&self, object: usize) -> Range<usize> {
        self.ranges[object].clone()
    }

    pub fn target(&self, e: usize) -> &Arc<FinObject> {
        &self.subcat.objects[self.entries[e].object]
    }

    /// Entries whose map is onto its target.
    pub fn is_surjective(&self, e: usize) -> bool {
        let n = self.target(e).len();
        let mut hit = vec![false; n];
        for &y in &self.entries[e].map {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }
}

/// Hom-sets between members, indexed `[source][target]`.
#[derive(Clone, Debug)]
pub struct MemberHoms(pub Vec<Vec<Arc<Vec<Arc<Vec<Elem>>>>>>);

impl MemberHoms {
    pub fn build(subcat: &Subcategory, budget: Budget) -> Result<Self> {
        let mut meter = budget.meter("enumerating morphisms between members");
        let mut rows = Vec::with_capacity(subcat.len());
        for a in &subcat.objects {
            let mut row = Vec::with_capacity(subcat.len());
            for b in &subcat.objects {
                let maps = enumerate_hom(&subcat.category, a, b, budget)?;
                meter.add(maps.len() as u64)?;
                row.push(Arc::new(maps.into_iter().map(Arc::new).collect()));
            }
            rows.push(row);
        }
        Ok(MemberHoms(rows))
    }

    pub fn get(&self, from: usize, to: usize) -> &[Arc<Vec<Elem>>] {
        &self.0[from][to]
    }
}

/// A connecting morphism `h` with `h ∘ a_from = a_to`.
#[derive(Clone, Debug)]
pub struct Connecting {
    pub from: usize,
    pub to: usize,
    pub map: Arc<Vec<Elem>>,
}

/// Every connecting morphism of the coslice.
pub fn connecting_morphisms(
    coslice: &Coslice,
    homs: &MemberHoms,
    budget: Budget,
) -> Result<Vec<Connecting>> {
    let mut meter = budget.meter("enumerating connecting morphisms");
    let mut out = Vec::new();
    let mut buf = Vec::new();
    for (e, entry) in coslice.entries.iter().enumerate() {
        for j in 0..coslice.subcat.len() {
            for h in homs.get(entry.object, j) {
                meter.tick()?;
                buf.clear();
                buf.extend(entry.map.iter().map(|&x| h[x]));
                let to = coslice
                    .find(j, &buf)
                    .expect("composite of morphisms is a morphism");
                out.push(Connecting {
                    from: e,
                    to,
                    map: h.clone(),
                });
            }
        }
    }
    Ok(out)
}
