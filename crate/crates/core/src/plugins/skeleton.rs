use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex};

use itertools::Itertools;

use super::category::Category;
use super::lift::{initial_lift, Leg};
use super::object::{validate, Carrier, Elem, FinObject, Structure};
use super::relation::Relation;
use crate::error::{Error, Result};
use crate::kernel::Budget;

pub const MAX_CANONICAL_SIZE: usize = 8;

/// Isomorphism-invariant code of an object.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsoKey(Vec<u64>);

fn bits_to_words(bits: &[bool]) -> Vec<u64> {
    bits.chunks(64)
        .map(|c| {
            c.iter()
                .enumerate()
                .fold(0u64, |acc, (i, &b)| acc | (b as u64) << i)
        })
        .collect()
}

/// Encoding of `obj` relabelled by `perm` (old index -> new index).
fn encode(obj: &FinObject, perm: &[usize], inv: &[usize], tuples: &[Vec<Vec<Elem>>]) -> Vec<u64> {
    let n = obj.len();
    let mut key = vec![n as u64];
    match &obj.structure {
        Structure::Set => {}
        Structure::Vector { dim } => key.push(*dim as u64),
        Structure::Pointed { base } => key.push(perm[*base] as u64),
        Structure::Poset { .. } | Structure::Semilattice { .. } | Structure::Topology { .. } => {
            let bits: Vec<bool> = (0..n * n).map(|k| obj.le(inv[k / n], inv[k % n])).collect();
            key.extend(bits_to_words(&bits));
        }
        Structure::Graph { .. } | Structure::Relational { .. } => {
            for (k, ts) in tuples.iter().enumerate() {
                let r = obj.relation(k);
                key.push(r.arity() as u64);
                let total = n.pow(r.arity() as u32);
                let mut bits = vec![false; total];
                for t in ts {
                    let code = t.iter().rev().fold(0, |acc, &x| acc * n + perm[x]);
                    bits[code] = true;
                }
                key.extend(bits_to_words(&bits));
            }
        }
        Structure::MSet { action } => {
            let m = action.len().checked_div(n).unwrap_or(0);
            for a in 0..m {
                for x in 0..n {
                    key.push(perm[action[a * n + inv[x]]] as u64);
                }
            }
        }
    }
    key
}

fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// Minimal encoding over all relabellings, with a permutation achieving it.
pub fn canonical_form(obj: &FinObject) -> Result<(IsoKey, Vec<usize>)> {
    let n = obj.len();
    let identity: Vec<usize> = (0..n).collect();
    if let Structure::Vector { .. } | Structure::Set = obj.structure {
        return Ok((IsoKey(encode(obj, &identity, &identity, &[])), identity));
    }
    if n > MAX_CANONICAL_SIZE {
        return Err(Error::Unsupported {
            category: "any".into(),
            op: format!("canonical forms of objects with more than {MAX_CANONICAL_SIZE} elements"),
        });
    }
    let tuples: Vec<Vec<Vec<Elem>>> = obj.relations().iter().map(|r| r.tuples()).collect();
    let mut best: Option<(Vec<u64>, Vec<usize>)> = None;
    for perm in (0..n).permutations(n) {
        if let Structure::Pointed { base } = obj.structure {
            if perm[base] != 0 {
                continue;
            }
        }
        let inv = invert(&perm);
        let key = encode(obj, &perm, &inv, &tuples);
        if best.as_ref().is_none_or(|(b, _)| key < *b) {
            best = Some((key, perm));
        }
    }
    let (key, perm) = best.unwrap_or((encode(obj, &identity, &identity, &tuples), identity));
    Ok((IsoKey(key), perm))
}

/// The object with element `i` renamed to `perm[i]`; labels are renumbered.
pub fn relabel(obj: &FinObject, perm: &[usize]) -> FinObject {
    let n = obj.len();
    let inv = invert(perm);
    let structure = match &obj.structure {
        Structure::Set => Structure::Set,
        Structure::Vector { dim } => Structure::Vector { dim: *dim },
        Structure::Pointed { base } => Structure::Pointed { base: perm[*base] },
        Structure::Poset { .. } => Structure::Poset {
            le: (0..n * n).map(|k| obj.le(inv[k / n], inv[k % n])).collect(),
        },
        Structure::Semilattice { join, bottom } => Structure::Semilattice {
            join: (0..n * n)
                .map(|k| perm[join[inv[k / n] * n + inv[k % n]]])
                .collect(),
            bottom: perm[*bottom],
        },
        Structure::Graph { edges } => Structure::Graph {
            edges: edges.map(n, |x| perm[x]),
        },
        Structure::Relational { relations } => Structure::Relational {
            relations: relations.iter().map(|r| r.map(n, |x| perm[x])).collect(),
        },
        Structure::MSet { action } => {
            let m = action.len().checked_div(n).unwrap_or(0);
            Structure::MSet {
                action: (0..m * n)
                    .map(|k| perm[action[(k / n) * n + inv[k % n]]])
                    .collect(),
            }
        }
        Structure::Topology { .. } => Structure::Topology {
            specialization: (0..n * n).map(|k| obj.le(inv[k / n], inv[k % n])).collect(),
        },
    };
    let carrier = match &obj.structure {
        Structure::Vector { .. } => obj.carrier.clone(),
        Structure::Pointed { .. } => {
            let mut labels = vec![String::new(); n];
            let mut next = 0;
            for new in 0..n {
                let old = inv[new];
                labels[new] = if Some(old) == obj.base_point() {
                    super::object::BOTTOM_LABEL.to_string()
                } else {
                    next += 1;
                    (next - 1).to_string()
                };
            }
            Carrier::Named(labels)
        }
        _ => Carrier::numbered(n),
    };
    FinObject::new(carrier, structure)
}

fn subsets_of_pairs(n: usize, strict: bool) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| if strict { i < j } else { i <= j })
        .collect()
}

fn labelled_structures(cat: &Category, n: usize, budget: Budget) -> Result<Vec<FinObject>> {
    let mut out = Vec::new();
    match cat {
        Category::Set => out.push(FinObject::set(n)),
        Category::Par => out.push(FinObject::pointed(n)),
        Category::Vec { q } => out.push(FinObject::vector(*q, n)),
        Category::Pos | Category::Jsl | Category::Top0 => {
            let pairs = subsets_of_pairs(n, true);
            budget.admit(1u128 << pairs.len(), "enumerating orders")?;
            for mask in 0u64..1 << pairs.len() {
                let mut le = vec![false; n * n];
                for i in 0..n {
                    le[i * n + i] = true;
                }
                for (k, &(i, j)) in pairs.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        le[i * n + j] = true;
                    }
                }
                let transitive = (0..n).all(|i| {
                    (0..n)
                        .all(|j| !le[i * n + j] || (0..n).all(|k| !le[j * n + k] || le[i * n + k]))
                });
                if !transitive {
                    continue;
                }
                let poset =
                    FinObject::new(Carrier::numbered(n), Structure::Poset { le: le.clone() });
                match cat {
                    Category::Pos => out.push(poset),
                    Category::Jsl => out.extend(poset_as_semilattice(&poset)),
                    _ => out.push(FinObject::new(
                        Carrier::numbered(n),
                        Structure::Topology { specialization: le },
                    )),
                }
            }
        }
        Category::Top => {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|(i, j)| i != j)
                .collect();
            budget.admit(1u128 << pairs.len(), "enumerating preorders")?;
            for mask in 0u64..1 << pairs.len() {
                let mut le = vec![false; n * n];
                for i in 0..n {
                    le[i * n + i] = true;
                }
                for (k, &(i, j)) in pairs.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        le[i * n + j] = true;
                    }
                }
                let transitive = (0..n).all(|i| {
                    (0..n)
                        .all(|j| !le[i * n + j] || (0..n).all(|k| !le[j * n + k] || le[i * n + k]))
                });
                if transitive {
                    out.push(FinObject::new(
                        Carrier::numbered(n),
                        Structure::Topology { specialization: le },
                    ));
                }
            }
        }
        Category::Gra => {
            let pairs = subsets_of_pairs(n, false);
            budget.admit(1u128 << pairs.len(), "enumerating graphs")?;
            for mask in 0u64..1 << pairs.len() {
                let edges: Vec<(usize, usize)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &p)| p)
                    .collect();
                out.push(FinObject::graph(n, &edges)?);
            }
        }
        Category::SigmaStr(sig) => {
            let sizes: Vec<u32> = sig
                .symbols
                .iter()
                .map(|s| {
                    n.checked_pow(s.arity as u32)
                        .filter(|t| *t < 64)
                        .map(|t| t as u32)
                })
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::BudgetExceeded {
                    what: "enumerating relational structures".into(),
                    limit: budget.0,
                })?;
            let total: u32 = sizes.iter().sum();
            if total >= 64 {
                return Err(Error::BudgetExceeded {
                    what: "enumerating relational structures".into(),
                    limit: budget.0,
                });
            }
            budget.admit(1u128 << total, "enumerating relational structures")?;
            for mask in 0u64..1 << total {
                let mut off = 0;
                let mut relations = Vec::new();
                for (s, &size) in sig.symbols.iter().zip(&sizes) {
                    let mut r = Relation::empty(s.arity, n);
                    for code in 0..size {
                        if mask >> (off + code) & 1 == 1 {
                            let mut t = Vec::with_capacity(s.arity);
                            let mut c = code as usize;
                            for _ in 0..s.arity {
                                t.push(c % n);
                                c /= n;
                            }
                            r.insert(&t);
                        }
                    }
                    off += size;
                    relations.push(r);
                }
                out.push(FinObject::relational(n, relations));
            }
        }
        Category::MSet(m) => {
            let movers: Vec<usize> = (0..m.len()).filter(|&a| a != m.identity()).collect();
            let per = (n as u128).saturating_pow(n as u32);
            let total = per.saturating_pow(movers.len() as u32);
            budget.admit(total, "enumerating monoid actions")?;
            for code in 0..total as usize {
                let mut action = vec![0; m.len() * n];
                for x in 0..n {
                    action[m.identity() * n + x] = x;
                }
                let mut c = code;
                for &a in &movers {
                    for x in 0..n {
                        action[a * n + x] = c % n.max(1);
                        c /= n.max(1);
                    }
                }
                let obj = FinObject::new(Carrier::numbered(n), Structure::MSet { action });
                if validate(cat, &obj).is_ok() {
                    out.push(obj);
                }
            }
        }
    }
    Ok(out)
}

fn poset_as_semilattice(p: &FinObject) -> Option<FinObject> {
    let n = p.len();
    let bottom = (0..n).find(|&b| (0..n).all(|x| p.le(b, x)))?;
    let mut join = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            let ubs: Vec<usize> = (0..n).filter(|&z| p.le(x, z) && p.le(y, z)).collect();
            join[x * n + y] = *ubs.iter().find(|&&z| ubs.iter().all(|&w| p.le(z, w)))?;
        }
    }
    Some(FinObject::new(
        p.carrier.clone(),
        Structure::Semilattice { join, bottom },
    ))
}

/// Representatives of every isomorphism class of size at most `bound`
/// (dimension for vector spaces, ordinary elements for pointed sets), ordered by
/// size and then by canonical code.
pub fn fp_objects_up_to(cat: &Category, bound: usize, budget: Budget) -> Result<Vec<FinObject>> {
    let mut out = Vec::new();
    for n in 0..=bound {
        if matches!(cat, Category::Jsl) && n == 0 {
            continue;
        }
        let mut classes: BTreeMap<IsoKey, FinObject> = BTreeMap::new();
        let mut meter = budget.meter("canonicalising structures");
        for obj in labelled_structures(cat, n, budget)? {
            meter.add(obj.len().max(1) as u64)?;
            let (key, perm) = canonical_form(&obj)?;
            classes.entry(key).or_insert_with(|| relabel(&obj, &perm));
        }
        out.extend(classes.into_values());
    }
    Ok(out)
}

/// Subsets of the carrier that carry a subobject (closed under the operations).
pub fn substructures(cat: &Category, obj: &FinObject) -> Result<Vec<Vec<Elem>>> {
    let n = obj.len();
    if n > 20 {
        return Err(Error::Unsupported {
            category: cat.name().into(),
            op: "listing substructures of large objects".into(),
        });
    }
    let mut out = Vec::new();
    for mask in 0usize..1 << n {
        let members: Vec<Elem> = (0..n).filter(|x| mask >> x & 1 == 1).collect();
        let inside = |x: Elem| mask >> x & 1 == 1;
        let closed = match &obj.structure {
            Structure::Pointed { base } => inside(*base),
            Structure::Semilattice { .. } => {
                inside(obj.base_point().unwrap())
                    && members
                        .iter()
                        .all(|&x| members.iter().all(|&y| inside(obj.join(x, y).unwrap())))
            }
            Structure::MSet { action } => {
                let m = action.len() / n.max(1);
                members
                    .iter()
                    .all(|&x| (0..m).all(|a| inside(obj.act(a, x).unwrap())))
            }
            Structure::Vector { dim } => {
                let q = cat.field_order().unwrap();
                inside(0)
                    && members.iter().all(|&x| {
                        members
                            .iter()
                            .all(|&y| inside(super::object::vec_add(q, *dim, x, y)))
                            && (0..q).all(|s| inside(super::object::vec_scale(q, *dim, s, x)))
                    })
            }
            _ => true,
        };
        if closed {
            out.push(members);
        }
    }
    Ok(out)
}

/// A full subcategory given by finitely many objects.
#[derive(Clone, Debug)]
pub struct Subcategory {
    pub category: Category,
    pub objects: Vec<Arc<FinObject>>,
    /// Every subobject of a member is isomorphic to a member.
    pub image_closed: bool,
    pub bound: Option<usize>,
    keys: HashMap<IsoKey, (usize, Vec<usize>)>,
    images: Arc<Mutex<HashMap<(usize, Vec<Elem>), Arc<ImageFactor>>>>,
}

/// A subset of a member, identified with another member: `inclusion` maps
/// `member` into the original object and `back` sends each element of the
/// subset to its counterpart in `member`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageFactor {
    pub member: usize,
    pub inclusion: Vec<Elem>,
    pub back: HashMap<Elem, Elem>,
}

impl Subcategory {
    /// All isomorphism classes up to `bound`.
    pub fn skeleton(cat: &Category, bound: usize, budget: Budget) -> Result<Self> {
        let objects = fp_objects_up_to(cat, bound, budget)?;
        let mut sub = Self::build(cat, objects)?;
        sub.image_closed = true;
        sub.bound = Some(bound);
        Ok(sub)
    }

    /// The full subcategory on `objects`.
    pub fn from_objects(cat: &Category, objects: Vec<FinObject>) -> Result<Self> {
        for o in &objects {
            validate(cat, o)?;
        }
        let mut sub = Self::build(cat, objects)?;
        sub.image_closed = sub.check_image_closed()?;
        Ok(sub)
    }

    fn build(cat: &Category, objects: Vec<FinObject>) -> Result<Self> {
        let mut keys = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if o.len() <= MAX_CANONICAL_SIZE
                || matches!(o.structure, Structure::Vector { .. } | Structure::Set)
            {
                let (key, perm) = canonical_form(o)?;
                keys.entry(key).or_insert((i, invert(&perm)));
            }
        }
        Ok(Subcategory {
            category: cat.clone(),
            objects: objects.into_iter().map(Arc::new).collect(),
            image_closed: false,
            bound: None,
            keys,
            images: Arc::default(),
        })
    }

    fn check_image_closed(&self) -> Result<bool> {
        // subobjects of sets and vector spaces are determined by their size
        if let Category::Set | Category::Vec { .. } = self.category {
            let sizes: HashSet<usize> = self.objects.iter().map(|o| o.size_measure()).collect();
            return Ok(sizes.iter().all(|&s| (0..s).all(|t| sizes.contains(&t))));
        }
        for o in &self.objects {
            for members in substructures(&self.category, o)? {
                let carrier = Carrier::numbered(members.len());
                let (sub, _) = initial_lift(
                    &self.category,
                    members.len(),
                    &[Leg::new(o, &members)],
                    carrier,
                )?;
                if self.find_iso(&sub)?.is_none() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// The member isomorphic to the substructure of member `k` on `subset`
    /// (sorted), cached.
    pub fn image_factor(&self, k: usize, subset: &[Elem]) -> Result<Arc<ImageFactor>> {
        let key = (k, subset.to_vec());
        if let Some(f) = self.images.lock().unwrap().get(&key) {
            return Ok(f.clone());
        }
        let obj = &self.objects[k];
        let carrier = Carrier::numbered(subset.len());
        let (sub, order) = initial_lift(
            &self.category,
            subset.len(),
            &[Leg::new(obj, subset)],
            carrier,
        )?;
        let (member, iso) = self.find_iso(&sub)?.ok_or_else(|| {
            Error::Construction(format!(
                "a substructure of member {k} has no isomorphic member"
            ))
        })?;
        let mut inclusion = vec![0; sub.len()];
        let mut back = HashMap::new();
        for (s, &o) in order.iter().enumerate() {
            inclusion[iso[s]] = subset[o];
            back.insert(subset[o], iso[s]);
        }
        let f = Arc::new(ImageFactor {
            member,
            inclusion,
            back,
        });
        self.images.lock().unwrap().insert(key, f.clone());
        Ok(f)
    }

    /// A member isomorphic to `obj` and an isomorphism `obj -> member`.
    pub fn find_iso(&self, obj: &FinObject) -> Result<Option<(usize, Vec<Elem>)>> {
        let (key, perm) = canonical_form(obj)?;
        Ok(self
            .keys
            .get(&key)
            .map(|(i, inv)| (*i, perm.iter().map(|&p| inv[p]).collect())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plugins::{is_morphism, Monoid};

    fn count(cat: Category, n: usize) -> usize {
        fp_objects_up_to(&cat, n, Budget::default()).unwrap().len()
    }

    #[test]
    fn skeleton_sizes() {
        assert_eq!(count(Category::Set, 2), 3);
        assert_eq!(count(Category::Jsl, 2), 2);
        // posets on 0..=4 points: 1 + 1 + 2 + 5 + 16
        assert_eq!(count(Category::Pos, 4), 25);
        // lattices on 1..=5 points: 1 + 1 + 1 + 2 + 5
        assert_eq!(count(Category::Jsl, 5), 10);
        // graphs with loops on 0..=4 vertices: 1 + 2 + 6 + 20 + 90
        assert_eq!(count(Category::Gra, 4), 119);
        // topologies on 0..=4 points: 1 + 1 + 3 + 9 + 33
        assert_eq!(count(Category::Top, 4), 47);
        // T0 topologies = posets
        assert_eq!(count(Category::Top0, 4), 25);
        // involutions on 0..=4 points: 1 + 1 + 2 + 2 + 3
        assert_eq!(count(Category::MSet(Monoid::cyclic(2)), 4), 9);
        // binary relations on 0..=3 points: 1 + 2 + 10 + 104
        assert_eq!(
            count(Category::SigmaStr(crate::plugins::Signature::binary()), 3),
            117
        );
    }

    #[test]
    fn find_iso_returns_an_isomorphism() {
        let cat = Category::Pos;
        let sub = Subcategory::skeleton(&cat, 3, Budget::default()).unwrap();
        let v = FinObject::poset(3, &[(2, 0), (2, 1)]).unwrap();
        let (k, iso) = sub.find_iso(&v).unwrap().unwrap();
        let target = &sub.objects[k];
        assert!(is_morphism(&cat, &v, target, &iso));
        let inv = invert(&iso);
        assert!(is_morphism(&cat, target, &v, &inv));
    }

    #[test]
    fn image_closure_detected() {
        let cat = Category::Vec { q: 2 };
        let only_line = Subcategory::from_objects(&cat, vec![FinObject::vector(2, 1)]).unwrap();
        assert!(!only_line.image_closed);
        let with_zero =
            Subcategory::from_objects(&cat, vec![FinObject::vector(2, 0), FinObject::vector(2, 1)])
                .unwrap();
        assert!(with_zero.image_closed);
    }
}
