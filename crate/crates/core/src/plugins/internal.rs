use std::collections::HashMap;

use super::category::Category;
use super::lift::{initial_lift, Leg};
use super::object::{Carrier, Elem, FinObject, Structure, BOTTOM_LABEL};
use super::relation::Relation;
use crate::error::{Error, Result};
use crate::kernel::{enumerate_hom, Budget};

/// The internal hom `[A, B]`: its maps as tables and the object they form.
/// Element `i` of `object` is the map `maps[i]`.
#[derive(Clone, Debug)]
pub struct HomObject {
    pub object: FinObject,
    pub maps: Vec<Vec<Elem>>,
    index: HashMap<Vec<Elem>, Elem>,
}

impl HomObject {
    pub fn new(object: FinObject, maps: Vec<Vec<Elem>>) -> Self {
        let index = maps
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        HomObject {
            object,
            maps,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn index_of(&self, table: &[Elem]) -> Option<Elem> {
        self.index.get(table).copied()
    }

    /// Evaluate map `f` at `x`.
    pub fn eval(&self, f: Elem, x: Elem) -> Elem {
        self.maps[f][x]
    }
}

const MAX_LABELLED: usize = 4096;

fn map_label(target: &FinObject, table: &[Elem]) -> String {
    let parts: Vec<String> = table.iter().map(|&y| target.label(y)).collect();
    format!("[{}]", parts.join(","))
}

fn maps_carrier(target: &FinObject, maps: &[Vec<Elem>]) -> Carrier {
    if maps.len() > MAX_LABELLED {
        return Carrier::indexed(maps.len(), "f");
    }
    Carrier::Named(maps.iter().map(|m| map_label(target, m)).collect())
}

fn all_functions(n: usize, m: usize, budget: Budget) -> Result<Vec<Vec<Elem>>> {
    enumerate_hom(
        &Category::Set,
        &FinObject::set(n),
        &FinObject::set(m),
        budget,
    )
}

/// `[A, B]` with pointwise structure, or the cross-edge rule for relational
/// categories.
pub fn internal_hom(
    cat: &Category,
    a: &FinObject,
    b: &FinObject,
    budget: Budget,
) -> Result<HomObject> {
    match cat {
        Category::Top | Category::Top0 => Err(Error::Unsupported {
            category: cat.name().into(),
            op: "internal hom".into(),
        }),
        Category::Gra | Category::SigmaStr(_) => {
            budget.admit(
                (b.len() as u128).saturating_pow(a.len() as u32),
                "building an internal hom",
            )?;
            let maps = all_functions(a.len(), b.len(), budget)?;
            let arities: Vec<usize> = b.relations().iter().map(|r| r.arity()).collect();
            let mut relations = Vec::new();
            for (k, &arity) in arities.iter().enumerate() {
                relations.push(cross_relation(
                    a.relation(k),
                    b.relation(k),
                    &maps,
                    arity,
                    budget,
                )?);
            }
            let structure = match cat {
                Category::Gra => Structure::Graph {
                    edges: relations.pop().unwrap(),
                },
                _ => Structure::Relational { relations },
            };
            let carrier = maps_carrier(b, &maps);
            Ok(HomObject::new(FinObject::new(carrier, structure), maps))
        }
        _ => {
            let maps = enumerate_hom(cat, a, b, budget)?;
            let evals: Vec<Vec<Elem>> = (0..a.len())
                .map(|x| maps.iter().map(|m| m[x]).collect())
                .collect();
            let legs: Vec<Leg<'_>> = evals.iter().map(|t| Leg::new(b, t)).collect();
            let carrier = maps_carrier(b, &maps);
            let (object, order) = initial_lift(cat, maps.len(), &legs, carrier)?;
            let maps = order.iter().map(|&o| maps[o].clone()).collect();
            Ok(HomObject::new(object, maps))
        }
    }
}

/// `(f_1..f_k)` related iff every related tuple of `A` goes to a related tuple of `B`.
fn cross_relation(
    ra: &Relation,
    rb: &Relation,
    maps: &[Vec<Elem>],
    arity: usize,
    budget: Budget,
) -> Result<Relation> {
    let n = maps.len();
    if rb.is_complete() {
        return Ok(Relation::complete(arity, n));
    }
    let total = (n as u128).saturating_pow(arity as u32);
    budget.admit(total, "building a relation on an internal hom")?;
    let tuples = ra.tuples();
    let mut rel = Relation::empty(arity, n);
    let mut t = vec![0; arity];
    let mut img = vec![0; arity];
    for _ in 0..total {
        let ok = tuples.iter().all(|tup| {
            for p in 0..arity {
                img[p] = maps[t[p]][tup[p]];
            }
            rb.contains(&img)
        });
        if ok {
            rel.insert(&t);
        }
        for p in (0..arity).rev() {
            t[p] += 1;
            if t[p] < n {
                break;
            }
            t[p] = 0;
        }
    }
    Ok(rel)
}

pub fn subset_label(names: &[String], mask: usize) -> String {
    let parts: Vec<&str> = names
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, s)| s.as_str())
        .collect();
    format!("{{{}}}", parts.join(","))
}

/// The dualizing object of the category.
pub fn dualizing_object(cat: &Category) -> FinObject {
    let two = Carrier::numbered(2);
    match cat {
        Category::Set => FinObject::set(2),
        Category::Par => FinObject::new(
            Carrier::Named(vec![BOTTOM_LABEL.into(), "1".into()]),
            Structure::Pointed { base: 0 },
        ),
        Category::Pos => FinObject::chain(2),
        Category::Jsl => FinObject::jsl_chain(2),
        Category::Gra => FinObject::new(
            two,
            Structure::Graph {
                edges: Relation::complete(2, 2),
            },
        ),
        Category::SigmaStr(sig) => FinObject::new(
            two,
            Structure::Relational {
                relations: sig
                    .symbols
                    .iter()
                    .map(|s| Relation::complete(s.arity, 2))
                    .collect(),
            },
        ),
        Category::Vec { q } => FinObject::vector(*q, 1),
        Category::MSet(m) => {
            let k = m.len();
            let n = 1usize << k;
            let mut action = vec![0; k * n];
            for a in 0..k {
                for r in 0..n {
                    action[a * n + r] = (0..k)
                        .filter(|&x| r >> m.mul(a, x) & 1 == 1)
                        .fold(0, |acc, x| acc | 1 << x);
                }
            }
            let labels = (0..n).map(|r| subset_label(m.elements(), r)).collect();
            FinObject::new(Carrier::Named(labels), Structure::MSet { action })
        }
        Category::Top => FinObject::new(
            two,
            Structure::Topology {
                specialization: vec![true; 4],
            },
        ),
        Category::Top0 => FinObject::new(
            two,
            // open sets ∅, {1}, {0, 1}
            Structure::Topology {
                specialization: vec![true, true, false, true],
            },
        ),
    }
}

/// Object representing the underlying-element functor, with its generator.
pub fn unit_object(cat: &Category) -> (FinObject, Elem) {
    match cat {
        Category::Set => (FinObject::set(1), 0),
        Category::Pos => (FinObject::chain(1), 0),
        Category::Par => (FinObject::pointed(1), 1),
        Category::Jsl => (FinObject::jsl_chain(2), 1),
        Category::Gra => (FinObject::graph(1, &[]).unwrap(), 0),
        Category::SigmaStr(sig) => (
            FinObject::relational(
                1,
                sig.symbols
                    .iter()
                    .map(|s| Relation::empty(s.arity, 1))
                    .collect(),
            ),
            0,
        ),
        Category::Vec { q } => (FinObject::vector(*q, 1), 1),
        Category::MSet(m) => {
            let k = m.len();
            let action = (0..k * k).map(|i| m.mul(i / k, i % k)).collect();
            let obj = FinObject::new(
                Carrier::Named(m.elements().to_vec()),
                Structure::MSet { action },
            );
            (obj, m.identity())
        }
        Category::Top | Category::Top0 => (
            FinObject::new(
                Carrier::numbered(1),
                Structure::Topology {
                    specialization: vec![true],
                },
            ),
            0,
        ),
    }
}

/// A pair of distinct parallel maps that no map into `d` separates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unseparated {
    pub source: usize,
    pub target: usize,
    pub f: Vec<Elem>,
    pub g: Vec<Elem>,
}

/// Checks that maps into `d` separate distinct parallel morphisms among `objects`.
pub fn cogenerator_check(
    cat: &Category,
    d: &FinObject,
    objects: &[&FinObject],
    budget: Budget,
) -> Result<Option<Unseparated>> {
    for (i, x) in objects.iter().enumerate() {
        for (j, y) in objects.iter().enumerate() {
            let homs = enumerate_hom(cat, x, y, budget)?;
            let tests = enumerate_hom(cat, y, d, budget)?;
            for (a, f) in homs.iter().enumerate() {
                for g in &homs[a + 1..] {
                    let separated = tests
                        .iter()
                        .any(|t| f.iter().zip(g).any(|(&u, &v)| t[u] != t[v]));
                    if !separated {
                        return Ok(Some(Unseparated {
                            source: i,
                            target: j,
                            f: f.clone(),
                            g: g.clone(),
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plugins::Monoid;

    #[test]
    fn duals_have_expected_sizes() {
        let b = Budget::default();
        let d = dualizing_object(&Category::Set);
        assert_eq!(
            internal_hom(&Category::Set, &FinObject::set(3), &d, b)
                .unwrap()
                .len(),
            8
        );
        // up-sets of a 2-antichain
        let d = dualizing_object(&Category::Pos);
        assert_eq!(
            internal_hom(&Category::Pos, &FinObject::antichain(2), &d, b)
                .unwrap()
                .len(),
            4
        );
        // prime up-sets of the 3-chain: {1,2}, {2}, and the zero map
        let d = dualizing_object(&Category::Jsl);
        assert_eq!(
            internal_hom(&Category::Jsl, &FinObject::jsl_chain(3), &d, b)
                .unwrap()
                .len(),
            3
        );
        let d = dualizing_object(&Category::Vec { q: 3 });
        let h = internal_hom(&Category::Vec { q: 3 }, &FinObject::vector(3, 2), &d, b).unwrap();
        assert_eq!(h.object.vector_dim(), Some(2));
    }

    #[test]
    fn mset_dual_is_powerset() {
        let z2 = Monoid::cyclic(2);
        let cat = Category::MSet(z2.clone());
        let x = FinObject::mset(&z2, 3, vec![0, 1, 2, 1, 0, 2]).unwrap();
        let h = internal_hom(&cat, &x, &dualizing_object(&cat), Budget::default()).unwrap();
        assert_eq!(h.len(), 8);
    }

    #[test]
    fn graph_hom_object_loops_are_homomorphisms() {
        let cat = Category::Gra;
        let a = FinObject::graph(2, &[(0, 1)]).unwrap();
        let h = internal_hom(&cat, &a, &a, Budget::default()).unwrap();
        let loops: Vec<Vec<Elem>> = (0..h.len())
            .filter(|&i| h.object.relation(0).contains(&[i, i]))
            .map(|i| h.maps[i].clone())
            .collect();
        let homs = enumerate_hom(&cat, &a, &a, Budget::default()).unwrap();
        assert_eq!(loops, homs);
    }
}
