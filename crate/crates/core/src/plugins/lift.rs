use std::collections::HashMap;

use super::category::Category;
use super::morphism::is_morphism;
use super::object::{coords, Carrier, Elem, FinObject, Structure};
use super::relation::Relation;
use crate::error::{Error, Result};

/// A map from the set being structured into an object.
#[derive(Clone, Copy)]
pub struct Leg<'a> {
    pub target: &'a FinObject,
    pub table: &'a [Elem],
}

impl<'a> Leg<'a> {
    pub fn new(target: &'a FinObject, table: &'a [Elem]) -> Self {
        Leg { target, table }
    }
}

/// The coarsest structure on `0..n` making every leg a morphism; the legs must
/// be jointly injective. Returns the object and `order`, where new element `i`
/// is old element `order[i]` (only vector spaces are reordered).
pub fn initial_lift(
    cat: &Category,
    n: usize,
    legs: &[Leg<'_>],
    carrier: Carrier,
) -> Result<(FinObject, Vec<Elem>)> {
    if carrier.len() != n {
        return Err(Error::Construction("carrier size mismatch in lift".into()));
    }
    for leg in legs {
        if leg.table.len() != n {
            return Err(Error::Construction(
                "leg table size mismatch in lift".into(),
            ));
        }
    }
    let keys = Keys::new(n, legs)?;
    let identity: Vec<Elem> = (0..n).collect();
    let structure = match cat {
        Category::Set => Structure::Set,
        Category::Par => {
            let want: Vec<Elem> = legs
                .iter()
                .map(|l| l.target.base_point().unwrap())
                .collect();
            let base = keys.find(&want, legs).ok_or_else(|| {
                Error::Construction("lifted pointed set has no base point".into())
            })?;
            Structure::Pointed { base }
        }
        Category::Pos => {
            let mut le = vec![false; n * n];
            for s in 0..n {
                for t in 0..n {
                    le[s * n + t] = legs.iter().all(|l| l.target.le(l.table[s], l.table[t]));
                }
            }
            Structure::Poset { le }
        }
        Category::Jsl => {
            let bottom_img: Vec<Elem> = legs
                .iter()
                .map(|l| l.target.base_point().unwrap())
                .collect();
            let bottom = keys
                .find(&bottom_img, legs)
                .ok_or_else(|| Error::Construction("lifted semilattice has no bottom".into()))?;
            let mut join = vec![0; n * n];
            for s in 0..n {
                for t in s..n {
                    let img: Vec<Elem> = legs
                        .iter()
                        .map(|l| l.target.join(l.table[s], l.table[t]).unwrap())
                        .collect();
                    let j = keys.find(&img, legs).ok_or_else(|| {
                        Error::Construction("subset is not closed under joins".into())
                    })?;
                    join[s * n + t] = j;
                    join[t * n + s] = j;
                }
            }
            Structure::Semilattice { join, bottom }
        }
        Category::Gra => Structure::Graph {
            edges: lift_relation(n, legs, 0, 2)?,
        },
        Category::SigmaStr(sig) => {
            let relations = (sig.symbols.iter().enumerate())
                .map(|(k, sym)| lift_relation(n, legs, k, sym.arity))
                .collect::<Result<Vec<_>>>()?;
            Structure::Relational { relations }
        }
        Category::MSet(m) => {
            let mut action = vec![0; m.len() * n];
            for a in 0..m.len() {
                for s in 0..n {
                    let img: Vec<Elem> = legs
                        .iter()
                        .map(|l| l.target.act(a, l.table[s]).unwrap())
                        .collect();
                    action[a * n + s] = keys.find(&img, legs).ok_or_else(|| {
                        Error::Construction("subset is not closed under the action".into())
                    })?;
                }
            }
            Structure::MSet { action }
        }
        Category::Top | Category::Top0 => Structure::Topology {
            specialization: (0..n * n)
                .map(|k| {
                    legs.iter()
                        .all(|l| l.target.le(l.table[k / n], l.table[k % n]))
                })
                .collect(),
        },
        Category::Vec { q } => {
            let order = vector_order(*q, n, legs, &keys)?;
            let dim = (0..).find(|d| q.pow(*d) == n).unwrap_or(0) as usize;
            let labels: Vec<String> = order.iter().map(|&o| carrier.label(o)).collect();
            let obj = FinObject::new(Carrier::Named(labels), Structure::Vector { dim });
            verify_legs(cat, &obj, legs, &order)?;
            return Ok((obj, order));
        }
    };
    let obj = FinObject::new(carrier, structure);
    if let Category::Top0 = cat {
        super::object::validate(cat, &obj)?;
    }
    Ok((obj, identity))
}

fn verify_legs(cat: &Category, obj: &FinObject, legs: &[Leg<'_>], order: &[Elem]) -> Result<()> {
    for leg in legs {
        let t: Vec<Elem> = order.iter().map(|&o| leg.table[o]).collect();
        if !is_morphism(cat, obj, leg.target, &t) {
            return Err(Error::Construction(
                "a leg of the lifted structure is not a morphism".into(),
            ));
        }
    }
    Ok(())
}

/// Lookup of elements by their images. Uses the first leg alone when it is
/// injective, all legs otherwise.
struct Keys {
    first_only: bool,
    map: HashMap<Vec<Elem>, Elem>,
}

impl Keys {
    fn new(n: usize, legs: &[Leg<'_>]) -> Result<Keys> {
        if let Some(first) = legs.first() {
            let mut map = HashMap::with_capacity(n);
            if (0..n).all(|s| map.insert(vec![first.table[s]], s).is_none()) {
                return Ok(Keys {
                    first_only: true,
                    map,
                });
            }
        }
        let mut map = HashMap::with_capacity(n);
        for s in 0..n {
            let key: Vec<Elem> = legs.iter().map(|l| l.table[s]).collect();
            if map.insert(key, s).is_some() {
                return Err(Error::Construction("legs are not jointly injective".into()));
            }
        }
        Ok(Keys {
            first_only: false,
            map,
        })
    }

    fn find(&self, images: &[Elem], legs: &[Leg<'_>]) -> Option<Elem> {
        if self.first_only {
            let s = *self.map.get(&images[..1])?;
            legs.iter()
                .zip(images)
                .all(|(l, &v)| l.table[s] == v)
                .then_some(s)
        } else {
            self.map.get(images).copied()
        }
    }
}

fn lift_relation(n: usize, legs: &[Leg<'_>], k: usize, arity: usize) -> Result<Relation> {
    let relevant: Vec<&Leg<'_>> = legs
        .iter()
        .filter(|l| !l.target.relation(k).is_complete())
        .collect();
    if relevant.is_empty() {
        return Ok(Relation::complete(arity, n));
    }
    let total = n
        .checked_pow(arity as u32)
        .filter(|t| *t <= 1 << 24)
        .ok_or_else(|| Error::Construction("relation too large to lift".into()))?;
    let mut rel = Relation::empty(arity, n);
    let mut t = vec![0; arity];
    let mut img = vec![0; arity];
    for _ in 0..total {
        let ok = relevant.iter().all(|l| {
            for (slot, &x) in img.iter_mut().zip(&t) {
                *slot = l.table[x];
            }
            l.target.relation(k).contains(&img)
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

/// Coordinates of the subspace spanned by the lifted elements, in reduced
/// row echelon basis order.
fn vector_order(q: usize, n: usize, legs: &[Leg<'_>], keys: &Keys) -> Result<Vec<Elem>> {
    let coordinate_legs: Vec<&Leg<'_>> = if keys.first_only {
        legs[..1].iter().collect()
    } else {
        legs.iter().collect()
    };
    let vecs: Vec<Vec<usize>> = (0..n)
        .map(|s| {
            coordinate_legs
                .iter()
                .flat_map(|l| coords(q, l.target.vector_dim().unwrap(), l.table[s]))
                .collect()
        })
        .collect();
    let index: HashMap<&Vec<usize>, Elem> = vecs.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let width = vecs.first().map_or(0, |v| v.len());
    let basis = rref_basis(q, &vecs, width);
    let r = basis.len();
    if q.checked_pow(r as u32) != Some(n) {
        return Err(Error::Construction("lifted set is not a subspace".into()));
    }
    let mut order = Vec::with_capacity(n);
    for i in 0..n {
        let c = coords(q, r, i);
        let mut v = vec![0; width];
        for (j, cj) in c.iter().enumerate() {
            for (t, x) in v.iter_mut().enumerate() {
                *x = (*x + cj * basis[j][t]) % q;
            }
        }
        let s = index.get(&v).ok_or_else(|| {
            Error::Construction("lifted set is not closed under linear combinations".into())
        })?;
        order.push(*s);
    }
    Ok(order)
}

fn inverse_mod(q: usize, a: usize) -> usize {
    (1..q)
        .find(|b| a * b % q == 1)
        .expect("nonzero element of a prime field is invertible")
}

/// Reduced row echelon basis of the span of `vecs`.
pub fn rref_basis(q: usize, vecs: &[Vec<usize>], width: usize) -> Vec<Vec<usize>> {
    let mut rows: Vec<Vec<usize>> = vecs.to_vec();
    let mut basis: Vec<Vec<usize>> = Vec::new();
    let mut col = 0;
    while col < width {
        if let Some(p) = rows.iter().position(|r| r[col] != 0) {
            let mut pivot = rows.swap_remove(p);
            let inv = inverse_mod(q, pivot[col]);
            for x in pivot.iter_mut() {
                *x = *x * inv % q;
            }
            for r in rows.iter_mut().chain(basis.iter_mut()) {
                let f = r[col];
                if f != 0 {
                    for (x, y) in r.iter_mut().zip(&pivot) {
                        *x = (*x + q * q - f * y) % q;
                    }
                }
            }
            basis.push(pivot);
        }
        col += 1;
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_order_is_componentwise() {
        let c2 = FinObject::chain(2);
        let t0 = [0, 0, 1, 1];
        let t1 = [0, 1, 0, 1];
        let legs = [Leg::new(&c2, &t0), Leg::new(&c2, &t1)];
        let (obj, order) = initial_lift(&Category::Pos, 4, &legs, Carrier::numbered(4)).unwrap();
        assert_eq!(order, vec![0, 1, 2, 3]);
        assert!(obj.le(0, 3) && obj.le(1, 3) && !obj.le(1, 2));
    }

    #[test]
    fn vector_subspace_is_recoordinatised() {
        let v = FinObject::vector(2, 2);
        // the diagonal {(0,0), (1,1)} of F_2^2, listed backwards
        let table = [3, 0];
        let (obj, order) = initial_lift(
            &Category::Vec { q: 2 },
            2,
            &[Leg::new(&v, &table)],
            Carrier::numbered(2),
        )
        .unwrap();
        assert_eq!(obj.vector_dim(), Some(1));
        assert_eq!(order, vec![1, 0]);
    }

    #[test]
    fn non_closed_subset_rejected() {
        let j = FinObject::jsl_chain(3);
        let table = [1, 2];
        assert!(initial_lift(
            &Category::Jsl,
            2,
            &[Leg::new(&j, &table)],
            Carrier::numbered(2)
        )
        .is_err());
    }
}
