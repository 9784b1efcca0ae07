use std::collections::HashSet;

use super::category::{Category, Monoid, Signature};
use super::relation::{BitSet, Relation};
use crate::error::{Error, Result};

pub type Elem = usize;

pub const BOTTOM_LABEL: &str = "⊥";

/// Element labels of a finite carrier. Elements themselves are the indices `0..len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Carrier {
    Named(Vec<String>),
    Indexed { len: usize, prefix: String },
}

impl Carrier {
    pub fn named(labels: Vec<String>) -> Result<Self> {
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidObject(format!(
                    "duplicate element label {l:?}"
                )));
            }
        }
        Ok(Carrier::Named(labels))
    }

    pub fn indexed(len: usize, prefix: &str) -> Self {
        Carrier::Indexed {
            len,
            prefix: prefix.to_string(),
        }
    }

    pub fn numbered(len: usize) -> Self {
        Carrier::Named((0..len).map(|i| i.to_string()).collect())
    }

    pub fn len(&self) -> usize {
        match self {
            Carrier::Named(v) => v.len(),
            Carrier::Indexed { len, .. } => *len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn label(&self, i: Elem) -> String {
        match self {
            Carrier::Named(v) => v[i].clone(),
            Carrier::Indexed { prefix, .. } => format!("{prefix}{i}"),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.len()).map(|i| self.label(i)).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<Elem> {
        match self {
            Carrier::Named(v) => v.iter().position(|l| l == label),
            Carrier::Indexed { len, prefix } => label
                .strip_prefix(prefix.as_str())
                .and_then(|r| r.parse::<usize>().ok())
                .filter(|i| i < len),
        }
    }
}

/// Structure carried by an object; the variant matches the category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Set,
    Pointed {
        base: Elem,
    },
    Poset {
        le: Vec<bool>,
    },
    Semilattice {
        join: Vec<Elem>,
        bottom: Elem,
    },
    Graph {
        edges: Relation,
    },
    Relational {
        relations: Vec<Relation>,
    },
    Vector {
        dim: usize,
    },
    MSet {
        action: Vec<Elem>,
    },
    /// Specialization preorder: `x ⊑ y` when every open set containing `x`
    /// contains `y`. The open sets are its up-sets.
    Topology {
        specialization: Vec<bool>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinObject {
    pub carrier: Carrier,
    pub structure: Structure,
}

impl FinObject {
    pub fn new(carrier: Carrier, structure: Structure) -> Self {
        FinObject { carrier, structure }
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn label(&self, i: Elem) -> String {
        self.carrier.label(i)
    }

    pub fn set(n: usize) -> Self {
        FinObject::new(Carrier::numbered(n), Structure::Set)
    }

    /// Pointed set with `n` ordinary elements; the base point is element 0.
    pub fn pointed(n: usize) -> Self {
        let mut labels = vec![BOTTOM_LABEL.to_string()];
        labels.extend((0..n).map(|i| i.to_string()));
        FinObject::new(Carrier::Named(labels), Structure::Pointed { base: 0 })
    }

    /// Partial order generated by `pairs` (reflexive-transitive closure).
    pub fn poset(n: usize, pairs: &[(Elem, Elem)]) -> Result<Self> {
        let mut le = vec![false; n * n];
        for i in 0..n {
            le[i * n + i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::InvalidObject("order pair out of range".into()));
            }
            le[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if le[i * n + k] {
                    for j in 0..n {
                        if le[k * n + j] {
                            le[i * n + j] = true;
                        }
                    }
                }
            }
        }
        let obj = FinObject::new(Carrier::numbered(n), Structure::Poset { le });
        validate_structure(&obj)?;
        Ok(obj)
    }

    pub fn chain(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        FinObject::poset(n, &pairs).expect("chain is a poset")
    }

    pub fn antichain(n: usize) -> Self {
        FinObject::poset(n, &[]).expect("antichain is a poset")
    }

    /// Join-semilattice with bottom given by its join table.
    pub fn semilattice(n: usize, join: Vec<Elem>, bottom: Elem) -> Result<Self> {
        let obj = FinObject::new(
            Carrier::numbered(n),
            Structure::Semilattice { join, bottom },
        );
        validate_structure(&obj)?;
        Ok(obj)
    }

    /// The `n`-element chain as a join-semilattice.
    pub fn jsl_chain(n: usize) -> Self {
        assert!(n >= 1, "a semilattice with bottom is nonempty");
        let join = (0..n * n).map(|k| (k / n).max(k % n)).collect();
        FinObject::semilattice(n, join, 0).expect("chain is a semilattice")
    }

    /// Undirected graph (loops allowed); edges are symmetrised.
    pub fn graph(n: usize, edges: &[(Elem, Elem)]) -> Result<Self> {
        let mut rel = Relation::empty(2, n);
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidObject("edge endpoint out of range".into()));
            }
            rel.insert(&[a, b]);
            rel.insert(&[b, a]);
        }
        Ok(FinObject::new(
            Carrier::numbered(n),
            Structure::Graph { edges: rel },
        ))
    }

    pub fn relational(n: usize, relations: Vec<Relation>) -> Self {
        FinObject::new(Carrier::numbered(n), Structure::Relational { relations })
    }

    pub fn vector(q: usize, dim: usize) -> Self {
        let len = q.pow(dim as u32);
        let labels = (0..len)
            .map(|i| {
                let c = coords(q, dim, i);
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        FinObject::new(Carrier::Named(labels), Structure::Vector { dim })
    }

    pub fn mset(monoid: &Monoid, n: usize, action: Vec<Elem>) -> Result<Self> {
        let obj = FinObject::new(Carrier::numbered(n), Structure::MSet { action });
        validate(&Category::MSet(monoid.clone()), &obj)?;
        Ok(obj)
    }

    /// Space from a list of open sets, which must form a topology.
    pub fn topology(n: usize, opens: Vec<BitSet>) -> Result<Self> {
        let set: HashSet<&BitSet> = opens.iter().collect();
        if !set.contains(&BitSet::new(n)) || !set.contains(&BitSet::full(n)) {
            return Err(Error::InvalidObject(
                "topology must contain the empty set and the whole space".into(),
            ));
        }
        for a in &opens {
            if a.iter().any(|x| x >= n) {
                return Err(Error::InvalidObject("open set has the wrong size".into()));
            }
            for b in &opens {
                if !set.contains(&a.union(b)) || !set.contains(&a.intersection(b)) {
                    return Err(Error::InvalidObject(
                        "open sets are not closed under union and intersection".into(),
                    ));
                }
            }
        }
        let specialization = (0..n * n)
            .map(|k| {
                opens
                    .iter()
                    .all(|o| !o.contains(k / n) || o.contains(k % n))
            })
            .collect();
        Ok(FinObject::new(
            Carrier::numbered(n),
            Structure::Topology { specialization },
        ))
    }

    /// Space whose specialization preorder is `x ⊑ y` for the listed pairs
    /// and their reflexive transitive closure.
    pub fn space(n: usize, pairs: &[(Elem, Elem)]) -> Result<Self> {
        let mut specialization = vec![false; n * n];
        for i in 0..n {
            specialization[i * n + i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::InvalidObject("pair out of range".into()));
            }
            specialization[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if specialization[i * n + k] && specialization[k * n + j] {
                        specialization[i * n + j] = true;
                    }
                }
            }
        }
        Ok(FinObject::new(
            Carrier::numbered(n),
            Structure::Topology { specialization },
        ))
    }

    /// `x ≤ y` for ordered structures.
    pub fn le(&self, x: Elem, y: Elem) -> bool {
        let n = self.len();
        match &self.structure {
            Structure::Poset { le } | Structure::Topology { specialization: le } => le[x * n + y],
            Structure::Semilattice { join, .. } => join[x * n + y] == y,
            _ => x == y,
        }
    }

    pub fn join(&self, x: Elem, y: Elem) -> Option<Elem> {
        match &self.structure {
            Structure::Semilattice { join, .. } => Some(join[x * self.len() + y]),
            _ => None,
        }
    }

    pub fn act(&self, m: usize, x: Elem) -> Option<Elem> {
        match &self.structure {
            Structure::MSet { action } => Some(action[m * self.len() + x]),
            _ => None,
        }
    }

    pub fn base_point(&self) -> Option<Elem> {
        match &self.structure {
            Structure::Pointed { base } => Some(*base),
            Structure::Semilattice { bottom, .. } => Some(*bottom),
            Structure::Vector { .. } => Some(0),
            _ => None,
        }
    }

    pub fn relations(&self) -> Vec<&Relation> {
        match &self.structure {
            Structure::Graph { edges } => vec![edges],
            Structure::Relational { relations } => relations.iter().collect(),
            _ => vec![],
        }
    }

    pub fn relation(&self, k: usize) -> &Relation {
        match &self.structure {
            Structure::Graph { edges } => edges,
            Structure::Relational { relations } => &relations[k],
            _ => panic!("object has no relations"),
        }
    }

    /// Open sets of a space in increasing bitmask order; empty for other
    /// structures. Enumerates all subsets, so meant for small carriers.
    pub fn opens(&self) -> Vec<BitSet> {
        let n = self.len();
        if !matches!(self.structure, Structure::Topology { .. }) {
            return Vec::new();
        }
        assert!(n < 24, "listing open sets of a space with {n} points");
        (0..1usize << n)
            .filter(|&m| {
                (0..n).all(|x| m >> x & 1 == 0 || (0..n).all(|y| !self.le(x, y) || m >> y & 1 == 1))
            })
            .map(|m| BitSet::from_iter(n, (0..n).filter(|x| m >> x & 1 == 1)))
            .collect()
    }

    pub fn vector_dim(&self) -> Option<usize> {
        match &self.structure {
            Structure::Vector { dim } => Some(*dim),
            _ => None,
        }
    }

    /// Size used when bounding subcategories: dimension for vector spaces,
    /// ordinary elements for pointed sets, carrier size otherwise.
    pub fn size_measure(&self) -> usize {
        match &self.structure {
            Structure::Vector { dim } => *dim,
            Structure::Pointed { .. } => self.len().saturating_sub(1),
            _ => self.len(),
        }
    }

    /// Same structure with fresh labels.
    pub fn with_carrier(mut self, carrier: Carrier) -> Self {
        assert_eq!(carrier.len(), self.len());
        self.carrier = carrier;
        self
    }
}

pub fn coords(q: usize, dim: usize, mut i: Elem) -> Vec<usize> {
    let mut c = Vec::with_capacity(dim);
    for _ in 0..dim {
        c.push(i % q);
        i /= q;
    }
    c
}

pub fn from_coords(q: usize, c: &[usize]) -> Elem {
    c.iter().rev().fold(0, |acc, &x| acc * q + x)
}

pub fn vec_add(q: usize, dim: usize, a: Elem, b: Elem) -> Elem {
    let (ca, cb) = (coords(q, dim, a), coords(q, dim, b));
    let c: Vec<usize> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % q).collect();
    from_coords(q, &c)
}

pub fn vec_scale(q: usize, dim: usize, s: usize, a: Elem) -> Elem {
    let c: Vec<usize> = coords(q, dim, a).iter().map(|x| x * s % q).collect();
    from_coords(q, &c)
}

/// Index of the `j`-th standard basis vector.
pub fn basis_vector(q: usize, j: usize) -> Elem {
    q.pow(j as u32)
}

fn structure_matches(cat: &Category, s: &Structure) -> bool {
    matches!(
        (cat, s),
        (Category::Set, Structure::Set)
            | (Category::Par, Structure::Pointed { .. })
            | (Category::Pos, Structure::Poset { .. })
            | (Category::Jsl, Structure::Semilattice { .. })
            | (Category::Gra, Structure::Graph { .. })
            | (Category::SigmaStr(_), Structure::Relational { .. })
            | (Category::Vec { .. }, Structure::Vector { .. })
            | (Category::MSet(_), Structure::MSet { .. })
            | (Category::Top, Structure::Topology { .. })
            | (Category::Top0, Structure::Topology { .. })
    )
}

/// Checks the axioms of the object's category.
pub fn validate(cat: &Category, obj: &FinObject) -> Result<()> {
    if !structure_matches(cat, &obj.structure) {
        return Err(Error::InvalidObject(format!(
            "structure does not belong to category {}",
            cat.name()
        )));
    }
    validate_structure(obj)?;
    let n = obj.len();
    match (cat, &obj.structure) {
        (Category::SigmaStr(sig), Structure::Relational { relations }) => {
            check_signature(sig, relations, n)?;
        }
        (Category::Vec { q }, Structure::Vector { dim }) => {
            if q.checked_pow(*dim as u32) != Some(n) {
                return Err(Error::InvalidObject(format!(
                    "vector space of dimension {dim} over F_{q} needs {} elements",
                    q.pow(*dim as u32)
                )));
            }
        }
        (Category::MSet(m), Structure::MSet { action }) => {
            if action.len() != m.len() * n || action.iter().any(|&y| y >= n) {
                return Err(Error::InvalidObject("action table has wrong shape".into()));
            }
            for x in 0..n {
                if action[m.identity() * n + x] != x {
                    return Err(Error::InvalidObject(
                        "identity does not act trivially".into(),
                    ));
                }
                for a in 0..m.len() {
                    for b in 0..m.len() {
                        let lhs = action[m.mul(a, b) * n + x];
                        let rhs = action[a * n + action[b * n + x]];
                        if lhs != rhs {
                            return Err(Error::InvalidObject(format!(
                                "action is not compatible with the monoid at ({}, {}, {})",
                                m.elements()[a],
                                m.elements()[b],
                                obj.label(x)
                            )));
                        }
                    }
                }
            }
        }
        (Category::Top0, Structure::Topology { specialization }) => {
            for x in 0..n {
                for y in x + 1..n {
                    if specialization[x * n + y] && specialization[y * n + x] {
                        return Err(Error::InvalidObject(format!(
                            "points {} and {} are topologically indistinguishable",
                            obj.label(x),
                            obj.label(y)
                        )));
                    }
                }
            }
        }
        _ => {}
    }
    Ok(())
}

fn check_signature(sig: &Signature, relations: &[Relation], n: usize) -> Result<()> {
    if relations.len() != sig.symbols.len() {
        return Err(Error::InvalidObject(
            "relation count does not match the signature".into(),
        ));
    }
    for (r, s) in relations.iter().zip(&sig.symbols) {
        if r.arity() != s.arity || r.size() != n {
            return Err(Error::InvalidObject(format!(
                "relation {} has the wrong shape",
                s.name
            )));
        }
    }
    Ok(())
}

fn check_preorder(obj: &FinObject, le: &[bool], antisymmetric: bool) -> Result<()> {
    let n = obj.len();
    let bad = |msg: String| Err(Error::InvalidObject(msg));
    if le.len() != n * n {
        return bad("order matrix has wrong shape".into());
    }
    for i in 0..n {
        if !le[i * n + i] {
            return bad("order is not reflexive".into());
        }
        for j in 0..n {
            if antisymmetric && i != j && le[i * n + j] && le[j * n + i] {
                return bad(format!(
                    "order is not antisymmetric at {} and {}",
                    obj.label(i),
                    obj.label(j)
                ));
            }
            for k in 0..n {
                if le[i * n + j] && le[j * n + k] && !le[i * n + k] {
                    return bad("order is not transitive".into());
                }
            }
        }
    }
    Ok(())
}

fn validate_structure(obj: &FinObject) -> Result<()> {
    let n = obj.len();
    let bad = |msg: String| Err(Error::InvalidObject(msg));
    match &obj.structure {
        Structure::Set | Structure::Vector { .. } => {}
        Structure::Pointed { base } => {
            if *base >= n {
                return bad("base point out of range".into());
            }
        }
        Structure::Poset { le } => check_preorder(obj, le, true)?,
        Structure::Topology { specialization } => check_preorder(obj, specialization, false)?,
        Structure::Semilattice { join, bottom } => {
            if n == 0 || join.len() != n * n || *bottom >= n || join.iter().any(|&v| v >= n) {
                return bad("join table has wrong shape".into());
            }
            for x in 0..n {
                if join[x * n + x] != x || join[*bottom * n + x] != x {
                    return bad("join is not idempotent with bottom as unit".into());
                }
                for y in 0..n {
                    if join[x * n + y] != join[y * n + x] {
                        return bad("join is not commutative".into());
                    }
                    for z in 0..n {
                        if join[join[x * n + y] * n + z] != join[x * n + join[y * n + z]] {
                            return bad("join is not associative".into());
                        }
                    }
                }
            }
        }
        Structure::Graph { edges } => {
            if edges.arity() != 2 || edges.size() != n {
                return bad("edge relation has wrong shape".into());
            }
            if !edges.is_complete() {
                for t in edges.tuples() {
                    if !edges.contains(&[t[1], t[0]]) {
                        return bad("edge relation is not symmetric".into());
                    }
                }
            }
        }
        Structure::Relational { relations } => {
            if relations.iter().any(|r| r.size() != n) {
                return bad("relation has wrong size".into());
            }
        }
        Structure::MSet { .. } => {}
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_coordinates_roundtrip() {
        for i in 0..27 {
            assert_eq!(from_coords(3, &coords(3, 3, i)), i);
        }
        assert_eq!(vec_add(2, 2, 1, 3), 2);
        assert_eq!(vec_scale(3, 1, 2, 2), 1);
    }

    #[test]
    fn rejects_non_posets() {
        assert!(FinObject::poset(2, &[(0, 1), (1, 0)]).is_err());
        assert!(FinObject::semilattice(2, vec![0, 1, 1, 0], 0).is_err());
    }

    #[test]
    fn mset_axioms_checked() {
        let z2 = Monoid::cyclic(2);
        assert!(FinObject::mset(&z2, 2, vec![0, 1, 1, 0]).is_ok());
        // g acting as a constant map is not an involution
        assert!(FinObject::mset(&z2, 2, vec![0, 1, 0, 0]).is_err());
    }
}
