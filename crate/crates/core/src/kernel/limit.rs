use std::sync::Arc;

use super::budget::{Budget, Meter};
use crate::error::{Error, Result};
use crate::plugins::{
    coords, from_coords, initial_lift, is_morphism, Carrier, Category, Elem, FinObject, Leg,
};

const PRODUCT_FILTER_LIMIT: u128 = 4096;

#[derive(Clone, Debug)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub table: Arc<Vec<Elem>>,
}

/// A finite diagram: objects at nodes and morphisms between them.
#[derive(Clone, Debug, Default)]
pub struct FinDiagram {
    pub nodes: Vec<Arc<FinObject>>,
    pub arrows: Vec<Arrow>,
}

impl FinDiagram {
    pub fn add_node(&mut self, obj: Arc<FinObject>) -> usize {
        self.nodes.push(obj);
        self.nodes.len() - 1
    }

    pub fn add_arrow(&mut self, source: usize, target: usize, table: Vec<Elem>) {
        self.arrows.push(Arrow {
            source,
            target,
            table: Arc::new(table),
        });
    }

    pub fn add_shared_arrow(&mut self, source: usize, target: usize, table: Arc<Vec<Elem>>) {
        self.arrows.push(Arrow {
            source,
            target,
            table,
        });
    }

    pub fn validate(&self, cat: &Category) -> Result<()> {
        for a in &self.arrows {
            if a.source >= self.nodes.len() || a.target >= self.nodes.len() {
                return Err(Error::Input("arrow refers to a missing node".into()));
            }
            if !is_morphism(cat, &self.nodes[a.source], &self.nodes[a.target], &a.table) {
                return Err(Error::NotAMorphism(format!(
                    "arrow {} -> {} is not a morphism",
                    a.source, a.target
                )));
            }
        }
        Ok(())
    }

    fn constraint_arrows(&self) -> Vec<(usize, usize, &[Elem])> {
        self.arrows
            .iter()
            .map(|a| (a.source, a.target, a.table.as_slice()))
            .collect()
    }
}

/// Limit apex together with the compatible family behind each apex element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limit {
    pub object: FinObject,
    pub families: Vec<Vec<Elem>>,
}

impl Limit {
    /// Projection onto node `k`.
    pub fn leg(&self, k: usize) -> Vec<Elem> {
        self.families.iter().map(|f| f[k]).collect()
    }
}

struct Solver<'a> {
    domains: &'a [usize],
    out: Vec<Vec<(usize, &'a [Elem])>>,
    inn: Vec<Vec<(usize, &'a [Elem])>>,
    order: Vec<usize>,
    assign: Vec<usize>,
    trail: Vec<usize>,
    meter: Meter<'static>,
    results: Vec<Vec<Elem>>,
}

const NONE: usize = usize::MAX;

impl<'a> Solver<'a> {
    fn set(&mut self, node: usize, val: Elem) -> Result<bool> {
        self.assign[node] = val;
        self.trail.push(node);
        let mut queue = vec![node];
        while let Some(i) = queue.pop() {
            self.meter.tick()?;
            let v = self.assign[i];
            for &(j, h) in &self.out[i] {
                let w = h[v];
                if self.assign[j] == NONE {
                    self.assign[j] = w;
                    self.trail.push(j);
                    queue.push(j);
                } else if self.assign[j] != w {
                    return Ok(false);
                }
            }
            for &(k, h) in &self.inn[i] {
                let u = self.assign[k];
                if u != NONE && h[u] != v {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let n = self.trail.pop().unwrap();
            self.assign[n] = NONE;
        }
    }

    fn search(&mut self, from: usize) -> Result<()> {
        let Some(pos) = (from..self.order.len()).find(|&p| self.assign[self.order[p]] == NONE)
        else {
            self.results.push(self.assign.clone());
            return Ok(());
        };
        let node = self.order[pos];
        for v in 0..self.domains[node] {
            let mark = self.trail.len();
            if self.set(node, v)? {
                self.search(pos + 1)?;
            }
            self.undo(mark);
        }
        Ok(())
    }
}

/// Families `(t_i)` with `t_i < domains[i]` and `h(t_s) = t_t` for every
/// constraint `(s, t, h)`, sorted lexicographically. Backtracking with
/// propagation along the constraints.
pub fn compatible_families(
    domains: &[usize],
    arrows: &[(usize, usize, &[Elem])],
    budget: Budget,
) -> Result<Vec<Vec<Elem>>> {
    let n = domains.len();
    let mut out = vec![Vec::new(); n];
    let mut inn = vec![Vec::new(); n];
    for &(s, t, h) in arrows {
        if s == t && h.iter().enumerate().all(|(i, &v)| i == v) {
            continue;
        }
        out[s].push((t, h));
        inn[t].push((s, h));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(out[i].len() + inn[i].len()));
    let mut solver = Solver {
        domains,
        out,
        inn,
        order,
        assign: vec![NONE; n],
        trail: Vec::new(),
        meter: budget.meter("searching compatible families"),
        results: Vec::new(),
    };
    solver.search(0)?;
    let mut results = solver.results;
    results.sort();
    Ok(results)
}

/// Same as [`compatible_families`], by filtering the full product.
pub fn compatible_families_by_product(
    domains: &[usize],
    arrows: &[(usize, usize, &[Elem])],
    budget: Budget,
) -> Result<Vec<Vec<Elem>>> {
    let total = domains
        .iter()
        .fold(1u128, |acc, &d| acc.saturating_mul(d as u128));
    budget.admit(total, "materialising a product")?;
    let mut results = Vec::new();
    if total == 0 {
        return Ok(results);
    }
    let mut t = vec![0; domains.len()];
    for _ in 0..total {
        if arrows.iter().all(|&(s, d, h)| h[t[s]] == t[d]) {
            results.push(t.clone());
        }
        for p in (0..t.len()).rev() {
            t[p] += 1;
            if t[p] < domains[p] {
                break;
            }
            t[p] = 0;
        }
    }
    Ok(results)
}

fn family_carrier(nodes: &[Arc<FinObject>], families: &[Vec<Elem>]) -> Carrier {
    if nodes.len() <= 4 {
        let labels = families
            .iter()
            .map(|f| {
                let parts: Vec<String> = f.iter().zip(nodes).map(|(&x, o)| o.label(x)).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        Carrier::Named(labels)
    } else {
        Carrier::indexed(families.len(), "t")
    }
}

/// Lift the structure of the nodes onto a set of families.
pub fn structure_families(
    cat: &Category,
    nodes: &[Arc<FinObject>],
    families: Vec<Vec<Elem>>,
) -> Result<Limit> {
    let legs_tables: Vec<Vec<Elem>> = (0..nodes.len())
        .map(|k| families.iter().map(|f| f[k]).collect())
        .collect();
    let legs: Vec<Leg<'_>> = nodes
        .iter()
        .zip(&legs_tables)
        .map(|(o, t)| Leg::new(o, t))
        .collect();
    let carrier = family_carrier(nodes, &families);
    let (object, order) = initial_lift(cat, families.len(), &legs, carrier)?;
    let families = order.iter().map(|&o| families[o].clone()).collect();
    Ok(Limit { object, families })
}

/// Limit of a finite diagram, computed as the set of compatible families with
/// the initial structure for the projections.
pub fn limit(cat: &Category, diagram: &FinDiagram, budget: Budget) -> Result<Limit> {
    diagram.validate(cat)?;
    limit_of_checked(cat, diagram, budget)
}

/// [`limit`] for a diagram whose arrows are already known to be morphisms.
pub fn limit_of_checked(cat: &Category, diagram: &FinDiagram, budget: Budget) -> Result<Limit> {
    let domains: Vec<usize> = diagram.nodes.iter().map(|o| o.len()).collect();
    let arrows = diagram.constraint_arrows();
    let total = domains
        .iter()
        .fold(1u128, |acc, &d| acc.saturating_mul(d as u128));
    let families = if total <= PRODUCT_FILTER_LIMIT {
        compatible_families_by_product(&domains, &arrows, budget)?
    } else {
        compatible_families(&domains, &arrows, budget)?
    };
    structure_families(cat, &diagram.nodes, families)
}

/// Product; families are tuples in lexicographic order (vector spaces use
/// concatenated coordinates).
pub fn product(cat: &Category, factors: &[Arc<FinObject>], budget: Budget) -> Result<Limit> {
    let total = factors
        .iter()
        .fold(1u128, |acc, f| acc.saturating_mul(f.len() as u128));
    budget.admit(total, "materialising a product")?;
    if let Category::Vec { q } = cat {
        let dims: Vec<usize> = factors.iter().map(|f| f.vector_dim().unwrap()).collect();
        let d: usize = dims.iter().sum();
        let object = FinObject::vector(*q, d);
        let families = (0..object.len())
            .map(|i| {
                let c = coords(*q, d, i);
                let mut off = 0;
                dims.iter()
                    .map(|&dk| {
                        let v = from_coords(*q, &c[off..off + dk]);
                        off += dk;
                        v
                    })
                    .collect()
            })
            .collect();
        return Ok(Limit { object, families });
    }
    let domains: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let families = compatible_families_by_product(&domains, &[], budget)?;
    structure_families(cat, factors, families)
}

/// Pullback of `f: x -> z` and `g: y -> z`; families are `(a, b, f(a))`.
pub fn pullback(
    cat: &Category,
    x: Arc<FinObject>,
    f: &[Elem],
    y: Arc<FinObject>,
    g: &[Elem],
    z: Arc<FinObject>,
    budget: Budget,
) -> Result<Limit> {
    let mut d = FinDiagram::default();
    let (nx, ny, nz) = (d.add_node(x), d.add_node(y), d.add_node(z));
    d.add_arrow(nx, nz, f.to_vec());
    d.add_arrow(ny, nz, g.to_vec());
    limit(cat, &d, budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backtracking_matches_product_filter() {
        let domains = [3, 2, 2, 3];
        let h01: Vec<Elem> = vec![0, 1, 1];
        let h21: Vec<Elem> = vec![1, 0];
        let h03: Vec<Elem> = vec![2, 1, 0];
        let arrows: Vec<(usize, usize, &[Elem])> = vec![(0, 1, &h01), (2, 1, &h21), (0, 3, &h03)];
        let a = compatible_families(&domains, &arrows, Budget::default()).unwrap();
        let b = compatible_families_by_product(&domains, &arrows, Budget::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn pullback_of_sets() {
        let x = Arc::new(FinObject::set(3));
        let z = Arc::new(FinObject::set(2));
        let f = [0, 1, 1];
        let lim = pullback(&Category::Set, x.clone(), &f, x, &f, z, Budget::default()).unwrap();
        // kernel pair of f: 1 + 4 pairs
        assert_eq!(lim.object.len(), 5);
    }

    #[test]
    fn vector_product_dimensions_add() {
        let cat = Category::Vec { q: 3 };
        let f = vec![
            Arc::new(FinObject::vector(3, 1)),
            Arc::new(FinObject::vector(3, 2)),
        ];
        let p = product(&cat, &f, Budget::default()).unwrap();
        assert_eq!(p.object.vector_dim(), Some(3));
        assert!(is_morphism(&cat, &p.object, &f[1], &p.leg(1)));
    }
}
