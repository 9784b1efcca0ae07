use super::category::Category;
use super::object::{coords, from_coords, Elem, FinObject, Structure};

/// One local condition a map must satisfy, attached to the largest source
/// element it mentions so that partial tables can be tested early.
#[derive(Clone, Debug)]
pub(crate) enum Check {
    Fixed { x: Elem, y: Elem },
    Rel { rel: usize, tuple: Vec<Elem> },
    Le { x: Elem, y: Elem },
    Join { x: Elem, y: Elem, z: Elem },
    Act { m: usize, x: Elem, y: Elem },
}

impl Check {
    fn max_elem(&self) -> Elem {
        match self {
            Check::Fixed { x, .. } => *x,
            Check::Rel { tuple, .. } => *tuple.iter().max().unwrap_or(&0),
            Check::Le { x, y } | Check::Act { x, y, .. } => *x.max(y),
            Check::Join { x, y, z } => *x.max(y).max(z),
        }
    }

    fn holds(&self, f: &[Elem], target: &FinObject) -> bool {
        match self {
            Check::Fixed { x, y } => f[*x] == *y,
            Check::Rel { rel, tuple } => {
                let mut buf = [0; 4];
                for (slot, &t) in buf.iter_mut().zip(tuple) {
                    *slot = f[t];
                }
                target.relation(*rel).contains(&buf[..tuple.len()])
            }
            Check::Le { x, y } => target.le(f[*x], f[*y]),
            Check::Join { x, y, z } => target.join(f[*x], f[*y]) == Some(f[*z]),
            Check::Act { m, x, y } => target.act(*m, f[*x]) == Some(f[*y]),
        }
    }
}

/// Conditions for maps `source -> target`, bucketed by the element that
/// completes them.
pub(crate) struct Checks {
    pub by_elem: Vec<Vec<Check>>,
    pub linear: Option<(usize, usize, usize)>,
}

impl Checks {
    pub fn compile(cat: &Category, source: &FinObject, target: &FinObject) -> Checks {
        let n = source.len();
        let mut all = Vec::new();
        let mut linear = None;
        match (&source.structure, &target.structure) {
            (Structure::Pointed { base: a }, Structure::Pointed { base: b }) => {
                all.push(Check::Fixed { x: *a, y: *b });
            }
            (Structure::Poset { .. }, Structure::Poset { .. })
            | (Structure::Topology { .. }, Structure::Topology { .. }) => {
                for x in 0..n {
                    for y in 0..n {
                        if x != y && source.le(x, y) {
                            all.push(Check::Le { x, y });
                        }
                    }
                }
            }
            (
                Structure::Semilattice { bottom: a, .. },
                Structure::Semilattice { bottom: b, .. },
            ) => {
                all.push(Check::Fixed { x: *a, y: *b });
                for x in 0..n {
                    for y in x + 1..n {
                        let z = source.join(x, y).unwrap();
                        if z != x && z != y {
                            all.push(Check::Join { x, y, z });
                        } else {
                            // comparable pair: joins reduce to order
                            let (lo, hi) = if z == y { (x, y) } else { (y, x) };
                            all.push(Check::Le { x: lo, y: hi });
                        }
                    }
                }
            }
            (Structure::Graph { .. }, Structure::Graph { .. })
            | (Structure::Relational { .. }, Structure::Relational { .. }) => {
                let trels = target.relations();
                for (k, r) in source.relations().into_iter().enumerate() {
                    if trels[k].is_complete() {
                        continue;
                    }
                    for t in r.tuples() {
                        all.push(Check::Rel { rel: k, tuple: t });
                    }
                }
            }
            (Structure::MSet { action }, Structure::MSet { .. }) => {
                let m_len = action.len().checked_div(n).unwrap_or(0);
                if let Category::MSet(m) = cat {
                    for a in 0..m_len {
                        if a == m.identity() {
                            continue;
                        }
                        for x in 0..n {
                            all.push(Check::Act {
                                m: a,
                                x,
                                y: action[a * n + x],
                            });
                        }
                    }
                }
            }
            (Structure::Vector { dim: a }, Structure::Vector { dim: b }) => {
                linear = Some((cat.field_order().unwrap_or(2), *a, *b));
            }
            _ => {}
        }
        let mut by_elem = vec![Vec::new(); n];
        for c in all {
            let k = c.max_elem();
            by_elem[k].push(c);
        }
        Checks { by_elem, linear }
    }

    /// Checks that become decidable once element `k` is assigned.
    pub fn partial_ok(&self, k: Elem, f: &[Elem], target: &FinObject) -> bool {
        self.by_elem[k].iter().all(|c| c.holds(f, target))
    }
}

pub(crate) fn is_linear(q: usize, dim_a: usize, dim_b: usize, f: &[Elem]) -> bool {
    if f.first().copied() != Some(0) {
        return false;
    }
    let images: Vec<Vec<usize>> = (0..dim_a)
        .map(|j| coords(q, dim_b, f[q.pow(j as u32)]))
        .collect();
    (0..f.len()).all(|x| {
        let cx = coords(q, dim_a, x);
        let mut acc = vec![0; dim_b];
        for (j, c) in cx.iter().enumerate() {
            for (t, v) in acc.iter_mut().enumerate() {
                *v = (*v + c * images[j][t]) % q;
            }
        }
        from_coords(q, &acc) == f[x]
    })
}

/// Whether `f` is a morphism `source -> target` of `cat`.
pub fn is_morphism(cat: &Category, source: &FinObject, target: &FinObject, f: &[Elem]) -> bool {
    if f.len() != source.len() || f.iter().any(|&y| y >= target.len()) {
        return false;
    }
    let checks = Checks::compile(cat, source, target);
    if let Some((q, a, b)) = checks.linear {
        return is_linear(q, a, b, f);
    }
    (0..source.len()).all(|k| checks.partial_ok(k, f, target))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monotone_maps() {
        let c2 = FinObject::chain(2);
        assert!(is_morphism(&Category::Pos, &c2, &c2, &[0, 1]));
        assert!(is_morphism(&Category::Pos, &c2, &c2, &[1, 1]));
        assert!(!is_morphism(&Category::Pos, &c2, &c2, &[1, 0]));
    }

    #[test]
    fn linear_maps() {
        let v = FinObject::vector(2, 2);
        let k = FinObject::vector(2, 1);
        let cat = Category::Vec { q: 2 };
        // projection onto the first coordinate
        assert!(is_morphism(&cat, &v, &k, &[0, 1, 0, 1]));
        assert!(!is_morphism(&cat, &v, &k, &[0, 1, 1, 1]));
    }
}
