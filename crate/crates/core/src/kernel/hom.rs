use std::sync::Arc;

use super::budget::Budget;
use crate::error::{Error, Result};
use crate::plugins::morphism::Checks;
use crate::plugins::{coords, from_coords, is_morphism, Category, Elem, FinObject};

/// A structure-preserving map, stored as its element table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinMorphism {
    pub source: Arc<FinObject>,
    pub target: Arc<FinObject>,
    pub table: Vec<Elem>,
}

impl FinMorphism {
    pub fn new(
        cat: &Category,
        source: Arc<FinObject>,
        target: Arc<FinObject>,
        table: Vec<Elem>,
    ) -> Result<Self> {
        if !is_morphism(cat, &source, &target, &table) {
            return Err(Error::NotAMorphism(format!(
                "table {table:?} is not a {} morphism",
                cat.name()
            )));
        }
        Ok(FinMorphism {
            source,
            target,
            table,
        })
    }

    pub fn identity(obj: Arc<FinObject>) -> Self {
        let table = (0..obj.len()).collect();
        FinMorphism {
            source: obj.clone(),
            target: obj,
            table,
        }
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.table[x]
    }

    /// `other ∘ self`
    pub fn then(&self, other: &FinMorphism) -> Result<FinMorphism> {
        if self.target != other.source {
            return Err(Error::NotAMorphism(
                "composed morphisms do not match".into(),
            ));
        }
        Ok(FinMorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            table: compose(&self.table, &other.table),
        })
    }
}

/// Table of `second ∘ first`.
pub fn compose(first: &[Elem], second: &[Elem]) -> Vec<Elem> {
    first.iter().map(|&x| second[x]).collect()
}

/// All morphisms `source -> target`, in lexicographic order of their tables.
pub fn enumerate_hom(
    cat: &Category,
    source: &FinObject,
    target: &FinObject,
    budget: Budget,
) -> Result<Vec<Vec<Elem>>> {
    let n = source.len();
    let m = target.len();
    if n == 0 {
        return Ok(vec![vec![]]);
    }
    if m == 0 {
        return Ok(vec![]);
    }
    let checks = Checks::compile(cat, source, target);
    if let Some((q, da, db)) = checks.linear {
        return linear_maps(q, da, db, budget);
    }
    let mut meter = budget.meter("enumerating morphisms");
    let mut out = Vec::new();
    let mut f = vec![0; n];
    let mut k = 0;
    loop {
        if f[k] < m {
            meter.tick()?;
            if checks.partial_ok(k, &f, target) {
                if k + 1 == n {
                    meter.add(n as u64)?;
                    out.push(f.clone());
                    f[k] += 1;
                } else {
                    k += 1;
                    f[k] = 0;
                }
            } else {
                f[k] += 1;
            }
        } else {
            if k == 0 {
                break;
            }
            k -= 1;
            f[k] += 1;
        }
    }
    Ok(out)
}

fn linear_maps(q: usize, da: usize, db: usize, budget: Budget) -> Result<Vec<Vec<Elem>>> {
    let per = q.pow(db as u32);
    let total = (per as u128).pow(da as u32);
    let n = q.pow(da as u32);
    budget.admit(total * n as u128, "enumerating linear maps")?;
    let mut out = Vec::with_capacity(total as usize);
    for code in 0..total as usize {
        let images: Vec<Vec<usize>> = coords(per, da, code)
            .iter()
            .map(|&v| coords(q, db, v))
            .collect();
        let table = (0..n)
            .map(|x| {
                let cx = coords(q, da, x);
                let mut acc = vec![0; db];
                for (j, c) in cx.iter().enumerate() {
                    for (t, a) in acc.iter_mut().enumerate() {
                        *a = (*a + c * images[j][t]) % q;
                    }
                }
                from_coords(q, &acc)
            })
            .collect();
        out.push(table);
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plugins::Monoid;

    fn brute(cat: &Category, a: &FinObject, b: &FinObject) -> Vec<Vec<Elem>> {
        let n = a.len();
        let m = b.len();
        let total = m.pow(n as u32);
        (0..total)
            .map(|code| coords(m, n, code).into_iter().rev().collect::<Vec<_>>())
            .filter(|t| is_morphism(cat, a, b, t))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    #[test]
    fn matches_filtered_function_space() {
        let z2 = Monoid::cyclic(2);
        let cases = vec![
            (Category::Set, FinObject::set(3), FinObject::set(2)),
            (Category::Par, FinObject::pointed(2), FinObject::pointed(2)),
            (Category::Pos, FinObject::chain(3), FinObject::antichain(2)),
            (Category::Pos, FinObject::antichain(2), FinObject::chain(3)),
            (
                Category::Jsl,
                FinObject::jsl_chain(3),
                FinObject::jsl_chain(2),
            ),
            (
                Category::Gra,
                FinObject::graph(3, &[(0, 1), (1, 2)]).unwrap(),
                FinObject::graph(2, &[(0, 1)]).unwrap(),
            ),
            (
                Category::Vec { q: 2 },
                FinObject::vector(2, 2),
                FinObject::vector(2, 2),
            ),
            (
                Category::Vec { q: 3 },
                FinObject::vector(3, 1),
                FinObject::vector(3, 2),
            ),
            (
                Category::MSet(z2.clone()),
                FinObject::mset(&z2, 2, vec![0, 1, 1, 0]).unwrap(),
                FinObject::mset(&z2, 3, vec![0, 1, 2, 1, 0, 2]).unwrap(),
            ),
        ];
        for (cat, a, b) in cases {
            let fast = enumerate_hom(&cat, &a, &b, Budget::default()).unwrap();
            assert_eq!(fast, brute(&cat, &a, &b), "{}", cat.name());
        }
    }

    #[test]
    fn empty_source_has_one_map() {
        let e = FinObject::set(0);
        assert_eq!(
            enumerate_hom(&Category::Set, &e, &e, Budget::default())
                .unwrap()
                .len(),
            1
        );
        assert!(
            enumerate_hom(&Category::Set, &FinObject::set(1), &e, Budget::default())
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn budget_is_enforced() {
        let err = enumerate_hom(
            &Category::Set,
            &FinObject::set(8),
            &FinObject::set(8),
            Budget(1000),
        );
        assert!(err.unwrap_err().is_budget());
    }
}
