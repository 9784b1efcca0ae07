//! The dual functor `X ↦ [X, D]`, its action on morphisms, and the
//! double-dualization monad.

use crate::error::{Error, Result};
use crate::kernel::Budget;
use crate::plugins::{dualizing_object, internal_hom, Category, Elem, FinObject, HomObject};

/// `X* = [X, D]`.
pub fn dual(cat: &Category, x: &FinObject, budget: Budget) -> Result<HomObject> {
    internal_hom(cat, x, &dualizing_object(cat), budget)
}

/// `X*` and `X**`.
pub fn double_dual(
    cat: &Category,
    x: &FinObject,
    budget: Budget,
) -> Result<(HomObject, HomObject)> {
    let star = dual(cat, x, budget)?;
    let double = dual(cat, &star.object, budget)?;
    Ok((star, double))
}

/// `f*: B* -> A*`, `g ↦ g ∘ f`, for `f: A -> B`.
pub fn dual_on_morphism(a_star: &HomObject, b_star: &HomObject, f: &[Elem]) -> Result<Vec<Elem>> {
    b_star
        .maps
        .iter()
        .map(|g| {
            let gf: Vec<Elem> = f.iter().map(|&x| g[x]).collect();
            a_star
                .index_of(&gf)
                .ok_or_else(|| Error::Construction("precomposite is not in the dual".into()))
        })
        .collect()
}

/// Evaluation `η_A: A -> A**`, `a ↦ (g ↦ g(a))`.
pub fn eta(a_len: usize, a_star: &HomObject, a_double: &HomObject) -> Result<Vec<Elem>> {
    (0..a_len)
        .map(|x| {
            let ev: Vec<Elem> = a_star.maps.iter().map(|g| g[x]).collect();
            a_double.index_of(&ev).ok_or_else(|| {
                Error::Construction("evaluation is not a morphism of the dual".into())
            })
        })
        .collect()
}

/// Successive duals `X, X*, X**, ...` up to the requested depth.
#[derive(Clone, Debug)]
pub struct DualTower {
    pub base: FinObject,
    /// `levels[k]` is the `(k+1)`-fold dual.
    pub levels: Vec<HomObject>,
}

impl DualTower {
    pub fn new(cat: &Category, x: &FinObject, depth: usize, budget: Budget) -> Result<Self> {
        let mut levels: Vec<HomObject> = Vec::with_capacity(depth);
        for _ in 0..depth {
            let prev = levels.last().map_or(x, |h| &h.object);
            let next = dual(cat, prev, budget)?;
            levels.push(next);
        }
        Ok(DualTower {
            base: x.clone(),
            levels,
        })
    }

    /// The `k`-fold dual as an object.
    pub fn object(&self, k: usize) -> &FinObject {
        if k == 0 {
            &self.base
        } else {
            &self.levels[k - 1].object
        }
    }

    /// `η` at the `k`-fold dual: level `k` to level `k + 2`.
    pub fn eta_at(&self, k: usize) -> Result<Vec<Elem>> {
        eta(self.object(k).len(), &self.levels[k], &self.levels[k + 1])
    }

    /// Dual of a map from level `i` to level `j`: level `j + 1` to level `i + 1`.
    pub fn dual_of(&self, i: usize, j: usize, f: &[Elem]) -> Result<Vec<Elem>> {
        dual_on_morphism(&self.levels[i], &self.levels[j], f)
    }

    /// `μ_X = (η_{X*})*: X**** -> X**`.
    pub fn mu(&self) -> Result<Vec<Elem>> {
        let eta_star = self.eta_at(1)?;
        self.dual_of(1, 3, &eta_star)
    }
}

/// Result of checking the monad laws of `((-)**, η, μ)` on one object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualMonadLaws {
    pub left_unit: bool,
    pub right_unit: bool,
    /// `None` when the six-fold dual is out of budget.
    pub associativity: Option<bool>,
}

/// Unit laws need the four-fold dual, associativity the six-fold dual.
pub fn check_double_dual_monad(
    cat: &Category,
    x: &FinObject,
    budget: Budget,
) -> Result<DualMonadLaws> {
    let tower = DualTower::new(cat, x, 4, budget)?;
    let mu = tower.mu()?;
    let dd_len = tower.object(2).len();
    // μ ∘ η_{X**} = id
    let eta_dd = tower.eta_at(2)?;
    let left_unit = (0..dd_len).all(|u| mu[eta_dd[u]] == u);
    // μ ∘ (η_X)** = id
    let eta_x = tower.eta_at(0)?;
    let eta_x_star = tower.dual_of(0, 2, &eta_x)?;
    let eta_x_dd = tower.dual_of(3, 1, &eta_x_star)?;
    let right_unit = (0..dd_len).all(|u| mu[eta_x_dd[u]] == u);
    let associativity = match DualTower::new(cat, x, 6, budget) {
        Ok(t6) => {
            // μ ∘ μ_{X**} = μ ∘ (μ_X)**
            let inner = DualTower {
                base: t6.object(2).clone(),
                levels: t6.levels[2..].to_vec(),
            };
            let mu_dd = inner.mu()?;
            let mu_star = t6.dual_of(4, 2, &mu)?;
            let mu_double = t6.dual_of(3, 5, &mu_star)?;
            let n = t6.object(6).len();
            Some((0..n).all(|w| mu[mu_dd[w]] == mu[mu_double[w]]))
        }
        Err(e) if e.is_budget() => None,
        Err(e) => return Err(e),
    };
    Ok(DualMonadLaws {
        left_unit,
        right_unit,
        associativity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_double_dual_acts_by_preimages() {
        // f**(U) = {R ⊆ Y | f⁻¹(R) ∈ U}
        let cat = Category::Set;
        let b = Budget::default();
        let x = FinObject::set(2);
        let y = FinObject::set(3);
        let f = [2, 0];
        let (xs, xd) = double_dual(&cat, &x, b).unwrap();
        let (ys, yd) = double_dual(&cat, &y, b).unwrap();
        let f_star = dual_on_morphism(&xs, &ys, &f).unwrap();
        let f_dd = dual_on_morphism(&yd, &xd, &f_star).unwrap();
        let as_mask = |g: &[Elem]| {
            g.iter()
                .enumerate()
                .filter(|(_, &v)| v == 1)
                .fold(0, |m, (i, _)| m | 1 << i)
        };
        for (u_idx, u) in xd.maps.iter().enumerate() {
            let in_u: Vec<usize> = xs
                .maps
                .iter()
                .zip(u)
                .filter(|(_, &v)| v == 1)
                .map(|(g, _)| as_mask(g))
                .collect();
            let image = &yd.maps[f_dd[u_idx]];
            for (r, g) in ys.maps.iter().enumerate() {
                let mask_r = as_mask(g);
                let pre = (0..2)
                    .filter(|&i| mask_r >> f[i] & 1 == 1)
                    .fold(0, |m, i| m | 1 << i);
                assert_eq!(image[r] == 1, in_u.contains(&pre));
            }
        }
    }

    #[test]
    fn eta_is_injective_on_small_sets() {
        let cat = Category::Set;
        for n in 0..4 {
            let x = FinObject::set(n);
            let (s, d) = double_dual(&cat, &x, Budget::default()).unwrap();
            let e = eta(n, &s, &d).unwrap();
            let mut sorted = e.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), n);
        }
    }

    #[test]
    fn double_dual_of_vector_space_is_iso() {
        let cat = Category::Vec { q: 3 };
        let x = FinObject::vector(3, 2);
        let (s, d) = double_dual(&cat, &x, Budget::default()).unwrap();
        let e = eta(x.len(), &s, &d).unwrap();
        assert_eq!(d.len(), 9);
        let mut sorted = e.clone();
        sorted.sort();
        assert_eq!(sorted, (0..9).collect::<Vec<_>>());
    }

    #[test]
    fn double_dual_laws_on_small_objects() {
        let b = Budget(2_000_000);
        let laws =
            check_double_dual_monad(&Category::Vec { q: 2 }, &FinObject::vector(2, 1), b).unwrap();
        assert_eq!(
            laws,
            DualMonadLaws {
                left_unit: true,
                right_unit: true,
                associativity: Some(true)
            }
        );
        let laws = check_double_dual_monad(&Category::Set, &FinObject::set(1), b).unwrap();
        assert!(laws.left_unit && laws.right_unit);
    }
}
