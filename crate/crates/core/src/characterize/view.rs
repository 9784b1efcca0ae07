use std::collections::BTreeSet;

use super::collection::{
    all_subsets, is_prime_filter_in, is_prime_upward_collection_in, is_ultrafilter,
    CollectionOfSubsets,
};
use crate::error::{Error, Result};
use crate::plugins::{BitSet, Carrier, Category, Elem, FinObject};

/// Outcome of a closed-form predicate on one element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub accepted: bool,
    pub reason: String,
}

impl Verdict {
    fn new(accepted: bool, yes: &str, no: &str) -> Self {
        Verdict {
            accepted,
            reason: if accepted { yes } else { no }.to_string(),
        }
    }
}

/// Whether a value of the dualizing object counts as membership.
fn marks(cat: &Category, d: Elem) -> bool {
    match cat {
        Category::MSet(m) => d >> m.identity() & 1 == 1,
        _ => d == 1,
    }
}

/// Points a collection is over, and the subsets the maps into the dualizing
/// object can cut out, described directly from the structure of `x`.
pub fn dual_universe(cat: &Category, x: &FinObject) -> Result<(Vec<Elem>, Vec<BitSet>)> {
    let n = x.len();
    let everything = || (0..n).collect::<Vec<_>>();
    let up_sets = |points: &[Elem]| -> Vec<BitSet> {
        all_subsets(points.len())
            .filter(|r| {
                r.iter().all(|i| {
                    (0..points.len()).all(|j| !x.le(points[i], points[j]) || r.contains(j))
                })
            })
            .collect()
    };
    match cat {
        Category::Set
        | Category::Gra
        | Category::SigmaStr(_)
        | Category::MSet(_)
        | Category::Top => Ok((everything(), all_subsets(n).collect())),
        Category::Par => {
            let base = x.base_point().expect("pointed set");
            let points: Vec<Elem> = (0..n).filter(|&p| p != base).collect();
            let universe = all_subsets(points.len()).collect();
            Ok((points, universe))
        }
        Category::Pos | Category::Top0 => {
            let points = everything();
            let universe = up_sets(&points);
            Ok((points, universe))
        }
        Category::Jsl => {
            let points = everything();
            let bottom = x.base_point().expect("semilattice");
            // up-sets whose complement contains the bottom and is closed under joins
            let universe = up_sets(&points)
                .into_iter()
                .filter(|r| {
                    !r.contains(bottom)
                        && (0..n).all(|a| {
                            (0..n).all(|b| {
                                r.contains(a) || r.contains(b) || !r.contains(x.join(a, b).unwrap())
                            })
                        })
                })
                .collect();
            Ok((points, universe))
        }
        Category::Vec { .. } => Err(Error::Unsupported {
            category: cat.name().into(),
            op: "collections of subsets".into(),
        }),
    }
}

/// Renders tables over the maps `x -> D` as collections of subsets.
#[derive(Clone, Debug)]
pub struct CollectionView {
    pub category: Category,
    pub base: Carrier,
    pub points: Vec<Elem>,
    /// The subset cut out by each map, in probe order.
    pub subsets: Vec<BitSet>,
    pub universe: Vec<BitSet>,
}

impl CollectionView {
    pub fn new(cat: &Category, x: &FinObject, probes: &[Vec<Elem>]) -> Result<Self> {
        let (points, universe) = dual_universe(cat, x)?;
        let width = points.len();
        let subsets = probes
            .iter()
            .map(|g| BitSet::from_iter(width, (0..width).filter(|&i| marks(cat, g[points[i]]))))
            .collect();
        let base = Carrier::Named(points.iter().map(|&p| x.label(p)).collect());
        Ok(CollectionView {
            category: cat.clone(),
            base,
            points,
            subsets,
            universe,
        })
    }

    /// Whether the maps into the dualizing object cut out exactly the
    /// subsets of the universe, each once.
    pub fn dual_matches(&self) -> bool {
        let cut: BTreeSet<&BitSet> = self.subsets.iter().collect();
        let expected: BTreeSet<&BitSet> = self.universe.iter().collect();
        cut.len() == self.subsets.len() && cut == expected
    }

    /// `{subset(g) | u(g) marks membership}`.
    pub fn collection(&self, u: &[Elem]) -> CollectionOfSubsets {
        let members = self
            .subsets
            .iter()
            .zip(u)
            .filter(|(_, &v)| marks(&self.category, v))
            .map(|(r, _)| r.clone());
        CollectionOfSubsets::new(self.base.clone(), members)
    }
}

/// The closed-form description of the elements of `TX` among collections.
pub fn characterize_collection(view: &CollectionView, u: &CollectionOfSubsets) -> Verdict {
    match &view.category {
        Category::Set
        | Category::Gra
        | Category::SigmaStr(_)
        | Category::MSet(_)
        | Category::Top => Verdict::new(is_ultrafilter(u), "ultrafilter", "not an ultrafilter"),
        Category::Par if u.is_empty() => Verdict::new(true, "base point", ""),
        Category::Par => Verdict::new(
            is_ultrafilter(u),
            "ultrafilter on the ordinary elements",
            "not an ultrafilter",
        ),
        Category::Pos => Verdict::new(
            is_prime_filter_in(u, &view.universe),
            "prime filter of up-sets",
            "not a prime filter of up-sets",
        ),
        Category::Top0 => Verdict::new(
            is_prime_filter_in(u, &view.universe),
            "prime filter of open sets",
            "not a prime filter of open sets",
        ),
        Category::Jsl => Verdict::new(
            is_prime_upward_collection_in(u, &view.universe),
            "prime upward collection of prime up-sets",
            "not a prime upward collection of prime up-sets",
        ),
        Category::Vec { .. } => unreachable!("vector spaces have no collection view"),
    }
}

/// Verdict for an element of `X**` (or of `SX` for spaces), given as a table
/// over the maps `x -> D` listed in `probes`.
pub fn characterize_element(
    cat: &Category,
    x: &FinObject,
    probes: &[Vec<Elem>],
    u: &[Elem],
) -> Result<Verdict> {
    if let Category::Vec { q } = cat {
        return Ok(Verdict::new(
            is_linear_on(*q, probes, u)?,
            "vector of the double dual",
            "not linear on the dual",
        ));
    }
    let view = CollectionView::new(cat, x, probes)?;
    Ok(characterize_collection(&view, &view.collection(u)))
}

fn probe_lookup(probes: &[Vec<Elem>]) -> std::collections::HashMap<&[Elem], usize> {
    probes
        .iter()
        .enumerate()
        .map(|(i, g)| (g.as_slice(), i))
        .collect()
}

/// `h(λg + g') = λh(g) + h(g')` on the functionals listed in `probes`.
fn is_linear_on(q: usize, probes: &[Vec<Elem>], h: &[Elem]) -> Result<bool> {
    let index = probe_lookup(probes);
    let find = |g: &[Elem]| {
        index
            .get(g)
            .copied()
            .ok_or_else(|| Error::Construction("dual is not closed".into()))
    };
    for (i, g) in probes.iter().enumerate() {
        for (j, k) in probes.iter().enumerate() {
            for l in 0..q {
                let combo: Vec<Elem> = g.iter().zip(k).map(|(&a, &b)| (l * a + b) % q).collect();
                if h[find(&combo)?] != (l * h[i] + h[j]) % q {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `h(λg) = λh(g)` for every scalar and every functional in `probes`.
pub fn kvec_homogeneous_predicate(q: usize, probes: &[Vec<Elem>], h: &[Elem]) -> Result<bool> {
    let index = probe_lookup(probes);
    for (i, g) in probes.iter().enumerate() {
        for l in 0..q {
            let scaled: Vec<Elem> = g.iter().map(|&a| l * a % q).collect();
            let j = index
                .get(scaled.as_slice())
                .ok_or_else(|| Error::Construction("dual is not closed".into()))?;
            if h[*j] != l * h[i] % q {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// One line per element of `TX`: the collection it corresponds to (marked
/// when it is principal), its values on the dual for vector spaces, or its
/// cone values when the instance has no embedding.
pub fn render_elements(inst: &crate::codensity::MonadInstance) -> Vec<String> {
    let x = inst.base();
    let principal = |u: Elem| inst.unit.iter().position(|&v| v == u);
    let Some(emb) = &inst.embedding else {
        return (0..inst.len())
            .map(|u| match principal(u) {
                Some(p) => format!("principal at {}", x.label(p)),
                None if inst.cone.len() <= 12 => format!("cone values {:?}", inst.cone_vector(u)),
                None => format!("limit element over {} coslice entries", inst.cone.len()),
            })
            .collect();
    };
    let view = match inst.category {
        Category::Vec { .. } => None,
        _ => CollectionView::new(&inst.category, x, &emb.ambient.probes).ok(),
    };
    (0..inst.len())
        .map(|u| {
            let table = &emb.ambient.elements[emb.map[u]];
            let body = match &view {
                Some(v) => v.collection(table).to_string(),
                None => format!("values on the dual {table:?}"),
            };
            match principal(u) {
                Some(p) if x.base_point() == Some(p) && matches!(inst.category, Category::Par) => {
                    format!("base point {body}")
                }
                Some(p) => format!("principal at {} {body}", x.label(p)),
                None => body,
            }
        })
        .collect()
}
