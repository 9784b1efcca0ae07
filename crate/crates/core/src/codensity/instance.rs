use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::coslice::{Coslice, MemberHoms};
use crate::dultrafilter::{Ambient, TargetProbes};
use crate::error::{Error, Result};
use crate::kernel::Budget;
use crate::plugins::{is_morphism, Category, Elem, FinObject, Subcategory};

/// Largest `|TX|` for which the multiplication is attempted.
pub const DEFAULT_MULT_CAP: usize = 8;

/// Which of the three constructions produced an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    #[serde(rename = "dual2")]
    DoubleDual,
    #[serde(rename = "limitformula")]
    LimitFormula,
    #[serde(rename = "smonad")]
    SMonad,
}

impl Construction {
    pub const ALL: [Construction; 3] = [
        Construction::DoubleDual,
        Construction::LimitFormula,
        Construction::SMonad,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Construction::DoubleDual => "dual2",
            Construction::LimitFormula => "limitformula",
            Construction::SMonad => "smonad",
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A subcategory together with the budget and the per-member data shared by
/// every object processed against it.
#[derive(Debug)]
pub struct Setting {
    pub category: Category,
    pub subcat: Arc<Subcategory>,
    pub budget: Budget,
    pub mult_cap: usize,
    targets: Mutex<Option<Arc<Vec<TargetProbes>>>>,
    homs: Mutex<Option<Arc<MemberHoms>>>,
}

impl Setting {
    pub fn new(subcat: Subcategory, budget: Budget) -> Self {
        Setting {
            category: subcat.category.clone(),
            subcat: Arc::new(subcat),
            budget,
            mult_cap: DEFAULT_MULT_CAP,
            targets: Mutex::new(None),
            homs: Mutex::new(None),
        }
    }

    /// All isomorphism classes up to `bound`.
    pub fn skeleton(cat: &Category, bound: usize, budget: Budget) -> Result<Self> {
        Ok(Self::new(
            Subcategory::skeleton(cat, bound, budget)?,
            budget,
        ))
    }

    /// Notices about bounds below which the construction is known to be coarser.
    pub fn warnings(&self) -> Vec<String> {
        let min = self.category.recommended_min_bound();
        match self.subcat.bound {
            Some(b) if b < min => vec![format!(
                "fp bound {b} is below the recommended minimum {min} for {}",
                self.category.name()
            )],
            _ => Vec::new(),
        }
    }

    pub(crate) fn target_probes(&self) -> Result<Arc<Vec<TargetProbes>>> {
        let mut guard = self.targets.lock().unwrap();
        if let Some(t) = guard.as_ref() {
            return Ok(t.clone());
        }
        let built: Vec<TargetProbes> = self
            .subcat
            .objects
            .iter()
            .map(|a| TargetProbes::new(&self.category, a, self.budget))
            .collect::<Result<_>>()?;
        let built = Arc::new(built);
        *guard = Some(built.clone());
        Ok(built)
    }

    /// Morphisms between every pair of members, computed once.
    pub fn member_homs(&self) -> Result<Arc<MemberHoms>> {
        let mut guard = self.homs.lock().unwrap();
        if let Some(h) = guard.as_ref() {
            return Ok(h.clone());
        }
        let built = Arc::new(MemberHoms::build(&self.subcat, self.budget)?);
        *guard = Some(built.clone());
        Ok(built)
    }

    pub fn coslice(&self, x: &FinObject) -> Result<Arc<Coslice>> {
        Ok(Arc::new(Coslice::build(
            self.subcat.clone(),
            Arc::new(x.clone()),
            self.budget,
        )?))
    }
}

/// Looks elements up by their cone values, using a small separating set of
/// coslice entries.
#[derive(Clone, Debug)]
struct ConeIndex {
    separators: Vec<usize>,
    lookup: HashMap<Vec<Elem>, Elem>,
    injective: bool,
}

impl ConeIndex {
    fn build(cone: &[Vec<Elem>], n: usize) -> Self {
        let mut class = vec![0usize; n];
        let mut classes = usize::from(n > 0);
        let mut separators = Vec::new();
        for (e, leg) in cone.iter().enumerate() {
            if classes == n {
                break;
            }
            let mut fresh: HashMap<(usize, Elem), usize> = HashMap::new();
            let next: Vec<usize> = (0..n)
                .map(|u| {
                    let k = fresh.len();
                    *fresh.entry((class[u], leg[u])).or_insert(k)
                })
                .collect();
            if fresh.len() > classes {
                classes = fresh.len();
                class = next;
                separators.push(e);
            }
        }
        let mut lookup = HashMap::new();
        for u in 0..n {
            let key: Vec<Elem> = separators.iter().map(|&e| cone[e][u]).collect();
            lookup.entry(key).or_insert(u);
        }
        ConeIndex {
            separators,
            lookup,
            injective: classes == n,
        }
    }
}

/// Ambient object of the intersection-style constructions and the embedding
/// of `TX` into it.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub ambient: Arc<Ambient>,
    pub map: Vec<Elem>,
}

/// `TX` for one object `X`, with its limit cone over the coslice and unit.
#[derive(Clone, Debug)]
pub struct MonadInstance {
    pub construction: Construction,
    pub category: Category,
    pub coslice: Arc<Coslice>,
    pub object: FinObject,
    /// `cone[e]` is `ψ` at coslice entry `e`, as a table on `TX`.
    pub cone: Vec<Vec<Elem>>,
    pub unit: Vec<Elem>,
    pub embedding: Option<Embedding>,
    index: ConeIndex,
}

impl MonadInstance {
    pub(crate) fn assemble(
        construction: Construction,
        coslice: Arc<Coslice>,
        object: FinObject,
        cone: Vec<Vec<Elem>>,
        embedding: Option<Embedding>,
    ) -> Result<Self> {
        let index = ConeIndex::build(&cone, object.len());
        let mut inst = MonadInstance {
            construction,
            category: coslice.subcat.category.clone(),
            coslice,
            object,
            cone,
            unit: Vec::new(),
            embedding,
            index,
        };
        let unit = (0..inst.base().len())
            .map(|x| {
                inst.element_from(|e| inst.coslice.entries[e].map[x])
                    .ok_or_else(|| {
                        Error::Construction(format!(
                            "no element of TX restricts to point {x} on the cone"
                        ))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        inst.unit = unit;
        Ok(inst)
    }

    pub fn base(&self) -> &Arc<FinObject> {
        &self.coslice.base
    }

    pub fn subcat(&self) -> &Arc<Subcategory> {
        &self.coslice.subcat
    }

    pub fn len(&self) -> usize {
        self.object.len()
    }

    pub fn is_empty(&self) -> bool {
        self.object.is_empty()
    }

    /// Whether the legs of the cone separate the elements of `TX`.
    pub fn cone_is_jointly_injective(&self) -> bool {
        self.index.injective
    }

    /// The element whose cone values are `value(e)` at every entry `e`.
    pub fn element_from(&self, value: impl Fn(usize) -> Elem) -> Option<Elem> {
        let key: Vec<Elem> = self.index.separators.iter().map(|&e| value(e)).collect();
        let u = *self.index.lookup.get(&key)?;
        (0..self.cone.len())
            .all(|e| self.cone[e][u] == value(e))
            .then_some(u)
    }

    /// Cone values of `u`.
    pub fn cone_vector(&self, u: Elem) -> Vec<Elem> {
        self.cone.iter().map(|leg| leg[u]).collect()
    }

    /// `μ: T(TX) -> TX` from the instance `outer` built on `TX`.
    pub fn multiplication(&self, outer: &MonadInstance) -> Result<Vec<Elem>> {
        let id: Vec<Elem> = (0..self.len()).collect();
        self.multiplication_along(outer, &id)
    }

    /// `μ ∘ T(g)` for an isomorphism `g: Y -> TX`, where `outer` is built on `Y`.
    pub fn multiplication_along(&self, outer: &MonadInstance, g: &[Elem]) -> Result<Vec<Elem>> {
        let mut buf = Vec::new();
        let slots: Vec<usize> = self
            .coslice
            .entries
            .iter()
            .zip(&self.cone)
            .map(|(entry, psi)| {
                buf.clear();
                buf.extend(g.iter().map(|&y| psi[y]));
                outer.coslice.find(entry.object, &buf).ok_or_else(|| {
                    Error::Construction("a cone leg is not a morphism out of TX".into())
                })
            })
            .collect::<Result<_>>()?;
        (0..outer.len())
            .map(|w| {
                self.element_from(|e| outer.cone[slots[e]][w])
                    .ok_or_else(|| {
                        Error::Construction(format!(
                            "the multiplication triangles have no solution at {w}"
                        ))
                    })
            })
            .collect()
    }
}

/// `Tf: TY -> TZ` from `ψ_a ∘ Tf = ψ_{a∘f}`.
pub fn t_on_morphism(
    source: &MonadInstance,
    target: &MonadInstance,
    f: &[Elem],
) -> Result<Vec<Elem>> {
    let mut buf = Vec::new();
    let slots: Vec<usize> = target
        .coslice
        .entries
        .iter()
        .map(|entry| {
            buf.clear();
            buf.extend(f.iter().map(|&y| entry.map[y]));
            source.coslice.find(entry.object, &buf).ok_or_else(|| {
                Error::Construction("a composite is missing from the source coslice".into())
            })
        })
        .collect::<Result<_>>()?;
    (0..source.len())
        .map(|u| {
            target
                .element_from(|e| source.cone[slots[e]][u])
                .ok_or_else(|| {
                    Error::Construction(format!(
                        "not a subfunctor at this bound: element {u} has no image"
                    ))
                })
        })
        .collect()
}

/// `TX`, `TTX`, `TTTX` as far as the multiplication cap and budget allow.
#[derive(Clone, Debug)]
pub struct MonadTower {
    pub levels: Vec<MonadInstance>,
    /// Why the tower stops early.
    pub partial: Option<String>,
}

impl MonadTower {
    pub fn build(
        x: &FinObject,
        depth: usize,
        cap: usize,
        construct: impl Fn(&FinObject) -> Result<MonadInstance>,
    ) -> Result<Self> {
        let mut levels: Vec<MonadInstance> = vec![construct(x)?];
        let mut partial = None;
        while levels.len() < depth {
            let top = levels.last().unwrap();
            if top.len() > cap {
                partial = Some(format!(
                    "|T^{}X| = {} exceeds the multiplication cap {cap}",
                    levels.len(),
                    top.len()
                ));
                break;
            }
            match construct(&top.object) {
                Ok(next) => levels.push(next),
                Err(e) if e.is_budget() => {
                    partial = Some(format!("T^{}X is out of budget: {e}", levels.len() + 1));
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        Ok(MonadTower { levels, partial })
    }

    /// `μ` at `T^k X`.
    pub fn mu(&self, k: usize) -> Result<Vec<Elem>> {
        self.levels[k].multiplication(&self.levels[k + 1])
    }
}

/// Outcome of the monad-law checks on one tower; `None` means not reached.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LawCheck {
    pub unit_is_morphism: bool,
    pub cone_is_natural: bool,
    pub left_unit: Option<bool>,
    pub right_unit: Option<bool>,
    pub associativity: Option<bool>,
    pub mu_is_morphism: Option<bool>,
}

impl LawCheck {
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.unit_is_morphism {
            out.push("unit is not a morphism");
        }
        if !self.cone_is_natural {
            out.push("cone is not natural");
        }
        for (name, v) in [
            ("left unit law", self.left_unit),
            ("right unit law", self.right_unit),
            ("associativity", self.associativity),
            ("multiplication is not a morphism", self.mu_is_morphism),
        ] {
            if v == Some(false) {
                out.push(name);
            }
        }
        out
    }

    pub fn complete(&self) -> bool {
        self.associativity.is_some()
    }
}

/// Naturality of `ψ` along every connecting morphism between entries with a
/// common source: `h ∘ ψ_a = ψ_{h∘a}`. Checked on morphisms out of each
/// entry's target into every member.
pub fn cone_is_natural(inst: &MonadInstance, homs: Option<&MemberHoms>) -> bool {
    let Some(homs) = homs else {
        return true;
    };
    let mut buf = Vec::new();
    inst.coslice.entries.iter().enumerate().all(|(e, entry)| {
        (0..inst.subcat().len()).all(|j| {
            homs.get(entry.object, j).iter().all(|h| {
                buf.clear();
                buf.extend(entry.map.iter().map(|&x| h[x]));
                let Some(to) = inst.coslice.find(j, &buf) else {
                    return false;
                };
                (0..inst.len()).all(|u| h[inst.cone[e][u]] == inst.cone[to][u])
            })
        })
    })
}

/// Unit, associativity and structure checks on a tower.
pub fn check_laws(tower: &MonadTower, homs: Option<&MemberHoms>) -> Result<LawCheck> {
    let t = &tower.levels[0];
    let cat = &t.category;
    let mut out = LawCheck {
        unit_is_morphism: is_morphism(cat, t.base(), &t.object, &t.unit),
        cone_is_natural: cone_is_natural(t, homs),
        ..LawCheck::default()
    };
    if tower.levels.len() < 2 {
        return Ok(out);
    }
    let tt = &tower.levels[1];
    let mu = tower.mu(0)?;
    out.mu_is_morphism = Some(is_morphism(cat, &tt.object, &t.object, &mu));
    // μ ∘ η_TX = id
    out.left_unit = Some((0..t.len()).all(|u| mu[tt.unit[u]] == u));
    // μ ∘ T(η_X) = id
    let t_eta = t_on_morphism(t, tt, &t.unit)?;
    out.right_unit = Some((0..t.len()).all(|u| mu[t_eta[u]] == u));
    if tower.levels.len() < 3 {
        return Ok(out);
    }
    let ttt = &tower.levels[2];
    let mu_t = tower.mu(1)?;
    let t_mu = t_on_morphism(ttt, tt, &mu)?;
    out.associativity = Some((0..ttt.len()).all(|w| mu[mu_t[w]] == mu[t_mu[w]]));
    Ok(out)
}
