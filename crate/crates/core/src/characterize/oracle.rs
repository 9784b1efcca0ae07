use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::collection::{all_subsets, is_ultrafilter, splits_complements, CollectionOfSubsets};
use super::view::{characterize_collection, kvec_homogeneous_predicate, CollectionView};
use crate::codensity::{
    available_constructions, codensity_by_limit, codensity_by_smonad, compare_instances, construct,
    Construction, LimitMode, MonadInstance, Setting,
};
use crate::dualization::double_dual;
use crate::dultrafilter::{monad_by_intersection, Ambient, AmbientKind};
use crate::error::{Error, Result};
use crate::kernel::{enumerate_hom, Budget};
use crate::plugins::{
    dualizing_object, is_morphism, BitSet, Category, Elem, FinObject, Monoid, Subcategory,
};

/// `TX` by the construction that embeds it into collections: the double
/// dual where the internal hom exists, the product monad otherwise.
pub fn embedded_instance(setting: &Setting, x: &FinObject) -> Result<MonadInstance> {
    match setting.category {
        Category::Top | Category::Top0 => codensity_by_smonad(setting, x),
        _ => monad_by_intersection(setting, x),
    }
}

/// Predicate versus computed `TX`, element for element, on the ambient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleAgreement {
    pub ambient: usize,
    pub accepted: usize,
    pub computed: usize,
    /// The maps into `D` cut out exactly the expected subsets.
    pub dual_matches: bool,
    /// Elements of `TX` the predicate rejects.
    pub rejected: Vec<String>,
    /// Accepted elements missing from `TX`.
    pub missing: Vec<String>,
}

impl OracleAgreement {
    pub fn is_match(&self) -> bool {
        self.dual_matches && self.rejected.is_empty() && self.missing.is_empty()
    }
}

fn render(view: Option<&CollectionView>, table: &[Elem]) -> String {
    match view {
        Some(v) => v.collection(table).to_string(),
        None => format!("{table:?}"),
    }
}

/// Runs the closed-form predicate over every element of the ambient and
/// compares the accepted ones with the elements of `TX`.
pub fn oracle_agreement(setting: &Setting, inst: &MonadInstance) -> Result<OracleAgreement> {
    let cat = &setting.category;
    let emb = inst
        .embedding
        .as_ref()
        .ok_or_else(|| Error::Input("the characterization needs an embedded instance".into()))?;
    let ambient = &emb.ambient;
    let view = match cat {
        Category::Vec { .. } => None,
        _ => Some(CollectionView::new(cat, inst.base(), &ambient.probes)?),
    };
    let computed: HashSet<Elem> = emb.map.iter().copied().collect();
    let mut out = OracleAgreement {
        ambient: ambient.len(),
        computed: computed.len(),
        dual_matches: view.as_ref().is_none_or(CollectionView::dual_matches),
        ..Default::default()
    };
    for (w, table) in ambient.elements.iter().enumerate() {
        let accepted = match &view {
            Some(v) => characterize_collection(v, &v.collection(table)).accepted,
            None => super::characterize_element(cat, inst.base(), &ambient.probes, table)?.accepted,
        };
        out.accepted += usize::from(accepted);
        match (accepted, computed.contains(&w)) {
            (false, true) => out.rejected.push(render(view.as_ref(), table)),
            (true, false) => out.missing.push(render(view.as_ref(), table)),
            _ => {}
        }
    }
    Ok(out)
}

/// `E_X ∩ (F × G) ≠ ∅` for every `F ∈ f`, `G ∈ g`.
pub fn graph_edge_predicate(
    x: &FinObject,
    f: &CollectionOfSubsets,
    g: &CollectionOfSubsets,
) -> bool {
    relation_predicate(x, 0, &[f, g])
}

/// Every product of members meets relation `k` of `x`.
pub fn relation_predicate(x: &FinObject, k: usize, colls: &[&CollectionOfSubsets]) -> bool {
    let tuples = x.relation(k).tuples();
    let lists: Vec<Vec<&BitSet>> = colls.iter().map(|c| c.members.iter().collect()).collect();
    let mut pick = vec![0usize; lists.len()];
    if lists.iter().any(Vec::is_empty) {
        return true;
    }
    loop {
        let hit = tuples.iter().any(|t| {
            t.iter()
                .zip(&pick)
                .enumerate()
                .all(|(i, (&v, &p))| lists[i][p].contains(v))
        });
        if !hit {
            return false;
        }
        let mut i = 0;
        while i < pick.len() {
            pick[i] += 1;
            if pick[i] < lists[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
        if i == pick.len() {
            return true;
        }
    }
}

/// `mU = {R | mR ∈ U}` with `mR = {x | mx ∈ R}`.
pub fn mset_action_predicate(
    monoid: &Monoid,
    x: &FinObject,
    u: &CollectionOfSubsets,
    m: usize,
) -> CollectionOfSubsets {
    let n = x.len();
    debug_assert!(m < monoid.len());
    let members: Vec<BitSet> = all_subsets(n)
        .filter(|r| {
            u.contains(&BitSet::from_iter(
                n,
                (0..n).filter(|&p| r.contains(x.act(m, p).unwrap())),
            ))
        })
        .collect();
    CollectionOfSubsets::new(u.base.clone(), members)
}

fn tuples_of(n: usize, arity: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| (0..n).map(move |v| [t.clone(), vec![v]].concat()))
            .collect();
    }
    out
}

/// Structure of `TX` against its closed-form description on collections.
/// Relations are compared with the limit construction.
pub fn structure_agreement(setting: &Setting, inst: &MonadInstance) -> Result<Vec<String>> {
    let cat = &setting.category;
    if let Category::Vec { .. } | Category::Set = cat {
        return Ok(Vec::new());
    }
    let emb = inst.embedding.as_ref().expect("embedded instance");
    let x = inst.base();
    let view = CollectionView::new(cat, x, &emb.ambient.probes)?;
    let colls: Vec<CollectionOfSubsets> = (0..inst.len())
        .map(|u| view.collection(&emb.ambient.elements[emb.map[u]]))
        .collect();
    let mut bad = Vec::new();
    match cat {
        Category::Par => {
            let base = inst.object.base_point().unwrap();
            if !colls[base].is_empty() {
                bad.push(format!("base point of TX is {}", colls[base]));
            }
        }
        Category::Pos | Category::Jsl => {
            for (u, cu) in colls.iter().enumerate() {
                for (v, cv) in colls.iter().enumerate() {
                    if inst.object.le(u, v) != cu.members.is_subset(&cv.members) {
                        bad.push(format!("order of TX at {cu} and {cv} is not inclusion"));
                    }
                }
            }
        }
        Category::Top | Category::Top0 => {
            let opens: Vec<BitSet> = x.opens();
            for (u, cu) in colls.iter().enumerate() {
                for (v, cv) in colls.iter().enumerate() {
                    let expected = opens.iter().all(|g| !cu.contains(g) || cv.contains(g));
                    if inst.object.le(u, v) != expected {
                        bad.push(format!(
                            "specialization of TX at {cu} and {cv} differs from the basic opens"
                        ));
                    }
                }
            }
        }
        Category::MSet(m) => {
            for (u, cu) in colls.iter().enumerate() {
                for a in 0..m.len() {
                    let expected = mset_action_predicate(m, x, cu, a);
                    let got = &colls[inst.object.act(a, u).unwrap()];
                    if !is_ultrafilter(&expected) || *got != expected {
                        bad.push(format!(
                            "action of {} on {cu} gives {got}, expected {expected}",
                            m.elements()[a]
                        ));
                    }
                }
            }
        }
        Category::Gra | Category::SigmaStr(_) => {
            let limit = codensity_by_limit(setting, x, LimitMode::Auto)?;
            let cmp = compare_instances(inst, &limit);
            let Some(phi) = cmp.map.filter(|_| cmp.mismatches.is_empty()) else {
                bad.push("intersection and limit constructions do not match".into());
                return Ok(bad);
            };
            for k in 0..x.relations().len() {
                let arity = x.relation(k).arity();
                let rel = limit.object.relation(k);
                for t in tuples_of(inst.len(), arity) {
                    let args: Vec<&CollectionOfSubsets> = t.iter().map(|&u| &colls[u]).collect();
                    let mapped: Vec<Elem> = t.iter().map(|&u| phi[u]).collect();
                    if relation_predicate(x, k, &args) != rel.contains(&mapped) {
                        let shown: Vec<String> = args.iter().map(|c| c.to_string()).collect();
                        bad.push(format!(
                            "relation {k} at ({}) differs from the limit",
                            shown.join(", ")
                        ));
                    }
                }
            }
        }
        Category::Set | Category::Vec { .. } => {}
    }
    Ok(bad)
}

/// For posets and semilattices: `ψ_a(U)` is the largest `t` with
/// `a⁻¹(↑t) ∈ U` (the bottom when there is none, for semilattices).
pub fn psi_description_check(setting: &Setting, inst: &MonadInstance) -> Result<Vec<String>> {
    let cat = &setting.category;
    if !matches!(cat, Category::Pos | Category::Jsl) {
        return Ok(Vec::new());
    }
    let emb = inst.embedding.as_ref().expect("embedded instance");
    let x = inst.base();
    let n = x.len();
    let view = CollectionView::new(cat, x, &emb.ambient.probes)?;
    let mut bad = Vec::new();
    for (e, entry) in inst.coslice.entries.iter().enumerate() {
        let a_obj = inst.coslice.target(e);
        for u in 0..inst.len() {
            let coll = view.collection(&emb.ambient.elements[emb.map[u]]);
            let hits: Vec<Elem> = (0..a_obj.len())
                .filter(|&t| {
                    coll.contains(&BitSet::from_iter(
                        n,
                        (0..n).filter(|&p| a_obj.le(t, entry.map[p])),
                    ))
                })
                .collect();
            let largest = hits
                .iter()
                .copied()
                .find(|&t| hits.iter().all(|&s| a_obj.le(s, t)));
            let expected = match (largest, cat) {
                (Some(t), _) => Some(t),
                (None, Category::Jsl) if hits.is_empty() => a_obj.base_point(),
                _ => None,
            };
            if expected != Some(inst.cone[e][u]) {
                bad.push(format!(
                    "entry {e} at {coll}: cone gives {}, description gives {expected:?}",
                    inst.cone[e][u]
                ));
            }
        }
    }
    Ok(bad)
}

/// The monad for the one-member subcategory `{F_q}` against homogeneous
/// functions on the dual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousAgreement {
    pub homogeneous: usize,
    pub linear: usize,
    pub computed: usize,
    pub limit: usize,
    pub matches: bool,
}

pub fn homogeneous_agreement(
    q: usize,
    x: &FinObject,
    budget: Budget,
) -> Result<HomogeneousAgreement> {
    let cat = Category::Vec { q };
    let setting = Setting::new(
        Subcategory::from_objects(&cat, vec![FinObject::vector(q, 1)])?,
        budget,
    );
    let inst = codensity_by_smonad(&setting, x)?;
    let emb = inst.embedding.as_ref().unwrap();
    let probes = &emb.ambient.probes;
    let computed: BTreeSet<Elem> = emb.map.iter().copied().collect();
    let mut accepted = BTreeSet::new();
    for (w, h) in emb.ambient.elements.iter().enumerate() {
        if kvec_homogeneous_predicate(q, probes, h)? {
            accepted.insert(w);
        }
    }
    let (_, double) = double_dual(&cat, x, budget)?;
    let limit = codensity_by_limit(&setting, x, LimitMode::Auto)?.len();
    Ok(HomogeneousAgreement {
        homogeneous: accepted.len(),
        linear: double.len(),
        computed: computed.len(),
        limit,
        matches: accepted == computed && limit == computed.len(),
    })
}

/// `TX` for sets over the sets of size at most two, against two readings
/// of "collections of nonempty subsets containing `Y` or its complement".
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmallSetsReading {
    pub size: usize,
    pub computed: usize,
    /// Exactly one of `Y` and its complement.
    pub exclusive: usize,
    /// At least one of `Y` and its complement.
    pub inclusive: usize,
    pub exclusive_matches: bool,
    pub inclusive_matches: bool,
    /// Members of each element of `TX`, as sorted bitmasks.
    pub collections: Vec<Vec<u64>>,
}

pub fn small_sets_reading(n: usize, budget: Budget) -> Result<SmallSetsReading> {
    let cat = Category::Set;
    let setting = Setting::skeleton(&cat, 2, budget)?;
    let x = FinObject::set(n);
    let inst = monad_by_intersection(&setting, &x)?;
    let limit = codensity_by_limit(&setting, &x, LimitMode::Full)?;
    if !compare_instances(&inst, &limit).is_match() {
        return Err(Error::Construction(
            "the limit and the intersection differ on small sets".into(),
        ));
    }
    let emb = inst.embedding.as_ref().unwrap();
    let view = CollectionView::new(&cat, &x, &emb.ambient.probes)?;
    let computed: BTreeSet<Vec<u64>> = emb
        .map
        .iter()
        .map(|&w| {
            view.collection(&emb.ambient.elements[w])
                .members
                .iter()
                .map(mask)
                .collect()
        })
        .collect();
    let everything = Ambient::build(&cat, AmbientKind::DoubleDual, &x, budget)?;
    let reading = |inclusive: bool| -> BTreeSet<Vec<u64>> {
        everything
            .elements
            .iter()
            .map(|t| view.collection(t))
            .filter(|c| splits_complements(c, inclusive))
            .map(|c| c.members.iter().map(mask).collect())
            .collect()
    };
    let (exclusive, inclusive) = (reading(false), reading(true));
    Ok(SmallSetsReading {
        size: n,
        computed: computed.len(),
        exclusive: exclusive.len(),
        inclusive: inclusive.len(),
        exclusive_matches: exclusive == computed,
        inclusive_matches: inclusive == computed,
        collections: computed.into_iter().collect(),
    })
}

fn mask(r: &BitSet) -> u64 {
    r.iter().fold(0, |m, x| m | 1 << x)
}

/// Injectivity of the unit on small objects and invertibility of the unit
/// of `T` on members.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UnitReport {
    pub objects: usize,
    pub members: usize,
    pub failures: Vec<String>,
}

pub fn eta_monic_and_unit_iso_suite(setting: &Setting, bound: usize) -> Result<UnitReport> {
    let cat = &setting.category;
    let mut out = UnitReport::default();
    let d = dualizing_object(cat);
    for x in crate::plugins::fp_objects_up_to(cat, bound, setting.budget)? {
        // η followed by the embedding into the double dual is evaluation,
        // so η is injective exactly when the maps into D separate points
        let probes = enumerate_hom(cat, &x, &d, setting.budget)?;
        let evaluations: HashSet<Vec<Elem>> = (0..x.len())
            .map(|p| probes.iter().map(|g| g[p]).collect())
            .collect();
        out.objects += 1;
        if evaluations.len() != x.len() {
            out.failures
                .push(format!("η is not injective on {}", describe(cat, &x)));
        }
    }
    let construction = available_constructions(cat)[0];
    for a in &setting.subcat.objects {
        out.members += 1;
        let inst = construct(setting, a, construction)?;
        let mut inverse = vec![usize::MAX; inst.len()];
        for (p, &u) in inst.unit.iter().enumerate() {
            inverse[u] = p;
        }
        let onto = inst.len() == a.len() && inverse.iter().all(|&p| p != usize::MAX);
        if !onto
            || !is_morphism(cat, a, &inst.object, &inst.unit)
            || !is_morphism(cat, &inst.object, a, &inverse)
        {
            out.failures.push(format!(
                "unit of T is not an isomorphism on member {}",
                describe(cat, a)
            ));
        }
    }
    Ok(out)
}

fn describe(cat: &Category, x: &FinObject) -> String {
    crate::io::object_to_json(cat, x).to_string()
}

/// The construction used for `TX` in characterization checks.
pub fn characterization_construction(cat: &Category) -> Construction {
    match cat {
        Category::Top | Category::Top0 => Construction::SMonad,
        _ => Construction::DoubleDual,
    }
}
