//! Brute-force oracles for hom enumeration, limits and derived subobjects,
//! written without the engine's own morphism checks.

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;

use codensity::codensity::{codensity_by_limit, construct, Construction, LimitMode, Setting};
use codensity::dualization::{double_dual, dual_on_morphism, eta};
use codensity::dultrafilter::{derived_subobject, Ambient, AmbientKind};
use codensity::kernel::{enumerate_hom, pullback, Budget};
use codensity::plugins::{
    canonical_form, fp_objects_up_to, Category, Elem, FinObject, Monoid, Relation, Structure,
};

/// Every function `n -> m` as a table.
fn all_functions(n: usize, m: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|f| (0..m).map(move |y| [f.clone(), vec![y]].concat()))
            .collect();
    }
    out
}

fn pairs_of(le: &[bool], n: usize) -> Vec<(usize, usize)> {
    (0..n * n)
        .filter(|&k| le[k])
        .map(|k| (k / n, k % n))
        .collect()
}

/// Morphism test from the raw structure, kept apart from the plugin code.
fn preserves(x: &FinObject, y: &FinObject, f: &[Elem]) -> bool {
    match (&x.structure, &y.structure) {
        (Structure::Poset { le: a }, Structure::Poset { le: b }) => {
            let (n, m) = (x.len(), y.len());
            pairs_of(a, n).into_iter().all(|(i, j)| b[f[i] * m + f[j]])
        }
        (Structure::Graph { edges: a }, Structure::Graph { edges: b }) => {
            a.tuples().iter().all(|t| b.contains(&[f[t[0]], f[t[1]]]))
        }
        (Structure::MSet { action: a }, Structure::MSet { action: b }) => {
            let (n, m) = (x.len(), y.len());
            let monoid = a.len() / n.max(1);
            (0..monoid).all(|k| (0..n).all(|p| f[a[k * n + p]] == b[k * m + f[p]]))
        }
        (Structure::Relational { relations: a }, Structure::Relational { relations: b }) => a
            .iter()
            .zip(b)
            .all(|(r, s)| r.tuples().iter().all(|t| s.contains(&[f[t[0]], f[t[1]]]))),
        (Structure::Set, Structure::Set) => true,
        _ => panic!("unexpected structures"),
    }
}

fn brute_hom(x: &FinObject, y: &FinObject) -> Vec<Vec<Elem>> {
    all_functions(x.len(), y.len())
        .into_iter()
        .filter(|f| preserves(x, y, f))
        .collect()
}

fn poset_strategy() -> impl Strategy<Value = FinObject> {
    (0usize..=3).prop_flat_map(|n| {
        let upper: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let k = upper.len();
        (
            Just(n),
            Just(upper),
            proptest::collection::vec(any::<bool>(), k),
        )
            .prop_map(|(n, upper, keep)| {
                let pairs: Vec<_> = upper
                    .into_iter()
                    .zip(keep)
                    .filter(|(_, b)| *b)
                    .map(|(p, _)| p)
                    .collect();
                FinObject::poset(n, &pairs).unwrap()
            })
    })
}

fn graph_strategy() -> impl Strategy<Value = FinObject> {
    (0usize..=3).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n + 1) / 2).prop_map(move |keep| {
            let candidates: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
            let edges: Vec<_> = candidates
                .into_iter()
                .zip(keep)
                .filter(|(_, b)| *b)
                .map(|(e, _)| e)
                .collect();
            FinObject::graph(n, &edges).unwrap()
        })
    })
}

fn involution_strategy() -> impl Strategy<Value = FinObject> {
    (0usize..=4).prop_flat_map(|n| {
        Just((0..n).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(move |order| {
                // pair consecutive entries of a shuffled carrier
                let mut swap: Vec<usize> = (0..n).collect();
                for pair in order.chunks(2) {
                    if let [a, b] = pair {
                        swap[*a] = *b;
                        swap[*b] = *a;
                    }
                }
                let action: Vec<usize> = (0..n).chain(swap).collect();
                FinObject::mset(&Monoid::cyclic(2), n, action).unwrap()
            })
    })
}

fn relation_strategy() -> impl Strategy<Value = FinObject> {
    (0usize..=3).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let tuples = (0..n * n).filter(|&k| bits[k]).map(|k| vec![k / n, k % n]);
            FinObject::relational(n, vec![Relation::from_tuples(2, n, tuples)])
        })
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

fn relabelled_graph(g: &FinObject, perm: &[usize]) -> FinObject {
    let Structure::Graph { edges } = &g.structure else {
        unreachable!()
    };
    let moved: Vec<(usize, usize)> = edges
        .tuples()
        .iter()
        .map(|t| (perm[t[0]], perm[t[1]]))
        .collect();
    FinObject::graph(g.len(), &moved).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monotone_maps_match_brute_force(x in poset_strategy(), y in poset_strategy()) {
        let got = enumerate_hom(&Category::Pos, &x, &y, Budget::default()).unwrap();
        prop_assert_eq!(got, brute_hom(&x, &y));
    }

    #[test]
    fn graph_maps_match_brute_force(x in graph_strategy(), y in graph_strategy()) {
        let got = enumerate_hom(&Category::Gra, &x, &y, Budget::default()).unwrap();
        prop_assert_eq!(got, brute_hom(&x, &y));
    }

    #[test]
    fn equivariant_maps_match_brute_force(x in involution_strategy(), y in involution_strategy()) {
        let got = enumerate_hom(&Category::MSet(Monoid::cyclic(2)), &x, &y, Budget::default()).unwrap();
        prop_assert_eq!(got, brute_hom(&x, &y));
    }

    #[test]
    fn relation_maps_match_brute_force(x in relation_strategy(), y in relation_strategy()) {
        let cat = Category::SigmaStr(codensity::plugins::Signature::binary());
        let got = enumerate_hom(&cat, &x, &y, Budget::default()).unwrap();
        prop_assert_eq!(got, brute_hom(&x, &y));
    }

    #[test]
    fn canonical_form_ignores_labels(
        (g, perm) in graph_strategy().prop_flat_map(|g| { let n = g.len(); (Just(g), permutation(n)) })
    ) {
        let moved = relabelled_graph(&g, &perm);
        prop_assert_eq!(canonical_form(&g).unwrap().0, canonical_form(&moved).unwrap().0);
    }

    #[test]
    fn isomorphic_graphs_have_matching_hom_counts(
        (g, perm) in graph_strategy().prop_flat_map(|g| { let n = g.len(); (Just(g), permutation(n)) }),
        h in graph_strategy(),
    ) {
        let moved = relabelled_graph(&g, &perm);
        let count = |a: &FinObject, b: &FinObject| enumerate_hom(&Category::Gra, a, b, Budget::default()).unwrap().len();
        prop_assert_eq!(count(&g, &h), count(&moved, &h));
        prop_assert_eq!(count(&h, &g), count(&h, &moved));
    }
}

#[test]
fn linear_maps_are_all_matrices() {
    for q in [2, 3] {
        for (n, m) in [(0, 1), (1, 1), (1, 2), (2, 1), (2, 2)] {
            let maps = enumerate_hom(
                &Category::Vec { q },
                &FinObject::vector(q, n),
                &FinObject::vector(q, m),
                Budget::default(),
            )
            .unwrap();
            assert_eq!(maps.len(), q.pow((n * m) as u32), "q={q}, {n} -> {m}");
            let distinct: BTreeSet<_> = maps.iter().collect();
            assert_eq!(distinct.len(), maps.len());
        }
    }
}

/// `TX` straight from the definition: every choice of one point per map
/// `X -> A`, kept when every `h: A -> B` sends the point at `a` to the point
/// at `h ∘ a`.
fn brute_limit_size(x: &FinObject, members: &[FinObject]) -> usize {
    let entries: Vec<(usize, Vec<Elem>)> = members
        .iter()
        .enumerate()
        .flat_map(|(k, a)| brute_hom(x, a).into_iter().map(move |f| (k, f)))
        .collect();
    let sizes: Vec<usize> = entries.iter().map(|(k, _)| members[*k].len()).collect();
    let mut constraints = Vec::new();
    for (i, (ka, a)) in entries.iter().enumerate() {
        for (kb, b) in members.iter().enumerate() {
            for h in brute_hom(&members[*ka], b) {
                let composite: Vec<Elem> = a.iter().map(|&p| h[p]).collect();
                let j = entries
                    .iter()
                    .position(|(k, f)| *k == kb && *f == composite)
                    .unwrap();
                constraints.push((i, j, h));
            }
        }
    }
    let mut count = 0;
    let mut choice = vec![0; entries.len()];
    'outer: loop {
        if constraints
            .iter()
            .all(|(i, j, h)| h[choice[*i]] == choice[*j])
        {
            count += 1;
        }
        for k in 0..choice.len() {
            choice[k] += 1;
            if choice[k] < sizes[k] {
                continue 'outer;
            }
            choice[k] = 0;
        }
        return count;
    }
}

#[test]
fn limit_sizes_match_the_definition() {
    let cases: Vec<(Category, FinObject, usize)> = vec![
        (Category::Set, FinObject::set(1), 2),
        (Category::Set, FinObject::set(2), 2),
        (Category::Set, FinObject::set(3), 2),
        (Category::Pos, FinObject::chain(2), 2),
        (Category::Pos, FinObject::antichain(2), 2),
        (Category::Gra, FinObject::graph(2, &[(0, 1)]).unwrap(), 2),
    ];
    for (cat, x, bound) in cases {
        let setting = Setting::skeleton(&cat, bound, Budget::default()).unwrap();
        let members: Vec<FinObject> = setting
            .subcat
            .objects
            .iter()
            .map(|o| (**o).clone())
            .collect();
        let expected = brute_limit_size(&x, &members);
        for mode in [LimitMode::Full, LimitMode::Surjective] {
            let inst = codensity_by_limit(&setting, &x, mode).unwrap();
            assert_eq!(inst.len(), expected, "{} {:?} {mode:?}", cat.name(), x);
        }
    }
}

#[test]
fn full_and_onto_coslices_agree() {
    for cat in [
        Category::Set,
        Category::Pos,
        Category::Jsl,
        Category::Gra,
        Category::MSet(Monoid::cyclic(2)),
    ] {
        let setting = Setting::skeleton(&cat, 3, Budget::default()).unwrap();
        for x in fp_objects_up_to(&cat, 2, Budget::default()).unwrap() {
            let full = codensity_by_limit(&setting, &x, LimitMode::Full).unwrap();
            let onto = codensity_by_limit(&setting, &x, LimitMode::Surjective).unwrap();
            assert_eq!(full.len(), onto.len(), "{} {:?}", cat.name(), x);
            assert_eq!(
                full.object.structure,
                onto.object.structure,
                "{} {:?}",
                cat.name(),
                x
            );
        }
    }
}

/// The derived subobject for `a: X -> A` is the pullback of `a**` along `η_A`.
#[test]
fn derived_subobjects_are_pullbacks() {
    let budget = Budget::default();
    for cat in [
        Category::Set,
        Category::Pos,
        Category::Jsl,
        Category::Vec { q: 2 },
    ] {
        let setting = Setting::skeleton(&cat, 2, budget).unwrap();
        for x in fp_objects_up_to(&cat, 2, budget).unwrap() {
            let ambient = Ambient::build(&cat, AmbientKind::DoubleDual, &x, budget).unwrap();
            let (x_star, x_double) = double_dual(&cat, &x, budget).unwrap();
            for (k, a_obj) in setting.subcat.objects.iter().enumerate() {
                let (a_star, a_double) = double_dual(&cat, a_obj, budget).unwrap();
                let eta_a = eta(a_obj.len(), &a_star, &a_double).unwrap();
                for a in enumerate_hom(&cat, &x, a_obj, budget).unwrap() {
                    let a_dual = dual_on_morphism(&x_star, &a_star, &a).unwrap();
                    let a_dd = dual_on_morphism(&a_double, &x_double, &a_dual).unwrap();
                    let pb = pullback(
                        &cat,
                        Arc::new(x_double.object.clone()),
                        &a_dd,
                        a_obj.clone(),
                        &eta_a,
                        Arc::new(a_double.object.clone()),
                        budget,
                    )
                    .unwrap();
                    let expected: BTreeSet<(Elem, Elem)> =
                        pb.families.iter().map(|f| (f[0], f[1])).collect();
                    let derived = derived_subobject(&setting, &ambient, k, &a).unwrap();
                    let got: BTreeSet<(Elem, Elem)> = derived
                        .members
                        .iter()
                        .copied()
                        .zip(derived.projection.iter().copied())
                        .collect();
                    assert_eq!(
                        got,
                        expected,
                        "{} {:?} -> {:?} via {a:?}",
                        cat.name(),
                        x,
                        a_obj
                    );
                }
            }
        }
    }
}

#[test]
fn ultrafilters_on_finite_sets_are_principal() {
    let setting = Setting::skeleton(&Category::Set, 4, Budget::default()).unwrap();
    for n in 0..=3 {
        for c in Construction::ALL {
            let inst = construct(&setting, &FinObject::set(n), c).unwrap();
            assert_eq!(inst.len(), n, "{c} on {n} points");
            let unit: BTreeSet<_> = inst.unit.iter().collect();
            assert_eq!(unit.len(), n);
        }
    }
}
