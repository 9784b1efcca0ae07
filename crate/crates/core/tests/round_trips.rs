use proptest::prelude::*;

use codensity::codensity::{available_constructions, construct, Setting};
use codensity::io::{
    document_to_json, instance_from_json, instance_to_dot, instance_to_json, parse_document,
    to_canonical_string,
};
use codensity::kernel::Budget;
use codensity::plugins::{fp_objects_up_to, Category, FinObject, Monoid, Signature};

fn categories() -> Vec<Category> {
    vec![
        Category::Set,
        Category::Par,
        Category::Pos,
        Category::Jsl,
        Category::Gra,
        Category::MSet(Monoid::cyclic(2)),
        Category::Vec { q: 2 },
        Category::Vec { q: 3 },
        Category::SigmaStr(Signature::binary()),
        Category::Top,
        Category::Top0,
    ]
}

#[test]
fn documents_round_trip_for_every_small_object() {
    for cat in categories() {
        for x in fp_objects_up_to(&cat, 3, Budget::default()).unwrap() {
            let text = to_canonical_string(&document_to_json(&cat, &x));
            let (back_cat, back) = parse_document(&text, None).unwrap();
            assert_eq!(back_cat, cat);
            assert_eq!(back, x, "{text}");
            assert_eq!(
                to_canonical_string(&document_to_json(&back_cat, &back)),
                text
            );
        }
    }
}

#[test]
fn instances_round_trip() {
    for cat in categories() {
        let setting = Setting::skeleton(&cat, 3, Budget::default()).unwrap();
        for x in fp_objects_up_to(&cat, 2, Budget::default()).unwrap() {
            for c in available_constructions(&cat) {
                let inst = construct(&setting, &x, c).unwrap();
                let text = to_canonical_string(&instance_to_json(&inst));
                let back =
                    instance_from_json(&serde_json::from_str(&text).unwrap(), Budget::default())
                        .unwrap();
                assert_eq!(back.len(), inst.len());
                assert_eq!(back.unit, inst.unit);
                assert_eq!(
                    to_canonical_string(&instance_to_json(&back)),
                    text,
                    "{} {c}",
                    cat.name()
                );
            }
        }
    }
}

#[test]
fn tampered_instances_are_rejected() {
    let setting = Setting::skeleton(&Category::Set, 3, Budget::default()).unwrap();
    let inst = construct(
        &setting,
        &FinObject::set(2),
        available_constructions(&Category::Set)[0],
    )
    .unwrap();
    let mut v = instance_to_json(&inst);
    v["unit"] = serde_json::json!([0, 0]);
    assert!(instance_from_json(&v, Budget::default()).is_err());
}

#[test]
fn dot_is_reproducible() {
    let setting = Setting::skeleton(&Category::Pos, 3, Budget::default()).unwrap();
    let x = FinObject::chain(2);
    let labels = ["t0".to_string(), "t1".to_string()];
    let a = instance_to_dot(
        &construct(&setting, &x, available_constructions(&Category::Pos)[0]).unwrap(),
        &labels,
    );
    let b = instance_to_dot(
        &construct(&setting, &x, available_constructions(&Category::Pos)[0]).unwrap(),
        &labels,
    );
    assert_eq!(a, b);
    assert!(a.starts_with("digraph"));
}

proptest! {
    #[test]
    fn poset_documents_round_trip(pairs in proptest::collection::vec((0usize..4, 0usize..4), 0..6)) {
        let upward: Vec<(usize, usize)> = pairs.into_iter().filter(|(a, b)| a < b).collect();
        let x = FinObject::poset(4, &upward).unwrap();
        let (_, back) = parse_document(&document_to_json(&Category::Pos, &x).to_string(), None).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn graph_documents_round_trip(edges in proptest::collection::vec((0usize..4, 0usize..4), 0..8)) {
        let x = FinObject::graph(4, &edges).unwrap();
        let (_, back) = parse_document(&document_to_json(&Category::Gra, &x).to_string(), None).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn malformed_text_never_panics(text in "\\PC{0,40}") {
        let _ = parse_document(&text, Some(&Category::Set));
    }
}
