use std::fmt;

use super::instance::{Construction, MonadInstance, Setting};
use super::{construct, Elem};
use crate::error::Result;
use crate::plugins::{is_morphism, Category, FinObject};

/// A way two instances fail to be canonically isomorphic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mismatch {
    DifferentCoslices,
    ConeNotJointlyInjective(Construction),
    Unmatched { element: Elem },
    NotBijective { sizes: (usize, usize) },
    StructureForward,
    StructureBackward,
    Unit { point: Elem },
    Embedding { element: Elem },
    Multiplication { element: Elem },
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mismatch::DifferentCoslices => write!(f, "the instances use different coslices"),
            Mismatch::ConeNotJointlyInjective(c) => {
                write!(f, "the {c} cone does not separate elements")
            }
            Mismatch::Unmatched { element } => write!(
                f,
                "element {element} has no counterpart with the same cone values"
            ),
            Mismatch::NotBijective { sizes: (a, b) } => {
                write!(f, "comparison is not a bijection ({a} vs {b} elements)")
            }
            Mismatch::StructureForward => write!(f, "comparison map is not a morphism"),
            Mismatch::StructureBackward => write!(f, "inverse comparison map is not a morphism"),
            Mismatch::Unit { point } => write!(f, "units disagree at point {point}"),
            Mismatch::Embedding { element } => {
                write!(f, "embeddings disagree at element {element}")
            }
            Mismatch::Multiplication { element } => {
                write!(f, "multiplications disagree at element {element}")
            }
        }
    }
}

/// The comparison map between two instances over the same coslice.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub from: Construction,
    pub to: Construction,
    pub map: Option<Vec<Elem>>,
    pub mismatches: Vec<Mismatch>,
}

impl Comparison {
    pub fn is_match(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Sends `u` to the element of `b` with the same cone values, then checks
/// that this is an isomorphism commuting with units and embeddings.
pub fn compare_instances(a: &MonadInstance, b: &MonadInstance) -> Comparison {
    let mut out = Comparison {
        from: a.construction,
        to: b.construction,
        map: None,
        mismatches: Vec::new(),
    };
    if a.coslice.entries != b.coslice.entries || a.base() != b.base() {
        out.mismatches.push(Mismatch::DifferentCoslices);
        return out;
    }
    for inst in [a, b] {
        if !inst.cone_is_jointly_injective() {
            out.mismatches
                .push(Mismatch::ConeNotJointlyInjective(inst.construction));
        }
    }
    let mut map = Vec::with_capacity(a.len());
    for u in 0..a.len() {
        match b.element_from(|e| a.cone[e][u]) {
            Some(v) => map.push(v),
            None => {
                out.mismatches.push(Mismatch::Unmatched { element: u });
                return out;
            }
        }
    }
    let mut hit = vec![false; b.len()];
    for &v in &map {
        hit[v] = true;
    }
    if a.len() != b.len() || hit.iter().any(|h| !h) {
        out.mismatches.push(Mismatch::NotBijective {
            sizes: (a.len(), b.len()),
        });
        out.map = Some(map);
        return out;
    }
    let cat = &a.category;
    if !is_morphism(cat, &a.object, &b.object, &map) {
        out.mismatches.push(Mismatch::StructureForward);
    }
    let mut inverse = vec![0; map.len()];
    for (u, &v) in map.iter().enumerate() {
        inverse[v] = u;
    }
    if !is_morphism(cat, &b.object, &a.object, &inverse) {
        out.mismatches.push(Mismatch::StructureBackward);
    }
    for (x, (&ua, &ub)) in a.unit.iter().zip(&b.unit).enumerate() {
        if map[ua] != ub {
            out.mismatches.push(Mismatch::Unit { point: x });
        }
    }
    if let (Some(ea), Some(eb)) = (&a.embedding, &b.embedding) {
        for (u, &v) in map.iter().enumerate() {
            if ea.ambient.as_function(ea.map[u]) != eb.ambient.as_function(eb.map[v]) {
                out.mismatches.push(Mismatch::Embedding { element: u });
            }
        }
    }
    out.map = Some(map);
    out
}

/// Compares `μ` of `a` (from `a_outer` on `TX_a`) with `μ` of `b`, using the
/// instance `b_on_a` of construction `b` built on `TX_a`.
pub fn compare_multiplications(
    a: &MonadInstance,
    a_outer: &MonadInstance,
    b: &MonadInstance,
    b_on_a: &MonadInstance,
    phi: &[Elem],
) -> Result<Vec<Mismatch>> {
    let outer = compare_instances(a_outer, b_on_a);
    let Some(phi1) = outer.map.filter(|_| outer.mismatches.is_empty()) else {
        return Ok(outer.mismatches);
    };
    let mu_a = a.multiplication(a_outer)?;
    let mu_b = b.multiplication_along(b_on_a, phi)?;
    Ok((0..a_outer.len())
        .filter(|&w| phi[mu_a[w]] != mu_b[phi1[w]])
        .map(|w| Mismatch::Multiplication { element: w })
        .collect())
}

/// Constructions that apply to the category.
pub fn available_constructions(cat: &Category) -> Vec<Construction> {
    match cat {
        Category::Top | Category::Top0 => vec![Construction::LimitFormula, Construction::SMonad],
        _ => Construction::ALL.to_vec(),
    }
}

/// Result of running every available construction on one object.
#[derive(Clone, Debug)]
pub struct Agreement {
    pub sizes: Vec<(Construction, usize)>,
    pub comparisons: Vec<Comparison>,
    pub multiplication: Vec<(Construction, Vec<Mismatch>)>,
    /// Why the multiplications were not compared.
    pub partial: Option<String>,
}

impl Agreement {
    pub fn is_match(&self) -> bool {
        self.comparisons.iter().all(Comparison::is_match)
            && self.multiplication.iter().all(|(_, m)| m.is_empty())
    }
}

/// Builds every available construction on `x` and compares each with the
/// first, including multiplications when `|TX|` is within the cap.
pub fn compare_constructions(setting: &Setting, x: &FinObject) -> Result<Agreement> {
    let kinds = available_constructions(&setting.category);
    let instances: Vec<MonadInstance> = kinds
        .iter()
        .map(|&c| construct(setting, x, c))
        .collect::<Result<_>>()?;
    let reference = &instances[0];
    let comparisons: Vec<Comparison> = instances[1..]
        .iter()
        .map(|b| compare_instances(reference, b))
        .collect();
    let mut out = Agreement {
        sizes: instances
            .iter()
            .map(|i| (i.construction, i.len()))
            .collect(),
        comparisons,
        multiplication: Vec::new(),
        partial: None,
    };
    if !out.comparisons.iter().all(Comparison::is_match) {
        return Ok(out);
    }
    if reference.len() > setting.mult_cap {
        out.partial = Some(format!(
            "|TX| = {} exceeds the multiplication cap {}",
            reference.len(),
            setting.mult_cap
        ));
        return Ok(out);
    }
    let outer = |c: Construction| match construct(setting, &reference.object, c) {
        Ok(i) => Ok(Some(i)),
        Err(e) if e.is_budget() => Ok(None),
        Err(e) => Err(e),
    };
    let Some(ref_outer) = outer(reference.construction)? else {
        out.partial = Some("T(TX) is out of budget".into());
        return Ok(out);
    };
    for (b, cmp) in instances[1..].iter().zip(&out.comparisons) {
        let Some(b_on_ref) = outer(b.construction)? else {
            out.partial = Some(format!("T(TX) for {} is out of budget", b.construction));
            continue;
        };
        let phi = cmp.map.as_ref().unwrap();
        let m = compare_multiplications(reference, &ref_outer, b, &b_on_ref, phi)?;
        out.multiplication.push((b.construction, m));
    }
    Ok(out)
}
