use std::collections::HashMap;
use std::sync::Arc;

use super::coslice::{connecting_morphisms, Coslice};
use super::instance::{Construction, MonadInstance, Setting};
use crate::error::{Error, Result};
use crate::kernel::{limit_of_checked, FinDiagram, Limit};
use crate::plugins::{is_morphism, Elem, FinObject};

/// Which part of the coslice the limit is taken over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LimitMode {
    /// Every entry and every connecting morphism.
    Full,
    /// Only entries whose map is onto; requires a subcategory closed under
    /// images.
    Surjective,
    /// `Surjective` when the subcategory allows it, otherwise `Full`.
    #[default]
    Auto,
}

/// The diagram whose limit is taken, with the coslice entry behind each node.
#[derive(Clone, Debug)]
pub struct CosliceDiagram {
    pub nodes: Vec<usize>,
    pub diagram: FinDiagram,
}

fn resolve(setting: &Setting, mode: LimitMode) -> Result<LimitMode> {
    match mode {
        LimitMode::Auto if setting.subcat.image_closed => Ok(LimitMode::Surjective),
        LimitMode::Auto => Ok(LimitMode::Full),
        LimitMode::Surjective if !setting.subcat.image_closed => Err(Error::Input(
            "the surjective part of the coslice needs a subcategory closed under images".into(),
        )),
        m => Ok(m),
    }
}

/// The coslice as a diagram, in the requested mode.
pub fn coslice_diagram(
    setting: &Setting,
    coslice: &Coslice,
    mode: LimitMode,
) -> Result<CosliceDiagram> {
    let mode = resolve(setting, mode)?;
    let mut diagram = FinDiagram::default();
    match mode {
        LimitMode::Full => {
            let homs = setting.member_homs()?;
            for e in 0..coslice.len() {
                diagram.add_node(coslice.target(e).clone());
            }
            for c in connecting_morphisms(coslice, &homs, setting.budget)? {
                diagram.add_shared_arrow(c.from, c.to, c.map);
            }
            Ok(CosliceDiagram {
                nodes: (0..coslice.len()).collect(),
                diagram,
            })
        }
        _ => {
            let nodes: Vec<usize> = (0..coslice.len())
                .filter(|&e| coslice.is_surjective(e))
                .collect();
            for &e in &nodes {
                diagram.add_node(coslice.target(e).clone());
            }
            surjective_arrows(setting, coslice, &nodes, &mut diagram)?;
            Ok(CosliceDiagram { nodes, diagram })
        }
    }
}

/// Kernel partition of a map, as first-occurrence labels.
fn kernel_code(map: &[Elem]) -> Vec<usize> {
    let mut seen: HashMap<Elem, usize> = HashMap::new();
    map.iter()
        .map(|y| {
            let k = seen.len();
            *seen.entry(*y).or_insert(k)
        })
        .collect()
}

fn refines(fine: &[usize], coarse: &[usize]) -> bool {
    let mut img: HashMap<usize, usize> = HashMap::new();
    fine.iter()
        .zip(coarse)
        .all(|(f, c)| *img.entry(*f).or_insert(*c) == *c)
}

/// Between surjective entries a connecting morphism is unique when it exists.
fn surjective_arrows(
    setting: &Setting,
    coslice: &Coslice,
    nodes: &[usize],
    diagram: &mut FinDiagram,
) -> Result<()> {
    let mut meter = setting
        .budget
        .meter("connecting surjective coslice entries");
    let mut groups: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for (i, &e) in nodes.iter().enumerate() {
        let code = kernel_code(&coslice.entries[e].map);
        match groups.iter_mut().find(|(c, _)| *c == code) {
            Some((_, members)) => members.push(i),
            None => groups.push((code, vec![i])),
        }
    }
    for (fine, from_nodes) in &groups {
        for (coarse, to_nodes) in &groups {
            if !refines(fine, coarse) {
                continue;
            }
            for &i in from_nodes {
                let ei = &coslice.entries[nodes[i]];
                let src = coslice.target(nodes[i]);
                for &j in to_nodes {
                    meter.tick()?;
                    let ej = &coslice.entries[nodes[j]];
                    let tgt = coslice.target(nodes[j]);
                    let mut h = vec![0; src.len()];
                    for (&a, &b) in ei.map.iter().zip(&ej.map) {
                        h[a] = b;
                    }
                    if i != j && is_morphism(&setting.category, src, tgt, &h) {
                        diagram.add_arrow(i, j, h);
                    }
                }
            }
        }
    }
    Ok(())
}

/// The cone over the whole coslice from the limit over the surjective part:
/// each entry factors through the member isomorphic to its image.
fn extend_cone(
    setting: &Setting,
    coslice: &Coslice,
    nodes: &[usize],
    lim: &Limit,
) -> Result<Vec<Vec<Elem>>> {
    let mut position = vec![usize::MAX; coslice.len()];
    for (i, &e) in nodes.iter().enumerate() {
        position[e] = i;
    }
    coslice
        .entries
        .iter()
        .map(|entry| {
            let mut image: Vec<Elem> = entry.map.clone();
            image.sort_unstable();
            image.dedup();
            let factor = setting.subcat.image_factor(entry.object, &image)?;
            let onto: Vec<Elem> = entry.map.iter().map(|y| factor.back[y]).collect();
            let node = coslice
                .find(factor.member, &onto)
                .map(|e| position[e])
                .filter(|&p| p != usize::MAX)
                .ok_or_else(|| {
                    Error::Construction("an image factorization is not in the coslice".into())
                })?;
            Ok(lim
                .families
                .iter()
                .map(|f| factor.inclusion[f[node]])
                .collect())
        })
        .collect()
}

/// `TX` as the limit of the coslice diagram.
pub fn codensity_by_limit(
    setting: &Setting,
    x: &FinObject,
    mode: LimitMode,
) -> Result<MonadInstance> {
    let coslice = setting.coslice(x)?;
    let cd = coslice_diagram(setting, &coslice, mode)?;
    let lim = limit_of_checked(&setting.category, &cd.diagram, setting.budget)?;
    let full = cd.nodes.len() == coslice.len();
    let cone = if full {
        (0..cd.nodes.len()).map(|k| lim.leg(k)).collect()
    } else {
        extend_cone(setting, &coslice, &cd.nodes, &lim)?
    };
    MonadInstance::assemble(Construction::LimitFormula, coslice, lim.object, cone, None)
}

/// The limit over the full coslice, for cross-checking the reduced diagram.
pub fn full_limit(setting: &Setting, x: &FinObject) -> Result<(Arc<Coslice>, Limit)> {
    let coslice = setting.coslice(x)?;
    let cd = coslice_diagram(setting, &coslice, LimitMode::Full)?;
    let lim = limit_of_checked(&setting.category, &cd.diagram, setting.budget)?;
    Ok((coslice, lim))
}
