use std::collections::HashMap;
use std::sync::Arc;

use crate::dualization::double_dual;
use crate::error::{Error, Result};
use crate::kernel::{enumerate_hom, product, Budget};
use crate::plugins::{dualizing_object, Category, Elem, FinObject};

/// Which object of functions on `Hom(X, D)` hosts the construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AmbientKind {
    /// `X**`: the structure-preserving functions `X* -> D`.
    DoubleDual,
    /// `SX = D^Hom(X, D)`: all functions.
    Power,
}

/// `X**` or `SX` with every element stored as its table over the probes
/// `Hom(X, D)`.
#[derive(Clone, Debug)]
pub struct Ambient {
    pub kind: AmbientKind,
    pub probes: Vec<Vec<Elem>>,
    probe_index: HashMap<Vec<Elem>, usize>,
    pub object: Arc<FinObject>,
    pub elements: Vec<Vec<Elem>>,
    element_index: HashMap<Vec<Elem>, Elem>,
}

impl Ambient {
    pub fn build(cat: &Category, kind: AmbientKind, x: &FinObject, budget: Budget) -> Result<Self> {
        match kind {
            AmbientKind::DoubleDual => {
                let (star, double) = double_dual(cat, x, budget)?;
                Ok(Self::assemble(kind, star.maps, double.object, double.maps))
            }
            AmbientKind::Power => {
                let d = Arc::new(dualizing_object(cat));
                let probes = enumerate_hom(cat, x, &d, budget)?;
                let factors = vec![d; probes.len()];
                let power = product(cat, &factors, budget)?;
                Ok(Self::assemble(kind, probes, power.object, power.families))
            }
        }
    }

    fn assemble(
        kind: AmbientKind,
        probes: Vec<Vec<Elem>>,
        object: FinObject,
        elements: Vec<Vec<Elem>>,
    ) -> Self {
        let probe_index = probes
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let element_index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        Ambient {
            kind,
            probes,
            probe_index,
            object: Arc::new(object),
            elements,
            element_index,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, table: &[Elem]) -> Option<Elem> {
        self.element_index.get(table).copied()
    }

    pub fn probe_index(&self, g: &[Elem]) -> Option<usize> {
        self.probe_index.get(g).copied()
    }

    /// Evaluation at points: `x ↦ (g ↦ g(x))`.
    pub fn eta(&self, x_len: usize) -> Result<Vec<Elem>> {
        (0..x_len)
            .map(|x| {
                let ev: Vec<Elem> = self.probes.iter().map(|g| g[x]).collect();
                self.index_of(&ev).ok_or_else(|| {
                    Error::Construction("evaluation at a point is missing from the ambient".into())
                })
            })
            .collect()
    }

    /// For `a: X -> A`, the probe of `X` equal to `g ∘ a` for each probe `g` of `A`.
    pub fn pull(&self, target: &TargetProbes, a: &[Elem]) -> Result<Vec<usize>> {
        let mut buf = vec![0; a.len()];
        target
            .probes
            .iter()
            .map(|g| {
                for (b, &x) in buf.iter_mut().zip(a) {
                    *b = g[x];
                }
                self.probe_index(&buf)
                    .ok_or_else(|| Error::Construction("a precomposite probe is missing".into()))
            })
            .collect()
    }

    /// The image of element `u` under the ambient functor applied to `a`,
    /// as a table over the probes of the target.
    pub fn push(&self, u: Elem, pull: &[usize], out: &mut Vec<Elem>) {
        out.clear();
        out.extend(pull.iter().map(|&p| self.elements[u][p]));
    }

    /// Element `u` as a function on probe tables, sorted by probe.
    pub fn as_function(&self, u: Elem) -> Vec<(&[Elem], Elem)> {
        let mut f: Vec<(&[Elem], Elem)> = self
            .probes
            .iter()
            .zip(&self.elements[u])
            .map(|(p, &v)| (p.as_slice(), v))
            .collect();
        f.sort();
        f
    }
}

/// `Hom(A, D)` for a member `A`, with the evaluation tables of its points.
#[derive(Clone, Debug)]
pub struct TargetProbes {
    pub probes: Vec<Vec<Elem>>,
    unit_image: HashMap<Vec<Elem>, Elem>,
}

impl TargetProbes {
    pub fn new(cat: &Category, a: &FinObject, budget: Budget) -> Result<Self> {
        let probes = enumerate_hom(cat, a, &dualizing_object(cat), budget)?;
        let mut unit_image = HashMap::new();
        for t in 0..a.len() {
            let ev: Vec<Elem> = probes.iter().map(|g| g[t]).collect();
            if unit_image.insert(ev, t).is_some() {
                return Err(Error::Construction(
                    "the dualizing object does not separate points".into(),
                ));
            }
        }
        Ok(TargetProbes { probes, unit_image })
    }

    /// The point whose evaluation table is `table`.
    pub fn point(&self, table: &[Elem]) -> Option<Elem> {
        self.unit_image.get(table).copied()
    }
}
