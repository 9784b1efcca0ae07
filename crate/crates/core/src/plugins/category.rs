use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_SYMBOLS: usize = 4;
pub const MAX_ARITY: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// Relational signature for `sigma_str`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub symbols: Vec<Symbol>,
}

impl Signature {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.len() > MAX_SYMBOLS {
            return Err(Error::Input(format!(
                "signature has {} symbols, at most {MAX_SYMBOLS} are supported",
                symbols.len()
            )));
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.arity == 0 || s.arity > MAX_ARITY {
                return Err(Error::Input(format!(
                    "symbol {} has arity {}, supported arities are 1..={MAX_ARITY}",
                    s.name, s.arity
                )));
            }
            if symbols[..i].iter().any(|t| t.name == s.name) {
                return Err(Error::Input(format!("duplicate symbol {}", s.name)));
            }
        }
        Ok(Signature { symbols })
    }

    pub fn binary() -> Self {
        Signature {
            symbols: vec![Symbol {
                name: "R".into(),
                arity: 2,
            }],
        }
    }
}

/// A finite commutative monoid given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monoid {
    elements: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
}

impl Monoid {
    pub fn new(elements: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::Input("monoid must be nonempty".into()));
        }
        if table.len() != n
            || table
                .iter()
                .any(|r| r.len() != n || r.iter().any(|&v| v >= n))
        {
            return Err(Error::Input("monoid table has wrong shape".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if table[i][j] != table[j][i] {
                    return Err(Error::Input(format!(
                        "monoid is not commutative at ({}, {})",
                        elements[i], elements[j]
                    )));
                }
                for k in 0..n {
                    if table[table[i][j]][k] != table[i][table[j][k]] {
                        return Err(Error::Input(format!(
                            "monoid is not associative at ({}, {}, {})",
                            elements[i], elements[j], elements[k]
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x))
            .ok_or_else(|| Error::Input("monoid has no identity".into()))?;
        for i in 0..n {
            if elements[..i].contains(&elements[i]) {
                return Err(Error::Input(format!(
                    "duplicate monoid element {}",
                    elements[i]
                )));
            }
        }
        Ok(Monoid {
            elements,
            table,
            identity,
        })
    }

    /// The cyclic group of order `n`.
    pub fn cyclic(n: usize) -> Self {
        let elements = (0..n)
            .map(|i| {
                if i == 0 {
                    "e".to_string()
                } else {
                    format!("g{i}")
                }
            })
            .collect();
        let table = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        Monoid::new(elements, table).expect("cyclic group is a commutative monoid")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }
}

/// The supported categories.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Category {
    Set,
    /// Partial functions, modelled as pointed sets.
    Par,
    Pos,
    Jsl,
    Gra,
    SigmaStr(Signature),
    /// Vector spaces over the prime field of order `q`.
    Vec {
        q: usize,
    },
    MSet(Monoid),
    Top,
    Top0,
}

fn is_prime(q: usize) -> bool {
    q >= 2
        && (2..q)
            .take_while(|d| d * d <= q)
            .all(|d| !q.is_multiple_of(d))
}

impl Category {
    pub fn vec(q: usize) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::Input(format!("field order {q} is not prime")));
        }
        Ok(Category::Vec { q })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Category::Set => "set",
            Category::Par => "par",
            Category::Pos => "pos",
            Category::Jsl => "jsl",
            Category::Gra => "gra",
            Category::SigmaStr(_) => "sigma_str",
            Category::Vec { .. } => "vec",
            Category::MSet(_) => "mset",
            Category::Top => "top",
            Category::Top0 => "top0",
        }
    }

    /// Short description including parameters, used in reports.
    pub fn describe(&self) -> String {
        match self {
            Category::Vec { q } => format!("vec(q={q})"),
            Category::MSet(m) => format!("mset(|M|={})", m.len()),
            Category::SigmaStr(sig) => {
                let syms: Vec<String> = sig
                    .symbols
                    .iter()
                    .map(|s| format!("{}/{}", s.name, s.arity))
                    .collect();
                format!("sigma_str({})", syms.join(","))
            }
            other => other.name().to_string(),
        }
    }

    /// Whether the category has the internal hom used by the dual functor.
    pub fn is_closed(&self) -> bool {
        !matches!(self, Category::Top | Category::Top0)
    }

    /// Smallest subcategory bound that the engine considers reliable.
    pub fn recommended_min_bound(&self) -> usize {
        match self {
            Category::Vec { .. } => 2,
            _ => 4,
        }
    }

    pub fn field_order(&self) -> Option<usize> {
        match self {
            Category::Vec { q } => Some(*q),
            _ => None,
        }
    }
}
