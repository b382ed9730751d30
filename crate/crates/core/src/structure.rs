//! Finite relational structures over the three languages used throughout the
//! crate, with a line-oriented text format and DOT export.
//!
//! ```text
//! lang L0
//! vertices 3
//! S 0 1
//! S 1 2
//! D 1 2
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// `L1 = {D}`, `L0 = {S, D}`, `LNBG = {E}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Language {
    L1,
    L0,
    Lnbg,
}

impl Language {
    pub fn symbols(self) -> &'static [Symbol] {
        match self {
            Language::L1 => &[Symbol::D],
            Language::L0 => &[Symbol::S, Symbol::D],
            Language::Lnbg => &[Symbol::E],
        }
    }

    pub fn has(self, sym: Symbol) -> bool {
        self.symbols().contains(&sym)
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Language::L1 => "L1",
            Language::L0 => "L0",
            Language::Lnbg => "LNBG",
        })
    }
}

impl FromStr for Language {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L1" => Ok(Language::L1),
            "L0" => Ok(Language::L0),
            "LNBG" => Ok(Language::Lnbg),
            _ => Err(Error::Parse { line: 0, msg: format!("unknown language `{s}`") }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    D,
    S,
    E,
}

impl Symbol {
    /// D and S are symmetric by definition; E is an arbitrary digraph.
    pub fn is_symmetric(self) -> bool {
        !matches!(self, Symbol::E)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symbol::D => "D",
            Symbol::S => "S",
            Symbol::E => "E",
        })
    }
}

impl FromStr for Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "D" => Ok(Symbol::D),
            "S" => Ok(Symbol::S),
            "E" => Ok(Symbol::E),
            _ => Err(Error::Parse { line: 0, msg: format!("unknown relation symbol `{s}`") }),
        }
    }
}

/// A binary relation on `0..n` as a dense boolean matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn new(n: usize) -> Self {
        Relation { n, bits: vec![false; n * n] }
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.n + v]
    }

    #[inline]
    pub fn set(&mut self, u: usize, v: usize) {
        self.bits[u * self.n + v] = true;
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|u| (u + 1..self.n).all(|v| self.get(u, v) == self.get(v, u)))
    }

    /// All pairs `(u, v)` in the relation, in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| (0..self.n).filter(move |&v| self.get(u, v)).map(move |v| (u, v)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteStructure {
    lang: Language,
    size: usize,
    rels: Vec<Relation>,
}

impl FiniteStructure {
    pub fn new(lang: Language, size: usize) -> Self {
        FiniteStructure {
            lang,
            size,
            rels: lang.symbols().iter().map(|_| Relation::new(size)).collect(),
        }
    }

    pub fn language(&self) -> Language {
        self.lang
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn slot(&self, sym: Symbol) -> Result<usize> {
        self.lang
            .symbols()
            .iter()
            .position(|&s| s == sym)
            .ok_or(Error::SymbolNotInLanguage { symbol: sym, language: self.lang })
    }

    pub fn relation(&self, sym: Symbol) -> Option<&Relation> {
        self.slot(sym).ok().map(|i| &self.rels[i])
    }

    /// Whether `sym(u, v)` holds. False for symbols outside the language.
    #[inline]
    pub fn holds(&self, sym: Symbol, u: usize, v: usize) -> bool {
        self.relation(sym).is_some_and(|r| r.get(u, v))
    }

    /// Adds `sym(u, v)`, and `sym(v, u)` when the symbol is symmetric.
    pub fn add_edge(&mut self, sym: Symbol, u: usize, v: usize) -> Result<()> {
        let slot = self.slot(sym)?;
        for w in [u, v] {
            if w >= self.size {
                return Err(Error::VertexOutOfRange { vertex: w, size: self.size });
            }
        }
        self.rels[slot].set(u, v);
        if sym.is_symmetric() {
            self.rels[slot].set(v, u);
        }
        Ok(())
    }

    /// Sets the single pair `sym(u, v)` without symmetrising. Used to build
    /// arbitrary relations, which [`FiniteStructure::validate`] may reject.
    ///
    /// # Panics
    ///
    /// If the symbol is not in the language or a vertex is out of range.
    pub fn insert_pair(&mut self, sym: Symbol, u: usize, v: usize) {
        assert!(u < self.size && v < self.size, "vertex out of range");
        let slot = self.slot(sym).expect("symbol in language");
        self.rels[slot].set(u, v);
    }

    /// Edges of `sym`; symmetric relations list each edge once with `u <= v`.
    pub fn edges(&self, sym: Symbol) -> Vec<(usize, usize)> {
        match self.relation(sym) {
            None => Vec::new(),
            Some(r) => r.pairs().filter(|&(u, v)| !sym.is_symmetric() || u <= v).collect(),
        }
    }

    /// Neighbours of `v` under `sym` in either direction, excluding `v` itself.
    pub fn neighbors(&self, sym: Symbol, v: usize) -> Vec<usize> {
        (0..self.size)
            .filter(|&w| w != v && (self.holds(sym, v, w) || self.holds(sym, w, v)))
            .collect()
    }

    /// Number of neighbours other than `v` itself.
    pub fn degree(&self, sym: Symbol, v: usize) -> usize {
        self.neighbors(sym, v).len()
    }

    /// Checks the language invariants: D and S symmetric, D contained in S.
    pub fn validate(&self) -> Result<()> {
        for (sym, rel) in self.lang.symbols().iter().zip(&self.rels) {
            if sym.is_symmetric() && !rel.is_symmetric() {
                return Err(Error::InvalidStructure(format!("{sym} is not symmetric")));
            }
        }
        if self.lang == Language::L0 {
            let (s, d) = (&self.rels[0], &self.rels[1]);
            if let Some((u, v)) = d.pairs().find(|&(u, v)| !s.get(u, v)) {
                return Err(Error::InvalidStructure(format!("D {u} {v} holds but S {u} {v} does not")));
            }
        }
        Ok(())
    }

    /// Substructure induced on `vertices`; position `i` of the result is
    /// `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> FiniteStructure {
        let mut out = FiniteStructure::new(self.lang, vertices.len());
        for (slot, rel) in self.rels.iter().enumerate() {
            for (i, &u) in vertices.iter().enumerate() {
                for (j, &v) in vertices.iter().enumerate() {
                    if rel.get(u, v) {
                        out.rels[slot].set(i, j);
                    }
                }
            }
        }
        out
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.size()`.
    pub fn disjoint_union(&self, other: &FiniteStructure) -> Result<FiniteStructure> {
        if self.lang != other.lang {
            return Err(Error::LanguageMismatch { expected: self.lang, found: other.lang });
        }
        let n = self.size + other.size;
        let mut out = FiniteStructure::new(self.lang, n);
        for slot in 0..self.rels.len() {
            for (u, v) in self.rels[slot].pairs() {
                out.rels[slot].set(u, v);
            }
            for (u, v) in other.rels[slot].pairs() {
                out.rels[slot].set(u + self.size, v + self.size);
            }
        }
        Ok(out)
    }

    /// Copy with vertex `v` renamed to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> FiniteStructure {
        assert_eq!(perm.len(), self.size, "permutation length");
        let mut out = FiniteStructure::new(self.lang, self.size);
        for slot in 0..self.rels.len() {
            for (u, v) in self.rels[slot].pairs() {
                out.rels[slot].set(perm[u], perm[v]);
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<FiniteStructure> {
        let mut lang = None;
        let mut out: Option<FiniteStructure> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: line_no, msg };
            let words: Vec<&str> = line.split_whitespace().collect();
            match words.as_slice() {
                ["lang", l] => {
                    if lang.is_some() {
                        return Err(err("duplicate `lang` header".into()));
                    }
                    lang = Some(l.parse::<Language>().map_err(|e| err(e.to_string()))?);
                }
                ["vertices", n] => {
                    let l = lang.ok_or_else(|| err("`lang` must come before `vertices`".into()))?;
                    if out.is_some() {
                        return Err(err("duplicate `vertices` header".into()));
                    }
                    let n: usize = n.parse().map_err(|_| err(format!("bad vertex count `{n}`")))?;
                    out = Some(FiniteStructure::new(l, n));
                }
                [sym, u, v] => {
                    let s = out.as_mut().ok_or_else(|| err("edge before `vertices` header".into()))?;
                    let sym: Symbol = sym.parse().map_err(|e: Error| err(e.to_string()))?;
                    let u: usize = u.parse().map_err(|_| err(format!("bad vertex `{u}`")))?;
                    let v: usize = v.parse().map_err(|_| err(format!("bad vertex `{v}`")))?;
                    s.add_edge(sym, u, v).map_err(|e| err(e.to_string()))?;
                }
                _ => return Err(err(format!("cannot parse `{line}`"))),
            }
        }
        let out = out.ok_or(Error::Parse { line: 0, msg: "missing `vertices` header".into() })?;
        out.validate()?;
        Ok(out)
    }

    pub fn to_dot(&self) -> String {
        let directed = self.lang == Language::Lnbg;
        let mut out = String::new();
        out.push_str(if directed { "digraph G {\n" } else { "graph G {\n" });
        for v in 0..self.size {
            out.push_str(&format!("  {v};\n"));
        }
        match self.lang {
            Language::L1 => {
                for (u, v) in self.edges(Symbol::D) {
                    out.push_str(&format!("  {u} -- {v};\n"));
                }
            }
            Language::L0 => {
                // D edges drawn bold, S-only edges dashed
                for (u, v) in self.edges(Symbol::S) {
                    let style = if self.holds(Symbol::D, u, v) { "bold" } else { "dashed" };
                    out.push_str(&format!("  {u} -- {v} [style={style}];\n"));
                }
            }
            Language::Lnbg => {
                for (u, v) in self.edges(Symbol::E) {
                    out.push_str(&format!("  {u} -> {v};\n"));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for FiniteStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lang {}", self.lang)?;
        writeln!(f, "vertices {}", self.size)?;
        for &sym in self.lang.symbols() {
            for (u, v) in self.edges(sym) {
                writeln!(f, "{sym} {u} {v}")?;
            }
        }
        Ok(())
    }
}
