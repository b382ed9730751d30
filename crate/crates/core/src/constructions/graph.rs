use std::fmt;

use crate::error::{Error, Result};
use crate::structure::{FiniteStructure, Language, Symbol};

/// A finite graph on `0..n` with a symmetric edge relation; loops allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph(FiniteStructure);

impl Graph {
    pub fn new(n: usize) -> Graph {
        Graph(FiniteStructure::new(Language::L1, n))
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Accepts an L1 structure with symmetric D.
    pub fn from_structure(s: FiniteStructure) -> Result<Graph> {
        if s.language() != Language::L1 {
            return Err(Error::LanguageMismatch { expected: Language::L1, found: s.language() });
        }
        s.validate()?;
        Ok(Graph(s))
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.0.add_edge(Symbol::D, u, v)
    }

    pub fn size(&self) -> usize {
        self.0.size()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.0.holds(Symbol::D, u, v)
    }

    /// Every `j` with `R(i, j)`, including `i` itself when looped.
    pub fn row(&self, i: usize) -> Vec<usize> {
        (0..self.size()).filter(|&j| self.adjacent(i, j)).collect()
    }

    /// Edges with `u <= v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges(Symbol::D)
    }

    /// A vertex related to nothing, not even itself.
    pub fn isolated_vertex(&self) -> Option<usize> {
        (0..self.size()).find(|&i| self.row(i).is_empty())
    }

    pub fn is_connected(&self) -> bool {
        crate::reducts::components(&self.0).len() <= 1
    }

    pub fn as_structure(&self) -> &FiniteStructure {
        &self.0
    }

    pub fn into_structure(self) -> FiniteStructure {
        self.0
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
