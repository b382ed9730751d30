//! Ehrenfeucht–Fraïssé games on finite relational structures.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::structure::FiniteStructure;

/// Whether Duplicator wins the `k`-round game on `(a, at)` and `(b, bt)`,
/// that is whether the two tuples satisfy the same formulas of quantifier
/// rank at most `k`.
pub fn ef_equiv(a: &FiniteStructure, at: &[usize], b: &FiniteStructure, bt: &[usize], k: usize) -> Result<bool> {
    if a.language() != b.language() {
        return Err(Error::LanguageMismatch { expected: a.language(), found: b.language() });
    }
    if at.len() != bt.len() {
        return Err(Error::TupleLength(at.len(), bt.len()));
    }
    for (s, t) in [(a, at), (b, bt)] {
        if let Some(&v) = t.iter().find(|&&v| v >= s.size()) {
            return Err(Error::VertexOutOfRange { vertex: v, size: s.size() });
        }
    }
    let mut game = Game { a, b, memo: HashMap::new() };
    let pairs: Vec<(usize, usize)> = at.iter().copied().zip(bt.iter().copied()).collect();
    if !game.partial_iso(&pairs) {
        return Ok(false);
    }
    Ok(game.duplicator_wins(pairs, k))
}

struct Game<'s> {
    a: &'s FiniteStructure,
    b: &'s FiniteStructure,
    // The game value only depends on the set of chosen pairs, so positions
    // are stored sorted and deduplicated.
    memo: HashMap<(Vec<(usize, usize)>, usize), bool>,
}

impl Game<'_> {
    fn agree(&self, (x, y): (usize, usize), (u, v): (usize, usize)) -> bool {
        (x == u) == (y == v)
            && self
                .a
                .language()
                .symbols()
                .iter()
                .all(|&s| self.a.holds(s, x, u) == self.b.holds(s, y, v) && self.a.holds(s, u, x) == self.b.holds(s, v, y))
    }

    fn partial_iso(&self, pairs: &[(usize, usize)]) -> bool {
        pairs.iter().enumerate().all(|(i, &p)| pairs[i..].iter().all(|&q| self.agree(p, q)))
    }

    /// Whether adding `p` to a partial isomorphism keeps it one.
    fn extends(&self, pairs: &[(usize, usize)], p: (usize, usize)) -> bool {
        self.agree(p, p) && pairs.iter().all(|&q| self.agree(p, q))
    }

    fn duplicator_wins(&mut self, mut pairs: Vec<(usize, usize)>, k: usize) -> bool {
        if k == 0 {
            return true;
        }
        pairs.sort_unstable();
        pairs.dedup();
        if let Some(&won) = self.memo.get(&(pairs.clone(), k)) {
            return won;
        }
        let (na, nb) = (self.a.size(), self.b.size());
        let mut won = true;
        // Spoiler plays x in a, Duplicator must answer in b.
        'spoiler_a: for x in 0..na {
            for y in 0..nb {
                if self.extends(&pairs, (x, y)) && self.recurse(&pairs, (x, y), k) {
                    continue 'spoiler_a;
                }
            }
            won = false;
            break;
        }
        if won {
            'spoiler_b: for y in 0..nb {
                for x in 0..na {
                    if self.extends(&pairs, (x, y)) && self.recurse(&pairs, (x, y), k) {
                        continue 'spoiler_b;
                    }
                }
                won = false;
                break;
            }
        }
        self.memo.insert((pairs, k), won);
        won
    }

    fn recurse(&mut self, pairs: &[(usize, usize)], p: (usize, usize), k: usize) -> bool {
        let mut next = pairs.to_vec();
        next.push(p);
        self.duplicator_wins(next, k - 1)
    }
}
