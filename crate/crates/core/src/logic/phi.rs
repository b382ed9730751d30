//! Flower and bouquet formulas, the class of symmetric sentences and the
//! neighbourhood transform.

use std::collections::BTreeSet;

use super::eval::eval_sentence;
use super::formula::{fresh_var, Formula};
use crate::error::{Error, Result};
use crate::structure::{FiniteStructure, Language, Symbol};

/// `∀x∀y(D(x,y) → D(y,x))`.
pub fn symmetry_axiom() -> Formula {
    Formula::forall("x", Formula::forall("y", Formula::implies(Formula::d("x", "y"), Formula::d("y", "x"))))
}

/// `φ_n(x)`: `x` has no loop and exactly `n` D-neighbours.
pub fn phi_n(n: usize) -> Result<Formula> {
    phi_n_at(n, "x")
}

/// `φ_n` with free variable `var`.
pub fn phi_n_at(n: usize, var: &str) -> Result<Formula> {
    if n == 0 {
        return Err(Error::NotPositive);
    }
    let prefix = if var.starts_with('z') { "w" } else { "z" };
    let zs: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
    let z = prefix.to_string();

    let mut parts = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            parts.push(Formula::not(Formula::eq(&zs[i], &zs[j])));
        }
    }
    for zi in &zs {
        parts.push(Formula::d(zi, var));
    }
    let among = Formula::disj(zs.iter().map(|zi| Formula::eq(&z, zi)));
    parts.push(Formula::forall(&z, Formula::implies(Formula::d(&z, var), among)));

    let body = zs.iter().rev().fold(Formula::conj(parts), |acc, zi| Formula::exists(zi, acc));
    Ok(Formula::and(Formula::not(Formula::d(var, var)), body))
}

/// `∃x_n(φ_n(x_n) ∧ D(y, x_n))`: `y` is adjacent to an `n`-flower.
pub fn flower_neighbor(n: usize) -> Result<Formula> {
    let x = format!("x{n}");
    Ok(Formula::exists(&x, Formula::and(phi_n_at(n, &x)?, Formula::d("y", &x))))
}

/// The finite part of the bouquet type in `y` for the indices `a0` (required
/// flower neighbours) and `a1` (forbidden ones).
pub fn beta_fragment(a0: &BTreeSet<usize>, a1: &BTreeSet<usize>) -> Result<Vec<Formula>> {
    if let Some(&n) = a0.intersection(a1).next() {
        return Err(Error::Overlap(n));
    }
    let mut out = vec![Formula::not(Formula::d("y", "y"))];
    for &n in a0 {
        out.push(flower_neighbor(n)?);
    }
    for &n in a1 {
        out.push(Formula::not(flower_neighbor(n)?));
    }
    Ok(out)
}

/// How membership of a sentence in the class of symmetric sentences was
/// established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evidence {
    /// The formula has the symmetry axiom as a top-level conjunct.
    Syntactic,
    /// Every model with at most `max_size` elements has symmetric D.
    Checked { max_size: usize },
}

/// An L1 sentence known to imply that D is symmetric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiClass {
    formula: Formula,
    evidence: Evidence,
}

impl PhiClass {
    /// `f ∧ ∀x∀y(D(x,y) → D(y,x))`.
    pub fn with_symmetry(f: Formula) -> Result<PhiClass> {
        PhiClass::syntactic(Formula::and(f, symmetry_axiom()))
    }

    /// Accepts `f` if one of its top-level conjuncts is the symmetry axiom up
    /// to renaming of bound variables.
    pub fn syntactic(f: Formula) -> Result<PhiClass> {
        check_sentence(&f)?;
        let axiom = symmetry_axiom();
        if f.conjuncts().iter().any(|c| c.alpha_eq(&axiom)) {
            Ok(PhiClass { formula: f, evidence: Evidence::Syntactic })
        } else {
            Err(Error::NotInPhi("no top-level symmetry conjunct".into()))
        }
    }

    /// Accepts `f` if every D-structure with at most `max_size` elements
    /// satisfying `f` has symmetric D. D ranges over all binary relations.
    pub fn checked(f: Formula, max_size: usize) -> Result<PhiClass> {
        check_sentence(&f)?;
        for n in 0..=max_size {
            let cells = n * n;
            for bits in 0u64..(1u64 << cells) {
                let mut m = FiniteStructure::new(Language::L1, n);
                for c in 0..cells {
                    if bits >> c & 1 == 1 {
                        m.insert_pair(Symbol::D, c / n, c % n);
                    }
                }
                if eval_sentence(&m, &f)? && !m.relation(Symbol::D).is_some_and(|r| r.is_symmetric()) {
                    return Err(Error::NotInPhi(format!("a model on {n} elements has asymmetric D")));
                }
            }
        }
        Ok(PhiClass { formula: f, evidence: Evidence::Checked { max_size } })
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn evidence(&self) -> Evidence {
        self.evidence
    }

    pub fn mu(&self) -> Formula {
        mu(&self.formula)
    }
}

fn check_sentence(f: &Formula) -> Result<()> {
    if let Some(v) = f.free_vars().into_iter().next() {
        return Err(Error::UnboundVariable(v));
    }
    if let Some(&s) = f.symbols().iter().find(|&&s| !Language::L1.has(s)) {
        return Err(Error::SymbolNotInLanguage { symbol: s, language: Language::L1 });
    }
    Ok(())
}

/// `∃x(¬D(x,x) ∧ χ(x))` where `χ` relativises every quantifier of `f` to the
/// D-neighbours of a fresh variable `x`.
pub fn mu(f: &Formula) -> Formula {
    let x = fresh_var(f, "x");
    Formula::exists(&x, Formula::and(Formula::not(Formula::d(&x, &x)), relativize(f, &x)))
}

fn relativize(f: &Formula, x: &str) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Rel(..) | Formula::Eq(..) => f.clone(),
        Formula::Not(a) => Formula::not(relativize(a, x)),
        Formula::And(a, b) => Formula::and(relativize(a, x), relativize(b, x)),
        Formula::Or(a, b) => Formula::or(relativize(a, x), relativize(b, x)),
        Formula::Implies(a, b) => Formula::implies(relativize(a, x), relativize(b, x)),
        Formula::Exists(y, a) => Formula::exists(y, Formula::and(Formula::d(x, y), relativize(a, x))),
        Formula::Forall(y, a) => Formula::forall(y, Formula::implies(Formula::d(x, y), relativize(a, x))),
    }
}

/// Relativises every quantifier over `v` to `guard(v)`.
pub(crate) fn relativize_with(f: &Formula, guard: &dyn Fn(&str) -> Formula) -> Formula {
    let r = |a: &Formula| relativize_with(a, guard);
    match f {
        Formula::True | Formula::False | Formula::Rel(..) | Formula::Eq(..) => f.clone(),
        Formula::Not(a) => Formula::not(r(a)),
        Formula::And(a, b) => Formula::and(r(a), r(b)),
        Formula::Or(a, b) => Formula::or(r(a), r(b)),
        Formula::Implies(a, b) => Formula::implies(r(a), r(b)),
        Formula::Exists(y, a) => Formula::exists(y, Formula::and(guard(y), r(a))),
        Formula::Forall(y, a) => Formula::forall(y, Formula::implies(guard(y), r(a))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::eval::eval_at;

    #[test]
    fn phi_one_shape() {
        let want: Formula = "!D(x,x) & (exists z0. D(z0,x) & (forall z. D(z,x) -> z=z0))".parse().unwrap();
        assert_eq!(phi_n(1).unwrap(), want);
        assert_eq!(phi_n(0), Err(Error::NotPositive));
    }

    #[test]
    fn phi_counts_neighbours() {
        // path 0 - 1 - 2, plus a looped 3 joined to 0
        let mut g = FiniteStructure::new(Language::L1, 4);
        g.add_edge(Symbol::D, 0, 1).unwrap();
        g.add_edge(Symbol::D, 1, 2).unwrap();
        g.add_edge(Symbol::D, 3, 3).unwrap();
        g.add_edge(Symbol::D, 3, 0).unwrap();
        assert_eq!(eval_at(&g, &phi_n(2).unwrap(), "x", 1), Ok(true));
        assert_eq!(eval_at(&g, &phi_n(1).unwrap(), "x", 1), Ok(false));
        assert_eq!(eval_at(&g, &phi_n(2).unwrap(), "x", 0), Ok(true));
        assert_eq!(eval_at(&g, &phi_n(2).unwrap(), "x", 3), Ok(false));
        assert_eq!(eval_at(&g, &phi_n_at(1, "z").unwrap(), "z", 2), Ok(true));
    }

    #[test]
    fn beta_fragment_layout() {
        let set = |v: &[usize]| v.iter().copied().collect::<BTreeSet<_>>();
        assert_eq!(beta_fragment(&set(&[]), &set(&[])).unwrap(), vec![Formula::not(Formula::d("y", "y"))]);
        let b = beta_fragment(&set(&[1]), &set(&[2])).unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(b[1], Formula::exists("x1", Formula::and(phi_n_at(1, "x1").unwrap(), Formula::d("y", "x1"))));
        assert_eq!(b[2], Formula::not(flower_neighbor(2).unwrap()));
        assert_eq!(beta_fragment(&set(&[1, 2]), &set(&[2])), Err(Error::Overlap(2)));
    }

    #[test]
    fn mu_transform() {
        let f: Formula = "exists y. D(y,y)".parse().unwrap();
        let want: Formula = "exists x. !D(x,x) & (exists y. D(x,y) & D(y,y))".parse().unwrap();
        assert_eq!(mu(&f), want);
        let g: Formula = "forall x. D(x,x)".parse().unwrap();
        let want: Formula = "exists x0. !D(x0,x0) & (forall x. D(x0,x) -> D(x,x))".parse().unwrap();
        assert_eq!(mu(&g), want);
    }

    #[test]
    fn phi_class_evidence() {
        let p = PhiClass::with_symmetry("exists y. D(y,y)".parse().unwrap()).unwrap();
        assert_eq!(p.evidence(), Evidence::Syntactic);
        let renamed: Formula = "(forall a. forall b. D(a,b) -> D(b,a)) & true".parse().unwrap();
        assert!(PhiClass::syntactic(renamed).is_ok());
        assert!(matches!(PhiClass::syntactic("exists y. D(y,y)".parse().unwrap()), Err(Error::NotInPhi(_))));

        // every model has at most one element, so D is symmetric
        let small: Formula = "forall x. forall y. x=y".parse().unwrap();
        assert_eq!(PhiClass::checked(small, 3).unwrap().evidence(), Evidence::Checked { max_size: 3 });
        let loose: Formula = "exists x. D(x,x)".parse().unwrap();
        assert!(matches!(PhiClass::checked(loose, 2), Err(Error::NotInPhi(_))));
        assert!(matches!(PhiClass::syntactic("D(x,y)".parse().unwrap()), Err(Error::UnboundVariable(_))));
    }
}
