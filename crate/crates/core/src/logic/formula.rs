use std::collections::BTreeSet;
use std::fmt;

use crate::structure::{Language, Symbol};

/// First-order formulas over the relational languages L1, L0 and LNBG.
/// Terms are variables only.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Rel(Symbol, String, String),
    Eq(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn rel(sym: Symbol, x: impl Into<String>, y: impl Into<String>) -> Formula {
        Formula::Rel(sym, x.into(), y.into())
    }

    pub fn d(x: impl Into<String>, y: impl Into<String>) -> Formula {
        Formula::rel(Symbol::D, x, y)
    }

    pub fn eq(x: impl Into<String>, y: impl Into<String>) -> Formula {
        Formula::Eq(x.into(), y.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(x: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(x.into(), Box::new(body))
    }

    pub fn forall(x: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(x.into(), Box::new(body))
    }

    /// Left-nested conjunction; `True` when empty.
    pub fn conj<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
        parts.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `False` when empty.
    pub fn disj<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
        parts.into_iter().reduce(Formula::or).unwrap_or(Formula::False)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                Formula::True | Formula::False => {}
                Formula::Rel(_, x, y) | Formula::Eq(x, y) => {
                    for v in [x, y] {
                        if !bound.contains(v) {
                            out.insert(v.clone());
                        }
                    }
                }
                Formula::Not(a) => go(a, bound, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Exists(v, a) | Formula::Forall(v, a) => {
                    bound.push(v.clone());
                    go(a, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable name occurring anywhere, free or bound.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Rel(_, x, y) | Formula::Eq(x, y) => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            Formula::Exists(v, _) | Formula::Forall(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Rel(s, _, _) = f {
                out.insert(*s);
            }
        });
        out
    }

    /// Whether every relation symbol belongs to `lang`.
    pub fn fits(&self, lang: Language) -> bool {
        self.symbols().iter().all(|&s| lang.has(s))
    }

    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Rel(..) | Formula::Eq(..) => 0,
            Formula::Not(a) => a.quantifier_rank(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.quantifier_rank().max(b.quantifier_rank())
            }
            Formula::Exists(_, a) | Formula::Forall(_, a) => 1 + a.quantifier_rank(),
        }
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => a.visit(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    /// Renames free occurrences of `from` to `to`. The caller guarantees that
    /// `to` is not bound anywhere in the formula.
    pub fn rename_free(&self, from: &str, to: &str) -> Formula {
        let swap = |v: &String| if v == from { to.to_string() } else { v.clone() };
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Rel(s, x, y) => Formula::Rel(*s, swap(x), swap(y)),
            Formula::Eq(x, y) => Formula::Eq(swap(x), swap(y)),
            Formula::Not(a) => Formula::not(a.rename_free(from, to)),
            Formula::And(a, b) => Formula::and(a.rename_free(from, to), b.rename_free(from, to)),
            Formula::Or(a, b) => Formula::or(a.rename_free(from, to), b.rename_free(from, to)),
            Formula::Implies(a, b) => Formula::implies(a.rename_free(from, to), b.rename_free(from, to)),
            Formula::Exists(v, _) | Formula::Forall(v, _) if v == from => self.clone(),
            Formula::Exists(v, a) => Formula::exists(v.clone(), a.rename_free(from, to)),
            Formula::Forall(v, a) => Formula::forall(v.clone(), a.rename_free(from, to)),
        }
    }

    /// Equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        fn var_eq(x: &str, y: &str, env: &[(&str, &str)]) -> bool {
            for &(a, b) in env.iter().rev() {
                if a == x || b == y {
                    return a == x && b == y;
                }
            }
            x == y
        }
        fn go<'a>(f: &'a Formula, g: &'a Formula, env: &mut Vec<(&'a str, &'a str)>) -> bool {
            match (f, g) {
                (Formula::True, Formula::True) | (Formula::False, Formula::False) => true,
                (Formula::Rel(s, x1, y1), Formula::Rel(t, x2, y2)) => {
                    s == t && var_eq(x1, x2, env) && var_eq(y1, y2, env)
                }
                (Formula::Eq(x1, y1), Formula::Eq(x2, y2)) => var_eq(x1, x2, env) && var_eq(y1, y2, env),
                (Formula::Not(a), Formula::Not(b)) => go(a, b, env),
                (Formula::And(a1, b1), Formula::And(a2, b2))
                | (Formula::Or(a1, b1), Formula::Or(a2, b2))
                | (Formula::Implies(a1, b1), Formula::Implies(a2, b2)) => go(a1, a2, env) && go(b1, b2, env),
                (Formula::Exists(v, a), Formula::Exists(w, b)) | (Formula::Forall(v, a), Formula::Forall(w, b)) => {
                    env.push((v, w));
                    let r = go(a, b, env);
                    env.pop();
                    r
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new())
    }

    /// The conjuncts of a left- or right-nested conjunction.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        match self {
            Formula::And(a, b) => {
                let mut out = a.conjuncts();
                out.extend(b.conjuncts());
                out
            }
            other => vec![other],
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Exists(..) | Formula::Forall(..) => 0,
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(..) => 4,
            _ => 5,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Formula::True => f.write_str("true")?,
            Formula::False => f.write_str("false")?,
            Formula::Rel(s, x, y) => write!(f, "{s}({x},{y})")?,
            Formula::Eq(x, y) => write!(f, "{x}={y}")?,
            Formula::Not(a) => {
                f.write_str("!")?;
                a.write(f, 4)?;
            }
            Formula::And(a, b) => {
                a.write(f, 3)?;
                f.write_str(" & ")?;
                b.write(f, 4)?;
            }
            Formula::Or(a, b) => {
                a.write(f, 2)?;
                f.write_str(" | ")?;
                b.write(f, 3)?;
            }
            Formula::Implies(a, b) => {
                a.write(f, 2)?;
                f.write_str(" -> ")?;
                b.write(f, 1)?;
            }
            Formula::Exists(v, a) => {
                write!(f, "exists {v}. ")?;
                a.write(f, 0)?;
            }
            Formula::Forall(v, a) => {
                write!(f, "forall {v}. ")?;
                a.write(f, 0)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

/// A name not occurring in `f`: `base` itself if free to use, otherwise
/// `base0`, `base1`, ...
pub fn fresh_var(f: &Formula, base: &str) -> String {
    let used = f.all_vars();
    fresh_among(&used, base)
}

pub(crate) fn fresh_among(used: &BTreeSet<String>, base: &str) -> String {
    if !used.contains(base) {
        return base.to_string();
    }
    (0..)
        .map(|i| format!("{base}{i}"))
        .find(|v| !used.contains(v))
        .expect("unbounded supply of names")
}
