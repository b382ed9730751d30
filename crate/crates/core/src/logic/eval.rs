use std::collections::HashMap;

use super::formula::Formula;
use crate::error::{Error, Result};
use crate::structure::{FiniteStructure, Relation};

/// Formula with variables resolved to slots and symbols to relations.
enum Compiled<'a> {
    Const(bool),
    Rel(&'a Relation, usize, usize),
    Eq(usize, usize),
    Not(Box<Compiled<'a>>),
    And(Box<Compiled<'a>>, Box<Compiled<'a>>),
    Or(Box<Compiled<'a>>, Box<Compiled<'a>>),
    Implies(Box<Compiled<'a>>, Box<Compiled<'a>>),
    Exists(usize, Box<Compiled<'a>>),
    Forall(usize, Box<Compiled<'a>>),
}

struct Compiler<'a, 'f> {
    m: &'a FiniteStructure,
    slots: HashMap<&'f str, usize>,
}

impl<'a, 'f> Compiler<'a, 'f> {
    fn slot(&mut self, v: &'f str) -> usize {
        let next = self.slots.len();
        *self.slots.entry(v).or_insert(next)
    }

    fn compile(&mut self, f: &'f Formula) -> Result<Compiled<'a>> {
        Ok(match f {
            Formula::True => Compiled::Const(true),
            Formula::False => Compiled::Const(false),
            Formula::Rel(sym, x, y) => {
                let rel = self
                    .m
                    .relation(*sym)
                    .ok_or(Error::SymbolNotInLanguage { symbol: *sym, language: self.m.language() })?;
                Compiled::Rel(rel, self.slot(x), self.slot(y))
            }
            Formula::Eq(x, y) => Compiled::Eq(self.slot(x), self.slot(y)),
            Formula::Not(a) => Compiled::Not(Box::new(self.compile(a)?)),
            Formula::And(a, b) => Compiled::And(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Formula::Or(a, b) => Compiled::Or(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Formula::Implies(a, b) => Compiled::Implies(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Formula::Exists(v, a) => Compiled::Exists(self.slot(v), Box::new(self.compile(a)?)),
            Formula::Forall(v, a) => Compiled::Forall(self.slot(v), Box::new(self.compile(a)?)),
        })
    }
}

/// Pushes each conjunct under an `∃` prefix to the outermost level binding
/// all of its prefix variables, atoms first. Equivalent to `f`, but lets the
/// evaluator prune before the whole prefix is enumerated.
fn miniscope(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Rel(..) | Formula::Eq(..) => f.clone(),
        Formula::Not(a) => Formula::not(miniscope(a)),
        Formula::And(a, b) => Formula::and(miniscope(a), miniscope(b)),
        Formula::Or(a, b) => Formula::or(miniscope(a), miniscope(b)),
        Formula::Implies(a, b) => Formula::implies(miniscope(a), miniscope(b)),
        Formula::Forall(v, a) => Formula::forall(v, miniscope(a)),
        Formula::Exists(..) => {
            let mut vars: Vec<&str> = Vec::new();
            let mut body = f;
            while let Formula::Exists(v, a) = body {
                vars.push(v);
                body = a;
            }
            let mut distinct = vars.clone();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() != vars.len() {
                let Formula::Exists(v, a) = f else { unreachable!() };
                return Formula::exists(v, miniscope(a));
            }
            let mut levels: Vec<Vec<Formula>> = vec![Vec::new(); vars.len() + 1];
            for part in body.conjuncts() {
                let free = part.free_vars();
                let level = vars.iter().rposition(|v| free.contains(*v)).map_or(0, |i| i + 1);
                levels[level].push(miniscope(part));
            }
            for level in &mut levels {
                level.sort_by_key(|p| !is_literal(p));
            }
            let mut inner: Option<Formula> = None;
            for (i, v) in vars.iter().enumerate().rev() {
                let parts = levels[i + 1].drain(..).chain(inner.take());
                inner = Some(Formula::exists(*v, Formula::conj(parts)));
            }
            Formula::conj(levels[0].drain(..).chain(inner))
        }
    }
}

fn is_literal(f: &Formula) -> bool {
    match f {
        Formula::Rel(..) | Formula::Eq(..) => true,
        Formula::Not(a) => matches!(**a, Formula::Rel(..) | Formula::Eq(..)),
        _ => false,
    }
}

fn run(c: &Compiled<'_>, n: usize, env: &mut [usize]) -> bool {
    match c {
        Compiled::Const(b) => *b,
        Compiled::Rel(r, x, y) => r.get(env[*x], env[*y]),
        Compiled::Eq(x, y) => env[*x] == env[*y],
        Compiled::Not(a) => !run(a, n, env),
        Compiled::And(a, b) => run(a, n, env) && run(b, n, env),
        Compiled::Or(a, b) => run(a, n, env) || run(b, n, env),
        Compiled::Implies(a, b) => !run(a, n, env) || run(b, n, env),
        Compiled::Exists(s, a) => {
            let saved = env[*s];
            let r = (0..n).any(|v| {
                env[*s] = v;
                run(a, n, env)
            });
            env[*s] = saved;
            r
        }
        Compiled::Forall(s, a) => {
            let saved = env[*s];
            let r = (0..n).all(|v| {
                env[*s] = v;
                run(a, n, env)
            });
            env[*s] = saved;
            r
        }
    }
}

/// Truth of `f` in `m` under the assignment `asg` (variable, element).
/// Every free variable must be assigned; extra bindings are ignored.
pub fn eval<S: AsRef<str>>(m: &FiniteStructure, f: &Formula, asg: &[(S, usize)]) -> Result<bool> {
    for v in f.free_vars() {
        if !asg.iter().any(|(name, _)| name.as_ref() == v) {
            return Err(Error::UnboundVariable(v));
        }
    }
    let f = miniscope(f);
    let mut compiler = Compiler { m, slots: HashMap::new() };
    let compiled = compiler.compile(&f)?;
    let mut env = vec![0; compiler.slots.len()];
    for (name, value) in asg {
        if *value >= m.size() {
            return Err(Error::VertexOutOfRange { vertex: *value, size: m.size() });
        }
        if let Some(&s) = compiler.slots.get(name.as_ref()) {
            env[s] = *value;
        }
    }
    Ok(run(&compiled, m.size(), &mut env))
}

/// Truth of a sentence.
pub fn eval_sentence(m: &FiniteStructure, f: &Formula) -> Result<bool> {
    eval::<&str>(m, f, &[])
}

/// Truth of a formula with one free variable `var` at element `v`.
pub fn eval_at(m: &FiniteStructure, f: &Formula, var: &str, v: usize) -> Result<bool> {
    eval(m, f, &[(var, v)])
}
