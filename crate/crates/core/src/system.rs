//! Flat systems of equations `x = S_x` and their unique solutions.
//!
//! Text format, one equation per line:
//!
//! ```text
//! x = { y, #0 }
//! y = { x, #{#0} }
//! ```
//!
//! Bare identifiers are indeterminates. `#n` is the von Neumann natural `n`
//! and `#{...}` is a literal set of literals; both are bound as atoms.
//! Lines starting with `//` or `%` are comments.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::store::{Hyperset, Store, Target};

#[derive(Debug, Clone, Default)]
pub struct FlatSystem {
    equations: Vec<(String, Vec<String>)>,
    atoms: BTreeMap<String, Hyperset>,
    allow_non_well_founded_atoms: bool,
}

impl FlatSystem {
    pub fn new() -> Self {
        Self::default()
    }

    /// Permits atoms that are not well-founded. Solutions stay well-defined.
    pub fn allow_non_well_founded_atoms(mut self, allow: bool) -> Self {
        self.allow_non_well_founded_atoms = allow;
        self
    }

    pub fn bind_atom(&mut self, name: impl Into<String>, set: Hyperset) -> &mut Self {
        self.atoms.insert(name.into(), set);
        self
    }

    pub fn add_equation<I, S>(&mut self, indeterminate: impl Into<String>, members: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.equations
            .push((indeterminate.into(), members.into_iter().map(Into::into).collect()));
        self
    }

    pub fn equations(&self) -> &[(String, Vec<String>)] {
        &self.equations
    }

    pub fn atoms(&self) -> &BTreeMap<String, Hyperset> {
        &self.atoms
    }

    pub fn indeterminates(&self) -> impl Iterator<Item = &str> {
        self.equations.iter().map(|(x, _)| x.as_str())
    }

    /// Checks the system's invariants against the store it will be solved in.
    pub fn validate(&self, store: &Store) -> Result<()> {
        let mut seen = HashSet::new();
        for (x, _) in &self.equations {
            if !seen.insert(x.as_str()) {
                return Err(Error::DuplicateEquation(x.clone()));
            }
            if self.atoms.contains_key(x) {
                return Err(Error::NameClash(x.clone()));
            }
        }
        for (name, &h) in &self.atoms {
            store.check(h)?;
            if !self.allow_non_well_founded_atoms && !store.is_well_founded(h) {
                return Err(Error::NonWellFoundedAtom(name.clone()));
            }
        }
        for (x, members) in &self.equations {
            for m in members {
                if !seen.contains(m.as_str()) && !self.atoms.contains_key(m) {
                    return Err(Error::UnknownName { name: m.clone(), equation: x.clone() });
                }
            }
        }
        Ok(())
    }

    /// Parses the text format. Literal atoms are built in `store`.
    pub fn parse(text: &str, store: &mut Store) -> Result<FlatSystem> {
        let mut sys = FlatSystem::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with("//") || line.starts_with('%') {
                continue;
            }
            let mut p = LineParser { s: line.as_bytes(), pos: 0, line: i + 1 };
            let x = p.ident()?;
            p.expect(b'=')?;
            p.expect(b'{')?;
            let mut members = Vec::new();
            if !p.eat(b'}') {
                loop {
                    p.skip_ws();
                    if p.peek() == Some(b'#') {
                        let (text, set) = p.literal(store)?;
                        sys.atoms.insert(text.clone(), set);
                        members.push(text);
                    } else {
                        members.push(p.ident()?);
                    }
                    if p.eat(b'}') {
                        break;
                    }
                    p.expect(b',')?;
                }
            }
            p.skip_ws();
            if p.pos != p.s.len() {
                return Err(p.error("trailing input after `}`"));
            }
            sys.equations.push((x, members));
        }
        Ok(sys)
    }
}

struct LineParser<'a> {
    s: &'a [u8],
    pos: usize,
    line: usize,
}

impl LineParser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { line: self.line, msg: format!("{msg} (column {})", self.pos + 1) }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {}
            _ => return Err(self.error("expected a name")),
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_' || c == b'\'') {
            self.pos += 1;
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    /// Parses `#n` or `#{...}`, returning normalized text and the set.
    fn literal(&mut self, store: &mut Store) -> Result<(String, Hyperset)> {
        self.skip_ws();
        if !self.eat(b'#') {
            return Err(self.error("expected a literal"));
        }
        if self.peek() == Some(b'{') {
            self.pos += 1;
            let mut parts = Vec::new();
            let mut elems = Vec::new();
            if !self.eat(b'}') {
                loop {
                    let (t, h) = self.literal(store)?;
                    parts.push(t);
                    elems.push(h);
                    if self.eat(b'}') {
                        break;
                    }
                    self.expect(b',')?;
                }
            }
            let set = store.set_of(elems)?;
            Ok((format!("#{{{}}}", parts.join(",")), set))
        } else {
            let start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            let digits = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or_default();
            let n: u32 = digits.parse().map_err(|_| self.error("expected a natural after `#`"))?;
            Ok((format!("#{n}"), store.hf_encode(n)))
        }
    }
}

/// Solves a flat system: returns the unique canonical set for every
/// indeterminate.
pub fn solve(store: &mut Store, sys: &FlatSystem) -> Result<BTreeMap<String, Hyperset>> {
    sys.validate(store)?;
    let index: HashMap<&str, usize> = sys
        .equations
        .iter()
        .enumerate()
        .map(|(i, (x, _))| (x.as_str(), i))
        .collect();
    let locals: Vec<Vec<Target>> = sys
        .equations
        .iter()
        .map(|(_, members)| {
            members
                .iter()
                .map(|m| match index.get(m.as_str()) {
                    Some(&i) => Target::Local(i),
                    None => Target::Stored(sys.atoms[m].node()),
                })
                .collect()
        })
        .collect();
    let nodes = store.insert(&locals);
    Ok(sys
        .equations
        .iter()
        .zip(nodes)
        .map(|((x, _), node)| (x.clone(), store.handle(node)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MUTUAL_PAIR: &str = "x = { y, #0 }\ny = { x, #{#0} }\n";

    #[test]
    fn mutual_pair() {
        let mut store = Store::new();
        let sys = FlatSystem::parse(MUTUAL_PAIR, &mut store).unwrap();
        let sol = solve(&mut store, &sys).unwrap();
        let (a, b) = (sol["x"], sol["y"]);
        let empty = store.hf_encode(0);
        let one = store.hf_encode(1);
        assert_ne!(a, b);
        let mut ea: Vec<_> = store.elements(a).collect();
        ea.sort();
        let mut want = vec![b, empty];
        want.sort();
        assert_eq!(ea, want);
        let mut eb: Vec<_> = store.elements(b).collect();
        eb.sort();
        let mut want = vec![a, one];
        want.sort();
        assert_eq!(eb, want);
        assert_eq!(store.member(b, a), Ok(true));
        assert_eq!(store.member(a, b), Ok(true));
        assert!(!store.is_well_founded(a));
    }

    #[test]
    fn self_member_with_naturals() {
        let mut store = Store::new();
        let sys = FlatSystem::parse("x = {x, #0, #1}", &mut store).unwrap();
        let c = solve(&mut store, &sys).unwrap()["x"];
        assert_eq!(store.member(c, c), Ok(true));
        let mut elems: Vec<_> = store.elements(c).collect();
        elems.sort();
        let mut want = vec![c, store.hf_encode(0), store.hf_encode(1)];
        want.sort();
        assert_eq!(elems, want);
    }

    #[test]
    fn non_injective_solution() {
        let mut store = Store::new();
        let mut sys = FlatSystem::new();
        sys.add_equation("x", ["y"]).add_equation("y", ["x"]);
        let sol = solve(&mut store, &sys).unwrap();
        assert_eq!(sol["x"], sol["y"]);
        assert_eq!(store.elements(sol["x"]).collect::<Vec<_>>(), vec![sol["x"]]);
    }

    #[test]
    fn empty_system() {
        let mut store = Store::new();
        assert!(solve(&mut store, &FlatSystem::new()).unwrap().is_empty());
    }

    #[test]
    fn local_bisimilar_to_atom_is_identified() {
        let mut store = Store::new();
        let omega = store.realize(&[vec![0]]).unwrap()[0];
        let one_omega = store.set_of([omega]).unwrap();
        let mut sys = FlatSystem::new().allow_non_well_founded_atoms(true);
        sys.bind_atom("w", omega)
            .add_equation("x", ["w"])
            .add_equation("y", ["z"])
            .add_equation("z", ["z"]);
        let sol = solve(&mut store, &sys).unwrap();
        assert_eq!(sol["x"], one_omega);
        assert_eq!(sol["y"], one_omega);
        assert_eq!(sol["z"], omega);
    }

    #[test]
    fn errors() {
        let mut store = Store::new();
        let mut sys = FlatSystem::new();
        sys.add_equation("x", ["q"]);
        assert_eq!(
            solve(&mut store, &sys),
            Err(Error::UnknownName { name: "q".into(), equation: "x".into() })
        );

        let mut sys = FlatSystem::new();
        sys.add_equation("x", Vec::<String>::new()).add_equation("x", ["x"]);
        assert_eq!(solve(&mut store, &sys), Err(Error::DuplicateEquation("x".into())));

        let omega = store.realize(&[vec![0]]).unwrap()[0];
        let mut sys = FlatSystem::new();
        sys.bind_atom("w", omega).add_equation("x", ["w"]);
        assert_eq!(solve(&mut store, &sys), Err(Error::NonWellFoundedAtom("w".into())));

        let e = store.empty_set();
        let mut sys = FlatSystem::new();
        sys.bind_atom("x", e).add_equation("x", ["x"]);
        assert_eq!(solve(&mut store, &sys), Err(Error::NameClash("x".into())));

        assert!(matches!(FlatSystem::parse("x = { y", &mut store), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(FlatSystem::parse("x { }", &mut store), Err(Error::Parse { .. })));
        assert!(matches!(FlatSystem::parse("x = { #z }", &mut store), Err(Error::Parse { .. })));
    }

    #[test]
    fn nested_literal() {
        let mut store = Store::new();
        let sys = FlatSystem::parse("x = { #{#0, #{#0}} }", &mut store).unwrap();
        let x = solve(&mut store, &sys).unwrap()["x"];
        let two = store.hf_encode(2);
        assert_eq!(store.elements(x).collect::<Vec<_>>(), vec![two]);
        assert!(sys.atoms().contains_key("#{#0,#{#0}}"));
    }
}
