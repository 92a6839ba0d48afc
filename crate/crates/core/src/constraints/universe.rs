use std::collections::{BTreeMap, BTreeSet};

use super::ConstraintError;

/// The finite set of concrete type symbols of a program together with the
/// closed-world relations over them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Universe {
    symbols: BTreeSet<String>,
    relations: BTreeMap<String, Relation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Relation {
    arity: usize,
    tuples: BTreeSet<Vec<String>>,
}

impl Universe {
    pub fn new(symbols: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Universe {
            symbols: symbols.into_iter().map(Into::into).collect(),
            relations: BTreeMap::new(),
        }
    }

    pub fn add_symbols(&mut self, symbols: impl IntoIterator<Item = impl Into<String>>) {
        self.symbols.extend(symbols.into_iter().map(Into::into));
    }

    pub fn symbols(&self) -> &BTreeSet<String> {
        &self.symbols
    }

    /// Define `name` to hold exactly on `tuples`. Symbols in the tuples join
    /// the universe.
    pub fn register_relation(
        &mut self,
        name: &str,
        tuples: impl IntoIterator<Item = Vec<String>>,
    ) -> Result<(), ConstraintError> {
        if self.relations.contains_key(name) {
            return Err(ConstraintError::RedefinedRelation(name.to_string()));
        }
        let tuples: BTreeSet<Vec<String>> = tuples.into_iter().collect();
        let arity = tuples.iter().next().map_or(2, Vec::len);
        if let Some(bad) = tuples.iter().find(|t| t.len() != arity) {
            return Err(ConstraintError::ArityMismatch {
                name: name.to_string(),
                expected: arity,
                found: bad.len(),
            });
        }
        for t in &tuples {
            self.symbols.extend(t.iter().cloned());
        }
        self.relations
            .insert(name.to_string(), Relation { arity, tuples });
        Ok(())
    }

    pub fn has_relation(&self, name: &str) -> bool {
        self.relations.contains_key(name)
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.relations.get(name).map(|r| r.arity)
    }

    /// Truth of `name(args)`, or `None` for an unregistered relation.
    pub fn holds(&self, name: &str, args: &[&str]) -> Option<bool> {
        let rel = self.relations.get(name)?;
        Some(
            rel.tuples
                .iter()
                .any(|t| t.iter().map(String::as_str).eq(args.iter().copied())),
        )
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, usize, &BTreeSet<Vec<String>>)> {
        self.relations
            .iter()
            .map(|(n, r)| (n.as_str(), r.arity, &r.tuples))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(p: &[(&str, &str)]) -> Vec<Vec<String>> {
        p.iter()
            .map(|(a, b)| vec![a.to_string(), b.to_string()])
            .collect()
    }

    #[test]
    fn closed_world_relation() {
        let mut u = Universe::new(["Book"]);
        u.register_relation(
            "inherit",
            pairs(&[("Faculty", "User"), ("Student", "User")]),
        )
        .unwrap();
        assert_eq!(u.holds("inherit", &["Faculty", "User"]), Some(true));
        assert_eq!(u.holds("inherit", &["User", "Faculty"]), Some(false));
        assert_eq!(u.holds("inherit", &["Book", "Book"]), Some(false));
        assert_eq!(u.holds("other", &["Book"]), None);
        assert!(u.symbols().contains("Faculty"));
    }

    #[test]
    fn redefinition_is_an_error() {
        let mut u = Universe::default();
        u.register_relation("inherit", pairs(&[("A", "B")]))
            .unwrap();
        assert_eq!(
            u.register_relation("inherit", pairs(&[])),
            Err(ConstraintError::RedefinedRelation("inherit".into()))
        );
    }
}
