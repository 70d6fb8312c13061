use std::sync::Arc;

use crate::error::{invalid, Result};

/// Ordered list of distinct variable names. A variable id is a position in
/// this list; extending a universe appends and never renumbers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariableUniverse {
    names: Arc<Vec<String>>,
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl VariableUniverse {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut out: Vec<String> = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            if !is_identifier(n) {
                return invalid(format!("`{n}` is not a valid variable name"));
            }
            if out.iter().any(|o| o == n) {
                return invalid(format!("duplicate variable name `{n}`"));
            }
            out.push(n.to_string());
        }
        Ok(Self { names: Arc::new(out) })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Appends fresh names; existing ids are preserved.
    pub fn extend<S: AsRef<str>>(&self, extra: &[S]) -> Result<Self> {
        let mut all: Vec<&str> = self.names.iter().map(String::as_str).collect();
        all.extend(extra.iter().map(|s| s.as_ref()));
        Self::new(&all)
    }

    /// A name not yet in the universe, derived from `stem`.
    pub fn fresh_name(&self, stem: &str) -> String {
        let mut candidate = stem.to_string();
        let mut k = 0;
        while self.index_of(&candidate).is_some() {
            k += 1;
            candidate = format!("{stem}{k}");
        }
        candidate
    }

    /// Extends by one fresh variable and returns its id.
    pub fn with_fresh(&self, stem: &str) -> (Self, usize) {
        let name = self.fresh_name(stem);
        let ext = self.extend(&[name]).expect("fresh name is valid and unique");
        let id = ext.len() - 1;
        (ext, id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_bad_names() {
        assert!(VariableUniverse::new(&["x", "x"]).is_err());
        assert!(VariableUniverse::new(&["1x"]).is_err());
        assert!(VariableUniverse::new(&["x_1", "yB2"]).is_ok());
    }

    #[test]
    fn extension_keeps_ids() {
        let u = VariableUniverse::new(&["x", "y"]).unwrap();
        let (v, t) = u.with_fresh("x");
        assert_eq!(v.index_of("x"), Some(0));
        assert_eq!(v.index_of("y"), Some(1));
        assert_eq!(t, 2);
        assert_eq!(v.name(2), "x1");
    }
}
