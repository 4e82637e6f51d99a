//! Case-insensitive identifiers that remember how they were first spelled.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An identifier compared by its lower-cased form.
///
/// Equality, ordering and hashing only look at the canonical (lower-case)
/// spelling; `Display` uses the spelling the symbol was created with, so a
/// predicate declared as `Ontable` renders as `Ontable` even when a plan file
/// writes `ontable`.
#[derive(Clone)]
pub struct Symbol {
    canonical: String,
    display: String,
}

impl Symbol {
    pub fn new(spelling: impl Into<String>) -> Self {
        let display = spelling.into();
        Symbol {
            canonical: display.to_lowercase(),
            display,
        }
    }

    pub fn canonical(&self) -> &str {
        &self.canonical
    }

    pub fn display_name(&self) -> &str {
        &self.display
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        self.canonical == other.canonical
    }
}

impl Eq for Symbol {}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical.cmp(&other.canonical)
    }
}

impl Hash for Symbol {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical.hash(state);
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.display)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl From<String> for Symbol {
    fn from(s: String) -> Self {
        Symbol::new(s)
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.display)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer).map(Symbol::new)
    }
}
