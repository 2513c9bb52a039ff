//! Translation tables from source names to target text.

use std::collections::{BTreeMap, BTreeSet};

use boxtract_core::ast::Kername;
use serde::{Deserialize, Serialize};

/// Target rendering of an inductive type and its constructors.
///
/// The type name `*` prints as a tuple type and the constructor `(,)` as a
/// tuple; the constructor `::` prints infix.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndRemap {
    pub name: String,
    #[serde(default)]
    pub ctors: Vec<String>,
}

/// Constants map to inline target text; `{ty}` in that text is replaced by
/// the type of the first argument. Ignored names are not printed at all.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemapTable {
    #[serde(default)]
    pub constants: BTreeMap<String, String>,
    #[serde(default)]
    pub inductives: BTreeMap<String, IndRemap>,
    #[serde(default)]
    pub ignored: BTreeSet<String>,
}

impl RemapTable {
    pub fn from_json(text: &str) -> serde_json::Result<RemapTable> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("remap tables always serialize")
    }

    pub fn constant(&self, k: &Kername) -> Option<&str> {
        self.constants.get(&k.to_string()).map(String::as_str)
    }

    pub fn inductive(&self, k: &Kername) -> Option<&IndRemap> {
        self.inductives.get(&k.to_string())
    }

    pub fn is_ignored(&self, k: &Kername) -> bool {
        self.ignored.contains(&k.to_string())
    }

    /// Remapped or ignored: no definition is printed for `k`.
    pub fn hides(&self, k: &Kername) -> bool {
        self.is_ignored(k) || self.constant(k).is_some() || self.inductive(k).is_some()
    }

    /// Entries of `other` take precedence.
    pub fn merge(&mut self, other: RemapTable) {
        self.constants.extend(other.constants);
        self.inductives.extend(other.inductives);
        self.ignored.extend(other.ignored);
    }
}
