//! Named subsets of the three sorts, as referenced by queries.

use std::collections::HashMap;

use crate::affordance::{Sort, SortSet};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NamedSets {
    entries: Vec<(String, SortSet)>,
    index: HashMap<String, usize>,
}

impl NamedSets {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false (and keeps the old entry) if the name is taken.
    pub fn insert(&mut self, name: impl Into<String>, set: SortSet) -> bool {
        let name = name.into();
        if self.index.contains_key(&name) {
            return false;
        }
        self.index.insert(name.clone(), self.entries.len());
        self.entries.push((name, set));
        true
    }

    pub fn get(&self, name: &str) -> Option<&SortSet> {
        self.index.get(name).map(|&i| &self.entries[i].1)
    }

    pub fn sort_of(&self, name: &str) -> Option<Sort> {
        self.get(name).map(|s| s.sort)
    }

    /// Name to sort map, the declaration environment for sort checking.
    pub fn declarations(&self) -> HashMap<String, Sort> {
        self.entries
            .iter()
            .map(|(n, s)| (n.clone(), s.sort))
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &SortSet)> {
        self.entries.iter().map(|(n, s)| (n.as_str(), s))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
