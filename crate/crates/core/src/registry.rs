//! Name-keyed registries for interchangeable strategies.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{MidyError, Result};

/// Anything that can be stored in a [`Registry`].
pub trait Named {
    fn name(&self) -> &'static str;
}

/// Strategies of one family, looked up by name at runtime. Iteration order
/// is the registration order.
pub struct Registry<T: ?Sized + Named> {
    kind: &'static str,
    order: Vec<&'static str>,
    entries: BTreeMap<&'static str, Arc<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry {
            kind,
            order: Vec::new(),
            entries: BTreeMap::new(),
        }
    }

    /// Adds a strategy, replacing any previous one with the same name.
    pub fn register(&mut self, strategy: impl Into<Arc<T>>) -> &mut Self {
        let strategy = strategy.into();
        let name = strategy.name();
        if self.entries.insert(name, strategy).is_none() {
            self.order.push(name);
        }
        self
    }

    pub fn get(&self, name: &str) -> Result<Arc<T>> {
        self.entries
            .get(name)
            .cloned()
            .ok_or_else(|| MidyError::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                available: self.order.join(", "),
            })
    }

    pub fn names(&self) -> &[&'static str] {
        &self.order
    }

    pub fn iter(&self) -> impl Iterator<Item = Arc<T>> + '_ {
        self.order.iter().map(|n| Arc::clone(&self.entries[n]))
    }
}
