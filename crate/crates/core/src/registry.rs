//! Name-keyed registries of interchangeable algorithm variants.

use std::collections::HashMap;

use crate::error::{Error, Result};

pub trait Strategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
}

/// Strategies kept in registration order and looked up by name.
pub struct Registry<T: ?Sized + Strategy> {
    kind: &'static str,
    entries: Vec<Box<T>>,
    index: HashMap<&'static str, usize>,
}

impl<T: ?Sized + Strategy> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self { kind, entries: Vec::new(), index: HashMap::new() }
    }

    /// Register a strategy; a later registration under the same name replaces the earlier one.
    pub fn register(&mut self, strategy: Box<T>) {
        let name = strategy.name();
        match self.index.get(name) {
            Some(&slot) => self.entries[slot] = strategy,
            None => {
                self.index.insert(name, self.entries.len());
                self.entries.push(strategy);
            }
        }
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.index.get(name).map(|&i| self.entries[i].as_ref()).ok_or_else(|| Error::UnknownStrategy {
            kind: self.kind,
            name: name.to_string(),
            known: self.names().join(", "),
        })
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|s| s.name()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().map(|b| b.as_ref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Greeter: Strategy {
        fn greet(&self) -> String;
    }

    struct Plain(&'static str);

    impl Strategy for Plain {
        fn name(&self) -> &'static str {
            self.0
        }
        fn description(&self) -> &'static str {
            "plain"
        }
    }

    impl Greeter for Plain {
        fn greet(&self) -> String {
            format!("hello from {}", self.0)
        }
    }

    #[test]
    fn lookup_order_and_replacement() {
        let mut reg: Registry<dyn Greeter> = Registry::new("greeter");
        assert!(reg.is_empty());
        reg.register(Box::new(Plain("b")));
        reg.register(Box::new(Plain("a")));
        reg.register(Box::new(Plain("b")));
        assert_eq!(reg.names(), vec!["b", "a"]);
        assert_eq!(reg.get("a").unwrap().greet(), "hello from a");
        match reg.get("c") {
            Err(Error::UnknownStrategy { kind, name, known }) => {
                assert_eq!((kind, name.as_str(), known.as_str()), ("greeter", "c", "b, a"))
            }
            _ => panic!("expected unknown strategy"),
        }
    }
}
