use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ordered symbol table shared by every polynomial built over it.
///
/// Phase variables come first and parameters last; the position of a symbol
/// is its exponent slot and fixes the graded-lexicographic term order.
#[derive(Clone)]
pub struct Ring(Arc<RingData>);

struct RingData {
    names: Vec<String>,
    phase: usize,
}

impl Ring {
    pub fn new<S: AsRef<str>>(phase: &[S], params: &[S]) -> Ring {
        let mut names: Vec<String> = Vec::with_capacity(phase.len() + params.len());
        for s in phase.iter().chain(params) {
            let s = s.as_ref();
            assert!(
                !names.iter().any(|n| n == s),
                "duplicate symbol `{s}` in ring"
            );
            names.push(s.to_string());
        }
        Ring(Arc::new(RingData {
            names,
            phase: phase.len(),
        }))
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0.names[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|n| n == name)
    }

    pub fn var(&self, name: &str) -> Result<usize> {
        self.index(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn vars<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        names.iter().map(|n| self.var(n.as_ref())).collect()
    }

    pub fn phase_count(&self) -> usize {
        self.0.phase
    }

    pub fn is_param(&self, i: usize) -> bool {
        i >= self.0.phase
    }

    pub fn same(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.names == other.0.names
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Ring) -> bool {
        self.same(other)
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring[")?;
        for (i, n) in self.0.names.iter().enumerate() {
            if i == self.0.phase {
                write!(f, "; ")?;
            } else if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "]")
    }
}
