//! Small shared helpers: union-find and the enumeration ceiling.

use std::cell::Cell;

/// Union-find over `0..n` with path compression and union by size.
///
/// Used to compute coend quotients: nodes are candidate elements, edges are
/// instances of the defining zigzag relation.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<Cell<usize>>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).map(Cell::new).collect(),
            size: vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&self, mut x: usize) -> usize {
        // Path compression through the `Cell`s; `&self` is enough.
        let mut root = x;
        while self.parent[root].get() != root {
            root = self.parent[root].get();
        }
        while self.parent[x].get() != root {
            let next = self.parent[x].get();
            self.parent[x].set(root);
            x = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small].set(big);
        self.size[big] += self.size[small];
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Number of equivalence classes.
    pub fn class_count(&self) -> usize {
        (0..self.len()).filter(|&i| self.find(i) == i).count()
    }
}

/// Escape `\` and `|` within an id component so ids joined with `|` stay
/// unambiguous even when the components themselves are generated ids that
/// contain the delimiter.
pub fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        if ch == '\\' || ch == '|' {
            out.push('\\');
        }
        out.push(ch);
    }
    out
}

/// Split a key of [`esc`]-escaped components joined with `|`, undoing the
/// escaping.  Returns one entry per component.
pub fn split_key(s: &str) -> Vec<String> {
    let mut parts = vec![String::new()];
    let mut chars = s.chars();
    while let Some(ch) = chars.next() {
        match ch {
            '\\' => {
                if let Some(next) = chars.next() {
                    parts.last_mut().expect("nonempty").push(next);
                }
            }
            '|' => parts.push(String::new()),
            _ => parts.last_mut().expect("nonempty").push(ch),
        }
    }
    parts
}

/// Default ceiling on enumeration work (candidate tuples examined).
pub const DEFAULT_CEILING: u64 = 1_000_000;

/// Environment variable overriding [`DEFAULT_CEILING`].
pub const CEILING_ENV_VAR: &str = "MULTIKLEISLI_CEILING";

/// Resolve the active enumeration ceiling: an explicit argument wins,
/// otherwise the `MULTIKLEISLI_CEILING` environment variable, otherwise the
/// default.
pub fn resolve_ceiling(explicit: Option<u64>) -> u64 {
    if let Some(c) = explicit {
        return c;
    }
    if let Ok(v) = std::env::var(CEILING_ENV_VAR) {
        if let Ok(c) = v.trim().parse::<u64>() {
            return c;
        }
    }
    DEFAULT_CEILING
}

/// Raised when an enumeration would exceed its ceiling.  This is a refusal,
/// not an approximation: no partial answer is produced.
#[derive(Debug, Clone, thiserror::Error)]
#[error("enumeration of {what} would examine about {estimate} candidates, over the ceiling {ceiling}")]
pub struct CeilingExceeded {
    pub what: String,
    pub estimate: u64,
    pub ceiling: u64,
}

/// Budget meter for enumerations guarded by a ceiling.
#[derive(Debug, Clone)]
pub struct Budget {
    spent: u64,
    ceiling: u64,
    what: String,
}

impl Budget {
    pub fn new(what: impl Into<String>, ceiling: u64) -> Self {
        Budget {
            spent: 0,
            ceiling,
            what: what.into(),
        }
    }

    /// Record `n` candidates examined; errors once the ceiling is crossed.
    pub fn charge(&mut self, n: u64) -> Result<(), CeilingExceeded> {
        self.spent = self.spent.saturating_add(n);
        if self.spent > self.ceiling {
            Err(CeilingExceeded {
                what: self.what.clone(),
                estimate: self.spent,
                ceiling: self.ceiling,
            })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_find_components() {
        let mut uf = UnionFind::new(6);
        uf.union(0, 1);
        uf.union(2, 3);
        uf.union(1, 2);
        assert!(uf.same(0, 3));
        assert!(!uf.same(0, 4));
        assert_eq!(uf.class_count(), 3);
    }

    #[test]
    fn budget_trips_over_ceiling() {
        let mut b = Budget::new("test", 10);
        assert!(b.charge(10).is_ok());
        assert!(b.charge(1).is_err());
    }
}
