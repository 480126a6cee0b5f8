use std::sync::Arc;

/// A persistent environment, innermost binding at the head.
#[derive(Debug)]
pub struct Env<T> {
    head: Option<Arc<(T, Env<T>)>>,
    len: usize,
}

impl<T> Clone for Env<T> {
    fn clone(&self) -> Self {
        Self {
            head: self.head.clone(),
            len: self.len,
        }
    }
}

impl<T> Default for Env<T> {
    fn default() -> Self {
        Self { head: None, len: 0 }
    }
}

impl<T> Env<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an environment from values listed outermost first.
    pub fn from_outer(items: impl IntoIterator<Item = T>) -> Self {
        items.into_iter().fold(Self::new(), |e, w| e.push(w))
    }

    pub fn push(&self, w: T) -> Self {
        Self {
            head: Some(Arc::new((w, self.clone()))),
            len: self.len + 1,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Looks up a de Bruijn index.
    pub fn get(&self, i: usize) -> Option<&T> {
        let mut cur = self.head.as_deref();
        for _ in 0..i {
            cur = cur?.1.head.as_deref();
        }
        cur.map(|(w, _)| w)
    }

    /// Values outermost first.
    pub fn to_outer(&self) -> Vec<&T> {
        let mut out = Vec::with_capacity(self.len);
        let mut cur = self.head.as_deref();
        while let Some((w, rest)) = cur {
            out.push(w);
            cur = rest.head.as_deref();
        }
        out.reverse();
        out
    }
}

impl<T: PartialEq> PartialEq for Env<T> {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.to_outer() == other.to_outer()
    }
}

impl<T: Eq> Eq for Env<T> {}

/// Positional names for printing closure bodies against an environment.
pub fn slot_names(n: usize) -> Vec<String> {
    (0..n).map(|k| format!("x{}", n - 1 - k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indices_count_from_innermost() {
        let e = Env::from_outer([1, 2, 3]);
        assert_eq!(e.get(0), Some(&3));
        assert_eq!(e.get(2), Some(&1));
        assert_eq!(e.get(3), None);
        assert_eq!(e.to_outer(), vec![&1, &2, &3]);
    }
}
