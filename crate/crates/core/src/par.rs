//! Execution strategy for data-parallel loops.
//!
//! Every parallel entry point takes an [`Exec`] so callers (and benches) can
//! choose at runtime. Without the `parallel` feature both variants run
//! sequentially. Results are always returned in input order, so output never
//! depends on the schedule.

/// How to evaluate independent work items.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.into_par_iter().map(f).collect()
            }
            _ => items.into_iter().map(f).collect(),
        }
    }

    /// Whether this strategy actually runs in parallel in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_strategies_preserve_order() {
        let items: Vec<u64> = (0..1000).collect();
        let a = Exec::Sequential.map(items.clone(), |x| x * x);
        let b = Exec::Parallel.map(items, |x| x * x);
        assert_eq!(a, b);
    }
}
