//! Resource caps for enumeration and isometry search.

/// Caps on |A| for element enumeration and on the number of partial
/// assignments explored by the isometry search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_order: u64,
    pub search_budget: u64,
}

impl Limits {
    pub const DEFAULT_MAX_ORDER: u64 = 20_000;
    pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

    /// Reads `FQGAUSS_MAX_ORDER` and `FQGAUSS_SEARCH_BUDGET`, falling back to the defaults.
    pub fn from_env() -> Limits {
        fn read(var: &str, default: u64) -> u64 {
            std::env::var(var).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(default)
        }
        Limits {
            max_order: read("FQGAUSS_MAX_ORDER", Self::DEFAULT_MAX_ORDER),
            search_budget: read("FQGAUSS_SEARCH_BUDGET", Self::DEFAULT_SEARCH_BUDGET),
        }
    }

    pub fn with_max_order(self, max_order: u64) -> Limits {
        Limits { max_order, ..self }
    }

    pub fn with_budget(self, search_budget: u64) -> Limits {
        Limits { search_budget, ..self }
    }
}

impl Default for Limits {
    fn default() -> Limits {
        Limits { max_order: Self::DEFAULT_MAX_ORDER, search_budget: Self::DEFAULT_SEARCH_BUDGET }
    }
}
