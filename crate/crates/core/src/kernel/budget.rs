use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 10_000_000;
pub const BUDGET_ENV: &str = "CODENSITY_BUDGET";

/// Upper bound on search steps for a single enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    /// Default budget, overridden by the `CODENSITY_BUDGET` environment variable.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(v) => v.trim().parse::<u64>().map(Budget).map_err(|_| {
                Error::Input(format!(
                    "{BUDGET_ENV} must be a positive integer, got {v:?}"
                ))
            }),
            Err(_) => Ok(Budget::default()),
        }
    }

    pub fn meter<'a>(&self, what: &'a str) -> Meter<'a> {
        Meter {
            used: 0,
            limit: self.0,
            what,
        }
    }

    /// Fails when a precomputed count is already over budget.
    pub fn admit(&self, count: u128, what: &str) -> Result<()> {
        if count > self.0 as u128 {
            return Err(Error::BudgetExceeded {
                what: what.to_string(),
                limit: self.0,
            });
        }
        Ok(())
    }
}

pub struct Meter<'a> {
    used: u64,
    limit: u64,
    what: &'a str,
}

impl Meter<'_> {
    pub fn tick(&mut self) -> Result<()> {
        self.add(1)
    }

    pub fn add(&mut self, n: u64) -> Result<()> {
        self.used += n;
        if self.used > self.limit {
            return Err(Error::BudgetExceeded {
                what: self.what.to_string(),
                limit: self.limit,
            });
        }
        Ok(())
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}
