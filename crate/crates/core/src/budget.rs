use crate::error::{Error, Result};

/// Default cap on exhaustively enumerated items (hyperplanes or characters).
pub const DEFAULT_LIMIT: u128 = 10_000_000;

/// Enumeration budget. `force` disables the cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub limit: u128,
    pub force: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            limit: DEFAULT_LIMIT,
            force: false,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            limit: u128::MAX,
            force: true,
        }
    }

    pub fn check(&self, required: u128) -> Result<()> {
        if !self.force && required > self.limit {
            return Err(Error::BudgetExceeded {
                required,
                limit: self.limit,
            });
        }
        Ok(())
    }
}

/// `p^n`, saturating.
pub(crate) fn saturating_pow(p: u32, n: usize) -> u128 {
    (p as u128).saturating_pow(n.min(u32::MAX as usize) as u32)
}
