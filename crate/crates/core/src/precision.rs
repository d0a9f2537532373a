use rug::Float;

use crate::error::{Error, Result};

pub const MIN_BITS: u32 = 8;
pub const DEFAULT_BITS: u32 = 64;

/// Working precision and requested absolute accuracy.
#[derive(Clone, Debug, PartialEq)]
pub struct Precision {
    working_bits: u32,
    target_abs_error: Float,
}

impl Precision {
    pub fn new(working_bits: u32, target_abs_error: Float) -> Result<Self> {
        if working_bits < MIN_BITS {
            return Err(Error::Precision(format!(
                "working precision must be at least {MIN_BITS} bits, got {working_bits}"
            )));
        }
        if !(target_abs_error.is_finite() && target_abs_error > 0) {
            return Err(Error::Precision("target error must be a positive finite number".into()));
        }
        Ok(Precision {
            working_bits,
            target_abs_error,
        })
    }

    /// Target `2^-(bits - 8)` at the given working precision.
    pub fn bits(working_bits: u32) -> Result<Self> {
        let exp = working_bits.saturating_sub(8).max(1) as i32;
        Self::new(working_bits, Float::with_val(64, 1) >> exp)
    }

    pub fn working_bits(&self) -> u32 {
        self.working_bits
    }

    pub fn target_abs_error(&self) -> &Float {
        &self.target_abs_error
    }

    /// `-log2(target)`, rounded up.
    pub fn target_bits(&self) -> u32 {
        let l = self.target_abs_error.clone().log2();
        let l = -l.to_f64();
        if l <= 0.0 {
            0
        } else {
            l.ceil() as u32
        }
    }

    pub fn with_bits(&self, working_bits: u32) -> Self {
        Precision {
            working_bits: working_bits.max(MIN_BITS),
            target_abs_error: self.target_abs_error.clone(),
        }
    }

    pub fn with_target(&self, target: Float) -> Result<Self> {
        Self::new(self.working_bits, target)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            working_bits: DEFAULT_BITS,
            target_abs_error: Float::with_val(64, 1) >> 53,
        }
    }
}
