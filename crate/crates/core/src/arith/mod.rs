//! Multi-precision reals, the quantum weights at the root `q = exp(2πi/r)`
//! with odd `r`, and the precision-doubling driver.

mod precision;
mod weights;

pub use precision::{with_precision_doubling, Evaluation, PrecisionOutcome, PrecisionPolicy};
pub use weights::{
    edge_weight, quantum_integer, tet_weight, triangle_weight, vertex_weight, TetScratch, WeightSystem,
};

use std::fmt;

use rug::Float;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("order r = {0} is not supported: r must be odd and at least 3")]
    EvenOrderUnsupported(u32),
    #[error("colors ({0}, {1}, {2}) do not form an admissible triangle")]
    InadmissibleTriple(u32, u32, u32),
    #[error("tetrahedron face ({0}, {1}, {2}) is not admissible")]
    InadmissibleFace(u32, u32, u32),
    #[error("results still disagree at the precision cap of {max_bits} bits")]
    PrecisionCapExceeded { max_bits: u32 },
}

/// A binary floating-point number with an explicit mantissa width.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct BigReal(pub Float);

impl BigReal {
    pub fn with_val<T>(bits: u32, val: T) -> Self
    where
        Float: rug::Assign<T>,
    {
        BigReal(Float::with_val(bits, val))
    }

    pub fn bits(&self) -> u32 {
        self.0.prec()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    /// Scientific decimal representation with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        format_decimal(&self.0, digits)
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(decimal_digits(self.bits())))
    }
}

/// Significant decimal digits carried by a `bits`-wide mantissa.
pub fn decimal_digits(bits: u32) -> usize {
    ((bits as f64) * std::f64::consts::LOG10_2).floor().max(1.0) as usize
}

pub(crate) fn format_decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits))
}
