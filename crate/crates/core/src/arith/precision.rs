use rug::Float;

use super::ArithError;

/// Rounding errors of a long sum may exceed one unit in the last place of
/// the term magnitudes by this many bits.
const NOISE_GUARD_BITS: u32 = 32;

/// Parameters of the precision-doubling driver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrecisionPolicy {
    pub initial_bits: u32,
    /// Largest accepted relative difference between the two evaluations.
    pub tau: f64,
    /// Two disagreeing evaluations are declared zero when both are at most
    /// `zero_threshold` in absolute value and the rounding noise of the
    /// wider one, bounded from the term magnitudes, is below it too.
    pub zero_threshold: f64,
    pub max_bits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy { initial_bits: 128, tau: 1e-6, zero_threshold: 1e-10, max_bits: 1 << 16 }
    }
}

/// One evaluation of a sum: its value and the sum of the absolute values of
/// its terms.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub value: Float,
    pub magnitude: Float,
}

impl Evaluation {
    pub fn exact(value: Float) -> Self {
        let magnitude = Float::with_val(value.prec(), value.abs_ref());
        Evaluation { value, magnitude }
    }

    /// Bound on the rounding error of the value at its width.
    fn noise(&self) -> Float {
        let bits = self.value.prec();
        let ulp = ((NOISE_GUARD_BITS as f64) - bits as f64).exp2();
        Float::with_val(self.magnitude.prec(), &self.magnitude * ulp)
    }

    /// Whether the value is indistinguishable from zero: at most `threshold`
    /// beyond its own rounding noise, or resolved and at most `threshold`.
    fn is_zero(&self, threshold: f64, resolved: bool) -> bool {
        let noise = self.noise();
        let value = Float::with_val(self.value.prec(), self.value.abs_ref());
        if resolved {
            noise <= threshold && value <= threshold
        } else {
            value <= noise + threshold
        }
    }
}

#[derive(Clone, Debug)]
pub struct PrecisionOutcome {
    /// The evaluation at twice `bits_used`; zero when `declared_zero`.
    pub value: Float,
    /// The smaller of the two agreeing widths.
    pub bits_used: u32,
    pub declared_zero: bool,
    /// How many times the width was doubled before agreement.
    pub escalations: u32,
}

/// Evaluates `compute` at `b` and `2b` bits starting from `starting_bits`
/// and doubling until the two evaluations agree to within `tau`, or are
/// told apart from zero only by rounding noise (see
/// [`PrecisionPolicy::zero_threshold`]).
pub fn with_precision_doubling<E, F>(
    mut compute: F,
    policy: &PrecisionPolicy,
    starting_bits: u32,
) -> Result<PrecisionOutcome, E>
where
    F: FnMut(u32) -> Result<Evaluation, E>,
    E: From<ArithError>,
{
    let mut bits = starting_bits;
    if bits.checked_mul(2).map_or(true, |b| b > policy.max_bits) {
        return Err(ArithError::PrecisionCapExceeded { max_bits: policy.max_bits }.into());
    }
    let mut low = compute(bits)?;
    let mut escalations = 0;
    loop {
        let high = compute(2 * bits)?;
        let zero = |bits: u32| PrecisionOutcome {
            value: Float::with_val(2 * bits, 0),
            bits_used: bits,
            declared_zero: true,
            escalations,
        };
        if low.value.is_zero() && high.value.is_zero() {
            if high.is_zero(policy.zero_threshold, true) {
                return Ok(zero(bits));
            }
        } else {
            let mut diff = Float::with_val(2 * bits, &high.value - &low.value);
            diff.abs_mut();
            let scale = Float::with_val(2 * bits, high.value.abs_ref());
            if diff <= scale * policy.tau {
                return Ok(PrecisionOutcome { value: high.value, bits_used: bits, declared_zero: false, escalations });
            }
            // Rounding noise never agrees with itself, so only disagreeing
            // values are candidates for zero.
            if high.is_zero(policy.zero_threshold, true) && low.is_zero(policy.zero_threshold, false) {
                return Ok(zero(bits));
            }
        }
        bits *= 2;
        if 2 * bits > policy.max_bits {
            return Err(ArithError::PrecisionCapExceeded { max_bits: policy.max_bits }.into());
        }
        log::debug!("evaluations disagree, retrying at {bits} and {} bits", 2 * bits);
        low = high;
        escalations += 1;
    }
}
