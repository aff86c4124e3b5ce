use rug::float::Constant;
use rug::ops::NegAssign;
use rug::{Assign, Float};

use super::{ArithError, BigReal};
use crate::coloring::triangle_admissible;

/// Extra mantissa bits used for the trigonometric constants before rounding
/// them to the working width.
const GUARD_BITS: u32 = 32;

/// Cached quantum integers, factorials and weights for one order `r` at one
/// mantissa width.
#[derive(Clone, Debug)]
pub struct WeightSystem {
    r: u32,
    bits: u32,
    qint: Vec<Float>,
    qfact: Vec<Float>,
    inv_qfact: Vec<Float>,
    edge: Vec<Float>,
    eta2: Float,
}

fn check_order(r: u32) -> Result<(), ArithError> {
    if r < 3 || r % 2 == 0 {
        Err(ArithError::EvenOrderUnsupported(r))
    } else {
        Ok(())
    }
}

/// `sin(2πn/r)` at `bits + GUARD_BITS`.
fn sin_2pi(n: u32, r: u32, bits: u32) -> Float {
    let wide = bits + GUARD_BITS;
    let mut x = Float::with_val(wide, Constant::Pi);
    x *= 2 * n;
    x /= r;
    x.sin_round(rug::float::Round::Nearest);
    x
}

fn qint_value(n: u32, r: u32, bits: u32) -> Float {
    let n = n % r;
    if n == 0 {
        return Float::with_val(bits, 0);
    }
    // [r - n] = -[n]
    let (m, negate) = if 2 * n > r { (r - n, true) } else { (n, false) };
    let mut v = sin_2pi(m, r, bits);
    v /= sin_2pi(1, r, bits);
    let mut out = Float::with_val(bits, &v);
    if negate {
        out.neg_assign();
    }
    out
}

impl WeightSystem {
    pub fn new(r: u32, bits: u32) -> Result<Self, ArithError> {
        check_order(r)?;
        let qint: Vec<Float> = (0..r).map(|n| qint_value(n, r, bits)).collect();
        let mut qfact = Vec::with_capacity(r as usize);
        qfact.push(Float::with_val(bits, 1));
        for n in 1..r as usize {
            let next = Float::with_val(bits, &qfact[n - 1] * &qint[n]);
            qfact.push(next);
        }
        let inv_qfact = qfact.iter().map(|f| Float::with_val(bits, 1 / f)).collect();
        let edge = (0..r - 1)
            .map(|a| {
                let mut w = qint[a as usize + 1].clone();
                if a % 2 == 1 {
                    w.neg_assign();
                }
                w
            })
            .collect();
        let mut eta2 = sin_2pi(1, r, bits);
        eta2.square_mut();
        eta2 *= 2;
        eta2 /= r;
        let eta2 = Float::with_val(bits, &eta2);
        Ok(WeightSystem { r, bits, qint, qfact, inv_qfact, edge, eta2 })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// `[n]` for `0 <= n <= r - 1`.
    pub fn qint(&self, n: u32) -> &Float {
        &self.qint[n as usize]
    }

    /// `[n]!` for `0 <= n <= r - 1`.
    pub fn qfact(&self, n: u32) -> &Float {
        &self.qfact[n as usize]
    }

    pub fn inv_qfact(&self, n: u32) -> &Float {
        &self.inv_qfact[n as usize]
    }

    /// `(-1)^a [a + 1]` for a doubled color `a`.
    pub fn edge(&self, a: u32) -> &Float {
        &self.edge[a as usize]
    }

    pub fn eta2(&self) -> &Float {
        &self.eta2
    }

    /// Triangle weight for an admissible triple, written into `out`.
    pub fn triangle_into(&self, out: &mut Float, a: u32, b: u32, c: u32) {
        let s = (a + b + c) / 2;
        out.assign(&self.qfact[((a + b - c) / 2) as usize]);
        *out *= &self.qfact[((b + c - a) / 2) as usize];
        *out *= &self.qfact[((c + a - b) / 2) as usize];
        *out *= &self.inv_qfact[(s + 1) as usize];
        if s % 2 == 1 {
            out.neg_assign();
        }
    }

    /// Racah sum of a tetrahedron whose four faces are admissible, written
    /// into `out`. Colors are `[a, b, c, d, e, f]` with opposite pairs
    /// (a,d), (b,e), (c,f) and faces (a,b,c), (a,e,f), (d,b,f), (d,e,c).
    pub fn tet_into(&self, out: &mut Float, scratch: &mut TetScratch, colors: [u32; 6]) {
        let [a, b, c, d, e, f] = colors;
        let t = [(a + b + c) / 2, (a + e + f) / 2, (d + b + f) / 2, (d + e + c) / 2];
        let q = [(a + d + b + e) / 2, (a + d + c + f) / 2, (b + e + c + f) / 2];
        let lo = *t.iter().max().unwrap();
        // [z + 1]! vanishes once z + 1 reaches r
        let hi = (*q.iter().min().unwrap()).min(self.r - 2);
        out.assign(0);
        let term = &mut scratch.term;
        for z in lo..=hi {
            term.assign(&self.qfact[(z + 1) as usize]);
            for ti in t {
                *term *= &self.inv_qfact[(z - ti) as usize];
            }
            for qj in q {
                *term *= &self.inv_qfact[(qj - z) as usize];
            }
            if z % 2 == 1 {
                *out -= &*term;
            } else {
                *out += &*term;
            }
        }
    }
}

/// Reusable temporaries for [`WeightSystem::tet_into`].
pub struct TetScratch {
    term: Float,
}

impl TetScratch {
    pub fn new(bits: u32) -> Self {
        TetScratch { term: Float::new(bits) }
    }
}

/// `[n] = sin(2πn/r) / sin(2π/r)` for `0 <= n <= r`.
pub fn quantum_integer(n: u32, r: u32, bits: u32) -> Result<BigReal, ArithError> {
    check_order(r)?;
    Ok(BigReal(qint_value(n, r, bits)))
}

/// `(-1)^a [a + 1]`.
pub fn edge_weight(a: u32, ws: &WeightSystem) -> BigReal {
    BigReal(ws.edge(a).clone())
}

/// `(-1)^s [(a+b-c)/2]! [(b+c-a)/2]! [(c+a-b)/2]! / [s+1]!` with `s = (a+b+c)/2`.
pub fn triangle_weight(a: u32, b: u32, c: u32, ws: &WeightSystem) -> Result<BigReal, ArithError> {
    if !triangle_admissible(a, b, c, ws.r()) {
        return Err(ArithError::InadmissibleTriple(a, b, c));
    }
    let mut out = Float::new(ws.bits());
    ws.triangle_into(&mut out, a, b, c);
    Ok(BigReal(out))
}

/// Racah single-sum for the tetrahedron colored `(a, b, c, d, e, f)`.
pub fn tet_weight(colors: [u32; 6], ws: &WeightSystem) -> Result<BigReal, ArithError> {
    let [a, b, c, d, e, f] = colors;
    for (x, y, z) in [(a, b, c), (a, e, f), (d, b, f), (d, e, c)] {
        if !triangle_admissible(x, y, z, ws.r()) {
            return Err(ArithError::InadmissibleFace(x, y, z));
        }
    }
    let mut out = Float::new(ws.bits());
    ws.tet_into(&mut out, &mut TetScratch::new(ws.bits()), colors);
    Ok(BigReal(out))
}

/// `η² = (2/r) sin²(2π/r)`.
pub fn vertex_weight(ws: &WeightSystem) -> BigReal {
    BigReal(ws.eta2().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: &Float, y: f64, tol: f64) -> bool {
        (x.to_f64() - y).abs() <= tol * y.abs().max(1.0)
    }

    #[test]
    fn quantum_integer_identities() {
        for r in [3, 5, 7, 9, 51] {
            let one = quantum_integer(1, r, 128).unwrap();
            assert_eq!(one.to_f64(), 1.0);
            let two = quantum_integer(2, r, 128).unwrap();
            let expected = 2.0 * (2.0 * std::f64::consts::PI / r as f64).cos();
            assert!(close(two.as_float(), expected, 1e-14));
            assert_eq!(quantum_integer(r - 1, r, 128).unwrap().to_f64(), -1.0);
            assert!(quantum_integer(r, r, 128).unwrap().as_float().is_zero());
        }
    }

    #[test]
    fn even_orders_are_rejected() {
        assert_eq!(WeightSystem::new(6, 64).unwrap_err(), ArithError::EvenOrderUnsupported(6));
    }

    #[test]
    fn factorials_are_running_products() {
        let ws = WeightSystem::new(11, 256).unwrap();
        for n in 1..11 {
            let prod = Float::with_val(256, ws.qfact(n - 1) * ws.qint(n));
            assert_eq!(&prod, ws.qfact(n));
        }
    }

    #[test]
    fn small_weights() {
        let ws = WeightSystem::new(7, 128).unwrap();
        assert_eq!(edge_weight(0, &ws).to_f64(), 1.0);
        let q2 = ws.qint(2).to_f64();
        assert!(close(edge_weight(1, &ws).as_float(), -q2, 1e-15));
        assert_eq!(triangle_weight(0, 0, 0, &ws).unwrap().to_f64(), 1.0);
        let q3 = ws.qint(3).to_f64();
        let q4 = ws.qint(4).to_f64();
        let expected = -1.0 / (q2 * q3 * q4);
        assert!(close(triangle_weight(2, 2, 2, &ws).unwrap().as_float(), expected, 1e-13));
        assert_eq!(tet_weight([0; 6], &ws).unwrap().to_f64(), 1.0);
        assert!(triangle_weight(2, 0, 0, &ws).is_err());
    }

    #[test]
    fn vertex_weight_at_three_is_one_half() {
        let ws = WeightSystem::new(3, 128).unwrap();
        assert!(close(vertex_weight(&ws).as_float(), 0.5, 1e-30));
    }

    #[test]
    fn tet_weight_has_tetrahedral_symmetry() {
        let ws = WeightSystem::new(9, 128).unwrap();
        let base = [2u32, 3, 3, 2, 1, 1];
        let w = tet_weight(base, &ws).unwrap();
        let [a, b, c, d, e, f] = base;
        // relabelling the vertices of the tetrahedron permutes the edges
        for colors in [[b, a, c, e, d, f], [a, c, b, d, f, e], [d, e, c, a, b, f], [a, e, f, d, b, c]] {
            let v = tet_weight(colors, &ws).unwrap();
            assert!(close(v.as_float(), w.to_f64(), 1e-25), "{colors:?}");
        }
    }
}
