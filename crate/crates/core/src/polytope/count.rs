use rayon::prelude::*;

use super::AdmissibilityPolytope;

/// Per-variable constraint data for the lattice-point backtracking.
struct Plan {
    order: Vec<usize>,
    /// For position `p`: `(row, coefficient, slack)` for every row that
    /// involves `order[p]`, where `slack` is twice the least value the
    /// variables after `p` can still contribute to the row.
    bounds: Vec<Vec<(usize, i64, i64)>>,
    /// Twice the right-hand sides at this dilation.
    rhs: Vec<i64>,
    top: i64,
}

impl Plan {
    fn new(p: &AdmissibilityPolytope, k: u64) -> Plan {
        let dim = p.dim;
        let top = (k / 2) as i64;
        // greedy: the variable that finishes the most rows goes next
        let mut placed = vec![false; dim];
        let mut order = Vec::with_capacity(dim);
        for _ in 0..dim {
            let finishes = |v: usize| {
                p.rows
                    .iter()
                    .filter(|r| r.coeffs[v] != 0 && r.coeffs.iter().enumerate().all(|(i, &c)| c == 0 || i == v || placed[i]))
                    .count()
            };
            let v = (0..dim)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| (finishes(v), std::cmp::Reverse(v)))
                .unwrap();
            placed[v] = true;
            order.push(v);
        }
        let mut bounds = vec![Vec::new(); dim];
        for (ri, row) in p.rows.iter().enumerate() {
            for (pos, &v) in order.iter().enumerate() {
                let c = row.coeffs[v] as i64;
                if c == 0 {
                    continue;
                }
                let slack: i64 = order[pos + 1..]
                    .iter()
                    .map(|&w| (row.coeffs[w] as i64).min(0) * top * 2)
                    .sum();
                bounds[pos].push((ri, c, slack));
            }
        }
        let rhs = p.rows.iter().map(|r| r.rhs_halves as i64 * k as i64).collect();
        Plan { order, bounds, rhs, top }
    }

    /// Range for the variable at `pos` given the partial row sums (doubled).
    fn range(&self, pos: usize, partial: &[i64]) -> Option<(i64, i64)> {
        let (mut lo, mut hi) = (0, self.top);
        for &(ri, c, slack) in &self.bounds[pos] {
            // 2c*y <= rhs - partial - slack
            let room = self.rhs[ri] - partial[ri] - slack;
            if c > 0 {
                hi = hi.min(room.div_euclid(2 * c));
            } else {
                lo = lo.max(-(room.div_euclid(-2 * c)));
            }
        }
        (lo <= hi).then_some((lo, hi))
    }

    fn count_from(&self, pos: usize, partial: &mut [i64]) -> u64 {
        let Some((lo, hi)) = self.range(pos, partial) else { return 0 };
        if pos + 1 == self.order.len() {
            return (hi - lo + 1) as u64;
        }
        let mut total = 0;
        for y in lo..=hi {
            self.shift(pos, partial, y);
            total += self.count_from(pos + 1, partial);
            self.shift(pos, partial, -y);
        }
        total
    }

    fn shift(&self, pos: usize, partial: &mut [i64], y: i64) {
        for &(ri, c, _) in &self.bounds[pos] {
            partial[ri] += 2 * c * y;
        }
    }
}

/// Number of integer points `x` with `A x <= k b`.
pub fn count_lattice_points(p: &AdmissibilityPolytope, k: u64) -> u64 {
    if p.dim == 0 {
        return 1;
    }
    let plan = Plan::new(p, k);
    let Some((lo, hi)) = plan.range(0, &vec![0; p.rows.len()]) else { return 0 };
    (lo..=hi)
        .into_par_iter()
        .map(|y| {
            let mut partial = vec![0; p.rows.len()];
            plan.shift(0, &mut partial, y);
            if p.dim == 1 {
                1
            } else {
                plan.count_from(1, &mut partial)
            }
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::Row;

    fn brute(p: &AdmissibilityPolytope, k: u64) -> u64 {
        let side = k / 2 + 1;
        (0..side.pow(p.dim as u32))
            .filter(|&code| {
                let x: Vec<i64> = (0..p.dim).map(|i| (code / side.pow(i as u32) % side) as i64).collect();
                p.rows.iter().all(|r| {
                    2 * r.coeffs.iter().zip(&x).map(|(&c, &xi)| c as i64 * xi).sum::<i64>() <= r.rhs_halves as i64 * k as i64
                })
            })
            .count() as u64
    }

    #[test]
    fn cube_and_simplex_counts() {
        for k in 1..12 {
            assert_eq!(count_lattice_points(&AdmissibilityPolytope::cube(3), k), (k / 2 + 1).pow(3));
            let p = AdmissibilityPolytope::simplex(3);
            assert_eq!(count_lattice_points(&p, k), brute(&p, k));
        }
    }

    #[test]
    fn origin_only_at_dilation_one() {
        assert_eq!(count_lattice_points(&AdmissibilityPolytope::cube(4), 1), 1);
    }

    #[test]
    fn mixed_rows_match_brute_force() {
        let mut rows: Vec<Row> = AdmissibilityPolytope::cube(3).rows;
        rows.push(Row { coeffs: vec![1, -1, -1], rhs_halves: 0 });
        rows.push(Row { coeffs: vec![-1, 2, -1], rhs_halves: 0 });
        rows.push(Row { coeffs: vec![1, 1, 1], rhs_halves: 2 });
        let p = AdmissibilityPolytope::from_rows(3, rows);
        for k in 1..16 {
            assert_eq!(count_lattice_points(&p, k), brute(&p, k), "k={k}");
        }
    }
}
