use crate::triangulation::Skeleton;

/// Greedy backtracking order: repeatedly takes the unordered edge that
/// completes the most triangles whose other sides are already ordered,
/// smallest index first among ties.
pub fn order_edges(skeleton: &Skeleton) -> Vec<usize> {
    let triangles: Vec<[usize; 3]> = skeleton.triangles().iter().map(|t| t.edges).collect();
    greedy_order(skeleton.edge_count(), &triangles)
}

pub(crate) fn greedy_order(edge_count: usize, triangles: &[[usize; 3]]) -> Vec<usize> {
    let mut placed = vec![false; edge_count];
    let mut order = Vec::with_capacity(edge_count);
    for _ in 0..edge_count {
        let completes = |e: usize| {
            triangles
                .iter()
                .filter(|t| t.contains(&e) && t.iter().all(|&x| x == e || placed[x]))
                .count()
        };
        let best = (0..edge_count)
            .filter(|&e| !placed[e])
            .max_by_key(|&e| (completes(e), std::cmp::Reverse(e)))
            .expect("an unplaced edge remains");
        placed[best] = true;
        order.push(best);
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        assert_eq!(greedy_order(1, &[[0, 0, 0], [0, 0, 0]]), vec![0]);
    }

    #[test]
    fn prefers_completing_edges() {
        // edge 2 closes the triangle on (0, 1, 2) once 0 and 1 are placed,
        // edge 1 closes (1, 1, 1) on its own
        let order = greedy_order(4, &[[0, 1, 2], [1, 1, 1], [3, 3, 0]]);
        assert_eq!(order, vec![1, 0, 2, 3]);
    }
}
