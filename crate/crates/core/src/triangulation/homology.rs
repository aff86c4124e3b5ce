use super::skeleton::Skeleton;

/// First homology with Z/2 coefficients, plus the vertex count flag that
/// together decide whether only integer colors can be admissible.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomologyInfo {
    pub h1_z2_rank: usize,
    pub is_one_vertex: bool,
}

impl HomologyInfo {
    /// For 1-vertex triangulations with `H1(M; Z/2) = 0` every admissible
    /// coloring uses integer colors only.
    pub fn integer_fast_path_allowed(&self) -> bool {
        self.h1_z2_rank == 0 && self.is_one_vertex
    }
}

/// Dense matrix over GF(2), one bitset per row.
struct Gf2Matrix {
    cols: usize,
    rows: Vec<Vec<u64>>,
}

impl Gf2Matrix {
    fn new(cols: usize) -> Self {
        Gf2Matrix { cols, rows: Vec::new() }
    }

    /// Appends a row given the column indices of its entries; repeated
    /// indices cancel in pairs.
    fn push_row(&mut self, entries: &[usize]) {
        let mut row = vec![0u64; self.cols.div_ceil(64)];
        for &c in entries {
            row[c / 64] ^= 1 << (c % 64);
        }
        self.rows.push(row);
    }

    fn rank(mut self) -> usize {
        let mut rank = 0;
        for col in 0..self.cols {
            let (word, bit) = (col / 64, 1u64 << (col % 64));
            let Some(pivot) = (rank..self.rows.len()).find(|&r| self.rows[r][word] & bit != 0) else {
                continue;
            };
            self.rows.swap(rank, pivot);
            let pivot_row = self.rows[rank].clone();
            for r in 0..self.rows.len() {
                if r != rank && self.rows[r][word] & bit != 0 {
                    for (x, y) in self.rows[r].iter_mut().zip(&pivot_row) {
                        *x ^= y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

/// `rank H1(M; Z/2) = nullity(d1) - rank(d2)` from the edge-to-vertex and
/// triangle-to-edge boundary matrices reduced mod 2.
pub fn homology_z2(skeleton: &Skeleton) -> HomologyInfo {
    let e = skeleton.edge_count();

    let mut d1 = Gf2Matrix::new(skeleton.vertex_count());
    for edge in 0..e {
        let (a, b) = skeleton.edge_endpoints(edge);
        d1.push_row(&[a, b]);
    }
    let mut d2 = Gf2Matrix::new(e);
    for tri in skeleton.triangles() {
        d2.push_row(&tri.edges);
    }
    let nullity_d1 = e - d1.rank();
    HomologyInfo {
        h1_z2_rank: nullity_d1 - d2.rank(),
        is_one_vertex: skeleton.vertex_count() == 1,
    }
}
