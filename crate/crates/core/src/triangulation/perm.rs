use std::fmt;

/// A permutation of the four vertex labels `{0, 1, 2, 3}` of a tetrahedron,
/// stored as the image of each label.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm4([u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    /// Builds a permutation from its images, returning `None` unless the
    /// array is a bijection of `0..4`.
    pub fn from_images(images: [u8; 4]) -> Option<Perm4> {
        let mut seen = [false; 4];
        for &i in &images {
            if i > 3 || seen[i as usize] {
                return None;
            }
            seen[i as usize] = true;
        }
        Some(Perm4(images))
    }

    /// The transposition exchanging `a` and `b` (identity when equal).
    pub fn transposition(a: u8, b: u8) -> Perm4 {
        let mut images = [0, 1, 2, 3];
        images.swap(a as usize, b as usize);
        Perm4(images)
    }

    #[inline]
    pub fn apply(self, v: u8) -> u8 {
        self.0[v as usize]
    }

    #[inline]
    pub fn images(self) -> [u8; 4] {
        self.0
    }

    pub fn inverse(self) -> Perm4 {
        let mut inv = [0u8; 4];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p as usize] = i as u8;
        }
        Perm4(inv)
    }

    /// `self.compose(other)` maps `v` to `self(other(v))`.
    pub fn compose(self, other: Perm4) -> Perm4 {
        Perm4([
            self.apply(other.apply(0)),
            self.apply(other.apply(1)),
            self.apply(other.apply(2)),
            self.apply(other.apply(3)),
        ])
    }

    /// +1 for even permutations, -1 for odd ones.
    pub fn sign(self) -> i32 {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All 24 permutations in lexicographic order of their images.
    pub fn all() -> impl Iterator<Item = Perm4> {
        (0..256u32).filter_map(|code| {
            let images = [
                (code & 3) as u8,
                ((code >> 2) & 3) as u8,
                ((code >> 4) & 3) as u8,
                ((code >> 6) & 3) as u8,
            ];
            Perm4::from_images(images)
        })
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm4{:?}", self.0)
    }
}

/// Local edges of a tetrahedron, indexed 0..6 by their vertex pairs.
pub const EDGE_VERTICES: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Local edge index joining vertices `a != b`.
#[inline]
pub fn edge_index(a: u8, b: u8) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("no edge between vertex {a} and vertex {b}"),
    }
}

/// The three vertices of face `f` (the face opposite vertex `f`), ascending.
#[inline]
pub fn face_vertices(f: u8) -> [u8; 3] {
    match f {
        0 => [1, 2, 3],
        1 => [0, 2, 3],
        2 => [0, 1, 3],
        3 => [0, 1, 2],
        _ => panic!("face index {f} out of range"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn there_are_24_permutations_with_12_odd() {
        let all: Vec<_> = Perm4::all().collect();
        assert_eq!(all.len(), 24);
        assert_eq!(all.iter().filter(|p| p.sign() < 0).count(), 12);
    }

    #[test]
    fn inverse_and_compose_agree() {
        for p in Perm4::all() {
            assert_eq!(p.compose(p.inverse()), Perm4::IDENTITY);
            for q in Perm4::all() {
                assert_eq!(p.compose(q).sign(), p.sign() * q.sign());
            }
        }
    }

    #[test]
    fn edge_indices_round_trip() {
        for (k, &(a, b)) in EDGE_VERTICES.iter().enumerate() {
            assert_eq!(edge_index(a, b), k);
            assert_eq!(edge_index(b, a), k);
        }
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm4::from_images([0, 0, 1, 2]).is_none());
        assert!(Perm4::from_images([0, 1, 2, 4]).is_none());
    }
}
