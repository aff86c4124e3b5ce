use super::gluing::GluingTable;
use super::perm::{edge_index, face_vertices, EDGE_VERTICES};
use super::TriangulationError;

/// Union-find that also tracks whether an element is identified with its
/// class representative in the same or the reversed orientation.
struct ParityUnionFind {
    parent: Vec<usize>,
    // orientation relative to parent
    flip: Vec<bool>,
    rank: Vec<u8>,
    // set when some element got identified with itself reversed
    twisted: Vec<bool>,
}

impl ParityUnionFind {
    fn new(n: usize) -> Self {
        ParityUnionFind {
            parent: (0..n).collect(),
            flip: vec![false; n],
            rank: vec![0; n],
            twisted: vec![false; n],
        }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        let p = self.parent[x];
        if p == x {
            return (x, false);
        }
        let (root, parity) = self.find(p);
        self.flip[x] ^= parity;
        self.parent[x] = root;
        (root, self.flip[x])
    }

    /// Identifies `a` with `b`, reversed when `reversed` is set.
    fn union(&mut self, a: usize, b: usize, reversed: bool) {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            if pa ^ pb != reversed {
                self.twisted[ra] = true;
            }
            return;
        }
        let (big, small) = if self.rank[ra] >= self.rank[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[small] = big;
        self.flip[small] = pa ^ pb ^ reversed;
        self.twisted[big] |= self.twisted[small];
        if self.rank[big] == self.rank[small] {
            self.rank[big] += 1;
        }
    }
}

/// Numbers union-find classes by their smallest member, in ascending order.
fn canonical_classes(roots: &[usize]) -> (Vec<usize>, usize) {
    let mut index_of_root = vec![usize::MAX; roots.len()];
    let mut class = Vec::with_capacity(roots.len());
    let mut next = 0;
    for &root in roots {
        if index_of_root[root] == usize::MAX {
            index_of_root[root] = next;
            next += 1;
        }
        class.push(index_of_root[root]);
    }
    (class, next)
}

/// One appearance of an edge class inside a tetrahedron.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeEmbedding {
    pub tet: usize,
    /// Local edge index, see [`EDGE_VERTICES`].
    pub edge: usize,
    /// Whether the local orientation (lower to higher label) disagrees with the class orientation.
    pub reversed: bool,
}

/// A triangle of the triangulation after gluing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleClass {
    /// The two (tetrahedron, face) pairs identified into this triangle; the first is the smaller.
    pub embeddings: [(usize, u8); 2],
    /// Edge classes of the sides of the first embedding, for the vertex pairs
    /// (a,b), (a,c), (b,c) with a < b < c. Entries may repeat.
    pub edges: [usize; 3],
}

/// The vertices, edges and triangles of a glued triangulation.
#[derive(Clone, Debug)]
pub struct Skeleton {
    tetrahedra: usize,
    vertex_of_corner: Vec<usize>,
    vertex_classes: Vec<Vec<(usize, u8)>>,
    edge_of_local: Vec<usize>,
    edge_reversed: Vec<bool>,
    edge_classes: Vec<Vec<EdgeEmbedding>>,
    triangles: Vec<TriangleClass>,
}

impl Skeleton {
    /// Computes the skeleton by union-find over tetrahedron corners and
    /// tetrahedron edges. Classes are numbered by their smallest
    /// `(tet, local index)` member.
    ///
    /// Rejects tables that cannot triangulate a closed 3-manifold: an edge
    /// identified with itself in reverse, or `e != n + v`.
    pub fn new(table: &GluingTable) -> Result<Skeleton, TriangulationError> {
        let n = table.size();
        let mut corners = ParityUnionFind::new(4 * n);
        let mut edges = ParityUnionFind::new(6 * n);
        for t in 0..n {
            for f in 0..4u8 {
                let g = table.gluing(t, f);
                // each identification is visited from both sides; once is enough
                if (g.tet, g.face) < (t, f) {
                    continue;
                }
                let verts = face_vertices(f);
                for &v in &verts {
                    corners.union(4 * t + v as usize, 4 * g.tet + g.perm.apply(v) as usize, false);
                }
                for (i, &a) in verts.iter().enumerate() {
                    for &b in &verts[i + 1..] {
                        let (pa, pb) = (g.perm.apply(a), g.perm.apply(b));
                        edges.union(6 * t + edge_index(a, b), 6 * g.tet + edge_index(pa, pb), pa > pb);
                    }
                }
            }
        }

        let corner_roots: Vec<usize> = (0..4 * n).map(|c| corners.find(c).0).collect();
        let (vertex_of_corner, v) = canonical_classes(&corner_roots);
        let mut vertex_classes = vec![Vec::new(); v];
        for (c, &vc) in vertex_of_corner.iter().enumerate() {
            vertex_classes[vc].push((c / 4, (c % 4) as u8));
        }

        let mut edge_roots = Vec::with_capacity(6 * n);
        let mut edge_reversed = Vec::with_capacity(6 * n);
        for k in 0..6 * n {
            let (root, parity) = edges.find(k);
            if edges.twisted[root] {
                return Err(TriangulationError::NotClosedManifoldLike(format!(
                    "edge {} of tetrahedron {} is identified with itself in reverse",
                    k % 6,
                    k / 6
                )));
            }
            edge_roots.push(root);
            edge_reversed.push(parity);
        }
        let (edge_of_local, e) = canonical_classes(&edge_roots);
        // Orient each class like its smallest member.
        let mut class_flip = vec![None; e];
        for k in 0..6 * n {
            let c = edge_of_local[k];
            let base = *class_flip[c].get_or_insert(edge_reversed[k]);
            edge_reversed[k] ^= base;
        }
        let mut edge_classes = vec![Vec::new(); e];
        for k in 0..6 * n {
            edge_classes[edge_of_local[k]].push(EdgeEmbedding {
                tet: k / 6,
                edge: k % 6,
                reversed: edge_reversed[k],
            });
        }

        let mut triangles = Vec::with_capacity(2 * n);
        for t in 0..n {
            for f in 0..4u8 {
                let g = table.gluing(t, f);
                if (g.tet, g.face) < (t, f) {
                    continue;
                }
                let [a, b, c] = face_vertices(f);
                let side = |x: u8, y: u8| edge_of_local[6 * t + edge_index(x, y)];
                triangles.push(TriangleClass {
                    embeddings: [(t, f), (g.tet, g.face)],
                    edges: [side(a, b), side(a, c), side(b, c)],
                });
            }
        }

        let skeleton = Skeleton {
            tetrahedra: n,
            vertex_of_corner,
            vertex_classes,
            edge_of_local,
            edge_reversed,
            edge_classes,
            triangles,
        };
        if skeleton.edge_count() != n + skeleton.vertex_count() {
            return Err(TriangulationError::NotClosedManifoldLike(format!(
                "e = {} but n + v = {}",
                skeleton.edge_count(),
                n + skeleton.vertex_count()
            )));
        }
        Ok(skeleton)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_classes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_classes.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn tetrahedron_count(&self) -> usize {
        self.tetrahedra
    }

    pub fn vertex_classes(&self) -> &[Vec<(usize, u8)>] {
        &self.vertex_classes
    }

    pub fn edge_classes(&self) -> &[Vec<EdgeEmbedding>] {
        &self.edge_classes
    }

    pub fn triangles(&self) -> &[TriangleClass] {
        &self.triangles
    }

    /// Vertex class of corner `v` of tetrahedron `tet`.
    pub fn vertex_of(&self, tet: usize, v: u8) -> usize {
        self.vertex_of_corner[4 * tet + v as usize]
    }

    /// Edge class of local edge `edge` of tetrahedron `tet`.
    pub fn edge_of(&self, tet: usize, edge: usize) -> usize {
        self.edge_of_local[6 * tet + edge]
    }

    /// Whether local edge `edge` of `tet`, oriented from its lower to its
    /// higher vertex label, runs against its class orientation.
    pub fn edge_reversed(&self, tet: usize, edge: usize) -> bool {
        self.edge_reversed[6 * tet + edge]
    }

    /// Edge classes of the six local edges of `tet`, in [`EDGE_VERTICES`] order.
    pub fn tet_edges(&self, tet: usize) -> [usize; 6] {
        let mut out = [0; 6];
        out.copy_from_slice(&self.edge_of_local[6 * tet..6 * tet + 6]);
        out
    }

    /// Number of tetrahedron edges identified into the class.
    pub fn edge_degree(&self, edge: usize) -> usize {
        self.edge_classes[edge].len()
    }

    /// Endpoint vertex classes of an edge, in class orientation.
    pub fn edge_endpoints(&self, edge: usize) -> (usize, usize) {
        let emb = self.edge_classes[edge][0];
        let (a, b) = EDGE_VERTICES[emb.edge];
        let (a, b) = if emb.reversed { (b, a) } else { (a, b) };
        (self.vertex_of(emb.tet, a), self.vertex_of(emb.tet, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> Skeleton {
        Skeleton::new(&GluingTable::from_json(text).unwrap()).unwrap()
    }

    #[test]
    fn one_tetrahedron_sphere_counts() {
        let s = load(include_str!("../../data/s3_1tet.json"));
        assert_eq!(
            (s.vertex_count(), s.edge_count(), s.triangle_count(), s.tetrahedron_count()),
            (1, 2, 2, 1)
        );
    }

    #[test]
    fn classes_are_numbered_by_smallest_member() {
        let s = load(include_str!("../../data/s2xs1_2tet.json"));
        assert_eq!(s.edge_of(0, 0), 0);
        let mut seen = 0;
        for t in 0..s.tetrahedron_count() {
            for k in 0..6 {
                let c = s.edge_of(t, k);
                assert!(c <= seen);
                if c == seen {
                    seen += 1;
                }
            }
        }
        assert_eq!(seen, s.edge_count());
    }

    #[test]
    fn every_triangle_has_two_embeddings_and_every_edge_one() {
        for text in [
            include_str!("../../data/s3_1tet.json"),
            include_str!("../../data/s2xs1_2tet.json"),
            include_str!("../../data/rp3_2tet.json"),
            include_str!("../../data/lens_3_1_3tet.json"),
        ] {
            let s = load(text);
            assert_eq!(s.triangle_count(), 2 * s.tetrahedron_count());
            assert!(s.edge_classes().iter().all(|c| !c.is_empty()));
            let total: usize = s.edge_classes().iter().map(Vec::len).sum();
            assert_eq!(total, 6 * s.tetrahedron_count());
        }
    }

    #[test]
    fn reversed_edge_self_identification_is_rejected() {
        // Face 0 glued to face 1 by swapping 0 and 1 folds edge 01 onto itself
        // harmlessly, but the map below sends edge 23 onto itself reversed.
        let text = r#"{"tetrahedra": 1, "gluings": [[
            {"tet": 0, "face": 1, "perm": [1, 0, 3, 2]},
            {"tet": 0, "face": 0, "perm": [1, 0, 3, 2]},
            {"tet": 0, "face": 3, "perm": [0, 1, 3, 2]},
            {"tet": 0, "face": 2, "perm": [0, 1, 3, 2]}]]}"#;
        let table = GluingTable::from_json(text).unwrap();
        assert!(matches!(
            Skeleton::new(&table),
            Err(TriangulationError::NotClosedManifoldLike(_))
        ));
    }
}
