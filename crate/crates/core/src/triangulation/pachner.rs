//! Bistellar 2-3 and 3-2 moves.
//!
//! Both moves keep every tetrahedron not involved in the move, in its
//! original order, and append the new tetrahedra at the end.

use super::gluing::{Gluing, GluingTable};
use super::perm::{face_vertices, Perm4, EDGE_VERTICES};
use super::skeleton::Skeleton;
use super::TriangulationError;

/// Where an old face ends up after a move, and how the old tetrahedron's
/// labels translate to the new tetrahedron's labels.
#[derive(Clone, Copy)]
struct Relocation {
    tet: usize,
    face: u8,
    relabel: Perm4,
}

fn not_applicable(msg: impl Into<String>) -> TriangulationError {
    TriangulationError::MoveNotApplicable(msg.into())
}

/// Rebuilds all gluings of surviving faces through `reloc`, adds the
/// `internal` gluings, and validates the result.
fn rebuild(
    table: &GluingTable,
    new_size: usize,
    reloc: impl Fn(usize, u8) -> Option<Relocation>,
    internal: &[(usize, u8, usize, u8, Perm4)],
    vertex_count: usize,
) -> Result<GluingTable, TriangulationError> {
    let placeholder = Gluing { tet: usize::MAX, face: 0, perm: Perm4::IDENTITY };
    let mut gluings = vec![[placeholder; 4]; new_size];
    for t in 0..table.size() {
        for f in 0..4u8 {
            let Some(src) = reloc(t, f) else { continue };
            let g = table.gluing(t, f);
            let dst = reloc(g.tet, g.face).expect("surviving faces are glued to surviving faces");
            gluings[src.tet][src.face as usize] = Gluing {
                tet: dst.tet,
                face: dst.face,
                perm: dst.relabel.compose(g.perm).compose(src.relabel.inverse()),
            };
        }
    }
    for &(a, fa, b, fb, perm) in internal {
        gluings[a][fa as usize] = Gluing { tet: b, face: fb, perm };
        gluings[b][fb as usize] = Gluing { tet: a, face: fa, perm: perm.inverse() };
    }
    debug_assert!(gluings.iter().flatten().all(|g| g.tet != usize::MAX));
    let result = GluingTable::new(gluings)
        .map_err(|e| not_applicable(format!("move produced an invalid gluing table: {e}")))?;
    let result = if table.is_oriented() { result.oriented().unwrap_or(result) } else { result };
    let skeleton = Skeleton::new(&result)
        .map_err(|e| not_applicable(format!("move produced an invalid triangulation: {e}")))?;
    if skeleton.vertex_count() != vertex_count {
        return Err(not_applicable("move changed the number of vertices"));
    }
    Ok(result)
}

/// Position of each surviving tetrahedron once `removed` are dropped.
fn survivor_indices(n: usize, removed: &[usize]) -> Vec<usize> {
    let mut next = 0;
    (0..n)
        .map(|t| {
            if removed.contains(&t) {
                usize::MAX
            } else {
                next += 1;
                next - 1
            }
        })
        .collect()
}

impl GluingTable {
    /// Replaces the two tetrahedra on either side of `triangle` (a triangle
    /// class index of the skeleton) by three tetrahedra around a new edge
    /// joining their apexes.
    pub fn pachner_23(&self, triangle: usize) -> Result<GluingTable, TriangulationError> {
        let skeleton = Skeleton::new(self)?;
        let tri = skeleton
            .triangles()
            .get(triangle)
            .ok_or_else(|| not_applicable(format!("no triangle {triangle}")))?;
        let (t0, f0) = tri.embeddings[0];
        let (t1, f1) = tri.embeddings[1];
        if t0 == t1 {
            return Err(not_applicable(format!(
                "both sides of triangle {triangle} lie in tetrahedron {t0}"
            )));
        }
        let p = self.gluing(t0, f0).perm;
        let p_inv = p.inverse();
        let n = self.size();
        let survivors = survivor_indices(n, &[t0, t1]);
        let corners = face_vertices(f0);
        // New tetrahedron N_g replaces the corner of the triangle opposite g.
        // It keeps t0's labels, with the far apex taking label g.
        let new_tet = |g: u8| n - 2 + corners.iter().position(|&c| c == g).unwrap();

        let reloc = |t: usize, f: u8| -> Option<Relocation> {
            if t == t0 {
                (f != f0).then(|| Relocation { tet: new_tet(f), face: f, relabel: Perm4::IDENTITY })
            } else if t == t1 {
                (f != f1).then(|| {
                    let g = p_inv.apply(f);
                    let relabel = Perm4::transposition(f0, g).compose(p_inv);
                    Relocation { tet: new_tet(g), face: relabel.apply(f), relabel }
                })
            } else {
                Some(Relocation { tet: survivors[t], face: f, relabel: Perm4::IDENTITY })
            }
        };
        let mut internal = Vec::with_capacity(3);
        for (i, &g) in corners.iter().enumerate() {
            for &h in &corners[i + 1..] {
                internal.push((new_tet(g), h, new_tet(h), g, Perm4::transposition(g, h)));
            }
        }
        rebuild(self, n + 1, reloc, &internal, skeleton.vertex_count())
    }

    /// Replaces the three distinct tetrahedra around a degree-3 edge by two
    /// tetrahedra sharing the triangle spanned by the edge's link.
    pub fn pachner_32(&self, edge: usize) -> Result<GluingTable, TriangulationError> {
        let skeleton = Skeleton::new(self)?;
        let embeddings = skeleton
            .edge_classes()
            .get(edge)
            .ok_or_else(|| not_applicable(format!("no edge {edge}")))?;
        if embeddings.len() != 3 {
            return Err(not_applicable(format!(
                "edge {edge} has degree {}, not 3",
                embeddings.len()
            )));
        }

        // Walk around the edge. In step i the tetrahedron contains the edge
        // endpoints (alpha, beta), the link vertex x shared with the next
        // tetrahedron and the link vertex y shared with the previous one.
        let start = embeddings[0];
        let (alpha, beta) = EDGE_VERTICES[start.edge];
        let others: Vec<u8> = (0..4).filter(|&v| v != alpha && v != beta).collect();
        let mut steps = Vec::with_capacity(3);
        let (mut tet, mut a, mut b, mut x, mut y) = (start.tet, alpha, beta, others[0], others[1]);
        for _ in 0..3 {
            steps.push((tet, a, b, x, y));
            let g = self.gluing(tet, y);
            let p = g.perm;
            (tet, a, b, x, y) = (g.tet, p.apply(a), p.apply(b), p.apply(y), p.apply(x));
        }
        if (tet, a, b, x, y) != steps[0] {
            return Err(not_applicable(format!("edge {edge} does not close up after three steps")));
        }
        let tets: Vec<usize> = steps.iter().map(|s| s.0).collect();
        if tets[0] == tets[1] || tets[1] == tets[2] || tets[0] == tets[2] {
            return Err(not_applicable(format!(
                "edge {edge} meets some tetrahedron more than once"
            )));
        }

        let n = self.size();
        let survivors = survivor_indices(n, &tets);
        let (upper, lower) = (n - 3, n - 2);
        let link_label = |i: usize| 1 + (i % 3) as u8;
        let reloc = |t: usize, f: u8| -> Option<Relocation> {
            let Some(i) = tets.iter().position(|&s| s == t) else {
                return Some(Relocation { tet: survivors[t], face: f, relabel: Perm4::IDENTITY });
            };
            let (_, a, b, x, y) = steps[i];
            let (keep, drop, target) = if f == b {
                (a, b, upper)
            } else if f == a {
                (b, a, lower)
            } else {
                return None;
            };
            let mut images = [0u8; 4];
            images[keep as usize] = 0;
            images[x as usize] = link_label(i);
            images[y as usize] = link_label(i + 2);
            images[drop as usize] = link_label(i + 1);
            let relabel = Perm4::from_images(images).unwrap();
            Some(Relocation { tet: target, face: relabel.apply(f), relabel })
        };
        let internal = [(upper, 0, lower, 0, Perm4::IDENTITY)];
        rebuild(self, n - 1, reloc, &internal, skeleton.vertex_count())
    }
}

/// Triangle classes that separate two distinct tetrahedra.
pub fn candidate_23_moves(skeleton: &Skeleton) -> Vec<usize> {
    skeleton
        .triangles()
        .iter()
        .enumerate()
        .filter(|(_, t)| t.embeddings[0].0 != t.embeddings[1].0)
        .map(|(i, _)| i)
        .collect()
}

/// Degree-3 edge classes whose embeddings lie in three distinct tetrahedra.
pub fn candidate_32_moves(skeleton: &Skeleton) -> Vec<usize> {
    skeleton
        .edge_classes()
        .iter()
        .enumerate()
        .filter(|(_, emb)| {
            emb.len() == 3
                && emb[0].tet != emb[1].tet
                && emb[1].tet != emb[2].tet
                && emb[0].tet != emb[2].tet
        })
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> GluingTable {
        GluingTable::from_json(text).unwrap()
    }

    /// The edge introduced by a 2-3 move: degree 3, carried by the last three tetrahedra.
    fn new_axis(table: &GluingTable) -> usize {
        let s = Skeleton::new(table).unwrap();
        let n = table.size();
        (0..s.edge_count())
            .find(|&e| {
                let emb = &s.edge_classes()[e];
                emb.len() == 3 && emb.iter().all(|x| x.tet >= n - 3)
            })
            .expect("2-3 move leaves a degree-3 axis")
    }

    #[test]
    fn sphere_triangles_are_not_movable() {
        let t = load(include_str!("../../data/s3_1tet.json"));
        assert!(matches!(t.pachner_23(0), Err(TriangulationError::MoveNotApplicable(_))));
        assert!(matches!(t.pachner_23(1), Err(TriangulationError::MoveNotApplicable(_))));
    }

    #[test]
    fn two_three_on_s2xs1_adds_a_tetrahedron() {
        let t = load(include_str!("../../data/s2xs1_2tet.json"));
        let s = Skeleton::new(&t).unwrap();
        let tri = candidate_23_moves(&s)[0];
        let moved = t.pachner_23(tri).unwrap();
        let ms = Skeleton::new(&moved).unwrap();
        assert_eq!(moved.size(), 3);
        assert_eq!(ms.vertex_count(), s.vertex_count());
        assert_eq!(ms.edge_count(), moved.size() + ms.vertex_count());
        assert!(moved.is_oriented());
    }

    #[test]
    fn three_two_undoes_two_three() {
        for text in [
            include_str!("../../data/s2xs1_2tet.json"),
            include_str!("../../data/rp3_2tet.json"),
            include_str!("../../data/lens_3_1_3tet.json"),
        ] {
            let t = load(text);
            let s = Skeleton::new(&t).unwrap();
            for tri in candidate_23_moves(&s) {
                let up = t.pachner_23(tri).unwrap();
                let down = up.pachner_32(new_axis(&up)).unwrap();
                assert!(down.is_isomorphic(&t), "triangle {tri}");
            }
        }
    }

    #[test]
    fn wrong_degree_edges_are_refused() {
        let t = load(include_str!("../../data/s3_1tet.json"));
        let s = Skeleton::new(&t).unwrap();
        for e in 0..s.edge_count() {
            if s.edge_degree(e) != 3 {
                assert!(matches!(t.pachner_32(e), Err(TriangulationError::MoveNotApplicable(_))));
            }
        }
    }
}
