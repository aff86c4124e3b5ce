use serde::{Deserialize, Serialize};

use super::perm::Perm4;
use super::TriangulationError;

/// Where a face of a tetrahedron is glued: the target tetrahedron and face,
/// and the vertex map from the source tetrahedron's labels to the target's.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gluing {
    pub tet: usize,
    pub face: u8,
    pub perm: Perm4,
}

/// A closed generalized triangulation: `n` tetrahedra whose `4n` faces are
/// identified in pairs.
///
/// Face `f` of a tetrahedron is the triangle opposite vertex `f`. Every table
/// held by this type has passed [`GluingTable::new`]: gluings are involutive,
/// no face is glued to itself, and every face is glued.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GluingTable {
    gluings: Vec<[Gluing; 4]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGluing {
    tet: usize,
    face: u8,
    perm: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTable {
    tetrahedra: usize,
    gluings: Vec<Vec<Option<RawGluing>>>,
}

impl GluingTable {
    /// Validates a complete set of face gluings.
    pub fn new(gluings: Vec<[Gluing; 4]>) -> Result<Self, TriangulationError> {
        let n = gluings.len();
        if n == 0 {
            return Err(TriangulationError::MalformedInput(
                "a triangulation needs at least one tetrahedron".into(),
            ));
        }
        for (t, faces) in gluings.iter().enumerate() {
            for (f, g) in faces.iter().enumerate() {
                let f = f as u8;
                if g.tet >= n || g.face > 3 {
                    return Err(TriangulationError::MalformedInput(format!(
                        "tetrahedron {t} face {f} is glued to nonexistent face {} of tetrahedron {}",
                        g.face, g.tet
                    )));
                }
                if g.tet == t && g.face == f {
                    return Err(TriangulationError::SelfGluedFace { tet: t, face: f });
                }
                let back = gluings[g.tet][g.face as usize];
                if g.perm.apply(f) != g.face
                    || back.tet != t
                    || back.face != f
                    || back.perm != g.perm.inverse()
                {
                    return Err(TriangulationError::NonInvolutiveGluing { tet: t, face: f });
                }
            }
        }
        Ok(GluingTable { gluings })
    }

    /// Parses the JSON triangulation format
    /// `{"tetrahedra": n, "gluings": [[g0, g1, g2, g3], ...]}`.
    pub fn from_json(text: &str) -> Result<Self, TriangulationError> {
        let raw: RawTable = serde_json::from_str(text)
            .map_err(|e| TriangulationError::MalformedInput(e.to_string()))?;
        if raw.gluings.len() > raw.tetrahedra {
            return Err(TriangulationError::MalformedInput(format!(
                "{} gluing rows for {} tetrahedra",
                raw.gluings.len(),
                raw.tetrahedra
            )));
        }
        let mut gluings = Vec::with_capacity(raw.tetrahedra);
        for t in 0..raw.tetrahedra {
            let row = raw.gluings.get(t).map(Vec::as_slice).unwrap_or(&[]);
            if row.len() > 4 {
                return Err(TriangulationError::MalformedInput(format!(
                    "tetrahedron {t} lists {} faces",
                    row.len()
                )));
            }
            let mut faces = [Gluing { tet: 0, face: 0, perm: Perm4::IDENTITY }; 4];
            for (f, slot) in faces.iter_mut().enumerate() {
                let raw_gluing = match row.get(f) {
                    Some(Some(g)) => g,
                    _ => return Err(TriangulationError::UngluedFace { tet: t, face: f as u8 }),
                };
                let images: [u8; 4] = raw_gluing.perm.as_slice().try_into().map_err(|_| {
                    TriangulationError::MalformedInput(format!(
                        "tetrahedron {t} face {f}: perm must have four entries"
                    ))
                })?;
                let perm = Perm4::from_images(images).ok_or_else(|| {
                    TriangulationError::MalformedInput(format!(
                        "tetrahedron {t} face {f}: {images:?} is not a permutation of 0..4"
                    ))
                })?;
                *slot = Gluing { tet: raw_gluing.tet, face: raw_gluing.face, perm };
            }
            gluings.push(faces);
        }
        GluingTable::new(gluings)
    }

    /// Serializes in the same JSON format accepted by [`GluingTable::from_json`],
    /// one tetrahedron per line.
    pub fn to_json(&self) -> String {
        let mut out = format!("{{\"tetrahedra\": {}, \"gluings\": [\n", self.size());
        for (t, faces) in self.gluings.iter().enumerate() {
            let row: Vec<String> = faces
                .iter()
                .map(|g| {
                    let p = g.perm.images();
                    format!(
                        "{{\"tet\": {}, \"face\": {}, \"perm\": [{}, {}, {}, {}]}}",
                        g.tet, g.face, p[0], p[1], p[2], p[3]
                    )
                })
                .collect();
            out.push_str("  [");
            out.push_str(&row.join(", "));
            out.push(']');
            if t + 1 < self.size() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("]}\n");
        out
    }

    /// Number of tetrahedra.
    #[inline]
    pub fn size(&self) -> usize {
        self.gluings.len()
    }

    #[inline]
    pub fn gluing(&self, tet: usize, face: u8) -> Gluing {
        self.gluings[tet][face as usize]
    }

    pub fn gluings(&self) -> &[[Gluing; 4]] {
        &self.gluings
    }

    /// True when every gluing map is odd, i.e. all tetrahedra carry their
    /// standard orientation and the gluings respect it.
    pub fn is_oriented(&self) -> bool {
        self.gluings.iter().flatten().all(|g| g.perm.sign() < 0)
    }

    /// Relabels tetrahedra so that every gluing is orientation-reversing on
    /// the shared face. Returns `None` for non-orientable triangulations.
    pub fn oriented(&self) -> Option<GluingTable> {
        let n = self.size();
        let mut flip: Vec<Option<bool>> = vec![None; n];
        for start in 0..n {
            if flip[start].is_some() {
                continue;
            }
            flip[start] = Some(false);
            let mut stack = vec![start];
            while let Some(t) = stack.pop() {
                let ft = flip[t].unwrap();
                for g in &self.gluings[t] {
                    // Relabelled perm sign is sign(p) * (-1)^(ft + fu); it must be odd.
                    let want = (g.perm.sign() < 0) != ft;
                    let fu = !want;
                    match flip[g.tet] {
                        None => {
                            flip[g.tet] = Some(fu);
                            stack.push(g.tet);
                        }
                        Some(existing) if existing != fu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        let swap = Perm4::transposition(2, 3);
        let relabel = |t: usize| if flip[t] == Some(true) { swap } else { Perm4::IDENTITY };
        let mut gluings = self.gluings.clone();
        for (t, faces) in self.gluings.iter().enumerate() {
            let sigma = relabel(t);
            for (f, g) in faces.iter().enumerate() {
                let tau = relabel(g.tet);
                let new_face = sigma.apply(f as u8);
                gluings[t][new_face as usize] = Gluing {
                    tet: g.tet,
                    face: tau.apply(g.face),
                    perm: tau.compose(g.perm).compose(sigma.inverse()),
                };
            }
        }
        Some(GluingTable::new(gluings).expect("relabelling preserves validity"))
    }

    /// True when the dual graph (tetrahedra joined across glued faces) is connected.
    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.size()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for g in &self.gluings[t] {
                if !seen[g.tet] {
                    seen[g.tet] = true;
                    stack.push(g.tet);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// A canonical relabelling code: the lexicographically smallest
    /// breadth-first numbering over every choice of starting tetrahedron and
    /// starting vertex labelling. Two connected tables are combinatorially
    /// isomorphic exactly when their codes agree.
    pub fn canonical_code(&self) -> Vec<u32> {
        let mut best: Option<Vec<u32>> = None;
        for start in 0..self.size() {
            for labelling in Perm4::all() {
                let code = self.bfs_code(start, labelling);
                if best.as_ref().map_or(true, |b| code < *b) {
                    best = Some(code);
                }
            }
        }
        best.unwrap()
    }

    pub fn is_isomorphic(&self, other: &GluingTable) -> bool {
        self.size() == other.size() && self.canonical_code() == other.canonical_code()
    }

    fn bfs_code(&self, start: usize, labelling: Perm4) -> Vec<u32> {
        let n = self.size();
        // new_index[old] and label map old labels -> new labels
        let mut new_index = vec![usize::MAX; n];
        let mut label = vec![Perm4::IDENTITY; n];
        let mut order = Vec::with_capacity(n);
        new_index[start] = 0;
        label[start] = labelling;
        order.push(start);
        let mut code = Vec::with_capacity(n * 4 * 3);
        let mut head = 0;
        while head < order.len() {
            let old = order[head];
            head += 1;
            let sigma = label[old];
            let sigma_inv = sigma.inverse();
            for new_face in 0..4u8 {
                let g = self.gluings[old][sigma_inv.apply(new_face) as usize];
                if new_index[g.tet] == usize::MAX {
                    new_index[g.tet] = order.len();
                    // Choose the neighbour's labels so that this gluing reads as the identity.
                    label[g.tet] = sigma.compose(g.perm.inverse());
                    order.push(g.tet);
                }
                let tau = label[g.tet];
                let perm = tau.compose(g.perm).compose(sigma_inv);
                let p = perm.images();
                code.push(new_index[g.tet] as u32);
                code.push(tau.apply(g.face) as u32);
                code.push((p[0] as u32) << 6 | (p[1] as u32) << 4 | (p[2] as u32) << 2 | p[3] as u32);
            }
        }
        if order.len() < n {
            code.push(u32::MAX);
        }
        code
    }
}
