//! Generalized triangulations of closed 3-manifolds: gluing tables, their
//! skeleta, mod-2 homology and bistellar moves.

mod gluing;
mod homology;
mod pachner;
mod perm;
mod skeleton;

pub use gluing::{Gluing, GluingTable};
pub use homology::{homology_z2, HomologyInfo};
pub use pachner::{candidate_23_moves, candidate_32_moves};
pub use perm::{edge_index, face_vertices, Perm4, EDGE_VERTICES};
pub use skeleton::{EdgeEmbedding, Skeleton, TriangleClass};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TriangulationError {
    #[error("malformed triangulation: {0}")]
    MalformedInput(String),
    #[error("gluing of tetrahedron {tet} face {face} is not matched by its partner face")]
    NonInvolutiveGluing { tet: usize, face: u8 },
    #[error("tetrahedron {tet} face {face} is glued to itself")]
    SelfGluedFace { tet: usize, face: u8 },
    #[error("tetrahedron {tet} face {face} is not glued (boundary triangulations are not supported)")]
    UngluedFace { tet: usize, face: u8 },
    #[error("not a closed 3-manifold triangulation: {0}")]
    NotClosedManifoldLike(String),
    #[error("move not applicable: {0}")]
    MoveNotApplicable(String),
}

/// Parses and validates a triangulation file.
pub fn parse_triangulation(text: &str) -> Result<GluingTable, TriangulationError> {
    let table = GluingTable::from_json(text)?;
    if table.oriented().is_none() {
        log::warn!("triangulation is not orientable; the invariant is still computed");
    }
    Ok(table)
}

/// Shorthand for [`Skeleton::new`].
pub fn compute_skeleton(table: &GluingTable) -> Result<Skeleton, TriangulationError> {
    Skeleton::new(table)
}
