//! Bundled cog files, shared with the CLI samples under `data/cog`.

use super::SimplicialComplex;

pub const SINGLE_VERTEX: &str = include_str!("../../../../data/cog/single_vertex.json");
/// `C2` and `C3` over a trivial edge group.
pub const SEGMENT: &str = include_str!("../../../../data/cog/segment.json");
pub const TRIVIAL_TRIANGLE: &str = include_str!("../../../../data/cog/trivial_triangle.json");
/// One local map into vertex 0 conjugated by `t`; fails composition.
pub const TWISTED_TRIANGLE: &str = include_str!("../../../../data/cog/twisted_triangle.json");
/// `C2 * C2` with a supplied free-product model.
pub const DINFTY: &str = include_str!("../../../../data/cog/dinfty.json");
/// `S3 *_{C2} S3` with a supplied amalgam model.
pub const S3_AMALGAM: &str = include_str!("../../../../data/cog/s3_amalgam.json");
/// `(Z x C2) *_Z (Z x C2)`, which is `Z x D∞`, with a supplied product model.
pub const Z_DINFTY: &str = include_str!("../../../../data/cog/z_dinfty.json");

/// The valid fixtures.
pub const ALL: [(&str, &str); 6] = [
    ("single_vertex", SINGLE_VERTEX),
    ("segment", SEGMENT),
    ("trivial_triangle", TRIVIAL_TRIANGLE),
    ("dinfty", DINFTY),
    ("s3_amalgam", S3_AMALGAM),
    ("z_dinfty", Z_DINFTY),
];

/// The full 2-simplex on vertices 0, 1, 2: vertices, then edges 01, 02, 12,
/// then the triangle.
pub fn triangle_complex() -> SimplicialComplex {
    SimplicialComplex::new(
        vec![0, 1, 2],
        vec![vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]],
    )
    .expect("closed under faces")
}
