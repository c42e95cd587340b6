//! Exact containment of a convex piece in a finite union of convex pieces.
//!
//! The piece is split recursively by the facets of one covering candidate; the
//! parts outside it must be covered by the remaining candidates. Parts of lower
//! affine dimension are ignored since every piece involved is closed.

use super::{linalg, vertices, ConvexDwcPiece, Point};
use crate::rational::{dot, Q};

type Constraint = (Vec<Q>, Q);

pub(super) fn piece_covered(piece: &ConvexDwcPiece, cover: &[ConvexDwcPiece]) -> bool {
    if cover.iter().any(|q| piece.is_subset_of(q)) {
        return true;
    }
    if cover.is_empty() {
        return false;
    }
    let constraints: Vec<Constraint> = piece
        .facets()
        .iter()
        .map(|f| (f.normal.clone(), f.bound.clone()))
        .collect();
    let verts = vertices(piece.dim(), &constraints, &[]);
    let refs: Vec<&ConvexDwcPiece> = cover.iter().collect();
    covered(piece.dim(), &constraints, &verts, &refs)
}

fn inside(piece: &ConvexDwcPiece, verts: &[Point]) -> bool {
    verts.iter().all(|v| piece.contains(v))
}

fn covered(dim: usize, region: &[Constraint], verts: &[Point], cover: &[&ConvexDwcPiece]) -> bool {
    let Some(region_dim) = linalg::affine_dim(verts) else {
        return true;
    };
    if cover.iter().any(|q| inside(q, verts)) {
        return true;
    }
    // Candidates meeting the region in its full dimension.
    let relevant: Vec<&ConvexDwcPiece> = cover
        .iter()
        .copied()
        .filter(|q| {
            let mut joint = region.to_vec();
            joint.extend(q.facets().iter().map(|f| (f.normal.clone(), f.bound.clone())));
            linalg::affine_dim(&vertices(dim, &joint, &[])) == Some(region_dim)
        })
        .collect();
    let Some((first, rest)) = relevant.split_first() else {
        return false;
    };
    let mut previous: Vec<Constraint> = Vec::new();
    for facet in first.facets() {
        let sticks_out = verts
            .iter()
            .any(|v| dot(&facet.normal, v) > facet.bound);
        if sticks_out {
            let mut part = region.to_vec();
            part.extend(previous.iter().cloned());
            let negated: Vec<Q> = facet.normal.iter().map(|a| -a).collect();
            part.push((negated, -facet.bound.clone()));
            let part_verts = vertices(dim, &part, &[]);
            let full = linalg::affine_dim(&part_verts) == Some(region_dim);
            if full && !covered(dim, &part, &part_verts, rest) {
                return false;
            }
        }
        previous.push((facet.normal.clone(), facet.bound.clone()));
    }
    true
}
