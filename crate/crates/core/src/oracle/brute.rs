//! Slow, independent polytope kernel used as ground truth in tests.
//!
//! Facets are found by trying every hyperplane through `n` of the generators and
//! coordinate recession directions; vertices by solving every `n`-subset of
//! constraints. No double description and no incremental updates.

use num_traits::{One, Signed, Zero};

use crate::geometry::linalg::nullspace;
use crate::geometry::{linalg, Point};
use crate::rational::{dot, primitive_q, Q};

/// `a . x <= b`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BruteHalfspace {
    pub normal: Vec<Q>,
    pub bound: Q,
}

/// `dwc(conv(generators)) ∩ [0,1]^n` kept by its Pareto-maximal vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrutePiece {
    dim: usize,
    generators: Vec<Point>,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Facets of `conv(points) - R^n_+`, by exhaustive search.
pub fn brute_facets(dim: usize, points: &[Point]) -> Vec<BruteHalfspace> {
    let mut found: Vec<BruteHalfspace> = Vec::new();
    for k in 1..=dim.min(points.len()) {
        for chosen in combinations(points.len(), k) {
            for directions in combinations(dim, dim - k) {
                // Unknowns (a_1..a_n, b): a . g - b = 0 for chosen g, a_i = 0 for chosen directions.
                let mut rows: Vec<Vec<Q>> = Vec::new();
                for &g in &chosen {
                    let mut row: Vec<Q> = points[g].clone();
                    row.push(-Q::one());
                    rows.push(row);
                }
                for &i in &directions {
                    let mut row = vec![Q::zero(); dim + 1];
                    row[i] = Q::one();
                    rows.push(row);
                }
                let basis = nullspace(&rows, dim + 1);
                if basis.len() != 1 {
                    continue;
                }
                let mut candidate = primitive_q(&basis[0]);
                if candidate[..dim].iter().any(Signed::is_negative) {
                    candidate.iter_mut().for_each(|v| *v = -v.clone());
                }
                let normal: Vec<Q> = candidate[..dim].to_vec();
                if normal.iter().any(Signed::is_negative) || normal.iter().all(Zero::is_zero) {
                    continue;
                }
                let bound = candidate[dim].clone();
                if points.iter().all(|p| dot(&normal, p) <= bound) {
                    let h = BruteHalfspace { normal, bound };
                    if !found.contains(&h) {
                        found.push(h);
                    }
                }
            }
        }
    }
    found.sort();
    found
}

/// All vertices of `{x >= 0 | constraints}`, by exhaustive search.
pub fn brute_vertices(dim: usize, constraints: &[BruteHalfspace]) -> Vec<Point> {
    let mut all: Vec<BruteHalfspace> = constraints.to_vec();
    for i in 0..dim {
        let mut normal = vec![Q::zero(); dim];
        normal[i] = -Q::one();
        all.push(BruteHalfspace {
            normal,
            bound: Q::zero(),
        });
    }
    let mut found: Vec<Point> = Vec::new();
    for chosen in combinations(all.len(), dim) {
        let matrix: Vec<Vec<Q>> = chosen.iter().map(|&c| all[c].normal.clone()).collect();
        if linalg::rank(&matrix) != dim {
            continue;
        }
        let rhs: Vec<Q> = chosen.iter().map(|&c| all[c].bound.clone()).collect();
        let Some(x) = linalg::solve(&matrix, &rhs) else {
            continue;
        };
        if all.iter().all(|h| dot(&h.normal, &x) <= h.bound) && !found.contains(&x) {
            found.push(x);
        }
    }
    found.sort();
    found
}

fn pareto(dim: usize, candidates: &[Point], constraints: &[BruteHalfspace]) -> Vec<Point> {
    // A point of a downward-closed polytope is Pareto-maximal iff no coordinate can grow alone.
    let mut kept: Vec<Point> = candidates
        .iter()
        .filter(|v| {
            (0..dim).all(|i| {
                constraints
                    .iter()
                    .any(|h| h.normal[i].is_positive() && dot(&h.normal, v) == h.bound)
            })
        })
        .cloned()
        .collect();
    kept.sort();
    kept.dedup();
    kept
}

impl BrutePiece {
    pub fn zero(dim: usize) -> Self {
        BrutePiece {
            dim,
            generators: vec![vec![Q::zero(); dim]],
        }
    }

    pub fn hull(dim: usize, points: &[Point]) -> Self {
        let nonzero: Vec<Point> = points
            .iter()
            .filter(|p| p.iter().any(|v| !v.is_zero()))
            .cloned()
            .collect();
        if nonzero.is_empty() {
            return Self::zero(dim);
        }
        let mut constraints = brute_facets(dim, &nonzero);
        for i in 0..dim {
            let mut normal = vec![Q::zero(); dim];
            normal[i] = Q::one();
            constraints.push(BruteHalfspace {
                normal,
                bound: Q::one(),
            });
        }
        let verts = brute_vertices(dim, &constraints);
        let generators = pareto(dim, &verts, &constraints);
        if generators.is_empty() || generators.iter().all(|g| g.iter().all(Zero::is_zero)) {
            return Self::zero(dim);
        }
        BrutePiece { dim, generators }
    }

    pub fn generators(&self) -> &[Point] {
        &self.generators
    }

    pub fn facets(&self) -> Vec<BruteHalfspace> {
        if self.generators.iter().all(|g| g.iter().all(Zero::is_zero)) {
            return (0..self.dim)
                .map(|i| {
                    let mut normal = vec![Q::zero(); self.dim];
                    normal[i] = Q::one();
                    BruteHalfspace {
                        normal,
                        bound: Q::zero(),
                    }
                })
                .collect();
        }
        brute_facets(self.dim, &self.generators)
    }

    pub fn scale(&self, factor: &Q) -> Self {
        let pts: Vec<Point> = self
            .generators
            .iter()
            .map(|g| g.iter().map(|v| v * factor).collect())
            .collect();
        Self::hull(self.dim, &pts)
    }

    pub fn minkowski(&self, other: &BrutePiece) -> Self {
        let mut pts = Vec::new();
        for g in &self.generators {
            for h in &other.generators {
                pts.push(g.iter().zip(h).map(|(a, b)| a + b).collect());
            }
        }
        Self::hull(self.dim, &pts)
    }

    pub fn union_hull(pieces: &[BrutePiece]) -> Self {
        let dim = pieces[0].dim;
        let pts: Vec<Point> = pieces.iter().flat_map(|p| p.generators.iter().cloned()).collect();
        Self::hull(dim, &pts)
    }

    pub fn intersect(&self, other: &BrutePiece) -> Self {
        let mut constraints = self.facets();
        constraints.extend(other.facets());
        let verts = brute_vertices(self.dim, &constraints);
        let generators = pareto(self.dim, &verts, &constraints);
        Self::hull(self.dim, &generators)
    }

    pub fn contains(&self, point: &[Q]) -> bool {
        point.iter().all(|v| !v.is_negative()) && self.facets().iter().all(|h| dot(&h.normal, point) <= h.bound)
    }
}
