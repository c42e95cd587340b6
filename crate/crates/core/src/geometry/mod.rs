//! Exact geometry of downward-closed sets inside the unit box `[0,1]^n`.
//!
//! A [`DwcSet`] is a finite union of convex pieces, each stored as the downward
//! closure of its Pareto-maximal vertices together with its facet inequalities.
//! Directions are canonical unit-sum vectors and evaluation returns the scale
//! factor along the canonical representative.

pub mod dd;
mod gap;
pub mod linalg;
mod subset;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::rational::{dot, format_rational, parse_rational, primitive, Q};
use dd::Cone;

pub use gap::{gap_bound, GapBound};

/// Largest objective dimension supported by the exact polytope conversions.
pub const MAX_DIM: usize = 4;

pub type Point = Vec<Q>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {0} is outside the supported range 1..=4")]
    UnsupportedDimension(usize),
    #[error("scale factor {0} is outside [0, 1]")]
    ScaleOutOfRange(String),
    #[error("point has a negative coordinate")]
    NegativeCoordinate,
    #[error("a direction needs a nonnegative, nonzero vector")]
    InvalidDirection,
    #[error("malformed set description: {0}")]
    Malformed(String),
}

pub fn check_dim(dim: usize) -> Result<(), GeometryError> {
    if dim == 0 || dim > MAX_DIM {
        return Err(GeometryError::UnsupportedDimension(dim));
    }
    Ok(())
}

fn expect_dim(expected: usize, found: usize) -> Result<(), GeometryError> {
    if expected != found {
        return Err(GeometryError::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// A direction, stored as its nonnegative unit-sum representative.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction(Vec<Q>);

impl Direction {
    pub fn new(vector: &[Q]) -> Result<Self, GeometryError> {
        if vector.iter().any(Signed::is_negative) {
            return Err(GeometryError::InvalidDirection);
        }
        let sum = vector.iter().fold(Q::zero(), |acc, v| acc + v);
        if sum.is_zero() {
            return Err(GeometryError::InvalidDirection);
        }
        Ok(Direction(vector.iter().map(|v| v / &sum).collect()))
    }

    pub fn from_ints(values: &[i64]) -> Result<Self, GeometryError> {
        let vector: Vec<Q> = values.iter().map(|&v| crate::rational::int(v)).collect();
        Self::new(&vector)
    }

    pub fn components(&self) -> &[Q] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Squared Euclidean norm of the canonical representative.
    pub fn norm_sq(&self) -> Q {
        dot(&self.0, &self.0)
    }

    /// Indices of the positive coordinates.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i].is_positive()).collect()
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "[({})]", parts.join(", "))
    }
}

/// The inequality `normal . x <= bound` with a nonnegative primitive integer normal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Halfspace {
    pub normal: Vec<Q>,
    pub bound: Q,
}

impl Halfspace {
    fn from_ray(ray: &[BigInt]) -> Option<Self> {
        let dim = ray.len() - 1;
        let normal_ints = primitive(
            &ray[..dim]
                .iter()
                .map(|v| Q::from_integer(v.clone()))
                .collect::<Vec<_>>(),
        );
        if normal_ints.iter().all(Zero::is_zero) {
            return None;
        }
        let scale: Q = Q::from_integer(ray[0..dim].iter().zip(&normal_ints).find_map(|(r, n)| {
            if n.is_zero() {
                None
            } else {
                Some(r / n)
            }
        })?);
        let normal: Vec<Q> = normal_ints.into_iter().map(Q::from_integer).collect();
        let bound = Q::from_integer(ray[dim].clone()) / scale;
        Some(Halfspace { normal, bound })
    }

    /// `bound / (normal . d)`, or `None` when the facet does not bound direction `d`.
    pub fn ratio(&self, direction: &[Q]) -> Option<Q> {
        let denom = dot(&self.normal, direction);
        if denom.is_positive() {
            Some(&self.bound / denom)
        } else {
            None
        }
    }

    pub fn slack(&self, point: &[Q]) -> Q {
        &self.bound - dot(&self.normal, point)
    }
}

/// Result of evaluating a set along a direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    /// Largest `lambda` with `lambda * d` in the set, `d` the unit-sum representative.
    pub lambda: Q,
    /// Squared Euclidean norm of the unit-sum representative.
    pub norm_sq: Q,
}

impl Evaluation {
    /// Squared Euclidean length of the farthest point along the direction.
    pub fn length_sq(&self) -> Q {
        &self.lambda * &self.lambda * &self.norm_sq
    }
}

/// Vertices of `{x >= 0 | a . x <= b for (a, b) in constraints, h . x >= 0 for h in cones}`.
pub(crate) fn vertices(dim: usize, constraints: &[(Vec<Q>, Q)], cone_constraints: &[Vec<Q>]) -> Vec<Point> {
    let mut cone = Cone::orthant(dim + 1);
    for h in cone_constraints {
        let mut c = h.clone();
        c.push(Q::zero());
        cone.add_rational(&c);
        if cone.is_trivial() {
            return Vec::new();
        }
    }
    for (normal, bound) in constraints {
        let mut c: Vec<Q> = normal.iter().map(|v| -v).collect();
        c.push(bound.clone());
        cone.add_rational(&c);
        if cone.is_trivial() {
            return Vec::new();
        }
    }
    let mut points: Vec<Point> = cone
        .rays()
        .into_iter()
        .filter(|r| r[dim].is_positive())
        .map(|r| {
            let t = Q::from_integer(r[dim].clone());
            r[..dim].iter().map(|v| Q::from_integer(v.clone()) / &t).collect()
        })
        .collect();
    points.sort();
    points.dedup();
    points
}

/// Facets of `dwc(conv(points))` (without the implicit orthant constraints).
fn facets_of(dim: usize, points: &[Point]) -> Vec<Halfspace> {
    let mut cone = Cone::orthant(dim + 1);
    for p in points {
        let mut c: Vec<Q> = p.iter().map(|v| -v).collect();
        c.push(Q::one());
        cone.add_rational(&c);
    }
    let mut facets: Vec<Halfspace> = cone
        .rays()
        .iter()
        .filter_map(|r| Halfspace::from_ray(r))
        .collect();
    facets.sort();
    facets.dedup();
    facets
}

/// Keeps the points that are Pareto-maximal vertices of `{x >= 0 | facets}`.
fn pareto_vertices(dim: usize, candidates: &[Point], facets: &[Halfspace]) -> Vec<Point> {
    let mut kept: Vec<Point> = Vec::new();
    for g in candidates {
        let tight: Vec<&Halfspace> = facets.iter().filter(|f| f.slack(g).is_zero()).collect();
        let increasable = (0..dim).any(|i| tight.iter().all(|f| f.normal[i].is_zero()));
        if increasable {
            continue;
        }
        let mut rows: Vec<Vec<Q>> = tight.iter().map(|f| f.normal.clone()).collect();
        for i in (0..dim).filter(|&i| g[i].is_zero()) {
            let mut e = vec![Q::zero(); dim];
            e[i] = Q::one();
            rows.push(e);
        }
        if linalg::rank(&rows) == dim {
            kept.push(g.clone());
        }
    }
    kept.sort();
    kept.dedup();
    kept
}

/// `dwc(conv(generators)) ∩ [0,1]^n`, stored by its Pareto-maximal vertices and facets.
#[derive(Clone, Debug)]
pub struct ConvexDwcPiece {
    dim: usize,
    generators: Vec<Point>,
    facets: Vec<Halfspace>,
}

impl PartialEq for ConvexDwcPiece {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.generators == other.generators
    }
}

impl Eq for ConvexDwcPiece {}

impl PartialOrd for ConvexDwcPiece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ConvexDwcPiece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim
            .cmp(&other.dim)
            .then_with(|| self.generators.cmp(&other.generators))
    }
}

impl ConvexDwcPiece {
    pub fn zero(dim: usize) -> Self {
        let facets = (0..dim)
            .map(|i| {
                let mut normal = vec![Q::zero(); dim];
                normal[i] = Q::one();
                Halfspace {
                    normal,
                    bound: Q::zero(),
                }
            })
            .collect();
        ConvexDwcPiece {
            dim,
            generators: vec![vec![Q::zero(); dim]],
            facets,
        }
    }

    /// Canonical piece for `dwc(conv(points)) ∩ [0,1]^n`; the empty list gives `{0}`.
    pub fn hull(dim: usize, points: &[Point]) -> Result<Self, GeometryError> {
        check_dim(dim)?;
        for p in points {
            expect_dim(dim, p.len())?;
            if p.iter().any(Signed::is_negative) {
                return Err(GeometryError::NegativeCoordinate);
            }
        }
        Ok(Self::hull_unchecked(dim, points))
    }

    fn hull_unchecked(dim: usize, points: &[Point]) -> Self {
        if points.is_empty() || points.iter().all(|p| p.iter().all(Zero::is_zero)) {
            return Self::zero(dim);
        }
        let mut facets = facets_of(dim, points);
        let exceeds_box = points.iter().any(|p| p.iter().any(|v| v > &Q::one()));
        let candidates = if exceeds_box {
            for i in 0..dim {
                let mut normal = vec![Q::zero(); dim];
                normal[i] = Q::one();
                facets.push(Halfspace {
                    normal,
                    bound: Q::one(),
                });
            }
            let constraints: Vec<(Vec<Q>, Q)> = facets
                .iter()
                .map(|f| (f.normal.clone(), f.bound.clone()))
                .collect();
            vertices(dim, &constraints, &[])
        } else {
            points.to_vec()
        };
        let generators = pareto_vertices(dim, &candidates, &facets);
        if exceeds_box {
            facets = facets_of(dim, &generators);
        }
        if generators.iter().all(|g| g.iter().all(Zero::is_zero)) {
            return Self::zero(dim);
        }
        ConvexDwcPiece {
            dim,
            generators,
            facets,
        }
    }

    /// Intersection with the halfspaces, keeping only the downward closure of the result.
    fn from_constraints(dim: usize, constraints: &[(Vec<Q>, Q)], cones: &[Vec<Q>]) -> Option<Self> {
        let verts = vertices(dim, constraints, cones);
        if verts.is_empty() {
            return None;
        }
        Some(Self::hull_unchecked(dim, &verts))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Point] {
        &self.generators
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn is_zero(&self) -> bool {
        self.generators.iter().all(|g| g.iter().all(Zero::is_zero))
    }

    pub fn contains(&self, point: &[Q]) -> bool {
        point.iter().all(|v| !v.is_negative())
            && self.facets.iter().all(|f| !f.slack(point).is_negative())
    }

    pub fn is_subset_of(&self, other: &ConvexDwcPiece) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }

    /// Scale factor along the unit-sum direction `d`.
    pub fn lambda(&self, direction: &[Q]) -> Q {
        self.facets
            .iter()
            .filter_map(|f| f.ratio(direction))
            .min()
            .unwrap_or_else(Q::zero)
    }

    fn constraints(&self) -> Vec<(Vec<Q>, Q)> {
        self.facets
            .iter()
            .map(|f| (f.normal.clone(), f.bound.clone()))
            .collect()
    }

    pub fn intersect(&self, other: &ConvexDwcPiece) -> ConvexDwcPiece {
        if self.is_subset_of(other) {
            return self.clone();
        }
        if other.is_subset_of(self) {
            return other.clone();
        }
        let mut constraints = self.constraints();
        constraints.extend(other.constraints());
        Self::from_constraints(self.dim, &constraints, &[]).unwrap_or_else(|| Self::zero(self.dim))
    }

    /// `dwc(self ∩ cone)` for the cone `{x | h . x >= 0 for h in cone}`.
    pub fn restrict_to_cone(&self, cone: &[Vec<Q>]) -> ConvexDwcPiece {
        Self::from_constraints(self.dim, &self.constraints(), cone).unwrap_or_else(|| Self::zero(self.dim))
    }

    pub fn scale(&self, factor: &Q) -> ConvexDwcPiece {
        if factor.is_zero() {
            return Self::zero(self.dim);
        }
        ConvexDwcPiece {
            dim: self.dim,
            generators: self
                .generators
                .iter()
                .map(|g| g.iter().map(|v| v * factor).collect())
                .collect(),
            facets: self
                .facets
                .iter()
                .map(|f| Halfspace {
                    normal: f.normal.clone(),
                    bound: &f.bound * factor,
                })
                .collect(),
        }
    }

    pub fn minkowski(&self, other: &ConvexDwcPiece) -> ConvexDwcPiece {
        let sums: Vec<Point> = self
            .generators
            .iter()
            .flat_map(|g| {
                other
                    .generators
                    .iter()
                    .map(move |h| g.iter().zip(h).map(|(a, b)| a + b).collect())
            })
            .collect();
        Self::hull_unchecked(self.dim, &sums)
    }

    /// Translation by a nonnegative vector followed by clipping to the unit box.
    pub fn shift(&self, offset: &[Q]) -> ConvexDwcPiece {
        if offset.iter().all(Zero::is_zero) {
            return self.clone();
        }
        let moved: Vec<Point> = self
            .generators
            .iter()
            .map(|g| g.iter().zip(offset).map(|(a, b)| a + b).collect())
            .collect();
        Self::hull_unchecked(self.dim, &moved)
    }
}

/// A downward-closed subset of `[0,1]^n`, stored as a union of convex pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DwcSet {
    dim: usize,
    pieces: Vec<ConvexDwcPiece>,
}

impl DwcSet {
    /// The set `{0}`.
    pub fn zero(dim: usize) -> Self {
        DwcSet {
            dim,
            pieces: vec![ConvexDwcPiece::zero(dim)],
        }
    }

    /// The whole unit box `dwc({1})`.
    pub fn unit_box(dim: usize) -> Self {
        Self::point(&vec![Q::one(); dim])
    }

    /// `dwc({v})` for a single vector inside the unit box.
    pub fn point(v: &[Q]) -> Self {
        Self::from_piece(ConvexDwcPiece::hull_unchecked(v.len(), &[v.to_vec()]))
    }

    pub fn from_piece(piece: ConvexDwcPiece) -> Self {
        DwcSet {
            dim: piece.dim,
            pieces: vec![piece],
        }
    }

    pub fn from_pieces(dim: usize, pieces: Vec<ConvexDwcPiece>) -> Self {
        canonicalize(&DwcSet { dim, pieces })
    }

    /// Builds a set from generator lists, one per piece.
    pub fn from_generators(dim: usize, pieces: &[Vec<Point>]) -> Result<Self, GeometryError> {
        let pieces = pieces
            .iter()
            .map(|gens| ConvexDwcPiece::hull(dim, gens))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_pieces(dim, pieces))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[ConvexDwcPiece] {
        &self.pieces
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_convex_piece(&self) -> bool {
        self.pieces.len() == 1
    }

    pub fn contains(&self, point: &[Q]) -> bool {
        self.pieces.iter().any(|p| p.contains(point))
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(ConvexDwcPiece::is_zero)
    }

    /// Every generator of every piece.
    pub fn all_generators(&self) -> Vec<Point> {
        self.pieces
            .iter()
            .flat_map(|p| p.generators.iter().cloned())
            .collect()
    }

    /// Scales every generator by `factor >= 1` and clips to the unit box.
    pub fn dilate(&self, factor: &Q) -> DwcSet {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let gens: Vec<Point> = p
                    .generators
                    .iter()
                    .map(|g| g.iter().map(|v| v * factor).collect())
                    .collect();
                ConvexDwcPiece::hull_unchecked(self.dim, &gens)
            })
            .collect();
        DwcSet::from_pieces(self.dim, pieces)
    }

    pub fn shift(&self, offset: &[Q]) -> DwcSet {
        let pieces = self.pieces.iter().map(|p| p.shift(offset)).collect();
        DwcSet::from_pieces(self.dim, pieces)
    }

    /// `dwc(self ∩ cone)` piecewise.
    pub fn restrict_to_cone(&self, cone: &[Vec<Q>]) -> DwcSet {
        let pieces = self.pieces.iter().map(|p| p.restrict_to_cone(cone)).collect();
        DwcSet::from_pieces(self.dim, pieces)
    }
}

/// `dwc(conv(points)) ∩ [0,1]^n`.
pub fn dwc_hull(dim: usize, points: &[Point]) -> Result<ConvexDwcPiece, GeometryError> {
    ConvexDwcPiece::hull(dim, points)
}

pub fn scale(factor: &Q, set: &DwcSet) -> Result<DwcSet, GeometryError> {
    if factor.is_negative() || factor > &Q::one() {
        return Err(GeometryError::ScaleOutOfRange(format_rational(factor)));
    }
    if factor.is_zero() {
        return Ok(DwcSet::zero(set.dim));
    }
    Ok(DwcSet {
        dim: set.dim,
        pieces: set.pieces.iter().map(|p| p.scale(factor)).collect(),
    })
}

pub fn minkowski(lhs: &DwcSet, rhs: &DwcSet) -> Result<DwcSet, GeometryError> {
    expect_dim(lhs.dim, rhs.dim)?;
    let mut pieces = Vec::with_capacity(lhs.pieces.len() * rhs.pieces.len());
    for p in &lhs.pieces {
        for q in &rhs.pieces {
            pieces.push(p.minkowski(q));
        }
    }
    Ok(DwcSet::from_pieces(lhs.dim, pieces))
}

/// `dwc(conv(⋃ sets))` as a single convex piece.
pub fn convex_union(sets: &[&DwcSet]) -> Result<ConvexDwcPiece, GeometryError> {
    let dim = sets.first().map(|s| s.dim).ok_or_else(|| {
        GeometryError::Malformed("convex union of an empty list".to_string())
    })?;
    for s in sets {
        expect_dim(dim, s.dim)?;
    }
    if sets.len() == 1 && sets[0].pieces.len() == 1 {
        return Ok(sets[0].pieces[0].clone());
    }
    let points: Vec<Point> = sets.iter().flat_map(|s| s.all_generators()).collect();
    Ok(ConvexDwcPiece::hull_unchecked(dim, &points))
}

pub fn intersect(lhs: &DwcSet, rhs: &DwcSet) -> Result<DwcSet, GeometryError> {
    expect_dim(lhs.dim, rhs.dim)?;
    let mut pieces = Vec::with_capacity(lhs.pieces.len() * rhs.pieces.len());
    for p in &lhs.pieces {
        for q in &rhs.pieces {
            pieces.push(p.intersect(q));
        }
    }
    Ok(DwcSet::from_pieces(lhs.dim, pieces))
}

pub fn evaluate(set: &DwcSet, direction: &Direction) -> Evaluation {
    let lambda = set
        .pieces
        .iter()
        .map(|p| p.lambda(direction.components()))
        .max()
        .unwrap_or_else(Q::zero);
    Evaluation {
        lambda,
        norm_sq: direction.norm_sq(),
    }
}

pub fn facet_enumeration(piece: &ConvexDwcPiece) -> Vec<Halfspace> {
    piece.facets.clone()
}

/// Pareto-maximal vertices of `{x >= 0 | halfspaces}`.
pub fn vertex_enumeration(dim: usize, halfspaces: &[Halfspace]) -> Result<Vec<Point>, GeometryError> {
    check_dim(dim)?;
    for h in halfspaces {
        expect_dim(dim, h.normal.len())?;
    }
    let constraints: Vec<(Vec<Q>, Q)> = halfspaces
        .iter()
        .map(|f| (f.normal.clone(), f.bound.clone()))
        .collect();
    let verts = vertices(dim, &constraints, &[]);
    let generators = pareto_vertices(dim, &verts, halfspaces);
    if generators.is_empty() {
        return Ok(vec![vec![Q::zero(); dim]]);
    }
    Ok(generators)
}

pub fn is_subset(lhs: &DwcSet, rhs: &DwcSet) -> Result<bool, GeometryError> {
    expect_dim(lhs.dim, rhs.dim)?;
    Ok(lhs.pieces.iter().all(|p| subset::piece_covered(p, &rhs.pieces)))
}

/// Removes duplicate and dominated pieces and sorts the rest.
pub fn canonicalize(set: &DwcSet) -> DwcSet {
    let mut pieces = set.pieces.clone();
    pieces.sort();
    pieces.dedup();
    let mut kept: Vec<ConvexDwcPiece> = Vec::with_capacity(pieces.len());
    for (i, p) in pieces.iter().enumerate() {
        let dominated = pieces.iter().enumerate().any(|(j, q)| {
            j != i && p.is_subset_of(q) && (!q.is_subset_of(p) || j < i)
        });
        if !dominated {
            kept.push(p.clone());
        }
    }
    if kept.len() > 2 {
        let mut i = 0;
        while i < kept.len() && kept.len() > 1 {
            let others: Vec<ConvexDwcPiece> = kept
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| q.clone())
                .collect();
            if subset::piece_covered(&kept[i], &others) {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
    }
    if kept.is_empty() {
        kept.push(ConvexDwcPiece::zero(set.dim));
    }
    DwcSet {
        dim: set.dim,
        pieces: kept,
    }
}

fn point_to_strings(point: &[Q]) -> Vec<String> {
    point.iter().map(format_rational).collect()
}

/// JSON form: a list of pieces, each a list of generator vectors of `"a/b"` strings.
pub type DwcSetRepr = Vec<Vec<Vec<String>>>;

impl DwcSet {
    pub fn to_repr(&self) -> DwcSetRepr {
        self.pieces
            .iter()
            .map(|p| p.generators.iter().map(|g| point_to_strings(g)).collect())
            .collect()
    }

    pub fn from_repr(repr: &DwcSetRepr) -> Result<Self, GeometryError> {
        let dim = repr
            .iter()
            .flat_map(|piece| piece.iter())
            .map(Vec::len)
            .next()
            .ok_or_else(|| GeometryError::Malformed("set without generators".to_string()))?;
        let pieces: Vec<Vec<Point>> = repr
            .iter()
            .map(|piece| {
                piece
                    .iter()
                    .map(|g| {
                        g.iter()
                            .map(|s| {
                                parse_rational(s)
                                    .map_err(|e| GeometryError::Malformed(e.to_string()))
                            })
                            .collect::<Result<Point, _>>()
                    })
                    .collect::<Result<Vec<Point>, _>>()
            })
            .collect::<Result<_, _>>()?;
        Self::from_generators(dim, &pieces)
    }
}

impl Serialize for DwcSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_repr().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DwcSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = DwcSetRepr::deserialize(deserializer)?;
        DwcSet::from_repr(&repr).map_err(serde::de::Error::custom)
    }
}
