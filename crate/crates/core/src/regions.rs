//! Partitions of the direction simplex into regions of constant Minimizer preference.
//!
//! Directions live on the unit-sum simplex. Comparing the radial values of two
//! facets `b_i / (a_i . d)` and `b_j / (a_j . d)` is linear in `d`, so the
//! regions come from an arrangement of hyperplanes through the origin. Faces of
//! the arrangement are kept as sign vectors (coordinate signs first, then one
//! sign per hyperplane) with the points spanning their closures.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::game::StateId;
use crate::geometry::dd::Cone;
use crate::geometry::{check_dim, linalg, Direction, DwcSet, GeometryError, Halfspace, Point};
use crate::rational::{dot, primitive, primitive_q, Q};

/// Per Minimizer state, the actions attaining the smallest lower-bound value.
pub type Argmin = BTreeMap<StateId, BTreeSet<usize>>;

/// Per Minimizer state in scope, the lower-bound value of each available action.
pub type ActionValues = BTreeMap<StateId, Vec<DwcSet>>;

/// The hyperplane `{d | normal . d = 0}`, with a primitive normal whose first nonzero entry is positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OriginHyperplane {
    normal: Vec<Q>,
}

impl OriginHyperplane {
    /// `None` for the zero vector.
    pub fn new(normal: &[Q]) -> Option<Self> {
        let mut normal = primitive_q(normal);
        let first = normal.iter().find(|v| !v.is_zero())?;
        if first.is_negative() {
            normal.iter_mut().for_each(|v| *v = -v.clone());
        }
        Some(OriginHyperplane { normal })
    }

    pub fn normal(&self) -> &[Q] {
        &self.normal
    }

    pub fn side(&self, point: &[Q]) -> i8 {
        sign(&dot(&self.normal, point))
    }

    /// Whether the hyperplane can meet the relative interior of some face of the simplex.
    fn splits_simplex(&self) -> bool {
        self.normal.iter().any(Signed::is_positive) && self.normal.iter().any(Signed::is_negative)
    }
}

fn sign(value: &Q) -> i8 {
    match value.cmp(&Q::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// `small` lies in the closure of `big`.
fn conforms(small: &[i8], big: &[i8]) -> bool {
    small.iter().zip(big).all(|(s, b)| *s == 0 || s == b)
}

fn barycenter(points: &[&Point]) -> Point {
    let count = Q::from_integer(points.len().into());
    let dim = points[0].len();
    (0..dim)
        .map(|i| points.iter().fold(Q::zero(), |acc, p| acc + &p[i]) / &count)
        .collect()
}

/// A relatively open face of the arrangement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub signs: Vec<i8>,
    /// Indices of points spanning the closure (all its vertices, possibly more).
    pub points: Vec<usize>,
    pub dim: usize,
}

/// Arrangement of origin hyperplanes restricted to the direction simplex.
#[derive(Clone, Debug)]
pub struct Arrangement {
    dim: usize,
    hyperplanes: Vec<OriginHyperplane>,
    points: Vec<Point>,
    point_signs: Vec<Vec<i8>>,
    faces: Vec<Face>,
    lookup: HashMap<Vec<i8>, usize>,
}

impl Arrangement {
    /// The faces of the simplex itself.
    pub fn simplex(dim: usize) -> Self {
        let points: Vec<Point> = (0..dim)
            .map(|i| {
                let mut p = vec![Q::zero(); dim];
                p[i] = Q::from_integer(1.into());
                p
            })
            .collect();
        let point_signs: Vec<Vec<i8>> = points.iter().map(|p| p.iter().map(sign).collect()).collect();
        let faces = (1u32..(1 << dim))
            .map(|mask| {
                let members: Vec<usize> = (0..dim).filter(|&i| mask & (1 << i) != 0).collect();
                Face {
                    signs: (0..dim).map(|i| i8::from(mask & (1 << i) != 0)).collect(),
                    dim: members.len() - 1,
                    points: members,
                }
            })
            .collect();
        let mut arrangement = Arrangement {
            dim,
            hyperplanes: Vec::new(),
            points,
            point_signs,
            faces,
            lookup: HashMap::new(),
        };
        arrangement.reindex();
        arrangement
    }

    pub fn build(dim: usize, hyperplanes: &[OriginHyperplane]) -> Self {
        let mut arrangement = Self::simplex(dim);
        for h in hyperplanes {
            arrangement.add(h.clone());
        }
        arrangement
    }

    fn reindex(&mut self) {
        self.lookup = self
            .faces
            .iter()
            .enumerate()
            .map(|(i, f)| (f.signs.clone(), i))
            .collect();
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hyperplanes(&self) -> &[OriginHyperplane] {
        &self.hyperplanes
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn point(&self, index: usize) -> &Point {
        &self.points[index]
    }

    /// Adds a hyperplane, splitting every face it crosses.
    pub fn add(&mut self, hyperplane: OriginHyperplane) {
        if self.hyperplanes.contains(&hyperplane) {
            return;
        }
        let values: Vec<i8> = self.points.iter().map(|p| hyperplane.side(p)).collect();
        // New points on crossed edges, with the sign vector of their edge.
        let mut created: Vec<(usize, Vec<i8>)> = Vec::new();
        for face in self.faces.iter().filter(|f| f.dim == 1) {
            let (a, b) = (face.points[0], face.points[1]);
            if values[a] * values[b] < 0 {
                let (pa, pb) = (&self.points[a], &self.points[b]);
                let va = dot(&hyperplane.normal, pa).abs();
                let vb = dot(&hyperplane.normal, pb).abs();
                let raw: Vec<Q> = pa.iter().zip(pb).map(|(x, y)| x * &vb + y * &va).collect();
                let total = raw.iter().fold(Q::zero(), |acc, v| acc + v);
                let point: Point = raw.iter().map(|v| v / &total).collect();
                let index = self.points.len();
                self.points.push(point);
                let mut signs = face.signs.clone();
                signs.push(0);
                self.point_signs.push(signs);
                created.push((index, face.signs.clone()));
            }
        }
        for (i, s) in values.iter().enumerate() {
            self.point_signs[i].push(*s);
        }
        let mut faces = Vec::with_capacity(self.faces.len() * 2);
        for face in &self.faces {
            let has_pos = face.points.iter().any(|&p| values[p] > 0);
            let has_neg = face.points.iter().any(|&p| values[p] < 0);
            let extend = |s: i8, points: Vec<usize>, dim: usize| {
                let mut signs = face.signs.clone();
                signs.push(s);
                Face { signs, points, dim }
            };
            match (has_pos, has_neg) {
                (false, false) => faces.push(extend(0, face.points.clone(), face.dim)),
                (true, false) => faces.push(extend(1, face.points.clone(), face.dim)),
                (false, true) => faces.push(extend(-1, face.points.clone(), face.dim)),
                (true, true) => {
                    let on_cut: Vec<usize> = created
                        .iter()
                        .filter(|(_, edge)| conforms(edge, &face.signs))
                        .map(|(p, _)| *p)
                        .collect();
                    let side = |keep: &dyn Fn(i8) -> bool| -> Vec<usize> {
                        face.points
                            .iter()
                            .copied()
                            .filter(|&p| keep(values[p]))
                            .chain(on_cut.iter().copied())
                            .collect()
                    };
                    faces.push(extend(1, side(&|v| v >= 0), face.dim));
                    faces.push(extend(-1, side(&|v| v <= 0), face.dim));
                    faces.push(extend(0, side(&|v| v == 0), face.dim - 1));
                }
            }
        }
        self.faces = faces;
        self.hyperplanes.push(hyperplane);
        self.reindex();
    }

    pub fn sign_vector(&self, point: &[Q]) -> Vec<i8> {
        point
            .iter()
            .map(sign)
            .chain(self.hyperplanes.iter().map(|h| h.side(point)))
            .collect()
    }

    /// Index of the face containing the direction.
    pub fn locate(&self, direction: &Direction) -> Option<usize> {
        self.lookup.get(&self.sign_vector(direction.components())).copied()
    }

    pub fn face_barycenter(&self, face: usize) -> Point {
        let pts: Vec<&Point> = self.faces[face].points.iter().map(|&p| &self.points[p]).collect();
        barycenter(&pts)
    }

    /// Vertices of the face's closure.
    pub fn face_vertices(&self, face: usize) -> Vec<Point> {
        let f = &self.faces[face];
        f.points
            .iter()
            .copied()
            .filter(|&p| self.lookup.get(&self.point_signs[p]).map_or(false, |&g| self.faces[g].dim == 0))
            .map(|p| self.points[p].clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Support of the face in the simplex.
    pub fn carrier_dim(&self, face: usize) -> usize {
        self.faces[face].signs[..self.dim].iter().filter(|&&s| s > 0).count() - 1
    }

    /// Pulling triangulation from the lexicographically smallest vertex of each face.
    pub fn triangulate(&self) -> Vec<Vec<Vec<usize>>> {
        let mut order: Vec<usize> = (0..self.faces.len()).collect();
        order.sort_by_key(|&f| self.faces[f].dim);
        let mut result: Vec<Vec<Vec<usize>>> = vec![Vec::new(); self.faces.len()];
        for &f in &order {
            let face = &self.faces[f];
            if face.dim == 0 {
                result[f] = vec![vec![face.points[0]]];
                continue;
            }
            let apex = *face
                .points
                .iter()
                .min_by(|&&a, &&b| self.points[a].cmp(&self.points[b]))
                .expect("faces have points");
            let mut simplices = Vec::new();
            for (g, other) in self.faces.iter().enumerate() {
                if g == f || other.dim >= face.dim || !conforms(&other.signs, &face.signs) {
                    continue;
                }
                if conforms(&self.point_signs[apex], &other.signs) {
                    continue;
                }
                for tau in &result[g] {
                    let mut simplex = vec![apex];
                    simplex.extend(tau.iter().copied());
                    let pts: Vec<&Point> = simplex.iter().map(|&p| &self.points[p]).collect();
                    if self.sign_vector(&barycenter(&pts)) == face.signs {
                        simplex.sort_by(|&a, &b| self.points[a].cmp(&self.points[b]));
                        simplices.push(simplex);
                    }
                }
            }
            result[f] = simplices;
        }
        result
    }
}

/// Relative interior of the convex hull of affinely independent directions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OpenSimplex {
    vertices: Vec<Point>,
}

impl OpenSimplex {
    pub fn new(vertices: Vec<Point>) -> Self {
        OpenSimplex { vertices }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Whether the direction lies in the relative interior.
    pub fn contains(&self, direction: &Direction) -> bool {
        let dim = direction.dim();
        let matrix: Vec<Vec<Q>> = (0..dim)
            .map(|row| self.vertices.iter().map(|v| v[row].clone()).collect())
            .collect();
        match linalg::solve(&matrix, direction.components()) {
            Some(weights) => {
                weights.iter().all(Signed::is_positive)
                    && (0..dim).all(|row| dot(&matrix[row], &weights) == direction.components()[row])
            }
            None => false,
        }
    }
}

/// The barycenter, which lies in the relative interior.
pub fn interior_sample(simplex: &OpenSimplex) -> Direction {
    let pts: Vec<&Point> = simplex.vertices.iter().collect();
    Direction::new(&barycenter(&pts)).expect("simplex vertices are directions")
}

/// A facet `a . x <= p / q` with integer normal and `q > 0`.
struct IntFacet {
    normal: Vec<BigInt>,
    numer: BigInt,
    denom: BigInt,
}

/// A set as the facet lists of its pieces.
type IntSet = Vec<Vec<IntFacet>>;

fn int_set(set: &DwcSet) -> IntSet {
    set.pieces()
        .iter()
        .map(|piece| {
            piece
                .facets()
                .iter()
                .map(|f| IntFacet {
                    normal: f.normal.iter().map(|v| v.to_integer()).collect(),
                    numer: f.bound.numer().clone(),
                    denom: f.bound.denom().clone(),
                })
                .collect()
        })
        .collect()
}

/// A nonnegative fraction with positive denominator.
struct Frac(BigInt, BigInt);

impl Frac {
    fn zero() -> Self {
        Frac(BigInt::zero(), BigInt::one())
    }

    fn cmp(&self, other: &Frac) -> Ordering {
        (&self.0 * &other.1).cmp(&(&other.0 * &self.1))
    }
}

/// The scale factor of [`evaluate`] along an integer direction, up to a common positive factor.
///
/// Ratios `p / (q (a . d))` stay unnormalized and are compared by cross-multiplication.
fn int_lambda(set: &IntSet, direction: &[BigInt]) -> Frac {
    let mut best: Option<Frac> = None;
    for piece in set {
        let mut low: Option<Frac> = None;
        for facet in piece {
            let s: BigInt = facet.normal.iter().zip(direction).map(|(a, d)| a * d).sum();
            if s.is_positive() {
                let r = Frac(facet.numer.clone(), &facet.denom * s);
                if low.as_ref().map_or(true, |l| r.cmp(l) == Ordering::Less) {
                    low = Some(r);
                }
            }
        }
        let low = low.unwrap_or_else(Frac::zero);
        if best.as_ref().map_or(true, |b| low.cmp(b) == Ordering::Greater) {
            best = Some(low);
        }
    }
    best.unwrap_or_else(Frac::zero)
}

fn int_argmin(values: &[IntSet], direction: &[BigInt]) -> BTreeSet<usize> {
    let lambdas: Vec<Frac> = values.iter().map(|v| int_lambda(v, direction)).collect();
    match lambdas.iter().min_by(|a, b| a.cmp(b)) {
        Some(min) => (0..lambdas.len()).filter(|&i| lambdas[i].cmp(min) == Ordering::Equal).collect(),
        None => BTreeSet::new(),
    }
}

/// Actions whose value attains the minimum scale factor along `direction`.
pub fn argmin_actions(values: &[DwcSet], direction: &Direction) -> BTreeSet<usize> {
    let converted: Vec<IntSet> = values.iter().map(int_set).collect();
    int_argmin(&converted, &primitive(direction.components()))
}

/// A scope converted once, for classifying many faces.
struct ScopeEvaluator {
    states: Vec<(StateId, Vec<IntSet>)>,
}

impl ScopeEvaluator {
    fn new(scope: &ActionValues) -> Self {
        let states = scope
            .iter()
            .map(|(&s, values)| (s, values.iter().map(int_set).collect()))
            .collect();
        ScopeEvaluator { states }
    }

    /// Argmin along any positive multiple of `direction`.
    fn argmin(&self, direction: &[BigInt]) -> Argmin {
        self.states
            .iter()
            .map(|(s, values)| (*s, int_argmin(values, direction)))
            .collect()
    }
}

pub fn argmin_map(scope: &ActionValues, direction: &Direction) -> Argmin {
    ScopeEvaluator::new(scope).argmin(&primitive(direction.components()))
}

fn facet_list(set: &DwcSet) -> Vec<Halfspace> {
    let mut facets: Vec<Halfspace> = set.pieces().iter().flat_map(|p| p.facets().iter().cloned()).collect();
    facets.sort();
    facets.dedup();
    facets
}

/// Constraints under which `facets[k]` attains the minimum ratio.
fn activity_constraints(facets: &[Halfspace], k: usize) -> Vec<Vec<Q>> {
    let active = &facets[k];
    facets
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != k)
        .map(|(_, other)| {
            active
                .normal
                .iter()
                .zip(&other.normal)
                .map(|(ak, aj)| &other.bound * ak - &active.bound * aj)
                .collect()
        })
        .collect()
}

fn activity_cone(dim: usize, facets: &[Halfspace], k: usize) -> Cone {
    let mut cone = Cone::orthant(dim);
    for c in activity_constraints(facets, k) {
        if cone.is_trivial() {
            break;
        }
        cone.add_rational(&c);
    }
    cone
}

fn comparison_normal(f: &Halfspace, g: &Halfspace) -> Vec<Q> {
    f.normal
        .iter()
        .zip(&g.normal)
        .map(|(af, ag)| &f.bound * ag - &g.bound * af)
        .collect()
}

/// Hyperplanes where facets of two different actions' values swap order.
///
/// A pair is kept only when both facets can be active at a common direction on
/// the hyperplane; elsewhere the swap cannot change the preference order.
pub fn comparison_hyperplanes(dim: usize, scope: &ActionValues) -> Vec<OriginHyperplane> {
    let mut found: BTreeSet<OriginHyperplane> = BTreeSet::new();
    for values in scope.values() {
        let facets: Vec<Vec<Halfspace>> = values.iter().map(facet_list).collect();
        let cones: Vec<Vec<Cone>> = facets
            .iter()
            .map(|list| (0..list.len()).map(|k| activity_cone(dim, list, k)).collect())
            .collect();
        for a in 0..values.len() {
            for b in (a + 1)..values.len() {
                if values[a] == values[b] {
                    continue;
                }
                for (i, f) in facets[a].iter().enumerate() {
                    if cones[a][i].is_trivial() {
                        continue;
                    }
                    for (j, g) in facets[b].iter().enumerate() {
                        let Some(h) = OriginHyperplane::new(&comparison_normal(f, g)) else {
                            continue;
                        };
                        if !h.splits_simplex() || found.contains(&h) {
                            continue;
                        }
                        if cones[b][j].is_trivial() {
                            continue;
                        }
                        let mut cone = cones[a][i].clone();
                        for c in activity_constraints(&facets[b], j) {
                            cone.add_rational(&c);
                        }
                        cone.add_rational(h.normal());
                        let negated: Vec<Q> = h.normal().iter().map(|v| -v).collect();
                        cone.add_rational(&negated);
                        if !cone.is_trivial() {
                            found.insert(h);
                        }
                    }
                }
            }
        }
    }
    found.into_iter().collect()
}

/// A partition of all directions into arrangement cells with exact argmin metadata.
#[derive(Clone, Debug)]
pub struct RegionPartition {
    arrangement: Arrangement,
    argmin: Vec<Argmin>,
}

/// One cell of a partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub index: usize,
    pub dim: usize,
    pub carrier_dim: usize,
    pub signs: Vec<i8>,
    pub vertices: Vec<Point>,
    pub sample: Direction,
    pub argmin: Argmin,
}

impl Region {
    /// Whether the region is open in the face of the simplex that carries it.
    pub fn is_full(&self) -> bool {
        self.dim == self.carrier_dim
    }
}

/// A simplex of the triangulated partition, with the cell it belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionSimplex {
    pub simplex: OpenSimplex,
    pub cell: usize,
}

impl RegionPartition {
    /// Builds the partition from the hyperplanes, classifying every face.
    pub fn from_hyperplanes(dim: usize, hyperplanes: &[OriginHyperplane], scope: &ActionValues) -> Self {
        let arrangement = Arrangement::build(dim, hyperplanes);
        let evaluator = ScopeEvaluator::new(scope);
        let argmin = (0..arrangement.faces.len())
            .map(|f| {
                let mut sum = vec![Q::zero(); dim];
                for &p in &arrangement.faces[f].points {
                    for (acc, v) in sum.iter_mut().zip(&arrangement.points[p]) {
                        *acc += v;
                    }
                }
                evaluator.argmin(&primitive(&sum))
            })
            .collect();
        RegionPartition { arrangement, argmin }
    }

    pub fn dim(&self) -> usize {
        self.arrangement.dim
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    pub fn hyperplanes(&self) -> &[OriginHyperplane] {
        &self.arrangement.hyperplanes
    }

    pub fn len(&self) -> usize {
        self.arrangement.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrangement.faces.is_empty()
    }

    pub fn region(&self, index: usize) -> Region {
        let face = &self.arrangement.faces[index];
        Region {
            index,
            dim: face.dim,
            carrier_dim: self.arrangement.carrier_dim(index),
            signs: face.signs.clone(),
            vertices: self.arrangement.face_vertices(index),
            sample: Direction::new(&self.arrangement.face_barycenter(index)).expect("faces lie on the simplex"),
            argmin: self.argmin[index].clone(),
        }
    }

    pub fn regions(&self) -> Vec<Region> {
        (0..self.len()).map(|i| self.region(i)).collect()
    }

    pub fn argmin(&self, index: usize) -> &Argmin {
        &self.argmin[index]
    }

    pub fn locate(&self, direction: &Direction) -> Option<usize> {
        self.arrangement.locate(direction)
    }

    /// Class index per face: faces with equal argmin joined when one lies in the closure of the other.
    pub fn classes(&self) -> Vec<usize> {
        let faces = &self.arrangement.faces;
        let mut class: Vec<usize> = (0..faces.len()).collect();
        fn root(class: &mut [usize], mut i: usize) -> usize {
            while class[i] != i {
                class[i] = class[class[i]];
                i = class[i];
            }
            i
        }
        for a in 0..faces.len() {
            for b in 0..faces.len() {
                let bounds = faces[a].signs.iter().zip(&faces[b].signs).all(|(x, y)| *x == 0 || x == y);
                if a != b && bounds && self.argmin[a] == self.argmin[b] {
                    let (ra, rb) = (root(&mut class, a), root(&mut class, b));
                    class[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let roots: Vec<usize> = (0..faces.len()).map(|i| root(&mut class, i)).collect();
        let mut numbering: BTreeMap<usize, usize> = BTreeMap::new();
        roots
            .into_iter()
            .map(|r| {
                let next = numbering.len();
                *numbering.entry(r).or_insert(next)
            })
            .collect()
    }

    /// Drops hyperplanes whose removal leaves every merged cell with uniform metadata.
    fn reduce(self, scope: &ActionValues) -> Self {
        let dim = self.arrangement.dim;
        let count = self.arrangement.hyperplanes.len();
        let mut kept: Vec<bool> = vec![true; count];
        for candidate in 0..count {
            kept[candidate] = false;
            let mut groups: HashMap<Vec<i8>, &Argmin> = HashMap::new();
            let uniform = self.arrangement.faces.iter().zip(&self.argmin).all(|(face, meta)| {
                let key: Vec<i8> = face.signs[..dim]
                    .iter()
                    .copied()
                    .chain((0..count).filter(|&h| kept[h]).map(|h| face.signs[dim + h]))
                    .collect();
                match groups.get(&key) {
                    Some(existing) => *existing == meta,
                    None => {
                        groups.insert(key, meta);
                        true
                    }
                }
            });
            if !uniform {
                kept[candidate] = true;
            }
        }
        if kept.iter().all(|&k| k) {
            return self;
        }
        let hyperplanes: Vec<OriginHyperplane> = self
            .arrangement
            .hyperplanes
            .iter()
            .zip(&kept)
            .filter(|(_, &k)| k)
            .map(|(h, _)| h.clone())
            .collect();
        Self::from_hyperplanes(dim, &hyperplanes, scope)
    }

    /// Triangulation of every cell into open simplices.
    pub fn simplices(&self) -> Vec<RegionSimplex> {
        let triangulation = self.arrangement.triangulate();
        let mut out = Vec::new();
        for (cell, simplices) in triangulation.into_iter().enumerate() {
            for s in simplices {
                let vertices = s.iter().map(|&p| self.arrangement.points[p].clone()).collect();
                out.push(RegionSimplex {
                    simplex: OpenSimplex::new(vertices),
                    cell,
                });
            }
        }
        out
    }

    /// Refinement of both partitions by pooling their hyperplanes.
    pub fn common_refinement(&self, other: &RegionPartition) -> Result<RegionPartition, GeometryError> {
        if self.dim() != other.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let mut pooled: Vec<OriginHyperplane> = self.hyperplanes().to_vec();
        for h in other.hyperplanes() {
            if !pooled.contains(h) {
                pooled.push(h.clone());
            }
        }
        let arrangement = Arrangement::build(self.dim(), &pooled);
        let argmin = (0..arrangement.faces.len())
            .map(|f| {
                let d = Direction::new(&arrangement.face_barycenter(f)).expect("faces lie on the simplex");
                let mut meta = self.argmin[self.locate(&d).expect("partitions cover the simplex")].clone();
                for (s, acts) in &other.argmin[other.locate(&d).expect("partitions cover the simplex")] {
                    meta.entry(*s).or_insert_with(|| acts.clone());
                }
                meta
            })
            .collect();
        Ok(RegionPartition { arrangement, argmin })
    }
}

/// Consistent partition for the Minimizer states in scope, as coarse as the greedy reduction finds.
pub fn get_regions(dim: usize, scope: &ActionValues) -> Result<RegionPartition, GeometryError> {
    check_dim(dim)?;
    let hyperplanes = comparison_hyperplanes(dim, scope);
    let partition = RegionPartition::from_hyperplanes(dim, &hyperplanes, scope);
    Ok(partition.reduce(scope))
}

/// Checks the argmin metadata at the barycenter and at `samples` random interior points per cell.
pub fn consistency_check<R: Rng>(partition: &RegionPartition, scope: &ActionValues, samples: usize, rng: &mut R) -> bool {
    (0..partition.len()).all(|index| {
        let region = partition.region(index);
        if argmin_map(scope, &region.sample) != region.argmin {
            return false;
        }
        let face = &partition.arrangement.faces[index];
        (0..samples).all(|_| {
            let weights: Vec<Q> = face
                .points
                .iter()
                .map(|_| Q::from_integer(rng.gen_range(1..=1000).into()))
                .collect();
            let dim = partition.dim();
            let mut point = vec![Q::zero(); dim];
            for (w, &p) in weights.iter().zip(&face.points) {
                for (acc, v) in point.iter_mut().zip(&partition.arrangement.points[p]) {
                    *acc += w * v;
                }
            }
            let d = Direction::new(&point).expect("positive combination of directions");
            partition.locate(&d) == Some(index) && argmin_map(scope, &d) == region.argmin
        })
    })
}
