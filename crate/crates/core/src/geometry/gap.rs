//! Sound upper bound on `sup_d (r_U(d) - r_L(d))` over unit-sum directions.
//!
//! Each face of the direction simplex is handled on its relative interior. There
//! both radial functions are minima of ratios `b / (a . d)` over the facets that
//! touch the face, so the face splits into cones where one facet of each set is
//! active. On such a cone the difference is `N(d) / D(d)` with `N` linear and `D`
//! a positive product of linear forms. It is bounded by `max N / min D` over the
//! cone's vertices and by a tangent-plane estimate, and cones are split until
//! the bound is within a percent of a value actually attained.

use num_traits::{One, Signed, Zero};

use super::dd::Cone;
use super::{ConvexDwcPiece, Direction, DwcSet, GeometryError, Halfspace};
use crate::rational::{dot, int, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapBound {
    pub value: Q,
    /// A direction near which the bound is attained, when the bound is positive.
    pub witness: Option<Direction>,
}

/// Facet restricted to the coordinates of a face, skipped when it does not bound the face.
struct LocalFacet {
    normal: Vec<Q>,
    bound: Q,
}

fn localize(facets: &[Halfspace], support: &[usize]) -> Vec<LocalFacet> {
    facets
        .iter()
        .filter_map(|f| {
            let normal: Vec<Q> = support.iter().map(|&i| f.normal[i].clone()).collect();
            if normal.iter().all(Zero::is_zero) {
                None
            } else {
                Some(LocalFacet {
                    normal,
                    bound: f.bound.clone(),
                })
            }
        })
        .collect()
}

/// Constraints under which facet `k` attains the minimum ratio.
fn activity_constraints(facets: &[LocalFacet], k: usize) -> Vec<Vec<Q>> {
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

fn unit_sum(ray: &[num_bigint::BigInt]) -> Vec<Q> {
    let sum = ray.iter().fold(num_bigint::BigInt::zero(), |acc, v| acc + v);
    ray.iter().map(|v| Q::new(v.clone(), sum.clone())).collect()
}

struct Best {
    value: Q,
    witness: Option<(Vec<usize>, Vec<Q>)>,
}

impl Best {
    fn offer(&mut self, value: Q, support: &[usize], point: &[Q]) {
        if value > self.value {
            self.value = value;
            self.witness = Some((support.to_vec(), point.to_vec()));
        }
    }
}

/// Cap on cell splits per pair of pieces; the bound stays sound when it is hit.
const MAX_SPLITS: usize = 256;

/// Refinement stops once the largest cell bound is within this fraction of the best attained value.
fn tolerance(value: &Q) -> Q {
    value / int(100)
}

/// One cell of a face: facet `up` of the upper piece and `low` of the lower piece are active.
struct Cell<'f> {
    cone: Cone,
    up: &'f LocalFacet,
    low: &'f LocalFacet,
    support: Vec<usize>,
    estimate: Estimate,
}

struct Estimate {
    /// Sound bound on the difference over the cell.
    upper: Q,
    /// Largest difference attained at a sampled point of the cell, with that point.
    attained: Option<(Q, Vec<Q>)>,
    /// Whether splitting can tighten `upper`.
    refinable: bool,
}

fn centroid(verts: &[Vec<Q>]) -> Vec<Q> {
    let n = int(verts.len() as i64);
    (0..verts[0].len())
        .map(|i| verts.iter().fold(Q::zero(), |acc, v| acc + &v[i]) / &n)
        .collect()
}

/// Bounds `b_u / (u.d) - b_l / (l.d)` over the hull of `verts`, or `None` when it is never positive.
///
/// Both ratios are convex where the denominators are positive. Replacing the
/// subtracted one by a tangent plane at an anchor over-estimates the difference
/// by a convex function, whose maximum sits at a vertex.
fn estimate(up: &LocalFacet, low: &LocalFacet, verts: &[Vec<Q>], local_dim: usize) -> Option<Estimate> {
    if up.bound.is_zero() {
        return None;
    }
    let up_dots: Vec<Q> = verts.iter().map(|v| dot(&up.normal, v)).collect();
    let low_dots: Vec<Q> = verts.iter().map(|v| dot(&low.normal, v)).collect();
    let min_up = up_dots.iter().min().cloned().unwrap_or_else(Q::zero);
    // Radial values never exceed the face dimension inside the unit box.
    let cap = || Estimate {
        upper: int(local_dim as i64),
        attained: None,
        refinable: false,
    };
    if low.bound.is_zero() {
        if !min_up.is_positive() {
            return Some(cap());
        }
        let (arg, _) = up_dots.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)).expect("cell has vertices");
        let value = &up.bound / &min_up;
        return Some(Estimate {
            upper: value.clone(),
            attained: Some((value, verts[arg].clone())),
            refinable: false,
        });
    }
    let numerators: Vec<Q> = up_dots
        .iter()
        .zip(&low_dots)
        .map(|(ud, ld)| &up.bound * ld - &low.bound * ud)
        .collect();
    let max_num = numerators.iter().max().expect("cell has vertices");
    if !max_num.is_positive() {
        return None;
    }
    let min_den = up_dots.iter().zip(&low_dots).map(|(ud, ld)| ud * ld).min().expect("cell has vertices");
    if !min_den.is_positive() {
        return Some(cap());
    }
    let mut upper = max_num / &min_den;
    let difference = |ud: &Q, ld: &Q| &up.bound / ud - &low.bound / ld;
    let mut attained: Option<(Q, Vec<Q>)> = None;
    let mut offer = |value: Q, point: &[Q]| {
        if attained.as_ref().map_or(true, |(best, _)| value > *best) {
            attained = Some((value, point.to_vec()));
        }
    };
    for (v, (ud, ld)) in verts.iter().zip(up_dots.iter().zip(&low_dots)) {
        offer(difference(ud, ld), v);
    }
    let middle = centroid(verts);
    let (mid_up, mid_low) = (dot(&up.normal, &middle), dot(&low.normal, &middle));
    offer(difference(&mid_up, &mid_low), &middle);
    for anchor_dot in low_dots.iter().chain(std::iter::once(&mid_low)) {
        // Tangent of b_l / (l.d) at the anchor, evaluated where l.d = ld.
        let square = anchor_dot * anchor_dot;
        let linear = up_dots
            .iter()
            .zip(&low_dots)
            .map(|(ud, ld)| &up.bound / ud - &low.bound * (anchor_dot * int(2) - ld) / &square)
            .max()
            .expect("cell has vertices");
        if linear < upper {
            upper = linear;
        }
    }
    Some(Estimate {
        upper,
        attained,
        refinable: true,
    })
}

fn cell_vertices(cone: &Cone) -> Vec<Vec<Q>> {
    cone.rays().iter().map(|r| unit_sum(r)).collect()
}

/// The rational with the smallest denominator in `[low, high]`, for `0 <= low <= high`.
fn simplest_between(low: &Q, high: &Q) -> Q {
    let whole = low.floor();
    if whole == *low || &whole + Q::one() <= *high {
        return if whole == *low { whole } else { whole + Q::one() };
    }
    let (low_rest, high_rest) = (low - &whole, high - &whole);
    whole + simplest_between(&high_rest.recip(), &low_rest.recip()).recip()
}

/// Splits a cell along `d_i / (d_i + d_j) = t` for the coordinate pair over which
/// it is widest, with `t` the simplest rational in the middle third of its range.
/// Small cut coefficients keep vertex sizes bounded under repeated splitting.
fn split(cone: &Cone) -> Option<[Cone; 2]> {
    let verts = cell_vertices(cone);
    let dim = cone.dim();
    let mut widest: Option<(Q, usize, usize, Q, Q)> = None;
    for i in 0..dim {
        for j in i + 1..dim {
            let shares: Vec<Q> = verts
                .iter()
                .filter(|v| !(&v[i] + &v[j]).is_zero())
                .map(|v| &v[i] / (&v[i] + &v[j]))
                .collect();
            let (Some(low), Some(high)) = (shares.iter().min(), shares.iter().max()) else {
                continue;
            };
            let width = high - low;
            if widest.as_ref().map_or(true, |(w, ..)| width > *w) {
                widest = Some((width, i, j, low.clone(), high.clone()));
            }
        }
    }
    let (width, i, j, low, high) = widest?;
    if width.is_zero() {
        return None;
    }
    let third = &width / int(3);
    let cut = simplest_between(&(&low + &third), &(&high - &third));
    // d_i (1 - t) - d_j t >= 0 on one side.
    let mut normal = vec![Q::zero(); dim];
    normal[i] = Q::one() - &cut;
    normal[j] = -cut;
    let negated: Vec<Q> = normal.iter().map(|v| -v).collect();
    let mut first = cone.clone();
    first.add_rational(&normal);
    let mut second = cone.clone();
    second.add_rational(&negated);
    Some([first, second])
}

/// Cells of one face whose relative interior they reach.
fn face_cells<'f>(upper: &'f [LocalFacet], lower: &'f [LocalFacet], support: &[usize], cells: &mut Vec<Cell<'f>>) {
    let local_dim = support.len();
    for (k, up) in upper.iter().enumerate() {
        let mut base = Cone::orthant(local_dim);
        for c in activity_constraints(upper, k) {
            base.add_rational(&c);
            if base.is_trivial() {
                break;
            }
        }
        if base.is_trivial() {
            continue;
        }
        for (j, low) in lower.iter().enumerate() {
            let mut cone = base.clone();
            for c in activity_constraints(lower, j) {
                cone.add_rational(&c);
                if cone.is_trivial() {
                    break;
                }
            }
            let rays = cone.rays();
            if rays.is_empty() || !(0..local_dim).all(|i| rays.iter().any(|r| r[i].is_positive())) {
                continue;
            }
            let verts = cell_vertices(&cone);
            if let Some(estimate) = estimate(up, low, &verts, local_dim).filter(|e| e.upper.is_positive()) {
                cells.push(Cell {
                    cone,
                    up,
                    low,
                    support: support.to_vec(),
                    estimate,
                });
            }
        }
    }
}

/// Branch and bound over the cells: the cell with the largest bound is split
/// until that bound is close to the best value seen at a sample point.
fn piece_bound(upper: &ConvexDwcPiece, lower: &ConvexDwcPiece, best: &mut Best) {
    let dim = upper.dim();
    let faces: Vec<(Vec<usize>, Vec<LocalFacet>, Vec<LocalFacet>)> = (1u32..(1 << dim))
        .map(|mask| (0..dim).filter(|&i| mask & (1 << i) != 0).collect::<Vec<usize>>())
        .filter_map(|support| {
            let up = localize(upper.facets(), &support);
            let low = localize(lower.facets(), &support);
            // An empty lower list means the lower piece is unbounded on the face,
            // so the difference is not positive there.
            (!up.is_empty() && !low.is_empty()).then_some((support, up, low))
        })
        .collect();
    let mut cells = Vec::new();
    for (support, up, low) in &faces {
        face_cells(up, low, support, &mut cells);
    }
    let mut attained: Option<(Q, Vec<usize>, Vec<Q>)> = None;
    let note = |cell: &Cell<'_>, attained: &mut Option<(Q, Vec<usize>, Vec<Q>)>| {
        if let Some((value, point)) = &cell.estimate.attained {
            if attained.as_ref().map_or(true, |(best, _, _)| value > best) {
                *attained = Some((value.clone(), cell.support.clone(), point.clone()));
            }
        }
    };
    for cell in &cells {
        note(cell, &mut attained);
    }
    for _ in 0..MAX_SPLITS {
        let Some(top) = (0..cells.len()).max_by(|&a, &b| cells[a].estimate.upper.cmp(&cells[b].estimate.upper)) else {
            break;
        };
        let floor = attained
            .as_ref()
            .map_or_else(Q::zero, |(v, _, _)| v.clone())
            .max(Q::zero());
        let upper = &cells[top].estimate.upper;
        if !cells[top].estimate.refinable || upper - &floor <= tolerance(upper) {
            break;
        }
        let cell = cells.swap_remove(top);
        let Some(halves) = split(&cell.cone) else {
            cells.push(Cell {
                estimate: Estimate {
                    refinable: false,
                    ..cell.estimate
                },
                ..cell
            });
            continue;
        };
        let local_dim = cell.support.len();
        for cone in halves {
            if cone.is_trivial() || cone.rays().is_empty() {
                continue;
            }
            let verts = cell_vertices(&cone);
            if let Some(estimate) = estimate(cell.up, cell.low, &verts, local_dim).filter(|e| e.upper.is_positive()) {
                let child = Cell {
                    cone,
                    up: cell.up,
                    low: cell.low,
                    support: cell.support.clone(),
                    estimate,
                };
                note(&child, &mut attained);
                cells.push(child);
            }
        }
    }
    if let Some(top) = cells.iter().max_by(|a, b| a.estimate.upper.cmp(&b.estimate.upper)) {
        let (support, point) = match &attained {
            Some((_, support, point)) => (support.clone(), point.clone()),
            None => (top.support.clone(), centroid(&cell_vertices(&top.cone))),
        };
        best.offer(top.estimate.upper.clone(), &support, &point);
    }
}

/// Upper bound on the largest scale-factor gap between `upper` and `lower`.
///
/// When `lower` has several pieces, each piece of `upper` is compared with every
/// piece of `lower` separately and the smallest of those bounds is kept.
pub fn gap_bound(upper: &DwcSet, lower: &DwcSet) -> Result<GapBound, GeometryError> {
    if upper.dim() != lower.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: upper.dim(),
            found: lower.dim(),
        });
    }
    let dim = upper.dim();
    let mut overall = Best {
        value: Q::zero(),
        witness: None,
    };
    for up in upper.pieces() {
        let mut piece_best: Option<Best> = None;
        for low in lower.pieces() {
            let mut best = Best {
                value: Q::zero(),
                witness: None,
            };
            piece_bound(up, low, &mut best);
            let better = piece_best.as_ref().map_or(true, |b| best.value < b.value);
            if better {
                piece_best = Some(best);
            }
        }
        if let Some(best) = piece_best {
            if best.value > overall.value {
                overall = best;
            }
        }
    }
    let witness = overall.witness.map(|(support, local)| {
        let mut full = vec![Q::zero(); dim];
        for (i, v) in support.iter().zip(local) {
            full[*i] = v;
        }
        Direction::new(&full).expect("witness is a unit-sum vector")
    });
    Ok(GapBound {
        value: overall.value,
        witness,
    })
}
