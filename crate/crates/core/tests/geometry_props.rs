//! Geometry kernel against the brute-force kernel and its own invariants.

use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sgpareto::geometry::{
    convex_union, dwc_hull, evaluate, facet_enumeration, gap_bound, intersect, is_subset, minkowski, scale,
    vertex_enumeration, Direction, DwcSet, Halfspace, Point,
};
use sgpareto::oracle::brute::{BruteHalfspace, BrutePiece};
use sgpareto::rational::{ratio, Q};

fn point(dim: usize) -> impl Strategy<Value = Point> {
    prop::collection::vec(0i64..=8, dim).prop_map(|v| v.into_iter().map(|k| ratio(k, 8)).collect())
}

fn points(dim: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(point(dim), 1..=6)
}

/// Two random sets of the same dimension, each a union of up to two pieces.
fn set_pair() -> impl Strategy<Value = (usize, Vec<Vec<Point>>, Vec<Vec<Point>>)> {
    (1usize..=3).prop_flat_map(|dim| {
        (
            Just(dim),
            prop::collection::vec(points(dim), 1..=2),
            prop::collection::vec(points(dim), 1..=2),
        )
    })
}

/// `count` random directions with small integer coordinates.
fn sample_directions(dim: usize, seed: u64, count: usize) -> Vec<Direction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| loop {
            let raw: Vec<i64> = (0..dim).map(|_| rng.gen_range(0..=12)).collect();
            if let Ok(d) = Direction::from_ints(&raw) {
                break d;
            }
        })
        .collect()
}

fn set(dim: usize, pieces: &[Vec<Point>]) -> DwcSet {
    DwcSet::from_generators(dim, pieces).unwrap()
}

/// Divides by the first nonzero normal entry so both kernels' facets compare.
fn normalized(normal: &[Q], bound: &Q) -> (Vec<Q>, Q) {
    let lead = normal.iter().find(|v| !v.is_zero()).unwrap().clone();
    (normal.iter().map(|v| v / &lead).collect(), bound / &lead)
}

fn from_brute(dim: usize, piece: &BrutePiece) -> DwcSet {
    DwcSet::from_generators(dim, &[piece.generators().to_vec()]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_matches_brute_force((dim, pts) in (1usize..=3).prop_flat_map(|d| (Just(d), points(d)))) {
        let piece = dwc_hull(dim, &pts).unwrap();
        let brute = BrutePiece::hull(dim, &pts);
        prop_assert_eq!(piece.generators(), brute.generators());
        if !piece.is_zero() {
            let mut ours: Vec<(Vec<Q>, Q)> =
                facet_enumeration(&piece).iter().map(|h| normalized(&h.normal, &h.bound)).collect();
            let mut theirs: Vec<(Vec<Q>, Q)> =
                brute.facets().iter().map(|h: &BruteHalfspace| normalized(&h.normal, &h.bound)).collect();
            ours.sort();
            theirs.sort();
            prop_assert_eq!(ours, theirs);
        }
    }

    #[test]
    fn facet_vertex_round_trip((dim, pts) in (1usize..=3).prop_flat_map(|d| (Just(d), points(d)))) {
        let piece = dwc_hull(dim, &pts).unwrap();
        let mut halfspaces: Vec<Halfspace> = facet_enumeration(&piece);
        for i in 0..dim {
            let mut normal = vec![Q::zero(); dim];
            normal[i] = Q::one();
            halfspaces.push(Halfspace { normal, bound: Q::one() });
        }
        let verts = vertex_enumeration(dim, &halfspaces).unwrap();
        prop_assert_eq!(&verts[..], piece.generators());
    }

    #[test]
    fn downward_closed((dim, pts) in (1usize..=3).prop_flat_map(|d| (Just(d), points(d))), shrink in 0i64..=4) {
        let piece = dwc_hull(dim, &pts).unwrap();
        let set = DwcSet::from_piece(piece.clone());
        for g in piece.generators() {
            for i in 0..dim {
                let mut lowered = g.clone();
                lowered[i] = &lowered[i] * ratio(shrink, 4);
                prop_assert!(set.contains(&lowered));
            }
        }
    }

    #[test]
    fn binary_operations_match_brute_force((dim, a, b) in (1usize..=3).prop_flat_map(|d| (Just(d), points(d), points(d))), factor in 0i64..=4) {
        let x = DwcSet::from_piece(dwc_hull(dim, &a).unwrap());
        let y = DwcSet::from_piece(dwc_hull(dim, &b).unwrap());
        let bx = BrutePiece::hull(dim, &a);
        let by = BrutePiece::hull(dim, &b);
        prop_assert_eq!(intersect(&x, &y).unwrap(), from_brute(dim, &bx.intersect(&by)));
        prop_assert_eq!(minkowski(&x, &y).unwrap(), from_brute(dim, &bx.minkowski(&by)));
        prop_assert_eq!(
            DwcSet::from_piece(convex_union(&[&x, &y]).unwrap()),
            from_brute(dim, &BrutePiece::union_hull(&[bx.clone(), by]))
        );
        let f = ratio(factor, 4);
        prop_assert_eq!(scale(&f, &x).unwrap(), from_brute(dim, &bx.scale(&f)));
    }

    // Sums are kept inside the unit box: clipping does not commute with the hull.
    #[test]
    fn hull_commutes_with_minkowski((dim, a, b) in set_pair()) {
        let half = |pieces: &Vec<Vec<Point>>| -> Vec<Vec<Point>> {
            pieces.iter().map(|p| p.iter().map(|g| g.iter().map(|v| v * ratio(1, 2)).collect()).collect()).collect()
        };
        let (a, b) = (half(&a), half(&b));
        let x = set(dim, &a);
        let y = set(dim, &b);
        let lhs = DwcSet::from_piece(convex_union(&[&minkowski(&x, &y).unwrap()]).unwrap());
        let hx = DwcSet::from_piece(convex_union(&[&x]).unwrap());
        let hy = DwcSet::from_piece(convex_union(&[&y]).unwrap());
        prop_assert_eq!(lhs, minkowski(&hx, &hy).unwrap());
    }

    #[test]
    fn evaluation_of_intersection_and_union((dim, a, b) in set_pair(), seed in any::<u64>()) {
        let x = set(dim, &a);
        let y = set(dim, &b);
        let meet = intersect(&x, &y).unwrap();
        let join = DwcSet::from_piece(convex_union(&[&x, &y]).unwrap());
        for d in sample_directions(dim, seed, 1000) {
            let (lx, ly) = (evaluate(&x, &d).lambda, evaluate(&y, &d).lambda);
            prop_assert_eq!(evaluate(&meet, &d).lambda, lx.clone().min(ly.clone()));
            prop_assert!(evaluate(&join, &d).lambda >= lx.max(ly));
        }
    }

    #[test]
    fn subset_agrees_with_evaluation((dim, a, b) in set_pair(), seed in any::<u64>()) {
        let x = set(dim, &a);
        let y = set(dim, &b[..1]);
        let subset = is_subset(&x, &y).unwrap();
        let by = BrutePiece::hull(dim, &b[0]);
        let brute = x.all_generators().iter().all(|g| by.contains(g));
        prop_assert_eq!(subset, brute);
        if subset {
            for d in sample_directions(dim, seed, 1000) {
                prop_assert!(evaluate(&x, &d).lambda <= evaluate(&y, &d).lambda);
            }
        }
    }

    #[test]
    fn gap_bound_is_sound((dim, a, b) in set_pair(), seed in any::<u64>()) {
        let lower = set(dim, &a);
        let upper = DwcSet::from_piece(convex_union(&[&lower, &set(dim, &b)]).unwrap());
        let bound = gap_bound(&upper, &lower).unwrap().value;
        prop_assert_eq!(gap_bound(&lower, &lower).unwrap().value, Q::zero());
        for d in sample_directions(dim, seed, 1000) {
            let diff = evaluate(&upper, &d).lambda - evaluate(&lower, &d).lambda;
            prop_assert!(bound >= diff);
        }
    }

    #[test]
    fn gap_bound_shrinks_under_dilation((dim, pts) in (1usize..=3).prop_flat_map(|d| (Just(d), points(d)))) {
        let lower = DwcSet::from_piece(dwc_hull(dim, &pts).unwrap());
        let gap = |k: i64| gap_bound(&lower.dilate(&(Q::one() + ratio(1, k))), &lower).unwrap().value;
        let gaps: Vec<Q> = [1, 2, 3, 4, 5, 6, 1000, 1_000_000].into_iter().map(gap).collect();
        prop_assert!(gaps.windows(2).all(|w| w[1] <= w[0]));
        // Clipping to the box distorts coarse dilations; fine ones shrink linearly.
        prop_assert!(&gaps[7] * ratio(500, 1) <= gaps[6]);
    }
}
