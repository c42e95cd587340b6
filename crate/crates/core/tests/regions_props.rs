//! Region partitions: cover, closure, consistency and the three-target scope.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sgpareto::game::StateId;
use sgpareto::geometry::{Direction, DwcSet, Point};
use sgpareto::oracle::fixtures;
use sgpareto::rational::{ratio, Q};
use sgpareto::regions::{
    comparison_hyperplanes, consistency_check, get_regions, interior_sample, ActionValues, RegionPartition,
};

fn random_scope(dim: usize, seed: u64) -> ActionValues {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states = rng.gen_range(1..=2);
    (0..states)
        .map(|s| {
            let actions = rng.gen_range(2..=3);
            let values = (0..actions)
                .map(|_| {
                    let count = rng.gen_range(1..=3);
                    let pts: Vec<Point> = (0..count)
                        .map(|_| (0..dim).map(|_| ratio(rng.gen_range(0..=6), 6)).collect())
                        .collect();
                    DwcSet::from_generators(dim, &[pts]).unwrap()
                })
                .collect();
            (StateId(s), values)
        })
        .collect()
}

fn random_direction<R: Rng>(dim: usize, rng: &mut R) -> Direction {
    loop {
        let raw: Vec<i64> = (0..dim)
            .map(|_| if rng.gen_bool(0.2) { 0 } else { rng.gen_range(1..=1000) })
            .collect();
        if let Ok(d) = Direction::from_ints(&raw) {
            return d;
        }
    }
}

/// Number of regions whose sign vector matches the direction's.
fn hits(partition: &RegionPartition, signs: &[Vec<i8>], direction: &Direction) -> usize {
    let target = partition.arrangement().sign_vector(direction.components());
    signs.iter().filter(|s| **s == target).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_direction_lies_in_exactly_one_region(dim in 2usize..=3, seed in any::<u64>()) {
        let scope = random_scope(dim, seed);
        let partition = get_regions(dim, &scope).unwrap();
        let signs: Vec<Vec<i8>> = partition.regions().into_iter().map(|r| r.signs).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for _ in 0..10_000 {
            let d = random_direction(dim, &mut rng);
            prop_assert_eq!(hits(&partition, &signs, &d), 1);
        }
        prop_assert!(consistency_check(&partition, &scope, 20, &mut rng));
    }

    #[test]
    fn triangulation_is_closed_under_faces(dim in 2usize..=3, seed in any::<u64>()) {
        let scope = random_scope(dim, seed);
        let partition = get_regions(dim, &scope).unwrap();
        let simplices = partition.simplices();
        let members: BTreeSet<Vec<Point>> = simplices.iter().map(|s| s.simplex.vertices().to_vec()).collect();
        for s in &simplices {
            prop_assert_eq!(partition.locate(&interior_sample(&s.simplex)), Some(s.cell));
            let verts = s.simplex.vertices();
            for mask in 1u32..(1 << verts.len()) {
                let face: Vec<Point> = (0..verts.len()).filter(|i| mask & (1 << i) != 0).map(|i| verts[i].clone()).collect();
                prop_assert!(members.contains(&face), "missing face {:?}", face);
            }
        }
    }

    #[test]
    fn reduction_never_adds_regions(dim in 2usize..=3, seed in any::<u64>()) {
        let scope = random_scope(dim, seed);
        let hyperplanes = comparison_hyperplanes(dim, &scope);
        let full = RegionPartition::from_hyperplanes(dim, &hyperplanes, &scope);
        let reduced = get_regions(dim, &scope).unwrap();
        prop_assert!(reduced.len() <= full.len());
        prop_assert!(reduced.hyperplanes().len() <= hyperplanes.len());
    }
}

fn locate_argmin(partition: &RegionPartition, raw: &[i64]) -> (usize, BTreeSet<usize>) {
    let d = Direction::from_ints(raw).unwrap();
    let index = partition.locate(&d).unwrap();
    (index, partition.argmin(index)[&StateId(0)].clone())
}

#[test]
fn three_target_vertex_is_its_own_region() {
    let scope = fixtures::three_target_scope();
    let partition = get_regions(3, &scope).unwrap();
    let (vertex, argmin) = locate_argmin(&partition, &[0, 1, 0]);
    assert_eq!(argmin, BTreeSet::from([0, 1]));
    assert_eq!(partition.region(vertex).dim, 0);
    let classes = partition.classes();
    assert_eq!(classes.iter().filter(|&&c| c == classes[vertex]).count(), 1);
    let (_, interior) = locate_argmin(&partition, &[1, 1, 1]);
    assert_eq!(interior, BTreeSet::from([0, 1, 2]));
    for raw in [[1, 0, 1], [1, 0, 3], [1, 0, 0], [0, 0, 1]] {
        assert_eq!(locate_argmin(&partition, &raw).1, BTreeSet::from([2]));
    }
    // Three classes: the isolated vertex, the edge opposite to it, the rest.
    assert_eq!(classes.iter().collect::<BTreeSet<_>>().len(), 3);
}

#[test]
fn three_target_comparisons_see_the_diagonal() {
    let scope = fixtures::three_target_scope();
    let normals: Vec<Vec<Q>> = comparison_hyperplanes(3, &scope).iter().map(|h| h.normal().to_vec()).collect();
    assert!(normals.contains(&vec![ratio(1, 1), ratio(0, 1), ratio(-1, 1)]));
}
