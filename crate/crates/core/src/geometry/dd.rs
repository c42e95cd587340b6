//! Double description method over exact integers.
//!
//! A [`Cone`] starts as the nonnegative orthant of `Z^dim` and is cut by
//! homogeneous inequalities `c . y >= 0`. The extreme rays are maintained with
//! the combinatorial adjacency test, so the result has no redundant rays.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::rational::{primitive, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn with_capacity(bits: usize) -> Self {
        ZeroSet(vec![0; bits.div_ceil(64).max(1)])
    }

    fn insert(&mut self, bit: usize) {
        let word = bit / 64;
        if word >= self.0.len() {
            self.0.resize(word + 1, 0);
        }
        self.0[word] |= 1 << (bit % 64);
    }

    fn intersection(&self, other: &ZeroSet) -> ZeroSet {
        ZeroSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_subset_of(&self, other: &ZeroSet) -> bool {
        self.0.iter().enumerate().all(|(i, word)| {
            let theirs = other.0.get(i).copied().unwrap_or(0);
            word & !theirs == 0
        })
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

#[derive(Clone, Debug)]
struct Ray {
    coords: Vec<BigInt>,
    zeros: ZeroSet,
}

/// A pointed polyhedral cone inside the nonnegative orthant.
#[derive(Clone, Debug)]
pub struct Cone {
    dim: usize,
    rays: Vec<Ray>,
    constraints: usize,
}

fn int_dot(lhs: &[BigInt], rhs: &[BigInt]) -> BigInt {
    lhs.iter().zip(rhs).fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
}

fn normalize(mut coords: Vec<BigInt>) -> Vec<BigInt> {
    let gcd = coords.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !gcd.is_zero() && gcd != BigInt::from(1) {
        for c in coords.iter_mut() {
            *c = &*c / &gcd;
        }
    }
    coords
}

impl Cone {
    pub fn orthant(dim: usize) -> Self {
        let rays = (0..dim)
            .map(|i| {
                let mut coords = vec![BigInt::zero(); dim];
                coords[i] = BigInt::from(1);
                let mut zeros = ZeroSet::with_capacity(dim);
                for j in (0..dim).filter(|&j| j != i) {
                    zeros.insert(j);
                }
                Ray { coords, zeros }
            })
            .collect();
        Cone {
            dim,
            rays,
            constraints: dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_trivial(&self) -> bool {
        self.rays.is_empty()
    }

    /// Adds `constraint . y >= 0` given as rationals.
    pub fn add_rational(&mut self, constraint: &[Q]) {
        let ints = primitive(constraint);
        self.add(&ints);
    }

    /// Adds `constraint . y >= 0`.
    pub fn add(&mut self, constraint: &[BigInt]) {
        assert_eq!(constraint.len(), self.dim, "constraint dimension mismatch");
        let index = self.constraints;
        self.constraints += 1;
        if constraint.iter().all(|c| c.is_zero()) {
            for ray in &mut self.rays {
                ray.zeros.insert(index);
            }
            return;
        }
        let values: Vec<BigInt> = self
            .rays
            .iter()
            .map(|r| int_dot(constraint, &r.coords))
            .collect();
        if values.iter().all(|v| !v.is_negative()) {
            for (ray, value) in self.rays.iter_mut().zip(&values) {
                if value.is_zero() {
                    ray.zeros.insert(index);
                }
            }
            return;
        }
        let positive: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_positive()).collect();
        let negative: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_negative()).collect();
        let mut next: Vec<Ray> = Vec::with_capacity(self.rays.len());
        for (i, ray) in self.rays.iter().enumerate() {
            if values[i].is_positive() {
                next.push(ray.clone());
            } else if values[i].is_zero() {
                let mut kept = ray.clone();
                kept.zeros.insert(index);
                next.push(kept);
            }
        }
        let threshold = self.dim.saturating_sub(2);
        for &p in &positive {
            for &m in &negative {
                let common = self.rays[p].zeros.intersection(&self.rays[m].zeros);
                if common.count() < threshold {
                    continue;
                }
                let adjacent = self
                    .rays
                    .iter()
                    .enumerate()
                    .all(|(k, other)| k == p || k == m || !common.is_subset_of(&other.zeros));
                if !adjacent {
                    continue;
                }
                let vp = &values[p];
                let vm = -&values[m];
                let coords: Vec<BigInt> = self.rays[m]
                    .coords
                    .iter()
                    .zip(&self.rays[p].coords)
                    .map(|(cm, cp)| vp * cm + &vm * cp)
                    .collect();
                let mut zeros = common;
                zeros.insert(index);
                next.push(Ray {
                    coords: normalize(coords),
                    zeros,
                });
            }
        }
        self.rays = next;
    }

    /// Extreme rays as primitive integer vectors.
    pub fn rays(&self) -> Vec<Vec<BigInt>> {
        self.rays.iter().map(|r| r.coords.clone()).collect()
    }
}
