//! Exact short-vector enumeration for definite lattices.
//!
//! Fincke-Pohst style: the Gram matrix is decomposed as a sum of rational
//! squares by exact Cholesky, and coordinate ranges are walked outward from
//! the interval center instead of taking square roots, so the enumeration is
//! complete without any floating point.

use crate::lattice::{Lattice, LatticeVector};
use crate::linalg::{Int, Rat};
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};

/// All vectors of exactly `target_norm`, in canonical (lexicographic)
/// coordinate order. The list is complete, duplicate-free and closed under
/// negation; the zero vector is never included. Indefinite input is rejected.
pub fn short_vectors(l: &Lattice, target_norm: &Int) -> Result<Vec<LatticeVector>> {
    let n = l.rank();
    if n == 0 {
        return Ok(Vec::new());
    }
    let (gram, target) = if l.is_positive_definite() {
        (l.gram().clone(), target_norm.clone())
    } else if l.is_negative_definite() {
        (l.gram().neg(), -target_norm.clone())
    } else {
        return Err(Error::IndefiniteLattice);
    };
    if target <= Int::zero() {
        return Ok(Vec::new());
    }

    // exact Cholesky: Q(x) = sum_i d[i] * (x_i + sum_{j>i} u[i][j] x_j)^2
    let mut q = gram.to_rat();
    for i in 0..n {
        for j in i + 1..n {
            let t = q[(i, j)].clone() / &q[(i, i)];
            q[(j, i)] = q[(i, j)].clone();
            q[(i, j)] = t;
        }
        for k in i + 1..n {
            for m in k..n {
                let t = q[(k, i)].clone() * &q[(i, m)];
                q[(k, m)] -= t;
            }
        }
    }

    let mut found: Vec<Vec<Int>> = Vec::new();
    let mut coords = vec![Int::zero(); n];
    let budget = Rat::from(target.clone());
    enumerate(&q, n, n - 1, &budget, &mut coords, &mut found);
    found.sort();
    found.into_iter().map(|c| l.vector(c)).collect::<Result<Vec<_>>>()
}

/// Recursion over levels n-1 .. 0; at each level walk the contiguous integer
/// interval allowed by the remaining budget, starting from the center.
fn enumerate(
    q: &crate::linalg::RatMatrix,
    n: usize,
    level: usize,
    budget: &Rat,
    coords: &mut Vec<Int>,
    found: &mut Vec<Vec<Int>>,
) {
    // offset U = sum_{j>level} u[level][j] * x_j
    let mut offset = Rat::zero();
    for j in level + 1..n {
        if coords[j].is_zero() {
            continue;
        }
        offset += q[(level, j)].clone() * Rat::from(coords[j].clone());
    }
    let d = q[(level, level)].clone();

    let contribution = |z: &Int| -> Rat {
        let s = Rat::from(z.clone()) + &offset;
        d.clone() * s.clone() * s
    };

    let mut visit = |z: Int, coords: &mut Vec<Int>, found: &mut Vec<Vec<Int>>| {
        let rest = budget.clone() - contribution(&z);
        coords[level] = z;
        if level == 0 {
            if rest.is_zero() && !coords.iter().all(|x| x.is_zero()) {
                found.push(coords.clone());
            }
        } else {
            enumerate(q, n, level - 1, &rest, coords, found);
        }
        coords[level] = Int::zero();
    };

    let z0 = nearest_int(&-offset.clone());
    if contribution(&z0) > *budget {
        return;
    }
    let mut z = z0.clone();
    while contribution(&z) <= *budget {
        visit(z.clone(), coords, found);
        z += Int::one();
    }
    z = z0 - Int::one();
    while contribution(&z) <= *budget {
        visit(z.clone(), coords, found);
        z -= Int::one();
    }
}

fn nearest_int(r: &Rat) -> Int {
    (r.clone() + Rat::new(Int::one(), Int::from(2))).floor().to_integer()
}
