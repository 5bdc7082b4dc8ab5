//! Even integral lattices presented by Gram matrices, their vectors,
//! sublattices, orthogonal complements, primitivity and divisibility.
//!
//! A lattice here is an abstract Gram matrix over a fixed ordered basis;
//! there is no global ambient Z^n with a distinguished form. Embeddings are
//! always explicit [`Sublattice`] records (generator coordinates in an
//! ambient lattice), because the same abstract lattice gets re-embedded in
//! several ambients throughout the toolkit.

use crate::linalg::{
    content, dot, hermite_normal_form, int, integer_kernel, mat_vec,
    rational_diagonalize_symmetric, solve_integer, vec_mat, Int, IntMatrix,
};
use crate::{Error, Result};
use num_integer::Integer;
use num_traits::Zero;
use std::sync::Arc;

#[derive(Debug)]
struct LatticeData {
    gram: IntMatrix,
    label: Option<String>,
}

/// An even integral lattice with a fixed basis. Cheap to clone.
#[derive(Clone, Debug)]
pub struct Lattice {
    data: Arc<LatticeData>,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.data.gram == other.data.gram
    }
}
impl Eq for Lattice {}

impl Lattice {
    /// Public constructor: requires a symmetric, even, nondegenerate Gram.
    pub fn new(gram: IntMatrix, label: Option<String>) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        for i in 0..gram.rows {
            if gram[(i, i)].is_odd() {
                return Err(Error::OddDiagonal(i));
            }
        }
        if gram.rows > 0 && gram.det().is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(Lattice { data: Arc::new(LatticeData { gram, label }) })
    }

    /// Transient constructor for intermediate degenerate forms (complement
    /// and closure computations). Not exposed through the CLI surface.
    pub(crate) fn new_unchecked(gram: IntMatrix, label: Option<String>) -> Self {
        Lattice { data: Arc::new(LatticeData { gram, label }) }
    }

    pub fn rank(&self) -> usize {
        self.data.gram.rows
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.data.gram
    }

    pub fn label(&self) -> Option<&str> {
        self.data.label.as_deref()
    }

    pub fn with_label(&self, label: &str) -> Lattice {
        Lattice {
            data: Arc::new(LatticeData {
                gram: self.data.gram.clone(),
                label: Some(label.to_string()),
            }),
        }
    }

    pub fn det(&self) -> Int {
        self.data.gram.det()
    }

    /// `(n_plus, n_minus)`; panics if called on a degenerate transient.
    pub fn signature(&self) -> (usize, usize) {
        let (p, m, z) = rational_diagonalize_symmetric(&self.data.gram);
        assert_eq!(z, 0, "signature of degenerate lattice");
        (p, m)
    }

    pub fn is_negative_definite(&self) -> bool {
        let (p, m, z) = rational_diagonalize_symmetric(&self.data.gram);
        p == 0 && z == 0 && m == self.rank()
    }

    pub fn is_positive_definite(&self) -> bool {
        let (p, m, z) = rational_diagonalize_symmetric(&self.data.gram);
        m == 0 && z == 0 && p == self.rank()
    }

    pub fn is_definite(&self) -> bool {
        self.rank() == 0 || self.is_negative_definite() || self.is_positive_definite()
    }

    pub fn vector(&self, coords: Vec<Int>) -> Result<LatticeVector> {
        if coords.len() != self.rank() {
            return Err(Error::Dimension(format!(
                "vector length {} vs rank {}",
                coords.len(),
                self.rank()
            )));
        }
        Ok(LatticeVector { home: self.clone(), coords })
    }

    pub fn vector_i64(&self, coords: &[i64]) -> Result<LatticeVector> {
        self.vector(coords.iter().map(|&x| int(x)).collect())
    }

    pub fn basis_vector(&self, i: usize) -> LatticeVector {
        assert!(i < self.rank());
        let mut coords = vec![Int::zero(); self.rank()];
        coords[i] = int(1);
        LatticeVector { home: self.clone(), coords }
    }

    pub fn zero_vector(&self) -> LatticeVector {
        LatticeVector { home: self.clone(), coords: vec![Int::zero(); self.rank()] }
    }

    /// Pairing of raw coordinate vectors under this Gram.
    pub fn pair_coords(&self, v: &[Int], w: &[Int]) -> Int {
        dot(v, &mat_vec(&self.data.gram, w))
    }

    pub fn norm_coords(&self, v: &[Int]) -> Int {
        self.pair_coords(v, v)
    }

    /// Positive generator of the pairing ideal `(v, L)`; zero vector rejected.
    pub fn divisibility_coords(&self, v: &[Int]) -> Result<Int> {
        if v.iter().all(|x| x.is_zero()) {
            return Err(Error::ZeroVector);
        }
        Ok(content(&mat_vec(&self.data.gram, v)))
    }

    /// The whole lattice as a sublattice of itself.
    pub fn full_sublattice(&self) -> Sublattice {
        Sublattice { ambient: self.clone(), gens: IntMatrix::identity(self.rank()) }
    }
}

/// Integer coordinate vector tied to its home lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeVector {
    home: Lattice,
    pub coords: Vec<Int>,
}

impl LatticeVector {
    pub fn home(&self) -> &Lattice {
        &self.home
    }

    pub fn pair(&self, other: &LatticeVector) -> Result<Int> {
        if self.home != other.home {
            return Err(Error::MismatchedLattices);
        }
        Ok(self.home.pair_coords(&self.coords, &other.coords))
    }

    pub fn norm(&self) -> Int {
        self.home.norm_coords(&self.coords)
    }

    pub fn divisibility(&self) -> Result<Int> {
        self.home.divisibility_coords(&self.coords)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero())
    }

    /// gcd of coordinates; 0 for the zero vector.
    pub fn coordinate_content(&self) -> Int {
        content(&self.coords)
    }

    pub fn is_primitive(&self) -> bool {
        self.coordinate_content() == int(1)
    }

    pub fn add(&self, other: &LatticeVector) -> Result<LatticeVector> {
        if self.home != other.home {
            return Err(Error::MismatchedLattices);
        }
        Ok(LatticeVector {
            home: self.home.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() + b)
                .collect(),
        })
    }

    pub fn scale(&self, k: &Int) -> LatticeVector {
        LatticeVector {
            home: self.home.clone(),
            coords: self.coords.iter().map(|x| x.clone() * k).collect(),
        }
    }

    pub fn neg(&self) -> LatticeVector {
        self.scale(&int(-1))
    }
}

/// A full-row-rank system of generators inside an ambient lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    ambient: Lattice,
    gens: IntMatrix,
}

impl Sublattice {
    pub fn new(ambient: &Lattice, gens: IntMatrix) -> Result<Self> {
        if gens.cols != ambient.rank() {
            return Err(Error::Dimension(format!(
                "generator width {} vs ambient rank {}",
                gens.cols,
                ambient.rank()
            )));
        }
        let (h, _) = hermite_normal_form(&gens);
        let rank = (0..h.rows).filter(|&r| !h.row(r).iter().all(|x| x.is_zero())).count();
        if rank != gens.rows {
            return Err(Error::Dimension("generators are not linearly independent".into()));
        }
        Ok(Sublattice { ambient: ambient.clone(), gens })
    }

    pub fn from_vectors(vectors: &[LatticeVector]) -> Result<Self> {
        let ambient = vectors
            .first()
            .map(|v| v.home().clone())
            .ok_or_else(|| Error::Dimension("empty generator list".into()))?;
        if vectors.iter().any(|v| *v.home() != ambient) {
            return Err(Error::MismatchedLattices);
        }
        Self::new(&ambient, IntMatrix::from_rows(vectors.iter().map(|v| v.coords.clone()).collect()))
    }

    /// Zero-rank sublattice.
    pub fn empty(ambient: &Lattice) -> Self {
        Sublattice { ambient: ambient.clone(), gens: IntMatrix::zero(0, ambient.rank()) }
    }

    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    pub fn gens(&self) -> &IntMatrix {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.gens.rows
    }

    /// Gram matrix induced on the generators: `gens * G * gens^T`.
    pub fn induced_gram(&self) -> IntMatrix {
        self.gens.mul(self.ambient.gram()).mul(&self.gens.transpose())
    }

    /// The sublattice as an abstract lattice; rejects a degenerate induced
    /// form (use `as_lattice_unchecked` for transient intermediates).
    pub fn as_lattice(&self) -> Result<Lattice> {
        Lattice::new(self.induced_gram(), None)
    }

    pub(crate) fn as_lattice_unchecked(&self) -> Lattice {
        Lattice::new_unchecked(self.induced_gram(), None)
    }

    /// Coordinates in the ambient lattice of a vector given in sublattice
    /// coordinates.
    pub fn lift_coords(&self, sub_coords: &[Int]) -> Vec<Int> {
        vec_mat(sub_coords, &self.gens)
    }

    pub fn lift(&self, v: &LatticeVector) -> Result<LatticeVector> {
        if *v.home() != self.as_lattice_unchecked() {
            return Err(Error::MismatchedLattices);
        }
        self.ambient.vector(self.lift_coords(&v.coords))
    }

    /// Express an ambient vector in sublattice coordinates, if it lies in the
    /// integer span of the generators.
    pub fn restrict_coords(&self, ambient_coords: &[Int]) -> Option<Vec<Int>> {
        solve_integer(&self.gens, ambient_coords)
    }

    pub fn contains_coords(&self, ambient_coords: &[Int]) -> bool {
        self.restrict_coords(ambient_coords).is_some()
    }

    /// Sublattice of the same ambient spanned by vectors given in this
    /// sublattice's coordinates.
    pub fn sub_sublattice(&self, gens_in_sub_coords: &IntMatrix) -> Result<Sublattice> {
        Sublattice::new(&self.ambient, gens_in_sub_coords.mul(&self.gens))
    }

    /// Canonical HNF basis for the same row span.
    pub fn canonicalized(&self) -> Sublattice {
        let (h, _) = hermite_normal_form(&self.gens);
        let nz: Vec<usize> =
            (0..h.rows).filter(|&r| !h.row(r).iter().all(|x| x.is_zero())).collect();
        Sublattice { ambient: self.ambient.clone(), gens: h.select_rows(&nz) }
    }
}

/// Saturated sublattice of all ambient vectors pairing to zero with every
/// generator; primitive by construction. Requires a nondegenerate ambient.
pub fn orthogonal_complement(s: &Sublattice) -> Result<Sublattice> {
    if s.ambient.det().is_zero() {
        return Err(Error::Degenerate);
    }
    let m = s.ambient.gram().mul(&s.gens.transpose());
    let k = integer_kernel(&m);
    Ok(Sublattice { ambient: s.ambient.clone(), gens: k })
}

/// Smallest saturated sublattice containing `s` (rational span intersected
/// with the ambient lattice).
pub fn primitive_closure(s: &Sublattice) -> Sublattice {
    // vectors orthogonal (standard dot product) to the row span
    let z = integer_kernel(&s.gens.transpose());
    // ... and everything orthogonal to those
    let closure = integer_kernel(&z.transpose());
    Sublattice { ambient: s.ambient.clone(), gens: closure }
}

pub fn is_primitive(s: &Sublattice) -> bool {
    let c = primitive_closure(s);
    c.rank() == s.rank() && c.canonicalized().gens == s.canonicalized().gens
}

/// Orthogonal direct sum; the empty sum is the rank-0 lattice.
pub fn direct_sum(parts: &[Lattice]) -> Lattice {
    let grams: Vec<&IntMatrix> = parts.iter().map(|l| l.gram()).collect();
    let gram = IntMatrix::block_diag(&grams);
    let label = if parts.is_empty() || parts.iter().any(|p| p.label().is_none()) {
        None
    } else {
        Some(parts.iter().map(|p| p.label().unwrap()).collect::<Vec<_>>().join(" + "))
    };
    Lattice::new_unchecked(gram, label)
}

/// Hyperbolic plane U with Gram [[0,1],[1,0]].
pub fn make_u() -> Lattice {
    Lattice::new(IntMatrix::from_i64(&[&[0, 1], &[1, 0]]), Some("U".into())).unwrap()
}

/// Dynkin-diagram adjacency used for the E8 basis throughout the crate:
/// nodes 2..8 form a chain and node 1 attaches to node 4 (1-indexed). The
/// discriminant form of E8(-2) is reported on the dual classes `a_i/2` of
/// exactly this basis.
pub const E8_EDGES: [(usize, usize); 7] = [(0, 3), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];

fn e8_cartan() -> IntMatrix {
    let mut c = IntMatrix::zero(8, 8);
    for i in 0..8 {
        c[(i, i)] = int(2);
    }
    for &(a, b) in &E8_EDGES {
        c[(a, b)] = int(-1);
        c[(b, a)] = int(-1);
    }
    c
}

/// E8 with the form scaled by `scale`; supported scales are -2, -1, 1, 2.
pub fn make_e8(scale: i64) -> Result<Lattice> {
    if ![-2, -1, 1, 2].contains(&scale) {
        return Err(Error::Precondition(format!("unsupported E8 scale {scale}")));
    }
    let gram = e8_cartan().scale(&int(scale));
    let label = format!("E8({scale})");
    Lattice::new(gram, Some(label))
}

/// Rank-one lattice (n) with the single norm n; n must be even and nonzero.
pub fn make_rank_one(n: &Int) -> Result<Lattice> {
    if n.is_zero() {
        return Err(Error::Degenerate);
    }
    if n.is_odd() {
        return Err(Error::OddDiagonal(0));
    }
    let gram = IntMatrix::from_rows(vec![vec![n.clone()]]);
    Lattice::new(gram, Some(format!("({n})")))
}

/// L = U^3 + E8(-1)^2 + (-2), rank 23, signature (3,20).
pub fn lattice_l() -> Lattice {
    let u = make_u();
    let e = make_e8(-1).unwrap();
    let m2 = make_rank_one(&int(-2)).unwrap();
    direct_sum(&[u.clone(), u.clone(), u, e.clone(), e, m2]).with_label("L")
}

/// Index of the (-2) generator inside `lattice_l`'s basis.
pub const L_MINUS2_INDEX: usize = 22;

/// Lambda = U^4 + E8(-1)^2 (even unimodular of signature (4,20)).
pub fn lattice_lambda() -> Lattice {
    let u = make_u();
    let e = make_e8(-1).unwrap();
    direct_sum(&[u.clone(), u.clone(), u.clone(), u, e.clone(), e]).with_label("Lambda")
}

/// M = E8(-2) + U^3 + (-2), rank 15, signature (3,12).
pub fn lattice_m() -> Lattice {
    let e = make_e8(-2).unwrap();
    let u = make_u();
    let m2 = make_rank_one(&int(-2)).unwrap();
    direct_sum(&[e, u.clone(), u.clone(), u, m2]).with_label("M")
}

/// Basis bookkeeping for `lattice_m`: E8(-2) occupies coordinates 0..8, the
/// three hyperbolic planes are (8,9), (10,11), (12,13), and 14 is the (-2)
/// generator.
pub const M_E8_RANGE: std::ops::Range<usize> = 0..8;
pub const M_U_PAIRS: [(usize, usize); 3] = [(8, 9), (10, 11), (12, 13)];
pub const M_T_INDEX: usize = 14;

/// Built-in lattices addressable by label on the CLI surface.
pub fn builtin(label: &str) -> Option<Lattice> {
    match label {
        "U" => Some(make_u()),
        "E8m1" => Some(make_e8(-1).unwrap()),
        "E8m2" => Some(make_e8(-2).unwrap()),
        "m2" => Some(make_rank_one(&int(-2)).unwrap()),
        "p2" => Some(make_rank_one(&int(2)).unwrap()),
        "L" => Some(lattice_l()),
        "Lambda" => Some(lattice_lambda()),
        "M" => Some(lattice_m()),
        _ => None,
    }
}

pub fn builtin_labels() -> &'static [&'static str] {
    &["U", "E8m1", "E8m2", "m2", "p2", "L", "Lambda", "M"]
}
