//! Discriminant groups A_N = N^dual / N, finite quadratic forms with values
//! in Q/2Z (bilinear part in Q/Z), overlattices glued along isotropic
//! subgroups, and comparison of finite quadratic forms.
//!
//! Forms are stored on a canonical generating set in invariant-factor order;
//! q and b of arbitrary elements are evaluated from the generator tables.
//! Gauss-Milgram signatures are computed with exact bookkeeping in Z[zeta_16]
//! (every q-value handled here has denominator dividing 8), so there is no
//! floating point anywhere.

use crate::lattice::{Lattice, Sublattice};
use crate::linalg::{
    hermite_normal_form, int, smith_normal_form, Int, IntMatrix, Rat, RatMatrix,
};
use crate::{Error, Result};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Canonical representative of r mod 2Z in [0, 2).
pub fn mod2(r: &Rat) -> Rat {
    let two = Rat::from(int(2));
    let q = (r / &two).floor();
    let m = r - q * &two;
    if m.is_negative() {
        m + two
    } else {
        m
    }
}

/// Canonical representative of r mod Z in [0, 1).
pub fn mod1(r: &Rat) -> Rat {
    let f = r.floor();
    r - f
}

/// Finite abelian group with a quadratic form q: A -> Q/2Z and its bilinear
/// form b: A x A -> Q/Z, presented on generators in invariant-factor order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuadraticForm {
    /// invariant factors d1 | d2 | ..., all > 1
    orders: Vec<Int>,
    /// q(g_i) in [0, 2)
    q_diag: Vec<Rat>,
    /// b(g_i, g_j) in [0, 1); diagonal holds b(g_i, g_i) = q(g_i) mod 1
    b_mat: Vec<Vec<Rat>>,
}

impl FiniteQuadraticForm {
    pub fn trivial() -> Self {
        FiniteQuadraticForm { orders: vec![], q_diag: vec![], b_mat: vec![] }
    }

    /// Build from generator data with arbitrary orders; the presentation is
    /// canonicalized into invariant-factor form and consistency-checked.
    pub fn new(orders: Vec<Int>, q_diag: Vec<Rat>, b_mat: Vec<Vec<Rat>>) -> Result<Self> {
        let k = orders.len();
        if q_diag.len() != k || b_mat.len() != k || b_mat.iter().any(|r| r.len() != k) {
            return Err(Error::Dimension("generator table sizes disagree".into()));
        }
        let raw = FiniteQuadraticForm {
            orders,
            q_diag: q_diag.iter().map(mod2).collect(),
            b_mat: b_mat.iter().map(|r| r.iter().map(mod1).collect()).collect(),
        };
        let canon = raw.canonicalize()?;
        canon.validate()?;
        Ok(canon)
    }

    fn validate(&self) -> Result<()> {
        let k = self.orders.len();
        for i in 0..k {
            if self.orders[i] <= Int::one() {
                return Err(Error::Precondition("generator orders must exceed 1".into()));
            }
            // q(d g) = 0 and b(d g, .) = 0 must hold
            let d = Rat::from(self.orders[i].clone());
            let dq = mod1(&(d.clone() * &self.q_diag[i]));
            if !dq.is_zero() {
                return Err(Error::Precondition("d * q(g) must be integral".into()));
            }
            let d2q = mod2(&(d.clone() * d.clone() * &self.q_diag[i]));
            if !d2q.is_zero() {
                return Err(Error::Precondition("d^2 * q(g) must be 0 mod 2".into()));
            }
            if mod1(&(self.q_diag[i].clone())) != self.b_mat[i][i] {
                return Err(Error::Precondition("b(g,g) must equal q(g) mod 1".into()));
            }
            for j in 0..k {
                if self.b_mat[i][j] != self.b_mat[j][i] {
                    return Err(Error::NotSymmetric);
                }
                let db = mod1(&(d.clone() * &self.b_mat[i][j]));
                if !db.is_zero() {
                    return Err(Error::Precondition("d * b(g, h) must be integral".into()));
                }
            }
        }
        Ok(())
    }

    /// Re-present on an invariant-factor generating set via SNF of the
    /// relation matrix diag(orders).
    fn canonicalize(&self) -> Result<Self> {
        let k = self.orders.len();
        // already a chain?
        let chain = (0..k.saturating_sub(1)).all(|i| self.orders[i + 1].is_multiple_of(&self.orders[i]));
        if chain && self.orders.iter().all(|d| *d > Int::one()) {
            return Ok(self.clone());
        }
        let d = IntMatrix::from_fn(k, k, |r, c| {
            if r == c {
                self.orders[r].clone()
            } else {
                Int::zero()
            }
        });
        let (dd, _, v) = smith_normal_form(&d);
        let v_inv = v
            .to_rat()
            .inverse()
            .and_then(|m| m.to_int())
            .expect("unimodular inverse");
        // new generator i = row i of v_inv, expressed in old generators
        let mut keep = Vec::new();
        for i in 0..k {
            if dd[(i, i)] > Int::one() {
                keep.push(i);
            }
        }
        let orders: Vec<Int> = keep.iter().map(|&i| dd[(i, i)].clone()).collect();
        let gens: Vec<Vec<Int>> = keep.iter().map(|&i| v_inv.row_vec(i)).collect();
        let q_diag: Vec<Rat> = gens.iter().map(|g| self.q_raw(g)).collect();
        let b_mat: Vec<Vec<Rat>> =
            gens.iter().map(|g| gens.iter().map(|h| self.b_raw(g, h)).collect()).collect();
        Ok(FiniteQuadraticForm { orders, q_diag, b_mat })
    }

    pub fn orders(&self) -> &[Int] {
        &self.orders
    }

    /// Least number of generators l(A).
    pub fn min_generators(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> Int {
        self.orders.iter().fold(Int::one(), |a, d| a * d)
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn is_two_elementary(&self) -> bool {
        self.orders.iter().all(|d| *d == int(2))
    }

    /// Exponent of the group (1 for the trivial group).
    pub fn exponent(&self) -> Int {
        self.orders.last().cloned().unwrap_or_else(Int::one)
    }

    /// Reduce coordinates mod the generator orders into [0, d_i).
    pub fn reduce(&self, coords: &[Int]) -> Vec<Int> {
        assert_eq!(coords.len(), self.orders.len(), "element width");
        coords.iter().zip(&self.orders).map(|(x, d)| x.mod_floor(d)).collect()
    }

    pub fn zero_element(&self) -> Vec<Int> {
        vec![Int::zero(); self.orders.len()]
    }

    pub fn add(&self, a: &[Int], b: &[Int]) -> Vec<Int> {
        self.reduce(&a.iter().zip(b).map(|(x, y)| x.clone() + y).collect::<Vec<_>>())
    }

    pub fn neg(&self, a: &[Int]) -> Vec<Int> {
        self.reduce(&a.iter().map(|x| -x.clone()).collect::<Vec<_>>())
    }

    pub fn scale(&self, k: &Int, a: &[Int]) -> Vec<Int> {
        self.reduce(&a.iter().map(|x| x.clone() * k).collect::<Vec<_>>())
    }

    fn q_raw(&self, coords: &[Int]) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..self.orders.len() {
            if coords[i].is_zero() {
                continue;
            }
            let xi = Rat::from(coords[i].clone());
            acc += xi.clone() * xi.clone() * &self.q_diag[i];
            for j in i + 1..self.orders.len() {
                if coords[j].is_zero() {
                    continue;
                }
                let xj = Rat::from(coords[j].clone());
                acc += Rat::from(int(2)) * xi.clone() * xj * &self.b_mat[i][j];
            }
        }
        mod2(&acc)
    }

    fn b_raw(&self, a: &[Int], b: &[Int]) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..self.orders.len() {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..self.orders.len() {
                if b[j].is_zero() {
                    continue;
                }
                acc += Rat::from(a[i].clone()) * Rat::from(b[j].clone()) * &self.b_mat[i][j];
            }
        }
        mod1(&acc)
    }

    /// q(a) as canonical representative in [0, 2).
    pub fn q(&self, coords: &[Int]) -> Rat {
        self.q_raw(&self.reduce(coords))
    }

    /// b(a, b) as canonical representative in [0, 1).
    pub fn b(&self, a: &[Int], b: &[Int]) -> Rat {
        self.b_raw(&self.reduce(a), &self.reduce(b))
    }

    pub fn element_order(&self, coords: &[Int]) -> Int {
        let c = self.reduce(coords);
        let mut ord = Int::one();
        for (x, d) in c.iter().zip(&self.orders) {
            let o = d / x.gcd(d);
            ord = ord.lcm(&o);
        }
        ord
    }

    /// All elements in lexicographic coordinate order; guarded.
    pub fn elements(&self) -> Result<Vec<Vec<Int>>> {
        let order = self.order();
        if order > int(1 << 16) {
            return Err(Error::GuardExceeded(format!("group order {order} exceeds 2^16")));
        }
        let n = order.to_usize().unwrap();
        let mut out = Vec::with_capacity(n);
        let mut cur = self.zero_element();
        loop {
            out.push(cur.clone());
            // odometer
            let mut i = self.orders.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                cur[i] += Int::one();
                if cur[i] < self.orders[i] {
                    break;
                }
                cur[i] = Int::zero();
            }
        }
    }

    /// Histogram of q-values over the whole group; guarded like `elements`.
    pub fn q_histogram(&self) -> Result<BTreeMap<Rat, usize>> {
        let mut h = BTreeMap::new();
        for e in self.elements()? {
            *h.entry(self.q_raw(&e)).or_insert(0) += 1;
        }
        Ok(h)
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(a: &FiniteQuadraticForm, b: &FiniteQuadraticForm) -> FiniteQuadraticForm {
        let k = a.orders.len() + b.orders.len();
        let orders: Vec<Int> = a.orders.iter().chain(&b.orders).cloned().collect();
        let q_diag: Vec<Rat> = a.q_diag.iter().chain(&b.q_diag).cloned().collect();
        let mut b_mat = vec![vec![Rat::zero(); k]; k];
        for i in 0..a.orders.len() {
            for j in 0..a.orders.len() {
                b_mat[i][j] = a.b_mat[i][j].clone();
            }
        }
        for i in 0..b.orders.len() {
            for j in 0..b.orders.len() {
                b_mat[a.orders.len() + i][a.orders.len() + j] = b.b_mat[i][j].clone();
            }
        }
        FiniteQuadraticForm::new(orders, q_diag, b_mat).expect("direct sum of valid forms")
    }

    /// The same group with q negated.
    pub fn negated(&self) -> FiniteQuadraticForm {
        FiniteQuadraticForm {
            orders: self.orders.clone(),
            q_diag: self.q_diag.iter().map(|q| mod2(&-q.clone())).collect(),
            b_mat: self
                .b_mat
                .iter()
                .map(|row| row.iter().map(|b| mod1(&-b.clone())).collect())
                .collect(),
        }
    }

    /// Re-present the form on a new generating set (2-elementary only).
    /// The new generators must be F_2-independent and span the group.
    pub fn represent_on(&self, gens: &[Vec<Int>]) -> Result<FiniteQuadraticForm> {
        if !self.is_two_elementary() {
            return Err(Error::GuardExceeded("represent_on requires a 2-elementary group".into()));
        }
        let k = self.orders.len();
        if gens.len() != k {
            return Err(Error::Dimension("need exactly rank-many generators".into()));
        }
        // F_2 independence
        let mut rows: Vec<Vec<u8>> = gens
            .iter()
            .map(|g| self.reduce(g).iter().map(|x| if x.is_odd() { 1 } else { 0 }).collect())
            .collect();
        let mut rank = 0usize;
        for col in 0..k {
            if let Some(p) = (rank..k).find(|&r| rows[r][col] == 1) {
                rows.swap(rank, p);
                for r in 0..k {
                    if r != rank && rows[r][col] == 1 {
                        for c in 0..k {
                            rows[r][c] ^= rows[rank][c];
                        }
                    }
                }
                rank += 1;
            }
        }
        if rank != k {
            return Err(Error::Precondition("generators do not span the group".into()));
        }
        let q_diag: Vec<Rat> = gens.iter().map(|g| self.q(g)).collect();
        let b_mat: Vec<Vec<Rat>> =
            gens.iter().map(|g| gens.iter().map(|h| self.b(g, h)).collect()).collect();
        FiniteQuadraticForm::new(vec![int(2); k], q_diag, b_mat)
    }
}

/// Exact arithmetic in Z[zeta_16] on the basis 1, z, ..., z^7 with z^8 = -1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Zeta16([Int; 8]);

impl Zeta16 {
    pub fn zero() -> Self {
        Zeta16(std::array::from_fn(|_| Int::zero()))
    }

    pub fn from_int(n: Int) -> Self {
        let mut z = Self::zero();
        z.0[0] = n;
        z
    }

    /// zeta_16^k for any integer k.
    pub fn power(k: i64) -> Self {
        let mut z = Self::zero();
        let k = k.rem_euclid(16) as usize;
        if k < 8 {
            z.0[k] = Int::one();
        } else {
            z.0[k - 8] = -Int::one();
        }
        z
    }

    pub fn add_assign(&mut self, other: &Self) {
        for i in 0..8 {
            self.0[i] += &other.0[i];
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for i in 0..8 {
            if self.0[i].is_zero() {
                continue;
            }
            for j in 0..8 {
                if other.0[j].is_zero() {
                    continue;
                }
                let t = self.0[i].clone() * &other.0[j];
                let k = i + j;
                if k < 8 {
                    out.0[k] += t;
                } else {
                    out.0[k - 8] -= t;
                }
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        // zeta^k -> zeta^(16-k)
        let mut out = Self::zero();
        out.0[0] = self.0[0].clone();
        for k in 1..8 {
            // zeta^(16-k) = -zeta^(8-k)
            out.0[8 - k] -= &self.0[k];
        }
        out
    }

    pub fn scale(&self, n: &Int) -> Self {
        let mut out = self.clone();
        for i in 0..8 {
            out.0[i] *= n;
        }
        out
    }

    /// sqrt(2) = zeta^2 - zeta^6.
    pub fn sqrt2() -> Self {
        let mut z = Self::zero();
        z.0[2] = Int::one();
        z.0[6] = -Int::one();
        z
    }

    pub fn is_rational_int(&self, n: &Int) -> bool {
        if self.0[0] != *n {
            return false;
        }
        self.0[1..].iter().all(|x| x.is_zero())
    }
}

/// Gauss-Milgram sum over the whole form, exactly in Z[zeta_16].
/// Returns the sum; q-values must have denominator dividing 8.
pub fn milgram_sum(fqf: &FiniteQuadraticForm) -> Result<Zeta16> {
    let mut s = Zeta16::zero();
    for e in fqf.elements()? {
        let q = fqf.q_raw(&e); // in [0,2)
        let scaled = q * Rat::from(int(8));
        if !scaled.is_integer() {
            return Err(Error::GuardExceeded(
                "q-value denominator beyond 8; exact Milgram path unavailable".into(),
            ));
        }
        let k = scaled.to_integer().mod_floor(&int(16)).to_i64().unwrap();
        s.add_assign(&Zeta16::power(k));
    }
    Ok(s)
}

/// Signature mod 8 via the Gauss-Milgram sum, fully exact. Also checks the
/// modulus identity |S|^2 = |A|.
pub fn milgram_signature(fqf: &FiniteQuadraticForm) -> Result<u8> {
    let s = milgram_sum(fqf)?;
    let order = fqf.order();
    let norm = s.mul(&s.conj());
    if !norm.is_rational_int(&order) {
        return Err(Error::Degenerate);
    }
    // |A| = f^2 * squarefree, need squarefree in {1, 2}
    let (f, sf) = square_part(&order);
    let base = if sf == int(1) {
        Zeta16::from_int(f)
    } else if sf == int(2) {
        Zeta16::sqrt2().scale(&f)
    } else {
        return Err(Error::GuardExceeded(
            "group order with squarefree part > 2 not supported by the exact path".into(),
        ));
    };
    for sigma in 0..8i64 {
        if s == base.mul(&Zeta16::power(2 * sigma)) {
            return Ok(sigma as u8);
        }
    }
    Err(Error::Degenerate)
}

/// n = f^2 * squarefree; returns (f, squarefree).
fn square_part(n: &Int) -> (Int, Int) {
    let mut f = Int::one();
    let mut sf = Int::one();
    let mut m = n.clone();
    let mut p = int(2);
    while p.clone() * p.clone() <= m {
        let mut e = 0u32;
        while m.is_multiple_of(&p) {
            m /= p.clone();
            e += 1;
        }
        if e > 0 {
            f *= num_traits::pow::pow(p.clone(), (e / 2) as usize);
            if e % 2 == 1 {
                sf *= p.clone();
            }
        }
        p += Int::one();
    }
    if m > Int::one() {
        sf *= m;
    }
    (f, sf)
}

/// Aggregate invariants used for quick form comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqfInvariants {
    pub order: Int,
    pub invariant_factors: Vec<Int>,
    pub q_histogram: BTreeMap<Rat, usize>,
    pub signature_mod8: u8,
}

pub fn fqf_invariants(fqf: &FiniteQuadraticForm) -> Result<FqfInvariants> {
    Ok(FqfInvariants {
        order: fqf.order(),
        invariant_factors: fqf.orders().to_vec(),
        q_histogram: fqf.q_histogram()?,
        signature_mod8: milgram_signature(fqf)?,
    })
}

/// Discriminant group of a nondegenerate even lattice, with rational lifts
/// into the lattice basis and projection of dual vectors onto classes.
#[derive(Clone, Debug)]
pub struct LatticeDisc {
    lattice: Lattice,
    form: FiniteQuadraticForm,
    /// rows = rational coordinates (lattice basis) of the form's generators
    gen_lifts: RatMatrix,
    /// SNF bookkeeping: class of dual-coefficient vector x is (x * v) mod d
    v: IntMatrix,
    nontrivial: Vec<usize>,
    snf_diag: Vec<Int>,
}

impl LatticeDisc {
    pub fn compute(l: &Lattice) -> Result<LatticeDisc> {
        let n = l.rank();
        if n > 0 && l.det().is_zero() {
            return Err(Error::Degenerate);
        }
        let (d, _, v) = smith_normal_form(l.gram());
        let snf_diag: Vec<Int> = (0..n).map(|i| d[(i, i)].clone()).collect();
        let nontrivial: Vec<usize> = (0..n).filter(|&i| snf_diag[i] > Int::one()).collect();
        let v_inv = if n == 0 {
            IntMatrix::identity(0)
        } else {
            v.to_rat().inverse().and_then(|m| m.to_int()).expect("unimodular inverse")
        };
        let g_inv = if n == 0 {
            RatMatrix::identity(0)
        } else {
            l.gram().to_rat().inverse().ok_or(Error::Degenerate)?
        };
        // generator i lifts to row i of v_inv * G^{-1}
        let lift_all = v_inv.to_rat().mul(&g_inv);
        let gen_lifts = RatMatrix::from_fn(nontrivial.len(), n, |r, c| {
            lift_all[(nontrivial[r], c)].clone()
        });
        let orders: Vec<Int> = nontrivial.iter().map(|&i| snf_diag[i].clone()).collect();
        let mut q_diag = Vec::new();
        let mut b_mat = vec![vec![Rat::zero(); orders.len()]; orders.len()];
        let gram_rat = l.gram().to_rat();
        for i in 0..orders.len() {
            let qi = pair_rat(&gram_rat, &gen_lifts.row_vec(i), &gen_lifts.row_vec(i));
            q_diag.push(mod2(&qi));
            for j in 0..orders.len() {
                let bij = pair_rat(&gram_rat, &gen_lifts.row_vec(i), &gen_lifts.row_vec(j));
                b_mat[i][j] = mod1(&bij);
            }
        }
        let form = FiniteQuadraticForm::new(orders, q_diag, b_mat)?;
        Ok(LatticeDisc { lattice: l.clone(), form, gen_lifts, v, nontrivial, snf_diag })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn form(&self) -> &FiniteQuadraticForm {
        &self.form
    }

    /// Rational coordinates (in the lattice basis) of a representative of
    /// the class with the given coordinates.
    pub fn lift(&self, coords: &[Int]) -> Vec<Rat> {
        let c = self.form.reduce(coords);
        let n = self.lattice.rank();
        let mut out = vec![Rat::zero(); n];
        for (i, x) in c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..n {
                out[j] += Rat::from(x.clone()) * &self.gen_lifts[(i, j)];
            }
        }
        out
    }

    /// Class of a rational vector that lies in the dual lattice; errors if
    /// the vector is not in N^dual.
    pub fn project(&self, rational_coords: &[Rat]) -> Result<Vec<Int>> {
        let n = self.lattice.rank();
        assert_eq!(rational_coords.len(), n);
        let gram_rat = self.lattice.gram().to_rat();
        // dual coefficients x = y * G must be integral
        let mut x = vec![Int::zero(); n];
        for c in 0..n {
            let mut acc = Rat::zero();
            for r in 0..n {
                acc += rational_coords[r].clone() * &gram_rat[(r, c)];
            }
            if !acc.is_integer() {
                return Err(Error::Precondition("vector is not in the dual lattice".into()));
            }
            x[c] = acc.to_integer();
        }
        // class = (x * v) mod diag
        let xv = crate::linalg::vec_mat(&x, &self.v);
        let coords: Vec<Int> = self
            .nontrivial
            .iter()
            .map(|&i| xv[i].mod_floor(&self.snf_diag[i]))
            .collect();
        Ok(coords)
    }

    /// Class [w / m] of a lattice vector divisible by m (i.e. w/m must lie
    /// in the dual lattice).
    pub fn class_of_scaled(&self, w: &[Int], m: &Int) -> Result<Vec<Int>> {
        let y: Vec<Rat> = w.iter().map(|x| Rat::new(x.clone(), m.clone())).collect();
        self.project(&y)
    }
}

fn pair_rat(gram: &RatMatrix, a: &[Rat], b: &[Rat]) -> Rat {
    let n = gram.rows;
    let mut acc = Rat::zero();
    for i in 0..n {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if b[j].is_zero() {
                continue;
            }
            acc += a[i].clone() * &gram[(i, j)] * &b[j];
        }
    }
    acc
}

/// Convenience: the discriminant form of a lattice.
pub fn discriminant_form(l: &Lattice) -> Result<LatticeDisc> {
    LatticeDisc::compute(l)
}

/// A subgroup materialized as its sorted element list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subgroup {
    pub elements: Vec<Vec<Int>>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn trivial(fqf: &FiniteQuadraticForm) -> Subgroup {
        Subgroup { elements: vec![fqf.zero_element()] }
    }

    /// Closure of a generating set.
    pub fn generated(fqf: &FiniteQuadraticForm, gens: &[Vec<Int>]) -> Subgroup {
        let mut set: BTreeSet<Vec<Int>> = BTreeSet::new();
        set.insert(fqf.zero_element());
        let mut frontier: Vec<Vec<Int>> = vec![fqf.zero_element()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = fqf.add(&x, g);
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        Subgroup { elements: set.into_iter().collect() }
    }

    pub fn contains(&self, e: &[Int]) -> bool {
        self.elements.binary_search_by(|x| x.as_slice().cmp(e)).is_ok()
    }
}

/// All subgroups H with q vanishing identically on H, canonically ordered
/// (by order, then element lists); includes the trivial subgroup.
pub fn isotropic_subgroups(fqf: &FiniteQuadraticForm) -> Result<Vec<Subgroup>> {
    let elements = fqf.elements()?; // guarded
    let isotropic: Vec<Vec<Int>> =
        elements.into_iter().filter(|e| fqf.q_raw(e).is_zero()).collect();
    let iso_set: BTreeSet<Vec<Int>> = isotropic.iter().cloned().collect();
    let mut seen: BTreeSet<Vec<Vec<Int>>> = BTreeSet::new();
    let trivial = Subgroup::trivial(fqf);
    seen.insert(trivial.elements.clone());
    let mut queue = vec![trivial];
    let mut out = Vec::new();
    while let Some(s) = queue.pop() {
        out.push(s.clone());
        for g in &isotropic {
            if s.contains(g) {
                continue;
            }
            let mut gens: Vec<Vec<Int>> = s.elements.clone();
            gens.push(g.clone());
            let t = Subgroup::generated(fqf, &gens);
            if t.elements.iter().all(|e| iso_set.contains(e)) && seen.insert(t.elements.clone()) {
                queue.push(t);
            }
        }
    }
    out.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
    Ok(out)
}

/// Result of gluing: the overlattice, the inclusion of the original basis,
/// and the rational basis (rows, in old coordinates) of the new lattice.
#[derive(Clone, Debug)]
pub struct Overlattice {
    pub lattice: Lattice,
    pub inclusion: Sublattice,
    /// rows = new basis in old rational coordinates
    pub basis_in_old: RatMatrix,
}

/// Even overlattice determined by an isotropic subgroup of the discriminant
/// form (generators given as class coordinates).
pub fn overlattice_from_isotropic(l: &Lattice, h_gens: &[Vec<Int>]) -> Result<Overlattice> {
    let disc = LatticeDisc::compute(l)?;
    let h = Subgroup::generated(disc.form(), h_gens);
    for e in &h.elements {
        if !disc.form().q(e).is_zero() {
            return Err(Error::NotIsotropic);
        }
    }
    let n = l.rank();
    // common denominator of the lifts
    let lifts: Vec<Vec<Rat>> = h_gens.iter().map(|g| disc.lift(g)).collect();
    let mut den = Int::one();
    for row in &lifts {
        for x in row {
            den = den.lcm(x.denom());
        }
    }
    // integral generators of D * L', rows
    let mut rows: Vec<Vec<Int>> = Vec::new();
    for i in 0..n {
        let mut r = vec![Int::zero(); n];
        r[i] = den.clone();
        rows.push(r);
    }
    for lift in &lifts {
        rows.push(lift.iter().map(|x| (x.clone() * Rat::from(den.clone())).to_integer()).collect());
    }
    let stacked = IntMatrix::from_rows(rows);
    let (hnf, _) = hermite_normal_form(&stacked);
    let nz: Vec<usize> = (0..hnf.rows).filter(|&r| !hnf.row(r).iter().all(|x| x.is_zero())).collect();
    if nz.len() != n {
        return Err(Error::Degenerate);
    }
    let b = hnf.select_rows(&nz);
    // new basis in old rational coords: B / den
    let basis_in_old =
        RatMatrix::from_fn(n, n, |r, c| Rat::new(b[(r, c)].clone(), den.clone()));
    // Gram' = (B/D) G (B/D)^T, must be integral and even
    let gram_rat = l.gram().to_rat();
    let mut new_gram = IntMatrix::zero(n, n);
    for r in 0..n {
        for c in 0..n {
            let val = pair_rat(&gram_rat, &basis_in_old.row_vec(r), &basis_in_old.row_vec(c));
            if !val.is_integer() {
                return Err(Error::Precondition("glued lattice is not integral".into()));
            }
            new_gram[(r, c)] = val.to_integer();
        }
    }
    let l2 = Lattice::new(new_gram, l.label().map(|s| format!("{s}^")))?;
    // index check: [L' : L] = |H|
    let det_l = l.det().abs();
    let det_l2 = l2.det().abs();
    let h_order = int(h.order() as i64);
    if det_l != det_l2.clone() * h_order.clone() * h_order.clone() {
        return Err(Error::InvariantMismatch("overlattice index does not match |H|".into()));
    }
    // inclusion of the old basis into the new one: X * (B/D) = I
    let x = basis_in_old.inverse().ok_or(Error::Degenerate)?;
    let x_int = x.to_int().ok_or_else(|| {
        Error::Precondition("old basis does not embed integrally (internal)".into())
    })?;
    let inclusion = Sublattice::new(&l2, x_int)?;
    // internal check of the discriminant restriction (q_{A_{L'}} = q|_{H^perp/H})
    let disc2 = LatticeDisc::compute(&l2)?;
    for i in 0..disc2.form().orders().len() {
        let mut e = disc2.form().zero_element();
        e[i] = Int::one();
        let lift2 = disc2.lift(&e);
        // back to old coordinates
        let mut old = vec![Rat::zero(); n];
        for (r, coeff) in lift2.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for c in 0..n {
                old[c] += coeff.clone() * &basis_in_old[(r, c)];
            }
        }
        let class = disc.project(&old)?;
        // must pair integrally with H and carry the same q-value
        for hh in &h.elements {
            if !disc.form().b(&class, hh).is_zero() {
                return Err(Error::InvariantMismatch(
                    "overlattice discriminant class not orthogonal to H".into(),
                ));
            }
        }
        if disc.form().q(&class) != disc2.form().q(&e) {
            return Err(Error::InvariantMismatch(
                "overlattice discriminant q does not restrict correctly".into(),
            ));
        }
    }
    Ok(Overlattice { lattice: l2, inclusion, basis_in_old })
}

/// Induced form on S / H for subgroups H <= S of (A, q), where q and b are
/// well-defined on the quotient (H isotropic and b(H, S) = 0). Returns the
/// form together with lifts of its generators into A.
pub fn subquotient_form(
    fqf: &FiniteQuadraticForm,
    sub_gens: &[Vec<Int>],
    h_gens: &[Vec<Int>],
) -> Result<(FiniteQuadraticForm, Vec<Vec<Int>>)> {
    let k = fqf.orders().len();
    let r = sub_gens.len();
    if r == 0 {
        return Ok((FiniteQuadraticForm::trivial(), vec![]));
    }
    // relation lattice: { x in Z^r : sum x_i s_i lies in <H, orders> }
    let mut rows: Vec<Vec<Int>> = Vec::new();
    for g in sub_gens {
        rows.push(fqf.reduce(g));
    }
    for g in h_gens {
        rows.push(fqf.reduce(g));
    }
    for i in 0..k {
        let mut row = vec![Int::zero(); k];
        row[i] = fqf.orders()[i].clone();
        rows.push(row);
    }
    let stacked = IntMatrix::from_rows(rows);
    let kernel = crate::linalg::integer_kernel(&stacked);
    // project kernel rows onto the first r coordinates
    let rel = IntMatrix::from_fn(kernel.rows, r, |row, c| kernel[(row, c)].clone());
    let (d, _, v) = smith_normal_form(&rel);
    let v_inv = v.to_rat().inverse().and_then(|m| m.to_int()).expect("unimodular inverse");
    let mut orders = Vec::new();
    let mut gens = Vec::new();
    let diag_len = rel.rows.min(r);
    for i in 0..r {
        let di = if i < diag_len { d[(i, i)].clone() } else { Int::zero() };
        if di.is_zero() {
            return Err(Error::Degenerate); // quotient not finite: cannot happen
        }
        if di > Int::one() {
            orders.push(di);
            // generator in A-coordinates
            let coeffs = v_inv.row_vec(i);
            let mut acc = fqf.zero_element();
            for (j, c) in coeffs.iter().enumerate() {
                acc = fqf.add(&acc, &fqf.scale(c, &sub_gens[j]));
            }
            gens.push(acc);
        }
    }
    // well-definedness: H isotropic and orthogonal to the chosen lifts
    for h in h_gens {
        if !fqf.q(h).is_zero() {
            return Err(Error::NotIsotropic);
        }
        for g in &gens {
            if !fqf.b(g, h).is_zero() {
                return Err(Error::NotIsotropic);
            }
        }
    }
    let q_diag: Vec<Rat> = gens.iter().map(|g| fqf.q(g)).collect();
    let b_mat: Vec<Vec<Rat>> =
        gens.iter().map(|g| gens.iter().map(|h| fqf.b(g, h)).collect()).collect();
    Ok((FiniteQuadraticForm::new(orders, q_diag, b_mat)?, gens))
}

/// Discriminant-form transvection tau_a(x) = x + 2 b(x, a) a (for q(a) = 1
/// on 2-elementary groups); used for cheap orbit partitioning of elements.
pub fn tau_apply(form: &FiniteQuadraticForm, a: &[Int], x: &[Int]) -> Vec<Int> {
    let coeff = (form.b(x, a) * Rat::from(int(2))).to_integer();
    form.add(x, &form.scale(&coeff, a))
}

/// Partition a set of elements into orbits under the transvections tau_a
/// over all a with q(a) = 1.
pub fn tau_orbit_partition(
    form: &FiniteQuadraticForm,
    classes: &[Vec<Int>],
) -> Result<Vec<Vec<Vec<Int>>>> {
    let one = Rat::from(int(1));
    let gens: Vec<Vec<Int>> = form.elements()?.into_iter().filter(|a| form.q(a) == one).collect();
    let class_set: BTreeSet<Vec<Int>> = classes.iter().cloned().collect();
    let mut remaining = class_set.clone();
    let mut orbits = Vec::new();
    while let Some(start) = remaining.iter().next().cloned() {
        let mut orbit = BTreeSet::new();
        orbit.insert(start.clone());
        let mut frontier = vec![start];
        while let Some(x) = frontier.pop() {
            for a in &gens {
                let y = tau_apply(form, a, &x);
                if class_set.contains(&y) && orbit.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        for x in &orbit {
            remaining.remove(x);
        }
        orbits.push(orbit.into_iter().collect::<Vec<_>>());
    }
    orbits.sort();
    Ok(orbits)
}

/// Tri-state answer for form comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsometryAnswer {
    /// images of the first form's generators in the second form
    Yes(Vec<Vec<Int>>),
    No(String),
    Unknown,
}

/// Decide whether two finite quadratic forms are isometric. Invariants are
/// compared first; an explicit generator-image witness is searched by
/// backtracking (guarded at order 2^8, or 2^9 for 2-elementary groups) and
/// verified exhaustively.
pub fn fqf_isometry_exists(a: &FiniteQuadraticForm, b: &FiniteQuadraticForm) -> IsometryAnswer {
    fqf_isometry_with_pin(a, b, None)
}

fn within_search_guard(a: &FiniteQuadraticForm) -> bool {
    let order = a.order();
    order <= int(1 << 8) || (a.is_two_elementary() && order <= int(1 << 9))
}

/// Same as `fqf_isometry_exists` but optionally requiring pin.0 -> pin.1.
/// The pin is enforced structurally: both forms are re-presented on bases
/// whose first generator is the pinned element, so the search space stays
/// small.
pub fn fqf_isometry_with_pin(
    a: &FiniteQuadraticForm,
    b: &FiniteQuadraticForm,
    pin: Option<(&[Int], &[Int])>,
) -> IsometryAnswer {
    if a.orders() != b.orders() {
        return IsometryAnswer::No("invariant factors differ".into());
    }
    if a.is_trivial() {
        return IsometryAnswer::Yes(vec![]);
    }
    if a != b && a.order() <= int(1 << 16) {
        let (ha, hb) = (a.q_histogram().unwrap(), b.q_histogram().unwrap());
        if ha != hb {
            return IsometryAnswer::No("q-value histograms differ".into());
        }
        match (milgram_signature(a), milgram_signature(b)) {
            (Ok(sa), Ok(sb)) if sa != sb => {
                return IsometryAnswer::No("signatures mod 8 differ".into())
            }
            _ => {}
        }
    }
    if !within_search_guard(a) {
        return IsometryAnswer::Unknown;
    }
    match pin {
        None => search_isometry(a, b, None).map_or_else(
            || IsometryAnswer::No("backtracking exhausted without a witness".into()),
            IsometryAnswer::Yes,
        ),
        Some((src, dst)) => {
            // quick sanity on the pinned pair
            if a.q(src) != b.q(dst) || a.element_order(src) != b.element_order(dst) {
                return IsometryAnswer::No("pinned elements have different invariants".into());
            }
            if !a.is_two_elementary() {
                return IsometryAnswer::Unknown;
            }
            let (Ok(ba), Ok(bb)) = (complete_to_basis(a, src), complete_to_basis(b, dst)) else {
                return IsometryAnswer::Unknown;
            };
            let (Ok(ra), Ok(rb)) = (a.represent_on(&ba), b.represent_on(&bb)) else {
                return IsometryAnswer::Unknown;
            };
            let mut first = rb.zero_element();
            first[0] = Int::one();
            match search_isometry(&ra, &rb, Some(first)) {
                Some(images) => {
                    // translate back: image of a's standard generator i
                    let translated = translate_images(a, b, &ba, &bb, &images);
                    IsometryAnswer::Yes(translated)
                }
                None => IsometryAnswer::No("no isometry with the pinned image".into()),
            }
        }
    }
}

/// Complete a nonzero element of a 2-elementary group to an F_2 basis.
fn complete_to_basis(form: &FiniteQuadraticForm, first: &[Int]) -> Result<Vec<Vec<Int>>> {
    let k = form.orders().len();
    let mut basis = vec![form.reduce(first)];
    let mut mat: Vec<Vec<u8>> =
        vec![basis[0].iter().map(|x| if x.is_odd() { 1 } else { 0 }).collect()];
    if mat[0].iter().all(|&x| x == 0) {
        return Err(Error::ZeroVector);
    }
    for i in 0..k {
        if basis.len() == k {
            break;
        }
        let mut gi = form.zero_element();
        gi[i] = Int::one();
        let row: Vec<u8> = gi.iter().map(|x| if x.is_odd() { 1 } else { 0 }).collect();
        // F_2 independence of mat + row
        let mut work = mat.clone();
        work.push(row.clone());
        if f2_rank(&mut work) == mat.len() + 1 {
            mat.push(row);
            basis.push(gi);
        }
    }
    if basis.len() != k {
        return Err(Error::Degenerate);
    }
    Ok(basis)
}

fn f2_rank(rows: &mut Vec<Vec<u8>>) -> usize {
    let k = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..k {
        if let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] == 1) {
            rows.swap(rank, p);
            for r in 0..rows.len() {
                if r != rank && rows[r][col] == 1 {
                    for c in 0..k {
                        rows[r][c] ^= rows[rank][c];
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Express images found in re-presented coordinates back as images of the
/// original standard generators.
fn translate_images(
    a: &FiniteQuadraticForm,
    b: &FiniteQuadraticForm,
    basis_a: &[Vec<Int>],
    basis_b: &[Vec<Int>],
    images: &[Vec<Int>],
) -> Vec<Vec<Int>> {
    // the map sends basis_a[i] to sum_j images[i][j] * basis_b[j]; standard
    // generator g_i of `a` expands over basis_a by F_2 linear algebra
    let k = a.orders().len();
    // solve g_i = sum c_j basis_a[j] over F_2
    let mut mat: Vec<Vec<u8>> = (0..k)
        .map(|j| basis_a[j].iter().map(|x| if x.is_odd() { 1 } else { 0 }).collect())
        .collect();
    // invert the basis matrix over F_2 (rows = basis vectors)
    let mut inv: Vec<Vec<u8>> = (0..k)
        .map(|i| (0..k).map(|j| u8::from(i == j)).collect())
        .collect();
    for col in 0..k {
        let p = (col..k).find(|&r| mat[r][col] == 1).expect("basis is invertible");
        mat.swap(col, p);
        inv.swap(col, p);
        for r in 0..k {
            if r != col && mat[r][col] == 1 {
                for c in 0..k {
                    mat[r][c] ^= mat[col][c];
                    inv[r][c] ^= inv[col][c];
                }
            }
        }
    }
    // row i of inv gives coefficients of g_i over basis_a
    (0..k)
        .map(|i| {
            let mut acc = b.zero_element();
            for j in 0..k {
                if inv[i][j] == 1 {
                    // image of basis_a[j] = sum_m images[j][m] basis_b[m]
                    let mut img = b.zero_element();
                    for (m, coef) in images[j].iter().enumerate() {
                        img = b.add(&img, &b.scale(coef, &basis_b[m]));
                    }
                    acc = b.add(&acc, &img);
                }
            }
            acc
        })
        .collect()
}

/// Backtracking search for a q- and b-preserving bijection, optionally with
/// the image of the first generator forced.
fn search_isometry(
    a: &FiniteQuadraticForm,
    b: &FiniteQuadraticForm,
    forced_first: Option<Vec<Int>>,
) -> Option<Vec<Vec<Int>>> {
    let elements_b = b.elements().ok()?;
    let k = a.orders().len();
    let mut cands: Vec<Vec<Vec<Int>>> = Vec::with_capacity(k);
    for i in 0..k {
        let mut gi = a.zero_element();
        gi[i] = Int::one();
        let (qa, da) = (a.q(&gi), a.element_order(&gi));
        if i == 0 {
            if let Some(f) = &forced_first {
                cands.push(vec![f.clone()]);
                continue;
            }
        }
        let list: Vec<Vec<Int>> = elements_b
            .iter()
            .filter(|y| b.element_order(y) == da && b.q(y) == qa)
            .cloned()
            .collect();
        if list.is_empty() {
            return None;
        }
        cands.push(list);
    }
    let mut chosen: Vec<Vec<Int>> = Vec::new();
    if backtrack(a, b, &cands, &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}

fn backtrack(
    a: &FiniteQuadraticForm,
    b: &FiniteQuadraticForm,
    cands: &[Vec<Vec<Int>>],
    chosen: &mut Vec<Vec<Int>>,
) -> bool {
    let k = a.orders().len();
    let i = chosen.len();
    if i == k {
        return verify_witness(a, b, chosen);
    }
    'cand: for y in &cands[i] {
        for (j, prev) in chosen.iter().enumerate() {
            let mut gi = a.zero_element();
            gi[i] = Int::one();
            let mut gj = a.zero_element();
            gj[j] = Int::one();
            if b.b(y, prev) != a.b(&gi, &gj) {
                continue 'cand;
            }
        }
        chosen.push(y.clone());
        if backtrack(a, b, cands, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Exhaustive witness verification: the generator assignment must define a
/// bijection preserving q everywhere.
fn verify_witness(a: &FiniteQuadraticForm, b: &FiniteQuadraticForm, images: &[Vec<Int>]) -> bool {
    let apply = |x: &[Int]| -> Vec<Int> {
        let xr = a.reduce(x);
        let mut acc = b.zero_element();
        for (i, c) in xr.iter().enumerate() {
            acc = b.add(&acc, &b.scale(c, &images[i]));
        }
        acc
    };
    let mut seen = BTreeSet::new();
    for x in a.elements().unwrap() {
        let y = apply(&x);
        if a.q(&x) != b.q(&y) {
            return false;
        }
        if !seen.insert(y) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{
        direct_sum, lattice_l, lattice_m, make_e8, make_rank_one, make_u, L_MINUS2_INDEX,
    };
    use crate::linalg::rat;

    #[test]
    fn unimodular_is_trivial() {
        let d = discriminant_form(&make_u()).unwrap();
        assert!(d.form().is_trivial());
        assert_eq!(d.form().min_generators(), 0);
        assert_eq!(d.form().order(), int(1));
    }

    #[test]
    fn disc_of_l() {
        let d = discriminant_form(&lattice_l()).unwrap();
        assert_eq!(d.form().orders(), &[int(2)]);
        // q(1) = -1/2, canonically 3/2
        assert_eq!(d.form().q(&[int(1)]), rat(3, 2));
        // the generator is [v/2] for the (-2) basis vector v
        let l = lattice_l();
        let mut w = vec![int(0); 23];
        w[L_MINUS2_INDEX] = int(1);
        let class = d.class_of_scaled(&w, &int(2)).unwrap();
        assert_eq!(class, vec![int(1)]);
    }

    #[test]
    fn disc_of_e8m2_matches_halved_cartan() {
        let e2 = make_e8(-2).unwrap();
        let d = discriminant_form(&e2).unwrap();
        assert_eq!(d.form().orders(), &vec![int(2); 8]);
        assert_eq!(d.form().min_generators(), 8);
        // evaluate on the documented dual classes a_i / 2
        let mut gens = Vec::new();
        for i in 0..8 {
            let mut w = vec![int(0); 8];
            w[i] = int(1);
            gens.push(d.class_of_scaled(&w, &int(2)).unwrap());
        }
        for i in 0..8 {
            assert_eq!(d.form().q(&gens[i]), rat(1, 1), "diagonal");
            for j in 0..8 {
                if i == j {
                    continue;
                }
                let expect = if crate::lattice::E8_EDGES.contains(&(i.min(j), i.max(j))) {
                    rat(1, 2)
                } else {
                    rat(0, 1)
                };
                assert_eq!(d.form().b(&gens[i], &gens[j]), expect, "b({i},{j})");
            }
        }
    }

    #[test]
    fn disc_of_m_is_two_elementary_rank_nine() {
        let d = discriminant_form(&lattice_m()).unwrap();
        assert_eq!(d.form().orders(), &vec![int(2); 9]);
        assert_eq!(d.form().min_generators(), 9);
        // 136 elements of q = 0 (Arf count), 120 of q = 1, 136 of 3/2, 120 of 1/2
        let h = d.form().q_histogram().unwrap();
        assert_eq!(h.get(&rat(0, 1)), Some(&136));
        assert_eq!(h.get(&rat(1, 1)), Some(&120));
        assert_eq!(h.get(&rat(3, 2)), Some(&136));
        assert_eq!(h.get(&rat(1, 2)), Some(&120));
    }

    #[test]
    fn direct_sum_of_forms() {
        let a = discriminant_form(&make_rank_one(&int(-2)).unwrap()).unwrap();
        let b = discriminant_form(&make_rank_one(&int(2)).unwrap()).unwrap();
        let s = FiniteQuadraticForm::direct_sum(a.form(), b.form());
        assert_eq!(s.order(), int(4));
        let t = FiniteQuadraticForm::direct_sum(&FiniteQuadraticForm::trivial(), a.form());
        assert_eq!(&t, a.form());
    }

    #[test]
    fn milgram_examples() {
        // trivial form
        assert_eq!(milgram_signature(&FiniteQuadraticForm::trivial()).unwrap(), 0);
        // A_{(2)}: q(1) = 1/2 -> signature 1; A_{(-2)}: q(1) = 3/2 -> 7
        let p2 = discriminant_form(&make_rank_one(&int(2)).unwrap()).unwrap();
        assert_eq!(milgram_signature(p2.form()).unwrap(), 1);
        let m2 = discriminant_form(&make_rank_one(&int(-2)).unwrap()).unwrap();
        assert_eq!(milgram_signature(m2.form()).unwrap(), 7);
        // A_L: signature 3 - 20 = -17 = 7 mod 8
        let l = discriminant_form(&lattice_l()).unwrap();
        assert_eq!(milgram_signature(l.form()).unwrap(), 7);
        // A_{E8(-2)}: 0 - 8 = 0 mod 8
        let e = discriminant_form(&make_e8(-2).unwrap()).unwrap();
        assert_eq!(milgram_signature(e.form()).unwrap(), 0);
        // A_M: 3 - 12 = -9 = 7 mod 8
        let m = discriminant_form(&lattice_m()).unwrap();
        assert_eq!(milgram_signature(m.form()).unwrap(), 7);
    }

    #[test]
    fn milgram_modulus_identity() {
        for l in [lattice_l(), lattice_m(), make_e8(-2).unwrap()] {
            let d = discriminant_form(&l).unwrap();
            let s = milgram_sum(d.form()).unwrap();
            let norm = s.mul(&s.conj());
            assert!(norm.is_rational_int(&d.form().order()));
        }
    }

    #[test]
    fn q_symmetry_and_zero() {
        let d = discriminant_form(&lattice_m()).unwrap();
        for e in d.form().elements().unwrap().into_iter().step_by(17) {
            let neg = d.form().neg(&e);
            assert_eq!(d.form().q(&e), d.form().q(&neg));
        }
        assert!(d.form().q(&d.form().zero_element()).is_zero());
    }

    #[test]
    fn isotropic_subgroups_example() {
        // A_{(-2) + (2)}: group (Z/2)^2 with q = (3/2, 1/2)
        let l = direct_sum(&[make_rank_one(&int(-2)).unwrap(), make_rank_one(&int(2)).unwrap()]);
        let d = discriminant_form(&l).unwrap();
        let subs = isotropic_subgroups(d.form()).unwrap();
        // trivial and the diagonal {0, (1,1)} (q = 3/2 + 1/2 = 0)
        assert_eq!(subs.len(), 2);
        assert_eq!(subs[0].order(), 1);
        assert_eq!(subs[1].order(), 2);
        assert!(subs[1].contains(&[int(1), int(1)]));

        let t = isotropic_subgroups(&FiniteQuadraticForm::trivial()).unwrap();
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn isotropic_elements_of_a_m_lie_in_e8_block() {
        // the t-part has q = 3/2, so q = 0 forces the t-coordinate to vanish
        let m = lattice_m();
        let d = discriminant_form(&m).unwrap();
        // identify the t-block coordinate: the generator with b = 1/2 against
        // itself and zero pairing with all others
        for e in d.form().elements().unwrap() {
            if d.form().q(&e).is_zero() && !e.iter().all(|x| x.is_zero()) {
                // check this class lifts into the E8 block: its lift pairs
                // integrally with the t generator
                let lift = d.lift(&e);
                let mut tv = vec![Rat::zero(); 15];
                tv[crate::lattice::M_T_INDEX] = Rat::one();
                let gram = m.gram().to_rat();
                let p = super::pair_rat(&gram, &lift, &tv);
                assert!(p.is_integer(), "isotropic class pairs half-integrally with t");
            }
        }
    }

    #[test]
    fn overlattice_trivial_and_u_example() {
        let l = direct_sum(&[make_rank_one(&int(-2)).unwrap(), make_rank_one(&int(2)).unwrap()]);
        // trivial glue returns an isometric copy
        let o = overlattice_from_isotropic(&l, &[]).unwrap();
        assert_eq!(o.lattice.det(), l.det());
        // diagonal glue gives U: even, det -1, rank 2
        let o = overlattice_from_isotropic(&l, &[vec![int(1), int(1)]]).unwrap();
        assert_eq!(o.lattice.det(), int(-1));
        assert_eq!(o.lattice.rank(), 2);
        assert_eq!(o.lattice.signature(), (1, 1));
        // non-isotropic glue rejected
        assert!(overlattice_from_isotropic(&l, &[vec![int(1), int(0)]]).is_err());
    }

    #[test]
    fn overlattice_det_scaling() {
        // index |H| = 2 cuts the determinant by 4
        let e2 = make_e8(-2).unwrap();
        let d = discriminant_form(&e2).unwrap();
        // find an isotropic nonzero class
        let h = d
            .form()
            .elements()
            .unwrap()
            .into_iter()
            .find(|e| !e.iter().all(|x| x.is_zero()) && d.form().q(e).is_zero())
            .unwrap();
        let o = overlattice_from_isotropic(&e2, &[h]).unwrap();
        assert_eq!(o.lattice.det().abs(), int(64));
    }

    #[test]
    fn fqf_isometry_basics() {
        let e = discriminant_form(&make_e8(-2).unwrap()).unwrap();
        match fqf_isometry_exists(e.form(), e.form()) {
            IsometryAnswer::Yes(_) => {}
            other => panic!("self-isometry failed: {other:?}"),
        }
        // (2) vs (-2): q values 1/2 vs 3/2 differ
        let p2 = discriminant_form(&make_rank_one(&int(2)).unwrap()).unwrap();
        let m2 = discriminant_form(&make_rank_one(&int(-2)).unwrap()).unwrap();
        match fqf_isometry_exists(p2.form(), m2.form()) {
            IsometryAnswer::No(_) => {}
            other => panic!("expected No, got {other:?}"),
        }
    }

    #[test]
    fn anti_diagonal_matches_e8m2_form() {
        // A of {(a,-a)} in E8(-1)^2 vs A_{E8(-2)}: both rank 8, isometric
        let e = make_e8(-1).unwrap();
        let ee = direct_sum(&[e.clone(), e]);
        let anti = Sublattice::new(
            &ee,
            IntMatrix::from_fn(8, 16, |r, c| {
                if c == r {
                    int(1)
                } else if c == r + 8 {
                    int(-1)
                } else {
                    int(0)
                }
            }),
        )
        .unwrap();
        let al = anti.as_lattice().unwrap();
        let da = discriminant_form(&al).unwrap();
        let de = discriminant_form(&make_e8(-2).unwrap()).unwrap();
        match fqf_isometry_exists(da.form(), de.form()) {
            IsometryAnswer::Yes(images) => {
                assert_eq!(images.len(), 8);
            }
            other => panic!("expected Yes, got {other:?}"),
        }
    }

    #[test]
    fn subquotient_of_diagonal_glue() {
        // (q_S + -q_S) restricted to Gamma^perp / Gamma is trivial for the
        // graph of the identity
        let m2 = discriminant_form(&make_rank_one(&int(-2)).unwrap()).unwrap();
        let d = FiniteQuadraticForm::direct_sum(m2.form(), &m2.form().negated());
        let gamma = vec![vec![int(1), int(1)]];
        // Gamma^perp = Gamma here
        let (sub, _) = subquotient_form(&d, &gamma, &gamma).unwrap();
        assert!(sub.is_trivial());
    }

    mod property {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn q_of_negation_matches(seed in proptest::collection::vec(0i64..2, 9)) {
                let d = discriminant_form(&lattice_m()).unwrap();
                let e: Vec<Int> = seed.iter().map(|&x| int(x)).collect();
                prop_assert_eq!(d.form().q(&e), d.form().q(&d.form().neg(&e)));
            }

            #[test]
            fn polar_identity(sa in proptest::collection::vec(0i64..2, 9),
                              sb in proptest::collection::vec(0i64..2, 9)) {
                let d = discriminant_form(&lattice_m()).unwrap();
                let a: Vec<Int> = sa.iter().map(|&x| int(x)).collect();
                let b: Vec<Int> = sb.iter().map(|&x| int(x)).collect();
                let lhs = mod2(&(d.form().q(&d.form().add(&a, &b))
                    - d.form().q(&a) - d.form().q(&b)));
                let rhs = mod2(&(Rat::from(int(2)) * d.form().b(&a, &b)));
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
