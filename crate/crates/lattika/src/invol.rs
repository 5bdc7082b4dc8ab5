//! Isometries of lattices, invariant / co-invariant sublattices of finite
//! groups of isometries, the standard block-swap involution on L, definite
//! isometry testing by short-vector backtracking, and the certificate
//! checker for the co-invariant-lattice conditions (negative definite, no
//! norm -2 vectors, trivial discriminant action).

use crate::disc::{discriminant_form, LatticeDisc};
use crate::lattice::{lattice_l, orthogonal_complement, Lattice, LatticeVector, Sublattice};
use crate::linalg::{int, mat_vec, smith_normal_form, Int, IntMatrix, Rat};
use crate::shortvec::short_vectors;
use crate::{Error, Result};
use num_traits::{One, Zero};
use std::collections::HashSet;

/// A Gram-preserving integer matrix acting on column coordinate vectors.
/// `matrix^T * gram * matrix == gram` is checked at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isometry {
    home: Lattice,
    matrix: IntMatrix,
}

impl Isometry {
    pub fn new(home: &Lattice, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows != home.rank() || matrix.cols != home.rank() {
            return Err(Error::Dimension("isometry matrix size vs lattice rank".into()));
        }
        let g = home.gram();
        if matrix.transpose().mul(g).mul(&matrix) != *g {
            return Err(Error::NotAnIsometry);
        }
        Ok(Isometry { home: home.clone(), matrix })
    }

    pub fn identity(home: &Lattice) -> Self {
        Isometry { home: home.clone(), matrix: IntMatrix::identity(home.rank()) }
    }

    pub fn home(&self) -> &Lattice {
        &self.home
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == IntMatrix::identity(self.home.rank())
    }

    pub fn apply_coords(&self, coords: &[Int]) -> Vec<Int> {
        mat_vec(&self.matrix, coords)
    }

    pub fn apply(&self, v: &LatticeVector) -> Result<LatticeVector> {
        if *v.home() != self.home {
            return Err(Error::MismatchedLattices);
        }
        self.home.vector(self.apply_coords(&v.coords))
    }

    /// self after other.
    pub fn compose(&self, other: &Isometry) -> Result<Isometry> {
        if self.home != other.home {
            return Err(Error::MismatchedLattices);
        }
        Ok(Isometry { home: self.home.clone(), matrix: self.matrix.mul(&other.matrix) })
    }

    pub fn inverse(&self) -> Isometry {
        let inv = self
            .matrix
            .to_rat()
            .inverse()
            .and_then(|m| m.to_int())
            .expect("isometries are unimodular");
        Isometry { home: self.home.clone(), matrix: inv }
    }

    /// Multiplicative order, up to the given cap.
    pub fn order(&self, cap: u32) -> Option<u32> {
        let id = IntMatrix::identity(self.home.rank());
        let mut p = self.matrix.clone();
        for k in 1..=cap {
            if p == id {
                return Some(k);
            }
            p = p.mul(&self.matrix);
        }
        None
    }

    pub fn is_involution(&self) -> bool {
        self.matrix.mul(&self.matrix) == IntMatrix::identity(self.home.rank())
    }
}

/// Saturated fixed sublattice of a single isometry.
pub fn invariant_lattice(g: &Isometry) -> Sublattice {
    joint_invariant_lattice(std::slice::from_ref(g))
}

/// Saturated joint fixed sublattice of a set of generators: the kernel of
/// the stacked maps (g_i - id); the kernel computation saturates.
pub fn joint_invariant_lattice(gens: &[Isometry]) -> Sublattice {
    let home = gens.first().map(|g| g.home.clone()).expect("at least one generator");
    let n = home.rank();
    let k = gens.len();
    // columns of (g_i - I)^T side by side: x is invariant iff x * M = 0
    let m = IntMatrix::from_fn(n, k * n, |r, c| {
        let (gi, col) = (c / n, c % n);
        let p = &gens[gi].matrix;
        let mut v = p[(col, r)].clone();
        if r == col {
            v -= Int::one();
        }
        v
    });
    let kernel = crate::linalg::integer_kernel(&m);
    Sublattice::new(&home, kernel).expect("kernel rows independent")
}

pub fn coinvariant_lattice(g: &Isometry) -> Result<Sublattice> {
    orthogonal_complement(&invariant_lattice(g))
}

/// The involution on L = U^3 + E8(-1)^2 + (-2) exchanging the two E8(-1)
/// blocks and fixing everything else.
pub fn standard_swap_involution_l() -> Isometry {
    let l = lattice_l();
    let mut m = IntMatrix::zero(23, 23);
    for i in 0..6 {
        m[(i, i)] = Int::one();
    }
    m[(22, 22)] = Int::one();
    for i in 0..8 {
        m[(6 + i, 14 + i)] = Int::one();
        m[(14 + i, 6 + i)] = Int::one();
    }
    Isometry::new(&l, m).expect("block swap preserves the Gram")
}

/// Involution on L exchanging the first two U blocks (a counterexample whose
/// co-invariant lattice is indefinite).
pub fn u_swap_involution_l() -> Isometry {
    let l = lattice_l();
    let mut m = IntMatrix::identity(23);
    for i in 0..2 {
        m[(i, i)] = Int::zero();
        m[(2 + i, 2 + i)] = Int::zero();
        m[(i, 2 + i)] = Int::one();
        m[(2 + i, i)] = Int::one();
    }
    Isometry::new(&l, m).expect("U swap preserves the Gram")
}

/// Exponent and order of the finite quotient l / (T_g + S_g) for an
/// involution g, computed by SNF of the stacked generator matrix.
pub fn torsion_exponent_of_quotient(g: &Isometry) -> Result<(Int, Int)> {
    if !g.is_involution() {
        return Err(Error::NotInvolution);
    }
    let t = invariant_lattice(g);
    let s = orthogonal_complement(&t)?;
    let stacked = t.gens().vstack(s.gens());
    if stacked.rows != g.home.rank() {
        return Err(Error::Degenerate);
    }
    let (d, _, _) = smith_normal_form(&stacked);
    let mut exponent = Int::one();
    let mut order = Int::one();
    for i in 0..d.rows.min(d.cols) {
        let di = d[(i, i)].clone();
        if di.is_zero() {
            return Err(Error::Degenerate);
        }
        order *= &di;
        if di > exponent {
            exponent = di;
        }
    }
    // the t +- g(t) argument forces 2-torsion for involutions
    if exponent > int(2) {
        return Err(Error::InvariantMismatch(format!(
            "quotient exponent {exponent} does not divide 2"
        )));
    }
    Ok((exponent, order))
}

/// Witness matrix u with u^T * gram_b * u == gram_a mapping lattice `a` onto
/// lattice `b`, or None when no isometry exists. Both lattices must be
/// definite of the same sign, with rank <= 12.
pub fn is_isometric_definite(a: &Lattice, b: &Lattice) -> Result<Option<IntMatrix>> {
    let n = a.rank();
    if n != b.rank() {
        return Ok(None);
    }
    if n == 0 {
        return Ok(Some(IntMatrix::identity(0)));
    }
    if n > 12 {
        return Err(Error::GuardExceeded(format!("definite isometry rank {n} > 12")));
    }
    if !a.is_definite() || !b.is_definite() {
        return Err(Error::IndefiniteLattice);
    }
    // fast rejections
    if a.det() != b.det() || a.signature() != b.signature() {
        return Ok(None);
    }
    for k in 1..=4i64 {
        let norm = if a.is_negative_definite() { int(-2 * k) } else { int(2 * k) };
        if short_vectors(a, &norm)?.len() != short_vectors(b, &norm)?.len() {
            return Ok(None);
        }
    }
    // candidate pools per distinct diagonal norm of a
    let mut pools: std::collections::BTreeMap<Int, Vec<Vec<Int>>> = Default::default();
    for i in 0..n {
        let norm = a.gram()[(i, i)].clone();
        if !pools.contains_key(&norm) {
            let vecs = short_vectors(b, &norm)?;
            pools.insert(norm, vecs.into_iter().map(|v| v.coords).collect());
        }
    }
    let mut chosen: Vec<Vec<Int>> = Vec::new();
    if definite_backtrack(a, b, &pools, &mut chosen) {
        let u = IntMatrix::from_fn(n, n, |r, c| chosen[c][r].clone());
        debug_assert_eq!(u.transpose().mul(b.gram()).mul(&u), *a.gram());
        Ok(Some(u))
    } else {
        Ok(None)
    }
}

fn definite_backtrack(
    a: &Lattice,
    b: &Lattice,
    pools: &std::collections::BTreeMap<Int, Vec<Vec<Int>>>,
    chosen: &mut Vec<Vec<Int>>,
) -> bool {
    let n = a.rank();
    let i = chosen.len();
    if i == n {
        return true;
    }
    let pool = &pools[&a.gram()[(i, i)]];
    'cand: for cand in pool {
        for (j, prev) in chosen.iter().enumerate() {
            if b.pair_coords(cand, prev) != a.gram()[(i, j)] {
                continue 'cand;
            }
        }
        chosen.push(cand.clone());
        if definite_backtrack(a, b, pools, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Action induced on the discriminant group by an isometry: images of the
/// canonical generators. Checked to preserve q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscAction {
    pub images: Vec<Vec<Int>>,
}

impl DiscAction {
    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, img)| {
            img.iter()
                .enumerate()
                .all(|(j, x)| if i == j { *x == Int::one() } else { x.is_zero() })
        })
    }
}

pub fn induced_discriminant_action(g: &Isometry, disc: &LatticeDisc) -> Result<DiscAction> {
    assert_eq!(disc.lattice(), &g.home, "discriminant of a different lattice");
    let k = disc.form().orders().len();
    let n = g.home.rank();
    let mut images = Vec::with_capacity(k);
    for i in 0..k {
        let mut e = disc.form().zero_element();
        e[i] = Int::one();
        let lift = disc.lift(&e);
        // g acts on column vectors; the lift is in basis coordinates
        let mut img = vec![Rat::zero(); n];
        for r in 0..n {
            for c in 0..n {
                if g.matrix()[(r, c)].is_zero() || lift[c].is_zero() {
                    continue;
                }
                img[r] += Rat::from(g.matrix()[(r, c)].clone()) * &lift[c];
            }
        }
        let class = disc.project(&img)?;
        if disc.form().q(&class) != disc.form().q(&e) {
            return Err(Error::NotAnIsometry);
        }
        images.push(class);
    }
    Ok(DiscAction { images })
}

/// Group closure of a generator set, capped.
pub fn group_closure(gens: &[Isometry], cap: usize) -> Result<Vec<IntMatrix>> {
    let home = gens.first().map(|g| g.home.clone()).expect("nonempty generators");
    let id = IntMatrix::identity(home.rank());
    let mut seen: HashSet<IntMatrix> = HashSet::new();
    seen.insert(id.clone());
    let mut frontier = vec![id.clone()];
    let mut out: Vec<IntMatrix> = vec![id];
    while let Some(m) = frontier.pop() {
        for g in gens {
            let next = g.matrix.mul(&m);
            if seen.insert(next.clone()) {
                out.push(next.clone());
                frontier.push(next);
                if out.len() > cap {
                    return Err(Error::GuardExceeded(format!("group order exceeds cap {cap}")));
                }
            }
        }
    }
    Ok(out)
}

/// Certificate for the lattice-side conditions a finite group of isometries
/// must satisfy to come from symplectic birational transformations: the
/// co-invariant lattice is nondegenerate negative definite, has no norm -2
/// vectors, and the induced discriminant action is trivial.
#[derive(Clone, Debug)]
pub struct NikulinReport {
    pub group_order: usize,
    pub invariant_rank: usize,
    pub coinvariant_rank: usize,
    pub coinvariant_signature: (usize, usize, usize),
    pub negative_definite: bool,
    /// complete list of norm -2 vectors in the co-invariant lattice (in
    /// co-invariant coordinates); None when enumeration was impossible
    pub minus_two_vectors: Option<Vec<Vec<Int>>>,
    pub discriminant_action_trivial: Option<bool>,
    pub coinvariant_gens: IntMatrix,
    pub pass: bool,
    pub failure_reason: Option<String>,
}

pub fn nikulin_conditions_report(gens: &[Isometry]) -> Result<NikulinReport> {
    if gens.is_empty() {
        return Err(Error::Precondition("need at least one generator".into()));
    }
    let group = group_closure(gens, 10_000)?;
    let t = joint_invariant_lattice(gens);
    let s = orthogonal_complement(&t)?;
    let s_lat = s.as_lattice_for_report();
    let sig = crate::linalg::rational_diagonalize_symmetric(s_lat.gram());
    let negdef = sig.0 == 0 && sig.2 == 0;
    let mut reason: Option<String> = None;

    let minus_two = if s.rank() == 0 {
        Some(Vec::new())
    } else if negdef {
        let vecs = short_vectors(&s_lat, &int(-2))?;
        Some(vecs.into_iter().map(|v| v.coords).collect::<Vec<_>>())
    } else {
        reason = Some(format!(
            "co-invariant lattice is not negative definite: signature {sig:?}"
        ));
        None
    };

    let mut action_trivial = None;
    if negdef && s.rank() > 0 {
        let disc = discriminant_form(&s_lat)?;
        let mut all_trivial = true;
        for g in gens {
            // restrict g to the co-invariant sublattice
            let mut cols: Vec<Vec<Int>> = Vec::new();
            for i in 0..s.rank() {
                let img_ambient = g.apply_coords(&s.gens().row_vec(i));
                let Some(c) = s.restrict_coords(&img_ambient) else {
                    return Err(Error::InvariantMismatch(
                        "generator does not preserve the co-invariant lattice".into(),
                    ));
                };
                cols.push(c);
            }
            let r = IntMatrix::from_fn(s.rank(), s.rank(), |rr, cc| cols[cc][rr].clone());
            let restricted = Isometry::new(&s_lat, r)?;
            let act = induced_discriminant_action(&restricted, &disc)?;
            if !act.is_identity() {
                all_trivial = false;
            }
        }
        action_trivial = Some(all_trivial);
        if !all_trivial {
            reason.get_or_insert_with(|| {
                "group acts nontrivially on the discriminant of the co-invariant lattice".into()
            });
        }
    }

    if let Some(v) = &minus_two {
        if !v.is_empty() {
            reason.get_or_insert_with(|| {
                format!("co-invariant lattice contains {} vectors of norm -2", v.len())
            });
        }
    }

    let pass = match (&minus_two, action_trivial) {
        (Some(v), triv) => negdef && v.is_empty() && triv.unwrap_or(true),
        (None, _) => false,
    };
    Ok(NikulinReport {
        group_order: group.len(),
        invariant_rank: t.rank(),
        coinvariant_rank: s.rank(),
        coinvariant_signature: sig,
        negative_definite: negdef,
        minus_two_vectors: minus_two,
        discriminant_action_trivial: action_trivial,
        coinvariant_gens: s.gens().clone(),
        pass,
        failure_reason: if pass { None } else { reason },
    })
}

impl Sublattice {
    /// Rank-0-tolerant induced lattice for report purposes.
    pub(crate) fn as_lattice_for_report(&self) -> Lattice {
        Lattice::new_unchecked(self.induced_gram(), None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{direct_sum, make_e8, make_rank_one, make_u};

    #[test]
    fn identity_invariant_everything() {
        let l = lattice_l();
        let g = Isometry::identity(&l);
        let t = invariant_lattice(&g);
        assert_eq!(t.rank(), 23);
        let s = orthogonal_complement(&t).unwrap();
        assert_eq!(s.rank(), 0);
        assert_eq!(torsion_exponent_of_quotient(&g).unwrap(), (int(1), int(1)));
    }

    #[test]
    fn swap_on_e8_squared() {
        let e = make_e8(-1).unwrap();
        let ee = direct_sum(&[e.clone(), e]);
        let mut m = IntMatrix::zero(16, 16);
        for i in 0..8 {
            m[(i, 8 + i)] = Int::one();
            m[(8 + i, i)] = Int::one();
        }
        let g = Isometry::new(&ee, m).unwrap();
        assert_eq!(g.order(10), Some(2));
        let t = invariant_lattice(&g);
        let s = coinvariant_lattice(&g).unwrap();
        assert_eq!(t.rank(), 8);
        assert_eq!(s.rank(), 8);
        // both copies of E8(-2)
        assert_eq!(t.induced_gram(), *make_e8(-2).unwrap().gram());
        assert_eq!(s.induced_gram(), *make_e8(-2).unwrap().gram());
        // quotient: exponent 2, order 2^8 (oracle: det(T) * det(S) / det = 2^16)
        let (e2, o) = torsion_exponent_of_quotient(&g).unwrap();
        assert_eq!(e2, int(2));
        assert_eq!(o, int(256));
    }

    #[test]
    fn standard_swap_ranks() {
        let g = standard_swap_involution_l();
        assert_eq!(g.order(10), Some(2));
        let t = invariant_lattice(&g);
        let s = coinvariant_lattice(&g).unwrap();
        assert_eq!(t.rank(), 15);
        assert_eq!(s.rank(), 8);
        assert!(g.compose(&g).unwrap().is_identity());
        // fixes every U^3 + (-2) vector
        let l = lattice_l();
        for i in (0..6).chain([22]) {
            let v = l.basis_vector(i);
            assert_eq!(g.apply(&v).unwrap(), v);
        }
    }

    #[test]
    fn swap_acts_trivially_on_a_l() {
        let g = standard_swap_involution_l();
        let disc = discriminant_form(&lattice_l()).unwrap();
        let act = induced_discriminant_action(&g, &disc).unwrap();
        assert!(act.is_identity());
        // -Id on L also acts trivially on Z/2
        let l = lattice_l();
        let neg = Isometry::new(&l, IntMatrix::identity(23).neg()).unwrap();
        let act = induced_discriminant_action(&neg, &disc).unwrap();
        assert!(act.is_identity());
    }

    #[test]
    fn definite_isometry_identity_and_witness() {
        let e = make_e8(-2).unwrap();
        let w = is_isometric_definite(&e, &e).unwrap().unwrap();
        assert_eq!(w.transpose().mul(e.gram()).mul(&w), *e.gram());

        // anti-diagonal of E8(-1)^2 vs E8(-2)
        let e1 = make_e8(-1).unwrap();
        let ee = direct_sum(&[e1.clone(), e1]);
        let anti = Sublattice::new(
            &ee,
            IntMatrix::from_fn(8, 16, |r, c| {
                if c == r {
                    Int::one()
                } else if c == r + 8 {
                    -Int::one()
                } else {
                    Int::zero()
                }
            }),
        )
        .unwrap();
        let al = anti.as_lattice().unwrap();
        let w = is_isometric_definite(&al, &e).unwrap().unwrap();
        assert_eq!(w.transpose().mul(e.gram()).mul(&w), *al.gram());
    }

    #[test]
    fn definite_isometry_negative_case() {
        // E8(-2) vs (-2)^8: same rank but different determinant and roots
        let e = make_e8(-2).unwrap();
        let m2 = make_rank_one(&int(-2)).unwrap();
        let cubes = direct_sum(&vec![m2; 8]);
        assert!(is_isometric_definite(&e, &cubes).unwrap().is_none());
        // norm histograms differ: 0 vs 16 at norm -2
        assert_eq!(short_vectors(&e, &int(-2)).unwrap().len(), 0);
        assert_eq!(short_vectors(&cubes, &int(-2)).unwrap().len(), 16);
        // indefinite input rejected
        assert!(is_isometric_definite(&make_u(), &make_u()).is_err());
    }

    #[test]
    fn nikulin_report_swap_passes() {
        let g = standard_swap_involution_l();
        let r = nikulin_conditions_report(std::slice::from_ref(&g)).unwrap();
        assert!(r.pass, "reason: {:?}", r.failure_reason);
        assert_eq!(r.group_order, 2);
        assert_eq!(r.coinvariant_rank, 8);
        assert!(r.negative_definite);
        assert_eq!(r.minus_two_vectors.as_ref().unwrap().len(), 0);
        assert_eq!(r.discriminant_action_trivial, Some(true));
    }

    #[test]
    fn nikulin_report_u_swap_fails() {
        let g = u_swap_involution_l();
        let r = nikulin_conditions_report(std::slice::from_ref(&g)).unwrap();
        assert!(!r.pass);
        assert!(!r.negative_definite);
        assert_eq!(r.coinvariant_rank, 2);
        assert_eq!(r.coinvariant_signature, (1, 1, 0));
        assert!(r.failure_reason.as_deref().unwrap().contains("not negative definite"));
    }

    #[test]
    fn nikulin_report_identity_vacuous() {
        let l = lattice_l();
        let g = Isometry::identity(&l);
        let r = nikulin_conditions_report(std::slice::from_ref(&g)).unwrap();
        assert!(r.pass);
        assert_eq!(r.coinvariant_rank, 0);
        assert_eq!(r.group_order, 1);
    }
}
