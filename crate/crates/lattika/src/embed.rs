//! Constructive embedding machinery: splitting off hyperbolic planes,
//! Eichler transvections, transport of primitive vectors to a canonical form
//! in lattices containing U^2 (two primitive vectors with equal norm,
//! divisibility and discriminant class are connected by an explicit product
//! of transvections), orbit classification of primitive vectors, and
//! Nikulin-style primitive-embedding data.

use crate::disc::{
    discriminant_form, fqf_invariants, fqf_isometry_exists, mod2, subquotient_form,
    FiniteQuadraticForm, IsometryAnswer, LatticeDisc, Subgroup,
};
use crate::invol::{is_isometric_definite, Isometry};
use crate::lattice::{
    direct_sum, make_e8, make_rank_one, make_u, orthogonal_complement, Lattice, Sublattice,
};
use crate::linalg::{int, mat_vec, Int, IntMatrix, Rat, RatMatrix};
use crate::{Error, Result};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

/// Initial radius for bounded coefficient searches; doubled on failure up to
/// `SEARCH_RADIUS_CAP`. Overridable through LATTIKA_SEARCH_RADIUS.
pub const SEARCH_RADIUS_DEFAULT: u32 = 4;
pub const SEARCH_RADIUS_CAP: u32 = 64;

pub fn search_radius() -> u32 {
    std::env::var("LATTIKA_SEARCH_RADIUS")
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|&r| r >= 1 && r <= SEARCH_RADIUS_CAP)
        .unwrap_or(SEARCH_RADIUS_DEFAULT)
}

/// A hyperbolic plane split: e, f in ambient coordinates with e^2 = f^2 = 0,
/// (e, f) = 1, plus the orthogonal rest.
#[derive(Clone, Debug)]
pub struct USplit {
    pub e: Vec<Int>,
    pub f: Vec<Int>,
    pub u_sub: Sublattice,
    pub rest: Sublattice,
}

/// Visit vectors with the given l1 norm (first nonzero coordinate positive,
/// per-coordinate magnitudes bounded) in deterministic order; returns the
/// first vector accepted by `pred`. Runs on machine integers for speed.
fn l1_search_i64(
    n: usize,
    l1: i64,
    bound: i64,
    pred: &mut dyn FnMut(&[i64]) -> bool,
) -> Option<Vec<i64>> {
    fn rec(
        coords: &mut Vec<i64>,
        start: usize,
        budget: i64,
        bound: i64,
        first: bool,
        pred: &mut dyn FnMut(&[i64]) -> bool,
    ) -> bool {
        let n = coords.len();
        if budget == 0 {
            return pred(coords);
        }
        if start >= n {
            return false;
        }
        if rec(coords, start + 1, budget, bound, first, pred) {
            return true;
        }
        let top = budget.min(bound);
        for mag in 1..=top {
            let signs: &[i64] = if first { &[1] } else { &[1, -1] };
            for &s in signs {
                coords[start] = s * mag;
                if rec(coords, start + 1, budget - mag, bound, false, pred) {
                    return true;
                }
                coords[start] = 0;
            }
        }
        false
    }
    let mut coords = vec![0i64; n];
    if rec(&mut coords, 0, l1, bound, true, pred) {
        Some(coords)
    } else {
        None
    }
}

/// First (in search order) isotropic vector of divisibility 1, scanning l1
/// shells 1..=radius with per-coordinate bound radius. Uses an i64 fast path
/// when the Gram entries are small enough, falling back to exact big
/// integers otherwise.
fn find_isotropic_div1(l: &Lattice, radius: u32) -> Option<Vec<Int>> {
    use num_traits::ToPrimitive;
    let n = l.rank();
    let small: Option<Vec<Vec<i64>>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let v = &l.gram()[(r, c)];
                    v.to_i64().filter(|x| x.abs() < (1 << 38))
                })
                .collect::<Option<Vec<i64>>>()
        })
        .collect();
    let Some(g) = small else {
        // exact fallback for huge Gram entries
        for t in 1..=radius {
            let mut pred = |c: &[i64]| {
                let coords: Vec<Int> = c.iter().map(|&x| int(x)).collect();
                l.norm_coords(&coords).is_zero()
                    && l.divisibility_coords(&coords).ok() == Some(Int::one())
            };
            if let Some(v) = l1_search_i64(n, t as i64, radius as i64, &mut pred) {
                return Some(v.into_iter().map(int).collect());
            }
        }
        return None;
    };
    for t in 1..=radius {
        let mut pred = |c: &[i64]| {
            // sparse norm evaluation
            let nz: Vec<usize> = (0..n).filter(|&i| c[i] != 0).collect();
            let mut norm = 0i64;
            for &i in &nz {
                for &j in &nz {
                    norm += c[i] * c[j] * g[i][j];
                }
            }
            if norm != 0 {
                return false;
            }
            // divisibility 1: gcd of pairings with the basis
            let mut acc = 0i64;
            for row in g.iter().take(n) {
                let mut p = 0i64;
                for &i in &nz {
                    p += row[i] * c[i];
                }
                acc = gcd_i64(acc, p);
                if acc == 1 {
                    return true;
                }
            }
            acc == 1
        };
        if let Some(v) = l1_search_i64(n, t as i64, radius as i64, &mut pred) {
            return Some(v.into_iter().map(int).collect());
        }
    }
    None
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Split a hyperbolic plane off an even indefinite lattice.
///
/// The search scans a bounded coefficient box (increasing l1 shells) for an
/// isotropic vector of divisibility 1, then completes it to a standard basis
/// via f = f' - (f'^2 / 2) e. Returns `SearchExhausted` when the bounded
/// search finds nothing; callers may widen LATTIKA_SEARCH_RADIUS.
pub fn split_off_u(l: &Lattice) -> Result<USplit> {
    if l.rank() < 2 {
        return Err(Error::Dimension("rank too small to contain U".into()));
    }
    if l.is_definite() {
        return Err(Error::DefiniteLattice);
    }
    let mut radius = search_radius();
    let e = loop {
        if let Some(e) = find_isotropic_div1(l, radius) {
            break e;
        }
        if radius >= SEARCH_RADIUS_CAP {
            return Err(Error::SearchExhausted(format!(
                "no isotropic vector of divisibility 1 within radius {SEARCH_RADIUS_CAP}"
            )));
        }
        radius = (radius * 2).min(SEARCH_RADIUS_CAP);
    };
    // partner with (e, x) = 1
    let ge = mat_vec(l.gram(), &e);
    let m = IntMatrix::from_fn(l.rank(), 1, |r, _| ge[r].clone());
    let f0 = crate::linalg::solve_integer(&m, &[Int::one()])
        .ok_or_else(|| Error::SearchExhausted("no dual partner for isotropic vector".into()))?;
    let nf = l.norm_coords(&f0);
    let half = nf / int(2);
    let f: Vec<Int> = f0.iter().zip(&e).map(|(x, ec)| x.clone() - half.clone() * ec).collect();
    debug_assert!(l.norm_coords(&f).is_zero());
    debug_assert_eq!(l.pair_coords(&e, &f), Int::one());
    let u_sub = Sublattice::new(l, IntMatrix::from_rows(vec![e.clone(), f.clone()]))?;
    let rest = orthogonal_complement(&u_sub)?;
    // internal direct sum: |det l| = |det U| * |det rest|
    if rest.induced_gram().det().abs() != l.det().abs() {
        return Err(Error::InvariantMismatch("U does not split off with index 1".into()));
    }
    Ok(USplit { e, f, u_sub, rest })
}

/// Eichler transvection t(e, a) for isotropic e and a with (e, a) = 0:
///     t(x) = x - (a, x) e + (e, x) a - (a^2 / 2)(e, x) e.
/// The result is verified to preserve the Gram; it fixes e.
pub fn eichler_transvection(l: &Lattice, e: &[Int], a: &[Int]) -> Result<Isometry> {
    if !l.norm_coords(e).is_zero() {
        return Err(Error::Precondition("transvection base must be isotropic".into()));
    }
    if !l.pair_coords(e, a).is_zero() {
        return Err(Error::Precondition("transvection direction must be orthogonal to e".into()));
    }
    let n = l.rank();
    let q_a = l.norm_coords(a) / int(2);
    let ga = mat_vec(l.gram(), a);
    let ge = mat_vec(l.gram(), e);
    let mut m = IntMatrix::identity(n);
    for j in 0..n {
        let alpha = &ga[j]; // (a, eps_j)
        let beta = &ge[j]; // (e, eps_j)
        for i in 0..n {
            let mut v = m[(i, j)].clone();
            v -= alpha.clone() * &e[i];
            v += beta.clone() * &a[i];
            v -= q_a.clone() * beta * &e[i];
            m[(i, j)] = v;
        }
    }
    let iso = Isometry::new(l, m)?;
    debug_assert_eq!(iso.apply_coords(e), e.to_vec());
    Ok(iso)
}

/// Norm, divisibility and discriminant class [v / div] of a primitive vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorInvariants {
    pub norm: Int,
    pub div: Int,
    pub class: Vec<Int>,
}

/// Working data for transport in a lattice with two split hyperbolic planes.
pub struct EichlerContext {
    l: Lattice,
    pub e1: Vec<Int>,
    pub f1: Vec<Int>,
    pub e2: Vec<Int>,
    pub f2: Vec<Int>,
    /// orthogonal complement of the two planes
    pub n_sub: Sublattice,
    disc: LatticeDisc,
}

impl EichlerContext {
    pub fn new(l: &Lattice) -> Result<Self> {
        let s1 = split_off_u(l)?;
        let rest_lat = s1.rest.as_lattice()?;
        let s2 = split_off_u(&rest_lat)?;
        let e2 = s1.rest.lift_coords(&s2.e);
        let f2 = s1.rest.lift_coords(&s2.f);
        let planes = Sublattice::new(
            l,
            IntMatrix::from_rows(vec![s1.e.clone(), s1.f.clone(), e2.clone(), f2.clone()]),
        )?;
        let n_sub = orthogonal_complement(&planes)?;
        let disc = discriminant_form(l)?;
        Ok(EichlerContext { l: l.clone(), e1: s1.e, f1: s1.f, e2, f2, n_sub, disc })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.l
    }

    pub fn disc(&self) -> &LatticeDisc {
        &self.disc
    }

    pub fn invariants(&self, v: &[Int]) -> Result<VectorInvariants> {
        if crate::linalg::content(v) != Int::one() {
            return Err(Error::Precondition("vector is not primitive".into()));
        }
        let norm = self.l.norm_coords(v);
        let div = self.l.divisibility_coords(v)?;
        let class = self.disc.class_of_scaled(v, &div)?;
        Ok(VectorInvariants { norm, div, class })
    }

    /// Canonical block representative of a class: m * lift with the
    /// hyperbolic-plane components stripped off (an element of N).
    fn canonical_block_rep(&self, m: &Int, class: &[Int]) -> Result<Vec<Int>> {
        let lift = self.disc.lift(class);
        let mut c: Vec<Int> = Vec::with_capacity(self.l.rank());
        for x in &lift {
            let scaled = x.clone() * Rat::from(m.clone());
            if !scaled.is_integer() {
                return Err(Error::Precondition("class order does not divide m".into()));
            }
            c.push(scaled.to_integer());
        }
        for (e, f) in [(&self.e1, &self.f1), (&self.e2, &self.f2)] {
            let cf = self.l.pair_coords(&c, e); // coefficient of f
            let ce = self.l.pair_coords(&c, f); // coefficient of e
            for i in 0..c.len() {
                c[i] = c[i].clone() - ce.clone() * &e[i] - cf.clone() * &f[i];
            }
        }
        debug_assert!(self.l.pair_coords(&c, &self.e1).is_zero());
        debug_assert!(self.l.pair_coords(&c, &self.f2).is_zero());
        Ok(c)
    }

    /// The canonical primitive vector with the given invariants:
    ///     v = m e2 + ((norm - c^2) / 2m) f2 + c,  c the canonical block rep.
    /// Errors when the triple is inconsistent (class order must equal m and
    /// q(class) must be norm / m^2 mod 2).
    pub fn canonical_vector(&self, norm: &Int, m: &Int, class: &[Int]) -> Result<Vec<Int>> {
        let form = self.disc.form();
        if form.element_order(class) != *m {
            return Err(Error::InvariantMismatch("class order differs from divisibility".into()));
        }
        let want = mod2(&Rat::new(norm.clone(), m.clone() * m.clone()));
        if form.q(class) != want {
            return Err(Error::InvariantMismatch("q(class) differs from norm / m^2".into()));
        }
        let c = self.canonical_block_rep(m, class)?;
        let c2 = self.l.norm_coords(&c);
        let num = norm.clone() - c2;
        let den = int(2) * m;
        let (beta, rem) = num.div_rem(&den);
        if !rem.is_zero() {
            return Err(Error::InvariantMismatch("triple fails the mod-2m congruence".into()));
        }
        let mut v = c;
        for i in 0..v.len() {
            v[i] = v[i].clone() + m.clone() * &self.e2[i] + beta.clone() * &self.f2[i];
        }
        debug_assert_eq!(self.l.norm_coords(&v), norm.clone());
        Ok(v)
    }

    /// (a, b, p, s) = pairings against (f1, e1, f2, e2), i.e. the
    /// coefficients of e1, f1, e2, f2 in v.
    fn pairings(&self, v: &[Int]) -> (Int, Int, Int, Int) {
        (
            self.l.pair_coords(v, &self.f1),
            self.l.pair_coords(v, &self.e1),
            self.l.pair_coords(v, &self.f2),
            self.l.pair_coords(v, &self.e2),
        )
    }

    /// Transport a primitive vector to the canonical vector of its invariant
    /// triple by an explicit product of Eichler transvections.
    pub fn transport_to_canonical(&self, v: &[Int]) -> Result<(Isometry, VectorInvariants)> {
        let inv = self.invariants(v)?;
        let target = self.canonical_vector(&inv.norm, &inv.div, &inv.class)?;
        let mut cur = v.to_vec();
        let mut acc = Isometry::identity(&self.l);

        macro_rules! apply {
            ($t:expr) => {{
                let t = $t;
                cur = t.apply_coords(&cur);
                acc = t.compose(&acc).expect("same lattice");
            }};
        }

        // Stage 1: make a = (v, f1) nonzero.
        if self.pairings(&cur).0.is_zero() {
            let mut cands: Vec<Vec<Int>> = vec![self.e2.clone(), self.f2.clone()];
            cands.push(self.e2.iter().zip(&self.f2).map(|(x, y)| x.clone() + y).collect());
            for i in 0..self.n_sub.rank() {
                cands.push(self.n_sub.gens().row_vec(i));
            }
            let singles = cands.clone();
            for (i, zi) in singles.iter().enumerate() {
                for zj in singles.iter().skip(i + 1) {
                    cands.push(zi.iter().zip(zj).map(|(x, y)| x.clone() + y).collect());
                }
            }
            let mut done = false;
            for z in &cands {
                let t = eichler_transvection(&self.l, &self.e1, z)?;
                let probe = t.apply_coords(&cur);
                if !self.l.pair_coords(&probe, &self.f1).is_zero() {
                    apply!(t);
                    done = true;
                    break;
                }
            }
            if !done {
                return Err(Error::SearchExhausted(
                    "could not activate the first hyperbolic coefficient".into(),
                ));
            }
        }

        // Stage 2: clear the second plane by Euclid on (a; p, s).
        // t(f2, t f1) shifts s by -t a; t(e2, t f1) shifts p by -t a;
        // t(e2, +-e1) adds +-s to a; t(f2, +-e1) adds +-p to a.
        loop {
            let (a, _, _, _) = self.pairings(&cur);
            assert!(!a.is_zero(), "transport invariant broken");
            let (_, _, _, s) = self.pairings(&cur);
            let t = sym_quot(&s, &a);
            if !t.is_zero() {
                let z: Vec<Int> = self.f1.iter().map(|x| x.clone() * &t).collect();
                apply!(eichler_transvection(&self.l, &self.f2, &z)?);
            }
            let (_, _, p, _) = self.pairings(&cur);
            let t = sym_quot(&p, &a);
            if !t.is_zero() {
                let z: Vec<Int> = self.f1.iter().map(|x| x.clone() * &t).collect();
                apply!(eichler_transvection(&self.l, &self.e2, &z)?);
            }
            let (a, _, p, s) = self.pairings(&cur);
            if p.is_zero() && s.is_zero() {
                break;
            }
            let (base, delta) = if !s.is_zero() { (&self.e2, s) } else { (&self.f2, p) };
            let plus = (a.clone() + &delta).abs();
            let minus = (a.clone() - &delta).abs();
            let z: Vec<Int> = if plus <= minus {
                self.e1.clone()
            } else {
                self.e1.iter().map(|x| -x.clone()).collect()
            };
            apply!(eichler_transvection(&self.l, base, &z)?);
        }

        // Stage 3: load the register: t(e2, f1) sets the e2-coefficient to -a.
        apply!(eichler_transvection(&self.l, &self.e2, &self.f1)?);

        // Stage 4: one transvection t(e2, z*) drives the e2-coefficient to m,
        // with (z*, v) = p - m realized by a Bezout combination of pairings
        // against e1, f1 and the block basis.
        {
            let (_, _, p, s) = self.pairings(&cur);
            debug_assert!(s.is_zero());
            let mut basis: Vec<Vec<Int>> = vec![self.e1.clone(), self.f1.clone()];
            for i in 0..self.n_sub.rank() {
                basis.push(self.n_sub.gens().row_vec(i));
            }
            let values: Vec<Int> = basis.iter().map(|z| self.l.pair_coords(z, &cur)).collect();
            let tgt = p - &inv.div;
            let coeffs = bezout_combination(&values, &tgt).ok_or_else(|| {
                Error::InvariantMismatch("divisibility does not divide the register target".into())
            })?;
            let mut z = vec![Int::zero(); self.l.rank()];
            for (c, zb) in coeffs.iter().zip(&basis) {
                if c.is_zero() {
                    continue;
                }
                for i in 0..z.len() {
                    z[i] += c.clone() * &zb[i];
                }
            }
            apply!(eichler_transvection(&self.l, &self.e2, &z)?);
            debug_assert_eq!(self.l.pair_coords(&cur, &self.f2), inv.div.clone());
        }

        // Stage 5: a final transvection based at f2 clears the first plane
        // and moves the block part onto the canonical representative.
        {
            let (a, b, _, _) = self.pairings(&cur);
            let m = &inv.div;
            // block part: cur - a e1 - b f1 - m e2
            let mut nblock = cur.clone();
            for i in 0..nblock.len() {
                nblock[i] = nblock[i].clone()
                    - a.clone() * &self.e1[i]
                    - b.clone() * &self.f1[i]
                    - m.clone() * &self.e2[i];
            }
            let c = self.canonical_block_rep(m, &inv.class)?;
            let mut z = vec![Int::zero(); self.l.rank()];
            for i in 0..z.len() {
                let diff = nblock[i].clone() - &c[i];
                let (u, r1) = diff.div_rem(m);
                let (qa, r2) = a.clone().div_rem(m);
                let (qb, r3) = b.clone().div_rem(m);
                if !r1.is_zero() || !r2.is_zero() || !r3.is_zero() {
                    return Err(Error::InvariantMismatch(
                        "divisibility does not divide the residual coefficients".into(),
                    ));
                }
                z[i] = -(qa * &self.e1[i]) - qb * &self.f1[i] - u;
            }
            apply!(eichler_transvection(&self.l, &self.f2, &z)?);
        }

        if cur != target {
            return Err(Error::InvariantMismatch(
                "transport did not reach the canonical vector (internal)".into(),
            ));
        }
        debug_assert_eq!(acc.apply_coords(v), target);
        Ok((acc, inv))
    }
}

/// Nearest-integer quotient: |s - t a| <= |a| / 2, ties toward the floor.
fn sym_quot(s: &Int, a: &Int) -> Int {
    let (q, r) = s.div_mod_floor(a); // 0 <= r < |a| for a > 0
    let r2 = r.clone() * int(2);
    if r2.abs() > a.abs() {
        q + Int::one()
    } else {
        q
    }
}

/// Integer coefficients c with sum c_i values_i = target, when gcd(values)
/// divides target.
fn bezout_combination(values: &[Int], target: &Int) -> Option<Vec<Int>> {
    let mut g = Int::zero();
    let mut coeffs: Vec<Int> = vec![Int::zero(); values.len()];
    for (i, v) in values.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        if g.is_zero() {
            g = v.abs();
            coeffs[i] = if v.is_negative() { -Int::one() } else { Int::one() };
            continue;
        }
        let e = g.extended_gcd(v);
        for c in coeffs.iter_mut() {
            *c *= &e.x;
        }
        coeffs[i] = e.y.clone();
        g = e.gcd;
    }
    if g.is_zero() {
        return if target.is_zero() { Some(coeffs) } else { None };
    }
    let (q, r) = target.div_rem(&g);
    if !r.is_zero() {
        return None;
    }
    for c in coeffs.iter_mut() {
        *c *= &q;
    }
    Some(coeffs)
}

/// Explicit isometry g with g(v) = w for primitive vectors with equal
/// (norm, divisibility, discriminant class), built as a product of Eichler
/// transvections through the canonical form. Reports which invariant differs
/// otherwise.
pub fn eichler_map(ctx: &EichlerContext, v: &[Int], w: &[Int]) -> Result<Isometry> {
    let iv = ctx.invariants(v)?;
    let iw = ctx.invariants(w)?;
    if iv.norm != iw.norm {
        return Err(Error::InvariantMismatch(format!("norms differ: {} vs {}", iv.norm, iw.norm)));
    }
    if iv.div != iw.div {
        return Err(Error::InvariantMismatch(format!(
            "divisibilities differ: {} vs {}",
            iv.div, iw.div
        )));
    }
    if iv.class != iw.class {
        return Err(Error::InvariantMismatch("discriminant classes differ".into()));
    }
    let (sv, _) = ctx.transport_to_canonical(v)?;
    let (sw, _) = ctx.transport_to_canonical(w)?;
    let g = sw.inverse().compose(&sv)?;
    if g.apply_coords(v) != w.to_vec() {
        return Err(Error::InvariantMismatch("transport composition failed (internal)".into()));
    }
    Ok(g)
}

/// Orbit of primitive vectors under the full isometry group, described by
/// (norm, divisibility, canonical discriminant class) together with every
/// class merged into the orbit and an explicit witness vector.
#[derive(Clone, Debug)]
pub struct OrbitDescriptor {
    pub norm: Int,
    pub div: Int,
    pub class_rep: Vec<Int>,
    pub members: Vec<Vec<Int>>,
    pub witness: Vec<Int>,
    pub merge_audit: Vec<String>,
}

/// Complete list of orbits of primitive vectors of the given norm in a
/// 2-elementary lattice with two split hyperbolic planes. Within a fixed
/// divisibility, class orbits are merged by certified discriminant
/// transvections, and remaining representatives are merged by explicit
/// complement isometries whenever span(v) + v-perp is the whole lattice.
pub fn classify_primitive_vectors(
    ctx: &EichlerContext,
    norm: &Int,
) -> Result<Vec<OrbitDescriptor>> {
    let form = ctx.disc().form();
    if !form.is_two_elementary() {
        return Err(Error::GuardExceeded(
            "classification requires a 2-elementary discriminant".into(),
        ));
    }
    let mut out = Vec::new();
    let mut ms = vec![Int::one()];
    if form.exponent() == int(2) {
        ms.push(int(2));
    }
    for m in ms {
        let want = mod2(&Rat::new(norm.clone(), m.clone() * m.clone()));
        let classes: Vec<Vec<Int>> = form
            .elements()?
            .into_iter()
            .filter(|e| form.element_order(e) == m && form.q(e) == want)
            .collect();
        if classes.is_empty() {
            continue;
        }
        let (orbits, audit) = tau_orbits(ctx, &classes)?;
        let mergeable = norm.abs() == m;
        let mut merged: Vec<(Vec<Vec<Int>>, Vec<String>)> =
            orbits.into_iter().map(|o| (o, audit.clone())).collect();
        if mergeable && merged.len() > 1 {
            let mut base = merged.remove(0);
            let mut rest = Vec::new();
            for (orbit, mut aud) in merged {
                let v1 = ctx.canonical_vector(norm, &m, &base.0[0])?;
                let v2 = ctx.canonical_vector(norm, &m, &orbit[0])?;
                match merge_via_complement(ctx.lattice(), &v1, &v2)? {
                    Some(_) => {
                        aud.push(format!(
                            "merged {} classes via an explicit complement isometry",
                            orbit.len()
                        ));
                        base.0.extend(orbit);
                        base.1.extend(aud);
                    }
                    None => rest.push((orbit, aud)),
                }
            }
            merged = std::iter::once(base).chain(rest).collect();
        }
        for (mut orbit, aud) in merged {
            orbit.sort();
            let rep = orbit[0].clone();
            let witness = ctx.canonical_vector(norm, &m, &rep)?;
            out.push(OrbitDescriptor {
                norm: norm.clone(),
                div: m.clone(),
                class_rep: rep,
                members: orbit,
                witness,
                merge_audit: aud,
            });
        }
    }
    out.sort_by(|a, b| {
        (a.div.clone(), a.class_rep.clone()).cmp(&(b.div.clone(), b.class_rep.clone()))
    });
    Ok(out)
}

/// Orbit partition of classes under tau_a: x -> x + 2 b(x, a) a for a with
/// q(a) = 1. A sample of the transvections is certified by lifting them to
/// reflections in divisibility-2 vectors of norm -4.
fn tau_orbits(
    ctx: &EichlerContext,
    classes: &[Vec<Int>],
) -> Result<(Vec<Vec<Vec<Int>>>, Vec<String>)> {
    let form = ctx.disc().form();
    let one = Rat::from(int(1));
    let gens: Vec<Vec<Int>> =
        form.elements()?.into_iter().filter(|a| form.q(a) == one).collect();
    let mut audit = Vec::new();
    let mut certified = 0usize;
    for a in gens.iter().take(3) {
        let r = ctx.canonical_vector(&int(-4), &int(2), a)?;
        let refl = reflection_in_div2_vector(ctx.lattice(), &r)?;
        let act = crate::invol::induced_discriminant_action(&refl, ctx.disc())?;
        for (i, img) in act.images.iter().enumerate() {
            let mut gi = form.zero_element();
            gi[i] = Int::one();
            if *img != crate::disc::tau_apply(form, a, &gi) {
                return Err(Error::InvariantMismatch(
                    "reflection does not induce the discriminant transvection".into(),
                ));
            }
        }
        certified += 1;
    }
    if certified > 0 {
        audit.push(format!(
            "discriminant transvections certified by {certified} explicit norm -4 reflections"
        ));
    }
    let orbits = crate::disc::tau_orbit_partition(form, classes)?;
    Ok((orbits, audit))
}

/// Reflection x -> x - (2 (x, r) / r^2) r for a norm +-4 vector of
/// divisibility 2 (integral exactly because of the divisibility).
fn reflection_in_div2_vector(l: &Lattice, r: &[Int]) -> Result<Isometry> {
    let r2 = l.norm_coords(r);
    if r2.abs() != int(4) {
        return Err(Error::Precondition("reflection vector must have norm +-4".into()));
    }
    if l.divisibility_coords(r)? != int(2) {
        return Err(Error::Precondition("reflection vector must have divisibility 2".into()));
    }
    let n = l.rank();
    let gr = mat_vec(l.gram(), r);
    let mut m = IntMatrix::identity(n);
    for j in 0..n {
        let num = int(2) * &gr[j];
        let (q, rem) = num.div_rem(&r2);
        if !rem.is_zero() {
            return Err(Error::Precondition("reflection is not integral".into()));
        }
        for i in 0..n {
            let t = q.clone() * &r[i];
            m[(i, j)] -= t;
        }
    }
    Isometry::new(l, m)
}

/// Explicit isometry of `l` mapping v1 to v2, available when
/// span(v) + v-perp = l on both sides (|norm| = divisibility): the
/// complements are matched through hyperbolic splits plus a definite
/// isometry search and glued along v1 -> v2.
pub fn merge_via_complement(l: &Lattice, v1: &[Int], v2: &[Int]) -> Result<Option<Isometry>> {
    let s1 = Sublattice::new(l, IntMatrix::from_rows(vec![v1.to_vec()]))?;
    let s2 = Sublattice::new(l, IntMatrix::from_rows(vec![v2.to_vec()]))?;
    let k1 = orthogonal_complement(&s1)?;
    let k2 = orthogonal_complement(&s2)?;
    let Some(w) = chain_isometry(&k1.as_lattice()?, &k2.as_lattice()?)? else {
        return Ok(None);
    };
    let b1 = IntMatrix::from_rows(
        std::iter::once(v1.to_vec()).chain(k1.gens().rows_vec()).collect(),
    );
    let mut rows2 = vec![v2.to_vec()];
    for i in 0..k1.rank() {
        let col = (0..k1.rank()).map(|r| w[(r, i)].clone()).collect::<Vec<_>>();
        rows2.push(k2.lift_coords(&col));
    }
    let b2 = IntMatrix::from_rows(rows2);
    if b1.det().abs() != Int::one() || b2.det().abs() != Int::one() {
        return Ok(None);
    }
    let b1t_inv = b1.transpose().to_rat().inverse().ok_or(Error::Degenerate)?;
    let p = b2.transpose().to_rat().mul(&b1t_inv).to_int().ok_or(Error::Degenerate)?;
    let iso = Isometry::new(l, p)?;
    if iso.apply_coords(v1) != v2.to_vec() {
        return Err(Error::InvariantMismatch("complement merge failed (internal)".into()));
    }
    Ok(Some(iso))
}

/// Witness for an isometry between two even lattices of equal rank, found by
/// stripping hyperbolic planes until both sides are definite and then
/// backtracking. Columns map a's basis into b-coordinates.
pub fn chain_isometry(a: &Lattice, b: &Lattice) -> Result<Option<IntMatrix>> {
    if a.rank() != b.rank() || a.det() != b.det() {
        return Ok(None);
    }
    if a.is_definite() || a.rank() == 0 {
        if !b.is_definite() && b.rank() > 0 {
            return Ok(None);
        }
        return is_isometric_definite(a, b);
    }
    if b.is_definite() {
        return Ok(None);
    }
    let sa = split_off_u(a)?;
    let sb = split_off_u(b)?;
    let ra = sa.rest.as_lattice()?;
    let rb = sb.rest.as_lattice()?;
    let Some(w) = chain_isometry(&ra, &rb)? else {
        return Ok(None);
    };
    let basis_a = IntMatrix::from_rows(
        [sa.e.clone(), sa.f.clone()].into_iter().chain(sa.rest.gens().rows_vec()).collect(),
    );
    let mut rows_b = vec![sb.e.clone(), sb.f.clone()];
    for i in 0..ra.rank() {
        let col = (0..ra.rank()).map(|r| w[(r, i)].clone()).collect::<Vec<_>>();
        rows_b.push(sb.rest.lift_coords(&col));
    }
    let basis_b = IntMatrix::from_rows(rows_b);
    if basis_a.det().abs() != Int::one() || basis_b.det().abs() != Int::one() {
        return Ok(None);
    }
    let ba_inv = basis_a.transpose().to_rat().inverse().ok_or(Error::Degenerate)?;
    let p = basis_b.transpose().to_rat().mul(&ba_inv).to_int().ok_or(Error::Degenerate)?;
    if p.transpose().mul(b.gram()).mul(&p) != *a.gram() {
        return Err(Error::InvariantMismatch("chain isometry failed the Gram check".into()));
    }
    Ok(Some(p))
}

/// True when some element of the form has q = 1/2 or 3/2.
pub fn halfness_check(fqf: &FiniteQuadraticForm) -> Result<bool> {
    let half = Rat::new(Int::one(), int(2));
    let three_half = Rat::new(int(3), int(2));
    Ok(fqf.elements()?.iter().any(|e| {
        let q = fqf.q(e);
        q == half || q == three_half
    }))
}

/// Nikulin quintuple data for a primitive embedding of s into n.
#[derive(Clone, Debug)]
pub struct EmbeddingData {
    pub h_s: Subgroup,
    pub h_n: Subgroup,
    /// graph of gamma on the generator of H_S (empty for trivial H_S)
    pub gamma: Vec<(Vec<Int>, Vec<Int>)>,
    pub k_signature: (usize, usize),
    /// target discriminant form of the complement (-delta)
    pub k_form: FiniteQuadraticForm,
    /// Gram matrix when the complement is realizable by named block sums
    pub k_gram: Option<IntMatrix>,
    /// whether a full backtracking witness confirmed the realization
    /// (complete-invariant agreement otherwise)
    pub k_witnessed: bool,
}

/// Equivalence classes of primitive-embedding quintuples of `s` into `n`.
/// Implemented for cyclic discriminant on the embedded side (in particular
/// all rank-one embeddings); guarded otherwise.
pub fn enumerate_primitive_embeddings(s: &Lattice, n: &Lattice) -> Result<Vec<EmbeddingData>> {
    let ds = discriminant_form(s)?;
    let dn = discriminant_form(n)?;
    if ds.form().order() > int(1 << 8) || dn.form().order() > int(1 << 10) {
        return Err(Error::GuardExceeded("discriminant group too large".into()));
    }
    if ds.form().min_generators() > 1 {
        return Err(Error::GuardExceeded(
            "embedding enumeration is implemented for cyclic A_S only".into(),
        ));
    }
    if s.rank() > n.rank() {
        return Err(Error::Precondition("embedded lattice rank exceeds ambient".into()));
    }
    let (s_pos, s_neg) = s.signature();
    let (n_pos, n_neg) = n.signature();
    if s_pos > n_pos || s_neg > n_neg {
        return Err(Error::Precondition("signature does not fit".into()));
    }
    let k_sig = (n_pos - s_pos, n_neg - s_neg);

    // subgroups of a cyclic A_S: one per divisor of its order
    let mut h_s_list: Vec<Vec<Vec<Int>>> = vec![vec![]];
    if !ds.form().is_trivial() {
        let d = ds.form().orders()[0].clone();
        let mut k = int(2);
        while k <= d {
            if d.is_multiple_of(&k) {
                h_s_list.push(vec![vec![d.clone() / &k]]);
            }
            k += 1;
        }
    }

    let mut out: Vec<EmbeddingData> = Vec::new();
    for h_s_gens in h_s_list {
        let h_s = Subgroup::generated(ds.form(), &h_s_gens);
        let mut images: Vec<Option<Vec<Int>>> = Vec::new();
        if h_s.order() == 1 {
            images.push(None);
        } else {
            let g = &h_s_gens[0];
            let (qg, og) = (ds.form().q(g), ds.form().element_order(g));
            let candidates: Vec<Vec<Int>> = dn
                .form()
                .elements()?
                .into_iter()
                .filter(|y| dn.form().element_order(y) == og && dn.form().q(y) == qg)
                .collect();
            // orbit-reduce: cheap transvection partition first, then merge
            // the few representatives with pinned automorphism searches
            let coarse = if dn.form().is_two_elementary() {
                crate::disc::tau_orbit_partition(dn.form(), &candidates)?
            } else {
                candidates.iter().map(|c| vec![c.clone()]).collect()
            };
            let mut reps: Vec<Vec<Int>> = Vec::new();
            'outer: for orbit in &coarse {
                let y = &orbit[0];
                for r in &reps {
                    if let IsometryAnswer::Yes(_) =
                        crate::disc::fqf_isometry_with_pin(dn.form(), dn.form(), Some((y, r)))
                    {
                        continue 'outer;
                    }
                }
                reps.push(y.clone());
            }
            images.extend(reps.into_iter().map(Some));
        }
        for image in images {
            let d_big = FiniteQuadraticForm::direct_sum(ds.form(), &dn.form().negated());
            let ks = ds.form().orders().len();
            let kn = dn.form().orders().len();
            let mut gamma_gens: Vec<Vec<Int>> = Vec::new();
            let mut gamma_graph = Vec::new();
            if let Some(y) = &image {
                let mut g = vec![Int::zero(); ks + kn];
                g[..ks].clone_from_slice(&h_s_gens[0]);
                g[ks..].clone_from_slice(y);
                gamma_gens.push(g);
                gamma_graph.push((h_s_gens[0].clone(), y.clone()));
            }
            if gamma_gens.iter().any(|g| !d_big.q(g).is_zero()) {
                continue;
            }
            let mut perp: Vec<Vec<Int>> = Vec::new();
            for e in d_big.elements()? {
                if gamma_gens.iter().all(|g| d_big.b(&e, g).is_zero()) {
                    perp.push(e);
                }
            }
            let perp_gens = generating_subset(&d_big, &perp);
            let (delta, _) = subquotient_form(&d_big, &perp_gens, &gamma_gens)?;
            let k_form = delta.negated();
            if k_sig.0 + k_sig.1 < k_form.min_generators() {
                continue;
            }
            let h_n = if let Some(y) = &image {
                Subgroup::generated(dn.form(), std::slice::from_ref(y))
            } else {
                Subgroup::trivial(dn.form())
            };
            let (k_gram, k_witnessed) = realize_by_blocks(k_sig, &k_form)?;
            out.push(EmbeddingData {
                h_s: h_s.clone(),
                h_n,
                gamma: gamma_graph,
                k_signature: k_sig,
                k_form,
                k_gram,
                k_witnessed,
            });
        }
    }
    Ok(out)
}

/// Greedy generating subset of a list of elements.
fn generating_subset(form: &FiniteQuadraticForm, elems: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let mut gens: Vec<Vec<Int>> = Vec::new();
    let mut span = Subgroup::trivial(form);
    for e in elems {
        if !span.contains(e) {
            gens.push(e.clone());
            span = Subgroup::generated(form, &gens);
        }
    }
    gens
}

/// Try to realize (signature, discriminant form) by an orthogonal sum of
/// U, E8(-1), E8(-2), (2) and (-2) blocks.
fn realize_by_blocks(
    sig: (usize, usize),
    target: &FiniteQuadraticForm,
) -> Result<(Option<IntMatrix>, bool)> {
    let (pos, neg) = sig;
    let rank = pos + neg;
    let target_inv =
        if target.order() <= int(1 << 16) { Some(fqf_invariants(target)?) } else { None };
    for a in 0..=pos.min(neg) {
        let e_count = pos - a;
        for b in 0..=(neg.saturating_sub(a)) / 8 {
            for c in 0..=(neg.saturating_sub(a + 8 * b)) / 8 {
                let d_count = neg - a - 8 * b - 8 * c;
                if 2 * a + 8 * b + 8 * c + d_count + e_count != rank {
                    continue;
                }
                let mut parts: Vec<Lattice> = Vec::new();
                parts.extend(std::iter::repeat_with(make_u).take(a));
                for _ in 0..b {
                    parts.push(make_e8(-1)?);
                }
                for _ in 0..c {
                    parts.push(make_e8(-2)?);
                }
                for _ in 0..d_count {
                    parts.push(make_rank_one(&int(-2))?);
                }
                for _ in 0..e_count {
                    parts.push(make_rank_one(&int(2))?);
                }
                let cand = direct_sum(&parts);
                if cand.rank() != rank {
                    continue;
                }
                if rank > 0 && cand.signature() != sig {
                    continue;
                }
                let cd = discriminant_form(&cand)?;
                if cd.form().orders() != target.orders() {
                    continue;
                }
                match fqf_isometry_exists(cd.form(), target) {
                    IsometryAnswer::Yes(_) => return Ok((Some(cand.gram().clone()), true)),
                    IsometryAnswer::Unknown => {
                        if let (Some(ti), Ok(ci)) = (&target_inv, fqf_invariants(cd.form())) {
                            if *ti == ci {
                                return Ok((Some(cand.gram().clone()), false));
                            }
                        }
                    }
                    IsometryAnswer::No(_) => {}
                }
            }
        }
    }
    Ok((None, false))
}

/// Result of extending an isometry of L to the even unimodular overlattice
/// of L + (2) glued along the diagonal isotropic class.
#[derive(Clone, Debug)]
pub struct LambdaExtension {
    pub lambda: Lattice,
    /// L embedded in the overlattice
    pub emb: Sublattice,
    pub g_bar: Isometry,
}

/// Embed L into an even unimodular lattice of signature (4, 20) and extend
/// g in O(L) by the identity on the rank-one (2) factor. This works for
/// every g because the discriminant action on A_L = Z/2 is always trivial.
pub fn extend_isometry_l_to_lambda(g: &Isometry) -> Result<LambdaExtension> {
    let l = g.home().clone();
    if l != crate::lattice::lattice_l() {
        return Err(Error::Precondition("extension is defined over the lattice L".into()));
    }
    let p2 = make_rank_one(&int(2))?;
    let big = direct_sum(&[l.clone(), p2]);
    let disc = discriminant_form(&big)?;
    // diagonal class: project (v + x) / 2
    let mut half = vec![Rat::zero(); 24];
    half[crate::lattice::L_MINUS2_INDEX] = Rat::new(Int::one(), int(2));
    half[23] = Rat::new(Int::one(), int(2));
    let h = disc.project(&half)?;
    let glued = crate::disc::overlattice_from_isotropic(&big, std::slice::from_ref(&h))?;
    let lambda = glued.lattice.with_label("Lambda^");
    let n = 24usize;
    let dmat = RatMatrix::from_fn(n, n, |r, c| {
        if r < 23 && c < 23 {
            Rat::from(g.matrix()[(r, c)].clone())
        } else if r == 23 && c == 23 {
            Rat::one()
        } else {
            Rat::zero()
        }
    });
    // column conversion: x_old = B^T y  =>  P = (B^T)^(-1) D B^T
    let btr = transpose_rat(&glued.basis_in_old);
    let btr_inv = btr.inverse().ok_or(Error::Degenerate)?;
    let p = btr_inv.mul(&dmat).mul(&btr);
    let p_int = p.to_int().ok_or(Error::NotAnIsometry)?;
    let g_bar = Isometry::new(&lambda, p_int)?;
    let emb = Sublattice::new(&lambda, glued.inclusion.gens().select_rows(&(0..23).collect::<Vec<_>>()))?;
    // restriction check: g_bar on the embedded L equals g
    for i in 0..23 {
        let img = g_bar.apply_coords(&emb.gens().row_vec(i));
        let mut expect = vec![Int::zero(); 24];
        for j in 0..23 {
            let coef = g.matrix()[(j, i)].clone();
            if coef.is_zero() {
                continue;
            }
            for c in 0..24 {
                expect[c] += coef.clone() * &emb.gens()[(j, c)];
            }
        }
        if img != expect {
            return Err(Error::InvariantMismatch("extension does not restrict to g".into()));
        }
    }
    Ok(LambdaExtension { lambda, emb, g_bar })
}

fn transpose_rat(m: &RatMatrix) -> RatMatrix {
    RatMatrix::from_fn(m.cols, m.rows, |r, c| m[(c, r)].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{lattice_m, M_T_INDEX};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn split_u_itself() {
        let u = make_u();
        let s = split_off_u(&u).unwrap();
        assert_eq!(s.rest.rank(), 0);
        assert_eq!(u.pair_coords(&s.e, &s.f), int(1));
    }

    #[test]
    fn split_rejects_definite() {
        assert!(matches!(split_off_u(&make_e8(-2).unwrap()), Err(Error::DefiniteLattice)));
    }

    #[test]
    fn split_t_swap_three_times() {
        // invariant lattice of the block swap: signature (3,12); three splits
        // leave a rank-9 negative definite rest
        let g = crate::invol::standard_swap_involution_l();
        let t = crate::invol::invariant_lattice(&g);
        let mut cur = t.as_lattice().unwrap();
        let mut sig = cur.signature();
        assert_eq!(sig, (3, 12));
        for _ in 0..3 {
            let s = split_off_u(&cur).unwrap();
            cur = s.rest.as_lattice().unwrap();
            let next = cur.signature();
            assert_eq!(next, (sig.0 - 1, sig.1 - 1));
            sig = next;
        }
        assert_eq!(sig, (0, 9));
        assert!(cur.is_negative_definite());
    }

    #[test]
    fn transvection_basics() {
        let uu = direct_sum(&[make_u(), make_u()]);
        let e1 = vec![int(1), int(0), int(0), int(0)];
        let e2 = vec![int(0), int(0), int(1), int(0)];
        // a = 0 gives the identity
        let t = eichler_transvection(&uu, &e1, &[int(0), int(0), int(0), int(0)]).unwrap();
        assert!(t.is_identity());
        let t = eichler_transvection(&uu, &e1, &e2).unwrap();
        assert!(!t.is_identity());
        // double application with a and -a is the identity
        let tinv = eichler_transvection(&uu, &e1, &[int(0), int(0), int(-1), int(0)]).unwrap();
        assert!(t.compose(&tinv).unwrap().is_identity());
        // composition rule t(e,a) t(e,b) = t(e,a+b)
        let f2 = vec![int(0), int(0), int(0), int(1)];
        let ta = eichler_transvection(&uu, &e1, &e2).unwrap();
        let tb = eichler_transvection(&uu, &e1, &f2).unwrap();
        let sum: Vec<Int> = e2.iter().zip(&f2).map(|(a, b)| a.clone() + b).collect();
        let tab = eichler_transvection(&uu, &e1, &sum).unwrap();
        assert_eq!(ta.compose(&tb).unwrap(), tab);
        // preconditions: (e, a) must vanish and e must be isotropic
        let f1 = vec![int(0), int(1), int(0), int(0)];
        assert!(eichler_transvection(&uu, &e1, &f1).is_err());
        let nonisotropic = vec![int(1), int(1), int(0), int(0)];
        assert!(eichler_transvection(&uu, &nonisotropic, &e2).is_err());
    }

    #[test]
    fn eichler_map_examples_in_m() {
        let m = lattice_m();
        let ctx = EichlerContext::new(&m).unwrap();
        // identity on equal inputs
        let e1 = m.basis_vector(8).coords;
        let g = eichler_map(&ctx, &e1, &e1).unwrap();
        assert!(g.is_identity());
        // e1 -> f1: both isotropic, divisibility 1, class 0
        let f1 = m.basis_vector(9).coords;
        let g = eichler_map(&ctx, &e1, &f1).unwrap();
        assert_eq!(g.apply_coords(&e1), f1);
        // e1 - f1 -> e2 - f2 (norm -2, div 1)
        let v: Vec<Int> = (0..15)
            .map(|i| if i == 8 { int(1) } else if i == 9 { int(-1) } else { int(0) })
            .collect();
        let w: Vec<Int> = (0..15)
            .map(|i| if i == 10 { int(1) } else if i == 11 { int(-1) } else { int(0) })
            .collect();
        let g = eichler_map(&ctx, &v, &w).unwrap();
        assert_eq!(g.apply_coords(&v), w);
    }

    #[test]
    fn eichler_map_detects_mismatch() {
        let m = lattice_m();
        let ctx = EichlerContext::new(&m).unwrap();
        let e1 = m.basis_vector(8).coords;
        let v: Vec<Int> = (0..15)
            .map(|i| if i == 8 { int(1) } else if i == 9 { int(-1) } else { int(0) })
            .collect();
        match eichler_map(&ctx, &e1, &v) {
            Err(Error::InvariantMismatch(msg)) => assert!(msg.contains("norm")),
            other => panic!("expected norm mismatch, got {other:?}"),
        }
    }

    #[test]
    fn random_transports() {
        let m = lattice_m();
        let ctx = EichlerContext::new(&m).unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..12 {
            let mut v: Vec<Int> = (0..15).map(|_| int(rng.gen_range(-3..=3))).collect();
            let c = crate::linalg::content(&v);
            if c.is_zero() {
                continue;
            }
            if c > Int::one() {
                v = v.iter().map(|x| x / &c).collect();
            }
            let (iso, inv) = ctx.transport_to_canonical(&v).unwrap();
            let img = iso.apply_coords(&v);
            let target = ctx.canonical_vector(&inv.norm, &inv.div, &inv.class).unwrap();
            assert_eq!(img, target);
        }
    }

    #[test]
    fn classify_m_norm_minus_two() {
        let m = lattice_m();
        let ctx = EichlerContext::new(&m).unwrap();
        let orbits = classify_primitive_vectors(&ctx, &int(-2)).unwrap();
        let div1: Vec<_> = orbits.iter().filter(|o| o.div == int(1)).collect();
        let div2: Vec<_> = orbits.iter().filter(|o| o.div == int(2)).collect();
        assert_eq!(div1.len(), 1, "one divisibility-1 orbit");
        assert_eq!(div2.len(), 1, "exactly one divisibility-2 orbit");
        // the div-2 orbit pools all 136 classes of q = 3/2
        assert_eq!(div2[0].members.len(), 136);
        // [t/2] is among them and the witness is an honest div-2 root
        let mut t = vec![int(0); 15];
        t[M_T_INDEX] = int(1);
        let t_class = ctx.disc().class_of_scaled(&t, &int(2)).unwrap();
        assert!(div2[0].members.contains(&t_class));
        let w = &div2[0].witness;
        assert_eq!(m.norm_coords(w), int(-2));
        assert_eq!(m.divisibility_coords(w).unwrap(), int(2));
    }

    #[test]
    fn classify_l_norm_minus_two() {
        let l = crate::lattice::lattice_l();
        let ctx = EichlerContext::new(&l).unwrap();
        let orbits = classify_primitive_vectors(&ctx, &int(-2)).unwrap();
        let div2: Vec<_> = orbits.iter().filter(|o| o.div == int(2)).collect();
        assert_eq!(div2.len(), 1);
        assert_eq!(div2[0].members.len(), 1);
    }

    #[test]
    fn halfness_examples() {
        assert!(!halfness_check(&FiniteQuadraticForm::trivial()).unwrap());
        let e = discriminant_form(&make_e8(-2).unwrap()).unwrap();
        assert!(!halfness_check(e.form()).unwrap());
        let p2 = discriminant_form(&make_rank_one(&int(2)).unwrap()).unwrap();
        assert!(halfness_check(p2.form()).unwrap());
    }

    #[test]
    fn lambda_extension_identity_and_swap() {
        let l = crate::lattice::lattice_l();
        let id = Isometry::identity(&l);
        let ext = extend_isometry_l_to_lambda(&id).unwrap();
        assert!(ext.g_bar.is_identity());
        assert_eq!(ext.lambda.rank(), 24);
        assert_eq!(ext.lambda.det().abs(), int(1));
        assert_eq!(ext.lambda.signature(), (4, 20));

        // -Id extends as well: it acts trivially on A_L
        let neg = Isometry::new(&l, IntMatrix::identity(23).neg()).unwrap();
        let ext = extend_isometry_l_to_lambda(&neg).unwrap();
        assert!(!ext.g_bar.is_identity());

        // extension is multiplicative on the swap
        let g = crate::invol::standard_swap_involution_l();
        let eg = extend_isometry_l_to_lambda(&g).unwrap();
        let gg = g.compose(&g).unwrap();
        let egg = extend_isometry_l_to_lambda(&gg).unwrap();
        assert_eq!(eg.g_bar.compose(&eg.g_bar).unwrap(), egg.g_bar);
    }

    #[test]
    fn embeddings_of_minus_two_into_l() {
        let m2 = make_rank_one(&int(-2)).unwrap();
        let l = crate::lattice::lattice_l();
        let embs = enumerate_primitive_embeddings(&m2, &l).unwrap();
        // trivial H_S plus the 2-divisible quintuple with H_S = A_S
        assert_eq!(embs.len(), 2);
        let full: Vec<_> = embs.iter().filter(|e| e.h_s.order() == 2).collect();
        assert_eq!(full.len(), 1);
        assert!(full[0].k_form.is_trivial());
        assert_eq!(full[0].k_signature, (3, 19));
        // complement realized: U^3 + E8(-1)^2
        let kg = full[0].k_gram.as_ref().unwrap();
        assert_eq!(kg.rows, 22);
        assert_eq!(kg.det().abs(), int(1));
    }

    #[test]
    fn embeddings_of_minus_two_into_m_trivial_glue() {
        let m2 = make_rank_one(&int(-2)).unwrap();
        let m = lattice_m();
        let embs = enumerate_primitive_embeddings(&m2, &m).unwrap();
        let trivial: Vec<_> = embs.iter().filter(|e| e.h_s.order() == 1).collect();
        assert_eq!(trivial.len(), 1);
        let k = &trivial[0];
        assert_eq!(k.k_signature, (3, 11));
        // K target: U^2 + E8(-2) + (2) + (-2)
        let kg = k.k_gram.as_ref().expect("realizable by blocks");
        assert_eq!(kg.rows, 14);
        let expect = direct_sum(&[
            make_u(),
            make_u(),
            make_e8(-2).unwrap(),
            make_rank_one(&int(2)).unwrap(),
            make_rank_one(&int(-2)).unwrap(),
        ]);
        assert_eq!(kg.det(), expect.gram().det());
        // halfness holds for this complement
        let kd = discriminant_form(&Lattice::new(kg.clone(), None).unwrap()).unwrap();
        assert!(halfness_check(kd.form()).unwrap());
    }

    #[test]
    fn unimodular_self_embedding() {
        let u = make_u();
        let embs = enumerate_primitive_embeddings(&u, &u).unwrap();
        assert_eq!(embs.len(), 1);
        assert_eq!(embs[0].k_signature, (0, 0));
        assert!(embs[0].k_form.is_trivial());
    }
}
