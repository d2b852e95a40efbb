//! Stationary inductive systems `G → G → G → ⋯` and their direct limits.

pub mod descriptor;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use descriptor::{prime_factors, LimitDescriptor, Summand};

use crate::abgroups::{AbHom, FgAbGroup, Subquotient};
use crate::error::{Error, Result};
use crate::intlinalg::{charpoly, is_unimodular, kernel_basis, poly_at_matrix, solve, IntMatrix};

/// A group with an endomorphism, written on canonical generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InductiveSystem {
    pub group: FgAbGroup,
    pub endo: IntMatrix,
}

impl InductiveSystem {
    pub fn new(group: FgAbGroup, endo: IntMatrix) -> Result<Self> {
        let h = AbHom::new(group.clone(), group, endo)?;
        Ok(InductiveSystem { group: h.domain, endo: h.matrix })
    }

    /// `(Z^n, m)`.
    pub fn free(m: IntMatrix) -> Self {
        assert!(m.is_square());
        InductiveSystem { group: FgAbGroup::free(m.rows()), endo: m }
    }

    /// The system on a subquotient induced by an ambient endomorphism.
    pub fn on_subquotient(sq: &Subquotient, ambient_endo: &IntMatrix) -> Result<Self> {
        let m = sq.induced(sq, ambient_endo)?;
        Self::new(sq.group(), m)
    }

    pub fn endo_hom(&self) -> AbHom {
        AbHom { domain: self.group.clone(), codomain: self.group.clone(), matrix: self.endo.clone() }
    }

    fn reduce(&self, m: &IntMatrix) -> IntMatrix {
        m.reduce_rows(&self.group.orders())
    }
}

/// The stable image of a system, with its inclusion into the original group.
#[derive(Clone, Debug)]
pub struct EventualRange {
    pub system: InductiveSystem,
    /// Subquotient of the original presentation `Z^k / relations`.
    pub subgroup: Subquotient,
    /// Number of iterations `N` with `im f^N` used.
    pub steps: usize,
}

fn bit_length(n: &BigInt) -> usize {
    n.bits() as usize
}

fn image_of_power(sys: &InductiveSystem, power: &IntMatrix) -> Subquotient {
    let q = sys.group.relations();
    Subquotient::new(sys.group.ngens(), &power.hstack(&q), &q).expect("relations lie in the image lattice")
}

/// Bound on the number of steps until `im f^N` stops changing type.
pub fn stabilization_bound(g: &FgAbGroup) -> usize {
    let omega = bit_length(&g.torsion_order());
    g.free_rank * (omega + 1) + omega + 1
}

/// Eventual range computed with at least `min_steps` iterations.
pub fn eventual_range_at(sys: &InductiveSystem, min_steps: usize) -> EventualRange {
    let bound = stabilization_bound(&sys.group);
    let mut power = IntMatrix::identity(sys.group.ngens());
    let mut cur = image_of_power(sys, &power);
    let mut n = 0;
    loop {
        let next_power = sys.reduce(&sys.endo.mul(&power));
        let next = image_of_power(sys, &next_power);
        if n >= min_steps && next.group().iso_eq(&cur.group()) {
            break;
        }
        assert!(n <= bound.max(min_steps), "eventual range failed to stabilize within {bound} steps");
        power = next_power;
        cur = next;
        n += 1;
    }
    let system = InductiveSystem::on_subquotient(&cur, &sys.endo).expect("image of f^N is f-invariant");
    debug_assert!(system.endo_hom().kernel().group().is_trivial());
    EventualRange { system, subgroup: cur, steps: n }
}

/// Restriction of the system to `im f^N` for the least `N` where the
/// isomorphism type stabilizes. The restricted endomorphism is injective.
pub fn eventual_range(sys: &InductiveSystem) -> InductiveSystem {
    eventual_range_at(sys, 0).system
}

/// Classifies the free part, given an injective square matrix.
fn classify_free(b: &IntMatrix) -> (Vec<Summand>, Vec<String>, Option<IntMatrix>) {
    let r = b.rows();
    if r == 0 {
        return (vec![], vec![], None);
    }
    if is_unimodular(b) {
        return (vec![Summand::free(r)], vec![], None);
    }
    let det = b.det();
    assert!(!det.is_zero(), "free part of an eventual range must be injective");
    let mut cp = charpoly(b);
    let mut roots: Vec<(BigInt, usize)> = Vec::new();
    match divisors(&det.abs()) {
        Some(divs) => {
            for d in divs {
                for cand in [d.clone(), -d] {
                    let mut m = 0;
                    while let Some(q) = divide_linear(&cp, &cand) {
                        cp = q;
                        m += 1;
                    }
                    if m > 0 {
                        roots.push((cand, m));
                    }
                }
            }
        }
        None => return unclassified(b, "determinant too large to factor"),
    }
    let mut summands = Vec::new();
    let mut notes = Vec::new();
    for (n, m) in &roots {
        let shifted = b.sub(&IntMatrix::identity(r).scale(n));
        // A Jordan block does not change the limit: on the generalized
        // eigenspace, B^k = n^k times a matrix with bounded denominators.
        if kernel_basis(&shifted).cols() != *m {
            notes.push(format!("eigenvalue {n} has a Jordan block"));
        }
        if n.abs().is_one() {
            summands.push(Summand::free(*m));
        } else {
            summands.push(Summand::localized(n.abs(), *m));
            notes.push(format!("scales by {n} (multiplicity {m})"));
        }
    }
    if cp.len() > 1 {
        // Residual factor without integer roots; classify on its saturated kernel.
        let w = kernel_basis(&poly_at_matrix(&cp, b));
        let dim = w.cols();
        let cols: Vec<_> = (0..dim)
            .map(|j| solve(&w, &b.mul_vec(&w.col(j))).expect("kernel of a polynomial in B is B-invariant"))
            .collect();
        let bw = IntMatrix::from_columns(dim, &cols);
        match power_scalar(&bw) {
            Some((_, s)) if s.is_one() => summands.push(Summand::free(dim)),
            Some((p, s)) => {
                notes.push(format!("B^{p} = {s}·U on a rank-{dim} block, U unimodular"));
                summands.push(Summand::localized(s, dim));
            }
            None => return unclassified(b, "residual block is not a scaled unimodular power"),
        }
    }
    (summands, notes, None)
}

fn unclassified(b: &IntMatrix, why: &str) -> (Vec<Summand>, Vec<String>, Option<IntMatrix>) {
    (vec![], vec![format!("unclassified free part: {why}")], Some(b.clone()))
}

/// Smallest `p ≤ 2·dim + 2` with `B^p = s·U`, `U` unimodular, `s > 0`.
fn power_scalar(b: &IntMatrix) -> Option<(u32, BigInt)> {
    let dim = b.rows();
    let mut pw = IntMatrix::identity(dim);
    for p in 1..=(2 * dim as u32 + 2) {
        pw = pw.mul(b);
        let g =
            (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).fold(BigInt::zero(), |g, (i, j)| g.gcd(pw.get(i, j)));
        if g.is_zero() {
            return None;
        }
        let u = IntMatrix::from_fn(dim, dim, |i, j| pw.get(i, j) / &g);
        if is_unimodular(&u) {
            return Some((p, g));
        }
    }
    None
}

/// Exact division of a polynomial by `(x − a)`, if it divides.
fn divide_linear(cp: &[BigInt], a: &BigInt) -> Option<Vec<BigInt>> {
    if cp.len() < 2 {
        return None;
    }
    let n = cp.len() - 1;
    let mut q = vec![BigInt::zero(); n];
    let mut carry = BigInt::zero();
    for i in (0..=n).rev() {
        let v = &cp[i] + &carry * a;
        if i == 0 {
            return if v.is_zero() { Some(q) } else { None };
        }
        q[i - 1] = v.clone();
        carry = v;
    }
    unreachable!()
}

/// Positive divisors of `n`, or `None` if trial division would take too long.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    if n.bits() > 80 {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if n.is_multiple_of(&d) {
            small.push(d.clone());
            let e = n / &d;
            if e != d {
                large.push(e);
            }
        }
        d += 1;
        if d.bits() > 32 {
            return None;
        }
    }
    large.reverse();
    small.extend(large);
    Some(small)
}

/// Classifies `lim(G, f)` into a canonical descriptor.
pub fn classify_limit(sys: &InductiveSystem) -> LimitDescriptor {
    let er = eventual_range(sys);
    let s = er.group.torsion.len();
    let r = er.group.free_rank;
    let free_idx: Vec<usize> = (s..s + r).collect();
    let b = er.endo.select(&free_idx, &free_idx);
    let (mut summands, notes, fallback) = classify_free(&b);
    summands.extend(er.group.torsion.iter().map(|q| Summand::cyclic(q.clone(), 1)));
    let mut d = LimitDescriptor::new(summands);
    d.annotations = notes;
    d.classified = fallback.is_none();
    d.fallback = fallback;
    d
}

fn check_prime(p: u64) -> Result<()> {
    if p < 2 || (2..).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
        return Err(Error::NotPrime(p.to_string()));
    }
    Ok(())
}

/// Rank of a matrix over the field with `p` elements.
pub fn rank_mod_p(m: &IntMatrix, p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut a: Vec<Vec<u128>> =
        (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).mod_floor(&pb).to_u128().unwrap()).collect()).collect();
    let p = p as u128;
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(piv) = (rank..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = mod_pow(a[rank][c], p - 2, p);
        for x in &mut a[rank][c..] {
            *x = *x * inv % p;
        }
        let pivot = a[rank].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != rank && row[c] != 0 {
                let f = row[c];
                for (x, y) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_pow(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Dimension of `lim(G, f) ⊗ F_p`, computed as the stable rank of `f^k` on `G/pG`.
pub fn limit_mod_p_rank(sys: &InductiveSystem, p: u64) -> Result<usize> {
    check_prime(p)?;
    if p >= 1 << 32 {
        return Err(Error::Other("prime too large for the modular oracle".into()));
    }
    let pb = BigInt::from(p);
    let keep: Vec<usize> = sys
        .group
        .orders()
        .iter()
        .enumerate()
        .filter(|(_, q)| q.is_zero() || q.is_multiple_of(&pb))
        .map(|(i, _)| i)
        .collect();
    let a = sys.endo.select(&keep, &keep).reduce_rows(&vec![pb.clone(); keep.len()]);
    let mut pw = a.clone();
    let mut rank = if keep.is_empty() { 0 } else { rank_mod_p(&IntMatrix::identity(keep.len()), p) };
    loop {
        let r = rank_mod_p(&pw, p);
        if r == rank {
            return Ok(r);
        }
        rank = r;
        pw = a.mul(&pw).reduce_rows(&vec![pb.clone(); keep.len()]);
    }
}

/// Morphism of systems: `target.endo ∘ map = map ∘ source.endo`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemHom {
    pub source: InductiveSystem,
    pub target: InductiveSystem,
    pub map: IntMatrix,
}

impl SystemHom {
    pub fn new(source: InductiveSystem, target: InductiveSystem, map: IntMatrix) -> Result<Self> {
        let h = AbHom::new(source.group.clone(), target.group.clone(), map)?;
        let lhs = target.reduce(&target.endo.mul(&h.matrix));
        let rhs = target.reduce(&h.matrix.mul(&source.endo));
        if lhs != rhs {
            return Err(Error::NotIntertwining(format!("f∘h = {lhs} but h∘f = {rhs}")));
        }
        Ok(SystemHom { source, target, map: h.matrix })
    }

    pub fn hom(&self) -> AbHom {
        AbHom { domain: self.source.group.clone(), codomain: self.target.group.clone(), matrix: self.map.clone() }
    }

    /// The induced map between eventual ranges, both taken at a common depth.
    pub fn on_eventual_ranges(&self) -> (EventualRange, EventualRange, SystemHom) {
        let s0 = eventual_range_at(&self.source, 0).steps;
        let t0 = eventual_range_at(&self.target, 0).steps;
        let n = s0.max(t0);
        let es = eventual_range_at(&self.source, n);
        let et = eventual_range_at(&self.target, n);
        let m = es.subgroup.induced(&et.subgroup, &self.map).expect("h maps im f^N into im g^N");
        let h = SystemHom::new(es.system.clone(), et.system.clone(), m).expect("restriction intertwines");
        (es, et, h)
    }

    /// `|det|` of the induced map of limits when both limits are the eventual
    /// range itself (automorphism systems) and the free ranks agree.
    pub fn limit_determinant(&self) -> Option<BigInt> {
        let (es, et, h) = self.on_eventual_ranges();
        let auto = |s: &InductiveSystem| s.group.is_free() && is_unimodular(&s.endo);
        if !auto(&es.system) || !auto(&et.system) || !h.map.is_square() {
            return None;
        }
        Some(h.map.det().abs())
    }
}

/// Kernel subsystem of `h` and its subquotient of the source presentation.
pub fn kernel_system_data(h: &SystemHom) -> (InductiveSystem, Subquotient) {
    let sq = h.hom().kernel();
    let sys = InductiveSystem::on_subquotient(&sq, &h.source.endo).expect("kernel is invariant");
    (sys, sq)
}

pub fn image_system_data(h: &SystemHom) -> (InductiveSystem, Subquotient) {
    let sq = h.hom().image();
    let sys = InductiveSystem::on_subquotient(&sq, &h.target.endo).expect("image is invariant");
    (sys, sq)
}

pub fn cokernel_system_data(h: &SystemHom) -> (InductiveSystem, Subquotient) {
    let sq = h.hom().cokernel();
    let sys = InductiveSystem::on_subquotient(&sq, &h.target.endo).expect("cokernel endo well defined");
    (sys, sq)
}

pub fn kernel_system(h: &SystemHom) -> InductiveSystem {
    kernel_system_data(h).0
}

pub fn image_system(h: &SystemHom) -> InductiveSystem {
    image_system_data(h).0
}

pub fn cokernel_system(h: &SystemHom) -> InductiveSystem {
    cokernel_system_data(h).0
}

/// Primes `≤ bound` dividing an eigenvalue or entry of a classified system.
pub fn relevant_primes(sys: &InductiveSystem, d: &LimitDescriptor, bound: u64) -> Vec<u64> {
    let mut ps = std::collections::BTreeSet::new();
    let small = |x: &BigInt, ps: &mut std::collections::BTreeSet<u64>| {
        for p in 2..=bound {
            if check_prime(p).is_ok() && !x.is_zero() && x.is_multiple_of(&BigInt::from(p)) {
                ps.insert(p);
            }
        }
    };
    for i in 0..sys.endo.rows() {
        for j in 0..sys.endo.cols() {
            small(sys.endo.get(i, j), &mut ps);
        }
    }
    for s in &d.summands {
        match s {
            Summand::Localized { scale, .. } => small(scale, &mut ps),
            Summand::Cyclic { order, .. } => small(order, &mut ps),
            Summand::Free { .. } => {}
        }
    }
    ps.into_iter().collect()
}
