//! Heisenberg Fock monomials on charged vacua and exact linear combinations.
//!
//! A monomial `α(-n_1)…α(-n_r) e^{kα/(2pp')}` is stored as its partition
//! `n_1 ≥ … ≥ n_r` together with the integer charge `k`. Creation operators
//! commute, so the partition is the whole story; a state is a finite map from
//! monomials to exact rationals.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::lattice::{charge_weight, DualVector, Params};
use crate::{Coeff, Rational};

/// `α(-parts[0]) … α(-parts[r-1]) e^{charge}` with parts non-increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockMonomial {
    charge: i64,
    parts: Vec<u32>,
}

impl FockMonomial {
    pub fn new(charge: DualVector, mut parts: Vec<u32>) -> Self {
        assert!(parts.iter().all(|&n| n > 0), "Heisenberg creation modes are positive");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { charge: charge.k(), parts }
    }

    pub fn vacuum(charge: DualVector) -> Self {
        Self { charge: charge.k(), parts: Vec::new() }
    }

    pub(crate) fn from_sorted(charge: i64, parts: Vec<u32>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        Self { charge, parts }
    }

    pub fn charge(&self) -> DualVector {
        DualVector(self.charge)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Sum of the parts: the Heisenberg level above the charged vacuum.
    pub fn level(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn multiplicity(&self, n: u32) -> u32 {
        self.parts.iter().filter(|&&m| m == n).count() as u32
    }

    /// `L(0)` eigenvalue.
    pub fn weight(&self, params: &Params) -> Rational {
        weight(self, params)
    }

    /// Multiplies by `α(-n)`.
    pub fn with_part(&self, n: u32) -> Self {
        let mut parts = self.parts.clone();
        let pos = parts.iter().position(|&m| m < n).unwrap_or(parts.len());
        parts.insert(pos, n);
        Self { charge: self.charge, parts }
    }

    /// Removes one copy of `α(-n)`, if present.
    pub fn without_part(&self, n: u32) -> Option<Self> {
        let pos = self.parts.iter().position(|&m| m == n)?;
        let mut parts = self.parts.clone();
        parts.remove(pos);
        Some(Self { charge: self.charge, parts })
    }

    pub fn with_charge(&self, charge: DualVector) -> Self {
        Self { charge: charge.k(), parts: self.parts.clone() }
    }

    /// Key realizing the basis order: weight, then charge, then partitions in
    /// reverse lexicographic order.
    pub fn order_key(&self, params: &Params) -> (Rational, i64, Reverse<Vec<u32>>) {
        (self.weight(params), self.charge, Reverse(self.parts.clone()))
    }

    /// Human readable form, e.g. `a(-2)a(-1)^2 e(6)` for
    /// `α(-2)α(-1)^2 e^{6α/(2pp')}`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut i = 0;
        while i < self.parts.len() {
            let n = self.parts[i];
            let mut j = i;
            while j < self.parts.len() && self.parts[j] == n {
                j += 1;
            }
            let _ = write!(out, "a(-{n})");
            if j - i > 1 {
                let _ = write!(out, "^{}", j - i);
            }
            i = j;
        }
        if self.charge != 0 {
            if !out.is_empty() {
                out.push(' ');
            }
            let _ = write!(out, "e({})", self.charge);
        } else if out.is_empty() {
            out.push('1');
        }
        out
    }
}

/// `Σ parts + k^2/(4pp') - (p-p')k/(2pp')`.
pub fn weight(m: &FockMonomial, params: &Params) -> Rational {
    charge_weight(m.charge, params) + Rational::from_integer(i64::from(m.level()))
}

/// Finite exact linear combination of Fock monomials. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct State {
    terms: BTreeMap<FockMonomial, Coeff>,
}

impl State {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: FockMonomial) -> Self {
        Self::term(m, Coeff::one())
    }

    pub fn term(m: FockMonomial, c: Coeff) -> Self {
        let mut s = Self::zero();
        s.add_term(m, c);
        s
    }

    pub fn vacuum() -> Self {
        Self::monomial(FockMonomial::vacuum(DualVector(0)))
    }

    /// `e^γ`.
    pub fn exponential(gamma: DualVector) -> Self {
        Self::monomial(FockMonomial::vacuum(gamma))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: FockMonomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &State, c: &Coeff) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn scaled(&self, c: &Coeff) -> State {
        if c.is_zero() {
            return State::zero();
        }
        State { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn coefficient(&self, m: &FockMonomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockMonomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &FockMonomial> {
        self.terms.keys()
    }

    /// Largest part appearing in any monomial (0 if none).
    pub fn max_part(&self) -> u32 {
        self.terms.keys().filter_map(|m| m.parts.first().copied()).max().unwrap_or(0)
    }

    /// Weight if all terms share one, `None` for zero or mixed states.
    pub fn homogeneous_weight(&self, params: &Params) -> Option<Rational> {
        let mut it = self.terms.keys().map(|m| m.weight(params));
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    pub fn max_weight(&self, params: &Params) -> Option<Rational> {
        self.terms.keys().map(|m| m.weight(params)).max()
    }

    pub fn min_weight(&self, params: &Params) -> Option<Rational> {
        self.terms.keys().map(|m| m.weight(params)).min()
    }

    /// Unique decomposition into weight-homogeneous components.
    pub fn by_weight(&self, params: &Params) -> BTreeMap<Rational, State> {
        let mut out: BTreeMap<Rational, State> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.weight(params)).or_default().add_term(m.clone(), c.clone());
        }
        out
    }

    /// Keeps the terms whose monomial satisfies `keep`.
    pub fn filtered(&self, mut keep: impl FnMut(&FockMonomial) -> bool) -> State {
        State {
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Terms in basis order (weight, charge, reverse-lex partition).
    pub fn sorted_terms(&self, params: &Params) -> Vec<(&FockMonomial, &Coeff)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_cached_key(|(m, _)| m.order_key(params));
        v
    }

    /// Deterministic text form, terms in basis order, coefficients exact.
    pub fn render(&self, params: &Params) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.sorted_terms(params).into_iter().enumerate() {
            if i > 0 {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            } else if c.is_negative() {
                out.push('-');
            }
            let a = c.abs();
            if !a.is_one() {
                let _ = write!(out, "{a}*");
            }
            out.push_str(&m.render());
        }
        out
    }
}

impl core::ops::Add<&State> for &State {
    type Output = State;

    fn add(self, rhs: &State) -> State {
        let mut out = self.clone();
        out.add_scaled(rhs, &Coeff::one());
        out
    }
}

impl core::ops::Sub<&State> for &State {
    type Output = State;

    fn sub(self, rhs: &State) -> State {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Coeff::one());
        out
    }
}

impl core::ops::AddAssign<&State> for State {
    fn add_assign(&mut self, rhs: &State) {
        self.add_scaled(rhs, &Coeff::one());
    }
}

impl FromIterator<(FockMonomial, Coeff)> for State {
    fn from_iter<T: IntoIterator<Item = (FockMonomial, Coeff)>>(iter: T) -> Self {
        let mut s = State::zero();
        for (m, c) in iter {
            s.add_term(m, c);
        }
        s
    }
}

/// All partitions of `n`, each non-increasing, listed in reverse
/// lexicographic order (`[n]` first, `[1,…,1]` last).
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for first in (1..=max.min(n)).rev() {
            cur.push(first);
            rec(n - first, first, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Merges two non-increasing partitions.
pub(crate) fn merge_parts(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] >= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Charges `k ≡ residue (mod 2pp')` whose vacuum weight is at most `max_weight`,
/// in increasing order.
pub fn charges_in_window(residue: i64, max_weight: Rational, params: &Params) -> Vec<i64> {
    let n = params.norm();
    let d = params.p() - params.p_prime();
    // weight(k) = ((k-d)^2 - d^2)/(2n) <= W  <=>  (k-d)^2 <= 2nW + d^2
    let bound = Rational::from_integer(2 * n) * max_weight + Rational::from_integer(d * d);
    if bound < Rational::zero() {
        return Vec::new();
    }
    let radius = isqrt_floor(bound.floor().to_integer()) + 1;
    let lo = d - radius;
    let hi = d + radius;
    let first = lo + (residue - lo).rem_euclid(n);
    (0..)
        .map(|i| first + i * n)
        .take_while(|&k| k <= hi)
        .filter(|&k| charge_weight(k, params) <= max_weight)
        .collect()
}

fn isqrt_floor(x: i64) -> i64 {
    if x <= 0 {
        return 0;
    }
    num_integer::Roots::sqrt(&x)
}

/// Every monomial of the coset module `V_{L+λ}` (`λ` given by its residue
/// mod `2pp'`) with weight at most `max_weight`, sorted by
/// (weight, charge, reverse-lex partition).
pub fn enumerate_basis(residue: i64, max_weight: Rational, params: &Params) -> Vec<FockMonomial> {
    let mut out = Vec::new();
    for k in charges_in_window(residue, max_weight, params) {
        let room = (max_weight - charge_weight(k, params)).floor().to_integer();
        for level in 0..=room.max(0) as u32 {
            for parts in partitions(level) {
                out.push(FockMonomial::from_sorted(k, parts));
            }
        }
    }
    out.sort_by_cached_key(|m| m.order_key(params));
    out
}

/// Monomials of exactly the given weight in the coset with `residue`.
pub fn basis_at_weight(residue: i64, weight: Rational, params: &Params) -> Vec<FockMonomial> {
    let mut out = Vec::new();
    for k in charges_in_window(residue, weight, params) {
        let room = weight - charge_weight(k, params);
        if !room.is_integer() || room < Rational::zero() {
            continue;
        }
        for parts in partitions(room.to_integer() as u32) {
            out.push(FockMonomial::from_sorted(k, parts));
        }
    }
    out.sort_by_cached_key(|m| m.order_key(params));
    out
}

/// Weight-graded view of a finite basis.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedBasis {
    pieces: BTreeMap<Rational, Vec<FockMonomial>>,
}

impl GradedBasis {
    pub fn from_monomials(monomials: impl IntoIterator<Item = FockMonomial>, params: &Params) -> Self {
        let mut pieces: BTreeMap<Rational, Vec<FockMonomial>> = BTreeMap::new();
        for m in monomials {
            pieces.entry(m.weight(params)).or_default().push(m);
        }
        for piece in pieces.values_mut() {
            piece.sort_by_cached_key(|m| m.order_key(params));
            piece.dedup();
        }
        Self { pieces }
    }

    pub fn weights(&self) -> impl Iterator<Item = Rational> + '_ {
        self.pieces.keys().copied()
    }

    pub fn piece(&self, weight: Rational) -> &[FockMonomial] {
        self.pieces.get(&weight).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn dim(&self, weight: Rational) -> usize {
        self.piece(weight).len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Rational, &[FockMonomial])> {
        self.pieces.iter().map(|(w, v)| (*w, v.as_slice()))
    }

    pub fn all(&self) -> impl Iterator<Item = &FockMonomial> {
        self.pieces.values().flatten()
    }

    pub fn total_dim(&self) -> usize {
        self.pieces.values().map(Vec::len).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p32() -> Params {
        Params::new(3, 2).unwrap()
    }

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn weight_examples() {
        let p = p32();
        assert_eq!(FockMonomial::vacuum(DualVector(0)).weight(&p), r(0));
        assert_eq!(FockMonomial::vacuum(DualVector(6)).weight(&p), r(1));
        assert_eq!(FockMonomial::vacuum(DualVector(12)).weight(&p), r(5));
        assert_eq!(FockMonomial::new(DualVector(2), vec![1]).weight(&p), r(1));
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=10).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        assert_eq!(partitions(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
    }

    #[test]
    fn lattice_piece_dimensions() {
        let p = p32();
        let basis = GradedBasis::from_monomials(enumerate_basis(0, r(4), &p), &p);
        let dims: Vec<usize> = (0..=4).map(|w| basis.dim(r(w))).collect();
        assert_eq!(dims, vec![1, 1, 2, 3, 5]);
        // e^{α} enters at weight 5, e^{-α} at weight 7
        let basis = GradedBasis::from_monomials(enumerate_basis(0, r(7), &p), &p);
        assert_eq!(basis.dim(r(5)), 7 + 1);
        assert_eq!(basis.dim(r(7)), 15 + 2 + 1);
    }

    #[test]
    fn basis_is_sorted_and_unique() {
        let p = Params::new(5, 3).unwrap();
        let b = enumerate_basis(7, r(6), &p);
        for w in b.windows(2) {
            assert!(w[0].order_key(&p) < w[1].order_key(&p));
        }
        for m in &b {
            assert!(m.weight(&p) <= r(6));
            assert_eq!(m.charge().coset(&p), 7);
        }
    }

    #[test]
    fn basis_at_weight_matches_window() {
        let p = Params::new(5, 2).unwrap();
        for residue in [0, 4, 16, 6] {
            let all = enumerate_basis(residue, r(5), &p);
            for (w, piece) in GradedBasis::from_monomials(all, &p).iter() {
                assert_eq!(piece, basis_at_weight(residue, w, &p).as_slice());
            }
        }
    }

    #[test]
    fn state_arithmetic_drops_zeros() {
        let m = FockMonomial::new(DualVector(2), vec![1, 2]);
        assert_eq!(m.parts(), &[2, 1]);
        let mut s = State::monomial(m.clone());
        s.add_term(m.clone(), -Coeff::one());
        assert!(s.is_zero());
        let t = State::term(m, Coeff::new(3.into(), 2.into()));
        assert_eq!(t.render(&p32()), "3/2*a(-2)a(-1) e(2)");
        assert_eq!((&t - &t), State::zero());
    }

    #[test]
    fn merge_keeps_order() {
        assert_eq!(merge_parts(&[5, 3, 1], &[4, 3, 2]), vec![5, 4, 3, 3, 2, 1]);
    }
}
