//! Mode actions on Fock states.
//!
//! Conventions: `[α(m), α(n)] = 2pp' m δ_{m+n,0}`, `α(0) e^β = <α,β> e^β`,
//! and for a charge `γ`
//!
//! ```text
//! Y(e^γ, z) = exp(Σ_{n>0} γ(-n) z^n / n) exp(-Σ_{n>0} γ(n) z^{-n} / n) e_γ z^{γ(0)}
//! ```
//!
//! with `e_γ e^β = e^{γ+β}` (trivial cocycle). On the polynomial model
//! `α(-n) ↦ x_n`, the annihilation factor is the substitution
//! `x_n ↦ x_n - k_γ z^{-n}` and the creation factor is multiplication by the
//! series `exp(Σ c x_n z^n / n)`, `c = k_γ / (2pp')`.
//!
//! The mode `u_n` extracts the coefficient of `z^{-n-1}`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fock::{merge_parts, FockMonomial, State};
use crate::lattice::{pairing, DualVector, Params};
use crate::models::FourCosetModule;
use crate::{Coeff, Rational};

type Poly = BTreeMap<Vec<u32>, Coeff>;

/// Laurent polynomial in `z` with state coefficients; exponents are exact
/// rationals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentStateSeries {
    terms: BTreeMap<Rational, State>,
}

impl LaurentStateSeries {
    pub fn constant(s: State) -> Self {
        let mut out = Self::default();
        out.add(Rational::zero(), &s);
        out
    }

    pub fn add(&mut self, exponent: Rational, s: &State) {
        if s.is_zero() {
            return;
        }
        let slot = self.terms.entry(exponent).or_default();
        *slot += s;
        if slot.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    pub fn coefficient(&self, exponent: Rational) -> State {
        self.terms.get(&exponent).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Rational, &State)> {
        self.terms.iter().map(|(e, s)| (*e, s))
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
}

/// `C(x, k)` for any integer `x` and `k ≥ 0`.
pub(crate) fn binomial(x: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(x - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

fn integer(n: i64) -> Coeff {
    Coeff::from_integer(BigInt::from(n))
}

/// Mode engine for fixed `(p, p')`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Engine {
    params: Params,
}

impl Engine {
    pub fn new(params: Params) -> Self {
        Self { params }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// `ω = α(-1)^2/(4pp') + (p-p')/(2pp') α(-2)`.
    pub fn conformal_vector(&self) -> State {
        let n = self.params.norm();
        let d = self.params.p() - self.params.p_prime();
        let mut s = State::zero();
        s.add_term(FockMonomial::new(DualVector(0), alloc::vec![1, 1]), Coeff::new(1.into(), (2 * n).into()));
        s.add_term(FockMonomial::new(DualVector(0), alloc::vec![2]), Coeff::new(d.into(), n.into()));
        s
    }

    /// `α(n)` on a state.
    pub fn heisenberg_act(&self, n: i64, s: &State) -> State {
        let norm = self.params.norm();
        let mut out = State::zero();
        for (m, c) in s.iter() {
            match n {
                0 => out.add_term(m.clone(), c * integer(m.charge().k())),
                n if n < 0 => out.add_term(m.with_part((-n) as u32), c.clone()),
                n => {
                    let mult = m.multiplicity(n as u32);
                    if mult > 0 {
                        let reduced = m.without_part(n as u32).expect("part present");
                        out.add_term(reduced, c * integer(norm * n * i64::from(mult)));
                    }
                }
            }
        }
        out
    }

    /// `L(n)` computed directly from the quadratic Heisenberg expression
    /// `(1/(4pp')) Σ_j :α(j)α(n-j): + (p-p')/(2pp') (-n-1) α(n)`.
    pub fn virasoro_mode(&self, n: i64, s: &State) -> State {
        let norm = self.params.norm();
        let d = self.params.p() - self.params.p_prime();
        let top = i64::from(s.max_part()).max(0);
        let mut out = State::zero();
        let half = Coeff::new(1.into(), (2 * norm).into());
        for j in (n - top)..=top {
            let (left, right) = if j <= n - j { (j, n - j) } else { (n - j, j) };
            if right > top {
                continue;
            }
            let t = self.heisenberg_act(right, s);
            if t.is_zero() {
                continue;
            }
            out.add_scaled(&self.heisenberg_act(left, &t), &half);
        }
        let lin = Coeff::new((d * (-n - 1)).into(), norm.into());
        out.add_scaled(&self.heisenberg_act(n, s), &lin);
        out
    }

    /// Closed-form central charge.
    pub fn central_charge(&self) -> Rational {
        self.params.central_charge()
    }

    /// `2 ×` the vacuum coefficient of `L(2) L(-2) 1`, an independent route
    /// to the central charge.
    pub fn central_charge_from_modes(&self) -> Coeff {
        let vac = State::vacuum();
        let s = self.virasoro_mode(2, &self.virasoro_mode(-2, &vac));
        s.coefficient(&FockMonomial::vacuum(DualVector(0))) * integer(2)
    }

    /// `e^γ_n` on a state: the coefficient of `z^{-n-1}` in `Y(e^γ, z) s`.
    /// Vanishes unless `n + <γ, β>` is an integer for the charge `β` of a term.
    pub fn exp_mode(&self, gamma: DualVector, n: Rational, s: &State) -> State {
        self.vertex_coefficient(&[], gamma.k(), -n - Rational::one(), s)
    }

    /// `Q = e^{α/p'}_0`.
    pub fn screening_q(&self, s: &State) -> State {
        self.exp_mode(self.params.alpha_over_p_prime(), Rational::zero(), s)
    }

    /// `Q̃ = e^{-α/p}_0`.
    pub fn screening_qtilde(&self, s: &State) -> State {
        self.exp_mode(self.params.minus_alpha_over_p(), Rational::zero(), s)
    }

    /// `v_n s` for an arbitrary finite combination `v` of Fock monomials, using
    /// the normal-ordered reconstruction
    /// `Y(α(-n_1)…α(-n_r)e^β, z) = :∏ ∂^{(n_i-1)}α(z)/(n_i-1)! Y(e^β, z):`.
    pub fn field_mode(&self, v: &State, n: Rational, s: &State) -> State {
        let target = -n - Rational::one();
        let mut out = State::zero();
        for (m, c) in v.iter() {
            let t = self.vertex_coefficient(m.parts(), m.charge().k(), target, s);
            out.add_scaled(&t, c);
        }
        out
    }

    /// Coefficient of `z^target` in `Y(α(-parts)e^β, z) s`.
    fn vertex_coefficient(&self, parts: &[u32], beta: i64, target: Rational, s: &State) -> State {
        if s.is_zero() {
            return State::zero();
        }
        // Group equal factors; for each factor value pick how many copies
        // contribute their annihilation half (the rest contribute creation).
        let mut groups: Vec<(u32, u32)> = Vec::new();
        for &m in parts {
            match groups.last_mut() {
                Some((v, k)) if *v == m => *k += 1,
                _ => groups.push((m, 1)),
            }
        }
        let mut out = State::zero();
        let mut choice = alloc::vec![0u32; groups.len()];
        loop {
            let mut weight = Coeff::one();
            let mut plus: Vec<u32> = Vec::new();
            let mut minus: Vec<u32> = Vec::new();
            for (&(m, k), &j) in groups.iter().zip(&choice) {
                weight *= Coeff::from_integer(binomial(i64::from(k), i64::from(j)));
                plus.extend(core::iter::repeat_n(m, j as usize));
                minus.extend(core::iter::repeat_n(m, (k - j) as usize));
            }
            let part = self.normal_ordered_term(&plus, &minus, beta, target, s);
            out.add_scaled(&part, &weight);
            // next choice
            let mut idx = 0;
            loop {
                if idx == groups.len() {
                    return out;
                }
                if choice[idx] < groups[idx].1 {
                    choice[idx] += 1;
                    break;
                }
                choice[idx] = 0;
                idx += 1;
            }
        }
    }

    /// `[∏_{minus} ∂^{(m-1)}α^-(z)/(m-1)!] Y(e^β,z) [∏_{plus} ∂^{(m-1)}α^+(z)/(m-1)!] s`,
    /// coefficient of `z^target`.
    fn normal_ordered_term(&self, plus: &[u32], minus: &[u32], beta: i64, target: Rational, s: &State) -> State {
        let norm = self.params.norm();
        // Annihilation halves: Σ_{j≥0} C(-j-1, m-1) α(j) z^{-j-m}.
        let mut series: BTreeMap<Rational, State> = BTreeMap::new();
        series.insert(Rational::zero(), s.clone());
        for &m in plus {
            let mut next: BTreeMap<Rational, State> = BTreeMap::new();
            for (e, t) in &series {
                for j in 0..=i64::from(t.max_part()) {
                    let coeff = binomial(-j - 1, i64::from(m) - 1);
                    let applied = self.heisenberg_act(j, t);
                    if applied.is_zero() {
                        continue;
                    }
                    let exp = *e - Rational::from_integer(j + i64::from(m));
                    next.entry(exp).or_default().add_scaled(&applied, &Coeff::from_integer(coeff));
                }
            }
            next.retain(|_, v| !v.is_zero());
            series = next;
        }

        // z^{<β,·>}, the substitution x_n -> x_n - β z^{-n}, and the charge shift.
        struct Pending {
            raise: usize,
            coeff: Coeff,
            rest: Vec<u32>,
            charge: i64,
        }
        let mut pending: Vec<Pending> = Vec::new();
        let mut max_raise = 0usize;
        for (e, t) in &series {
            for (mono, c) in t.iter() {
                let k = mono.charge().k();
                let base = *e + Rational::new(beta * k, norm);
                for (removed, factor, rest) in annihilation_expansion(mono.parts(), beta) {
                    let raise = target - (base - Rational::from_integer(i64::from(removed)));
                    if !raise.is_integer() || raise < Rational::zero() {
                        continue;
                    }
                    let raise = raise.to_integer() as usize;
                    max_raise = max_raise.max(raise);
                    pending.push(Pending { raise, coeff: c * factor, rest, charge: k + beta });
                }
            }
        }
        if pending.is_empty() {
            return State::zero();
        }

        // Creation halves: exp(Σ c x_n z^n/n) ∏_{minus} Σ_{d≥0} C(d+m-1, m-1) x_{d+m} z^d.
        let mut creation = schur_series(&Coeff::new(beta.into(), norm.into()), max_raise);
        for &m in minus {
            let factor: Vec<Poly> = (0..=max_raise)
                .map(|d| {
                    let mut p = Poly::new();
                    let c = binomial((d as i64) + i64::from(m) - 1, i64::from(m) - 1);
                    p.insert(alloc::vec![d as u32 + m], Coeff::from_integer(c));
                    p
                })
                .collect();
            creation = series_mul(&creation, &factor, max_raise);
        }

        let mut out = State::zero();
        for p in pending {
            for (parts, pc) in &creation[p.raise] {
                out.add_term(FockMonomial::from_sorted(p.charge, merge_parts(&p.rest, parts)), &p.coeff * pc);
            }
        }
        out
    }

    /// `Δ(e^{-α/p}, z) v = z^{v_0} exp(Σ_{n≥1} e^{-α/p}_n (-z)^{-n} / (-n)) v`
    /// for `v` in the kernel of `Q̃`, where `z^{v_0}` is the identity.
    pub fn delta_apply(&self, v: &State) -> Result<LaurentStateSeries> {
        let f = self.params.minus_alpha_over_p();
        if !self.screening_qtilde(v).is_zero() {
            return Err(Error::Domain("Δ(e^{-α/p}, z) is only supported on the kernel of Q̃".into()));
        }
        let floor = self.params.weight_floor();
        let mut total = LaurentStateSeries::constant(v.clone());
        let mut term = total.clone();
        let mut order = 1i64;
        while !term.is_zero() {
            let mut next = LaurentStateSeries::default();
            for (e, t) in term.iter() {
                let Some(top) = t.max_weight(&self.params) else { continue };
                let reach = (top - floor).floor().to_integer();
                for n in 1..=reach.max(0) {
                    let applied = self.exp_mode(f, Rational::from_integer(n), t);
                    if applied.is_zero() {
                        continue;
                    }
                    // (-z)^{-n}/(-n) = (-1)^{n+1} z^{-n}/n; divide by the order for exp.
                    let sign = if n % 2 == 1 { 1 } else { -1 };
                    let c = Coeff::new(sign.into(), (n * order).into());
                    next.add(e - Rational::from_integer(n), &applied.scaled(&c));
                }
            }
            for (e, t) in next.iter() {
                total.add(e, t);
            }
            term = next;
            order += 1;
        }
        for (_, t) in total.iter() {
            if !self.screening_qtilde(t).is_zero() {
                return Err(Error::Domain("z^{v_0} would produce logarithmic terms".into()));
            }
        }
        Ok(total)
    }

    /// `L̄(n) = L(n) + e^{-α/p}_n + e^{α/p'}_n + e^{α/p'-α/p}_{n-1}`, each
    /// exponential acting with the module's component selection.
    pub fn lbar_mode(&self, module: &FourCosetModule, n: i64, s: &State) -> State {
        let mut out = self.virasoro_mode(n, s);
        out += &self.lbar_nilpotent_mode(module, n, s);
        out
    }

    /// `L̄(n) - L(n)`.
    pub fn lbar_nilpotent_mode(&self, module: &FourCosetModule, n: i64, s: &State) -> State {
        let p = &self.params;
        let mode = Rational::from_integer(n);
        let mut out = module.vertex_mode(self, &State::exponential(p.minus_alpha_over_p()), mode, s);
        out += &module.vertex_mode(self, &State::exponential(p.alpha_over_p_prime()), mode, s);
        out += &module.vertex_mode(self, &State::exponential(p.screening_difference()), mode - Rational::one(), s);
        out
    }
}

/// Terms of `∏ (x_{n_i} - k z^{-n_i})` over the parts: (total removed level,
/// coefficient, remaining parts).
fn annihilation_expansion(parts: &[u32], k: i64) -> Vec<(u32, Coeff, Vec<u32>)> {
    let mut groups: Vec<(u32, u32)> = Vec::new();
    for &m in parts {
        match groups.last_mut() {
            Some((v, c)) if *v == m => *c += 1,
            _ => groups.push((m, 1)),
        }
    }
    let mut out = alloc::vec![(0u32, Coeff::one(), Vec::new())];
    for (m, mult) in groups {
        let mut next = Vec::new();
        for (removed, c, rest) in &out {
            for j in 0..=mult {
                if j > 0 && k == 0 {
                    break;
                }
                let f = Coeff::from_integer(binomial(i64::from(mult), i64::from(j)) * BigInt::from(-k).pow(j));
                let mut r = rest.clone();
                r.extend(core::iter::repeat_n(m, (mult - j) as usize));
                next.push((removed + j * m, c * f, r));
            }
        }
        out = next;
    }
    out
}

/// Coefficients `S_0..S_max` of `exp(Σ_{n≥1} c x_n z^n / n)`, via
/// `a S_a = c Σ_{n=1}^{a} x_n S_{a-n}`.
fn schur_series(c: &Coeff, max: usize) -> Vec<Poly> {
    let mut out: Vec<Poly> = Vec::with_capacity(max + 1);
    let mut one = Poly::new();
    one.insert(Vec::new(), Coeff::one());
    out.push(one);
    for a in 1..=max {
        let mut p = Poly::new();
        if !c.is_zero() {
            let scale = c / Coeff::from_integer(BigInt::from(a));
            for n in 1..=a {
                for (parts, v) in &out[a - n] {
                    let key = merge_parts(parts, &[n as u32]);
                    let entry = p.entry(key).or_insert_with(Coeff::zero);
                    *entry += v * &scale;
                }
            }
            p.retain(|_, v| !v.is_zero());
        }
        out.push(p);
    }
    out
}

fn series_mul(a: &[Poly], b: &[Poly], max: usize) -> Vec<Poly> {
    let mut out: Vec<Poly> = (0..=max).map(|_| Poly::new()).collect();
    for (i, pa) in a.iter().enumerate().take(max + 1) {
        for (j, pb) in b.iter().enumerate().take(max + 1 - i) {
            for (ka, va) in pa {
                for (kb, vb) in pb {
                    let entry = out[i + j].entry(merge_parts(ka, kb)).or_insert_with(Coeff::zero);
                    *entry += va * vb;
                }
            }
        }
    }
    for p in &mut out {
        p.retain(|_, v| !v.is_zero());
    }
    out
}

/// Pairing helper re-exported for mode-compatibility tests.
pub fn monodromy(gamma: DualVector, beta: DualVector, params: &Params) -> Rational {
    pairing(gamma, beta, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn engine() -> Engine {
        Engine::new(Params::new(3, 2).unwrap())
    }

    fn q(n: i64) -> Coeff {
        integer(n)
    }

    fn alpha_m1() -> State {
        State::monomial(FockMonomial::new(DualVector(0), vec![1]))
    }

    #[test]
    fn heisenberg_examples() {
        let e = engine();
        assert_eq!(e.heisenberg_act(1, &alpha_m1()), State::vacuum().scaled(&q(12)));
        let half = State::exponential(DualVector(6));
        assert_eq!(e.heisenberg_act(0, &half), half.scaled(&q(6)));
        assert!(e.heisenberg_act(2, &State::vacuum()).is_zero());
    }

    #[test]
    fn screening_on_alpha() {
        let e = engine();
        assert_eq!(e.screening_q(&alpha_m1()), State::exponential(DualVector(6)).scaled(&q(-6)));
        assert_eq!(e.screening_qtilde(&alpha_m1()), State::exponential(DualVector(-4)).scaled(&q(4)));
    }

    #[test]
    fn creation_from_vacuum() {
        let e = engine();
        for k in [-7, -4, 0, 2, 6, 12] {
            let got = e.exp_mode(DualVector(k), Rational::from_integer(-1), &State::vacuum());
            assert_eq!(got, State::exponential(DualVector(k)));
        }
    }

    #[test]
    fn no_residue_on_half_alpha() {
        let e = engine();
        let half = State::exponential(DualVector(6));
        assert!(e.exp_mode(DualVector(6), Rational::zero(), &half).is_zero());
    }

    #[test]
    fn fractional_index_mismatch_is_zero() {
        let e = engine();
        // <-α/p, -α/p> = 4/3: integer modes vanish, the leading term is z^{4/3}.
        let f = State::exponential(DualVector(-4));
        assert!(e.exp_mode(DualVector(-4), Rational::zero(), &f).is_zero());
        let lead = e.exp_mode(DualVector(-4), Rational::new(-7, 3), &f);
        assert_eq!(lead, State::exponential(DualVector(-8)));
        assert!(e.exp_mode(DualVector(-4), Rational::new(-4, 3), &f).is_zero());
    }

    #[test]
    fn vacuum_and_heisenberg_fields() {
        let e = engine();
        let s = State::monomial(FockMonomial::new(DualVector(2), vec![2, 1]));
        for n in -3..3 {
            let got = e.field_mode(&State::vacuum(), Rational::from_integer(n), &s);
            assert_eq!(got, if n == -1 { s.clone() } else { State::zero() });
            let got = e.field_mode(&alpha_m1(), Rational::from_integer(n), &s);
            assert_eq!(got, e.heisenberg_act(n, &s));
        }
    }

    #[test]
    fn omega_modes_match_direct_virasoro() {
        let e = engine();
        let omega = e.conformal_vector();
        let samples = [
            State::exponential(DualVector(6)),
            State::monomial(FockMonomial::new(DualVector(-4), vec![3, 1, 1])),
            State::monomial(FockMonomial::new(DualVector(0), vec![2, 2])),
        ];
        for s in &samples {
            for n in -3..=3 {
                assert_eq!(e.field_mode(&omega, Rational::from_integer(n + 1), s), e.virasoro_mode(n, s));
            }
        }
        let half = State::exponential(DualVector(6));
        assert_eq!(e.field_mode(&omega, Rational::from_integer(1), &half), half);
    }

    #[test]
    fn virasoro_examples() {
        let e = engine();
        let vac = State::vacuum();
        assert!(e.virasoro_mode(0, &vac).is_zero());
        assert_eq!(e.virasoro_mode(-2, &vac), e.conformal_vector());
        assert!(e.virasoro_mode(2, &e.conformal_vector()).is_zero());
        let ea = State::exponential(DualVector(12));
        assert_eq!(e.virasoro_mode(0, &ea), ea.scaled(&q(5)));
    }

    #[test]
    fn screening_q_on_minus_alpha_over_p() {
        let e = engine();
        let got = e.screening_q(&State::exponential(DualVector(-4)));
        let expected = State::term(FockMonomial::new(DualVector(2), vec![1]), Coeff::new(1.into(), 2.into()));
        assert_eq!(got, expected);
    }

    #[test]
    fn delta_examples() {
        let e = engine();
        let d = e.delta_apply(&State::vacuum()).unwrap();
        assert_eq!(d, LaurentStateSeries::constant(State::vacuum()));

        let d = e.delta_apply(&e.conformal_vector()).unwrap();
        assert_eq!(d.coefficient(Rational::zero()), e.conformal_vector());
        assert_eq!(d.coefficient(Rational::from_integer(-1)), State::exponential(DualVector(-4)));
        assert_eq!(d.len(), 2);

        let f = State::exponential(DualVector(-4));
        assert_eq!(e.delta_apply(&f).unwrap(), LaurentStateSeries::constant(f));

        assert!(matches!(e.delta_apply(&alpha_m1()), Err(Error::Domain(_))));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(-1, 3), BigInt::from(-1));
        assert_eq!(binomial(-3, 2), BigInt::from(6));
        assert_eq!(binomial(2, 3), BigInt::from(0));
    }
}
