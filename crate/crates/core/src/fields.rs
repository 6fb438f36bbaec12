//! Weak vertex operators on the truncated ambient space `V(p,p') ⊕ MV(p,p')`.
//!
//! A [`Field`] is an expression tree; its modes are evaluated lazily on
//! Fock monomials and memoized per context. Identities between fields are
//! checked mode by mode on every basis state of weight at most `W`, for all
//! modes whose output weight lies in `[h_min, W]`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::check::{Outcome, Status};
use crate::error::{Error, Result};
use crate::fock::{FockMonomial, State};
use crate::lattice::Params;
use crate::models::{intertwine_mode, FourCosetModule};
use crate::vertex::{binomial, Engine};
use crate::{Coeff, Rational};

static NEXT_ID: AtomicUsize = AtomicUsize::new(0);

/// A pair `(v, m)` with `v ∈ V(p,p')`, `m ∈ MV(p,p')`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AmbientState {
    pub v: State,
    pub mv: State,
}

impl AmbientState {
    pub fn in_v(s: State) -> Self {
        Self { v: s, mv: State::zero() }
    }

    pub fn in_mv(s: State) -> Self {
        Self { v: State::zero(), mv: s }
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero() && self.mv.is_zero()
    }

    pub fn add_scaled(&mut self, other: &AmbientState, c: &Coeff) {
        self.v.add_scaled(&other.v, c);
        self.mv.add_scaled(&other.mv, c);
    }

    pub fn scaled(&self, c: &Coeff) -> Self {
        Self { v: self.v.scaled(c), mv: self.mv.scaled(c) }
    }

    pub fn max_weight(&self, params: &Params) -> Option<Rational> {
        match (self.v.max_weight(params), self.mv.max_weight(params)) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }
    }

    pub fn render(&self, params: &Params) -> String {
        match (self.v.is_zero(), self.mv.is_zero()) {
            (_, true) => self.v.render(params),
            (true, false) => format!("[MV] {}", self.mv.render(params)),
            (false, false) => format!("{} + [MV] {}", self.v.render(params), self.mv.render(params)),
        }
    }
}

impl core::ops::AddAssign<&AmbientState> for AmbientState {
    fn add_assign(&mut self, rhs: &AmbientState) {
        self.v += &rhs.v;
        self.mv += &rhs.mv;
    }
}

impl core::ops::Sub<&AmbientState> for &AmbientState {
    type Output = AmbientState;

    fn sub(self, rhs: &AmbientState) -> AmbientState {
        AmbientState { v: &self.v - &rhs.v, mv: &self.mv - &rhs.mv }
    }
}

#[derive(Debug)]
pub enum FieldNode {
    Identity,
    /// `Y(u, z)` for `u ∈ V(p,p')`, acting on both summands with component
    /// selection.
    Vertex(State),
    /// `𝒴(m, z)` for `m ∈ MV(p,p')`: maps `V(p,p')` to `MV(p,p')`, zero on
    /// `MV(p,p')`.
    Intertwine(State),
    Combination(Vec<(Coeff, Field)>),
    /// `a(z)_n b(z)`.
    Product { a: Field, n: i64, b: Field },
    Derivative(Field),
    /// `z^{-k} a(z)`, so mode `m` is `a_{m-k}`.
    Shift { a: Field, k: i64 },
    /// `L̄(z) = Σ L̄(n) z^{-n-2}` with the module's own component selection.
    Lbar,
}

#[derive(Debug)]
struct Inner {
    id: usize,
    name: String,
    weight: Rational,
    node: FieldNode,
}

/// Mode family `a(z) = Σ a_n z^{-n-1}` with `a_n` shifting weight by
/// `weight - n - 1`.
#[derive(Clone, Debug)]
pub struct Field {
    inner: Arc<Inner>,
}

impl Field {
    fn make(name: impl Into<String>, weight: Rational, node: FieldNode) -> Self {
        let id = NEXT_ID.fetch_add(1, Ordering::Relaxed);
        Self { inner: Arc::new(Inner { id, name: name.into(), weight, node }) }
    }

    pub fn identity() -> Self {
        Self::make("I", Rational::zero(), FieldNode::Identity)
    }

    pub fn zero(weight: Rational) -> Self {
        Self::make("0", weight, FieldNode::Combination(Vec::new()))
    }

    pub fn vertex(name: impl Into<String>, u: State, params: &Params) -> Result<Self> {
        let w = homogeneous(&u, params)?;
        Ok(Self::make(name, w, FieldNode::Vertex(u)))
    }

    pub fn intertwine(name: impl Into<String>, m: State, params: &Params) -> Result<Self> {
        let w = homogeneous(&m, params)?;
        Ok(Self::make(name, w, FieldNode::Intertwine(m)))
    }

    pub fn lbar() -> Self {
        Self::make("Lbar", Rational::from_integer(2), FieldNode::Lbar)
    }

    /// Linear combination of fields of equal weight.
    pub fn combination(name: impl Into<String>, terms: Vec<(Coeff, Field)>) -> Result<Self> {
        let Some(w) = terms.first().map(|(_, f)| f.weight()) else {
            return Err(Error::Domain("empty combination has no weight".into()));
        };
        if terms.iter().any(|(_, f)| f.weight() != w) {
            return Err(Error::Domain("combination of fields of different weights".into()));
        }
        Ok(Self::make(name, w, FieldNode::Combination(terms)))
    }

    pub fn sum(name: impl Into<String>, a: &Field, b: &Field) -> Result<Self> {
        Self::combination(name, alloc::vec![(Coeff::one(), a.clone()), (Coeff::one(), b.clone())])
    }

    pub fn difference(name: impl Into<String>, a: &Field, b: &Field) -> Result<Self> {
        Self::combination(name, alloc::vec![(Coeff::one(), a.clone()), (-Coeff::one(), b.clone())])
    }

    pub fn scaled(name: impl Into<String>, c: Coeff, a: &Field) -> Self {
        Self::make(name, a.weight(), FieldNode::Combination(alloc::vec![(c, a.clone())]))
    }

    pub fn product(a: &Field, n: i64, b: &Field) -> Self {
        let name = format!("({})_{}({})", a.name(), n, b.name());
        let w = a.weight() + b.weight() - Rational::from_integer(n + 1);
        Self::make(name, w, FieldNode::Product { a: a.clone(), n, b: b.clone() })
    }

    pub fn derivative(a: &Field) -> Self {
        Self::make(format!("D({})", a.name()), a.weight() + Rational::one(), FieldNode::Derivative(a.clone()))
    }

    pub fn shift(a: &Field, k: i64) -> Self {
        if k == 0 {
            return a.clone();
        }
        Self::make(format!("z^{}({})", -k, a.name()), a.weight() + Rational::from_integer(k), FieldNode::Shift { a: a.clone(), k })
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        // Wrap rather than copy so the memo stays shared.
        Self::make(name, self.weight(), FieldNode::Combination(alloc::vec![(Coeff::one(), self.clone())]))
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn weight(&self) -> Rational {
        self.inner.weight
    }

    pub fn node(&self) -> &FieldNode {
        &self.inner.node
    }

    fn id(&self) -> usize {
        self.inner.id
    }
}

fn homogeneous(s: &State, params: &Params) -> Result<Rational> {
    s.homogeneous_weight(params).ok_or_else(|| Error::Domain("field state must be nonzero and homogeneous".into()))
}

fn floor_i64(r: Rational) -> i64 {
    r.floor().to_integer()
}

fn ceil_i64(r: Rational) -> i64 {
    r.ceil().to_integer()
}

fn coeff(n: BigInt) -> Coeff {
    Coeff::from_integer(n)
}

/// The "verified up to weight `W`" contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationWindow {
    pub max_weight: Rational,
    /// Also test on `MV(p,p')`.
    pub include_mv: bool,
}

impl TruncationWindow {
    pub fn new(max_weight: Rational, include_mv: bool) -> Result<Self> {
        if max_weight < Rational::zero() {
            return Err(Error::NegativeWeight(max_weight));
        }
        Ok(Self { max_weight, include_mv })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Side {
    V,
    Mv,
}

type MemoKey = (usize, i64, Side, FockMonomial);

/// A failed mode comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub input: String,
    pub mode: i64,
    pub lhs: String,
    pub rhs: String,
}

/// Evaluation context: modules, window, input basis and memo.
pub struct FieldContext {
    engine: Engine,
    v: FourCosetModule,
    mv: FourCosetModule,
    window: TruncationWindow,
    gmin: i64,
    inputs: Vec<(Rational, AmbientState, String)>,
    memo: RefCell<BTreeMap<MemoKey, AmbientState>>,
}

impl FieldContext {
    pub fn new(params: Params, window: TruncationWindow) -> Self {
        let engine = Engine::new(params);
        let v = FourCosetModule::v(params);
        let mv = FourCosetModule::mv(params);
        let mut inputs = Vec::new();
        for m in v.basis(window.max_weight).all() {
            inputs.push((m.weight(&params), AmbientState::in_v(State::monomial(m.clone())), m.render()));
        }
        if window.include_mv {
            for m in mv.basis(window.max_weight).all() {
                inputs.push((m.weight(&params), AmbientState::in_mv(State::monomial(m.clone())), format!("[MV] {}", m.render())));
            }
        }
        let gmin = floor_i64(params.weight_floor());
        Self { engine, v, mv, window, gmin, inputs, memo: RefCell::new(BTreeMap::new()) }
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn params(&self) -> &Params {
        self.engine.params()
    }

    pub fn window(&self) -> &TruncationWindow {
        &self.window
    }

    /// Number of basis inputs identities are tested on.
    pub fn input_count(&self) -> usize {
        self.inputs.len()
    }

    pub fn clear_memo(&self) {
        self.memo.borrow_mut().clear();
    }

    /// `a_m s`.
    pub fn apply(&self, a: &Field, m: i64, s: &AmbientState) -> AmbientState {
        let mut out = AmbientState::default();
        for (mono, c) in s.v.iter() {
            out.add_scaled(&self.apply_monomial(a, m, Side::V, mono), c);
        }
        for (mono, c) in s.mv.iter() {
            out.add_scaled(&self.apply_monomial(a, m, Side::Mv, mono), c);
        }
        out
    }

    fn apply_monomial(&self, a: &Field, m: i64, side: Side, mono: &FockMonomial) -> AmbientState {
        let key = (a.id(), m, side, mono.clone());
        if let Some(hit) = self.memo.borrow().get(&key) {
            return hit.clone();
        }
        let out = self.evaluate(a, m, side, mono);
        self.memo.borrow_mut().insert(key, out.clone());
        out
    }

    fn evaluate(&self, a: &Field, m: i64, side: Side, mono: &FockMonomial) -> AmbientState {
        let s = State::monomial(mono.clone());
        let wrap = |st: State| match side {
            Side::V => AmbientState::in_v(st),
            Side::Mv => AmbientState::in_mv(st),
        };
        let mode = Rational::from_integer(m);
        match a.node() {
            FieldNode::Identity => {
                if m == -1 {
                    wrap(s)
                } else {
                    AmbientState::default()
                }
            }
            FieldNode::Vertex(u) => {
                let module = if side == Side::V { &self.v } else { &self.mv };
                wrap(module.vertex_mode(&self.engine, u, mode, &s))
            }
            FieldNode::Intertwine(u) => match side {
                Side::V => AmbientState::in_mv(intertwine_mode(&self.engine, u, mode, &s)),
                Side::Mv => AmbientState::default(),
            },
            FieldNode::Lbar => {
                let module = if side == Side::V { &self.v } else { &self.mv };
                wrap(self.engine.lbar_mode(module, m - 1, &s))
            }
            FieldNode::Combination(terms) => {
                let mut out = AmbientState::default();
                let input = wrap(s);
                for (c, f) in terms {
                    out.add_scaled(&self.apply(f, m, &input), c);
                }
                out
            }
            FieldNode::Derivative(f) => {
                if m == 0 {
                    return AmbientState::default();
                }
                self.apply(f, m - 1, &wrap(s)).scaled(&Coeff::from_integer((-m).into()))
            }
            FieldNode::Shift { a: f, k } => self.apply(f, m - k, &wrap(s)),
            FieldNode::Product { a: fa, n, b: fb } => {
                let w = mono.weight(self.params());
                self.product_mode(fa, *n, fb, m, w, &wrap(s))
            }
        }
    }

    /// `(a_n b)_m s = Σ_{j≥0} (-1)^j C(n,j) (a_{n-j} b_{m+j} s - (-1)^n b_{n+m-j} a_j s)`.
    /// Terms vanish once an intermediate weight falls below the weight floor.
    fn product_mode(&self, a: &Field, n: i64, b: &Field, m: i64, w: Rational, s: &AmbientState) -> AmbientState {
        let g = Rational::from_integer(self.gmin);
        let j1 = floor_i64(w + b.weight() - Rational::from_integer(m + 1) - g);
        let j2 = floor_i64(w + a.weight() - Rational::one() - g);
        let (j1, j2) = if n >= 0 { (j1.min(n), j2.min(n)) } else { (j1, j2) };
        let mut out = AmbientState::default();
        for j in 0..=j1 {
            let c: BigInt = binomial(n, j) * if j % 2 == 0 { 1i64 } else { -1 };
            if c.is_zero() {
                continue;
            }
            let inner = self.apply(b, m + j, s);
            if inner.is_zero() {
                continue;
            }
            out.add_scaled(&self.apply(a, n - j, &inner), &coeff(c));
        }
        let sign_n: i64 = if n.rem_euclid(2) == 0 { 1 } else { -1 };
        for j in 0..=j2 {
            let c: BigInt = binomial(n, j) * (if j % 2 == 0 { 1i64 } else { -1 } * -sign_n);
            if c.is_zero() {
                continue;
            }
            let inner = self.apply(a, j, s);
            if inner.is_zero() {
                continue;
            }
            out.add_scaled(&self.apply(b, n + m - j, &inner), &coeff(c));
        }
        out
    }

    /// Modes `m` for which `a_m` maps weight `w` into `[h_min, W]`.
    fn mode_range(&self, h: Rational, w: Rational) -> core::ops::RangeInclusive<i64> {
        let lo = ceil_i64(w + h - Rational::one() - self.window.max_weight);
        let hi = floor_i64(w + h - Rational::one() - Rational::from_integer(self.gmin));
        lo..=hi
    }

    /// First windowed mode where `a` and `b` differ, if any.
    pub fn fields_agree(&self, a: &Field, b: &Field) -> Option<Mismatch> {
        for (w, s, label) in &self.inputs {
            let ra = self.mode_range(a.weight(), *w);
            let rb = self.mode_range(b.weight(), *w);
            let lo = *ra.start().min(rb.start());
            let hi = *ra.end().max(rb.end());
            for m in lo..=hi {
                let x = self.apply(a, m, s);
                let y = self.apply(b, m, s);
                if x != y {
                    return Some(Mismatch {
                        input: label.clone(),
                        mode: m,
                        lhs: x.render(self.params()),
                        rhs: y.render(self.params()),
                    });
                }
            }
        }
        None
    }

    pub fn zero_in_window(&self, a: &Field) -> Option<Mismatch> {
        self.fields_agree(a, &Field::zero(a.weight()))
    }

    /// First input where two operators differ; `lift` gives operator values
    /// on basis inputs.
    pub fn operators_agree(
        &self,
        mut lhs: impl FnMut(&AmbientState) -> AmbientState,
        mut rhs: impl FnMut(&AmbientState) -> AmbientState,
    ) -> Option<Mismatch> {
        for (_, s, label) in &self.inputs {
            let x = lhs(s);
            let y = rhs(s);
            if x != y {
                return Some(Mismatch { input: label.clone(), mode: 0, lhs: x.render(self.params()), rhs: y.render(self.params()) });
            }
        }
        None
    }

    /// `[a_p, b_q] s`.
    pub fn commutator(&self, a: &Field, p: i64, b: &Field, q: i64, s: &AmbientState) -> AmbientState {
        let ab = self.apply(a, p, &self.apply(b, q, s));
        let ba = self.apply(b, q, &self.apply(a, p, s));
        &ab - &ba
    }

    /// Smallest `k ≤ k_max` with `Σ_i (-1)^i C(k,i) [a_{m-i}, b_{r+i}] = 0`
    /// on every windowed input and every `(m, r)` for which the output
    /// weight lies in `[h_min, W]`. For fixed `m + r` the range of `r` is
    /// complete: outside it every term vanishes by the weight floor.
    pub fn locality_order(&self, a: &Field, b: &Field, k_max: u32) -> Result<u32> {
        let g = Rational::from_integer(self.gmin);
        'orders: for k in 0..=k_max {
            let k = i64::from(k);
            for (w, s, _) in &self.inputs {
                let top = *w + a.weight() + b.weight() - Rational::from_integer(2);
                let t_lo = ceil_i64(top - self.window.max_weight);
                let t_hi = floor_i64(top - g);
                for t in t_lo..=t_hi {
                    let r_hi = floor_i64(*w + b.weight() - Rational::one() - g);
                    let r_lo = t - k - floor_i64(*w + a.weight() - Rational::one() - g);
                    for r in r_lo..=r_hi {
                        let m = t - r;
                        let mut acc = AmbientState::default();
                        for i in 0..=k {
                            let c: BigInt = binomial(k, i) * if i % 2 == 0 { 1i64 } else { -1 };
                            acc.add_scaled(&self.commutator(a, m - i, b, r + i, s), &coeff(c));
                        }
                        if !acc.is_zero() {
                            continue 'orders;
                        }
                    }
                }
            }
            return Ok(k as u32);
        }
        Err(Error::NotLocalUpTo(k_max))
    }
}

/// `Ỹ(v, z) = Y(Δ(e^{-α/p}, z) v, z)` for homogeneous `v ∈ Ker Q̃` in
/// `V(p,p')`.
pub fn tilde_field(engine: &Engine, name: &str, v: &State) -> Result<Field> {
    let params = engine.params();
    let delta = engine.delta_apply(v)?;
    let mut terms = Vec::new();
    for (e, d) in delta.iter() {
        if !e.is_integer() {
            return Err(Error::Domain(format!("non-integral exponent {e} in Δ expansion")));
        }
        let f = Field::vertex(format!("{name}[{e}]"), d.clone(), params)?;
        terms.push((Coeff::one(), Field::shift(&f, -e.to_integer())));
    }
    Field::combination(name, terms)
}

/// The fields used by the identity suite.
#[derive(Clone, Debug)]
pub struct NamedFields {
    pub identity: Field,
    /// `L(z) = Y(ω, z)`.
    pub l: Field,
    /// `L̃(z) = Ỹ(ω, z) = L(z) + z^{-1} e^{-α/p}(z)`.
    pub ltilde: Field,
    /// `e^{α/p'}(z)`.
    pub e: Field,
    /// `e^{-α/p}(z)`.
    pub f: Field,
    /// `e^{α/p'-α/p}(z)`.
    pub g: Field,
    /// `z^{-1} e^{α/p'-α/p}(z)`.
    pub zg: Field,
    /// `z^{-1} D e^{α/p'-α/p}(z)`.
    pub zdg: Field,
    pub h: Field,
    pub htilde: Field,
    pub lbar: Field,
}

pub fn build_named_fields(engine: &Engine) -> Result<NamedFields> {
    let p = engine.params();
    let omega = engine.conformal_vector();
    let l = Field::vertex("L", omega.clone(), p)?;
    let ltilde = tilde_field(engine, "Lt", &omega)?;
    let e = Field::vertex("e", State::exponential(p.alpha_over_p_prime()), p)?;
    let f = Field::vertex("f", State::exponential(p.minus_alpha_over_p()), p)?;
    let g = Field::vertex("g", State::exponential(p.screening_difference()), p)?;
    let zg = Field::shift(&g, 1).renamed("z^-1 g");
    let zdg = Field::shift(&Field::derivative(&g), 1).renamed("z^-1 Dg");
    let h = Field::sum("H", &e, &zg)?;
    let nu = p.nu();
    let nu = Coeff::new((*nu.numer()).into(), (*nu.denom()).into());
    let htilde = Field::combination("Ht", alloc::vec![(Coeff::one(), e.clone()), (nu, zg.clone())])?;
    Ok(NamedFields { identity: Field::identity(), l, ltilde, e, f, g, zg, zdg, h, htilde, lbar: Field::lbar() })
}

/// `Y(Δ(H̃(z), z₁) a(z), z₁)` as a field: `exp(Σ_{n≥1} (-1)^{n+1}/n z₁^{-n} H̃_n) a`.
/// Requires `H̃_0 a = 0` in the window; the series is cut at the locality
/// order of `(H̃, a)`, beyond which `H̃_n a = 0`.
pub fn delta_field_deform(ctx: &FieldContext, htilde: &Field, target: &Field, k_max: u32) -> Result<Field> {
    if let Some(m) = ctx.zero_in_window(&Field::product(htilde, 0, target)) {
        return Err(Error::Domain(format!("H̃_0 does not annihilate {} (input {}, mode {})", target.name(), m.input, m.mode)));
    }
    // Terms of the exponential: shift -> field.
    let mut total: BTreeMap<i64, Vec<(Coeff, Field)>> = BTreeMap::new();
    total.entry(0).or_default().push((Coeff::one(), target.clone()));
    let mut layer: Vec<(i64, Coeff, Field)> = alloc::vec![(0, Coeff::one(), target.clone())];
    let mut order = 1i64;
    while !layer.is_empty() {
        let mut next = Vec::new();
        for (shift, c, fld) in &layer {
            let top = ctx.locality_order(htilde, fld, k_max)?;
            for n in 1..i64::from(top).max(1) {
                let prod = Field::product(htilde, n, fld);
                if ctx.zero_in_window(&prod).is_none() {
                    continue;
                }
                let sign = if n % 2 == 1 { 1 } else { -1 };
                let k = c * Coeff::new(sign.into(), (n * order).into());
                next.push((shift + n, k, prod));
            }
        }
        for (shift, c, f) in &next {
            total.entry(*shift).or_default().push((c.clone(), f.clone()));
        }
        layer = next;
        order += 1;
    }
    let mut terms = Vec::new();
    for (shift, parts) in total {
        for (c, f) in parts {
            terms.push((c, Field::shift(&f, shift)));
        }
    }
    Ok(Field::combination(format!("Delta(Ht){}", target.name()), terms)?.renamed(format!("Delta(Ht){}", target.name())))
}

fn outcome_equal(ctx: &FieldContext, name: &str, claim: &str, a: &Field, b: &Field) -> Outcome {
    match ctx.fields_agree(a, b) {
        None => Outcome::new(name, claim, Status::Pass).with("inputs", ctx.input_count().to_string()),
        Some(m) => mismatch_outcome(name, claim, Status::Fail, &m),
    }
}

fn mismatch_outcome(name: &str, claim: &str, status: Status, m: &Mismatch) -> Outcome {
    Outcome::new(name, claim, status)
        .with("input", m.input.clone())
        .with("mode", m.mode.to_string())
        .with("lhs", m.lhs.clone())
        .with("rhs", m.rhs.clone())
}

fn coeff_of(r: Rational) -> Coeff {
    Coeff::new((*r.numer()).into(), (*r.denom()).into())
}

/// `[L̃_{n+1}, H̃_m]` against `c(m) H_{m+n}` for `n, m ∈ {-2..2}`.
fn com_field(ctx: &FieldContext, nf: &NamedFields, scale: impl Fn(i64) -> Coeff) -> Option<(i64, i64, Mismatch)> {
    for n in -2..=2i64 {
        for m in -2..=2i64 {
            let c = scale(m);
            let hit = ctx.operators_agree(
                |s| ctx.commutator(&nf.ltilde, n + 1, &nf.htilde, m, s),
                |s| ctx.apply(&nf.h, m + n, s).scaled(&c),
            );
            if let Some(x) = hit {
                return Some((n, m, x));
            }
        }
    }
    None
}

/// The identities among `L̃`, `H`, `H̃` and the `e`-fields.
pub fn identity_suite(ctx: &FieldContext, nf: &NamedFields) -> Result<Vec<Outcome>> {
    let nu = coeff_of(ctx.params().nu());
    let mut out = Vec::new();
    let prod = Field::product;

    out.push(outcome_equal(
        ctx,
        "e_1 Lt = e + z^-1 g",
        "e^{α/p'}(z)_1 L̃(z) = e^{α/p'}(z) + z^{-1}e^{α/p'-α/p}(z)",
        &prod(&nf.e, 1, &nf.ltilde),
        &nf.h,
    ));
    out.push(outcome_equal(
        ctx,
        "(z^-1 g)_1 Lt = 0",
        "(z^{-1}e^{α/p'-α/p}(z))_1 L̃(z) = 0",
        &prod(&nf.zg, 1, &nf.ltilde),
        &Field::zero(nf.zg.weight() + nf.ltilde.weight() - Rational::from_integer(2)),
    ));
    out.push(outcome_equal(
        ctx,
        "e_0 Lt = nu z^-1 Dg",
        "e^{α/p'}(z)_0 L̃(z) = p/(p-p') z^{-1}De^{α/p'-α/p}(z)",
        &prod(&nf.e, 0, &nf.ltilde),
        &Field::scaled("nu z^-1 Dg", nu.clone(), &nf.zdg),
    ));
    out.push(outcome_equal(
        ctx,
        "(z^-1 g)_0 Lt = -z^-1 Dg",
        "(z^{-1}e^{α/p'-α/p}(z))_0 L̃(z) = -z^{-1}De^{α/p'-α/p}(z)",
        &prod(&nf.zg, 0, &nf.ltilde),
        &Field::scaled("-z^-1 Dg", -Coeff::one(), &nf.zdg),
    ));
    out.push(outcome_equal(ctx, "Ht_0 Lt = 0", "H̃(z)_0 L̃(z) = 0", &prod(&nf.htilde, 0, &nf.ltilde), &Field::zero(Rational::from_integer(2))));
    out.push(outcome_equal(ctx, "Ht_1 Lt = H", "H̃(z)_1 L̃(z) = H(z)", &prod(&nf.htilde, 1, &nf.ltilde), &nf.h));
    for n in [2i64, 3] {
        let w = nf.htilde.weight() + nf.ltilde.weight() - Rational::from_integer(n + 1);
        out.push(outcome_equal(
            ctx,
            &format!("Ht_{n} Lt = 0"),
            &format!("H̃(z)_{n} L̃(z) = 0"),
            &prod(&nf.htilde, n, &nf.ltilde),
            &Field::zero(w),
        ));
    }
    out.push(outcome_equal(ctx, "Lt_1 H = H", "L̃(z)_1 H(z) = H(z)", &prod(&nf.ltilde, 1, &nf.h), &nf.h));

    let name = "Lt_0 H != DH";
    let claim = "L̃(z)_0 H(z) ≠ DH(z)";
    out.push(match ctx.fields_agree(&prod(&nf.ltilde, 0, &nf.h), &Field::derivative(&nf.h)) {
        Some(m) => mismatch_outcome(name, claim, Status::Pass, &m),
        None => Outcome::new(name, claim, Status::Fail),
    });

    // Literal form, with right-hand side H_{m+n}; only m = -1 can hold since
    // [H̃_0, L̃_k] = 0.
    let name = "com-field as stated";
    let claim = "[L̃(z)_{n+1}, H̃(z)_m] = H(z)_{m+n}, n,m in -2..2";
    out.push(match com_field(ctx, nf, |_| Coeff::one()) {
        None => Outcome::new(name, claim, Status::Pass),
        Some((n, m, x)) => mismatch_outcome(name, claim, Status::Finding, &x)
            .with("n", n.to_string())
            .with("m", m.to_string())
            .with("note", "commutator formula gives -m H(z)_{m+n}"),
    });
    let name = "com-field from commutator formula";
    let claim = "[L̃(z)_{n+1}, H̃(z)_m] = -m H(z)_{m+n}, n,m in -2..2";
    out.push(match com_field(ctx, nf, |m| Coeff::from_integer((-m).into())) {
        None => Outcome::new(name, claim, Status::Pass).with("inputs", ctx.input_count().to_string()),
        Some((n, m, x)) => mismatch_outcome(name, claim, Status::Fail, &x).with("n", n.to_string()).with("m", m.to_string()),
    });

    let name = "[Ht_0, Yt(omega)] = 0";
    let claim = "[H̃(z)_0, Ỹ(ω,z)_k] = Ỹ(Qω,z)_k = 0, k in -2..3";
    let mut bad = None;
    for k in -2..=3i64 {
        if let Some(x) = ctx.operators_agree(|s| ctx.commutator(&nf.htilde, 0, &nf.ltilde, k, s), |_| AmbientState::default()) {
            bad = Some((k, x));
            break;
        }
    }
    out.push(match bad {
        None => Outcome::new(name, claim, Status::Pass),
        Some((k, x)) => mismatch_outcome(name, claim, Status::Fail, &x).with("k", k.to_string()),
    });

    let name = "Delta(Ht) Lt = Lbar";
    let claim = "Y(Δ(H̃(z),z₁)L̃(z), z₁) = L̃(z₁) + z₁^{-1}H(z₁) = L̄(z₁)";
    out.push(match delta_field_deform(ctx, &nf.htilde, &nf.ltilde, 6) {
        Ok(d) => outcome_equal(ctx, name, claim, &d, &nf.lbar),
        Err(e) => Outcome::new(name, claim, Status::Fail).with("error", e.to_string()),
    });

    for (label, l0) in [("Lt", &nf.ltilde), ("L", &nf.l)] {
        out.push(outcome_equal(
            ctx,
            &format!("{label}_0 (z^-1 g) = z^-1 Dg"),
            &format!("{label}(z)_0 (z^{{-1}}e^{{α/p'-α/p}}(z)) = z^{{-1}}De^{{α/p'-α/p}}(z)"),
            &prod(l0, 0, &nf.zg),
            &nf.zdg,
        ));
        let u = Field::difference("U(z^-1 g)", &prod(l0, 0, &nf.zg), &Field::derivative(&nf.zg))?;
        out.push(outcome_equal(
            ctx,
            &format!("z^-2 g = -D(z^-1 g) + {label}_0 (z^-1 g)"),
            &format!("z^{{-2}}e^{{α/p'-α/p}}(z) = -D(z^{{-1}}e^{{α/p'-α/p}}(z)) + {label}(z)_0 z^{{-1}}e^{{α/p'-α/p}}(z)"),
            &Field::shift(&nf.g, 2),
            &u,
        ));
    }
    Ok(out)
}

/// Pairwise locality orders among `fields`, in input order.
pub fn locality_table(ctx: &FieldContext, fields: &[&Field], k_max: u32) -> Vec<(String, String, Result<u32>)> {
    let mut out = Vec::new();
    for (i, a) in fields.iter().enumerate() {
        for b in &fields[i..] {
            out.push((a.name().to_string(), b.name().to_string(), ctx.locality_order(a, b, k_max)));
        }
    }
    out
}

/// `true` if the coefficient is a positive integer (used in reports).
pub fn is_positive(c: &Coeff) -> bool {
    c.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::DualVector;
    use alloc::vec;

    fn ctx(w: i64, mv: bool) -> FieldContext {
        FieldContext::new(Params::new(3, 2).unwrap(), TruncationWindow::new(Rational::from_integer(w), mv).unwrap())
    }

    #[test]
    fn identity_is_unit() {
        let c = ctx(3, false);
        let e = c.engine();
        let a = Field::vertex("a", State::monomial(FockMonomial::new(DualVector(0), vec![1])), e.params()).unwrap();
        assert!(c.fields_agree(&Field::product(&Field::identity(), -1, &a), &a).is_none());
        assert!(c.zero_in_window(&Field::derivative(&Field::identity())).is_none());
    }

    #[test]
    fn products_match_vertex_algebra_oracle() {
        // For vertex operators of V_L, Y(u,z)_n Y(v,z) = Y(u_n v, z).
        let c = ctx(3, false);
        let e = *c.engine();
        let p = e.params();
        let states = [
            State::monomial(FockMonomial::new(DualVector(0), vec![1])),
            e.conformal_vector(),
            State::exponential(DualVector(12)),
            State::monomial(FockMonomial::new(DualVector(-12), vec![1])),
        ];
        for u in &states[..2] {
            for v in &states {
                let fu = Field::vertex("u", u.clone(), p).unwrap();
                let fv = Field::vertex("v", v.clone(), p).unwrap();
                for n in -2..=2 {
                    let direct = e.field_mode(u, Rational::from_integer(n), v);
                    if direct.is_zero() {
                        assert!(c.zero_in_window(&Field::product(&fu, n, &fv)).is_none(), "n = {n}");
                        continue;
                    }
                    let fd = Field::vertex("uv", direct, p).unwrap();
                    assert!(c.fields_agree(&Field::product(&fu, n, &fv), &fd).is_none(), "n = {n}");
                }
            }
        }
    }

    #[test]
    fn derivative_as_minus_two_product() {
        let c = ctx(3, false);
        let p = *c.params();
        let e = Field::vertex("e", State::exponential(p.alpha_over_p_prime()), &p).unwrap();
        assert!(c.fields_agree(&Field::product(&e, -2, &Field::identity()), &Field::derivative(&e)).is_none());
    }

    #[test]
    fn leibniz() {
        let c = ctx(3, false);
        let nf = build_named_fields(c.engine()).unwrap();
        for n in [-1i64, 0, 1] {
            let lhs = Field::derivative(&Field::product(&nf.e, n, &nf.ltilde));
            let rhs = Field::sum(
                "leibniz",
                &Field::product(&Field::derivative(&nf.e), n, &nf.ltilde),
                &Field::product(&nf.e, n, &Field::derivative(&nf.ltilde)),
            )
            .unwrap();
            assert!(c.fields_agree(&lhs, &rhs).is_none(), "n = {n}");
        }
    }

    #[test]
    fn ltilde_is_l_plus_shifted_f() {
        let c = ctx(3, false);
        let nf = build_named_fields(c.engine()).unwrap();
        let direct = Field::sum("L + z^-1 f", &nf.l, &Field::shift(&nf.f, 1)).unwrap();
        assert!(c.fields_agree(&nf.ltilde, &direct).is_none());
    }

    #[test]
    fn screening_current_is_local_with_itself() {
        let c = ctx(3, false);
        let nf = build_named_fields(c.engine()).unwrap();
        assert_eq!(c.locality_order(&nf.e, &nf.e, 4), Ok(0));
    }
}
