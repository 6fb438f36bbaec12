//! Verification suites. Each returns outcomes in a fixed order; parallel
//! work is collected by index so reports do not depend on scheduling.

use logvoa_core::check::{Outcome, Status};
use logvoa_core::fields::{build_named_fields, identity_suite, locality_table, FieldContext, TruncationWindow};
use logvoa_core::fock::{basis_at_weight, enumerate_basis, FockMonomial};
use logvoa_core::linalg::{kernel_with, nilpotency_rank, RationalMatrix, Strategy};
use logvoa_core::models::{
    certificate_from, doublet_lowest_weight, find_subsingular, intertwiner_eval, kernel_primaries, operator_matrix,
    screening_matrix, state_from, FourCosetModule, KernelPiece, ModuleKind, RankCertificate, WeightRank,
};
use logvoa_core::vertex::Engine;
use logvoa_core::{Coeff, DualVector, Params, Rational, State};
use rayon::prelude::*;

use crate::cache::{CacheKey, MatrixCache};
use crate::config::{ModuleSel, RunConfig};
use crate::report::{rational, Report};

/// Shared inputs of the suites.
pub struct Context {
    pub params: Params,
    pub engine: Engine,
    pub max_weight: Rational,
    pub cache: Option<MatrixCache>,
}

impl Context {
    pub fn new(params: Params, max_weight: Rational) -> Self {
        Self { params, engine: Engine::new(params), max_weight, cache: None }
    }

    pub fn with_cache(mut self, cache: MatrixCache) -> Self {
        self.cache = Some(cache);
        self
    }

    fn matrix(
        &self,
        operator: &str,
        residue: i64,
        weight: Rational,
        compute: impl FnOnce() -> logvoa_core::Result<RationalMatrix>,
    ) -> logvoa_core::Result<RationalMatrix> {
        match &self.cache {
            None => compute(),
            Some(c) => {
                let key = CacheKey {
                    version: env!("CARGO_PKG_VERSION").to_string(),
                    p: self.params.p(),
                    p_prime: self.params.p_prime(),
                    operator: operator.to_string(),
                    residue,
                    weight,
                };
                c.get_or_compute(&key, compute)
            }
        }
    }

    /// Kernel of `Q` and `Q̃` on one weight of a coset, re-checked on the
    /// operators themselves.
    pub fn kernel_piece(&self, residue: i64, weight: Rational, strategy: Option<Strategy>) -> logvoa_core::Result<KernelPiece> {
        let source = basis_at_weight(residue, weight, &self.params);
        let m = self.matrix("QQt", residue, weight, || screening_matrix(&self.engine, residue, weight).map(|x| x.1))?;
        let strategy = strategy.unwrap_or(Strategy::for_shape(m.rows(), m.cols()));
        let basis: Vec<State> = kernel_with(&m, strategy).iter().map(|v| state_from(v, &source)).collect();
        for v in &basis {
            if !self.engine.screening_q(v).is_zero() || !self.engine.screening_qtilde(v).is_zero() {
                return Err(logvoa_core::Error::Domain("kernel vector not annihilated".into()));
            }
        }
        Ok(KernelPiece { residue, weight, ambient_dim: source.len(), basis })
    }

    pub fn rank_certificate(&self, module: &FourCosetModule, max_weight: Rational) -> logvoa_core::Result<RankCertificate> {
        let op = format!("N-{}", module.kind().as_str());
        let weights: Vec<Rational> = module.basis(max_weight).weights().collect();
        let per_weight = weights
            .par_iter()
            .map(|&w| {
                let basis = module.basis_at_weight(w);
                let m = self.matrix(&op, 0, w, || {
                    operator_matrix(&basis, &basis, |s| self.engine.lbar_nilpotent_mode(module, 0, s))
                })?;
                let report = nilpotency_rank(&m)?;
                let witness = state_from(&report.witness, &basis);
                Ok(WeightRank { weight: w, dim: basis.len(), report, witness })
            })
            .collect::<logvoa_core::Result<Vec<_>>>()?;
        Ok(certificate_from(module.kind(), max_weight, per_weight))
    }
}

fn coeff(r: Rational) -> Coeff {
    Coeff::new((*r.numer()).into(), (*r.denom()).into())
}

fn error_outcome(name: &str, claim: &str, e: impl std::fmt::Display) -> Outcome {
    Outcome::new(name, claim, Status::Fail).with("error", e.to_string())
}

pub fn central_charge(params: Params) -> Outcome {
    let e = Engine::new(params);
    let closed = e.central_charge();
    let modes = e.central_charge_from_modes();
    Outcome::new(
        format!("central charge ({},{})", params.p(), params.p_prime()),
        "c = 1 - 6(p-p')^2/(pp') = 2 × (vacuum coefficient of L(2)L(-2)1)",
        Status::from_bool(coeff(closed) == modes),
    )
    .with("closed form", rational(closed))
    .with("from modes", format!("{}/{}", modes.numer(), modes.denom()))
}

/// Which operators the bracket check uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketTarget {
    /// `L(n)` on `V_L`.
    Lattice,
    /// `L(n)` on a four-coset module.
    Plain(ModuleKind),
    /// `L̄(n)` on a four-coset module.
    Deformed(ModuleKind),
}

/// `[X(m), X(n)] = (m-n) X(m+n) + (m^3-m)/12 c δ_{m+n,0}` for `|m|, |n| ≤ 3`
/// on every basis state of weight at most `W`.
pub fn virasoro_bracket(ctx: &Context, target: BracketTarget) -> Outcome {
    let p = ctx.params;
    let (inputs, module, label): (Vec<FockMonomial>, Option<FourCosetModule>, String) = match target {
        BracketTarget::Lattice => (enumerate_basis(0, ctx.max_weight, &p), None, "L(n) on V_L".into()),
        BracketTarget::Plain(k) => {
            let m = FourCosetModule::new(k, p);
            (m.basis(ctx.max_weight).all().cloned().collect(), None, format!("L(n) on {}", k.as_str()))
        }
        BracketTarget::Deformed(k) => {
            let m = FourCosetModule::new(k, p);
            (m.basis(ctx.max_weight).all().cloned().collect(), Some(m), format!("Lbar(n) on {}", k.as_str()))
        }
    };
    let e = &ctx.engine;
    let op = |n: i64, s: &State| match &module {
        None => e.virasoro_mode(n, s),
        Some(m) => e.lbar_mode(m, n, s),
    };
    let c = coeff(p.central_charge());
    let failures: Vec<Option<(String, i64, i64)>> = inputs
        .par_iter()
        .map(|mono| {
            let s = State::monomial(mono.clone());
            for m in -3..=3i64 {
                for n in -3..=3i64 {
                    let lhs = &op(m, &op(n, &s)) - &op(n, &op(m, &s));
                    let mut rhs = op(m + n, &s).scaled(&Coeff::from_integer((m - n).into()));
                    if m + n == 0 {
                        rhs.add_scaled(&s, &(&c * Coeff::new((m * m * m - m).into(), 12.into())));
                    }
                    if lhs != rhs {
                        return Some((mono.render(), m, n));
                    }
                }
            }
            None
        })
        .collect();
    let name = format!("Virasoro bracket: {label}, weight <= {}", ctx.max_weight);
    let claim = "[X(m),X(n)] = (m-n)X(m+n) + (m^3-m)/12 c δ_{m+n,0}, |m|,|n| <= 3";
    match failures.into_iter().flatten().next() {
        None => Outcome::new(name, claim, Status::Pass).with("inputs", inputs.len().to_string()),
        Some((input, m, n)) => {
            Outcome::new(name, claim, Status::Fail).with("input", input).with("m", m.to_string()).with("n", n.to_string())
        }
    }
}

fn rank_lines(cert: &RankCertificate) -> String {
    cert.per_weight.iter().map(|w| format!("{}:{}/{}", w.weight, w.report.max_chain, w.dim)).collect::<Vec<_>>().join(" ")
}

/// Nilpotent part of `L̄(0)` on `V(p,p')`.
pub fn rank3_v(ctx: &Context) -> Vec<Outcome> {
    let p = ctx.params;
    let e = &ctx.engine;
    let v = FourCosetModule::v(p);
    let mut out = Vec::new();
    let name = format!("rank-3 certificate V({},{})", p.p(), p.p_prime());
    let claim = "N = Q + Q̃ + e^{α/p'-α/p}_{-1}: N^3 = 0 on every weight <= W, nilpotent rank 3 with witness α(-1)1 at weight 1";
    match ctx.rank_certificate(&v, ctx.max_weight) {
        Err(err) => out.push(error_outcome(&name, claim, err)),
        Ok(cert) => {
            let ok = cert.rank == 3 && cert.witness_weight == Some(Rational::from_integer(1));
            let mut o = Outcome::new(&name, claim, Status::from_bool(ok))
                .with("rank", cert.rank.to_string())
                .with("chain/dim by weight", rank_lines(&cert));
            if let Some(w) = cert.witness_weight.and_then(|w| cert.at(w)) {
                o = o.with("witness weight", w.weight.to_string()).with("witness", w.witness.render(&p));
            }
            out.push(o);
            let name0 = "weight-0 chain of N on V";
            let claim0 = "N 1 = e^{α/p'-α/p}, N e^{α/p'-α/p} = 0: chain length 2 at weight 0";
            out.push(match cert.at(Rational::from_integer(0)) {
                Some(w) => {
                    let n1 = e.lbar_nilpotent_mode(&v, 0, &State::vacuum());
                    let ok = w.report.max_chain == 2 && n1 == State::exponential(p.screening_difference());
                    Outcome::new(name0, claim0, Status::from_bool(ok))
                        .with("chain", w.report.max_chain.to_string())
                        .with("N 1", n1.render(&p))
                }
                None => Outcome::new(name0, claim0, Status::Skipped),
            });
        }
    }
    let a1 = State::monomial(FockMonomial::new(DualVector(0), vec![1]));
    let n1 = e.lbar_nilpotent_mode(&v, 0, &a1);
    let n2 = e.lbar_nilpotent_mode(&v, 0, &n1);
    let n3 = e.lbar_nilpotent_mode(&v, 0, &n2);
    let g1 = FockMonomial::new(p.screening_difference(), vec![1]);
    let lambda = n2.coefficient(&g1);
    let proportional = n2 == State::term(g1, lambda.clone());
    let four = Coeff::from_integer(4.into());
    let ok = proportional && (lambda == four || lambda == -four.clone()) && n3.is_zero();
    out.push(
        Outcome::new(
            "N^2 α(-1)1",
            "N^2 α(-1)1 = λ α(-1)e^{α/p'-α/p} with |λ| = 4",
            Status::from_bool(ok),
        )
        .with("N α(-1)1", n1.render(&p))
        .with("N^2 α(-1)1", n2.render(&p))
        .with("λ", format!("{}/{}", lambda.numer(), lambda.denom())),
    );
    out
}

/// Subsingular vector and nilpotent rank on `MV(p,p')`.
pub fn rank3_mv(ctx: &Context) -> Vec<Outcome> {
    let p = ctx.params;
    let mut out = Vec::new();
    let sub = find_subsingular(&ctx.engine);
    let name = "subsingular vector in MV";
    let claim = "Q w = e^{α/2+α/p'} solvable at weight (p+2)(p'+2)/4 with 2Q̃Qw != 0 and N^2 w != 0";
    let h = match &sub {
        Err(e) => {
            out.push(error_outcome(name, claim, e));
            None
        }
        Ok(s) => {
            let ok = s.qw == s.target && !s.qtilde_qw.is_zero() && !s.n2w.is_zero() && s.solution_dim == s.kernel_q_dim;
            out.push(
                Outcome::new(name, claim, Status::from_bool(ok))
                    .with("weight", s.weight.to_string())
                    .with("w", s.w.render(&p))
                    .with("Qw", s.qw.render(&p))
                    .with("Q̃Qw", s.qtilde_qw.render(&p))
                    .with("N^2 w", s.n2w.render(&p))
                    .with("N^2 w = 2Q̃Qw", (s.n2w == s.qtilde_qw.scaled(&Coeff::from_integer(2.into()))).to_string())
                    .with("sector dim", s.sector_dim.to_string())
                    .with("solution space dim", s.solution_dim.to_string())
                    .with("dim Ker Q (oracle)", s.kernel_q_dim.to_string()),
            );
            Some(s.weight)
        }
    };
    let name = format!("rank-3 certificate MV({},{})", p.p(), p.p_prime());
    let claim = "N^3 = 0 on every weight <= W and nilpotent rank 3, first reached at the subsingular weight";
    let mv = FourCosetModule::mv(p);
    out.push(match ctx.rank_certificate(&mv, ctx.max_weight) {
        Err(e) => error_outcome(&name, claim, e),
        Ok(cert) => {
            let reachable = h.is_some_and(|h| h <= ctx.max_weight);
            let status = if !reachable {
                Status::Skipped
            } else {
                Status::from_bool(cert.rank == 3 && cert.witness_weight == h)
            };
            let mut o = Outcome::new(&name, claim, status)
                .with("rank", cert.rank.to_string())
                .with("chain/dim by weight", rank_lines(&cert));
            if let Some(w) = cert.witness_weight.and_then(|w| cert.at(w)) {
                o = o.with("witness weight", w.weight.to_string()).with("witness", w.witness.render(&p));
            }
            o
        }
    });
    out
}

/// Screening kernels on `V_L`: `ω`, commuting screenings and agreement of
/// the two elimination routes.
pub fn lattice_kernel_facts(ctx: &Context) -> Vec<Outcome> {
    let p = ctx.params;
    let e = &ctx.engine;
    let mut out = Vec::new();
    let omega = e.conformal_vector();
    out.push(Outcome::new(
        "screenings kill ω",
        "Qω = 0 and Q̃ω = 0",
        Status::from_bool(e.screening_q(&omega).is_zero() && e.screening_qtilde(&omega).is_zero()),
    ));

    let top = ctx.max_weight.min(Rational::from_integer(4));
    let basis = enumerate_basis(0, top, &p);
    let bad = basis.par_iter().find_first(|m| {
        let s = State::monomial((*m).clone());
        e.screening_q(&e.screening_qtilde(&s)) != e.screening_qtilde(&e.screening_q(&s))
    });
    out.push(match bad {
        None => Outcome::new(
            format!("[Q,Q̃] = 0 on V_L, weight <= {top}"),
            "the screenings commute",
            Status::Pass,
        )
        .with("inputs", basis.len().to_string()),
        Some(m) => Outcome::new(format!("[Q,Q̃] = 0 on V_L, weight <= {top}"), "the screenings commute", Status::Fail)
            .with("input", m.render()),
    });

    out.push(oracle_dims(ctx, "V_L", 0, ctx.max_weight));
    out
}

/// Graded dimensions of the doublet coset `M`.
pub fn doublet_facts(ctx: &Context) -> Vec<Outcome> {
    let p = ctx.params;
    let mut out = Vec::new();
    let name = "doublet M graded dimensions";
    let claim = "dim M = 0 at weights 1..3p-3 and >= 1 at the lowest weight 3p-2 (p' = 2)";
    match doublet_lowest_weight(&p) {
        None => out.push(Outcome::new(name, claim, Status::Skipped).with("reason", "stated for p' = 2")),
        Some(h) => {
            let top = ctx.max_weight.max(h);
            let half = p.half_alpha().k();
            let weights: Vec<i64> = (1..=top.floor().to_integer()).collect();
            let dims: Vec<logvoa_core::Result<usize>> = weights
                .par_iter()
                .map(|&w| ctx.kernel_piece(half, Rational::from_integer(w), None).map(|k| k.dim()))
                .collect();
            let mut ok = true;
            let mut line = Vec::new();
            for (w, d) in weights.iter().zip(&dims) {
                match d {
                    Ok(d) => {
                        let wr = Rational::from_integer(*w);
                        if (wr < h && *d != 0) || (wr == h && *d == 0) {
                            ok = false;
                        }
                        line.push(format!("{w}:{d}"));
                    }
                    Err(e) => {
                        ok = false;
                        line.push(format!("{w}:error {e}"));
                    }
                }
            }
            out.push(
                Outcome::new(name, claim, Status::from_bool(ok))
                    .with("lowest weight", h.to_string())
                    .with("dims", line.join(" ")),
            );
            out.push(oracle_dims(ctx, "M", half, top));
        }
    }
    out
}

/// Kernel dimensions by fraction-free elimination and by the rational
/// oracle route must agree at every weight.
fn oracle_dims(ctx: &Context, label: &str, residue: i64, top: Rational) -> Outcome {
    let weights: Vec<i64> = (0..=top.floor().to_integer()).collect();
    let rows: Vec<logvoa_core::Result<(usize, usize)>> = weights
        .par_iter()
        .map(|&w| {
            let w = Rational::from_integer(w);
            let a = ctx.kernel_piece(residue, w, Some(Strategy::FractionFree))?.dim();
            let b = ctx.kernel_piece(residue, w, Some(Strategy::oracle()))?.dim();
            Ok((a, b))
        })
        .collect();
    let mut ok = true;
    let mut line = Vec::new();
    for (w, r) in weights.iter().zip(rows) {
        match r {
            Ok((a, b)) => {
                ok &= a == b;
                line.push(if a == b { format!("{w}:{a}") } else { format!("{w}:{a}!={b}") });
            }
            Err(e) => {
                ok = false;
                line.push(format!("{w}:error {e}"));
            }
        }
    }
    Outcome::new(
        format!("kernel dims of {label}: elimination routes agree"),
        "dim Ker Q ∩ Ker Q̃ per weight is the same under fraction-free and rational elimination",
        Status::from_bool(ok),
    )
    .with("dims", line.join(" "))
}

/// Identities among `L̃`, `H`, `H̃`; includes the literal commutator formula
/// as a finding.
pub fn field_identities(params: Params, window: Rational) -> Vec<Outcome> {
    let ctx = FieldContext::new(params, TruncationWindow { max_weight: window, include_mv: true });
    match build_named_fields(ctx.engine()).and_then(|nf| identity_suite(&ctx, &nf)) {
        Ok(v) => v,
        Err(e) => vec![error_outcome("field identities", "field identity suite", e)],
    }
}

/// Pairwise locality orders of `e^{α/p'}(z), L̃, H, H̃`.
pub fn locality(params: Params, window: Rational, k_max: u32) -> Outcome {
    let ctx = FieldContext::new(params, TruncationWindow { max_weight: window, include_mv: true });
    let name = format!("locality orders, window {window}");
    let claim = format!("e^{{α/p'}}(z), L̃, H, H̃ pairwise local with order <= {k_max}");
    let nf = match build_named_fields(ctx.engine()) {
        Ok(nf) => nf,
        Err(e) => return error_outcome(&name, &claim, e),
    };
    let table = locality_table(&ctx, &[&nf.e, &nf.ltilde, &nf.h, &nf.htilde], k_max);
    let ok = table.iter().all(|(_, _, r)| r.is_ok());
    let mut o = Outcome::new(name, claim, Status::from_bool(ok));
    for (a, b, r) in table {
        o = o.with(format!("({a}, {b})"), match r {
            Ok(k) => k.to_string(),
            Err(e) => e.to_string(),
        });
    }
    o
}

/// A nonzero value of the intertwiner built from the lowest doublet vector.
pub fn intertwiner(ctx: &Context) -> Outcome {
    let p = ctx.params;
    let name = "intertwiner nontrivial";
    let claim = "𝒴(Δ(e^{-α/p},z)v, z)u has a nonzero mode for v in M of lowest weight, landing in MV(p,p')";
    let Some(h) = doublet_lowest_weight(&p) else {
        return Outcome::new(name, claim, Status::Skipped).with("reason", "stated for p' = 2");
    };
    let piece = match ctx.kernel_piece(p.half_alpha().k(), h, None) {
        Ok(k) if k.dim() > 0 => k,
        Ok(_) => return Outcome::new(name, claim, Status::Fail).with("reason", "M is zero at its lowest weight"),
        Err(e) => return error_outcome(name, claim, e),
    };
    let v = &piece.basis[0];
    let mv = FourCosetModule::mv(p);
    let us = [("1", State::vacuum()), ("e^{-α/p}", State::exponential(p.minus_alpha_over_p()))];
    let mut o = Outcome::new(name, claim, Status::Fail).with("v", v.render(&p));
    let mut found = false;
    let mut contained = true;
    for (label, u) in &us {
        // The first mode (from the top) with nonzero output.
        for n in (-2..=3i64).rev() {
            match intertwiner_eval(&ctx.engine, v, Rational::from_integer(n), u) {
                Ok(s) if !s.is_zero() => {
                    contained &= mv.contains(&s);
                    found = true;
                    o = o.with(format!("mode {n} on {label}"), s.render(&p));
                    break;
                }
                Ok(_) => {}
                Err(e) => return error_outcome(name, claim, e),
            }
        }
    }
    o.status = Status::from_bool(found && contained);
    o
}

/// For `(3,2)` the graded bases of `V` and `MV` coincide while the rank-3
/// witnesses sit at different weights.
pub fn coincidence(ctx: &Context) -> Outcome {
    let p = ctx.params;
    let name = "V and MV: equal bases, different witness weights";
    let claim = "graded bases of V(p,p') and MV(p,p') agree per weight while rank-3 witness weights differ";
    let v = FourCosetModule::v(p);
    let mv = FourCosetModule::mv(p);
    let mut rv = v.residues();
    let mut rmv = mv.residues();
    rv.sort_unstable();
    rmv.sort_unstable();
    if rv != rmv {
        return Outcome::new(name, claim, Status::Skipped).with("reason", "coset classes differ for these parameters");
    }
    let (bv, bmv) = (v.basis(ctx.max_weight), mv.basis(ctx.max_weight));
    let same = bv == bmv;
    let (cv, cmv) = match (ctx.rank_certificate(&v, ctx.max_weight), ctx.rank_certificate(&mv, ctx.max_weight)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return error_outcome(name, claim, e),
    };
    let fmt = |w: Option<Rational>| w.map(|w| w.to_string()).unwrap_or_else(|| "none".into());
    let differ = cv.rank == 3 && cmv.rank == 3 && cv.witness_weight != cmv.witness_weight;
    Outcome::new(name, claim, Status::from_bool(same && differ))
        .with("bases equal", same.to_string())
        .with("dims", bv.iter().map(|(w, b)| format!("{w}:{}", b.len())).collect::<Vec<_>>().join(" "))
        .with("V witness weight", fmt(cv.witness_weight))
        .with("MV witness weight", fmt(cmv.witness_weight))
}

/// Kernel of the screenings in `V_L` at weight `(2p-1)(2p'-1)` and its
/// subspace killed by `L(1)`, `L(2)`. A count below 3 is a finding.
pub fn stretch(ctx: &Context) -> Outcome {
    let p = ctx.params;
    let h = Rational::from_integer((2 * p.p() - 1) * (2 * p.p_prime() - 1));
    let name = format!("primaries in Ker Q ∩ Ker Q̃ at weight {h}");
    let claim = "the L(1), L(2)-invariant part of (Ker Q ∩ Ker Q̃) in V_L at weight (2p-1)(2p'-1) has dim >= 3";
    match kernel_primaries(&ctx.engine, h) {
        Err(e) => error_outcome(&name, claim, e),
        Ok(c) => Outcome::new(name, claim, if c.primary_dim >= 3 { Status::Pass } else { Status::Finding })
            .with("ambient dim", c.ambient_dim.to_string())
            .with("kernel dim", c.kernel_dim.to_string())
            .with("primary dim", c.primary_dim.to_string()),
    }
}

/// Run the suites selected by the configuration.
pub fn run_verify(config: &RunConfig, params: Params, cache: Option<MatrixCache>) -> Report {
    let ctx = Context { cache, ..Context::new(params, config.max_weight) };
    let sel = config.module;
    let mut report = Report::new(config.clone());
    let checks = &mut report.checks;
    checks.push(central_charge(params));
    if sel.includes(ModuleSel::Vl) {
        checks.push(virasoro_bracket(&ctx, BracketTarget::Lattice));
        checks.extend(lattice_kernel_facts(&ctx));
    }
    if sel.includes(ModuleSel::V) {
        checks.push(virasoro_bracket(&ctx, BracketTarget::Plain(ModuleKind::V)));
        checks.push(virasoro_bracket(&ctx, BracketTarget::Deformed(ModuleKind::V)));
        checks.extend(rank3_v(&ctx));
    }
    if sel.includes(ModuleSel::Mv) {
        checks.push(virasoro_bracket(&ctx, BracketTarget::Deformed(ModuleKind::MV)));
        checks.extend(rank3_mv(&ctx));
    }
    if sel.includes(ModuleSel::M) {
        checks.extend(doublet_facts(&ctx));
        checks.push(intertwiner(&ctx));
    }
    if sel.includes(ModuleSel::Fields) {
        let window = ctx.max_weight.min(Rational::from_integer(5));
        checks.extend(field_identities(params, window));
        checks.push(locality(params, window, 4));
    }
    if sel == ModuleSel::All {
        checks.push(coincidence(&ctx));
    }
    if config.stretch {
        checks.push(stretch(&ctx));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_charge_outcome() {
        let o = central_charge(Params::new(5, 2).unwrap());
        assert!(o.passed());
        assert_eq!(o.witness[0].1, "-22/5");
    }

    #[test]
    fn lattice_bracket_small() {
        let ctx = Context::new(Params::new(5, 3).unwrap(), Rational::from_integer(3));
        assert!(virasoro_bracket(&ctx, BracketTarget::Lattice).passed());
    }
}
