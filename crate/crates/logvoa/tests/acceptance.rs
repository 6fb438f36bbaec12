//! Acceptance criteria 1-11. Each test writes one status line to stderr,
//! bypassing the test harness capture so the lines show in plain
//! `cargo test` output.

use std::io::Write;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use logvoa::suites::{
    central_charge, coincidence, doublet_facts, field_identities, intertwiner, lattice_kernel_facts, locality, rank3_mv,
    rank3_v, stretch, virasoro_bracket, BracketTarget, Context,
};
use logvoa_core::check::{Outcome, Status};
use logvoa_core::models::{FourCosetModule, ModuleKind};
use logvoa_core::{Params, Rational};

fn p32() -> Params {
    Params::new(3, 2).unwrap()
}

fn ctx6() -> Context {
    Context::new(p32(), Rational::from_integer(6))
}

fn line(criterion: &str, ok: bool, what: &str, elapsed: Duration) {
    let status = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "criterion {criterion:<4} {status}  {what} ({elapsed:.2?})");
}

fn failures(outcomes: &[Outcome]) -> Vec<String> {
    outcomes
        .iter()
        .filter(|o| o.status != Status::Pass)
        .map(|o| format!("{} [{}] {:?}", o.name, o.status.as_str(), o.witness))
        .collect()
}

fn witness<'a>(o: &'a Outcome, key: &str) -> &'a str {
    o.witness.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str()).unwrap_or("")
}

#[test]
fn criterion_01_central_charges() {
    let t = Instant::now();
    let cases = [((3, 2), "0/1"), ((5, 2), "-22/5"), ((5, 3), "-3/5")];
    let outcomes: Vec<Outcome> = cases.iter().map(|&((p, q), _)| central_charge(Params::new(p, q).unwrap())).collect();
    let values_ok = outcomes.iter().zip(cases).all(|(o, (_, c))| witness(o, "closed form") == c);
    let ok = values_ok && failures(&outcomes).is_empty() && t.elapsed() < Duration::from_secs(1);
    line("1", ok, "central charges 0, -22/5, -3/5 by two routes", t.elapsed());
    assert!(values_ok, "{outcomes:?}");
    assert!(failures(&outcomes).is_empty(), "{:?}", failures(&outcomes));
    assert!(t.elapsed() < Duration::from_secs(1));
}

#[test]
fn criterion_02_virasoro_bracket() {
    let t = Instant::now();
    let o = virasoro_bracket(&ctx6(), BracketTarget::Plain(ModuleKind::V));
    let ok = o.passed() && t.elapsed() < Duration::from_secs(120);
    line("2", ok, "[L(m),L(n)] on V(3,2), weight <= 6", t.elapsed());
    assert!(o.passed(), "{o:?}");
    assert!(t.elapsed() < Duration::from_secs(120));
}

#[test]
fn criterion_03_deformed_virasoro() {
    let t = Instant::now();
    let ctx = ctx6();
    let outcomes = [
        virasoro_bracket(&ctx, BracketTarget::Deformed(ModuleKind::V)),
        virasoro_bracket(&ctx, BracketTarget::Deformed(ModuleKind::MV)),
    ];
    let ok = failures(&outcomes).is_empty() && t.elapsed() < Duration::from_secs(300);
    line("3", ok, "[Lbar(m),Lbar(n)] on V(3,2) and MV(3,2), weight <= 6", t.elapsed());
    assert!(failures(&outcomes).is_empty(), "{:?}", failures(&outcomes));
    assert!(t.elapsed() < Duration::from_secs(300));
}

#[test]
fn criterion_04_rank3_v() {
    let t = Instant::now();
    let outcomes = rank3_v(&ctx6());
    let ok = failures(&outcomes).is_empty();
    let lambda = witness(&outcomes[2], "λ").to_string();
    line("4", ok, &format!("V(3,2) nilpotent rank 3 at weight 1, weight-0 chain 2, λ = {lambda}"), t.elapsed());
    assert!(ok, "{:?}", failures(&outcomes));
    assert_eq!(witness(&outcomes[0], "witness weight"), "1");
    assert_eq!(witness(&outcomes[1], "chain"), "2");
}

#[test]
fn criterion_05_rank3_mv_subsingular() {
    let t = Instant::now();
    let outcomes = rank3_mv(&ctx6());
    let ok = failures(&outcomes).is_empty();
    line("5", ok, "MV(3,2) subsingular w at weight 5, nilpotent rank 3", t.elapsed());
    assert!(ok, "{:?}", failures(&outcomes));
    assert_eq!(witness(&outcomes[0], "weight"), "5");
    assert_eq!(witness(&outcomes[1], "rank"), "3");
}

#[test]
fn criterion_06_kernel_facts() {
    let t = Instant::now();
    let ctx = ctx6();
    let mut outcomes = lattice_kernel_facts(&ctx);
    outcomes.extend(doublet_facts(&ctx));
    let ok = failures(&outcomes).is_empty();
    line("6", ok, "Qω = Q̃ω = 0, [Q,Q̃] = 0, M dims 0 then >= 1 at 7, strategies agree", t.elapsed());
    assert!(ok, "{:?}", failures(&outcomes));
    let dims = outcomes.iter().find(|o| o.name.starts_with("doublet")).unwrap();
    assert_eq!(witness(dims, "dims"), "1:0 2:0 3:0 4:0 5:0 6:0 7:2");
}

fn field_suite() -> &'static (Vec<Outcome>, Duration) {
    static SUITE: OnceLock<(Vec<Outcome>, Duration)> = OnceLock::new();
    SUITE.get_or_init(|| {
        let t = Instant::now();
        let v = field_identities(p32(), Rational::from_integer(5));
        (v, t.elapsed())
    })
}

const LITERAL_COM_FIELD: &str = "com-field as stated";

#[test]
fn criterion_07_field_identities() {
    let (outcomes, elapsed) = field_suite();
    let rest: Vec<Outcome> = outcomes.iter().filter(|o| o.name != LITERAL_COM_FIELD).cloned().collect();
    let ok = failures(&rest).is_empty() && *elapsed < Duration::from_secs(600);
    line("7", ok, &format!("field identity suite, {} identities, window 5", rest.len()), *elapsed);
    assert!(failures(&rest).is_empty(), "{:?}", failures(&rest));
    assert!(rest.iter().any(|o| o.name == "com-field from commutator formula"));
    assert!(*elapsed < Duration::from_secs(600));
}

/// The literal form `[L̃_{n+1}, H̃_m] = H_{m+n}` contradicts `H̃_0 L̃ = 0`;
/// it is checked as written, reported as failing, and the test pins the
/// failure and its witness.
#[test]
fn criterion_07_com_field_literal() {
    let (outcomes, elapsed) = field_suite();
    let o = outcomes.iter().find(|o| o.name == LITERAL_COM_FIELD).expect("literal com-field checked");
    let _ = writeln!(
        std::io::stderr(),
        "criterion 7*   FAIL  literal [Lt_(n+1), Ht_m] = H_(m+n) fails at n = {}, m = {}; -m H_(m+n) holds ({elapsed:.2?})",
        witness(o, "n"),
        witness(o, "m"),
    );
    assert_eq!(o.status, Status::Finding);
    assert_eq!((witness(o, "n"), witness(o, "m")), ("-2", "-2"));
}

#[test]
fn criterion_08_locality() {
    let t = Instant::now();
    let o = locality(p32(), Rational::from_integer(5), 4);
    let orders: Vec<String> = o.witness.iter().map(|(k, v)| format!("{k}={v}")).collect();
    line("8", o.passed(), &format!("locality orders <= 4: {}", orders.join(" ")), t.elapsed());
    assert!(o.passed(), "{o:?}");
}

#[test]
fn criterion_09_intertwiner() {
    let t = Instant::now();
    let o = intertwiner(&ctx6());
    line("9", o.passed(), "nonzero intertwiner value in MV(3,2) from v in M of weight 7", t.elapsed());
    assert!(o.passed(), "{o:?}");
    assert!(o.witness.iter().any(|(k, _)| k.starts_with("mode ")));
}

#[test]
fn criterion_10_coincidence() {
    let t = Instant::now();
    let o = coincidence(&ctx6());
    line("10", o.passed(), "V(3,2), MV(3,2) equal graded bases, witness weights 1 vs 5", t.elapsed());
    assert!(o.passed(), "{o:?}");
    assert_eq!(witness(&o, "V witness weight"), "1");
    assert_eq!(witness(&o, "MV witness weight"), "5");
}

#[test]
fn criterion_11_stretch() {
    let t = Instant::now();
    let o = stretch(&ctx6());
    let what = format!(
        "weight 15: kernel {} of {}, primaries {}",
        witness(&o, "kernel dim"),
        witness(&o, "ambient dim"),
        witness(&o, "primary dim")
    );
    // A count below 3 is a finding, not a failure.
    line("11", o.status != Status::Fail, &what, t.elapsed());
    assert_ne!(o.status, Status::Fail, "{o:?}");
    assert!(t.elapsed() < Duration::from_secs(3600));
}

#[test]
fn modules_are_distinct_objects() {
    let p = p32();
    assert_ne!(FourCosetModule::v(p).residues(), FourCosetModule::mv(p).residues());
}
