//! One PASS/FAIL line per acceptance criterion. Run with
//! `cargo test -p fqgauss --test acceptance`.

use std::process::ExitCode;

use fqgauss::closedform::Verdict;
use fqgauss::exactmath::{cyc, sqrt_int, CycNum};
use fqgauss::fqm::{form_from_str, parse_form, BlockExpr};
use fqgauss::oracle::{classical_gauss, gauss_sums, localization_check, signature, Kind};
use fqgauss::orthogroup::orthogonal_group;
use fqgauss::sweep::{self, FormReport};
use fqgauss::weil::{HalfWeight, WeilRep};
use fqgauss::Limits;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

struct Outcome {
    failures: Vec<String>,
    checked: usize,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome { failures: Vec::new(), checked: 0 }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn limits() -> Limits {
    Limits::default().with_max_order(30_000).with_budget(1_000_000_000)
}

fn run(exprs: Vec<BlockExpr>) -> Vec<FormReport> {
    sweep::evaluate_all(&exprs, &limits())
        .into_iter()
        .zip(&exprs)
        .map(|(r, e)| r.unwrap_or_else(|err| panic!("{e}: {err}")))
        .collect()
}

fn closed_vs_oracle(out: &mut Outcome, reports: &[FormReport], kind: Kind) {
    for r in reports {
        let label = format!("{} ({kind:?})", r.expr);
        match r.closed(kind) {
            Verdict::Supported { value, .. } => out.check(value == r.oracle(kind), || {
                format!("{label}: closed {value} != oracle {}", r.oracle(kind))
            }),
            Verdict::Unsupported(u) => out.check(false, || format!("{label}: unsupported ({u})")),
        }
    }
}

fn oracle_of(s: &str, kind: Kind) -> CycNum {
    gauss_sums(&form_from_str(s).unwrap(), &limits()).unwrap().get(kind).value.clone()
}

fn spot(out: &mut Outcome, form: &str, kind: Kind, expected: CycNum) {
    let got = oracle_of(form, kind);
    out.check(got == expected, || format!("{form} ({kind:?}): oracle {got}, expected {expected}"));
}

/// Whether G(C + B, O) equals G(C, O) G(B, O).
fn product_holds(c: &str, b: &str) -> bool {
    oracle_of(&format!("{c}+{b}"), Kind::First) == oracle_of(c, Kind::First) * oracle_of(b, Kind::First)
}

fn report(n: usize, title: &str, out: Outcome) -> bool {
    let ok = out.failures.is_empty();
    println!("{} criterion {n}: {title} ({} checks)", if ok { "PASS" } else { "FAIL" }, out.checked);
    for f in out.failures.iter().take(12) {
        println!("    {f}");
    }
    if out.failures.len() > 12 {
        println!("    ... {} more", out.failures.len() - 12);
    }
    ok
}

fn main() -> ExitCode {
    let mut all_ok = true;

    let fam1 = run(sweep::cyclic_odd_forms(343));
    let fam2 = run(sweep::elem_odd_forms(&[3, 5, 7, 11, 13], 2..=4));
    let fam3 = run(sweep::product_odd_forms(&[(3, 2), (3, 3), (5, 2)]));
    let fam4 = run(sweep::cyclic_two_forms(6));
    let fam5 = run(sweep::elem_two_forms(4));
    let fam6 = run(sweep::product_two_forms(&[2, 3, 4, 5]));
    let a4_pairs = run(sweep::a4_pair_forms(&[2, 3, 4]));

    let mut out = Outcome::new();
    closed_vs_oracle(&mut out, &fam1, Kind::First);
    spot(&mut out, "q(3,1)", Kind::First, CycNum::zero());
    spot(&mut out, "q(5,1)", Kind::First, sqrt_int(5));
    spot(&mut out, "q(9,2)", Kind::First, CycNum::from_int(3));
    all_ok &= report(1, "cyclic odd, first kind", out);

    let mut out = Outcome::new();
    closed_vs_oracle(&mut out, &fam2, Kind::First);
    spot(&mut out, "U(5)", Kind::First, CycNum::from_int(10));
    spot(&mut out, "N(3)", Kind::First, CycNum::from_int(3));
    all_ok &= report(2, "odd p-elementary, first kind", out);

    let mut out = Outcome::new();
    closed_vs_oracle(&mut out, &fam3, Kind::First);
    for r in &fam3 {
        let blocks = r.expr.blocks();
        let b = BlockExpr::of(blocks[1..].iter().cloned());
        let ob = orthogonal_group(&b.realize(), &limits()).unwrap().order();
        let expected = 2 * b.order() as usize * ob;
        out.check(r.group_order == expected, || {
            format!("{}: |O(A)| = {} but 2|B||O(B)| = {expected}", r.expr, r.group_order)
        });
    }
    all_ok &= report(3, "odd products, first kind, and |O(A)|", out);

    let mut out = Outcome::new();
    closed_vs_oracle(&mut out, &fam4, Kind::First);
    all_ok &= report(4, "2-adic cyclic, first kind", out);

    let mut out = Outcome::new();
    closed_vs_oracle(&mut out, &fam5, Kind::First);
    for target in [4, -4] {
        let hit = fam5.iter().any(|r| r.order == 16 && *r.oracle(Kind::First) == CycNum::from_int(target));
        out.check(hit, || format!("no |A| = 16 form with G = {target}"));
    }
    all_ok &= report(5, "2-elementary, first kind", out);

    let mut out = Outcome::new();
    closed_vs_oracle(&mut out, &fam6, Kind::First);
    for a in [1, 3, 5, 7] {
        let c = format!("q(8,{a})");
        out.check(!product_holds(&c, "V2"), || format!("product formula holds for {c}+V2"));
        // True failures of the product formula at k = 2.
        let c = format!("q(4,{a})");
        out.check(!product_holds(&c, "U2"), || format!("product formula holds for {c}+U2"));
        out.check(!product_holds(&c, "q(2,1)+q(2,-1)"), || format!("product formula holds for {c}+q(2,1)+q(2,-1)"));
        // Literal reading of the criterion.
        out.check(!product_holds(&c, "2*q(2,1)"), || format!("product formula holds for {c}+2*q(2,1)"));
    }
    all_ok &= report(6, "2-adic products, first kind, and product-formula failures", out);

    let mut out = Outcome::new();
    for fam in [&fam1, &fam2, &fam3, &fam4, &fam5, &fam6, &a4_pairs] {
        closed_vs_oracle(&mut out, fam, Kind::Second);
    }
    for r in &a4_pairs {
        out.check(r.oracle(Kind::Second).is_zero(), || format!("{}: G' = {}", r.expr, r.oracle(Kind::Second)));
    }
    spot(&mut out, "U(7)", Kind::Second, CycNum::from_int(14));
    spot(&mut out, "q(3,1)", Kind::Second, CycNum::one() - cyc(1, 3));
    all_ok &= report(7, "second kind", out);

    let mut out = Outcome::new();
    for e in sweep::localization_forms() {
        let ok = localization_check(&e.realize(), &limits()).unwrap();
        out.check(ok, || format!("{e}: sums do not factor over p-parts"));
    }
    all_ok &= report(8, "localization", out);

    let covered: Vec<&FormReport> =
        [&fam1, &fam2, &fam3, &fam4, &fam5, &fam6, &a4_pairs].into_iter().flatten().collect();
    let mut out = Outcome::new();
    for r in &covered {
        let n = r.order as i128;
        out.check(r.classical2.pow(8) == CycNum::from_int(n.pow(4)), || format!("{}: G'(A)^8 != |A|^4", r.expr));
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let small: Vec<&FormReport> = covered.iter().copied().filter(|r| r.order <= 64).collect();
    for _ in 0..30 {
        let x = small.choose(&mut rng).unwrap();
        let y = small.choose(&mut rng).unwrap();
        let sig = |e: &BlockExpr| signature(&e.realize(), &limits()).unwrap();
        let joint = x.expr.concat(&y.expr);
        let ok = sig(&joint) == (sig(&x.expr) + sig(&y.expr)) % 8;
        out.check(ok, || format!("sigma not additive for {} and {}", x.expr, y.expr));
    }
    all_ok &= report(9, "Milgram and signature additivity", out);

    let mut out = Outcome::new();
    for e in sweep::block_library(30) {
        let rep = WeilRep::new(&e.realize(), &limits()).unwrap();
        let c = rep.checks().unwrap();
        out.check(c.all(), || format!("{e}: {c:?}"));
        for twice_l in 4..=40 {
            match rep.dim_invariant_forms(HalfWeight::from_twice(twice_l)) {
                Ok(_) => out.check(true, String::new),
                Err(err) => out.check(false, || format!("{e}, l = {}: {err}", HalfWeight::from_twice(twice_l))),
            }
        }
    }
    let trivial = WeilRep::new(&parse_form("gram[;;]").unwrap().realize(), &limits()).unwrap();
    for (l, want) in [(4, 1.0), (6, 1.0), (8, 1.0), (10, 1.0), (12, 2.0), (14, 1.0)] {
        let v = trivial.dim_invariant_forms(HalfWeight::from_twice(2 * l)).unwrap();
        let raw = v.raw.unwrap_or(f64::NAN);
        out.check((raw - want).abs() < 1e-6, || format!("trivial form, l = {l}: {raw} != {want}"));
    }
    all_ok &= report(10, "Weil representation and dimension formula", out);

    let mut out = Outcome::new();
    for r in &covered {
        for kind in Kind::BOTH {
            out.check(r.magnitude_ok(kind), || {
                format!("{} ({kind:?}): |G|/sqrt|A| = {:.6}", r.expr, r.oracle(kind).abs() / (r.order as f64).sqrt())
            });
        }
    }
    all_ok &= report(11, "magnitude in {0, sqrt|A|, 2 sqrt|A|}", out);

    let _ = classical_gauss;
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
