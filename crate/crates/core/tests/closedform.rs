use fqgauss::closedform::{elem_odd, eval_closed, RuleId, Verdict};
use fqgauss::exactmath::CycNum;
use fqgauss::fqm::{form_from_str, parse_form, BlockExpr};
use fqgauss::oracle::{gauss_sums, Kind};
use fqgauss::sweep::{self, evaluate};
use fqgauss::Limits;
use proptest::prelude::*;

fn oracle(s: &str, kind: Kind) -> CycNum {
    gauss_sums(&form_from_str(s).unwrap(), &Limits::default()).unwrap().get(kind).value.clone()
}

fn closed(s: &str, kind: Kind) -> Verdict {
    eval_closed(&parse_form(s).unwrap(), kind, &Limits::default()).unwrap()
}

#[test]
fn product_formula_fails_where_the_table_applies() {
    for (c, b) in [("q(4,1)", "U2"), ("q(4,1)", "q(2,1)+q(2,-1)"), ("q(8,1)", "V2"), ("q(8,1)", "2*q(2,1)")] {
        let whole = format!("{c}+{b}");
        let product = oracle(c, Kind::First) * oracle(b, Kind::First);
        let table = closed(&whole, Kind::First).value().cloned().unwrap();
        assert_ne!(table, product, "{whole}");
        assert_eq!(table, oracle(&whole, Kind::First), "{whole}");
    }
}

#[test]
fn mixed_primes_multiply() {
    for s in ["q(4,1)+q(3,1)", "q(8,3)+q(5,2)+q(7,1)", "U2+U(3)", "V2+q(9,2)+q(3,1)"] {
        for kind in Kind::BOTH {
            let whole = closed(s, kind).value().cloned().unwrap();
            let parts: CycNum = parse_form(s)
                .unwrap()
                .blocks()
                .into_iter()
                .fold(std::collections::BTreeMap::<u64, Vec<_>>::new(), |mut m, b| {
                    m.entry(b.prime().unwrap()).or_default().push(b);
                    m
                })
                .into_values()
                .map(|bs| eval_closed(&BlockExpr::of(bs), kind, &Limits::default()).unwrap().value().cloned().unwrap())
                .product();
            assert_eq!(whole, parts, "{s} ({kind:?})");
            assert_eq!(whole, oracle(s, kind), "{s} ({kind:?})");
        }
    }
}

#[test]
fn delta_choice_does_not_matter() {
    // elem_odd asserts internally that both square roots give the same value.
    for p in [5u64, 7, 13, 17, 19, 29, 31, 37] {
        for m in 2..=6 {
            for d in 1..p as i64 {
                for kind in Kind::BOTH {
                    elem_odd(p, m, d, kind).unwrap();
                }
            }
        }
    }
}

#[test]
fn rule_labels() {
    assert_eq!(closed("q(8,3)", Kind::First).rule_label(), "CyclicTwo");
    assert_eq!(closed("q(9,1)+q(3,1)", Kind::First).rule_label(), "ProductOdd");
    assert_eq!(closed("q(4,1)+q(3,1)", Kind::First).rule_label(), "2:CyclicTwo*3:CyclicOdd");
    assert_eq!(closed("gram[;;]", Kind::First).rule_label(), "Trivial");
    let v = closed("q(8,1)+q(4,3)", Kind::Second);
    assert!(matches!(&v, Verdict::Supported { rules, .. } if rules[0].1 == RuleId::Remark2nd));
    assert!(matches!(closed("gram[3;1/3;]", Kind::First), Verdict::Unsupported(_)));
}

fn covered() -> impl Strategy<Value = (BlockExpr, Vec<Kind>)> {
    let mut pool = sweep::cyclic_odd_forms(81);
    pool.extend(sweep::elem_odd_forms(&[3, 5], 2..=3));
    pool.extend(sweep::product_odd_forms(&[(3, 2)]));
    pool.extend(sweep::cyclic_two_forms(5));
    pool.extend(sweep::elem_two_forms(4));
    pool.extend(sweep::product_two_forms(&[2, 3, 4]));
    let mut pool: Vec<(BlockExpr, Vec<Kind>)> = pool.into_iter().map(|e| (e, Kind::BOTH.to_vec())).collect();
    // The vanishing family only has a second-kind statement.
    pool.extend(sweep::a4_pair_forms(&[2, 3]).into_iter().map(|e| (e, vec![Kind::Second])));
    prop::sample::select(pool)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn closed_forms_agree_with_the_oracle((e, kinds) in covered()) {
        let r = evaluate(&e, &Limits::default()).unwrap();
        for kind in kinds {
            prop_assert_eq!(r.matches(kind), Some(true), "{} ({:?})", e, kind);
        }
    }
}
