//! Closed-form evaluation of G(A, O(A)) and G'(A, O(A)) for block sums.
//!
//! The dispatcher splits a block sum by prime, evaluates each p-part with
//! the rule matching its shape, and multiplies the local values (the sums
//! are multiplicative over p-parts). Shapes outside the known families are
//! reported as unsupported rather than guessed.

mod rules;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Result;
use crate::exactmath::ntheory::least_nonresidue;
use crate::exactmath::{cyc, CycNum};
use crate::fqm::{Block, BlockExpr};
use crate::limits::Limits;
use crate::oracle::Kind;

pub use rules::{cyclic_odd, cyclic_two, delta_sign, elem_odd};

/// The closed-form statement used for one prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    CyclicOdd,
    ElemOddIso,
    ElemOddAniso,
    ProductOdd,
    CyclicTwo,
    TwoElemWithU,
    TwoElemNoU,
    ProductTwoK4,
    ProductTwoK3,
    ProductTwoK2,
    CyclicOdd2nd,
    ElemOddIso2nd,
    ElemOddAniso2nd,
    TwoElem2nd,
    Product2nd,
    Remark2nd,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Why a form has no closed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unsupported {
    pub prime: Option<u64>,
    pub reason: String,
}

impl fmt::Display for Unsupported {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.prime {
            Some(p) => write!(f, "p = {p}: {}", self.reason),
            None => write!(f, "{}", self.reason),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Supported { value: CycNum, rules: Vec<(u64, RuleId)> },
    Unsupported(Unsupported),
}

impl Verdict {
    pub fn value(&self) -> Option<&CycNum> {
        match self {
            Verdict::Supported { value, .. } => Some(value),
            Verdict::Unsupported(_) => None,
        }
    }

    /// Rules joined as `p:Rule` pairs, e.g. `2:CyclicTwo*5:CyclicOdd`.
    pub fn rule_label(&self) -> String {
        match self {
            Verdict::Supported { rules, .. } if rules.is_empty() => "Trivial".into(),
            Verdict::Supported { rules, .. } if rules.len() == 1 => rules[0].1.to_string(),
            Verdict::Supported { rules, .. } => {
                rules.iter().map(|(p, r)| format!("{p}:{r}")).collect::<Vec<_>>().join("*")
            }
            Verdict::Unsupported(_) => "unsupported".into(),
        }
    }
}

type Local = std::result::Result<(CycNum, RuleId), String>;

/// Evaluates the closed form for a block sum.
pub fn eval_closed(expr: &BlockExpr, kind: Kind, limits: &Limits) -> Result<Verdict> {
    let mut by_prime: BTreeMap<u64, Vec<Block>> = BTreeMap::new();
    for b in expr.blocks() {
        match b.prime() {
            Some(p) => by_prime.entry(p).or_default().push(b),
            None if matches!(&b, Block::Raw(f) if f.group_order() == 1) => {}
            None => {
                return Ok(Verdict::Unsupported(Unsupported {
                    prime: None,
                    reason: "raw gram input has no block structure".into(),
                }))
            }
        }
    }
    let mut value = CycNum::one();
    let mut rules = Vec::new();
    for (p, blocks) in by_prime {
        let local = if p == 2 { local_two(&blocks, kind, limits)? } else { local_odd(p, &blocks, kind) };
        match local {
            Ok((v, rule)) => {
                value = value * v;
                rules.push((p, rule));
            }
            Err(reason) => return Ok(Verdict::Unsupported(Unsupported { prime: Some(p), reason })),
        }
    }
    Ok(Verdict::Supported { value, rules })
}

/// Discriminant (mod p) and dimension of an odd p-elementary block list.
fn odd_space(p: u64, blocks: &[Block]) -> (u32, i64) {
    let pi = p as i64;
    let mut d: i64 = 1;
    let mut m = 0;
    for b in blocks {
        let g = match b {
            Block::Cyclic { a, .. } => *a,
            Block::HypOdd(_) => -1,
            Block::AnisoOdd(_) => -(least_nonresidue(p) as i64),
            _ => unreachable!("odd elementary blocks only"),
        };
        d = (d * g).rem_euclid(pi);
        m += b.dim() as u32;
    }
    (m, d)
}

fn elementary_odd(p: u64, blocks: &[Block], kind: Kind) -> (CycNum, bool) {
    let (m, d) = odd_space(p, blocks);
    match blocks {
        [] => (CycNum::one(), false),
        [Block::Cyclic { a, .. }] => (cyclic_odd(p, 1, *a, kind), false),
        _ => {
            let aniso = m == 2 && crate::exactmath::kronecker(-d, p as i64) == -1;
            (elem_odd(p, m, d, kind).expect("valid p-elementary data"), aniso)
        }
    }
}

fn local_odd(p: u64, blocks: &[Block], kind: Kind) -> Local {
    let (high, low): (Vec<&Block>, Vec<&Block>) =
        blocks.iter().partition(|b| matches!(b, Block::Cyclic { k, .. } if *k > 1));
    let low: Vec<Block> = low.into_iter().cloned().collect();
    let second = kind == Kind::Second;
    match high.as_slice() {
        [] => {
            let (v, aniso) = elementary_odd(p, &low, kind);
            let rule = match (low.len(), aniso, second) {
                (1, _, false) => RuleId::CyclicOdd,
                (1, _, true) => RuleId::CyclicOdd2nd,
                (_, true, false) => RuleId::ElemOddAniso,
                (_, true, true) => RuleId::ElemOddAniso2nd,
                (_, false, false) => RuleId::ElemOddIso,
                (_, false, true) => RuleId::ElemOddIso2nd,
            };
            Ok((v, rule))
        }
        [Block::Cyclic { k, a, .. }] => {
            let c = cyclic_odd(p, *k, *a, kind);
            if low.is_empty() {
                return Ok((c, if second { RuleId::CyclicOdd2nd } else { RuleId::CyclicOdd }));
            }
            let (b, _) = elementary_odd(p, &low, kind);
            if !second {
                return Ok((c * b, RuleId::ProductOdd));
            }
            let (m, d) = odd_space(p, &low);
            let anisotropic = m == 1 || (m == 2 && crate::exactmath::kronecker(-d, p as i64) == -1);
            if p == 3 && *k == 2 && anisotropic {
                // Orbits split into a stratum of multiples of 3e, contributing
                // 3 G'(B), and one of units times e, contributing 3 zeta_3^a G(B(2)).
                let v = cyc(*a, 3) * rules::scaled_classical_three(m, d).scale(3, 1) + b.scale(3, 1);
                return Ok((v, RuleId::Product2nd));
            }
            Ok((c * b, RuleId::Product2nd))
        }
        _ => Err("more than one cyclic block of exponent > 1".into()),
    }
}

fn local_two(blocks: &[Block], kind: Kind, limits: &Limits) -> Result<Local> {
    let (high, low): (Vec<&Block>, Vec<&Block>) =
        blocks.iter().partition(|b| matches!(b, Block::Cyclic { k, .. } if *k > 1));
    let b_expr = BlockExpr::of(low.iter().map(|b| (*b).clone()));
    let b_form = b_expr.realize();
    let second = kind == Kind::Second;

    // G or G' of the 2-elementary part.
    let elementary = |kind: Kind| -> Result<Option<(CycNum, RuleId)>> {
        Ok(match low.as_slice() {
            [] => Some((CycNum::one(), RuleId::CyclicTwo)),
            [Block::Cyclic { a, .. }] => Some((cyclic_two(1, *a, kind), RuleId::CyclicTwo)),
            _ => rules::two_elementary_value(&b_form, kind, limits)?.map(|(v, case)| {
                let rule = match (kind, case) {
                    (Kind::Second, _) => RuleId::TwoElem2nd,
                    (Kind::First, rules::TwoElemCase::WithU) => RuleId::TwoElemWithU,
                    (Kind::First, rules::TwoElemCase::NoU) => RuleId::TwoElemNoU,
                };
                (v, rule)
            }),
        })
    };
    let unknown_shape = || "2-elementary part outside the known U-free shapes".to_string();

    match high.as_slice() {
        [] => Ok(match elementary(kind)? {
            Some((v, r)) if !low.is_empty() => Ok((v, r)),
            Some((v, _)) => Ok((v, RuleId::CyclicTwo)),
            None => Err(unknown_shape()),
        }),
        [Block::Cyclic { k, a, .. }] => {
            let c = cyclic_two(*k, *a, kind);
            if low.is_empty() {
                return Ok(Ok((c, RuleId::CyclicTwo)));
            }
            let Some((b, _)) = elementary(kind)? else { return Ok(Err(unknown_shape())) };
            if second {
                return Ok(Ok((c * b, RuleId::Product2nd)));
            }
            Ok(Ok(match k {
                2 => {
                    let v = if rules::is_k2_exception(&b_form, limits)? { CycNum::from_int(4) } else { CycNum::zero() };
                    (v, RuleId::ProductTwoK2)
                }
                3 => {
                    let special = crate::orthogroup::characteristic_element(&b_form, limits)?.is_zero();
                    let v = if !special {
                        CycNum::zero()
                    } else if rules::is_v(&b_form, limits)? {
                        c.scale(-2, 1)
                    } else {
                        c * b
                    };
                    (v, RuleId::ProductTwoK3)
                }
                _ => (c * b, RuleId::ProductTwoK4),
            }))
        }
        [x, y] if second => {
            let is_four = |b: &Block| matches!(b, Block::Cyclic { k: 2, .. });
            let extra_ok = matches!(low.as_slice(), [] | [Block::Cyclic { k: 1, .. }]);
            if (is_four(x) || is_four(y)) && extra_ok {
                Ok(Ok((CycNum::zero(), RuleId::Remark2nd)))
            } else {
                Ok(Err("two cyclic blocks of exponent > 1 outside the A_{4,b} combinations".into()))
            }
        }
        _ => Ok(Err("more than one cyclic block of exponent > 1".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::sqrt_int;
    use crate::fqm::parse_form;

    fn closed(s: &str, kind: Kind) -> Verdict {
        eval_closed(&parse_form(s).unwrap(), kind, &Limits::default()).unwrap()
    }

    fn value(s: &str, kind: Kind) -> CycNum {
        closed(s, kind).value().cloned().unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(value("q(5,1)", Kind::First), sqrt_int(5));
        assert_eq!(closed("q(5,1)", Kind::First).rule_label(), "CyclicOdd");
        assert!(value("q(7,1)+U(7)", Kind::First).is_zero());
        assert_eq!(closed("q(7,1)+U(7)", Kind::First).rule_label(), "ElemOddIso");
        assert_eq!(value("q(8,1)+V2", Kind::First), sqrt_int(8).scale(-2, 1));
        assert_eq!(value("q(5,1)", Kind::Second), CycNum::zero());
        assert_eq!(value("q(3,1)", Kind::Second), CycNum::one() - cyc(1, 3));
        assert_eq!(value("q(8,3)", Kind::First), -sqrt_int(8));
        assert!(value("q(9,1)+q(3,1)", Kind::First).is_zero());
        assert_eq!(value("q(4,1)+2*q(2,1)", Kind::First), CycNum::from_int(4));
        assert_eq!(value("q(8,1)+2*U2", Kind::First), sqrt_int(8).scale(4, 1));
        assert_eq!(value("U2+V2", Kind::First), CycNum::from_int(-4));
        assert_eq!(value("2*q(2,1)", Kind::First), CycNum::from_int(2));
        assert_eq!(value("3*q(2,1)", Kind::Second), (CycNum::one() + cyc(3, 4)).scale(2, 1));
        assert!(matches!(closed("gram[3;1/3;]", Kind::First), Verdict::Unsupported(_)));
        assert!(matches!(closed("q(9,1)+q(9,1)", Kind::First), Verdict::Unsupported(u) if u.prime == Some(3)));
    }

    #[test]
    fn elementary_values() {
        assert_eq!(elem_odd(5, 2, -1, Kind::First).unwrap(), CycNum::from_int(10));
        assert_eq!(elem_odd(3, 2, 1, Kind::First).unwrap(), CycNum::from_int(3));
        assert_eq!(elem_odd(7, 2, -1, Kind::Second).unwrap(), CycNum::from_int(14));
        assert!(elem_odd(7, 1, 1, Kind::First).is_err());
    }

    #[test]
    fn cyclic_two_values() {
        assert!(cyclic_two(1, 1, Kind::First).is_zero());
        assert_eq!(cyclic_two(2, 1, Kind::First), CycNum::from_int(2));
        assert_eq!(cyclic_two(3, 3, Kind::First), -sqrt_int(8));
        assert_eq!(cyclic_two(1, 1, Kind::Second), CycNum::one() + cyc(1, 4));
    }
}
