//! Closed-form evaluators, one per family of forms.

use crate::error::{Error, Result};
use crate::exactmath::ntheory::kronecker;
use crate::exactmath::{cyc, sqrt_int, CycNum};
use crate::fqm::{Block, BlockExpr, FqForm};
use crate::limits::Limits;
use crate::oracle::Kind;
use crate::orthogroup::{characteristic_element, contains_u_summand, is_isometric};

fn leg(a: i64, p: u64) -> i128 {
    kronecker(a, p as i64) as i128
}

fn sign_pow(s: i128, e: u64) -> i128 {
    if e % 2 == 0 {
        1
    } else {
        s
    }
}

fn i_pow(e: i64) -> CycNum {
    cyc(e, 4)
}

/// Least positive delta with delta^2 = -1 mod p.
fn delta_fourth(p: u64) -> i64 {
    (1..p as i64).find(|d| (d * d + 1) % p as i64 == 0).expect("p = 1 mod 4")
}

/// Least positive delta with delta^2 - delta + 1 = 0 mod p.
fn delta_sixth(p: u64) -> i64 {
    (1..p as i64).find(|d| (d * d - d + 1) % p as i64 == 0).expect("p = 1 mod 3")
}

/// G or G' of the cyclic form A_{p^k, a}, p odd.
pub fn cyclic_odd(p: u64, k: u32, a: i64, kind: Kind) -> CycNum {
    let n = p.pow(k);
    let root = sqrt_int(n);
    match kind {
        Kind::First => {
            if n % 4 == 3 {
                CycNum::zero()
            } else {
                root.scale(sign_pow(leg(a, p), k as u64), 1)
            }
        }
        Kind::Second if p == 3 => {
            let ik = i_pow((k * k) as i64);
            let s = sign_pow(leg(-a, 3), k as u64);
            -(ik * cyc(-a, 3) * root.scale(s, 1))
        }
        Kind::Second => {
            if sign_pow(leg(p as i64, 3), k as u64) == -1 {
                return CycNum::zero();
            }
            let v = root.scale(sign_pow(leg(2 * a, p), k as u64), 1);
            if n % 4 == 1 {
                v
            } else {
                v * i_pow(1)
            }
        }
    }
}

/// G or G' of an m-dimensional quadratic space over F_p (p odd, m >= 2)
/// with discriminant d. For m = 2 the space is the anisotropic plane
/// exactly when -d is a non-square.
pub fn elem_odd(p: u64, m: u32, d: i64, kind: Kind) -> Result<CycNum> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("p-elementary rule needs dimension >= 2, got {m}")));
    }
    if d.rem_euclid(p as i64) == 0 {
        return Err(Error::InvalidParameter(format!("discriminant {d} is not a unit mod {p}")));
    }
    let pi = p as i64;
    if m == 2 && leg(-d, p) == -1 {
        let v = match kind {
            Kind::First => sign_pow(-1, p.div_ceil(2)) * p as i128,
            Kind::Second => -leg(pi, 3) * p as i128,
        };
        return Ok(CycNum::from_int(v));
    }
    let root = sqrt_int(p.pow(m));
    match kind {
        Kind::First => {
            if p % 4 == 3 {
                return Ok(CycNum::zero());
            }
            let delta = delta_fourth(p);
            let s = sign_pow(leg(2 * delta, p), m as u64);
            // The other square root of -1 gives the same sign since (-1/p) = 1.
            assert_eq!(s, sign_pow(leg(2 * (pi - delta), p), m as u64));
            Ok(root.scale(2 * s * leg(d, p), 1))
        }
        Kind::Second if p == 3 => Ok(i_pow(-(m as i64)) * root.scale(leg(d, 3), 1)),
        Kind::Second => {
            if p % 3 == 2 {
                return Ok(CycNum::zero());
            }
            let delta = delta_sixth(p);
            let s = sign_pow(leg(2 * delta, p), m as u64);
            // delta^{-1} = 1 - delta is the other primitive sixth root.
            assert_eq!(s, sign_pow(leg(2 * (1 - delta), p), m as u64));
            let half_m = (m / 2) as u64;
            let t = leg(sign_pow(-1, half_m) as i64 * d, p);
            let e = -((m as i64).pow(2) * (pi - 1).pow(2));
            Ok(cyc(e, 16) * root.scale(2 * s * t, 1))
        }
    }
}

/// G or G' of the cyclic form A_{2^k, a}.
pub fn cyclic_two(k: u32, a: i64, kind: Kind) -> CycNum {
    let root = sqrt_int(1 << k);
    match kind {
        Kind::First if k == 1 => CycNum::zero(),
        Kind::First => root.scale(sign_pow(kronecker(2, a) as i128, k as u64), 1),
        Kind::Second => {
            if k % 2 == 0 {
                return CycNum::zero();
            }
            let r = a.rem_euclid(8);
            let e = (r + 1) * (r + 1) / 4;
            // (a+1)^2/4 only matters mod 4; it must not depend on the representative of a mod 8.
            assert_eq!(e.rem_euclid(4), ((r + 9) * (r + 9) / 4).rem_euclid(4));
            let s = sign_pow(kronecker(2, a) as i128, k as u64 + 1);
            cyc(-1, 8) * i_pow(e) * root.scale(s, 1)
        }
    }
}

fn iso(a: &FqForm, blocks: &[Block], limits: &Limits) -> Result<bool> {
    is_isometric(a, &BlockExpr::of(blocks.iter().cloned()).realize(), limits)
}

fn a2(a: i64) -> Block {
    Block::Cyclic { p: 2, k: 1, a }
}

/// Shapes of U-free 2-elementary forms of dimension >= 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum UFree {
    V,
    Mixed,
    Square(i64),
    Cube(i64),
    Fourth(i64),
}

pub(crate) fn classify_u_free(form: &FqForm, limits: &Limits) -> Result<Option<UFree>> {
    let shapes: Vec<(UFree, Vec<Block>)> = match form.rank() {
        2 => vec![
            (UFree::V, vec![Block::V2]),
            (UFree::Mixed, vec![a2(1), a2(-1)]),
            (UFree::Square(1), vec![a2(1); 2]),
            (UFree::Square(-1), vec![a2(-1); 2]),
        ],
        3 => vec![(UFree::Cube(1), vec![a2(1); 3]), (UFree::Cube(-1), vec![a2(-1); 3])],
        4 => vec![(UFree::Fourth(1), vec![a2(1); 4]), (UFree::Fourth(-1), vec![a2(-1); 4])],
        _ => vec![],
    };
    for (shape, blocks) in shapes {
        if iso(form, &blocks, limits)? {
            return Ok(Some(shape));
        }
    }
    Ok(None)
}

/// Which 2-elementary rule applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum TwoElemCase {
    WithU,
    NoU,
}

/// G or G' of a 2-elementary form of dimension >= 2; None for U-free shapes outside the known list.
pub(crate) fn two_elementary_value(
    form: &FqForm,
    kind: Kind,
    limits: &Limits,
) -> Result<Option<(CycNum, TwoElemCase)>> {
    let root = sqrt_int(form.group_order());
    if contains_u_summand(form, limits)?.is_some() {
        let v = match kind {
            Kind::Second => CycNum::zero(),
            Kind::First => {
                if characteristic_element(form, limits)?.is_zero() {
                    root.scale(delta_sign(form, limits)?, 1)
                } else {
                    CycNum::zero()
                }
            }
        };
        return Ok(Some((v, TwoElemCase::WithU)));
    }
    let Some(shape) = classify_u_free(form, limits)? else { return Ok(None) };
    let v = match (kind, shape) {
        (Kind::First, UFree::V | UFree::Mixed | UFree::Cube(_)) => CycNum::zero(),
        (Kind::First, UFree::Square(_) | UFree::Fourth(_)) => root,
        (Kind::Second, UFree::Square(_)) => CycNum::zero(),
        (Kind::Second, UFree::V | UFree::Mixed | UFree::Fourth(_)) => root,
        (Kind::Second, UFree::Cube(a)) => (CycNum::one() + i_pow(-a)).scale(2, 1),
    };
    Ok(Some((v, TwoElemCase::NoU)))
}

/// delta_A = sign(|A_0| - |A_1|) for a special 2-elementary form, where A_mu = {q = mu}.
pub fn delta_sign(form: &FqForm, limits: &Limits) -> Result<i128> {
    let mut diff: i64 = 0;
    for x in form.elements(limits)? {
        let q = form.q_of(&x);
        if q.is_zero() {
            diff += 1;
        } else if q.den() == 2 {
            diff -= 1;
        }
    }
    Ok(diff.signum() as i128)
}

/// Whether a 2-elementary form is isometric to V.
pub(crate) fn is_v(form: &FqForm, limits: &Limits) -> Result<bool> {
    Ok(form.rank() == 2 && iso(form, &[Block::V2], limits)?)
}

/// Whether B is (A_{2,b})^2 for some b or A_{2,1} + A_{2,-1}.
pub(crate) fn is_k2_exception(form: &FqForm, limits: &Limits) -> Result<bool> {
    Ok(form.rank() == 2
        && matches!(classify_u_free(form, limits)?, Some(UFree::Square(_) | UFree::Mixed)))
}

/// The classical sum of B(2) for a 3-elementary space of dimension m and discriminant d.
pub(crate) fn scaled_classical_three(m: u32, d: i64) -> CycNum {
    let i_root3 = i_pow(1) * sqrt_int(3);
    i_root3.pow(m).scale(leg((1i64 << m) * d, 3), 1)
}
