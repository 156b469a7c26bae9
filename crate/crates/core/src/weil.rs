//! The Weil representation on C[A], its O(A)-invariant part, trace
//! identities, and the dimension of invariant vector-valued modular forms.
//!
//! Matrices are kept as `scalar * core` where the core lives in Q(e(1/D)),
//! D the level of the form. rho(S) has scalar e(-sigma/8)/sqrt|A| and core
//! e(-(x, y)); rho(T) has scalar 1. Products multiply scalars and cores
//! separately, so the expensive matrix work stays in the small field.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::exactmath::{cyc, sqrt_int, CycMatrix, CycNum};
use crate::fqm::{Element, Enumeration, FqForm};
use crate::limits::Limits;
use crate::oracle::{classical_gauss, equivariant_from_orbits, signature_of, Kind};
use crate::orthogroup::{orbits, orthogonal_group, IsomGroup, OrbitPartition};

/// A weight l in (1/2)Z, stored as 2l.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfWeight {
    pub twice_l: i64,
}

impl HalfWeight {
    pub fn from_twice(twice_l: i64) -> HalfWeight {
        HalfWeight { twice_l }
    }

    pub fn to_f64(&self) -> f64 {
        self.twice_l as f64 / 2.0
    }
}

impl FromStr for HalfWeight {
    type Err = Error;

    /// Accepts `7`, `15/2` or `7.5`.
    fn from_str(s: &str) -> Result<HalfWeight> {
        let s = s.trim();
        let bad = || Error::InvalidParameter(format!("weight '{s}' is not an integer or half-integer"));
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            return match d.trim() {
                "1" => Ok(HalfWeight::from_twice(2 * n)),
                "2" => Ok(HalfWeight::from_twice(n)),
                _ => Err(bad()),
            };
        }
        if let Some((whole, frac)) = s.split_once('.') {
            let w: i64 = whole.parse().map_err(|_| bad())?;
            let neg = whole.starts_with('-');
            let half = match frac.trim_end_matches('0') {
                "" => 0,
                "5" => 1,
                _ => return Err(bad()),
            };
            return Ok(HalfWeight::from_twice(2 * w + if neg { -half } else { half }));
        }
        Ok(HalfWeight::from_twice(2 * s.parse::<i64>().map_err(|_| bad())?))
    }
}

impl fmt::Display for HalfWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice_l % 2 == 0 {
            write!(f, "{}", self.twice_l / 2)
        } else {
            write!(f, "{}/2", self.twice_l)
        }
    }
}

/// A matrix `scalar * core` acting on C[A] or on its invariant subspace.
#[derive(Debug, Clone)]
pub struct WeilMatrix {
    scalar: CycNum,
    core: CycMatrix,
    labels: Vec<Element>,
}

impl WeilMatrix {
    pub fn dim(&self) -> usize {
        self.core.dim()
    }

    /// Basis elements (group elements, or orbit representatives for invariant matrices).
    pub fn basis_labels(&self) -> &[Element] {
        &self.labels
    }

    pub fn entry(&self, i: usize, j: usize) -> CycNum {
        &self.scalar * &self.core.entry(i, j)
    }

    pub fn scalar(&self) -> &CycNum {
        &self.scalar
    }

    pub fn core(&self) -> &CycMatrix {
        &self.core
    }

    pub fn mul(&self, other: &WeilMatrix) -> WeilMatrix {
        WeilMatrix {
            scalar: &self.scalar * &other.scalar,
            core: self.core.mul(&other.core),
            labels: self.labels.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> WeilMatrix {
        WeilMatrix { scalar: self.scalar.pow(e), core: self.core.pow(e), labels: self.labels.clone() }
    }

    pub fn conj_transpose(&self) -> WeilMatrix {
        WeilMatrix { scalar: self.scalar.conj(), core: self.core.conj_transpose(), labels: self.labels.clone() }
    }

    pub fn trace(&self) -> CycNum {
        &self.scalar * &self.core.trace()
    }

    /// The matrix with the scalar multiplied in.
    pub fn expanded(&self) -> CycMatrix {
        self.core.scale(&self.scalar)
    }

    pub fn is_identity(&self) -> bool {
        *self == identity_like(self)
    }
}

fn identity_like(m: &WeilMatrix) -> WeilMatrix {
    WeilMatrix { scalar: CycNum::one(), core: CycMatrix::identity(m.dim()), labels: m.labels.clone() }
}

impl PartialEq for WeilMatrix {
    fn eq(&self, other: &WeilMatrix) -> bool {
        if self.scalar == other.scalar {
            return self.core == other.core;
        }
        self.expanded() == other.expanded()
    }
}

/// Everything needed to evaluate the Weil representation of one form.
pub struct WeilRep {
    form: FqForm,
    en: Arc<Enumeration>,
    group: IsomGroup,
    orbits: OrbitPartition,
    sigma: u8,
    g: CycNum,
    g2: CycNum,
}

/// Outcome of the exact structural checks on rho.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeilChecks {
    pub unitary: bool,
    pub s_order_8: bool,
    pub braid: bool,
    pub z_action: bool,
    pub equivariant: bool,
    pub trace_s: bool,
    pub trace_st: bool,
}

impl WeilChecks {
    pub fn all(&self) -> bool {
        self.unitary
            && self.s_order_8
            && self.braid
            && self.z_action
            && self.equivariant
            && self.trace_s
            && self.trace_st
    }
}

/// Matrix traces of rho_inv(S), rho_inv(ST) and their closed expressions.
#[derive(Debug, Clone)]
pub struct TraceIdentities {
    pub tr_s: CycNum,
    pub tr_st: CycNum,
    pub formula_s: CycNum,
    pub formula_st: CycNum,
    pub check: bool,
}

/// The dimension formula before and after rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionValue {
    pub dim: u64,
    /// The four-term sum as a float; None when the parity clause forces 0.
    pub raw: Option<f64>,
}

impl WeilRep {
    pub fn new(form: &FqForm, limits: &Limits) -> Result<WeilRep> {
        let group = orthogonal_group(form, limits)?;
        let part = orbits(&group);
        let (g, g2) = equivariant_from_orbits(&part);
        let sigma = signature_of(&classical_gauss(form, Kind::Second, limits)?)?;
        Ok(WeilRep {
            form: form.clone(),
            en: group.enumeration().clone(),
            group,
            orbits: part,
            sigma,
            g: g.value,
            g2: g2.value,
        })
    }

    pub fn form(&self) -> &FqForm {
        &self.form
    }

    pub fn signature(&self) -> u8 {
        self.sigma
    }

    pub fn orbits(&self) -> &OrbitPartition {
        &self.orbits
    }

    pub fn gauss(&self) -> (&CycNum, &CycNum) {
        (&self.g, &self.g2)
    }

    fn labels(&self) -> Vec<Element> {
        (0..self.en.size()).map(|i| self.en.element(i)).collect()
    }

    fn level(&self) -> u32 {
        self.en.level() as u32
    }

    pub fn rho_t(&self) -> WeilMatrix {
        let n = self.en.size();
        let mut entries = vec![CycNum::zero(); n * n];
        for x in 0..n {
            entries[x * n + x] = cyc(self.en.q(x) as i64, self.level());
        }
        WeilMatrix { scalar: CycNum::one(), core: CycMatrix::from_entries(n, &entries), labels: self.labels() }
    }

    /// e(-sigma/8) / sqrt|A|.
    fn s_scalar(&self) -> CycNum {
        let n = self.en.size() as u64;
        (cyc(-(self.sigma as i64), 8) * sqrt_int(n)).scale(1, n as i128)
    }

    pub fn rho_s(&self) -> WeilMatrix {
        let n = self.en.size();
        let d = self.level();
        let mut entries = Vec::with_capacity(n * n);
        for x in 0..n {
            let f = self.en.functional(x);
            for y in 0..n {
                entries.push(cyc(-(self.en.apply_functional(&f, y) as i64), d));
            }
        }
        WeilMatrix { scalar: self.s_scalar(), core: CycMatrix::from_entries(n, &entries), labels: self.labels() }
    }

    /// rho of a word over S, T, Z; the leftmost letter is applied last.
    pub fn rho_word(&self, word: &str) -> Result<WeilMatrix> {
        let letters = parse_word(word)?;
        let (s, t) = (self.rho_s(), self.rho_t());
        let mut acc = identity_like(&t);
        for (letter, power) in letters {
            let base = match letter {
                'S' => s.clone(),
                'T' => t.clone(),
                _ => s.mul(&s),
            };
            let m = if power >= 0 { base.pow(power as u32) } else { base.conj_transpose().pow((-power) as u32) };
            acc = acc.mul(&m);
        }
        Ok(acc)
    }

    /// Orbit sums v_[x], as lists of orbit members.
    pub fn invariant_basis(&self) -> Vec<Vec<Element>> {
        (0..self.orbits.len()).map(|k| self.orbits.orbit_elements(k)).collect()
    }

    /// The matrix of `m` on the invariant subspace, in the orbit-sum basis.
    pub fn restrict(&self, m: &WeilMatrix) -> Result<WeilMatrix> {
        let k = self.orbits.len();
        let mut entries = Vec::with_capacity(k * k);
        for j in 0..k {
            let rows = self.orbits.member_indices(j);
            for c in 0..k {
                let cols = self.orbits.member_indices(c);
                let row_sum =
                    |y: usize| -> CycNum { cols.iter().map(|&z| m.core.entry(y, z as usize)).sum() };
                let v = row_sum(rows[0] as usize);
                // rho commutes with O(A), so every member of an orbit sees the same coefficient.
                if rows[1..].iter().any(|&y| row_sum(y as usize) != v) {
                    return Err(Error::Inconsistent("image of an orbit sum is not O(A)-invariant".into()));
                }
                entries.push(v);
            }
        }
        Ok(WeilMatrix {
            scalar: m.scalar.clone(),
            core: CycMatrix::from_entries(k, &entries),
            labels: self.orbits.representatives(),
        })
    }

    pub fn rho_inv(&self, word: &str) -> Result<WeilMatrix> {
        self.restrict(&self.rho_word(word)?)
    }

    /// Both trace formulas, computed as matrix traces and from G, G'.
    pub fn trace_identities(&self) -> Result<TraceIdentities> {
        let s = self.rho_s();
        let st = s.mul(&self.rho_t());
        let tr_s = self.restrict(&s)?.trace();
        let tr_st = self.restrict(&st)?.trace();
        let c = self.s_scalar();
        let formula_s = &c * &self.g;
        let formula_st = &c * &self.g2.conj();
        let check = tr_s == formula_s && tr_st == formula_st;
        Ok(TraceIdentities { tr_s, tr_st, formula_s, formula_st, check })
    }

    /// Unitarity, S^8 = 1, S^2 = (ST)^3, the action of Z, O(A)-equivariance and both trace identities.
    pub fn checks(&self) -> Result<WeilChecks> {
        let s = self.rho_s();
        let t = self.rho_t();
        let unitary = s.mul(&s.conj_transpose()).is_identity() && t.mul(&t.conj_transpose()).is_identity();
        let s2 = s.mul(&s);
        let s4 = s2.mul(&s2);
        let s_order_8 = s4.mul(&s4).is_identity();
        let braid = s2 == s.mul(&t).pow(3);

        let n = self.en.size();
        let mut flip = vec![CycNum::zero(); n * n];
        let i_sigma = cyc(-(self.sigma as i64), 4);
        for x in 0..n {
            flip[self.en.neg(x) * n + x] = i_sigma.clone();
        }
        let z_expected = WeilMatrix { scalar: CycNum::one(), core: CycMatrix::from_entries(n, &flip), labels: s.labels.clone() };
        let z_action = s2 == z_expected;

        // P_g M P_g^{-1} = M  <=>  M[gx][gy] = M[x][y]; T is diagonal in q, S depends on the pairing.
        let equivariant = (0..self.group.order()).all(|g| {
            let img: Vec<usize> = (0..n).map(|x| self.group.apply_index(g, x)).collect();
            (0..n).all(|x| {
                self.en.q(img[x]) == self.en.q(x)
                    && (0..n).all(|y| s.core.entry(img[x], img[y]) == s.core.entry(x, y))
            })
        });

        let tr = self.trace_identities()?;
        let trace_s = tr.tr_s == tr.formula_s;
        let trace_st = tr.tr_st == tr.formula_st;
        Ok(WeilChecks { unitary, s_order_8, braid, z_action, equivariant, trace_s, trace_st })
    }

    /// alpha(A): sum over orbit representatives of the [0, 1) lift of q.
    pub fn alpha(&self) -> Ratio<i64> {
        let d = self.en.level() as i64;
        self.orbits.rep_indices().iter().map(|&x| Ratio::new(self.en.q(x) as i64, d)).sum()
    }

    /// Dimension of the space of weight-l modular forms for rho_A^inv.
    pub fn dim_invariant_forms(&self, l: HalfWeight) -> Result<DimensionValue> {
        if l.twice_l < 4 {
            return Err(Error::WeightTooSmall(l.twice_l));
        }
        let sigma = self.sigma as i64;
        if (l.twice_l - sigma).rem_euclid(4) != 0 {
            return Ok(DimensionValue { dim: 0, raw: None });
        }
        let d = self.orbits.len() as f64;
        let lf = l.to_f64();
        let alpha = self.alpha();
        let alpha = *alpha.numer() as f64 / *alpha.denom() as f64;
        let root = (self.en.size() as f64).sqrt();
        let sign = if ((l.twice_l - sigma) / 4).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let g = self.g.to_complex().0;
        let twist = &cyc(2 * l.twice_l + 2 - 3 * sigma, 24) * &self.g2.conj();
        let raw = d * (lf + 5.0) / 12.0 - alpha
            + sign * g / (4.0 * root)
            + 2.0 / (3.0 * 3f64.sqrt() * root) * twist.to_complex().0;
        let rounded = raw.round();
        if (raw - rounded).abs() >= 1e-6 || rounded < 0.0 {
            return Err(Error::Inconsistent(format!("dimension formula gave {raw}, not a nonnegative integer")));
        }
        Ok(DimensionValue { dim: rounded as u64, raw: Some(raw) })
    }
}

/// Splits a word like `S T^-1 Z^2` or `STS` into (letter, power) pairs.
pub fn parse_word(word: &str) -> Result<Vec<(char, i64)>> {
    let chars: Vec<char> = word.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if !matches!(c, 'S' | 'T' | 'Z') {
            return Err(Error::Word(format!("unexpected '{c}' in '{word}'")));
        }
        i += 1;
        let mut power = 1i64;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            let start = i;
            if i < chars.len() && chars[i] == '-' {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            power = text.parse().map_err(|_| Error::Word(format!("bad exponent '{text}' in '{word}'")))?;
        }
        out.push((c, power));
    }
    Ok(out)
}

pub fn rho_t(form: &FqForm, limits: &Limits) -> Result<WeilMatrix> {
    Ok(WeilRep::new(form, limits)?.rho_t())
}

pub fn rho_s(form: &FqForm, limits: &Limits) -> Result<WeilMatrix> {
    Ok(WeilRep::new(form, limits)?.rho_s())
}

pub fn rho_word(form: &FqForm, word: &str, limits: &Limits) -> Result<WeilMatrix> {
    WeilRep::new(form, limits)?.rho_word(word)
}

pub fn rho_inv(form: &FqForm, word: &str, limits: &Limits) -> Result<WeilMatrix> {
    WeilRep::new(form, limits)?.rho_inv(word)
}

pub fn invariant_basis(form: &FqForm, limits: &Limits) -> Result<Vec<Vec<Element>>> {
    Ok(WeilRep::new(form, limits)?.invariant_basis())
}

pub fn trace_identities(form: &FqForm, limits: &Limits) -> Result<TraceIdentities> {
    WeilRep::new(form, limits)?.trace_identities()
}

pub fn alpha_invariant(form: &FqForm, limits: &Limits) -> Result<Ratio<i64>> {
    Ok(WeilRep::new(form, limits)?.alpha())
}

pub fn dim_invariant_forms(form: &FqForm, l: HalfWeight, limits: &Limits) -> Result<u64> {
    Ok(WeilRep::new(form, limits)?.dim_invariant_forms(l)?.dim)
}
