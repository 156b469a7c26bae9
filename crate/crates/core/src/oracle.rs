//! Definition-level Gauss sums: the ground truth every closed form is checked against.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exactmath::{cyc, sqrt_int, CycNum};
use crate::fqm::{Element, FqForm};
use crate::limits::Limits;
use crate::orthogroup::{orbits, orthogonal_group, IsomGroup, OrbitPartition};

/// First kind sums e((x, y)); second kind inserts e(-q(x)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    First,
    Second,
}

impl Kind {
    pub const BOTH: [Kind; 2] = [Kind::First, Kind::Second];
}

/// A Gauss sum together with |A|.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussValue {
    pub value: CycNum,
    pub form_order: u64,
}

impl GaussValue {
    /// |value| / sqrt|A|.
    pub fn normalized_abs(&self) -> f64 {
        self.value.abs() / (self.form_order as f64).sqrt()
    }
}

/// Both equivariant sums of one form under its full orthogonal group.
#[derive(Debug, Clone)]
pub struct EquivariantSums {
    pub first: GaussValue,
    pub second: GaussValue,
    pub group_order: usize,
    pub orbit_count: usize,
}

impl EquivariantSums {
    pub fn get(&self, kind: Kind) -> &GaussValue {
        match kind {
            Kind::First => &self.first,
            Kind::Second => &self.second,
        }
    }
}

/// <[x], [y]> = sum over y' in the orbit of y of e((x, y')).
pub fn orbit_pairing(group: &IsomGroup, x: &Element, y: &Element) -> CycNum {
    let en = group.enumeration();
    let (ix, iy) = (en.index_of(x), en.index_of(y));
    let orbit: BTreeSet<usize> = (0..group.order()).map(|g| group.apply_index(g, iy)).collect();
    let f = en.functional(ix);
    let d = en.level() as usize;
    let mut counts = vec![0i128; d];
    for y in orbit {
        counts[en.apply_functional(&f, y) as usize] += 1;
    }
    CycNum::from_group_coeffs(d as u32, 1, &counts)
}

/// Both equivariant Gauss sums for the group whose orbits are given.
pub fn equivariant_from_orbits(part: &OrbitPartition) -> (GaussValue, GaussValue) {
    let en = part.enumeration();
    let d = en.level() as usize;
    let mut first = vec![0i128; d];
    let mut second = vec![0i128; d];
    for (k, &x) in part.rep_indices().iter().enumerate() {
        let f = en.functional(x);
        let qx = en.q(x) as usize;
        for &y in part.member_indices(k) {
            let b = en.apply_functional(&f, y as usize) as usize;
            first[b] += 1;
            second[(b + d - qx) % d] += 1;
        }
    }
    let n = en.size() as u64;
    (
        GaussValue { value: CycNum::from_group_coeffs(d as u32, 1, &first), form_order: n },
        GaussValue { value: CycNum::from_group_coeffs(d as u32, 1, &second), form_order: n },
    )
}

pub fn equivariant_gauss(group: &IsomGroup) -> GaussValue {
    equivariant_from_orbits(&orbits(group)).0
}

pub fn equivariant_gauss2(group: &IsomGroup) -> GaussValue {
    equivariant_from_orbits(&orbits(group)).1
}

/// G(A, O(A)) and G'(A, O(A)) computed from scratch.
pub fn gauss_sums(form: &FqForm, limits: &Limits) -> Result<EquivariantSums> {
    let group = orthogonal_group(form, limits)?;
    let part = orbits(&group);
    let (first, second) = equivariant_from_orbits(&part);
    Ok(EquivariantSums { first, second, group_order: group.order(), orbit_count: part.len() })
}

/// Sum of e((x, x)) (first kind) or e(q(x)) (second kind) over all of A.
pub fn classical_gauss(form: &FqForm, kind: Kind, limits: &Limits) -> Result<GaussValue> {
    let en = form.enumeration(limits)?;
    if !en.radical_is_trivial() {
        return Err(Error::Degenerate);
    }
    let d = en.level() as usize;
    let mut counts = vec![0i128; d];
    for x in 0..en.size() {
        let q = en.q(x) as usize;
        let e = match kind {
            Kind::First => 2 * q % d,
            Kind::Second => q,
        };
        counts[e] += 1;
    }
    Ok(GaussValue { value: CycNum::from_group_coeffs(d as u32, 1, &counts), form_order: en.size() as u64 })
}

/// The signature sigma in Z/8 from G'(A) = e(sigma/8) sqrt|A|.
pub fn signature(form: &FqForm, limits: &Limits) -> Result<u8> {
    let g = classical_gauss(form, Kind::Second, limits)?;
    signature_of(&g)
}

/// Matches a classical second-kind sum against the eight candidates.
pub fn signature_of(g: &GaussValue) -> Result<u8> {
    let n = g.form_order as i128;
    if g.value.pow(8) != CycNum::from_int(n.pow(4)) {
        return Err(Error::Inconsistent(format!("G'(A)^8 != |A|^4 for |A| = {n}")));
    }
    let root = sqrt_int(g.form_order);
    (0..8u8)
        .find(|&s| g.value == &cyc(s as i64, 8) * &root)
        .ok_or_else(|| Error::Inconsistent("no eighth root of unity matches G'(A)/sqrt|A|".into()))
}

/// Compares G(A, O(A)) with the product over p-parts, for both kinds.
pub fn localization_check(form: &FqForm, limits: &Limits) -> Result<bool> {
    let whole = gauss_sums(form, limits)?;
    let mut first = CycNum::one();
    let mut second = CycNum::one();
    for p in form.primes() {
        let local = gauss_sums(&form.p_part(p).0, limits)?;
        first = first * &local.first.value;
        second = second * &local.second.value;
    }
    Ok(first == whole.first.value && second == whole.second.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fqm::form_from_str;

    fn sums(s: &str) -> EquivariantSums {
        gauss_sums(&form_from_str(s).unwrap(), &Limits::default()).unwrap()
    }

    #[test]
    fn spot_values() {
        assert!(sums("q(3,1)").first.value.is_zero());
        assert_eq!(sums("q(3,1)").second.value, CycNum::one() - cyc(1, 3));
        assert_eq!(sums("gram[;;]").first.value, CycNum::one());
        assert_eq!(sums("U(5)").first.value, CycNum::from_int(10));
        assert_eq!(sums("U(7)").second.value, CycNum::from_int(14));
    }

    #[test]
    fn classical_and_signature() {
        let l = Limits::default();
        let a = form_from_str("q(3,1)").unwrap();
        assert_eq!(classical_gauss(&a, Kind::First, &l).unwrap().value, CycNum::one() + cyc(1, 3).scale(2, 1));
        let b = form_from_str("q(2,1)").unwrap();
        assert_eq!(classical_gauss(&b, Kind::Second, &l).unwrap().value, CycNum::one() + cyc(1, 4));
        assert_eq!(signature(&form_from_str("V2").unwrap(), &l).unwrap(), 4);
        assert_eq!(signature(&form_from_str("q(3,2)").unwrap(), &l).unwrap(), 2);
        assert_eq!(signature(&form_from_str("gram[;;]").unwrap(), &l).unwrap(), 0);
    }

    #[test]
    fn orbit_pairings() {
        let a = form_from_str("q(3,1)").unwrap();
        let g = orthogonal_group(&a, &Limits::default()).unwrap();
        let x = a.element(&[1]).unwrap();
        assert_eq!(orbit_pairing(&g, &x, &x), CycNum::from_int(-1));
        assert_eq!(orbit_pairing(&g, &a.zero(), &a.zero()), CycNum::one());
    }

    #[test]
    fn localization_examples() {
        let l = Limits::default();
        assert!(localization_check(&form_from_str("q(4,1)+q(3,1)").unwrap(), &l).unwrap());
        let a = form_from_str("q(4,1)+q(5,1)").unwrap();
        assert!(localization_check(&a, &l).unwrap());
        assert_eq!(gauss_sums(&a, &l).unwrap().first.value, sqrt_int(5).scale(2, 1));
    }
}
