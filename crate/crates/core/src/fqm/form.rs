use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exactmath::ntheory::valuation;
use crate::exactmath::{ResidueQ2Z, ResidueQZ};
use crate::limits::Limits;

use super::enumeration::Enumeration;

/// A finite quadratic module on `Z/n_1 x ... x Z/n_r`.
///
/// `qdiag[i] = q(e_i)` and `pairing[i][j] = (e_i, e_j)` for `i != j`; the
/// diagonal of `pairing` is kept at zero since `(e_i, e_i) = 2 q(e_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FqForm {
    orders: Vec<u64>,
    qdiag: Vec<ResidueQZ>,
    pairing: Vec<Vec<ResidueQZ>>,
}

/// An element of a form, coefficients reduced modulo the generator orders.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(Vec<u64>);

impl Element {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub(crate) fn from_reduced(c: Vec<u64>) -> Element {
        Element(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FqForm {
    /// Builds a form from generator data, checking that q is well defined.
    ///
    /// `offdiag[i][j]` is read for `i < j` only and mirrored.
    pub fn new(orders: Vec<u64>, qdiag: Vec<ResidueQZ>, offdiag: Vec<Vec<ResidueQZ>>) -> Result<FqForm> {
        let r = orders.len();
        if qdiag.len() != r || offdiag.len() != r || offdiag.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidParameter("generator data has inconsistent sizes".into()));
        }
        if let Some(n) = orders.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidParameter(format!("generator order {n} must be at least 2")));
        }
        let mut pairing = vec![vec![ResidueQZ::ZERO; r]; r];
        for i in 0..r {
            for j in i + 1..r {
                pairing[i][j] = offdiag[i][j];
                pairing[j][i] = offdiag[i][j];
            }
        }
        let form = FqForm { orders, qdiag, pairing };
        form.check_well_defined()?;
        Ok(form)
    }

    pub fn trivial() -> FqForm {
        FqForm { orders: vec![], qdiag: vec![], pairing: vec![] }
    }

    /// q(x + n_i e_i) = q(x) for x = 0 and x = e_j.
    fn check_well_defined(&self) -> Result<()> {
        for (i, &n) in self.orders.iter().enumerate() {
            let n = n as i64;
            let qi = self.qdiag[i];
            if !qi.scale(n * n).is_zero() || !qi.scale(2 * n).is_zero() {
                return Err(Error::InvalidParameter(format!(
                    "q(e_{}) = {qi} is not well defined on Z/{n}",
                    i + 1
                )));
            }
            for j in 0..self.rank() {
                if j != i && !self.pairing[i][j].scale(n).is_zero() {
                    return Err(Error::InvalidParameter(format!(
                        "(e_{}, e_{}) = {} is not well defined on Z/{n}",
                        i + 1,
                        j + 1,
                        self.pairing[i][j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn qdiag(&self) -> &[ResidueQZ] {
        &self.qdiag
    }

    /// (e_i, e_j), including the diagonal 2 q(e_i).
    pub fn gram(&self, i: usize, j: usize) -> ResidueQZ {
        if i == j {
            self.qdiag[i].scale(2)
        } else {
            self.pairing[i][j]
        }
    }

    pub fn group_order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |a, b| a.lcm(b))
    }

    /// Least common denominator of all values of q and of the pairing.
    pub fn level(&self) -> u64 {
        let mut d = 1i64;
        for i in 0..self.rank() {
            d = d.lcm(&self.qdiag[i].den());
            for j in 0..self.rank() {
                d = d.lcm(&self.pairing[i][j].den());
            }
        }
        d as u64
    }

    /// Reduces integer coefficients into an element.
    pub fn element(&self, coeffs: &[i64]) -> Result<Element> {
        if coeffs.len() != self.rank() {
            return Err(Error::InvalidParameter(format!(
                "element has {} coordinates, form has rank {}",
                coeffs.len(),
                self.rank()
            )));
        }
        Ok(Element(coeffs.iter().zip(&self.orders).map(|(&c, &n)| c.rem_euclid(n as i64) as u64).collect()))
    }

    pub fn zero(&self) -> Element {
        Element(vec![0; self.rank()])
    }

    /// The i-th generator.
    pub fn generator(&self, i: usize) -> Element {
        let mut c = vec![0; self.rank()];
        c[i] = 1 % self.orders[i];
        Element(c)
    }

    pub fn add(&self, x: &Element, y: &Element) -> Element {
        Element(x.0.iter().zip(&y.0).zip(&self.orders).map(|((a, b), n)| (a + b) % n).collect())
    }

    pub fn neg(&self, x: &Element) -> Element {
        Element(x.0.iter().zip(&self.orders).map(|(a, n)| (n - a) % n).collect())
    }

    pub fn mul(&self, k: i64, x: &Element) -> Element {
        Element(
            x.0.iter()
                .zip(&self.orders)
                .map(|(&a, &n)| ((a as i128 * k as i128).rem_euclid(n as i128)) as u64)
                .collect(),
        )
    }

    pub fn q_of(&self, x: &Element) -> ResidueQZ {
        let c = &x.0;
        let mut acc = ResidueQZ::ZERO;
        for i in 0..self.rank() {
            if c[i] == 0 {
                continue;
            }
            acc = acc + self.qdiag[i].scale((c[i] as i64) * (c[i] as i64));
            for j in i + 1..self.rank() {
                acc = acc + self.pairing[i][j].scale(c[i] as i64 * c[j] as i64);
            }
        }
        acc
    }

    pub fn pair(&self, x: &Element, y: &Element) -> ResidueQZ {
        let mut acc = ResidueQZ::ZERO;
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                if x.0[i] != 0 && y.0[j] != 0 {
                    acc = acc + self.gram(i, j).scale(x.0[i] as i64 * y.0[j] as i64);
                }
            }
        }
        acc
    }

    /// (x, x) = 2 q(x) as a class in Q/2Z.
    pub fn norm2(&self, x: &Element) -> ResidueQ2Z {
        // Lift q(x) to Q using the integer coefficients, then double.
        let c = &x.0;
        let mut num: i128 = 0;
        let den = self.level() as i128;
        for i in 0..self.rank() {
            let qi = self.qdiag[i].numerator_over(den as i64) as i128;
            num += qi * (c[i] * c[i]) as i128;
            for j in i + 1..self.rank() {
                num += self.pairing[i][j].numerator_over(den as i64) as i128 * (c[i] * c[j]) as i128;
            }
        }
        let twice = (2 * num).rem_euclid(2 * den);
        ResidueQ2Z::new(twice as i64, den as i64)
    }

    /// Every element, in lexicographic order of coefficients.
    pub fn elements(&self, limits: &Limits) -> Result<impl Iterator<Item = Element> + '_> {
        self.check_cap(limits)?;
        let total = self.group_order();
        Ok((0..total).map(move |mut idx| {
            let mut c = vec![0; self.rank()];
            for i in (0..self.rank()).rev() {
                c[i] = idx % self.orders[i];
                idx /= self.orders[i];
            }
            Element(c)
        }))
    }

    pub fn check_cap(&self, limits: &Limits) -> Result<()> {
        let order = self.orders.iter().try_fold(1u64, |a, &b| a.checked_mul(b)).unwrap_or(u64::MAX);
        if order > limits.max_order {
            return Err(Error::OrderCap { order, cap: limits.max_order });
        }
        Ok(())
    }

    /// Precomputed tables for fast enumeration.
    pub fn enumeration(&self, limits: &Limits) -> Result<Enumeration> {
        self.check_cap(limits)?;
        Ok(Enumeration::new(self))
    }

    /// True when no nonzero x pairs trivially with every generator.
    pub fn is_nondegenerate(&self, limits: &Limits) -> Result<bool> {
        Ok(self.enumeration(limits)?.radical_is_trivial())
    }

    pub fn direct_sum(&self, other: &FqForm) -> FqForm {
        let (r, s) = (self.rank(), other.rank());
        let mut pairing = vec![vec![ResidueQZ::ZERO; r + s]; r + s];
        for i in 0..r {
            pairing[i][..r].copy_from_slice(&self.pairing[i]);
        }
        for i in 0..s {
            pairing[r + i][r..].copy_from_slice(&other.pairing[i]);
        }
        FqForm {
            orders: self.orders.iter().chain(&other.orders).copied().collect(),
            qdiag: self.qdiag.iter().chain(&other.qdiag).copied().collect(),
            pairing,
        }
    }

    /// Primes dividing |A|.
    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> =
            crate::exactmath::factorize(self.group_order()).into_iter().map(|(p, _)| p).collect();
        ps.dedup();
        ps
    }

    /// The p-part on generators (n_i / p^v) e_i, with its embedding into A.
    pub fn p_part(&self, p: u64) -> (FqForm, PartEmbedding) {
        let mut gens = Vec::new();
        let mut scales = Vec::new();
        let mut orders = Vec::new();
        for (i, &n) in self.orders.iter().enumerate() {
            let v = valuation(n, p);
            if v > 0 {
                let pv = p.pow(v);
                gens.push(i);
                scales.push(n / pv);
                orders.push(pv);
            }
        }
        let qdiag = gens.iter().zip(&scales).map(|(&i, &s)| self.qdiag[i].scale((s * s) as i64)).collect();
        let mut pairing = vec![vec![ResidueQZ::ZERO; gens.len()]; gens.len()];
        for a in 0..gens.len() {
            for b in 0..gens.len() {
                if a != b {
                    pairing[a][b] = self.pairing[gens[a]][gens[b]].scale((scales[a] * scales[b]) as i64);
                }
            }
        }
        let part = FqForm { orders, qdiag, pairing };
        (part, PartEmbedding { rank: self.rank(), gens, scales })
    }

    /// Renders in the raw `gram[...]` grammar.
    pub fn to_gram_string(&self) -> String {
        let orders: Vec<String> = self.orders.iter().map(|n| n.to_string()).collect();
        let q: Vec<String> = self.qdiag.iter().map(|x| x.to_string()).collect();
        let mut off = Vec::new();
        for i in 0..self.rank() {
            for j in i + 1..self.rank() {
                off.push(self.pairing[i][j].to_string());
            }
        }
        format!("gram[{};{};{}]", orders.join(","), q.join(","), off.join(","))
    }
}

/// Inclusion of a p-part into the ambient form.
#[derive(Debug, Clone)]
pub struct PartEmbedding {
    rank: usize,
    gens: Vec<usize>,
    scales: Vec<u64>,
}

impl PartEmbedding {
    pub fn apply(&self, x: &Element) -> Element {
        let mut c = vec![0; self.rank];
        for ((&g, &s), &xi) in self.gens.iter().zip(&self.scales).zip(&x.0) {
            c[g] = xi * s;
        }
        Element(c)
    }
}
