//! Square matrices over a single cyclotomic field.
//!
//! Entries share one order `L` and one denominator; products accumulate
//! unreduced polynomial products per entry and reduce once.

use num_integer::Integer;

use super::cyclo::{ctx, CycNum};

#[derive(Clone, Debug)]
pub struct CycMatrix {
    n: usize,
    order: u32,
    phi: usize,
    den: i128,
    data: Vec<i128>,
}

impl CycMatrix {
    pub fn from_entries(n: usize, entries: &[CycNum]) -> CycMatrix {
        assert_eq!(entries.len(), n * n, "need n*n entries");
        let order = entries.iter().fold(1u32, |l, e| l.lcm(&e.order()));
        let embedded: Vec<CycNum> = entries.iter().map(|e| e.embed(order)).collect();
        let den = embedded.iter().fold(1i128, |d, e| d.lcm(&e.den()));
        let phi = ctx(order).phi;
        let mut data = Vec::with_capacity(n * n * phi);
        for e in &embedded {
            let f = den / e.den();
            data.extend(e.coeffs().iter().map(|&c| c * f));
        }
        CycMatrix { n, order, phi, den, data }.normalized()
    }

    pub fn identity(n: usize) -> CycMatrix {
        let mut entries = vec![CycNum::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = CycNum::one();
        }
        CycMatrix::from_entries(n, &entries)
    }

    fn normalized(mut self) -> CycMatrix {
        let g = self.data.iter().fold(self.den, |g, &c| g.gcd(&c));
        if g > 1 {
            self.den /= g;
            self.data.iter_mut().for_each(|c| *c /= g);
        }
        self
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    fn slot(&self, i: usize, j: usize) -> &[i128] {
        let at = (i * self.n + j) * self.phi;
        &self.data[at..at + self.phi]
    }

    pub fn entry(&self, i: usize, j: usize) -> CycNum {
        CycNum::from_power_basis(self.order, self.den, self.slot(i, j).to_vec())
    }

    pub fn embed(&self, order: u32) -> CycMatrix {
        if order == self.order {
            return self.clone();
        }
        let entries: Vec<CycNum> =
            (0..self.n * self.n).map(|k| self.entry(k / self.n, k % self.n).embed(order)).collect();
        CycMatrix::from_entries(self.n, &entries)
    }

    fn common(a: &CycMatrix, b: &CycMatrix) -> (CycMatrix, CycMatrix) {
        let l = a.order.lcm(&b.order);
        (a.embed(l), b.embed(l))
    }

    pub fn mul(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        if self.order != other.order {
            let (a, b) = CycMatrix::common(self, other);
            return a.mul(&b);
        }
        let (n, phi) = (self.n, self.phi);
        let c = ctx(self.order);
        let mut data = Vec::with_capacity(n * n * phi);
        let mut buf = vec![0i128; 2 * phi - 1];
        for i in 0..n {
            for j in 0..n {
                buf.iter_mut().for_each(|x| *x = 0);
                for k in 0..n {
                    let a = self.slot(i, k);
                    let b = other.slot(k, j);
                    for (s, &x) in a.iter().enumerate() {
                        if x == 0 {
                            continue;
                        }
                        for (t, &y) in b.iter().enumerate() {
                            buf[s + t] += x * y;
                        }
                    }
                }
                data.extend(c.reduce(&buf));
            }
        }
        CycMatrix { n, order: self.order, phi, den: self.den * other.den, data }.normalized()
    }

    pub fn pow(&self, mut e: u32) -> CycMatrix {
        let mut base = self.clone();
        let mut acc = CycMatrix::identity(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplies every entry by a scalar.
    pub fn scale(&self, s: &CycNum) -> CycMatrix {
        let entries: Vec<CycNum> = (0..self.n * self.n).map(|k| &self.entry(k / self.n, k % self.n) * s).collect();
        CycMatrix::from_entries(self.n, &entries)
    }

    pub fn conj_transpose(&self) -> CycMatrix {
        let entries: Vec<CycNum> =
            (0..self.n * self.n).map(|k| self.entry(k % self.n, k / self.n).conj()).collect();
        CycMatrix::from_entries(self.n, &entries)
    }

    pub fn trace(&self) -> CycNum {
        (0..self.n).map(|i| self.entry(i, i)).sum()
    }

    pub fn is_identity(&self) -> bool {
        *self == CycMatrix::identity(self.n)
    }
}

impl PartialEq for CycMatrix {
    fn eq(&self, other: &CycMatrix) -> bool {
        if self.n != other.n {
            return false;
        }
        if self.order == other.order {
            return self.den == other.den && self.data == other.data;
        }
        let (a, b) = CycMatrix::common(self, other);
        a.den == b.den && a.data == b.data
    }
}

impl Eq for CycMatrix {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::cyc;

    #[test]
    fn fourier_matrix_squares_to_a_flip() {
        // F[x][y] = e(-xy/3); F^2 = 3 * (x -> -x).
        let f = CycMatrix::from_entries(3, &(0..9).map(|k| cyc(-((k / 3) * (k % 3)) as i64, 3)).collect::<Vec<_>>());
        let f2 = f.mul(&f);
        for i in 0..3 {
            for j in 0..3 {
                let want = if (i + j) % 3 == 0 { CycNum::from_int(3) } else { CycNum::zero() };
                assert_eq!(f2.entry(i, j), want);
            }
        }
        assert_eq!(f.pow(4), CycMatrix::identity(3).scale(&CycNum::from_int(9)));
        assert_eq!(f.mul(&f.conj_transpose()), CycMatrix::identity(3).scale(&CycNum::from_int(3)));
        assert_eq!(f.trace(), CycNum::one() + cyc(-1, 3) + cyc(-4, 3));
    }
}
