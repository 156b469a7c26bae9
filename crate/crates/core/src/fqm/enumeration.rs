use super::form::{Element, FqForm};

/// Dense tables over all elements of a form.
///
/// Elements are indexed in mixed radix with the first coordinate most
/// significant, so index order is lexicographic order. Values of q and of
/// the pairing are stored as numerators over the level `D` of the form.
#[derive(Debug, Clone)]
pub struct Enumeration {
    rank: usize,
    orders: Vec<u64>,
    strides: Vec<usize>,
    size: usize,
    level: u64,
    gram: Vec<Vec<u64>>,
    digits: Vec<u32>,
    qnum: Vec<u32>,
}

impl Enumeration {
    pub(crate) fn new(form: &FqForm) -> Enumeration {
        let rank = form.rank();
        let orders = form.orders().to_vec();
        let size = form.group_order() as usize;
        let mut strides = vec![1usize; rank];
        for i in (0..rank.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * orders[i + 1] as usize;
        }
        let level = form.level();
        let d = level as i64;
        let gram: Vec<Vec<u64>> =
            (0..rank).map(|i| (0..rank).map(|j| form.gram(i, j).numerator_over(d) as u64).collect()).collect();
        let qdiag: Vec<u64> = form.qdiag().iter().map(|q| q.numerator_over(d) as u64).collect();

        let mut digits = vec![0u32; size * rank];
        let mut qnum = vec![0u32; size];
        for idx in 0..size {
            let mut rest = idx;
            for i in 0..rank {
                digits[idx * rank + i] = (rest / strides[i]) as u32;
                rest %= strides[i];
            }
            let x = &digits[idx * rank..(idx + 1) * rank];
            let mut q: u64 = 0;
            for i in 0..rank {
                let xi = x[i] as u64;
                if xi == 0 {
                    continue;
                }
                q = (q + xi * xi % level * qdiag[i]) % level;
                for j in i + 1..rank {
                    q = (q + xi * x[j] as u64 % level * gram[i][j]) % level;
                }
            }
            qnum[idx] = q as u32;
        }
        Enumeration { rank, orders, strides, size, level, gram, digits, qnum }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Common denominator D of every value of q and of the pairing.
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn digits(&self, idx: usize) -> &[u32] {
        &self.digits[idx * self.rank..(idx + 1) * self.rank]
    }

    pub fn index_of_digits(&self, d: &[u64]) -> usize {
        d.iter().zip(&self.orders).zip(&self.strides).map(|((&c, &n), &s)| (c % n) as usize * s).sum()
    }

    pub fn index_of(&self, x: &Element) -> usize {
        self.index_of_digits(x.coeffs())
    }

    pub fn element(&self, idx: usize) -> Element {
        Element::from_reduced(self.digits(idx).iter().map(|&c| c as u64).collect())
    }

    pub fn generator_index(&self, i: usize) -> usize {
        self.strides[i]
    }

    /// Numerator of q(x) over the level.
    pub fn q(&self, idx: usize) -> u64 {
        self.qnum[idx] as u64
    }

    /// Coefficients f with (x, y) = sum_j f[j] y_j over the level.
    pub fn functional(&self, idx: usize) -> Vec<u64> {
        let x = self.digits(idx);
        (0..self.rank)
            .map(|j| (0..self.rank).map(|i| x[i] as u64 * self.gram[i][j] % self.level).sum::<u64>() % self.level)
            .collect()
    }

    pub fn apply_functional(&self, f: &[u64], idy: usize) -> u64 {
        self.digits(idy).iter().zip(f).map(|(&y, &c)| y as u64 * c).sum::<u64>() % self.level
    }

    /// Numerator of (x, y) over the level.
    pub fn pair(&self, idx: usize, idy: usize) -> u64 {
        self.apply_functional(&self.functional(idx), idy)
    }

    /// Index of -x.
    pub fn neg(&self, idx: usize) -> usize {
        self.digits(idx)
            .iter()
            .zip(&self.orders)
            .zip(&self.strides)
            .map(|((&c, &n), &s)| ((n - c as u64) % n) as usize * s)
            .sum()
    }

    /// Order of x in the group.
    pub fn element_order(&self, idx: usize) -> u64 {
        use num_integer::Integer;
        self.digits(idx).iter().zip(&self.orders).fold(1, |acc, (&c, &n)| acc.lcm(&(n / (c as u64).gcd(&n))))
    }

    /// Whether n * x = 0.
    pub fn killed_by(&self, idx: usize, n: u64) -> bool {
        self.digits(idx).iter().zip(&self.orders).all(|(&c, &m)| (c as u64 * n) % m == 0)
    }

    /// Image of x under the homomorphism sending e_j to `images[j]`.
    pub fn apply_map(&self, images: &[u32], idx: usize) -> usize {
        let x = self.digits(idx);
        let mut out = 0usize;
        for i in 0..self.rank {
            let mut c: u64 = 0;
            for j in 0..self.rank {
                if x[j] != 0 {
                    c += x[j] as u64 * self.digits[images[j] as usize * self.rank + i] as u64;
                }
            }
            out += (c % self.orders[i]) as usize * self.strides[i];
        }
        out
    }

    /// Like [`Enumeration::apply_map`] for x given by its nonzero coordinates.
    pub fn apply_sparse(&self, images: &[u32], support: &[(usize, u64)]) -> usize {
        let mut out = 0usize;
        for i in 0..self.rank {
            let c: u64 =
                support.iter().map(|&(j, xj)| xj * self.digits[images[j] as usize * self.rank + i] as u64).sum();
            out += (c % self.orders[i]) as usize * self.strides[i];
        }
        out
    }

    pub fn radical_is_trivial(&self) -> bool {
        (1..self.size).all(|idx| self.functional(idx).iter().any(|&c| c != 0))
    }
}
