use std::fmt;

use crate::error::{Error, Result};
use crate::exactmath::ntheory::{inv_mod, is_prime, least_nonresidue, prime_power};
use crate::exactmath::ResidueQZ;

use super::form::FqForm;

/// A standard building block of a finite quadratic module.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Block {
    /// A_{p^k, a}: one generator of order p^k.
    Cyclic { p: u64, k: u32, a: i64 },
    /// Hyperbolic plane over F_p, p odd.
    HypOdd(u64),
    /// Anisotropic plane over F_p, p odd.
    AnisoOdd(u64),
    U2,
    V2,
    Raw(FqForm),
}

impl Block {
    /// A_{n, a}, validating that n is a prime power and a a unit.
    pub fn cyclic(n: u64, a: i64) -> Result<Block> {
        let (p, k) = prime_power(n).ok_or_else(|| Error::InvalidParameter(format!("{n} is not a prime power")))?;
        if a.rem_euclid(p as i64) == 0 {
            return Err(Error::InvalidParameter(format!("{a} is not a unit mod {p}")));
        }
        Ok(Block::Cyclic { p, k, a })
    }

    pub fn hyperbolic(p: u64) -> Result<Block> {
        odd_prime(p)?;
        Ok(Block::HypOdd(p))
    }

    pub fn anisotropic(p: u64) -> Result<Block> {
        odd_prime(p)?;
        Ok(Block::AnisoOdd(p))
    }

    /// The prime this block lives at, or None for raw input.
    pub fn prime(&self) -> Option<u64> {
        match self {
            Block::Cyclic { p, .. } => Some(*p),
            Block::HypOdd(p) | Block::AnisoOdd(p) => Some(*p),
            Block::U2 | Block::V2 => Some(2),
            Block::Raw(_) => None,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Block::Cyclic { .. } => 1,
            Block::Raw(f) => f.rank(),
            _ => 2,
        }
    }

    pub fn realize(&self) -> FqForm {
        let z = ResidueQZ::ZERO;
        let diag = |q: Vec<ResidueQZ>| {
            let r = q.len();
            (q, vec![vec![z; r]; r])
        };
        let plane = |n: u64, q1: ResidueQZ, q2: ResidueQZ, b: ResidueQZ| {
            FqForm::new(vec![n, n], vec![q1, q2], vec![vec![z, b], vec![b, z]]).expect("standard block")
        };
        match self {
            Block::Cyclic { p, k, a } => {
                let n = p.pow(*k) as i64;
                let q = if *p == 2 {
                    ResidueQZ::new(*a, 2 * n)
                } else {
                    let half = inv_mod(2, n).expect("2 is a unit");
                    ResidueQZ::new((*a as i128 * half as i128).rem_euclid(n as i128) as i64, n)
                };
                let (q, off) = diag(vec![q]);
                FqForm::new(vec![n as u64], q, off).expect("standard block")
            }
            Block::HypOdd(p) => plane(*p, z, z, ResidueQZ::new(1, *p as i64)),
            Block::AnisoOdd(p) => {
                let pi = *p as i64;
                let half = inv_mod(2, pi).expect("2 is a unit");
                let eps = least_nonresidue(*p) as i64;
                plane(*p, ResidueQZ::new(half, pi), ResidueQZ::new(-half * eps, pi), z)
            }
            Block::U2 => plane(2, z, z, ResidueQZ::new(1, 2)),
            Block::V2 => plane(2, ResidueQZ::new(1, 2), ResidueQZ::new(1, 2), ResidueQZ::new(1, 2)),
            Block::Raw(f) => f.clone(),
        }
    }
}

fn odd_prime(p: u64) -> Result<()> {
    if p % 2 == 1 && is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{p} is not an odd prime")))
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Block::Cyclic { p, k, a } => write!(f, "q({},{a})", p.pow(*k)),
            Block::HypOdd(p) => write!(f, "U({p})"),
            Block::AnisoOdd(p) => write!(f, "N({p})"),
            Block::U2 => write!(f, "U2"),
            Block::V2 => write!(f, "V2"),
            Block::Raw(form) => write!(f, "{}", form.to_gram_string()),
        }
    }
}

/// One summand `mult * block`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub mult: u32,
    pub block: Block,
}

/// A direct sum of standard blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BlockExpr {
    pub terms: Vec<Term>,
}

impl BlockExpr {
    pub fn new(terms: Vec<Term>) -> BlockExpr {
        BlockExpr { terms }
    }

    /// Sum of the given blocks, each with multiplicity one.
    pub fn of(blocks: impl IntoIterator<Item = Block>) -> BlockExpr {
        BlockExpr { terms: blocks.into_iter().map(|block| Term { mult: 1, block }).collect() }
    }

    /// Blocks with multiplicities expanded.
    pub fn blocks(&self) -> Vec<Block> {
        self.terms.iter().flat_map(|t| std::iter::repeat(t.block.clone()).take(t.mult as usize)).collect()
    }

    pub fn realize(&self) -> FqForm {
        self.blocks().iter().fold(FqForm::trivial(), |acc, b| acc.direct_sum(&b.realize()))
    }

    pub fn concat(&self, other: &BlockExpr) -> BlockExpr {
        BlockExpr { terms: self.terms.iter().chain(&other.terms).cloned().collect() }
    }

    pub fn has_raw(&self) -> bool {
        self.terms.iter().any(|t| matches!(t.block, Block::Raw(_)))
    }

    pub fn order(&self) -> u64 {
        self.blocks()
            .iter()
            .map(|b| match b {
                Block::Cyclic { p, k, .. } => p.pow(*k),
                Block::HypOdd(p) | Block::AnisoOdd(p) => p * p,
                Block::U2 | Block::V2 => 4,
                Block::Raw(f) => f.group_order(),
            })
            .product()
    }
}

impl fmt::Display for BlockExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "gram[;;]");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| if t.mult == 1 { t.block.to_string() } else { format!("{}*{}", t.mult, t.block) })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
