//! Permutations of a finite point set `{0..n-1}` in one-line notation.
//!
//! Composition follows right actions: `a.then(&b)` (also `&a * &b`) applies
//! `a` first, so `x^(ab) = (x^a)^b`.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigUint;
use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    /// Checked constructor: `images` must be a bijection of `0..len`.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for (i, &x) in images.iter().enumerate() {
            let x = x as usize;
            if x >= n {
                return Err(Error::OutOfRange(format!(
                    "image {x} of point {i} (degree {n})"
                )));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::Precondition(format!("point {x} has two preimages")));
            }
        }
        Ok(Perm(images))
    }

    /// The caller guarantees `images` is a bijection.
    pub fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Perm::from_images(images.clone()).is_ok());
        Perm(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn into_images(self) -> Vec<u32> {
        self.0
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    pub fn then(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    /// `g⁻¹ self g`, the right-action conjugate `self^g`.
    pub fn conj(&self, g: &Perm) -> Perm {
        g.inverse().then(self).then(g)
    }

    pub fn pow(&self, mut e: u64) -> Perm {
        let mut acc = Perm::identity(self.degree());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn is_involution(&self) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, &x)| self.0[x as usize] == i as u32)
    }

    pub fn has_fixed_point(&self) -> bool {
        self.0.iter().enumerate().any(|(i, &x)| i as u32 == x)
    }

    /// Length of the cycle through `x`.
    pub fn orbit_len(&self, x: u32) -> usize {
        let mut y = self.apply(x);
        let mut len = 1;
        while y != x {
            y = self.apply(y);
            len += 1;
        }
        len
    }

    /// Cycle lengths, one entry per cycle, in order of smallest point.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for s in 0..self.degree() {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            out.push(len);
        }
        out
    }

    pub fn max_cycle_len(&self) -> usize {
        self.cycle_lengths().into_iter().max().unwrap_or(0)
    }

    /// Exact order: lcm of the cycle lengths.
    pub fn order(&self) -> BigUint {
        let mut lens = self.cycle_lengths();
        lens.sort_unstable();
        lens.dedup();
        lens.into_iter()
            .fold(BigUint::from(1u32), |acc, l| acc.lcm(&BigUint::from(l)))
    }

    pub fn product<'a>(degree: usize, factors: impl IntoIterator<Item = &'a Perm>) -> Perm {
        factors
            .into_iter()
            .fold(Perm::identity(degree), |acc, f| acc.then(f))
    }
}

impl Mul<&Perm> for &Perm {
    type Output = Perm;
    fn mul(self, rhs: &Perm) -> Perm {
        self.then(rhs)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.0)
    }
}
