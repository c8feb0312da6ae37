//! The extension `2̂^M`, the trivial extension, the family `M_n`, and the
//! facet-separating element `η`.
//!
//! Flags of `2̂^M` are pairs `(Φ, x)` with `x ⊆ facets(M)` stored as a bit
//! mask; the flag id is `x * |F(M)| + Φ`. With this layout the facets of
//! `2̂^M` in first-flag order are exactly `F_x` for `x = 0, 1, 2, ...`.

use std::collections::VecDeque;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::maniplex::{Maniplex, Partition};
use crate::perm::Perm;
use crate::symmetry::{automorphism_group_with, is_automorphism};

pub const DEFAULT_FLAG_CAP: usize = 1_000_000;
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Largest facet count searched exhaustively by [`find_s0`].
pub const EXHAUSTIVE_FACETS: usize = 24;

/// An element of `Z_2^S`, bit `i` for facet `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector2S {
    len: usize,
    words: Vec<u64>,
}

impl Vector2S {
    pub fn zero(len: usize) -> Self {
        Vector2S {
            len,
            words: vec![0; len.div_ceil(64).max(1)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zero(len);
        v.flip(i);
        v
    }

    pub fn from_indices(len: usize, idx: &[usize]) -> Self {
        let mut v = Self::zero(len);
        for &i in idx {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &Vector2S) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn ones(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    /// The bits as an integer mask; `None` beyond 64 facets.
    pub fn as_u64(&self) -> Option<u64> {
        (self.len <= 64).then_some(self.words[0])
    }

    /// Fixed-width hex, most significant facet first.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4).max(1);
        (0..digits)
            .rev()
            .map(|d| {
                let nib = (0..4)
                    .filter(|&b| d * 4 + b < self.len && self.get(d * 4 + b))
                    .fold(0u32, |acc, b| acc | 1 << b);
                char::from_digit(nib, 16).unwrap()
            })
            .collect()
    }
}

impl fmt::Debug for Vector2S {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vector2S({:?})", self.ones())
    }
}

fn check_budget(flags: usize, facets: usize, cap: usize) -> Result<usize> {
    if facets >= 63 {
        return Err(Error::CapExceeded {
            which: "flags",
            limit: cap,
        });
    }
    flags
        .checked_mul(1usize << facets)
        .filter(|&t| t <= cap)
        .ok_or(Error::CapExceeded {
            which: "flags",
            limit: cap,
        })
}

/// `2̂^M`; `r'_i` acts on `Φ` for `i < n`, `r'_n` toggles the facet of `Φ` in `x`.
pub fn two_hat(m: &Maniplex, cap: usize) -> Result<Maniplex> {
    let facets = m.facets();
    let (n, fl) = (m.rank(), m.flag_count());
    let total = check_budget(fl, facets.count, cap)?;
    let xs = total / fl;
    let mut rows = vec![vec![0u32; total]; n + 1];
    for x in 0..xs {
        let off = (x * fl) as u32;
        for (i, row) in rows.iter_mut().enumerate().take(n) {
            let src = m.row(i);
            for f in 0..fl {
                row[x * fl + f] = src[f] + off;
            }
        }
        for f in 0..fl {
            let y = x ^ (1 << facets.class_of[f]);
            rows[n][x * fl + f] = (y * fl + f) as u32;
        }
    }
    Ok(Maniplex::from_rows_unchecked(rows))
}

/// Flag id of `(Φ, x)` in `2̂^M`.
pub fn two_hat_flag(base_flags: usize, phi: u32, x: u64) -> u32 {
    (x as usize * base_flags + phi as usize) as u32
}

/// `F(M) × Z_2` with `r'_n` swapping the two copies.
pub fn trivial_extension(m: &Maniplex) -> Maniplex {
    let (n, fl) = (m.rank(), m.flag_count());
    let mut rows: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            let src = m.row(i);
            src.iter()
                .copied()
                .chain(src.iter().map(|&y| y + fl as u32))
                .collect()
        })
        .collect();
    rows.push((0..2 * fl).map(|f| ((f + fl) % (2 * fl)) as u32).collect());
    Maniplex::from_rows_unchecked(rows)
}

/// `M_1` has two flags; `M_n = 2̂^{M_{n-1}}`.
pub fn build_mn(n: usize, cap: usize) -> Result<Maniplex> {
    if n == 0 {
        return Err(Error::Precondition("M_n needs n >= 1".into()));
    }
    let mut m = Maniplex::new(vec![vec![1, 0]])?;
    if cap < 2 {
        return Err(Error::CapExceeded {
            which: "flags",
            limit: cap,
        });
    }
    for _ in 1..n {
        m = two_hat(&m, cap)?;
    }
    Ok(m)
}

/// The permutation of facet indices induced by an automorphism.
pub fn facet_action(facets: &Partition, first: &[u32], alpha: &Perm) -> Vec<usize> {
    first
        .iter()
        .map(|&f| facets.class_of[alpha.apply(f) as usize] as usize)
        .collect()
}

/// `γ̃ : (Φ, x) ↦ (Φ^γ, x^γ)` on the flags of `2̂^M`.
pub fn tilde_auto(m: &Maniplex, gamma: &Perm, cap: usize) -> Result<Perm> {
    if !is_automorphism(m, gamma) {
        return Err(Error::NotAutomorphism);
    }
    let facets = m.facets();
    let fl = m.flag_count();
    let total = check_budget(fl, facets.count, cap)?;
    let fperm = facet_action(&facets, &facets.first_flags(), gamma);
    let images = (0..total)
        .map(|id| {
            let (x, f) = (id / fl, id % fl);
            let xg = (0..facets.count)
                .filter(|&h| x >> h & 1 == 1)
                .fold(0usize, |acc, h| acc | 1 << fperm[h]);
            (xg * fl + gamma.apply(f as u32) as usize) as u32
        })
        .collect();
    Ok(Perm::from_images_unchecked(images))
}

/// `ỹ : (Φ, x) ↦ (Φ, x + y)` on the flags of `2̂^M`.
pub fn tilde_vec(m: &Maniplex, y: &Vector2S, cap: usize) -> Result<Perm> {
    let facets = m.facets();
    if y.len() != facets.count {
        return Err(Error::Precondition(
            "vector length differs from facet count".into(),
        ));
    }
    let fl = m.flag_count();
    let total = check_budget(fl, facets.count, cap)?;
    let mask = y.as_u64().unwrap() as usize;
    let images = (0..total)
        .map(|id| (((id / fl) ^ mask) * fl + id % fl) as u32)
        .collect();
    Ok(Perm::from_images_unchecked(images))
}

/// Options for [`find_s0`].
#[derive(Clone, Copy, Debug)]
pub struct S0Search {
    pub exec: Exec,
    pub seed: u64,
    /// Random subsets tried when there are too many facets to enumerate.
    pub attempts: usize,
}

impl Default for S0Search {
    fn default() -> Self {
        S0Search {
            exec: Exec::default(),
            seed: DEFAULT_SEED,
            attempts: 100_000,
        }
    }
}

/// A nonempty facet set moved by every non-identity automorphism.
///
/// Subsets are tried in Gray-code order when there are at most
/// [`EXHAUSTIVE_FACETS`] facets, otherwise at random from a fixed seed.
pub fn find_s0(m: &Maniplex, opts: S0Search) -> Result<Option<Vec<usize>>> {
    let group = automorphism_group_with(m, opts.exec);
    if group.len() != m.flag_count() {
        return Err(Error::NotRegular);
    }
    let facets = m.facets();
    let first = facets.first_flags();
    let actions: Vec<Vec<usize>> = group
        .iter()
        .filter(|a| !a.is_identity())
        .map(|a| facet_action(&facets, &first, a))
        .collect();
    let s = facets.count;
    if s <= EXHAUSTIVE_FACETS {
        let moved = |mask: u64, act: &[usize]| {
            (0..s)
                .filter(|&h| mask >> h & 1 == 1)
                .fold(0u64, |acc, h| acc | 1 << act[h])
                != mask
        };
        let hit = opts.exec.find_first((1usize << s) - 1, |t| {
            let t = (t + 1) as u64;
            let gray = t ^ (t >> 1);
            actions.iter().all(|a| moved(gray, a)).then_some(gray)
        });
        return Ok(hit.map(|(_, mask)| (0..s).filter(|&h| mask >> h & 1 == 1).collect()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.attempts {
        let set: Vec<usize> = (0..s).filter(|_| rng.gen_bool(0.5)).collect();
        if set.is_empty() {
            continue;
        }
        let v = Vector2S::from_indices(s, &set);
        let rigid = actions.iter().all(|a| {
            let img: Vec<usize> = set.iter().map(|&h| a[h]).collect();
            Vector2S::from_indices(s, &img) != v
        });
        if rigid {
            return Ok(Some(set));
        }
    }
    Ok(None)
}

/// Whether no non-identity automorphism of `m` fixes the facet set.
pub fn is_rigid(m: &Maniplex, set: &[usize]) -> bool {
    let facets = m.facets();
    let first = facets.first_flags();
    let v = Vector2S::from_indices(facets.count, set);
    automorphism_group_with(m, Exec::default())
        .iter()
        .filter(|a| !a.is_identity())
        .all(|a| {
            let act = facet_action(&facets, &first, a);
            let img: Vec<usize> = set.iter().map(|&h| act[h]).collect();
            Vector2S::from_indices(facets.count, &img) != v
        })
}

/// `{F_{χ_H} : H ∈ S_0} ∪ {F_0̄}` as facet ids of `2̂^M`, sorted.
pub fn lift_s0(s0: &[usize]) -> Vec<u64> {
    let mut out: Vec<u64> = s0.iter().map(|&h| 1u64 << h).collect();
    out.push(0);
    out.sort_unstable();
    out.dedup();
    out
}

/// `η = Π_{ω ∈ W} (r'_n)^ω` recorded as its table `Φ ↦ Σ_ω χ_{F(Φ^ω)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaElement {
    pub facet_count: usize,
    pub s0: Vec<usize>,
    pub f0: usize,
    pub phi0: u32,
    /// One monodromy word per facet of `s0`, in the same order.
    pub words: Vec<Vec<usize>>,
    pub table: Vec<Vector2S>,
}

fn eta_table(m: &Maniplex, facets: &Partition, words: &[Vec<usize>], exec: Exec) -> Vec<Vector2S> {
    exec.map(m.flag_count(), |f| {
        let mut v = Vector2S::zero(facets.count);
        for w in words {
            v.flip(facets.class_of[m.apply_word(f as u32, w) as usize] as usize);
        }
        v
    })
}

/// BFS words from `start`, smallest colour first: `(parent, colour)` per flag.
pub(crate) fn bfs_tree(m: &Maniplex, start: u32) -> (Vec<u32>, Vec<(u32, usize)>) {
    let mut order = vec![start];
    let mut parent = vec![(u32::MAX, usize::MAX); m.flag_count()];
    parent[start as usize] = (start, usize::MAX);
    let mut q = VecDeque::from([start]);
    while let Some(f) = q.pop_front() {
        for i in 0..m.rank() {
            let g = m.neighbour(f, i);
            if parent[g as usize].0 == u32::MAX {
                parent[g as usize] = (f, i);
                order.push(g);
                q.push_back(g);
            }
        }
    }
    (order, parent)
}

pub(crate) fn word_to(parent: &[(u32, usize)], start: u32, target: u32) -> Vec<usize> {
    let mut w = Vec::new();
    let mut f = target;
    while f != start {
        let (p, c) = parent[f as usize];
        w.push(c);
        f = p;
    }
    w.reverse();
    w
}

pub fn build_eta(m: &Maniplex, s0: &[usize], f0: usize, phi0: u32) -> Result<EtaElement> {
    build_eta_with(m, s0, f0, phi0, Exec::default())
}

pub fn build_eta_with(
    m: &Maniplex,
    s0: &[usize],
    f0: usize,
    phi0: u32,
    exec: Exec,
) -> Result<EtaElement> {
    let facets = m.facets();
    let mut s0 = s0.to_vec();
    s0.sort_unstable();
    s0.dedup();
    if s0.iter().any(|&h| h >= facets.count) {
        return Err(Error::OutOfRange("facet in S0".into()));
    }
    if !s0.contains(&f0) {
        return Err(Error::Precondition("F0 is not in S0".into()));
    }
    if facets.class_of.get(phi0 as usize).map(|&c| c as usize) != Some(f0) {
        return Err(Error::Precondition("base flag is not in F0".into()));
    }
    let (order, parent) = bfs_tree(m, phi0);
    let words: Vec<Vec<usize>> = s0
        .iter()
        .map(|&h| {
            let target = if h == f0 {
                phi0
            } else {
                *order
                    .iter()
                    .find(|&&f| facets.class_of[f as usize] as usize == h)
                    .unwrap()
            };
            word_to(&parent, phi0, target)
        })
        .collect();
    let table = eta_table(m, &facets, &words, exec);
    Ok(EtaElement {
        facet_count: facets.count,
        s0,
        f0,
        phi0,
        words,
        table,
    })
}

impl EtaElement {
    /// The image of flag `(Φ, x)` of `2̂^M`, in its flag-id layout.
    pub fn apply_two_hat(&self, base_flags: usize, flag: u32) -> u32 {
        let (x, f) = (flag as usize / base_flags, flag as usize % base_flags);
        let y = x as u64 ^ self.table[f].as_u64().expect("at most 64 facets");
        two_hat_flag(base_flags, f as u32, y)
    }

    /// `η` as a permutation of the flags of a materialised `2̂^M`.
    pub fn as_two_hat_perm(&self, base_flags: usize) -> Perm {
        let total = base_flags << self.facet_count;
        Perm::from_images_unchecked(
            (0..total as u32)
                .map(|f| self.apply_two_hat(base_flags, f))
                .collect(),
        )
    }

    /// `η` as a monodromy word of `2̂^M` (rank `n + 1`): `ω n ω⁻¹` per word.
    pub fn word_in_two_hat(&self, n: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for w in &self.words {
            out.extend(w);
            out.push(n);
            out.extend(w.iter().rev());
        }
        out
    }

    pub fn to_hex_lines(&self) -> String {
        let mut s = String::new();
        for v in &self.table {
            s.push_str(&v.to_hex());
            s.push('\n');
        }
        s
    }
}

/// The table matches the words and `Φ ↦ η(Φ)` is injective on all flags,
/// which is exactly the condition that `η` sends distinct flags of a facet
/// of `2̂^M` to distinct facets.
pub fn verify_eta(m: &Maniplex, eta: &EtaElement) -> bool {
    let facets = m.facets();
    if eta.table.len() != m.flag_count() || eta.facet_count != facets.count {
        return false;
    }
    if eta_table(m, &facets, &eta.words, Exec::default()) != eta.table {
        return false;
    }
    let mut seen: Vec<&Vector2S> = eta.table.iter().collect();
    seen.sort_unstable();
    seen.windows(2).all(|w| w[0] != w[1])
}

/// Injectivity of the table within each facet of `M` separately.
pub fn eta_injective_per_facet(m: &Maniplex, eta: &EtaElement) -> bool {
    m.facets().members().iter().all(|flags| {
        let mut vs: Vec<&Vector2S> = flags.iter().map(|&f| &eta.table[f as usize]).collect();
        vs.sort_unstable();
        vs.windows(2).all(|w| w[0] != w[1])
    })
}
