//! Maniplexes stored as `n` fixed-point-free involutions on dense flag ids.

use std::collections::VecDeque;
use std::fmt::{self, Write as _};

use crate::error::{parse_err, Error, Result};
use crate::perm::Perm;
use crate::pregraph::keyed;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Maniplex {
    r: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ManiplexViolation {
    RowLength { colour: usize, len: usize },
    OutOfRange { colour: usize, flag: usize },
    FixedPoint { colour: usize, flag: usize },
    NotInvolution { colour: usize, flag: usize },
    SameNeighbour { i: usize, j: usize, flag: usize },
    NotCommuting { i: usize, j: usize, flag: usize },
    NotConnected { components: usize },
}

impl fmt::Display for ManiplexViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::RowLength { colour, len } => write!(f, "r_{colour} has length {len}"),
            Self::OutOfRange { colour, flag } => {
                write!(f, "r_{colour} image out of range at flag {flag}")
            }
            Self::FixedPoint { colour, flag } => {
                write!(f, "fixed point in r_{colour} at flag {flag}")
            }
            Self::NotInvolution { colour, flag } => {
                write!(f, "r_{colour} is not an involution at flag {flag}")
            }
            Self::SameNeighbour { i, j, flag } => write!(f, "r_{i} and r_{j} agree at flag {flag}"),
            Self::NotCommuting { i, j, flag } => {
                write!(f, "r_{i} and r_{j} do not commute at flag {flag}")
            }
            Self::NotConnected { components } => {
                write!(f, "not connected ({components} components)")
            }
        }
    }
}

/// Every invariant violation of the rows `r`, structural ones first.
pub fn validate_rows(r: &[Vec<u32>]) -> Vec<ManiplexViolation> {
    use ManiplexViolation::*;
    let mut out = structural_violations(r);
    if !out.is_empty() {
        return out;
    }
    let n = r.len();
    let m = r.first().map_or(0, Vec::len);
    for flag in 0..m {
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (r[i][flag], r[j][flag]);
                if a == b {
                    out.push(SameNeighbour { i, j, flag });
                }
                if j >= i + 2 && r[j][a as usize] != r[i][b as usize] {
                    out.push(NotCommuting { i, j, flag });
                }
            }
        }
    }
    let comps = components(r, None).count;
    if comps > 1 {
        out.push(NotConnected { components: comps });
    }
    out
}

fn structural_violations(r: &[Vec<u32>]) -> Vec<ManiplexViolation> {
    use ManiplexViolation::*;
    let mut out = Vec::new();
    let m = r.first().map_or(0, Vec::len);
    for (c, row) in r.iter().enumerate() {
        if row.len() != m {
            out.push(RowLength {
                colour: c,
                len: row.len(),
            });
            continue;
        }
        for (flag, &x) in row.iter().enumerate() {
            if x as usize >= m {
                out.push(OutOfRange { colour: c, flag });
            } else if x as usize == flag {
                out.push(FixedPoint { colour: c, flag });
            } else if row[x as usize] as usize != flag {
                out.push(NotInvolution { colour: c, flag });
            }
        }
    }
    out
}

/// A partition of flags; classes are numbered by their smallest flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub class_of: Vec<u32>,
    pub count: usize,
}

impl Partition {
    pub fn members(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.count];
        for (f, &c) in self.class_of.iter().enumerate() {
            out[c as usize].push(f as u32);
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.count];
        for &c in &self.class_of {
            out[c as usize] += 1;
        }
        out
    }

    /// Smallest flag of each class.
    pub fn first_flags(&self) -> Vec<u32> {
        let mut out = vec![u32::MAX; self.count];
        for (f, &c) in self.class_of.iter().enumerate() {
            let slot = &mut out[c as usize];
            *slot = (*slot).min(f as u32);
        }
        out
    }
}

/// Connected components under the colours other than `skip`.
fn components(r: &[Vec<u32>], skip: Option<usize>) -> Partition {
    let m = r.first().map_or(0, Vec::len);
    let mut class_of = vec![u32::MAX; m];
    let mut count = 0;
    let mut stack = Vec::new();
    for s in 0..m {
        if class_of[s] != u32::MAX {
            continue;
        }
        class_of[s] = count as u32;
        stack.push(s as u32);
        while let Some(x) = stack.pop() {
            for (c, row) in r.iter().enumerate() {
                if Some(c) == skip {
                    continue;
                }
                let y = row[x as usize];
                if class_of[y as usize] == u32::MAX {
                    class_of[y as usize] = count as u32;
                    stack.push(y);
                }
            }
        }
        count += 1;
    }
    Partition { class_of, count }
}

/// An `i`-face: component `index` of `i_faces(i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaceId {
    pub rank: usize,
    pub index: usize,
}

/// A face viewed as a maniplex of lower rank, with the flag correspondence.
#[derive(Clone, Debug)]
pub struct Face {
    pub maniplex: Maniplex,
    /// Smallest ambient flag of each local flag.
    pub flags: Vec<u32>,
    /// Local flag of each ambient flag, `u32::MAX` outside the face.
    pub local: Vec<u32>,
}

impl Maniplex {
    /// Builds from rows `r[i][flag]`, rejecting structural defects (lengths,
    /// range, fixed points, non-involutions). Use [`Maniplex::validate`] for
    /// the remaining invariants.
    pub fn new(r: Vec<Vec<u32>>) -> Result<Self> {
        if r.is_empty() {
            return Err(Error::Maniplex("rank must be at least 1".into()));
        }
        if let Some(v) = structural_violations(&r).first() {
            return Err(Error::Maniplex(v.to_string()));
        }
        Ok(Maniplex { r })
    }

    /// Like [`Maniplex::new`], checked valid in full.
    pub fn new_valid(r: Vec<Vec<u32>>) -> Result<Self> {
        let m = Self::new(r)?;
        match m.validate().first() {
            Some(v) => Err(Error::Maniplex(v.to_string())),
            None => Ok(m),
        }
    }

    pub(crate) fn from_rows_unchecked(r: Vec<Vec<u32>>) -> Self {
        debug_assert!(!r.is_empty() && structural_violations(&r).is_empty());
        Maniplex { r }
    }

    pub fn rank(&self) -> usize {
        self.r.len()
    }

    pub fn flag_count(&self) -> usize {
        self.r[0].len()
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.r[i]
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.r
    }

    #[inline]
    pub fn neighbour(&self, flag: u32, i: usize) -> u32 {
        self.r[i][flag as usize]
    }

    pub fn validate(&self) -> Vec<ManiplexViolation> {
        validate_rows(&self.r)
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// `flag^w` for a monodromy word applied left to right.
    pub fn apply_word(&self, flag: u32, word: &[usize]) -> u32 {
        word.iter().fold(flag, |f, &i| self.r[i][f as usize])
    }

    pub fn r_perm(&self, i: usize) -> Perm {
        Perm::from_images_unchecked(self.r[i].clone())
    }

    /// The monodromy element of `word` as a permutation of flags.
    pub fn word_perm(&self, word: &[usize]) -> Perm {
        let imgs = (0..self.flag_count() as u32)
            .map(|f| self.apply_word(f, word))
            .collect();
        Perm::from_images_unchecked(imgs)
    }

    pub fn i_faces(&self, i: usize) -> Result<Partition> {
        if i >= self.rank() {
            return Err(Error::OutOfRange(format!(
                "face rank {i} for rank {}",
                self.rank()
            )));
        }
        Ok(components(&self.r, Some(i)))
    }

    pub fn facets(&self) -> Partition {
        components(&self.r, Some(self.rank() - 1))
    }

    pub fn connected_components(&self) -> Partition {
        components(&self.r, None)
    }

    /// The face `id` as a rank-`id.rank` maniplex: its flags modulo the
    /// colours above `id.rank`.
    pub fn face_maniplex(&self, id: FaceId) -> Result<Face> {
        let i = id.rank;
        if i == 0 {
            return Err(Error::Precondition(
                "rank-0 faces are not maniplexes".into(),
            ));
        }
        let faces = self.i_faces(i)?;
        if id.index >= faces.count {
            return Err(Error::OutOfRange(format!("{i}-face {}", id.index)));
        }
        let m = self.flag_count();
        let mut local = vec![u32::MAX; m];
        let mut flags = Vec::new();
        for s in 0..m {
            if faces.class_of[s] as usize != id.index || local[s] != u32::MAX {
                continue;
            }
            let c = flags.len() as u32;
            flags.push(s as u32);
            local[s] = c;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for row in &self.r[i + 1..] {
                    let y = row[x] as usize;
                    if local[y] == u32::MAX {
                        local[y] = c;
                        stack.push(y);
                    }
                }
            }
        }
        let rows = (0..i)
            .map(|k| {
                flags
                    .iter()
                    .map(|&f| local[self.r[k][f as usize] as usize])
                    .collect()
            })
            .collect();
        let maniplex = Maniplex::new(rows)?;
        Ok(Face {
            maniplex,
            flags,
            local,
        })
    }

    /// `p_i` = order of `r_{i-1} r_i`, for `i` in `1..n`.
    pub fn schlafli_type(&self) -> Vec<u64> {
        (1..self.rank())
            .map(|i| {
                let p = self.r_perm(i - 1).then(&self.r_perm(i));
                p.cycle_lengths()
                    .into_iter()
                    .fold(1u64, |acc, l| lcm(acc, l as u64))
            })
            .collect()
    }

    /// `r'_i = r_{n-1-i}`.
    pub fn dual(&self) -> Maniplex {
        Maniplex {
            r: self.r.iter().rev().cloned().collect(),
        }
    }

    pub fn to_mnx_string(&self) -> String {
        let mut s = String::with_capacity(self.rank() * self.flag_count() * 6 + 40);
        writeln!(
            s,
            "maniplex rank={} flags={}",
            self.rank(),
            self.flag_count()
        )
        .unwrap();
        for row in &self.r {
            let mut first = true;
            for x in row {
                if !first {
                    s.push(' ');
                }
                first = false;
                write!(s, "{x}").unwrap();
            }
            s.push('\n');
        }
        s
    }

    pub fn from_mnx_str(s: &str) -> Result<Maniplex> {
        let mut lines = s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let mut it = header.split_whitespace();
        if it.next() != Some("maniplex") {
            return Err(parse_err(1, "expected `maniplex` header"));
        }
        let n: usize = keyed(it.next(), "rank", 1)?;
        let m: usize = keyed(it.next(), "flags", 1)?;
        if n == 0 {
            return Err(parse_err(1, "rank must be at least 1"));
        }
        let mut r = Vec::with_capacity(n);
        for c in 0..n {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| parse_err(c + 2, format!("expected {m} images for r_{c}")))?;
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| parse_err(ln + 1, e.to_string()))?;
            if row.len() != m {
                return Err(parse_err(
                    ln + 1,
                    format!("expected {m} images for r_{c}, got {}", row.len()),
                ));
            }
            r.push(row);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln + 1, "trailing content"));
        }
        if let Some(v) = structural_violations(&r).first() {
            return Err(parse_err(1, v.to_string()));
        }
        Ok(Maniplex { r })
    }
}

impl fmt::Debug for Maniplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Maniplex(rank={}, flags={})",
            self.rank(),
            self.flag_count()
        )
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Propagates `src -> dst` from `a` to `b` along all colours. Returns the
/// flag map if it is consistent and total.
pub fn extend_map(a: &Maniplex, b: &Maniplex, src: u32, dst: u32) -> Option<Vec<u32>> {
    if a.rank() != b.rank() || a.flag_count() != b.flag_count() {
        return None;
    }
    let mut img = vec![u32::MAX; a.flag_count()];
    img[src as usize] = dst;
    let mut q = VecDeque::with_capacity(a.flag_count());
    q.push_back(src);
    while let Some(x) = q.pop_front() {
        let fx = img[x as usize];
        for c in 0..a.rank() {
            let y = a.r[c][x as usize] as usize;
            let t = b.r[c][fx as usize];
            if img[y] == u32::MAX {
                img[y] = t;
                q.push_back(y as u32);
            } else if img[y] != t {
                return None;
            }
        }
    }
    if img.contains(&u32::MAX) {
        return None;
    }
    let mut hit = vec![false; b.flag_count()];
    img.iter()
        .all(|&y| !std::mem::replace(&mut hit[y as usize], true))
        .then_some(img)
}

/// A colour-preserving isomorphism `a -> b` (connected inputs), as a flag map.
pub fn find_isomorphism(a: &Maniplex, b: &Maniplex) -> Option<Vec<u32>> {
    if a.rank() != b.rank() || a.flag_count() != b.flag_count() {
        return None;
    }
    (0..b.flag_count() as u32).find_map(|d| extend_map(a, b, 0, d))
}

pub fn is_isomorphic(a: &Maniplex, b: &Maniplex) -> bool {
    find_isomorphism(a, b).is_some()
}
