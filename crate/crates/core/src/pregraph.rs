//! Pregraphs: vertices and darts with `beg`/`inv`, optionally dart-coloured.
//!
//! A pregraph allows semi-edges (`inv(x) = x`) and loops, which is what
//! quotients of flag graphs by automorphism groups look like. Symmetry type
//! graphs and the two-vertex family `2_I^n` are both pregraphs.

use std::collections::VecDeque;
use std::fmt::{self, Write as _};

use crate::error::{parse_err, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pregraph {
    pub vertex_count: usize,
    /// Valence; darts of a coloured pregraph carry colours in `0..rank`.
    pub rank: usize,
    pub beg: Vec<usize>,
    pub inv: Vec<usize>,
    pub colour: Vec<Option<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    SemiEdge,
    Loop,
    Link,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PregraphViolation {
    BegOutOfRange {
        dart: usize,
    },
    InvOutOfRange {
        dart: usize,
    },
    InvNotInvolutory {
        dart: usize,
    },
    ColourOutOfRange {
        dart: usize,
        colour: usize,
    },
    ColourMismatch {
        dart: usize,
    },
    PartiallyColoured {
        dart: usize,
    },
    ColourMultiplicity {
        vertex: usize,
        colour: usize,
        count: usize,
    },
}

impl fmt::Display for PregraphViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BegOutOfRange { dart } => write!(f, "beg out of range at dart {dart}"),
            Self::InvOutOfRange { dart } => write!(f, "inv out of range at dart {dart}"),
            Self::InvNotInvolutory { dart } => write!(f, "inv not involutory at dart {dart}"),
            Self::ColourOutOfRange { dart, colour } => {
                write!(f, "colour {colour} out of range at dart {dart}")
            }
            Self::ColourMismatch { dart } => {
                write!(f, "dart {dart} and its inverse have different colours")
            }
            Self::PartiallyColoured { dart } => {
                write!(f, "dart {dart} is uncoloured in a coloured pregraph")
            }
            Self::ColourMultiplicity {
                vertex,
                colour,
                count,
            } => write!(
                f,
                "colour multiplicity: vertex {vertex} has {count} darts of colour {colour}"
            ),
        }
    }
}

/// Dart and vertex bijections between two pregraphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PregraphIso {
    pub vertex: Vec<usize>,
    pub dart: Vec<usize>,
}

/// Outcome of [`is_admissible_stg`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Admissibility {
    Admissible,
    Loop {
        dart: usize,
    },
    /// The `{i,j}`-component on `vertices` matches no quotient of a 4-cycle.
    Component {
        i: usize,
        j: usize,
        vertices: Vec<usize>,
    },
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Admissibility::Admissible)
    }
}

/// Incremental construction by edges; darts are numbered in insertion order.
#[derive(Clone, Debug, Default)]
pub struct PregraphBuilder {
    vertex_count: usize,
    rank: usize,
    beg: Vec<usize>,
    inv: Vec<usize>,
    colour: Vec<Option<usize>>,
}

impl PregraphBuilder {
    pub fn new(vertex_count: usize, rank: usize) -> Self {
        PregraphBuilder {
            vertex_count,
            rank,
            ..Default::default()
        }
    }

    pub fn semi(&mut self, v: usize, colour: usize) -> &mut Self {
        let d = self.beg.len();
        self.beg.push(v);
        self.inv.push(d);
        self.colour.push(Some(colour));
        self
    }

    /// Two darts `u -> v` and `v -> u`; with `u == v` this is a loop.
    pub fn link(&mut self, u: usize, v: usize, colour: usize) -> &mut Self {
        let d = self.beg.len();
        self.beg.extend([u, v]);
        self.inv.extend([d + 1, d]);
        self.colour.extend([Some(colour), Some(colour)]);
        self
    }

    pub fn build(&self) -> Pregraph {
        Pregraph {
            vertex_count: self.vertex_count,
            rank: self.rank,
            beg: self.beg.clone(),
            inv: self.inv.clone(),
            colour: self.colour.clone(),
        }
    }
}

impl Pregraph {
    pub fn dart_count(&self) -> usize {
        self.beg.len()
    }

    pub fn is_coloured(&self) -> bool {
        !self.colour.is_empty() && self.colour.iter().all(Option::is_some)
    }

    /// `beg(inv(x))`.
    pub fn end(&self, dart: usize) -> usize {
        self.beg[self.inv[dart]]
    }

    pub fn validate(&self) -> Vec<PregraphViolation> {
        use PregraphViolation::*;
        let mut out = Vec::new();
        let d = self.dart_count();
        for x in 0..d {
            if self.beg[x] >= self.vertex_count {
                out.push(BegOutOfRange { dart: x });
            }
            if self.inv[x] >= d {
                out.push(InvOutOfRange { dart: x });
            } else if self.inv[self.inv[x]] != x {
                out.push(InvNotInvolutory { dart: x });
            }
        }
        if self.colour.iter().any(Option::is_some) {
            let mut count = vec![0usize; self.vertex_count * self.rank];
            for x in 0..d {
                match self.colour.get(x).copied().flatten() {
                    None => out.push(PartiallyColoured { dart: x }),
                    Some(c) if c >= self.rank => out.push(ColourOutOfRange { dart: x, colour: c }),
                    Some(c) => {
                        if self.inv[x] < d && self.colour[self.inv[x]] != Some(c) {
                            out.push(ColourMismatch { dart: x });
                        }
                        if self.beg[x] < self.vertex_count {
                            count[self.beg[x] * self.rank + c] += 1;
                        }
                    }
                }
            }
            for v in 0..self.vertex_count {
                for c in 0..self.rank {
                    let n = count[v * self.rank + c];
                    if n != 1 {
                        out.push(ColourMultiplicity {
                            vertex: v,
                            colour: c,
                            count: n,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn edge_kind(&self, dart: usize) -> Result<EdgeKind> {
        if dart >= self.dart_count() {
            return Err(Error::OutOfRange(format!("dart {dart}")));
        }
        let y = self.inv[dart];
        Ok(if y == dart {
            EdgeKind::SemiEdge
        } else if self.beg[y] == self.beg[dart] {
            EdgeKind::Loop
        } else {
            EdgeKind::Link
        })
    }

    /// `table[v][c]` is the dart of colour `c` at `v`. Requires a valid coloured pregraph.
    pub fn colour_table(&self) -> Result<Vec<Vec<usize>>> {
        if !self.is_coloured() {
            return Err(Error::Pregraph("uncoloured input".into()));
        }
        if let Some(v) = self.validate().first() {
            return Err(Error::Pregraph(v.to_string()));
        }
        let mut table = vec![vec![usize::MAX; self.rank]; self.vertex_count];
        for x in 0..self.dart_count() {
            table[self.beg[x]][self.colour[x].unwrap()] = x;
        }
        Ok(table)
    }

    /// Vertex sets of the connected components of the subgraph on `colours`,
    /// each sorted, ordered by smallest vertex.
    pub fn components(&self, colours: &[usize]) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for x in 0..self.dart_count() {
            if self.colour[x].is_some_and(|c| colours.contains(&c)) {
                adj[self.beg[x]].push(self.end(x));
            }
        }
        let mut seen = vec![false; self.vertex_count];
        let mut out = Vec::new();
        for s in 0..self.vertex_count {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        q.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let all: Vec<usize> = (0..self.rank).collect();
        if self.is_coloured() {
            self.components(&all).len() <= 1
        } else {
            let mut p = self.clone();
            p.colour = vec![Some(0); self.dart_count()];
            p.components(&[0]).len() <= 1
        }
    }

    /// The sub-pregraph on `vertices` keeping darts coloured in `colours`,
    /// with colour `colours[k]` renamed to `k`.
    pub fn induced(&self, vertices: &[usize], colours: &[usize]) -> Pregraph {
        let mut vidx = vec![usize::MAX; self.vertex_count];
        for (k, &v) in vertices.iter().enumerate() {
            vidx[v] = k;
        }
        let keep: Vec<usize> = (0..self.dart_count())
            .filter(|&x| {
                vidx[self.beg[x]] != usize::MAX
                    && self.colour[x].is_some_and(|c| colours.contains(&c))
            })
            .collect();
        let mut didx = vec![usize::MAX; self.dart_count()];
        for (k, &x) in keep.iter().enumerate() {
            didx[x] = k;
        }
        Pregraph {
            vertex_count: vertices.len(),
            rank: colours.len(),
            beg: keep.iter().map(|&x| vidx[self.beg[x]]).collect(),
            inv: keep.iter().map(|&x| didx[self.inv[x]]).collect(),
            colour: keep
                .iter()
                .map(|&x| colours.iter().position(|&c| Some(c) == self.colour[x]))
                .collect(),
        }
    }

    pub fn to_pgr_string(&self) -> String {
        let mut s = String::new();
        writeln!(
            s,
            "pregraph vertices={} darts={} rank={}",
            self.vertex_count,
            self.dart_count(),
            self.rank
        )
        .unwrap();
        for x in 0..self.dart_count() {
            let c = self
                .colour
                .get(x)
                .copied()
                .flatten()
                .map_or(-1, |c| c as i64);
            writeln!(
                s,
                "dart {x} beg={} inv={} colour={c}",
                self.beg[x], self.inv[x]
            )
            .unwrap();
        }
        s
    }

    /// Parses a `.pgr` block from `(line number, text)` pairs, leaving any
    /// following lines unread.
    pub fn parse_pgr_lines<'a>(
        lines: &mut impl Iterator<Item = (usize, &'a str)>,
    ) -> Result<Pregraph> {
        let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let mut it = header.split_whitespace();
        if it.next() != Some("pregraph") {
            return Err(parse_err(ln, "expected `pregraph` header"));
        }
        let vertex_count = keyed(it.next(), "vertices", ln)?;
        let darts = keyed(it.next(), "darts", ln)?;
        let rank = keyed(it.next(), "rank", ln)?;
        let mut p = Pregraph {
            vertex_count,
            rank,
            beg: vec![0; darts],
            inv: vec![0; darts],
            colour: vec![None; darts],
        };
        for expect in 0..darts {
            let (ln, line) = lines.next().ok_or_else(|| {
                parse_err(ln + expect + 1, format!("expected {darts} dart lines"))
            })?;
            let mut it = line.split_whitespace();
            if it.next() != Some("dart") {
                return Err(parse_err(ln, "expected `dart` line"));
            }
            let id: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| parse_err(ln, "bad dart id"))?;
            if id != expect {
                return Err(parse_err(
                    ln,
                    format!("dart ids must be consecutive, got {id}"),
                ));
            }
            p.beg[id] = keyed(it.next(), "beg", ln)?;
            p.inv[id] = keyed(it.next(), "inv", ln)?;
            let c: i64 = keyed(it.next(), "colour", ln)?;
            p.colour[id] = match c {
                -1 => None,
                c if c >= 0 => Some(c as usize),
                _ => return Err(parse_err(ln, "colour must be -1 or non-negative")),
            };
        }
        let bad = p
            .validate()
            .into_iter()
            .find(|v| !matches!(v, PregraphViolation::ColourMultiplicity { .. }));
        if let Some(v) = bad {
            return Err(parse_err(ln, v.to_string()));
        }
        Ok(p)
    }

    pub fn from_pgr_str(s: &str) -> Result<Pregraph> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty());
        let p = Self::parse_pgr_lines(&mut lines)?;
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln, "trailing content"));
        }
        Ok(p)
    }
}

pub(crate) fn keyed<T: std::str::FromStr>(tok: Option<&str>, key: &str, line: usize) -> Result<T> {
    tok.and_then(|t| t.strip_prefix(key))
        .and_then(|t| t.strip_prefix('='))
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err(line, format!("expected {key}=<value>")))
}

/// Sorted, deduplicated colour set; errors if any colour is `>= rank`.
pub fn normalise_set(rank: usize, set: &[usize]) -> Result<Vec<usize>> {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    if let Some(&c) = s.iter().find(|&&c| c >= rank) {
        return Err(Error::InvalidSet(format!(
            "colour {c} not below rank {rank}"
        )));
    }
    Ok(s)
}

/// The two-vertex pregraph `2_I^n`.
///
/// Vertex `u = 0`, `v = 1`; dart `u_i = i` and `v_i = n + i` both have colour
/// `i`. For `i` in `I` they are semi-edges, otherwise they form a link.
pub fn make_2in(n: usize, set: &[usize]) -> Result<Pregraph> {
    if n == 0 {
        return Err(Error::InvalidSet("rank must be at least 1".into()));
    }
    let set = normalise_set(n, set)?;
    if set.len() == n {
        return Err(Error::InvalidSet("I must be a proper subset".into()));
    }
    let mut inv = vec![0; 2 * n];
    for i in 0..n {
        if set.contains(&i) {
            inv[i] = i;
            inv[n + i] = n + i;
        } else {
            inv[i] = n + i;
            inv[n + i] = i;
        }
    }
    Ok(Pregraph {
        vertex_count: 2,
        rank: n,
        beg: (0..2 * n).map(|x| x / n).collect(),
        inv,
        colour: (0..2 * n).map(|x| Some(x % n)).collect(),
    })
}

/// The colour set `I` of a pregraph shaped like `2_I^n`, if it is one.
pub fn two_in_set(p: &Pregraph) -> Option<Vec<usize>> {
    if p.vertex_count != 2 || p.dart_count() != 2 * p.rank || !p.is_connected() {
        return None;
    }
    let table = p.colour_table().ok()?;
    let mut set = Vec::new();
    for c in 0..p.rank {
        match p.edge_kind(table[0][c]).ok()? {
            EdgeKind::SemiEdge => set.push(c),
            EdgeKind::Link => {}
            EdgeKind::Loop => return None,
        }
    }
    Some(set)
}

/// The colour-preserving automorphism of `2_I^n` exchanging `u` and `v`.
pub fn two_vertex_swap(p: &Pregraph) -> Result<PregraphIso> {
    if two_in_set(p).is_none() {
        return Err(Error::Pregraph("not of two-vertex 2_I^n shape".into()));
    }
    let table = p.colour_table()?;
    let mut dart = vec![0; p.dart_count()];
    for c in 0..p.rank {
        dart[table[0][c]] = table[1][c];
        dart[table[1][c]] = table[0][c];
    }
    Ok(PregraphIso {
        vertex: vec![1, 0],
        dart,
    })
}

/// Quotient by caller-supplied vertex and dart classes (dense ids).
pub fn quotient_by_partition(
    p: &Pregraph,
    vertex_class: &[usize],
    dart_class: &[usize],
) -> Result<Pregraph> {
    if vertex_class.len() != p.vertex_count || dart_class.len() != p.dart_count() {
        return Err(Error::Partition(
            "class arrays have the wrong length".into(),
        ));
    }
    let nv = dense_count(vertex_class, "vertex")?;
    let nd = dense_count(dart_class, "dart")?;
    let mut beg = vec![usize::MAX; nd];
    let mut inv = vec![usize::MAX; nd];
    let mut colour: Vec<Option<Option<usize>>> = vec![None; nd];
    for x in 0..p.dart_count() {
        let c = dart_class[x];
        let b = vertex_class[p.beg[x]];
        let i = dart_class[p.inv[x]];
        let col = p.colour.get(x).copied().flatten();
        if beg[c] == usize::MAX {
            beg[c] = b;
            inv[c] = i;
            colour[c] = Some(col);
            continue;
        }
        if beg[c] != b {
            return Err(Error::Partition(format!(
                "dart class {c} is not beg-compatible"
            )));
        }
        if inv[c] != i {
            return Err(Error::Partition(format!(
                "dart class {c} is not inv-compatible"
            )));
        }
        if colour[c] != Some(col) {
            return Err(Error::Partition(format!("dart class {c} mixes colours")));
        }
    }
    Ok(Pregraph {
        vertex_count: nv,
        rank: p.rank,
        beg,
        inv,
        colour: colour.into_iter().map(Option::flatten).collect(),
    })
}

fn dense_count(class: &[usize], what: &str) -> Result<usize> {
    let n = class.iter().max().map_or(0, |&m| m + 1);
    let mut hit = vec![false; n];
    for &c in class {
        hit[c] = true;
    }
    if hit.iter().any(|h| !h) {
        return Err(Error::Partition(format!("{what} class ids are not dense")));
    }
    Ok(n)
}

/// Colour-preserving isomorphism between two connected, valid coloured pregraphs.
pub fn find_isomorphism(a: &Pregraph, b: &Pregraph) -> Option<PregraphIso> {
    if a.rank != b.rank || a.vertex_count != b.vertex_count || a.dart_count() != b.dart_count() {
        return None;
    }
    if a.vertex_count == 0 {
        return Some(PregraphIso {
            vertex: vec![],
            dart: vec![],
        });
    }
    let ta = a.colour_table().ok()?;
    let tb = b.colour_table().ok()?;
    (0..b.vertex_count).find_map(|seed| extend_iso(a, b, &ta, &tb, seed))
}

fn extend_iso(
    a: &Pregraph,
    b: &Pregraph,
    ta: &[Vec<usize>],
    tb: &[Vec<usize>],
    seed: usize,
) -> Option<PregraphIso> {
    let mut vmap = vec![usize::MAX; a.vertex_count];
    let mut dmap = vec![usize::MAX; a.dart_count()];
    vmap[0] = seed;
    let mut q = VecDeque::from([0usize]);
    while let Some(v) = q.pop_front() {
        let w = vmap[v];
        for c in 0..a.rank {
            let (da, db) = (ta[v][c], tb[w][c]);
            for (x, y) in [(da, db), (a.inv[da], b.inv[db])] {
                if dmap[x] == usize::MAX {
                    dmap[x] = y;
                } else if dmap[x] != y {
                    return None;
                }
            }
            let (ea, eb) = (a.end(da), b.end(db));
            if vmap[ea] == usize::MAX {
                vmap[ea] = eb;
                q.push_back(ea);
            } else if vmap[ea] != eb {
                return None;
            }
        }
    }
    if vmap.contains(&usize::MAX) || dmap.contains(&usize::MAX) {
        return None;
    }
    let bijective = |m: &[usize], n: usize| {
        let mut hit = vec![false; n];
        m.iter().all(|&y| !std::mem::replace(&mut hit[y], true))
    };
    if !bijective(&vmap, b.vertex_count) || !bijective(&dmap, b.dart_count()) {
        return None;
    }
    let ok = (0..a.dart_count()).all(|x| {
        vmap[a.beg[x]] == b.beg[dmap[x]]
            && dmap[a.inv[x]] == b.inv[dmap[x]]
            && a.colour[x] == b.colour[dmap[x]]
    });
    ok.then_some(PregraphIso {
        vertex: vmap,
        dart: dmap,
    })
}

/// The closed list of connected `{0,1}`-coloured pregraphs that arise as
/// quotients of the alternating 4-cycle by colour-preserving automorphisms.
///
/// Frozen output of the subgroup-quotient oracle in `tests/pregraph.rs`.
pub fn admissible_components() -> Vec<Pregraph> {
    vec![
        PregraphBuilder::new(4, 2)
            .link(0, 1, 0)
            .link(1, 2, 1)
            .link(2, 3, 0)
            .link(3, 0, 1)
            .build(),
        PregraphBuilder::new(2, 2)
            .link(0, 1, 0)
            .link(0, 1, 1)
            .build(),
        PregraphBuilder::new(2, 2)
            .link(0, 1, 0)
            .semi(0, 1)
            .semi(1, 1)
            .build(),
        PregraphBuilder::new(2, 2)
            .link(0, 1, 1)
            .semi(0, 0)
            .semi(1, 0)
            .build(),
        PregraphBuilder::new(1, 2).semi(0, 0).semi(0, 1).build(),
    ]
}

/// Whether `p` can be a symmetry type graph of a rank-`n` maniplex.
pub fn is_admissible_stg(p: &Pregraph, n: usize) -> Result<Admissibility> {
    if !p.is_coloured() {
        return Err(Error::Pregraph("uncoloured input".into()));
    }
    if p.rank != n {
        return Err(Error::Pregraph(format!(
            "valence {} differs from rank {n}",
            p.rank
        )));
    }
    if let Some(v) = p.validate().first() {
        return Err(Error::Pregraph(v.to_string()));
    }
    for x in 0..p.dart_count() {
        if p.edge_kind(x)? == EdgeKind::Loop {
            return Ok(Admissibility::Loop { dart: x });
        }
    }
    let fixtures = admissible_components();
    for i in 0..n {
        for j in i + 2..n {
            for comp in p.components(&[i, j]) {
                let sub = p.induced(&comp, &[i, j]);
                if !fixtures.iter().any(|f| find_isomorphism(&sub, f).is_some()) {
                    return Ok(Admissibility::Component {
                        i,
                        j,
                        vertices: comp,
                    });
                }
            }
        }
    }
    Ok(Admissibility::Admissible)
}
