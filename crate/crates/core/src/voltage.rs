//! Voltage assignments on pregraphs and their covers.
//!
//! Group elements are permutations of a point set, multiplied left to right
//! (`a·b` applies `a` first). The cover has vertices `V × G` and darts
//! `D × G` with `inv(x, a) = (inv x, ζ(x)·a)`, so right multiplication by
//! any `g` is a colour-preserving automorphism.

use std::collections::{HashMap, VecDeque};
use std::fmt::{self, Write as _};

use crate::error::{parse_err, Error, Result};
use crate::maniplex::Maniplex;
use crate::perm::Perm;
use crate::pregraph::{make_2in, two_in_set, Pregraph, PregraphIso};

pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

pub type Word = Vec<Letter>;

/// Named generators of a permutation group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoltageGroup {
    pub points: usize,
    pub names: Vec<String>,
    pub gens: Vec<Perm>,
}

impl VoltageGroup {
    pub fn new(points: usize, names: Vec<String>, gens: Vec<Perm>) -> Result<Self> {
        if names.len() != gens.len() {
            return Err(Error::Precondition("one name per generator".into()));
        }
        if let Some(g) = gens.iter().find(|g| g.degree() != points) {
            return Err(Error::Precondition(format!(
                "generator of degree {} on {points} points",
                g.degree()
            )));
        }
        Ok(VoltageGroup {
            points,
            names,
            gens,
        })
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.points)
    }

    pub fn eval(&self, word: &[Letter]) -> Perm {
        word.iter().fold(self.identity(), |acc, l| {
            let g = &self.gens[l.gen];
            if l.inverse {
                acc.then(&g.inverse())
            } else {
                acc.then(g)
            }
        })
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Whitespace-separated names, `name^-1` for inverses; empty is identity.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        s.split_whitespace()
            .map(|tok| {
                let (name, inverse) = match tok.strip_suffix("^-1") {
                    Some(n) => (n, true),
                    None => (tok, false),
                };
                let gen = self
                    .gen_index(name)
                    .ok_or_else(|| Error::Precondition(format!("unknown generator `{name}`")))?;
                Ok(Letter { gen, inverse })
            })
            .collect()
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        w.iter()
            .map(|l| {
                let n = &self.names[l.gen];
                if l.inverse {
                    format!("{n}^-1")
                } else {
                    n.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn closure(&self, cap: usize) -> Result<GroupElements> {
        group_closure(&self.gens, self.points, cap)
    }
}

pub fn inverse_word(w: &[Letter]) -> Word {
    w.iter()
        .rev()
        .map(|l| Letter {
            gen: l.gen,
            inverse: !l.inverse,
        })
        .collect()
}

/// All elements of a finite permutation group, sorted by image array.
#[derive(Clone, Debug)]
pub struct GroupElements {
    pub elements: Vec<Perm>,
    index: HashMap<Perm, u32>,
}

impl GroupElements {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, g: &Perm) -> Option<usize> {
        self.index.get(g).map(|&i| i as usize)
    }
}

/// Breadth-first closure of `gens`; errors once more than `cap` elements appear.
pub fn group_closure(gens: &[Perm], points: usize, cap: usize) -> Result<GroupElements> {
    let id = Perm::identity(points);
    let mut seen: HashMap<Perm, u32> = HashMap::from([(id.clone(), 0)]);
    let mut elements = vec![id.clone()];
    let mut q = VecDeque::from([id]);
    while let Some(g) = q.pop_front() {
        for s in gens {
            let h = g.then(s);
            if !seen.contains_key(&h) {
                if elements.len() >= cap {
                    return Err(Error::CapExceeded {
                        which: "group",
                        limit: cap,
                    });
                }
                seen.insert(h.clone(), 0);
                elements.push(h.clone());
                q.push_back(h);
            }
        }
    }
    elements.sort();
    let index = elements
        .iter()
        .enumerate()
        .map(|(i, g)| (g.clone(), i as u32))
        .collect();
    Ok(GroupElements { elements, index })
}

/// `ζ : D(Γ) → G`, stored as words and as evaluated permutations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoltageAssignment {
    pub base: Pregraph,
    pub group: VoltageGroup,
    pub words: Vec<Word>,
    pub volt: Vec<Perm>,
}

impl VoltageAssignment {
    /// Checks `ζ(inv x) = ζ(x)⁻¹` for every dart.
    pub fn new(base: Pregraph, group: VoltageGroup, words: Vec<Word>) -> Result<Self> {
        if words.len() != base.dart_count() {
            return Err(Error::Precondition("one voltage per dart".into()));
        }
        let volt: Vec<Perm> = words.iter().map(|w| group.eval(w)).collect();
        for x in 0..base.dart_count() {
            if volt[base.inv[x]] != volt[x].inverse() {
                return Err(Error::Precondition(format!(
                    "voltage of dart {x} is not inverse to its partner's"
                )));
            }
        }
        Ok(VoltageAssignment {
            base,
            group,
            words,
            volt,
        })
    }

    /// `ζ(x_n) ⋯ ζ(x_1)`. Lifting the walk from `(v, a)` ends at
    /// `(w, net·a)`.
    pub fn net_voltage(&self, walk: &[usize]) -> Result<Perm> {
        for (k, pair) in walk.windows(2).enumerate() {
            if self.base.beg[pair[1]] != self.base.end(pair[0]) {
                return Err(Error::Precondition(format!(
                    "darts {k} and {} do not form a walk",
                    k + 1
                )));
            }
        }
        if let Some(&x) = walk.iter().find(|&&x| x >= self.base.dart_count()) {
            return Err(Error::OutOfRange(format!("dart {x}")));
        }
        Ok(walk
            .iter()
            .fold(self.group.identity(), |acc, &x| self.volt[x].then(&acc)))
    }

    /// Whether `ζ` is trivial on every dart of `tree`.
    pub fn is_normalised(&self, tree: &[usize]) -> bool {
        tree.iter().all(|&x| self.volt[x].is_identity())
    }

    /// No fixed points and no multiple edges in the cover: at each vertex,
    /// darts to the same neighbour carry distinct voltages, and semi-edges
    /// carry non-trivial ones.
    pub fn cover_is_simple(&self) -> bool {
        let b = &self.base;
        for v in 0..b.vertex_count {
            let darts: Vec<usize> = (0..b.dart_count()).filter(|&x| b.beg[x] == v).collect();
            for (k, &x) in darts.iter().enumerate() {
                if b.end(x) == v && self.volt[x].is_identity() {
                    return false;
                }
                for &y in &darts[k + 1..] {
                    if b.end(x) == b.end(y) && self.volt[x] == self.volt[y] {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn to_vlt_string(&self) -> String {
        let mut s = self.base.to_pgr_string();
        writeln!(s, "points={}", self.group.points).unwrap();
        for (name, g) in self.group.names.iter().zip(&self.group.gens) {
            write!(s, "gen {name}").unwrap();
            for x in g.images() {
                write!(s, " {x}").unwrap();
            }
            s.push('\n');
        }
        for (x, w) in self.words.iter().enumerate() {
            let body = self.group.format_word(w);
            if body.is_empty() {
                writeln!(s, "volt {x}").unwrap();
            } else {
                writeln!(s, "volt {x} {body}").unwrap();
            }
        }
        s
    }

    pub fn from_vlt_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty())
            .peekable();
        let base = Pregraph::parse_pgr_lines(&mut lines)?;
        let (ln, pl) = lines
            .next()
            .ok_or_else(|| parse_err(0, "missing points= line"))?;
        let points: usize = pl
            .trim()
            .strip_prefix("points=")
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err(ln, "expected points=<N>"))?;
        let mut names = Vec::new();
        let mut gens = Vec::new();
        while let Some(&(ln, line)) = lines.peek() {
            let mut it = line.split_whitespace();
            if it.next() != Some("gen") {
                break;
            }
            lines.next();
            let name = it
                .next()
                .ok_or_else(|| parse_err(ln, "missing generator name"))?;
            let imgs = it
                .map(str::parse::<u32>)
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| parse_err(ln, e.to_string()))?;
            if imgs.len() != points {
                return Err(parse_err(ln, format!("expected {points} images")));
            }
            names.push(name.to_string());
            gens.push(Perm::from_images(imgs).map_err(|e| parse_err(ln, e.to_string()))?);
        }
        let group = VoltageGroup::new(points, names, gens)?;
        let mut words = vec![None; base.dart_count()];
        for (ln, line) in lines {
            let rest = line
                .trim()
                .strip_prefix("volt")
                .ok_or_else(|| parse_err(ln, "expected `volt` line"))?;
            let mut it = rest.trim_start().splitn(2, char::is_whitespace);
            let x: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| parse_err(ln, "bad dart id"))?;
            if x >= words.len() {
                return Err(parse_err(ln, format!("dart {x} out of range")));
            }
            let w = group
                .parse_word(it.next().unwrap_or(""))
                .map_err(|e| parse_err(ln, e.to_string()))?;
            words[x] = Some(w);
        }
        let words = words
            .into_iter()
            .enumerate()
            .map(|(x, w)| w.ok_or_else(|| parse_err(0, format!("no voltage for dart {x}"))))
            .collect::<Result<Vec<_>>>()?;
        VoltageAssignment::new(base, group, words)
    }
}

/// `Cov(Γ, ζ)` with vertex `(v, a)` at `v·|G| + a` and dart `(x, a)` at `x·|G| + a`.
#[derive(Clone, Debug)]
pub struct Cover {
    pub graph: Pregraph,
    pub group: GroupElements,
}

pub fn cov(zeta: &VoltageAssignment, cap: usize) -> Result<Cover> {
    let group = zeta.group.closure(cap)?;
    let g = group.len();
    let b = &zeta.base;
    let mut inv = vec![0; b.dart_count() * g];
    for x in 0..b.dart_count() {
        for (a, elt) in group.elements.iter().enumerate() {
            let target = group
                .position(&zeta.volt[x].then(elt))
                .expect("closed group");
            inv[x * g + a] = b.inv[x] * g + target;
        }
    }
    let graph = Pregraph {
        vertex_count: b.vertex_count * g,
        rank: b.rank,
        beg: (0..b.dart_count() * g)
            .map(|d| b.beg[d / g] * g + d % g)
            .collect(),
        inv,
        colour: (0..b.dart_count() * g).map(|d| b.colour[d / g]).collect(),
    };
    Ok(Cover { graph, group })
}

/// The cover of a coloured pregraph as a maniplex: flag `(v, a)` at `v·|G| + a`.
pub fn cover_maniplex(zeta: &VoltageAssignment, cap: usize) -> Result<(Maniplex, GroupElements)> {
    let table = zeta.base.colour_table()?;
    let group = zeta.group.closure(cap)?;
    let g = group.len();
    let b = &zeta.base;
    let rows: Vec<Vec<u32>> = (0..b.rank)
        .map(|c| {
            let mut row = vec![0u32; b.vertex_count * g];
            for v in 0..b.vertex_count {
                let x = table[v][c];
                for (a, elt) in group.elements.iter().enumerate() {
                    let t = group
                        .position(&zeta.volt[x].then(elt))
                        .expect("closed group");
                    row[v * g + a] = (b.end(x) * g + t) as u32;
                }
            }
            row
        })
        .collect();
    let m = Maniplex::new(rows)
        .map_err(|e| Error::Construction(format!("cover is not simple: {e}")))?;
    Ok((m, group))
}

/// Generators for a voltage assignment on `2_I^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoInGenerators {
    pub rank: usize,
    pub set: Vec<usize>,
    pub z: Perm,
    /// Present iff `1 ∈ I`.
    pub z_prime: Option<Perm>,
    /// `y[i - 2]` is `y_i` for `i` in `2..rank`.
    pub y: Vec<Perm>,
}

impl TwoInGenerators {
    pub fn yi(&self, i: usize) -> &Perm {
        &self.y[i - 2]
    }

    pub fn names(&self) -> Vec<String> {
        let mut out = vec!["z".to_string()];
        if self.z_prime.is_some() {
            out.push("z'".into());
        }
        out.extend((2..self.rank).map(|i| format!("y{i}")));
        out
    }

    pub fn perms(&self) -> Vec<Perm> {
        let mut out = vec![self.z.clone()];
        out.extend(self.z_prime.iter().cloned());
        out.extend(self.y.iter().cloned());
        out
    }

    pub fn group(&self) -> Result<VoltageGroup> {
        VoltageGroup::new(self.z.degree(), self.names(), self.perms())
    }
}

/// Named outcome of each relation check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationReport {
    pub checks: Vec<(String, bool)>,
}

impl RelationReport {
    fn push(&mut self, name: impl Into<String>, ok: bool) {
        self.checks.push((name.into(), ok));
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(n, _)| n.as_str())
            .collect()
    }
}

impl fmt::Display for RelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pass = self.checks.iter().filter(|(_, ok)| *ok).count();
        write!(f, "{pass}/{} relations hold", self.checks.len())?;
        if !self.all_pass() {
            write!(f, "; failing: {}", self.failures().join(", "))?;
        }
        Ok(())
    }
}

fn validate_2in_set(rank: usize, set: &[usize], has_z_prime: bool) -> Result<()> {
    if rank < 3 {
        return Err(Error::InvalidSet("rank must be at least 3".into()));
    }
    if set.iter().any(|&i| i == 0 || i >= rank) {
        return Err(Error::InvalidSet("I must lie in {1..n-1}".into()));
    }
    if set.contains(&1) != has_z_prime {
        return Err(Error::InvalidSet(
            "z' is required exactly when 1 is in I".into(),
        ));
    }
    Ok(())
}

/// The relation set for the generators: with `z'` absent, `y_i² = 1`,
/// `z^{y_i} = z` or `z⁻¹` for `i ≥ 3` as `i ∈ I` or not, commuting `y`s, and
/// distinct non-trivial generators; with `z'`, the involution and swap
/// relations instead, plus non-trivial `z`, `z'`.
pub fn check_relations(gens: &TwoInGenerators) -> RelationReport {
    let mut rep = RelationReport::default();
    let n = gens.rank;
    let inset = |i: usize| gens.set.contains(&i);
    for i in 2..n {
        rep.push(
            format!("y{i}^2=1"),
            gens.yi(i).then(gens.yi(i)).is_identity(),
        );
    }
    match &gens.z_prime {
        None => {
            let zinv = gens.z.inverse();
            for i in 3..n {
                let conj = gens.z.conj(gens.yi(i));
                if inset(i) {
                    rep.push(format!("z^y{i}=z"), conj == gens.z);
                } else {
                    rep.push(format!("z^y{i}=z^-1"), conj == zinv);
                }
            }
            let all = gens.perms();
            let names = gens.names();
            for (k, g) in all.iter().enumerate() {
                rep.push(format!("{}!=1", names[k]), !g.is_identity());
            }
            for a in 0..all.len() {
                for b in a + 1..all.len() {
                    rep.push(format!("{}!={}", names[a], names[b]), all[a] != all[b]);
                }
            }
        }
        Some(zp) => {
            rep.push("z^2=1", gens.z.then(&gens.z).is_identity());
            rep.push("z'^2=1", zp.then(zp).is_identity());
            rep.push("z!=1", !gens.z.is_identity());
            rep.push("z'!=1", !zp.is_identity());
            for i in 3..n {
                let (cz, czp) = (gens.z.conj(gens.yi(i)), zp.conj(gens.yi(i)));
                if inset(i) {
                    rep.push(format!("z^y{i}=z"), cz == gens.z);
                    rep.push(format!("z'^y{i}=z'"), &czp == zp);
                } else {
                    rep.push(format!("z^y{i}=z'"), &cz == zp);
                    rep.push(format!("z'^y{i}=z"), czp == gens.z);
                }
            }
        }
    }
    for i in 2..n {
        for j in i + 2..n {
            let (a, b) = (gens.yi(i), gens.yi(j));
            rep.push(format!("[y{i},y{j}]=1"), a.then(b) == b.then(a));
        }
    }
    rep
}

/// The assignment `ζ(u_0) = 1`, `ζ(u_1) = z`, `ζ(v_1) = z⁻¹` or `z'`,
/// `ζ(u_i) = ζ(v_i) = y_i`, after checking every relation.
pub fn assemble_voltage_2in(gens: &TwoInGenerators) -> Result<(VoltageAssignment, RelationReport)> {
    validate_2in_set(gens.rank, &gens.set, gens.z_prime.is_some())?;
    let report = check_relations(gens);
    if !report.all_pass() {
        return Err(Error::Relation(report.failures().join(", ")));
    }
    let zeta = voltage_2in_unchecked(gens)?;
    Ok((zeta, report))
}

pub(crate) fn voltage_2in_unchecked(gens: &TwoInGenerators) -> Result<VoltageAssignment> {
    let n = gens.rank;
    let base = make_2in(n, &gens.set)?;
    let group = gens.group()?;
    let letter = |name: &str, inverse: bool| Letter {
        gen: group.gen_index(name).unwrap(),
        inverse,
    };
    let mut words = vec![Vec::new(); 2 * n];
    words[1] = vec![letter("z", false)];
    words[n + 1] = if gens.z_prime.is_some() {
        vec![letter("z'", false)]
    } else {
        vec![letter("z", true)]
    };
    for i in 2..n {
        let y = format!("y{i}");
        words[i] = vec![letter(&y, false)];
        words[n + i] = vec![letter(&y, false)];
    }
    VoltageAssignment::new(base, group, words)
}

fn generators_of(zeta: &VoltageAssignment) -> Option<TwoInGenerators> {
    let set = two_in_set(&zeta.base)?;
    let n = zeta.base.rank;
    if n < 3 || set.contains(&0) || !zeta.volt[0].is_identity() {
        return None;
    }
    Some(TwoInGenerators {
        rank: n,
        z_prime: set.contains(&1).then(|| zeta.volt[n + 1].clone()),
        z: zeta.volt[1].clone(),
        y: (2..n).map(|i| zeta.volt[i].clone()).collect(),
        set,
    })
}

/// Sufficient condition from the relation set; does not materialise the cover.
pub fn cover_is_maniplex(zeta: &VoltageAssignment) -> bool {
    generators_of(zeta).is_some_and(|g| check_relations(&g).all_pass()) && zeta.cover_is_simple()
}

/// Relation verdict alongside a direct validation of the materialised cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverCheck {
    pub relations: bool,
    /// `None` when the group exceeds the cap.
    pub materialised: Option<bool>,
}

pub fn cover_check(zeta: &VoltageAssignment, cap: usize) -> CoverCheck {
    let relations = cover_is_maniplex(zeta);
    let materialised = match cover_maniplex(zeta, cap) {
        Ok((m, _)) => Some(m.is_valid()),
        Err(Error::CapExceeded { .. }) => None,
        Err(_) => Some(false),
    };
    CoverCheck {
        relations,
        materialised,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftVerdict {
    /// `R` has no lift: a witness and its image under the induced map have
    /// different orders, or the induced map is not a bijection.
    NoLift {
        reason: String,
    },
    Unknown,
}

/// One-sided test that `R` does not lift to `Cov(Γ, ζ)`.
///
/// A lift induces an automorphism `τ` of `G` with `τ(ζ(x)) = ζ(R x)` for
/// every dart when `ζ` is trivial on a spanning tree preserved by `R`. Each
/// witness word `w` must then satisfy `order(w) = order(τ(w))`.
pub fn lift_obstruction(
    zeta: &VoltageAssignment,
    r: &PregraphIso,
    witnesses: &[Word],
) -> LiftVerdict {
    let b = &zeta.base;
    let trivial: Vec<usize> = (0..b.dart_count())
        .filter(|&x| zeta.volt[x].is_identity())
        .collect();
    if trivial.iter().any(|&x| !zeta.volt[r.dart[x]].is_identity()) {
        return LiftVerdict::Unknown;
    }
    // τ must be a well-defined bijection on the dart voltages.
    let mut pairs: HashMap<&Perm, &Perm> = HashMap::new();
    let mut back: HashMap<&Perm, &Perm> = HashMap::new();
    for x in 0..b.dart_count() {
        let (a, t) = (&zeta.volt[x], &zeta.volt[r.dart[x]]);
        if *pairs.entry(a).or_insert(t) != t || *back.entry(t).or_insert(a) != a {
            return LiftVerdict::NoLift {
                reason: format!("induced map is not a bijection at dart {x}"),
            };
        }
    }
    let mut tau: Vec<Option<&Word>> = vec![None; zeta.group.gens.len()];
    for x in 0..b.dart_count() {
        if let [l] = zeta.words[x].as_slice() {
            if !l.inverse {
                tau[l.gen].get_or_insert(&zeta.words[r.dart[x]]);
            }
        }
    }
    let Some(tau) = tau.into_iter().collect::<Option<Vec<&Word>>>() else {
        return LiftVerdict::Unknown;
    };
    for (k, w) in witnesses.iter().enumerate() {
        let image: Word = w
            .iter()
            .flat_map(|l| {
                let t = tau[l.gen];
                if l.inverse {
                    inverse_word(t)
                } else {
                    t.clone()
                }
            })
            .collect();
        let (o1, o2) = (zeta.group.eval(w).order(), zeta.group.eval(&image).order());
        if o1 != o2 {
            return LiftVerdict::NoLift {
                reason: format!("witness {k} has order {o1} but its image has order {o2}"),
            };
        }
    }
    LiftVerdict::Unknown
}
