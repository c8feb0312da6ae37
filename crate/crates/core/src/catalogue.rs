//! Small rank-3 maniplexes: torus maps `{4,4}`, `{3,6}`, `{6,3}`, and
//! two-orbit maps found by search.

use std::fmt;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::maniplex::Maniplex;
use crate::perm::Perm;
use crate::poset::polyhedron;
use crate::pregraph::normalise_set;
use crate::symmetry::{classify, Class};
use crate::voltage::{check_relations, cover_maniplex, voltage_2in_unchecked, TwoInGenerators};

/// Torus maps of this index or less are tried before voltage covers.
pub const TORUS_MAX_INDEX: u32 = 12;
/// Largest permutation degree tried for voltage-cover generators.
pub const COVER_MAX_DEGREE: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorusFamily {
    /// `{4,4}`
    Square,
    /// `{3,6}`
    Triangular,
    /// `{6,3}`, the duals of `{3,6}`
    Hexagonal,
}

impl fmt::Display for TorusFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TorusFamily::Square => "{4,4}",
            TorusFamily::Triangular => "{3,6}",
            TorusFamily::Hexagonal => "{6,3}",
        })
    }
}

/// The sublattice of `Z²` with basis `(a, b), (0, c)`, `0 ≤ b < c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl Lattice {
    pub fn index(&self) -> u32 {
        self.a * self.c
    }

    fn reduce(&self, x: i64, y: i64) -> usize {
        let (a, b, c) = (self.a as i64, self.b as i64, self.c as i64);
        let k = x.div_euclid(a);
        let x = x - k * a;
        let y = (y - k * b).rem_euclid(c);
        (x * c + y) as usize
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<({},{}),(0,{})>", self.a, self.b, self.c)
    }
}

/// Every sublattice of the given index, each exactly once.
pub fn lattices(index: u32) -> Vec<Lattice> {
    let mut out = Vec::new();
    for a in 1..=index {
        if index.is_multiple_of(a) {
            let c = index / a;
            out.extend((0..c).map(|b| Lattice { a, b, c }));
        }
    }
    out
}

/// Flags are `(point, direction, side)`; `r_0` walks along the edge, `r_1`
/// turns to the next edge of the face, `r_2` switches face.
pub fn torus_map(family: TorusFamily, lattice: Lattice) -> Result<Maniplex> {
    if lattice.a == 0 || lattice.c == 0 || lattice.b >= lattice.c {
        return Err(Error::Precondition(format!(
            "lattice {lattice} is not in normal form"
        )));
    }
    const SQUARE: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];
    const TRIANGULAR: [(i64, i64); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];
    let dirs: &[(i64, i64)] = match family {
        TorusFamily::Square => &SQUARE,
        _ => &TRIANGULAR,
    };
    let q = dirs.len();
    let n = lattice.index() as usize;
    let flag = |p: usize, d: usize, s: bool| ((p * q + d % q) * 2 + s as usize) as u32;
    let mut rows = vec![vec![0u32; n * q * 2]; 3];
    for p in 0..n {
        let (x, y) = (
            (p / lattice.c as usize) as i64,
            (p % lattice.c as usize) as i64,
        );
        for (d, &(dx, dy)) in dirs.iter().enumerate() {
            for s in [false, true] {
                let f = flag(p, d, s) as usize;
                // `s == false` is the side towards direction `d + 1`.
                let turn = if s { d + q - 1 } else { d + 1 };
                rows[0][f] = flag(lattice.reduce(x + dx, y + dy), d + q / 2, !s);
                rows[1][f] = flag(p, turn, !s);
                rows[2][f] = flag(p, d, !s);
            }
        }
    }
    if family == TorusFamily::Hexagonal {
        rows.reverse();
    }
    Maniplex::new_valid(rows)
}

/// The chiral map `{4,4}_(1,2)` with 40 flags.
pub fn chiral_44_12() -> Maniplex {
    torus_map(TorusFamily::Square, Lattice { a: 1, b: 2, c: 5 }).expect("valid torus map")
}

pub fn cube() -> Maniplex {
    polyhedron(&[
        vec![0, 1, 2, 3],
        vec![4, 7, 6, 5],
        vec![0, 4, 5, 1],
        vec![1, 5, 6, 2],
        vec![2, 6, 7, 3],
        vec![3, 7, 4, 0],
    ])
    .expect("cube is a polyhedron")
}

#[derive(Clone, Debug)]
pub struct CatalogueEntry {
    pub name: String,
    pub maniplex: Maniplex,
}

/// The first torus map of type `2_I^3`, by index, then family, then lattice.
pub fn find_torus(set: &[usize], max_index: u32) -> Option<CatalogueEntry> {
    let want = Class::TwoOrbit {
        set: set.to_vec(),
        chiral: set.is_empty(),
    };
    for index in 1..=max_index {
        for fam in [
            TorusFamily::Square,
            TorusFamily::Triangular,
            TorusFamily::Hexagonal,
        ] {
            for l in lattices(index) {
                let Ok(m) = torus_map(fam, l) else { continue };
                if classify(&m) == want {
                    return Some(CatalogueEntry {
                        name: format!("torus{fam}{l}"),
                        maniplex: m,
                    });
                }
            }
        }
    }
    None
}

fn permutations(d: usize) -> Vec<Perm> {
    let mut cur: Vec<u32> = (0..d as u32).collect();
    let mut out = vec![Perm::from_images_unchecked(cur.clone())];
    while let Some(i) = (1..d).rev().find(|&i| cur[i - 1] < cur[i]) {
        let j = (i..d).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(Perm::from_images_unchecked(cur.clone()));
    }
    out
}

/// A two-orbit cover of `2_I^3` (`0 ∉ I`) over a permutation group of small
/// degree. Generators are tried in lexicographic order of their images.
pub fn find_cover(set: &[usize], exec: Exec) -> Option<CatalogueEntry> {
    if set.contains(&0) {
        return None;
    }
    let want = Class::TwoOrbit {
        set: set.to_vec(),
        chiral: set.is_empty(),
    };
    let has_zp = set.contains(&1);
    for d in 2..=COVER_MAX_DEGREE {
        let perms = permutations(d);
        let invols: Vec<&Perm> = perms
            .iter()
            .filter(|p| p.is_involution() && !p.is_identity())
            .collect();
        let zs: Vec<&Perm> = if has_zp {
            invols.clone()
        } else {
            perms.iter().collect()
        };
        let zps: Vec<Option<&Perm>> = if has_zp {
            invols.iter().map(|&p| Some(p)).collect()
        } else {
            vec![None]
        };
        let total = invols.len() * zs.len() * zps.len();
        let hit = exec.find_first(total, |t| {
            let (y2, rest) = (
                invols[t / (zs.len() * zps.len())],
                t % (zs.len() * zps.len()),
            );
            let (z, zp) = (zs[rest / zps.len()], zps[rest % zps.len()]);
            let gens = TwoInGenerators {
                rank: 3,
                set: set.to_vec(),
                z: z.clone(),
                z_prime: zp.cloned(),
                y: vec![y2.clone()],
            };
            if !check_relations(&gens).all_pass() {
                return None;
            }
            let zeta = voltage_2in_unchecked(&gens).ok()?;
            if !zeta.cover_is_simple() {
                return None;
            }
            let (m, _) = cover_maniplex(&zeta, 10_000).ok()?;
            (m.is_valid() && classify(&m) == want).then(|| {
                let zp = zp
                    .map(|p| format!(" z'={:?}", p.images()))
                    .unwrap_or_default();
                let name = format!(
                    "cover2_{{{}}}^3[z={:?}{zp} y2={:?}]",
                    crate::symmetry::join(set),
                    z.images(),
                    y2.images()
                );
                CatalogueEntry { name, maniplex: m }
            })
        });
        if let Some((_, e)) = hit {
            return Some(e);
        }
    }
    None
}

/// A rank-3 two-orbit maniplex of type `2_I^3`: torus maps first, then
/// voltage covers, dualised when `0 ∈ I`.
pub fn find_two_orbit_rank3(set: &[usize], exec: Exec) -> Result<CatalogueEntry> {
    let set = normalise_set(3, set)?;
    if set.len() == 3 {
        return Err(Error::InvalidSet(
            "I must be a proper subset of {0,1,2}".into(),
        ));
    }
    if let Some(e) = find_torus(&set, TORUS_MAX_INDEX) {
        return Ok(e);
    }
    if let Some(e) = find_cover(&set, exec) {
        return Ok(e);
    }
    let dual_set: Vec<usize> = set.iter().rev().map(|&i| 2 - i).collect();
    if let Some(e) = find_cover(&dual_set, exec) {
        return Ok(CatalogueEntry {
            name: format!("dual({})", e.name),
            maniplex: e.maniplex.dual(),
        });
    }
    Err(Error::Construction(format!(
        "no catalogued map of type 2_{{{}}}^3",
        crate::symmetry::join(&set)
    )))
}
