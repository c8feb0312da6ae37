//! Colour-preserving automorphisms, flag orbits and symmetry type graphs.

use std::fmt;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::maniplex::{extend_map, Maniplex, Partition};
use crate::perm::Perm;
use crate::pregraph::{quotient_by_partition, Pregraph};

/// The automorphism sending `src` to `dst`, if one exists.
pub fn try_extend(m: &Maniplex, src: u32, dst: u32) -> Option<Perm> {
    extend_map(m, m, src, dst).map(Perm::from_images_unchecked)
}

/// All automorphisms, ordered by the image of flag 0.
pub fn automorphism_group(m: &Maniplex) -> Vec<Perm> {
    automorphism_group_with(m, Exec::default())
}

pub fn automorphism_group_with(m: &Maniplex, exec: Exec) -> Vec<Perm> {
    exec.map(m.flag_count(), |d| try_extend(m, 0, d as u32))
        .into_iter()
        .flatten()
        .collect()
}

/// Image of flag 0 under each automorphism: the orbit of flag 0.
pub fn base_orbit_with(m: &Maniplex, exec: Exec) -> Vec<u32> {
    exec.map(m.flag_count(), |d| extend_map(m, m, 0, d as u32).is_some())
        .into_iter()
        .enumerate()
        .filter_map(|(d, ok)| ok.then_some(d as u32))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagOrbits {
    pub partition: Partition,
    pub k: usize,
    pub group_order: usize,
}

pub fn flag_orbits(m: &Maniplex) -> FlagOrbits {
    flag_orbits_with(m, Exec::default())
}

/// Orbits of `Aut(m)`, found chunk by chunk so that memory stays `O(m)`.
pub fn flag_orbits_with(m: &Maniplex, exec: Exec) -> FlagOrbits {
    const CHUNK: usize = 512;
    let n = m.flag_count();
    let mut dsu = Dsu::new(n);
    let mut order = 0;
    for start in (0..n).step_by(CHUNK) {
        let len = CHUNK.min(n - start);
        let autos = exec.map(len, |k| extend_map(m, m, 0, (start + k) as u32));
        for alpha in autos.into_iter().flatten() {
            order += 1;
            for (f, &g) in alpha.iter().enumerate() {
                dsu.union(f, g as usize);
            }
        }
    }
    let partition = dsu.into_partition();
    FlagOrbits {
        k: partition.count,
        partition,
        group_order: order,
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }

    fn into_partition(mut self) -> Partition {
        let n = self.0.len();
        let mut label = vec![u32::MAX; n];
        let mut class_of = vec![0u32; n];
        let mut count = 0;
        for f in 0..n {
            let root = self.find(f);
            if label[root] == u32::MAX {
                label[root] = count;
                count += 1;
            }
            class_of[f] = label[root];
        }
        Partition {
            class_of,
            count: count as usize,
        }
    }
}

/// The flag graph as a coloured pregraph: dart `f*n + c` is the colour-`c`
/// dart at flag `f`.
pub fn flag_pregraph(m: &Maniplex) -> Pregraph {
    let (n, fl) = (m.rank(), m.flag_count());
    Pregraph {
        vertex_count: fl,
        rank: n,
        beg: (0..fl * n).map(|x| x / n).collect(),
        inv: (0..fl * n)
            .map(|x| m.neighbour((x / n) as u32, x % n) as usize * n + x % n)
            .collect(),
        colour: (0..fl * n).map(|x| Some(x % n)).collect(),
    }
}

#[derive(Clone, Debug)]
pub struct SymmetryTypeGraph {
    pub graph: Pregraph,
    /// Orbit (vertex of `graph`) of each flag.
    pub orbit_of: Vec<u32>,
}

pub fn symmetry_type_graph(m: &Maniplex) -> SymmetryTypeGraph {
    stg_from_orbits(m, &flag_orbits(m).partition)
}

pub fn stg_from_orbits(m: &Maniplex, orbits: &Partition) -> SymmetryTypeGraph {
    let n = m.rank();
    let gamma = flag_pregraph(m);
    let vclass: Vec<usize> = orbits.class_of.iter().map(|&c| c as usize).collect();
    let dclass: Vec<usize> = (0..gamma.dart_count())
        .map(|x| vclass[x / n] * n + x % n)
        .collect();
    // Orbits of a colour-preserving group always give a compatible partition.
    let graph = quotient_by_partition(&gamma, &vclass, &dclass)
        .expect("orbit partition is beg/inv compatible");
    SymmetryTypeGraph {
        graph,
        orbit_of: orbits.class_of.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Class {
    Regular,
    /// Two flag orbits; `set` lists the colours of semi-edges in the STG.
    /// `chiral` iff `set` is empty.
    TwoOrbit {
        set: Vec<usize>,
        chiral: bool,
    },
    KOrbit(usize),
}

impl Class {
    pub fn k(&self) -> usize {
        match self {
            Class::Regular => 1,
            Class::TwoOrbit { .. } => 2,
            Class::KOrbit(k) => *k,
        }
    }

    /// `regular`, `2_{0,2}^3`, `chiral:2_{}^3` or `5-orbit`.
    pub fn descriptor(&self, rank: usize) -> String {
        match self {
            Class::Regular => "regular".into(),
            Class::TwoOrbit { set, chiral } => {
                let s = format!("2_{{{}}}^{rank}", join(set));
                if *chiral {
                    format!("chiral:{s}")
                } else {
                    s
                }
            }
            Class::KOrbit(k) => format!("{k}-orbit"),
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Class::Regular => f.write_str("regular"),
            Class::TwoOrbit { set, .. } => write!(f, "two-orbit {{{}}}", join(set)),
            Class::KOrbit(k) => write!(f, "{k}-orbit"),
        }
    }
}

pub(crate) fn join(set: &[usize]) -> String {
    set.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

pub fn classify(m: &Maniplex) -> Class {
    let orbits = flag_orbits(m);
    classify_from_orbits(m, &orbits.partition)
}

pub fn classify_from_orbits(m: &Maniplex, orbits: &Partition) -> Class {
    match orbits.count {
        1 => Class::Regular,
        2 => {
            let set: Vec<usize> = (0..m.rank())
                .filter(|&c| orbits.class_of[m.neighbour(0, c) as usize] == orbits.class_of[0])
                .collect();
            let chiral = set.is_empty();
            Class::TwoOrbit { set, chiral }
        }
        k => Class::KOrbit(k),
    }
}

/// `ρ_i` sending `base` to its `i`-neighbour.
pub fn standard_generators(m: &Maniplex, base: u32) -> Result<Vec<Perm>> {
    (0..m.rank())
        .map(|i| try_extend(m, base, m.neighbour(base, i)).ok_or(Error::NotRegular))
        .collect()
}

/// Whether `alpha` commutes with every `r_i`.
pub fn is_automorphism(m: &Maniplex, alpha: &Perm) -> bool {
    alpha.degree() == m.flag_count()
        && (0..m.rank()).all(|i| {
            (0..m.flag_count() as u32)
                .all(|f| alpha.apply(m.neighbour(f, i)) == m.neighbour(alpha.apply(f), i))
        })
}
