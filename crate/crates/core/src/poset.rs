//! Flag graphs of ranked incidence structures (polygons, polyhedra, ...).

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::maniplex::Maniplex;

/// Proper faces of ranks `0..rank`. `below[i][j]` lists the `(i-1)`-faces
/// incident to the `j`-th `i`-face; `below[0]` is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    pub rank: usize,
    pub counts: Vec<usize>,
    pub below: Vec<Vec<Vec<usize>>>,
}

impl Poset {
    /// Flags (maximal chains, listed bottom-up) in lexicographic order.
    pub fn flags(&self) -> Vec<Vec<usize>> {
        let n = self.rank;
        let mut out = Vec::new();
        let mut chain = vec![0; n];
        for top in 0..self.counts[n - 1] {
            chain[n - 1] = top;
            self.descend(n - 1, &mut chain, &mut out);
        }
        out.sort();
        out
    }

    fn descend(&self, i: usize, chain: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == 0 {
            out.push(chain.clone());
            return;
        }
        for &f in &self.below[i][chain[i]] {
            chain[i - 1] = f;
            self.descend(i - 1, chain, out);
        }
    }

    fn incident(&self, lower: usize, upper: usize, rank_of_upper: usize) -> bool {
        self.below[rank_of_upper][upper].contains(&lower)
    }
}

/// The flag graph; fails if some flag has no unique `i`-adjacent flag.
pub fn from_poset(p: &Poset) -> Result<Maniplex> {
    let n = p.rank;
    if n == 0 || p.counts.len() != n || p.below.len() != n {
        return Err(Error::Precondition("malformed poset".into()));
    }
    let flags = p.flags();
    let index: HashMap<&[usize], u32> = flags
        .iter()
        .enumerate()
        .map(|(k, f)| (f.as_slice(), k as u32))
        .collect();
    let mut rows = vec![vec![0u32; flags.len()]; n];
    for (k, f) in flags.iter().enumerate() {
        for i in 0..n {
            let others: Vec<usize> = (0..p.counts[i])
                .filter(|&g| {
                    g != f[i]
                        && (i == 0 || p.incident(f[i - 1], g, i))
                        && (i + 1 == n || p.incident(g, f[i + 1], i + 1))
                })
                .collect();
            if others.len() != 1 {
                return Err(Error::Precondition(format!(
                    "flag {f:?} has {} {i}-adjacent flags",
                    others.len()
                )));
            }
            let mut g = f.clone();
            g[i] = others[0];
            rows[i][k] = index[g.as_slice()];
        }
    }
    Maniplex::new(rows)
}

/// The `p`-gon as a rank-2 maniplex with `2p` flags.
pub fn polygon(p: usize) -> Result<Maniplex> {
    if p < 2 {
        return Err(Error::Precondition(
            "a polygon needs at least 2 vertices".into(),
        ));
    }
    let edges = (0..p).map(|e| vec![e, (e + 1) % p]).collect();
    from_poset(&Poset {
        rank: 2,
        counts: vec![p, p],
        below: vec![vec![], edges],
    })
}

/// A polyhedral map given by the vertex cycles of its faces.
pub fn polyhedron(faces: &[Vec<usize>]) -> Result<Maniplex> {
    let vertices = faces.iter().flatten().max().map_or(0, |&v| v + 1);
    let mut edge_id: HashMap<(usize, usize), usize> = HashMap::new();
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut face_edges = Vec::with_capacity(faces.len());
    for cycle in faces {
        let mut fe = Vec::with_capacity(cycle.len());
        for k in 0..cycle.len() {
            let (a, b) = (cycle[k], cycle[(k + 1) % cycle.len()]);
            let key = (a.min(b), a.max(b));
            let e = *edge_id.entry(key).or_insert_with(|| {
                edges.push(vec![key.0, key.1]);
                edges.len() - 1
            });
            fe.push(e);
        }
        face_edges.push(fe);
    }
    from_poset(&Poset {
        rank: 3,
        counts: vec![vertices, edges.len(), faces.len()],
        below: vec![vec![], edges, face_edges],
    })
}
