//! Flag bi-colourings consistent with a colour set `I`: `i`-adjacent flags
//! share a colour iff `i` is in `I`.

use std::collections::VecDeque;

use crate::error::Result;
use crate::maniplex::Maniplex;
use crate::pregraph::normalise_set;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiColouring {
    pub set: Vec<usize>,
    /// `true` for black; flag 0 is white in colourings produced here.
    pub black: Vec<bool>,
}

impl BiColouring {
    pub fn is_white(&self, flag: u32) -> bool {
        !self.black[flag as usize]
    }

    pub fn white_flags(&self) -> Vec<u32> {
        (0..self.black.len() as u32)
            .filter(|&f| self.is_white(f))
            .collect()
    }

    /// One `W`/`B` character per flag.
    pub fn to_wb_string(&self) -> String {
        self.black
            .iter()
            .map(|&b| if b { 'B' } else { 'W' })
            .collect()
    }
}

pub fn bicolouring_consistent(m: &Maniplex, set: &[usize]) -> Result<Option<BiColouring>> {
    bicolouring_from(m, set, 0)
}

/// BFS from `start` (coloured white); crossing an edge of colour `i` flips
/// the colour iff `i` is not in `set`.
pub fn bicolouring_from(m: &Maniplex, set: &[usize], start: u32) -> Result<Option<BiColouring>> {
    let set = normalise_set(m.rank(), set)?;
    let mut flips = vec![true; m.rank()];
    for &i in &set {
        flips[i] = false;
    }
    let mut colour: Vec<Option<bool>> = vec![None; m.flag_count()];
    colour[start as usize] = Some(false);
    let mut q = VecDeque::from([start]);
    while let Some(f) = q.pop_front() {
        let cf = colour[f as usize].unwrap();
        for (i, &flip) in flips.iter().enumerate() {
            let g = m.neighbour(f, i) as usize;
            let want = cf ^ flip;
            match colour[g] {
                None => {
                    colour[g] = Some(want);
                    q.push_back(g as u32);
                }
                Some(c) if c != want => return Ok(None),
                Some(_) => {}
            }
        }
    }
    Ok(Some(BiColouring {
        set,
        black: colour.into_iter().map(|c| c.unwrap_or(false)).collect(),
    }))
}

pub fn verify_bicolouring(m: &Maniplex, c: &BiColouring) -> bool {
    c.black.len() == m.flag_count()
        && (0..m.rank()).all(|i| {
            let same = c.set.contains(&i);
            (0..m.flag_count())
                .all(|f| (c.black[f] == c.black[m.neighbour(f as u32, i) as usize]) == same)
        })
}

/// Whether the monodromy word preserves colour classes: an even number of
/// letters outside `I`.
pub fn mon_i_preserves(c: &BiColouring, word: &[usize]) -> bool {
    word.iter().filter(|i| !c.set.contains(i)).count() % 2 == 0
}
