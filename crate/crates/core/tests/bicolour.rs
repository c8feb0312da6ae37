use maniplex::bicolour::{
    bicolouring_consistent, bicolouring_from, mon_i_preserves, verify_bicolouring, BiColouring,
};
use maniplex::catalogue::cube;
use maniplex::maniplex::Maniplex;
use maniplex::poset::polygon;
use maniplex::twohat::{build_mn, DEFAULT_FLAG_CAP};

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..1u32 << n).map(move |mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
}

/// Every closed walk in the graph with colours outside `set` flipping must
/// have even length; checked on the fundamental cycles of a BFS tree.
fn oracle_exists(m: &Maniplex, set: &[usize]) -> bool {
    let n = m.flag_count();
    let mut parity = vec![u8::MAX; n];
    let mut stack = vec![0u32];
    parity[0] = 0;
    while let Some(f) = stack.pop() {
        for i in 0..m.rank() {
            let g = m.neighbour(f, i) as usize;
            if parity[g] == u8::MAX {
                parity[g] = parity[f as usize] ^ u8::from(!set.contains(&i));
                stack.push(g as u32);
            }
        }
    }
    (0..n as u32).all(|f| {
        (0..m.rank()).all(|i| {
            let g = m.neighbour(f, i) as usize;
            (parity[f as usize] ^ parity[g]) == u8::from(!set.contains(&i))
        })
    })
}

#[test]
fn every_polygon_admits_the_empty_set() {
    for p in 2..9 {
        let m = polygon(p).unwrap();
        let c = bicolouring_consistent(&m, &[]).unwrap().unwrap();
        assert!(verify_bicolouring(&m, &c));
    }
}

#[test]
fn triangle_has_no_colouring_for_zero() {
    let t = polygon(3).unwrap();
    assert!(bicolouring_consistent(&t, &[0]).unwrap().is_none());
    assert!(!oracle_exists(&t, &[0]));
}

#[test]
fn m3_admits_every_set() {
    let m3 = build_mn(3, DEFAULT_FLAG_CAP).unwrap();
    for set in subsets(3) {
        let c = bicolouring_consistent(&m3, &set).unwrap().unwrap();
        assert!(verify_bicolouring(&m3, &c));
        assert_eq!(c.set, set);
    }
}

#[test]
fn existence_matches_oracle() {
    for m in [
        polygon(3).unwrap(),
        polygon(6).unwrap(),
        cube(),
        build_mn(3, DEFAULT_FLAG_CAP).unwrap(),
    ] {
        for set in subsets(m.rank()) {
            assert_eq!(
                bicolouring_consistent(&m, &set).unwrap().is_some(),
                oracle_exists(&m, &set),
                "{set:?}"
            );
        }
    }
}

#[test]
fn existence_does_not_depend_on_start_flag() {
    let c = cube();
    for set in subsets(3) {
        let here = bicolouring_from(&c, &set, 0).unwrap();
        for start in [1, 20, 47] {
            let there = bicolouring_from(&c, &set, start).unwrap();
            assert_eq!(here.is_some(), there.is_some());
            if let (Some(a), Some(b)) = (&here, &there) {
                let same = a.black[start as usize] == a.black[0];
                assert!((0..48).all(|f| (a.black[f] == b.black[f]) == same));
            }
        }
    }
}

#[test]
fn flipping_one_flag_breaks_consistency() {
    let s = polygon(4).unwrap();
    let mut c = bicolouring_consistent(&s, &[1]).unwrap().unwrap();
    assert!(verify_bicolouring(&s, &c));
    c.black[3] = !c.black[3];
    assert!(!verify_bicolouring(&s, &c));
}

#[test]
fn all_white_fails_when_a_flipping_colour_exists() {
    let m3 = build_mn(3, DEFAULT_FLAG_CAP).unwrap();
    let c = BiColouring {
        set: vec![0, 1],
        black: vec![false; 128],
    };
    assert!(!verify_bicolouring(&m3, &c));
}

#[test]
fn words_preserve_colour_by_parity() {
    let c = BiColouring {
        set: vec![2],
        black: vec![false; 8],
    };
    assert!(mon_i_preserves(&c, &[2]));
    assert!(mon_i_preserves(&c, &[0, 1]));
    assert!(!mon_i_preserves(&c, &[0]));
    assert!(mon_i_preserves(&c, &[]));
}

#[test]
fn colour_string() {
    let s = polygon(2).unwrap();
    let c = bicolouring_consistent(&s, &[]).unwrap().unwrap();
    assert_eq!(c.to_wb_string().len(), 4);
    assert!(c.to_wb_string().starts_with('W'));
    assert!(bicolouring_consistent(&s, &[2]).is_err());
}
