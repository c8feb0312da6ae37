use std::collections::{HashMap, VecDeque};

use maniplex::catalogue::{chiral_44_12, cube};
use maniplex::exec::Exec;
use maniplex::maniplex::Maniplex;
use maniplex::poset::{polygon, polyhedron};
use maniplex::pregraph::{find_isomorphism, make_2in, EdgeKind};
use maniplex::symmetry::{
    automorphism_group, automorphism_group_with, classify, flag_orbits, flag_orbits_with,
    is_automorphism, standard_generators, symmetry_type_graph, try_extend, Class,
};
use maniplex::twohat::{build_mn, DEFAULT_FLAG_CAP};
use maniplex::voltage::group_closure;

/// Rows relabelled by breadth-first discovery from `start`, colours in
/// order. Two flags lie in one orbit iff their relabellings agree.
fn canonical_form(m: &Maniplex, start: u32) -> Vec<Vec<u32>> {
    let mut label = vec![u32::MAX; m.flag_count()];
    let mut order = vec![start];
    label[start as usize] = 0;
    let mut q = VecDeque::from([start]);
    while let Some(f) = q.pop_front() {
        for i in 0..m.rank() {
            let g = m.neighbour(f, i);
            if label[g as usize] == u32::MAX {
                label[g as usize] = order.len() as u32;
                order.push(g);
                q.push_back(g);
            }
        }
    }
    (0..m.rank())
        .map(|i| {
            order
                .iter()
                .map(|&f| label[m.neighbour(f, i) as usize])
                .collect()
        })
        .collect()
}

fn oracle_orbits(m: &Maniplex) -> Vec<usize> {
    let mut classes: HashMap<Vec<Vec<u32>>, usize> = HashMap::new();
    let mut sizes = Vec::new();
    for f in 0..m.flag_count() as u32 {
        let next = classes.len();
        let c = *classes.entry(canonical_form(m, f)).or_insert(next);
        if c == sizes.len() {
            sizes.push(0);
        }
        sizes[c] += 1;
    }
    sizes
}

fn triangular_prism() -> Maniplex {
    polyhedron(&[
        vec![0, 1, 2],
        vec![3, 5, 4],
        vec![0, 3, 4, 1],
        vec![1, 4, 5, 2],
        vec![2, 5, 3, 0],
    ])
    .unwrap()
}

#[test]
fn extending_a_flag_to_itself_is_the_identity() {
    let c = cube();
    for f in [0, 17, 47] {
        assert!(try_extend(&c, f, f).unwrap().is_identity());
    }
}

#[test]
fn cube_is_flag_transitive() {
    let c = cube();
    let hits = (0..48).filter(|&d| try_extend(&c, 5, d).is_some()).count();
    assert_eq!(hits, 48);
    let g = automorphism_group(&c);
    assert_eq!(g.len(), 48);
    assert!(g.iter().all(|a| is_automorphism(&c, a)));
    assert_eq!(oracle_orbits(&c), vec![48]);
    assert_eq!(flag_orbits(&c).k, 1);
}

#[test]
fn chiral_torus_has_two_orbits() {
    let m = chiral_44_12();
    assert_eq!(m.flag_count(), 40);
    let g = automorphism_group(&m);
    assert_eq!(g.len(), 20);
    let o = flag_orbits(&m);
    assert_eq!(o.k, 2);
    assert_eq!(o.group_order, 20);
    assert_eq!(o.partition.sizes(), vec![20, 20]);
    assert_eq!(oracle_orbits(&m), vec![20, 20]);
    // Adjacent flags lie in different orbits.
    for i in 0..3 {
        let other = m.neighbour(0, i);
        assert_ne!(
            o.partition.class_of[0],
            o.partition.class_of[other as usize]
        );
        assert!(try_extend(&m, 0, other).is_none());
    }
}

#[test]
fn square_and_m3_groups() {
    let m2 = build_mn(2, DEFAULT_FLAG_CAP).unwrap();
    assert_eq!(automorphism_group(&m2).len(), 8);
    let m3 = build_mn(3, DEFAULT_FLAG_CAP).unwrap();
    let g = automorphism_group(&m3);
    assert_eq!(g.len(), 128);
    assert_eq!(oracle_orbits(&m3), vec![128]);
    assert_eq!(classify(&m3), Class::Regular);
}

#[test]
fn prism_has_three_orbits() {
    let p = triangular_prism();
    assert_eq!(p.flag_count(), 36);
    assert_eq!(flag_orbits(&p).k, 3);
    assert_eq!(oracle_orbits(&p).len(), 3);
    assert_eq!(classify(&p), Class::KOrbit(3));
}

#[test]
fn sequential_and_parallel_agree() {
    let m = chiral_44_12();
    assert_eq!(
        automorphism_group_with(&m, Exec::Sequential),
        automorphism_group_with(&m, Exec::Parallel)
    );
    assert_eq!(
        flag_orbits_with(&m, Exec::Sequential),
        flag_orbits_with(&m, Exec::Parallel)
    );
}

#[test]
fn regular_stg_is_one_vertex_with_semi_edges() {
    for m in [
        polygon(5).unwrap(),
        cube(),
        build_mn(3, DEFAULT_FLAG_CAP).unwrap(),
    ] {
        let t = symmetry_type_graph(&m).graph;
        assert_eq!(t.vertex_count, 1);
        assert_eq!(t.dart_count(), m.rank());
        assert!((0..m.rank()).all(|x| t.edge_kind(x).unwrap() == EdgeKind::SemiEdge));
    }
}

#[test]
fn chiral_stg_is_two_vertices_joined_by_links() {
    let m = chiral_44_12();
    let t = symmetry_type_graph(&m);
    assert!(find_isomorphism(&t.graph, &make_2in(3, &[]).unwrap()).is_some());
    assert_eq!(t.orbit_of.len(), 40);
}

#[test]
fn classify_chiral_torus() {
    let c = classify(&chiral_44_12());
    assert_eq!(
        c,
        Class::TwoOrbit {
            set: vec![],
            chiral: true
        }
    );
    assert_eq!(c.descriptor(3), "chiral:2_{}^3");
    assert_eq!(Class::Regular.descriptor(3), "regular");
    assert_eq!(Class::KOrbit(3).k(), 3);
}

#[test]
fn standard_generators_generate_the_group() {
    let m2 = build_mn(2, DEFAULT_FLAG_CAP).unwrap();
    for base in 0..8 {
        let gens = standard_generators(&m2, base).unwrap();
        assert_eq!(gens.len(), 2);
        for (i, g) in gens.iter().enumerate() {
            assert_eq!(g.apply(base), m2.neighbour(base, i));
        }
        assert_eq!(group_closure(&gens, 8, 100).unwrap().len(), 8);
    }
}

#[test]
fn standard_generators_need_regularity() {
    assert!(standard_generators(&chiral_44_12(), 0).is_err());
    assert!(standard_generators(&triangular_prism(), 0).is_err());
}
