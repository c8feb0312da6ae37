use maniplex::bicolour::bicolouring_from;
use maniplex::construct::{
    build_yn, construct_two_orbit, layered_for_rank, mu_certificate, run_pipeline, tilde_rho0,
    verify_two_orbit, ConstructOptions, EtaSource, Pipeline, Procedure, XwSpace,
};
use maniplex::error::Error;
use maniplex::exec::Exec;
use maniplex::poset::polygon;
use maniplex::symmetry::{classify, Class};
use maniplex::twohat::{
    build_eta, build_mn, find_s0, two_hat, two_hat_flag, S0Search, DEFAULT_FLAG_CAP,
};
use maniplex::voltage::LiftVerdict;
use maniplex::{Maniplex, Perm};

fn m3() -> Maniplex {
    build_mn(3, DEFAULT_FLAG_CAP).unwrap()
}

fn layered(set: &[usize]) -> Pipeline {
    layered_for_rank(4, set, &ConstructOptions::default()).unwrap()
}

/// The pipeline's `η` recovered from its eta source.
fn eta_of(p: &Pipeline, base: &Maniplex) -> Perm {
    let EtaSource::Search { index } = p.eta_source else {
        panic!("expected a searched η")
    };
    let c = bicolouring_from(
        base,
        &p.set.iter().copied().filter(|&i| i < 3).collect::<Vec<_>>(),
        0,
    )
    .unwrap()
    .unwrap();
    maniplex::construct::eta_candidates(base, &c, 0)[index].clone()
}

#[test]
fn tilde_rho0_properties() {
    let m = m3();
    let p = layered(&[2]);
    let bf = &p.base_flags;
    let rho = tilde_rho0(&m, &bf.base).unwrap();
    let r0 = m.r_perm(0);
    for &b in &bf.base {
        assert_eq!(rho.apply(b), m.neighbour(b, 0));
        assert_eq!(rho.then(&r0).apply(b), b);
    }
    for i in 0..2 {
        let ri = m.r_perm(i);
        assert_eq!(rho.then(&ri), ri.then(&rho), "r_{i}");
    }
    // Facets are preserved.
    let facets = m.facets();
    assert!(
        (0..128u32).all(|f| facets.class_of[rho.apply(f) as usize] == facets.class_of[f as usize])
    );
}

#[test]
fn yn_examples() {
    let m = m3();
    let p = layered(&[2]);
    let bf = &p.base_flags;
    let facets = m.facets();
    let c = bicolouring_from(&m, &[2], bf.phi0).unwrap().unwrap();
    let xw = XwSpace::new(&c, p.k);
    let rho = tilde_rho0(&m, &bf.base).unwrap();
    let yn = build_yn(&m, &facets, &rho, bf, &xw);
    assert_eq!(&yn, p.generators.y.last().unwrap());
    assert!(yn.then(&yn).is_identity());
    for (f, &psi) in bf.base.iter().enumerate() {
        if f == bf.f0 || f == bf.f1 {
            continue;
        }
        for layer in 0..xw.layers {
            let q = xw.point(psi, layer);
            assert_eq!(yn.apply(q), q);
        }
    }
    for layer in (1..xw.layers).step_by(2) {
        assert_eq!(
            yn.apply(xw.point(bf.phi1, layer)),
            xw.point(bf.phi1, layer - 1)
        );
    }
    for layer in (0..xw.layers).step_by(2) {
        assert_eq!(
            yn.apply(xw.point(bf.phi0, layer)),
            xw.point(bf.phi0, (layer + xw.layers - 1) % xw.layers)
        );
    }
}

#[test]
fn generators_follow_the_recipes() {
    let m = m3();
    let p = layered(&[2]);
    let xw = XwSpace::new(&bicolouring_from(&m, &[2], 0).unwrap().unwrap(), p.k);
    assert_eq!(
        p.generators.z,
        xw.lift(&m.r_perm(0).then(&m.r_perm(1))).unwrap()
    );
    assert_eq!(p.generators.y[0], xw.lift(&m.r_perm(2)).unwrap());
    assert!(p.generators.z_prime.is_none());

    let p = layered(&[1]);
    let xw = XwSpace::new(&bicolouring_from(&m, &[1], 0).unwrap().unwrap(), p.k);
    let g = &p.generators;
    assert_eq!(g.z, xw.lift(&m.r_perm(1)).unwrap());
    let zp = g.z_prime.as_ref().unwrap();
    assert_eq!(zp.conj(g.y.last().unwrap()), g.z);
    assert_eq!(g.y[0], xw.lift(&m.r_perm(2).then(&m.r_perm(0))).unwrap());
}

#[test]
fn m3_relations_hold_for_every_set_below_the_top() {
    for set in [vec![], vec![1], vec![2], vec![1, 2]] {
        let p = layered(&set);
        assert!(p.relations.all_pass(), "{set:?}: {}", p.relations);
        assert!(p.simple);
        assert_eq!(p.points(), 16512);
    }
}

#[test]
fn m3_certificate_values() {
    for set in [vec![], vec![1], vec![2], vec![1, 2]] {
        let p = layered(&set);
        assert_eq!(p.k, 129);
        assert_eq!(p.mu.mu_orbit, 129);
        assert_eq!(p.mu.bound, 128);
        assert!(p.mu.max_orbit_nu <= 128);
        assert!(p.is_certified(), "{set:?}");
        let c = p.certificate();
        assert_eq!(c.get("verdict").as_deref(), Some("certified"));
        assert_eq!(c.get("route").as_deref(), Some("layered"));
        assert_eq!(c.get("base").as_deref(), Some("M_3"));
    }
}

#[test]
fn top_colour_in_set_breaks_a_relation() {
    let p = layered(&[3]);
    assert!(!p.relations.all_pass());
    assert!(p.relations.failures().iter().all(|f| f.contains("y3")));
    assert!(!p.is_certified());
}

#[test]
fn small_k_is_uncertified() {
    let m = m3();
    let p = layered(&[2]);
    let eta = eta_of(&p, &m);
    let q = run_pipeline(
        &m,
        "M_3",
        &[2],
        &eta,
        0,
        Some(2),
        EtaSource::Given,
        &ConstructOptions::default(),
    )
    .unwrap();
    assert_eq!(q.k, 2);
    assert_eq!(q.mu.mu_orbit, 2);
    assert!(!q.is_certified());
    assert_eq!(
        q.certificate().get("verdict").as_deref(),
        Some("uncertified")
    );
}

#[test]
fn mu_orbit_equals_k() {
    let m = m3();
    let p = layered(&[1, 2]);
    let eta = eta_of(&p, &m);
    for k in [1, 3, 7, 40] {
        let q = run_pipeline(
            &m,
            "M_3",
            &[1, 2],
            &eta,
            0,
            Some(k),
            EtaSource::Given,
            &ConstructOptions::default(),
        )
        .unwrap();
        assert_eq!(q.mu.mu_orbit, k);
        let c = bicolouring_from(&m, &[1, 2], 0).unwrap().unwrap();
        let xw = XwSpace::new(&c, k);
        let again = mu_certificate(&m, &xw, &eta, q.generators.y.last().unwrap(), 0).unwrap();
        assert_eq!(again, q.mu);
    }
}

#[test]
fn pipeline_blocks_the_vertex_swap() {
    for set in [vec![2], vec![1, 2]] {
        let p = layered(&set);
        assert!(matches!(p.lift, LiftVerdict::NoLift { .. }), "{set:?}");
        assert_eq!(p.witness_matches, Some(true));
    }
}

#[test]
fn rigid_facet_route_on_the_hexagon() {
    let h = polygon(6).unwrap();
    let s0 = find_s0(&h, S0Search::default()).unwrap().unwrap();
    let f0 = s0[0];
    let phi0p = h.facets().first_flags()[f0];
    let eta = build_eta(&h, &s0, f0, phi0p).unwrap();
    let base = two_hat(&h, DEFAULT_FLAG_CAP).unwrap();
    let perm = eta.as_two_hat_perm(h.flag_count());
    let phi0 = two_hat_flag(h.flag_count(), phi0p, 0);
    let p = run_pipeline(
        &base,
        "2^hexagon",
        &[2],
        &perm,
        phi0,
        None,
        EtaSource::RigidFacets { s0 },
        &ConstructOptions::default(),
    )
    .unwrap();
    assert_eq!(p.k, 769);
    assert_eq!(p.base_flags.conflicts, 0);
    assert!(p.mu.band_property);
    assert_eq!(p.mu.mu_orbit, 769);
    assert!(p.mu.max_orbit_nu <= p.mu.bound);
    assert!(p.is_certified());
}

#[test]
fn rank_three_comes_from_the_catalogue() {
    for mask in 0..7u32 {
        let set: Vec<usize> = (0..3).filter(|&i| mask >> i & 1 == 1).collect();
        let c = construct_two_orbit(3, &set, &ConstructOptions::default()).unwrap();
        assert!(c.certificate.is_certified(), "{set:?}");
        assert_eq!(c.certificate.route, "catalogue");
        let m = c.maniplex.unwrap();
        assert_eq!(
            classify(&m),
            Class::TwoOrbit {
                set: set.clone(),
                chiral: set.is_empty()
            }
        );
    }
    let c = construct_two_orbit(3, &[], &ConstructOptions::default()).unwrap();
    assert_eq!(c.certificate.get("type").as_deref(), Some("chiral:2_{}^3"));
}

#[test]
fn rank_four_routing() {
    let opts = ConstructOptions::default();
    let c = construct_two_orbit(4, &[2], &opts).unwrap();
    assert_eq!(c.certificate.route, "layered");
    assert!(c.certificate.is_certified());
    assert!(c.maniplex.is_none());

    let c = construct_two_orbit(4, &[0, 2], &opts).unwrap();
    assert_eq!(c.certificate.route, "procedure-2");
    assert_eq!(c.certificate.get("from.set").as_deref(), Some("1"));
    assert!(c.certificate.is_certified());
    assert!(verify_two_orbit(c.maniplex.as_ref().unwrap(), &[0, 2]).unwrap());

    let c = construct_two_orbit(4, &[1, 3], &opts).unwrap();
    assert_eq!(c.certificate.route, "procedure-1");
    assert_eq!(c.certificate.get("from.set").as_deref(), Some("1"));
    assert!(verify_two_orbit(c.maniplex.as_ref().unwrap(), &[1, 3]).unwrap());

    let forced = ConstructOptions {
        procedure: Procedure::One,
        ..ConstructOptions::default()
    };
    let c = construct_two_orbit(4, &[0, 3], &forced).unwrap();
    assert_eq!(c.certificate.route, "procedure-1");
    assert_eq!(c.certificate.get("from.set").as_deref(), Some("0"));
    assert!(c.certificate.is_certified());
    assert!(construct_two_orbit(4, &[0], &forced).is_err());
}

#[test]
fn improper_set_is_an_error() {
    let opts = ConstructOptions::default();
    assert!(matches!(
        construct_two_orbit(4, &[0, 1, 2, 3], &opts),
        Err(Error::InvalidSet(_))
    ));
    assert!(construct_two_orbit(4, &[4], &opts).is_err());
    assert!(construct_two_orbit(2, &[], &opts).is_err());
}

#[test]
fn rank_five_exceeds_the_default_cap() {
    let err = construct_two_orbit(5, &[2], &ConstructOptions::default()).unwrap_err();
    assert!(matches!(err, Error::CapExceeded { .. }), "{err}");
}

#[test]
fn parallel_and_sequential_certificates_agree() {
    let seq = ConstructOptions {
        exec: Exec::Sequential,
        ..ConstructOptions::default()
    };
    let par = ConstructOptions {
        exec: Exec::Parallel,
        ..ConstructOptions::default()
    };
    for set in [vec![], vec![1, 2]] {
        let a = construct_two_orbit(4, &set, &seq)
            .unwrap()
            .certificate
            .to_text();
        let b = construct_two_orbit(4, &set, &par)
            .unwrap()
            .certificate
            .to_text();
        assert_eq!(a, b);
    }
}

#[test]
fn small_materialised_covers_have_the_requested_type() {
    // Outputs of both procedures on small inputs are checked by brute force.
    for set in [vec![0], vec![0, 1], vec![3], vec![2, 3]] {
        let c = construct_two_orbit(4, &set, &ConstructOptions::default()).unwrap();
        let m = c.maniplex.expect("materialised");
        assert!(m.is_valid());
        assert!(verify_two_orbit(&m, &set).unwrap(), "{set:?}");
        assert_eq!(c.certificate.get("check").as_deref(), Some("pass"));
    }
}
