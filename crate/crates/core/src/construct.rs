//! Two-orbit maniplexes of every type `2_I^n`.
//!
//! The layered construction takes a regular base `M` of rank `n`, a
//! colour-preserving involution `η` of `Mon(M)` and `k ≥ 1`, and builds
//! permutations of `X_w = F_w(M) × Z_{2k}` that serve as voltages on
//! `2_I^{n+1}`. The cover is never enumerated: an order comparison between
//! `μ = (η y_n)²` and `ν = (r_0 η r_0 y_n)²` certifies that it has exactly two
//! flag orbits. Types with `0 ∈ I` come from `2̂^M` and `(2̂^{M*})*`, and rank
//! 3 from a catalogue of small maps.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigUint;

use crate::bicolour::{bicolouring_from, BiColouring};
use crate::catalogue::find_two_orbit_rank3;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::maniplex::{Maniplex, Partition};
use crate::perm::Perm;
use crate::pregraph::{find_isomorphism, make_2in, normalise_set, two_vertex_swap};
use crate::symmetry::{classify, join, symmetry_type_graph, Class};
use crate::twohat::{
    bfs_tree, build_eta_with, build_mn, find_s0, two_hat, two_hat_flag, word_to, S0Search,
    DEFAULT_FLAG_CAP, DEFAULT_SEED,
};
use crate::voltage::{
    check_relations, cover_maniplex, lift_obstruction, voltage_2in_unchecked, Letter, LiftVerdict,
    RelationReport, TwoInGenerators, VoltageAssignment, Word, DEFAULT_GROUP_CAP,
};

/// Outputs of procedures 1 and 2 above this many flags are not checked by
/// brute force; their type follows from the inner certificate.
pub const BRUTE_FORCE_FLAGS: usize = 20_000;

/// Which of the two `0 ∈ I` routes to take.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Procedure {
    /// Procedure 2 when `0 ∈ I`, else procedure 1 when `n-1 ∈ I`.
    #[default]
    Auto,
    /// `2̂^M`: adds semi-edges of colour `n-1`.
    One,
    /// `(2̂^{M*})*`: shifts colours up and adds semi-edges of colour 0.
    Two,
}

#[derive(Clone, Debug)]
pub struct ConstructOptions {
    /// Layer parameter; defaults to `2|F_w| + 1`.
    pub k: Option<usize>,
    pub flag_cap: usize,
    pub group_cap: usize,
    /// Largest voltage group the pipeline materialises; 0 disables it.
    pub materialize_cap: usize,
    pub procedure: Procedure,
    pub exec: Exec,
    pub seed: u64,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            k: None,
            flag_cap: DEFAULT_FLAG_CAP,
            group_cap: DEFAULT_GROUP_CAP,
            materialize_cap: 0,
            procedure: Procedure::Auto,
            exec: Exec::default(),
            seed: DEFAULT_SEED,
        }
    }
}

/// `X_w`: point `p = w·2k + ℓ` is `(white[w], ℓ)`.
#[derive(Clone, Debug)]
pub struct XwSpace {
    pub white: Vec<u32>,
    /// Position of each flag in `white`, `u32::MAX` for black flags.
    pub index: Vec<u32>,
    pub layers: usize,
}

impl XwSpace {
    pub fn new(c: &BiColouring, k: usize) -> Self {
        let white = c.white_flags();
        let mut index = vec![u32::MAX; c.black.len()];
        for (w, &f) in white.iter().enumerate() {
            index[f as usize] = w as u32;
        }
        XwSpace {
            white,
            index,
            layers: 2 * k,
        }
    }

    pub fn len(&self) -> usize {
        self.white.len() * self.layers
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, flag: u32, layer: usize) -> u32 {
        let w = self.index[flag as usize];
        debug_assert!(w != u32::MAX, "black flag {flag}");
        (w as usize * self.layers + layer % self.layers) as u32
    }

    pub fn flag(&self, p: u32) -> u32 {
        self.white[p as usize / self.layers]
    }

    pub fn layer(&self, p: u32) -> usize {
        p as usize % self.layers
    }

    /// A flag permutation acting on `X_w` with layers untouched.
    pub fn lift(&self, g: &Perm) -> Result<Perm> {
        if let Some(&f) = self
            .white
            .iter()
            .find(|&&f| self.index[g.apply(f) as usize] == u32::MAX)
        {
            return Err(Error::Construction(format!(
                "permutation sends white flag {f} to a black flag"
            )));
        }
        let images = (0..self.len() as u32)
            .map(|p| self.point(g.apply(self.flag(p)), self.layer(p)))
            .collect();
        Ok(Perm::from_images_unchecked(images))
    }
}

/// Facet `F_0` of `Φ_0`, facet `F_1` of `Φ_1 = Φ_0^η`, and a white base flag
/// per facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseFlags {
    pub f0: usize,
    pub f1: usize,
    pub phi0: u32,
    pub phi1: u32,
    pub base: Vec<u32>,
    /// White flags `Φ` of `F_0` whose `Φ^{r_0 η r_0}` landed in a facet that
    /// already had a different base flag. Zero when `η` separates flags.
    pub conflicts: usize,
}

/// `Φ_0`, `Φ_1`, then `Φ^{r_0 η r_0}` for the white flags `Φ` of `F_0` in
/// increasing order (first claim wins), then the smallest white flag.
pub fn assign_base_flags(
    m: &Maniplex,
    facets: &Partition,
    c: &BiColouring,
    eta: &Perm,
    phi0: u32,
) -> Result<BaseFlags> {
    if !c.is_white(phi0) {
        return Err(Error::Precondition("base flag is black".into()));
    }
    let class = |f: u32| facets.class_of[f as usize] as usize;
    let (f0, phi1) = (class(phi0), eta.apply(phi0));
    let f1 = class(phi1);
    if f1 == f0 {
        return Err(Error::Construction(
            "η keeps the base flag in its facet".into(),
        ));
    }
    let mut base = vec![u32::MAX; facets.count];
    base[f0] = phi0;
    base[f1] = phi1;
    let mut conflicts = 0;
    let r0 = m.row(0);
    let white: Vec<u32> = c.white_flags();
    for &f in white.iter().filter(|&&f| class(f) == f0) {
        let g = r0[eta.apply(r0[f as usize]) as usize];
        let slot = &mut base[class(g)];
        if *slot == u32::MAX {
            *slot = g;
        } else if *slot != g {
            conflicts += 1;
        }
    }
    for &f in &white {
        let slot = &mut base[class(f)];
        if *slot == u32::MAX {
            *slot = f;
        }
    }
    if base.contains(&u32::MAX) {
        return Err(Error::Construction("a facet has no white flag".into()));
    }
    Ok(BaseFlags {
        f0,
        f1,
        phi0,
        phi1,
        base,
        conflicts,
    })
}

/// `ρ̃_0`: on each facet, the facet automorphism sending its base flag to the
/// base flag's 0-neighbour, found by extending along colours below `n-1`.
pub fn tilde_rho0(m: &Maniplex, base: &[u32]) -> Result<Perm> {
    let n = m.rank();
    let mut img = vec![u32::MAX; m.flag_count()];
    for &b in base {
        img[b as usize] = m.neighbour(b, 0);
        let mut stack = vec![b];
        while let Some(x) = stack.pop() {
            for i in 0..n - 1 {
                let (y, t) = (m.neighbour(x, i), m.neighbour(img[x as usize], i));
                match img[y as usize] {
                    u32::MAX => {
                        img[y as usize] = t;
                        stack.push(y);
                    }
                    s if s != t => return Err(Error::NotRegular),
                    _ => {}
                }
            }
        }
    }
    if img.contains(&u32::MAX) {
        return Err(Error::Precondition("every facet needs a base flag".into()));
    }
    Ok(Perm::from_images_unchecked(img))
}

/// `y_n`: first coordinate `Φ^{ρ̃_0 r_0}`; layer `+1` for odd layers on `F_0`
/// and even layers on `F_1`, `-1` for the reverse, unchanged elsewhere.
pub fn build_yn(
    m: &Maniplex,
    facets: &Partition,
    rho0t: &Perm,
    bf: &BaseFlags,
    xw: &XwSpace,
) -> Perm {
    assert_ne!(bf.f0, bf.f1, "the three cases of y_n must be disjoint");
    let l = xw.layers;
    let images = (0..xw.len() as u32)
        .map(|p| {
            let (f, layer) = (xw.flag(p), xw.layer(p));
            let g = m.neighbour(rho0t.apply(f), 0);
            let facet = facets.class_of[f as usize] as usize;
            let odd = layer % 2 == 1;
            let next = if (odd && facet == bf.f0) || (!odd && facet == bf.f1) {
                layer + 1
            } else if facet == bf.f0 || facet == bf.f1 {
                layer + l - 1
            } else {
                layer
            };
            xw.point(g, next)
        })
        .collect();
    Perm::from_images_unchecked(images)
}

/// Flag permutations for `z`, `z'` (if `1 ∈ I`) and `y_2..y_{n-1}`, in
/// [`TwoInGenerators::names`] order.
pub fn h_generators(m: &Maniplex, set: &[usize]) -> Vec<Perm> {
    let r = |i: usize| m.r_perm(i);
    let mut out = Vec::new();
    if set.contains(&1) {
        out.push(r(1));
        out.push(r(0).then(&r(1)).then(&r(0)));
    } else {
        out.push(r(0).then(&r(1)));
    }
    for i in 2..m.rank() {
        out.push(if set.contains(&i) {
            r(i)
        } else {
            r(i).then(&r(0))
        });
    }
    out
}

/// The voltage generators on `X_w` for output type `2_I^{n+1}`.
pub fn build_generators(
    m: &Maniplex,
    set: &[usize],
    xw: &XwSpace,
    yn: &Perm,
) -> Result<TwoInGenerators> {
    let lifted = h_generators(m, set)
        .iter()
        .map(|g| xw.lift(g))
        .collect::<Result<Vec<_>>>()?;
    let mut it = lifted.into_iter();
    let z = it.next().unwrap();
    let z_prime = if set.contains(&1) { it.next() } else { None };
    let mut y: Vec<Perm> = it.collect();
    y.push(yn.clone());
    Ok(TwoInGenerators {
        rank: m.rank() + 1,
        set: set.to_vec(),
        z,
        z_prime,
        y,
    })
}

/// Orbit and order data for `μ = (η y_n)²` and `ν = (r_0 η r_0 y_n)²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuCertificate {
    pub mu_orbit: usize,
    pub order_mu: BigUint,
    pub order_nu: BigUint,
    pub max_orbit_nu: usize,
    /// `2|F_w|`.
    pub bound: usize,
    /// Every `ν`-orbit lies in one band `X_{2t} ∪ X_{2t+1}` or has length 2.
    pub band_property: bool,
    pub mu: Perm,
    pub nu: Perm,
}

pub fn mu_certificate(
    m: &Maniplex,
    xw: &XwSpace,
    eta: &Perm,
    yn: &Perm,
    phi0: u32,
) -> Result<MuCertificate> {
    let e = xw.lift(eta)?;
    let r0 = m.r_perm(0);
    let ret = xw.lift(&r0.then(eta).then(&r0))?;
    let ey = e.then(yn);
    let mu = ey.then(&ey);
    let ry = ret.then(yn);
    let nu = ry.then(&ry);
    let mu_orbit = mu.orbit_len(xw.point(phi0, 1));
    let band_property = nu_band_property(&nu, xw);
    Ok(MuCertificate {
        mu_orbit,
        order_mu: mu.order(),
        order_nu: nu.order(),
        max_orbit_nu: nu.max_cycle_len(),
        bound: 2 * xw.white.len(),
        band_property,
        mu,
        nu,
    })
}

fn nu_band_property(nu: &Perm, xw: &XwSpace) -> bool {
    let mut seen = vec![false; nu.degree()];
    for s in 0..nu.degree() as u32 {
        if seen[s as usize] {
            continue;
        }
        let band = xw.layer(s) / 2;
        let (mut x, mut len, mut inside) = (s, 0, true);
        while !seen[x as usize] {
            seen[x as usize] = true;
            inside &= xw.layer(x) / 2 == band;
            len += 1;
            x = nu.apply(x);
        }
        if !inside && len != 2 {
            return false;
        }
    }
    true
}

/// Where `η` came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EtaSource {
    /// Built from a rigid facet set `S_0` of `M'` with `M = 2̂^{M'}`.
    RigidFacets {
        s0: Vec<usize>,
    },
    /// The `index`-th colour-preserving involution of `Mon(M)` moving the
    /// base facet, in breadth-first order of its image of `Φ_0`.
    Search {
        index: usize,
    },
    Given,
}

impl fmt::Display for EtaSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EtaSource::RigidFacets { s0 } => write!(f, "rigid-facets:{}", join(s0)),
            EtaSource::Search { index } => write!(f, "search:{index}"),
            EtaSource::Given => f.write_str("given"),
        }
    }
}

/// Everything computed by one run of the layered construction.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub base_name: String,
    pub set: Vec<usize>,
    pub k: usize,
    pub eta_source: EtaSource,
    pub base_flags: BaseFlags,
    pub generators: TwoInGenerators,
    pub relations: RelationReport,
    pub simple: bool,
    pub mu: MuCertificate,
    /// `η` as a word in the generators other than `y_n`, if it lies in `H`.
    pub eta_word: Option<Word>,
    /// The substitution `z ↦ z⁻¹` (or `z ↔ z'`) applied to `μ` gives `ν`.
    pub witness_matches: Option<bool>,
    pub lift: LiftVerdict,
}

impl Pipeline {
    pub fn points(&self) -> usize {
        self.generators.z.degree()
    }

    /// Relations hold, the cover is simple, the `μ`-orbit of `(Φ_0, 1)` has
    /// size `k`, `k` exceeds every `ν`-orbit, and the orders differ.
    pub fn is_certified(&self) -> bool {
        self.relations.all_pass()
            && self.simple
            && self.mu.mu_orbit == self.k
            && self.k > self.mu.max_orbit_nu
            && self.mu.order_mu != self.mu.order_nu
    }

    pub fn voltage(&self) -> Result<VoltageAssignment> {
        voltage_2in_unchecked(&self.generators)
    }

    pub fn certificate(&self) -> TwoOrbitCertificate {
        let rank = self.generators.rank;
        let lift = match &self.lift {
            LiftVerdict::NoLift { .. } => "no-lift",
            LiftVerdict::Unknown => "unknown",
        };
        let fields = vec![
            ("k", self.k.to_string()),
            ("eta", self.eta_source.to_string()),
            ("points", self.points().to_string()),
            ("base_conflicts", self.base_flags.conflicts.to_string()),
            (
                "relations",
                format!(
                    "{}/{}",
                    self.relations.checks.iter().filter(|c| c.1).count(),
                    self.relations.checks.len()
                ),
            ),
            ("simple", self.simple.to_string()),
            ("mu_orbit", self.mu.mu_orbit.to_string()),
            ("order_mu", self.mu.order_mu.to_string()),
            ("order_nu", self.mu.order_nu.to_string()),
            ("max_orbit_nu", self.mu.max_orbit_nu.to_string()),
            ("bound", self.mu.bound.to_string()),
            ("band_property", self.mu.band_property.to_string()),
            (
                "witness",
                self.witness_matches
                    .map_or("none".into(), |b| b.to_string()),
            ),
            ("lift", lift.to_string()),
        ];
        TwoOrbitCertificate {
            rank,
            set: self.set.clone(),
            route: "layered".into(),
            base: self.base_name.clone(),
            fields: fields
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            verdict: if self.is_certified() {
                Verdict::Certified
            } else {
                Verdict::Uncertified
            },
        }
    }
}

/// Breadth-first word over the `H` generators and their inverses sending
/// `Φ_0` to `target`.
fn h_word(gens: &[Perm], phi0: u32, target: u32) -> Option<Word> {
    let degree = gens.first()?.degree();
    let inverses: Vec<Perm> = gens.iter().map(Perm::inverse).collect();
    let mut parent: Vec<Option<(u32, Letter)>> = vec![None; degree];
    let mut seen = vec![false; degree];
    seen[phi0 as usize] = true;
    let mut q = VecDeque::from([phi0]);
    while let Some(f) = q.pop_front() {
        if f == target {
            break;
        }
        for (gen, (g, gi)) in gens.iter().zip(&inverses).enumerate() {
            for (inverse, p) in [(false, g), (true, gi)] {
                let y = p.apply(f);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    parent[y as usize] = Some((f, Letter { gen, inverse }));
                    q.push_back(y);
                }
            }
        }
    }
    if !seen[target as usize] {
        return None;
    }
    let mut w = Vec::new();
    let mut f = target;
    while let Some((p, l)) = parent[f as usize] {
        w.push(l);
        f = p;
    }
    w.reverse();
    Some(w)
}

/// The image of a word under `z ↦ z⁻¹` (or `z ↔ z'`), `y_i ↦ y_i`.
fn tau_word(w: &[Letter], has_zp: bool) -> Word {
    w.iter()
        .map(|&l| match (l.gen, has_zp) {
            (0, false) => Letter {
                gen: 0,
                inverse: !l.inverse,
            },
            (0, true) => Letter { gen: 1, ..l },
            (1, true) => Letter { gen: 0, ..l },
            _ => l,
        })
        .collect()
}

/// Runs the construction on `base` with base flag `phi0` and output set
/// `set ⊆ {1..n}`.
#[allow(clippy::too_many_arguments)]
pub fn run_pipeline(
    base: &Maniplex,
    base_name: &str,
    set: &[usize],
    eta: &Perm,
    phi0: u32,
    k: Option<usize>,
    eta_source: EtaSource,
    opts: &ConstructOptions,
) -> Result<Pipeline> {
    let n = base.rank();
    let set = normalise_set(n + 1, set)?;
    if set.contains(&0) {
        return Err(Error::InvalidSet(
            "the layered construction needs 0 ∉ I".into(),
        ));
    }
    if set.len() == n {
        return Err(Error::InvalidSet(
            "I must be a proper subset of {1..n}".into(),
        ));
    }
    if n < 2 {
        return Err(Error::Precondition("base rank must be at least 2".into()));
    }
    if eta.degree() != base.flag_count() || !eta.is_involution() {
        return Err(Error::Precondition(
            "η must be an involution on the flags of the base".into(),
        ));
    }
    let base_set: Vec<usize> = set.iter().copied().filter(|&i| i < n).collect();
    let colouring = bicolouring_from(base, &base_set, phi0)?.ok_or_else(|| {
        Error::Construction(format!(
            "base has no bi-colouring for {{{}}}",
            join(&base_set)
        ))
    })?;
    let facets = base.facets();
    let white_count = colouring.white_flags().len();
    let k = k.unwrap_or(2 * white_count + 1);
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let points = white_count
        .checked_mul(2 * k)
        .filter(|&p| p <= opts.flag_cap && p < u32::MAX as usize);
    if points.is_none() {
        return Err(Error::CapExceeded {
            which: "points",
            limit: opts.flag_cap,
        });
    }
    let xw = XwSpace::new(&colouring, k);
    xw.lift(eta)
        .map_err(|_| Error::Construction("η does not preserve the bi-colouring".into()))?;
    let bf = assign_base_flags(base, &facets, &colouring, eta, phi0)?;
    let rho0t = tilde_rho0(base, &bf.base)?;
    let yn = build_yn(base, &facets, &rho0t, &bf, &xw);
    let generators = build_generators(base, &set, &xw, &yn)?;
    let relations = check_relations(&generators);
    let zeta = voltage_2in_unchecked(&generators)?;
    let simple = zeta.cover_is_simple();
    let mu = mu_certificate(base, &xw, eta, &yn, phi0)?;

    let hgens = h_generators(base, &set);
    let eta_word = h_word(&hgens, phi0, eta.apply(phi0));
    let has_zp = set.contains(&1);
    let (witness_matches, lift) = match &eta_word {
        Some(w) => {
            let ny = Letter {
                gen: generators.y.len() + has_zp as usize,
                inverse: false,
            };
            let mut mu_word = w.clone();
            mu_word.push(ny);
            mu_word.extend_from_within(..);
            let image = zeta.group.eval(&tau_word(&mu_word, has_zp));
            let swap = two_vertex_swap(&zeta.base)?;
            (
                Some(image == mu.nu),
                lift_obstruction(&zeta, &swap, &[mu_word]),
            )
        }
        None => (None, LiftVerdict::Unknown),
    };
    Ok(Pipeline {
        base_name: base_name.to_string(),
        set,
        k,
        eta_source,
        base_flags: bf,
        generators,
        relations,
        simple,
        mu,
        eta_word,
        witness_matches,
        lift,
    })
}

/// Colour-preserving involutions of `Mon(M)` moving the facet of `Φ_0`, for
/// regular `M`, ordered by a breadth-first search of their image of `Φ_0`.
pub fn eta_candidates(m: &Maniplex, c: &BiColouring, phi0: u32) -> Vec<Perm> {
    let facets = m.facets();
    let (order, parent) = bfs_tree(m, phi0);
    order
        .iter()
        .filter(|&&t| {
            c.is_white(t) && facets.class_of[t as usize] != facets.class_of[phi0 as usize]
        })
        .map(|&t| m.word_perm(&word_to(&parent, phi0, t)))
        .filter(Perm::is_involution)
        .collect()
}

/// The layered construction with base `M_{n_out - 1}`: `η` from a rigid
/// facet set of `M_{n_out - 2}` when one exists, otherwise the first searched
/// involution that yields a certificate.
pub fn layered_for_rank(n_out: usize, set: &[usize], opts: &ConstructOptions) -> Result<Pipeline> {
    if n_out < 3 {
        return Err(Error::Precondition("output rank must be at least 3".into()));
    }
    let n = n_out - 1;
    let base = build_mn(n, opts.flag_cap)?;
    let name = format!("M_{n}");
    let parent = build_mn(n - 1, opts.flag_cap)?;
    let s0 = find_s0(
        &parent,
        S0Search {
            exec: opts.exec,
            seed: opts.seed,
            ..S0Search::default()
        },
    )?;
    if let Some(s0) = s0 {
        let pf = parent.facets();
        let f0 = s0[0];
        let phi0p = pf.first_flags()[f0];
        let eta = build_eta_with(&parent, &s0, f0, phi0p, opts.exec)?;
        let perm = eta.as_two_hat_perm(parent.flag_count());
        let phi0 = two_hat_flag(parent.flag_count(), phi0p, 0);
        return run_pipeline(
            &base,
            &name,
            set,
            &perm,
            phi0,
            opts.k,
            EtaSource::RigidFacets { s0 },
            opts,
        );
    }
    let set_n = normalise_set(n_out, set)?;
    let base_set: Vec<usize> = set_n.iter().copied().filter(|&i| i < n).collect();
    let colouring = bicolouring_from(&base, &base_set, 0)?
        .ok_or_else(|| Error::Construction("base has no consistent bi-colouring".into()))?;
    let cands = eta_candidates(&base, &colouring, 0);
    if cands.is_empty() {
        return Err(Error::Construction(
            "no colour-preserving involution moves the base facet".into(),
        ));
    }
    let inner = ConstructOptions {
        exec: Exec::Sequential,
        ..opts.clone()
    };
    let run = |i: usize| {
        run_pipeline(
            &base,
            &name,
            &set_n,
            &cands[i],
            0,
            opts.k,
            EtaSource::Search { index: i },
            &inner,
        )
    };
    if let Some((_, p)) = opts
        .exec
        .find_first(cands.len(), |i| run(i).ok().filter(Pipeline::is_certified))
    {
        return Ok(p);
    }
    run(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    Uncertified,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Certified => "certified",
            Verdict::Uncertified => "uncertified",
        })
    }
}

/// Flat `key=value` evidence that a construction has type `2_I^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoOrbitCertificate {
    pub rank: usize,
    pub set: Vec<usize>,
    /// `layered`, `catalogue`, `procedure-1` or `procedure-2`.
    pub route: String,
    pub base: String,
    pub fields: Vec<(String, String)>,
    pub verdict: Verdict,
}

impl TwoOrbitCertificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    /// Looks up any key, including `rank`, `set`, `route`, `base`, `verdict`.
    pub fn get(&self, key: &str) -> Option<String> {
        self.lines()
            .into_iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v)
    }

    fn lines(&self) -> Vec<(String, String)> {
        let chiral = self.set.is_empty();
        let ty = Class::TwoOrbit {
            set: self.set.clone(),
            chiral,
        }
        .descriptor(self.rank);
        let mut out = vec![
            ("rank".to_string(), self.rank.to_string()),
            ("set".to_string(), join(&self.set)),
            ("type".to_string(), ty),
            ("route".to_string(), self.route.clone()),
            ("base".to_string(), self.base.clone()),
        ];
        out.extend(self.fields.iter().cloned());
        out.push(("verdict".to_string(), self.verdict.to_string()));
        out
    }

    pub fn to_text(&self) -> String {
        self.lines()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect()
    }
}

impl fmt::Display for TwoOrbitCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub certificate: TwoOrbitCertificate,
    /// The maniplex itself when it fits the caps.
    pub maniplex: Option<Maniplex>,
    pub pipeline: Option<Pipeline>,
}

/// Brute-force check that `m` has two flag orbits of type `2_I^n`.
pub fn verify_two_orbit(m: &Maniplex, set: &[usize]) -> Result<bool> {
    let want = Class::TwoOrbit {
        set: set.to_vec(),
        chiral: set.is_empty(),
    };
    if !m.is_valid() || classify(m) != want {
        return Ok(false);
    }
    let stg = symmetry_type_graph(m);
    Ok(find_isomorphism(&stg.graph, &make_2in(m.rank(), set)?).is_some())
}

/// A maniplex of type `2_I^{n_out}` with its certificate.
///
/// Rank 3 comes from the catalogue; `0 ∈ I` recurses through procedure 2
/// (or 1 on request); `n_out - 1 ∈ I` through procedure 1; everything else
/// runs the layered construction.
pub fn construct_two_orbit(
    n_out: usize,
    set: &[usize],
    opts: &ConstructOptions,
) -> Result<Construction> {
    if n_out < 3 {
        return Err(Error::Precondition("output rank must be at least 3".into()));
    }
    let set = normalise_set(n_out, set)?;
    if set.len() == n_out {
        return Err(Error::InvalidSet(format!(
            "I must be a proper subset of {{0..{}}}",
            n_out - 1
        )));
    }
    let top = n_out - 1;
    match opts.procedure {
        Procedure::One if !set.contains(&top) => {
            return Err(Error::InvalidSet(format!("procedure 1 needs {top} ∈ I")));
        }
        Procedure::Two if !set.contains(&0) => {
            return Err(Error::InvalidSet("procedure 2 needs 0 ∈ I".into()));
        }
        _ => {}
    }
    if n_out == 3 {
        return catalogue_route(&set, opts);
    }
    let proc_two = set.contains(&0) && opts.procedure != Procedure::One;
    if proc_two {
        return extension_route(n_out, &set, Procedure::Two, opts);
    }
    if set.contains(&top) {
        return extension_route(n_out, &set, Procedure::One, opts);
    }
    let p = layered_for_rank(n_out, &set, opts)?;
    let mut cert = p.certificate();
    let mut maniplex = None;
    if opts.materialize_cap > 0 {
        match cover_maniplex(&p.voltage()?, opts.materialize_cap.min(opts.flag_cap / 2)) {
            Ok((m, _)) => {
                let ok = verify_two_orbit(&m, &set)?;
                cert.fields.push((
                    "materialised".into(),
                    if ok { "pass" } else { "fail" }.into(),
                ));
                if ok {
                    cert.verdict = Verdict::Certified;
                }
                maniplex = Some(m);
            }
            Err(Error::CapExceeded { .. }) => {
                cert.fields.push(("materialised".into(), "skipped".into()))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Construction {
        certificate: cert,
        maniplex,
        pipeline: Some(p),
    })
}

fn catalogue_route(set: &[usize], opts: &ConstructOptions) -> Result<Construction> {
    let e = find_two_orbit_rank3(set, opts.exec)?;
    let ok = verify_two_orbit(&e.maniplex, set)?;
    let cert = TwoOrbitCertificate {
        rank: 3,
        set: set.to_vec(),
        route: "catalogue".into(),
        base: e.name,
        fields: vec![
            ("flags".into(), e.maniplex.flag_count().to_string()),
            ("check".into(), if ok { "pass" } else { "fail" }.into()),
        ],
        verdict: if ok {
            Verdict::Certified
        } else {
            Verdict::Uncertified
        },
    };
    Ok(Construction {
        certificate: cert,
        maniplex: Some(e.maniplex),
        pipeline: None,
    })
}

fn extension_route(
    n_out: usize,
    set: &[usize],
    proc: Procedure,
    opts: &ConstructOptions,
) -> Result<Construction> {
    let top = n_out - 1;
    let (inner_set, label): (Vec<usize>, &str) = match proc {
        Procedure::Two => (
            set.iter().filter(|&&i| i > 0).map(|&i| i - 1).collect(),
            "procedure-2",
        ),
        _ => (
            set.iter().copied().filter(|&i| i != top).collect(),
            "procedure-1",
        ),
    };
    let inner_opts = ConstructOptions {
        procedure: Procedure::Auto,
        ..opts.clone()
    };
    let inner = construct_two_orbit(n_out - 1, &inner_set, &inner_opts)?;
    let mut fields: Vec<(String, String)> = Vec::new();
    let mut maniplex = None;
    let mut verdict = inner.certificate.verdict;
    if let Some(m) = &inner.maniplex {
        let src = if proc == Procedure::Two {
            m.dual()
        } else {
            m.clone()
        };
        if src.facets().count < 2 {
            return Err(Error::Construction(
                "the inner maniplex has a single facet".into(),
            ));
        }
        match two_hat(&src, opts.flag_cap) {
            Ok(h) => {
                let out = if proc == Procedure::Two { h.dual() } else { h };
                fields.push(("flags".into(), out.flag_count().to_string()));
                if out.flag_count() <= BRUTE_FORCE_FLAGS {
                    let ok = verify_two_orbit(&out, set)?;
                    fields.push(("check".into(), if ok { "pass" } else { "fail" }.into()));
                    verdict = if ok {
                        Verdict::Certified
                    } else {
                        Verdict::Uncertified
                    };
                } else {
                    fields.push(("check".into(), "skipped".into()));
                }
                maniplex = Some(out);
            }
            Err(Error::CapExceeded { .. }) => fields.push(("check".into(), "skipped".into())),
            Err(e) => return Err(e),
        }
    }
    for (k, v) in inner.certificate.lines() {
        fields.push((format!("from.{k}"), v));
    }
    let cert = TwoOrbitCertificate {
        rank: n_out,
        set: set.to_vec(),
        route: label.into(),
        base: inner.certificate.base.clone(),
        fields,
        verdict,
    };
    Ok(Construction {
        certificate: cert,
        maniplex,
        pipeline: inner.pipeline,
    })
}
