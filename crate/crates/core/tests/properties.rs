//! Randomized and exhaustively enumerated laws that the library promises
//! beyond the golden examples: relation axioms for crossing and
//! equivalence, closure-operator laws, the cyclic-set split under
//! disconnected restriction, rank formulas tying vertex sets to incident
//! propagators, and realization-side cross-checks (Vandermonde minors,
//! rank vs definedness, probe soundness, shared row spaces at n = 8).

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;
use proptest::test_runner::{Config as PropConfig, TestRunner};

use wlp_core::bits;
use wlp_core::diagram::{
    are_exact_equivalent, untangle, DefinednessClass, Propagator, WilsonDiagram,
};
use wlp_core::linalg::Mat;
use wlp_core::matroid::{self, matroids_equal, Matroid};
use wlp_core::realization::{
    build_realization, check_rank_theorems, matroid_of_matrix, probe_nonnegativity,
    rowspace_equal, seeded_config, ProbeOutcome, TwistorConfig,
};
use wlp_core::wilson::{build_matroid, propagator_flat, WilsonMatroid};
use wlp_core::Rat;

fn rint(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

/// All unordered pairs of distinct boundary edges, in lexicographic order.
fn all_propagators(n: usize) -> Vec<Propagator> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            out.push(Propagator::new(i, j, n).unwrap());
        }
    }
    out
}

/// Index combinations `k` out of `m` in lexicographic order.
fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = k - cur.len();
        for i in start..=(m - need) {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= m {
        rec(0, m, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Every diagram on `n` vertices with exactly `k` propagators.
fn diagrams(n: usize, k: usize) -> Vec<WilsonDiagram> {
    let props = all_propagators(n);
    combinations(props.len(), k)
        .into_iter()
        .map(|idx| {
            let chosen: Vec<Propagator> = idx.iter().map(|&i| props[i]).collect();
            WilsonDiagram::new(n, chosen).unwrap()
        })
        .collect()
}

/// Well-defined diagrams with exactly `k` propagators.
fn well_defined(n: usize, k: usize) -> Vec<WilsonDiagram> {
    diagrams(n, k).into_iter().filter(|w| w.is_well_defined()).collect()
}

/// Shared enumeration of well-defined diagrams with their matroids:
/// n = 5, 6 up to three propagators and n = 7 up to two, plus the
/// propagator-free diagrams. Built once per process.
static POOL: OnceLock<Vec<(WilsonDiagram, WilsonMatroid)>> = OnceLock::new();

fn wilson_pool() -> &'static [(WilsonDiagram, WilsonMatroid)] {
    POOL.get_or_init(|| {
        let mut out = Vec::new();
        for (n, kmax) in [(5usize, 3usize), (6, 3), (7, 2)] {
            for k in 0..=kmax {
                for w in well_defined(n, k) {
                    let wm = build_matroid(&w).unwrap();
                    out.push((w, wm));
                }
            }
        }
        out
    })
}

fn prop_runner(cases: u32) -> TestRunner {
    TestRunner::new(PropConfig { cases, failure_persistence: None, ..PropConfig::default() })
}

/// Arbitrary diagram: any propagator subset, including overdefined ones.
fn arb_diagram() -> BoxedStrategy<WilsonDiagram> {
    (4usize..=9, proptest::collection::vec(any::<usize>(), 0..=4))
        .prop_map(|(n, picks)| {
            let pool = all_propagators(n);
            let mut props: Vec<Propagator> = Vec::new();
            for pick in picks {
                let p = pool[pick % pool.len()];
                if !props.contains(&p) {
                    props.push(p);
                }
            }
            WilsonDiagram::new(n, props).unwrap()
        })
        .boxed()
}

/// Arbitrary well-defined diagram: overdefined witnesses are deleted one
/// propagator at a time until the definedness test passes.
fn arb_well_defined() -> BoxedStrategy<WilsonDiagram> {
    arb_diagram()
        .prop_map(|mut w| {
            loop {
                match w.classify_definedness() {
                    DefinednessClass::Overdefined { witness } => {
                        let drop = witness.trailing_zeros() as usize;
                        let props: Vec<Propagator> = w
                            .props()
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| *i != drop)
                            .map(|(_, &p)| p)
                            .collect();
                        w = WilsonDiagram::new(w.n(), props).unwrap();
                    }
                    _ => return w,
                }
            }
        })
        .boxed()
}

/// Matroids from three sources: uniform, Wilson diagrams, and explicit
/// rational matrices.
fn arb_matroid() -> BoxedStrategy<Matroid> {
    let uniform = (0usize..=8)
        .prop_flat_map(|n| (0..=n, Just(n)))
        .prop_map(|(k, n)| matroid::uniform(k, n));
    let wilson = arb_well_defined().prop_map(|w| build_matroid(&w).unwrap().matroid().clone());
    let matrix = (1usize..=3, 4usize..=7)
        .prop_flat_map(|(k, n)| (proptest::collection::vec(-3i64..=3, k * n), Just(k), Just(n)))
        .prop_filter_map("matrix must have full row rank", |(entries, k, n)| {
            let rows: Vec<Vec<Rat>> =
                (0..k).map(|r| (0..n).map(|c| rint(entries[r * n + c])).collect()).collect();
            matroid_of_matrix(&Mat::from_rows(rows).unwrap()).ok()
        });
    prop_oneof![2 => wilson, 2 => matrix, 1 => uniform].boxed()
}

/// Rotates every label by `r` steps around the cycle.
fn rotated(w: &WilsonDiagram, r: usize) -> WilsonDiagram {
    let n = w.n();
    let rot = |v: usize| (v - 1 + r) % n + 1;
    let props: Vec<Propagator> =
        w.props().iter().map(|p| Propagator::new(rot(p.i()), rot(p.j()), n).unwrap()).collect();
    WilsonDiagram::new(n, props).unwrap()
}

#[test]
fn crossing_is_symmetric_and_irreflexive() {
    prop_runner(500)
        .run(&arb_diagram(), |w| {
            let n = w.n();
            for p in w.props() {
                prop_assert!(!p.crosses(p, n));
                for q in w.props() {
                    prop_assert_eq!(p.crosses(q, n), q.crosses(p, n));
                }
            }
            // Every listed crossing pair really crosses, and the list
            // covers each unordered crossing exactly once.
            let listed = w.crossing_pairs();
            for (p, q) in &listed {
                prop_assert!(p.crosses(q, n));
            }
            let count = w
                .props()
                .iter()
                .enumerate()
                .flat_map(|(i, p)| w.props()[i + 1..].iter().map(move |q| (p, q)))
                .filter(|(p, q)| p.crosses(q, n))
                .count();
            prop_assert_eq!(listed.len(), count);
            Ok(())
        })
        .unwrap();
}

#[test]
fn rotation_preserves_crossings_and_definedness() {
    prop_runner(500)
        .run(&(arb_diagram(), any::<usize>()), |(w, raw)| {
            let r = raw % w.n();
            let rw = rotated(&w, r);
            prop_assert_eq!(rw.crossing_pairs().len(), w.crossing_pairs().len());
            let class = |d: &WilsonDiagram| {
                let c = d.classify_definedness();
                (c.is_well_defined(), c.is_exact())
            };
            prop_assert_eq!(class(&rw), class(&w));
            Ok(())
        })
        .unwrap();
}

#[test]
fn subdiagrams_and_contractions_of_well_defined_are_well_defined() {
    prop_runner(300)
        .run(&arb_well_defined(), |w| {
            for ps in bits::subsets_of(w.all_props() as u32) {
                prop_assert!(w.restrict(ps as u16).is_well_defined());
                prop_assert!(w.contract(ps as u16).0.is_well_defined());
            }
            Ok(())
        })
        .unwrap();
}

/// Full pairwise equivalence matrix over one enumerated pool.
fn equivalence_matrix(pool: &[WilsonDiagram]) -> Vec<Vec<bool>> {
    let m = pool.len();
    let mut rel = vec![vec![false; m]; m];
    for i in 0..m {
        rel[i][i] = are_exact_equivalent(&pool[i], &pool[i]).unwrap();
        for j in i + 1..m {
            rel[i][j] = are_exact_equivalent(&pool[i], &pool[j]).unwrap();
            rel[j][i] = rel[i][j];
        }
    }
    rel
}

#[test]
fn exact_equivalence_is_an_equivalence_relation() {
    // Both argument orders over the smaller pools: the function must be
    // symmetric as called, not just symmetric after canonicalization.
    for (n, k) in [(5usize, 2usize), (6, 2)] {
        let pool = well_defined(n, k);
        for i in 0..pool.len() {
            assert!(are_exact_equivalent(&pool[i], &pool[i]).unwrap(), "reflexive {}", pool[i]);
            for j in i + 1..pool.len() {
                let ij = are_exact_equivalent(&pool[i], &pool[j]).unwrap();
                let ji = are_exact_equivalent(&pool[j], &pool[i]).unwrap();
                assert_eq!(ij, ji, "symmetry {} vs {}", pool[i], pool[j]);
            }
        }
    }
    // Transitivity over the densest small pool.
    let pool = well_defined(6, 3);
    let rel = equivalence_matrix(&pool);
    let m = pool.len();
    let mut classes = 0usize;
    for i in 0..m {
        assert!(rel[i][i], "reflexive {}", pool[i]);
        for j in 0..m {
            if !rel[i][j] {
                continue;
            }
            classes += 1;
            for l in 0..m {
                if rel[j][l] {
                    assert!(rel[i][l], "transitivity {} ~ {} ~ {}", pool[i], pool[j], pool[l]);
                }
            }
        }
    }
    // Some diagrams must relate beyond themselves or the pool is inert.
    assert!(classes > m, "no nontrivial equivalences among {m} diagrams");
}

#[test]
fn untangle_yields_uncrossed_equivalent_diagrams() {
    let mut produced = 0usize;
    for (n, k) in [(5usize, 2usize), (6, 2), (6, 3), (7, 2)] {
        for w in well_defined(n, k) {
            match untangle(&w) {
                Ok(u) => {
                    produced += 1;
                    assert!(u.crossing_pairs().is_empty(), "untangled {} still crosses", w);
                    assert!(
                        are_exact_equivalent(&w, &u).unwrap(),
                        "untangled {} not equivalent to {}",
                        u,
                        w
                    );
                }
                // No witness under the preconditions is a logged outcome,
                // not a broken law; crossing diagrams without exact
                // covering families land here.
                Err(_) => {}
            }
        }
    }
    assert!(produced > 100, "untangle produced only {produced} outputs");
}

#[test]
fn closure_is_extensive_monotone_and_idempotent() {
    prop_runner(500)
        .run(&(arb_matroid(), any::<u32>(), any::<u32>()), |(m, ra, rb)| {
            let full = bits::full(m.ground_size());
            let s = ra & full;
            let t = s | (rb & full);
            let cs = m.closure(s);
            prop_assert_eq!(s & cs, s, "extensive");
            prop_assert_eq!(m.closure(t) & cs, cs, "monotone");
            prop_assert_eq!(m.closure(cs), cs, "idempotent");
            Ok(())
        })
        .unwrap();
}

#[test]
fn flats_are_exactly_the_closure_fixed_points() {
    prop_runner(400)
        .run(&(arb_matroid(), any::<u32>()), |(m, raw)| {
            let s = raw & bits::full(m.ground_size());
            prop_assert_eq!(m.is_flat(s), m.closure(s) == s);
            if m.ground_size() <= 6 {
                let listed = m.flats().unwrap();
                let scanned: Vec<u32> = (0..=bits::full(m.ground_size()))
                    .filter(|&f| m.closure(f) == f)
                    .collect();
                prop_assert_eq!(listed, scanned);
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn disconnected_cyclic_sets_split_into_cyclic_parts() {
    // A cyclic set whose restriction is disconnected splits along the
    // restriction's components; every part is again cyclic, and in the
    // loop-free case one component against the rest gives two cyclic
    // flats of the restriction. Loops inside the restriction are the
    // real obstruction to flatness: every flat must contain them, so two
    // disjoint parts cannot both be flats once a loop is present.
    let mut loop_free = 0usize;
    let mut loopy = 0usize;
    for (_, wm) in wilson_pool() {
        let m = wm.matroid();
        let full = bits::full(m.ground_size());
        for c in 1..=full {
            if !m.is_cyclic_set(c) {
                continue;
            }
            let (rest, _) = m.restrict(c);
            let comps = rest.components();
            if comps.len() < 2 {
                continue;
            }
            for &part in &comps {
                assert!(rest.is_cyclic_set(part), "component {part:#b} of {c:#b} not cyclic");
            }
            let first = comps[0];
            let others = bits::full(rest.ground_size()) & !first;
            assert!(rest.is_cyclic_set(others));
            let has_loop = (1..=rest.ground_size()).any(|e| rest.rank(bits::single(e)) == 0);
            if has_loop {
                loopy += 1;
            } else {
                loop_free += 1;
                assert!(rest.is_flat(first), "part {first:#b} of {c:#b} not a flat");
                assert!(rest.is_flat(others), "part {others:#b} of {c:#b} not a flat");
            }
        }
    }
    assert!(loop_free > 50, "loop-free split cases: {loop_free}");
    assert!(loopy > 50, "loopy split cases: {loopy}");
}

#[test]
fn circuit_and_cyclic_set_ranks_count_incident_propagators() {
    for (w, wm) in wilson_pool() {
        let m = wm.matroid();
        for c in m.circuits() {
            assert_eq!(
                m.rank(c),
                w.prop_of(c).count_ones() as usize,
                "circuit {c:#b} of {w}"
            );
        }
        let full = bits::full(m.ground_size());
        for s in 0..=full {
            if m.is_cyclic_set(s) {
                assert_eq!(
                    m.rank(s),
                    w.prop_of(s).count_ones() as usize,
                    "cyclic set {s:#b} of {w}"
                );
            }
        }
    }
}

#[test]
fn cyclic_flats_are_propagator_flats_with_loops() {
    // Every nonempty cyclic flat is some F(P) joined with the loops
    // F(∅), and the flat outgrows the propagator set. The empty cyclic
    // flat appears exactly when no vertex is untouched.
    for (w, wm) in wilson_pool() {
        let m = wm.matroid();
        let loops = propagator_flat(w, 0).flat;
        for f in m.cyclic_flats().unwrap() {
            if f == 0 {
                assert_eq!(loops, 0, "empty cyclic flat but loops exist in {w}");
                continue;
            }
            let found = bits::subsets_of(w.all_props() as u32).any(|ps| {
                propagator_flat(w, ps as u16).flat | loops == f
                    && (ps.count_ones() as usize) < (f.count_ones() as usize)
            });
            assert!(found, "cyclic flat {f:#b} of {w} is not a propagator flat");
        }
    }
}

#[test]
fn propagator_flats_joined_with_loops_are_flats() {
    for (w, wm) in wilson_pool() {
        let m = wm.matroid();
        let loops = propagator_flat(w, 0).flat;
        for ps in bits::subsets_of(w.all_props() as u32) {
            let f = propagator_flat(w, ps as u16).flat | loops;
            assert!(m.is_flat(f), "F({ps:#b}) ∪ loops = {f:#b} not a flat in {w}");
        }
    }
}

#[test]
fn independent_sets_are_bases_of_propagator_restrictions() {
    // An independent set stays independent in the diagram restricted to
    // its incident propagators, and some restriction to exactly |B|
    // incident propagators has B as a basis.
    let mut pool = Vec::new();
    for (n, kmax) in [(5usize, 3usize), (6, 2)] {
        for k in 1..=kmax {
            pool.extend(well_defined(n, k));
        }
    }
    for w in &pool {
        let m = build_matroid(w).unwrap().matroid().clone();
        let mut restrictions: HashMap<u16, Matroid> = HashMap::new();
        let mut restricted = |w: &WilsonDiagram, ps: u16| -> Matroid {
            restrictions
                .entry(ps)
                .or_insert_with(|| build_matroid(&w.restrict(ps)).unwrap().matroid().clone())
                .clone()
        };
        for b in 1..=bits::full(w.n()) {
            if !m.is_independent(b) {
                continue;
            }
            let incident = w.prop_of(b);
            assert!(
                restricted(w, incident).is_independent(b),
                "{b:#b} dependent after restricting {w} to {incident:#b}"
            );
            let size = b.count_ones();
            let witness = bits::subsets_of(incident as u32)
                .filter(|ps| ps.count_ones() == size)
                .any(|ps| restricted(w, ps as u16).is_basis(b));
            assert!(witness, "{b:#b} is a basis of no |B|-propagator restriction of {w}");
        }
    }
}

#[test]
fn positroid_oracles_agree_on_random_matroids() {
    prop_runner(300)
        .run(&arb_matroid(), |m| {
            prop_assert_eq!(m.is_positroid(), m.necklace_positroid_oracle());
            Ok(())
        })
        .unwrap();
}

#[test]
fn direct_sum_restricts_to_summands_and_concatenates_components() {
    let small = arb_matroid().prop_filter("small enough to sum", |m| m.ground_size() <= 5);
    prop_runner(300)
        .run(&(small.clone(), small), |(a, b)| {
            let sum = a.direct_sum(&b).unwrap();
            let block_a = bits::full(a.ground_size());
            let block_b = bits::full(sum.ground_size()) & !block_a;
            prop_assert!(matroids_equal(&sum.restrict(block_a).0, &a));
            prop_assert!(matroids_equal(&sum.restrict(block_b).0, &b));
            let mut expected: Vec<u32> = a
                .components()
                .into_iter()
                .chain(b.components().into_iter().map(|c| c << a.ground_size()))
                .collect();
            expected.sort_by_key(|c| c.trailing_zeros());
            prop_assert_eq!(sum.components(), expected);
            Ok(())
        })
        .unwrap();
}

#[test]
fn vandermonde_minors_match_the_product_formula() {
    // Any four momentum rows of a generated configuration form a
    // Vandermonde block in the curve parameters; its determinant must
    // equal the pairwise difference product exactly.
    prop_runner(200)
        .run(
            &(5usize..=8, 1usize..=3, any::<u64>(), any::<u32>()),
            |(n, k, seed, pick)| {
                let z = seeded_config(n, k, seed).unwrap();
                let start = pick as usize % n;
                let stride = 1 + pick as usize % (n - 1);
                let mut chosen: Vec<usize> = Vec::new();
                for step in 0..n {
                    let c = (start + step * stride) % n;
                    if !chosen.contains(&c) {
                        chosen.push(c);
                    }
                    if chosen.len() == 4 {
                        break;
                    }
                }
                prop_assume!(chosen.len() == 4);
                chosen.sort_unstable();
                let block = z.momentum().submatrix(&chosen, &[0, 1, 2, 3]).unwrap();
                let det = block.det().unwrap();
                let mut product = Rat::one();
                for a in 0..4 {
                    for b in a + 1..4 {
                        product *= z.t()[chosen[b]].clone() - z.t()[chosen[a]].clone();
                    }
                }
                prop_assert_eq!(det, product);
                Ok(())
            },
        )
        .unwrap();
}

#[test]
fn realized_rank_matches_definedness() {
    prop_runner(150)
        .run(&(arb_diagram(), any::<u64>()), |(w, seed)| {
            prop_assume!(w.n() <= 7 && w.k() >= 1 && w.k() <= 3);
            let z = seeded_config(w.n(), w.k(), seed).unwrap();
            let report = check_rank_theorems(&w, &z).unwrap();
            prop_assert!(report.consistent);
            prop_assert_eq!(report.rank == w.k(), report.well_defined);
            prop_assert_eq!(report.well_defined, w.is_well_defined());
            Ok(())
        })
        .unwrap();
}

#[test]
fn probe_never_witnesses_a_non_positroid() {
    let mut checked = 0usize;
    let mut pool: Vec<WilsonDiagram> = wilson_pool().iter().map(|(w, _)| w.clone()).collect();
    pool.extend(well_defined(8, 2));
    for w in &pool {
        if w.k() == 0 {
            continue;
        }
        let wm = build_matroid(w).unwrap();
        if wm.wilson_is_positroid().unwrap() {
            continue;
        }
        checked += 1;
        let configs: Vec<TwistorConfig> =
            [5u64, 6].iter().map(|&s| seeded_config(w.n(), w.k(), s).unwrap()).collect();
        let outcome = probe_nonnegativity(w, &configs).unwrap();
        assert_eq!(outcome, ProbeOutcome::Inconclusive, "witness for non-positroid {w}");
    }
    assert!(checked > 10, "non-positroid probe pool too small: {checked}");
}

#[test]
fn equivalent_eight_point_pairs_share_matroid_and_rowspace() {
    // Exhaustive pairwise check at n = 8, k = 2; smaller n is swept by
    // the acceptance gate. Equivalent diagrams must agree as matroids
    // and span the same row space at every generated configuration.
    let pool = well_defined(8, 2);
    let configs: Vec<TwistorConfig> =
        [17u64, 18].iter().map(|&s| seeded_config(8, 2, s).unwrap()).collect();
    let mut cache: Vec<Option<(Matroid, Vec<wlp_core::QMat>)>> = vec![None; pool.len()];
    let fill = |idx: usize, cache: &mut Vec<Option<(Matroid, Vec<wlp_core::QMat>)>>| {
        if cache[idx].is_none() {
            let w = &pool[idx];
            let matroid = build_matroid(w).unwrap().matroid().clone();
            let mats: Vec<wlp_core::QMat> =
                configs.iter().map(|z| build_realization(w, z).unwrap().m).collect();
            cache[idx] = Some((matroid, mats));
        }
    };
    let mut pairs = 0usize;
    for i in 0..pool.len() {
        for j in i + 1..pool.len() {
            if !are_exact_equivalent(&pool[i], &pool[j]).unwrap() {
                continue;
            }
            pairs += 1;
            fill(i, &mut cache);
            fill(j, &mut cache);
            let (mi, zi) = cache[i].as_ref().unwrap();
            let (mj, zj) = cache[j].as_ref().unwrap();
            assert!(matroids_equal(mi, mj), "{} ~ {} but matroids differ", pool[i], pool[j]);
            for (a, b) in zi.iter().zip(zj) {
                assert!(
                    rowspace_equal(a, b),
                    "{} ~ {} but row spaces differ",
                    pool[i],
                    pool[j]
                );
            }
        }
    }
    assert!(pairs > 10, "equivalent eight-point pairs: {pairs}");
}
