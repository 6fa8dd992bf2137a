//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line. Run with `cargo test --test acceptance -- --nocapture` to see the
//! lines.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use clustertree::fixtures::{
    bimodal_mixture_1d, pinch_complex, random_complex, random_dendrogram, random_f_int_complex,
    step_chain_tree, step_chain_tree_decorated,
};
use clustertree::grid::{candidate_anchors, cell_contact, is_lattice_anchor_units, Contact};
use clustertree::rational::{ratio, rational_zero, Rational};
use clustertree::{
    axiom_tree, convergence_experiment, enumerate_axiom_clusters, merge_distortion,
    merge_height_maximin, split_fixture, sweep_tree, Adjacency, RegionComplex, ShiftedGrid,
};

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

/// Criterion 1: over at least 200 random complexes with up to 10 regions
/// (random levels, random touch graphs with random neighbor subgraphs,
/// conditioned on neighbor connectivity), the brute-force enumeration of
/// axiom clusters equals the sweep-built axiom tree's node set exactly.
#[test]
fn criterion_01_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut checked = 0;
    for _ in 0..200 {
        let complex = random_complex(&mut rng, 10, 0.4, 0.5);
        let oracle = enumerate_axiom_clusters(&complex).expect("within enumeration cap");
        let sweep = axiom_tree(&complex).expect("complex is in F");
        if oracle.clusters != sweep.cluster_set() {
            report("1 (oracle equivalence)", false, "node sets differ");
        }
        checked += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        "1 (oracle equivalence)",
        checked == 200 && secs < 120.0,
        &format!("{checked} complexes, exact node-set equality, {secs:.1}s"),
    );
}

/// Criterion 2: over at least 200 random complexes with the internally
/// connected property, touch-sweep and neighbor-sweep node sets are
/// identical, with zero tolerance.
#[test]
fn criterion_02_sweeps_coincide_on_f_int() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for _ in 0..200 {
        let complex = random_f_int_complex(&mut rng, 10);
        let touch = sweep_tree(&complex, Adjacency::Touch).expect("connected");
        let neighbor = sweep_tree(&complex, Adjacency::Neighbor).expect("connected");
        if touch.cluster_set() != neighbor.cluster_set() {
            report("2 (sweeps coincide on F_int)", false, "node sets differ");
        }
    }
    report(
        "2 (sweeps coincide on F_int)",
        true,
        "200 complexes, exact set equality",
    );
}

/// Criterion 3: the pinch fixture reproduces both trees exactly: the
/// level-set tree chains {1} ⊂ {1,2} ⊂ {1,2,3} and the axiom tree keeps
/// {1}, {2}, {1,2,3}.
#[test]
fn criterion_03_pinch_fixture_trees() {
    let set = |ids: &[i64]| ids.iter().copied().collect::<BTreeSet<i64>>();
    let complex = pinch_complex();
    let level_set = sweep_tree(&complex, Adjacency::Touch).expect("connected");
    let axioms = axiom_tree(&complex).expect("in F");
    let expected_h: BTreeSet<_> = [set(&[1]), set(&[1, 2]), set(&[1, 2, 3])].into();
    let expected_c: BTreeSet<_> = [set(&[1]), set(&[2]), set(&[1, 2, 3])].into();
    let pass = level_set.cluster_set() == expected_h && axioms.cluster_set() == expected_c;
    report(
        "3 (pinch fixture)",
        pass,
        "H = {1},{1,2},{1,2,3}; C* = {1},{2},{1,2,3}",
    );
}

/// Criterion 4: the step-chain tree and its decorated variant are at merge
/// distortion exactly zero yet not isomorphic.
#[test]
fn criterion_04_zero_distance_non_isomorphic() {
    let plain = step_chain_tree();
    let decorated = step_chain_tree_decorated();
    let d = merge_distortion(&plain, &decorated).expect("same regions");
    let pass = d.value == rational_zero() && !plain.is_isomorphic(&decorated);
    report(
        "4 (pseudometric degeneracy)",
        pass,
        &format!("d_M = {} exactly, isomorphic = false", d.value),
    );
}

/// Criterion 5: 500 random perturbation pairs on shared complexes satisfy
/// the sup-norm bound on merge distortion in exact rational arithmetic, and
/// the uniform shift attains it with equality.
#[test]
fn criterion_05_sup_norm_bound_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    for _ in 0..500 {
        let complex = random_complex(&mut rng, 10, 0.4, 0.7);
        let mut sup: Rational = rational_zero();
        let perturbed: Vec<(i64, Rational)> = complex
            .regions()
            .iter()
            .map(|r| {
                // Signed perturbation small enough to keep levels positive.
                let eps = ratio(rng.random_range(-30..=30), 61) * &r.level / ratio(2, 1);
                let abs = if eps < rational_zero() { -eps.clone() } else { eps.clone() };
                if abs > sup {
                    sup = abs;
                }
                (r.id, &r.level + eps)
            })
            .collect();
        let touch: Vec<_> = complex.edges(Adjacency::Touch).iter().copied().collect();
        let neighbor: Vec<_> = complex
            .edges(Adjacency::Neighbor)
            .iter()
            .copied()
            .collect();
        let shifted = RegionComplex::from_abstract(perturbed, &touch, &neighbor)
            .expect("perturbed levels stay positive");
        let t1 = sweep_tree(&complex, Adjacency::Touch).expect("connected");
        let t2 = sweep_tree(&shifted, Adjacency::Touch).expect("connected");
        let d = merge_distortion(&t1, &t2).expect("same regions");
        if d.value > sup {
            report(
                "5 (sup-norm bound)",
                false,
                &format!("d_M = {} exceeds sup |f-g| = {}", d.value, sup),
            );
        }
    }

    // Tightness: a uniform shift moves the distance by exactly the shift.
    let complex = random_complex(&mut rng, 8, 0.4, 0.7);
    let delta = ratio(1, 12);
    let shifted: Vec<(i64, Rational)> = complex
        .regions()
        .iter()
        .map(|r| (r.id, &r.level + &delta))
        .collect();
    let touch: Vec<_> = complex.edges(Adjacency::Touch).iter().copied().collect();
    let neighbor: Vec<_> = complex
        .edges(Adjacency::Neighbor)
        .iter()
        .copied()
        .collect();
    let shifted = RegionComplex::from_abstract(shifted, &touch, &neighbor).expect("valid");
    let t1 = sweep_tree(&complex, Adjacency::Touch).expect("connected");
    let t2 = sweep_tree(&shifted, Adjacency::Touch).expect("connected");
    let d = merge_distortion(&t1, &t2).expect("same regions");
    report(
        "5 (sup-norm bound)",
        d.value == delta,
        "500 exact bound checks; uniform shift attains equality",
    );
}

/// Criterion 6: for the two-bump mixture at scales 0.5/0.25/0.125/0.0625
/// with 1000 sampled point pairs, every row's sampled merge distortion is
/// within its certified sup-norm bound, the distortion column is
/// non-increasing, and the final value is at most 0.02.
#[test]
fn criterion_06_convergence() {
    let start = Instant::now();
    let spec = bimodal_mixture_1d();
    let report_rows = convergence_experiment(&spec, &[0.5, 0.25, 0.125, 0.0625], 1000, 11, 6)
        .expect("experiment runs");
    let within = report_rows.all_rows_within_bound();
    let monotone = report_rows.d_m_non_increasing();
    let last = report_rows.rows.last().expect("rows").d_m_to_truth;
    let secs = start.elapsed().as_secs_f64();
    report(
        "6 (convergence)",
        within && monotone && last <= 0.02 && secs < 60.0,
        &format!(
            "all rows within bound = {within}, non-increasing = {monotone}, final d_M = {last:.5} <= 0.02, {secs:.1}s"
        ),
    );
}

/// Criterion 7: at scale 0.0625 the bimodal tree's split height matches the
/// dense-scan interior local-minimum value within L*scale*sqrt(d).
#[test]
fn criterion_07_split_height() {
    let spec = bimodal_mixture_1d();
    let split = split_fixture(&spec, 0.0625, 11).expect("splits");
    // Dense scan between the modes for the interior local minimum.
    let mut saddle = f64::INFINITY;
    for i in 0..=8000 {
        let x = -2.0 + 4.0 * i as f64 / 8000.0;
        saddle = saddle.min(spec.evaluate(&[x]));
    }
    let err = (split.split_height - saddle).abs();
    report(
        "7 (split height)",
        err <= split.tolerance,
        &format!(
            "split {:.6} vs saddle {saddle:.6}, |diff| = {err:.6} <= {:.6}",
            split.split_height, split.tolerance
        ),
    );
}

/// Criterion 8: grid laws for d in 1..=4: ten thousand random points locate
/// to a unique cell; sampled touching cell pairs share a positive-measure
/// facet; cell diameters equal scale*sqrt(d) to 1e-12.
#[test]
fn criterion_08_grid_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    for dim in 1..=4usize {
        let scale = 0.75;
        let grid = ShiftedGrid::new(dim, scale).expect("valid grid");
        let side = clustertree::grid::cell_side(dim);

        for _ in 0..10_000 {
            let p: Vec<f64> = (0..dim).map(|_| rng.random_range(-5.0..5.0)).collect();
            let found = grid.cell_of(&p).expect("locates");
            let b = grid.cell_box(&found).expect("valid anchor");
            if !b.contains(&p) {
                report("8 (grid laws)", false, "located cell misses the point");
            }
            if (b.diameter() - scale * (dim as f64).sqrt()).abs() > 1e-12 {
                report("8 (grid laws)", false, "diameter drift");
            }
            // Unique containment: a containing box must start within one
            // side of the point per axis, so scanning that window covers
            // every anchor within two scales that could contain it.
            let base: Vec<i64> = p
                .iter()
                .map(|&x| (x / scale * side as f64).floor() as i64)
                .collect();
            let mut owners = 0;
            let mut counter = vec![0i64; dim];
            'outer: loop {
                let units: Vec<i64> = base
                    .iter()
                    .zip(&counter)
                    .map(|(&b, &c)| b - c)
                    .collect();
                if is_lattice_anchor_units(&units) {
                    let cand = clustertree::CellId::from_units(units);
                    if grid.cell_box(&cand).expect("anchor").contains(&p) {
                        owners += 1;
                    }
                }
                let mut axis = 0;
                loop {
                    if axis == dim {
                        break 'outer;
                    }
                    counter[axis] += 1;
                    if counter[axis] <= side {
                        break;
                    }
                    counter[axis] = 0;
                    axis += 1;
                }
            }
            if owners != 1 {
                report(
                    "8 (grid laws)",
                    false,
                    &format!("{owners} anchors contain one point in d={dim}"),
                );
            }
        }

        // Touching pairs: sample pairs of nearby cells; whenever closures
        // intersect they must share a positive-measure facet (exactly one
        // zero-width axis). Dimension one's facets are points, positive in
        // counting measure.
        if dim >= 2 {
            let mut found_pairs = 0;
            while found_pairs < 1000 {
                let p: Vec<f64> = (0..dim).map(|_| rng.random_range(-5.0..5.0)).collect();
                let a = grid.cell_of(&p).expect("locates");
                let q: Vec<f64> = p
                    .iter()
                    .map(|&x| x + rng.random_range(-1.3 * scale..1.3 * scale))
                    .collect();
                let b = grid.cell_of(&q).expect("locates");
                if a == b || cell_contact(&a, &b) == Contact::None {
                    continue;
                }
                if cell_contact(&a, &b) != Contact::Facet {
                    report(
                        "8 (grid laws)",
                        false,
                        &format!("degenerate contact in d={dim}"),
                    );
                }
                found_pairs += 1;
            }
            // Exhaustive double-check around a few cells in d <= 3.
            if dim <= 3 {
                for _ in 0..20 {
                    let p: Vec<f64> = (0..dim).map(|_| rng.random_range(-5.0..5.0)).collect();
                    let a = grid.cell_of(&p).expect("locates");
                    for cand in candidate_anchors(a.units(), side) {
                        if cand == a || !is_lattice_anchor_units(cand.units()) {
                            continue;
                        }
                        if cell_contact(&a, &cand) == Contact::Degenerate {
                            report(
                                "8 (grid laws)",
                                false,
                                &format!("degenerate contact in d={dim}"),
                            );
                        }
                    }
                }
            }
        }
    }
    report(
        "8 (grid laws)",
        true,
        "unique location x 10^4, facet-only contacts, exact diameters, d = 1..4",
    );
}

/// Criterion 9: merge heights read from sweep trees equal the bottleneck
/// (maximin) values computed directly on the complex, for all region pairs
/// on 100 random complexes with up to 12 regions, in both adjacency modes.
#[test]
fn criterion_09_merge_height_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    for _ in 0..100 {
        let complex = random_complex(&mut rng, 12, 0.4, 0.6);
        for adjacency in [Adjacency::Touch, Adjacency::Neighbor] {
            let tree = sweep_tree(&complex, adjacency).expect("connected");
            let ids = complex.region_ids();
            for &i in &ids {
                for &j in &ids {
                    let via_tree = tree.merge_height(i, j);
                    let via_paths =
                        merge_height_maximin(&complex, adjacency, i, j).expect("known ids");
                    if via_tree != via_paths {
                        report(
                            "9 (merge-height oracle)",
                            false,
                            &format!("m({i},{j}) differs: {via_tree} vs {via_paths}"),
                        );
                    }
                }
            }
        }
    }
    report(
        "9 (merge-height oracle)",
        true,
        "100 complexes x both adjacencies, exact equality on all pairs",
    );
}

/// Criterion 10: merge distortion satisfies the pseudometric laws in exact
/// arithmetic over 100 random dendrogram triples on shared complexes.
#[test]
fn criterion_10_pseudometric_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    for _ in 0..100 {
        let complex = random_complex(&mut rng, 10, 0.4, 0.6);
        let a = random_dendrogram(&mut rng, &complex);
        let b = random_dendrogram(&mut rng, &complex);
        let c = random_dendrogram(&mut rng, &complex);
        let dab = merge_distortion(&a, &b).expect("same regions").value;
        let dba = merge_distortion(&b, &a).expect("same regions").value;
        let dbc = merge_distortion(&b, &c).expect("same regions").value;
        let dac = merge_distortion(&a, &c).expect("same regions").value;
        let daa = merge_distortion(&a, &a).expect("same regions").value;
        let ok = dab >= rational_zero()
            && dab == dba
            && daa == rational_zero()
            && dac <= &dab + &dbc;
        if !ok {
            report("10 (pseudometric laws)", false, "a law failed");
        }
    }
    report(
        "10 (pseudometric laws)",
        true,
        "nonnegativity, symmetry, identity, triangle over 100 triples, exact",
    );
}
