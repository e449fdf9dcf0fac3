//! Independent oracles for derived values: naive re-implementations and
//! brute-force enumerations checked against the library.

use proptest::prelude::*;

use teneva_core::certify::shipped_scripts;
use teneva_core::coloring::{
    count_colorings, determinant, is_fox_coloring, is_nontrivial, min_palette_over_colorings, ColoredDiagram,
};
use teneva_core::diagram::{
    continued_fraction, rational_twist_diagram, torus_knot_diagram, Diagram, RationalKnotSpec,
};
use teneva_core::engine::{run_pipeline, standard_colored_torus};
use teneva_core::lower_halves::{fast_length_tail, lh_sequence, teneva_bound, two_adic_expansion};
use teneva_core::planar::{ColoredPlanar, Move, Side};
use teneva_core::primes::is_prime;
use teneva_core::script::replay_script;

/// Lower halves by the definition: keep halving (rounding down) until the
/// value lands in {2, 3, 4}.
fn naive_lh(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut x = n;
    loop {
        x /= 2;
        out.push(x);
        if (2..=4).contains(&x) {
            return out;
        }
    }
}

/// Counts Fox colorings by trying every labeling of the arcs.
fn brute_force_count(d: &Diagram, p: u64) -> u64 {
    let n = d.arc_count();
    let mut labels = vec![0u64; n];
    let mut count = 0;
    loop {
        let ok = d.crossings().iter().all(|x| {
            (2 * labels[x.over] + p - labels[x.under_in]) % p == labels[x.under_out]
        });
        count += ok as u64;
        let mut i = 0;
        loop {
            if i == n {
                return count;
            }
            labels[i] += 1;
            if labels[i] < p {
                break;
            }
            labels[i] = 0;
            i += 1;
        }
    }
}

/// Trial-division primality.
fn naive_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

#[test]
fn lower_halves_match_the_definition() {
    for n in (5..20_001).step_by(2) {
        let s = lh_sequence(n).unwrap();
        let naive = naive_lh(n);
        assert_eq!(s.terms, naive, "n = {n}");
        assert_eq!((s.length, s.tail), (naive.len(), *naive.last().unwrap()));
        if n >= 9 {
            assert_eq!(fast_length_tail(n).unwrap(), (naive.len(), *naive.last().unwrap()), "n = {n}");
        }
    }
}

#[test]
fn bound_matches_the_definition() {
    for p in (11..5_000).filter(|&p| naive_prime(p)) {
        let lh = naive_lh(p);
        assert_eq!(teneva_bound(p).unwrap(), lh.last().unwrap() + 2 * lh.len() as u64 - 1, "p = {p}");
    }
}

#[test]
fn primality_matches_trial_division() {
    for n in 0..50_000 {
        assert_eq!(is_prime(n), naive_prime(n), "n = {n}");
    }
}

#[test]
fn brute_force_torus_counts() {
    for p in [3u64, 5, 7] {
        let d = torus_knot_diagram(p).unwrap();
        let brute = brute_force_count(&d, p);
        assert_eq!(brute, p * p);
        assert_eq!(count_colorings(&d, p).unwrap(), brute.into());
        // A prime not dividing the determinant only sees constant colorings.
        let q = if p == 3 { 5 } else { 3 };
        assert_eq!(brute_force_count(&d, q), q);
        assert_eq!(count_colorings(&d, q).unwrap(), q.into());
    }
}

#[test]
fn brute_force_rational_counts() {
    for coefficients in [vec![5, 2], vec![4, -3]] {
        let d = rational_twist_diagram(&RationalKnotSpec::new(coefficients).unwrap()).unwrap();
        for q in [3u64, 5, 7] {
            assert_eq!(count_colorings(&d, q).unwrap(), brute_force_count(&d, q).into());
        }
    }
}

#[test]
fn determinant_detects_coloring_primes() {
    // q divides the determinant iff there are more than q colorings.
    for p in [3u64, 5, 7, 11, 13, 17] {
        let d = torus_knot_diagram(p).unwrap();
        assert_eq!(determinant(&d).unwrap(), p.into());
        for q in [3u64, 5, 7, 11, 13, 17] {
            let nontrivial = count_colorings(&d, q).unwrap() > q.into();
            assert_eq!(nontrivial, p == q, "p = {p}, q = {q}");
        }
    }
}

#[test]
fn rational_fractions_by_hand() {
    // The determinant of a rational knot is the absolute value of the
    // denominator of its continued fraction.
    for coefficients in [vec![5, 2], vec![4, -3]] {
        let spec = RationalKnotSpec::new(coefficients).unwrap();
        let f = continued_fraction(&spec).unwrap();
        let d = rational_twist_diagram(&spec).unwrap();
        assert_eq!(determinant(&d).unwrap(), f.denominator.unsigned_abs().into());
    }
    for a in (-5i64..=5).filter(|&a| a != 0) {
        for b in (-5i64..=5).filter(|&b| b != 0) {
            let spec = RationalKnotSpec::new(vec![a, b]).unwrap();
            let Ok(f) = continued_fraction(&spec) else { continue };
            let d = rational_twist_diagram(&spec).unwrap();
            assert_eq!(determinant(&d).unwrap(), f.denominator.unsigned_abs().into(), "({a}, {b})");
        }
    }
}

#[test]
fn kauffman_harary_baseline_for_small_tori() {
    // Every nontrivial coloring of the standard T(2,p) diagram uses all p
    // colors; check by brute force for p = 3, 5, 7.
    for p in [3u64, 5, 7] {
        let d = torus_knot_diagram(p).unwrap();
        assert_eq!(min_palette_over_colorings(&d, p, 1_000).unwrap(), p as usize);
    }
}

#[test]
fn pipeline_finals_share_coloring_counts_with_the_torus_knot() {
    for p in [11u64, 13, 17, 31, 37, 41, 127] {
        let fin = run_pipeline(p).unwrap().final_diagram;
        let standard = torus_knot_diagram(p).unwrap();
        for q in [3u64, 5, 7, 11, 13] {
            assert_eq!(
                count_colorings(&fin.diagram, q).unwrap(),
                count_colorings(&standard, q).unwrap(),
                "p = {p}, q = {q}"
            );
        }
    }
}

#[test]
fn eleven_stage_palettes_by_hand() {
    // LH(11) = (5, 2): set 1 leaves {0..4} ∪ {5, 6}; set 2 leaves
    // {0, 1} ∪ {5, 6} ∪ {2, 3}; removing k₁ = 5 leaves {0, 1, 2, 3, 6}.
    let t = run_pipeline(11).unwrap();
    let palettes: Vec<Vec<u64>> = t.stages.iter().map(|s| s.snapshot.palette().colors.into_iter().collect()).collect();
    assert_eq!(palettes[0], (0..11).collect::<Vec<_>>());
    assert_eq!(palettes[1], vec![0, 1, 2, 3, 4, 5, 6]);
    assert_eq!(palettes[2], vec![0, 1, 2, 3, 5, 6]);
    assert_eq!(palettes[3], vec![0, 1, 2, 3, 6]);
}

#[test]
fn kink_then_slide_on_the_five_torus() {
    let scripts = shipped_scripts().unwrap();
    let s = scripts.iter().find(|s| s.name == "t25_kink_slide").unwrap();
    let t = replay_script(&s.start, &s.script).unwrap();
    assert_eq!(t.final_diagram.diagram.crossing_count(), 6);
    assert_eq!(t.final_diagram.palette().size(), 5);
}

fn check_colored(cd: &ColoredDiagram) {
    assert!(is_fox_coloring(&cd.diagram, &cd.coloring).unwrap());
    assert!(is_nontrivial(&cd.coloring));
}

proptest! {
    #[test]
    fn fast_algorithm_on_large_inputs(half in 4u64..(1u64 << 50)) {
        let n = 2 * half + 1;
        let naive = naive_lh(n);
        prop_assert_eq!(fast_length_tail(n).unwrap(), (naive.len(), *naive.last().unwrap()));
        prop_assert_eq!(two_adic_expansion(n).unwrap().reconstruct(), n);
    }

    #[test]
    fn random_kinks_keep_the_palette(
        p_index in 0usize..4,
        picks in proptest::collection::vec((0usize..1000, any::<bool>(), any::<bool>()), 1..6),
    ) {
        let p = [3u64, 5, 7, 11][p_index];
        let mut cp = ColoredPlanar::from_colored_diagram(&standard_colored_torus(p).unwrap()).unwrap();
        let palette = cp.palette();
        for (edge, left, positive) in picks {
            let mv = Move::R1Add {
                edge: edge % cp.diagram.edge_count(),
                side: if left { Side::Left } else { Side::Right },
                sign: if positive { 1 } else { -1 },
            };
            let next = cp.apply(&mv).unwrap();
            prop_assert_eq!(next.diagram.crossing_count(), cp.diagram.crossing_count() + 1);
            cp = next;
            let cd = cp.to_colored_diagram();
            check_colored(&cd);
            prop_assert_eq!(count_colorings(&cd.diagram, p).unwrap(), (p * p).into());
        }
        prop_assert_eq!(cp.palette(), palette);
    }
}
