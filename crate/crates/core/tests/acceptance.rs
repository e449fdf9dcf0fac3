//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the report is always
//! printed; the process exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Ratio;

use teneva_core::certify::{certify_rational, certify_torus, shipped_scripts, RationalFixture, Verdict};
use teneva_core::coloring::{
    coloring_dimension, count_colorings, determinant, enumerate_nontrivial_colorings, is_fox_coloring,
    is_nontrivial, min_palette_over_colorings, palette,
};
use teneva_core::diagram::{continued_fraction, rational_twist_diagram, torus_knot_diagram, RationalKnotSpec};
use teneva_core::engine::{run_pipeline, teneva_demo_5};
use teneva_core::lower_halves::{decimal_ratio, fast_length_tail, lh_sequence, teneva_bound};
use teneva_core::primes::primes_between;
use teneva_core::script::replay_script;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, budget_secs: u64) -> Result<(), String> {
    ensure(elapsed < Duration::from_secs(budget_secs), || {
        format!("took {:.2}s, budget {budget_secs}s", elapsed.as_secs_f64())
    })
}

/// Criterion 1: Lower-half golden set.
fn lower_half_golden() -> Outcome {
    let golden: [(u64, &[u64]); 5] = [
        (31, &[15, 7, 3]),
        (37, &[18, 9, 4]),
        (41, &[20, 10, 5, 2]),
        (11, &[5, 2]),
        (13, &[6, 3]),
    ];
    for (n, terms) in golden {
        let s = lh_sequence(n).map_err(|e| e.to_string())?;
        ensure(s.terms == terms, || format!("LH({n}) = {:?}, expected {terms:?}", s.terms))?;
    }
    Ok("LH(31), LH(37), LH(41), LH(11), LH(13) exact".into())
}

/// Criterion 2: Fast algorithm against iteration for every odd n in [9, 10⁶].
fn fast_oracle() -> Outcome {
    let start = Instant::now();
    let mut checked = 0u64;
    for n in (9..=1_000_000u64).step_by(2) {
        let s = lh_sequence(n).map_err(|e| e.to_string())?;
        let fast = fast_length_tail(n).map_err(|e| e.to_string())?;
        ensure(fast == (s.length, s.tail), || format!("n = {n}: fast {fast:?}, iterative ({}, {})", s.length, s.tail))?;
        checked += 1;
    }
    within(start.elapsed(), 5)?;
    Ok(format!("{checked} odd n, zero mismatches, {:.2}s", start.elapsed().as_secs_f64()))
}

/// Criterion 3: Bound and ratio checkpoints, compared as exact rationals.
fn bound_checkpoints() -> Outcome {
    for (p, bound, decimal) in [(11u64, 5u64, "0.455"), (13, 6, "0.462"), (331, 15, "0.1"), (104729, 32, "0.0005")] {
        let b = teneva_bound(p).map_err(|e| e.to_string())?;
        ensure(b == bound, || format!("teneva_bound({p}) = {b}, expected {bound}"))?;
        let ratio = Ratio::new(b as u128, p as u128);
        let limit = decimal_ratio(decimal).map_err(|e| e.to_string())?;
        ensure(ratio < limit, || format!("{ratio} is not < {decimal}"))?;
    }
    Ok("5, 6, 15, 32; 5/11<0.455, 6/13<0.462, 15/331<0.1, 32/104729<0.0005".into())
}

/// Criterion 4: Corollary chain for every prime 7 < p ≤ 10⁶, in exact integer
/// arithmetic: `b ≤ 2·log₂(p−1) − 1 ⇔ 2^(b+1) ≤ (p−1)²` and
/// `b/p < (1+l)/2^l ⇔ b·2^l < (1+l)·p`.
fn corollary_chain() -> Outcome {
    let start = Instant::now();
    let primes = primes_between(8, 1_000_000);
    for &p in &primes {
        let b = teneva_bound(p).map_err(|e| e.to_string())? as u128;
        let (l, _) = fast_length_tail(p).map_err(|e| e.to_string())?;
        let q = (p - 1) as u128;
        ensure(1u128 << (b + 1) <= q * q, || format!("p = {p}: bound {b} exceeds 2 log2(p-1) - 1"))?;
        ensure(b << l < (1 + l as u128) * p as u128, || format!("p = {p}: ratio not below f(l)"))?;
    }
    within(start.elapsed(), 30)?;
    Ok(format!("{} primes, {:.2}s", primes.len(), start.elapsed().as_secs_f64()))
}

/// The predicted palette after stage `i`, built directly from `LH(p)`.
fn lemma(terms: &[u64], i: usize) -> BTreeSet<u64> {
    let mut s: BTreeSet<u64> = (0..terms[i - 1]).collect();
    for &k in &terms[..i] {
        s.insert(k);
        s.insert(k + 1);
    }
    s
}

/// Criterion 5: Pipeline ledger for every prime 11 ≤ p ≤ 997.
fn pipeline_ledger() -> Outcome {
    let start = Instant::now();
    let primes = primes_between(11, 997);
    for &p in &primes {
        let trace = run_pipeline(p).map_err(|e| format!("p = {p}: {e}"))?;
        let terms = lh_sequence(p).map_err(|e| e.to_string())?.terms;
        let l = terms.len();
        ensure(trace.stages.len() == l + 2, || format!("p = {p}: {} stages", trace.stages.len()))?;
        for i in 1..=l {
            let got = trace.stages[i].snapshot.palette().colors;
            let want = lemma(&terms, i);
            ensure(got == want, || format!("p = {p}, stage {i}: palette {got:?}, predicted {want:?}"))?;
            ensure(want.len() as u64 == terms[i - 1] + 2 * i as u64, || format!("p = {p}: predicted size"))?;
        }
        let fin = &trace.final_diagram;
        ensure(is_fox_coloring(&fin.diagram, &fin.coloring).unwrap_or(false), || format!("p = {p}: final not Fox"))?;
        ensure(is_nontrivial(&fin.coloring), || format!("p = {p}: final trivial"))?;
        let bound = teneva_bound(p).map_err(|e| e.to_string())?;
        ensure(fin.palette().size() as u64 == bound, || format!("p = {p}: {} colors, bound {bound}", fin.palette().size()))?;
        let det = determinant(&fin.diagram).map_err(|e| e.to_string())?;
        ensure(det == p.into(), || format!("p = {p}: determinant {det}"))?;
    }
    within(start.elapsed(), 60)?;
    Ok(format!("{} primes, every stage on the predicted palette, {:.2}s", primes.len(), start.elapsed().as_secs_f64()))
}

/// Criterion 6: Teneva's example on T(2,5).
fn teneva_example() -> Outcome {
    let t = teneva_demo_5().map_err(|e| e.to_string())?;
    let fin = &t.final_diagram;
    ensure(fin.coloring.modulus() == 5, || "modulus is not 5".into())?;
    ensure(is_fox_coloring(&fin.diagram, &fin.coloring).unwrap_or(false), || "not a Fox coloring".into())?;
    ensure(is_nontrivial(&fin.coloring), || "trivial coloring".into())?;
    let k = fin.palette().size();
    ensure(k == 4, || format!("{k} colors"))?;
    let det = determinant(&fin.diagram).map_err(|e| e.to_string())?;
    ensure(det == 5u64.into(), || format!("determinant {det}"))?;
    Ok(format!("valid 5-coloring with palette {}", fin.palette()))
}

/// Criterion 7: Headline certificates.
fn headline_certificates() -> Outcome {
    let c11 = certify_torus(11).map_err(|e| e.to_string())?;
    ensure(c11.verdict == Verdict::Exact && c11.claimed_palette == 5, || c11.summary())?;
    let c13 = certify_torus(13).map_err(|e| e.to_string())?;
    ensure(c13.verdict == Verdict::UpperOnly && c13.claimed_palette == 6, || c13.summary())?;
    Ok(format!("{}; {}", c11.summary(), c13.summary()))
}

/// Counts Fox colorings by trying every arc labeling.
fn brute_force_count(d: &teneva_core::diagram::Diagram, p: u64) -> u64 {
    let n = d.arc_count();
    let mut labels = vec![0u64; n];
    let mut count = 0;
    'outer: loop {
        count += d
            .crossings()
            .iter()
            .all(|x| (2 * labels[x.over] + p - labels[x.under_in]) % p == labels[x.under_out]) as u64;
        for l in labels.iter_mut() {
            *l += 1;
            if *l < p {
                continue 'outer;
            }
            *l = 0;
        }
        return count;
    }
}

/// Criterion 8: Coloring counts: brute force for p ≤ 7, linear algebra for 11 and 13.
fn coloring_oracle() -> Outcome {
    for p in [3u64, 5, 7] {
        let d = torus_knot_diagram(p).map_err(|e| e.to_string())?;
        let brute = brute_force_count(&d, p);
        ensure(brute == p * p, || format!("brute force count mod {p} = {brute}"))?;
        let lin = count_colorings(&d, p).map_err(|e| e.to_string())?;
        ensure(lin == brute.into(), || format!("linear algebra count mod {p} = {lin}"))?;
    }
    for p in [11u64, 13] {
        let d = torus_knot_diagram(p).map_err(|e| e.to_string())?;
        let dim = coloring_dimension(&d, p).map_err(|e| e.to_string())?;
        let lin = count_colorings(&d, p).map_err(|e| e.to_string())?;
        ensure(dim == 2 && lin == (p * p).into(), || format!("mod {p}: dimension {dim}, count {lin}"))?;
    }
    Ok("9, 25, 49 by brute force; 121, 169 by linear algebra".into())
}

/// Criterion 9: Kauffman–Harary baseline on the standard T(2,11).
fn kauffman_harary() -> Outcome {
    let d = torus_knot_diagram(11).map_err(|e| e.to_string())?;
    let sizes: Vec<usize> = enumerate_nontrivial_colorings(&d, 11, 1_000)
        .map_err(|e| e.to_string())?
        .map(|c| palette(&c).size())
        .collect();
    ensure(sizes.len() == 110, || format!("{} nontrivial colorings", sizes.len()))?;
    let min = min_palette_over_colorings(&d, 11, 1_000).map_err(|e| e.to_string())?;
    ensure(min == 11 && sizes.iter().all(|&s| s == 11), || format!("minimum palette {min}"))?;
    Ok("110 nontrivial colorings, every one uses 11 colors".into())
}

/// Criterion 10: Rational fixtures.  The fraction of `R(4,−3)` is the pair
/// `(−3, −11)`; its numerator and `|denominator|` give the `−3/11` of the
/// checkpoint.
fn rational_fixtures() -> Outcome {
    let mut notes = Vec::new();
    for (f, numerator) in [(RationalFixture::R52, 2i64), (RationalFixture::R43, -3)] {
        let c = certify_rational(f).map_err(|e| e.to_string())?;
        ensure(c.verdict == Verdict::Exact && c.claimed_palette == 5 && c.modulus == 11, || c.summary())?;
        let spec = RationalKnotSpec::new(f.coefficients().to_vec()).map_err(|e| e.to_string())?;
        let frac = continued_fraction(&spec).map_err(|e| e.to_string())?;
        ensure(frac.numerator == numerator && frac.denominator.abs() == 11, || format!("{}: fraction {frac}", f.label()))?;
        let det = determinant(&rational_twist_diagram(&spec).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(det == 11u64.into(), || format!("{}: determinant {det}", f.label()))?;
        notes.push(format!("{} (fraction {frac}, det {det})", c.summary()));
    }
    Ok(notes.join("; "))
}

/// Criterion 11: Every move of every shipped script keeps a valid coloring and the
/// coloring-space dimension, with the crossing delta of its kind.
fn move_soundness() -> Outcome {
    let mut moves = 0;
    for s in shipped_scripts().map_err(|e| e.to_string())? {
        let trace = replay_script(&s.start, &s.script).map_err(|e| format!("{}: {e}", s.name))?;
        let p = s.start.coloring.modulus();
        let dim = coloring_dimension(&s.start.diagram, p).map_err(|e| e.to_string())?;
        for (i, mv) in s.script.moves.iter().enumerate() {
            let (before, after) = (&trace.stages[i].snapshot, &trace.stages[i + 1].snapshot);
            let delta = after.diagram.crossing_count() as i64 - before.diagram.crossing_count() as i64;
            let allowed: &[i64] = match mv.kind() {
                "R1" => &[1, -1],
                "R2" => &[2, -2],
                _ => &[0],
            };
            let at = || format!("{} move {} ({mv})", s.name, i + 1);
            ensure(allowed.contains(&delta), || format!("{}: crossing delta {delta}", at()))?;
            ensure(is_fox_coloring(&after.diagram, &after.coloring).unwrap_or(false), || format!("{}: invalid", at()))?;
            ensure(is_nontrivial(&after.coloring), || format!("{}: trivial", at()))?;
            let d = coloring_dimension(&after.diagram, p).map_err(|e| e.to_string())?;
            ensure(d == dim, || format!("{}: dimension {d}, expected {dim}", at()))?;
            moves += 1;
        }
    }
    Ok(format!("{moves} moves over every shipped script"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("lower-half golden set", lower_half_golden),
        ("fast-algorithm oracle equivalence", fast_oracle),
        ("bound checkpoints", bound_checkpoints),
        ("corollary chain", corollary_chain),
        ("pipeline ledger", pipeline_ledger),
        ("Teneva's example", teneva_example),
        ("headline certificate", headline_certificates),
        ("coloring oracle", coloring_oracle),
        ("Kauffman-Harary baseline", kauffman_harary),
        ("rational fixtures", rational_fixtures),
        ("move soundness", move_soundness),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
