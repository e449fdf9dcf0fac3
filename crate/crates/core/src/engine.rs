//! The Teneva pipeline for `T(2, p)`.
//!
//! The symbolic layer ([`BlockState`]) holds the diagram as a Morse word
//! together with the list of twist blocks still to be processed.  One set of
//! Teneva transformations ([`teneva_set`]) rewrites every block with a
//! kink-and-slide template: the kink on the block's inner strand is slid
//! through the first `lh(k)` crossings, which splits a twist of `k` half
//! twists into two twists of about `lh(k)` half twists lying under a new
//! over-arc.  Colors are recomputed by propagation from the top, and the
//! palette after stage `i` is exactly
//!
//! ```text
//! {0, …, kᵢ − 1} ∪ {k_j, k_j + 1 : j ≤ i}
//! ```
//!
//! [`materialize`] turns a state into a concrete colored diagram whose
//! palette is checked against that formula; [`run_pipeline`] chains all
//! stages and finishes with the removal of color `k₁`.

use std::collections::BTreeSet;

use crate::coloring::{determinant, is_nontrivial, ColoredDiagram};
use crate::diagram::torus_knot_diagram;
use crate::error::{invalid, Error, Result};
use crate::k1;
use crate::lower_halves::{lh_sequence, teneva_bound};
use crate::morse::{Letter, MorseWord};
use crate::planar::{ColoredPlanar, PlanarDiagram};
use crate::primes::is_prime;

/// Orientation of a twist block inside the word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// The block's inner strand runs to the right: the kink sits on the
    /// right strand and the new over-arc opens to the right.
    Ascending,
    /// The mirror-rotated block: kink on the left strand, over-arc opening
    /// to the left.
    Descending,
}

/// A twist block still to be processed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Block {
    /// Index of the block's first crossing in the word.
    pub start: usize,
    /// Number of crossings (the block exponent).
    pub exponent: usize,
    /// Left strand position of the block.
    pub position: usize,
    /// Orientation of the block.
    pub orientation: Orientation,
    /// The lower-half term `k` governing the next split of this block.
    pub k: u64,
    /// Colors of the two strands entering the block at the top.
    pub boundary: [u64; 2],
}

/// The symbolic state of the pipeline after some number of Teneva sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockState {
    /// The prime modulus.
    pub p: u64,
    /// Number of sets applied so far.
    pub stage: usize,
    /// `LH(p)` (for `p = 5` this is `(2)`).
    pub terms: Vec<u64>,
    /// The diagram as a Morse word (closed like a 2-strand braid).
    pub word: MorseWord,
    /// Colors of the two strands at the top of the word.
    pub top: [u64; 2],
    /// Blocks to be split by the next set.
    pub blocks: Vec<Block>,
    /// Over-arcs created so far: `(color, first letter, last letter)`.
    pub over_arcs: Vec<(u64, usize, usize)>,
    /// The palette predicted by the stage formula.
    pub palette: BTreeSet<u64>,
}

/// The palette after stage `i`: `{0..kᵢ−1} ∪ {k_j, k_j+1 : j ≤ i}`, or all
/// of `0..p` at stage 0.
pub fn lemma_palette(p: u64, terms: &[u64], stage: usize) -> BTreeSet<u64> {
    if stage == 0 {
        return (0..p).collect();
    }
    let mut s: BTreeSet<u64> = (0..terms[stage - 1]).collect();
    for &k in &terms[..stage] {
        s.insert(k);
        s.insert(k + 1);
    }
    s
}

/// The state before any transformation: `σ₁ᵖ` with top colors `(1, 0)`, one
/// block made of all crossings but the first.
pub fn initial_state(p: u64) -> Result<BlockState> {
    if p < 5 || !is_prime(p) {
        return invalid(format!("the pipeline needs a prime p >= 5, got {p}"));
    }
    let terms = lh_sequence(p)?.terms;
    let word = MorseWord {
        top: 2,
        letters: vec![
            Letter::Cross {
                pos: 0,
                left_over: true,
            };
            p as usize
        ],
    };
    let levels = word.propagate(&[1, 0], p)?;
    Ok(BlockState {
        p,
        stage: 0,
        blocks: vec![Block {
            start: 1,
            exponent: p as usize - 1,
            position: 0,
            orientation: Orientation::Ascending,
            k: p,
            boundary: [levels[1][0], levels[1][1]],
        }],
        terms,
        word,
        top: [1, 0],
        over_arcs: Vec::new(),
        palette: (0..p).collect(),
    })
}

fn cross(pos: usize) -> Letter {
    Letter::Cross {
        pos,
        left_over: true,
    }
}

/// Rewrites one block; returns the replacement letters, the new blocks (with
/// starts relative to the word after replacement) and the new over-arc color.
fn split_block(b: &Block, levels: &[Vec<u64>]) -> (Vec<Letter>, Vec<(usize, usize, usize, Orientation)>, u64) {
    let (j, len, i) = (b.start, b.exponent, b.position);
    let kp = (b.k / 2) as usize;
    let a = kp;
    let rest = len - a;
    match b.orientation {
        Orientation::Ascending => {
            // Kink on the right strand after `a` crossings, slid up through
            // them: the over-arc wraps the first a−1 crossings on the left
            // and the remaining ones on the right.
            let z = levels[j + a][i + 1];
            let mut new = vec![Letter::Cup { pos: i + 2, color: z }];
            new.extend(std::iter::repeat_n(cross(i), a - 1));
            new.extend(std::iter::repeat_n(cross(i + 1), rest));
            new.extend([cross(i), cross(i + 1), Letter::Cap { pos: i + 2 }]);
            let subs = vec![
                (j + 1, a - 1, i, Orientation::Ascending),
                (j + a, kp - 1, i + 1, Orientation::Descending),
            ];
            (new, subs, z)
        }
        Orientation::Descending => {
            let z = levels[j + len - a][i];
            let mut new = vec![Letter::Cup { pos: i, color: z }, cross(i + 1), cross(i + 2)];
            new.extend(std::iter::repeat_n(cross(i + 1), rest));
            new.extend(std::iter::repeat_n(cross(i + 2), a - 1));
            new.push(Letter::Cap { pos: i });
            // When the block had an odd number of crossings past the kink,
            // its first crossing is absorbed by the over-arc.
            let subs = vec![
                (j + 3 + (rest + 1 - kp), kp - 1, i + 1, Orientation::Ascending),
                (j + 3 + rest, a - 1, i + 2, Orientation::Descending),
            ];
            (new, subs, z)
        }
    }
}

/// Applies the next set of Teneva transformations to every block.
pub fn teneva_set(state: &BlockState) -> Result<BlockState> {
    if state.stage >= state.terms.len() {
        return Err(Error::Stage(format!(
            "all {} sets have already been applied",
            state.terms.len()
        )));
    }
    let p = state.p;
    let levels = state.word.propagate(&state.top, p)?;
    let mut letters = state.word.letters.clone();
    let mut blocks = state.blocks.clone();
    blocks.sort_by_key(|b| std::cmp::Reverse(b.start));
    let mut new_blocks: Vec<(usize, usize, usize, Orientation, u64)> = Vec::new();
    let mut over_arcs: Vec<(u64, usize, usize)> = state.over_arcs.clone();
    for b in &blocks {
        if b.start + b.exponent > letters.len() || (b.k / 2) as usize > b.exponent {
            return Err(Error::Internal(format!("block {b:?} does not fit the word")));
        }
        let (new, subs, z) = split_block(b, &levels);
        let delta = new.len() as isize - b.exponent as isize;
        letters.splice(b.start..b.start + b.exponent, new.iter().copied());
        for nb in new_blocks.iter_mut() {
            nb.0 = (nb.0 as isize + delta) as usize;
        }
        for arc in over_arcs.iter_mut() {
            if arc.1 >= b.start + b.exponent {
                arc.1 = (arc.1 as isize + delta) as usize;
                arc.2 = (arc.2 as isize + delta) as usize;
            }
        }
        over_arcs.push((z, b.start, b.start + new.len() - 1));
        let kp = b.k / 2;
        let mut subs: Vec<_> = subs.into_iter().map(|(s, e, i, o)| (s, e, i, o, kp)).collect();
        subs.append(&mut new_blocks);
        new_blocks = subs;
    }
    let word = MorseWord {
        top: 2,
        letters,
    };
    let new_levels = word.propagate(&state.top, p)?;
    let blocks = new_blocks
        .into_iter()
        .map(|(start, exponent, position, orientation, k)| Block {
            start,
            exponent,
            position,
            orientation,
            k,
            boundary: [new_levels[start][position], new_levels[start][position + 1]],
        })
        .collect();
    over_arcs.sort_by_key(|a| a.1);
    let stage = state.stage + 1;
    Ok(BlockState {
        p,
        stage,
        palette: lemma_palette(p, &state.terms, stage),
        terms: state.terms.clone(),
        word,
        top: state.top,
        blocks,
        over_arcs,
    })
}

/// The concrete colored diagram of a Morse word closed like a braid, with
/// the plane reflected so that a pure twist `σ₁ᵖ` has positive crossings.
pub(crate) fn materialize_word(word: &MorseWord, top: &[u64], p: u64) -> Result<ColoredPlanar> {
    let levels = word.propagate(top, p)?;
    let (diagram, outs) = PlanarDiagram::from_morse(word)?;
    let colors = outs.iter().map(|&(t, q)| levels[t][q]).collect();
    let cp = ColoredPlanar {
        diagram: diagram.reflect(),
        colors,
        modulus: p,
    }
    .canonical();
    if !cp.is_fox() || !cp.diagram.is_planar() {
        return Err(Error::Internal("materialized diagram is not a planar Fox coloring".into()));
    }
    Ok(cp)
}

/// Planar form of [`materialize`].
pub fn materialize_planar(state: &BlockState) -> Result<ColoredPlanar> {
    let cp = materialize_word(&state.word, &state.top, state.p)?;
    let palette: BTreeSet<u64> = cp.colors.iter().copied().collect();
    if palette != state.palette {
        return Err(Error::Internal(format!(
            "stage {} palette {:?} differs from the predicted {:?}",
            state.stage, palette, state.palette
        )));
    }
    Ok(cp)
}

/// Renders a state as a concrete colored diagram, checking that its
/// coloring is valid and its palette equals the predicted one.
pub fn materialize(state: &BlockState) -> Result<ColoredDiagram> {
    Ok(materialize_planar(state)?.to_colored_diagram())
}

/// `T(2, p)` with its standard coloring: arcs met along the orientation
/// carry all `p` colors.
pub fn standard_colored_torus(p: u64) -> Result<ColoredDiagram> {
    if p < 3 || !is_prime(p) {
        return invalid(format!("T(2, p) needs an odd prime p, got {p}"));
    }
    let word = MorseWord {
        top: 2,
        letters: vec![cross(0); p as usize],
    };
    let cd = materialize_word(&word, &[1, 0], p)?.to_colored_diagram();
    if cd.diagram != torus_knot_diagram(p)? {
        return Err(Error::Internal("standard torus diagram mismatch".into()));
    }
    Ok(cd)
}

/// One recorded stage of a pipeline run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStage {
    /// Human-readable label, e.g. `set-1` or `remove-k1`.
    pub label: String,
    /// The colored diagram after this stage.
    pub snapshot: ColoredDiagram,
    /// Colors that disappeared at this stage.
    pub removed: BTreeSet<u64>,
}

/// The full record of a pipeline run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformationTrace {
    /// The modulus.
    pub p: u64,
    /// Stages in order, starting with the standard diagram.
    pub stages: Vec<TraceStage>,
    /// The final colored diagram.
    pub final_diagram: ColoredDiagram,
}

impl TransformationTrace {
    /// Palette of the final diagram.
    pub fn final_palette(&self) -> BTreeSet<u64> {
        self.final_diagram.palette().colors
    }

    /// Number of reduction stages (everything after the initial diagram).
    pub fn reduction_count(&self) -> usize {
        self.stages.len().saturating_sub(1)
    }

    /// Serializes as PD + coloring blocks, each preceded by a
    /// `STAGE <label> REMOVED <colors…>` line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.stages {
            let removed: Vec<String> = s.removed.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("STAGE {} REMOVED", s.label));
            for r in removed {
                out.push(' ');
                out.push_str(&r);
            }
            out.push('\n');
            out.push_str(&s.snapshot.to_text());
        }
        out
    }

    /// Checks the trace invariants: valid nontrivial snapshots, disjoint
    /// removals, and removals plus final palette covering `0..p` exactly.
    pub fn check(&self) -> Result<()> {
        let mut seen: BTreeSet<u64> = BTreeSet::new();
        for s in &self.stages {
            let c = &s.snapshot.coloring;
            if !crate::coloring::is_fox_coloring(&s.snapshot.diagram, c)? || !is_nontrivial(c) {
                return Err(Error::Internal(format!("stage {} is not a nontrivial coloring", s.label)));
            }
            for &r in &s.removed {
                if !seen.insert(r) {
                    return Err(Error::Internal(format!("color {r} removed twice")));
                }
            }
        }
        let fin = self.final_palette();
        if !seen.is_disjoint(&fin) || seen.len() + fin.len() != self.p as usize {
            return Err(Error::Internal("removals and final palette do not partition the colors".into()));
        }
        Ok(())
    }
}

fn stage_record(label: String, before: &BTreeSet<u64>, snapshot: ColoredDiagram) -> TraceStage {
    let after = snapshot.palette().colors;
    TraceStage {
        label,
        removed: before.difference(&after).copied().collect(),
        snapshot,
    }
}

/// Runs all `l_p` sets and then removes color `k₁`, for primes `p ≥ 11`.
///
/// The final diagram is checked to be a valid nontrivial coloring with
/// `t_p + 2·l_p − 1` colors and determinant `p`.
pub fn run_pipeline(p: u64) -> Result<TransformationTrace> {
    if p < 11 || !is_prime(p) {
        return invalid(format!("the pipeline needs a prime p >= 11, got {p}"));
    }
    let mut state = initial_state(p)?;
    let start = materialize(&state)?;
    let mut stages = vec![stage_record("standard".into(), &BTreeSet::new(), start)];
    stages[0].removed.clear();
    while state.stage < state.terms.len() {
        let before = state.palette.clone();
        state = teneva_set(&state)?;
        let snap = materialize(&state)?;
        stages.push(stage_record(format!("set-{}", state.stage), &before, snap));
    }
    let before = state.palette.clone();
    let fin = k1::remove_k1(&state)?.to_colored_diagram();
    stages.push(stage_record("remove-k1".into(), &before, fin.clone()));
    let bound = teneva_bound(p)? as usize;
    if fin.palette().size() != bound {
        return Err(Error::Internal(format!(
            "final palette has {} colors, expected {bound}",
            fin.palette().size()
        )));
    }
    if determinant(&fin.diagram)? != p.into() {
        return Err(Error::Internal("final diagram has the wrong determinant".into()));
    }
    let trace = TransformationTrace {
        p,
        stages,
        final_diagram: fin,
    };
    trace.check()?;
    Ok(trace)
}

/// Teneva's example: one set on `T(2, 5)`, ending with four colors.
pub fn teneva_demo_5() -> Result<TransformationTrace> {
    let mut state = initial_state(5)?;
    let start = materialize(&state)?;
    let mut stages = vec![stage_record("standard".into(), &BTreeSet::new(), start)];
    let before = state.palette.clone();
    state = teneva_set(&state)?;
    let snap = materialize(&state)?;
    stages.push(stage_record("set-1".into(), &before, snap.clone()));
    let trace = TransformationTrace {
        p: 5,
        stages,
        final_diagram: snap,
    };
    trace.check()?;
    Ok(trace)
}
