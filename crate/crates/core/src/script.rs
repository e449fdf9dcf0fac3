//! Move scripts: recorded sequences of colored Reidemeister moves and their
//! checked replay.
//!
//! A script is plain text with one move per line (see [`Move::parse`]);
//! blank lines and lines starting with `#` are ignored.  Edge and crossing
//! references are to the canonical form of the diagram at the time the
//! move is applied.

use std::collections::BTreeSet;
use std::fmt;

use crate::coloring::{coloring_dimension, is_nontrivial, ColoredDiagram};
use crate::engine::{TraceStage, TransformationTrace};
use crate::error::{Error, Result};
use crate::planar::{ColoredPlanar, Move};

/// An ordered list of moves.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MoveScript {
    /// The moves, applied in order.
    pub moves: Vec<Move>,
}

impl MoveScript {
    /// Parses the text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut moves = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mv = Move::parse(line).map_err(|message| Error::Parse { line: i + 1, message })?;
            moves.push(mv);
        }
        Ok(MoveScript { moves })
    }
}

impl fmt::Display for MoveScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.moves {
            writeln!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Replays `script` on `cd`, checking after every move that the coloring is
/// a valid nontrivial Fox coloring, that the coloring space keeps its
/// dimension and that the crossing count changed by the move's delta.
///
/// The trace starts with the input diagram (label `start`) and records one
/// stage per move.
pub fn replay_script(cd: &ColoredDiagram, script: &MoveScript) -> Result<TransformationTrace> {
    let p = cd.coloring.modulus();
    let dim = coloring_dimension(&cd.diagram, p)?;
    let mut cur = ColoredPlanar::from_colored_diagram(cd)?;
    let mut stages = vec![TraceStage {
        label: "start".into(),
        snapshot: cur.to_colored_diagram(),
        removed: BTreeSet::new(),
    }];
    for (index, mv) in script.moves.iter().enumerate() {
        let fail = |reason: String| Error::InapplicableMove {
            index,
            text: mv.to_string(),
            reason,
        };
        let next = cur.apply(mv).map_err(fail)?;
        let delta = next.diagram.crossing_count() as i64 - cur.diagram.crossing_count() as i64;
        if delta != mv.crossing_delta() {
            return Err(fail(format!("crossing count changed by {delta}")));
        }
        let snapshot = next.to_colored_diagram();
        if !next.is_fox() || !is_nontrivial(&snapshot.coloring) {
            return Err(fail("coloring is no longer a nontrivial Fox coloring".into()));
        }
        let new_dim = coloring_dimension(&snapshot.diagram, p)?;
        if new_dim != dim {
            return Err(fail(format!("coloring space dimension changed from {dim} to {new_dim}")));
        }
        let before: BTreeSet<u64> = cur.colors.iter().copied().collect();
        let after: BTreeSet<u64> = next.colors.iter().copied().collect();
        stages.push(TraceStage {
            label: format!("move-{} {}", index + 1, mv),
            snapshot,
            removed: before.difference(&after).copied().collect(),
        });
        cur = next;
    }
    let final_diagram = cur.to_colored_diagram();
    Ok(TransformationTrace {
        p,
        stages,
        final_diagram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::standard_colored_torus;

    #[test]
    fn script_text_round_trip() {
        let text = "# demo\nR1 0 L +1\n\nR3 0 1 2\nR2 1 3 over\nR2- 0 1\nR1- 2\n";
        let s = MoveScript::parse(text).unwrap();
        assert_eq!(s.moves.len(), 5);
        assert_eq!(MoveScript::parse(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn parse_error_reports_line() {
        match MoveScript::parse("R1 0 L +1\nR9 1 2\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn single_kink_keeps_palette() {
        let cd = standard_colored_torus(5).unwrap();
        let s = MoveScript::parse("R1 2 R -1").unwrap();
        let t = replay_script(&cd, &s).unwrap();
        assert_eq!(t.final_diagram.diagram.crossing_count(), 6);
        assert_eq!(t.final_palette(), cd.palette().colors);
    }

    #[test]
    fn inapplicable_move_is_reported() {
        let cd = standard_colored_torus(5).unwrap();
        let s = MoveScript::parse("R1 0 L +1\nR3 0 1 2").unwrap();
        match replay_script(&cd, &s) {
            Err(Error::InapplicableMove { index, .. }) => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
    }
}
