//! Planar knot diagrams as signed Gauss codes, with face structure and
//! colored Reidemeister moves.
//!
//! A knot diagram with `n` crossings is a cyclic sequence of `2n` visits;
//! edge `k` is the strand segment leaving visit `k` and entering visit
//! `k + 1`.  Together with the crossing signs this determines the planar
//! embedding: each crossing gets four counter-clockwise slots
//!
//! ```text
//! positive: (under_in, over_out, under_out, over_in)
//! negative: (under_in, over_in, under_out, over_out)
//! ```
//!
//! and faces are the orbits of "cross the edge, then turn to the previous
//! slot".  A code is planar exactly when it has `n + 2` faces.
//!
//! Colors live on edges; a coloring is a Fox coloring when over-visits keep
//! the color and every under-visit turns `a` into `2·over − a`.

use std::collections::HashMap;
use std::fmt;

use crate::coloring::{ColoredDiagram, FoxColoring};
use crate::diagram::{diagram_from_paths, ArcId, Diagram, Visit};
use crate::error::{Error, Result};
use crate::morse::MorseWord;

/// A knot diagram as a signed Gauss code.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlanarDiagram {
    visits: Vec<Visit>,
    signs: Vec<i8>,
}

/// One corner of a face: the walk leaves `crossing` through `slot` along `edge`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Corner {
    /// Crossing the walk leaves.
    pub crossing: usize,
    /// Slot (0–3, counter-clockwise) the walk leaves through.
    pub slot: usize,
    /// Edge the walk follows.
    pub edge: usize,
    /// Whether the walk follows the edge along the knot's orientation.
    pub forward: bool,
}

impl PlanarDiagram {
    /// A diagram from visits and signs; every crossing `0..signs.len()` must
    /// be visited exactly once over and once under.
    pub fn new(visits: Vec<Visit>, signs: Vec<i8>) -> Result<Self> {
        let mut seen = vec![[false; 2]; signs.len()];
        for v in &visits {
            let slot = seen
                .get_mut(v.crossing)
                .ok_or_else(|| Error::BadDiagram(format!("unknown crossing {}", v.crossing)))?;
            if slot[v.over as usize] {
                return Err(Error::BadDiagram(format!("crossing {} visited twice alike", v.crossing)));
            }
            slot[v.over as usize] = true;
        }
        if seen.iter().any(|s| !s[0] || !s[1]) || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::BadDiagram("incomplete Gauss code".into()));
        }
        Ok(PlanarDiagram { visits, signs })
    }

    /// The crossingless unknot.
    pub fn unknot() -> Self {
        PlanarDiagram {
            visits: Vec::new(),
            signs: Vec::new(),
        }
    }

    /// Traces a one-component Morse word; crossings are numbered by first
    /// appearance.  Also returns, for each visit, the `(level, position)`
    /// of the edge leaving it.
    pub fn from_morse(word: &MorseWord) -> Result<(Self, Vec<(usize, usize)>)> {
        let traced = word.trace()?;
        if traced.paths.len() != 1 {
            return Err(Error::BadDiagram(format!(
                "expected a knot, got {} components",
                traced.paths.len()
            )));
        }
        let mut ids = HashMap::new();
        let mut signs = Vec::new();
        let visits = traced.paths[0]
            .iter()
            .map(|v| {
                let id = *ids.entry(v.crossing).or_insert_with(|| {
                    signs.push(traced.signs[v.crossing]);
                    signs.len() - 1
                });
                Visit {
                    crossing: id,
                    over: v.over,
                }
            })
            .collect();
        let out = traced.out_edges.into_iter().next().unwrap_or_default();
        Ok((PlanarDiagram { visits, signs }, out))
    }

    /// Recovers the Gauss code of a knot diagram in canonical order (arcs
    /// along the orientation, crossings in over-visit order).  Crossing ids
    /// are the diagram's crossing indices.
    pub fn from_diagram(d: &Diagram) -> Result<Self> {
        if !d.is_knot() {
            return Err(Error::BadDiagram("Gauss codes are supported for knots only".into()));
        }
        let n = d.crossing_count();
        if n == 0 {
            return Ok(PlanarDiagram::unknot());
        }
        let mut overs: Vec<Vec<usize>> = vec![Vec::new(); d.arc_count()];
        let mut ends = vec![None; d.arc_count()];
        for (i, c) in d.crossings().iter().enumerate() {
            overs[c.over].push(i);
            ends[c.under_in] = Some(i);
        }
        let mut visits = Vec::with_capacity(2 * n);
        let mut arc = 0;
        for _ in 0..d.arc_count() {
            visits.extend(overs[arc].iter().map(|&c| Visit { crossing: c, over: true }));
            let c = ends[arc].ok_or_else(|| Error::BadDiagram(format!("arc {arc} has no end")))?;
            visits.push(Visit { crossing: c, over: false });
            arc = d.crossings()[c].under_out;
        }
        if arc != 0 || visits.len() != 2 * n {
            return Err(Error::BadDiagram("arcs do not form a single closed strand".into()));
        }
        PlanarDiagram::new(visits, d.crossings().iter().map(|c| c.sign).collect())
    }

    /// The visits in order.
    pub fn visits(&self) -> &[Visit] {
        &self.visits
    }

    /// Crossing signs.
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Number of crossings.
    pub fn crossing_count(&self) -> usize {
        self.signs.len()
    }

    /// Number of edges (`2n`).
    pub fn edge_count(&self) -> usize {
        self.visits.len()
    }

    /// The mirror image in the plane: same code, all signs flipped.
    pub fn reflect(&self) -> Self {
        PlanarDiagram {
            visits: self.visits.clone(),
            signs: self.signs.iter().map(|s| -s).collect(),
        }
    }

    /// `[over position, under position]` of every crossing.
    pub fn positions(&self) -> Vec<[usize; 2]> {
        let mut pos = vec![[0; 2]; self.signs.len()];
        for (k, v) in self.visits.iter().enumerate() {
            pos[v.crossing][!v.over as usize] = k;
        }
        pos
    }

    /// The four edges at each crossing, counter-clockwise from `under_in`.
    pub fn slots(&self) -> Vec<[usize; 4]> {
        let m = self.visits.len();
        self.positions()
            .iter()
            .zip(&self.signs)
            .map(|(&[o, u], &s)| {
                let (i_in, i_out, j_in, j_out) = ((u + m - 1) % m, u, (o + m - 1) % m, o);
                if s > 0 {
                    [i_in, j_out, i_out, j_in]
                } else {
                    [i_in, j_in, i_out, j_out]
                }
            })
            .collect()
    }

    /// `(tail, head)` endpoints of each edge as `(crossing, slot)`.
    fn edge_ends(&self) -> Vec<[(usize, usize); 2]> {
        let m = self.visits.len();
        (0..m)
            .map(|e| {
                let t = self.visits[e];
                let h = self.visits[(e + 1) % m];
                let pos = |c: usize| self.signs[c] > 0;
                let tail_slot = if !t.over { 2 } else if pos(t.crossing) { 1 } else { 3 };
                let head_slot = if !h.over { 0 } else if pos(h.crossing) { 3 } else { 1 };
                [(t.crossing, tail_slot), (h.crossing, head_slot)]
            })
            .collect()
    }

    /// All faces as cyclic lists of corners.
    pub fn faces(&self) -> Vec<Vec<Corner>> {
        let n = self.signs.len();
        if n == 0 {
            return Vec::new();
        }
        let slots = self.slots();
        let ends = self.edge_ends();
        let mut seen = vec![false; 4 * n];
        let mut faces = Vec::new();
        for start in 0..4 * n {
            if seen[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut cur = (start / 4, start % 4);
            while !seen[cur.0 * 4 + cur.1] {
                seen[cur.0 * 4 + cur.1] = true;
                let e = slots[cur.0][cur.1];
                let [tail, head] = ends[e];
                let forward = tail == cur;
                face.push(Corner {
                    crossing: cur.0,
                    slot: cur.1,
                    edge: e,
                    forward,
                });
                let other = if forward { head } else { tail };
                cur = (other.0, (other.1 + 3) % 4);
            }
            faces.push(face);
        }
        faces
    }

    /// Whether the signed code describes a planar diagram.
    pub fn is_planar(&self) -> bool {
        let n = self.signs.len();
        n == 0 || self.faces().len() == n + 2
    }

    /// Rotates to start right after the last under-visit and renumbers
    /// crossings in over-visit order.  Returns the new diagram and the
    /// rotation (new edge `k` is old edge `(k + shift) mod 2n`).
    pub fn canonical(&self) -> (Self, usize) {
        let m = self.visits.len();
        if m == 0 {
            return (self.clone(), 0);
        }
        let shift = self.visits.iter().rposition(|v| !v.over).map_or(0, |u| (u + 1) % m);
        let mut relabel = vec![usize::MAX; self.signs.len()];
        let mut next = 0;
        for k in 0..m {
            let v = self.visits[(k + shift) % m];
            if v.over {
                relabel[v.crossing] = next;
                next += 1;
            }
        }
        let visits = (0..m)
            .map(|k| {
                let v = self.visits[(k + shift) % m];
                Visit {
                    crossing: relabel[v.crossing],
                    over: v.over,
                }
            })
            .collect();
        let mut signs = vec![0; self.signs.len()];
        for (c, &s) in self.signs.iter().enumerate() {
            signs[relabel[c]] = s;
        }
        (PlanarDiagram { visits, signs }, shift)
    }

    /// The canonical arc diagram and, for every edge of `self`, its arc.
    pub fn to_diagram(&self) -> (Diagram, Vec<ArcId>) {
        let signs = self.signs.clone();
        let (d, info) = diagram_from_paths(std::slice::from_ref(&self.visits), &|c| signs[c]);
        let (shift, rotated_arcs) = &info[0];
        let m = self.visits.len();
        let mut arcs = vec![0; m];
        for (k, &a) in rotated_arcs.iter().enumerate() {
            arcs[(k + shift) % m] = a;
        }
        (d, arcs)
    }
}

/// Which side of an edge a kink is drawn on, looking along the orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Left of the edge.
    Left,
    /// Right of the edge.
    Right,
}

/// One atomic Reidemeister move.  Edges and crossings refer to the
/// canonical Gauss code of the diagram the move is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    /// Add a kink on `edge`.
    R1Add {
        /// Edge receiving the kink.
        edge: usize,
        /// Side of the loop.
        side: Side,
        /// Sign of the new crossing.
        sign: i8,
    },
    /// Remove the kink at `crossing`.
    R1Remove {
        /// The kink crossing.
        crossing: usize,
    },
    /// Push `edge_a` across `edge_b` inside a face they share, creating a
    /// bigon; `over` says whether `edge_a` goes over.
    R2Add {
        /// The pushed edge.
        edge_a: usize,
        /// The edge it is pushed across.
        edge_b: usize,
        /// Whether `edge_a` passes over `edge_b`.
        over: bool,
    },
    /// Remove the bigon between crossings `a` and `b`.
    R2Remove {
        /// First crossing of the bigon.
        a: usize,
        /// Second crossing of the bigon.
        b: usize,
    },
    /// Slide a strand across the triangular face of crossings `a`, `b`, `c`.
    R3 {
        /// First crossing of the triangle.
        a: usize,
        /// Second crossing of the triangle.
        b: usize,
        /// Third crossing of the triangle.
        c: usize,
    },
}

impl Move {
    /// Change in crossing number caused by the move.
    pub fn crossing_delta(&self) -> i64 {
        match self {
            Move::R1Add { .. } => 1,
            Move::R1Remove { .. } => -1,
            Move::R2Add { .. } => 2,
            Move::R2Remove { .. } => -2,
            Move::R3 { .. } => 0,
        }
    }

    /// `"R1"`, `"R2"` or `"R3"`.
    pub fn kind(&self) -> &'static str {
        match self {
            Move::R1Add { .. } | Move::R1Remove { .. } => "R1",
            Move::R2Add { .. } | Move::R2Remove { .. } => "R2",
            Move::R3 { .. } => "R3",
        }
    }

    /// Parses one script line.
    pub fn parse(line: &str) -> std::result::Result<Move, String> {
        let f: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| format!("bad index {s:?}"));
        let sign = |s: &str| match s {
            "+1" | "+" | "1" => Ok(1),
            "-1" | "-" => Ok(-1),
            _ => Err(format!("bad sign {s:?}")),
        };
        match f.as_slice() {
            ["R1", e, side, s] => Ok(Move::R1Add {
                edge: num(e)?,
                side: match *side {
                    "L" => Side::Left,
                    "R" => Side::Right,
                    _ => return Err(format!("bad side {side:?}")),
                },
                sign: sign(s)?,
            }),
            ["R1-", c] => Ok(Move::R1Remove { crossing: num(c)? }),
            ["R2", a, b, dir] => Ok(Move::R2Add {
                edge_a: num(a)?,
                edge_b: num(b)?,
                over: match *dir {
                    "over" => true,
                    "under" => false,
                    _ => return Err(format!("bad direction {dir:?}")),
                },
            }),
            ["R2-", a, b] => Ok(Move::R2Remove { a: num(a)?, b: num(b)? }),
            ["R3", a, b, c] => Ok(Move::R3 {
                a: num(a)?,
                b: num(b)?,
                c: num(c)?,
            }),
            _ => Err(format!("unrecognized move {line:?}")),
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Move::R1Add { edge, side, sign } => {
                let side = if side == Side::Left { "L" } else { "R" };
                write!(f, "R1 {edge} {side} {}", if sign > 0 { "+1" } else { "-1" })
            }
            Move::R1Remove { crossing } => write!(f, "R1- {crossing}"),
            Move::R2Add { edge_a, edge_b, over } => {
                write!(f, "R2 {edge_a} {edge_b} {}", if over { "over" } else { "under" })
            }
            Move::R2Remove { a, b } => write!(f, "R2- {a} {b}"),
            Move::R3 { a, b, c } => write!(f, "R3 {a} {b} {c}"),
        }
    }
}

/// A planar diagram with a Fox coloring of its edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColoredPlanar {
    /// The diagram.
    pub diagram: PlanarDiagram,
    /// Color of each edge.
    pub colors: Vec<u64>,
    /// The modulus.
    pub modulus: u64,
}

impl ColoredPlanar {
    /// Whether the edge colors form a Fox coloring.
    pub fn is_fox(&self) -> bool {
        let m = self.colors.len();
        if m != self.diagram.visits.len() {
            return false;
        }
        let p = self.modulus;
        self.diagram.positions().iter().all(|&[o, u]| {
            let over = self.colors[o];
            over == self.colors[(o + m - 1) % m]
                && self.colors[u] == (2 * over + p - self.colors[(u + m - 1) % m]) % p
        })
    }

    /// The set of colors used, sorted.
    pub fn palette(&self) -> Vec<u64> {
        let mut v = self.colors.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Canonical form (see [`PlanarDiagram::canonical`]), colors rotated along.
    pub fn canonical(&self) -> Self {
        let (diagram, shift) = self.diagram.canonical();
        let m = self.colors.len();
        let colors = (0..m).map(|k| self.colors[(k + shift) % m]).collect();
        ColoredPlanar {
            diagram,
            colors,
            modulus: self.modulus,
        }
    }

    /// The canonical arc diagram with the induced arc coloring.
    pub fn to_colored_diagram(&self) -> ColoredDiagram {
        let (diagram, arcs) = self.diagram.to_diagram();
        let mut colors = vec![0; diagram.arc_count()];
        for (e, &a) in arcs.iter().enumerate() {
            colors[a] = self.colors[e];
        }
        if arcs.is_empty() {
            colors = vec![0];
        }
        ColoredDiagram {
            diagram,
            coloring: FoxColoring::new_unchecked(self.modulus, colors),
        }
    }

    /// The canonical planar form of a colored knot diagram.
    pub fn from_colored_diagram(cd: &ColoredDiagram) -> Result<Self> {
        let diagram = PlanarDiagram::from_diagram(&cd.diagram)?;
        let (_, arcs) = diagram.to_diagram();
        let colors = arcs.iter().map(|&a| cd.coloring.colors()[a]).collect();
        Ok(ColoredPlanar {
            diagram,
            colors,
            modulus: cd.coloring.modulus(),
        })
    }

    /// Applies one move; the result is canonical, planar and Fox-colored.
    pub fn apply(&self, mv: &Move) -> std::result::Result<ColoredPlanar, String> {
        let out = match *mv {
            Move::R1Add { edge, side, sign } => self.r1_add(edge, side, sign),
            Move::R1Remove { crossing } => self.r1_remove(crossing),
            Move::R2Add { edge_a, edge_b, over } => self.r2_add(edge_a, edge_b, over),
            Move::R2Remove { a, b } => self.r2_remove(a, b),
            Move::R3 { a, b, c } => self.r3(a, b, c),
        }?;
        Ok(out.canonical())
    }

    fn check_edge(&self, e: usize) -> std::result::Result<(), String> {
        if e >= self.colors.len() {
            return Err(format!("edge {e} does not exist"));
        }
        Ok(())
    }

    fn check_crossing(&self, c: usize) -> std::result::Result<(), String> {
        if c >= self.diagram.signs.len() {
            return Err(format!("crossing {c} does not exist"));
        }
        Ok(())
    }

    /// Rebuilds from visits with partially known colors, checking planarity
    /// and solving the unknown colors.
    pub(crate) fn rebuild(
        visits: Vec<Visit>,
        signs: Vec<i8>,
        colors: Vec<Option<u64>>,
        p: u64,
    ) -> std::result::Result<ColoredPlanar, String> {
        let diagram = compact(visits, signs);
        if !diagram.is_planar() {
            return Err("result is not planar".into());
        }
        let colors = solve_colors(&diagram, colors, p).ok_or("colors cannot be completed")?;
        let out = ColoredPlanar {
            diagram,
            colors,
            modulus: p,
        };
        if !out.is_fox() {
            return Err("colors violate the crossing relation".into());
        }
        Ok(out)
    }

    fn r1_add(&self, edge: usize, side: Side, sign: i8) -> std::result::Result<ColoredPlanar, String> {
        self.check_edge(edge).or_else(|e| {
            if self.colors.is_empty() {
                Err("the crossingless unknot has no edges".into())
            } else {
                Err(e)
            }
        })?;
        let first_over = (side == Side::Right) == (sign > 0);
        let id = self.diagram.signs.len();
        let mut visits = self.diagram.visits.clone();
        let mut colors: Vec<Option<u64>> = self.colors.iter().map(|&c| Some(c)).collect();
        let c = self.colors[edge];
        visits.splice(
            edge + 1..edge + 1,
            [
                Visit { crossing: id, over: first_over },
                Visit { crossing: id, over: !first_over },
            ],
        );
        colors.splice(edge + 1..edge + 1, [Some(c), Some(c)]);
        let mut signs = self.diagram.signs.clone();
        signs.push(sign);
        Self::rebuild(visits, signs, colors, self.modulus)
    }

    fn r1_remove(&self, crossing: usize) -> std::result::Result<ColoredPlanar, String> {
        self.check_crossing(crossing)?;
        let m = self.colors.len();
        let [o, u] = self.diagram.positions()[crossing];
        let first = if (o + 1) % m == u {
            o
        } else if (u + 1) % m == o {
            u
        } else {
            return Err(format!("crossing {crossing} is not a kink"));
        };
        let drop = [first, (first + 1) % m];
        self.drop_visits(&drop, &[crossing])
    }

    fn drop_visits(&self, drop: &[usize], crossings: &[usize]) -> std::result::Result<ColoredPlanar, String> {
        let visits = (0..self.colors.len())
            .filter(|k| !drop.contains(k))
            .map(|k| self.diagram.visits[k])
            .collect();
        let m = self.colors.len();
        // The edge entering a dropped run keeps its color, so keep the color
        // of the edge before each dropped visit and drop the visit's own edge.
        let colors = (0..m)
            .filter(|k| !drop.contains(k))
            .map(|k| Some(self.colors[k]))
            .collect();
        let mut signs = self.diagram.signs.clone();
        for &c in crossings {
            signs[c] = 0;
        }
        Self::rebuild(visits, signs, colors, self.modulus)
    }

    fn r2_remove(&self, a: usize, b: usize) -> std::result::Result<ColoredPlanar, String> {
        self.check_crossing(a)?;
        self.check_crossing(b)?;
        if a == b {
            return Err("R2 needs two distinct crossings".into());
        }
        let m = self.colors.len();
        let pos = self.diagram.positions();
        let adjacent = |x: usize, y: usize| (x + 1) % m == y || (y + 1) % m == x;
        let [oa, ua] = pos[a];
        let [ob, ub] = pos[b];
        if !adjacent(oa, ob) || !adjacent(ua, ub) {
            return Err(format!("crossings {a} and {b} do not form a bigon"));
        }
        let bigon = self.diagram.faces().iter().any(|f| {
            f.len() == 2 && {
                let cs = [f[0].crossing, f[1].crossing];
                cs == [a, b] || cs == [b, a]
            }
        });
        if !bigon {
            return Err(format!("crossings {a} and {b} do not bound a bigon face"));
        }
        let first = |x: usize, y: usize| if (x + 1) % m == y { x } else { y };
        let (fo, fu) = (first(oa, ob), first(ua, ub));
        let drop = [fo, (fo + 1) % m, fu, (fu + 1) % m];
        self.drop_visits(&drop, &[a, b])
    }

    fn r2_add(&self, ea: usize, eb: usize, over: bool) -> std::result::Result<ColoredPlanar, String> {
        self.check_edge(ea)?;
        self.check_edge(eb)?;
        if ea == eb {
            return Err("R2 needs two distinct edges".into());
        }
        let faces = self.diagram.faces();
        let face = faces
            .iter()
            .find(|f| f.iter().any(|c| c.edge == ea) && f.iter().any(|c| c.edge == eb))
            .ok_or(format!("edges {ea} and {eb} share no face"))?;
        let fwd = |e: usize| face.iter().find(|c| c.edge == e).map(|c| c.forward).unwrap();
        let (da, db) = (fwd(ea), fwd(eb));
        let reversed = da == db;
        let fb: i8 = if db { 1 } else { -1 };
        let sx = if over { fb } else { -fb };
        let n = self.diagram.signs.len();
        let (x, y) = (n, n + 1);
        let mut ins: HashMap<usize, [Visit; 2]> = HashMap::new();
        ins.insert(ea, [Visit { crossing: x, over }, Visit { crossing: y, over }]);
        let (u1, u2) = if reversed { (y, x) } else { (x, y) };
        ins.insert(eb, [Visit { crossing: u1, over: !over }, Visit { crossing: u2, over: !over }]);
        let mut visits = Vec::new();
        let mut colors = Vec::new();
        for k in 0..self.colors.len() {
            visits.push(self.diagram.visits[k]);
            colors.push(Some(self.colors[k]));
            if let Some(pair) = ins.get(&k) {
                let keep = if pair[0].over { Some(self.colors[k]) } else { None };
                visits.extend_from_slice(pair);
                colors.extend([keep, keep]);
            }
        }
        let mut signs = self.diagram.signs.clone();
        signs.extend([sx, -sx]);
        let out = Self::rebuild(visits, signs, colors, self.modulus)?;
        Ok(out)
    }

    fn r3(&self, a: usize, b: usize, c: usize) -> std::result::Result<ColoredPlanar, String> {
        for x in [a, b, c] {
            self.check_crossing(x)?;
        }
        let set = [a, b, c];
        if a == b || b == c || a == c {
            return Err("R3 needs three distinct crossings".into());
        }
        let m = self.colors.len();
        let visits = &self.diagram.visits;
        let faces = self.diagram.faces();
        for f in faces.iter().filter(|f| f.len() == 3) {
            let mut cs: Vec<usize> = f.iter().map(|c| c.crossing).collect();
            cs.sort_unstable();
            let mut want = set;
            want.sort_unstable();
            if cs != want {
                continue;
            }
            let edges: Vec<usize> = f.iter().map(|c| c.edge).collect();
            let ok_edges = edges.iter().all(|&e| {
                let (x, y) = (visits[e].crossing, visits[(e + 1) % m].crossing);
                x != y && set.contains(&x) && set.contains(&y)
            });
            if !ok_edges {
                continue;
            }
            let mut kinds: Vec<u8> = edges
                .iter()
                .map(|&e| visits[e].over as u8 + visits[(e + 1) % m].over as u8)
                .collect();
            kinds.sort_unstable();
            if kinds != [0, 1, 2] {
                return Err(format!("triangle {a} {b} {c} has no strand passing under both others"));
            }
            let mut nv = visits.clone();
            let mut colors: Vec<Option<u64>> = self.colors.iter().map(|&c| Some(c)).collect();
            for &e in &edges {
                nv.swap(e, (e + 1) % m);
                colors[e] = None;
            }
            return Self::rebuild(nv, self.diagram.signs.clone(), colors, self.modulus);
        }
        Err(format!("crossings {a} {b} {c} do not bound a triangular face"))
    }
}

/// Renumbers crossings densely (by first appearance), dropping signs of
/// crossings that no longer occur.
fn compact(visits: Vec<Visit>, signs: Vec<i8>) -> PlanarDiagram {
    let mut ids = vec![usize::MAX; signs.len()];
    let mut new_signs = Vec::new();
    let visits = visits
        .into_iter()
        .map(|v| {
            if ids[v.crossing] == usize::MAX {
                ids[v.crossing] = new_signs.len();
                new_signs.push(signs[v.crossing]);
            }
            Visit {
                crossing: ids[v.crossing],
                over: v.over,
            }
        })
        .collect();
    PlanarDiagram {
        visits,
        signs: new_signs,
    }
}

/// Fills unknown edge colors by propagating the crossing relations.
/// Returns `None` if some color stays undetermined.
pub fn solve_colors(d: &PlanarDiagram, mut colors: Vec<Option<u64>>, p: u64) -> Option<Vec<u64>> {
    let m = colors.len();
    if m == 0 {
        return Some(Vec::new());
    }
    let pos = d.positions();
    let mut changed = true;
    while changed {
        changed = false;
        for k in 0..m {
            let prev = (k + m - 1) % m;
            let (a, b) = (colors[prev], colors[k]);
            if a.is_some() == b.is_some() {
                continue;
            }
            let v = d.visits[k];
            if v.over {
                colors[prev] = colors[prev].or(b);
                colors[k] = colors[k].or(a);
            } else {
                let o = pos[v.crossing][0];
                let Some(over) = colors[o].or(colors[(o + m - 1) % m]) else {
                    continue;
                };
                match (a, b) {
                    (Some(a), None) => colors[k] = Some((2 * over + p - a) % p),
                    (None, Some(b)) => colors[prev] = Some((2 * over + p - b) % p),
                    _ => unreachable!(),
                }
            }
            changed = true;
        }
    }
    colors.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::torus_knot_diagram;

    fn colored_torus(p: u64) -> ColoredPlanar {
        let d = torus_knot_diagram(p).unwrap();
        let basis = crate::coloring::coloring_space(&d, p).unwrap().basis;
        let cd = ColoredDiagram::new(d, basis[1].clone()).unwrap();
        ColoredPlanar::from_colored_diagram(&cd).unwrap()
    }

    #[test]
    fn torus_faces() {
        for p in [3, 5, 11] {
            let d = PlanarDiagram::from_diagram(&torus_knot_diagram(p).unwrap()).unwrap();
            assert!(d.is_planar());
            assert_eq!(d.faces().len(), p as usize + 2);
            // Flipping one sign breaks planarity of a twist region.
            let mut bad = d.clone();
            bad.signs[0] = -bad.signs[0];
            assert!(!bad.is_planar());
        }
    }

    #[test]
    fn canonical_round_trip() {
        let d = PlanarDiagram::from_diagram(&torus_knot_diagram(7).unwrap()).unwrap();
        let (c, shift) = d.canonical();
        assert_eq!(shift, 0);
        assert_eq!(c, d);
        let (dd, _) = d.to_diagram();
        assert_eq!(PlanarDiagram::from_diagram(&dd).unwrap(), c);
    }

    #[test]
    fn kink_round_trip() {
        let t = colored_torus(5);
        assert!(t.is_fox());
        for side in [Side::Left, Side::Right] {
            for sign in [1, -1] {
                let k = t.apply(&Move::R1Add { edge: 3, side, sign }).unwrap();
                assert_eq!(k.diagram.crossing_count(), 6);
                assert_eq!(k.palette(), t.palette());
                let kink = (0..6)
                    .find(|&c| t.apply(&Move::R1Add { edge: 3, side, sign }).unwrap().r1_remove(c).is_ok())
                    .unwrap();
                let back = k.apply(&Move::R1Remove { crossing: kink }).unwrap();
                assert_eq!(back.diagram.crossing_count(), 5);
            }
        }
    }

    #[test]
    fn r2_round_trip() {
        let t = colored_torus(5);
        let faces = t.diagram.faces();
        let mut made = 0;
        for f in &faces {
            for a in f {
                for b in f {
                    if a.edge == b.edge {
                        continue;
                    }
                    for over in [true, false] {
                        let r = t
                            .apply(&Move::R2Add {
                                edge_a: a.edge,
                                edge_b: b.edge,
                                over,
                            })
                            .unwrap();
                        assert_eq!(r.diagram.crossing_count(), 7);
                        made += 1;
                        let undo = (0..7)
                            .flat_map(|x| (0..7).map(move |y| (x, y)))
                            .filter(|&(x, y)| x < y)
                            .any(|(x, y)| {
                                r.apply(&Move::R2Remove { a: x, b: y })
                                    .map(|s| s.diagram.crossing_count() == 5)
                                    .unwrap_or(false)
                            });
                        assert!(undo);
                    }
                }
            }
        }
        assert!(made > 0);
    }

    #[test]
    fn move_text_round_trip() {
        for s in ["R1 3 L +1", "R1 0 R -1", "R2 4 9 over", "R2 1 2 under", "R3 0 1 2", "R1- 4", "R2- 1 3"] {
            assert_eq!(Move::parse(s).unwrap().to_string(), s);
        }
        assert!(Move::parse("R4 1").is_err());
        assert!(Move::parse("R1 x L +1").is_err());
    }
}
