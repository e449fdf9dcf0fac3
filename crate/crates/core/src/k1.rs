//! Removal of color `k₁` after the last set of Teneva transformations.
//!
//! After the last set, color `k₁` survives on a single short arc that runs
//! under two strands of equal color.  It is removed by rerouting an
//! under-only segment of the knot: a piece of strand that only passes under
//! other strands can be redrawn along any path in the plane, provided it
//! stays below everything it meets.  The new path is found by breadth-first
//! search over (face, color) pairs, allowing only colors of the target
//! palette; a few Reidemeister II pokes near the segment open up the faces
//! when no direct path exists.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::diagram::Visit;
use crate::engine::{materialize_planar, BlockState};
use crate::error::{Error, Result};
use crate::planar::{ColoredPlanar, Move};

/// The maximal run of edges `s..=e` (cyclic) around `edge` whose interior
/// visits are all under-visits.  `None` if the whole knot is under-only.
pub fn under_segment(cp: &ColoredPlanar, edge: usize) -> Option<Vec<usize>> {
    let v = cp.diagram.visits();
    let m = v.len();
    let mut s = edge;
    let mut steps = 0;
    while !v[s].over {
        s = (s + m - 1) % m;
        steps += 1;
        if steps > m {
            return None;
        }
    }
    let mut seg = vec![s];
    let mut k = s;
    while !v[(k + 1) % m].over {
        k = (k + 1) % m;
        seg.push(k);
    }
    Some(seg)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

/// Redraws the under-only segment `seg` (consecutive edges) along a new path
/// whose strand colors all satisfy `allowed`.  Returns the rerouted diagram
/// (canonical), or `None` if no such path exists.
pub(crate) fn reroute(cp: &ColoredPlanar, seg: &[usize], allowed: &dyn Fn(u64) -> bool) -> Option<ColoredPlanar> {
    let d = &cp.diagram;
    let v = d.visits();
    let m = v.len();
    let p = cp.modulus;
    let in_seg: Vec<bool> = {
        let mut b = vec![false; m];
        for &e in seg {
            b[e] = true;
        }
        b
    };
    let seg_crossings: BTreeSet<usize> = seg[1..].iter().map(|&e| v[e].crossing).collect();
    let faces = d.faces();
    let mut edge_faces: Vec<Vec<(usize, bool)>> = vec![Vec::new(); m];
    for (fi, f) in faces.iter().enumerate() {
        for c in f {
            edge_faces[c.edge].push((fi, c.forward));
        }
    }
    let mut uf = UnionFind((0..faces.len()).collect());
    for &e in seg {
        if let [(a, _), (b, _)] = edge_faces[e][..] {
            uf.union(a, b);
        }
    }
    let root: Vec<usize> = (0..faces.len()).map(|f| uf.find(f)).collect();
    // Corners of non-segment edges, grouped by merged face.
    let mut exits: HashMap<usize, Vec<(usize, bool, usize)>> = HashMap::new();
    for g in 0..m {
        if in_seg[g] || edge_faces[g].len() != 2 {
            continue;
        }
        let [(fa, da), (fb, db)] = [edge_faces[g][0], edge_faces[g][1]];
        exits.entry(root[fa]).or_default().push((g, da, root[fb]));
        exits.entry(root[fb]).or_default().push((g, db, root[fa]));
    }
    let s = seg[0];
    let e = *seg.last().unwrap();
    let start = (root[edge_faces[s][0].0], cp.colors[s]);
    let goal = (root[edge_faces[e][0].0], cp.colors[e]);
    // Breadth-first search over (merged face, strand color).
    let mut parent: HashMap<(usize, u64), Option<((usize, u64), usize, bool)>> = HashMap::new();
    parent.insert(start, None);
    let mut queue = VecDeque::from([start]);
    while let Some(state) = queue.pop_front() {
        if state == goal {
            break;
        }
        let Some(list) = exits.get(&state.0) else { continue };
        for &(g, fwd, other) in list {
            let c = (2 * cp.colors[g] + p - state.1) % p;
            if !allowed(c) {
                continue;
            }
            let next = (other, c);
            if let std::collections::hash_map::Entry::Vacant(slot) = parent.entry(next) {
                slot.insert(Some((state, g, fwd)));
                queue.push_back(next);
            }
        }
    }
    if !parent.contains_key(&goal) {
        return None;
    }
    let mut path = Vec::new();
    let mut cur = goal;
    while let Some(Some((prev, g, fwd))) = parent.get(&cur) {
        path.push((*g, *fwd, cur.1));
        cur = *prev;
    }
    path.reverse();
    splice(cp, seg, &seg_crossings, &path, false).or_else(|| splice(cp, seg, &seg_crossings, &path, true))
}

/// Builds the diagram with the segment replaced by `path`: a list of
/// `(edge crossed, forward in the departing face, strand color after)`.
fn splice(
    cp: &ColoredPlanar,
    seg: &[usize],
    seg_crossings: &BTreeSet<usize>,
    path: &[(usize, bool, u64)],
    reverse_shared: bool,
) -> Option<ColoredPlanar> {
    let d = &cp.diagram;
    let v = d.visits();
    let m = v.len();
    let n = d.crossing_count();
    let mut signs: Vec<i8> = d.signs().to_vec();
    let mut over_ins: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut under_ins = Vec::new();
    for (i, &(g, fwd, c)) in path.iter().enumerate() {
        let id = n + i;
        signs.push(if fwd { -1 } else { 1 });
        over_ins.entry(g).or_default().push(id);
        under_ins.push((id, c));
    }
    if reverse_shared {
        for list in over_ins.values_mut() {
            list.reverse();
        }
    }
    let interior: BTreeSet<usize> = seg[1..].iter().copied().collect();
    let s = seg[0];
    let mut visits = Vec::new();
    let mut colors = Vec::new();
    for k in 0..m {
        let keep = !interior.contains(&k) && !seg_crossings.contains(&v[k].crossing);
        if keep {
            visits.push(v[k]);
            colors.push(Some(cp.colors[k]));
        }
        if k == s {
            for &(id, c) in &under_ins {
                visits.push(Visit { crossing: id, over: false });
                colors.push(Some(c));
            }
        }
        if let Some(list) = over_ins.get(&k) {
            for &id in list {
                visits.push(Visit { crossing: id, over: true });
                colors.push(Some(cp.colors[k]));
            }
        }
    }
    for &c in seg_crossings {
        signs[c] = 0;
    }
    ColoredPlanar::rebuild(visits, signs, colors, cp.modulus)
        .ok()
        .map(|x| x.canonical())
}

/// Reroutes the under-only segment holding the single edge of color `bad`.
pub fn reroute_color(cp: &ColoredPlanar, bad: u64, target: &BTreeSet<u64>) -> Option<ColoredPlanar> {
    let edges: Vec<usize> = (0..cp.colors.len()).filter(|&k| cp.colors[k] == bad).collect();
    let first = *edges.first()?;
    let seg = under_segment(cp, first)?;
    if !edges.iter().all(|e| seg.contains(e)) {
        return None;
    }
    let out = reroute(cp, &seg, &|c| target.contains(&c))?;
    out.colors.iter().all(|c| target.contains(c)).then_some(out)
}

/// Edges of the arc through `edge`: the maximal run of edges between
/// under-visits.
fn arc_edges(cp: &ColoredPlanar, edge: usize) -> Vec<usize> {
    let v = cp.diagram.visits();
    let m = v.len();
    let mut s = edge;
    let mut steps = 0;
    while v[s].over && steps < m {
        s = (s + m - 1) % m;
        steps += 1;
    }
    let mut out = vec![s];
    let mut k = s;
    while v[(k + 1) % m].over && out.len() < m {
        k = (k + 1) % m;
        out.push(k);
    }
    out
}

/// The k₁ configuration: the single edge of color `k1` and the edges of
/// the two arcs it passes under.
struct Hook {
    edge: usize,
    over_arcs: Vec<usize>,
}

fn find_hook(cp: &ColoredPlanar, k1: u64) -> Option<Hook> {
    let edges: Vec<usize> = (0..cp.colors.len()).filter(|&k| cp.colors[k] == k1).collect();
    let &[edge] = &edges[..] else { return None };
    let v = cp.diagram.visits();
    let m = v.len();
    if v[edge].over || v[(edge + 1) % m].over {
        return None;
    }
    let pos = cp.diagram.positions();
    let mut over_arcs = Vec::new();
    for visit in [edge, (edge + 1) % m] {
        let o = pos[v[visit].crossing][0];
        over_arcs.extend(arc_edges(cp, o));
    }
    Some(Hook { edge, over_arcs })
}

/// Pokes of an edge colored `w` under one of the hook's over-arcs, nearest
/// to the hook first.
fn hook_pokes(cp: &ColoredPlanar, hook: &Hook, w: u64) -> Vec<Move> {
    let faces = cp.diagram.faces();
    let m = cp.colors.len();
    let mut edge_faces: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (fi, f) in faces.iter().enumerate() {
        for c in f {
            edge_faces[c.edge].push(fi);
        }
    }
    // Face distance from the hook edge.
    let mut dist = vec![usize::MAX; faces.len()];
    let mut queue = VecDeque::new();
    for &f in &edge_faces[hook.edge] {
        dist[f] = 0;
        queue.push_back(f);
    }
    while let Some(f) = queue.pop_front() {
        for c in &faces[f] {
            for &g in &edge_faces[c.edge] {
                if dist[g] == usize::MAX {
                    dist[g] = dist[f] + 1;
                    queue.push_back(g);
                }
            }
        }
    }
    let mut cands = Vec::new();
    for (fi, f) in faces.iter().enumerate() {
        for a in f.iter().filter(|a| cp.colors[a.edge] == w) {
            for b in f.iter().filter(|b| hook.over_arcs.contains(&b.edge)) {
                if a.edge != b.edge {
                    cands.push((dist[fi], a.edge, b.edge));
                }
            }
        }
    }
    cands.sort_unstable();
    cands.dedup();
    cands
        .into_iter()
        .map(|(_, a, b)| Move::R2Add {
            edge_a: a,
            edge_b: b,
            over: false,
        })
        .collect()
}

/// Removes color `k₁` from the final-stage diagram.
///
/// The `k₁` edge is the middle of a strand of color `c` (1 for odd `k₁`, 2
/// for even) passing under two arcs of color `x = (k₁ + c)/2`.  A strand of
/// color `w = 2x − k₁ − 1` is poked under each of these arcs, leaving
/// fingers of color `k₁ + 1`; the `k₁` strand is then rerouted under the
/// fingers and other nearby strands without ever taking color `k₁`.
pub fn remove_k1(state: &BlockState) -> Result<ColoredPlanar> {
    if state.stage != state.terms.len() || state.terms.is_empty() {
        return Err(Error::Stage("k1 removal needs the final stage".into()));
    }
    let cp = materialize_planar(state)?;
    let p = state.p;
    let k1 = state.terms[0];
    let mut target = state.palette.clone();
    target.remove(&k1);
    let c = if k1 % 2 == 1 { 1 } else { 2 };
    let x = (k1 + c) / 2;
    let w = (2 * x + p - k1 - 1) % p;
    if let Some(out) = reroute_color(&cp, k1, &target) {
        return Ok(out);
    }
    let fail = || Error::Internal(format!("could not remove color {k1}"));
    let hook = find_hook(&cp, k1).ok_or_else(fail)?;
    for first in hook_pokes(&cp, &hook, w) {
        let Ok(one) = cp.apply(&first) else { continue };
        if let Some(out) = reroute_color(&one, k1, &target) {
            return Ok(out);
        }
        let Some(hook1) = find_hook(&one, k1) else { continue };
        for second in hook_pokes(&one, &hook1, w) {
            let Ok(two) = one.apply(&second) else { continue };
            if let Some(out) = reroute_color(&two, k1, &target) {
                return Ok(out);
            }
        }
    }
    Err(fail())
}
