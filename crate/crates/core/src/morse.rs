//! Morse words: diagrams read from top to bottom as a sequence of crossings,
//! cups (minima, which open a pair of strands) and caps (maxima, which close
//! one).
//!
//! This is the layer the generators and the Teneva block templates are
//! written in.  A word with `top > 0` strands is closed like a braid: the
//! strands leaving the bottom return to the top on the right.  Tracing a word
//! yields Gauss paths with geometric crossing signs; propagating top colors
//! yields the Fox coloring level by level.

use crate::diagram::Visit;
use crate::error::{Error, Result};

/// One letter of a Morse word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    /// Strands at positions `pos` and `pos + 1` cross.  When `left_over`
    /// holds, the strand coming from the top-left passes over.
    Cross {
        /// Left position of the crossing pair.
        pos: usize,
        /// Whether the top-left strand is the over-strand.
        left_over: bool,
    },
    /// A new pair of strands is born at positions `pos`, `pos + 1` with the
    /// given color.
    Cup {
        /// Position of the new pair.
        pos: usize,
        /// Color of the arc through the cup (ignored by geometry).
        color: u64,
    },
    /// The strands at positions `pos`, `pos + 1` join and disappear.
    Cap {
        /// Position of the closing pair.
        pos: usize,
    },
}

/// A Morse word with `top` strands entering at the top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorseWord {
    /// Number of strands at the top (and the bottom).
    pub top: usize,
    /// The letters from top to bottom.
    pub letters: Vec<Letter>,
}

/// The result of tracing a word.
#[derive(Debug, Clone)]
pub struct Traced {
    /// One closed path of visits per component; crossing ids are letter indices.
    pub paths: Vec<Vec<Visit>>,
    /// Geometric sign of every crossing letter, indexed by letter (0 elsewhere).
    pub signs: Vec<i8>,
    /// For each path and visit, the `(level, position)` of the edge leaving it.
    pub out_edges: Vec<Vec<(usize, usize)>>,
}

impl MorseWord {
    /// Number of strands below each letter; `widths[t]` is the width above
    /// letter `t` and `widths[len]` the width at the bottom.
    pub fn widths(&self) -> Result<Vec<usize>> {
        let mut w = self.top;
        let mut out = vec![w];
        for (t, l) in self.letters.iter().enumerate() {
            match *l {
                Letter::Cross { pos, .. } => {
                    if pos + 1 >= w {
                        return Err(Error::BadDiagram(format!("crossing {t} out of range")));
                    }
                }
                Letter::Cup { pos, .. } => {
                    if pos > w {
                        return Err(Error::BadDiagram(format!("cup {t} out of range")));
                    }
                    w += 2;
                }
                Letter::Cap { pos } => {
                    if pos + 1 >= w {
                        return Err(Error::BadDiagram(format!("cap {t} out of range")));
                    }
                    w -= 2;
                }
            }
            out.push(w);
        }
        if w != self.top {
            return Err(Error::BadDiagram("word does not close up".into()));
        }
        Ok(out)
    }

    /// Traces every component, recording visits, crossing signs and the
    /// location of the edge that leaves each visit.
    pub fn trace(&self) -> Result<Traced> {
        let widths = self.widths()?;
        let t_max = self.letters.len();
        let mut seen: Vec<Vec<bool>> = widths.iter().map(|&w| vec![false; w]).collect();
        let mut dirs: Vec<[Option<(i8, i8)>; 2]> = vec![[None, None]; t_max];
        let mut paths = Vec::new();
        let mut out_edges = Vec::new();
        loop {
            let start = (0..=t_max).find_map(|t| seen[t].iter().position(|s| !s).map(|q| (t, q)));
            let Some((t0, q0)) = start else { break };
            let (mut t, mut q, mut down) = (t0, q0, true);
            let mut path = Vec::new();
            let mut outs = Vec::new();
            let mut steps = 0usize;
            loop {
                if steps > 0 && (t, q, down) == (t0, q0, true) {
                    break;
                }
                steps += 1;
                if steps > 8 * (t_max + 2) * (widths.iter().max().unwrap() + 2) {
                    return Err(Error::Internal("Morse trace does not terminate".into()));
                }
                seen[t][q] = true;
                if down {
                    if t == t_max {
                        t = 0;
                        continue;
                    }
                    match self.letters[t] {
                        Letter::Cross { pos: i, left_over } => {
                            let hit = if q == i {
                                Some((left_over, (1, -1), i + 1))
                            } else if q == i + 1 {
                                Some((!left_over, (-1, -1), i))
                            } else {
                                None
                            };
                            t += 1;
                            if let Some((over, dir, q2)) = hit {
                                path.push(Visit { crossing: t - 1, over });
                                dirs[t - 1][over as usize] = Some(dir);
                                q = q2;
                                outs.push((t, q));
                            }
                        }
                        Letter::Cup { pos: i, .. } => {
                            if q >= i {
                                q += 2;
                            }
                            t += 1;
                        }
                        Letter::Cap { pos: i } => {
                            if q == i || q == i + 1 {
                                q = 2 * i + 1 - q;
                                down = false;
                            } else {
                                if q > i + 1 {
                                    q -= 2;
                                }
                                t += 1;
                            }
                        }
                    }
                } else {
                    if t == 0 {
                        t = t_max;
                        continue;
                    }
                    match self.letters[t - 1] {
                        Letter::Cross { pos: i, left_over } => {
                            let hit = if q == i + 1 {
                                Some((left_over, (-1, 1), i))
                            } else if q == i {
                                Some((!left_over, (1, 1), i + 1))
                            } else {
                                None
                            };
                            t -= 1;
                            if let Some((over, dir, q2)) = hit {
                                path.push(Visit { crossing: t, over });
                                dirs[t][over as usize] = Some(dir);
                                q = q2;
                                outs.push((t, q));
                            }
                        }
                        Letter::Cup { pos: i, .. } => {
                            if q == i || q == i + 1 {
                                q = 2 * i + 1 - q;
                                down = true;
                            } else {
                                if q >= i + 2 {
                                    q -= 2;
                                }
                                t -= 1;
                            }
                        }
                        Letter::Cap { pos: i } => {
                            if q >= i {
                                q += 2;
                            }
                            t -= 1;
                        }
                    }
                }
            }
            paths.push(path);
            out_edges.push(outs);
        }
        let signs = dirs
            .iter()
            .map(|d| match d {
                [Some(u), Some(o)] => {
                    let cross = o.0 as i32 * u.1 as i32 - o.1 as i32 * u.0 as i32;
                    if cross > 0 {
                        1
                    } else {
                        -1
                    }
                }
                _ => 0,
            })
            .collect();
        Ok(Traced {
            paths,
            signs,
            out_edges,
        })
    }

    /// Propagates colors from the top strands down through the word modulo
    /// `p`, using the colors stored in the cups.  Returns the colors at every
    /// level, or an error when a cap joins two different colors or the bottom
    /// does not match the top.
    pub fn propagate(&self, top: &[u64], p: u64) -> Result<Vec<Vec<u64>>> {
        if top.len() != self.top {
            return Err(Error::InvalidInput("wrong number of top colors".into()));
        }
        let mut v: Vec<u64> = top.iter().map(|c| c % p).collect();
        let mut levels = vec![v.clone()];
        for (t, l) in self.letters.iter().enumerate() {
            match *l {
                Letter::Cross { pos: i, left_over } => {
                    let (a, b) = (v[i], v[i + 1]);
                    if left_over {
                        v[i] = (2 * a + p - b) % p;
                        v[i + 1] = a;
                    } else {
                        v[i] = b;
                        v[i + 1] = (2 * b + p - a) % p;
                    }
                }
                Letter::Cup { pos, color } => {
                    v.splice(pos..pos, [color % p, color % p]);
                }
                Letter::Cap { pos } => {
                    if v[pos] != v[pos + 1] {
                        return Err(Error::BadDiagram(format!(
                            "cap {t} joins colors {} and {}",
                            v[pos],
                            v[pos + 1]
                        )));
                    }
                    v.drain(pos..pos + 2);
                }
            }
            levels.push(v.clone());
        }
        if v.as_slice() != &levels[0][..] {
            return Err(Error::BadDiagram("bottom colors differ from top colors".into()));
        }
        Ok(levels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn twist(n: usize, left_over: bool) -> MorseWord {
        MorseWord {
            top: 2,
            letters: vec![Letter::Cross { pos: 0, left_over }; n],
        }
    }

    #[test]
    fn twist_signs() {
        let pos = twist(3, false).trace().unwrap();
        assert_eq!(pos.paths.len(), 1);
        assert!(pos.signs.iter().all(|&s| s == 1));
        let neg = twist(3, true).trace().unwrap();
        assert!(neg.signs.iter().all(|&s| s == -1));
    }

    #[test]
    fn alternating_visits() {
        let t = twist(5, true).trace().unwrap();
        let path = &t.paths[0];
        assert_eq!(path.len(), 10);
        for w in path.windows(2) {
            assert_ne!(w[0].over, w[1].over);
        }
    }

    #[test]
    fn propagation_wraps() {
        let w = twist(5, true);
        let levels = w.propagate(&[1, 0], 5).unwrap();
        assert_eq!(levels[1], vec![2, 1]);
        assert!(w.propagate(&[1, 0], 7).is_err());
    }

    #[test]
    fn cup_cap_unknot() {
        let w = MorseWord {
            top: 0,
            letters: vec![Letter::Cup { pos: 0, color: 0 }, Letter::Cap { pos: 0 }],
        };
        let t = w.trace().unwrap();
        assert_eq!(t.paths.len(), 1);
        assert!(t.paths[0].is_empty());
    }
}
