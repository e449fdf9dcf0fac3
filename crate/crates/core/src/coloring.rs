//! Fox colorings: validity, coloring spaces over prime fields, the knot
//! determinant, palettes and desk-scale enumeration.
//!
//! The coloring matrix has one row per crossing with entries `+2` for the
//! over-arc and `−1` for each under-arc (summed when roles coincide), so a
//! coloring is a null vector of the matrix taken modulo `n`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;

use crate::diagram::{parse_num, Diagram};
use crate::error::{invalid, parse_err, Error, Result};
use crate::linalg::{bareiss_det, multimodular_det, nullspace_mod, sparse_rank_mod, SparseRow};
use crate::primes::Modulus;

/// Default cap on the number of colorings [`enumerate_nontrivial_colorings`] may visit.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Diagrams up to this many crossings use Bareiss; larger ones use the
/// multi-modular determinant.
const BAREISS_LIMIT: usize = 60;

/// An assignment of residues modulo `n` to the arcs of a diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FoxColoring {
    modulus: u64,
    colors: Vec<u64>,
}

impl FoxColoring {
    /// A coloring modulo `n > 1`; colors are reduced modulo `n`.
    pub fn new(modulus: u64, colors: Vec<u64>) -> Result<Self> {
        Modulus::new(modulus)?;
        let colors = colors.into_iter().map(|c| c % modulus).collect();
        Ok(FoxColoring { modulus, colors })
    }

    pub(crate) fn new_unchecked(modulus: u64, colors: Vec<u64>) -> Self {
        FoxColoring { modulus, colors }
    }

    /// The constant coloring with color `c`.
    pub fn constant(modulus: u64, arcs: usize, c: u64) -> Result<Self> {
        FoxColoring::new(modulus, vec![c; arcs])
    }

    /// The modulus.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Color of each arc.
    pub fn colors(&self) -> &[u64] {
        &self.colors
    }

    /// Serializes to the coloring text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("COLORING mod={}\n", self.modulus);
        for (a, c) in self.colors.iter().enumerate() {
            out.push_str(&format!("{a} {c}\n"));
        }
        out
    }

    /// Parses the coloring text format; arc ids must be `0, 1, 2, …` in order.
    pub fn parse(text: &str) -> Result<Self> {
        let mut modulus = None;
        let mut colors = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let fields: Vec<&str> = raw.split_whitespace().collect();
            match fields.as_slice() {
                [] => continue,
                ["COLORING", m] if modulus.is_none() => {
                    let Some(v) = m.strip_prefix("mod=") else {
                        return parse_err(line, "expected mod=<n>");
                    };
                    modulus = Some(parse_num::<u64>(v, line)?);
                }
                [a, c] if modulus.is_some() => {
                    let a: usize = parse_num(a, line)?;
                    if a != colors.len() {
                        return parse_err(line, format!("arc {a} out of order"));
                    }
                    let c: u64 = parse_num(c, line)?;
                    if c >= modulus.unwrap() {
                        return parse_err(line, format!("color {c} not reduced"));
                    }
                    colors.push(c);
                }
                _ => return parse_err(line, format!("unexpected line {raw:?}")),
            }
        }
        let Some(m) = modulus else {
            return parse_err(1, "missing COLORING header");
        };
        FoxColoring::new(m, colors)
    }
}

/// A diagram together with a coloring of its arcs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColoredDiagram {
    /// The diagram.
    pub diagram: Diagram,
    /// The coloring.
    pub coloring: FoxColoring,
}

impl ColoredDiagram {
    /// Pairs a diagram with a coloring, checking the Fox condition.
    pub fn new(diagram: Diagram, coloring: FoxColoring) -> Result<Self> {
        if !is_fox_coloring(&diagram, &coloring)? {
            return Err(Error::BadDiagram("coloring violates the crossing relation".into()));
        }
        Ok(ColoredDiagram { diagram, coloring })
    }

    /// The palette of the coloring.
    pub fn palette(&self) -> Palette {
        palette(&self.coloring)
    }

    /// PD block followed by the coloring block.
    pub fn to_text(&self) -> String {
        format!("{}{}", self.diagram.to_pd_text(), self.coloring.to_text())
    }

    /// Parses a PD block followed by a coloring block.
    pub fn parse(text: &str) -> Result<Self> {
        let split = text
            .lines()
            .position(|l| l.starts_with("COLORING"))
            .ok_or(Error::Parse {
                line: 1,
                message: "missing COLORING block".into(),
            })?;
        let lines: Vec<&str> = text.lines().collect();
        let diagram = Diagram::parse_pd(&lines[..split].join("\n"))?;
        let coloring = FoxColoring::parse(&lines[split..].join("\n")).map_err(|e| match e {
            Error::Parse { line, message } => Error::Parse {
                line: line + split,
                message,
            },
            other => other,
        })?;
        ColoredDiagram::new(diagram, coloring)
    }
}

/// The set of colors a coloring uses.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Palette {
    /// The colors, in increasing order.
    pub colors: BTreeSet<u64>,
}

impl Palette {
    /// Number of distinct colors.
    pub fn size(&self) -> usize {
        self.colors.len()
    }
}

impl fmt::Display for Palette {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.colors.iter().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// The image of the coloring.
pub fn palette(c: &FoxColoring) -> Palette {
    Palette {
        colors: c.colors.iter().copied().collect(),
    }
}

/// A coloring is nontrivial when it uses at least two colors.
pub fn is_nontrivial(c: &FoxColoring) -> bool {
    palette(c).size() >= 2
}

/// Whether `under_out ≡ 2·over − under_in (mod n)` holds at every crossing.
pub fn is_fox_coloring(d: &Diagram, c: &FoxColoring) -> Result<bool> {
    if c.colors.len() < d.arc_count() {
        return Err(Error::MissingArc(c.colors.len()));
    }
    let n = c.modulus;
    Ok(d.crossings().iter().all(|x| {
        let (o, a, b) = (c.colors[x.over], c.colors[x.under_in], c.colors[x.under_out]);
        (2 * (o as u128) + n as u128 - a as u128) % n as u128 == b as u128
    }))
}

/// One row per crossing: `+2` on the over-arc, `−1` on each under-arc.
pub fn coloring_matrix(d: &Diagram) -> Vec<Vec<(usize, i64)>> {
    d.crossings()
        .iter()
        .map(|x| {
            let mut row: Vec<(usize, i64)> = Vec::with_capacity(3);
            for (arc, v) in [(x.over, 2), (x.under_in, -1), (x.under_out, -1)] {
                match row.iter_mut().find(|(a, _)| *a == arc) {
                    Some(e) => e.1 += v,
                    None => row.push((arc, v)),
                }
            }
            row.retain(|&(_, v)| v != 0);
            row.sort_unstable();
            row
        })
        .collect()
}

fn reduce_rows(rows: &[Vec<(usize, i64)>], p: u64) -> Vec<SparseRow> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|&(c, v)| (c, v.rem_euclid(p as i64) as u64))
                .filter(|&(_, v)| v != 0)
                .collect()
        })
        .collect()
}

/// The solutions of the crossing relations over `GF(p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringSpace {
    /// The prime modulus.
    pub modulus: Modulus,
    /// Dimension of the space.
    pub dimension: usize,
    /// A basis: first the all-ones coloring, then vectors in reduced echelon
    /// form whose first nonzero coordinate is 1.
    pub basis: Vec<FoxColoring>,
}

fn prime_modulus(p: u64) -> Result<Modulus> {
    Modulus::prime(p)
}

/// Dimension of the coloring space over `GF(p)`, by sparse elimination.
/// Suitable for large diagrams.
pub fn coloring_dimension(d: &Diagram, p: u64) -> Result<usize> {
    prime_modulus(p)?;
    let rows = reduce_rows(&coloring_matrix(d), p);
    Ok(d.arc_count() - sparse_rank_mod(&rows, p))
}

/// A normalized basis of the coloring space over `GF(p)`.
pub fn coloring_space(d: &Diagram, p: u64) -> Result<ColoringSpace> {
    let modulus = prime_modulus(p)?;
    let n = d.arc_count();
    let dense: Vec<Vec<u64>> = reduce_rows(&coloring_matrix(d), p)
        .into_iter()
        .map(|r| {
            let mut row = vec![0; n];
            for (c, v) in r {
                row[c] = v;
            }
            row
        })
        .collect();
    let null = nullspace_mod(dense, n, p);
    // Row-reduce the null space; the all-ones vector is the sum of the
    // reduced rows, so it can replace the row with pivot column 0.
    let (reduced, pivots) = crate::linalg::rref_mod(null, n, p);
    let mut basis = vec![FoxColoring::new_unchecked(p, vec![1 % p; n])];
    for (row, &c) in reduced.into_iter().zip(&pivots) {
        if c != 0 {
            basis.push(FoxColoring::new_unchecked(p, row));
        }
    }
    if basis.len() != pivots.len() {
        return Err(Error::Internal("constant coloring missing from null space".into()));
    }
    Ok(ColoringSpace {
        modulus,
        dimension: basis.len(),
        basis,
    })
}

/// Number of colorings modulo the prime `p`: `p^dimension`.
pub fn count_colorings(d: &Diagram, p: u64) -> Result<BigUint> {
    let dim = coloring_dimension(d, p)?;
    Ok(BigUint::from(p).pow(dim as u32))
}

/// The knot determinant: `|det|` of the coloring matrix with its last row
/// and column deleted.
pub fn determinant(d: &Diagram) -> Result<BigUint> {
    let n = d.arc_count();
    if d.crossing_count() == 0 || d.crossing_count() != n {
        return Err(Error::BadDiagram(
            "determinant needs a knot diagram with at least one crossing".into(),
        ));
    }
    let minor: Vec<Vec<(usize, i64)>> = coloring_matrix(d)[..n - 1]
        .iter()
        .map(|r| r.iter().copied().filter(|&(c, _)| c != n - 1).collect())
        .collect();
    let det = if n - 1 <= BAREISS_LIMIT {
        let dense = minor
            .iter()
            .map(|r| {
                let mut row = vec![BigInt::from(0); n - 1];
                for &(c, v) in r {
                    row[c] = BigInt::from(v);
                }
                row
            })
            .collect();
        bareiss_det(dense)
    } else {
        multimodular_det(&minor)
    };
    Ok(det.abs().to_biguint().expect("absolute value is nonnegative"))
}

/// Iterator over the nontrivial colorings of a diagram modulo a prime.
pub struct NontrivialColorings {
    basis: Vec<Vec<u64>>,
    p: u64,
    coords: Vec<u64>,
    done: bool,
}

impl Iterator for NontrivialColorings {
    type Item = FoxColoring;

    fn next(&mut self) -> Option<FoxColoring> {
        loop {
            if self.done {
                return None;
            }
            // Advance the coordinate odometer (coordinate 0 is the constant
            // direction; the grid is every combination of all coordinates).
            let current = self.coords.clone();
            let mut i = 0;
            loop {
                if i == self.coords.len() {
                    self.done = true;
                    break;
                }
                self.coords[i] += 1;
                if self.coords[i] < self.p {
                    break;
                }
                self.coords[i] = 0;
                i += 1;
            }
            let n = self.basis.first().map_or(0, |b| b.len());
            let mut v = vec![0u64; n];
            for (coef, b) in current.iter().zip(&self.basis) {
                if *coef == 0 {
                    continue;
                }
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = (*x + coef * y) % self.p;
                }
            }
            let c = FoxColoring::new_unchecked(self.p, v);
            if is_nontrivial(&c) {
                return Some(c);
            }
        }
    }
}

/// Every nontrivial coloring modulo `p`, each exactly once; refuses when the
/// coloring space has more than `cap` elements.
pub fn enumerate_nontrivial_colorings(d: &Diagram, p: u64, cap: u64) -> Result<NontrivialColorings> {
    let space = coloring_space(d, p)?;
    let count = (p as u128).checked_pow(space.dimension as u32).unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(Error::CapExceeded {
            count: count.min(u64::MAX as u128) as u64,
            cap,
        });
    }
    Ok(NontrivialColorings {
        basis: space.basis.into_iter().map(|b| b.colors).collect(),
        p,
        coords: vec![0; space.dimension],
        done: space.dimension == 0,
    })
}

/// Minimum palette size over all nontrivial colorings of the fixed diagram `d`.
pub fn min_palette_over_colorings(d: &Diagram, p: u64, cap: u64) -> Result<usize> {
    enumerate_nontrivial_colorings(d, p, cap)?
        .map(|c| palette(&c).size())
        .min()
        .ok_or(Error::NoNontrivialColoring(p))
}

/// Rejects coloring requests for composite moduli with a clear message.
pub fn require_prime(p: u64) -> Result<()> {
    if p < 2 {
        return invalid(format!("modulus must exceed 1, got {p}"));
    }
    prime_modulus(p).map(|_| ())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{rational_twist_diagram, torus_knot_diagram, RationalKnotSpec};

    #[test]
    fn trefoil_colorings() {
        let d = torus_knot_diagram(3).unwrap();
        assert_eq!(coloring_space(&d, 3).unwrap().dimension, 2);
        assert_eq!(coloring_space(&d, 5).unwrap().dimension, 1);
        assert_eq!(count_colorings(&d, 5).unwrap(), BigUint::from(5u32));
        assert!(coloring_space(&d, 9).is_err());
        let bad = FoxColoring::new(3, vec![0, 1, 1]).unwrap();
        assert!(!is_fox_coloring(&d, &bad).unwrap());
        let short = FoxColoring::new(3, vec![0, 1]).unwrap();
        assert_eq!(is_fox_coloring(&d, &short), Err(Error::MissingArc(2)));
    }

    #[test]
    fn basis_normalization() {
        let d = torus_knot_diagram(11).unwrap();
        let s = coloring_space(&d, 11).unwrap();
        assert_eq!(s.dimension, 2);
        assert!(s.basis[0].colors().iter().all(|&c| c == 1));
        let first = s.basis[1].colors().iter().find(|&&c| c != 0).copied();
        assert_eq!(first, Some(1));
        for b in &s.basis {
            assert!(is_fox_coloring(&d, b).unwrap());
        }
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&torus_knot_diagram(5).unwrap()).unwrap(), BigUint::from(5u32));
        let r = rational_twist_diagram(&RationalKnotSpec::new(vec![5, 2]).unwrap()).unwrap();
        assert_eq!(determinant(&r).unwrap(), BigUint::from(11u32));
        assert!(determinant(&Diagram::unknot()).is_err());
    }

    #[test]
    fn large_determinant_path() {
        // Above the Bareiss limit the multi-modular path is used.
        let d = torus_knot_diagram(101).unwrap();
        assert_eq!(determinant(&d).unwrap(), BigUint::from(101u32));
    }

    #[test]
    fn enumeration() {
        let d = torus_knot_diagram(11).unwrap();
        assert_eq!(enumerate_nontrivial_colorings(&d, 11, DEFAULT_ENUMERATION_CAP).unwrap().count(), 110);
        let d3 = torus_knot_diagram(3).unwrap();
        assert_eq!(enumerate_nontrivial_colorings(&d3, 5, DEFAULT_ENUMERATION_CAP).unwrap().count(), 0);
        assert!(matches!(
            enumerate_nontrivial_colorings(&d, 11, 100),
            Err(Error::CapExceeded { count: 121, cap: 100 })
        ));
        assert_eq!(
            min_palette_over_colorings(&d3, 5, DEFAULT_ENUMERATION_CAP),
            Err(Error::NoNontrivialColoring(5))
        );
    }

    #[test]
    fn coloring_text_round_trip() {
        let c = FoxColoring::new(5, vec![0, 4, 3, 2, 1]).unwrap();
        let text = c.to_text();
        assert_eq!(FoxColoring::parse(&text).unwrap().to_text(), text);
        assert!(FoxColoring::parse("COLORING mod=5\n1 0\n").is_err());
        assert!(FoxColoring::parse("COLORING mod=5\n0 7\n").is_err());
    }
}
