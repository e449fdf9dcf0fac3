//! Arc-based knot diagrams and the generators for the diagram families used
//! throughout the crate: braid closures, torus knots `T(2, p)` and rational
//! twist diagrams.
//!
//! A [`Diagram`] is a list of crossings over dense arc identifiers.  Arcs are
//! numbered along the orientation of each component and crossings are listed
//! in the order in which their over-strand is met along that same traversal.
//! That ordering is what lets [`crate::planar::PlanarDiagram`] recover the
//! full Gauss code (and hence the planar embedding) from the plain text
//! format:
//!
//! ```text
//! ARCS 3
//! X 2 0 1 1
//! X 0 1 2 1
//! X 1 2 0 1
//! ```

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{invalid, parse_err, Error, Result};
use crate::morse::{Letter, MorseWord};

/// Identifier of an arc: an integer in `0..arc_count`.
pub type ArcId = usize;

/// One crossing: the over-arc and the two arcs of the under-strand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Crossing {
    /// Arc passing over the crossing.
    pub over: ArcId,
    /// Arc of the under-strand entering the crossing.
    pub under_in: ArcId,
    /// Arc of the under-strand leaving the crossing.
    pub under_out: ArcId,
    /// Crossing sign, `+1` or `−1`.
    pub sign: i8,
}

/// A closed diagram given by crossings over arcs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagram {
    arc_count: usize,
    crossings: Vec<Crossing>,
    components: Vec<Vec<ArcId>>,
}

/// One violated diagram invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A crossing references an arc outside `0..arc_count`.
    DanglingArc {
        /// Index of the offending crossing.
        crossing: usize,
        /// The out-of-range arc.
        arc: ArcId,
    },
    /// A crossing has the same arc entering and leaving underneath.
    UnderArcsCoincide {
        /// Index of the offending crossing.
        crossing: usize,
    },
    /// A crossing sign other than `±1`.
    BadSign {
        /// Index of the offending crossing.
        crossing: usize,
        /// The stored sign.
        sign: i8,
    },
    /// An arc does not end at exactly one crossing.
    UnderInCount {
        /// The arc.
        arc: ArcId,
        /// How many crossings list it as `under_in`.
        count: usize,
    },
    /// An arc does not start at exactly one crossing.
    UnderOutCount {
        /// The arc.
        arc: ArcId,
        /// How many crossings list it as `under_out`.
        count: usize,
    },
    /// A knot diagram whose arc and crossing counts differ.
    ArcCrossingMismatch {
        /// Number of arcs.
        arcs: usize,
        /// Number of crossings.
        crossings: usize,
    },
    /// The component metadata is not a partition of the arcs.
    BadComponents,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DanglingArc { crossing, arc } => {
                write!(f, "crossing {crossing} references missing arc {arc}")
            }
            Violation::UnderArcsCoincide { crossing } => {
                write!(f, "crossing {crossing} has under_in = under_out")
            }
            Violation::BadSign { crossing, sign } => {
                write!(f, "crossing {crossing} has sign {sign}")
            }
            Violation::UnderInCount { arc, count } => {
                write!(f, "arc {arc} ends at {count} crossings (expected 1)")
            }
            Violation::UnderOutCount { arc, count } => {
                write!(f, "arc {arc} starts at {count} crossings (expected 1)")
            }
            Violation::ArcCrossingMismatch { arcs, crossings } => {
                write!(f, "knot diagram has {arcs} arcs but {crossings} crossings")
            }
            Violation::BadComponents => write!(f, "components do not partition the arcs"),
        }
    }
}

/// The outcome of [`validate_diagram`]: empty iff the diagram is valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    /// Every violated invariant.
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    /// True when no invariant is violated.
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

impl Diagram {
    /// Builds a diagram, deriving components from the crossings and rejecting
    /// anything [`validate_diagram`] complains about.
    pub fn new(arc_count: usize, crossings: Vec<Crossing>) -> Result<Self> {
        let d = Diagram::from_raw(arc_count, crossings);
        let report = validate_diagram(&d);
        if !report.is_valid() {
            return Err(Error::BadDiagram(report.to_string()));
        }
        Ok(d)
    }

    /// Builds a diagram without validation; components are derived on a
    /// best-effort basis.  Use [`validate_diagram`] to inspect the result.
    pub fn from_raw(arc_count: usize, crossings: Vec<Crossing>) -> Self {
        let components = derive_components(arc_count, &crossings);
        Diagram {
            arc_count,
            crossings,
            components,
        }
    }

    /// The crossingless unknot: a single closed arc.
    pub fn unknot() -> Self {
        Diagram {
            arc_count: 1,
            crossings: Vec::new(),
            components: vec![vec![0]],
        }
    }

    /// Number of arcs.
    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    /// The crossings, in canonical order.
    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    /// Number of crossings.
    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Arcs of each component in orientation order.
    pub fn components(&self) -> &[Vec<ArcId>] {
        &self.components
    }

    /// True for a single-component diagram.
    pub fn is_knot(&self) -> bool {
        self.components.len() == 1
    }

    /// Serializes to the PD text format (`ARCS n` then one `X` line per crossing).
    pub fn to_pd_text(&self) -> String {
        let mut out = format!("ARCS {}\n", self.arc_count);
        for c in &self.crossings {
            out.push_str(&format!(
                "X {} {} {} {}\n",
                c.over, c.under_in, c.under_out, c.sign
            ));
        }
        out
    }

    /// Parses the PD text format; the result is validated.
    pub fn parse_pd(text: &str) -> Result<Self> {
        let mut arcs = None;
        let mut crossings = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let fields: Vec<&str> = raw.split_whitespace().collect();
            match fields.as_slice() {
                [] => continue,
                ["ARCS", n] if arcs.is_none() => {
                    arcs = Some(parse_num::<usize>(n, line)?);
                }
                ["X", o, a, b, s] if arcs.is_some() => {
                    let sign = parse_num::<i8>(s, line)?;
                    crossings.push(Crossing {
                        over: parse_num(o, line)?,
                        under_in: parse_num(a, line)?,
                        under_out: parse_num(b, line)?,
                        sign,
                    });
                }
                _ => return parse_err(line, format!("unexpected line {raw:?}")),
            }
        }
        let Some(arcs) = arcs else {
            return parse_err(1, "missing ARCS header");
        };
        Diagram::new(arcs, crossings)
    }
}

pub(crate) fn parse_num<T: std::str::FromStr>(s: &str, line: usize) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse {
            line,
            message: format!("bad number {s:?}"),
        })
}

/// Follows `under_in → under_out` to split the arcs into components.
fn derive_components(arc_count: usize, crossings: &[Crossing]) -> Vec<Vec<ArcId>> {
    let mut next = vec![None; arc_count];
    for c in crossings {
        if c.under_in < arc_count && c.under_out < arc_count {
            next[c.under_in] = Some(c.under_out);
        }
    }
    let mut seen = vec![false; arc_count];
    let mut comps = Vec::new();
    for start in 0..arc_count {
        if seen[start] {
            continue;
        }
        let mut comp = Vec::new();
        let mut a = start;
        while !seen[a] {
            seen[a] = true;
            comp.push(a);
            match next[a] {
                Some(b) => a = b,
                None => break,
            }
        }
        comps.push(comp);
    }
    comps
}

/// Lists every violated invariant of `d`; the report is empty iff `d` is valid.
pub fn validate_diagram(d: &Diagram) -> ValidationReport {
    let n = d.arc_count;
    let mut violations = Vec::new();
    let mut ins = vec![0usize; n];
    let mut outs = vec![0usize; n];
    for (i, c) in d.crossings.iter().enumerate() {
        for arc in [c.over, c.under_in, c.under_out] {
            if arc >= n {
                violations.push(Violation::DanglingArc { crossing: i, arc });
            }
        }
        // A component made of a single arc necessarily re-enters itself.
        let single_arc = d.components.iter().any(|comp| comp == &[c.under_in]);
        if c.under_in == c.under_out && !single_arc {
            violations.push(Violation::UnderArcsCoincide { crossing: i });
        }
        if c.sign != 1 && c.sign != -1 {
            violations.push(Violation::BadSign {
                crossing: i,
                sign: c.sign,
            });
        }
        if c.under_in < n {
            ins[c.under_in] += 1;
        }
        if c.under_out < n {
            outs[c.under_out] += 1;
        }
    }
    for arc in 0..n {
        // A component without undercrossings is one closed arc.
        let closed_loop = ins[arc] == 0 && outs[arc] == 0 && d.components.iter().any(|c| c == &[arc]);
        if closed_loop {
            continue;
        }
        if ins[arc] != 1 {
            violations.push(Violation::UnderInCount {
                arc,
                count: ins[arc],
            });
        }
        if outs[arc] != 1 {
            violations.push(Violation::UnderOutCount {
                arc,
                count: outs[arc],
            });
        }
    }
    let mut covered = vec![0usize; n];
    for comp in &d.components {
        for &a in comp {
            if a < n {
                covered[a] += 1;
            } else {
                violations.push(Violation::BadComponents);
            }
        }
    }
    if covered.iter().any(|&c| c != 1) {
        violations.push(Violation::BadComponents);
    }
    if d.components.len() == 1 && !d.crossings.is_empty() && n != d.crossings.len() {
        violations.push(Violation::ArcCrossingMismatch {
            arcs: n,
            crossings: d.crossings.len(),
        });
    }
    ValidationReport { violations }
}

/// One passage of a strand through a crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Visit {
    /// Crossing identifier.
    pub crossing: usize,
    /// Whether the strand passes over.
    pub over: bool,
}

/// Builds the canonical arc diagram of closed paths of visits.
///
/// Each path is rotated to start right after its last under-visit, arcs are
/// numbered along the paths, and crossings are renumbered in the order their
/// over-visit is met.  Returns the diagram together with, for each path, the
/// rotation applied and the arc of every (rotated) edge, where edge `k`
/// leaves visit `k`.
pub(crate) fn diagram_from_paths(
    paths: &[Vec<Visit>],
    signs: &dyn Fn(usize) -> i8,
) -> (Diagram, Vec<(usize, Vec<ArcId>)>) {
    let mut rotated = Vec::new();
    for path in paths {
        let last_under = path.iter().rposition(|v| !v.over);
        let shift = last_under.map_or(0, |u| (u + 1) % path.len());
        let mut r = path[shift..].to_vec();
        r.extend_from_slice(&path[..shift]);
        rotated.push((shift, r));
    }
    // Arc numbering along the paths.
    let mut next_arc = 0;
    let mut edge_arcs = Vec::new();
    for (_, path) in &rotated {
        let m = path.len();
        let unders = path.iter().filter(|v| !v.over).count();
        let base = next_arc;
        let arcs: Vec<ArcId> = if unders == 0 {
            vec![base; m]
        } else {
            let mut count = 0;
            (0..m)
                .map(|k| {
                    if !path[k].over {
                        count += 1;
                    }
                    base + count % unders
                })
                .collect()
        };
        next_arc += unders.max(1);
        edge_arcs.push(arcs);
    }
    // Crossing relabelling in over-visit order.
    let mut relabel = std::collections::HashMap::new();
    for (_, path) in &rotated {
        for v in path {
            if v.over {
                let id = relabel.len();
                relabel.entry(v.crossing).or_insert(id);
            }
        }
    }
    let mut crossings = vec![
        Crossing {
            over: 0,
            under_in: 0,
            under_out: 0,
            sign: 1
        };
        relabel.len()
    ];
    for ((_, path), arcs) in rotated.iter().zip(&edge_arcs) {
        let m = path.len();
        for (k, v) in path.iter().enumerate() {
            let c = &mut crossings[relabel[&v.crossing]];
            c.sign = signs(v.crossing);
            if v.over {
                c.over = arcs[k];
            } else {
                c.under_in = arcs[(k + m - 1) % m];
                c.under_out = arcs[k];
            }
        }
    }
    let mut components = Vec::new();
    let mut start = 0;
    for (_, path) in &rotated {
        let unders = path.iter().filter(|v| !v.over).count().max(1);
        components.push((start..start + unders).collect());
        start += unders;
    }
    let d = Diagram {
        arc_count: next_arc,
        crossings,
        components,
    };
    let info = rotated
        .into_iter()
        .map(|(s, _)| s)
        .zip(edge_arcs)
        .collect();
    (d, info)
}

/// A braid word on `strand_count` strands; generator `i` crosses strands
/// `i` and `i + 1` (one-based), and sign `+1` gives a positive crossing
/// when the strands are oriented downward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidWord {
    strand_count: usize,
    letters: Vec<(usize, i8)>,
}

impl BraidWord {
    /// A validated braid word.
    pub fn new(strand_count: usize, letters: Vec<(usize, i8)>) -> Result<Self> {
        if strand_count < 1 {
            return invalid("a braid needs at least one strand");
        }
        for &(g, s) in &letters {
            if g < 1 || g >= strand_count {
                return invalid(format!(
                    "generator {g} out of range for {strand_count} strands"
                ));
            }
            if s != 1 && s != -1 {
                return invalid(format!("generator sign must be +1 or -1, got {s}"));
            }
        }
        Ok(BraidWord {
            strand_count,
            letters,
        })
    }

    /// `σ_g^{±n}` on `strand_count` strands.
    pub fn power(strand_count: usize, generator: usize, exponent: i64) -> Result<Self> {
        let sign = if exponent < 0 { -1 } else { 1 };
        BraidWord::new(
            strand_count,
            vec![(generator, sign); exponent.unsigned_abs() as usize],
        )
    }

    /// Number of strands.
    pub fn strand_count(&self) -> usize {
        self.strand_count
    }

    /// Letters as `(generator, sign)`.
    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    /// The braid as a Morse word (crossings only, closure strands implicit).
    pub(crate) fn to_morse(&self) -> MorseWord {
        MorseWord {
            top: self.strand_count,
            letters: self
                .letters
                .iter()
                .map(|&(g, s)| Letter::Cross {
                    pos: g - 1,
                    // Downward strands: the crossing is positive when the
                    // strand coming from the top-right passes over.
                    left_over: s < 0,
                })
                .collect(),
        }
    }
}

/// The closure of a braid word as a validated diagram.
pub fn braid_closure_diagram(b: &BraidWord) -> Result<Diagram> {
    if b.strand_count < 1 {
        return invalid("a braid needs at least one strand");
    }
    let traced = b.to_morse().trace()?;
    let (d, _) = diagram_from_paths(&traced.paths, &|c| traced.signs[c]);
    let report = validate_diagram(&d);
    if !report.is_valid() {
        return Err(Error::Internal(format!("braid closure invalid: {report}")));
    }
    Ok(d)
}

/// `T(2, p)` as the closure of `σ₁ᵖ`, for odd `p ≥ 3`.
pub fn torus_knot_diagram(p: u64) -> Result<Diagram> {
    if p < 3 || p % 2 == 0 {
        return invalid(format!("T(2, p) needs an odd p >= 3, got {p}"));
    }
    braid_closure_diagram(&BraidWord::power(2, 1, p as i64)?)
}

/// Twist counts of a rational knot, e.g. `(5, 2)` or `(4, −3)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalKnotSpec {
    coefficients: Vec<i64>,
}

impl RationalKnotSpec {
    /// A validated spec: nonempty, all coefficients nonzero.
    pub fn new(coefficients: Vec<i64>) -> Result<Self> {
        if coefficients.is_empty() {
            return invalid("a rational knot needs at least one coefficient");
        }
        if coefficients.contains(&0) {
            return invalid("twist counts must be nonzero");
        }
        Ok(RationalKnotSpec { coefficients })
    }

    /// The twist counts.
    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    /// The plat as a closed Morse word.
    ///
    /// Two cups open four strands; twist regions alternate between the middle
    /// pair and the left pair, starting in the middle; the bottom is closed
    /// so that the last twist region is not undone by kinks.
    pub(crate) fn to_morse(&self) -> MorseWord {
        let mut letters = vec![
            Letter::Cup { pos: 0, color: 0 },
            Letter::Cup { pos: 2, color: 0 },
        ];
        for (i, &a) in self.coefficients.iter().enumerate() {
            let middle = i % 2 == 0;
            let left_over = if middle { a < 0 } else { a > 0 };
            let pos = if middle { 1 } else { 0 };
            letters.extend(std::iter::repeat_n(
                Letter::Cross { pos, left_over },
                a.unsigned_abs() as usize,
            ));
        }
        if self.coefficients.len() % 2 == 1 {
            letters.push(Letter::Cap { pos: 0 });
        } else {
            letters.push(Letter::Cap { pos: 1 });
        }
        letters.push(Letter::Cap { pos: 0 });
        MorseWord { top: 0, letters }
    }
}

/// The standard 4-plat twist diagram of a rational knot (or link).
pub fn rational_twist_diagram(spec: &RationalKnotSpec) -> Result<Diagram> {
    let traced = spec.to_morse().trace()?;
    let (d, _) = diagram_from_paths(&traced.paths, &|c| traced.signs[c]);
    let report = validate_diagram(&d);
    if !report.is_valid() {
        return Err(Error::Internal(format!("rational diagram invalid: {report}")));
    }
    Ok(d)
}

/// The fraction `1/(a₁ + 1/(a₂ + …))` of a rational knot, kept as the
/// numerator/denominator pair produced by the nested evaluation.
///
/// The pair is reduced (coprime) but its signs are not normalized: for twist
/// counts `(a, b)` it is exactly `b/(ab + 1)` divided by the common factor,
/// e.g. `(4, −3)` gives `−3/−11`.  [`RationalFraction::value`] gives the
/// normalized rational number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalFraction {
    /// Numerator as produced by the recursion.
    pub numerator: i64,
    /// Denominator as produced by the recursion; its absolute value is the
    /// determinant of the rational knot.
    pub denominator: i64,
}

impl RationalFraction {
    /// The value as a normalized rational number.
    pub fn value(&self) -> Ratio<i64> {
        Ratio::new(self.numerator, self.denominator)
    }
}

impl fmt::Display for RationalFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// Evaluates `1/(a₁ + 1/(a₂ + …))` from the innermost level outward.
pub fn continued_fraction(spec: &RationalKnotSpec) -> Result<RationalFraction> {
    let cs = spec.coefficients();
    // Innermost level: 1/a_N.
    let (mut num, mut den) = (1i64, cs[cs.len() - 1]);
    if den == 0 {
        return Err(Error::DivisionByZero { depth: cs.len() });
    }
    for (depth, &a) in cs.iter().enumerate().rev().skip(1) {
        // 1/(a + num/den) = den/(a·den + num)
        let new_den = a
            .checked_mul(den)
            .and_then(|x| x.checked_add(num))
            .ok_or_else(|| Error::InvalidInput("continued fraction overflows".into()))?;
        if new_den == 0 {
            return Err(Error::DivisionByZero { depth: depth + 1 });
        }
        num = den;
        den = new_den;
        let g = num.gcd(&den);
        num /= g;
        den /= g;
    }
    Ok(RationalFraction {
        numerator: num,
        denominator: den,
    })
}
