//! Lower halves, sequences of lower halves and the color bounds built on them.
//!
//! For an odd prime `p` the sequence `LH(p) = (k₁, k₂, …, k_l)` starts at
//! `k₁ = (p − 1)/2` and keeps taking lower halves until it first lands in
//! `{2, 3, 4}`.  Its length `l_p` and last term `t_p` determine the number
//! of colors `t_p + 2·l_p − 1` reached by the Teneva pipeline.  The fast
//! algorithm reads `(l_p, t_p)` straight off the binary expansion of `p − 1`.

use num_rational::Ratio;

use crate::error::{invalid, Error, Result};
use crate::primes::is_prime;

/// Lower half of `o ≥ 2`: `k` for `o = 2k + 1`, and `o / 2` for even `o`.
pub fn lower_half(o: u64) -> Result<u64> {
    if o < 2 {
        return invalid(format!("lower half needs o >= 2, got {o}"));
    }
    Ok(o / 2)
}

/// The iterates `k₁, k₂, …` of [`lower_half`] starting from an odd `n > 4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerHalfSequence {
    /// The odd integer the sequence was computed for.
    pub source: u64,
    /// `k₁ = (n − 1)/2`, `kᵢ₊₁ = lh(kᵢ)`, ending at the first term in `{2, 3, 4}`.
    pub terms: Vec<u64>,
    /// `l_n`, the number of terms.
    pub length: usize,
    /// `t_n`, the last term.
    pub tail: u64,
}

/// Computes `LH(n)` by direct iteration.
pub fn lh_sequence(n: u64) -> Result<LowerHalfSequence> {
    if n <= 4 || n % 2 == 0 {
        return invalid(format!("LH(n) needs an odd n > 4, got {n}"));
    }
    let mut terms = Vec::new();
    let mut k = n / 2;
    loop {
        terms.push(k);
        if (2..=4).contains(&k) {
            break;
        }
        k /= 2;
    }
    Ok(LowerHalfSequence {
        source: n,
        length: terms.len(),
        tail: k,
        terms,
    })
}

/// Binary expansion `n − 1 = 2^{e₁} + … + 2^{e_N}` of an odd `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoAdicExpansion {
    /// The odd integer expanded.
    pub source: u64,
    /// Exponents `e₁ > e₂ > … > e_N > 0`.
    pub exponents: Vec<u32>,
    /// Gaps `sᵢ = eᵢ − eᵢ₊₁` for `i < N` and `s_N = e_N`.
    pub gaps: Vec<u32>,
}

impl TwoAdicExpansion {
    /// `N_n`, the number of powers of two in the expansion.
    pub fn term_count(&self) -> usize {
        self.exponents.len()
    }

    /// Rebuilds `n` from the exponents.
    pub fn reconstruct(&self) -> u64 {
        self.exponents.iter().map(|&e| 1u64 << e).sum::<u64>() + 1
    }

    /// Which branch of the fast algorithm applies.
    pub fn case(&self) -> ExpansionCase {
        match self.exponents.as_slice() {
            [e1, e2, ..] if e1 - e2 == 1 => ExpansionCase::GapOne,
            [e1, e2, ..] if e1 - e2 == 2 => ExpansionCase::GapTwo,
            _ => ExpansionCase::Wide,
        }
    }
}

/// The three branches of the fast length/tail algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionCase {
    /// `e₁ − e₂ = 1`: `l = e₁ − 1`, `t = 3`.
    GapOne,
    /// `e₁ − e₂ = 2`: `l = e₁ − 1`, `t = 2`.
    GapTwo,
    /// `e₁ − e₂ > 2` or a single power of two: `l = e₁ − 2`, `t = 4`.
    Wide,
}

/// Computes the binary expansion of `n − 1` for odd `n ≥ 3`.
pub fn two_adic_expansion(n: u64) -> Result<TwoAdicExpansion> {
    if n < 3 || n % 2 == 0 {
        return invalid(format!("2-adic expansion needs an odd n >= 3, got {n}"));
    }
    let m = n - 1;
    let exponents: Vec<u32> = (1..64).rev().filter(|&e| m >> e & 1 == 1).collect();
    let gaps = exponents
        .iter()
        .enumerate()
        .map(|(i, &e)| match exponents.get(i + 1) {
            Some(&next) => e - next,
            None => e,
        })
        .collect();
    Ok(TwoAdicExpansion {
        source: n,
        exponents,
        gaps,
    })
}

/// `(l_n, t_n)` from the binary expansion of `n − 1`, for odd `n ≥ 9`.
///
/// For `n ∈ {5, 7}` the case analysis does not apply (it would give
/// length 0 for `n = 5`); use [`lh_sequence`] there.
pub fn fast_length_tail(n: u64) -> Result<(usize, u64)> {
    if n < 9 || n % 2 == 0 {
        return invalid(format!("fast algorithm needs an odd n >= 9, got {n}"));
    }
    let x = two_adic_expansion(n)?;
    let e1 = x.exponents[0] as usize;
    Ok(match x.case() {
        ExpansionCase::GapOne => (e1 - 1, 3),
        ExpansionCase::GapTwo => (e1 - 1, 2),
        ExpansionCase::Wide => (e1 - 2, 4),
    })
}

fn check_bound_prime(p: u64) -> Result<()> {
    if p <= 7 || !is_prime(p) {
        return Err(Error::InvalidInput(format!(
            "bound needs a prime p > 7, got {p} (p = 3, 5, 7 are covered by the known-values table)"
        )));
    }
    Ok(())
}

/// The Teneva bound `t_p + 2·l_p − 1` on `mincol_p T(2, p)` for primes `p > 7`.
pub fn teneva_bound(p: u64) -> Result<u64> {
    check_bound_prime(p)?;
    let (l, t) = fast_length_tail(p)?;
    Ok(t + 2 * l as u64 - 1)
}

/// The logarithmic bound `2·log₂(p − 1) − 1`.
pub fn log_bound(p: u64) -> Result<f64> {
    check_bound_prime(p)?;
    Ok(2.0 * ((p - 1) as f64).log2() - 1.0)
}

/// `f(x) = (1 + x)/2^x` as a real number.
pub fn envelope(x: f64) -> f64 {
    (1.0 + x) / x.exp2()
}

/// `f(l) = (1 + l)/2^l` as an exact rational, for `l < 64`.
pub fn envelope_exact(l: u32) -> Ratio<u128> {
    Ratio::new(1 + l as u128, 1u128 << l)
}

/// Parses a plain decimal such as `0.455` into an exact rational.
pub fn decimal_ratio(text: &str) -> Result<Ratio<u128>> {
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    let digits = format!("{int}{frac}");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return invalid(format!("not a plain decimal: {text:?}"));
    }
    let num: u128 = digits
        .parse()
        .map_err(|_| Error::InvalidInput(format!("decimal too long: {text:?}")))?;
    Ok(Ratio::new(num, 10u128.pow(frac.len() as u32)))
}

/// Everything the bound analysis says about one prime.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// The prime.
    pub p: u64,
    /// `LH(p)`.
    pub sequence: LowerHalfSequence,
    /// `l_p`.
    pub length: usize,
    /// `t_p`.
    pub tail: u64,
    /// `t_p + 2·l_p − 1`.
    pub teneva_bound: u64,
    /// `2·log₂(p − 1) − 1`.
    pub log_bound: f64,
    /// `(t_p + 2·l_p − 1)/p`, exactly.
    pub exact_ratio: Ratio<u128>,
    /// `f(l_p) = (1 + l_p)/2^{l_p}`.
    pub ratio_envelope: f64,
    /// `f(l_p)` as an exact rational.
    pub envelope_exact: Ratio<u128>,
    /// Branch of the fast algorithm that applies to `p`.
    pub case: ExpansionCase,
    /// The case-wise lower bracket on the ratio: `(2+2l)/2^{2+l}`,
    /// `(1+2l)/2^{2+l}` or `(3+2l)/2^{3+l}` by case.
    pub lower_bracket: Ratio<u128>,
}

/// Fills a [`BoundReport`] and checks the chain of inequalities
/// `lower_bracket < exact_ratio < f(l_p)` and `teneva_bound ≤ log_bound`.
pub fn ratio_report(p: u64) -> Result<BoundReport> {
    let bound = teneva_bound(p)?;
    let sequence = lh_sequence(p)?;
    let case = two_adic_expansion(p)?.case();
    let (length, tail) = (sequence.length, sequence.tail);
    let l = length as u32;
    let lower_bracket = match case {
        ExpansionCase::GapOne => Ratio::new(2 + 2 * l as u128, 1u128 << (2 + l)),
        ExpansionCase::GapTwo => Ratio::new(1 + 2 * l as u128, 1u128 << (2 + l)),
        ExpansionCase::Wide => Ratio::new(3 + 2 * l as u128, 1u128 << (3 + l)),
    };
    let report = BoundReport {
        p,
        length,
        tail,
        teneva_bound: bound,
        log_bound: log_bound(p)?,
        exact_ratio: Ratio::new(bound as u128, p as u128),
        ratio_envelope: envelope(length as f64),
        envelope_exact: envelope_exact(l),
        case,
        lower_bracket,
        sequence,
    };
    if (report.teneva_bound as f64) > report.log_bound {
        return Err(Error::Internal(format!("bound exceeds log bound at p = {p}")));
    }
    if report.exact_ratio >= report.envelope_exact {
        return Err(Error::Internal(format!("ratio not below envelope at p = {p}")));
    }
    if report.lower_bracket >= report.exact_ratio {
        return Err(Error::Internal(format!("ratio not above bracket at p = {p}")));
    }
    Ok(report)
}
