//! Multi-channel class series: finite sums of monomials
//! `b^t * s_{a_1}(1) ... s_{a_k}(k)` with one symbol per channel, each symbol
//! either c-kind or e-kind.
//!
//! Channels are 0-indexed internally and printed 1-indexed. A channel entry of
//! `None` means the monomial does not touch that channel (partial products
//! arising inside determinant and Pfaffian expansions); completed formula
//! outputs carry exactly one symbol in every channel.

use crate::error::{CoreError, Result};
use crate::rat::{binom_gen, Rat};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SymbolKind {
    C,
    E,
}

impl SymbolKind {
    pub fn letter(self) -> char {
        match self {
            SymbolKind::C => 'c',
            SymbolKind::E => 'e',
        }
    }
}

/// One symbol occurrence: kind and non-negative index.
pub type Entry = (SymbolKind, u32);

/// `b^t * prod_i sym_{a_i}(i)` over a fixed channel count.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ChannelMonomial {
    pub beta: u32,
    pub entries: Vec<Option<Entry>>,
}

impl ChannelMonomial {
    pub fn unit(channels: usize) -> Self {
        ChannelMonomial {
            beta: 0,
            entries: vec![None; channels],
        }
    }

    pub fn channels(&self) -> usize {
        self.entries.len()
    }

    /// Sum of channel indices.
    pub fn index_sum(&self) -> u32 {
        self.entries
            .iter()
            .map(|e| e.map(|(_, a)| a).unwrap_or(0))
            .sum()
    }

    /// Graded degree: sum of indices minus the `b` exponent.
    pub fn degree(&self) -> i64 {
        self.index_sum() as i64 - self.beta as i64
    }

    pub fn text(&self) -> String {
        let mut parts = Vec::new();
        if self.beta == 1 {
            parts.push("b".to_string());
        } else if self.beta > 1 {
            parts.push(format!("b^{}", self.beta));
        }
        for (i, e) in self.entries.iter().enumerate() {
            if let Some((kind, a)) = e {
                parts.push(format!("{}[{}]({})", kind.letter(), a, i + 1));
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" * ")
        }
    }
}

/// Bound on the sum of channel indices; every expansion in this crate is
/// asserted coefficientwise below such a bound.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Truncation(pub u32);

impl Truncation {
    pub fn keeps(&self, m: &ChannelMonomial) -> bool {
        m.index_sum() <= self.0
    }
}

/// Finite linear combination of channel monomials with `Rat` coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct ClassSeries {
    channels: usize,
    terms: BTreeMap<ChannelMonomial, Rat>,
}

impl ClassSeries {
    pub fn zero(channels: usize) -> Self {
        ClassSeries {
            channels,
            terms: BTreeMap::new(),
        }
    }

    /// The scalar 1 (no symbols, b^0).
    pub fn one(channels: usize) -> Self {
        let mut s = Self::zero(channels);
        s.terms.insert(ChannelMonomial::unit(channels), Rat::one());
        s
    }

    /// A single symbol `sym_a(ch)` (0-indexed channel).
    pub fn symbol(channels: usize, ch: usize, kind: SymbolKind, a: u32) -> Self {
        let mut m = ChannelMonomial::unit(channels);
        m.entries[ch] = Some((kind, a));
        let mut s = Self::zero(channels);
        s.terms.insert(m, Rat::one());
        s
    }

    /// A full seed monomial `prod_i sym(entries[i])` covering every channel.
    pub fn seed(entries: &[Entry]) -> Self {
        let mut m = ChannelMonomial::unit(entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.entries[i] = Some(*e);
        }
        let mut s = Self::zero(entries.len());
        s.terms.insert(m, Rat::one());
        s
    }

    pub fn channel_count(&self) -> usize {
        self.channels
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ChannelMonomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &Rat> {
        self.terms.values()
    }

    pub fn insert(&mut self, m: ChannelMonomial, c: Rat) {
        debug_assert_eq!(m.channels(), self.channels);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &ClassSeries) -> ClassSeries {
        assert_eq!(self.channels, other.channels);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &ClassSeries) -> ClassSeries {
        assert_eq!(self.channels, other.channels);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> ClassSeries {
        let mut out = Self::zero(self.channels);
        if c.is_zero() {
            return out;
        }
        for (m, k) in &self.terms {
            out.terms.insert(m.clone(), k * c);
        }
        out
    }

    pub fn truncate(&self, trunc: Truncation) -> ClassSeries {
        let mut out = Self::zero(self.channels);
        for (m, c) in &self.terms {
            if trunc.keeps(m) {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Keep only monomials with `b` exponent zero.
    pub fn beta_zero(&self) -> ClassSeries {
        let mut out = Self::zero(self.channels);
        for (m, c) in &self.terms {
            if m.beta == 0 {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Negate the coefficient of every monomial containing an e-kind symbol an
    /// odd number of times (the substitution `e -> -e`).
    pub fn flip_euler_sign(&self) -> ClassSeries {
        let mut out = Self::zero(self.channels);
        for (m, c) in &self.terms {
            let e_count = m
                .entries
                .iter()
                .filter(|e| matches!(e, Some((SymbolKind::E, _))))
                .count();
            let c = if e_count % 2 == 1 { -c } else { c.clone() };
            out.terms.insert(m.clone(), c);
        }
        out
    }

    /// True when every monomial has a symbol in every channel.
    pub fn is_channel_linear(&self) -> bool {
        self.terms
            .keys()
            .all(|m| m.entries.iter().all(|e| e.is_some()))
    }

    /// True when all monomials share the graded degree `d`.
    pub fn is_homogeneous_of(&self, d: i64) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }
}

impl fmt::Display for ClassSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let text = m.text();
            if first {
                first = false;
                if c.is_one() && text != "1" {
                    write!(f, "{text}")?;
                } else if *c == Rat::from_int(-1) && text != "1" {
                    write!(f, "-{text}")?;
                } else if text == "1" {
                    write!(f, "{c}")?;
                } else {
                    write!(f, "{c} {text}")?;
                }
            } else {
                let (sign, mag) = if c.is_negative() {
                    ("-", -c)
                } else {
                    ("+", c.clone())
                };
                if text == "1" {
                    write!(f, " {sign} {mag}")?;
                } else if mag.is_one() {
                    write!(f, " {sign} {text}")?;
                } else {
                    write!(f, " {sign} {mag} {text}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ClassSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Raise (or lower) the index of channel `ch` by `power`; monomials whose new
/// index would be negative are dropped (`c_m = 0` for `m < 0`).
pub fn shift(series: &ClassSeries, ch: usize, power: i64) -> Result<ClassSeries> {
    if ch >= series.channel_count() {
        return Err(CoreError::ChannelOutOfRange(ch, series.channel_count()));
    }
    let mut out = ClassSeries::zero(series.channel_count());
    for (m, c) in series.terms() {
        let Some((kind, a)) = m.entries[ch] else {
            return Err(CoreError::MissingChannelSymbol(ch));
        };
        let new_a = a as i64 + power;
        if new_a < 0 {
            continue;
        }
        let mut m2 = m.clone();
        m2.entries[ch] = Some((kind, new_a as u32));
        out.insert(m2, c.clone());
    }
    Ok(out)
}

/// Delete every monomial carrying an e-kind symbol in channel `ch`; c-kind
/// entries pass through unchanged.
pub fn apply_delta(series: &ClassSeries, ch: usize) -> Result<ClassSeries> {
    if ch >= series.channel_count() {
        return Err(CoreError::ChannelOutOfRange(ch, series.channel_count()));
    }
    let mut out = ClassSeries::zero(series.channel_count());
    for (m, c) in series.terms() {
        if matches!(m.entries[ch], Some((SymbolKind::E, _))) {
            continue;
        }
        out.insert(m.clone(), c.clone());
    }
    Ok(out)
}

/// Monomial-wise concatenation over disjoint channel supports: `b` exponents
/// add and coefficients multiply. A channel occupied on both sides is an
/// error (it would signal a malformed matrix expansion).
pub fn disjoint_mul(
    s1: &ClassSeries,
    s2: &ClassSeries,
    trunc: Truncation,
) -> Result<ClassSeries> {
    assert_eq!(s1.channel_count(), s2.channel_count());
    let mut out = ClassSeries::zero(s1.channel_count());
    for (m1, c1) in s1.terms() {
        for (m2, c2) in s2.terms() {
            let mut m = m1.clone();
            m.beta += m2.beta;
            for (i, e) in m2.entries.iter().enumerate() {
                if let Some(e2) = e {
                    if m.entries[i].is_some() {
                        return Err(CoreError::ChannelOverlap(i));
                    }
                    m.entries[i] = Some(*e2);
                }
            }
            if trunc.keeps(&m) {
                out.insert(m, c1 * c2);
            }
        }
    }
    Ok(out)
}

/// Equality outcome below a truncation, with the first differing monomial as
/// witness on failure.
#[derive(Debug)]
pub enum Compare {
    Equal,
    Mismatch {
        monomial: String,
        lhs: Rat,
        rhs: Rat,
    },
}

impl Compare {
    pub fn is_equal(&self) -> bool {
        matches!(self, Compare::Equal)
    }
}

/// Coefficient-wise comparison over all monomials with index sum at most `trunc`.
pub fn compare_series(s1: &ClassSeries, s2: &ClassSeries, trunc: Truncation) -> Compare {
    assert_eq!(s1.channel_count(), s2.channel_count());
    let a = s1.truncate(trunc);
    let b = s2.truncate(trunc);
    let diff = a.sub(&b);
    let witness = diff.terms().next().map(|(m, _)| m.clone());
    match witness {
        None => Compare::Equal,
        Some(m) => Compare::Mismatch {
            monomial: m.text(),
            lhs: a.terms.get(&m).cloned().unwrap_or_else(Rat::zero),
            rhs: b.terms.get(&m).cloned().unwrap_or_else(Rat::zero),
        },
    }
}

/// Replace each `c_m` on channel `ch` by the Segre-class expansion
/// `sum_{j>=0} binom(m-1+j, j) b^j c_{m+j}`, truncated. Negative target
/// indices never arise here (`j >= 0`); for `m = 0` only the `j = 0` term
/// survives since `binom(j-1, j) = 0` for `j > 0`.
pub fn segre_convert(series: &ClassSeries, ch: usize, trunc: Truncation) -> Result<ClassSeries> {
    if ch >= series.channel_count() {
        return Err(CoreError::ChannelOutOfRange(ch, series.channel_count()));
    }
    let mut out = ClassSeries::zero(series.channel_count());
    for (m, c) in series.terms() {
        let Some((kind, a)) = m.entries[ch] else {
            return Err(CoreError::MissingChannelSymbol(ch));
        };
        if kind != SymbolKind::C {
            return Err(CoreError::SegreOnEulerChannel(ch));
        }
        let headroom = trunc.0 as i64 - m.index_sum() as i64;
        for j in 0..=headroom.max(0) {
            let coeff = binom_gen(a as i64 - 1 + j, j);
            if coeff.is_zero() {
                continue;
            }
            let mut m2 = m.clone();
            m2.beta += j as u32;
            m2.entries[ch] = Some((SymbolKind::C, a + j as u32));
            if trunc.keeps(&m2) {
                out.insert(m2, c * &coeff);
            }
        }
    }
    Ok(out)
}

/// The Segre symbol `c'_m` on one channel as a standalone series: the
/// closed-form expansion with terms of negative index dropped. Valid for any
/// integer `m`, matching the convention that honest Chern classes vanish in
/// negative degree while Segre classes may not.
pub fn segre_symbol(channels: usize, ch: usize, m: i64, trunc: Truncation) -> ClassSeries {
    let mut out = ClassSeries::zero(channels);
    let mut j = 0i64;
    while m + j <= trunc.0 as i64 {
        let idx = m + j;
        if idx >= 0 {
            let coeff = binom_gen(m - 1 + j, j);
            if !coeff.is_zero() {
                let mut mono = ChannelMonomial::unit(channels);
                mono.beta = j as u32;
                mono.entries[ch] = Some((SymbolKind::C, idx as u32));
                out.insert(mono, coeff);
            }
        }
        j += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(channels: usize, ch: usize, a: u32) -> ClassSeries {
        ClassSeries::symbol(channels, ch, SymbolKind::C, a)
    }

    #[test]
    fn shift_examples() {
        let s = c(1, 0, 2);
        let up = shift(&s, 0, 3).unwrap();
        assert_eq!(up, c(1, 0, 5));
        let gone = shift(&c(1, 0, 1), 0, -2).unwrap();
        assert!(gone.is_zero());
    }

    #[test]
    fn shift_down_up_restricts() {
        // shift(shift(s,+1),-1) == s on monomials with a >= 0 after the round
        // trip; the composite with order (-1 then +1) kills a = 0.
        let s = c(1, 0, 0).add(&c(1, 0, 3));
        let round = shift(&shift(&s, 0, -1).unwrap(), 0, 1).unwrap();
        assert_eq!(round, c(1, 0, 3));
        let round2 = shift(&shift(&s, 0, 1).unwrap(), 0, -1).unwrap();
        assert_eq!(round2, s);
    }

    #[test]
    fn delta_kills_euler() {
        let trunc = Truncation(10);
        let m = disjoint_mul(
            &c(2, 0, 2),
            &ClassSeries::symbol(2, 1, SymbolKind::E, 3),
            trunc,
        )
        .unwrap();
        assert!(apply_delta(&m, 1).unwrap().is_zero());
        assert_eq!(apply_delta(&m, 0).unwrap(), m);
    }

    #[test]
    fn delta_on_c_plus_e_gives_c() {
        // d = c + e on one channel: delta replaces d by c
        let d = c(1, 0, 2).add(&ClassSeries::symbol(1, 0, SymbolKind::E, 2));
        assert_eq!(apply_delta(&d, 0).unwrap(), c(1, 0, 2));
    }

    #[test]
    fn disjoint_mul_examples() {
        let trunc = Truncation(10);
        let p = disjoint_mul(&c(2, 0, 2), &c(2, 1, 3), trunc).unwrap();
        assert_eq!(p.num_terms(), 1);
        let (m, k) = p.terms().next().unwrap();
        assert_eq!(m.index_sum(), 5);
        assert!(k.is_one());
        // overlap is an error
        assert!(matches!(
            disjoint_mul(&c(2, 0, 2), &c(2, 0, 3), trunc),
            Err(CoreError::ChannelOverlap(0))
        ));
    }

    #[test]
    fn disjoint_mul_distributes_beta() {
        let trunc = Truncation(10);
        let b = |s: &ClassSeries, t: u32| {
            let mut out = ClassSeries::zero(s.channel_count());
            for (m, c) in s.terms() {
                let mut m = m.clone();
                m.beta += t;
                out.insert(m, c.clone());
            }
            out
        };
        let lhs = disjoint_mul(
            &b(&c(2, 0, 3), 1),
            &c(2, 1, 1).add(&b(&c(2, 1, 2), 1)),
            trunc,
        )
        .unwrap();
        let expect = b(
            &disjoint_mul(&c(2, 0, 3), &c(2, 1, 1), trunc).unwrap(),
            1,
        )
        .add(&b(
            &disjoint_mul(&c(2, 0, 3), &c(2, 1, 2), trunc).unwrap(),
            2,
        ));
        assert_eq!(lhs, expect);
    }

    #[test]
    fn compare_reports_witness() {
        let trunc = Truncation(5);
        assert!(compare_series(&c(1, 0, 1), &c(1, 0, 1), trunc).is_equal());
        let mut other = ClassSeries::zero(1);
        let mut m = ChannelMonomial::unit(1);
        m.beta = 1;
        m.entries[0] = Some((SymbolKind::C, 2));
        other.insert(m, Rat::one());
        match compare_series(&c(1, 0, 1), &other, trunc) {
            Compare::Mismatch { monomial, lhs, rhs } => {
                assert_eq!(monomial, "c[1](1)");
                assert!(lhs.is_one());
                assert!(rhs.is_zero());
            }
            Compare::Equal => panic!("expected mismatch"),
        }
    }

    #[test]
    fn segre_examples() {
        let trunc = Truncation(3);
        // c_0 converts to itself
        assert_eq!(segre_convert(&c(1, 0, 0), 0, trunc).unwrap(), c(1, 0, 0));
        // c_1 -> c_1 + b c_2 + b^2 c_3
        let got = segre_convert(&c(1, 0, 1), 0, trunc).unwrap();
        let mut expect = ClassSeries::zero(1);
        for j in 0u32..=2 {
            let mut m = ChannelMonomial::unit(1);
            m.beta = j;
            m.entries[0] = Some((SymbolKind::C, 1 + j));
            expect.insert(m, Rat::one());
        }
        assert_eq!(got, expect);
        // beta = 0 slice is the identity
        assert_eq!(got.beta_zero(), c(1, 0, 1));
    }

    #[test]
    fn segre_symbol_negative_index() {
        // c'_{-1} = c_{-1} - b c_0 = -b c_0 under the dropping convention
        let trunc = Truncation(4);
        let s = segre_symbol(1, 0, -1, trunc);
        let mut expect = ClassSeries::zero(1);
        let mut m = ChannelMonomial::unit(1);
        m.beta = 1;
        m.entries[0] = Some((SymbolKind::C, 0));
        expect.insert(m, Rat::from_int(-1));
        assert_eq!(s, expect);
    }
}
