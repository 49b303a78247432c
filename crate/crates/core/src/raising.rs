//! The raising-operator calculus.
//!
//! `T_i` raises the index of channel `i` by one, `R_ij = T_i / T_j`, the
//! operator `delta_i` kills e-kind symbols in channel `i`, and
//! `T~_i = delta_i T_i`. All factors commute as operators on the free module
//! where channel indices range over all integers; the convention `c_m = 0`
//! for `m < 0` is a readout rule, applied once a lowered index can no longer
//! be raised again. A `RaisingExpr` is therefore an unordered product, and
//! [`apply_raising`] normalizes the application order so that staged
//! evaluation with eager drops reproduces the collected free expansion:
//!
//! * single-channel factors first (they only raise indices, so no monomial
//!   ever dips negative under them);
//! * pair factors `(i, j)` in descending order of `i`. A pair factor raises
//!   `i` and lowers `j > i`, so under this order no later factor ever raises
//!   a channel an earlier factor lowered, and dropping a negative index the
//!   moment it appears agrees with dropping it at final readout.
//!
//! Eager truncation by the total index sum is sound for the same kind of
//! reason: no factor lowers that sum (`R_ij` preserves it, `b T_i` raises
//! it), so a monomial past the bound can never re-enter. Explicit scalar
//! shifts with a negative power are hoisted to the very front, where they act
//! exactly on the finite input; this matches composing [`shift`] with the
//! expansion.
//!
//! [`shift`]: crate::series::shift

use crate::error::{CoreError, Result};
use crate::rat::{binom_gen, Rat};
use crate::series::{ClassSeries, SymbolKind, Truncation};

/// One commuting operator factor.
#[derive(Clone, Debug)]
pub enum Factor {
    /// `coeff * b^beta_pow * T_ch^t_pow`
    Scaled {
        coeff: Rat,
        beta_pow: u32,
        ch: usize,
        t_pow: i64,
    },
    /// `(1 - b T_ch)^power`; with `tilde` the operator is `(1 - b T~_ch)^power`
    OneMinusBetaT { ch: usize, power: i64, tilde: bool },
    /// `(2 - b T_ch)^{-1}`; half-integral. With `tilde`, `(2 - b T~_ch)^{-1}`.
    TwoMinusBetaTInv { ch: usize, tilde: bool },
    /// `(1 - R_ij)`; with `delta`, `(1 - delta_i delta_j R_ij)`
    OneMinusR { i: usize, j: usize, delta: bool },
    /// `(1 + R_ij - b T_i)^{-1}`, expanded as `sum_k (b T_i - R_ij)^k`;
    /// with `delta`, `(1 + delta_i delta_j (R_ij - b T_i))^{-1}`
    OnePlusRMinusBetaTInv { i: usize, j: usize, delta: bool },
}

pub type RaisingExpr = Vec<Factor>;

impl Factor {
    fn max_channel(&self) -> usize {
        match self {
            Factor::Scaled { ch, .. }
            | Factor::OneMinusBetaT { ch, .. }
            | Factor::TwoMinusBetaTInv { ch, .. } => *ch,
            Factor::OneMinusR { i, j, .. } | Factor::OnePlusRMinusBetaTInv { i, j, .. } => {
                (*i).max(*j)
            }
        }
    }

    fn is_half(&self) -> bool {
        matches!(self, Factor::TwoMinusBetaTInv { .. })
    }

    fn is_negative_shift(&self) -> bool {
        matches!(self, Factor::Scaled { t_pow, .. } if *t_pow < 0)
    }

    fn is_pair(&self) -> bool {
        matches!(
            self,
            Factor::OneMinusR { .. } | Factor::OnePlusRMinusBetaTInv { .. }
        )
    }

    fn pair_row(&self) -> usize {
        match self {
            Factor::OneMinusR { i, .. } | Factor::OnePlusRMinusBetaTInv { i, .. } => *i,
            _ => 0,
        }
    }
}

/// Shift channel `ch` by `power` with `b` exponent bumped by `beta_add` and a
/// scalar, dropping monomials whose index would go negative.
fn shifted(
    series: &ClassSeries,
    ch: usize,
    power: i64,
    beta_add: u32,
    coeff: &Rat,
    trunc: Truncation,
) -> Result<ClassSeries> {
    let mut out = ClassSeries::zero(series.channel_count());
    if coeff.is_zero() {
        return Ok(out);
    }
    for (m, c) in series.terms() {
        let Some((kind, a)) = m.entries[ch] else {
            return Err(CoreError::MissingChannelSymbol(ch));
        };
        let new_a = a as i64 + power;
        if new_a < 0 {
            continue;
        }
        let mut m2 = m.clone();
        m2.beta += beta_add;
        m2.entries[ch] = Some((kind, new_a as u32));
        if trunc.keeps(&m2) {
            out.insert(m2, c * coeff);
        }
    }
    Ok(out)
}

/// Split off the monomials on which the delta-guard makes an operator inert:
/// returns `(active, inert)`. For one channel the guard is an e-kind entry
/// there; for a pair, an e-kind entry in either channel.
fn split_inert(
    series: &ClassSeries,
    channels: &[usize],
) -> Result<(ClassSeries, ClassSeries)> {
    let mut active = ClassSeries::zero(series.channel_count());
    let mut inert = ClassSeries::zero(series.channel_count());
    for (m, c) in series.terms() {
        let mut is_inert = false;
        for ch in channels {
            match m.entries[*ch] {
                Some((SymbolKind::E, _)) => {
                    is_inert = true;
                }
                Some((SymbolKind::C, _)) => {}
                None => return Err(CoreError::MissingChannelSymbol(*ch)),
            }
        }
        if is_inert {
            inert.insert(m.clone(), c.clone());
        } else {
            active.insert(m.clone(), c.clone());
        }
    }
    Ok((active, inert))
}

/// `R_ij` applied once. The lowering shift on `j` runs first so that the
/// intermediate stage never exceeds the truncation bound (`R_ij` preserves the
/// total index sum).
fn r_once(series: &ClassSeries, i: usize, j: usize, trunc: Truncation) -> Result<ClassSeries> {
    shifted(
        &shifted(series, j, -1, 0, &Rat::one(), trunc)?,
        i,
        1,
        0,
        &Rat::one(),
        trunc,
    )
}

/// `b T_i - R_ij` applied once (the expansion step of the inverse factor).
fn beta_t_minus_r(series: &ClassSeries, i: usize, j: usize, trunc: Truncation) -> Result<ClassSeries> {
    let bt = shifted(series, i, 1, 1, &Rat::one(), trunc)?;
    Ok(bt.sub(&r_once(series, i, j, trunc)?))
}

/// Apply one factor with eager truncation.
pub fn apply_factor(series: &ClassSeries, factor: &Factor, trunc: Truncation) -> Result<ClassSeries> {
    if factor.max_channel() >= series.channel_count() {
        return Err(CoreError::ChannelOutOfRange(
            factor.max_channel(),
            series.channel_count(),
        ));
    }
    match factor {
        Factor::Scaled {
            coeff,
            beta_pow,
            ch,
            t_pow,
        } => shifted(series, *ch, *t_pow, *beta_pow, coeff, trunc),
        Factor::OneMinusBetaT { ch, power, tilde } => {
            let (active, inert) = if *tilde {
                split_inert(series, &[*ch])?
            } else {
                (series.clone(), ClassSeries::zero(series.channel_count()))
            };
            let mut out = inert;
            let mut k: i64 = 0;
            loop {
                if *power >= 0 && k > *power {
                    break;
                }
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let coeff = binom_gen(*power, k) * Rat::from_int(sign);
                let term = shifted(&active, *ch, k, k as u32, &coeff, trunc)?;
                if term.is_zero() && k > 0 {
                    // shifting is monotone in k: once everything exceeds the
                    // bound, later terms are empty too
                    if *power < 0 {
                        break;
                    }
                }
                out = out.add(&term);
                k += 1;
            }
            Ok(out)
        }
        Factor::TwoMinusBetaTInv { ch, tilde } => {
            let (active, inert) = if *tilde {
                split_inert(series, &[*ch])?
            } else {
                (series.clone(), ClassSeries::zero(series.channel_count()))
            };
            let mut out = inert.scale(&Rat::new(1, 2));
            let mut k: i64 = 0;
            loop {
                let coeff = Rat::one() / Rat::from_int(2i64.pow(k as u32 + 1));
                let term = shifted(&active, *ch, k, k as u32, &coeff, trunc)?;
                if term.is_zero() && k > 0 {
                    break;
                }
                out = out.add(&term);
                k += 1;
                if active.is_zero() {
                    break;
                }
            }
            Ok(out)
        }
        Factor::OneMinusR { i, j, delta } => {
            let (active, inert) = if *delta {
                split_inert(series, &[*i, *j])?
            } else {
                (series.clone(), ClassSeries::zero(series.channel_count()))
            };
            let r = r_once(&active, *i, *j, trunc)?;
            Ok(active.sub(&r).add(&inert))
        }
        Factor::OnePlusRMinusBetaTInv { i, j, delta } => {
            let (active, inert) = if *delta {
                split_inert(series, &[*i, *j])?
            } else {
                (series.clone(), ClassSeries::zero(series.channel_count()))
            };
            let mut out = active.clone();
            let mut term = active;
            loop {
                term = beta_t_minus_r(&term, *i, *j, trunc)?;
                if term.is_zero() {
                    break;
                }
                out = out.add(&term);
            }
            Ok(out.add(&inert))
        }
    }
}

/// Apply every factor of `expr` to `series`, truncating at `trunc`.
///
/// Factors commute; the result is independent of list order (see the module
/// docs for the normalized application order that guarantees this). With
/// `allow_half = false`, a `(2 - b T)^{-1}` factor is rejected, signalling an
/// integral-mode violation.
pub fn apply_raising(
    expr: &RaisingExpr,
    series: &ClassSeries,
    trunc: Truncation,
    allow_half: bool,
) -> Result<ClassSeries> {
    if !allow_half && expr.iter().any(|f| f.is_half()) {
        return Err(CoreError::HalfIntegralDisallowed);
    }
    let mut out = series.clone();
    for f in expr.iter().filter(|f| f.is_negative_shift()) {
        // exact on the finite input; see module docs
        out = apply_factor(&out, f, Truncation(u32::MAX))?;
    }
    out = out.truncate(trunc);
    for f in expr.iter().filter(|f| !f.is_negative_shift() && !f.is_pair()) {
        out = apply_factor(&out, f, trunc)?;
    }
    let mut pairs: Vec<&Factor> = expr.iter().filter(|f| f.is_pair()).collect();
    pairs.sort_by(|a, b| b.pair_row().cmp(&a.pair_row()));
    for f in pairs {
        out = apply_factor(&out, f, trunc)?;
    }
    Ok(out)
}

/// Convenience builders used by the formula constructors.
pub mod build {
    use super::Factor;

    /// `(1 - b T_ch)^power`
    pub fn omt(ch: usize, power: i64) -> Factor {
        Factor::OneMinusBetaT {
            ch,
            power,
            tilde: false,
        }
    }

    /// `(1 - b T~_ch)^power`
    pub fn omt_tilde(ch: usize, power: i64) -> Factor {
        Factor::OneMinusBetaT {
            ch,
            power,
            tilde: true,
        }
    }

    /// `(2 - b T_ch)^{-1}`
    pub fn tmt_inv(ch: usize) -> Factor {
        Factor::TwoMinusBetaTInv { ch, tilde: false }
    }

    /// `(2 - b T~_ch)^{-1}`
    pub fn tmt_inv_tilde(ch: usize) -> Factor {
        Factor::TwoMinusBetaTInv { ch, tilde: true }
    }

    /// `(1 - R_ij)`
    pub fn omr(i: usize, j: usize) -> Factor {
        Factor::OneMinusR { i, j, delta: false }
    }

    /// `(1 - delta_i delta_j R_ij)`
    pub fn omr_delta(i: usize, j: usize) -> Factor {
        Factor::OneMinusR { i, j, delta: true }
    }

    /// `(1 + R_ij - b T_i)^{-1}`
    pub fn oprmbt_inv(i: usize, j: usize) -> Factor {
        Factor::OnePlusRMinusBetaTInv { i, j, delta: false }
    }

    /// `(1 + delta_i delta_j (R_ij - b T_i))^{-1}`
    pub fn oprmbt_inv_delta(i: usize, j: usize) -> Factor {
        Factor::OnePlusRMinusBetaTInv { i, j, delta: true }
    }
}

#[cfg(test)]
mod tests {
    use super::build::*;
    use super::*;
    use crate::series::{compare_series, ChannelMonomial, ClassSeries};

    fn c(channels: usize, ch: usize, a: u32) -> ClassSeries {
        ClassSeries::symbol(channels, ch, SymbolKind::C, a)
    }

    fn mono(channels: usize, beta: u32, entries: &[(usize, SymbolKind, u32)]) -> ClassSeries {
        let mut m = ChannelMonomial::unit(channels);
        m.beta = beta;
        for (ch, kind, a) in entries {
            m.entries[*ch] = Some((*kind, *a));
        }
        let mut s = ClassSeries::zero(channels);
        s.insert(m, Rat::one());
        s
    }

    #[test]
    fn geometric_expansion() {
        // (1 - bT)^{-1} c_2 at N=4 -> c_2 + b c_3 + b^2 c_4
        let got = apply_raising(&vec![omt(0, -1)], &c(1, 0, 2), Truncation(4), false).unwrap();
        let expect = mono(1, 0, &[(0, SymbolKind::C, 2)])
            .add(&mono(1, 1, &[(0, SymbolKind::C, 3)]))
            .add(&mono(1, 2, &[(0, SymbolKind::C, 4)]));
        assert_eq!(got, expect);
    }

    #[test]
    fn one_minus_r_example() {
        let trunc = Truncation(6);
        let seed = crate::series::disjoint_mul(&c(2, 0, 1), &c(2, 1, 1), trunc).unwrap();
        let got = apply_raising(&vec![omr(0, 1)], &seed, trunc, false).unwrap();
        let expect = seed.sub(&crate::series::disjoint_mul(&c(2, 0, 2), &c(2, 1, 0), trunc).unwrap());
        assert_eq!(got, expect);
    }

    #[test]
    fn inverse_pair_factor_enumerated() {
        // (1 + R_12 - bT_1)^{-1} c_1(1)c_1(2) at N=3, frozen from a hand
        // enumeration of sum_k (bT_1 - R_12)^k:
        //   k=0: c1c1; k=1: b c2c1 - c2c0; k=2: -2b c3c0 (b^2 c3c1 exceeds N,
        //   R^2 vanishes); k>=3: everything dies.
        let trunc = Truncation(3);
        let seed = crate::series::disjoint_mul(&c(2, 0, 1), &c(2, 1, 1), trunc).unwrap();
        let got = apply_raising(&vec![oprmbt_inv(0, 1)], &seed, trunc, false).unwrap();
        let expect = mono(2, 0, &[(0, SymbolKind::C, 1), (1, SymbolKind::C, 1)])
            .add(&mono(2, 1, &[(0, SymbolKind::C, 2), (1, SymbolKind::C, 1)]))
            .sub(&mono(2, 0, &[(0, SymbolKind::C, 2), (1, SymbolKind::C, 0)]))
            .sub(&mono(2, 1, &[(0, SymbolKind::C, 3), (1, SymbolKind::C, 0)]).scale(&Rat::from_int(2)));
        assert_eq!(got, expect);
    }

    #[test]
    fn inverse_pair_factor_defining_property() {
        // (1 + R - bT_1) applied to the inverse's output returns the seed,
        // coefficientwise below the bound
        let trunc = Truncation(7);
        let seed = crate::series::disjoint_mul(&c(2, 0, 3), &c(2, 1, 2), trunc).unwrap();
        let inv = apply_raising(&vec![oprmbt_inv(0, 1)], &seed, trunc, false).unwrap();
        let r = r_once(&inv, 0, 1, trunc).unwrap();
        let bt = shifted(&inv, 0, 1, 1, &Rat::one(), trunc).unwrap();
        let lhs = inv.add(&r).sub(&bt);
        assert!(compare_series(&lhs, &seed, trunc).is_equal());
    }

    #[test]
    fn factor_order_irrelevant() {
        let trunc = Truncation(6);
        let seed = crate::series::disjoint_mul(&c(2, 0, 2), &c(2, 1, 1), trunc).unwrap();
        let expr1 = vec![omt(0, -2), omr(0, 1), oprmbt_inv(0, 1), omt(1, -1)];
        let expr2 = vec![oprmbt_inv(0, 1), omt(1, -1), omt(0, -2), omr(0, 1)];
        let a = apply_raising(&expr1, &seed, trunc, false).unwrap();
        let b = apply_raising(&expr2, &seed, trunc, false).unwrap();
        assert!(compare_series(&a, &b, trunc).is_equal());
    }

    #[test]
    fn inverse_undoes_power() {
        // (1-bT)^{-lam} (1-bT)^{lam} acts as the identity up to truncation
        for lam in 1..=6i64 {
            let trunc = Truncation(8);
            let seed = c(1, 0, 2);
            let out = apply_raising(&vec![omt(0, lam), omt(0, -lam)], &seed, trunc, false).unwrap();
            assert!(
                compare_series(&out, &seed, trunc).is_equal(),
                "lambda = {lam}"
            );
        }
    }

    #[test]
    fn homogeneity_preserved() {
        let trunc = Truncation(8);
        let seed = crate::series::disjoint_mul(&c(2, 0, 3), &c(2, 1, 1), trunc).unwrap();
        let expr = vec![omt(0, -3), omt(1, -1), omr(0, 1), oprmbt_inv(0, 1)];
        let out = apply_raising(&expr, &seed, trunc, false).unwrap();
        assert!(out.is_homogeneous_of(4));
    }

    #[test]
    fn tilde_operators_skip_euler() {
        let trunc = Truncation(6);
        let e2 = ClassSeries::symbol(1, 0, SymbolKind::E, 2);
        let got = apply_raising(&vec![omt_tilde(0, -3)], &e2, trunc, true).unwrap();
        assert_eq!(got, e2);
        let half = apply_raising(&vec![tmt_inv_tilde(0)], &e2, trunc, true).unwrap();
        assert_eq!(half, e2.scale(&Rat::new(1, 2)));
    }

    #[test]
    fn half_integral_policy() {
        let seed = c(1, 0, 1);
        assert!(matches!(
            apply_raising(&vec![tmt_inv(0)], &seed, Truncation(4), false),
            Err(CoreError::HalfIntegralDisallowed)
        ));
        let got = apply_raising(&vec![tmt_inv(0)], &seed, Truncation(3), true).unwrap();
        // c_1/2 + b c_2/4 + b^2 c_3/8
        let expect = mono(1, 0, &[(0, SymbolKind::C, 1)])
            .scale(&Rat::new(1, 2))
            .add(&mono(1, 1, &[(0, SymbolKind::C, 2)]).scale(&Rat::new(1, 4)))
            .add(&mono(1, 2, &[(0, SymbolKind::C, 3)]).scale(&Rat::new(1, 8)));
        assert_eq!(got, expect);
    }

    #[test]
    fn delta_guard_makes_pair_factors_inert() {
        let trunc = Truncation(8);
        let mixed = mono(2, 0, &[(0, SymbolKind::C, 2), (1, SymbolKind::E, 1)]);
        for f in [omr_delta(0, 1), oprmbt_inv_delta(0, 1)] {
            let got = apply_factor(&mixed, &f, trunc).unwrap();
            assert_eq!(got, mixed);
        }
        // without the guard, (1 - R) acts on the e-index too
        let got = apply_factor(&mixed, &omr(0, 1), trunc).unwrap();
        let shiftede = mono(2, 0, &[(0, SymbolKind::C, 3), (1, SymbolKind::E, 0)]);
        assert_eq!(got, mixed.sub(&shiftede));
    }
}

