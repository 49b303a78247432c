//! Triples `(k, p, q)` indexing vexillary degeneracy loci, their validation,
//! the associated shape data (the partition `lambda`, and in extended mode the
//! sequence `rho` with its split index), and the inflation procedure that
//! fills gaps in `k` without changing `lambda`.
//!
//! Validation reports *every* violated constraint, never silently repairing.

use crate::error::{CoreError, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum TripleKind {
    A,
    B,
    C,
    D,
}

impl TripleKind {
    pub fn letter(self) -> char {
        match self {
            TripleKind::A => 'A',
            TripleKind::B => 'B',
            TripleKind::C => 'C',
            TripleKind::D => 'D',
        }
    }
}

impl std::str::FromStr for TripleKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_uppercase().as_str() {
            "A" => Ok(TripleKind::A),
            "B" => Ok(TripleKind::B),
            "C" => Ok(TripleKind::C),
            "D" => Ok(TripleKind::D),
            other => Err(format!("unknown triple kind `{other}`")),
        }
    }
}

/// Rank-condition data. In extended mode, negative `q` entries encode
/// coisotropic conditions (types B/C/D only).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Triple {
    pub kind: TripleKind,
    pub k: Vec<i64>,
    pub p: Vec<i64>,
    pub q: Vec<i64>,
    #[serde(default)]
    pub extended: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strictness {
    WeaklyDecreasing,
    Strict,
    RhoStrict,
}

/// Shape of the class a triple indexes: the partition, and in extended mode
/// the raising-operator profile `rho` with the split index `a`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ShapeData {
    pub lambda: Vec<i64>,
    /// extended mode only; `rho[k-1]` is the paper's `rho_k`
    pub rho: Option<Vec<i64>>,
    /// number of leading isotropic conditions `a` (extended mode)
    pub split_index: Option<usize>,
    /// `k_a = k[a-1]` (0 when `a = 0`); the leading Pfaffian block size
    pub k_a: Option<i64>,
    pub strictness: Strictness,
}

impl ShapeData {
    pub fn lambda_weight(&self) -> i64 {
        self.lambda.iter().sum()
    }

    /// The leading Pfaffian block size in extended mode, 0 otherwise.
    pub fn k_a(&self) -> usize {
        self.k_a.unwrap_or(0).max(0) as usize
    }
}

impl Triple {
    pub fn s(&self) -> usize {
        self.k.len()
    }

    pub fn k_s(&self) -> i64 {
        *self.k.last().unwrap_or(&0)
    }
}

struct Violations(Vec<String>);

impl Violations {
    fn new() -> Self {
        Violations(Vec::new())
    }
    fn push(&mut self, msg: String) {
        self.0.push(msg);
    }
    fn into_result<T>(self, ok: T) -> Result<T> {
        if self.0.is_empty() {
            Ok(ok)
        } else {
            Err(CoreError::InvalidTriple(self.0))
        }
    }
}

/// Returns false on a length mismatch (no elementwise checks possible).
fn check_basic_sequences(t: &Triple, v: &mut Violations) -> bool {
    if t.k.is_empty() || t.k.len() != t.p.len() || t.k.len() != t.q.len() {
        v.push(format!(
            "sequences must have equal positive length: |k|={} |p|={} |q|={}",
            t.k.len(),
            t.p.len(),
            t.q.len()
        ));
        return false;
    }
    for i in 0..t.k.len() {
        if t.k[i] <= 0 {
            v.push(format!("k[{}] = {} must be positive", i + 1, t.k[i]));
        }
        if i > 0 && t.k[i] <= t.k[i - 1] {
            v.push(format!(
                "k must be strictly increasing: k[{}]={} <= k[{}]={}",
                i + 1,
                t.k[i],
                i,
                t.k[i - 1]
            ));
        }
    }
    true
}

/// `rho'_i = #{j : rho_j >= i}`, the conjugate counting sequence.
pub fn rho_conjugate(rho: &[i64]) -> Vec<i64> {
    let max = rho.iter().copied().max().unwrap_or(0);
    (1..=max)
        .map(|i| rho.iter().filter(|r| **r >= i).count() as i64)
        .collect()
}

// ---------------------------------------------------------------------------
// type A
// ---------------------------------------------------------------------------

fn validate_a(t: &Triple) -> Result<ShapeData> {
    let mut v = Violations::new();
    if !check_basic_sequences(t, &mut v) {
        return v.into_result(dummy_shape());
    }
    let s = t.s();
    for i in 0..s {
        if t.p[i] <= 0 {
            v.push(format!("p[{}] = {} must be positive", i + 1, t.p[i]));
        }
        if t.q[i] <= 0 {
            v.push(format!("q[{}] = {} must be positive", i + 1, t.q[i]));
        }
        if i > 0 && t.p[i] < t.p[i - 1] {
            v.push(format!(
                "p must be weakly increasing: p[{}]={} < p[{}]={}",
                i + 1,
                t.p[i],
                i,
                t.p[i - 1]
            ));
        }
        if i > 0 && t.q[i] > t.q[i - 1] {
            v.push(format!(
                "q must be weakly decreasing: q[{}]={} > q[{}]={}",
                i + 1,
                t.q[i],
                i,
                t.q[i - 1]
            ));
        }
    }
    // lambda_{k_i} = q_i - p_i + k_i, weakly decreasing, non-negative
    let anchors: Vec<i64> = (0..s).map(|i| t.q[i] - t.p[i] + t.k[i]).collect();
    for i in 0..s {
        if i > 0 && anchors[i] > anchors[i - 1] {
            v.push(format!(
                "anchor values q_i - p_i + k_i must be weakly decreasing: position {} has {} > {}",
                i + 1,
                anchors[i],
                anchors[i - 1]
            ));
        }
        if anchors[i] < 0 {
            v.push(format!(
                "anchor value q_i - p_i + k_i = {} at position {} is negative",
                anchors[i],
                i + 1
            ));
        }
    }
    if !v.0.is_empty() {
        return v.into_result(dummy_shape());
    }
    // lambda_k = lambda_{k_i} for k_{i-1} < k <= k_i
    let mut lambda = Vec::with_capacity(t.k_s() as usize);
    for i in 0..s {
        let lo = if i == 0 { 0 } else { t.k[i - 1] };
        for _ in lo..t.k[i] {
            lambda.push(anchors[i]);
        }
    }
    v.into_result(ShapeData {
        lambda,
        rho: None,
        split_index: None,
        k_a: None,
        strictness: Strictness::WeaklyDecreasing,
    })
}

// ---------------------------------------------------------------------------
// types B and C (identical shape rules), non-extended
// ---------------------------------------------------------------------------

fn validate_c_like(t: &Triple, redundancy: Redundancy) -> Result<ShapeData> {
    let mut v = Violations::new();
    if !check_basic_sequences(t, &mut v) {
        return v.into_result(dummy_shape());
    }
    let s = t.s();
    for i in 0..s {
        if t.p[i] <= 0 {
            v.push(format!("p[{}] = {} must be positive", i + 1, t.p[i]));
        }
        if t.q[i] <= 0 {
            v.push(format!("q[{}] = {} must be positive", i + 1, t.q[i]));
        }
        if i > 0 && t.p[i] > t.p[i - 1] {
            v.push(format!(
                "p must be weakly decreasing: p[{}]={} > p[{}]={}",
                i + 1,
                t.p[i],
                i,
                t.p[i - 1]
            ));
        }
        if i > 0 && t.q[i] > t.q[i - 1] {
            v.push(format!(
                "q must be weakly decreasing: q[{}]={} > q[{}]={}",
                i + 1,
                t.q[i],
                i,
                t.q[i - 1]
            ));
        }
        if i > 0 {
            let gap = t.k[i] - t.k[i - 1];
            let drop = (t.p[i - 1] - t.p[i]) + (t.q[i - 1] - t.q[i]);
            let bad = match redundancy {
                Redundancy::Forbid => gap >= drop,
                Redundancy::Allow => gap > drop,
            };
            if bad {
                v.push(format!(
                    "need k_i - k_(i-1) < (p_(i-1) - p_i) + (q_(i-1) - q_i) at position {}: {} < {} fails",
                    i + 1,
                    gap,
                    drop
                ));
            }
        }
    }
    if !v.0.is_empty() {
        return v.into_result(dummy_shape());
    }
    // lambda_{k_i} = p_i + q_i - 1, extended by lambda_k = lambda_{k_i} + (k_i - k)
    let anchors: Vec<i64> = (0..s).map(|i| t.p[i] + t.q[i] - 1).collect();
    let lambda = fill_descending(&t.k, &anchors);
    debug_assert!(lambda.windows(2).all(|w| w[0] > w[1]));
    if *lambda.last().unwrap() <= 0 {
        v.push(format!(
            "lambda_(k_s) = {} must be positive",
            lambda.last().unwrap()
        ));
    }
    v.into_result(ShapeData {
        lambda,
        rho: None,
        split_index: None,
        k_a: None,
        strictness: Strictness::Strict,
    })
}

/// Fill each block `(k_(i-1), k_i]` by descending unit steps down to the
/// anchor value at `k_i` (the minimal strict filling above the right anchor).
fn fill_descending(k: &[i64], anchors: &[i64]) -> Vec<i64> {
    let mut lambda = Vec::with_capacity(*k.last().unwrap() as usize);
    for i in 0..k.len() {
        let lo = if i == 0 { 0 } else { k[i - 1] };
        for pos in (lo + 1)..=k[i] {
            lambda.push(anchors[i] + (k[i] - pos));
        }
    }
    lambda
}

// ---------------------------------------------------------------------------
// type D, non-extended: valid iff the shifted triple is a valid type C triple
// ---------------------------------------------------------------------------

fn validate_d(t: &Triple, redundancy: Redundancy) -> Result<ShapeData> {
    let mut v = Violations::new();
    if !check_basic_sequences(t, &mut v) {
        return v.into_result(dummy_shape());
    }
    for i in 0..t.s() {
        if t.p[i] < 0 {
            v.push(format!("p[{}] = {} must be non-negative", i + 1, t.p[i]));
        }
        if t.q[i] < 0 {
            v.push(format!("q[{}] = {} must be non-negative", i + 1, t.q[i]));
        }
    }
    if !v.0.is_empty() {
        return v.into_result(dummy_shape());
    }
    let plus = Triple {
        kind: TripleKind::C,
        k: t.k.clone(),
        p: t.p.iter().map(|x| x + 1).collect(),
        q: t.q.iter().map(|x| x + 1).collect(),
        extended: false,
    };
    match validate_c_like(&plus, redundancy) {
        Ok(shape_plus) => {
            let lambda: Vec<i64> = shape_plus.lambda.iter().map(|x| x - 1).collect();
            debug_assert!(*lambda.last().unwrap() >= 0);
            Ok(ShapeData {
                lambda,
                rho: None,
                split_index: None,
                k_a: None,
                strictness: Strictness::Strict,
            })
        }
        Err(CoreError::InvalidTriple(msgs)) => Err(CoreError::InvalidTriple(
            msgs.into_iter()
                .map(|m| format!("(via type C shifted triple) {m}"))
                .collect(),
        )),
        Err(e) => Err(e),
    }
}

// ---------------------------------------------------------------------------
// extended (coisotropic) triples, types C and B
// ---------------------------------------------------------------------------

fn validate_c_like_extended(t: &Triple) -> Result<ShapeData> {
    let mut v = Violations::new();
    if !check_basic_sequences(t, &mut v) {
        return v.into_result(dummy_shape());
    }
    let s = t.s();
    for i in 0..s {
        if t.p[i] <= 0 {
            v.push(format!("p[{}] = {} must be positive", i + 1, t.p[i]));
        }
        if t.q[i] == 0 {
            v.push(format!("q[{}] must be nonzero", i + 1));
        }
        if i > 0 && t.p[i] > t.p[i - 1] {
            v.push(format!(
                "p must be weakly decreasing: p[{}]={} > p[{}]={}",
                i + 1,
                t.p[i],
                i,
                t.p[i - 1]
            ));
        }
        if i > 0 && t.q[i] > t.q[i - 1] {
            v.push(format!(
                "q must be weakly decreasing: q[{}]={} > q[{}]={}",
                i + 1,
                t.q[i],
                i,
                t.q[i - 1]
            ));
        }
    }
    if !v.0.is_empty() {
        return v.into_result(dummy_shape());
    }
    // split index: q_a > 0 > q_(a+1)
    let a = t.q.iter().take_while(|q| **q > 0).count();
    if t.p[s - 1] == 1 && a < s {
        v.push("p_s = 1 requires all q to be positive".to_string());
    }
    // isotropic block keeps the non-extended inequality (rank conditions must
    // be non-redundant, exactly as in the all-positive case)
    for i in 1..a {
        let gap = t.k[i] - t.k[i - 1];
        let drop = (t.p[i - 1] - t.p[i]) + (t.q[i - 1] - t.q[i]);
        if gap >= drop {
            v.push(format!(
                "isotropic block needs k_i - k_(i-1) < (p_(i-1) - p_i) + (q_(i-1) - q_i) at position {}: {} < {} fails",
                i + 1,
                gap,
                drop
            ));
        }
    }
    // banned negative values: for i <= a with m(i) = min{m : q_i + (k_i - k_(i-1) - 1) >= q_m},
    // the values -q_i .. -q_i-(k_i - k_m(i) - 1) may not occur among negative q's
    for i in 0..a {
        let reach = t.q[i] + (t.k[i] - if i == 0 { 0 } else { t.k[i - 1] } - 1);
        let m = (0..s).position(|mm| reach >= t.q[mm]);
        let Some(m) = m else { continue };
        let len = t.k[i] - t.k[m];
        for off in 0..len.max(0) {
            let banned = -t.q[i] - off;
            for j in a..s {
                if t.q[j] == banned {
                    v.push(format!(
                        "banned coisotropic value: q[{}] = {} collides with -q[{}] - {}",
                        j + 1,
                        t.q[j],
                        i + 1,
                        off
                    ));
                }
            }
        }
    }
    // rho: rho_k = k - 1 up to k_a, then rho_{k_i} = k_j with q_j > -q_i > q_(j+1)
    let ks = t.k_s();
    let k_a = if a == 0 { 0 } else { t.k[a - 1] };
    let mut rho = vec![0i64; ks as usize];
    for k in 1..=k_a {
        rho[(k - 1) as usize] = k - 1;
    }
    let mut rho_anchor = vec![0i64; s];
    for i in a..s {
        let target = -t.q[i]; // positive
        let mut found = None;
        for j in 0..=a {
            let upper_ok = if j == 0 { true } else { t.q[j - 1] > target };
            let lower_ok = if j == a {
                // q_(a+1) is the first negative entry (or -inf): always below
                true
            } else {
                target > t.q[j]
            };
            if upper_ok && lower_ok {
                found = Some(if j == 0 { 0 } else { t.k[j - 1] });
                break;
            }
        }
        match found {
            Some(kj) => rho_anchor[i] = kj,
            None => {
                v.push(format!(
                    "no index j with q_j > -q[{}] = {} > q_(j+1); boundary case is rejected",
                    i + 1,
                    target
                ));
            }
        }
    }
    if !v.0.is_empty() {
        return v.into_result(dummy_shape());
    }
    for i in a..s {
        let lo = if i == 0 { 0 } else { t.k[i - 1] }.max(k_a);
        for k in (lo + 1)..=t.k[i] {
            rho[(k - 1) as usize] = rho_anchor[i];
        }
    }
    // rho must weakly decrease past each point where it stops being k - 1
    for w in (k_a.max(1) as usize)..rho.len() {
        if rho[w] > rho[w - 1] && rho[w] != w as i64 {
            v.push(format!(
                "rho must be weakly decreasing beyond the split: rho[{}]={} > rho[{}]={}",
                w + 1,
                rho[w],
                w,
                rho[w - 1]
            ));
        }
    }
    // lambda anchors
    let mut anchors = vec![0i64; s];
    for i in 0..s {
        anchors[i] = if i < a {
            t.p[i] + t.q[i] - 1
        } else {
            t.p[i] + t.q[i] + t.k[i] - 1 - rho_anchor[i]
        };
    }
    // fill minimally subject to
    //   lambda_1 > ... > lambda_(k_a) > lambda_(k_a + 1) >= ... >= lambda_(k_s) > 0
    let lambda = fill_extended(&t.k, &anchors, k_a, a);
    check_extended_chain(&lambda, k_a, &mut v, true);
    // final condition: rho-strict
    let mut sum: Vec<i64> = lambda.iter().zip(rho.iter()).map(|(l, r)| l + r).collect();
    let ok_partition = sum.windows(2).all(|w| w[0] >= w[1]);
    if !ok_partition {
        v.push(format!(
            "lambda + rho = {:?} is not a partition (lambda must be rho-strict)",
            sum
        ));
    }
    sum.clear();
    v.into_result(ShapeData {
        lambda,
        rho: Some(rho),
        split_index: Some(a),
        k_a: Some(k_a),
        strictness: Strictness::RhoStrict,
    })
}

/// Minimal filling: strict descent anchored right inside the leading block,
/// constant equal to the right anchor beyond it.
fn fill_extended(k: &[i64], anchors: &[i64], k_a: i64, a: usize) -> Vec<i64> {
    let ks = *k.last().unwrap();
    let mut lambda = vec![0i64; ks as usize];
    for i in 0..k.len() {
        let lo = if i == 0 { 0 } else { k[i - 1] };
        for pos in (lo + 1)..=k[i] {
            lambda[(pos - 1) as usize] = if i < a {
                anchors[i] + (k[i] - pos)
            } else {
                anchors[i]
            };
        }
    }
    let _ = k_a;
    lambda
}

fn check_extended_chain(lambda: &[i64], k_a: i64, v: &mut Violations, strict_tail_pos: bool) {
    for w in 1..lambda.len() {
        let pos = (w + 1) as i64;
        if pos <= k_a {
            if lambda[w] >= lambda[w - 1] {
                v.push(format!(
                    "lambda must be strictly decreasing through position {}: {:?}",
                    k_a, lambda
                ));
                return;
            }
        } else if lambda[w] > lambda[w - 1] {
            v.push(format!(
                "lambda must be weakly decreasing beyond position {}: {:?}",
                k_a, lambda
            ));
            return;
        }
    }
    if let Some(last) = lambda.last() {
        if strict_tail_pos && *last <= 0 {
            v.push(format!("lambda_(k_s) = {last} must be positive"));
        } else if !strict_tail_pos && *last < 0 {
            v.push(format!("lambda_(k_s) = {last} must be non-negative"));
        }
    }
}

// ---------------------------------------------------------------------------
// extended type D
// ---------------------------------------------------------------------------

fn validate_d_extended(t: &Triple) -> Result<ShapeData> {
    let mut v = Violations::new();
    if !check_basic_sequences(t, &mut v) {
        return v.into_result(dummy_shape());
    }
    let s = t.s();
    for i in 0..s {
        if t.p[i] < 0 {
            v.push(format!("p[{}] = {} must be non-negative", i + 1, t.p[i]));
        }
        if t.q[i] == -1 {
            v.push(format!("q[{}] = -1 is prohibited in type D", i + 1));
        }
    }
    if !v.0.is_empty() {
        return v.into_result(dummy_shape());
    }
    // shifted triple: p_i + 1, and q_i + 1 for non-negative q_i
    let plus = Triple {
        kind: TripleKind::C,
        k: t.k.clone(),
        p: t.p.iter().map(|x| x + 1).collect(),
        q: t.q.iter().map(|x| if *x >= 0 { x + 1 } else { *x }).collect(),
        extended: true,
    };
    if let Err(CoreError::InvalidTriple(msgs)) = validate_c_like_extended(&plus) {
        return Err(CoreError::InvalidTriple(
            msgs.into_iter()
                .map(|m| format!("(via type C shifted triple) {m}"))
                .collect(),
        ));
    }
    // split index: q_a > -1 > q_(a+1), i.e. leading run of non-negative q's
    let a = t.q.iter().take_while(|q| **q >= 0).count();
    let ks = t.k_s();
    let k_a = if a == 0 { 0 } else { t.k[a - 1] };
    let mut rho = vec![0i64; ks as usize];
    for k in 1..=k_a {
        rho[(k - 1) as usize] = k - 1;
    }
    // rho_{k_i} = k_j with q_j >= -q_i > q_(j+1) + 1
    let mut rho_anchor = vec![0i64; s];
    for i in a..s {
        let target = -t.q[i]; // >= 2 since -1 is banned
        let mut found = None;
        for j in 0..=a {
            let upper_ok = if j == 0 { true } else { t.q[j - 1] >= target };
            let lower_ok = if j == a { true } else { target > t.q[j] + 1 };
            if upper_ok && lower_ok {
                found = Some(if j == 0 { 0 } else { t.k[j - 1] });
                break;
            }
        }
        match found {
            Some(kj) => rho_anchor[i] = kj,
            None => v.push(format!(
                "no index j with q_j >= -q[{}] = {} > q_(j+1) + 1; boundary case is rejected",
                i + 1,
                target
            )),
        }
    }
    if !v.0.is_empty() {
        return v.into_result(dummy_shape());
    }
    for i in a..s {
        let lo = if i == 0 { 0 } else { t.k[i - 1] }.max(k_a);
        for k in (lo + 1)..=t.k[i] {
            rho[(k - 1) as usize] = rho_anchor[i];
        }
    }
    let mut anchors = vec![0i64; s];
    for i in 0..s {
        anchors[i] = if i < a {
            t.p[i] + t.q[i]
        } else {
            t.p[i] + t.q[i] + t.k[i] - rho_anchor[i]
        };
    }
    // chain: lambda_1 > .. > lambda_(k_a) >= lambda_(k_a + 1) >= ... >= 0
    let lambda = fill_extended(&t.k, &anchors, k_a, a);
    for w in 1..lambda.len() {
        let pos = (w + 1) as i64;
        if pos <= k_a {
            if lambda[w] >= lambda[w - 1] {
                v.push(format!(
                    "lambda must be strictly decreasing through position {k_a}: {:?}",
                    lambda
                ));
                break;
            }
        } else if lambda[w] > lambda[w - 1] {
            v.push(format!(
                "lambda must be weakly decreasing beyond position {k_a}: {:?}",
                lambda
            ));
            break;
        }
    }
    if lambda.last().map(|l| *l < 0).unwrap_or(false) {
        v.push(format!(
            "lambda_(k_s) = {} must be non-negative",
            lambda.last().unwrap()
        ));
    }
    let sum: Vec<i64> = lambda.iter().zip(rho.iter()).map(|(l, r)| l + r).collect();
    if !sum.windows(2).all(|w| w[0] >= w[1]) {
        v.push(format!(
            "lambda + rho = {:?} is not a partition (lambda must be rho-strict)",
            sum
        ));
    }
    v.into_result(ShapeData {
        lambda,
        rho: Some(rho),
        split_index: Some(a),
        k_a: Some(k_a),
        strictness: Strictness::RhoStrict,
    })
}

fn dummy_shape() -> ShapeData {
    ShapeData {
        lambda: Vec::new(),
        rho: None,
        split_index: None,
        k_a: None,
        strictness: Strictness::WeaklyDecreasing,
    }
}

/// Whether rank conditions implied by a later one are tolerated. Proper
/// triples forbid them; inflation produces them by construction (the inserted
/// condition is exactly the implied one), so inflated triples are validated
/// with `Allow`. The shape and the class are unaffected either way.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Redundancy {
    Forbid,
    Allow,
}

fn validate_with(t: &Triple, redundancy: Redundancy) -> Result<ShapeData> {
    match (t.kind, t.extended) {
        (TripleKind::A, false) => validate_a(t),
        (TripleKind::A, true) => Err(CoreError::InvalidTriple(vec![
            "extended mode applies to types B, C, D only".to_string(),
        ])),
        (TripleKind::B | TripleKind::C, false) => validate_c_like(t, redundancy),
        (TripleKind::B | TripleKind::C, true) => validate_c_like_extended(t),
        (TripleKind::D, false) => validate_d(t, redundancy),
        (TripleKind::D, true) => validate_d_extended(t),
    }
}

/// Validate a triple and compute its shape data, or report every violated
/// constraint.
pub fn validate_triple(t: &Triple) -> Result<ShapeData> {
    validate_with(t, Redundancy::Forbid)
}

/// Shape data for a triple that may carry redundant conditions (inflation
/// outputs). The strict non-redundancy inequality is relaxed to its weak
/// form, which is exactly what keeps the filled `lambda` well-defined.
pub fn shape_allow_redundant(t: &Triple) -> Result<ShapeData> {
    validate_with(t, Redundancy::Allow)
}

// ---------------------------------------------------------------------------
// inflation
// ---------------------------------------------------------------------------

/// One inflation step: find the first gap `k_i - k_(i-1) > 1` and insert an
/// entry just below `k_i`, preferring the p-move when `p` changes across the
/// gap. Returns `None` when `k` is already gap-free.
pub fn inflate_once(t: &Triple) -> Result<Option<Triple>> {
    shape_allow_redundant(t)?;
    let s = t.s();
    let mut gap_at = None;
    for i in 0..s {
        let lo = if i == 0 { 0 } else { t.k[i - 1] };
        if t.k[i] - lo > 1 {
            gap_at = Some(i);
            break;
        }
    }
    let Some(i) = gap_at else { return Ok(None) };
    let (np, nq) = match t.kind {
        TripleKind::A => {
            // insert (k_i - 1, p_i - 1, q_i) when p changes, else (k_i - 1, p_i, q_i + 1)
            let p_changes = i == 0 || t.p[i] > t.p[i - 1];
            let p_move_legal = t.p[i] - 1 >= 1;
            if p_changes && p_move_legal {
                (t.p[i] - 1, t.q[i])
            } else {
                (t.p[i], t.q[i] + 1)
            }
        }
        TripleKind::B | TripleKind::C | TripleKind::D => {
            // insert (k_i - 1, p_i + 1, q_i) when p changes, else (k_i - 1, p_i, q_i + 1);
            // type D applies the same rule through its shifted type C triple
            let p_changes = i == 0 || t.p[i] < t.p[i - 1];
            if p_changes {
                (t.p[i] + 1, t.q[i])
            } else {
                (t.p[i], t.q[i] + 1)
            }
        }
    };
    let mut k = t.k.clone();
    let mut p = t.p.clone();
    let mut q = t.q.clone();
    k.insert(i, t.k[i] - 1);
    p.insert(i, np);
    q.insert(i, nq);
    let out = Triple {
        kind: t.kind,
        k,
        p,
        q,
        extended: t.extended,
    };
    shape_allow_redundant(&out)?;
    Ok(Some(out))
}

/// Fully inflate: repeat [`inflate_once`] until `k_i = i` throughout.
pub fn inflate(t: &Triple) -> Result<Triple> {
    let mut cur = t.clone();
    while let Some(next) = inflate_once(&cur)? {
        cur = next;
    }
    Ok(cur)
}
