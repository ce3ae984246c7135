//! Factor complexity `f(n) = |L_n(τ)|` and its first difference
//! `Δ(n) = f(n) - f(n-1)`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::substitution::Substitution;
use crate::winshift::WinShift;

/// How one entry of a table was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Direct,
    Recurrence,
    ClosedForm,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Direct => "direct",
            Provenance::Recurrence => "recurrence",
            Provenance::ClosedForm => "closed_form",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableMethod {
    #[default]
    Auto,
    Direct,
    Recurrence,
}

impl FromStr for TableMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(TableMethod::Auto),
            "direct" => Ok(TableMethod::Direct),
            "recurrence" => Ok(TableMethod::Recurrence),
            _ => Err(Error::InvalidArgument(format!(
                "unknown method {s:?} (auto, direct, recurrence)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexityTable {
    pub upto: usize,
    pub f: Vec<usize>,
    pub delta: Vec<usize>,
    pub method: Vec<Provenance>,
}

impl ComplexityTable {
    /// Builds `f` from `Δ` by prefix sums.
    pub fn from_deltas(delta: Vec<usize>, method: Vec<Provenance>) -> Self {
        assert_eq!(delta.len(), method.len());
        assert!(!delta.is_empty(), "a table has at least the n = 0 entry");
        let f = delta
            .iter()
            .scan(0usize, |acc, d| {
                *acc += d;
                Some(*acc)
            })
            .collect();
        ComplexityTable {
            upto: delta.len() - 1,
            f,
            delta,
            method,
        }
    }
}

/// `n = M^k r + ℓ + 1` with `k` maximal such that `M^k K + 2 ≤ n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DeltaDecomposition {
    pub n: usize,
    pub k: u32,
    pub r: usize,
    pub l: usize,
    pub big_k: usize,
    pub m_pow_k: usize,
}

/// `K = ⌈(L - 1) / M⌉`, the least `K` with `MK + 1 ≥ L`.
pub fn big_k(delay: usize, m: usize) -> usize {
    delay.saturating_sub(1).div_ceil(m)
}

pub fn delta_direct(tau: &Substitution, n: usize) -> Result<usize> {
    if n == 0 {
        return Ok(1);
    }
    Ok(tau.language(n)?.len() - tau.language(n - 1)?.len())
}

pub fn delta_decompose(n: usize, m: usize, big_k: usize) -> Result<DeltaDecomposition> {
    if m < 2 || big_k < 1 {
        return Err(Error::InvalidArgument("need M ≥ 2 and K ≥ 1".into()));
    }
    if n < big_k + 2 {
        return Err(Error::InvalidArgument(format!(
            "n = {n} is below K + 2 = {}",
            big_k + 2
        )));
    }
    let mut k = 0u32;
    let mut pow = 1usize;
    while let Some(next) = pow.checked_mul(m) {
        match next.checked_mul(big_k).and_then(|x| x.checked_add(2)) {
            Some(lo) if lo <= n => {
                pow = next;
                k += 1;
            }
            _ => break,
        }
    }
    let r = (n - 2) / pow;
    let l = n - 1 - pow * r;
    Ok(DeltaDecomposition {
        n,
        k,
        r,
        l,
        big_k,
        m_pow_k: pow,
    })
}

/// `Δ` via the reduction `Δ(n) = Δ(r + 2)` for marked `τ`, which lands in
/// the base range `n ≤ MK + 1` in one step.
pub fn delta_recurrence(ws: &WinShift, n: usize) -> Result<usize> {
    let tau = ws.substitution();
    if !tau.is_marked() {
        return Err(Error::Unsupported(
            "the Δ recurrence requires a marked substitution".into(),
        ));
    }
    let m = ws.image_length();
    let k = big_k(ws.delay(), m);
    if n <= m * k + 1 {
        return delta_direct(tau, n);
    }
    let d = delta_decompose(n, m, k)?;
    delta_direct(tau, d.r + 2)
}

pub fn complexity_table(
    ws: &WinShift,
    upto: usize,
    method: TableMethod,
) -> Result<ComplexityTable> {
    let tau = ws.substitution();
    let recurrence = match method {
        TableMethod::Direct => false,
        TableMethod::Recurrence => {
            if !tau.is_marked() {
                return Err(Error::Unsupported(
                    "the Δ recurrence requires a marked substitution".into(),
                ));
            }
            true
        }
        TableMethod::Auto => tau.is_marked(),
    };
    let m = ws.image_length();
    let k = big_k(ws.delay(), m);
    let base_top = if recurrence {
        upto.min(m * k + 1)
    } else {
        upto
    };

    let mut sizes = Vec::with_capacity(base_top + 1);
    for n in 0..=base_top {
        sizes.push(tau.language(n)?.len());
    }
    let mut delta = vec![1];
    delta.extend(sizes.windows(2).map(|w| w[1] - w[0]));
    let mut prov = vec![Provenance::Direct; delta.len()];
    for n in base_top + 1..=upto {
        let d = delta_decompose(n, m, k)?;
        delta.push(delta[d.r + 2]);
        prov.push(Provenance::Recurrence);
    }
    Ok(ComplexityTable::from_deltas(delta, prov))
}
