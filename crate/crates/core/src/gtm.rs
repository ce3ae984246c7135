//! Generalized Thue–Morse words `t_{b,m}`: the letter at position `n` is the
//! base-`b` digit sum of `n` modulo `m`, and `t_{b,m}` is the fixed point of
//! `φ(k) = k(k+1)⋯(k+b-1)` over `Z_m`.
//!
//! Everything here is closed form. The generic pipeline in the other
//! modules serves as the cross-check.

use std::collections::BTreeSet;

use crate::complexity::{ComplexityTable, Provenance};
use crate::error::{Error, Result};
use crate::recognizability::sync_delay;
use crate::substitution::Substitution;
use crate::words::{Alphabet, ChoiceSequence, Letter, Word};

/// Validated aperiodic parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GtmParams {
    pub b: usize,
    pub m: usize,
    pub q: usize,
}

impl GtmParams {
    pub fn new(b: usize, m: usize) -> Result<Self> {
        if b < 2 || m < 1 {
            return Err(Error::InvalidArgument(format!(
                "need b ≥ 2 and m ≥ 1, got b={b}, m={m}"
            )));
        }
        if m > 255 {
            return Err(Error::InvalidArgument(format!(
                "m = {m} exceeds the 255-letter alphabet limit"
            )));
        }
        if b % m == 1 % m {
            return Err(Error::Periodic { b, m });
        }
        Ok(GtmParams {
            b,
            m,
            q: gtm_q(b, m)?,
        })
    }

    pub fn substitution(&self) -> Substitution {
        gtm_substitution(self.b, self.m).expect("validated parameters build a substitution")
    }

    /// The synchronization delay `2b`.
    pub fn sync_delay(&self) -> usize {
        2 * self.b
    }

    /// Recomputes the delay generically and checks it equals `2b`.
    pub fn verify_sync_delay(&self) -> Result<usize> {
        let found = sync_delay(&self.substitution(), 4 * self.b)?.delay;
        if found != self.sync_delay() {
            return Err(Error::Consistency(format!(
                "generic delay {found} differs from 2b = {}",
                2 * self.b
            )));
        }
        Ok(found)
    }

    fn add(&self, x: usize, y: usize) -> Letter {
        ((x + y) % self.m) as Letter
    }

    fn sub(&self, x: usize, y: usize) -> Letter {
        ((x + self.m - y % self.m) % self.m) as Letter
    }

    /// `π^i(x) = x + i(b-1)`.
    fn pi_pow(&self, x: usize, i: usize) -> Letter {
        self.add(x, i * (self.b - 1) % self.m)
    }

    fn pi_inv_pow(&self, x: usize, i: usize) -> Letter {
        self.sub(x, i * (self.b - 1) % self.m)
    }

    /// Factors of length 2 or 3.
    pub fn factors(&self, n: usize) -> Result<BTreeSet<Word>> {
        let mut out = BTreeSet::new();
        for k in 0..self.m {
            let prev = self.sub(k, 1) as usize;
            for i in 0..self.q {
                match n {
                    2 => {
                        out.insert(Word::new(vec![self.pi_pow(prev, i), k as Letter]));
                    }
                    3 => {
                        out.insert(Word::new(vec![
                            self.pi_pow(prev, i),
                            k as Letter,
                            self.add(k, 1),
                        ]));
                        out.insert(Word::new(vec![
                            prev as Letter,
                            k as Letter,
                            self.pi_inv_pow(k + 1, i),
                        ]));
                    }
                    _ => {
                        return Err(Error::InvalidArgument(
                            "closed-form factors exist for n = 2 and n = 3".into(),
                        ))
                    }
                }
            }
        }
        Ok(out)
    }

    /// The irreducible choice sequences of length `n` in the winning shift.
    pub fn irreducibles(&self, n: usize) -> BTreeSet<ChoiceSequence> {
        let mut out = BTreeSet::new();
        let m = self.m as u8;
        if n == 0 {
            return out;
        }
        if n == 1 {
            return (2..=m).map(|a| ChoiceSequence::new(vec![a])).collect();
        }
        for d in 1..=m {
            for a in 2..=self.q as u8 {
                let mut v = vec![d];
                v.extend(std::iter::repeat_n(1, n - 2));
                v.push(a);
                out.insert(ChoiceSequence::new(v));
            }
        }
        if let Some((bk, l)) = self.family_two(n) {
            for d in 1..=m {
                let mut v = vec![d];
                v.extend(std::iter::repeat_n(1, l));
                v.push(2);
                v.extend(std::iter::repeat_n(1, bk - 1));
                v.push(2);
                out.insert(ChoiceSequence::new(v));
            }
        }
        out
    }

    /// `(b^k, ℓ)` for the pattern `◇1^ℓ 2 1^{b^k-1} 2` of length `n`, where
    /// `k ≥ 1` is largest with `b^k < n`.
    fn family_two(&self, n: usize) -> Option<(usize, usize)> {
        let mut pow = self.b;
        if pow >= n {
            return None;
        }
        while let Some(next) = pow.checked_mul(self.b) {
            if next >= n {
                break;
            }
            pow = next;
        }
        let l = n.checked_sub(pow + 2)?;
        (l < pow - pow / self.b).then_some((pow, l))
    }

    /// The row of the complexity table covering `n ≥ 1`. Rows are checked to
    /// tile: exactly one may match.
    pub fn row(&self, n: usize) -> Result<TableRow> {
        let b = self.b;
        let mut rows = Vec::new();
        if n == 1 {
            rows.push(TableRow::One);
        }
        if (2..=b + 1).contains(&n) {
            rows.push(TableRow::Short);
        }
        let mut k = 0u32;
        let mut bk = 1usize;
        while let Some(bk1) = bk.checked_mul(b) {
            if bk1 + 2 > n {
                break;
            }
            // n = b^{k+1} + ℓ + 1, 1 ≤ ℓ ≤ b^{k+1} - b^k
            let l = n - bk1 - 1;
            if (1..=bk1 - bk).contains(&l) {
                rows.push(TableRow::Rise { k, l });
            }
            // n = 2b^{k+1} - b^k + ℓ + 1, 1 ≤ ℓ ≤ b^{k+2} - 2b^{k+1} + b^k
            let base = 2 * bk1 - bk + 1;
            if n > base {
                let l = n - base;
                let top = bk1.checked_mul(b).map(|bk2| bk2 - 2 * bk1 + bk);
                if top.is_none_or(|t| l <= t) {
                    rows.push(TableRow::Fall { k, l });
                }
            }
            bk = bk1;
            k += 1;
        }
        match rows.as_slice() {
            [r] => Ok(*r),
            _ => Err(Error::Consistency(format!(
                "n = {n} matches {} table rows: {rows:?}",
                rows.len()
            ))),
        }
    }

    pub fn delta(&self, n: usize) -> Result<usize> {
        let (q, m) = (self.q, self.m);
        if n == 0 {
            return Ok(1);
        }
        Ok(match self.row(n)? {
            TableRow::One => m - 1,
            TableRow::Short | TableRow::Fall { .. } => (q - 1) * m,
            TableRow::Rise { .. } => q * m,
        })
    }

    pub fn complexity(&self, n: usize) -> Result<usize> {
        let (b, q, m) = (self.b, self.q, self.m);
        if n == 0 {
            return Ok(1);
        }
        Ok(match self.row(n)? {
            TableRow::One => m,
            TableRow::Short => q * m * (n - 1) - m * (n - 2),
            TableRow::Rise { k, .. } => {
                let bk = b.pow(k);
                q * m * (n - 1) - m * (bk * b - bk)
            }
            TableRow::Fall { k, l } => {
                let bk = b.pow(k);
                q * m * (n - 1) - m * (bk * b - bk + l)
            }
        })
    }

    pub fn complexity_table(&self, upto: usize) -> Result<ComplexityTable> {
        let delta = (0..=upto)
            .map(|n| self.delta(n))
            .collect::<Result<Vec<_>>>()?;
        let table = ComplexityTable::from_deltas(delta, vec![Provenance::ClosedForm; upto + 1]);
        for (n, &f) in table.f.iter().enumerate() {
            let c = self.complexity(n)?;
            if c != f {
                return Err(Error::Consistency(format!(
                    "C({n}) = {c} but the summed Δ gives {f}"
                )));
            }
        }
        Ok(table)
    }
}

/// The four cases of the complexity table for `n ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableRow {
    One,
    /// `2 ≤ n ≤ b + 1`.
    Short,
    /// `n = b^{k+1} + ℓ + 1`.
    Rise {
        k: u32,
        l: usize,
    },
    /// `n = 2b^{k+1} - b^k + ℓ + 1`.
    Fall {
        k: u32,
        l: usize,
    },
}

/// `φ_{b,m}`. Periodic parameters are allowed here so they can be probed.
pub fn gtm_substitution(b: usize, m: usize) -> Result<Substitution> {
    if b < 2 {
        return Err(Error::InvalidArgument(format!("need b ≥ 2, got {b}")));
    }
    let alphabet = Alphabet::new(m)?;
    let images = (0..m)
        .map(|k| Word::new((0..b).map(|j| ((k + j) % m) as Letter).collect()))
        .collect();
    Ok(Substitution::new(alphabet, images)?.with_name(format!("gtm:{b},{m}")))
}

/// `s_b(n) mod m`.
pub fn gtm_letter(b: usize, m: usize, mut n: u64) -> Letter {
    let (b, m) = (b as u64, m as u64);
    let mut sum = 0u64;
    while n > 0 {
        sum += n % b;
        n /= b;
    }
    (sum % m) as Letter
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Order of `k ↦ k + b - 1` on `Z_m`, i.e. `m / gcd(m, b - 1)`, checked by
/// iterating the permutation.
pub fn gtm_q(b: usize, m: usize) -> Result<usize> {
    if b < 2 || m < 1 {
        return Err(Error::InvalidArgument(format!(
            "need b ≥ 2 and m ≥ 1, got b={b}, m={m}"
        )));
    }
    let q = m / gcd(m, b - 1);
    let mut x = (b - 1) % m;
    let mut order = 1;
    while x != 0 {
        x = (x + b - 1) % m;
        order += 1;
    }
    if order != q {
        return Err(Error::Consistency(format!(
            "π has order {order}, formula gives {q}"
        )));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn substitutions() {
        assert_eq!(
            gtm_substitution(2, 2).unwrap().images(),
            &[w("01"), w("10")]
        );
        assert_eq!(
            gtm_substitution(2, 3).unwrap().images(),
            &[w("01"), w("12"), w("20")]
        );
        assert_eq!(
            gtm_substitution(3, 3).unwrap().images(),
            &[w("012"), w("120"), w("201")]
        );
        assert!(gtm_substitution(3, 3).unwrap().is_permutive());
    }

    #[test]
    fn letters_and_q() {
        let tm: Vec<_> = (0..6).map(|n| gtm_letter(2, 2, n)).collect();
        assert_eq!(tm, vec![0, 1, 1, 0, 1, 0]);
        assert_eq!(gtm_letter(2, 3, 3), 2);
        assert_eq!(gtm_letter(5, 4, 0), 0);
        assert_eq!(gtm_q(2, 2).unwrap(), 2);
        assert_eq!(gtm_q(2, 3).unwrap(), 3);
        assert_eq!(gtm_q(4, 2).unwrap(), 2);
        assert_eq!(gtm_q(3, 4).unwrap(), 2);
    }

    #[test]
    fn periodic_rejected() {
        assert_eq!(GtmParams::new(3, 2), Err(Error::Periodic { b: 3, m: 2 }));
        assert_eq!(GtmParams::new(4, 3), Err(Error::Periodic { b: 4, m: 3 }));
        assert!(GtmParams::new(2, 1).is_err());
    }

    #[test]
    fn closed_form_factors() {
        let p = GtmParams::new(2, 3).unwrap();
        assert_eq!(p.factors(2).unwrap().len(), 9);
        let tm = GtmParams::new(2, 2).unwrap();
        assert_eq!(
            tm.factors(2).unwrap(),
            [w("00"), w("01"), w("10"), w("11")].into()
        );
        let f3 = tm.factors(3).unwrap();
        assert_eq!(f3.len(), 6);
        assert!(!f3.contains(&w("000")) && !f3.contains(&w("111")));
    }

    #[test]
    fn delays() {
        assert_eq!(
            GtmParams::new(2, 2).unwrap().verify_sync_delay().unwrap(),
            4
        );
        assert_eq!(
            GtmParams::new(3, 3).unwrap().verify_sync_delay().unwrap(),
            6
        );
        assert_eq!(GtmParams::new(4, 2).unwrap().sync_delay(), 8);
    }

    #[test]
    fn irreducibles() {
        let tm = GtmParams::new(2, 2).unwrap();
        let seven: Vec<String> = tm.irreducibles(7).iter().map(|a| a.to_string()).collect();
        assert_eq!(seven, ["1111112", "1121112", "2111112", "2121112"]);
        assert_eq!(tm.irreducibles(5).len(), 2);
        assert_eq!(GtmParams::new(2, 3).unwrap().irreducibles(5).len(), 6);
        assert_eq!(tm.irreducibles(1).len(), 1);
    }

    #[test]
    fn table_values() {
        let tm = GtmParams::new(2, 2).unwrap();
        assert_eq!(tm.complexity(4).unwrap(), 10);
        assert_eq!(tm.complexity(5).unwrap(), 12);
        let p = GtmParams::new(2, 3).unwrap();
        assert_eq!(p.complexity(2).unwrap(), 9);
        assert_eq!(p.delta(5).unwrap(), 6);
        let f: Vec<_> = tm.complexity_table(9).unwrap().f;
        assert_eq!(f, vec![1, 2, 4, 6, 10, 12, 16, 20, 22, 24]);
    }
}
