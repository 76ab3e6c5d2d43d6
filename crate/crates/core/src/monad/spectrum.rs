//! Spectra of rank-2 bundles and their recovery from `h¹` profiles.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::MonadError;

/// Sorted multiset `k₁ ≤ … ≤ k_n` with `h¹(E(l)) = Σ h⁰(O_{P¹}(kᵢ + l + 1))` for `l ≤ −1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Spectrum {
    pub c1: i64,
    pub entries: Vec<i64>,
}

impl Spectrum {
    pub fn new(c1: i64, mut entries: Vec<i64>) -> Self {
        entries.sort_unstable();
        Spectrum { c1, entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `k ↦ −k` for `c₁ = 0`, `k ↦ −1 − k` for `c₁ = −1`.
    pub fn is_symmetric(&self) -> bool {
        let mut mirrored: Vec<i64> = self.entries.iter().map(|k| -self.c1.abs() - k).collect();
        mirrored.sort_unstable();
        mirrored == self.entries
    }

    /// `Σ max(0, kᵢ + l + 2)`; equals `h¹(E(l))` for `l ≤ −1`.
    pub fn h1(&self, l: i64) -> u64 {
        self.entries.iter().map(|k| (k + l + 2).max(0) as u64).sum()
    }

    /// Multiplicities, smallest entry first.
    pub fn multiplicities(&self) -> Vec<(i64, usize)> {
        let mut out: Vec<(i64, usize)> = Vec::new();
        for &k in &self.entries {
            match out.last_mut() {
                Some((v, c)) if *v == k => *c += 1,
                _ => out.push((k, 1)),
            }
        }
        out
    }

    /// Reads the compact notation `(-1,0^4,1)`.
    pub fn parse(c1: i64, s: &str) -> Result<Self, String> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut entries = Vec::new();
        for tok in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (k, mult) = match tok.split_once('^') {
                Some((k, e)) => (k, e.parse::<usize>().map_err(|e| format!("{tok}: {e}"))?),
                None => (tok, 1),
            };
            let k: i64 = k.parse().map_err(|e| format!("{tok}: {e}"))?;
            entries.extend(std::iter::repeat_n(k, mult));
        }
        Ok(Spectrum::new(c1, entries))
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .multiplicities()
            .into_iter()
            .map(|(k, c)| if c == 1 { k.to_string() } else { format!("{k}^{c}") })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Recovers the spectrum from `f(l) = h¹(E(l))`, given for consecutive `l ≤ −1` ending at `−1`
/// and reaching zero at its lowest twists.
///
/// `f(−j−1) − f(−j−2)` counts the entries `≥ j`; the entries below zero follow from the symmetry.
pub fn recover(profile: &BTreeMap<i64, u64>, c1: i64, n: u64) -> Result<Spectrum, MonadError> {
    let bad = |why: String| MonadError::InconsistentProfile(why);
    if c1 != 0 && c1 != -1 {
        return Err(bad(format!("c1 = {c1} is not normalized")));
    }
    let lo = *profile.keys().next().ok_or_else(|| bad("empty profile".into()))?;
    if profile.keys().next_back() != Some(&-1) || profile.len() as i64 != -lo {
        return Err(bad("profile must cover every twist from its minimum up to -1".into()));
    }
    if profile[&lo] != 0 {
        return Err(bad(format!("h1(E({lo})) = {} has not reached zero", profile[&lo])));
    }
    let f = |l: i64| if l < lo { 0 } else { profile[&l] as i64 };
    // at_least[j] = #{k ≥ j}
    let at_least: Vec<i64> = (0..-lo).map(|j| f(-j - 1) - f(-j - 2)).collect();
    let mut entries = Vec::new();
    for j in 0..at_least.len() {
        let next = at_least.get(j + 1).copied().unwrap_or(0);
        let exact = at_least[j] - next;
        if exact < 0 {
            return Err(bad(format!("first differences of the profile increase at l = {}", -(j as i64) - 1)));
        }
        let j = j as i64;
        for _ in 0..exact {
            entries.push(j);
            if c1 == -1 {
                entries.push(-1 - j);
            } else if j > 0 {
                entries.push(-j);
            }
        }
    }
    let s = Spectrum::new(c1, entries);
    if s.len() as u64 != n {
        return Err(bad(format!("recovered {} entries {s}, expected c2 = {n}", s.len())));
    }
    if let Some((l, v)) = profile.iter().find(|(l, v)| s.h1(**l) != **v) {
        return Err(bad(format!("spectrum {s} predicts h1(E({l})) = {}, profile has {v}", s.h1(*l))));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn notation_round_trips() {
        let s = Spectrum::parse(0, "(-3,-2^2,-1^3,0^6,1^3,2^2,3)").unwrap();
        assert_eq!(s.len(), 18);
        assert!(s.is_symmetric());
        assert_eq!(s.to_string(), "(-3,-2^2,-1^3,0^6,1^3,2^2,3)");
    }

    #[test]
    fn recovery_of_a_small_profile() {
        let profile: BTreeMap<i64, u64> = [(-4, 0), (-3, 0), (-2, 1), (-1, 6)].into_iter().collect();
        let s = recover(&profile, 0, 6).unwrap();
        assert_eq!(s.to_string(), "(-1,0^4,1)");
        assert!(recover(&profile, 0, 7).is_err());
    }
}
