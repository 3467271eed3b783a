//! Erdős–Szekeres style subsequence extraction.

use crate::EedpError;

/// Witness of the classic dichotomy: a strictly increasing subsequence of
/// length `s` or a strictly decreasing one of length `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Monotone {
    Increasing(Vec<i64>),
    Decreasing(Vec<i64>),
}

/// For distinct numbers with `n >= (s-1)(r-1)+1`, returns an increasing
/// subsequence of length `s` or a decreasing one of length `r`.
pub fn es_monotone(seq: &[i64], s: usize, r: usize) -> Result<Monotone, EedpError> {
    if s == 0 || r == 0 {
        return Err(EedpError::Structure("lengths must be positive".into()));
    }
    let inc = longest_subsequence(seq, |a, b| a < b);
    if inc.len() >= s {
        return Ok(Monotone::Increasing(inc[..s].to_vec()));
    }
    let dec = longest_subsequence(seq, |a, b| a > b);
    if dec.len() >= r {
        return Ok(Monotone::Decreasing(dec[..r].to_vec()));
    }
    Err(EedpError::Structure(format!(
        "sequence of length {} is below the bound (s-1)(r-1)+1 = {}",
        seq.len(),
        (s - 1) * (r - 1) + 1
    )))
}

fn longest_subsequence<F: Fn(i64, i64) -> bool>(seq: &[i64], better: F) -> Vec<i64> {
    let n = seq.len();
    let mut best_len = vec![1usize; n];
    let mut prev = vec![usize::MAX; n];
    let mut best_end = 0usize;
    for i in 0..n {
        for j in 0..i {
            if better(seq[j], seq[i]) && best_len[j] + 1 > best_len[i] {
                best_len[i] = best_len[j] + 1;
                prev[i] = j;
            }
        }
        if n > 0 && best_len[i] > best_len[best_end] {
            best_end = i;
        }
    }
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut at = best_end;
    loop {
        out.push(seq[at]);
        if prev[at] == usize::MAX {
            break;
        }
        at = prev[at];
    }
    out.reverse();
    out
}

/// A monotone subsequence (by chosen positions) is non-repetitive when no
/// chosen value occurs in the original sequence strictly between a later
/// pair of consecutive chosen positions.
pub fn is_nonrepetitive(seq: &[i64], positions: &[usize]) -> bool {
    for (m, &pm) in positions.iter().enumerate() {
        for w in positions[m..].windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if seq[lo + 1..hi].contains(&seq[pm]) {
                return false;
            }
        }
    }
    true
}

/// Finds a non-repetitive strictly monotone subsequence of length `s` in a
/// sequence where no value appears more than `c` times. Existence is
/// guaranteed once `n >= (s c^s - 1)^2`; shorter inputs are searched
/// anyway and rejected only when no witness exists.
pub fn es_nonrepetitive(seq: &[i64], c: usize, s: usize) -> Result<Vec<i64>, EedpError> {
    for &v in seq {
        let occurrences = seq.iter().filter(|&&x| x == v).count();
        if occurrences > c {
            return Err(EedpError::Structure(format!(
                "value {v} appears {occurrences} > c = {c} times"
            )));
        }
    }
    let mut chosen: Vec<usize> = Vec::new();
    if search_nonrep(seq, s, &mut chosen, true) || search_nonrep(seq, s, &mut chosen, false) {
        return Ok(chosen.iter().map(|&i| seq[i]).collect());
    }
    let bound = (s as u64 * (c as u64).pow(s as u32)).saturating_sub(1).pow(2);
    Err(EedpError::Structure(format!(
        "no non-repetitive monotone subsequence of length {s}; input length {} is below the bound {bound}",
        seq.len()
    )))
}

fn search_nonrep(seq: &[i64], s: usize, chosen: &mut Vec<usize>, increasing: bool) -> bool {
    if chosen.len() == s {
        return is_nonrepetitive(seq, chosen);
    }
    let start = chosen.last().map_or(0, |&p| p + 1);
    for i in start..seq.len() {
        if let Some(&last) = chosen.last() {
            let ok = if increasing {
                seq[last] < seq[i]
            } else {
                seq[last] > seq[i]
            };
            if !ok {
                continue;
            }
            // prune: the new gap must not contain any already chosen value
            if seq[last + 1..i]
                .iter()
                .any(|v| chosen.iter().any(|&p| seq[p] == *v))
            {
                continue;
            }
        }
        chosen.push(i);
        if search_nonrep(seq, s, chosen, increasing) {
            return true;
        }
        chosen.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_example_monotone() {
        let got = es_monotone(&[2, 4, 1, 3, 5], 3, 3).unwrap();
        match got {
            Monotone::Increasing(v) => {
                assert_eq!(v.len(), 3);
                assert!(v.windows(2).all(|w| w[0] < w[1]));
            }
            Monotone::Decreasing(_) => panic!("an increasing witness exists"),
        }
    }

    #[test]
    fn increasing_input_yields_prefix() {
        let got = es_monotone(&[1, 2, 3, 4], 3, 2).unwrap();
        assert_eq!(got, Monotone::Increasing(vec![1, 2, 3]));
    }

    #[test]
    fn short_input_is_rejected() {
        assert!(es_monotone(&[1, 2], 3, 3).is_err());
    }

    #[test]
    fn spec_example_nonrepetitive() {
        let got = es_nonrepetitive(&[1, 1, 2, 2], 2, 2).unwrap();
        assert_eq!(got, vec![1, 2]);
    }

    #[test]
    fn nonrepetitive_rejects_overfrequent_values() {
        assert!(es_nonrepetitive(&[7, 7, 7], 2, 2).is_err());
    }

    #[test]
    fn nonrepetitive_respects_gaps() {
        // choosing positions 0 and 3 of (1,2,1,2) puts a 1 in the gap, so
        // the witness must use the adjacent pair instead
        let got = es_nonrepetitive(&[1, 2, 1, 2], 2, 2).unwrap();
        assert_eq!(got, vec![1, 2]);
    }
}
