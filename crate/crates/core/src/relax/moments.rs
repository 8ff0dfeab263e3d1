//! Subset-indexed pseudo-moment vectors.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::{self, Rational};

/// Values `y_A` for vertex subsets `A`. Keys are sorted, duplicate-free vertex
/// lists. Lookups of absent subsets fail; nothing is implicitly zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoMoment {
    level: usize,
    entries: BTreeMap<Vec<usize>, Rational>,
}

impl PseudoMoment {
    /// Empty vector at `level` holding only `y_∅ = 1`.
    pub fn new(level: usize) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(Vec::new(), Rational::one());
        PseudoMoment { level, entries }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, set: &[usize], value: Rational) {
        self.entries.insert(canonical(set), value);
    }

    /// Value for `set` (any order, duplicates collapse).
    pub fn get(&self, set: &[usize]) -> Result<&Rational> {
        let key = canonical(set);
        self.entries.get(&key).ok_or(Error::MissingMoment(key))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
        self.entries.iter()
    }

    pub fn to_json(&self) -> String {
        let raw = RawMoment {
            level: self.level,
            entries: self
                .entries
                .iter()
                .map(|(set, value)| RawEntry {
                    set: set.clone(),
                    value: value.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("pseudo-moment serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawMoment = serde_json::from_str(text)?;
        let mut entries = BTreeMap::new();
        for e in raw.entries {
            let key = canonical(&e.set);
            if key.len() != e.set.len() {
                return Err(Error::invalid(format!("repeated vertex in subset {:?}", e.set)));
            }
            if entries.insert(key.clone(), e.value).is_some() {
                return Err(Error::invalid(format!("subset {key:?} listed twice")));
            }
        }
        if !entries.contains_key(&Vec::new()) {
            return Err(Error::MissingMoment(Vec::new()));
        }
        Ok(PseudoMoment {
            level: raw.level,
            entries,
        })
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

#[derive(Serialize, Deserialize)]
struct RawMoment {
    level: usize,
    entries: Vec<RawEntry>,
}

#[derive(Serialize, Deserialize)]
struct RawEntry {
    set: Vec<usize>,
    #[serde(with = "rational::serde_str")]
    value: Rational,
}

pub(crate) fn canonical(set: &[usize]) -> Vec<usize> {
    let mut key = set.to_vec();
    key.sort_unstable();
    key.dedup();
    key
}

/// All subsets of `0..n` with at most `max_size` elements, by size then lexicographically.
pub fn subsets_up_to(n: usize, max_size: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_size.min(n) {
        let mut next = Vec::new();
        for set in &layer {
            let start = set.last().map_or(0, |&v| v + 1);
            for v in start..n {
                let mut s = set.clone();
                s.push(v);
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// `J_{S,T}(y) = Σ_{T'⊆T} (-1)^{|T'|} y_{S∪T'}`.
pub fn junta_value(y: &PseudoMoment, s: &[usize], t: &[usize]) -> Result<Rational> {
    check_disjoint(s, t)?;
    junta_terms(y, s, t, None)
}

/// `Σ_{T'⊆T} (-1)^{|T'|} y_{S∪T'∪{i}}`, with set-union collapse when `i ∈ S∪T'`.
pub fn junta_with_vertex(y: &PseudoMoment, s: &[usize], t: &[usize], i: usize) -> Result<Rational> {
    check_disjoint(s, t)?;
    junta_terms(y, s, t, Some(i))
}

fn check_disjoint(s: &[usize], t: &[usize]) -> Result<()> {
    if let Some(v) = s.iter().find(|v| t.contains(v)) {
        return Err(Error::invalid(format!("S and T share vertex {v}")));
    }
    Ok(())
}

pub(crate) fn junta_terms(y: &PseudoMoment, s: &[usize], t: &[usize], extra: Option<usize>) -> Result<Rational> {
    let mut total = Rational::zero();
    for (set, sign) in junta_expansion(s, t, extra) {
        let v = y.get(&set)?;
        if sign {
            total += v;
        } else {
            total -= v;
        }
    }
    Ok(total)
}

/// Terms `(S∪T'∪extra, sign)` of the alternating sum; `true` is `+`.
pub(crate) fn junta_expansion(s: &[usize], t: &[usize], extra: Option<usize>) -> Vec<(Vec<usize>, bool)> {
    (0u64..1 << t.len())
        .map(|mask| {
            let mut set: Vec<usize> = s.to_vec();
            set.extend(
                t.iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &v)| v),
            );
            set.extend(extra);
            (canonical(&set), mask.count_ones() % 2 == 0)
        })
        .collect()
}

/// Moments of a distribution over independent sets: `z_I` is the total
/// probability of the supports containing `I`, materialized for every subset
/// of size at most `2·level + 1`, which covers every index the level-`level`
/// moment and edge matrices touch.
pub fn moments_from_distribution(g: &Graph, supports: &[(Vec<usize>, Rational)], level: usize) -> Result<PseudoMoment> {
    let mut total = Rational::zero();
    let mut sets = Vec::with_capacity(supports.len());
    for (set, p) in supports {
        if p.is_negative() {
            return Err(Error::invalid(format!("negative probability {p}")));
        }
        let key = canonical(set);
        if key.iter().any(|&v| v >= g.vertex_count()) || !g.is_independent(&key) {
            return Err(Error::invalid(format!("support {set:?} is not an independent set")));
        }
        total += p;
        sets.push((key, p));
    }
    if total != Rational::one() {
        return Err(Error::invalid(format!("probabilities sum to {total}, not 1")));
    }
    let mut z = PseudoMoment::new(level);
    for subset in subsets_up_to(g.vertex_count(), 2 * level + 1) {
        let mass: Rational = sets
            .iter()
            .filter(|(support, _)| subset.iter().all(|v| support.binary_search(v).is_ok()))
            .map(|(_, p)| (*p).clone())
            .sum();
        z.insert(&subset, mass);
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn empty_junta_is_normalization() {
        let y = PseudoMoment::new(1);
        assert_eq!(junta_value(&y, &[], &[]).unwrap(), int(1));
    }

    #[test]
    fn junta_alternating_sum() {
        let mut y = PseudoMoment::new(2);
        y.insert(&[4], ratio(1, 5));
        y.insert(&[7], ratio(1, 5));
        y.insert(&[4, 7], int(0));
        assert_eq!(junta_value(&y, &[], &[4, 7]).unwrap(), ratio(3, 5));
        assert_eq!(junta_value(&y, &[4], &[7]).unwrap(), ratio(1, 5));
        assert!(junta_value(&y, &[4], &[4]).is_err());
        assert!(matches!(junta_value(&y, &[1], &[]), Err(Error::MissingMoment(s)) if s == vec![1]));
    }

    #[test]
    fn union_collapses() {
        let mut y = PseudoMoment::new(1);
        y.insert(&[2], ratio(1, 3));
        assert_eq!(junta_with_vertex(&y, &[2], &[], 2).unwrap(), ratio(1, 3));
        assert_eq!(y.get(&[2, 2]).unwrap(), &ratio(1, 3));
    }

    #[test]
    fn subset_enumeration() {
        let all = subsets_up_to(4, 2);
        assert_eq!(all.len(), 1 + 4 + 6);
        assert_eq!(all[0], Vec::<usize>::new());
        assert_eq!(all[5], vec![0, 1]);
        assert_eq!(subsets_up_to(2, 5).len(), 4);
    }

    #[test]
    fn distribution_moments() {
        let g = Graph::cycle(5);
        let point = moments_from_distribution(&g, &[(vec![], int(1))], 1).unwrap();
        assert!(point
            .entries()
            .all(|(s, v)| if s.is_empty() { *v == int(1) } else { v.is_zero() }));

        let max_sets: Vec<(Vec<usize>, Rational)> = (0..5).map(|i| (vec![i, (i + 2) % 5], ratio(1, 5))).collect();
        let z = moments_from_distribution(&g, &max_sets, 2).unwrap();
        assert_eq!(z.get(&[3]).unwrap(), &ratio(2, 5));
        assert_eq!(z.get(&[0, 1]).unwrap(), &int(0));
        assert_eq!(z.get(&[0, 2]).unwrap(), &ratio(1, 5));

        let mix =
            moments_from_distribution(&Graph::empty(3), &[(vec![0], ratio(1, 2)), (vec![1], ratio(1, 2))], 1).unwrap();
        assert_eq!(mix.get(&[0]).unwrap(), &ratio(1, 2));
        assert_eq!(mix.get(&[0, 1]).unwrap(), &int(0));
    }

    #[test]
    fn distribution_errors() {
        let g = Graph::complete(2);
        assert!(moments_from_distribution(&g, &[(vec![0, 1], int(1))], 1).is_err());
        assert!(moments_from_distribution(&g, &[(vec![0], ratio(1, 2))], 1).is_err());
        assert!(moments_from_distribution(&g, &[(vec![0], int(2)), (vec![1], int(-1))], 1).is_err());
    }

    #[test]
    fn json_round_trip_and_errors() {
        let mut y = PseudoMoment::new(1);
        y.insert(&[0], ratio(34, 24));
        let text = y.to_json();
        assert!(text.contains("\"17/12\""));
        assert_eq!(PseudoMoment::from_json(&text).unwrap(), y);
        let missing_empty = r#"{"level":1,"entries":[{"set":[0],"value":"1/2"}]}"#;
        assert!(PseudoMoment::from_json(missing_empty).is_err());
        let repeated = r#"{"level":1,"entries":[{"set":[],"value":"1"},{"set":[0,0],"value":"1"}]}"#;
        assert!(PseudoMoment::from_json(repeated).is_err());
    }
}
