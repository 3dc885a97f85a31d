use std::collections::HashMap;

use super::ColumnSet;

/// Joint pattern key: symbols packed in mixed radix when the product of the
/// alphabet sizes fits in 64 bits, else the raw symbol tuple.
#[derive(Clone, Debug)]
enum Keys {
    Packed(HashMap<u64, u64>),
    Wide(HashMap<Vec<u8>, u64>),
}

/// Counts of the joint symbol patterns observed in a [`ColumnSet`].
/// Only observed patterns are stored.
#[derive(Clone, Debug)]
pub struct PatternCounts {
    keys: Keys,
    radices: Vec<usize>,
    total: u64,
}

impl PatternCounts {
    pub fn from_columns(cols: &ColumnSet<'_>) -> Self {
        let data = cols.data();
        let columns: Vec<&[u8]> = cols.columns().iter().map(|&c| data.column(c)).collect();
        let radices: Vec<usize> = cols.columns().iter().map(|&c| data.alphabet(c)).collect();
        let rows = data.rows();
        let packable = radices
            .iter()
            .try_fold(1u64, |acc, &r| acc.checked_mul(r as u64))
            .is_some();
        let keys = if packable {
            let mut map = HashMap::new();
            for t in 0..rows {
                let key = columns
                    .iter()
                    .zip(&radices)
                    .fold(0u64, |acc, (c, &r)| acc * r as u64 + u64::from(c[t]));
                *map.entry(key).or_insert(0) += 1;
            }
            Keys::Packed(map)
        } else {
            let mut map = HashMap::new();
            for t in 0..rows {
                let key: Vec<u8> = columns.iter().map(|c| c[t]).collect();
                *map.entry(key).or_insert(0) += 1;
            }
            Keys::Wide(map)
        };
        PatternCounts {
            keys,
            radices,
            total: rows as u64,
        }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of distinct observed patterns.
    pub fn len(&self) -> usize {
        match &self.keys {
            Keys::Packed(m) => m.len(),
            Keys::Wide(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Count of one symbol tuple (zero when unobserved).
    pub fn get(&self, pattern: &[u8]) -> u64 {
        if pattern.len() != self.radices.len() {
            return 0;
        }
        match &self.keys {
            Keys::Packed(m) => {
                if pattern
                    .iter()
                    .zip(&self.radices)
                    .any(|(&s, &r)| usize::from(s) >= r)
                {
                    return 0;
                }
                let key = pattern
                    .iter()
                    .zip(&self.radices)
                    .fold(0u64, |acc, (&s, &r)| acc * r as u64 + u64::from(s));
                m.get(&key).copied().unwrap_or(0)
            }
            Keys::Wide(m) => m.get(pattern).copied().unwrap_or(0),
        }
    }

    /// Observed counts, ascending.
    pub fn sorted_counts(&self) -> Vec<u64> {
        let mut c: Vec<u64> = match &self.keys {
            Keys::Packed(m) => m.values().copied().collect(),
            Keys::Wide(m) => m.values().copied().collect(),
        };
        c.sort_unstable();
        c
    }

    /// Plug-in entropy in bits. Counts are summed in sorted order so the
    /// value only depends on the multiset of counts.
    pub fn entropy(&self) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        let t = self.total as f64;
        let s: f64 = self
            .sorted_counts()
            .into_iter()
            .map(|c| {
                let c = c as f64;
                c * c.log2()
            })
            .sum();
        t.log2() - s / t
    }
}

/// Dense codes `0..cardinality` for the joint patterns of a column set, in
/// order of first appearance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Encoded {
    pub codes: Vec<u32>,
    pub cardinality: usize,
}

impl Encoded {
    /// The single-pattern encoding of the empty column set.
    pub fn trivial(rows: usize) -> Self {
        Encoded {
            codes: vec![0; rows],
            cardinality: 1,
        }
    }

    /// Refines the encoding with one more column.
    pub fn refine(&self, column: &[u8], alphabet: usize) -> Self {
        let dense = self.cardinality.saturating_mul(alphabet);
        let mut codes = Vec::with_capacity(self.codes.len());
        let mut next = 0u32;
        if dense <= 1 << 22 {
            let mut lookup = vec![u32::MAX; dense];
            for (&z, &x) in self.codes.iter().zip(column) {
                let slot = &mut lookup[z as usize * alphabet + usize::from(x)];
                if *slot == u32::MAX {
                    *slot = next;
                    next += 1;
                }
                codes.push(*slot);
            }
        } else {
            let mut lookup = HashMap::new();
            for (&z, &x) in self.codes.iter().zip(column) {
                let code = *lookup.entry((z, x)).or_insert_with(|| {
                    next += 1;
                    next - 1
                });
                codes.push(code);
            }
        }
        Encoded {
            codes,
            cardinality: next as usize,
        }
    }
}

/// Dense joint codes of a column set.
pub fn encode(cols: &ColumnSet<'_>) -> Encoded {
    let data = cols.data();
    cols.columns()
        .iter()
        .fold(Encoded::trivial(data.rows()), |enc, &c| {
            enc.refine(data.column(c), data.alphabet(c))
        })
}
