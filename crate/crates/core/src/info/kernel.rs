use std::collections::HashMap;

use rand::Rng;
use rand_distr::{Distribution, Hypergeometric};

use super::Encoded;

/// Dense count arrays larger than this fall back to hashing.
const DENSE_LIMIT: usize = 1 << 24;

/// Hypergeometric draws up to this size are simulated item by item.
const SEQUENTIAL_DRAWS: u64 = 16;

/// Lookup table of `c * log2(c)` for integer counts `0..=max`.
#[derive(Clone, Debug)]
pub struct XLogX {
    table: Vec<f64>,
}

impl XLogX {
    pub fn new(max: usize) -> Self {
        let table = (0..=max)
            .map(|c| {
                if c == 0 {
                    0.0
                } else {
                    c as f64 * (c as f64).log2()
                }
            })
            .collect();
        XLogX { table }
    }

    #[inline]
    pub fn get(&self, c: u32) -> f64 {
        self.table[c as usize]
    }

    /// Sum of `c log2 c` over a slice of counts.
    pub fn sum(&self, counts: &[u32]) -> f64 {
        counts.iter().map(|&c| self.get(c)).sum()
    }
}

/// Reusable count buffers for [`CmiContext::cmi`].
#[derive(Clone, Debug, Default)]
pub struct Scratch {
    xz: Vec<u32>,
    xyz: Vec<u32>,
}

/// Evaluates `I(X; Y | Z)` for a fixed `Y` and `Z` and varying `X`.
///
/// With `S(A) = sum over patterns a of c(a) log2 c(a)`, the plug-in CMI is
/// `(S(XYZ) + S(Z) - S(XZ) - S(YZ)) / T`; the `Y`/`Z` terms are computed
/// once.
#[derive(Clone, Debug)]
pub struct CmiContext<'a> {
    y: &'a [u8],
    y_alphabet: usize,
    z: Encoded,
    xlogx: XLogX,
    fixed: f64,
}

impl<'a> CmiContext<'a> {
    pub fn new(y: &'a [u8], y_alphabet: usize, z: Encoded) -> Self {
        assert_eq!(y.len(), z.codes.len(), "Y and Z must have the same rows");
        let rows = y.len();
        let xlogx = XLogX::new(rows);
        let mut z_counts = vec![0u32; z.cardinality];
        for &c in &z.codes {
            z_counts[c as usize] += 1;
        }
        let yz = z.refine(y, y_alphabet);
        let mut yz_counts = vec![0u32; yz.cardinality];
        for &c in &yz.codes {
            yz_counts[c as usize] += 1;
        }
        let fixed = xlogx.sum(&z_counts) - xlogx.sum(&yz_counts);
        CmiContext {
            y,
            y_alphabet,
            z,
            xlogx,
            fixed,
        }
    }

    pub fn rows(&self) -> usize {
        self.y.len()
    }

    pub fn conditioning(&self) -> &Encoded {
        &self.z
    }

    /// Plug-in `I(X; Y | Z)` in bits for a column `x` over `x_alphabet`
    /// symbols.
    pub fn cmi(&self, x: &[u8], x_alphabet: usize, scratch: &mut Scratch) -> f64 {
        assert_eq!(x.len(), self.rows(), "X must have the same rows as Y");
        let rows = self.rows();
        if rows == 0 {
            return 0.0;
        }
        let xz_size = self.z.cardinality * x_alphabet;
        let xyz_size = xz_size * self.y_alphabet;
        let (s_xz, s_xyz) = if xyz_size <= DENSE_LIMIT {
            let xz = &mut scratch.xz;
            let xyz = &mut scratch.xyz;
            xz.clear();
            xz.resize(xz_size, 0);
            xyz.clear();
            xyz.resize(xyz_size, 0);
            for ((&z, &x), &y) in self.z.codes.iter().zip(x).zip(self.y) {
                let a = z as usize * x_alphabet + usize::from(x);
                xz[a] += 1;
                xyz[a * self.y_alphabet + usize::from(y)] += 1;
            }
            (self.xlogx.sum(xz), self.xlogx.sum(xyz))
        } else {
            let mut xz: HashMap<(u32, u8), u32> = HashMap::new();
            let mut xyz: HashMap<(u32, u8, u8), u32> = HashMap::new();
            for ((&z, &x), &y) in self.z.codes.iter().zip(x).zip(self.y) {
                *xz.entry((z, x)).or_insert(0) += 1;
                *xyz.entry((z, x, y)).or_insert(0) += 1;
            }
            let mut a: Vec<u32> = xz.into_values().collect();
            let mut b: Vec<u32> = xyz.into_values().collect();
            a.sort_unstable();
            b.sort_unstable();
            (self.xlogx.sum(&a), self.xlogx.sum(&b))
        };
        (s_xyz + self.fixed - s_xz) / rows as f64
    }
}

/// The contingency of one `X` column against the joint `(Z, Y)` cells of a
/// [`CmiContext`].
///
/// The plug-in CMI depends on the rows only through this table. Under a
/// uniformly random shuffle of `X`, the number of each `X` symbol landing in
/// each cell is multivariate hypergeometric, so [`NullTable::sample`] draws
/// the statistic of a shuffled `X` in time proportional to the number of
/// cells rather than the number of rows.
#[derive(Clone, Debug)]
pub struct NullTable<'c, 'a> {
    ctx: &'c CmiContext<'a>,
    /// `(z code, rows)` of every non-empty `(z, y)` cell, by `z` then `y`.
    cells: Vec<(u32, u32)>,
    x_counts: Vec<u64>,
}

/// Reusable buffers for [`NullTable::sample`].
#[derive(Clone, Debug, Default)]
pub struct NullScratch {
    remaining: Vec<u64>,
    xz: Vec<u32>,
}

impl<'a> CmiContext<'a> {
    /// The table of `x` against this context's cells.
    pub fn null_table<'c>(&'c self, x: &[u8], x_alphabet: usize) -> NullTable<'c, 'a> {
        assert_eq!(x.len(), self.rows(), "X must have the same rows as Y");
        let mut counts = vec![0u32; self.z.cardinality * self.y_alphabet];
        for (&z, &y) in self.z.codes.iter().zip(self.y) {
            counts[z as usize * self.y_alphabet + usize::from(y)] += 1;
        }
        let cells = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| ((i / self.y_alphabet) as u32, c))
            .collect();
        let mut x_counts = vec![0u64; x_alphabet];
        for &v in x {
            x_counts[usize::from(v)] += 1;
        }
        NullTable {
            ctx: self,
            cells,
            x_counts,
        }
    }
}

/// Successes among `draws` taken without replacement from `population`
/// items of which `successes` are marked.
fn hypergeometric<R: Rng + ?Sized>(
    population: u64,
    successes: u64,
    draws: u64,
    rng: &mut R,
) -> u64 {
    if draws == 0 || successes == 0 {
        return 0;
    }
    if successes == population {
        return draws;
    }
    if draws == population {
        return successes;
    }
    if draws > SEQUENTIAL_DRAWS {
        // the distribution rejects some extreme parameters (underflow in its
        // setup); those fall through to drawing one item at a time
        if let Ok(h) = Hypergeometric::new(population, successes, draws) {
            return h.sample(rng);
        }
    }
    let (mut pool, mut marked, mut hits) = (population, successes, 0);
    for _ in 0..draws {
        if rng.random_range(0..pool) < marked {
            hits += 1;
            marked -= 1;
        }
        pool -= 1;
    }
    hits
}

impl NullTable<'_, '_> {
    /// `I(X'; Y | Z)` for a uniformly shuffled copy `X'` of `X`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, scratch: &mut NullScratch) -> f64 {
        let ctx = self.ctx;
        let rows = ctx.rows();
        if rows == 0 {
            return 0.0;
        }
        let ax = self.x_counts.len();
        let remaining = &mut scratch.remaining;
        remaining.clear();
        remaining.extend_from_slice(&self.x_counts);
        let xz = &mut scratch.xz;
        xz.clear();
        xz.resize(ctx.z.cardinality * ax, 0);
        let mut left = rows as u64;
        let mut s_xyz = 0.0;
        for &(z, c) in &self.cells {
            let mut pool = left;
            let mut draws = u64::from(c);
            for (s, rem) in remaining.iter_mut().enumerate() {
                if draws == 0 {
                    break;
                }
                let k = hypergeometric(pool, *rem, draws, rng);
                pool -= *rem;
                draws -= k;
                *rem -= k;
                s_xyz += ctx.xlogx.get(k as u32);
                xz[z as usize * ax + s] += k as u32;
            }
            left -= u64::from(c);
        }
        (s_xyz + ctx.fixed - ctx.xlogx.sum(xz)) / rows as f64
    }
}
