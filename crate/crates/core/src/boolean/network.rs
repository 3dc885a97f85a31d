use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::table::{check_noise, flip, BooleanTable};
use super::NaPolicy;
use crate::{Error, Result};

/// A stochastic Boolean network: per-node parent lists, truth tables and
/// flip probabilities. Parent lists are sorted ascending and table inputs
/// follow that order.
#[derive(Clone, Debug, PartialEq)]
pub struct BooleanNetwork {
    neighbors: Vec<Vec<usize>>,
    tables: Vec<BooleanTable>,
    noise: Vec<f64>,
}

impl BooleanNetwork {
    /// Builds a network, sorting each parent list and permuting the inputs
    /// of its table to match.
    pub fn new(
        neighbors: Vec<Vec<usize>>,
        tables: Vec<BooleanTable>,
        noise: Vec<f64>,
    ) -> Result<Self> {
        let n = neighbors.len();
        if tables.len() != n || noise.len() != n {
            return Err(Error::invalid(format!(
                "{n} neighbor lists, {} tables and {} noise levels",
                tables.len(),
                noise.len()
            )));
        }
        let mut sorted_neighbors = Vec::with_capacity(n);
        let mut sorted_tables = Vec::with_capacity(n);
        for (i, (parents, table)) in neighbors.into_iter().zip(tables).enumerate() {
            if table.arity() != parents.len() {
                return Err(Error::invalid(format!(
                    "node {i}: {} parents but a table of arity {}",
                    parents.len(),
                    table.arity()
                )));
            }
            if let Some(&p) = parents.iter().find(|&&p| p >= n) {
                return Err(Error::invalid(format!("node {i}: parent {p} out of range")));
            }
            let (parents, table) = canonical(parents, table)?;
            if parents.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!("node {i}: duplicate parent")));
            }
            sorted_neighbors.push(parents);
            sorted_tables.push(table);
        }
        for &q in &noise {
            check_noise(q)?;
        }
        Ok(BooleanNetwork {
            neighbors: sorted_neighbors,
            tables: sorted_tables,
            noise,
        })
    }

    /// A noiseless network.
    pub fn deterministic(neighbors: Vec<Vec<usize>>, tables: Vec<BooleanTable>) -> Result<Self> {
        let n = neighbors.len();
        Self::new(neighbors, tables, vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    pub fn neighbors(&self) -> &[Vec<usize>] {
        &self.neighbors
    }

    pub fn tables(&self) -> &[BooleanTable] {
        &self.tables
    }

    pub fn noise(&self) -> &[f64] {
        &self.noise
    }

    pub fn with_noise(mut self, noise: Vec<f64>) -> Result<Self> {
        if noise.len() != self.len() {
            return Err(Error::invalid(
                "noise vector length differs from node count",
            ));
        }
        for &q in &noise {
            check_noise(q)?;
        }
        self.noise = noise;
        Ok(self)
    }

    pub fn adjacency(&self) -> AdjacencyMatrix {
        AdjacencyMatrix::from_neighbors(self.len(), &self.neighbors)
            .expect("neighbors validated at construction")
    }

    /// Synchronous update of every node from the same `state`. Unobserved
    /// table cells are an error.
    pub fn step<R: Rng + ?Sized>(&self, state: &[bool], rng: &mut R) -> Result<Vec<bool>> {
        self.step_with(state, NaPolicy::Error, rng)
    }

    /// Like [`step`](Self::step) with an explicit policy for N/A cells.
    /// One noise draw is consumed per node per step.
    pub fn step_with<R: Rng + ?Sized>(
        &self,
        state: &[bool],
        na: NaPolicy,
        rng: &mut R,
    ) -> Result<Vec<bool>> {
        if state.len() != self.len() {
            return Err(Error::ArityMismatch {
                expected: self.len(),
                got: state.len(),
            });
        }
        let mut next = Vec::with_capacity(self.len());
        for ((parents, table), &q) in self.neighbors.iter().zip(&self.tables).zip(&self.noise) {
            let pattern = parents
                .iter()
                .enumerate()
                .fold(0usize, |acc, (j, &p)| acc | (usize::from(state[p]) << j));
            let out = table.eval_index(pattern, na)?;
            next.push(out ^ flip(q, rng));
        }
        Ok(next)
    }

    /// The trajectory `init, step(init), ...` with `steps + 1` states.
    pub fn simulate<R: Rng + ?Sized>(
        &self,
        init: &[bool],
        steps: usize,
        rng: &mut R,
    ) -> Result<Vec<Vec<bool>>> {
        if steps == 0 {
            return Err(Error::invalid("a simulation needs at least one step"));
        }
        let mut series = Vec::with_capacity(steps + 1);
        series.push(init.to_vec());
        for t in 0..steps {
            let next = self.step(&series[t], rng)?;
            series.push(next);
        }
        Ok(series)
    }

    /// Parents each node's table actually depends on, as node ids.
    pub fn essential_support(&self, node: usize) -> Result<Vec<usize>> {
        let table = self
            .tables
            .get(node)
            .ok_or_else(|| Error::invalid(format!("node {node} out of range")))?;
        Ok(table
            .essential_inputs()?
            .into_iter()
            .map(|j| self.neighbors[node][j])
            .collect())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&NetworkDoc::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: NetworkDoc = serde_json::from_str(text)?;
        doc.try_into()
    }
}

/// Sorts `parents` and reorders the table inputs to follow.
fn canonical(parents: Vec<usize>, table: BooleanTable) -> Result<(Vec<usize>, BooleanTable)> {
    if parents.windows(2).all(|w| w[0] <= w[1]) {
        return Ok((parents, table));
    }
    let mut order: Vec<usize> = (0..parents.len()).collect();
    order.sort_by_key(|&j| parents[j]);
    let sorted = order.iter().map(|&j| parents[j]).collect();
    Ok((sorted, table.permute_inputs(&order)))
}

#[derive(Serialize, Deserialize)]
struct TableDoc {
    arity: usize,
    entries: String,
}

#[derive(Serialize, Deserialize)]
struct NetworkDoc {
    n: usize,
    neighbors: Vec<Vec<usize>>,
    tables: Vec<TableDoc>,
    noise: Vec<f64>,
}

impl From<&BooleanNetwork> for NetworkDoc {
    fn from(net: &BooleanNetwork) -> Self {
        NetworkDoc {
            n: net.len(),
            neighbors: net.neighbors.clone(),
            tables: net
                .tables
                .iter()
                .map(|t| TableDoc {
                    arity: t.arity(),
                    entries: t.entry_string(),
                })
                .collect(),
            noise: net.noise.clone(),
        }
    }
}

impl TryFrom<NetworkDoc> for BooleanNetwork {
    type Error = Error;

    fn try_from(doc: NetworkDoc) -> Result<Self> {
        if doc.neighbors.len() != doc.n {
            return Err(Error::Format(format!(
                "network declares n = {} but lists {} neighbor sets",
                doc.n,
                doc.neighbors.len()
            )));
        }
        let tables = doc
            .tables
            .iter()
            .map(|t| BooleanTable::from_entry_string(t.arity, &t.entries))
            .collect::<Result<Vec<_>>>()?;
        BooleanNetwork::new(doc.neighbors, tables, doc.noise)
    }
}

/// `n x n` bit matrix with `a[i][j] = 1` iff `j` is a parent of `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjacencyMatrix {
    n: usize,
    rows: Vec<Vec<bool>>,
}

impl AdjacencyMatrix {
    pub fn zeros(n: usize) -> Self {
        AdjacencyMatrix {
            n,
            rows: vec![vec![false; n]; n],
        }
    }

    pub fn from_neighbors(n: usize, neighbors: &[Vec<usize>]) -> Result<Self> {
        if neighbors.len() != n {
            return Err(Error::invalid("one neighbor list per node is required"));
        }
        let mut a = Self::zeros(n);
        for (i, parents) in neighbors.iter().enumerate() {
            for &j in parents {
                if j >= n {
                    return Err(Error::invalid(format!("node {i}: parent {j} out of range")));
                }
                a.rows[i][j] = true;
            }
        }
        Ok(a)
    }

    /// Parent lists, ascending.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        self.rows
            .iter()
            .map(|row| (0..self.n).filter(|&j| row[j]).collect())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i][j] = value;
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().flatten().filter(|&&b| b).count()
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }
}

/// A random network where every node has `degree` distinct parents chosen
/// uniformly (excluding itself unless `include_self`) and a truth table of
/// independent fair coins. Noise is zero.
pub fn random_network<R: Rng + ?Sized>(
    n: usize,
    degree: usize,
    include_self: bool,
    rng: &mut R,
) -> Result<BooleanNetwork> {
    let pool = if include_self { n } else { n.saturating_sub(1) };
    if degree == 0 || degree > pool {
        return Err(Error::invalid(format!(
            "in-degree {degree} must be in 1..={pool} for {n} nodes"
        )));
    }
    let mut neighbors = Vec::with_capacity(n);
    let mut tables = Vec::with_capacity(n);
    for i in 0..n {
        let mut parents: Vec<usize> = index::sample(rng, pool, degree)
            .into_iter()
            .map(|p| if !include_self && p >= i { p + 1 } else { p })
            .collect();
        parents.sort_unstable();
        neighbors.push(parents);
        tables.push(BooleanTable::random(degree, rng)?);
    }
    BooleanNetwork::deterministic(neighbors, tables)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::boolean::pattern_bits;

    fn shift_register(n: usize) -> BooleanNetwork {
        let neighbors = (0..n).map(|i| vec![(i + n - 1) % n]).collect();
        let tables = (0..n)
            .map(|_| BooleanTable::from_fn(1, |x| x[0]).unwrap())
            .collect();
        BooleanNetwork::deterministic(neighbors, tables).unwrap()
    }

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn shift_register_step() {
        let net = shift_register(5);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(net.step(&bits("10000"), &mut rng).unwrap(), bits("01000"));
    }

    #[test]
    fn constant_network_step() {
        let neighbors = (0..5).map(|i| vec![(i + 1) % 5]).collect();
        let tables = (0..5)
            .map(|_| BooleanTable::constant(1, false).unwrap())
            .collect();
        let net = BooleanNetwork::deterministic(neighbors, tables).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(net.step(&bits("10110"), &mut rng).unwrap(), bits("00000"));
    }

    #[test]
    fn unit_noise_complements_step() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let net = random_network(6, 2, false, &mut rng).unwrap();
        let noisy = net.clone().with_noise(vec![1.0; 6]).unwrap();
        for i in 0..64 {
            let s = pattern_bits(i, 6);
            let clean = net.step(&s, &mut rng).unwrap();
            let flipped = noisy.step(&s, &mut rng).unwrap();
            assert!(clean.iter().zip(&flipped).all(|(a, b)| a != b));
        }
    }

    #[test]
    fn shift_register_has_period_five() {
        let net = shift_register(5);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let series = net.simulate(&bits("10000"), 5, &mut rng).unwrap();
        assert_eq!(series.len(), 6);
        assert_eq!(series[5], bits("10000"));
        assert_eq!(series[2], bits("00100"));
    }

    #[test]
    fn simulation_is_reproducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let net = random_network(8, 2, false, &mut rng).unwrap();
        let init = bits("10110010");
        let a = net
            .simulate(&init, 50, &mut ChaCha8Rng::seed_from_u64(5))
            .unwrap();
        let b = net
            .simulate(&init, 50, &mut ChaCha8Rng::seed_from_u64(5))
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn identity_node_flip_rate() {
        let net = BooleanNetwork::new(
            vec![vec![0]],
            vec![BooleanTable::from_fn(1, |x| x[0]).unwrap()],
            vec![0.1],
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let steps = 100_000;
        let series = net.simulate(&[false], steps, &mut rng).unwrap();
        let flips = series.windows(2).filter(|w| w[0] != w[1]).count();
        let rate = flips as f64 / steps as f64;
        assert!((rate - 0.1).abs() <= 0.01, "{rate}");
    }

    #[test]
    fn zero_steps_rejected() {
        let net = shift_register(3);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(net.simulate(&bits("100"), 0, &mut rng).is_err());
    }

    #[test]
    fn step_rejects_na_pattern() {
        let net = BooleanNetwork::deterministic(
            vec![vec![0]],
            vec![BooleanTable::from_entry_string(1, "-1").unwrap()],
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(net.step(&[true], &mut rng).is_ok());
        assert!(matches!(
            net.step(&[false], &mut rng),
            Err(Error::UnobservedPattern { .. })
        ));
        assert!(
            !net.step_with(&[false], NaPolicy::Default0, &mut rng)
                .unwrap()[0]
        );
    }

    #[test]
    fn random_network_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let net = random_network(3, 1, false, &mut rng).unwrap();
            for (i, parents) in net.neighbors().iter().enumerate() {
                assert_eq!(parents.len(), 1);
                assert_ne!(parents[0], i);
            }
        }
    }

    #[test]
    fn random_network_degree_three() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let net = random_network(50, 3, false, &mut rng).unwrap();
        let a = net.adjacency();
        for i in 0..50 {
            assert_eq!(a.rows()[i].iter().filter(|&&b| b).count(), 3);
            assert!(!a.get(i, i));
        }
    }

    #[test]
    fn random_network_is_seeded() {
        let a = random_network(20, 3, false, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b = random_network(20, 3, false, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn random_network_degree_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(random_network(3, 3, false, &mut rng).is_err());
        assert!(random_network(3, 3, true, &mut rng).is_ok());
        assert!(random_network(3, 0, false, &mut rng).is_err());
    }

    #[test]
    fn random_tables_are_fair() {
        let mut ones = 0u64;
        let mut cells = 0u64;
        for seed in 0..200 {
            let net = random_network(10, 3, false, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            for t in net.tables() {
                ones += t.entries().iter().filter(|e| **e == Some(true)).count() as u64;
                cells += t.len() as u64;
            }
        }
        let p = ones as f64 / cells as f64;
        let sigma = (0.25 / cells as f64).sqrt();
        assert!((p - 0.5).abs() <= 3.0 * sigma, "{p}");
    }

    #[test]
    fn unsorted_parents_are_canonicalized() {
        // f(a, b) = a AND NOT b with parents listed as [4, 1]
        let t = BooleanTable::from_fn(2, |x| x[0] && !x[1]).unwrap();
        let net =
            BooleanNetwork::deterministic(vec![vec![], vec![], vec![4, 1], vec![], vec![]], {
                let c = || BooleanTable::constant(0, false).unwrap();
                vec![c(), c(), t, c(), c()]
            })
            .unwrap();
        assert_eq!(net.neighbors()[2], vec![1, 4]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        // node 4 = 1, node 1 = 0 -> 1
        let out = net
            .step(&[false, false, false, false, true], &mut rng)
            .unwrap();
        assert!(out[2]);
        let out = net
            .step(&[false, true, false, false, true], &mut rng)
            .unwrap();
        assert!(!out[2]);
    }

    #[test]
    fn duplicate_parents_rejected() {
        let t = BooleanTable::constant(2, false).unwrap();
        let c = BooleanTable::constant(0, false).unwrap();
        assert!(BooleanNetwork::deterministic(vec![vec![1, 1], vec![]], vec![t, c]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let net = random_network(7, 2, true, &mut rng)
            .unwrap()
            .with_noise(vec![0.0, 0.1, 0.2, 0.0, 0.5, 1.0, 0.25])
            .unwrap();
        let text = net.to_json().unwrap();
        assert!(text.contains("\"entries\""));
        assert_eq!(BooleanNetwork::from_json(&text).unwrap(), net);
    }

    #[test]
    fn adjacency_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let net = random_network(12, 3, false, &mut rng).unwrap();
        let a = net.adjacency();
        assert_eq!(a.neighbors(), net.neighbors());
        assert_eq!(a.edge_count(), 36);
    }

    #[test]
    fn essential_support_maps_to_node_ids() {
        let t = BooleanTable::from_fn(2, |x| x[0]).unwrap();
        let c = || BooleanTable::constant(0, false).unwrap();
        let mut tables: Vec<BooleanTable> = (0..8).map(|_| c()).collect();
        tables[0] = t;
        let mut neighbors = vec![vec![]; 8];
        neighbors[0] = vec![3, 7];
        let net = BooleanNetwork::deterministic(neighbors, tables).unwrap();
        assert_eq!(net.essential_support(0).unwrap(), vec![3]);
    }
}
