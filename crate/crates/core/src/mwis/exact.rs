//! Exact MWIS by branch-and-bound.
//!
//! Each search node first applies two optimality-preserving reductions
//! (isolated vertices are taken; a pendant vertex at least as heavy as its only
//! neighbor is taken), splits the candidate set into connected components and
//! solves those independently, and otherwise branches on the candidate of
//! largest residual degree. Subtrees are pruned with a greedy weighted
//! clique-cover bound: any independent set hits each clique at most once.

use std::time::Instant;

use super::{check_utilities, greedy_mwis, validate_set, IndependentSet, SolverBudget, SolverError};
use crate::graph::Graph;

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn and_count(&self, other: &Bits) -> u32 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a & b).count_ones()).sum()
    }

    fn subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    fn minus(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + t)
            })
        })
    }
}

struct Solver<'a> {
    w: &'a [f64],
    adj: Vec<Bits>,
    /// Nodes by weight descending, ID ascending; drives the clique cover.
    order: Vec<usize>,
    n: usize,
    visited: u64,
    budget: SolverBudget,
    start: Instant,
}

struct OutOfBudget;

#[derive(Clone)]
struct Best {
    value: f64,
    set: Vec<usize>,
}

impl Solver<'_> {
    fn tick(&mut self) -> Result<(), OutOfBudget> {
        self.visited += 1;
        if self.visited > self.budget.max_branch_nodes {
            return Err(OutOfBudget);
        }
        if let Some(limit) = self.budget.time_limit {
            if self.visited.is_multiple_of(1024) && self.start.elapsed() > limit {
                return Err(OutOfBudget);
            }
        }
        Ok(())
    }

    fn clique_cover_bound(&self, p: &Bits) -> f64 {
        let mut cliques: Vec<(Bits, f64)> = Vec::new();
        for &v in &self.order {
            if !p.contains(v) {
                continue;
            }
            match cliques.iter_mut().find(|(c, _)| c.subset_of(&self.adj[v])) {
                Some((c, _)) => c.insert(v),
                None => {
                    let mut c = Bits::empty(self.n);
                    c.insert(v);
                    cliques.push((c, self.w[v]));
                }
            }
        }
        cliques.iter().map(|(_, w)| w).sum()
    }

    /// Removes forced vertices from `p`, returning them with their weight.
    fn reduce(&self, p: &mut Bits) -> (Vec<usize>, f64) {
        let mut taken = Vec::new();
        let mut weight = 0.0;
        loop {
            let mut changed = false;
            let candidates: Vec<usize> = p.iter().collect();
            for v in candidates {
                if !p.contains(v) {
                    continue;
                }
                match self.adj[v].and_count(p) {
                    0 => {
                        p.remove(v);
                        taken.push(v);
                        weight += self.w[v];
                        changed = true;
                    }
                    1 => {
                        let u = self.adj[v].iter().find(|&u| p.contains(u)).expect("one neighbor");
                        if self.w[v] >= self.w[u] {
                            p.remove(v);
                            p.remove(u);
                            taken.push(v);
                            weight += self.w[v];
                            changed = true;
                        }
                    }
                    _ => {}
                }
            }
            if !changed {
                return (taken, weight);
            }
        }
    }

    fn components(&self, p: &Bits) -> Vec<Bits> {
        let mut rest = p.clone();
        let mut out = Vec::new();
        loop {
            let Some(seed) = rest.iter().next() else { break };
            let mut comp = Bits::empty(self.n);
            comp.insert(seed);
            rest.remove(seed);
            let mut stack = vec![seed];
            while let Some(v) = stack.pop() {
                let next: Vec<usize> = self.adj[v].iter().filter(|&x| rest.contains(x)).collect();
                for x in next {
                    rest.remove(x);
                    comp.insert(x);
                    stack.push(x);
                }
            }
            out.push(comp);
        }
        out
    }

    fn greedy_in(&self, p: &Bits) -> Best {
        let mut avail = p.clone();
        let mut best = Best { value: 0.0, set: Vec::new() };
        for &v in &self.order {
            if avail.contains(v) {
                best.set.push(v);
                best.value += self.w[v];
                avail.remove(v);
                avail.minus(&self.adj[v]);
            }
        }
        best
    }

    /// Optimal independent set inside `p`.
    fn solve(&mut self, p: Bits) -> Result<Best, OutOfBudget> {
        let mut best = self.greedy_in(&p);
        let mut current = Vec::new();
        self.branch(p, 0.0, &mut current, &mut best)?;
        Ok(best)
    }

    fn branch(
        &mut self,
        mut p: Bits,
        mut value: f64,
        current: &mut Vec<usize>,
        best: &mut Best,
    ) -> Result<(), OutOfBudget> {
        self.tick()?;
        let mark = current.len();
        let (taken, gained) = self.reduce(&mut p);
        current.extend(taken);
        value += gained;

        let result = self.branch_reduced(p, value, current, best);
        current.truncate(mark);
        result
    }

    fn branch_reduced(
        &mut self,
        p: Bits,
        value: f64,
        current: &mut Vec<usize>,
        best: &mut Best,
    ) -> Result<(), OutOfBudget> {
        if p.is_empty() {
            if value > best.value {
                best.value = value;
                best.set.clone_from(current);
            }
            return Ok(());
        }
        if value + self.clique_cover_bound(&p) <= best.value {
            return Ok(());
        }
        let comps = self.components(&p);
        if comps.len() > 1 {
            let mut total = value;
            let mut set = current.clone();
            for comp in comps {
                let sub = self.solve(comp)?;
                total += sub.value;
                set.extend(sub.set);
            }
            if total > best.value {
                *best = Best { value: total, set };
            }
            return Ok(());
        }
        let v = p
            .iter()
            .max_by(|&a, &b| {
                self.adj[a]
                    .and_count(&p)
                    .cmp(&self.adj[b].and_count(&p))
                    .then(self.w[a].total_cmp(&self.w[b]))
                    .then(b.cmp(&a))
            })
            .expect("non-empty");

        let mut with = p.clone();
        with.remove(v);
        with.minus(&self.adj[v]);
        current.push(v);
        let r = self.branch(with, value + self.w[v], current, best);
        current.pop();
        r?;

        let mut without = p;
        without.remove(v);
        self.branch(without, value, current, best)
    }
}

/// Maximum weighted independent set, certified optimal.
///
/// Zero-utility nodes never improve the objective; after the search they are
/// added wherever possible so the returned set is always maximal. When the
/// budget runs out the error carries a heuristic incumbent and the root upper
/// bound.
pub fn exact_mwis(g: &Graph, u: &[f64], budget: SolverBudget) -> Result<IndependentSet, SolverError> {
    check_utilities(g, u)?;
    budget.validate()?;
    let n = g.num_nodes();
    let mut adj = vec![Bits::empty(n); n];
    for (i, j) in g.edges() {
        adj[i].insert(j);
        adj[j].insert(i);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| u[b].total_cmp(&u[a]).then(a.cmp(&b)));
    let mut solver = Solver { w: u, adj, order, n, visited: 0, budget, start: Instant::now() };

    let mut root = Bits::empty(n);
    for v in (0..n).filter(|&v| u[v] > 0.0) {
        root.insert(v);
    }
    let upper_bound = solver.clique_cover_bound(&root);
    let found = match solver.solve(root) {
        Ok(best) => best.set,
        Err(OutOfBudget) => {
            let incumbent = greedy_mwis(g, u)?;
            let incumbent = validate_set(g, &incumbent.members, u)?;
            return Err(SolverError::BudgetExhausted {
                incumbent,
                upper_bound,
                branch_nodes: solver.visited,
            });
        }
    };
    validate_set(g, &fill_maximal(g, found), u)
}

fn fill_maximal(g: &Graph, mut set: Vec<usize>) -> Vec<usize> {
    let mut blocked = vec![false; g.num_nodes()];
    for &v in &set {
        blocked[v] = true;
        for &x in g.neighbors(v) {
            blocked[x] = true;
        }
    }
    for v in 0..g.num_nodes() {
        if !blocked[v] {
            set.push(v);
            blocked[v] = true;
            for &x in g.neighbors(v) {
                blocked[x] = true;
            }
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen_er;
    use crate::rng::rng_from_seed;
    use rand::Rng;

    fn brute_force(g: &Graph, u: &[f64]) -> f64 {
        let n = g.num_nodes();
        let mut best = 0.0f64;
        'outer: for mask in 0u32..(1 << n) {
            for (i, j) in g.edges() {
                if mask >> i & 1 == 1 && mask >> j & 1 == 1 {
                    continue 'outer;
                }
            }
            let value: f64 = (0..n).filter(|&v| mask >> v & 1 == 1).map(|v| u[v]).sum();
            best = best.max(value);
        }
        best
    }

    #[test]
    fn complete_graph_picks_heaviest() {
        let k4 = gen_er(4, 1.0, 0).unwrap();
        let s = exact_mwis(&k4, &[1.0, 2.0, 3.0, 4.0], SolverBudget::default()).unwrap();
        assert_eq!(s.members, vec![3]);
        assert_eq!(s.total_utility, 4.0);
    }

    #[test]
    fn edgeless_takes_everything() {
        let g = Graph::empty(5);
        let u = [0.5, 0.0, 2.0, 1.0, 3.0];
        let s = exact_mwis(&g, &u, SolverBudget::default()).unwrap();
        assert_eq!(s.members, vec![0, 1, 2, 3, 4]);
        assert_eq!(s.total_utility, 6.5);
    }

    #[test]
    fn star_prefers_leaves() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let u = [2.0, 1.0, 1.0, 1.0];
        assert_eq!(brute_force(&g, &u), 3.0);
        let s = exact_mwis(&g, &u, SolverBudget::default()).unwrap();
        assert_eq!(s.members, vec![1, 2, 3]);
        assert_eq!(s.total_utility, 3.0);
        assert!(s.is_maximal);
    }

    #[test]
    fn zero_weights_filled_to_maximal() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let s = exact_mwis(&g, &[1.0, 0.0, 0.0, 0.0], SolverBudget::default()).unwrap();
        assert_eq!(s.total_utility, 1.0);
        assert!(s.is_maximal);
        assert_eq!(s.members, vec![0, 2]);
    }

    #[test]
    fn matches_brute_force_on_small_graphs() {
        let mut rng = rng_from_seed(99);
        for k in 0..60 {
            let n = rng.random_range(1..=12);
            let p = rng.random_range(0.05..0.9);
            let g = gen_er(n, p, k).unwrap();
            let u: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let s = exact_mwis(&g, &u, SolverBudget::default()).unwrap();
            assert_eq!(s.total_utility, brute_force(&g, &u), "instance {k}");
        }
    }

    #[test]
    fn budget_exhaustion_reports_incumbent() {
        let g = gen_er(60, 0.1, 4).unwrap();
        let u: Vec<f64> = (0..60).map(|i| 1.0 + (i % 7) as f64).collect();
        match exact_mwis(&g, &u, SolverBudget::nodes(3)) {
            Err(e @ SolverError::BudgetExhausted { .. }) => {
                let (inc, gap) = e.incumbent().unwrap();
                assert!(inc.total_utility > 0.0);
                assert!(gap >= 0.0);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
        assert!(exact_mwis(&g, &u, SolverBudget::nodes(0)).is_err());
    }

    #[test]
    fn rejects_negative_utilities() {
        let g = Graph::empty(2);
        assert!(exact_mwis(&g, &[1.0, -1.0], SolverBudget::default()).is_err());
    }
}
