//! Directed graph of a square matrix and strong connectivity.

use num_traits::Zero;

use super::matrix::IntMatrix;

/// Edge `i -> j` exists iff `M(i, j) != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiGraph {
    adj: Vec<Vec<usize>>,
}

impl DiGraph {
    pub fn new(n: usize) -> Self {
        DiGraph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_matrix(m: &IntMatrix) -> Self {
        let n = m.size();
        let mut g = Self::new(n);
        for i in 0..n {
            for j in 0..n {
                if !m.get(i, j).is_zero() {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn add_edge(&mut self, from: usize, to: usize) {
        self.adj[from].push(to);
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.adj[from].contains(&to)
    }

    /// Strongly connected components (Tarjan, iterative). Components come out
    /// in reverse topological order.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.adj.len();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut out = Vec::new();
        let mut counter = 0;
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            // (vertex, next edge position)
            let mut work = vec![(root, 0usize)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut pos)) = work.last_mut() {
                if let Some(&w) = self.adj[v].get(*pos) {
                    *pos += 1;
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        work.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                    continue;
                }
                work.pop();
                if let Some(&(parent, _)) = work.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
        out
    }

    /// Every ordered pair of vertices is joined by a directed path. A single
    /// vertex counts only when it carries a self-loop; the empty graph does not.
    pub fn strongly_connected(&self) -> bool {
        match self.adj.len() {
            0 => false,
            1 => self.has_edge(0, 0),
            _ => self.components().len() == 1,
        }
    }
}

pub fn digraph_strongly_connected(m: &IntMatrix) -> bool {
    DiGraph::from_matrix(m).strongly_connected()
}

/// A nonnegative square matrix is irreducible iff its digraph is strongly
/// connected. Matrices with a negative entry are rejected.
pub fn matrix_irreducible(m: &IntMatrix) -> bool {
    m.is_nonnegative() && digraph_strongly_connected(m)
}

#[cfg(test)]
mod tests {
    use super::super::matrix::companion_matrix;
    use super::*;

    fn reachable(g: &DiGraph, from: usize) -> Vec<bool> {
        let mut seen = vec![false; g.vertex_count()];
        let mut todo = vec![from];
        while let Some(v) = todo.pop() {
            for w in 0..g.vertex_count() {
                if g.has_edge(v, w) && !seen[w] {
                    seen[w] = true;
                    todo.push(w);
                }
            }
        }
        seen
    }

    // all-pairs reachability by repeated search
    fn brute_strongly_connected(g: &DiGraph) -> bool {
        let n = g.vertex_count();
        n > 0 && (0..n).all(|v| reachable(g, v).iter().all(|&b| b))
    }

    #[test]
    fn examples() {
        assert!(digraph_strongly_connected(&companion_matrix(2, 1, 3)));
        assert!(!digraph_strongly_connected(&IntMatrix::from_rows(&[vec![1, 0], vec![0, 2]])));
        assert!(!digraph_strongly_connected(&IntMatrix::zeros(1)));
        assert!(digraph_strongly_connected(&IntMatrix::from_rows(&[vec![3]])));
        assert!(!digraph_strongly_connected(&IntMatrix::zeros(0)));
        assert!(matrix_irreducible(&companion_matrix(4, 3, 5)));
        assert!(!matrix_irreducible(&IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]])));
        assert!(!matrix_irreducible(&IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]])));
    }

    #[test]
    fn components_partition_vertices() {
        let m = IntMatrix::from_rows(&[
            vec![0, 1, 0, 0],
            vec![1, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![0, 0, 1, 0],
        ]);
        let mut comps = DiGraph::from_matrix(&m).components();
        comps.sort();
        assert_eq!(comps, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn agrees_with_reachability_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let n = rng.gen_range(1..7);
            let mut g = DiGraph::new(n);
            for i in 0..n {
                for j in 0..n {
                    if rng.gen_bool(0.3) {
                        g.add_edge(i, j);
                    }
                }
            }
            let expect = if n == 1 { g.has_edge(0, 0) } else { brute_strongly_connected(&g) };
            assert_eq!(g.strongly_connected(), expect);
        }
    }
}
