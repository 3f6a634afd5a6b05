use crate::automata::ChannelDfa;

/// Transition multiplicities of a trimmed DFA: entry `(i, j)` counts the
/// levels leading from state `i` to state `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferMatrix {
    dim: usize,
    entries: Vec<u32>,
}

impl TransferMatrix {
    pub fn from_dfa(dfa: &ChannelDfa) -> Self {
        let dim = dfa.state_count();
        let mut entries = vec![0u32; dim * dim];
        for i in 0..dim {
            for &(_, j) in dfa.transitions(i) {
                entries[i * dim + j as usize] += 1;
            }
        }
        TransferMatrix { dim, entries }
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "transfer matrix must be square");
        TransferMatrix { dim, entries: rows.concat() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn row_sums(&self) -> Vec<u32> {
        (0..self.dim).map(|i| self.row(i).iter().sum()).collect()
    }

    /// Strongly connected components (Tarjan), each as a sorted state list.
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.dim;
        let adj: Vec<Vec<usize>> =
            (0..n).map(|i| (0..n).filter(|&j| self.get(i, j) > 0).collect()).collect();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut components = Vec::new();
        let mut counter = 0;

        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            // (vertex, next neighbour position)
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;

            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                if *pos < adj[v].len() {
                    let w = adj[v][*pos];
                    *pos += 1;
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        components.push(comp);
                    }
                }
            }
        }
        components
    }

    pub fn submatrix(&self, states: &[usize]) -> TransferMatrix {
        let dim = states.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for &i in states {
            for &j in states {
                entries.push(self.get(i, j));
            }
        }
        TransferMatrix { dim, entries }
    }
}
