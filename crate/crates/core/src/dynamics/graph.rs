use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::projective::ReducedPoint;
use crate::ratmap::ReducedMap;

/// Default limit on `q + 1` for exhaustive residue-field dynamics.
pub const DEFAULT_NODE_BUDGET: u64 = 1 << 24;

/// The map `P^1(F_q) -> P^1(F_q)` as a successor array. Node `a < q` is
/// `[a : 1]` and node `q` is infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionalGraph {
    pub q: u64,
    pub succ: Vec<usize>,
    /// Cycles, each listed from its smallest node in iteration order, sorted
    /// by first node.
    pub cycles: Vec<Vec<usize>>,
    /// Steps from each node to the first periodic node it reaches.
    pub tail_depth: Vec<usize>,
}

impl FunctionalGraph {
    pub fn node_count(&self) -> usize {
        self.succ.len()
    }

    pub fn point(&self, node: usize) -> ReducedPoint {
        ReducedPoint::from_index(node, self.q)
    }

    pub fn node(&self, p: &ReducedPoint) -> usize {
        p.index(self.q)
    }

    pub fn is_periodic(&self, node: usize) -> bool {
        self.tail_depth[node] == 0
    }

    /// Number of nodes that are not periodic.
    pub fn tail_size(&self) -> usize {
        self.tail_depth.iter().filter(|&&d| d > 0).count()
    }

    /// Forward orbit of a node split into tail and cycle, read off the graph.
    pub fn orbit_of(&self, node: usize) -> (Vec<usize>, Vec<usize>) {
        let mut tail = Vec::with_capacity(self.tail_depth[node]);
        let mut cur = node;
        while self.tail_depth[cur] > 0 {
            tail.push(cur);
            cur = self.succ[cur];
        }
        let mut cycle = vec![cur];
        let mut next = self.succ[cur];
        while next != cur {
            cycle.push(next);
            next = self.succ[next];
        }
        (tail, cycle)
    }
}

/// Computes every successor of the reduced map and decomposes the graph into
/// cycles and trees hanging off them.
pub fn functional_graph<E: Sync>(red: &ReducedMap<E>, max_nodes: u64) -> Result<FunctionalGraph> {
    let q = red.field.size();
    if q + 1 > max_nodes {
        return Err(Error::Budget(format!(
            "functional graph on {} nodes exceeds {max_nodes}",
            q + 1
        )));
    }
    let n = (q + 1) as usize;
    let succ: Vec<usize> = (0..n)
        .into_par_iter()
        .map(|i| red.apply(&ReducedPoint::from_index(i, q)).index(q))
        .collect();

    const UNSEEN: u8 = 0;
    const ON_PATH: u8 = 1;
    const DONE: u8 = 2;
    let mut state = vec![UNSEEN; n];
    let mut tail_depth = vec![0usize; n];
    let mut cycles = Vec::new();
    let mut path = Vec::new();
    for start in 0..n {
        if state[start] != UNSEEN {
            continue;
        }
        path.clear();
        let mut cur = start;
        while state[cur] == UNSEEN {
            state[cur] = ON_PATH;
            path.push(cur);
            cur = succ[cur];
        }
        // The walk either closed a new cycle or ran into finished nodes.
        let mut depth = if state[cur] == ON_PATH {
            let pos = path.iter().position(|&v| v == cur).unwrap();
            let cyc = path.split_off(pos);
            for &v in &cyc {
                state[v] = DONE;
                tail_depth[v] = 0;
            }
            let min_pos = cyc.iter().enumerate().min_by_key(|(_, &v)| v).unwrap().0;
            let mut rotated = cyc[min_pos..].to_vec();
            rotated.extend_from_slice(&cyc[..min_pos]);
            cycles.push(rotated);
            0
        } else {
            tail_depth[cur]
        };
        for &v in path.iter().rev() {
            depth += 1;
            tail_depth[v] = depth;
            state[v] = DONE;
        }
    }
    cycles.sort_by_key(|c| c[0]);
    Ok(FunctionalGraph {
        q,
        succ,
        cycles,
        tail_depth,
    })
}
