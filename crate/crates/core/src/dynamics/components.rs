//! Sampled connectivity of `C_p(T)` for `z^m - w^n`.

use super::CircleCorrespondence;
use crate::error::{Error, Result};

/// Counts connected components of `C_p(T)` from samples.
///
/// With `alpha = s/S` for `s = 0..S`, the `n` points over `alpha` are
/// `beta = (m alpha + k)/n`. In integer coordinates scaled by `L = nS` a node
/// `(s, k)` sits at `A = s n`, `B = (m s + k S) mod L`. Nodes in neighbouring
/// columns are joined when their circular offsets are at most `n` and `m`,
/// which follows each line and never jumps to a parallel one once `S > 2m`.
pub fn component_count_oracle(cc: &CircleCorrespondence, samples: usize) -> Result<usize> {
    let (m, n) = cc.monomial_degrees()?;
    let s_count = samples;
    if s_count <= 2 * m || s_count < 3 {
        return Err(Error::invalid(format!(
            "{samples} samples cannot separate the {n} parallel lines; need more than {}",
            (2 * m).max(2)
        )));
    }
    let l = (n as u128) * (s_count as u128);
    let node = |s: usize, k: usize| s * n + k;
    let coords = |s: usize, k: usize| -> (u128, u128) {
        let a = s as u128 * n as u128;
        let b = (m as u128 * s as u128 + k as u128 * s_count as u128) % l;
        (a, b)
    };
    let circ = |x: u128, y: u128| -> u128 {
        let d = x.abs_diff(y);
        d.min(l - d)
    };
    let mut uf = UnionFind::new(s_count * n);
    for s in 0..s_count {
        let t = (s + 1) % s_count;
        for k in 0..n {
            let (a0, b0) = coords(s, k);
            for k2 in 0..n {
                let (a1, b1) = coords(t, k2);
                if circ(a0, a1) <= n as u128 && circ(b0, b1) <= m as u128 {
                    uf.union(node(s, k), node(t, k2));
                }
            }
        }
    }
    Ok(uf.count())
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
    count: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
            count: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        self.count -= 1;
    }

    fn count(&self) -> usize {
        self.count
    }
}
