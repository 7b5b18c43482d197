//! Independent oracles shared by the integration suites.
//!
//! Nothing here calls the crate's clique enumeration or reduction code:
//! complexes are rebuilt by scanning vertex subsets and homology is computed
//! with dense Gaussian elimination over `Z/p`.

#![allow(dead_code)]

use clique_persistence::EdgeFiltration;

/// All vertex subsets of `[n]` of size `1..=max_size` whose pairwise weights
/// are all `<= t`, grouped by dimension, each sorted lexicographically.
pub fn complex_at(ef: &EdgeFiltration, t: f64, max_dim: usize) -> Vec<Vec<Vec<usize>>> {
    let n = ef.n();
    let mut by_dim = vec![Vec::new(); max_dim + 1];
    for mask in 1u32..(1u32 << n) {
        let vs: Vec<usize> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| i + 1)
            .collect();
        if vs.len() > max_dim + 1 {
            continue;
        }
        let ok = vs
            .iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| ef.weight(u, v) <= t));
        if ok {
            by_dim[vs.len() - 1].push(vs);
        }
    }
    for list in &mut by_dim {
        list.sort();
    }
    by_dim
}

/// Dense matrix over `Z/p`, row-major.
#[derive(Clone, Debug)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
    pub p: u64,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize, p: u64) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0; rows * cols],
            p,
        }
    }

    pub fn at(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        let p = self.p;
        self.data[r * self.cols + c] = v % p;
    }

    fn inv(&self, a: u64) -> u64 {
        (1..self.p).find(|x| a * x % self.p == 1).unwrap()
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(sel) = (r..self.rows).find(|&i| self.at(i, c) != 0) else {
                continue;
            };
            for j in 0..self.cols {
                self.data.swap(r * self.cols + j, sel * self.cols + j);
            }
            let inv = self.inv(self.at(r, c));
            for j in 0..self.cols {
                let v = self.at(r, j) * inv % p;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && self.at(i, c) != 0 {
                    let f = self.at(i, c);
                    for j in 0..self.cols {
                        let v = (self.at(i, j) + p * p - f * self.at(r, j)) % p;
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the null space, as column vectors of length `cols`.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let p = self.p;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; self.cols];
                v[f] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - m.at(r, f)) % p;
                }
                v
            })
            .collect()
    }
}

/// Boundary matrix from `dim`-simplices to `(dim-1)`-simplices with signs
/// `(-1)^j` for the face missing the `j`-th vertex.
pub fn boundary(faces: &[Vec<usize>], cells: &[Vec<usize>], p: u64) -> Mat {
    let mut m = Mat::zeros(faces.len(), cells.len(), p);
    for (c, cell) in cells.iter().enumerate() {
        if cell.len() < 2 {
            continue;
        }
        for j in 0..cell.len() {
            let mut face = cell.clone();
            face.remove(j);
            let r = faces.binary_search(&face).expect("face present");
            m.set(r, c, if j % 2 == 0 { 1 } else { p - 1 });
        }
    }
    m
}

/// `beta_k` of the clique complex at time `t` via rank-nullity:
/// `dim C_k - rank d_k - rank d_{k+1}`.
pub fn betti_oracle(ef: &EdgeFiltration, t: f64, k: usize, p: u64) -> usize {
    let cx = complex_at(ef, t, k + 1);
    let ck = cx[k].len();
    let rank_k = if k == 0 {
        0
    } else {
        boundary(&cx[k - 1], &cx[k], p).rank()
    };
    let rank_k1 = boundary(&cx[k], &cx[k + 1], p).rank();
    ck - rank_k - rank_k1
}

/// Rank of `H_k(X(p1)) -> H_k(X(p2))`: `rank[Z_k(p1) | B_k(p2)] - rank B_k(p2)`,
/// everything expressed in the chain basis at `p2`.
pub fn inclusion_rank_oracle(ef: &EdgeFiltration, k: usize, p1: f64, p2: f64, p: u64) -> usize {
    let small = complex_at(ef, p1, k + 1);
    let big = complex_at(ef, p2, k + 1);
    let cycles = if k == 0 {
        // every 0-chain is a cycle
        (0..small[0].len())
            .map(|i| {
                let mut v = vec![0u64; small[0].len()];
                v[i] = 1;
                v
            })
            .collect()
    } else {
        boundary(&small[k - 1], &small[k], p).kernel()
    };
    let bd = boundary(&big[k], &big[k + 1], p);
    let rows = big[k].len();
    let mut joint = Mat::zeros(rows, cycles.len() + bd.cols, p);
    for (c, z) in cycles.iter().enumerate() {
        for (i, &coef) in z.iter().enumerate() {
            let r = big[k].binary_search(&small[k][i]).expect("subcomplex");
            joint.set(r, c, coef);
        }
    }
    for c in 0..bd.cols {
        for r in 0..rows {
            joint.set(r, cycles.len() + c, bd.at(r, c));
        }
    }
    joint.rank() - bd.rank()
}

/// Number of `(d+1)`-cliques of the graph `{w <= t}` by subset scan.
pub fn clique_counts(ef: &EdgeFiltration, t: f64, max_dim: usize) -> Vec<usize> {
    complex_at(ef, t, max_dim).iter().map(Vec::len).collect()
}
