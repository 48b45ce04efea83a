//! Dense GF(p) matrices: reduced row echelon form, rank, and null-space
//! bases. Entries are integers in `[0, p)` with mod-p arithmetic; echelon
//! forms are canonical so equal row spaces produce identical bases.

pub(crate) fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= x {
        if x.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p is prime and a != 0 mod p
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    result
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct GfMatrix {
    pub p: u32,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u32>,
}

impl GfMatrix {
    pub fn new(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|&x| x < p));
        Self { p, rows, cols, data }
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = u64::from(self.p);
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(pivot_row) = (rank..self.rows).find(|&r| self.get(r, c) != 0) else {
                continue;
            };
            if pivot_row != rank {
                for j in 0..self.cols {
                    self.data.swap(rank * self.cols + j, pivot_row * self.cols + j);
                }
            }
            let inv = mod_inverse(u64::from(self.get(rank, c)), p);
            for j in 0..self.cols {
                let v = u64::from(self.get(rank, j)) * inv % p;
                self.set(rank, j, v as u32);
            }
            for r in 0..self.rows {
                if r == rank || self.get(r, c) == 0 {
                    continue;
                }
                let factor = u64::from(self.get(r, c));
                for j in 0..self.cols {
                    let sub = u64::from(self.get(rank, j)) * factor % p;
                    let v = (u64::from(self.get(r, j)) + p - sub) % p;
                    self.set(r, j, v as u32);
                }
            }
            pivots.push(c);
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Canonical basis of `{x : Mx = 0}`: one vector per free column, with a
    /// 1 in the free position and the pivot positions filled from the
    /// reduced echelon form.
    pub fn null_space_basis(&self) -> Vec<Vec<u32>> {
        let p = u64::from(self.p);
        let mut reduced = self.clone();
        let pivots = reduced.rref();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut map = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                map[c] = Some(r);
            }
            map
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                let coeff = u64::from(reduced.get(r, free));
                v[c] = ((p - coeff) % p) as u32;
            }
            basis.push(v);
        }
        basis
    }
}

pub(crate) fn add_scaled_row(target: &mut [u32], source: &[u32], scale: u32, p: u32) {
    let p64 = u64::from(p);
    for (t, &s) in target.iter_mut().zip(source) {
        *t = ((u64::from(*t) + u64::from(s) * u64::from(scale)) % p64) as u32;
    }
}
