//! Dense linear algebra over `F_p`.

use crate::field::PrimeField;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<u32>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            debug_assert_eq!(r.len(), cols);
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix, f: PrimeField) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let p = f.p() as u64;
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let mut acc = vec![0u64; other.cols];
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                let row = other.row(k);
                for j in 0..other.cols {
                    acc[j] = (acc[j] + a * row[j] as u64) % p;
                }
            }
            for j in 0..other.cols {
                out.set(i, j, acc[j] as u32);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32], f: PrimeField) -> Vec<u32> {
        let p = f.p() as u64;
        (0..self.rows)
            .map(|i| (self.row(i).iter().zip(v).map(|(&a, &b)| a as u64 * b as u64 % p).sum::<u64>() % p) as u32)
            .collect()
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self, f: PrimeField) -> Vec<usize> {
        let p = f.p() as u64;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| self.get(i, c) != 0) else { continue };
            if piv != r {
                for j in 0..self.cols {
                    self.data.swap(piv * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c));
            for j in c..self.cols {
                let v = f.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            let pivot_row: Vec<u32> = self.row(r)[c..].to_vec();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let a = self.get(i, c) as u64;
                if a == 0 {
                    continue;
                }
                let base = i * self.cols;
                for (k, &pv) in pivot_row.iter().enumerate() {
                    if pv != 0 {
                        let idx = base + c + k;
                        let cur = self.data[idx] as u64;
                        self.data[idx] = ((cur + p - a * pv as u64 % p) % p) as u32;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: PrimeField) -> usize {
        let mut m = self.clone();
        m.rref(f).len()
    }

    /// Basis of the right kernel `{v : M v = 0}`.
    pub fn kernel(&self, f: PrimeField) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u32; self.cols];
                v[fc] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m.get(r, fc));
                }
                v
            })
            .collect()
    }

    /// Nonzero rows of the reduced row echelon form.
    pub fn row_space(&self, f: PrimeField) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let k = m.rref(f).len();
        (0..k).map(|i| m.row(i).to_vec()).collect()
    }

    /// Solves `M x = b`, if solvable.
    pub fn solve(&self, b: &[u32], f: PrimeField) -> Option<Vec<u32>> {
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let pivots = aug.rref(f);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols);
        }
        Some(x)
    }

    pub fn inverse(&self, f: PrimeField) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let piv = aug.rref(f);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j));
            }
        }
        Some(out)
    }
}

/// Univariate polynomials over `F_p`, coefficients lowest degree first.
pub mod upoly {
    use crate::field::PrimeField;

    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn derivative(a: &[u32], f: PrimeField) -> Vec<u32> {
        trim(a.iter().enumerate().skip(1).map(|(i, &c)| f.mul(c, (i as u32) % f.p())).collect())
    }

    pub fn rem(a: &[u32], b: &[u32], f: PrimeField) -> Vec<u32> {
        let b = trim(b.to_vec());
        assert!(!b.is_empty());
        let mut r = trim(a.to_vec());
        let lead_inv = f.inv(*b.last().unwrap());
        while r.len() >= b.len() {
            let c = f.mul(*r.last().unwrap(), lead_inv);
            let shift = r.len() - b.len();
            for (i, &bc) in b.iter().enumerate() {
                r[shift + i] = f.sub(r[shift + i], f.mul(c, bc));
            }
            r = trim(r);
        }
        r
    }

    pub fn gcd(a: &[u32], b: &[u32], f: PrimeField) -> Vec<u32> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, f);
            a = b;
            b = r;
        }
        if let Some(&l) = a.last() {
            let inv = f.inv(l);
            for c in a.iter_mut() {
                *c = f.mul(*c, inv);
            }
        }
        a
    }

    pub fn is_squarefree(a: &[u32], f: PrimeField) -> bool {
        let d = derivative(a, f);
        if d.is_empty() {
            return trim(a.to_vec()).len() <= 1;
        }
        gcd(a, &d, f).len() == 1
    }
}

/// Minimal polynomial of the sequence `v, Mv, M^2 v, ...` (monic, lowest first).
pub fn krylov_minpoly(m: &Matrix, v: &[u32], f: PrimeField) -> Vec<u32> {
    let n = m.rows;
    let mut basis: Vec<Vec<u32>> = vec![v.to_vec()];
    loop {
        let next = m.mul_vec(basis.last().unwrap(), f);
        let k = basis.len();
        // solve next = sum c_i basis_i
        let mut a = Matrix::zeros(n, k);
        for (j, b) in basis.iter().enumerate() {
            for i in 0..n {
                a.set(i, j, b[i]);
            }
        }
        if let Some(c) = a.solve(&next, f) {
            let mut poly: Vec<u32> = c.iter().map(|&x| f.neg(x)).collect();
            poly.push(1);
            return poly;
        }
        basis.push(next);
        if basis.len() > n + 1 {
            unreachable!("Krylov sequence longer than dimension");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_rank() {
        let f = PrimeField::new(1009).unwrap();
        let m = Matrix::from_rows(vec![vec![1, 2, 3], vec![2, 4, 6]], 3);
        assert_eq!(m.rank(f), 1);
        let k = m.kernel(f);
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(m.mul_vec(&v, f).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn squarefree_detection() {
        let f = PrimeField::new(1009).unwrap();
        // (t-1)(t-2) squarefree; (t-1)^2 not
        assert!(upoly::is_squarefree(&[2, f.neg(3), 1], f));
        assert!(!upoly::is_squarefree(&[1, f.neg(2), 1], f));
    }

    #[test]
    fn minpoly_of_diagonal() {
        let f = PrimeField::new(1009).unwrap();
        let m = Matrix::from_rows(vec![vec![2, 0], vec![0, 3]], 2);
        let mp = krylov_minpoly(&m, &[1, 1], f);
        assert_eq!(mp, vec![6, f.neg(5), 1]);
        let inv = m.inverse(f).unwrap();
        assert_eq!(m.mul(&inv, f), Matrix::from_rows(vec![vec![1, 0], vec![0, 1]], 2));
    }
}
