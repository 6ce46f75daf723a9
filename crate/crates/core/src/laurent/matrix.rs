use num_rational::BigRational;

use super::{LaurentError, LaurentInt};
use crate::linalg::{self, RatMatrix};

/// Dense matrix over `Z[u, u^-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentInt>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![LaurentInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, LaurentInt::one());
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<LaurentInt>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        let n = rows.len();
        Self {
            rows: n,
            cols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &LaurentInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: LaurentInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[LaurentInt] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Entrywise substitution `u = lambda`.
    pub fn eval_rational(&self, lambda: &BigRational) -> Result<RatMatrix, LaurentError> {
        let data = self
            .entries
            .iter()
            .map(|e| e.eval_rational(lambda))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RatMatrix::from_vec(self.rows, self.cols, data))
    }

    /// Rank over the fraction field `Q(u)`.
    ///
    /// A specialization `u = lambda` reduced mod a prime can only lose rank,
    /// so when some specialization already has full rank that is the answer.
    /// Otherwise rows are cleared of negative powers and the matrix is
    /// eliminated fraction-free (Bareiss) over `Z[u]`.
    pub fn rank(&self) -> usize {
        let full = self.rows.min(self.cols);
        if full == 0 {
            return 0;
        }
        if self.modular_rank_lower_bound() == full {
            return full;
        }
        self.bareiss_rank()
    }

    fn modular_rank_lower_bound(&self) -> usize {
        const P: u64 = linalg::LARGE_PRIME;
        let mut best = 0;
        for &lambda in &[1_000_003u64, 982_451_653, 2_147_483_659] {
            let data: Vec<u64> = self.entries.iter().map(|e| e.eval_mod(lambda, P)).collect();
            best = best.max(linalg::rank_mod_p(self.rows, self.cols, data, P));
            if best == self.rows.min(self.cols) {
                break;
            }
        }
        best
    }

    /// Exact fraction-free elimination; no modular shortcut.
    pub fn bareiss_rank(&self) -> usize {
        let mut a: Vec<Vec<LaurentInt>> = (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let low = row.iter().filter_map(LaurentInt::low_degree).min().unwrap_or(0);
                row.iter().map(|e| e.shift(-low)).collect()
            })
            .collect();
        let mut prev = LaurentInt::one();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            // Prefer the pivot of smallest degree to limit growth.
            let Some(piv) = (rank..self.rows)
                .filter(|&r| !a[r][col].is_zero())
                .min_by_key(|&r| (a[r][col].degree().unwrap(), r))
            else {
                continue;
            };
            a.swap(rank, piv);
            let (head, tail) = a.split_at_mut(rank + 1);
            let prow = &head[rank];
            let p = prow[col].clone();
            for row in tail.iter_mut() {
                let lead = std::mem::take(&mut row[col]);
                for j in col + 1..self.cols {
                    let num = &(&p * &row[j]) - &(&lead * &prow[j]);
                    row[j] = num
                        .divide_exact(&prev)
                        .expect("Bareiss elimination step must divide exactly");
                }
            }
            prev = p;
            rank += 1;
        }
        rank
    }
}
