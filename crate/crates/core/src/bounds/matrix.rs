use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    Palindrome,
    Maynard,
    Generic,
}

#[derive(Clone, Debug)]
enum Storage {
    Dense(Vec<f64>),
    /// Compressed sparse rows.
    Sparse {
        row_ptr: Vec<usize>,
        cols: Vec<usize>,
        vals: Vec<f64>,
    },
}

/// Square nonnegative matrix, dense or CSR.
#[derive(Clone, Debug)]
pub struct GMatrix {
    dim: usize,
    kind: MatrixKind,
    storage: Storage,
}

impl GMatrix {
    pub fn dense(dim: usize, entries: Vec<f64>, kind: MatrixKind) -> Self {
        assert_eq!(entries.len(), dim * dim, "dense matrix size mismatch");
        GMatrix {
            dim,
            kind,
            storage: Storage::Dense(entries),
        }
    }

    /// Builds CSR storage from per-row `(column, value)` lists.
    pub fn from_rows(dim: usize, rows: Vec<Vec<(usize, f64)>>, kind: MatrixKind) -> Self {
        assert_eq!(rows.len(), dim);
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            for (c, v) in row {
                assert!(c < dim, "column out of range");
                cols.push(c);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        GMatrix {
            dim,
            kind,
            storage: Storage::Sparse {
                row_ptr,
                cols,
                vals,
            },
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match &self.storage {
            Storage::Dense(e) => e[i * self.dim + j],
            Storage::Sparse {
                row_ptr,
                cols,
                vals,
            } => {
                let r = row_ptr[i]..row_ptr[i + 1];
                cols[r.clone()]
                    .binary_search(&j)
                    .map(|k| vals[r.start + k])
                    .unwrap_or(0.0)
            }
        }
    }

    /// Stored nonzero entries of row `i`.
    pub fn row_entries(&self, i: usize) -> Vec<(usize, f64)> {
        match &self.storage {
            Storage::Dense(e) => e[i * self.dim..(i + 1) * self.dim]
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(j, v)| (j, *v))
                .collect(),
            Storage::Sparse {
                row_ptr,
                cols,
                vals,
            } => (row_ptr[i]..row_ptr[i + 1])
                .filter(|&k| vals[k] != 0.0)
                .map(|k| (cols[k], vals[k]))
                .collect(),
        }
    }

    pub fn nnz(&self) -> usize {
        (0..self.dim).map(|i| self.row_entries(i).len()).sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        match &self.storage {
            Storage::Dense(e) => e.iter().all(|v| *v >= 0.0),
            Storage::Sparse { vals, .. } => vals.iter().all(|v| *v >= 0.0),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.storage {
            Storage::Dense(e) => e.iter().all(|v| *v == 0.0),
            Storage::Sparse { vals, .. } => vals.iter().all(|v| *v == 0.0),
        }
    }

    /// `y = A x`; rows are independent so they are computed in parallel.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        match &self.storage {
            Storage::Dense(e) => {
                y.par_iter_mut().enumerate().for_each(|(i, yi)| {
                    *yi = e[i * self.dim..(i + 1) * self.dim]
                        .iter()
                        .zip(x)
                        .map(|(a, b)| a * b)
                        .sum();
                });
            }
            Storage::Sparse {
                row_ptr,
                cols,
                vals,
            } => {
                y.par_iter_mut().enumerate().for_each(|(i, yi)| {
                    *yi = (row_ptr[i]..row_ptr[i + 1])
                        .map(|k| vals[k] * x[cols[k]])
                        .sum();
                });
            }
        }
    }
}
