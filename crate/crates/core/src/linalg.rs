//! Exact sparse rank and kernel computation over GF(p).
//!
//! This is the computational bottleneck of the whole pipeline: every
//! cohomology dimension is two ranks of a sparse boundary matrix.

use std::collections::BinaryHeap;
use std::cmp::Reverse;

use crate::error::{Error, Result};
use crate::gfp::{FpElement, PrimeField};

/// Sparse matrix over GF(p) in compressed sparse column form.
/// No explicit zeros; row indices strictly increasing within a column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrixFp {
    rows: usize,
    cols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<u32>,
    vals: Vec<FpElement>,
}

impl SparseMatrixFp {
    /// Build from per-column (row, value) lists; entries need not be sorted
    /// but must be duplicate-free with nonzero values.
    pub fn from_columns(rows: usize, cols: usize, columns: Vec<Vec<(u32, FpElement)>>) -> Self {
        assert_eq!(columns.len(), cols);
        let nnz = columns.iter().map(|c| c.len()).sum();
        let mut col_ptr = Vec::with_capacity(cols + 1);
        let mut row_idx = Vec::with_capacity(nnz);
        let mut vals = Vec::with_capacity(nnz);
        col_ptr.push(0);
        for mut col in columns {
            col.sort_unstable_by_key(|&(r, _)| r);
            for (r, v) in col {
                debug_assert!(v != 0 && (r as usize) < rows);
                row_idx.push(r);
                vals.push(v);
            }
            col_ptr.push(row_idx.len());
        }
        SparseMatrixFp { rows, cols, col_ptr, row_idx, vals }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrixFp {
            rows,
            cols,
            col_ptr: vec![0; cols + 1],
            row_idx: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.row_idx.len()
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = (u32, FpElement)> + '_ {
        let range = self.col_ptr[j]..self.col_ptr[j + 1];
        self.row_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.vals[range].iter().copied())
    }

    pub fn transpose(&self) -> SparseMatrixFp {
        let mut columns = vec![Vec::new(); self.rows];
        for j in 0..self.cols {
            for (r, v) in self.column(j) {
                columns[r as usize].push((j as u32, v));
            }
        }
        SparseMatrixFp::from_columns(self.cols, self.rows, columns)
    }

    pub fn to_dense(&self) -> Vec<Vec<FpElement>> {
        let mut d = vec![vec![0; self.cols]; self.rows];
        for j in 0..self.cols {
            for (r, v) in self.column(j) {
                d[r as usize][j] = v;
            }
        }
        d
    }

    /// Matrix-vector product over GF(p); `v` indexed by columns.
    pub fn mul_vec(&self, v: &[FpElement], field: &PrimeField) -> Vec<FpElement> {
        let mut out = vec![0u64; self.rows];
        let p = field.p() as u64;
        for j in 0..self.cols {
            let x = v[j] as u64;
            if x == 0 {
                continue;
            }
            for (r, a) in self.column(j) {
                // delayed reduction: accumulate in u64, reduce once at the end
                out[r as usize] += a as u64 * x;
            }
        }
        out.into_iter().map(|s| (s % p) as u32).collect()
    }

    /// Plain-text coordinate format: header `rows cols nnz modulus`, then
    /// 0-based `row col value` lines in column-major order.
    pub fn write_coord<W: std::io::Write>(&self, p: u32, w: &mut W) -> Result<()> {
        writeln!(w, "{} {} {} {}", self.rows, self.cols, self.nnz(), p)?;
        for j in 0..self.cols {
            for (r, v) in self.column(j) {
                writeln!(w, "{} {} {}", r, j, v)?;
            }
        }
        Ok(())
    }

    pub fn read_coord<R: std::io::BufRead>(r: &mut R) -> Result<(SparseMatrixFp, u32)> {
        let mut header = String::new();
        r.read_line(&mut header)?;
        let parts: Vec<u64> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Config(format!("bad coord header `{header}`"))))
            .collect::<Result<_>>()?;
        if parts.len() != 4 {
            return Err(Error::Config("coord header must be `rows cols nnz modulus`".into()));
        }
        let (rows, cols, nnz, p) = (parts[0] as usize, parts[1] as usize, parts[2] as usize, parts[3] as u32);
        let mut columns = vec![Vec::new(); cols];
        loop {
            let mut line = String::new();
            if r.read_line(&mut line)? == 0 {
                break;
            }
            if line.trim().is_empty() {
                continue;
            }
            let t: Vec<u64> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::Config(format!("bad coord line `{line}`"))))
                .collect::<Result<_>>()?;
            if t.len() != 3 {
                return Err(Error::Config(format!("bad coord line `{line}`")));
            }
            columns[t[1] as usize].push((t[0] as u32, t[2] as u32));
        }
        let m = SparseMatrixFp::from_columns(rows, cols, columns);
        if m.nnz() != nnz {
            return Err(Error::Config("coord nnz mismatch".into()));
        }
        Ok((m, p))
    }
}

/// Pivot selection strategy for the sparse elimination. The rank itself is
/// strategy-independent; strategies trade pivot-search time against fill-in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotStrategy {
    /// Approximate Markowitz: minimize (row_count-1)*(col_count-1) over the
    /// rows of a few lowest-count candidate columns.
    Markowitz,
    /// First nonzero row of the lowest-count column.
    MinColumn,
}

#[derive(Clone, Debug)]
pub struct RankOptions {
    pub strategy: PivotStrategy,
    /// Switch the trailing block to dense elimination once its density
    /// exceeds this fraction and it fits the dense cap.
    pub dense_switch_density: f64,
    /// Maximum number of dense cells the trailing block may occupy.
    pub dense_cap_cells: usize,
    /// Abort (resumably) if the sparse working set exceeds this many stored
    /// entries; `None` means unbounded.
    pub max_entries: Option<usize>,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions {
            strategy: PivotStrategy::Markowitz,
            dense_switch_density: 0.2,
            dense_cap_cells: 64_000_000,
            max_entries: None,
        }
    }
}

impl RankOptions {
    /// Derive the entry budget from a memory budget in MiB (8 bytes per
    /// stored entry, matching the (u32, u32) working representation).
    pub fn with_memory_budget_mb(mut self, mb: usize) -> Self {
        self.max_entries = Some(mb * 1024 * 1024 / 8);
        self.dense_cap_cells = self.dense_cap_cells.min(mb * 1024 * 1024);
        self
    }
}

/// Exact rank of a sparse matrix over GF(p).
pub fn rank_mod_p(m: &SparseMatrixFp, field: &PrimeField, opts: &RankOptions) -> Result<usize> {
    Elimination::new(m, field, opts.clone()).run()
}

struct Elimination<'a> {
    field: &'a PrimeField,
    opts: RankOptions,
    // active rows as sorted (col, val) vectors; None once eliminated
    rows: Vec<Option<Vec<(u32, FpElement)>>>,
    // candidate rows per column, with stale entries pruned lazily
    col_rows: Vec<Vec<u32>>,
    col_nnz: Vec<u32>,
    col_active: Vec<bool>,
    // min-heap of (count, col) candidates, revalidated on pop
    col_heap: BinaryHeap<Reverse<(u32, u32)>>,
    entries: usize,
    active_rows: usize,
    active_cols: usize,
}

impl<'a> Elimination<'a> {
    fn new(m: &SparseMatrixFp, field: &'a PrimeField, opts: RankOptions) -> Self {
        let mut rows: Vec<Vec<(u32, FpElement)>> = vec![Vec::new(); m.rows];
        let mut col_rows = vec![Vec::new(); m.cols];
        let mut col_nnz = vec![0u32; m.cols];
        for j in 0..m.cols {
            for (r, v) in m.column(j) {
                rows[r as usize].push((j as u32, v));
                col_rows[j].push(r);
            }
            col_nnz[j] = col_rows[j].len() as u32;
        }
        let mut col_heap = BinaryHeap::with_capacity(m.cols);
        for j in 0..m.cols {
            if col_nnz[j] > 0 {
                col_heap.push(Reverse((col_nnz[j], j as u32)));
            }
        }
        let entries = m.nnz();
        let active_rows = rows.iter().filter(|r| !r.is_empty()).count();
        let active_cols = col_nnz.iter().filter(|&&c| c > 0).count();
        Elimination {
            field,
            opts,
            rows: rows.into_iter().map(Some).collect(),
            col_rows,
            col_nnz,
            col_active: vec![true; m.cols],
            col_heap,
            entries,
            active_rows,
            active_cols,
        }
    }

    fn row_has_col(&self, r: u32, c: u32) -> Option<FpElement> {
        let row = self.rows[r as usize].as_ref()?;
        row.binary_search_by_key(&c, |&(j, _)| j)
            .ok()
            .map(|pos| row[pos].1)
    }

    /// Pop columns until one whose recorded count is still current appears.
    fn pop_valid_col(&mut self) -> Option<u32> {
        while let Some(Reverse((cnt, c))) = self.col_heap.pop() {
            if !self.col_active[c as usize] {
                continue;
            }
            // prune stale row references so col_nnz is trustworthy
            self.prune_col(c);
            let actual = self.col_nnz[c as usize];
            if actual == 0 {
                self.col_active[c as usize] = false;
                self.active_cols -= 1;
                continue;
            }
            if actual != cnt {
                self.col_heap.push(Reverse((actual, c)));
                continue;
            }
            return Some(c);
        }
        None
    }

    fn prune_col(&mut self, c: u32) {
        let rows = &self.rows;
        let list = &mut self.col_rows[c as usize];
        list.retain(|&r| {
            rows[r as usize]
                .as_ref()
                .map(|row| row.binary_search_by_key(&c, |&(j, _)| j).is_ok())
                .unwrap_or(false)
        });
        list.sort_unstable();
        list.dedup();
        self.col_nnz[c as usize] = list.len() as u32;
    }

    fn select_pivot(&mut self) -> Option<(u32, u32)> {
        let c0 = self.pop_valid_col()?;
        let pick_row = |rows: &[Option<Vec<(u32, FpElement)>>], list: &[u32]| -> u32 {
            *list
                .iter()
                .min_by_key(|&&r| (rows[r as usize].as_ref().unwrap().len(), r))
                .unwrap()
        };
        match self.opts.strategy {
            PivotStrategy::MinColumn => {
                let r = self.col_rows[c0 as usize][0];
                self.col_heap.push(Reverse((self.col_nnz[c0 as usize], c0)));
                Some((r, c0))
            }
            PivotStrategy::Markowitz => {
                // examine a handful of lowest-count columns and take the
                // cheapest (row-1)*(col-1) pivot among them
                let mut candidates = vec![c0];
                for _ in 0..7 {
                    match self.pop_valid_col() {
                        Some(c) => candidates.push(c),
                        None => break,
                    }
                }
                let mut best: Option<(u64, u32, u32)> = None;
                for &c in &candidates {
                    let cc = self.col_nnz[c as usize] as u64;
                    let r = pick_row(&self.rows, &self.col_rows[c as usize]);
                    let rc = self.rows[r as usize].as_ref().unwrap().len() as u64;
                    let cost = (rc - 1) * (cc - 1);
                    if best.map(|(b, _, _)| cost < b).unwrap_or(true) {
                        best = Some((cost, r, c));
                    }
                }
                for &c in &candidates {
                    self.col_heap.push(Reverse((self.col_nnz[c as usize], c)));
                }
                best.map(|(_, r, c)| (r, c))
            }
        }
    }

    fn eliminate(&mut self, pr: u32, pc: u32) -> Result<()> {
        let piv_val = self.row_has_col(pr, pc).expect("pivot entry vanished");
        let piv_inv = self.field.inv(piv_val)?;
        let piv_row = self.rows[pr as usize].take().expect("pivot row inactive");
        self.active_rows -= 1;
        self.entries -= piv_row.len();
        for &(j, _) in &piv_row {
            self.col_nnz[j as usize] = self.col_nnz[j as usize].saturating_sub(1);
        }

        self.prune_col(pc);
        let targets: Vec<u32> = self.col_rows[pc as usize].iter().copied().filter(|&r| r != pr).collect();
        for r in targets {
            let val = match self.row_has_col(r, pc) {
                Some(v) => v,
                None => continue,
            };
            let factor = self.field.mul(val, piv_inv);
            let old = self.rows[r as usize].take().unwrap();
            let merged = self.row_sub_scaled(&old, &piv_row, factor, r)?;
            self.rows[r as usize] = Some(merged);
        }
        self.col_active[pc as usize] = false;
        self.active_cols = self.active_cols.saturating_sub(1);
        self.col_rows[pc as usize].clear();
        self.col_nnz[pc as usize] = 0;
        Ok(())
    }

    /// target - factor * pivot, merging two sorted rows; updates column
    /// bookkeeping for added/removed entries.
    fn row_sub_scaled(
        &mut self,
        target: &[(u32, FpElement)],
        pivot: &[(u32, FpElement)],
        factor: FpElement,
        row_id: u32,
    ) -> Result<Vec<(u32, FpElement)>> {
        let f = self.field;
        let mut out = Vec::with_capacity(target.len() + pivot.len());
        let (mut a, mut b) = (0usize, 0usize);
        while a < target.len() || b < pivot.len() {
            let next = match (target.get(a), pivot.get(b)) {
                (Some(&(ca, va)), Some(&(cb, vb))) => {
                    if ca < cb {
                        a += 1;
                        Some((ca, va))
                    } else if cb < ca {
                        b += 1;
                        let v = f.neg(f.mul(factor, vb));
                        self.col_nnz[cb as usize] += 1;
                        self.col_rows[cb as usize].push(row_id);
                        Some((cb, v))
                    } else {
                        a += 1;
                        b += 1;
                        let v = f.sub(va, f.mul(factor, vb));
                        if v == 0 {
                            self.col_nnz[ca as usize] = self.col_nnz[ca as usize].saturating_sub(1);
                            None
                        } else {
                            Some((ca, v))
                        }
                    }
                }
                (Some(&(ca, va)), None) => {
                    a += 1;
                    Some((ca, va))
                }
                (None, Some(&(cb, vb))) => {
                    b += 1;
                    let v = f.neg(f.mul(factor, vb));
                    self.col_nnz[cb as usize] += 1;
                    self.col_rows[cb as usize].push(row_id);
                    Some((cb, v))
                }
                (None, None) => unreachable!(),
            };
            if let Some((c, v)) = next {
                debug_assert!(v != 0);
                out.push((c, v));
            }
        }
        self.entries = self.entries - target.len() + out.len();
        if let Some(budget) = self.opts.max_entries {
            if self.entries > budget {
                return Err(Error::MemoryBudget { used: self.entries, budget });
            }
        }
        Ok(out)
    }

    fn should_go_dense(&self) -> bool {
        let cells = self.active_rows.saturating_mul(self.active_cols);
        if cells == 0 || cells > self.opts.dense_cap_cells {
            return false;
        }
        let nnz: usize = self
            .rows
            .iter()
            .filter_map(|r| r.as_ref().map(|r| r.len()))
            .sum();
        (nnz as f64) > self.opts.dense_switch_density * cells as f64
    }

    fn finish_dense(&mut self) -> usize {
        // gather the active block
        let mut col_map = vec![u32::MAX; self.col_active.len()];
        let mut ncols = 0u32;
        for (j, &active) in self.col_active.iter().enumerate() {
            if active && self.col_nnz[j] > 0 {
                col_map[j] = ncols;
                ncols += 1;
            }
        }
        let mut dense: Vec<Vec<FpElement>> = Vec::new();
        for row in self.rows.iter().flatten() {
            if row.is_empty() {
                continue;
            }
            let mut d = vec![0u32; ncols as usize];
            let mut any = false;
            for &(j, v) in row {
                let mj = col_map[j as usize];
                if mj != u32::MAX {
                    d[mj as usize] = v;
                    any = true;
                }
            }
            if any {
                dense.push(d);
            }
        }
        dense_rank(&mut dense, self.field)
    }

    fn run(&mut self) -> Result<usize> {
        let mut rank = 0usize;
        let mut since_check = 0usize;
        loop {
            since_check += 1;
            if since_check >= 64 {
                since_check = 0;
                if self.should_go_dense() {
                    return Ok(rank + self.finish_dense());
                }
            }
            match self.select_pivot() {
                None => return Ok(rank),
                Some((r, c)) => {
                    self.eliminate(r, c)?;
                    rank += 1;
                }
            }
        }
    }
}

/// In-place Gaussian elimination rank of a dense row list.
pub fn dense_rank(rows: &mut Vec<Vec<FpElement>>, field: &PrimeField) -> usize {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0usize;
    for col in 0..ncols {
        let pivot = (rank..rows.len()).find(|&i| rows[i][col] != 0);
        let Some(pr) = pivot else { continue };
        rows.swap(rank, pr);
        let inv = field.inv(rows[rank][col]).expect("nonzero pivot");
        let piv: Vec<FpElement> = rows[rank][col..].iter().map(|&v| field.mul(v, inv)).collect();
        for i in 0..rows.len() {
            if i == rank || rows[i][col] == 0 {
                continue;
            }
            let factor = rows[i][col];
            for (k, &pv) in piv.iter().enumerate() {
                if pv != 0 {
                    let t = rows[i][col + k];
                    rows[i][col + k] = field.sub(t, field.mul(factor, pv));
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Reduced row echelon form; returns the pivot column of each nonzero row.
/// Rows are fully reduced (unit pivots, zeros above and below).
pub fn rref_dense(rows: &mut Vec<Vec<FpElement>>, field: &PrimeField) -> Vec<usize> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let pivot = (rank..rows.len()).find(|&i| rows[i][col] != 0);
        let Some(pr) = pivot else { continue };
        rows.swap(rank, pr);
        let inv = field.inv(rows[rank][col]).expect("nonzero pivot");
        for v in rows[rank].iter_mut() {
            *v = field.mul(*v, inv);
        }
        for i in 0..rows.len() {
            if i == rank || rows[i][col] == 0 {
                continue;
            }
            let factor = rows[i][col];
            let (head, tail) = rows.split_at_mut(i.max(rank));
            let (src, dst) = if i > rank {
                (&head[rank], &mut tail[0])
            } else {
                (&tail[0], &mut head[i])
            };
            for (d, &s) in dst.iter_mut().zip(src.iter()) {
                *d = field.sub(*d, field.mul(factor, s));
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    pivots
}

/// Basis of the right kernel; each vector is a sparse (index, value) list
/// over the columns of `m`. Count is always cols - rank.
pub fn kernel_basis(m: &SparseMatrixFp, field: &PrimeField) -> Vec<Vec<(u32, FpElement)>> {
    // row-reduce the transpose augmented with the identity: rows of the
    // augmented matrix whose left part vanishes record kernel combinations
    let n = m.cols();
    let mut rows: Vec<Vec<FpElement>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut row = vec![0u32; m.rows() + n];
        for (r, v) in m.column(j) {
            row[r as usize] = v;
        }
        row[m.rows() + j] = 1;
        rows.push(row);
    }
    let _ = rref_dense(&mut rows, field);
    let mut kernel = Vec::new();
    for row in &rows {
        if row[..m.rows()].iter().all(|&v| v == 0) {
            let vec: Vec<(u32, FpElement)> = row[m.rows()..]
                .iter()
                .enumerate()
                .filter(|&(_, &v)| v != 0)
                .map(|(j, &v)| (j as u32, v))
                .collect();
            if !vec.is_empty() {
                kernel.push(vec);
            }
        }
    }
    kernel
}
