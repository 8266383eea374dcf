//! Graded chain bases C_{k,g} of the exterior algebra on the Lie algebra
//! basis, and the Chevalley-Eilenberg boundary matrices restricted to a
//! (grade, degree) box. The bracket is grade-additive, so the boundary
//! preserves the grade and each box is an independent rank problem.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::algebra::LiePAlgebra;
use crate::error::{Error, Result};
use crate::gfp::FpElement;
use crate::linalg::SparseMatrixFp;

/// Canonical enumeration of the strictly-increasing k-tuples of basis
/// indices with grade sum g, in lexicographic order, with reverse lookup
/// keyed by the index bitmask.
pub struct GradedChainBasis {
    pub k: usize,
    pub g: i64,
    pub subsets: Vec<Vec<u32>>,
    index: HashMap<u128, u32>,
}

impl GradedChainBasis {
    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn position(&self, mask: u128) -> Option<u32> {
        self.index.get(&mask).copied()
    }
}

fn mask_of(tuple: &[u32]) -> u128 {
    tuple.iter().fold(0u128, |m, &i| m | (1u128 << i))
}

/// Depth-first enumeration over basis indices in ascending order, pruned
/// by the min/max grade sum achievable from each suffix.
pub fn enumerate_chain_basis(alg: &LiePAlgebra, k: usize, g: i64) -> GradedChainBasis {
    let grades = alg.grades();
    let n = grades.len();
    assert!(n <= 128, "basis too large for bitmask chain enumeration");

    // bounds[i][c] = (min, max) grade sum over c elements chosen from i..n
    let mut bounds: Vec<Vec<(i64, i64)>> = vec![Vec::new(); n + 1];
    for i in (0..=n).rev() {
        let mut suffix: Vec<i64> = grades[i..].to_vec();
        suffix.sort_unstable();
        let len = suffix.len();
        let mut row = Vec::with_capacity(len + 1);
        let mut min_pref = 0i64;
        let mut max_pref = 0i64;
        row.push((0, 0));
        for c in 1..=len {
            min_pref += suffix[c - 1];
            max_pref += suffix[len - c];
            row.push((min_pref, max_pref));
        }
        bounds[i] = row;
    }

    let mut subsets = Vec::new();
    let mut current = Vec::with_capacity(k);
    dfs(&grades, &bounds, 0, k, g, &mut current, &mut subsets);

    let index = subsets
        .iter()
        .enumerate()
        .map(|(pos, t)| (mask_of(t), pos as u32))
        .collect();
    GradedChainBasis { k, g, subsets, index }
}

fn dfs(
    grades: &[i64],
    bounds: &[Vec<(i64, i64)>],
    start: usize,
    remaining: usize,
    target: i64,
    current: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if remaining == 0 {
        if target == 0 {
            out.push(current.clone());
        }
        return;
    }
    let n = grades.len();
    for i in start..=(n - remaining) {
        let rest = target - grades[i];
        let (lo, hi) = bounds[i + 1][remaining - 1];
        if rest < lo || rest > hi {
            continue;
        }
        current.push(i as u32);
        dfs(grades, bounds, i + 1, remaining - 1, rest, current, out);
        current.pop();
    }
}

/// Per-(k, g) chain dimensions dim C_{k,g} by dynamic programming over the
/// basis grades; exact for any N (counts in u128).
pub fn chain_dims(grades: &[i64]) -> HashMap<(usize, i64), u128> {
    let mut dims: HashMap<(usize, i64), u128> = HashMap::new();
    dims.insert((0, 0), 1);
    for &gr in grades {
        let mut next = dims.clone();
        for (&(k, g), &count) in &dims {
            *next.entry((k + 1, g + gr)).or_insert(0) += count;
        }
        dims = next;
    }
    dims
}

/// Number of non-empty (g, k) boxes with k in [k_min, N].
pub fn count_nonempty_boxes(grades: &[i64], include_k0: bool) -> usize {
    let dims = chain_dims(grades);
    let k_min = if include_k0 { 0 } else { 1 };
    dims.iter().filter(|(&(k, _), &d)| k >= k_min && d > 0).count()
}

/// The Chevalley-Eilenberg boundary restricted to the (k, g) box:
/// a |C_{k-1,g}| x |C_{k,g}| matrix over GF(p), columns in canonical order.
///
/// d(e_{i1} ^ ... ^ e_{ik}) = sum_{a<b} (-1)^{a+b} [e_{ia}, e_{ib}] ^
/// (the wedge with positions a, b removed), each bracket term re-sorted
/// into the remaining tuple with the permutation sign.
pub fn boundary_matrix(
    alg: &LiePAlgebra,
    target: &GradedChainBasis,
    source: &GradedChainBasis,
) -> Result<SparseMatrixFp> {
    assert_eq!(source.k, target.k + 1);
    assert_eq!(source.g, target.g);
    let k = source.k;
    if k < 2 {
        // boundary of a 1-chain is zero for trivial coefficients
        return Ok(SparseMatrixFp::zero(target.len(), source.len()));
    }
    let field = &alg.field;
    let columns: Result<Vec<Vec<(u32, FpElement)>>> = source
        .subsets
        .par_iter()
        .map(|tuple| {
            let full_mask = mask_of(tuple);
            let mut entries: HashMap<u32, FpElement> = HashMap::new();
            for a in 0..k {
                for b in (a + 1)..k {
                    let bracket = alg.bracket(tuple[a], tuple[b]);
                    if bracket.is_empty() {
                        continue;
                    }
                    let rem_mask = full_mask & !(1u128 << tuple[a]) & !(1u128 << tuple[b]);
                    // 1-based positions a+1, b+1: parity of a+b is the same
                    let pair_neg = (a + b) % 2 == 1;
                    for (t, c) in bracket {
                        if rem_mask >> t & 1 == 1 {
                            continue; // repeated factor, wedge vanishes
                        }
                        let below = (rem_mask & ((1u128 << t) - 1)).count_ones();
                        let neg = pair_neg ^ (below % 2 == 1);
                        let row_mask = rem_mask | (1u128 << t);
                        let row = target.position(row_mask).ok_or(Error::GradeViolation {
                            g: source.g,
                            k,
                        })?;
                        let signed = if neg { field.neg(c) } else { c };
                        let e = entries.entry(row).or_insert(0);
                        *e = field.add(*e, signed);
                    }
                }
            }
            let mut col: Vec<(u32, FpElement)> =
                entries.into_iter().filter(|&(_, c)| c != 0).collect();
            col.sort_unstable_by_key(|&(r, _)| r);
            Ok(col)
        })
        .collect();
    Ok(SparseMatrixFp::from_columns(target.len(), source.len(), columns?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraSpec, Family, Grading, LiePAlgebra};
    use crate::linalg::{rank_mod_p, RankOptions};

    fn h23(grading: Grading) -> LiePAlgebra {
        LiePAlgebra::build(AlgebraSpec::new(Family::H, 2, 3, grading).unwrap()).unwrap()
    }

    #[test]
    fn top_chain_has_grade_zero() {
        let alg = h23(Grading::Symmetric);
        let basis = enumerate_chain_basis(&alg, 10, 0);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis.subsets[0], (0..10).collect::<Vec<u32>>());
    }

    #[test]
    fn empty_box() {
        let alg = h23(Grading::Symmetric);
        assert!(enumerate_chain_basis(&alg, 1, -7).is_empty());
        assert_eq!(enumerate_chain_basis(&alg, 4, -7).len() > 0, true);
    }

    #[test]
    fn enumeration_matches_dims_dp() {
        let alg = h23(Grading::Symmetric);
        let dims = chain_dims(&alg.grades());
        for k in 0..=10usize {
            for g in -10..=10i64 {
                let expect = dims.get(&(k, g)).copied().unwrap_or(0);
                let basis = enumerate_chain_basis(&alg, k, g);
                assert_eq!(basis.len() as u128, expect, "k={k} g={g}");
                // tuples strictly increasing, lexicographically ordered,
                // grade sums correct
                for t in &basis.subsets {
                    assert!(t.windows(2).all(|w| w[0] < w[1]));
                    let sum: i64 = t.iter().map(|&i| alg.grade(i as usize)).sum();
                    assert_eq!(sum, g);
                }
                for w in basis.subsets.windows(2) {
                    assert!(w[0] < w[1]);
                }
            }
        }
    }

    #[test]
    fn total_chain_dim_is_2_to_n() {
        let alg = h23(Grading::Symmetric);
        let dims = chain_dims(&alg.grades());
        let total: u128 = dims.values().sum();
        assert_eq!(total, 1u128 << 10);
        // per-k sums are binomials
        for k in 0..=10usize {
            let sum: u128 = dims.iter().filter(|(&(kk, _), _)| kk == k).map(|(_, &d)| d).sum();
            let binom = (0..k as u128).fold(1u128, |acc, i| acc * (10 - i) / (i + 1));
            assert_eq!(sum, binom, "k={k}");
        }
    }

    #[test]
    fn box_counts_match_paper() {
        let sym = h23(Grading::Symmetric);
        assert_eq!(count_nonempty_boxes(&sym.grades(), false), 108);
        let std = h23(Grading::Standard);
        assert_eq!(count_nonempty_boxes(&std.grades(), false), 60);
    }

    #[test]
    fn boundary_of_1_chains_is_zero() {
        let alg = h23(Grading::Symmetric);
        let c0 = enumerate_chain_basis(&alg, 0, 0);
        let c1 = enumerate_chain_basis(&alg, 1, 0);
        let d1 = boundary_matrix(&alg, &c0, &c1).unwrap();
        assert_eq!(d1.nnz(), 0);
        assert_eq!((d1.rows(), d1.cols()), (1, c1.len()));
    }

    #[test]
    fn dd_zero_h23_both_gradings() {
        for grading in [Grading::Symmetric, Grading::Standard] {
            let alg = h23(grading);
            assert!(check_dd_zero(&alg), "{grading}");
        }
    }

    #[test]
    fn dd_zero_po23() {
        let alg =
            LiePAlgebra::build(AlgebraSpec::new(Family::Po, 2, 3, Grading::Symmetric).unwrap())
                .unwrap();
        assert!(check_dd_zero(&alg));
    }

    /// d_k . d_{k+1} = 0 as a matrix identity on every box.
    fn check_dd_zero(alg: &LiePAlgebra) -> bool {
        let dims = chain_dims(&alg.grades());
        let n = alg.dim();
        let grades: Vec<i64> = {
            let mut gs: Vec<i64> = dims.keys().map(|&(_, g)| g).collect();
            gs.sort_unstable();
            gs.dedup();
            gs
        };
        let f = &alg.field;
        for &g in &grades {
            for k in 2..=n {
                if dims.get(&(k, g)).copied().unwrap_or(0) == 0 {
                    continue;
                }
                let ck = enumerate_chain_basis(alg, k, g);
                let ck1 = enumerate_chain_basis(alg, k - 1, g);
                let ck2 = enumerate_chain_basis(alg, k - 2, g);
                let dk = boundary_matrix(alg, &ck1, &ck).unwrap();
                let dk1 = boundary_matrix(alg, &ck2, &ck1).unwrap();
                // apply dk1 to every column of dk
                for j in 0..dk.cols() {
                    let mut v = vec![0u32; dk.rows()];
                    for (r, c) in dk.column(j) {
                        v[r as usize] = c;
                    }
                    if dk1.mul_vec(&v, f).iter().any(|&x| x != 0) {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn rank_of_d2_grade0_matches_derived_ideal() {
        // rank d_2|_{g} = dim C_{1,g} - dim of grade-g part of L/[L, L]
        let alg = h23(Grading::Symmetric);
        let ideal = alg.derived_ideal().unwrap();
        let g = 0i64;
        let c1 = enumerate_chain_basis(&alg, 1, g);
        let c2 = enumerate_chain_basis(&alg, 2, g);
        let d2 = boundary_matrix(&alg, &c1, &c2).unwrap();
        let rank = rank_mod_p(&d2, &alg.field, &RankOptions::default()).unwrap();
        let quotient_dim = (0..alg.dim())
            .filter(|&i| alg.grade(i) == g && !ideal.contains(&(i as u32)))
            .count();
        assert_eq!(rank, c1.len() - quotient_dim);
    }

    #[test]
    fn coord_export_format() {
        let alg = h23(Grading::Symmetric);
        let c1 = enumerate_chain_basis(&alg, 1, -3);
        let c2 = enumerate_chain_basis(&alg, 2, -3);
        let d2 = boundary_matrix(&alg, &c1, &c2).unwrap();
        let mut buf = Vec::new();
        d2.write_coord(3, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let header = text.lines().next().unwrap();
        assert_eq!(
            header,
            format!("{} {} {} 3", c1.len(), c2.len(), d2.nnz())
        );
    }
}
