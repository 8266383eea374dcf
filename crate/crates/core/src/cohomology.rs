//! Orchestrates per-box rank computations into full cohomology tables,
//! applies the three grading symmetries as pruning rules, verifies them as
//! invariants on unpruned tables, and persists progress to a resumable
//! journal.
//!
//! The engine computes homology ranks of the boundary and reports them as
//! dim H^k_g; over a field the dimensions agree, and the g <-> -g symmetry
//! of the symmetric grading makes the grade-sign convention immaterial for
//! every reported number.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSpec, Family, Grading, LiePAlgebra};
use crate::complex::{boundary_matrix, chain_dims, enumerate_chain_basis, GradedChainBasis};
use crate::error::{Error, Result};
use crate::gfp::FpElement;
use crate::linalg::{kernel_basis, rank_mod_p, RankOptions};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PropFlags {
    /// dim H^k_g = dim H^k_{-g}.
    pub p1: bool,
    /// dim H^k_g = dim H^{N-k}_g.
    pub p2: bool,
    /// dim H^k_g = 0 unless g is a multiple of p.
    pub p3: bool,
}

impl PropFlags {
    pub fn all() -> Self {
        PropFlags { p1: true, p2: true, p3: true }
    }

    pub fn none() -> Self {
        PropFlags::default()
    }

    pub fn any(&self) -> bool {
        self.p1 || self.p2 || self.p3
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Computed,
    ByProp1,
    ByProp2,
    ByProp3,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoxEntry {
    pub g: i64,
    pub k: usize,
    pub dim_c: u64,
    pub rank_in: Option<u64>,
    pub rank_out: Option<u64>,
    pub dim_h: u64,
    pub provenance: Provenance,
    pub wall_time_ms: u64,
}

#[derive(Debug)]
pub struct CohomologyTable {
    pub spec: AlgebraSpec,
    pub n_dim: usize,
    pub entries: BTreeMap<(i64, usize), BoxEntry>,
}

impl CohomologyTable {
    pub fn dim_h(&self, g: i64, k: usize) -> Option<u64> {
        self.entries.get(&(g, k)).map(|e| e.dim_h)
    }

    pub fn computed_boxes(&self) -> usize {
        self.entries
            .values()
            .filter(|e| e.provenance == Provenance::Computed && e.k >= 1)
            .count()
    }
}

#[derive(Clone, Debug)]
pub struct ComputeOptions {
    pub flags: PropFlags,
    /// Restrict computed boxes to degrees k in this inclusive range.
    pub k_range: Option<(usize, usize)>,
    /// Restrict computed boxes to grades in this inclusive range.
    pub g_range: Option<(i64, i64)>,
    pub rank_options: RankOptions,
    pub journal: Option<PathBuf>,
    /// Prop-3 pruning for the Poisson family requires a one-time full
    /// verification run; set this after that run has passed.
    pub allow_po_pruning: bool,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        ComputeOptions {
            flags: PropFlags::none(),
            k_range: None,
            g_range: None,
            rank_options: RankOptions::default(),
            journal: None,
            allow_po_pruning: false,
        }
    }
}

/// One journal line per computed box.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JournalEntry {
    pub family: Family,
    pub n: usize,
    pub p: u32,
    pub grading: Grading,
    pub g: i64,
    pub k: usize,
    pub dim_c: u64,
    pub rank_in: Option<u64>,
    pub rank_out: Option<u64>,
    pub dim_h: u64,
    pub provenance: Provenance,
    pub wall_time_ms: u64,
}

pub fn read_journal(path: &PathBuf, spec: &AlgebraSpec) -> Result<Vec<JournalEntry>> {
    let mut out = Vec::new();
    if !path.exists() {
        return Ok(out);
    }
    let file = std::fs::File::open(path)?;
    for line in std::io::BufReader::new(file).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        // a truncated last line (crash mid-write) is skipped, not fatal
        let Ok(entry) = serde_json::from_str::<JournalEntry>(&line) else {
            continue;
        };
        if entry.family == spec.family
            && entry.n == spec.n
            && entry.p == spec.p
            && entry.grading == spec.grading
        {
            out.push(entry);
        }
    }
    Ok(out)
}

/// Compute a single (g, k) box exactly: both boundary ranks and the
/// homology dimension dim H = dim C - rank d_k - rank d_{k+1}.
pub fn compute_box(alg: &LiePAlgebra, k: usize, g: i64, rank_opts: &RankOptions) -> Result<BoxEntry> {
    let start = Instant::now();
    let n = alg.dim();
    let ck = enumerate_chain_basis(alg, k, g);
    let dim_c = ck.len() as u64;
    let rank_in = if k == 0 || dim_c == 0 {
        0
    } else {
        let ckm1 = enumerate_chain_basis(alg, k - 1, g);
        box_rank(alg, &ckm1, &ck, rank_opts)?
    };
    let rank_out = if k >= n || dim_c == 0 {
        0
    } else {
        let ckp1 = enumerate_chain_basis(alg, k + 1, g);
        box_rank(alg, &ck, &ckp1, rank_opts)?
    };
    Ok(BoxEntry {
        g,
        k,
        dim_c,
        rank_in: Some(rank_in),
        rank_out: Some(rank_out),
        dim_h: dim_c - rank_in - rank_out,
        provenance: Provenance::Computed,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

fn box_rank(
    alg: &LiePAlgebra,
    target: &GradedChainBasis,
    source: &GradedChainBasis,
    rank_opts: &RankOptions,
) -> Result<u64> {
    if target.is_empty() || source.is_empty() {
        return Ok(0);
    }
    let m = boundary_matrix(alg, target, source)?;
    Ok(rank_mod_p(&m, &alg.field, rank_opts)? as u64)
}

/// Full table over all non-empty boxes. With proposition flags set, only
/// representative boxes (g >= 0, g = 0 mod p, k <= floor(N/2)) are
/// computed; the rest are inferred and carry provenance.
pub fn full_table(alg: &LiePAlgebra, opts: &ComputeOptions) -> Result<CohomologyTable> {
    let spec = alg.spec;
    if opts.flags.any() && spec.grading != Grading::Symmetric {
        return Err(Error::Config(
            "proposition pruning is only valid in the symmetric grading".into(),
        ));
    }
    if opts.flags.p3 && spec.family == Family::Po && !opts.allow_po_pruning {
        return Err(Error::Config(
            "prop-3 pruning for the po family requires a prior full verification run \
             (pass allow_po_pruning / --allow-po-pruning)"
                .into(),
        ));
    }

    let n = alg.dim();
    let p = alg.field.p() as i64;
    let grades = alg.grades();
    let dims = chain_dims(&grades);
    let dim_c = |k: usize, g: i64| dims.get(&(k, g)).copied().unwrap_or(0) as u64;

    let half = n / 2;
    let in_k_range = |k: usize| opts.k_range.map(|(lo, hi)| k >= lo && k <= hi).unwrap_or(true);
    let in_g_range = |g: i64| opts.g_range.map(|(lo, hi)| g >= lo && g <= hi).unwrap_or(true);
    let representative = |g: i64, k: usize| -> bool {
        if opts.flags.p3 && g.rem_euclid(p) != 0 {
            return false;
        }
        if opts.flags.p1 && g < 0 {
            return false;
        }
        if opts.flags.p2 && k > half {
            return false;
        }
        true
    };

    // boxes to compute exactly (k = 0 is always cheap and anchors prop 2)
    let mut to_compute: BTreeSet<(i64, usize)> = BTreeSet::new();
    for (&(k, g), &d) in &dims {
        if d == 0 || k > n {
            continue;
        }
        if k > 0 && (!in_k_range(k) || !in_g_range(g)) {
            continue;
        }
        if k == 0 || representative(g, k) {
            to_compute.insert((g, k));
        }
    }

    // ranks of d_k|_g needed for those boxes
    let mut ranks_needed: BTreeSet<(i64, usize)> = BTreeSet::new();
    for &(g, k) in &to_compute {
        if k >= 1 {
            ranks_needed.insert((g, k));
        }
        if k < n {
            ranks_needed.insert((g, k + 1));
        }
    }

    // resume: boxes already in the journal provide their ranks
    let mut journal_entries: HashMap<(i64, usize), JournalEntry> = HashMap::new();
    if let Some(path) = &opts.journal {
        for e in read_journal(path, &spec)? {
            journal_entries.insert((e.g, e.k), e);
        }
    }
    let mut known_ranks: HashMap<(i64, usize), u64> = HashMap::new();
    for e in journal_entries.values() {
        if e.provenance != Provenance::Computed {
            continue;
        }
        if let Some(r) = e.rank_in {
            known_ranks.insert((e.g, e.k), r);
        }
        if let Some(r) = e.rank_out {
            known_ranks.insert((e.g, e.k + 1), r);
        }
    }
    ranks_needed.retain(|key| !known_ranks.contains_key(key));
    // trivially-zero ranks need no matrix
    let mut computed_ranks: HashMap<(i64, usize), (u64, u64)> = HashMap::new(); // -> (rank, ms)
    ranks_needed.retain(|&(g, k)| {
        if k == 0 || k > n || dim_c(k, g) == 0 || dim_c(k - 1, g) == 0 {
            computed_ranks.insert((g, k), (0, 0));
            false
        } else {
            true
        }
    });

    // group by grade so chain bases are enumerated once per (g, k)
    let mut by_grade: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for &(g, k) in &ranks_needed {
        by_grade.entry(g).or_default().push(k);
    }
    // boxes waiting on ranks from this run, by grade; journaled as soon as
    // both of their ranks are in, so an interrupted run can resume
    let mut pending_by_grade: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for &(g, k) in &to_compute {
        if !journal_entries.contains_key(&(g, k))
            && (ranks_needed.contains(&(g, k)) || ranks_needed.contains(&(g, k + 1)))
        {
            pending_by_grade.entry(g).or_default().push(k);
        }
    }
    let journal_file = match &opts.journal {
        Some(path) => Some(std::fs::OpenOptions::new().create(true).append(true).open(path)?),
        None => None,
    };
    let journal_state = Mutex::new((journal_file, Vec::<JournalEntry>::new()));
    let results = Mutex::new(Vec::new());
    by_grade.par_iter().try_for_each(|(&g, ks)| -> Result<()> {
        let mut cache: HashMap<usize, GradedChainBasis> = HashMap::new();
        let mut local: HashMap<usize, (u64, u64)> = HashMap::new();
        let rank_at = |local: &HashMap<usize, (u64, u64)>, k: usize| -> Option<(u64, u64)> {
            if k == 0 || k > n || dim_c(k, g) == 0 || dim_c(k - 1, g) == 0 {
                return Some((0, 0));
            }
            known_ranks
                .get(&(g, k))
                .map(|&r| (r, 0))
                .or_else(|| local.get(&k).copied())
        };
        for &k in ks {
            let t0 = Instant::now();
            for kk in [k - 1, k] {
                cache
                    .entry(kk)
                    .or_insert_with(|| enumerate_chain_basis(alg, kk, g));
            }
            let rank = box_rank(alg, &cache[&(k - 1)], &cache[&k], &opts.rank_options)?;
            local.insert(k, (rank, t0.elapsed().as_millis() as u64));
            for &bk in pending_by_grade.get(&g).map(Vec::as_slice).unwrap_or(&[]) {
                let (Some((rin, t_in)), Some((rout, t_out))) =
                    (rank_at(&local, bk), rank_at(&local, bk + 1))
                else {
                    continue;
                };
                let mut state = journal_state.lock().unwrap();
                if state.1.iter().any(|e| e.g == g && e.k == bk) {
                    continue;
                }
                let entry = JournalEntry {
                    family: spec.family,
                    n: spec.n,
                    p: spec.p,
                    grading: spec.grading,
                    g,
                    k: bk,
                    dim_c: dim_c(bk, g),
                    rank_in: Some(rin),
                    rank_out: Some(rout),
                    dim_h: dim_c(bk, g) - rin - rout,
                    provenance: Provenance::Computed,
                    wall_time_ms: t_in + t_out,
                };
                if let Some(file) = state.0.as_mut() {
                    let line = serde_json::to_string(&entry)
                        .map_err(|e| Error::Journal(e.to_string()))?;
                    writeln!(file, "{line}")?;
                }
                state.1.push(entry);
            }
        }
        results.lock().unwrap().extend(local.into_iter().map(|(k, v)| ((g, k), v)));
        Ok(())
    })?;
    computed_ranks.extend(results.into_inner().unwrap());
    let (journal_file, incremental) = journal_state.into_inner().unwrap();
    let mut journal_file = journal_file;
    for e in incremental {
        journal_entries.insert((e.g, e.k), e);
    }

    let rank_of = |g: i64, k: usize| -> Option<(u64, u64)> {
        if k == 0 || k > n {
            return Some((0, 0));
        }
        known_ranks
            .get(&(g, k))
            .map(|&r| (r, 0))
            .or_else(|| computed_ranks.get(&(g, k)).copied())
    };

    // assemble computed entries
    let mut table = CohomologyTable { spec, n_dim: n, entries: BTreeMap::new() };
    let mut new_journal_lines: Vec<JournalEntry> = Vec::new();
    for &(g, k) in &to_compute {
        let d = dim_c(k, g);
        let entry = if let Some(prev) = journal_entries.get(&(g, k)) {
            BoxEntry {
                g,
                k,
                dim_c: prev.dim_c,
                rank_in: prev.rank_in,
                rank_out: prev.rank_out,
                dim_h: prev.dim_h,
                provenance: Provenance::Computed,
                wall_time_ms: prev.wall_time_ms,
            }
        } else {
            let (rin, t_in) = rank_of(g, k).expect("rank_in scheduled");
            let (rout, t_out) = rank_of(g, k + 1).expect("rank_out scheduled");
            let entry = BoxEntry {
                g,
                k,
                dim_c: d,
                rank_in: Some(rin),
                rank_out: Some(rout),
                dim_h: d - rin - rout,
                provenance: Provenance::Computed,
                wall_time_ms: t_in + t_out,
            };
            new_journal_lines.push(JournalEntry {
                family: spec.family,
                n: spec.n,
                p: spec.p,
                grading: spec.grading,
                g,
                k,
                dim_c: entry.dim_c,
                rank_in: entry.rank_in,
                rank_out: entry.rank_out,
                dim_h: entry.dim_h,
                provenance: entry.provenance,
                wall_time_ms: entry.wall_time_ms,
            });
            entry
        };
        table.entries.insert((g, k), entry);
    }

    if let Some(file) = journal_file.as_mut() {
        for line in &new_journal_lines {
            writeln!(file, "{}", serde_json::to_string(line).map_err(|e| Error::Journal(e.to_string()))?)?;
        }
    }

    // inference passes: prop 3, then prop 2 (within known grades), then prop 1
    let all_boxes: Vec<(i64, usize)> = dims
        .iter()
        .filter(|(&(k, _), &d)| d > 0 && k <= n)
        .map(|(&(k, g), _)| (g, k))
        .collect();
    if opts.flags.p3 {
        for &(g, k) in &all_boxes {
            if g.rem_euclid(p) != 0 && !table.entries.contains_key(&(g, k)) {
                table.entries.insert(
                    (g, k),
                    BoxEntry {
                        g,
                        k,
                        dim_c: dim_c(k, g),
                        rank_in: None,
                        rank_out: None,
                        dim_h: 0,
                        provenance: Provenance::ByProp3,
                        wall_time_ms: 0,
                    },
                );
            }
        }
    }
    if opts.flags.p2 {
        for &(g, k) in &all_boxes {
            if table.entries.contains_key(&(g, k)) {
                continue;
            }
            let source = (g, n - k);
            if let Some(src) = table.entries.get(&source) {
                let dim_h = src.dim_h;
                table.entries.insert(
                    (g, k),
                    BoxEntry {
                        g,
                        k,
                        dim_c: dim_c(k, g),
                        rank_in: None,
                        rank_out: None,
                        dim_h,
                        provenance: Provenance::ByProp2,
                        wall_time_ms: 0,
                    },
                );
            }
        }
    }
    if opts.flags.p1 {
        for &(g, k) in &all_boxes {
            if table.entries.contains_key(&(g, k)) || g >= 0 {
                continue;
            }
            if let Some(src) = table.entries.get(&(-g, k)) {
                let dim_h = src.dim_h;
                table.entries.insert(
                    (g, k),
                    BoxEntry {
                        g,
                        k,
                        dim_c: dim_c(k, g),
                        rank_in: None,
                        rank_out: None,
                        dim_h,
                        provenance: Provenance::ByProp1,
                        wall_time_ms: 0,
                    },
                );
            }
        }
    }

    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass { boxes: usize },
    Fail { counterexample: (i64, usize), detail: String },
    Skipped { reason: String },
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        !matches!(self, CheckOutcome::Fail { .. })
    }
}

#[derive(Debug)]
pub struct PropReport {
    pub prop1: CheckOutcome,
    pub prop2: CheckOutcome,
    pub prop3: CheckOutcome,
    pub euler: CheckOutcome,
}

impl PropReport {
    pub fn passed(&self) -> bool {
        self.prop1.passed() && self.prop2.passed() && self.prop3.passed() && self.euler.passed()
    }
}

impl std::fmt::Display for PropReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (name, c) in [
            ("prop1 (g <-> -g)", &self.prop1),
            ("prop2 (k <-> N-k)", &self.prop2),
            ("prop3 (g = 0 mod p)", &self.prop3),
            ("euler characteristic", &self.euler),
        ] {
            match c {
                CheckOutcome::Pass { boxes } => writeln!(f, "PASS {name}: {boxes} boxes")?,
                CheckOutcome::Fail { counterexample, detail } => {
                    writeln!(f, "FAIL {name} at (g={}, k={}): {detail}", counterexample.0, counterexample.1)?
                }
                CheckOutcome::Skipped { reason } => writeln!(f, "SKIP {name}: {reason}")?,
            }
        }
        Ok(())
    }
}

/// Verify the three symmetry rules (grade mirror, duality, mod-p vanishing)
/// plus the per-grade Euler characteristic on a fully computed (unpruned)
/// table.
pub fn verify_propositions(alg: &LiePAlgebra, table: &CohomologyTable) -> PropReport {
    let n = table.n_dim;
    let p = alg.field.p() as i64;
    let symmetric = alg.spec.grading == Grading::Symmetric;
    let skip = |what: &str| CheckOutcome::Skipped {
        reason: format!("{what} is stated for the symmetric grading"),
    };

    let get = |g: i64, k: usize| table.dim_h(g, k).unwrap_or(0);

    let prop1 = if !symmetric {
        skip("prop 1")
    } else {
        let mut boxes = 0;
        let mut fail = None;
        for (&(g, k), e) in &table.entries {
            boxes += 1;
            if get(-g, k) != e.dim_h {
                fail = Some(((g, k), format!("dim H = {} but dim H at -g = {}", e.dim_h, get(-g, k))));
                break;
            }
        }
        match fail {
            Some((c, d)) => CheckOutcome::Fail { counterexample: c, detail: d },
            None => CheckOutcome::Pass { boxes },
        }
    };

    let prop2 = if !symmetric {
        skip("prop 2")
    } else {
        let mut boxes = 0;
        let mut fail = None;
        for (&(g, k), e) in &table.entries {
            boxes += 1;
            if get(g, n - k) != e.dim_h {
                fail = Some(((g, k), format!("dim H = {} but dim H at N-k = {}", e.dim_h, get(g, n - k))));
                break;
            }
        }
        match fail {
            Some((c, d)) => CheckOutcome::Fail { counterexample: c, detail: d },
            None => CheckOutcome::Pass { boxes },
        }
    };

    let prop3 = if !symmetric {
        skip("prop 3")
    } else {
        let mut boxes = 0;
        let mut fail = None;
        for (&(g, k), e) in &table.entries {
            if g.rem_euclid(p) != 0 {
                boxes += 1;
                if e.dim_h != 0 {
                    fail = Some(((g, k), format!("dim H = {} off the p-multiple grades", e.dim_h)));
                    break;
                }
            }
        }
        match fail {
            Some((c, d)) => CheckOutcome::Fail { counterexample: c, detail: d },
            None => CheckOutcome::Pass { boxes },
        }
    };

    // per-grade Euler characteristic over k = 0..N (grading-independent)
    let dims = chain_dims(&alg.grades());
    let mut grades: Vec<i64> = dims.keys().map(|&(_, g)| g).collect();
    grades.sort_unstable();
    grades.dedup();
    let mut euler = CheckOutcome::Pass { boxes: grades.len() };
    'eu: for &g in &grades {
        let mut chi_c = 0i128;
        let mut chi_h = 0i128;
        for k in 0..=n {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            chi_c += sign * dims.get(&(k, g)).copied().unwrap_or(0) as i128;
            chi_h += sign * get(g, k) as i128;
        }
        if chi_c != chi_h {
            euler = CheckOutcome::Fail {
                counterexample: (g, 0),
                detail: format!("chi(C) = {chi_c}, chi(H) = {chi_h}"),
            };
            break 'eu;
        }
    }

    PropReport { prop1, prop2, prop3, euler }
}

/// A chain-space vector: wedge tuples of basis indices with coefficients.
#[derive(Clone, Debug)]
pub struct Cocycle {
    pub terms: Vec<(Vec<u32>, FpElement)>,
}

pub fn render_cocycle(alg: &LiePAlgebra, c: &Cocycle, ascii: bool) -> String {
    let wedge = if ascii { " /\\ " } else { " ∧ " };
    c.terms
        .iter()
        .map(|(tuple, coeff)| {
            let monos = tuple
                .iter()
                .map(|&i| alg.basis()[i as usize].to_string())
                .collect::<Vec<_>>()
                .join(wedge);
            if *coeff == 1 {
                format!("({monos})")
            } else {
                format!("{coeff}*({monos})")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Representatives of H_{k,g}: kernel vectors of d_k independent modulo
/// the image of d_{k+1}. Count always equals dim H.
pub fn cocycle_representatives(alg: &LiePAlgebra, k: usize, g: i64) -> Result<Vec<Cocycle>> {
    let n = alg.dim();
    let ck = enumerate_chain_basis(alg, k, g);
    if ck.is_empty() {
        return Ok(Vec::new());
    }
    let field = &alg.field;
    let dim = ck.len();

    let kernel: Vec<Vec<(u32, FpElement)>> = if k == 0 {
        vec![vec![(0, 1)]]
    } else {
        let ckm1 = enumerate_chain_basis(alg, k - 1, g);
        let dk = boundary_matrix(alg, &ckm1, &ck)?;
        kernel_basis(&dk, field)
    };

    // echelon of the image of d_{k+1}
    let mut echelon: Vec<Vec<FpElement>> = Vec::new();
    if k < n {
        let ckp1 = enumerate_chain_basis(alg, k + 1, g);
        if !ckp1.is_empty() {
            let dk1 = boundary_matrix(alg, &ck, &ckp1)?;
            for j in 0..dk1.cols() {
                let mut v = vec![0u32; dim];
                for (r, c) in dk1.column(j) {
                    v[r as usize] = c;
                }
                echelon_insert(&mut echelon, v, field);
            }
        }
    }

    let mut reps = Vec::new();
    for vec in kernel {
        let mut dense = vec![0u32; dim];
        for &(j, c) in &vec {
            dense[j as usize] = c;
        }
        if echelon_insert(&mut echelon, dense, field) {
            reps.push(Cocycle {
                terms: vec
                    .iter()
                    .map(|&(j, c)| (ck.subsets[j as usize].clone(), c))
                    .collect(),
            });
        }
    }
    Ok(reps)
}

/// Reduce `v` against the echelon rows; insert and return true if a new
/// pivot survives.
fn echelon_insert(
    echelon: &mut Vec<Vec<FpElement>>,
    mut v: Vec<FpElement>,
    field: &crate::gfp::PrimeField,
) -> bool {
    for row in echelon.iter() {
        let piv = row.iter().position(|&x| x != 0).expect("echelon rows nonzero");
        if v[piv] != 0 {
            let factor = v[piv]; // rows are normalized to unit pivots
            for (d, &s) in v.iter_mut().zip(row.iter()) {
                *d = field.sub(*d, field.mul(factor, s));
            }
        }
    }
    match v.iter().position(|&x| x != 0) {
        None => false,
        Some(piv) => {
            let inv = field.inv(v[piv]).expect("nonzero pivot");
            for x in v.iter_mut() {
                *x = field.mul(*x, inv);
            }
            echelon.push(v);
            true
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RenderOptions {
    pub ascii: bool,
    pub merged_rows: bool,
    pub include_k0: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { ascii: false, merged_rows: false, include_k0: false }
    }
}

/// Render in the blank/dot convention: blank for dim C = 0, a middle
/// dot for dim C > 0 with vanishing cohomology, the dimension otherwise.
pub fn render_table(alg: &LiePAlgebra, table: &CohomologyTable, opts: &RenderOptions) -> String {
    let n = table.n_dim;
    let dims = chain_dims(&alg.grades());
    let dot = if opts.ascii { "." } else { "·" };
    let k_lo = if opts.include_k0 { 0 } else { 1 };

    let mut grades: Vec<i64> = dims
        .iter()
        .filter(|(&(k, _), &d)| d > 0 && k >= k_lo && k <= n)
        .map(|(&(_, g), _)| g)
        .collect();
    grades.sort_unstable();
    grades.dedup();

    let mut rows: Vec<(String, Vec<String>)> = Vec::new();
    let cell = |g: i64, k: usize| -> String {
        let d = dims.get(&(k, g)).copied().unwrap_or(0);
        if d == 0 {
            String::new()
        } else {
            match table.dim_h(g, k) {
                Some(0) => dot.to_string(),
                Some(h) => h.to_string(),
                None => "?".to_string(),
            }
        }
    };
    let mut emitted: BTreeSet<i64> = BTreeSet::new();
    for &g in &grades {
        if emitted.contains(&g) {
            continue;
        }
        if opts.merged_rows && g < 0 && grades.contains(&-g) {
            let mirror: Vec<String> = (k_lo..=n).map(|k| cell(-g, k)).collect();
            let this: Vec<String> = (k_lo..=n).map(|k| cell(g, k)).collect();
            if mirror == this {
                let pm = if opts.ascii { "+-" } else { "±" };
                rows.push((format!("{pm}{}", -g), this));
                emitted.insert(g);
                emitted.insert(-g);
                continue;
            }
        }
        rows.push((g.to_string(), (k_lo..=n).map(|k| cell(g, k)).collect()));
        emitted.insert(g);
    }

    let label_width = rows
        .iter()
        .map(|(l, _)| l.chars().count())
        .max()
        .unwrap_or(1)
        .max(3);
    let col_width = rows
        .iter()
        .flat_map(|(_, cells)| cells.iter().map(|c| c.chars().count()))
        .chain((k_lo..=n).map(|k| k.to_string().len()))
        .max()
        .unwrap_or(1);

    let mut out = String::new();
    out.push_str(&format!("{:>width$}", "g\\k", width = label_width));
    for k in k_lo..=n {
        out.push_str(&format!("  {:>width$}", k, width = col_width));
    }
    out.push('\n');
    for (label, cells) in &rows {
        for _ in 0..label_width.saturating_sub(label.chars().count()) {
            out.push(' ');
        }
        out.push_str(label);
        for c in cells {
            let pad = col_width - c.chars().count();
            out.push_str("  ");
            for _ in 0..pad {
                out.push(' ');
            }
            out.push_str(c);
        }
        out.push('\n');
    }
    out
}
