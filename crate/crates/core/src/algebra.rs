//! The four truncated algebra families po(n)_p, h(n)_p, h1(n)_p, h2(n)_p:
//! basis construction, the symplectic Poisson bracket, structure constants,
//! derived ideals and the consistency checks (Jacobi, antisymmetry, grade
//! additivity, grading-element diagonality).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gfp::{FpElement, PrimeField};
use crate::linalg::rref_dense;
use crate::monomials::{AlgebraElement, Monomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Poisson algebra: all truncated monomials plus the generators x_i^(p).
    Po,
    /// Hamiltonian algebra: po modulo the constant.
    H,
    /// First derived ideal [h, h].
    H1,
    /// Second derived ideal, simple for p != 2.
    H2,
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "po" => Ok(Family::Po),
            "h" => Ok(Family::H),
            "h1" => Ok(Family::H1),
            "h2" => Ok(Family::H2),
            _ => Err(Error::InvalidSpec(format!("unknown family `{s}` (expected po, h, h1, h2)"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Po => "po",
            Family::H => "h",
            Family::H1 => "h1",
            Family::H2 => "h2",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grading {
    /// deg x_i = 1 for all i, shifted so vector fields sit in L_{-1} and up.
    Standard,
    /// deg x_i = -1, deg x_{i+m} = +1: compatible with the symplectic form.
    Symmetric,
}

impl FromStr for Grading {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Grading::Standard),
            "symmetric" => Ok(Grading::Symmetric),
            _ => Err(Error::InvalidSpec(format!("unknown grading `{s}`"))),
        }
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grading::Standard => write!(f, "standard"),
            Grading::Symmetric => write!(f, "symmetric"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub family: Family,
    pub n: usize,
    pub p: u32,
    pub grading: Grading,
}

impl AlgebraSpec {
    pub fn new(family: Family, n: usize, p: u32, grading: Grading) -> Result<Self> {
        let spec = AlgebraSpec { family, n, p, grading };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.n % 2 != 0 {
            return Err(Error::InvalidSpec(format!("n must be even and >= 2, got {}", self.n)));
        }
        PrimeField::new(self.p)?;
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.n / 2
    }

    /// Closed-form dimension: po -> p^n + n, h -> p^n + n - 1,
    /// h1 -> p^n - 1, h2 -> p^n - 2.
    pub fn dim(&self) -> u64 {
        let pn = (self.p as u64).pow(self.n as u32);
        match self.family {
            Family::Po => pn + self.n as u64,
            Family::H => pn + self.n as u64 - 1,
            Family::H1 => pn - 1,
            Family::H2 => pn - 2,
        }
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})_{} [{}]", self.family, self.n, self.p, self.grading)
    }
}

/// Enumerate the basis monomials for a family in deterministic order:
/// ascending packed encoding, with the exponent-p generators appended last
/// (for the families that contain them).
pub fn build_basis(spec: &AlgebraSpec) -> Result<Vec<Monomial>> {
    spec.validate()?;
    let n = spec.n;
    let p = spec.p as u8;
    let top = n as u32 * (p as u32 - 1);
    let mut monos = Vec::new();
    let mut exps = vec![0u8; n];
    loop {
        let m = Monomial::new(exps.clone());
        let deg = m.total_degree();
        let keep = match spec.family {
            Family::Po => true,
            Family::H => deg > 0,
            Family::H1 => deg > 0,
            Family::H2 => deg > 0 && deg < top,
        };
        if keep {
            monos.push(m);
        }
        // next exponent vector in little-endian counter order = packed order
        let mut i = 0;
        loop {
            if i == n {
                exps.clear();
                break;
            }
            if exps[i] + 1 < p {
                exps[i] += 1;
                break;
            }
            exps[i] = 0;
            i += 1;
        }
        if exps.is_empty() {
            break;
        }
    }
    if matches!(spec.family, Family::Po | Family::H) {
        for var in 0..n {
            monos.push(Monomial::generator(n, var, p));
        }
    }
    debug_assert_eq!(monos.len() as u64, spec.dim());
    Ok(monos)
}

/// The symplectic Poisson bracket on generating functions:
/// {f, g} = sum_{i<=m} (df/dx_i dg/dx_{i+m} - df/dx_{i+m} dg/dx_i).
/// For all families except po the constant component is projected out.
pub fn poisson_bracket(
    f: &AlgebraElement,
    g: &AlgebraElement,
    spec: &AlgebraSpec,
    field: &PrimeField,
) -> Result<AlgebraElement> {
    let m = spec.m();
    let mut out = AlgebraElement::zero();
    for (mf, cf) in f.iter() {
        for (mg, cg) in g.iter() {
            let c = field.mul(cf, cg);
            for i in 0..m {
                bracket_term(mf, mg, i, i + m, c, field, &mut out)?;
                bracket_term(mf, mg, i + m, i, field.neg(c), field, &mut out)?;
            }
        }
    }
    if spec.family != Family::Po {
        out.project_out_constant();
    }
    Ok(out)
}

fn bracket_term(
    mf: &Monomial,
    mg: &Monomial,
    df_var: usize,
    dg_var: usize,
    scale: FpElement,
    field: &PrimeField,
    out: &mut AlgebraElement,
) -> Result<()> {
    let (Some(a), Some(b)) = (mf.derivative(df_var), mg.derivative(dg_var)) else {
        return Ok(());
    };
    if let Some((c, prod)) = a.multiply(&b, field)? {
        out.add_term(prod, field.mul(c, scale), field);
    }
    Ok(())
}

/// Sparse bracket value in basis coordinates: (basis index, coefficient).
pub type SparseVec = Vec<(u32, FpElement)>;

/// A constructed algebra: ordered basis, structure constants stored for
/// i < j only, and per-element grades in both gradings.
pub struct LiePAlgebra {
    pub spec: AlgebraSpec,
    pub field: PrimeField,
    basis: Vec<Monomial>,
    index: HashMap<u64, u32>,
    grades_standard: Vec<i64>,
    grades_symmetric: Vec<i64>,
    brackets: HashMap<(u32, u32), SparseVec>,
}

impl LiePAlgebra {
    /// Build the algebra and tabulate all structure constants, verifying
    /// closure and grade additivity along the way.
    pub fn build(spec: AlgebraSpec) -> Result<Self> {
        spec.validate()?;
        let field = PrimeField::new(spec.p)?;
        let basis = build_basis(&spec)?;
        let index: HashMap<u64, u32> = basis
            .iter()
            .enumerate()
            .map(|(i, m)| (m.pack(spec.p), i as u32))
            .collect();
        let grades_standard: Vec<i64> = basis.iter().map(|m| m.standard_grade()).collect();
        let grades_symmetric: Vec<i64> = basis.iter().map(|m| m.symmetric_grade()).collect();

        let mut alg = LiePAlgebra {
            spec,
            field,
            basis,
            index,
            grades_standard,
            grades_symmetric,
            brackets: HashMap::new(),
        };
        alg.tabulate()?;
        Ok(alg)
    }

    fn tabulate(&mut self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in (i + 1)..n {
                let fi = AlgebraElement::from_monomial(self.basis[i].clone());
                let fj = AlgebraElement::from_monomial(self.basis[j].clone());
                let val = poisson_bracket(&fi, &fj, &self.spec, &self.field)?;
                if val.is_zero() {
                    continue;
                }
                let mut vec = SparseVec::new();
                let gi_std = self.grades_standard[i];
                let gj_std = self.grades_standard[j];
                let gi_sym = self.grades_symmetric[i];
                let gj_sym = self.grades_symmetric[j];
                for (m, c) in val.iter() {
                    let idx = self.index.get(&m.pack(self.spec.p)).copied().ok_or_else(|| {
                        Error::ClosureViolation { i, j, term: m.to_string() }
                    })?;
                    if self.grades_standard[idx as usize] != gi_std + gj_std
                        || self.grades_symmetric[idx as usize] != gi_sym + gj_sym
                    {
                        return Err(Error::GradeViolation {
                            g: gi_sym + gj_sym,
                            k: 2,
                        });
                    }
                    vec.push((idx, c));
                }
                vec.sort_unstable_by_key(|&(k, _)| k);
                self.brackets.insert((i as u32, j as u32), vec);
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn index_of(&self, m: &Monomial) -> Option<u32> {
        self.index.get(&m.pack(self.spec.p)).copied()
    }

    /// Grade of a basis element in the spec's selected grading.
    pub fn grade(&self, i: usize) -> i64 {
        match self.spec.grading {
            Grading::Standard => self.grades_standard[i],
            Grading::Symmetric => self.grades_symmetric[i],
        }
    }

    pub fn grades(&self) -> Vec<i64> {
        (0..self.dim()).map(|i| self.grade(i)).collect()
    }

    pub fn grades_standard(&self) -> &[i64] {
        &self.grades_standard
    }

    pub fn grades_symmetric(&self) -> &[i64] {
        &self.grades_symmetric
    }

    /// Max |grade| over the basis.
    pub fn grade_range(&self) -> i64 {
        (0..self.dim()).map(|i| self.grade(i).abs()).max().unwrap_or(0)
    }

    /// Bracket of two basis elements by table lookup; i > j resolved by
    /// sign flip, i = j is zero.
    pub fn bracket(&self, i: u32, j: u32) -> SparseVec {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => SparseVec::new(),
            Less => self.brackets.get(&(i, j)).cloned().unwrap_or_default(),
            Greater => self
                .brackets
                .get(&(j, i))
                .map(|v| v.iter().map(|&(k, c)| (k, self.field.neg(c))).collect())
                .unwrap_or_default(),
        }
    }

    pub fn nonzero_brackets(&self) -> impl Iterator<Item = (u32, u32, &SparseVec)> {
        self.brackets.iter().map(|(&(i, j), v)| (i, j, v))
    }

    /// Bracket of two sparse coordinate vectors via the table.
    pub fn bracket_vec(&self, a: &[(u32, FpElement)], b: &[(u32, FpElement)]) -> SparseVec {
        let mut acc: HashMap<u32, FpElement> = HashMap::new();
        for &(i, ci) in a {
            for &(j, cj) in b {
                let c = self.field.mul(ci, cj);
                for (k, ck) in self.bracket(i, j) {
                    let e = acc.entry(k).or_insert(0);
                    *e = self.field.add(*e, self.field.mul(c, ck));
                }
            }
        }
        let mut out: SparseVec = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        out.sort_unstable_by_key(|&(k, _)| k);
        out
    }

    /// Linear span of all bracket values, as a set of basis indices.
    /// The span must be coordinate-aligned (true for these families, whose
    /// derived ideals are spanned by monomials).
    pub fn derived_ideal(&self) -> Result<Vec<u32>> {
        let n = self.dim();
        let mut rows: Vec<Vec<FpElement>> = Vec::new();
        for (_, _, v) in self.nonzero_brackets() {
            let mut row = vec![0u32; n];
            for &(k, c) in v {
                row[k as usize] = c;
            }
            rows.push(row);
        }
        let pivots = rref_dense(&mut rows, &self.field);
        for (row, &piv) in rows.iter().zip(&pivots) {
            let aligned = row
                .iter()
                .enumerate()
                .all(|(k, &c)| (c == 0) || (k == piv && c == 1));
            if !aligned {
                return Err(Error::NonMonomialSpan);
            }
        }
        Ok(pivots.into_iter().map(|c| c as u32).collect())
    }

    /// The inner grading element z = sum_{i<=m} x_i x_{i+m}, in basis
    /// coordinates.
    pub fn grading_element(&self) -> Result<SparseVec> {
        let n = self.spec.n;
        let m = self.spec.m();
        let mut vec = SparseVec::new();
        for i in 0..m {
            let mut exps = vec![0u8; n];
            exps[i] = 1;
            exps[i + m] = 1;
            let mono = Monomial::new(exps);
            let idx = self
                .index_of(&mono)
                .ok_or_else(|| Error::OutsideSpan(mono.to_string()))?;
            vec.push((idx, 1));
        }
        vec.sort_unstable_by_key(|&(k, _)| k);
        Ok(vec)
    }

    /// True iff ad_z is diagonal with {z, e} = (symmetric_grade(e) mod p) e
    /// for every basis element e.
    pub fn grading_element_check(&self) -> Result<bool> {
        let z = self.grading_element()?;
        let p = self.field.p() as i64;
        for e in 0..self.dim() as u32 {
            let lhs = self.bracket_vec(&z, &[(e, 1)]);
            let lambda = self.grades_symmetric[e as usize].rem_euclid(p) as u32;
            let rhs: SparseVec = if lambda == 0 { vec![] } else { vec![(e, lambda)] };
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn verify(&self) -> VerifyReport {
        let mut report = VerifyReport::default();
        let n = self.dim();

        report.push(
            "dimension formula",
            n as u64 == self.spec.dim(),
            format!("dim = {n}, closed form = {}", self.spec.dim()),
        );

        // antisymmetry from the raw bracket, not the table convention
        let mut anti_ok = true;
        'outer: for i in 0..n {
            for j in 0..n {
                let fi = AlgebraElement::from_monomial(self.basis[i].clone());
                let fj = AlgebraElement::from_monomial(self.basis[j].clone());
                let ij = poisson_bracket(&fi, &fj, &self.spec, &self.field).unwrap();
                let ji = poisson_bracket(&fj, &fi, &self.spec, &self.field).unwrap();
                let mut neg = AlgebraElement::zero();
                neg.add_scaled(&ji, self.field.neg(1), &self.field);
                if ij != neg {
                    anti_ok = false;
                    report.push("antisymmetry", false, format!("violated at pair ({i}, {j})"));
                    break 'outer;
                }
            }
        }
        if anti_ok {
            report.push("antisymmetry", true, format!("{} ordered pairs", n * n));
        }

        // Jacobi on all basis triples via the structure-constant table
        let mut triples = 0usize;
        let mut jacobi_ok = true;
        'jac: for i in 0..n as u32 {
            for j in (i + 1)..n as u32 {
                for k in (j + 1)..n as u32 {
                    triples += 1;
                    let mut acc: HashMap<u32, FpElement> = HashMap::new();
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        let ab = self.bracket(a, b);
                        for (t, ct) in self.bracket_vec(&ab, &[(c, 1)]) {
                            let e = acc.entry(t).or_insert(0);
                            *e = self.field.add(*e, ct);
                        }
                    }
                    if acc.values().any(|&c| c != 0) {
                        jacobi_ok = false;
                        report.push("jacobi", false, format!("violating triple ({i}, {j}, {k})"));
                        break 'jac;
                    }
                }
            }
        }
        report.jacobi_triples = triples;
        if jacobi_ok {
            report.push("jacobi", true, format!("{triples} triples"));
        }

        // grade additivity in both gradings (also asserted at build time)
        let mut grade_ok = true;
        for (i, j, v) in self.nonzero_brackets() {
            for &(k, _) in v {
                if self.grades_standard[k as usize]
                    != self.grades_standard[i as usize] + self.grades_standard[j as usize]
                    || self.grades_symmetric[k as usize]
                        != self.grades_symmetric[i as usize] + self.grades_symmetric[j as usize]
                {
                    grade_ok = false;
                }
            }
        }
        report.push("grade additivity", grade_ok, "both gradings".to_string());

        let sym_sum: i64 = self.grades_symmetric.iter().sum();
        report.push(
            "symmetric grades sum to zero",
            sym_sum == 0,
            format!("sum = {sym_sum}"),
        );

        match self.grading_element_check() {
            Ok(ok) => report.push(
                "grading element diagonality",
                ok,
                "{z, e} = +grade(e) mod p * e (observed sign: +)".to_string(),
            ),
            Err(e) => report.push("grading element diagonality", false, e.to_string()),
        }

        report
    }

    /// JSON dump of basis, grades and nonzero structure constants for
    /// cross-checking with external computer-algebra systems.
    pub fn dump_json(&self) -> serde_json::Value {
        let mut brackets: Vec<_> = self
            .nonzero_brackets()
            .map(|(i, j, v)| {
                serde_json::json!({
                    "i": i,
                    "j": j,
                    "terms": v.iter().map(|&(k, c)| serde_json::json!({"k": k, "c": c})).collect::<Vec<_>>(),
                })
            })
            .collect();
        brackets.sort_by_key(|b| (b["i"].as_u64(), b["j"].as_u64()));
        serde_json::json!({
            "spec": {
                "family": self.spec.family.to_string(),
                "n": self.spec.n,
                "p": self.spec.p,
                "grading": self.spec.grading.to_string(),
            },
            "basis": self.basis.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            "grades": {
                "standard": self.grades_standard,
                "symmetric": self.grades_symmetric,
            },
            "brackets": brackets,
        })
    }
}

#[derive(Debug, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub jacobi_triples: usize,
}

#[derive(Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl VerifyReport {
    fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check { name: name.to_string(), passed, detail });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            )?;
        }
        Ok(())
    }
}
