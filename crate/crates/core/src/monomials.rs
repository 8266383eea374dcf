//! Divided-power monomials x^(r) and sparse linear combinations of them.
//!
//! A monomial is an exponent vector (r_1, ..., r_n). Products follow the
//! divided-power rule x^(r) x^(s) = prod_i C(r_i+s_i, r_i) x^(r+s), which
//! vanishes mod p exactly when some r_i + s_i >= p, so the truncated span
//! {r_i < p} is closed under multiplication.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gfp::{FpElement, PrimeField};

/// Exponent vector of a divided-power basis monomial.
///
/// Exponents are kept below p except for the special generators x_i^(p),
/// which are pure (all other exponents zero).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Vec<u8>,
}

impl Monomial {
    pub fn new(exps: Vec<u8>) -> Self {
        Monomial { exps }
    }

    pub fn constant(n: usize) -> Self {
        Monomial { exps: vec![0; n] }
    }

    /// The pure generator x_{var}^(exp), 0-based variable index.
    pub fn generator(n: usize, var: usize, exp: u8) -> Self {
        let mut exps = vec![0; n];
        exps[var] = exp;
        Monomial { exps }
    }

    pub fn n(&self) -> usize {
        self.exps.len()
    }

    pub fn exp(&self, var: usize) -> u8 {
        self.exps[var]
    }

    pub fn exps(&self) -> &[u8] {
        &self.exps
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_constant(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Packed integer encoding with x_1's exponent in the least significant
    /// digits; the canonical sort key and basis-lookup key.
    pub fn pack(&self, p: u32) -> u64 {
        let bits = bits_per_exp(p);
        let mut code = 0u64;
        for (i, &e) in self.exps.iter().enumerate() {
            code |= (e as u64) << (bits * i as u32);
        }
        code
    }

    /// Divided-power derivative d/dx_{var}: decrements the exponent with
    /// coefficient 1, or vanishes. Works for exponent p as well, yielding
    /// p-1 and re-entering the truncated range.
    pub fn derivative(&self, var: usize) -> Option<Monomial> {
        if self.exps[var] == 0 {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[var] -= 1;
        Some(Monomial { exps })
    }

    /// Truncated divided-power product. Both inputs must have all
    /// exponents strictly below p; the result is `None` exactly when the
    /// binomial coefficient vanishes (some exponent sum reaches p).
    pub fn multiply(&self, other: &Monomial, field: &PrimeField) -> Result<Option<(FpElement, Monomial)>> {
        let p = field.p() as u8;
        let mut coeff: FpElement = 1;
        let mut exps = Vec::with_capacity(self.exps.len());
        for (var, (&a, &b)) in self.exps.iter().zip(&other.exps).enumerate() {
            if a >= p || b >= p {
                return Err(Error::ExponentOutOfRange {
                    var: var + 1,
                    exp: a.max(b) as u32,
                });
            }
            let s = a + b;
            if s >= p {
                // C(a+b, a) = 0 mod p: product leaves the truncated basis.
                return Ok(None);
            }
            coeff = field.mul(coeff, field.binomial(s as u32, a as u32)?);
            exps.push(s);
        }
        debug_assert!(coeff != 0);
        Ok(Some((coeff, Monomial { exps })))
    }

    /// Grade under deg x_i = 1 with the vector-field shift: sum(r) - 2,
    /// so linear generating functions sit in L_{-1} and the constant in L_{-2}.
    pub fn standard_grade(&self) -> i64 {
        self.total_degree() as i64 - 2
    }

    /// Grade under deg x_i = -1 for i <= m, deg x_{i+m} = +1; no shift.
    pub fn symmetric_grade(&self) -> i64 {
        let m = self.exps.len() / 2;
        let neg: i64 = self.exps[..m].iter().map(|&e| e as i64).sum();
        let pos: i64 = self.exps[m..].iter().map(|&e| e as i64).sum();
        pos - neg
    }

    /// Parse the text syntax `x1^(2)*x2`, where an omitted exponent means 1
    /// and an omitted variable means 0; `1` is the constant monomial.
    pub fn parse(s: &str, n: usize) -> Result<Monomial> {
        let err = |msg: &str| Error::MonomialParse(s.to_string(), msg.to_string());
        let trimmed = s.trim();
        if trimmed == "1" {
            return Ok(Monomial::constant(n));
        }
        let mut exps = vec![0u8; n];
        for factor in trimmed.split('*') {
            let factor = factor.trim();
            let rest = factor
                .strip_prefix('x')
                .ok_or_else(|| err("factor must start with x"))?;
            let (var_str, exp) = match rest.find('^') {
                Some(pos) => {
                    let exp_str = rest[pos + 1..]
                        .strip_prefix('(')
                        .and_then(|t| t.strip_suffix(')'))
                        .ok_or_else(|| err("exponent must be written ^(r)"))?;
                    let exp: u8 = exp_str.parse().map_err(|_| err("bad exponent"))?;
                    (&rest[..pos], exp)
                }
                None => (rest, 1u8),
            };
            let var: usize = var_str.parse().map_err(|_| err("bad variable index"))?;
            if var == 0 || var > n {
                return Err(err(&format!("variable index out of range 1..={n}")));
            }
            if exps[var - 1] != 0 {
                return Err(err("variable repeated"));
            }
            exps[var - 1] = exp;
        }
        Ok(Monomial { exps })
    }
}

fn bits_per_exp(p: u32) -> u32 {
    // exponents range over 0..=p
    u32::BITS - p.leading_zeros()
}

impl fmt::Display for Monomial {
    /// Canonical rendering: variables in ascending order, `^(r)` omitted
    /// only for exponent 1; the constant renders as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_constant() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^({})", i + 1, e)?;
            }
        }
        Ok(())
    }
}

impl Ord for Monomial {
    /// Ascending packed-encoding order: little-endian digit comparison,
    /// i.e. lexicographic on the reversed exponent vector.
    fn cmp(&self, other: &Self) -> Ordering {
        self.exps.iter().rev().cmp(other.exps.iter().rev())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse GF(p)-linear combination of monomials (a generating function).
/// Zero coefficients are never stored; terms are kept in canonical
/// packed-encoding order, so equality is structural.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<Monomial, FpElement>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut el = AlgebraElement::zero();
        el.terms.insert(m, 1);
        el
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> FpElement {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, FpElement)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn add_term(&mut self, m: Monomial, c: FpElement, field: &PrimeField) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = field.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &AlgebraElement, scale: FpElement, field: &PrimeField) {
        for (m, c) in other.iter() {
            self.add_term(m.clone(), field.mul(c, scale), field);
        }
    }

    /// Drop the constant term (quotient by the center, for the
    /// Hamiltonian families).
    pub fn project_out_constant(&mut self) {
        let constant = self.terms.keys().next().filter(|m| m.is_constant()).cloned();
        if let Some(c) = constant {
            self.terms.remove(&c);
        }
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c == 1 && !m.is_constant() {
                write!(f, "{m}")?;
            } else if m.is_constant() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}
