//! Sparse quasi-homogeneous polynomials with exact rational coefficients.
//!
//! A [`Poly`] is a finite map from exponent tuples to nonzero rationals,
//! together with an ordered list of variable names (at most five per
//! context). Two polynomials compare equal iff they have the same variable
//! list and the same term map. Display and parsing use graded-lexicographic
//! term order with coefficients rendered as `p/q`.

use crate::rational::{fmt_rat, parse_rat, Rational};
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

pub const MAX_VARS: usize = 5;

/// Exponent tuple of a monomial; the active length is fixed by the ambient
/// variable list.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
    n: u8,
}

impl Monomial {
    pub fn new(exps: &[u16]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut e = [0u16; MAX_VARS];
        e[..exps.len()].copy_from_slice(exps);
        Monomial {
            exps: e,
            n: exps.len() as u8,
        }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial::new(&vec![0; nvars])
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        let mut e = vec![0u16; nvars];
        e[i] = 1;
        Monomial::new(&e)
    }

    pub fn nvars(&self) -> usize {
        self.n as usize
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps[..self.n as usize]
    }

    pub fn exp(&self, i: usize) -> u16 {
        assert!(i < self.nvars());
        self.exps[i]
    }

    pub fn total_degree(&self) -> u32 {
        self.exps().iter().map(|&e| e as u32).sum()
    }

    /// Total degree in a subset of the variables.
    pub fn degree_in(&self, subset: &[usize]) -> u32 {
        subset.iter().map(|&i| self.exps[i] as u32).sum()
    }

    /// Weighted degree `sum m_i w_i`; panics on length mismatch.
    pub fn weighted_degree(&self, w: &[i64]) -> i64 {
        assert_eq!(w.len(), self.nvars(), "weight/variable length mismatch");
        self.exps()
            .iter()
            .zip(w)
            .map(|(&e, &wi)| e as i64 * wi)
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.n, other.n);
        let mut e = self.exps;
        for i in 0..self.nvars() {
            e[i] += other.exps[i];
        }
        Monomial { exps: e, n: self.n }
    }

    pub fn is_one(&self) -> bool {
        self.exps().iter().all(|&e| e == 0)
    }

    /// Removes variable `i` from the tuple (the exponent there must be 0
    /// unless `force` semantics are handled by the caller).
    fn drop_index(&self, i: usize) -> Monomial {
        let mut e = Vec::with_capacity(self.nvars() - 1);
        for (j, &x) in self.exps().iter().enumerate() {
            if j != i {
                e.push(x);
            }
        }
        Monomial::new(&e)
    }
}

impl Ord for Monomial {
    // graded-lexicographic
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps().cmp(other.exps()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Result of a quasi-homogeneity test. The zero polynomial is quasi-homogeneous
/// of every degree and reported by the distinguished `Any` value; callers must
/// branch on it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QhDegree {
    Any,
    Deg(i64),
    No,
}

impl QhDegree {
    pub fn degree(&self) -> Option<i64> {
        match self {
            QhDegree::Deg(d) => Some(*d),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(vars: &[&str]) -> Self {
        Poly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn zero_owned(vars: Vec<String>) -> Self {
        Poly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], c: Rational) -> Self {
        let mut p = Poly::zero(vars);
        p.add_term(Monomial::one(vars.len()), c);
        p
    }

    pub fn var(vars: &[&str], i: usize) -> Self {
        let mut p = Poly::zero(vars);
        p.add_term(Monomial::var(i, vars.len()), Rational::one());
        p
    }

    pub fn monomial(vars: &[&str], exps: &[u16], c: Rational) -> Self {
        let mut p = Poly::zero(vars);
        p.add_term(Monomial::new(exps), c);
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff_of_exps(&self, exps: &[u16]) -> Rational {
        self.coeff(&Monomial::new(exps))
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        assert_eq!(m.nvars(), self.nvars(), "monomial arity mismatch");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn assert_same_vars(&self, other: &Poly) {
        assert_eq!(self.vars, other.vars, "variable list mismatch");
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.assert_same_vars(other);
        let mut r = self.clone();
        for (m, c) in other.terms() {
            r.add_term(*m, c.clone());
        }
        r
    }

    pub fn neg(&self) -> Poly {
        let mut r = self.clone();
        for c in r.terms.values_mut() {
            *c = -c.clone();
        }
        r
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.assert_same_vars(other);
        let mut r = Poly::zero_owned(self.vars.clone());
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero_owned(self.vars.clone());
        }
        let mut r = self.clone();
        for v in r.terms.values_mut() {
            *v *= c;
        }
        r
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut r = Poly::constant(
            &self.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            Rational::one(),
        );
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn degree_in_var(&self, i: usize) -> u16 {
        self.terms.keys().map(|m| m.exp(i)).max().unwrap_or(0)
    }

    /// Weighted degree of the polynomial (max over terms); None for zero.
    pub fn weighted_degree(&self, w: &[i64]) -> Option<i64> {
        self.terms.keys().map(|m| m.weighted_degree(w)).max()
    }

    /// Tests quasi-homogeneity under the given weights and reports the shared
    /// degree when there is one.
    pub fn is_quasi_homogeneous(&self, w: &[i64]) -> QhDegree {
        let mut deg = None;
        for m in self.terms.keys() {
            let d = m.weighted_degree(w);
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return QhDegree::No,
                _ => {}
            }
        }
        match deg {
            None => QhDegree::Any,
            Some(d) => QhDegree::Deg(d),
        }
    }

    /// Sub-sum of terms of minimal weighted degree, with that degree.
    /// Panics on the zero polynomial (there is no lowest part).
    pub fn lowest_weight_part(&self, w: &[i64]) -> (Poly, i64) {
        assert!(!self.is_zero(), "lowest weight part of zero polynomial");
        let dmin = self
            .terms
            .keys()
            .map(|m| m.weighted_degree(w))
            .min()
            .unwrap();
        let mut p = Poly::zero_owned(self.vars.clone());
        for (m, c) in self.terms() {
            if m.weighted_degree(w) == dmin {
                p.add_term(*m, c.clone());
            }
        }
        (p, dmin)
    }

    /// Formal partial derivative.
    pub fn partial_derivative(&self, i: usize) -> Poly {
        let mut r = Poly::zero_owned(self.vars.clone());
        for (m, c) in self.terms() {
            let e = m.exp(i);
            if e > 0 {
                let mut exps = m.exps().to_vec();
                exps[i] = e - 1;
                r.add_term(Monomial::new(&exps), c * Rational::from_integer((e as i64).into()));
            }
        }
        r
    }

    /// Sets variable `i` to 1; the result lives over the remaining variables.
    pub fn substitute_unit(&self, i: usize) -> Poly {
        let vars: Vec<String> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v.clone())
            .collect();
        let mut r = Poly::zero_owned(vars);
        for (m, c) in self.terms() {
            let mut exps = m.exps().to_vec();
            exps[i] = 0;
            r.add_term(Monomial::new(&exps).drop_index(i), c.clone());
        }
        r
    }

    /// Sets variable `i` to 0 (keeps the variable list).
    pub fn set_var_zero(&self, i: usize) -> Poly {
        let mut r = Poly::zero_owned(self.vars.clone());
        for (m, c) in self.terms() {
            if m.exp(i) == 0 {
                r.add_term(*m, c.clone());
            }
        }
        r
    }

    /// Drops variable `i` from the list; every term must have exponent 0 there.
    pub fn drop_var(&self, i: usize) -> Poly {
        assert_eq!(self.degree_in_var(i), 0, "variable still present");
        let vars: Vec<String> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v.clone())
            .collect();
        let mut r = Poly::zero_owned(vars);
        for (m, c) in self.terms() {
            r.add_term(m.drop_index(i), c.clone());
        }
        r
    }

    /// Keeps only terms supported on the subset (all other variables set to 0).
    pub fn restrict_to(&self, subset: &[usize]) -> Poly {
        let mut r = self.clone();
        for i in 0..self.nvars() {
            if !subset.contains(&i) {
                r = r.set_var_zero(i);
            }
        }
        r
    }

    /// True iff every monomial has total degree >= k in the chosen variables,
    /// i.e. the polynomial lies in the k-th power of the ideal they generate.
    pub fn ideal_power_membership(&self, subset: &[usize], k: u32) -> bool {
        self.terms.keys().all(|m| m.degree_in(subset) >= k)
    }

    /// Sum of terms of total degree exactly `k` in the subset variables.
    pub fn graded_part(&self, subset: &[usize], k: u32) -> Poly {
        let mut r = Poly::zero_owned(self.vars.clone());
        for (m, c) in self.terms() {
            if m.degree_in(subset) == k {
                r.add_term(*m, c.clone());
            }
        }
        r
    }

    /// Substitutes variable `i` by the polynomial `g` (over the same variable
    /// list). Used for graded coordinate changes `x_i -> x_i + h`.
    pub fn substitute(&self, i: usize, g: &Poly) -> Poly {
        self.assert_same_vars(g);
        let mut r = Poly::zero_owned(self.vars.clone());
        // group by exponent of x_i to reuse powers
        let max_e = self.degree_in_var(i);
        let mut powers: Vec<Poly> = Vec::with_capacity(max_e as usize + 1);
        powers.push(Poly::constant(
            &self.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            Rational::one(),
        ));
        for k in 1..=max_e {
            let prev = powers[(k - 1) as usize].clone();
            powers.push(prev.mul(g));
        }
        for (m, c) in self.terms() {
            let e = m.exp(i);
            let mut exps = m.exps().to_vec();
            exps[i] = 0;
            let base = Poly::monomial(
                &self.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
                &exps,
                c.clone(),
            );
            r = r.add(&base.mul(&powers[e as usize]));
        }
        r
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars());
        let mut acc = Rational::zero();
        for (m, c) in self.terms() {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// If the polynomial (homogeneous cubic under unit weights, <= 3 active
    /// variables) is the cube of a linear form over the complex numbers,
    /// returns the representative normalized to coefficient 1 on the first
    /// variable that occurs. The scalar making the identity exact need not be
    /// a rational cube, so the test compares `c == mu * l^3` with `mu` the
    /// first pure-cube coefficient.
    pub fn is_cube_of_linear_form(&self) -> Option<Poly> {
        if self.is_zero() {
            return None;
        }
        let n = self.nvars();
        let unit_w = vec![1i64; n];
        if self.is_quasi_homogeneous(&unit_w) != QhDegree::Deg(3) {
            return None;
        }
        // find first variable with nonzero cube coefficient
        let mut pivot = None;
        for i in 0..n {
            let mut exps = vec![0u16; n];
            exps[i] = 3;
            if !self.coeff_of_exps(&exps).is_zero() {
                pivot = Some(i);
                break;
            }
        }
        let i = pivot?;
        let mut cube_exps = vec![0u16; n];
        cube_exps[i] = 3;
        let mu = self.coeff_of_exps(&cube_exps);
        let vars: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        let mut ell = Poly::var(&vars, i);
        for j in 0..n {
            if j == i {
                continue;
            }
            let mut exps = vec![0u16; n];
            exps[i] = 2;
            exps[j] = 1;
            let cij = self.coeff_of_exps(&exps);
            let lam = cij / (Rational::from_integer(3.into()) * &mu);
            if !lam.is_zero() {
                let mut t = Poly::var(&vars, j);
                t = t.scale(&lam);
                ell = ell.add(&t);
            }
        }
        let cube = ell.pow(3).scale(&mu);
        if &cube == self {
            Some(ell)
        } else {
            None
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_one() {
                parts.push(fmt_rat(&mag));
            }
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(self.vars[i].clone()),
                    _ => parts.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Parses the textual polynomial format over the given variable list.
/// Grammar per term: `[coeff *] name[^exp] [* name[^exp]]*`, terms joined by
/// `+`/`-`; coefficients are `p/q` or integers.
pub fn parse_poly(input: &str, vars: &[&str]) -> Result<Poly, String> {
    let mut p = Poly::zero(vars);
    let s = input.trim();
    if s.is_empty() || s == "0" {
        return Ok(p);
    }
    // split into signed terms at top level
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut sign_neg = false;
    let mut started = false;
    for ch in s.chars() {
        match ch {
            '+' | '-' if started && !cur.trim().is_empty() => {
                terms.push((sign_neg, cur.clone()));
                cur.clear();
                sign_neg = ch == '-';
            }
            '-' if !started || cur.trim().is_empty() => {
                sign_neg = !sign_neg;
                started = true;
            }
            '+' if !started || cur.trim().is_empty() => {
                started = true;
            }
            _ => {
                if !ch.is_whitespace() {
                    started = true;
                }
                cur.push(ch);
            }
        }
    }
    if !cur.trim().is_empty() {
        terms.push((sign_neg, cur));
    }
    for (neg, t) in terms {
        let mut coeff = Rational::one();
        let mut exps = vec![0u16; vars.len()];
        for factor in t.split('*') {
            let factor = factor.trim();
            if factor.is_empty() {
                return Err(format!("empty factor in term `{}`", t));
            }
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => {
                    let e: u16 = e
                        .trim()
                        .parse()
                        .map_err(|_| format!("bad exponent in `{}`", factor))?;
                    (n.trim(), e)
                }
                None => (factor, 1),
            };
            if name
                .chars()
                .next()
                .map(|c| c.is_ascii_digit() || c == '-' || c == '/')
                .unwrap_or(false)
            {
                // numeric coefficient; exponent form like (3)^2 is not supported
                if exp != 1 {
                    return Err(format!("exponent on numeric coefficient in `{}`", factor));
                }
                let r =
                    parse_rat(name).ok_or_else(|| format!("bad coefficient `{}`", name))?;
                coeff *= r;
            } else {
                let idx = vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| format!("unknown variable `{}`", name))?;
                exps[idx] += exp;
            }
        }
        if neg {
            coeff = -coeff;
        }
        p.add_term(Monomial::new(&exps), coeff);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_i};

    #[test]
    fn weighted_degree_examples() {
        // x*y with w = (1,1,1,2,3)
        let m = Monomial::new(&[1, 1, 0, 0, 0]);
        assert_eq!(m.weighted_degree(&[1, 1, 1, 2, 3]), 2);
        // w^2 with weight 3 in slot 4
        let m = Monomial::new(&[0, 0, 0, 0, 2]);
        assert_eq!(m.weighted_degree(&[1, 1, 1, 2, 3]), 6);
        // t^3*u with wt(x,u,v,t,w) = (1,1,2,3,5): deg = 3*3 + 1 = 10
        let m = Monomial::new(&[0, 1, 0, 3, 0]);
        assert_eq!(m.weighted_degree(&[1, 1, 2, 3, 5]), 10);
    }

    #[test]
    fn quasi_homogeneity() {
        let vars = ["z", "t", "w"];
        let f = parse_poly("w^2 + t^4 + z^6", &vars).unwrap();
        assert_eq!(f.is_quasi_homogeneous(&[2, 3, 6]), QhDegree::Deg(12));
        let g = parse_poly("x + y^2", &["x", "y"]).unwrap();
        assert_eq!(g.is_quasi_homogeneous(&[1, 1]), QhDegree::No);
        let z = Poly::zero(&["x"]);
        assert_eq!(z.is_quasi_homogeneous(&[1]), QhDegree::Any);
    }

    #[test]
    fn lowest_weight_part_example() {
        // s^3 x^2 + u^3 + s^7 + s x^8 under wt(x,s,u) = (6,3,7) -> lowest 21
        let vars = ["x", "s", "u"];
        let f = parse_poly("s^3*x^2 + u^3 + s^7 + s*x^8", &vars).unwrap();
        let (low, d) = f.lowest_weight_part(&[6, 3, 7]);
        assert_eq!(d, 21);
        assert_eq!(low, parse_poly("s^3*x^2 + u^3 + s^7", &vars).unwrap());
    }

    #[test]
    fn derivative_and_ideal_membership() {
        let vars = ["z", "w"];
        let f = parse_poly("w^2*z", &vars).unwrap();
        assert_eq!(
            f.partial_derivative(1),
            parse_poly("2*w*z", &vars).unwrap()
        );
        let vars3 = ["y", "t", "w"];
        let g = parse_poly("w^2*y", &vars3).unwrap();
        assert!(g.ideal_power_membership(&[0, 1, 2], 3));
        assert!(!g.ideal_power_membership(&[0, 1, 2], 4));
    }

    #[test]
    fn cube_detection() {
        let vars = ["z", "t", "w"];
        let ell = parse_poly("z + t", &vars).unwrap();
        let c = ell.pow(3);
        let got = c.is_cube_of_linear_form().unwrap();
        assert_eq!(got, ell);
        let nc = parse_poly("w^2*z", &vars).unwrap();
        assert!(nc.is_cube_of_linear_form().is_none());
        let t3 = parse_poly("t^3", &vars).unwrap();
        assert_eq!(
            t3.is_cube_of_linear_form().unwrap(),
            parse_poly("t", &vars).unwrap()
        );
        // 2*x^3 is a cube over C
        let two = parse_poly("2*z^3", &vars).unwrap();
        assert!(two.is_cube_of_linear_form().is_some());
        // (z+t)^3 + w^3 is not
        let mixed = c.add(&parse_poly("w^3", &vars).unwrap());
        assert!(mixed.is_cube_of_linear_form().is_none());
    }

    #[test]
    fn display_and_parse_roundtrip() {
        let vars = ["t", "u", "w"];
        let f = parse_poly("w^2 + 3/2*t^3*u - u", &vars).unwrap();
        let s = f.to_string();
        let g = parse_poly(&s, &vars).unwrap();
        assert_eq!(f, g);
        assert_eq!(f.coeff_of_exps(&[3, 1, 0]), rat(3, 2));
        assert_eq!(f.coeff_of_exps(&[0, 1, 0]), rat_i(-1));
    }
}
