//! Factorization of univariate polynomials over the rationals and of binary
//! quasi-homogeneous forms.
//!
//! The univariate routine is deliberately classical: rational-root extraction,
//! Yun square-free decomposition, then Kronecker interpolation for the
//! remaining factors. Inputs in this crate have degree at most ~12 after
//! deflation, so exactness matters and speed does not.

use crate::poly::{Monomial, Poly};
use crate::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense univariate polynomial over the rationals; index = degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UPoly(pub Vec<Rational>);

impl UPoly {
    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn from_coeffs(mut v: Vec<Rational>) -> Self {
        while v.last().map(|c| c.is_zero()).unwrap_or(false) {
            v.pop();
        }
        UPoly(v)
    }

    pub fn constant(c: Rational) -> Self {
        UPoly::from_coeffs(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        if self.0.is_empty() {
            0
        } else {
            self.0.len() - 1
        }
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.0.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UPoly::from_coeffs(v)
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.0.len().max(other.0.len());
        let mut v = vec![Rational::zero(); n];
        for (i, a) in self.0.iter().enumerate() {
            v[i] += a;
        }
        for (i, b) in other.0.iter().enumerate() {
            v[i] += b;
        }
        UPoly::from_coeffs(v)
    }

    pub fn scale(&self, c: &Rational) -> UPoly {
        UPoly::from_coeffs(self.0.iter().map(|a| a * c).collect())
    }

    /// Exact division with remainder.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.0.clone();
        let dd = d.degree();
        let lead = d.leading();
        if rem.len() <= dd {
            return (UPoly::zero(), UPoly::from_coeffs(rem));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        while rem.len() > dd && !rem.is_empty() {
            let rdeg = rem.len() - 1;
            let c = rem[rdeg].clone();
            if c.is_zero() {
                rem.pop();
                continue;
            }
            let q = c / &lead;
            let shift = rdeg - dd;
            quot[shift] = q.clone();
            for i in 0..=dd {
                let v = &d.0[i] * &q;
                rem[shift + i] -= v;
            }
            rem.pop();
        }
        (UPoly::from_coeffs(quot), UPoly::from_coeffs(rem))
    }

    pub fn divides(&self, f: &UPoly) -> bool {
        let (_, r) = f.divrem(self);
        r.is_zero()
    }

    pub fn derivative(&self) -> UPoly {
        if self.0.len() <= 1 {
            return UPoly::zero();
        }
        let v = self
            .0
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
            .collect();
        UPoly::from_coeffs(v)
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let l = self.leading();
        self.scale(&(Rational::one() / l))
    }

    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Square-free decomposition: returns `[(g_1, 1), (g_2, 2), ...]` with
    /// `f = lc * prod g_i^i`, each `g_i` square-free and monic.
    pub fn squarefree_decomposition(&self) -> Vec<(UPoly, u32)> {
        let f = self.monic();
        if f.degree() == 0 {
            return Vec::new();
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.divrem(&a0).0;
        let mut c = df.divrem(&a0).0;
        let mut d = c.sub_poly(&b.derivative());
        let mut out = Vec::new();
        let mut i = 1u32;
        while b.degree() > 0 {
            let a = b.gcd(&d);
            if a.degree() > 0 {
                out.push((a.clone(), i));
            }
            b = b.divrem(&a).0;
            c = d.divrem(&a).0;
            d = c.sub_poly(&b.derivative());
            i += 1;
        }
        out
    }

    fn sub_poly(&self, other: &UPoly) -> UPoly {
        self.add(&other.scale(&-Rational::one()))
    }

    /// The square-free part (product of distinct irreducible factors).
    pub fn squarefree_part(&self) -> UPoly {
        let mut p = UPoly::constant(Rational::one());
        for (g, _) in self.squarefree_decomposition() {
            p = p.mul(&g);
        }
        p
    }

    /// Number of distinct complex roots.
    pub fn distinct_root_count(&self) -> usize {
        self.squarefree_part().degree()
    }
}

fn int_divisors(n: &BigInt) -> Vec<BigInt> {
    // positive divisors by trial division; inputs stay small in this crate
    let mut n = n.abs();
    if n.is_zero() {
        return vec![];
    }
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2);
    while (&d * &d) <= n {
        let mut e = 0u32;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            primes.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        primes.push((n, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs.dedup();
    divs
}

/// Rational roots of a polynomial with rational coefficients.
fn rational_roots(f: &UPoly) -> Vec<Rational> {
    if f.degree() == 0 {
        return vec![];
    }
    // clear denominators
    let mut lcm = BigInt::one();
    for c in &f.0 {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = f.0.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let a0 = ints.iter().find(|c| !c.is_zero()).unwrap().clone();
    let an = ints.last().unwrap().clone();
    let mut roots = Vec::new();
    // zero root
    if f.coeff(0).is_zero() {
        roots.push(Rational::zero());
    }
    for p in int_divisors(&a0) {
        for q in int_divisors(&an) {
            for sgn in [1i64, -1] {
                let cand = Rational::new(&p * BigInt::from(sgn), q.clone());
                if f.eval(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand.clone());
                }
            }
        }
    }
    roots
}

/// Kronecker factor search: returns a nontrivial monic factor of the
/// square-free, rational-root-free polynomial `f`, or None if irreducible.
fn kronecker_factor(f: &UPoly) -> Option<UPoly> {
    let n = f.degree();
    if n <= 3 {
        // no rational roots + degree <= 3 => irreducible
        return None;
    }
    // integerize
    let mut lcm = BigInt::one();
    for c in &f.0 {
        lcm = lcm.lcm(c.denom());
    }
    let fi: Vec<BigInt> = f
        .0
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let fint = UPoly::from_coeffs(fi.iter().map(|c| Rational::from_integer(c.clone())).collect());
    for m in 2..=(n / 2) {
        // evaluation points 0, 1, -1, 2, -2, ...
        let mut pts: Vec<Rational> = Vec::new();
        let mut k = 0i64;
        while pts.len() < m + 1 {
            let cand = Rational::from_integer(BigInt::from(k));
            if !fint.eval(&cand).is_zero() {
                pts.push(cand);
            }
            k = if k <= 0 { -k + 1 } else { -k };
        }
        let values: Vec<BigInt> = pts.iter().map(|x| fint.eval(x).to_integer()).collect();
        let divisor_lists: Vec<Vec<BigInt>> = values.iter().map(int_divisors).collect();
        // effort guard: inputs here are tiny; bail out loudly otherwise
        let combos: u128 = divisor_lists
            .iter()
            .map(|d| (d.len() * 2) as u128)
            .product();
        assert!(
            combos <= 4_000_000,
            "factorization effort exceeded (degree {} candidate)",
            n
        );
        for combo in 0..combos {
            let mut rest = combo;
            let mut vals: Vec<Rational> = Vec::with_capacity(m + 1);
            for list in &divisor_lists {
                let radix = (list.len() * 2) as u128;
                let digit = (rest % radix) as usize;
                rest /= radix;
                let v = list[digit / 2].clone();
                let v = if digit % 2 == 1 { -v } else { v };
                vals.push(Rational::from_integer(v));
            }
            if let Some(g) = lagrange_interpolate(&pts, &vals) {
                if g.degree() == m && !g.leading().is_zero() && g.divides(&fint) {
                    return Some(g.monic());
                }
            }
        }
    }
    None
}

/// Full factorization over the rationals: `f = unit * prod f_i^{e_i}` with the
/// `f_i` monic irreducible. Panics only if the (generous) Kronecker effort
/// bound is exceeded.
pub fn factor_univariate(f: &UPoly) -> (Rational, Vec<(UPoly, u32)>) {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let unit = f.leading();
    let mut out: Vec<(UPoly, u32)> = Vec::new();
    for (g, mult) in f.squarefree_decomposition() {
        // peel rational roots
        let mut g = g;
        loop {
            let roots = rational_roots(&g);
            if roots.is_empty() {
                break;
            }
            for r in roots {
                let lin = UPoly::from_coeffs(vec![-r.clone(), Rational::one()]);
                if lin.divides(&g) {
                    g = g.divrem(&lin).0;
                    merge_factor(&mut out, lin, mult);
                }
            }
        }
        // remaining square-free, root-free part
        let mut stack = vec![g];
        while let Some(h) = stack.pop() {
            if h.degree() == 0 {
                continue;
            }
            match kronecker_factor(&h) {
                None => merge_factor(&mut out, h.monic(), mult),
                Some(fac) => {
                    let q = h.divrem(&fac).0;
                    stack.push(fac);
                    stack.push(q);
                }
            }
        }
    }
    (unit, out)
}

fn merge_factor(out: &mut Vec<(UPoly, u32)>, f: UPoly, e: u32) {
    for (g, m) in out.iter_mut() {
        if *g == f {
            *m += e;
            return;
        }
    }
    out.push((f, e));
}

fn lagrange_interpolate(xs: &[Rational], ys: &[Rational]) -> Option<UPoly> {
    let n = xs.len();
    let mut acc = UPoly::zero();
    for i in 0..n {
        let mut basis = UPoly::constant(Rational::one());
        let mut denom = Rational::one();
        for j in 0..n {
            if i == j {
                continue;
            }
            basis = basis.mul(&UPoly::from_coeffs(vec![-xs[j].clone(), Rational::one()]));
            denom *= &xs[i] - &xs[j];
        }
        if denom.is_zero() {
            return None;
        }
        acc = acc.add(&basis.scale(&(ys[i].clone() / denom)));
    }
    Some(acc)
}

/// Factorization of a binary quasi-homogeneous form: monomial part plus
/// irreducible non-monomial quasi-homogeneous factors with multiplicities.
#[derive(Clone, Debug)]
pub struct QhFactorization {
    pub unit: Rational,
    /// exponent of each of the two variables factored out
    pub var_powers: [u16; 2],
    pub factors: Vec<(Poly, u32)>,
}

/// Deflates a binary quasi-homogeneous form to a univariate polynomial.
/// Returns `(h, var_powers, step_x, step_y, a_max)` where the term of `h` of
/// degree `i` corresponds to the monomial `x^(a_max - i*step_x) y^(b_min + i*step_y)`
/// after removing `x^vp0 y^vp1`.
fn deflate_binary(f: &Poly, w: [i64; 2]) -> (UPoly, [u16; 2], i64, i64) {
    assert_eq!(f.nvars(), 2);
    let vp0 = f.terms().map(|(m, _)| m.exp(0)).min().unwrap();
    let vp1 = f.terms().map(|(m, _)| m.exp(1)).min().unwrap();
    let g = num_integer::gcd(w[0], w[1]);
    let step_x = w[1] / g; // decrease in x-exponent per index
    let step_y = w[0] / g; // increase in y-exponent per index
    let a_max = f.terms().map(|(m, _)| m.exp(0)).max().unwrap() as i64 - vp0 as i64;
    debug_assert!(a_max % step_x == 0);
    let k = (a_max / step_x) as usize;
    let mut coeffs = vec![Rational::zero(); k + 1];
    for (m, c) in f.terms() {
        let a = m.exp(0) as i64 - vp0 as i64;
        let i = (a_max - a) / step_x;
        debug_assert_eq!((a_max - a) % step_x, 0);
        coeffs[i as usize] = c.clone();
    }
    (UPoly::from_coeffs(coeffs), [vp0, vp1], step_x, step_y)
}

/// Re-homogenizes a monic univariate factor of the deflation back to a binary
/// quasi-homogeneous polynomial.
fn inflate_factor(h: &UPoly, vars: &[String], step_x: i64, step_y: i64) -> Poly {
    let m = h.degree();
    let mut p = Poly::zero_owned(vars.to_vec());
    for (i, c) in h.0.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let a = ((m - i) as i64 * step_x) as u16;
        let b = (i as i64 * step_y) as u16;
        p.add_term(Monomial::new(&[a, b]), c.clone());
    }
    p
}

/// Factors a quasi-homogeneous polynomial in two variables over the rationals
/// into monomial factors and irreducible quasi-homogeneous factors. The result
/// multiplies back to the input exactly (asserted).
pub fn factor_qh_binary(f: &Poly, w: [i64; 2]) -> QhFactorization {
    assert_eq!(f.nvars(), 2, "need a binary form");
    assert!(!f.is_zero(), "cannot factor zero");
    assert!(
        f.is_quasi_homogeneous(&[w[0], w[1]]) != crate::poly::QhDegree::No,
        "input is not quasi-homogeneous"
    );
    let vars = f.vars().to_vec();
    let (h, var_powers, step_x, step_y) = deflate_binary(f, w);
    let (unit, uni_factors) = factor_univariate(&h);
    let mut factors: Vec<(Poly, u32)> = Vec::new();
    for (g, e) in uni_factors {
        factors.push((inflate_factor(&g, &vars, step_x, step_y), e));
    }
    let result = QhFactorization {
        unit,
        var_powers,
        factors,
    };
    // verify by multiplying back
    let mut check = Poly::zero_owned(vars);
    check.add_term(
        Monomial::new(&result.var_powers),
        result.unit.clone(),
    );
    for (p, e) in &result.factors {
        check = check.mul(&p.pow(*e));
    }
    assert_eq!(&check, f, "binary factorization verification failed");
    result
}

/// Restriction of a polynomial to the coordinate 2-plane spanned by variables
/// `i` and `j` (all other variables set to 0), as a binary form.
pub fn restrict_to_binary(f: &Poly, i: usize, j: usize) -> Poly {
    let keep = [i, j];
    let r = f.restrict_to(&keep);
    let vars = vec![f.vars()[i].clone(), f.vars()[j].clone()];
    let mut out = Poly::zero_owned(vars);
    for (m, c) in r.terms() {
        out.add_term(Monomial::new(&[m.exp(i), m.exp(j)]), c.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::rational::{rat_i, Rational};

    fn up(coeffs: &[i64]) -> UPoly {
        UPoly::from_coeffs(coeffs.iter().map(|&c| rat_i(c)).collect())
    }

    #[test]
    fn univariate_factor_basics() {
        // (s-1)^2 (s+2)
        let f = up(&[2, 3, 0, 1]);
        let (unit, fs) = factor_univariate(&f);
        assert_eq!(unit, rat_i(1));
        let mut total = UPoly::constant(unit);
        for (g, e) in &fs {
            for _ in 0..*e {
                total = total.mul(g);
            }
        }
        assert_eq!(total, f);
        assert_eq!(fs.len(), 2);
        // s^4 + 1 is irreducible over Q
        let g = up(&[1, 0, 0, 0, 1]);
        let (_, gs) = factor_univariate(&g);
        assert_eq!(gs.len(), 1);
        assert_eq!(gs[0].0.degree(), 4);
        // (s^2+1)(s^2+2)
        let h = up(&[2, 0, 3, 0, 1]);
        let (_, hs) = factor_univariate(&h);
        assert_eq!(hs.len(), 2);
    }

    #[test]
    fn binary_examples() {
        // t^3 z under wt (1,1): {t:3, z:1} as variable powers
        let f = parse_poly("t^3*z", &["t", "z"]).unwrap();
        let r = factor_qh_binary(&f, [1, 1]);
        assert_eq!(r.var_powers, [3, 1]);
        assert!(r.factors.is_empty());

        // t^2 - z^3 under wt(z,t) = (2,3) is irreducible
        let g = parse_poly("t^2 - z^3", &["z", "t"]).unwrap();
        let r = factor_qh_binary(&g, [2, 3]);
        assert_eq!(r.var_powers, [0, 0]);
        assert_eq!(r.factors.len(), 1);
        assert_eq!(r.factors[0].1, 1);

        // t (t - x^3)^2 shape: x^6 t - 2 x^3 t^2 + t^3 over wt(x,t) = (1,3)
        let h = parse_poly("x^6*t - 2*x^3*t^2 + t^3", &["x", "t"]).unwrap();
        let r = factor_qh_binary(&h, [1, 3]);
        assert_eq!(r.var_powers, [0, 1]);
        assert_eq!(r.factors.len(), 1);
        assert_eq!(r.factors[0].1, 2); // (t - x^3)^2
    }

    #[test]
    fn squarefree_counts() {
        let f = up(&[0, 0, 1]).mul(&up(&[-1, 1])); // s^2 (s-1)
        assert_eq!(f.distinct_root_count(), 2);
        assert_eq!(UPoly::from_coeffs(vec![Rational::one()]).distinct_root_count(), 0);
    }
}
