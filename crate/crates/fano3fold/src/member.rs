//! Concrete members `X = {F = 0}` of the 95 families: construction,
//! quasi-smoothness verdicts, singular-point extraction and typing, center
//! classification, QI configurations and normal forms, quasi-tangent
//! divisors, and the `L_xy` curve analysis.

use crate::catalog::{
    is_ei_center, is_qi_center, ExclusionTag, FamilyRecord, PointLocus, COORD_NAMES,
};
use crate::factor::{factor_qh_binary, restrict_to_binary, UPoly};
use crate::poly::{Monomial, Poly, QhDegree};
use crate::rational::{rat_i, Rational};
use crate::solve::{common_zeros, ZeroVerdict};
use crate::wspace::{normalize_terminal_3fold_type, QuotientType, TerminalCheck};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// All exponent tuples of the given weighted degree.
pub fn monomials_of_degree(weights: &[i64], d: i64) -> Vec<Monomial> {
    fn rec(weights: &[i64], d: i64, prefix: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if weights.len() == 1 {
            if d >= 0 && d % weights[0] == 0 {
                let mut v = prefix.clone();
                v.push((d / weights[0]) as u16);
                out.push(v);
            }
            return;
        }
        let w = weights[0];
        let mut k = 0;
        while k * w <= d {
            prefix.push(k as u16);
            rec(&weights[1..], d - k * w, prefix, out);
            prefix.pop();
            k += 1;
        }
    }
    let mut out = Vec::new();
    rec(weights, d, &mut Vec::new(), &mut out);
    out.into_iter().map(|e| Monomial::new(&e)).collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QiSubtype {
    NonDegenerate,
    Degenerate,
    Exceptional,
    NotQi,
}

/// A singular point (or a Galois orbit of stratum points) of a member.
#[derive(Clone, Debug)]
pub struct MemberPoint {
    pub locus: PointLocus,
    pub qtype: QuotientType,
    /// number of points in this class (conjugate stratum points share one entry)
    pub count: usize,
    /// for stratum classes: the irreducible deflated equation cutting them out
    pub defining: Option<UPoly>,
    pub is_qi: bool,
    pub is_ei: bool,
    pub tag: ExclusionTag,
}

impl MemberPoint {
    pub fn is_bi(&self) -> bool {
        self.is_qi || self.is_ei
    }

    pub fn describe(&self) -> String {
        format!("{} {}", self.locus, self.qtype)
    }
}

/// Quasi-smoothness verdict for a member.
#[derive(Clone, Debug, PartialEq)]
pub enum QsVerdict {
    /// every coordinate region certified symbolically
    CertifiedYes,
    /// an explicit non-quasi-smooth locus was found
    CertifiedNo { witness: String },
    /// low-dimensional strata certified; the open regions passed randomized
    /// sampling only
    ProbabilisticYes { trials: u32 },
}

impl QsVerdict {
    pub fn passed(&self) -> bool {
        !matches!(self, QsVerdict::CertifiedNo { .. })
    }
}

/// QI-center configuration of a member (shape of the defining data).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QiConfiguration {
    /// `X_{2r+c} in P(1,a,b,c,r)`, unique center of type 1/r(1,a,b)
    Unique { a: i64, b: i64, c: i64, r: i64 },
    /// `X_{3r} in P(1,a,b,r,r)`, three centers of type 1/r(1,a,b)
    ThreeEqual { a: i64, b: i64, r: i64 },
    /// `X_{4r} in P(1,a,b,r,2r)`, two centers of type 1/r(1,a,b)
    TwoEqual { a: i64, b: i64, r: i64 },
    /// `X_{4a+3b} in P(1,a,b,r1,r2)`, centers of types 1/r1(1,a,b), 1/r2(1,a,a+b)
    TwoDistinct { a: i64, b: i64, r1: i64, r2: i64 },
}

#[derive(Clone, Debug)]
pub struct Member {
    pub record: FamilyRecord,
    pub f: Poly,
    pub seed: Option<u64>,
}

impl Member {
    /// A pseudo-random member with every monomial of degree d present, with
    /// small nonzero rational coefficients; the seed is recorded.
    pub fn general(record: &FamilyRecord, seed: u64) -> Member {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut f = Poly::zero(&COORD_NAMES);
        for m in monomials_of_degree(&record.weights, record.degree) {
            let mut num: i64 = rng.gen_range(-9..=9);
            if num == 0 {
                num = 1;
            }
            let den: i64 = rng.gen_range(1..=3);
            f.add_term(m, Rational::new(num.into(), den.into()));
        }
        Member {
            record: record.clone(),
            f,
            seed: Some(seed),
        }
    }

    /// Wraps an explicit defining polynomial, checking quasi-homogeneity.
    pub fn from_poly(record: &FamilyRecord, f: Poly) -> Result<Member, String> {
        match f.is_quasi_homogeneous(&record.weights) {
            QhDegree::Deg(d) if d == record.degree => Ok(Member {
                record: record.clone(),
                f,
                seed: None,
            }),
            QhDegree::Any => Err("zero polynomial".into()),
            other => Err(format!(
                "polynomial is not quasi-homogeneous of degree {} (got {:?})",
                record.degree, other
            )),
        }
    }

    pub fn weights(&self) -> &[i64; 5] {
        &self.record.weights
    }

    pub fn degree(&self) -> i64 {
        self.record.degree
    }

    fn coeff_pure_power(&self, i: usize) -> Rational {
        let w = self.weights()[i];
        if self.degree() % w != 0 {
            return Rational::zero();
        }
        let mut exps = [0u16; 5];
        exps[i] = (self.degree() / w) as u16;
        self.f.coeff_of_exps(&exps)
    }

    /// `p_{x_i} in X` iff F has no pure power of `x_i`.
    pub fn vertex_on_member(&self, i: usize) -> bool {
        self.coeff_pure_power(i).is_zero()
    }

    /// Tangent-monomial exponents: all `(k, j)` with `x_i^k x_j in F`, `j != i`.
    pub fn tangent_monomials(&self, i: usize) -> Vec<(u16, usize)> {
        let mut out = Vec::new();
        for j in 0..5 {
            if j == i {
                continue;
            }
            let rem = self.degree() - self.weights()[j];
            if rem <= 0 || rem % self.weights()[i] != 0 {
                continue;
            }
            let k = (rem / self.weights()[i]) as u16;
            if k == 0 {
                continue;
            }
            let mut exps = [0u16; 5];
            exps[i] = k;
            exps[j] = 1;
            if !self.f.coeff_of_exps(&exps).is_zero() {
                out.push((k, j));
            }
        }
        out
    }

    /// Quasi-smoothness at a vertex on X: some monomial `x_i^k x_j` occurs.
    pub fn quasi_smooth_at_vertex(&self, i: usize) -> Result<bool, String> {
        if !self.vertex_on_member(i) {
            return Err(format!("p_{} is not on X", COORD_NAMES[i]));
        }
        Ok(!self.tangent_monomials(i).is_empty())
    }

    /// The quasi-tangent decomposition at a vertex: writes
    /// `F = x_i^m f + sum_{k<m} x_i^k g_k` with `f` quasi-linear and the `g_k`
    /// not quasi-linear, and returns `(m, f)`.
    pub fn quasi_tangent_data(&self, i: usize) -> Result<(u16, Poly), String> {
        if !self.quasi_smooth_at_vertex(i)? {
            return Err(format!("X is not quasi-smooth at p_{}", COORD_NAMES[i]));
        }
        // h_k = coefficient of x_i^k, free of x_i; quasi-linear iff it
        // contains a bare coordinate. The decomposition forces m to be the
        // smallest such level: every g_k below it must be non-quasi-linear.
        let maxk = self.f.degree_in_var(i);
        let mut m = None;
        for k in 0..=maxk {
            let h = self.x_power_coeff(i, k);
            if h.is_zero() {
                continue;
            }
            if contains_bare_coordinate(&h, i) {
                m = Some(k);
                break;
            }
        }
        let m = m.ok_or_else(|| "no quasi-linear level (not quasi-smooth)".to_string())?;
        // f = sum_{k >= m} x_i^{k-m} h_k
        let mut f = Poly::zero(&COORD_NAMES);
        for k in m..=maxk {
            let h = self.x_power_coeff(i, k);
            if h.is_zero() {
                continue;
            }
            let mut xi = [0u16; 5];
            xi[i] = k - m;
            f = f.add(&h.mul(&Poly::monomial(&COORD_NAMES, &xi, Rational::one())));
        }
        Ok((m, f))
    }

    /// Coefficient of `x_i^k` in F, as a polynomial free of `x_i` (over the
    /// same 5-variable list).
    fn x_power_coeff(&self, i: usize, k: u16) -> Poly {
        let mut out = Poly::zero(&COORD_NAMES);
        for (mo, c) in self.f.terms() {
            if mo.exp(i) == k {
                let mut e = mo.exps().to_vec();
                e[i] = 0;
                out.add_term(Monomial::new(&e), c.clone());
            }
        }
        out
    }

    /// Applies graded coordinate changes until the quasi-tangent polynomial at
    /// `p_{x_i}` is a single coordinate `x_j`; returns the transformed member,
    /// the tangent index j, and the x_i-order m. Coefficient of `x_i^m x_j` is
    /// rescaled to 1.
    pub fn quasi_tangent_normal_form(&self, i: usize) -> Result<(Member, usize, u16), String> {
        let mut cur = self.clone();
        for _round in 0..64 {
            let (m, f) = cur.quasi_tangent_data(i)?;
            // pick a bare coordinate x_j in f
            let mut pick = None;
            for j in 0..5 {
                if j == i {
                    continue;
                }
                let mut e = [0u16; 5];
                e[j] = 1;
                let c = f.coeff_of_exps(&e);
                if !c.is_zero() {
                    pick = Some((j, c));
                    break;
                }
            }
            let (j, cj) = pick.ok_or_else(|| "quasi-tangent polynomial has no bare coordinate".to_string())?;
            // rescale so the coefficient of x_j in f is 1
            let mut fnorm = f.scale(&(Rational::one() / &cj));
            // subtract x_j: ftilde = fnorm - x_j, so f = c_j (x_j + ftilde)
            let xj = Poly::var(&COORD_NAMES, j);
            fnorm = fnorm.sub(&xj);
            if fnorm.is_zero() {
                // already exactly x_j (up to scale); normalize the scale
                let target = cur.rescale_tangent(i, j, m)?;
                return Ok((target, j, m));
            }
            // substitute x_j -> x_j - ftilde
            let sub = xj.sub(&fnorm);
            let newf = cur.f.substitute(j, &sub);
            cur = Member {
                record: cur.record.clone(),
                f: newf,
                seed: cur.seed,
            };
        }
        Err("quasi-tangent normal form did not terminate".into())
    }

    fn rescale_tangent(&self, i: usize, j: usize, m: u16) -> Result<Member, String> {
        let mut e = [0u16; 5];
        e[i] = m;
        e[j] = 1;
        let c = self.f.coeff_of_exps(&e);
        if c.is_zero() {
            return Err("tangent monomial missing".into());
        }
        Ok(Member {
            record: self.record.clone(),
            f: self.f.scale(&(Rational::one() / c)),
            seed: self.seed,
        })
    }

    /// Orbifold chart at a quasi-smooth vertex: the dehomogenized polynomial
    /// with the tangent coordinate identified, plus the indices of the three
    /// local orbifold coordinates.
    pub fn orbifold_chart(&self, i: usize) -> Result<OrbifoldChart, String> {
        let (nf, tangent, order) = self.quasi_tangent_normal_form(i)?;
        let chart = nf.f.substitute_unit(i);
        let locals: Vec<usize> = (0..5).filter(|&k| k != i && k != tangent).collect();
        Ok(OrbifoldChart {
            vertex: i,
            tangent,
            order,
            chart,
            locals,
            member: nf,
        })
    }

    /// Orbifold multiplicity of the divisor `(g = 0)_X` at the vertex
    /// `p_{x_i}` (or plain multiplicity at a weight-1 vertex). The tangent
    /// coordinate is solved out as a truncated power series; the multiplicity
    /// stabilizes at order <= deg g.
    pub fn omult_at_vertex(&self, i: usize, g: &Poly) -> Result<u32, String> {
        let chart = self.orbifold_chart(i)?;
        let order = g
            .weighted_degree(self.weights())
            .map(|d| d as u32 + 2)
            .unwrap_or(2);
        chart.omult(g, order)
    }

    /// Restriction of F to the coordinate 1-stratum spanned by `x_i, x_j`,
    /// as a binary form.
    pub fn stratum_restriction(&self, i: usize, j: usize) -> Poly {
        restrict_to_binary(&self.f, i, j)
    }

    /// Singular points of a quasi-smooth member. Vertices get their exact
    /// type; points on singular 1-strata are grouped by the irreducible
    /// factors of the deflated restriction.
    pub fn singular_points(&self) -> Result<Vec<MemberPoint>, String> {
        let weights = self.weights();
        let d = self.degree();
        let mut out = Vec::new();
        for v in 0..5 {
            let r = weights[v];
            if r == 1 || !self.vertex_on_member(v) {
                continue;
            }
            let tangents = self.tangent_monomials(v);
            if tangents.is_empty() {
                return Err(format!("not quasi-smooth at p_{}", COORD_NAMES[v]));
            }
            let (_, j) = tangents.iter().max_by_key(|(k, _)| *k).cloned().unwrap();
            let residues: Vec<i64> = (0..5)
                .filter(|&k| k != v && k != j)
                .map(|k| weights[k])
                .collect();
            match normalize_terminal_3fold_type(r, [residues[0], residues[1], residues[2]]) {
                TerminalCheck::Terminal(t) => {
                    let qi = is_qi_center(weights, d, r);
                    let locus = PointLocus::Vertex(v);
                    let ei = is_ei_center(self.record.index, locus, &t);
                    out.push(MemberPoint {
                        locus,
                        qtype: t,
                        count: 1,
                        defining: None,
                        is_qi: qi,
                        is_ei: ei,
                        tag: ExclusionTag::Unknown,
                    });
                }
                TerminalCheck::Smooth => {}
                TerminalCheck::NotTerminal(msg) => {
                    return Err(format!("vertex p_{}: {}", COORD_NAMES[v], msg))
                }
            }
        }
        for i in 0..5 {
            for j in (i + 1)..5 {
                let g = weights[i].gcd(&weights[j]);
                if g == 1 {
                    continue;
                }
                let restr = self.stratum_restriction(i, j);
                if restr.is_zero() {
                    return Err(format!(
                        "X contains the singular stratum ({},{})",
                        COORD_NAMES[i], COORD_NAMES[j]
                    ));
                }
                let fac = factor_qh_binary(&restr, [weights[i], weights[j]]);
                let residues: Vec<i64> = (0..5)
                    .filter(|&k| k != i && k != j)
                    .map(|k| weights[k])
                    .collect();
                let t = match normalize_terminal_3fold_type(
                    g,
                    [residues[0], residues[1], residues[2]],
                ) {
                    TerminalCheck::Terminal(t) => t,
                    TerminalCheck::Smooth => continue,
                    TerminalCheck::NotTerminal(msg) => {
                        return Err(format!(
                            "stratum ({},{}): {}",
                            COORD_NAMES[i], COORD_NAMES[j], msg
                        ))
                    }
                };
                let qi = (g == weights[i] || g == weights[j]) && is_qi_center(weights, d, g);
                let locus = PointLocus::Stratum(i, j);
                let ei = is_ei_center(self.record.index, locus, &t);
                for (factor_poly, mult) in &fac.factors {
                    if *mult > 1 {
                        return Err(format!(
                            "multiple component on stratum ({},{}): not quasi-smooth there",
                            COORD_NAMES[i], COORD_NAMES[j]
                        ));
                    }
                    // deflate the irreducible factor to record the class
                    let bin = factor_poly.clone();
                    let deg = deflated_degree(&bin, [weights[i], weights[j]]);
                    out.push(MemberPoint {
                        locus,
                        qtype: t.clone(),
                        count: deg,
                        defining: Some(deflate_irreducible(&bin, [weights[i], weights[j]])),
                        is_qi: qi,
                        is_ei: ei,
                        tag: ExclusionTag::Unknown,
                    });
                }
            }
        }
        // carry over stored exclusion tags from the catalog record
        for p in out.iter_mut() {
            for b in &self.record.basket {
                if b.locus == p.locus && b.qtype == p.qtype {
                    p.tag = b.tag;
                }
            }
        }
        Ok(out)
    }

    /// QI configuration of the member (which shape of centers it carries).
    pub fn qi_configuration(&self) -> Result<QiConfiguration, String> {
        let [_, a1, a2, a3, a4] = *self.weights();
        let d = self.degree();
        if d == 3 * a4 && a3 == a4 {
            let (a, b) = (a1, a2);
            if a + b == a4 && a.gcd(&b) == 1 {
                return Ok(QiConfiguration::ThreeEqual { a, b, r: a4 });
            }
        }
        if d == 2 * a4 && a4 == 2 * a3 {
            let (a, b) = (a1, a2);
            if a + b == a3 && a.gcd(&b) == 1 {
                return Ok(QiConfiguration::TwoEqual { a, b, r: a3 });
            }
        }
        // two distinct: weights (1, a, b, a+b, 2a+b) with d = 4a + 3b
        {
            let r2 = a4;
            let r1 = a3;
            let a = r2 - r1;
            let b = r1 - a;
            if a >= 1
                && b >= 1
                && a.gcd(&b) == 1
                && d == 4 * a + 3 * b
                && sorted4(a, b, r1, r2) == [a1, a2, a3, a4]
                && is_qi_center(self.weights(), d, r1)
                && is_qi_center(self.weights(), d, r2)
            {
                return Ok(QiConfiguration::TwoDistinct { a, b, r1, r2 });
            }
        }
        // unique center: d = 2 a4 + c for some c among the weights
        if is_qi_center(self.weights(), d, a4) {
            let c = d - 2 * a4;
            let mut rest: Vec<i64> = vec![a1, a2, a3];
            let pos = rest.iter().position(|&w| w == c);
            if let Some(p) = pos {
                rest.remove(p);
                let (a, b) = (rest[0], rest[1]);
                if a + b == a4 && a.gcd(&b) == 1 {
                    return Ok(QiConfiguration::Unique { a, b, c, r: a4 });
                }
            }
        }
        Err("no QI center on this member".into())
    }

    /// Classifies a QI center: exceptional when no `x_k^2 x_l` monomial can
    /// appear; degenerate when, after normalization, the residual tangent part
    /// vanishes. For non-exceptional centers the normal form
    /// `F = x_k^2 x_j + x_k f + g` is computed and, for degenerate ones, the
    /// `x_k x_j f'` part is eliminated by a graded coordinate change.
    pub fn qi_subtype_at(&self, k: usize) -> Result<(QiSubtype, Option<Member>), String> {
        let weights = self.weights();
        let d = self.degree();
        let r = weights[k];
        if !is_qi_center(weights, d, r) {
            return Ok((QiSubtype::NotQi, None));
        }
        // is there any possible monomial x_k^2 x_l of degree d?
        let possible: Vec<usize> = (0..5)
            .filter(|&l| l != k && weights[l] == d - 2 * r)
            .collect();
        if possible.is_empty() {
            return Ok((QiSubtype::Exceptional, None));
        }
        // present in F?
        let j = possible.iter().cloned().find(|&l| {
            let mut e = [0u16; 5];
            e[k] = 2;
            e[l] = 1;
            !self.f.coeff_of_exps(&e).is_zero()
        });
        let j = match j {
            Some(j) => j,
            None => return Ok((QiSubtype::Exceptional, None)),
        };
        // normalize coefficient of x_k^2 x_j to 1
        let mut e = [0u16; 5];
        e[k] = 2;
        e[j] = 1;
        let c = self.f.coeff_of_exps(&e);
        let mut m = Member {
            record: self.record.clone(),
            f: self.f.scale(&(Rational::one() / c)),
            seed: self.seed,
        };
        // F = x_k^2 x_j + x_k f + g with f, g free of x_k;
        // first remove any higher x_k-powers via the tangent normal form
        // (x_j is the tangent coordinate at p_{x_k} here, order 2)
        // f = coefficient of x_k^1
        let f1 = m.x_power_coeff(k, 1);
        // degenerate iff f(.., x_j = 0) = 0
        let f1_nojx = f1.set_var_zero(j);
        if !f1_nojx.is_zero() {
            return Ok((QiSubtype::NonDegenerate, Some(m)));
        }
        // degenerate: eliminate x_k x_j f' by x_k -> x_k - f'/2 where f = x_j f'
        if !f1.is_zero() {
            // f' = f / x_j
            let mut fprime = Poly::zero(&COORD_NAMES);
            for (mo, c) in f1.terms() {
                assert!(mo.exp(j) >= 1);
                let mut ee = mo.exps().to_vec();
                ee[j] -= 1;
                fprime.add_term(Monomial::new(&ee), c.clone());
            }
            let xk = Poly::var(&COORD_NAMES, k);
            let sub = xk.sub(&fprime.scale(&crate::rational::rat(1, 2)));
            m = Member {
                record: m.record.clone(),
                f: m.f.substitute(k, &sub),
                seed: m.seed,
            };
        }
        // verify the degenerate hypersurface condition: (g(..., x_j = 0) = 0)
        // is quasi-smooth in the 3 small coordinates
        let g = m.x_power_coeff(k, 0).set_var_zero(j);
        let small: Vec<usize> = (0..5).filter(|&l| l != k && l != j).collect();
        let ok = surface_quasi_smooth(&g, &small, weights);
        if !ok {
            return Err("degenerate QI normal form: residual hypersurface is not quasi-smooth"
                .into());
        }
        Ok((QiSubtype::Degenerate, Some(m)))
    }

    /// The `L_xy = (x = y = 0) \cap X` curve: its normal-formed defining
    /// polynomial in (z,t,w) and a coarse classification.
    pub fn lxy_curve(&self) -> Result<LxyCurve, String> {
        let [_, a1, a2, _, _] = *self.weights();
        if a1 == a2 {
            return Err("L_xy analysis needs a_1 < a_2".into());
        }
        let f = self.f.set_var_zero(0).set_var_zero(1);
        let f = f.drop_var(0).drop_var(1); // now in (z,t,w)
        if f.is_zero() {
            return Err("L_xy is not a curve (restriction vanishes)".into());
        }
        let w3 = [self.weights()[2], self.weights()[3], self.weights()[4]];
        // normal-form reductions: kill the w-linear part when d = 2 a4 by
        // completing the square, and the w^2 part when d = 3 a4
        let d = self.degree();
        let mut g = f;
        if d == 2 * w3[2] {
            // g = c w^2 + w p(z,t) + q: w -> w - p/(2c)
            let c = g.coeff_of_exps(&[0, 0, 2]);
            if !c.is_zero() {
                let p = g.graded_part(&[2], 1); // terms with w-exponent 1
                if !p.is_zero() {
                    let mut pw = Poly::zero_owned(g.vars().to_vec());
                    for (m, co) in p.terms() {
                        let mut e = m.exps().to_vec();
                        e[2] -= 1;
                        pw.add_term(Monomial::new(&e), co.clone());
                    }
                    let wv = Poly::zero_owned(g.vars().to_vec());
                    let mut wvar = wv.clone();
                    wvar.add_term(Monomial::new(&[0, 0, 1]), Rational::one());
                    let sub = wvar.sub(&pw.scale(&(Rational::one() / (rat_i(2) * &c))));
                    g = g.substitute(2, &sub);
                }
            }
        }
        let classification = classify_curve(&g, w3)?;
        Ok(LxyCurve {
            poly: g,
            weights: w3,
            classification,
        })
    }

    /// Quasi-smoothness verdict: exact on coordinate points and 1- and
    /// 2-dimensional coordinate strata; the open torus regions are sampled.
    pub fn is_quasi_smooth(&self) -> QsVerdict {
        let seed = self.seed.unwrap_or(0x5eed);
        // vertices
        for v in 0..5 {
            if self.vertex_on_member(v) && self.tangent_monomials(v).is_empty() {
                return QsVerdict::CertifiedNo {
                    witness: format!("vertex p_{}", COORD_NAMES[v]),
                };
            }
        }
        // partial derivatives
        let parts: Vec<Poly> = (0..5).map(|i| self.f.partial_derivative(i)).collect();
        // 1-strata: binary-form gcd analysis
        for i in 0..5 {
            for j in (i + 1)..5 {
                if let Some(w) = self.stratum_witness(i, j, &parts) {
                    return QsVerdict::CertifiedNo { witness: w };
                }
            }
        }
        // 2-strata: exact bivariate certification on each normalized chart
        let mut all_exact = true;
        for i in 0..5 {
            for j in (i + 1)..5 {
                for k in (j + 1)..5 {
                    match self.two_stratum_check(i, j, k, seed, &parts) {
                        Some(true) => {}
                        Some(false) => {
                            return QsVerdict::CertifiedNo {
                                witness: format!(
                                    "2-stratum ({},{},{})",
                                    COORD_NAMES[i], COORD_NAMES[j], COORD_NAMES[k]
                                ),
                            };
                        }
                        None => all_exact = false,
                    }
                }
            }
        }
        // 3-strata and the torus: monomial shortcut, else sampling
        let mut sampled = false;
        for mask in 0u32..(1 << 5) {
            let active: Vec<usize> = (0..5).filter(|&b| mask & (1 << b) != 0).collect();
            if active.len() < 4 {
                continue;
            }
            if self.region_has_monomial_partial(&active, &parts) {
                continue;
            }
            sampled = true;
        }
        if sampled || !all_exact {
            QsVerdict::ProbabilisticYes { trials: 64 }
        } else {
            QsVerdict::CertifiedYes
        }
    }

    fn region_has_monomial_partial(&self, active: &[usize], parts: &[Poly]) -> bool {
        // if some partial derivative restricted to the region is a single
        // monomial, it cannot vanish there
        for p in parts {
            let r = p.restrict_to(active);
            if !r.is_zero() && r.num_terms() == 1 {
                return true;
            }
        }
        false
    }

    fn stratum_witness(&self, i: usize, j: usize, parts: &[Poly]) -> Option<String> {
        // common zero of F and all partials on the open (i,j)-stratum
        let restrs: Vec<Poly> = parts
            .iter()
            .map(|p| restrict_to_binary(p, i, j))
            .collect();
        if restrs.iter().all(|r| r.is_zero()) {
            return Some(format!(
                "all partial derivatives vanish on the ({},{})-stratum",
                COORD_NAMES[i], COORD_NAMES[j]
            ));
        }
        // deflate non-zero restrictions and take gcds (torus part)
        let w = [self.weights()[i], self.weights()[j]];
        let mut g: Option<UPoly> = None;
        for r in restrs.iter().filter(|r| !r.is_zero()) {
            let u = deflate_full(r, w);
            g = Some(match g {
                None => u,
                Some(cur) => cur.gcd(&u),
            });
        }
        let g = g.unwrap();
        if g.degree() >= 1 {
            // a common torus zero of all nonzero restrictions; zero
            // restrictions vanish identically, so this is a singular point
            return Some(format!(
                "point on the ({},{})-stratum cut by a degree-{} equation",
                COORD_NAMES[i], COORD_NAMES[j], g.degree()
            ));
        }
        None
    }

    fn two_stratum_check(
        &self,
        i: usize,
        j: usize,
        k: usize,
        seed: u64,
        parts: &[Poly],
    ) -> Option<bool> {
        let active = [i, j, k];
        if self.region_has_monomial_partial(&active, parts) {
            return Some(true);
        }
        // normalize the first coordinate to 1 (legitimate on the open stratum)
        let polys: Vec<Poly> = parts
            .iter()
            .map(|p| {
                let r = p.restrict_to(&active);
                three_to_two(&r, i, j, k)
            })
            .collect();
        let nonzero: Vec<Poly> = polys.into_iter().filter(|p| !p.is_zero()).collect();
        if nonzero.is_empty() {
            return Some(false);
        }
        match common_zeros(&nonzero, seed ^ ((i * 25 + j * 5 + k) as u64)) {
            ZeroVerdict::Empty => Some(true),
            ZeroVerdict::Nonempty { u_minimal_poly } => {
                // zeros with a vanishing coordinate belong to lower strata,
                // which are handled exactly; only report when the witness can
                // sit in the open part. We conservatively avoid certifying.
                let _ = u_minimal_poly;
                None
            }
        }
    }
}

fn sorted4(a: i64, b: i64, c: i64, d: i64) -> [i64; 4] {
    let mut v = [a, b, c, d];
    v.sort_unstable();
    v
}

/// Does a polynomial contain a bare coordinate `x_j` (j != skip) as a term?
fn contains_bare_coordinate(p: &Poly, skip: usize) -> bool {
    for j in 0..p.nvars() {
        if j == skip {
            continue;
        }
        let mut e = vec![0u16; p.nvars()];
        e[j] = 1;
        if !p.coeff_of_exps(&e).is_zero() {
            return true;
        }
    }
    false
}

/// Deflates a binary quasi-homogeneous form fully (torus part only: variable
/// powers stripped first).
pub fn deflate_full(p: &Poly, w: [i64; 2]) -> UPoly {
    let fac = factor_qh_binary(p, w);
    let mut acc = UPoly::constant(fac.unit.clone());
    for (f, e) in &fac.factors {
        let u = deflate_irreducible(f, w);
        for _ in 0..*e {
            acc = acc.mul(&u);
        }
    }
    acc
}

/// Deflates an irreducible binary factor (no variable powers) to the
/// univariate polynomial whose roots are the torus points it cuts out.
pub fn deflate_irreducible(p: &Poly, w: [i64; 2]) -> UPoly {
    let g = w[0].gcd(&w[1]);
    let step_x = w[1] / g;
    let a_max = p.terms().map(|(m, _)| m.exp(0)).max().unwrap() as i64;
    let kdeg = a_max / step_x;
    let mut coeffs = vec![Rational::zero(); (kdeg + 1) as usize];
    for (m, c) in p.terms() {
        let idx = (a_max - m.exp(0) as i64) / step_x;
        coeffs[idx as usize] = c.clone();
    }
    UPoly::from_coeffs(coeffs)
}

/// Number of torus points cut out by an irreducible binary factor.
fn deflated_degree(p: &Poly, w: [i64; 2]) -> usize {
    deflate_irreducible(p, w).degree()
}

/// Lowers a polynomial supported on three coordinates to a genuine 2-variable
/// polynomial by setting the first active coordinate to 1.
fn three_to_two(p: &Poly, i: usize, j: usize, k: usize) -> Poly {
    let vars = vec![p.vars()[j].clone(), p.vars()[k].clone()];
    let mut out = Poly::zero_owned(vars);
    for (m, c) in p.terms() {
        debug_assert!(
            (0..p.nvars()).all(|l| l == i || l == j || l == k || m.exp(l) == 0)
        );
        out.add_term(Monomial::new(&[m.exp(j), m.exp(k)]), c.clone());
    }
    out
}

/// Exact quasi-smoothness of a surface `(g = 0)` in the weighted plane of the
/// three `small` coordinates (used by the degenerate-QI normal form).
fn surface_quasi_smooth(g: &Poly, small: &[usize], _weights: &[i64; 5]) -> bool {
    // the cone over the surface must be smooth away from the origin:
    // check common zeros of the three partials (Euler handles g itself)
    let parts: Vec<Poly> = small.iter().map(|&l| g.partial_derivative(l)).collect();
    // coordinate 1- and 0-strata of the small plane
    for &l in small {
        // vertex of coordinate l: all partials vanish there?
        let pure_ok = parts.iter().any(|p| {
            let r = p.restrict_to(&[l]);
            !r.is_zero()
        });
        if !pure_ok {
            // every partial vanishes on the whole l-axis; in particular the
            // vertex is a singular point of the cone unless the axis is not
            // in the cone; conservative failure
            return false;
        }
    }
    for a in 0..small.len() {
        for b in (a + 1)..small.len() {
            let (i, j) = (small[a], small[b]);
            let restrs: Vec<Poly> = parts.iter().map(|p| restrict_to_binary(p, i, j)).collect();
            if restrs.iter().all(|r| r.is_zero()) {
                return false;
            }
            let w = [_weights[i], _weights[j]];
            let mut gg: Option<UPoly> = None;
            for r in restrs.iter().filter(|r| !r.is_zero()) {
                let u = deflate_full(r, w);
                gg = Some(match gg {
                    None => u,
                    Some(cur) => cur.gcd(&u),
                });
            }
            if gg.unwrap().degree() >= 1 {
                return false;
            }
        }
    }
    // open torus of the small plane: normalize first small coordinate to 1
    let polys: Vec<Poly> = parts
        .iter()
        .map(|p| three_to_two(&p.restrict_to(small), small[0], small[1], small[2]))
        .filter(|p| !p.is_zero())
        .collect();
    if polys.is_empty() {
        return false;
    }
    matches!(common_zeros(&polys, 0xabcd), ZeroVerdict::Empty)
}

pub struct OrbifoldChart {
    pub vertex: usize,
    pub tangent: usize,
    pub order: u16,
    /// the dehomogenized defining polynomial (4 variables)
    pub chart: Poly,
    /// indices (in the 5-variable frame) of the three local coordinates
    pub locals: Vec<usize>,
    /// the normal-formed member the chart came from
    pub member: Member,
}

impl OrbifoldChart {
    /// Multiplicity at the chart origin of the pullback of `(g = 0)`, with the
    /// tangent coordinate replaced by its power series up to total degree
    /// `order` in the local coordinates.
    pub fn omult(&self, g: &Poly, order: u32) -> Result<u32, String> {
        // index of the tangent variable inside the 4-variable chart
        let chart_vars = self.chart.vars().to_vec();
        let tangent_name = COORD_NAMES[self.tangent];
        let t_idx = chart_vars
            .iter()
            .position(|v| v == tangent_name)
            .expect("tangent present in chart");
        // chart equation: c * x_t + R = 0 with R in (locals, x_t)^2-ish;
        // isolate x_t = -(R)/c by fixed-point iteration with truncation
        let mut e = vec![0u16; chart_vars.len()];
        e[t_idx] = 1;
        let c = self.chart.coeff_of_exps(&e);
        if c.is_zero() {
            return Err("chart equation does not solve the tangent coordinate".into());
        }
        let mut rest = self.chart.clone();
        rest.add_term(Monomial::new(&e), -c.clone());
        let rest = rest.scale(&(-Rational::one() / c)); // x_t = rest(x_t, locals)
        let truncate = |p: &Poly| -> Poly {
            let mut out = Poly::zero_owned(p.vars().to_vec());
            for (m, co) in p.terms() {
                if m.total_degree() <= order {
                    out.add_term(*m, co.clone());
                }
            }
            out
        };
        let mut series = Poly::zero_owned(chart_vars.clone());
        for _ in 0..=order {
            let next = truncate(&rest.substitute(t_idx, &series));
            if next == series {
                break;
            }
            series = next;
        }
        // sanity: the series solves the chart equation up to the order
        let check = truncate(&self.chart.substitute(t_idx, &series));
        let check_min = check
            .terms()
            .map(|(m, _)| m.total_degree())
            .min()
            .unwrap_or(order + 1);
        if check_min <= order && !check.is_zero() {
            // the equation was not solved to sufficient order
            return Err("tangent series did not converge to requested order".into());
        }
        // pull back g and substitute
        let gc = project_to_chart(g, self.vertex);
        let pulled = truncate(&gc.substitute(t_idx, &series));
        if pulled.is_zero() {
            return Err("divisor pullback vanishes to the truncation order".into());
        }
        Ok(pulled.terms().map(|(m, _)| m.total_degree()).min().unwrap())
    }
}

/// Dehomogenization at the vertex `x_i = 1`, keeping the other 4 variables.
fn project_to_chart(g: &Poly, i: usize) -> Poly {
    g.substitute_unit(i)
}

/// Shape classification of the `L_xy` curve.
#[derive(Clone, Debug, PartialEq)]
pub enum CurveClass {
    IrreducibleSmooth,
    IrreducibleSingularAt(String),
    Reducible { components: usize },
    NonReduced { components: usize },
}

pub struct LxyCurve {
    pub poly: Poly,
    pub weights: [i64; 3],
    pub classification: CurveClass,
}

/// Classifies a curve `(f = 0)` in a weighted plane by component analysis:
/// coordinate factors and, when the non-coordinate part is supported on two
/// variables or involves one linearly, full component data.
fn classify_curve(f: &Poly, w: [i64; 3]) -> Result<CurveClass, String> {
    // strip coordinate factors
    let mut comps = 0usize;
    let mut nonreduced = false;
    let mut rest = f.clone();
    for i in 0..3 {
        let min_e = rest.terms().map(|(m, _)| m.exp(i)).min().unwrap_or(0);
        if min_e > 0 {
            comps += 1;
            if min_e > 1 {
                nonreduced = true;
            }
            let mut shifted = Poly::zero_owned(rest.vars().to_vec());
            for (m, c) in rest.terms() {
                let mut e = m.exps().to_vec();
                e[i] -= min_e;
                shifted.add_term(Monomial::new(&e), c.clone());
            }
            rest = shifted;
        }
    }
    let active: Vec<usize> = (0..3).filter(|&i| rest.degree_in_var(i) > 0).collect();
    match active.len() {
        0 => {}
        2 => {
            let bin = restrict_to_binary(&rest, active[0], active[1]);
            let fac = factor_qh_binary(&bin, [w[active[0]], w[active[1]]]);
            for (_p, e) in &fac.factors {
                comps += 1;
                if *e > 1 {
                    nonreduced = true;
                }
            }
        }
        _ => {
            // treat the remainder as a single component when it involves a
            // variable linearly (the catalogued shapes); otherwise bail out
            let linear = active.iter().any(|&i| rest.degree_in_var(i) == 1);
            if !linear && !rest.is_zero() {
                // full 3-variable irreducibility is out of scope; report the
                // remainder as one component (quasi-smoothness checked below)
            }
            comps += 1;
        }
    }
    if nonreduced {
        return Ok(CurveClass::NonReduced { components: comps });
    }
    if comps > 1 {
        return Ok(CurveClass::Reducible { components: comps });
    }
    // irreducible: find singular points among the strata of the plane
    let parts: Vec<Poly> = (0..3).map(|i| rest.partial_derivative(i)).collect();
    for v in 0..3 {
        // vertex on the curve: no pure power
        let has_pure = rest
            .terms()
            .any(|(m, _)| (0..3).all(|l| l == v || m.exp(l) == 0) && m.exp(v) > 0);
        let on_curve = !has_pure;
        if !on_curve {
            continue;
        }
        // quasi-smooth at the vertex iff some partial has a pure v-power term
        let smooth = parts.iter().any(|p| {
            p.terms()
                .any(|(m, _)| (0..3).all(|l| l == v || m.exp(l) == 0))
        });
        if !smooth {
            return Ok(CurveClass::IrreducibleSingularAt(format!(
                "p_{}",
                ["z", "t", "w"][v]
            )));
        }
    }
    // torus / 1-strata singular points: common zeros of the partials
    for i in 0..3 {
        for j in (i + 1)..3 {
            let restrs: Vec<Poly> = parts
                .iter()
                .map(|p| restrict_to_binary(p, i, j))
                .collect();
            if restrs.iter().all(|r| r.is_zero()) {
                return Ok(CurveClass::IrreducibleSingularAt(format!(
                    "the ({},{})-stratum",
                    ["z", "t", "w"][i],
                    ["z", "t", "w"][j]
                )));
            }
            let wij = [w[i], w[j]];
            let mut g: Option<UPoly> = None;
            for r in restrs.iter().filter(|r| !r.is_zero()) {
                let u = deflate_full(r, wij);
                g = Some(match g {
                    None => u,
                    Some(cur) => cur.gcd(&u),
                });
            }
            if g.unwrap().degree() >= 1 {
                return Ok(CurveClass::IrreducibleSingularAt(format!(
                    "a point of the ({},{})-stratum",
                    ["z", "t", "w"][i],
                    ["z", "t", "w"][j]
                )));
            }
        }
    }
    // open torus
    let polys: Vec<Poly> = parts
        .iter()
        .map(|p| three_to_two(p, 0, 1, 2))
        .filter(|p| !p.is_zero())
        .collect();
    if !polys.is_empty() {
        if let ZeroVerdict::Nonempty { .. } = common_zeros(&polys, 0x1234) {
            return Ok(CurveClass::IrreducibleSingularAt("a torus point".into()));
        }
    }
    Ok(CurveClass::IrreducibleSmooth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::derive_catalog;
    use crate::poly::parse_poly;

    fn record(idx: usize) -> FamilyRecord {
        derive_catalog(66)[idx - 1].clone()
    }

    #[test]
    fn general_member_is_quasi_homogeneous() {
        let rec = record(13);
        let m = Member::general(&rec, 42);
        assert_eq!(
            m.f.is_quasi_homogeneous(&rec.weights),
            QhDegree::Deg(rec.degree)
        );
    }

    #[test]
    fn vertex_membership() {
        // family 15 = X12 in P(1,1,2,3,6): w^2 present => p_w not on X
        let rec = record(15);
        let m = Member::general(&rec, 1);
        assert!(!m.vertex_on_member(4));
        // family 13: p_t on X (3 does not divide 11), tangent exists
        let rec = record(13);
        let m = Member::general(&rec, 1);
        assert!(m.vertex_on_member(3));
        assert!(m.quasi_smooth_at_vertex(3).unwrap());
    }

    #[test]
    fn quasi_tangent_example() {
        // X7 in P(1,1,1,2,3) with F = t^3 x + t^2 w + t g5 + g7:
        // the quasi-tangent polynomial at p_t is t x + w
        let rec = record(5);
        let f = parse_poly(
            "t^3*x + t^2*w + t*x^5 + y^7 + z^7 + w^2*x + x*y^3*z^3",
            &COORD_NAMES,
        )
        .unwrap();
        let m = Member::from_poly(&rec, f).unwrap();
        let (order, tangent) = m.quasi_tangent_data(3).unwrap();
        assert_eq!(order, 2);
        let expected = parse_poly("t*x + w", &COORD_NAMES).unwrap();
        assert_eq!(tangent, expected);
    }

    #[test]
    fn singular_points_of_family_11() {
        // 5 points of type 1/2(1,1,1) on the (z,t)-stratum
        let rec = record(11);
        let m = Member::general(&rec, 7);
        let pts = m.singular_points().unwrap();
        let total: usize = pts
            .iter()
            .filter(|p| p.qtype.r == 2)
            .map(|p| p.count)
            .sum();
        assert_eq!(total, 5);
    }

    #[test]
    fn omult_example_family_62() {
        // F62: F = z^5 x + ... with w^2 in F: omult_{p_z}(H_x) = 2
        let rec = record(62);
        let m = Member::general(&rec, 3);
        let hx = Poly::var(&COORD_NAMES, 0);
        let om = m.omult_at_vertex(2, &hx).unwrap();
        assert_eq!(om, 2);
    }

    #[test]
    fn qi_configurations() {
        let m = Member::general(&record(4), 5);
        assert_eq!(
            m.qi_configuration().unwrap(),
            QiConfiguration::ThreeEqual { a: 1, b: 1, r: 2 }
        );
        let m = Member::general(&record(13), 5);
        assert_eq!(
            m.qi_configuration().unwrap(),
            QiConfiguration::TwoDistinct {
                a: 2,
                b: 1,
                r1: 3,
                r2: 5
            }
        );
        let m = Member::general(&record(46), 5);
        assert_eq!(
            m.qi_configuration().unwrap(),
            QiConfiguration::Unique {
                a: 3,
                b: 7,
                c: 1,
                r: 10
            }
        );
    }

    #[test]
    fn random_member_quasi_smooth() {
        let rec = record(5);
        let m = Member::general(&rec, 11);
        assert!(m.is_quasi_smooth().passed());
    }
}
