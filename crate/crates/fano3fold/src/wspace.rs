//! Weighted projective spaces: well-formedness, well-formed models, cyclic
//! quotient singularity types, Kawamata blowup data, and divisors on weighted
//! planes (the different and well-formed models of quasi-homogeneous
//! polynomials).

use crate::factor::factor_qh_binary;
use crate::poly::{Monomial, Poly, QhDegree};
use crate::rational::{rat, rat_i, Rational};
use num_integer::Integer;
use num_traits::Zero;
use std::fmt;

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |a, &b| a.gcd(&b))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightedSpace {
    pub weights: Vec<i64>,
    pub names: Vec<String>,
}

impl WeightedSpace {
    pub fn new(weights: &[i64], names: &[&str]) -> Self {
        assert_eq!(weights.len(), names.len());
        assert!(weights.iter().all(|&w| w >= 1), "weights must be positive");
        WeightedSpace {
            weights: weights.to_vec(),
            names: names.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn with_default_names(weights: &[i64]) -> Self {
        const NAMES: [&str; 8] = ["x0", "x1", "x2", "x3", "x4", "x5", "x6", "x7"];
        let names: Vec<&str> = NAMES[..weights.len()].to_vec();
        WeightedSpace::new(weights, &names)
    }

    pub fn dim(&self) -> usize {
        self.weights.len() - 1
    }

    /// Every N-subset of the weights has gcd 1.
    pub fn is_well_formed(&self) -> bool {
        let n = self.weights.len();
        (0..n).all(|i| {
            let others: Vec<i64> = self
                .weights
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, &w)| w)
                .collect();
            gcd_all(&others) == 1
        })
    }

    /// The well-formed model, with the l/m/b data of the construction.
    /// Requires gcd of all weights to be 1.
    pub fn well_formed_model(&self) -> WellFormedModel {
        assert_eq!(
            gcd_all(&self.weights),
            1,
            "well-formed model needs coprime weights overall"
        );
        let n = self.weights.len();
        let l: Vec<i64> = (0..n)
            .map(|j| {
                let others: Vec<i64> = self
                    .weights
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, &w)| w)
                    .collect();
                gcd_all(&others)
            })
            .collect();
        let m: Vec<i64> = (0..n)
            .map(|j| {
                l.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, &lv)| lv)
                    .product()
            })
            .collect();
        let b: Vec<i64> = (0..n)
            .map(|j| {
                assert_eq!(self.weights[j] % m[j], 0, "b_j = a_j / m_j must be integral");
                self.weights[j] / m[j]
            })
            .collect();
        let target = WeightedSpace {
            weights: b.clone(),
            names: self.names.clone(),
        };
        WellFormedModel {
            source: self.clone(),
            l,
            m,
            b,
            target,
        }
    }
}

impl fmt::Display for WeightedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ws: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        write!(f, "P({})", ws.join(","))
    }
}

/// Parses `P(1,2,3,5,7)`.
pub fn parse_weighted_space(s: &str) -> Option<WeightedSpace> {
    let s = s.trim();
    let inner = s.strip_prefix("P(")?.strip_suffix(')')?;
    let weights: Option<Vec<i64>> = inner.split(',').map(|t| t.trim().parse().ok()).collect();
    let weights = weights?;
    if weights.is_empty() || weights.iter().any(|&w| w < 1) {
        return None;
    }
    Some(WeightedSpace::with_default_names(&weights))
}

#[derive(Clone, Debug)]
pub struct WellFormedModel {
    pub source: WeightedSpace,
    pub l: Vec<i64>,
    pub m: Vec<i64>,
    pub b: Vec<i64>,
    pub target: WeightedSpace,
}

/// Cyclic quotient singularity `1/r (a_1, ..., a_n)` with residues reduced
/// mod r. Terminal 3-fold types are normalized to the `1/r (1, a, r-a)`
/// pattern with `a <= r - a`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuotientType {
    pub r: i64,
    pub residues: Vec<i64>,
}

impl QuotientType {
    pub fn new(r: i64, residues: &[i64]) -> Self {
        assert!(r >= 1);
        let res: Vec<i64> = residues.iter().map(|&a| a.rem_euclid(r)).collect();
        QuotientType { r, residues: res }
    }

    pub fn is_isolated(&self) -> bool {
        self.residues.iter().all(|&a| a.gcd(&self.r) == 1)
    }
}

impl fmt::Display for QuotientType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rs: Vec<String> = self.residues.iter().map(|a| a.to_string()).collect();
        write!(f, "1/{}({})", self.r, rs.join(","))
    }
}

/// Parses `1/7(1,2,5)`.
pub fn parse_quotient_type(s: &str) -> Option<QuotientType> {
    let s = s.trim();
    let rest = s.strip_prefix("1/")?;
    let (r, tail) = rest.split_once('(')?;
    let r: i64 = r.trim().parse().ok()?;
    let inner = tail.strip_suffix(')')?;
    let residues: Option<Vec<i64>> = inner.split(',').map(|t| t.trim().parse().ok()).collect();
    Some(QuotientType::new(r, &residues?))
}

/// Verdict of the terminal-type normalization for 3-fold cyclic quotients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TerminalCheck {
    Smooth,
    Terminal(QuotientType),
    NotTerminal(String),
}

/// Normalizes `1/r (b_1, b_2, b_3)` to the pattern `1/r (1, a, r-a)` with
/// `gcd(a, r) = 1` by multiplying with a unit mod r, or reports the type as
/// non-terminal. The representative has residue 1 in the first slot and
/// `a <= r - a`.
pub fn normalize_terminal_3fold_type(r: i64, residues: [i64; 3]) -> TerminalCheck {
    if r == 1 {
        return TerminalCheck::Smooth;
    }
    let t = QuotientType::new(r, &residues);
    if !t.is_isolated() {
        return TerminalCheck::NotTerminal(format!(
            "residues {:?} not coprime to index {}",
            t.residues, r
        ));
    }
    for u in 1..r {
        if u.gcd(&r) != 1 {
            continue;
        }
        let mut v: Vec<i64> = t.residues.iter().map(|&a| (a * u).rem_euclid(r)).collect();
        v.sort_unstable();
        if v[0] == 1 && v[1] + v[2] == r {
            return TerminalCheck::Terminal(QuotientType {
                r,
                residues: vec![1, v[1], v[2]],
            });
        }
    }
    TerminalCheck::NotTerminal(format!(
        "no unit takes 1/{}{:?} to the (1,a,r-a) pattern",
        r, t.residues
    ))
}

/// Discrepancy `1/r` and exceptional-divisor cube `r^2 / (a (r-a))` of the
/// Kawamata blowup at a terminal `1/r (1, a, r-a)` point.
pub fn kawamata_blowup_data(t: &QuotientType) -> (Rational, Rational) {
    assert_eq!(t.residues.len(), 3);
    match normalize_terminal_3fold_type(t.r, [t.residues[0], t.residues[1], t.residues[2]]) {
        TerminalCheck::Terminal(n) => {
            let a = n.residues[1];
            let ra = n.residues[2];
            (rat(1, n.r), rat(n.r * n.r, a * ra))
        }
        TerminalCheck::Smooth => panic!("Kawamata blowup data of a smooth point"),
        TerminalCheck::NotTerminal(msg) => panic!("non-terminal input: {}", msg),
    }
}

/// A component of an effective Q-divisor on a weighted plane: either a
/// coordinate quasi-hyperplane or a curve cut by a quasi-homogeneous
/// polynomial in the well-formed coordinates.
#[derive(Clone, PartialEq, Debug)]
pub enum PlaneComponent {
    Hyperplane(usize),
    Curve(Poly),
}

#[derive(Clone, Debug)]
pub struct DivisorOnWeightedPlane {
    pub ambient: WeightedSpace,
    pub components: Vec<(PlaneComponent, Rational)>,
}

impl DivisorOnWeightedPlane {
    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn hyperplane_coeff(&self, i: usize) -> Rational {
        self.components
            .iter()
            .filter_map(|(k, c)| match k {
                PlaneComponent::Hyperplane(j) if *j == i => Some(c.clone()),
                _ => None,
            })
            .fold(Rational::zero(), |a, b| a + b)
    }
}

/// The different on the exceptional divisor of a weighted blowup with weights
/// `c`: coefficients `(m_i - 1)/m_i` on the coordinate quasi-hyperplanes of
/// the well-formed model, where `m_i = gcd` of the other entries.
pub fn different_on_exceptional(c: &[i64], names: &[&str]) -> DivisorOnWeightedPlane {
    assert_eq!(gcd_all(c), 1, "blowup weights must have gcd 1");
    let n = c.len();
    let space = WeightedSpace::new(c, names);
    let wf = space.well_formed_model();
    let mut components = Vec::new();
    for i in 0..n {
        let m = wf.m[i];
        if m > 1 {
            components.push((PlaneComponent::Hyperplane(i), rat(m - 1, m)));
        }
    }
    DivisorOnWeightedPlane {
        ambient: wf.target,
        components,
    }
}

/// Effective Q-divisor on the well-formed model of `P(c)` associated to a
/// quasi-homogeneous polynomial `f`: coordinate powers contribute fractional
/// quasi-hyperplane parts `lambda_i / m_i`, and the remaining irreducible
/// factors are rewritten in the well-formed coordinates.
///
/// Inputs in two variables are factored completely; a three-variable input is
/// accepted when, after removing coordinate factors, the remainder involves
/// some variable only linearly with a monomial coefficient (then it is
/// irreducible). Anything else is an unsupported shape.
pub fn wf_model_of_polynomial(f: &Poly, c: &[i64]) -> Result<DivisorOnWeightedPlane, String> {
    let n = f.nvars();
    assert_eq!(c.len(), n);
    match f.is_quasi_homogeneous(c) {
        QhDegree::No => return Err("input is not quasi-homogeneous".into()),
        QhDegree::Any => return Err("zero polynomial has no associated divisor".into()),
        QhDegree::Deg(_) => {}
    }
    let names: Vec<&str> = f.vars().iter().map(|s| s.as_str()).collect();
    let space = WeightedSpace::new(c, &names);
    let wf = space.well_formed_model();
    let mut components: Vec<(PlaneComponent, Rational)> = Vec::new();

    // extract coordinate powers
    let mut rest = f.clone();
    let mut lambda = vec![0u16; n];
    for i in 0..n {
        let min_e = rest.terms().map(|(m, _)| m.exp(i)).min().unwrap_or(0);
        if min_e > 0 {
            lambda[i] = min_e;
            let mut shifted = Poly::zero_owned(rest.vars().to_vec());
            for (m, coef) in rest.terms() {
                let mut e = m.exps().to_vec();
                e[i] -= min_e;
                shifted.add_term(Monomial::new(&e), coef.clone());
            }
            rest = shifted;
        }
    }
    for i in 0..n {
        if lambda[i] > 0 {
            components.push((
                PlaneComponent::Hyperplane(i),
                rat(lambda[i] as i64, wf.m[i]),
            ));
        }
    }

    // map exponents through x_i = xt_i^{1/m_i}
    let to_wf = |p: &Poly| -> Result<Poly, String> {
        let mut out = Poly::zero_owned(p.vars().to_vec());
        for (m, coef) in p.terms() {
            let mut e = Vec::with_capacity(n);
            for i in 0..n {
                let ei = m.exp(i) as i64;
                if ei % wf.m[i] != 0 {
                    return Err(format!(
                        "exponent {} of {} not divisible by m_i = {}",
                        ei,
                        p.vars()[i],
                        wf.m[i]
                    ));
                }
                e.push((ei / wf.m[i]) as u16);
            }
            out.add_term(Monomial::new(&e), coef.clone());
        }
        Ok(out)
    };

    if rest.num_terms() == 1 && rest.total_degree() == 0 {
        // pure monomial input: only hyperplane parts
        return Ok(DivisorOnWeightedPlane {
            ambient: wf.target,
            components,
        });
    }

    let active: Vec<usize> = (0..n).filter(|&i| rest.degree_in_var(i) > 0).collect();
    match active.len() {
        0 => {}
        1 => {
            return Err("single-variable remainder should have been a coordinate power".into());
        }
        2 => {
            // full binary factorization, then rewrite each factor
            let (i, j) = (active[0], active[1]);
            let binary = crate::factor::restrict_to_binary(&rest, i, j);
            let fac = factor_qh_binary(&binary, [c[i], c[j]]);
            debug_assert_eq!(fac.var_powers, [0, 0]);
            for (p2, e) in fac.factors {
                // lift the binary factor back to the n-variable list
                let mut lifted = Poly::zero_owned(f.vars().to_vec());
                for (m, coef) in p2.terms() {
                    let mut exps = vec![0u16; n];
                    exps[i] = m.exp(0);
                    exps[j] = m.exp(1);
                    lifted.add_term(Monomial::new(&exps), coef.clone());
                }
                let wfp = to_wf(&lifted)?;
                components.push((PlaneComponent::Curve(wfp), rat_i(e as i64)));
            }
        }
        3 => {
            // supported only when some variable occurs linearly with a
            // monomial coefficient; the remainder is then irreducible
            let mut linear_var = None;
            for &k in &active {
                if rest.degree_in_var(k) == 1 {
                    let coeff_part = rest.graded_part(&[k], 1);
                    // coefficient of x_k as a polynomial in the others
                    let mut mono_count = 0;
                    for (_m, _c) in coeff_part.terms() {
                        mono_count += 1;
                    }
                    if mono_count == 1 {
                        linear_var = Some(k);
                        break;
                    }
                }
            }
            if linear_var.is_none() {
                return Err(format!(
                    "unsupported shape: 3-variable remainder `{}` has no linear variable with monomial coefficient",
                    rest
                ));
            }
            let wfp = to_wf(&rest)?;
            components.push((PlaneComponent::Curve(wfp), rat_i(1)));
        }
        _ => return Err("more than 3 active variables".into()),
    }

    Ok(DivisorOnWeightedPlane {
        ambient: wf.target,
        components,
    })
}

/// Type of the ambient vertex `p_{x_i}` of a weighted space: the quotient by
/// the index `a_i` with the other weights as residues.
pub fn quotient_type_at_vertex(space: &WeightedSpace, i: usize) -> QuotientType {
    let r = space.weights[i];
    let residues: Vec<i64> = space
        .weights
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(_, &w)| w)
        .collect();
    QuotientType::new(r, &residues)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn well_formedness() {
        assert!(WeightedSpace::with_default_names(&[1, 1, 2, 3, 5]).is_well_formed());
        assert!(!WeightedSpace::with_default_names(&[6, 8, 9]).is_well_formed());
        assert!(WeightedSpace::with_default_names(&[2, 3, 5]).is_well_formed());
    }

    #[test]
    fn well_formed_models() {
        let cases: [(&[i64], &[i64]); 4] = [
            (&[6, 8, 9], &[1, 4, 3]),
            (&[3, 6, 7], &[1, 2, 9]),
            (&[6, 7, 9], &[2, 7, 9]),
            (&[8, 9, 12], &[2, 3, 1]),
        ];
        for (src, tgt) in cases {
            let wf = WeightedSpace::with_default_names(src).well_formed_model();
            assert_eq!(wf.target.weights, tgt.to_vec(), "wf model of {:?}", src);
            assert!(wf.target.is_well_formed());
            // idempotence
            let again = wf.target.well_formed_model();
            assert_eq!(again.target.weights, wf.target.weights);
        }
    }

    #[test]
    fn terminal_normalization() {
        match normalize_terminal_3fold_type(7, [1, 2, 5]) {
            TerminalCheck::Terminal(t) => assert_eq!(t.to_string(), "1/7(1,2,5)"),
            other => panic!("expected terminal, got {:?}", other),
        }
        match normalize_terminal_3fold_type(2, [1, 1, 1]) {
            TerminalCheck::Terminal(t) => assert_eq!(t.to_string(), "1/2(1,1,1)"),
            other => panic!("expected terminal, got {:?}", other),
        }
        assert!(matches!(
            normalize_terminal_3fold_type(4, [1, 2, 3]),
            TerminalCheck::NotTerminal(_)
        ));
    }

    #[test]
    fn kawamata_data() {
        let t = QuotientType::new(2, &[1, 1, 1]);
        assert_eq!(kawamata_blowup_data(&t), (rat(1, 2), rat_i(4)));
        let t = QuotientType::new(9, &[1, 4, 5]);
        assert_eq!(kawamata_blowup_data(&t), (rat(1, 9), rat(81, 20)));
        let t = QuotientType::new(11, &[1, 3, 8]);
        assert_eq!(kawamata_blowup_data(&t), (rat(1, 11), rat(121, 24)));
    }

    #[test]
    fn different_examples() {
        // c = (6,3,7): 2/3 on the u-hyperplane
        let d = different_on_exceptional(&[6, 3, 7], &["x", "s", "u"]);
        assert_eq!(d.components.len(), 1);
        assert_eq!(d.hyperplane_coeff(2), rat(2, 3));
        // c = (8,9,12): 2/3 on z and 3/4 on t
        let d = different_on_exceptional(&[8, 9, 12], &["z", "t", "w"]);
        assert_eq!(d.hyperplane_coeff(0), rat(2, 3));
        assert_eq!(d.hyperplane_coeff(1), rat(3, 4));
        // trivial case
        let d = different_on_exceptional(&[1, 1, 1], &["a", "b", "c"]);
        assert!(d.is_zero());
    }
}
