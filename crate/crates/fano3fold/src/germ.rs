//! Log canonical thresholds of planar germs at the origin by monomial
//! valuations.
//!
//! A germ here is a boundary pair on a smooth surface germ: fixed boundary
//! coefficients `beta_i` on the two coordinate axes, plus a divisor `c * D`
//! where `D` carries coefficients `lambda_i` on the axes and curve components
//! `(f_j, mu_j)` through the origin. For a primitive weight vector
//! `w = (w_1, w_2)` the valuation `E_w` imposes
//!
//! `c * (sum mu_j ord_w f_j + lambda . w) <= w_1 + w_2 - beta . w`,
//!
//! an upper bound for the threshold. The minimum over all weight vectors is
//! the exact threshold when the product of the components is Newton
//! nondegenerate (each compact edge polynomial square-free off the axes),
//! which is certified exactly; otherwise the result is flagged.

use crate::factor::factor_qh_binary;
use crate::poly::Poly;
use crate::rational::{rat_i, Rational};
use num_integer::Integer;
use num_traits::Zero;

#[derive(Clone, Debug)]
pub struct Germ {
    /// fixed boundary coefficients on the axes (each < 1)
    pub beta: [Rational; 2],
    /// axis coefficients of the scaled divisor
    pub lambda: [Rational; 2],
    /// curve components through the origin with multiplicities
    pub comps: Vec<(Poly, Rational)>,
}

#[derive(Clone, Debug)]
pub struct GermLct {
    /// minimum over monomial valuations (the threshold when `exact`; an upper
    /// bound otherwise); None when the germ imposes no constraint
    pub bound: Option<Rational>,
    /// true when the monomial-valuation minimum is provably the threshold
    pub exact: bool,
    /// a certified lower bound regardless of nondegeneracy (the multiplicity
    /// bound when the polygon is degenerate)
    pub sound_bound: Option<Rational>,
}

fn ord_w(p: &Poly, w: (i64, i64)) -> i64 {
    p.terms()
        .map(|(m, _)| m.exp(0) as i64 * w.0 + m.exp(1) as i64 * w.1)
        .min()
        .expect("component must be nonzero")
}

/// Support of the product of the (distinct) components.
fn product_support(comps: &[(Poly, Rational)]) -> Option<Poly> {
    if comps.is_empty() {
        return None;
    }
    let mut acc = comps[0].0.clone();
    for (p, _) in comps.iter().skip(1) {
        acc = acc.mul(p);
    }
    Some(acc)
}

/// Compact edges of the local Newton polygon (lower-left hull) with their
/// primitive inner normals.
fn newton_edges(p: &Poly) -> Vec<((i64, i64), Vec<(i64, i64)>)> {
    let mut pts: Vec<(i64, i64)> = p
        .terms()
        .map(|(m, _)| (m.exp(0) as i64, m.exp(1) as i64))
        .collect();
    pts.sort();
    pts.dedup();
    // lower-left staircase hull: keep points minimal in the product order,
    // then convexify
    let mut frontier: Vec<(i64, i64)> = Vec::new();
    for &(a, b) in &pts {
        if !pts.iter().any(|&(a2, b2)| (a2 <= a && b2 < b) || (a2 < a && b2 <= b)) {
            frontier.push((a, b));
        }
    }
    frontier.sort();
    // convex hull of the frontier from the point with max b (min a) to max a
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &frontier {
        while hull.len() >= 2 {
            let u = hull[hull.len() - 2];
            let v = hull[hull.len() - 1];
            // keep right turns (lower hull)
            let cross = (v.0 - u.0) * (pt.1 - u.1) - (v.1 - u.1) * (pt.0 - u.0);
            if cross >= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut edges = Vec::new();
    for win in hull.windows(2) {
        let (a1, b1) = win[0];
        let (a2, b2) = win[1];
        // inner normal (w1, w2) with w1 (a2-a1) + w2 (b2-b1) = 0, positive
        let da = a2 - a1;
        let db = b1 - b2; // positive
        let g = da.gcd(&db);
        if g == 0 {
            continue;
        }
        let w = (db / g, da / g);
        let members: Vec<(i64, i64)> = pts
            .iter()
            .cloned()
            .filter(|&(a, b)| a * w.0 + b * w.1 == a1 * w.0 + b1 * w.1)
            .collect();
        edges.push((w, members));
    }
    edges
}

/// Evaluates the germ threshold: minimum over monomial valuations, with an
/// exactness certificate from Newton nondegeneracy.
pub fn germ_lct(germ: &Germ) -> GermLct {
    for (p, _) in &germ.comps {
        assert!(!p.is_zero(), "zero component");
        assert!(
            p.terms().all(|(m, _)| m.total_degree() > 0),
            "component must pass through the origin"
        );
        // components must not be divisible by a coordinate (axes are carried
        // separately)
        for i in 0..2 {
            assert!(
                p.terms().any(|(m, _)| m.exp(i) == 0),
                "component divisible by a coordinate"
            );
        }
    }
    let product = product_support(&germ.comps);
    // candidate weight vectors: the edge normals of the product polygon plus
    // the axis-adjacent normals (1,1), (1,k), (k,1) up to the maximal degree;
    // a small exhaustive sweep keeps this safely complete
    let maxdeg: i64 = product
        .as_ref()
        .map(|p| p.total_degree() as i64 + 1)
        .unwrap_or(1)
        .max(2);
    let mut best: Option<Rational> = None;
    for w1 in 1..=maxdeg {
        for w2 in 1..=maxdeg {
            if w1.gcd(&w2) != 1 {
                continue;
            }
            let mut a = &germ.lambda[0] * rat_i(w1) + &germ.lambda[1] * rat_i(w2);
            for (p, mu) in &germ.comps {
                a += mu * rat_i(ord_w(p, (w1, w2)));
            }
            if a.is_zero() || a < Rational::zero() {
                continue;
            }
            let b = rat_i(w1 + w2) - &germ.beta[0] * rat_i(w1) - &germ.beta[1] * rat_i(w2);
            let cand = b / a;
            best = Some(match best {
                None => cand,
                Some(cur) => cur.min(cand),
            });
        }
    }
    // nondegeneracy: every compact edge polynomial of the product is
    // square-free away from the axes
    let exact = match &product {
        None => true,
        Some(p) => newton_edges(p).into_iter().all(|(w, members)| {
            let mut edge = Poly::zero_owned(p.vars().to_vec());
            for (m, c) in p.terms() {
                if members.contains(&(m.exp(0) as i64, m.exp(1) as i64)) {
                    edge.add_term(*m, c.clone());
                }
            }
            if edge.num_terms() <= 1 {
                return true;
            }
            let fac = factor_qh_binary(&edge, [w.0, w.1]);
            fac.factors.iter().all(|(_, e)| *e == 1)
        }),
    };
    // multiplicity bound: (1 - beta_1 - beta_2) / mult_0(D) is always a lower
    // bound for the threshold
    let sound_bound = if exact {
        best.clone()
    } else {
        let mut mult = &germ.lambda[0] + &germ.lambda[1];
        for (p, mu) in &germ.comps {
            let m0 = p.terms().map(|(m, _)| m.total_degree()).min().unwrap();
            mult += mu * rat_i(m0 as i64);
        }
        if mult.is_zero() {
            None
        } else {
            Some((rat_i(1) - &germ.beta[0] - &germ.beta[1]) / mult)
        }
    };
    GermLct {
        bound: best,
        exact,
        sound_bound,
    }
}

/// Threshold of the germ of `x^a + y^b` at the origin with boundary
/// coefficient `beta` on `(y = 0)`: the catalogued binomial evaluator.
pub fn binomial_germ_lct(a: u32, b: u32, beta: &Rational) -> Rational {
    let vars = ["x", "y"];
    let mut p = Poly::zero(&vars);
    p.add_term(crate::poly::Monomial::new(&[a as u16, 0]), rat_i(1));
    p.add_term(crate::poly::Monomial::new(&[0, b as u16]), rat_i(1));
    let germ = Germ {
        beta: [Rational::zero(), beta.clone()],
        lambda: [Rational::zero(), Rational::zero()],
        comps: vec![(p, rat_i(1))],
    };
    let r = germ_lct(&germ);
    assert!(r.exact, "binomial germs are nondegenerate");
    r.bound.unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::rational::rat;

    #[test]
    fn cusp_lct() {
        // lct_0(A^2, x^2 + y^3) = 5/6
        assert_eq!(binomial_germ_lct(2, 3, &Rational::zero()), rat(5, 6));
        // lct_0(A^2, x^a + y^b) = 1/a + 1/b
        assert_eq!(binomial_germ_lct(4, 5, &Rational::zero()), rat(9, 20));
    }

    #[test]
    fn tangency_with_boundary() {
        // lct(A^2, (2/3)(y=0); (y + x^e = 0)) = 1 - 2/3 + 1/e
        assert_eq!(binomial_germ_lct(3, 1, &rat(2, 3)), rat(2, 3));
        assert_eq!(binomial_germ_lct(2, 1, &rat(2, 3)), rat(5, 6));
    }

    #[test]
    fn triple_product_germ() {
        // u * t * (u + t) with no boundary: lct = 2/3 at the origin,
        // computed with the axes as lambda-parts and one curve component
        let p = parse_poly("u + t", &["u", "t"]).unwrap();
        let germ = Germ {
            beta: [Rational::zero(), Rational::zero()],
            lambda: [rat_i(1), rat_i(1)],
            comps: vec![(p, rat_i(1))],
        };
        let r = germ_lct(&germ);
        assert!(r.exact);
        assert_eq!(r.bound.unwrap(), rat(2, 3));
    }

    #[test]
    fn family13_case_i_germ() {
        // u (u^2 + t^3): lct = 5/9 (axes carry no boundary)
        let p = parse_poly("u^2 + t^3", &["t", "u"]).unwrap();
        let germ = Germ {
            beta: [Rational::zero(), Rational::zero()],
            lambda: [Rational::zero(), rat_i(1)],
            comps: vec![(p, rat_i(1))],
        };
        let r = germ_lct(&germ);
        assert!(r.exact);
        assert_eq!(r.bound.unwrap(), rat(5, 9));
    }

    #[test]
    fn degenerate_cube_not_exact() {
        // (u + t)^3 as a single component with multiplicity 3 is fine (the
        // reduced support is smooth), but (u+t)^2(u-t) style input with a
        // repeated factor inside one polynomial is flagged
        let sq = parse_poly("u^2 + 2*u*t + t^2", &["u", "t"]).unwrap();
        let germ = Germ {
            beta: [Rational::zero(), Rational::zero()],
            lambda: [Rational::zero(), Rational::zero()],
            comps: vec![(sq, rat_i(1))],
        };
        let r = germ_lct(&germ);
        assert!(!r.exact);
    }
}
