//! Log canonical thresholds of boundary pairs on well-formed weighted planes.
//!
//! This is a catalogued evaluator, not a general algorithm: it handles the
//! configurations that actually occur in the lowest-weight-part analysis —
//! quasi-smooth components meeting the coordinate hyperplanes (possibly with
//! tangency) and each other at coordinate points, with every local germ
//! Newton nondegenerate. Anything outside that scope is reported as
//! unsupported, and callers fall back to partial certificates.

use crate::factor::{factor_qh_binary, restrict_to_binary, UPoly};
use crate::germ::{germ_lct, Germ};
use crate::poly::{Monomial, Poly};
use crate::rational::{rat_i, Rational};
use crate::solve::{common_zeros, ZeroVerdict};
use crate::wspace::{DivisorOnWeightedPlane, PlaneComponent, WeightedSpace};
use num_traits::{One, Zero};

#[derive(Clone, Debug)]
pub struct PlanarLct {
    pub value: Rational,
    pub exact: bool,
}

/// Evaluates `lct(P, Diff; D)` on the well-formed weighted plane, capped at 1.
/// `diff` carries boundary coefficients on the coordinate hyperplanes; `d` is
/// the effective divisor whose threshold is taken.
pub fn planar_pair_lct(
    ambient: &WeightedSpace,
    diff: &DivisorOnWeightedPlane,
    d: &DivisorOnWeightedPlane,
) -> Result<PlanarLct, String> {
    let n = ambient.weights.len();
    match n {
        2 => planar_pair_lct_line(ambient, diff, d),
        3 => planar_pair_lct_plane(ambient, diff, d),
        _ => Err(format!("unsupported ambient dimension {}", n - 1)),
    }
}

/// On `P(w_0, w_1)` (a curve): log canonicity is per-point coefficient <= 1.
fn planar_pair_lct_line(
    ambient: &WeightedSpace,
    diff: &DivisorOnWeightedPlane,
    d: &DivisorOnWeightedPlane,
) -> Result<PlanarLct, String> {
    let mut best = rat_i(1);
    // vertex points: beta_i + c lambda_i <= 1
    for i in 0..2 {
        let beta = diff.hyperplane_coeff(i);
        let lam = d.hyperplane_coeff(i);
        if !lam.is_zero() {
            best = best.min((rat_i(1) - beta) / lam);
        }
    }
    // curve components cut reduced points away from the vertices
    for (k, mu) in &d.components {
        if let PlaneComponent::Curve(p) = k {
            let fac = factor_qh_binary(p, [ambient.weights[0], ambient.weights[1]]);
            for (_f, e) in fac.factors {
                let coeff = mu * rat_i(e as i64);
                best = best.min(Rational::one() / coeff);
            }
        }
    }
    Ok(PlanarLct {
        value: best,
        exact: true,
    })
}

struct CurveComp {
    poly: Poly,
    mult: Rational,
}

fn curve_comps(d: &DivisorOnWeightedPlane) -> Vec<CurveComp> {
    d.components
        .iter()
        .filter_map(|(k, c)| match k {
            PlaneComponent::Curve(p) => Some(CurveComp {
                poly: p.clone(),
                mult: c.clone(),
            }),
            _ => None,
        })
        .collect()
}

fn planar_pair_lct_plane(
    ambient: &WeightedSpace,
    diff: &DivisorOnWeightedPlane,
    d: &DivisorOnWeightedPlane,
) -> Result<PlanarLct, String> {
    let w = &ambient.weights;
    let betas: Vec<Rational> = (0..3).map(|i| diff.hyperplane_coeff(i)).collect();
    let lambdas: Vec<Rational> = (0..3).map(|i| d.hyperplane_coeff(i)).collect();
    let comps = curve_comps(d);
    let mut best = rat_i(1);
    let mut exact = true;

    // generic-point caps
    for i in 0..3 {
        if !lambdas[i].is_zero() {
            best = best.min((rat_i(1) - &betas[i]) / &lambdas[i]);
        }
    }
    for c in &comps {
        best = best.min(Rational::one() / &c.mult);
    }

    // curve components must be quasi-smooth away from the vertices
    for c in &comps {
        if !curve_smooth_off_vertices(&c.poly, w)? {
            return Err(format!(
                "component `{}` is singular away from the coordinate points",
                c.poly
            ));
        }
    }

    // pairwise intersections of curve components away from vertices
    for a in 0..comps.len() {
        for b in (a + 1)..comps.len() {
            let pts = curve_curve_contacts(&comps[a].poly, &comps[b].poly, w)?;
            for e in pts {
                // two smooth branches with contact order e
                let coeff = (&comps[a].mult + &comps[b].mult) * rat_i(e as i64);
                let cand = rat_i(e as i64 + 1) / coeff;
                best = best.min(cand);
            }
        }
    }

    // intersections of curve components with the coordinate hyperplanes at
    // non-vertex points (tangency contributes a weighted-blowup constraint)
    for (ci, c) in comps.iter().enumerate() {
        for i in 0..3 {
            let (others, wij) = restriction_frame(i, w);
            let restr = restrict_pair(&c.poly, others);
            if restr.is_zero() {
                return Err(format!(
                    "component `{}` contains the hyperplane ({} = 0)",
                    c.poly, ambient.names[i]
                ));
            }
            let fac = factor_qh_binary(&restr, wij);
            // check no other curve component shares a non-vertex root here
            for (cj, c2) in comps.iter().enumerate() {
                if cj == ci {
                    continue;
                }
                let r2 = restrict_pair(&c2.poly, others);
                if r2.is_zero() {
                    continue;
                }
                let f2 = factor_qh_binary(&r2, wij);
                for (p1, _) in &fac.factors {
                    for (p2, _) in &f2.factors {
                        if p1 == p2 {
                            return Err(
                                "two curve components meet a hyperplane at the same non-vertex point"
                                    .into(),
                            );
                        }
                    }
                }
            }
            for (f, e) in &fac.factors {
                if *e <= 1 {
                    continue; // transversal: covered by the generic caps
                }
                // contact order e at deg(f) conjugate points: germ of a
                // boundary axis (beta_i + c lambda_i) and a smooth branch
                let deg = f.total_degree(); // number of conjugate points is immaterial
                let _ = deg;
                let e = *e as i64;
                // c (mu e + lambda_i e) <= 1 + e - beta_i e
                let denom = (&c.mult + &lambdas[i]) * rat_i(e);
                let numer = rat_i(1 + e) - &betas[i] * rat_i(e);
                best = best.min(numer / denom);
            }
        }
    }

    // vertex germs, evaluated on the orbifold cover
    for v in 0..3 {
        let locals: [usize; 2] = match v {
            0 => [1, 2],
            1 => [0, 2],
            _ => [0, 1],
        };
        let mut germ = Germ {
            beta: [betas[locals[0]].clone(), betas[locals[1]].clone()],
            lambda: [lambdas[locals[0]].clone(), lambdas[locals[1]].clone()],
            comps: Vec::new(),
        };
        for c in &comps {
            let local = dehomogenize(&c.poly, v, locals);
            if !local.coeff_of_exps(&[0, 0]).is_zero() {
                continue; // does not pass through this vertex
            }
            germ.comps.push((local, c.mult.clone()));
        }
        if germ.comps.is_empty() && germ.lambda.iter().all(|l| l.is_zero()) {
            continue;
        }
        let r = germ_lct(&germ);
        if let Some(bound) = r.bound {
            if r.exact {
                best = best.min(bound);
            } else {
                exact = false;
                match r.sound_bound {
                    Some(s) => best = best.min(s),
                    None => return Err("degenerate vertex germ with no fallback".into()),
                }
            }
        }
    }

    Ok(PlanarLct { value: best, exact })
}

fn restriction_frame(i: usize, w: &[i64]) -> ([usize; 2], [i64; 2]) {
    let others: [usize; 2] = match i {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    };
    (others, [w[others[0]], w[others[1]]])
}

/// Restriction of a 3-variable polynomial to the plane of two coordinates.
fn restrict_pair(p: &Poly, others: [usize; 2]) -> Poly {
    restrict_to_binary(p, others[0], others[1])
}

/// Sets variable `v` to 1 and keeps the two `locals` as germ coordinates.
fn dehomogenize(p: &Poly, v: usize, locals: [usize; 2]) -> Poly {
    let q = p.substitute_unit(v);
    // q is over the remaining variables, in their original order; reindex
    let names: Vec<String> = q.vars().to_vec();
    let want = [
        p.vars()[locals[0]].clone(),
        p.vars()[locals[1]].clone(),
    ];
    let i0 = names.iter().position(|n| *n == want[0]).unwrap();
    let i1 = names.iter().position(|n| *n == want[1]).unwrap();
    let mut out = Poly::zero_owned(want.to_vec());
    for (m, c) in q.terms() {
        out.add_term(Monomial::new(&[m.exp(i0), m.exp(i1)]), c.clone());
    }
    out
}

/// Quasi-smoothness of the curve `(f = 0)` away from the three coordinate
/// points: partial derivatives have no common zero on the open strata.
fn curve_smooth_off_vertices(f: &Poly, w: &[i64]) -> Result<bool, String> {
    let parts: Vec<Poly> = (0..3).map(|i| f.partial_derivative(i)).collect();
    // components solving a variable with constant coefficient are smooth
    for i in 0..3 {
        if f.degree_in_var(i) == 1 {
            let coeff_part = f.graded_part(&[i], 1);
            let mut e = vec![0u16; 3];
            e[i] = 1;
            if coeff_part.num_terms() == 1 && !f.coeff_of_exps(&e).is_zero() {
                return Ok(true);
            }
        }
    }
    // 1-strata
    for i in 0..3 {
        for j in (i + 1)..3 {
            let restrs: Vec<Poly> = parts
                .iter()
                .map(|p| restrict_to_binary(p, i, j))
                .collect();
            if restrs.iter().all(|r| r.is_zero()) {
                // every partial vanishes along the whole stratum; check whether
                // the curve meets it at non-vertex points at all
                let fr = restrict_to_binary(f, i, j);
                if fr.is_zero() {
                    return Ok(false);
                }
                let fac = factor_qh_binary(&fr, [w[i], w[j]]);
                if !fac.factors.is_empty() {
                    return Ok(false);
                }
                continue;
            }
            let mut g: Option<UPoly> = None;
            for r in restrs.iter().filter(|r| !r.is_zero()) {
                let u = crate::member::deflate_full(r, [w[i], w[j]]);
                g = Some(match g {
                    None => u,
                    Some(cur) => cur.gcd(&u),
                });
            }
            if g.unwrap().degree() >= 1 {
                return Ok(false);
            }
        }
    }
    // torus: normalize the first coordinate
    let polys: Vec<Poly> = parts
        .iter()
        .map(|p| {
            let mut out = Poly::zero_owned(vec![f.vars()[1].clone(), f.vars()[2].clone()]);
            let q = p.substitute_unit(0);
            for (m, c) in q.terms() {
                out.add_term(Monomial::new(&[m.exp(0), m.exp(1)]), c.clone());
            }
            out
        })
        .filter(|p| !p.is_zero())
        .collect();
    if polys.is_empty() {
        return Ok(false);
    }
    Ok(matches!(common_zeros(&polys, 0x9e37), ZeroVerdict::Empty))
}

/// Contact orders of intersections of two curve components away from the
/// coordinate points: supported when one component is quasi-linear in some
/// variable with a monomial coefficient (it is then a graph and can be
/// substituted into the other).
fn curve_curve_contacts(f: &Poly, g: &Poly, w: &[i64]) -> Result<Vec<u32>, String> {
    let pick = |p: &Poly| -> Option<(usize, Poly, Poly)> {
        for i in 0..3 {
            if p.degree_in_var(i) == 1 {
                let coeff = p.graded_part(&[i], 1);
                if coeff.num_terms() == 1 {
                    // p = M * x_i + B, with M a monomial free of x_i
                    let mut m_poly = Poly::zero_owned(p.vars().to_vec());
                    for (m, c) in coeff.terms() {
                        let mut e = m.exps().to_vec();
                        e[i] = 0;
                        m_poly.add_term(Monomial::new(&e), c.clone());
                    }
                    let b = p.graded_part(&[i], 0);
                    return Some((i, m_poly, b));
                }
            }
        }
        None
    };
    let (solved, other) = if let Some(s) = pick(f) {
        (s, g.clone())
    } else if let Some(s) = pick(g) {
        (s, f.clone())
    } else {
        return Err("no quasi-linear component among an intersecting pair".into());
    };
    let (i, m_poly, b) = solved;
    // on the torus x_i = -B/M; substitute into `other` and clear denominators:
    // other(x_i -> -B/M) * M^{deg_i other} is a polynomial
    let deg = other.degree_in_var(i) as u32;
    let mut acc = Poly::zero_owned(other.vars().to_vec());
    for (mo, c) in other.terms() {
        let e = mo.exp(i) as u32;
        let mut rest = mo.exps().to_vec();
        rest[i] = 0;
        let mut term = Poly::zero_owned(other.vars().to_vec());
        term.add_term(Monomial::new(&rest), c.clone());
        let bm = b.neg().pow(e).mul(&m_poly.pow(deg - e));
        acc = acc.add(&term.mul(&bm));
    }
    if acc.is_zero() {
        return Err("components share a factor".into());
    }
    // acc lives in the two variables other than x_i (plus possibly x_i-free)
    let others: Vec<usize> = (0..3).filter(|&l| l != i).collect();
    let bin = restrict_to_binary(&acc, others[0], others[1]);
    if bin.is_zero() {
        return Err("intersection calculation degenerated".into());
    }
    let fac = factor_qh_binary(&bin, [w[others[0]], w[others[1]]]);
    // variable powers of `bin` correspond to points on hyperplanes (handled
    // in the hyperplane pass); torus factors give contact orders
    Ok(fac.factors.iter().map(|(_, e)| *e).collect())
}

/// Brute-force Newton-polygon oracle for binomial germs: minimum of
/// `(w1 + w2 - beta w2) / min(a w1, b w2)` over all primitive weights with
/// `w1 + w2 <= a * b + 2` (the optimum is attained well inside this range).
pub fn binomial_brute_force(a: u32, b: u32, beta: &Rational) -> Rational {
    let mut best: Option<Rational> = None;
    let cap = (a * b + 2) as i64;
    for w1 in 1..=cap {
        for w2 in 1..=cap {
            if w1 + w2 > cap + 1 {
                continue;
            }
            if num_integer::gcd(w1, w2) != 1 {
                continue;
            }
            let ord = std::cmp::min(a as i64 * w1, b as i64 * w2);
            let numer = rat_i(w1 + w2) - beta * rat_i(w2);
            let cand = numer / rat_i(ord);
            best = Some(match best {
                None => cand,
                Some(cur) => cur.min(cand),
            });
        }
    }
    best.unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::rational::rat;
    use crate::wspace::different_on_exceptional;

    fn hyper(i: usize, c: Rational) -> (PlaneComponent, Rational) {
        (PlaneComponent::Hyperplane(i), c)
    }

    #[test]
    fn transversal_line_conic_is_one() {
        // P^2, Diff = 0, D = H_u + (s x + u^2): eta = 1
        let ambient = WeightedSpace::new(&[1, 1, 1], &["x", "s", "u"]);
        let conic = parse_poly("s*x + u^2", &["x", "s", "u"]).unwrap();
        let d = DivisorOnWeightedPlane {
            ambient: ambient.clone(),
            components: vec![hyper(2, rat_i(1)), (PlaneComponent::Curve(conic), rat_i(1))],
        };
        let diff = DivisorOnWeightedPlane {
            ambient: ambient.clone(),
            components: vec![],
        };
        let r = planar_pair_lct(&ambient, &diff, &d).unwrap();
        assert!(r.exact);
        assert_eq!(r.value, rat_i(1));
    }

    #[test]
    fn family46_case_ii_eta() {
        // P(2,1,7), Diff = 2/3 H_u, D = (s^3 x^2 + u + s^7): eta = 2/3
        let ambient = WeightedSpace::new(&[2, 1, 7], &["x", "s", "u"]);
        let curve = parse_poly("s^3*x^2 + u + s^7", &["x", "s", "u"]).unwrap();
        let diff = different_on_exceptional(&[6, 3, 7], &["x", "s", "u"]);
        assert_eq!(diff.hyperplane_coeff(2), rat(2, 3));
        let d = DivisorOnWeightedPlane {
            ambient: ambient.clone(),
            components: vec![(PlaneComponent::Curve(curve), rat_i(1))],
        };
        let r = planar_pair_lct(&ambient, &diff, &d).unwrap();
        assert!(r.exact);
        assert_eq!(r.value, rat(2, 3));
    }

    #[test]
    fn binomial_oracle_agreement() {
        for a in 2..=6u32 {
            for b in 2..=6u32 {
                let mine = crate::germ::binomial_germ_lct(a, b, &Rational::zero());
                let brute = binomial_brute_force(a, b, &Rational::zero());
                let classical =
                    (rat_i(1) / rat_i(a as i64) + rat_i(1) / rat_i(b as i64)).min(rat_i(1));
                assert_eq!(mine.clone().min(rat_i(1)), classical);
                assert_eq!(brute.min(rat_i(1)), classical);
            }
        }
    }
}
