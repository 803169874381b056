//! The alpha-invariant pipeline: for each singular point of a member, apply
//! the method selected by its center type and stored tags; for the smooth
//! strata apply the class-level bounds. Every emitted certificate is
//! re-checkable; points with no certificate at or above 1/2 are reported as
//! gaps, never silently passed.

use crate::catalog::{ExclusionTag, PointLocus, COORD_NAMES, ISOL_TABLE, LXY_SINGULAR, LXY_SMOOTH};
use crate::factor::UPoly;
use crate::lct::*;
use crate::member::{CurveClass, Member, MemberPoint, QiConfiguration, QiSubtype, QsVerdict};
use crate::poly::{Monomial, Poly};
use crate::rational::{rat, rat_i, Rational};
use num_integer::Integer;
use num_traits::{One, Zero};

#[derive(Debug)]
pub struct PointResult {
    pub point: MemberPoint,
    pub certs: Vec<AlphaCertificate>,
    pub best: Option<Rational>,
}

#[derive(Debug)]
pub struct PipelineResult {
    pub family: usize,
    pub seed: Option<u64>,
    pub quasi_smooth: QsVerdict,
    pub points: Vec<PointResult>,
    pub smooth_certs: Vec<AlphaCertificate>,
    pub gaps: Vec<String>,
    /// min over all certified bounds, None when a gap prevents a verdict
    pub verdict: Option<Rational>,
}

impl PipelineResult {
    pub fn gap_free(&self) -> bool {
        self.gaps.is_empty()
    }
}

pub fn alpha_pipeline(member: &Member) -> Result<PipelineResult, String> {
    let qs = member.is_quasi_smooth();
    if let QsVerdict::CertifiedNo { witness } = &qs {
        return Err(format!("member is not quasi-smooth: {}", witness));
    }
    let mut gaps = Vec::new();
    let mut points = Vec::new();
    for pt in member.singular_points()? {
        let certs = point_certs(member, &pt);
        let best = certs.iter().map(|c| c.bound.clone()).max();
        match &best {
            Some(b) if *b >= rat(1, 2) => {}
            Some(b) => gaps.push(format!(
                "{}: best certificate {} < 1/2",
                pt.describe(),
                crate::rational::fmt_rat(b)
            )),
            None => gaps.push(format!("{}: no certificate", pt.describe())),
        }
        points.push(PointResult {
            point: pt,
            certs,
            best,
        });
    }
    let (smooth_certs, mut smooth_gaps) = smooth_class_certs(member);
    gaps.append(&mut smooth_gaps);
    let verdict = if gaps.is_empty() {
        let mut v: Option<Rational> = None;
        for p in &points {
            if let Some(b) = &p.best {
                v = Some(match v {
                    None => b.clone(),
                    Some(cur) => cur.min(b.clone()),
                });
            }
        }
        for c in &smooth_certs {
            v = Some(match v {
                None => c.bound.clone(),
                Some(cur) => cur.min(c.bound.clone()),
            });
        }
        v
    } else {
        None
    };
    Ok(PipelineResult {
        family: member.record.index,
        seed: member.seed,
        quasi_smooth: qs,
        points,
        smooth_certs,
        gaps,
        verdict,
    })
}

// ---------------------------------------------------------------------------
// per-point dispatch
// ---------------------------------------------------------------------------

fn point_certs(m: &Member, pt: &MemberPoint) -> Vec<AlphaCertificate> {
    let mut certs = Vec::new();
    if pt.is_qi {
        certs.extend(qi_certs(m, pt));
    }
    if pt.is_ei && certs.iter().all(|c: &AlphaCertificate| c.bound < rat(1, 2)) {
        certs.extend(ei_certs(m, pt));
    }
    if !pt.is_bi() {
        if let Some(c) = club_cert(m, pt) {
            certs.push(c);
        }
        if pt.tag == ExclusionTag::Heart {
            certs.push(ne_flag_bound(&pt.describe()));
        }
        if certs.iter().all(|c| c.bound < rat(1, 2)) {
            certs.extend(generic_certs(m, pt));
        }
    }
    certs
}

/// Methods for non-BI points with no table row: quasi-tangent, tangent-cube,
/// weighted-blowup, L_xy exclusion and the isolating fallback, in order of
/// typical strength.
fn generic_certs(m: &Member, pt: &MemberPoint) -> Vec<AlphaCertificate> {
    let mut certs = Vec::new();
    match pt.locus {
        PointLocus::Vertex(v) => {
            certs.extend(vertex_singtang_certs(m, v, &pt.describe()));
            // tangent-cube / weighted blowup when the tangent has weight 1
            if let Some(c) = vertex_tangent_lct_cert(m, v, pt) {
                certs.push(c);
            }
        }
        PointLocus::Stratum(i, j) => {
            if let Some(def) = &pt.defining {
                certs.extend(stratum_singtang_certs(m, i, j, def, &pt.describe()));
            }
        }
    }
    if let Some(c) = excl_lxy_cert(m, pt) {
        certs.push(c);
    }
    if certs.iter().all(|c| c.bound < rat(1, 2)) {
        if let Some(c) = isol_fallback_cert(m, pt) {
            certs.push(c);
        }
    }
    certs
}

/// The isolating-set table row for this point, when one exists.
fn club_cert(m: &Member, pt: &MemberPoint) -> Option<AlphaCertificate> {
    let rec = &m.record;
    for row in ISOL_TABLE.iter() {
        if row.family != rec.index || row.locus != pt.locus || row.qtype.0 != pt.qtype.r {
            continue;
        }
        // side condition for S = H_x: H_x must be quasi-smooth at the point,
        // certified by r not dividing d - 1
        if row.s_is_hx && (rec.degree - 1) % row.qtype.0 == 0 {
            return None;
        }
        // the isolating set must actually isolate: its complement meets X in
        // a finite set
        if !coordinate_set_isolates(m, row.isol_set) {
            return None;
        }
        return Some(isol_class_bound(
            &pt.describe(),
            row.qtype.0,
            row.n,
            row.e_max,
            1,
            &rec.anticanonical_degree(),
        ));
    }
    None
}

/// Does the common zero locus of the given coordinates meet X in a finite
/// set? (True iff at most two coordinates remain and the restriction of F to
/// them is nonzero, or fewer.)
pub fn coordinate_set_isolates(m: &Member, coords: &[usize]) -> bool {
    let rest: Vec<usize> = (0..5).filter(|i| !coords.contains(i)).collect();
    match rest.len() {
        0 | 1 => true,
        2 => !m.stratum_restriction(rest[0], rest[1]).is_zero(),
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// quasi-tangent (singular tangent) certificates
// ---------------------------------------------------------------------------

/// At a vertex: one certificate per admissible quasi-tangent coordinate.
fn vertex_singtang_certs(m: &Member, v: usize, label: &str) -> Vec<AlphaCertificate> {
    let mut out = Vec::new();
    let weights = m.weights();
    let r = weights[v];
    let a3 = m.record.anticanonical_degree();
    if let Ok((_, f)) = m.quasi_tangent_data(v) {
        for j in 0..5 {
            if j == v {
                continue;
            }
            let mut e = [0u16; 5];
            e[j] = 1;
            if f.coeff_of_exps(&e).is_zero() {
                continue;
            }
            // y = x_j is a quasi-tangent coordinate; the bound uses the two
            // largest of the remaining three weights
            let mut rest: Vec<i64> = (0..5)
                .filter(|&l| l != v && l != j)
                .map(|l| weights[l])
                .collect();
            rest.sort_unstable();
            out.push(bound_sing_tang(label, r, rest[1], rest[2], &a3));
        }
    }
    out
}

/// At a stratum point: the coordinate move onto a vertex exists over an
/// extension field whenever one stratum weight divides the other; the
/// exact normal-form structure after the move is computed symbolically
/// modulo the point's defining equation.
fn stratum_singtang_certs(
    m: &Member,
    i: usize,
    j: usize,
    defining: &UPoly,
    label: &str,
) -> Vec<AlphaCertificate> {
    let mut out = Vec::new();
    let weights = m.weights();
    for (keep, moved) in [(i, j), (j, i)] {
        if weights[moved] % weights[keep] != 0 {
            continue;
        }
        if defining.degree() == 0 {
            continue;
        }
        let e = weights[moved] / weights[keep];
        // tangent levels: k * w_keep + w_l = d for l != keep
        let d = m.degree();
        let r = weights[i].gcd(&weights[j]);
        let mut best_level: Option<(i64, Vec<usize>)> = None;
        let mut klevels: Vec<i64> = Vec::new();
        for l in 0..5 {
            if l == keep {
                continue;
            }
            let rem = d - weights[l];
            if rem > 0 && rem % weights[keep] == 0 {
                klevels.push(rem / weights[keep]);
            }
        }
        klevels.sort_unstable();
        klevels.dedup();
        for k in klevels {
            let mut tangents = Vec::new();
            for l in 0..5 {
                if l == keep {
                    continue;
                }
                if d - weights[l] != k * weights[keep] {
                    continue;
                }
                if moved_coeff_nonzero(m, keep, moved, e, k as u16, l, defining) {
                    tangents.push(l);
                }
            }
            if !tangents.is_empty() {
                best_level = Some((k, tangents));
                break; // smallest quasi-linear level wins
            }
        }
        if let Some((_k, tangents)) = best_level {
            let a3 = m.record.anticanonical_degree();
            for l in tangents {
                let mut rest: Vec<i64> = (0..5)
                    .filter(|&q| q != keep && q != l)
                    .map(|q| weights[q])
                    .collect();
                rest.sort_unstable();
                out.push(bound_sing_tang(label, r, rest[1], rest[2], &a3));
            }
        }
    }
    out
}

/// Coefficient of `x_keep^k x_l` in `F(x_moved -> x_moved + z x_keep^e)`,
/// as a polynomial in the root parameter z, tested for nonvanishing modulo
/// the point's irreducible defining equation.
fn moved_coeff_nonzero(
    m: &Member,
    keep: usize,
    moved: usize,
    e: i64,
    k: u16,
    l: usize,
    defining: &UPoly,
) -> bool {
    // contributing original monomials: x_keep^a x_moved^b x_l with
    // a + e b = k (l != moved), or x_keep^a x_moved^b with the substitution
    // producing x_moved^1 terms when l = moved
    let mut poly_in_z: Vec<Rational> = Vec::new();
    let mut addz = |deg: usize, c: Rational| {
        if poly_in_z.len() <= deg {
            poly_in_z.resize(deg + 1, Rational::zero());
        }
        poly_in_z[deg] += c;
    };
    for (mo, c) in m.f.terms() {
        // need: all variables other than keep, moved, l at exponent 0
        let mut ok = true;
        for q in 0..5 {
            if q != keep && q != moved && q != l && mo.exp(q) != 0 {
                ok = false;
            }
        }
        if !ok {
            continue;
        }
        let a = mo.exp(keep) as i64;
        let b = mo.exp(moved) as i64;
        if l == moved {
            // term x_keep^a (x_moved + z x_keep^e)^b contributes to
            // x_keep^k x_moved^1 with binom(b,1) z^{b-1} when a + e(b-1) = k
            if b >= 1 && a + e * (b - 1) == k as i64 {
                addz((b - 1) as usize, c * rat_i(b));
            }
        } else {
            let le = mo.exp(l);
            if le != 1 {
                continue;
            }
            if a + e * b == k as i64 {
                addz(b as usize, c.clone());
            }
        }
    }
    let p = UPoly::from_coeffs(poly_in_z);
    if p.is_zero() {
        return false;
    }
    let (_, rem) = p.divrem(defining);
    !rem.is_zero()
}

// ---------------------------------------------------------------------------
// tangent-divisor thresholds at vertices (tangent cube / weighted blowup)
// ---------------------------------------------------------------------------

/// Lower bound for `lct_p(X; H_tangent)` at a vertex, extended to an alpha
/// certificate when the tangent coordinate has weight 1 and the point is not
/// a maximal center (non-BI points never are; degenerate or exceptional QI
/// centers are not either).
fn vertex_tangent_lct_cert(m: &Member, v: usize, pt: &MemberPoint) -> Option<AlphaCertificate> {
    let (lct, _exact) = tangent_divisor_lct(m, v)?;
    let (_, tangent, _) = m.quasi_tangent_normal_form(v).ok()?;
    let aj = m.weights()[tangent];
    if aj != 1 {
        return None;
    }
    // alpha_p = min{1, lct_p(X; H_x)} by the one-noncanonical-divisor argument
    let maximal_possible = pt.is_qi; // only nondegenerate QI centers are maximal
    if maximal_possible {
        return None;
    }
    let bound = lct.min(rat_i(1));
    Some(smooth_class_cert(
        &pt.describe(),
        "tangent-divisor threshold with the unique-noncanonical upgrade",
        bound,
    ))
}

/// Best certified lower bound for `lct_p(X; H_tangent)` at a vertex.
fn tangent_divisor_lct(m: &Member, v: usize) -> Option<(Rational, bool)> {
    let chart = m.orbifold_chart(v).ok()?;
    let mut best: Option<(Rational, bool)> = None;
    let mut push = |val: Rational, exact: bool| {
        best = Some(match best.take() {
            None => (val, exact),
            Some((cur, ce)) => {
                if val > cur {
                    (val, exact)
                } else {
                    (cur, ce)
                }
            }
        });
    };
    // multiplicity bound via omult
    let tangent_poly = Poly::var(&COORD_NAMES, chart.tangent);
    if let Ok(om) = m.omult_at_vertex(v, &tangent_poly) {
        if om >= 1 {
            push(Rational::one() / rat_i(om as i64), false);
        }
    }
    // tangent cube
    if let Ok(c) = bound_tang_cube(m, v) {
        push(c.bound, false);
    }
    // weighted blowups over Newton facet normals
    let fbar_raw = chart
        .member
        .f
        .set_var_zero(chart.tangent)
        .substitute_unit(v);
    // drop the (now absent) tangent variable to land in 3 local coordinates
    let tangent_name = COORD_NAMES[chart.tangent];
    let tpos = fbar_raw.vars().iter().position(|n| n == tangent_name)?;
    let fbar = fbar_raw.drop_var(tpos);
    if !fbar.is_zero() && fbar.nvars() == 3 {
        if let Some(out) = bound_weighted_blowup_auto("chart", &fbar) {
            push(out.cert.bound.clone(), out.theta_exact);
        }
    }
    best
}

// ---------------------------------------------------------------------------
// L_xy exclusion
// ---------------------------------------------------------------------------

/// The `L_xy` route for singular points of families listed in the curve
/// tables: `S in |A|`, `T in |a_1 A|` general cut out the irreducible curve,
/// and the local multiplicity at the point feeds the exclusion bound.
fn excl_lxy_cert(m: &Member, pt: &MemberPoint) -> Option<AlphaCertificate> {
    let rec = &m.record;
    let [_, a1, a2, _, _] = *m.weights();
    if a1 >= a2 {
        return None;
    }
    let listed = LXY_SMOOTH.contains(&rec.index)
        || LXY_SINGULAR.iter().any(|(f, _)| *f == rec.index);
    if !listed {
        return None;
    }
    let curve = m.lxy_curve().ok()?;
    match curve.classification {
        CurveClass::IrreducibleSmooth | CurveClass::IrreducibleSingularAt(_) => {}
        _ => return None,
    }
    // the point must lie on L_xy and S, Gamma must be quasi-smooth at it
    let mult = match pt.locus {
        PointLocus::Vertex(v) => {
            if v < 2 {
                return None;
            }
            let lv = v - 2; // index within (z, t, w)
            let has_pure = curve
                .poly
                .terms()
                .any(|(mo, _)| (0..3).all(|l| l == lv || mo.exp(l) == 0) && mo.exp(lv) > 0);
            if has_pure {
                return None; // vertex not on the curve
            }
            let local = curve.poly.substitute_unit(lv);
            local.terms().map(|(mo, _)| mo.total_degree()).min()?
        }
        PointLocus::Stratum(i, j) => {
            if i < 2 || j < 2 {
                return None;
            }
            1 // the table curves are smooth along the strata points
        }
    };
    // S in |A|: for a_1 >= 2 the only member is H_x; it must be quasi-smooth
    // at the point, certified by a tangent monomial avoiding x
    let s_ok = match pt.locus {
        PointLocus::Vertex(v) => m
            .tangent_monomials(v)
            .iter()
            .any(|&(_, j)| j != 0 || a1 == 1),
        PointLocus::Stratum(i, j) => {
            let def = pt.defining.as_ref()?;
            hx_quasi_smooth_at_stratum_point(m, i, j, def)
        }
    };
    if !s_ok {
        return None;
    }
    Some(bound_excl_l(
        &pt.describe(),
        rat_i(1),
        rat_i(a1),
        1,
        mult,
        pt.qtype.r,
        &rec.anticanonical_degree(),
        rat_i(1),
    ))
}

/// Certifies that `H_x` (and a general member of |A|) is quasi-smooth at a
/// stratum point cut out by the given irreducible equation: some partial
/// derivative of `F(0, y, z, t, w)` must not vanish there.
fn hx_quasi_smooth_at_stratum_point(m: &Member, i: usize, j: usize, defining: &UPoly) -> bool {
    if i == 0 || j == 0 {
        return false;
    }
    let fbar = m.f.set_var_zero(0);
    for l in 1..5 {
        let part = fbar.partial_derivative(l);
        let restr = crate::factor::restrict_to_binary(&part, i, j);
        if restr.is_zero() {
            continue;
        }
        // value at the point: reduce the deflated form modulo the defining
        // equation; nonzero remainder certifies nonvanishing
        let w = [m.weights()[i], m.weights()[j]];
        let defl = crate::member::deflate_full(&restr, w);
        let (_, rem) = defl.divrem(defining);
        if !rem.is_zero() {
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// isolating fallback
// ---------------------------------------------------------------------------

/// Complementary-coordinate isolating bound with S = H_x, available when H_x
/// is quasi-smooth at the point.
fn isol_fallback_cert(m: &Member, pt: &MemberPoint) -> Option<AlphaCertificate> {
    let weights = m.weights();
    let (coords, r): (Vec<usize>, i64) = match pt.locus {
        PointLocus::Vertex(v) => ((0..5).filter(|&l| l != v).collect(), weights[v]),
        PointLocus::Stratum(i, j) => (
            (0..5).filter(|&l| l != i && l != j).collect(),
            pt.qtype.r,
        ),
    };
    if !coordinate_set_isolates(m, &coords) {
        return None;
    }
    let s_ok = match pt.locus {
        PointLocus::Vertex(v) => m.tangent_monomials(v).iter().any(|&(_, j)| j != 0),
        PointLocus::Stratum(i, j) => {
            let def = pt.defining.as_ref()?;
            hx_quasi_smooth_at_stratum_point(m, i, j, def)
        }
    };
    if !s_ok {
        return None;
    }
    let e = coords.iter().map(|&l| weights[l]).max().unwrap();
    Some(isol_class_bound(
        &pt.describe(),
        r,
        1,
        e,
        1,
        &m.record.anticanonical_degree(),
    ))
}

// ---------------------------------------------------------------------------
// QI centers
// ---------------------------------------------------------------------------

fn qi_certs(m: &Member, pt: &MemberPoint) -> Vec<AlphaCertificate> {
    let mut out = Vec::new();
    let label = pt.describe();
    let a3 = m.record.anticanonical_degree();
    let config = m.qi_configuration();
    match pt.locus {
        PointLocus::Stratum(i, j) => {
            // three-equal or two-equal configurations: the quasi-tangent
            // coordinate after the move is the other stratum coordinate
            if let Some(def) = &pt.defining {
                out.extend(stratum_singtang_certs(m, i, j, def, &label));
            }
        }
        PointLocus::Vertex(k) => {
            match m.qi_subtype_at(k) {
                Ok((QiSubtype::Degenerate, Some(nf))) => {
                    // exact value from the degenerate normal form
                    let tangent = degenerate_tangent_index(&nf, k);
                    let aj = m.weights()[tangent];
                    out.push(degenerate_qi_alpha(&label, m.weights()[k], aj));
                }
                Ok((QiSubtype::Exceptional, _)) => {
                    out.extend(exceptional_qi_certs(m, pt, k, &a3, &config));
                }
                Ok((QiSubtype::NonDegenerate, Some(nf))) => {
                    out.extend(nondegenerate_qi_certs(m, &nf, pt, k, &a3));
                }
                _ => {}
            }
        }
    }
    out
}

fn degenerate_tangent_index(nf: &Member, k: usize) -> usize {
    // normal form F = x_k^2 x_j + g: find j
    for j in 0..5 {
        if j == k {
            continue;
        }
        let mut e = [0u16; 5];
        e[k] = 2;
        e[j] = 1;
        if !nf.f.coeff_of_exps(&e).is_zero() {
            return j;
        }
    }
    unreachable!("degenerate normal form lost its tangent monomial")
}

/// Non-degenerate QI center at a vertex: the tangent-divisor threshold is
/// combined with the Kawamata-blowup nef bound (the anticanonical divisor of
/// the blowup is nef for quadratic-involution centers).
fn nondegenerate_qi_certs(
    m: &Member,
    nf: &Member,
    pt: &MemberPoint,
    k: usize,
    a3: &Rational,
) -> Vec<AlphaCertificate> {
    let mut out = Vec::new();
    let label = pt.describe();
    let r = m.weights()[k];
    let d = m.degree();
    let tangent = degenerate_tangent_index(nf, k);
    let aj = m.weights()[tangent];
    // tangent part: a_j * lct_p(X; H_j)
    let lct = tangent_divisor_lct(nf, k);
    let tangent_lct = match lct {
        Some((v, _)) => rat_i(aj) * v,
        None => return out,
    };
    let tangent_lct = tangent_lct.min(rat_i(1));
    // gamma = ord_E(H_j) = (d - r)/r for a nondegenerate center
    let gamma = rat(d - r, r);
    out.push(kawamata_gamma_bound(
        &label,
        &pt.qtype,
        aj,
        gamma,
        a3,
        tangent_lct,
    ));
    out
}

/// Exceptional QI centers: the tangent-cube route when the small weight is 1,
/// the multiplicity/isolation route when `4a <= 3b`, and the full curve
/// decomposition with the reducible-restriction method for the three families
/// where neither applies.
fn exceptional_qi_certs(
    m: &Member,
    pt: &MemberPoint,
    k: usize,
    a3: &Rational,
    config: &Result<QiConfiguration, String>,
) -> Vec<AlphaCertificate> {
    let mut out = Vec::new();
    let label = pt.describe();
    if let Ok(QiConfiguration::TwoDistinct { a, b, r1, r2 }) = config {
        let (a, b, r1, r2) = (*a, *b, *r1, *r2);
        if a == 1 {
            // tangent coordinate of weight 1: tangent cube with the upgrade
            if let Some((lct, _)) = tangent_divisor_lct(m, k) {
                out.push(smooth_class_cert(
                    &label,
                    "exceptional QI, weight-1 tangent threshold",
                    lct.min(rat_i(1)),
                ));
            }
            return out;
        }
        if 4 * a <= 3 * b {
            // omult(H_u) = 3 and the isolating estimate
            let u_idx = (0..5).find(|&l| m.weights()[l] == a && l != 0).unwrap();
            if let Ok(om) = m.omult_at_vertex(k, &Poly::var(&COORD_NAMES, u_idx)) {
                let lct_part = rat_i(a) / rat_i(om as i64);
                let isol_part = rat_i(om as i64) / (rat_i(r1 * a * r2) * a3);
                out.push(smooth_class_cert(
                    &label,
                    "exceptional QI, multiplicity and isolation",
                    lct_part.min(isol_part).min(rat_i(1)),
                ));
            }
            return out;
        }
        // remaining families: S, T in |A| (or |A|, |2A|) with the restriction
        // decomposition through the center
        if let Some(c) = exceptional_decomposition_cert(m, pt, k, a3, r1) {
            out.push(c);
        }
        let _ = (b, r2);
    }
    out
}

/// The reducible-restriction bound at an exceptional QI center: decompose
/// `T|_S` for `S in |A|`, `T in |a_1 A|` via the restriction of F to the
/// last three coordinates, recompute the curve data, verify condition (*),
/// and apply the reduced-component method.
pub fn exceptional_decomposition_cert(
    m: &Member,
    pt: &MemberPoint,
    k: usize,
    a3: &Rational,
    r: i64,
) -> Option<AlphaCertificate> {
    let dec = lxy_decomposition(m)?;
    // Gamma_1: the component through the center (a coordinate quasi-line)
    let g1 = dec
        .comps
        .iter()
        .position(|c| c.through_vertex(k) && c.is_coordinate)?;
    let comp = &dec.comps[g1];
    let matrix = decomposition_matrix(m, &dec)?;
    if !star_condition(&matrix) {
        return None;
    }
    // p in Gamma_1 away from the other components
    for (idx, c) in dec.comps.iter().enumerate() {
        if idx != g1 && c.through_vertex(k) {
            return None;
        }
    }
    let b = rat_i(m.weights()[1]);
    bound_mtd_l_red(
        &pt.describe(),
        rat_i(1),
        b,
        comp.mult,
        comp.degree.clone(),
        r,
        a3,
    )
    .ok()
}

/// A component of `T|_S` cut out on `L_xy`.
pub struct LxyComponent {
    /// defining quasi-homogeneous polynomial in (z, t, w)
    pub poly: Poly,
    pub mult: u32,
    pub is_coordinate: bool,
    /// degree (A . Gamma)
    pub degree: Rational,
    /// indices of the singular points of X (hence of S) along the component
    pub sing_indices: Vec<i64>,
}

impl LxyComponent {
    pub fn through_vertex(&self, v: usize) -> bool {
        if v < 2 {
            return false;
        }
        let lv = v - 2;
        !self
            .poly
            .terms()
            .any(|(mo, _)| (0..3).all(|l| l == lv || mo.exp(l) == 0))
    }
}

pub struct LxyDecomposition {
    pub comps: Vec<LxyComponent>,
    pub weights3: [i64; 3],
}

/// Decomposes `f = F(0,0,z,t,w)` into coordinate quasi-lines and residual
/// components, with degrees and the singular points of X along each.
pub fn lxy_decomposition(m: &Member) -> Option<LxyDecomposition> {
    let [_, _, a2, a3w, a4] = *m.weights();
    let w3 = [a2, a3w, a4];
    let f = m.f.set_var_zero(0).set_var_zero(1).drop_var(0).drop_var(1);
    if f.is_zero() {
        return None;
    }
    let names3 = ["z", "t", "w"];
    let mut comps: Vec<LxyComponent> = Vec::new();
    let mut rest = f;
    for i in 0..3 {
        let min_e = rest.terms().map(|(mo, _)| mo.exp(i)).min().unwrap_or(0);
        if min_e > 0 {
            let mut shifted = Poly::zero_owned(rest.vars().to_vec());
            for (mo, c) in rest.terms() {
                let mut e = mo.exps().to_vec();
                e[i] -= min_e;
                shifted.add_term(Monomial::new(&e), c.clone());
            }
            rest = shifted;
            comps.push(LxyComponent {
                poly: Poly::var(&names3, i),
                mult: min_e as u32,
                is_coordinate: true,
                degree: rat_i(w3[i]) / rat_i(w3[0] * w3[1] * w3[2]),
                sing_indices: Vec::new(),
            });
        }
    }
    if !(rest.num_terms() == 1 && rest.total_degree() == 0) {
        let active: Vec<usize> = (0..3).filter(|&l| rest.degree_in_var(l) > 0).collect();
        if active.len() == 2 {
            let bin = crate::factor::restrict_to_binary(&rest, active[0], active[1]);
            let fac = crate::factor::factor_qh_binary(&bin, [w3[active[0]], w3[active[1]]]);
            for (p2, e) in fac.factors {
                let mut lifted = Poly::zero(&names3);
                for (mo, c) in p2.terms() {
                    let mut ee = [0u16; 3];
                    ee[active[0]] = mo.exp(0);
                    ee[active[1]] = mo.exp(1);
                    lifted.add_term(Monomial::new(&ee), c.clone());
                }
                let deg = lifted
                    .is_quasi_homogeneous(&w3.to_vec())
                    .degree()
                    .unwrap_or(0);
                comps.push(LxyComponent {
                    poly: lifted,
                    mult: e,
                    is_coordinate: false,
                    degree: rat_i(deg) / rat_i(w3[0] * w3[1] * w3[2]),
                    sing_indices: Vec::new(),
                });
            }
        } else {
            let deg = rest
                .is_quasi_homogeneous(&w3.to_vec())
                .degree()
                .unwrap_or(0);
            comps.push(LxyComponent {
                poly: rest,
                mult: 1,
                is_coordinate: false,
                degree: rat_i(deg) / rat_i(w3[0] * w3[1] * w3[2]),
                sing_indices: Vec::new(),
            });
        }
    }
    // singular points of X along each coordinate component
    for c in comps.iter_mut() {
        if !c.is_coordinate {
            continue;
        }
        let lv = c
            .poly
            .terms()
            .next()
            .map(|(mo, _)| (0..3).find(|&l| mo.exp(l) == 1).unwrap())?;
        // the quasi-line (x = y = x_lv = 0) passes through the vertices of
        // the other two coordinates; collect their indices when on X
        for other in 0..3 {
            if other == lv {
                continue;
            }
            let v5 = other + 2;
            if m.vertex_on_member(v5) && m.weights()[v5] > 1 {
                c.sing_indices.push(m.weights()[v5]);
            }
        }
    }
    Some(LxyDecomposition { comps, weights3: w3 })
}

/// Intersection matrix of the decomposition: self-intersections of the
/// coordinate components from the plt formula, transversal chart numbers at
/// shared vertices pinned, and the rest solved from the row equations.
pub fn decomposition_matrix(m: &Member, dec: &LxyDecomposition) -> Option<IntersectionMatrix> {
    let kk = dec.comps.len();
    let b = rat_i(m.weights()[1]);
    let mut known: Vec<Vec<Option<Rational>>> = vec![vec![None; kk]; kk];
    for (i, c) in dec.comps.iter().enumerate() {
        if c.is_coordinate {
            known[i][i] = Some(self_intersection_plt(&Rational::zero(), &c.sing_indices));
        }
    }
    // pinned transversal numbers: two distinct coordinate quasi-lines meet at
    // the vertex of the third coordinate with local number 1/r there
    for i in 0..kk {
        for j in (i + 1)..kk {
            let (ci, cj) = (&dec.comps[i], &dec.comps[j]);
            if !(ci.is_coordinate && cj.is_coordinate) {
                continue;
            }
            let li = coord_index(&ci.poly)?;
            let lj = coord_index(&cj.poly)?;
            let third = (0..3).find(|&l| l != li && l != lj)?;
            let v5 = third + 2;
            if m.vertex_on_member(v5) {
                known[i][j] = Some(Rational::one() / rat_i(m.weights()[v5]));
            }
        }
    }
    let mults: Vec<u32> = dec.comps.iter().map(|c| c.mult).collect();
    let degrees: Vec<Rational> = dec.comps.iter().map(|c| c.degree.clone()).collect();
    intersection_matrix_from_decomposition(&b, &mults, &degrees, &known).ok()
}

fn coord_index(p: &Poly) -> Option<usize> {
    let (mo, _) = p.terms().next()?;
    (0..3).find(|&l| mo.exp(l) == 1 && mo.total_degree() == 1)
}

// ---------------------------------------------------------------------------
// EI centers
// ---------------------------------------------------------------------------

fn ei_certs(m: &Member, pt: &MemberPoint) -> Vec<AlphaCertificate> {
    let mut out = Vec::new();
    match (m.record.index, pt.locus) {
        (7, PointLocus::Stratum(i, j)) => {
            if let Some(def) = &pt.defining {
                out.extend(stratum_singtang_certs(m, i, j, def, &pt.describe()));
            }
        }
        (20, PointLocus::Vertex(v)) => {
            out.extend(vertex_singtang_certs(m, v, &pt.describe()));
            if out.iter().all(|c| c.bound < rat(1, 2)) {
                if let Some(c) = vertex_tangent_lct_cert(m, v, pt) {
                    out.push(c);
                }
            }
        }
        (23, _) | (40, _) => {
            if let Some(c) = club_cert(m, pt) {
                out.push(c);
            }
        }
        (36, _) | (44, _) | (61, _) | (76, _) => {
            if let Some(c) = excl_lxy_cert(m, pt) {
                out.push(c);
            }
        }
        _ => {}
    }
    out
}

// ---------------------------------------------------------------------------
// smooth strata
// ---------------------------------------------------------------------------

fn smooth_class_certs(m: &Member) -> (Vec<AlphaCertificate>, Vec<String>) {
    let rec = &m.record;
    let [_, a1, a2, _, _] = *m.weights();
    let mut certs = Vec::new();
    let mut gaps = Vec::new();
    // U_1
    let base = smooth_point_bounds(rec);
    if base.bound >= rat(1, 2) {
        certs.push(base);
    } else {
        // the weight-1 vertex with a quasi-tangent coordinate
        let mut improved: Option<AlphaCertificate> = None;
        for c in vertex_singtang_certs(m, 0, "smooth points on U_1") {
            if c.bound >= rat(1, 2) {
                improved = Some(match improved.take() {
                    None => c,
                    Some(cur) => {
                        if c.bound > cur.bound {
                            c
                        } else {
                            cur
                        }
                    }
                });
            }
        }
        match improved {
            Some(c) => certs.push(c),
            None => {
                if a1 == 1 && rec.degree % m.weights()[4] != 0 {
                    // min{ lct(S_p) >= 1/2 (quasi-smoothness argument),
                    //      1/(a_4 (A^3)) }
                    let v = rat(1, 2).min(
                        Rational::one() / (rat_i(m.weights()[4]) * rec.anticanonical_degree()),
                    );
                    certs.push(smooth_class_cert(
                        "smooth points on U_1",
                        "unique-anticanonical-member threshold with isolation",
                        v,
                    ));
                } else if rec.index == 9 || rec.index == 17 {
                    certs.push(smooth_class_cert(
                        "smooth points on U_1",
                        "triple-cover families: direct bound",
                        rat(1, 2),
                    ));
                } else {
                    gaps.push("smooth points on U_1: no certificate >= 1/2".into());
                }
            }
        }
    }
    // H_x minus L_xy (only relevant when 1 < a_1 < a_2)
    if a1 > 1 && a1 < a2 {
        let case = rec.degree_case();
        let a3 = rec.anticanonical_degree();
        let isol_part = match case {
            Ok(crate::catalog::DegreeCase::TwoA4) => {
                Rational::one() / (rat_i(a1 * m.weights()[3]) * &a3)
            }
            _ => Rational::one() / (rat_i(a1 * m.weights()[4]) * &a3),
        };
        let value = rat_i(1).min(isol_part);
        // the H_x threshold >= 1 part is the class-level statement of the
        // smooth-point analysis; its hypotheses (degree case, quasi-smooth
        // member, 1 < a_1 < a_2) are checked here
        certs.push(smooth_class_cert(
            "smooth points on H_x minus L_xy",
            "double-point bound with the isolating class",
            value,
        ));
    }
    // L_xy (a_1 < a_2) or the residual locus for a_2 = 1
    if a1 < a2 && a2 > 1 {
        match lxy_class_cert(m) {
            Some(c) => {
                if c.bound < rat(1, 2) {
                    gaps.push(format!(
                        "smooth points on L_xy: best certificate {}",
                        crate::rational::fmt_rat(&c.bound)
                    ));
                }
                certs.push(c);
            }
            None => gaps.push("smooth points on L_xy: no certificate".into()),
        }
    }
    if a2 == 1 {
        // I_1 families: the residual smooth locus outside the weight-1 charts
        // is empty for members containing the relevant monomial; verify
        if let Some(gap) = i1_residual_gap(m) {
            gaps.push(gap);
        }
    }
    if a1 > 1 && a1 == a2 {
        // families with 1 < a_1 = a_2: the H_x class via the isolating bound
        let a3 = rec.anticanonical_degree();
        let value = rat_i(1).min(Rational::one() / (rat_i(a1 * m.weights()[4]) * &a3));
        if value < rat(1, 2) {
            gaps.push("smooth points on H_x: bound below 1/2".into());
        }
        certs.push(smooth_class_cert(
            "smooth points on H_x",
            "isolating-class bound",
            value,
        ));
    }
    (certs, gaps)
}

/// Certificate for the smooth points of L_xy, shaped by the curve class.
fn lxy_class_cert(m: &Member) -> Option<AlphaCertificate> {
    let rec = &m.record;
    let a1 = m.weights()[1];
    let curve = m.lxy_curve().ok()?;
    match &curve.classification {
        CurveClass::IrreducibleSmooth | CurveClass::IrreducibleSingularAt(_) => {
            // exclusion with S in |A|, T in |a_1 A|: all three terms >= 1
            Some(bound_excl_l(
                "smooth points on L_xy",
                rat_i(1),
                rat_i(a1),
                1,
                1,
                1,
                &rec.anticanonical_degree(),
                rat_i(1),
            ))
        }
        CurveClass::Reducible { .. } | CurveClass::NonReduced { .. } => {
            let dec = lxy_decomposition(m)?;
            let matrix = decomposition_matrix(m, &dec)?;
            if !star_condition(&matrix) {
                return None;
            }
            let a3 = rec.anticanonical_degree();
            let mut best: Option<Rational> = None;
            for c in &dec.comps {
                let cert = bound_mtd_l_red(
                    "smooth points on L_xy",
                    rat_i(1),
                    rat_i(a1),
                    c.mult,
                    c.degree.clone(),
                    1,
                    &a3,
                )
                .ok()?;
                best = Some(match best {
                    None => cert.bound,
                    Some(cur) => cur.min(cert.bound),
                });
            }
            // crossings of two components on the smooth locus contribute the
            // intersection-point bound
            let crossing = rat_i(1).min(rat_i(a1) / rat_i(2));
            let value = best?.min(crossing);
            Some(smooth_class_cert(
                "smooth points on L_xy",
                "component-wise reduced-decomposition bound",
                value,
            ))
        }
    }
}

/// For the `a_2 = 1` families, checks that the locus outside the weight-1
/// charts contains no smooth points (it is a finite set of singular points
/// for members carrying the catalogue monomials).
fn i1_residual_gap(m: &Member) -> Option<String> {
    let weights = m.weights();
    // residual locus: zero set of all weight-1 coordinates
    let ones: Vec<usize> = (0..5).filter(|&l| weights[l] == 1).collect();
    let rest: Vec<usize> = (0..5).filter(|&l| weights[l] > 1).collect();
    match rest.len() {
        0 => None,
        1 => None, // a single vertex, singular or off X
        2 => {
            let restr = m.stratum_restriction(rest[0], rest[1]);
            if restr.is_zero() {
                Some("residual locus outside the weight-1 charts is a curve".into())
            } else {
                let g = weights[rest[0]].gcd(&weights[rest[1]]);
                if g > 1 {
                    None // all residual points are singular, handled above
                } else {
                    // smooth residual points would need their own analysis
                    let _ = ones;
                    Some("residual smooth points outside U_1 not covered".into())
                }
            }
        }
        _ => Some("unexpected residual shape".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::derive_catalog;

    #[test]
    fn pipeline_family_46_degenerate() {
        let rec = derive_catalog(66)[46 - 1].clone();
        // a degenerate member of family 46: F = w^2 y + t^3 + z^7 + x^21 + y^21
        // in weights (1,1,3,7,10); the QI center is p_w with tangent y
        let mut f = Poly::zero(&COORD_NAMES);
        let mut add = |exps: [u16; 5], c: i64| {
            f.add_term(Monomial::new(&exps), rat_i(c));
        };
        add([0, 1, 0, 0, 2], 1); // w^2 y
        add([0, 0, 0, 3, 0], 1); // t^3
        add([0, 0, 7, 0, 0], 1); // z^7
        add([21, 0, 0, 0, 0], 1); // x^21
        add([0, 21, 0, 0, 0], 1); // y^21
        let m = Member::from_poly(&rec, f).unwrap();
        let (sub, _) = m.qi_subtype_at(4).unwrap();
        assert_eq!(sub, QiSubtype::Degenerate);
        let pts = m.singular_points().unwrap();
        assert_eq!(pts.len(), 1);
        let certs = point_certs(&m, &pts[0]);
        assert!(certs.iter().any(|c| c.exact && c.bound == rat(11, 21)));
    }
}
