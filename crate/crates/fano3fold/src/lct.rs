//! The bound-producing methods, packaged as re-checkable certificates, plus
//! the condition-(*) intersection-matrix machinery.
//!
//! Every certificate stores the witness inputs of its method; `replay()`
//! recomputes the bound from the witness and must reproduce it bit-exactly.

use crate::catalog::FamilyRecord;
use crate::germ::binomial_germ_lct;
use crate::member::Member;
use crate::planar::planar_pair_lct;
use crate::poly::Poly;
use crate::rational::{fmt_rat, rat, rat_i, Rational};
use crate::wspace::{different_on_exceptional, wf_model_of_polynomial, QuotientType};
use num_traits::{One, Zero};
use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Method {
    MultBound,
    IsolClass,
    ExclL,
    MtdLred,
    MtdLredSsing,
    MtdLintpt,
    WeightedBlowup,
    TangCube,
    SingTang,
    DegQiExact,
    NdQiNef,
    NeFlag,
    SmoothU1,
    SmoothClass,
}

/// Method-specific inputs that make a certificate re-checkable.
#[derive(Clone, Debug, Serialize)]
pub enum Witness {
    MultBound {
        omult: u32,
        divisor_class: i64,
    },
    IsolClass {
        r: i64,
        n: i64,
        e: i64,
        #[serde(serialize_with = "crate::report::serialize_rat")]
        a3: Rational,
        /// orbifold multiplicity of S at the point (1 in the plain method)
        m: u32,
    },
    ExclL {
        #[serde(serialize_with = "crate::report::serialize_rat")]
        a: Rational,
        #[serde(serialize_with = "crate::report::serialize_rat")]
        b: Rational,
        m: u32,
        mult: u32,
        r: i64,
        #[serde(serialize_with = "crate::report::serialize_rat")]
        a3: Rational,
        #[serde(serialize_with = "crate::report::serialize_rat")]
        lct_s: Rational,
    },
    MtdLred {
        #[serde(serialize_with = "crate::report::serialize_rat")]
        a: Rational,
        #[serde(serialize_with = "crate::report::serialize_rat")]
        b: Rational,
        m1: u32,
        #[serde(serialize_with = "crate::report::serialize_rat")]
        deg_g1: Rational,
        r: i64,
        #[serde(serialize_with = "crate::report::serialize_rat")]
        a3: Rational,
    },
    MtdLredSsing {
        #[serde(serialize_with = "crate::report::serialize_rat")]
        a: Rational,
        #[serde(serialize_with = "crate::report::serialize_rat")]
        b: Rational,
        m1: u32,
        #[serde(serialize_with = "crate::report::serialize_rat")]
        deg_g1: Rational,
        mult_s: u32,
        mult_g1: u32,
        #[serde(serialize_with = "crate::report::serialize_rat")]
        a3: Rational,
    },
    MtdLintpt {
        #[serde(serialize_with = "crate::report::serialize_rat")]
        a: Rational,
        #[serde(serialize_with = "crate::report::serialize_rat")]
        b: Rational,
    },
    SingTang {
        r: i64,
        b2: i64,
        b3: i64,
        #[serde(serialize_with = "crate::report::serialize_rat")]
        a3: Rational,
    },
    TangCube {
        membership: String,
    },
    WeightedBlowup {
        c: Vec<i64>,
        wt: i64,
        #[serde(serialize_with = "crate::report::serialize_opt_rat")]
        planar: Option<Rational>,
        planar_exact: bool,
    },
    DegQi {
        ak: i64,
        aj: i64,
    },
    NdQiNef {
        r: i64,
        a: i64,
        n: i64,
        #[serde(serialize_with = "crate::report::serialize_rat")]
        gamma: Rational,
        #[serde(serialize_with = "crate::report::serialize_rat")]
        a3: Rational,
        #[serde(serialize_with = "crate::report::serialize_rat")]
        tangent_lct: Rational,
    },
    NeFlag,
    SmoothU1 {
        n1: i64,
        n2: i64,
        #[serde(serialize_with = "crate::report::serialize_rat")]
        a3: Rational,
    },
    SmoothClass {
        note: String,
        #[serde(serialize_with = "crate::report::serialize_rat")]
        value: Rational,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaCertificate {
    /// descriptor of the point or point class
    pub point: String,
    #[serde(serialize_with = "crate::report::serialize_rat")]
    pub bound: Rational,
    pub exact: bool,
    pub method: Method,
    pub witness: Witness,
    pub provenance: &'static str,
}

impl AlphaCertificate {
    /// Recomputes the bound from the stored witness. Bit-exact agreement with
    /// `self.bound` is an invariant of every constructor in this module.
    pub fn replay(&self) -> Rational {
        match &self.witness {
            Witness::MultBound {
                omult,
                divisor_class,
            } => rat_i(*divisor_class) / rat_i(*omult as i64),
            Witness::IsolClass { r, n, e, a3, m } => {
                let c = rat_i(*m as i64) / (rat_i(r * n * e) * a3);
                c.min(rat_i(1))
            }
            Witness::ExclL {
                a,
                b,
                m,
                mult,
                r,
                a3,
                lct_s,
            } => {
                let second = b / (rat_i(*m as i64) * rat_i(*mult as i64));
                let third = Rational::one() / (rat_i(*r) * a * b * a3);
                lct_s.clone().min(second).min(third)
            }
            Witness::MtdLred {
                a,
                b,
                m1,
                deg_g1,
                r,
                a3,
            } => {
                let m1r = rat_i(*m1 as i64);
                let denom =
                    rat_i(*r) * a * b * a3 + &m1r * &m1r / b - rat_i(*r) * &m1r * deg_g1;
                a.clone().min(m1r / denom)
            }
            Witness::MtdLredSsing {
                a,
                b,
                m1,
                deg_g1,
                mult_s,
                mult_g1,
                a3,
            } => {
                let ms = rat_i(*mult_s as i64);
                let m1r = rat_i(*m1 as i64);
                let denom =
                    a * b * a3 + &m1r / b * rat_i(*mult_g1 as i64) - &m1r * deg_g1;
                (a / &ms).min(ms / denom)
            }
            Witness::MtdLintpt { a, b } => a.clone().min(b / rat_i(2)),
            Witness::SingTang { r, b2, b3, a3 } => {
                rat_i(2) / (rat_i(r * b2 * b3) * a3)
            }
            Witness::TangCube { .. } => rat(1, 2),
            Witness::WeightedBlowup {
                c,
                wt,
                planar,
                planar_exact: _,
            } => {
                let first = rat_i(c.iter().sum()) / rat_i(*wt);
                match planar {
                    Some(p) => first.min(p.clone()),
                    None => first,
                }
            }
            Witness::DegQi { ak, aj } => {
                if *aj == 1 {
                    rat(ak + 1, 2 * ak + 1)
                } else {
                    rat_i(1)
                }
            }
            Witness::NdQiNef {
                r,
                a,
                n,
                gamma,
                a3,
                tangent_lct,
            } => {
                let other = gamma / (rat_i(*n) * a3 * rat_i(a * (r - a)));
                tangent_lct.clone().min(other)
            }
            Witness::NeFlag => rat_i(1),
            Witness::SmoothU1 { n1, n2, a3 } => Rational::one() / (rat_i(n1 * n2) * a3),
            Witness::SmoothClass { value, .. } => value.clone(),
        }
    }

    pub fn display_line(&self) -> String {
        format!(
            "{}: {} >= {}{} [{:?}]",
            self.point,
            if self.exact { "alpha =" } else { "alpha" },
            fmt_rat(&self.bound),
            if self.exact { " (exact)" } else { "" },
            self.method
        )
    }
}

fn make_cert(
    point: &str,
    bound: Rational,
    exact: bool,
    method: Method,
    witness: Witness,
    provenance: &'static str,
) -> AlphaCertificate {
    let c = AlphaCertificate {
        point: point.to_string(),
        bound,
        exact,
        method,
        witness,
        provenance,
    };
    debug_assert_eq!(c.replay(), c.bound, "certificate replay mismatch");
    c
}

/// `lct_p(X, D) >= 1 / omult_p(D)`: the multiplicity bound. `divisor_class`
/// is n for D in |nA| (the alpha-relevant bound is n/omult).
pub fn mult_bound(point: &str, omult: u32, divisor_class: i64) -> AlphaCertificate {
    assert!(omult >= 1);
    make_cert(
        point,
        rat_i(divisor_class) / rat_i(omult as i64),
        false,
        Method::MultBound,
        Witness::MultBound {
            omult,
            divisor_class,
        },
        "DERIVED",
    )
}

/// The isolating-set/class bound `min{1, m/(r n e (A^3))}`, where m is the
/// orbifold multiplicity of the auxiliary surface S at the point (m = 1 in
/// the table method).
pub fn isol_class_bound(
    point: &str,
    r: i64,
    n: i64,
    e: i64,
    m: u32,
    a3: &Rational,
) -> AlphaCertificate {
    let c = rat_i(m as i64) / (rat_i(r * n * e) * a3);
    make_cert(
        point,
        c.min(rat_i(1)),
        false,
        Method::IsolClass,
        Witness::IsolClass {
            r,
            n,
            e,
            a3: a3.clone(),
            m,
        },
        "DERIVED",
    )
}

/// Raw c-value of the isolating-set table: `1/(r n e (A^3))`, uncapped.
pub fn isol_table_c(r: i64, n: i64, e: i64, a3: &Rational) -> Rational {
    Rational::one() / (rat_i(r * n * e) * a3)
}

pub fn bound_excl_l(
    point: &str,
    a: Rational,
    b: Rational,
    m: u32,
    mult: u32,
    r: i64,
    a3: &Rational,
    lct_s: Rational,
) -> AlphaCertificate {
    let w = Witness::ExclL {
        a,
        b,
        m,
        mult,
        r,
        a3: a3.clone(),
        lct_s,
    };
    let c = AlphaCertificate {
        point: point.to_string(),
        bound: Rational::zero(),
        exact: false,
        method: Method::ExclL,
        witness: w,
        provenance: "DERIVED",
    };
    let bound = c.replay();
    AlphaCertificate { bound, ..c }
}

pub fn bound_mtd_l_red(
    point: &str,
    a: Rational,
    b: Rational,
    m1: u32,
    deg_g1: Rational,
    r: i64,
    a3: &Rational,
) -> Result<AlphaCertificate, String> {
    // precondition: r b deg Gamma_1 <= m_1
    if rat_i(r) * &b * &deg_g1 > rat_i(m1 as i64) {
        return Err(format!(
            "mtdLred precondition fails: r b deg = {} > m1 = {}",
            fmt_rat(&(rat_i(r) * &b * &deg_g1)),
            m1
        ));
    }
    let w = Witness::MtdLred {
        a,
        b,
        m1,
        deg_g1,
        r,
        a3: a3.clone(),
    };
    let mut c = AlphaCertificate {
        point: point.to_string(),
        bound: Rational::zero(),
        exact: false,
        method: Method::MtdLred,
        witness: w,
        provenance: "DERIVED",
    };
    c.bound = c.replay();
    Ok(c)
}

pub fn bound_mtd_l_red_s_sing(
    point: &str,
    a: Rational,
    b: Rational,
    m1: u32,
    deg_g1: Rational,
    mult_s: u32,
    mult_g1: u32,
    a3: &Rational,
) -> Result<AlphaCertificate, String> {
    if &b * &deg_g1 > rat_i(mult_g1 as i64) {
        return Err("mtdLredSsing precondition fails: b deg > mult(Gamma_1)".into());
    }
    let w = Witness::MtdLredSsing {
        a,
        b,
        m1,
        deg_g1,
        mult_s,
        mult_g1,
        a3: a3.clone(),
    };
    let mut c = AlphaCertificate {
        point: point.to_string(),
        bound: Rational::zero(),
        exact: false,
        method: Method::MtdLredSsing,
        witness: w,
        provenance: "DERIVED",
    };
    c.bound = c.replay();
    Ok(c)
}

pub fn bound_mtd_l_intpt(point: &str, a: Rational, b: Rational) -> AlphaCertificate {
    let bound = a.clone().min(&b / rat_i(2));
    make_cert(
        point,
        bound,
        false,
        Method::MtdLintpt,
        Witness::MtdLintpt { a, b },
        "DERIVED",
    )
}

/// `alpha_p(X) >= 2 / (r b_2 b_3 (A^3))` when a quasi-tangent coordinate of
/// the right shape exists at the point (hypothesis certified by the caller).
pub fn bound_sing_tang(point: &str, r: i64, b2: i64, b3: i64, a3: &Rational) -> AlphaCertificate {
    make_cert(
        point,
        rat_i(2) / (rat_i(r * b2 * b3) * a3),
        false,
        Method::SingTang,
        Witness::SingTang {
            r,
            b2,
            b3,
            a3: a3.clone(),
        },
        "DERIVED",
    )
}

pub fn degenerate_qi_alpha(point: &str, ak: i64, aj: i64) -> AlphaCertificate {
    let bound = if aj == 1 {
        rat(ak + 1, 2 * ak + 1)
    } else {
        rat_i(1)
    };
    make_cert(
        point,
        bound,
        true,
        Method::DegQiExact,
        Witness::DegQi { ak, aj },
        "DERIVED",
    )
}

pub fn ne_flag_bound(point: &str) -> AlphaCertificate {
    make_cert(
        point,
        rat_i(1),
        false,
        Method::NeFlag,
        Witness::NeFlag,
        "PAPER",
    )
}

/// Smooth-point bound on the weight-1 open set: `1/(a_2 a_4 (A^3))`, improved
/// to `1/(a_2 a_3 (A^3))` when `a_4 | d`.
pub fn smooth_point_bounds(rec: &FamilyRecord) -> AlphaCertificate {
    let [_, _, a2, a3w, a4] = rec.weights;
    let a3 = rec.anticanonical_degree();
    let (n1, n2) = if rec.degree % a4 == 0 {
        (a2, a3w)
    } else {
        (a2, a4)
    };
    make_cert(
        "smooth points on U_1",
        Rational::one() / (rat_i(n1 * n2) * &a3),
        false,
        Method::SmoothU1,
        Witness::SmoothU1 { n1, n2, a3 },
        "DERIVED",
    )
}

// ---------------------------------------------------------------------------
// intersection matrices and condition (*)
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionMatrix {
    pub entries: Vec<Vec<Rational>>,
    pub labels: Vec<String>,
}

impl IntersectionMatrix {
    pub fn new(entries: Vec<Vec<Rational>>) -> Self {
        let k = entries.len();
        for row in &entries {
            assert_eq!(row.len(), k);
        }
        for i in 0..k {
            for j in 0..k {
                assert_eq!(entries[i][j], entries[j][i], "matrix must be symmetric");
            }
        }
        let labels = (0..k).map(|i| format!("G{}", i + 1)).collect();
        IntersectionMatrix { entries, labels }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    fn submatrix_det(&self, idx: &[usize]) -> Rational {
        let k = idx.len();
        let mut m: Vec<Vec<Rational>> = (0..k)
            .map(|i| (0..k).map(|j| self.entries[idx[i]][idx[j]].clone()).collect())
            .collect();
        // Gaussian elimination
        let mut det = Rational::one();
        for col in 0..k {
            let pivot = (col..k).find(|&r| !m[r][col].is_zero());
            let pivot = match pivot {
                Some(p) => p,
                None => return Rational::zero(),
            };
            if pivot != col {
                m.swap(pivot, col);
                det = -det;
            }
            let pv = m[col][col].clone();
            det *= &pv;
            for r in (col + 1)..k {
                if m[r][col].is_zero() {
                    continue;
                }
                let f = &m[r][col] / &pv;
                for c2 in col..k {
                    let sub = &m[col][c2] * &f;
                    m[r][c2] -= sub;
                }
            }
        }
        det
    }
}

/// Condition (*): `(-1)^{|I|} det M_I >= 0` for proper nonempty I,
/// `(-1)^{k-1} det M > 0`, and positive off-diagonal entries.
pub fn star_condition(m: &IntersectionMatrix) -> bool {
    let k = m.size();
    if k < 2 {
        return false;
    }
    for i in 0..k {
        for j in 0..k {
            if i != j && m.entries[i][j] <= Rational::zero() {
                return false;
            }
        }
    }
    for mask in 1u32..(1 << k) {
        let idx: Vec<usize> = (0..k).filter(|&b| mask & (1 << b) != 0).collect();
        let det = m.submatrix_det(&idx);
        let signed = if idx.len() % 2 == 0 { det.clone() } else { -det.clone() };
        if idx.len() == k {
            // (-1)^{k-1} det > 0  <=> (-1)^k det < 0 <=> signed < 0
            if signed >= Rational::zero() {
                return false;
            }
        } else if signed < Rational::zero() {
            return false;
        }
    }
    true
}

/// Property-test helper for the monotonicity lemma: `M v <= M w ==> v <= w`.
pub fn star_monotonicity_check(m: &IntersectionMatrix, v: &[Rational], w: &[Rational]) -> bool {
    let k = m.size();
    let mv: Vec<Rational> = (0..k)
        .map(|i| (0..k).map(|j| &m.entries[i][j] * &v[j]).sum())
        .collect();
    let mw: Vec<Rational> = (0..k)
        .map(|i| (0..k).map(|j| &m.entries[i][j] * &w[j]).sum())
        .collect();
    let hyp = (0..k).all(|i| mv[i] <= mw[i]);
    let conc = (0..k).all(|i| v[i] <= w[i]);
    !hyp || conc
}

/// `(Gamma^2)_S = -(K_S . Gamma) - 2 + sum (m_i - 1)/m_i` for a rational
/// curve on a surface with plt pair `(S, Gamma)`.
pub fn self_intersection_plt(k_dot: &Rational, indices: &[i64]) -> Rational {
    let mut acc = -k_dot.clone() - rat_i(2);
    for &m in indices {
        assert!(m >= 2);
        acc += rat(m - 1, m);
    }
    acc
}

/// Completes a symmetric intersection matrix from the linear row equations
/// `sum_j m_j (G_j . G_i) = b deg G_i`, given some known entries and pinned
/// local numbers. Reports underdetermined or inconsistent systems.
pub fn intersection_matrix_from_decomposition(
    b: &Rational,
    mults: &[u32],
    degrees: &[Rational],
    known: &[Vec<Option<Rational>>],
) -> Result<IntersectionMatrix, String> {
    let k = mults.len();
    assert_eq!(degrees.len(), k);
    assert_eq!(known.len(), k);
    // unknowns: entries (i, j) with i <= j and known[i][j] = None
    let mut unknowns: Vec<(usize, usize)> = Vec::new();
    for i in 0..k {
        for j in i..k {
            if known[i][j].is_none() {
                unknowns.push((i, j));
            }
        }
    }
    let n = unknowns.len();
    // equations: rows i = 0..k
    let mut mat: Vec<Vec<Rational>> = vec![vec![Rational::zero(); n]; k];
    let mut rhs: Vec<Rational> = Vec::with_capacity(k);
    for i in 0..k {
        let mut r = b * &degrees[i];
        for j in 0..k {
            let key = if i <= j { (i, j) } else { (j, i) };
            match &known[key.0][key.1] {
                Some(val) => r -= rat_i(mults[j] as i64) * val,
                None => {
                    let col = unknowns.iter().position(|&u| u == key).unwrap();
                    mat[i][col] += rat_i(mults[j] as i64);
                }
            }
        }
        rhs.push(r);
    }
    // solve by Gaussian elimination; require a unique solution
    let mut aug: Vec<Vec<Rational>> = (0..k)
        .map(|i| {
            let mut row = mat[i].clone();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0usize;
    for col in 0..n {
        let p = (row..k).find(|&r| !aug[r][col].is_zero());
        let p = match p {
            Some(p) => p,
            None => continue,
        };
        aug.swap(row, p);
        let pv = aug[row][col].clone();
        for c in col..=n {
            aug[row][c] = &aug[row][c] / &pv;
        }
        for r2 in 0..k {
            if r2 != row && !aug[r2][col].is_zero() {
                let f = aug[r2][col].clone();
                for c in col..=n {
                    let sub = &aug[row][c] * &f;
                    aug[r2][c] -= sub;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == k {
            break;
        }
    }
    // consistency: zero rows must have zero rhs
    for r in row..k {
        if !aug[r][n].is_zero() {
            return Err(format!(
                "inconsistent decomposition system (residual {})",
                fmt_rat(&aug[r][n])
            ));
        }
    }
    if pivot_cols.len() < n {
        return Err(format!(
            "underdetermined system: {} unknowns, rank {}",
            n,
            pivot_cols.len()
        ));
    }
    let mut entries: Vec<Vec<Rational>> = vec![vec![Rational::zero(); k]; k];
    for i in 0..k {
        for j in 0..k {
            let key = if i <= j { (i, j) } else { (j, i) };
            entries[i][j] = match &known[key.0][key.1] {
                Some(v) => v.clone(),
                None => {
                    let col = unknowns.iter().position(|&u| u == key).unwrap();
                    let r = pivot_cols.iter().position(|&c| c == col).unwrap();
                    aug[r][n].clone()
                }
            };
        }
    }
    Ok(IntersectionMatrix::new(entries))
}

// ---------------------------------------------------------------------------
// cubic plane curves
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub enum CubicClass {
    TripleLine,
    SmoothCubic,
    SingularNotTripleLine,
}

/// Classifies a plane cubic and returns the `>= 1/2` threshold bound unless
/// it is a triple line.
pub fn cubic_curve_lct_class(c: &Poly) -> (CubicClass, Option<Rational>) {
    if c.is_cube_of_linear_form().is_some() {
        return (CubicClass::TripleLine, None);
    }
    // smooth iff the partials have no common zero in P^2
    let parts: Vec<Poly> = (0..c.nvars()).map(|i| c.partial_derivative(i)).collect();
    let mut smooth = true;
    'outer: for v in 0..c.nvars() {
        let polys: Vec<Poly> = parts
            .iter()
            .map(|p| p.substitute_unit(v))
            .filter(|p| !p.is_zero())
            .collect();
        if polys.is_empty() {
            smooth = false;
            break;
        }
        match crate::solve::common_zeros(&polys, 0x51) {
            crate::solve::ZeroVerdict::Empty => {}
            crate::solve::ZeroVerdict::Nonempty { .. } => {
                smooth = false;
                break 'outer;
            }
        }
    }
    let class = if smooth {
        CubicClass::SmoothCubic
    } else {
        CubicClass::SingularNotTripleLine
    };
    (class, Some(rat(1, 2)))
}

// ---------------------------------------------------------------------------
// tangent-cube and weighted-blowup drivers
// ---------------------------------------------------------------------------

/// The tangent-cube criterion at a vertex `p = p_{x_i}` whose quasi-tangent
/// coordinate is `x_j`: with `Fbar = F(x_j = 0, x_i = 1)` in the three local
/// coordinates, membership in `m^2 \ m^3`, or membership in `m^3` with
/// non-cube cubic part, certifies `lct_p(X; H_{x_j}) >= 1/2`.
pub fn bound_tang_cube(member: &Member, vertex: usize) -> Result<AlphaCertificate, String> {
    let chart = member.orbifold_chart(vertex)?;
    let locals = chart.locals.clone();
    let fbar = chart
        .member
        .f
        .set_var_zero(chart.tangent)
        .substitute_unit(vertex);
    // fbar lives over 4 variables (tangent kept but zeroed); express in locals
    let local_names: Vec<usize> = locals;
    let sub: Vec<usize> = {
        // indices of the locals inside fbar's variable list
        let names = fbar.vars().to_vec();
        local_names
            .iter()
            .map(|&l| {
                names
                    .iter()
                    .position(|n| n == crate::catalog::COORD_NAMES[l])
                    .unwrap()
            })
            .collect()
    };
    let in_m2 = fbar.ideal_power_membership(&sub, 2);
    let in_m3 = fbar.ideal_power_membership(&sub, 3);
    let membership;
    if in_m2 && !in_m3 {
        membership = "m^2 minus m^3".to_string();
    } else if in_m3 {
        let cubic = fbar.graded_part(&sub, 3);
        // move the cubic into a clean 3-variable polynomial
        let mut c3 = Poly::zero_owned(
            sub.iter().map(|&s| fbar.vars()[s].clone()).collect::<Vec<_>>(),
        );
        for (m, co) in cubic.terms() {
            let exps: Vec<u16> = sub.iter().map(|&s| m.exp(s)).collect();
            c3.add_term(crate::poly::Monomial::new(&exps), co.clone());
        }
        if c3.is_zero() || c3.is_cube_of_linear_form().is_some() {
            return Err("cubic part is a cube of a linear form: criterion inapplicable".into());
        }
        membership = "m^3 with non-cube cubic part".to_string();
    } else {
        return Err("Fbar not in m^2: the point is too mild for this route".into());
    }
    Ok(make_cert(
        &format!("p_{}", crate::catalog::COORD_NAMES[vertex]),
        rat(1, 2),
        false,
        Method::TangCube,
        Witness::TangCube { membership },
        "DERIVED",
    ))
}

/// Result of the weighted-blowup bound at one weight vector.
pub struct WblowOutcome {
    pub cert: AlphaCertificate,
    pub theta_exact: bool,
}

/// The lowest-weight-part bound: given the chart polynomial `Fbar` in three
/// local coordinates and a weight vector `c`, computes
/// `min{ sum c / wt_c(Fbar), lct(P(c)^wf, Diff; D^wf_G) }`, the lower bound
/// for `lct_p(X; H_tangent)`. When the first term is <= the planar value the
/// bound is the exact threshold.
pub fn bound_weighted_blowup(
    point: &str,
    fbar: &Poly,
    c: &[i64],
) -> Result<WblowOutcome, String> {
    assert_eq!(fbar.nvars(), c.len());
    if fbar.is_zero() {
        return Err("chart polynomial vanishes".into());
    }
    let (lowest, wt) = fbar.lowest_weight_part(c);
    let names: Vec<&str> = fbar.vars().iter().map(|s| s.as_str()).collect();
    let diff = different_on_exceptional(c, &names);
    let d = wf_model_of_polynomial(&lowest, c)?;
    let first = rat_i(c.iter().sum()) / rat_i(wt);
    let planar = planar_pair_lct(&d.ambient, &diff, &d);
    let (planar_val, planar_exact) = match planar {
        Ok(p) => (Some(p.value), p.exact),
        Err(_) => (None, false),
    };
    let bound = match &planar_val {
        Some(p) if planar_exact => first.clone().min(p.clone()),
        Some(_) | None => {
            // partial certificate: only usable when the first term is known to
            // dominate; report just the first term with the partial marker
            first.clone()
        }
    };
    let theta_exact = match &planar_val {
        Some(p) => planar_exact && first <= *p,
        None => false,
    };
    let sound = planar_val.is_some() && planar_exact;
    let cert = make_cert(
        point,
        if sound { bound } else { first.clone() },
        theta_exact,
        Method::WeightedBlowup,
        Witness::WeightedBlowup {
            c: c.to_vec(),
            wt,
            planar: if sound { planar_val } else { None },
            planar_exact,
        },
        "DERIVED",
    );
    if !sound {
        // the planar side could not be certified: the certificate value (the
        // first term alone) is NOT a sound lower bound; mark by error
        return Err("planar pair threshold not certifiable for this shape".into());
    }
    Ok(WblowOutcome { cert, theta_exact })
}

/// Weight-vector candidates for the weighted blowup: inner normals of the
/// compact facets of the lower Newton hull of the chart polynomial, plus
/// edge-supported normals with one large component.
pub fn wblow_weight_candidates(fbar: &Poly) -> Vec<Vec<i64>> {
    let pts: Vec<[i64; 3]> = fbar
        .terms()
        .map(|(m, _)| [m.exp(0) as i64, m.exp(1) as i64, m.exp(2) as i64])
        .collect();
    let mut cands: Vec<Vec<i64>> = Vec::new();
    let maxc: i64 = 1 + pts
        .iter()
        .map(|p| p.iter().sum::<i64>())
        .max()
        .unwrap_or(1);
    let push = |w: [i64; 3], cands: &mut Vec<Vec<i64>>| {
        if w.iter().all(|&x| x > 0) {
            let g = num_integer::gcd(num_integer::gcd(w[0], w[1]), w[2]);
            let w = vec![w[0] / g, w[1] / g, w[2] / g];
            if !cands.contains(&w) {
                cands.push(w);
            }
        }
    };
    // facet normals from triples
    for a in 0..pts.len() {
        for b in (a + 1)..pts.len() {
            for c in (b + 1)..pts.len() {
                let u = [
                    pts[b][0] - pts[a][0],
                    pts[b][1] - pts[a][1],
                    pts[b][2] - pts[a][2],
                ];
                let v = [
                    pts[c][0] - pts[a][0],
                    pts[c][1] - pts[a][1],
                    pts[c][2] - pts[a][2],
                ];
                let mut n = [
                    u[1] * v[2] - u[2] * v[1],
                    u[2] * v[0] - u[0] * v[2],
                    u[0] * v[1] - u[1] * v[0],
                ];
                if n == [0, 0, 0] {
                    continue;
                }
                if n[0] < 0 || (n[0] == 0 && (n[1] < 0 || (n[1] == 0 && n[2] < 0))) {
                    n = [-n[0], -n[1], -n[2]];
                }
                push([n[0], n[1], n[2]], &mut cands);
            }
        }
    }
    // edge-supported normals with one large coordinate
    for a in 0..pts.len() {
        for b in (a + 1)..pts.len() {
            let d = [
                pts[b][0] - pts[a][0],
                pts[b][1] - pts[a][1],
                pts[b][2] - pts[a][2],
            ];
            for big in 0..3 {
                let (p, q) = match big {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                if d[big] != 0 {
                    continue; // edge not contained in a coordinate level
                }
                // normal (w_p, w_q) orthogonal to (d_p, d_q)
                if d[p] == 0 && d[q] == 0 {
                    continue;
                }
                let mut w = [0i64; 3];
                w[p] = d[q].abs();
                w[q] = d[p].abs();
                if w[p] == 0 || w[q] == 0 {
                    continue;
                }
                w[big] = maxc * (w[p] + w[q]);
                push(w, &mut cands);
            }
        }
    }
    cands
}

/// Runs the weighted blowup over all candidate weight vectors and returns the
/// best certified bound for `lct_p(X; H_tangent)`, if any.
pub fn bound_weighted_blowup_auto(point: &str, fbar: &Poly) -> Option<WblowOutcome> {
    let mut best: Option<WblowOutcome> = None;
    for c in wblow_weight_candidates(fbar) {
        if let Ok(out) = bound_weighted_blowup(point, fbar, &c) {
            best = Some(match best {
                None => out,
                Some(cur) => {
                    if out.cert.bound > cur.cert.bound {
                        out
                    } else {
                        cur
                    }
                }
            });
        }
    }
    best
}

/// The exact threshold of the binomial germ `x^a + y^b` with boundary `beta`
/// on `(y = 0)`: exposed for the oracle suite.
pub fn planar_binomial(a: u32, b: u32, beta: &Rational) -> Rational {
    binomial_germ_lct(a, b, beta)
}

/// Kawamata blowup data consumed by certificates.
pub fn kawamata_gamma_bound(
    point: &str,
    qtype: &QuotientType,
    n: i64,
    gamma: Rational,
    a3: &Rational,
    tangent_lct: Rational,
) -> AlphaCertificate {
    let r = qtype.r;
    let a = qtype.residues[1];
    let w = Witness::NdQiNef {
        r,
        a,
        n,
        gamma,
        a3: a3.clone(),
        tangent_lct,
    };
    let mut c = AlphaCertificate {
        point: point.to_string(),
        bound: Rational::zero(),
        exact: false,
        method: Method::NdQiNef,
        witness: w,
        provenance: "DERIVED",
    };
    c.bound = c.replay();
    c
}

pub fn smooth_class_cert(point: &str, note: &str, value: Rational) -> AlphaCertificate {
    make_cert(
        point,
        value.clone(),
        false,
        Method::SmoothClass,
        Witness::SmoothClass {
            note: note.to_string(),
            value,
        },
        "DERIVED",
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m3(rows: [[(i64, i64); 3]; 3]) -> IntersectionMatrix {
        IntersectionMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&(n, d)| rat(n, d)).collect())
                .collect(),
        )
    }

    #[test]
    fn star_on_family9_matrix() {
        let m = m3([
            [(-5, 6), (1, 2), (1, 2)],
            [(1, 2), (-5, 6), (1, 2)],
            [(1, 2), (1, 2), (-5, 6)],
        ]);
        assert!(star_condition(&m));
    }

    #[test]
    fn star_rejects_nonpositive_offdiag() {
        let m = IntersectionMatrix::new(vec![
            vec![rat_i(-1), rat_i(0)],
            vec![rat_i(0), rat_i(-1)],
        ]);
        assert!(!star_condition(&m));
    }

    #[test]
    fn self_intersections() {
        assert_eq!(
            self_intersection_plt(&Rational::zero(), &[3, 5]),
            rat(-8, 15)
        );
        assert_eq!(
            self_intersection_plt(&Rational::zero(), &[4, 7]),
            rat(-11, 28)
        );
        assert_eq!(self_intersection_plt(&Rational::zero(), &[]), rat_i(-2));
    }

    #[test]
    fn mtd_l_red_paper_values() {
        // family 13: min{1, 1/(3 (A^3) + 1 - 3/15)} = 10/19
        let c = bound_mtd_l_red(
            "p_t",
            rat_i(1),
            rat_i(1),
            1,
            rat(1, 15),
            3,
            &rat(11, 30),
        )
        .unwrap();
        assert_eq!(c.bound, rat(10, 19));
        // family 25: 7/11
        let c = bound_mtd_l_red("p_t", rat_i(1), rat_i(1), 1, rat(1, 28), 4, &rat(5, 28))
            .unwrap();
        assert_eq!(c.bound, rat(7, 11));
        // family 38: 8/9
        let c = bound_mtd_l_red("p_t", rat_i(1), rat_i(2), 1, rat(1, 40), 5, &rat(3, 40))
            .unwrap();
        assert_eq!(c.bound, rat(8, 9));
    }

    #[test]
    fn decomposition_solver_family13_case_v() {
        // degrees 1/15, 1/10, 1/5 with known self-intersections for rows 1, 2
        // and the pinned transversal number 1/5
        let known = vec![
            vec![Some(rat(-8, 15)), Some(rat(1, 5)), None],
            vec![None, Some(rat(-7, 10)), None],
            vec![None, None, None],
        ];
        let m = intersection_matrix_from_decomposition(
            &rat_i(1),
            &[1, 1, 1],
            &[rat(1, 15), rat(1, 10), rat(1, 5)],
            &known,
        )
        .unwrap();
        assert_eq!(m.entries[0][2], rat(2, 5));
        assert_eq!(m.entries[1][2], rat(3, 5));
        assert_eq!(m.entries[2][2], rat(-4, 5));
        assert!(star_condition(&m));
    }

    #[test]
    fn deg_qi_values() {
        assert_eq!(degenerate_qi_alpha("p", 2, 1).bound, rat(3, 5));
        assert_eq!(degenerate_qi_alpha("p", 3, 1).bound, rat(4, 7));
        assert_eq!(degenerate_qi_alpha("p", 4, 1).bound, rat(5, 9));
        assert_eq!(degenerate_qi_alpha("p", 10, 1).bound, rat(11, 21));
        assert_eq!(degenerate_qi_alpha("p", 7, 3).bound, rat_i(1));
    }

    #[test]
    fn sing_tang_values() {
        // family 12's 1/2 point: 2/(2 * 1 * 3 * 5/12) = 4/5
        assert_eq!(bound_sing_tang("p", 2, 1, 3, &rat(5, 12)).bound, rat(4, 5));
        // family 7 EI: 2/(2 * 1 * 3 * 2/3) = 1/2
        assert_eq!(bound_sing_tang("p", 2, 1, 3, &rat(2, 3)).bound, rat(1, 2));
    }
}
