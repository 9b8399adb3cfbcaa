//! The space of Kähler differentials of `R` modulo exact forms.
//!
//! `Omega_R / dR` is two-dimensional, spanned by the classes
//! `w0 = [t^{-1} dt]` and `w1 = [t^{-1} u dt]`. This module computes the
//! class of `f dg` two independent ways:
//!
//! * [`reduce`] uses closed-form coefficient formulas, with the
//!   combinatorial factor [`mu`] built from double factorials;
//! * [`reduce_oracle`] rewrites `f dg` step by step using only the two
//!   exact-form relations `d(t^m u) = 0` and `d(t^m) = 0` together with the
//!   ring identity `u du = (t + 2) dt`, terminating in the `{w0, w1}` basis.
//!
//! Agreement of the two on large grids is one of the primary checks. The
//! module also evaluates the action of derivations on the quotient (which
//! vanishes identically) and the character of the order-six automorphism
//! group on the two-dimensional quotient.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::traits::{One, Signed, Zero};

use crate::ring_r::{
    apply_automorphism, apply_derivation, AutLabel, Automorphism, Derivation, RElem, RingError,
};
use crate::scalar::{factorial, int, parse_scalar, pow2, rat, render_scalar, Scalar};

/// Default rewriting step budget for [`reduce_oracle`].
pub const REDUCE_BUDGET: usize = 200_000;

/// Errors from the differential-form computations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KahlerError {
    #[error("double factorial undefined for {0}")]
    DoubleFactorial(i64),
    #[error("form rewriting exceeded the step budget")]
    StepBudget,
}

/// Class in `Omega_R / dR`, written `c0 * w0 + c1 * w1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaClass {
    /// Coefficient of `w0 = [t^{-1} dt]`.
    pub c0: Scalar,
    /// Coefficient of `w1 = [t^{-1} u dt]`.
    pub c1: Scalar,
}

impl Default for OmegaClass {
    fn default() -> Self {
        Self::zero()
    }
}

impl OmegaClass {
    /// The zero class.
    pub fn zero() -> Self {
        Self {
            c0: Scalar::zero(),
            c1: Scalar::zero(),
        }
    }

    /// `c0 * w0 + c1 * w1`.
    pub fn new(c0: Scalar, c1: Scalar) -> Self {
        Self { c0, c1 }
    }

    /// The basis class `w0`.
    pub fn w0() -> Self {
        Self::new(int(1), Scalar::zero())
    }

    /// The basis class `w1`.
    pub fn w1() -> Self {
        Self::new(Scalar::zero(), int(1))
    }

    /// True when both coefficients vanish.
    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.c0.clone() + other.c0.clone(),
            self.c1.clone() + other.c1.clone(),
        )
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Self {
        Self::new(
            self.c0.clone() - other.c0.clone(),
            self.c1.clone() - other.c1.clone(),
        )
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        Self::new(-self.c0.clone(), -self.c1.clone())
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Scalar) -> Self {
        Self::new(self.c0.clone() * c.clone(), self.c1.clone() * c.clone())
    }
}

impl fmt::Display for OmegaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (c, name) in [(&self.c0, "w0"), (&self.c1, "w1")] {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
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
            if mag.is_one() {
                write!(f, "{}", name)?;
            } else {
                write!(f, "{}*{}", render_scalar(&mag), name)?;
            }
        }
        Ok(())
    }
}

impl FromStr for OmegaClass {
    type Err = RingError;

    /// Parses the `Display` grammar: signed terms over `w0` and `w1` with
    /// optional rational coefficients, e.g. `2*w1`, `w0 - 1/2*w1`, `0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(RingError::Parse("empty input".into()));
        }
        let mut out = OmegaClass::zero();
        let mut cur = String::new();
        let mut cur_neg = false;
        let chars: Vec<char> = compact.chars().collect();
        let mut pending: Vec<(bool, String)> = Vec::new();
        for (i, ch) in chars.iter().enumerate() {
            if (*ch == '+' || *ch == '-') && i > 0 && !matches!(chars[i - 1], '/' | '*') {
                pending.push((cur_neg, std::mem::take(&mut cur)));
                cur_neg = *ch == '-';
            } else if (*ch == '+' || *ch == '-') && i == 0 {
                cur_neg = *ch == '-';
            } else {
                cur.push(*ch);
            }
        }
        pending.push((cur_neg, cur));
        for (neg, term) in pending {
            if term.is_empty() {
                return Err(RingError::Parse(format!("empty term in `{}`", s)));
            }
            let mut coef = int(1);
            let mut basis: Option<usize> = None;
            for piece in term.split('*') {
                match piece {
                    "w0" => basis = Some(0),
                    "w1" => basis = Some(1),
                    _ => {
                        let c = parse_scalar(piece)
                            .map_err(|_| RingError::Parse(format!("bad factor `{}`", piece)))?;
                        coef *= c;
                    }
                }
            }
            if neg {
                coef = -coef;
            }
            match basis {
                Some(0) => out.c0 += coef,
                Some(1) => out.c1 += coef,
                _ => {
                    if !coef.is_zero() {
                        return Err(RingError::Parse(format!(
                            "term `{}` names no basis class",
                            term
                        )));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Double factorial extended to `n = -1` (value `1`) and `n = -3`
/// (value `-1`); undefined below `-3` and at `-2`.
pub fn double_factorial(n: i64) -> Result<Scalar, KahlerError> {
    match n {
        -1 => Ok(int(1)),
        -3 => Ok(int(-1)),
        0 | 1 => Ok(int(1)),
        n if n >= 2 => {
            let mut acc = int(1);
            let mut i = n;
            while i >= 2 {
                acc *= int(i);
                i -= 2;
            }
            Ok(acc)
        }
        n => Err(KahlerError::DoubleFactorial(n)),
    }
}

/// The coefficient `mu(k, l)` of `w1` in the class of `t^k d(t^l u)`:
/// zero when `k = 0` or `k + l + 1 < 0`, otherwise
/// `k * (-1)^{k+l+1} * 2^{k+l} * (2(k+l) - 1)!! / (k + l + 1)!`.
pub fn mu(k: i64, l: i64) -> Scalar {
    if k == 0 || k + l + 1 < 0 {
        return Scalar::zero();
    }
    let s = k + l;
    let sign = if (s + 1).rem_euclid(2) == 0 {
        int(1)
    } else {
        int(-1)
    };
    // s >= -1 here, so 2s - 1 >= -3 and the double factorial is defined.
    let df = double_factorial(2 * s - 1).expect("argument bounded below by -3");
    int(k) * sign * pow2(s) * df / factorial((s + 1) as u64)
}

/// Class of `f dg` by the closed-form coefficient formulas, extended
/// bilinearly over the monomials of `f` and `g`.
///
/// On monomial pairs:
/// * `t^k d(t^l)        -> l * delta(k+l, 0) * w0`
/// * `t^k u d(t^l u)    -> ((l+1) delta(k+l, -2) + (4l+2) delta(k+l, -1)) * w0`
/// * `t^k d(t^l u)      -> mu(k, l) * w1`
/// * `t^k u d(t^l)      -> -l * mu(1, k+l-1) * w1`
pub fn reduce(f: &RElem, g: &RElem) -> OmegaClass {
    let mut out = OmegaClass::zero();
    for ((k, wf), cf) in f.terms() {
        for ((l, wg), cg) in g.terms() {
            let c = cf.clone() * cg.clone();
            match (wf, wg) {
                (false, false) => {
                    if k + l == 0 {
                        out.c0 += c * int(*l);
                    }
                }
                (true, true) => {
                    if k + l == -2 {
                        out.c0 += c * int(l + 1);
                    } else if k + l == -1 {
                        out.c0 += c * int(4 * l + 2);
                    }
                }
                (false, true) => {
                    out.c1 += c * mu(*k, *l);
                }
                (true, false) => {
                    out.c1 -= c * int(*l) * mu(1, k + l - 1);
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum FormVar {
    Dt,
    Du,
}

/// Class of `f dg` by direct rewriting, independent of [`reduce`].
///
/// Expands `f dg` into terms `c * t^a u^w dvar` and rewrites with:
/// * `t^a u du = (t^{a+1} + 2 t^a) dt` (ring identity `u du = (t+2) dt`),
/// * `t^a du = -a t^{a-1} u dt` (exactness of `d(t^a u)`),
/// * `t^a dt = delta(a, -1) w0` (exactness of `d(t^{a+1})`),
/// * `(a+2) t^a u dt = -(4a+2) t^{a-1} u dt`, walked toward `a = -1`,
///   where `t^{-1} u dt = w1`.
pub fn reduce_oracle(f: &RElem, g: &RElem) -> Result<OmegaClass, KahlerError> {
    reduce_oracle_with_budget(f, g, REDUCE_BUDGET)
}

/// [`reduce_oracle`] with an explicit step budget.
pub fn reduce_oracle_with_budget(
    f: &RElem,
    g: &RElem,
    budget: usize,
) -> Result<OmegaClass, KahlerError> {
    let mut pending: Vec<(i64, bool, FormVar, Scalar)> = Vec::new();
    // d(t^l) = l t^{l-1} dt; d(t^l u) = t^l du + l t^{l-1} u dt.
    let push_product = |pending: &mut Vec<(i64, bool, FormVar, Scalar)>,
                        k: i64,
                        wf: bool,
                        a: i64,
                        wa: bool,
                        var: FormVar,
                        c: Scalar| {
        if c.is_zero() {
            return;
        }
        // (t^k u^wf) * (t^a u^wa), folding u^2 -> t^2 + 4t.
        if wf && wa {
            pending.push((k + a + 2, false, var, c.clone()));
            pending.push((k + a + 1, false, var, c * int(4)));
        } else {
            pending.push((k + a, wf ^ wa, var, c));
        }
    };
    for ((k, wf), cf) in f.terms() {
        for ((l, wg), cg) in g.terms() {
            let c = cf.clone() * cg.clone();
            if *wg {
                push_product(&mut pending, *k, *wf, *l, false, FormVar::Du, c.clone());
                push_product(&mut pending, *k, *wf, l - 1, true, FormVar::Dt, c * int(*l));
            } else {
                push_product(
                    &mut pending,
                    *k,
                    *wf,
                    l - 1,
                    false,
                    FormVar::Dt,
                    c * int(*l),
                );
            }
        }
    }

    let mut out = OmegaClass::zero();
    let mut steps = 0usize;
    while let Some((a, w, var, c)) = pending.pop() {
        steps += 1;
        if steps > budget {
            return Err(KahlerError::StepBudget);
        }
        if c.is_zero() {
            continue;
        }
        match (w, var) {
            (true, FormVar::Du) => {
                pending.push((a + 1, false, FormVar::Dt, c.clone()));
                pending.push((a, false, FormVar::Dt, c * int(2)));
            }
            (false, FormVar::Du) => {
                if a != 0 {
                    pending.push((a - 1, true, FormVar::Dt, c * int(-a)));
                }
            }
            (false, FormVar::Dt) => {
                if a == -1 {
                    out.c0 += c;
                }
            }
            (true, FormVar::Dt) => {
                if a == -1 {
                    out.c1 += c;
                } else if a >= 0 {
                    pending.push((a - 1, true, FormVar::Dt, c * rat(-(4 * a + 2), a + 2)));
                } else if a != -3 {
                    pending.push((a + 1, true, FormVar::Dt, c * rat(-(a + 3), 4 * a + 6)));
                }
            }
        }
    }
    Ok(out)
}

/// Action of a derivation on a class, via the fixed representatives
/// `w0 = [t^{-1} dt]` and `w1 = [t^{-1} u dt]` and the Leibniz rule
/// `L_d(f dg) = d(f) dg + f d(d(g))`.
///
/// This vanishes identically on the quotient; the verification suites
/// confirm that instead of assuming it.
pub fn der_action(d: &Derivation, omega: &OmegaClass) -> OmegaClass {
    let lie = |a: &RElem, b: &RElem| -> OmegaClass {
        reduce(&apply_derivation(d, a), b).add(&reduce(a, &apply_derivation(d, b)))
    };
    let on_w0 = lie(&RElem::t_pow(-1), &RElem::t());
    let on_w1 = lie(&RElem::t_pow_u(-1), &RElem::t());
    on_w0.scale(&omega.c0).add(&on_w1.scale(&omega.c1))
}

/// Matrix of an automorphism on `Omega_R / dR` in the `{w0, w1}` basis.
/// Row `i` holds the class of the transformed `i`-th basis representative.
pub fn d3_matrix(g: &Automorphism) -> [[Scalar; 2]; 2] {
    let img_w0 = reduce(
        &apply_automorphism(g, &RElem::t_pow(-1)),
        &apply_automorphism(g, &RElem::t()),
    );
    let img_w1 = reduce(
        &apply_automorphism(g, &RElem::t_pow_u(-1)),
        &apply_automorphism(g, &RElem::t()),
    );
    [[img_w0.c0, img_w0.c1], [img_w1.c0, img_w1.c1]]
}

/// Character of the order-six group on `Omega_R / dR`: the trace of
/// [`d3_matrix`] for every group element.
pub fn d3_character() -> Vec<(AutLabel, Scalar)> {
    Automorphism::group()
        .iter()
        .map(|g| {
            let m = d3_matrix(g);
            (g.label, m[0][0].clone() + m[1][1].clone())
        })
        .collect()
}

/// Character values on the three conjugacy classes
/// (identity, order-two elements, order-three elements).
pub fn d3_character_by_class() -> BTreeMap<&'static str, Scalar> {
    let mut out = BTreeMap::new();
    for (label, chi) in d3_character() {
        let class = match label {
            AutLabel::Id => "id",
            l if l.is_reflection() => "order2",
            _ => "order3",
        };
        let prev = out.insert(class, chi.clone());
        if let Some(prev) = prev {
            assert_eq!(prev, chi, "character must be constant on conjugacy classes");
        }
    }
    out
}
