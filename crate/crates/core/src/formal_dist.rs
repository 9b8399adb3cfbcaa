//! Formal-distribution identities and exact mode extraction.
//!
//! A local relation `[A(z), B(w)] = sum_i cz_i(z) c_i(w) T_i(w) d_w^{j_i}
//! delta(z/w)` is stored term by term. [`mode_bracket`] extracts the exact
//! bracket `[A_m, B_n]` of Fourier modes by taking residues against
//! `z^{m + wt(A) - 1} w^{n + wt(B) - 1}`, using
//! `delta(z/w) = sum_k z^{-k-1} w^k` and the convention
//! `F(w) = sum_p F_p w^{-p - wt(F)}`.
//!
//! Coefficients `c(w)` are Laurent polynomials, or a Laurent polynomial
//! times the branch `(1 + 4/w)^{h/2}` expanded as a series in `w^{-1}`;
//! a single coefficient of such a series is an exact finite sum, so
//! central terms with square-root kernels still extract exactly.

use std::collections::BTreeMap;
use std::fmt;

use num::traits::Zero;

use crate::scalar::{factorial, int, pow2, rat, Scalar};

/// Errors from mode extraction.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FdError {
    #[error("field `{0}` has no registered weight")]
    UnregisteredField(String),
    #[error("square-root coefficients are only supported on central terms")]
    SqrtOnFieldTarget,
}

/// Sparse Laurent polynomial in one variable.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Scalar>,
}

impl LaurentPoly {
    /// Zero polynomial.
    pub fn zero() -> Self {
        Self::default()
    }

    /// Constant `1`.
    pub fn one() -> Self {
        Self::monomial(0, int(1))
    }

    /// `c * w^e`.
    pub fn monomial(e: i64, c: Scalar) -> Self {
        let mut p = Self::default();
        p.insert_add(e, c);
        p
    }

    /// Constant polynomial.
    pub fn constant(c: Scalar) -> Self {
        Self::monomial(0, c)
    }

    /// Builds from integer `(exponent, coefficient)` pairs.
    pub fn from_pairs(pairs: &[(i64, i64)]) -> Self {
        let mut p = Self::default();
        for (e, c) in pairs {
            p.insert_add(*e, int(*c));
        }
        p
    }

    /// `P(w) = w^2 + 4w`, the square of the odd coordinate.
    pub fn p_poly() -> Self {
        Self::from_pairs(&[(2, 1), (1, 4)])
    }

    /// `P'(w) = 2w + 4`.
    pub fn dp_poly() -> Self {
        Self::from_pairs(&[(1, 2), (0, 4)])
    }

    fn insert_add(&mut self, e: i64, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// True when zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `w^e`.
    pub fn coeff(&self, e: i64) -> Scalar {
        self.terms.get(&e).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Iterates `(exponent, coefficient)` in ascending exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (&i64, &Scalar)> {
        self.terms.iter()
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms.iter() {
            out.insert_add(*e, c.clone());
        }
        out
    }

    /// Product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in self.terms.iter() {
            for (e2, c2) in other.terms.iter() {
                out.insert_add(e1 + e2, c1.clone() * c2.clone());
            }
        }
        out
    }

    /// Scalar multiple.
    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero();
        for (e, c) in self.terms.iter() {
            out.insert_add(*e, c.clone() * s.clone());
        }
        out
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        self.scale(&int(-1))
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (e, c) in self.terms.iter() {
            out.insert_add(e - 1, c.clone() * int(*e));
        }
        out
    }
}

/// Names of the formal distributions appearing in relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum DistName {
    Dbar,
    Dbar1,
    X,
    Xp,
    Beta,
    Beta1,
    Alpha,
    AlphaStar,
    Alpha1,
    Alpha1Star,
}

impl DistName {
    /// Printable name.
    pub fn name(self) -> &'static str {
        match self {
            DistName::Dbar => "dbar",
            DistName::Dbar1 => "dbar1",
            DistName::X => "x",
            DistName::Xp => "x'",
            DistName::Beta => "beta",
            DistName::Beta1 => "beta1",
            DistName::Alpha => "alpha",
            DistName::AlphaStar => "alpha*",
            DistName::Alpha1 => "alpha1",
            DistName::Alpha1Star => "alpha1*",
        }
    }
}

/// Central coordinates that relations can hit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Central {
    /// Virasoro-side central charge coordinate.
    C1,
    /// Second central coordinate, paired with square-root kernels.
    C2,
    /// Heisenberg central element multiplying `kappa0`.
    One0,
    /// Second Heisenberg central element multiplying `chi1`.
    One1,
}

impl Central {
    /// Printable name.
    pub fn name(self) -> &'static str {
        match self {
            Central::C1 => "c1",
            Central::C2 => "c2",
            Central::One0 => "one0",
            Central::One1 => "one1",
        }
    }
}

/// Target of one relation term: a field mode series or a central element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RelTarget {
    Field { name: DistName, der: u32 },
    Central(Central),
}

/// Coefficient profile in the output variable `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coef {
    /// A Laurent polynomial in `w`.
    Poly(LaurentPoly),
    /// `pre(w) * (1 + 4/w)^{halfpow/2}`, expanded in powers of `w^{-1}`.
    Sqrt { pre: LaurentPoly, halfpow: i64 },
}

/// One term `cz(z) * coef(w) * target(w) * d_w^j delta(z/w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelTerm {
    /// Polynomial prefactor in the input variable `z`; usually `1`.
    pub coef_z: LaurentPoly,
    /// Coefficient profile in `w`.
    pub coef: Coef,
    /// Field or central target.
    pub target: RelTarget,
    /// Order of the delta derivative.
    pub j: u32,
}

impl RelTerm {
    /// Field term with polynomial coefficient and trivial `z` prefactor.
    pub fn field(coef: LaurentPoly, name: DistName, der: u32, j: u32) -> Self {
        Self {
            coef_z: LaurentPoly::one(),
            coef: Coef::Poly(coef),
            target: RelTarget::Field { name, der },
            j,
        }
    }

    /// Central term with polynomial coefficient and trivial `z` prefactor.
    pub fn central(coef: LaurentPoly, c: Central, j: u32) -> Self {
        Self {
            coef_z: LaurentPoly::one(),
            coef: Coef::Poly(coef),
            target: RelTarget::Central(c),
            j,
        }
    }

    /// Central term whose coefficient depends on `z` instead of `w`.
    pub fn central_z(coef_z: LaurentPoly, c: Central, j: u32) -> Self {
        Self {
            coef_z,
            coef: Coef::Poly(LaurentPoly::one()),
            target: RelTarget::Central(c),
            j,
        }
    }

    /// Central term with a square-root kernel coefficient.
    pub fn central_sqrt(pre: LaurentPoly, halfpow: i64, c: Central, j: u32) -> Self {
        Self {
            coef_z: LaurentPoly::one(),
            coef: Coef::Sqrt { pre, halfpow },
            target: RelTarget::Central(c),
            j,
        }
    }
}

/// A local relation `[a(z), b(w)] = sum of terms`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalRelation {
    pub a: DistName,
    pub b: DistName,
    pub terms: Vec<RelTerm>,
}

/// Conformal-weight table for the distributions.
#[derive(Clone, Debug)]
pub struct WeightRegistry {
    map: BTreeMap<DistName, i64>,
}

impl Default for WeightRegistry {
    fn default() -> Self {
        let mut map = BTreeMap::new();
        map.insert(DistName::Dbar, 2);
        map.insert(DistName::Dbar1, 2);
        map.insert(DistName::X, 1);
        map.insert(DistName::Xp, 1);
        map.insert(DistName::Beta, 1);
        map.insert(DistName::Beta1, 1);
        map.insert(DistName::Alpha, 1);
        map.insert(DistName::AlphaStar, 0);
        map.insert(DistName::Alpha1, 1);
        map.insert(DistName::Alpha1Star, 0);
        Self { map }
    }
}

impl WeightRegistry {
    /// Empty registry.
    pub fn empty() -> Self {
        Self {
            map: BTreeMap::new(),
        }
    }

    /// Sets one weight.
    pub fn with_weight(mut self, name: DistName, weight: i64) -> Self {
        self.map.insert(name, weight);
        self
    }

    /// Weight lookup.
    pub fn weight(&self, name: DistName) -> Result<i64, FdError> {
        self.map
            .get(&name)
            .copied()
            .ok_or_else(|| FdError::UnregisteredField(name.name().to_string()))
    }
}

/// Mode-level target produced by [`mode_bracket`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ModeTarget {
    Field { name: DistName, mode: i64 },
    Central(Central),
}

impl fmt::Display for ModeTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeTarget::Field { name, mode } => write!(f, "{}@{}", name.name(), mode),
            ModeTarget::Central(c) => write!(f, "{}", c.name()),
        }
    }
}

/// Falling factorial `k (k-1) ... (k-j+1)`.
fn falling(k: i64, j: u32) -> Scalar {
    let mut acc = int(1);
    for q in 0..j as i64 {
        acc *= int(k - q);
    }
    acc
}

/// Binomial coefficient `C(h/2, r)` for odd `h`.
pub fn binom_half(h: i64, r: u64) -> Scalar {
    let mut acc = int(1);
    for i in 0..r as i64 {
        acc *= rat(h, 2) - int(i);
    }
    acc / factorial(r)
}

/// Coefficient of `w^s` in a [`Coef`] profile.
fn coef_at(coef: &Coef, s: i64) -> Scalar {
    match coef {
        Coef::Poly(p) => p.coeff(s),
        Coef::Sqrt { pre, halfpow } => {
            // (1 + 4/w)^{h/2} = sum_{r >= 0} C(h/2, r) 4^r w^{-r}
            let mut acc = Scalar::zero();
            for (p, c) in pre.iter() {
                let r = p - s;
                if r >= 0 {
                    acc += c.clone() * binom_half(*halfpow, r as u64) * pow2(2 * r);
                }
            }
            acc
        }
    }
}

/// Exact bracket `[a_m, b_n]` of modes, as a sorted list of targets with
/// nonzero coefficients.
pub fn mode_bracket(
    rel: &LocalRelation,
    m: i64,
    n: i64,
    reg: &WeightRegistry,
) -> Result<Vec<(ModeTarget, Scalar)>, FdError> {
    let wa = reg.weight(rel.a)?;
    let wb = reg.weight(rel.b)?;
    let mut out: BTreeMap<ModeTarget, Scalar> = BTreeMap::new();
    let mut add = |t: ModeTarget, v: Scalar| {
        if v.is_zero() {
            return;
        }
        let entry = out.entry(t).or_insert_with(Scalar::zero);
        *entry += v;
        if entry.is_zero() {
            out.remove(&t);
        }
    };
    for term in &rel.terms {
        let j = term.j;
        for (p_z, c_z) in term.coef_z.iter() {
            let k = m + wa - 1 + p_z;
            let fall = falling(k, j);
            if fall.is_zero() {
                continue;
            }
            match term.target {
                RelTarget::Field { name, der } => {
                    let wt = reg.weight(name)?;
                    let monos: Vec<(i64, Scalar)> = match &term.coef {
                        Coef::Poly(p) => p.iter().map(|(e, c)| (*e, c.clone())).collect(),
                        Coef::Sqrt { .. } => return Err(FdError::SqrtOnFieldTarget),
                    };
                    for (s, c_w) in monos {
                        let p = n + wb + s + k - j as i64 - wt - der as i64;
                        let mut mult = c_z.clone() * c_w * fall.clone();
                        for q in 0..der as i64 {
                            mult *= int(p + wt + q);
                        }
                        if der % 2 == 1 {
                            mult = -mult;
                        }
                        add(ModeTarget::Field { name, mode: p }, mult);
                    }
                }
                RelTarget::Central(c) => {
                    let s = j as i64 - k - n - wb;
                    let v = c_z.clone() * coef_at(&term.coef, s) * fall.clone();
                    add(ModeTarget::Central(c), v);
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Truncated series for `sqrt(1 + z)`: coefficients `C(1/2, s)`.
pub fn sqrt_series(terms: usize) -> Vec<Scalar> {
    (0..terms as u64).map(|s| binom_half(1, s)).collect()
}

/// The library of transcribed local relations, keyed by short names:
///
/// * `eezw`, `ddzw`, `dezw`: brackets of the two Virasoro-type fields;
/// * `currentalgebra1` .. `currentalgebra4`: action of the Virasoro-type
///   fields on the two current fields;
/// * `boson_bb`, `boson_b1b1`, `boson_bb1`: Heisenberg field brackets.
pub fn relation_library() -> BTreeMap<&'static str, LocalRelation> {
    let p = LaurentPoly::p_poly;
    let dp = LaurentPoly::dp_poly;
    let mut lib = BTreeMap::new();

    lib.insert(
        "eezw",
        LocalRelation {
            a: DistName::Dbar1,
            b: DistName::Dbar1,
            terms: vec![
                RelTerm::field(LaurentPoly::one(), DistName::Dbar, 1, 0),
                RelTerm::field(LaurentPoly::constant(int(2)), DistName::Dbar, 0, 1),
                RelTerm::central(p().neg(), Central::C1, 3),
                RelTerm::central(dp().scale(&rat(-3, 2)), Central::C1, 2),
            ],
        },
    );

    lib.insert(
        "ddzw",
        LocalRelation {
            a: DistName::Dbar,
            b: DistName::Dbar,
            terms: vec![
                RelTerm::field(p(), DistName::Dbar, 1, 0),
                RelTerm::field(dp(), DistName::Dbar, 0, 0),
                RelTerm::field(p().scale(&int(2)), DistName::Dbar, 0, 1),
                RelTerm::central(p().mul(&p()).neg(), Central::C1, 3),
                RelTerm::central_z(dp().mul(&p()).scale(&int(-3)), Central::C1, 2),
                RelTerm::central_z(p().scale(&int(-6)), Central::C1, 1),
                RelTerm::central(LaurentPoly::constant(int(-12)), Central::C1, 1),
            ],
        },
    );

    lib.insert(
        "dezw",
        LocalRelation {
            a: DistName::Dbar,
            b: DistName::Dbar1,
            terms: vec![
                RelTerm::field(p(), DistName::Dbar1, 1, 0),
                RelTerm::field(p().scale(&int(2)), DistName::Dbar1, 0, 1),
                RelTerm::field(dp().scale(&rat(3, 2)), DistName::Dbar1, 0, 0),
                RelTerm::central_sqrt(
                    LaurentPoly::from_pairs(&[(2, 3), (1, 6)]),
                    1,
                    Central::C2,
                    2,
                ),
                RelTerm::central_sqrt(LaurentPoly::from_pairs(&[(3, 1)]), 3, Central::C2, 3),
            ],
        },
    );

    let w_plus_2 = LaurentPoly::from_pairs(&[(1, 1), (0, 2)]);
    lib.insert(
        "currentalgebra1",
        LocalRelation {
            a: DistName::Dbar1,
            b: DistName::Xp,
            terms: vec![
                RelTerm::field(p(), DistName::X, 1, 0),
                RelTerm::field(p(), DistName::X, 0, 1),
                RelTerm::field(w_plus_2.clone(), DistName::X, 0, 0),
            ],
        },
    );
    lib.insert(
        "currentalgebra2",
        LocalRelation {
            a: DistName::Dbar1,
            b: DistName::X,
            terms: vec![
                RelTerm::field(LaurentPoly::one(), DistName::Xp, 1, 0),
                RelTerm::field(LaurentPoly::one(), DistName::Xp, 0, 1),
            ],
        },
    );
    lib.insert(
        "currentalgebra3",
        LocalRelation {
            a: DistName::Dbar,
            b: DistName::Xp,
            terms: vec![
                RelTerm::field(p(), DistName::Xp, 1, 0),
                RelTerm::field(p(), DistName::Xp, 0, 1),
                RelTerm::field(w_plus_2.clone(), DistName::Xp, 0, 0),
            ],
        },
    );
    lib.insert(
        "currentalgebra4",
        LocalRelation {
            a: DistName::Dbar,
            b: DistName::X,
            terms: vec![
                RelTerm::field(p(), DistName::X, 1, 0),
                RelTerm::field(p(), DistName::X, 0, 1),
                RelTerm::field(w_plus_2.scale(&int(2)), DistName::X, 0, 0),
            ],
        },
    );

    lib.insert(
        "boson_bb",
        LocalRelation {
            a: DistName::Beta,
            b: DistName::Beta,
            terms: vec![RelTerm::central(
                LaurentPoly::constant(int(-2)),
                Central::One0,
                1,
            )],
        },
    );
    lib.insert(
        "boson_b1b1",
        LocalRelation {
            a: DistName::Beta1,
            b: DistName::Beta1,
            terms: vec![
                RelTerm::central(p().scale(&int(-2)), Central::One0, 1),
                RelTerm::central(w_plus_2.scale(&int(-2)), Central::One0, 0),
            ],
        },
    );
    lib.insert(
        "boson_bb1",
        LocalRelation {
            a: DistName::Beta,
            b: DistName::Beta1,
            terms: vec![RelTerm::central_sqrt(
                LaurentPoly::monomial(1, int(-1)),
                1,
                Central::One1,
                1,
            )],
        },
    );

    lib
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kahler::mu;

    fn lib() -> BTreeMap<&'static str, LocalRelation> {
        relation_library()
    }

    fn modes(rel: &LocalRelation, m: i64, n: i64) -> Vec<(ModeTarget, Scalar)> {
        mode_bracket(rel, m, n, &WeightRegistry::default()).unwrap()
    }

    #[test]
    fn library_term_counts() {
        let lib = lib();
        let count = |name: &str, central: bool| {
            lib[name]
                .terms
                .iter()
                .filter(|t| matches!(t.target, RelTarget::Central(_)) == central)
                .count()
        };
        assert_eq!((count("ddzw", false), count("ddzw", true)), (3, 4));
        assert_eq!((count("eezw", false), count("eezw", true)), (2, 2));
        assert_eq!((count("dezw", false), count("dezw", true)), (3, 2));
        assert_eq!(
            (
                count("currentalgebra1", false),
                count("currentalgebra1", true)
            ),
            (3, 0)
        );
        assert_eq!(
            (
                count("currentalgebra2", false),
                count("currentalgebra2", true)
            ),
            (2, 0)
        );
    }

    #[test]
    fn sqrt_series_head() {
        let s = sqrt_series(4);
        assert_eq!(s, vec![int(1), rat(1, 2), rat(-1, 8), rat(1, 16)]);
    }

    #[test]
    fn sqrt_series_squares_to_one_plus_z() {
        let n = 12;
        let s = sqrt_series(n);
        for k in 0..n {
            let mut acc = Scalar::zero();
            for i in 0..=k {
                acc += s[i].clone() * s[k - i].clone();
            }
            let want = if k == 0 || k == 1 { int(1) } else { int(0) };
            assert_eq!(acc, want, "coefficient {}", k);
        }
    }

    #[test]
    fn boson_bb_modes() {
        let lib = lib();
        for m in -4..=4 {
            for n in -4..=4 {
                let got = modes(&lib["boson_bb"], m, n);
                if m + n == 0 && m != 0 {
                    assert_eq!(got, vec![(ModeTarget::Central(Central::One0), int(-2 * m))]);
                } else {
                    assert!(got.is_empty(), "m={} n={}", m, n);
                }
            }
        }
    }

    #[test]
    fn boson_b1b1_modes() {
        let lib = lib();
        for m in -4..=4 {
            for n in -4..=4 {
                let got = modes(&lib["boson_b1b1"], m, n);
                let want = if m + n == -2 {
                    int(2 * (n + 1))
                } else if m + n == -1 {
                    int(2 * (4 * n + 2))
                } else {
                    Scalar::zero()
                };
                if want.is_zero() {
                    assert!(got.is_empty(), "m={} n={}", m, n);
                } else {
                    assert_eq!(got, vec![(ModeTarget::Central(Central::One0), want)]);
                }
            }
        }
    }

    #[test]
    fn boson_cross_modes_reproduce_mu() {
        let lib = lib();
        for m in -5..=5 {
            for n in -5..=5 {
                let got = modes(&lib["boson_bb1"], m, n);
                let want = int(2) * mu(m, n);
                if want.is_zero() {
                    assert!(got.is_empty(), "m={} n={}", m, n);
                } else {
                    assert_eq!(
                        got,
                        vec![(ModeTarget::Central(Central::One1), want)],
                        "m={} n={}",
                        m,
                        n
                    );
                }
            }
        }
    }

    #[test]
    fn current_action_example() {
        let lib = lib();
        let got = modes(&lib["currentalgebra2"], 0, 1);
        assert_eq!(
            got,
            vec![(
                ModeTarget::Field {
                    name: DistName::Xp,
                    mode: 1
                },
                int(-1)
            )]
        );
    }

    #[test]
    fn eezw_field_part_is_the_shifted_witt_bracket() {
        let lib = lib();
        for m in -4..=4 {
            for n in -4..=4 {
                let got = modes(&lib["eezw"], m, n);
                let field: Vec<_> = got
                    .iter()
                    .filter(|(t, _)| matches!(t, ModeTarget::Field { .. }))
                    .cloned()
                    .collect();
                if m == n {
                    assert!(field.is_empty());
                } else {
                    assert_eq!(
                        field,
                        vec![(
                            ModeTarget::Field {
                                name: DistName::Dbar,
                                mode: m + n
                            },
                            int(m - n)
                        )]
                    );
                }
            }
        }
    }

    #[test]
    fn eezw_central_part_is_antisymmetric() {
        let lib = lib();
        let central = |m: i64, n: i64| -> Scalar {
            modes(&lib["eezw"], m, n)
                .into_iter()
                .filter_map(|(t, v)| match t {
                    ModeTarget::Central(Central::C1) => Some(v),
                    _ => None,
                })
                .sum()
        };
        for m in -4..=4 {
            for n in -4..=4 {
                assert_eq!(central(m, n), -central(n, m), "m={} n={}", m, n);
                if m + n != -1 && m + n != -2 {
                    assert!(central(m, n).is_zero());
                }
            }
        }
    }

    #[test]
    fn ddzw_field_part_matches_closed_form() {
        let lib = lib();
        for m in -4..=4 {
            for n in -4..=4 {
                let got = modes(&lib["ddzw"], m, n);
                let mut want: BTreeMap<ModeTarget, Scalar> = BTreeMap::new();
                let mut put = |mode: i64, v: Scalar| {
                    if !v.is_zero() {
                        let key = ModeTarget::Field {
                            name: DistName::Dbar,
                            mode,
                        };
                        let e = want.entry(key).or_insert_with(Scalar::zero);
                        *e += v;
                        if e.is_zero() {
                            want.remove(&key);
                        }
                    }
                };
                put(m + n + 2, int(m - n));
                put(m + n + 1, int(4 * (m - n)));
                let field: BTreeMap<ModeTarget, Scalar> = got
                    .into_iter()
                    .filter(|(t, _)| matches!(t, ModeTarget::Field { .. }))
                    .collect();
                assert_eq!(field, want, "m={} n={}", m, n);
            }
        }
    }

    #[test]
    fn dezw_field_part_matches_closed_form() {
        let lib = lib();
        for m in -4..=4 {
            for n in -4..=4 {
                let got = modes(&lib["dezw"], m, n);
                let mut want: BTreeMap<ModeTarget, Scalar> = BTreeMap::new();
                let mut put = |mode: i64, v: Scalar| {
                    if !v.is_zero() {
                        want.insert(
                            ModeTarget::Field {
                                name: DistName::Dbar1,
                                mode,
                            },
                            v,
                        );
                    }
                };
                put(m + n + 2, int(m - n + 1));
                put(m + n + 1, int(4 * m - 4 * n + 2));
                let field: BTreeMap<ModeTarget, Scalar> = got
                    .into_iter()
                    .filter(|(t, _)| matches!(t, ModeTarget::Field { .. }))
                    .collect();
                assert_eq!(field, want, "m={} n={}", m, n);
            }
        }
    }

    #[test]
    fn sqrt_kernels_rejected_on_field_targets() {
        let rel = LocalRelation {
            a: DistName::Beta,
            b: DistName::Beta,
            terms: vec![RelTerm {
                coef_z: LaurentPoly::one(),
                coef: Coef::Sqrt {
                    pre: LaurentPoly::one(),
                    halfpow: 1,
                },
                target: RelTarget::Field {
                    name: DistName::Beta,
                    der: 0,
                },
                j: 0,
            }],
        };
        let err = mode_bracket(&rel, 0, 0, &WeightRegistry::default());
        assert_eq!(err.unwrap_err(), FdError::SqrtOnFieldTarget);
    }

    #[test]
    fn unregistered_weight_is_an_error() {
        let lib = lib();
        let err = mode_bracket(&lib["boson_bb"], 0, 0, &WeightRegistry::empty());
        assert!(matches!(err.unwrap_err(), FdError::UnregisteredField(_)));
    }
}
