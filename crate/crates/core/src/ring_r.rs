//! The coordinate ring `R = C[t, t^{-1}, u]` with the single relation
//! `u^2 = t^2 + 4t`, which presents the ring of functions on a projective
//! line with three marked points.
//!
//! Elements are stored sparsely as maps `(k, w) -> c` standing for the sum
//! of monomials `c * t^k * u^w` with `k` any integer and `w` in `{0, 1}`.
//! Multiplication folds `u^2` back to `t^2 + 4t`, so the normal form is
//! unique and equality is literal map equality.
//!
//! The module also provides the distinguished derivation
//! `D = (t + 2) d/du + u d/dt` of `R`, general derivations `f * D`, their
//! Lie bracket, the order-six automorphism group of `R` (generated by an
//! involution `psi` and an order-three map `tau2`), and the images of the
//! partial-fraction generators under the ring isomorphism `phi` used to
//! transport Laurent-series arguments into `R`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::traits::{One, Signed, Zero};

use crate::scalar::{int, parse_scalar, rat, render_scalar, Scalar};

/// Monomial key `(k, w)` for `t^k * u^w`.
pub type MonoKey = (i64, bool);

/// Errors from ring construction and parsing.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("automorphism images violate t * t^-1 = 1")]
    BadUnitImage,
    #[error("automorphism images violate u^2 = t^2 + 4t")]
    BadRelationImage,
    #[error("cannot parse ring element: {0}")]
    Parse(String),
}

/// Element of `R` in normal form: a finite sum of `c * t^k * u^w`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RElem {
    terms: BTreeMap<MonoKey, Scalar>,
}

impl RElem {
    /// The zero element.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The unit element `1`.
    pub fn one() -> Self {
        Self::monomial(0, false, int(1))
    }

    /// The single monomial `c * t^k * u^w`; drops it when `c = 0`.
    pub fn monomial(k: i64, w: bool, c: Scalar) -> Self {
        let mut e = Self::default();
        e.insert_add((k, w), c);
        e
    }

    /// `t^k`.
    pub fn t_pow(k: i64) -> Self {
        Self::monomial(k, false, int(1))
    }

    /// `t`.
    pub fn t() -> Self {
        Self::t_pow(1)
    }

    /// `u`.
    pub fn u() -> Self {
        Self::monomial(0, true, int(1))
    }

    /// `t^k * u`.
    pub fn t_pow_u(k: i64) -> Self {
        Self::monomial(k, true, int(1))
    }

    /// True when the element is zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates terms in ascending `(k, w)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&MonoKey, &Scalar)> {
        self.terms.iter()
    }

    /// Number of nonzero monomials.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `t^k * u^w`, zero when absent.
    pub fn coeff(&self, k: i64, w: bool) -> Scalar {
        self.terms
            .get(&(k, w))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    fn insert_add(&mut self, key: MonoKey, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.terms.iter() {
            out.insert_add(*k, c.clone());
        }
        out
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.terms.iter() {
            out.insert_add(*k, -c.clone());
        }
        out
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c.clone();
        }
        out
    }

    /// Product in `R`, folding `u^2 -> t^2 + 4t`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((k1, w1), c1) in self.terms.iter() {
            for ((k2, w2), c2) in other.terms.iter() {
                let c = c1.clone() * c2.clone();
                let k = k1 + k2;
                match (w1, w2) {
                    (false, false) => out.insert_add((k, false), c),
                    (true, false) | (false, true) => out.insert_add((k, true), c),
                    (true, true) => {
                        out.insert_add((k + 2, false), c.clone());
                        out.insert_add((k + 1, false), c * int(4));
                    }
                }
            }
        }
        out
    }

    /// `self^e` for `e >= 0`.
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl fmt::Display for RElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((k, w), c) in self.terms.iter() {
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
            let mut body: Vec<String> = Vec::new();
            if *k == 1 {
                body.push("t".to_string());
            } else if *k != 0 {
                body.push(format!("t^{}", k));
            }
            if *w {
                body.push("u".to_string());
            }
            if body.is_empty() {
                write!(f, "{}", render_scalar(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", body.join("*"))?;
            } else {
                write!(f, "{}*{}", render_scalar(&mag), body.join("*"))?;
            }
        }
        Ok(())
    }
}

impl FromStr for RElem {
    type Err = RingError;

    /// Parses the `Display` grammar: terms joined by `+`/`-`, each term an
    /// optional rational coefficient and optional `t^k` and `u` factors
    /// joined by `*`. Examples: `0`, `3/2*t^-1*u - 2`, `t + 4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(RingError::Parse("empty input".into()));
        }
        // Split on +/- separators; a sign is part of the current token when
        // it follows '^', '/', or '*'.
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut cur_neg = false;
        let chars: Vec<char> = compact.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let ch = chars[i];
            if (ch == '+' || ch == '-') && i > 0 && !matches!(chars[i - 1], '^' | '/' | '*') {
                pieces.push((cur_neg, std::mem::take(&mut cur)));
                cur_neg = ch == '-';
            } else if (ch == '+' || ch == '-') && i == 0 {
                cur_neg = ch == '-';
            } else {
                cur.push(ch);
            }
            i += 1;
        }
        pieces.push((cur_neg, cur));

        let mut out = RElem::zero();
        for (neg, term) in pieces {
            if term.is_empty() {
                return Err(RingError::Parse(format!("empty term in `{}`", s)));
            }
            let mut elem = RElem::one();
            let mut coef = int(1);
            for piece in term.split('*') {
                if piece == "t" {
                    elem = elem.mul(&RElem::t());
                } else if piece == "u" {
                    elem = elem.mul(&RElem::u());
                } else if let Some(exp) = piece.strip_prefix("t^") {
                    let k: i64 = exp
                        .parse()
                        .map_err(|_| RingError::Parse(format!("bad exponent `{}`", piece)))?;
                    elem = elem.mul(&RElem::t_pow(k));
                } else {
                    let c = parse_scalar(piece)
                        .map_err(|_| RingError::Parse(format!("bad factor `{}`", piece)))?;
                    coef *= c;
                }
            }
            if neg {
                coef = -coef;
            }
            out = out.add(&elem.scale(&coef));
        }
        Ok(out)
    }
}

/// Applies the distinguished derivation `D = (t + 2) d/du + u d/dt`.
///
/// On monomials: `D(t^k) = k t^{k-1} u` and
/// `D(t^k u) = (k+1) t^{k+1} + (4k+2) t^k`.
pub fn apply_d(f: &RElem) -> RElem {
    let mut out = RElem::zero();
    for ((k, w), c) in f.terms() {
        if !*w {
            out.insert_add((k - 1, true), c.clone() * int(*k));
        } else {
            out.insert_add((k + 1, false), c.clone() * int(k + 1));
            out.insert_add((*k, false), c.clone() * int(4 * k + 2));
        }
    }
    out
}

/// A derivation of `R` of the form `coef * D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    /// The ring coefficient `f` in `f * D`.
    pub coef: RElem,
}

impl Derivation {
    /// The derivation `coef * D`.
    pub fn new(coef: RElem) -> Self {
        Self { coef }
    }

    /// Basis derivation `d_n = t^n u D`.
    pub fn d(n: i64) -> Self {
        Self::new(RElem::t_pow_u(n))
    }

    /// Basis derivation `d1_n = t^n D`.
    pub fn d1(n: i64) -> Self {
        Self::new(RElem::t_pow(n))
    }

    /// Zero derivation.
    pub fn is_zero(&self) -> bool {
        self.coef.is_zero()
    }
}

/// `d(f)` for `d = g * D`.
pub fn apply_derivation(d: &Derivation, f: &RElem) -> RElem {
    d.coef.mul(&apply_d(f))
}

/// Lie bracket `[f D, g D] = (f D(g) - g D(f)) D`.
pub fn bracket_der(a: &Derivation, b: &Derivation) -> Derivation {
    let fg = a.coef.mul(&apply_d(&b.coef));
    let gf = b.coef.mul(&apply_d(&a.coef));
    Derivation::new(fg.sub(&gf))
}

/// Labels for the six ring automorphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum AutLabel {
    Id,
    Psi,
    Tau2,
    Tau2Sq,
    PsiTau2,
    PsiTau2Sq,
}

impl AutLabel {
    /// All six labels.
    pub fn all() -> [AutLabel; 6] {
        [
            AutLabel::Id,
            AutLabel::Psi,
            AutLabel::Tau2,
            AutLabel::Tau2Sq,
            AutLabel::PsiTau2,
            AutLabel::PsiTau2Sq,
        ]
    }

    /// True for the three order-two elements.
    pub fn is_reflection(self) -> bool {
        matches!(
            self,
            AutLabel::Psi | AutLabel::PsiTau2 | AutLabel::PsiTau2Sq
        )
    }

    /// Short printable name.
    pub fn name(self) -> &'static str {
        match self {
            AutLabel::Id => "id",
            AutLabel::Psi => "psi",
            AutLabel::Tau2 => "tau2",
            AutLabel::Tau2Sq => "tau2^2",
            AutLabel::PsiTau2 => "psi*tau2",
            AutLabel::PsiTau2Sq => "psi*tau2^2",
        }
    }
}

/// Ring automorphism, stored by its images of `t`, `t^{-1}`, and `u`.
///
/// Construction validates both defining constraints: the images of `t` and
/// `t^{-1}` multiply to `1`, and the image of `u` squares to the image of
/// `t^2 + 4t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    /// Label within the order-six group.
    pub label: AutLabel,
    img_t: RElem,
    img_t_inv: RElem,
    img_u: RElem,
}

impl Automorphism {
    /// Builds and validates an automorphism from generator images.
    pub fn new(
        label: AutLabel,
        img_t: RElem,
        img_t_inv: RElem,
        img_u: RElem,
    ) -> Result<Self, RingError> {
        if img_t.mul(&img_t_inv) != RElem::one() {
            return Err(RingError::BadUnitImage);
        }
        let lhs = img_u.mul(&img_u);
        let rhs = img_t.mul(&img_t).add(&img_t.scale(&int(4)));
        if lhs != rhs {
            return Err(RingError::BadRelationImage);
        }
        Ok(Self {
            label,
            img_t,
            img_t_inv,
            img_u,
        })
    }

    /// The identity map.
    pub fn id() -> Self {
        Self::new(AutLabel::Id, RElem::t(), RElem::t_pow(-1), RElem::u()).unwrap()
    }

    /// The involution `psi`:
    /// `t -> (-t^{-1} u - 3 - t - u)/2`, `u -> (t^{-1} u - 1 - t - u)/2`,
    /// `t^{-1} -> (t^2 + 3t - (t + 1) u)/2`.
    pub fn psi() -> Self {
        let img_t = RElem::zero()
            .add(&RElem::monomial(-1, true, rat(-1, 2)))
            .add(&RElem::monomial(0, false, rat(-3, 2)))
            .add(&RElem::monomial(1, false, rat(-1, 2)))
            .add(&RElem::monomial(0, true, rat(-1, 2)));
        let img_u = RElem::zero()
            .add(&RElem::monomial(-1, true, rat(1, 2)))
            .add(&RElem::monomial(0, false, rat(-1, 2)))
            .add(&RElem::monomial(1, false, rat(-1, 2)))
            .add(&RElem::monomial(0, true, rat(-1, 2)));
        let img_t_inv = RElem::zero()
            .add(&RElem::monomial(2, false, rat(1, 2)))
            .add(&RElem::monomial(1, false, rat(3, 2)))
            .add(&RElem::monomial(1, true, rat(-1, 2)))
            .add(&RElem::monomial(0, true, rat(-1, 2)));
        Self::new(AutLabel::Psi, img_t, img_t_inv, img_u).unwrap()
    }

    /// The order-three map `tau2`: same image of `t` as `psi`, and
    /// `u -> (-t^{-1} u + t + 1 + u)/2`.
    pub fn tau2() -> Self {
        let psi = Self::psi();
        let img_u = RElem::zero()
            .add(&RElem::monomial(-1, true, rat(-1, 2)))
            .add(&RElem::monomial(1, false, rat(1, 2)))
            .add(&RElem::monomial(0, false, rat(1, 2)))
            .add(&RElem::monomial(0, true, rat(1, 2)));
        Self::new(AutLabel::Tau2, psi.img_t, psi.img_t_inv, img_u).unwrap()
    }

    /// Composition `g . h` (apply `h` first), with the given label.
    pub fn compose(label: AutLabel, g: &Self, h: &Self) -> Result<Self, RingError> {
        Self::new(
            label,
            apply_automorphism(g, &h.img_t),
            apply_automorphism(g, &h.img_t_inv),
            apply_automorphism(g, &h.img_u),
        )
    }

    /// The group element carrying the given label, built by composition
    /// from `psi` and `tau2`.
    pub fn element(label: AutLabel) -> Self {
        match label {
            AutLabel::Id => Self::id(),
            AutLabel::Psi => Self::psi(),
            AutLabel::Tau2 => Self::tau2(),
            AutLabel::Tau2Sq => {
                let t = Self::tau2();
                Self::compose(AutLabel::Tau2Sq, &t, &t).unwrap()
            }
            AutLabel::PsiTau2 => {
                Self::compose(AutLabel::PsiTau2, &Self::psi(), &Self::tau2()).unwrap()
            }
            AutLabel::PsiTau2Sq => Self::compose(
                AutLabel::PsiTau2Sq,
                &Self::psi(),
                &Self::element(AutLabel::Tau2Sq),
            )
            .unwrap(),
        }
    }

    /// All six group elements.
    pub fn group() -> Vec<Self> {
        AutLabel::all().iter().map(|l| Self::element(*l)).collect()
    }

    /// Image of `t`.
    pub fn img_t(&self) -> &RElem {
        &self.img_t
    }

    /// Image of `t^{-1}`.
    pub fn img_t_inv(&self) -> &RElem {
        &self.img_t_inv
    }

    /// Image of `u`.
    pub fn img_u(&self) -> &RElem {
        &self.img_u
    }
}

/// Applies an automorphism to an arbitrary element, term by term:
/// `t^k u^w -> img(t)^k img(u)^w` with `img(t)^{-k} = img(t^{-1})^k`.
pub fn apply_automorphism(g: &Automorphism, f: &RElem) -> RElem {
    let mut out = RElem::zero();
    for ((k, w), c) in f.terms() {
        let tp = if *k >= 0 {
            g.img_t.pow(*k as u32)
        } else {
            g.img_t_inv.pow((-*k) as u32)
        };
        let base = if *w { tp.mul(&g.img_u) } else { tp };
        out = out.add(&base.scale(c));
    }
    out
}

/// Generators of the partial-fraction presentation carried into `R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiGen {
    /// The coordinate `s`.
    S,
    /// `s^{-1}`.
    SInv,
    /// `(s - 1)^{-1}`.
    SMinus1Inv,
}

/// Image in `R` of a partial-fraction generator:
/// `s -> (t + 2 + u)/2`, `s^{-1} -> (t + 2 - u)/2`,
/// `(s - 1)^{-1} -> (t^{-1} u - 1)/2`.
pub fn phi_image(g: PhiGen) -> RElem {
    match g {
        PhiGen::S => RElem::zero()
            .add(&RElem::monomial(1, false, rat(1, 2)))
            .add(&RElem::monomial(0, false, int(1)))
            .add(&RElem::monomial(0, true, rat(1, 2))),
        PhiGen::SInv => RElem::zero()
            .add(&RElem::monomial(1, false, rat(1, 2)))
            .add(&RElem::monomial(0, false, int(1)))
            .add(&RElem::monomial(0, true, rat(-1, 2))),
        PhiGen::SMinus1Inv => RElem::zero()
            .add(&RElem::monomial(-1, true, rat(1, 2)))
            .add(&RElem::monomial(0, false, rat(-1, 2))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> RElem {
        s.parse().unwrap()
    }

    #[test]
    fn multiplication_folds_u_squared() {
        assert_eq!(RElem::u().mul(&RElem::u()), parse("t^2 + 4*t"));
        assert_eq!(RElem::one().mul(&parse("t^-1*u")), parse("t^-1*u"));
        let tiu = RElem::t_pow_u(-1);
        assert_eq!(tiu.mul(&tiu), parse("1 + 4*t^-1"));
        let tp2 = parse("t + 2");
        assert_eq!(tp2.mul(&tp2), parse("t^2 + 4*t + 4"));
    }

    #[test]
    fn multiplication_is_commutative_here() {
        let a = parse("3/2*t^-1*u - 2");
        let b = parse("t^2*u + 5*t^-3");
        assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn derivation_on_generators() {
        assert_eq!(apply_d(&RElem::t()), RElem::u());
        assert_eq!(apply_d(&RElem::u()), parse("t + 2"));
        assert_eq!(apply_d(&RElem::t_pow(-1)), parse("-1*t^-2*u"));
        assert_eq!(apply_d(&RElem::t_pow(3)), parse("3*t^2*u"));
        assert_eq!(apply_d(&RElem::t_pow_u(-1)), parse("-2*t^-1"));
        assert_eq!(apply_d(&RElem::t_pow_u(2)), parse("3*t^3 + 10*t^2"));
        assert_eq!(apply_d(&RElem::one()), RElem::zero());
    }

    #[test]
    fn derivation_satisfies_leibniz_on_samples() {
        let samples = [
            parse("t^2*u"),
            parse("3/2*t^-1*u - 2"),
            parse("u + t^-3"),
            parse("t + 2"),
        ];
        for f in &samples {
            for g in &samples {
                let lhs = apply_d(&f.mul(g));
                let rhs = apply_d(f).mul(g).add(&f.mul(&apply_d(g)));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn derivation_brackets() {
        let d_plain = Derivation::new(RElem::one());
        let td = Derivation::new(RElem::t());
        let ud = Derivation::new(RElem::u());
        assert_eq!(bracket_der(&d_plain, &td), Derivation::new(RElem::u()));
        assert_eq!(bracket_der(&d_plain, &ud), Derivation::new(parse("t + 2")));
    }

    #[test]
    fn automorphism_constructors_validate() {
        Automorphism::psi();
        Automorphism::tau2();
        for g in Automorphism::group() {
            assert_eq!(g.img_t().mul(g.img_t_inv()), RElem::one());
        }
        let bad = Automorphism::new(AutLabel::Id, RElem::t(), RElem::t(), RElem::u());
        assert_eq!(bad.unwrap_err(), RingError::BadUnitImage);
    }

    #[test]
    fn psi_is_an_involution() {
        let psi = Automorphism::psi();
        for f in [
            RElem::t(),
            RElem::u(),
            RElem::t_pow(-1),
            parse("t^3*u - 2*t^-2"),
        ] {
            let twice = apply_automorphism(&psi, &apply_automorphism(&psi, &f));
            assert_eq!(twice, f);
        }
    }

    #[test]
    fn tau2_has_order_three() {
        let tau2 = Automorphism::tau2();
        for f in [RElem::t(), RElem::u(), RElem::t_pow(-1)] {
            let mut g = f.clone();
            for _ in 0..3 {
                g = apply_automorphism(&tau2, &g);
            }
            assert_eq!(g, f);
        }
    }

    #[test]
    fn dihedral_relation_holds() {
        let psi = Automorphism::psi();
        let tau2 = Automorphism::tau2();
        let tau2sq = Automorphism::element(AutLabel::Tau2Sq);
        for f in [RElem::t(), RElem::u(), RElem::t_pow(-1)] {
            let lhs = apply_automorphism(
                &psi,
                &apply_automorphism(&tau2, &apply_automorphism(&psi, &f)),
            );
            let rhs = apply_automorphism(&tau2sq, &f);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn automorphisms_are_multiplicative_on_samples() {
        let a = parse("t^2 - u");
        let b = parse("t^-1*u + 3");
        for g in Automorphism::group() {
            let lhs = apply_automorphism(&g, &a.mul(&b));
            let rhs = apply_automorphism(&g, &a).mul(&apply_automorphism(&g, &b));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn phi_images_satisfy_unit_relations() {
        let s = phi_image(PhiGen::S);
        let s_inv = phi_image(PhiGen::SInv);
        let sm1_inv = phi_image(PhiGen::SMinus1Inv);
        assert_eq!(s.mul(&s_inv), RElem::one());
        let sm1 = s.sub(&RElem::one());
        assert_eq!(sm1.mul(&sm1_inv), RElem::one());
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "0",
            "1",
            "-1",
            "t",
            "u",
            "t^-1*u",
            "3/2*t^-1*u - 2",
            "4*t + t^2",
            "-5/3*t^-2 + u",
        ] {
            let e = parse(s);
            assert_eq!(format!("{}", e), *s);
            let back: RElem = format!("{}", e).parse().unwrap();
            assert_eq!(back, e);
        }
    }

    #[test]
    fn parse_accepts_loose_forms() {
        assert_eq!(parse("2*t*u"), RElem::monomial(1, true, int(2)));
        assert_eq!(parse("u*u"), parse("t^2 + 4*t"));
        assert_eq!(parse("- t"), RElem::monomial(1, false, int(-1)));
        assert!("t^".parse::<RElem>().is_err());
        assert!("q".parse::<RElem>().is_err());
        assert!("".parse::<RElem>().is_err());
    }
}
