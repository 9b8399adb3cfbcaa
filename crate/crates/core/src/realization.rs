//! Free-field realizations on the polynomial Fock module.
//!
//! Current generators, the two Virasoro-type fields, and the Heisenberg
//! fields are realized as normal-ordered polynomial expressions in six
//! oscillator fields `alpha, alpha*, alpha1, alpha1*, beta, beta1`, with
//! optional polynomial prefactors in the formal variable and optional
//! derivatives on factors.
//!
//! A single mode of such an expression is an exact finite sum of operator
//! products: the mode of a normal-ordered product splits over assignments
//! of factor modes with fixed total, and every factor is either an
//! annihilation-type mode (finitely many can act nonzero on a given
//! vector) or a creation-type mode (bounded above by the total), so the
//! assignment set is finite and enumerable. At most one factor per product
//! has an unbounded creation range (the `alpha`-family in ordering mode
//! `r = 1`); its mode is solved from the remainder.

use num::traits::Zero;
use std::collections::BTreeSet;

use crate::algebra::{CurrentElem, Sl2, WittElem};
use crate::fock::{
    apply_heisenberg, apply_oscillator, FockError, FockVector, HeisenbergParams, OrderingMode,
    OscFam, OscMode, VarFam,
};
use crate::formal_dist::LaurentPoly;
use crate::scalar::{int, rat, Scalar};

/// Budget on factor applications within one mode application.
pub const ENUM_BUDGET: usize = 50_000_000;

/// Errors from mode application.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RealizeError {
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error("mode enumeration exceeded the step budget")]
    StepBudget,
    #[error("unsupported enumeration structure: {0}")]
    Enumeration(String),
}

/// The six oscillator generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum OscGen {
    Alpha,
    AlphaStar,
    Alpha1,
    Alpha1Star,
    Beta,
    Beta1,
}

impl OscGen {
    /// Conformal weight of the generator field.
    pub fn weight(self) -> i64 {
        match self {
            OscGen::Alpha | OscGen::Alpha1 | OscGen::Beta | OscGen::Beta1 => 1,
            OscGen::AlphaStar | OscGen::Alpha1Star => 0,
        }
    }

    fn osc_fam(self) -> OscFam {
        match self {
            OscGen::Alpha => OscFam::A,
            OscGen::AlphaStar => OscFam::AStar,
            OscGen::Alpha1 => OscFam::A1,
            OscGen::Alpha1Star => OscFam::A1Star,
            OscGen::Beta => OscFam::B,
            OscGen::Beta1 => OscFam::B1,
        }
    }

    fn is_heisenberg(self) -> bool {
        matches!(self, OscGen::Beta | OscGen::Beta1)
    }
}

/// One factor `d^der gen` inside a normal-ordered product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Factor {
    pub gen: OscGen,
    pub der: u32,
}

/// One term `coef * pre(z) * :factors:` of a field expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldTerm {
    pub coef: Scalar,
    pub pre: LaurentPoly,
    pub factors: Vec<Factor>,
}

/// A field expression with a declared conformal weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldExpr {
    pub weight: i64,
    pub terms: Vec<FieldTerm>,
}

impl FieldExpr {
    fn new(weight: i64) -> Self {
        Self {
            weight,
            terms: Vec::new(),
        }
    }

    fn push(&mut self, coef: Scalar, pre: LaurentPoly, factors: &[(OscGen, u32)]) {
        if coef.is_zero() || pre.is_zero() {
            return;
        }
        self.terms.push(FieldTerm {
            coef,
            pre,
            factors: factors
                .iter()
                .map(|(gen, der)| Factor {
                    gen: *gen,
                    der: *der,
                })
                .collect(),
        });
    }

    /// Concatenates the terms of two expressions of equal weight.
    pub fn plus(mut self, other: FieldExpr) -> FieldExpr {
        assert_eq!(self.weight, other.weight, "weights must agree");
        self.terms.extend(other.terms);
        self
    }
}

/// Parameters fixing one free-field realization.
#[derive(Clone, Debug)]
pub struct RealizationParams {
    /// Normal-ordering convention.
    pub r: OrderingMode,
    /// Heisenberg zero-mode and central parameters.
    pub heis: HeisenbergParams,
    /// Image of the central class `w0`: `kappa0 + 4 delta_{r,0}`.
    pub chi0: Scalar,
    /// Coefficient of `:beta beta1:` in the second Virasoro-type field.
    pub nu: Scalar,
    /// Coefficient of `d beta1` in the second Virasoro-type field.
    pub zeta: Scalar,
    /// Coefficient of `d beta` in the first Virasoro-type field.
    pub mu_v: Scalar,
    /// Polynomial prefactor of `:beta beta:` in the first field.
    pub gamma: LaurentPoly,
    /// Coefficient of `:beta1 beta1:` in the first field.
    pub gamma1: Scalar,
    /// Coefficient of `beta` in the first field.
    pub gamma2: Scalar,
}

impl RealizationParams {
    /// The solved parameter set for a given ordering mode and Heisenberg
    /// parameters: `nu = -1/(2 kappa0)`, `gamma = -P/(4 kappa0)`,
    /// `gamma1 = -1/(4 kappa0)`, `zeta = mu = gamma2 = 0`, and
    /// `chi0 = kappa0 + 4 delta_{r,0}`.
    pub fn standard(r: OrderingMode, heis: HeisenbergParams) -> Self {
        let kappa0 = heis.kappa0.clone();
        assert!(!kappa0.is_zero(), "kappa0 must be invertible");
        let inv = int(1) / kappa0.clone();
        Self {
            r,
            heis,
            chi0: kappa0 + int(4 * r.delta_r0()),
            nu: rat(-1, 2) * inv.clone(),
            zeta: Scalar::zero(),
            mu_v: Scalar::zero(),
            gamma: LaurentPoly::p_poly().scale(&(rat(-1, 4) * inv.clone())),
            gamma1: rat(-1, 4) * inv,
            gamma2: Scalar::zero(),
        }
    }

    /// Image of the first Virasoro central coordinate:
    /// `-(1/3)(delta_{r,0} + 1/2)`.
    pub fn pi_c1(&self) -> Scalar {
        rat(-1, 3) * (int(self.r.delta_r0()) + rat(1, 2))
    }

    /// Image of the second Virasoro central coordinate.
    pub fn pi_c2(&self) -> Scalar {
        Scalar::zero()
    }

    /// Image of the central class `w1`.
    pub fn tau_omega1(&self) -> Scalar {
        Scalar::zero()
    }
}

/// The two Virasoro-type fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VirField {
    Dbar,
    Dbar1,
}

/// Free-field image of a current generator `x` (`primed` marks the
/// `u`-twisted copy). All images have weight one.
pub fn tau(x: Sl2, primed: bool, p: &RealizationParams) -> FieldExpr {
    use OscGen::*;
    let one = LaurentPoly::one;
    let pp = LaurentPoly::p_poly;
    let z_plus_2 = LaurentPoly::from_pairs(&[(1, 1), (0, 2)]);
    let mut e = FieldExpr::new(1);
    match (x, primed) {
        (Sl2::F, false) => {
            e.push(int(-1), one(), &[(Alpha, 0)]);
        }
        (Sl2::F, true) => {
            e.push(int(-1), one(), &[(Alpha1, 0)]);
        }
        (Sl2::H, false) => {
            e.push(int(2), one(), &[(Alpha, 0), (AlphaStar, 0)]);
            e.push(int(2), one(), &[(Alpha1, 0), (Alpha1Star, 0)]);
            e.push(int(1), one(), &[(Beta, 0)]);
        }
        (Sl2::H, true) => {
            e.push(int(2), one(), &[(Alpha1, 0), (AlphaStar, 0)]);
            e.push(int(2), pp(), &[(Alpha, 0), (Alpha1Star, 0)]);
            e.push(int(1), one(), &[(Beta1, 0)]);
        }
        (Sl2::E, false) => {
            e.push(int(1), one(), &[(Alpha, 0), (AlphaStar, 0), (AlphaStar, 0)]);
            e.push(
                int(1),
                pp(),
                &[(Alpha, 0), (Alpha1Star, 0), (Alpha1Star, 0)],
            );
            e.push(
                int(2),
                one(),
                &[(Alpha1, 0), (AlphaStar, 0), (Alpha1Star, 0)],
            );
            e.push(int(1), one(), &[(Beta, 0), (AlphaStar, 0)]);
            e.push(int(1), one(), &[(Beta1, 0), (Alpha1Star, 0)]);
            e.push(p.chi0.clone(), one(), &[(AlphaStar, 1)]);
        }
        (Sl2::E, true) => {
            e.push(
                int(1),
                one(),
                &[(Alpha1, 0), (AlphaStar, 0), (AlphaStar, 0)],
            );
            e.push(
                int(1),
                pp(),
                &[(Alpha1, 0), (Alpha1Star, 0), (Alpha1Star, 0)],
            );
            e.push(int(2), pp(), &[(Alpha, 0), (AlphaStar, 0), (Alpha1Star, 0)]);
            e.push(int(1), one(), &[(Beta1, 0), (AlphaStar, 0)]);
            e.push(int(1), pp(), &[(Beta, 0), (Alpha1Star, 0)]);
            e.push(p.chi0.clone(), pp(), &[(Alpha1Star, 1)]);
            e.push(p.chi0.clone(), z_plus_2, &[(Alpha1Star, 0)]);
        }
    }
    e
}

/// Quadratic oscillator part shared by the Virasoro-type fields: the image
/// of the derivation field without Heisenberg corrections. `twisted`
/// selects the `t^n u D` family, untwisted the `t^n D` family.
fn pi_witt_part(twisted: bool) -> FieldExpr {
    use OscGen::*;
    let one = LaurentPoly::one;
    let pp = LaurentPoly::p_poly;
    let half_dp = LaurentPoly::dp_poly().scale(&rat(1, 2));
    let mut e = FieldExpr::new(2);
    if twisted {
        e.push(int(1), pp(), &[(Alpha, 0), (AlphaStar, 1)]);
        e.push(int(1), pp(), &[(Alpha1, 0), (Alpha1Star, 1)]);
        e.push(int(1), half_dp, &[(Alpha1, 0), (Alpha1Star, 0)]);
    } else {
        e.push(int(1), one(), &[(Alpha1, 0), (AlphaStar, 1)]);
        e.push(int(1), pp(), &[(Alpha, 0), (Alpha1Star, 1)]);
        e.push(int(1), half_dp, &[(Alpha, 0), (Alpha1Star, 0)]);
    }
    e
}

/// Free-field image of a Virasoro-type field (weight two): the quadratic
/// oscillator part plus the Heisenberg corrections with the parameters in
/// `p`.
pub fn pi_vir(which: VirField, p: &RealizationParams) -> FieldExpr {
    use OscGen::*;
    let one = LaurentPoly::one;
    let mut e = match which {
        VirField::Dbar => pi_witt_part(true),
        VirField::Dbar1 => pi_witt_part(false),
    };
    match which {
        VirField::Dbar => {
            e.push(int(1), p.gamma.clone(), &[(Beta, 0), (Beta, 0)]);
            e.push(p.mu_v.clone(), one(), &[(Beta, 1)]);
            e.push(p.gamma1.clone(), one(), &[(Beta1, 0), (Beta1, 0)]);
            e.push(p.gamma2.clone(), one(), &[(Beta, 0)]);
        }
        VirField::Dbar1 => {
            e.push(p.nu.clone(), one(), &[(Beta, 0), (Beta1, 0)]);
            e.push(p.zeta.clone(), one(), &[(Beta1, 1)]);
        }
    }
    e
}

/// The Heisenberg generating fields as one-factor expressions.
pub fn beta_field(primed: bool) -> FieldExpr {
    let mut e = FieldExpr::new(1);
    let gen = if primed { OscGen::Beta1 } else { OscGen::Beta };
    e.push(int(1), LaurentPoly::one(), &[(gen, 0)]);
    e
}

enum PlusRange {
    None,
    UpTo(i64),
    All,
}

struct Cand {
    minus: BTreeSet<i64>,
    plus: PlusRange,
}

impl Cand {
    fn upper(&self) -> Option<i64> {
        let minus_max = self.minus.iter().next_back().copied();
        match self.plus {
            PlusRange::All => None,
            PlusRange::UpTo(h) => Some(minus_max.map_or(h, |m| m.max(h))),
            PlusRange::None => minus_max,
        }
    }

    fn is_empty(&self) -> bool {
        self.minus.is_empty() && matches!(self.plus, PlusRange::None)
    }

    fn contains(&self, i: i64) -> bool {
        if self.minus.contains(&i) {
            return true;
        }
        match self.plus {
            PlusRange::All => true,
            PlusRange::UpTo(h) => i <= h,
            PlusRange::None => false,
        }
    }
}

/// Mode indices of one factor that can act nonzero on `v` (for
/// annihilation-type modes) or at all (creation-type ranges).
fn candidates(gen: OscGen, r: OrderingMode, v: &FockVector) -> Cand {
    let r0 = r == OrderingMode::R0;
    match gen {
        OscGen::Alpha | OscGen::Alpha1 => {
            let fam = if gen == OscGen::Alpha {
                VarFam::X
            } else {
                VarFam::X1
            };
            if r0 {
                // a_i differentiates x_i for i >= 0, multiplies below.
                let minus = v.var_support(fam).into_iter().filter(|i| *i >= 0).collect();
                Cand {
                    minus,
                    plus: PlusRange::UpTo(-1),
                }
            } else {
                Cand {
                    minus: BTreeSet::new(),
                    plus: PlusRange::All,
                }
            }
        }
        OscGen::AlphaStar | OscGen::Alpha1Star => {
            let fam = if gen == OscGen::AlphaStar {
                VarFam::X
            } else {
                VarFam::X1
            };
            let support = v.var_support(fam);
            if r0 {
                // a*_i multiplies x_{-i} for i <= 0, differentiates above.
                let minus = support
                    .into_iter()
                    .filter(|idx| *idx < 0)
                    .map(|idx| -idx)
                    .collect();
                Cand {
                    minus,
                    plus: PlusRange::UpTo(0),
                }
            } else {
                let minus = support.into_iter().map(|idx| -idx).collect();
                Cand {
                    minus,
                    plus: PlusRange::None,
                }
            }
        }
        OscGen::Beta => {
            let mut minus: BTreeSet<i64> = v
                .var_support(VarFam::Y)
                .into_iter()
                .map(|idx| -idx)
                .filter(|i| *i > 0)
                .collect();
            minus.insert(0);
            Cand {
                minus,
                plus: PlusRange::UpTo(-1),
            }
        }
        OscGen::Beta1 => {
            let support = v.var_support(VarFam::Y1);
            let mut minus = BTreeSet::new();
            for idx in support {
                for i in [-2 - idx, -1 - idx] {
                    if i > 0 {
                        minus.insert(i);
                    }
                }
            }
            minus.insert(0);
            Cand {
                minus,
                plus: PlusRange::UpTo(-1),
            }
        }
    }
}

/// True when the mode is annihilation-type and must act before
/// creation-type modes in a normal-ordered product.
fn is_minus(gen: OscGen, i: i64, r: OrderingMode) -> bool {
    let r0 = r == OrderingMode::R0;
    match gen {
        OscGen::Alpha | OscGen::Alpha1 => r0 && i >= 0,
        OscGen::AlphaStar | OscGen::Alpha1Star => {
            if r0 {
                i > 0
            } else {
                true
            }
        }
        OscGen::Beta | OscGen::Beta1 => i >= 0,
    }
}

fn osc_apply(
    gen: OscGen,
    i: i64,
    p: &RealizationParams,
    v: &FockVector,
) -> Result<FockVector, RealizeError> {
    let mode = OscMode::new(gen.osc_fam(), i);
    let out = if gen.is_heisenberg() {
        apply_heisenberg(mode, &p.heis, v)?
    } else {
        apply_oscillator(mode, p.r, v)?
    };
    Ok(out)
}

/// Derivative multiplier `(-1)^d (i + wt) (i + wt + 1) ... (i + wt + d - 1)`
/// relating the mode `i` of `d^d F` to the mode `i` of `F`.
fn der_multiplier(gen: OscGen, der: u32, i: i64) -> Scalar {
    let wt = gen.weight();
    let mut acc = int(1);
    for q in 0..der as i64 {
        acc *= int(i + wt + q);
    }
    if der % 2 == 1 {
        acc = -acc;
    }
    acc
}

fn apply_assignment(
    factors: &[Factor],
    modes: &[i64],
    p: &RealizationParams,
    v: &FockVector,
    budget: &mut usize,
) -> Result<FockVector, RealizeError> {
    let mut mult = int(1);
    for (f, i) in factors.iter().zip(modes) {
        if f.der > 0 {
            mult *= der_multiplier(f.gen, f.der, *i);
            if mult.is_zero() {
                return Ok(FockVector::zero());
            }
        }
    }
    if *budget < factors.len() {
        return Err(RealizeError::StepBudget);
    }
    *budget -= factors.len();
    let mut out = v.clone();
    // Annihilation-type modes first, then creation-type; each class is
    // mutually commuting, so order within a class is immaterial.
    for pass_minus in [true, false] {
        for (f, i) in factors.iter().zip(modes) {
            if is_minus(f.gen, *i, p.r) == pass_minus {
                out = osc_apply(f.gen, *i, p, &out)?;
                if out.is_zero() {
                    return Ok(out);
                }
            }
        }
    }
    Ok(out.scale(&mult))
}

fn product_mode(
    factors: &[Factor],
    k: i64,
    p: &RealizationParams,
    v: &FockVector,
    budget: &mut usize,
) -> Result<FockVector, RealizeError> {
    if factors.is_empty() {
        return Ok(if k == 0 {
            v.clone()
        } else {
            FockVector::zero()
        });
    }
    let cands: Vec<Cand> = factors.iter().map(|f| candidates(f.gen, p.r, v)).collect();
    if cands.iter().any(|c| c.is_empty()) {
        return Ok(FockVector::zero());
    }
    let unbounded: Vec<usize> = cands
        .iter()
        .enumerate()
        .filter(|(_, c)| matches!(c.plus, PlusRange::All))
        .map(|(i, _)| i)
        .collect();
    let mut acc = FockVector::zero();
    match unbounded.len() {
        0 => {
            // Every factor bounded above: depth-first with suffix bounds.
            let uppers: Vec<i64> = cands.iter().map(|c| c.upper().unwrap()).collect();
            let mut suffix = vec![0i64; factors.len() + 1];
            for j in (0..factors.len()).rev() {
                suffix[j] = suffix[j + 1] + uppers[j];
            }
            let mut modes = vec![0i64; factors.len()];
            enumerate_bounded(
                factors, &cands, &suffix, 0, k, &mut modes, p, v, budget, &mut acc,
            )?;
        }
        1 => {
            let free = unbounded[0];
            for (j, c) in cands.iter().enumerate() {
                if j != free && !matches!(c.plus, PlusRange::None) {
                    return Err(RealizeError::Enumeration(
                        "two unbounded creation ranges in one product".into(),
                    ));
                }
            }
            // Cartesian product over the finite candidate sets; the free
            // factor absorbs the remaining mode.
            let finite: Vec<Vec<i64>> = cands
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    if j == free {
                        vec![0]
                    } else {
                        c.minus.iter().copied().collect()
                    }
                })
                .collect();
            let mut index = vec![0usize; factors.len()];
            loop {
                let mut modes: Vec<i64> = index
                    .iter()
                    .zip(&finite)
                    .map(|(ix, set)| set[*ix])
                    .collect();
                let partial: i64 = modes
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != free)
                    .map(|(_, i)| *i)
                    .sum();
                modes[free] = k - partial;
                let piece = apply_assignment(factors, &modes, p, v, budget)?;
                acc = acc.add(&piece);
                // Advance the mixed-radix index.
                let mut j = 0;
                loop {
                    if j == factors.len() {
                        return Ok(acc);
                    }
                    if j == free {
                        j += 1;
                        continue;
                    }
                    index[j] += 1;
                    if index[j] < finite[j].len() {
                        break;
                    }
                    index[j] = 0;
                    j += 1;
                }
            }
        }
        _ => {
            return Err(RealizeError::Enumeration(
                "more than one fully unbounded factor".into(),
            ))
        }
    }
    Ok(acc)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_bounded(
    factors: &[Factor],
    cands: &[Cand],
    suffix: &[i64],
    j: usize,
    remaining: i64,
    modes: &mut Vec<i64>,
    p: &RealizationParams,
    v: &FockVector,
    budget: &mut usize,
    acc: &mut FockVector,
) -> Result<(), RealizeError> {
    if j == factors.len() - 1 {
        if cands[j].contains(remaining) {
            modes[j] = remaining;
            let piece = apply_assignment(factors, modes, p, v, budget)?;
            *acc = acc.add(&piece);
        }
        return Ok(());
    }
    let lo = remaining - suffix[j + 1];
    for i in cands[j].minus.range(lo..) {
        modes[j] = *i;
        enumerate_bounded(
            factors,
            cands,
            suffix,
            j + 1,
            remaining - i,
            modes,
            p,
            v,
            budget,
            acc,
        )?;
    }
    if let PlusRange::UpTo(hi) = cands[j].plus {
        let mut i = lo;
        while i <= hi {
            modes[j] = i;
            enumerate_bounded(
                factors,
                cands,
                suffix,
                j + 1,
                remaining - i,
                modes,
                p,
                v,
                budget,
                acc,
            )?;
            i += 1;
        }
    }
    Ok(())
}

/// Applies mode `m` of a field expression to a vector, with the default
/// step budget.
pub fn apply_mode(
    expr: &FieldExpr,
    m: i64,
    v: &FockVector,
    p: &RealizationParams,
) -> Result<FockVector, RealizeError> {
    let mut budget = ENUM_BUDGET;
    apply_mode_budgeted(expr, m, v, p, &mut budget)
}

/// Applies mode `m` of a field expression, decrementing `budget` per
/// factor application.
pub fn apply_mode_budgeted(
    expr: &FieldExpr,
    m: i64,
    v: &FockVector,
    p: &RealizationParams,
    budget: &mut usize,
) -> Result<FockVector, RealizeError> {
    let mut out = FockVector::zero();
    for term in &expr.terms {
        let delta_g: i64 = term
            .factors
            .iter()
            .map(|f| f.gen.weight() + f.der as i64)
            .sum();
        for (s, c_pre) in term.pre.iter() {
            let k = m + expr.weight + s - delta_g;
            let piece = product_mode(&term.factors, k, p, v, budget)?;
            out = out.add(&piece.scale(&(term.coef.clone() * c_pre.clone())));
        }
    }
    Ok(out)
}

/// Commutator `[A_m, B_n]` of two realized fields on a vector.
pub fn commutator_mode(
    a: &FieldExpr,
    b: &FieldExpr,
    m: i64,
    n: i64,
    v: &FockVector,
    p: &RealizationParams,
) -> Result<FockVector, RealizeError> {
    let bv = apply_mode(b, n, v, p)?;
    let abv = apply_mode(a, m, &bv, p)?;
    let av = apply_mode(a, m, v, p)?;
    let bav = apply_mode(b, n, &av, p)?;
    Ok(abv.sub(&bav))
}

/// Image of an abstract current-algebra element under the realization:
/// generator coordinates map through [`tau`], the central class maps to
/// `c0 * chi0` (the `w1` coordinate maps to zero).
pub fn tau_of_current(
    elem: &CurrentElem,
    p: &RealizationParams,
    v: &FockVector,
) -> Result<FockVector, RealizeError> {
    let mut out = FockVector::zero();
    for ((gen, (k, w)), c) in elem.coords() {
        let expr = tau(*gen, *w, p);
        let piece = apply_mode(&expr, *k, v, p)?;
        out = out.add(&piece.scale(c));
    }
    let central = elem.center.c0.clone() * p.chi0.clone() + elem.center.c1.clone() * p.tau_omega1();
    out = out.add(&v.scale(&central));
    Ok(out)
}

/// Image of an abstract derivation-algebra element: the basis elements map
/// through the shifted fields, `d_n -> -(Dbar)_{n-1}` and
/// `d1_n -> -(Dbar1)_{n-1}`.
pub fn pi_of_witt(
    elem: &WittElem,
    p: &RealizationParams,
    v: &FockVector,
) -> Result<FockVector, RealizeError> {
    let dbar = pi_vir(VirField::Dbar, p);
    let dbar1 = pi_vir(VirField::Dbar1, p);
    let mut out = FockVector::zero();
    for ((n, w), c) in elem.coords() {
        let expr = if *w { &dbar } else { &dbar1 };
        let piece = apply_mode(expr, n - 1, v, p)?;
        out = out.add(&piece.scale(&-c.clone()));
    }
    Ok(out)
}
