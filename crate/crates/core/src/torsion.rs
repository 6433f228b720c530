//! Betti numbers and torsion numbers of `M_r = M / (t^r - 1) M`.
//!
//! Values come either from closed formulas in resultants or from the Smith
//! normal form of the block matrix `A(C_r)`, which serves as the oracle.
//! The reduced variants replace `t^r - 1` by `nu_r`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cyclotomic::{
    cyclo_factorize, cyclotomic_poly, divisors, euler_phi, factorize, mobius, roots_of_unity_count,
    value_at_one,
};
use crate::error::{Error, Result};
use crate::growth::p_component;
use crate::linalg::{
    minors_gcd, rational_invariant_factors, smith_normal_form, substitute_blocks,
    substitute_blocks_reduced, PresentationMatrix,
};
use crate::poly::LaurentPoly;
use crate::recurrence::{eval_recurrence, recurrence_spec};
use crate::resultant::{res_cyclic, resultant};

/// Formula results are compared against the SNF oracle when the block
/// matrix has at most this many rows.
pub const CROSS_CHECK_DIM: usize = 64;

/// How a torsion number was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Snf,
    Fox,
    Extended,
    DirectSum,
    Recurrence,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Snf => "snf",
            Method::Fox => "fox",
            Method::Extended => "extended",
            Method::DirectSum => "direct_sum",
            Method::Recurrence => "recurrence",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Method selection for [`torsion`]: a fixed method, or automatic dispatch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodChoice {
    Auto,
    Fixed(Method),
}

impl FromStr for MethodChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "auto" => MethodChoice::Auto,
            "snf" => MethodChoice::Fixed(Method::Snf),
            "fox" => MethodChoice::Fixed(Method::Fox),
            "extended" => MethodChoice::Fixed(Method::Extended),
            "direct_sum" | "direct-sum" => MethodChoice::Fixed(Method::DirectSum),
            "recurrence" => MethodChoice::Fixed(Method::Recurrence),
            other => return Err(Error::Domain(format!("unknown method `{other}`"))),
        })
    }
}

/// `M_r = Z^betti ⊕ T`, with `torsion = |T|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionProfile {
    pub r: u64,
    pub betti: u64,
    pub torsion: BigInt,
    pub pure: bool,
    pub method: Method,
}

impl TorsionProfile {
    fn new(r: u64, betti: u64, torsion: BigInt, method: Method) -> Self {
        TorsionProfile {
            r,
            betti,
            torsion,
            pure: betti == 0,
            method,
        }
    }
}

/// Reduced invariants of `M / nu_r M` for a cyclic module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedTorsionProfile {
    pub r: u64,
    pub betti_reduced: u64,
    pub torsion_reduced: BigInt,
    /// `b_r / b~_r`, present when `Delta(1) != 0`.
    pub delta: Option<BigInt>,
    /// `(b~_r / |T(R/(g, nu_r))|)^(1/q)` for `Delta = (t-1)^q g`, `q >= 1`.
    pub delta_prime: Option<BigInt>,
}

/// The module whose quotients are being measured.
#[derive(Clone, Debug)]
pub enum ModuleInput {
    /// `R / (delta)`.
    Cyclic(LaurentPoly),
    /// The direct sum of `R / (pi_i)`.
    InvariantFactors(Vec<LaurentPoly>),
    /// A general presentation matrix.
    Presentation(PresentationMatrix),
}

impl ModuleInput {
    /// A presentation matrix for the module.
    pub fn presentation(&self) -> PresentationMatrix {
        match self {
            ModuleInput::Cyclic(d) => PresentationMatrix::cyclic(d.clone()),
            ModuleInput::InvariantFactors(p) if p.is_empty() => {
                PresentationMatrix::cyclic(LaurentPoly::one())
            }
            ModuleInput::InvariantFactors(p) => PresentationMatrix::diagonal(p.clone()),
            ModuleInput::Presentation(a) => a.clone(),
        }
    }

    /// The cyclic generator, if the module is presented as cyclic.
    pub fn as_cyclic(&self) -> Option<&LaurentPoly> {
        match self {
            ModuleInput::Cyclic(d) => Some(d),
            ModuleInput::InvariantFactors(p) if p.len() == 1 => Some(&p[0]),
            ModuleInput::Presentation(a) => a.as_cyclic(),
            _ => None,
        }
    }
}

fn check_r(r: u64) -> Result<()> {
    if r == 0 {
        return Err(Error::Domain("r must be >= 1".into()));
    }
    Ok(())
}

/// Number of roots of each `pi_i` that are `r`-th roots of unity (`!= 1`
/// when `reduced`), summed over `i`.
pub fn betti(pis: &[LaurentPoly], r: u64, reduced: bool) -> Result<u64> {
    check_r(r)?;
    let mut total = 0;
    for p in pis {
        if p.is_zero() {
            return Err(Error::Degenerate("zero invariant factor in betti".into()));
        }
        total += roots_of_unity_count(p, r, reduced);
    }
    Ok(total)
}

/// Oracle values from the Smith normal form of `A(C_r)`, or of `A(C'_r)`
/// with `C'_r` the companion of `nu_r` when `reduced`.
pub fn torsion_snf(a: &PresentationMatrix, r: u64, reduced: bool) -> Result<TorsionProfile> {
    check_r(r)?;
    let m = if reduced {
        substitute_blocks_reduced(a, r as usize)?
    } else {
        substitute_blocks(a, r as usize)?
    };
    let s = smith_normal_form(&m);
    Ok(TorsionProfile::new(
        r,
        s.free_rank as u64,
        s.torsion_order,
        Method::Snf,
    ))
}

/// Product of the distinct `Phi_d` with `d | r`, `Phi_d | delta`, and
/// `d > 1` when `skip_one`.
fn cyclotomic_divisor(delta: &LaurentPoly, r: u64, skip_one: bool) -> LaurentPoly {
    let mut phi = LaurentPoly::one();
    for d in divisors(r) {
        if (skip_one && d == 1) || euler_phi(d) as usize > delta.span() {
            continue;
        }
        let c = cyclotomic_poly(d).expect("d >= 1");
        if delta.divisible_by(&c) {
            phi = &phi * &c;
        }
    }
    phi
}

/// `|Res(delta / Phi, (t^r - 1) / Phi)|` where `Phi` collects the distinct
/// cyclotomic divisors `Phi_d` of `delta` with `d | r`.
pub fn torsion_formula(delta: &LaurentPoly, r: u64) -> Result<BigInt> {
    check_r(r)?;
    if delta.is_zero() {
        return Err(Error::Degenerate(
            "torsion formula for the zero polynomial".into(),
        ));
    }
    let phi = cyclotomic_divisor(delta, r, false);
    let a = delta.div_exact(&phi)?;
    let b = LaurentPoly::cyclic(r as usize).div_exact(&phi)?;
    Ok(resultant(&a, &b)?.abs())
}

/// Reduced analogue of [`torsion_formula`] with `nu_r` in place of `t^r - 1`.
pub fn reduced_torsion_formula(delta: &LaurentPoly, r: u64) -> Result<BigInt> {
    check_r(r)?;
    if delta.is_zero() {
        return Err(Error::Degenerate(
            "torsion formula for the zero polynomial".into(),
        ));
    }
    let phi = cyclotomic_divisor(delta, r, true);
    let a = delta.div_exact(&phi)?;
    let b = LaurentPoly::nu(r as usize).div_exact(&phi)?;
    Ok(resultant(&a, &b)?.abs())
}

/// Product of [`torsion_formula`] over the summands.
pub fn torsion_direct_sum(pis: &[LaurentPoly], r: u64) -> Result<BigInt> {
    pis.iter()
        .try_fold(BigInt::one(), |acc, p| Ok(acc * torsion_formula(p, r)?))
}

/// `kappa(r) = b'_r / b_r` together with a periodicity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaReport {
    pub values: Vec<(u64, BigInt)>,
    /// Cyclotomic order of the rational invariant factors.
    pub gamma: u64,
    /// `kappa(r + gamma) == kappa(r)` over the computed range.
    pub periodic: bool,
}

/// `kappa(r)` for `r = 1..=r_max`, with `b'_r` from the rational invariant
/// factors and `b_r` from the SNF oracle.
pub fn kappa_sequence(a: &PresentationMatrix, r_max: u64) -> Result<KappaReport> {
    check_r(r_max)?;
    let pis: Vec<LaurentPoly> = rational_invariant_factors(a)
        .into_iter()
        .filter(|p| !p.is_zero())
        .collect();
    let mut gamma = 1u64;
    for p in &pis {
        gamma = gamma.lcm(&cyclo_factorize(p)?.gamma);
    }
    let mut values = Vec::with_capacity(r_max as usize);
    for r in 1..=r_max {
        let b_prime = torsion_direct_sum(&pis, r)?;
        let b = torsion_snf(a, r, false)?.torsion;
        let (k, rem) = b_prime.div_rem(&b);
        if !rem.is_zero() {
            return Err(Error::Hypothesis(format!(
                "b'_{r} = {b_prime} is not a multiple of b_{r} = {b}; the module is not torsion-free"
            )));
        }
        values.push((r, k));
    }
    let periodic = values
        .iter()
        .zip(values.iter().skip(gamma as usize))
        .all(|(x, y)| x.1 == y.1);
    Ok(KappaReport {
        values,
        gamma,
        periodic,
    })
}

/// `Delta_i`: normalized gcd of the `(N - i) x (N - i)` minors.
pub fn characteristic_poly(a: &PresentationMatrix, i: usize) -> Result<LaurentPoly> {
    let n = a.n_rows();
    if i >= n {
        return Err(Error::Domain(format!(
            "characteristic polynomial index {i} must be below N = {n}"
        )));
    }
    Ok(minors_gcd(a, n - i))
}

/// `delta = (t - 1)^q g` with `g(1) != 0`.
fn split_at_one(delta: &LaurentPoly) -> (u32, LaurentPoly) {
    let t1 = LaurentPoly::from_coeffs(&[-1, 1]);
    let mut g = delta.clone();
    let mut q = 0;
    while let Ok(h) = g.div_exact(&t1) {
        g = h;
        q += 1;
    }
    (q, g)
}

/// Reduced torsion and Betti numbers with the `delta_r` and `delta'_r`
/// decompositions.
pub fn reduced_analysis(delta: &LaurentPoly, r: u64) -> Result<ReducedTorsionProfile> {
    check_r(r)?;
    if delta.is_zero() {
        return Err(Error::Degenerate(
            "reduced analysis of the zero polynomial".into(),
        ));
    }
    let torsion_reduced = reduced_torsion_formula(delta, r)?;
    let betti_reduced = betti(std::slice::from_ref(delta), r, true)?;
    let at_one = value_at_one(delta).abs();
    let delta_r = if at_one.is_zero() {
        None
    } else {
        let b = torsion_formula(delta, r)?;
        let (d, rem) = b.div_rem(&torsion_reduced);
        if !rem.is_zero() {
            return Err(Error::Consistency(format!(
                "b_{r} = {b} is not a multiple of the reduced torsion {torsion_reduced}"
            )));
        }
        if !(&at_one % &d).is_zero() {
            return Err(Error::Consistency(format!(
                "delta_{r} = {d} does not divide |Delta(1)| = {at_one}"
            )));
        }
        Some(d)
    };
    let (q, g) = split_at_one(delta);
    let delta_prime = if q == 0 {
        None
    } else {
        let bg = reduced_torsion_formula(&g, r)?;
        let (ratio, rem) = torsion_reduced.div_rem(&bg);
        if !rem.is_zero() {
            return Err(Error::Consistency(format!(
                "reduced torsion {torsion_reduced} is not a multiple of {bg}"
            )));
        }
        let root = ratio.nth_root(q);
        if num_traits::pow::Pow::pow(&root, q) != ratio {
            return Err(Error::Consistency(format!(
                "{ratio} is not a perfect power of order {q}"
            )));
        }
        Some(root)
    };
    Ok(ReducedTorsionProfile {
        r,
        betti_reduced,
        torsion_reduced,
        delta: delta_r,
        delta_prime,
    })
}

fn is_prime(p: u64) -> bool {
    matches!(factorize(p).as_slice(), [(_, 1)])
}

/// For `delta = (t - 1)^q g` with `p` not dividing `g(1)`: the reduced Betti
/// number at `r = p^k` is 0 and the `p`-part of the reduced torsion is
/// `p^(qk)`.  Both are checked against [`reduced_analysis`].
pub fn prime_power_reduced_check(delta: &LaurentPoly, p: u64, k: u32) -> Result<(u64, BigInt)> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if k == 0 {
        return Err(Error::Domain("k must be >= 1".into()));
    }
    if delta.is_zero() {
        return Err(Error::Degenerate("zero polynomial".into()));
    }
    let (q, g) = split_at_one(delta);
    let g1 = value_at_one(&g);
    if (&g1 % BigInt::from(p)).is_zero() {
        return Err(Error::Hypothesis(format!("{p} divides g(1) = {g1}")));
    }
    let r = p
        .checked_pow(k)
        .ok_or_else(|| Error::Domain(format!("{p}^{k} overflows")))?;
    let expected = num_traits::pow::Pow::pow(&BigInt::from(p), q * k);
    let prof = reduced_analysis(delta, r)?;
    if prof.betti_reduced != 0 {
        return Err(Error::Consistency(format!(
            "reduced Betti number at r = {r} is {}, expected 0",
            prof.betti_reduced
        )));
    }
    let got = p_component(&prof.torsion_reduced, p)?;
    if got != expected {
        return Err(Error::Consistency(format!(
            "{p}-component of reduced torsion at r = {r} is {got}, expected {expected}"
        )));
    }
    Ok((0, expected))
}

/// `phi_hat(r) = sum_{d | r} mu(d) beta_{r/d}` where `beta_seq[i]` is
/// `beta_{i+1}`, and the set of `d` with `phi_hat(d) > 0`.
pub fn mobius_invert_betti(beta_seq: &[u64]) -> (Vec<i64>, BTreeSet<u64>) {
    let mut phi_hat = Vec::with_capacity(beta_seq.len());
    let mut set = BTreeSet::new();
    for r in 1..=beta_seq.len() as u64 {
        let v: i64 = divisors(r)
            .into_iter()
            .map(|d| mobius(d) as i64 * beta_seq[(r / d - 1) as usize] as i64)
            .sum();
        if v > 0 {
            set.insert(r);
        }
        phi_hat.push(v);
    }
    (phi_hat, set)
}

/// Pairs `(r, s)` with `r | s` but `b_r` not dividing `b_s`.
pub fn division_check(profiles: &[TorsionProfile]) -> Result<Vec<(u64, u64)>> {
    if let Some(first) = profiles.first() {
        if profiles.iter().any(|p| p.betti != first.betti) {
            return Err(Error::Precondition(
                "division check needs a common Betti number".into(),
            ));
        }
    }
    let mut bad = Vec::new();
    for a in profiles {
        for b in profiles {
            if a.r != b.r && b.r % a.r == 0 && !(&b.torsion % &a.torsion).is_zero() {
                bad.push((a.r, b.r));
            }
        }
    }
    bad.sort_unstable();
    Ok(bad)
}

fn cross_check(input: &ModuleInput, prof: &TorsionProfile) -> Result<()> {
    let a = input.presentation();
    if prof.r as usize * a.n_rows().max(a.n_cols()) > CROSS_CHECK_DIM {
        return Ok(());
    }
    let oracle = torsion_snf(&a, prof.r, false)?;
    if oracle.betti != prof.betti || oracle.torsion != prof.torsion {
        return Err(Error::Consistency(format!(
            "{} gives (betti {}, torsion {}) at r = {} but SNF gives (betti {}, torsion {})",
            prof.method, prof.betti, prof.torsion, prof.r, oracle.betti, oracle.torsion
        )));
    }
    Ok(())
}

fn require_cyclic(input: &ModuleInput, m: Method) -> Result<&LaurentPoly> {
    input
        .as_cyclic()
        .ok_or_else(|| Error::Precondition(format!("method {m} needs a cyclic module")))
}

fn factors_of(input: &ModuleInput) -> Option<Vec<LaurentPoly>> {
    match input {
        ModuleInput::Cyclic(d) => Some(vec![d.clone()]),
        ModuleInput::InvariantFactors(p) => Some(p.clone()),
        ModuleInput::Presentation(a) => a.as_cyclic().map(|d| vec![d.clone()]),
    }
}

/// Torsion profile at `r` by the requested method.
///
/// `Auto` uses the extended formula for cyclic input, the direct-sum
/// formula for invariant factors and the SNF oracle otherwise.  Formula
/// results are checked against the oracle when the block matrix is small.
pub fn torsion(input: &ModuleInput, r: u64, choice: MethodChoice) -> Result<TorsionProfile> {
    check_r(r)?;
    let method = match choice {
        MethodChoice::Fixed(m) => m,
        MethodChoice::Auto => match input {
            ModuleInput::InvariantFactors(_) => Method::DirectSum,
            _ if input.as_cyclic().is_some() => Method::Extended,
            _ => Method::Snf,
        },
    };
    let prof = match method {
        Method::Snf => return torsion_snf(&input.presentation(), r, false),
        Method::Fox => {
            let d = require_cyclic(input, method)?;
            let res = res_cyclic(d, r as usize)?;
            if res.is_zero() {
                return Err(Error::Hypothesis(format!(
                    "Fox's formula needs a pure torsion number, but Res({d}, t^{r}-1) = 0"
                )));
            }
            TorsionProfile::new(r, 0, res.abs(), Method::Fox)
        }
        Method::Extended => {
            let d = require_cyclic(input, method)?;
            let b = betti(std::slice::from_ref(d), r, false)?;
            TorsionProfile::new(r, b, torsion_formula(d, r)?, Method::Extended)
        }
        Method::DirectSum => {
            let pis = factors_of(input).ok_or_else(|| {
                Error::Precondition("direct-sum method needs invariant factors".into())
            })?;
            let b = betti(&pis, r, false)?;
            TorsionProfile::new(r, b, torsion_direct_sum(&pis, r)?, Method::DirectSum)
        }
        Method::Recurrence => {
            let d = require_cyclic(input, method)?;
            if betti(std::slice::from_ref(d), r, false)? != 0 {
                return Err(Error::Hypothesis(format!(
                    "the recurrence gives |Res({d}, t^{r}-1)|, which vanishes at r = {r}"
                )));
            }
            let value = if d.span() == 0 {
                // Res(c, t^r - 1) = c^r.
                num_traits::pow::Pow::pow(&d.leading().abs(), r)
            } else {
                eval_recurrence(&recurrence_spec(d)?, r)?
            };
            TorsionProfile::new(r, 0, value, Method::Recurrence)
        }
    };
    if choice == MethodChoice::Auto {
        cross_check(input, &prof)?;
    }
    Ok(prof)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_coeffs(c)
    }

    fn fig8() -> LaurentPoly {
        p(&[1, -3, 1])
    }

    fn phi(d: u64) -> LaurentPoly {
        cyclotomic_poly(d).unwrap()
    }

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn betti_examples() {
        for r in 1..10 {
            assert_eq!(betti(&[fig8()], r, false).unwrap(), 0);
            assert_eq!(betti(&[p(&[1, -2, 1])], r, false).unwrap(), 1);
        }
        assert_eq!(betti(&[phi(6)], 6, false).unwrap(), 2);
        assert_eq!(betti(&[phi(6)], 6, true).unwrap(), 2);
        assert_eq!(betti(&[p(&[-1, 1])], 4, true).unwrap(), 0);
        assert!(matches!(
            betti(&[LaurentPoly::zero()], 2, false),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn torsion_snf_examples() {
        let prof = torsion_snf(&PresentationMatrix::cyclic(fig8()), 3, false).unwrap();
        assert_eq!((prof.betti, prof.torsion.clone()), (0, b(16)));
        assert_eq!(prof.method, Method::Snf);
        assert!(prof.pure);

        let prof = torsion_snf(&PresentationMatrix::cyclic(p(&[-6, 6])), 4, false).unwrap();
        assert_eq!((prof.betti, prof.torsion), (1, b(216)));

        let f = fig8();
        let a = PresentationMatrix::new(vec![vec![f.scale(&b(2)), &p(&[-1, 1]) * &f]]).unwrap();
        let prof = torsion_snf(&a, 1, false).unwrap();
        assert_eq!((prof.betti, prof.torsion), (0, b(2)));
    }

    #[test]
    fn torsion_formula_examples() {
        assert_eq!(torsion_formula(&fig8(), 2).unwrap(), b(5));
        assert_eq!(torsion_formula(&phi(6), 6).unwrap(), b(1));
        for r in 1..12 {
            assert_eq!(torsion_formula(&p(&[1, -2, 1]), r).unwrap(), b(r as i64));
        }
        assert!(torsion_formula(&LaurentPoly::zero(), 1).is_err());
    }

    #[test]
    fn direct_sum_examples() {
        // R/(t-1) contributes a free Z and no torsion; (t-1)^2 contributes r.
        let t1 = p(&[-1, 1]);
        let t2 = p(&[1, -2, 1]);
        for r in 1..8u64 {
            assert_eq!(
                torsion_direct_sum(&[t1.clone(), t1.clone()], r).unwrap(),
                b(1)
            );
            assert_eq!(
                torsion_direct_sum(&[t2.clone(), t2.clone()], r).unwrap(),
                b((r * r) as i64)
            );
            let oracle = torsion_snf(
                &PresentationMatrix::diagonal(vec![t1.clone(), t1.clone()]),
                r,
                false,
            )
            .unwrap();
            assert_eq!((oracle.betti, oracle.torsion), (2, b(1)));
            assert_eq!(torsion_direct_sum(&[], r).unwrap(), b(1));
        }
        assert_eq!(torsion_direct_sum(&[fig8()], 2).unwrap(), b(5));
    }

    #[test]
    fn kappa_examples() {
        let rep = kappa_sequence(&PresentationMatrix::cyclic(fig8()), 8).unwrap();
        assert!(rep.values.iter().all(|(_, k)| k.is_one()));
        assert!(rep.periodic);

        let a = PresentationMatrix::diagonal(vec![p(&[-1, 1]), p(&[-1, 0, 1])]);
        let rep = kappa_sequence(&a, 8).unwrap();
        assert!(rep.values.iter().all(|(_, k)| k.is_one()));

        let a = PresentationMatrix::diagonal(vec![p(&[-2, 1]), p(&[-2, 1])]);
        let rep = kappa_sequence(&a, 8).unwrap();
        assert!(rep.values.iter().all(|(_, k)| k.is_one()));
    }

    #[test]
    fn kappa_detects_integer_torsion() {
        // R/(2f, (t-1)f) has Z-torsion, so b'_r / b_r is not integral.
        let f = fig8();
        let a = PresentationMatrix::new(vec![vec![f.scale(&b(2)), &p(&[-1, 1]) * &f]]).unwrap();
        assert!(matches!(kappa_sequence(&a, 4), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn characteristic_poly_examples() {
        let f = fig8();
        let a = PresentationMatrix::new(vec![vec![f.scale(&b(2)), &p(&[-1, 1]) * &f]]).unwrap();
        assert_eq!(characteristic_poly(&a, 0).unwrap(), f);

        let (x, y) = (p(&[-1, 1]), p(&[-1, 0, 1]));
        let a = PresentationMatrix::diagonal(vec![x.clone(), y.clone()]);
        assert_eq!(characteristic_poly(&a, 0).unwrap(), &x * &y);
        assert_eq!(characteristic_poly(&a, 1).unwrap(), x);
        assert!(matches!(characteristic_poly(&a, 2), Err(Error::Domain(_))));

        let a = PresentationMatrix::cyclic(fig8());
        assert_eq!(characteristic_poly(&a, 0).unwrap(), fig8());
    }

    #[test]
    fn reduced_examples() {
        let prof = reduced_analysis(&p(&[-3, 1]), 2).unwrap();
        assert_eq!(prof.torsion_reduced, b(4));
        assert_eq!(prof.delta, Some(b(2)));
        assert_eq!(prof.delta_prime, None);

        for r in 1..=50 {
            let prof = reduced_analysis(&fig8(), r).unwrap();
            assert_eq!(prof.torsion_reduced, torsion_formula(&fig8(), r).unwrap());
            assert_eq!(prof.delta, Some(b(1)));
        }

        let d = p(&[3, -4, 1]);
        let prof = reduced_analysis(&d, 9).unwrap();
        assert_eq!(prof.torsion_reduced, b(9 * 9841));
        assert_eq!(p_component(&prof.torsion_reduced, 3).unwrap(), b(9));
        assert_eq!(prof.delta, None);
        assert_eq!(prof.delta_prime, Some(b(9)));
    }

    #[test]
    fn reduced_matches_snf_oracle() {
        let cases = [
            fig8(),
            p(&[-3, 1]),
            p(&[3, -4, 1]),
            &phi(6) * &fig8(),
            &p(&[1, -2, 1]) * &p(&[2, -3]),
            &phi(2) * &phi(3),
        ];
        for d in &cases {
            let a = PresentationMatrix::cyclic(d.clone());
            for r in 1..=12 {
                let oracle = torsion_snf(&a, r, true).unwrap();
                let prof = reduced_analysis(d, r).unwrap();
                assert_eq!(oracle.torsion, prof.torsion_reduced, "{d} at r = {r}");
                assert_eq!(oracle.betti, prof.betti_reduced, "{d} at r = {r}");
            }
        }
    }

    #[test]
    fn delta_prime_is_r_for_one_linear_factor() {
        // Reported rather than enforced: delta'_r is not periodic here.
        let d = p(&[3, -4, 1]);
        for r in 1..=12u64 {
            let prof = reduced_analysis(&d, r).unwrap();
            assert_eq!(prof.delta_prime, Some(BigInt::from(r)));
        }
    }

    #[test]
    fn prime_power_examples() {
        assert_eq!(
            prime_power_reduced_check(&p(&[3, -4, 1]), 3, 1).unwrap(),
            (0, b(3))
        );
        assert_eq!(
            prime_power_reduced_check(&p(&[3, -4, 1]), 3, 2).unwrap(),
            (0, b(9))
        );
        for pr in [2, 3, 5, 7] {
            for k in 1..=3 {
                assert_eq!(
                    prime_power_reduced_check(&fig8(), pr, k).unwrap(),
                    (0, b(1))
                );
            }
        }
        let d = &p(&[1, -2, 1]) * &fig8();
        assert_eq!(prime_power_reduced_check(&d, 5, 1).unwrap(), (0, b(25)));
        // g(1) = -2 for (t-1)(t-3).
        assert!(matches!(
            prime_power_reduced_check(&p(&[3, -4, 1]), 2, 1),
            Err(Error::Hypothesis(_))
        ));
        assert!(matches!(
            prime_power_reduced_check(&fig8(), 4, 1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn prime_power_families_up_to_cube() {
        let fams: [(LaurentPoly, u64); 3] = [
            (p(&[3, -4, 1]), 3),
            (fig8(), 7),
            (&p(&[1, -2, 1]) * &fig8(), 5),
        ];
        for (d, pr) in &fams {
            for k in 1..=3 {
                prime_power_reduced_check(d, *pr, k).unwrap();
            }
        }
    }

    #[test]
    fn mobius_examples() {
        let d = &(&phi(1) * &phi(6)) * &fig8();
        let beta: Vec<u64> = (1..=12)
            .map(|r| betti(std::slice::from_ref(&d), r, false).unwrap())
            .collect();
        let (ph, set) = mobius_invert_betti(&beta);
        assert_eq!(ph[5], 2);
        assert_eq!(set, BTreeSet::from([1, 6]));
        assert!(mobius_invert_betti(&[0; 10]).1.is_empty());
        let beta: Vec<u64> = (1..=12)
            .map(|r| betti(&[fig8()], r, false).unwrap())
            .collect();
        assert!(mobius_invert_betti(&beta).1.is_empty());
    }

    #[test]
    fn division_check_examples() {
        let profs: Vec<TorsionProfile> = [1, 2, 4]
            .iter()
            .map(|&r| torsion(&ModuleInput::Cyclic(fig8()), r, MethodChoice::Auto).unwrap())
            .collect();
        assert_eq!(profs[2].torsion, b(45));
        assert!(division_check(&profs).unwrap().is_empty());
        assert!(division_check(&profs[..1]).unwrap().is_empty());

        let trefoil: Vec<TorsionProfile> = [2, 4]
            .iter()
            .map(|&r| torsion(&ModuleInput::Cyclic(phi(6)), r, MethodChoice::Auto).unwrap())
            .collect();
        assert_eq!(trefoil[1].torsion, b(3));
        assert!(division_check(&trefoil).unwrap().is_empty());

        let mixed = [
            TorsionProfile::new(1, 0, b(1), Method::Snf),
            TorsionProfile::new(2, 1, b(1), Method::Snf),
        ];
        assert!(division_check(&mixed).is_err());
        let broken = [
            TorsionProfile::new(2, 0, b(3), Method::Snf),
            TorsionProfile::new(4, 0, b(4), Method::Snf),
        ];
        assert_eq!(division_check(&broken).unwrap(), vec![(2, 4)]);
    }

    #[test]
    fn dispatcher_methods_agree() {
        let input = ModuleInput::Cyclic(fig8());
        for r in 1..=20 {
            let values: Vec<BigInt> = [
                Method::Snf,
                Method::Fox,
                Method::Extended,
                Method::DirectSum,
                Method::Recurrence,
            ]
            .iter()
            .map(|&m| torsion(&input, r, MethodChoice::Fixed(m)).unwrap().torsion)
            .collect();
            assert!(values.windows(2).all(|w| w[0] == w[1]), "r = {r}");
        }
        let auto = torsion(&input, 3, MethodChoice::Auto).unwrap();
        assert_eq!(auto.method, Method::Extended);

        let non_pure = ModuleInput::Cyclic(phi(6));
        assert!(matches!(
            torsion(&non_pure, 6, MethodChoice::Fixed(Method::Fox)),
            Err(Error::Hypothesis(_))
        ));
        assert!(matches!(
            torsion(&non_pure, 6, MethodChoice::Fixed(Method::Recurrence)),
            Err(Error::Hypothesis(_))
        ));
        let f = fig8();
        let wide = ModuleInput::Presentation(
            PresentationMatrix::new(vec![vec![f.scale(&b(2)), &p(&[-1, 1]) * &f]]).unwrap(),
        );
        assert_eq!(
            torsion(&wide, 2, MethodChoice::Auto).unwrap().method,
            Method::Snf
        );
        assert!(matches!(
            torsion(&wide, 2, MethodChoice::Fixed(Method::Extended)),
            Err(Error::Precondition(_))
        ));
        let sum = ModuleInput::InvariantFactors(vec![p(&[1, -2, 1]), p(&[1, -2, 1])]);
        let prof = torsion(&sum, 5, MethodChoice::Auto).unwrap();
        assert_eq!(
            (prof.betti, prof.torsion, prof.method),
            (2, b(25), Method::DirectSum)
        );
    }

    #[test]
    fn method_parsing() {
        assert_eq!("auto".parse::<MethodChoice>().unwrap(), MethodChoice::Auto);
        assert_eq!(
            "fox".parse::<MethodChoice>().unwrap(),
            MethodChoice::Fixed(Method::Fox)
        );
        assert!("magic".parse::<MethodChoice>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn primitive_poly() -> impl Strategy<Value = LaurentPoly> {
            prop::collection::vec(-9i64..=9, 1..=6)
                .prop_map(|c| LaurentPoly::from_coeffs(&c))
                .prop_filter("nonzero", |f| !f.is_zero())
                .prop_map(|f| f.primitive_part())
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn formula_matches_oracle(d in primitive_poly(), r in 1u64..=12) {
                let oracle = torsion_snf(&PresentationMatrix::cyclic(d.clone()), r, false).unwrap();
                prop_assert_eq!(torsion_formula(&d, r).unwrap(), oracle.torsion);
                prop_assert_eq!(betti(&[d], r, false).unwrap(), oracle.betti);
            }

            #[test]
            fn betti_is_periodic(
                mask in 0u8..8,
                g in primitive_poly(),
                r in 1u64..=30,
            ) {
                let mut d = g;
                for (i, k) in [1u64, 4, 6].iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        d = &d * &phi(*k);
                    }
                }
                let gamma = cyclo_factorize(&d).unwrap().gamma;
                prop_assert_eq!(
                    betti(&[d.clone()], r, false).unwrap(),
                    betti(&[d], r + gamma, false).unwrap()
                );
            }

            #[test]
            fn formula_is_positive(d in primitive_poly(), r in 1u64..=40) {
                prop_assert!(torsion_formula(&d, r).unwrap() >= BigInt::one());
            }

            #[test]
            fn division_sequence_on_constant_betti(d in primitive_poly()) {
                let profs: Vec<TorsionProfile> = (1..=12)
                    .map(|r| torsion(&ModuleInput::Cyclic(d.clone()), r, MethodChoice::Fixed(Method::Extended)).unwrap())
                    .collect();
                for beta in profs.iter().map(|p| p.betti).collect::<BTreeSet<_>>() {
                    let sub: Vec<TorsionProfile> = profs.iter().filter(|p| p.betti == beta).cloned().collect();
                    prop_assert!(division_check(&sub).unwrap().is_empty());
                }
            }
        }
    }

    #[test]
    fn reduced_consistency_and_periodicity() {
        for d in [p(&[-3, 1]), p(&[6, -5, 1])] {
            let gamma = cyclo_factorize(&d).unwrap().gamma;
            let at_one = value_at_one(&d).abs();
            let profs: Vec<ReducedTorsionProfile> =
                (1..=40).map(|r| reduced_analysis(&d, r).unwrap()).collect();
            for prof in &profs {
                let delta = prof.delta.clone().unwrap();
                assert_eq!(
                    &prof.torsion_reduced * &delta,
                    torsion_formula(&d, prof.r).unwrap()
                );
                assert!((&at_one % &delta).is_zero());
            }
            for w in profs.iter().zip(profs.iter().skip(gamma as usize)) {
                assert_eq!(w.0.delta, w.1.delta);
            }
        }
    }
}
