//! Linear recurrences for `R(f, r) = Res(f, t^r - 1)` and for the full
//! torsion sequence of a cyclic module.
//!
//! If `f = c0 (t - a_1) ... (t - a_d)` then `R(f, r) = c0^r prod (a_i^r - 1)`,
//! a signed sum of `r`-th powers of `c0` times products of distinct roots.
//! The products of `k` roots are the roots of the characteristic polynomial
//! of the `k`-th compound of the companion matrix of `f / c0`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cyclotomic::{cyclo_factorize, euler_phi};
use crate::error::{Error, Result};
use crate::linalg::{charpoly_rational, companion_of, subsets, PresentationMatrix};
use crate::poly::{LaurentPoly, RatPoly};
use crate::resultant::res_cyclic;
use crate::torsion::{torsion_formula, torsion_snf};

/// Whether `|R(r)|` equals `R(r)` up to a fixed sign or up to `(-1)^r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignMode {
    Constant,
    Alternating,
}

impl fmt::Display for SignMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignMode::Constant => "constant",
            SignMode::Alternating => "alternating",
        })
    }
}

/// `sum_j coefficients[j] x(n + m - j) = 0`, seeded with
/// `x(seed_start), ..., x(seed_start + m - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceSpec {
    pub order: usize,
    /// Characteristic polynomial, leading coefficient first.
    pub coefficients: Vec<BigInt>,
    pub sign_mode: SignMode,
    pub seed: Vec<BigInt>,
    pub seed_start: u64,
}

impl RecurrenceSpec {
    /// The characteristic polynomial as a polynomial in `t`.
    pub fn characteristic_poly(&self) -> LaurentPoly {
        LaurentPoly::new(self.coefficients.iter().rev().cloned().collect(), 0)
    }

    /// Coefficients of the recurrence for the signed sequence: alternate
    /// terms flipped back in the alternating case.
    pub fn signed_coefficients(&self) -> Vec<BigInt> {
        match self.sign_mode {
            SignMode::Constant => self.coefficients.clone(),
            SignMode::Alternating => alternate(&self.coefficients),
        }
    }
}

fn alternate(c: &[BigInt]) -> Vec<BigInt> {
    c.iter()
        .enumerate()
        .map(|(i, x)| if i % 2 == 1 { -x } else { x.clone() })
        .collect()
}

fn ordinary_degree(f: &LaurentPoly) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::Degenerate("zero polynomial".into()));
    }
    let d = f.span();
    if d == 0 {
        return Err(Error::Domain(format!("{f} is constant")));
    }
    Ok(d)
}

/// Determinant over `Q` by Gaussian elimination.
fn det_rational(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &a[c][c];
            for k in c..n {
                let v = &f * &a[c][k];
                a[r][k] -= v;
            }
        }
    }
    det
}

/// Monic `f_k` over `Q`: roots are the products of `k` distinct roots of
/// `f`, with multiplicity.
fn lehmer_factors_rational(f: &LaurentPoly) -> Result<Vec<RatPoly>> {
    let d = ordinary_degree(f)?;
    let f = f.to_ordinary();
    let c0 = BigRational::from_integer(f.leading());
    // Companion of f / c0 in the superdiagonal layout.
    let mut comp = vec![vec![BigRational::zero(); d]; d];
    for (i, row) in comp.iter_mut().enumerate().take(d - 1) {
        row[i + 1] = BigRational::one();
    }
    for j in 0..d {
        comp[d - 1][j] = -BigRational::from_integer(f.coeff(j as i64)) / &c0;
    }
    let mut out = vec![RatPoly::linear_root(BigRational::one())];
    for k in 1..=d {
        let idx = subsets(d, k);
        let compound: Vec<Vec<BigRational>> = idx
            .iter()
            .map(|rs| {
                idx.iter()
                    .map(|cs| {
                        det_rational(
                            rs.iter()
                                .map(|&i| cs.iter().map(|&j| comp[i][j].clone()).collect())
                                .collect(),
                        )
                    })
                    .collect()
            })
            .collect();
        out.push(charpoly_rational(&compound));
    }
    Ok(out)
}

/// `f_0 = t - 1` and `f_k`, `k = 1..=deg f`, whose roots are the products of
/// `k` distinct roots of `f`; each primitive with positive leading
/// coefficient.
pub fn lehmer_factors(f: &LaurentPoly) -> Result<Vec<LaurentPoly>> {
    Ok(lehmer_factors_rational(f)?
        .iter()
        .map(RatPoly::to_primitive_integer)
        .collect())
}

fn ipow(b: &BigInt, e: usize) -> BigInt {
    num_traits::pow::Pow::pow(b, e)
}

/// Recurrence for `|Res(f, t^r - 1)|`.
///
/// The characteristic polynomial is `c0^m L(t / c0)` where `L` is the lcm
/// of the squarefree parts of the `f_k` and `c0` the leading coefficient of
/// `f`; it is monic with integer coefficients.  Seeds start at `r = 0`.
pub fn recurrence_spec(f: &LaurentPoly) -> Result<RecurrenceSpec> {
    let fs = lehmer_factors_rational(f)?;
    let f = f.to_ordinary();
    let l = fs
        .iter()
        .fold(RatPoly::one(), |acc, fk| acc.lcm(&fk.squarefree_part()));
    let m = l.degree().expect("nonzero lcm");
    let c0 = f.leading();
    // coefficients of L leading first, times c0^j.
    let mut coefficients = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let c = &l.coeffs()[m - j] * BigRational::from_integer(ipow(&c0, j));
        if !c.is_integer() {
            return Err(Error::Consistency(format!(
                "recurrence coefficient {c} for {f} is not an integer"
            )));
        }
        coefficients.push(c.to_integer());
    }
    let r1 = res_cyclic(&f, 1)?;
    let r2 = res_cyclic(&f, 2)?;
    let sign_mode = if r1.is_zero() || r2.is_zero() || r1.signum() == r2.signum() {
        SignMode::Constant
    } else {
        SignMode::Alternating
    };
    if sign_mode == SignMode::Alternating {
        coefficients = alternate(&coefficients);
    }
    let mut seed = Vec::with_capacity(m);
    seed.push(BigInt::zero());
    for r in 1..m {
        seed.push(res_cyclic(&f, r)?.abs());
    }
    Ok(RecurrenceSpec {
        order: m,
        coefficients,
        sign_mode,
        seed,
        seed_start: 0,
    })
}

/// The `r`-th term by forward iteration.
pub fn eval_recurrence(spec: &RecurrenceSpec, r: u64) -> Result<BigInt> {
    if r < spec.seed_start {
        return Err(Error::Domain(format!(
            "r = {r} precedes the first seeded index {}",
            spec.seed_start
        )));
    }
    let m = spec.order;
    if spec.coefficients.len() != m + 1 || spec.seed.len() != m {
        return Err(Error::Consistency("malformed recurrence spec".into()));
    }
    let idx = (r - spec.seed_start) as usize;
    if idx < m {
        return Ok(spec.seed[idx].clone());
    }
    let lead = &spec.coefficients[0];
    if lead.is_zero() {
        return Err(Error::Consistency("zero leading coefficient".into()));
    }
    let mut window: std::collections::VecDeque<BigInt> = spec.seed.iter().cloned().collect();
    for n in m..=idx {
        let mut acc = BigInt::zero();
        for j in 1..=m {
            let c = &spec.coefficients[j];
            if !c.is_zero() {
                acc += c * &window[m - j];
            }
        }
        let (q, rem) = (-acc).div_rem(lead);
        if !rem.is_zero() {
            return Err(Error::Consistency(format!(
                "non-integral term at index {}",
                n as u64 + spec.seed_start
            )));
        }
        window.pop_front();
        window.push_back(q);
    }
    Ok(window.pop_back().expect("order >= 1"))
}

/// All terms `seed_start..=r_max` (empty if `r_max < seed_start`).
pub fn eval_recurrence_range(spec: &RecurrenceSpec, r_max: u64) -> Result<Vec<BigInt>> {
    if r_max < spec.seed_start {
        return Ok(Vec::new());
    }
    let n = (r_max - spec.seed_start + 1) as usize;
    let m = spec.order;
    let mut out: Vec<BigInt> = spec.seed.iter().take(n).cloned().collect();
    let lead = &spec.coefficients[0];
    while out.len() < n {
        let k = out.len();
        let mut acc = BigInt::zero();
        for j in 1..=m {
            acc += &spec.coefficients[j] * &out[k - j];
        }
        let (q, rem) = (-acc).div_rem(lead);
        if !rem.is_zero() {
            return Err(Error::Consistency(format!(
                "non-integral term at index {}",
                k as u64 + spec.seed_start
            )));
        }
        out.push(q);
    }
    Ok(out)
}

/// Characteristic polynomial (leading first) of `|Res(g, t^r - 1)|`.
fn base_coefficients(g: &LaurentPoly) -> Result<Vec<BigInt>> {
    if g.span() == 0 {
        return Ok(vec![BigInt::one(), -g.leading().abs()]);
    }
    Ok(recurrence_spec(g)?.coefficients)
}

fn poly_from_leading_first(c: &[BigInt]) -> LaurentPoly {
    LaurentPoly::new(c.iter().rev().cloned().collect(), 0)
}

/// Recurrence for the whole torsion sequence `b_r` of `R / (delta)`.
///
/// With `delta = prod Phi_d^(e_d) g`, `gamma` the cyclotomic order and
/// `M = sum phi(d)(e_d - 1)`, the characteristic polynomial is
/// `P(t) = Q(t^gamma)` where `Q` has the roots `lambda^gamma` of the base
/// polynomial `p` of `|Res(g, t^r - 1)|` with multiplicity raised by `M`.
/// Seeds `b_1, b_2, ...` come from the SNF oracle.
pub fn full_recurrence_spec(delta: &LaurentPoly) -> Result<RecurrenceSpec> {
    if delta.is_zero() {
        return Err(Error::Degenerate("zero polynomial".into()));
    }
    let cf = cyclo_factorize(delta)?;
    let g = cf.non_cyclotomic_part.to_ordinary();
    let gamma = cf.gamma as usize;
    let big_m = cf.excess_degree() as u32;
    let p = poly_from_leading_first(&base_coefficients(&g)?);
    let rad = RatPoly::from_laurent(&p)
        .squarefree_part()
        .to_primitive_integer();
    let q1 = companion_of(&p).pow(gamma).charpoly();
    let q2 = companion_of(&rad).pow(gamma).charpoly().pow(big_m);
    let q = &q1 * &q2;
    // P(t) = Q(t^gamma)
    let mut pc = vec![BigInt::zero(); q.span() * gamma + 1];
    for (i, c) in q.coeffs().iter().enumerate() {
        pc[i * gamma] = c.clone();
    }
    let coefficients: Vec<BigInt> = pc.into_iter().rev().collect();
    let order = coefficients.len() - 1;
    let a = PresentationMatrix::cyclic(delta.clone());
    let seed = (1..=order as u64)
        .map(|r| torsion_snf(&a, r, false).map(|p| p.torsion))
        .collect::<Result<Vec<_>>>()?;
    Ok(RecurrenceSpec {
        order,
        coefficients,
        sign_mode: SignMode::Constant,
        seed,
        seed_start: 1,
    })
}

/// `(C_R, M_R)` with `b_r = C_R r^(M_R) |Res(g, t^r - 1)|` for all probed
/// `r = R (mod gamma)`.  `M_R` sums `phi(d)(e_d - 1)` over `d | R`; every
/// `d` divides `R = 0`.
pub fn structure_constants(
    delta: &LaurentPoly,
    residue: u64,
    r_probe: &[u64],
) -> Result<(BigRational, u64)> {
    if delta.is_zero() {
        return Err(Error::Degenerate("zero polynomial".into()));
    }
    let cf = cyclo_factorize(delta)?;
    let gamma = cf.gamma;
    let residue = residue % gamma;
    if r_probe.is_empty() {
        return Err(Error::Precondition("no probe values".into()));
    }
    if let Some(r) = r_probe.iter().find(|&&r| r == 0 || r % gamma != residue) {
        return Err(Error::Precondition(format!(
            "probe r = {r} is not a positive value congruent to {residue} mod {gamma}"
        )));
    }
    let m_r: u64 = cf
        .factors
        .iter()
        .filter(|&&(d, _)| residue.is_multiple_of(d))
        .map(|&(d, e)| euler_phi(d) * (e as u64 - 1))
        .sum();
    let g = &cf.non_cyclotomic_part;
    let mut c_r: Option<BigRational> = None;
    for &r in r_probe {
        let b = torsion_formula(delta, r)?;
        let denom = ipow(&BigInt::from(r), m_r as usize) * res_cyclic(g, r as usize)?.abs();
        let c = BigRational::new(b, denom);
        match &c_r {
            None => c_r = Some(c),
            Some(prev) if *prev != c => {
                return Err(Error::Consistency(format!(
                    "C_R is not constant: {prev} vs {c} at r = {r}"
                )))
            }
            _ => {}
        }
    }
    Ok((c_r.expect("nonempty probes"), m_r))
}
