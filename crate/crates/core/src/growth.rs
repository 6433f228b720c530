//! Root isolation, Mahler measure, growth-rate samples and `p`-parts.
//!
//! Roots are refined by Aberth iteration on dyadic fixed-point numbers and
//! certified with Weierstrass inclusion discs, whose radii are computed from
//! exact evaluations of the polynomial at the (dyadic) centers.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::cyclotomic::{cyclo_factorize, factorize};
use crate::error::{Error, Result};
use crate::poly::{bigint_to_f64, LaurentPoly};

const LN2: f64 = std::f64::consts::LN_2;
const MAX_PREC_BITS: u64 = 1 << 15;

/// Natural logarithm of a positive integer of any size.
pub fn ln_bigint(n: &BigInt) -> f64 {
    ln_biguint(n.magnitude())
}

fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * LN2
}

/// A root approximation `re + i im` with a certified error radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifiedRoot {
    pub re: f64,
    pub im: f64,
    pub radius: f64,
}

impl CertifiedRoot {
    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Complex dyadic number `(re + i im) / 2^prec`.
#[derive(Clone, Debug)]
struct Fx {
    re: BigInt,
    im: BigInt,
}

impl Fx {
    fn zero() -> Self {
        Fx {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    fn from_f64(re: f64, im: f64, prec: u64) -> Self {
        Fx {
            re: f64_to_fixed(re, prec),
            im: f64_to_fixed(im, prec),
        }
    }

    fn rescale(&self, from: u64, to: u64) -> Self {
        if to >= from {
            Fx {
                re: &self.re << (to - from),
                im: &self.im << (to - from),
            }
        } else {
            Fx {
                re: &self.re >> (from - to),
                im: &self.im >> (from - to),
            }
        }
    }

    fn add(&self, o: &Fx) -> Fx {
        Fx {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    fn sub(&self, o: &Fx) -> Fx {
        Fx {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    fn mul(&self, o: &Fx, prec: u64) -> Fx {
        Fx {
            re: (&self.re * &o.re - &self.im * &o.im) >> prec,
            im: (&self.re * &o.im + &self.im * &o.re) >> prec,
        }
    }

    fn div(&self, o: &Fx, prec: u64) -> Option<Fx> {
        let den = &o.re * &o.re + &o.im * &o.im;
        if den.is_zero() {
            return None;
        }
        let nr = (&self.re * &o.re + &self.im * &o.im) << prec;
        let ni = (&self.im * &o.re - &self.re * &o.im) << prec;
        Some(Fx {
            re: nr.div_floor(&den),
            im: ni.div_floor(&den),
        })
    }

    fn norm_sq(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    /// `ln |self|` for the unscaled integer pair.
    fn ln_abs_raw(&self) -> f64 {
        let n = self.norm_sq();
        if n.is_zero() {
            f64::NEG_INFINITY
        } else {
            0.5 * ln_bigint(&n)
        }
    }

    fn to_f64(&self, prec: u64) -> (f64, f64) {
        (fixed_to_f64(&self.re, prec), fixed_to_f64(&self.im, prec))
    }
}

fn f64_to_fixed(x: f64, prec: u64) -> BigInt {
    if x == 0.0 || !x.is_finite() {
        return BigInt::zero();
    }
    // x = m 2^e exactly.
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (m, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let m = BigInt::from(m);
    let shift = e + prec as i64;
    let v = if shift >= 0 {
        m << shift as u64
    } else {
        m >> (-shift) as u64
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

fn fixed_to_f64(x: &BigInt, prec: u64) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let bits = x.bits();
    let (m, s) = if bits > 64 {
        let s = bits - 64;
        ((x.magnitude() >> s).to_f64().unwrap(), s as i64)
    } else {
        (x.magnitude().to_f64().unwrap(), 0)
    };
    let v = m * 2f64.powi((s - prec as i64) as i32);
    if x.sign() == Sign::Minus {
        -v
    } else {
        v
    }
}

/// Aberth iteration in double precision from points on a circle.
fn aberth_f64(coeffs: &[f64]) -> Vec<(f64, f64)> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    // Cauchy-type bound on root moduli.
    let bound = 1.0
        + coeffs[..n]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(0.0, f64::max);
    let lower = {
        let c0 = coeffs[0].abs();
        let m = coeffs[1..].iter().map(|c| c.abs()).fold(0.0, f64::max);
        if m > 0.0 {
            c0 / (c0 + m)
        } else {
            1.0
        }
    };
    let rad = (bound * lower).sqrt().clamp(lower, bound);
    let mut z: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            (rad * a.cos(), rad * a.sin())
        })
        .collect();
    let eval = |x: (f64, f64)| {
        let (mut pr, mut pi) = (0.0, 0.0);
        let (mut dr, mut di) = (0.0, 0.0);
        for c in coeffs.iter().rev() {
            let ndr = dr * x.0 - di * x.1 + pr;
            let ndi = dr * x.1 + di * x.0 + pi;
            dr = ndr;
            di = ndi;
            let npr = pr * x.0 - pi * x.1 + c;
            let npi = pr * x.1 + pi * x.0;
            pr = npr;
            pi = npi;
        }
        ((pr, pi), (dr, di))
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, d) = eval(z[i]);
            if p.0 == 0.0 && p.1 == 0.0 {
                continue;
            }
            let w = cdiv(p, d);
            let mut s = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let inv = cdiv((1.0, 0.0), (z[i].0 - z[j].0, z[i].1 - z[j].1));
                    s = (s.0 + inv.0, s.1 + inv.1);
                }
            }
            let ws = cmul(w, s);
            let step = cdiv(w, (1.0 - ws.0, -ws.1));
            if !(step.0.is_finite() && step.1.is_finite()) {
                continue;
            }
            z[i] = (z[i].0 - step.0, z[i].1 - step.1);
            let scale = 1.0 + z[i].0.hypot(z[i].1);
            moved = moved.max(step.0.hypot(step.1) / scale);
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cdiv(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let d = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
}

/// `(p(z), p'(z))` in fixed point.
fn eval_fx(coeffs: &[BigInt], z: &Fx, prec: u64) -> (Fx, Fx) {
    let mut p = Fx::zero();
    let mut d = Fx::zero();
    for c in coeffs.iter().rev() {
        d = d.mul(z, prec).add(&p);
        p = p.mul(z, prec);
        p.re += c << prec;
    }
    (p, d)
}

/// `2^(prec n) p(z)` computed exactly for dyadic `z`.
fn eval_exact(coeffs: &[BigInt], z: &Fx, prec: u64) -> Fx {
    let n = coeffs.len() - 1;
    let mut h = Fx {
        re: coeffs[n].clone(),
        im: BigInt::zero(),
    };
    for k in (0..n).rev() {
        let re = &h.re * &z.re - &h.im * &z.im;
        let im = &h.re * &z.im + &h.im * &z.re;
        h = Fx {
            re: re + (&coeffs[k] << (prec * (n - k) as u64)),
            im,
        };
    }
    h
}

fn aberth_fx(coeffs: &[BigInt], z: &mut [Fx], prec: u64, iters: usize) {
    let n = z.len();
    let one = Fx {
        re: BigInt::one() << prec,
        im: BigInt::zero(),
    };
    let tiny = BigInt::one() << (prec / 2).max(8);
    for _ in 0..iters {
        let mut max_step = BigInt::zero();
        for i in 0..n {
            let (p, d) = eval_fx(coeffs, &z[i], prec);
            if p.re.is_zero() && p.im.is_zero() {
                continue;
            }
            let Some(w) = p.div(&d, prec) else { continue };
            let mut s = Fx::zero();
            for j in 0..n {
                if j != i {
                    if let Some(inv) = one.div(&z[i].sub(&z[j]), prec) {
                        s = s.add(&inv);
                    }
                }
            }
            let denom = one.sub(&w.mul(&s, prec));
            let Some(step) = w.div(&denom, prec) else {
                continue;
            };
            let size = step.re.abs().max(step.im.abs());
            if size > max_step {
                max_step = size;
            }
            z[i] = z[i].sub(&step);
        }
        if max_step < tiny {
            break;
        }
    }
}

/// Weierstrass radii `n |p(z_i)| / (|lc| prod |z_i - z_j|)`, or `None` if
/// two centers coincide.
fn weierstrass_radii(coeffs: &[BigInt], z: &[Fx], prec: u64) -> Option<Vec<f64>> {
    let n = z.len();
    let ln_lc = ln_bigint(&coeffs[n]);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let h = eval_exact(coeffs, &z[i], prec);
        let ln_p = h.ln_abs_raw() - (prec * n as u64) as f64 * LN2;
        if ln_p == f64::NEG_INFINITY {
            out.push(0.0);
            continue;
        }
        let mut ln_den = ln_lc;
        for j in 0..n {
            if j != i {
                let d = z[i].sub(&z[j]);
                if d.re.is_zero() && d.im.is_zero() {
                    return None;
                }
                ln_den += d.ln_abs_raw() - prec as f64 * LN2;
            }
        }
        // Small relative margin for the logarithm evaluations.
        out.push((n as f64).ln().exp() * (ln_p - ln_den).exp() * (1.0 + 1e-9));
    }
    Some(out)
}

fn discs_disjoint(z: &[(f64, f64)], radii: &[f64]) -> bool {
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let d = (z[i].0 - z[j].0).hypot(z[i].1 - z[j].1);
            if d * (1.0 - 1e-12) <= radii[i] + radii[j] {
                return false;
            }
        }
    }
    true
}

/// Certified roots of a squarefree ordinary polynomial of degree >= 1.
fn roots_squarefree(f: &LaurentPoly, eps: f64) -> Result<Vec<CertifiedRoot>> {
    let coeffs: Vec<BigInt> = f.to_ordinary().coeffs().to_vec();
    let n = coeffs.len() - 1;
    if n == 1 {
        // Exact rational root.
        let (a, b) = (&coeffs[0], &coeffs[1]);
        let v = -(bigint_to_f64(a) / bigint_to_f64(b));
        let radius = v.abs() * f64::EPSILON;
        return Ok(vec![CertifiedRoot {
            re: v,
            im: 0.0,
            radius,
        }]);
    }
    // Scale to avoid f64 overflow in the initial iteration.
    let max_bits = coeffs.iter().map(|c| c.bits()).max().unwrap_or(0);
    let shift = max_bits.saturating_sub(900);
    let fc: Vec<f64> = coeffs
        .iter()
        .map(|c| bigint_to_f64(&(c >> shift)))
        .collect();
    let start = aberth_f64(&fc);
    let target_bits = (-(eps.log2())).max(0.0).ceil() as u64;
    let mut prec = (target_bits + 64).max(96);
    let mut z: Vec<Fx> = start
        .iter()
        .map(|&(r, i)| Fx::from_f64(r, i, prec))
        .collect();
    let mut cur_prec = prec;
    loop {
        if cur_prec != prec {
            z = z.iter().map(|x| x.rescale(cur_prec, prec)).collect();
            cur_prec = prec;
        }
        aberth_fx(&coeffs, &mut z, prec, 200);
        if let Some(radii) = weierstrass_radii(&coeffs, &z, prec) {
            let centers: Vec<(f64, f64)> = z.iter().map(|x| x.to_f64(prec)).collect();
            // Rounding the dyadic centers to f64 moves them by at most one ulp.
            let total: Vec<f64> = radii
                .iter()
                .zip(&centers)
                .map(|(r, c)| r + 2.0 * f64::EPSILON * c.0.hypot(c.1) + f64::MIN_POSITIVE)
                .collect();
            if discs_disjoint(&centers, &radii) && radii.iter().all(|&r| r <= eps / 2.0) {
                if total.iter().any(|&r| r > eps) {
                    return Err(Error::Domain(format!(
                        "eps = {eps:e} is below double-precision resolution of the roots of {f}"
                    )));
                }
                return Ok(centers
                    .into_iter()
                    .zip(total)
                    .map(|((re, im), radius)| CertifiedRoot { re, im, radius })
                    .collect());
            }
        }
        prec *= 2;
        if prec > MAX_PREC_BITS {
            return Err(Error::Consistency(format!(
                "root isolation for {f} did not converge"
            )));
        }
    }
}

/// All `deg f` complex roots of `f` (after removing any power of `t`), with
/// multiplicity, each with certified radius `<= eps`.  Sorted by
/// decreasing modulus, then by argument.
pub fn complex_roots(f: &LaurentPoly, eps: f64) -> Result<Vec<CertifiedRoot>> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    if f.is_zero() {
        return Err(Error::Degenerate("roots of the zero polynomial".into()));
    }
    let f = f.to_ordinary();
    if f.span() == 0 {
        return Err(Error::Domain(format!("{f} is constant")));
    }
    let mut out = Vec::with_capacity(f.span());
    for (s, k) in f.squarefree_decomposition() {
        let roots = roots_squarefree(&s, eps)?;
        for _ in 0..k {
            out.extend_from_slice(&roots);
        }
    }
    out.sort_by(|a, b| {
        b.modulus()
            .total_cmp(&a.modulus())
            .then(a.im.atan2(a.re).total_cmp(&b.im.atan2(b.re)))
    });
    Ok(out)
}

/// A real value with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MahlerValue {
    pub value: f64,
    pub error: f64,
    /// Non-cyclotomic roots whose inclusion disc meets the unit circle.
    pub near_unit_circle: usize,
}

fn mahler_with_radius(g: &LaurentPoly, rho: f64) -> Result<MahlerValue> {
    let roots = complex_roots(g, rho)?;
    let c0 = bigint_to_f64(&g.leading()).abs();
    let (mut lo, mut hi) = (c0, c0);
    let mut flagged = 0;
    for r in &roots {
        let m = r.modulus();
        let (a, b) = ((m - r.radius).max(1.0), (m + r.radius).max(1.0));
        if m - r.radius < 1.0 && m + r.radius > 1.0 {
            flagged += 1;
        }
        lo *= a;
        hi *= b;
    }
    let fp = 4.0 * (roots.len() + 1) as f64 * f64::EPSILON * hi;
    Ok(MahlerValue {
        value: 0.5 * (lo + hi),
        error: 0.5 * (hi - lo) + fp,
        near_unit_circle: flagged,
    })
}

/// `M(f) = |c0| prod max(1, |a_i|)` within `eps`.  Cyclotomic factors are
/// removed exactly first; the zero polynomial has measure 0.
pub fn mahler_measure(f: &LaurentPoly, eps: f64) -> Result<MahlerValue> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    if f.is_zero() {
        return Ok(MahlerValue {
            value: 0.0,
            error: 0.0,
            near_unit_circle: 0,
        });
    }
    let g = cyclo_factorize(f)?.non_cyclotomic_part.to_ordinary();
    if g.span() == 0 {
        return Ok(MahlerValue {
            value: bigint_to_f64(&g.leading()).abs(),
            error: 0.0,
            near_unit_circle: 0,
        });
    }
    let mut rho = (eps / (4.0 * g.span() as f64)).min(1e-3);
    loop {
        let m = mahler_with_radius(&g, rho)?;
        if m.error <= eps {
            return Ok(m);
        }
        let next = rho * (eps / m.error).min(0.5);
        if next < 1e-300 {
            return Err(Error::Consistency("Mahler measure did not converge".into()));
        }
        rho = next;
    }
}

/// `(r, b_r^(1/r))` for each sample.
pub fn growth_samples(seq: &[(u64, BigInt)]) -> Result<Vec<(u64, f64)>> {
    seq.iter()
        .map(|(r, b)| {
            if *r == 0 || !b.is_positive() {
                return Err(Error::Domain(format!(
                    "growth sample needs r >= 1 and b_r >= 1, got b_{r} = {b}"
                )));
            }
            Ok((*r, (ln_bigint(b) / *r as f64).exp()))
        })
        .collect()
}

/// `exp` of the least-squares slope of `ln b_r` against `r`.
pub fn fitted_growth_rate(seq: &[(u64, BigInt)]) -> Result<f64> {
    if seq.len() < 2 {
        return Err(Error::Precondition("need at least two samples".into()));
    }
    let pts: Vec<(f64, f64)> = seq
        .iter()
        .map(|(r, b)| {
            if !b.is_positive() {
                return Err(Error::Domain(format!("b_{r} = {b} is not positive")));
            }
            Ok((*r as f64, ln_bigint(b)))
        })
        .collect::<Result<_>>()?;
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Precondition("samples share a single r".into()));
    }
    Ok((sxy / sxx).exp())
}

fn require_prime(p: u64) -> Result<()> {
    if matches!(factorize(p).as_slice(), [(_, 1)]) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{p} is not prime")))
    }
}

/// `p^(v_p(n))`, the largest power of `p` dividing `n`.
pub fn p_component(n: &BigInt, p: u64) -> Result<BigInt> {
    require_prime(p)?;
    if n.is_zero() {
        return Err(Error::Domain("p-component of 0".into()));
    }
    let pb = BigInt::from(p);
    let mut m = n.abs();
    let mut out = BigInt::one();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return Ok(out);
        }
        m = q;
        out *= &pb;
    }
}

/// `p`-part growth samples against the target `(content delta)^(p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PGrowth {
    pub p: u64,
    pub samples: Vec<(u64, f64)>,
    pub target: BigInt,
    /// Last sample minus the target.
    pub final_deviation: f64,
}

pub fn p_growth(seq: &[(u64, BigInt)], p: u64, delta: &LaurentPoly) -> Result<PGrowth> {
    require_prime(p)?;
    if seq.is_empty() {
        return Err(Error::Precondition("empty sequence".into()));
    }
    if delta.is_zero() {
        return Err(Error::Degenerate("zero polynomial".into()));
    }
    let parts: Vec<(u64, BigInt)> = seq
        .iter()
        .map(|(r, b)| Ok((*r, p_component(b, p)?)))
        .collect::<Result<_>>()?;
    let samples = growth_samples(&parts)?;
    let target = p_component(&delta.content(), p)?;
    let last = samples.last().expect("nonempty").1;
    Ok(PGrowth {
        p,
        final_deviation: last - bigint_to_f64(&target),
        samples,
        target,
    })
}

/// Everything the growth commands report for one sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub mahler: MahlerValue,
    pub samples: Vec<(u64, f64)>,
    pub p: Option<u64>,
    pub p_samples: Option<Vec<(u64, f64)>>,
    pub content_p: Option<BigInt>,
}

impl GrowthReport {
    pub fn new(
        delta: &LaurentPoly,
        seq: &[(u64, BigInt)],
        eps: f64,
        p: Option<u64>,
    ) -> Result<Self> {
        if seq.is_empty() {
            return Err(Error::Precondition("empty sequence".into()));
        }
        let mahler = mahler_measure(delta, eps)?;
        let samples = growth_samples(seq)?;
        let (p_samples, content_p) = match p {
            Some(p) => {
                let g = p_growth(seq, p, delta)?;
                (Some(g.samples), Some(g.target))
            }
            None => (None, None),
        };
        Ok(GrowthReport {
            mahler,
            samples,
            p,
            p_samples,
            content_p,
        })
    }
}

/// Result of [`square_prime_probe`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SquareProbe {
    pub is_square: bool,
    pub sqrt_digits: Option<usize>,
    pub sqrt_probable_prime: Option<bool>,
}

/// Exact square test; on success the decimal length of the root and a
/// 64-round Miller-Rabin verdict on it.
pub fn square_prime_probe(n: &BigInt) -> Result<SquareProbe> {
    if !n.is_positive() {
        return Err(Error::Domain(format!("square probe needs n >= 1, got {n}")));
    }
    let s = n.sqrt();
    if &(&s * &s) != n {
        return Ok(SquareProbe {
            is_square: false,
            sqrt_digits: None,
            sqrt_probable_prime: None,
        });
    }
    Ok(SquareProbe {
        is_square: true,
        sqrt_digits: Some(s.to_string().len()),
        sqrt_probable_prime: Some(is_probable_prime(s.magnitude(), 64)),
    })
}

/// Miller-Rabin with `rounds` bases drawn from a fixed-seed generator.
pub fn is_probable_prime(n: &BigUint, rounds: u32) -> bool {
    let small = [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &small {
        let q = BigUint::from(q);
        if *n == q {
            return true;
        }
        if (n % &q).is_zero() {
            return false;
        }
    }
    if *n < BigUint::from(2u32) {
        return false;
    }
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().expect("n > 1");
    let d = &n1 >> s;
    let mut rng = ChaCha20Rng::seed_from_u64(0x5eed_2024);
    let span = n - BigUint::from(3u32);
    let bytes = (n.bits() / 8 + 8) as usize;
    'outer: for _ in 0..rounds {
        let mut buf = vec![0u8; bytes];
        rng.fill_bytes(&mut buf);
        let a = BigUint::from_bytes_le(&buf) % &span + BigUint::from(2u32);
        let mut x = a.modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigUint::from(2u32), n);
            if x == n1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Plain decimal with 9 significant digits.
pub fn format_real(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.00000000".into();
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("valid float");
    let mag = rounded.abs().log10().floor() as i32;
    let decimals = (8 - mag).max(0) as usize;
    format!("{rounded:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::cyclotomic_poly;
    use crate::resultant::res_cyclic;

    fn p(c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_coeffs(c)
    }

    const GOLDEN: f64 = 2.618_033_988_749_895;

    #[test]
    fn root_examples() {
        let r = complex_roots(&p(&[1, -3, 1]), 1e-12).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].re - GOLDEN).abs() < 1e-12 && r[0].im.abs() < 1e-12);
        assert!((r[1].re - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!(r.iter().all(|x| x.radius <= 1e-12));

        let r = complex_roots(&p(&[1, 0, 1]), 1e-10).unwrap();
        let mut ims: Vec<f64> = r.iter().map(|x| x.im).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-10 && (ims[1] - 1.0).abs() < 1e-10);

        let r = complex_roots(&cyclotomic_poly(6).unwrap(), 1e-10).unwrap();
        for x in &r {
            assert!((x.modulus() - 1.0).abs() < 1e-10);
            assert!((x.re - 0.5).abs() < 1e-10);
        }
        assert!(matches!(
            complex_roots(&p(&[1, 1]), 0.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            complex_roots(&p(&[1, 1]), -1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn repeated_and_clustered_roots() {
        let f = &p(&[-1, 1]).pow(3) * &p(&[2, 1]).pow(2);
        let r = complex_roots(&f, 1e-9).unwrap();
        assert_eq!(r.len(), 5);
        assert_eq!(r.iter().filter(|x| (x.re + 2.0).abs() < 1e-9).count(), 2);
        assert_eq!(r.iter().filter(|x| (x.re - 1.0).abs() < 1e-9).count(), 3);
        // Roots 1 and 1 + 1e-6 scaled: 10^6 t - (10^6 + 1).
        let f = &p(&[-1, 1]) * &p(&[-1_000_001, 1_000_000]);
        let r = complex_roots(&f, 1e-12).unwrap();
        assert!((r[0].re - 1.000001).abs() < 1e-12);
        assert!((r[1].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mahler_examples() {
        let m = mahler_measure(&p(&[1, -3, 1]), 1e-9).unwrap();
        assert!((m.value - GOLDEN).abs() <= 1e-9 + m.error);
        assert!(m.error <= 1e-9);
        let cyc = &cyclotomic_poly(6).unwrap() * &cyclotomic_poly(12).unwrap();
        assert_eq!(mahler_measure(&cyc, 1e-9).unwrap().value, 1.0);
        assert_eq!(
            mahler_measure(&LaurentPoly::zero(), 1e-9).unwrap().value,
            0.0
        );
        assert_eq!(mahler_measure(&p(&[-6, 6]), 1e-9).unwrap().value, 6.0);
    }

    #[test]
    fn lehmer_polynomial_has_unit_circle_roots() {
        let f = p(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        let m = mahler_measure(&f, 1e-9).unwrap();
        assert!((m.value - 1.176_280_818_259_917).abs() < 1e-8);
        assert!(m.near_unit_circle > 0);
    }

    #[test]
    fn growth_sample_examples() {
        let f = p(&[1, -3, 1]);
        let b = res_cyclic(&f, 100).unwrap().abs();
        let s = growth_samples(&[(100, b)]).unwrap();
        assert!((s[0].1 - GOLDEN).abs() < 1e-3);
        let ones: Vec<(u64, BigInt)> = (1..10).map(|r| (r, BigInt::one())).collect();
        assert!(growth_samples(&ones).unwrap().iter().all(|x| x.1 == 1.0));
        let six = num_traits::pow::Pow::pow(&BigInt::from(6), 199u32);
        let s = growth_samples(&[(200, six)]).unwrap();
        assert!((s[0].1 - 6.0).abs() < 1e-1);
        assert!(growth_samples(&[(3, BigInt::zero())]).is_err());
    }

    #[test]
    fn p_component_examples() {
        assert_eq!(p_component(&BigInt::from(48), 2).unwrap(), BigInt::from(16));
        assert_eq!(p_component(&BigInt::from(45), 3).unwrap(), BigInt::from(9));
        assert_eq!(p_component(&BigInt::from(5), 5).unwrap(), BigInt::from(5));
        assert!(matches!(
            p_component(&BigInt::from(5), 4),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn p_growth_examples() {
        let seq: Vec<(u64, BigInt)> = (1..=200)
            .map(|r| (r, num_traits::pow::Pow::pow(&BigInt::from(6), r - 1)))
            .collect();
        let g = p_growth(&seq, 2, &p(&[-6, 6])).unwrap();
        assert_eq!(g.target, BigInt::from(2));
        let last = g.samples.last().unwrap().1;
        assert!((last - 2f64.powf(199.0 / 200.0)).abs() < 1e-9);
        assert!((1.98..=2.0).contains(&last));

        let ones: Vec<(u64, BigInt)> = (1..5).map(|r| (r, BigInt::one())).collect();
        let g = p_growth(&ones, 3, &p(&[3, 3])).unwrap();
        assert!(g.samples.iter().all(|s| s.1 == 1.0));
        assert_eq!(g.target, BigInt::from(3));
    }

    #[test]
    fn square_probe_examples() {
        let r = square_prime_probe(&BigInt::from(49)).unwrap();
        assert_eq!(
            r,
            SquareProbe {
                is_square: true,
                sqrt_digits: Some(1),
                sqrt_probable_prime: Some(true)
            }
        );
        let r = square_prime_probe(&BigInt::from(45)).unwrap();
        assert_eq!(
            r,
            SquareProbe {
                is_square: false,
                sqrt_digits: None,
                sqrt_probable_prime: None
            }
        );
        let r = square_prime_probe(&BigInt::from(36)).unwrap();
        assert_eq!(r.sqrt_probable_prime, Some(false));
        assert!(square_prime_probe(&BigInt::zero()).is_err());
    }

    #[test]
    fn miller_rabin_known_values() {
        // 2^127 - 1 is prime; 2^128 + 1 is not.
        let m127 = (BigUint::one() << 127u32) - BigUint::one();
        assert!(is_probable_prime(&m127, 64));
        let f7 = (BigUint::one() << 128u32) + BigUint::one();
        assert!(!is_probable_prime(&f7, 64));
        // Carmichael number 561.
        assert!(!is_probable_prime(&BigUint::from(561u32), 64));
    }

    #[test]
    fn format_examples() {
        assert_eq!(format_real(GOLDEN), "2.61803399");
        assert_eq!(format_real(1.0), "1.00000000");
        assert_eq!(format_real(0.0), "0.00000000");
        assert_eq!(format_real(123456.789012), "123456.789");
        assert_eq!(format_real(0.001234567891), "0.00123456789");
    }

    #[test]
    fn ln_of_huge_integers() {
        let n = num_traits::pow::Pow::pow(&BigInt::from(10), 500u32);
        assert!((ln_bigint(&n) - 500.0 * 10f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn jensen_mean_matches_log_mahler() {
        for f in [p(&[1, -3, 1]), p(&[2, 1, 5]), p(&[-5, 0, 1, 2])] {
            let k = 1 << 16;
            let mean: f64 = (0..k)
                .map(|j| {
                    let a = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
                    let (re, im) = f.eval_complex(a.cos(), a.sin());
                    re.hypot(im).ln()
                })
                .sum::<f64>()
                / k as f64;
            let m = mahler_measure(&f, 1e-9).unwrap();
            assert!((mean - m.value.ln()).abs() < 1e-3, "{f}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn poly() -> impl Strategy<Value = LaurentPoly> {
            prop::collection::vec(-6i64..=6, 2..=5)
                .prop_map(|c| LaurentPoly::from_coeffs(&c).to_ordinary())
                .prop_filter("degree >= 1", |f| !f.is_zero() && f.span() >= 1)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn mahler_is_multiplicative(f in poly(), g in poly()) {
                let eps = 1e-8;
                let a = mahler_measure(&f, eps).unwrap();
                let b = mahler_measure(&g, eps).unwrap();
                let c = mahler_measure(&(&f * &g), eps).unwrap();
                let bound = c.error + a.error * (b.value + b.error) + b.error * (a.value + a.error) + 1e-12 * c.value;
                prop_assert!((c.value - a.value * b.value).abs() <= bound);
            }

            #[test]
            fn roots_reconstruct_degree(f in poly()) {
                let r = complex_roots(&f, 1e-10).unwrap();
                prop_assert_eq!(r.len(), f.span());
                for x in &r {
                    prop_assert!(x.radius <= 1e-10);
                }
            }

            #[test]
            fn p_component_is_multiplicative(m in 1u64..100_000, n in 1u64..100_000, pi in 0usize..5) {
                let pr = [2u64, 3, 5, 7, 11][pi];
                let (m, n) = (BigInt::from(m), BigInt::from(n));
                prop_assert_eq!(
                    p_component(&(&m * &n), pr).unwrap(),
                    p_component(&m, pr).unwrap() * p_component(&n, pr).unwrap()
                );
            }

            #[test]
            fn squares_are_detected(seed in any::<u64>()) {
                let mut rng = ChaCha20Rng::seed_from_u64(seed);
                let digits: String = (0..50).map(|i| {
                    let d = (rand::RngCore::next_u32(&mut rng) % 10) as u8;
                    char::from(b'0' + if i == 0 { d.max(1) } else { d })
                }).collect();
                let k: BigInt = digits.parse().unwrap();
                let probe = square_prime_probe(&(&k * &k)).unwrap();
                prop_assert!(probe.is_square);
                prop_assert_eq!(probe.sqrt_digits, Some(50));
            }

            #[test]
            fn samples_approach_mahler(f in poly()) {
                let roots = complex_roots(&f, 1e-9).unwrap();
                prop_assume!(roots.iter().all(|x| (x.modulus() - 1.0).abs() > 0.05));
                let b = res_cyclic(&f, 200).unwrap().abs();
                prop_assume!(!b.is_zero());
                let s = growth_samples(&[(200, b)]).unwrap()[0].1;
                let m = mahler_measure(&f, 1e-9).unwrap().value;
                prop_assert!((s - m).abs() < 1e-2 * m.max(1.0));
            }
        }
    }
}
