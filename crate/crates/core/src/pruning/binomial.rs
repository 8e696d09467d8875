//! Binomial mass and upper tail that stay accurate for very large trial
//! counts.
//!
//! The mass uses Loader's saddle-point form (Stirling remainders plus the
//! deviance term `bd0`), so it never forms `ln Γ` of huge arguments. The
//! tail is the regularized incomplete beta `I_p(w, n - w + 1)` evaluated by
//! a modified Lentz continued fraction whose prefactor is that mass.

use std::f64::consts::PI;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const CF_EPS: f64 = 1e-16;
const CF_TINY: f64 = 1e-300;
const CF_MAX_ITER: usize = 50_000_000;
/// Tails with at most this many terms are summed directly.
const DIRECT_TERMS: u64 = 64;

/// Error of Stirling's approximation: `ln n! - (n + 1/2) ln n + n - ln sqrt(2 pi)`.
fn stirlerr(n: f64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n <= 15.0 {
        // n is integral here; 15! is exact in f64
        let fact: f64 = (2..=n as u64).map(|k| k as f64).product();
        return fact.ln() - (n + 0.5) * n.ln() + n - LN_SQRT_2PI;
    }
    let nn = n * n;
    if n > 500.0 {
        (S0 - S1 / nn) / n
    } else if n > 80.0 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if n > 35.0 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

/// Deviance term `x ln(x / np) + np - x`, stable when `x ≈ np`.
fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let mut v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / np).ln() + np - x
    }
}

/// `ln Pr(X = m)` for `X ~ Binomial(n, p)`.
pub fn ln_binomial_pmf(m: u64, n: u64, p: f64) -> f64 {
    if m > n {
        return f64::NEG_INFINITY;
    }
    let q = 1.0 - p;
    if p == 0.0 {
        return if m == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if q == 0.0 {
        return if m == n { 0.0 } else { f64::NEG_INFINITY };
    }
    let (x, nf) = (m as f64, n as f64);
    if m == 0 {
        return nf * (-p).ln_1p();
    }
    if m == n {
        return nf * p.ln();
    }
    let lc = stirlerr(nf) - stirlerr(x) - stirlerr(nf - x) - bd0(x, nf * p) - bd0(nf - x, nf * q);
    let lf = (2.0 * PI).ln() + x.ln() + (-x / nf).ln_1p();
    lc - 0.5 * lf
}

/// `Pr(X = m)` for `X ~ Binomial(n, p)`.
pub fn binomial_pmf(m: u64, n: u64, p: f64) -> f64 {
    ln_binomial_pmf(m, n, p).exp()
}

/// Continued fraction of the regularized incomplete beta (modified Lentz).
fn beta_cf(a: f64, b: f64, x: f64) -> Option<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let guard = |v: f64| if v.abs() < CF_TINY { CF_TINY } else { v };
    let mut c = 1.0;
    let mut d = 1.0 / guard(1.0 - qab * x / qap);
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / guard(1.0 + aa * d);
        c = guard(1.0 + aa / c);
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / guard(1.0 + aa * d);
        c = guard(1.0 + aa / c);
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            return Some(h);
        }
    }
    None
}

/// Upper tail `Pr(X >= w)` for `X ~ Binomial(n, p)`.
///
/// Returns `None` only if the continued fraction fails to converge.
pub fn binomial_sf(w: u64, n: u64, p: f64) -> Option<f64> {
    if w == 0 {
        return Some(1.0);
    }
    if w > n || p <= 0.0 {
        return Some(0.0);
    }
    if p >= 1.0 {
        return Some(1.0);
    }
    if n - w < DIRECT_TERMS {
        // smallest terms first
        return Some((w..=n).rev().map(|m| binomial_pmf(m, n, p)).sum::<f64>().min(1.0));
    }
    let (nf, wf) = (n as f64, w as f64);
    if p < (wf + 1.0) / (nf + 3.0) {
        let front = binomial_pmf(w, n, p) * (1.0 - p);
        if front == 0.0 {
            return Some(0.0);
        }
        beta_cf(wf, nf - wf + 1.0, p).map(|cf| (front * cf).clamp(0.0, 1.0))
    } else {
        if w <= DIRECT_TERMS {
            let lower: f64 = (0..w).map(|m| binomial_pmf(m, n, p)).sum();
            return Some((1.0 - lower).clamp(0.0, 1.0));
        }
        let front = binomial_pmf(w - 1, n, p) * p;
        if front == 0.0 {
            return Some(1.0);
        }
        beta_cf(nf - wf + 1.0, wf, 1.0 - p).map(|cf| (1.0 - front * cf).clamp(0.0, 1.0))
    }
}
