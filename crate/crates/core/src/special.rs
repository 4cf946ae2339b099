//! Bessel functions of the first kind, integer order.
//!
//! Three regimes are stitched together:
//!
//! * `x <= 1`: direct power series (no cancellation at small argument);
//! * `x >= 25` and `n + 1 < x`: Hankel asymptotic expansion for `J_0`, `J_1`
//!   followed by upward recurrence, which is stable while the order stays
//!   below the argument;
//! * everything else: Miller's backward recurrence normalized with
//!   `J_0 + 2 Σ J_2k = 1`.

use core::f64::consts::PI;

const SERIES_MAX: f64 = 1.0;
const ASYMPTOTIC_MIN: f64 = 25.0;
const RESCALE_ABOVE: f64 = 1e200;
const RESCALE_BY: f64 = 1e-200;

/// `J_n(x)`.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    bessel_j_triple(n, x)[1]
}

/// `(J_n(x), J_n'(x))`.
pub fn bessel_j_and_derivative(n: u32, x: f64) -> (f64, f64) {
    let [below, at, above] = bessel_j_triple(n, x);
    (at, 0.5 * (below - above))
}

/// `[J_{n-1}(x), J_n(x), J_{n+1}(x)]`, with `J_{-1} = -J_1`.
pub fn bessel_j_triple(n: u32, x: f64) -> [f64; 3] {
    if x < 0.0 {
        // J_m(-x) = (-1)^m J_m(x)
        let [a, b, c] = bessel_j_triple(n, -x);
        return if n % 2 == 0 { [-a, b, -c] } else { [a, -b, c] };
    }
    let mut out = if x == 0.0 {
        [if n == 1 { 1.0 } else { 0.0 }, if n == 0 { 1.0 } else { 0.0 }, 0.0]
    } else if x <= SERIES_MAX {
        let lower = if n == 0 { series(1, x) } else { series(n - 1, x) };
        [lower, series(n, x), series(n + 1, x)]
    } else if x >= ASYMPTOTIC_MIN && f64::from(n + 1) < x {
        upward_from_asymptotic(n, x)
    } else {
        miller(n, x)
    };
    if n == 0 {
        out[0] = -out[2];
    }
    out
}

fn series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / f64::from(k);
    }
    let q = -half * half;
    let mut sum = term;
    let mut m = 1.0;
    loop {
        term *= q / (m * (m + f64::from(n)));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() || term == 0.0 {
            break;
        }
        m += 1.0;
    }
    sum
}

/// Hankel expansion of `J_ν` for ν ∈ {0, 1}.
fn hankel(nu: u32, x: f64) -> f64 {
    let mu = 4.0 * f64::from(nu * nu);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut k = 1u32;
    loop {
        let odd = f64::from(2 * k - 1);
        let next = term * (mu - odd * odd) / (f64::from(k) * 8.0 * x);
        if next.abs() > term.abs() || next.abs() < 1e-17 {
            break;
        }
        term = next;
        // k = 1 → Q, k = 2 → P, signs alternate every two orders.
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 1 {
            q += sign * term;
        } else {
            p += sign * term;
        }
        k += 1;
    }
    let shift = (0.5 * f64::from(nu) + 0.25) * PI;
    let (sx, cx) = x.sin_cos();
    let (ss, cs) = shift.sin_cos();
    let cos_chi = cx * cs + sx * ss;
    let sin_chi = sx * cs - cx * ss;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

fn upward_from_asymptotic(n: u32, x: f64) -> [f64; 3] {
    let j0 = hankel(0, x);
    let j1 = hankel(1, x);
    // values[m] = J_m for m up to n + 1
    let mut prev = j0;
    let mut cur = j1;
    let mut out = [0.0; 3];
    let record = |m: u32, v: f64, out: &mut [f64; 3]| {
        if m + 1 >= n && m <= n + 1 {
            out[(m + 1 - n) as usize] = v;
        }
    };
    record(0, j0, &mut out);
    record(1, j1, &mut out);
    for m in 1..=n {
        let next = 2.0 * f64::from(m) / x * cur - prev;
        prev = cur;
        cur = next;
        record(m + 1, cur, &mut out);
    }
    out
}

fn miller(n: u32, x: f64) -> [f64; 3] {
    let top = f64::from(n + 1).max(x.ceil());
    let mut start = (top + 20.0 + (160.0 * top).sqrt()) as u32;
    start += start % 2;

    let mut out = [0.0; 3];
    let mut above = 0.0;
    let mut cur = 1e-30;
    let mut norm = 0.0;
    let mut m = start;
    loop {
        if m + 1 >= n && m <= n + 1 {
            out[(m + 1 - n) as usize] = cur;
        }
        if m % 2 == 0 {
            norm += if m == 0 { cur } else { 2.0 * cur };
        }
        if m == 0 {
            break;
        }
        let below = 2.0 * f64::from(m) / x * cur - above;
        above = cur;
        cur = below;
        m -= 1;
        if cur.abs() > RESCALE_ABOVE {
            cur *= RESCALE_BY;
            above *= RESCALE_BY;
            norm *= RESCALE_BY;
            for v in out.iter_mut() {
                *v *= RESCALE_BY;
            }
        }
    }
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}
