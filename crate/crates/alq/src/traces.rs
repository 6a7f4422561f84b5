//! Traces of Atkin-Lehner operators W_M on the full cusp space S_k(N) and
//! on the new subspace, for squarefree N. Two independent routes are kept
//! for each space: the literal triple sum and its explicated closed form
//! for S_k(N), and inclusion-exclusion versus the closed form for the new
//! space. The closed forms are the production paths; the literal routes are
//! first-class oracles.

use num_rational::Rational64;
use num_traits::Zero;

use crate::arith::{divisors, factorize, gcd, is_squarefree, kronecker, odd_part, omega};
use crate::error::{Error, Result};
use crate::quadratic::{
    field_discriminant, fundamental_decomposition, h_prime, sqrt_count, Discriminant,
};

/// A validated trace query: squarefree N > 1, M | N with M > 1, even k >= 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TraceQuery {
    n: i64,
    m: i64,
    k: i64,
}

impl TraceQuery {
    pub fn new(n: i64, m: i64, k: i64) -> Result<Self> {
        if n <= 1 || !is_squarefree(n) {
            return Err(Error::InvalidInput(format!(
                "level must be squarefree and > 1, got {n}"
            )));
        }
        if m <= 1 || n % m != 0 {
            return Err(Error::InvalidInput(format!(
                "M must divide N with M > 1, got M={m}, N={n}"
            )));
        }
        if k < 2 || k % 2 != 0 {
            return Err(Error::InvalidInput(format!(
                "weight must be even and >= 2, got {k}"
            )));
        }
        Ok(TraceQuery { n, m, k })
    }

    pub fn level(&self) -> i64 {
        self.n
    }

    pub fn modulus(&self) -> i64 {
        self.m
    }

    pub fn weight(&self) -> i64 {
        self.k
    }

    /// M' = N / M.
    pub fn cofactor(&self) -> i64 {
        self.n / self.m
    }
}

/// The argument of p_k at the surviving terms of the trace formula:
/// s / sqrt(M) with M | s and s^2 < 4M leaves only 0, +-sqrt(2), +-sqrt(3)
/// (and +-2 for the polynomial's own degenerate case).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PkArg {
    Zero,
    Sqrt2,
    NegSqrt2,
    Sqrt3,
    NegSqrt3,
    Two,
    NegTwo,
}

/// p_k(s) = (x^{k-1} - y^{k-1}) / (x - y) with x, y the roots of
/// X^2 - sX + 1, evaluated by table at the arguments that occur.
pub fn p_k_at(arg: PkArg, k: i64) -> i64 {
    assert!(k >= 2 && k % 2 == 0, "p_k_at: k must be even >= 2, got {k}");
    match arg {
        PkArg::Zero => {
            if (k / 2) % 2 == 1 {
                1
            } else {
                -1
            }
        }
        PkArg::Sqrt2 | PkArg::NegSqrt2 => match k % 8 {
            0 | 6 => -1,
            2 | 4 => 1,
            _ => unreachable!(),
        },
        PkArg::Sqrt3 | PkArg::NegSqrt3 => match k % 12 {
            0 | 8 => -1,
            2 | 6 => 1,
            4 => 2,
            10 => -2,
            _ => unreachable!(),
        },
        PkArg::Two | PkArg::NegTwo => k - 1,
    }
}

/// Reference evaluation of p_k(sqrt(s^2)) by the two-term recursion
/// u_{j+1} = s u_j - u_{j-1} carried out in Z[sqrt(s^2)]. Independent of
/// the table lookup; kept as an oracle.
pub fn p_k_recursive_oracle(s_squared: i64, k: i64) -> i64 {
    assert!(matches!(s_squared, 0 | 2 | 3 | 4));
    assert!(k >= 2 && k % 2 == 0);
    // u_j = a + b*sqrt(s_squared); u_0 = 0, u_1 = 1.
    let (mut prev, mut cur) = ((0i64, 0i64), (1i64, 0i64));
    for _ in 1..k - 1 {
        // sqrt(m) * (a + b sqrt(m)) = m b + a sqrt(m); for s = 2 use s itself.
        let next = if s_squared == 4 {
            (2 * cur.0 - prev.0, 2 * cur.1 - prev.1)
        } else {
            (s_squared * cur.1 - prev.0, cur.0 - prev.1)
        };
        prev = cur;
        cur = next;
    }
    assert_eq!(cur.1, 0, "p_k at odd index must be rational");
    cur.0
}

/// a(M, M') from the explication of the s = 0 term; depends only on
/// M mod 8 and the parity of M'.
pub fn a_coeff(m: i64, m_prime_even: bool) -> i64 {
    match (m.rem_euclid(8), m_prime_even) {
        (1 | 2 | 5 | 6, _) => 1,
        (3, false) => 4,
        (3, true) => 6,
        (7, false) => 2,
        (7, true) => 4,
        _ => unreachable!("squarefree M cannot be 0 or 4 mod 8"),
    }
}

/// b(M, M') = a(M, 1) for M' odd, -2a(M, 1) + a(M, 2) for M' even.
pub fn b_coeff(m: i64, m_prime_even: bool) -> i64 {
    if m_prime_even {
        -2 * a_coeff(m, false) + a_coeff(m, true)
    } else {
        a_coeff(m, false)
    }
}

pub(crate) fn require_integer(x: Rational64, what: &str) -> Result<i64> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(Error::Internal(format!("{what} is not integral: {x}")))
    }
}

/// Trace of W_M on the full cusp space S_k(N): the literal triple sum.
pub fn full_trace(q: &TraceQuery) -> Result<i64> {
    let (m, mp, k) = (q.modulus(), q.cofactor(), q.weight());
    // s^2 < 4M with M | s: only s = 0, plus s = +-M when M = 2 or 3.
    let mut s_values = vec![0i64];
    if m == 2 || m == 3 {
        s_values.push(m);
        s_values.push(-m);
    }
    let mut total = Rational64::zero();
    for s in s_values {
        let d = Discriminant::new(s * s - 4 * m)?;
        let fd = fundamental_decomposition(d);
        let big_f = fd.conductor;
        let pk = match (s, m) {
            (0, _) => p_k_at(PkArg::Zero, k),
            (_, 2) => p_k_at(if s > 0 { PkArg::Sqrt2 } else { PkArg::NegSqrt2 }, k),
            (_, 3) => p_k_at(if s > 0 { PkArg::Sqrt3 } else { PkArg::NegSqrt3 }, k),
            _ => unreachable!(),
        };
        for f in divisors(big_f) {
            if gcd(f as u64, m as u64) != 1 {
                continue;
            }
            let hp = h_prime(Discriminant::new(d.value() / (f * f))?);
            for t in divisors(mp) {
                let mt = mp / t;
                if (big_f / f) % mt != 0 {
                    continue;
                }
                let r = sqrt_count(d.value() / (f * f * mt * mt), t);
                total += Rational64::new(-pk, 2) * hp * Rational64::from_integer(r);
            }
        }
    }
    if k == 2 {
        total += Rational64::from_integer(1);
    }
    require_integer(total, "full trace")
}

/// Trace of W_M on S_k(N): the explicated closed form
/// (1/2)(-1)^{k/2} a(M,M') h'(D_M) r(D_M, M'_odd) plus the M = 2, 3
/// correction terms.
pub fn full_trace_explicit(q: &TraceQuery) -> Result<i64> {
    let (m, mp, k) = (q.modulus(), q.cofactor(), q.weight());
    let delta_m = field_discriminant(m)?;
    let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
    let mut total = Rational64::new(sign * a_coeff(m, mp % 2 == 0), 2)
        * h_prime(delta_m)
        * Rational64::from_integer(sqrt_count(delta_m.value(), odd_part(mp)));
    if m == 2 {
        total -= Rational64::new(p_k_at(PkArg::Sqrt2, k), 2)
            * Rational64::from_integer(sqrt_count(-4, mp));
    }
    if m == 3 {
        total -= Rational64::new(p_k_at(PkArg::Sqrt3, k), 3)
            * Rational64::from_integer(sqrt_count(-3, mp));
    }
    if k == 2 {
        total += Rational64::from_integer(1);
    }
    require_integer(total, "explicit full trace")
}

/// Trace of W_M on the new space via inclusion-exclusion over old levels:
/// sum over d | M' of (-2)^{omega(M'/d)} tr_{S_k(dM)} W_M.
pub fn new_trace_incl_excl(q: &TraceQuery) -> Result<i64> {
    let (m, mp, k) = (q.modulus(), q.cofactor(), q.weight());
    let mut total = 0i64;
    for d in divisors(mp) {
        let weight = (-2i64).pow(omega(mp / d));
        total += weight * full_trace(&TraceQuery::new(d * m, m, k)?)?;
    }
    Ok(total)
}

/// Trace of W_M on the new space: closed form. Must agree with
/// `new_trace_incl_excl` everywhere.
pub fn new_trace(q: &TraceQuery) -> Result<i64> {
    let (m, mp, k) = (q.modulus(), q.cofactor(), q.weight());
    let j = if mp % 2 == 0 { 1 } else { 0 };
    let mp_odd = odd_part(mp);
    let delta_m = field_discriminant(m)?;
    let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };

    let main_prod: i64 = factorize(mp_odd)
        .primes()
        .map(|p| kronecker(delta_m.value(), p) - 1)
        .product();
    let mut total = Rational64::new(sign * b_coeff(m, mp % 2 == 0), 2)
        * h_prime(delta_m)
        * Rational64::from_integer(main_prod);

    if k == 2 {
        total += Rational64::from_integer(if omega(mp) % 2 == 0 { 1 } else { -1 });
    }
    if m == 2 {
        let prod: i64 = factorize(mp_odd)
            .primes()
            .map(|p| kronecker(-4, p) - 1)
            .product();
        total -= Rational64::new(p_k_at(PkArg::Sqrt2, k), 2) * Rational64::from_integer(prod);
    }
    if m == 3 {
        let prod: i64 = factorize(mp_odd)
            .primes()
            .map(|p| kronecker(-3, p) - 1)
            .product();
        let coeff = if j == 0 {
            Rational64::new(1, 3)
        } else {
            Rational64::new(-2, 3)
        };
        total -= coeff * Rational64::from_integer(p_k_at(PkArg::Sqrt3, k)) * Rational64::from_integer(prod);
    }
    require_integer(total, "new-space trace")
}

/// Upper bound 2^{omega(M'_odd) + 1} h(D_M) + [k = 2] on |tr W_M| over the
/// new space.
pub fn new_trace_bound(q: &TraceQuery) -> Result<i64> {
    let delta_m = field_discriminant(q.modulus())?;
    let h = crate::quadratic::class_number(delta_m);
    let bound = (1i64 << (crate::arith::omega_odd(q.cofactor()) + 1)) * h
        + if q.weight() == 2 { 1 } else { 0 };
    Ok(bound)
}

/// Predicts whether the new-space trace of W_M vanishes, for M > 3.
///
/// For k >= 4: zero iff (D_M/p) = 1 for some odd p | M', or M' is even and
/// M = 7 mod 8. For k = 2 the prediction is the finite list of (N, M) with
/// vanishing trace on a nonzero new space; the caller pairs it with
/// positivity of dim S_2^new(N).
pub fn new_trace_zero_classifier(q: &TraceQuery) -> Result<bool> {
    let (n, m, mp, k) = (q.level(), q.modulus(), q.cofactor(), q.weight());
    if m <= 3 {
        return Err(Error::InvalidInput(format!(
            "trace-zero classifier requires M > 3, got M={m}"
        )));
    }
    if k == 2 {
        let zero = (n == m && matches!(m, 37 | 58))
            || (n == 2 * m && matches!(m, 13 | 19 | 37 | 43 | 67 | 163));
        return Ok(zero);
    }
    let delta_m = field_discriminant(m)?;
    let cond_split = factorize(odd_part(mp))
        .primes()
        .any(|p| kronecker(delta_m.value(), p) == 1);
    let cond_even = mp % 2 == 0 && m.rem_euclid(8) == 7;
    Ok(cond_split || cond_even)
}
