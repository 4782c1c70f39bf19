//! Elementary arithmetic: factorisation, multiplicative functions, modular
//! inverses and the exponential sums (Kloosterman, Ramanujan) that appear on
//! the geometric side of the trace formulas.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::rc::Rc;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("{a} is not invertible modulo {c}")]
    NotInvertible { a: i64, c: u64 },
    #[error("invalid modulus {0}")]
    InvalidModulus(u64),
}

/// Prime factorisation with primes in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn product(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// All positive divisors, unsorted.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs
    }
}

/// Result of an exponential sum evaluated in floating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpSumValue {
    pub value: f64,
    pub residual_imag: f64,
}

const TRIAL_LIMIT: u64 = 1_000_000;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd(a: u64, b: u64) -> u64 {
    gcd_u64(a, b)
}

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_large(d, out);
    split_large(n / d, out);
}

/// Factorises `n` by trial division up to 10^6, then Pollard rho.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut m = n;
    let mut factors = Vec::new();
    let mut push = |p: u64, m: &mut u64| {
        let mut e = 0;
        while (*m).is_multiple_of(p) {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut m);
    let mut p = 3u64;
    while p <= TRIAL_LIMIT && p * p <= m {
        push(p, &mut m);
        p += 2;
    }
    if m > 1 {
        if p * p > m || is_prime(m) {
            factors.push((m, 1));
        } else {
            let mut ps = Vec::new();
            split_large(m, &mut ps);
            ps.sort_unstable();
            for q in ps {
                match factors.last_mut() {
                    Some((last, e)) if *last == q => *e += 1,
                    _ => factors.push((q, 1)),
                }
            }
        }
    }
    factors.sort_unstable();
    Factorization { n, factors }
}

pub fn mobius(n: u64) -> i8 {
    let f = factorize(n);
    if !f.is_squarefree() {
        return 0;
    }
    if f.factors.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn euler_phi(n: u64) -> u64 {
    let f = factorize(n);
    f.factors
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

/// Number of positive divisors.
pub fn divisor_tau(n: u64) -> u64 {
    factorize(n)
        .factors
        .iter()
        .map(|&(_, e)| e as u64 + 1)
        .product()
}

/// Sum of divisors.
pub fn divisor_sigma(n: u64) -> u64 {
    factorize(n)
        .factors
        .iter()
        .map(|&(p, e)| (p.pow(e + 1) - 1) / (p - 1))
        .product()
}

/// Sieve of Eratosthenes up to and including `limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn reduce_mod(a: i64, c: u64) -> u64 {
    a.rem_euclid(c as i64) as u64
}

/// Inverse of `a` modulo `c`, in `[0, c)`.
pub fn mod_inverse(a: i64, c: u64) -> Result<u64, ArithError> {
    if c == 0 {
        return Err(ArithError::InvalidModulus(c));
    }
    if c == 1 {
        return Ok(0);
    }
    let (mut r0, mut r1) = (c as i128, reduce_mod(a, c) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return Err(ArithError::NotInvertible { a, c });
    }
    Ok(s0.rem_euclid(c as i128) as u64)
}

/// Units modulo c paired with their inverses, plus the c-th roots of unity.
struct ModTable {
    units: Vec<(u64, u64)>,
    roots: Vec<Complex64>,
}

impl ModTable {
    fn new(c: u64) -> Self {
        let roots = (0..c)
            .map(|j| {
                let theta = 2.0 * PI * j as f64 / c as f64;
                Complex64::new(theta.cos(), theta.sin())
            })
            .collect();
        let units = (0..c)
            .filter_map(|a| mod_inverse(a as i64, c).ok().map(|ai| (a, ai)))
            .filter(|&(a, _)| c == 1 || gcd_u64(a, c) == 1)
            .collect();
        ModTable { units, roots }
    }
}

const TABLE_CACHE_MAX_MODULUS: u64 = 200_000;
const TABLE_CACHE_MAX_ENTRIES: usize = 8192;

thread_local! {
    static TABLES: RefCell<HashMap<u64, Rc<ModTable>>> = RefCell::new(HashMap::new());
}

fn mod_table(c: u64) -> Rc<ModTable> {
    if c > TABLE_CACHE_MAX_MODULUS {
        return Rc::new(ModTable::new(c));
    }
    TABLES.with(|t| {
        let mut t = t.borrow_mut();
        if let Some(tab) = t.get(&c) {
            return tab.clone();
        }
        if t.len() >= TABLE_CACHE_MAX_ENTRIES {
            t.clear();
        }
        let tab = Rc::new(ModTable::new(c));
        t.insert(c, tab.clone());
        tab
    })
}

fn kloosterman_sum_raw(m: i64, n: i64, c: u64) -> Complex64 {
    let tab = mod_table(c);
    let mr = reduce_mod(m, c);
    let nr = reduce_mod(n, c);
    let mut acc = Complex64::new(0.0, 0.0);
    for &(a, ai) in &tab.units {
        let idx = ((nr as u128 * a as u128 + mr as u128 * ai as u128) % c as u128) as usize;
        acc += tab.roots[idx];
    }
    acc
}

/// Kloosterman sum S(m,n;c) = sum over units a mod c of e((n a + m a^{-1})/c),
/// summed term by term.
pub fn kloosterman_direct(m: i64, n: i64, c: u64) -> Result<ExpSumValue, ArithError> {
    if c == 0 {
        return Err(ArithError::InvalidModulus(c));
    }
    let s = kloosterman_sum_raw(m, n, c);
    Ok(ExpSumValue {
        value: s.re,
        residual_imag: s.im.abs(),
    })
}

/// Kloosterman sum via twisted multiplicativity over the prime-power
/// factorisation of c: S(m,n;c1 c2) = S(m c2bar^2, n; c1) S(m c1bar^2, n; c2).
pub fn kloosterman(m: i64, n: i64, c: u64) -> Result<ExpSumValue, ArithError> {
    if c == 0 {
        return Err(ArithError::InvalidModulus(c));
    }
    let fac = factorize(c);
    kloosterman_factored(m, n, &fac)
}

/// As [`kloosterman`] with the factorisation of c supplied.
pub fn kloosterman_factored(
    m: i64,
    n: i64,
    fac: &Factorization,
) -> Result<ExpSumValue, ArithError> {
    let c = fac.n;
    if fac.factors.len() <= 1 {
        return kloosterman_direct(m, n, c);
    }
    let mut acc = Complex64::new(1.0, 0.0);
    for &(p, e) in &fac.factors {
        let q = p.pow(e);
        let rest = c / q;
        let rest_inv = mod_inverse(rest as i64, q)?;
        let twist = mul_mod(rest_inv, rest_inv, q);
        let m_twisted = mul_mod(reduce_mod(m, q), twist, q) as i64;
        acc *= kloosterman_sum_raw(m_twisted, reduce_mod(n, q) as i64, q);
    }
    let (value, residual) = (acc.re, acc.im.abs());
    Ok(ExpSumValue {
        value,
        residual_imag: residual,
    })
}

/// Units and roots of unity for one modulus, for evaluating many
/// Kloosterman sums S(m, n; c) with the same c.
pub struct KloostermanTable {
    c: u64,
    table: Rc<ModTable>,
}

impl KloostermanTable {
    pub fn new(c: u64) -> Self {
        assert!(c >= 1, "modulus must be positive");
        KloostermanTable {
            c,
            table: mod_table(c),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.c
    }

    pub fn phi(&self) -> usize {
        self.table.units.len()
    }

    /// S(m, n; c) as a complex number (imaginary part is rounding noise).
    pub fn sum(&self, m: i64, n: i64) -> Complex64 {
        let c = self.c;
        let mr = reduce_mod(m, c);
        let nr = reduce_mod(n, c);
        let mut acc = Complex64::new(0.0, 0.0);
        if c < (1 << 31) {
            for &(a, ai) in &self.table.units {
                acc += self.table.roots[((nr * a + mr * ai) % c) as usize];
            }
        } else {
            for &(a, ai) in &self.table.units {
                acc += self.table.roots
                    [((nr as u128 * a as u128 + mr as u128 * ai as u128) % c as u128) as usize];
            }
        }
        acc
    }
}

/// Ramanujan sum S(0,k;d) = sum over c | (d,k) of c mu(d/c).
pub fn ramanujan(k: i64, d: u64) -> i64 {
    assert!(d >= 1, "ramanujan requires d >= 1");
    let g = gcd_u64(k.unsigned_abs(), d);
    factorize(g)
        .divisors()
        .into_iter()
        .map(|c| c as i64 * mobius(d / c) as i64)
        .sum()
}

/// Bound tau(c) sqrt(c gcd(m,n,c)) on |S(m,n;c)|.
pub fn weil_bound(m: i64, n: i64, c: u64) -> f64 {
    let g = gcd_u64(gcd_u64(m.unsigned_abs(), n.unsigned_abs()), c);
    let g = if g == 0 { c } else { g };
    divisor_tau(c) as f64 * ((c * g) as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorizations() {
        assert_eq!(factorize(1).factors, vec![]);
        assert_eq!(factorize(360).factors, vec![(2, 3), (3, 2), (5, 1)]);
        let big = 1_000_003u64 * 1_000_033;
        assert_eq!(factorize(big).factors, vec![(1_000_003, 1), (1_000_033, 1)]);
    }

    #[test]
    fn inverse_failure() {
        assert_eq!(
            mod_inverse(4, 10),
            Err(ArithError::NotInvertible { a: 4, c: 10 })
        );
        assert_eq!(mod_inverse(3, 10), Ok(7));
    }

    #[test]
    fn ramanujan_with_zero_shift_is_phi() {
        assert_eq!(ramanujan(0, 12), euler_phi(12) as i64);
    }
}
