use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::TraceError;
use crate::arith::{gcd, kloosterman_direct, mod_inverse};
use crate::quad::SmoothWindow;
use crate::specialfn::Sign;

pub type SieveSign = Sign;

/// Distribution of the random coefficients a(v), b(h,d).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientLaw {
    /// Independent uniform signs.
    Rademacher,
    /// Independent standard complex Gaussians.
    Gaussian,
}

/// Data of one large-sieve experiment: v in [V,2V], h in [H,2H], q in [Q,2Q],
/// d in [D,2D], weights u = u_V(v) u_H(h) u_Q(q) u_D(d) built from bumps with
/// derivative scale Z.
#[derive(Debug, Clone)]
pub struct SieveInstance {
    pub r: u64,
    pub s: u64,
    pub w: u64,
    pub v: u64,
    pub h: u64,
    pub q: u64,
    pub d: u64,
    pub z: f64,
    /// a[v - V]
    pub a: Vec<Complex64>,
    /// b[h - H][d - D]
    pub b: Vec<Vec<Complex64>>,
    pub seed: Option<u64>,
}

impl SieveInstance {
    pub fn validate(&self) -> Result<(), TraceError> {
        let bad = |m: String| Err(TraceError::InvalidInstance(m));
        if [self.r, self.s, self.w, self.v, self.h, self.q, self.d].contains(&0) {
            return bad("all parameters must be positive".into());
        }
        if gcd(self.r, self.s) != 1 {
            return bad(format!("(r, s) = ({}, {}) is not 1", self.r, self.s));
        }
        if gcd(self.w, self.r * self.s) != 1 {
            return bad(format!(
                "(w, rs) = ({}, {}) is not 1",
                self.w,
                self.r * self.s
            ));
        }
        if !(self.z >= 1.0) {
            return bad(format!("Z = {} must be at least 1", self.z));
        }
        if self.a.len() as u64 != self.v + 1 {
            return bad(format!(
                "a has {} entries, expected {}",
                self.a.len(),
                self.v + 1
            ));
        }
        if self.b.len() as u64 != self.h + 1
            || self.b.iter().any(|row| row.len() as u64 != self.d + 1)
        {
            return bad("b must be (H+1) x (D+1)".into());
        }
        Ok(())
    }

    fn weight(&self, base: u64) -> SmoothWindow {
        SmoothWindow::bump_with_scale(base as f64, 2.0 * base as f64, self.z)
    }

    /// u_V(v) u_H(h) u_Q(q) u_D(d).
    pub fn u(&self, v: u64, h: u64, q: u64, d: u64) -> f64 {
        self.weight(self.v).eval(v as f64)
            * self.weight(self.h).eval(h as f64)
            * self.weight(self.q).eval(q as f64)
            * self.weight(self.d).eval(d as f64)
    }

    pub fn a_norm(&self) -> f64 {
        self.a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ||B||_2 with B(h) = sum_d |b(h,d)|.
    pub fn b_norm(&self) -> f64 {
        self.b
            .iter()
            .map(|row| row.iter().map(|x| x.norm()).sum::<f64>().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Xi = sqrt(V H w) / (s sqrt(r) Q).
    pub fn xi(&self) -> f64 {
        ((self.v * self.h * self.w) as f64).sqrt()
            / (self.s as f64 * (self.r as f64).sqrt() * self.q as f64)
    }

    /// The same instance with a and b conjugated.
    pub fn conjugate(&self) -> Self {
        let mut c = self.clone();
        c.a.iter_mut().for_each(|x| *x = x.conj());
        c.b.iter_mut().flatten().for_each(|x| *x = x.conj());
        c
    }
}

fn sign_value(sign: Sign) -> i64 {
    match sign {
        Sign::Plus => 1,
        Sign::Minus => -1,
    }
}

/// S_+- = sum_{q, (q,r)=1} sum_d sum_h sum_v (1/q) S(v rbar, +-h w; s q) a(v) b(h,d) u(v,h,q,d).
///
/// Opening S and exchanging sums gives, for each q, sum over units x mod sq of
/// A(rbar xbar) B(+-w x) with A, B the finite Fourier sums of the weighted a and b.
pub fn large_sieve_lhs(inst: &SieveInstance, sign: Sign) -> Result<Complex64, TraceError> {
    inst.validate()?;
    let sg = sign_value(sign);
    let (uv, uh, uq, ud) = (
        inst.weight(inst.v),
        inst.weight(inst.h),
        inst.weight(inst.q),
        inst.weight(inst.d),
    );
    let av: Vec<(u64, Complex64)> = (inst.v..=2 * inst.v)
        .map(|v| (v, inst.a[(v - inst.v) as usize] * uv.eval(v as f64)))
        .filter(|(_, x)| *x != Complex64::new(0.0, 0.0))
        .collect();
    let bh: Vec<(u64, Complex64)> = (inst.h..=2 * inst.h)
        .map(|h| {
            let row = &inst.b[(h - inst.h) as usize];
            let s: Complex64 = (inst.d..=2 * inst.d)
                .map(|d| row[(d - inst.d) as usize] * ud.eval(d as f64))
                .sum();
            (h, s * uh.eval(h as f64))
        })
        .filter(|(_, x)| *x != Complex64::new(0.0, 0.0))
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for q in inst.q..=2 * inst.q {
        let wq = uq.eval(q as f64);
        if wq == 0.0 || gcd(q, inst.r) != 1 {
            continue;
        }
        let c = inst.s * q;
        let r_bar = mod_inverse(inst.r as i64, c)?;
        let roots: Vec<Complex64> = (0..c)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / c as f64))
            .collect();
        let mut afold = vec![Complex64::new(0.0, 0.0); c as usize];
        for &(v, x) in &av {
            afold[(v % c) as usize] += x;
        }
        let mut bfold = vec![Complex64::new(0.0, 0.0); c as usize];
        let wc = (inst.w % c) as i64;
        for &(h, x) in &bh {
            let idx = (sg * wc * (h % c) as i64).rem_euclid(c as i64);
            bfold[idx as usize] += x;
        }
        let a_nz: Vec<(u64, Complex64)> = afold
            .iter()
            .enumerate()
            .filter(|(_, x)| x.norm() != 0.0)
            .map(|(j, x)| (j as u64, *x))
            .collect();
        let b_nz: Vec<(u64, Complex64)> = bfold
            .iter()
            .enumerate()
            .filter(|(_, x)| x.norm() != 0.0)
            .map(|(j, x)| (j as u64, *x))
            .collect();
        let mut inner = Complex64::new(0.0, 0.0);
        for x in 1..c.max(2) {
            let x = x % c;
            if gcd(x, c) != 1 {
                continue;
            }
            let y = r_bar * mod_inverse(x as i64, c)? % c;
            let ahat: Complex64 = a_nz
                .iter()
                .map(|&(j, val)| val * roots[(j * y % c) as usize])
                .sum();
            let bhat: Complex64 = b_nz
                .iter()
                .map(|&(j, val)| val * roots[(j * x % c) as usize])
                .sum();
            inner += ahat * bhat;
        }
        if c == 1 {
            // the single unit mod 1 contributes A(0) B(0)
            inner = a_nz.iter().map(|p| p.1).sum::<Complex64>()
                * b_nz.iter().map(|p| p.1).sum::<Complex64>();
        }
        total += inner * (wq / q as f64);
    }
    Ok(total)
}

/// The defining quadruple sum term by term, with each Kloosterman sum computed directly.
pub fn large_sieve_lhs_direct(inst: &SieveInstance, sign: Sign) -> Result<Complex64, TraceError> {
    inst.validate()?;
    let sg = sign_value(sign);
    let table = |base: u64| -> Vec<f64> {
        let wnd = inst.weight(base);
        (base..=2 * base).map(|x| wnd.eval(x as f64)).collect()
    };
    let (tv, th, tq, td) = (table(inst.v), table(inst.h), table(inst.q), table(inst.d));
    let mut total = Complex64::new(0.0, 0.0);
    for q in inst.q..=2 * inst.q {
        if gcd(q, inst.r) != 1 {
            continue;
        }
        let c = inst.s * q;
        let r_bar = mod_inverse(inst.r as i64, c)? as i64;
        for d in inst.d..=2 * inst.d {
            for h in inst.h..=2 * inst.h {
                for v in inst.v..=2 * inst.v {
                    let u = tv[(v - inst.v) as usize]
                        * th[(h - inst.h) as usize]
                        * tq[(q - inst.q) as usize]
                        * td[(d - inst.d) as usize];
                    if u == 0.0 {
                        continue;
                    }
                    let k = kloosterman_direct(v as i64 * r_bar, sg * (h * inst.w) as i64, c)?;
                    total += inst.a[(v - inst.v) as usize]
                        * inst.b[(h - inst.h) as usize][(d - inst.d) as usize]
                        * (k.value * u / q as f64);
                }
            }
        }
    }
    Ok(total)
}

/// s sqrt(r) ((1 + (Xi/Z)^(-2 theta)) / (Z + Xi)) (Z + Xi + sqrt(V/rs)) (Z + Xi + sqrt(H/rs))
/// w^theta ||a||_2 ||B||_2 (1 + Z^8), the epsilon-power set to 1.
pub fn large_sieve_bound(inst: &SieveInstance, theta: f64) -> f64 {
    assert!((0.0..=0.5).contains(&theta), "theta must lie in [0, 1/2]");
    let z = inst.z;
    let xi = inst.xi();
    let rs = (inst.r * inst.s) as f64;
    inst.s as f64
        * (inst.r as f64).sqrt()
        * ((1.0 + (xi / z).powf(-2.0 * theta)) / (z + xi))
        * (z + xi + (inst.v as f64 / rs).sqrt())
        * (z + xi + (inst.h as f64 / rs).sqrt())
        * (inst.w as f64).powf(theta)
        * inst.a_norm()
        * inst.b_norm()
        * (1.0 + z.powi(8))
}

fn draw(rng: &mut ChaCha8Rng, law: CoefficientLaw) -> Complex64 {
    match law {
        CoefficientLaw::Rademacher => {
            Complex64::new(if rng.gen::<bool>() { 1.0 } else { -1.0 }, 0.0)
        }
        CoefficientLaw::Gaussian => {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        }
    }
}

/// A random instance with r, s, w <= 10 satisfying the coprimality conditions,
/// V, H in [2, 200], D in [2, 6], fully determined by `seed`.
pub fn random_instance(seed: u64, q: u64, z: f64, law: CoefficientLaw) -> SieveInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (r, s) = loop {
        let r = rng.gen_range(1..=10u64);
        let s = rng.gen_range(1..=10u64);
        if gcd(r, s) == 1 {
            break (r, s);
        }
    };
    let w = loop {
        let w = rng.gen_range(1..=10u64);
        if gcd(w, r * s) == 1 {
            break w;
        }
    };
    let v = rng.gen_range(2..=200u64);
    let h = rng.gen_range(2..=200u64);
    let d = rng.gen_range(2..=6u64);
    let a = (0..=v).map(|_| draw(&mut rng, law)).collect();
    let b = (0..=h)
        .map(|_| (0..=d).map(|_| draw(&mut rng, law)).collect())
        .collect();
    SieveInstance {
        r,
        s,
        w,
        v,
        h,
        q,
        d,
        z,
        a,
        b,
        seed: Some(seed),
    }
}
