//! Multi-precision ascending-series evaluation of J, Y, I, K.
//!
//! Fixed-point arithmetic on `BigInt` with a working precision chosen from
//! the argument so that the cancellation in the alternating series (and in
//! K = I-difference forms) still leaves well over 50 significant digits.
//! Shares no code with the production kernel: π comes from Machin's formula,
//! γ from the Brent–McMillan algorithm, logarithms from atanh series.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Copy)]
pub enum Kind {
    J,
    Y,
    I,
    K,
}

struct Fx {
    bits: u64,
}

impl Fx {
    fn one(&self) -> BigInt {
        BigInt::one() << self.bits
    }
    fn int(&self, n: i64) -> BigInt {
        BigInt::from(n) << self.bits
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b) >> self.bits
    }
    fn div(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a << self.bits) / b
    }
    fn from_f64(&self, x: f64) -> BigInt {
        assert!(x.is_finite());
        if x == 0.0 {
            return BigInt::zero();
        }
        let bits = x.abs().to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
        let m = BigInt::from(mant);
        let shift = e + self.bits as i64;
        let v = if shift >= 0 { m << shift as u64 } else { m >> (-shift) as u64 };
        if x < 0.0 {
            -v
        } else {
            v
        }
    }
    fn to_f64(&self, v: &BigInt) -> f64 {
        let neg = v.sign() == Sign::Minus;
        let a = v.abs();
        let nb = a.bits();
        if nb == 0 {
            return 0.0;
        }
        let (top, shift) = if nb > 64 { (&a >> (nb - 64), (nb - 64) as i64) } else { (a.clone(), 0) };
        let f = top.to_u64().unwrap() as f64 * 2f64.powi((shift - self.bits as i64) as i32);
        if neg {
            -f
        } else {
            f
        }
    }
    fn sqrt(&self, a: &BigInt) -> BigInt {
        (a << self.bits).sqrt()
    }
    /// atanh(1/n) for integer n ≥ 2
    fn atanh_inv(&self, n: i64) -> BigInt {
        let n2 = BigInt::from(n * n);
        let mut term = self.one() / n;
        let mut sum = BigInt::zero();
        let mut k = 1i64;
        while !term.is_zero() {
            sum += &term / k;
            term /= &n2;
            k += 2;
        }
        sum
    }
    /// atanh(t) for fixed-point |t| ≤ 1/3
    fn atanh(&self, t: &BigInt) -> BigInt {
        let t2 = self.mul(t, t);
        let mut term = t.clone();
        let mut sum = BigInt::zero();
        let mut k = 1i64;
        while !term.is_zero() {
            sum += &term / k;
            term = self.mul(&term, &t2);
            k += 2;
        }
        sum
    }
    fn ln2(&self) -> BigInt {
        self.atanh_inv(3) * 2
    }
    fn ln(&self, x: &BigInt) -> BigInt {
        assert!(x.sign() == Sign::Plus);
        // x = m · 2^e with m ∈ [1, 2)
        let e = x.bits() as i64 - 1 - self.bits as i64;
        let m = if e >= 0 { x >> e as u64 } else { x << (-e) as u64 };
        let one = self.one();
        let t = self.div(&(&m - &one), &(&m + &one));
        self.atanh(&t) * 2 + self.ln2() * e
    }
    fn pi(&self) -> BigInt {
        // Machin: π/4 = 4 atan(1/5) − atan(1/239)
        let atan_inv = |n: i64| {
            let n2 = BigInt::from(n * n);
            let mut term = self.one() / n;
            let mut sum = BigInt::zero();
            let mut k = 1i64;
            let mut sign = 1;
            while !term.is_zero() {
                if sign > 0 {
                    sum += &term / k
                } else {
                    sum -= &term / k
                }
                term /= &n2;
                k += 2;
                sign = -sign;
            }
            sum
        };
        (atan_inv(5) * 4 - atan_inv(239)) * 4
    }
    fn euler_gamma(&self) -> BigInt {
        // Brent–McMillan: γ ≈ U/V − ln n, error O(e^{−4n})
        let n = (self.bits as f64 * std::f64::consts::LN_2 / 4.0).ceil() as i64 + 2;
        let n2 = BigInt::from(n * n);
        let mut a = -self.ln(&self.int(n));
        let mut b = self.one();
        let mut u = a.clone();
        let mut v = b.clone();
        let mut k = 1i64;
        loop {
            let kk = BigInt::from(k * k);
            b = &b * &n2 / &kk;
            a = (&a * &n2 / k + &b) / k;
            if b.is_zero() && a.is_zero() {
                break;
            }
            u += &a;
            v += &b;
            k += 1;
        }
        self.div(&u, &v)
    }
}

fn working_bits(x: f64, twice_nu: i32) -> u64 {
    let nu = twice_nu.abs() as f64 / 2.0;
    let small = if x < 1.0 { (nu + 2.0) * (2.0 / x).log2() * 2.0 } else { 0.0 };
    (300.0 + 3.0 * x + small).ceil() as u64
}

/// Σ_k s^k (x/2)^{2k+ν} / (k! Γ(ν+k+1)), s = ∓1, for ν = twice/2 not a negative integer.
fn power_series(fx: &Fx, twice: i32, x: &BigInt, alternating: bool, pi: &BigInt) -> BigInt {
    let half_x = x >> 1u32;
    let q = fx.mul(&half_x, &half_x);
    // prefactor (x/2)^ν / Γ(ν+1)
    let mut pre = fx.one();
    let whole = twice.div_euclid(2);
    for _ in 0..whole.abs() {
        pre = if whole > 0 { fx.mul(&pre, &half_x) } else { fx.div(&pre, &half_x) };
    }
    let mut gamma = fx.one(); // Γ(ν+1)
    if twice % 2 != 0 {
        pre = fx.mul(&pre, &fx.sqrt(&half_x));
        // Γ(1/2) = √π, walk to ν + 1
        gamma = fx.sqrt(pi);
        let mut m = 1; // current argument ×2
        let target = twice + 2;
        while m < target {
            gamma = gamma * m / 2;
            m += 2;
        }
        while m > target {
            m -= 2;
            gamma = gamma * 2 / m;
        }
    } else {
        for i in 1..=(twice / 2) {
            gamma *= i;
        }
    }
    let mut term = fx.div(&pre, &gamma);
    let mut sum = BigInt::zero();
    let mut k: i64 = 0;
    loop {
        sum += &term;
        k += 1;
        // t_k / t_{k−1} = ± q / (k (ν + k)), ν + k = (twice + 2k)/2
        let den = k * (twice as i64 + 2 * k);
        term = fx.mul(&term, &q) * 2 / den;
        if alternating {
            term = -term;
        }
        if term.is_zero() {
            break;
        }
    }
    sum
}

/// Integer-order Y_n or K_n from the logarithmic series.
fn log_series(fx: &Fx, n: i64, x: &BigInt, modified: bool, pi: &BigInt, gamma: &BigInt) -> BigInt {
    let half_x = x >> 1u32;
    let q = fx.mul(&half_x, &half_x);
    let ln_half = fx.ln(&half_x);
    let mut hx_n = fx.one();
    for _ in 0..n {
        hx_n = fx.mul(&hx_n, &half_x);
    }
    // finite sum Σ_{k<n} (n−k−1)!/k! (∓q)^k (x/2)^{−n}
    let mut finite = BigInt::zero();
    {
        let mut qk = fx.one();
        let mut kfact = BigInt::one();
        for k in 0..n {
            if k > 0 {
                kfact *= k;
                qk = fx.mul(&qk, &q);
            }
            let mut c = BigInt::one();
            for i in 1..(n - k) {
                c *= i;
            }
            let mut t = &qk * &c / &kfact;
            if modified && k % 2 == 1 {
                t = -t;
            }
            finite += t;
        }
        finite = fx.div(&finite, &hx_n);
    }
    // Σ_k (ψ(k+1) + ψ(n+k+1)) (∓q)^k / (k!(n+k)!)
    let mut harm_k = BigInt::zero(); // H_k
    let mut harm_nk = BigInt::zero(); // H_{n+k}
    for i in 1..=n {
        harm_nk += fx.one() / i;
    }
    let mut nfact = BigInt::one();
    for i in 1..=n {
        nfact *= i;
    }
    let mut coeff = fx.one() / &nfact; // (∓q)^k / (k!(n+k)!)
    let mut sum = BigInt::zero();
    let mut k = 0i64;
    loop {
        let psi_sum = &harm_k + &harm_nk - gamma * 2;
        let t = fx.mul(&psi_sum, &coeff);
        sum += &t;
        k += 1;
        harm_k += fx.one() / k;
        harm_nk += fx.one() / (n + k);
        coeff = fx.mul(&coeff, &q) / (k * (n + k));
        if !modified {
            coeff = -coeff;
        }
        if coeff.is_zero() {
            break;
        }
    }
    sum = fx.mul(&sum, &hx_n);
    if modified {
        let i_n = power_series(fx, 2 * n as i32, x, false, pi);
        // K_n = ½ finite + (−1)^{n+1} ln(x/2) I_n + (−1)^n ½ sum
        let sign = if n % 2 == 0 { 1 } else { -1 };
        (finite >> 1u32) - fx.mul(&ln_half, &i_n) * sign + (sum >> 1u32) * sign
    } else {
        let j_n = power_series(fx, 2 * n as i32, x, true, pi);
        // Y_n = −(1/π) finite + (2/π) ln(x/2) J_n − (1/π) sum
        let t = fx.mul(&ln_half, &j_n) * 2 - finite - sum;
        fx.div(&t, pi)
    }
}

/// High-precision value of the requested Bessel function, ν = twice/2 ≥ −1/2, x > 0.
pub fn bessel(kind: Kind, twice: i32, x: f64) -> f64 {
    assert!(x > 0.0 && twice >= -1);
    let fx = Fx { bits: working_bits(x, twice) };
    let xb = fx.from_f64(x);
    let pi = fx.pi();
    let half_integer = twice % 2 != 0;
    let v = match kind {
        Kind::J => power_series(&fx, twice, &xb, true, &pi),
        Kind::I => power_series(&fx, twice, &xb, false, &pi),
        Kind::Y if half_integer => {
            // Y_ν = −J_{−ν} / sin(νπ); sin(νπ) = (−1)^{(twice−1)/2}
            let j_neg = power_series(&fx, -twice, &xb, true, &pi);
            if (twice - 1).div_euclid(2) % 2 == 0 {
                -j_neg
            } else {
                j_neg
            }
        }
        Kind::K if half_integer => {
            // K_ν = (π/2)(I_{−ν} − I_ν)/sin(νπ)
            let diff = power_series(&fx, -twice, &xb, false, &pi) - power_series(&fx, twice, &xb, false, &pi);
            let v = fx.mul(&diff, &pi) >> 1u32;
            if (twice - 1).div_euclid(2) % 2 == 0 {
                v
            } else {
                -v
            }
        }
        Kind::Y | Kind::K => {
            let gamma = fx.euler_gamma();
            log_series(&fx, (twice / 2) as i64, &xb, matches!(kind, Kind::K), &pi, &gamma)
        }
    };
    fx.to_f64(&v)
}

/// γ to double precision via Brent–McMillan.
pub fn euler_gamma() -> f64 {
    let fx = Fx { bits: 256 };
    fx.to_f64(&fx.euler_gamma())
}

/// Γ(twice/2) in high precision, for half-integer and positive integer arguments.
pub fn gamma_half(twice: i32) -> f64 {
    let fx = Fx { bits: 256 };
    let mut g = if twice % 2 != 0 { fx.sqrt(&fx.pi()) } else { fx.one() };
    let mut m = if twice % 2 != 0 { 1 } else { 2 };
    while m < twice {
        g = g * m / 2;
        m += 2;
    }
    while m > twice {
        m -= 2;
        g = g * 2 / m;
    }
    fx.to_f64(&g)
}
