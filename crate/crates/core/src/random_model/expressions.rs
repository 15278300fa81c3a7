//! Random-model integrands, registered by expression id.

use std::f64::consts::TAU;

use num_traits::ToPrimitive;

use super::exact::{expectation_product, re_prime_sum_moment_exact};
use crate::arithmetic::factorize_trial;
use crate::error::{Error, Result};
use crate::mollifier::PreparedScheme;
use crate::moments::GSumWeights;

/// A function of the phases `theta_p` at `primes()`, in that order.
pub trait Expectation: Send + Sync {
    fn id(&self) -> &'static str;
    fn primes(&self) -> Vec<u64>;
    fn eval(&self, theta: &[f64]) -> f64;
    /// Exact expectation when one is available.
    fn closed_form(&self) -> Option<f64>;
}

/// `c * cos(e * theta_i)` summands of a real-linear form in the phases.
#[derive(Clone, Debug, PartialEq)]
struct LinearForm {
    primes: Vec<u64>,
    terms: Vec<(usize, u32, f64)>,
}

impl LinearForm {
    fn eval(&self, theta: &[f64]) -> f64 {
        self.terms.iter().map(|&(i, e, c)| c * (e as f64 * theta[i]).cos()).sum()
    }

    fn add_prime_sum(&mut self, primes: &[u64], c: f64) {
        for &p in primes {
            let i = self.index_of(p);
            self.terms.push((i, 1, c / (p as f64).sqrt()));
        }
    }

    /// `sum w(n) / sqrt n * Re X_n` with `X_{p^e} = X_p^e`.
    fn add_weights(&mut self, weights: &[(u64, f64)], c: f64) {
        for &(n, w) in weights {
            let (p, e) = factorize_trial(n).prime_power().expect("weights live on prime powers");
            let i = self.index_of(p);
            self.terms.push((i, e, c * w / (n as f64).sqrt()));
        }
    }

    fn index_of(&mut self, p: u64) -> usize {
        match self.primes.iter().position(|&q| q == p) {
            Some(i) => i,
            None => {
                self.primes.push(p);
                self.primes.len() - 1
            }
        }
    }

    /// `E[exp(form)]` as a product over primes of `(1/2pi) int exp(a cos t + b cos 2t + ..) dt`,
    /// by the trapezoid rule, which is spectrally accurate for periodic integrands.
    fn exp_expectation(&self) -> f64 {
        const NODES: usize = 512;
        (0..self.primes.len())
            .map(|i| {
                let mine: Vec<(u32, f64)> = self.terms.iter().filter(|t| t.0 == i).map(|t| (t.1, t.2)).collect();
                (0..NODES)
                    .map(|q| {
                        let t = TAU * q as f64 / NODES as f64;
                        mine.iter().map(|&(e, c)| c * (e as f64 * t).cos()).sum::<f64>().exp()
                    })
                    .sum::<f64>()
                    / NODES as f64
            })
            .product()
    }

    fn first_powers_only(&self) -> bool {
        self.terms.iter().all(|t| t.1 == 1)
    }
}

pub struct ConstantOne;

impl Expectation for ConstantOne {
    fn id(&self) -> &'static str {
        "one"
    }
    fn primes(&self) -> Vec<u64> {
        Vec::new()
    }
    fn eval(&self, _: &[f64]) -> f64 {
        1.0
    }
    fn closed_form(&self) -> Option<f64> {
        Some(1.0)
    }
}

/// `exp(c Re P(X))` with `P = sum_p X_p / sqrt p`.
pub struct ExpRePrimeSum {
    form: LinearForm,
    c: f64,
}

impl ExpRePrimeSum {
    pub fn new(primes: &[u64], c: f64) -> Self {
        let mut form = LinearForm {
            primes: Vec::new(),
            terms: Vec::new(),
        };
        form.add_prime_sum(primes, c);
        Self { form, c }
    }
}

impl Expectation for ExpRePrimeSum {
    fn id(&self) -> &'static str {
        "exp-re-p"
    }
    fn primes(&self) -> Vec<u64> {
        self.form.primes.clone()
    }
    fn eval(&self, theta: &[f64]) -> f64 {
        self.form.eval(theta).exp()
    }
    fn closed_form(&self) -> Option<f64> {
        // prod I_0(c / sqrt p) is the w = 0 case with 2(k-1) = c.
        let pw: Vec<(u64, f64)> = self.form.primes.iter().map(|&p| (p, 0.0)).collect();
        expectation_product(&pw, 1.0 + self.c / 2.0).ok()
    }
}

/// `exp(2 G_{l,j}(X) + 2(k-1) Re P_l(X))`.
pub struct ExpGPlusRePrimeSum {
    form: LinearForm,
    prime_weights: Vec<(u64, f64)>,
    k: f64,
}

impl ExpGPlusRePrimeSum {
    pub fn new(weights: &GSumWeights, primes: &[u64], k: f64) -> Self {
        let mut form = LinearForm {
            primes: Vec::new(),
            terms: Vec::new(),
        };
        form.add_prime_sum(primes, 2.0 * (k - 1.0));
        form.add_weights(&weights.weights, 2.0);
        let mut prime_weights: Vec<(u64, f64)> = primes.iter().map(|&p| (p, 0.0)).collect();
        for &(n, w) in &weights.weights {
            if let Some(slot) = prime_weights.iter_mut().find(|x| x.0 == n) {
                slot.1 = w;
            }
        }
        Self { form, prime_weights, k }
    }

    /// Whether the weights include prime squares, which the Bessel product omits.
    pub fn has_square_terms(&self) -> bool {
        !self.form.first_powers_only()
    }

    /// `prod_{p} I_0(2 w(p)/sqrt p + 2(k-1)/sqrt p)`, ignoring square terms.
    pub fn bessel_product(&self) -> Result<f64> {
        expectation_product(&self.prime_weights, self.k)
    }
}

impl Expectation for ExpGPlusRePrimeSum {
    fn id(&self) -> &'static str {
        "exp-g-re-p"
    }
    fn primes(&self) -> Vec<u64> {
        self.form.primes.clone()
    }
    fn eval(&self, theta: &[f64]) -> f64 {
        self.form.eval(theta).exp()
    }
    fn closed_form(&self) -> Option<f64> {
        if self.has_square_terms() {
            Some(self.form.exp_expectation())
        } else {
            self.bessel_product().ok()
        }
    }
}

/// `G_{l,j}(X)^{power} exp(2(k-1) Re P_l(X))`.
pub struct GPowerTimesExp {
    g: LinearForm,
    p: LinearForm,
    power: u32,
}

impl GPowerTimesExp {
    pub fn new(weights: &GSumWeights, primes: &[u64], k: f64, power: u32) -> Self {
        let mut g = LinearForm {
            primes: Vec::new(),
            terms: Vec::new(),
        };
        g.add_weights(&weights.weights, 1.0);
        // Same index space for both forms.
        let mut p = LinearForm {
            primes: g.primes.clone(),
            terms: Vec::new(),
        };
        p.add_prime_sum(primes, 2.0 * (k - 1.0));
        g.primes = p.primes.clone();
        Self { g, p, power }
    }
}

impl Expectation for GPowerTimesExp {
    fn id(&self) -> &'static str {
        "g-power-exp"
    }
    fn primes(&self) -> Vec<u64> {
        self.p.primes.clone()
    }
    fn eval(&self, theta: &[f64]) -> f64 {
        self.g.eval(theta).powi(self.power as i32) * self.p.eval(theta).exp()
    }
    fn closed_form(&self) -> Option<f64> {
        None
    }
}

/// `(2 Re P(X))^{2m}`.
pub struct RePrimeSumPower {
    form: LinearForm,
    m: u32,
}

impl RePrimeSumPower {
    pub fn new(primes: &[u64], m: u32) -> Self {
        let mut form = LinearForm {
            primes: Vec::new(),
            terms: Vec::new(),
        };
        form.add_prime_sum(primes, 2.0);
        Self { form, m }
    }
}

impl Expectation for RePrimeSumPower {
    fn id(&self) -> &'static str {
        "re-p-power"
    }
    fn primes(&self) -> Vec<u64> {
        self.form.primes.clone()
    }
    fn eval(&self, theta: &[f64]) -> f64 {
        self.form.eval(theta).powi(2 * self.m as i32)
    }
    fn closed_form(&self) -> Option<f64> {
        let count = super::exact::composition_count(self.m as u64, self.form.primes.len() as u64);
        (count <= super::EXACT_TERM_LIMIT).then(|| re_prime_sum_moment_exact(&self.form.primes, self.m).to_f64().unwrap_or(f64::NAN))
    }
}

/// Parameters shared by the registered expression builders.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpressionParams {
    pub k: f64,
    /// Interval indices `l` (1-based) whose primes enter the expression.
    pub blocks: Vec<usize>,
    /// Weight index `j` for `G_{l,j}`.
    pub j: usize,
    /// Exponent: `m` for `re-p-power`, the power of `G` for `g-power-exp` (0 picks `2 ceil(1/(10 alpha_l))`).
    pub power: u32,
    /// Multiplier `c` for `exp-re-p`.
    pub coef: f64,
}

pub type ExpressionBuilder = fn(&PreparedScheme, &ExpressionParams) -> Result<Box<dyn Expectation>>;

fn block_primes(scheme: &PreparedScheme, blocks: &[usize]) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for &l in blocks {
        out.extend_from_slice(scheme.primes(l)?);
    }
    Ok(out)
}

fn single_block(params: &ExpressionParams) -> Result<usize> {
    match params.blocks.as_slice() {
        [l] => Ok(*l),
        _ => Err(Error::Domain(format!(
            "expression needs exactly one block, got {:?}",
            params.blocks
        ))),
    }
}

fn build_one(_: &PreparedScheme, _: &ExpressionParams) -> Result<Box<dyn Expectation>> {
    Ok(Box::new(ConstantOne))
}

fn build_exp_re_p(s: &PreparedScheme, p: &ExpressionParams) -> Result<Box<dyn Expectation>> {
    Ok(Box::new(ExpRePrimeSum::new(&block_primes(s, &p.blocks)?, p.coef)))
}

fn build_exp_g_re_p(s: &PreparedScheme, p: &ExpressionParams) -> Result<Box<dyn Expectation>> {
    let l = single_block(p)?;
    let w = GSumWeights::new(s, l, p.j)?;
    Ok(Box::new(ExpGPlusRePrimeSum::new(&w, s.primes(l)?, p.k)))
}

fn build_g_power_exp(s: &PreparedScheme, p: &ExpressionParams) -> Result<Box<dyn Expectation>> {
    let l = single_block(p)?;
    let w = GSumWeights::new(s, l, p.j)?;
    let power = if p.power == 0 {
        2 * (1.0 / (10.0 * s.scheme.block(l)?.alpha)).ceil() as u32
    } else {
        p.power
    };
    Ok(Box::new(GPowerTimesExp::new(&w, s.primes(l)?, p.k, power)))
}

fn build_re_p_power(s: &PreparedScheme, p: &ExpressionParams) -> Result<Box<dyn Expectation>> {
    Ok(Box::new(RePrimeSumPower::new(&block_primes(s, &p.blocks)?, p.power.max(1))))
}

/// Registered expression ids.
pub const EXPRESSIONS: [(&str, ExpressionBuilder); 5] = [
    ("one", build_one),
    ("exp-re-p", build_exp_re_p),
    ("exp-g-re-p", build_exp_g_re_p),
    ("g-power-exp", build_g_power_exp),
    ("re-p-power", build_re_p_power),
];

pub fn build_expression(id: &str, scheme: &PreparedScheme, params: &ExpressionParams) -> Result<Box<dyn Expectation>> {
    match EXPRESSIONS.iter().find(|(name, _)| *name == id) {
        Some((_, build)) => build(scheme, params),
        None => Err(Error::UnknownName {
            name: id.to_string(),
            known: EXPRESSIONS.iter().map(|e| e.0).collect::<Vec<_>>().join(", "),
        }),
    }
}
