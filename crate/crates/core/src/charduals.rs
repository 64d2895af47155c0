//! Harmonic analysis on `G = Z/l^k` with `Q_p`-valued characters.
//!
//! Group notation is additive throughout: the character `g_n` is
//! `a -> zeta^(n a)`, the product `g_m g_n` is `g_(m+n)` and inversion of the
//! argument is negation.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::padic::{is_prime, teichmuller_root, Field, Padic, ValuationBound};

/// `G = Z/l^k` acting on `S = Z/l^j` by `x . a = x + (a mod l^j)`, with a
/// fixed root of unity `zeta` of order `l^k` in `Q_p`.
#[derive(Clone, Debug)]
pub struct TruncatedGroup {
    field: Field,
    l: u64,
    k: u32,
    j: u32,
    zeta: Padic,
    /// `zeta^0, ..., zeta^(l^k - 1)`.
    powers: Arc<Vec<Padic>>,
}

impl TruncatedGroup {
    /// Requires `l` prime, `l != p`, `l^k | p - 1` and `j <= k`.
    pub fn new(field: &Field, l: u64, k: u32, j: u32) -> Result<TruncatedGroup> {
        let p = field.p();
        if !is_prime(l) {
            return Err(Error::ConfigInvalid(format!("l = {l} is not prime")));
        }
        if l == p {
            return Err(Error::ConfigInvalid(format!("l = p = {p}")));
        }
        if j > k {
            return Err(Error::ConfigInvalid(format!("j = {j} exceeds k = {k}")));
        }
        let order = l
            .checked_pow(k)
            .ok_or_else(|| Error::ConfigInvalid("l^k overflows".into()))?;
        if !(p - 1).is_multiple_of(order) {
            return Err(Error::ConfigInvalid(format!(
                "{l}^{k} = {order} does not divide p - 1 = {}",
                p - 1
            )));
        }
        let zeta = teichmuller_root(field, order)?;
        let mut powers = Vec::with_capacity(order as usize);
        let mut acc = field.one();
        for _ in 0..order {
            powers.push(acc.clone());
            acc = &acc * &zeta;
        }
        Ok(TruncatedGroup {
            field: field.clone(),
            l,
            k,
            j,
            zeta,
            powers: Arc::new(powers),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn zeta(&self) -> &Padic {
        &self.zeta
    }

    /// `|G| = l^k`, also the size of the dual group.
    pub fn order(&self) -> usize {
        self.powers.len()
    }

    /// `|S| = l^j`.
    pub fn s_order(&self) -> usize {
        (self.l as usize).pow(self.j)
    }

    /// The action is free exactly when `S = G`.
    pub fn is_free(&self) -> bool {
        self.j == self.k
    }

    /// `x + a` in `S`.
    pub fn act(&self, x: usize, a: usize) -> usize {
        (x + a) % self.s_order()
    }

    pub fn neg(&self, a: usize) -> usize {
        (self.order() - a % self.order()) % self.order()
    }

    /// The characters trivial on the stabilizer `l^j Z/l^k` of `0 in S`:
    /// the multiples of `l^(k-j)`.
    pub fn g0(&self) -> Vec<usize> {
        let step = self.order() / self.s_order();
        (0..self.order()).step_by(step).collect()
    }

    pub fn in_g0(&self, i: usize) -> bool {
        i.is_multiple_of(self.order() / self.s_order())
    }

    /// `zeta^e` for any integer exponent.
    pub fn zeta_pow(&self, e: i64) -> &Padic {
        &self.powers[e.rem_euclid(self.order() as i64) as usize]
    }

    /// `g_n(a) = zeta^(n a)`.
    pub fn character(&self, n: usize, a: usize) -> &Padic {
        &self.powers[(n * a) % self.order()]
    }

    /// `1 / |G|`, a unit since `p` does not divide `l`.
    pub fn inverse_order(&self) -> Padic {
        self.field.ratio(1, self.order() as i64)
    }
}

pub fn character_eval(grp: &TruncatedGroup, n: usize, a: usize) -> Padic {
    grp.character(n, a).clone()
}

/// Group average `l^-k sum_a f(a)`; `f` is indexed by `0..l^k`.
pub fn haar_integrate(grp: &TruncatedGroup, f: &[Padic]) -> Padic {
    assert_eq!(f.len(), grp.order(), "function must be indexed by G");
    let sum = f.iter().fold(grp.field.zero(), |acc, x| &acc + x);
    &sum * &grp.inverse_order()
}

/// Fourier coefficients of `f : G -> Q_p`: `c_n = int f(a) g_n(-a) da`.
pub fn analyze_1d(grp: &TruncatedGroup, f: &[Padic]) -> Vec<Padic> {
    let inv = grp.inverse_order();
    (0..grp.order())
        .map(|n| {
            let mut acc = grp.field.zero();
            for (a, v) in f.iter().enumerate() {
                if !v.is_zero() {
                    acc = &acc + &(v * grp.character(n, grp.neg(a)));
                }
            }
            &acc * &inv
        })
        .collect()
}

/// `f(a) = sum_n c_n g_n(a)`.
pub fn synthesize_1d(grp: &TruncatedGroup, c: &[Padic]) -> Vec<Padic> {
    (0..grp.order())
        .map(|a| {
            let mut acc = grp.field.zero();
            for (n, v) in c.iter().enumerate() {
                if !v.is_zero() {
                    acc = &acc + &(v * grp.character(n, a));
                }
            }
            acc
        })
        .collect()
}

/// `phi_n(x) = int_G F(x, a) g_n(-a) da` for `F` indexed `[x][a]`; the
/// result is indexed `[n][x]`.
pub fn fourier_analyze(grp: &TruncatedGroup, f: &[Vec<Padic>]) -> Vec<Vec<Padic>> {
    let per_x: Vec<Vec<Padic>> = f.iter().map(|row| analyze_1d(grp, row)).collect();
    (0..grp.order())
        .map(|n| per_x.iter().map(|c| c[n].clone()).collect())
        .collect()
}

/// `F(x, a) = sum_n phi_n(x) g_n(a)` for `phi` indexed `[n][x]`.
pub fn fourier_synthesize(grp: &TruncatedGroup, phi: &[Vec<Padic>]) -> Vec<Vec<Padic>> {
    assert_eq!(
        phi.len(),
        grp.order(),
        "coefficients must be indexed by the dual"
    );
    let s = phi.first().map_or(0, |c| c.len());
    (0..s)
        .map(|x| {
            let c: Vec<Padic> = phi.iter().map(|row| row[x].clone()).collect();
            synthesize_1d(grp, &c)
        })
        .collect()
}

/// `|x|_p` from above: exact for certified values, `p^-a` for values
/// vanished below `p^a`.
pub fn abs_upper(x: &Padic) -> BigRational {
    let p = BigInt::from(x.p());
    let pow = |e: i64| -> BigRational {
        let base = BigRational::from_integer(p.clone());
        if e >= 0 {
            num_traits::pow(base, e as usize).recip()
        } else {
            num_traits::pow(base, (-e) as usize)
        }
    };
    match x.valuation_bound() {
        ValuationBound::Exact(v) => match v.finite() {
            Some(e) => pow(e),
            None => BigRational::zero(),
        },
        ValuationBound::AtLeast(a) => pow(a),
    }
}

/// `||f||_gamma = max_i |f(i)|_p gamma(i)` on the dual group.
#[derive(Clone, Debug)]
pub struct WeightedSupNorm {
    pub gamma: Vec<BigRational>,
}

impl WeightedSupNorm {
    pub fn new(gamma: Vec<BigRational>) -> Result<WeightedSupNorm> {
        if gamma.iter().any(|g| g.is_negative()) {
            return Err(Error::Input("weights must be nonnegative".into()));
        }
        Ok(WeightedSupNorm { gamma })
    }

    /// Upper bound, exact when every value is certified.
    pub fn norm(&self, f: &[Padic]) -> BigRational {
        f.iter()
            .zip(&self.gamma)
            .map(|(x, g)| abs_upper(x) * g)
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

/// A trigonometric polynomial approximating a function on the dual group.
#[derive(Clone, Debug)]
pub struct TrigApprox {
    /// The subgroup used is `l^s Z/l^k`.
    pub s: u32,
    pub subgroup: Vec<usize>,
    /// `(a, c_a)` for `a` in `0..l^(k-s)`; `f_eps(i) = sum c_a g_i(a)`.
    pub coeffs: Vec<(usize, Padic)>,
    pub values: Vec<Padic>,
    pub exact_on_subgroup: bool,
    /// `||f_eps - f||_gamma`, bounded from above.
    pub error: BigRational,
}

/// Approximates `f` on the dual group in the weighted norm.
///
/// Picks the smallest subgroup `Sigma = l^s Z/l^k` whose complement carries
/// weights below `eps / M_f` (`M_f = max |f|`), expands `f` restricted to
/// `Sigma` in the characters of `Sigma` and extends the expansion to the
/// whole dual. The result agrees with `f` on `Sigma`.
pub fn trig_poly_approx(
    grp: &TruncatedGroup,
    f: &[Padic],
    w: &WeightedSupNorm,
    eps: &BigRational,
) -> Result<TrigApprox> {
    let order = grp.order();
    if f.len() != order || w.gamma.len() != order {
        return Err(Error::DimensionMismatch(format!(
            "function and weights must have {order} entries"
        )));
    }
    if !eps.is_positive() {
        return Err(Error::Input("eps must be positive".into()));
    }
    let m_f = f
        .iter()
        .map(abs_upper)
        .max()
        .unwrap_or_else(BigRational::zero);
    let s = if m_f.is_zero() {
        grp.k()
    } else {
        let threshold = eps / &m_f;
        (0..=grp.k())
            .rev()
            .find(|&s| {
                let step = (grp.l() as usize).pow(s);
                (0..order)
                    .filter(|i| i % step != 0)
                    .all(|i| w.gamma[i] < threshold)
            })
            .ok_or(Error::NoValidSubgroup)?
    };
    let step = (grp.l() as usize).pow(s);
    let subgroup: Vec<usize> = (0..order).step_by(step).collect();
    let quotient = order / step;
    let inv_size = grp.field.ratio(1, subgroup.len() as i64);
    let coeffs: Vec<(usize, Padic)> = (0..quotient)
        .map(|a| {
            let mut acc = grp.field.zero();
            for &i in &subgroup {
                if !f[i].is_zero() {
                    acc = &acc + &(&f[i] * grp.character(i, grp.neg(a)));
                }
            }
            (a, &acc * &inv_size)
        })
        .collect();
    let values: Vec<Padic> = (0..order)
        .map(|i| {
            coeffs.iter().fold(grp.field.zero(), |acc, (a, c)| {
                if c.is_zero() {
                    acc
                } else {
                    &acc + &(c * grp.character(i, *a))
                }
            })
        })
        .collect();
    let mut exact_on_subgroup = true;
    for &i in &subgroup {
        if !values[i].same_as(&f[i])? {
            exact_on_subgroup = false;
        }
    }
    // on the subgroup the two sides were just certified equal
    let diff: Vec<Padic> = (0..order)
        .map(|i| {
            if i % step == 0 && exact_on_subgroup {
                grp.field.zero()
            } else {
                &values[i] - &f[i]
            }
        })
        .collect();
    let error = w.norm(&diff);
    Ok(TrigApprox {
        s,
        subgroup,
        coeffs,
        values,
        exact_on_subgroup,
        error,
    })
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn character_examples() {
        let f = Field::new(3, 20).unwrap();
        let g = TruncatedGroup::new(&f, 2, 1, 1).unwrap();
        assert_eq!(character_eval(&g, 0, 1), f.one());
        assert_eq!(character_eval(&g, 1, 1), f.int(-1));
        let f = Field::new(5, 2).unwrap();
        let g = TruncatedGroup::new(&f, 2, 2, 2).unwrap();
        let z = character_eval(&g, 1, 1);
        assert_eq!(z.reduce_residue().unwrap().value(), 2);
        assert!(z.same_as(&f.int(7)).unwrap());
    }

    #[test]
    fn config_checks() {
        let f = Field::new(5, 10).unwrap();
        assert!(matches!(
            TruncatedGroup::new(&f, 2, 3, 1),
            Err(Error::ConfigInvalid(_))
        ));
        assert!(TruncatedGroup::new(&f, 5, 1, 1).is_err());
        assert!(TruncatedGroup::new(&f, 2, 1, 2).is_err());
    }

    #[test]
    fn haar_and_orthogonality() {
        let f = Field::new(5, 20).unwrap();
        let g = TruncatedGroup::new(&f, 2, 2, 1).unwrap();
        let ones = vec![f.one(); 4];
        assert_eq!(haar_integrate(&g, &ones), f.one());
        for m in 0..4 {
            for n in 0..4 {
                let prod: Vec<Padic> = (0..4)
                    .map(|a| g.character(m, a) * g.character(n, g.neg(a)))
                    .collect();
                let expected = if m == n { f.one() } else { f.zero() };
                assert!(haar_integrate(&g, &prod).same_as(&expected).unwrap());
            }
        }
        assert_eq!(g.g0(), vec![0, 2]);
    }

    #[test]
    fn trig_approx_single_character() {
        let f = Field::new(5, 20).unwrap();
        let g = TruncatedGroup::new(&f, 2, 2, 2).unwrap();
        // the function i -> g_i(1) is a single character of the dual
        let vals: Vec<Padic> = (0..4).map(|i| g.character(i, 1).clone()).collect();
        let w = WeightedSupNorm::new(vec![BigRational::one(); 4]).unwrap();
        let r = trig_poly_approx(&g, &vals, &w, &rational(1, 2)).unwrap();
        assert_eq!(r.s, 0);
        assert!(r.error.is_zero());
        let nonzero = r
            .coeffs
            .iter()
            .filter(|(_, c)| !c.is_negligible(0).unwrap())
            .count();
        assert_eq!(nonzero, 1);
    }
}
