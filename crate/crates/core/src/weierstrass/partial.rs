use super::denominator::FactoredDenominator;
use crate::algebra::{gcd, MultiPoly, RatFn, WPoly};
use crate::error::{Error, Result};

/// Coefficient `c` of `c / ρ_factor^order`.
#[derive(Clone, Debug, PartialEq)]
pub struct PfEntry {
    pub factor: usize,
    pub order: u32,
    pub coeff: RatFn,
}

/// `1/∏ ρ_k^{r_k} = Σ_k Σ_μ c_μ^k / ρ_k^μ + polynomial_part`, with each
/// `c_μ^k` of degree `< deg ρ_k` in the chart variable.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialFractionDecomp {
    pub var: usize,
    pub multiplicities: Vec<u32>,
    pub entries: Vec<PfEntry>,
    pub polynomial_part: RatFn,
}

impl PartialFractionDecomp {
    pub fn coefficient(&self, factor: usize, order: u32) -> Option<&RatFn> {
        self.entries.iter().find(|e| e.factor == factor && e.order == order).map(|e| &e.coeff)
    }

    /// `Σ c_μ^k / ρ_k^μ + polynomial_part`.
    pub fn recombine(&self, fd: &FactoredDenominator) -> RatFn {
        let n = fd.nvars();
        let mut acc = self.polynomial_part.clone();
        for e in &self.entries {
            let den = fd.factors[e.factor].poly.pow(e.order);
            let term = RatFn::new(MultiPoly::one(n), den).expect("factor is nonzero");
            acc = acc.add(&e.coeff.mul(&term));
        }
        acc
    }

    /// Smallest `M` such that every coefficient denominator divides `base^M`,
    /// found by repeated exact division; `None` if some denominator has a
    /// factor not dividing `base`.
    pub fn denominator_exponent(&self, base: &MultiPoly) -> Option<u32> {
        let mut worst = 0;
        for e in &self.entries {
            let mut d = e.coeff.den().clone();
            let mut m = 0;
            while !d.is_constant() {
                let g = gcd(&d, base);
                if g.is_constant() {
                    return None;
                }
                d = d.div_exact(&g)?;
                m += 1;
            }
            worst = worst.max(m);
        }
        Some(worst)
    }
}

/// Partial fractions of `1/∏ ρ_k^{r_k}` over the field of rational functions
/// in the variables other than the chart variable.
pub fn partial_fractions(fd: &FactoredDenominator) -> Result<PartialFractionDecomp> {
    let var = fd.var;
    let n = fd.nvars();
    let full = fd.product();
    let mut entries = Vec::new();
    for (k, f) in fd.factors.iter().enumerate() {
        let r = f.multiplicity;
        let power = f.poly.pow(r);
        let others = full.div_exact(&power).expect("factor power divides the product");
        let modulus = WPoly::from_poly(&power, var);
        let inverse = WPoly::from_poly(&others, var)
            .inv_mod(&modulus)?
            .ok_or(Error::CoprimalityViolation { first: k + 1, second: k + 1, var: var + 1 })?;
        let digits = inverse.adic_expand(&WPoly::from_poly(&f.poly, var))?;
        for order in (1..=r).rev() {
            let coeff = digits
                .get((r - order) as usize)
                .map(WPoly::to_ratfn)
                .unwrap_or_else(|| RatFn::zero(n));
            entries.push(PfEntry { factor: k, order, coeff });
        }
    }
    let mut pfd = PartialFractionDecomp {
        var,
        multiplicities: fd.factors.iter().map(|f| f.multiplicity).collect(),
        entries,
        polynomial_part: RatFn::zero(n),
    };
    let target = RatFn::new(MultiPoly::one(n), full).expect("product is nonzero");
    pfd.polynomial_part = target.sub(&pfd.recombine(fd));
    Ok(pfd)
}

/// Holomorphy status of a simple-pole coefficient `c_1^k` at the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct HolomorphyReport {
    pub factor: usize,
    pub holomorphic_at_origin: bool,
    pub reduced_denominator: MultiPoly,
}

/// Checks, for a denominator with only simple factors, whether each `c_1^k`
/// has a reduced denominator that does not vanish at the origin.
pub fn check_simple_pole_holomorphy(pfd: &PartialFractionDecomp) -> Result<Vec<HolomorphyReport>> {
    if let Some((k, &r)) = pfd.multiplicities.iter().enumerate().find(|(_, &r)| r > 1) {
        return Err(Error::MultiplePole { component: k + 1, multiplicity: r });
    }
    Ok(pfd
        .entries
        .iter()
        .map(|e| HolomorphyReport {
            factor: e.factor,
            holomorphic_at_origin: !e.coeff.den().at_origin().is_zero(),
            reduced_denominator: e.coeff.den().clone(),
        })
        .collect())
}
