use crate::algebra::{discriminant, resultant, MultiPoly};
use crate::error::{Error, Result};

/// One irreducible-enough piece `ρ^r` of a denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    pub poly: MultiPoly,
    pub multiplicity: u32,
    /// Leading coefficient of `poly` in the chart variable.
    pub leading: MultiPoly,
}

/// A denominator `∏ ρ_k^{r_k}` prepared for partial fractions in `z_var`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactoredDenominator {
    pub var: usize,
    pub factors: Vec<Factor>,
    /// Discriminant of `∏ ρ_k` in `z_var`.
    pub discriminant: MultiPoly,
    pub unit_note: String,
}

impl FactoredDenominator {
    pub fn nvars(&self) -> usize {
        self.factors[0].poly.nvars()
    }

    /// `∏ ρ_k^{r_k}`.
    pub fn product(&self) -> MultiPoly {
        self.factors
            .iter()
            .fold(MultiPoly::one(self.nvars()), |acc, f| acc.mul(&f.poly.pow(f.multiplicity)))
    }

    /// `∏ ρ_k`.
    pub fn reduced_product(&self) -> MultiPoly {
        self.factors.iter().fold(MultiPoly::one(self.nvars()), |acc, f| acc.mul(&f.poly))
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.factors.iter().map(|f| f.multiplicity).max().unwrap_or(0)
    }
}

/// Validates a factor list for the chart `z_var` (0-based) and computes the
/// discriminant. Indices in errors are 1-based.
pub fn prepare_denominator(factors: &[(MultiPoly, u32)], var: usize) -> Result<FactoredDenominator> {
    let Some((first, _)) = factors.first() else {
        return Err(Error::ZeroInput("prepare_denominator"));
    };
    let nvars = first.nvars();
    first.check_var(var)?;
    let mut out = Vec::with_capacity(factors.len());
    for (k, (p, r)) in factors.iter().enumerate() {
        p.check_same_ring(first)?;
        if p.is_zero() {
            return Err(Error::ZeroInput("prepare_denominator"));
        }
        if *r == 0 {
            return Err(Error::Unsupported(format!("factor {} has multiplicity 0", k + 1)));
        }
        if p.is_free_of(var) {
            return Err(Error::FactorFreeOfVariable { index: k + 1, var: var + 1 });
        }
        let leading = p.lc_in(var);
        if leading.at_origin().is_zero() {
            return Err(Error::LeadingCoefficientVanishesAtOrigin { index: k + 1, var: var + 1 });
        }
        if discriminant(p, var)?.is_zero() {
            return Err(Error::NonSquarefreeFactor { index: k + 1, var: var + 1 });
        }
        out.push(Factor { poly: p.clone(), multiplicity: *r, leading });
    }
    for a in 0..out.len() {
        for b in a + 1..out.len() {
            if resultant(&out[a].poly, &out[b].poly, var)?.is_zero() {
                return Err(Error::CoprimalityViolation { first: a + 1, second: b + 1, var: var + 1 });
            }
        }
    }
    let reduced = out.iter().fold(MultiPoly::one(nvars), |acc, f| acc.mul(&f.poly));
    let disc = discriminant(&reduced, var)?;
    Ok(FactoredDenominator {
        var,
        factors: out,
        discriminant: disc,
        unit_note: "leading coefficients in the chart variable are absorbed into the partial-fraction \
                    coefficients; each is nonzero at the origin"
            .into(),
    })
}
