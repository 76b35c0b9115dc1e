use std::fmt;

use crate::polyform::ValueSpace;

use super::FeError;

/// Polynomial family of a local space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `P_r Λ^k`: full polynomials of degree `r`.
    P,
    /// `P_r⁺ Λ^k = P_r Λ^k + κ P_r Λ^{k+1}`.
    PPlus,
    /// The reduced 48-dimensional subspace of `P_1⁺ Λ¹(T;V)`.
    ReducedOne,
    /// The reduced 24-dimensional subspace of `P_1 Λ²(T;V)`.
    ReducedTwo,
}

/// Descriptor of a local finite element space `family_r Λ^k(T; values)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpaceSpec {
    pub family: Family,
    pub r: usize,
    pub k: usize,
    pub values: ValueSpace,
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

impl SpaceSpec {
    pub const fn new(family: Family, r: usize, k: usize, values: ValueSpace) -> Self {
        SpaceSpec { family, r, k, values }
    }

    pub const fn p(r: usize, k: usize, values: ValueSpace) -> Self {
        Self::new(Family::P, r, k, values)
    }

    pub const fn p_plus(r: usize, k: usize, values: ValueSpace) -> Self {
        Self::new(Family::PPlus, r, k, values)
    }

    /// `P⁺_{1,−}Λ¹(T;V)`.
    pub const fn reduced_one() -> Self {
        Self::new(Family::ReducedOne, 1, 1, ValueSpace::V)
    }

    /// `P_{1,−}Λ²(T;V)`.
    pub const fn reduced_two() -> Self {
        Self::new(Family::ReducedTwo, 1, 2, ValueSpace::V)
    }

    pub fn is_reduced(&self) -> bool {
        matches!(self.family, Family::ReducedOne | Family::ReducedTwo)
    }

    /// Same space with a different value space.
    pub fn with_values(&self, values: ValueSpace) -> Self {
        SpaceSpec { values, ..*self }
    }

    pub fn validate(&self) -> Result<(), FeError> {
        let bad = |why: &str| Err(FeError::Unsupported(format!("{self}: {why}")));
        if self.k > 3 {
            return bad("form degree exceeds 3");
        }
        match self.family {
            Family::P if self.r == 0 && self.k < 3 => bad("P_0 Λ^k has no moment degrees of freedom for k < 3"),
            Family::ReducedOne if (self.r, self.k, self.values) != (1, 1, ValueSpace::V) => {
                bad("the reduced edge-face space exists only for r=1, k=1 with vector values")
            }
            Family::ReducedTwo if (self.r, self.k, self.values) != (1, 2, ValueSpace::V) => {
                bad("the reduced face space exists only for r=1, k=2 with vector values")
            }
            _ if self.values == ValueSpace::M => bad("matrix-valued spaces are represented as V-valued 2-forms"),
            _ => Ok(()),
        }
    }

    /// Dimension of the scalar-valued space on one tetrahedron.
    fn scalar_dimension(&self) -> usize {
        let (r, k) = (self.r, self.k);
        match self.family {
            Family::P => binomial(r + 3, r + k) * binomial(r + k, k),
            Family::PPlus => binomial(r + 4, r + 1 + k) * binomial(r + k, k),
            Family::ReducedOne => 16,
            Family::ReducedTwo => 8,
        }
    }

    /// Dimension of the local space on one tetrahedron.
    pub fn local_dimension(&self) -> Result<usize, FeError> {
        self.validate()?;
        Ok(self.scalar_dimension() * self.values.dim())
    }

    /// Largest polynomial degree of the shape functions.
    pub fn poly_degree(&self) -> usize {
        match self.family {
            Family::P => self.r,
            Family::PPlus if self.k < 3 => self.r + 1,
            Family::PPlus => self.r,
            Family::ReducedOne => 2,
            Family::ReducedTwo => 1,
        }
    }

    /// Family used for degrees of freedom: top-degree forms share them between P and P⁺.
    pub(crate) fn dof_family(&self) -> Family {
        if self.k == 3 && self.family == Family::P {
            Family::PPlus
        } else {
            self.family
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = match self.values {
            ValueSpace::R => "R",
            ValueSpace::V => "V",
            ValueSpace::K => "K",
            ValueSpace::M => "M",
        };
        match self.family {
            Family::P => write!(f, "P{}L{}({v})", self.r, self.k),
            Family::PPlus => write!(f, "P{}+L{}({v})", self.r, self.k),
            Family::ReducedOne => write!(f, "P1-+L1(V)"),
            Family::ReducedTwo => write!(f, "P1-L2(V)"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_of_named_spaces() {
        assert_eq!(SpaceSpec::p(1, 2, ValueSpace::V).local_dimension().unwrap(), 36);
        assert_eq!(SpaceSpec::reduced_one().local_dimension().unwrap(), 48);
        assert_eq!(SpaceSpec::reduced_two().local_dimension().unwrap(), 24);
        assert_eq!(SpaceSpec::p_plus(0, 2, ValueSpace::R).local_dimension().unwrap(), 4);
        assert_eq!(SpaceSpec::p_plus(0, 1, ValueSpace::R).local_dimension().unwrap(), 6);
        assert_eq!(SpaceSpec::p_plus(1, 1, ValueSpace::V).local_dimension().unwrap(), 60);
        assert_eq!(SpaceSpec::p(0, 3, ValueSpace::K).local_dimension().unwrap(), 3);
        assert_eq!(SpaceSpec::p(2, 0, ValueSpace::R).local_dimension().unwrap(), 10);
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(SpaceSpec::p(0, 1, ValueSpace::R).validate().is_err());
        assert!(SpaceSpec::new(Family::ReducedTwo, 0, 2, ValueSpace::V).validate().is_err());
        assert!(SpaceSpec::new(Family::ReducedOne, 1, 1, ValueSpace::K).validate().is_err());
        assert!(SpaceSpec::p(1, 4, ValueSpace::R).validate().is_err());
    }
}
