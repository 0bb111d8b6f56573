use std::fmt;

use num_traits::Zero;

use super::scalar::ExactScalar;

/// A point of projective space over `Q(i)`, normalized so that the first
/// nonzero coordinate is `1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjectiveVector(Vec<ExactScalar>);

impl ProjectiveVector {
    /// `None` for the zero vector.
    pub fn from_affine(coords: &[ExactScalar]) -> Option<Self> {
        let lead = coords.iter().find(|c| !c.is_zero())?;
        let inv = lead.inv()?;
        Some(Self(coords.iter().map(|c| c * &inv).collect()))
    }

    pub fn coords(&self) -> &[ExactScalar] {
        &self.0
    }

    /// Projective dimension, one less than the number of coordinates.
    pub fn dimension(&self) -> usize {
        self.0.len() - 1
    }
}

impl fmt::Display for ProjectiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " : ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_first_nonzero() {
        let v = ProjectiveVector::from_affine(&[0.into(), 5.into(), 0.into(), 5.into()]).unwrap();
        assert_eq!(v.to_string(), "[0 : 1 : 0 : 1]");
        assert_eq!(v.dimension(), 3);
        let w = ProjectiveVector::from_affine(&[0.into(), (-7).into(), 0.into(), (-7).into()]).unwrap();
        assert_eq!(v, w);
        assert!(ProjectiveVector::from_affine(&vec![ExactScalar::zero(); 3]).is_none());
    }
}
