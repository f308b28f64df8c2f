use num_traits::Float;

use crate::error::{Error, Result};
use crate::seq::{Complex, Domain, FrequencyIndex, Scalar, TorusIndex};

/// Diagonal operators `e_k ↦ phase(k) e_k`.
///
/// `TorusF` is the graded 2×2 block operator built from `TorusU`; it has no
/// scalar phase and is handled through its blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OperatorModel {
    SzegoP,
    CircleF,
    TorusU,
    TorusUAdjoint,
    TorusF,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Phase {
    Int(i64),
    Unit(Complex),
}

impl Phase {
    pub fn to_complex(self) -> Complex {
        match self {
            Phase::Int(v) => Complex::new(v as f64, 0.0),
            Phase::Unit(c) => c,
        }
    }
}

impl OperatorModel {
    pub fn name(self) -> &'static str {
        match self {
            OperatorModel::SzegoP => "szego_P",
            OperatorModel::CircleF => "circle_F",
            OperatorModel::TorusU => "torus_U",
            OperatorModel::TorusUAdjoint => "torus_U*",
            OperatorModel::TorusF => "torus_F",
        }
    }

    pub fn domain(self) -> Domain {
        match self {
            OperatorModel::SzegoP | OperatorModel::CircleF => Domain::Circle,
            _ => Domain::Torus,
        }
    }

    pub fn adjoint(self) -> Self {
        match self {
            OperatorModel::TorusU => OperatorModel::TorusUAdjoint,
            OperatorModel::TorusUAdjoint => OperatorModel::TorusU,
            m => m,
        }
    }

    pub fn phase<I: FrequencyIndex>(self, k: I) -> Result<Phase> {
        if I::DOMAIN != self.domain() {
            return Err(Error::Domain(self.name()));
        }
        let c = k.coords();
        Ok(match self {
            OperatorModel::SzegoP => Phase::Int((c[0] >= 0) as i64),
            OperatorModel::CircleF => Phase::Int(if c[0] >= 0 { 1 } else { -1 }),
            OperatorModel::TorusU => torus_phase(TorusIndex::new(c[0], c[1]), false),
            OperatorModel::TorusUAdjoint => torus_phase(TorusIndex::new(c[0], c[1]), true),
            OperatorModel::TorusF => return Err(Error::BlockModel(self.name())),
        })
    }

    /// Phase as a scalar of the requested kind; irrational phases are refused for exact scalars.
    pub fn phase_scalar<I: FrequencyIndex, S: Scalar>(self, k: I) -> Result<S> {
        match self.phase(k)? {
            Phase::Int(v) => Ok(S::from_i64(v)),
            Phase::Unit(c) => S::from_complex(c).ok_or(Error::InexactPhase(self.name())),
        }
    }
}

fn torus_phase(k: TorusIndex, adjoint: bool) -> Phase {
    // Axis points have exactly representable phases ±1, ±i.
    let u = match (k.k1.signum(), k.k2.signum()) {
        (0, 0) => Complex::new(1.0, 0.0),
        (s, 0) => Complex::new(s as f64, 0.0),
        (0, s) => Complex::new(0.0, s as f64),
        _ => {
            let r = (k.norm_sq() as f64).sqrt();
            Complex::new(k.k1 as f64 / r, k.k2 as f64 / r)
        }
    };
    Phase::Unit(if adjoint { u.conj() } else { u })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_phases() {
        assert_eq!(OperatorModel::CircleF.phase(0i64).unwrap(), Phase::Int(1));
        assert_eq!(OperatorModel::CircleF.phase(-3i64).unwrap(), Phase::Int(-1));
        assert_eq!(OperatorModel::SzegoP.phase(-1i64).unwrap(), Phase::Int(0));
        assert_eq!(OperatorModel::SzegoP.phase(5i64).unwrap(), Phase::Int(1));
    }

    #[test]
    fn torus_phase_origin_and_modulus() {
        let z = OperatorModel::TorusU.phase(TorusIndex::new(0, 0)).unwrap().to_complex();
        assert_eq!(z, Complex::new(1.0, 0.0));
        let u = OperatorModel::TorusU.phase(TorusIndex::new(3, 4)).unwrap().to_complex();
        assert!((u - Complex::new(0.6, 0.8)).norm() < 1e-16);
        let v = OperatorModel::TorusUAdjoint.phase(TorusIndex::new(3, 4)).unwrap().to_complex();
        assert_eq!(v, u.conj());
    }

    #[test]
    fn domain_and_block_errors() {
        assert!(OperatorModel::CircleF.phase(TorusIndex::new(1, 0)).is_err());
        assert_eq!(
            OperatorModel::TorusF.phase(TorusIndex::new(1, 0)),
            Err(Error::BlockModel("torus_F"))
        );
        let exact: Result<crate::seq::GaussRational> =
            OperatorModel::TorusU.phase_scalar(TorusIndex::new(1, 1));
        assert!(matches!(exact, Err(Error::InexactPhase(_))));
        let axis: crate::seq::GaussRational = OperatorModel::TorusU.phase_scalar(TorusIndex::new(0, -2)).unwrap();
        assert_eq!(axis, crate::seq::GaussRational::from_ints(0, -1));
    }
}
