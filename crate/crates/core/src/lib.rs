//! Exact symbolic kernel for the quantum Euclidean spaces `R^N_q`.

pub mod algebra;
pub mod calculus;
pub mod frame;
pub mod geometry;
pub mod report;
pub mod scalar;
pub mod space;
pub mod tensor;
pub mod verify;

/// Largest supported dimension `N` (monomials use fixed-width exponent arrays).
pub const MAX_DIM: usize = 14;

pub use algebra::{Algebra, AlgebraElement, AlgebraError, Monomial};
pub use calculus::{Calculus, CalculusError, CalculusTag, OneForm, TensorSquare, TwoForm};
pub use frame::{FrameData, FrameError, GammaAssignment, GammaBranch, GammaChoice, GlueReading};
pub use geometry::SigmaBranch;
pub use report::{CheckResult, Status, VerificationReport};
pub use scalar::{Coefficient, GaussRational, HalfLaurent, KConvention, Parity, QScalar, Radical, ScalarContext, ScalarError};
pub use space::Space;
pub use verify::{verify, Family, Mode, VerifyError, VerifyOptions};
pub use tensor::{ProjectorKind, SparseTensor2, SparseTensor4, TensorCore};

pub type ExactContext = ScalarContext<QScalar>;
pub type SampledContext = ScalarContext<GaussRational>;
pub type ExactTensorCore = TensorCore<QScalar>;
pub type SampledTensorCore = TensorCore<GaussRational>;
pub type ExactAlgebra = Algebra<QScalar>;
pub type SampledAlgebra = Algebra<GaussRational>;
