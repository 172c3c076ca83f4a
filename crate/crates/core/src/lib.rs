//! Stretching maps of even-order square tensors.
//!
//! A tensor `T ∈ Mat(A)` has rows and columns indexed by a finite set of
//! multi-indices `A ⊂ Z^l`. An index map `F: A -> Z` stretches `T` into an
//! ordinary matrix whose `(F(i), F(j))` entry collects `T_{i,j}`. When `F` is
//! injective this is matricization; when it is not, entries that share a class
//! are added together. The convolution product attached to `F` makes the
//! stretching map multiplicative.
//!
//! All kernels are generic over [`Scalar`]. The concrete aliases below cover
//! the two fields used in practice: double-precision complex ([`C64`]) and
//! exact Gaussian rationals ([`GaussQ`]).

pub mod error;
pub mod index;
pub mod jordan;
pub mod json;
pub mod linalg;
pub mod random;
pub mod scalar;
pub mod stretch;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};
pub use index::{ClassPartition, EqClass, IndexMap, IndexSet, MapRule, MultiIndex, Permutation};
pub use jordan::{JordanBlock, JordanOracleResult, JordanSpec};
pub use linalg::{DenseMatrix, DenseVector};
pub use scalar::{ExactScalar, GaussQ, Rational, Scalar, C64};
pub use stretch::{Report, SimilarityWitness, StretchedMatrix};
pub use tensor::{Tensor, TensorVector};

pub type CMatrix = DenseMatrix<C64>;
pub type QMatrix = DenseMatrix<GaussQ>;
pub type CTensor = Tensor<C64>;
pub type QTensor = Tensor<GaussQ>;
pub type CVector = TensorVector<C64>;
pub type QVector = TensorVector<GaussQ>;
pub type QJordanSpec = JordanSpec<GaussQ>;
