use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A table fails one of the axioms of its signature. The witness holds the
    /// offending elements (unused slots are zero).
    AxiomViolation {
        axiom: &'static str,
        witness: [usize; 3],
    },
    /// A table entry or map value outside `0..n`, or a table of the wrong shape.
    Malformed(String),
    /// A map between algebras fails to preserve an operation or the point.
    NotHomomorphism {
        op: &'static str,
        witness: [usize; 2],
    },
    SignatureMismatch,
    /// The subset is not the kernel of any surjection.
    NotNormal,
    NotSurjective,
    NotCommutative,
    /// A reflector applied outside the subcategory it is defined on.
    AmbientMismatch(String),
    NotBirkhoffInner,
    NotBCentral,
    NotNormalExtension,
    TooLarge {
        size: usize,
        bound: usize,
    },
    BasisMismatch,
    /// Two independent computations of the same object disagree.
    InternalMismatch(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::AxiomViolation { axiom, witness } => write!(
                f,
                "axiom violated: {axiom} (witness {}, {}, {})",
                witness[0], witness[1], witness[2]
            ),
            Error::Malformed(msg) => write!(f, "malformed input: {msg}"),
            Error::NotHomomorphism { op, witness } => write!(
                f,
                "map does not preserve {op} at ({}, {})",
                witness[0], witness[1]
            ),
            Error::SignatureMismatch => f.write_str("algebras have different signatures"),
            Error::NotNormal => f.write_str("subset is not a normal subobject"),
            Error::NotSurjective => f.write_str("morphism is not surjective"),
            Error::NotCommutative => f.write_str("ring is not commutative"),
            Error::AmbientMismatch(msg) => write!(f, "reflector ambient mismatch: {msg}"),
            Error::NotBirkhoffInner => f.write_str("inner reflector is not Birkhoff"),
            Error::NotBCentral => f.write_str("extension is not central for the inner reflector"),
            Error::NotNormalExtension => f.write_str("extension is not normal"),
            Error::TooLarge { size, bound } => {
                write!(f, "size {size} exceeds the configured bound {bound}")
            }
            Error::BasisMismatch => f.write_str("generators do not match the group's basis"),
            Error::InternalMismatch(msg) => write!(f, "internal mismatch: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
