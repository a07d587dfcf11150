//! Represented spaces: descriptors, the signed-digit real codec, and
//! hyperspaces of open/closed sets with positive/negative information.

pub mod real;
pub mod sets;

pub use real::{
    decode_real_prefix, decode_unit_binary_prefix, encode_rational, literal_binary_fraction,
    literal_real_value, real_affine_machine, real_name_from_fn, real_product_machine,
    sqrt_rational_name, translate_binary_to_signed, DigitEmitter, MalformedName, RealPrefixInfo,
};
pub use sets::{
    closed_consistent_at_depth, closed_set_excluding, dense_witness, open_choice,
    open_set_all_extensions, open_set_from_words, parse_entries, ClosedSetName, Consistency,
    DenseSequence, EntryScan, OpenSetName, Word, WordSet,
};

use crate::names::Alphabet;

/// A represented space of the catalog. `Power(x, k)` is the flat k-fold
/// product whose names interleave k component names round-robin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceDescriptor {
    Nat,
    Finite(u64),
    Cantor,
    Baire,
    Sierpinski,
    RealSigned,
    UnitBinary,
    Open(Box<SpaceDescriptor>),
    Closed(Box<SpaceDescriptor>),
    Product(Box<SpaceDescriptor>, Box<SpaceDescriptor>),
    Coproduct(Box<SpaceDescriptor>, Box<SpaceDescriptor>),
    Power(Box<SpaceDescriptor>, usize),
}

impl SpaceDescriptor {
    pub fn product(l: SpaceDescriptor, r: SpaceDescriptor) -> Self {
        SpaceDescriptor::Product(Box::new(l), Box::new(r))
    }

    pub fn coproduct(l: SpaceDescriptor, r: SpaceDescriptor) -> Self {
        SpaceDescriptor::Coproduct(Box::new(l), Box::new(r))
    }

    pub fn power(of: SpaceDescriptor, k: usize) -> Self {
        SpaceDescriptor::Power(Box::new(of), k)
    }

    pub fn closed(of: SpaceDescriptor) -> Self {
        SpaceDescriptor::Closed(Box::new(of))
    }

    pub fn open(of: SpaceDescriptor) -> Self {
        SpaceDescriptor::Open(Box::new(of))
    }

    /// Alphabet of the names of this space.
    pub fn name_alphabet(&self) -> Alphabet {
        match self {
            SpaceDescriptor::Cantor | SpaceDescriptor::UnitBinary | SpaceDescriptor::Sierpinski => {
                Alphabet::Binary
            }
            SpaceDescriptor::Finite(k) => Alphabet::Finite(*k),
            SpaceDescriptor::Nat
            | SpaceDescriptor::Baire
            | SpaceDescriptor::RealSigned
            | SpaceDescriptor::Open(_)
            | SpaceDescriptor::Closed(_) => Alphabet::Natural,
            SpaceDescriptor::Product(l, r) => l.name_alphabet().join(&r.name_alphabet()),
            SpaceDescriptor::Coproduct(l, r) => {
                // tag symbol plus payload
                Alphabet::Finite(2).join(&l.name_alphabet()).join(&r.name_alphabet())
            }
            SpaceDescriptor::Power(of, _) => of.name_alphabet(),
        }
    }

    /// Whether the standard representation of this space is injective.
    /// Gates the advice-composition lemma: the inner advice space must have
    /// an injective representation. Signed-digit reals and Sierpinski space
    /// are flagged non-injective; so is the unit interval under the binary
    /// representation (dyadic collisions) and the hyperspaces (enumeration
    /// order).
    pub fn injective_representation(&self) -> bool {
        match self {
            SpaceDescriptor::Nat
            | SpaceDescriptor::Finite(_)
            | SpaceDescriptor::Cantor
            | SpaceDescriptor::Baire => true,
            SpaceDescriptor::Sierpinski
            | SpaceDescriptor::RealSigned
            | SpaceDescriptor::UnitBinary
            | SpaceDescriptor::Open(_)
            | SpaceDescriptor::Closed(_) => false,
            SpaceDescriptor::Product(l, r) | SpaceDescriptor::Coproduct(l, r) => {
                l.injective_representation() && r.injective_representation()
            }
            SpaceDescriptor::Power(of, _) => of.injective_representation(),
        }
    }
}

impl std::fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpaceDescriptor::Nat => write!(f, "N"),
            SpaceDescriptor::Finite(k) => write!(f, "{{1..{k}}}"),
            SpaceDescriptor::Cantor => write!(f, "2^N"),
            SpaceDescriptor::Baire => write!(f, "N^N"),
            SpaceDescriptor::Sierpinski => write!(f, "S"),
            SpaceDescriptor::RealSigned => write!(f, "R"),
            SpaceDescriptor::UnitBinary => write!(f, "I"),
            SpaceDescriptor::Open(x) => write!(f, "O({x})"),
            SpaceDescriptor::Closed(x) => write!(f, "A({x})"),
            SpaceDescriptor::Product(l, r) => write!(f, "({l}x{r})"),
            SpaceDescriptor::Coproduct(l, r) => write!(f, "({l}+{r})"),
            SpaceDescriptor::Power(x, k) => write!(f, "{x}^{k}"),
        }
    }
}
