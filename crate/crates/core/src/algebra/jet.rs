use super::field::{FieldId, Indices, Parity};
use super::multi_index::MultiIndex;

/// A jet coordinate `s^A_Λ`.
///
/// The derived ordering is the canonical variable order used by every
/// normalized product: antifield number, then field declaration order, then
/// component tuple, then multi-index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetVariable {
    pub antifield_number: u32,
    pub field: FieldId,
    pub component: Indices,
    pub jet: MultiIndex,
    pub odd: bool,
}

impl JetVariable {
    pub fn parity(&self) -> Parity {
        Parity::from_odd(self.odd)
    }

    pub fn order(&self) -> usize {
        self.jet.order()
    }

    /// `s^A_{λ+Λ}`.
    pub fn raised(&self, lambda: u8) -> JetVariable {
        JetVariable {
            jet: self.jet.with(lambda),
            ..self.clone()
        }
    }

    /// `s^A_{Λ+Σ}`.
    pub fn raised_by(&self, sigma: &MultiIndex) -> JetVariable {
        JetVariable {
            jet: self.jet.merge(sigma),
            ..self.clone()
        }
    }

    /// The undifferentiated field component `s^A`.
    pub fn base(&self) -> JetVariable {
        JetVariable {
            jet: MultiIndex::empty(),
            ..self.clone()
        }
    }

    /// `(field, component)` key of the underlying generator.
    pub fn slot(&self) -> (FieldId, Indices) {
        (self.field, self.component.clone())
    }
}
