use std::fmt;

use smallvec::SmallVec;

use super::jet::JetVariable;
use super::multi_index::MultiIndex;
use crate::{Error, Result};

/// Concrete component index tuple of a field (1-based base indices).
pub type Indices = SmallVec<[u8; 4]>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_odd(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Self {
        Parity::from_odd(!self.is_odd())
    }

    /// Sum in Z/2.
    pub fn add(self, other: Parity) -> Parity {
        Parity::from_odd(self.is_odd() ^ other.is_odd())
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symmetry {
    /// Every index tuple is an independent component.
    None,
    /// Only strictly increasing tuples are stored; permutations pick up a sign.
    Antisymmetric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IndexGroup {
    pub count: usize,
    pub symmetry: Symmetry,
}

impl IndexGroup {
    pub fn plain(count: usize) -> Self {
        IndexGroup { count, symmetry: Symmetry::None }
    }

    pub fn antisymmetric(count: usize) -> Self {
        IndexGroup { count, symmetry: Symmetry::Antisymmetric }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldRole {
    Field,
    /// `s̄_A` shadowing the given field.
    Antifield { of: FieldId },
    /// `c̄_{r_k}` of stage `k`.
    StageAntifield { stage: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldId(pub u32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub name: String,
    pub parity: Parity,
    pub antifield_number: u32,
    pub index_groups: Vec<IndexGroup>,
    pub role: FieldRole,
}

impl FieldSpec {
    pub fn field(name: impl Into<String>, parity: Parity, index_groups: Vec<IndexGroup>) -> Self {
        FieldSpec {
            name: name.into(),
            parity,
            antifield_number: 0,
            index_groups,
            role: FieldRole::Field,
        }
    }

    pub fn arity(&self) -> usize {
        self.index_groups.iter().map(|g| g.count).sum()
    }

    /// Canonical components in lexicographic order.
    pub fn components(&self, n: usize) -> Vec<Indices> {
        let mut out: Vec<Indices> = vec![Indices::new()];
        for group in &self.index_groups {
            let tuples = group_tuples(n, *group);
            let mut next = Vec::with_capacity(out.len() * tuples.len());
            for prefix in &out {
                for t in &tuples {
                    let mut c = prefix.clone();
                    c.extend_from_slice(t);
                    next.push(c);
                }
            }
            out = next;
        }
        out
    }

    /// Brings an arbitrary index tuple to canonical form. Returns `None` when
    /// the component vanishes (a repeated index inside an antisymmetric group),
    /// otherwise the canonical tuple and the permutation sign.
    pub fn canonicalize(&self, indices: &[u8]) -> Option<(Indices, i32)> {
        debug_assert_eq!(indices.len(), self.arity());
        let mut out = Indices::new();
        let mut sign = 1;
        let mut offset = 0;
        for group in &self.index_groups {
            let chunk = &indices[offset..offset + group.count];
            offset += group.count;
            match group.symmetry {
                Symmetry::None => out.extend_from_slice(chunk),
                Symmetry::Antisymmetric => {
                    let mut v: SmallVec<[u8; 4]> = SmallVec::from_slice(chunk);
                    // insertion sort, counting transpositions
                    for i in 1..v.len() {
                        let mut j = i;
                        while j > 0 && v[j - 1] > v[j] {
                            v.swap(j - 1, j);
                            sign = -sign;
                            j -= 1;
                        }
                    }
                    if v.windows(2).any(|w| w[0] == w[1]) {
                        return None;
                    }
                    out.extend_from_slice(&v);
                }
            }
        }
        Some((out, sign))
    }
}

fn group_tuples(n: usize, group: IndexGroup) -> Vec<Indices> {
    let mut out: Vec<Indices> = vec![Indices::new()];
    for _ in 0..group.count {
        let mut next = Vec::new();
        for t in &out {
            let start = match group.symmetry {
                Symmetry::None => 1,
                Symmetry::Antisymmetric => t.last().map_or(1, |&l| l + 1),
            };
            for i in start..=n as u8 {
                let mut c = t.clone();
                c.push(i);
                next.push(c);
            }
        }
        out = next;
    }
    out
}

/// The declared variables of a model: base dimension, coordinate names and
/// every field, antifield and stage antifield in declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    n: usize,
    coords: Vec<String>,
    fields: Vec<FieldSpec>,
}

impl Signature {
    pub fn new(n: usize) -> Self {
        let coords = (1..=n).map(|i| format!("x{i}")).collect();
        Signature { n, coords, fields: Vec::new() }
    }

    pub fn with_coords(n: usize, coords: Vec<String>) -> Result<Self> {
        if coords.len() != n {
            return Err(Error::Invalid(format!(
                "{} coordinate names given for base dimension {n}",
                coords.len()
            )));
        }
        Ok(Signature { n, coords, fields: Vec::new() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coord_name(&self, lambda: u8) -> &str {
        &self.coords[lambda as usize - 1]
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn add(&mut self, spec: FieldSpec) -> Result<FieldId> {
        if self.find(&spec.name).is_some() {
            return Err(Error::Invalid(format!("duplicate field name `{}`", spec.name)));
        }
        self.fields.push(spec);
        Ok(FieldId(self.fields.len() as u32 - 1))
    }

    pub fn get(&self, id: FieldId) -> &FieldSpec {
        &self.fields[id.0 as usize]
    }

    pub fn find(&self, name: &str) -> Option<FieldId> {
        self.fields
            .iter()
            .position(|f| f.name == name)
            .map(|i| FieldId(i as u32))
    }

    pub fn ids(&self) -> impl Iterator<Item = FieldId> + '_ {
        (0..self.fields.len() as u32).map(FieldId)
    }

    pub fn specs(&self) -> impl Iterator<Item = (FieldId, &FieldSpec)> + '_ {
        self.fields.iter().enumerate().map(|(i, f)| (FieldId(i as u32), f))
    }

    /// Jet variable for an already canonical component.
    pub fn jet(&self, field: FieldId, component: Indices, jet: MultiIndex) -> JetVariable {
        let spec = self.get(field);
        JetVariable {
            antifield_number: spec.antifield_number,
            field,
            component,
            jet,
            odd: spec.parity.is_odd(),
        }
    }

    /// Jet variable for an arbitrary index tuple, together with the sign picked
    /// up by canonicalization; `None` if the component vanishes identically.
    pub fn jet_signed(
        &self,
        field: FieldId,
        indices: &[u8],
        jet: MultiIndex,
    ) -> Result<Option<(JetVariable, i32)>> {
        let spec = self.get(field);
        if indices.len() != spec.arity() {
            return Err(Error::Invalid(format!(
                "`{}` takes {} indices, got {}",
                spec.name,
                spec.arity(),
                indices.len()
            )));
        }
        if let Some(&bad) = indices.iter().chain(jet.indices()).find(|&&i| i == 0 || i as usize > self.n) {
            return Err(Error::Invalid(format!("index {bad} out of range 1..={}", self.n)));
        }
        Ok(spec
            .canonicalize(indices)
            .map(|(c, sign)| (self.jet(field, c, jet), sign)))
    }

    /// Every `(field, component)` pair of the given fields.
    pub fn components_of(&self, fields: &[FieldId]) -> Vec<(FieldId, Indices)> {
        fields
            .iter()
            .flat_map(|&f| {
                self.get(f)
                    .components(self.n)
                    .into_iter()
                    .map(move |c| (f, c))
            })
            .collect()
    }

    pub fn format_var(&self, v: &JetVariable) -> String {
        let mut s = self.get(v.field).name.clone();
        if !v.component.is_empty() {
            s.push('[');
            for (i, c) in v.component.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                s.push_str(&c.to_string());
            }
            s.push(']');
        }
        if !v.jet.is_empty() {
            s.push('_');
            s.push_str(&v.jet.to_string());
        }
        s
    }

    pub fn format_component(&self, field: FieldId, component: &[u8]) -> String {
        self.format_var(&self.jet(field, Indices::from_slice(component), MultiIndex::empty()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antisymmetric_components_are_strictly_increasing() {
        let b = FieldSpec::field("B", Parity::Even, vec![IndexGroup::antisymmetric(2)]);
        let comps = b.components(4);
        assert_eq!(comps.len(), 6);
        assert!(comps.iter().all(|c| c[0] < c[1]));
    }

    #[test]
    fn canonicalize_signs() {
        let b = FieldSpec::field("B", Parity::Even, vec![IndexGroup::antisymmetric(3)]);
        assert_eq!(b.canonicalize(&[1, 2, 3]).unwrap().1, 1);
        assert_eq!(b.canonicalize(&[2, 1, 3]).unwrap().1, -1);
        assert_eq!(b.canonicalize(&[3, 1, 2]).unwrap().1, 1);
        assert!(b.canonicalize(&[1, 1, 3]).is_none());
    }

    #[test]
    fn mixed_groups() {
        let t = FieldSpec::field(
            "T",
            Parity::Even,
            vec![IndexGroup::antisymmetric(2), IndexGroup::plain(1)],
        );
        assert_eq!(t.components(3).len(), 9);
        let (c, s) = t.canonicalize(&[2, 1, 2]).unwrap();
        assert_eq!(c.as_slice(), &[1, 2, 2]);
        assert_eq!(s, -1);
    }
}
