#![allow(dead_code)]

use kt_core::algebra::{FieldId, FieldSpec, GradedPoly, Homogeneity, Indices, MultiIndex, Parity, Signature};
use kt_core::Q;
use proptest::prelude::*;

/// Generators of a test algebra: jets of a few fields plus base coordinates.
pub struct Pool {
    pub sig: Signature,
    pub fields: Vec<FieldId>,
    pub gens: Vec<GradedPoly>,
}

impl Pool {
    pub fn new(sig: Signature, jet_order: usize, with_coords: bool) -> Pool {
        let n = sig.dim();
        let mut gens = Vec::new();
        let fields: Vec<FieldId> = sig.ids().collect();
        for &f in &fields {
            for c in sig.get(f).components(n) {
                for l in MultiIndex::all_up_to(n, jet_order) {
                    gens.push(GradedPoly::var(sig.jet(f, c.clone(), l)));
                }
            }
        }
        if with_coords {
            for l in 1..=n as u8 {
                gens.push(GradedPoly::coord(l));
            }
        }
        Pool { sig, fields, gens }
    }

    /// Two even and two odd scalars on an `n`-dimensional base.
    pub fn mixed(n: usize, jet_order: usize) -> Pool {
        let mut sig = Signature::new(n);
        for (name, p) in [("y", Parity::Even), ("u", Parity::Even), ("psi", Parity::Odd), ("chi", Parity::Odd)] {
            sig.add(FieldSpec::field(name, p, vec![])).unwrap();
        }
        Pool::new(sig, jet_order, true)
    }

    pub fn monomial(&self, m: &Mono) -> GradedPoly {
        let mut p = GradedPoly::constant(Q::new(m.num.into(), i64::from(m.den).into()));
        for &i in &m.picks {
            p = &p * &self.gens[i % self.gens.len()];
        }
        p
    }

    pub fn poly(&self, ms: &[Mono]) -> GradedPoly {
        ms.iter().fold(GradedPoly::zero(), |acc, m| &acc + &self.monomial(m))
    }

    pub fn field(&self, name: &str) -> FieldId {
        self.sig.find(name).unwrap()
    }

    pub fn var(&self, name: &str, jet: &[u8]) -> GradedPoly {
        GradedPoly::var(self.sig.jet(self.field(name), Indices::new(), MultiIndex::new(jet.iter().copied())))
    }
}

#[derive(Clone, Debug)]
pub struct Mono {
    pub picks: Vec<usize>,
    pub num: i64,
    pub den: u8,
}

pub fn mono(max_factors: usize) -> impl Strategy<Value = Mono> {
    (prop::collection::vec(any::<usize>(), 0..=max_factors), -9i64..=9, 1u8..=4)
        .prop_map(|(picks, num, den)| Mono { picks, num: if num == 0 { 1 } else { num }, den })
}

pub fn polys(max_terms: usize, max_factors: usize) -> impl Strategy<Value = Vec<Mono>> {
    prop::collection::vec(mono(max_factors), 0..=max_terms)
}

/// Parity of a homogeneous polynomial; the zero polynomial counts as even.
pub fn odd(p: &GradedPoly) -> bool {
    match p.parity() {
        Homogeneity::Pure(q) => q.is_odd(),
        Homogeneity::Any => false,
        Homogeneity::Mixed => panic!("mixed parity"),
    }
}

pub fn sign(neg: bool) -> Q {
    Q::from_integer(if neg { (-1).into() } else { 1.into() })
}
