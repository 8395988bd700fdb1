//! Bounded cycle and boundary searches for the Koszul-Tate complex.
//!
//! Every search builds an explicit finite ansatz (see [`crate::ansatz`]),
//! maps it through `δ` and solves exactly over the rationals. A negative
//! answer only means "not found within bounds".

use std::collections::{HashMap, HashSet};

use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::Rng;

use super::complex::KTComplex;
use crate::algebra::{FieldId, GradedPoly, Homogeneity, Indices, JetVariable, Term};
use crate::ansatz::{self, Bounds};
use crate::linalg::{self, BlockSolver, Echelon, Insert, SparseVec, TermIndex};
use crate::{random, Error, Result, Q};

/// Integer gradings preserved by `δ` up to a constant shift: every slot,
/// coordinate direction and the shift get a weight vector such that each
/// generator `g` and every term of `δg` differ by exactly the shift.
/// Used only to discard ansatz columns that cannot contribute.
#[derive(Clone, Debug)]
pub struct Grading {
    slots: HashMap<(FieldId, Indices), Vec<i64>>,
    dirs: Vec<Vec<i64>>,
    shift: Vec<i64>,
}

impl Grading {
    pub fn detect(kt: &KTComplex) -> Grading {
        let sig = kt.signature();
        let n = sig.dim();
        let ids: Vec<FieldId> = sig.ids().collect();
        let slots = sig.components_of(&ids);
        let slot_index: HashMap<(FieldId, Indices), usize> =
            slots.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let s = slots.len();
        let (dir0, shift_col) = (s, s + n);
        let unknowns = s + n + 1;
        let mut columns: Vec<Vec<(usize, Q)>> = vec![Vec::new(); unknowns];
        let mut row = 0usize;
        let d = kt.differential();
        for ((f, c), value) in d.coefficients() {
            let g = slot_index[&(*f, c.clone())];
            for (t, _) in value.terms() {
                let mut eq: HashMap<usize, i64> = HashMap::new();
                for (v, e) in t.vars() {
                    *eq.entry(slot_index[&v.slot()]).or_default() += *e as i64;
                    for &l in v.jet.indices() {
                        *eq.entry(dir0 + l as usize - 1).or_default() += *e as i64;
                    }
                }
                for &(l, p) in t.base() {
                    *eq.entry(dir0 + l as usize - 1).or_default() -= p as i64;
                }
                *eq.entry(g).or_default() -= 1;
                *eq.entry(shift_col).or_default() -= 1;
                for (u, x) in eq {
                    if x != 0 {
                        columns[u].push((row, Q::from_integer(x.into())));
                    }
                }
                row += 1;
            }
        }
        let columns: Vec<SparseVec> = columns.into_iter().map(linalg::sparse_from).collect();
        let kernel = linalg::kernel(&columns);
        let ints: Vec<Vec<i64>> = kernel.iter().map(|k| integerize(k, unknowns)).collect();
        let at = |u: usize| -> Vec<i64> { ints.iter().map(|k| k[u]).collect() };
        Grading {
            slots: slot_index.iter().map(|(slot, &i)| (slot.clone(), at(i))).collect(),
            dirs: (0..n).map(|l| at(dir0 + l)).collect(),
            shift: at(shift_col),
        }
    }

    pub fn dims(&self) -> usize {
        self.shift.len()
    }

    pub fn shift(&self) -> &[i64] {
        &self.shift
    }

    pub fn var(&self, v: &JetVariable) -> Vec<i64> {
        let mut g = self.slots[&v.slot()].clone();
        for &l in v.jet.indices() {
            add(&mut g, &self.dirs[l as usize - 1], 1);
        }
        g
    }

    pub fn term(&self, t: &Term) -> Vec<i64> {
        let mut g = vec![0; self.dims()];
        for (v, e) in t.vars() {
            add(&mut g, &self.var(v), *e as i64);
        }
        for &(l, p) in t.base() {
            add(&mut g, &self.dirs[l as usize - 1], -(p as i64));
        }
        g
    }
}

fn add(acc: &mut [i64], x: &[i64], k: i64) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a += k * b;
    }
}

fn integerize(v: &SparseVec, len: usize) -> Vec<i64> {
    let mut l = num_bigint::BigInt::one();
    for (_, x) in v {
        l = l.lcm(x.denom());
    }
    let mut out = vec![0i64; len];
    for (i, x) in v {
        let y = x * Q::from_integer(l.clone());
        out[*i] = y.to_integer().to_i64().expect("grading weights fit in i64");
    }
    out
}

/// Ansatz monomials `a·c` with `a` an antifield monomial of antifield number
/// `ant` over `anti_slots` and `c` a coefficient monomial, optionally kept
/// only if their grade shifted by `δ` lands in `targets`.
pub fn chain_terms(
    kt: &KTComplex,
    anti_slots: &[(FieldId, Indices)],
    ant: u32,
    bounds: &Bounds,
    filter: Option<(&Grading, &HashSet<Vec<i64>>)>,
) -> Vec<Term> {
    let sig = kt.signature();
    let anti = ansatz::antifield_terms(sig, anti_slots, bounds.jet_order, ant, bounds.max_factors);
    let coeff = ansatz::coefficient_terms(sig, &kt.field_slots(), bounds.jet_order, bounds.degree, true);
    let Some((grading, targets)) = filter else {
        return ansatz::product_terms(&anti, &coeff);
    };
    let cg: Vec<Vec<i64>> = coeff.iter().map(|c| grading.term(c)).collect();
    let mut out = Vec::new();
    for a in &anti {
        let mut ga = grading.term(a);
        add(&mut ga, grading.shift(), 1);
        for (c, g) in coeff.iter().zip(&cg) {
            let mut h = ga.clone();
            add(&mut h, g, 1);
            if targets.contains(&h) {
                if let Some((t, _)) = c.mul(a) {
                    out.push(t);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn term_poly(t: &Term) -> GradedPoly {
    GradedPoly::from_term(t.clone(), Q::one())
}

/// `δ` of every ansatz monomial, encoded over a shared row index.
fn images(kt: &KTComplex, terms: &[Term], rows: &mut TermIndex) -> Vec<SparseVec> {
    let d = kt.differential();
    let mut pr = d.prolong();
    terms.iter().map(|t| rows.encode(&pr.apply(&term_poly(t)))).collect()
}

fn combination(terms: &[Term], x: &SparseVec) -> GradedPoly {
    x.iter().map(|(j, c)| (terms[*j].clone(), c.clone())).collect()
}

fn homogeneous_ant(p: &GradedPoly) -> Result<u32> {
    match p.antifield_number() {
        Homogeneity::Any => Ok(0),
        Homogeneity::Pure(m) => Ok(m),
        Homogeneity::Mixed => Err(Error::Invalid("input is not homogeneous in antifield number".into())),
    }
}

/// `δ(Φ) = 0`.
pub fn is_cycle(kt: &KTComplex, phi: &GradedPoly) -> Result<bool> {
    homogeneous_ant(phi)?;
    Ok(kt.delta(phi).is_zero())
}

/// Solves `δΨ = Φ` for many right-hand sides over one fixed ansatz.
pub struct BoundarySolver {
    terms: Vec<Term>,
    rows: TermIndex,
    solver: BlockSolver,
}

impl BoundarySolver {
    /// Ansatz of antifield number `ant` in the sector `P{sector}`. With
    /// `targets`, columns whose image cannot meet any target are dropped.
    pub fn new(kt: &KTComplex, sector: isize, ant: u32, bounds: &Bounds, targets: Option<&[GradedPoly]>) -> Self {
        let slots = kt.antifield_slots(sector);
        let terms = match targets {
            Some(ts) => {
                let grading = Grading::detect(kt);
                let wanted: HashSet<Vec<i64>> =
                    ts.iter().flat_map(|p| p.terms().map(|(t, _)| grading.term(t)).collect::<Vec<_>>()).collect();
                chain_terms(kt, &slots, ant, bounds, Some((&grading, &wanted)))
            }
            None => chain_terms(kt, &slots, ant, bounds, None),
        };
        let mut rows = TermIndex::new();
        let columns = images(kt, &terms, &mut rows);
        BoundarySolver { terms, rows, solver: BlockSolver::new(columns) }
    }

    pub fn ansatz_size(&self) -> usize {
        self.terms.len()
    }

    pub fn solve(&mut self, phi: &GradedPoly) -> Option<GradedPoly> {
        if phi.is_zero() {
            return Some(GradedPoly::zero());
        }
        let rhs = self.rows.try_encode(phi)?;
        let x = self.solver.solve(&rhs)?;
        Some(combination(&self.terms, &x))
    }
}

/// Searches for `Ψ` with `δΨ = Φ` inside the full complex.
pub fn is_boundary(kt: &KTComplex, phi: &GradedPoly, bounds: &Bounds) -> Result<Option<GradedPoly>> {
    let m = homogeneous_ant(phi)?;
    if phi.is_zero() {
        return Ok(Some(GradedPoly::zero()));
    }
    if !kt.delta(phi).is_zero() {
        return Err(Error::Invalid("boundary search requires a cycle".into()));
    }
    let mut s = BoundarySolver::new(kt, isize::MAX, m + 1, bounds, Some(std::slice::from_ref(phi)));
    Ok(s.solve(phi))
}

/// Non-trivial one-cycles found by [`noether_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoetherBasis {
    /// Dimension of the cycle space inside the ansatz.
    pub cycles: usize,
    /// Dimension of the trivial cycles (boundaries) inside the ansatz.
    pub trivial: usize,
    /// Representatives of cycles modulo trivial ones, leading coefficient 1.
    pub basis: Vec<GradedPoly>,
}

/// Solves `Σ Φ^{A,Λ} d_Λ ℰ_A = 0` within bounds and quotients by the
/// trivial solutions `δ(T s̄ s̄)` inside the same bounds.
pub fn noether_search(kt: &KTComplex, bounds: &Bounds) -> NoetherBasis {
    noether_search_in(kt, kt.fields(), bounds)
}

/// As [`noether_search`] with the antifields restricted to those of `fields`.
pub fn noether_search_in(kt: &KTComplex, fields: &[FieldId], bounds: &Bounds) -> NoetherBasis {
    let space = NoetherSpace::build(kt, fields, bounds);
    let mut quotient = Echelon::new();
    for t in &space.trivial {
        quotient.insert(t.clone(), Vec::new());
    }
    let mut basis = Vec::new();
    for k in &space.cycles {
        if let Insert::Independent = quotient.insert(k.clone(), Vec::new()) {
            basis.push(normalized(combination(&space.terms, k)));
        }
    }
    NoetherBasis { cycles: space.cycles.len(), trivial: space.trivial.len(), basis }
}

/// Rank comparison between the bounded one-cycles and the span of the
/// given generators' consequences `c · d_Ξ Δ` (those inside the bounds),
/// both taken together with the trivial cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanCheck {
    pub cycles_rank: usize,
    pub generated_rank: usize,
    /// Generators whose consequences are not cycles.
    pub non_cycles: usize,
}

impl SpanCheck {
    pub fn complete(&self) -> bool {
        self.non_cycles == 0 && self.cycles_rank == self.generated_rank
    }
}

pub fn noether_span_check(kt: &KTComplex, generators: &[GradedPoly], bounds: &Bounds) -> SpanCheck {
    let space = NoetherSpace::build(kt, kt.fields(), bounds);
    let mut z = Echelon::new();
    let mut g = Echelon::new();
    for t in &space.trivial {
        z.insert(t.clone(), Vec::new());
        g.insert(t.clone(), Vec::new());
    }
    for k in &space.cycles {
        z.insert(k.clone(), Vec::new());
    }
    let sig = kt.signature();
    let coeff = ansatz::coefficient_terms(sig, &kt.field_slots(), bounds.jet_order, bounds.degree, true);
    let mut non_cycles = 0;
    for gen in generators {
        if !kt.delta(gen).is_zero() {
            non_cycles += 1;
            continue;
        }
        for xi in crate::algebra::MultiIndex::all_up_to(sig.dim(), bounds.jet_order) {
            let dg = crate::calculus::total_derivative_multi(gen, &xi);
            for c in &coeff {
                let p = dg.mul_term_left(c, &Q::one());
                let v: Option<Vec<(usize, Q)>> =
                    p.terms().map(|(t, x)| space.index.get(t).map(|&i| (i, x.clone()))).collect();
                if let Some(v) = v {
                    g.insert(linalg::sparse_from(v), Vec::new());
                }
            }
        }
    }
    SpanCheck { cycles_rank: z.rank(), generated_rank: g.rank(), non_cycles }
}

/// Bounded one-cycles and the trivial cycles inside the same bounds, both
/// as coordinate vectors over `terms`.
struct NoetherSpace {
    terms: Vec<Term>,
    index: HashMap<Term, usize>,
    cycles: Vec<SparseVec>,
    trivial: Vec<SparseVec>,
}

impl NoetherSpace {
    fn build(kt: &KTComplex, fields: &[FieldId], bounds: &Bounds) -> Self {
        let bars: Vec<FieldId> = fields.iter().filter_map(|&f| kt.antifield_of(f)).collect();
        let slots = kt.signature().components_of(&bars);
        let bounds = Bounds { max_factors: None, ..*bounds };

        let terms = chain_terms(kt, &slots, 1, &bounds, None);
        let mut rows = TermIndex::new();
        let cols = images(kt, &terms, &mut rows);
        let cycles = BlockSolver::new(cols).kernel();

        // Out-of-bounds rows first, so echelon vectors with in-bounds pivots
        // span the in-bounds part of the trivial span.
        let triv_terms = chain_terms(kt, &slots, 2, &bounds, None);
        let triv_images: Vec<GradedPoly> = {
            let d = kt.differential();
            let mut pr = d.prolong();
            triv_terms.iter().map(|t| pr.apply(&term_poly(t))).collect()
        };
        let index: HashMap<Term, usize> = terms.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let mut outside = TermIndex::new();
        for p in &triv_images {
            for (t, _) in p.terms() {
                if !index.contains_key(t) {
                    outside.intern(t);
                }
            }
        }
        let offset = outside.len();
        let mut ech = Echelon::new();
        for p in &triv_images {
            let v = linalg::sparse_from(p.terms().map(|(t, c)| {
                let i = index.get(t).map_or_else(|| outside.get(t).expect("interned above"), |&i| offset + i);
                (i, c.clone())
            }));
            ech.insert(v, Vec::new());
        }
        let trivial = ech
            .vectors_from(offset)
            .into_iter()
            .map(|v| v.into_iter().map(|(i, c)| (i - offset, c)).collect())
            .collect();
        NoetherSpace { terms, index, cycles, trivial }
    }
}

fn normalized(p: GradedPoly) -> GradedPoly {
    match p.leading() {
        Some((_, c)) => {
            let inv = Q::one() / c;
            p.scale(&inv)
        }
        None => p,
    }
}

/// Outcome of a regularity probe at one stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    pub stage: isize,
    /// Cycles from the kernel sweep.
    pub swept: usize,
    /// Cycles built as `δ(random Ψ)`.
    pub random: usize,
    pub passed: usize,
    /// Cycles for which no witness was found within bounds.
    pub inconclusive: Vec<GradedPoly>,
    pub witness_ansatz: usize,
}

impl ProbeReport {
    pub fn tested(&self) -> usize {
        self.swept + self.random
    }
}

/// Tests that cycles of `P{k}` at antifield number `k+3` are boundaries of
/// the next sector (`δ_{k+1}`, or the top differential when `k` is the top
/// stage). `k = -1` probes `s̄`-only two-cycles.
pub fn regularity_probe(
    kt: &KTComplex,
    k: isize,
    bounds: &Bounds,
    trials: usize,
    seed: u64,
) -> Result<ProbeReport> {
    let top = kt.stage_count() as isize - 1;
    if k < -1 || k > top {
        return Err(Error::Invalid(format!("probe stage {k} outside -1..={top}")));
    }
    let ant = (k + 3) as u32;
    let slots = kt.antifield_slots(k);

    let cycle_terms = chain_terms(kt, &slots, ant, bounds, None);
    let mut rows = TermIndex::new();
    let cols = images(kt, &cycle_terms, &mut rows);
    let mut cycles: Vec<GradedPoly> = BlockSolver::new(cols)
        .kernel()
        .iter()
        .map(|v| combination(&cycle_terms, v))
        .collect();
    let swept = cycles.len();

    let mut rng = random::rng(seed);
    let source = chain_terms(kt, &slots, ant + 1, bounds, None);
    let mut made = 0;
    if !source.is_empty() {
        let mut attempts = 0;
        while made < trials && attempts < trials * 10 {
            attempts += 1;
            let nterms = rng.random_range(1..=3);
            let psi = random::combination(&mut rng, &source, nterms);
            let phi = kt.delta(&psi);
            if !phi.is_zero() {
                cycles.push(phi);
                made += 1;
            }
        }
    }

    // δ trades an antifield factor for an antifield-free expression, so
    // witnesses may carry one more factor (and one more degree) than Φ
    let witness_bounds = Bounds {
        degree: bounds.degree + 1,
        max_factors: bounds.max_factors.map(|m| m + 1),
        ..*bounds
    };
    let sector = (k + 1).min(top);
    let mut solver = BoundarySolver::new(kt, sector, ant + 1, &witness_bounds, Some(&cycles));
    let mut passed = 0;
    let mut inconclusive = Vec::new();
    for phi in cycles {
        match solver.solve(&phi) {
            Some(_) => passed += 1,
            None => inconclusive.push(phi),
        }
    }
    Ok(ProbeReport {
        stage: k,
        swept,
        random: made,
        passed,
        inconclusive,
        witness_ansatz: solver.ansatz_size(),
    })
}

/// Cycles `Σ G^Λ c̄_Λ` linear in the top-stage antifields with
/// antifield-number-zero coefficients `G` inside the bounds.
pub fn top_linear_cycles(kt: &KTComplex, bounds: &Bounds) -> Vec<GradedPoly> {
    let Some(top) = kt.stages().last() else { return Vec::new() };
    let slots = kt.signature().components_of(&top.families);
    let sig = kt.signature();
    let coeff = ansatz::coefficient_terms(sig, &kt.field_slots(), bounds.jet_order, bounds.degree, true);
    let anti: Vec<Term> = ansatz::jets_of(sig, &slots, bounds.jet_order).into_iter().map(Term::var).collect();
    let terms = ansatz::product_terms(&anti, &coeff);
    let mut rows = TermIndex::new();
    let cols = images(kt, &terms, &mut rows);
    BlockSolver::new(cols)
        .kernel()
        .iter()
        .map(|v| normalized(combination(&terms, v)))
        .collect()
}

/// Antifield number of a homogeneous chain (0 for the zero chain).
pub fn antifield_number(p: &GradedPoly) -> Result<u32> {
    homogeneous_ant(p)
}
