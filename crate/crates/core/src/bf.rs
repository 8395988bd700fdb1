//! The topological BF model in `n` dimensions and its end-to-end verifier.
//!
//! Fields: an even scalar `A` and an even antisymmetric `(n-1)`-form `B`
//! stored by strictly increasing components. The Lagrangian is
//! `A · Σ ε^{μI} d_μ B_I` summed over independent components `I`, which
//! gives `ℰ_A = ε^{μν…} d_μ B_{ν…}` and `ℰ^I = -ε^{μI} d_μ A` with unit
//! normalization. The identity tower has `n-1` stages:
//!
//! * stage 0, family `c0` with `n-2` antisymmetric indices:
//!   `Δ^J = d_ν B_bar^{νJ}`;
//! * stage `k ≥ 1`, family `c{k}` with `n-2-k` indices:
//!   `Δ^J = d_μ c{k-1}^{μJ}`.
//!
//! Stage-`k` antifields have antifield number `k+2` and parity `k mod 2`.

use std::time::Instant;

use serde_json::json;

use crate::algebra::{Density, FieldId, FieldSpec, GradedPoly, IndexGroup, Indices, MultiIndex, Parity, Signature};
use crate::ansatz::Bounds;
use crate::calculus::total_derivative;
use crate::koszul_tate::{self, KTComplex, StageFamily};
use crate::report::{Check, Report};
use crate::{Error, Result, Q};

/// Largest supported base dimension.
pub const MAX_DIM: usize = 5;

#[derive(Clone, Debug)]
pub struct BFModel {
    pub n: usize,
    pub a: FieldId,
    pub b: FieldId,
    pub complex: KTComplex,
}

/// Sign of the permutation `idx` of `1..=n`, 0 if an index repeats.
pub fn levi_civita(idx: &[u8]) -> i32 {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return 0;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        0
    } else {
        sign
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `L = A · Σ_{μ, I} ε^{μI} d_μ B_I` over strictly increasing `I`.
pub fn bf_lagrangian(sig: &Signature, a: FieldId, b: FieldId) -> GradedPoly {
    let n = sig.dim();
    let av = GradedPoly::var(sig.jet(a, Indices::new(), MultiIndex::empty()));
    let mut inner = GradedPoly::zero();
    for comp in sig.get(b).components(n) {
        for mu in 1..=n as u8 {
            let mut idx = vec![mu];
            idx.extend_from_slice(&comp);
            let e = levi_civita(&idx);
            if e != 0 {
                let bv = sig.jet(b, comp.clone(), MultiIndex::new([mu]));
                inner.add_term(crate::algebra::Term::var(bv), Q::from_integer(e.into()));
            }
        }
    }
    av * inner
}

/// `Σ_ν d_ν X^{νJ}` for an antisymmetric family `X`, canonicalizing `νJ`.
fn divergence_of(sig: &Signature, x: FieldId, j: &[u8]) -> Result<GradedPoly> {
    let n = sig.dim();
    let mut out = GradedPoly::zero();
    for nu in 1..=n as u8 {
        let mut idx = vec![nu];
        idx.extend_from_slice(j);
        if let Some((v, sign)) = sig.jet_signed(x, &idx, MultiIndex::new([nu]))? {
            out.add_term(crate::algebra::Term::var(v), Q::from_integer(sign.into()));
        }
    }
    Ok(out)
}

fn stage_family(sig: &Signature, k: usize, source: FieldId) -> Result<StageFamily> {
    let n = sig.dim();
    let arity = n - 2 - k;
    let groups = if arity == 0 { Vec::new() } else { vec![IndexGroup::antisymmetric(arity)] };
    let probe = FieldSpec::field("probe", Parity::Even, groups.clone());
    let mut fam = StageFamily::new(format!("c{k}"), groups);
    for j in probe.components(n) {
        let expr = divergence_of(sig, source, &j)?;
        fam = fam.with(j, expr);
    }
    Ok(fam)
}

pub fn build_bf(n: usize) -> Result<BFModel> {
    if !(2..=MAX_DIM).contains(&n) {
        return Err(Error::Invalid(format!("BF dimension {n} outside 2..={MAX_DIM}")));
    }
    let mut sig = Signature::new(n);
    let a = sig.add(FieldSpec::field("A", Parity::Even, vec![]))?;
    let b = sig.add(FieldSpec::field("B", Parity::Even, vec![IndexGroup::antisymmetric(n - 1)]))?;
    let l = bf_lagrangian(&sig, a, b);
    let mut kt = KTComplex::extend_with_antifields(sig, Density::new(l))?;
    let mut source = kt.antifield_of(b).expect("B has an antifield");
    for k in 0..=n - 2 {
        let fam = stage_family(kt.signature(), k, source)?;
        kt = kt.register_stage(k, vec![fam])?;
        source = kt.stages()[k].families[0];
    }
    Ok(BFModel { n, a, b, complex: kt })
}

/// Bounds used by [`verify_bf`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub bounds: Bounds,
    /// Cap on antifield factors in regularity probes.
    pub probe_factors: u32,
    pub probe_trials: usize,
    pub seed: u64,
}

impl VerifyOptions {
    pub fn new(jet_order: usize, degree: u32) -> Self {
        VerifyOptions { bounds: Bounds::new(jet_order, degree), probe_factors: 3, probe_trials: 20, seed: 1 }
    }

    /// Defaults for dimension `n`; the probe ansatz grows fast with `n`, so
    /// five dimensions probe with at most two antifield factors.
    pub fn for_dim(n: usize, jet_order: usize, degree: u32) -> Self {
        let mut o = VerifyOptions::new(jet_order, degree);
        if n >= 5 {
            o.probe_factors = 2;
        }
        o
    }
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions::new(1, 0)
    }
}

fn timed(report: &mut Report, f: impl FnOnce() -> Vec<Check>) {
    let t = Instant::now();
    let checks = f();
    let per = t.elapsed() / checks.len().max(1) as u32;
    for c in checks {
        report.push_timed(c, per);
    }
}

fn label(name: &str, j: &[u8]) -> String {
    if j.is_empty() {
        name.to_string()
    } else {
        let v: Vec<String> = j.iter().map(|i| i.to_string()).collect();
        format!("{name}[{}]", v.join(","))
    }
}

/// Builds the model and checks the identity tower, nilpotency, the
/// Noether-operator span, regularity probes at every stage and the
/// top-sector triviality, all within the given bounds.
pub fn verify_bf(n: usize, opts: &VerifyOptions) -> Result<Report> {
    let mut report = Report::new(format!(
        "bf --dim {n} --jet-order {} --degree {} --probe-factors {}",
        opts.bounds.jet_order, opts.bounds.degree, opts.probe_factors
    ));
    let t = Instant::now();
    let model = build_bf(n)?;
    report.record_time("build", t.elapsed());
    let kt = &model.complex;
    let sig = kt.signature();

    report.push(if kt.stage_count() == n - 1 {
        Check::pass("stage-count").with_value(kt.stage_count())
    } else {
        Check::fail("stage-count", format!("{} stages, expected {}", kt.stage_count(), n - 1))
    });
    for (k, st) in kt.stages().iter().enumerate() {
        let want = binomial(n, n - k - 2);
        let got = st.operators.len();
        let name = format!("antifield-count[c{k}]");
        report.push(if got == want {
            Check::pass(name).with_value(got)
        } else {
            Check::fail(name, format!("{got} generators, expected {want}"))
        });
    }

    // (a) Noether identities d_ν ℰ^{νJ} = 0.
    timed(&mut report, || {
        let el = kt.euler_lagrange();
        let probe = FieldSpec::field("probe", Parity::Even, if n > 2 { vec![IndexGroup::antisymmetric(n - 2)] } else { vec![] });
        probe
            .components(n)
            .into_iter()
            .map(|j| {
                let mut sum = GradedPoly::zero();
                for nu in 1..=n as u8 {
                    let mut idx = vec![nu];
                    idx.extend_from_slice(&j);
                    if let Some((c, sign)) = sig.get(model.b).canonicalize(&idx) {
                        let e = &el[&(model.b, c)];
                        sum = sum + total_derivative(e, nu).scale(&Q::from_integer(sign.into()));
                    }
                }
                Check::zero(label("noether-identity", &j), sum.to_text(sig))
            })
            .collect()
    });

    // (b) stage identities d_μ Δ_k^{μJ} = 0.
    timed(&mut report, || {
        let mut out = Vec::new();
        for k in 0..n.saturating_sub(2) {
            let st = &kt.stages()[k];
            let fam = st.families[0];
            let spec = sig.get(fam);
            let arity = spec.index_groups.iter().map(|g| g.count).sum::<usize>();
            let probe = FieldSpec::field("probe", Parity::Even, if arity > 1 { vec![IndexGroup::antisymmetric(arity - 1)] } else { vec![] });
            for j in probe.components(n) {
                let mut sum = GradedPoly::zero();
                for mu in 1..=n as u8 {
                    let mut idx = vec![mu];
                    idx.extend_from_slice(&j);
                    if let Some((c, sign)) = spec.canonicalize(&idx) {
                        let op = st.operators.iter().find(|o| o.component == c).expect("component registered");
                        sum = sum + total_derivative(&op.expression, mu).scale(&Q::from_integer(sign.into()));
                    }
                }
                out.push(Check::zero(label(&format!("stage-identity[{k}]"), &j), sum.to_text(sig)));
            }
        }
        out
    });

    // (c) nilpotency on every generator.
    timed(&mut report, || {
        kt.check_nilpotency()
            .entries
            .into_iter()
            .map(|e| Check::zero(format!("nilpotency[{}]", e.generator), e.residual.to_text(sig)))
            .collect()
    });

    // (d) bounded one-cycles are generated by the stage-0 operators.
    timed(&mut report, || {
        let gens: Vec<GradedPoly> = kt.stages()[0].operators.iter().map(|o| o.expression.clone()).collect();
        let basis = koszul_tate::noether_search(kt, &opts.bounds);
        let span = koszul_tate::noether_span_check(kt, &gens, &opts.bounds);
        let name = "noether-search";
        let detail = format!(
            "cycles {}, trivial {}, rank(cycles) {}, rank(generated) {}",
            basis.cycles, basis.trivial, span.cycles_rank, span.generated_rank
        );
        let c = if span.complete() {
            Check::pass(name)
        } else if span.non_cycles > 0 {
            Check::fail(name, format!("{} stage-0 operators are not cycles", span.non_cycles))
        } else {
            Check::inconclusive(name)
        };
        vec![c.with_value(basis.basis.len()).with_detail(detail)]
    });

    // (e) regularity probes.
    for k in -1..=(n as isize - 2) {
        let bounds = opts.bounds.with_max_factors(opts.probe_factors);
        let name = format!("regularity[{k}]");
        let t = Instant::now();
        let r = koszul_tate::regularity_probe(kt, k, &bounds, opts.probe_trials, opts.seed.wrapping_add(k as u64))?;
        let detail = format!(
            "{} cycles ({} swept, {} random), {} witnessed, witness ansatz {}",
            r.tested(),
            r.swept,
            r.random,
            r.passed,
            r.witness_ansatz
        );
        let c = if r.inconclusive.is_empty() {
            Check::pass(&name)
        } else {
            Check::inconclusive(&name).with_witness(r.inconclusive[0].to_text(sig))
        };
        report.push_timed(c.with_value(r.tested()).with_detail(detail), t.elapsed());
    }

    // (f) no cycle linear in the top-stage antifield.
    timed(&mut report, || {
        let cycles = koszul_tate::top_linear_cycles(kt, &opts.bounds);
        let name = "top-sector";
        let mut unresolved = Vec::new();
        for c in &cycles {
            match koszul_tate::is_boundary(kt, c, &opts.bounds) {
                Ok(Some(_)) => {}
                _ => unresolved.push(c),
            }
        }
        let c = match unresolved.first() {
            None => Check::pass(name),
            Some(p) => Check::inconclusive(name).with_witness(p.to_text(sig)),
        };
        vec![c.with_value(json!({"cycles": cycles.len(), "unresolved": unresolved.len()}))]
    });

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_signs() {
        assert_eq!(levi_civita(&[1, 2, 3]), 1);
        assert_eq!(levi_civita(&[2, 1, 3]), -1);
        assert_eq!(levi_civita(&[2, 3, 1]), 1);
        assert_eq!(levi_civita(&[1, 1, 2]), 0);
        assert_eq!(levi_civita(&[4, 3, 2, 1]), 1);
    }

    #[test]
    fn two_dimensional_equations() {
        let m = build_bf(2).unwrap();
        let sig = m.complex.signature();
        let el = m.complex.euler_lagrange();
        assert_eq!(el[&(m.a, Indices::new())].to_text(sig), "-1*B[1]_(2) + 1*B[2]_(1)");
        assert_eq!(el[&(m.b, [1].into_iter().collect())].to_text(sig), "1*A_(2)");
        assert_eq!(el[&(m.b, [2].into_iter().collect())].to_text(sig), "-1*A_(1)");
    }

    #[test]
    fn tower_lengths_and_counts() {
        for n in 2..=4 {
            let m = build_bf(n).unwrap();
            assert_eq!(m.complex.stage_count(), n - 1);
            for (k, st) in m.complex.stages().iter().enumerate() {
                assert_eq!(st.operators.len(), binomial(n, n - k - 2));
                let spec = m.complex.signature().get(st.families[0]);
                assert_eq!(spec.antifield_number, k as u32 + 2);
                assert_eq!(spec.parity, Parity::from_odd(k % 2 == 1));
            }
        }
    }

    #[test]
    fn b_equations_are_antisymmetric() {
        let m = build_bf(3).unwrap();
        let sig = m.complex.signature();
        let el = m.complex.euler_lagrange();
        for i in 1..=3u8 {
            for j in 1..=3u8 {
                if i == j {
                    continue;
                }
                let (c, s) = sig.get(m.b).canonicalize(&[i, j]).unwrap();
                let (c2, s2) = sig.get(m.b).canonicalize(&[j, i]).unwrap();
                assert_eq!(c, c2);
                assert_eq!(el[&(m.b, c.clone())].scale(&Q::from_integer(s.into())), -el[&(m.b, c2)].scale(&Q::from_integer(s2.into())));
            }
        }
    }

    #[test]
    fn dimension_cap() {
        assert!(build_bf(1).is_err());
        assert!(build_bf(MAX_DIM + 1).is_err());
    }
}
