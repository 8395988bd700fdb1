//! One line per acceptance criterion; exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::{odd, sign, Mono, Pool};
use kt_core::algebra::{Density, FieldSpec, GradedPoly, IndexGroup, Indices, MultiIndex, Parity, Signature};
use kt_core::ansatz::{self, Bounds};
use kt_core::bf::{build_bf, verify_bf, VerifyOptions};
use kt_core::calculus::{divergence, euler_lagrange, total_derivative, GeneralizedVectorField, Side};
use kt_core::koszul_tate::{
    chain_terms, is_boundary, noether_search, noether_search_in, regularity_probe, KTComplex, StageFamily,
};
use kt_core::random::{self, KtRng};
use kt_core::{Error, Q};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Duration, limit_s: u64, what: &str) -> Result<(), String> {
    ensure(t.as_secs_f64() < limit_s as f64, format!("{what} took {:.1}s, limit {limit_s}s", t.as_secs_f64()))
}

fn criterion1() -> Outcome {
    let mut notes = Vec::new();
    for (n, limit) in [(2, 5), (3, 5), (4, 60)] {
        let t = Instant::now();
        let r = verify_bf(n, &VerifyOptions::for_dim(n, 1, 0)).map_err(|e| e.to_string())?;
        let elapsed = t.elapsed();
        let s = r.summary();
        ensure(s.fail == 0 && s.inconclusive == 0, format!("n={n}: {} fail, {} inconclusive", s.fail, s.inconclusive))?;
        // the identities themselves must be present, not just pass vacuously
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let names: Vec<&str> = json["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
        let count = |p: &str| names.iter().filter(|x| x.starts_with(p)).count();
        ensure(count("noether-identity") == n * (n - 1) / 2, format!("n={n}: noether identity count"))?;
        let stage_ids: usize = (0..n.saturating_sub(2)).map(|k| binomial(n, n - k - 3)).sum();
        ensure(count("stage-identity") == stage_ids, format!("n={n}: stage identity count"))?;
        let generators: usize = 1 + n + (0..=n - 2).map(|k| binomial(n, n - k - 2)).sum::<usize>();
        ensure(count("nilpotency[") == generators, format!("n={n}: nilpotency generator count"))?;
        within(elapsed, limit, &format!("n={n}"))?;
        notes.push(format!("n={n} {:.2}s", elapsed.as_secs_f64()));
    }
    Ok(notes.join(", "))
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn criterion2() -> Outcome {
    let t = Instant::now();
    let kt = build_bf(2).map_err(|e| e.to_string())?.complex;
    let basis = noether_search(&kt, &Bounds::new(1, 0));
    ensure(basis.basis.len() == 1, format!("dimension {}", basis.basis.len()))?;
    let sig = kt.signature();
    let bbar = sig.find("B_bar").unwrap();
    let oracle: GradedPoly = (1..=2u8)
        .map(|mu| {
            let v = sig.jet(bbar, [mu].into_iter().collect(), MultiIndex::new([mu]));
            (kt_core::algebra::Term::var(v), Q::from_integer(1.into()))
        })
        .collect();
    let found = &basis.basis[0];
    let scale = oracle.leading().unwrap().1 / found.leading().unwrap().1;
    ensure(found.scale(&scale) == oracle, format!("generator {}", found.to_text(sig)))?;
    within(t.elapsed(), 5, "search")?;
    Ok(format!("basis {{{}}}", found.to_text(sig)))
}

fn free_scalar() -> KTComplex {
    let mut sig = Signature::new(1);
    let y = sig.add(FieldSpec::field("y", Parity::Even, vec![])).unwrap();
    let y1 = GradedPoly::var(sig.jet(y, Indices::new(), MultiIndex::new([1])));
    let l = (&y1 * &y1).scale(&Q::new(1.into(), 2.into()));
    KTComplex::extend_with_antifields(sig, Density::new(l)).unwrap()
}

fn criterion3() -> Outcome {
    let t = Instant::now();
    let b = Bounds::new(2, 1);
    let free = noether_search(&free_scalar(), &b);
    ensure(free.basis.is_empty(), format!("free scalar basis has {} elements", free.basis.len()))?;
    let mut sizes = vec!["free scalar empty".to_string()];
    for n in [2, 3] {
        let m = build_bf(n).map_err(|e| e.to_string())?;
        let s = noether_search_in(&m.complex, &[m.a], &b);
        ensure(s.basis.is_empty(), format!("BF n={n} scalar sector basis has {} elements", s.basis.len()))?;
        sizes.push(format!("BF n={n} scalar sector empty"));
    }
    within(t.elapsed(), 5, "searches")?;
    Ok(sizes.join(", "))
}

fn criterion4() -> Outcome {
    let t = Instant::now();
    let pool = Pool::mixed(2, 0);
    let slots: Vec<_> = pool.fields.iter().map(|f| (*f, Indices::new())).collect();
    // currents of jet order <= 1 give divergences of jet order <= 2
    let terms = ansatz::coefficient_terms(&pool.sig, &slots, 1, 2, true);
    let mut rng = random::rng(4);
    let mut nonzero = 0;
    for i in 0..100 {
        let current: Vec<GradedPoly> = (0..2)
            .map(|_| {
                let k = rng.random_range(1..=4);
                random::combination(&mut rng, &terms, k)
            })
            .collect();
        let div = divergence(&current);
        if !div.is_zero() {
            nonzero += 1;
        }
        for e in euler_lagrange(&pool.sig, &Density::new(div)).values() {
            ensure(e.is_zero(), format!("divergence {i}: residual {}", e.to_text(&pool.sig)))?;
        }
    }
    ensure(nonzero >= 95, format!("only {nonzero} nonzero divergences"))?;
    within(t.elapsed(), 30, "100 divergences")?;
    Ok(format!("100/100 zero ({nonzero} nonzero inputs)"))
}

fn random_mono(rng: &mut KtRng, max: usize) -> Mono {
    let k = rng.random_range(0..=max);
    Mono {
        picks: (0..k).map(|_| rng.random_range(0..usize::MAX)).collect(),
        num: rng.random_range(1..=9) * if rng.random_bool(0.5) { -1 } else { 1 },
        den: rng.random_range(1..=4),
    }
}

fn random_poly(rng: &mut KtRng, pool: &Pool) -> GradedPoly {
    let k = rng.random_range(1..=3);
    (0..k).fold(GradedPoly::zero(), |acc, _| &acc + &pool.monomial(&random_mono(rng, 3)))
}

fn random_field(rng: &mut KtRng, pool: &Pool, side: Side) -> GeneralizedVectorField {
    let parity = Parity::from_odd(rng.random_bool(0.5));
    let mut x = GeneralizedVectorField::new(parity, side);
    for f in &pool.fields {
        let want = pool.sig.get(*f).parity.add(parity).is_odd();
        let mut v = pool.monomial(&random_mono(rng, 2));
        if odd(&v) != want {
            v = &v * &pool.var("psi", &[]);
        }
        x.set(*f, Indices::new(), v);
    }
    x
}

fn criterion5() -> Outcome {
    const N: usize = 100;
    let pool = Pool::mixed(2, 1);
    let mut rng = random::rng(5);
    let mut checked = 0;
    for i in 0..N {
        let a = pool.monomial(&random_mono(&mut rng, 3));
        let b = pool.monomial(&random_mono(&mut rng, 3));
        let c = random_poly(&mut rng, &pool);
        let p = random_poly(&mut rng, &pool);
        let fail = |law: &str| Err(format!("{law} fails on instance {i}"));

        if &a * &b != (&b * &a).scale(&sign(odd(&a) && odd(&b))) {
            return fail("graded commutativity");
        }
        let mut o = a.clone();
        if !odd(&o) {
            o = &o * &pool.var("chi", &[1]);
        }
        if !(&o * &o).is_zero() {
            return fail("odd square");
        }
        if &(&a * &c) * &p != &a * &(&c * &p) {
            return fail("associativity");
        }
        let (l, m) = (rng.random_range(1..=2u8), rng.random_range(1..=2u8));
        if total_derivative(&total_derivative(&p, l), m) != total_derivative(&total_derivative(&p, m), l) {
            return fail("d_l d_m symmetry");
        }
        let gen = &pool.gens[rng.random_range(0..pool.gens.len())];
        if let Some(v) = gen.variables().into_iter().next() {
            let lhs = (&a * &c).left_partial(&v);
            let rhs = &(&a.left_partial(&v) * &c) + &(&a * &c.left_partial(&v)).scale(&sign(v.odd && odd(&a)));
            if lhs != rhs {
                return fail("left partial Leibniz");
            }
            let lhs = (&c * &b).right_partial(&v);
            let rhs = &(&c * &b.right_partial(&v)) + &(&c.right_partial(&v) * &b).scale(&sign(v.odd && odd(&b)));
            if lhs != rhs {
                return fail("right partial Leibniz");
            }
        }
        let x = random_field(&mut rng, &pool, Side::Left);
        let xo = x.parity().is_odd();
        if x.apply(&(&a * &c)) != &(&x.apply(&a) * &c) + &(&a * &x.apply(&c)).scale(&sign(xo && odd(&a))) {
            return fail("left prolongation Leibniz");
        }
        let y = random_field(&mut rng, &pool, Side::Right);
        let yo = y.parity().is_odd();
        if y.apply(&(&c * &b)) != &(&c * &y.apply(&b)) + &(&y.apply(&c) * &b).scale(&sign(yo && odd(&b))) {
            return fail("right prolongation Leibniz");
        }
        checked += 1;
    }
    Ok(format!("8 laws x {checked} instances"))
}

fn criterion6() -> Outcome {
    let t = Instant::now();
    let mut rng = random::rng(6);
    let (mut evaluations, mut nonzero) = (0, 0);
    for n in [2, 3] {
        let kt = build_bf(n).map_err(|e| e.to_string())?.complex;
        let sig = kt.signature().clone();
        let anti = kt.antifield_slots(-1);
        let terms = chain_terms(&kt, &anti, 1, &Bounds::new(1, 1), None);
        for _ in 0..20 {
            let k = rng.random_range(1..=4);
            let phi = random::combination(&mut rng, &terms, k);
            let dphi = kt.delta(&phi);
            if !dphi.is_zero() {
                nonzero += 1;
            }
            for _ in 0..20 {
                let values: Vec<Q> = (0..64).map(|_| random::rational(&mut rng)).collect();
                let coords: Vec<Q> = (0..n).map(|_| random::rational(&mut rng)).collect();
                let var_value = |v: &kt_core::algebra::JetVariable| {
                    let i = (v.field.0 as usize * 8 + v.component.iter().map(|c| *c as usize).sum::<usize>()) % 64;
                    // constant configurations: every derivative vanishes
                    Some(if v.jet.is_empty() { values[i].clone() } else { Q::from_integer(0.into()) })
                };
                let coord_value = |l: u8| Some(coords[l as usize - 1].clone());
                let at = dphi.evaluate(&var_value, &coord_value);
                ensure(at.is_zero(), format!("n={n}: δΦ = {} evaluates to {}", dphi.to_text(&sig), at.to_text(&sig)))?;
                evaluations += 1;
            }
        }
    }
    ensure(nonzero >= 30, format!("only {nonzero} of 40 δΦ are nonzero polynomials"))?;
    within(t.elapsed(), 10, "evaluations")?;
    Ok(format!("{evaluations} exact evaluations are 0 ({nonzero} of 40 δΦ nonzero off-shell)"))
}

fn criterion7() -> Outcome {
    let t = Instant::now();
    let mut rng = random::rng(7);
    let mut found = 0;
    let bounds = Bounds::new(1, 1);
    for (n, count) in [(2, 25), (3, 25)] {
        let kt = build_bf(n).map_err(|e| e.to_string())?.complex;
        let terms = chain_terms(&kt, &kt.antifield_slots(isize::MAX), 2, &bounds.with_max_factors(2), None);
        let mut made = 0;
        while made < count {
            let k = rng.random_range(1..=3);
            let psi = random::combination(&mut rng, &terms, k);
            let phi = kt.delta(&psi);
            if phi.is_zero() {
                continue;
            }
            made += 1;
            let w = is_boundary(&kt, &phi, &bounds).map_err(|e| e.to_string())?;
            let w = w.ok_or_else(|| format!("n={n}: no witness for {}", phi.to_text(kt.signature())))?;
            ensure(kt.delta(&w) == phi, format!("n={n}: δ(witness) differs from Φ"))?;
            found += 1;
        }
    }
    within(t.elapsed(), 60, "50 boundary searches")?;
    Ok(format!("{found}/50 witnesses, δ(witness) = Φ exactly"))
}

fn criterion8() -> Outcome {
    let m = build_bf(3).map_err(|e| e.to_string())?;
    let kt = &m.complex;
    // rebuild with one stage-0 operator negated
    let mut fields = Signature::new(3);
    fields.add(FieldSpec::field("A", Parity::Even, vec![])).unwrap();
    fields.add(FieldSpec::field("B", Parity::Even, vec![IndexGroup::antisymmetric(2)])).unwrap();
    let base = KTComplex::extend_with_antifields(fields, kt.lagrangian().clone()).map_err(|e| e.to_string())?;
    let ops = &kt.stages()[0].operators;
    let mut fam = StageFamily::new("c0", vec![IndexGroup::antisymmetric(1)]);
    for (i, op) in ops.iter().enumerate() {
        let e = if i == 0 { -op.expression.clone() } else { op.expression.clone() };
        fam = fam.with(op.component.clone(), e);
    }
    let stage0 = base.register_stage(0, vec![fam]).map_err(|e| e.to_string())?;
    let c0 = stage0.stages()[0].families[0];
    let mut top = GradedPoly::zero();
    for rho in 1..=3u8 {
        top = &top + &GradedPoly::var(stage0.signature().jet(c0, [rho].into_iter().collect(), MultiIndex::new([rho])));
    }
    let residual = match stage0.register_stage(1, vec![StageFamily::scalar("c1", top)]) {
        Err(Error::NotNilpotent { residual, .. }) if !residual.is_empty() => residual,
        Err(e) => return Err(format!("unexpected error {e}")),
        Ok(_) => return Err("mutated complex registered".into()),
    };
    let unchecked = kt.check_nilpotency();
    ensure(unchecked.passed(), "unmutated complex fails")?;

    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/models/bf3_broken.kt");
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = kt_core::cli::run(["kt", "check", path], &mut out, &mut err);
    let out = String::from_utf8(out).unwrap();
    ensure(code == 1, format!("check exited {code}"))?;
    ensure(out.contains("[fail]") && out.contains("residual: "), "check output shows no residual")?;
    Ok(format!("register_stage residual {residual}; check exit 1"))
}

fn criterion9() -> Outcome {
    let t = Instant::now();
    let kt = build_bf(3).map_err(|e| e.to_string())?.complex;
    let bounds = Bounds::new(2, 0).with_max_factors(3);
    let mut notes = Vec::new();
    for k in 0..=1 {
        let r = regularity_probe(&kt, k, &bounds, 20, 9 + k as u64).map_err(|e| e.to_string())?;
        ensure(r.tested() > 0, format!("k={k}: nothing tested"))?;
        ensure(
            r.inconclusive.is_empty() && r.passed == r.tested(),
            format!("k={k}: {} of {} cycles without witness", r.inconclusive.len(), r.tested()),
        )?;
        notes.push(format!("k={k} {}/{}", r.passed, r.tested()));
    }
    within(t.elapsed(), 60, "probes")?;
    Ok(format!("{} cycles witnessed, {:.2}s", notes.join(", "), t.elapsed().as_secs_f64()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("BF tower verification, n = 2, 3, 4", criterion1),
        ("Noether search recovery, BF n = 2", criterion2),
        ("scalar sectors have empty bases", criterion3),
        ("Euler-Lagrange annihilates 100 divergences", criterion4),
        ("algebraic laws on randomized instances", criterion5),
        ("on-shell vanishing of δΦ, BF n = 2, 3", criterion6),
        ("boundary search soundness, 50 cycles", criterion7),
        ("mutation sensitivity, BF n = 3", criterion8),
        ("regularity probes, BF n = 3, k = 0..1, J = 2", criterion9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(note) => println!("PASS  {} {name} [{secs:.2}s] {note}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {} {name} [{secs:.2}s] {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
