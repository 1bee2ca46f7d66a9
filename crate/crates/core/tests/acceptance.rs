//! Acceptance suite: one pass/fail line per criterion, nonzero exit on any failure.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use zvoa::affine_sl2::{act_divided, act_h_binom, fusion_oracle, hom_lattice, Generator, IrrModZ};
use zvoa::fock::{FockSpace, FockVector};
use zvoa::json::{hom_lattice_to_json, scan_report_to_json, symmetry_report_to_json, check_report_to_json};
use zvoa::scalars::{int, rat};
use zvoa::series::Window;
use zvoa::symfunc::{h_in_m, m_in_h, partitions_of, Partition};
use zvoa::vertexops::{axiom_suite, integrality_scan_with, intertwiner, symmetry_suite, IntertwinerSpec, ScanOptions, SuiteOptions};
use zvoa::{CosetLabel, Cyclotomic, DualVector, EvenLattice, Rational};

type Outcome = Result<String, String>;

fn a1() -> Arc<EvenLattice> {
    EvenLattice::from_i64(&[vec![2]]).unwrap()
}

fn a2() -> Arc<EvenLattice> {
    EvenLattice::from_i64(&[vec![2, -1], vec![-1, 2]]).unwrap()
}

fn lattices() -> [(&'static str, Arc<EvenLattice>); 2] {
    [("A1", a1()), ("A2", a2())]
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn duality_matrix() -> Outcome {
    let mut sizes = Vec::new();
    for (name, l) in lattices() {
        let fs = FockSpace::new(l.clone());
        for beta in l.cosets() {
            let dual = fs.dual_basis(&beta, &int(4)).map_err(|e| e.to_string())?;
            let std = fs.integral_basis(&l.coset_unchecked(&-beta.rep()), &int(4)).map_err(|e| e.to_string())?;
            ensure(dual.len() == std.len(), || format!("{name} {beta}: sizes {} and {}", dual.len(), std.len()))?;
            for (i, d) in dual.vectors.iter().enumerate() {
                for (j, s) in std.vectors.iter().enumerate() {
                    let p = fs.pair(d, s).map_err(|e| e.to_string())?;
                    let want = if i == j { p.is_one() } else { p.is_zero() };
                    ensure(want, || format!("{name} {beta}: entry ({i},{j}) = {p}"))?;
                }
            }
            sizes.push(format!("{name} {beta}: {}", dual.len()));
        }
    }
    Ok(format!("identity matrices ({})", sizes.join(", ")))
}

fn scan_cases() -> Vec<(&'static str, Arc<EvenLattice>, DualVector)> {
    vec![
        ("A1", a1(), DualVector(vec![rat(1, 2)])),
        ("A2", a2(), DualVector(vec![rat(1, 3), rat(2, 3)])),
    ]
}

fn integrality_scan_criterion() -> Outcome {
    let mut notes = Vec::new();
    for (name, l, b) in scan_cases() {
        let fs = FockSpace::new(l.clone());
        let c = l.coset(&b).unwrap();
        let opts = ScanOptions::default();
        let one = integrality_scan_with(&fs, &c, &c, &fs.one(), &int(2), &opts).map_err(|e| e.to_string())?;
        let half = integrality_scan_with(&fs, &c, &c, &fs.scalar(rat(1, 2)), &int(2), &opts).map_err(|e| e.to_string())?;
        ensure(one.pass && one.coordinates > 0, || format!("{name}: scale 1 has {} witnesses", one.witnesses.len()))?;
        ensure(!half.pass && !half.witnesses.is_empty(), || format!("{name}: scale 1/2 passed"))?;
        notes.push(format!(
            "{name}: {} coordinates integral at scale 1, {} witnesses at scale 1/2",
            one.coordinates,
            half.witnesses.len()
        ));
    }
    Ok(notes.join("; ") + " (cutoff 2)")
}

/// A random element of `coset` with small coordinates.
fn random_in(l: &EvenLattice, coset: &CosetLabel, rng: &mut ChaCha8Rng) -> DualVector {
    let shift: Vec<i64> = (0..l.rank()).map(|_| rng.gen_range(-2..=2)).collect();
    coset.rep() + &DualVector::from_ints(&shift)
}

fn pairing_closed_form() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut matched = 0;
    for (name, l) in lattices() {
        let fs = FockSpace::new(l.clone());
        let cosets = l.cosets();
        for t in 0..50 {
            let beta = &cosets[rng.gen_range(0..cosets.len())];
            let g = random_in(&l, beta, &mut rng);
            let opposite = l.coset_unchecked(&-beta.rep());
            let g2 = if t % 2 == 0 { -&g } else { random_in(&l, &opposite, &mut rng) };
            let b = beta.rep();
            let got = fs.pair(&fs.iota(&g).unwrap(), &fs.iota(&g2).unwrap()).map_err(|e| e.to_string())?;
            let want = if (&g + &g2).is_zero() {
                let gb = &g - &b.scale(&int(2));
                let base = l.exp_pi_i(&(l.pair(&gb, &g) / int(2))).unwrap()
                    * l.comm_c(&g, b).unwrap().inverse().unwrap()
                    * l.epsilon(&g, &g).unwrap().inverse().unwrap();
                let renorm = l.exp_pi_i(&(l.pair(b, b) / int(2))).unwrap() * l.comm_c(b, b).unwrap() * l.epsilon(b, b).unwrap();
                base * renorm
            } else {
                Cyclotomic::zero(l.field())
            };
            ensure(got == want, || format!("{name}: gamma = {g}, gamma' = {g2}: {got} vs {want}"))?;
            matched += 1;
        }
    }
    Ok(format!("{matched} pairs match the closed form"))
}

/// `x^{<b,g>} E^-(-b, x) iota(e_{b+g})` through shift `top`, from the exponential of
/// `sum_n b(-n) x^n / n`.
fn generator_oracle(fs: &FockSpace, b: &DualVector, g: &DualVector, top: usize) -> Vec<FockVector> {
    let start = fs.iota(&(b + g)).unwrap();
    let zero = FockVector::zero(start.coset().clone());
    // powers[k][j]: coefficient of x^j in S^k / k! applied to the start vector
    let mut out = vec![zero.clone(); top + 1];
    let mut cur = vec![zero.clone(); top + 1];
    cur[0] = start;
    for k in 0..=top {
        for j in 0..=top {
            out[j] = out[j].plus(&cur[j]);
        }
        let mut next = vec![zero.clone(); top + 1];
        for j in 0..=top {
            if cur[j].is_zero() {
                continue;
            }
            for n in 1..=top - j {
                let term = fs
                    .apply_mode(b, -(n as i64), &cur[j])
                    .unwrap()
                    .scale_rational(&Rational::new(1.into(), BigInt::from(n as i64 * (k as i64 + 1))));
                next[j + n] = next[j + n].plus(&term);
            }
        }
        cur = next;
    }
    out
}

fn leading_coefficients() -> Outcome {
    let mut checked = 0;
    for (name, l) in lattices() {
        let fs = FockSpace::new(l.clone());
        for beta in l.cosets() {
            for gamma in l.cosets() {
                let (b, g) = (beta.rep(), gamma.rep());
                let spec = IntertwinerSpec::normalized(&fs, &beta, &gamma, &fs.one());
                let lead = l.pair(b, g);
                let wt = l.norm(&(b + g));
                let top = (int(4) - &wt).floor().to_integer();
                if top < BigInt::zero() {
                    continue;
                }
                let top: usize = top.try_into().unwrap();
                let floor: i64 = lead.floor().to_integer().try_into().unwrap();
                let window = Window::new(floor - 2, floor + top as i64 + 1).unwrap();
                let s = intertwiner(&fs, &spec, &fs.iota(b).unwrap(), &fs.iota(g).unwrap(), window).map_err(|e| e.to_string())?;
                let want = generator_oracle(&fs, b, g, top);
                for k in -2..=top as i64 {
                    let p = &lead + int(k);
                    let got = s.coeff(&p).map_err(|e| e.to_string())?;
                    let expect = if k < 0 { FockVector::zero(got.coset().clone()) } else { want[k as usize].clone() };
                    ensure(got == expect, || format!("{name} beta = {b}, gamma = {g}, exponent {p}"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} coefficients match through weight 4 on all coset pairs"))
}

fn axiom_suite_criterion(artifacts: &mut BTreeMap<String, Value>) -> Outcome {
    let mut per_check: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for (name, l) in lattices() {
        let fs = FockSpace::new(l);
        let opts = SuiteOptions {
            instances: 100,
            seed: 11,
            max_weight: int(3),
            span: 2,
        };
        let cases = axiom_suite(&fs, &opts).map_err(|e| e.to_string())?;
        for c in &cases {
            ensure(c.report.pass, || format!("{name} instance {} ({}): {}", c.index, c.detail, c.report))?;
            let e = per_check.entry(c.report.name.clone()).or_default();
            e.0 += 1;
            if c.report.checked > 0 {
                e.1 += 1;
            }
        }
        artifacts.insert(
            format!("axioms_{name}"),
            Value::Array(cases.iter().map(|c| check_report_to_json(&c.report)).collect()),
        );
    }
    for (check, (n, nonvacuous)) in &per_check {
        ensure(*n >= 100 && *nonvacuous >= 100, || format!("{check}: {nonvacuous} nonvacuous of {n}"))?;
    }
    let parts: Vec<String> = per_check.iter().map(|(k, (n, nv))| format!("{k} {nv}/{n}")).collect();
    Ok(format!("all instances pass ({})", parts.join(", ")))
}

fn transform_suite(artifacts: &mut BTreeMap<String, Value>) -> Outcome {
    let mut total = 0;
    let mut nonvacuous = [0usize; 4];
    for (name, l) in lattices() {
        let fs = FockSpace::new(l);
        let opts = SuiteOptions {
            instances: 30,
            seed: 5,
            max_weight: int(3),
            span: 2,
        };
        let cases = symmetry_suite(&fs, &opts).map_err(|e| e.to_string())?;
        for c in &cases {
            ensure(c.report.pass(), || {
                let bad: Vec<String> = c.report.parts().iter().filter(|p| !p.pass).map(|p| p.to_string()).collect();
                format!("{name} instance {}: {}", c.index, bad.join("; "))
            })?;
            for (k, part) in c.report.parts().iter().enumerate() {
                if part.checked > 0 {
                    nonvacuous[k] += 1;
                }
            }
            total += 1;
        }
        artifacts.insert(
            format!("symmetries_{name}"),
            Value::Array(cases.iter().map(|c| symmetry_report_to_json(&c.report)).collect()),
        );
    }
    ensure(nonvacuous.iter().all(|&n| n >= 30), || format!("nonvacuous parts {nonvacuous:?}"))?;
    Ok(format!(
        "{total} instances pass; nonvacuous Omega-inverse {}, skew {}, adjunction {}, invariance {}",
        nonvacuous[0], nonvacuous[1], nonvacuous[2], nonvacuous[3]
    ))
}

fn symmetric_functions() -> Outcome {
    for n in 0..=8u32 {
        let parts = partitions_of(n);
        let m_h: Vec<BTreeMap<Partition, BigInt>> = parts.iter().map(m_in_h).collect();
        let h_m: BTreeMap<Partition, BTreeMap<Partition, BigInt>> = parts.iter().map(|p| (p.clone(), h_in_m(p))).collect();
        for (i, lam) in parts.iter().enumerate() {
            for mu in &parts {
                // m_lam = sum_nu A[lam][nu] h_nu = sum_nu A[lam][nu] sum_mu B[nu][mu] m_mu
                let s: BigInt = m_h[i].iter().map(|(nu, a)| a * h_m[nu].get(mu).cloned().unwrap_or_default()).sum();
                let want = if lam == mu { BigInt::one() } else { BigInt::zero() };
                ensure(s == want, || format!("degree {n}: entry ({lam:?}, {mu:?}) = {s}"))?;
            }
        }
    }
    let got = m_in_h(&Partition::new(vec![1, 1]));
    let want: BTreeMap<Partition, BigInt> =
        [(Partition::new(vec![1, 1]), BigInt::one()), (Partition::new(vec![2]), BigInt::from(-1))].into_iter().collect();
    ensure(got == want, || format!("m_(1,1) = {got:?}"))?;
    Ok(format!("inverse for degrees 0..8 ({} partitions of 8); m_(1,1) = h_(1,1) - h_(2)", partitions_of(8).len()))
}

/// The level-`l` fusion rule for `sl2` in closed form.
fn closed_form_fusion(l: u32, a: u32, b: u32, c: u32) -> usize {
    let ok = a.abs_diff(b) <= c && c <= a + b && (a + b + c).is_multiple_of(2) && a + b + c <= 2 * l;
    usize::from(ok)
}

fn affine_hom(artifacts: &mut BTreeMap<String, Value>) -> Outcome {
    let mut tuples = 0;
    let mut nonzero = 0;
    let mut table = Vec::new();
    for level in 0..=3 {
        for a in 0..=level {
            for b in 0..=level {
                for c in 0..=level {
                    let h = hom_lattice(level, a, b, c).map_err(|e| e.to_string())?;
                    let oracle = fusion_oracle(level, a, b, c).map_err(|e| e.to_string())?;
                    let closed = closed_form_fusion(level, a, b, c);
                    ensure(h.rank == oracle && oracle == closed, || {
                        format!("({level},{a},{b},{c}): lattice rank {}, oracle {oracle}, closed form {closed}", h.rank)
                    })?;
                    tuples += 1;
                    nonzero += usize::from(h.rank > 0);
                    table.push(hom_lattice_to_json(&h));
                }
            }
        }
    }
    for (t, want) in [((1, 1, 1, 0), 1), ((1, 1, 1, 1), 0), ((2, 1, 1, 2), 1)] {
        let r = hom_lattice(t.0, t.1, t.2, t.3).map_err(|e| e.to_string())?.rank;
        ensure(r == want, || format!("{t:?} has rank {r}"))?;
    }
    artifacts.insert("hom_lattices".into(), Value::Array(table));
    ensure(tuples == 100, || format!("{tuples} tuples"))?;
    Ok(format!("{tuples} tuples agree with the oracle and the closed form ({nonzero} nonzero); spot values hold"))
}

fn rat_matrix(m: &[Vec<BigInt>]) -> Vec<Vec<Rational>> {
    m.iter().map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect()
}

fn rat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    (0..a.len())
        .map(|i| (0..b[0].len()).map(|j| (0..b.len()).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
        .collect()
}

fn divided_power_and_l1() -> Outcome {
    let mut matrices = 0;
    for lam in 0..=6u32 {
        let v = IrrModZ::new(lam);
        let d = v.dim();
        let mut h_diag = vec![vec![Rational::zero(); d]; d];
        for k in 0..d {
            h_diag[k][k] = int(lam as i64 - 2 * k as i64);
        }
        for gen in [Generator::E, Generator::F] {
            let x = rat_matrix(&act_divided(gen, 1, v));
            let mut pow: Vec<Vec<Rational>> = (0..d).map(|i| (0..d).map(|j| if i == j { int(1) } else { int(0) }).collect()).collect();
            let mut fact = int(1);
            for m in 1..=7u32 {
                pow = rat_mul(&pow, &x);
                fact *= int(m as i64);
                let want: Vec<Vec<Rational>> = pow.iter().map(|r| r.iter().map(|c| c / &fact).collect()).collect();
                ensure(rat_matrix(&act_divided(gen, m, v)) == want, || format!("{gen:?}^({m}) on V({lam})"))?;
                ensure(want.iter().flatten().all(|c| c.is_integer()), || format!("{gen:?}^({m}) on V({lam}) not integral"))?;
                matrices += 1;
            }
        }
        for m in 0..=7i64 {
            // binom(h + m - 1, m) = prod_{i<m} (h + m - 1 - i) / (i + 1)
            let mut want: Vec<Vec<Rational>> = (0..d).map(|i| (0..d).map(|j| if i == j { int(1) } else { int(0) }).collect()).collect();
            for i in 0..m {
                for k in 0..d {
                    want[k][k] = &want[k][k] * (&h_diag[k][k] + int(m - 1 - i)) / int(i + 1);
                }
            }
            ensure(rat_matrix(&act_h_binom(m as u32, v)) == want, || format!("binom(h+{m}-1,{m}) on V({lam})"))?;
            matrices += 1;
        }
    }
    let fs = FockSpace::new(a1());
    let zero = fs.lattice().zero_coset();
    let basis = fs.integral_basis(&zero, &int(4)).map_err(|e| e.to_string())?;
    let dual = fs.dual_basis(&zero, &int(4)).map_err(|e| e.to_string())?;
    let mut images = 0;
    for b in &basis.vectors {
        let mut cur = b.clone();
        for n in 1..=4i64 {
            cur = fs.l_one(&cur).scale_rational(&Rational::new(1.into(), n.into()));
            let mut rebuilt = FockVector::zero(zero.clone());
            for (d, s) in dual.vectors.iter().zip(&basis.vectors) {
                let c = fs.pair(d, &cur).map_err(|e| e.to_string())?;
                ensure(c.is_rational_integer(), || format!("L(1)^{n}/{n}! image has coordinate {c}"))?;
                rebuilt.add_scaled(s, &c);
            }
            ensure(rebuilt == cur, || format!("L(1)^{n}/{n}! image leaves the span"))?;
            images += 1;
        }
    }
    Ok(format!(
        "{matrices} action matrices integral and equal to divided powers; {images} L(1) images in the integral span"
    ))
}

fn determinism_artifact(threads: usize) -> Result<String, String> {
    let mut out = BTreeMap::new();
    for (name, l, b) in scan_cases() {
        let fs = FockSpace::new(l.clone());
        let c = l.coset(&b).unwrap();
        let opts = ScanOptions {
            out_cutoff: None,
            threads: Some(threads),
        };
        for (tag, scale) in [("one", fs.one()), ("half", fs.scalar(rat(1, 2)))] {
            let r = integrality_scan_with(&fs, &c, &c, &scale, &int(2), &opts).map_err(|e| e.to_string())?;
            out.insert(format!("scan_{name}_{tag}"), scan_report_to_json(&r));
        }
        let cases = axiom_suite(&fs, &SuiteOptions::default()).map_err(|e| e.to_string())?;
        out.insert(format!("axioms_{name}"), Value::Array(cases.iter().map(|c| check_report_to_json(&c.report)).collect()));
    }
    Ok(serde_json::to_string_pretty(&json!(out)).unwrap())
}

fn determinism(artifacts: &BTreeMap<String, Value>) -> Outcome {
    let threads = std::thread::available_parallelism().map_or(4, |n| n.get()).max(2);
    let first = determinism_artifact(1)?;
    let second = determinism_artifact(threads)?;
    ensure(first == second, || "scan and suite artifacts differ between runs".into())?;
    let full = serde_json::to_string_pretty(&json!(artifacts)).unwrap();
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join("acceptance_artifacts.json");
    if let Ok(previous) = std::fs::read_to_string(&path) {
        ensure(previous == full, || format!("suite artifacts differ from the previous run at {}", path.display()))?;
    }
    std::fs::write(&path, &full).map_err(|e| e.to_string())?;
    Ok(format!(
        "{} bytes identical at 1 and {threads} threads; {} bytes of suite artifacts stored for cross-run comparison",
        first.len(),
        full.len()
    ))
}

fn main() {
    let mut artifacts = BTreeMap::new();
    let mut failed = 0;
    let mut report = |n: usize, title: &str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("criterion {n:>2} PASS [{secs:.1}s] {title}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n:>2} FAIL [{secs:.1}s] {title}: {msg}");
            }
        }
    };
    report(1, "duality matrix", &mut duality_matrix);
    report(2, "integrality scan", &mut integrality_scan_criterion);
    report(3, "pairing closed form", &mut pairing_closed_form);
    report(4, "leading coefficients", &mut leading_coefficients);
    report(5, "axiom suite", &mut || axiom_suite_criterion(&mut artifacts));
    report(6, "transform suite", &mut || transform_suite(&mut artifacts));
    report(7, "symmetric functions", &mut symmetric_functions);
    report(8, "affine Hom lattices", &mut || affine_hom(&mut artifacts));
    report(9, "divided powers and L(1)", &mut divided_power_and_l1);
    report(10, "determinism", &mut || determinism(&artifacts));
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria pass");
}
