//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints its own line; exits nonzero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::io::Write as _;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use wahlcheck::blowdown::{
    discrepancies, fiber_euler_audit, invariant_report, nef_ample_audit, pullback_canonical, solve_discrepancies,
    FiberType, NoetherCheck, Positivity,
};
use wahlcheck::construction::ConstructionFile;
use wahlcheck::exact::{gcd_list, Rational};
use wahlcheck::lattice::CurveRole;
use wahlcheck::pencil::{
    base_point_q, evaluate, is_node, line_through, member_singular_check, node_f1, node_f2, Pencil,
};
use wahlcheck::tchain::{
    boundary_lens, cf_value, cf_value_generic, exponent_sequence, hj_expand, hj_expand_generic, wahl_generate,
    wahl_recognize, BoundarySide, Chain, WahlParams,
};
use wahlcheck::vankampen::{main_chain, replay_paper_argument, second_chain, Argument};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn builtin(name: &str) -> ConstructionFile {
    ConstructionFile::builtin(name).expect("shipped construction")
}

fn within(label: &str, start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    if took > limit {
        return Err(format!("{label} took {took:?}, limit {limit:?}"));
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    for (n, q, chain) in [(63504, 36539, main_chain()), (33489, 6953, second_chain())] {
        let got = hj_expand(&big(n), &big(q)).map_err(|e| e.to_string())?;
        ensure!(got == chain, "hj_expand({n}, {q}) = {got}, expected {chain}");
        ensure!(cf_value(&got) == (big(n), big(q)), "cf_value({got}) = {:?}", cf_value(&got));
    }
    Ok("both chains expand and round-trip".into())
}

fn criterion_2() -> Outcome {
    for (chain, p, q) in [(main_chain(), 252, 145), (second_chain(), 183, 38)] {
        let got = wahl_recognize(&chain).ok_or_else(|| format!("{chain} not recognized"))?;
        ensure!(got.p == big(p) && got.q == big(q), "{chain} gave ({}, {})", got.p, got.q);
    }
    Ok("C_{252,145}, C_{183,38}".into())
}

fn criterion_3() -> Outcome {
    let main = exponent_sequence(&main_chain());
    for (i, v) in [(3, 5), (6, 26), (12, 9574)] {
        ensure!(*main.get(i) == big(v), "main c{i} = {}", main.get(i));
    }
    ensure!(main.n == big(63504), "main n = {}", main.n);
    let second = exponent_sequence(&second_chain());
    ensure!(*second.get(12) == big(1276), "second c12 = {}", second.get(12));
    ensure!(second.get(12) * 2u32 == big(2552), "doubled exponent");
    ensure!(second.n == big(183 * 183), "second n = {}", second.n);
    Ok("c3=5 c6=26 c12=9574 n=63504; c12=1276 2c12=2552 n=183^2".into())
}

fn criterion_4() -> Outcome {
    let mut summary = Vec::new();
    for which in [Argument::Main, Argument::Second] {
        let report = replay_paper_argument(which).map_err(|e| e.to_string())?;
        let step = |s: &str| report.steps.iter().find(|x| x.statement == s).map(|x| x.value.clone());
        let wanted: &[(&str, &str)] = match which {
            Argument::Main => &[("9574 mod 26", "6"), ("gcd(65, 63504)", "1")],
            Argument::Second => &[("8*11*29", "2552"), ("gcd(2552, 33489)", "1")],
        };
        for &(s, v) in wanted {
            ensure!(step(s).as_deref() == Some(v), "{which:?}: step {s} = {:?}", step(s));
            summary.push(format!("{s} = {v}"));
        }
    }
    Ok(summary.join("; "))
}

fn criterion_5() -> Outcome {
    let lens = boundary_lens(&second_chain(), BoundarySide::Complement);
    ensure!(lens.n == big(33489), "n = {}", lens.n);
    ensure!(lens.signed_qprime == big(-6953), "signed q' = {}", lens.signed_qprime);
    ensure!(lens.qprime == big(-6953).mod_floor(&big(33489)), "reduced q' = {}", lens.qprime);
    Ok(lens.to_string())
}

fn criterion_6() -> Outcome {
    for name in ["main", "second"] {
        let file = builtin(name);
        let built = file.build();
        let r = invariant_report(&built.model, &file.embedding(), file.context).map_err(|e| format!("{name}: {e}"))?;
        ensure!(r.k2_z == Rational::from(-9), "{name}: K_Z^2 = {}", r.k2_z);
        ensure!(r.k2_x == &r.k2_z + &Rational::from(13), "{name}: K_X^2 != K_Z^2 + 13");
        ensure!(r.k2_x == Rational::from(4), "{name}: K_X^2 = {}", r.k2_x);
        ensure!(r.e_z == 21 && r.e_x == 8, "{name}: e {} -> {}", r.e_z, r.e_x);
        ensure!(r.p_g == Some(0), "{name}: p_g = {:?}", r.p_g);
        ensure!(r.noether == NoetherCheck::Holds { total: 12 }, "{name}: Noether {:?}", r.noether);
    }
    Ok("K^2: -9 -> 4, e: 21 -> 8, 4 + 8 = 12 on both".into())
}

fn criterion_7() -> Outcome {
    let zero = Rational::zero();
    let one = Rational::one();
    for name in ["main", "second"] {
        let file = builtin(name);
        let built = file.build();
        let emb = file.embedding();
        let d = discrepancies(&emb.chain).map_err(|e| e.to_string())?;
        ensure!(d.d.len() == 13, "{name}: {} discrepancies", d.d.len());
        ensure!(d.d.iter().all(|v| *v > zero && *v < one), "{name}: d outside (0,1)");
        ensure!(d.canonical_gain(&emb.chain) == Rational::from(13), "{name}: gain {}", d.canonical_gain(&emb.chain));
        let pullback = pullback_canonical(&built.model, &emb).map_err(|e| e.to_string())?;
        for m in &emb.members {
            let g = &built.model.curve(m).map_err(|e| e.to_string())?.class;
            let v = pullback.intersect(g).map_err(|e| e.to_string())?;
            ensure!(v.is_zero(), "{name}: f*K . {m} = {v}");
        }
    }

    let start = Instant::now();
    let pool = wahl_generate(13);
    let stride = pool.len() / 200;
    let sample: Vec<&Chain> = pool.iter().step_by(stride).take(200).collect();
    ensure!(sample.len() == 200, "only {} chains sampled", sample.len());
    for chain in &sample {
        let fast = solve_discrepancies(chain).map_err(|e| e.to_string())?;
        let dense = common::dense_discrepancies(chain.entries());
        let fast: Vec<BigRational> = fast.iter().map(|r| r.as_big_rational().clone()).collect();
        ensure!(fast == dense, "solvers disagree on {chain}");
    }
    within("dense oracle", start, Duration::from_secs(10))?;
    Ok(format!("exact on both chains; 200 oracle chains in {:?}", start.elapsed()))
}

fn criterion_8() -> Outcome {
    let mut counts = Vec::new();
    for name in ["main", "second"] {
        let file = builtin(name);
        let built = file.build();
        let audit = nef_ample_audit(&built.model, &file.embedding()).map_err(|e| e.to_string())?;
        let minus_one: Vec<_> = audit.table.iter().filter(|e| e.role == CurveRole::MinusOneCurve).collect();
        ensure!(minus_one.len() == 8, "{name}: {} (-1)-curves registered", minus_one.len());
        for e in &minus_one {
            ensure!(e.status == Positivity::Positive, "{name}: f*K . {} = {}", e.curve, e.product);
        }
        ensure!(audit.k2_x == Rational::from(4), "{name}: K_X^2 = {}", audit.k2_x);
        ensure!(audit.passed(), "{name}: audit failed");
        counts.push(format!("{name}: 8/8 positive"));
    }
    Ok(counts.join(", "))
}

fn criterion_9() -> Outcome {
    let fibers = [FiberType::I(8), FiberType::I(2), FiberType::NODAL, FiberType::NODAL];
    let audit = fiber_euler_audit(&fibers);
    ensure!(audit.total == 12 && audit.passed(), "total {}", audit.total);
    for name in ["main", "second"] {
        let file = builtin(name);
        let got = fiber_euler_audit(&file.fibers);
        ensure!(got.passed(), "{name}: shipped fibers sum to {}", got.total);
    }
    Ok("8 + 2 + 1 + 1 = 12".into())
}

fn criterion_10() -> Outcome {
    let pencil = Pencil::builtin();
    let listed = Pencil::listed_singular_members();
    let member = |name: &str| {
        let (_, t, _) = listed.iter().find(|(n, _, _)| *n == name).expect("listed member");
        pencil.member(t).map_err(|e| e.to_string())
    };
    for (name, p) in [("F1", node_f1()), ("F2", node_f2())] {
        let f = member(name)?;
        let on = evaluate(&f, &p).map_err(|e| e.to_string())?.is_zero();
        ensure!(on && is_node(&f, &p).map_err(|e| e.to_string())?, "{name} has no node at {p}");
    }
    let m = line_through(&base_point_q(), &node_f1()).map_err(|e| e.to_string())?;
    let at = |p| m.evaluate(&p).map_err(|e| e.to_string());
    ensure!(at(base_point_q())?.is_zero(), "M misses q");
    ensure!(at(node_f1())?.is_zero(), "M misses [√3:0:-1]");
    ensure!(!at(node_f2())?.is_zero(), "M meets [√3:0:1]");
    for (name, t, _) in &listed {
        let cert = member_singular_check(t).map_err(|e| e.to_string())?;
        ensure!(cert.certified, "member {name} at {t} not certified");
    }
    Ok(format!("nodes at {} and {}; M = {m}; {} members certified", node_f1(), node_f2(), listed.len()))
}

/// Inverse of the two augmentation moves; a chain is Wahl iff it reduces to `[4]`.
fn reduces_to_four(entries: &[u64]) -> bool {
    let mut v = entries.to_vec();
    while v.len() > 1 {
        let last = v.len() - 1;
        if v[0] == 2 && v[last] >= 3 {
            v.remove(0);
            *v.last_mut().unwrap() -= 1;
        } else if v[last] == 2 && v[0] >= 3 {
            v.pop();
            v[0] -= 1;
        } else {
            return false;
        }
    }
    v == [4]
}

fn all_chains(max_len: usize, max_entry: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|c| {
                (2..=max_entry).map(move |b| {
                    let mut n = c.clone();
                    n.push(b);
                    n
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn criterion_11() -> Outcome {
    let start = Instant::now();

    let mut pairs = 0u64;
    for n in 2u64..=10_000 {
        for q in 1..n {
            if n.gcd(&q) != 1 {
                continue;
            }
            let chain = hj_expand_generic(n, q);
            if chain.iter().any(|&b| b < 2) || cf_value_generic::<u64>(&chain) != (n, q) {
                return Err(format!("round trip failed at {n}/{q}: {chain:?}"));
            }
            pairs += 1;
        }
    }

    let generated: BTreeSet<Chain> = wahl_generate(13).into_iter().collect();
    let mut wahl_pairs = 0;
    for p in 2i64..=30 {
        for q in 1..p {
            if p.gcd(&q) != 1 {
                continue;
            }
            let params = WahlParams::new(p, q).map_err(|e| e.to_string())?;
            let chain = params.chain();
            ensure!(wahl_recognize(&chain).as_ref() == Some(&params), "recognize(chain({p},{q})) failed");
            ensure!(reduces_to_four(chain.entries()), "chain({p},{q}) = {chain} does not reduce to [4]");
            if chain.len() <= 13 {
                ensure!(generated.contains(&chain), "chain({p},{q}) = {chain} missing from generator");
            }
            wahl_pairs += 1;
        }
    }
    for chain in &generated {
        ensure!(wahl_recognize(chain).is_some(), "generated {chain} not recognized");
    }

    let brute: BTreeSet<Vec<u64>> = all_chains(5, 6)
        .into_iter()
        .filter(|c| wahl_recognize(&Chain::new(c.clone()).expect("entries >= 2")).is_some())
        .collect();
    let from_generator: BTreeSet<Vec<u64>> =
        wahl_generate(5).into_iter().map(|c| c.entries().to_vec()).filter(|c| c.iter().all(|&b| b <= 6)).collect();
    ensure!(brute == from_generator, "brute force {} vs generator {}", brute.len(), from_generator.len());

    for chain in &generated {
        let seq = exponent_sequence(chain);
        let mut all = vec![seq.n.clone()];
        all.extend(seq.c.iter().cloned());
        let g = gcd_list(&all).map_err(|e| e.to_string())?;
        ensure!(g == big(1), "gcd over {chain} is {g}");
    }

    within("property suites", start, Duration::from_secs(60))?;
    Ok(format!(
        "{pairs} HJ pairs, {wahl_pairs} Wahl pairs p <= 30, {} brute-force chains, {} generated chains, {:?}",
        brute.len(),
        generated.len(),
        start.elapsed()
    ))
}

fn criterion_12() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut runs = 0;
    for name in ["main", "second"] {
        let json = match name {
            "main" => wahlcheck::construction::MAIN_JSON,
            _ => wahlcheck::construction::SECOND_JSON,
        };
        for index in 0..13 {
            let value = common::perturbed_chain_file(json, index, 1);
            let path = dir.path().join(format!("{name}-{index}.json"));
            std::fs::write(&path, value.to_string()).map_err(|e| e.to_string())?;
            let out = common::run_cli_on(&path, &["--json"]);
            ensure!(out.status.code() == Some(1), "{name}[{index}]: exit {:?}", out.status.code());
            let report: serde_json::Value =
                serde_json::from_str(&common::stdout(&out)).map_err(|e| format!("{name}[{index}]: {e}"))?;
            let failed: Vec<&str> = report["checks"]
                .as_array()
                .into_iter()
                .flatten()
                .filter(|c| c["status"] == "fail")
                .filter_map(|c| c["name"].as_str())
                .collect();
            ensure!(failed.contains(&"chain-embedding"), "{name}[{index}]: failing checks {failed:?}");
            runs += 1;
        }
    }
    Ok(format!("{runs} perturbed files rejected by chain-embedding"))
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 12] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
        (12, criterion_12),
    ];
    let mut failures = 0;
    let mut out = std::io::stdout().lock();
    for (n, run) in criteria {
        let line = match run() {
            Ok(detail) => format!("criterion {n:>2}: pass  {detail}"),
            Err(why) => {
                failures += 1;
                format!("criterion {n:>2}: FAIL  {why}")
            }
        };
        let _ = writeln!(out, "{line}");
    }
    let _ = writeln!(out, "acceptance: {} of 12 criteria pass", 12 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
