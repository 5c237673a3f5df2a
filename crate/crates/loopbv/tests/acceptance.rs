//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Expected values are computed here from the closed
//! formulas, not read back from the library.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use loopbv::audit::{run_audit, AuditPlan};
use loopbv::instance::{adversarial_fixture, builtin_names, resolve, Loaded};
use loopbv::loopbv_core::bv::bracket;
use loopbv::loopbv_core::chern::{gysin_homology, pair_top, run_pipeline, total_chern, BundleSpec, GradedGroup, GroupPiece};
use loopbv::loopbv_core::confluence::check_local_confluence;
use loopbv::loopbv_core::cpn::{additive_order, build_theorem_a, rational_instance, s2_instance};
use loopbv::loopbv_core::hochschild::{build_hochschild, decide_bv_iso};
use loopbv::loopbv_core::hopf::{check_action_laws, ActionAudit};
use loopbv::loopbv_core::{CoeffRing, DegreeWindow, Monomial, PresentationExt};
use loopbv::with_instance;
use num_bigint::BigInt;

type Outcome = Result<String, String>;

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bv_axioms() -> Outcome {
    let w = DegreeWindow::new(6);
    let mut items = 0;
    for n in 1..=5usize {
        let inst = resolve(&format!("cpn:{n}:Z"), &w).map_err(|e| e.to_string())?;
        let plan = AuditPlan::new(w.clone()).with_checks("delta-squared,bv-identity").map_err(|e| e.to_string())?;
        let r = with_instance!(&inst, b => run_audit(b, &b.delta, &plan)).map_err(|e| e.to_string())?;
        for rep in &r.reports {
            ensure(rep.passed(), || format!("n={n} {}: {:?}", rep.check, rep.failures.first()))?;
            items += rep.checked;
        }
    }
    Ok(format!("n=1..5, window {}: Δ² and seven-term residual zero on {items} items", w.describe()))
}

fn closed_form_table() -> Outcome {
    let mut rows = 0;
    let mut orders = [0usize; 3];
    for n in 1..=5i64 {
        let i = build_theorem_a(n as usize, CoeffRing::Integers).map_err(|e| e.to_string())?;
        let p = &i.presentation;
        for pp in 0..=n {
            for q in 0..=6i64 {
                let x = p.parse_element(&format!("c^{pp}·w·v^{q}")).map_err(|e| e.to_string())?;
                let free = (n - pp) + q * (n + 1);
                let tors = (q + 1) * binom(n + 1, 2);
                let want = p
                    .parse_element(&format!("{free}·c^{pp}·v^{q} + {tors}·c^{}·v^{}", n + pp, q + 1))
                    .map_err(|e| e.to_string())?;
                let got = i.delta.apply(&x).map_err(|e| e.to_string())?;
                ensure(got == want, || format!("n={n} p={pp} q={q}: got {got}, want {want}"))?;
                let y = p.parse_element(&format!("c^{pp}·v^{q}")).map_err(|e| e.to_string())?;
                ensure(i.delta.apply(&y).map_err(|e| e.to_string())?.is_zero(), || format!("Δ(c^{pp}v^{q}) ≠ 0"))?;
                rows += 2;

                // torsion term: zero when p > 0, otherwise order (n+1)/gcd(n+1, coefficient)
                let term = p.term(&Monomial::from_exponents(&[(n + pp) as u32, 0, (q + 1) as u32]), BigInt::from(tors));
                let expected = if pp > 0 { 1 } else { (n + 1) / gcd(n + 1, tors) };
                let got = additive_order(&term).ok_or("torsion term has infinite order")? as i64;
                ensure(got == expected, || format!("order n={n} p={pp} q={q}: {got} vs {expected}"))?;
                ensure(expected <= 2, || format!("order {expected} exceeds 2"))?;
                let odd_case = pp == 0 && n % 2 == 1 && q % 2 == 0;
                ensure((expected == 2) == odd_case, || format!("trichotomy n={n} p={pp} q={q}"))?;
                orders[match (pp > 0, expected) {
                    (true, _) => 0,
                    (false, 1) => 1,
                    _ => 2,
                }] += 1;
            }
        }
    }
    Ok(format!(
        "{rows} table entries for n=1..5, q<=6; torsion term zero (p>0) {}, zero (p=0) {}, order 2 {}",
        orders[0], orders[1], orders[2]
    ))
}

fn gerstenhaber() -> Outcome {
    for n in 1..=5usize {
        let i = build_theorem_a(n, CoeffRing::Integers).map_err(|e| e.to_string())?;
        let p = &i.presentation;
        let br = |a: &str, b: &str| bracket(&i.delta, &p.gen(a), &p.gen(b)).map_err(|e| e.to_string());
        ensure(br("c", "w")? == -p.gen("c"), || format!("n={n} {{c,w}}"))?;
        let vw = p
            .parse_element(&format!("{}·v + {}·c^{n}·v^2", n + 1, binom(n as i64 + 1, 2)))
            .map_err(|e| e.to_string())?;
        ensure(br("v", "w")? == vw, || format!("n={n} {{v,w}}"))?;
        for (a, b) in [("c", "c"), ("c", "v"), ("v", "c"), ("w", "w"), ("v", "v")] {
            ensure(br(a, b)?.is_zero(), || format!("n={n} {{{a},{b}}} ≠ 0"))?;
        }
    }
    Ok("{c,w} = -c, {v,w} = (n+1)v + C(n+1,2)c^n v^2, other generator brackets 0, n=1..5".into())
}

fn pipeline() -> Outcome {
    let w = DegreeWindow::new(6);
    let mut notes = Vec::new();
    for n in 1..=5usize {
        let p = run_pipeline(n, &w).map_err(|e| e.to_string())?;
        ensure(p.passed(), || format!("n={n}: {:?}", p.derivation.comparison.failures.first()))?;
        let mu: Vec<i64> = (0..=n as i64).map(|i| n as i64 - i).collect();
        let lambda: Vec<i64> = (1..=n as i64).map(|j| -(j + 1)).collect();
        ensure(p.mu == mu, || format!("n={n} mu {:?}", p.mu))?;
        ensure(p.lambda == lambda, || format!("n={n} lambda {:?}", p.lambda))?;
        ensure(p.constants == (n as i64 + 1, binom(n as i64 + 1, 2)), || format!("n={n} constants"))?;
        notes.push(format!("n={n} mu={:?} lambda={:?}", p.mu, p.lambda));
    }
    Ok(format!("derived Δ equals closed form on window cap=6; {}", notes.join("; ")))
}

fn recoveries() -> Outcome {
    let s = s2_instance(&DegreeWindow::new(11)).map_err(|e| e.to_string())?;
    let p = &s.presentation;
    for k in 0..=10u32 {
        let x = p.parse_element(&format!("b·v^{k}")).map_err(|e| e.to_string())?;
        let want = p.parse_element(&format!("{}·v^{k} + a·v^{}", 2 * k + 1, k + 1)).map_err(|e| e.to_string())?;
        ensure(s.delta.apply(&x).map_err(|e| e.to_string())? == want, || format!("S² k={k}"))?;
    }
    let mut checked = 0;
    for n in 1..=4i64 {
        let r = rational_instance(n as usize, &DegreeWindow::new(5)).map_err(|e| e.to_string())?;
        let q = &r.presentation;
        for k in 0..=4i64 {
            for l in 0..=n {
                let x = q.parse_element(&format!("t^{k}·u·x^{l}")).map_err(|e| e.to_string())?;
                let c = -(k + 1) * n - k + l;
                let got = r.delta.apply(&x).map_err(|e| e.to_string())?;
                let want = if l == n { q.zero() } else { q.parse_element(&format!("{c}·t^{k}·x^{l}")).map_err(|e| e.to_string())? };
                ensure(got == want, || format!("rational n={n} k={k} l={l}: {got}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("S² table for k<=10; rational table on {checked} monomials (n<=4, k<=4, l<=n)"))
}

fn hochschild() -> Outcome {
    let w = DegreeWindow::new(3);
    let mut notes = Vec::new();
    for n in 1..=4usize {
        let d = decide_bv_iso(n, &w).map_err(|e| e.to_string())?;
        ensure(d.candidates_checked <= 8 * (n + 1), || "too many candidates".into())?;
        if n % 2 == 0 {
            let iso = d.iso.ok_or(format!("n={n}: no witness"))?;
            notes.push(format!("n={n} witness {iso}"));
        } else {
            ensure(d.iso.is_none(), || format!("n={n}: unexpected witness"))?;
            ensure(d.candidates_checked == 8 * (n + 1), || format!("n={n}: search not exhaustive"))?;
            let (_, input, res) = d.obstruction.ok_or(format!("n={n}: no obstruction"))?;
            let h = build_hochschild(n).map_err(|e| e.to_string())?;
            let want = h.presentation.term(
                &Monomial::from_exponents(&[n as u32, 0, 1]),
                BigInt::from(binom(n as i64 + 1, 2)),
            );
            ensure(res == want || res == -want.clone(), || format!("n={n}: obstruction {res} at {input}"))?;
            notes.push(format!("n={n} obstruction {res} at {input}"));
        }
    }
    Ok(notes.join("; "))
}

fn characteristic_classes() -> Outcome {
    for n in 1..=10usize {
        let c = total_chern(&BundleSpec::tangent(n));
        let top = pair_top(&c, n).map_err(|e| e.to_string())?;
        let sub = pair_top(&c, n - 1).map_err(|e| e.to_string())?;
        ensure(top == BigInt::from(n + 1), || format!("n={n} top {top}"))?;
        ensure(sub == BigInt::from(binom(n as i64 + 1, 2)), || format!("n={n} c_(n-1) {sub}"))?;
    }
    for n in 1..=6i64 {
        let h = gysin_homology(&BundleSpec::tangent(n as usize)).map_err(|e| e.to_string())?;
        let mut want = GradedGroup::new();
        for i in 0..n {
            want.insert(2 * i, GroupPiece { free: 1, torsion: vec![] });
        }
        want.insert(2 * n - 1, GroupPiece { free: 0, torsion: vec![(n + 1) as u64] });
        for j in 1..=n {
            want.insert(2 * j + 2 * n - 1, GroupPiece { free: 1, torsion: vec![] });
        }
        ensure(h.groups() == want, || format!("n={n}: {:?}", h.groups()))?;
    }
    Ok("<c_n,[CP^n]> = n+1 and <c_(n-1),[CP^(n-1)]> = C(n+1,2) for n<=10; sphere-bundle groups for n<=6".into())
}

fn action_laws() -> Outcome {
    let mut laws = 0;
    for n in 1..=3usize {
        let i = build_theorem_a(n, CoeffRing::Integers).map_err(|e| e.to_string())?;
        let w = DegreeWindow::new(2);
        let lw = DegreeWindow::new(2).with_max_abs_degree(2 * n as i64);
        let audit = ActionAudit { op: &i.delta, table: &i.actions, loops: &i.loops, group: &i.group, window: &w, loops_window: &lw };
        let reports = check_action_laws(&audit).map_err(|e| e.to_string())?;
        for r in &reports {
            ensure(r.passed() && r.checked > 0, || format!("n={n} {}: {:?}", r.check, r.failures.first()))?;
        }
        laws = reports.len();
        for h in [&i.loops, &i.group] {
            let r = h.check_hopf_tables(&lw).map_err(|e| e.to_string())?;
            ensure(r.passed(), || format!("n={n} hopf tables"))?;
        }
    }
    Ok(format!("{laws} action laws and the Hopf tables hold for n=1..3 on window cap=2"))
}

fn robustness() -> Outcome {
    let w = DegreeWindow::new(6);
    let mut count = 0;
    for name in builtin_names() {
        let inst = resolve(&name, &w).map_err(|e| e.to_string())?;
        let ok = with_instance!(&inst, b => confluent(b, &w));
        ensure(ok, || format!("{name} not confluent"))?;
        count += 1;
    }
    let fixture = adversarial_fixture().map_err(|e| e.to_string())?;
    ensure(!check_local_confluence(&fixture, &w).passed(), || "adversarial fixture passed".into())?;

    for fault in ["delta-w", "delta-c"] {
        let o = Command::new(env!("CARGO_BIN_EXE_loopbv"))
            .args(["verify", "--n", "2", "--qmax", "2", "--inject-fault", fault, "--format", "json"])
            .env_remove("LOOPBV_WINDOW")
            .output()
            .map_err(|e| e.to_string())?;
        ensure(o.status.code() == Some(1), || format!("{fault}: exit {:?}", o.status.code()))?;
        let r: serde_json::Value = serde_json::from_slice(&o.stdout).map_err(|e| e.to_string())?;
        let sq = r["reports"].as_array().and_then(|v| v.iter().find(|x| x["check"] == "delta-squared"));
        let cert = sq.and_then(|s| s["failures"].as_array()).map(|f| !f.is_empty()).unwrap_or(false);
        ensure(cert, || format!("{fault}: no Δ² certificate"))?;
    }
    Ok(format!("{count} built-in presentations confluent, fixture flagged, both faults exit 1 with Δ² certificates"))
}

fn confluent<C: loopbv::loopbv_core::Coefficient>(b: &Loaded<C>, w: &DegreeWindow) -> bool {
    check_local_confluence(&b.presentation, w).passed()
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("BV axioms", bv_axioms),
        ("closed-form table", closed_form_table),
        ("generator brackets", gerstenhaber),
        ("sphere-bundle pipeline", pipeline),
        ("S² and rational tables", recoveries),
        ("Hochschild dichotomy", hochschild),
        ("characteristic classes", characteristic_classes),
        ("module-action laws", action_laws),
        ("robustness", robustness),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("criterion {} PASS {name} ({secs:.1}s): {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} FAIL {name} ({secs:.1}s): {msg}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
