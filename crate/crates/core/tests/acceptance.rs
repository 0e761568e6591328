//! Acceptance suite: one PASS/FAIL line per criterion, exact arithmetic only.
//! Runs without the libtest harness so the lines are always printed.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use conekit::cohom::{chi_rr, km_family_cohomology, CohomStatus, FamilyDescriptor, TContext};
use conekit::cone3fold::{
    adjunction_consistency, kvv_schedule, picard_chain, section_numbers, ConeInput, ConeModel, PicardChain,
    ResolutionRecord,
};
use conekit::contract::Contraction;
use conekit::km_surface::build_km_surface;
use conekit::qlattice::Rat;
use conekit::scenarios::{sweep_kvv, verify_bad_fano, verify_plt_nonnormal, Verdict};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T: std::fmt::Debug>(x: T) -> String {
    format!("{x:?}")
}

fn grid(d_max: usize) -> Vec<FamilyDescriptor> {
    let mut out = Vec::new();
    for d in 3..=d_max {
        for q1 in 0..=d {
            for q2 in 0..=d - q1 {
                out.push(FamilyDescriptor::new(d, q1, q2).unwrap());
            }
        }
    }
    out
}

fn plt_instances(d_max: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for d in 4..=d_max {
        for q in 2..=d - 2 {
            if (2 * d - 4) % (q - 1) == 0 {
                out.push((d, q));
            }
        }
    }
    out
}

fn ledger_inputs(d_max: usize) -> Vec<(String, ConeInput)> {
    let mut out: Vec<(String, ConeInput)> = plt_instances(d_max)
        .into_iter()
        .map(|(d, q)| (format!("plt({d},{q})"), ConeInput::n_plt(d, q).unwrap()))
        .collect();
    for q in (1..).take_while(|q| 4 * q + 2 <= d_max) {
        out.push((format!("fano({q})"), ConeInput::n_bad_fano(q).unwrap()));
    }
    out
}

fn chi_cross_validation() -> Check {
    let cases = grid(12);
    let mut ctx = None::<TContext>;
    for fam in &cases {
        if ctx.as_ref().map(|c| c.d()) != Some(fam.d) {
            ctx = Some(TContext::new(fam.d).map_err(e)?);
        }
        let ctx = ctx.as_ref().unwrap();
        let floor = ctx.psi.pullback(&fam.divisor()).map_err(e)?.floor();
        let rr = chi_rr(ctx.psi.source(), &floor).map_err(e)?;
        ensure(rr == fam.chi_closed_form(), || {
            format!("{fam:?}: rr {rr} vs closed {}", fam.chi_closed_form())
        })?;
    }
    Ok(format!("{} cases", cases.len()))
}

fn h1_table() -> Check {
    let cases = grid(12);
    let mut ctx = None::<TContext>;
    for fam in &cases {
        if ctx.as_ref().map(|c| c.d()) != Some(fam.d) {
            ctx = Some(TContext::new(fam.d).map_err(e)?);
        }
        let r = km_family_cohomology(ctx.as_ref().unwrap(), *fam).map_err(e)?;
        let expected = match (fam.q1, fam.q2) {
            (_, 0) => 0,
            (q1, q2) if q1 >= q2 => q2 as u64 - 1,
            (q1, _) => q1 as u64,
        };
        ensure(r.h1.value() == Some(expected), || format!("{fam:?}: h1 {}", r.h1))?;
        ensure(r.h2 == CohomStatus::ExactZero, || format!("{fam:?}: h2 {}", r.h2))?;
        ensure(fam.q2 == 0 || r.h0 == CohomStatus::ExactZero, || {
            format!("{fam:?}: h0 {}", r.h0)
        })?;
        ensure(r.is_consistent() && r.fully_certified(), || {
            format!("{fam:?}: inconsistent")
        })?;
        if let (Some(h0), Some(h1), Some(h2)) = (r.h0.value(), r.h1.value(), r.h2.value()) {
            ensure(h0 as i64 - h1 as i64 + h2 as i64 == r.chi, || format!("{fam:?}: chi"))?;
        }
    }
    Ok(format!("{} cases", cases.len()))
}

fn plt_counterexample() -> Check {
    let r = verify_plt_nonnormal(5, 3).map_err(e)?;
    let m = |c: &str| r.m_table.get(c);
    ensure(m("Gamma") == Some(3), || format!("m_Gamma = {:?}", m("Gamma")))?;
    for i in 1..=5 {
        let want = if i <= 4 { 2 } else { 1 };
        for c in [format!("l_{i}"), format!("lp_{i}")] {
            ensure(m(&c) == Some(want), || format!("m({c}) = {:?}", m(&c)))?;
        }
    }
    ensure(r.plt.b == Rat::new(1, 2), || format!("b = {}", r.plt.b))?;
    ensure(r.h1_a_minus_e.status == CohomStatus::Exact(1), || {
        format!("h1(A - E_5) = {}", r.h1_a_minus_e.status)
    })?;
    ensure(r.non_normal == Verdict::Holds, || format!("verdict {}", r.non_normal))?;
    ensure(r.unknown_count() == 0, || {
        format!("{} unknown entries", r.unknown_count())
    })?;
    ensure(
        r.certificates
            .iter()
            .all(|c| c.value != "unknown" && c.value != "?" && !c.rule.is_empty()),
        || "uncertified certificate".into(),
    )?;
    Ok("m-table, b = 1/2, h1(A - E_5) = 1, non-normal".into())
}

fn fano_family() -> Check {
    for q in 1..=5usize {
        let r = verify_bad_fano(q).map_err(e)?;
        ensure(r.h2_z == Some(q as u64 - 1), || format!("q = {q}: h2_Z = {:?}", r.h2_z))?;
        ensure(r.not_cohen_macaulay == Verdict::from_bool(q >= 2), || {
            format!("q = {q}: not-CM flag")
        })?;
        ensure(r.m_gamma == 4, || format!("q = {q}: m_Gamma = {}", r.m_gamma))?;
    }
    Ok("q = 1..5".into())
}

fn ledger_identities() -> Check {
    let inputs = ledger_inputs(12);
    let mut count = 0;
    for (label, input) in &inputs {
        let model = ConeModel::new(input.clone()).map_err(e)?;
        let d = model.d();
        let unit = Rat::new(1, 2 * d as i64 - 4);
        for i in 1..=d {
            for j in 1..=d {
                let s = section_numbers(&model, i, j).map_err(e)?;
                ensure(s.ey_i_dot_f_e_plus_j == unit && s.ey_i_dot_f_e_minus_j == unit, || {
                    format!("{label}: E^Y_{i}.f(E_{j})")
                })?;
                count += 1;
            }
        }
        for c in model.curve_ledgers() {
            ensure(c.s_plus_dot_c_plus.is_zero() && c.s_minus_dot_c_minus.is_zero(), || {
                format!("{label}: S.C for {}", c.curve)
            })?;
            let m = Rat::int(c.m as i64);
            let kx = &(&(-&c.self_intersection) - &(&Rat::int(2) * &m)) / &m;
            ensure(c.kx_dot_c_plus == kx && c.kx_dot_c_minus == kx, || {
                format!("{label}: K_X.C for {}", c.curve)
            })?;
        }
        let adj = adjunction_consistency(&model).map_err(e)?;
        let expected = 2 * d + model.curve_ledgers().len();
        ensure(adj.all_passed() && adj.checks.len() == expected, || {
            format!("{label}: adjunction {} of {expected}", adj.checks.len())
        })?;
    }
    Ok(format!("{} instances, {count} section pairs", inputs.len()))
}

fn resolution_chains() -> Check {
    for (m, want) in [(2u64, Rat::zero()), (3, Rat::new(1, 3)), (4, Rat::new(1, 2))] {
        let r = ResolutionRecord::for_curve("C", m).map_err(e)?;
        ensure(r.f_plus_coefficient == want, || {
            format!("m = {m}: F^+ coefficient {}", r.f_plus_coefficient)
        })?;
        let mi = m as i64;
        ensure(
            r.s_plus_f_plus == Rat::new(1, mi) && r.r_c_f_plus == Rat::new(1, mi),
            || format!("m = {m}: F^+"),
        )?;
        let s_minus: Vec<Rat> = (1..mi).map(|k| Rat::new(mi - k, mi)).collect();
        let r_c: Vec<Rat> = (1..mi).map(|k| Rat::new(k, mi)).collect();
        ensure(r.s_minus_chain == s_minus, || {
            format!("m = {m}: S^- chain {:?}", r.s_minus_chain)
        })?;
        ensure(r.r_c_chain == r_c, || format!("m = {m}: R_C chain {:?}", r.r_c_chain))?;
        ensure(r.f_minus_canonical.iter().all(Rat::is_zero), || {
            format!("m = {m}: F^- canonical")
        })?;
    }
    Ok("m = 2, 3, 4".into())
}

fn klt_certificates() -> Check {
    for d in 3..=20usize {
        let psi = Contraction::km(&build_km_surface(d).map_err(e)?).map_err(e)?;
        let s = psi
            .classify_singularities(&conekit::qlattice::NamedDivisor::zero())
            .map_err(e)?;
        let want = Rat::new(-(d as i64 - 3), d as i64 - 2);
        ensure(
            s.min_discrepancy == want && want > Rat::int(-1) && s.class.is_klt(),
            || format!("d = {d}: {} {:?}", s.min_discrepancy, s.class),
        )?;
    }
    Ok("d = 3..20".into())
}

fn picard() -> Check {
    let inputs = ledger_inputs(20);
    for (label, input) in &inputs {
        let model = ConeModel::new(input.clone()).map_err(e)?;
        let d = model.d();
        let p = picard_chain(&model).map_err(e)?;
        let want = PicardChain {
            rho_s: 2 + 2 * d,
            rho_t: 1,
            rho_x: 3 + 2 * d,
            rho_y: 2,
            rho_z: 1,
        };
        ensure(p == want, || format!("{label}: {p:?}"))?;
    }
    Ok(format!("{} instances", inputs.len()))
}

fn kvv() -> Check {
    let target = Rat::int(10);
    let mut steps = Vec::new();
    for es in [vec![1u64], vec![1, 2], vec![1, 2, 3], vec![3, 3, 3]] {
        let zeros = vec![Rat::zero(); es.len()];
        let t = kvv_schedule(&es, &zeros, &target).map_err(e)?;
        ensure(*t.final_lambda() >= target, || {
            format!("{es:?}: stopped at {}", t.final_lambda())
        })?;
        for w in t.states.windows(2) {
            ensure(w[1].lambda >= w[0].lambda, || format!("{es:?}: lambda decreased"))?;
        }
        for s in &t.states {
            ensure(s.delta.iter().all(|x| !x.is_negative() && *x <= Rat::one()), || {
                format!("{es:?}: delta out of range at step {}", s.step)
            })?;
        }
        ensure(kvv_schedule(&es, &zeros, &target).map_err(e)? == t, || {
            format!("{es:?}: nondeterministic")
        })?;
        steps.push(t.steps());
    }
    Ok(format!("steps {steps:?}"))
}

fn golden(file: &str) -> Result<serde_json::Value, String> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../cli/tests/golden")
        .join(file);
    let bytes = std::fs::read(&path).map_err(|err| format!("{}: {err}", path.display()))?;
    serde_json::from_slice(&bytes).map_err(e)
}

fn determinism() -> Check {
    let render = || -> Result<Vec<String>, String> {
        let mut out = Vec::new();
        let plt = verify_plt_nonnormal(5, 3).map_err(e)?;
        out.push(serde_json::to_string(&plt).map_err(e)?);
        out.push(serde_json::to_string(&plt.envelope()).map_err(e)?);
        let fano = verify_bad_fano(2).map_err(e)?;
        out.push(serde_json::to_string(&fano.envelope()).map_err(e)?);
        out.push(serde_json::to_string(&sweep_kvv(3, 12).map_err(e)?).map_err(e)?);
        let model = ConeModel::new(ConeInput::n_plt(5, 3).map_err(e)?).map_err(e)?;
        out.push(serde_json::to_string(model.curve_ledgers()).map_err(e)?);
        out.push(serde_json::to_string(&build_km_surface(5).map_err(e)?).map_err(e)?);
        Ok(out)
    };
    let first = render()?;
    ensure(first == render()?, || "two renderings differ".into())?;
    for (file, env) in [
        ("verify_plt_5_3.json", verify_plt_nonnormal(5, 3).map_err(e)?.envelope()),
        ("verify_fano_2.json", verify_bad_fano(2).map_err(e)?.envelope()),
    ] {
        let g = golden(file)?;
        let fresh = serde_json::to_value(&env).map_err(e)?;
        for key in ["scenario", "params", "certificates", "verdict"] {
            ensure(g[key] == fresh[key], || {
                format!("{file}: {key} differs from golden file")
            })?;
        }
    }
    Ok(format!("{} reports, 2 golden files", first.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "chi closed form equals Riemann-Roch on the floor pullback",
            chi_cross_validation,
        ),
        ("h1 table on the family grid", h1_table),
        ("plt counterexample d = 5, q = 3", plt_counterexample),
        ("Fano family h2 and Cohen-Macaulay flag", fano_family),
        ("threefold ledger identities", ledger_identities),
        ("resolution ledger chains", resolution_chains),
        ("klt certificates of psi", klt_certificates),
        ("Picard chain", picard),
        ("KVV schedule", kvv),
        ("determinism and golden reports", determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("[PASS] {:>2}. {name} ({detail}; {ms} ms)", k + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2}. {name}: {why}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
