//! One report builder per subcommand.

use conekit::cohom::{cohomology_of_na, km_family_cohomology, CohomReport, Entry, FamilyDescriptor, TContext};
use conekit::cone3fold::{
    adjunction_consistency, kvv_schedule, picard_chain, resolution_ledger, section_numbers, ConeInput, ConeModel,
};
use conekit::contract::Contraction;
use conekit::km_surface::{build_km_surface, km_sanity};
use conekit::qlattice::{NamedDivisor, Rat};
use conekit::scenarios::{sweep_kvv, verify_bad_fano, verify_plt_nonnormal, ScenarioEnvelope, Verdict};
use conekit::Error;
use serde::Serialize;
use serde_json::{json, Value};

use crate::report::{Report, Table};

/// An error carrying the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameters(_)
            | Error::Parse(_)
            | Error::IndexOutOfRange { .. }
            | Error::UnknownCurve(_)
            | Error::NotAmple
            | Error::AssumptionViolated { .. }
            | Error::NonIntegralDivisor { .. }
            | Error::ContractedCurve(_)
            | Error::BoundaryOutOfRange { .. } => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<Report, Failure>;

fn to_json<T: Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(|e| Failure {
        code: 1,
        message: e.to_string(),
    })
}

fn class_string(coeffs: &[Rat]) -> String {
    let parts: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn chain_string(coeffs: &[Rat]) -> String {
    let parts: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
    parts.join(" ")
}

/// Accepts `E_1^T + E_2^T`: the `^T` marker only names the target surface.
fn parse_divisor(s: &str) -> Result<NamedDivisor, Failure> {
    Ok(s.replace("^T", "").parse::<NamedDivisor>()?)
}

fn parse_subtract(s: &str) -> Result<usize, Failure> {
    let body = s.trim().trim_end_matches("^T");
    body.strip_prefix("E_")
        .and_then(|i| i.parse::<usize>().ok())
        .filter(|&i| i >= 1)
        .ok_or_else(|| Failure::usage(format!("--subtract expects E_<j>, got {s:?}")))
}

fn divisor_table(title: &str, d: &NamedDivisor) -> Table {
    let mut t = Table::new(title, &["curve", "coefficient"]);
    for (name, c) in d.terms() {
        t.push([name.to_string(), c.to_string()]);
    }
    t
}

pub fn km_surface(d: usize, check: bool) -> Outcome {
    let km = build_km_surface(d)?;
    let rows = km.registry_table()?;
    let mut registry = Table::new("registry", &["name", "class", "self-intersection"]);
    for r in &rows {
        registry.push([
            r.name.clone(),
            class_string(r.class.coeffs()),
            r.self_intersection.to_string(),
        ]);
    }
    let mut tables = vec![registry];
    let mut summary = vec![
        ("d".to_string(), d.to_string()),
        ("Picard rank".to_string(), km.picard_rank().to_string()),
    ];
    let mut ok = true;
    let mut json = json!({
        "command": "km-surface",
        "params": { "d": d },
        "picard_rank": km.picard_rank(),
        "registry": to_json(&rows)?,
    });
    if check {
        let sanity = km_sanity(&km)?;
        ok = sanity.all_passed();
        let mut t = Table::new("sanity", &["check", "passed"]);
        for item in &sanity.items {
            t.push([item.check.clone(), item.passed.to_string()]);
        }
        tables.push(t);
        summary.push((
            "sanity".to_string(),
            if ok { "all passed" } else { "FAILED" }.to_string(),
        ));
        json["sanity"] = to_json(&sanity)?;
        json["verdict"] = to_json(&Verdict::from_bool(ok))?;
    }
    Ok(Report {
        title: format!("Keel-McKernan surface S, d = {d}"),
        json,
        summary,
        tables,
        ok,
    })
}

pub fn contract(d: usize, pullback: Option<&str>) -> Outcome {
    let km = build_km_surface(d)?;
    let psi = Contraction::km(&km)?;
    let disc = psi.relative_canonical()?;
    let sing = psi.classify_singularities(&NamedDivisor::zero())?;
    let mut dt = Table::new("discrepancies", &["curve", "discrepancy"]);
    for (c, a) in &disc.entries {
        dt.push([c.clone(), a.to_string()]);
    }
    let mut summary = vec![
        ("d".to_string(), d.to_string()),
        ("contracted curves".to_string(), psi.contracted().len().to_string()),
        ("Picard rank of T".to_string(), psi.picard_rank_after().to_string()),
        (
            "singularities".to_string(),
            format!("{:?} ({})", sing.class, sing.criterion),
        ),
        ("minimal discrepancy".to_string(), sing.min_discrepancy.to_string()),
    ];
    let mut json = json!({
        "command": "contract",
        "params": { "d": d },
        "contracted": psi.contracted(),
        "picard_rank_after": psi.picard_rank_after(),
        "rank_one_fano": psi.is_rank_one_fano(),
        "singularities": to_json(&sing)?,
    });
    let mut tables = vec![dt];
    if let Some(p) = pullback {
        let div = parse_divisor(p)?;
        let pb = psi.pullback(&div)?;
        let degree = psi.target_degree(&div)?;
        let ample = psi.is_ample_rho1(&div)?;
        summary.push(("divisor".to_string(), div.to_string()));
        summary.push(("degree against -K_T".to_string(), degree.to_string()));
        summary.push(("ample".to_string(), ample.to_string()));
        json["pullback"] = json!({
            "divisor": to_json(&div)?,
            "pullback": to_json(&pb)?,
            "floor": to_json(&pb.floor())?,
            "degree": degree.to_string(),
            "ample": ample,
        });
        tables.push(divisor_table("pullback", &pb));
    }
    Ok(Report {
        title: format!("Contraction psi: S -> T, d = {d}"),
        json,
        summary,
        tables,
        ok: sing.class.is_klt(),
    })
}

fn cohom_table(r: &CohomReport) -> Table {
    let mut t = Table::new("cohomology", &["entry", "value", "rules"]);
    for (label, entry) in [("h0", Entry::H0), ("h1", Entry::H1), ("h2", Entry::H2)] {
        let rules: Vec<&str> = r.rules_for(entry).iter().map(|x| x.token()).collect();
        let status = r.status(entry).map_or("?".to_string(), |s| s.to_string());
        t.push([label.to_string(), status, rules.join(" + ")]);
    }
    let rules: Vec<&str> = r.rules_for(Entry::Chi).iter().map(|x| x.token()).collect();
    t.push(["chi".to_string(), r.chi.to_string(), rules.join(" + ")]);
    t
}

pub fn cohom(d: usize, q1: usize, q2: usize, n: Option<u32>, subtract: Option<&str>) -> Outcome {
    let ctx = TContext::new(d)?;
    let fam = FamilyDescriptor::new(d, q1, q2)?;
    let sub = subtract.map(parse_subtract).transpose()?;
    let report = match (n, sub) {
        (None, None) => km_family_cohomology(&ctx, fam)?,
        (n, sub) => cohomology_of_na(&ctx, fam, n.unwrap_or(1), sub)?,
    };
    let n_label = n.unwrap_or(1);
    let mut divisor = fam.divisor().scale(&Rat::int(n_label as i64));
    if let Some(j) = sub {
        divisor.add_term(conekit::km_surface::exc(j), Rat::int(-1));
    }
    let ok = report.is_consistent();
    Ok(Report {
        title: format!("Cohomology on T of {divisor}"),
        json: json!({
            "command": "cohom",
            "params": { "d": d, "q1": q1, "q2": q2, "n": n_label, "subtract": sub },
            "divisor": to_json(&divisor)?,
            "report": to_json(&report)?,
            "consistent": ok,
            "fully_certified": report.fully_certified(),
        }),
        summary: vec![
            ("divisor".to_string(), divisor.to_string()),
            ("consistent with chi".to_string(), ok.to_string()),
            ("fully certified".to_string(), report.fully_certified().to_string()),
        ],
        tables: vec![cohom_table(&report)],
        ok,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Ledger {
    Curve,
    Sections,
    Resolution,
    Picard,
    Adjunction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    Plt,
    Fano,
}

pub fn cone(family: Family, d: Option<usize>, q: usize, ledger: Ledger) -> Outcome {
    let input = match family {
        Family::Plt => {
            let d = d.ok_or_else(|| Failure::usage("--d is required for the plt family"))?;
            ConeInput::n_plt(d, q)?
        }
        Family::Fano => {
            let input = ConeInput::n_bad_fano(q)?;
            if let Some(d) = d.filter(|&d| d != input.d()) {
                return Err(Failure::usage(format!(
                    "the fano family has d = 4q + 2 = {}, not {d}",
                    input.d()
                )));
            }
            input
        }
    };
    let d = input.d();
    let model = ConeModel::new(input)?;
    let mut ok = true;
    let (name, table, data) = match ledger {
        Ledger::Curve => {
            let mut t = Table::new(
                "curve ledger",
                &[
                    "C", "C^2", "m", "S^+.C^+", "S^-.C^-", "S^-.C^+", "K_X.C^+", "K_X.C^-", "crepant", "a(R_C,Y)",
                ],
            );
            for c in model.curve_ledgers() {
                t.push([
                    c.curve.clone(),
                    c.self_intersection.to_string(),
                    c.m.to_string(),
                    c.s_plus_dot_c_plus.to_string(),
                    c.s_minus_dot_c_minus.to_string(),
                    c.s_minus_dot_c_plus.to_string(),
                    c.kx_dot_c_plus.to_string(),
                    c.kx_dot_c_minus.to_string(),
                    c.crepant_coefficient.to_string(),
                    c.discrepancy_over_y.to_string(),
                ]);
            }
            ("curve", t, to_json(&model.curve_ledgers())?)
        }
        Ledger::Sections => {
            let mut t = Table::new(
                "section ledger",
                &[
                    "i",
                    "j",
                    "psi*A.E_j",
                    "S^+.E_j^+",
                    "S^-.E_j^-",
                    "K_X.E_i^+",
                    "K_X.E_i^-",
                    "E^Y_i.f(E_j^+)",
                    "E^Y_i.f(E_j^-)",
                ],
            );
            let mut all = Vec::new();
            for i in 1..=d {
                for j in 1..=d {
                    let s = section_numbers(&model, i, j)?;
                    t.push([
                        i.to_string(),
                        j.to_string(),
                        s.psi_a_dot_e_j.to_string(),
                        s.s_plus_dot_e_plus_j.to_string(),
                        s.s_minus_dot_e_minus_j.to_string(),
                        s.kx_dot_e_plus_i.to_string(),
                        s.kx_dot_e_minus_i.to_string(),
                        s.ey_i_dot_f_e_plus_j.to_string(),
                        s.ey_i_dot_f_e_minus_j.to_string(),
                    ]);
                    all.push(s);
                }
            }
            ("sections", t, to_json(&all)?)
        }
        Ledger::Resolution => {
            let records = resolution_ledger(&model)?;
            let mut t = Table::new(
                "resolution ledger",
                &[
                    "C",
                    "m",
                    "F^+ coefficient",
                    "a(F^+)",
                    "mu*S^+ at F^+",
                    "mu*S^- chain",
                    "mu*R_C at F^+",
                    "mu*R_C chain",
                    "dual graph",
                ],
            );
            for r in &records {
                t.push([
                    r.curve.clone(),
                    r.m.to_string(),
                    r.f_plus_coefficient.to_string(),
                    r.f_plus_discrepancy.to_string(),
                    r.s_plus_f_plus.to_string(),
                    chain_string(&r.s_minus_chain),
                    r.r_c_f_plus.to_string(),
                    chain_string(&r.r_c_chain),
                    r.dual_graph.clone(),
                ]);
            }
            ("resolution", t, to_json(&records)?)
        }
        Ledger::Picard => {
            let p = picard_chain(&model)?;
            let mut t = Table::new("Picard ranks", &["variety", "rho"]);
            for (v, r) in [
                ("S", p.rho_s),
                ("T", p.rho_t),
                ("X", p.rho_x),
                ("Y", p.rho_y),
                ("Z", p.rho_z),
            ] {
                t.push([v.to_string(), r.to_string()]);
            }
            ("picard", t, to_json(&p)?)
        }
        Ledger::Adjunction => {
            let a = adjunction_consistency(&model)?;
            ok = a.all_passed();
            let mut t = Table::new("adjunction", &["cycle", "K lhs", "K rhs", "N lhs", "N rhs", "passed"]);
            for c in &a.checks {
                t.push([
                    c.cycle.clone(),
                    c.canonical_lhs.to_string(),
                    c.canonical_rhs.to_string(),
                    c.normal_lhs.to_string(),
                    c.normal_rhs.to_string(),
                    c.passed.to_string(),
                ]);
            }
            ("adjunction", t, to_json(&a)?)
        }
    };
    let family_name = match family {
        Family::Plt => "plt",
        Family::Fano => "fano",
    };
    Ok(Report {
        title: format!("Cone ledger ({name}), {family_name} family, d = {d}, q = {q}"),
        json: json!({
            "command": "cone",
            "params": { "family": family_name, "d": d, "q": q, "ledger": name },
            "divisor": to_json(model.input().divisor())?,
            "multiplicities": to_json(model.multiplicities())?,
            "ledger": data,
        }),
        summary: vec![
            ("A".to_string(), model.input().divisor().to_string()),
            ("d".to_string(), d.to_string()),
        ],
        tables: vec![table],
        ok,
    })
}

pub fn kvv(e: &[u64], delta: Option<&[Rat]>, target: &Rat) -> Outcome {
    let zeros = vec![Rat::zero(); e.len()];
    let trace = kvv_schedule(e, delta.unwrap_or(&zeros), target)?;
    let mut t = Table::new("schedule", &["step", "lambda", "mu", "chosen", "delta"]);
    for s in &trace.states {
        t.push([
            s.step.to_string(),
            s.lambda.to_string(),
            s.mu.to_string(),
            s.chosen.map_or("-".to_string(), |c| format!("E_{}", c + 1)),
            chain_string(&s.delta),
        ]);
    }
    Ok(Report {
        title: "Coefficient-reduction schedule".to_string(),
        json: json!({
            "command": "kvv-schedule",
            "params": { "e": e, "target": target.to_string() },
            "trace": to_json(&trace)?,
        }),
        summary: vec![
            ("steps".to_string(), trace.steps().to_string()),
            ("final lambda".to_string(), trace.final_lambda().to_string()),
        ],
        tables: vec![t],
        ok: true,
    })
}

fn scenario_report(title: String, env: &ScenarioEnvelope, extra: Value, summary: Vec<(String, String)>) -> Outcome {
    let mut t = Table::new("certificates", &["claim", "value", "rule", "reference"]);
    for c in &env.certificates {
        t.push([c.claim.clone(), c.value.clone(), c.rule.clone(), c.paper_ref.clone()]);
    }
    let mut json = to_json(env)?;
    json["report"] = extra;
    let mut summary = summary;
    summary.push(("verdict".to_string(), env.verdict.to_string()));
    Ok(Report {
        title,
        json,
        summary,
        tables: vec![t],
        ok: env.verdict.holds(),
    })
}

pub fn verify_plt(d: usize, q: usize) -> Outcome {
    let r = verify_plt_nonnormal(d, q)?;
    scenario_report(
        format!("Non-normal plt centre, d = {d}, q = {q}"),
        &r.envelope(),
        to_json(&r)?,
        vec![
            ("b".to_string(), r.plt.b.to_string()),
            ("unknown entries".to_string(), r.unknown_count().to_string()),
            ("note".to_string(), r.tail_note.clone()),
        ],
    )
}

pub fn verify_fano(q: usize) -> Outcome {
    let r = verify_bad_fano(q)?;
    scenario_report(
        format!("Klt Fano threefold, q = {q}, d = {}", r.d),
        &r.envelope(),
        to_json(&r)?,
        vec![(
            "h2(Z, O_Z)".to_string(),
            r.h2_z.map_or("unknown".to_string(), |h| h.to_string()),
        )],
    )
}

pub fn sweep(d_min: usize, d_max: usize) -> Outcome {
    let rows = sweep_kvv(d_min, d_max)?;
    let mut t = Table::new("sweep", &["d", "q1", "q2", "ample", "h1", "kvv_violation"]);
    for r in &rows {
        t.push([
            r.d.to_string(),
            r.q1.to_string(),
            r.q2.to_string(),
            r.ample.to_string(),
            r.h1.map_or("?".to_string(), |h| h.to_string()),
            r.kvv_violation.to_string(),
        ]);
    }
    let violations = rows.iter().filter(|r| r.kvv_violation).count();
    // Every d >= 5 has the member q1 = 3, q2 = 2.
    let covered = (d_min.max(5)..=d_max).all(|d| rows.iter().any(|r| r.d == d && r.kvv_violation));
    let verdict = Verdict::from_bool(covered);
    Ok(Report {
        title: format!("Kawamata-Viehweg sweep, {d_min} <= d <= {d_max}"),
        json: json!({
            "scenario": "kvv-sweep",
            "params": { "d_max": d_max, "d_min": d_min },
            "certificates": [{
                "claim": "some ample member with h1 > 0 for every d >= 5",
                "value": covered.to_string(),
                "rule": "h1(A) = h1(K_T - A) with A - K_T ample",
                "paper_ref": "failure of Kawamata-Viehweg vanishing on T",
            }],
            "verdict": to_json(&verdict)?,
            "rows": to_json(&rows)?,
        }),
        summary: vec![
            ("rows".to_string(), rows.len().to_string()),
            ("violations".to_string(), violations.to_string()),
            ("verdict".to_string(), verdict.to_string()),
        ],
        tables: vec![t],
        ok: covered,
    })
}
