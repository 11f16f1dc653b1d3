//! Dispatches a job to the engine and wraps the result in a report.

use koahss::ahss::run as run_ahss;
use koahss::algebra::Coeff;
use koahss::diff_ko::{check_twisted_spin, diff_e2, geometric_d4_check, r_theory_groups, RationalClass};
use koahss::ops::{bockstein, include_j2, sq, CohomologyClass, Space};
use koahss::verify::{verify_all, Status, VerifyMatrix};
use koahss::{Error, Result};
use num_bigint::BigInt;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::job::{Command, JobSpec};

/// A finished job: the report envelope plus a text rendering.
pub struct Output {
    pub report: Value,
    pub text: String,
}

/// Hash of the canonical serialization of the job.
pub fn input_hash(job: &JobSpec) -> String {
    let canonical = serde_json::to_string(job).expect("job serializes");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn bigints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn coords(c: &CohomologyClass) -> Value {
    to_value(&c.coords)
}

fn window(job: &JobSpec, dim: usize) -> (i64, i64) {
    job.options.degrees.map_or((0, dim as i64), |[lo, hi]| (lo, hi))
}

pub fn run(job: &JobSpec) -> Result<Output> {
    job.validate_schema()?;
    let hash = input_hash(job);
    let result = if job.command == Command::Verify {
        let max_rp = job.options.max_rp.unwrap_or(4);
        let max_thom = job.options.max_thom.unwrap_or(3);
        let m = verify_all(max_rp, max_thom)?;
        let text = m.render_text();
        let value = if job.options.golden.unwrap_or(false) { golden(&m) } else { to_value(&m) };
        return Ok(envelope(job, &hash, value, text));
    } else {
        let resolved = job.space.resolve()?;
        let tw = resolved.twist(&job.twist)?;
        let sp = &resolved.space;
        let s1 = tw.sigma1();
        match job.command {
            Command::Cohomology => {
                let (lo, hi) = window(job, sp.dim());
                let coeffs = match job.options.coeff {
                    Some(c) => vec![c],
                    None => vec![Coeff::Z, Coeff::Z2, Coeff::QmodZ],
                };
                let rows: Vec<Value> = (lo.max(0)..=hi)
                    .map(|p| {
                        let p = p as usize;
                        let mut row = serde_json::Map::new();
                        row.insert("p".into(), json!(p));
                        for &c in &coeffs {
                            let g = match c {
                                Coeff::Z => to_value(&sp.int_cohomology(p, s1).group),
                                Coeff::Z2 => to_value(&sp.mod2_cohomology(p).group),
                                Coeff::QmodZ => to_value(&sp.qmodz_group(p, s1)),
                            };
                            row.insert(to_value(&c).as_str().unwrap_or("?").to_string(), g);
                        }
                        Value::Object(row)
                    })
                    .collect();
                json!({"dim": sp.dim(), "twisted": s1.is_some(), "f_vector": sp.complex().f_vector(), "groups": rows})
            }
            Command::Ops => {
                let p = job.options.degree.unwrap_or(1);
                if p < 0 {
                    return Err(Error::DegreeMismatch(format!("class degree {p} is negative")));
                }
                let p = p as usize;
                let classes = match &job.options.class {
                    Some(c) => vec![sp.class(Coeff::Z2, None, p, &bigints(c))?],
                    None => sp.generators(Coeff::Z2, None, p)?,
                };
                let rows = classes.iter().map(|a| ops_row(sp, &tw, a)).collect::<Result<Vec<_>>>()?;
                json!({"degree": p, "classes": rows})
            }
            Command::Ahss => {
                let st = run_ahss(sp, &tw)?;
                st.check_square_zero()?;
                let mut v = to_value(&st.report(job.options.reduced.unwrap_or(true)));
                v["square_zero_checked"] = json!(true);
                v
            }
            Command::Ko => {
                let st = run_ahss(sp, &tw)?;
                st.check_square_zero()?;
                let reduced = job.options.reduced.unwrap_or(true);
                let degrees: Vec<i64> = match (job.options.degree, job.options.degrees) {
                    (Some(d), _) => vec![d],
                    (None, Some([lo, hi])) => (lo..=hi).collect(),
                    (None, None) => (0..8).collect(),
                };
                let groups: Vec<Value> = degrees.iter().map(|&i| to_value(&st.assemble_ko(i, reduced))).collect();
                json!({"basepoint_split": st.basepoint_split(), "groups": groups})
            }
            Command::DiffE2 => to_value(&diff_e2(sp, &tw)?),
            Command::CheckLift => {
                let c = job
                    .options
                    .g4
                    .as_ref()
                    .ok_or_else(|| Error::Parse("check-lift needs options.G4 (coordinates in H⁴(X; ℤ))".into()))?;
                if s1.is_some() {
                    return Err(Error::Unsupported("form lifting with σ₁ ≠ 0".into()));
                }
                let g = RationalClass::integral(sp.class(Coeff::Z, None, 4, &bigints(c))?)?;
                to_value(&geometric_d4_check(sp, &g, &tw)?)
            }
            Command::CheckSpin => {
                let bs = match &job.options.class {
                    Some(c) => vec![sp.class(Coeff::Z2, None, 2, &bigints(c))?],
                    None => sp.mod2_classes(2)?,
                };
                let checks = bs.iter().map(|b| check_twisted_spin(sp, b).map(|r| to_value(&r))).collect::<Result<Vec<_>>>()?;
                json!({"dim": sp.dim(), "checks": checks})
            }
            Command::RTheory => to_value(&r_theory_groups(sp, s1)?),
            Command::Verify => unreachable!("handled above"),
        }
    };
    let text = crate::text::render(&result);
    Ok(envelope(job, &hash, result, text))
}

fn ops_row(sp: &Space, tw: &koahss::ops::TwistData, a: &CohomologyClass) -> Result<Value> {
    let p = a.degree;
    let sqs: Vec<Value> = (0..=p).map(|k| sq(sp, k, a).map(|v| coords(&v))).collect::<Result<_>>()?;
    let mut row = json!({
        "class": coords(a),
        "sq": sqs,
        "bockstein": coords(&bockstein(sp, a, None)?),
        "j2": coords(&include_j2(sp, a, None)?),
        "d2": coords(&koahss::ahss::twisted_sq2(sp, tw, a)?),
    });
    if let Some(w) = tw.sigma1() {
        row["bockstein_twisted"] = coords(&bockstein(sp, a, Some(w))?);
        row["j2_twisted"] = coords(&include_j2(sp, a, Some(w))?);
    }
    Ok(row)
}

fn golden(m: &VerifyMatrix) -> Value {
    let cell = |c: &koahss::verify::CellCheck| json!([c.n, c.i, c.status]);
    json!({
        "projective": m.projective.iter().map(cell).collect::<Vec<_>>(),
        "twisted_thom": m.twisted_thom.iter().map(cell).collect::<Vec<_>>(),
        "klein": m.klein.iter().map(|k| json!([k.n, k.i, k.twisted, k.status])).collect::<Vec<_>>(),
        "rp5": m.rp5.passes,
        "k3": m.k3.passes,
        "mismatches": m.mismatches(),
        "resolved_projective": m.projective.iter().filter(|c| c.status != Status::Inconclusive).count(),
    })
}

fn envelope(job: &JobSpec, hash: &str, result: Value, text: String) -> Output {
    let report = json!({
        "engine": "koahss",
        "version": koahss::VERSION,
        "schema": crate::job::SCHEMA_VERSION,
        "input_hash": hash,
        "command": job.command.name(),
        "result": result,
    });
    let text = format!(
        "koahss {} | {} | input {}\n{}",
        koahss::VERSION,
        job.command.name(),
        &hash[..16],
        text
    );
    Output { report, text }
}
