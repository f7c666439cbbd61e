//! Runs a job and assembles a deterministic JSON report.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde_json::{json, Map, Value};

use crate::cone::{
    cosection_check_with, curvilinear_obstruction, curvilinear_sweep_with, jet_names, normal_cone, obstruction_complex,
    ConePresentation, CurvilinearOutcome, ObstructionClass, ObstructionComplex, SmallExtensionClass, SweepReport,
};
use crate::dg::{cotangent_fiber, minimize_at_origin, resolve_through_within, Budget};
use crate::error::{Error, Result};
use crate::job::{JobSpec, Task};
use crate::linalg::Matrix;
use crate::poly::{evaluate, translate_to_origin, Rational};
use crate::tangent::{classify_with, tangent_dims_within, zariski_tangent, TangentLie, TangentTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok = 0,
    InputError = 1,
    InvariantFailure = 2,
    ResourceLimit = 3,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::InputError => "input_error",
            Status::InvariantFailure => "invariant_failure",
            Status::ResourceLimit => "resource_limit",
        }
    }

    pub fn of_error(e: &Error) -> Status {
        match e {
            Error::ResourceLimit(_) => Status::ResourceLimit,
            Error::Internal(_) => Status::InvariantFailure,
            _ => Status::InputError,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub timing: bool,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub value: Value,
    pub status: Status,
}

impl Report {
    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.value).expect("reports are plain JSON");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        render_text(&self.value)
    }

    /// Names of failed checks.
    pub fn failed_checks(&self) -> Vec<String> {
        self.value
            .get("checks")
            .and_then(Value::as_object)
            .map(|m| m.iter().filter(|(_, v)| v == &&Value::Bool(false)).map(|(k, _)| k.clone()).collect())
            .unwrap_or_default()
    }
}

fn q_str(c: &Rational) -> Value {
    Value::String(c.to_string())
}

fn vec_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(q_str).collect())
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| vec_json(r)).collect())
}

fn strings(v: &[String]) -> Value {
    Value::Array(v.iter().cloned().map(Value::String).collect())
}

struct Runner<'a> {
    spec: &'a JobSpec,
    budget: Budget,
    sections: Map<String, Value>,
    checks: BTreeMap<String, bool>,
    timing: BTreeMap<String, f64>,
    table: Option<TangentTable>,
    lie: Option<TangentLie>,
    cone: Option<(ConePresentation, ObstructionComplex)>,
    sweep: Option<SweepReport>,
}

impl<'a> Runner<'a> {
    fn check(&mut self, name: &str, ok: bool) {
        self.checks.insert(name.to_string(), ok);
    }

    fn table(&mut self) -> Result<&TangentTable> {
        if self.table.is_none() {
            self.table = Some(tangent_dims_within(&self.spec.model, self.spec.max_index, &self.budget)?);
        }
        Ok(self.table.as_ref().unwrap())
    }

    fn lie(&mut self) -> Result<&TangentLie> {
        if self.lie.is_none() {
            self.lie = Some(TangentLie::within(&self.spec.model, self.spec.max_index, &self.budget)?);
        }
        Ok(self.lie.as_ref().unwrap())
    }

    fn cone(&mut self) -> Result<&(ConePresentation, ObstructionComplex)> {
        if self.cone.is_none() {
            self.budget.check_time()?;
            let c = normal_cone(&self.spec.model)?;
            let o = obstruction_complex(&self.spec.model)?;
            self.cone = Some((c, o));
        }
        Ok(self.cone.as_ref().unwrap())
    }

    fn sweep(&mut self) -> Result<&SweepReport> {
        if self.sweep.is_none() {
            let (c, o) = self.cone()?.clone();
            self.budget.check_time()?;
            self.sweep = Some(curvilinear_sweep_with(&self.spec.model, &self.spec.sweep, &c, &o)?);
        }
        Ok(self.sweep.as_ref().unwrap())
    }

    fn run(&mut self, task: Task) -> Result<()> {
        match task {
            Task::Tangent => self.tangent(),
            Task::Classify => self.classify(),
            Task::Bracket => self.bracket(),
            Task::Cone => self.cone_task(),
            Task::Obstruct => self.obstruct(),
            Task::Cosection => self.cosection(),
            Task::All => Ok(()),
        }
    }

    fn tangent(&mut self) -> Result<()> {
        let zariski = zariski_tangent(&self.spec.model);
        let t = self.table()?.clone();
        let counts = self.lie()?.dims();
        let dims = &t.dims;
        self.check("tangent.t1_equals_zariski", dims[0] == zariski);
        self.check("tangent.smooth_dichotomy", dims.len() < 2 || dims[1] != 0 || dims[1..].iter().all(|&d| d == 0));
        let higher = if dims.len() > 2 { &dims[2..] } else { &[][..] };
        self.check("tangent.quillen_dichotomy", higher.iter().all(|&d| d == 0) || higher.iter().all(|&d| d != 0));
        self.check("tangent.minimal_model_agreement", counts == *dims);
        let bases: Vec<Value> = t.bases.iter().map(|b| Value::Array(b.iter().map(|v| vec_json(v)).collect())).collect();
        let coords: Vec<Value> = t.coordinates.iter().map(|c| strings(c)).collect();
        self.sections.insert(
            "tangent".into(),
            json!({
                "dims": dims,
                "zariski_tangent": zariski,
                "resolution_counts": t.resolution_counts,
                "minimal_model_counts": counts,
                "bases": bases,
                "coordinates": coords,
            }),
        );
        Ok(())
    }

    fn classify(&mut self) -> Result<()> {
        if self.spec.max_index < 3 {
            return Err(Error::InvalidInput("task 'classify' needs max_index of at least 3".into()));
        }
        let t = self.table()?.clone();
        let c = classify_with(&self.spec.model, &t)?;
        self.sections.insert("classify".into(), json!({ "kind": c.kind.to_string(), "certificate": c.certificate }));
        Ok(())
    }

    fn bracket(&mut self) -> Result<()> {
        let n = self.spec.max_index;
        let lie = self.lie()?.clone();
        let mut tables = Map::new();
        for i in 1..n {
            for j in i..=n - i {
                let t = lie.bracket_table(i, j)?;
                let matrices: Vec<Value> = (0..t.target.len())
                    .map(|w| {
                        Value::Array(
                            t.constants
                                .iter()
                                .map(|row| Value::Array(row.iter().map(|v| q_str(&v[w])).collect()))
                                .collect(),
                        )
                    })
                    .collect();
                tables.insert(
                    format!("T{i}xT{j}"),
                    json!({ "left": t.left, "right": t.right, "target": t.target, "matrices": matrices }),
                );
            }
        }
        self.check("bracket.antisymmetry", lie.check_antisymmetry()?);
        self.check("bracket.jacobi", lie.check_jacobi()?);
        if self.spec.model.ngens() == 1 && n >= 2 {
            let ok = hessian_agrees(&self.spec.model, &lie)?;
            self.check("bracket.hessian", ok);
        }
        self.sections.insert("bracket".into(), Value::Object(tables));
        Ok(())
    }

    fn cone_task(&mut self) -> Result<()> {
        let (cone, complex) = self.cone()?.clone();
        let t2 = if self.spec.max_index >= 2 { Some(self.table()?.dims[1]) } else { None };
        if let Some(t2) = t2 {
            self.check("cone.t2_matches_tangent", complex.t2_dim() == t2);
        }
        let homogeneous = cone.fiber_ideal.iter().all(|g| {
            let lo = g.lowest_degree();
            lo.is_some() && lo == g.total_degree()
        });
        self.check("cone.fiber_homogeneous", homogeneous);
        let fnames = cone.fiber_names().to_vec();
        self.sections.insert(
            "cone".into(),
            json!({
                "variables": cone.names,
                "cone_ideal": cone.cone_ideal.iter().map(|g| g.to_string_with(&cone.names)).collect::<Vec<_>>(),
                "fiber_ideal": cone.fiber_ideal.iter().map(|g| g.to_string_with(&fnames)).collect::<Vec<_>>(),
                "ds": matrix_json(&complex.ds),
                "delta": matrix_json(&complex.delta),
                "t2_dim": complex.t2_dim(),
                "t2_basis": complex.t2_basis.iter().map(|v| vec_json(v)).collect::<Vec<_>>(),
            }),
        );
        Ok(())
    }

    fn obstruct(&mut self) -> Result<()> {
        let (cone, complex) = self.cone()?.clone();
        let tn = jet_names();
        let mut jets = Vec::new();
        let mut jets_ok = true;
        for jet in &self.spec.jets {
            let n = JobSpec::jet_order(jet);
            let outcome = curvilinear_obstruction(&self.spec.model, jet, n)?;
            let c = outcome.class();
            jets_ok &= cone.fiber_contains_point(&c.raw)? && complex.in_kernel(&c.raw);
            let mut entry = class_json(c, &tn);
            let se = SmallExtensionClass { outcome: outcome.clone(), power: n };
            entry.insert("small_extension".into(), Value::String(se.to_string()));
            entry.insert("extends".into(), Value::Bool(outcome.extends()));
            if let CurvilinearOutcome::Extends { extension, .. } = &outcome {
                entry.insert(
                    "extension".into(),
                    Value::Array(extension.iter().map(|p| Value::String(p.to_string_with(&tn))).collect()),
                );
            }
            jets.push(Value::Object(entry));
        }
        let sweep = self.sweep()?.clone();
        self.check("obstruct.jets_in_cone", jets_ok);
        self.check("obstruct.sweep_in_cone", sweep.all_in_cone);
        self.check("obstruct.sweep_in_kernel", sweep.all_in_kernel);
        let classes: Vec<Value> = sweep
            .classes
            .iter()
            .map(|c| {
                let mut m = Map::new();
                m.insert("order".into(), json!(c.order));
                m.insert("raw".into(), vec_json(&c.raw));
                m.insert("class".into(), vec_json(&c.class));
                Value::Object(m)
            })
            .collect();
        self.sections.insert(
            "obstruct".into(),
            json!({
                "jets": jets,
                "sweep": {
                    "order": self.spec.sweep.max_order,
                    "grid": self.spec.sweep.grid,
                    "jets_examined": sweep.jets_examined,
                    "classes": classes,
                    "obstructed": sweep.obstructed().count(),
                    "all_in_cone": sweep.all_in_cone,
                    "all_in_kernel": sweep.all_in_kernel,
                    "spans_cone": sweep.spans_cone,
                },
            }),
        );
        Ok(())
    }

    fn cosection(&mut self) -> Result<()> {
        let sigma = self.spec.cosection.clone().ok_or_else(|| Error::InvalidInput("no cosection given".into()))?;
        sigma.certify(&self.spec.model)?;
        let (cone, complex) = self.cone()?.clone();
        let sweep = self.sweep()?.clone();
        let r = cosection_check_with(&self.spec.model, &sigma, &cone, &complex, &sweep)?;
        self.check("cosection.verdicts", r.all_pass());
        self.sections.insert(
            "cosection".into(),
            json!({
                "certificate": r.certificate.to_string(),
                "sigma_at_point": vec_json(&r.sigma_at_point),
                "descends": r.descends,
                "vanishes_on_cone": r.vanishes_on_cone,
                "kills_classes": r.kills_classes,
                "classes_checked": r.classes_checked,
            }),
        );
        Ok(())
    }
}

fn class_json(c: &ObstructionClass, tn: &[String]) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("order".into(), json!(c.order));
    m.insert("raw".into(), vec_json(&c.raw));
    m.insert("class".into(), vec_json(&c.class));
    m.insert("jet".into(), Value::Array(c.jet.iter().map(|p| Value::String(p.to_string_with(tn))).collect()));
    m
}

/// For a single generator singular at the point, `T^1 x T^1 -> T^2` is the Hessian.
fn hessian_agrees(model: &crate::poly::PointedModel, lie: &TangentLie) -> Result<bool> {
    let local = translate_to_origin(model)?;
    let f = &local.generators[0];
    let m = local.nvars();
    let origin = vec![Rational::from_integer(0.into()); m];
    let gradient_zero = (0..m).all(|i| evaluate(&f.derivative(i), &origin).map(|v| v == origin[0]).unwrap_or(false));
    if !gradient_zero {
        return Ok(true);
    }
    let t = lie.bracket_table(1, 1)?;
    for a in 0..m {
        for b in 0..m {
            let h = evaluate(&f.derivative(a).derivative(b), &origin)?;
            if t.constants[a][b] != vec![h] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn input_json(spec: &JobSpec) -> Value {
    let vars = &spec.model.variables;
    let tn = jet_names();
    let mut m = Map::new();
    m.insert("variables".into(), strings(vars));
    m.insert(
        "ideal".into(),
        Value::Array(spec.model.generators.iter().map(|g| Value::String(g.to_string_with(vars))).collect()),
    );
    m.insert("point".into(), vec_json(&spec.model.point));
    m.insert("max_index".into(), json!(spec.max_index));
    m.insert("tasks".into(), Value::Array(spec.expanded_tasks().iter().map(|t| json!(t.name())).collect()));
    if let Some(c) = &spec.cosection {
        m.insert(
            "cosection".into(),
            Value::Array(c.components.iter().map(|p| Value::String(p.to_string_with(vars))).collect()),
        );
    }
    if !spec.jets.is_empty() {
        m.insert(
            "jets".into(),
            Value::Array(
                spec.jets
                    .iter()
                    .map(|j| Value::Array(j.iter().map(|p| Value::String(p.to_string_with(&tn))).collect()))
                    .collect(),
            ),
        );
    }
    m.insert(
        "sweep".into(),
        json!({ "order": spec.sweep.max_order, "grid": spec.sweep.grid, "seed": spec.sweep.seed, "samples": spec.sweep.random_samples }),
    );
    Value::Object(m)
}

pub fn run_job(spec: &JobSpec, options: &RunOptions) -> Report {
    let mut runner = Runner {
        spec,
        budget: Budget::with_seconds(spec.caps.generators, spec.caps.seconds),
        sections: Map::new(),
        checks: BTreeMap::new(),
        timing: BTreeMap::new(),
        table: None,
        lie: None,
        cone: None,
        sweep: None,
    };
    let mut status = Status::Ok;
    let mut error = None;
    for task in spec.expanded_tasks() {
        let start = Instant::now();
        let r = runner.run(task);
        runner.timing.insert(task.name().into(), start.elapsed().as_secs_f64());
        if let Err(e) = r {
            status = Status::of_error(&e);
            error = Some(json!({ "task": task.name(), "message": e.to_string() }));
            break;
        }
    }
    if status == Status::Ok && runner.checks.values().any(|ok| !ok) {
        status = Status::InvariantFailure;
    }
    let mut root = runner.sections;
    root.insert("tool".into(), json!({ "name": "cotangent", "version": env!("CARGO_PKG_VERSION") }));
    root.insert("input".into(), input_json(spec));
    root.insert("checks".into(), json!(runner.checks));
    root.insert("status".into(), json!(status.name()));
    if let Some(e) = error {
        root.insert("error".into(), e);
    }
    if options.timing {
        root.insert("timing".into(), json!(runner.timing));
    }
    Report { value: Value::Object(root), status }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(if *b { "pass".into() } else { "FAIL".into() }),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("({})", a.iter().map(|x| scalar_text(x).unwrap()).collect::<Vec<_>>().join(", ")))
        }
        Value::Array(a) if a.iter().all(|x| x.is_array()) && a.iter().all(|x| scalar_text(x).is_some()) => {
            Some(format!("[{}]", a.iter().map(|x| scalar_text(x).unwrap()).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn render_into(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar_text(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render_into(out, x, indent + 1);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar_text(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        render_into(out, x, indent + 1);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar_text(other).unwrap_or_default());
        }
    }
}

/// Indented plain-text rendering of a report.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    render_into(&mut out, v, 0);
    out
}

/// Resolution generators, linearized matrices and minimal-model survivors.
pub fn explain(spec: &JobSpec) -> Result<String> {
    let n = spec.max_index;
    let budget = Budget::with_seconds(spec.caps.generators, spec.caps.seconds);
    let res = resolve_through_within(&spec.model, n, &budget)?;
    let fiber = cotangent_fiber(&res, n)?;
    let mm = minimize_at_origin(&res)?;
    let mut out = String::new();
    let _ = writeln!(out, "# resolution (verified through degree {})", res.verified_through);
    out.push_str(&res.dump());
    let _ = writeln!(out, "# linearized cotangent fiber");
    for (j, names) in fiber.spaces.iter().enumerate() {
        let _ = writeln!(out, "V{j} = <{}>", names.join(", "));
    }
    for (j, b) in fiber.boundaries.iter().enumerate() {
        let _ = writeln!(out, "d{} : V{} -> V{}", j + 1, j + 1, j);
        for r in b.to_rows() {
            let _ = writeln!(out, "  [{}]", r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "));
        }
    }
    let _ = writeln!(out, "# minimal model survivors");
    for d in 0..n {
        let names: Vec<&str> = mm.alive_of_degree(d).iter().map(|&i| mm.names[i].as_str()).collect();
        let _ = writeln!(out, "T{} <- degree {}: <{}>", d + 1, d, names.join(", "));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::job::parse_job;

    fn job(ideal: &str, vars: &str, extra: &str) -> JobSpec {
        let nv = vars.split(',').count();
        let point = vec!["\"0\""; nv].join(", ");
        parse_job(&format!(
            "variables = [{vars}]\nideal = [{ideal}]\npoint = [{point}]\nmax_index = 4\ntasks = [\"all\"]\n{extra}"
        ))
        .unwrap()
    }

    #[test]
    fn node_report() {
        let r = run_job(&job("\"x*y\"", "\"x\", \"y\"", ""), &RunOptions::default());
        assert_eq!(r.status, Status::Ok, "{}", r.to_json());
        let v = &r.value;
        assert_eq!(v["tangent"]["dims"], json!([2, 1, 0, 0]));
        assert_eq!(v["classify"]["kind"], "lci");
        assert_eq!(v["cone"]["cone_ideal"], json!(["x*y"]));
        assert_eq!(v["bracket"]["T1xT1"]["matrices"], json!([[["0", "1"], ["1", "0"]]]));
    }

    #[test]
    fn parabola_and_fat_point() {
        let r = run_job(&job("\"y - x^2\"", "\"x\", \"y\"", ""), &RunOptions::default());
        assert_eq!(r.status, Status::Ok);
        assert_eq!(r.value["tangent"]["dims"], json!([1, 0, 0, 0]));
        assert_eq!(r.value["classify"]["kind"], "smooth");
        let r = run_job(&job("\"x^2\", \"x*y\", \"y^2\"", "\"x\", \"y\"", ""), &RunOptions::default());
        assert_eq!(r.status, Status::Ok, "{:?}", r.failed_checks());
        assert_eq!(r.value["tangent"]["dims"], json!([2, 3, 2, 3]));
        assert_eq!(r.value["classify"]["kind"], "general");
    }

    #[test]
    fn determinism_and_statuses() {
        let spec = job("\"x*y\"", "\"x\", \"y\"", "jets = [[\"t\", \"t\"]]\n");
        let a = run_job(&spec, &RunOptions::default()).to_json();
        let b = run_job(&spec, &RunOptions::default()).to_json();
        assert_eq!(a, b);
        let capped = job("\"x^2\", \"x*y\", \"y^2\"", "\"x\", \"y\"", "[caps]\ngenerators = 4\n");
        let r = run_job(&capped, &RunOptions::default());
        assert_eq!(r.status, Status::ResourceLimit);
        assert!(r.value.get("error").is_some());
        let bad = job("\"x*y\", \"0\"", "\"x\", \"y\"", "cosection = [\"1\", \"0\"]\n");
        assert_eq!(run_job(&bad, &RunOptions::default()).status, Status::InputError);
    }

    #[test]
    fn explain_lists_generators() {
        let text = explain(&job("\"x*y\"", "\"x\", \"y\"", "")).unwrap();
        assert!(text.contains("e1 : 1 : (x*y)"));
        assert!(text.contains("T2 <- degree 1: <e1>"));
    }
}
