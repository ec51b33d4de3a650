//! Job specifications and the pipelines behind each subcommand.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use cobarlab_core::comonad::{coaction_of_chains, free_reduced, KCoalgebra};
use cobarlab_core::cosimplicial::{cobar_algebraic, coface_cube, normalize_cosimplicial};
use cobarlab_core::cube::{cocartesian_degree, f_cartesian_check, hdbm_bound, status_of, CheckStatus};
use cobarlab_core::dold_kan::{homotopy_groups, moore_complex};
use cobarlab_core::holim::interchange;
use cobarlab_core::simplicial::FinSimplicialSet;
use cobarlab_core::ss::hss;
use cobarlab_core::sset_json::{from_json, to_json};
use cobarlab_core::tot::tower_connectivity_report;
use cobarlab_core::{homology, Conn, Error, Ring};

use crate::{cache, markdown, Format, Opts, RingArg};

/// Bumped whenever report contents change, so stale cache entries miss.
const REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct JobSpec {
    pub command: String,
    pub input_name: String,
    pub input_sha256: String,
    pub ring: RingArg,
    pub prime: Option<u64>,
    pub depth: usize,
    pub window: i64,
    pub level_cap: usize,
    pub budget: u64,
    pub r_max: usize,
    #[serde(skip)]
    pub input: FinSimplicialSet,
    #[serde(skip)]
    pub cache: Option<PathBuf>,
    #[serde(skip)]
    pub format: Format,
}

pub struct JobError {
    pub error: Error,
    pub violations: Vec<String>,
}

impl From<Error> for JobError {
    fn from(error: Error) -> Self {
        JobError { error, violations: vec![] }
    }
}

pub struct Output {
    pub json: String,
    pub markdown: String,
    pub violations: usize,
}

impl JobSpec {
    pub fn from_opts(command: &str, o: &Opts) -> Result<JobSpec, Error> {
        let path = o.input.as_ref().ok_or_else(|| Error::Input("--input is required".into()))?;
        let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        let input = from_json(&text)?;
        match (o.ring, o.prime) {
            (RingArg::F, None) => return Err(Error::Input("--ring F needs --prime".into())),
            (RingArg::Z, Some(_)) => return Err(Error::Input("--prime only applies to --ring F".into())),
            (RingArg::F, Some(p)) if !is_prime(p) => return Err(Error::Input(format!("{p} is not prime"))),
            _ => {}
        }
        if o.budget == 0 {
            return Err(Error::Input("--budget must be positive".into()));
        }
        if o.window < 0 {
            return Err(Error::Input("--window must be nonnegative".into()));
        }
        let level_cap = o.level_cap.unwrap_or(o.window as usize + 1);
        if o.window > level_cap as i64 - 1 {
            return Err(Error::Input(format!("window {} exceeds level cap {level_cap} minus one", o.window)));
        }
        let canonical = to_json(&input);
        let cache = std::env::var_os("COBARLAB_CACHE").map(PathBuf::from).or_else(|| o.cache.clone());
        Ok(JobSpec {
            command: command.into(),
            input_name: input.name.clone(),
            input_sha256: hex::encode(Sha256::digest(canonical.as_bytes())),
            ring: o.ring,
            prime: o.prime,
            depth: o.depth,
            window: o.window,
            level_cap,
            budget: o.budget,
            r_max: o.r_max,
            input,
            cache,
            format: o.format,
        })
    }

    pub fn ring(&self) -> Ring {
        match self.ring {
            RingArg::Z => Ring::Integers,
            RingArg::F => Ring::PrimeField(self.prime.expect("checked")),
        }
    }

    /// Content address of the report: recipe, input hash and caps.
    pub fn key(&self) -> String {
        let recipe = json!({ "version": REPORT_VERSION, "job": self });
        hex::encode(Sha256::digest(recipe.to_string().as_bytes()))
    }

    fn coalgebra(&self) -> Result<KCoalgebra, Error> {
        if self.ring == RingArg::Z {
            return Err(Error::Input(format!("{} needs --ring F: K is enumerated over a prime field", self.command)));
        }
        coaction_of_chains(&self.input, self.ring(), self.level_cap, self.budget)
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

pub fn run(job: &JobSpec) -> Result<Output, JobError> {
    let violations: Vec<String> = job.input.validate().iter().map(ToString::to_string).collect();
    if !violations.is_empty() {
        return Err(JobError { error: Error::Validation(format!("{} simplicial identity violations", violations.len())), violations });
    }
    let key = job.key();
    let json = match job.cache.as_deref().and_then(|d| cache::read(d, &key)) {
        Some(text) => text,
        None => {
            let report = build(job)?;
            let mut text = serde_json::to_string_pretty(&report).expect("serializable");
            text.push('\n');
            if let Some(dir) = &job.cache {
                // a failed cache write only costs a recomputation later
                let _ = cache::write(dir, &key, &text);
            }
            text
        }
    };
    let value: Value = serde_json::from_str(&json).expect("report is valid json");
    let violations = value["violations"].as_u64().unwrap_or(0) as usize;
    Ok(Output { markdown: markdown::render(&value), json, violations })
}

fn envelope(job: &JobSpec, key: &str, body: Value, violations: usize) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("command".into(), json!(job.command));
    m.insert("job".into(), serde_json::to_value(job).expect("serializable"));
    m.insert("violations".into(), json!(violations));
    m.insert(key.into(), body);
    Value::Object(m)
}

fn build(job: &JobSpec) -> Result<Value, Error> {
    match job.command.as_str() {
        "homology" => homology_report(job),
        "resolve" => resolve_report(job),
        "cube" => cube_report(job),
        "interchange" => interchange_report(job),
        "ss" => ss_report(job),
        other => Err(Error::Input(format!("unknown command {other}"))),
    }
}

#[derive(Serialize)]
struct HomologyRow {
    degree: i64,
    reduced_homology: String,
    homotopy: String,
    agree: bool,
}

fn describe(e: &cobarlab_core::GroupEntry) -> String {
    match (e.rank, e.torsion.is_empty()) {
        (0, true) => "0".into(),
        (r, true) => format!("rank {r}"),
        (0, false) => format!("torsion {:?}", e.torsion),
        (r, false) => format!("rank {r} torsion {:?}", e.torsion),
    }
}

fn homology_report(job: &JobSpec) -> Result<Value, Error> {
    let a = free_reduced(&job.input, job.ring(), job.level_cap)?;
    let h = homology(&moore_complex(&a));
    let pi = homotopy_groups(&a);
    let top = job.window.min(h.certified_through).min(pi.certified_through);
    let rows: Vec<HomologyRow> = (0..=top)
        .map(|k| {
            let (x, y) = (h.at(k), pi.at(k));
            HomologyRow { degree: k, reduced_homology: describe(&x), homotopy: describe(&y), agree: x == y }
        })
        .collect();
    let bad = rows.iter().filter(|r| !r.agree).count();
    let body = json!({ "certified_through": top, "rows": rows });
    Ok(envelope(job, "homology", body, bad))
}

fn resolve_report(job: &JobSpec) -> Result<Value, Error> {
    let y = job.coalgebra()?;
    let built = cobar_algebraic(&y, job.depth, job.level_cap, job.budget)?;
    let z = &built.value;
    let identity_violations = z.validate();
    let mut levels = vec![y.carrier.dims.clone()];
    levels.extend(z.levels.iter().map(|a| a.dims.clone()));
    levels.truncate(job.depth + 1);
    let report = tower_connectivity_report(&y, job.depth, job.window, job.level_cap, job.budget)?;
    let violations = report.violations() + identity_violations.len();
    let mut v = envelope(job, "tower", serde_json::to_value(&report.tower).expect("serializable"), violations);
    v["stages"] = json!({
        "levels": levels,
        "cosimplicial_identities": if identity_violations.is_empty() { "pass".to_string() } else { identity_violations.join("; ") },
        "into_stage": report.into_stage,
        "notice": built.notice.or(report.notice),
    });
    Ok(v)
}

fn cube_report(job: &JobSpec) -> Result<Value, Error> {
    let n = job.depth;
    if !(1..=3).contains(&n) {
        return Err(Error::Input(format!("cube dimension {n} not supported; 1 to 3")));
    }
    // claimed cartesianness of the faces: 3 for single coface maps, 4 for
    // pairs, the whole coface cube is cartesian
    let claim = |d: usize| if d == n { Conn::Infinite } else if d == 1 { Conn::Finite(3) } else { Conn::Finite(4) };
    let full = (1usize << n) - 1;
    let k: BTreeMap<usize, Conn> = (1..=full).map(|v| (v, claim(v.count_ones() as usize))).collect();
    let bound = hdbm_bound(n, &k)?;
    let y = job.coalgebra()?;
    let built = cobar_algebraic(&y, n - 1, job.level_cap, job.budget)?;
    if built.value.depth() < n - 1 {
        return Err(Error::Budget { level: job.level_cap, needed: built.notice.unwrap_or_default(), budget: job.budget });
    }
    let z = normalize_cosimplicial(&built.value);
    let cube = coface_cube(&z, n - 1)?;
    let cart = f_cartesian_check(&cube, claim, job.window);
    let cocart = cocartesian_degree(&cube, job.window);
    let status = status_of(&cocart, bound.k);
    let violations = cart.violations + usize::from(status == CheckStatus::Violation);
    let body = json!({
        "n": n,
        "bound": bound,
        "face_claims": k.iter().map(|(v, c)| json!({"set": cobarlab_core::cube::set_string(*v), "k": c})).collect::<Vec<_>>(),
        "cartesian": cart,
        "cocartesian": cocart,
        "cocartesian_status": status,
    });
    Ok(envelope(job, "cube", body, violations))
}

fn interchange_report(job: &JobSpec) -> Result<Value, Error> {
    let y = job.coalgebra()?;
    let rep = interchange(&y, job.depth, job.window, job.budget)?;
    let violations = usize::from(rep.status == CheckStatus::Violation);
    let mut body = serde_json::to_value(&rep).expect("serializable");
    body["summary"] = json!(if rep.exact_isomorphism { "exact isomorphism".to_string() } else { format!("{}", rep.verdict) });
    Ok(envelope(job, "interchange", body, violations))
}

fn ss_report(job: &JobSpec) -> Result<Value, Error> {
    let y = job.coalgebra()?;
    let built = cobar_algebraic(&y, job.depth, job.level_cap, job.budget)?;
    let z = normalize_cosimplicial(&built.value);
    let s = hss(&z, job.r_max, job.window)?;
    let c = &s.convergence;
    let collapsed = s.pages.iter().find(|p| p.r == 2).is_some_and(|p| p.differentials.iter().all(|d| d.rank == 0));
    let summary = match (collapsed, c.concentrated_in_s0) {
        (true, true) => "collapsed at E², concentrated in s=0".to_string(),
        (true, false) => "collapsed at E²".to_string(),
        _ => "nontrivial differentials from E²".to_string(),
    };
    let violations = usize::from(!(c.stabilizes && c.finitely_many && c.abutment_matches));
    let mut body = serde_json::to_value(&s).expect("serializable");
    body["summary"] = json!(summary);
    body["notice"] = json!(built.notice);
    Ok(envelope(job, "ss", body, violations))
}
