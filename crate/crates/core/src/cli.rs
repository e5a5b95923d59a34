//! Command-line front end. Every command prints one JSON document; suites report
//! `{"checks": [{"name", "status", "witness"}]}`. Exit codes: 0 success, 1 malformed
//! input, 2 a mathematical check failed.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::GAElement;
use crate::arith::{gcd_u64, parse_rational, prime_factors, CycloNumber};
use crate::chars::{CentralElement, CharacterTable};
use crate::galg::{evaluation_image, gram_matrix, reduced_norm, rows_as_elements, wedge, GAMatrix, GAModule, ModHom, ModuleElement};
use crate::groups::{catalog, Group, GroupSpec};
use crate::lfun::{
    dirichlet_l_at_0, idempotent_equivalence_check, order_of_vanishing, parse_places, random_abelian_setup,
    random_abstract_setup, splitting_idempotent, stickelberger, GaloisSetup, PlaceLabel,
};
use crate::reps::Wedderburn;
use crate::systems::{
    acyclic_value, distribution_residuals, finite_derivative, gamma_change, hsm_certificates, ker_delta_test,
    stickelberger_system, upsilon_basis, primitive_equiv, ProductTower, SystemsError, TowerDatum, TwoTermComplex,
};

#[derive(Parser, Debug)]
#[command(name = "eqk", about = "Exact group-algebra computations and verification suites")]
struct Cli {
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Character table of a catalog group or a JSON group file.
    Chartable {
        #[arg(long)]
        group: String,
    },
    /// Reduced norm of the matrix in a complex file.
    Nrd {
        #[arg(long)]
        complex: PathBuf,
    },
    /// Reduced exterior product of the rows of the matrix in a complex file.
    Wedge {
        #[arg(long)]
        complex: PathBuf,
    },
    /// Stickelberger element of Q(ζ_f)/Q.
    Stickelberger {
        #[arg(long)]
        conductor: u64,
        #[arg(long = "S")]
        s: String,
        #[arg(long = "T", default_value = "")]
        t: String,
    },
    /// Splitting idempotent for Σ₁ ⊂ S over Q(ζ_f)/Q, with the three-way support check.
    Idempotent {
        #[arg(long)]
        conductor: u64,
        #[arg(long = "S")]
        s: String,
        #[arg(long, default_value = "")]
        sigma1: String,
    },
    /// Verification suites.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Finite-level derivative over a direct-product tower file.
    Derive {
        #[arg(long)]
        tower: PathBuf,
        #[arg(long, default_value_t = 1)]
        gamma: u64,
        #[arg(long)]
        order: usize,
    },
    /// Membership checks.
    Check {
        #[command(subcommand)]
        what: CheckKind,
    },
}

#[derive(Subcommand, Debug)]
enum Suite {
    /// Randomized algebraic identities.
    Identities {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
    /// Distribution relation along a cyclotomic tower file.
    Distribution {
        #[arg(long)]
        tower: PathBuf,
        #[arg(long = "T", default_value = "")]
        t: String,
    },
    /// Integrality of T-modified Stickelberger elements.
    Integrality {
        #[arg(long, value_delimiter = ',')]
        conductor: Vec<u64>,
        #[arg(long = "T", default_value = "7")]
        t: String,
    },
}

#[derive(Subcommand, Debug)]
enum CheckKind {
    /// p-unit test of the acyclic value of a complex.
    Primitive {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long, value_delimiter = ',')]
        p: Vec<u64>,
    },
    /// Positivity of symplectic coordinates of a central element.
    Hsm {
        #[arg(long)]
        complex: PathBuf,
    },
    /// Good-prime boundary-kernel test of a central element.
    Kerdelta {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long, value_delimiter = ',')]
        p: Vec<u64>,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
    pub out: Option<PathBuf>,
}

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type CmdResult = Result<Value, InputError>;

fn check(name: &str, pass: bool, witness: Value) -> Value {
    json!({ "name": name, "status": if pass { "pass" } else { "fail" }, "witness": witness })
}

fn skipped(name: &str, witness: Value) -> Value {
    json!({ "name": name, "status": "skip", "witness": witness })
}

/// Parses `argv` (including the program name), runs the command and returns the report.
pub fn run_command(argv: &[String]) -> Outcome {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            return Outcome { code, report: json!({ "error": e.to_string() }), out: None };
        }
    };
    let out = cli.out.clone();
    match dispatch(cli.cmd) {
        Ok(report) => {
            let failed = report
                .get("checks")
                .and_then(Value::as_array)
                .is_some_and(|cs| cs.iter().any(|c| c["status"] == "fail"));
            Outcome { code: if failed { 2 } else { 0 }, report, out }
        }
        Err(InputError(msg)) => Outcome { code: 1, report: json!({ "error": msg }), out },
    }
}

fn dispatch(cmd: Cmd) -> CmdResult {
    match cmd {
        Cmd::Chartable { group } => chartable(&group),
        Cmd::Nrd { complex } => nrd(&complex),
        Cmd::Wedge { complex } => wedge_cmd(&complex),
        Cmd::Stickelberger { conductor, s, t } => stickelberger_cmd(conductor, &s, &t),
        Cmd::Idempotent { conductor, s, sigma1 } => idempotent_cmd(conductor, &s, &sigma1),
        Cmd::Verify { suite: Suite::Identities { seed, cases } } => Ok(identities_suite(seed, cases)),
        Cmd::Verify { suite: Suite::Distribution { tower, t } } => distribution_cmd(&tower, &t),
        Cmd::Verify { suite: Suite::Integrality { conductor, t } } => integrality_cmd(&conductor, &t),
        Cmd::Derive { tower, gamma, order } => derive_cmd(&tower, gamma, order),
        Cmd::Check { what: CheckKind::Primitive { complex, p } } => primitive_cmd(&complex, &p),
        Cmd::Check { what: CheckKind::Hsm { complex } } => hsm_cmd(&complex),
        Cmd::Check { what: CheckKind::Kerdelta { complex, p } } => kerdelta_cmd(&complex, &p),
    }
}

fn read_json(path: &Path) -> Result<Value, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn group_arg(s: &str) -> Result<Group, InputError> {
    let path = Path::new(s);
    if path.exists() {
        let spec: GroupSpec = serde_json::from_value(read_json(path)?)?;
        return Ok(spec.build()?);
    }
    Ok(catalog(s)?)
}

fn group_field(v: &Value) -> Result<Group, InputError> {
    let spec: GroupSpec = serde_json::from_value(v.get("group").cloned().ok_or_else(|| InputError("missing group".into()))?)?;
    Ok(spec.build()?)
}

fn cyclo_value(v: &Value) -> Result<CycloNumber, InputError> {
    match v {
        Value::String(s) => Ok(CycloNumber::rational(parse_rational(s)?)),
        Value::Number(n) => Ok(CycloNumber::from_int(n.as_i64().ok_or_else(|| InputError(format!("{n} is not an integer")))?)),
        other => Ok(serde_json::from_value(other.clone())?),
    }
}

fn central_field(v: &Value) -> Result<CentralElement, InputError> {
    let g = group_field(v)?;
    let table = CharacterTable::of(&g)?;
    let coords = v
        .get("central")
        .and_then(Value::as_array)
        .ok_or_else(|| InputError("missing central coordinates".into()))?
        .iter()
        .map(cyclo_value)
        .collect::<Result<Vec<_>, _>>()?;
    if coords.len() != table.len() {
        return Err(InputError(format!("expected {} coordinates, got {}", table.len(), coords.len())));
    }
    Ok(CentralElement::new(&table, coords))
}

fn chartable(name: &str) -> CmdResult {
    let g = group_arg(name)?;
    let table = CharacterTable::of(&g)?;
    let verified = table.verify();
    Ok(json!({
        "table": table.to_json(),
        "checks": [check("orthogonality", verified.is_ok(), json!({ "degrees": table.degrees() }))],
    }))
}

fn matrix_field(v: &Value) -> Result<(Group, GAMatrix), InputError> {
    let g = group_field(v)?;
    let phi = GAMatrix::from_json(&g, v.get("phi").ok_or_else(|| InputError("missing phi".into()))?)?;
    Ok((g, phi))
}

fn nrd(path: &Path) -> CmdResult {
    let (g, phi) = matrix_field(&read_json(path)?)?;
    let w = Wedderburn::of(&g)?;
    Ok(json!({ "degrees": w.table().degrees(), "nrd": reduced_norm(&w, &phi)?.to_json() }))
}

fn wedge_cmd(path: &Path) -> CmdResult {
    let (g, phi) = matrix_field(&read_json(path)?)?;
    let w = Wedderburn::of(&g)?;
    let module = GAModule::free(&w, phi.cols());
    let x = wedge(&module, &rows_as_elements(&module, &phi));
    Ok(json!({ "degrees": w.table().degrees(), "wedge": x.0.to_json() }))
}

/// Rational values as "p/q" strings, other cyclotomic values as objects.
fn exact_json(c: &CycloNumber) -> Value {
    match c.to_rational() {
        Some(q) => Value::String(q.to_string()),
        None => serde_json::to_value(c).unwrap(),
    }
}

fn labels(ls: &[PlaceLabel]) -> Vec<String> {
    ls.iter().map(ToString::to_string).collect()
}

fn stickelberger_cmd(f: u64, s: &str, t: &str) -> CmdResult {
    let s = parse_places(s)?;
    let t = parse_places(t)?;
    let th = stickelberger(f, &s, &t)?;
    let setup = GaloisSetup::cyclotomic(f, &[])?;
    let coeffs: serde_json::Map<String, Value> = th
        .group_coefficients()
        .iter()
        .enumerate()
        .map(|(g, c)| (setup.residue(g).unwrap().to_string(), exact_json(c)))
        .collect();
    Ok(json!({
        "conductor": f,
        "S": labels(&s),
        "T": labels(&t),
        "degrees": th.value.table().degrees(),
        "coordinates": th.value.coords().iter().map(exact_json).collect::<Vec<_>>(),
        "coefficients": coeffs,
        "rational": th.rational,
        "integral": th.is_integral(),
    }))
}

fn idempotent_cmd(f: u64, s: &str, sigma1: &str) -> CmdResult {
    let s = parse_places(s)?;
    let sigma1 = labels(&parse_places(sigma1)?);
    let setup = GaloisSetup::cyclotomic(f, &s)?;
    let s = labels(&s);
    let e = splitting_idempotent(&setup, &s, &sigma1)?;
    let checks: Vec<Value> = (0..e.table().len())
        .map(|chi| match idempotent_equivalence_check(&setup, &s, &sigma1, chi) {
            Ok(r) => check("idempotent_equivalence", true, json!({ "character": chi, "supported": r.idempotent_support })),
            Err(err) => check("idempotent_equivalence", false, json!({ "character": chi, "error": err.to_string() })),
        })
        .collect();
    Ok(json!({ "idempotent": e.to_json(), "checks": checks }))
}

const IDENTITY_GROUPS: [&str; 3] = ["s3", "q8", "d4"];

fn random_matrix_case(rng: &mut ChaCha8Rng, names: &[&str], max_size: usize) -> (Group, Arc<Wedderburn>, usize) {
    let name = *names.choose(rng).unwrap();
    let g = catalog(name).expect("catalog group");
    let w = Wedderburn::of(&g).expect("catalog representations");
    (g, w, rng.gen_range(1..=max_size))
}

fn nrd_case(rng: &mut ChaCha8Rng) -> Value {
    let (g, w, n) = random_matrix_case(rng, &IDENTITY_GROUPS, 2);
    let m = GAMatrix::random_integral(&g, n, n, 2, rng);
    let k = GAMatrix::random_integral(&g, n, n, 2, rng);
    let lhs = reduced_norm(&w, &m.mul(&k).unwrap()).unwrap();
    let rhs = &reduced_norm(&w, &m).unwrap() * &reduced_norm(&w, &k).unwrap();
    check("nrd_multiplicative", lhs == rhs, json!({ "group": g.name(), "size": n }))
}

fn wedge_case(rng: &mut ChaCha8Rng) -> Value {
    let (g, w, r) = random_matrix_case(rng, &["s3", "q8"], 2);
    let module = GAModule::free(&w, r);
    let phi = GAMatrix::random_integral(&g, r, r, 2, rng);
    let basis: Vec<ModuleElement> = (0..r).map(|k| module.free_basis(k)).collect();
    let lhs = wedge(&module, &rows_as_elements(&module, &phi));
    let rhs = wedge(&module, &basis).0.scale(&reduced_norm(&w, &phi).unwrap());
    check("wedge_endomorphism", lhs.0 == rhs, json!({ "group": g.name(), "rank": r }))
}

fn gram_case(rng: &mut ChaCha8Rng) -> Value {
    let (g, w, n) = random_matrix_case(rng, &["s3", "q8", "c4"], 3);
    let r = rng.gen_range(1..=n.min(2));
    let module = GAModule::free(&w, n);
    let ms: Vec<ModuleElement> = (0..r)
        .map(|_| module.free_element(&(0..n).map(|_| GAElement::random_integral(&g, 2, rng)).collect::<Vec<_>>()))
        .collect();
    let phis: Vec<ModHom> = (0..r)
        .map(|_| ModHom::free(&module, (0..n).map(|_| GAElement::random_integral(&g, 2, rng)).collect()).unwrap())
        .collect();
    let lhs = evaluation_image(&wedge(&module, &ms), &phis).unwrap();
    let rhs = reduced_norm(&w, &gram_matrix(&module, &phis, &ms).unwrap().transpose()).unwrap();
    check("gram_identity", lhs == rhs, json!({ "group": g.name(), "rank": n, "degree": r }))
}

const ABELIAN_CONDUCTORS: [u64; 8] = [3, 4, 5, 7, 8, 9, 12, 15];

fn change_of_s_case(rng: &mut ChaCha8Rng) -> Value {
    let (setup, s) = random_abelian_setup(&ABELIAN_CONDUCTORS, rng).unwrap();
    let f = setup.conductor().unwrap();
    let extra: Vec<u64> = [2u64, 3, 5, 7, 11, 13]
        .into_iter()
        .filter(|q| f % q != 0 && !s.contains(&PlaceLabel::Prime(*q)))
        .collect();
    let q = *extra.choose(rng).unwrap();
    let mut s2 = s.clone();
    s2.push(PlaceLabel::Prime(q));
    let small = stickelberger(f, &s, &[]).unwrap().value;
    let big = stickelberger(f, &s2, &[]).unwrap().value;
    let g = setup.group();
    let fr = setup.sigma(q as i64).unwrap();
    let factor = &GAElement::one(g) - &GAElement::basis(g, g.inv(fr));
    let expected = &small * &small.table().wedderburn_coords(&factor).unwrap();
    check("change_of_s", big == expected, json!({ "conductor": f, "S": labels(&s), "added": q }))
}

fn vanishing_case(rng: &mut ChaCha8Rng) -> Value {
    let (setup, s) = random_abelian_setup(&ABELIAN_CONDUCTORS, rng).unwrap();
    let table = CharacterTable::of(setup.group()).unwrap();
    let names = labels(&s);
    let mut ok = true;
    for i in 0..table.len() {
        let ord = order_of_vanishing(table.get(i), &setup, &names).unwrap();
        let l = dirichlet_l_at_0(&setup.dirichlet(table.get(i)).unwrap(), &s, &[]).unwrap();
        ok &= (ord == 0) == !l.is_zero();
        if table.get(i).is_trivial() {
            ok &= ord == s.len() - 1;
        }
    }
    check("order_of_vanishing", ok, json!({ "conductor": setup.conductor(), "S": names }))
}

fn idempotent_case(rng: &mut ChaCha8Rng) -> Value {
    let name = *["s3", "d4", "c6"].choose(rng).unwrap();
    let g = catalog(name).unwrap();
    let setup = random_abstract_setup(&g, rng).unwrap();
    let s: Vec<String> = setup.places().iter().map(|p| p.label.clone()).collect();
    let k = rng.gen_range(0..s.len());
    let mut pool = s.clone();
    pool.shuffle(rng);
    let sigma1: Vec<String> = pool.into_iter().take(k).collect();
    let table = CharacterTable::of(&g).unwrap();
    let ok = (0..table.len()).all(|chi| idempotent_equivalence_check(&setup, &s, &sigma1, chi).is_ok());
    check("idempotent_equivalence", ok, json!({ "group": name, "S": s, "sigma1": sigma1 }))
}

/// One randomized case; the generator is ChaCha8 seeded by `seed` on stream `index`.
fn identity_case(seed: u64, index: usize) -> Value {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let mut c = match index % 6 {
        0 => nrd_case(&mut rng),
        1 => wedge_case(&mut rng),
        2 => gram_case(&mut rng),
        3 => change_of_s_case(&mut rng),
        4 => vanishing_case(&mut rng),
        _ => idempotent_case(&mut rng),
    };
    c["witness"]["case"] = json!(index);
    c
}

/// Runs `cases` randomized identity checks in parallel, reported in case order.
pub fn identities_suite(seed: u64, cases: usize) -> Value {
    let checks: Vec<Value> = (0..cases).into_par_iter().map(|i| identity_case(seed, i)).collect();
    json!({ "suite": "identities", "seed": seed, "cases": cases, "checks": checks })
}

fn distribution_cmd(path: &Path, t: &str) -> CmdResult {
    let tower = TowerDatum::from_json(&read_json(path)?)?;
    let t = parse_places(t)?;
    let sys = stickelberger_system(&tower, &t)?;
    let res = distribution_residuals(&sys)?;
    let levels = tower.levels();
    let checks: Vec<Value> = res
        .iter()
        .map(|r| {
            check(
                "distribution",
                r.holds(),
                json!({
                    "lower": levels[r.lower].conductor,
                    "upper": levels[r.upper].conductor,
                    "residual": r.residual.iter().map(|c| serde_json::to_value(c).unwrap()).collect::<Vec<_>>(),
                }),
            )
        })
        .collect();
    Ok(json!({ "suite": "distribution", "T": labels(&t), "checks": checks }))
}

/// T is admissible for Q(ζ_f) when some q ∈ T divides neither f nor the number of roots
/// of unity in the field.
fn admissible(f: u64, t: &[PlaceLabel]) -> bool {
    let w = if f.is_multiple_of(2) { f } else { 2 * f };
    t.iter().filter_map(PlaceLabel::prime).any(|q| w % q != 0)
}

fn integrality_cmd(conductors: &[u64], t: &str) -> CmdResult {
    let t = parse_places(t)?;
    let conductors: Vec<u64> = if conductors.is_empty() { ABELIAN_CONDUCTORS.to_vec() } else { conductors.to_vec() };
    let mut checks = Vec::new();
    for &f in &conductors {
        let mut s = vec![PlaceLabel::Infinite];
        s.extend(prime_factors(f).into_iter().map(PlaceLabel::Prime));
        let witness = json!({ "conductor": f, "S": labels(&s), "T": labels(&t) });
        if t.iter().filter_map(PlaceLabel::prime).any(|q| gcd_u64(q, f) != 1) || !admissible(f, &t) {
            checks.push(skipped("stickelberger_integrality", witness));
            continue;
        }
        let th = stickelberger(f, &s, &t)?;
        checks.push(check("stickelberger_integrality", th.is_integral(), witness));
    }
    Ok(json!({ "suite": "integrality", "checks": checks }))
}

fn derive_cmd(path: &Path, gamma: u64, order: usize) -> CmdResult {
    let v = read_json(path)?;
    let spec: GroupSpec = serde_json::from_value(v.get("base").cloned().ok_or_else(|| InputError("missing base".into()))?)?;
    let base = spec.build()?;
    let p = v.get("p").and_then(Value::as_u64).ok_or_else(|| InputError("missing p".into()))?;
    let values = v.get("values").and_then(Value::as_array).ok_or_else(|| InputError("missing values".into()))?;
    let tower = ProductTower::new(&base, p, values.len())?;
    let xs = values
        .iter()
        .enumerate()
        .map(|(i, lv)| {
            let g = tower.group(i + 1);
            let arr = lv.as_array().ok_or_else(|| InputError(format!("level {} must be an array", i + 1)))?;
            if arr.len() != g.order() {
                return Err(InputError(format!("level {} needs {} coefficients", i + 1, g.order())));
            }
            Ok(GAElement::from_coeffs(g, arr.iter().map(cyclo_value).collect::<Result<_, _>>()?))
        })
        .collect::<Result<Vec<_>, InputError>>()?;
    let coeffs = |x: &GAElement| x.coeffs().iter().map(|c| serde_json::to_value(c).unwrap()).collect::<Vec<_>>();
    match finite_derivative(&tower, &xs, order) {
        Ok(r) => {
            let mut checks = vec![check("derivative_divisibility", true, json!({ "order": order }))];
            if gamma != 1 {
                for (i, x) in xs.iter().enumerate() {
                    match gamma_change(&tower, i + 1, x, order, gamma) {
                        Ok(gc) => checks.push(check(
                            "gamma_change",
                            gc.reproduces && gc.scales_by_unit,
                            json!({ "level": i + 1, "gamma": gamma, "derivative": coeffs(&gc.derivative) }),
                        )),
                        Err(SystemsError::BadGenerator(a)) => return Err(InputError(format!("gamma exponent {a} is divisible by p"))),
                        Err(e) => return Err(e.into()),
                    }
                }
            }
            Ok(json!({
                "values": r.values.iter().map(coeffs).collect::<Vec<_>>(),
                "stabilized": r.stabilized,
                "checks": checks,
            }))
        }
        Err(SystemsError::NotDivisible { level, achieved }) => Ok(json!({
            "checks": [check("derivative_divisibility", false, json!({ "order": order, "level": level, "achieved": achieved }))],
        })),
        Err(e) => Err(e.into()),
    }
}

fn primitive_cmd(path: &Path, primes: &[u64]) -> CmdResult {
    let v = read_json(path)?;
    let c = TwoTermComplex::from_json(&v)?;
    if primes.is_empty() {
        return Err(InputError("at least one prime required".into()));
    }
    let table = c.alg.table().clone();
    let id = GAMatrix::identity(c.alg.group(), c.rank());
    let reference = upsilon_basis(&c, &id, &id)?;
    let value = match acyclic_value(&c) {
        Ok(v) => v,
        Err(SystemsError::Singular) => {
            return Ok(json!({ "checks": [check("primitive_basis", false, json!({ "reason": "singular" }))] }));
        }
        Err(e) => return Err(e.into()),
    };
    let image = reference.scaled(&value);
    let mut checks = Vec::new();
    for &p in primes {
        let ok = primitive_equiv(&reference, &image, p)?;
        checks.push(check("primitive_basis", ok, json!({ "p": p, "value": value.to_json(), "degrees": table.degrees() })));
    }
    Ok(json!({ "acyclic_value": value.to_json(), "checks": checks }))
}

fn hsm_cmd(path: &Path) -> CmdResult {
    let x = central_field(&read_json(path)?)?;
    let certs = hsm_certificates(&x)?;
    let witness: Vec<Value> = certs
        .iter()
        .map(|(chi, c)| {
            json!({
                "character": chi,
                "embedding": c.embedding,
                "sign": c.sign,
                "lower": c.lower.to_string(),
                "upper": c.upper.to_string(),
                "precision_bits": c.precision_bits,
            })
        })
        .collect();
    let ok = certs.iter().all(|(_, c)| c.sign == crate::arith::Sign::Positive);
    Ok(json!({ "checks": [check("hsm", ok, json!(witness))] }))
}

fn kerdelta_cmd(path: &Path, primes: &[u64]) -> CmdResult {
    let x = central_field(&read_json(path)?)?;
    let ok = ker_delta_test(&x, primes)?;
    Ok(json!({ "checks": [check("kerdelta", ok, json!({ "primes": primes, "value": x.to_json() }))] }))
}

/// Serializes a report exactly as the binary prints it.
pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Outcome {
        let argv: Vec<String> = std::iter::once("eqk").chain(args.iter().copied()).map(String::from).collect();
        run_command(&argv)
    }

    #[test]
    fn chartable_s3() {
        let o = run(&["chartable", "--group", "s3"]);
        assert_eq!(o.code, 0);
        assert_eq!(o.report["table"]["degrees"], json!([1, 1, 2]));
    }

    #[test]
    fn stickelberger_conductor_3() {
        let o = run(&["stickelberger", "--conductor", "3", "--S", "inf,3"]);
        assert_eq!(o.code, 0);
        let coords = &o.report["coordinates"];
        assert_eq!(coords, &json!(["0", "1/3"]));
        assert_eq!(o.report["coefficients"], json!({ "1": "1/6", "2": "-1/6" }));
    }

    #[test]
    fn empty_suite() {
        let o = run(&["verify", "identities", "--seed", "1", "--cases", "0"]);
        assert_eq!(o.code, 0);
        assert_eq!(o.report["checks"], json!([]));
    }

    #[test]
    fn input_errors_exit_1() {
        assert_eq!(run(&["chartable", "--group", "nope"]).code, 1);
        assert_eq!(run(&["stickelberger", "--conductor", "3", "--S", "inf,3", "--T", "3"]).code, 1);
        assert_eq!(run(&["frobnicate"]).code, 1);
    }

    #[test]
    fn small_suite_passes() {
        let o = run(&["verify", "identities", "--seed", "3", "--cases", "12"]);
        assert_eq!(o.code, 0, "{}", render(&o.report));
        assert_eq!(o.report["checks"].as_array().unwrap().len(), 12);
    }
}
