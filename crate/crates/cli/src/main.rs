//! Batch command-line surface: validation, computation, and decision
//! procedures over chain-complex and tabular instances, with JSON output on
//! every path. Exit codes: 0 for success or a true answer, 1 for a false
//! answer or a validation violation, 2 for input errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use ho2::calculus::{germ_search, split_we, EdgeSource, GermWitness};
use ho2::chain::{ChainComplex, ChainHomotopy, ChainInstance, ChainMap, ComplexJson, MapJson};
use ho2::cylinder::{Cylinder, Homotopy};
use ho2::fp::Mat;
use ho2::instance::{FactorizationSystem, ModelInstance, MorRef, ObjRef};
use ho2::tabular::{TabularCategorySpec, TabularInstance};
use ho2::twocat::{pi0_hom, pi0_quotient, Replacer};

#[derive(Parser)]
#[command(name = "ho2", about = "homotopy 2-categories over decidable model-category instances")]
struct Cli {
    /// output format (json is the only format; kept for forward compatibility)
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// seed for sampled property runs
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a tabular spec, a chain complex, or a chain map file
    Validate { path: PathBuf },
    /// Run a computation and print the verified artifact
    Compute {
        #[command(subcommand)]
        kind: ComputeKind,
    },
    /// Decide a property; the exit code reflects the answer
    Decide {
        #[command(subcommand)]
        kind: DecideKind,
    },
}

#[derive(Subcommand)]
enum ComputeKind {
    /// Homology dimensions of a complex, degree by degree
    Homology { complex: PathBuf },
    /// Factor a chain map in a chosen system, re-verifying the class flags
    Factorize {
        map: PathBuf,
        #[arg(long, value_enum)]
        system: SystemArg,
    },
    /// The chosen cylinder of a complex
    QCylinder { complex: PathBuf },
    /// The chosen path object of a complex
    PathObject { complex: PathBuf },
    /// Split a weak equivalence into a section and a retraction
    SplitWe(SplitArgs),
    /// Replacement data of a tabular object
    Replace {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        object: String,
    },
    /// Partition parallel chain maps into homotopy classes
    Pi0Quotient { source: PathBuf, target: PathBuf },
}

#[derive(Args)]
struct SplitArgs {
    /// chain map file
    #[arg(long, conflicts_with_all = ["instance", "morphism"])]
    map: Option<PathBuf>,
    /// tabular spec file
    #[arg(long, requires = "morphism")]
    instance: Option<PathBuf>,
    /// morphism name within the tabular spec
    #[arg(long)]
    morphism: Option<String>,
}

#[derive(Subcommand)]
enum DecideKind {
    /// Class membership flags of a chain map
    Classify {
        map: PathBuf,
        /// when given, the exit code answers membership in this one class
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
    },
    /// Are two parallel chain maps homotopic?
    Pi0 { pair: PathBuf },
    /// Are two chain homotopies equal as 2-cells?
    TwoCellsEqual { pair: PathBuf },
    /// Are two tabular homotopies connected by a zig-zag of cylinder maps?
    Germ {
        #[arg(long)]
        instance: PathBuf,
        first: PathBuf,
        second: PathBuf,
        /// zig-zag length bound (full enumeration ignores it)
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemArg {
    /// cofibration then trivial fibration
    CofTrivfib,
    /// trivial cofibration then fibration
    TrivcofFib,
}

impl From<SystemArg> for FactorizationSystem {
    fn from(s: SystemArg) -> Self {
        match s {
            SystemArg::CofTrivfib => FactorizationSystem::CofThenTrivFib,
            SystemArg::TrivcofFib => FactorizationSystem::TrivCofThenFib,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    We,
    Fib,
    Cof,
}

/// pair of parallel maps with optional homotopy witnesses
#[derive(Deserialize)]
struct PairJson {
    p: u64,
    source: ComplexJson,
    target: ComplexJson,
    f: Vec<Vec<u64>>,
    g: Vec<Vec<u64>>,
    /// degree-(+1) matrices witnessing f ⇝ g
    #[serde(default)]
    h: Option<Vec<Vec<u64>>>,
    /// degree-(+1) matrices witnessing f ⇝ g, compared against `h`
    #[serde(default)]
    k: Option<Vec<Vec<u64>>>,
}

/// tabular homotopy named by its components
#[derive(Deserialize)]
struct TabularHomotopyJson {
    base: String,
    w: String,
    z: String,
    d0: String,
    d1: String,
    s: String,
    x: String,
    h: String,
}

enum Outcome {
    Ok(Value),
    False(Value),
    InputError(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.format != "json" {
        return finish(Outcome::InputError(format!("unsupported format {}", cli.format)));
    }
    let outcome = match dispatch(cli.command) {
        Ok(outcome) => outcome,
        Err(msg) => Outcome::InputError(msg),
    };
    finish(outcome)
}

fn finish(outcome: Outcome) -> ExitCode {
    match outcome {
        Outcome::Ok(v) => {
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
            ExitCode::SUCCESS
        }
        Outcome::False(v) => {
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
            ExitCode::from(1)
        }
        Outcome::InputError(msg) => {
            println!("{}", serde_json::to_string_pretty(&json!({ "error": msg })).unwrap());
            ExitCode::from(2)
        }
    }
}

type CliResult<T> = Result<T, String>;

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path:?}: {e}"))?;
    serde_json::from_str(&text).map_err(|e| format!("invalid json in {path:?}: {e}"))
}

fn mats_json(mats: &[Mat]) -> Value {
    json!(mats.iter().map(|m| m.entries().to_vec()).collect::<Vec<_>>())
}

fn load_map(path: &PathBuf) -> CliResult<(ChainInstance, ObjRef, ObjRef, MorRef)> {
    let mj: MapJson = read_json(path)?;
    let (src, tgt, f) = mj.to_map().map_err(|e| e.to_string())?;
    let inst = ChainInstance::new(mj.p);
    let x = inst.add_complex(src).map_err(|e| e.to_string())?;
    let y = inst.add_complex(tgt).map_err(|e| e.to_string())?;
    let fr = inst.add_map(x, y, f).map_err(|e| e.to_string())?;
    Ok((inst, x, y, fr))
}

fn degree_plus_one(
    p: u64,
    src: &ChainComplex,
    tgt: &ChainComplex,
    rows: &[Vec<u64>],
    what: &str,
) -> CliResult<ChainHomotopy> {
    let mut mats = Vec::new();
    for (n, entries) in rows.iter().enumerate() {
        let (r, c) = (tgt.dim(n + 1), src.dim(n));
        if entries.len() != r * c {
            return Err(format!(
                "{what} degree {n}: expected {} entries, got {}",
                r * c,
                entries.len()
            ));
        }
        mats.push(Mat::from_rows(p, r, c, entries));
    }
    Ok(ChainHomotopy { mats })
}

fn dispatch(cmd: Command) -> CliResult<Outcome> {
    match cmd {
        Command::Validate { path } => validate(&path),
        Command::Compute { kind } => compute(kind),
        Command::Decide { kind } => decide(kind),
    }
}

fn validate(path: &PathBuf) -> CliResult<Outcome> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path:?}: {e}"))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| format!("invalid json in {path:?}: {e}"))?;
    if value.get("objects").is_some() {
        let spec: TabularCategorySpec =
            serde_json::from_value(value).map_err(|e| format!("invalid tabular spec: {e}"))?;
        let (_, report) = TabularInstance::load_validate(&spec).map_err(|e| e.to_string())?;
        let body = serde_json::to_value(&report).unwrap();
        return Ok(if report.is_valid() { Outcome::Ok(body) } else { Outcome::False(body) });
    }
    if value.get("matrices").is_some() {
        let mj: MapJson =
            serde_json::from_value(value).map_err(|e| format!("invalid map file: {e}"))?;
        return match mj.to_map() {
            Ok((src, tgt, f)) => {
                let flags = ho2::chain::classify_chain(&src, &tgt, &f);
                Ok(Outcome::Ok(json!({
                    "kind": "chain-map",
                    "valid": true,
                    "source_degrees": src.dims,
                    "target_degrees": tgt.dims,
                    "classes": flags,
                })))
            }
            Err(e) => Ok(Outcome::False(json!({
                "kind": "chain-map",
                "valid": false,
                "violation": e.to_string(),
            }))),
        };
    }
    let cj: ComplexJson =
        serde_json::from_value(value).map_err(|e| format!("unrecognized input file: {e}"))?;
    match cj.to_complex() {
        Ok(x) => Ok(Outcome::Ok(json!({
            "kind": "chain-complex",
            "valid": true,
            "degrees": x.dims,
            "homology": (0..x.len()).map(|n| x.homology(n)).collect::<Vec<_>>(),
        }))),
        Err(e) => Ok(Outcome::False(json!({
            "kind": "chain-complex",
            "valid": false,
            "violation": e.to_string(),
        }))),
    }
}

fn compute(kind: ComputeKind) -> CliResult<Outcome> {
    match kind {
        ComputeKind::Homology { complex } => {
            let cj: ComplexJson = read_json(&complex)?;
            let x = cj.to_complex().map_err(|e| e.to_string())?;
            Ok(Outcome::Ok(json!({
                "degrees": x.dims,
                "homology": (0..x.len()).map(|n| x.homology(n)).collect::<Vec<_>>(),
            })))
        }
        ComputeKind::Factorize { map, system } => {
            let (inst, _, _, f) = load_map(&map)?;
            let system: FactorizationSystem = system.into();
            let fac = inst.factorize(f, system).map_err(|e| e.to_string())?;
            let recomposed = inst.compose(fac.right, fac.left).map_err(|e| e.to_string())? == f;
            let lf = inst.classify(fac.left).map_err(|e| e.to_string())?;
            let rf = inst.classify(fac.right).map_err(|e| e.to_string())?;
            let flags_ok = match system {
                FactorizationSystem::CofThenTrivFib => lf.is_cof && rf.is_we && rf.is_fib,
                FactorizationSystem::TrivCofThenFib => lf.is_cof && lf.is_we && rf.is_fib,
            };
            let mid = inst.complex(inst.cod(fac.left).unwrap()).unwrap();
            let (_, _, left_m) = inst.map_data(fac.left).unwrap();
            let (_, _, right_m) = inst.map_data(fac.right).unwrap();
            Ok(Outcome::Ok(json!({
                "middle_degrees": mid.dims,
                "left": mats_json(&left_m.mats),
                "right": mats_json(&right_m.mats),
                "checks": { "recomposes": recomposed, "class_flags": flags_ok,
                            "left_classes": lf, "right_classes": rf },
            })))
        }
        ComputeKind::QCylinder { complex } => {
            let cj: ComplexJson = read_json(&complex)?;
            let inst = ChainInstance::new(cj.p);
            let x = inst
                .add_complex(cj.to_complex().map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let cyl = inst.q_cylinder(x).map_err(|e| e.to_string())?;
            let checks =
                ho2::cylinder::validate_q_cylinder(&inst, &cyl).map_err(|e| e.to_string())?;
            let w = inst.complex(cyl.w).unwrap();
            Ok(Outcome::Ok(json!({
                "cylinder_degrees": w.dims,
                "fibrant": cyl.fibrant,
                "checks": checks,
            })))
        }
        ComputeKind::PathObject { complex } => {
            let cj: ComplexJson = read_json(&complex)?;
            let inst = ChainInstance::new(cj.p);
            let y = inst
                .add_complex(cj.to_complex().map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let path = inst.path_object(y).map_err(|e| e.to_string())?;
            let v = inst.complex(path.v).unwrap();
            let sigma_flags = inst.classify(path.sigma).map_err(|e| e.to_string())?;
            Ok(Outcome::Ok(json!({
                "path_degrees": v.dims,
                "cofibrant": path.cofibrant,
                "section_classes": sigma_flags,
            })))
        }
        ComputeKind::SplitWe(args) => compute_split_we(args),
        ComputeKind::Replace { instance, object } => {
            let spec: TabularCategorySpec = read_json(&instance)?;
            let (inst, report) =
                TabularInstance::load_validate(&spec).map_err(|e| e.to_string())?;
            if !report.is_valid() {
                return Ok(Outcome::False(json!({
                    "error": "instance does not validate",
                    "violations": report.violations,
                })));
            }
            let x = inst.object_by_name(&object).map_err(|e| e.to_string())?;
            let repl = Replacer::new(&inst);
            let data = repl.object(x).map_err(|e| e.to_string())?;
            let p_flags = inst.classify(data.p).map_err(|e| e.to_string())?;
            let v_flags = inst.classify(data.v).map_err(|e| e.to_string())?;
            Ok(Outcome::Ok(json!({
                "object": object,
                "cofibrant_replacement": inst.object_name(data.qx),
                "fibrant_replacement": inst.object_name(data.rx),
                "fibrant_cofibrant_replacement": inst.object_name(data.r_fc),
                "p": { "name": inst.mor_name(data.p),
                       "trivial_fibration": p_flags.is_we && p_flags.is_fib },
                "v": { "name": inst.mor_name(data.v),
                       "trivial_cofibration": v_flags.is_we && v_flags.is_cof },
            })))
        }
        ComputeKind::Pi0Quotient { source, target } => {
            let cs: ComplexJson = read_json(&source)?;
            let ct: ComplexJson = read_json(&target)?;
            if cs.p != ct.p {
                return Err("source and target moduli differ".into());
            }
            let inst = ChainInstance::new(cs.p);
            let x = inst
                .add_complex(cs.to_complex().map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let y = inst
                .add_complex(ct.to_complex().map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let classes = pi0_quotient(&inst, x, y).map_err(|e| e.to_string())?;
            let rendered: Vec<Vec<Value>> = classes
                .iter()
                .map(|class| {
                    class
                        .iter()
                        .map(|&m| {
                            let (_, _, mm) = inst.map_data(m).unwrap();
                            mats_json(&mm.mats)
                        })
                        .collect()
                })
                .collect();
            Ok(Outcome::Ok(json!({
                "class_count": classes.len(),
                "classes": rendered,
            })))
        }
    }
}

fn compute_split_we(args: SplitArgs) -> CliResult<Outcome> {
    if let Some(map) = args.map {
        let (inst, x, y, f) = load_map(&map)?;
        let sp = split_we(&inst, f).map_err(|e| e.to_string())?;
        let (_, _, im) = inst.map_data(sp.i).unwrap();
        let (_, _, pm) = inst.map_data(sp.p).unwrap();
        let (_, _, rm) = inst.map_data(sp.retraction_of_i).unwrap();
        let (_, _, sm) = inst.map_data(sp.section_of_p).unwrap();
        let ok_r = inst.compose(sp.retraction_of_i, sp.i).unwrap() == inst.identity(x).unwrap();
        let ok_s = inst.compose(sp.p, sp.section_of_p).unwrap() == inst.identity(y).unwrap();
        let ok_comp = inst.compose(sp.p, sp.i).unwrap() == f;
        Ok(Outcome::Ok(json!({
            "middle_degrees": inst.complex(sp.middle).unwrap().dims,
            "section": mats_json(&im.mats),
            "retraction": mats_json(&pm.mats),
            "retraction_of_section": mats_json(&rm.mats),
            "section_of_retraction": mats_json(&sm.mats),
            "certificates": {
                "retraction_times_section_is_identity": ok_r,
                "section_of_retraction_splits": ok_s,
                "recomposes": ok_comp,
                "section_classes": inst.classify(sp.i).unwrap(),
                "retraction_classes": inst.classify(sp.p).unwrap(),
            },
        })))
    } else if let (Some(instance), Some(name)) = (args.instance, args.morphism) {
        let spec: TabularCategorySpec = read_json(&instance)?;
        let inst = TabularInstance::load(&spec).map_err(|e| e.to_string())?;
        let f = inst.mor_by_name(&name).map_err(|e| e.to_string())?;
        let sp = split_we(&inst, f).map_err(|e| e.to_string())?;
        Ok(Outcome::Ok(json!({
            "middle": inst.object_name(sp.middle),
            "section": inst.mor_name(sp.i),
            "retraction": inst.mor_name(sp.p),
            "retraction_of_section": inst.mor_name(sp.retraction_of_i),
            "section_of_retraction": inst.mor_name(sp.section_of_p),
        })))
    } else {
        Err("split-we needs either --map or --instance with --morphism".into())
    }
}

fn decide(kind: DecideKind) -> CliResult<Outcome> {
    match kind {
        DecideKind::Classify { map, class } => {
            let (inst, _, _, f) = load_map(&map)?;
            let flags = inst.classify(f).map_err(|e| e.to_string())?;
            match class {
                None => Ok(Outcome::Ok(json!({ "classes": flags }))),
                Some(c) => {
                    let answer = match c {
                        ClassArg::We => flags.is_we,
                        ClassArg::Fib => flags.is_fib,
                        ClassArg::Cof => flags.is_cof,
                    };
                    let body = json!({ "classes": flags, "answer": answer });
                    Ok(if answer { Outcome::Ok(body) } else { Outcome::False(body) })
                }
            }
        }
        DecideKind::Pi0 { pair } => {
            let pj: PairJson = read_json(&pair)?;
            let (inst, x, y, f, g, _, _) = load_pair(&pj)?;
            let answer = pi0_hom(&inst, f, g).map_err(|e| e.to_string())?;
            if answer {
                let k = inst.connecting_homotopy(f, g).map_err(|e| e.to_string())?;
                let witness = k.map(|k| mats_json(&k.mats));
                Ok(Outcome::Ok(json!({ "answer": true, "witness": witness })))
            } else {
                let (xc, yc) = (inst.complex(x).unwrap(), inst.complex(y).unwrap());
                let entries: usize = (0..xc.len()).map(|n| yc.dim(n + 1) * xc.dim(n)).sum();
                Ok(Outcome::False(json!({
                    "answer": false,
                    "search_space": format!("{}^{}", pj.p, entries),
                })))
            }
        }
        DecideKind::TwoCellsEqual { pair } => {
            let pj: PairJson = read_json(&pair)?;
            let (inst, x, y, f, g, h, k) = load_pair(&pj)?;
            let (Some(h), Some(k)) = (h, k) else {
                return Err("two-cells-equal needs both h and k homotopies".into());
            };
            let (xc, yc) = (inst.complex(x).unwrap(), inst.complex(y).unwrap());
            let qa = inst.homotopy_from_chain(f, g, &h).map_err(|e| e.to_string())?;
            let qb = inst.homotopy_from_chain(f, g, &k).map_err(|e| e.to_string())?;
            let answer = inst.oracle_equal(&qa, &qb).map_err(|e| e.to_string())?;
            if answer {
                let witness =
                    ho2::chain::second_homotopy(&xc, &yc, &h, &k).map(|s| mats_json(&s.mats));
                Ok(Outcome::Ok(json!({ "answer": true, "witness": witness })))
            } else {
                let entries: usize = (0..xc.len()).map(|n| yc.dim(n + 2) * xc.dim(n)).sum();
                Ok(Outcome::False(json!({
                    "answer": false,
                    "search_space": format!("{}^{}", pj.p, entries),
                })))
            }
        }
        DecideKind::Germ { instance, first, second, bound } => {
            let spec: TabularCategorySpec = read_json(&instance)?;
            let inst = TabularInstance::load(&spec).map_err(|e| e.to_string())?;
            let a = load_tabular_homotopy(&inst, &first)?;
            let b = load_tabular_homotopy(&inst, &second)?;
            let witness = germ_search(&inst, &a, &b, bound, EdgeSource::Enumerate)
                .map_err(|e| e.to_string())?;
            match witness {
                GermWitness::Connected { steps } => Ok(Outcome::Ok(json!({
                    "answer": true,
                    "zigzag_length": steps.len(),
                    "zigzag": steps
                        .iter()
                        .map(|(e, fwd)| json!({
                            "phi": inst.mor_name(e.map.phi),
                            "psi": inst.mor_name(e.map.psi),
                            "forward": fwd,
                        }))
                        .collect::<Vec<_>>(),
                }))),
                GermWitness::NotFound { explored, bound } => Ok(Outcome::False(json!({
                    "answer": false,
                    "explored": explored,
                    "bound": bound,
                }))),
            }
        }
    }
}

type PairData = (
    ChainInstance,
    ObjRef,
    ObjRef,
    MorRef,
    MorRef,
    Option<ChainHomotopy>,
    Option<ChainHomotopy>,
);

fn load_pair(pj: &PairJson) -> CliResult<PairData> {
    let src = pj.source.to_complex().map_err(|e| e.to_string())?;
    let tgt = pj.target.to_complex().map_err(|e| e.to_string())?;
    let inst = ChainInstance::new(pj.p);
    let x = inst.add_complex(src.clone()).map_err(|e| e.to_string())?;
    let y = inst.add_complex(tgt.clone()).map_err(|e| e.to_string())?;
    let parse_map = |rows: &Vec<Vec<u64>>, what: &str| -> CliResult<MorRef> {
        let mut mats = Vec::new();
        for (n, entries) in rows.iter().enumerate() {
            let (r, c) = (tgt.dim(n), src.dim(n));
            if entries.len() != r * c {
                return Err(format!(
                    "{what} degree {n}: expected {} entries, got {}",
                    r * c,
                    entries.len()
                ));
            }
            mats.push(Mat::from_rows(pj.p, r, c, entries));
        }
        let m = ChainMap::new(&src, &tgt, mats).map_err(|e| e.to_string())?;
        inst.add_map(x, y, m).map_err(|e| e.to_string())
    };
    let f = parse_map(&pj.f, "f")?;
    let g = parse_map(&pj.g, "g")?;
    let h = pj
        .h
        .as_ref()
        .map(|rows| degree_plus_one(pj.p, &src, &tgt, rows, "h"))
        .transpose()?;
    let k = pj
        .k
        .as_ref()
        .map(|rows| degree_plus_one(pj.p, &src, &tgt, rows, "k"))
        .transpose()?;
    Ok((inst, x, y, f, g, h, k))
}

fn load_tabular_homotopy(inst: &TabularInstance, path: &PathBuf) -> CliResult<Homotopy> {
    let hj: TabularHomotopyJson = read_json(path)?;
    let cyl = Cylinder {
        base: inst.object_by_name(&hj.base).map_err(|e| e.to_string())?,
        w: inst.object_by_name(&hj.w).map_err(|e| e.to_string())?,
        z: inst.object_by_name(&hj.z).map_err(|e| e.to_string())?,
        d0: inst.mor_by_name(&hj.d0).map_err(|e| e.to_string())?,
        d1: inst.mor_by_name(&hj.d1).map_err(|e| e.to_string())?,
        s: inst.mor_by_name(&hj.s).map_err(|e| e.to_string())?,
        x: inst.mor_by_name(&hj.x).map_err(|e| e.to_string())?,
        fibrant: false,
    };
    let diag = ho2::cylinder::validate_cylinder(inst, &cyl).map_err(|e| e.to_string())?;
    if !diag.is_valid() {
        return Err(format!(
            "homotopy in {path:?} has an invalid cylinder: {:?}",
            diag.failures()
        ));
    }
    let h = inst.mor_by_name(&hj.h).map_err(|e| e.to_string())?;
    let f = inst.compose(h, cyl.d0).map_err(|e| e.to_string())?;
    let g = inst.compose(h, cyl.d1).map_err(|e| e.to_string())?;
    Ok(Homotopy { cyl, h, f, g })
}
