//! Single entry point exposing every verification and computation as a
//! subcommand with JSON input and output.
//!
//! Exit codes: 0 on pass, 1 on a mathematical verification failure (the
//! offending item is named in the report), 2 on usage errors.

mod jsonio;

use clap::{Args, Parser, Subcommand};
use h2_core::flat::{self, Move, ParallelogramChain};
use h2_core::gamma;
use h2_core::hyperelliptic::{self, BranchConfig, PeriodData};
use h2_core::symplectic::{self, IntMat4, R, S, T, U};
use h2_core::theta::{self, SiegelPoint, ThetaArgument, ThetaCharacteristic};
use h2_core::Complex64;
use jsonio::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::time::Instant;

#[derive(Parser)]
#[command(name = "h2", about = "Genus-2 flat surfaces, Sp(4,Z) cosets, theta functions, and hyperelliptic periods", version)]
struct Cli {
    /// Write the JSON report to a file instead of stdout
    #[arg(long, global = true)]
    output: Option<std::path::PathBuf>,
    /// Suppress the report on stdout (still sets the exit code)
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Subgroup machinery: orbits, membership, cosets, verification
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Theta function evaluation and transformation-law checks
    Theta {
        #[command(subcommand)]
        cmd: ThetaCmd,
    },
    /// Period matrix of a branch configuration
    Periods(PeriodsArgs),
    /// Branch points from a period matrix
    Recover(RecoverArgs),
    /// Branch points -> period matrix -> branch points
    Roundtrip(RoundtripArgs),
    /// Triple-parallelogram surfaces and elementary moves
    Surface {
        #[command(subcommand)]
        cmd: SurfaceCmd,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Run the whole identity / orbit / coset battery
    Verify,
    /// Mod-2 orbits of the generator action
    Orbits {
        /// Generator set: TSR or TSRU
        #[arg(long, default_value = "TSR")]
        gens: String,
        /// Seed vector, e.g. 1,0,0,0
        #[arg(long = "seed-vec", default_value = "1,0,0,0")]
        seed_vec: String,
    },
    /// Membership of a symplectic matrix in the subgroup
    Member {
        /// 4x4 integer matrix, row-major JSON
        #[arg(long)]
        matrix: String,
    },
    /// Coset label of a matrix, or the representative family and action table
    Cosets {
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Three-parameter factorisation gamma(l, m, n) = T^m X^l Y^n
    Factor {
        #[arg(long)]
        l: i32,
        #[arg(long)]
        m: i32,
        #[arg(long)]
        n: i32,
    },
}

#[derive(Subcommand)]
enum ThetaCmd {
    /// Evaluate theta[eps; eps'](z, sigma)
    Eval {
        /// Integer vector, e.g. 1,0
        #[arg(long)]
        eps: String,
        #[arg(long = "eps-prime")]
        eps_prime: String,
        /// Complex vector JSON, e.g. [[0.1,0.2],[0,0]]
        #[arg(long)]
        z: String,
        /// Complex symmetric matrix JSON (rows of [re,im] pairs)
        #[arg(long)]
        sigma: String,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Random battery of the four transformation laws
    Check {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

#[derive(Args)]
struct PeriodsArgs {
    /// Branch points, e.g. [0,1,2.1,3.4,[0.5,1.2],"inf"]
    #[arg(long)]
    lambdas: String,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args)]
struct RecoverArgs {
    /// Period matrix as rows of [re,im] pairs
    #[arg(long)]
    pi: String,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Args)]
struct RoundtripArgs {
    #[arg(long)]
    lambdas: String,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Subcommand)]
enum SurfaceCmd {
    /// Validate a chain and report its invariants
    Build {
        /// Four complex numbers, e.g. [[1,0],[0,1],[-1,0],[0,-1]]
        #[arg(long)]
        chain: String,
    },
    /// Apply a move word (letters T t S R r)
    Move {
        #[arg(long)]
        chain: String,
        #[arg(long)]
        word: String,
    },
    /// Check move words against their homology matrices (exact arithmetic)
    Verify {
        #[arg(long)]
        chain: String,
        /// Explicit word; omit to run randomized words
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

enum Failure {
    Usage(String),
    Math(String, Value),
}

impl Failure {
    fn math(msg: impl Into<String>) -> Failure {
        Failure::Math(msg.into(), Value::Null)
    }
}

fn main() {
    let cli = Cli::parse();
    let t0 = Instant::now();
    let command = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let outcome = run(&cli.cmd);
    let elapsed_ms = t0.elapsed().as_secs_f64() * 1e3;
    let (status, details, code) = match outcome {
        Ok(details) => ("pass", details, 0),
        Err(Failure::Math(msg, details)) => {
            ("fail", json!({"error": msg, "partial": details}), 1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            std::process::exit(2);
        }
    };
    let report = json!({
        "command": command,
        "status": status,
        "details": details,
        "timings_ms": elapsed_ms,
    });
    let text = serde_json::to_string_pretty(&report).expect("report serialises");
    if let Some(path) = &cli.output {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("cannot write {}: {e}", path.display());
            std::process::exit(2);
        }
    }
    if !cli.quiet {
        println!("{text}");
    }
    std::process::exit(code);
}

fn run(cmd: &Cmd) -> Result<Value, Failure> {
    match cmd {
        Cmd::Group { cmd } => run_group(cmd),
        Cmd::Theta { cmd } => run_theta(cmd),
        Cmd::Periods(a) => run_periods(a),
        Cmd::Recover(a) => run_recover(a),
        Cmd::Roundtrip(a) => run_roundtrip(a),
        Cmd::Surface { cmd } => run_surface(cmd),
    }
}

fn mat_json(m: &IntMat4) -> Value {
    serde_json::to_value(m).expect("matrix serialises")
}

fn run_group(cmd: &GroupCmd) -> Result<Value, Failure> {
    match cmd {
        GroupCmd::Verify => group_verify(),
        GroupCmd::Orbits { gens, seed_vec } => {
            let gens = match gens.as_str() {
                "TSR" => vec![T, S, R],
                "TSRU" => vec![T, S, R, U],
                other => return Err(Failure::Usage(format!("--gens must be TSR or TSRU, got {other}"))),
            };
            let coords = parse_int_list(seed_vec).map_err(Failure::Usage)?;
            if coords.len() != 4 {
                return Err(Failure::Usage("seed vector needs 4 entries".into()));
            }
            let seed = symplectic::Gf2Vec4::new([
                coords[0] as u8 & 1,
                coords[1] as u8 & 1,
                coords[2] as u8 & 1,
                coords[3] as u8 & 1,
            ]);
            let orbit = gamma::orbit_mod2(seed, &gens).map_err(|e| Failure::Usage(e.to_string()))?;
            let listed: Vec<Value> =
                orbit.iter().map(|v| json!(v.coords().to_vec())).collect();
            Ok(json!({"seed": seed.coords().to_vec(), "size": orbit.len(), "orbit": listed}))
        }
        GroupCmd::Member { matrix } => {
            let m = parse_int_mat4(matrix).map_err(Failure::Usage)?;
            let member = gamma::gamma_member(&m).map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(json!({"matrix": mat_json(&m), "member": member}))
        }
        GroupCmd::Cosets { matrix } => {
            if let Some(text) = matrix {
                let m = parse_int_mat4(text).map_err(Failure::Usage)?;
                let label = gamma::coset_of(&m).map_err(|e| Failure::Usage(e.to_string()))?;
                return Ok(json!({
                    "matrix": mat_json(&m),
                    "coset": label.tag.name(),
                    "representative": mat_json(&label.representative),
                }));
            }
            let reps = gamma::coset_representatives().map_err(|e| Failure::math(e.to_string()))?;
            let table = gamma::verify_coset_table().map_err(|e| Failure::math(e.to_string()))?;
            let rows: Vec<Value> = gamma::TABLE_ROWS
                .iter()
                .zip(table.iter())
                .map(|(name, row)| {
                    json!({"generator": name,
                           "action": row.iter().map(|t| t.name()).collect::<Vec<_>>()})
                })
                .collect();
            Ok(json!({
                "representatives": reps.iter()
                    .map(|l| json!({"tag": l.tag.name(), "matrix": mat_json(&l.representative)}))
                    .collect::<Vec<_>>(),
                "table": rows,
            }))
        }
        GroupCmd::Factor { l, m, n } => {
            let (mat, word) =
                gamma::factor_three_parameter(*l, *m, *n).map_err(|e| Failure::math(e.to_string()))?;
            let member = gamma::gamma_member(&mat).map_err(|e| Failure::math(e.to_string()))?;
            if !member {
                return Err(Failure::math("factorised matrix not in subgroup"));
            }
            Ok(json!({"matrix": mat_json(&mat), "word": word, "member": member}))
        }
    }
}

fn group_verify() -> Result<Value, Failure> {
    let mut details = serde_json::Map::new();
    let fail = |name: &str| Failure::Math(format!("verification failed: {name}"), Value::Null);

    // exact identities
    let minus_id = symplectic::IDENTITY.neg().map_err(|e| Failure::math(e.to_string()))?;
    let s2 = S.pow(2).map_err(|e| Failure::math(e.to_string()))?;
    let s4 = S.pow(4).map_err(|e| Failure::math(e.to_string()))?;
    let u2 = U.pow(2).map_err(|e| Failure::math(e.to_string()))?;
    if s2 != minus_id {
        return Err(fail("S^2 = -Id"));
    }
    if s4 != symplectic::IDENTITY {
        return Err(fail("S^4 = Id"));
    }
    if u2 != minus_id {
        return Err(fail("U^2 = -Id"));
    }
    let s_inv = symplectic::symplectic_inverse(&S).map_err(|e| Failure::math(e.to_string()))?;
    let sts = s_inv.mul(&T).and_then(|x| x.mul(&S)).map_err(|e| Failure::math(e.to_string()))?;
    if sts != IntMat4([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, -1, 1]]) {
        return Err(fail("S^-1 T S display"));
    }
    let tp = symplectic::T_PRIME;
    let tp_inv = symplectic::symplectic_inverse(&tp).map_err(|e| Failure::math(e.to_string()))?;
    let conj = tp_inv.mul(&T).and_then(|x| x.mul(&tp)).map_err(|e| Failure::math(e.to_string()))?;
    if conj != IntMat4([[2, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]) {
        return Err(fail("T'^-1 T T' display"));
    }
    details.insert("exact_identities".into(), json!("ok"));

    // orbits
    let e1 = symplectic::Gf2Vec4::new([1, 0, 0, 0]);
    let e2 = symplectic::Gf2Vec4::new([0, 1, 0, 0]);
    let o1 = gamma::orbit_mod2(e1, &[T, S, R]).map_err(|e| Failure::math(e.to_string()))?;
    let o2 = gamma::orbit_mod2(e2, &[T, S, R]).map_err(|e| Failure::math(e.to_string()))?;
    let all = gamma::orbit_mod2(e1, &[T, S, R, U]).map_err(|e| Failure::math(e.to_string()))?;
    if o1.len() != 5 || o2.len() != 10 || all.len() != 15 {
        return Err(fail("orbit sizes 5 / 10 / 15"));
    }
    details.insert("orbits".into(), json!({"o1": o1.len(), "o2": o2.len(), "all": all.len()}));

    // quotient orders and table
    if gamma::sp4_f2().order() != 720 || gamma::gamma_f2().order() != 120 {
        return Err(fail("quotient orders 720 / 120"));
    }
    gamma::verify_coset_table().map_err(|e| Failure::math(e.to_string()))?;
    details.insert("quotient".into(), json!({"full": 720, "subgroup": 120, "index": 6}));
    details.insert("coset_table".into(), json!("ok"));

    // generation identities
    let checks = gamma::verify_generation().map_err(|e| Failure::math(e.to_string()))?;
    details.insert(
        "generation".into(),
        json!(checks.iter().map(|c| c.name.clone()).collect::<Vec<_>>()),
    );

    // three-parameter grid
    for l in -3..=3 {
        for m in -3..=3 {
            for n in -3..=3 {
                gamma::factor_three_parameter(l, m, n)
                    .map_err(|e| Failure::math(format!("factorisation ({l},{m},{n}): {e}")))?;
            }
        }
    }
    details.insert("three_parameter_grid".into(), json!("ok"));
    Ok(Value::Object(details))
}

fn run_theta(cmd: &ThetaCmd) -> Result<Value, Failure> {
    match cmd {
        ThetaCmd::Eval { eps, eps_prime, z, sigma, tol } => {
            let eps = parse_int_list(eps).map_err(Failure::Usage)?;
            let eps_prime = parse_int_list(eps_prime).map_err(Failure::Usage)?;
            let z = parse_complex_vec(z).map_err(Failure::Usage)?;
            let sigma = parse_siegel(sigma).map_err(Failure::Usage)?;
            let chr = ThetaCharacteristic::new(eps, eps_prime);
            let arg = ThetaArgument::new(z).map_err(|e| Failure::Usage(e.to_string()))?;
            let v = theta::theta_eval(&chr, &arg, &sigma, *tol)
                .map_err(|e| Failure::math(e.to_string()))?;
            Ok(json!({"value": complex_to_json(v), "odd_characteristic": chr.is_odd()}))
        }
        ThetaCmd::Check { samples, seed, tol } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut worst = [0.0f64; 4];
            for _ in 0..*samples {
                let g = 2;
                // random symmetric sigma with Im >= 0.6 Id
                let mut entries = vec![Complex64::new(0.0, 0.0); 4];
                let re: Vec<f64> = (0..3).map(|_| rng.gen_range(-0.8..0.8)).collect();
                let im: Vec<f64> = (0..3).map(|_| rng.gen_range(-0.3..0.3)).collect();
                entries[0] = Complex64::new(re[0], 1.2 + im[0]);
                entries[3] = Complex64::new(re[1], 1.2 + im[1]);
                entries[1] = Complex64::new(re[2], im[2]);
                entries[2] = entries[1];
                let sigma = SiegelPoint::new(g, entries).expect("construction keeps Im posdef");
                let z = ThetaArgument(
                    (0..g)
                        .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                        .collect(),
                );
                let chr = ThetaCharacteristic::new(
                    (0..g).map(|_| rng.gen_range(-2i64..=2)).collect(),
                    (0..g).map(|_| rng.gen_range(-2i64..=2)).collect(),
                );
                let k = rng.gen_range(1..=g);
                let res = theta::check_quasiperiodicity(&chr, &z, &sigma, k, *tol)
                    .map_err(|e| Failure::math(e.to_string()))?;
                for i in 0..4 {
                    worst[i] = worst[i].max(res[i]);
                }
            }
            let pass = worst.iter().all(|r| *r < 1e-10);
            let details = json!({"samples": samples, "worst_residuals": worst.to_vec()});
            if !pass {
                return Err(Failure::Math("quasiperiodicity residual above 1e-10".into(), details));
            }
            Ok(details)
        }
    }
}

fn config_from_lambdas(text: &str) -> Result<BranchConfig, Failure> {
    let pts = parse_lambdas(text).map_err(Failure::Usage)?;
    let g = match pts.len() {
        4 => 1,
        6 => 2,
        n => return Err(Failure::Usage(format!("need 4 (g=1) or 6 (g=2) branch points, got {n}"))),
    };
    BranchConfig::new(g, pts).map_err(|e| Failure::Usage(e.to_string()))
}

fn periods_json(pd: &PeriodData) -> Value {
    let g = pd.genus();
    let grid = |m: &Vec<Complex64>| -> Value {
        Value::Array(
            (0..g)
                .map(|i| {
                    Value::Array((0..g).map(|j| complex_to_json(m[i * g + j])).collect())
                })
                .collect(),
        )
    };
    let hp = hyperelliptic::half_periods(pd);
    json!({
        "pi": siegel_to_json(&pd.pi),
        "a_periods": grid(&pd.a_periods),
        "b_periods": grid(&pd.b_periods),
        "half_periods": hp.iter()
            .map(|p| Value::Array(p.value.iter().map(|&z| complex_to_json(z)).collect()))
            .collect::<Vec<_>>(),
    })
}

fn run_periods(a: &PeriodsArgs) -> Result<Value, Failure> {
    let cfg = config_from_lambdas(&a.lambdas)?;
    let pd = hyperelliptic::period_matrix(&cfg, a.tol).map_err(|e| Failure::math(e.to_string()))?;
    Ok(periods_json(&pd))
}

fn run_recover(a: &RecoverArgs) -> Result<Value, Failure> {
    let pi = parse_siegel(&a.pi).map_err(Failure::Usage)?;
    let pd = PeriodData::from_pi(pi);
    let g = pd.genus();
    let lambdas: Vec<Value> = match g {
        1 => {
            let l3 = hyperelliptic::recover_branch_point(&pd, 3, a.tol)
                .map_err(|e| Failure::math(e.to_string()))?;
            vec![json!(0.0), json!(1.0), complex_to_json(l3), json!("inf")]
        }
        2 => {
            let cfg = hyperelliptic::recover_all(&pd, a.tol)
                .map_err(|e| Failure::math(e.to_string()))?;
            cfg.lambdas().iter().map(branch_point_to_json).collect()
        }
        g => return Err(Failure::Usage(format!("recovery supports genus 1 and 2, got {g}"))),
    };
    Ok(json!({"lambdas": lambdas}))
}

fn run_roundtrip(a: &RoundtripArgs) -> Result<Value, Failure> {
    let cfg = config_from_lambdas(&a.lambdas)?;
    let pd = hyperelliptic::period_matrix(&cfg, a.tol).map_err(|e| Failure::math(e.to_string()))?;
    let g = cfg.genus();
    let input = cfg.finite_lambdas();
    let mut recovered: Vec<Complex64> = Vec::new();
    if g == 1 {
        recovered.push(
            hyperelliptic::recover_branch_point(&pd, 3, a.tol)
                .map_err(|e| Failure::math(e.to_string()))?,
        );
    } else {
        let rec =
            hyperelliptic::recover_all(&pd, a.tol).map_err(|e| Failure::math(e.to_string()))?;
        recovered.extend(rec.finite_lambdas()[2..].iter().copied());
    }
    let max_err = recovered
        .iter()
        .zip(input[2..].iter())
        .map(|(r, t)| (r - t).norm())
        .fold(0.0f64, f64::max);
    let details = json!({
        "pi": siegel_to_json(&pd.pi),
        "recovered": recovered.iter().map(|&z| complex_to_json(z)).collect::<Vec<_>>(),
        "max_error": max_err,
    });
    let threshold = if g == 1 { 1e-7 } else { 1e-6 };
    if max_err >= threshold {
        return Err(Failure::Math(format!("round trip error {max_err:e} above {threshold:e}"), details));
    }
    Ok(details)
}

fn parse_chain(text: &str) -> Result<ParallelogramChain<Complex64>, Failure> {
    let zs = parse_complex_vec(text).map_err(Failure::Usage)?;
    if zs.len() != 4 {
        return Err(Failure::Usage(format!("chain needs 4 complex numbers, got {}", zs.len())));
    }
    ParallelogramChain::build(zs[0], zs[1], zs[2], zs[3]).map_err(|e| Failure::Usage(e.to_string()))
}

fn chain_json(ch: &ParallelogramChain<Complex64>) -> Value {
    Value::Array(ch.z.iter().map(|&z| complex_to_json(z)).collect())
}

fn run_surface(cmd: &SurfaceCmd) -> Result<Value, Failure> {
    match cmd {
        SurfaceCmd::Build { chain } => {
            let ch = parse_chain(chain)?;
            let w = ch.weierstrass_points();
            let d = flat::Decomposition::initial(ch.clone());
            let pv = d.period_vector();
            Ok(json!({
                "chain": chain_json(&ch),
                "area": ch.area(),
                "period_vector": pv.0.iter().map(|&z| complex_to_json(z)).collect::<Vec<_>>(),
                "weierstrass_points": {
                    "cone_point": complex_to_json(w.cone_point),
                    "a_center": complex_to_json(w.a_center),
                    "a_waist": complex_to_json(w.a_waist),
                    "b_center": complex_to_json(w.b_center),
                    "c_center": complex_to_json(w.c_center),
                    "c_waist": complex_to_json(w.c_waist),
                },
            }))
        }
        SurfaceCmd::Move { chain, word } => {
            let ch = parse_chain(chain)?;
            let moves = Move::parse_word(word).map_err(|e| Failure::Usage(e.to_string()))?;
            let d = flat::Decomposition::initial(ch)
                .apply_word(&moves)
                .map_err(|e| Failure::math(e.to_string()))?;
            Ok(json!({
                "chain": chain_json(&d.chain),
                "frame": mat_json(&d.frame),
                "area": d.chain.area(),
                "word": word,
            }))
        }
        SurfaceCmd::Verify { chain, word, count, max_len, seed } => {
            let ch = parse_chain(chain)?;
            let exact: ParallelogramChain<flat::GaussianRational> = {
                let z: Vec<_> = ch.z.iter().map(|&z| flat::lift_exact(z)).collect();
                if z.iter().any(|o| o.is_none()) {
                    return Err(Failure::Usage("chain entries must be finite".into()));
                }
                ParallelogramChain::build(
                    z[0].clone().unwrap(),
                    z[1].clone().unwrap(),
                    z[2].clone().unwrap(),
                    z[3].clone().unwrap(),
                )
                .map_err(|e| Failure::Usage(e.to_string()))?
            };
            if let Some(wtext) = word {
                let moves = Move::parse_word(wtext).map_err(|e| Failure::Usage(e.to_string()))?;
                let rep = flat::verify_move_matrices(exact, &moves)
                    .map_err(|(i, e)| Failure::math(format!("move {i} failed: {e}")))?;
                let details = json!({
                    "word": rep.word,
                    "frame": mat_json(&rep.frame),
                    "periods_match": rep.periods_match,
                    "frame_in_subgroup": rep.frame_in_subgroup,
                });
                if !(rep.periods_match && rep.frame_in_subgroup) {
                    return Err(Failure::Math("move/matrix verification failed".into(), details));
                }
                return Ok(details);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut checked = 0usize;
            while checked < *count {
                let len = rng.gen_range(1..=*max_len);
                let mut d = flat::Decomposition::initial(exact.clone());
                let mut ok_word = true;
                for _ in 0..len {
                    let mv = match rng.gen_range(0..5) {
                        0 => Move::T(1),
                        1 => Move::T(-1),
                        2 => Move::S,
                        3 => Move::R(1),
                        _ => Move::R(-1),
                    };
                    match d.apply(mv) {
                        Ok(next) => d = next,
                        Err(flat::FlatError::NotRealizable(_, _))
                        | Err(flat::FlatError::DegenerateTwist) => {
                            ok_word = false;
                            break;
                        }
                        Err(e) => return Err(Failure::math(e.to_string())),
                    }
                }
                if !ok_word {
                    continue;
                }
                let rep = flat::verify_move_matrices(exact.clone(), &d.word)
                    .map_err(|(i, e)| Failure::math(format!("move {i} failed: {e}")))?;
                if !(rep.periods_match && rep.frame_in_subgroup) {
                    return Err(Failure::Math(
                        format!("word {} diverged", rep.word),
                        Value::Null,
                    ));
                }
                checked += 1;
            }
            Ok(json!({"checked_words": checked, "max_len": max_len}))
        }
    }
}
