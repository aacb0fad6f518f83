//! Command-line front end: parameter generation, key generation, ring
//! assembly, signing, verification, claim-explanation, and artifact
//! inspection. Every command is deterministic given its flags and seed
//! material; there is no implicit OS randomness anywhere.
//!
//! Exit codes: 0 success or accept, 1 verification reject, 2 usage or data
//! error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lrs::format;
use lrs::scheme::{self, Preset, PublicParams, Ring, SigningKey};
use lrs::tape::RandomTape;
use lrs::zq::is_prime;

#[derive(Parser)]
#[command(name = "lrs", about = "Lattice ring signatures with explainable signing randomness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate public parameters for a preset.
    Params {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "toy")]
        preset: String,
        /// Exponent offset for the paper-asymptotic preset.
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long)]
        seed: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a key pair under existing parameters.
    Keygen {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        seed: Option<String>,
        #[arg(long)]
        out_vk: PathBuf,
        #[arg(long)]
        out_sk: PathBuf,
    },
    /// Assemble verification key files into a ring file.
    Ring {
        #[arg(long)]
        out: PathBuf,
        /// Verification key files in ring order.
        #[arg(required = true)]
        keys: Vec<PathBuf>,
    },
    /// Sign a message for a ring.
    Sign {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        sk: PathBuf,
        #[arg(long)]
        msg_hex: String,
        #[arg(long, conflicts_with = "seed_tape")]
        seed: Option<String>,
        /// Replay signing from an explicit tape file instead of a seed.
        #[arg(long)]
        seed_tape: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify a signature; exits 0 on accept, 1 on reject.
    Verify {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        msg_hex: String,
        #[arg(long)]
        sig: PathBuf,
    },
    /// Produce signing randomness attributing a signature to a ring member.
    Explain {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        sig: PathBuf,
        #[arg(long)]
        sk: PathBuf,
        #[arg(long)]
        msg_hex: String,
        #[arg(long)]
        seed: Option<String>,
        #[arg(long)]
        out_tape: PathBuf,
    },
    /// Print the header of any artifact file; --check validates invariants.
    Inspect {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        check: bool,
        /// Verification key file, required to check a signing key's trapdoor.
        #[arg(long)]
        vk: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode, String> {
    match cmd {
        Command::Params {
            n,
            preset,
            delta,
            seed,
            out,
        } => cmd_params(n, &preset, delta, seed, &out),
        Command::Keygen {
            params,
            seed,
            out_vk,
            out_sk,
        } => cmd_keygen(&params, seed, &out_vk, &out_sk),
        Command::Ring { out, keys } => cmd_ring(&out, &keys),
        Command::Sign {
            params,
            ring,
            sk,
            msg_hex,
            seed,
            seed_tape,
            out,
        } => cmd_sign(&params, &ring, &sk, &msg_hex, seed, seed_tape.as_deref(), &out),
        Command::Verify {
            params,
            ring,
            msg_hex,
            sig,
        } => cmd_verify(&params, &ring, &msg_hex, &sig),
        Command::Explain {
            params,
            ring,
            sig,
            sk,
            msg_hex,
            seed,
            out_tape,
        } => cmd_explain(&params, &ring, &sig, &sk, &msg_hex, seed, &out_tape),
        Command::Inspect { file, check, vk } => cmd_inspect(&file, check, vk.as_deref()),
    }
}

/// Seed resolution: the --seed flag wins, then the LRS_SEED environment
/// variable; hex up to 64 digits, left-padded with zeros to 32 bytes.
fn resolve_seed(flag: Option<String>) -> Result<[u8; 32], String> {
    let hex_str = match flag {
        Some(s) => s,
        None => std::env::var("LRS_SEED")
            .map_err(|_| "no --seed given and LRS_SEED is not set".to_string())?,
    };
    if hex_str.len() > 64 || hex_str.len() % 2 != 0 {
        return Err(format!("seed must be at most 64 hex digits, got {}", hex_str.len()));
    }
    let raw = hex::decode(&hex_str).map_err(|e| format!("bad seed hex: {e}"))?;
    let mut seed = [0u8; 32];
    seed[32 - raw.len()..].copy_from_slice(&raw);
    Ok(seed)
}

/// Decodes a message as exactly `ceil(t/8)` hex-encoded bytes holding `t`
/// bits LSB-first; any set bit beyond `t` is rejected.
fn parse_message(msg_hex: &str, t: usize) -> Result<Vec<bool>, String> {
    let raw = hex::decode(msg_hex).map_err(|e| format!("bad message hex: {e}"))?;
    if raw.len() != t.div_ceil(8) {
        return Err(format!(
            "message must be exactly {} bytes for t = {t}, got {}",
            t.div_ceil(8),
            raw.len()
        ));
    }
    for i in t..raw.len() * 8 {
        if raw[i / 8] >> (i % 8) & 1 == 1 {
            return Err(format!("message bit {i} is set beyond the t = {t} bit length"));
        }
    }
    Ok((0..t).map(|i| raw[i / 8] >> (i % 8) & 1 == 1).collect())
}

fn read(path: &Path) -> Result<Vec<u8>, String> {
    std::fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), String> {
    std::fs::write(path, bytes).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn load_params(path: &Path) -> Result<PublicParams, String> {
    format::params_from_bytes(&read(path)?).map_err(|e| e.to_string())
}

fn load_ring(path: &Path) -> Result<Ring, String> {
    format::ring_from_bytes(&read(path)?).map_err(|e| e.to_string())
}

fn load_sk(path: &Path) -> Result<SigningKey, String> {
    format::sk_from_bytes(&read(path)?).map_err(|e| e.to_string())
}

fn cmd_params(
    n: usize,
    preset: &str,
    delta: f64,
    seed: Option<String>,
    out: &Path,
) -> Result<ExitCode, String> {
    let preset = match preset {
        "toy" => Preset::Toy,
        "paper-asymptotic" => Preset::PaperAsymptotic { delta },
        other => return Err(format!("unknown preset {other:?}")),
    };
    let tape = RandomTape::from_seed(resolve_seed(seed)?, "setup");
    let pp = scheme::setup(n, preset, &tape).map_err(|e| e.to_string())?;
    write(out, &format::params_to_bytes(&pp))?;
    println!(
        "q = {}, m = {}, sigma = {:.4}, sigma' = {:.4}",
        pp.q, pp.m, pp.sigma, pp.sigma_prime
    );
    if pp.toy {
        println!("warning: toy parameters; no security is claimed");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_keygen(
    params: &Path,
    seed: Option<String>,
    out_vk: &Path,
    out_sk: &Path,
) -> Result<ExitCode, String> {
    let pp = load_params(params)?;
    let mut tape = RandomTape::from_seed(resolve_seed(seed)?, "keygen");
    let (vk, sk) = scheme::keygen(&pp, &mut tape).map_err(|e| e.to_string())?;
    write(out_vk, &format::vk_to_bytes(&vk))?;
    write(out_sk, &format::sk_to_bytes(&sk).map_err(|e| e.to_string())?)?;
    println!("fingerprint = {}", hex::encode(vk.fingerprint));
    Ok(ExitCode::SUCCESS)
}

fn cmd_ring(out: &Path, keys: &[PathBuf]) -> Result<ExitCode, String> {
    let vks = keys
        .iter()
        .map(|p| format::vk_from_bytes(&read(p)?).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, String>>()?;
    let ring = Ring::new(vks).map_err(|e| e.to_string())?;
    write(out, &format::ring_to_bytes(&ring))?;
    println!("ring of {} members", ring.len());
    Ok(ExitCode::SUCCESS)
}

fn cmd_sign(
    params: &Path,
    ring: &Path,
    sk: &Path,
    msg_hex: &str,
    seed: Option<String>,
    seed_tape: Option<&Path>,
    out: &Path,
) -> Result<ExitCode, String> {
    let pp = load_params(params)?;
    let ring = load_ring(ring)?;
    let sk = load_sk(sk)?;
    let msg = parse_message(msg_hex, pp.t)?;
    let mut tape = match seed_tape {
        Some(path) => RandomTape::from_bytes(&read(path)?).map_err(|e| e.to_string())?,
        None => RandomTape::from_seed(resolve_seed(seed)?, "sign"),
    };
    let sig = scheme::sign(&pp, &msg, &ring, &sk, &mut tape).map_err(|e| e.to_string())?;
    write(out, &format::sig_to_bytes(&sig, pp.m).map_err(|e| e.to_string())?)?;
    println!("signature over ring of {} members, norm {:.2}", sig.ring_size, sig.norm());
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(params: &Path, ring: &Path, msg_hex: &str, sig: &Path) -> Result<ExitCode, String> {
    let pp = load_params(params)?;
    let ring = load_ring(ring)?;
    let sig = format::sig_from_bytes(&read(sig)?).map_err(|e| e.to_string())?;
    let msg = parse_message(msg_hex, pp.t)?;
    match scheme::verify(&pp, &msg, &ring, &sig) {
        scheme::Verdict::Accept => {
            println!("accept");
            Ok(ExitCode::SUCCESS)
        }
        scheme::Verdict::Reject(reason) => {
            println!("reject: {}", reason.code());
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_explain(
    params: &Path,
    ring: &Path,
    sig: &Path,
    sk: &Path,
    msg_hex: &str,
    seed: Option<String>,
    out_tape: &Path,
) -> Result<ExitCode, String> {
    let pp = load_params(params)?;
    let ring = load_ring(ring)?;
    let sig = format::sig_from_bytes(&read(sig)?).map_err(|e| e.to_string())?;
    let sk = load_sk(sk)?;
    let msg = parse_message(msg_hex, pp.t)?;
    let mut fresh = RandomTape::from_seed(resolve_seed(seed)?, "explain");
    let gamma = scheme::explain_sign(&pp, &msg, &ring, &sig, &sk, &mut fresh)
        .map_err(|e| e.to_string())?;
    write(out_tape, &gamma.to_bytes())?;
    println!(
        "explained tape: {} basis words + {} sampler words",
        gamma.basis_word_count,
        gamma.words.len() - gamma.basis_word_count
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_inspect(file: &Path, check: bool, vk_path: Option<&Path>) -> Result<ExitCode, String> {
    let bytes = read(file)?;
    let violation = |msg: String| -> Result<ExitCode, String> {
        eprintln!("check failed: {msg}");
        Ok(ExitCode::from(1))
    };
    if bytes.starts_with(format::PARAMS_MAGIC) {
        let pp = format::params_from_bytes(&bytes).map_err(|e| e.to_string())?;
        println!(
            "params: preset = {}, toy = {}, n = {}, m = {}, k = {}, t = {}, q = {}",
            pp.preset, pp.toy, pp.n, pp.m, pp.k, pp.t, pp.q
        );
        println!("sigma = {:.4}, sigma' = {:.4}, tau = {}", pp.sigma, pp.sigma_prime, pp.tau);
        if check && !is_prime(pp.q) {
            return violation(format!("modulus {} is not prime", pp.q));
        }
    } else if bytes.starts_with(format::VK_MAGIC) {
        let vk = format::vk_from_bytes(&bytes).map_err(|e| e.to_string())?;
        println!(
            "vk: n = {}, m = {}, q = {}, k = {}, fingerprint = {}",
            vk.a.rows(),
            vk.a.cols(),
            vk.a.modulus(),
            vk.b.len(),
            hex::encode(vk.fingerprint)
        );
        if check && vk.a.row_rank() < vk.a.rows() {
            return violation("A is not full row rank".into());
        }
    } else if bytes.starts_with(format::SK_MAGIC) {
        let sk = format::sk_from_bytes(&bytes).map_err(|e| e.to_string())?;
        println!(
            "sk: m = {}, prf key bits = {}, vk fingerprint = {}",
            sk.s.dim(),
            sk.prf_key.len(),
            hex::encode(sk.vk_fingerprint)
        );
        if check {
            let vk_path =
                vk_path.ok_or("checking a signing key needs --vk for the trapdoor identity")?;
            let vk = format::vk_from_bytes(&read(vk_path)?).map_err(|e| e.to_string())?;
            if vk.fingerprint != sk.vk_fingerprint {
                return violation("signing key is bound to a different verification key".into());
            }
            if let Err(e) = sk.s.check_trapdoor(&vk.a) {
                return violation(format!("trapdoor identity fails: {e}"));
            }
        }
    } else if bytes.starts_with(format::RING_MAGIC) {
        let ring = format::ring_from_bytes(&bytes).map_err(|e| e.to_string())?;
        println!("ring: N = {}", ring.len());
        for (i, vk) in ring.keys().iter().enumerate() {
            println!("  member {i}: {}", hex::encode(vk.fingerprint));
        }
    } else if bytes.starts_with(format::SIG_MAGIC) {
        let sig = format::sig_from_bytes(&bytes).map_err(|e| e.to_string())?;
        println!("signature: N = {}, norm = {:.2}", sig.ring_size, sig.norm());
    } else if bytes.starts_with(b"LRSTAPE1") {
        let tape = RandomTape::from_bytes(&bytes).map_err(|e| e.to_string())?;
        let words = (bytes.len() - 48) / 8;
        if words == 0 {
            println!("tape: seeded stream");
        } else {
            let basis = u64::from_le_bytes(tape.seed()[..8].try_into().unwrap());
            println!("tape: {words} explicit words ({basis} basis segment words)");
        }
    } else if bytes.starts_with(b"LRSCIR1") {
        let spec = lrs::prf::PrfSpec::from_bytes(&bytes, "inspected")
            .map_err(|e| e.to_string())?;
        println!(
            "circuit: k = {}, t = {}, gates = {}, depth = {}",
            spec.key_len(),
            spec.msg_len(),
            spec.circuit().gates().len(),
            spec.circuit().depth()
        );
    } else {
        return Err("unknown file format".into());
    }
    Ok(ExitCode::SUCCESS)
}
