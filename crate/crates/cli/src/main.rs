//! `qmvw`: build standard modules, classify modules, compute conjugators
//! and run seeded verification reports.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use qmvw_core::algebra::FactorKind;
use qmvw_core::classify::classify_with_isometry;
use qmvw_core::group::{membership_defects, random_group_element, ExtendedElement};
use qmvw_core::io::{
    classification_to_json, conjugator_to_json, element_from_json, element_to_json, module_from_json,
    module_to_json, read_json, report_to_json, write_json,
};
use qmvw_core::module::HermitianModule;
use qmvw_core::pipeline::{mvw_conjugator, FLOAT_RESIDUAL_TOLERANCE};
use qmvw_core::standard::{standard_module, takes_signature, Params};
use qmvw_core::verify::verify_theorem;
use qmvw_core::samples::{exact_group_samples, module_nilpotent_frame, SampleKind};
use qmvw_core::{Error, Matrix, Rational, Scalar};

mod failure;
use failure::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Backend {
    Exact,
    Float,
}

impl Backend {
    fn name(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Sample {
    Cayley,
    Unipotent,
    Split,
    Mixed,
    Semisimple,
}

impl Sample {
    fn kind(self) -> Option<SampleKind> {
        match self {
            Sample::Cayley => None,
            Sample::Unipotent => Some(SampleKind::Unipotent),
            Sample::Split => Some(SampleKind::SplitSemisimple),
            Sample::Mixed => Some(SampleKind::Mixed),
            Sample::Semisimple => Some(SampleKind::Semisimple),
        }
    }
}

/// An exact-eligible element of the requested kind.
fn eligible_element(e: &HermitianModule<Rational>, kind: SampleKind, seed: u64) -> Result<Matrix<Rational>, Failure> {
    let frame = module_nilpotent_frame(e).map_err(Failure::from_core)?;
    if frame.is_none() && kind != SampleKind::Semisimple {
        return Err(Failure::Math(format!("no {kind} samples on this module; try --sample semisimple")));
    }
    let samples = exact_group_samples(e, frame.as_ref(), 4, seed).map_err(Failure::from_core)?;
    samples
        .into_iter()
        .find(|(k, _)| *k == kind)
        .map(|(_, x)| x)
        .ok_or_else(|| Failure::Math(format!("no {kind} sample found")))
}

#[derive(Parser, Debug)]
#[command(name = "qmvw", version, about = "Quaternionic hermitian modules and form-reversing conjugators")]
struct Cli {
    /// Scalar backend.
    #[arg(long, global = true, value_enum, env = "QMVW_BACKEND", default_value = "exact")]
    backend: Backend,
    #[command(subcommand)]
    command: Command,
}

/// A standard model: algebra kind, sign and invariant.
#[derive(Args, Debug, Clone)]
struct ModelArgs {
    /// One of R_id, C_id, C_conj, RxR_swap, CxC_swap.
    #[arg(long)]
    kind: String,
    #[arg(long, allow_hyphen_values = true)]
    epsilon: i8,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the standard module with the given invariants.
    Standard {
        #[command(flatten)]
        model: ModelArgs,
        /// Output file (stdout if omitted).
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Print the invariants of a module and write an isometry onto the standard model.
    Classify {
        module: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Compute (g, −1) with g x g⁻¹ = x⁻¹ for an element x of the unitary group.
    Conjugator {
        module: PathBuf,
        element: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run the conjugator on random elements of a standard model and report.
    Verify {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 25)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Write a random element of the unitary group of a module.
    Random {
        module: PathBuf,
        #[arg(long)]
        seed: u64,
        /// `cayley` draws a Cayley transform of a random Lie element; the
        /// other kinds are built so that the exact backend can split them.
        #[arg(long, value_enum, default_value = "cayley")]
        sample: Sample,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

impl ModelArgs {
    fn resolve(&self) -> Result<(FactorKind, i8, Params), Failure> {
        let kind: FactorKind = self.kind.parse().map_err(|e: Error| Failure::Input(e.to_string()))?;
        if self.epsilon != 1 && self.epsilon != -1 {
            return Err(Failure::Input(format!("epsilon must be 1 or -1, got {}", self.epsilon)));
        }
        let params = match (self.p, self.q, self.n) {
            (Some(p), Some(q), None) => Params::Signature(p, q),
            (None, None, Some(n)) => Params::Rank(n),
            _ => return Err(Failure::Input("give either --p and --q, or --n".into())),
        };
        if matches!(params, Params::Signature(..)) != takes_signature(kind, self.epsilon) {
            let wanted = if takes_signature(kind, self.epsilon) { "--p and --q" } else { "--n" };
            return Err(Failure::Input(format!("{kind} with epsilon {} takes {wanted}", self.epsilon)));
        }
        Ok((kind, self.epsilon, params))
    }

    fn header(&self, kind: FactorKind, epsilon: i8, params: Params) -> Map<String, Value> {
        let mut h = Map::new();
        h.insert("kind".into(), json!(kind.tag()));
        h.insert("epsilon".into(), json!(epsilon));
        match params {
            Params::Signature(p, q) => {
                h.insert("p".into(), json!(p));
                h.insert("q".into(), json!(q));
            }
            Params::Rank(n) => {
                h.insert("n".into(), json!(n));
            }
        }
        h
    }
}

fn emit(out: Option<&Path>, v: &Value) -> Result<(), Failure> {
    match out {
        Some(path) => write_json(path, v).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            let text = serde_json::to_string_pretty(v).expect("serializable");
            match writeln!(std::io::stdout(), "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Input(format!("stdout: {e}"))),
                _ => Ok(()),
            }
        }
    }
}

fn load_module<T: Scalar>(path: &Path) -> Result<HermitianModule<T>, Failure> {
    let v = read_json(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let e = module_from_json(&v).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let report = e.validate();
    if !report.is_valid() {
        return Err(Failure::Math(format!("{} fails the module axioms:\n{report}", path.display())));
    }
    Ok(e)
}

fn tolerance<T: Scalar>() -> f64 {
    if T::EXACT {
        0.0
    } else {
        FLOAT_RESIDUAL_TOLERANCE
    }
}

fn run<T: Scalar>(command: &Command, backend: Backend) -> Result<(), Failure> {
    match command {
        Command::Standard { model, out } => {
            let (kind, epsilon, params) = model.resolve()?;
            let e = standard_module::<T>(kind, epsilon, params).map_err(|e| Failure::Input(e.to_string()))?;
            emit(out.as_deref(), &module_to_json(&e))
        }
        Command::Classify { module, out } => {
            let e = load_module::<T>(module)?;
            let result = classify_with_isometry(&e).map_err(Failure::from_core)?;
            for (kind, p) in e.algebra.factors().iter().zip(&result.invariants) {
                eprintln!("{kind}: {p}");
            }
            emit(out.as_deref(), &classification_to_json(e.algebra.factors(), &result.invariants, &result.isometry))
        }
        Command::Conjugator { module, element, out } => {
            let e = load_module::<T>(module)?;
            let v = read_json(element).map_err(|err| Failure::Input(format!("{}: {err}", element.display())))?;
            let x: ExtendedElement<T> =
                element_from_json(&v).map_err(|err| Failure::Input(format!("{}: {err}", element.display())))?;
            if x.delta != 1 {
                return Err(Failure::Input("the element must have delta = 1".into()));
            }
            let defects = membership_defects(&e, &x, tolerance::<T>()).map_err(|err| Failure::Input(err.to_string()))?;
            if !defects.is_empty() {
                return Err(Failure::Input(format!("element is not in the unitary group:\n  {}", defects.join("\n  "))));
            }
            let c = mvw_conjugator(&e, &x.g).map_err(Failure::from_core)?;
            emit(out.as_deref(), &conjugator_to_json(&c))
        }
        Command::Verify { model, trials, seed, out } => {
            let (kind, epsilon, params) = model.resolve()?;
            let e = standard_module::<T>(kind, epsilon, params).map_err(|e| Failure::Input(e.to_string()))?;
            let report = verify_theorem(&e, *trials, *seed).map_err(Failure::from_core)?;
            let mut header = model.header(kind, epsilon, params);
            header.insert("backend".into(), json!(backend.name()));
            header.insert("tolerance".into(), json!(tolerance::<T>()));
            header.insert("generator".into(), json!("ChaCha8"));
            header.insert("seed".into(), json!(seed));
            header.insert("trials".into(), json!(trials));
            emit(out.as_deref(), &report_to_json(header, &report))?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Math("verification failed; see the report".into()))
            }
        }
        Command::Random { module, seed, sample, out } => {
            let e = load_module::<T>(module)?;
            let g = match sample.kind() {
                None => random_group_element(&e, *seed).map_err(Failure::from_core)?,
                Some(kind) => {
                    let exact = e.map_matrices(|m| m.map(|x| x.to_rational().expect("finite entry")));
                    eligible_element(&exact, kind, *seed)?.map(T::from_rational)
                }
            };
            emit(out.as_deref(), &element_to_json(&ExtendedElement::new(g, 1)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.backend {
        Backend::Exact => run::<Rational>(&cli.command, cli.backend),
        Backend::Float => run::<f64>(&cli.command, cli.backend),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
