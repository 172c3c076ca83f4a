use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use stretchkit::json::{
    dense_vector_to_json, jordan_spec_to_json, jordan_specs_from_json, map_from_json, render, stretched_to_json,
    tensor_to_json, vector_to_json, AnyTensor, AnyVector, JsonScalar, MapDoc,
};
use stretchkit::jordan::{certify_nfold, jordan_nfold};
use stretchkit::stretch::{kappa, permute_stretch, stretch, stretch_vector, tp_similarity_witness};
use stretchkit::tensor::{act, average, convolve};
use stretchkit::verify::run_suite;
use stretchkit::{Error, IndexMap, Permutation, Tensor};

mod pretty;

#[derive(Parser)]
#[command(name = "stretchkit", version, about = "Stretching maps, convolution and Jordan forms of tensors")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the result here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Print human-readable tables instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Args)]
struct TensorMap {
    #[arg(long, value_name = "PATH")]
    tensor: PathBuf,
    #[arg(long, value_name = "PATH")]
    map: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Stretch a tensor into a matrix indexed by the map's values.
    Stretch(TensorMap),
    /// Stretch a vector.
    StretchVector {
        #[arg(long, value_name = "PATH")]
        vector: PathBuf,
        #[arg(long, value_name = "PATH")]
        map: PathBuf,
    },
    /// Convolution product of two tensors.
    Convolve {
        #[arg(long, value_name = "PATH")]
        left: PathBuf,
        #[arg(long, value_name = "PATH")]
        right: PathBuf,
        #[arg(long, value_name = "PATH")]
        map: PathBuf,
    },
    /// Action of a tensor on a vector.
    Act {
        #[arg(long, value_name = "PATH")]
        tensor: PathBuf,
        #[arg(long, value_name = "PATH")]
        vector: PathBuf,
        #[arg(long, value_name = "PATH")]
        map: PathBuf,
    },
    /// Class averaging (block means; `--raw` for block sums).
    Average {
        #[command(flatten)]
        input: TensorMap,
        #[arg(long)]
        raw: bool,
    },
    /// Determinant of the stretched matrix.
    Kappa(TensorMap),
    /// Stretch through the map composed with a slot permutation.
    Permute {
        #[command(flatten)]
        input: TensorMap,
        /// One-line notation, e.g. "2,1".
        #[arg(long, value_name = "LIST")]
        sigma: String,
    },
    /// Jordan form of the stretched tensor product of Jordan matrices.
    Jordan {
        #[arg(long, value_name = "PATH")]
        spec: PathBuf,
        /// Certify the closed form with the rank oracle.
        #[arg(long)]
        verify: bool,
    },
    /// Permutation similarity between an injective map and the mixed-radix map.
    TpWitness {
        #[arg(long, value_name = "PATH")]
        map: PathBuf,
    },
    /// Run a seeded property suite.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, env = "STRETCHKIT_SEED", default_value_t = 0)]
        seed: u64,
    },
}

/// An error with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. } | Error::InvalidPermutation(_) => 2,
            Error::Dimension(_)
            | Error::NotSquare { .. }
            | Error::OutsideDomain { .. }
            | Error::Arity { .. }
            | Error::NotRectangular
            | Error::NotInjective(_)
            | Error::DomainMismatch(_)
            | Error::Overflow(_) => 3,
            Error::PermutationDomain(_) => 4,
            Error::ScalarMismatch(_) | Error::InexactScalar(_) => 5,
            Error::MissedEigenvalue { .. } => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

/// Result document and whether it represents a passed check.
struct Outcome {
    value: Value,
    ok: bool,
}

impl From<Value> for Outcome {
    fn from(value: Value) -> Self {
        Outcome { value, ok: true }
    }
}

fn read_json(path: &Path) -> CliResult<Value> {
    let name = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("cannot read `{name}`: {e}"),
    })?;
    serde_json::from_str(&text).map_err(|e| Failure {
        code: 2,
        message: format!("`{name}` is not valid JSON: {e}"),
    })
}

/// Parse failures name the file they came from.
fn in_file<T>(path: &Path, r: stretchkit::Result<T>) -> CliResult<T> {
    r.map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn load_tensor(path: &Path) -> CliResult<AnyTensor> {
    let v = read_json(path)?;
    in_file(path, AnyTensor::from_json(&v))
}

fn load_vector(path: &Path) -> CliResult<AnyVector> {
    let v = read_json(path)?;
    in_file(path, AnyVector::from_json(&v))
}

fn load_map(path: &Path) -> CliResult<MapDoc> {
    let v = read_json(path)?;
    in_file(path, map_from_json(&v))
}

fn stretch_out<S: JsonScalar>(t: &Tensor<S>, map: &IndexMap) -> CliResult<Value> {
    Ok(stretched_to_json(&stretch(t, map)?))
}

fn kappa_out<S: JsonScalar>(t: &Tensor<S>, map: &IndexMap) -> CliResult<Value> {
    Ok(json!({ "kappa": kappa(t, map)?.to_json(), "scalar": S::TAG }))
}

fn mismatch() -> Failure {
    Failure::from(Error::ScalarMismatch("inputs use different scalar kinds".into()))
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Stretch(io) | Command::Kappa(io) => {
            let (t, doc) = (load_tensor(&io.tensor)?, load_map(&io.map)?);
            let map = doc.bind(t.domain())?;
            let kappa_cmd = matches!(cli.command, Command::Kappa(_));
            Ok(match (&t, kappa_cmd) {
                (AnyTensor::Cf64(t), false) => stretch_out(t, &map)?,
                (AnyTensor::Gq(t), false) => stretch_out(t, &map)?,
                (AnyTensor::Cf64(t), true) => kappa_out(t, &map)?,
                (AnyTensor::Gq(t), true) => kappa_out(t, &map)?,
            }
            .into())
        }
        Command::StretchVector { vector, map } => {
            let (x, doc) = (load_vector(vector)?, load_map(map)?);
            let map = doc.bind(x.domain())?;
            Ok(match &x {
                AnyVector::Cf64(x) => dense_vector_to_json(&stretch_vector(x, &map)?),
                AnyVector::Gq(x) => dense_vector_to_json(&stretch_vector(x, &map)?),
            }
            .into())
        }
        Command::Convolve { left, right, map } => {
            let (l, r, doc) = (load_tensor(left)?, load_tensor(right)?, load_map(map)?);
            let map = doc.bind(l.domain())?;
            Ok(match (&l, &r) {
                (AnyTensor::Cf64(a), AnyTensor::Cf64(b)) => tensor_to_json(&convolve(a, b, &map)?),
                (AnyTensor::Gq(a), AnyTensor::Gq(b)) => tensor_to_json(&convolve(a, b, &map)?),
                _ => return Err(mismatch()),
            }
            .into())
        }
        Command::Act { tensor, vector, map } => {
            let (t, x, doc) = (load_tensor(tensor)?, load_vector(vector)?, load_map(map)?);
            let map = doc.bind(t.domain())?;
            let out = match (&t, &x) {
                (AnyTensor::Cf64(t), AnyVector::Cf64(x)) => vector_to_json(&act(t, x, &map)?),
                (AnyTensor::Gq(t), AnyVector::Gq(x)) => vector_to_json(&act(t, x, &map)?),
                _ => return Err(mismatch()),
            };
            Ok(out.into())
        }
        Command::Average { input, raw } => {
            let (t, doc) = (load_tensor(&input.tensor)?, load_map(&input.map)?);
            let map = doc.bind(t.domain())?;
            Ok(match &t {
                AnyTensor::Cf64(t) => tensor_to_json(&average(t, &map, !raw)?),
                AnyTensor::Gq(t) => tensor_to_json(&average(t, &map, !raw)?),
            }
            .into())
        }
        Command::Permute { input, sigma } => {
            let (t, doc) = (load_tensor(&input.tensor)?, load_map(&input.map)?);
            let sigma = Permutation::parse(sigma)?;
            let map = doc.bind(t.domain())?;
            if sigma.len() != map.domain().arity() {
                return Err(Error::PermutationDomain(format!(
                    "sigma permutes {} slots, the index set has arity {}",
                    sigma.len(),
                    map.domain().arity()
                ))
                .into());
            }
            Ok(match &t {
                AnyTensor::Cf64(t) => stretched_to_json(&permute_stretch(t, &map, &sigma)?),
                AnyTensor::Gq(t) => stretched_to_json(&permute_stretch(t, &map, &sigma)?),
            }
            .into())
        }
        Command::Jordan { spec, verify } => {
            let v = read_json(spec)?;
            let specs = in_file(spec, jordan_specs_from_json(&v))?;
            if *verify {
                let (closed, oracle, agree) = certify_nfold(&specs)?;
                Ok(Outcome {
                    value: json!({
                        "closed_form": jordan_spec_to_json(&closed),
                        "oracle": jordan_spec_to_json(&oracle),
                        "agree": agree,
                    }),
                    ok: agree,
                })
            } else {
                Ok(json!({ "closed_form": jordan_spec_to_json(&jordan_nfold(&specs)?) }).into())
            }
        }
        Command::TpWitness { map } => {
            let doc = load_map(map)?;
            let map = in_file(map, doc.bind_own())?;
            let witness = tp_similarity_witness(&map)?;
            let verified = witness.verify(&map)?;
            let mut labels = map.values().to_vec();
            labels.sort_unstable();
            Ok(Outcome {
                value: json!({
                    "check": "tp-similarity",
                    "passed": verified,
                    "details": { "permutation": witness.permutation(), "labels": labels },
                }),
                ok: verified,
            })
        }
        Command::Verify { suite, trials, seed } => {
            let report = run_suite(suite, *trials, *seed)?;
            Ok(Outcome {
                ok: report.all_passed(),
                value: report.to_json(),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return ExitCode::from(f.code);
        }
    };
    let text = if cli.pretty {
        pretty::render(&outcome.value)
    } else {
        render(&outcome.value)
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &text).map_err(|e| format!("cannot write `{}`: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(msg) = written {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
