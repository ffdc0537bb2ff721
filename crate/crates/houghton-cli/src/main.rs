//! Batch experiment driver for exact Houghton-group computations.
//!
//! Every subcommand is deterministic given its parameters and seed; tabular
//! output carries a checksum of its canonical serialization. Exit codes:
//! 0 success, 1 failed check, 2 input error, 3 unsupported configuration,
//! 4 budget exceeded.

mod report;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use houghton::element::{transposition, Element, ElementRecord, RayPoint};
use houghton::error::Error;
use houghton::metric::{
    bfs_ball_capped, exact_length, free_semigroup_check, synthesize_word, DEFAULT_ELEMENT_CAP,
};
use houghton::morphisms::{
    cohopf_double, double_preimage, is_in_double_image, np_finitary_archetype,
    np_ray_swap_archetype, np_translation_archetype, qi_witness, sigma_stack, split_rays,
    up_index, NpElement, NpElementRecord,
};
use houghton::words::{random_element, GeneratingSet, GensetName, Word};

use report::Report;

#[derive(Parser)]
#[command(name = "houghton", version, about = "Exact computations in Houghton's groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GensetArg {
    Gij,
    Gi,
    H2,
}

impl GensetArg {
    fn name(self) -> GensetName {
        match self {
            GensetArg::Gij => GensetName::Gij,
            GensetArg::Gi => GensetName::Gi,
            GensetArg::H2 => GensetName::H2,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a word and print the element record with its complexity.
    Eval {
        /// Number of rays.
        #[arg(short)]
        n: usize,
        /// Word text, e.g. "g(0,1)^2 t"; empty for the identity.
        word: String,
        /// Write the result as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Synthesize a word for an element within the complexity bound.
    Synth {
        /// Element record (inline JSON, @file, or - for stdin).
        element: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Exact word length of an element, or unknown beyond the radius cap.
    Length {
        /// Element record (inline JSON, @file, or - for stdin).
        element: Option<String>,
        #[arg(long, value_enum, default_value = "gij")]
        genset: GensetArg,
        /// Radius cap for the search.
        #[arg(long, default_value_t = 12)]
        cap: u32,
    },
    /// Exact ball table: element count per length.
    Ball {
        #[arg(short)]
        n: usize,
        #[arg(long, value_enum, default_value = "gij")]
        genset: GensetArg,
        #[arg(long)]
        radius: u32,
        /// Element-count budget.
        #[arg(long, default_value_t = DEFAULT_ELEMENT_CAP)]
        cap: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Also dump every element with its length to this CSV file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Ball growth report: sizes, ratios and the 2^r floor check.
    Growth {
        #[arg(short)]
        n: usize,
        #[arg(long, value_enum, default_value = "gij")]
        genset: GensetArg,
        #[arg(long)]
        radius: u32,
        #[arg(long, default_value_t = DEFAULT_ELEMENT_CAP)]
        cap: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Distortion table: stacked ray swaps measured in H_2 and H_3.
    Distortion {
        /// Largest stack depth k.
        #[arg(long, default_value_t = 3)]
        max_k: i64,
        /// Radius cap for the exact H_2 lengths.
        #[arg(long, default_value_t = 32)]
        h2_cap: u32,
        /// Radius cap for the exact H_3 lengths.
        #[arg(long, default_value_t = 12)]
        h3_cap: u32,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Index of the subgroup U_p in H_n by coset enumeration.
    Cosets {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        p: i64,
    },
    /// Split the rays of a U_p element, landing in H_{np}.
    Split {
        /// Element record (inline JSON, @file, or - for stdin).
        element: Option<String>,
        #[arg(short)]
        p: i64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Quasi-isometry witness for a commensuration datum.
    Qi {
        /// Commensuration record {p, base, blocks} (inline JSON, @file, -).
        #[arg(long, conflicts_with = "archetype")]
        phi: Option<String>,
        /// Built-in datum: translation, swap or finitary.
        #[arg(long, value_enum)]
        archetype: Option<Archetype>,
        #[arg(short, default_value_t = 3)]
        n: usize,
        #[arg(short, default_value_t = 2)]
        p: i64,
        /// Required lower bound N on the displacement.
        #[arg(long, default_value_t = 50)]
        distance: i64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Property check for the doubling embedding.
    CheckCohopf {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        pairs: u64,
    },
    /// Distinctness check for positive words in g_01, g_02.
    CheckFree {
        #[arg(long, default_value_t = 10)]
        max_len: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Archetype {
    Translation,
    Swap,
    Finitary,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure { code: 2, message: message.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Budget(_) | Error::TooLarge(_) => 4,
            Error::NeedThreeRays(_) | Error::TauOutsideH2(_) | Error::BadRayCount(_) => 3,
            _ => 2,
        };
        Failure { code, message: err.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure { code: 2, message: err.to_string() }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(err: serde_json::Error) -> Self {
        Failure { code: 2, message: err.to_string() }
    }
}

/// Reads inline JSON, @path, or stdin (when the argument is absent or "-").
fn read_payload(arg: Option<&str>) -> Result<String, Failure> {
    match arg {
        Some("-") | None => {
            let mut buffer = String::new();
            std::io::stdin().read_to_string(&mut buffer)?;
            Ok(buffer)
        }
        Some(path) if path.starts_with('@') => Ok(std::fs::read_to_string(&path[1..])?),
        Some(inline) => Ok(inline.to_string()),
    }
}

fn read_element(arg: Option<&str>) -> Result<Element, Failure> {
    let text = read_payload(arg)?;
    let record: ElementRecord = serde_json::from_str(text.trim())?;
    Ok(Element::from_record(&record)?)
}

fn element_json(e: &Element) -> String {
    serde_json::to_string(&e.to_record()).expect("element records serialize")
}

fn write_maybe(report: &Report, csv: &Option<PathBuf>, json: &Option<PathBuf>) -> Result<(), Failure> {
    if let Some(path) = csv {
        report.write_csv(path)?;
    }
    if let Some(path) = json {
        report.write_json(path)?;
    }
    Ok(())
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Eval { n, word, json } => {
            let parsed = Word::parse(n, &word)?;
            let element = parsed.evaluate()?;
            let profile = element.complexity();
            println!("element: {}", element_json(&element));
            println!("p: {:?}", profile.p);
            println!("P: {}", profile.total);
            println!("T: {}", profile.translation);
            println!("finitary: {}", element.is_finitary());
            if let Some(path) = json {
                let payload = serde_json::json!({
                    "element": element.to_record(),
                    "p": profile.p,
                    "total": profile.total,
                    "translation": profile.translation,
                    "finitary": element.is_finitary(),
                });
                std::fs::write(path, format!("{}\n", serde_json::to_string_pretty(&payload)?))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Synth { element, json } => {
            let e = read_element(element.as_deref())?;
            let report = synthesize_word(&e)?;
            println!("word: {}", report.word.format());
            println!("letters: {}", report.word.len());
            println!("P: {}", report.complexity);
            println!("bound: {}", report.bound);
            println!(
                "phases: translation {} / segments {} / sort {}",
                report.rho_len, report.mu_len, report.sort_len
            );
            if let Some(path) = json {
                let payload = serde_json::json!({
                    "word": report.word.format(),
                    "letters": report.word.len(),
                    "complexity": report.complexity,
                    "bound": report.bound,
                    "phase_lengths": [report.rho_len, report.mu_len, report.sort_len],
                });
                std::fs::write(path, format!("{}\n", serde_json::to_string_pretty(&payload)?))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Length { element, genset, cap } => {
            let e = read_element(element.as_deref())?;
            let gs = GeneratingSet::new(genset.name(), e.ray_count())?;
            match exact_length(&e, &gs, cap, DEFAULT_ELEMENT_CAP)? {
                Some(len) => println!("length: {len}"),
                None => println!("length: unknown (cap {cap})"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Ball { n, genset, radius, cap, csv, json, dump } => {
            let gs = GeneratingSet::new(genset.name(), n)?;
            let table = bfs_ball_capped(n, &gs, radius, cap)?;
            let mut report = Report::new("ball")
                .param("n", n)
                .param("genset", format!("{genset:?}").to_lowercase())
                .param("radius", radius)
                .columns(&["length", "count"]);
            for (length, count) in table.counts_by_length() {
                report.row(vec![length.to_string(), count.to_string()]);
            }
            report.print_human();
            write_maybe(&report, &csv, &json)?;
            if let Some(path) = dump {
                let mut body = String::from("element,length\n");
                for (e, d) in table.sorted_entries() {
                    body.push_str(&format!("\"{}\",{}\n", element_json(e).replace('"', "\"\""), d));
                }
                std::fs::write(path, body)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Growth { n, genset, radius, cap, csv, json } => {
            let gs = GeneratingSet::new(genset.name(), n)?;
            let table = bfs_ball_capped(n, &gs, radius, cap)?;
            let sizes = table.ball_sizes();
            let mut report = Report::new("growth")
                .param("n", n)
                .param("genset", format!("{genset:?}").to_lowercase())
                .param("radius", radius)
                .columns(&["r", "ball_size", "ratio", "ge_2^r"]);
            for (r, &size) in sizes.iter().enumerate() {
                let ratio = if r == 0 {
                    String::from("-")
                } else {
                    format!("{:.4}", size as f64 / sizes[r - 1] as f64)
                };
                report.row(vec![
                    r.to_string(),
                    size.to_string(),
                    ratio,
                    (size as u128 >= 1u128 << r).to_string(),
                ]);
            }
            report.print_human();
            write_maybe(&report, &csv, &json)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Distortion { max_k, h2_cap, h3_cap, csv, json } => {
            if max_k < 1 {
                return Err(Failure::input("max-k must be at least 1"));
            }
            let h2 = GeneratingSet::new(GensetName::H2, 2)?;
            let h3 = GeneratingSet::new(GensetName::Gij, 3)?;
            let mut report = Report::new("distortion")
                .param("max_k", max_k)
                .param("h2_cap", h2_cap)
                .param("h3_cap", h3_cap)
                .columns(&["k", "h2_exact", "h3_bound_4k", "h3_exact"]);
            for k in 1..=max_k {
                let in_h2 = sigma_stack(2, k)?;
                let h2_len = exact_length(&in_h2, &h2, h2_cap, DEFAULT_ELEMENT_CAP)?;
                let in_h3 = sigma_stack(3, k)?;
                // The witness word pins the H_3 length to at most 4k.
                let word = Word::parse(
                    3,
                    &format!("g(0,2)^{k} g(1,2)^{k} g(2,0)^{k} g(2,1)^{k}"),
                )?;
                if word.evaluate()? != in_h3 {
                    return Err(Failure::input("stacked swap word identity failed"));
                }
                let h3_len = exact_length(&in_h3, &h3, h3_cap, DEFAULT_ELEMENT_CAP)?;
                report.row(vec![
                    k.to_string(),
                    h2_len.map_or_else(|| "unknown".into(), |v| v.to_string()),
                    (4 * k).to_string(),
                    h3_len.map_or_else(|| "unknown".into(), |v| v.to_string()),
                ]);
            }
            report.print_human();
            write_maybe(&report, &csv, &json)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Cosets { n, p } => {
            let index = up_index(n, p)?;
            println!("index: {index}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Split { element, p, json } => {
            let e = read_element(element.as_deref())?;
            let split = split_rays(&e, p)?;
            println!("element: {}", element_json(&split));
            if let Some(path) = json {
                std::fs::write(
                    path,
                    format!("{}\n", serde_json::to_string_pretty(&split.to_record())?),
                )?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Qi { phi, archetype, n, p, distance, json } => {
            let datum: NpElement = match (phi, archetype) {
                (Some(payload), None) => {
                    let text = read_payload(Some(&payload))?;
                    let record: NpElementRecord = serde_json::from_str(text.trim())?;
                    NpElement::from_record(&record)?
                }
                (None, Some(Archetype::Translation)) => np_translation_archetype(n, p)?,
                (None, Some(Archetype::Swap)) => np_ray_swap_archetype(n, p)?,
                (None, Some(Archetype::Finitary)) => np_finitary_archetype(n, p)?,
                (None, None) => {
                    return Err(Failure::input("provide --phi or --archetype"));
                }
                (Some(_), Some(_)) => unreachable!("clap forbids both"),
            };
            let (sigma, certificate) = qi_witness(&datum, distance)?;
            let ok = certificate >= distance;
            println!("sigma: {}", element_json(&sigma));
            println!("certificate: {certificate}");
            println!("required: {distance}");
            println!("{}", if ok { "PASS" } else { "FAIL" });
            if let Some(path) = json {
                let payload = serde_json::json!({
                    "sigma": sigma.to_record(),
                    "certificate": certificate,
                    "required": distance,
                    "pass": ok,
                });
                std::fs::write(path, format!("{}\n", serde_json::to_string_pretty(&payload)?))?;
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::CheckCohopf { seed, pairs } => {
            let mut ok = true;
            for offset in 0..pairs {
                let a = random_element(3, 16, seed.wrapping_add(offset))?;
                let b = random_element(3, 16, seed.wrapping_add(offset) ^ 0x5eed)?;
                let homomorphic = cohopf_double(&a.compose(&b)?)
                    == cohopf_double(&a).compose(&cohopf_double(&b))?;
                let round_trip = double_preimage(&cohopf_double(&a)).as_ref() == Some(&a);
                if !homomorphic || !round_trip {
                    ok = false;
                    println!("pair {offset}: FAIL");
                }
            }
            let witness = transposition(3, RayPoint::new(0, 2), RayPoint::new(0, 3))?;
            let rejected = !is_in_double_image(&witness);
            if !rejected {
                ok = false;
            }
            println!(
                "homomorphism and round-trip on {pairs} pairs: {}",
                if ok { "PASS" } else { "FAIL" }
            );
            println!("adjacent-pair witness rejected: {}", if rejected { "PASS" } else { "FAIL" });
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::CheckFree { max_len } => {
            let check = free_semigroup_check(max_len)?;
            println!("words: {}", check.expected);
            println!("distinct: {}", check.distinct);
            println!("{}", if check.is_free() { "PASS" } else { "FAIL" });
            Ok(if check.is_free() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}
