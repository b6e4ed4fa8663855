//! Command dispatch. Every command returns a [`CommandResult`] whose exit
//! code is 0 on success, 1 when a check found a violation and 2 on bad
//! input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};
use skk_core::cobordism::{canonical_word, normal_form, parse_word, CobordismWord};
use skk_core::intersection_form::signature;
use skk_core::report::CheckOutcome;
use skk_core::simplicial::{Coefficients, Semicharacteristic, SimplicialComplex};
use skk_core::skk::{
    b_sigma_dependence, sk_class, skk_class, split_dim2, verify_split_sequence, ClosedManifold,
};
use skk_core::suite;
use skk_core::surfaces::{sk_equivalent, Move};
use skk_core::tqft::{
    check_closed_law, verify_axioms, GeneratorAssignment, GroupScalar, InvertibleTqft2,
    WordEvaluator,
};
use skk_core::virtual_bordism::Catalog;

use crate::io::{load_catalog, load_complex};
use crate::script::{parse_script, parse_surface};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct CommandResult {
    pub code: i32,
    pub report: String,
    pub json: Option<Value>,
}

impl CommandResult {
    fn ok(report: String, json: Value) -> Self {
        Self::with_code(0, report, json)
    }

    fn with_code(code: i32, report: String, mut json: Value) -> Self {
        if let Value::Object(m) = &mut json {
            m.insert("schema".into(), SCHEMA.into());
            m.insert("exit_code".into(), code.into());
        }
        CommandResult {
            code,
            report,
            json: Some(json),
        }
    }

    fn input_error(message: impl std::fmt::Display) -> Self {
        CommandResult {
            code: 2,
            report: format!("error: {message}"),
            json: None,
        }
    }

    fn from_checks(command: &str, checks: &[CheckOutcome]) -> Self {
        let mut report = String::new();
        for c in checks {
            writeln!(report, "{c}").unwrap();
        }
        let passed = checks.iter().all(CheckOutcome::passed);
        writeln!(
            report,
            "{}",
            if passed {
                "all checks passed"
            } else {
                "violations found"
            }
        )
        .unwrap();
        let json = json!({
            "command": command,
            "passed": passed,
            "checks": checks.iter().map(check_json).collect::<Vec<_>>(),
        });
        Self::with_code(if passed { 0 } else { 1 }, report, json)
    }
}

fn check_json(c: &CheckOutcome) -> Value {
    json!({
        "name": c.name,
        "passed": c.passed(),
        "samples": c.samples,
        "violations": c.violations,
        "witnesses": c.witnesses,
    })
}

#[derive(Debug, Parser)]
#[command(
    name = "skk",
    version,
    about = "Exact cut-and-paste invariants and invertible TQFTs"
)]
struct Cli {
    /// Print the machine-readable report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integral homology of a complex file.
    Homology { file: PathBuf },
    /// χ, the semicharacteristic, and σ in dimension 4.
    Invariants { file: PathBuf },
    /// Run a cut/paste script and track χ.
    Cutpaste { script: PathBuf },
    #[command(subcommand)]
    Cob(CobCommand),
    #[command(subcommand)]
    Tqft(TqftCommand),
    #[command(subcommand)]
    Skk(SkkCommand),
    /// Run every property suite.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
enum CobCommand {
    /// Topological class and canonical word of a cobordism word.
    NormalForm { word: String },
    /// Evaluate a word under the TQFT with the given cap and cup values.
    Eval {
        word: String,
        #[command(flatten)]
        scalars: ScalarArgs,
    },
}

#[derive(Debug, Subcommand)]
enum TqftCommand {
    /// Check the TQFT axioms on random words.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random words per TQFT.
        #[arg(long, default_value_t = 200)]
        budget: usize,
        /// Check only this TQFT instead of the rational grid.
        #[command(flatten)]
        scalars: ScalarArgs,
        /// Send pants to the cap value instead of its inverse.
        #[arg(long)]
        corrupt: bool,
    },
}

#[derive(Debug, Subcommand)]
enum SkkCommand {
    /// SKK and SK class of a complex file or a closed surface expression.
    Class { target: String },
    /// Check the split exact sequence in dimension 2.
    VerifySequence {
        /// Grid indices run over -N..=N for both a and e.
        #[arg(long, default_value_t = 4)]
        grid: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Show that the splitting depends on the choice of B_Σ.
    DemoBsigma {
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long, default_value = "D8")]
        piece: String,
        #[arg(long, default_value = "p2")]
        attribute: String,
        #[arg(long, default_value = "D8")]
        first: String,
        #[arg(long, default_value = "CP4-D8")]
        second: String,
    },
}

#[derive(Debug, Clone, Default, Args)]
struct ScalarArgs {
    /// Rational cap value.
    #[arg(long, allow_hyphen_values = true)]
    cap: Option<String>,
    /// Rational cup value.
    #[arg(long, allow_hyphen_values = true)]
    cup: Option<String>,
    /// Cap value exp(r) for a rational r.
    #[arg(long, allow_hyphen_values = true)]
    cap_exp: Option<String>,
    /// Cup value exp(r) for a rational r.
    #[arg(long, allow_hyphen_values = true)]
    cup_exp: Option<String>,
}

impl ScalarArgs {
    fn is_empty(&self) -> bool {
        self.cap.is_none() && self.cup.is_none() && self.cap_exp.is_none() && self.cup_exp.is_none()
    }

    fn tqft(&self) -> Result<InvertibleTqft2, String> {
        let rational = self.cap.is_some() || self.cup.is_some();
        let exp = self.cap_exp.is_some() || self.cup_exp.is_some();
        if rational && exp {
            return Err("--cap/--cup and --cap-exp/--cup-exp cannot be mixed".into());
        }
        let parse = |s: &Option<String>, flag: &str| -> Result<BigRational, String> {
            let s = s.as_deref().ok_or_else(|| format!("missing {flag}"))?;
            BigRational::from_str(s.trim()).map_err(|_| format!("{flag}: {s:?} is not a rational"))
        };
        let (a, e) = if exp {
            (
                GroupScalar::exp(parse(&self.cap_exp, "--cap-exp")?),
                GroupScalar::exp(parse(&self.cup_exp, "--cup-exp")?),
            )
        } else {
            let a = parse(&self.cap, "--cap")?;
            let e = parse(&self.cup, "--cup")?;
            (
                GroupScalar::rational(a).map_err(|e| format!("--cap: {e}"))?,
                GroupScalar::rational(e).map_err(|e| format!("--cup: {e}"))?,
            )
        };
        InvertibleTqft2::new(a, e).map_err(|e| e.to_string())
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> (CommandResult, bool)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let report = e.render().to_string();
            return (
                CommandResult {
                    code,
                    report,
                    json: None,
                },
                false,
            );
        }
    };
    (dispatch(cli.command), cli.json)
}

fn dispatch(command: Command) -> CommandResult {
    match command {
        Command::Homology { file } => homology(&file),
        Command::Invariants { file } => invariants(&file),
        Command::Cutpaste { script } => cutpaste(&script),
        Command::Cob(CobCommand::NormalForm { word }) => cob_normal_form(&word),
        Command::Cob(CobCommand::Eval { word, scalars }) => cob_eval(&word, &scalars),
        Command::Tqft(TqftCommand::Verify {
            seed,
            budget,
            scalars,
            corrupt,
        }) => tqft_verify(seed, budget, &scalars, corrupt),
        Command::Skk(SkkCommand::Class { target }) => skk_class_cmd(&target),
        Command::Skk(SkkCommand::VerifySequence { grid, seed }) => verify_sequence(grid, seed),
        Command::Skk(SkkCommand::DemoBsigma {
            catalog,
            piece,
            attribute,
            first,
            second,
        }) => demo_bsigma(catalog.as_deref(), &piece, &attribute, &first, &second),
        Command::Selftest { seed } => selftest(seed),
    }
}

fn load(file: &Path) -> Result<SimplicialComplex, CommandResult> {
    load_complex(file).map_err(CommandResult::input_error)
}

fn group_name(betti: usize, torsion: &[num_bigint::BigInt]) -> String {
    let mut parts = Vec::new();
    match betti {
        0 => {}
        1 => parts.push("Z".to_string()),
        b => parts.push(format!("Z^{b}")),
    }
    parts.extend(torsion.iter().map(|t| format!("Z/{t}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" ⊕ ")
    }
}

fn homology(file: &Path) -> CommandResult {
    let k = match load(file) {
        Ok(k) => k,
        Err(e) => return e,
    };
    let h = k.homology(Coefficients::Integers);
    let mut report = String::new();
    let mut groups = Vec::new();
    for (d, (&b, t)) in h.betti.iter().zip(&h.torsion).enumerate() {
        let name = group_name(b, t);
        writeln!(report, "H_{d} = {name}").unwrap();
        groups.push(json!({
            "degree": d,
            "rank": b,
            "torsion": t.iter().map(ToString::to_string).collect::<Vec<_>>(),
        }));
    }
    CommandResult::ok(
        report,
        json!({ "command": "homology", "betti": h.betti, "groups": groups }),
    )
}

fn invariants(file: &Path) -> CommandResult {
    let k = match load(file) {
        Ok(k) => k,
        Err(e) => return e,
    };
    let chi = k.euler_characteristic();
    let mut report = format!("dim = {}\nχ = {chi}\n", k.dim());
    let mut json = json!({ "command": "invariants", "dim": k.dim(), "chi": chi });
    match k.kervaire_semicharacteristic() {
        Ok(Semicharacteristic::Integer(n)) => {
            writeln!(report, "χ½ = {n}").unwrap();
            json["semicharacteristic"] = json!(n);
        }
        Ok(Semicharacteristic::Mod2(r)) => {
            writeln!(report, "χ½ = {r} mod 2").unwrap();
            json["semicharacteristic"] = json!(format!("{r} mod 2"));
        }
        Err(e) => {
            writeln!(report, "χ½ undefined: {e}").unwrap();
            json["semicharacteristic"] = Value::Null;
        }
    }
    if k.dim() == 4 {
        match signature(&k) {
            Ok(s) => {
                writeln!(report, "σ = {s}").unwrap();
                json["sigma"] = json!(s);
            }
            Err(e) => return CommandResult::input_error(format!("{}: {e}", file.display())),
        }
    }
    CommandResult::ok(report, json)
}

fn cutpaste(path: &Path) -> CommandResult {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return CommandResult::input_error(format!("{}: {e}", path.display())),
    };
    let script = match parse_script(&text) {
        Ok(s) => s,
        Err(e) => return CommandResult::input_error(format!("{}: {e}", path.display())),
    };
    let mut cur = script.start.clone();
    let mut report = format!("start: {cur} (χ {})\n", cur.chi());
    let mut steps = vec![json!({ "surface": cur.to_string(), "chi": cur.chi() })];
    let mut check = CheckOutcome::new("χ preserved");
    for (line, m) in &script.moves {
        let next = match cur.apply(m) {
            Ok(s) => s,
            Err(e) => {
                return CommandResult::input_error(format!("{}: line {line}: {e}", path.display()))
            }
        };
        let verb = match m {
            Move::Cut(_) => "cut",
            Move::Paste(_) => "paste",
        };
        check.record(next.chi() == cur.chi(), || {
            format!("line {line}: χ {} became {}", cur.chi(), next.chi())
        });
        writeln!(report, "line {line}: {verb} -> {next} (χ {})", next.chi()).unwrap();
        steps.push(
            json!({ "line": line, "move": verb, "surface": next.to_string(), "chi": next.chi() }),
        );
        cur = next;
    }
    let mut equivalent = Value::Null;
    if script.start.is_closed() && cur.is_closed() {
        let same = sk_equivalent(&script.start, &cur) == Ok(true);
        check.record(same, || {
            format!("{} and {cur} are not SK-equivalent", script.start)
        });
        writeln!(report, "SK-equivalent to start: {same}").unwrap();
        equivalent = same.into();
    }
    write!(report, "{check}").unwrap();
    let code = if check.passed() { 0 } else { 1 };
    CommandResult::with_code(
        code,
        report,
        json!({
            "command": "cutpaste",
            "steps": steps,
            "sk_equivalent": equivalent,
            "check": check_json(&check),
        }),
    )
}

fn word(text: &str) -> Result<CobordismWord, CommandResult> {
    parse_word(text).map_err(|e| CommandResult::input_error(format!("{text:?}: {e}")))
}

fn cob_normal_form(text: &str) -> CommandResult {
    let w = match word(text) {
        Ok(w) => w,
        Err(e) => return e,
    };
    let class = match normal_form(&w) {
        Ok(c) => c,
        Err(e) => return CommandResult::input_error(e),
    };
    let mut report = format!("class: {class}\nχ = {}\n", class.chi());
    let canonical = if w.dim() == 2 {
        canonical_word(&class).ok().map(|c| c.to_string())
    } else {
        None
    };
    if let Some(c) = &canonical {
        writeln!(report, "canonical word: {c}").unwrap();
    }
    CommandResult::ok(
        report,
        json!({
            "command": "cob normal-form",
            "word": w.to_string(),
            "class": class.to_string(),
            "chi": class.chi(),
            "canonical_word": canonical,
        }),
    )
}

fn cob_eval(text: &str, scalars: &ScalarArgs) -> CommandResult {
    let w = match word(text) {
        Ok(w) => w,
        Err(e) => return e,
    };
    let t = match scalars.tqft() {
        Ok(t) => t,
        Err(e) => return CommandResult::input_error(e),
    };
    match t.evaluate(&w) {
        Ok(v) => CommandResult::ok(
            format!("{v}\n"),
            json!({
                "command": "cob eval",
                "word": w.to_string(),
                "cap": t.cap().to_string(),
                "cup": t.cup().to_string(),
                "value": v.to_string(),
            }),
        ),
        Err(e) => CommandResult::input_error(e),
    }
}

fn tqft_verify(seed: u64, budget: usize, scalars: &ScalarArgs, corrupt: bool) -> CommandResult {
    if scalars.is_empty() {
        if corrupt {
            return CommandResult::input_error(
                "--corrupt needs --cap/--cup or --cap-exp/--cup-exp",
            );
        }
        return CommandResult::from_checks("tqft verify", &suite::tqft_axioms(seed, budget));
    }
    let t = match scalars.tqft() {
        Ok(t) => t,
        Err(e) => return CommandResult::input_error(e),
    };
    let mut checks = if corrupt {
        verify_axioms(&GeneratorAssignment::corrupted(&t), seed, budget).checks
    } else {
        verify_axioms(&t, seed, budget).checks
    };
    if !corrupt {
        checks.push(check_closed_law(&t, seed, budget));
    }
    CommandResult::from_checks("tqft verify", &checks)
}

fn skk_class_cmd(target: &str) -> CommandResult {
    let m = if Path::new(target).is_file() {
        match load(Path::new(target)) {
            Ok(k) => ClosedManifold::Complex(k),
            Err(e) => return e,
        }
    } else {
        match parse_surface(target) {
            Ok(s) => ClosedManifold::Surface(s),
            Err(e) => {
                return CommandResult::input_error(format!(
                    "{target:?} is neither a file nor a surface expression: {e}"
                ))
            }
        }
    };
    let class = match skk_class(&m) {
        Ok(c) => c,
        Err(e) => return CommandResult::input_error(e),
    };
    let mut report = format!("SKK class: {class}\n");
    let sk = match m.dim() {
        2 | 4 => match sk_class(&m) {
            Ok(c) => {
                writeln!(report, "SK class: {c}").unwrap();
                Some(c.to_string())
            }
            Err(e) => return CommandResult::input_error(e),
        },
        _ => None,
    };
    CommandResult::ok(
        report,
        json!({
            "command": "skk class",
            "dim": m.dim(),
            "skk_class": class.to_string(),
            "sk_class": sk,
        }),
    )
}

fn verify_sequence(grid: i64, seed: u64) -> CommandResult {
    if !(0..=64).contains(&grid) {
        return CommandResult::input_error("--grid must lie in 0..=64");
    }
    let indices: Vec<i64> = (-grid..=grid).collect();
    let r = verify_split_sequence(&indices, seed, split_dim2);
    let checks: Vec<CheckOutcome> = r.checks().into_iter().cloned().collect();
    CommandResult::from_checks("skk verify-sequence", &checks)
}

fn superscript(c: char) -> char {
    match c {
        '0'..='9' => ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'][c as usize - '0' as usize],
        c => c,
    }
}

/// `CP4-D8` ↦ `ℂP⁴∖D̊⁸`.
pub fn pretty_piece_name(name: &str) -> String {
    let base = |s: &str| -> String {
        let s = s
            .strip_prefix("CP")
            .map_or_else(|| s.to_string(), |r| format!("ℂP{r}"));
        s.chars().map(superscript).collect()
    };
    match name.split_once('-') {
        Some((a, b)) if b.starts_with('D') => format!("{}∖D̊{}", base(a), base(&b[1..])),
        _ => base(name),
    }
}

fn demo_bsigma(
    catalog: Option<&Path>,
    piece: &str,
    attribute: &str,
    first: &str,
    second: &str,
) -> CommandResult {
    let catalog = match catalog {
        Some(p) => match load_catalog(p) {
            Ok(c) => c,
            Err(e) => return CommandResult::input_error(e),
        },
        None => Catalog::dim8(),
    };
    let (a, b) = match b_sigma_dependence(&catalog, piece, attribute, first, second) {
        Ok(v) => v,
        Err(e) => return CommandResult::input_error(e),
    };
    let report = format!(
        "choice {} ⇒ {a}; choice {} ⇒ {b}\n",
        pretty_piece_name(first),
        pretty_piece_name(second)
    );
    CommandResult::ok(
        report,
        json!({
            "command": "skk demo-bsigma",
            "piece": piece,
            "attribute": attribute,
            "choices": [
                { "b_sigma": first, "value": a.to_string() },
                { "b_sigma": second, "value": b.to_string() },
            ],
            "independent": a == b,
        }),
    )
}

fn selftest(seed: u64) -> CommandResult {
    CommandResult::from_checks("selftest", &suite::run_all(seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        assert_eq!(pretty_piece_name("D8"), "D⁸");
        assert_eq!(pretty_piece_name("CP4-D8"), "ℂP⁴∖D̊⁸");
        assert_eq!(pretty_piece_name("S4"), "S⁴");
    }

    #[test]
    fn scalar_args() {
        let s = ScalarArgs {
            cap: Some("2".into()),
            cup_exp: Some("1".into()),
            ..Default::default()
        };
        assert!(s.tqft().unwrap_err().contains("mixed"));
        let s = ScalarArgs {
            cap: Some("0".into()),
            cup: Some("1".into()),
            ..Default::default()
        };
        assert!(s.tqft().is_err());
        let s = ScalarArgs {
            cap_exp: Some("-1/2".into()),
            cup_exp: Some("1".into()),
            ..Default::default()
        };
        assert_eq!(
            s.tqft().unwrap().sphere_value(),
            GroupScalar::exp(BigRational::new(1.into(), 2.into()))
        );
    }
}
