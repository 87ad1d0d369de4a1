//! The `bgseq` command-line surface.
//!
//! Exit codes: 0 graphic / all graphic / condition holds, 1 not graphic,
//! 2 invalid input or refused oracle run, 3 criterion/oracle disagreement,
//! 4 vacuous (empty class). Data goes to stdout, diagnostics to stderr.

use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::criterion::{
    canonical_pair, decompose, symmetric_sufficient, theorem_main, CriterionError, CriterionReport, Verdict,
};
use crate::enumeration::{
    brute_force_within_budget, count_class, oracle_budget_from_env, ClassWitness, OracleVerdict,
};
use crate::galeryser::{gale_ryser, realize, PairVerdict};
use crate::seqcore::{check_shape, s_range, ClassParams, DegreeSequence};
use crate::{map_ordered, Exec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;
pub const EXIT_VACUOUS: i32 = 4;

pub const CSV_HEADER: &str = "a,b,c,d,m,n,S,nonempty,r,s,p,q,lhs,rhs,verdict";

#[derive(Debug, Parser)]
#[command(name = "bgseq", version, about = "Bipartite graphicality of degree sequences and parameter classes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test whether a pair of sequences is bipartite graphic
    CheckPair(PairArgs),
    /// Decide whether every pair of a class is bipartite graphic
    CheckClass(ClassArgs),
    /// Evaluate the class criterion for every admissible S
    Sweep(SweepArgs),
    /// Print the canonical pair (E, F) of a class
    Canonical(CanonicalArgs),
    /// Build a bipartite graph with the given degree sequences
    Realize(RealizeArgs),
    /// Check the sufficient condition for symmetric pairs
    Symmetric(SymmetricArgs),
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Left sequence, e.g. 4,4,1,1 or 4^2,1^2
    #[arg(long, allow_hyphen_values = true)]
    pub left: String,
    /// Right sequence
    #[arg(long, allow_hyphen_values = true)]
    pub right: String,
    /// Also print a realizing edge list
    #[arg(long)]
    pub realize: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct RealizeArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub left: String,
    #[arg(long, allow_hyphen_values = true)]
    pub right: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ShapeArgs {
    #[arg(short = 'a', allow_negative_numbers = true)]
    pub a: i64,
    #[arg(short = 'b', allow_negative_numbers = true)]
    pub b: i64,
    #[arg(short = 'c', allow_negative_numbers = true)]
    pub c: i64,
    #[arg(short = 'd', allow_negative_numbers = true)]
    pub d: i64,
    #[arg(short = 'm', allow_negative_numbers = true)]
    pub m: i64,
    #[arg(short = 'n', allow_negative_numbers = true)]
    pub n: i64,
}

#[derive(Debug, Args)]
pub struct ClassArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(short = 'S', allow_negative_numbers = true)]
    pub sum: i64,
    #[arg(long)]
    pub json: bool,
    /// Cross-check against the exhaustive oracle
    #[arg(long)]
    pub verify: bool,
    /// Run the oracle regardless of class size
    #[arg(long)]
    pub no_budget: bool,
}

#[derive(Debug, Args)]
pub struct CanonicalArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(short = 'S', allow_negative_numbers = true)]
    pub sum: i64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Add an oracle_agrees column
    #[arg(long)]
    pub verify: bool,
    #[arg(long)]
    pub no_budget: bool,
}

#[derive(Debug, Args)]
pub struct SymmetricArgs {
    #[arg(short = 'a', allow_negative_numbers = true)]
    pub a: i64,
    #[arg(short = 'b', allow_negative_numbers = true)]
    pub b: i64,
    #[arg(short = 'm', allow_negative_numbers = true)]
    pub m: i64,
    /// Also evaluate the class criterion for every S in [mb, ma]
    #[arg(long)]
    pub full: bool,
}

/// One line of sweep output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub m: u64,
    pub n: u64,
    #[serde(rename = "S")]
    pub sum: u64,
    pub nonempty: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<i64>,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_agrees: Option<bool>,
}

pub fn verdict_label(v: Verdict) -> &'static str {
    match v {
        Verdict::AllGraphic => "AllGraphic",
        Verdict::NotAllGraphic => "NotAllGraphic",
        Verdict::VacuousEmptyClass => "vacuous",
    }
}

impl SweepRow {
    pub fn from_report(report: &CriterionReport) -> Self {
        let p = &report.params;
        let dec = report.decomposition;
        SweepRow {
            a: p.a,
            b: p.b,
            c: p.c,
            d: p.d,
            m: p.m,
            n: p.n,
            sum: p.s,
            nonempty: report.verdict != Verdict::VacuousEmptyClass,
            r: dec.map(|d| d.r),
            s: dec.map(|d| d.s),
            p: dec.map(|d| d.p),
            q: dec.map(|d| d.q),
            lhs: report.lhs,
            rhs: report.rhs,
            verdict: verdict_label(report.verdict).to_string(),
            oracle_agrees: None,
        }
    }

    pub fn csv_header(with_oracle: bool) -> String {
        if with_oracle {
            format!("{CSV_HEADER},oracle_agrees")
        } else {
            CSV_HEADER.to_string()
        }
    }

    pub fn to_csv(&self, with_oracle: bool) -> String {
        fn opt<T: ToString>(v: Option<T>) -> String {
            v.map(|x| x.to_string()).unwrap_or_default()
        }
        let mut line = format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.a,
            self.b,
            self.c,
            self.d,
            self.m,
            self.n,
            self.sum,
            self.nonempty,
            opt(self.r),
            opt(self.s),
            opt(self.p),
            opt(self.q),
            opt(self.lhs),
            opt(self.rhs),
            self.verdict
        );
        if with_oracle {
            let _ = write!(line, ",{}", opt(self.oracle_agrees));
        }
        line
    }

    /// Parses one data line produced by [`SweepRow::to_csv`].
    pub fn from_csv(line: &str) -> Result<Self, String> {
        let cells: Vec<&str> = line.trim_end_matches(['\r', '\n']).split(',').collect();
        if cells.len() != 15 && cells.len() != 16 {
            return Err(format!("expected 15 or 16 cells, found {}", cells.len()));
        }
        let uint = |i: usize| -> Result<u64, String> {
            cells[i].parse().map_err(|_| format!("cell {} ({:?}) is not an integer", i + 1, cells[i]))
        };
        let opt_int = |i: usize| -> Result<Option<i64>, String> {
            if cells[i].is_empty() {
                return Ok(None);
            }
            cells[i]
                .parse()
                .map(Some)
                .map_err(|_| format!("cell {} ({:?}) is not an integer", i + 1, cells[i]))
        };
        let boolean = |i: usize| -> Result<bool, String> {
            cells[i].parse().map_err(|_| format!("cell {} ({:?}) is not a boolean", i + 1, cells[i]))
        };
        Ok(SweepRow {
            a: uint(0)?,
            b: uint(1)?,
            c: uint(2)?,
            d: uint(3)?,
            m: uint(4)?,
            n: uint(5)?,
            sum: uint(6)?,
            nonempty: boolean(7)?,
            r: opt_int(8)?,
            s: opt_int(9)?,
            p: opt_int(10)?,
            q: opt_int(11)?,
            lhs: opt_int(12)?,
            rhs: opt_int(13)?,
            verdict: cells[14].to_string(),
            oracle_agrees: match cells.get(15) {
                None | Some(&"") => None,
                Some(_) => Some(boolean(15)?),
            },
        })
    }
}

/// Parses "4,4,1,1" or the run form "4^2,1^2".
pub fn parse_sequence(text: &str) -> Result<Vec<i64>, String> {
    let mut out = Vec::new();
    for token in text.split(',') {
        let token = token.trim();
        let bad = || format!("cannot parse {token:?} as an integer or value^count");
        match token.split_once('^') {
            Some((value, count)) => {
                let value: i64 = value.trim().parse().map_err(|_| bad())?;
                let count: usize = count.trim().parse().map_err(|_| bad())?;
                out.extend(std::iter::repeat_n(value, count));
            }
            None => out.push(token.parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

/// Verdict agreement between the closed-form criterion and the oracle.
pub fn agrees(verdict: Verdict, oracle: &ClassWitness) -> bool {
    matches!(
        (verdict, oracle.verdict),
        (Verdict::AllGraphic, OracleVerdict::AllGraphic)
            | (Verdict::NotAllGraphic, OracleVerdict::FoundNonGraphic)
            | (Verdict::VacuousEmptyClass, OracleVerdict::Empty)
    )
}

pub fn exit_code_for_verdict(v: Verdict) -> i32 {
    match v {
        Verdict::AllGraphic => EXIT_OK,
        Verdict::NotAllGraphic => EXIT_NEGATIVE,
        Verdict::VacuousEmptyClass => EXIT_VACUOUS,
    }
}

pub fn exit_code_for_pair(v: &PairVerdict) -> i32 {
    if v.graphic {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    match execute(&cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::Invalid(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

enum Failure {
    Invalid(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn invalid(msg: impl ToString) -> Failure {
    Failure::Invalid(msg.to_string())
}

fn execute(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::CheckPair(args) => cmd_check_pair(args, out, err),
        Command::CheckClass(args) => cmd_check_class(args, out, err),
        Command::Sweep(args) => cmd_sweep(args, out, err),
        Command::Canonical(args) => cmd_canonical(args, out),
        Command::Realize(args) => cmd_realize(args, out, err),
        Command::Symmetric(args) => cmd_symmetric(args, out),
    }
}

fn read_sequence(flag: &str, text: &str, err: &mut dyn Write) -> Result<DegreeSequence, Failure> {
    let raw = parse_sequence(text).map_err(|e| invalid(format!("--{flag}: {e}")))?;
    let lenient = DegreeSequence::new_lenient(&raw).map_err(|e| invalid(format!("--{flag}: {e}")))?;
    if lenient.sorted {
        writeln!(err, "note: --{flag} was not decreasing; sorted to {}", lenient.sequence)?;
    }
    Ok(lenient.sequence)
}

fn edge_lines(edges: &std::collections::BTreeSet<(usize, usize)>) -> String {
    edges.iter().map(|(i, j)| format!("{i} {j}\n")).collect()
}

fn cmd_check_pair(args: &PairArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let left = read_sequence("left", &args.left, err)?;
    let right = read_sequence("right", &args.right, err)?;
    let verdict = gale_ryser(&left, &right);
    let graph = if args.realize && verdict.graphic {
        Some(realize(&left, &right).map_err(invalid)?)
    } else {
        None
    };
    if args.json {
        let value = serde_json::json!({
            "left": left,
            "right": right,
            "graphic": verdict.graphic,
            "failing_k": verdict.failing_k,
            "sums_equal": verdict.sums_equal,
            "edges": graph.as_ref().map(|g| &g.edges),
        });
        writeln!(out, "{value}")?;
    } else {
        writeln!(out, "{}", describe_pair(&left, &right, &verdict))?;
        if let Some(g) = &graph {
            write!(out, "{}", edge_lines(&g.edges))?;
        }
    }
    Ok(exit_code_for_pair(&verdict))
}

fn describe_pair(left: &DegreeSequence, right: &DegreeSequence, v: &PairVerdict) -> String {
    match (v.graphic, v.sums_equal, v.failing_k) {
        (true, _, _) => "graphic".to_string(),
        (false, false, _) => format!("not graphic, sums differ ({} vs {})", left.sum(), right.sum()),
        (false, true, Some(k)) => format!("not graphic, failing k={k}"),
        (false, true, None) => "not graphic".to_string(),
    }
}

fn cmd_realize(args: &RealizeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let left = read_sequence("left", &args.left, err)?;
    let right = read_sequence("right", &args.right, err)?;
    match realize(&left, &right) {
        Ok(graph) => {
            if args.json {
                writeln!(out, "{}", serde_json::to_string(&graph).expect("serializable"))?;
            } else {
                write!(out, "{}", edge_lines(&graph.edges))?;
            }
            Ok(EXIT_OK)
        }
        Err(e) => {
            writeln!(err, "{e}")?;
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn class_params(shape: &ShapeArgs, sum: i64) -> Result<ClassParams, Failure> {
    ClassParams::new(shape.a, shape.b, shape.c, shape.d, shape.m, shape.n, sum).map_err(invalid)
}

fn oracle_budget(no_budget: bool) -> Option<u128> {
    (!no_budget).then(oracle_budget_from_env)
}

fn cmd_check_class(args: &ClassArgs, out: &mut dyn Write, _err: &mut dyn Write) -> Result<i32, Failure> {
    let params = class_params(&args.shape, args.sum)?;
    let report = theorem_main(&params);
    let oracle = if args.verify {
        Some(brute_force_within_budget(&params, oracle_budget(args.no_budget)).map_err(invalid)?)
    } else {
        None
    };
    let agreement = oracle.as_ref().map(|o| agrees(report.verdict, o));
    if args.json {
        let value = serde_json::json!({
            "report": report,
            "oracle": oracle,
            "oracle_agrees": agreement,
        });
        writeln!(out, "{value}")?;
    } else {
        write!(out, "{}", render_report(&report))?;
        if let Some(o) = &oracle {
            write!(out, "{}", render_oracle(o))?;
            let verdict = if agreement == Some(true) { "agrees" } else { "DISAGREES" };
            writeln!(out, "oracle {verdict} with the criterion")?;
        }
    }
    if agreement == Some(false) {
        return Ok(EXIT_DISAGREEMENT);
    }
    Ok(exit_code_for_verdict(report.verdict))
}

/// Human-readable rendering of a criterion report.
pub fn render_report(report: &CriterionReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "class {}", report.params);
    let _ = writeln!(s, "verdict: {:?}", report.verdict);
    if let Some(branch) = report.branch {
        let _ = writeln!(s, "branch: {branch:?}");
    }
    if let Some(d) = report.decomposition {
        let _ = writeln!(s, "r={} s={} p={} q={}", d.r, d.s, d.p, d.q);
    }
    if let Some(pair) = &report.canonical {
        let _ = writeln!(s, "E={} F={}", pair.left, pair.right);
    }
    if let (Some(lhs), Some(rhs), Some(term), Some(arg)) =
        (report.lhs, report.rhs, report.min_term, report.min_term_argument)
    {
        let _ = writeln!(s, "lhs={lhs} rhs={rhs}");
        let _ = writeln!(s, "min term {term} from {}", arg.expression());
    }
    s
}

fn render_oracle(o: &ClassWitness) -> String {
    match (&o.verdict, &o.witness) {
        (OracleVerdict::FoundNonGraphic, Some(w)) => format!(
            "oracle: FoundNonGraphic, witness {} / {} fails at k={}\n",
            w.left, w.right, w.failing_k
        ),
        (v, _) => format!("oracle: {v:?}\n"),
    }
}

/// Evaluates one row per S in the admissible range, in increasing S order.
pub fn sweep_rows(shape: &ShapeArgs, verify: bool, budget: Option<u128>) -> Result<Vec<SweepRow>, String> {
    let [a, b, c, d, m, n] = [shape.a, shape.b, shape.c, shape.d, shape.m, shape.n]
        .map(|v| u64::try_from(v).map_err(|_| format!("parameter {v} is negative")));
    let (a, b, c, d, m, n) = (a?, b?, c?, d?, m?, n?);
    check_shape(a, b, c, d, m, n).map_err(|e| e.to_string())?;
    let params: Vec<ClassParams> = s_range(a, b, c, d, m, n)
        .map(|s| ClassParams::from_unsigned(a, b, c, d, m, n, s).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    if verify {
        if let Some(budget) = budget {
            if let Some((p, count)) = params.iter().map(|p| (p, count_class(p))).find(|(_, c)| *c > budget) {
                return Err(format!(
                    "class at S={} has {count} pairs, above the oracle budget of {budget}",
                    p.s
                ));
            }
        }
    }
    Ok(map_ordered(&params, Exec::default(), |p| {
        let report = theorem_main(p);
        let mut row = SweepRow::from_report(&report);
        if verify {
            let oracle = brute_force_within_budget(p, None).expect("no budget");
            row.oracle_agrees = Some(agrees(report.verdict, &oracle));
        }
        row
    }))
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write, _err: &mut dyn Write) -> Result<i32, Failure> {
    let rows = sweep_rows(&args.shape, args.verify, oracle_budget(args.no_budget)).map_err(invalid)?;
    match args.format {
        Format::Csv => {
            writeln!(out, "{}", SweepRow::csv_header(args.verify))?;
            for row in &rows {
                writeln!(out, "{}", row.to_csv(args.verify))?;
            }
        }
        Format::Json => {
            for row in &rows {
                writeln!(out, "{}", serde_json::to_string(row).expect("serializable"))?;
            }
        }
    }
    if rows.iter().any(|r| r.oracle_agrees == Some(false)) {
        return Ok(EXIT_DISAGREEMENT);
    }
    Ok(EXIT_OK)
}

fn cmd_canonical(args: &CanonicalArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let params = class_params(&args.shape, args.sum)?;
    let dec = match decompose(&params) {
        Ok(dec) => dec,
        Err(CriterionError::EmptyClass(_)) => {
            writeln!(out, "class {params} is empty")?;
            return Ok(EXIT_VACUOUS);
        }
        Err(CriterionError::DegenerateClass) => {
            return Err(invalid("canonical pair requires a > b and c > d"));
        }
        Err(e) => return Err(invalid(e)),
    };
    let pair = canonical_pair(&params).map_err(invalid)?;
    if args.json {
        let value = serde_json::json!({ "decomposition": dec, "E": pair.left, "F": pair.right });
        writeln!(out, "{value}")?;
    } else {
        writeln!(out, "r={} s={} p={} q={}", dec.r, dec.s, dec.p, dec.q)?;
        writeln!(out, "E={}", pair.left)?;
        writeln!(out, "F={}", pair.right)?;
    }
    Ok(EXIT_OK)
}

fn cmd_symmetric(args: &SymmetricArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let [a, b, m] = [args.a, args.b, args.m]
        .map(|v| u64::try_from(v).map_err(|_| invalid(format!("parameter {v} is negative"))));
    let (a, b, m) = (a?, b?, m?);
    let holds = symmetric_sufficient(a, b, m).map_err(invalid)?;
    let lhs = 4 * m * b;
    let rhs = (a + b) * (a + b);
    writeln!(
        out,
        "4mb={lhs} (a+b)^2-1={}: condition {}",
        rhs as i128 - 1,
        if holds { "holds" } else { "fails" }
    )?;
    if args.full {
        let failing: Vec<u64> = (m * b..=m * a)
            .filter_map(|s| ClassParams::from_unsigned(a, b, a, b, m, m, s).ok())
            .filter(|p| theorem_main(p).verdict == Verdict::NotAllGraphic)
            .map(|p| p.s)
            .collect();
        let listed: Vec<String> = failing.iter().map(u64::to_string).collect();
        writeln!(out, "NotAllGraphic at S: {}", if listed.is_empty() { "none".into() } else { listed.join(",") })?;
        if holds && !failing.is_empty() {
            return Ok(EXIT_DISAGREEMENT);
        }
    }
    Ok(if holds { EXIT_OK } else { EXIT_NEGATIVE })
}
