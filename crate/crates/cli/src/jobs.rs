//! Job dispatch. `run_job` is pure: it returns the report and the artifact
//! texts, and the caller decides where to write them.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::Rng;
use randlab_core::complexity::{enumerate_toy_machine, profile, Lookup, Profile, ToyMachineConfig};
use randlab_core::cover::{
    conidis_cover, fatou_bound, q_pipeline, slow_cover, slow_cover_2d, slow_cover_2d_coverage_check,
    slow_cover_coverage_check, EpsilonRule, EpsilonSchedule, QOutcome, SlowCoverTrace,
};
use randlab_core::format::{
    parse_basic_func, parse_basic_func_2d, parse_open_set, parse_open_set_2d, parse_table, parse_trace_csv,
    write_basic_func, write_open_set, write_open_set_2d, write_table, write_trace_csv,
};
use randlab_core::generate;
use randlab_core::measure::{liminf_pointwise, liminf_sets, SeqSpec};
use randlab_core::randomness::{
    gacs_sum, plain_test_fn, prefix_test_seq, series_delay, tail_domination_violations, tails_bounded, ApproxMatrix,
    Schedule, TailSum, TailsVerdict,
};
use randlab_core::rational::pow2;
use randlab_core::{
    BasicFunc, BasicFunc2D, Bits, ComplexityTable, Error, LazyPoint, ModelKind, OpenSet, PlainModel, PrefixModel,
    Rational, SeriesSpec, Tail,
};
use serde::Deserialize;

use crate::config::{
    self, ConfigError, ConidisJob, DelayScheduleConfig, EnumerateMachineJob, ExpectVerdict, FatouJob, GacsJob,
    MachineConfig, ObjectRef, PlainTestJob, PointsConfig, ProfileJob, QPipelineJob, ScheduleConfig, SeqConfig,
    SeriesConfig, SlowCover2dJob, SlowCoverJob, TableRef, TailSumConfig, TailsJob, ValidateModelJob, Q,
};
use crate::report::Report;

/// Default memory cap, overridable through `RANDLAB_CAP_BYTES`.
pub const DEFAULT_CAP_BYTES: u64 = 2 << 30;

/// Rough per-cell cost used by the memory estimates.
const CELL_BYTES: u128 = 96;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JobKind {
    ValidateModel,
    EnumerateMachine,
    Profile,
    PlainTest,
    Gacs,
    Tails,
    Conidis,
    Fatou,
    SlowCover,
    SlowCover2d,
    QPipeline,
}

impl JobKind {
    pub const ALL: [JobKind; 11] = [
        JobKind::ValidateModel,
        JobKind::EnumerateMachine,
        JobKind::Profile,
        JobKind::PlainTest,
        JobKind::Gacs,
        JobKind::Tails,
        JobKind::Conidis,
        JobKind::Fatou,
        JobKind::SlowCover,
        JobKind::SlowCover2d,
        JobKind::QPipeline,
    ];

    pub fn name(self) -> &'static str {
        match self {
            JobKind::ValidateModel => "validate-model",
            JobKind::EnumerateMachine => "enumerate-machine",
            JobKind::Profile => "profile",
            JobKind::PlainTest => "plain-test",
            JobKind::Gacs => "gacs",
            JobKind::Tails => "tails",
            JobKind::Conidis => "conidis",
            JobKind::Fatou => "fatou",
            JobKind::SlowCover => "slow-cover",
            JobKind::SlowCover2d => "slow-cover-2d",
            JobKind::QPipeline => "q-pipeline",
        }
    }
}

impl fmt::Display for JobKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for JobKind {
    type Err = String;

    /// Accepts `slow-cover`, `slow_cover` and `SLOW_COVER` alike.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        JobKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| format!("unknown job kind {s:?}"))
    }
}

/// Command-line overrides and caps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    /// Overrides the config seed.
    pub seed: Option<u64>,
    /// Largest cylinder depth any input or generated object may have.
    pub max_depth: Option<usize>,
    /// Overrides `max_program_length` of every machine enumeration.
    pub max_program_length: Option<usize>,
    /// Overrides `step_budget` of every machine enumeration.
    pub step_budget: Option<u64>,
    pub cap_bytes: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: None,
            max_depth: None,
            max_program_length: None,
            step_budget: None,
            cap_bytes: DEFAULT_CAP_BYTES,
        }
    }
}

/// `RANDLAB_CAP_BYTES` if set and valid, else the default.
pub fn cap_from_env() -> u64 {
    std::env::var("RANDLAB_CAP_BYTES")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CAP_BYTES)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobOutput {
    pub report: Report,
    /// `(file name, content)` in emission order.
    pub artifacts: Vec<(String, String)>,
}

enum Fail {
    Config(ConfigError),
    Module(Error),
}

impl From<ConfigError> for Fail {
    fn from(e: ConfigError) -> Self {
        Fail::Config(e)
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Module(e)
    }
}

type R<T> = Result<T, Fail>;

fn cfg_err<T>(msg: impl Into<String>) -> R<T> {
    Err(Fail::Config(ConfigError::general(msg)))
}

trait Header {
    fn kind(&self) -> Option<&str>;
    fn seed(&self) -> Option<u64>;
}

macro_rules! header {
    ($($t:ty),*) => {$(
        impl Header for $t {
            fn kind(&self) -> Option<&str> {
                self.kind.as_deref()
            }
            fn seed(&self) -> Option<u64> {
                self.seed
            }
        }
    )*};
}

header!(
    ValidateModelJob,
    EnumerateMachineJob,
    ProfileJob,
    PlainTestJob,
    GacsJob,
    TailsJob,
    ConidisJob,
    FatouJob,
    SlowCoverJob,
    SlowCover2dJob,
    QPipelineJob
);

fn check_kind(kind: JobKind, given: Option<&str>, text: &str) -> Result<(), ConfigError> {
    let Some(given) = given else { return Ok(()) };
    if given.parse::<JobKind>() == Ok(kind) {
        return Ok(());
    }
    let line = text
        .lines()
        .position(|l| l.trim_start().starts_with("kind"))
        .map_or(1, |p| p + 1);
    Err(ConfigError {
        line,
        column: 1,
        message: format!("config kind {given:?} does not match subcommand `{kind}`"),
    })
}

/// Parses `text` as a `kind` job and runs it. Configuration problems are
/// returned as errors; failures inside the constructions end up in the report.
pub fn run_job(kind: JobKind, text: &str, base_dir: &Path, opts: &Options) -> Result<JobOutput, ConfigError> {
    match kind {
        JobKind::ValidateModel => execute(kind, text, base_dir, opts, |j, c| j.validate_model(c)),
        JobKind::EnumerateMachine => execute(kind, text, base_dir, opts, |j, c| j.enumerate_machine(c)),
        JobKind::Profile => execute(kind, text, base_dir, opts, |j, c| j.profile(c)),
        JobKind::PlainTest => execute(kind, text, base_dir, opts, |j, c| j.plain_test(c)),
        JobKind::Gacs => execute(kind, text, base_dir, opts, |j, c| j.gacs(c)),
        JobKind::Tails => execute(kind, text, base_dir, opts, |j, c| j.tails(c)),
        JobKind::Conidis => execute(kind, text, base_dir, opts, |j, c| j.conidis(c)),
        JobKind::Fatou => execute(kind, text, base_dir, opts, |j, c| j.fatou(c)),
        JobKind::SlowCover => execute(kind, text, base_dir, opts, |j, c| j.slow_cover(c)),
        JobKind::SlowCover2d => execute(kind, text, base_dir, opts, |j, c| j.slow_cover_2d(c)),
        JobKind::QPipeline => execute(kind, text, base_dir, opts, |j, c| j.q_pipeline(c)),
    }
}

fn execute<C: for<'de> Deserialize<'de> + Header>(
    kind: JobKind,
    text: &str,
    base: &Path,
    opts: &Options,
    body: impl FnOnce(&mut Job<'_>, &C) -> R<()>,
) -> Result<JobOutput, ConfigError> {
    let cfg: C = config::parse(text)?;
    check_kind(kind, cfg.kind(), text)?;
    let seed = opts.seed.or(cfg.seed()).unwrap_or(0);
    let mut job = Job {
        base,
        opts,
        seed,
        report: Report::new(kind.name(), seed, text),
        artifacts: Vec::new(),
    };
    match body(&mut job, &cfg) {
        Ok(()) => {}
        Err(Fail::Config(e)) => return Err(e),
        Err(Fail::Module(e)) => job.report.error = Some(e.to_string()),
    }
    job.report.seal();
    Ok(JobOutput {
        report: job.report,
        artifacts: job.artifacts,
    })
}

/// A small CSV table whose cells never need quoting.
struct Csv {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    fn new(header: &[&'static str]) -> Self {
        Csv {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn render(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    fn reparses(&self, text: &str) -> bool {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header_ok = r
            .headers()
            .map(|h| h.iter().eq(self.header.iter().copied()))
            .unwrap_or(false);
        let rows: Result<Vec<Vec<String>>, _> = r
            .records()
            .map(|rec| rec.map(|rec| rec.iter().map(str::to_string).collect()))
            .collect();
        header_ok && rows.is_ok_and(|rows| rows == self.rows)
    }
}

struct Job<'a> {
    base: &'a Path,
    opts: &'a Options,
    seed: u64,
    report: Report,
    artifacts: Vec<(String, String)>,
}

fn q(v: &Q) -> Rational {
    v.0.clone()
}

fn tick(ok: bool) -> &'static str {
    if ok {
        "1"
    } else {
        "0"
    }
}

fn tail_name(t: Tail) -> String {
    match t {
        Tail::Zero => "zero".into(),
        Tail::RepeatLast => "repeat_last".into(),
        Tail::Cycle(p) => format!("cycle{p}"),
    }
}

fn lookup_cell(l: Lookup) -> String {
    match l {
        Lookup::Value(v) => v.to_string(),
        Lookup::Undefined => "U".into(),
        Lookup::Missing => "-".into(),
    }
}

fn opt_cell(v: Option<i64>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

fn verdict_name(v: &TailsVerdict) -> String {
    match v {
        TailsVerdict::BoundedWitnessed => "BOUNDED_WITNESSED".into(),
        TailsVerdict::Violated(n) => format!("VIOLATED({n})"),
        TailsVerdict::Inconclusive => "INCONCLUSIVE".into(),
    }
}

fn verdict_matches(v: &TailsVerdict, e: &ExpectVerdict) -> bool {
    match (v, e) {
        (TailsVerdict::BoundedWitnessed, ExpectVerdict::BoundedWitnessed) => true,
        (TailsVerdict::Inconclusive, ExpectVerdict::Inconclusive) => true,
        (TailsVerdict::Violated(_), ExpectVerdict::Violated) => true,
        (TailsVerdict::Violated(n), ExpectVerdict::ViolatedAt(m)) => n == m,
        _ => false,
    }
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn func2d_depth(g: &BasicFunc2D) -> usize {
    g.depth()
}

fn points(p: Option<PointsConfig>) -> Vec<LazyPoint> {
    let p = p.unwrap_or_default();
    LazyPoint::enumerate(p.max_prefix, p.max_cycle)
}

impl Job<'_> {
    // ---- plumbing ----

    fn artifact<T: PartialEq>(&mut self, name: &str, content: String, original: &T, parse: impl Fn(&str) -> Result<T, Error>) {
        let ok = parse(&content).is_ok_and(|back| back == *original);
        self.report.check(format!("round_trip:{name}"), ok);
        self.push_artifact(name, content);
    }

    fn csv_artifact(&mut self, name: &str, table: &Csv) {
        let content = table.render();
        self.report.check(format!("round_trip:{name}"), table.reparses(&content));
        self.push_artifact(name, content);
    }

    fn push_artifact(&mut self, name: &str, content: String) {
        self.report.file(name, &content);
        self.artifacts.push((name.to_string(), content));
    }

    fn trace_artifact(&mut self, trace: &SlowCoverTrace) {
        let text = write_trace_csv(trace);
        self.artifact("trace.csv", text, &trace.steps, parse_trace_csv);
    }

    /// Rejects objects deeper than `--max-depth` or whose dense size would
    /// pass the memory cap.
    fn reserve(&self, what: &str, depth: usize, copies: usize) -> R<()> {
        if let Some(max) = self.opts.max_depth {
            if depth > max {
                return Err(Error::Resource(format!("{what}: depth {depth} exceeds --max-depth {max}")).into());
            }
        }
        let cells = 1u128.checked_shl(depth.min(127) as u32).unwrap_or(u128::MAX);
        let bytes = cells.saturating_mul(CELL_BYTES).saturating_mul(copies.max(1) as u128);
        if bytes > self.opts.cap_bytes as u128 {
            return Err(Error::Resource(format!(
                "{what}: estimated {bytes} bytes exceeds the cap of {} bytes",
                self.opts.cap_bytes
            ))
            .into());
        }
        Ok(())
    }

    fn machine(&self, m: &MachineConfig) -> R<ComplexityTable> {
        let len = self.opts.max_program_length.unwrap_or(m.max_program_length);
        let budget = self.opts.step_budget.unwrap_or(m.step_budget);
        self.reserve("machine enumeration", len + 1, 1)?;
        self.reserve("complexity table", m.n_max + 1, 1)?;
        let cfg = ToyMachineConfig::new(m.model.into(), len, budget, m.n_max);
        Ok(enumerate_toy_machine(&cfg)?)
    }

    fn table(&self, r: &TableRef) -> R<ComplexityTable> {
        match (&r.file, &r.inline, &r.machine) {
            (Some(_), None, None) | (None, Some(_), None) => {
                let text = ObjectRef {
                    file: r.file.clone(),
                    inline: r.inline.clone(),
                }
                .load(self.base)?;
                Ok(parse_table(&text)?)
            }
            (None, None, Some(m)) => self.machine(m),
            _ => cfg_err("a table needs exactly one of `file`, `inline` or `machine`"),
        }
    }

    fn plain_model(&self, r: &TableRef) -> R<PlainModel> {
        Ok(PlainModel::new(self.table(r)?)?)
    }

    fn prefix_model(&self, r: &TableRef) -> R<PrefixModel> {
        Ok(PrefixModel::new(self.table(r)?)?)
    }

    fn seq<T>(&self, s: &SeqConfig, parse: fn(&str) -> Result<T, Error>, depth: fn(&T) -> usize) -> R<SeqSpec<T>> {
        let mut items = Vec::with_capacity(s.items.len());
        for (k, r) in s.items.iter().enumerate() {
            let text = r.load(self.base)?;
            let item = parse(&text)?;
            self.reserve(&format!("item {}", k + 1), depth(&item), 1)?;
            items.push(item);
        }
        Ok(SeqSpec::new(items, s.tail.into())?)
    }

    fn series(&self, s: &SeriesConfig) -> R<SeriesSpec> {
        let tail_sum = s.tail_sum.as_ref().map(|t| match t {
            TailSumConfig::Geometric { first, ratio } => TailSum::Geometric {
                first: q(first),
                ratio: q(ratio),
            },
            TailSumConfig::Telescoping { scale } => TailSum::TelescopingReciprocal { scale: q(scale) },
            TailSumConfig::ExplicitZero => TailSum::ExplicitZero,
        });
        match (&s.items, s.listed) {
            (Some(items), None) => {
                let tail = s.tail.map_or(Tail::Zero, Into::into);
                let seq = SeqSpec::new(items.iter().map(q).collect(), tail)?;
                Ok(SeriesSpec::new(seq, tail_sum)?)
            }
            (None, Some(listed)) => match tail_sum {
                Some(TailSum::Geometric { first, ratio }) => Ok(SeriesSpec::geometric(first, ratio, listed)?),
                Some(TailSum::TelescopingReciprocal { scale }) => Ok(SeriesSpec::telescoping(scale, listed)?),
                _ => cfg_err("`listed` needs a geometric or telescoping `tail_sum`"),
            },
            _ => cfg_err("a series needs exactly one of `items` or `listed`"),
        }
    }

    fn schedule(eps: &Option<Q>, eps_prime: &Option<Q>, rule: &Option<ScheduleConfig>) -> R<EpsilonSchedule> {
        let (Some(eps), Some(eps_prime)) = (eps, eps_prime) else {
            return cfg_err("an explicit instance needs `eps` and `eps_prime`");
        };
        let rule = match rule {
            None | Some(ScheduleConfig::GeometricGap) => EpsilonRule::GeometricGap,
            Some(ScheduleConfig::Explicit(v)) => EpsilonRule::Explicit(v.iter().map(q).collect()),
        };
        Ok(EpsilonSchedule::new(q(eps), q(eps_prime), rule)?)
    }

    fn nothing_to_do<T>(what: &str) -> R<T> {
        cfg_err(format!("nothing to run: give {what} or a [random] section"))
    }

    fn suite_check(&mut self, name: &str, ok: usize, total: usize) {
        self.report.check_detail(name, ok == total, format!("{ok}/{total}"));
    }

    // ---- complexity tables ----

    fn table_checks(&mut self, t: &ComplexityTable, expect_digest: Option<&str>) {
        let v = t.validate();
        let r = &mut self.report;
        r.quantity("kind", t.kind());
        r.quantity("machine_id", &t.meta().machine_id);
        r.quantity("n_max", t.n_max());
        r.quantity("defined_entries", v.defined_entries);
        r.quantity("kraft_sum", t.kraft_sum());
        match t.kind() {
            ModelKind::Plain => {
                let detail = v
                    .counting_violations
                    .first()
                    .map_or_else(|| "none".to_string(), |c| format!("m = {}: {} strings", c.m, c.count));
                r.check_detail("counting_bound", v.counting_violations.is_empty(), detail);
            }
            ModelKind::Prefix => r.check("kraft_sum_le_1", t.kraft_sum() <= Rational::one()),
        }
        r.check("validate_model", v.passed);
        let digest = t.digest();
        r.quantity("digest", &digest);
        if let Some(e) = expect_digest {
            r.check_detail("digest_matches_pinned", digest == e, e);
        }
    }

    fn validate_model(&mut self, c: &ValidateModelJob) -> R<()> {
        let t = self.table(&c.model)?;
        self.table_checks(&t, c.expect_digest.as_deref());
        self.artifact("table.txt", write_table(&t), &t, parse_table);
        Ok(())
    }

    fn enumerate_machine(&mut self, c: &EnumerateMachineJob) -> R<()> {
        let t = self.machine(&c.machine)?;
        if let Some(len) = t.meta().max_program_length {
            self.report.quantity("max_program_length", len);
        }
        if let Some(b) = t.meta().step_budget {
            self.report.quantity("step_budget", b);
        }
        self.table_checks(&t, c.expect_digest.as_deref());
        self.artifact("table.txt", write_table(&t), &t, parse_table);
        Ok(())
    }

    fn profile(&mut self, c: &ProfileJob) -> R<()> {
        let plain = self.plain_model(&c.plain)?;
        let prefix = self.prefix_model(&c.prefix)?;
        let x: Bits = match (&c.x, c.length) {
            (Some(x), None) => match x.parse() {
                Ok(x) => x,
                Err(e) => return cfg_err(format!("x: {e}")),
            },
            (None, len) => {
                let len = len.unwrap_or_else(|| plain.table().n_max());
                let mut rng = generate::rng(self.seed);
                Bits::from_bools((0..len).map(|_| rng.gen_bool(0.5)))
            }
            (Some(_), Some(_)) => return cfg_err("give either `x` or `length`, not both"),
        };
        let p: Profile = profile(&plain, &prefix, &x);
        let mut csv = Csv::new(&[
            "n",
            "plain",
            "prefix",
            "prefix_of_n",
            "plain_gap",
            "prefix_gap",
            "plain_running_min",
            "prefix_running_min",
        ]);
        for (k, row) in p.rows.iter().enumerate() {
            csv.push(vec![
                row.n.to_string(),
                lookup_cell(row.plain),
                lookup_cell(row.prefix),
                lookup_cell(row.prefix_of_n),
                opt_cell(row.plain_gap),
                opt_cell(row.prefix_gap),
                opt_cell(p.plain_running_min[k]),
                opt_cell(p.prefix_running_min[k]),
            ]);
        }
        let r = &mut self.report;
        r.quantity("x", x.token());
        let missing = p
            .rows
            .iter()
            .filter(|row| row.plain == Lookup::Missing || row.prefix == Lookup::Missing)
            .count();
        r.quantity("rows_outside_tables", missing);
        let last = |v: &[Option<i64>]| v.last().copied().flatten().map_or("-".to_string(), |g| g.to_string());
        r.quantity("min_plain_gap", last(&p.plain_running_min));
        r.quantity("min_prefix_gap", last(&p.prefix_running_min));
        r.check("one_row_per_prefix", p.rows.len() == x.len());
        self.csv_artifact("profile.csv", &csv);
        Ok(())
    }

    // ---- test functions ----

    fn plain_test(&mut self, c: &PlainTestJob) -> R<()> {
        let model = self.plain_model(&c.model)?;
        let cap = c.depth_cap.unwrap_or_else(|| model.table().n_max());
        self.reserve("plain test function", cap, 1)?;
        let one = Rational::one();
        for m in 0..=c.m_max {
            let f = plain_test_fn(&model, m, cap)?;
            let integral = f.integral();
            // Independent route: each string below m contributes 2^{-m}.
            let count = model.table().defined().filter(|&(_, v)| v < m).count();
            let direct = pow2(-(m as i64)) * Rational::from_integer(count.into());
            let r = &mut self.report;
            r.quantity(format!("integral_m{m}"), &integral);
            r.check(format!("integral_le_1:m{m}"), integral <= one);
            r.check(format!("integral_matches_count:m{m}"), integral == direct);
            self.artifact(&format!("plain_test_m{m}.txt"), write_basic_func(&f), &f, parse_basic_func);
        }
        Ok(())
    }

    fn gacs(&mut self, c: &GacsJob) -> R<()> {
        let model = self.prefix_model(&c.model)?;
        self.reserve("gacs sum", c.depth, c.depth + 2)?;
        let g = gacs_sum(&model, c.depth)?;
        let mut total = Rational::zero();
        for x in Bits::all_up_to(c.depth) {
            total += model.semimeasure(&x)?;
        }
        let seq = (0..=c.depth).map(|i| prefix_test_seq(&model, i)).collect::<Result<Vec<_>, _>>()?;
        let pointwise = Bits::all_of_length(c.depth).all(|x| {
            let direct: Rational = seq.iter().map(|f| f.eval(&x)).sum();
            g.eval(&x) == direct
        });
        let integral = g.integral();
        let r = &mut self.report;
        r.quantity("depth", c.depth);
        r.quantity("integral", &integral);
        r.quantity("semimeasure_sum", &total);
        r.check("integral_equals_semimeasure_sum", integral == total);
        r.check("integral_le_1", integral <= Rational::one());
        r.check("equals_prefix_sequence_sum", pointwise);
        self.artifact("gacs.txt", write_basic_func(&g), &g, parse_basic_func);
        Ok(())
    }

    // ---- series ----

    fn tails(&mut self, c: &TailsJob) -> R<()> {
        if c.cases.is_empty() && c.delay.is_none() {
            return cfg_err("nothing to run: give [[cases]] or [delay]");
        }
        for (k, case) in c.cases.iter().enumerate() {
            let name = case.name.clone().unwrap_or_else(|| format!("case{}", k + 1));
            let a = self.series(&case.a)?;
            let b = self.series(&case.b)?;
            let v = tails_bounded(&a, &b, &q(&case.c), case.horizon)?;
            self.report.quantity(format!("{name}:verdict"), verdict_name(&v));
            if let Some(e) = &case.expect {
                self.report.check(format!("{name}:expected_verdict"), verdict_matches(&v, e));
            }
        }
        let Some(d) = &c.delay else { return Ok(()) };
        let schedule = match &d.schedule {
            DelayScheduleConfig::RowMajor => Schedule::RowMajor,
            DelayScheduleConfig::Diagonal => Schedule::Diagonal,
            DelayScheduleConfig::Explicit(v) => Schedule::Explicit(v.clone()),
        };
        let mut matrices = Vec::new();
        for rows in &d.matrices {
            matrices.push(ApproxMatrix::new(rows.iter().map(|r| r.iter().map(q).collect()).collect())?);
        }
        if let Some(rc) = &d.random {
            let mut rng = generate::rng(self.seed);
            matrices.extend((0..rc.count).map(|_| generate::approx_matrix(&mut rng)));
        }
        let mut csv = Csv::new(&["matrix", "rows", "terms", "first_positions", "violations"]);
        let mut clean = 0;
        for (k, m) in matrices.iter().enumerate() {
            let delayed = series_delay(m, &schedule)?;
            let bad = tail_domination_violations(m, &delayed);
            if bad.is_empty() {
                clean += 1;
            }
            csv.push(vec![
                (k + 1).to_string(),
                m.rows().len().to_string(),
                join(delayed.series.items()),
                join(&delayed.first_position),
                join(&bad),
            ]);
        }
        self.report.quantity("delay_matrices", matrices.len());
        self.suite_check("delay_tail_domination", clean, matrices.len());
        self.csv_artifact("suite.csv", &csv);
        Ok(())
    }

    // ---- block covers ----

    fn conidis(&mut self, c: &ConidisJob) -> R<()> {
        if c.sets.is_none() && c.random.is_none() {
            return Self::nothing_to_do("`sets`");
        }
        if let Some(s) = &c.sets {
            let spec = self.seq(s, parse_open_set, OpenSet::max_depth)?;
            let sched = Self::schedule(&c.eps, &c.eps_prime, &c.schedule)?;
            let res = conidis_cover(&spec, &sched, c.max_blocks)?;
            let liminf = liminf_sets(&spec);
            let mv = res.cover.measure();
            let r = &mut self.report;
            r.quantity("measure_V", &mv);
            r.quantity("eps_prime", sched.eps_prime());
            r.quantity("measure_liminf", liminf.measure());
            r.quantity("cut_points", join(&res.decomposition.cut_points()));
            r.check("stabilized", res.stabilized);
            r.check("measure_V_le_eps_prime", &mv <= sched.eps_prime());
            r.check("liminf_contained", liminf.is_subset_of(&res.cover));
            self.artifact("cover.txt", write_open_set(&res.cover), &res.cover, parse_open_set);
        }
        if let Some(rc) = &c.random {
            self.reserve("generated open sets", 6, 1)?;
            let mut rng = generate::rng(self.seed);
            let mut csv = Csv::new(&["instance", "len", "tail", "eps", "eps_prime", "stabilized", "measure_V", "liminf_contained"]);
            let (mut stab, mut within, mut contained) = (0, 0, 0);
            for k in 0..rc.count {
                let inst = generate::conidis_instance(&mut rng);
                let res = conidis_cover(&inst.spec, &inst.schedule, c.max_blocks)?;
                let mv = res.cover.measure();
                let ok_m = &mv <= inst.schedule.eps_prime();
                let ok_l = liminf_sets(&inst.spec).is_subset_of(&res.cover);
                stab += usize::from(res.stabilized);
                within += usize::from(ok_m);
                contained += usize::from(ok_l);
                csv.push(vec![
                    (k + 1).to_string(),
                    inst.spec.len().to_string(),
                    tail_name(inst.spec.tail()),
                    inst.schedule.eps().to_string(),
                    inst.schedule.eps_prime().to_string(),
                    tick(res.stabilized).into(),
                    mv.to_string(),
                    tick(ok_l).into(),
                ]);
            }
            self.suite_check("suite:stabilized", stab, rc.count);
            self.suite_check("suite:measure_V_le_eps_prime", within, rc.count);
            self.suite_check("suite:liminf_contained", contained, rc.count);
            self.csv_artifact("suite.csv", &csv);
        }
        Ok(())
    }

    /// Count of points where the liminf exceeds `φ`.
    fn fatou_misses(spec: &SeqSpec<BasicFunc>, phi: &BasicFunc, pts: &[LazyPoint]) -> usize {
        pts.iter()
            .filter(|p| liminf_pointwise(spec, p) > phi.eval_point(p).into())
            .count()
    }

    fn fatou(&mut self, c: &FatouJob) -> R<()> {
        if c.functions.is_none() && c.random.is_none() {
            return Self::nothing_to_do("`functions`");
        }
        let pts = points(c.points);
        self.report.quantity("points", pts.len());
        if let Some(s) = &c.functions {
            let spec = self.seq(s, parse_basic_func, BasicFunc::depth)?;
            let sched = Self::schedule(&c.eps, &c.eps_prime, &c.schedule)?;
            let res = fatou_bound(&spec, &sched, c.max_blocks)?;
            let integral = res.cover.integral();
            let misses = Self::fatou_misses(&spec, &res.cover, &pts);
            let r = &mut self.report;
            r.quantity("integral_phi", &integral);
            r.quantity("eps_prime", sched.eps_prime());
            r.quantity("cut_points", join(&res.decomposition.cut_points()));
            r.check("stabilized", res.stabilized);
            r.check("integral_phi_le_eps_prime", &integral <= sched.eps_prime());
            r.check_detail("liminf_le_phi", misses == 0, format!("{misses} of {} points", pts.len()));
            self.artifact("phi.txt", write_basic_func(&res.cover), &res.cover, parse_basic_func);
        }
        if let Some(rc) = &c.random {
            self.reserve("generated functions", 5, 1)?;
            let mut rng = generate::rng(self.seed);
            let mut csv = Csv::new(&["instance", "len", "tail", "eps", "eps_prime", "stabilized", "integral_phi", "liminf_misses"]);
            let (mut stab, mut within, mut dominated) = (0, 0, 0);
            for k in 0..rc.count {
                let inst = generate::fatou_instance(&mut rng);
                let res = fatou_bound(&inst.spec, &inst.schedule, c.max_blocks)?;
                let integral = res.cover.integral();
                let misses = Self::fatou_misses(&inst.spec, &res.cover, &pts);
                stab += usize::from(res.stabilized);
                within += usize::from(&integral <= inst.schedule.eps_prime());
                dominated += usize::from(misses == 0);
                csv.push(vec![
                    (k + 1).to_string(),
                    inst.spec.len().to_string(),
                    tail_name(inst.spec.tail()),
                    inst.schedule.eps().to_string(),
                    inst.schedule.eps_prime().to_string(),
                    tick(res.stabilized).into(),
                    integral.to_string(),
                    misses.to_string(),
                ]);
            }
            self.suite_check("suite:stabilized", stab, rc.count);
            self.suite_check("suite:integral_phi_le_eps_prime", within, rc.count);
            self.suite_check("suite:liminf_le_phi", dominated, rc.count);
            self.csv_artifact("suite.csv", &csv);
        }
        Ok(())
    }

    // ---- slow covers ----

    fn trace_checks(&mut self, trace: &SlowCoverTrace, measure_w: &Rational) {
        let steps_ok = trace.steps.iter().all(|s| s.i1_ok && s.i2_lhs <= s.i2_rhs);
        let r = &mut self.report;
        r.quantity("steps", trace.steps.len());
        r.quantity("T", &trace.threshold);
        r.quantity("total_integral", &trace.total_integral);
        r.quantity("measure_W", measure_w);
        r.check("i1_i2_every_step", steps_ok);
        r.check("threshold_bound", trace.threshold_bound_ok());
        r.check("measure_W_le_eps", measure_w <= &trace.eps);
    }

    fn slow_cover(&mut self, c: &SlowCoverJob) -> R<()> {
        if c.functions.is_none() && c.random.is_none() {
            return Self::nothing_to_do("`functions`");
        }
        if let Some(s) = &c.functions {
            let Some(eps) = &c.eps else {
                return cfg_err("an explicit instance needs `eps`");
            };
            let fs = self.seq(s, parse_basic_func, BasicFunc::depth)?;
            let res = slow_cover(&fs, &q(eps))?;
            let cov = slow_cover_coverage_check(&fs, &res);
            self.trace_checks(&res.trace, &res.cover.measure());
            self.report.check_detail(
                "coverage_check",
                cov.passed(),
                format!("{} counterexamples over {} cylinders", cov.counterexamples.len(), cov.checked_points),
            );
            self.trace_artifact(&res.trace);
            self.artifact("cover.txt", write_open_set(&res.cover), &res.cover, parse_open_set);
            let limit = res.limit();
            self.artifact("limit.txt", write_basic_func(&limit), &limit, parse_basic_func);
        }
        if let Some(rc) = &c.random {
            self.reserve("generated functions", 5, 16)?;
            let mut rng = generate::rng(self.seed);
            let mut csv = Csv::new(&["instance", "len", "eps", "T", "measure_W", "trace_ok", "counterexamples"]);
            let (mut traces, mut within, mut covered) = (0, 0, 0);
            for k in 0..rc.count {
                let inst = generate::slow_instance(&mut rng);
                let res = slow_cover(&inst.fs, &inst.eps)?;
                let cov = slow_cover_coverage_check(&inst.fs, &res);
                let mw = res.cover.measure();
                traces += usize::from(res.trace.all_ok());
                within += usize::from(mw <= inst.eps);
                covered += usize::from(cov.passed());
                csv.push(vec![
                    (k + 1).to_string(),
                    inst.fs.len().to_string(),
                    inst.eps.to_string(),
                    res.threshold.to_string(),
                    mw.to_string(),
                    tick(res.trace.all_ok()).into(),
                    cov.counterexamples.len().to_string(),
                ]);
            }
            self.suite_check("suite:i1_i2_every_step", traces, rc.count);
            self.suite_check("suite:measure_W_le_eps", within, rc.count);
            self.suite_check("suite:coverage_check", covered, rc.count);
            self.csv_artifact("suite.csv", &csv);
        }
        Ok(())
    }

    fn slow_cover_2d(&mut self, c: &SlowCover2dJob) -> R<()> {
        if c.functions.is_none() && c.random.is_none() {
            return Self::nothing_to_do("`functions`");
        }
        let rho = c.rho.as_ref().map(|s| self.series(s)).transpose()?;
        if let Some(s) = &c.functions {
            let Some(eps) = &c.eps else {
                return cfg_err("an explicit instance needs `eps`");
            };
            let gs = self.seq(s, parse_basic_func_2d, func2d_depth)?;
            let res = slow_cover_2d(&gs, &q(eps))?;
            let cov = slow_cover_2d_coverage_check(&gs, &res, rho.as_ref());
            self.trace_checks(&res.trace, &res.cover.measure());
            self.report.check_detail(
                "coverage_check",
                cov.passed(),
                format!("{} counterexamples over {} corners", cov.counterexamples.len(), cov.checked_points),
            );
            self.trace_artifact(&res.trace);
            self.artifact("cover.txt", write_open_set_2d(&res.cover), &res.cover, parse_open_set_2d);
        }
        if let Some(rc) = &c.random {
            self.reserve("generated 2-D functions", 3, 64)?;
            let mut rng = generate::rng(self.seed);
            let mut csv = Csv::new(&["instance", "len", "eps", "T", "measure_W", "trace_ok", "counterexamples"]);
            let (mut traces, mut within, mut covered) = (0, 0, 0);
            for k in 0..rc.count {
                let inst = generate::slow_2d_instance(&mut rng);
                let res = slow_cover_2d(&inst.gs, &inst.eps)?;
                let cov = slow_cover_2d_coverage_check(&inst.gs, &res, rho.as_ref());
                let mw = res.cover.measure();
                traces += usize::from(res.trace.all_ok());
                within += usize::from(mw <= inst.eps);
                covered += usize::from(cov.passed());
                csv.push(vec![
                    (k + 1).to_string(),
                    inst.gs.len().to_string(),
                    inst.eps.to_string(),
                    res.threshold.to_string(),
                    mw.to_string(),
                    tick(res.trace.all_ok()).into(),
                    cov.counterexamples.len().to_string(),
                ]);
            }
            self.suite_check("suite:i1_i2_and_threshold_bound", traces, rc.count);
            self.suite_check("suite:measure_W_le_eps", within, rc.count);
            self.suite_check("suite:coverage_check", covered, rc.count);
            self.csv_artifact("suite.csv", &csv);
        }
        Ok(())
    }

    fn q_pipeline(&mut self, c: &QPipelineJob) -> R<()> {
        if c.k_min > c.k_max {
            return cfg_err("k_min must not exceed k_max");
        }
        let fs = self.seq(&c.functions, parse_basic_func, BasicFunc::depth)?;
        let a = self.series(&c.a)?;
        let rho = self.series(&c.rho)?;
        let outcome = q_pipeline(&fs, &a, &rho, c.k_min..=c.k_max)?;
        let runs = match &outcome {
            QOutcome::Admissible(res) => &res.runs,
            QOutcome::NoAdmissibleEpsilon { runs } => runs,
        };
        let mut grid = Csv::new(&["k", "eps", "T", "max_delta_ratio", "admissible", "measure_W", "coverage_ok"]);
        for run in runs {
            grid.push(vec![
                run.k.to_string(),
                run.eps.to_string(),
                run.threshold.to_string(),
                run.max_delta_ratio.to_string(),
                tick(run.admissible).into(),
                run.w_measure.to_string(),
                tick(run.coverage.passed()).into(),
            ]);
        }
        let all_covered = runs.iter().all(|r| r.coverage.passed());
        self.report.quantity("grid_runs", runs.len());
        self.report.check("grid_coverage_checks", all_covered);
        match &outcome {
            QOutcome::Admissible(res) => {
                let run = runs.iter().find(|r| r.k == res.k).expect("chosen run is in the grid");
                let pts = points(c.points);
                let misses = pts
                    .iter()
                    .filter(|p| res.q.q.eval_point(p) < res.surrogate.eval_point(p))
                    .count();
                let r = &mut self.report;
                r.quantity("outcome", "ADMISSIBLE");
                r.quantity("k", res.k);
                r.quantity("eps", &res.eps);
                r.quantity("T", &run.threshold);
                r.quantity("integral_Q", &res.q.q_integral);
                r.quantity("measure_W", &res.q.integral_bound);
                r.quantity("points", pts.len());
                r.check("integral_Q_le_measure_W", res.q.q_integral <= res.q.integral_bound);
                r.check_detail("Q_dominates_surrogate", misses == 0, format!("{misses} of {} points", pts.len()));
                let (qf, cover, trace) = (res.q.q.clone(), run.run.cover.clone(), run.run.trace.clone());
                self.artifact("q.txt", write_basic_func(&qf), &qf, parse_basic_func);
                self.artifact("cover.txt", write_open_set_2d(&cover), &cover, parse_open_set_2d);
                self.trace_artifact(&trace);
            }
            QOutcome::NoAdmissibleEpsilon { runs } => {
                let r = &mut self.report;
                r.quantity("outcome", "NO_ADMISSIBLE_EPSILON");
                r.check("every_run_diagnosed", runs.iter().all(|run| !run.admissible));
            }
        }
        self.csv_artifact("epsilon_grid.csv", &grid);
        Ok(())
    }
}
