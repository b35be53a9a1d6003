//! Acceptance run: one PASS/FAIL line per criterion, driven through the
//! same job runner as the command-line tool. Exits nonzero if any fails.

use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use randlab_cli::{run_job, JobKind, JobOutput, Options, Report};

const SEED: u64 = 20_240_601;

const PLAIN_DIGEST: &str = "1951bf1336909c679fe09530e7c074bb56f0e068b9040239c17f9197947f9c15";
const PREFIX_DIGEST: &str = "23beddaa7d7be181a768a673ebb4cb32739ae218bb67b30e9fd0b76b94a1ed70";

struct Job {
    kind: JobKind,
    config: String,
}

fn job(kind: JobKind, config: impl Into<String>) -> Job {
    Job {
        kind,
        config: config.into(),
    }
}

fn run(j: &Job) -> JobOutput {
    let opts = Options {
        seed: Some(SEED),
        ..Options::default()
    };
    run_job(j.kind, &j.config, Path::new("."), &opts).unwrap_or_else(|e| panic!("{}: {e}", j.kind))
}

fn quantity<'a>(r: &'a Report, name: &str) -> Option<&'a str> {
    r.quantities.iter().find(|q| q.name == name).map(|q| q.value.as_str())
}

/// `None` when the report passed, otherwise a short reason.
fn failure(out: &JobOutput) -> Option<String> {
    let r = &out.report;
    if let Some(e) = &r.error {
        return Some(format!("{}: {e}", r.job));
    }
    let failed: Vec<String> = r
        .failed_checks()
        .map(|c| match &c.detail {
            Some(d) => format!("{} ({d})", c.name),
            None => c.name.clone(),
        })
        .collect();
    (!failed.is_empty()).then(|| format!("{}: {}", r.job, failed.join(", ")))
}

fn machine(model: &str) -> String {
    format!("{{ model = \"{model}\", max_program_length = 12, step_budget = 10000, n_max = 12 }}")
}

fn family(l: usize) -> String {
    let items: Vec<String> = (1..=l)
        .map(|i| format!("{{ inline = \"depth {i}\\n{} 1/{i}\" }}", "0".repeat(i)))
        .collect();
    items.join(", ")
}

struct Outcome {
    reasons: Vec<String>,
    detail: String,
}

impl Outcome {
    fn from_runs(outs: &[&JobOutput], detail: impl Into<String>) -> Outcome {
        Outcome {
            reasons: outs.iter().filter_map(|o| failure(o)).collect(),
            detail: detail.into(),
        }
    }

    fn require(&mut self, ok: bool, reason: impl Into<String>) {
        if !ok {
            self.reasons.push(reason.into());
        }
    }
}

fn within(elapsed: Duration, limit_s: u64) -> (bool, String) {
    (elapsed.as_secs_f64() < limit_s as f64, format!("{:.2}s of {limit_s}s", elapsed.as_secs_f64()))
}

fn main() {
    let mut lines: Vec<(usize, Outcome)> = Vec::new();
    let mut all_jobs: Vec<(Job, JobOutput)> = Vec::new();

    // 1. Pinned toy machines, enumerated single-threaded.
    {
        let jobs = [
            job(JobKind::EnumerateMachine, format!("machine = {}\nexpect_digest = \"{PLAIN_DIGEST}\"\n", machine("plain"))),
            job(JobKind::EnumerateMachine, format!("machine = {}\nexpect_digest = \"{PREFIX_DIGEST}\"\n", machine("prefix"))),
        ];
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let start = Instant::now();
        let outs: Vec<JobOutput> = pool.install(|| jobs.iter().map(run).collect());
        let (fast, time) = within(start.elapsed(), 60);
        let kraft = quantity(&outs[1].report, "kraft_sum").unwrap_or("?").to_string();
        let mut o = Outcome::from_runs(&outs.iter().collect::<Vec<_>>(), format!("Kraft sum {kraft}, {time}"));
        o.require(fast, "runtime");
        lines.push((1, o));
        all_jobs.extend(jobs.into_iter().zip(outs));
    }

    // 2. Test-function integrals on the pinned tables.
    {
        let jobs = [
            job(JobKind::PlainTest, format!("m_max = 16\ndepth_cap = 12\nmodel = {{ machine = {} }}\n", machine("plain"))),
            job(JobKind::Gacs, format!("depth = 12\nmodel = {{ machine = {} }}\n", machine("prefix"))),
        ];
        let outs: Vec<JobOutput> = jobs.iter().map(run).collect();
        let integral = quantity(&outs[1].report, "integral").unwrap_or("?").to_string();
        let o = Outcome::from_runs(&outs.iter().collect::<Vec<_>>(), format!("m = 0..=16, gacs integral {integral}"));
        lines.push((2, o));
        all_jobs.extend(jobs.into_iter().zip(outs));
    }

    // 3-6. Seeded random suites.
    let suites = [
        (3, job(JobKind::Conidis, "[random]\ncount = 100\n"), 30, "100 instances"),
        (
            4,
            job(JobKind::Fatou, "points = { max_prefix = 5, max_cycle = 3 }\n[random]\ncount = 100\n"),
            0,
            "100 instances",
        ),
        (5, job(JobKind::SlowCover, "[random]\ncount = 200\n"), 0, "200 instances"),
        (6, job(JobKind::SlowCover2d, "[random]\ncount = 100\n"), 0, "100 instances"),
    ];
    for (n, j, limit, what) in suites {
        let start = Instant::now();
        let out = run(&j);
        let elapsed = start.elapsed();
        let mut detail = what.to_string();
        if let Some(p) = quantity(&out.report, "points") {
            detail.push_str(&format!(", {p} points"));
        }
        let mut o = Outcome::from_runs(&[&out], detail);
        if n == 4 {
            let pts: usize = quantity(&out.report, "points").and_then(|p| p.parse().ok()).unwrap_or(0);
            o.require(pts >= 200, "fewer than 200 test points");
        }
        if limit > 0 {
            let (fast, time) = within(elapsed, limit);
            o.detail.push_str(&format!(", {time}"));
            o.require(fast, "runtime");
        }
        lines.push((n, o));
        all_jobs.push((j, out));
    }

    // 7. Q pipeline on f_i = (1/i) χ_{0^i}, a = ρ = 1/(i(i+1)).
    {
        let j = job(
            JobKind::QPipeline,
            format!(
                "k_min = 0\nk_max = 8\n\
                 a = {{ listed = 10, tail_sum = {{ kind = \"telescoping\", scale = 1 }} }}\n\
                 rho = {{ listed = 10, tail_sum = {{ kind = \"telescoping\", scale = 1 }} }}\n\
                 functions = {{ items = [{}], tail = \"zero\" }}\n",
                family(10)
            ),
        );
        let start = Instant::now();
        let out = run(&j);
        let (fast, time) = within(start.elapsed(), 60);
        let r = &out.report;
        let detail = match quantity(r, "outcome") {
            Some("ADMISSIBLE") => format!(
                "k = {}, T = {}, integral Q = {} <= measure W = {}, {time}",
                quantity(r, "k").unwrap_or("?"),
                quantity(r, "T").unwrap_or("?"),
                quantity(r, "integral_Q").unwrap_or("?"),
                quantity(r, "measure_W").unwrap_or("?"),
            ),
            other => format!("{}, {time}", other.unwrap_or("no outcome")),
        };
        let mut o = Outcome::from_runs(&[&out], detail);
        o.require(fast, "runtime");
        lines.push((7, o));
        all_jobs.push((j, out));
    }

    // 8. Tails toolkit.
    {
        let geometric = "{ listed = 10, tail_sum = { kind = \"geometric\", first = \"1/2\", ratio = \"1/2\" } }";
        let telescoping = "{ listed = 10, tail_sum = { kind = \"telescoping\", scale = 1 } }";
        let cases = format!(
            "[[cases]]\nname = \"geometric_vs_telescoping\"\na = {geometric}\nb = {telescoping}\nc = 1\nhorizon = 10\nexpect = \"bounded_witnessed\"\n\n\
             [[cases]]\nname = \"reflexive\"\na = {geometric}\nb = {geometric}\nc = 1\nhorizon = 10\nexpect = \"bounded_witnessed\"\n\n\
             [[cases]]\nname = \"swapped\"\na = {telescoping}\nb = {geometric}\nc = 1\nhorizon = 10\nexpect = \"violated\"\n\n"
        );
        let jobs: Vec<Job> = ["row_major", "diagonal"]
            .iter()
            .map(|s| job(JobKind::Tails, format!("{cases}[delay]\nschedule = \"{s}\"\nrandom = {{ count = 100 }}\n")))
            .collect();
        let outs: Vec<JobOutput> = jobs.iter().map(run).collect();
        let swapped = quantity(&outs[0].report, "swapped:verdict").unwrap_or("?").to_string();
        let mut o = Outcome::from_runs(&outs.iter().collect::<Vec<_>>(), format!("swapped {swapped}, 2 x 100 matrices"));
        let n: Option<usize> = swapped
            .strip_prefix("VIOLATED(")
            .and_then(|s| s.strip_suffix(')'))
            .and_then(|s| s.parse().ok());
        o.require(n.is_some_and(|n| n <= 10), "swapped case not VIOLATED(N <= 10)");
        lines.push((8, o));
        all_jobs.extend(jobs.into_iter().zip(outs));
    }

    // 9. Determinism and round trips over every job above.
    {
        let mut o = Outcome {
            reasons: Vec::new(),
            detail: String::new(),
        };
        let mut artifacts = 0;
        for (j, first) in &all_jobs {
            let again = run(j);
            o.require(again.report.digest == first.report.digest, format!("{}: digest changed", j.kind));
            o.require(again.artifacts == first.artifacts, format!("{}: artifacts changed", j.kind));
            o.require(first.report.digest_matches(), format!("{}: digest does not match report", j.kind));
            for (name, _) in &first.artifacts {
                artifacts += 1;
                let check = format!("round_trip:{name}");
                let ok = first.report.checks.iter().any(|c| c.name == check && c.passed);
                o.require(ok, format!("{}: {name} does not round-trip", j.kind));
            }
        }
        o.detail = format!("{} jobs rerun, {artifacts} artifacts", all_jobs.len());
        lines.push((9, o));
    }

    let mut stdout = std::io::stdout().lock();
    let mut failed = 0;
    for (n, o) in &lines {
        if o.reasons.is_empty() {
            writeln!(stdout, "criterion {n}: PASS ({})", o.detail).unwrap();
        } else {
            failed += 1;
            writeln!(stdout, "criterion {n}: FAIL ({}) [{}]", o.detail, o.reasons.join("; ")).unwrap();
        }
    }
    writeln!(stdout, "acceptance: {} passed, {failed} failed", lines.len() - failed).unwrap();
    if failed > 0 {
        std::process::exit(1);
    }
}
