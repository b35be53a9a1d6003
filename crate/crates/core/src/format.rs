//! Line-oriented text formats for tables, step functions and open sets.
//!
//! All numbers are exact: `p/q` or integers. The empty bit string is
//! written `-`. Blank lines and lines starting with `#` are ignored except
//! for the table header.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::bits::Bits;
use crate::complexity::{ComplexityTable, ModelKind, TableMeta};
use crate::cover::{SlowCoverTrace, StepRecord};
use crate::error::{Error, Result};
use crate::measure::{BasicFunc, BasicFunc2D, Box2D, OpenSet, OpenSet2D, StepFn};
use crate::rational::{parse_rational, Rational};

const TABLE_TAG: &str = "# randlab-table";

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        (!l.is_empty() && !l.starts_with('#')).then(|| (i + 1, l.split_whitespace().collect()))
    })
}

fn parse_bits(line: usize, tok: &str) -> Result<Bits> {
    tok.parse().map_err(|_| perr(line, format!("bad bit string {tok:?}")))
}

fn parse_q(line: usize, tok: &str) -> Result<Rational> {
    parse_rational(tok).map_err(|e| perr(line, e.to_string()))
}

fn arity(line: usize, fields: &[&str], n: usize) -> Result<()> {
    if fields.len() != n {
        return Err(perr(line, format!("expected {n} fields, found {}", fields.len())));
    }
    Ok(())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

// ---- complexity tables ----

fn table_body(t: &ComplexityTable) -> String {
    let mut s = String::new();
    for (x, v) in t.entries() {
        match v {
            Some(v) => writeln!(s, "{} {v}", x.token()),
            None => writeln!(s, "{} U", x.token()),
        }
        .unwrap();
    }
    s
}

pub(crate) fn table_digest(t: &ComplexityTable) -> String {
    sha256_hex(table_body(t).as_bytes())
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

pub fn write_table(t: &ComplexityTable) -> String {
    let body = table_body(t);
    let m = t.meta();
    format!(
        "{TABLE_TAG} machine_id={} kind={} max_program_length={} step_budget={} n_max={} digest={}\n{body}",
        m.machine_id,
        t.kind(),
        opt(&m.max_program_length),
        opt(&m.step_budget),
        t.n_max(),
        sha256_hex(body.as_bytes()),
    )
}

/// Parses a table. Unlisted strings up to `n_max` are UNDEFINED; a header
/// digest, when present, must match the canonical body.
pub fn parse_table(text: &str) -> Result<ComplexityTable> {
    let header = text.lines().next().unwrap_or_default();
    let Some(rest) = header.strip_prefix(TABLE_TAG) else {
        return Err(perr(1, format!("table must start with {TABLE_TAG:?}")));
    };
    let mut fields = BTreeMap::new();
    for kv in rest.split_whitespace() {
        let (k, v) = kv.split_once('=').ok_or_else(|| perr(1, format!("bad header field {kv:?}")))?;
        if fields.insert(k, v).is_some() {
            return Err(perr(1, format!("duplicate header field {k:?}")));
        }
    }
    let num = |k: &str| -> Result<Option<u64>> {
        match fields.get(k) {
            None | Some(&"-") => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| perr(1, format!("bad {k} {v:?}"))),
        }
    };
    for k in fields.keys() {
        if !["machine_id", "kind", "max_program_length", "step_budget", "n_max", "digest"].contains(k) {
            return Err(perr(1, format!("unknown header field {k:?}")));
        }
    }
    let kind: ModelKind = fields
        .get("kind")
        .ok_or_else(|| perr(1, "missing kind"))?
        .parse()
        .map_err(|e: Error| perr(1, e.to_string()))?;
    let n_max = num("n_max")?.ok_or_else(|| perr(1, "missing n_max"))? as usize;
    let meta = TableMeta {
        machine_id: fields.get("machine_id").map_or("manual", |v| v).to_string(),
        max_program_length: num("max_program_length")?.map(|v| v as usize),
        step_budget: num("step_budget")?,
    };
    let mut listed = BTreeMap::new();
    for (line, f) in content_lines(text) {
        arity(line, &f, 2)?;
        let x = parse_bits(line, f[0])?;
        if x.len() > n_max {
            return Err(perr(line, format!("{x:?} is longer than n_max = {n_max}")));
        }
        let v = match f[1] {
            "U" => None,
            v => Some(v.parse::<u32>().map_err(|_| perr(line, format!("bad complexity value {v:?}")))?),
        };
        if listed.insert(x, v).is_some() {
            return Err(perr(line, format!("duplicate entry {:?}", f[0])));
        }
    }
    let table = ComplexityTable::new(kind, n_max, meta, listed)?;
    if let Some(d) = fields.get("digest") {
        if *d != table.digest() {
            return Err(perr(1, format!("digest mismatch: header {d}, content {}", table.digest())));
        }
    }
    Ok(table)
}

// ---- basic functions ----

/// `(line number, whitespace-separated fields)`.
type Lines<'a> = Vec<(usize, Vec<&'a str>)>;

fn parse_depth(text: &str) -> Result<(usize, Lines<'_>)> {
    let mut lines = content_lines(text);
    let (line, head) = lines.next().ok_or_else(|| perr(1, "missing `depth m` header"))?;
    if head.len() != 2 || head[0] != "depth" {
        return Err(perr(line, "expected `depth m`"));
    }
    let depth = head[1].parse().map_err(|_| perr(line, format!("bad depth {:?}", head[1])))?;
    Ok((depth, lines.collect()))
}

pub fn write_basic_func(f: &BasicFunc) -> String {
    let mut s = format!("depth {}\n", f.depth());
    for (x, v) in f.values() {
        writeln!(s, "{} {v}", x.token()).unwrap();
    }
    s
}

pub fn parse_basic_func(text: &str) -> Result<BasicFunc> {
    let (depth, lines) = parse_depth(text)?;
    let mut values = Vec::new();
    for (line, f) in lines {
        arity(line, &f, 2)?;
        values.push((parse_bits(line, f[0])?, parse_q(line, f[1])?));
    }
    BasicFunc::new(depth, values)
}

pub fn write_basic_func_2d(g: &BasicFunc2D) -> String {
    let mut s = format!("depth {}\n", g.depth());
    for (x, slice) in g.slices() {
        for (lo, hi, v) in slice.pieces() {
            writeln!(s, "{} {lo} {hi} {v}", x.token()).unwrap();
        }
    }
    s
}

/// Rows are `prefix lo hi value`; overlapping rows on one cylinder add.
pub fn parse_basic_func_2d(text: &str) -> Result<BasicFunc2D> {
    let (depth, lines) = parse_depth(text)?;
    let mut slices: BTreeMap<Bits, StepFn> = BTreeMap::new();
    for (line, f) in lines {
        arity(line, &f, 4)?;
        let x = parse_bits(line, f[0])?;
        let block = StepFn::block(parse_q(line, f[1])?, parse_q(line, f[2])?, parse_q(line, f[3])?)
            .map_err(|e| perr(line, e.to_string()))?;
        let slot = slices.entry(x).or_insert_with(StepFn::zero);
        *slot = slot.zip_with(&block, |a, b| a + b);
    }
    BasicFunc2D::new(depth, slices)
}

// ---- open sets ----

pub fn write_open_set(u: &OpenSet) -> String {
    u.cylinders().iter().map(|x| x.token() + "\n").collect()
}

pub fn parse_open_set(text: &str) -> Result<OpenSet> {
    let mut cyl = Vec::new();
    for (line, f) in content_lines(text) {
        arity(line, &f, 1)?;
        cyl.push(parse_bits(line, f[0])?);
    }
    Ok(OpenSet::from_cylinders(cyl))
}

pub fn write_open_set_2d(w: &OpenSet2D) -> String {
    w.boxes()
        .map(|b| format!("{} {} {}\n", b.cylinder.token(), b.lo, b.hi))
        .collect()
}

pub fn parse_open_set_2d(text: &str) -> Result<OpenSet2D> {
    let mut boxes = Vec::new();
    for (line, f) in content_lines(text) {
        arity(line, &f, 3)?;
        let b = Box2D::new(parse_bits(line, f[0])?, parse_q(line, f[1])?, parse_q(line, f[2])?)
            .ok_or_else(|| perr(line, "box needs 0 <= lo < hi"))?;
        boxes.push(b);
    }
    Ok(OpenSet2D::from_boxes(boxes))
}

// ---- slow-cover traces ----

pub const TRACE_COLUMNS: [&str; 8] = [
    "i",
    "integral_added",
    "t",
    "delta_t",
    "measure_exceedance",
    "i1_ok",
    "i2_lhs",
    "i2_rhs",
];

pub fn write_trace_csv(trace: &SlowCoverTrace) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TRACE_COLUMNS).expect("in-memory write");
    for s in &trace.steps {
        w.write_record([
            s.i.to_string(),
            s.integral_added.to_string(),
            s.t.to_string(),
            s.delta_t.to_string(),
            s.measure_exceedance.to_string(),
            s.i1_ok.to_string(),
            s.i2_lhs.to_string(),
            s.i2_rhs.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

pub fn parse_trace_csv(text: &str) -> Result<Vec<StepRecord>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers().map_err(|e| perr(1, e.to_string()))?;
    if headers.iter().ne(TRACE_COLUMNS) {
        return Err(perr(1, format!("trace header must be {}", TRACE_COLUMNS.join(","))));
    }
    let mut steps = Vec::new();
    for (k, rec) in r.records().enumerate() {
        let line = k + 2;
        let rec = rec.map_err(|e| perr(line, e.to_string()))?;
        if rec.len() != TRACE_COLUMNS.len() {
            return Err(perr(line, "wrong number of columns"));
        }
        let q = |c: usize| parse_q(line, &rec[c]);
        steps.push(StepRecord {
            i: rec[0].parse().map_err(|_| perr(line, "bad step index"))?,
            integral_added: q(1)?,
            t: q(2)?,
            delta_t: q(3)?,
            measure_exceedance: q(4)?,
            i1_ok: rec[5].parse().map_err(|_| perr(line, "bad i1_ok flag"))?,
            i2_lhs: q(6)?,
            i2_rhs: q(7)?,
        });
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::rational::{int, ratio};

    #[test]
    fn table_round_trip_and_digest_check() {
        let t = ComplexityTable::new(
            ModelKind::Prefix,
            2,
            TableMeta::default(),
            [(bits(""), Some(1)), (bits("01"), Some(3))],
        )
        .unwrap();
        let text = write_table(&t);
        assert!(text.lines().nth(1) == Some("- 1"));
        assert_eq!(parse_table(&text).unwrap(), t);
        let tampered = text.replace("01 3", "01 4");
        assert!(matches!(parse_table(&tampered), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn table_header_without_digest() {
        let t = parse_table("# randlab-table kind=plain n_max=1\n0 1\n").unwrap();
        assert_eq!(t.get(&bits("0")).unwrap(), Some(1));
        assert_eq!(t.get(&bits("1")).unwrap(), None);
        assert!(parse_table("# randlab-table kind=plain n_max=1\n00 1\n").is_err());
    }

    #[test]
    fn basic_func_round_trip() {
        let f = BasicFunc::new(2, [(bits("01"), ratio(1, 3)), (bits("11"), int(2))]).unwrap();
        let text = write_basic_func(&f);
        assert_eq!(text, "depth 2\n01 1/3\n11 2\n");
        assert_eq!(parse_basic_func(&text).unwrap(), f);
        assert!(matches!(parse_basic_func("depth 1\n0 0.5\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn basic_func_2d_round_trip() {
        let g = BasicFunc2D::block(bits("0"), int(0), int(2), ratio(1, 2))
            .unwrap()
            .sum(&BasicFunc2D::block(bits("1"), ratio(1, 3), int(1), int(3)).unwrap());
        let text = write_basic_func_2d(&g);
        assert_eq!(parse_basic_func_2d(&text).unwrap(), g);
    }

    #[test]
    fn open_sets_round_trip() {
        let u = OpenSet::from_cylinders([bits("00"), bits("1")]);
        assert_eq!(parse_open_set(&write_open_set(&u)).unwrap(), u);
        assert_eq!(parse_open_set("-\n").unwrap(), OpenSet::full());
        let w = OpenSet2D::from_boxes([Box2D::new(bits("1"), int(0), int(3)).unwrap()]);
        assert_eq!(parse_open_set_2d(&write_open_set_2d(&w)).unwrap(), w);
    }

    #[test]
    fn trace_round_trip() {
        use crate::cover::slow_cover;
        use crate::measure::{SeqSpec, Tail};
        let f = BasicFunc::scaled_indicator(bits("0"), int(2));
        let fs = SeqSpec::new(vec![f.clone(), f], Tail::Zero).unwrap();
        let r = slow_cover(&fs, &ratio(1, 4)).unwrap();
        let text = write_trace_csv(&r.trace);
        assert!(text.starts_with("i,integral_added,t,delta_t,measure_exceedance,i1_ok,i2_lhs,i2_rhs\n1,1,2,2,0,true,"));
        assert_eq!(parse_trace_csv(&text).unwrap(), r.trace.steps);
    }
}
