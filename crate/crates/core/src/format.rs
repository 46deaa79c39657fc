//! Plain-text circuit, permutation and mapping files.
//!
//! ```text
//! lines 3
//! inputs 2
//! outputs 0 1
//! n 2
//! t 0 2 1
//! ```
//!
//! Gate lines are `n t`, `c c t`, `t c1 c2 t` and, when generalized gates are
//! allowed, `x c1 .. ck t`. `#` starts a comment; blank lines are ignored.
//! Permutation files start with `perm n`, mapping files with `map n`, followed
//! by `2^n` whitespace-separated images.

use std::fmt::Write as _;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::perm::{BooleanMapping, Permutation};

/// Largest `n` accepted in permutation and mapping files.
pub const MAX_TABLE_BITS: usize = 26;

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = body.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn number(line: usize, word: &str) -> Result<usize> {
    word.parse::<usize>().map_err(|_| {
        Error::parse(
            line,
            format!("expected a non-negative integer, got `{word}`"),
        )
    })
}

fn header<'a, I>(lines: &mut I, key: &str, last: usize) -> Result<(usize, Vec<&'a str>)>
where
    I: Iterator<Item = (usize, Vec<&'a str>)>,
{
    match lines.next() {
        Some((no, words)) if words[0] == key => Ok((no, words[1..].to_vec())),
        Some((no, words)) => Err(Error::parse(
            no,
            format!("expected `{key}`, got `{}`", words[0]),
        )),
        None => Err(Error::parse(last, format!("missing `{key}` header"))),
    }
}

fn single(no: usize, key: &str, args: &[&str]) -> Result<usize> {
    match args {
        [v] => number(no, v),
        _ => Err(Error::parse(no, format!("`{key}` takes exactly one value"))),
    }
}

pub fn parse_circuit(text: &str, allow_generalized: bool) -> Result<Circuit> {
    let last = text.lines().count().max(1);
    let mut lines = content_lines(text);
    let (no, args) = header(&mut lines, "lines", last)?;
    let m = single(no, "lines", &args)?;
    let (no, args) = header(&mut lines, "inputs", last)?;
    let n = single(no, "inputs", &args)?;
    if n > m {
        return Err(Error::parse(no, format!("{n} inputs exceed {m} lines")));
    }
    let (no, args) = header(&mut lines, "outputs", last)?;
    let outputs = args
        .iter()
        .map(|w| number(no, w))
        .collect::<Result<Vec<_>>>()?;
    let mut circuit = Circuit::new(m, n).map_err(|e| Error::parse(no, e.to_string()))?;
    circuit
        .set_outputs(outputs)
        .map_err(|e| Error::parse(no, strip_class(&e)))?;

    for (no, words) in lines {
        let args = words[1..]
            .iter()
            .map(|w| number(no, w))
            .collect::<Result<Vec<_>>>()?;
        let arity = match words[0] {
            "n" => Some(0),
            "c" => Some(1),
            "t" => Some(2),
            "x" if allow_generalized => None,
            "x" => {
                return Err(Error::parse(
                    no,
                    "generalized gate `x` requires allowing generalized gates",
                ))
            }
            other => return Err(Error::parse(no, format!("unknown gate kind `{other}`"))),
        };
        if args.is_empty() || arity.is_some_and(|a| args.len() != a + 1) {
            return Err(Error::parse(
                no,
                format!("wrong number of lines for `{}` gate", words[0]),
            ));
        }
        let (target, controls) = args.split_last().expect("nonempty");
        let gate =
            Gate::new(controls.to_vec(), *target).map_err(|e| Error::parse(no, strip_class(&e)))?;
        circuit
            .push(gate)
            .map_err(|e| Error::parse(no, strip_class(&e)))?;
    }
    Ok(circuit)
}

fn strip_class(e: &Error) -> String {
    match e {
        Error::Structural(m) => m.clone(),
        other => other.to_string(),
    }
}

/// Writes `circuit` in the text format. Fails on a generalized gate unless allowed.
pub fn serialize_circuit(circuit: &Circuit, allow_generalized: bool) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "lines {}", circuit.lines()).unwrap();
    writeln!(out, "inputs {}", circuit.inputs()).unwrap();
    out.push_str("outputs");
    for o in circuit.outputs() {
        write!(out, " {o}").unwrap();
    }
    out.push('\n');
    for g in circuit.gates() {
        let tag = match g.kind() {
            GateKind::Not => "n",
            GateKind::Cnot => "c",
            GateKind::Toffoli => "t",
            GateKind::Generalized(_) if allow_generalized => "x",
            GateKind::Generalized(k) => {
                return Err(Error::Parameter(format!(
                    "circuit contains a {k}-CNOT; generalized gates are not allowed"
                )))
            }
        };
        out.push_str(tag);
        for c in g.controls() {
            write!(out, " {c}").unwrap();
        }
        writeln!(out, " {}", g.target()).unwrap();
    }
    Ok(out)
}

fn parse_table(text: &str, key: &str) -> Result<(usize, Vec<usize>)> {
    let last = text.lines().count().max(1);
    let mut lines = content_lines(text);
    let (no, args) = header(&mut lines, key, last)?;
    let n = single(no, key, &args)?;
    if n > MAX_TABLE_BITS {
        return Err(Error::parse(
            no,
            format!("n = {n} exceeds the supported {MAX_TABLE_BITS}"),
        ));
    }
    let size = 1usize << n;
    let mut images = Vec::with_capacity(size);
    let mut last_no = no;
    for (no, words) in lines {
        last_no = no;
        for w in words {
            let v = number(no, w)?;
            if v >= size {
                return Err(Error::parse(
                    no,
                    format!("image {v} out of range for n = {n}"),
                ));
            }
            images.push(v);
        }
    }
    if images.len() != size {
        return Err(Error::parse(
            last_no,
            format!("expected {size} images, found {}", images.len()),
        ));
    }
    Ok((n, images))
}

fn write_table(key: &str, n: usize, images: &[usize]) -> String {
    let mut out = format!("{key} {n}\n");
    for row in images.chunks(16) {
        let words: Vec<String> = row.iter().map(usize::to_string).collect();
        out.push_str(&words.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_permutation(text: &str) -> Result<Permutation> {
    let (n, images) = parse_table(text, "perm")?;
    Permutation::from_images(n, images).map_err(|e| Error::parse(1, strip_class(&e)))
}

pub fn serialize_permutation(p: &Permutation) -> String {
    write_table("perm", p.bits(), p.images())
}

pub fn parse_mapping(text: &str) -> Result<BooleanMapping> {
    let (n, images) = parse_table(text, "map")?;
    BooleanMapping::new(n, images).map_err(|e| Error::parse(1, strip_class(&e)))
}

pub fn serialize_mapping(f: &BooleanMapping) -> String {
    write_table("map", f.bits(), f.images())
}

/// Contents of a permutation or mapping file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecFile {
    Permutation(Permutation),
    Mapping(BooleanMapping),
}

impl SpecFile {
    /// Dispatches on the first keyword.
    pub fn parse(text: &str) -> Result<Self> {
        match content_lines(text).next() {
            Some((_, words)) if words[0] == "perm" => {
                parse_permutation(text).map(SpecFile::Permutation)
            }
            Some((_, words)) if words[0] == "map" => parse_mapping(text).map(SpecFile::Mapping),
            Some((no, words)) => Err(Error::parse(
                no,
                format!("expected `perm` or `map`, got `{}`", words[0]),
            )),
            None => Err(Error::parse(1, "empty specification file")),
        }
    }

    pub fn bits(&self) -> usize {
        match self {
            SpecFile::Permutation(p) => p.bits(),
            SpecFile::Mapping(f) => f.bits(),
        }
    }

    pub fn mapping(&self) -> BooleanMapping {
        match self {
            SpecFile::Permutation(p) => BooleanMapping::from(p.clone()),
            SpecFile::Mapping(f) => f.clone(),
        }
    }

    pub fn serialize(&self) -> String {
        match self {
            SpecFile::Permutation(p) => serialize_permutation(p),
            SpecFile::Mapping(f) => serialize_mapping(f),
        }
    }
}
