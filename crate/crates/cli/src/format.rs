//! The plain-text module format.
//!
//! ```text
//! # comments run to the end of the line
//! field Q            # or: field Fp 5
//! length 3
//! type fff           # '-' when length is 0; defaults to all forward
//! dims 2 3 2 2
//! matrix 1 3 2
//! 1 0
//! 0 1
//! 0 0
//! ...
//! ```
//!
//! Block headers are `<keyword> <index> <rows> <cols>` followed by the
//! entries in row-major order; line breaks inside a block are not
//! significant. Module files hold `matrix` blocks for arrows `1..=ℓ`, map
//! files hold `map` blocks for vertices `0..=ℓ`, and `basis` blocks written
//! by `reduce --emit-basis` are skipped when a module is read back.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use barcode_core::persistence::{Direction, PersistenceModule};
use barcode_core::zigzag::{ZigzagModule, ZigzagType};
use barcode_core::{Matrix, ModP, Rational, Scalar};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Q,
    Fp(u32),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "Q"),
            Field::Fp(p) => write!(f, "Fp {p}"),
        }
    }
}

/// Scalars that can be read from and written to files over `field`.
pub trait FileScalar: Scalar {
    fn parse_entry(text: &str, field: Field) -> Result<Self, String>;
    fn render_entry(&self, field: Field) -> String;
}

fn parse_fraction(text: &str) -> Result<(BigInt, BigInt), String> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| format!("{text:?} is not a number"))?;
    let den = BigInt::from_str(den).map_err(|_| format!("{text:?} is not a number"))?;
    if den.is_zero() {
        return Err(format!("{text:?} has zero denominator"));
    }
    Ok((num, den))
}

impl FileScalar for Rational {
    fn parse_entry(text: &str, _field: Field) -> Result<Self, String> {
        let (num, den) = parse_fraction(text)?;
        Ok(Rational::new(num, den))
    }

    fn render_entry(&self, _field: Field) -> String {
        self.to_string()
    }
}

impl FileScalar for ModP {
    fn parse_entry(text: &str, field: Field) -> Result<Self, String> {
        let Field::Fp(p) = field else { unreachable!("ModP is only read over Fp") };
        let (num, den) = parse_fraction(text)?;
        let residue = |x: BigInt| {
            let m = BigInt::from(p);
            let r = ((x % &m) + &m) % &m;
            ModP::new(r.to_i64().expect("residue fits"), p).map_err(|e| e.to_string())
        };
        let den = residue(den)?;
        let inv = den.inverse().ok_or_else(|| format!("{text:?} divides by a multiple of {p}"))?;
        Ok(residue(num)? * inv)
    }

    fn render_entry(&self, field: Field) -> String {
        let Field::Fp(p) = field else { unreachable!("ModP is only written over Fp") };
        self.value().rem_euclid(p as i64).to_string()
    }
}

#[derive(Debug, Clone)]
struct Token {
    line: usize,
    text: String,
}

#[derive(Debug, Clone)]
pub struct RawBlock {
    pub keyword: String,
    pub index: usize,
    pub rows: usize,
    pub cols: usize,
    pub line: usize,
    entries: Vec<Token>,
}

impl RawBlock {
    fn to_matrix<S: FileScalar>(&self, field: Field) -> Result<Matrix<S>, ParseError> {
        let data = self
            .entries
            .iter()
            .map(|t| S::parse_entry(&t.text, field).map_err(|message| ParseError { line: t.line, message }))
            .collect::<Result<Vec<S>, _>>()?;
        Ok(Matrix::from_vec(self.rows, self.cols, data).expect("entry count checked while reading"))
    }
}

/// A file split into header fields and blocks, before scalars are read.
#[derive(Debug, Clone)]
pub struct RawFile {
    pub field: Field,
    pub length: Option<(usize, usize)>,
    pub tau: Option<(ZigzagType, usize)>,
    pub dims: Option<(Vec<usize>, usize)>,
    pub blocks: Vec<RawBlock>,
    /// Line of the last token, for errors about missing content.
    last_line: usize,
}

fn parse_number<T: FromStr>(token: &Token, what: &str) -> Result<T, ParseError> {
    token.text.parse().or_else(|_| err(token.line, format!("{what}: expected a number, found {:?}", token.text)))
}

impl RawFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines: Vec<(usize, Vec<Token>)> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let content = line.split('#').next().unwrap_or("");
            let tokens: Vec<Token> =
                content.split_whitespace().map(|t| Token { line: i + 1, text: t.to_string() }).collect();
            if !tokens.is_empty() {
                lines.push((i + 1, tokens));
            }
        }
        let last_line = lines.last().map_or(0, |(l, _)| *l);
        let mut field = None;
        let mut out = RawFile { field: Field::Q, length: None, tau: None, dims: None, blocks: Vec::new(), last_line };
        let mut rest = lines.into_iter().peekable();
        while let Some((line, tokens)) = rest.next() {
            let keyword = tokens[0].text.as_str();
            let args = &tokens[1..];
            match keyword {
                "field" => {
                    if field.is_some() {
                        return err(line, "field given twice");
                    }
                    field = Some(match args {
                        [q] if q.text == "Q" => Field::Q,
                        [fp, p] if fp.text == "Fp" => {
                            let p: u32 = parse_number(p, "field")?;
                            ModP::new(0, p).map_err(|e| ParseError { line, message: e.to_string() })?;
                            Field::Fp(p)
                        }
                        _ => return err(line, "expected `field Q` or `field Fp <prime>`"),
                    });
                }
                "length" => {
                    let [n] = args else { return err(line, "expected `length <n>`") };
                    out.length = Some((parse_number(n, "length")?, line));
                }
                "type" => {
                    let [t] = args else { return err(line, "expected `type <string over f,q>`") };
                    let tau = t.text.parse().map_err(|e| ParseError { line, message: format!("type: {e}") })?;
                    out.tau = Some((tau, line));
                }
                "dims" => {
                    let dims = args.iter().map(|t| parse_number(t, "dims")).collect::<Result<_, _>>()?;
                    out.dims = Some((dims, line));
                }
                "matrix" | "map" | "basis" => {
                    let [i, r, c] = args else { return err(line, format!("expected `{keyword} <index> <rows> <cols>`")) };
                    let (index, rows, cols): (usize, usize, usize) =
                        (parse_number(i, keyword)?, parse_number(r, keyword)?, parse_number(c, keyword)?);
                    let mut entries: Vec<Token> = Vec::new();
                    while entries.len() < rows * cols {
                        let Some((_, more)) = rest.next_if(|(_, t)| is_entry(&t[0].text)) else {
                            let at = rest.peek().map_or(last_line, |(l, _)| *l);
                            return err(at, format!("{keyword} {index}: expected {} entries, found {}", rows * cols, entries.len()));
                        };
                        entries.extend(more);
                    }
                    if entries.len() > rows * cols {
                        let extra = &entries[rows * cols];
                        return err(extra.line, format!("{keyword} {index}: more than {} entries", rows * cols));
                    }
                    out.blocks.push(RawBlock { keyword: keyword.to_string(), index, rows, cols, line, entries });
                }
                _ if is_entry(keyword) => return err(line, "entries outside a block"),
                _ => return err(line, format!("unknown keyword {keyword:?}")),
            }
        }
        out.field = field.ok_or(ParseError { line: 1, message: "missing `field` line".into() })?;
        Ok(out)
    }

    fn blocks_of<'a>(&'a self, keyword: &'a str) -> impl Iterator<Item = &'a RawBlock> + 'a {
        self.blocks.iter().filter(move |b| b.keyword == keyword)
    }

    fn require_length(&self) -> Result<usize, ParseError> {
        self.length.map(|(n, _)| n).ok_or(ParseError { line: self.last_line, message: "missing `length` line".into() })
    }
}

fn is_entry(token: &str) -> bool {
    token.starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '+')
}

/// The expected shape of arrow `i` (1-based).
fn arrow_shape(dims: &[usize], i: usize, dir: Direction) -> (usize, usize) {
    match dir {
        Direction::Forward => (dims[i], dims[i - 1]),
        Direction::Backward => (dims[i - 1], dims[i]),
    }
}

/// A module read from a file: `dims`, orientation and one matrix per arrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleFile<S> {
    pub field: Field,
    pub tau: ZigzagType,
    pub dims: Vec<usize>,
    pub matrices: Vec<Matrix<S>>,
}

impl<S: FileScalar> ModuleFile<S> {
    pub fn from_raw(raw: &RawFile) -> Result<Self, ParseError> {
        let length = raw.require_length()?;
        let Some((dims, dims_line)) = raw.dims.clone() else {
            return err(raw.last_line, "missing `dims` line");
        };
        if dims.len() != length + 1 {
            return err(dims_line, format!("dims lists {} spaces; length {length} needs {}", dims.len(), length + 1));
        }
        let tau = match &raw.tau {
            Some((tau, line)) if tau.len() != length => {
                return err(*line, format!("type has {} arrows; length is {length}", tau.len()));
            }
            Some((tau, _)) => tau.clone(),
            None => ZigzagType::forward(length),
        };
        let mut matrices = Vec::with_capacity(length);
        for (k, block) in raw.blocks_of("matrix").enumerate() {
            if block.index != k + 1 || k >= length {
                return err(block.line, format!("expected matrix {} here, found matrix {}", k + 1, block.index));
            }
            let expected = arrow_shape(&dims, k + 1, tau.arrows()[k]);
            if (block.rows, block.cols) != expected {
                return err(
                    block.line,
                    format!("matrix {} is {}x{}; dims require {}x{}", k + 1, block.rows, block.cols, expected.0, expected.1),
                );
            }
            matrices.push(block.to_matrix(raw.field)?);
        }
        if matrices.len() < length {
            return err(raw.last_line, format!("missing matrix {}", matrices.len() + 1));
        }
        if let Some(b) = raw.blocks.iter().find(|b| b.keyword == "map") {
            return err(b.line, "map blocks belong in a map file");
        }
        Ok(ModuleFile { field: raw.field, tau, dims, matrices })
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        Self::from_raw(&RawFile::parse(text)?)
    }

    pub fn persistence(&self) -> PersistenceModule<S> {
        PersistenceModule::new(self.dims.clone(), self.matrices.clone()).expect("shapes checked while parsing")
    }

    pub fn zigzag(&self) -> ZigzagModule<S> {
        ZigzagModule::new(self.dims.clone(), self.tau.clone(), self.matrices.clone())
            .expect("shapes checked while parsing")
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "field {}", self.field).unwrap();
        writeln!(out, "length {}", self.dims.len() - 1).unwrap();
        writeln!(out, "type {}", self.tau).unwrap();
        let dims: Vec<String> = self.dims.iter().map(ToString::to_string).collect();
        writeln!(out, "dims {}", dims.join(" ")).unwrap();
        for (i, m) in self.matrices.iter().enumerate() {
            out.push_str(&render_block("matrix", i + 1, m, self.field));
        }
        out
    }
}

/// The vertical maps `φ_0, …, φ_ℓ` of a ladder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapFile<S> {
    pub field: Field,
    pub maps: Vec<Matrix<S>>,
}

impl<S: FileScalar> MapFile<S> {
    pub fn from_raw(raw: &RawFile) -> Result<Self, ParseError> {
        let length = raw.require_length()?;
        let mut maps = Vec::with_capacity(length + 1);
        for (k, block) in raw.blocks_of("map").enumerate() {
            if block.index != k || k > length {
                return err(block.line, format!("expected map {k} here, found map {}", block.index));
            }
            maps.push(block.to_matrix(raw.field)?);
        }
        if maps.len() <= length {
            return err(raw.last_line, format!("missing map {}", maps.len()));
        }
        if let Some(b) = raw.blocks.iter().find(|b| b.keyword != "map") {
            return err(b.line, format!("unexpected {} block in a map file", b.keyword));
        }
        Ok(MapFile { field: raw.field, maps })
    }

    pub fn render(&self) -> String {
        let mut out = format!("field {}\nlength {}\n", self.field, self.maps.len() - 1);
        for (i, m) in self.maps.iter().enumerate() {
            out.push_str(&render_block("map", i, m, self.field));
        }
        out
    }
}

/// One block with a row per line.
pub fn render_block<S: FileScalar>(keyword: &str, index: usize, m: &Matrix<S>, field: Field) -> String {
    let mut out = format!("{keyword} {index} {} {}\n", m.rows(), m.cols());
    for r in (0..m.rows()).filter(|_| m.cols() > 0) {
        let row: Vec<String> = m.row(r).iter().map(|x| x.render_entry(field)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use barcode_core::persistence::QuiverModule;
    use num_traits::Signed;

    const THREE_BARS: &str = "\
field Q
length 3
type fff
dims 2 3 2 2
matrix 1 3 2
1 0
0 1
0 0
matrix 2 2 3
1 0 0
0 0 1
matrix 3 2 2
1 0
0 1
";

    #[test]
    fn round_trip_is_byte_stable() {
        let m = ModuleFile::<Rational>::parse(THREE_BARS).unwrap();
        assert_eq!(m.render(), THREE_BARS);
        assert_eq!(m.persistence().dims(), &[2, 3, 2, 2]);
    }

    #[test]
    fn entries_may_span_lines_and_carry_comments() {
        let text = "field Fp 5 # small\nlength 1\ndims 2 1\nmatrix 1 1 2\n7\n-1 # wraps\n";
        let m = ModuleFile::<ModP>::parse(text).unwrap();
        assert_eq!(m.render(), "field Fp 5\nlength 1\ntype f\ndims 2 1\nmatrix 1 1 2\n2 4\n");
        assert_eq!(ModP::parse_entry("1/2", Field::Fp(5)).unwrap(), ModP::new(3, 5).unwrap());
        assert!(ModP::parse_entry("1/5", Field::Fp(5)).is_err());
    }

    #[test]
    fn rationals_are_normalized() {
        let x = Rational::parse_entry("4/-6", Field::Q).unwrap();
        assert!(x.is_negative());
        assert_eq!(x.render_entry(Field::Q), "-2/3");
        assert_eq!(Rational::parse_entry("6/3", Field::Q).unwrap().render_entry(Field::Q), "2");
        assert!(Rational::parse_entry("1/0", Field::Q).is_err());
        assert!(Rational::parse_entry("x", Field::Q).is_err());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad_dims = THREE_BARS.replace("dims 2 3 2 2", "dims 2 3 2");
        let e = ModuleFile::<Rational>::parse(&bad_dims).unwrap_err();
        assert_eq!(e.line, 4);
        assert!(e.message.contains("dims lists 3 spaces"), "{e}");

        let bad_shape = THREE_BARS.replace("matrix 2 2 3", "matrix 2 3 2");
        assert_eq!(ModuleFile::<Rational>::parse(&bad_shape).unwrap_err().line, 9);

        let short = THREE_BARS.replace("0 0 1\n", "0 0\n");
        let e = ModuleFile::<Rational>::parse(&short).unwrap_err();
        assert_eq!(e.line, 12);
        assert!(e.message.contains("expected 6 entries"), "{e}");

        let e = ModuleFile::<Rational>::parse("length 0\ndims 1\n").unwrap_err();
        assert!(e.message.contains("field"));
        assert_eq!(RawFile::parse("field Fp 6\n").unwrap_err().line, 1);
        assert_eq!(RawFile::parse("field Q\nlength 1\nwat 3\n").unwrap_err().line, 3);
    }

    #[test]
    fn backward_arrows_swap_shapes() {
        let text = "field Q\nlength 2\ntype fq\ndims 1 2 3\nmatrix 1 2 1\n1\n0\nmatrix 2 2 3\n1 0 0\n0 1 0\n";
        let m = ModuleFile::<Rational>::parse(text).unwrap();
        assert_eq!(m.render(), text);
        assert!(ModuleFile::<Rational>::parse(&text.replace("type fq", "type ff")).is_err());
    }

    #[test]
    fn map_files() {
        let text = "field Q\nlength 1\nmap 0 1 1\n1\nmap 1 0 2\n";
        let maps = MapFile::<Rational>::from_raw(&RawFile::parse(text).unwrap()).unwrap();
        assert_eq!(maps.maps.len(), 2);
        assert_eq!(maps.render(), text);
        assert!(MapFile::<Rational>::from_raw(&RawFile::parse("field Q\nlength 1\nmap 0 0 0\n").unwrap()).is_err());
    }
}
