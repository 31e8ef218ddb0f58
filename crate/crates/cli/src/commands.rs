//! The commands, each returning the text it writes to stdout.

use std::fmt::Write as _;

use barcode_core::ladder::{decompose_ladder, LadderError, LadderModule};
use barcode_core::oracle::random::{random_module, random_zigzag, ModuleBounds, SmallRationals, UniformModP};
use barcode_core::oracle::verify_reduction;
use barcode_core::persistence::{BarOrder, Barcode, QuiverModule, StandardOrder};
use barcode_core::reduction::{comp_pers_with, BarcodeModule, ReductionOptions, ReductionResult};
use barcode_core::stabiliser::{stab_dimension, stab_dimension_zigzag};
use barcode_core::zigzag::{comp_pers_zigzag_with, TauOrder, ZigzagModule};
use barcode_core::{ModP, Rational};
use thiserror::Error;

use crate::format::{render_block, Field, FileScalar, MapFile, ModuleFile, ParseError, RawFile};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Input(String),
    #[error("certificate failed: {0}")]
    Certificate(String),
    #[error("NESTED {0}")]
    Nested(String),
    #[error("LINKED {0}")]
    Linked(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Io(_) | CliError::Input(_) => 2,
            CliError::Certificate(_) => 3,
            CliError::Nested(_) | CliError::Linked(_) => 4,
        }
    }
}

/// A file read into memory and split into fields and blocks.
pub struct Input {
    pub path: String,
    pub raw: RawFile,
}

impl Input {
    pub fn read(path: &str) -> Result<Self, CliError> {
        let text = if path == "-" {
            std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Io(format!("stdin: {e}")))?
        } else {
            std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?
        };
        Self::from_text(path, &text)
    }

    pub fn from_text(path: &str, text: &str) -> Result<Self, CliError> {
        let raw = RawFile::parse(text).map_err(|source| CliError::Parse { path: path.into(), source })?;
        Ok(Input { path: path.into(), raw })
    }

    fn module<S: FileScalar>(&self) -> Result<ModuleFile<S>, CliError> {
        ModuleFile::from_raw(&self.raw).map_err(|source| CliError::Parse { path: self.path.clone(), source })
    }

    /// The module, refusing types with backward arrows.
    fn plain<S: FileScalar>(&self, zigzag_command: &str) -> Result<ModuleFile<S>, CliError> {
        let m = self.module()?;
        if !m.tau.is_all_forward() {
            return Err(CliError::Input(format!(
                "{}: type {} has backward arrows; use `{zigzag_command}`",
                self.path, m.tau
            )));
        }
        Ok(m)
    }
}

/// Runs `$body` with `S` bound to the scalar type of `$field`.
macro_rules! over_field {
    ($field:expr, $f:ident ( $($arg:expr),* )) => {
        match $field {
            Field::Q => $f::<Rational>($($arg),*),
            Field::Fp(_) => $f::<ModP>($($arg),*),
        }
    };
}

/// Reduces and checks the result before anything is printed.
fn certified<M: QuiverModule>(
    module: &M,
    reduce: impl FnOnce(&M) -> ReductionResult<M::Scalar>,
) -> Result<(ReductionResult<M::Scalar>, Barcode), CliError> {
    let result = reduce(module);
    let bar = verify_reduction(module, &result).map_err(|v| CliError::Certificate(v.to_string()))?;
    Ok((result, bar))
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ReduceFlags {
    pub emit_basis: bool,
    pub emit_trace: bool,
}

fn render_reduction<S: FileScalar>(file: &ModuleFile<S>, result: &ReductionResult<S>, flags: ReduceFlags) -> String {
    let reduced = ModuleFile { matrices: result.reduced.clone(), ..file.clone() };
    let mut out = reduced.render();
    if flags.emit_basis {
        for (i, g) in result.change.components().iter().enumerate() {
            out.push_str(&render_block("basis", i, g, file.field));
        }
    }
    if let Some(trace) = result.trace.as_ref().filter(|_| flags.emit_trace) {
        for step in trace {
            writeln!(out, "# trace {step}").unwrap();
        }
    }
    out
}

pub fn reduce(input: &Input, flags: ReduceFlags) -> Result<String, CliError> {
    fn go<S: FileScalar>(input: &Input, flags: ReduceFlags) -> Result<String, CliError> {
        let file = input.plain::<S>("zigzag-reduce")?;
        let options = ReductionOptions { record_trace: flags.emit_trace };
        let (result, _) = certified(&file.persistence(), |m| comp_pers_with(m, options, |_, _| {}))?;
        Ok(render_reduction(&file, &result, flags))
    }
    over_field!(input.raw.field, go(input, flags))
}

pub fn zigzag_reduce(input: &Input, flags: ReduceFlags) -> Result<String, CliError> {
    fn go<S: FileScalar>(input: &Input, flags: ReduceFlags) -> Result<String, CliError> {
        let file = input.module::<S>()?;
        let options = ReductionOptions { record_trace: flags.emit_trace };
        let (result, _) = certified(&file.zigzag(), |m| comp_pers_zigzag_with(m, options))?;
        Ok(render_reduction(&file, &result, flags))
    }
    over_field!(input.raw.field, go(input, flags))
}

fn render_barcode<O: BarOrder>(bar: &Barcode, order: &O) -> String {
    let mut classes: Vec<_> = bar.classes().collect();
    order.sort(&mut classes);
    classes
        .into_iter()
        .map(|c| format!("{} {} {}\n", c.start(), c.end(), bar.multiplicity(c)))
        .collect()
}

fn plain_barcode<S: FileScalar>(input: &Input) -> Result<(Barcode, usize), CliError> {
    let file = input.plain::<S>("zigzag-barcode")?;
    let module = file.persistence();
    let (_, bar) = certified(&module, BarcodeModule::reduce)?;
    Ok((bar, module.length()))
}

fn zigzag_barcode_of<S: FileScalar>(input: &Input) -> Result<(Barcode, TauOrder), CliError> {
    let file = input.module::<S>()?;
    let module = file.zigzag();
    let (_, bar) = certified(&module, BarcodeModule::reduce)?;
    Ok((bar, module.order()))
}

/// Lines `start end multiplicity`, in the order ⊴.
pub fn barcode(input: &Input) -> Result<String, CliError> {
    let (bar, length) = over_field!(input.raw.field, plain_barcode(input))?;
    Ok(render_barcode(&bar, &StandardOrder::new(length)))
}

/// Lines `start end multiplicity`, in the order ⊴ of the file's type.
pub fn zigzag_barcode(input: &Input) -> Result<String, CliError> {
    let (bar, order) = over_field!(input.raw.field, zigzag_barcode_of(input))?;
    Ok(render_barcode(&bar, &order))
}

pub fn stab_dim(input: &Input) -> Result<String, CliError> {
    let (bar, length) = over_field!(input.raw.field, plain_barcode(input))?;
    Ok(format!("{}\n", stab_dimension(&bar, &StandardOrder::new(length))))
}

pub fn zigzag_stab_dim(input: &Input) -> Result<String, CliError> {
    let (bar, order) = over_field!(input.raw.field, zigzag_barcode_of(input))?;
    Ok(format!("{}\n", stab_dimension_zigzag(&bar, order.tau())))
}

fn ladder_error(e: LadderError) -> CliError {
    match e {
        LadderError::NestedBars { side, outer, inner } => {
            CliError::Nested(format!("{side} ({outer},{inner}): {inner} is strictly nested in {outer}"))
        }
        LadderError::LinkedDisjointBars { side, first, second, via } => CliError::Linked(format!(
            "{side} ({first},{second}): disjoint bars both related to {via}; the map has no matching decomposition"
        )),
        LadderError::IllegalOperation(_) | LadderError::CertificateFailed { .. } => CliError::Certificate(e.to_string()),
        other => CliError::Input(other.to_string()),
    }
}

fn ladder_files<S: FileScalar>(
    source: &Input,
    target: &Input,
    map: &Input,
) -> Result<(ModuleFile<S>, ModuleFile<S>, MapFile<S>), CliError> {
    for other in [target, map] {
        if other.raw.field != source.raw.field {
            return Err(CliError::Input(format!(
                "{} is over {} but {} is over {}",
                source.path, source.raw.field, other.path, other.raw.field
            )));
        }
    }
    let maps = MapFile::from_raw(&map.raw).map_err(|e| CliError::Parse { path: map.path.clone(), source: e })?;
    Ok((source.module()?, target.module()?, maps))
}

fn decompose<M: BarcodeModule>(source: M, target: M, maps: MapFile<M::Scalar>) -> Result<String, CliError>
where
    M::Scalar: FileScalar,
{
    let ladder = LadderModule::new(source, target, maps.maps).map_err(ladder_error)?;
    let reduction = decompose_ladder(&ladder).map_err(ladder_error)?;
    Ok(reduction.decomposition.to_string())
}

/// Matching lines `R`, `I+` and `I-` for a map of persistence modules.
pub fn ladder(source: &Input, target: &Input, map: &Input) -> Result<String, CliError> {
    fn go<S: FileScalar>(source: &Input, target: &Input, map: &Input) -> Result<String, CliError> {
        let (v, w, maps) = ladder_files::<S>(source, target, map)?;
        for (file, input) in [(&v, source), (&w, target)] {
            if !file.tau.is_all_forward() {
                return Err(CliError::Input(format!("{}: type {} has backward arrows; use `zigzag-ladder`", input.path, file.tau)));
            }
        }
        decompose(v.persistence(), w.persistence(), maps)
    }
    over_field!(source.raw.field, go(source, target, map))
}

pub fn zigzag_ladder(source: &Input, target: &Input, map: &Input) -> Result<String, CliError> {
    fn go<S: FileScalar>(source: &Input, target: &Input, map: &Input) -> Result<String, CliError> {
        let (v, w, maps) = ladder_files::<S>(source, target, map)?;
        decompose(v.zigzag(), w.zigzag(), maps)
    }
    over_field!(source.raw.field, go(source, target, map))
}

#[derive(Clone, Copy, Debug)]
pub struct GenOptions {
    pub seed: u64,
    pub field: Field,
    pub bounds: ModuleBounds,
    pub zigzag: bool,
}

/// A random module file, reproducible from the seed.
pub fn generate(options: GenOptions) -> String {
    let GenOptions { seed, field, bounds, zigzag } = options;
    match field {
        Field::Q => {
            let sampler = SmallRationals::default();
            let m = if zigzag { random_zigzag(seed, bounds, &sampler) } else { random_module(seed, bounds, &sampler).into() };
            file_of(field, &m).render()
        }
        Field::Fp(p) => {
            let sampler = UniformModP(p);
            let m = if zigzag { random_zigzag(seed, bounds, &sampler) } else { random_module(seed, bounds, &sampler).into() };
            file_of(field, &m).render()
        }
    }
}

fn file_of<S: FileScalar>(field: Field, m: &ZigzagModule<S>) -> ModuleFile<S> {
    ModuleFile { field, tau: m.tau().clone(), dims: m.dims().to_vec(), matrices: m.matrices().to_vec() }
}
