//! Maps between modules of the same type, seen as ladder-shaped modules,
//! and their decomposition into matched and unmatched bars.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::field::{One, Scalar, Zero};
use crate::matrix::Matrix;
use crate::persistence::{
    BarOrder, Barcode, BasisChange, CensusError, Chains, Direction, FormError, Interval, PersistenceModule,
    QuiverModule,
};
use crate::reduction::BarcodeModule;
use crate::stabiliser::{blocks_to_element, StabiliserBlocks};
use crate::zigzag::ZigzagModule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Source,
    Target,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Source => "source",
            Side::Target => "target",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LadderError {
    #[error("source and target have different shapes or orientations")]
    QuiverMismatch,
    #[error("expected {expected} vertical maps, found {found}")]
    MapCount { expected: usize, found: usize },
    #[error("φ_{vertex} is {found:?}, expected {expected:?}")]
    MapShape { vertex: usize, expected: (usize, usize), found: (usize, usize) },
    #[error("{side} has {inner} strictly nested in {outer}")]
    NestedBars { side: Side, outer: Interval, inner: Interval },
    #[error("{side} bars {first} and {second} are disjoint but both related to {via}")]
    LinkedDisjointBars { side: Side, first: Interval, second: Interval, via: Interval },
    #[error("invalid ladder: {0}")]
    InvalidLadder(String),
    #[error("reduction needed an operation outside the stabilisers: {0}")]
    IllegalOperation(LegalOp),
    #[error("certificate check failed at vertex {vertex}")]
    CertificateFailed { vertex: usize },
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error("match of source {source_bar} into target {target} violates ⪯")]
    UnrelatedMatch { target: Interval, source_bar: Interval },
}

/// A square of a ladder that fails to commute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NotCommuting {
    pub arrow: usize,
}

impl fmt::Display for NotCommuting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "square over arrow {} does not commute", self.arrow)
    }
}

/// `φ_• : V_• → W_•`, with `φ_i` of size `dim W_i × dim V_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderModule<M: QuiverModule> {
    source: M,
    target: M,
    maps: Vec<Matrix<M::Scalar>>,
}

pub type PersistenceLadder<S> = LadderModule<PersistenceModule<S>>;
pub type ZigzagLadder<S> = LadderModule<ZigzagModule<S>>;

impl<M: QuiverModule> LadderModule<M> {
    /// Checks shapes; commutativity is left to [`validate_ladder`].
    pub fn new(source: M, target: M, maps: Vec<Matrix<M::Scalar>>) -> Result<Self, LadderError> {
        if source.length() != target.length() || source.directions() != target.directions() {
            return Err(LadderError::QuiverMismatch);
        }
        if maps.len() != source.dims().len() {
            return Err(LadderError::MapCount { expected: source.dims().len(), found: maps.len() });
        }
        for (vertex, m) in maps.iter().enumerate() {
            let expected = (target.dims()[vertex], source.dims()[vertex]);
            if m.shape() != expected {
                return Err(LadderError::MapShape { vertex, expected, found: m.shape() });
            }
        }
        Ok(LadderModule { source, target, maps })
    }

    pub fn source(&self) -> &M {
        &self.source
    }

    pub fn target(&self) -> &M {
        &self.target
    }

    pub fn maps(&self) -> &[Matrix<M::Scalar>] {
        &self.maps
    }

    /// The same map written in new bases of source and target.
    pub fn transformed(
        &self,
        source_change: &BasisChange<M::Scalar>,
        target_change: &BasisChange<M::Scalar>,
    ) -> Result<Self, LadderError> {
        let source = self.source.transformed(source_change).map_err(|_| LadderError::QuiverMismatch)?;
        let target = self.target.transformed(target_change).map_err(|_| LadderError::QuiverMismatch)?;
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(k, phi)| &(target_change.component(k) * phi) * source_change.inverse_component(k))
            .collect();
        LadderModule::new(source, target, maps)
    }
}

/// Every square that fails to commute; empty when the ladder is valid.
pub fn validate_ladder<M: QuiverModule>(ladder: &LadderModule<M>) -> Vec<NotCommuting> {
    let directions = ladder.source.directions();
    let (av, aw, phi) = (ladder.source.matrices(), ladder.target.matrices(), &ladder.maps);
    (0..directions.len())
        .filter(|&i| {
            let (from, to) = match directions[i] {
                Direction::Forward => (i, i + 1),
                Direction::Backward => (i + 1, i),
            };
            &phi[to] * &av[i] != &aw[i] * &phi[from]
        })
        .map(|i| NotCommuting { arrow: i + 1 })
        .collect()
}

/// The first pair `(outer, inner)` in ⊴ order with `inner` strictly nested
/// in `outer`.
pub fn check_no_nested<O: BarOrder>(bar: &Barcode, order: &O) -> Result<(), (Interval, Interval)> {
    let mut classes: Vec<Interval> = bar.classes().collect();
    order.sort(&mut classes);
    for (i, &a) in classes.iter().enumerate() {
        for &b in &classes[i + 1..] {
            if order.nested(a, b) {
                return Err((a, b));
            }
        }
    }
    Ok(())
}

/// Looks for two disjoint bars on one side that are both related to one
/// bar on the other side. No operation can separate them, and for zigzag
/// types this happens without any nesting. It never happens for ordinary
/// persistence.
pub fn check_no_linked<O: BarOrder>(source: &Barcode, target: &Barcode, order: &O) -> Result<(), LadderError> {
    let find = |side: &Barcode, other: &Barcode, related: &dyn Fn(Interval, Interval) -> bool| {
        for via in other.classes() {
            let linked: Vec<Interval> = side.classes().filter(|&x| related(via, x)).collect();
            for (i, &a) in linked.iter().enumerate() {
                if let Some(&b) = linked[i + 1..].iter().find(|&&b| !a.intersects(b)) {
                    return Some((a, b, via));
                }
            }
        }
        None
    };
    if let Some((first, second, via)) = find(source, target, &|w, v| order.preceq(w, v)) {
        return Err(LadderError::LinkedDisjointBars { side: Side::Source, first, second, via });
    }
    if let Some((first, second, via)) = find(target, source, &|v, w| order.preceq(w, v)) {
        return Err(LadderError::LinkedDisjointBars { side: Side::Target, first, second, via });
    }
    Ok(())
}

/// `φ` in barcode bases as one matrix: a row per target bar, a column per
/// source bar, each group of equal bars listed consecutively in ⊴ order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMatrix<S> {
    row_classes: Vec<Interval>,
    col_classes: Vec<Interval>,
    body: Matrix<S>,
}

fn expand<O: BarOrder>(bar: &Barcode, order: &O) -> Vec<Interval> {
    let mut classes: Vec<Interval> = bar.classes().collect();
    order.sort(&mut classes);
    classes.into_iter().flat_map(|c| std::iter::repeat_n(c, bar.multiplicity(c))).collect()
}

fn indices_of(classes: &[Interval], class: Interval) -> Vec<usize> {
    (0..classes.len()).filter(|&i| classes[i] == class).collect()
}

impl<S: Scalar> BlockMatrix<S> {
    pub fn zero<O: BarOrder>(target: &Barcode, source: &Barcode, order: &O) -> Self {
        let row_classes = expand(target, order);
        let col_classes = expand(source, order);
        let body = Matrix::zeros(row_classes.len(), col_classes.len());
        BlockMatrix { row_classes, col_classes, body }
    }

    pub fn body(&self) -> &Matrix<S> {
        &self.body
    }

    pub fn row_classes(&self) -> &[Interval] {
        &self.row_classes
    }

    pub fn col_classes(&self) -> &[Interval] {
        &self.col_classes
    }

    /// `X_{target}^{source}`.
    pub fn block(&self, target: Interval, source: Interval) -> Matrix<S> {
        self.body.select(&indices_of(&self.row_classes, target), &indices_of(&self.col_classes, source))
    }

    pub fn set_block(&mut self, target: Interval, source: Interval, block: &Matrix<S>) -> Result<(), LadderError> {
        let rows = indices_of(&self.row_classes, target);
        let cols = indices_of(&self.col_classes, source);
        if block.shape() != (rows.len(), cols.len()) {
            return Err(LadderError::InvalidLadder(format!("block ({target}, {source}) has the wrong shape")));
        }
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                self.body.set(r, c, block.get(i, j).clone());
            }
        }
        Ok(())
    }

    pub fn target_barcode(&self) -> Barcode {
        self.row_classes.iter().map(|&c| (c, 1)).collect()
    }

    pub fn source_barcode(&self) -> Barcode {
        self.col_classes.iter().map(|&c| (c, 1)).collect()
    }
}

/// Reads the block matrix of a ladder whose modules are in barcode form.
///
/// Fails if an entry changes along the overlap of its two bars or sits in
/// a block with `target ⋠ source`.
pub fn to_block_matrix<M: BarcodeModule>(ladder: &LadderModule<M>) -> Result<BlockMatrix<M::Scalar>, LadderError> {
    let order = ladder.source.bar_order();
    let directions = ladder.source.directions();
    let trace = |m: &M| {
        Chains::trace(m.dims(), &directions, m.matrices())
            .map_err(|e: FormError| LadderError::InvalidLadder(e.to_string()))
    };
    let (vc, wc) = (trace(&ladder.source)?, trace(&ladder.target)?);
    read_blocks(&ladder.maps, &vc, &wc, &order)
}

fn read_blocks<S: Scalar, O: BarOrder>(
    maps: &[Matrix<S>],
    source: &Chains,
    target: &Chains,
    order: &O,
) -> Result<BlockMatrix<S>, LadderError> {
    let mut x = BlockMatrix::zero(&target.barcode(), &source.barcode(), order);
    for r in target.classes() {
        for c in source.classes() {
            let Some(overlap) = r.intersection(c) else { continue };
            let read = |k: usize| maps[k].select(&target.positions_at(r, k), &source.positions_at(c, k));
            let first = read(overlap.start());
            if (overlap.start() + 1..=overlap.end()).any(|k| read(k) != first) {
                return Err(LadderError::InvalidLadder(format!("block ({r}, {c}) changes along its overlap")));
            }
            if !order.preceq(r, c) {
                if !first.is_zero() {
                    return Err(LadderError::InvalidLadder(format!("block ({r}, {c}) must vanish")));
                }
                continue;
            }
            x.set_block(r, c, &first)?;
        }
    }
    Ok(x)
}

/// `φ_k` assembled from block data along the given chain layouts.
fn assemble<S: Scalar>(x: &BlockMatrix<S>, source: &Chains, target: &Chains) -> Vec<Matrix<S>> {
    let mut maps: Vec<Matrix<S>> = target
        .dims()
        .iter()
        .zip(source.dims())
        .map(|(&rows, &cols)| Matrix::zeros(rows, cols))
        .collect();
    let copy_of = |classes: &[Interval], i: usize| classes[..i].iter().filter(|&&c| c == classes[i]).count();
    for (y, &r) in x.row_classes.iter().enumerate() {
        for (z, &c) in x.col_classes.iter().enumerate() {
            let v = x.body.get(y, z);
            if v.is_zero() {
                continue;
            }
            let Some(overlap) = r.intersection(c) else { continue };
            let (my, mz) = (copy_of(&x.row_classes, y), copy_of(&x.col_classes, z));
            for k in overlap.start()..=overlap.end() {
                let row = target.instances(r)[my][k - r.start()];
                let col = source.instances(c)[mz][k - c.start()];
                maps[k].set(row, col, v.clone());
            }
        }
    }
    maps
}

/// The ladder between canonical modules whose map has the given blocks.
pub fn ladder_from_blocks<M: BarcodeModule>(
    x: &BlockMatrix<M::Scalar>,
    order: &M::Order,
) -> Result<LadderModule<M>, LadderError> {
    let (sb, tb) = (x.source_barcode(), x.target_barcode());
    for (y, &r) in x.row_classes.iter().enumerate() {
        for (z, &c) in x.col_classes.iter().enumerate() {
            if !x.body.get(y, z).is_zero() && !order.preceq(r, c) {
                return Err(LadderError::UnrelatedMatch { target: r, source_bar: c });
            }
        }
    }
    let source = M::canonical(&sb, order)?;
    let target = M::canonical(&tb, order)?;
    let maps = assemble(x, &Chains::canonical(&sb, order)?, &Chains::canonical(&tb, order)?);
    LadderModule::new(source, target, maps)
}

/// Multiplicities of matched pairs `(target, source)` and of unmatched bars.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LadderDecomposition {
    pub matches: BTreeMap<(Interval, Interval), usize>,
    pub unmatched_source: Barcode,
    pub unmatched_target: Barcode,
}

impl LadderDecomposition {
    pub fn source_barcode(&self) -> Barcode {
        let mut bar = self.unmatched_source.clone();
        for (&(_, s), &n) in &self.matches {
            bar.insert(s, n);
        }
        bar
    }

    pub fn target_barcode(&self) -> Barcode {
        let mut bar = self.unmatched_target.clone();
        for (&(t, _), &n) in &self.matches {
            bar.insert(t, n);
        }
        bar
    }

    /// Every match must be ⪯-related.
    pub fn check<O: BarOrder>(&self, order: &O) -> Result<(), LadderError> {
        for &(target, source_bar) in self.matches.keys() {
            if !order.preceq(target, source_bar) {
                return Err(LadderError::UnrelatedMatch { target, source_bar });
            }
        }
        Ok(())
    }

    /// The block matrix of the matched form: one 1 per matched pair.
    pub fn block_matrix<S: Scalar, O: BarOrder>(&self, order: &O) -> BlockMatrix<S> {
        let mut x = BlockMatrix::zero(&self.target_barcode(), &self.source_barcode(), order);
        let mut next_row: BTreeMap<Interval, usize> = BTreeMap::new();
        let mut next_col: BTreeMap<Interval, usize> = BTreeMap::new();
        let mut pairs: Vec<(Interval, Interval)> = self.matches.keys().copied().collect();
        pairs.sort_by(|a, b| order.compare(a.1, b.1).then(order.compare(a.0, b.0)));
        for (t, s) in pairs {
            for _ in 0..self.matches[&(t, s)] {
                let rt = next_row.entry(t).or_insert(0);
                let cs = next_col.entry(s).or_insert(0);
                let y = indices_of(&x.row_classes, t)[*rt];
                let z = indices_of(&x.col_classes, s)[*cs];
                x.body.set(y, z, S::one());
                *rt += 1;
                *cs += 1;
            }
        }
        x
    }
}

impl fmt::Display for LadderDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (&(t, s), &n) in &self.matches {
            writeln!(f, "R {} {} {} {} {n}", t.start(), t.end(), s.start(), s.end())?;
        }
        for (bar, n) in self.unmatched_source.iter() {
            writeln!(f, "I+ {} {} {n}", bar.start(), bar.end())?;
        }
        for (bar, n) in self.unmatched_target.iter() {
            writeln!(f, "I- {} {} {n}", bar.start(), bar.end())?;
        }
        Ok(())
    }
}

/// The direct sum of the summands listed in `decomposition`, written in
/// canonical bases.
pub fn synthesize_ladder<M: BarcodeModule>(
    decomposition: &LadderDecomposition,
    order: &M::Order,
) -> Result<LadderModule<M>, LadderError> {
    decomposition.check(order)?;
    ladder_from_blocks(&decomposition.block_matrix(order), order)
}

/// An operation applied to the block matrix during the reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LegalOp {
    /// Rows or columns mixed within one class.
    Diagonal { side: Side, class: Interval },
    /// Columns of source bar `modified` changed by columns of `using`.
    SourceAdd { modified: Interval, using: Interval },
    /// Rows of target bar `modified` changed by rows of `using`.
    TargetAdd { modified: Interval, using: Interval },
}

impl LegalOp {
    pub fn is_legal<O: BarOrder>(&self, order: &O) -> bool {
        match *self {
            LegalOp::Diagonal { .. } => true,
            LegalOp::SourceAdd { modified, using } => order.preceq(using, modified),
            LegalOp::TargetAdd { modified, using } => order.preceq(modified, using),
        }
    }
}

impl fmt::Display for LegalOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LegalOp::Diagonal { side, class } => write!(f, "{side} diagonal {class}"),
            LegalOp::SourceAdd { modified, using } => write!(f, "source {modified} += {using}"),
            LegalOp::TargetAdd { modified, using } => write!(f, "target {modified} += {using}"),
        }
    }
}

/// A decomposition together with the bases that exhibit it.
#[derive(Clone, Debug)]
pub struct LadderReduction<S> {
    pub decomposition: LadderDecomposition,
    /// New bases of the source; together with `target_change` they bring
    /// both modules to canonical form and `φ` to `matched`.
    pub source_change: BasisChange<S>,
    pub target_change: BasisChange<S>,
    /// `φ` in the new bases: at most one 1 per row and column.
    pub matched: Vec<Matrix<S>>,
    pub ops: Vec<LegalOp>,
}

/// Basis change to the canonical ordered barcode basis, and the layout.
fn normalize<M: BarcodeModule>(m: &M, order: &M::Order) -> Result<(BasisChange<M::Scalar>, Chains), LadderError> {
    let reduced = m.reduce();
    let traced = Chains::trace(m.dims(), &m.directions(), &reduced.reduced)
        .map_err(|e| LadderError::InvalidLadder(e.to_string()))?;
    let canonical = Chains::canonical(&traced.barcode(), order)?;
    let mut perms: Vec<Matrix<M::Scalar>> = m.dims().iter().map(|&n| Matrix::zeros(n, n)).collect();
    for class in traced.classes() {
        for (from, to) in traced.instances(class).iter().zip(canonical.instances(class)) {
            for (i, (&old, &new)) in from.iter().zip(to).enumerate() {
                perms[class.start() + i].set(new, old, M::Scalar::one());
            }
        }
    }
    let inverses = perms.iter().map(Matrix::transpose).collect();
    let p = BasisChange::from_parts_unchecked(perms, inverses);
    let change = p.compose(&reduced.change).expect("same dimensions");
    Ok((change, canonical))
}

/// Reduction of the block matrix by stabiliser operations, tracking the
/// accumulated operations on both sides.
struct Sweep<'a, S, O> {
    order: &'a O,
    rows: Vec<Interval>,
    cols: Vec<Interval>,
    x: Matrix<S>,
    /// Inverse of the source stabiliser element, as a block matrix.
    h_inv: Matrix<S>,
    /// Target stabiliser element.
    k: Matrix<S>,
    ops: Vec<LegalOp>,
}

impl<S: Scalar, O: BarOrder> Sweep<'_, S, O> {
    fn log(&mut self, op: LegalOp) -> Result<(), LadderError> {
        if !op.is_legal(self.order) {
            return Err(LadderError::IllegalOperation(op));
        }
        self.ops.push(op);
        Ok(())
    }

    /// `Col(z) += μ·Col(x)`.
    fn add_col(&mut self, z: usize, x: usize, mu: &S) -> Result<(), LadderError> {
        let (modified, using) = (self.cols[z], self.cols[x]);
        self.log(if modified == using {
            LegalOp::Diagonal { side: Side::Source, class: modified }
        } else {
            LegalOp::SourceAdd { modified, using }
        })?;
        for y in 0..self.x.rows() {
            if self.order.preceq(self.rows[y], modified) {
                let v = self.x.get(y, z).clone() + mu.clone() * self.x.get(y, x).clone();
                self.x.set(y, z, v);
            }
        }
        for y in 0..self.h_inv.rows() {
            if self.order.preceq(self.cols[y], modified) {
                let v = self.h_inv.get(y, z).clone() + mu.clone() * self.h_inv.get(y, x).clone();
                self.h_inv.set(y, z, v);
            }
        }
        Ok(())
    }

    /// `Row(y) += λ·Row(w)`.
    fn add_row(&mut self, y: usize, w: usize, lambda: &S) -> Result<(), LadderError> {
        let (modified, using) = (self.rows[y], self.rows[w]);
        self.log(if modified == using {
            LegalOp::Diagonal { side: Side::Target, class: modified }
        } else {
            LegalOp::TargetAdd { modified, using }
        })?;
        for z in 0..self.x.cols() {
            if self.order.preceq(modified, self.cols[z]) {
                let v = self.x.get(y, z).clone() + lambda.clone() * self.x.get(w, z).clone();
                self.x.set(y, z, v);
            }
        }
        for z in 0..self.k.cols() {
            if self.order.preceq(modified, self.rows[z]) {
                let v = self.k.get(y, z).clone() + lambda.clone() * self.k.get(w, z).clone();
                self.k.set(y, z, v);
            }
        }
        Ok(())
    }

    fn scale_row(&mut self, y: usize, lambda: &S) -> Result<(), LadderError> {
        self.log(LegalOp::Diagonal { side: Side::Target, class: self.rows[y] })?;
        self.x.scale_row(y, lambda);
        self.k.scale_row(y, lambda);
        Ok(())
    }

    fn run(&mut self) -> Result<(), LadderError> {
        let mut col_classes: Vec<Interval> = self.cols.clone();
        col_classes.dedup();
        let mut row_classes: Vec<Interval> = self.rows.clone();
        row_classes.dedup();
        // pivot_of_row[y] = column of the 1 in row y, once placed.
        let mut pivot_of_row: Vec<Option<usize>> = vec![None; self.rows.len()];
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; self.cols.len()];
        for &c in &col_classes {
            let zs = indices_of(&self.cols, c);
            for &r in row_classes.iter().rev().filter(|&&r| self.order.preceq(r, c)) {
                let ys = indices_of(&self.rows, r);
                // Rows already pivoting to the left: clear them with their pivot columns.
                for &y in &ys {
                    let Some(x) = pivot_of_row[y] else { continue };
                    for &z in &zs {
                        let v = self.x.get(y, z).clone();
                        if !v.is_zero() {
                            self.add_col(z, x, &-v)?;
                        }
                    }
                }
                // Columns already pivoting below: clear them with their pivot rows.
                for &z in &zs {
                    let Some(w) = pivot_of_col[z] else { continue };
                    for &y in &ys {
                        let v = self.x.get(y, z).clone();
                        if !v.is_zero() {
                            self.add_row(y, w, &-v)?;
                        }
                    }
                }
                // Full pivoting on what is left.
                loop {
                    let free_rows: Vec<usize> = ys.iter().copied().filter(|&y| pivot_of_row[y].is_none()).collect();
                    let free_cols: Vec<usize> = zs.iter().copied().filter(|&z| pivot_of_col[z].is_none()).collect();
                    let found = free_cols
                        .iter()
                        .find_map(|&z| free_rows.iter().find(|&&y| !self.x.get(y, z).is_zero()).map(|&y| (y, z)));
                    let Some((y, z)) = found else { break };
                    let inv = self.x.get(y, z).inverse().expect("nonzero");
                    self.scale_row(y, &inv)?;
                    for &y2 in &free_rows {
                        let v = self.x.get(y2, z).clone();
                        if y2 != y && !v.is_zero() {
                            self.add_row(y2, y, &-v)?;
                        }
                    }
                    for &z2 in &free_cols {
                        let v = self.x.get(y, z2).clone();
                        if z2 != z && !v.is_zero() {
                            self.add_col(z2, z, &-v)?;
                        }
                    }
                    pivot_of_row[y] = Some(z);
                    pivot_of_col[z] = Some(y);
                }
            }
        }
        Ok(())
    }
}

fn blocks_from_flat<S: Scalar, O: BarOrder>(
    flat: &Matrix<S>,
    classes: &[Interval],
    bar: &Barcode,
    order: &O,
) -> StabiliserBlocks<S> {
    let mut blocks = StabiliserBlocks::zero(bar, order);
    for (a, b) in blocks.pairs().collect::<Vec<_>>() {
        let block = flat.select(&indices_of(classes, a), &indices_of(classes, b));
        blocks.set(a, b, block).expect("shapes follow the barcode");
    }
    blocks
}

/// Decomposes a ladder into matched pairs and unmatched bars.
///
/// Both modules are first brought to canonical form. The map then becomes a
/// block matrix which is reduced by operations coming from the two
/// stabilisers, until it has at most one 1 in every row and column.
pub fn decompose_ladder<M: BarcodeModule>(ladder: &LadderModule<M>) -> Result<LadderReduction<M::Scalar>, LadderError> {
    if let Some(bad) = validate_ladder(ladder).first() {
        return Err(LadderError::InvalidLadder(bad.to_string()));
    }
    let order = ladder.source.bar_order();
    let (gv, vc) = normalize(&ladder.source, &order)?;
    let (gw, wc) = normalize(&ladder.target, &order)?;
    let (vbar, wbar) = (vc.barcode(), wc.barcode());
    for (side, bar) in [(Side::Source, &vbar), (Side::Target, &wbar)] {
        check_no_nested(bar, &order).map_err(|(outer, inner)| LadderError::NestedBars { side, outer, inner })?;
    }
    check_no_linked(&vbar, &wbar, &order)?;

    let phi: Vec<Matrix<M::Scalar>> = (0..ladder.maps.len())
        .map(|k| &(gw.component(k) * &ladder.maps[k]) * gv.inverse_component(k))
        .collect();
    let x = read_blocks(&phi, &vc, &wc, &order)?;
    let (nw, nv) = x.body.shape();
    let mut sweep = Sweep {
        order: &order,
        rows: x.row_classes.clone(),
        cols: x.col_classes.clone(),
        x: x.body.clone(),
        h_inv: Matrix::identity(nv),
        k: Matrix::identity(nw),
        ops: Vec::new(),
    };
    sweep.run()?;

    let h_inv = blocks_to_element(&blocks_from_flat(&sweep.h_inv, &sweep.cols, &vbar, &order), &vc)
        .map_err(|e| LadderError::InvalidLadder(e.to_string()))?;
    let k = blocks_to_element(&blocks_from_flat(&sweep.k, &sweep.rows, &wbar, &order), &wc)
        .map_err(|e| LadderError::InvalidLadder(e.to_string()))?;
    let source_change = h_inv.inverse().compose(&gv).expect("same dimensions");
    let target_change = k.compose(&gw).expect("same dimensions");

    let mut decomposition = LadderDecomposition::default();
    let mut unmatched_source = vbar.clone();
    let mut unmatched_target = wbar.clone();
    let final_x = BlockMatrix { row_classes: sweep.rows.clone(), col_classes: sweep.cols.clone(), body: sweep.x };
    for y in 0..nw {
        let ones: Vec<usize> = (0..nv).filter(|&z| !final_x.body.get(y, z).is_zero()).collect();
        match ones.as_slice() {
            [] => {}
            [z] if final_x.body.get(y, *z).is_one() => {
                let (t, s) = (final_x.row_classes[y], final_x.col_classes[*z]);
                *decomposition.matches.entry((t, s)).or_insert(0) += 1;
                unmatched_source = remove_one(&unmatched_source, s);
                unmatched_target = remove_one(&unmatched_target, t);
            }
            _ => return Err(LadderError::CertificateFailed { vertex: 0 }),
        }
    }
    decomposition.unmatched_source = unmatched_source;
    decomposition.unmatched_target = unmatched_target;
    if (0..nv).any(|z| (0..nw).filter(|&y| !final_x.body.get(y, z).is_zero()).count() > 1) {
        return Err(LadderError::CertificateFailed { vertex: 0 });
    }

    // Certificate: the new bases give canonical modules and the matched map.
    let matched = assemble(&final_x, &vc, &wc);
    let transformed = ladder.transformed(&source_change, &target_change)?;
    let canonical_source = vc.matrices::<M::Scalar>(&order.directions());
    let canonical_target = wc.matrices::<M::Scalar>(&order.directions());
    if transformed.source.matrices() != canonical_source.as_slice()
        || transformed.target.matrices() != canonical_target.as_slice()
    {
        return Err(LadderError::CertificateFailed { vertex: 0 });
    }
    if let Some(vertex) = (0..matched.len()).find(|&k| transformed.maps[k] != matched[k]) {
        return Err(LadderError::CertificateFailed { vertex });
    }
    Ok(LadderReduction { decomposition, source_change, target_change, matched, ops: sweep.ops })
}

fn remove_one(bar: &Barcode, class: Interval) -> Barcode {
    bar.iter().map(|(b, d)| (b, if b == class { d - 1 } else { d })).collect()
}

/// [`decompose_ladder`] for zigzag modules.
pub fn decompose_ladder_zigzag<S: Scalar>(ladder: &ZigzagLadder<S>) -> Result<LadderReduction<S>, LadderError> {
    decompose_ladder(ladder)
}
