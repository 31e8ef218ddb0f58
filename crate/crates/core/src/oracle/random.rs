//! Seeded random instances. Every generator is a pure function of its seed.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{ModP, Rational, Scalar};
use crate::ladder::{check_no_linked, LadderDecomposition, LadderModule};
use crate::matrix::{ElemOp, Matrix};
use crate::persistence::{
    BarOrder, Barcode, BasisChange, Direction, Interval, PersistenceModule, QuiverModule,
};
use crate::zigzag::{ZigzagModule, ZigzagType};

/// Draws field elements.
pub trait Sampler<S>: Sync {
    fn sample(&self, rng: &mut ChaCha8Rng) -> S;

    fn sample_nonzero(&self, rng: &mut ChaCha8Rng) -> S
    where
        S: Scalar,
    {
        loop {
            let x = self.sample(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }
}

/// Uniform elements of a prime field.
#[derive(Clone, Copy, Debug, Default)]
pub struct Uniform;

impl<const P: u32> Sampler<crate::field::Fp<P>> for Uniform {
    fn sample(&self, rng: &mut ChaCha8Rng) -> crate::field::Fp<P> {
        crate::field::Fp::new(rng.gen_range(0..P as i64))
    }
}

/// Uniform elements of 𝔽_p for a runtime prime.
#[derive(Clone, Copy, Debug)]
pub struct UniformModP(pub u32);

impl Sampler<ModP> for UniformModP {
    fn sample(&self, rng: &mut ChaCha8Rng) -> ModP {
        ModP::new(rng.gen_range(0..self.0 as i64), self.0).expect("sampler modulus is prime")
    }
}

/// Rationals `a/b` with `|a| ≤ max_numerator` and `1 ≤ b ≤ max_denominator`.
#[derive(Clone, Copy, Debug)]
pub struct SmallRationals {
    pub max_numerator: i64,
    pub max_denominator: i64,
}

impl Default for SmallRationals {
    fn default() -> Self {
        SmallRationals {
            max_numerator: 3,
            max_denominator: 2,
        }
    }
}

impl Sampler<Rational> for SmallRationals {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Rational {
        let a = rng.gen_range(-self.max_numerator..=self.max_numerator);
        let b = rng.gen_range(1..=self.max_denominator);
        crate::field::rational(a, b).expect("denominator is positive")
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ModuleBounds {
    pub max_length: usize,
    pub max_dim: usize,
}

impl Default for ModuleBounds {
    fn default() -> Self {
        ModuleBounds {
            max_length: 10,
            max_dim: 8,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A matrix drawn from one of three flavours: dense, sparse, or low rank.
pub fn random_matrix<S: Scalar>(
    rng: &mut ChaCha8Rng,
    rows: usize,
    cols: usize,
    sampler: &impl Sampler<S>,
) -> Matrix<S> {
    match rng.gen_range(0..3) {
        0 => {
            let data = (0..rows * cols).map(|_| sampler.sample(rng)).collect();
            Matrix::from_vec(rows, cols, data).expect("sizes agree")
        }
        1 => {
            let data = (0..rows * cols)
                .map(|_| if rng.gen_bool(0.3) { sampler.sample_nonzero(rng) } else { S::zero() })
                .collect();
            Matrix::from_vec(rows, cols, data).expect("sizes agree")
        }
        _ => {
            let rank = rng.gen_range(0..=rows.min(cols));
            let left = (0..rows * rank).map(|_| sampler.sample(rng)).collect();
            let right = (0..rank * cols).map(|_| sampler.sample(rng)).collect();
            let left = Matrix::from_vec(rows, rank, left).expect("sizes agree");
            let right = Matrix::from_vec(rank, cols, right).expect("sizes agree");
            &left * &right
        }
    }
}

fn random_dims(rng: &mut ChaCha8Rng, bounds: ModuleBounds) -> Vec<usize> {
    let length = rng.gen_range(0..=bounds.max_length);
    (0..=length).map(|_| rng.gen_range(0..=bounds.max_dim)).collect()
}

fn oriented_matrices<S: Scalar>(
    rng: &mut ChaCha8Rng,
    dims: &[usize],
    directions: &[Direction],
    sampler: &impl Sampler<S>,
) -> Vec<Matrix<S>> {
    directions
        .iter()
        .enumerate()
        .map(|(i, d)| match d {
            Direction::Forward => random_matrix(rng, dims[i + 1], dims[i], sampler),
            Direction::Backward => random_matrix(rng, dims[i], dims[i + 1], sampler),
        })
        .collect()
}

pub fn random_module<S: Scalar>(seed: u64, bounds: ModuleBounds, sampler: &impl Sampler<S>) -> PersistenceModule<S> {
    let mut rng = rng(seed);
    let dims = random_dims(&mut rng, bounds);
    random_module_with_dims(&mut rng, dims, sampler)
}

pub fn random_module_with_dims<S: Scalar>(
    rng: &mut ChaCha8Rng,
    dims: Vec<usize>,
    sampler: &impl Sampler<S>,
) -> PersistenceModule<S> {
    let directions = vec![Direction::Forward; dims.len() - 1];
    let matrices = oriented_matrices(rng, &dims, &directions, sampler);
    PersistenceModule::new(dims, matrices).expect("shapes follow dims")
}

pub fn random_type(rng: &mut ChaCha8Rng, length: usize) -> ZigzagType {
    ZigzagType::new(
        (0..length)
            .map(|_| if rng.gen_bool(0.5) { Direction::Forward } else { Direction::Backward })
            .collect(),
    )
}

pub fn random_zigzag<S: Scalar>(seed: u64, bounds: ModuleBounds, sampler: &impl Sampler<S>) -> ZigzagModule<S> {
    let mut rng = rng(seed);
    let dims = random_dims(&mut rng, bounds);
    let tau = random_type(&mut rng, dims.len() - 1);
    random_zigzag_of_type(&mut rng, dims, tau, sampler)
}

pub fn random_zigzag_of_type<S: Scalar>(
    rng: &mut ChaCha8Rng,
    dims: Vec<usize>,
    tau: ZigzagType,
    sampler: &impl Sampler<S>,
) -> ZigzagModule<S> {
    let matrices = oriented_matrices(rng, &dims, tau.arrows(), sampler);
    ZigzagModule::new(dims, tau, matrices).expect("shapes follow dims")
}

/// An invertible matrix and its inverse, built from a permutation, a
/// diagonal scaling and a batch of shears.
pub fn random_invertible<S: Scalar>(
    rng: &mut ChaCha8Rng,
    n: usize,
    sampler: &impl Sampler<S>,
) -> (Matrix<S>, Matrix<S>) {
    let mut ops = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    for (i, &j) in perm.iter().enumerate() {
        if i < j {
            ops.push(ElemOp::Swap(i, j));
        }
    }
    for i in 0..n {
        ops.push(ElemOp::Scale(i, sampler.sample_nonzero(rng)));
    }
    if n > 1 {
        for _ in 0..2 * n {
            let target = rng.gen_range(0..n);
            let source = (target + rng.gen_range(1..n)) % n;
            ops.push(ElemOp::AddMultiple { target, source, factor: sampler.sample(rng) });
        }
    }
    let mut g = Matrix::identity(n);
    let mut inv = Matrix::identity(n);
    for op in &ops {
        g.apply_left(op);
        inv.apply_right(&op.inverse());
    }
    (g, inv)
}

pub fn random_basis_change<S: Scalar>(seed: u64, dims: &[usize], sampler: &impl Sampler<S>) -> BasisChange<S> {
    let mut rng = rng(seed);
    random_basis_change_with(&mut rng, dims, sampler)
}

pub fn random_basis_change_with<S: Scalar>(
    rng: &mut ChaCha8Rng,
    dims: &[usize],
    sampler: &impl Sampler<S>,
) -> BasisChange<S> {
    let (components, inverses) = dims.iter().map(|&n| random_invertible(rng, n, sampler)).unzip();
    BasisChange::with_inverses(components, inverses).expect("factors are invertible")
}

/// A barcode on `[0, length]` with at most `max_classes` distinct bars of
/// multiplicity at most `max_mult`.
pub fn random_barcode(seed: u64, length: usize, max_classes: usize, max_mult: usize) -> Barcode {
    let mut rng = rng(seed);
    random_barcode_with(&mut rng, length, max_classes, max_mult)
}

pub fn random_barcode_with(rng: &mut ChaCha8Rng, length: usize, max_classes: usize, max_mult: usize) -> Barcode {
    let all: Vec<Interval> = Interval::all(length).collect();
    let classes = rng.gen_range(0..=max_classes.min(all.len()));
    all.choose_multiple(rng, classes)
        .map(|&bar| (bar, rng.gen_range(1..=max_mult)))
        .collect()
}

/// A barcode whose classes pass `admissible` pairwise against each other.
pub fn random_barcode_where<O: BarOrder>(
    rng: &mut ChaCha8Rng,
    order: &O,
    max_classes: usize,
    max_mult: usize,
    admissible: impl Fn(&O, &[Interval], Interval) -> bool,
) -> Barcode {
    let mut all: Vec<Interval> = Interval::all(order.length()).collect();
    all.shuffle(rng);
    let target = rng.gen_range(0..=max_classes);
    let mut chosen: Vec<Interval> = Vec::new();
    for bar in all {
        if chosen.len() == target {
            break;
        }
        if admissible(order, &chosen, bar) {
            chosen.push(bar);
        }
    }
    chosen.into_iter().map(|bar| (bar, rng.gen_range(1..=max_mult))).collect()
}

/// A ladder decomposition whose source and target barcodes satisfy the
/// hypotheses of [`decompose_ladder`](crate::ladder::decompose_ladder).
pub fn random_decomposition<O: BarOrder>(
    rng: &mut ChaCha8Rng,
    order: &O,
    max_classes: usize,
    max_mult: usize,
) -> LadderDecomposition {
    let unnested = |order: &O, chosen: &[Interval], bar: Interval| {
        chosen.iter().all(|&c| !order.nested(c, bar) && !order.nested(bar, c))
    };
    let (source, target) = loop {
        let source = random_barcode_where(rng, order, max_classes, max_mult, unnested);
        let target = random_barcode_where(rng, order, max_classes, max_mult, unnested);
        if check_no_linked(&source, &target, order).is_ok() {
            break (source, target);
        }
    };
    let mut left_source: BTreeMap<Interval, usize> = source.iter().collect();
    let mut left_target: BTreeMap<Interval, usize> = target.iter().collect();
    let mut pairs: Vec<(Interval, Interval)> = target
        .classes()
        .flat_map(|t| source.classes().map(move |s| (t, s)))
        .filter(|&(t, s)| order.preceq(t, s))
        .collect();
    pairs.shuffle(rng);
    let mut d = LadderDecomposition::default();
    for (t, s) in pairs {
        let room = left_target[&t].min(left_source[&s]);
        let n = rng.gen_range(0..=room);
        if n > 0 {
            d.matches.insert((t, s), n);
            *left_target.get_mut(&t).unwrap() -= n;
            *left_source.get_mut(&s).unwrap() -= n;
        }
    }
    d.unmatched_source = left_source.into_iter().collect();
    d.unmatched_target = left_target.into_iter().collect();
    d
}

/// Rewrites a ladder in random bases of source and target.
pub fn scramble_ladder<M: QuiverModule>(
    rng: &mut ChaCha8Rng,
    ladder: &LadderModule<M>,
    sampler: &impl Sampler<M::Scalar>,
) -> LadderModule<M> {
    let gv = random_basis_change_with(rng, ladder.source().dims(), sampler);
    let gw = random_basis_change_with(rng, ladder.target().dims(), sampler);
    ladder.transformed(&gv, &gw).expect("shapes agree")
}

/// Scrambles a module by a random change of basis, returning both.
pub fn scramble<M: QuiverModule>(
    rng: &mut ChaCha8Rng,
    module: &M,
    sampler: &impl Sampler<M::Scalar>,
) -> (M, BasisChange<M::Scalar>) {
    let g = random_basis_change_with(rng, module.dims(), sampler);
    (module.transformed(&g).expect("shapes agree"), g)
}
