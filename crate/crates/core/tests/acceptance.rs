//! Acceptance criteria. Each test prints one line
//! `criterion N <name>: PASS|FAIL <detail>` and fails on FAIL.

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use barcode_core::ladder::{
    decompose_ladder, ladder_from_blocks, synthesize_ladder, validate_ladder, BlockMatrix, LadderError,
    PersistenceLadder, Side,
};
use barcode_core::oracle::random::{
    random_barcode_with, random_decomposition, random_invertible, random_matrix, random_module,
    random_module_with_dims, random_type, random_zigzag, rng, scramble, scramble_ladder, ModuleBounds, Sampler,
    SmallRationals, Uniform,
};
use barcode_core::oracle::{barcode_via_hom, barcode_via_ranks, endomorphism_dimension, verify_reduction};
use barcode_core::persistence::{
    apply_basis_change, extract_barcode, lex_leq, preceq, BarOrder, Barcode, Chains, Direction, Interval,
    PersistenceModule, QuiverModule, StandardOrder,
};
use barcode_core::reduction::{comp_pers, BarcodeModule};
use barcode_core::stabiliser::{
    blocks_multiply, blocks_to_element, element_to_blocks, is_stabiliser, stab_dimension, StabiliserBlocks,
};
use barcode_core::zigzag::{
    canonical_zigzag, comp_pers_zigzag, extract_barcode_zigzag, is_zigzag_barcode_form, order_tau, order_tau_star,
    preceq_tau, TauOrder, ZigzagModule, ZigzagType,
};
use barcode_core::{Matrix, Scalar, F2, F3, F5, F7, Q};

const GOLDEN_RUNTIME: Duration = Duration::from_millis(10);
const ORACLE_RUNTIME: Duration = Duration::from_secs(60);
const ORACLE_INSTANCES_PER_FIELD: u64 = 170;
const STABILISER_BARCODES: u64 = 200;
const LADDER_INSTANCES: u64 = 300;
const SPECIALISATION_INSTANCES: u64 = 100;
const ZIGZAG_ROUND_TRIPS: u64 = 300;
const ORDER_MAX_LENGTH: usize = 5;
const COMPLEXITY_SEEDS: u64 = 20;
const N_DOUBLING_LIMIT: f64 = 16.0;
const L_DOUBLING_LIMIT: f64 = 8.0;

fn report(n: u32, name: &str, outcome: Result<String, String>) {
    match outcome {
        Ok(detail) => println!("criterion {n} {name}: PASS {detail}"),
        Err(detail) => {
            println!("criterion {n} {name}: FAIL {detail}");
            panic!("criterion {n} failed: {detail}");
        }
    }
}

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn bars(pairs: &[((usize, usize), usize)]) -> Barcode {
    pairs.iter().map(|&((s, e), d)| (Interval::of(s, e), d)).collect()
}

/// `Σ d_a·d_b` over pairs related by `related`, counted directly.
fn related_pairs(bar: &Barcode, related: impl Fn(Interval, Interval) -> bool) -> usize {
    let mut total = 0;
    for (a, da) in bar.iter() {
        for (b, db) in bar.iter() {
            if related(a, b) {
                total += da * db;
            }
        }
    }
    total
}

#[test]
fn criterion_1_cascade_golden() {
    let outcome = (|| {
        let module = PersistenceModule::<Q>::from_matrices(
            3,
            vec![
                Matrix::from_ints(&[[1, 0, 0], [0, 1, 0], [0, 0, 0]]),
                Matrix::identity(3),
                Matrix::from_ints(&[[1, 0, 1], [0, 1, 1], [0, 0, 0]]),
            ],
        )
        .unwrap();
        let expected = vec![
            Matrix::from_ints(&[[1, 0, 0], [0, 1, 0], [0, 0, 0]]),
            Matrix::from_ints(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
            Matrix::from_ints(&[[1, 0, 0], [0, 1, 0], [0, 0, 0]]),
        ];
        // Best of a few runs, so a busy machine does not decide the outcome.
        let mut best = Duration::MAX;
        let mut result = None;
        for _ in 0..5 {
            let start = Instant::now();
            let r = comp_pers(&module);
            best = best.min(start.elapsed());
            result = Some(r);
        }
        let result = result.unwrap();
        check(result.reduced == expected, || format!("reduced to {:?}", result.reduced))?;
        let conjugated = apply_basis_change(&result.change, module.matrices()).map_err(|e| e.to_string())?;
        check(conjugated == result.reduced, || "g does not conjugate the input to the output".into())?;
        check(result.change.is_certified(), || "g is not invertible".into())?;
        check(best < GOLDEN_RUNTIME, || format!("took {best:?}, limit {GOLDEN_RUNTIME:?}"))?;
        Ok(format!("exact; {best:?} < {GOLDEN_RUNTIME:?}"))
    })();
    report(1, "cascade golden", outcome);
}

#[test]
fn criterion_2_three_bar_golden() {
    let outcome = (|| {
        let module = PersistenceModule::<Q>::from_matrices(
            2,
            vec![
                Matrix::from_ints(&[[1, 0], [0, 1], [0, 0]]),
                Matrix::from_ints(&[[1, 0, 0], [0, 0, 1]]),
                Matrix::from_ints(&[[1, 0], [0, 1]]),
            ],
        )
        .unwrap();
        let expected = bars(&[((0, 1), 1), ((0, 3), 1), ((1, 3), 1)]);
        let direct = extract_barcode(&module).map_err(|e| e.to_string())?;
        check(direct == expected, || format!("extracted {direct:?}"))?;
        let reduced = verify_reduction(&module, &comp_pers(&module)).map_err(|e| e.to_string())?;
        check(reduced == expected, || format!("reduction gave {reduced:?}"))?;
        check(barcode_via_ranks(&module) == expected, || "rank oracle disagrees".into())?;

        let order = StandardOrder::new(3);
        let dim = stab_dimension(&expected, &order);
        let enumerated = related_pairs(&expected, preceq);
        let endo = endomorphism_dimension(&module);
        check(dim == 6 && enumerated == 6 && endo == 6, || {
            format!("stab-dim {dim}, enumerated pairs {enumerated}, dim End {endo}")
        })?;
        Ok("barcode {[0,1],[0,3],[1,3]}, stab-dim 6 (pairs and dim End agree)".into())
    })();
    report(2, "three-bar golden", outcome);
}

fn oracle_run<S: Scalar>(seeds: std::ops::Range<u64>, sampler: &impl Sampler<S>) -> Result<usize, String> {
    let bounds = ModuleBounds { max_length: 10, max_dim: 8 };
    let mut count = 0;
    for seed in seeds {
        let m = random_module(seed, bounds, sampler);
        check(m.length() <= 10 && m.dims().iter().all(|&n| n <= 8), || format!("seed {seed} out of bounds"))?;
        let result = comp_pers(&m);
        let from_reduction = extract_barcode(&PersistenceModule::new(m.dims().to_vec(), result.reduced).unwrap())
            .map_err(|e| format!("seed {seed}: {e}"))?;
        let from_ranks = barcode_via_ranks(&m);
        check(from_reduction == from_ranks, || {
            format!("seed {seed}: reduction {from_reduction:?} vs ranks {from_ranks:?}")
        })?;
        count += 1;
    }
    Ok(count)
}

#[test]
fn criterion_3_rank_oracle_equivalence() {
    let outcome = (|| {
        let start = Instant::now();
        let k = ORACLE_INSTANCES_PER_FIELD;
        let total = oracle_run::<F2>(0..k, &Uniform)?
            + oracle_run::<F5>(k..2 * k, &Uniform)?
            + oracle_run::<Q>(2 * k..3 * k, &SmallRationals::default())?;
        let elapsed = start.elapsed();
        check(total >= 500, || format!("only {total} instances"))?;
        check(elapsed < ORACLE_RUNTIME, || format!("took {elapsed:?}, limit {ORACLE_RUNTIME:?}"))?;
        Ok(format!("{total} modules over F2, F5, Q, 0 mismatches, {elapsed:.2?} < {ORACLE_RUNTIME:?}"))
    })();
    report(3, "rank oracle equivalence", outcome);
}

fn certify_plain<S: Scalar>(m: &PersistenceModule<S>) -> Result<(), String> {
    let result = comp_pers(m);
    verify_reduction(m, &result).map_err(|e| e.to_string())?;
    check(result.reduced.iter().all(Matrix::is_barcode_form), || "output not in barcode form".into())?;
    check(result.change.is_certified(), || "g not invertible".into())
}

fn certify_zigzag<S: Scalar>(m: &ZigzagModule<S>) -> Result<Barcode, String> {
    let result = comp_pers_zigzag(m);
    let bar = verify_reduction(m, &result).map_err(|e| e.to_string())?;
    let reduced = m.with_matrices(result.reduced.clone()).map_err(|e| e.to_string())?;
    check(is_zigzag_barcode_form(&reduced), || "output not in zigzag barcode form".into())?;
    check(result.change.is_certified(), || "g not invertible".into())?;
    Ok(bar)
}

#[test]
fn criterion_4_basis_change_certificate() {
    let outcome = (|| {
        let bounds = ModuleBounds { max_length: 8, max_dim: 6 };
        let small = ModuleBounds { max_length: 4, max_dim: 3 };
        let mut count = 0;
        for seed in 0..150 {
            certify_plain(&random_module::<F5>(seed, bounds, &Uniform)).map_err(|e| format!("plain F5 {seed}: {e}"))?;
            certify_plain(&random_module::<Q>(seed, bounds, &SmallRationals::default()))
                .map_err(|e| format!("plain Q {seed}: {e}"))?;
            certify_zigzag(&random_zigzag::<F3>(seed, bounds, &Uniform)).map_err(|e| format!("zigzag F3 {seed}: {e}"))?;
            certify_zigzag(&random_zigzag::<Q>(seed, bounds, &SmallRationals::default()))
                .map_err(|e| format!("zigzag Q {seed}: {e}"))?;
            // Small zigzags also go through the morphism-space oracle.
            let m = random_zigzag::<F2>(seed, small, &Uniform);
            let bar = certify_zigzag(&m).map_err(|e| format!("zigzag F2 {seed}: {e}"))?;
            check(bar == barcode_via_hom(&m), || format!("zigzag F2 {seed}: Hom oracle disagrees"))?;
            count += 5;
        }
        Ok(format!("{count} reductions certified exactly"))
    })();
    report(4, "basis-change certificate", outcome);
}

fn random_blocks<S: Scalar, O: BarOrder>(
    rng: &mut rand_chacha::ChaCha8Rng,
    bar: &Barcode,
    order: &O,
    sampler: &impl Sampler<S>,
) -> StabiliserBlocks<S> {
    let mut blocks = StabiliserBlocks::identity(bar, order);
    let pairs: Vec<_> = blocks.pairs().collect();
    for (r, c) in pairs {
        let (rows, cols) = blocks.get(r, c).unwrap().shape();
        let block = if r == c { random_invertible(rng, rows, sampler).0 } else { random_matrix(rng, rows, cols, sampler) };
        blocks.set(r, c, block).unwrap();
    }
    blocks
}

fn stabiliser_case<M: BarcodeModule>(
    rng: &mut rand_chacha::ChaCha8Rng,
    bar: &Barcode,
    order: &M::Order,
    sampler: &impl Sampler<M::Scalar>,
) -> Result<(), String> {
    let layout = Chains::canonical(bar, order).map_err(|e| e.to_string())?;
    let module = M::canonical(bar, order).map_err(|e| e.to_string())?;
    let g = random_blocks(rng, bar, order, sampler);
    let h = random_blocks(rng, bar, order, sampler);
    let eg = blocks_to_element(&g, &layout).map_err(|e| e.to_string())?;
    let eh = blocks_to_element(&h, &layout).map_err(|e| e.to_string())?;
    check(element_to_blocks(&eg, &layout, order).as_ref() == Ok(&g), || "blocks do not round-trip".into())?;
    check(is_stabiliser(&eg, &module), || "assembled element moves the module".into())?;

    let product = blocks_multiply(&g, &h).map_err(|e| e.to_string())?;
    let ep = blocks_to_element(&product, &layout).map_err(|e| e.to_string())?;
    for k in 0..=order.length() {
        check(ep.component(k) == &(eg.component(k) * eh.component(k)), || format!("product differs at V_{k}"))?;
    }

    let formula = related_pairs(bar, |a, b| order.preceq(a, b));
    let count = g.parameter_count();
    let dim = stab_dimension(bar, order);
    check(count == formula && dim == formula, || format!("parameters {count}, stab-dim {dim}, formula {formula}"))?;
    if module.dims().iter().sum::<usize>() <= 12 {
        let endo = endomorphism_dimension(&module);
        check(endo == formula, || format!("dim End {endo}, formula {formula}"))?;
    }
    Ok(())
}

#[test]
fn criterion_5_stabiliser_bijection() {
    let outcome = (|| {
        let mut zigzag_cases = 0;
        for seed in 0..STABILISER_BARCODES {
            let mut rng = rng(seed);
            let length = (seed % 7) as usize;
            let bar = random_barcode_with(&mut rng, length, 5, 3);
            check(bar.iter().all(|(_, d)| (1..=3).contains(&d)), || format!("seed {seed}: multiplicity out of range"))?;
            stabiliser_case::<PersistenceModule<F7>>(&mut rng, &bar, &StandardOrder::new(length), &Uniform)
                .map_err(|e| format!("seed {seed}: {e}"))?;
            let tau = random_type(&mut rng, length);
            stabiliser_case::<ZigzagModule<Q>>(&mut rng, &bar, &TauOrder::new(&tau), &SmallRationals::default())
                .map_err(|e| format!("seed {seed} {tau}: {e}"))?;
            zigzag_cases += 1;
        }
        Ok(format!("{STABILISER_BARCODES} barcodes (plus {zigzag_cases} zigzag), ℓ ≤ 6, multiplicities ≤ 3"))
    })();
    report(5, "stabiliser bijection", outcome);
}

fn all_ones_ladder(target: &[((usize, usize), usize)], source: &[((usize, usize), usize)]) -> PersistenceLadder<Q> {
    let order = StandardOrder::new(4);
    let (t, s) = (bars(target), bars(source));
    let mut x = BlockMatrix::zero(&t, &s, &order);
    for r in t.classes() {
        for c in s.classes() {
            x.set_block(r, c, &Matrix::from_ints(&[[1]])).unwrap();
        }
    }
    ladder_from_blocks(&x, &order).unwrap()
}

#[test]
fn criterion_6_ladder_round_trip() {
    let outcome = (|| {
        for seed in 0..LADDER_INSTANCES {
            let mut rng = rng(seed);
            let length = (seed % 7) as usize;
            let order = StandardOrder::new(length);
            let d = random_decomposition(&mut rng, &order, 5, 3);
            let ladder: PersistenceLadder<Q> = synthesize_ladder(&d, &order).map_err(|e| e.to_string())?;
            check(validate_ladder(&ladder).is_empty(), || format!("seed {seed}: synthesized ladder does not commute"))?;
            let scrambled = scramble_ladder(&mut rng, &ladder, &SmallRationals::default());
            let found = decompose_ladder(&scrambled).map_err(|e| format!("seed {seed}: {e}"))?;
            check(found.decomposition == d, || format!("seed {seed}: recovered {} expected {d}", found.decomposition))?;
        }

        let one = all_ones_ladder(&[((0, 3), 1)], &[((1, 4), 1), ((2, 3), 1)]);
        let expected_one = LadderError::NestedBars { side: Side::Source, outer: Interval::of(1, 4), inner: Interval::of(2, 3) };
        check(decompose_ladder(&one).err() == Some(expected_one.clone()), || "first instance not refused".into())?;
        let two = all_ones_ladder(&[((0, 3), 1), ((1, 2), 1)], &[((1, 4), 1)]);
        let expected_two = LadderError::NestedBars { side: Side::Target, outer: Interval::of(0, 3), inner: Interval::of(1, 2) };
        check(decompose_ladder(&two).err() == Some(expected_two.clone()), || "second instance not refused".into())?;
        Ok(format!("{LADDER_INSTANCES} exact recoveries; refusals: {expected_one}; {expected_two}"))
    })();
    report(6, "ladder round trip", outcome);
}

#[test]
fn criterion_7_zigzag_specialisation_and_round_trip() {
    let outcome = (|| {
        let bounds = ModuleBounds { max_length: 8, max_dim: 6 };
        for seed in 0..SPECIALISATION_INSTANCES {
            let plain = random_module::<F5>(seed, bounds, &Uniform);
            let zig: ZigzagModule<F5> = plain.clone().into();
            let (a, b) = (comp_pers(&plain), comp_pers_zigzag(&zig));
            check(a.reduced == b.reduced && a.change == b.change, || format!("seed {seed}: paths differ"))?;
        }

        let mut longest = 0;
        for seed in 0..ZIGZAG_ROUND_TRIPS {
            let mut rng = rng(seed);
            let length = (seed % 9) as usize;
            let tau = random_type(&mut rng, length);
            let bar = random_barcode_with(&mut rng, length, 6, 3);
            let canonical = canonical_zigzag::<Q>(&bar, &tau).map_err(|e| e.to_string())?;
            let (scrambled, _) = scramble(&mut rng, &canonical, &SmallRationals::default());
            let result = comp_pers_zigzag(&scrambled);
            let reduced = scrambled.with_matrices(result.reduced).map_err(|e| e.to_string())?;
            let found = extract_barcode_zigzag(&reduced).map_err(|e| format!("seed {seed} {tau}: {e}"))?;
            check(found == bar, || format!("seed {seed} {tau}: found {found:?}, expected {bar:?}"))?;
            longest = longest.max(length);
        }

        let qfq: ZigzagType = "qfq".parse().unwrap();
        let (lower, upper) = (order_tau(&qfq).sequence(), order_tau_star(&qfq).sequence());
        check(lower == [3, 1, 0, 2], || format!("≤_τ gives {lower:?}"))?;
        check(upper == [1, 3, 2, 0], || format!("≤*_τ gives {upper:?}"))?;
        Ok(format!(
            "{SPECIALISATION_INSTANCES} forward paths identical, {ZIGZAG_ROUND_TRIPS} round trips up to ℓ = {longest}, \
             qfq orders {lower:?} / {upper:?}"
        ))
    })();
    report(7, "zigzag specialisation and round trip", outcome);
}

fn is_total_order(bars: &[Interval], cmp: impl Fn(Interval, Interval) -> Ordering) -> Result<(), String> {
    for &a in bars {
        for &b in bars {
            let (ab, ba) = (cmp(a, b), cmp(b, a));
            check(ab == ba.reverse(), || format!("{a} {b} not antisymmetric"))?;
            check((ab == Ordering::Equal) == (a == b), || format!("{a} {b} tie"))?;
            for &c in bars {
                if ab != Ordering::Greater && cmp(b, c) != Ordering::Greater {
                    check(cmp(a, c) != Ordering::Greater, || format!("{a} {b} {c} not transitive"))?;
                }
            }
        }
    }
    Ok(())
}

#[test]
fn criterion_8_order_theory_exhaustive() {
    let outcome = (|| {
        let mut types = 0;
        for length in 0..=ORDER_MAX_LENGTH {
            let all: Vec<Interval> = Interval::all(length).collect();
            for tau in ZigzagType::all(length) {
                types += 1;
                let (lower, upper) = (order_tau(&tau), order_tau_star(&tau));
                check(lower.is_permutation() && upper.is_permutation(), || format!("{tau}: endpoint orders not total"))?;
                let order = TauOrder::new(&tau);
                is_total_order(&all, |a, b| order.compare(a, b)).map_err(|e| format!("{tau}: ⊴_τ {e}"))?;
                for &a in &all {
                    for &b in &all {
                        if preceq_tau(a, b, &tau) {
                            check(order.compare(a, b) != Ordering::Greater, || format!("{tau}: {a} ⪯ {b} but not ⊴"))?;
                        }
                    }
                }
            }

            let forward = ZigzagType::forward(length);
            let identity: Vec<usize> = (0..=length).collect();
            check(order_tau(&forward).sequence() == identity, || format!("ℓ={length}: ≤_τ is not ≤"))?;
            check(order_tau_star(&forward).sequence() == identity, || format!("ℓ={length}: ≤*_τ is not ≤"))?;
            let backward = ZigzagType::new(vec![Direction::Backward; length]);
            let forward_order = TauOrder::new(&forward);
            for &a in &all {
                for &b in &all {
                    check(preceq_tau(a, b, &forward) == preceq(a, b), || format!("forward ⪯_τ differs at {a} {b}"))?;
                    check(forward_order.lex_leq(a, b) == lex_leq(a, b), || format!("forward ⊴_τ differs at {a} {b}"))?;
                    check(preceq_tau(a, b, &backward) == preceq(b, a), || format!("backward ⪯_τ differs at {a} {b}"))?;
                }
            }
        }
        Ok(format!("{types} types, ℓ ≤ {ORDER_MAX_LENGTH}, no counterexample"))
    })();
    report(8, "order theory exhaustive", outcome);
}

fn median_ops(n: usize, length: usize) -> u64 {
    let mut counts: Vec<u64> = (0..COMPLEXITY_SEEDS)
        .map(|seed| {
            let mut rng = rng(1000 + seed);
            let m = random_module_with_dims::<F5>(&mut rng, vec![n; length + 1], &Uniform);
            comp_pers(&m).op_count.elementary()
        })
        .collect();
    counts.sort_unstable();
    counts[counts.len() / 2]
}

#[test]
fn criterion_9_complexity_smoke() {
    let outcome = (|| {
        let (n_small, n_big) = (median_ops(4, 8), median_ops(8, 8));
        let (l_small, l_big) = (median_ops(4, 8), median_ops(4, 16));
        check(n_small > 0 && l_small > 0, || "no operations counted".into())?;
        let n_ratio = n_big as f64 / n_small as f64;
        let l_ratio = l_big as f64 / l_small as f64;
        check(n_ratio <= N_DOUBLING_LIMIT, || format!("doubling n: ×{n_ratio:.2} > ×{N_DOUBLING_LIMIT}"))?;
        check(l_ratio <= L_DOUBLING_LIMIT, || format!("doubling ℓ: ×{l_ratio:.2} > ×{L_DOUBLING_LIMIT}"))?;
        Ok(format!(
            "doubling n ×{n_ratio:.2} ≤ ×{N_DOUBLING_LIMIT}, doubling ℓ ×{l_ratio:.2} ≤ ×{L_DOUBLING_LIMIT} \
             (medians over {COMPLEXITY_SEEDS} seeds)"
        ))
    })();
    report(9, "complexity smoke", outcome);
}
