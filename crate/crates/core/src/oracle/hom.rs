//! Morphism spaces between quiver representations, by brute-force linear
//! algebra. Nothing here uses echelon forms of the modules themselves.

use crate::field::{Rational, Scalar, Zero};
use crate::matrix::Matrix;
use crate::persistence::{Barcode, Direction, Interval, QuiverModule};

/// `dim Hom(V, W)` for two representations of the same quiver.
///
/// A morphism is a family `φ_k : V_k → W_k`, and each arrow imposes one
/// commutativity square. The answer is the nullity of the stacked squares.
pub fn hom_dimension<S: Scalar>(
    directions: &[Direction],
    source: (&[usize], &[Matrix<S>]),
    target: (&[usize], &[Matrix<S>]),
) -> usize {
    let (nv, av) = source;
    let (nw, aw) = target;
    assert_eq!(nv.len(), nw.len(), "representations of different quivers");
    assert_eq!(nv.len(), directions.len() + 1);
    // φ_k(y, x) lives at offset[k] + y·nv[k] + x.
    let mut offset = vec![0; nv.len() + 1];
    for k in 0..nv.len() {
        offset[k + 1] = offset[k] + nw[k] * nv[k];
    }
    let unknowns = offset[nv.len()];
    if unknowns == 0 {
        return 0;
    }
    let var = |k: usize, y: usize, x: usize| offset[k] + y * nv[k] + x;
    let mut rows: Vec<Vec<S>> = Vec::new();
    for (i, &dir) in directions.iter().enumerate() {
        // Arrow i+1 runs from `from` to `to`; the square is φ_to·A^V = A^W·φ_from.
        let (from, to) = match dir {
            Direction::Forward => (i, i + 1),
            Direction::Backward => (i + 1, i),
        };
        let (a, b) = (&av[i], &aw[i]);
        for y in 0..nw[to] {
            for x in 0..nv[from] {
                let mut eq = vec![S::zero(); unknowns];
                for t in 0..nv[to] {
                    let c = a.get(t, x);
                    if !c.is_zero() {
                        let v = var(to, y, t);
                        eq[v] = eq[v].clone() + c.clone();
                    }
                }
                for u in 0..nw[from] {
                    let c = b.get(y, u);
                    if !c.is_zero() {
                        let v = var(from, u, x);
                        eq[v] = eq[v].clone() - c.clone();
                    }
                }
                if eq.iter().any(|e| !e.is_zero()) {
                    rows.push(eq);
                }
            }
        }
    }
    if rows.is_empty() {
        return unknowns;
    }
    let system = Matrix::from_rows(unknowns, rows).expect("equations have one entry per unknown");
    unknowns - system.rank()
}

pub fn hom_dimension_modules<M: QuiverModule>(source: &M, target: &M) -> usize {
    hom_dimension(&source.directions(), (source.dims(), source.matrices()), (target.dims(), target.matrices()))
}

/// `dim End(V)`, which is also the dimension of the stabiliser of `V`.
pub fn endomorphism_dimension<M: QuiverModule>(module: &M) -> usize {
    hom_dimension_modules(module, module)
}

/// The interval representation supported on `bar`, with identity maps.
pub fn interval_representation<S: Scalar>(bar: Interval, directions: &[Direction]) -> (Vec<usize>, Vec<Matrix<S>>) {
    let dims: Vec<usize> = (0..=directions.len()).map(|k| usize::from(bar.contains(k))).collect();
    let matrices = directions
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let (r, c) = match d {
                Direction::Forward => (dims[i + 1], dims[i]),
                Direction::Backward => (dims[i], dims[i + 1]),
            };
            if r == 1 && c == 1 {
                Matrix::identity(1)
            } else {
                Matrix::zeros(r, c)
            }
        })
        .collect();
    (dims, matrices)
}

/// Whether the interval module of `source` maps nontrivially into that of
/// `target`, decided by solving the commutativity equations.
pub fn interval_hom_nonzero(target: Interval, source: Interval, directions: &[Direction]) -> bool {
    let (ns, ms) = interval_representation::<Rational>(source, directions);
    let (nt, mt) = interval_representation::<Rational>(target, directions);
    hom_dimension(directions, (&ns, &ms), (&nt, &mt)) > 0
}

/// The barcode of any representation of a type-A quiver, recovered from the
/// numbers `dim Hom(I, V)` over all interval modules `I`.
///
/// These numbers are `H·d` where `d` is the barcode and
/// `H[a][c] = dim Hom(I_a, I_c)`; `H` is invertible, so `d` is determined.
pub fn barcode_via_hom<M: QuiverModule>(module: &M) -> Barcode {
    let directions = module.directions();
    let bars: Vec<Interval> = Interval::all(module.length()).collect();
    let reps: Vec<(Vec<usize>, Vec<Matrix<M::Scalar>>)> =
        bars.iter().map(|&b| interval_representation(b, &directions)).collect();
    let n = bars.len();
    let mut h = Matrix::<Rational>::zeros(n, n);
    for a in 0..n {
        for c in 0..n {
            let d = hom_dimension(&directions, (&reps[a].0, &reps[a].1), (&reps[c].0, &reps[c].1));
            h.set(a, c, Rational::from_i64(d as i64));
        }
    }
    let counts: Vec<Rational> = reps
        .iter()
        .map(|(dims, ms)| {
            Rational::from_i64(hom_dimension(&directions, (dims, ms), (module.dims(), module.matrices())) as i64)
        })
        .collect();
    let hinv = h.inverse().expect("interval Hom matrix is unitriangular up to order");
    let mut out = Barcode::new();
    for (a, &bar) in bars.iter().enumerate() {
        let mut d = Rational::zero();
        for (c, count) in counts.iter().enumerate() {
            d += hinv.get(a, c).clone() * count.clone();
        }
        assert!(d.is_integer() && d >= Rational::zero(), "multiplicity {d} for {bar}");
        let d: usize = d.to_integer().try_into().expect("small multiplicity");
        out.insert(bar, d);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::persistence::{preceq, PersistenceModule};
    use crate::zigzag::{preceq_tau, ZigzagType};

    #[test]
    fn interval_homs_follow_the_overlap_rule() {
        for length in 0..=4 {
            let dirs = vec![Direction::Forward; length];
            for a in Interval::all(length) {
                for b in Interval::all(length) {
                    assert_eq!(interval_hom_nonzero(a, b, &dirs), preceq(a, b), "{a} {b}");
                }
            }
        }
        for length in 0..=4 {
            for tau in ZigzagType::all(length) {
                for a in Interval::all(length) {
                    for b in Interval::all(length) {
                        assert_eq!(interval_hom_nonzero(a, b, tau.arrows()), preceq_tau(a, b, &tau));
                    }
                }
            }
        }
    }

    #[test]
    fn barcode_of_a_small_module() {
        let m = PersistenceModule::<Fp<5>>::from_matrices(
            2,
            vec![Matrix::from_ints(&[[1, 0], [0, 0]]), Matrix::from_ints(&[[0, 1]])],
        )
        .unwrap();
        let expected: Barcode =
            [(Interval::of(0, 1), 1), (Interval::of(0, 0), 1), (Interval::of(1, 2), 1)].into_iter().collect();
        assert_eq!(barcode_via_hom(&m), expected);
    }

    #[test]
    fn endomorphisms_of_a_sum_of_two_bars() {
        // I[0,1] ⊕ I[1,1]: the short bar embeds in the long one, not conversely.
        let m = PersistenceModule::<Fp<3>>::from_matrices(1, vec![Matrix::from_ints(&[[1], [0]])]).unwrap();
        assert_eq!(endomorphism_dimension(&m), 3);
    }
}
