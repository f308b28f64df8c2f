use std::collections::BTreeMap;

use dixlab_core::chain::{pair, LaurentChain};
use dixlab_core::cocycle::{wedge_operator_path, Cochain, FredholmModuleSpec};
use dixlab_core::seq::{lacunary_series, BoundedSequence, CircleSeries, Complex, HolderExponent};
use dixlab_core::trace::Schedule;

fn quadruple(level: u32) -> Vec<CircleSeries<Complex>> {
    let quarter = HolderExponent::new(0.25).unwrap();
    let alt = lacunary_series(&BoundedSequence::alternating(), quarter, level).unwrap();
    let ones = lacunary_series(&BoundedSequence::ones(), quarter, level).unwrap();
    vec![alt.clone(), alt.conj(), ones.clone(), ones.conj()]
}

/// The wedge chain carries every signed permutation once, so pairing it with the
/// cyclic cochain gives twice the halved operator-path sum, radius by radius.
#[test]
fn pairing_with_lacunary_wedge_matches_operator_path() {
    let a = quadruple(9);
    let spec = FredholmModuleSpec::circle(3).unwrap();
    let schedule = Schedule::dyadic(2, 10);
    let paired = pair(&Cochain::Cyclic(spec), &LaurentChain::wedge(&a).unwrap(), &schedule).unwrap();

    let mut by_radius: BTreeMap<u64, Complex> = BTreeMap::new();
    for (pos, v) in &paired.diagonal.entries {
        *by_radius.entry(pos.div_ceil(2)).or_default() += v;
    }
    let radius = paired.diagonal.cap / 2;
    let operator = wedge_operator_path(spec, &a, radius).unwrap();
    let (mut lhs, mut rhs) = (Complex::new(0.0, 0.0), Complex::new(0.0, 0.0));
    for r in 0..radius {
        lhs += by_radius.get(&r).copied().unwrap_or_default();
        rhs += operator.get(r) * 2.0;
        assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()), "radius {r}: {lhs} vs {rhs}");
    }
}
