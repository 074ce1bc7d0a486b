#![no_main]

use arbitrary::Arbitrary;
use emcert::certify::envelope_at;
use emcert::corpus::GridFunction;
use emcert::oracle::{brute_force_envelope, OracleOutcome};
use emcert::Error;
use libfuzzer_sys::fuzz_target;

#[derive(Debug, Arbitrary)]
struct Input {
    k: u8,
    // coordinates and values on a quarter-integer lattice in [0, 8]
    points: Vec<(Vec<u8>, u8)>,
    target: Vec<u8>,
}

fn coord(b: u8) -> f64 {
    f64::from(b % 33) / 4.0
}

fuzz_target!(|input: Input| {
    let k = 1 + usize::from(input.k % 3);
    let mut pts = Vec::new();
    let mut vals = Vec::new();
    for (p, v) in input.points.iter().take(10) {
        let u: Vec<f64> = (0..k).map(|i| coord(p.get(i).copied().unwrap_or(4))).collect();
        if !pts.contains(&u) {
            pts.push(u);
            vals.push(coord(*v));
        }
    }
    let Ok(g) = GridFunction::new(pts, vals) else { return };
    let target: Vec<f64> = (0..k).map(|i| coord(input.target.get(i).copied().unwrap_or(4))).collect();

    let oracle = brute_force_envelope(&g, &target).expect("within guard");
    match (oracle, envelope_at(&g, &target)) {
        (OracleOutcome::Feasible { value, .. }, Ok(e)) => {
            assert!((value - e.value).abs() <= 1e-7, "oracle {value} vs lp {}", e.value)
        }
        (OracleOutcome::Infeasible, Err(Error::TargetOutsideHull)) => {}
        (o, l) => panic!("oracle {o:?} vs lp {l:?}"),
    }
});
