#![allow(dead_code)]

use num_complex::Complex64;

/// Pinned Schwarzschild frequencies `(l, n, ω)` from the shooting oracle.
pub fn oracle_qnms() -> Vec<(i32, u32, Complex64)> {
    let text = include_str!("../fixtures/schwarzschild_qnm.csv");
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("l,"))
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            (
                f[0].parse().unwrap(),
                f[1].parse().unwrap(),
                Complex64::new(f[2].parse().unwrap(), f[3].parse().unwrap()),
            )
        })
        .collect()
}

pub fn oracle_qnm(l: i32, n: u32) -> Complex64 {
    oracle_qnms()
        .into_iter()
        .find(|(ll, nn, _)| *ll == l && *nn == n)
        .map(|(_, _, w)| w)
        .expect("pinned mode")
}
