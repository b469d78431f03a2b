//! Prints the Schwarzschild reference table used as a test fixture.
use heun_spectra_core::oracle::schwarzschild_qnm;

fn main() {
    println!("# s=-1, M=1/2, time dependence e^{{i omega t}} (damped modes have Im omega > 0)");
    println!("l,n,re_omega,im_omega");
    for (l, n) in [(1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (3, 0)] {
        let w = schwarzschild_qnm(l, n, -1).expect("oracle converges");
        println!("{l},{n},{:.16e},{:.16e}", w.re, w.im);
    }
}
