use vkh_core::*;
use vkh_core::diagram::{cable::cable, generate::random_diagram};
use std::time::Instant;

fn main() {
    let budget = Budget::new(1 << 20);
    let d = random_diagram(4, 1, 1);
    let c = cable(&d, 2);
    let t0 = Instant::now();
    let cx = chain_complex(&c, Field::Rational, budget).unwrap();
    println!("Q chain_complex: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let t = homology(&cx);
    println!("Q homology: {:?}, betti {}", t0.elapsed(), t.total_dimension());
}
