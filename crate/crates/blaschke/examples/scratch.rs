use blaschke::map::{BlaschkeMap, ExtComplex};
use num_complex::Complex64;

fn main() {
    let a = Complex64::new(3.0, 0.0);
    let map = BlaschkeMap::new(a);
    // pixel near e^{0.05 i}
    let mut z = Complex64::from_polar(1.0, 0.05);
    // perturb like a pixel center
    z += Complex64::new(0.002, -0.003);
    for n in 0..5001 {
        if n % 500 == 0 {
            println!("n={n} z={z:.6} |z|={:.8} |z-1|={:.6}", z.norm(), (z - Complex64::ONE).norm());
        }
        z = map.eval(ExtComplex::Finite(z)).finite().unwrap();
    }
}
