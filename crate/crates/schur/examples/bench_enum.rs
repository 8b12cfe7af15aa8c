use schur::catalogue;
use schur::AbelianGroup;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    for s in args[1..].iter() {
        let g = AbelianGroup::parse(s).unwrap();
        let t = Instant::now();
        let rings = catalogue::enumerate_srings(&g).unwrap();
        println!("{s}: {} S-rings in {:.2?}", rings.len(), t.elapsed());
    }
}
