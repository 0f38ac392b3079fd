use std::time::Instant;
use stubstar::assembler::realize;
use stubstar::bench::random_instance;
use stubstar::feasibility::{build_system, solve_first, Encoding};
use stubstar::model::GraphClass;
use stubstar::oracle;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let n: usize = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(1000);
    let mut seeds = oracle::seeds(0 ^ n as u64);
    let (mut tb, mut ts, mut te, mut tr) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut worst_s = 0.0f64;
    let mut worst_r = 0.0f64;
    for _ in 0..100 {
        let s = seeds.draw();
        let inst = random_instance(n, s);
        let t = Instant::now();
        let sys = build_system(&inst, GraphClass::Tree, Encoding::Semantic).unwrap();
        tb += t.elapsed().as_secs_f64();
        let t = Instant::now();
        let a = solve_first(&sys).unwrap();
        let dt = t.elapsed().as_secs_f64();
        ts += dt;
        worst_s = worst_s.max(dt);
        let t = Instant::now();
        let e = sys.ensemble_of(&a);
        te += t.elapsed().as_secs_f64();
        let t = Instant::now();
        let g = realize(&e, GraphClass::Tree).unwrap();
        let dt = t.elapsed().as_secs_f64();
        tr += dt;
        worst_r = worst_r.max(dt);
        std::hint::black_box(g);
    }
    println!(
        "n={n} mean ms: build={:.2} solve={:.2} ensemble={:.2} realize={:.2} | worst solve={:.1} realize={:.1}",
        tb * 10.0, ts * 10.0, te * 10.0, tr * 10.0, worst_s * 1e3, worst_r * 1e3
    );
}
