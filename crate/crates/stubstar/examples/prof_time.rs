use std::time::Instant;
use stubstar::bench::random_instance;
use stubstar::feasibility::{build_system, search_stats, solve_first, Encoding};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let n: usize = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(300);
    let seed: u64 = args
        .get(2)
        .map(|s| u64::from_str_radix(s.trim_start_matches("0x"), 16).unwrap())
        .unwrap_or(0xc8eba733a803447f);
    let inst = random_instance(n, seed);
    let sys = build_system(&inst, stubstar::model::GraphClass::Forest, Encoding::Semantic).unwrap();
    search_stats::reset();
    let t = Instant::now();
    let sol = solve_first(&sys);
    let ms = t.elapsed().as_secs_f64() * 1e3;
    let st = search_stats::snapshot();
    println!("n={n} seed={seed:#x} solve {ms:.1} ms found={} nodes={}", sol.is_some(), st.nodes);
    let mut rows: Vec<_> = st.row_fails.into_iter().collect();
    rows.sort_by_key(|(_, c)| std::cmp::Reverse(*c));
    for (k, c) in rows.into_iter().take(8) {
        println!("  row  {c:>9}  {k}");
    }
    let mut checks: Vec<_> = st.check_fails.into_iter().collect();
    checks.sort_by_key(|(_, c)| std::cmp::Reverse(*c));
    for (k, c) in checks.into_iter().take(8) {
        println!("  chk  {c:>9}  {k}");
    }
}
