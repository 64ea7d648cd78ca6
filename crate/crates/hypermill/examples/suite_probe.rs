fn main() {
    let t = std::time::Instant::now();
    let report = hypermill::corpus::lemma1_oracle_suite(40, 7, 6, 10_000);
    println!("{}", report.render());
    println!("oracle elapsed {:.1}s", t.elapsed().as_secs_f64());

    let t = std::time::Instant::now();
    let algebra = hypermill::corpus::algebra_suite(100, 3);
    println!("{}", algebra.render());
    println!("algebra elapsed {:.1}s", t.elapsed().as_secs_f64());

    let t = std::time::Instant::now();
    let logic = hypermill::corpus::logic_suite(30, 3);
    println!("{}", logic.render());
    println!("logic elapsed {:.1}s", t.elapsed().as_secs_f64());

    let t = std::time::Instant::now();
    let sem = hypermill::corpus::semantics_suite(10, 3);
    println!("{}", sem.render());
    println!("semantics elapsed {:.1}s", t.elapsed().as_secs_f64());

    let t = std::time::Instant::now();
    let paper = hypermill::corpus::paper_examples_suite(10_000);
    println!("{}", paper.render());
    println!("paper elapsed {:.1}s", t.elapsed().as_secs_f64());
}
