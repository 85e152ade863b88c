//! The closed-form iteration counts for both builders.

use krab_callgraph::costmodel::{table1, table_csv, CostRow, DEFAULT_SIZES};

fn main() {
    print!("{}", table_csv(&table1(&DEFAULT_SIZES)));

    println!("\nratio of classical to stack-based cost, worst and average case");
    for n in [10, 100, 1_000, 10_000] {
        let r = CostRow::for_size(n);
        println!(
            "n={n:>6}: {:.4}  {:.1}",
            r.f_n as f64 / r.k_w as f64,
            r.f_n as f64 / r.k_a
        );
    }
}
