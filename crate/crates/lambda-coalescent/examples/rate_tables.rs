//! Build a rate table, print a small slice of it, and check the two
//! structural identities that pin the rates down: the recursion
//! λ_{m,k} = λ_{m+1,k} + λ_{m+1,k+1} and the row sum g_n = Σ_m g_{n,m}.
//!
//! Run with: cargo run --example rate_tables

use lambda_coalescent::{CharacteristicMeasure, RateTable};

fn main() -> lambda_coalescent::Result<()> {
    for spec in ["uniform", "beta:2,1", "logpareto:0.5"] {
        let measure = CharacteristicMeasure::from_spec(spec)?;
        let table = RateTable::build(&measure, 60)?;

        println!("measure {measure}");
        println!("  n,m,g_nm,p_nm");
        for n in [3u64, 6] {
            for m in 1..n {
                println!(
                    "  {n},{m},{:.6},{:.6}",
                    table.g_nm(n, m),
                    table.jump_distribution(n)[(m - 1) as usize]
                );
            }
        }

        let mut recursion_err: f64 = 0.0;
        for m in 1..60u64 {
            for k in 1..=m {
                let l0 = table.log_lambda(m, k);
                let r = (table.log_lambda(m + 1, k) - l0).exp()
                    + (table.log_lambda(m + 1, k + 1) - l0).exp();
                recursion_err = recursion_err.max((r - 1.0).abs());
            }
        }
        let mut row_err: f64 = 0.0;
        for n in 2..=60u64 {
            let summed: f64 = (1..n).map(|m| table.g_nm(n, m)).sum();
            row_err = row_err.max(((summed - table.g_total(n)) / table.g_total(n)).abs());
        }
        println!("  worst recursion residual: {recursion_err:.3e}");
        println!("  worst row-sum residual:   {row_err:.3e}");
        println!();
    }
    Ok(())
}
