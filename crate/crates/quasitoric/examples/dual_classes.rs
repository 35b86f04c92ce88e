//! The dual class machinery in the abstract t-generator ring, with the
//! coefficient-parity table and its binomial closed form.
//!
//! Usage:
//!   cargo run --example dual_classes -- 8

use quasitoric::t_ring::{dual_total_class, lucas_binom, sigma_table, total_class};

fn main() {
    let n_max: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("n-max must be a number"))
        .unwrap_or(8);

    for n in 2..=n_max {
        let dual = dual_total_class(n);
        println!("n={n}: {}", dual.render());
        let product = total_class(n).mul(&dual);
        assert_eq!(product.render(), "1", "total * dual reduces to 1");
        let rank = (1..n).rev().find(|&k| !dual.degree_part(k).is_zero());
        println!(
            "  rank of dual = {:?}, n - alpha(n) = {}",
            rank.unwrap_or(0),
            n - (n as u32).count_ones() as usize
        );
    }

    println!("\nsigma table (coefficient parities) vs binomial parity:");
    for n in 1..=n_max {
        let row = sigma_table(n);
        let closed: Vec<u8> = (0..n).map(|k| lucas_binom((n + k) as u64, k as u64)).collect();
        assert_eq!(row.sigma, closed);
        let cells: Vec<String> = row.sigma.iter().map(|s| s.to_string()).collect();
        println!("  n={n}: {}", cells.join(" "));
    }
}
