//! Log-gamma, Pochhammer symbols, generalized binomials and hypergeometric
//! series.

use hoa::numerics::{gen_binomial, hyp_series, laguerre, log_gamma, pochhammer, LogReal};

fn main() -> hoa::Result<()> {
    println!("ln Γ(0.5)      = {:.15}", log_gamma(0.5)?);
    println!("ln Γ(1e6)      = {:.6}", log_gamma(1e6)?);
    println!("(2.5)_4        = {}", pochhammer(2.5, 4));
    println!("C(-1/2, 3)     = {}", gen_binomial(-0.5, 3));
    println!("L_3(-2)        = {}", laguerre(3, -2.0));

    // 2F1(-3, 2; 1; 0.5) terminates after four terms.
    let r = hyp_series(&[-3.0, 2.0], &[1.0], 0.5)?;
    println!(
        "2F1(-3,2;1;.5) = {} ({} terms, terminated = {})",
        r.value, r.terms_used, r.terminated
    );

    // 1F1(1; 1; 2) = e^2 needs the convergence rule.
    let r = hyp_series(&[1.0], &[1.0], 2.0)?;
    println!("1F1(1;1;2)     = {} vs e^2 = {}", r.value, 2f64.exp());

    // Denominator hits zero before the numerator terminates.
    println!(
        "2F1(-5,1;-2;1) = {:?}",
        hyp_series(&[-5.0, 1.0], &[-2.0], 1.0).err()
    );

    // Ratios far beyond f64 range stay finite in log space.
    let big = LogReal::new(1, log_gamma(3001.0)?) / LogReal::new(1, log_gamma(2999.0)?);
    println!("3000!/2998!    = {}", big.to_f64());
    Ok(())
}
