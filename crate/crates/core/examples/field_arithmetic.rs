//! Arithmetic and ordering in ℝ(ε), the field of rational functions in one
//! positive infinitesimal.

use epicheck::field::{EpsPoly, NonstdNum, Rational};

fn main() {
    let eps = NonstdNum::epsilon();
    let one = NonstdNum::one();

    // 1/(1 - ε) stays an exact rational function
    let x = &one / &(&one - &eps);
    println!("1/(1-ε)        = {x}");
    println!("standard part  = {}", x.standard_part().unwrap());
    println!("at ε = 1/100   = {}", x.eval_at(&Rational::frac(1, 100)).unwrap());

    // every power of ε sits below every positive rational
    let tiny = NonstdNum::from_rational(Rational::frac(1, 1_000_000));
    for k in 1..=3 {
        println!("ε^{k} < 1/10^6   : {}", eps.pow(k) < tiny);
    }
    println!("1/ε > 10^6     : {}", eps.recip().unwrap() > NonstdNum::from_int(1_000_000));

    // common factors cancel, so equal values compare equal structurally
    let num = EpsPoly::from_ints(&[1, 0, -1]); // 1 - ε²
    let den = EpsPoly::from_ints(&[1, 1]); // 1 + ε
    let y = NonstdNum::from_parts(0, num, den).unwrap();
    println!("(1-ε²)/(1+ε)   = {y}");
    println!("equals 1 - ε   : {}", y == &one - &eps);

    // JSON uses exact strings; floats are rejected
    println!("json           = {}", serde_json::to_string(&y).unwrap());
    let parsed: NonstdNum = serde_json::from_str("\"eps\"").unwrap();
    println!("\"eps\" parses to {parsed}");
    println!("0.5 rejected   : {}", serde_json::from_str::<NonstdNum>("0.5").is_err());
}
