//! The linear algebra underneath: evaluate a polynomial at the shifted
//! points `1 + α_j` and recover its coefficients through the Vandermonde
//! inverse, as every decoder does with the constant term.
//!
//!     cargo run --example field_decoding

use pma::field::{build_upsilon, decode_constant, EvalPoints, Field};

fn main() -> pma::error::Result<()> {
    let f = Field::new(13)?;
    let points = EvalPoints::canonical(&f, 4)?;
    // κ = 3 plus interference 5x + 7x^2 + 11x^3
    let coeffs: Vec<_> = [3, 5, 7, 11].iter().map(|&c| f.reduce(c)).collect();
    let evals: Vec<_> = (0..4).map(|j| f.eval_poly(&coeffs, points.shifted(&f, j))).collect();

    let upsilon = build_upsilon(&f, &points, 4)?;
    println!("Υ = {:?}", upsilon.to_rows());
    let back = upsilon.inverse(&f)?.mul_vec(&f, &evals)?;
    let show = |v: &[pma::field::Fe]| v.iter().map(|x| x.value()).collect::<Vec<_>>();
    println!("evaluations {:?} -> coefficients {:?}", show(&evals), show(&back));
    println!("count = {}", decode_constant(&f, &points, &evals, 5)?);
    Ok(())
}
