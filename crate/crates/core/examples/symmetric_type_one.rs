//! Symmetric variant: the same download as the plain scheme, but answers are
//! blinded so the user learns the count and nothing else.
//!
//!     cargo run --example symmetric_type_one

use pma::model::{incidences, PartyDataset, RandomSource, SchemeParams, Variant};
use pma::pma1;
use pma::spma1::{self, PartyNoise};

fn main() -> pma::error::Result<()> {
    let params = SchemeParams::new(Variant::Spma1, 3, 3, 2, 0, 4, 11).validate()?;
    let datasets = vec![
        PartyDataset::new([1, 2]),
        PartyDataset::new([2]),
        PartyDataset::new([2, 4]),
    ];
    let inc = incidences(&datasets, params.e())?;
    let theta = 2;

    let mut rng = RandomSource::new(7);
    let queries = pma1::gen_queries(&params, theta, &mut rng)?;
    let masks = pma1::gen_masks(&params, &mut rng);
    let noise = spma1::gen_noise(&params, &mut rng);

    let blinded = spma1::answer_all(&params, &inc, &queries, &masks, &noise)?;
    let plain = spma1::answer_all(&params, &inc, &queries, &masks, &PartyNoise::zero(&params))?;

    let sums = |a: &pma::pma1::AnswerVectorI| -> Vec<u64> { a.column_sums(params.field()).iter().map(|x| x.value()).collect() };
    println!("summed answers without blinding: {:?}", sums(&plain));
    println!("summed answers with blinding:    {:?}", sums(&blinded));
    println!("decoded count: {} (both decode to {})", spma1::decode(&params, &blinded)?, spma1::decode(&params, &plain)?);
    Ok(())
}
