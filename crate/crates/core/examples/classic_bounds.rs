//! Closed-form rate bounds for a few alphabet / list sizes.

use phash_bounds::classic::{
    conjecture_bound, dvj_bound, fk_bound, km_bound, km_default_range, rate_bound_from_m,
};

fn main() -> phash_bounds::Result<()> {
    println!("(b,k)    FK        KM (j)       j=2 gen.  conjecture");
    for (b, k) in [(5, 4), (6, 6), (8, 7), (11, 10)] {
        let km = km_bound(b, k, km_default_range(k))?;
        println!(
            "({b},{k})  {:.5}  {:.5} ({})  {:.5}   {:.5}",
            fk_bound(b, k)?.value,
            km.value,
            km.params.j.unwrap_or(0),
            dvj_bound(b, k)?.value,
            conjecture_bound(b, k)?.value,
        );
    }
    // the rate formula applied to a known kernel maximum
    let r = rate_bound_from_m(6, 6, 4, 5.0 / 27.0)?;
    println!("M = 5/27 at (6,6), j=4 gives {:.7} = 5/59", r.value);
    Ok(())
}
