//! Evaluates the kernel on a few pairs of distributions and compares the
//! subset recursion with direct enumeration.

use phash_bounds::kernel::{psi_eval_naive, psi_gradient, psi_uniform};
use phash_bounds::{psi_eval, Distribution, KernelContext};

fn main() -> phash_bounds::Result<()> {
    let ctx = KernelContext::new(6, 4)?;
    let u = Distribution::uniform(6);
    println!("Psi(u, u), b=6, j=4: {:.10} (closed form {:.10})", psi_eval(&ctx, &u, &u)?, psi_uniform(&ctx));

    let vertex = Distribution::point_mass(6, 0);
    let rest = Distribution::new(&[0.0, 0.2, 0.2, 0.2, 0.2, 0.2], 6)?;
    let fast = psi_eval(&ctx, &vertex, &rest)?;
    let slow = psi_eval_naive(&ctx, &vertex, &rest)?;
    println!("Psi(e_1, uniform on the rest): {fast:.10} (enumeration {slow:.10})");

    let p = Distribution::from_weights(&[3.0, 1.0, 1.0, 2.0, 0.5, 0.5])?;
    let (gp, gq) = psi_gradient(&ctx, &p, &u)?;
    println!("gradient at (p, u):\n  d/dp {gp:.5?}\n  d/dq {gq:.5?}");
    Ok(())
}
