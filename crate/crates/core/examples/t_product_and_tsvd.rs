//! t-product, t-SVD, tubal rank and the tensor nuclear norm.

use tubal::algebra::{conj_transpose, identity_tensor, t_product};
use tubal::synth::synth_low_tubal_rank;
use tubal::tsvd::{spectral_singular_values, t_svd, tensor_nuclear_norm, tubal_rank};

fn main() -> tubal::Result<()> {
    let a = synth_low_tubal_rank((20, 15, 6), 3, 7)?;
    let (n1, n2, n3) = a.dims();
    println!("A is {n1}x{n2}x{n3}");

    let f = t_svd(&a)?;
    let err = f.reconstruct()?.relative_error(&a)?;
    println!("U*S*V^T reconstructs A to {err:.2e}");

    let utu = t_product(&conj_transpose(&f.u), &f.u)?;
    println!("|U^T*U - I|_max = {:.2e}", utu.max_abs_diff(&identity_tensor(n1, n3)?)?);

    println!("tubal rank = {}", tubal_rank(&a, 1e-9)?);
    println!("TNN = {:.6}", tensor_nuclear_norm(&a)?);

    let spectrum = spectral_singular_values(&a)?;
    for k in 0..n3 {
        let head: Vec<String> = spectrum.slice(k).iter().take(4).map(|v| format!("{v:9.3}")).collect();
        println!("slice {k}: {}", head.join(" "));
    }
    Ok(())
}
