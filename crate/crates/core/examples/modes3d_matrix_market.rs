//! Generate the ModES3D model Hamiltonian, write it as Matrix Market, read it
//! back and estimate its spectral interval.

use specsweep::operator::{estimate_bounds, gen_modes3d, load_matrix_market, save_matrix_market, Modes3dParams};
use specsweep::LinearOperator;

fn main() -> specsweep::Result<()> {
    let params = Modes3dParams::with_cells(1);
    let a = gen_modes3d(&params)?;
    println!("ModES3D_1: N = {}, nnz = {}", a.dim(), a.nnz());

    let path = std::env::temp_dir().join("modes3d_1.mtx");
    save_matrix_market(&path, &a)?;
    let b = load_matrix_market(&path)?;
    assert_eq!(a.values(), b.values());
    println!("round trip through {} is exact", path.display());

    let (g_lo, g_hi) = a.gershgorin();
    let bounds = estimate_bounds(&a, 200, 0)?;
    let (lo, hi) = bounds.effective();
    println!("Gershgorin [{g_lo:.3}, {g_hi:.3}]");
    println!("estimated  [{:.3}, {:.3}], widened to [{lo:.3}, {hi:.3}]", bounds.a, bounds.b);
    Ok(())
}
