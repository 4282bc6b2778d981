//! Single-prime human-readable views.

use std::process::ExitCode;

use qwilson_core::cyclotomic::{class_number_real_exact, class_number_real_numeric};
use qwilson_core::quadratic::{class_number_imag, class_number_imag_forms, fundamental_unit, theorem_coefficients};
use qwilson_core::theorems::{rhs_theorem3, rhs_theorem4};
use qwilson_core::{half_product, wilson_product, ResiduePoly};

fn verdict(lhs: &ResiduePoly, rhs: &ResiduePoly) -> &'static str {
    if lhs == rhs {
        "equal"
    } else {
        "DIFFERENT"
    }
}

fn show(label: &str, lhs: &ResiduePoly, rhs: &ResiduePoly) {
    println!("{label}: {}", verdict(lhs, rhs));
    println!("  LHS = {lhs}");
    println!("  RHS = {rhs}");
}

pub fn inspect(p: u64) -> ExitCode {
    match try_inspect(p) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn try_inspect(p: u64) -> qwilson_core::Result<()> {
    let prime = p as u32;
    let wilson = wilson_product(p)?;
    let half16 = half_product(p, 16)?;
    println!("p = {p} (≡ {} mod 4)", p % 4);
    println!("prod_(j=1)^(p-1) [j]_(q^j)        = {wilson}");
    println!("prod_(j=1)^((p-1)/2) [j]_(q^(16j)) = {half16}");
    if p % 4 == 3 {
        let h = class_number_imag(p)?;
        println!("h(-{p}) = {h}");
        show("theorem 1", &wilson, &ResiduePoly::constant(prime, -1));
        let sign = if h.div_ceil(2) % 2 == 0 { 1 } else { -1 };
        let rhs = ResiduePoly::monomial(prime, 1).scalar_mul(&sign.into());
        show("theorem 2", &half16, &rhs);
    } else {
        let h = class_number_real_exact(p)?;
        let eps = fundamental_unit(p)?;
        let t = theorem_coefficients(p, h)?;
        println!("h({p}) = {h}");
        println!("eps = ({} + {}√{p})/2, norm {}", eps.x, eps.y, eps.norm);
        println!("A = {}, B = {}, C = {}, D = {}", t.a, t.b, t.c, t.d);
        show("theorem 3", &wilson, &rhs_theorem3(p)?);
        let rhs4 = rhs_theorem4(p)?;
        show("theorem 4 (t = 16)", &half16, &rhs4);
        show("theorem 4 (t = 1)", &half_product(p, 1)?, &rhs4);
    }
    Ok(())
}

pub fn classnum(p: u64) -> ExitCode {
    match try_classnum(p) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Returns whether the two independent computations agree.
fn try_classnum(p: u64) -> qwilson_core::Result<bool> {
    if p % 4 == 3 {
        let h = class_number_imag(p)?;
        let forms = class_number_imag_forms(p)?;
        println!("h(-{p}) = {h}");
        println!("  reduced forms of discriminant -{p}: {forms}");
        return Ok(h == forms);
    }
    let h = class_number_real_exact(p)?;
    let eps = fundamental_unit(p)?;
    println!("h({p}) = {h}");
    println!("eps = ({} + {}√{p})/2, norm {}", eps.x, eps.y, eps.norm);
    let numeric = class_number_real_numeric(p)?;
    println!(
        "  numeric estimate: {} (off by {:.3e} at {} bits)",
        numeric.h, numeric.residue, numeric.bits
    );
    Ok(numeric.h == h)
}
