//! The differential-axle example: plant and PI controller series from their
//! realizations, the feedback product by both inverse routes, the
//! closed-loop realization as an independent oracle, natural responses and
//! growth fits.

use std::fmt::Write as _;
use std::time::Instant;

use fliess_core::feedback::{feedback_product_with, radius_global_inverse, InverseMethod};
use fliess_core::fliess_eval::{growth_fit, natural_response_taylor, FitMode};
use fliess_core::rational::{format_significant, int, ratio};
use fliess_core::realization::{
    closed_loop_realization, examples, natural_response_coefficients, series_from_realization,
};
use fliess_core::{Rational, Word};

use crate::{CliResult, Failure};

fn w(s: &str) -> Word {
    s.parse().expect("literal word")
}

struct Report {
    text: String,
    failures: usize,
}

impl Report {
    fn check(&mut self, label: &str, ok: bool, detail: impl std::fmt::Display) {
        if !ok {
            self.failures += 1;
        }
        let _ = writeln!(self.text, "[{}] {label}: {detail}", if ok { "ok" } else { "FAIL" });
    }

    fn note(&mut self, line: impl std::fmt::Display) {
        let _ = writeln!(self.text, "      {line}");
    }
}

pub(crate) fn reproduce(n: usize, fit_order: usize) -> CliResult<String> {
    if n < 7 {
        return Err(Failure::precondition("reproduce-axle needs --max-degree of at least 7"));
    }
    let start = Instant::now();
    let mut r = Report { text: String::new(), failures: 0 };
    let plant = examples::axle_plant(n + 2)?;
    let controller = examples::pi_controller(n + 2)?;
    let c = series_from_realization(&plant, n)?;
    let d = series_from_realization(&controller, n)?;

    let mut pattern = true;
    for k in 0..=(n - 1) / 2 {
        let sign = if k % 2 == 0 { int(1) } else { int(-1) };
        pattern &= c.coeff(0, &w("x1").concat(&Word::power(2, 2 * k))) == sign;
        if 2 * k + 2 <= n {
            pattern &= c.coeff(1, &w("x1").concat(&Word::power(2, 2 * k + 1))) == sign;
        }
    }
    let support = c.component(0).len() + c.component(1).len();
    r.check("plant series c", pattern && support == n, format!("alternating x1 x2^k pattern through length {n}"));
    r.check("controller series d", d.format().ends_with("1 4 e\n1 2 x1\n2 20 e\n2 10 x2\n"), "d = (4 + 2 x1, 20 + 10 x2)");

    let y = feedback_product_with(&c, &d, n, InverseMethod::Antipode)?;
    let y_fixed = feedback_product_with(&c, &d, n, InverseMethod::FixedPoint)?;
    r.check("inverse routes", y == y_fixed, "antipode and fixed-point feedback products agree exactly");

    let expected: [(usize, &str, Rational); 8] = [
        (0, "x0", int(4)),
        (0, "x1", int(1)),
        (0, "x0x0x0", int(-1592)),
        (0, "x0x0x0x0x0", int(617616)),
        (1, "x0x0", int(80)),
        (1, "x0x0x0x0", int(-31520)),
        (1, "x0x0x0x0x0", int(3200)),
        (1, "x0x0x0x0x0x0", int(11841600)),
    ];
    for (i, word, q) in expected {
        let got = y.coeff(i, &w(word));
        r.check(&format!("(c@d)_{} on {word}", i + 1), got == q, format!("{got} (expected {q})"));
    }

    let responses = natural_response_taylor(&y, 7)?;
    let y1 = [int(0), int(4), int(0), ratio(-796, 3), int(0), ratio(25734, 5), ratio(-4000, 9), ratio(-13528798, 315)];
    let y2 = [int(0), int(0), int(40), int(0), ratio(-3940, 3), ratio(80, 3), ratio(49340, 3)];
    r.check("y1 through t^7", responses[0].coefficients[..8] == y1, "exact rational Taylor coefficients");
    r.check("y2 through t^6", responses[1].coefficients[..7] == y2, "exact rational Taylor coefficients");

    let closed = closed_loop_realization(&plant, &controller)?;
    let oracle_n = n.min(6);
    let oracle = series_from_realization(&closed, oracle_n)?;
    r.check(
        "closed-loop oracle",
        oracle == y.truncate(oracle_n),
        format!("closed-loop realization series equals c@d through length {oracle_n}"),
    );
    r.check(
        "(c@d)_1 on x1x0x2",
        y.coeff(0, &w("x1x0x2")) == int(-20),
        format!("(c@d)_1 on x1x0x2 is {}", y.coeff(0, &w("x1x0x2"))),
    );

    let b = radius_global_inverse(20.0, 1.0, 2)?;
    r.check(
        "global inverse growth",
        (b.geometric_constant - 40.50).abs() < 5e-3,
        format!("1/ln(1 + 1/40) = {}", format_significant(b.geometric_constant, 9)),
    );

    let deep = closed_loop_realization(&examples::axle_plant(fit_order + 2)?, &examples::pi_controller(fit_order + 2)?)?;
    let natural = natural_response_coefficients(&deep, fit_order)?;
    for (i, coeffs) in natural.iter().enumerate() {
        for mode in [FitMode::Global, FitMode::Local] {
            match growth_fit(coeffs, mode, 3, fit_order) {
                Ok(fit) => r.note(format!(
                    "growth fit (c@d)_{} {:?} orders 3..={fit_order}: slope {}, M {}, R² {}",
                    i + 1,
                    mode,
                    format_significant(fit.slope, 6),
                    format_significant(fit.m_estimate, 6),
                    format_significant(fit.r_squared, 6)
                )),
                Err(e) => r.note(format!("growth fit (c@d)_{} {mode:?}: {e}", i + 1)),
            }
        }
    }
    r.note("reference global estimate: slope 3.1157, M 22.549 (fit window not stated)");
    r.note(format!("elapsed {:.2} s", start.elapsed().as_secs_f64()));

    if r.failures > 0 {
        return Err(Failure::precondition(format!("{}{} cross-check(s) failed", r.text, r.failures)));
    }
    Ok(r.text)
}
