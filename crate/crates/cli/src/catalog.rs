//! Text listing of the solution families for `wickwave families`.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Entry {
    pub equation: &'static str,
    pub family: u8,
    pub signs: &'static str,
    pub form: &'static str,
    pub params: &'static str,
    pub notes: &'static str,
}

const NLS_PARAMS: &str = "p, q, alpha, beta | c, lambda, speed, phase";
const RLW_PARAMS: &str = "form=general: k, order, mu, p, q, r, s; form=example: k, order, mu, f1, f2, f4, c1, c2, c4, xi, clock";

pub const CATALOG: [Entry; 9] = [
    Entry {
        equation: "nls",
        family: 1,
        signs: "+ -",
        form: "psi = A1 h(eta) e^{i theta}, theta = lambda - 2 alpha d^2",
        params: NLS_PARAMS,
        notes: "A0 = 0; printed speed -2i alpha (p - 2q), balanced -3i alpha (p - q)",
    },
    Entry {
        equation: "nls",
        family: 2,
        signs: "+ -",
        form: "psi = (A0 + A1 h(eta)) e^{i theta}, theta = lambda - 2 alpha d^2",
        params: NLS_PARAMS,
        notes: "A0 = ±2 (alpha/beta) d / s; printed speed 2i alpha (2p - q), balanced 3i alpha (p - q)",
    },
    Entry {
        equation: "nls",
        family: 3,
        signs: "+ -",
        form: "psi = (A0 + A1 h(eta)) e^{i theta}, theta = lambda - alpha d^2 / 2",
        params: NLS_PARAMS,
        notes: "A0 = ±(alpha/beta) d / s; printed speed i alpha (p + q), balanced 0",
    },
    Entry {
        equation: "rlw",
        family: 1,
        signs: "-",
        form: "V = c1/br + c2/br^2, br = B1 - s mu e^{-(B2/s) zeta}",
        params: RLW_PARAMS,
        notes: "lambda = B1/s",
    },
    Entry {
        equation: "rlw",
        family: 2,
        signs: "-",
        form: "V = c2/br^2, br = C1 + s mu e^{-(C2/s) zeta}",
        params: RLW_PARAMS,
        notes: "lambda = -C1/s",
    },
    Entry {
        equation: "rlw",
        family: 3,
        signs: "-",
        form: "V = c1/br + c2/br^2, br = D1 - 6 s mu e^{-(D2/6s) zeta}",
        params: RLW_PARAMS,
        notes: "lambda = D1/(6s)",
    },
    Entry {
        equation: "rlw",
        family: 4,
        signs: "-",
        form: "family 1 bracket plus offset -2k B2^2/(qs)",
        params: RLW_PARAMS,
        notes: "lambda = B1/s",
    },
    Entry {
        equation: "rlw",
        family: 5,
        signs: "-",
        form: "family 2 bracket plus offset 3k B2^2/(4qs)",
        params: RLW_PARAMS,
        notes: "lambda = -C1/s",
    },
    Entry {
        equation: "rlw",
        family: 6,
        signs: "-",
        form: "family 3 bracket plus offset -k B2^2/(3qs)",
        params: RLW_PARAMS,
        notes: "lambda = D1/(6s)",
    },
];

pub fn render() -> String {
    let mut out = String::new();
    out.push_str("h(eta) = d/(p - q e^{-d eta}), d = p - q; s = sqrt(-2 alpha/beta)\n");
    out.push_str("zeta = k X + int_0^T c(tau) d tau, X = x^alpha/Gamma(1+alpha), T = t^alpha/Gamma(1+alpha)\n\n");
    for e in &CATALOG {
        out.push_str(&format!("{} family {}  signs: {}\n", e.equation, e.family, e.signs));
        out.push_str(&format!("  {}\n", e.form));
        out.push_str(&format!("  params: {}\n", e.params));
        out.push_str(&format!("  {}\n", e.notes));
    }
    out
}
