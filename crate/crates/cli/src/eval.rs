//! Single-object evaluation for `ellr eval`.

use clap::ValueEnum;
use ellr_core::rmatrix::{gamma_matrix, n_matrix, r_matrix, ratio_matrix};
use ellr_core::special::{rho_norm, theta};
use ellr_core::{CMat, Cx, Gauge, Params, Result};
use serde_json::{json, Value};

use crate::complex::format_complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Object {
    #[value(name = "R")]
    R,
    #[value(name = "Rtilde")]
    RTilde,
    #[value(name = "theta")]
    Theta,
    #[value(name = "rho")]
    Rho,
    #[value(name = "N")]
    N,
    #[value(name = "G")]
    G,
    #[value(name = "Gamma")]
    Gamma,
}

impl Object {
    pub fn name(self) -> &'static str {
        match self {
            Object::R => "R",
            Object::RTilde => "Rtilde",
            Object::Theta => "theta",
            Object::Rho => "rho",
            Object::N => "N",
            Object::G => "G",
            Object::Gamma => "Gamma",
        }
    }

    pub fn needs_z(self) -> bool {
        matches!(self, Object::R | Object::RTilde | Object::Theta | Object::Rho)
    }

    pub fn needs_s(self) -> bool {
        !matches!(self, Object::Theta | Object::Rho)
    }
}

/// The evaluated object.
#[derive(Debug, Clone, PartialEq)]
pub enum Evaluated {
    Scalar(Cx),
    Matrix(CMat),
}

pub fn evaluate(object: Object, params: &Params, z: Cx, s: Cx) -> Result<Evaluated> {
    Ok(match object {
        Object::R => Evaluated::Matrix(r_matrix(z, params, Gauge::Standard)?.eval(s)?),
        Object::RTilde => Evaluated::Matrix(r_matrix(z, params, Gauge::Twisted)?.eval(s)?),
        Object::Theta => Evaluated::Scalar(theta(z, params)?),
        Object::Rho => Evaluated::Scalar(rho_norm(z, params)?),
        Object::N => Evaluated::Matrix(n_matrix(params).eval(s)?),
        Object::G => Evaluated::Matrix(ratio_matrix(params).eval(s)?),
        Object::Gamma => Evaluated::Matrix(gamma_matrix(params).eval(s)?),
    })
}

/// One line per entry: `row col re im`, or `re im` for scalars.
pub fn to_text(value: &Evaluated) -> String {
    match value {
        Evaluated::Scalar(c) => format!("{:?} {:?}\n", c.re, c.im),
        Evaluated::Matrix(m) => {
            let mut out = String::new();
            for r in 0..m.nrows() {
                for c in 0..m.ncols() {
                    let x = m[(r, c)];
                    out.push_str(&format!("{r} {c} {:?} {:?}\n", x.re, x.im));
                }
            }
            out
        }
    }
}

pub fn to_json(object: Object, params: &Params, z: Option<Cx>, s: Option<Cx>, value: &Evaluated) -> Value {
    let cx = |c: Cx| json!([c.re, c.im]);
    let mut doc = json!({
        "object": object.name(),
        "q_half": cx(params.q_half()),
        "p": cx(params.p()),
        "truncation_order": params.truncation_order(),
    });
    if let Some(z) = z {
        doc["z"] = cx(z);
    }
    if let Some(s) = s {
        doc["s"] = cx(s);
    }
    match value {
        Evaluated::Scalar(c) => doc["value"] = cx(*c),
        Evaluated::Matrix(m) => {
            let rows: Vec<Value> = (0..m.nrows())
                .map(|r| Value::Array((0..m.ncols()).map(|c| cx(m[(r, c)])).collect()))
                .collect();
            doc["entries"] = Value::Array(rows);
        }
    }
    doc
}

/// Heading line for text output.
pub fn describe(object: Object, params: &Params, z: Option<Cx>, s: Option<Cx>) -> String {
    let mut parts = vec![
        format!("q_half = {}", format_complex(params.q_half())),
        format!("p = {}", format_complex(params.p())),
    ];
    if let Some(z) = z {
        parts.push(format!("z = {}", format_complex(z)));
    }
    if let Some(s) = s {
        parts.push(format!("s = {}", format_complex(s)));
    }
    format!("# {} at {}\n", object.name(), parts.join(", "))
}
