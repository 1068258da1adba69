//! Machine-readable report shapes emitted by the command line front end.
//! Rationals are `"num/den"` strings; polynomials are arrays of them with
//! index = power.

use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::family::SpernerFamily;
use crate::fixed_point::{classify, Classification, FixedPointReport};
use crate::iteration::{iterate_float, l1_distance, limit_function};
use crate::modules::module_by_cube;
use crate::scalar::rational_to_string;
use crate::RationalPoly;

pub fn ser_rational<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_to_string(q))
}

// module coefficients are integers, so are the endpoint slopes
fn integer(q: &BigRational) -> i64 {
    debug_assert!(q.is_integer());
    q.to_integer().try_into().unwrap_or(i64::MAX)
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuleReport {
    pub family: SpernerFamily,
    pub h: RationalPoly,
    pub g: RationalPoly,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub hprime0: i64,
    pub hprime1: i64,
    pub classification: Classification,
}

/// Module, Sperner polynomial, profile and endpoint slopes of a family.
pub fn module_report(family: &SpernerFamily) -> ModuleReport {
    let pair = module_by_cube(family);
    let prof = family.profile();
    let dh = pair.h.derivative();
    let zero = BigRational::from_integer(0.into());
    let one = BigRational::from_integer(1.into());
    ModuleReport {
        family: family.clone(),
        hprime0: integer(&dh.eval(&zero)),
        hprime1: integer(&dh.eval(&one)),
        h: pair.h,
        g: pair.g,
        a: prof.a,
        b: prof.b,
        classification: classify(family),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FixpointJson {
    pub classification: Classification,
    #[serde(serialize_with = "ser_rational")]
    pub omega_lo: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub omega_hi: BigRational,
    pub omega: f64,
    pub hprime_omega: f64,
}

impl From<&FixedPointReport> for FixpointJson {
    fn from(r: &FixedPointReport) -> Self {
        FixpointJson {
            classification: r.classification,
            omega_lo: r.omega_lo.clone(),
            omega_hi: r.omega_hi.clone(),
            omega: r.omega,
            hprime_omega: r.hprime_at_omega,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterateRow {
    pub t: f64,
    #[serde(rename = "hN")]
    pub h_n: f64,
    pub hinf: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IterateReport {
    #[serde(rename = "N")]
    pub depth: usize,
    pub l1: f64,
    /// Absent for the identity, which has no Sperner point.
    pub omega: Option<f64>,
    pub rows: Vec<IterateRow>,
}

/// `h^(N)` and `h^(inf)` on `rows + 1` equispaced points plus the L1
/// distance on a `grid`-point quadrature.
pub fn iterate_report(
    h: &RationalPoly,
    report: &FixedPointReport,
    depth: usize,
    rows: usize,
    grid: usize,
) -> Result<IterateReport> {
    let l1 = l1_distance(h, report, depth, grid)?;
    let rows = (0..=rows)
        .map(|i| {
            let t = i as f64 / rows as f64;
            IterateRow {
                t,
                h_n: iterate_float(h, t, depth),
                hinf: limit_function(report, t),
            }
        })
        .collect();
    Ok(IterateReport {
        depth,
        l1,
        omega: (report.classification != Classification::Identity).then_some(report.omega),
        rows,
    })
}

/// A float exactly as it appears in JSON output.
pub fn num(x: f64) -> String {
    serde_json::Value::from(x).to_string()
}

/// Renders rows as `t,hN,hinf` CSV with a header line.
pub fn iterate_csv(rows: &[IterateRow]) -> String {
    let mut out = String::from("t,hN,hinf\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", num(r.t), num(r.h_n), num(r.hinf)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixed_point::{default_tol, sperner_point};

    #[test]
    fn module_report_shape() {
        let f: SpernerFamily = "n=4;{1,2},{3,4}".parse().unwrap();
        let v = serde_json::to_value(module_report(&f)).unwrap();
        assert_eq!(
            v["h"],
            serde_json::json!(["0/1", "0/1", "4/1", "-4/1", "1/1"])
        );
        assert_eq!(v["a"], serde_json::json!([0, 0, 4, 4, 1]));
        assert_eq!(v["classification"], "interior");
        assert_eq!(v["hprime0"], 0);
        assert_eq!(v["hprime1"], 0);
    }

    #[test]
    fn csv_and_json_share_numbers() {
        let f: SpernerFamily = "n=4;{1,2},{3,4}".parse().unwrap();
        let r = sperner_point(&f, &default_tol()).unwrap();
        let h = module_by_cube(&f).h;
        let rep = iterate_report(&h, &r, 3, 10, 1000).unwrap();
        let csv = iterate_csv(&rep.rows);
        let json = serde_json::to_value(&rep).unwrap();
        for (line, row) in csv.lines().skip(1).zip(json["rows"].as_array().unwrap()) {
            let nums: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
            assert_eq!(nums[0], row["t"].as_f64().unwrap());
            assert_eq!(nums[1], row["hN"].as_f64().unwrap());
            assert_eq!(nums[2], row["hinf"].as_f64().unwrap());
        }
    }
}
