use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::main_term::{main_term_polynomial, Polynomial};
use super::{dirichlet_beta_one, zeta_laurent, LaurentSeries};
use crate::error::{Error, Result};
use crate::variance::euler_product_c_tau_k;

/// Built-in L-function families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// zeta(s)^k, coefficients tau_k(n).
    TauK(u32),
    /// Dedekind zeta of Q(i) normalised by ideal counts, lambda(n) = r_2(n)/4.
    GaussianIdeals,
    /// Same L-function normalised by lattice points, lambda(n) = r_2(n).
    GaussianLattice,
    /// Weight 12 level 1 cusp form Delta, lambda(n) = tau(n)/n^{11/2}.
    Ramanujan,
}

impl Builtin {
    pub fn id(&self) -> String {
        match self {
            Builtin::TauK(k) => format!("tau_{k}"),
            Builtin::GaussianIdeals => "gaussian_ideals".into(),
            Builtin::GaussianLattice => "gaussian_lattice".into(),
            Builtin::Ramanujan => "ramanujan".into(),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for Builtin {
    type Err = Error;

    /// Accepts `tau_3`, `tau_k(3)`, `gaussian_ideals`, `gaussian_lattice`, `ramanujan`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "gaussian_ideals" => return Ok(Builtin::GaussianIdeals),
            "gaussian_lattice" => return Ok(Builtin::GaussianLattice),
            "ramanujan" => return Ok(Builtin::Ramanujan),
            _ => {}
        }
        let k = s
            .strip_prefix("tau_k(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| s.strip_prefix("tau_"))
            .ok_or_else(|| Error::UnknownDescriptor(s.to_string()))?;
        let k: u32 = k.parse().map_err(|_| Error::UnknownDescriptor(s.to_string()))?;
        if k < 2 {
            return Err(Error::InvalidParameter(format!("tau_k needs k >= 2, got {k}")));
        }
        Ok(Builtin::TauK(k))
    }
}

/// Rankin-Selberg constant c_f: either known in closed form or to be
/// estimated from coefficient data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RsConstant {
    Analytic(f64),
    EstimateFromData,
}

const ESTIMATE_MARKER: &str = "estimate from data";

impl RsConstant {
    pub fn value(&self) -> Option<f64> {
        match self {
            RsConstant::Analytic(c) => Some(*c),
            RsConstant::EstimateFromData => None,
        }
    }
}

impl Serialize for RsConstant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RsConstant::Analytic(c) => s.serialize_f64(*c),
            RsConstant::EstimateFromData => s.serialize_str(ESTIMATE_MARKER),
        }
    }
}

impl<'de> Deserialize<'de> for RsConstant {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(c) => Ok(RsConstant::Analytic(c)),
            Raw::Str(s) if s == ESTIMATE_MARKER => Ok(RsConstant::EstimateFromData),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("unrecognised rs_c `{s}`"))),
        }
    }
}

/// Everything the laboratory needs to know about one L-function.
/// Immutable once built; construct through [`LFunctionDescriptor::new`] or
/// [`builtin_descriptor`] so the derived fields stay consistent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDescriptor")]
pub struct LFunctionDescriptor {
    pub id: String,
    pub m: u32,
    #[serde(rename = "D")]
    pub conductor: f64,
    pub kappa_re: Vec<f64>,
    pub weight_k: f64,
    pub w: i8,
    pub phi: f64,
    pub pole_order: u32,
    pub rs_c: RsConstant,
    pub rs_r: u32,
    pub main_term_poly: Polynomial,
}

#[derive(Deserialize)]
struct RawDescriptor {
    id: String,
    m: u32,
    #[serde(rename = "D")]
    conductor: f64,
    kappa_re: Vec<f64>,
    weight_k: f64,
    w: i8,
    phi: f64,
    pole_order: u32,
    rs_c: RsConstant,
    rs_r: u32,
    main_term_poly: Polynomial,
}

impl TryFrom<RawDescriptor> for LFunctionDescriptor {
    type Error = Error;

    fn try_from(r: RawDescriptor) -> Result<Self> {
        let d = LFunctionDescriptor {
            id: r.id,
            m: r.m,
            conductor: r.conductor,
            kappa_re: r.kappa_re,
            weight_k: r.weight_k,
            w: r.w,
            phi: r.phi,
            pole_order: r.pole_order,
            rs_c: r.rs_c,
            rs_r: r.rs_r,
            main_term_poly: r.main_term_poly,
        };
        d.validate()?;
        Ok(d)
    }
}

/// (pi/2)((m-1)/2 - k) reduced to (-pi, pi].
pub fn voronoi_phase(m: u32, weight_k: f64) -> f64 {
    reduce_angle(PI / 2.0 * ((m as f64 - 1.0) / 2.0 - weight_k))
}

/// Representative of x modulo 2 pi in (-pi, pi].
pub fn reduce_angle(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut r = (x + PI).rem_euclid(two_pi) - PI;
    if r <= -PI {
        r += two_pi;
    }
    r
}

impl LFunctionDescriptor {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        id: impl Into<String>,
        m: u32,
        conductor: f64,
        kappa_re: Vec<f64>,
        w: i8,
        pole_order: u32,
        rs_c: RsConstant,
        rs_r: u32,
        main_term_poly: Polynomial,
    ) -> Result<Self> {
        let weight_k = kappa_re.iter().sum();
        let d = LFunctionDescriptor {
            id: id.into(),
            m,
            conductor,
            phi: voronoi_phase(m, weight_k),
            kappa_re,
            weight_k,
            w,
            pole_order,
            rs_c,
            rs_r,
            main_term_poly: main_term_poly.trimmed(),
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(format!("descriptor `{}`: {msg}", self.id)));
        if self.m < 2 {
            return bad(format!("degree m = {} < 2", self.m));
        }
        if !(self.conductor > 0.0 && self.conductor.is_finite()) {
            return bad(format!("conductor D = {} not positive", self.conductor));
        }
        if self.w != 1 && self.w != -1 {
            return bad(format!("root number w = {} not in {{-1, +1}}", self.w));
        }
        if self.kappa_re.len() != self.m as usize {
            return bad(format!("{} gamma parameters for degree {}", self.kappa_re.len(), self.m));
        }
        let sum: f64 = self.kappa_re.iter().sum();
        if (sum - self.weight_k).abs() > 1e-12 {
            return bad(format!("weight_k = {} but kappa_re sums to {sum}", self.weight_k));
        }
        let expect = voronoi_phase(self.m, self.weight_k);
        if reduce_angle(self.phi - expect).abs() > 1e-12 {
            return bad(format!("phi = {} inconsistent with weight (expected {expect})", self.phi));
        }
        if self.pole_order == 0 && !self.main_term_poly.is_zero() {
            return bad("entire L-function with a non-zero main term".into());
        }
        if self.pole_order > 0 && self.main_term_poly.degree() != Some(self.pole_order as usize - 1) {
            return bad(format!(
                "main term degree {:?} does not match pole order {}",
                self.main_term_poly.degree(),
                self.pole_order
            ));
        }
        if let RsConstant::Analytic(c) = self.rs_c {
            if !(c > 0.0) {
                return bad(format!("rs_c = {c} not positive"));
            }
        }
        if self.rs_r < 1 {
            return bad("rs_r must be >= 1".into());
        }
        Ok(())
    }

    /// The main term y -> y P(ln y), i.e. Res_{s=1} L(f,s) y^s / s.
    pub fn main_term(&self, y: f64) -> f64 {
        if self.main_term_poly.is_zero() || y <= 0.0 {
            return 0.0;
        }
        y * self.main_term_poly.eval(y.ln())
    }

    /// MainTerm(y1^m) - MainTerm(y0^m) without cancelling the leading y^m growth.
    pub fn main_term_difference(&self, x0: f64, x1: f64) -> f64 {
        let p = &self.main_term_poly;
        if p.is_zero() || x0 == x1 {
            return 0.0;
        }
        let m = self.m as i32;
        // y1 - y0 with y = x^m: (x1 - x0) * sum x1^i x0^(m-1-i)
        let h = x1 - x0;
        let spread: f64 = (0..m).map(|i| x1.powi(i) * x0.powi(m - 1 - i)).sum();
        let dy = h * spread;
        let (u0, u1) = (m as f64 * x0.ln(), m as f64 * x1.ln());
        let du = m as f64 * (h / x0).ln_1p();
        // P(u1) - P(u0) = du * sum_j c_j sum_i u1^i u0^(j-1-i)
        let dp: f64 = p
            .coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| {
                let s: f64 = (0..j as i32).map(|i| u1.powi(i) * u0.powi(j as i32 - 1 - i)).sum();
                c * s
            })
            .sum::<f64>()
            * du;
        dy * p.eval(u1) + x0.powi(m) * dp
    }
}

/// Fully populated descriptor for a built-in family.
pub fn builtin_descriptor(which: Builtin) -> Result<LFunctionDescriptor> {
    match which {
        Builtin::TauK(k) => {
            if k < 2 {
                return Err(Error::InvalidParameter(format!("tau_k needs k >= 2, got {k}")));
            }
            let series = zeta_laurent((k - 1) as usize)?.pow(k);
            let poly = main_term_polynomial(&series)?;
            let rs_c = if k == 2 {
                1.0 / (PI * PI)
            } else {
                euler_product_c_tau_k(k, 100_000)?.value
            };
            LFunctionDescriptor::new(
                which.id(),
                k,
                1.0,
                vec![0.0; k as usize],
                1,
                k,
                RsConstant::Analytic(rs_c),
                k * k,
                poly,
            )
        }
        Builtin::GaussianIdeals | Builtin::GaussianLattice => {
            let scale = if which == Builtin::GaussianLattice { 4.0 } else { 1.0 };
            let chi_value = LaurentSeries::taylor(vec![scale * dirichlet_beta_one()]);
            let series = zeta_laurent(0)?.mul(&chi_value);
            let poly = main_term_polynomial(&series)?;
            LFunctionDescriptor::new(
                which.id(),
                2,
                4.0,
                vec![0.0, 1.0],
                1,
                1,
                RsConstant::Analytic(0.25 * scale * scale),
                2,
                poly,
            )
        }
        Builtin::Ramanujan => LFunctionDescriptor::new(
            which.id(),
            2,
            1.0,
            vec![5.5, 6.5],
            1,
            0,
            RsConstant::EstimateFromData,
            1,
            Polynomial::zero(),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau2_descriptor() {
        let d = builtin_descriptor(Builtin::TauK(2)).unwrap();
        assert_eq!(d.m, 2);
        assert_eq!(d.rs_r, 4);
        assert_eq!(d.pole_order, 2);
        assert_eq!(d.weight_k, 0.0);
        assert!((d.phi - PI / 4.0).abs() < 1e-15);
        let c = d.rs_c.value().unwrap() * 2f64.powi(4);
        assert!((c - 16.0 / (PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn gaussian_descriptor() {
        let d = builtin_descriptor(Builtin::GaussianIdeals).unwrap();
        assert_eq!((d.m, d.conductor, d.rs_r), (2, 4.0, 2));
        assert_eq!(d.rs_c, RsConstant::Analytic(0.25));
        // c_f d^d = 1
        assert_eq!(d.rs_c.value().unwrap() * 4.0, 1.0);
        assert!((d.phi + PI / 4.0).abs() < 1e-15);
        assert!((d.main_term_poly.coeffs()[0] - PI / 4.0).abs() < 1e-13);
    }

    #[test]
    fn ramanujan_is_entire() {
        let d = builtin_descriptor(Builtin::Ramanujan).unwrap();
        assert_eq!(d.pole_order, 0);
        assert!(d.main_term_poly.is_zero());
        assert_eq!(d.main_term(1e6), 0.0);
        assert_eq!(d.rs_c, RsConstant::EstimateFromData);
        assert_eq!(d.weight_k, 12.0);
        // (pi/2)(1/2 - 12) = -23 pi / 4 = pi/4 mod 2 pi
        assert!((d.phi - PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn parse_names() {
        assert_eq!("tau_k(3)".parse::<Builtin>().unwrap(), Builtin::TauK(3));
        assert_eq!("tau_2".parse::<Builtin>().unwrap(), Builtin::TauK(2));
        assert!("tau_1".parse::<Builtin>().is_err());
        assert!("tau_k(1)".parse::<Builtin>().is_err());
        assert!(matches!("sym2".parse::<Builtin>(), Err(Error::UnknownDescriptor(_))));
    }

    #[test]
    fn json_round_trip_and_field_names() {
        for b in [Builtin::TauK(3), Builtin::GaussianIdeals, Builtin::Ramanujan] {
            let d = builtin_descriptor(b).unwrap();
            let js = serde_json::to_value(&d).unwrap();
            for key in ["id", "m", "D", "kappa_re", "weight_k", "w", "phi", "pole_order", "rs_c", "rs_r", "main_term_poly"] {
                assert!(js.get(key).is_some(), "missing {key}");
            }
            let back: LFunctionDescriptor = serde_json::from_value(js).unwrap();
            assert_eq!(back, d);
        }
        let r = serde_json::to_value(builtin_descriptor(Builtin::Ramanujan).unwrap()).unwrap();
        assert_eq!(r["rs_c"], "estimate from data");
    }

    #[test]
    fn invalid_json_rejected() {
        let d = builtin_descriptor(Builtin::GaussianIdeals).unwrap();
        let mut js = serde_json::to_value(&d).unwrap();
        js["w"] = serde_json::json!(2);
        assert!(serde_json::from_value::<LFunctionDescriptor>(js.clone()).is_err());
        js["w"] = serde_json::json!(1);
        js["weight_k"] = serde_json::json!(3.0);
        assert!(serde_json::from_value::<LFunctionDescriptor>(js).is_err());
    }

    #[test]
    fn main_term_difference_matches_direct() {
        let d = builtin_descriptor(Builtin::TauK(3)).unwrap();
        let (x0, x1): (f64, f64) = (37.25, 37.5);
        let direct = d.main_term(x1.powi(3)) - d.main_term(x0.powi(3));
        let diff = d.main_term_difference(x0, x1);
        assert!((direct - diff).abs() < 1e-9 * direct.abs());
    }

    #[test]
    fn main_term_increasing() {
        for b in [Builtin::TauK(2), Builtin::TauK(3), Builtin::GaussianIdeals] {
            let d = builtin_descriptor(b).unwrap();
            let mut prev = d.main_term(10.0);
            for i in 1..200 {
                let y = 10.0 * 1.1f64.powi(i);
                let v = d.main_term(y);
                assert!(v > prev, "{b} not increasing at {y}");
                prev = v;
            }
        }
    }
}
