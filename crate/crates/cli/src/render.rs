use num_complex::Complex64;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use sixvertex::{Field, Scalar};

/// Relative tolerance for float-mode agreement between methods.
pub const FLOAT_AGREEMENT: f64 = 1e-8;

/// Output-side behaviour of the two scalar types.
pub trait Rendered: Field {
    /// `{re, im}` as rational (exact) or decimal (float) strings.
    fn render(&self) -> Value;
    fn agrees(&self, other: &Self) -> bool;
}

impl Rendered for Scalar {
    fn render(&self) -> Value {
        json!({ "re": self.re().to_string(), "im": self.im().to_string() })
    }

    fn agrees(&self, other: &Self) -> bool {
        self == other
    }
}

impl Rendered for Complex64 {
    fn render(&self) -> Value {
        json!({ "re": self.re.to_string(), "im": self.im.to_string() })
    }

    fn agrees(&self, other: &Self) -> bool {
        let scale = self.norm().max(other.norm());
        (self - other).norm() <= FLOAT_AGREEMENT * scale
    }
}

/// Ten significant digits of each component, with sub-noise components
/// snapped to zero, so exact and float runs of the same value match.
pub fn canonical(value: Complex64) -> String {
    let scale = value.norm();
    let snap = |x: f64| if x.abs() <= 1e-12 * scale || x == 0.0 { 0.0 } else { x };
    format!("{:.9e},{:.9e}", snap(value.re), snap(value.im))
}

pub fn digest<F: Field>(value: &F) -> String {
    let hash = Sha256::digest(canonical(value.to_c64()).as_bytes());
    hex::encode(&hash[..6])
}
