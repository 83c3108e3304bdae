//! Built-in geometries.

use crate::geometry::{parse_manifest, Geometry, Manifest};

pub const MORRIS_THORNE: &str = "\
# Morris-Thorne wormhole, coordinates (t, l, v, phi)
dim = 4
coords = X1, X2, X3, X4
params = a, b, c
g[1][1] = -c^2
g[2][2] = 1
g[3][3] = b^2 + X2^2
g[4][4] = (b^2 + X2^2) * sin(X3)^2
connection = ssnm
P = 0, a, 0, 0
";

pub const MORRIS_THORNE_LEVI_CIVITA: &str = "\
dim = 4
coords = X1, X2, X3, X4
params = b, c
g[1][1] = -c^2
g[2][2] = 1
g[3][3] = b^2 + X2^2
g[4][4] = (b^2 + X2^2) * sin(X3)^2
connection = levi-civita
";

pub const FLAT3: &str = "\
dim = 3
coords = x, y, z
g[1][1] = 1
g[2][2] = 1
g[3][3] = 1
connection = levi-civita
";

pub const SPHERE3: &str = "\
# round 3-sphere of radius r
dim = 3
coords = x1, x2, x3
params = r
g[1][1] = r^2
g[2][2] = r^2 * sin(x1)^2
g[3][3] = r^2 * sin(x1)^2 * sin(x2)^2
connection = levi-civita
";

pub const NAMES: [&str; 4] = [
    "morris-thorne",
    "morris-thorne-levi-civita",
    "flat3",
    "sphere3",
];

pub fn source(name: &str) -> Option<&'static str> {
    match name {
        "morris-thorne" => Some(MORRIS_THORNE),
        "morris-thorne-levi-civita" => Some(MORRIS_THORNE_LEVI_CIVITA),
        "flat3" => Some(FLAT3),
        "sphere3" => Some(SPHERE3),
        _ => None,
    }
}

pub fn manifest(name: &str) -> Option<Manifest> {
    source(name).map(|s| parse_manifest(s).expect("built-in manifests parse"))
}

pub fn geometry(name: &str) -> Option<Geometry> {
    manifest(name).map(|m| m.build().expect("built-in manifests are nondegenerate"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_builds() {
        for name in NAMES {
            assert!(geometry(name).is_some(), "{name}");
        }
        assert!(geometry("torus").is_none());
    }
}
