//! Groups of Heisenberg type in logarithmic coordinates.

use crate::error::{invalid, HtkError, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub type Matrix = Vec<Vec<f64>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupPoint {
    pub z: Vec<f64>,
    pub sigma: Vec<f64>,
}

impl GroupPoint {
    pub fn new(z: Vec<f64>, sigma: Vec<f64>) -> Self {
        GroupPoint { z, sigma }
    }

    pub fn z_norm(&self) -> f64 {
        norm(&self.z)
    }

    pub fn sigma_norm(&self) -> f64 {
        norm(&self.sigma)
    }

    pub fn is_identity(&self) -> bool {
        self.z.iter().chain(&self.sigma).all(|&v| v == 0.0)
    }
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn mat_vec(a: &Matrix, v: &[f64]) -> Vec<f64> {
    a.iter().map(|row| dot(row, v)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StandardGroup {
    Heisenberg(usize),
    Quaternionic,
}

/// Group descriptor in the serialized form {m, k, J}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub m: usize,
    pub k: usize,
    #[serde(rename = "J")]
    pub j: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HTypeGroup {
    m: usize,
    k: usize,
    j: Vec<Matrix>,
    label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HTypeValidation {
    pub passed: bool,
    pub skew_ok: bool,
    pub h_type_ok: bool,
    pub max_deviation: f64,
    pub message: String,
}

/// Checks skew-symmetry exactly and J(λ)² = −|λ|² I on the basis and 20 random unit λ.
pub fn validate_h_type(j: &[Matrix]) -> Result<HTypeValidation> {
    if j.is_empty() {
        return Err(HtkError::DimensionMismatch("need at least one matrix".into()));
    }
    let m = j[0].len();
    for a in j {
        if a.len() != m || a.iter().any(|row| row.len() != m) {
            return Err(HtkError::DimensionMismatch(format!(
                "all matrices must be {m}x{m}"
            )));
        }
    }
    let mut skew_ok = true;
    for a in j {
        for r in 0..m {
            for c in 0..m {
                if a[r][c] != -a[c][r] {
                    skew_ok = false;
                }
            }
        }
    }
    let k = j.len();
    let mut lambdas: Vec<Vec<f64>> = (0..k)
        .map(|l| (0..k).map(|i| if i == l { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x4854_5950);
    for _ in 0..20 {
        let v: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = norm(&v).max(1e-12);
        lambdas.push(v.iter().map(|x| x / n).collect());
    }
    let mut max_dev: f64 = 0.0;
    for lam in &lambdas {
        let jl = combine(j, lam);
        let lam2 = dot(lam, lam);
        for r in 0..m {
            for c in 0..m {
                let sq: f64 = (0..m).map(|i| jl[r][i] * jl[i][c]).sum();
                let want = if r == c { -lam2 } else { 0.0 };
                max_dev = max_dev.max((sq - want).abs());
            }
        }
    }
    let h_type_ok = max_dev <= 1e-12;
    let message = match (skew_ok, h_type_ok) {
        (true, true) => "pass".to_string(),
        (false, _) => "fail: not skew-symmetric".to_string(),
        (true, false) => format!("fail: J(λ)² ≠ −|λ|²I (deviation {max_dev:e})"),
    };
    Ok(HTypeValidation { passed: skew_ok && h_type_ok, skew_ok, h_type_ok, max_deviation: max_dev, message })
}

fn combine(j: &[Matrix], lam: &[f64]) -> Matrix {
    let m = j[0].len();
    let mut out = vec![vec![0.0; m]; m];
    for (a, &l) in j.iter().zip(lam) {
        for r in 0..m {
            for c in 0..m {
                out[r][c] += l * a[r][c];
            }
        }
    }
    out
}

fn symplectic(n: usize) -> Matrix {
    let m = 2 * n;
    let mut a = vec![vec![0.0; m]; m];
    for b in 0..n {
        a[2 * b][2 * b + 1] = 1.0;
        a[2 * b + 1][2 * b] = -1.0;
    }
    a
}

/// Left multiplication by i, j, k on ℍ ≅ ℝ⁴ with basis (1, i, j, k).
fn quaternion_units() -> Vec<Matrix> {
    vec![
        vec![
            vec![0.0, -1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, -1.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ],
        vec![
            vec![0.0, 0.0, -1.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, -1.0, 0.0, 0.0],
        ],
        vec![
            vec![0.0, 0.0, 0.0, -1.0],
            vec![0.0, 0.0, -1.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
        ],
    ]
}

pub fn make_standard_group(kind: StandardGroup) -> Result<HTypeGroup> {
    match kind {
        StandardGroup::Heisenberg(n) => {
            if n == 0 {
                return Err(invalid("heisenberg(n) needs n >= 1"));
            }
            HTypeGroup::from_matrices(vec![symplectic(n)], format!("heisenberg({n})"))
        }
        StandardGroup::Quaternionic => HTypeGroup::from_matrices(quaternion_units(), "quaternionic".into()),
    }
}

impl HTypeGroup {
    pub fn from_matrices(j: Vec<Matrix>, label: String) -> Result<Self> {
        let v = validate_h_type(&j)?;
        if !v.passed {
            return Err(invalid(format!("not an H-type structure: {}", v.message)));
        }
        let m = j[0].len();
        if m < 2 || m % 2 != 0 {
            return Err(invalid("first-layer dimension must be even and >= 2"));
        }
        Ok(HTypeGroup { m, k: j.len(), j, label })
    }

    pub fn heisenberg(n: usize) -> Self {
        make_standard_group(StandardGroup::Heisenberg(n)).expect("standard group")
    }

    pub fn quaternionic() -> Self {
        make_standard_group(StandardGroup::Quaternionic).expect("standard group")
    }

    pub fn from_descriptor(d: &GroupDescriptor) -> Result<Self> {
        if d.j.len() != d.k {
            return Err(HtkError::DimensionMismatch(format!("expected {} matrices, got {}", d.k, d.j.len())));
        }
        let mut mats = Vec::with_capacity(d.k);
        for flat in &d.j {
            if flat.len() != d.m * d.m {
                return Err(HtkError::DimensionMismatch(format!(
                    "matrix needs {} entries, got {}",
                    d.m * d.m,
                    flat.len()
                )));
            }
            mats.push(flat.chunks(d.m).map(|r| r.to_vec()).collect());
        }
        HTypeGroup::from_matrices(mats, format!("custom(m={},k={})", d.m, d.k))
    }

    pub fn descriptor(&self) -> GroupDescriptor {
        GroupDescriptor {
            m: self.m,
            k: self.k,
            j: self.j.iter().map(|a| a.iter().flatten().copied().collect()).collect(),
        }
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        let d: GroupDescriptor =
            serde_json::from_str(&text).map_err(|e| invalid(format!("bad group descriptor: {e}")))?;
        HTypeGroup::from_descriptor(&d)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Homogeneous dimension Q = m + 2k.
    pub fn q(&self) -> usize {
        self.m + 2 * self.k
    }

    pub fn j(&self) -> &[Matrix] {
        &self.j
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn identity(&self) -> GroupPoint {
        GroupPoint::new(vec![0.0; self.m], vec![0.0; self.k])
    }

    /// Point ((r, 0, …, 0), (s, 0, …, 0)).
    pub fn point(&self, r: f64, s: f64) -> GroupPoint {
        let mut z = vec![0.0; self.m];
        z[0] = r;
        let mut sigma = vec![0.0; self.k];
        sigma[0] = s;
        GroupPoint::new(z, sigma)
    }

    pub fn check_point(&self, g: &GroupPoint) -> Result<()> {
        if g.z.len() != self.m || g.sigma.len() != self.k {
            return Err(HtkError::DimensionMismatch(format!(
                "point has dimensions ({}, {}), group is ({}, {})",
                g.z.len(),
                g.sigma.len(),
                self.m,
                self.k
            )));
        }
        Ok(())
    }

    /// ⟨J_ℓ z, ζ⟩ for ℓ = 1..k.
    pub fn bracket(&self, z: &[f64], zeta: &[f64]) -> Vec<f64> {
        self.j.iter().map(|a| dot(&mat_vec(a, z), zeta)).collect()
    }

    /// J(λ) z.
    pub fn j_lambda(&self, lambda: &[f64], z: &[f64]) -> Vec<f64> {
        mat_vec(&combine(&self.j, lambda), z)
    }

    pub fn multiply(&self, g: &GroupPoint, h: &GroupPoint) -> Result<GroupPoint> {
        self.check_point(g)?;
        self.check_point(h)?;
        let br = self.bracket(&g.z, &h.z);
        Ok(GroupPoint {
            z: g.z.iter().zip(&h.z).map(|(a, b)| a + b).collect(),
            sigma: (0..self.k).map(|l| g.sigma[l] + h.sigma[l] + 0.5 * br[l]).collect(),
        })
    }

    pub fn inverse(&self, g: &GroupPoint) -> Result<GroupPoint> {
        self.check_point(g)?;
        Ok(GroupPoint { z: g.z.iter().map(|v| -v).collect(), sigma: g.sigma.iter().map(|v| -v).collect() })
    }

    pub fn dilate(&self, lambda: f64, g: &GroupPoint) -> Result<GroupPoint> {
        if !(lambda > 0.0) {
            return Err(invalid("dilation factor must be positive"));
        }
        self.check_point(g)?;
        Ok(GroupPoint {
            z: g.z.iter().map(|v| lambda * v).collect(),
            sigma: g.sigma.iter().map(|v| lambda * lambda * v).collect(),
        })
    }

    /// Gauge N(z, σ) = (|z|⁴ + 16|σ|²)^{1/4}.
    pub fn gauge(&self, g: &GroupPoint) -> f64 {
        gauge_from_norms(g.z_norm(), g.sigma_norm())
    }

    /// Jacobian matrix of h ↦ g ∘ h in logarithmic coordinates.
    pub fn left_translation_jacobian(&self, g: &GroupPoint) -> Matrix {
        let n = self.m + self.k;
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            a[i][i] = 1.0;
        }
        // ∂σ_ℓ/∂ζ_j = ½ ⟨J_ℓ z, e_j⟩
        for (l, jl) in self.j.iter().enumerate() {
            let jz = mat_vec(jl, &g.z);
            for jdx in 0..self.m {
                a[self.m + l][jdx] = 0.5 * jz[jdx];
            }
        }
        a
    }

    /// Seeded random point with entries in [−scale, scale].
    pub fn random_point<R: Rng>(&self, rng: &mut R, scale: f64) -> GroupPoint {
        GroupPoint {
            z: (0..self.m).map(|_| rng.gen_range(-scale..scale)).collect(),
            sigma: (0..self.k).map(|_| rng.gen_range(-scale..scale)).collect(),
        }
    }
}

pub fn gauge_from_norms(zn: f64, sn: f64) -> f64 {
    (zn.powi(4) + 16.0 * sn * sn).powf(0.25)
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(a: &Matrix) -> f64 {
    let n = a.len();
    let mut m = a.clone();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().partial_cmp(&m[j][c].abs()).unwrap()).unwrap();
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for cc in c..n {
                m[r][cc] -= f * m[c][cc];
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_groups() {
        let h1 = HTypeGroup::heisenberg(1);
        assert_eq!((h1.m(), h1.k(), h1.q()), (2, 1, 4));
        assert_eq!(HTypeGroup::heisenberg(2).q(), 6);
        let q = HTypeGroup::quaternionic();
        assert_eq!((q.m(), q.k(), q.q()), (4, 3, 10));
        assert!(make_standard_group(StandardGroup::Heisenberg(0)).is_err());
    }

    #[test]
    fn quaternionic_units_anticommute() {
        let q = HTypeGroup::quaternionic();
        let j = q.j();
        for a in 0..3 {
            for b in 0..3 {
                if a == b {
                    continue;
                }
                for r in 0..4 {
                    for c in 0..4 {
                        let ab: f64 = (0..4).map(|i| j[a][r][i] * j[b][i][c]).sum();
                        let ba: f64 = (0..4).map(|i| j[b][r][i] * j[a][i][c]).sum();
                        assert_eq!(ab + ba, 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn validation_failures() {
        let sym = vec![vec![vec![0.0, 1.0], vec![1.0, 0.0]]];
        let v = validate_h_type(&sym).unwrap();
        assert!(!v.passed && !v.skew_ok);
        let mut units = quaternion_units();
        units.truncate(2);
        // flip one skew pair of the second unit: still skew, no longer squares to −I
        units[1][0][2] = 1.0;
        units[1][2][0] = -1.0;
        let v = validate_h_type(&units).unwrap();
        assert!(v.skew_ok && !v.h_type_ok, "{v:?}");
        let bad = vec![vec![vec![0.0, 1.0], vec![-1.0, 0.0]], vec![vec![0.0; 3]; 3]];
        assert!(matches!(validate_h_type(&bad), Err(HtkError::DimensionMismatch(_))));
    }

    #[test]
    fn multiplication_by_hand() {
        let h = HTypeGroup::heisenberg(1);
        let g = GroupPoint::new(vec![1.0, 0.0], vec![0.0]);
        let k = GroupPoint::new(vec![0.0, 1.0], vec![0.0]);
        let p = h.multiply(&g, &k).unwrap();
        assert_eq!(p, GroupPoint::new(vec![1.0, 1.0], vec![-0.5]));
        let e = h.identity();
        let x = GroupPoint::new(vec![1.0, 2.0], vec![3.0]);
        assert_eq!(h.multiply(&e, &x).unwrap(), x);
    }

    #[test]
    fn gauge_values() {
        let h = HTypeGroup::heisenberg(1);
        assert!((h.gauge(&GroupPoint::new(vec![3.0, 4.0], vec![0.0])) - 5.0).abs() < 1e-14);
        assert!((h.gauge(&GroupPoint::new(vec![0.0, 0.0], vec![0.25])) - 1.0).abs() < 1e-15);
        let d = h.dilate(2.0, &GroupPoint::new(vec![1.0, 0.0], vec![1.0])).unwrap();
        assert_eq!(d, GroupPoint::new(vec![2.0, 0.0], vec![4.0]));
        assert!(h.dilate(0.0, &d).is_err());
    }

    #[test]
    fn descriptor_round_trip() {
        let q = HTypeGroup::quaternionic();
        let text = serde_json::to_string(&q.descriptor()).unwrap();
        assert!(text.contains("\"J\""));
        let d: GroupDescriptor = serde_json::from_str(&text).unwrap();
        let back = HTypeGroup::from_descriptor(&d).unwrap();
        assert_eq!(back.j(), q.j());
    }
}
