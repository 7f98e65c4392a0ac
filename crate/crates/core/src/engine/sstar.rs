//! The new cuspidal plus subspace S* with Hecke matrices restricted to it.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith::{charpoly_spectral, PolynomialQ};
use crate::cache::Cache;
use crate::error::{Error, Result};
use crate::linalg::{restrict, MatrixQ, SubspaceQ};
use crate::modsym::ModSymSpace;

#[derive(Clone, Debug, Serialize, Deserialize)]
struct SpaceRecord {
    level: u64,
    weight: u32,
    generator_count: usize,
    dim: usize,
    cusp_classes: usize,
    basis_generators: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct SubspacesRecord {
    cuspidal_dim: usize,
    new_cuspidal_plus: SubspaceQ,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct HeckeRecord {
    p: u64,
    matrix: MatrixQ,
    charpoly: PolynomialQ,
}

/// S* together with a lazily built ambient space and cached restricted
/// Hecke matrices and their characteristic polynomials.
pub struct SStar {
    level: u64,
    weight: u32,
    basis: SubspaceQ,
    cuspidal_dim: usize,
    space: OnceLock<Arc<ModSymSpace>>,
    hecke: Mutex<BTreeMap<u64, (Arc<MatrixQ>, PolynomialQ)>>,
    cache: Option<Cache>,
}

impl std::fmt::Debug for SStar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SStar")
            .field("level", &self.level)
            .field("weight", &self.weight)
            .field("dim", &self.dim())
            .finish()
    }
}

impl SStar {
    pub fn build(n: u64, k: u32, cache: Option<&Cache>) -> Result<Self> {
        if k < 2 || k % 2 == 1 {
            return Err(Error::UnsupportedWeight(k));
        }
        let space = OnceLock::new();
        let stored = match cache {
            Some(c) => c.load::<SubspacesRecord>(n, k, "subspaces.json")?,
            None => None,
        };
        let (basis, cuspidal_dim) = match stored {
            Some(rec) => (rec.new_cuspidal_plus, rec.cuspidal_dim),
            None => {
                let m = Arc::new(ModSymSpace::new(n, k)?);
                let basis = m.new_cuspidal_plus()?;
                let cuspidal_dim = m.cuspidal_subspace().dim();
                if let Some(c) = cache {
                    let rec = SpaceRecord {
                        level: n,
                        weight: k,
                        generator_count: m.generator_count(),
                        dim: m.dim(),
                        cusp_classes: m.cusp_classes().count(),
                        basis_generators: m.basis_generators().to_vec(),
                    };
                    c.store(n, k, "space.json", &rec)?;
                    let sub = SubspacesRecord {
                        cuspidal_dim,
                        new_cuspidal_plus: basis.clone(),
                    };
                    c.store(n, k, "subspaces.json", &sub)?;
                }
                let _ = space.set(m);
                (basis, cuspidal_dim)
            }
        };
        Ok(SStar {
            level: n,
            weight: k,
            basis,
            cuspidal_dim,
            space,
            hecke: Mutex::new(BTreeMap::new()),
            cache: cache.cloned(),
        })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Dimension of the full cuspidal subspace of the ambient space.
    pub fn cuspidal_dim(&self) -> usize {
        self.cuspidal_dim
    }

    /// S* as a subspace of the ambient modular-symbols space.
    pub fn subspace(&self) -> &SubspaceQ {
        &self.basis
    }

    pub fn space(&self) -> Result<&ModSymSpace> {
        if let Some(s) = self.space.get() {
            return Ok(s);
        }
        let built = Arc::new(ModSymSpace::new(self.level, self.weight)?);
        Ok(self.space.get_or_init(|| built))
    }

    fn compute(&self, p: u64) -> Result<(MatrixQ, PolynomialQ)> {
        if let Some(c) = &self.cache {
            if let Some(rec) = c.load::<HeckeRecord>(self.level, self.weight, &format!("T{p}.json"))? {
                if rec.p == p && rec.matrix.rows() == self.dim() {
                    return Ok((rec.matrix, rec.charpoly));
                }
            }
        }
        let t = self.space()?.hecke_matrix(p)?;
        let r = restrict(&t, &self.basis)?;
        let cp = charpoly_spectral(&r, &self.spectral_radius(p))?;
        if !cp.has_integer_coefficients() {
            return Err(Error::internal(format!(
                "T_{p} on S*({}, {}) has a non-integral characteristic polynomial",
                self.level, self.weight
            )));
        }
        if let Some(c) = &self.cache {
            let rec = HeckeRecord {
                p,
                matrix: r.clone(),
                charpoly: cp.clone(),
            };
            c.store(self.level, self.weight, &format!("T{p}.json"), &rec)?;
        }
        Ok((r, cp))
    }

    fn entry(&self, p: u64) -> Result<(Arc<MatrixQ>, PolynomialQ)> {
        if let Some(e) = self.hecke.lock().expect("hecke lock").get(&p) {
            return Ok(e.clone());
        }
        let (m, cp) = self.compute(p)?;
        let mut map = self.hecke.lock().expect("hecke lock");
        Ok(map.entry(p).or_insert((Arc::new(m), cp)).clone())
    }

    /// Bound on the eigenvalues of T_p on cusp forms of weight k:
    /// |a_p| ≤ 2 p^((k-1)/2), rounded up.
    pub fn spectral_radius(&self, p: u64) -> BigUint {
        (BigUint::from(4u32) * BigUint::from(p).pow(self.weight - 1)).sqrt() + 1u32
    }

    /// Matrix of T_p on S* in the echelon basis of S*.
    pub fn hecke(&self, p: u64) -> Result<Arc<MatrixQ>> {
        Ok(self.entry(p)?.0)
    }

    /// Characteristic polynomial of T_p on S* (checked to be integral).
    pub fn hecke_charpoly(&self, p: u64) -> Result<PolynomialQ> {
        Ok(self.entry(p)?.1)
    }
}
