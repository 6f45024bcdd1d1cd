//! Bivectors in Λ²ℝⁿ and their duals, stored as strictly upper-triangular
//! component arrays.
//!
//! Sign convention: the component `c[a][b]` with `a < b` is the coefficient of
//! `e_a ∧ e_b`, so `wedge(x, y)[a][b] = x[a]·y[b] − x[b]·y[a]`. Components are
//! laid out row by row: (0,1), (0,2), …, (0,n−1), (1,2), …

use std::ops::{Add, Sub};

use super::Scalar;
use crate::error::{check_dim, Result};

/// Position of `(a, b)`, `a < b`, in the packed layout for ambient dimension `n`.
pub fn pair_index(n: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < n);
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Iterator over `(a, b)` pairs in packed order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (a + 1..n).map(move |b| (a, b)))
}

macro_rules! packed_antisymmetric {
    ($name:ident) => {
        #[derive(Clone, Debug, PartialEq)]
        pub struct $name<T = f64> {
            dim: usize,
            comps: Vec<T>,
        }

        impl<T: Scalar> $name<T> {
            pub fn zero(dim: usize) -> Self {
                $name {
                    dim,
                    comps: vec![T::zero(); pair_count(dim)],
                }
            }

            pub fn from_components(dim: usize, comps: Vec<T>) -> Result<Self> {
                check_dim(pair_count(dim), comps.len())?;
                Ok($name { dim, comps })
            }

            /// Ambient dimension `d + 1`.
            pub fn dim(&self) -> usize {
                self.dim
            }

            pub fn components(&self) -> &[T] {
                &self.comps
            }

            /// Antisymmetric access: `get(b, a) == -get(a, b)`, `get(a, a) == 0`.
            pub fn get(&self, a: usize, b: usize) -> T {
                match a.cmp(&b) {
                    std::cmp::Ordering::Less => self.comps[pair_index(self.dim, a, b)].clone(),
                    std::cmp::Ordering::Greater => -self.comps[pair_index(self.dim, b, a)].clone(),
                    std::cmp::Ordering::Equal => T::zero(),
                }
            }

            pub fn set(&mut self, a: usize, b: usize, v: T) {
                self.comps[pair_index(self.dim, a, b)] = v;
            }

            pub fn scale(&self, s: &T) -> Self {
                $name {
                    dim: self.dim,
                    comps: self.comps.iter().map(|c| c.clone() * s.clone()).collect(),
                }
            }

            pub fn is_zero(&self) -> bool {
                self.comps.iter().all(|c| c.is_zero())
            }

            pub fn norm(&self) -> f64 {
                self.comps
                    .iter()
                    .map(|c| c.as_f64().powi(2))
                    .sum::<f64>()
                    .sqrt()
            }

            pub fn to_f64(&self) -> $name<f64> {
                $name {
                    dim: self.dim,
                    comps: self.comps.iter().map(Scalar::as_f64).collect(),
                }
            }
        }

        impl<T: Scalar> Add for &$name<T> {
            type Output = $name<T>;
            fn add(self, rhs: Self) -> $name<T> {
                assert_eq!(self.dim, rhs.dim, "dimension mismatch");
                $name {
                    dim: self.dim,
                    comps: self
                        .comps
                        .iter()
                        .zip(&rhs.comps)
                        .map(|(a, b)| a.clone() + b.clone())
                        .collect(),
                }
            }
        }

        impl<T: Scalar> Sub for &$name<T> {
            type Output = $name<T>;
            fn sub(self, rhs: Self) -> $name<T> {
                assert_eq!(self.dim, rhs.dim, "dimension mismatch");
                $name {
                    dim: self.dim,
                    comps: self
                        .comps
                        .iter()
                        .zip(&rhs.comps)
                        .map(|(a, b)| a.clone() - b.clone())
                        .collect(),
                }
            }
        }
    };
}

packed_antisymmetric!(Bivector);
packed_antisymmetric!(DualBivector);

impl<T: Scalar> Bivector<T> {
    /// The same component array read as a functional (standard component
    /// inner product).
    pub fn to_dual(&self) -> DualBivector<T> {
        DualBivector {
            dim: self.dim,
            comps: self.comps.clone(),
        }
    }

    /// Plücker test `b ∧ b = 0`: every 4-index relation must vanish.
    pub fn is_decomposable_by(&self, is_zero: impl Fn(&T) -> bool) -> bool {
        let n = self.dim;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        let r = self.get(a, b) * self.get(c, d) - self.get(a, c) * self.get(b, d)
                            + self.get(a, d) * self.get(b, c);
                        if !is_zero(&r) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

impl<T: Scalar> DualBivector<T> {
    pub fn to_bivector(&self) -> Bivector<T> {
        Bivector {
            dim: self.dim,
            comps: self.comps.clone(),
        }
    }
}

pub fn wedge<T: Scalar>(x: &[T], y: &[T]) -> Result<Bivector<T>> {
    check_dim(x.len(), y.len())?;
    let n = x.len();
    let comps = pairs(n)
        .map(|(a, b)| x[a].clone() * y[b].clone() - x[b].clone() * y[a].clone())
        .collect();
    Ok(Bivector { dim: n, comps })
}

/// Componentwise pairing `Σ_{a<b} w[a][b]·t[a][b]`.
pub fn pairing<T: Scalar>(w: &Bivector<T>, t: &DualBivector<T>) -> Result<T> {
    check_dim(w.dim, t.dim)?;
    Ok(super::dot(&w.comps, &t.comps))
}

/// The covector `α = x ⌟ t`, defined by `α(y) = ⟨x ∧ y, t⟩` for all `y`.
pub fn contract<T: Scalar>(x: &[T], t: &DualBivector<T>) -> Result<Vec<T>> {
    check_dim(t.dim, x.len())?;
    let n = x.len();
    let mut alpha = vec![T::zero(); n];
    for (k, (a, b)) in pairs(n).enumerate() {
        let c = &t.comps[k];
        if c.is_zero() {
            continue;
        }
        // x∧y has component x_a y_b − x_b y_a at (a,b)
        alpha[b] = alpha[b].clone() + x[a].clone() * c.clone();
        alpha[a] = alpha[a].clone() - x[b].clone() * c.clone();
    }
    Ok(alpha)
}
