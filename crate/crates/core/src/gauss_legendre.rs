//! Gauss-Legendre nodes and weights on `[-1, 1]`.
//!
//! Nodes are the roots of `P_n`, found by Newton iteration on the three-term
//! recurrence. Rules are cached per `(scalar type, n)`; the cache is safe to
//! populate concurrently since every thread would compute the same rule.

use std::any::{Any, TypeId};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::scalar::Scalar;

const NEWTON_MAX_ITERS: usize = 100;

/// An `n`-point Gauss-Legendre rule, nodes in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative<T: Scalar>(n: usize, x: T) -> (T, T) {
    let mut p_prev = T::one();
    let mut p = x;
    for j in 2..=n {
        let jf = T::from_usize_lossy(j);
        let next = ((jf + jf - T::one()) * x * p - (jf - T::one()) * p_prev) / jf;
        p_prev = p;
        p = next;
    }
    let nf = T::from_usize_lossy(n);
    let dp = nf * (x * p - p_prev) / (x * x - T::one());
    (p, dp)
}

impl<T: Scalar> GaussLegendre<T> {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        if n == 1 {
            return Self {
                nodes: vec![T::zero()],
                weights: vec![T::lit(2.0)],
            };
        }
        let tol = T::lit(1e-15).max(T::epsilon() * T::lit(4.0));
        let nf = T::from_usize_lossy(n);
        let half = n / 2;
        let mut upper: Vec<(T, T)> = Vec::with_capacity(half);
        for i in 0..half {
            let mut x =
                (T::PI() * (T::from_usize_lossy(i) + T::lit(0.75)) / (nf + T::lit(0.5))).cos();
            for _ in 0..NEWTON_MAX_ITERS {
                let (p, dp) = legendre_with_derivative(n, x);
                let dx = p / dp;
                x = x - dx;
                if dx.abs() <= tol {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
            upper.push((x, w));
        }
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for &(x, w) in &upper {
            nodes.push(-x);
            weights.push(w);
        }
        if n % 2 == 1 {
            let (_, dp) = legendre_with_derivative(n, T::zero());
            nodes.push(T::zero());
            weights.push(T::lit(2.0) / (dp * dp));
        }
        for &(x, w) in upper.iter().rev() {
            nodes.push(x);
            weights.push(w);
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Nodes and weights affinely mapped onto `[lo, hi]`.
    pub fn mapped(&self, lo: T, hi: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (hi - lo) / T::lit(2.0);
        let mid = (hi + lo) / T::lit(2.0);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&t, &w)| (mid + half * t, half * w))
    }

    pub fn integrate<F: FnMut(T) -> T>(&self, lo: T, hi: T, mut f: F) -> T {
        self.mapped(lo, hi).map(|(x, w)| w * f(x)).sum()
    }
}

type Cache = RwLock<HashMap<(TypeId, usize), Arc<dyn Any + Send + Sync>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Cached `n`-point rule.
pub fn gauss_legendre<T: Scalar>(n: usize) -> Arc<GaussLegendre<T>> {
    let key = (TypeId::of::<T>(), n);
    if let Some(rule) = cache().read().expect("rule cache poisoned").get(&key) {
        return Arc::clone(rule)
            .downcast::<GaussLegendre<T>>()
            .expect("cache keyed by type");
    }
    let rule: Arc<GaussLegendre<T>> = Arc::new(GaussLegendre::new(n));
    let mut guard = cache().write().expect("rule cache poisoned");
    let entry = guard
        .entry(key)
        .or_insert_with(|| rule.clone() as Arc<dyn Any + Send + Sync>);
    Arc::clone(entry)
        .downcast::<GaussLegendre<T>>()
        .expect("cache keyed by type")
}
