// SPDX-License-Identifier: Apache-2.0

//! Full-rank sublattices of `Z^2` in Hermite normal form.
//!
//! A lattice is stored by its HNF basis `(alpha, 0), (beta, gamma)` with
//! `alpha, gamma > 0` and `0 <= beta < alpha`, which is unique, so derived
//! equality is lattice equality.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Vector = (BigInt, BigInt);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    pub alpha: BigInt,
    pub beta: BigInt,
    pub gamma: BigInt,
}

impl Lattice {
    /// HNF of the lattice spanned by `gens`; `None` if they span rank < 2.
    pub fn from_generators<'a, I>(gens: I) -> Option<Lattice>
    where
        I: IntoIterator<Item = &'a Vector>,
    {
        let mut pivot: Option<Vector> = None;
        let mut alpha = BigInt::zero();
        for (x, y) in gens {
            if y.is_zero() {
                alpha = alpha.gcd(x);
                continue;
            }
            let Some((px, py)) = pivot.take() else {
                pivot = Some((x.clone(), y.clone()));
                continue;
            };
            let e = py.extended_gcd(y);
            let g = e.gcd;
            let new_pivot = (&e.x * &px + &e.y * x, g.clone());
            // second coordinate cancels: (y/g)*pivot - (py/g)*(x, y)
            let leftover = (y / &g) * &px - (&py / &g) * x;
            alpha = alpha.gcd(&leftover);
            pivot = Some(new_pivot);
        }
        let (mut beta, mut gamma) = pivot?;
        if alpha.is_zero() {
            return None;
        }
        if gamma.is_negative() {
            gamma = -gamma;
            beta = -beta;
        }
        beta = beta.mod_floor(&alpha);
        Some(Lattice { alpha, beta, gamma })
    }

    pub fn basis(&self) -> [Vector; 2] {
        [
            (self.alpha.clone(), BigInt::zero()),
            (self.beta.clone(), self.gamma.clone()),
        ]
    }

    /// Index in `Z^2`.
    pub fn index(&self) -> BigInt {
        &self.alpha * &self.gamma
    }

    pub fn contains(&self, v: &Vector) -> bool {
        let (x, y) = v;
        if !y.is_multiple_of(&self.gamma) {
            return false;
        }
        let k = y / &self.gamma;
        (x - k * &self.beta).is_multiple_of(&self.alpha)
    }

    /// `other ⊆ self`.
    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis().iter().all(|v| self.contains(v))
    }

    pub fn scaled(&self, k: &BigInt) -> Lattice {
        let k = k.abs();
        Lattice {
            alpha: &self.alpha * &k,
            beta: &self.beta * &k,
            gamma: &self.gamma * &k,
        }
    }

    /// Largest integer `g` with `self ⊆ g Z^2`.
    pub fn content(&self) -> BigInt {
        self.alpha.gcd(&self.beta).gcd(&self.gamma)
    }

    /// Exact intersection, from the integer kernel of `[B1 | -B2]`.
    pub fn intersect(&self, other: &Lattice) -> Lattice {
        let b1 = self.basis();
        let b2 = other.basis();
        let columns: Vec<Vector> = vec![
            b1[0].clone(),
            b1[1].clone(),
            (-&b2[0].0, -&b2[0].1),
            (-&b2[1].0, -&b2[1].1),
        ];
        let kernel = integer_kernel(&columns);
        let gens: Vec<Vector> = kernel
            .iter()
            .map(|u| {
                (
                    &u[0] * &b1[0].0 + &u[1] * &b1[1].0,
                    &u[0] * &b1[0].1 + &u[1] * &b1[1].1,
                )
            })
            .collect();
        Lattice::from_generators(&gens).expect("intersection of full-rank lattices is full rank")
    }
}

/// Basis of `{u in Z^n : sum u_i * col_i = 0}` for a `2 x n` matrix given by
/// columns, computed by unimodular column reduction.
pub fn integer_kernel(columns: &[Vector]) -> Vec<Vec<BigInt>> {
    let n = columns.len();
    let mut m: Vec<[BigInt; 2]> = columns.iter().map(|(x, y)| [x.clone(), y.clone()]).collect();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pivot_col = 0;
    for row in 0..2 {
        if pivot_col >= n {
            break;
        }
        for j in pivot_col + 1..n {
            if m[j][row].is_zero() {
                continue;
            }
            let a = m[pivot_col][row].clone();
            let b = m[j][row].clone();
            let e = a.extended_gcd(&b);
            let (ag, bg) = (&a / &e.gcd, &b / &e.gcd);
            // [pivot, j] <- [x*pivot + y*j, -bg*pivot + ag*j], determinant 1
            let new_pivot = combine(&m[pivot_col], &m[j], &e.x, &e.y);
            let new_j = combine(&m[pivot_col], &m[j], &-&bg, &ag);
            m[pivot_col] = new_pivot;
            m[j] = new_j;
            let up = combine_vec(&u[pivot_col], &u[j], &e.x, &e.y);
            let uj = combine_vec(&u[pivot_col], &u[j], &-&bg, &ag);
            u[pivot_col] = up;
            u[j] = uj;
        }
        if !m[pivot_col][row].is_zero() {
            pivot_col += 1;
        }
    }
    (pivot_col..n).map(|j| u[j].clone()).collect()
}

fn combine(a: &[BigInt; 2], b: &[BigInt; 2], x: &BigInt, y: &BigInt) -> [BigInt; 2] {
    [x * &a[0] + y * &b[0], x * &a[1] + y * &b[1]]
}

fn combine_vec(a: &[BigInt], b: &[BigInt], x: &BigInt, y: &BigInt) -> Vec<BigInt> {
    a.iter().zip(b).map(|(p, q)| x * p + y * q).collect()
}
