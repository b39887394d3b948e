//! Conventional dense kernels, generic over the working precision.
//!
//! * Householder reduction to Hessenberg form and Francis double-shift QR
//!   for eigenvalues,
//! * Householder bidiagonalization and implicit-shift QR for singular values,
//! * LU with partial pivoting for solves and inverses,
//! * Gauss-Jordan elimination for exact fields.
//!
//! Deflation tests compare against the working epsilon of the scalar type,
//! so the same code serves binary64 and every `BigFloat` precision.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Real, Scalar};

/// Iteration cap per eigenvalue or singular value.
const MAX_ITERATIONS: usize = 100;

fn check_square<S>(a: &Matrix<S>) -> Result<usize>
where
    S: Clone,
{
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    Ok(a.rows())
}

/// `|a|` carrying the sign of `b`.
fn with_sign<S: Real>(a: &S, b: &S) -> S {
    let m = a.abs();
    if b.sign().is_negative() {
        -m
    } else {
        m
    }
}

fn max<S: Real>(a: S, b: S) -> S {
    if b > a {
        b
    } else {
        a
    }
}

/// `sqrt(a^2 + b^2)` without destructive overflow.
fn hypot<S: Real>(a: &S, b: &S) -> S {
    let (aa, ab) = (a.abs(), b.abs());
    if aa > ab {
        let r = ab / aa.clone();
        aa * (r.one_like() + r.clone() * r).sqrt()
    } else if ab.is_zero() {
        ab
    } else {
        let r = aa / ab.clone();
        ab * (r.one_like() + r.clone() * r).sqrt()
    }
}

/// Orthogonal similarity to upper Hessenberg form.
pub fn hessenberg<S: Real>(a: &Matrix<S>) -> Result<Matrix<S>> {
    let n = check_square(a)?;
    let mut h = a.clone();
    let zero = h[(0, 0)].zero_like();
    let mut v = vec![zero.clone(); n];
    for k in 0..n.saturating_sub(2) {
        let mut scale = zero.clone();
        for i in k + 1..n {
            scale = scale + h[(i, k)].abs();
        }
        if scale.is_zero() {
            continue;
        }
        let mut norm2 = zero.clone();
        for i in k + 1..n {
            v[i] = h[(i, k)].clone() / scale.clone();
            norm2 = norm2 + v[i].clone() * v[i].clone();
        }
        let mut g = norm2.sqrt();
        if v[k + 1].sign().is_positive() {
            g = -g;
        }
        // vv^T / hh is the reflector with hh = v^T v / 2
        let hh = norm2 - v[k + 1].clone() * g.clone();
        v[k + 1] = v[k + 1].clone() - g.clone();
        for j in k + 1..n {
            let mut f = zero.clone();
            for i in k + 1..n {
                f = f + v[i].clone() * h[(i, j)].clone();
            }
            let f = f / hh.clone();
            for i in k + 1..n {
                h[(i, j)] = h[(i, j)].clone() - f.clone() * v[i].clone();
            }
        }
        for i in 0..n {
            let mut f = zero.clone();
            for j in k + 1..n {
                f = f + h[(i, j)].clone() * v[j].clone();
            }
            let f = f / hh.clone();
            for j in k + 1..n {
                h[(i, j)] = h[(i, j)].clone() - f.clone() * v[j].clone();
            }
        }
        h[(k + 1, k)] = scale * g;
        for i in k + 2..n {
            h[(i, k)] = zero.clone();
        }
    }
    Ok(h)
}

/// Eigenvalues `(re, im)` of a real square matrix, in no particular order.
pub fn eigenvalues<S: Real>(a: &Matrix<S>) -> Result<Vec<(S, S)>> {
    let h = hessenberg(a)?;
    hqr(h)
}

/// Francis double-shift QR on an upper Hessenberg matrix.
fn hqr<S: Real>(mut a: Matrix<S>) -> Result<Vec<(S, S)>> {
    let n = a.rows();
    let zero = a[(0, 0)].zero_like();
    let eps = zero.epsilon_like();
    let c = |v: f64| zero.from_f64_like(v);
    let mut anorm = zero.clone();
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm = anorm + a[(i, j)].abs();
        }
    }
    let mut out = Vec::with_capacity(n);
    let mut nn = n as isize - 1;
    let mut t = zero.clone();
    while nn >= 0 {
        let mut its = 0;
        loop {
            let nu = nn as usize;
            let mut l = nu;
            while l >= 1 {
                let mut s = a[(l - 1, l - 1)].abs() + a[(l, l)].abs();
                if s.is_zero() {
                    s = anorm.clone();
                }
                if a[(l, l - 1)].abs() <= eps.clone() * s {
                    a[(l, l - 1)] = zero.clone();
                    break;
                }
                l -= 1;
            }
            let mut x = a[(nu, nu)].clone();
            if l == nu {
                out.push((x + t.clone(), zero.clone()));
                nn -= 1;
                break;
            }
            let mut y = a[(nu - 1, nu - 1)].clone();
            let mut w = a[(nu, nu - 1)].clone() * a[(nu - 1, nu)].clone();
            if l + 1 == nu {
                let p = c(0.5) * (y - x.clone());
                let q = p.clone() * p.clone() + w.clone();
                let z = q.abs().sqrt();
                x = x + t.clone();
                if !q.sign().is_negative() {
                    let z = p.clone() + with_sign(&z, &p);
                    let hi = x.clone() + z.clone();
                    let lo = if z.is_zero() { hi.clone() } else { x - w / z };
                    out.push((hi, zero.clone()));
                    out.push((lo, zero.clone()));
                } else {
                    out.push((x.clone() + p.clone(), z.clone()));
                    out.push((x + p, -z));
                }
                nn -= 2;
                break;
            }
            if its == MAX_ITERATIONS {
                return Err(Error::NoConvergence {
                    max_precision: 0,
                    detail: format!("QR iteration did not converge for eigenvalue {}", nu + 1),
                });
            }
            if its > 0 && its % 10 == 0 {
                // exceptional shift
                t = t + x.clone();
                for i in 0..=nu {
                    a[(i, i)] = a[(i, i)].clone() - x.clone();
                }
                let s = a[(nu, nu - 1)].abs() + a[(nu - 1, nu - 2)].abs();
                x = c(0.75) * s.clone();
                y = x.clone();
                w = c(-0.4375) * s.clone() * s;
            }
            its += 1;
            let mut m = nu - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a[(m, m)].clone();
                let rr = x.clone() - z.clone();
                let ss = y.clone() - z.clone();
                p = (rr.clone() * ss.clone() - w.clone()) / a[(m + 1, m)].clone() + a[(m, m + 1)].clone();
                q = a[(m + 1, m + 1)].clone() - z.clone() - rr - ss;
                r = a[(m + 2, m + 1)].clone();
                let s = p.abs() + q.abs() + r.abs();
                p = p / s.clone();
                q = q / s.clone();
                r = r / s;
                if m == l {
                    break;
                }
                let u = a[(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[(m - 1, m - 1)].abs() + z.abs() + a[(m + 1, m + 1)].abs());
                if u <= eps.clone() * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nu {
                a[(i, i - 2)] = zero.clone();
                if i != m + 2 {
                    a[(i, i - 3)] = zero.clone();
                }
            }
            let mut k = m;
            while k < nu {
                if k != m {
                    p = a[(k, k - 1)].clone();
                    q = a[(k + 1, k - 1)].clone();
                    r = if k != nu - 1 { a[(k + 2, k - 1)].clone() } else { zero.clone() };
                    x = p.abs() + q.abs() + r.abs();
                    if !x.is_zero() {
                        p = p / x.clone();
                        q = q / x.clone();
                        r = r / x.clone();
                    }
                }
                let s = with_sign(&(p.clone() * p.clone() + q.clone() * q.clone() + r.clone() * r.clone()).sqrt(), &p);
                if !s.is_zero() {
                    if k == m {
                        if l != m {
                            a[(k, k - 1)] = -a[(k, k - 1)].clone();
                        }
                    } else {
                        a[(k, k - 1)] = -s.clone() * x.clone();
                    }
                    p = p + s.clone();
                    x = p.clone() / s.clone();
                    y = q.clone() / s.clone();
                    let z = r.clone() / s.clone();
                    q = q / p.clone();
                    r = r / p.clone();
                    for j in k..=nu {
                        let mut pp = a[(k, j)].clone() + q.clone() * a[(k + 1, j)].clone();
                        if k != nu - 1 {
                            pp = pp + r.clone() * a[(k + 2, j)].clone();
                            a[(k + 2, j)] = a[(k + 2, j)].clone() - pp.clone() * z.clone();
                        }
                        a[(k + 1, j)] = a[(k + 1, j)].clone() - pp.clone() * y.clone();
                        a[(k, j)] = a[(k, j)].clone() - pp * x.clone();
                    }
                    let mmin = nu.min(k + 3);
                    for i in l..=mmin {
                        let mut pp = x.clone() * a[(i, k)].clone() + y.clone() * a[(i, k + 1)].clone();
                        if k != nu - 1 {
                            pp = pp + z.clone() * a[(i, k + 2)].clone();
                            a[(i, k + 2)] = a[(i, k + 2)].clone() - pp.clone() * r.clone();
                        }
                        a[(i, k + 1)] = a[(i, k + 1)].clone() - pp.clone() * q.clone();
                        a[(i, k)] = a[(i, k)].clone() - pp;
                    }
                }
                k += 1;
            }
        }
    }
    Ok(out)
}

/// Singular values in descending order.
pub fn singular_values<S: Real>(a: &Matrix<S>) -> Result<Vec<S>> {
    let n = check_square(a)?;
    let mut a = a.clone();
    let zero = a[(0, 0)].zero_like();
    let one = zero.one_like();
    let two = zero.from_i64_like(2);
    let eps = zero.epsilon_like();
    let mut w = vec![zero.clone(); n];
    let mut rv1 = vec![zero.clone(); n];
    let (mut g, mut scale, mut anorm) = (zero.clone(), zero.clone(), zero.clone());

    // Householder bidiagonalization: diagonal in w, superdiagonal in rv1[1..].
    for i in 0..n {
        let l = i + 1;
        rv1[i] = scale.clone() * g.clone();
        g = zero.clone();
        scale = zero.clone();
        let mut s = zero.clone();
        for k in i..n {
            scale = scale + a[(k, i)].abs();
        }
        if !scale.is_zero() {
            for k in i..n {
                a[(k, i)] = a[(k, i)].clone() / scale.clone();
                s = s + a[(k, i)].clone() * a[(k, i)].clone();
            }
            let f = a[(i, i)].clone();
            g = -with_sign(&s.sqrt(), &f);
            let h = f.clone() * g.clone() - s;
            a[(i, i)] = f - g.clone();
            for j in l..n {
                let mut s = zero.clone();
                for k in i..n {
                    s = s + a[(k, i)].clone() * a[(k, j)].clone();
                }
                let f = s / h.clone();
                for k in i..n {
                    a[(k, j)] = a[(k, j)].clone() + f.clone() * a[(k, i)].clone();
                }
            }
        }
        w[i] = scale.clone() * g.clone();
        g = zero.clone();
        scale = zero.clone();
        let mut s = zero.clone();
        if i + 1 != n {
            for k in l..n {
                scale = scale + a[(i, k)].abs();
            }
            if !scale.is_zero() {
                for k in l..n {
                    a[(i, k)] = a[(i, k)].clone() / scale.clone();
                    s = s + a[(i, k)].clone() * a[(i, k)].clone();
                }
                let f = a[(i, l)].clone();
                g = -with_sign(&s.sqrt(), &f);
                let h = f.clone() * g.clone() - s;
                a[(i, l)] = f - g.clone();
                for k in l..n {
                    rv1[k] = a[(i, k)].clone() / h.clone();
                }
                for j in l..n {
                    let mut s = zero.clone();
                    for k in l..n {
                        s = s + a[(j, k)].clone() * a[(i, k)].clone();
                    }
                    for k in l..n {
                        a[(j, k)] = a[(j, k)].clone() + s.clone() * rv1[k].clone();
                    }
                }
            }
        }
        anorm = max(anorm, w[i].abs() + rv1[i].abs());
    }

    // Implicit-shift QR on the bidiagonal.
    for k in (0..n).rev() {
        let mut its = 0;
        loop {
            let mut l = k;
            let mut split = true;
            loop {
                if rv1[l].abs() <= eps.clone() * anorm.clone() {
                    split = false;
                    break;
                }
                // rv1[0] is always zero, so l > 0 here
                if w[l - 1].abs() <= eps.clone() * anorm.clone() {
                    break;
                }
                l -= 1;
            }
            if split {
                // cancel rv1[l] when w[l-1] is negligible
                let (mut c, mut s) = (zero.clone(), one.clone());
                for i in l..=k {
                    let f = s.clone() * rv1[i].clone();
                    rv1[i] = c.clone() * rv1[i].clone();
                    if f.abs() <= eps.clone() * anorm.clone() {
                        break;
                    }
                    let g = w[i].clone();
                    let h = hypot(&f, &g);
                    w[i] = h.clone();
                    let hinv = one.clone() / h;
                    c = g * hinv.clone();
                    s = -f * hinv;
                }
            }
            let z = w[k].clone();
            if l == k {
                if z.sign().is_negative() {
                    w[k] = -z;
                }
                break;
            }
            if its == MAX_ITERATIONS {
                return Err(Error::NoConvergence {
                    max_precision: 0,
                    detail: format!("bidiagonal QR did not converge for singular value {}", k + 1),
                });
            }
            its += 1;
            let mut x = w[l].clone();
            let nm = k - 1;
            let mut y = w[nm].clone();
            let mut g = rv1[nm].clone();
            let mut h = rv1[k].clone();
            let mut f = ((y.clone() - z.clone()) * (y.clone() + z.clone())
                + (g.clone() - h.clone()) * (g.clone() + h.clone()))
                / (two.clone() * h.clone() * y.clone());
            g = hypot(&f, &one);
            f = ((x.clone() - z.clone()) * (x.clone() + z.clone())
                + h.clone() * ((y.clone() / (f.clone() + with_sign(&g, &f))) - h.clone()))
                / x.clone();
            let (mut c, mut s) = (one.clone(), one.clone());
            for j in l..=nm {
                let i = j + 1;
                g = rv1[i].clone();
                y = w[i].clone();
                h = s.clone() * g.clone();
                g = c.clone() * g;
                let mut z = hypot(&f, &h);
                rv1[j] = z.clone();
                c = f.clone() / z.clone();
                s = h.clone() / z.clone();
                f = x.clone() * c.clone() + g.clone() * s.clone();
                g = g * c.clone() - x.clone() * s.clone();
                h = y.clone() * s.clone();
                y = y * c.clone();
                z = hypot(&f, &h);
                w[j] = z.clone();
                if !z.is_zero() {
                    let zinv = one.clone() / z;
                    c = f.clone() * zinv.clone();
                    s = h.clone() * zinv;
                }
                f = c.clone() * g.clone() + s.clone() * y.clone();
                x = c.clone() * y - s.clone() * g;
            }
            rv1[l] = zero.clone();
            rv1[k] = f;
            w[k] = x;
        }
    }
    w.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    Ok(w)
}

/// Row-permuted LU factors with partial pivoting.
#[derive(Clone, Debug)]
pub struct Lu<S> {
    lu: Matrix<S>,
    perm: Vec<usize>,
}

impl<S: Real> Lu<S> {
    pub fn factor(a: &Matrix<S>) -> Result<Self> {
        let n = check_square(a)?;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            for i in k + 1..n {
                if lu[(i, k)].abs() > lu[(p, k)].abs() {
                    p = i;
                }
            }
            if lu[(p, k)].is_zero() {
                return Err(Error::Singular { index: k });
            }
            lu.swap_rows(k, p);
            perm.swap(k, p);
            let pivot = lu[(k, k)].clone();
            for i in k + 1..n {
                let m = lu[(i, k)].clone() / pivot.clone();
                if m.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    lu[(i, j)] = lu[(i, j)].clone() - m.clone() * lu[(k, j)].clone();
                }
                lu[(i, k)] = m;
            }
        }
        Ok(Lu { lu, perm })
    }

    pub fn solve(&self, b: &[S]) -> Result<Vec<S>> {
        let n = self.lu.rows();
        if b.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.len() });
        }
        let mut x: Vec<S> = self.perm.iter().map(|&p| b[p].clone()).collect();
        for i in 0..n {
            for k in 0..i {
                x[i] = x[i].clone() - self.lu[(i, k)].clone() * x[k].clone();
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                x[i] = x[i].clone() - self.lu[(i, k)].clone() * x[k].clone();
            }
            x[i] = x[i].clone() / self.lu[(i, i)].clone();
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Matrix<S>> {
        let n = self.lu.rows();
        let zero = self.lu[(0, 0)].zero_like();
        let mut inv = Matrix::from_fn(n, n, |_, _| zero.clone());
        for j in 0..n {
            let mut e = vec![zero.clone(); n];
            e[j] = zero.one_like();
            for (i, v) in self.solve(&e)?.into_iter().enumerate() {
                inv[(i, j)] = v;
            }
        }
        Ok(inv)
    }
}

pub fn lu_solve<S: Real>(a: &Matrix<S>, b: &[S]) -> Result<Vec<S>> {
    Lu::factor(a)?.solve(b)
}

pub fn lu_inverse<S: Real>(a: &Matrix<S>) -> Result<Matrix<S>> {
    Lu::factor(a)?.inverse()
}

/// Gauss-Jordan elimination on `[A | B]` over an exact field; returns `A^{-1} B`.
pub fn exact_solve_many<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Result<Matrix<S>> {
    let n = check_square(a)?;
    if b.rows() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.rows() });
    }
    let m = b.cols();
    let mut aug = Matrix::from_fn(n, n + m, |i, j| if j < n { a[(i, j)].clone() } else { b[(i, j - n)].clone() });
    for k in 0..n {
        let p = (k..n).find(|&i| !aug[(i, k)].is_zero()).ok_or(Error::Singular { index: k })?;
        aug.swap_rows(k, p);
        let inv = aug[(k, k)].one_like() / aug[(k, k)].clone();
        for j in k..n + m {
            aug[(k, j)] = aug[(k, j)].clone() * inv.clone();
        }
        for i in 0..n {
            if i == k || aug[(i, k)].is_zero() {
                continue;
            }
            let f = aug[(i, k)].clone();
            for j in k..n + m {
                let v = aug[(k, j)].clone();
                if !v.is_zero() {
                    aug[(i, j)] = aug[(i, j)].clone() - f.clone() * v;
                }
            }
        }
    }
    Ok(Matrix::from_fn(n, m, |i, j| aug[(i, j + n)].clone()))
}

pub fn exact_inverse<S: Scalar>(a: &Matrix<S>) -> Result<Matrix<S>> {
    let n = check_square(a)?;
    exact_solve_many(a, &Matrix::identity_like(n, &a[(0, 0)]))
}

pub fn exact_solve<S: Scalar>(a: &Matrix<S>, b: &[S]) -> Result<Vec<S>> {
    let rhs = Matrix::from_vec(b.len(), 1, b.to_vec());
    Ok(exact_solve_many(a, &rhs)?.into_data())
}

/// Exact determinant by elimination over a field.
pub fn exact_determinant<S: Scalar>(a: &Matrix<S>) -> Result<S> {
    let n = check_square(a)?;
    let mut w = a.clone();
    let mut det = a[(0, 0)].one_like();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !w[(i, k)].is_zero()) else {
            return Ok(a[(0, 0)].zero_like());
        };
        if p != k {
            w.swap_rows(k, p);
            det = -det;
        }
        let pivot = w[(k, k)].clone();
        det = det * pivot.clone();
        for i in k + 1..n {
            if w[(i, k)].is_zero() {
                continue;
            }
            let f = w[(i, k)].clone() / pivot.clone();
            for j in k..n {
                w[(i, j)] = w[(i, j)].clone() - f.clone() * w[(k, j)].clone();
            }
        }
    }
    Ok(det)
}
