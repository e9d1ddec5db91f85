#include "icd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "icd/rng.hpp"

namespace icd::linalg {

namespace {

double hypot2(double a, double b) { return std::hypot(a, b); }

// Householder reduction of a symmetric matrix to tridiagonal form, with the
// orthogonal transform accumulated in v. Adapted from the classic EISPACK
// tred2 routine.
void tred2(Matrix& v, std::vector<double>& d, std::vector<double>& e) {
    const std::size_t n = v.rows();
    for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

    for (std::size_t i = n - 1; i > 0; --i) {
        double scale = 0.0;
        double h = 0.0;
        for (std::size_t k = 0; k < i; ++k) scale += std::fabs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (std::size_t j = 0; j < i; ++j) {
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
                v(j, i) = 0.0;
            }
        } else {
            for (std::size_t k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0) g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                v(j, i) = f;
                g = e[j] + v(j, j) * f;
                for (std::size_t k = j + 1; k <= i - 1; ++k) {
                    g += v(k, j) * d[k];
                    e[k] += v(k, j) * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (std::size_t k = j; k <= i - 1; ++k) v(k, j) -= (f * e[k] + g * d[k]);
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    for (std::size_t i = 0; i < n - 1; ++i) {
        v(n - 1, i) = v(i, i);
        v(i, i) = 1.0;
        const double h = d[i + 1];
        if (h != 0.0) {
            for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
            for (std::size_t j = 0; j <= i; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
                for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
            }
        }
        for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
        d[j] = v(n - 1, j);
        v(n - 1, j) = 0.0;
    }
    v(n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

// Implicit-shift QL on a tridiagonal (d, e), eigenvectors accumulated in v.
// Eigenvalues returned ascending. Adapted from EISPACK tql2.
void tql2(Matrix& v, std::vector<double>& d, std::vector<double>& e) {
    const std::size_t n = v.rows();
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    double f = 0.0;
    double tst1 = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::fabs(d[l]) + std::fabs(e[l]));
        std::size_t m = l;
        while (m < n) {
            if (std::fabs(e[m]) <= eps * tst1) break;
            ++m;
        }
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > 50) throw std::runtime_error("tql2: QL iteration limit");
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = hypot2(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0;
                double c2 = c;
                double c3 = c;
                const double el1 = e[l + 1];
                double s = 0.0;
                double s2 = 0.0;
                for (std::size_t i = m - 1; i + 1 > l; --i) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = hypot2(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for (std::size_t k = 0; k < n; ++k) {
                        h = v(k, i + 1);
                        v(k, i + 1) = s * v(k, i) + c * h;
                        v(k, i) = c * v(k, i) - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::fabs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }

    // Ascending sort with matching eigenvector columns.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        std::size_t k = i;
        double p = d[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            if (d[j] < p) {
                k = j;
                p = d[j];
            }
        }
        if (k != i) {
            d[k] = d[i];
            d[i] = p;
            for (std::size_t j = 0; j < n; ++j) std::swap(v(j, i), v(j, k));
        }
    }
}

}  // namespace

SymEigen eigh_dense(const Matrix& a) {
    if (a.rows() != a.cols()) throw std::runtime_error("eigh_dense: matrix not square");
    const std::size_t n = a.rows();
    SymEigen out;
    out.values.assign(n, 0.0);
    out.vectors = a;
    if (n == 0) return out;
    if (n == 1) {
        out.values[0] = a(0, 0);
        out.vectors(0, 0) = 1.0;
        return out;
    }
    std::vector<double> e(n, 0.0);
    tred2(out.vectors, out.values, e);
    tql2(out.vectors, out.values, e);
    return out;
}

RightSvd svd_right(const Matrix& x) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    // Column-major working copy so column rotations are contiguous.
    std::vector<double> col(d * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) col[j * n + i] = x(i, j);
    }
    std::vector<double> v(d * d, 0.0);
    for (std::size_t j = 0; j < d; ++j) v[j * d + j] = 1.0;

    const double tol = 1e-14;
    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                double* cp = &col[p * n];
                double* cq = &col[q * n];
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    app += cp[i] * cp[i];
                    aqq += cq[i] * cq[i];
                    apq += cp[i] * cq[i];
                }
                if (std::fabs(apq) <= tol * std::sqrt(app * aqq) || apq == 0.0) continue;
                rotated = true;
                const double zeta = (aqq - app) / (2.0 * apq);
                const double t = (zeta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (std::size_t i = 0; i < n; ++i) {
                    const double a = cp[i];
                    const double b = cq[i];
                    cp[i] = cs * a - sn * b;
                    cq[i] = sn * a + cs * b;
                }
                double* vp = &v[p * d];
                double* vq = &v[q * d];
                for (std::size_t i = 0; i < d; ++i) {
                    const double a = vp[i];
                    const double b = vq[i];
                    vp[i] = cs * a - sn * b;
                    vq[i] = sn * a + cs * b;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sigma(d);
    for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += col[j * n + i] * col[j * n + i];
        sigma[j] = std::sqrt(s);
    }
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

    RightSvd out;
    out.singular_values.resize(d);
    out.right_vectors = Matrix(d, d);
    for (std::size_t k = 0; k < d; ++k) {
        const std::size_t j = order[k];
        out.singular_values[k] = sigma[j];
        for (std::size_t i = 0; i < d; ++i) out.right_vectors(i, k) = v[j * d + i];
    }
    return out;
}

namespace {

// CG solve of (M + shift I) x = b. M must be PSD so the shifted system is PD.
std::size_t cg_solve(std::size_t n, const MatVec& mv, double shift, const double* b, double* x,
                     double rel_tol, std::size_t max_iters, std::vector<double>& scratch) {
    scratch.assign(3 * n, 0.0);
    double* r = scratch.data();
    double* p = r + n;
    double* ap = p + n;

    std::fill(x, x + n, 0.0);
    double bnorm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = b[i];
        p[i] = b[i];
        bnorm2 += b[i] * b[i];
    }
    if (bnorm2 == 0.0) return 0;
    double rs = bnorm2;
    const double stop = rel_tol * rel_tol * bnorm2;
    std::size_t it = 0;
    for (; it < max_iters && rs > stop; ++it) {
        mv(p, ap);
        for (std::size_t i = 0; i < n; ++i) ap[i] += shift * p[i];
        double pap = 0.0;
        for (std::size_t i = 0; i < n; ++i) pap += p[i] * ap[i];
        if (pap <= 0.0) break;
        const double alpha = rs / pap;
        double rs_new = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
            rs_new += r[i] * r[i];
        }
        const double beta = rs_new / rs;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
        rs = rs_new;
    }
    return it;
}

}  // namespace

SymEigen smallest_eigenpairs(std::size_t n, const MatVec& mv, std::size_t m, double shift,
                             double tol, std::size_t max_iters, std::uint64_t seed) {
    if (m == 0 || m > n) throw std::runtime_error("smallest_eigenpairs: bad pair count");

    Rng rng(seed);
    std::vector<std::vector<double>> basis;  // Lanczos vectors q_1..q_j
    std::vector<double> alpha, beta;
    std::vector<double> w(n), cg_x(n), scratch;

    auto random_unit = [&](std::vector<double>& q) {
        q.resize(n);
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            q[i] = rng.normal();
        }
        // Orthogonalize against existing basis (twice for stability).
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& prev : basis) {
                const double c = dot(q.data(), prev.data(), n);
                for (std::size_t i = 0; i < n; ++i) q[i] -= c * prev[i];
            }
        }
        s = norm2(q.data(), n);
        if (s == 0.0) throw std::runtime_error("smallest_eigenpairs: degenerate start vector");
        for (std::size_t i = 0; i < n; ++i) q[i] /= s;
    };

    std::vector<double> q;
    random_unit(q);
    basis.push_back(q);

    const std::size_t lanczos_cap = std::min(n, max_iters);
    std::vector<double> ritz_residuals;

    for (std::size_t j = 0; j < lanczos_cap; ++j) {
        // w = (M + shift I)^{-1} q_j
        cg_solve(n, mv, shift, basis[j].data(), cg_x.data(), 1e-13, max_iters, scratch);
        w = cg_x;
        const double a = dot(w.data(), basis[j].data(), n);
        alpha.push_back(a);
        for (std::size_t i = 0; i < n; ++i) w[i] -= a * basis[j][i];
        if (j > 0) {
            for (std::size_t i = 0; i < n; ++i) w[i] -= beta[j - 1] * basis[j - 1][i];
        }
        // Full reorthogonalization.
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& prev : basis) {
                const double c = dot(w.data(), prev.data(), n);
                for (std::size_t i = 0; i < n; ++i) w[i] -= c * prev[i];
            }
        }
        const double b = norm2(w.data(), n);

        const std::size_t k = j + 1;  // current subspace size
        const bool subspace_exhausted = b < 1e-13;
        if (k >= m + 2 || subspace_exhausted || k == lanczos_cap) {
            // Ritz extraction from the k x k tridiagonal.
            Matrix t(k, k);
            for (std::size_t i = 0; i < k; ++i) {
                t(i, i) = alpha[i];
                if (i + 1 < k) {
                    t(i, i + 1) = beta[i];
                    t(i + 1, i) = beta[i];
                }
            }
            SymEigen te = eigh_dense(t);
            // Largest theta of the inverse operator correspond to the smallest
            // eigenvalues of M: lambda = 1/theta - shift.
            SymEigen out;
            out.values.assign(m, 0.0);
            out.vectors = Matrix(n, m);
            ritz_residuals.assign(m, 0.0);
            bool converged = true;
            std::vector<double> v(n), mvv(n);
            for (std::size_t p = 0; p < m; ++p) {
                const std::size_t col = k - 1 - p;  // theta descending from the top
                if (p >= k) {
                    converged = false;
                    break;
                }
                const double theta = te.values[col];
                if (theta <= 0.0) {
                    converged = false;
                    break;
                }
                const double lambda = 1.0 / theta - shift;
                std::fill(v.begin(), v.end(), 0.0);
                for (std::size_t i = 0; i < k; ++i) {
                    const double z = te.vectors(i, col);
                    const double* qi = basis[i].data();
                    for (std::size_t r = 0; r < n; ++r) v[r] += z * qi[r];
                }
                const double vn = norm2(v.data(), n);
                for (std::size_t r = 0; r < n; ++r) v[r] /= vn;
                mv(v.data(), mvv.data());
                double res = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    const double diff = mvv[r] - lambda * v[r];
                    res += diff * diff;
                }
                res = std::sqrt(res);
                ritz_residuals[p] = res;
                if (res > tol * std::max(1.0, std::fabs(lambda))) converged = false;
                out.values[m - 1 - p] = lambda;
                for (std::size_t r = 0; r < n; ++r) out.vectors(r, m - 1 - p) = v[r];
            }
            if (converged && k >= m) return out;
            if (subspace_exhausted && k >= m) {
                // Invariant subspace found; accept if residuals are tight.
                bool ok = true;
                for (double r : ritz_residuals) {
                    if (r > tol * 10) ok = false;
                }
                if (ok) return out;
            }
        }

        if (subspace_exhausted) {
            random_unit(w);
            beta.push_back(0.0);
            basis.push_back(w);
        } else {
            beta.push_back(b);
            for (std::size_t i = 0; i < n; ++i) w[i] /= b;
            basis.push_back(w);
        }
    }

    std::ostringstream msg;
    msg << "smallest_eigenpairs: iteration cap " << lanczos_cap << " exceeded; residual norms:";
    for (double r : ritz_residuals) msg << ' ' << r;
    throw std::runtime_error(msg.str());
}

}  // namespace icd::linalg
