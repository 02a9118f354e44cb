#pragma once

// Dense and banded eigensolvers for complex non-Hermitian matrices.
//
// eig_complex is the general path: Householder reduction to Hessenberg form,
// then single-shift implicit QR with Wilkinson shifts. eig_symmetric_band is
// an O(n^2) path for complex symmetric band matrices (the discretized
// Hamiltonians): complex-orthogonal band-to-tridiagonal reduction followed by
// QL iteration on the complex symmetric tridiagonal. Complex-orthogonal
// transformations can break down; the band path then throws NumericalError and
// eig_hamiltonian falls back to the general path.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ptsusy/errors.hpp"
#include "ptsusy/numerics/matrix.hpp"

namespace ptsusy::numerics {

struct EigenResult {
    std::vector<Complex> eigenvalues;
    /// When present, eigenvectors[k] pairs with eigenvalues[k]; an empty vector
    /// means that eigenvector was not requested.
    std::optional<std::vector<GridFunction>> eigenvectors;
    int iterations = 0;
    std::vector<bool> converged;

    bool fully_converged() const {
        return std::all_of(converged.begin(), converged.end(), [](bool b) { return b; });
    }
};

inline constexpr double default_eig_tol = 1e-14;
inline constexpr int default_eig_max_iter = 100;

namespace detail {

// Ascending by real part, then imaginary part.
inline void sort_result(EigenResult& r) {
    std::vector<std::size_t> order(r.eigenvalues.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Complex& x = r.eigenvalues[a];
        const Complex& y = r.eigenvalues[b];
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    EigenResult s;
    s.iterations = r.iterations;
    for (auto k : order) {
        s.eigenvalues.push_back(r.eigenvalues[k]);
        s.converged.push_back(r.converged[k]);
    }
    if (r.eigenvectors) {
        s.eigenvectors.emplace();
        for (auto k : order) s.eigenvectors->push_back(std::move((*r.eigenvectors)[k]));
    }
    r = std::move(s);
}

// In-place Householder reduction of a dense matrix to upper Hessenberg form.
inline void reduce_to_hessenberg(ComplexMatrix& h) {
    const int n = h.size();
    std::vector<Complex> v(static_cast<std::size_t>(n));
    for (int k = 0; k + 2 < n; ++k) {
        double tail = 0.0;
        for (int i = k + 2; i < n; ++i) tail += std::norm(h(i, k));
        if (tail == 0.0) continue;
        const Complex x0 = h(k + 1, k);
        const double xnorm = std::sqrt(tail + std::norm(x0));
        const Complex phase = std::abs(x0) == 0.0 ? Complex{1.0} : x0 / std::abs(x0);
        const Complex alpha = -phase * xnorm;

        double vnorm2 = 0.0;
        for (int i = k + 1; i < n; ++i) {
            v[static_cast<std::size_t>(i)] = h(i, k) - (i == k + 1 ? alpha : Complex{});
            vnorm2 += std::norm(v[static_cast<std::size_t>(i)]);
        }
        const double vn = std::sqrt(vnorm2);
        for (int i = k + 1; i < n; ++i) v[static_cast<std::size_t>(i)] /= vn;

        // H <- (I - 2 v v^H) H
        for (int j = k; j < n; ++j) {
            Complex dot{};
            for (int i = k + 1; i < n; ++i) dot += std::conj(v[static_cast<std::size_t>(i)]) * h(i, j);
            dot *= 2.0;
            for (int i = k + 1; i < n; ++i) h(i, j) -= v[static_cast<std::size_t>(i)] * dot;
        }
        // H <- H (I - 2 v v^H)
        for (int i = 0; i < n; ++i) {
            Complex dot{};
            for (int j = k + 1; j < n; ++j) dot += h(i, j) * v[static_cast<std::size_t>(j)];
            dot *= 2.0;
            for (int j = k + 1; j < n; ++j) h(i, j) -= dot * std::conj(v[static_cast<std::size_t>(j)]);
        }
        for (int i = k + 2; i < n; ++i) h(i, k) = 0.0;
        h(k + 1, k) = alpha;
    }
}

// Eigenvalue of [[a, b], [c, d]] closest to d.
inline Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
    const Complex half_tr = 0.5 * (a + d);
    const Complex disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
    const Complex l1 = half_tr + disc;
    const Complex l2 = half_tr - disc;
    return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

// Eigenvalues of an upper Hessenberg matrix by single-shift implicit QR.
inline EigenResult hessenberg_qr(ComplexMatrix h, double tol, int max_iter) {
    const int n = h.size();
    EigenResult out;
    out.eigenvalues.assign(static_cast<std::size_t>(n), Complex{});
    out.converged.assign(static_cast<std::size_t>(n), false);
    const double norm = std::max(h.frobenius_norm(), 1e-300);

    int hi = n - 1;
    int iter = 0;
    while (hi >= 0) {
        int l = hi;
        for (; l > 0; --l) {
            double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
            if (s == 0.0) s = norm;
            if (std::abs(h(l, l - 1)) <= tol * s) {
                h(l, l - 1) = 0.0;
                break;
            }
        }
        if (l == hi) {
            out.eigenvalues[static_cast<std::size_t>(hi)] = h(hi, hi);
            out.converged[static_cast<std::size_t>(hi)] = true;
            --hi;
            iter = 0;
            continue;
        }
        if (iter >= max_iter) {
            // Give up on this block; keep the diagonal as unconverged estimates.
            for (int i = l; i <= hi; ++i) out.eigenvalues[static_cast<std::size_t>(i)] = h(i, i);
            hi = l - 1;
            iter = 0;
            continue;
        }
        ++iter;
        ++out.iterations;

        Complex mu;
        if (iter % 10 == 0)
            mu = h(hi, hi) + Complex(std::abs(h(hi, hi - 1)), std::abs(h(hi - 1, std::max(l, hi - 2))));
        else
            mu = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));

        for (int k = l; k < hi; ++k) {
            Complex x, y;
            if (k == l) {
                x = h(l, l) - mu;
                y = h(l + 1, l);
            } else {
                x = h(k, k - 1);
                y = h(k + 1, k - 1);
            }
            const double r = std::hypot(std::abs(x), std::abs(y));
            if (r == 0.0) continue;
            const Complex c = x / r;
            const Complex s = y / r;
            // Rows k, k+1 from the left by G = [[conj c, conj s], [-s, c]].
            for (int j = std::max(l, k - 1); j <= hi; ++j) {
                const Complex a = h(k, j);
                const Complex b = h(k + 1, j);
                h(k, j) = std::conj(c) * a + std::conj(s) * b;
                h(k + 1, j) = -s * a + c * b;
            }
            // Columns k, k+1 from the right by G^H.
            for (int i = l; i <= std::min(k + 2, hi); ++i) {
                const Complex a = h(i, k);
                const Complex b = h(i, k + 1);
                h(i, k) = a * c + b * s;
                h(i, k + 1) = -a * std::conj(s) + b * std::conj(c);
            }
            if (k > l) h(k + 1, k - 1) = 0.0;
        }
    }
    return out;
}

// Lower half of a complex symmetric band matrix with room for one bulge
// diagonal: a[d][j] = A(j + d, j), 0 <= d <= w.
class SymmetricBand {
public:
    SymmetricBand(const BandMatrix& m, int w) : n_(m.size()), w_(w), a_(static_cast<std::size_t>((w + 1) * m.size())) {
        for (int j = 0; j < n_; ++j)
            for (int d = 0; d <= std::min(m.lower(), n_ - 1 - j); ++d) ref(j + d, j) = m(j + d, j);
    }

    int size() const noexcept { return n_; }

    Complex get(int i, int j) const noexcept {
        if (i < j) std::swap(i, j);
        return i - j <= w_ ? a_[static_cast<std::size_t>((i - j) * n_ + j)] : Complex{};
    }

    void set(int i, int j, Complex v) noexcept {
        if (i < j) std::swap(i, j);
        if (i - j <= w_) ref(i, j) = v;
    }

    // Zero A(r, col) by a complex-orthogonal rotation in the (r-1, r) plane,
    // applied as a similarity so symmetry is preserved.
    void annihilate(int r, int col) {
        const Complex x = get(r - 1, col);
        const Complex y = get(r, col);
        if (y == Complex{}) return;
        const Complex rho = std::sqrt(x * x + y * y);
        if (std::abs(rho) <= 1e-8 * (std::abs(x) + std::abs(y)))
            throw NumericalError("complex-orthogonal rotation breakdown in band reduction");
        const Complex c = x / rho;
        const Complex s = y / rho;
        const int p = r - 1;
        const int q = r;
        for (int j = std::max(0, p - w_); j <= std::min(n_ - 1, q + w_); ++j) {
            if (j == p || j == q) continue;
            const Complex apj = get(p, j);
            const Complex aqj = get(q, j);
            set(p, j, c * apj + s * aqj);
            set(q, j, -s * apj + c * aqj);
        }
        const Complex app = get(p, p);
        const Complex aqq = get(q, q);
        const Complex apq = get(p, q);
        set(p, p, c * c * app + 2.0 * c * s * apq + s * s * aqq);
        set(q, q, s * s * app - 2.0 * c * s * apq + c * c * aqq);
        set(p, q, -c * s * app + (c * c - s * s) * apq + c * s * aqq);
        set(q, col, 0.0);
    }

private:
    Complex& ref(int i, int j) { return a_[static_cast<std::size_t>((i - j) * n_ + j)]; }

    int n_;
    int w_;
    std::vector<Complex> a_;
};

// Eigenvalues of the complex symmetric tridiagonal (d, e) by implicit QL,
// e[i] = T(i+1, i). Throws NumericalError on breakdown.
inline EigenResult symmetric_tridiagonal_ql(std::vector<Complex> d, std::vector<Complex> e, double tol,
                                            int max_iter) {
    const int n = static_cast<int>(d.size());
    EigenResult out;
    out.converged.assign(static_cast<std::size_t>(n), true);
    e.resize(static_cast<std::size_t>(n), Complex{});
    if (n > 0) e[static_cast<std::size_t>(n - 1)] = 0.0;
    auto D = [&](int i) -> Complex& { return d[static_cast<std::size_t>(i)]; };
    auto E = [&](int i) -> Complex& { return e[static_cast<std::size_t>(i)]; };
    auto checked_root = [](Complex a, Complex b) {
        const Complex r = std::sqrt(a * a + b * b);
        if (std::abs(r) <= 1e-10 * (std::abs(a) + std::abs(b)))
            throw NumericalError("complex symmetric QL breakdown");
        return r;
    };

    Complex f{};
    for (int l = 0; l < n; ++l) {
        int j = 0;
        for (;;) {
            int m = l;
            for (; m < n - 1; ++m)
                if (std::abs(E(m)) <= tol * (std::abs(D(m)) + std::abs(D(m + 1)))) break;
            if (m == l) break;
            if (j == max_iter) {
                out.converged[static_cast<std::size_t>(l)] = false;
                break;
            }
            ++j;
            ++out.iterations;

            const Complex g = D(l);
            Complex p = (D(l + 1) - g) / (2.0 * E(l));
            Complex r = checked_root(p, 1.0);
            if (std::abs(p - r) > std::abs(p + r)) r = -r;
            D(l) = E(l) / (p + r);
            D(l + 1) = E(l) * (p + r);
            const Complex dl1 = D(l + 1);
            const Complex hshift = g - D(l);
            for (int i = l + 2; i < n; ++i) D(i) -= hshift;
            f += hshift;

            p = D(m);
            Complex c = 1.0, c2 = 1.0, c3 = 1.0;
            Complex s = 0.0, s2 = 0.0;
            const Complex el1 = E(l + 1);
            for (int i = m - 1; i >= l; --i) {
                c3 = c2;
                c2 = c;
                s2 = s;
                const Complex gg = c * E(i);
                const Complex hh = c * p;
                r = checked_root(p, E(i));
                E(i + 1) = s * r;
                s = E(i) / r;
                c = p / r;
                p = c * D(i) - s * gg;
                D(i + 1) = hh + s * (c * gg + s * D(i));
            }
            p = -s * s2 * c3 * el1 * E(l) / dl1;
            E(l) = s * p;
            D(l) = c * p;
        }
        D(l) += f;
    }
    out.eigenvalues = std::move(d);
    return out;
}

}  // namespace detail

/// Eigenvalues (and optionally eigenvectors) of a general complex matrix.
/// Unconverged eigenvalues are returned with converged[k] == false.
inline EigenResult eig_complex(const ComplexMatrix& m, double tol = default_eig_tol, int max_iter = default_eig_max_iter,
                        bool want_vectors = false);

/// Eigenvalues of a complex symmetric band matrix. Throws NumericalError on
/// breakdown of the complex-orthogonal reduction.
inline EigenResult eig_symmetric_band(const BandMatrix& m, double tol = default_eig_tol,
                                      int max_iter = default_eig_max_iter) {
    if (!m.is_symmetric()) throw ContractError("eig_symmetric_band: matrix is not complex symmetric");
    const int n = m.size();
    const int b = m.lower();
    detail::SymmetricBand band(m, b + 1);
    for (int k = 0; k + 2 < n; ++k) {
        for (int d = std::min(b, n - 1 - k); d >= 2; --d) {
            int r = k + d;
            band.annihilate(r, k);
            int col = r - 1;
            r += b;
            while (r < n && band.get(r, col) != Complex{}) {
                band.annihilate(r, col);
                col = r - 1;
                r += b;
            }
        }
    }
    std::vector<Complex> diag(static_cast<std::size_t>(n)), off(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        diag[static_cast<std::size_t>(i)] = band.get(i, i);
        if (i + 1 < n) off[static_cast<std::size_t>(i)] = band.get(i + 1, i);
    }
    auto out = detail::symmetric_tridiagonal_ql(std::move(diag), std::move(off), tol, max_iter);
    detail::sort_result(out);
    return out;
}

/// Eigenvector for a (converged) eigenvalue by shifted inverse iteration,
/// normalized to unit 2-norm.
inline GridFunction inverse_iteration(const BandMatrix& m, Complex lambda, int sweeps = 3) {
    const int n = m.size();
    const double scale = std::max(1.0, std::abs(lambda));
    // A tiny offset keeps the factorization finite when lambda is exact.
    const BandLU lu(m, lambda + Complex(1e-13 * scale, 1e-13 * scale));
    GridFunction v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = Complex(1.0 + 0.01 * (i % 7), 0.003 * (i % 5));
    double last_res = std::numeric_limits<double>::infinity();
    for (int s = 0; s < sweeps; ++s) {
        v = lu.solve(std::move(v));
        const double nv = norm2(v);
        if (!(nv > 0.0) || !std::isfinite(nv)) throw NumericalError("inverse iteration produced a non-finite vector");
        for (auto& z : v) z /= nv;
        GridFunction mv = m.multiply(v);
        double res = 0.0;
        for (int i = 0; i < n; ++i) res += std::norm(mv[static_cast<std::size_t>(i)] - lambda * v[static_cast<std::size_t>(i)]);
        res = std::sqrt(res);
        if (res >= 0.5 * last_res) break;
        last_res = res;
    }
    return v;
}

/// ‖Mv − λv‖ / ‖v‖.
inline double eigen_residual(const BandMatrix& m, Complex lambda, const GridFunction& v) {
    GridFunction mv = m.multiply(v);
    double res = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) res += std::norm(mv[i] - lambda * v[i]);
    return std::sqrt(res) / norm2(v);
}

inline double eigen_residual(const ComplexMatrix& m, Complex lambda, const GridFunction& v) {
    GridFunction mv = m.multiply(v);
    double res = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) res += std::norm(mv[i] - lambda * v[i]);
    return std::sqrt(res) / norm2(v);
}

/// Two-sided Rayleigh quotient v^T M v / v^T v. For a complex symmetric M the
/// left eigenvector is v itself, so the error is quadratic in that of v.
inline std::optional<Complex> bilinear_rayleigh_quotient(const BandMatrix& m, const GridFunction& v) {
    const GridFunction mv = m.multiply(v);
    Complex num{}, den{};
    for (std::size_t i = 0; i < v.size(); ++i) {
        num += v[i] * mv[i];
        den += v[i] * v[i];
    }
    if (std::abs(den) < 1e-8 * norm2(v) * norm2(v)) return std::nullopt;  // quasi-null vector
    return num / den;
}

/// Copy of r with eigenvectors computed for the converged eigenvalues that
/// satisfy select (all converged ones when select is empty). For complex
/// symmetric m each selected eigenvalue is also polished with the bilinear
/// Rayleigh quotient when that lowers the residual.
inline EigenResult with_eigenvectors(const BandMatrix& m, const EigenResult& r,
                                     const std::function<bool(Complex)>& select = {}) {
    EigenResult out = r;
    out.eigenvectors.emplace(r.eigenvalues.size());
    const bool symmetric = m.is_symmetric();
    for (std::size_t k = 0; k < r.eigenvalues.size(); ++k) {
        if (!r.converged[k]) continue;
        if (select && !select(r.eigenvalues[k])) continue;
        Complex lambda = r.eigenvalues[k];
        GridFunction v = inverse_iteration(m, lambda);
        if (symmetric) {
            for (int pass = 0; pass < 2; ++pass) {
                const auto rq = bilinear_rayleigh_quotient(m, v);
                if (!rq || *rq == lambda) break;
                GridFunction w = inverse_iteration(m, *rq);
                if (eigen_residual(m, *rq, w) >= eigen_residual(m, lambda, v)) break;
                lambda = *rq;
                v = std::move(w);
            }
        }
        out.eigenvalues[k] = lambda;
        (*out.eigenvectors)[k] = std::move(v);
    }
    return out;
}

inline EigenResult eig_complex(const ComplexMatrix& m, double tol, int max_iter, bool want_vectors) {
    if (!(tol > 0.0)) throw ContractError("eig_complex: tolerance must be positive");
    if (max_iter < 1) throw ContractError("eig_complex: max_iter must be at least 1");
    ComplexMatrix h = m;
    if (m.lower_bandwidth() > 1) detail::reduce_to_hessenberg(h);
    EigenResult out = detail::hessenberg_qr(std::move(h), tol, max_iter);
    detail::sort_result(out);
    if (want_vectors) out = with_eigenvectors(BandMatrix::from_dense(m), out);
    return out;
}

/// Eigenvalues of a discretized Hamiltonian: the band path when the matrix is
/// complex symmetric, the general path otherwise or on breakdown.
inline EigenResult eig_hamiltonian(const BandMatrix& m, double tol = default_eig_tol,
                                   int max_iter = default_eig_max_iter) {
    if (m.is_symmetric()) {
        try {
            return eig_symmetric_band(m, tol, max_iter);
        } catch (const NumericalError&) {
        }
    }
    return eig_complex(m.to_dense(), tol, max_iter);
}

}  // namespace ptsusy::numerics
