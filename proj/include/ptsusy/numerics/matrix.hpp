#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "ptsusy/errors.hpp"
#include "ptsusy/numerics/grid.hpp"

namespace ptsusy::numerics {

/// Dense square complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
        if (n < 0) throw ContractError("ComplexMatrix: negative dimension");
    }

    static ComplexMatrix identity(int n) {
        ComplexMatrix m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(std::span<const Complex> d) {
        ComplexMatrix m(static_cast<int>(d.size()));
        for (int i = 0; i < m.size(); ++i) m(i, i) = d[static_cast<std::size_t>(i)];
        return m;
    }

    int size() const noexcept { return n_; }

    Complex& operator()(int i, int j) noexcept { return a_[index(i, j)]; }
    const Complex& operator()(int i, int j) const noexcept { return a_[index(i, j)]; }

    std::span<Complex> row(int i) noexcept { return {a_.data() + index(i, 0), static_cast<std::size_t>(n_)}; }

    GridFunction multiply(const GridFunction& v) const {
        if (v.size() != static_cast<std::size_t>(n_)) throw ContractError("ComplexMatrix::multiply: size mismatch");
        GridFunction out(v.size());
        for (int i = 0; i < n_; ++i) {
            Complex acc{};
            const Complex* r = a_.data() + index(i, 0);
            for (int j = 0; j < n_; ++j) acc += r[j] * v[static_cast<std::size_t>(j)];
            out[static_cast<std::size_t>(i)] = acc;
        }
        return out;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& z : a_) s += std::norm(z);
        return std::sqrt(s);
    }

    /// Largest i - j with a nonzero entry (0 = upper triangular, 1 = Hessenberg).
    int lower_bandwidth() const {
        for (int d = n_ - 1; d > 0; --d)
            for (int j = 0; j + d < n_; ++j)
                if ((*this)(j + d, j) != Complex{}) return d;
        return 0;
    }

    int upper_bandwidth() const {
        for (int d = n_ - 1; d > 0; --d)
            for (int i = 0; i + d < n_; ++i)
                if ((*this)(i, i + d) != Complex{}) return d;
        return 0;
    }

private:
    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
    }

    int n_ = 0;
    std::vector<Complex> a_;
};

/// Square complex band matrix with kl sub- and ku super-diagonals.
/// Row i stores columns i-kl .. i+ku.
class BandMatrix {
public:
    BandMatrix(int n, int kl, int ku)
        : n_(n), kl_(kl), ku_(ku), a_(static_cast<std::size_t>(n) * static_cast<std::size_t>(kl + ku + 1)) {
        if (n < 0 || kl < 0 || ku < 0) throw ContractError("BandMatrix: negative dimension or bandwidth");
    }

    int size() const noexcept { return n_; }
    int lower() const noexcept { return kl_; }
    int upper() const noexcept { return ku_; }

    bool in_band(int i, int j) const noexcept { return j - i <= ku_ && i - j <= kl_; }

    Complex operator()(int i, int j) const noexcept { return in_band(i, j) ? a_[index(i, j)] : Complex{}; }

    Complex& at(int i, int j) {
        if (!in_band(i, j)) throw ContractError("BandMatrix::at: entry outside the band");
        return a_[index(i, j)];
    }

    GridFunction multiply(const GridFunction& v) const {
        if (v.size() != static_cast<std::size_t>(n_)) throw ContractError("BandMatrix::multiply: size mismatch");
        GridFunction out(v.size());
        for (int i = 0; i < n_; ++i) {
            Complex acc{};
            for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j)
                acc += a_[index(i, j)] * v[static_cast<std::size_t>(j)];
            out[static_cast<std::size_t>(i)] = acc;
        }
        return out;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& z : a_) s += std::norm(z);
        return std::sqrt(s);
    }

    /// M(i,j) == M(j,i) exactly (complex symmetric, not Hermitian).
    bool is_symmetric() const {
        if (kl_ != ku_) return false;
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j <= std::min(n_ - 1, i + ku_); ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

    ComplexMatrix to_dense() const {
        ComplexMatrix m(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j) m(i, j) = a_[index(i, j)];
        return m;
    }

    static BandMatrix from_dense(const ComplexMatrix& m) {
        const int kl = m.lower_bandwidth();
        const int ku = m.upper_bandwidth();
        BandMatrix b(m.size(), kl, ku);
        for (int i = 0; i < m.size(); ++i)
            for (int j = std::max(0, i - kl); j <= std::min(m.size() - 1, i + ku); ++j) b.at(i, j) = m(i, j);
        return b;
    }

private:
    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(kl_ + ku_ + 1) +
               static_cast<std::size_t>(j - i + kl_);
    }

    int n_;
    int kl_;
    int ku_;
    std::vector<Complex> a_;
};

/// LU factorization with partial pivoting of (M - shift I) for a band matrix.
/// Row pivoting widens the upper bandwidth to ku + kl.
class BandLU {
public:
    BandLU(const BandMatrix& m, Complex shift) : n_(m.size()), kl_(m.lower()), width_(2 * m.lower() + m.upper() + 1) {
        rows_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(width_), Complex{});
        pivots_.resize(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i)
            for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + m.upper()); ++j)
                ref(i, j) = m(i, j) - (i == j ? shift : Complex{});
        const double scale = std::max(m.frobenius_norm(), std::abs(shift)) + 1.0;
        const double tiny = 1e-300;
        const int ku_fill = m.upper() + kl_;

        for (int k = 0; k < n_; ++k) {
            const int last_row = std::min(n_ - 1, k + kl_);
            int piv = k;
            double best = std::abs(ref(k, k));
            for (int r = k + 1; r <= last_row; ++r)
                if (double v = std::abs(ref(r, k)); v > best) best = v, piv = r;
            pivots_[static_cast<std::size_t>(k)] = piv;
            const int last_col = std::min(n_ - 1, k + ku_fill);
            if (piv != k)
                for (int j = k; j <= last_col; ++j) std::swap(ref(k, j), ref(piv, j));
            if (std::abs(ref(k, k)) <= tiny) ref(k, k) = scale * 1e-16;  // exactly singular: nudge
            const Complex inv = 1.0 / ref(k, k);
            for (int r = k + 1; r <= last_row; ++r) {
                const Complex f = ref(r, k) * inv;
                ref(r, k) = f;
                if (f == Complex{}) continue;
                for (int j = k + 1; j <= last_col; ++j) ref(r, j) -= f * ref(k, j);
            }
        }
    }

    GridFunction solve(GridFunction b) const {
        if (b.size() != static_cast<std::size_t>(n_)) throw ContractError("BandLU::solve: size mismatch");
        const int ku_fill = width_ - 1 - kl_;
        for (int k = 0; k < n_; ++k) {
            const int piv = pivots_[static_cast<std::size_t>(k)];
            if (piv != k) std::swap(b[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(piv)]);
            for (int r = k + 1; r <= std::min(n_ - 1, k + kl_); ++r)
                b[static_cast<std::size_t>(r)] -= cref(r, k) * b[static_cast<std::size_t>(k)];
        }
        for (int k = n_ - 1; k >= 0; --k) {
            Complex acc = b[static_cast<std::size_t>(k)];
            for (int j = k + 1; j <= std::min(n_ - 1, k + ku_fill); ++j) acc -= cref(k, j) * b[static_cast<std::size_t>(j)];
            b[static_cast<std::size_t>(k)] = acc / cref(k, k);
        }
        return b;
    }

private:
    // Row i holds global columns i - kl .. i + kl + ku.
    Complex& ref(int i, int j) {
        return rows_[static_cast<std::size_t>(i) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(j - i + kl_)];
    }
    const Complex& cref(int i, int j) const {
        return rows_[static_cast<std::size_t>(i) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(j - i + kl_)];
    }

    int n_;
    int kl_;
    int width_;
    std::vector<Complex> rows_;
    std::vector<int> pivots_;
};

inline double norm2(const GridFunction& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

}  // namespace ptsusy::numerics
