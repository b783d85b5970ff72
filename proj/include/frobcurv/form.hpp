#pragma once

#include "frobcurv/series_matrix.hpp"

namespace frobcurv {

enum class SplitKind { Symplectic, SymEven, SymOdd };

/// A symmetric or antisymmetric invertible form q over A, the input datum of
/// every Chern lift.
struct FormMatrix {
    int n = 0;
    int sign = +1;  // q^t = sign * q
    std::vector<CycScalar> entries;  // row-major
    std::shared_ptr<const RingConfig> cfg;

    FormMatrix(int n_, int sign_, std::vector<CycScalar> ent, std::shared_ptr<const RingConfig> cfg_)
        : n(n_), sign(sign_), entries(std::move(ent)), cfg(std::move(cfg_)) {
        if (sign != 1 && sign != -1) throw std::invalid_argument("FormMatrix: sign must be +1 or -1");
        if (static_cast<int>(entries.size()) != n * n) throw std::invalid_argument("FormMatrix: entry count");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (at(j, i) != (sign == 1 ? at(i, j) : -at(i, j)))
                    throw std::invalid_argument("FormMatrix: q^t = sign*q violated");
        inverse_entries = invert();  // also certifies invertibility over the fraction field
    }

    const CycScalar& at(int i, int j) const { return entries[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)]; }
    const CycScalar& inv_at(int i, int j) const {
        return inverse_entries[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)];
    }

    bool entries_roots_of_unity_or_zero() const {
        return std::all_of(entries.begin(), entries.end(),
                           [](const CycScalar& a) { return a.is_root_of_unity_or_zero(); });
    }

    std::vector<std::vector<CycScalar>> rows() const {
        std::vector<std::vector<CycScalar>> r(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            r[static_cast<size_t>(i)].reserve(static_cast<size_t>(n));
            for (int j = 0; j < n; ++j) r[static_cast<size_t>(i)].push_back(at(i, j));
        }
        return r;
    }

private:
    std::vector<CycScalar> invert() const {
        auto inv = SeriesMatrix<CycScalar>::invert_constant_matrix(rows());
        std::vector<CycScalar> flat;
        flat.reserve(static_cast<size_t>(n) * static_cast<size_t>(n));
        for (const auto& row : inv)
            for (const auto& v : row) flat.push_back(v);
        return flat;
    }

    std::vector<CycScalar> inverse_entries;
};

/// The three split forms: symplectic (n=2r), split symmetric even (n=2r),
/// split symmetric odd (n=2r+1).
inline FormMatrix split_form(SplitKind kind, int n,
                             std::shared_ptr<const RingConfig> cfg = RingConfig::rationals()) {
    auto zero = CycScalar::zero(cfg);
    auto one = CycScalar::from_rational(cfg, 1);
    std::vector<CycScalar> e(static_cast<size_t>(n) * static_cast<size_t>(n), zero);
    auto set = [&](int i, int j, const CycScalar& v) { e[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)] = v; };
    switch (kind) {
        case SplitKind::Symplectic: {
            if (n % 2 != 0 || n < 2) throw std::invalid_argument("split_form: symplectic needs even n");
            int r = n / 2;
            for (int i = 0; i < r; ++i) {
                set(i, r + i, one);
                set(r + i, i, -one);
            }
            return FormMatrix(n, -1, std::move(e), cfg);
        }
        case SplitKind::SymEven: {
            if (n % 2 != 0 || n < 2) throw std::invalid_argument("split_form: split-sym-even needs even n");
            int r = n / 2;
            for (int i = 0; i < r; ++i) {
                set(i, r + i, one);
                set(r + i, i, one);
            }
            return FormMatrix(n, +1, std::move(e), cfg);
        }
        case SplitKind::SymOdd: {
            if (n % 2 != 1) throw std::invalid_argument("split_form: split-sym-odd needs odd n");
            int r = (n - 1) / 2;
            set(0, 0, one);
            for (int i = 0; i < r; ++i) {
                set(1 + i, 1 + r + i, one);
                set(1 + r + i, 1 + i, one);
            }
            return FormMatrix(n, +1, std::move(e), cfg);
        }
    }
    throw std::invalid_argument("split_form: unknown kind");
}

inline FormMatrix identity_form(int n, std::shared_ptr<const RingConfig> cfg = RingConfig::rationals()) {
    std::vector<CycScalar> e(static_cast<size_t>(n) * static_cast<size_t>(n), CycScalar::zero(cfg));
    for (int i = 0; i < n; ++i) e[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(i)] = CycScalar::from_rational(cfg, 1);
    return FormMatrix(n, +1, std::move(e), cfg);
}

}  // namespace frobcurv
