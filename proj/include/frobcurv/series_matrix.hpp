#pragma once

#include <map>
#include <mutex>

#include "frobcurv/series.hpp"

namespace frobcurv {

namespace detail {
/// C(s,i) by the falling-factorial recurrence, memoized per s; the lock makes
/// the table safe to grow from concurrent verification targets.
inline mpq_class binom_coeff(const mpq_class& s, int i) {
    static std::mutex mu;
    static std::map<mpq_class, std::vector<mpq_class>> table;
    std::lock_guard<std::mutex> lock(mu);
    auto& row = table[s];
    if (row.empty()) row.push_back(1);
    while (static_cast<int>(row.size()) <= i) {
        int j = static_cast<int>(row.size());
        row.push_back(row.back() * (s - (j - 1)) / j);
    }
    return row[static_cast<size_t>(i)];
}
}  // namespace detail

/// n x n matrix of Series sharing one arity/order/coefficient ring.
template <typename R>
class SeriesMatrix {
public:
    SeriesMatrix(int n, int arity, int order, const R& proto)
        : n_(n), entries_(static_cast<size_t>(n) * static_cast<size_t>(n), Series<R>::zero(arity, order, proto)) {
        if (n < 1) throw std::invalid_argument("SeriesMatrix: n must be >= 1");
    }

    static SeriesMatrix identity(int n, int arity, int order, const R& proto) {
        SeriesMatrix m(n, arity, order, proto);
        for (int i = 0; i < n; ++i)
            m.at(i, i) = Series<R>::constant(arity, order, proto.make_from_rational(1));
        return m;
    }
    static SeriesMatrix from_constants(int arity, int order, const std::vector<std::vector<R>>& values) {
        int n = static_cast<int>(values.size());
        SeriesMatrix m(n, arity, order, values[0][0].make_zero());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m.at(i, j) = Series<R>::constant(arity, order, values[static_cast<size_t>(i)][static_cast<size_t>(j)]);
        return m;
    }
    /// x = 1 + T with T the matrix of generators, row-major.
    static SeriesMatrix one_plus_generators(int n, int order, const R& proto) {
        SeriesMatrix m(n, n * n, order, proto);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                auto t = Series<R>::variable(n * n, order, i * n + j, proto);
                if (i == j) t += Series<R>::constant(n * n, order, proto.make_from_rational(1));
                m.at(i, j) = std::move(t);
            }
        return m;
    }

    int dim() const { return n_; }
    int arity() const { return entries_[0].arity(); }
    int order() const { return entries_[0].order(); }
    const R& proto() const { return entries_[0].proto(); }

    Series<R>& at(int i, int j) { return entries_[static_cast<size_t>(i) * static_cast<size_t>(n_) + static_cast<size_t>(j)]; }
    const Series<R>& at(int i, int j) const {
        return entries_[static_cast<size_t>(i) * static_cast<size_t>(n_) + static_cast<size_t>(j)];
    }

    bool is_zero() const {
        return std::all_of(entries_.begin(), entries_.end(), [](const Series<R>& s) { return s.is_zero(); });
    }

    SeriesMatrix transpose() const {
        SeriesMatrix out = *this;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) out.at(i, j) = at(j, i);
        return out;
    }

    friend SeriesMatrix operator+(const SeriesMatrix& a, const SeriesMatrix& b) {
        a.check_dim(b);
        SeriesMatrix out = a;
        for (size_t i = 0; i < out.entries_.size(); ++i) out.entries_[i] += b.entries_[i];
        return out;
    }
    friend SeriesMatrix operator-(const SeriesMatrix& a, const SeriesMatrix& b) { return a + (-b); }
    SeriesMatrix operator-() const {
        SeriesMatrix out = *this;
        for (auto& e : out.entries_) e = -e;
        return out;
    }
    friend SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b) {
        a.check_dim(b);
        SeriesMatrix out(a.n_, a.arity(), a.order(), a.proto());
        for (int i = 0; i < a.n_; ++i)
            for (int j = 0; j < a.n_; ++j) {
                std::vector<typename Series<R>::Term> acc;
                for (int k = 0; k < a.n_; ++k) {
                    auto prod = a.at(i, k) * b.at(k, j);
                    acc.insert(acc.end(), prod.terms().begin(), prod.terms().end());
                }
                out.at(i, j) = Series<R>::from_terms(a.arity(), a.order(), a.proto(), std::move(acc));
            }
        return out;
    }

    SeriesMatrix scaled(const R& c) const {
        SeriesMatrix out = *this;
        for (auto& e : out.entries_) e = e.scaled(c);
        return out;
    }
    SeriesMatrix scaled(const mpq_class& q) const { return scaled(proto().make_from_rational(q)); }

    friend bool operator==(const SeriesMatrix& a, const SeriesMatrix& b) {
        a.check_dim(b);
        return a.entries_ == b.entries_;
    }
    friend bool operator!=(const SeriesMatrix& a, const SeriesMatrix& b) { return !(a == b); }

    SeriesMatrix truncated(int mu) const {
        SeriesMatrix out(n_, arity(), mu, proto());
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) out.at(i, j) = at(i, j).truncated(mu);
        return out;
    }
    SeriesMatrix graded_part(int d) const {
        SeriesMatrix out = *this;
        for (auto& e : out.entries_) e = e.graded_part(d);
        return out;
    }

    /// a -> a^{(p)}: each entry raised to the p-th power, truncated.
    SeriesMatrix entrywise_power(unsigned long p) const {
        SeriesMatrix out = *this;
        for (auto& e : out.entries_) e = e.pow(p);
        return out;
    }

    SeriesMatrix substitute(const std::vector<Series<R>>& images) const {
        SeriesMatrix out = *this;
        for (auto& e : out.entries_) e = e.substitute(images);
        return out;
    }

    std::vector<std::vector<R>> constant_matrix() const {
        std::vector<std::vector<R>> c(static_cast<size_t>(n_), std::vector<R>(static_cast<size_t>(n_), proto().make_zero()));
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) c[static_cast<size_t>(i)][static_cast<size_t>(j)] = at(i, j).constant_term();
        return c;
    }

    /**
     * Inverse to truncation order, via A = A0(1+E) with E in (T):
     * (sum (-E)^i) * A0^{-1}. Requires the constant-term matrix invertible.
     */
    SeriesMatrix inverse() const {
        auto a0inv = invert_constant_matrix(constant_matrix());
        SeriesMatrix a0inv_m = from_constants(arity(), order(), a0inv);
        SeriesMatrix e = a0inv_m * (*this) - identity(n_, arity(), order(), proto());
        SeriesMatrix acc = identity(n_, arity(), order(), proto());
        SeriesMatrix pw = identity(n_, arity(), order(), proto());
        for (int i = 1; i <= order(); ++i) {
            pw = pw * (-e);
            if (pw.is_zero()) break;
            acc = acc + pw;
        }
        return acc * a0inv_m;
    }

    /// Gauss-Jordan over the coefficient ring; throws on a singular matrix.
    static std::vector<std::vector<R>> invert_constant_matrix(std::vector<std::vector<R>> a) {
        int n = static_cast<int>(a.size());
        const R proto = a[0][0].make_zero();
        std::vector<std::vector<R>> inv(static_cast<size_t>(n), std::vector<R>(static_cast<size_t>(n), proto));
        for (int i = 0; i < n; ++i) inv[static_cast<size_t>(i)][static_cast<size_t>(i)] = proto.make_from_rational(1);
        for (int col = 0; col < n; ++col) {
            int piv = -1;
            for (int r = col; r < n; ++r)
                if (!a[static_cast<size_t>(r)][static_cast<size_t>(col)].is_zero()) {
                    piv = r;
                    break;
                }
            if (piv < 0) throw std::invalid_argument("SeriesMatrix: singular constant term");
            std::swap(a[static_cast<size_t>(piv)], a[static_cast<size_t>(col)]);
            std::swap(inv[static_cast<size_t>(piv)], inv[static_cast<size_t>(col)]);
            R d = a[static_cast<size_t>(col)][static_cast<size_t>(col)].inverse();
            for (int j = 0; j < n; ++j) {
                a[static_cast<size_t>(col)][static_cast<size_t>(j)] *= d;
                inv[static_cast<size_t>(col)][static_cast<size_t>(j)] *= d;
            }
            for (int r = 0; r < n; ++r) {
                if (r == col || a[static_cast<size_t>(r)][static_cast<size_t>(col)].is_zero()) continue;
                R f = a[static_cast<size_t>(r)][static_cast<size_t>(col)];
                for (int j = 0; j < n; ++j) {
                    a[static_cast<size_t>(r)][static_cast<size_t>(j)] -= f * a[static_cast<size_t>(col)][static_cast<size_t>(j)];
                    inv[static_cast<size_t>(r)][static_cast<size_t>(j)] -= f * inv[static_cast<size_t>(col)][static_cast<size_t>(j)];
                }
            }
        }
        return inv;
    }

    void check_dim(const SeriesMatrix& b) const {
        if (n_ != b.n_) throw std::invalid_argument("SeriesMatrix: dimension mismatch");
        entries_[0].check_shape(b.entries_[0]);
    }

private:
    int n_;
    std::vector<Series<R>> entries_;
};

/**
 * (1+U)^s = sum_i C(s,i) U^i for s in {1/2, -1/2}. Requires every entry of U
 * to have zero constant term, which makes the series finite at i = order.
 * (All summands are powers of one matrix, so the scalar binomial identities
 * transfer verbatim.)
 */
template <typename R>
SeriesMatrix<R> binomial_power(const SeriesMatrix<R>& u, const mpq_class& s) {
    if (s != mpq_class(1, 2) && s != mpq_class(-1, 2))
        throw std::invalid_argument("binomial_power: s must be 1/2 or -1/2");
    for (int i = 0; i < u.dim(); ++i)
        for (int j = 0; j < u.dim(); ++j)
            if (!u.at(i, j).constant_term().is_zero())
                throw std::invalid_argument("binomial_power: nonzero constant term");
    auto acc = SeriesMatrix<R>::identity(u.dim(), u.arity(), u.order(), u.proto());
    auto pw = SeriesMatrix<R>::identity(u.dim(), u.arity(), u.order(), u.proto());
    for (int i = 1; i <= u.order(); ++i) {
        pw = pw * u;
        if (pw.is_zero()) break;
        acc = acc + pw.scaled(detail::binom_coeff(s, i));
    }
    return acc;
}

/**
 * As above, but for U that is only p-adically small: every coefficient of
 * every entry must have val_p >= 1 (checked), so the coefficients of U^i
 * carry at least i powers of p and the partial sum up to order + extra_digits
 * is correct modulo p^{extra_digits+1} in every coefficient.
 */
template <typename R, typename ValCheck>
SeriesMatrix<R> binomial_power_p_convergent(const SeriesMatrix<R>& u, const mpq_class& s, int extra_digits,
                                            ValCheck&& coeff_val_ge_1) {
    for (int i = 0; i < u.dim(); ++i)
        for (int j = 0; j < u.dim(); ++j)
            for (const auto& t : u.at(i, j).terms())
                if (!coeff_val_ge_1(t.coeff))
                    throw std::invalid_argument("binomial_power: a coefficient of u is not divisible by p");
    auto acc = SeriesMatrix<R>::identity(u.dim(), u.arity(), u.order(), u.proto());
    auto pw = SeriesMatrix<R>::identity(u.dim(), u.arity(), u.order(), u.proto());
    int bound = u.order() + extra_digits;
    for (int i = 1; i <= bound; ++i) {
        pw = pw * u;
        if (pw.is_zero()) break;
        acc = acc + pw.scaled(detail::binom_coeff(s, i));
    }
    return acc;
}

/// Scalar (1x1) versions, for series like lambda_p and K_p.
template <typename R>
Series<R> series_inverse(const Series<R>& f) {
    R c0 = f.constant_term();
    if (c0.is_zero()) throw std::invalid_argument("series_inverse: zero constant term");
    R c0inv = c0.inverse();
    Series<R> e = f.scaled(c0inv) - Series<R>::constant(f.arity(), f.order(), f.proto().make_from_rational(1));
    Series<R> acc = Series<R>::constant(f.arity(), f.order(), f.proto().make_from_rational(1));
    Series<R> pw = acc;
    for (int i = 1; i <= f.order(); ++i) {
        pw = pw * (-e);
        if (pw.is_zero()) break;
        acc = acc + pw;
    }
    return acc.scaled(c0inv);
}

template <typename R>
Series<R> series_binomial_power(const Series<R>& u, const mpq_class& s) {
    if (!u.constant_term().is_zero())
        throw std::invalid_argument("series_binomial_power: nonzero constant term");
    Series<R> acc = Series<R>::constant(u.arity(), u.order(), u.proto().make_from_rational(1));
    Series<R> pw = acc;
    for (int i = 1; i <= u.order(); ++i) {
        pw = pw * u;
        if (pw.is_zero()) break;
        acc = acc + pw.scaled(detail::binom_coeff(s, i));
    }
    return acc;
}

}  // namespace frobcurv
