#pragma once

#include "frobcurv/curvature.hpp"
#include "frobcurv/padic.hpp"

namespace frobcurv {

/// n x n matrix of p-adic scalars at one shared (p, k).
struct PadicMatrix {
    int n;
    std::vector<PadicScalar> entries;

    PadicMatrix(int n_, long p, int k)
        : n(n_), entries(static_cast<size_t>(n_) * static_cast<size_t>(n_), PadicScalar(p, k)) {}
    PadicScalar& at(int i, int j) { return entries[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)]; }
    const PadicScalar& at(int i, int j) const {
        return entries[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)];
    }
    bool is_zero() const {
        return std::all_of(entries.begin(), entries.end(), [](const PadicScalar& s) { return s.is_zero(); });
    }
    friend PadicMatrix operator*(const PadicMatrix& a, const PadicMatrix& b) {
        PadicMatrix out(a.n, a.entries[0].prime(), a.entries[0].precision());
        for (int i = 0; i < a.n; ++i)
            for (int j = 0; j < a.n; ++j) {
                PadicScalar acc = a.at(i, 0) * b.at(0, j);
                for (int k = 1; k < a.n; ++k) acc += a.at(i, k) * b.at(k, j);
                out.at(i, j) = acc;
            }
        return out;
    }
    friend PadicMatrix operator+(const PadicMatrix& a, const PadicMatrix& b) {
        PadicMatrix out = a;
        for (size_t i = 0; i < out.entries.size(); ++i) out.entries[i] += b.entries[i];
        return out;
    }
    friend PadicMatrix operator-(const PadicMatrix& a, const PadicMatrix& b) {
        PadicMatrix out = a;
        for (size_t i = 0; i < out.entries.size(); ++i) out.entries[i] -= b.entries[i];
        return out;
    }
    PadicMatrix scaled(const PadicScalar& c) const {
        PadicMatrix out = *this;
        for (auto& e : out.entries) e *= c;
        return out;
    }
    std::string str() const {
        std::ostringstream os;
        for (int i = 0; i < n; ++i) {
            os << (i ? "; " : "[");
            for (int j = 0; j < n; ++j) os << (j ? ", " : "") << at(i, j).str();
        }
        os << "]";
        return os.str();
    }
};

namespace detail {
inline PadicMatrix padic_identity(int n, long p, int k) {
    PadicMatrix m(n, p, k);
    for (int i = 0; i < n; ++i) m.at(i, i) = PadicScalar::from_long(p, k, 1);
    return m;
}

inline PadicMatrix invert_padic(const PadicMatrix& a) {
    long p = a.entries[0].prime();
    int k = a.entries[0].precision();
    int n = a.n;
    // Gauss-Jordan; pivots must be p-adic units
    std::vector<std::vector<PadicScalar>> m(static_cast<size_t>(n)), inv(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m[static_cast<size_t>(i)].push_back(a.at(i, j));
            inv[static_cast<size_t>(i)].push_back(PadicScalar::from_long(p, k, i == j ? 1 : 0));
        }
    }
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (!m[static_cast<size_t>(r)][static_cast<size_t>(col)].is_zero() &&
                m[static_cast<size_t>(r)][static_cast<size_t>(col)].valuation() == 0) {
                piv = r;
                break;
            }
        if (piv < 0) throw std::invalid_argument("PadicMatrix: not invertible over Z_p at this precision");
        std::swap(m[static_cast<size_t>(piv)], m[static_cast<size_t>(col)]);
        std::swap(inv[static_cast<size_t>(piv)], inv[static_cast<size_t>(col)]);
        PadicScalar d = m[static_cast<size_t>(col)][static_cast<size_t>(col)].inverse();
        for (int j = 0; j < n; ++j) {
            m[static_cast<size_t>(col)][static_cast<size_t>(j)] *= d;
            inv[static_cast<size_t>(col)][static_cast<size_t>(j)] *= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || m[static_cast<size_t>(r)][static_cast<size_t>(col)].is_zero()) continue;
            PadicScalar f = m[static_cast<size_t>(r)][static_cast<size_t>(col)];
            for (int j = 0; j < n; ++j) {
                m[static_cast<size_t>(r)][static_cast<size_t>(j)] -= f * m[static_cast<size_t>(col)][static_cast<size_t>(j)];
                inv[static_cast<size_t>(r)][static_cast<size_t>(j)] -= f * inv[static_cast<size_t>(col)][static_cast<size_t>(j)];
            }
        }
    }
    PadicMatrix out(n, p, k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.at(i, j) = inv[static_cast<size_t>(i)][static_cast<size_t>(j)];
    return out;
}

/// (1+U)^s for a matrix U = p * (integral); terms beyond i have valuation >= i.
inline PadicMatrix matrix_binomial_padic(const PadicMatrix& u, const mpq_class& s) {
    long p = u.entries[0].prime();
    int k = u.entries[0].precision();
    for (const auto& e : u.entries)
        if (!e.is_zero() && e.valuation() < 1)
            throw std::invalid_argument("matrix_binomial_padic: argument not in p*(matrices)");
    PadicMatrix acc = padic_identity(u.n, p, k);
    PadicMatrix pw = acc;
    for (int i = 1; i <= k; ++i) {  // val(term_i) >= i, so i > k contributes 0 mod p^k
        pw = pw * u;
        acc = acc + pw.scaled(PadicScalar::from_mpq(p, k, detail::binom_coeff(s, i)));
    }
    return acc;
}
}  // namespace detail

/// Rational matrix q read into Z_p entries (q must be p-adically integral-invertible).
inline PadicMatrix form_to_padic(const FormMatrix& q, long p, int k) {
    if (q.cfg->N != 1) throw std::invalid_argument("one-prime module requires N=1 (rational q)");
    PadicMatrix m(q.n, p, k);
    for (int i = 0; i < q.n; ++i)
        for (int j = 0; j < q.n; ++j) m.at(i, j) = PadicScalar::from_mpq(p, k, q.at(i, j).rational_value());
    return m;
}

/**
 * Closed form for the one-prime (1,1)-curvature at the identity:
 *
 *   Phi_{p pbar}(1) = -delta_pbar((1 + p (q^{(p)})^{-1} delta_p q)^{-1/2}),
 *
 * computed entirely in capped-precision Z_p arithmetic. delta_p on rational
 * entries is the Fermat quotient (a - a^p)/p; the -1/2 power is the branch
 * congruent to 1 mod p. The result carries k-1 certified digits.
 */
inline PadicMatrix rhs_sunny(const FormMatrix& q, long p, int k) {
    auto qp = form_to_padic(q, p, k);
    PadicMatrix qpow(q.n, p, k), dq(q.n, p, k);
    for (int i = 0; i < q.n; ++i)
        for (int j = 0; j < q.n; ++j) {
            qpow.at(i, j) = qp.at(i, j).pow(static_cast<unsigned long>(p));
            dq.at(i, j) = qp.at(i, j).fermat_quotient();
        }
    auto inner = detail::invert_padic(qpow) * dq;
    auto w = detail::padic_identity(q.n, p, k) + inner.scaled(PadicScalar::from_long(p, k, p));
    auto root = detail::matrix_binomial_padic(w - detail::padic_identity(q.n, p, k), mpq_class(-1, 2));
    PadicMatrix out(q.n, p, k - 1);
    for (int i = 0; i < q.n; ++i)
        for (int j = 0; j < q.n; ++j) out.at(i, j) = -root.at(i, j).fermat_quotient();
    return out;
}

/**
 * The engine side: the Chern lift built over Series<PadicScalar>, commuted
 * with the trivial lift and divided by p with a verified valuation check.
 *
 * Substitutions only ever use the trivial images (zero constant terms), so
 * T-truncation is exact; the square-root partial sum is p-adically certified
 * by the entrywise val >= 1 bound on u. The constant term (the value at
 * x = 1) is independent of the truncation order.
 */
struct OnePrimeResult {
    PadicMatrix value_at_1;                      // Phi_{p pbar}(1), precision k-1
    SeriesMatrix<PadicScalar> full;              // the full series on generators
};

inline SeriesMatrix<PadicScalar> padic_chern_lift_phi0(const FormMatrix& q, long p, int order, int k) {
    const int n = q.n, arity = n * n;
    PadicScalar proto(p, k);
    auto x = SeriesMatrix<PadicScalar>::one_plus_generators(n, order, proto);
    auto xp = x.entrywise_power(static_cast<unsigned long>(p));
    auto q_m = [&] {
        auto qc = form_to_padic(q, p, k);
        std::vector<std::vector<PadicScalar>> rows(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) rows[static_cast<size_t>(i)].push_back(qc.at(i, j));
        return SeriesMatrix<PadicScalar>::from_constants(arity, order, rows);
    }();
    // phi_p is the identity on Z_p, so phi_p(q) = q here
    auto g = xp.transpose() * q_m * xp;
    auto f = (x.transpose() * q_m * x).entrywise_power(static_cast<unsigned long>(p));
    auto u = g.inverse() * f - SeriesMatrix<PadicScalar>::identity(n, arity, order, proto);
    auto root = binomial_power_p_convergent(u, mpq_class(1, 2), k, [](const PadicScalar& c) {
        return c.is_zero() || c.valuation() >= 1;
    });
    return xp * root - SeriesMatrix<PadicScalar>::identity(n, arity, order, proto);
}

inline OnePrimeResult lhs_engine(const FormMatrix& q, long p, int order, int k) {
    const int n = q.n, arity = n * n;
    PadicScalar proto(p, k);
    auto phi0 = padic_chern_lift_phi0(q, p, order, k);
    // trivial images: (delta_ij + T_ij)^p - delta_ij
    std::vector<Series<PadicScalar>> trivial;
    trivial.reserve(static_cast<size_t>(arity));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            auto t = Series<PadicScalar>::variable(arity, order, i * n + j, proto);
            if (i == j) {
                auto one = Series<PadicScalar>::constant(arity, order, proto.make_from_rational(1));
                trivial.push_back((t + one).pow(static_cast<unsigned long>(p)) - one);
            } else {
                trivial.push_back(t.pow(static_cast<unsigned long>(p)));
            }
        }
    SeriesMatrix<PadicScalar> commutator(n, arity, order, proto);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            // phi_p(phi_pbar(T_ij)) = (delta_ij + Phi0_ij)^p - delta_ij: a pure product
            auto phi_entry = phi0.at(i, j);
            if (i == j)
                phi_entry += Series<PadicScalar>::constant(arity, order, proto.make_from_rational(1));
            auto first = phi_entry.pow(static_cast<unsigned long>(p));
            if (i == j)
                first -= Series<PadicScalar>::constant(arity, order, proto.make_from_rational(1));
            auto second = phi0.at(i, j).substitute(trivial);
            commutator.at(i, j) = first - second;
        }
    // divide by p with the valuation check
    SeriesMatrix<PadicScalar> divided(n, arity, order, PadicScalar(p, k - 1));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<Series<PadicScalar>::Term> terms;
            for (const auto& t : commutator.at(i, j).terms()) {
                if (!t.coeff.is_zero() && t.coeff.valuation() < 1)
                    throw divisibility_error(p, commutator.at(i, j).monomial_str(t.idx, [&](int v) {
                        return "T_" + std::to_string(v / n + 1) + std::to_string(v % n + 1);
                    }));
                terms.push_back({t.idx, t.coeff.div_by_p(1)});
            }
            divided.at(i, j) =
                Series<PadicScalar>::from_terms(arity, order, PadicScalar(p, k - 1), std::move(terms));
        }
    PadicMatrix at1(n, p, k - 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) at1.at(i, j) = divided.at(i, j).constant_term().at_precision(k - 1);
    return OnePrimeResult{std::move(at1), std::move(divided)};
}

/// The n = 1 identity behind target thm-5.1: Phi_{p pbar} = Phi_{p pbar}(1) * x^{p^2}.
inline CheckResult n1_identity_check(const mpq_class& qval, long p, int order, int k) {
    std::vector<CycScalar> e{CycScalar(qval)};
    FormMatrix q(1, +1, std::move(e), RingConfig::rationals());
    auto res = lhs_engine(q, p, order, k);
    PadicScalar c = res.value_at_1.at(0, 0);
    // rhs series: c * (1+T)^{p^2}
    PadicScalar proto(p, k - 1);
    auto one = Series<PadicScalar>::constant(1, order, proto.make_from_rational(1));
    auto t = Series<PadicScalar>::variable(1, order, 0, proto);
    auto rhs = (one + t).pow(static_cast<unsigned long>(p * p)).scaled(c);
    auto diff = res.full.at(0, 0) - rhs;
    for (const auto& term : diff.terms()) {
        if (!term.coeff.is_zero())
            return {false, "coefficient of T^" + std::to_string(term.idx.deg) + " differs: " + term.coeff.str()};
    }
    return {true, ""};
}

/// Congruence of two p-adic matrices at the given number of digits.
inline bool padic_matrices_congruent(const PadicMatrix& a, const PadicMatrix& b, int digits) {
    if (a.n != b.n) return false;
    for (size_t i = 0; i < a.entries.size(); ++i) {
        auto d = a.entries[i] - b.entries[i];
        if (!d.at_precision(std::min(digits, d.precision())).is_zero()) return false;
        if (d.precision() < digits) return false;
    }
    return true;
}

}  // namespace frobcurv
