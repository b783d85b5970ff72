#pragma once

#include "frobcurv/form.hpp"

namespace frobcurv {

struct invalid_lift : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/**
 * A Frobenius lift phi_p on A[[T]] presented by its generator images:
 * Phi0 = Phi_p(1+T) - 1, together with the prime and whether sigma_p acts on
 * coefficients. `exact` records whether the coefficients are exact elements
 * of A (split / root-of-unity forms) or p-adic partial sums (exploratory
 * forms); `padic_digits` is the certified digit count in the latter case.
 */
struct FrobLift {
    long p;
    int n;
    int order;
    SeriesMatrix<CycScalar> phi0;
    bool galois_on_coeffs = true;
    bool exact = true;
    int padic_digits = 0;

    const Series<CycScalar>& image(int i, int j) const { return phi0.at(i, j); }
};

struct CheckResult {
    bool ok = true;
    std::string witness;
    explicit operator bool() const { return ok; }
};

/// phi_{0p}: x -> x^{(p)}.
inline FrobLift trivial_lift(long p, int n, int order,
                             std::shared_ptr<const RingConfig> cfg = RingConfig::rationals()) {
    if (!is_odd_prime(p)) throw std::invalid_argument("trivial_lift: p must be an odd prime");
    auto proto = CycScalar::zero(cfg);
    auto x = SeriesMatrix<CycScalar>::one_plus_generators(n, order, proto);
    auto phi0 = x.entrywise_power(static_cast<unsigned long>(p)) -
                SeriesMatrix<CycScalar>::identity(n, n * n, order, proto);
    return FrobLift{p, n, order, std::move(phi0)};
}

/// sigma_p applied to the constant matrix q.
inline SeriesMatrix<CycScalar> frobenius_of_form(const FormMatrix& q, long p, int arity, int order) {
    std::vector<std::vector<CycScalar>> vals(static_cast<size_t>(q.n),
                                             std::vector<CycScalar>(static_cast<size_t>(q.n), CycScalar::zero(q.cfg)));
    for (int i = 0; i < q.n; ++i)
        for (int j = 0; j < q.n; ++j) vals[static_cast<size_t>(i)][static_cast<size_t>(j)] = cyc_frobenius(q.at(i, j), p);
    return SeriesMatrix<CycScalar>::from_constants(arity, order, vals);
}

inline SeriesMatrix<CycScalar> form_as_matrix(const FormMatrix& q, int arity, int order) {
    return SeriesMatrix<CycScalar>::from_constants(arity, order, q.rows());
}

/**
 * The Chern connection's Frobenius lift attached to q:
 *
 *   Phi_p(x) = x^{(p)} { (x^{(p)t} phi_p(q) x^{(p)})^{-1} (x^t q x)^{(p)} }^{1/2},
 *   x = 1 + T.
 *
 * When q has root-of-unity-or-zero entries the bracket is 1 + (T)-terms and
 * the square root is an exact finite sum. Otherwise the bracket is 1 mod p
 * entrywise and the square root is taken as the p-adically convergent
 * partial sum with `padic_extra_digits` certified digits; the returned lift
 * is flagged non-exact so downstream checks can refuse to over-claim.
 */
inline FrobLift chern_lift(const FormMatrix& q, long p, int order, int padic_extra_digits = 8) {
    if (!is_odd_prime(p)) throw std::invalid_argument("chern_lift: p must be an odd prime");
    if (q.cfg->M % p == 0 || q.cfg->N % p == 0)
        throw std::invalid_argument("chern_lift: p must not divide M*N");
    const int n = q.n, arity = n * n;
    auto proto = CycScalar::zero(q.cfg);
    auto x = SeriesMatrix<CycScalar>::one_plus_generators(n, order, proto);
    auto xp = x.entrywise_power(static_cast<unsigned long>(p));
    auto phi_q = frobenius_of_form(q, p, arity, order);
    auto q_m = form_as_matrix(q, arity, order);
    auto g = xp.transpose() * phi_q * xp;
    auto f = (x.transpose() * q_m * x).entrywise_power(static_cast<unsigned long>(p));
    auto u = g.inverse() * f - SeriesMatrix<CycScalar>::identity(n, arity, order, proto);

    bool exact = true;
    for (int i = 0; i < n && exact; ++i)
        for (int j = 0; j < n && exact; ++j) exact = u.at(i, j).constant_term().is_zero();

    SeriesMatrix<CycScalar> root = [&] {
        if (exact) return binomial_power(u, mpq_class(1, 2));
        return binomial_power_p_convergent(u, mpq_class(1, 2), padic_extra_digits, [&](const CycScalar& c) {
            auto v = c.val_p(p);
            return !v || *v >= 1;
        });
    }();
    auto phi = xp * root;
    auto phi0 = phi - SeriesMatrix<CycScalar>::identity(n, arity, order, proto);
    FrobLift lift{p, n, order, std::move(phi0)};
    lift.exact = exact;
    lift.padic_digits = exact ? 0 : padic_extra_digits + 1;
    return lift;
}

namespace detail {
inline CheckResult matrices_equal(const SeriesMatrix<CycScalar>& a, const SeriesMatrix<CycScalar>& b,
                                  const char* what) {
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) {
            auto diff = a.at(i, j) - b.at(i, j);
            if (!diff.is_zero()) {
                const auto& t = diff.terms().front();
                std::string mono = diff.monomial_str(t.idx, [&](int v) {
                    return "T_" + std::to_string(v / a.dim() + 1) + std::to_string(v % a.dim() + 1);
                });
                return {false, std::string(what) + " fails at entry (" + std::to_string(i + 1) + "," +
                                   std::to_string(j + 1) + "), monomial " + mono + ", difference " + t.coeff.str()};
            }
        }
    return {true, ""};
}
}  // namespace detail

/// Left diagram of the defining property: Phi^t phi_p(q) Phi = (x^t q x)^{(p)}.
inline CheckResult verify_hq_diagram(const FormMatrix& q, const FrobLift& lift) {
    const int n = lift.n, arity = n * n, order = lift.order;
    auto proto = CycScalar::zero(q.cfg);
    auto idm = SeriesMatrix<CycScalar>::identity(n, arity, order, proto);
    auto phi = lift.phi0 + idm;
    auto x = SeriesMatrix<CycScalar>::one_plus_generators(n, order, proto);
    auto lhs = phi.transpose() * frobenius_of_form(q, lift.p, arity, order) * phi;
    auto rhs = (x.transpose() * form_as_matrix(q, arity, order) * x).entrywise_power(static_cast<unsigned long>(lift.p));
    return detail::matrices_equal(lhs, rhs, "H_q diagram");
}

/**
 * Right diagram, read at ring level as the (anti)symmetry of the pairing
 * S := x^{(p)t} phi_p(q) Phi_p(x): S^t = sign * S.
 */
inline CheckResult verify_bq_diagram(const FormMatrix& q, const FrobLift& lift) {
    const int n = lift.n, arity = n * n, order = lift.order;
    auto proto = CycScalar::zero(q.cfg);
    auto idm = SeriesMatrix<CycScalar>::identity(n, arity, order, proto);
    auto phi = lift.phi0 + idm;
    auto x = SeriesMatrix<CycScalar>::one_plus_generators(n, order, proto);
    auto xp = x.entrywise_power(static_cast<unsigned long>(lift.p));
    auto s = xp.transpose() * frobenius_of_form(q, lift.p, arity, order) * phi;
    auto expected = q.sign == 1 ? s : -s;
    return detail::matrices_equal(s.transpose(), expected, "B_q diagram");
}

/**
 * Global along 1 (Definition level): the generator images fix the ideal of
 * the identity (zero constant terms) and every coefficient lies in
 * A = Z[1/M, zeta_N], i.e. denominators are supported on primes dividing 2M.
 */
inline CheckResult globality_check(const FrobLift& lift) {
    for (int i = 0; i < lift.n; ++i)
        for (int j = 0; j < lift.n; ++j) {
            const auto& s = lift.phi0.at(i, j);
            auto c0 = s.constant_term();
            if (!c0.is_zero())
                return {false, "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                   ") has nonzero constant term " + c0.str() + " (does not fix 1)"};
            for (const auto& t : s.terms()) {
                std::string w;
                if (!t.coeff.in_base_ring(&w))
                    return {false, "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "), monomial " +
                                       s.monomial_str(t.idx,
                                                      [&](int v) {
                                                          return "T_" + std::to_string(v / lift.n + 1) +
                                                                 std::to_string(v % lift.n + 1);
                                                      }) +
                                       ": coefficient " + t.coeff.str() + " outside A (" + w + ")"};
            }
        }
    return {true, ""};
}

/// Remark-level sanity: Phi0 = diag(p T_11, ..., p T_nn) mod (T)^2.
inline CheckResult check_linear_part_diagonal(const FrobLift& lift) {
    const int n = lift.n;
    auto proto = lift.phi0.proto();
    auto expect = SeriesMatrix<CycScalar>(n, n * n, 1, proto);
    for (int i = 0; i < n; ++i)
        expect.at(i, i) =
            Series<CycScalar>::variable(n * n, 1, i * n + i, proto).scaled(mpq_class(lift.p));
    return detail::matrices_equal(lift.phi0.truncated(1), expect, "mod (T)^2 diagonal form");
}

}  // namespace frobcurv
