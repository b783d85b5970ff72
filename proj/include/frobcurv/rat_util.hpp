#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace frobcurv {

inline mpz_class mpz_pow(const mpz_class& base, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline mpq_class mpq_pow(const mpq_class& base, unsigned long e) {
    mpq_class r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num().get_mpz_t(), e);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den().get_mpz_t(), e);
    r.canonicalize();
    return r;
}

/// Exponent of p in a nonzero integer.
inline long mpz_val_p(const mpz_class& a, const mpz_class& p) {
    if (a == 0) throw std::invalid_argument("mpz_val_p: zero has infinite valuation");
    mpz_class rem;
    return static_cast<long>(mpz_remove(rem.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t()));
}

/// p-adic valuation of a rational; nullopt encodes +infinity (the zero value).
inline std::optional<long> mpq_val_p(const mpq_class& a, const mpz_class& p) {
    if (a == 0) return std::nullopt;
    return mpz_val_p(a.get_num(), p) - mpz_val_p(a.get_den(), p);
}

inline std::string mpq_str(const mpq_class& a) {
    if (a.get_den() == 1) return a.get_num().get_str();
    return a.get_num().get_str() + "/" + a.get_den().get_str();
}

inline mpq_class parse_mpq(const std::string& s) {
    mpq_class r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("parse_mpq: bad rational '" + s + "'");
    r.canonicalize();
    return r;
}

/// Generalized binomial coefficients C(s,0..imax) by the falling-factorial recurrence.
inline std::vector<mpq_class> binomial_row(const mpq_class& s, int imax) {
    std::vector<mpq_class> row(static_cast<size_t>(imax) + 1);
    row[0] = 1;
    for (int i = 1; i <= imax; ++i) row[i] = row[i - 1] * (s - (i - 1)) / i;
    return row;
}

inline bool is_odd_prime(long p) {
    if (p < 3 || p % 2 == 0) return false;
    for (long d = 3; d * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

inline std::vector<long> small_prime_factors(long m) {
    std::vector<long> ps;
    if (m < 0) m = -m;
    for (long d = 2; d * d <= m; ++d) {
        if (m % d == 0) {
            ps.push_back(d);
            while (m % d == 0) m /= d;
        }
    }
    if (m > 1) ps.push_back(m);
    return ps;
}

}  // namespace frobcurv
