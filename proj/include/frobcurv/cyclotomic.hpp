#pragma once

#include <algorithm>
#include <cctype>
#include <memory>
#include <numeric>
#include <sstream>

#include "frobcurv/rat_util.hpp"

namespace frobcurv {

/**
 * Exact arithmetic in A = Z[1/M, zeta_N], represented on the power basis
 * 1, z, ..., z^{phi(N)-1} modulo the N-th cyclotomic polynomial.
 *
 * M is an even integer fixing which denominators are invertible; N = 1
 * degenerates the ring to plain rationals, which is the fast path used by
 * all full-ring computations.
 */
struct RingConfig {
    long M = 2;
    long N = 1;
    int phiN = 1;
    std::vector<mpz_class> cyclo;            // monic, degree phiN, ascending
    std::vector<std::vector<mpq_class>> xpow_reduced;  // x^j mod cyclo, 0 <= j <= 2*phiN-2
    std::vector<std::vector<mpq_class>> zpow;          // z^j mod cyclo, 0 <= j < N
    std::vector<long> m_primes;              // prime support of 2M

    static std::shared_ptr<const RingConfig> make(long N, long M = 2);
    static const std::shared_ptr<const RingConfig>& rationals();  // N=1, M=2
};

namespace detail {

// x^n - 1 = prod_{d | n} Phi_d; Phi_n recovered by exact division.
inline std::vector<mpz_class> cyclotomic_poly(long n) {
    // dense integer polynomials, ascending coefficients
    auto poly_div_exact = [](std::vector<mpz_class> num, const std::vector<mpz_class>& den) {
        std::vector<mpz_class> q(num.size() - den.size() + 1);
        for (long i = static_cast<long>(q.size()) - 1; i >= 0; --i) {
            mpz_class c = num[i + den.size() - 1] / den.back();
            q[i] = c;
            if (c != 0)
                for (size_t j = 0; j < den.size(); ++j) num[i + j] -= c * den[j];
        }
        for (const auto& r : num)
            if (r != 0) throw std::logic_error("cyclotomic_poly: inexact division");
        return q;
    };
    if (n == 1) return {-1, 1};  // Phi_1 = x - 1
    std::vector<mpz_class> xn1(static_cast<size_t>(n) + 1);
    xn1[0] = -1;
    xn1.back() = 1;
    std::vector<mpz_class> denom{1};
    for (long d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        auto phid = cyclotomic_poly(d);
        std::vector<mpz_class> prod(denom.size() + phid.size() - 1);
        for (size_t i = 0; i < denom.size(); ++i)
            for (size_t j = 0; j < phid.size(); ++j) prod[i + j] += denom[i] * phid[j];
        denom = std::move(prod);
    }
    return poly_div_exact(std::move(xn1), denom);
}

}  // namespace detail

inline std::shared_ptr<const RingConfig> RingConfig::make(long N, long M) {
    if (N < 1) throw std::invalid_argument("RingConfig: N must be >= 1");
    if (M <= 0 || M % 2 != 0) throw std::invalid_argument("RingConfig: M must be even and positive");
    auto cfg = std::make_shared<RingConfig>();
    cfg->M = M;
    cfg->N = N;
    cfg->cyclo = detail::cyclotomic_poly(N);
    cfg->phiN = static_cast<int>(cfg->cyclo.size()) - 1;
    const int d = cfg->phiN;
    // x^j mod cyclo for j up to max(2d-2, N-1): products and z-powers both reduce
    const int jmax = std::max(2 * d - 2, static_cast<int>(N) - 1);
    cfg->xpow_reduced.resize(static_cast<size_t>(jmax + 1));
    for (int j = 0; j < d && j <= jmax; ++j) {
        std::vector<mpq_class> v(static_cast<size_t>(d));
        v[j] = 1;
        cfg->xpow_reduced[j] = std::move(v);
    }
    for (int j = d; j <= jmax; ++j) {
        // x^j = x * x^{j-1}, then reduce the x^d term via cyclo
        const auto& prev = cfg->xpow_reduced[j - 1];
        std::vector<mpq_class> v(static_cast<size_t>(d));
        for (int i = 0; i + 1 < d; ++i) v[i + 1] = prev[i];
        mpq_class top = prev[d - 1];
        if (top != 0)
            for (int i = 0; i < d; ++i) v[i] -= top * cfg->cyclo[i];
        cfg->xpow_reduced[j] = std::move(v);
    }
    cfg->zpow.resize(static_cast<size_t>(N));
    for (long j = 0; j < N; ++j) {
        std::vector<mpq_class> v(static_cast<size_t>(d));
        if (j < d)
            v[j] = 1;
        else
            v = cfg->xpow_reduced[j];  // jmax covers N-1
        cfg->zpow[j] = std::move(v);
    }
    cfg->m_primes = small_prime_factors(2 * M);
    return cfg;
}

inline const std::shared_ptr<const RingConfig>& RingConfig::rationals() {
    static const std::shared_ptr<const RingConfig> q = RingConfig::make(1, 2);
    return q;
}

class CycScalar {
public:
    CycScalar() : cfg_(RingConfig::rationals()), coords_(1) {}
    explicit CycScalar(std::shared_ptr<const RingConfig> cfg)
        : cfg_(std::move(cfg)), coords_(static_cast<size_t>(cfg_->phiN)) {}
    CycScalar(std::shared_ptr<const RingConfig> cfg, std::vector<mpq_class> coords)
        : cfg_(std::move(cfg)), coords_(std::move(coords)) {
        if (coords_.size() != static_cast<size_t>(cfg_->phiN))
            throw std::invalid_argument("CycScalar: coordinate length != phi(N)");
    }
    CycScalar(const mpq_class& r) : cfg_(RingConfig::rationals()), coords_{r} {}  // NOLINT
    CycScalar(long n) : CycScalar(mpq_class(n)) {}                                // NOLINT

    static CycScalar zero(const std::shared_ptr<const RingConfig>& cfg) { return CycScalar(cfg); }
    static CycScalar from_rational(const std::shared_ptr<const RingConfig>& cfg, const mpq_class& r) {
        CycScalar a(cfg);
        a.coords_[0] = r;
        return a;
    }
    /// z^j in this ring.
    static CycScalar root_power(const std::shared_ptr<const RingConfig>& cfg, long j) {
        j %= cfg->N;
        if (j < 0) j += cfg->N;
        return CycScalar(cfg, cfg->zpow[static_cast<size_t>(j)]);
    }

    const std::shared_ptr<const RingConfig>& config() const { return cfg_; }
    const std::vector<mpq_class>& coords() const { return coords_; }

    bool is_zero() const {
        return std::all_of(coords_.begin(), coords_.end(), [](const mpq_class& c) { return c == 0; });
    }
    bool is_rational() const {
        for (size_t i = 1; i < coords_.size(); ++i)
            if (coords_[i] != 0) return false;
        return true;
    }
    const mpq_class& rational_value() const {
        if (!is_rational()) throw std::invalid_argument("CycScalar: not rational");
        return coords_[0];
    }

    /// Same-context factory (context = ring config); used by generic series code.
    CycScalar make_from_rational(const mpq_class& r) const { return from_rational(cfg_, r); }
    CycScalar make_zero() const { return zero(cfg_); }

    friend CycScalar operator+(const CycScalar& a, const CycScalar& b) {
        auto [x, y] = align(a, b);
        for (size_t i = 0; i < x.coords_.size(); ++i) x.coords_[i] += y.coords_[i];
        return x;
    }
    friend CycScalar operator-(const CycScalar& a, const CycScalar& b) {
        auto [x, y] = align(a, b);
        for (size_t i = 0; i < x.coords_.size(); ++i) x.coords_[i] -= y.coords_[i];
        return x;
    }
    CycScalar operator-() const {
        CycScalar r = *this;
        for (auto& c : r.coords_) c = -c;
        return r;
    }
    friend CycScalar operator*(const CycScalar& a, const CycScalar& b) {
        auto [x, y] = align(a, b);
        const auto& cfg = *x.cfg_;
        const int d = cfg.phiN;
        if (d == 1) {
            x.coords_[0] *= y.coords_[0];
            return x;
        }
        std::vector<mpq_class> prod(static_cast<size_t>(2 * d - 1));
        for (int i = 0; i < d; ++i) {
            if (x.coords_[i] == 0) continue;
            for (int j = 0; j < d; ++j) {
                if (y.coords_[j] == 0) continue;
                prod[i + j] += x.coords_[i] * y.coords_[j];
            }
        }
        std::vector<mpq_class> out(static_cast<size_t>(d));
        for (int t = 0; t < 2 * d - 1; ++t) {
            if (prod[t] == 0) continue;
            const auto& row = cfg.xpow_reduced[t];
            for (int i = 0; i < d; ++i)
                if (row[i] != 0) out[i] += prod[t] * row[i];
        }
        return CycScalar(x.cfg_, std::move(out));
    }
    CycScalar& operator+=(const CycScalar& b) { return *this = *this + b; }
    CycScalar& operator-=(const CycScalar& b) { return *this = *this - b; }
    CycScalar& operator*=(const CycScalar& b) { return *this = *this * b; }

    friend bool operator==(const CycScalar& a, const CycScalar& b) {
        auto [x, y] = align(a, b);
        return x.coords_ == y.coords_;
    }
    friend bool operator!=(const CycScalar& a, const CycScalar& b) { return !(a == b); }

    CycScalar pow(unsigned long e) const {
        CycScalar r = make_from_rational(1), base = *this;
        while (e > 0) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    /// Multiplicative inverse in Q(zeta_N), by extended Euclid against the
    /// cyclotomic polynomial.
    CycScalar inverse() const {
        if (is_zero()) throw std::invalid_argument("CycScalar: inverse of zero");
        const int d = cfg_->phiN;
        if (d == 1) return make_from_rational(1 / coords_[0]);
        using Poly = std::vector<mpq_class>;
        auto deg = [](const Poly& f) {
            for (long i = static_cast<long>(f.size()) - 1; i >= 0; --i)
                if (f[static_cast<size_t>(i)] != 0) return i;
            return -1L;
        };
        Poly r0(cfg_->cyclo.size());
        for (size_t i = 0; i < r0.size(); ++i) r0[i] = mpq_class(cfg_->cyclo[i]);
        Poly r1(coords_.begin(), coords_.end());
        Poly s0{0}, s1{1};  // s tracks the coefficient of *this
        while (true) {
            long d1 = deg(r1);
            if (d1 < 0) throw std::invalid_argument("CycScalar: non-invertible element");
            if (d1 == 0) break;
            long d0 = deg(r0);
            // r0 -= q * r1 ; s0 -= q * s1 ; then swap
            while (d0 >= d1) {
                mpq_class c = r0[static_cast<size_t>(d0)] / r1[static_cast<size_t>(d1)];
                long shift = d0 - d1;
                for (long i = 0; i <= d1; ++i) r0[static_cast<size_t>(i + shift)] -= c * r1[static_cast<size_t>(i)];
                if (s0.size() < s1.size() + static_cast<size_t>(shift)) s0.resize(s1.size() + static_cast<size_t>(shift));
                for (size_t i = 0; i < s1.size(); ++i) s0[i + static_cast<size_t>(shift)] -= c * s1[i];
                d0 = deg(r0);
            }
            std::swap(r0, r1);
            std::swap(s0, s1);
        }
        mpq_class lead = r1[0];  // gcd is a nonzero constant: cyclo is irreducible over Q
        std::vector<mpq_class> out(static_cast<size_t>(d));
        for (size_t i = 0; i < s1.size() && i < out.size(); ++i) out[i] = s1[i] / lead;
        return CycScalar(cfg_, std::move(out));
    }

    /// Minimum p-adic valuation over power-basis coordinates; nullopt = +infinity.
    std::optional<long> val_p(long p) const {
        std::optional<long> best;
        mpz_class pp(p);
        for (const auto& c : coords_) {
            auto v = mpq_val_p(c, pp);
            if (v && (!best || *v < *best)) best = v;
        }
        return best;
    }

    CycScalar div_by_mpz(const mpz_class& d) const {
        CycScalar r = *this;
        for (auto& c : r.coords_) {
            c /= mpq_class(d);
        }
        return r;
    }

    /// True when every coordinate denominator is supported on primes dividing 2M.
    bool in_base_ring(std::string* witness = nullptr) const {
        for (const auto& c : coords_) {
            mpz_class den = c.get_den();
            for (long q : cfg_->m_primes) {
                mpz_class rem, qq(q);
                auto cnt = mpz_remove(rem.get_mpz_t(), den.get_mpz_t(), qq.get_mpz_t());
                (void)cnt;
                den = rem;
            }
            if (den != 1) {
                if (witness) {
                    long bad = 0;
                    for (long d2 = 3; d2 * d2 <= 1000000007L; d2 += 2)
                        if (mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(d2))) {
                            bad = d2;
                            break;
                        }
                    *witness = bad ? "denominator divisible by " + std::to_string(bad)
                                   : "denominator factor " + den.get_str();
                }
                return false;
            }
        }
        return true;
    }

    bool is_root_of_unity_or_zero() const {
        if (is_zero()) return true;
        long ord = std::lcm(2L, cfg_->N);
        return pow(static_cast<unsigned long>(ord)) == make_from_rational(1);
    }

    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (size_t i = 0; i < coords_.size(); ++i) {
            if (coords_[i] == 0) continue;
            mpq_class c = coords_[i];
            if (!first) {
                os << (c < 0 ? " - " : " + ");
                if (c < 0) c = -c;
            }
            bool unit_coeff = (c == 1 || c == -1) && i > 0;
            if (!unit_coeff)
                os << mpq_str(c);
            else if (c == -1)
                os << "-";
            if (i > 0) {
                if (!unit_coeff) os << "*";
                os << "z";
                if (i > 1) os << "^" << i;
            }
            first = false;
        }
        if (first) os << "0";
        return os.str();
    }

    static CycScalar parse(const std::shared_ptr<const RingConfig>& cfg, const std::string& text);

private:
    // Promote a rational (N=1) operand into the other operand's ring.
    static std::pair<CycScalar, CycScalar> align(const CycScalar& a, const CycScalar& b) {
        if (a.cfg_ == b.cfg_ || a.cfg_->N == b.cfg_->N) return {a, b};
        if (a.cfg_->N == 1) return {from_rational(b.cfg_, a.coords_[0]), b};
        if (b.cfg_->N == 1) return {a, from_rational(a.cfg_, b.coords_[0])};
        throw std::invalid_argument("CycScalar: ring config mismatch");
    }

    std::shared_ptr<const RingConfig> cfg_;
    std::vector<mpq_class> coords_;
};

/// sigma_p: the ring endomorphism of A with z -> z^p (identity on rationals).
inline CycScalar cyc_frobenius(const CycScalar& a, long p) {
    const auto& cfg = a.config();
    if (p <= 1 || cfg->M % p == 0 || cfg->N % p == 0)
        throw std::invalid_argument("cyc_frobenius: p must be a prime not dividing M*N");
    if (cfg->N == 1) return a;
    CycScalar out = a.make_zero();
    for (size_t i = 0; i < a.coords().size(); ++i) {
        if (a.coords()[i] == 0) continue;
        long j = (static_cast<long>(i) * p) % cfg->N;
        CycScalar term = CycScalar::root_power(cfg, j);
        out += term.make_from_rational(a.coords()[i]) * term;
    }
    return out;
}

/// delta_p(a) = (sigma_p(a) - a^p)/p, so that phi_p(a) = a^p + p*delta_p(a) exactly.
inline CycScalar fermat_quotient(const CycScalar& a, long p) {
    CycScalar num = cyc_frobenius(a, p) - a.pow(static_cast<unsigned long>(p));
    return num.div_by_mpz(mpz_class(p));
}

inline CycScalar CycScalar::parse(const std::shared_ptr<const RingConfig>& cfg, const std::string& text) {
    CycScalar out = CycScalar::zero(cfg);
    size_t i = 0;
    auto skip_ws = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
    skip_ws();
    bool any = false;
    int sign = 1;
    while (i < text.size()) {
        skip_ws();
        if (i >= text.size()) break;
        if (text[i] == '+') { sign = 1; ++i; skip_ws(); }
        else if (text[i] == '-') { sign = -1; ++i; skip_ws(); }
        else if (any) throw std::invalid_argument("CycScalar::parse: expected +/- in '" + text + "'");
        mpq_class coeff = 1;
        bool saw_num = false;
        if (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])))) {
            size_t j = i;
            while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '/')) ++j;
            coeff = parse_mpq(text.substr(i, j - i));
            i = j;
            saw_num = true;
            skip_ws();
            if (i < text.size() && text[i] == '*') { ++i; skip_ws(); }
        }
        long zexp = 0;
        if (i < text.size() && text[i] == 'z') {
            ++i;
            zexp = 1;
            if (i < text.size() && text[i] == '^') {
                ++i;
                size_t j = i;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
                if (j == i) throw std::invalid_argument("CycScalar::parse: missing exponent");
                zexp = std::stol(text.substr(i, j - i));
                i = j;
            }
        } else if (!saw_num) {
            throw std::invalid_argument("CycScalar::parse: bad term in '" + text + "'");
        }
        if (sign < 0) coeff = -coeff;
        CycScalar term = (zexp == 0) ? CycScalar::from_rational(cfg, coeff)
                                     : CycScalar::from_rational(cfg, coeff) * CycScalar::root_power(cfg, zexp);
        out += term;
        any = true;
        sign = 0;  // force explicit +/- between terms
        skip_ws();
        if (i < text.size() && text[i] != '+' && text[i] != '-')
            throw std::invalid_argument("CycScalar::parse: trailing junk in '" + text + "'");
    }
    if (!any) throw std::invalid_argument("CycScalar::parse: empty input");
    return out;
}

}  // namespace frobcurv
