#pragma once

#include <limits>
#include <sstream>

#include "frobcurv/rat_util.hpp"

namespace frobcurv {

struct precision_exhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/**
 * An element of Q_p known modulo p^k (absolute precision k), stored as
 * unit * p^val with the unit reduced mod p^{k-val}.
 *
 * Arithmetic carries the minimum justified precision: results are never
 * claimed to more digits than the inputs support, and dividing by p costs
 * one digit. A value indistinguishable from 0 at its precision is stored
 * with the zero flag; it still remembers how many digits of zeroness are
 * certified.
 *
 * p = 2 is excluded throughout (M even makes 2 invertible upstream).
 */
class PadicScalar {
public:
    PadicScalar() : p_(0), k_(std::numeric_limits<int>::max()), zero_(true), val_(0) {}
    PadicScalar(long p, int k) : p_(p), k_(k), zero_(true), val_(0) { check_p(p); }

    static PadicScalar from_mpq(long p, int k, const mpq_class& a) {
        check_p(p);
        PadicScalar r(p, k);
        if (a == 0) return r;
        mpz_class pp(p), num = a.get_num(), den = a.get_den();
        long v = mpz_val_p(num, pp) - mpz_val_p(den, pp);
        mpz_class rem;
        mpz_remove(rem.get_mpz_t(), num.get_mpz_t(), pp.get_mpz_t());
        num = rem;
        mpz_remove(rem.get_mpz_t(), den.get_mpz_t(), pp.get_mpz_t());
        den = rem;
        if (v >= k) return r;  // contributes nothing at this precision
        mpz_class mod = mpz_pow(pp, static_cast<unsigned long>(k - v));
        mpz_class deninv;
        if (mpz_invert(deninv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()) == 0)
            throw std::invalid_argument("PadicScalar: denominator not invertible mod p");
        r.zero_ = false;
        r.val_ = v;
        r.unit_ = mod_reduce(num * deninv, mod);
        return r;
    }
    static PadicScalar from_long(long p, int k, long a) { return from_mpq(p, k, mpq_class(a)); }

    long prime() const { return p_; }
    int precision() const { return k_; }
    bool is_zero() const { return zero_; }
    long valuation() const {
        if (zero_) throw std::invalid_argument("PadicScalar: valuation of (certified) zero");
        return val_;
    }
    const mpz_class& unit() const { return unit_; }

    /// Integer representative of the value mod p^m (requires val >= 0, m <= k).
    mpz_class residue(int m) const {
        if (m > k_) throw precision_exhausted("PadicScalar: asked for more digits than certified");
        mpz_class mod = mpz_pow(mpz_class(p_), static_cast<unsigned long>(m));
        if (zero_) return 0;
        if (val_ < 0) throw std::invalid_argument("PadicScalar: negative valuation has no residue");
        if (val_ >= m) return 0;
        return mod_reduce(unit_ * mpz_pow(mpz_class(p_), static_cast<unsigned long>(val_)), mod);
    }

    friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
        auto [p, k] = merge_ctx(a, b);
        if (a.zero_ && b.zero_) return PadicScalar(p, k);
        if (a.zero_) return b.at_precision(k);
        if (b.zero_) return a.at_precision(k);
        long v = std::min(a.val_, b.val_);
        mpz_class pp(p);
        if (v >= k) return PadicScalar(p, k);
        mpz_class mod = mpz_pow(pp, static_cast<unsigned long>(k - v));
        mpz_class s = a.unit_ * mpz_pow(pp, static_cast<unsigned long>(a.val_ - v)) +
                      b.unit_ * mpz_pow(pp, static_cast<unsigned long>(b.val_ - v));
        return make(p, k, v, mod_reduce(s, mod));
    }
    friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) { return a + (-b); }
    PadicScalar operator-() const {
        PadicScalar r = *this;
        if (!r.zero_) {
            mpz_class mod = mpz_pow(mpz_class(p_), static_cast<unsigned long>(k_ - val_));
            r.unit_ = mod_reduce(-r.unit_, mod);
        }
        return r;
    }
    friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
        long p = merge_ctx(a, b).first;
        if (a.zero_ || b.zero_) {
            // a = O(p^{ka}): a*b = O(p^{ka + vb}); both zero: O(p^{ka+kb})
            long bound;
            if (a.zero_ && b.zero_)
                bound = sat_add(a.k_, b.k_);
            else if (a.zero_)
                bound = sat_add(a.k_, b.val_);
            else
                bound = sat_add(b.k_, a.val_);
            return PadicScalar(p, static_cast<int>(std::min<long>(bound, std::numeric_limits<int>::max())));
        }
        int k = static_cast<int>(std::min<long>(sat_add(a.k_, b.val_), sat_add(b.k_, a.val_)));
        long v = a.val_ + b.val_;
        if (v >= k) return PadicScalar(p, k);
        mpz_class mod = mpz_pow(mpz_class(p), static_cast<unsigned long>(k - v));
        return make(p, k, v, mod_reduce(a.unit_ * b.unit_, mod));
    }
    PadicScalar& operator+=(const PadicScalar& b) { return *this = *this + b; }
    PadicScalar& operator-=(const PadicScalar& b) { return *this = *this - b; }
    PadicScalar& operator*=(const PadicScalar& b) { return *this = *this * b; }

    /// Equality as certified congruence at the shared precision.
    friend bool operator==(const PadicScalar& a, const PadicScalar& b) { return (a - b).is_zero(); }
    friend bool operator!=(const PadicScalar& a, const PadicScalar& b) { return !(a == b); }

    PadicScalar inverse() const {
        if (zero_) throw std::invalid_argument("PadicScalar: inverse of zero");
        int rel = k_ - static_cast<int>(val_);  // known digits of the unit
        if (rel <= 0) throw precision_exhausted("PadicScalar: no digits available for inverse");
        mpz_class mod = mpz_pow(mpz_class(p_), static_cast<unsigned long>(rel));
        mpz_class inv;
        if (mpz_invert(inv.get_mpz_t(), unit_.get_mpz_t(), mod.get_mpz_t()) == 0)
            throw std::logic_error("PadicScalar: unit not invertible");
        return make(p_, rel - static_cast<int>(val_), -val_, inv);
    }

    PadicScalar pow(unsigned long e) const {
        PadicScalar r = make_from_rational(1), base = *this;
        while (e > 0) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    /// The square root congruent to 1 mod p, by Newton iteration (pre: value = 1 mod p).
    PadicScalar sqrt_branch() const {
        if (zero_ || val_ != 0 || mod_reduce(unit_, p_) != 1)
            throw std::invalid_argument("PadicScalar: sqrt branch needs a value = 1 mod p");
        int rel = k_;
        mpz_class pp(p_);
        mpz_class a = mod_reduce(unit_, mpz_pow(pp, static_cast<unsigned long>(rel)));
        mpz_class y = 1;
        int digits = 1;  // y^2 = a mod p^1
        while (digits < rel) {
            digits = std::min(2 * digits, rel);
            mpz_class mod = mpz_pow(pp, static_cast<unsigned long>(digits));
            mpz_class yinv;
            mpz_invert(yinv.get_mpz_t(), y.get_mpz_t(), mod.get_mpz_t());
            mpz_class two_inv;
            mpz_class two(2);
            mpz_invert(two_inv.get_mpz_t(), two.get_mpz_t(), mod.get_mpz_t());
            y = mod_reduce((y + mod_reduce(a, mod) * yinv) * two_inv, mod);
        }
        return make(p_, k_, 0, y);
    }

    /// delta(a) = (a - a^p)/p, the p-derivation of the identity Frobenius lift
    /// on Z_p; exact by Fermat, known to one digit less.
    PadicScalar fermat_quotient() const {
        if (!zero_ && val_ < 0)
            throw std::invalid_argument("PadicScalar: fermat quotient needs val >= 0");
        PadicScalar num = *this - pow(static_cast<unsigned long>(p_));
        return num.div_by_p(1);
    }

    /// Exact division by p^m; verifies val >= m and costs m digits.
    PadicScalar div_by_p(long m) const {
        if (zero_) {
            if (k_ < m) throw precision_exhausted("PadicScalar: div_by_p on exhausted zero");
            return PadicScalar(p_, static_cast<int>(k_ - m));
        }
        if (val_ < m) throw std::invalid_argument("PadicScalar: value not divisible by p^m");
        PadicScalar r = *this;
        r.val_ -= m;
        r.k_ -= static_cast<int>(m);
        return r;
    }

    PadicScalar at_precision(int k) const {
        if (k > k_) throw precision_exhausted("PadicScalar: cannot raise precision");
        PadicScalar r = *this;
        r.k_ = k;
        if (!r.zero_) {
            if (r.val_ >= k) return PadicScalar(p_, k);
            r.unit_ = mod_reduce(r.unit_, mpz_pow(mpz_class(p_), static_cast<unsigned long>(k - r.val_)));
            if (r.unit_ == 0) return PadicScalar(p_, k);
        }
        return r;
    }

    PadicScalar make_from_rational(const mpq_class& a) const {
        if (p_ == 0) throw std::invalid_argument("PadicScalar: context-free scalar cannot build values");
        return from_mpq(p_, k_, a);
    }
    PadicScalar make_zero() const { return p_ == 0 ? PadicScalar() : PadicScalar(p_, k_); }

    std::string str() const {
        std::ostringstream os;
        if (zero_)
            os << "O(" << p_ << "^" << k_ << ")";
        else
            os << unit_.get_str() << "*" << p_ << "^" << val_ << " + O(" << p_ << "^" << k_ << ")";
        return os.str();
    }

private:
    static void check_p(long p) {
        if (!is_odd_prime(p)) throw std::invalid_argument("PadicScalar: p must be an odd prime");
    }
    static mpz_class mod_reduce(const mpz_class& a, const mpz_class& mod) {
        mpz_class r = a % mod;
        if (r < 0) r += mod;
        return r;
    }
    static long sat_add(long a, long b) {
        if (a >= std::numeric_limits<int>::max() || b >= std::numeric_limits<int>::max())
            return std::numeric_limits<int>::max();
        return a + b;
    }
    static std::pair<long, int> merge_ctx(const PadicScalar& a, const PadicScalar& b) {
        long p = a.p_ ? a.p_ : b.p_;
        if (a.p_ && b.p_ && a.p_ != b.p_) throw std::invalid_argument("PadicScalar: mixed primes");
        if (p == 0) throw std::invalid_argument("PadicScalar: operation on context-free zeros");
        return {p, std::min(a.k_, b.k_)};
    }
    static PadicScalar make(long p, int k, long v, mpz_class unit) {
        PadicScalar r(p, k);
        if (unit == 0 || v >= k) return r;
        // normalize: strip p-factors the modular reduction may have exposed
        mpz_class pp(p);
        long extra = mpz_val_p(unit, pp);
        if (extra > 0) {
            mpz_class rem;
            mpz_remove(rem.get_mpz_t(), unit.get_mpz_t(), pp.get_mpz_t());
            unit = rem;
            v += extra;
            if (v >= k) return r;
            unit = mod_reduce(unit, mpz_pow(pp, static_cast<unsigned long>(k - v)));
            if (unit == 0) return r;
        }
        r.zero_ = false;
        r.val_ = v;
        r.unit_ = std::move(unit);
        return r;
    }
    static mpz_class mod_reduce(const mpz_class& a, long mod) { return mod_reduce(a, mpz_class(mod)); }

    long p_;
    int k_;
    bool zero_;
    long val_;
    mpz_class unit_;
};

}  // namespace frobcurv
